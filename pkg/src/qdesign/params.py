"""Exact parameter arithmetic for subspace designs t-(v,k,lambda)_q."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .gfq import is_prime_power, prime_powers


class ParamError(ValueError):
    pass


class InvalidParameters(ParamError):
    pass


class SOutOfRange(ParamError):
    pass


class TZero(ParamError):
    pass


class NonIntegralMu(ParamError):
    pass


class NonIntegralDual(ParamError):
    pass


class NonIntegralLambda(ParamError):
    pass


@lru_cache(maxsize=4096)
def gauss(v: int, k: int, q: int) -> int:
    """Gaussian binomial coefficient [v choose k]_q, exactly."""
    if q < 2:
        raise ValueError("gauss needs q >= 2")
    if k < 0 or k > v:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (v - i) - 1
        den *= q ** (i + 1) - 1
    out, rem = divmod(num, den)
    assert rem == 0
    return out


_PARAM_RE = re.compile(
    r"^\s*(\d+)\s*-\s*\(\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\)\s*_?\s*(\d+)\s*$"
)


@dataclass(frozen=True, order=True)
class ParameterSet:
    t: int
    v: int
    k: int
    lam: int
    q: int

    def __post_init__(self):
        if not is_prime_power(self.q):
            raise InvalidParameters(f"q={self.q} is not a prime power")
        if not 0 <= self.t <= self.k <= self.v:
            raise InvalidParameters(f"need 0 <= t <= k <= v, got {self}")
        if self.lam < 1:
            raise InvalidParameters(f"lambda must be >= 1, got {self.lam}")
        top = gauss(self.v - self.t, self.k - self.t, self.q)
        if self.lam > top:
            raise InvalidParameters(f"lambda={self.lam} exceeds the complete design's {top}")

    def __str__(self):
        return f"{self.t}-({self.v},{self.k},{self.lam})_{self.q}"

    @classmethod
    def parse(cls, text: str) -> "ParameterSet":
        m = _PARAM_RE.match(text)
        if not m:
            raise InvalidParameters(f"cannot parse parameter set {text!r}, expected t-(v,k,lambda)_q")
        return cls(*map(int, m.groups()))

    @classmethod
    def complete(cls, t: int, v: int, k: int, q: int) -> "ParameterSet":
        return cls(t, v, k, gauss(v - t, k - t, q), q)

    def as_dict(self) -> dict:
        return {"t": self.t, "v": self.v, "k": self.k, "lambda": self.lam, "q": self.q}


@dataclass
class ParamReport:
    params: ParameterSet
    admissible: bool
    lambda_s: list[Fraction]
    failing_s: int | None = None
    mapped: dict[str, str] = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "params": str(self.params),
            "admissible": self.admissible,
            "lambda_s": [str(x) for x in self.lambda_s],
            "failing_s": self.failing_s,
            "mapped": self.mapped,
        }


def _lambda_s_raw(t, v, k, lam, q, s) -> Fraction:
    a = Fraction(lam * gauss(v - s, t - s, q), gauss(k - s, t - s, q))
    b = Fraction(lam * gauss(v - s, k - s, q), gauss(v - t, k - t, q))
    assert a == b, (t, v, k, lam, q, s)
    return a


def lambda_s(p: ParameterSet, s: int) -> Fraction:
    """Number of blocks through an s-subspace, for 0 <= s <= t."""
    if not 0 <= s <= p.t:
        raise SOutOfRange(f"s={s} outside 0..{p.t}")
    return _lambda_s_raw(p.t, p.v, p.k, p.lam, p.q, s)


def block_count(p: ParameterSet) -> Fraction:
    return lambda_s(p, 0)


def is_admissible(p: ParameterSet) -> ParamReport:
    values = [lambda_s(p, s) for s in range(p.t + 1)]
    failing = next((s for s, x in enumerate(values) if x.denominator != 1), None)
    return ParamReport(p, failing is None, values, failing)


def admissible_prime_powers(t: int, v: int, k: int, lam: int, qmax: int = 101) -> list[int]:
    """Prime powers q <= qmax for which t-(v,k,lam)_q is admissible."""
    out = []
    for q in prime_powers(qmax):
        if lam > gauss(v - t, k - t, q):
            continue
        if all(_lambda_s_raw(t, v, k, lam, q, s).denominator == 1 for s in range(t + 1)):
            out.append(q)
    return out


def mu(p: ParameterSet) -> Fraction:
    """lambda * (q^(v-k) - 1) / (q^(k-t+1) - 1); also equals (lambda_{t-1} - lambda) / q^(k-t+1)."""
    if p.t == 0:
        raise TZero("residual parameters need t >= 1")
    q = p.q
    a = Fraction(p.lam * (q ** (p.v - p.k) - 1), q ** (p.k - p.t + 1) - 1)
    b = (lambda_s(p, p.t - 1) - p.lam) / q ** (p.k - p.t + 1)
    assert a == b
    return a


def derived_params(p: ParameterSet) -> ParameterSet:
    if p.t == 0:
        raise TZero("derived parameters need t >= 1")
    return ParameterSet(p.t - 1, p.v - 1, p.k - 1, p.lam, p.q)


def residual_params(p: ParameterSet) -> ParameterSet:
    m = mu(p)
    if m.denominator != 1:
        raise NonIntegralMu(f"mu = {m} is not an integer for {p}")
    if m == 0:
        raise InvalidParameters(f"residual of {p} would have lambda 0")
    return ParameterSet(p.t - 1, p.v - 1, p.k, int(m), p.q)


def reduced_params(p: ParameterSet) -> ParameterSet:
    if p.t == 0:
        raise TZero("reduced parameters need t >= 1")
    lr = lambda_s(p, p.t - 1)
    if lr.denominator != 1:
        raise NonIntegralLambda(f"lambda_{p.t - 1} = {lr} is not an integer for {p}")
    return ParameterSet(p.t - 1, p.v, p.k, int(lr), p.q)


def dual_params(p: ParameterSet) -> ParameterSet:
    if p.t > p.v - p.k:
        raise InvalidParameters(f"dual of {p} would need t <= v - k")
    num = p.lam * gauss(p.v - p.k, p.t, p.q)
    den = gauss(p.k, p.t, p.q)
    if den == 0 or num % den:
        raise NonIntegralDual(f"dual lambda {num}/{den} is not an integer for {p}")
    return ParameterSet(p.t, p.v, p.v - p.k, num // den, p.q)


def lambda_red(p: ParameterSet) -> Fraction:
    """lambda of the combined design: lambda (q^(v-t+1) - 1) / (q^(k-t+1) - 1)."""
    if p.t == 0:
        raise TZero("need t >= 1")
    q = p.q
    return Fraction(p.lam * (q ** (p.v - p.t + 1) - 1), q ** (p.k - p.t + 1) - 1)


def delta_rho(p: ParameterSet, s: int) -> tuple[Fraction, Fraction]:
    """lambda_s of the derived and residual parameter sets, as exact rationals.

    Computed from the raw formulas so that non-integral mu does not matter.
    """
    if p.t == 0:
        raise TZero("need t >= 1")
    if not 0 <= s <= p.t - 1:
        raise SOutOfRange(f"s={s} outside 0..{p.t - 1}")
    den = gauss(p.v - p.t, p.k - p.t, p.q)
    delta = Fraction(p.lam * gauss(p.v - s - 1, p.k - s - 1, p.q), den)
    rho = Fraction(p.lam * gauss(p.v - s - 1, p.k - s, p.q), den)
    return delta, rho


def check_lambda_identity(p: ParameterSet, s: int) -> bool:
    """lambda_s = delta_s + q^(k-s) rho_s = q^(v-k) delta_s + rho_s."""
    if p.t == 0:
        raise TZero("need t >= 1")
    ls = lambda_s(p, s)
    delta, rho = delta_rho(p, s)
    # where the parameter maps are defined they must give the same numbers
    if delta != _lambda_s_raw(p.t - 1, p.v - 1, p.k - 1, p.lam, p.q, s):
        return False
    if p.v > p.k and rho != _lambda_s_raw(p.t - 1, p.v - 1, p.k, mu(p), p.q, s):
        return False
    q = p.q
    return ls == delta + q ** (p.k - s) * rho and ls == q ** (p.v - p.k) * delta + rho


def mu_ij_params(p: ParameterSet, i: int, j: int, residual_first: bool = False) -> int:
    """#{B : I <= B <= J} for dim I = i, codim J = j, via repeated parameter maps."""
    if i < 0 or j < 0 or i + j > p.t:
        raise SOutOfRange(f"need i, j >= 0 and i + j <= t, got i={i}, j={j}")
    cur = p
    steps = ["res"] * j + ["red"] * (p.t - i - j)
    if not residual_first:
        steps.reverse()
    for step in steps:
        cur = residual_params(cur) if step == "res" else reduced_params(cur)
    return cur.lam


def parameter_report(p: ParameterSet) -> ParamReport:
    """Admissibility plus every parameter map that is defined for p."""
    rep = is_admissible(p)
    for name, fn in (
        ("derived", derived_params),
        ("residual", residual_params),
        ("reduced", reduced_params),
        ("dual", dual_params),
    ):
        try:
            rep.mapped[name] = str(fn(p))
        except ParamError as exc:
            rep.mapped[name] = f"undefined ({exc})"
    return rep
