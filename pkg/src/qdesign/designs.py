"""Subspace designs: verification and block-level constructions."""

from __future__ import annotations

import enum
import os
import random
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable

from . import params as P
from .gfq import (
    AmbientMismatch,
    Field,
    QuotientMap,
    Subspace,
    coefficient_patterns,
    contains,
    enumerate_subspaces,
    field_make,
    intersection,
    orthogonal_complement,
    random_subspace,
    random_subspace_of,
    recoordinatize,
    rref_rows,
    span_table,
    unit_vector,
)
from .params import ParameterSet


class DesignError(ValueError):
    pass


class BadDim(DesignError):
    pass


class ParamMismatch(DesignError):
    pass


class InconsistentCounts(DesignError):
    pass


class Status(enum.Enum):
    UNVERIFIED = "unverified"
    VERIFIED = "verified"
    FAILED = "failed"


# below this many blocks verification stays in-process
PARALLEL_THRESHOLD = 4000


def default_workers() -> int:
    env = os.environ.get("QDESIGN_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


class Design:
    """A parameter set together with a set of k-subspace blocks of GF(q)^v."""

    def __init__(self, params: ParameterSet, blocks: Iterable[Subspace], status: Status = Status.UNVERIFIED):
        self.params = params
        self.field = field_make(params.q)
        self.blocks = frozenset(blocks)
        self.status = status
        for b in self.blocks:
            if b.dim != params.k or b.v != params.v or b.field.q != params.q:
                raise BadDim(f"block {b.to_text()} is not a {params.k}-subspace of GF({params.q})^{params.v}")

    @property
    def v(self) -> int:
        return self.params.v

    def __len__(self):
        return len(self.blocks)

    def __repr__(self):
        return f"Design({self.params}, {len(self.blocks)} blocks, {self.status.value})"

    def sorted_blocks(self) -> list[Subspace]:
        return sorted(self.blocks, key=lambda b: b.rows)

    def with_params(self, params: ParameterSet) -> "Design":
        return Design(params, self.blocks)


def complete_design(t: int, v: int, k: int, q: int) -> Design:
    field = field_make(q)
    return Design(ParameterSet.complete(t, v, k, q), enumerate_subspaces(v, k, field))


# verification


@dataclass
class VerifyReport:
    ok: bool
    params: str
    blocks: int
    checked_t_subspaces: int
    expected_t_subspaces: int
    min_count: int
    max_count: int
    first_violation: tuple[str, int] | None = None

    def as_dict(self) -> dict:
        return {
            "ok": self.ok,
            "params": self.params,
            "blocks": self.blocks,
            "checked_t_subspaces": self.checked_t_subspaces,
            "expected_t_subspaces": self.expected_t_subspaces,
            "min_count": self.min_count,
            "max_count": self.max_count,
            "first_violation": list(self.first_violation) if self.first_violation else None,
        }


def _incidence_counts(q: int, v: int, t: int, block_rows: list[tuple[int, ...]]) -> Counter:
    field = field_make(q)
    counter: Counter = Counter()
    if not block_rows:
        return counter
    pats = coefficient_patterns(len(block_rows[0]), t, q)
    for rows in block_rows:
        table = span_table(rows, field, v)
        counter.update(tuple(table[i] for i in pat) for pat in pats)
    return counter


def incidence_counts(d: Design, workers: int | None = None) -> Counter:
    """t-subspace key -> number of blocks containing it (keys with count 0 absent)."""
    p = d.params
    rows = [b.rows for b in d.sorted_blocks()]
    workers = default_workers() if workers is None else workers
    if workers <= 1 or len(rows) < PARALLEL_THRESHOLD:
        return _incidence_counts(p.q, p.v, p.t, rows)
    size = -(-len(rows) // workers)
    chunks = [rows[i : i + size] for i in range(0, len(rows), size)]
    total: Counter = Counter()
    with ProcessPoolExecutor(max_workers=workers) as ex:
        for part in ex.map(_incidence_counts, *zip(*[(p.q, p.v, p.t, c) for c in chunks])):
            total.update(part)
    return total


def verify(d: Design, workers: int | None = None) -> VerifyReport:
    """Check that every t-subspace lies in exactly lambda blocks; sets ``d.status``."""
    p = d.params
    expected = P.gauss(p.v, p.t, p.q)
    counts = incidence_counts(d, workers)
    values = counts.values()
    lo = min(values, default=0)
    hi = max(values, default=0)
    if len(counts) < expected:
        lo = 0
    ok = len(counts) == expected and lo == hi == p.lam
    violation = None
    if not ok:
        bad = sorted(key for key, c in counts.items() if c != p.lam)
        if bad:
            violation = (Subspace(d.field, p.v, bad[0]), counts[bad[0]])
        else:
            missing = next(s for s in enumerate_subspaces(p.v, p.t, d.field) if s.rows not in counts)
            violation = (missing, 0)
        violation = (violation[0].to_text(), violation[1])
    d.status = Status.VERIFIED if ok else Status.FAILED
    return VerifyReport(ok, str(p), len(d.blocks), len(counts), expected, lo, hi, violation)


# constructions


def _one_dim(u: Subspace, d: Design) -> None:
    if u.dim != 1:
        raise BadDim(f"expected a 1-subspace, got dimension {u.dim}")
    if u.v != d.v or u.field.q != d.params.q:
        raise AmbientMismatch("point does not live in the design's ambient space")


def _hyperplane(h: Subspace, d: Design) -> None:
    if h.dim != d.v - 1:
        raise BadDim(f"expected a hyperplane of dimension {d.v - 1}, got {h.dim}")
    if h.v != d.v or h.field.q != d.params.q:
        raise AmbientMismatch("hyperplane does not live in the design's ambient space")


def first_point(field: Field, v: int) -> Subspace:
    return Subspace(field, v, (unit_vector(field, v, 0),))


def first_hyperplane(field: Field, v: int) -> Subspace:
    """The hyperplane x_0 = 0, i.e. the dual of <e_0>."""
    return Subspace(field, v, tuple(unit_vector(field, v, j) for j in range(1, v)))


def derived(d: Design, u: Subspace) -> Design:
    _one_dim(u, d)
    newp = P.derived_params(d.params)
    qm = QuotientMap(d.v, u)
    return Design(newp, (qm.push(b) for b in d.blocks if contains(b, u)))


def residual(d: Design, h: Subspace) -> Design:
    _hyperplane(h, d)
    newp = P.residual_params(d.params)
    return Design(newp, (recoordinatize(b, h) for b in d.blocks if contains(h, b)))


def dual(d: Design) -> Design:
    newp = P.dual_params(d.params)
    return Design(newp, (orthogonal_complement(b) for b in d.blocks))


def reduce(d: Design) -> Design:
    return Design(P.reduced_params(d.params), d.blocks)


def mu_ij(d: Design, i: int, j: int, trials: int = 20, rng: random.Random | None = None) -> int:
    """Blocks between a random i-subspace I and a random codimension-j subspace J >= I."""
    p = d.params
    if i < 0 or j < 0 or i + j > p.t:
        raise P.SOutOfRange(f"need i, j >= 0 and i + j <= t, got i={i}, j={j}")
    rng = rng or random.Random(0)
    seen = set()
    for _ in range(trials):
        J = random_subspace(p.v, p.v - j, d.field, rng)
        I = random_subspace_of(J, i, rng)
        seen.add(sum(1 for b in d.blocks if contains(b, I) and contains(J, b)))
    if len(seen) != 1:
        raise InconsistentCounts(f"block counts between I and J vary: {sorted(seen)}")
    value = seen.pop()
    closed = P.mu_ij_params(p, i, j)
    if closed != value:
        raise InconsistentCounts(f"observed {value} but the parameter maps give {closed}")
    return value


def combine(der_d: Design, res_d: Design, target: ParameterSet) -> Design:
    """Glue a derived-parameter and a residual-parameter design into one design on GF(q)^(v).

    With phi dropping the first coordinate (kernel U = <e_0>): blocks phi^-1(B)
    for B in ``der_d`` together with every complement of U in phi^-1(B) for B
    in ``res_d``.  The result has the reduced parameters of ``target``.
    """
    want_der = P.derived_params(target)
    want_res = P.residual_params(target)
    if der_d.params != want_der:
        raise ParamMismatch(f"derived ingredient is {der_d.params}, target needs {want_der}")
    if res_d.params != want_res:
        raise ParamMismatch(f"residual ingredient is {res_d.params}, target needs {want_res}")
    out_params = P.reduced_params(target)
    field = field_make(target.q)
    v, k, q = target.v, target.k, target.q
    e0 = unit_vector(field, v, 0)

    b1 = {Subspace(field, v, (e0,) + b.rows) for b in der_d.blocks}
    b2 = set()
    for b in res_d.blocks:
        rows = b.rows
        for code in range(q**k):
            lifted = []
            c = code
            for r in reversed(rows):
                c, a = divmod(c, q)
                lifted.append(r + a * e0)
            b2.add(Subspace(field, v, rref_rows(lifted, field, v)))
    assert len(b1) == len(der_d.blocks)
    assert len(b2) == q**k * len(res_d.blocks)
    assert b1.isdisjoint(b2)
    return Design(out_params, b1 | b2)


@dataclass
class ObstructionReport:
    pairs: int
    min_intersection_dim: int | None
    holds: bool
    blocks_sharing_hyperplane: bool

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def intersection_obstruction(d: Design, u: Subspace) -> ObstructionReport:
    """Pairs of blocks avoiding u with the same image in V/u meet in dimension >= k-1.

    ``blocks_sharing_hyperplane`` is set when some such pair exists with
    k - 1 >= 1; then two blocks share a (k-1)-subspace, so the design cannot be
    a Steiner system t'-(v,k,1) for any 1 <= t' <= k-1.
    """
    _one_dim(u, d)
    k = d.params.k
    qm = QuotientMap(d.v, u)
    groups: dict = {}
    for b in d.sorted_blocks():
        if not contains(b, u):
            groups.setdefault(qm.project(b).rows, []).append(b)
    pairs = 0
    lo = None
    for members in groups.values():
        for a_i in range(len(members)):
            for b_i in range(a_i + 1, len(members)):
                dim = intersection(members[a_i], members[b_i]).dim
                pairs += 1
                lo = dim if lo is None else min(lo, dim)
    holds = lo is None or lo >= k - 1
    return ObstructionReport(pairs, lo, holds, pairs > 0 and k - 1 >= 1)


def steiner_violation(d: Design, t: int) -> bool:
    """True if two distinct blocks share a t-subspace (so d is no t-(v,k,1) design)."""
    seen = set()
    for b in d.sorted_blocks():
        for key in _incidence_counts(d.params.q, d.v, t, [b.rows]):
            if key in seen:
                return True
            seen.add(key)
    return False
