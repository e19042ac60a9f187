"""Large sets LS_q[N](t,k,v): partitions of the Grassmannian into N designs."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from . import designs as D
from . import params as P
from .gfq import Subspace
from .params import ParameterSet


class LargeSetError(ValueError):
    pass


class NMismatch(LargeSetError):
    pass


def member_lambda(t: int, k: int, v: int, q: int, n: int) -> int:
    total = P.gauss(v - t, k - t, q)
    if total % n:
        raise LargeSetError(f"N={n} does not divide [{v - t} {k - t}]_{q} = {total}")
    return total // n


class LargeSet:
    def __init__(self, n: int, member_params: ParameterSet, members: Sequence[D.Design]):
        p = member_params
        if n < 1:
            raise LargeSetError("N must be >= 1")
        if member_lambda(p.t, p.k, p.v, p.q, n) != p.lam:
            raise LargeSetError(f"members of LS[{n}] need lambda {member_lambda(p.t, p.k, p.v, p.q, n)}, got {p.lam}")
        if len(members) != n:
            raise LargeSetError(f"expected {n} members, got {len(members)}")
        for m in members:
            if m.params != p:
                raise P.InvalidParameters(f"member has parameters {m.params}, expected {p}")
        self.n = n
        self.member_params = p
        self.members = list(members)

    def __repr__(self):
        p = self.member_params
        return f"LargeSet(LS_{p.q}[{self.n}]({p.t},{p.k},{p.v}))"

    @property
    def label(self) -> str:
        p = self.member_params
        return f"LS_{p.q}[{self.n}]({p.t},{p.k},{p.v})"


@dataclass
class LargeSetReport:
    ok: bool
    label: str
    disjoint: bool
    total_blocks: int
    expected_blocks: int
    members: list[D.VerifyReport] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "ok": self.ok,
            "label": self.label,
            "disjoint": self.disjoint,
            "total_blocks": self.total_blocks,
            "expected_blocks": self.expected_blocks,
            "members": [m.as_dict() for m in self.members],
        }


def verify_ls(ls: LargeSet, workers: int | None = None) -> LargeSetReport:
    p = ls.member_params
    seen: set[Subspace] = set()
    disjoint = True
    total = 0
    for m in ls.members:
        total += len(m.blocks)
        if disjoint and not seen.isdisjoint(m.blocks):
            disjoint = False
        seen |= m.blocks
    expected = P.gauss(p.v, p.k, p.q)
    reports = [D.verify(m, workers) for m in ls.members]
    ok = disjoint and total == expected and len(seen) == expected and all(r.ok for r in reports)
    return LargeSetReport(ok, ls.label, disjoint, total, expected, reports)


def _rebuild(members: list[D.Design], n: int) -> LargeSet:
    return LargeSet(n, members[0].params, members)


def dual_ls(ls: LargeSet) -> LargeSet:
    return _rebuild([D.dual(m) for m in ls.members], ls.n)


def derived_ls(ls: LargeSet, u: Subspace) -> LargeSet:
    return _rebuild([D.derived(m, u) for m in ls.members], ls.n)


def residual_ls(ls: LargeSet, h: Subspace) -> LargeSet:
    return _rebuild([D.residual(m, h) for m in ls.members], ls.n)


def combine_ls(
    der_ls: LargeSet,
    res_ls: LargeSet,
    target: ParameterSet | None = None,
    pairing: Sequence[int] | None = None,
) -> LargeSet:
    """Combine member i of ``der_ls`` with member ``pairing[i]`` of ``res_ls``.

    ``target`` is the parameter set whose derived and residual maps give the
    ingredient member parameters; by default it is read off ``der_ls``.
    """
    if der_ls.n != res_ls.n:
        raise NMismatch(f"N differs: {der_ls.n} vs {res_ls.n}")
    if target is None:
        dp = der_ls.member_params
        target = ParameterSet(dp.t + 1, dp.v + 1, dp.k + 1, dp.lam, dp.q)
    if pairing is None:
        pairing = range(der_ls.n)
    pairing = list(pairing)
    if sorted(pairing) != list(range(der_ls.n)):
        raise LargeSetError(f"pairing {pairing} is not a permutation of 0..{der_ls.n - 1}")
    members = [D.combine(der_ls.members[i], res_ls.members[j], target) for i, j in enumerate(pairing)]
    out = _rebuild(members, der_ls.n)
    union: set = set()
    for m in members:
        assert union.isdisjoint(m.blocks)
        union |= m.blocks
    assert len(union) == P.gauss(target.v, target.k, target.q)
    return out


def trivial_ls(t: int, v: int, k: int, q: int) -> LargeSet:
    """LS_q[1](t,k,v): the complete design on its own."""
    d = D.complete_design(t, v, k, q)
    return LargeSet(1, d.params, [d])
