"""Kramer-Mesner search for designs with a prescribed group of automorphisms.

A group G acting on GF(q)^v splits the t- and k-subspaces into orbits.  A
union of k-orbits is a t-(v,k,lambda) design iff the orbit incidence matrix A
(A[i][j] = blocks of k-orbit j through a fixed representative of t-orbit i)
satisfies A x = lambda 1 for the 0/1 selection vector x.
"""

from __future__ import annotations

import sys
from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from . import designs as D
from . import params as P
from .gfq import Field, Subspace, enumerate_subspaces, field_make, rref_rows, superspaces
from .largesets import LargeSet
from .params import ParameterSet

# lower coefficients c_0 + c_1 x + ... of the primitive polynomial of degree n
# with the least value at x = q (monic leading term implied)
PRIMITIVE_POLYS: dict[int, dict[int, tuple[int, ...]]] = {
    2: {
        1: (1,),
        2: (1, 1),
        3: (1, 1, 0),
        4: (1, 1, 0, 0),
        5: (1, 0, 1, 0, 0),
        6: (1, 1, 0, 0, 0, 0),
        7: (1, 1, 0, 0, 0, 0, 0),
        8: (1, 0, 1, 1, 1, 0, 0, 0),
        9: (1, 0, 0, 0, 1, 0, 0, 0, 0),
        10: (1, 0, 0, 1, 0, 0, 0, 0, 0, 0),
        11: (1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0),
        12: (1, 1, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0),
        13: (1, 1, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0),
        14: (1, 1, 0, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0),
        15: (1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0),
        16: (1, 0, 1, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0),
    },
    3: {
        1: (1,),
        2: (2, 1),
        3: (1, 2, 0),
        4: (2, 1, 0, 0),
        5: (1, 2, 0, 0, 0),
        6: (2, 1, 0, 0, 0, 0),
        7: (1, 2, 1, 0, 0, 0, 0),
        8: (2, 0, 0, 1, 0, 0, 0, 0),
    },
}


class SearchError(ValueError):
    pass


class NoPrimitivePolyTable(SearchError):
    pass


# matrices are tuples of packed rows; row i is the image of e_i, vectors act on the left


def apply_vector(x: int, m: Sequence[int], field: Field, v: int) -> int:
    if field.q == 2:
        out = 0
        for i in range(v):
            if x >> (v - 1 - i) & 1:
                out ^= m[i]
        return out
    xd = field.unpack(x, v)
    out = [0] * v
    for c, row in zip(xd, m):
        if c:
            rd = field.unpack(row, v)
            out = [field.add(a, field.mul(c, b)) for a, b in zip(out, rd)]
    return field.pack(out)


def apply_subspace(s: Subspace, m: Sequence[int]) -> Subspace:
    rows = [apply_vector(r, m, s.field, s.v) for r in s.rows]
    return Subspace(s.field, s.v, rref_rows(rows, s.field, s.v))


def mat_mul(a: Sequence[int], b: Sequence[int], field: Field, v: int) -> tuple[int, ...]:
    return tuple(apply_vector(r, b, field, v) for r in a)


def identity(field: Field, v: int) -> tuple[int, ...]:
    return tuple(field.q ** (v - 1 - i) for i in range(v))


def _projective_normal(m: tuple[int, ...], field: Field, v: int) -> tuple[int, ...]:
    if field.q == 2:
        return m
    first = next(c for c in field.unpack(m[0], v) if c)
    if first == 1:
        return m
    c = field.inv(first)
    return tuple(field.pack([field.mul(c, x) for x in field.unpack(r, v)]) for r in m)


def _poly_rows(poly_digits: list[list[int]], field: Field, v: int) -> tuple[int, ...]:
    # coordinate j <-> coefficient of x^j
    return tuple(field.pack(d) for d in poly_digits)


class MatrixGroup:
    """Group generated by invertible v x v matrices over GF(q)."""

    def __init__(self, field: Field, v: int, generators: Sequence[Sequence[int]], name: str = ""):
        self.field = field
        self.v = v
        self.generators = [tuple(g) for g in generators]
        self.name = name
        for g in self.generators:
            if len(g) != v or Subspace(field, v, rref_rows(g, field, v)).dim != v:
                raise SearchError("generator is not an invertible v x v matrix")
        self._order: int | None = None

    def __repr__(self):
        return f"MatrixGroup({self.name or 'unnamed'}, v={self.v}, q={self.field.q}, gens={len(self.generators)})"

    @property
    def projective_order(self) -> int:
        """Order of the image in PGL(v, q), by closure enumeration."""
        if self._order is None:
            f, v = self.field, self.v
            start = _projective_normal(identity(f, v), f, v)
            seen = {start}
            queue = deque([start])
            while queue:
                m = queue.popleft()
                for g in self.generators:
                    n = _projective_normal(mat_mul(m, g, f, v), f, v)
                    if n not in seen:
                        seen.add(n)
                        queue.append(n)
            self._order = len(seen)
        return self._order

    def element_order(self, g: Sequence[int]) -> int:
        f, v = self.field, self.v
        one = identity(f, v)
        m, n = tuple(g), 1
        while m != one:
            m = mat_mul(m, g, f, v)
            n += 1
        return n


def primitive_poly(v: int, q: int) -> tuple[int, ...]:
    try:
        return PRIMITIVE_POLYS[q][v]
    except KeyError:
        raise NoPrimitivePolyTable(f"no primitive polynomial of degree {v} over GF({q}) in the table") from None


def _xpow_mod(e: int, f: Sequence[int], field: Field) -> list[int]:
    # x^e modulo the monic polynomial x^n + f, over the prime field GF(q)
    n = len(f)
    result = [1] + [0] * (n - 1)
    for _ in range(e):
        top = result[-1]
        result = [0] + result[:-1]
        if top:
            result = [field.sub(a, field.mul(top, c)) for a, c in zip(result, f)]
    return result


def singer_group(v: int, field: Field, with_frobenius: bool = False) -> MatrixGroup:
    """Companion matrix of the tabulated primitive polynomial (a Singer cycle).

    With ``with_frobenius`` the matrix of x -> x^q on GF(q)[x]/(f) is added,
    giving the normalizer of order v (q^v - 1) / (q - 1) in PGL.
    """
    if field.e != 1:
        raise NoPrimitivePolyTable("Singer groups are tabulated for prime q only")
    c = primitive_poly(v, field.q)
    rows = []
    for i in range(v - 1):
        d = [0] * v
        d[i + 1] = 1
        rows.append(d)
    rows.append([field.neg(x) for x in c])
    gens = [_poly_rows(rows, field, v)]
    if with_frobenius:
        gens.append(_poly_rows([_xpow_mod(field.q * i, c, field) for i in range(v)], field, v))
    g = MatrixGroup(field, v, gens, "singer-normalizer" if with_frobenius else "singer")
    return g


def trivial_group(v: int, field: Field) -> MatrixGroup:
    return MatrixGroup(field, v, [], "trivial")


def make_group(name: str, v: int, field: Field) -> MatrixGroup:
    if name == "trivial":
        return trivial_group(v, field)
    if name == "singer":
        return singer_group(v, field, False)
    if name == "singer-normalizer":
        return singer_group(v, field, True)
    raise SearchError(f"unknown group {name!r}; use trivial, singer or singer-normalizer")


def check_primitive_table() -> list[tuple[int, int]]:
    """(q, n) entries whose companion matrix does not have order q^n - 1."""
    bad = []
    for q, table in PRIMITIVE_POLYS.items():
        field = field_make(q)
        for n, c in table.items():
            # order of x modulo the polynomial
            order = q**n - 1
            one = [1] + [0] * (n - 1)
            ok = _fast_xpow(order, c, field) == one and all(
                _fast_xpow(order // r, c, field) != one for r in _factors(order)
            )
            if not ok:
                bad.append((q, n))
    return bad


def _fast_xpow(e, c, field):
    n = len(c)

    def mulmod(a, b):
        res = [0] * (2 * n)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        res[i + j] = field.add(res[i + j], field.mul(x, y))
        for d in range(2 * n - 1, n - 1, -1):
            top = res[d]
            if top:
                res[d] = 0
                for i in range(n):
                    res[d - n + i] = field.sub(res[d - n + i], field.mul(top, c[i]))
        return res[:n]

    result = [1] + [0] * (n - 1)
    base = [0, 1] + [0] * (n - 2) if n > 1 else [field.neg(c[0])]
    while e:
        if e & 1:
            result = mulmod(result, base)
        base = mulmod(base, base)
        e >>= 1
    return result


def _factors(n):
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# orbits


@dataclass
class Orbit:
    rep: Subspace
    members: tuple[Subspace, ...]

    def __len__(self):
        return len(self.members)


@dataclass
class OrbitPartition:
    d: int
    orbits: list[Orbit]
    index: dict = field(repr=False, default_factory=dict)

    def __len__(self):
        return len(self.orbits)

    def lengths(self) -> list[int]:
        return [len(o) for o in self.orbits]

    def orbit_of(self, s: Subspace) -> int:
        return self.index[s.rows]


def orbits(g: MatrixGroup, d: int) -> OrbitPartition:
    """Orbits of g on d-subspaces, ordered by (lexicographically least) representative."""
    found = []
    seen: set = set()
    for s in enumerate_subspaces(g.v, d, g.field):
        if s.rows in seen:
            continue
        seen.add(s.rows)
        members = [s]
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for m in g.generators:
                y = apply_subspace(x, m)
                if y.rows not in seen:
                    seen.add(y.rows)
                    members.append(y)
                    queue.append(y)
        members.sort(key=lambda b: b.rows)
        found.append(Orbit(members[0], tuple(members)))
    found.sort(key=lambda o: o.rep.rows)
    index = {m.rows: i for i, o in enumerate(found) for m in o.members}
    return OrbitPartition(d, found, index)


@dataclass
class KMInstance:
    params: ParameterSet
    t_orbits: OrbitPartition
    k_orbits: OrbitPartition
    A: list[list[int]]
    group_name: str = ""

    @property
    def lam(self) -> int:
        return self.params.lam

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.A), len(self.A[0]) if self.A else 0


def km_row(t_rep: Subspace, k: int, k_orbits: OrbitPartition) -> list[int]:
    row = [0] * len(k_orbits)
    for sup in superspaces(t_rep, k):
        row[k_orbits.orbit_of(sup)] += 1
    return row


def km_matrix(t_orbits: OrbitPartition, k_orbits: OrbitPartition, lam: int, q: int, group_name: str = "") -> KMInstance:
    rep = t_orbits.orbits[0].rep
    params = ParameterSet(t_orbits.d, rep.v, k_orbits.d, lam, q)
    A = [km_row(o.rep, k_orbits.d, k_orbits) for o in t_orbits.orbits]
    return KMInstance(params, t_orbits, k_orbits, A, group_name)


def build_instance(p: ParameterSet, group: MatrixGroup) -> KMInstance:
    return km_matrix(orbits(group, p.t), orbits(group, p.k), p.lam, p.q, group.name)


# solver


@dataclass
class SolveResult:
    solutions: list[tuple[int, ...]]
    nodes: int
    exhausted: bool

    def __iter__(self):
        return iter(self.solutions)

    def __len__(self):
        return len(self.solutions)

    def __getitem__(self, i):
        return self.solutions[i]


class _Stop(Exception):
    pass


def solve_system(
    A: Sequence[Sequence[int]],
    rhs: int,
    limit: int | None = 1,
    node_limit: int | None = None,
) -> SolveResult:
    """All 0/1 vectors x with A x = rhs * 1, by depth-first include/exclude.

    Columns are visited by descending weight.  A branch is cut when a row sum
    overshoots rhs or when the columns still to come cannot lift some row up
    to rhs.  ``exhausted`` is True iff the whole tree was searched.
    """
    nrows = len(A)
    ncols = len(A[0]) if nrows else 0
    weight = [sum(A[i][j] for i in range(nrows)) for j in range(ncols)]
    order = sorted(range(ncols), key=lambda j: (-weight[j], j))
    cols = [[(i, A[i][j]) for i in range(nrows) if A[i][j]] for j in order]
    suffix = [[0] * nrows for _ in range(ncols + 1)]
    for pos in range(ncols - 1, -1, -1):
        suffix[pos] = list(suffix[pos + 1])
        for i, a in cols[pos]:
            suffix[pos][i] += a
    first_zero = next((pos for pos, j in enumerate(order) if weight[j] == 0), ncols)
    sums = [0] * nrows
    chosen: list[int] = []
    solutions: list[tuple[int, ...]] = []
    nodes = 0
    unmet = [nrows if rhs else 0]

    def dfs(pos: int) -> None:
        nonlocal nodes
        nodes += 1
        if node_limit is not None and nodes > node_limit:
            raise _Stop
        if unmet[0] == 0:
            # only all-zero columns can still be added
            free = [order[p_] for p_ in range(max(pos, first_zero), ncols)]
            for code in range(1 << len(free)):
                x = [0] * ncols
                for p_ in chosen:
                    x[order[p_]] = 1
                for b, j in enumerate(free):
                    x[j] = (code >> b) & 1
                solutions.append(tuple(x))
                if limit is not None and len(solutions) >= limit:
                    raise _Stop
            return
        if pos == ncols:
            return
        rem = suffix[pos]
        for i in range(nrows):
            if sums[i] + rem[i] < rhs:
                return
        col = cols[pos]
        if all(sums[i] + a <= rhs for i, a in col):
            for i, a in col:
                sums[i] += a
                if sums[i] == rhs:
                    unmet[0] -= 1
            chosen.append(pos)
            try:
                dfs(pos + 1)
            finally:
                chosen.pop()
                for i, a in col:
                    if sums[i] == rhs:
                        unmet[0] += 1
                    sums[i] -= a
        dfs(pos + 1)

    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 4 * ncols + 1000))
    exhausted = True
    try:
        dfs(0)
    except _Stop:
        exhausted = False
    finally:
        sys.setrecursionlimit(old)
    for x in solutions:
        for row in A:
            assert sum(a * b for a, b in zip(row, x)) == rhs
    return SolveResult(solutions, nodes, exhausted)


def solve(
    inst: KMInstance,
    all_solutions: bool = False,
    limit: int | None = 1,
    node_limit: int | None = None,
) -> SolveResult:
    return solve_system(inst.A, inst.lam, None if all_solutions else limit, node_limit)


def assemble(inst: KMInstance, selection: Sequence[int]) -> D.Design:
    if len(selection) != len(inst.k_orbits):
        raise SearchError(f"selection has length {len(selection)}, expected {len(inst.k_orbits)}")
    if not any(selection):
        raise D.DesignError("empty selection gives no blocks")
    blocks = [m for x, o in zip(selection, inst.k_orbits.orbits) if x for m in o.members]
    return D.Design(inst.params, blocks)


def is_invariant(d: D.Design, g: MatrixGroup) -> bool:
    return all({apply_subspace(b, m) for b in d.blocks} == d.blocks for m in g.generators)


@dataclass
class SearchOutcome:
    designs: list[D.Design]
    group: str
    shape: tuple[int, int]
    nodes: int
    exhausted: bool
    attempts: list[str] = field(default_factory=list)


def search_design(
    p: ParameterSet,
    group: str = "singer-normalizer",
    limit: int | None = 1,
    node_limit: int | None = None,
    fallback: bool = True,
) -> SearchOutcome:
    """Designs with parameters p invariant under the named group.

    If nothing turns up under the Singer normalizer and ``fallback`` is set,
    the plain Singer cycle is tried next.
    """
    field_ = field_make(p.q)
    names = [group]
    if fallback and group == "singer-normalizer":
        names.append("singer")
    attempts = []
    out = None
    for name in names:
        g = make_group(name, p.v, field_)
        inst = build_instance(p, g)
        res = solve(inst, limit=limit, node_limit=node_limit)
        status = "exhausted" if res.exhausted else "stopped"
        attempts.append(f"{name}: {inst.shape[0]}x{inst.shape[1]}, {len(res)} solution(s), {res.nodes} nodes, {status}")
        out = SearchOutcome([assemble(inst, x) for x in res], name, inst.shape, res.nodes, res.exhausted, attempts)
        if res.solutions:
            break
    return out


def find_large_set(
    p: ParameterSet,
    n: int,
    group: str = "trivial",
    node_limit: int | None = None,
) -> LargeSet | None:
    """An LS_q[n](t,k,v) whose members are unions of k-orbits of the group.

    First every invariant design is listed, then a second exact cover picks n
    of them that partition the k-orbits.
    """
    g = make_group(group, p.v, field_make(p.q))
    inst = build_instance(p, g)
    designs = solve(inst, all_solutions=True, node_limit=node_limit)
    if not designs.solutions:
        return None
    cover = [[x[j] for x in designs.solutions] for j in range(len(inst.k_orbits))]
    pick = solve_system(cover, 1, limit=1, node_limit=node_limit)
    if not pick.solutions:
        return None
    chosen = [designs.solutions[i] for i, x in enumerate(pick.solutions[0]) if x]
    if len(chosen) != n:
        return None
    members = [assemble(inst, x) for x in chosen]
    return LargeSet(n, p, members)
