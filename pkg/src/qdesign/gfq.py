"""Finite fields GF(q) and the lattice of subspaces of GF(q)^v.

Vectors are packed into Python ints: a vector ``(x_0, ..., x_{v-1})`` is stored
as ``sum(x_i * q**(v-1-i))`` so coordinate 0 is the most significant digit and
integer order coincides with lexicographic order of the coordinates.  For
q = 2 this is a plain bitmask and all row operations are XORs.

A :class:`Subspace` holds the rows of its reduced row echelon basis in that
packed form, which doubles as its canonical key.
"""

from __future__ import annotations

import itertools
import random
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

MAX_Q = 1 << 16
_DIGITS = "0123456789abcdefghijklmnopqrstuvwxyz"


class FieldError(ValueError):
    pass


class NotPrimePower(FieldError):
    pass


class TooLarge(FieldError):
    pass


class LatticeError(ValueError):
    pass


class DimensionMismatch(LatticeError):
    pass


class AmbientMismatch(LatticeError):
    pass


class NotContained(LatticeError):
    pass


def prime_power(q: int) -> tuple[int, int] | None:
    """Return ``(p, e)`` with ``q == p**e`` and p prime, or None."""
    if q < 2:
        return None
    n, p = q, 2
    while p * p <= n:
        if n % p == 0:
            break
        p += 1
    else:
        return (q, 1)
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return (p, e) if n == 1 else None


def is_prime_power(q: int) -> bool:
    return prime_power(q) is not None


def prime_powers(upto: int) -> list[int]:
    return [q for q in range(2, upto + 1) if is_prime_power(q)]


def _poly_mulmod(a, b, f, p):
    # coefficient lists low -> high; f monic of degree n
    n = len(f) - 1
    res = [0] * (2 * n)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                res[i + j] = (res[i + j] + x * y) % p
    for d in range(len(res) - 1, n - 1, -1):
        c = res[d]
        if c:
            for i in range(n + 1):
                res[d - n + i] = (res[d - n + i] - c * f[i]) % p
    return res[:n]


def _poly_xpow(e, f, p):
    n = len(f) - 1
    r = [1] + [0] * (n - 1)
    b = [0, 1] + [0] * (n - 2) if n > 1 else [(-f[0]) % p]
    while e:
        if e & 1:
            r = _poly_mulmod(r, b, f, p)
        b = _poly_mulmod(b, b, f, p)
        e >>= 1
    return r


def _prime_factors(n: int) -> list[int]:
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


def is_primitive(coeffs: Sequence[int], p: int) -> bool:
    """Whether the monic polynomial ``x^n + sum(coeffs[i] x^i)`` is primitive over GF(p)."""
    f = list(coeffs) + [1]
    n = len(coeffs)
    order = p**n - 1
    one = [1] + [0] * (n - 1)
    if _poly_xpow(order, f, p) != one:
        return False
    return all(_poly_xpow(order // r, f, p) != one for r in _prime_factors(order))


def smallest_primitive(p: int, n: int) -> list[int]:
    """Lower coefficients of the primitive polynomial of degree n with least value at x = p."""
    for code in range(p**n):
        c = [(code // p**i) % p for i in range(n)]
        if is_primitive(c, p):
            return c
    raise FieldError(f"no primitive polynomial of degree {n} over GF({p})")


class Field:
    """GF(q) with elements ``0..q-1``.

    For q = p^e with e > 1 an element encodes a polynomial over GF(p) in base p
    (digit i is the coefficient of x^i), and multiplication goes through
    exp/log tables built from the smallest primitive polynomial of degree e.
    """

    def __init__(self, q: int):
        if q > MAX_Q:
            raise TooLarge(f"field order {q} exceeds {MAX_Q}")
        pe = prime_power(q)
        if pe is None:
            raise NotPrimePower(f"{q} is not a prime power")
        self.q = q
        self.p, self.e = pe
        self.modulus: list[int] | None = None
        if self.e > 1:
            self.modulus = smallest_primitive(self.p, self.e)
            self._exp, self._log = self._tables()
        self._add_table = None
        if self.e > 1 and q <= 256:
            self._add_table = [[self._add_digits(a, b) for b in range(q)] for a in range(q)]

    def _tables(self):
        q, p, e = self.q, self.p, self.e
        exp = [0] * (2 * (q - 1))
        log = [0] * q
        x = 1
        for i in range(q - 1):
            exp[i] = x
            log[x] = i
            # multiply x by the generator (the polynomial x)
            digits = [(x // p**j) % p for j in range(e)]
            top = digits[-1]
            shifted = [0] + digits[:-1]
            for j in range(e):
                shifted[j] = (shifted[j] - top * self.modulus[j]) % p
            x = sum(d * p**j for j, d in enumerate(shifted))
        for i in range(q - 1, 2 * (q - 1)):
            exp[i] = exp[i - (q - 1)]
        return exp, log

    def _add_digits(self, a: int, b: int, sign: int = 1) -> int:
        p = self.p
        out, w = 0, 1
        while a or b:
            out += ((a % p + sign * (b % p)) % p) * w
            a //= p
            b //= p
            w *= p
        return out

    def __repr__(self):
        return f"Field(q={self.q}, p={self.p}, e={self.e})"

    def __eq__(self, other):
        return isinstance(other, Field) and other.q == self.q

    def __hash__(self):
        return hash(("Field", self.q))

    def __reduce__(self):
        return (field_make, (self.q,))

    def add(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a + b) % self.q
        if self.p == 2:
            return a ^ b
        if self._add_table is not None:
            return self._add_table[a][b]
        return self._add_digits(a, b)

    def neg(self, a: int) -> int:
        if self.e == 1:
            return (-a) % self.q
        if self.p == 2:
            return a
        return self._add_digits(0, a, -1)

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a * b) % self.q
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        if self.e == 1:
            return pow(a, self.q - 2, self.q)
        return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]

    # packed vectors

    def pack(self, digits: Sequence[int]) -> int:
        if self.q == 2:
            x = 0
            for d in digits:
                x = (x << 1) | d
            return x
        x = 0
        for d in digits:
            x = x * self.q + d
        return x

    def unpack(self, x: int, v: int) -> list[int]:
        if self.q == 2:
            return [(x >> (v - 1 - j)) & 1 for j in range(v)]
        out = [0] * v
        for j in range(v - 1, -1, -1):
            x, out[j] = divmod(x, self.q)
        return out


@lru_cache(maxsize=None)
def field_make(q: int) -> Field:
    return Field(q)


# row reduction


def _rref_gf2(rows: Iterable[int]) -> tuple[int, ...]:
    basis: list[int] = []
    for r in rows:
        for b in basis:
            if r & (1 << (b.bit_length() - 1)):
                r ^= b
        if r:
            top = 1 << (r.bit_length() - 1)
            basis = [b ^ r if b & top else b for b in basis]
            basis.append(r)
    basis.sort(reverse=True)
    return tuple(basis)


def _rref_digits(rows: list[list[int]], field: Field, v: int) -> list[list[int]]:
    m = [list(r) for r in rows]
    out: list[list[int]] = []
    for col in range(v):
        piv = next((i for i, r in enumerate(m) if r[col]), None)
        if piv is None:
            continue
        r = m.pop(piv)
        c = field.inv(r[col])
        if c != 1:
            r = [field.mul(c, x) for x in r]
        for other in itertools.chain(m, out):
            f = other[col]
            if f:
                for j in range(col, v):
                    if r[j]:
                        other[j] = field.sub(other[j], field.mul(f, r[j]))
        out.append(r)
        m = [x for x in m if any(x)]
        if not m:
            break
    return out


def rref_rows(rows: Iterable[int], field: Field, v: int) -> tuple[int, ...]:
    """RREF of packed rows, returned as a tuple of packed nonzero rows."""
    if field.q == 2:
        return _rref_gf2(rows)
    red = _rref_digits([field.unpack(r, v) for r in rows], field, v)
    return tuple(field.pack(r) for r in red)


class Subspace:
    """A subspace of GF(q)^v in canonical RREF form.

    ``rows`` are the packed RREF basis rows with strictly increasing pivot
    columns; they are the canonical key, so equality and hashing are exact.
    """

    __slots__ = ("field", "v", "rows", "_hash")

    def __init__(self, field: Field, v: int, rows: tuple[int, ...]):
        self.field = field
        self.v = v
        self.rows = rows
        self._hash = hash((field.q, v, rows))

    @classmethod
    def span(cls, vectors: Iterable[Sequence[int] | int], field: Field, v: int) -> "Subspace":
        packed = []
        for x in vectors:
            if not isinstance(x, int):
                if len(x) != v:
                    raise DimensionMismatch(f"row of length {len(x)} in ambient dimension {v}")
                x = field.pack(x)
            packed.append(x)
        return cls(field, v, rref_rows(packed, field, v))

    @classmethod
    def zero(cls, field: Field, v: int) -> "Subspace":
        return cls(field, v, ())

    @classmethod
    def full(cls, field: Field, v: int) -> "Subspace":
        return cls(field, v, tuple(unit_vector(field, v, j) for j in range(v)))

    @property
    def dim(self) -> int:
        return len(self.rows)

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def key(self) -> tuple[int, ...]:
        return self.rows

    def matrix(self) -> list[list[int]]:
        return [self.field.unpack(r, self.v) for r in self.rows]

    def pivots(self) -> list[int]:
        return [next(j for j, x in enumerate(r) if x) for r in self.matrix()]

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.rows == other.rows and self.v == other.v and self.field.q == other.field.q

    def __hash__(self):
        return self._hash

    def __lt__(self, other: "Subspace") -> bool:
        return (self.dim, self.rows) < (other.dim, other.rows)

    def __repr__(self):
        return f"Subspace({self.to_text()!r}, q={self.field.q})"

    def to_text(self) -> str:
        return encode_rows(self.rows, self.field, self.v)

    @classmethod
    def from_text(cls, text: str, field: Field, v: int | None = None) -> "Subspace":
        rows = decode_rows(text, field, v)
        if v is None:
            if not rows:
                raise DimensionMismatch("cannot infer ambient dimension of an empty encoding")
            v = len(rows[0])
        return cls.span(rows, field, v)

    def __reduce__(self):
        return (Subspace, (self.field, self.v, self.rows))


def encode_rows(rows: Sequence[int], field: Field, v: int) -> str:
    if field.q > len(_DIGITS):
        raise FieldError(f"text encoding supports q <= {len(_DIGITS)}")
    return ";".join("".join(_DIGITS[d] for d in field.unpack(r, v)) for r in rows)


def decode_rows(text: str, field: Field, v: int | None = None) -> list[list[int]]:
    if field.q > len(_DIGITS):
        raise FieldError(f"text encoding supports q <= {len(_DIGITS)}")
    text = text.strip()
    if not text:
        return []
    out = []
    for part in text.split(";"):
        part = part.strip()
        try:
            digits = [_DIGITS.index(c) for c in part.lower()]
        except ValueError:
            raise DimensionMismatch(f"invalid digit in row {part!r}") from None
        if any(d >= field.q for d in digits):
            raise DimensionMismatch(f"row {part!r} has a digit >= q={field.q}")
        if v is not None and len(digits) != v:
            raise DimensionMismatch(f"row {part!r} has length {len(digits)}, expected {v}")
        if out and len(digits) != len(out[0]):
            raise DimensionMismatch("ragged rows in subspace encoding")
        out.append(digits)
    return out


def unit_vector(field: Field, v: int, j: int) -> int:
    return field.q ** (v - 1 - j)


def rref(rows: Sequence[Sequence[int]], field: Field) -> tuple[Subspace, int]:
    """Reduce a list of coordinate rows; returns the spanned subspace and its rank."""
    if not rows:
        raise DimensionMismatch("rref needs at least one row to fix the ambient dimension")
    v = len(rows[0])
    if any(len(r) != v for r in rows):
        raise DimensionMismatch("ragged input rows")
    s = Subspace.span(rows, field, v)
    return s, s.dim


def _check_ambient(a: Subspace, b: Subspace) -> None:
    if a.v != b.v or a.field.q != b.field.q:
        raise AmbientMismatch(f"GF({a.field.q})^{a.v} vs GF({b.field.q})^{b.v}")


def reduce_vector(x: int, s: Subspace) -> int:
    """Reduce a packed vector modulo the RREF basis of s (zeros on s's pivot columns)."""
    field = s.field
    if field.q == 2:
        for b in s.rows:
            if x & (1 << (b.bit_length() - 1)):
                x ^= b
        return x
    xd = field.unpack(x, s.v)
    for b, p in zip(s.matrix(), s.pivots()):
        c = xd[p]
        if c:
            for j in range(p, s.v):
                if b[j]:
                    xd[j] = field.sub(xd[j], field.mul(c, b[j]))
    return field.pack(xd)


def contains(outer: Subspace, inner: Subspace) -> bool:
    _check_ambient(outer, inner)
    if inner.dim > outer.dim:
        return False
    return all(reduce_vector(r, outer) == 0 for r in inner.rows)


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    _check_ambient(a, b)
    return Subspace(a.field, a.v, rref_rows(a.rows + b.rows, a.field, a.v))


def intersection(a: Subspace, b: Subspace) -> Subspace:
    """Zassenhaus: reduce [[a, a], [b, 0]]; rows with zero left half span a ∩ b."""
    _check_ambient(a, b)
    field, v = a.field, a.v
    shift = field.q**v
    stacked = [x * shift + x for x in a.rows] + [x * shift for x in b.rows]
    red = rref_rows(stacked, field, 2 * v)
    return Subspace(field, v, tuple(r for r in red if r < shift))


def orthogonal_complement(s: Subspace) -> Subspace:
    """Complement under the standard dot product."""
    field, v = s.field, s.v
    mat = s.matrix()
    piv = s.pivots()
    pivset = set(piv)
    out = []
    for f in range(v):
        if f in pivset:
            continue
        x = [0] * v
        x[f] = 1
        for row, p in zip(mat, piv):
            x[p] = field.neg(row[f])
        out.append(field.pack(x))
    return Subspace(field, v, rref_rows(out, field, v))


def pivot_patterns(v: int, k: int) -> Iterator[tuple[int, ...]]:
    return itertools.combinations(range(v), k)


def enumerate_subspaces(v: int, k: int, field: Field) -> Iterator[Subspace]:
    """Every k-subspace of GF(q)^v exactly once.

    Pivot patterns come in lexicographic order; inside a pattern the free
    entries (row-major) count up in base q.
    """
    if k < 0 or k > v:
        return
    q = field.q
    for piv in itertools.combinations(range(v), k):
        pivset = set(piv)
        free = [(i, j) for i, p in enumerate(piv) for j in range(p + 1, v) if j not in pivset]
        base = [unit_vector(field, v, p) for p in piv]
        weights = [unit_vector(field, v, j) for _, j in free]
        for vals in itertools.product(range(q), repeat=len(free)):
            rows = list(base)
            for (i, _), w, c in zip(free, weights, vals):
                if c:
                    rows[i] += c * w
            yield Subspace(field, v, tuple(rows))


def count_rref_matrices(v: int, k: int, q: int) -> int:
    """Number of k x v RREF matrices over GF(q), counted pattern by pattern."""
    total = 0
    for piv in itertools.combinations(range(v), k):
        pivset = set(piv)
        nfree = sum(1 for p in piv for j in range(p + 1, v) if j not in pivset)
        total += q**nfree
    return total


def complements(u: Subspace, w: Subspace) -> Iterator[Subspace]:
    """All K <= w with K ∩ u = 0 and K + u = w (there are q^(dim u * (dim w - dim u)))."""
    _check_ambient(u, w)
    if not contains(w, u):
        raise NotContained("u is not a subspace of w")
    field, v = u.field, u.v
    # fixed complement: extend u by rows of w greedily
    fixed: list[int] = []
    acc = u
    for r in w.rows:
        if reduce_vector(r, acc):
            fixed.append(r)
            acc = Subspace(field, v, rref_rows(acc.rows + (r,), field, v))
    ud = [field.unpack(x, v) for x in u.rows]
    fd = [field.unpack(x, v) for x in fixed]
    r = len(u.rows)
    for vals in itertools.product(range(field.q), repeat=r * len(fixed)):
        rows = []
        for i, c in enumerate(fd):
            x = list(c)
            for j in range(r):
                a = vals[i * r + j]
                if a:
                    x = [field.add(xi, field.mul(a, uj)) for xi, uj in zip(x, ud[j])]
            rows.append(field.pack(x))
        yield Subspace(field, v, rref_rows(rows, field, v))


class QuotientMap:
    """Coordinates on V/U via the unit vectors off U's pivot columns."""

    def __init__(self, v_dim: int, u: Subspace, field: Field | None = None):
        if u.v != v_dim or (field is not None and field.q != u.field.q):
            raise AmbientMismatch("u does not live in the stated ambient space")
        self.u = u
        self.field = u.field
        self.v = v_dim
        piv = set(u.pivots())
        self.free_cols = [j for j in range(v_dim) if j not in piv]
        self.dim = len(self.free_cols)

    def _project(self, x: int) -> int:
        xd = self.field.unpack(reduce_vector(x, self.u), self.v)
        return self.field.pack([xd[j] for j in self.free_cols])

    def push(self, s: Subspace) -> Subspace:
        _check_ambient(s, self.u)
        if not contains(s, self.u):
            raise NotContained("push requires a subspace containing u")
        rows = [self._project(r) for r in s.rows]
        return Subspace(self.field, self.dim, rref_rows(rows, self.field, self.dim))

    def project(self, s: Subspace) -> Subspace:
        """Image of an arbitrary subspace: push(s + u)."""
        rows = [self._project(r) for r in s.rows]
        return Subspace(self.field, self.dim, rref_rows(rows, self.field, self.dim))

    def lift_vector(self, y: int) -> int:
        yd = self.field.unpack(y, self.dim)
        x = [0] * self.v
        for j, c in zip(self.free_cols, yd):
            x[j] = c
        return self.field.pack(x)

    def pull(self, sbar: Subspace) -> Subspace:
        if sbar.v != self.dim or sbar.field.q != self.field.q:
            raise AmbientMismatch("subspace does not live in V/U")
        rows = list(self.u.rows) + [self.lift_vector(y) for y in sbar.rows]
        return Subspace(self.field, self.v, rref_rows(rows, self.field, self.v))


def quotient_map(v_dim: int, u: Subspace, field: Field | None = None) -> QuotientMap:
    return QuotientMap(v_dim, u, field)


def recoordinatize(s: Subspace, h: Subspace) -> Subspace:
    """Express s <= h in the coordinates given by h's pivot columns."""
    if not contains(h, s):
        raise NotContained("subspace is not inside h")
    field = s.field
    piv = h.pivots()
    rows = []
    for r in s.rows:
        xd = field.unpack(r, s.v)
        rows.append(field.pack([xd[p] for p in piv]))
    return Subspace(field, h.dim, rref_rows(rows, field, h.dim))


def random_subspace(v: int, k: int, field: Field, rng: random.Random) -> Subspace:
    while True:
        rows = [rng.randrange(field.q**v) for _ in range(k)]
        s = Subspace(field, v, rref_rows(rows, field, v))
        if s.dim == k:
            return s


def random_subspace_of(w: Subspace, k: int, rng: random.Random) -> Subspace:
    """Uniform-ish random k-subspace inside w, via random coefficient matrices."""
    field, v = w.field, w.v
    wd = w.matrix()
    while True:
        rows = []
        for _ in range(k):
            x = [0] * v
            for row in wd:
                c = rng.randrange(field.q)
                if c:
                    x = [field.add(a, field.mul(c, b)) for a, b in zip(x, row)]
            rows.append(field.pack(x))
        s = Subspace(field, v, rref_rows(rows, field, v))
        if s.dim == k:
            return s


# coefficient patterns: the t-subspaces of GF(q)^k as coefficient rows
# (packed), used to list the t-subspaces of a block without re-reduction.


@lru_cache(maxsize=None)
def coefficient_patterns(k: int, t: int, q: int) -> tuple[tuple[int, ...], ...]:
    return tuple(s.rows for s in enumerate_subspaces(k, t, field_make(q)))


def span_table(rows: Sequence[int], field: Field, v: int) -> list[int]:
    """All q^k linear combinations of ``rows``, indexed by packed coefficient vector."""
    k = len(rows)
    q = field.q
    if q == 2:
        table = [0] * (1 << k)
        for idx in range(1, 1 << k):
            low = idx & -idx
            table[idx] = table[idx ^ low] ^ rows[k - low.bit_length()]
        return table
    mats = [field.unpack(r, v) for r in rows]
    table = [0] * (q**k)
    for idx in range(1, q**k):
        # idx = c * q^(k-1-i) + rest, where rest has a zero i-th digit
        i = k - 1
        w = 1
        while (idx // w) % q == 0:
            w *= q
            i -= 1
        c = (idx // w) % q
        rest = idx - c * w
        base = field.unpack(table[rest], v)
        x = [field.add(a, field.mul(c, b)) for a, b in zip(base, mats[i])]
        table[idx] = field.pack(x)
    return table


def sub_keys(s: Subspace, t: int) -> Iterator[tuple[int, ...]]:
    """Canonical keys of every t-subspace of s.

    The image of an RREF coefficient matrix under an RREF basis is again in
    RREF, so the keys come out canonical without further reduction.
    """
    table = span_table(s.rows, s.field, s.v)
    for pat in coefficient_patterns(s.dim, t, s.field.q):
        yield tuple(table[i] for i in pat)


def subspaces_of(s: Subspace, t: int) -> Iterator[Subspace]:
    for key in sub_keys(s, t):
        yield Subspace(s.field, s.v, key)


def superspaces(s: Subspace, k: int) -> Iterator[Subspace]:
    """Every k-subspace of the ambient space containing s."""
    qm = QuotientMap(s.v, s)
    for sbar in enumerate_subspaces(qm.dim, k - s.dim, s.field):
        yield qm.pull(sbar)
