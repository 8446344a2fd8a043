"""Exact scalar and polynomial arithmetic, permutation signs, rational linear algebra.

Everything downstream works over the rationals so that every graded identity
can be asserted bit-exactly.  Scalars are ``fractions.Fraction``; polynomials
in the base coordinates x^1..x^n are sparse maps from exponent vectors to
nonzero rational coefficients.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Q = Fraction

QZERO = Fraction(0)
QONE = Fraction(1)


class NotAPermutationError(ValueError):
    pass


def koszul_sign(source: Sequence, target: Sequence) -> int:
    """Sign of the permutation carrying ``source`` to ``target``.

    The entries are ids of odd generators; they must be pairwise distinct and
    ``target`` must be a rearrangement of ``source``.  Returns (-1)**inversions.
    """
    if len(source) != len(target):
        raise NotAPermutationError("length mismatch: %r -> %r" % (source, target))
    if len(set(source)) != len(source):
        raise NotAPermutationError("duplicate ids in %r" % (source,))
    if set(source) != set(target):
        raise NotAPermutationError("%r is not a rearrangement of %r" % (target, source))
    pos = {g: i for i, g in enumerate(source)}
    perm = [pos[g] for g in target]
    sign = 1
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


def sort_odd(factors: Sequence) -> tuple[int, tuple]:
    """Sort odd generators ascending, returning (sign, sorted tuple).

    A repeated generator squares to zero: the sign returned is 0.
    """
    if len(set(factors)) != len(factors):
        return 0, ()
    ordered = tuple(sorted(factors))
    return koszul_sign(factors, ordered), ordered


class BasePoly:
    """Sparse polynomial over Q in ``n`` base coordinates.

    terms maps exponent tuples (length n, nonnegative ints) to nonzero
    Fractions.  Instances are treated as immutable.
    """

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping[tuple[int, ...], Fraction] | None = None):
        self.n = n
        clean: dict[tuple[int, ...], Fraction] = {}
        if terms:
            for exps, c in terms.items():
                if c == 0:
                    continue
                if len(exps) != n or any(e < 0 for e in exps):
                    raise ValueError("bad exponent vector %r for n=%d" % (exps, n))
                clean[tuple(exps)] = Fraction(c)
        self.terms = clean

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(n: int) -> "BasePoly":
        return BasePoly(n)

    @staticmethod
    def const(n: int, c) -> "BasePoly":
        c = Fraction(c)
        if c == 0:
            return BasePoly(n)
        return BasePoly(n, {(0,) * n: c})

    @staticmethod
    def one(n: int) -> "BasePoly":
        return BasePoly.const(n, 1)

    @staticmethod
    def variable(n: int, i: int) -> "BasePoly":
        """The coordinate x^i, 1-based."""
        if not 1 <= i <= n:
            raise ValueError("variable index %d out of range 1..%d" % (i, n))
        exps = [0] * n
        exps[i - 1] = 1
        return BasePoly(n, {tuple(exps): QONE})

    @staticmethod
    def monomial(n: int, exps: Sequence[int], c=1) -> "BasePoly":
        return BasePoly(n, {tuple(exps): Fraction(c)})

    # -- ring structure ----------------------------------------------------

    def __add__(self, other: "BasePoly") -> "BasePoly":
        if self.n != other.n:
            raise ValueError("mixed variable counts")
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, QZERO) + c
            if s == 0:
                out.pop(e, None)
            else:
                out[e] = s
        return BasePoly(self.n, out)

    def __neg__(self) -> "BasePoly":
        return BasePoly(self.n, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "BasePoly") -> "BasePoly":
        return self + (-other)

    def __mul__(self, other) -> "BasePoly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if self.n != other.n:
            raise ValueError("mixed variable counts")
        out: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, QZERO) + c1 * c2
                if s == 0:
                    out.pop(e, None)
                else:
                    out[e] = s
        return BasePoly(self.n, out)

    __rmul__ = __mul__

    def scale(self, c) -> "BasePoly":
        c = Fraction(c)
        if c == 0:
            return BasePoly(self.n)
        return BasePoly(self.n, {e: c * v for e, v in self.terms.items()})

    def __pow__(self, k: int) -> "BasePoly":
        if k < 0:
            raise ValueError("negative power")
        out = BasePoly.one(self.n)
        for _ in range(k):
            out = out * self
        return out

    # -- calculus and queries ----------------------------------------------

    def derivative(self, i: int) -> "BasePoly":
        """d/dx^i, 1-based."""
        out: dict[tuple[int, ...], Fraction] = {}
        for e, c in self.terms.items():
            k = e[i - 1]
            if k == 0:
                continue
            e2 = list(e)
            e2[i - 1] = k - 1
            e2 = tuple(e2)
            s = out.get(e2, QZERO) + c * k
            if s == 0:
                out.pop(e2, None)
            else:
                out[e2] = s
        return BasePoly(self.n, out)

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.n, QZERO)

    def __eq__(self, other) -> bool:
        return isinstance(other, BasePoly) and self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for e in sorted(self.terms):
            c = self.terms[e]
            mono = "*".join(
                "x%d%s" % (i + 1, "" if p == 1 else "^%d" % p)
                for i, p in enumerate(e) if p
            )
            bits.append(("%s" % c) if not mono else ("%s*%s" % (c, mono)))
        return " + ".join(bits)


# -- rational linear algebra -------------------------------------------------


def _echelon(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Row-reduce a copy of ``rows`` over Q; returns (echelon rows, pivot columns)."""
    m = [list(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    row = 0
    for col in range(ncols):
        sel = None
        for r in range(row, len(m)):
            if m[r][col] != 0:
                sel = r
                break
        if sel is None:
            continue
        m[row], m[sel] = m[sel], m[row]
        inv = 1 / m[row][col]
        m[row] = [v * inv for v in m[row]]
        for r in range(len(m)):
            if r != row and m[r][col] != 0:
                f = m[r][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[row])]
        pivots.append(col)
        row += 1
        if row == len(m):
            break
    return m, pivots


def rank(rows: Sequence[Sequence]) -> int:
    """Rank of a rational matrix given as a list of rows."""
    rows = [[Fraction(v) for v in r] for r in rows]
    _, pivots = _echelon(rows)
    return len(pivots)


def kernel_basis(rows: Sequence[Sequence]) -> list[list[Fraction]]:
    """Exact basis of the right kernel of a rational matrix.

    The empty matrix (no rows) over k columns has kernel = all of Q^k; with no
    columns the kernel is empty.
    """
    rows = [[Fraction(v) for v in r] for r in rows]
    if not rows:
        return []
    ncols = len(rows[0])
    red, pivots = _echelon(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [QZERO] * ncols
        vec[fc] = QONE
        for i, pc in enumerate(pivots):
            vec[pc] = -red[i][fc]
        basis.append(vec)
    return basis


def in_span(rows: Sequence[Sequence], vec: Sequence) -> bool:
    """Whether ``vec`` lies in the row span of ``rows``."""
    base = [[Fraction(v) for v in r] for r in rows]
    r0 = rank(base)
    return rank(base + [[Fraction(v) for v in vec]]) == r0


def factorial(k: int) -> int:
    out = 1
    for i in range(2, k + 1):
        out *= i
    return out


def multinomial(parts: Iterable[int]) -> int:
    parts = list(parts)
    out = factorial(sum(parts))
    for p in parts:
        out //= factorial(p)
    return out
