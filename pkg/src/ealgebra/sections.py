"""Sparse multigraded sections of the fiberwise bundles.

A section is a finite sum of terms.  Every term has a BasePoly coefficient in
the base coordinates x and a Multigrade key holding the exterior generators
xi^i, the fiber monomial in y, and a bundle-specific fiber payload:

  S   formal functions of y                      payload ()
  T   fiberwise polyvector fields                payload = ascending d/dy wedge indices
  A   fiberwise differential forms               payload = ascending dy indices
  D   fiberwise polydifferential operators       payload = tuple of d/dy multi-indices
  J   fiberwise tensor chains                    payload = tuple of y-group exponent vectors

Gradings follow the shifted conventions: a T term of p wedge factors has
degree len(xi)+p-1, an A term of q dy factors degree len(xi)-q, a D term of
p slots degree len(xi)+p-1, a J term of g groups degree len(xi)-(g-1).

Sections carry a truncation order N (maximal total y-degree retained) and a
validityOrder: the y-degree up to which the stored value is exact.  Operations
never raise validity; operators that consume higher-degree data to produce a
given degree lower it explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exact import BasePoly, QZERO, koszul_sign

BUNDLES = ("S", "T", "A", "D", "J")


@dataclass(frozen=True)
class Multigrade:
    """Hashable term key: exterior part, y-exponents, fiber payload."""

    xi: tuple[int, ...]
    y: tuple[int, ...]
    fiber: tuple = ()

    def ydeg(self) -> int:
        return sum(self.y) + sum(sum(g) for g in self.fiber if isinstance(g, tuple))


def _ydeg(key: Multigrade, bundle: str) -> int:
    if bundle == "J":
        return sum(sum(g) for g in key.fiber)
    return sum(key.y)


def term_degree(key: Multigrade, bundle: str) -> int:
    if bundle == "S":
        return len(key.xi)
    if bundle == "T":
        return len(key.xi) + len(key.fiber) - 1
    if bundle == "A":
        return len(key.xi) - len(key.fiber)
    if bundle == "D":
        return len(key.xi) + len(key.fiber) - 1
    if bundle == "J":
        return len(key.xi) - (len(key.fiber) - 1)
    raise ValueError("unknown bundle %r" % bundle)


def term_parity(key: Multigrade, bundle: str) -> int:
    """Koszul parity used by the graded-commutative product."""
    if bundle in ("S", "D", "J"):
        return len(key.xi) & 1
    return (len(key.xi) + len(key.fiber)) & 1


def _odd_ids(key: Multigrade, bundle: str) -> list:
    ids = [("x", i) for i in key.xi]
    if bundle == "T":
        ids += [("t", j) for j in key.fiber]
    elif bundle == "A":
        ids += [("d", j) for j in key.fiber]
    return ids


class GradedSection:
    """Finite sum of multigraded terms over one bundle, truncated at y-degree N."""

    __slots__ = ("bundle", "r", "n", "N", "terms", "validity", "group_caps")

    def __init__(self, bundle, r, n, N, terms=None, validity=None, group_caps=None):
        if bundle not in BUNDLES:
            raise ValueError("unknown bundle %r" % bundle)
        self.bundle = bundle
        self.r = r
        self.n = n
        self.N = N
        self.validity = N if validity is None else min(validity, N)
        self.group_caps = group_caps
        clean: dict[Multigrade, BasePoly] = {}
        if terms:
            for key, coeff in terms.items():
                if coeff.is_zero():
                    continue
                if _ydeg(key, bundle) > N:
                    continue
                if bundle == "J" and group_caps is not None:
                    caps = group_caps if isinstance(group_caps, tuple) else None
                    ok = True
                    for gi, g in enumerate(key.fiber):
                        cap = caps[min(gi, len(caps) - 1)] if caps else group_caps
                        if sum(g) > cap:
                            ok = False
                            break
                    if not ok:
                        continue
                clean[key] = coeff
        self.terms = clean

    # -- construction helpers ------------------------------------------------

    def zero_like(self, validity=None) -> "GradedSection":
        return GradedSection(self.bundle, self.r, self.n, self.N, {},
                             self.validity if validity is None else validity,
                             self.group_caps)

    def with_terms(self, terms, validity=None) -> "GradedSection":
        return GradedSection(self.bundle, self.r, self.n, self.N, terms,
                             self.validity if validity is None else validity,
                             self.group_caps)

    @staticmethod
    def scalar(bundle, r, n, N, poly: BasePoly, group_caps=None) -> "GradedSection":
        """Coefficient poly times the unit term of the bundle."""
        if bundle == "T":
            raise ValueError("T has no unit term")
        fiber: tuple = ((0,) * r,) if bundle == "J" else ()
        key = Multigrade((), (0,) * r, fiber)
        return GradedSection(bundle, r, n, N, {key: poly}, None, group_caps)

    # -- linear structure ------------------------------------------------------

    def __add__(self, other: "GradedSection") -> "GradedSection":
        self._check_compatible(other)
        out = dict(self.terms)
        for key, c in other.terms.items():
            s = out.get(key)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(key, None)
            else:
                out[key] = s
        return GradedSection(self.bundle, self.r, self.n, min(self.N, other.N), out,
                             min(self.validity, other.validity), self.group_caps)

    def __neg__(self) -> "GradedSection":
        return self.with_terms({k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "GradedSection") -> "GradedSection":
        return self + (-other)

    def scale(self, c) -> "GradedSection":
        if isinstance(c, (int, Fraction)):
            c = BasePoly.const(self.n, c)
        return self.with_terms({k: coeff * c for k, coeff in self.terms.items()})

    def _check_compatible(self, other: "GradedSection"):
        if (self.bundle, self.r, self.n) != (other.bundle, other.r, other.n):
            raise ValueError("incompatible sections: %s vs %s" %
                             ((self.bundle, self.r, self.n), (other.bundle, other.r, other.n)))

    # -- queries ---------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_zero_mod(self, margin: int) -> bool:
        """True when every term of y-degree <= margin vanishes."""
        return all(_ydeg(k, self.bundle) > margin for k in self.terms)

    def max_xi(self) -> int:
        return max((len(k.xi) for k in self.terms), default=0)

    def homogeneous_degrees(self) -> set[int]:
        return {term_degree(k, self.bundle) for k in self.terms}

    def __eq__(self, other) -> bool:
        return (isinstance(other, GradedSection)
                and self.bundle == other.bundle and self.terms == other.terms)

    def __hash__(self):
        return hash((self.bundle, frozenset((k, hash(c)) for k, c in self.terms.items())))

    def __repr__(self) -> str:
        if not self.terms:
            return "<%s 0>" % self.bundle
        bits = []
        for key in sorted(self.terms, key=lambda k: (sorted(k.xi), k.y, k.fiber)):
            bits.append("(%s)*xi%s*y%s*%s" % (self.terms[key], list(key.xi), list(key.y), list(key.fiber)))
        return "<%s %s>" % (self.bundle, " + ".join(bits))


def section_mul(a: GradedSection, b: GradedSection) -> GradedSection:
    """Graded-commutative product with Koszul signs.

    Supported: products within S, T (wedge), A, and the module action of S on
    any bundle from either side.  D and J composites go through the dedicated
    operator/chain operations instead.
    """
    if a.bundle == b.bundle and a.bundle in ("S", "T", "A"):
        out_bundle = a.bundle
    elif a.bundle == "S":
        out_bundle = b.bundle
    elif b.bundle == "S":
        out_bundle = a.bundle
    else:
        raise ValueError("unsupported product %s*%s" % (a.bundle, b.bundle))
    if (a.r, a.n) != (b.r, b.n):
        raise ValueError("incompatible charts")
    N = min(a.N, b.N)
    caps = a.group_caps if a.bundle == "J" else b.group_caps
    out: dict[Multigrade, BasePoly] = {}
    for ka, ca in a.terms.items():
        ida = _odd_ids(ka, a.bundle)
        for kb, cb in b.terms.items():
            idb = _odd_ids(kb, b.bundle)
            merged = ida + idb
            if len(set(merged)) != len(merged):
                continue
            target = sorted(merged)
            sign = koszul_sign(merged, target)
            xi = tuple(i for kind, i in target if kind == "x")
            fib_odd = tuple(i for kind, i in target if kind != "x")
            if out_bundle == "J":
                ja, jb = (ka, kb) if a.bundle == "J" else (kb, ka)
                y = ja.y
                fiber = ja.fiber
                # the S factor multiplies group 0
                s_y = kb.y if a.bundle == "J" else ka.y
                fiber = (tuple(p + q for p, q in zip(fiber[0], s_y)),) + fiber[1:]
            else:
                y = tuple(p + q for p, q in zip(ka.y, kb.y))
                if out_bundle in ("T", "A"):
                    fiber = fib_odd
                elif out_bundle == "D":
                    fiber = ka.fiber if a.bundle == "D" else kb.fiber
                else:
                    fiber = ()
            key = Multigrade(xi, y, fiber)
            if _ydeg(key, out_bundle) > N:
                continue
            c = ca * cb
            if sign < 0:
                c = -c
            s = out.get(key)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(key, None)
            else:
                out[key] = s
    return GradedSection(out_bundle, a.r, a.n, N, out,
                         min(a.validity, b.validity), caps)
