"""Chart-level model of a Lie algebroid and its polyvector/form calculus.

A chart is a trivialized rank-r bundle over a polynomial coordinate patch
x^1..x^n: the anchor is an r x n matrix of polynomials rho_i^a(x), the bracket
of frame sections is [e_i, e_j] = c_ij^k(x) e_k.

Chart-level polyvectors and forms reuse the fiberwise section containers with
y-degree zero: a polyvector f(x) e_{j0} ^ ... ^ e_{jk} is stored as a T-term
whose wedge payload holds (j0..jk), and an E-form as an A-term whose payload
holds the dy indices.  This matches the canonical identification of the
truncation-degree-zero part of the fiberwise bundles with the chart bundles.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .exact import BasePoly, koszul_sign, sort_odd
from .sections import GradedSection, Multigrade, term_degree


class ChartError(ValueError):
    pass


@dataclass
class AlgebroidChart:
    """rank-r algebroid data over a polynomial chart of dimension n.

    anchor[i][a] is the coefficient of d/dx^{a+1} in rho(e_{i+1});
    structure holds c_ij^k for i < j (antisymmetry fills in the rest).
    """

    n: int
    r: int
    anchor: list
    structure: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(self.anchor) != self.r or any(len(row) != self.n for row in self.anchor):
            raise ChartError("anchor must be an r x n matrix of polynomials")
        clean = {}
        for (i, j, k), poly in self.structure.items():
            if not (1 <= i <= self.r and 1 <= j <= self.r and 1 <= k <= self.r):
                raise ChartError("structure index out of range: %r" % ((i, j, k),))
            if i == j:
                if not poly.is_zero():
                    raise ChartError("c_%d%d must vanish" % (i, i))
                continue
            if i > j:
                i, j, poly = j, i, -poly
            cur = clean.get((i, j, k))
            clean[(i, j, k)] = poly if cur is None else cur + poly
        self.structure = {k: v for k, v in clean.items() if not v.is_zero()}

    # -- basic accessors -----------------------------------------------------

    def c(self, i: int, j: int, k: int) -> BasePoly:
        if i == j:
            return BasePoly.zero(self.n)
        if i < j:
            return self.structure.get((i, j, k), BasePoly.zero(self.n))
        return -self.structure.get((j, i, k), BasePoly.zero(self.n))

    def rho(self, i: int, f: BasePoly) -> BasePoly:
        """Anchor action of the frame section e_i on a base function."""
        out = BasePoly.zero(self.n)
        for a in range(1, self.n + 1):
            out = out + self.anchor[i - 1][a - 1] * f.derivative(a)
        return out

    def bracket_gen(self, i: int, j: int) -> list:
        """[e_i, e_j] as a list of (k, coefficient)."""
        out = []
        for k in range(1, self.r + 1):
            ck = self.c(i, j, k)
            if not ck.is_zero():
                out.append((k, ck))
        return out

    # -- chart-level section constructors -------------------------------------

    def function(self, poly: BasePoly, N: int = 0) -> GradedSection:
        """A base function as a degree -1 polyvector (empty wedge payload)."""
        key = Multigrade((), (0,) * self.r, ())
        return GradedSection("T", self.r, self.n, N, {key: poly})

    def polyvector(self, terms: dict, N: int = 0) -> GradedSection:
        """terms: wedge index tuple -> BasePoly (indices need not be sorted)."""
        out = {}
        for wedge, poly in terms.items():
            sign, ordered = sort_odd(tuple(wedge))
            if sign == 0:
                continue
            key = Multigrade((), (0,) * self.r, ordered)
            c = poly if sign > 0 else -poly
            cur = out.get(key)
            out[key] = c if cur is None else cur + c
        return GradedSection("T", self.r, self.n, N, out)

    def generator(self, i: int, N: int = 0) -> GradedSection:
        return self.polyvector({(i,): BasePoly.one(self.n)}, N)

    def eform(self, terms: dict, N: int = 0) -> GradedSection:
        """terms: dy index tuple -> BasePoly; () gives a function as a 0-form."""
        out = {}
        for dys, poly in terms.items():
            sign, ordered = sort_odd(tuple(dys))
            if sign == 0:
                continue
            key = Multigrade((), (0,) * self.r, ordered)
            c = poly if sign > 0 else -poly
            cur = out.get(key)
            out[key] = c if cur is None else cur + c
        return GradedSection("A", self.r, self.n, N, out)


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    failures: tuple = ()

    def first(self) -> str:
        return self.failures[0] if self.failures else ""


def validate_chart(chart: AlgebroidChart) -> ValidationReport:
    """Check the anchor morphism property and the Jacobi identity.

    The anchor must carry [e_i,e_j] = c_ij^k e_k to the commutator of the
    vector fields rho(e_i); the bracket must satisfy Jacobi with the anchor
    correction terms that x-dependent structure functions generate.
    """
    failures = []
    n, r = chart.n, chart.r
    for i in range(1, r + 1):
        for j in range(i + 1, r + 1):
            for a in range(1, n + 1):
                lhs = BasePoly.zero(n)
                for k in range(1, r + 1):
                    lhs = lhs + chart.c(i, j, k) * chart.anchor[k - 1][a - 1]
                rhs = chart.rho(i, chart.anchor[j - 1][a - 1]) - chart.rho(j, chart.anchor[i - 1][a - 1])
                if lhs != rhs:
                    failures.append("anchor-morphism fails at (e_%d, e_%d), component d/dx^%d" % (i, j, a))
                    break
            else:
                continue
            break
        else:
            continue
        break
    for i in range(1, r + 1):
        for j in range(i + 1, r + 1):
            for k in range(j + 1, r + 1):
                for l in range(1, r + 1):
                    acc = BasePoly.zero(n)
                    for (a, b, c) in ((i, j, k), (j, k, i), (k, i, j)):
                        for m in range(1, r + 1):
                            acc = acc + chart.c(a, b, m) * chart.c(m, c, l)
                        acc = acc - chart.rho(c, chart.c(a, b, l))
                    if not acc.is_zero():
                        failures.append("jacobi fails at (e_%d, e_%d, e_%d), component e_%d" % (i, j, k, l))
                        break
                else:
                    continue
                break
            else:
                continue
            break
        else:
            continue
        break
    return ValidationReport(not failures, tuple(failures))


# -- Schouten bracket ---------------------------------------------------------
#
# Terms are handled as (coefficient, wedge) pairs; the coefficient acts as a
# degree -1 wedge factor for the Leibniz recursion, which bottoms out on the
# generator/function brackets.  All reordering signs go through koszul_sign.


def _wedge_pair(n, f1, w1, f2, w2):
    sign, ordered = sort_odd(w1 + w2)
    if sign == 0:
        return None
    c = f1 * f2
    return (c if sign > 0 else -c), ordered


def _br_terms(chart: AlgebroidChart, f1: BasePoly, w1: tuple, f2: BasePoly, w2: tuple) -> list:
    """Bracket of f1*e_{w1} with f2*e_{w2} as a list of (coeff, wedge)."""
    n = chart.n
    one = BasePoly.one(n)
    deg1 = len(w1) - 1
    deg2 = len(w2) - 1
    c2_trivial = f2 == one
    c1_trivial = f1 == one
    # split the second argument
    if not c2_trivial:
        # [u, f ^ W] = [u,f] ^ W + f ^ [u,W]   (second factor degree -1)
        out = []
        for cf, wf in _br_terms(chart, f1, w1, f2, ()):
            t = _wedge_pair(n, cf, wf, one, w2)
            if t:
                out.append(t)
        for cf, wf in _br_terms(chart, f1, w1, one, w2):
            t = _wedge_pair(n, f2, (), cf, wf)
            if t:
                out.append(t)
        return out
    if len(w2) >= 2:
        # [u, v ^ W] = [u,v] ^ W + (-1)^{deg1} v ^ [u,W]   (v a single generator)
        head, rest = (w2[0],), w2[1:]
        out = []
        for cf, wf in _br_terms(chart, f1, w1, one, head):
            t = _wedge_pair(n, cf, wf, one, rest)
            if t:
                out.append(t)
        sgn = -1 if deg1 % 2 else 1
        for cf, wf in _br_terms(chart, f1, w1, one, rest):
            t = _wedge_pair(n, one, head, cf, wf)
            if t:
                out.append((t[0] if sgn > 0 else -t[0], t[1]))
        return out
    # second argument is now simple: a function f2*() with f2 == 1 handled
    # below, or a single generator.
    if not c1_trivial or len(w1) >= 2:
        # graded antisymmetry [u,v] = -(-1)^{deg1*deg2}[v,u]
        sgn = -((-1) ** (deg1 * deg2))
        out = []
        for cf, wf in _br_terms(chart, f2, w2, f1, w1):
            out.append((cf if sgn > 0 else -cf, wf))
        return out
    # both simple
    if not w1 and not w2:
        return []
    if w1 and not w2:
        g = chart.rho(w1[0], f2)
        return [] if g.is_zero() else [(g, ())]
    if not w1 and w2:
        g = -chart.rho(w2[0], f1)
        return [] if g.is_zero() else [(g, ())]
    return [(ck, (k,)) for k, ck in chart.bracket_gen(w1[0], w2[0])]


def schouten(chart: AlgebroidChart, u: GradedSection, v: GradedSection) -> GradedSection:
    """Graded Lie bracket of chart-level polyvectors."""
    if u.bundle != "T" or v.bundle != "T":
        raise ChartError("schouten expects polyvector sections")
    N = min(u.N, v.N)
    out: dict[Multigrade, BasePoly] = {}
    zero_y = (0,) * chart.r
    for k1, c1 in u.terms.items():
        for k2, c2 in v.terms.items():
            for coeff, wedge in _br_terms(chart, c1, k1.fiber, c2, k2.fiber):
                key = Multigrade((), zero_y, wedge)
                cur = out.get(key)
                s = coeff if cur is None else cur + coeff
                if s.is_zero():
                    out.pop(key, None)
                else:
                    out[key] = s
    return GradedSection("T", chart.r, chart.n, N, out, min(u.validity, v.validity))


def wedge(u: GradedSection, v: GradedSection) -> GradedSection:
    """Exterior product of polyvectors (or of forms)."""
    from .sections import section_mul
    return section_mul(u, v)


# -- E-forms: differential, contraction, Lie derivative ------------------------


def e_de_rham(chart: AlgebroidChart, omega: GradedSection) -> GradedSection:
    """Chevalley-Eilenberg style differential on chart E-forms."""
    if omega.bundle != "A":
        raise ChartError("e_de_rham expects an E-form section")
    n, r = chart.n, chart.r
    zero_y = (0,) * r
    out: dict[Multigrade, BasePoly] = {}

    def put(wedge_tuple, coeff):
        sign, ordered = sort_odd(wedge_tuple)
        if sign == 0 or coeff.is_zero():
            return
        key = Multigrade((), zero_y, ordered)
        c = coeff if sign > 0 else -coeff
        cur = out.get(key)
        s = c if cur is None else cur + c
        if s.is_zero():
            out.pop(key, None)
        else:
            out[key] = s

    half = Fraction(1, 2)
    for key, f in omega.terms.items():
        w = key.fiber
        for i in range(1, r + 1):
            g = chart.rho(i, f)
            if not g.is_zero():
                put((i,) + w, g)
        for pos, gen in enumerate(w):
            head_sign = -1 if pos % 2 else 1
            for i in range(1, r + 1):
                for j in range(1, r + 1):
                    if i == j:
                        continue
                    cij = chart.c(i, j, gen)
                    if cij.is_zero():
                        continue
                    coeff = f * cij.scale(-half)
                    if head_sign < 0:
                        coeff = -coeff
                    put(w[:pos] + (i, j) + w[pos + 1:], coeff)
    return GradedSection("A", r, n, omega.N, out, omega.validity)


def contract(chart: AlgebroidChart, u: GradedSection, omega: GradedSection) -> GradedSection:
    """Interior product of a polyvector into an E-form; iota_{u^v} = iota_u iota_v."""
    if u.bundle != "T" or omega.bundle != "A":
        raise ChartError("contract expects (polyvector, E-form)")
    result = omega.zero_like()
    for key, coeff in u.terms.items():
        part = _contract_mono(chart, coeff, key.fiber, omega)
        result = result + part
    return result


def _contract_mono(chart, coeff, wedge_idx, omega):
    if not wedge_idx:
        return omega.with_terms({k: c * coeff for k, c in omega.terms.items()})
    head, rest = wedge_idx[0], wedge_idx[1:]
    inner = _contract_mono(chart, coeff, rest, omega)
    out = {}
    for key, f in inner.terms.items():
        w = key.fiber
        for pos, gen in enumerate(w):
            if gen != head:
                continue
            sign = -1 if pos % 2 else 1
            nk = Multigrade((), key.y, w[:pos] + w[pos + 1:])
            c = f if sign > 0 else -f
            cur = out.get(nk)
            s = c if cur is None else cur + c
            if s.is_zero():
                out.pop(nk, None)
            else:
                out[nk] = s
            break
    return inner.with_terms(out)


def lie_derivative(chart: AlgebroidChart, u: GradedSection, omega: GradedSection) -> GradedSection:
    """Cartan formula E-Lie derivative of an E-form along a polyvector."""
    degs = u.homogeneous_degrees()
    if not degs:
        return omega.zero_like()
    if len(degs) > 1:
        out = omega.zero_like()
        for d in sorted(degs):
            part = u.with_terms({k: c for k, c in u.terms.items() if term_degree(k, "T") == d})
            out = out + lie_derivative(chart, part, omega)
        return out
    k = degs.pop()
    di = e_de_rham(chart, contract(chart, u, omega))
    ido = contract(chart, u, e_de_rham(chart, omega))
    if k % 2:
        ido = -ido
    return di + ido


# -- connections ----------------------------------------------------------------


@dataclass
class Connection:
    """Christoffel symbols gamma[i][j][k] = Gamma_ij^k, 1-based frame indices."""

    r: int
    n: int
    gamma: list

    @staticmethod
    def zero(chart: AlgebroidChart) -> "Connection":
        z = BasePoly.zero(chart.n)
        g = [[[z for _ in range(chart.r)] for _ in range(chart.r)] for _ in range(chart.r)]
        return Connection(chart.r, chart.n, g)

    def G(self, i: int, j: int, k: int) -> BasePoly:
        return self.gamma[i - 1][j - 1][k - 1]

    def set(self, i: int, j: int, k: int, poly: BasePoly):
        self.gamma[i - 1][j - 1][k - 1] = poly


def torsion_free(chart: AlgebroidChart) -> Connection:
    """The single-chart torsion-free connection Gamma_ij^k = c_ij^k / 2."""
    conn = Connection.zero(chart)
    half = Fraction(1, 2)
    for i in range(1, chart.r + 1):
        for j in range(1, chart.r + 1):
            for k in range(1, chart.r + 1):
                conn.set(i, j, k, chart.c(i, j, k).scale(half))
    return conn


def torsion(chart: AlgebroidChart, conn: Connection) -> dict:
    """Components T_ij^k = Gamma_ij^k - Gamma_ji^k - c_ij^k (only nonzero ones)."""
    out = {}
    for i in range(1, chart.r + 1):
        for j in range(1, chart.r + 1):
            for k in range(1, chart.r + 1):
                t = conn.G(i, j, k) - conn.G(j, i, k) - chart.c(i, j, k)
                if not t.is_zero():
                    out[(i, j, k)] = t
    return out


def curvature(chart: AlgebroidChart, conn: Connection) -> dict:
    """Components (R_ij)_k^l of the curvature of the connection."""
    out = {}
    r = chart.r
    for i in range(1, r + 1):
        for j in range(1, r + 1):
            for k in range(1, r + 1):
                for l in range(1, r + 1):
                    acc = chart.rho(i, conn.G(j, k, l)) - chart.rho(j, conn.G(i, k, l))
                    for m in range(1, r + 1):
                        acc = acc + conn.G(i, m, l) * conn.G(j, k, m)
                        acc = acc - conn.G(i, k, m) * conn.G(j, m, l)
                        acc = acc - chart.c(i, j, m) * conn.G(m, k, l)
                    if not acc.is_zero():
                        out[(i, j, k, l)] = acc
    return out


def _curv_matrix(curv: dict, chart, i, j):
    """R(e_i, e_j) as an r x r matrix acting on frame indices: M[k][l] = (R_ij)_k^l."""
    z = BasePoly.zero(chart.n)
    return [[curv.get((i, j, k + 1, l + 1), z) for l in range(chart.r)] for k in range(chart.r)]


def bianchi_residuals(chart: AlgebroidChart, conn: Connection) -> tuple:
    """Residual tensors of the two Bianchi identities for a torsion-free connection.

    Returns (first, second): dicts over generator triples that fail; empty
    dicts mean both identities hold.  Assumes vanishing torsion (checked).
    """
    if torsion(chart, conn):
        raise ChartError("bianchi_residuals expects a torsion-free connection")
    curv = curvature(chart, conn)
    r, n = chart.r, chart.n
    z = BasePoly.zero(n)
    first, second = {}, {}

    def nabla_R(a, i, j):
        # (nabla_{e_a} R)(e_i, e_j) as a matrix: derivative of components minus
        # the three connection insertions.
        M = _curv_matrix(curv, chart, i, j)
        out = [[chart.rho(a, M[k][l]) for l in range(r)] for k in range(r)]
        for k in range(r):
            for l in range(r):
                acc = out[k][l]
                for m in range(1, r + 1):
                    Mi = _curv_matrix(curv, chart, m, j)
                    acc = acc - conn.G(a, i, m) * Mi[k][l]
                    Mj = _curv_matrix(curv, chart, i, m)
                    acc = acc - conn.G(a, j, m) * Mj[k][l]
                    acc = acc - conn.G(a, k + 1, m) * M[m - 1][l]
                    acc = acc + conn.G(a, m, l + 1) * M[k][m - 1]
                out[k][l] = acc
        return out

    for i in range(1, r + 1):
        for j in range(1, r + 1):
            for k in range(1, r + 1):
                accs = [[z for _ in range(r)] for _ in range(r)]
                for (a, b, c) in ((i, j, k), (j, k, i), (k, i, j)):
                    M = nabla_R(a, b, c)
                    for p in range(r):
                        for q in range(r):
                            accs[p][q] = accs[p][q] + M[p][q]
                bad = {(p + 1, q + 1): v for p, row in enumerate(accs)
                       for q, v in enumerate(row) if not v.is_zero()}
                if bad:
                    first[(i, j, k)] = bad
                for l in range(1, r + 1):
                    acc = z
                    for (a, b, c) in ((i, j, k), (j, k, i), (k, i, j)):
                        acc = acc + curv.get((a, b, c, l), z)
                    if not acc.is_zero():
                        second.setdefault((i, j, k), {})[l] = acc
    return first, second
