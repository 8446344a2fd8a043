import random

import pytest

from ealgebra.exact import BasePoly, Q
from ealgebra.algebroid import AlgebroidChart


def abelian2_chart() -> AlgebroidChart:
    """Rank-2 tangent-type chart over R^2: rho = id, c = 0."""
    n = 2
    one = BasePoly.one(n)
    zero = BasePoly.zero(n)
    return AlgebroidChart(n=n, r=2, anchor=[[one, zero], [zero, one]], structure={})


def aff1_chart() -> AlgebroidChart:
    """aff(1) over a point: [e_1, e_2] = e_1, trivial anchor."""
    n = 0
    one = BasePoly.one(n)
    return AlgebroidChart(n=n, r=2, anchor=[[], []], structure={(1, 2, 1): one})


def sl2_chart() -> AlgebroidChart:
    """sl2 acting on the line: rho(e_1)=d/dx, rho(e_2)=x d/dx, rho(e_3)=x^2 d/dx."""
    n = 1
    one = BasePoly.one(n)
    x = BasePoly.variable(n, 1)
    return AlgebroidChart(
        n=n, r=3,
        anchor=[[one], [x], [x * x]],
        structure={(1, 2, 1): one, (1, 3, 2): BasePoly.const(n, 2), (2, 3, 3): one},
    )


def curved2_chart() -> AlgebroidChart:
    """Abelian rank-2 chart over R^2 used with the curved Gamma_12^1 = x^2 override."""
    return abelian2_chart()


def invalid_anchor_chart() -> AlgebroidChart:
    """rho(e_1)=d/dx1, rho(e_2)=x^1 d/dx1 with c = 0: anchor morphism fails."""
    n = 2
    one = BasePoly.one(n)
    zero = BasePoly.zero(n)
    x1 = BasePoly.variable(n, 1)
    return AlgebroidChart(n=n, r=2, anchor=[[one, zero], [x1, zero]], structure={})


@pytest.fixture
def abelian2():
    return abelian2_chart()


@pytest.fixture
def aff1():
    return aff1_chart()


@pytest.fixture
def sl2():
    return sl2_chart()


@pytest.fixture
def invalid_anchor():
    return invalid_anchor_chart()


@pytest.fixture
def rng():
    return random.Random(20240901)


def random_poly(rng, n, max_deg=2, max_terms=2) -> BasePoly:
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        exps = tuple(rng.randint(0, max_deg) for _ in range(n))
        if sum(exps) > max_deg:
            exps = tuple(0 for _ in range(n))
        terms[exps] = Q(rng.randint(-4, 4), rng.randint(1, 3))
    return BasePoly(n, terms)
