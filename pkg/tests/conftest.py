"""Shared fixtures for the splitting-equivalence test suite."""

import numpy as np
import pytest

from splitting_equivalence.linalg import DenseOperator
from splitting_equivalence.problems import COMPOSITE_L, ProblemBundle
from splitting_equivalence.prox import (
    AffineIndicator,
    BoxIndicator,
    HalfSquaredDistance,
    HalfspaceIndicator,
    L1Norm,
    PointIndicator,
    QuadraticFunction,
    SubspaceIndicator,
    ZeroFunction,
    half_squared_norm,
    separable_pair,
)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def quad1():
    """½t² on the real line."""
    return half_squared_norm(1)


@pytest.fixture
def quadratic_1d_problem():
    """min ½(Ly)² + ½y² with L = 1."""
    return ProblemBundle(COMPOSITE_L, half_squared_norm(1), half_squared_norm(1), DenseOperator.identity(1))


@pytest.fixture
def line():
    """The diagonal R·(1,1)."""
    return SubspaceIndicator([[1.0, 1.0]], 2)


@pytest.fixture
def lower_half_plane():
    """R × R₋."""
    return HalfspaceIndicator([0.0, 1.0], 0.0)


def catalog_2d():
    """One member of every catalog kind on R² (plus calculus wrappers)."""
    quad = QuadraticFunction([[2.0, 0.5], [0.5, 1.0]], [0.3, -0.2])
    return [
        ZeroFunction(2),
        quad,
        SubspaceIndicator([[1.0, 2.0]], 2),
        AffineIndicator([[1.0, -1.0]], [0.5, 0.5]),
        HalfspaceIndicator([1.0, 1.0], 0.5),
        BoxIndicator([-1.0, -np.inf], [0.5, 2.0]),
        PointIndicator([0.25, -0.75]),
        L1Norm(2, 0.7),
        HalfSquaredDistance(BoxIndicator([-1.0, -1.0], [1.0, 1.0])),
        quad.translate([1.0, -2.0]),
        L1Norm(2, 1.0).reflect(),
        separable_pair(L1Norm(1, 0.5), half_squared_norm(1)),
    ]


@pytest.fixture(params=range(len(catalog_2d())), ids=lambda i: catalog_2d()[i].kind)
def catalog_member(request):
    return catalog_2d()[request.param]
