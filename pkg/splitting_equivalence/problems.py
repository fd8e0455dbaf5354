"""Reproducible problem instances.

Random instances draw from ``numpy.random.default_rng(seed)`` (the PCG64
bit generator), whose stream is fixed for a given seed on every platform,
so traces and equivalence reports can be replayed exactly.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Optional

import numpy as np

from .errors import InvalidInputError
from .linalg import DenseOperator, RealVector, as_vector, check_gram_invertible, freeze, operator_norm
from .prox import (
    HalfspaceIndicator,
    L1Norm,
    ProxFunction,
    SubspaceIndicator,
    shifted_quadratic,
)

logger = logging.getLogger(__name__)

COMPOSITE_L = "composite-L"
COMPOSITE_A = "composite-A"
FEASIBILITY = "feasibility"
FORMS = (COMPOSITE_L, COMPOSITE_A, FEASIBILITY)

NORM_SLACK = 1e-10
MIN_CURVATURE = 0.1


@dataclass(frozen=True)
class ProblemBundle:
    """A problem instance together with suggested starting vectors.

    Forms:
        composite-L: minimize f(Ly) + g(y) with L: Y -> X (f on X, g on Y)
        composite-A: minimize f(x) + g(Ax) with A: X -> Y, ‖A‖ ≤ 1 (f on X, g on Y)
        feasibility: find x in U ∩ V with f = ι_U, g = ι_V and op = Id
    """

    form: str
    f: ProxFunction
    g: ProxFunction
    op: DenseOperator
    seed: Optional[int] = None
    start: Dict[str, RealVector] = field(default_factory=dict)

    def __post_init__(self):
        if self.form not in FORMS:
            raise InvalidInputError(f"Unsupported problem form: {self.form}. Supported forms: {', '.join(FORMS)}")
        if self.form == COMPOSITE_L:
            self._expect(self.f.dim == self.op.rows, f"f has dimension {self.f.dim}, L has {self.op.rows} rows")
            self._expect(self.g.dim == self.op.cols, f"g has dimension {self.g.dim}, L has {self.op.cols} columns")
            check_gram_invertible(self.op)
        elif self.form == COMPOSITE_A:
            self._expect(self.f.dim == self.op.cols, f"f has dimension {self.f.dim}, A has {self.op.cols} columns")
            self._expect(self.g.dim == self.op.rows, f"g has dimension {self.g.dim}, A has {self.op.rows} rows")
            norm = operator_norm(self.op)
            self._expect(norm <= 1.0 + NORM_SLACK, f"‖A‖ = {norm:.6g} exceeds 1; rescale A first")
        else:
            self._expect(self.f.is_indicator and self.g.is_indicator, "feasibility needs indicator functions")
            self._expect(self.f.dim == self.g.dim, "feasibility sets live in different dimensions")
            self._expect(
                self.op.is_square() and self.op.rows == self.f.dim and np.array_equal(self.op.matrix, np.eye(self.f.dim)),
                "feasibility problems use the identity operator",
            )

    def _expect(self, condition: bool, message: str) -> None:
        if not condition:
            raise InvalidInputError(f"{self.form} problem: {message}")

    @property
    def dim_x(self) -> int:
        return self.f.dim

    @property
    def dim_y(self) -> int:
        return self.g.dim


def make_counterexample(alpha: float, beta: float) -> ProblemBundle:
    """The line U = R·(1,1) against the half-plane V = R × R₋, started at (alpha, beta).

    Raises:
        InvalidInputError: Unless alpha < 0 < beta and beta <= -alpha
    """
    if not (alpha < 0.0 < beta and beta <= -alpha):
        raise InvalidInputError(
            f"counterexample needs alpha < 0 < beta <= -alpha, got alpha={alpha}, beta={beta}"
        )
    U = SubspaceIndicator([[1.0, 1.0]], 2)
    V = HalfspaceIndicator([0.0, 1.0], 0.0)
    return ProblemBundle(FEASIBILITY, U, V, DenseOperator.identity(2), start={"x0": as_vector([alpha, beta])})


def _random_curvature(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Random symmetric positive definite matrix for a quadratic."""
    m = rng.standard_normal((dim, dim))
    return m @ m.T / dim + MIN_CURVATURE * np.eye(dim)


def _random_unit_gram_operator(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    """Random rows x cols operator built from orthonormal factors."""
    # singular values in [0.5, 1] with the largest equal to 1, so ‖L*L‖ = 1 and cond(L*L) <= 4
    left, _ = np.linalg.qr(rng.standard_normal((rows, cols)))
    right, _ = np.linalg.qr(rng.standard_normal((cols, cols)))
    singular = rng.uniform(0.5, 1.0, size=cols)
    singular[0] = 1.0
    return (left * singular) @ right.T


def make_random_quadratic(seed: int, dim_x: int, dim_y: int, form: str) -> ProblemBundle:
    """Seeded strongly convex quadratic pair (curvature ⪰ 0.1·Id) with a well-posed operator.

    For composite-L the operator L: Y -> X has ‖L*L‖ = 1 (so dim_x >= dim_y is
    required); for composite-A the operator A: X -> Y is scaled to ‖A‖ <= 1.

    Raises:
        InvalidInputError: For non-positive dimensions, an unknown form, or dim_x < dim_y with composite-L
    """
    if dim_x < 1 or dim_y < 1:
        raise InvalidInputError(f"dimensions must be >= 1, got {dim_x}, {dim_y}")
    rng = np.random.default_rng(seed)

    if form == COMPOSITE_L:
        if dim_x < dim_y:
            raise InvalidInputError(f"composite-L needs dim_x >= dim_y for L*L to be invertible, got {dim_x} < {dim_y}")
        op = DenseOperator(_random_unit_gram_operator(rng, dim_x, dim_y))
    elif form == COMPOSITE_A:
        raw = DenseOperator(rng.standard_normal((dim_y, dim_x)))
        op = raw.scaled(rng.uniform(0.5, 1.0) / operator_norm(raw))
    else:
        raise InvalidInputError(f"random quadratic instances support {COMPOSITE_L} and {COMPOSITE_A}, got {form}")

    f = shifted_quadratic(_random_curvature(rng, dim_x), rng.standard_normal(dim_x))
    g = shifted_quadratic(_random_curvature(rng, dim_y), rng.standard_normal(dim_y))

    if form == COMPOSITE_L:
        start = {
            "x0": freeze(rng.standard_normal(dim_x)),
            "a0": freeze(rng.standard_normal(dim_x)),
            "u0": freeze(rng.standard_normal(dim_x)),
        }
    else:
        start = {"u0": freeze(rng.standard_normal(dim_x)), "v0": freeze(rng.standard_normal(dim_y))}
    logger.debug("generated %s quadratic instance from seed %d", form, seed)
    return ProblemBundle(form, f, g, op, seed=seed, start=start)


def make_random_l1_quadratic(seed: int, dim: int) -> ProblemBundle:
    """Nonsmooth composite-A instance with A = Id: f = w·‖x‖₁, g a strongly convex quadratic."""
    if dim < 1:
        raise InvalidInputError(f"dimension must be >= 1, got {dim}")
    rng = np.random.default_rng(seed)
    f = L1Norm(dim, float(rng.uniform(0.5, 1.5)))
    g = shifted_quadratic(_random_curvature(rng, dim), 2.0 * rng.standard_normal(dim))
    start = {"u0": freeze(2.0 * rng.standard_normal(dim)), "v0": freeze(rng.standard_normal(dim))}
    return ProblemBundle(COMPOSITE_A, f, g, DenseOperator.identity(dim), seed=seed, start=start)


def make_random_subspace_pair(seed: int, dim: int, dim_u: int, dim_v: int) -> ProblemBundle:
    """Two random linear subspaces of R^dim spanned by Gaussian vectors."""
    if not (1 <= dim_u <= dim and 1 <= dim_v <= dim):
        raise InvalidInputError(f"subspace dimensions must lie in [1, {dim}], got {dim_u}, {dim_v}")
    rng = np.random.default_rng(seed)
    U = SubspaceIndicator(list(rng.standard_normal((dim_u, dim))), dim)
    V = SubspaceIndicator(list(rng.standard_normal((dim_v, dim))), dim)
    start = {"x0": freeze(rng.standard_normal(dim))}
    return ProblemBundle(FEASIBILITY, U, V, DenseOperator.identity(dim), seed=seed, start=start)
