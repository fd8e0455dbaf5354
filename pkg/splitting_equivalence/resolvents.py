"""The generalized resolvent (L*L + ∂g)^{-1} and the dual proximal maps built on it."""

import logging

import numpy as np
import scipy.linalg

from .errors import InnerSolverError, InvalidInputError, UnsupportedValueError
from .linalg import (
    DenseOperator,
    RealVector,
    VectorLike,
    check_gram_invertible,
    freeze,
    largest_eigenvalue,
    smallest_eigenvalue,
)
from .prox import AffineIndicator, PointIndicator, ProxFunction, QuadraticFunction, SubspaceIndicator, ZeroFunction

logger = logging.getLogger(__name__)

QUADRATIC_G = "quadratic-g"
AFFINE_INDICATOR_G = "affine-indicator-g"
ITERATIVE_FALLBACK = "iterative-fallback"
UNIT_GRAM_G = "unit-gram-g"

INNER_TOL = 1e-12
MAX_INNER_ITERATIONS = 100_000
CERTIFICATE_TOL = 1e-8


class GeneralizedResolvent:
    """Solves r ∈ L*L b + ∂g(b) for b; the ADMM b-update.

    Closed forms are used when g is quadratic (including the zero function)
    or the indicator of an affine set, and when L*L = Id the resolvent is
    Prox_g itself; any other g falls back to an iterative inner solver.
    """

    def __init__(
        self,
        L: DenseOperator,
        g: ProxFunction,
        inner_tol: float = INNER_TOL,
        max_inner_iterations: int = MAX_INNER_ITERATIONS,
    ):
        """Initialize and cache the factorization needed by the solver.

        Raises:
            InvalidInputError: If g does not live on the domain of L
            SingularGramError: If L*L is numerically singular
        """
        if g.dim != L.cols:
            raise InvalidInputError(f"resolvent: g has dimension {g.dim}, L has {L.cols} columns")
        check_gram_invertible(L)
        self.L = L
        self.g = g
        self.inner_tol = inner_tol
        self.max_inner_iterations = max_inner_iterations
        self._gram = L.gram().matrix

        if isinstance(g, (QuadraticFunction, ZeroFunction)):
            self.solver = QUADRATIC_G
            Q = g.Q if isinstance(g, QuadraticFunction) else np.zeros_like(self._gram)
            self._shift = g.c if isinstance(g, QuadraticFunction) else np.zeros(g.dim)
            self._factor = scipy.linalg.cho_factor(self._gram + Q, check_finite=False)
        elif isinstance(g, (SubspaceIndicator, AffineIndicator, PointIndicator)):
            self.solver = AFFINE_INDICATOR_G
            self._init_affine(g)
        elif np.allclose(self._gram, np.eye(g.dim), rtol=0.0, atol=1e-14):
            # L*L = Id turns the resolvent into Prox_g
            self.solver = UNIT_GRAM_G
        else:
            self.solver = ITERATIVE_FALLBACK
            # prox-gradient on ½⟨b, L*L b⟩ - ⟨r, b⟩ + g(b) with step 1/λmax(L*L)
            self._lipschitz = largest_eigenvalue(self._gram)
            self._curvature = smallest_eigenvalue(self._gram)

        logger.debug("GeneralizedResolvent for %s uses solver %s", g.kind, self.solver)

    def _init_affine(self, g: ProxFunction) -> None:
        if isinstance(g, SubspaceIndicator):
            offset, basis = np.zeros(g.dim), g.basis
        elif isinstance(g, AffineIndicator):
            offset, basis = g.offset, g.direction.basis
        else:
            offset, basis = g.point, np.zeros((g.dim, 0))
        self._offset = np.array(offset, dtype=float)
        self._basis = np.array(basis, dtype=float)
        if self._basis.shape[1] > 0:
            # KKT system reduced to the null space of the constraints: b = offset + N t
            reduced = self._basis.T @ self._gram @ self._basis
            self._factor = scipy.linalg.cho_factor(reduced, check_finite=False)

    @property
    def dim_x(self) -> int:
        return self.L.rows

    @property
    def dim_y(self) -> int:
        return self.L.cols

    def solve(self, r: VectorLike) -> RealVector:
        """Unique b minimizing ½⟨b, L*L b⟩ - ⟨r, b⟩ + g(b).

        Raises:
            InvalidInputError: If dim(r) differs from dim Y
            InnerSolverError: If the iterative fallback does not converge or
                its result fails the residual certificate
        """
        vec = self.g._check(r, "r")
        if self.solver == QUADRATIC_G:
            b = scipy.linalg.cho_solve(self._factor, vec - self._shift, check_finite=False)
        elif self.solver == AFFINE_INDICATOR_G:
            b = self._solve_affine(vec)
        elif self.solver == UNIT_GRAM_G:
            b = self.g._prox(vec)
        else:
            b = self._solve_iterative(vec)
        b = freeze(b)
        if self.solver == ITERATIVE_FALLBACK:
            if not self.residual_certificate(vec, b):
                raise InnerSolverError("iterative resolvent: r - L*L b is not certified to lie in ∂g(b)")
        elif logger.isEnabledFor(logging.DEBUG):
            logger.debug("%s resolvent certificate: %s", self.solver, self.residual_certificate(vec, b))
        return b

    def _solve_affine(self, r: np.ndarray) -> np.ndarray:
        if self._basis.shape[1] == 0:
            return self._offset.copy()
        rhs = self._basis.T @ (r - self._gram @ self._offset)
        t = scipy.linalg.cho_solve(self._factor, rhs, check_finite=False)
        return self._offset + self._basis @ t

    def _solve_iterative(self, r: np.ndarray) -> np.ndarray:
        """Unaccelerated prox-gradient from b = 0 with step 1/λmax(L*L).

        Stops once the gradient-map residual divided by λmin(L*L), which
        bounds the distance to the solution up to a factor of two, is at most
        inner_tol · max(1, ‖r‖).
        """
        step = 1.0 / self._lipschitz
        threshold = self.inner_tol * self._curvature * max(1.0, float(np.linalg.norm(r)))
        b = np.zeros(self.dim_y)
        for k in range(self.max_inner_iterations):
            b_next = self.g._prox_step(b - step * (self._gram @ b - r), step)
            gradient_map = float(np.linalg.norm(b - b_next)) / step
            b = b_next
            if gradient_map <= threshold:
                logger.debug("iterative resolvent converged after %d inner iterations", k + 1)
                return b
        raise InnerSolverError(
            f"iterative resolvent did not reach {self.inner_tol:.1e} within {self.max_inner_iterations} iterations"
        )

    def residual_certificate(self, r: VectorLike, b: VectorLike, tol: float = CERTIFICATE_TOL) -> bool:
        """Whether r - L*L b ∈ ∂g(b); True when g has no closed-form subdifferential test."""
        rv = self.g._check(r, "r")
        bv = self.g._check(b, "b")
        try:
            return self.g.contains_subgradient(bv, rv - self._gram @ bv, tol)
        except UnsupportedValueError:
            return True

    def prox_dual_composition(self, x: VectorLike) -> RealVector:
        """Prox of (g* ∘ L*)*, computed as L (L*L + ∂g)^{-1} L* x."""
        return self.L.apply(self.solve(self.L.adjoint_apply(x)))

    def prox_composition_conjugate(self, x: VectorLike) -> RealVector:
        """Prox of g* ∘ L*, computed as x - L (L*L + ∂g)^{-1} L* x."""
        vec = np.asarray(x, dtype=float)
        return freeze(vec - self.prox_dual_composition(vec))
