"""Lifting of a contraction A into an operator B = [A C] with B B* = Id.

With C = (Id - A A*)^{1/2}, the problem min f(x) + g(Ax) is lifted to
min f̃(x, z) + g(B(x, z)) on X × Z with f̃ = f ⊕ ι_{0}. Chambolle-Pock on the
original problem is then a Douglas-Rachford iteration on the lifted one.
"""

import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .errors import InvalidInputError
from .linalg import DenseOperator, RealVector, VectorLike, as_vector, block_row, freeze, operator_norm, psd_sqrt
from .prox import PointIndicator, ProxFunction, SeparableSum, separable_pair

logger = logging.getLogger(__name__)

NORM_SLACK = 1e-10
ISOMETRY_TOL = 1e-9


@dataclass(frozen=True)
class LiftedProblem:
    """A, its complement C, the block operator B = [A C] and f̃ = f ⊕ ι_{0}."""

    A: DenseOperator
    C: DenseOperator
    B: DenseOperator
    f_tilde: SeparableSum

    @property
    def dim_x(self) -> int:
        return self.A.cols

    @property
    def dim_z(self) -> int:
        return self.C.cols

    @property
    def dim(self) -> int:
        return self.dim_x + self.dim_z

    def split(self, w: VectorLike) -> Tuple[RealVector, RealVector]:
        """(x, z) blocks of a product-space vector."""
        return self.f_tilde.split(w)

    def join(self, x: VectorLike, z: VectorLike) -> RealVector:
        """Stack (x, z) into one vector of the lifted space X × Z.

        Raises:
            InvalidInputError: If a block has the wrong dimension
        """
        xv, zv = as_vector(x, "x"), as_vector(z, "z")
        if xv.shape[0] != self.dim_x or zv.shape[0] != self.dim_z:
            raise InvalidInputError(
                f"lifted vector blocks have dimensions ({xv.shape[0]}, {zv.shape[0]}), "
                f"expected ({self.dim_x}, {self.dim_z})"
            )
        return freeze(np.concatenate([xv, zv]))

    def prox_f_tilde(self, x: VectorLike, z: VectorLike) -> Tuple[RealVector, RealVector]:
        """Prox_f̃(x, z) = (Prox_f x, 0)."""
        return self.split(self.f_tilde.prox(self.join(x, z)))

    def prox_f_tilde_vector(self, w: VectorLike) -> RealVector:
        """Prox_f̃ on a stacked product-space vector."""
        return self.f_tilde.prox(w)

    def prox_gB_conjugate(self, gconj, w: VectorLike) -> RealVector:
        """Prox of (g ∘ B)* as B* Prox_{g*} B w, valid because B B* = Id.

        Args:
            gconj: Prox oracle of g*
            w: Point of X × Z
        """
        vec = self.f_tilde._check(w, "w")
        return self.B.adjoint_apply(gconj(self.B.apply(vec)))

    def isometry_defect(self) -> float:
        """max |B B* - Id| entrywise."""
        bbt = self.B.matrix @ self.B.matrix.T
        return float(np.max(np.abs(bbt - np.eye(self.B.rows))))


def lift(A: DenseOperator, f: ProxFunction) -> LiftedProblem:
    """Build C = (Id - A A*)^{1/2}, B = [A C] and f̃ = f ⊕ ι_{0}.

    Raises:
        InvalidInputError: If ‖A‖ > 1 or f does not live on the domain of A
    """
    if f.dim != A.cols:
        raise InvalidInputError(f"lift: f has dimension {f.dim}, A has {A.cols} columns")
    norm = operator_norm(A)
    if norm > 1.0 + NORM_SLACK:
        raise InvalidInputError(f"lift needs ‖A‖ <= 1, got {norm:.6g}; rescale A first")

    complement = DenseOperator(np.eye(A.rows) - A.matrix @ A.matrix.T)
    C = psd_sqrt(complement)
    B = block_row(A, C)
    f_tilde = separable_pair(f, PointIndicator(np.zeros(A.rows)))
    lifted = LiftedProblem(A=A, C=C, B=B, f_tilde=f_tilde)

    defect = lifted.isometry_defect()
    if defect > ISOMETRY_TOL:
        logger.warning("lifted operator deviates from an isometry: max |BB* - Id| = %.3e", defect)
    logger.debug("lifted %s into %s (BB* defect %.1e)", A, B, defect)
    return lifted


def prox_f_tilde(lp: LiftedProblem, x: VectorLike, z: VectorLike) -> Tuple[RealVector, RealVector]:
    """Prox of f̃(x, z) = f(x) + ι_{0}(z), i.e. (Prox_f x, 0)."""
    return lp.prox_f_tilde(x, z)


def prox_gB_conjugate(lp: LiftedProblem, gconj, w: VectorLike) -> RealVector:
    """Prox of (g ∘ B)* at w, as B* Prox_{g*}(B w); valid because B B* = Id."""
    return lp.prox_gB_conjugate(gconj, w)
