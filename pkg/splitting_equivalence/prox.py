"""Catalog of proper lsc convex functions with exact proximal maps.

Every catalog member exposes ``value``, ``prox`` with unit step and
``prox_step`` for any positive step. The calculus used by the splitting
identities (conjugation through the Moreau identity, reflection x ↦ g(-x),
translation and separable sums) returns new ``ProxFunction`` objects
wrapping the original one.
"""

import logging
import math
from abc import ABC, abstractmethod
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg

from .errors import InvalidInputError, NotPositiveSemidefiniteError, UnsupportedValueError
from .linalg import (
    PSD_TOL,
    RealVector,
    VectorLike,
    as_vector,
    freeze,
    largest_eigenvalue,
    orthonormal_basis,
    smallest_eigenvalue,
)

logger = logging.getLogger(__name__)

CONTAINS_TOL = 1e-9


def _within(distance: float, scale: float, tol: float) -> bool:
    return distance <= tol * (1.0 + scale)


class ProxFunction(ABC):
    """Base convex function oracle: value, proximal map and calculus."""

    kind = "abstract"
    is_indicator = False

    def __init__(self, dim: int, strongly_convex_modulus: float = 0.0):
        """Initialize with the dimension of the underlying space."""
        if int(dim) != dim or dim < 1:
            raise InvalidInputError(f"{self.kind}: dimension must be a positive integer, got {dim}")
        self.dim = int(dim)
        self.strongly_convex_modulus = float(strongly_convex_modulus)

    def _check(self, x: VectorLike, name: str = "point") -> RealVector:
        vec = as_vector(x, name)
        if vec.shape[0] != self.dim:
            raise InvalidInputError(f"{self.kind}: expected dimension {self.dim}, got {vec.shape[0]}")
        return vec

    def value(self, x: VectorLike) -> float:
        """f(x), +inf outside the domain."""
        return float(self._value(self._check(x)))

    def __call__(self, x: VectorLike) -> float:
        return self.value(x)

    def prox(self, x: VectorLike) -> RealVector:
        """argmin_y f(y) + ½‖x - y‖²."""
        return freeze(self._prox(self._check(x)))

    def prox_step(self, x: VectorLike, step: float) -> RealVector:
        """argmin_y f(y) + ‖x - y‖² / (2·step), the prox of step·f.

        Raises:
            InvalidInputError: If step is not a positive finite number
        """
        if not math.isfinite(step) or step <= 0.0:
            raise InvalidInputError(f"{self.kind}: prox step must be positive and finite, got {step}")
        return freeze(self._prox_step(self._check(x), float(step)))

    def conjugate(self) -> "ProxFunction":
        """Fenchel conjugate, represented through the Moreau identity."""
        return ConjugateFunction(self)

    def reflect(self) -> "ProxFunction":
        """The function x ↦ f(-x)."""
        return ReflectedFunction(self)

    def translate(self, shift: VectorLike) -> "ProxFunction":
        """The function x ↦ f(x - shift)."""
        return TranslatedFunction(self, shift)

    def contains_subgradient(self, point: VectorLike, s: VectorLike, tol: float = CONTAINS_TOL) -> bool:
        """Whether s ∈ ∂f(point) up to tol.

        Raises:
            UnsupportedValueError: For kinds without a closed-form subdifferential test
        """
        return bool(self._contains_subgradient(self._check(point), self._check(s, "subgradient"), tol))

    @abstractmethod
    def _value(self, x: RealVector) -> float:
        """Evaluate - must be implemented by subclasses."""

    @abstractmethod
    def _prox(self, x: RealVector) -> np.ndarray:
        """Proximal map - must be implemented by subclasses."""

    @abstractmethod
    def to_config(self) -> Dict[str, Any]:
        """Config-file table describing this function."""

    def _prox_step(self, x: RealVector, step: float) -> np.ndarray:
        if step == 1.0:
            return self._prox(x)
        raise UnsupportedValueError(f"{self.kind} has no prox with step {step}")

    def _contains_subgradient(self, x: RealVector, s: RealVector, tol: float) -> bool:
        raise UnsupportedValueError(f"no subdifferential test for {self.kind}")

    def _conjugate_value(self, u: RealVector) -> float:
        raise UnsupportedValueError(f"conjugate of {self.kind} has no closed-form value")

    def _conjugate_modulus(self) -> float:
        return 0.0

    def __repr__(self) -> str:
        return f"{type(self).__name__}(dim={self.dim})"


class ZeroFunction(ProxFunction):
    """f ≡ 0; its conjugate is the indicator of the origin."""

    kind = "zero"

    def _value(self, x: RealVector) -> float:
        return 0.0

    def _prox(self, x: RealVector) -> np.ndarray:
        return x.copy()

    def _prox_step(self, x: RealVector, step: float) -> np.ndarray:
        return x.copy()

    def _contains_subgradient(self, x: RealVector, s: RealVector, tol: float) -> bool:
        return _within(float(np.linalg.norm(s)), 0.0, tol)

    def _conjugate_value(self, u: RealVector) -> float:
        return 0.0 if _within(float(np.linalg.norm(u)), 0.0, CONTAINS_TOL) else math.inf

    def to_config(self) -> Dict[str, Any]:
        return {"kind": self.kind, "dim": self.dim}


class QuadraticFunction(ProxFunction):
    """f(x) = ½⟨x, Qx⟩ + ⟨c, x⟩ + constant with Q symmetric positive semidefinite."""

    kind = "quadratic"

    def __init__(self, Q: Sequence[Sequence[float]], c: Optional[VectorLike] = None, constant: float = 0.0):
        """Initialize and cache the Cholesky factor of Id + Q.

        Raises:
            InvalidInputError: If Q is not square/symmetric or c has the wrong dimension
            NotPositiveSemidefiniteError: If Q has an eigenvalue below -1e-10
        """
        matrix = np.array(Q, dtype=float)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1] or matrix.shape[0] < 1:
            raise InvalidInputError(f"quadratic: Q must be a non-empty square matrix, got shape {matrix.shape}")
        if not np.all(np.isfinite(matrix)) or np.max(np.abs(matrix - matrix.T)) > 1e-10:
            raise InvalidInputError("quadratic: Q must be finite and symmetric")
        matrix = 0.5 * (matrix + matrix.T)
        lowest = smallest_eigenvalue(matrix)
        if lowest < -PSD_TOL:
            raise NotPositiveSemidefiniteError(f"quadratic: Q has eigenvalue {lowest:.3e} < 0")
        super().__init__(matrix.shape[0], max(lowest, 0.0))
        self.Q = freeze(matrix)
        self.c = as_vector(np.zeros(self.dim) if c is None else c, "c")
        if self.c.shape[0] != self.dim:
            raise InvalidInputError(f"quadratic: c has dimension {self.c.shape[0]}, expected {self.dim}")
        self.constant = float(constant)
        self._factor = scipy.linalg.cho_factor(np.eye(self.dim) + self.Q, check_finite=False)

    def gradient(self, x: VectorLike) -> RealVector:
        vec = self._check(x)
        return freeze(self.Q @ vec + self.c)

    def _value(self, x: RealVector) -> float:
        return 0.5 * float(x @ self.Q @ x) + float(self.c @ x) + self.constant

    def _prox(self, x: RealVector) -> np.ndarray:
        return scipy.linalg.cho_solve(self._factor, x - self.c, check_finite=False)

    def _prox_step(self, x: RealVector, step: float) -> np.ndarray:
        if step == 1.0:
            return self._prox(x)
        return scipy.linalg.solve(np.eye(self.dim) + step * self.Q, x - step * self.c, assume_a="pos")

    def _contains_subgradient(self, x: RealVector, s: RealVector, tol: float) -> bool:
        grad = self.Q @ x + self.c
        return _within(float(np.linalg.norm(s - grad)), float(np.linalg.norm(grad)), tol)

    def _conjugate_value(self, u: RealVector) -> float:
        # q_Q* = q_{Q⁺} on c + ran Q, +inf elsewhere
        shifted = u - self.c
        pinv = np.linalg.pinv(self.Q, hermitian=True)
        in_range = self.Q @ (pinv @ shifted)
        if not _within(float(np.linalg.norm(in_range - shifted)), float(np.linalg.norm(shifted)), CONTAINS_TOL):
            return math.inf
        return 0.5 * float(shifted @ pinv @ shifted) - self.constant

    def _conjugate_modulus(self) -> float:
        top = largest_eigenvalue(self.Q)
        return 1.0 / top if top > PSD_TOL else 0.0

    def to_config(self) -> Dict[str, Any]:
        return {"kind": self.kind, "Q": self.Q.tolist(), "c": self.c.tolist(), "constant": self.constant}


def half_squared_norm(dim: int) -> QuadraticFunction:
    """½‖x‖², the self-conjugate quadratic."""
    return QuadraticFunction(np.eye(dim))


def shifted_quadratic(Q: Sequence[Sequence[float]], center: VectorLike) -> QuadraticFunction:
    """½⟨x - center, Q(x - center)⟩ expanded into the catalog's quadratic form."""
    matrix = np.array(Q, dtype=float)
    c = as_vector(center, "center")
    return QuadraticFunction(matrix, -matrix @ c, 0.5 * float(c @ matrix @ c))


class IndicatorFunction(ProxFunction):
    """Indicator of a nonempty closed convex set; prox is the metric projection."""

    is_indicator = True

    def project(self, x: VectorLike) -> RealVector:
        return self.prox(x)

    def contains(self, x: VectorLike, tol: float = CONTAINS_TOL) -> bool:
        vec = self._check(x)
        return _within(float(np.linalg.norm(self._prox(vec) - vec)), float(np.linalg.norm(vec)), tol)

    def _value(self, x: RealVector) -> float:
        return 0.0 if self.contains(x) else math.inf

    def _prox_step(self, x: RealVector, step: float) -> np.ndarray:
        # step·ι_C = ι_C
        return self._prox(x)

    def _contains_subgradient(self, x: RealVector, s: RealVector, tol: float) -> bool:
        # s ∈ N_C(x)  ⇔  x ∈ C and P_C(x + s) = x
        if not self.contains(x, tol):
            return False
        moved = self._prox(x + s)
        return _within(float(np.linalg.norm(moved - x)), float(np.linalg.norm(x) + np.linalg.norm(s)), tol)


class SubspaceIndicator(IndicatorFunction):
    """Indicator of the linear span of the given vectors."""

    kind = "indicator-subspace"

    def __init__(self, basis: Sequence[VectorLike], dim: int):
        """Initialize from spanning vectors (orthonormalized internally)."""
        super().__init__(dim)
        rng, complement = orthonormal_basis(basis, self.dim)
        self.basis = freeze(rng)
        self.complement_basis = freeze(complement)
        self._projector = freeze(rng @ rng.T)

    @property
    def rank(self) -> int:
        return self.basis.shape[1]

    def orthogonal_complement(self) -> "SubspaceIndicator":
        return SubspaceIndicator(list(self.complement_basis.T), self.dim)

    def _prox(self, x: RealVector) -> np.ndarray:
        return self._projector @ x

    def to_config(self) -> Dict[str, Any]:
        return {"kind": self.kind, "dim": self.dim, "basis": self.basis.T.tolist()}


class AffineIndicator(IndicatorFunction):
    """Indicator of offset + span(basis)."""

    kind = "indicator-affine"

    def __init__(self, basis: Sequence[VectorLike], offset: VectorLike):
        """Initialize from spanning vectors of the direction space and a point of the set."""
        point = as_vector(offset, "offset")
        super().__init__(point.shape[0])
        self.direction = SubspaceIndicator(basis, self.dim)
        self.offset = point

    def _prox(self, x: RealVector) -> np.ndarray:
        return self.offset + self.direction._prox(x - self.offset)

    def to_config(self) -> Dict[str, Any]:
        return {"kind": self.kind, "basis": self.direction.basis.T.tolist(), "offset": self.offset.tolist()}


class HalfspaceIndicator(IndicatorFunction):
    """Indicator of {x : ⟨normal, x⟩ ≤ offset}."""

    kind = "indicator-halfspace"

    def __init__(self, normal: VectorLike, offset: float = 0.0):
        """Initialize from a nonzero outward normal and the right-hand side."""
        a = as_vector(normal, "normal")
        if float(np.linalg.norm(a)) == 0.0:
            raise InvalidInputError("indicator-halfspace: normal must be nonzero")
        super().__init__(a.shape[0])
        self.normal = a
        self.offset = float(offset)

    def _prox(self, x: RealVector) -> np.ndarray:
        excess = float(self.normal @ x) - self.offset
        if excess <= 0.0:
            return x.copy()
        return x - (excess / float(self.normal @ self.normal)) * self.normal

    def to_config(self) -> Dict[str, Any]:
        return {"kind": self.kind, "normal": self.normal.tolist(), "offset": self.offset}


def _bound_vector(values: Sequence[float], name: str) -> np.ndarray:
    arr = np.atleast_1d(np.array(values, dtype=float))
    if arr.ndim != 1 or arr.size < 1 or np.any(np.isnan(arr)):
        raise InvalidInputError(f"indicator-box: {name} must be a non-empty vector without NaN")
    return arr


class BoxIndicator(IndicatorFunction):
    """Indicator of the box lo ≤ x ≤ hi (infinite bounds allowed)."""

    kind = "indicator-box"

    def __init__(self, lo: Sequence[float], hi: Sequence[float]):
        """Initialize from coordinate-wise bounds."""
        lower, upper = _bound_vector(lo, "lo"), _bound_vector(hi, "hi")
        if lower.shape != upper.shape:
            raise InvalidInputError("indicator-box: lo and hi must have the same dimension")
        if np.any(lower > upper):
            raise InvalidInputError("indicator-box: empty box (lo > hi)")
        super().__init__(lower.shape[0])
        self.lo = freeze(lower)
        self.hi = freeze(upper)

    def _prox(self, x: RealVector) -> np.ndarray:
        return np.clip(x, self.lo, self.hi)

    def to_config(self) -> Dict[str, Any]:
        return {"kind": self.kind, "lo": self.lo.tolist(), "hi": self.hi.tolist()}


class PointIndicator(IndicatorFunction):
    """Indicator of a single point."""

    kind = "indicator-point"

    def __init__(self, point: VectorLike):
        p = as_vector(point, "point")
        super().__init__(p.shape[0])
        self.point = p

    def _prox(self, x: RealVector) -> np.ndarray:
        return self.point.copy()

    def to_config(self) -> Dict[str, Any]:
        return {"kind": self.kind, "point": self.point.tolist()}


class L1Norm(ProxFunction):
    """weight · ‖x‖₁; prox is soft thresholding."""

    kind = "l1"

    def __init__(self, dim: int, weight: float = 1.0):
        if not math.isfinite(weight) or weight < 0:
            raise InvalidInputError(f"l1: weight must be finite and >= 0, got {weight}")
        super().__init__(dim)
        self.weight = float(weight)

    def _value(self, x: RealVector) -> float:
        return self.weight * float(np.sum(np.abs(x)))

    def _prox(self, x: RealVector) -> np.ndarray:
        return np.sign(x) * np.maximum(np.abs(x) - self.weight, 0.0)

    def _prox_step(self, x: RealVector, step: float) -> np.ndarray:
        return np.sign(x) * np.maximum(np.abs(x) - step * self.weight, 0.0)

    def _contains_subgradient(self, x: RealVector, s: RealVector, tol: float) -> bool:
        scale = 1.0 + self.weight
        active = np.abs(x) > 1e-12
        on_support = np.abs(s[active] - self.weight * np.sign(x[active]))
        off_support = np.abs(s[~active]) - self.weight
        return bool(np.all(on_support <= tol * scale) and np.all(off_support <= tol * scale))

    def _conjugate_value(self, u: RealVector) -> float:
        # indicator of the ℓ∞ ball of radius weight
        return 0.0 if float(np.max(np.abs(u))) <= self.weight + CONTAINS_TOL * (1.0 + self.weight) else math.inf

    def to_config(self) -> Dict[str, Any]:
        return {"kind": self.kind, "dim": self.dim, "weight": self.weight}


class HalfSquaredDistance(ProxFunction):
    """½ d²_C for a closed convex set C given by its indicator."""

    kind = "half-squared-distance"

    def __init__(self, set_fn: ProxFunction):
        if not set_fn.is_indicator:
            raise InvalidInputError(f"half-squared-distance needs an indicator, got {set_fn.kind}")
        super().__init__(set_fn.dim)
        self.set_fn = set_fn

    def gradient(self, x: VectorLike) -> RealVector:
        return grad_half_sq_distance(self.set_fn, x)

    def _value(self, x: RealVector) -> float:
        return 0.5 * float(np.sum((x - self.set_fn._prox(x)) ** 2))

    def _prox(self, x: RealVector) -> np.ndarray:
        # unit step: x + ½(P_C x − x)
        return 0.5 * (x + self.set_fn._prox(x))

    def _prox_step(self, x: RealVector, step: float) -> np.ndarray:
        return x + (step / (1.0 + step)) * (self.set_fn._prox(x) - x)

    def _contains_subgradient(self, x: RealVector, s: RealVector, tol: float) -> bool:
        grad = x - self.set_fn._prox(x)
        return _within(float(np.linalg.norm(s - grad)), float(np.linalg.norm(grad)), tol)

    def to_config(self) -> Dict[str, Any]:
        return {"kind": self.kind, "set": self.set_fn.to_config()}


class ConjugateFunction(ProxFunction):
    """f* through Prox_{f*} = Id - Prox_f; values only where the inner kind has a closed form."""

    kind = "conjugate-of"

    def __init__(self, inner: ProxFunction):
        super().__init__(inner.dim, inner._conjugate_modulus())
        self.inner = inner

    def conjugate(self) -> ProxFunction:
        return self.inner

    def _value(self, x: RealVector) -> float:
        return self.inner._conjugate_value(x)

    def _prox(self, x: RealVector) -> np.ndarray:
        return x - self.inner._prox(x)

    def _prox_step(self, x: RealVector, step: float) -> np.ndarray:
        # Moreau identity with step: Prox_{t f*}(x) = x - t Prox_{f/t}(x/t)
        return x - step * self.inner._prox_step(x / step, 1.0 / step)

    def _contains_subgradient(self, x: RealVector, s: RealVector, tol: float) -> bool:
        # s ∈ ∂f*(x)  ⇔  x ∈ ∂f(s)
        return self.inner._contains_subgradient(s, x, tol)

    def _conjugate_value(self, u: RealVector) -> float:
        return self.inner._value(u)

    def _conjugate_modulus(self) -> float:
        return self.inner.strongly_convex_modulus

    def to_config(self) -> Dict[str, Any]:
        return {"kind": self.kind, "inner": self.inner.to_config()}


class ReflectedFunction(ProxFunction):
    """g∨ : x ↦ g(-x)."""

    kind = "reflection-of"

    def __init__(self, inner: ProxFunction):
        super().__init__(inner.dim, inner.strongly_convex_modulus)
        self.inner = inner
        self.is_indicator = inner.is_indicator

    def reflect(self) -> ProxFunction:
        return self.inner

    def _value(self, x: RealVector) -> float:
        return self.inner._value(-x)

    def _prox(self, x: RealVector) -> np.ndarray:
        return -self.inner._prox(-x)

    def _prox_step(self, x: RealVector, step: float) -> np.ndarray:
        return -self.inner._prox_step(-x, step)

    def _contains_subgradient(self, x: RealVector, s: RealVector, tol: float) -> bool:
        return self.inner._contains_subgradient(-x, -s, tol)

    def _conjugate_value(self, u: RealVector) -> float:
        return self.inner._conjugate_value(-u)

    def _conjugate_modulus(self) -> float:
        return self.inner._conjugate_modulus()

    def to_config(self) -> Dict[str, Any]:
        return {"kind": self.kind, "inner": self.inner.to_config()}


class TranslatedFunction(ProxFunction):
    """x ↦ inner(x - shift)."""

    kind = "translation-of"

    def __init__(self, inner: ProxFunction, shift: VectorLike):
        super().__init__(inner.dim, inner.strongly_convex_modulus)
        self.inner = inner
        self.shift = self._check(shift, "shift")
        self.is_indicator = inner.is_indicator

    def _value(self, x: RealVector) -> float:
        return self.inner._value(x - self.shift)

    def _prox(self, x: RealVector) -> np.ndarray:
        return self.shift + self.inner._prox(x - self.shift)

    def _prox_step(self, x: RealVector, step: float) -> np.ndarray:
        return self.shift + self.inner._prox_step(x - self.shift, step)

    def _contains_subgradient(self, x: RealVector, s: RealVector, tol: float) -> bool:
        return self.inner._contains_subgradient(x - self.shift, s, tol)

    def _conjugate_value(self, u: RealVector) -> float:
        return self.inner._conjugate_value(u) + float(u @ self.shift)

    def _conjugate_modulus(self) -> float:
        return self.inner._conjugate_modulus()

    def to_config(self) -> Dict[str, Any]:
        return {"kind": self.kind, "inner": self.inner.to_config(), "shift": self.shift.tolist()}


class SeparableSum(ProxFunction):
    """(x, z) ↦ first(x) + second(z) on a product space."""

    kind = "separable-pair"

    def __init__(self, first: ProxFunction, second: ProxFunction):
        super().__init__(
            first.dim + second.dim,
            min(first.strongly_convex_modulus, second.strongly_convex_modulus),
        )
        self.first = first
        self.second = second
        self.is_indicator = first.is_indicator and second.is_indicator

    def split(self, x: VectorLike) -> Tuple[RealVector, RealVector]:
        vec = self._check(x)
        return freeze(vec[: self.first.dim]), freeze(vec[self.first.dim:])

    def _value(self, x: RealVector) -> float:
        head, tail = x[: self.first.dim], x[self.first.dim:]
        return self.first._value(head) + self.second._value(tail)

    def _prox(self, x: RealVector) -> np.ndarray:
        head, tail = x[: self.first.dim], x[self.first.dim:]
        return np.concatenate([self.first._prox(head), self.second._prox(tail)])

    def _prox_step(self, x: RealVector, step: float) -> np.ndarray:
        head, tail = x[: self.first.dim], x[self.first.dim:]
        return np.concatenate([self.first._prox_step(head, step), self.second._prox_step(tail, step)])

    def _contains_subgradient(self, x: RealVector, s: RealVector, tol: float) -> bool:
        k = self.first.dim
        return self.first._contains_subgradient(x[:k], s[:k], tol) and self.second._contains_subgradient(
            x[k:], s[k:], tol
        )

    def _conjugate_value(self, u: RealVector) -> float:
        k = self.first.dim
        return self.first._conjugate_value(u[:k]) + self.second._conjugate_value(u[k:])

    def _conjugate_modulus(self) -> float:
        return min(self.first._conjugate_modulus(), self.second._conjugate_modulus())

    def to_config(self) -> Dict[str, Any]:
        return {"kind": self.kind, "first": self.first.to_config(), "second": self.second.to_config()}


def separable_pair(first: ProxFunction, second: ProxFunction) -> SeparableSum:
    return SeparableSum(first, second)


def reflected_resolvent(fn: ProxFunction, x: VectorLike) -> RealVector:
    """R_f x = 2 Prox_f x - x."""
    vec = fn._check(x)
    return freeze(2.0 * fn.prox(vec) - vec)


def grad_half_sq_distance(set_projector: ProxFunction, x: VectorLike) -> RealVector:
    """Gradient x - P_C x of ½ d²_C.

    Raises:
        InvalidInputError: If set_projector is not an indicator kind
    """
    if not set_projector.is_indicator:
        raise InvalidInputError(f"grad_half_sq_distance needs an indicator, got {set_projector.kind}")
    vec = set_projector._check(x)
    return freeze(vec - set_projector.prox(vec))


def create_prox_function(params: Dict[str, Any]) -> ProxFunction:
    """Factory function building a catalog member from a config table.

    Args:
        params: Mapping with a ``kind`` key plus kind-specific keys; nested
            functions (``inner``, ``set``, ``first``, ``second``) are tables themselves

    Returns:
        ProxFunction instance

    Raises:
        InvalidInputError: If the kind is unknown or required keys are missing
    """
    table = dict(params)
    kind = str(table.pop("kind", "")).lower()

    def need(key: str) -> Any:
        if key not in table:
            raise InvalidInputError(f"function of kind '{kind}' needs key '{key}'")
        return table[key]

    try:
        if kind == "zero":
            return ZeroFunction(int(need("dim")))
        elif kind == "quadratic":
            return QuadraticFunction(need("Q"), table.get("c"), float(table.get("constant", 0.0)))
        elif kind == "indicator-subspace":
            return SubspaceIndicator(need("basis"), int(need("dim")))
        elif kind == "indicator-affine":
            return AffineIndicator(need("basis"), need("offset"))
        elif kind == "indicator-halfspace":
            return HalfspaceIndicator(need("normal"), float(table.get("offset", 0.0)))
        elif kind == "indicator-box":
            return BoxIndicator(need("lo"), need("hi"))
        elif kind == "indicator-point":
            return PointIndicator(need("point"))
        elif kind == "l1":
            return L1Norm(int(need("dim")), float(table.get("weight", 1.0)))
        elif kind == "half-squared-distance":
            return HalfSquaredDistance(create_prox_function(need("set")))
        elif kind == "conjugate-of":
            return create_prox_function(need("inner")).conjugate()
        elif kind == "reflection-of":
            return ReflectedFunction(create_prox_function(need("inner")))
        elif kind == "translation-of":
            return create_prox_function(need("inner")).translate(need("shift"))
        elif kind == "separable-pair":
            return SeparableSum(create_prox_function(need("first")), create_prox_function(need("second")))
    except (TypeError, ValueError) as e:
        if isinstance(e, InvalidInputError):
            raise
        raise InvalidInputError(f"bad parameters for function of kind '{kind}': {e}") from e

    raise InvalidInputError(
        f"Unsupported function kind: {kind or '<missing>'}. "
        f"Supported kinds: {', '.join(supported_kinds())}"
    )


def supported_kinds() -> List[str]:
    """Get the catalog tags accepted by create_prox_function."""
    return [
        "zero",
        "quadratic",
        "indicator-subspace",
        "indicator-affine",
        "indicator-halfspace",
        "indicator-box",
        "indicator-point",
        "l1",
        "half-squared-distance",
        "conjugate-of",
        "reflection-of",
        "translation-of",
        "separable-pair",
    ]
