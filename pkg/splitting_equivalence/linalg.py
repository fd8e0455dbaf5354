"""Dense vectors and linear operators with adjoints.

All spaces are finite-dimensional. Vectors are read-only 1-D float64
numpy arrays; operators wrap a read-only 2-D array. A single symmetric
eigendecomposition kernel (``numpy.linalg.eigh``) backs operator norms,
square roots and the Gram condition check.
"""

import logging
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import InvalidInputError, NotPositiveSemidefiniteError, SingularGramError

logger = logging.getLogger(__name__)

SYMMETRY_TOL = 1e-10
PSD_TOL = 1e-10
ADJOINT_TOL = 1e-12
GRAM_CONDITION_LIMIT = 1e12

RealVector = np.ndarray
VectorLike = Union[RealVector, Sequence[float], float]


def as_vector(values: VectorLike, name: str = "vector") -> RealVector:
    """Validate and freeze a real vector.

    Args:
        values: Anything numpy can turn into a 1-D float array (scalars become length 1)
        name: Label used in error messages

    Returns:
        Read-only float64 array of dimension >= 1

    Raises:
        InvalidInputError: If the input is empty, not 1-D, or has NaN/Inf entries
    """
    arr = np.atleast_1d(np.array(values, dtype=float))
    if arr.ndim != 1:
        raise InvalidInputError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if arr.size < 1:
        raise InvalidInputError(f"{name} must have dimension >= 1")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"{name} has non-finite entries")
    arr.setflags(write=False)
    return arr


def freeze(arr: np.ndarray) -> np.ndarray:
    """Return a read-only float copy of an array computed internally."""
    out = np.array(arr, dtype=float)
    out.setflags(write=False)
    return out


def inner(x: RealVector, y: RealVector) -> float:
    """Euclidean inner product."""
    if x.shape != y.shape:
        raise InvalidInputError(f"inner product of dimensions {x.shape[0]} and {y.shape[0]}")
    return float(np.dot(x, y))


def norm(x: RealVector) -> float:
    """Euclidean norm."""
    return float(np.linalg.norm(x))


class DenseOperator:
    """Matrix-backed linear map from a ``cols``-dimensional space to a ``rows``-dimensional one."""

    def __init__(self, entries: Union[np.ndarray, Sequence[Sequence[float]]]):
        """Initialize from a row-major matrix.

        Raises:
            InvalidInputError: If the matrix is not 2-D, empty, or has non-finite entries
        """
        matrix = np.array(entries, dtype=float)
        if matrix.ndim != 2 or matrix.shape[0] < 1 or matrix.shape[1] < 1:
            raise InvalidInputError(f"operator entries must be a non-empty matrix, got shape {matrix.shape}")
        if not np.all(np.isfinite(matrix)):
            raise InvalidInputError("operator has non-finite entries")
        matrix.setflags(write=False)
        self._matrix = matrix

    @classmethod
    def identity(cls, dim: int) -> "DenseOperator":
        """Identity operator on R^dim."""
        return cls(np.eye(dim))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "DenseOperator":
        """Zero operator from R^cols to R^rows."""
        return cls(np.zeros((rows, cols)))

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    @property
    def rows(self) -> int:
        return self._matrix.shape[0]

    @property
    def cols(self) -> int:
        return self._matrix.shape[1]

    @property
    def shape(self) -> tuple:
        return self._matrix.shape

    def apply(self, v: VectorLike) -> RealVector:
        """Matrix-vector product; requires dim(v) = cols."""
        vec = as_vector(v, "operand")
        if vec.shape[0] != self.cols:
            raise InvalidInputError(f"apply: operator has {self.cols} columns, vector has dimension {vec.shape[0]}")
        return freeze(self._matrix @ vec)

    def adjoint_apply(self, w: VectorLike) -> RealVector:
        """Transpose-matrix-vector product; requires dim(w) = rows."""
        vec = as_vector(w, "operand")
        if vec.shape[0] != self.rows:
            raise InvalidInputError(f"adjoint_apply: operator has {self.rows} rows, vector has dimension {vec.shape[0]}")
        return freeze(self._matrix.T @ vec)

    def adjoint(self) -> "DenseOperator":
        return DenseOperator(self._matrix.T)

    def gram(self) -> "DenseOperator":
        """The self-adjoint operator op* op."""
        m = self._matrix.T @ self._matrix
        return DenseOperator(0.5 * (m + m.T))

    def compose(self, other: "DenseOperator") -> "DenseOperator":
        """self ∘ other."""
        if other.rows != self.cols:
            raise InvalidInputError(f"cannot compose {self.shape} with {other.shape}")
        return DenseOperator(self._matrix @ other.matrix)

    def scaled(self, factor: float) -> "DenseOperator":
        return DenseOperator(factor * self._matrix)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_symmetric(self, tol: float = SYMMETRY_TOL) -> bool:
        return self.is_square() and bool(np.max(np.abs(self._matrix - self._matrix.T)) <= tol)

    def to_rows(self) -> list:
        """Nested-list form used by the config serializer."""
        return self._matrix.tolist()

    def __repr__(self) -> str:
        return f"DenseOperator(shape={self.shape})"


def block_row(*blocks: DenseOperator) -> DenseOperator:
    """Assemble [B1 B2 ...] acting on the product of the blocks' domains."""
    if not blocks:
        raise InvalidInputError("block_row needs at least one block")
    rows = {b.rows for b in blocks}
    if len(rows) != 1:
        raise InvalidInputError(f"block_row blocks disagree on row count: {sorted(rows)}")
    return DenseOperator(np.hstack([b.matrix for b in blocks]))


def _symmetric_eigvals(matrix: np.ndarray) -> np.ndarray:
    """Ascending eigenvalues of a symmetric matrix."""
    return np.linalg.eigvalsh(0.5 * (matrix + matrix.T))


def operator_norm(op: DenseOperator) -> float:
    """Largest singular value, from the eigenvalues of op* op."""
    top = float(_symmetric_eigvals(op.gram().matrix)[-1])
    return float(np.sqrt(max(top, 0.0)))


def psd_sqrt(m: DenseOperator) -> DenseOperator:
    """Symmetric positive semidefinite square root.

    Eigenvalues in (-1e-10, 0) are clamped to zero.

    Raises:
        InvalidInputError: If m is not square or not symmetric within 1e-10
        NotPositiveSemidefiniteError: If m has an eigenvalue below -1e-10
    """
    if not m.is_square():
        raise InvalidInputError(f"psd_sqrt needs a square matrix, got {m.shape}")
    if not m.is_symmetric():
        raise InvalidInputError("psd_sqrt needs a symmetric matrix")
    sym = 0.5 * (m.matrix + m.matrix.T)
    eigvals, eigvecs = np.linalg.eigh(sym)
    if eigvals[0] < -PSD_TOL:
        raise NotPositiveSemidefiniteError(f"matrix has eigenvalue {eigvals[0]:.3e} < 0")
    roots = np.sqrt(np.clip(eigvals, 0.0, None))
    root = (eigvecs * roots) @ eigvecs.T
    return DenseOperator(0.5 * (root + root.T))


def check_gram_invertible(L: DenseOperator) -> float:
    """Condition number of L*L, guarding the standing invertibility assumption.

    Raises:
        SingularGramError: If the condition number exceeds 1e12 (or L*L has a zero eigenvalue)
    """
    eigvals = _symmetric_eigvals(L.gram().matrix)
    smallest, largest = float(eigvals[0]), float(eigvals[-1])
    if smallest <= 0.0 or largest / smallest > GRAM_CONDITION_LIMIT:
        raise SingularGramError(
            f"L*L is numerically singular (eigenvalues in [{smallest:.3e}, {largest:.3e}])"
        )
    condition = largest / smallest
    logger.debug("Gram matrix of %s has condition number %.3e", L, condition)
    return condition


def smallest_eigenvalue(m: Union[DenseOperator, np.ndarray]) -> float:
    matrix = m.matrix if isinstance(m, DenseOperator) else np.asarray(m, dtype=float)
    return float(_symmetric_eigvals(matrix)[0])


def largest_eigenvalue(m: Union[DenseOperator, np.ndarray]) -> float:
    """λmax of a symmetric operator, e.g. the Lipschitz constant of b ↦ L*L b."""
    matrix = m.matrix if isinstance(m, DenseOperator) else np.asarray(m, dtype=float)
    return float(_symmetric_eigvals(matrix)[-1])


def orthonormal_basis(vectors: Iterable[Sequence[float]], dim: int) -> tuple:
    """Orthonormal bases of span(vectors) and of its orthogonal complement in R^dim.

    Returns:
        (range_basis, complement_basis) as dim x k and dim x (dim - k) arrays
    """
    cols = [as_vector(v, "basis vector") for v in vectors]
    for c in cols:
        if c.shape[0] != dim:
            raise InvalidInputError(f"basis vector has dimension {c.shape[0]}, expected {dim}")
    if not cols:
        return np.zeros((dim, 0)), np.eye(dim)
    stacked = np.column_stack(cols)
    u, s, _ = np.linalg.svd(stacked, full_matrices=True)
    rank = int(np.sum(s > 1e-10 * max(1.0, float(s[0]))))
    return u[:, :rank], u[:, rank:]
