"""Dense complex Hermitian linear algebra and spectral calculus.

All logarithms in this package are base 2. Fractional and negative matrix
powers follow the support convention: eigenvalues below a relative cutoff
are treated as exact zeros and mapped to zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

# Tolerances shared across the package.
HERMITICITY_ATOL = 1e-10
EIGENVALUE_NEG_ATOL = 1e-10
TRACE_ATOL = 1e-10
SUPPORT_RELATIVE_CUTOFF = 1e-12


class ValidationError(ValueError):
    """An input violates a documented invariant."""


def hermitize(matrix: np.ndarray) -> np.ndarray:
    """Return the Hermitian part (M + M†)/2 as a complex array."""
    matrix = np.asarray(matrix, dtype=complex)
    return (matrix + matrix.conj().T) / 2.0


def _check_square(matrix: np.ndarray) -> np.ndarray:
    matrix = np.asarray(matrix, dtype=complex)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {matrix.shape}")
    return matrix


@dataclass(frozen=True)
class HermitianOperator:
    """A complex square matrix certified Hermitian (within 1e-10, max-abs).

    The stored matrix is symmetrized on construction so downstream spectral
    calculus stays real.
    """

    matrix: np.ndarray
    dim: int = field(default=0)

    def __post_init__(self):
        matrix = _check_square(self.matrix)
        asym = np.abs(matrix - matrix.conj().T).max() if matrix.size else 0.0
        if asym > HERMITICITY_ATOL:
            raise ValidationError(
                f"matrix is not Hermitian: max |M - M†| = {asym:.3e} > {HERMITICITY_ATOL:.0e}"
            )
        matrix = hermitize(matrix)
        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "dim", matrix.shape[0])

    def trace(self) -> float:
        return float(np.trace(self.matrix).real)


def asmatrix(operator) -> np.ndarray:
    """Extract the underlying ndarray from any operator-like object."""
    if isinstance(operator, HermitianOperator):
        return operator.matrix
    if isinstance(operator, DensityOperator):
        return operator.op.matrix
    return np.asarray(operator, dtype=complex)


@dataclass(frozen=True)
class DensityOperator:
    """PSD unit-trace operator with a list of subsystem dimensions."""

    op: HermitianOperator
    dims: tuple[int, ...]

    def __post_init__(self):
        if not isinstance(self.op, HermitianOperator):
            object.__setattr__(self, "op", HermitianOperator(asmatrix(self.op)))
        dims = tuple(int(d) for d in self.dims)
        if any(d < 1 for d in dims):
            raise ValidationError(f"subsystem dimensions must be positive, got {dims}")
        if int(np.prod(dims)) != self.op.dim:
            raise ValidationError(
                f"subsystem dimensions {dims} do not multiply to operator dimension {self.op.dim}"
            )
        object.__setattr__(self, "dims", dims)
        eigenvalues = np.linalg.eigvalsh(self.op.matrix)
        if eigenvalues.size and eigenvalues[0] < -EIGENVALUE_NEG_ATOL:
            raise ValidationError(
                f"operator is not PSD: min eigenvalue {eigenvalues[0]:.3e}"
            )
        trace = self.op.trace()
        if abs(trace - 1.0) > TRACE_ATOL:
            raise ValidationError(f"trace must be 1, got {trace!r}")

    @property
    def matrix(self) -> np.ndarray:
        return self.op.matrix

    @property
    def dim(self) -> int:
        return self.op.dim


def density(matrix: np.ndarray, dims: Sequence[int] | None = None) -> DensityOperator:
    """Build a DensityOperator, defaulting to a single subsystem."""
    matrix = _check_square(matrix)
    if dims is None:
        dims = (matrix.shape[0],)
    return DensityOperator(HermitianOperator(matrix), tuple(dims))


@dataclass(frozen=True)
class JordanParts:
    """Orthogonal positive/negative spectral parts of a Hermitian operator."""

    pos: HermitianOperator
    neg: HermitianOperator
    mass: float


def eig_hermitian(H) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (descending) and unitary eigenvectors of a Hermitian operator.

    Returns (eigenvalues, eigenvectors) with eigenvectors[:, i] matching
    eigenvalues[i]; reconstruction error is at most 1e-9 in max-abs norm.
    """
    if not isinstance(H, HermitianOperator):
        H = HermitianOperator(asmatrix(H))
    w, V = np.linalg.eigh(H.matrix)
    return w[::-1].copy(), V[:, ::-1].copy()


def frac_power(H, t: float) -> HermitianOperator:
    """Fractional power H^t of a PSD operator, taken on the support.

    Eigenvalues below the relative cutoff 1e-12 * max(eigenvalue) map to 0,
    so negative powers are well defined on singular operators. Eigenvalues
    in [-1e-10, 0) are clipped to 0; anything more negative is an error.
    """
    matrix = hermitize(asmatrix(H))
    w, V = np.linalg.eigh(matrix)
    if w.size and w[0] < -EIGENVALUE_NEG_ATOL:
        raise ValidationError(
            f"operator is not PSD: min eigenvalue {w[0]:.3e} < -{EIGENVALUE_NEG_ATOL:.0e}"
        )
    w = np.clip(w, 0.0, None)
    lam_max = w[-1] if w.size else 0.0
    cutoff = SUPPORT_RELATIVE_CUTOFF * lam_max
    powered = np.zeros_like(w)
    on_support = w > cutoff
    powered[on_support] = w[on_support] ** float(t)
    result = (V * powered) @ V.conj().T
    return HermitianOperator(hermitize(result))


def partial_trace(M, dims: Sequence[int], keep: Iterable[int]) -> HermitianOperator:
    """Trace out all subsystems not in ``keep``; kept factors stay in order."""
    matrix = asmatrix(M)
    dims = [int(d) for d in dims]
    total = int(np.prod(dims))
    if matrix.shape != (total, total):
        raise ValidationError(
            f"dims {dims} multiply to {total}, but matrix has shape {matrix.shape}"
        )
    keep = sorted(set(int(k) for k in keep))
    if any(k < 0 or k >= len(dims) for k in keep):
        raise ValidationError(f"keep indices {keep} out of range for {len(dims)} subsystems")
    reshaped = matrix.reshape(dims + dims)
    n = len(dims)
    # Trace out complement subsystems from the highest index down so that the
    # remaining axis numbering stays valid.
    for idx in sorted(set(range(n)) - set(keep), reverse=True):
        reshaped = np.trace(reshaped, axis1=idx, axis2=idx + reshaped.ndim // 2)
    kept_dim = int(np.prod([dims[k] for k in keep])) if keep else 1
    return HermitianOperator(hermitize(reshaped.reshape(kept_dim, kept_dim)))


def kron(A, B) -> HermitianOperator:
    """Tensor product with the first factor as the slow index."""
    return HermitianOperator(np.kron(asmatrix(A), asmatrix(B)))


def trace_distance(rho, sigma) -> float:
    """Halved trace distance (1/2)||rho - sigma||_1; this is the epsilon used
    by every continuity bound in this package."""
    a, b = asmatrix(rho), asmatrix(sigma)
    if a.shape != b.shape:
        raise ValidationError(f"dimension mismatch: {a.shape} vs {b.shape}")
    diff = hermitize(a - b)
    # Canonicalize the sign so swapping the arguments reproduces the exact
    # same eigenproblem, making symmetry bitwise instead of up to rounding.
    flat = np.concatenate([diff.real.ravel(), diff.imag.ravel()])
    nonzero = flat[flat != 0.0]
    if nonzero.size and nonzero[0] < 0.0:
        diff = -diff
    w = np.linalg.eigvalsh(diff)
    return float(np.abs(w).sum() / 2.0)


def jordan_decompose(H) -> JordanParts:
    """Split a Hermitian operator into orthogonal PSD parts H = pos - neg.

    ``mass`` is Tr(pos); for traceless inputs it equals Tr(neg) and the
    halved trace norm of H.
    """
    matrix = hermitize(asmatrix(H))
    w, V = np.linalg.eigh(matrix)
    pos = (V * np.clip(w, 0.0, None)) @ V.conj().T
    neg = pos - matrix
    return JordanParts(
        pos=HermitianOperator(hermitize(pos)),
        neg=HermitianOperator(hermitize(neg)),
        mass=float(np.clip(w, 0.0, None).sum()),
    )
