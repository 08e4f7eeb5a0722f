"""Dense complex-matrix primitives for small Hilbert spaces.

All routines work with ``hbar = 1``: a Hamiltonian ``H`` generates
``U(t) = exp(-i H t)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

# Largest Hilbert-space dimension accepted anywhere (10 qubits).
MAX_DIM = 1024
# Hermiticity check: ||m - m^dagger||_max <= HERMITIAN_TOL * max(1, ||m||_max).
HERMITIAN_TOL = 1e-10
# Eigenvalues above -PSD_TOL are clamped to zero; below that the input is not PSD.
PSD_TOL = 1e-10


class ValidationError(ValueError):
    """Raised when an input violates a named invariant."""

    def __init__(self, invariant: str, message: str):
        super().__init__(f"{invariant}: {message}")
        self.invariant = invariant


def as_matrix(m, name: str = "matrix") -> np.ndarray:
    """Return ``m`` as a finite square complex array, enforcing the dimension cap."""
    arr = np.asarray(m, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValidationError("square", f"{name} must be square, got shape {arr.shape}")
    if arr.shape[0] == 0:
        raise ValidationError("square", f"{name} is empty")
    if arr.shape[0] > MAX_DIM:
        raise ValidationError(
            "dimension", f"{name} has dimension {arr.shape[0]} > cap {MAX_DIM}"
        )
    if not np.all(np.isfinite(arr)):
        raise ValidationError("finite", f"{name} has NaN or infinite entries")
    return arr


def is_hermitian(m: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    scale = max(1.0, float(np.max(np.abs(m))))
    return float(np.max(np.abs(m - m.conj().T))) <= tol * scale


def check_hermitian(m, name: str = "matrix", tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Validate ``m`` and return its exactly Hermitian part."""
    arr = as_matrix(m, name)
    if not is_hermitian(arr, tol):
        raise ValidationError("hermitian", f"{name} is not Hermitian within {tol:g}")
    return 0.5 * (arr + arr.conj().T)


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues in ascending order with column eigenvectors."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def hermitian_eig(m, tol: float = HERMITIAN_TOL) -> SpectralDecomposition:
    """Spectral decomposition of a Hermitian matrix.

    Raises:
        ValidationError: if ``m`` is not square, finite, or Hermitian.
    """
    herm = check_hermitian(m, tol=tol)
    w, v = np.linalg.eigh(herm)
    return SpectralDecomposition(w, v)


@dataclass(frozen=True, eq=False)
class HermitianOperator:
    """A validated Hermitian matrix with a lazily computed spectrum."""

    matrix: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "matrix", check_hermitian(self.matrix, "operator"))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @cached_property
    def spectrum(self) -> SpectralDecomposition:
        w, v = np.linalg.eigh(self.matrix)
        return SpectralDecomposition(w, v)

    def __array__(self, dtype=None, copy=None):
        return self.matrix if dtype is None else self.matrix.astype(dtype)

    def __add__(self, other):
        return HermitianOperator(self.matrix + _raw(other))

    def __mul__(self, scalar):
        return HermitianOperator(self.matrix * float(scalar))

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return HermitianOperator(self.matrix / float(scalar))


def _raw(x) -> np.ndarray:
    if isinstance(x, np.ndarray):
        return x
    matrix = getattr(x, "matrix", None)
    if matrix is not None:
        return _raw(matrix)
    return np.asarray(x, dtype=complex)


def as_operator(h) -> HermitianOperator:
    """Coerce arrays and operator-like objects (anything with ``.matrix``)."""
    if isinstance(h, HermitianOperator):
        return h
    inner = getattr(h, "matrix", None)
    if isinstance(inner, HermitianOperator):
        return inner
    return HermitianOperator(_raw(h))


def unitary_exp(h, t: float) -> np.ndarray:
    """Propagator ``exp(-i H t)`` assembled from the spectrum of ``H``."""
    spec = as_operator(h).spectrum
    v = spec.eigenvectors
    phases = np.exp(-1j * spec.eigenvalues * t)
    return (v * phases) @ v.conj().T


def psd_sqrt(m, tol: float = PSD_TOL) -> np.ndarray:
    """Principal square root of a positive semidefinite Hermitian matrix.

    Eigenvalues in ``[-tol, 0)`` are clamped to zero.

    Raises:
        ValidationError: if an eigenvalue lies below ``-tol``.
    """
    spec = hermitian_eig(m)
    w = spec.eigenvalues
    if w[0] < -tol:
        raise ValidationError("psd", f"eigenvalue {w[0]:.3e} below -{tol:g}")
    v = spec.eigenvectors
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T


def trace_norm(m) -> float:
    """Sum of absolute eigenvalues of a Hermitian matrix."""
    herm = check_hermitian(m)
    return float(np.sum(np.abs(np.linalg.eigvalsh(herm))))


def kron(a, b) -> np.ndarray:
    """Tensor product ``a (x) b``; the first factor is the most significant."""
    a = as_matrix(_raw(a), "a")
    b = as_matrix(_raw(b), "b")
    dim = a.shape[0] * b.shape[0]
    if dim > MAX_DIM:
        raise ValidationError("dimension", f"tensor product dimension {dim} > cap {MAX_DIM}")
    return np.kron(a, b)


SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = {"x": SIGMA_X, "y": SIGMA_Y, "z": SIGMA_Z}
