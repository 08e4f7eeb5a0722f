"""Density matrices, projectors and state-comparison functionals."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

import numpy as np

from .linalg import (
    PSD_TOL,
    SpectralDecomposition,
    ValidationError,
    _raw,
    as_matrix,
    check_hermitian,
)

# Eigenvalues above this count toward the range (and rank) of a state.
RANK_TOL = 1e-10
TRACE_TOL = 1e-10
PROJECTOR_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, positive semidefinite, unit-trace operator.

    The stored spectrum has eigenvalues clamped at zero, so ``spectrum``
    gives the weights ``pi_i`` and eigenvectors ``|i>`` used throughout.
    """

    matrix: np.ndarray
    rank_tol: float = RANK_TOL

    def __post_init__(self):
        m = check_hermitian(self.matrix, "density matrix")
        tr = np.trace(m).real
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValidationError("trace", f"Tr(rho) = {tr!r}, expected 1 within {TRACE_TOL:g}")
        object.__setattr__(self, "matrix", m)
        w = self._raw_spectrum[0]
        if w[0] < -PSD_TOL:
            raise ValidationError("psd", f"rho has eigenvalue {w[0]:.3e} below -{PSD_TOL:g}")

    @cached_property
    def _raw_spectrum(self):
        return np.linalg.eigh(self.matrix)

    @cached_property
    def spectrum(self) -> SpectralDecomposition:
        w, v = self._raw_spectrum
        return SpectralDecomposition(np.clip(w, 0.0, None), v)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def rank(self) -> int:
        return int(np.count_nonzero(self.spectrum.eigenvalues > self.rank_tol))

    @property
    def is_pure(self) -> bool:
        return self.rank == 1

    def __array__(self, dtype=None, copy=None):
        return self.matrix if dtype is None else self.matrix.astype(dtype)


@dataclass(frozen=True, eq=False)
class Projector:
    """Orthogonal projection onto a subspace."""

    matrix: np.ndarray

    def __post_init__(self):
        m = check_hermitian(self.matrix, "projector")
        if np.max(np.abs(m @ m - m)) > PROJECTOR_TOL:
            raise ValidationError("idempotent", "projector does not satisfy P^2 = P")
        tr = np.trace(m).real
        if abs(tr - round(tr)) > PROJECTOR_TOL:
            raise ValidationError("projector-trace", f"Tr(P) = {tr!r} is not an integer")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def subspace_dim(self) -> int:
        return int(round(np.trace(self.matrix).real))

    def __array__(self, dtype=None, copy=None):
        return self.matrix if dtype is None else self.matrix.astype(dtype)


def as_density(rho, rank_tol: float = RANK_TOL) -> DensityMatrix:
    if isinstance(rho, DensityMatrix):
        return rho
    return DensityMatrix(_raw(rho), rank_tol)


def pure_state(v, rank_tol: float = RANK_TOL) -> DensityMatrix:
    """Rank-one density matrix ``|v><v|/<v|v>``."""
    vec = np.asarray(v, dtype=complex).ravel()
    norm = np.linalg.norm(vec)
    if not np.isfinite(norm) or norm == 0.0:
        raise ValidationError("nonzero", "state vector must have nonzero finite norm")
    vec = vec / norm
    return DensityMatrix(np.outer(vec, vec.conj()), rank_tol)


def mix(pairs: Iterable[tuple[float, DensityMatrix]], rank_tol: float = RANK_TOL) -> DensityMatrix:
    """Convex combination ``sum_k w_k rho_k``."""
    pairs = list(pairs)
    if not pairs:
        raise ValidationError("weights", "mixture needs at least one component")
    weights = np.array([float(w) for w, _ in pairs])
    if np.any(weights < 0):
        raise ValidationError("weights", "mixture weights must be nonnegative")
    if abs(weights.sum() - 1.0) > TRACE_TOL:
        raise ValidationError("weights", f"mixture weights sum to {weights.sum()!r}, not 1")
    states = [as_density(r) for _, r in pairs]
    dims = {r.dim for r in states}
    if len(dims) != 1:
        raise ValidationError("dimension", f"mixed states of different dimensions {sorted(dims)}")
    total = sum(w * r.matrix for w, r in zip(weights, states))
    return DensityMatrix(total, rank_tol)


def _check_dims(*ops):
    dims = {op.shape[0] for op in ops}
    if len(dims) != 1:
        raise ValidationError("dimension", f"dimension mismatch {sorted(dims)}")


def _fidelity_from_spectra(w1, v1, w2, v2) -> float:
    # Singular values of sqrt(rho) sqrt(sigma) avoid square roots of
    # noise-level eigenvalues of sqrt(rho) sigma sqrt(rho).
    a = (np.sqrt(w1)[:, None] * (v1.conj().T @ v2)) * np.sqrt(w2)[None, :]
    f = float(np.sum(np.linalg.svd(a, compute_uv=False)))
    return min(max(f, 0.0), 1.0)


def fidelity(rho, sigma) -> float:
    """Uhlmann fidelity ``Tr sqrt(sqrt(rho) sigma sqrt(rho))`` (not squared)."""
    rho, sigma = as_density(rho), as_density(sigma)
    _check_dims(rho.matrix, sigma.matrix)
    s1, s2 = rho.spectrum, sigma.spectrum
    return _fidelity_from_spectra(s1.eigenvalues, s1.eigenvectors, s2.eigenvalues, s2.eigenvectors)


def trace_distance(rho, sigma) -> float:
    """``||rho - sigma||_1 / 2``."""
    a, b = _raw(rho), _raw(sigma)
    _check_dims(a, b)
    diff = a - b
    diff = 0.5 * (diff + diff.conj().T)
    return float(0.5 * np.sum(np.abs(np.linalg.eigvalsh(diff))))


def range_projector(rho) -> Projector:
    """Projector onto the span of eigenvectors with weight above the rank threshold."""
    rho = as_density(rho)
    spec = rho.spectrum
    v = spec.eigenvectors[:, spec.eigenvalues > rho.rank_tol]
    return Projector(v @ v.conj().T)


def expectation(obs, rho) -> float:
    """``Tr(A rho)`` for a Hermitian observable ``A``."""
    a, r = _raw(obs), _raw(rho)
    _check_dims(a, r)
    return float(np.real(np.einsum("ij,ji->", a, r)))


def std_dev(h, rho) -> float:
    """``sqrt(Tr(H^2 rho) - Tr(H rho)^2)``, evaluated on the centred operator."""
    a, r = _raw(h), _raw(rho)
    _check_dims(a, r)
    centred = a - expectation(a, r) * np.eye(a.shape[0])
    var = float(np.real(np.einsum("ij,jk,ki->", centred, centred, r)))
    return float(np.sqrt(max(var, 0.0)))


def basis_state(index: int, dim: int) -> np.ndarray:
    vec = np.zeros(dim, dtype=complex)
    vec[index] = 1.0
    return vec


__all__ = [
    "DensityMatrix",
    "Projector",
    "RANK_TOL",
    "as_density",
    "as_matrix",
    "basis_state",
    "expectation",
    "fidelity",
    "mix",
    "pure_state",
    "range_projector",
    "std_dev",
    "trace_distance",
]
