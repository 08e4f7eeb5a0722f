"""Unitary evolution and the survival probabilities P, T, E and D."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .linalg import HermitianOperator, ValidationError, as_operator
from .states import (
    DensityMatrix,
    Projector,
    _fidelity_from_spectra,
    as_density,
    pure_state,
    range_projector,
)


@dataclass(frozen=True, eq=False)
class Evolution:
    """Initial state, Hamiltonian and the projector that defines ``E``.

    When ``projector`` is omitted the projector onto the range of ``rho0``
    is used, which makes ``E`` the range-projector survival probability.
    """

    rho0: DensityMatrix
    h: HermitianOperator
    projector: Optional[Projector] = None
    default_projector: bool = field(init=False)

    def __post_init__(self):
        rho0 = as_density(self.rho0)
        h = as_operator(self.h)
        object.__setattr__(self, "rho0", rho0)
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "default_projector", self.projector is None)
        if self.projector is None:
            object.__setattr__(self, "projector", range_projector(rho0))
        elif not isinstance(self.projector, Projector):
            object.__setattr__(self, "projector", Projector(np.asarray(self.projector)))
        dims = {rho0.dim, h.dim, self.projector.dim}
        if len(dims) != 1:
            raise ValidationError("dimension", f"evolution components have dimensions {sorted(dims)}")

    @property
    def dim(self) -> int:
        return self.rho0.dim

    def propagator(self, t: float) -> np.ndarray:
        spec = self.h.spectrum
        v = spec.eigenvectors
        return (v * np.exp(-1j * spec.eigenvalues * t)) @ v.conj().T

    def rho_matrix(self, t: float) -> np.ndarray:
        u = self.propagator(t)
        return u @ self.rho0.matrix @ u.conj().T


def evolve(spec: Evolution, t: float) -> DensityMatrix:
    """``rho(t) = U(t) rho U(t)^dagger``."""
    return DensityMatrix(spec.rho_matrix(t), spec.rho0.rank_tol)


def survival_P(psi0, h, t: float) -> float:
    """Pure-state overlap ``|<psi|exp(-iHt)|psi>|^2``.

    ``psi0`` may be a state vector or a rank-one density matrix.

    Raises:
        ValidationError: if ``psi0`` is mixed.
    """
    if isinstance(psi0, DensityMatrix):
        if not psi0.is_pure:
            raise ValidationError("pure", f"survival_P needs a pure state, got rank {psi0.rank}")
        vec = psi0.spectrum.eigenvectors[:, -1]
    else:
        vec = np.asarray(psi0, dtype=complex).ravel()
        vec = pure_state(vec).spectrum.eigenvectors[:, -1]
    h = as_operator(h)
    spec = h.spectrum
    amps = spec.eigenvectors.conj().T @ vec
    overlap = np.sum(np.abs(amps) ** 2 * np.exp(-1j * spec.eigenvalues * t))
    return float(min(abs(overlap) ** 2, 1.0))


def survival_T(spec: Evolution, t: float) -> float:
    """Squared Uhlmann fidelity between ``rho`` and ``rho(t)``."""
    s = spec.rho0.spectrum
    w, v = s.eigenvalues, s.eigenvectors
    f = _fidelity_from_spectra(w, v, w, spec.propagator(t) @ v)
    return f * f


def survival_E(spec: Evolution, t: float) -> float:
    """``Tr[Pi rho(t)]`` for the evolution's projector."""
    val = np.real(np.einsum("ij,ji->", spec.projector.matrix, spec.rho_matrix(t)))
    return float(val)


def survival_D(spec: Evolution, t: float) -> float:
    """``1 - ||rho(t) - rho||_1^2 / 4``."""
    diff = spec.rho_matrix(t) - spec.rho0.matrix
    diff = 0.5 * (diff + diff.conj().T)
    norm = float(np.sum(np.abs(np.linalg.eigvalsh(diff))))
    return 1.0 - 0.25 * norm * norm


def e_dot(spec: Evolution, t: float) -> float:
    """Exact derivative of ``survival_E``: ``-i Tr(Pi [H, rho(t)])``."""
    rho_t = spec.rho_matrix(t)
    h = spec.h.matrix
    comm = h @ rho_t - rho_t @ h
    return float(np.real(-1j * np.einsum("ij,ji->", spec.projector.matrix, comm)))


def e_decomposition(spec: Evolution, t: float) -> tuple[float, float]:
    """Split ``E(t)`` in the eigenbasis of ``rho``.

    Returns ``(coherent, leakage)`` where ``coherent`` collects the
    survival of each eigenvector weighted by its eigenvalue and ``leakage``
    the weight carried from eigenvector ``i`` into a different eigenvector
    ``j`` of the range. Only defined for the range projector.
    """
    if not spec.default_projector:
        raise ValidationError("projector", "decomposition requires the range projector")
    s = spec.rho0.spectrum
    in_range = s.eigenvalues > spec.rho0.rank_tol
    v = s.eigenvectors
    amp2 = np.abs(v.conj().T @ spec.propagator(t) @ v) ** 2  # [j, i] = |<j|U|i>|^2
    weighted = amp2[in_range] * s.eigenvalues[None, :]
    diag = np.diag(amp2)[in_range] * s.eigenvalues[in_range]
    coherent = float(np.sum(diag))
    leakage = float(np.sum(weighted) - coherent)
    return coherent, leakage


@dataclass
class EvolutionTrace:
    """Sampled survival probabilities and bound curves on a time grid.

    Bound arrays hold ``nan`` outside their validity window. ``P`` is
    ``None`` for mixed initial states.
    """

    times: np.ndarray
    T: np.ndarray
    E: np.ndarray
    D: np.ndarray
    mt_bound: np.ndarray
    fisher_bound: np.ndarray
    gen_lower: np.ndarray
    gen_upper: np.ndarray
    in_mt_window: np.ndarray
    in_fisher_window: np.ndarray
    P: Optional[np.ndarray] = None

    COLUMNS = (
        "t", "P", "T", "E", "D", "mt_bound", "fisher_bound",
        "gen_lower", "gen_upper", "in_mt_window", "in_fisher_window",
    )

    def __len__(self):
        return len(self.times)

    def column(self, name: str):
        return self.times if name == "t" else getattr(self, name)


def time_grid(t_max: float, steps: int) -> np.ndarray:
    if not t_max > 0:
        raise ValidationError("t_max", f"t_max must be positive, got {t_max!r}")
    if steps < 2:
        raise ValidationError("steps", f"steps must be at least 2, got {steps!r}")
    return np.linspace(0.0, t_max, steps)


def trace_evolution(spec: Evolution, t_max: float, steps: int) -> EvolutionTrace:
    """Sample every survival probability and bound on ``[0, t_max]``."""
    from .bounds import fisher_bound, generalized_bounds, mt_bound
    from .fisher import quantum_fisher
    from .states import expectation, std_dev

    times = time_grid(t_max, steps)
    qfi = quantum_fisher(spec.rho0, spec.h).qfi
    mt = mt_bound(std_dev(spec.h, spec.rho0))
    fb = fisher_bound(qfi)
    c = min(max(expectation(spec.projector, spec.rho0), 0.0), 1.0)
    lower, upper = generalized_bounds(qfi, c)

    T = np.array([survival_T(spec, t) for t in times])
    E = np.array([survival_E(spec, t) for t in times])
    D = np.array([survival_D(spec, t) for t in times])
    P = None
    if spec.rho0.is_pure:
        psi = spec.rho0.spectrum.eigenvectors[:, -1]
        P = np.array([survival_P(psi, spec.h, t) for t in times])
    return EvolutionTrace(
        times=times,
        P=P,
        T=T,
        E=E,
        D=D,
        mt_bound=mt(times),
        fisher_bound=fb(times),
        gen_lower=lower(times),
        gen_upper=upper(times),
        in_mt_window=mt.contains(times),
        in_fisher_window=fb.contains(times),
    )
