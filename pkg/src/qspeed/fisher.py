"""Quantum and classical Fisher information for unitary time evolution."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import Evolution, e_dot, evolve, survival_E
from .linalg import ValidationError, as_operator
from .states import as_density, fidelity, std_dev

# Pairs of eigenvalues whose sum is at most this contribute nothing.
PAIR_TOL = 1e-12
# Binary-outcome Fisher information is undefined where p(1-p) falls below this.
DEGENERACY_TOL = 1e-12
SATURATION_TOL = 1e-9


class UndefinedFisherError(ArithmeticError):
    """The binary Fisher ratio is 0/0 (or x/0) at the requested time."""


@dataclass(frozen=True)
class FisherResult:
    qfi: float
    variance_bound: float

    @property
    def saturated(self) -> bool:
        return abs(self.qfi - self.variance_bound) <= SATURATION_TOL * max(1.0, self.variance_bound)


def quantum_fisher(rho, h, pair_tol: float = PAIR_TOL) -> FisherResult:
    """Quantum Fisher information of ``rho`` for the time parameter of ``exp(-iHt)``.

    Uses the spectral form ``2 sum_ij (p_i - p_j)^2 / (p_i + p_j) |<i|H|j>|^2``
    over the eigenpairs of ``rho``. The result is returned together with
    the variance bound ``4 (Delta H)^2`` it can never exceed.
    """
    rho = as_density(rho)
    h = as_operator(h)
    if rho.dim != h.dim:
        raise ValidationError("dimension", f"rho has dimension {rho.dim}, H has {h.dim}")
    s = rho.spectrum
    p = s.eigenvalues
    v = s.eigenvectors
    h_eig = v.conj().T @ h.matrix @ v
    psum = p[:, None] + p[None, :]
    pdiff = p[:, None] - p[None, :]
    keep = psum > pair_tol
    weights = np.zeros_like(psum)
    weights[keep] = pdiff[keep] ** 2 / psum[keep]
    qfi = 2.0 * float(np.sum(weights * np.abs(h_eig) ** 2))
    return FisherResult(qfi=max(qfi, 0.0), variance_bound=4.0 * std_dev(h, rho) ** 2)


def classical_fisher_binary(spec: Evolution, t: float, guard: float = DEGENERACY_TOL) -> float:
    """Fisher information of the two-outcome measurement ``{Pi, 1 - Pi}`` at time ``t``.

    Raises:
        UndefinedFisherError: if ``p(1 - p) < guard``.
    """
    p = survival_E(spec, t)
    var = p * (1.0 - p)
    if var < guard:
        raise UndefinedFisherError(f"p(1-p) = {var:.3e} at t = {t!r}")
    return e_dot(spec, t) ** 2 / var


def qfi_bures_oracle(rho, h, dt: float) -> float:
    """Finite-difference estimate ``8 (1 - F(rho, rho(dt))) / dt^2``.

    Independent of the spectral formula: it only needs the fidelity of two
    nearby states. Intended as a cross-check, accurate to ``O(dt^2)``.
    """
    if not 1e-5 <= dt <= 1e-2:
        raise ValidationError("dt", f"dt must lie in [1e-5, 1e-2], got {dt!r}")
    spec = Evolution(as_density(rho), as_operator(h))
    f = fidelity(spec.rho0, evolve(spec, dt))
    return 8.0 * (1.0 - f) / dt**2
