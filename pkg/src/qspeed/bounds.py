"""Speed-limit bounds, passage-time estimates and Fisher-based witnesses."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from .dynamics import Evolution, survival_D, survival_E, survival_T, time_grid
from .fisher import quantum_fisher
from .linalg import ValidationError, as_operator
from .states import as_density, std_dev

# Tolerance on probabilities when classifying equality with the Fisher bound.
EQUALITY_TOL = 1e-8
# A survival probability must drop below this for a minimum to count as a root.
ROOT_TOL = 1e-7
ROOT_XTOL = 1e-10
_WINDOW_RTOL = 1e-12


class BoundKind(enum.Enum):
    MT = "mt"
    FISHER = "fisher"
    GEN_LOWER = "gen_lower"
    GEN_UPPER = "gen_upper"


@dataclass(frozen=True)
class BoundCurve:
    """``cos^2(rate t + offset)`` (or ``sin^2`` for GEN_UPPER) on ``[0, t_end]``.

    MT and FISHER curves are even in ``t`` and valid for ``|t| <= t_end``.
    Evaluating outside the window yields ``nan``.
    """

    kind: BoundKind
    rate: float
    offset: float = 0.0
    t_end: float = field(init=False)

    def __post_init__(self):
        if self.rate < 0:
            raise ValidationError("rate", f"bound rate must be nonnegative, got {self.rate!r}")
        if self.rate == 0:
            t_end = math.inf
        elif self.kind is BoundKind.MT:
            t_end = (math.pi / 2) / self.rate
        else:
            t_end = (math.pi - 2 * self.offset) / (2 * self.rate)
        object.__setattr__(self, "t_end", t_end)

    def contains(self, t):
        t = np.asarray(t, dtype=float)
        slack = _WINDOW_RTOL * (1.0 if math.isinf(self.t_end) else max(1.0, self.t_end))
        if self.kind in (BoundKind.MT, BoundKind.FISHER):
            return np.abs(t) <= self.t_end + slack
        return (t >= 0) & (t <= self.t_end + slack)

    def value(self, t):
        """Curve value ignoring the window."""
        t = np.asarray(t, dtype=float)
        arg = self.rate * np.abs(t) + self.offset
        if self.kind is BoundKind.GEN_UPPER:
            return np.sin(arg) ** 2
        return np.cos(arg) ** 2

    def __call__(self, t):
        out = np.where(self.contains(t), self.value(t), np.nan)
        return float(out) if out.ndim == 0 else out


def mt_bound(dh: float) -> BoundCurve:
    """Mandelstam-Tamm curve ``cos^2(Delta H t)`` valid while ``Delta H |t| <= pi/2``."""
    if dh < 0:
        raise ValidationError("dh", f"standard deviation must be nonnegative, got {dh!r}")
    return BoundCurve(BoundKind.MT, float(dh))


def fisher_bound(qfi: float) -> BoundCurve:
    """Fisher curve ``cos^2(sqrt(F) t / 2)`` valid while ``sqrt(F) |t| <= pi``."""
    if qfi < 0:
        raise ValidationError("qfi", f"Fisher information must be nonnegative, got {qfi!r}")
    return BoundCurve(BoundKind.FISHER, math.sqrt(qfi) / 2)


class GeneralizedBounds(NamedTuple):
    lower: BoundCurve
    upper: BoundCurve


def generalized_bounds(qfi: float, c: float) -> GeneralizedBounds:
    """Lower and upper curves for ``<Pi>_rho(t)`` given ``<Pi>_rho = c``."""
    if not 0.0 <= c <= 1.0:
        raise ValidationError("c", f"initial expectation must lie in [0, 1], got {c!r}")
    if qfi < 0:
        raise ValidationError("qfi", f"Fisher information must be nonnegative, got {qfi!r}")
    rate = math.sqrt(qfi) / 2
    root = math.sqrt(c)
    return GeneralizedBounds(
        BoundCurve(BoundKind.GEN_LOWER, rate, math.acos(root)),
        BoundCurve(BoundKind.GEN_UPPER, rate, math.asin(root)),
    )


class Dichotomy(enum.Enum):
    STRICT_ABOVE = "STRICT_ABOVE"
    EXACT_EQUALITY = "EXACT_EQUALITY"
    VIOLATION = "VIOLATION"


def dichotomy_check(spec: Evolution, grid, tol: float = EQUALITY_TOL) -> Dichotomy:
    """Classify ``E(t)`` against the Fisher curve on the sampled window.

    Either ``E`` lies strictly above the curve for every ``t > 0`` in the
    window, or it coincides with it identically. Any sample more than
    ``tol`` below the curve is a VIOLATION.
    """
    if not spec.default_projector:
        raise ValidationError("projector", "dichotomy check requires the range projector")
    curve = fisher_bound(quantum_fisher(spec.rho0, spec.h).qfi)
    grid = np.asarray(grid, dtype=float)
    grid = grid[(grid != 0) & curve.contains(grid)]
    if grid.size == 0:
        return Dichotomy.EXACT_EQUALITY
    gap = np.array([survival_E(spec, t) for t in grid]) - curve.value(grid)
    if np.any(gap < -tol):
        return Dichotomy.VIOLATION
    if np.all(np.abs(gap) <= tol):
        return Dichotomy.EXACT_EQUALITY
    return Dichotomy.STRICT_ABOVE


class PassageTimeBounds(NamedTuple):
    mt: float
    fisher: float


def theta_perp_bounds(dh: float, qfi: float) -> PassageTimeBounds:
    """Lower bounds ``pi / (2 Delta H)`` and ``pi / sqrt(F)``; ``inf`` when unbounded."""
    mt = math.pi / (2 * dh) if dh > 0 else math.inf
    fisher = math.pi / math.sqrt(qfi) if qfi > 0 else math.inf
    return PassageTimeBounds(mt, fisher)


_SURVIVALS = {"T": survival_T, "E": survival_E, "D": survival_D}


def _slope_sign(f, t: float, h: float) -> float:
    return f(t + h) - f(t - h)


def empirical_theta_perp(spec: Evolution, which: str, t_max: float, steps: int,
                         root_tol: float = ROOT_TOL) -> Optional[float]:
    """First time in ``(0, t_max]`` at which the chosen survival probability vanishes.

    Survival probabilities touch zero without changing sign, so each grid
    local minimum is refined by bisection on the sign of the central-difference
    slope, and accepted as a root when the refined value is below ``root_tol``.
    Returns ``None`` when no root is found.
    """
    func = _SURVIVALS.get(which)
    if func is None:
        raise ValidationError("which", f"unknown survival probability {which!r}")

    def g(t):
        return func(spec, t)

    times = time_grid(t_max, steps)
    vals = np.array([g(t) for t in times])
    n = len(times)
    for i in range(1, n):
        left_ok = vals[i] <= vals[i - 1]
        right_ok = i == n - 1 or vals[i] <= vals[i + 1]
        if not (left_ok and right_ok):
            continue
        lo = times[i - 1]
        hi = times[i + 1] if i < n - 1 else times[i]
        t_star = _refine_minimum(g, lo, hi)
        if g(t_star) < root_tol:
            return float(t_star)
    return None


def _refine_minimum(g, lo: float, hi: float) -> float:
    h = max(1e-5 * (hi - lo), 1e-7)
    while hi - lo > ROOT_XTOL:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if _slope_sign(g, mid, h) > 0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


class CommutatorBounds(NamedTuple):
    commutator: float
    fisher: float
    heisenberg: float


def commutator_bounds(spec: Evolution, t: float) -> CommutatorBounds:
    """``|<[H, Pi]>|`` at ``rho(t)`` with its Fisher and Heisenberg upper bounds."""
    rho_t = spec.rho_matrix(t)
    h, pi = spec.h.matrix, spec.projector.matrix
    comm = abs(np.einsum("ij,ji->", h @ pi - pi @ h, rho_t))
    # both outcome weights as sums of squared norms, so 1 - p keeps relative accuracy near t = 0
    spec0 = spec.rho0.spectrum
    moved = spec.propagator(t) @ spec0.eigenvectors
    inside = pi @ moved
    w = spec0.eigenvalues
    p = float(np.sum(w * np.sum(np.abs(inside) ** 2, axis=0)))
    q = float(np.sum(w * np.sum(np.abs(moved - inside) ** 2, axis=0)))
    d_pi = math.sqrt(max(p * q, 0.0))
    qfi = quantum_fisher(spec.rho0, spec.h).qfi
    dh = std_dev(spec.h, spec.rho0)
    return CommutatorBounds(float(comm), math.sqrt(qfi) * d_pi, 2.0 * dh * d_pi)


def producibility_bound(n: int, k: int) -> int:
    """``s k^2 + (N - s k)^2`` with ``s = N // k``."""
    if not 1 <= k <= n:
        raise ValidationError("k", f"k must lie in [1, {n}], got {k!r}")
    s = n // k
    return s * k * k + (n - s * k) ** 2


@dataclass(frozen=True)
class WitnessReport:
    n_qubits: int
    epsilon: float
    qfi_normalized: float
    entangled_flag: bool
    min_k: int
    theta_bound: float
    ladder: tuple = ()


def entanglement_witness(rho, h, tol: float = 1e-9) -> WitnessReport:
    """Entanglement and k-producibility verdicts from the Fisher information.

    ``h`` must carry ``n_qubits`` and ``epsilon`` (the common operator norm of
    its one-qubit terms), as a ``LocalHamiltonian`` does. The Fisher
    information is evaluated for ``H / (2 epsilon)``.
    """
    n = getattr(h, "n_qubits", None)
    eps = getattr(h, "epsilon", None)
    if n is None or eps is None:
        raise ValidationError("metadata", "Hamiltonian lacks n_qubits/epsilon metadata")
    if not eps > 0:
        raise ValidationError("epsilon", f"epsilon must be positive, got {eps!r}")
    rho = as_density(rho)
    op = as_operator(h)
    if rho.dim != 2**n or op.dim != 2**n:
        raise ValidationError("dimension", f"expected dimension {2**n} for {n} qubits")
    qfi = quantum_fisher(rho, op / (2 * eps)).qfi
    slack = tol * max(1.0, float(n * n))
    ladder = tuple((k, producibility_bound(n, k)) for k in range(1, n + 1))
    min_k = next(k for k, b in ladder if qfi <= b + slack)
    bound = producibility_bound(n, min_k)
    return WitnessReport(
        n_qubits=n,
        epsilon=float(eps),
        qfi_normalized=qfi,
        entangled_flag=bool(qfi > n + slack),
        min_k=min_k,
        theta_bound=math.pi / (2 * eps * math.sqrt(bound)),
        ladder=ladder,
    )


__all__ = [
    "BoundCurve",
    "BoundKind",
    "CommutatorBounds",
    "Dichotomy",
    "GeneralizedBounds",
    "PassageTimeBounds",
    "WitnessReport",
    "commutator_bounds",
    "dichotomy_check",
    "empirical_theta_perp",
    "entanglement_witness",
    "fisher_bound",
    "generalized_bounds",
    "mt_bound",
    "producibility_bound",
    "theta_perp_bounds",
]
