"""Command-line front end.

Units: hbar = 1, so times are measured in units of inverse energy.

Exit codes: 0 success, 2 validation error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import io
import math
import sys

import numpy as np

from .bounds import (
    dichotomy_check,
    empirical_theta_perp,
    entanglement_witness,
    theta_perp_bounds,
)
from .dynamics import EvolutionTrace, time_grid, trace_evolution
from .fisher import quantum_fisher
from .linalg import HermitianOperator, ValidationError
from .scenarios import (
    Scenario,
    build_collective_spin,
    build_named_state,
    build_one_qubit_example,
    build_two_qubit_example,
    load_scenario,
)
from .states import RANK_TOL, DensityMatrix, pure_state, std_dev

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_IO = 3


def _saturating() -> Scenario:
    rho = pure_state([1, 1])
    h = HermitianOperator(np.diag([1.0, -1.0]).astype(complex))
    return Scenario("plus_sigma_z", rho, h)


def _commuting() -> Scenario:
    rho = DensityMatrix(np.diag([0.75, 0.25]).astype(complex))
    h = HermitianOperator(np.diag([1.0, -1.0]).astype(complex))
    return Scenario("commuting", rho, h)


BUILTINS = {
    "fig1": lambda: build_two_qubit_example(math.sqrt(2) - 1, 1.0),
    "fig2": lambda: build_one_qubit_example(0.75, 1.0),
    "plus_sigma_z": _saturating,
    "commuting": _commuting,
}


def _fmt(v) -> str:
    if v is None or (isinstance(v, float) and math.isnan(v)):
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    return format(float(v), ".12g")


def format_csv(tr: EvolutionTrace) -> str:
    """Render a trace as CSV with a fixed 12-significant-digit format."""
    buf = io.StringIO()
    buf.write(",".join(EvolutionTrace.COLUMNS) + "\n")
    for i in range(len(tr)):
        row = []
        for name in EvolutionTrace.COLUMNS:
            col = tr.column(name)
            row.append(_fmt(None if col is None else col[i].item()))
        buf.write(",".join(row) + "\n")
    return buf.getvalue()


def _load(args) -> Scenario:
    if args.scenario and args.builtin:
        raise ValidationError("arguments", "give either --scenario or --builtin, not both")
    if args.builtin:
        return BUILTINS[args.builtin]()
    if args.scenario:
        return load_scenario(args.scenario, rank_tol=args.tol_rank)
    raise ValidationError("arguments", "one of --scenario or --builtin is required")


def _with_rank_tol(s: Scenario, rank_tol: float) -> Scenario:
    if rank_tol == s.rho0.rank_tol:
        return s
    rho = DensityMatrix(s.rho0.matrix, rank_tol)
    return Scenario(s.name, rho, s.h, s.projector, s.params)


def _default_t_max(args, qfi: float) -> float:
    if args.t_max is not None:
        return args.t_max
    if qfi > 0:
        return math.pi / math.sqrt(qfi)
    raise ValidationError("t_max", "--t-max is required when the Fisher information vanishes")


def _fmt_time(t) -> str:
    if t is None:
        return "none in range"
    if math.isinf(t):
        return "inf (no finite passage time)"
    return format(t, ".12g")


def cmd_trace(args, out) -> int:
    s = _with_rank_tol(_load(args), args.tol_rank)
    spec = s.evolution()
    qfi = quantum_fisher(s.rho0, s.h).qfi
    dh = std_dev(s.h, s.rho0)
    t_max = _default_t_max(args, qfi)
    tr = trace_evolution(spec, t_max, args.steps)
    text = format_csv(tr)
    if args.out is None:
        out.write(text)
        return EXIT_OK
    with open(args.out, "w", newline="") as fh:
        fh.write(text)
    bounds = theta_perp_bounds(dh, qfi)
    out.write(f"scenario: {s.name}\n")
    out.write(f"delta_H: {dh:.12g}\n")
    out.write(f"fisher: {qfi:.12g}\n")
    out.write(f"theta_perp_mt: {_fmt_time(bounds.mt)}\n")
    out.write(f"theta_perp_fisher: {_fmt_time(bounds.fisher)}\n")
    for which in ("T", "E", "D"):
        root = empirical_theta_perp(spec, which, t_max, args.steps)
        out.write(f"theta_perp_empirical_{which}: {_fmt_time(root)}\n")
    out.write(f"rows: {len(tr)}\n")
    return EXIT_OK


def cmd_bounds(args, out) -> int:
    s = _with_rank_tol(_load(args), args.tol_rank)
    spec = s.evolution()
    qfi = quantum_fisher(s.rho0, s.h).qfi
    dh = std_dev(s.h, s.rho0)
    b = theta_perp_bounds(dh, qfi)
    out.write(f"scenario: {s.name}\n")
    out.write(f"delta_H: {dh:.12g}\n")
    out.write(f"fisher: {qfi:.12g}\n")
    out.write(f"theta_perp_mt: {_fmt_time(b.mt)}\n")
    out.write(f"theta_perp_fisher: {_fmt_time(b.fisher)}\n")
    if math.isinf(b.fisher):
        out.write("passage: no finite passage time\n")
    if not (math.isinf(b.mt) or math.isinf(b.fisher)):
        out.write(f"gap: {b.fisher - b.mt:.12g}\n")

    if args.t_max is not None:
        horizon = args.t_max
    elif qfi > 0:
        horizon = 2 * b.fisher
    else:
        spread = float(np.ptp(spec.h.spectrum.eigenvalues))
        horizon = 2 * math.pi / max(spread, 1.0)
    root = empirical_theta_perp(spec, "T", horizon, args.steps)
    out.write(f"theta_perp_empirical: {_fmt_time(root)}\n")
    if spec.default_projector:
        verdict = dichotomy_check(spec, time_grid(min(horizon, b.fisher), args.steps))
        out.write(f"dichotomy: {verdict.value}\n")
    else:
        out.write("dichotomy: n/a (custom projector)\n")
    return EXIT_OK


def cmd_witness(args, out) -> int:
    if args.scenario:
        s = load_scenario(args.scenario, rank_tol=args.tol_rank)
        rho = s.rho0
        n = int(round(math.log2(s.dim)))
        if 2**n != s.dim:
            raise ValidationError("dimension", f"dimension {s.dim} is not a power of two")
    else:
        if args.state is None or args.n is None:
            raise ValidationError("arguments", "give --scenario or both --state and --n")
        n = args.n
        rho = build_named_state(args.state, n, args.tol_rank)
    h = build_collective_spin(n, args.axis, args.coeff)
    rep = entanglement_witness(rho, h)
    out.write(f"n_qubits: {rep.n_qubits}\n")
    out.write(f"epsilon: {rep.epsilon:.12g}\n")
    out.write(f"qfi_normalized: {rep.qfi_normalized:.12g}\n")
    out.write(f"entangled: {'true' if rep.entangled_flag else 'false'}\n")
    for k, bound in rep.ladder:
        out.write(f"ladder k={k} bound={bound}\n")
    out.write(f"theta_bound: {rep.theta_bound:.12g}\n")
    out.write(f"min_k={rep.min_k}\n")
    return EXIT_OK


def cmd_validate(args, out) -> int:
    s = load_scenario(args.scenario, rank_tol=args.tol_rank)
    out.write(f"ok: {s.name} (dim {s.dim}, rank {s.rho0.rank})\n")
    return EXIT_OK


def _positive_float(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return v


def _steps(text: str) -> int:
    v = int(text)
    if v < 2:
        raise argparse.ArgumentTypeError(f"must be at least 2, got {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qspeed",
        description="Quantum speed limits for unitary evolution of mixed states (hbar = 1).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def scenario_args(p):
        p.add_argument("--scenario", help="scenario JSON file")
        p.add_argument("--builtin", choices=sorted(BUILTINS), help="built-in scenario")
        p.add_argument("--tol-rank", type=float, default=RANK_TOL,
                       help="eigenvalue threshold for the range of rho (default %(default)g)")

    p = sub.add_parser("trace", help="sample survival probabilities and bounds as CSV")
    scenario_args(p)
    p.add_argument("--t-max", type=_positive_float, default=None,
                   help="end of the time grid (default pi/sqrt(F))")
    p.add_argument("--steps", type=_steps, default=400, help="number of grid points")
    p.add_argument("--out", help="CSV output path (default: standard output, no summary)")
    p.add_argument("--format", choices=["csv"], default="csv")
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("bounds", help="print passage-time bounds and the dichotomy verdict")
    scenario_args(p)
    p.add_argument("--t-max", type=_positive_float, default=None)
    p.add_argument("--steps", type=_steps, default=400)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("witness", help="Fisher-information entanglement witness")
    p.add_argument("--scenario", help="scenario JSON file holding the state")
    p.add_argument("--state", choices=["ghz", "product_plus", "computational"])
    p.add_argument("--n", type=int, help="number of qubits")
    p.add_argument("--axis", choices=["x", "y", "z"], default="z")
    p.add_argument("--coeff", type=float, default=0.5,
                   help="coefficient of each sigma term (default %(default)g)")
    p.add_argument("--tol-rank", type=float, default=RANK_TOL)
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("validate", help="check a scenario file")
    p.add_argument("--scenario", required=True)
    p.add_argument("--tol-rank", type=float, default=RANK_TOL)
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
