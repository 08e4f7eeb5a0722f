"""Example scenarios, standard states and Hamiltonians, and scenario files.

Basis convention: ``|0> = (1, 0)`` and qubit 1 is the most significant
tensor factor, so ``|01>`` is basis index 1.

Scenario files are JSON documents::

    {
      "format": 1,
      "name": "fig1",
      "dim": 4,
      "rho": {"dense": [[[re, im], ...], ...]}
          | {"mixture": [{"weight": w, "vector": [[re, im], ...]}
                        | {"weight": w, "dense": ...}, ...]},
      "hamiltonian": {"dense": ...}
                   | {"builder": "collective_spin",
                      "params": {"n": 2, "axis": "x", "coeff": 0.5}},
      "projector": {"dense": ...},          (optional)
      "params": {"x": 0.41, "omega": 1.0}
    }
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import reduce
from pathlib import Path
from typing import Optional, Union

import numpy as np

from .dynamics import Evolution
from .linalg import MAX_DIM, PAULI, HermitianOperator, ValidationError, kron
from .states import (
    RANK_TOL,
    DensityMatrix,
    Projector,
    basis_state,
    mix,
    pure_state,
)

FORMAT_VERSION = 1
MAX_QUBITS = int(math.log2(MAX_DIM))


class ScenarioError(ValidationError):
    """A scenario file is malformed or violates an invariant."""


@dataclass(frozen=True, eq=False)
class LocalHamiltonian:
    """Sum of one-qubit terms, each with operator norm ``epsilon``."""

    matrix: HermitianOperator
    n_qubits: int
    epsilon: float
    axis: Optional[str] = None
    coeff: Optional[float] = None

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValidationError("epsilon", f"epsilon must be positive, got {self.epsilon!r}")
        if not isinstance(self.matrix, HermitianOperator):
            object.__setattr__(self, "matrix", HermitianOperator(self.matrix))
        if self.matrix.dim != 2**self.n_qubits:
            raise ValidationError(
                "dimension", f"{self.n_qubits} qubits need dimension {2**self.n_qubits}"
            )

    @property
    def dim(self) -> int:
        return self.matrix.dim

    def __truediv__(self, scalar):
        return self.matrix / scalar


Hamiltonian = Union[HermitianOperator, LocalHamiltonian]


@dataclass(eq=False)
class Scenario:
    name: str
    rho0: DensityMatrix
    h: Hamiltonian
    projector: Optional[Projector] = None
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        dims = {self.rho0.dim, self.h.dim}
        if self.projector is not None:
            dims.add(self.projector.dim)
        if len(dims) != 1:
            raise ScenarioError("dimension", f"scenario components have dimensions {sorted(dims)}")

    @property
    def dim(self) -> int:
        return self.rho0.dim

    def evolution(self) -> Evolution:
        return Evolution(self.rho0, self.h, self.projector)


def _check_qubits(n: int):
    if not 1 <= n <= MAX_QUBITS:
        raise ValidationError("dimension", f"qubit count must lie in [1, {MAX_QUBITS}], got {n}")


def _check_unit(name: str, value: float):
    if not 0.0 <= value <= 1.0:
        raise ValidationError(name, f"{name} must lie in [0, 1], got {value!r}")


def build_collective_spin(n: int, axis: str, coeff: float) -> LocalHamiltonian:
    """``coeff * sum_i sigma_axis^(i)`` on ``n`` qubits."""
    _check_qubits(n)
    if axis not in PAULI:
        raise ValidationError("axis", f"axis must be one of x, y, z, got {axis!r}")
    if coeff == 0:
        raise ValidationError("epsilon", "coefficient must be nonzero")
    sigma = PAULI[axis]
    eye = np.eye(2, dtype=complex)
    total = np.zeros((2**n, 2**n), dtype=complex)
    for site in range(n):
        factors = [sigma if k == site else eye for k in range(n)]
        total += reduce(kron, factors)
    return LocalHamiltonian(
        HermitianOperator(coeff * total), n, abs(coeff), axis=axis, coeff=float(coeff)
    )


def build_named_state(name: str, n: int, rank_tol: float = RANK_TOL) -> DensityMatrix:
    """``ghz``, ``product_plus`` (``|+>^n``) or ``computational`` (``|0...0>``)."""
    _check_qubits(n)
    dim = 2**n
    if name == "ghz":
        vec = basis_state(0, dim) + basis_state(dim - 1, dim)
    elif name == "product_plus":
        vec = np.ones(dim, dtype=complex)
    elif name == "computational":
        vec = basis_state(0, dim)
    else:
        raise ValidationError("state", f"unknown state {name!r}")
    return pure_state(vec, rank_tol)


def build_two_qubit_example(x: float, omega: float) -> Scenario:
    """``(1-x)|00><00| + x|psi+><psi+|`` under ``(omega/2)(sigma_x (x) 1 + 1 (x) sigma_x)``."""
    _check_unit("x", x)
    if not omega > 0:
        raise ValidationError("omega", f"omega must be positive, got {omega!r}")
    psi_plus = (basis_state(1, 4) + basis_state(2, 4)) / math.sqrt(2)
    rho = mix([(1 - x, pure_state(basis_state(0, 4))), (x, pure_state(psi_plus))])
    h = build_collective_spin(2, "x", omega / 2)
    return Scenario("two_qubit", rho, h, None, {"x": float(x), "omega": float(omega)})


def build_one_qubit_example(x: float, omega: float) -> Scenario:
    """``(1-x)|0><0| + x|1><1|`` under ``omega sigma_x / 2``, measured with ``|0><0|``."""
    _check_unit("x", x)
    if not omega > 0:
        raise ValidationError("omega", f"omega must be positive, got {omega!r}")
    rho = DensityMatrix(np.diag([1 - x, x]).astype(complex))
    h = build_collective_spin(1, "x", omega / 2)
    projector = Projector(np.diag([1.0, 0.0]).astype(complex))
    return Scenario("one_qubit", rho, h, projector, {"x": float(x), "omega": float(omega)})


# --- serialization -------------------------------------------------------

def _encode_matrix(m: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m)]


def _decode_complex_array(data, where: str) -> np.ndarray:
    try:
        arr = np.asarray(data, dtype=float)
    except (TypeError, ValueError):
        raise ScenarioError("format", f"{where}: entries must be [re, im] number pairs") from None
    if arr.shape[-1:] != (2,):
        raise ScenarioError("format", f"{where}: entries must be [re, im] pairs, got shape {arr.shape}")
    return arr[..., 0] + 1j * arr[..., 1]


def _decode_dense(data, where: str, dim: int) -> np.ndarray:
    m = _decode_complex_array(data, where)
    if m.shape != (dim, dim):
        raise ScenarioError("dimension", f"{where}: expected {dim}x{dim} matrix, got shape {m.shape}")
    return m


def _field(doc: dict, key: str, where: str):
    if not isinstance(doc, dict) or key not in doc:
        raise ScenarioError("format", f"{where}: missing field {key!r}")
    return doc[key]


def _wrap(where: str, fn, *args):
    try:
        return fn(*args)
    except ScenarioError:
        raise
    except ValidationError as exc:
        raise ScenarioError(exc.invariant, f"{where}: {exc}") from None


def scenario_to_dict(s: Scenario) -> dict:
    doc = {"format": FORMAT_VERSION, "name": s.name, "dim": s.dim,
           "rho": {"dense": _encode_matrix(s.rho0.matrix)}}
    if isinstance(s.h, LocalHamiltonian) and s.h.axis is not None:
        doc["hamiltonian"] = {
            "builder": "collective_spin",
            "params": {"n": s.h.n_qubits, "axis": s.h.axis, "coeff": s.h.coeff},
        }
    else:
        doc["hamiltonian"] = {"dense": _encode_matrix(np.asarray(s.h.matrix))}
    if s.projector is not None:
        doc["projector"] = {"dense": _encode_matrix(s.projector.matrix)}
    doc["params"] = {k: v for k, v in s.params.items()}
    return doc


def scenario_from_dict(doc: dict, rank_tol: float = RANK_TOL) -> Scenario:
    """Build and validate a scenario from its decoded JSON document."""
    if not isinstance(doc, dict):
        raise ScenarioError("format", "top level must be a JSON object")
    version = _field(doc, "format", "scenario")
    if version != FORMAT_VERSION:
        raise ScenarioError("format", f"unsupported format version {version!r}")
    name = str(doc.get("name", "scenario"))
    dim = _field(doc, "dim", "scenario")
    if not isinstance(dim, int) or not 1 <= dim <= MAX_DIM:
        raise ScenarioError("dimension", f"dim must be an integer in [1, {MAX_DIM}], got {dim!r}")

    rho_doc = _field(doc, "rho", "scenario")
    if isinstance(rho_doc, dict) and "dense" in rho_doc:
        rho = _wrap("rho", DensityMatrix, _decode_dense(rho_doc["dense"], "rho.dense", dim), rank_tol)
    elif isinstance(rho_doc, dict) and "mixture" in rho_doc:
        pairs = []
        for k, comp in enumerate(rho_doc["mixture"]):
            where = f"rho.mixture[{k}]"
            weight = float(_field(comp, "weight", where))
            if "vector" in comp:
                vec = _decode_complex_array(comp["vector"], where + ".vector")
                if vec.shape != (dim,):
                    raise ScenarioError("dimension", f"{where}.vector: expected length {dim}")
                state = _wrap(where, pure_state, vec, rank_tol)
            else:
                state = _wrap(where, DensityMatrix, _decode_dense(_field(comp, "dense", where), where + ".dense", dim), rank_tol)
            pairs.append((weight, state))
        rho = _wrap("rho.mixture", mix, pairs, rank_tol)
    else:
        raise ScenarioError("format", "rho: expected 'dense' or 'mixture'")

    h_doc = _field(doc, "hamiltonian", "scenario")
    if isinstance(h_doc, dict) and "dense" in h_doc:
        h = _wrap("hamiltonian", HermitianOperator, _decode_dense(h_doc["dense"], "hamiltonian.dense", dim))
    elif isinstance(h_doc, dict) and h_doc.get("builder") == "collective_spin":
        p = _field(h_doc, "params", "hamiltonian")
        h = _wrap("hamiltonian", build_collective_spin,
                  int(_field(p, "n", "hamiltonian.params")),
                  str(_field(p, "axis", "hamiltonian.params")),
                  float(_field(p, "coeff", "hamiltonian.params")))
    else:
        raise ScenarioError("format", "hamiltonian: expected 'dense' or builder 'collective_spin'")

    projector = None
    if doc.get("projector") is not None:
        pm = _decode_dense(_field(doc["projector"], "dense", "projector"), "projector.dense", dim)
        projector = _wrap("projector", Projector, pm)

    params = doc.get("params", {})
    if not isinstance(params, dict):
        raise ScenarioError("format", "params must be an object")
    return _wrap("scenario", Scenario, name, rho, h, projector, dict(params))


def save_scenario(s: Scenario, path) -> None:
    Path(path).write_text(json.dumps(scenario_to_dict(s), indent=1) + "\n")


def load_scenario(path, rank_tol: float = RANK_TOL) -> Scenario:
    """Read a scenario file.

    Raises:
        ScenarioError: on malformed JSON (with line and column) or on any
            invariant violation, named in the message.
        OSError: if the file cannot be read.
    """
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError("parse", f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return scenario_from_dict(doc, rank_tol)
