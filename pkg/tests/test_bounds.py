import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_density, random_hermitian, random_projector
from qspeed import (
    BoundKind,
    DensityMatrix,
    Dichotomy,
    Evolution,
    ValidationError,
    build_collective_spin,
    build_named_state,
    build_one_qubit_example,
    build_two_qubit_example,
    commutator_bounds,
    dichotomy_check,
    empirical_theta_perp,
    entanglement_witness,
    fisher_bound,
    generalized_bounds,
    mt_bound,
    producibility_bound,
    pure_state,
    quantum_fisher,
    std_dev,
    survival_D,
    survival_E,
    survival_T,
    theta_perp_bounds,
)
from qspeed.linalg import SIGMA_Z, HermitianOperator

seeds = st.integers(0, 2**32 - 1)
dims = st.sampled_from([2, 3, 4, 8])
SLACK = 1e-9


def fig1():
    return build_two_qubit_example(math.sqrt(2) - 1, 1.0)


def test_mt_bound_examples():
    flat = mt_bound(0.0)
    assert flat.t_end == math.inf
    np.testing.assert_array_equal(flat(np.array([0.0, 5.0, 1e6])), 1.0)
    edge = mt_bound(1.0)
    assert edge.t_end == pytest.approx(math.pi / 2)
    assert edge(math.pi / 2) == pytest.approx(0.0, abs=1e-30)
    assert math.isnan(edge(2.0))
    x = math.sqrt(2) - 1
    s = fig1()
    assert mt_bound(std_dev(s.h, s.rho0)).rate == pytest.approx(math.sqrt((1 + x) / 2), rel=1e-12)


def test_window_invariants():
    assert mt_bound(0.7).rate * mt_bound(0.7).t_end == pytest.approx(math.pi / 2)
    fb = fisher_bound(2.3)
    assert 2 * fb.rate * fb.t_end == pytest.approx(math.pi)
    lower, upper = generalized_bounds(2.3, 0.4)
    assert 2 * lower.rate * lower.t_end == pytest.approx(math.pi - 2 * lower.offset)
    assert 2 * upper.rate * upper.t_end == pytest.approx(math.pi - 2 * upper.offset)


def test_fisher_bound_examples():
    assert fisher_bound(0.0)(123.0) == 1.0
    rho = pure_state([1, 2, 1j])
    h = random_hermitian(np.random.default_rng(4), 3)
    t = np.linspace(0, 3, 40)
    a = fisher_bound(quantum_fisher(rho, h).qfi)
    b = mt_bound(std_dev(h, rho))
    assert a.t_end == pytest.approx(b.t_end, rel=1e-9)
    np.testing.assert_allclose(a.value(t), b.value(t), atol=1e-9)


def test_fisher_bound_strictly_tighter_for_fig1():
    s = fig1()
    fb = fisher_bound(quantum_fisher(s.rho0, s.h).qfi)
    mb = mt_bound(std_dev(s.h, s.rho0))
    t = np.linspace(0, min(fb.t_end, mb.t_end), 200)[1:]
    assert np.all(fb(t) > mb(t))


def test_negative_inputs_rejected():
    with pytest.raises(ValidationError):
        mt_bound(-1.0)
    with pytest.raises(ValidationError):
        fisher_bound(-1.0)
    with pytest.raises(ValidationError):
        generalized_bounds(1.0, 1.5)


def test_generalized_c_one():
    lower, upper = generalized_bounds(3.0, 1.0)
    t = np.linspace(0, 1.5, 20)
    np.testing.assert_allclose(lower(t), fisher_bound(3.0)(t), atol=1e-15)
    assert upper(0.0) == pytest.approx(1.0)


def test_generalized_quarter_offsets():
    lower, upper = generalized_bounds(0.25, 0.25)
    assert lower.offset == pytest.approx(math.pi / 3)
    assert upper.offset == pytest.approx(math.pi / 6)
    assert lower.kind is BoundKind.GEN_LOWER and upper.kind is BoundKind.GEN_UPPER
    assert lower(0.0) == pytest.approx(0.25) and upper(0.0) == pytest.approx(0.25)


def test_fig2_sandwich():
    s = build_one_qubit_example(0.75, 1.0)
    spec = s.evolution()
    lower, upper = generalized_bounds(quantum_fisher(s.rho0, s.h).qfi, 0.25)
    for t in np.linspace(0, max(lower.t_end, upper.t_end), 200):
        e = survival_E(spec, t)
        if lower.contains(t):
            assert e >= lower(t) - SLACK
        if upper.contains(t):
            assert e <= upper(t) + SLACK


def test_dichotomy_examples():
    h = np.diag([-0.5, 1.5, 4.0])
    two_level = Evolution(pure_state([1, 1, 0]), h)
    grid = np.linspace(0, math.pi / 2, 200)
    assert dichotomy_check(two_level, grid) is Dichotomy.EXACT_EQUALITY
    s = fig1().evolution()
    qfi = quantum_fisher(s.rho0, s.h).qfi
    assert dichotomy_check(s, np.linspace(0, math.pi / math.sqrt(qfi), 400)) is Dichotomy.STRICT_ABOVE
    commuting = Evolution(DensityMatrix(np.diag([0.3, 0.7])), SIGMA_Z)
    assert dichotomy_check(commuting, np.linspace(0, 10, 50)) is Dichotomy.EXACT_EQUALITY


def test_theta_perp_bounds_examples():
    b = theta_perp_bounds(1.0, 4.0)
    assert b.mt == pytest.approx(math.pi / 2) and b.fisher == pytest.approx(math.pi / 2)
    assert theta_perp_bounds(1.0, 0.0).fisher == math.inf
    omega = 1.0
    s = build_one_qubit_example(0.75, omega)
    b = theta_perp_bounds(std_dev(s.h, s.rho0), quantum_fisher(s.rho0, s.h).qfi)
    assert b.fisher == pytest.approx(2 * math.pi / omega, rel=1e-12)
    assert b.mt == pytest.approx(math.pi / omega, rel=1e-12)


def test_empirical_theta_perp_saturating():
    s = Evolution(pure_state([1, 1]), SIGMA_Z)
    for which in ("T", "E", "D"):
        root = empirical_theta_perp(s, which, 3.0, 100)
        assert root == pytest.approx(math.pi / 2, abs=1e-8)


def test_empirical_theta_perp_commuting():
    s = Evolution(DensityMatrix(np.diag([0.3, 0.7])), SIGMA_Z)
    assert empirical_theta_perp(s, "T", 10.0, 100) is None


def test_empirical_theta_perp_rejects_unknown_curve():
    with pytest.raises(ValidationError):
        empirical_theta_perp(fig1().evolution(), "Q", 1.0, 10)


def test_empirical_root_respects_fisher_bound():
    # maximally mixed over a two-level pair: reaches orthogonality exactly
    h = np.diag([0.0, 2.0, 0.0, 2.0])
    v1 = np.array([1, 1, 0, 0]) / math.sqrt(2)
    v2 = np.array([0, 0, 1, 1]) / math.sqrt(2)
    rho = DensityMatrix(0.5 * np.outer(v1, v1) + 0.5 * np.outer(v2, v2))
    s = Evolution(rho, h)
    bound = theta_perp_bounds(std_dev(h, rho), quantum_fisher(rho, h).qfi).fisher
    for which in ("T", "E", "D"):
        root = empirical_theta_perp(s, which, 4.0, 60)
        assert root is not None
        assert root >= bound - 1e-8
        assert root == pytest.approx(math.pi / 2, abs=1e-8)


def test_witness_product_states():
    for n in (1, 2, 3, 4):
        rep = entanglement_witness(build_named_state("product_plus", n), build_collective_spin(n, "z", 0.5))
        assert rep.qfi_normalized == pytest.approx(n, abs=1e-9)
        assert not rep.entangled_flag
        assert rep.min_k == 1


def test_witness_ghz_three():
    rep = entanglement_witness(build_named_state("ghz", 3), build_collective_spin(3, "z", 0.5))
    assert rep.qfi_normalized == pytest.approx(9, abs=1e-9)
    assert rep.entangled_flag
    assert rep.min_k == 3
    assert dict(rep.ladder) == {1: 3, 2: 5, 3: 9}
    assert rep.theta_bound == pytest.approx(math.pi / (2 * 0.5 * 3))


def test_witness_independent_of_epsilon_scale():
    # normalising by 2 epsilon makes the verdict independent of the coefficient
    a = entanglement_witness(build_named_state("ghz", 3), build_collective_spin(3, "x", 0.5))
    b = entanglement_witness(build_named_state("ghz", 3), build_collective_spin(3, "z", 2.5))
    assert b.qfi_normalized == pytest.approx(9, abs=1e-9)
    assert a.qfi_normalized == pytest.approx(3, abs=1e-9)  # GHZ is insensitive to sigma_x rotations


def test_producibility_ladder():
    assert producibility_bound(6, 2) == 12
    assert producibility_bound(6, 4) == 16 + 4
    assert producibility_bound(5, 5) == 25
    with pytest.raises(ValidationError):
        producibility_bound(4, 0)


def test_witness_requires_metadata():
    with pytest.raises(ValidationError):
        entanglement_witness(build_named_state("ghz", 2), HermitianOperator(np.eye(4)))
    with pytest.raises(ValidationError):
        entanglement_witness(build_named_state("ghz", 2), build_collective_spin(3, "z", 0.5))


@settings(max_examples=40, deadline=None)
@given(seeds, dims)
def test_bound_soundness(seed, d):
    rng = np.random.default_rng(seed)
    rho = random_density(rng, d, rank=int(rng.integers(1, d + 1)))
    h = random_hermitian(rng, d)
    spec = Evolution(rho, h)
    fb = fisher_bound(quantum_fisher(rho, h).qfi)
    mb = mt_bound(std_dev(h, rho))
    horizon = min(fb.t_end, 20.0)
    for t in np.linspace(0, horizon, 40):
        vals = (survival_T(spec, t), survival_E(spec, t), survival_D(spec, t))
        for v in vals:
            assert v >= fb(t) - SLACK
            if mb.contains(t):
                assert v >= mb(t) - SLACK


@settings(max_examples=40, deadline=None)
@given(seeds, dims)
def test_tightness_ordering(seed, d):
    rng = np.random.default_rng(seed)
    rho, h = random_density(rng, d), random_hermitian(rng, d)
    fb = fisher_bound(quantum_fisher(rho, h).qfi)
    mb = mt_bound(std_dev(h, rho))
    t = np.linspace(0, min(fb.t_end, mb.t_end), 50)
    assert np.all(fb(t) >= mb(t) - SLACK)


@settings(max_examples=40, deadline=None)
@given(seeds, dims)
def test_generalized_sandwich_random(seed, d):
    rng = np.random.default_rng(seed)
    rho = random_density(rng, d, rank=int(rng.integers(1, d + 1)))
    h = random_hermitian(rng, d)
    spec = Evolution(rho, h, random_projector(rng, d))
    c = min(max(survival_E(spec, 0.0), 0.0), 1.0)
    lower, upper = generalized_bounds(quantum_fisher(rho, h).qfi, c)
    for t in np.linspace(0, max(lower.t_end, upper.t_end), 40):
        e = survival_E(spec, t)
        if lower.contains(t):
            assert e >= lower(t) - SLACK
        if upper.contains(t):
            assert e <= upper(t) + SLACK


@settings(max_examples=40, deadline=None)
@given(seeds, dims, st.floats(0, 10), st.booleans())
def test_commutator_chain(seed, d, t, custom):
    rng = np.random.default_rng(seed)
    rho = random_density(rng, d, rank=int(rng.integers(1, d + 1)))
    spec = Evolution(rho, random_hermitian(rng, d), random_projector(rng, d) if custom else None)
    c = commutator_bounds(spec, t)
    assert c.commutator <= c.fisher + SLACK
    assert c.fisher <= c.heisenberg + SLACK


@settings(max_examples=30, deadline=None)
@given(seeds, dims)
def test_dichotomy_never_violated(seed, d):
    rng = np.random.default_rng(seed)
    rho = random_density(rng, d, rank=int(rng.integers(1, d + 1)))
    spec = Evolution(rho, random_hermitian(rng, d))
    qfi = quantum_fisher(rho, spec.h).qfi
    grid = np.linspace(0, math.pi / math.sqrt(qfi), 60)
    assert dichotomy_check(spec, grid) is not Dichotomy.VIOLATION


def test_commutator_chain_near_zero_time():
    # 1 - E ~ t^2 is far below machine epsilon here
    rng = np.random.default_rng(1)
    rho = random_density(rng, 3, rank=int(rng.integers(1, 4)))
    spec = Evolution(rho, random_hermitian(rng, 3))
    c = commutator_bounds(spec, 1e-9)
    assert 0 < c.commutator <= c.fisher <= c.heisenberg
