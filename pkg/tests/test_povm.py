"""Tests for measurement bases, key POVMs, and EPR sampling.

Two independent oracles live here:

- explicit matrix literals for every POVM element (built from the textbook
  outer-product formulas with no shared code), checked entry-by-entry;
- a brute-force grid search over the POVM weight alpha, using numpy's
  eigensolver for positivity, which must locate the same maximum weight
  as the closed form 1/(1+cos(theta)).
"""

import math

import numpy as np
import pytest

from qpqsim.povm import (
    INCONCLUSIVE,
    MeasBasis,
    Povm3,
    Theta,
    build_povm,
    inconclusive_probability,
    key_basis,
    measure_pure_state,
    middle_basis,
    optimal_alpha,
    outcome_distribution,
    povm_elements,
    sample_epr,
)
from qpqsim.qmath import PureState, fidelity_pure

THETAS = [math.pi / 8, math.pi / 6, math.pi / 4, math.pi / 3, math.pi / 2]


# ---------------------------------------------------------------------------
# oracles
# ---------------------------------------------------------------------------


def povm_matrices_oracle(announced_bit, theta_rad):
    """Element matrices written out longhand from the defining formulas."""
    s, c = math.sin(theta_rad), math.cos(theta_rad)
    w = 1.0 / (1.0 + c)
    if announced_bit == 0:
        e0 = w * np.array([[s * s, -s * c], [-s * c, c * c]])
        e1 = w * np.array([[0.0, 0.0], [0.0, 1.0]])
    else:
        e0 = w * np.array([[c * c, s * c], [s * c, s * s]])
        e1 = w * np.array([[1.0, 0.0], [0.0, 0.0]])
    return e0, e1, np.eye(2) - e0 - e1


def largest_psd_alpha_oracle(theta, step=1e-4):
    """Brute-force the optimization: scan alpha until PSD breaks.

    Scans alpha in [0, 1.2/(1+cos t)] in `step` increments and returns the
    largest grid value for which all six element matrices (both announced
    bits) stay PSD, judged by numpy's eigensolver.
    """
    upper = 1.2 / (1.0 + theta.cos)
    alphas = np.arange(0.0, upper + step, step)
    best = 0.0
    for a in alphas:
        ok = True
        for bit in (0, 1):
            for e in povm_elements(bit, theta, float(a)):
                if np.linalg.eigvalsh(e)[0] < -1e-12:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            best = float(a)
    return best


# ---------------------------------------------------------------------------
# Theta and bases
# ---------------------------------------------------------------------------


def test_theta_domain():
    Theta(math.pi / 2)  # upper endpoint allowed
    for bad in (0.0, -0.1, math.pi / 2 + 1e-9, float("nan")):
        with pytest.raises(ValueError):
            Theta(bad)


def test_key_basis_bit0_is_computational():
    basis = key_basis(0, Theta(0.3))
    assert basis.v0 == PureState(1, 0)
    assert basis.v1 == PureState(0, 1)


def test_key_basis_bit1_at_right_angle():
    basis = key_basis(1, Theta(math.pi / 2))
    assert fidelity_pure(basis.v0, PureState(0, 1)) == pytest.approx(1.0, abs=1e-12)
    assert fidelity_pure(basis.v1, PureState(1, 0)) == pytest.approx(1.0, abs=1e-12)


def test_key_basis_bit1_amplitudes():
    basis = key_basis(1, Theta(math.pi / 3))
    assert basis.v0.amp0 == pytest.approx(0.5, abs=1e-12)
    assert basis.v0.amp1 == pytest.approx(math.sqrt(3) / 2, abs=1e-12)


def test_middle_basis_half_angle():
    basis = middle_basis(Theta(math.pi / 2))
    assert basis.v0.amp0 == pytest.approx(math.cos(math.pi / 4), abs=1e-12)
    basis = middle_basis(Theta(math.pi / 3))
    assert basis.v0.amp0 == pytest.approx(math.sqrt(3) / 2, abs=1e-12)
    assert basis.v0.amp1 == pytest.approx(0.5, abs=1e-12)


def test_bases_orthonormal_on_random_thetas():
    rng = np.random.default_rng(21)
    for _ in range(100):
        theta = Theta(rng.uniform(1e-6, math.pi / 2))
        for basis in (key_basis(0, theta), key_basis(1, theta), middle_basis(theta)):
            assert abs(np.vdot(basis.v0.vector, basis.v1.vector)) < 1e-12


def test_non_orthogonal_basis_rejected():
    with pytest.raises(ValueError):
        MeasBasis(PureState(1, 0), PureState(math.cos(0.3), math.sin(0.3)))


# ---------------------------------------------------------------------------
# POVM construction
# ---------------------------------------------------------------------------


def test_povm_elements_match_matrix_oracle():
    for theta_rad in THETAS:
        theta = Theta(theta_rad)
        for bit in (0, 1):
            got = build_povm(bit, theta)
            want = povm_matrices_oracle(bit, theta_rad)
            for g, w in zip(got.elements, want):
                assert np.max(np.abs(g - w)) < 1e-12


def test_povm_completeness_and_psd_grid():
    for theta_rad in np.linspace(0.01, math.pi / 2, 50):
        theta = Theta(float(theta_rad))
        for bit in (0, 1):
            povm = build_povm(bit, theta)  # constructor enforces PSD+completeness
            total = povm.e0 + povm.e1 + povm.e2
            assert np.max(np.abs(total - np.eye(2))) <= 1e-12
            for e in povm.elements:
                assert np.linalg.eigvalsh(e)[0] >= -1e-12


def test_conclusive_element_probabilities():
    theta = Theta(math.pi / 3)
    povm = build_povm(0, theta)
    zero = PureState(1, 0)
    rotated = key_basis(1, theta).v0  # |0'>
    v = zero.vector
    assert float(np.real(np.vdot(v, povm.e0 @ v))) == pytest.approx(0.5, abs=1e-12)
    # wrong-state probabilities are exactly zero
    w = rotated.vector
    assert abs(np.vdot(w, povm.e0 @ w)) < 1e-12
    assert abs(np.vdot(v, povm.e1 @ v)) < 1e-12


def test_middle_state_never_inconclusive():
    # The inconclusive element never fires on a middle-basis state.
    for theta_rad in THETAS:
        theta = Theta(theta_rad)
        mid = middle_basis(theta)
        for announced, state in ((1, mid.v0), (0, mid.v1)):
            povm = build_povm(announced, theta)
            v = state.vector
            assert abs(np.vdot(v, povm.e2 @ v)) < 1e-12


def test_bad_announced_bit_rejected():
    with pytest.raises(ValueError):
        build_povm(2, Theta(0.5))


def test_oversized_alpha_rejected_by_validation():
    theta = Theta(math.pi / 3)
    with pytest.raises(ValueError):
        build_povm(0, theta, alpha=optimal_alpha(theta) + 1e-3)


# ---------------------------------------------------------------------------
# outcome distributions
# ---------------------------------------------------------------------------


def test_distribution_on_key_states():
    theta = Theta(math.pi / 3)
    povm = build_povm(0, theta)
    p = outcome_distribution(povm, PureState(1, 0))
    assert p[0] == pytest.approx(1.0 - theta.cos, abs=1e-12)
    assert p[1] == pytest.approx(0.0, abs=1e-12)
    assert p[2] == pytest.approx(theta.cos, abs=1e-12)

    p = outcome_distribution(povm, key_basis(1, theta).v0)
    assert p[0] == pytest.approx(0.0, abs=1e-12)
    assert p[1] == pytest.approx(1.0 - theta.cos, abs=1e-12)
    assert p[2] == pytest.approx(theta.cos, abs=1e-12)


def test_distribution_on_middle_state():
    for theta_rad in THETAS:
        theta = Theta(theta_rad)
        p = outcome_distribution(build_povm(1, theta), middle_basis(theta).v0)
        assert p[0] == pytest.approx(0.5, abs=1e-12)
        assert p[1] == pytest.approx(0.5, abs=1e-12)
        assert p[2] == pytest.approx(0.0, abs=1e-12)


def test_distribution_sums_to_one_on_random_states():
    rng = np.random.default_rng(22)
    theta = Theta(1.1)
    povm = build_povm(0, theta)
    for _ in range(200):
        phi = rng.uniform(0, 2 * math.pi)
        p = outcome_distribution(povm, PureState(math.cos(phi), math.sin(phi)))
        assert sum(p) == pytest.approx(1.0, abs=1e-10)
        assert all(x >= 0.0 for x in p)


# ---------------------------------------------------------------------------
# the alpha optimization
# ---------------------------------------------------------------------------


def test_optimal_alpha_closed_form_values():
    assert optimal_alpha(Theta(math.pi / 2)) == pytest.approx(1.0, abs=1e-12)
    assert optimal_alpha(Theta(math.pi / 3)) == pytest.approx(2.0 / 3.0, abs=1e-12)


def test_optimal_alpha_against_grid_search():
    for theta_rad in (math.pi / 6, math.pi / 3, math.pi / 2):
        theta = Theta(theta_rad)
        found = largest_psd_alpha_oracle(theta)
        assert abs(found - optimal_alpha(theta)) <= 1e-4


def test_inconclusive_probability_values():
    assert inconclusive_probability(Theta(math.pi / 2)) == pytest.approx(0.0, abs=1e-12)
    assert inconclusive_probability(Theta(math.pi / 3)) == pytest.approx(0.5, abs=1e-12)
    assert inconclusive_probability(Theta(1e-6)) == pytest.approx(1.0, abs=1e-6)


def test_inconclusive_probability_matches_distribution():
    for theta_rad in THETAS:
        theta = Theta(theta_rad)
        p = outcome_distribution(build_povm(0, theta), PureState(1, 0))
        assert p[2] == pytest.approx(inconclusive_probability(theta), abs=1e-10)


def test_third_element_min_eigenvalue_zero_at_optimum():
    for theta_rad in np.linspace(0.01, math.pi / 2, 50):
        theta = Theta(float(theta_rad))
        for bit in (0, 1):
            e2 = povm_elements(bit, theta, optimal_alpha(theta))[2]
            assert abs(np.linalg.eigvalsh(e2)[0]) <= 1e-10


# ---------------------------------------------------------------------------
# EPR sampling
# ---------------------------------------------------------------------------


def test_epr_same_basis_perfectly_correlated():
    rng = np.random.default_rng(23)
    theta = Theta(math.pi / 3)
    for basis in (key_basis(0, theta), key_basis(1, theta)):
        counts = [0, 0]
        for _ in range(4000):
            b, a = sample_epr(basis, basis, rng)
            assert a == b
            counts[b] += 1
        assert counts[0] / 4000 == pytest.approx(0.5, abs=0.05)


def test_epr_povm_distribution():
    # Bob in the computational basis; conditioned on his outcome 0 the
    # client's POVM outcomes follow (1-cos, 0, cos).
    rng = np.random.default_rng(24)
    theta = Theta(math.pi / 3)
    povm = build_povm(0, theta)
    basis = key_basis(0, theta)
    n = 100_000
    tally = {0: 0, 1: 0, 2: 0}
    bob_zero = 0
    for _ in range(n):
        b, a = sample_epr(basis, povm, rng)
        if b == 0:
            bob_zero += 1
            tally[a] += 1
    assert tally[0] / bob_zero == pytest.approx(1.0 - theta.cos, abs=0.01)
    assert tally[1] == 0
    assert tally[2] / bob_zero == pytest.approx(theta.cos, abs=0.01)


def test_epr_rejects_complex_basis():
    rng = np.random.default_rng(25)
    s = math.sqrt(0.5)
    circular = MeasBasis(PureState(s, s * 1j), PureState(s, -s * 1j))
    with pytest.raises(ValueError):
        sample_epr(circular, key_basis(0, Theta(1.0)), rng)
    with pytest.raises(ValueError):
        sample_epr(key_basis(0, Theta(1.0)), circular, rng)


def test_measure_pure_state_povm_outcomes():
    rng = np.random.default_rng(26)
    theta = Theta(math.pi / 2)
    povm = build_povm(0, theta)
    # orthogonal limit: measurement on |0> is conclusive-0 with certainty
    for _ in range(50):
        assert measure_pure_state(povm, PureState(1, 0), rng) == 0
    assert INCONCLUSIVE == 2
