"""Tests for the closed-form privacy bounds and the sweep table."""

import csv
import io
import math

import numpy as np
import pytest

from qpqsim.adversary import AttackKind, final_key_guess_bound
from qpqsim.bounds import (
    SWEEP_COLUMNS,
    SecuritySummary,
    SweepRow,
    data_privacy_entropy,
    delta_bound,
    lambda_bound,
    per_round_conclusive,
    per_round_helstrom,
    security_summary,
    sweep_rows_to_csv,
    sweep_theta,
    user_privacy_entropy,
)
from qpqsim.povm import Theta


THETA_GRID = np.linspace(0.05, math.pi / 2, 60)


def test_closed_forms_at_reference_point():
    # Direct textbook evaluation of the formulas, frozen to full precision.
    theta = Theta(math.pi / 3)
    assert lambda_bound(theta, 2) == pytest.approx(0.2000627460940165, abs=1e-12)
    assert delta_bound(theta, 2) == pytest.approx(2.0, abs=1e-12)
    assert data_privacy_entropy(theta, 2, 100) == pytest.approx(
        20.00627460940165, abs=1e-12
    )
    assert user_privacy_entropy(theta, 2, 5) == pytest.approx(10.0, abs=1e-12)
    assert per_round_conclusive(theta) == pytest.approx(0.5, abs=1e-12)
    assert per_round_helstrom(theta) == pytest.approx(
        0.9330127018922193, abs=1e-15
    )


def test_entropies_factor_over_bits_and_queries():
    theta = Theta(0.9)
    for k in (1, 2, 5):
        lam = lambda_bound(theta, k)
        dlt = delta_bound(theta, k)
        assert lam == pytest.approx(k * lambda_bound(theta, 1), abs=1e-12)
        assert dlt == pytest.approx(k * delta_bound(theta, 1), abs=1e-12)
        assert data_privacy_entropy(theta, k, 37) == pytest.approx(37 * lam, abs=1e-9)
        assert user_privacy_entropy(theta, k, 4) == pytest.approx(4 * dlt, abs=1e-9)
    assert user_privacy_entropy(theta, 3, 0) == 0.0


def test_exponents_round_trip_to_guess_bounds():
    # 2^-lambda is the block guessing probability, 2^-delta the block
    # conclusive-learning probability.
    for theta_rad in (0.3, 0.7, math.pi / 4, math.pi / 3, 1.4):
        theta = Theta(theta_rad)
        for k in (1, 2, 3):
            assert 2.0 ** -lambda_bound(theta, k) == pytest.approx(
                final_key_guess_bound(theta, k, AttackKind.ALICE_HELSTROM), abs=1e-12
            )
            assert 2.0 ** -delta_bound(theta, k) == pytest.approx(
                final_key_guess_bound(theta, k, AttackKind.ALICE_USD), abs=1e-12
            )


def test_right_angle_degenerates_to_zero_entropy():
    theta = Theta(math.pi / 2)
    assert lambda_bound(theta, 3) == 0.0
    assert abs(delta_bound(theta, 3)) < 1e-12
    assert abs(data_privacy_entropy(theta, 3, 1000)) < 1e-9
    assert abs(user_privacy_entropy(theta, 3, 1000)) < 1e-9


def test_small_angles_give_strong_user_privacy():
    assert delta_bound(Theta(0.15), 1) == pytest.approx(6.476636748912767, abs=1e-12)
    assert delta_bound(Theta(0.15), 1) > 6.0


def test_bounds_reject_bad_parameters():
    theta = Theta(1.0)
    with pytest.raises(ValueError):
        lambda_bound(theta, 0)
    with pytest.raises(ValueError):
        delta_bound(theta, 0)
    with pytest.raises(ValueError):
        data_privacy_entropy(theta, 1, 0)
    with pytest.raises(ValueError):
        user_privacy_entropy(theta, 1, -1)


def test_monotonicity_across_the_angle_range():
    rows = sweep_theta(THETA_GRID, k=2)
    conclusive = [r.conclusive for r in rows]
    helstrom = [r.helstrom for r in rows]
    lambdas = [r.lambda_ for r in rows]
    deltas = [r.delta for r in rows]
    assert all(a < b for a, b in zip(conclusive, conclusive[1:]))
    assert all(a < b for a, b in zip(helstrom, helstrom[1:]))
    assert all(a > b for a, b in zip(lambdas, lambdas[1:]))
    assert all(a > b for a, b in zip(deltas, deltas[1:]))


def test_guessing_dominates_conclusive_learning_everywhere():
    # The optimal guess succeeds at least as often as an unambiguous
    # decode concludes, so lambda never exceeds delta; they meet only in
    # the degenerate right-angle corner.
    for row in sweep_theta(THETA_GRID, k=3):
        assert row.helstrom >= row.conclusive - 1e-12
        assert row.lambda_ <= row.delta + 1e-12
        if row.theta < 1.5:
            assert row.lambda_ < row.delta


def test_security_summary_is_consistent():
    theta = Theta(math.pi / 3)
    summary = security_summary(theta, k=2, N=100, queries=5)
    assert summary.data_privacy_bits == pytest.approx(
        100 * summary.lambda_exponent, abs=1e-9
    )
    assert summary.user_privacy_bits == pytest.approx(
        5 * summary.delta_exponent, abs=1e-9
    )
    assert summary.conclusive_per_round == pytest.approx(0.5, abs=1e-12)
    with pytest.raises(ValueError, match="lambda"):
        SecuritySummary(
            theta=1.0, k=1, N=1, queries=1,
            conclusive_per_round=0.5, helstrom_per_round=0.9,
            lambda_exponent=2.0, delta_exponent=1.0,
            data_privacy_bits=2.0, user_privacy_bits=1.0,
        )


def test_sweep_csv_has_stable_header_and_round_trips():
    rows = sweep_theta([0.3, 0.9, 1.2], k=2)
    text = sweep_rows_to_csv(rows)
    parsed = list(csv.reader(io.StringIO(text)))
    assert parsed[0] == list(SWEEP_COLUMNS)
    assert len(parsed) == 4
    for row, line in zip(rows, parsed[1:]):
        values = [float(x) for x in line]
        assert values == [row.theta, row.conclusive, row.helstrom, row.lambda_, row.delta]


def test_sweep_accepts_theta_objects_and_floats():
    a = sweep_theta([Theta(0.5)], k=1)[0]
    b = sweep_theta([0.5], k=1)[0]
    assert a == b
    assert isinstance(a, SweepRow)
