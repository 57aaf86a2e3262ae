import math

import numpy as np
import pytest

from relaybounds import (
    GaussianChannel,
    NotDegraded,
    OptimizerConfig,
    inner_df,
    inner_pdf,
    outer,
    outer_degraded,
)
from relaybounds import special_cases as sc


def test_threshold_silent_relay_collapses():
    ch = GaussianChannel(10, 0.0, 10, 1, 100)
    assert sc.obs1_threshold(ch) == pytest.approx(110.0, abs=1e-9)


def test_threshold_no_state_against_dense_grid():
    ch = GaussianChannel(10, 10, 0.0, 1, 100)
    z = np.linspace(-1, 0, 100001)
    oracle = float(sc.relay_noise_threshold_curve(ch, z).max())
    assert sc.obs1_threshold(ch) == pytest.approx(oracle, abs=1e-8)


def test_threshold_pinned_channel_against_dense_grid():
    ch = GaussianChannel(10, 10, 10, 1, 100)
    z = np.linspace(-1, 0, 100001)
    oracle = float(sc.relay_noise_threshold_curve(ch, z).max())
    assert sc.obs1_threshold(ch) == pytest.approx(oracle, abs=1e-8)


def test_capacity_above_threshold():
    base = GaussianChannel(10, 10, 10, 1, 100)
    thr = sc.obs1_threshold(base)
    ch = GaussianChannel(10, 10, 10, 1.01 * thr, 100)
    cap = sc.obs1_capacity(ch)
    assert cap == pytest.approx(0.5 * math.log2(1 + 10 / (1.01 * thr)), abs=1e-12)
    assert abs(inner_df(ch).rate - cap) <= 2e-3
    assert abs(outer_degraded(ch).rate - cap) <= 2e-3


def test_capacity_below_threshold_absent():
    base = GaussianChannel(10, 10, 10, 1, 100)
    thr = sc.obs1_threshold(base)
    assert sc.obs1_capacity(
        GaussianChannel(10, 10, 10, 0.5 * thr, 100)) is None


def test_capacity_zero_source():
    ch = GaussianChannel(0.0, 10, 10, 1, 100)
    assert sc.obs1_capacity(ch) == 0.0


def test_capacity_requires_degraded():
    with pytest.raises(NotDegraded):
        sc.obs1_capacity(GaussianChannel(10, 10, 10, 50, 1))


def test_boundary_check_inactive_in_noisy_relay_regime():
    # Far above the threshold the degraded upper bound maximizes at an
    # interior correlation pair, so the boundary construction is vacuous.
    rep = sc.obs1_boundary_check(GaussianChannel(10, 10, 10, 90, 100))
    assert rep.boundary_active is False
    assert rep.capacity_match is None


def test_boundary_check_active_regime():
    # Very clean relay: the correlation disc saturates (to the stated
    # tolerance; the maximizer's distance from the boundary scales with n2)
    # and the matched DF construction achieves the upper bound.
    rep = sc.obs1_boundary_check(GaussianChannel(10, 10, 10, 0.002, 100))
    assert rep.boundary_active is True
    assert rep.capacity_match is True


def test_boundary_check_silent_relay_runs():
    rep = sc.obs1_boundary_check(GaussianChannel(10, 0.0, 10, 1, 100))
    assert rep.upper >= 0.0


def test_strong_state_degraded_capacity():
    ch = GaussianChannel(10, 10, 10, 1, 1)
    assert sc.extreme_q_infinity_degraded(ch) == \
        pytest.approx(0.5 * math.log2(11), abs=1e-12)
    assert sc.extreme_q_infinity_degraded(GaussianChannel(10, 0, 10, 1, 1)) == 0.0


def test_strong_state_degraded_convergence():
    lim = sc.extreme_q_infinity_degraded(GaussianChannel(10, 10, 1, 1, 1))
    for q in (1e4, 1e6):
        ch = GaussianChannel(10, 10, q, 1, 1)
        assert abs(inner_df(ch).rate - lim) <= 0.02
        assert abs(outer_degraded(ch).rate - lim) <= 0.02


def test_strong_state_general_condition():
    assert sc.extreme_q_infinity_general(GaussianChannel(100, 10, 1, 7, 1)) == \
        pytest.approx(0.5 * math.log2(11), abs=1e-12)
    # P2*N2 > P1*N3 and P2 + N3 > P1: regime unknown
    assert sc.extreme_q_infinity_general(GaussianChannel(4, 10, 1, 9, 1)) is None


def test_deaf_helper_values():
    assert sc.deaf_helper(GaussianChannel(20, 5, 1, 1, 1)) == \
        pytest.approx(0.5 * math.log2(6), abs=1e-12)
    assert sc.deaf_helper(GaussianChannel(7, 7, 1, 1, 1)) is None
    assert "one bit" in sc.deaf_helper_regime(GaussianChannel(7, 7, 1, 1, 1))


def test_deaf_helper_numeric_convergence():
    lim = sc.deaf_helper(GaussianChannel(20, 5, 1, 1, 1))
    ch = GaussianChannel(20, 5, 1e6, 1e6, 1)
    cfg = OptimizerConfig(grid_points_per_dim=17)
    assert abs(inner_pdf(ch, cfg).rate - lim) <= 0.03
    assert abs(outer(ch, cfg).rate - lim) <= 0.03


def test_no_state_matches_classic_relay_capacity():
    # Degraded channel at q = 0: the partial-DF rate equals the classic
    # decode-and-forward capacity, computed by an independent dense grid.
    ch = GaussianChannel(10, 10, 0.0, 1, 4)
    beta = np.linspace(0, 1, 200001)
    classic = float(np.minimum(
        0.5 * np.log2(1 + ch.p1 * (1 - beta ** 2) / ch.n2),
        0.5 * np.log2(1 + (ch.p1 + ch.p2 + 2 * beta * math.sqrt(ch.p1 * ch.p2))
                      / ch.n3)).max())
    assert sc.extreme_q_zero(ch) == pytest.approx(classic, abs=1e-4)


def test_silent_relay_capacity():
    assert sc.extreme_p2_zero(GaussianChannel(10, 0, 10, 1, 1)) == \
        pytest.approx(0.5 * math.log2(1 + 10 / 11), abs=1e-15)
    assert sc.extreme_p2_zero(GaussianChannel(10, 0, 0.0, 1, 1)) == \
        pytest.approx(0.5 * math.log2(11), abs=1e-15)


def test_silent_relay_bounds_meet():
    ch = GaussianChannel(10, 0.0, 10, 1, 1)
    cap = sc.extreme_p2_zero(ch)
    assert abs(inner_pdf(ch).rate - cap) <= 2e-3
    assert abs(outer(ch).rate - cap) <= 2e-3


def test_limit_tolerance_shrinks_with_state_power():
    # The finite-surrogate error must drop when the surrogate grows.
    lim = sc.extreme_q_infinity_degraded(GaussianChannel(10, 10, 1, 1, 1))
    gaps = []
    for q in (1e4, 1e6):
        ch = GaussianChannel(10, 10, q, 1, 1)
        gaps.append(max(abs(inner_df(ch).rate - lim),
                        abs(outer_degraded(ch).rate - lim)))
    assert gaps[1] <= gaps[0] / 2 + 1e-12
