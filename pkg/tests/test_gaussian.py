import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from relaybounds import (
    CodingParams,
    ConstraintViolated,
    DomainError,
    GaussianChannel,
    NotDegraded,
    OuterParams,
    alpha_opt,
    cutset_objective,
    inner_df_equiv_objective,
    inner_df_objective,
    inner_pdf_objective,
    outer_degraded_equiv_objective,
    outer_degraded_objective,
    outer_objective,
    trivial_inner_objective,
)
from relaybounds import gaussian

CH = GaussianChannel(10.0, 10.0, 10.0, 1.0, 1.0)


# ---------------------------------------------------------------------------
# full decode-and-forward
# ---------------------------------------------------------------------------

def test_inner_df_pinned_point():
    tb = inner_df_objective(CH, CodingParams(theta=1.0))
    assert tb.value == pytest.approx(0.5 * math.log2(11.0), abs=1e-12)
    assert tb["relay_decode"] == pytest.approx(0.5 * math.log2(11.0), abs=1e-12)
    expected_sum = 0.5 * math.log2(1 + 10 / 21) + 0.5 * math.log2(11.0)
    assert tb["coop_sum"] == pytest.approx(expected_sum, abs=1e-12)


def test_inner_df_zero_source_power():
    ch = GaussianChannel(0.0, 10.0, 10.0, 1.0, 1.0)
    tb = inner_df_objective(ch, CodingParams(theta=1.0))
    assert tb.value == 0.0


def test_inner_df_no_state_matches_classic_df_term():
    # Q = 0, theta = 0 reduces to the classic DF terms at zero coherence.
    ch = GaussianChannel(10.0, 10.0, 0.0, 1.0, 1.0)
    tb = inner_df_objective(ch, CodingParams())
    beta = 0.0
    classic = min(0.5 * math.log2(1 + 10 * (1 - beta ** 2) / 1),
                  0.5 * math.log2(1 + (10 + 10 + 2 * beta * 10) / 1))
    assert tb.value == pytest.approx(min(classic, 0.5 * math.log2(11.0)), abs=1e-12)


def test_inner_df_theta_zero_ignores_rho2s():
    vals = {inner_df_objective(CH, CodingParams(theta=0.0, rho12=0.4, rho2s=r)).value
            for r in (-1.0, -0.5, 0.0)}
    assert len(vals) == 1


def test_value_is_min_of_terms():
    for p in (CodingParams(theta=0.3, rho12=0.5, rho2s=-0.4),
              CodingParams(theta=1.0, rho12=0.0, rho2s=-1.0)):
        tb = inner_df_objective(CH, p)
        assert tb.value == min(v for _, v in tb.terms)


# ---------------------------------------------------------------------------
# pooled-coordinate (equivalent) forms
# ---------------------------------------------------------------------------

@settings(max_examples=200)
@given(st.floats(0.0, 0.999), st.floats(0.0, 1.0), st.floats(-1.0, 0.0))
def test_df_equiv_substitution(theta, rho12, rho2s):
    # Exact identity in exact arithmetic; the pooled form cancels
    # catastrophically within ~1e-6 of the collapse point theta = 1, so the
    # tight tolerance applies away from it (see the edge test below).
    direct = inner_df_objective(CH, CodingParams(theta=theta, rho12=rho12,
                                                 rho2s=rho2s)).value
    pooled = inner_df_equiv_objective(
        CH, theta, rho12 * math.sqrt(1 - theta), rho2s * math.sqrt(theta)).value
    assert abs(direct - pooled) < 1e-12


def test_df_equiv_substitution_near_collapse():
    # Cancellation in the pooled first term grows like eps/(1 - theta); at
    # 1 - theta = 1e-9 the identity still holds to ~1e-6.
    rng = np.random.default_rng(4)
    for _ in range(300):
        theta = 1.0 - 10.0 ** rng.uniform(-9, -3)
        rho12 = rng.uniform(0, 1)
        rho2s = rng.uniform(-1, 0)
        direct = inner_df_objective(CH, CodingParams(theta=theta, rho12=rho12,
                                                     rho2s=rho2s)).value
        pooled = inner_df_equiv_objective(
            CH, theta, rho12 * math.sqrt(1 - theta), rho2s * math.sqrt(theta)).value
        assert abs(direct - pooled) < 1e-6


def test_df_equiv_identity_at_theta_zero():
    assert inner_df_equiv_objective(CH, 0.0, 0.0, 0.0).value == pytest.approx(
        inner_df_objective(CH, CodingParams()).value, abs=1e-12)


def test_df_equiv_theta_one_pinned():
    # The pooled coordinate collapses at theta = 1; the zero-coherence line
    # keeps its exact value P1/N2 in the first term.
    tb = inner_df_equiv_objective(CH, 1.0, 0.0, 0.0)
    expected = min(0.5 * math.log2(11.0),
                   0.5 * math.log2(1 + 10 / 21) + 0.5 * math.log2(11.0))
    assert tb.value == pytest.approx(expected, abs=1e-12)


def test_df_equiv_constraint():
    with pytest.raises(ConstraintViolated):
        inner_df_equiv_objective(CH, 0.5, 0.9, -0.9)


# ---------------------------------------------------------------------------
# dirty-paper scale
# ---------------------------------------------------------------------------

def test_alpha_opt_costa_at_zero_state_correlation():
    assert alpha_opt(CH, 0.5, 0.0) == pytest.approx(5.0 / 6.0, abs=1e-15)
    assert alpha_opt(CH, 0.0, 0.0) == 0.0


def test_alpha_opt_pinned_value():
    assert alpha_opt(GaussianChannel(10, 10, 10, 1, 1), 1.0, -0.5) == \
        pytest.approx(8.0 / 8.5, abs=1e-15)


def test_alpha_opt_no_state_requires_zero_correlation():
    ch = GaussianChannel(10, 10, 0.0, 1, 1)
    assert alpha_opt(ch, 0.5, 0.0) == pytest.approx(5.0 / 6.0)
    with pytest.raises(DomainError):
        alpha_opt(ch, 0.5, -0.5)


# ---------------------------------------------------------------------------
# rate splitting
# ---------------------------------------------------------------------------

def test_inner_pdf_pinned_point():
    p = CodingParams(gamma=1.0, theta=1.0, rho12=0.0, rho2s=0.0, alpha=10 / 11)
    tb = inner_pdf_objective(CH, p)
    phi = 10 * 10 * (1 / 11) ** 2 / (10 + (10 / 11) ** 2 * 10)
    assert tb["T1"] == pytest.approx(0.5 * math.log2(1 + 10 / (1 + phi)), abs=1e-12)


def test_inner_pdf_zero_power():
    ch = GaussianChannel(0.0, 10.0, 10.0, 1.0, 1.0)
    assert inner_pdf_objective(ch, CodingParams()).value == 0.0


@pytest.mark.parametrize("theta,rho12,rho2s", [
    (0.0, 0.0, 0.0), (0.25, 0.3, -0.2), (0.5, 0.5, -0.5),
    (0.75, 0.9, -0.9), (1.0, 0.0, -1.0), (1.0, 1.0, 0.0),
])
def test_pdf_reduces_to_df_at_gamma_zero(theta, rho12, rho2s):
    # With the relayed-part dirty-paper scale at its optimum, gamma = 0
    # reproduces full DF exactly.
    p2p = theta * CH.p2 * (1 - rho2s ** 2)
    alpha_c = p2p / (p2p + CH.n3)
    df = inner_df_objective(CH, CodingParams(theta=theta, rho12=rho12,
                                             rho2s=rho2s)).value
    pdf = inner_pdf_objective(CH, CodingParams(0.0, theta, rho12, rho2s,
                                               alpha_c)).value
    assert pdf >= df - 1e-9


def test_pdf_gamma_zero_grid_dominates_df():
    rng = np.random.default_rng(0)
    for _ in range(1000):
        theta, rho12 = rng.uniform(0, 1, 2)
        rho2s = rng.uniform(-1, 0)
        p2p = theta * CH.p2 * (1 - rho2s ** 2)
        alpha_c = p2p / (p2p + CH.n3)
        df = gaussian.df_value(CH, theta, rho12, rho2s)
        pdf = gaussian.pdf_value(CH, 0.0, theta, rho12, rho2s, alpha_c)
        assert pdf >= df - 1e-9


def test_pdf_degenerate_layer_rules():
    # theta = 0 makes the binning layer empty: only alpha = 0 is defined.
    with pytest.raises(DomainError):
        inner_pdf_objective(CH, CodingParams(gamma=0.5, theta=0.0, alpha=0.5))
    tb = inner_pdf_objective(CH, CodingParams(gamma=0.5, theta=0.0, alpha=0.0))
    # T2 equals T1 on the degenerate slice (nothing to bin against).
    assert tb["T2"] == pytest.approx(tb["T1"], abs=1e-12)


def test_pdf_degenerate_layer_continuity():
    # Exact theta = 0 evaluation must match the theta -> 0 limit.
    p_eps = CodingParams(gamma=0.5, theta=1e-12, rho12=0.3, rho2s=0.0, alpha=0.0)
    p_zero = CodingParams(gamma=0.5, theta=0.0, rho12=0.3, rho2s=0.0, alpha=0.0)
    v_eps = inner_pdf_objective(CH, p_eps).value
    v_zero = inner_pdf_objective(CH, p_zero).value
    assert v_zero == pytest.approx(v_eps, abs=1e-9)


# ---------------------------------------------------------------------------
# upper bounds
# ---------------------------------------------------------------------------

def test_outer_pinned_point():
    ch = GaussianChannel(1, 1, 1, 1, 1)
    tb = outer_objective(ch, OuterParams(0.0, 0.0))
    assert tb.value == pytest.approx(0.5 * math.log2(4 / 3) + 0.5, abs=1e-12)


def test_outer_zero_source():
    ch = GaussianChannel(0.0, 1, 1, 1, 1)
    assert outer_objective(ch, OuterParams(0.0, 0.0)).value == 0.0


def test_outer_full_state_correlation_convention():
    # |rho2s| = 1 forces rho12 = 0; the coherence ratio is 0/0 = 0 there.
    tb = outer_objective(CH, OuterParams(0.0, -1.0))
    assert tb["broadcast"] == pytest.approx(
        0.5 * math.log2(1 + 10 * (1 / 1 + 1 / 1)), abs=1e-12)


def test_outer_degraded_pinned_point():
    ch = GaussianChannel(10, 10, 10, 1, 100)
    tb = outer_degraded_objective(ch, OuterParams(0.0, 0.0))
    assert tb["broadcast"] == pytest.approx(0.5 * math.log2(11.0), abs=1e-12)

    r12, r2s = 0.6, -0.6
    tb = outer_degraded_objective(ch, OuterParams(r12, r2s))
    resid = 1 - r12 ** 2 - r2s ** 2
    term_a = 0.5 * math.log2(1 + 10 * resid / (1 * (1 - r2s ** 2)))
    term_b = (0.5 * math.log2(1 + (math.sqrt(10) + r12 * math.sqrt(10)) ** 2
                              / (10 * resid + (math.sqrt(10) + r2s * math.sqrt(10)) ** 2 + 100))
              + 0.5 * math.log2(1 + 10 * resid / 100))
    assert tb.value == pytest.approx(min(term_a, term_b), abs=1e-12)


def test_outer_degraded_below_outer_randomized():
    ch = GaussianChannel(10, 10, 10, 1, 100)
    rng = np.random.default_rng(1)
    count = 0
    while count < 10000:
        r12 = rng.uniform(0, 1)
        r2s = rng.uniform(-1, 0)
        if r12 ** 2 + r2s ** 2 > 1.0:
            continue
        count += 1
        lo = gaussian.outer_degraded_value(ch, r12, r2s)
        hi = gaussian.outer_value(ch, r12, r2s)
        assert lo <= hi + 1e-12


def test_outer_degraded_requires_degradedness():
    with pytest.raises(NotDegraded):
        outer_degraded_objective(GaussianChannel(10, 10, 10, 50, 1),
                                 OuterParams(0.0, 0.0))


@settings(max_examples=200)
@given(st.floats(0.0, 1.0), st.floats(-1.0, 0.0, exclude_min=True))
def test_outer_degraded_equiv_substitution(kappa, rho):
    ch = GaussianChannel(10, 10, 10, 1, 100)
    pooled = outer_degraded_equiv_objective(ch, kappa, rho).value
    r12 = kappa * math.sqrt(1 - rho ** 2)
    direct = outer_degraded_objective(ch, OuterParams(r12, rho)).value
    assert abs(pooled - direct) < 1e-12


def test_outer_degraded_equiv_pinned_points():
    ch = GaussianChannel(10, 10, 10, 1, 100)
    tb = outer_degraded_equiv_objective(ch, 0.0, 0.0)
    expected = min(0.5 * math.log2(1 + 10 / 1),
                   0.5 * math.log2(1 + 10 / 100)
                   + 0.5 * math.log2(1 + 10 / (10 + 10 + 100)))
    assert tb.value == pytest.approx(expected, abs=1e-12)
    assert outer_degraded_equiv_objective(ch, 1.0, 0.0).value == 0.0


# ---------------------------------------------------------------------------
# cut-set and state-as-noise references
# ---------------------------------------------------------------------------

def test_cutset_pinned_points():
    ch = GaussianChannel(10, 10, 10, 1, 100)
    tb = cutset_objective(ch, 0.0, degraded=True)
    assert tb.value == pytest.approx(
        min(0.5 * math.log2(11.0), 0.5 * math.log2(1 + 20 / 100)), abs=1e-12)
    ch1 = GaussianChannel(1, 1, 1, 1, 1)
    assert cutset_objective(ch1, 1.0).value == 0.0


def test_trivial_inner_pinned_point():
    tb = trivial_inner_objective(CH, 0.0)
    assert tb.value == pytest.approx(
        min(0.5 * math.log2(1 + 10 / 11), 0.5 * math.log2(1 + 20 / 11)), abs=1e-12)


def test_trivial_inner_decreases_with_state_power():
    vals = [trivial_inner_objective(GaussianChannel(10, 10, q, 1, 1), 0.3).value
            for q in (10.0, 1e3, 1e6)]
    assert vals[0] > vals[1] > vals[2]
    assert vals[2] < 1e-4


def test_trivial_inner_no_state_is_classic_df():
    ch = GaussianChannel(10, 10, 0.0, 1, 4)
    beta = 0.4
    tb = trivial_inner_objective(ch, beta)
    classic = min(0.5 * math.log2(1 + 10 * (1 - beta ** 2) / 1),
                  0.5 * math.log2(1 + (20 + 2 * beta * 10) / 4))
    assert tb.value == pytest.approx(classic, abs=1e-12)


# ---------------------------------------------------------------------------
# interior continuity probes
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("fn,box", [
    (lambda x: gaussian.df_value(CH, *x), [(0, 1), (0, 1), (-1, 0)]),
    (lambda x: gaussian.pdf_value(CH, *x), [(0, 1), (0, 1), (0, 1), (-1, 0), (-2, 3)]),
    (lambda x: gaussian.outer_value(CH, *x), [(0, 0.7), (-0.7, 0)]),
    (lambda x: gaussian.cutset_value(CH, *x), [(0, 1)]),
])
def test_objective_continuity_probes(fn, box):
    rng = np.random.default_rng(8)
    step = 1e-7
    for _ in range(100):
        x = np.array([rng.uniform(lo + 0.05 * (hi - lo), hi - 0.05 * (hi - lo))
                      for lo, hi in box])
        f0 = float(fn(x))
        for d in range(len(box)):
            x2 = x.copy()
            x2[d] += step
            jump = abs(float(fn(x2)) - f0) / (1.0 + abs(f0))
            assert jump < 1e-6
