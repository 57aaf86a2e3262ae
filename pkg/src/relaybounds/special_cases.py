"""Closed-form capacity results for regimes where the bounds meet.

Covers the low-SNR-at-relay regime (relay noise above a channel-dependent
threshold makes the interference-free rate achievable), the
infinite-interference limits, the deaf-helper limit, the no-interference
reduction to the classic relay channel, and the silent-relay case.

"Infinite" state or relay noise is always represented by finite surrogates
when bounds are evaluated numerically; the functions here return the exact
limit values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import gaussian, optimize
from .errors import NotDegraded
from .model import GaussianChannel
from .optimize import OptimizerConfig

__all__ = [
    "obs1_threshold",
    "obs1_capacity",
    "obs1_boundary_check",
    "Obs1BoundaryReport",
    "extreme_q_infinity_degraded",
    "extreme_q_infinity_general",
    "deaf_helper",
    "deaf_helper_regime",
    "extreme_q_zero",
    "extreme_p2_zero",
]


_require_degraded = gaussian.require_degraded


def relay_noise_threshold_curve(ch: GaussianChannel, zeta):
    """The quantity whose maximum over zeta in [-1, 0] is the relay-noise
    threshold: above it, capacity is broadcast-limited rather than
    MAC-limited even with the best state-correlated relay signalling."""
    p1, p2, q, n3 = ch.p1, ch.p2, ch.q, ch.n3
    zeta = np.asarray(zeta, dtype=float)
    with np.errstate(invalid="ignore"):
        mac = p2 + q + n3 + 2.0 * zeta * np.sqrt(p2 * q)
        return p1 * n3 * mac / (p1 * n3 + p2 * (1.0 - zeta ** 2) * (p1 + mac))


def obs1_threshold(ch: GaussianChannel, cfg: OptimizerConfig | None = None) -> float:
    """Relay-noise level above which the interference-free rate is capacity."""
    if ch.p1 == 0.0:
        return 0.0
    point = optimize.maximize_box(
        lambda z: relay_noise_threshold_curve(ch, z), ((-1.0, 0.0),),
        cfg=cfg, kind="cutset", param_names=("zeta",))
    return point.rate


def obs1_capacity(ch: GaussianChannel,
                  cfg: OptimizerConfig | None = None) -> float | None:
    """Capacity of a degraded channel in the noisy-relay regime.

    Returns 0.5*log2(1 + P1/N2) when N2 lies at or above the threshold,
    meaning the unknown interference costs nothing; None otherwise.
    """
    _require_degraded(ch)
    if ch.n2 >= obs1_threshold(ch, cfg):
        return 0.5 * math.log2(1.0 + ch.p1 / ch.n2)
    return None


@dataclass(frozen=True)
class Obs1BoundaryReport:
    """Outcome of the correlation-boundary capacity check."""

    boundary_active: bool        # maximizer of the degraded upper bound on rho12^2+rho2s^2 = 1
    upper: float                 # maximized degraded upper bound
    lower: float | None          # DF bound at the matched construction (when active)
    capacity_match: bool | None  # |upper - lower| within tolerance (when active)


def obs1_boundary_check(ch: GaussianChannel, cfg: OptimizerConfig | None = None,
                        activity_tol: float = 1e-4,
                        match_tol: float = 2e-3) -> Obs1BoundaryReport:
    """When the degraded upper bound's maximizer saturates rho12^2 + rho2s^2 = 1,
    the matched DF construction (pooled coordinates equal to the maximizing
    pair, theta = rho2s^2) achieves it.  Returns a report; capacity_match is
    None when the maximizer is interior (check vacuous)."""
    _require_degraded(ch)
    up = optimize.outer_degraded(ch, cfg)
    r12, r2s = up.argmax["rho12"], up.argmax["rho2s"]
    active = r12 ** 2 + r2s ** 2 >= 1.0 - activity_tol
    if not active:
        return Obs1BoundaryReport(False, up.rate, None, None)
    lo = gaussian.inner_df_equiv_objective(ch, r2s ** 2, r12, r2s).value
    return Obs1BoundaryReport(True, up.rate, lo, abs(up.rate - lo) <= match_tol)


def extreme_q_infinity_degraded(ch: GaussianChannel) -> float:
    """Degraded-channel capacity in the infinitely strong interference limit:
    two-hop relaying, min of the two hop rates."""
    return min(0.5 * math.log2(1.0 + ch.p1 / ch.n2),
               0.5 * math.log2(1.0 + ch.p2 / ch.n3))


def extreme_q_infinity_general(ch: GaussianChannel) -> float | None:
    """General-channel capacity in the infinite-interference limit.

    Known exactly when P2*N2 <= P1*N3 or P2 + N3 <= P1, where it equals the
    relay-to-destination rate 0.5*log2(1 + P2/N3); in the second regime the
    maximizer is direct transmission (gamma = 1) with the relay running a
    pure dirty-paper code at scale P2/(P2+N3).  None outside those regimes.
    """
    if ch.p2 * ch.n2 <= ch.p1 * ch.n3 or ch.p2 + ch.n3 <= ch.p1:
        return 0.5 * math.log2(1.0 + ch.p2 / ch.n3)
    return None


def deaf_helper(ch: GaussianChannel) -> float | None:
    """Capacity when the relay cannot hear the source (N2 -> inf) and the
    interference is arbitrarily strong (Q -> inf).

    Exact when N3 <= |P1 - P2|: the weaker of source and relay powers sets
    the rate.  None otherwise; see :func:`deaf_helper_regime` for what is
    known about the gap there.
    """
    if ch.n3 <= abs(ch.p1 - ch.p2):
        return 0.5 * math.log2(1.0 + min(ch.p1, ch.p2) / ch.n3)
    return None


def deaf_helper_regime(ch: GaussianChannel) -> str:
    """Diagnostic for the deaf-helper limit when the bounds do not meet."""
    if ch.n3 <= abs(ch.p1 - ch.p2):
        return "exact: bounds meet at 0.5*log2(1 + min(P1,P2)/N3)"
    parts = []
    if ch.p1 + ch.n3 > ch.p2:
        parts.append("lower bound within one bit of the upper bound (P1 + N3 > P2)")
    if ch.p2 + ch.n3 > ch.p1:
        qualifier = "" if ch.p2 >= 100.0 * ch.n3 else " once P2 >> N3"
        parts.append("gap vanishes as the relay power grows"
                     f" (P2 + N3 > P1{qualifier})")
    return "bounds do not meet; " + "; ".join(parts)


def interference_free_pdf_value(ch: GaussianChannel, gamma, rho12):
    """Rate of partial DF over the interference-free relay channel (Q = 0):
    min of relay-decoding and cooperative terms for the relayed part, plus
    the direct part decoded after subtracting the cooperative signals."""
    p1, p2, n2, n3 = ch.p1, ch.p2, ch.n2, ch.n3
    gamma = np.asarray(gamma, dtype=float)
    rho12 = np.asarray(rho12, dtype=float)
    gp1 = gamma * p1
    cg1 = (1.0 - gamma) * p1
    with np.errstate(invalid="ignore"):
        relay = 0.5 * np.log2(1.0 + cg1 * (1.0 - rho12 ** 2) / (n2 + gp1))
        coop = 0.5 * np.log2(1.0 + (cg1 + p2 + 2.0 * rho12 * np.sqrt(cg1 * p2)) / (n3 + gp1))
        direct = 0.5 * np.log2(1.0 + gp1 / n3)
    return np.minimum(relay, coop) + direct


def extreme_q_zero(ch: GaussianChannel, cfg: OptimizerConfig | None = None) -> float:
    """Maximized partial-DF rate of the interference-free channel; equals the
    classic degraded relay-channel capacity when n3 >= n2."""
    point = optimize.maximize_box(
        lambda g, r: interference_free_pdf_value(ch, g, r),
        ((0.0, 1.0), (0.0, 1.0)), cfg=cfg, kind="inner_pdf",
        param_names=("gamma", "rho12"))
    return point.rate


def extreme_p2_zero(ch: GaussianChannel) -> float:
    """Capacity with a silent relay: direct link through state plus noise."""
    return 0.5 * math.log2(1.0 + ch.p1 / (ch.q + ch.n3))
