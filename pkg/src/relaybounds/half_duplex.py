"""Time-division (half-duplex) bounds.

The relay listens for a fraction ``nu`` of the block and transmits for the
rest.  While it listens, the source talks to relay and destination through
the state; while it transmits, source and relay form the same cooperative
MAC as in the full-duplex model, and the destination decodes jointly across
both phases.  ``nu`` is a fixed channel attribute, never optimized here.
"""

from __future__ import annotations

import numpy as np

from . import gaussian
from .errors import DomainError
from .model import BoundPoint, CodingParams, OuterParams, TdChannel
from .optimize import OptimizerConfig, maximize_box

__all__ = ["td_outer_objective", "td_inner_objective", "td_inner", "td_outer"]


def td_outer_terms(td: TdChannel, rho12, rho2s):
    """(broadcast-cut term, MAC-cut term) of the time-division upper bound."""
    nu, nubar = td.nu, 1.0 - td.nu
    rho12 = np.asarray(rho12, dtype=float)
    rho2s = np.asarray(rho2s, dtype=float)
    with np.errstate(invalid="ignore", divide="ignore"):
        resid = 1.0 - rho12 ** 2 - rho2s ** 2
        rx_bc = 0.5 * gaussian._log2p(td.p1_rx * (1.0 / td.n2 + 1.0 / td.n3))
        tx_bc = 0.5 * gaussian._log2p(
            gaussian._div0(td.p1_tx * resid, td.n3 * (1.0 - rho2s ** 2)))
        r1 = nu * rx_bc + np.where(nubar > 0, nubar * tx_bc, 0.0)
        rx_mac = 0.5 * gaussian._log2p(td.p1_rx / (td.n3 + td.q_rx))
        psi = gaussian.outer_sum_term(td.p1_tx, td.p2, td.q_tx, td.n3, rho12, rho2s)
        r2 = np.where(nubar > 0, nubar * psi, 0.0) + nu * rx_mac
    return r1, r2


def td_outer_value(td, rho12, rho2s):
    a, b = td_outer_terms(td, rho12, rho2s)
    return np.minimum(a, b)


def td_outer_objective(td: TdChannel, op: OuterParams) -> gaussian.TermBreakdown:
    """Time-division upper bound at a fixed correlation pair."""
    a, b = td_outer_terms(td, op.rho12, op.rho2s)
    a, b = float(a), float(b)
    if np.isnan(a) or np.isnan(b):
        raise DomainError("time-division upper bound undefined at these parameters")
    return gaussian.TermBreakdown((("broadcast", a), ("coop_sum", b)), min(a, b))


def td_inner_terms(td: TdChannel, theta, rho12, rho2s, alpha):
    """(R1, R2, R3) of the time-division rate-splitting lower bound.

    The relay-transmit phase reuses the full-duplex construction with the
    transmit-phase state variance; the relay-receive phase contributes a
    clean source-relay hop (the relay knows and removes the state) and a
    direct source-destination link through state-plus-noise.

    Degenerate binning layer (theta*P2*(1-rho2s^2) = 0): only alpha = 0 is
    defined, and the terms take their exact degenerate values (residual
    state noise qp is simply not cancelled).
    """
    nu, nubar = td.nu, 1.0 - td.nu
    p1r, p1t, p2, qr, qt, n2, n3 = (td.p1_rx, td.p1_tx, td.p2,
                                    td.q_rx, td.q_tx, td.n2, td.n3)
    theta = np.asarray(theta, dtype=float)
    rho12 = np.asarray(rho12, dtype=float)
    rho2s = np.asarray(rho2s, dtype=float)
    alpha = np.asarray(alpha, dtype=float)

    tp2 = theta * p2
    cp2 = (1.0 - theta) * p2
    with np.errstate(invalid="ignore", divide="ignore"):
        p2p = tp2 * (1.0 - rho2s ** 2)
        qp = (np.sqrt(qt) + rho2s * np.sqrt(tp2)) ** 2
        live = p2p > 0.0
        degenerate_ok = ~live & (alpha == 0.0)

        den_dpc = p2p * qp * (1.0 - alpha) ** 2 + n3 * (p2p + alpha ** 2 * qp)
        phi = np.where(live,
                       p2p * qp * (1.0 - alpha) ** 2
                       / np.where(live, p2p + alpha ** 2 * qp, 1.0),
                       qp)
        direct_p1 = (1.0 - rho12 ** 2) * p1t

        hop = nu * 0.5 * gaussian._log2p(p1r / n2)
        direct = 0.5 * gaussian._log2p(direct_p1 / (n3 + phi))
        r1 = hop + np.where(nubar > 0, nubar * direct, 0.0)

        bin2_live = 0.5 * gaussian._log2r(
            p2p * (p2p + qp + direct_p1 + n3) / np.where(live, den_dpc, 1.0))
        bin2 = np.where(live, bin2_live,
                        np.where(degenerate_ok,
                                 0.5 * gaussian._log2p(direct_p1 / (qp + n3)), np.nan))
        r2 = hop + np.where(nubar > 0, nubar * bin2, 0.0)

        rx_direct = nu * 0.5 * gaussian._log2p(p1r / (n3 + qr))
        mac = 0.5 * gaussian._log2p(
            (p1t + cp2 + 2.0 * rho12 * np.sqrt(cp2 * p1t))
            / (tp2 + qt + 2.0 * rho2s * np.sqrt(tp2 * qt) + n3))
        bin3_live = 0.5 * gaussian._log2r(
            p2p * (p2p + qp + n3) / np.where(live, den_dpc, 1.0))
        bin3 = np.where(live, bin3_live, np.where(degenerate_ok, 0.0, np.nan))
        r3 = rx_direct + np.where(nubar > 0, nubar * (mac + bin3), 0.0)
    return r1, r2, r3


def td_inner_value(td, theta, rho12, rho2s, alpha):
    a, b, c = td_inner_terms(td, theta, rho12, rho2s, alpha)
    return np.minimum(np.minimum(a, b), c)


def td_inner_objective(td: TdChannel, p: CodingParams) -> gaussian.TermBreakdown:
    """Time-division lower bound at fixed coding parameters (p.gamma unused:
    the phase structure already separates relayed and direct messages)."""
    a, b, c = td_inner_terms(td, p.theta, p.rho12, p.rho2s, p.alpha)
    a, b, c = float(a), float(b), float(c)
    if np.isnan(a) or np.isnan(b) or np.isnan(c):
        raise DomainError(
            "time-division lower bound undefined (degenerate binning layer "
            "with a nonzero dirty-paper scale, or log argument <= 0)")
    return gaussian.TermBreakdown((("R1", a), ("R2", b), ("R3", c)), min(a, b, c))


_CORR_BOX = ((0.0, 1.0), (-1.0, 0.0))


def _corr_disc(r12, r2s):
    return r12 ** 2 + r2s ** 2 <= 1.0 + 1e-12


def td_outer(td: TdChannel, cfg: OptimizerConfig | None = None) -> BoundPoint:
    """Maximized time-division upper bound."""
    return maximize_box(lambda r12, r2s: td_outer_value(td, r12, r2s),
                        _CORR_BOX, constraints=(_corr_disc,), cfg=cfg,
                        kind="td_outer", param_names=("rho12", "rho2s"))


def td_inner(td: TdChannel, cfg: OptimizerConfig | None = None) -> BoundPoint:
    """Maximized time-division lower bound.

    As in the full-duplex case, refinement starts include the dirty-paper
    corner with the Costa scale so the degenerate-layer slice is never
    missed by the coarse grid.
    """
    cfg = cfg or OptimizerConfig()
    alo, ahi = cfg.alpha_box
    extra = [(0.0, 0.0, 0.0, 0.0),
             (1.0, 0.0, 0.0, td.p2 / (td.p2 + td.n3))]
    point = None
    for _ in range(4):
        point = maximize_box(
            lambda t, r12, r2s, a: td_inner_value(td, t, r12, r2s, a),
            ((0.0, 1.0), (0.0, 1.0), (-1.0, 0.0), (alo, ahi)),
            cfg=cfg, kind="td_inner",
            param_names=("theta", "rho12", "rho2s", "alpha"),
            extra_starts=extra)
        width = ahi - alo
        a_star = point.argmax["alpha"]
        if min(a_star - alo, ahi - a_star) > 0.01 * width:
            break
        mid = 0.5 * (alo + ahi)
        alo, ahi = mid - width, mid + width
    return point
