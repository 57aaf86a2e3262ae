"""Closed-form full-duplex Gaussian bound objectives.

Every objective here is a pure function of (channel, parameters) returning the
minimum of a small list of rate terms in bits per channel use.  The private
``*_terms`` kernels are numpy-generic: parameters may be scalars or
broadcastable arrays, and NaN marks parameter points where a logarithm is
undefined.  The public ``*_objective`` wrappers validate their inputs, return a
:class:`TermBreakdown` and raise :class:`DomainError` on NaN.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConstraintViolated, DomainError, NotDegraded
from .model import CodingParams, GaussianChannel, OuterParams

__all__ = [
    "TermBreakdown",
    "alpha_opt",
    "inner_df_objective",
    "inner_df_equiv_objective",
    "inner_pdf_objective",
    "outer_objective",
    "outer_degraded_objective",
    "outer_degraded_equiv_objective",
    "cutset_objective",
    "trivial_inner_objective",
]


@dataclass(frozen=True)
class TermBreakdown:
    """Labelled components of a min{...} bound objective plus their minimum."""

    terms: tuple
    value: float

    def __getitem__(self, label: str) -> float:
        for name, v in self.terms:
            if name == label:
                return v
        raise KeyError(label)


#: Degraded-only bounds accept channels with n2 up to 2% above n3.  The
#: capacity-regime threshold on the relay noise can equal n3 itself, and
#: channels probing "just above threshold" then land marginally past the
#: degradedness boundary; the formulas remain valid and continuous there.
DEGRADED_SLACK = 0.02


def require_degraded(ch: GaussianChannel, slack: float = DEGRADED_SLACK) -> None:
    if ch.n2 > ch.n3 * (1.0 + slack):
        raise NotDegraded(f"channel has n3 = {ch.n3} < n2 = {ch.n2}")


def _log2p(x):
    """log2(1 + x); NaN where 1 + x <= 0."""
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.log2(1.0 + x)


def _log2r(x):
    """log2(x); NaN where x <= 0."""
    with np.errstate(invalid="ignore", divide="ignore"):
        out = np.log2(x)
    return np.where(np.asarray(x) > 0, out, np.nan)


def _div0(num, den):
    """num / den with the 0/0 = 0 convention; NaN for x/0 with x != 0."""
    num = np.asarray(num, dtype=float)
    den = np.asarray(den, dtype=float)
    with np.errstate(invalid="ignore", divide="ignore"):
        out = num / den
    return np.where(den != 0.0, out, np.where(num == 0.0, 0.0, np.nan))


# ---------------------------------------------------------------------------
# full decode-and-forward lower bound
# ---------------------------------------------------------------------------

def df_terms(ch: GaussianChannel, theta, rho12, rho2s):
    """(relay-decoding term, cooperative-sum term) of the DF lower bound.

    The relay splits its power: a fraction 1-theta carries the cooperative
    codeword coherent with the source (coherence rho12) and a fraction theta
    carries the dirty-paper layer correlated with the state (correlation
    rho2s <= 0).  The dirty-paper scale is implicitly optimal, so only the
    residual state term theta*P2*(1-rho2s^2) survives in the second term.
    """
    p1, p2, q, n2, n3 = ch.p1, ch.p2, ch.q, ch.n2, ch.n3
    theta = np.asarray(theta, dtype=float)
    rho12 = np.asarray(rho12, dtype=float)
    rho2s = np.asarray(rho2s, dtype=float)
    tp2 = theta * p2
    cp2 = (1.0 - theta) * p2
    with np.errstate(invalid="ignore"):
        term_relay = 0.5 * _log2p(p1 * (1.0 - rho12 ** 2) / n2)
        den = tp2 + q + n3 + 2.0 * rho2s * np.sqrt(tp2 * q)
        term_sum = (0.5 * _log2p((p1 + cp2 + 2.0 * rho12 * np.sqrt(cp2 * p1)) / den)
                    + 0.5 * _log2p(tp2 * (1.0 - rho2s ** 2) / n3))
    return term_relay, term_sum


def df_value(ch, theta, rho12, rho2s):
    a, b = df_terms(ch, theta, rho12, rho2s)
    return np.minimum(a, b)


def inner_df_objective(ch: GaussianChannel, p: CodingParams) -> TermBreakdown:
    """Full decode-and-forward achievable rate at fixed coding parameters.

    ``p.gamma`` and ``p.alpha`` are ignored: there is no rate splitting and
    the dirty-paper scale is set to its optimum internally.
    """
    a, b = df_terms(ch, p.theta, p.rho12, p.rho2s)
    a, b = float(a), float(b)
    if np.isnan(a) or np.isnan(b):
        raise DomainError("decode-and-forward objective undefined at these parameters")
    return TermBreakdown((("relay_decode", a), ("coop_sum", b)), min(a, b))


def df_equiv_terms(ch: GaussianChannel, theta, rho12_eq, rho2s_eq):
    """DF bound in pooled coordinates rho12_eq = rho12*sqrt(1-theta),
    rho2s_eq = rho2s*sqrt(theta).

    At theta = 1 with rho12_eq = 0 the first term degenerates to 0/0; the
    exact value along the rho12_eq = 0 line is P1/N2 for every theta < 1, so
    that ratio is used there (any rho12_eq != 0 at theta = 1 is undefined).
    """
    p1, p2, q, n2, n3 = ch.p1, ch.p2, ch.q, ch.n2, ch.n3
    theta = np.asarray(theta, dtype=float)
    r12 = np.asarray(rho12_eq, dtype=float)
    r2s = np.asarray(rho2s_eq, dtype=float)
    with np.errstate(invalid="ignore", divide="ignore"):
        ratio = p1 * (1.0 - r12 ** 2 - theta) / (n2 * (1.0 - theta))
    ratio = np.where(theta < 1.0, ratio, np.where(r12 == 0.0, p1 / n2, np.nan))
    term_relay = 0.5 * _log2p(ratio)
    coop = 1.0 - theta - r12 ** 2
    resid = theta - r2s ** 2
    with np.errstate(invalid="ignore"):
        num = (np.sqrt(p1) + r12 * np.sqrt(p2)) ** 2 + coop * p2
        den = p2 * resid + (np.sqrt(q) + r2s * np.sqrt(p2)) ** 2 + n3
        term_sum = 0.5 * _log2p(num / den) + 0.5 * _log2p(p2 * resid / n3)
    return term_relay, term_sum


def inner_df_equiv_objective(ch: GaussianChannel, theta: float,
                             rho12_eq: float, rho2s_eq: float) -> TermBreakdown:
    """Recast DF bound; equals :func:`inner_df_objective` under the pooled
    coordinate substitution."""
    if not (0.0 <= theta <= 1.0 and 0.0 <= rho12_eq <= 1.0 and -1.0 <= rho2s_eq <= 0.0):
        raise ConstraintViolated("parameters outside their boxes")
    if rho12_eq ** 2 + rho2s_eq ** 2 > 1.0 + 1e-12:
        raise ConstraintViolated("rho12_eq^2 + rho2s_eq^2 must not exceed 1")
    a, b = df_equiv_terms(ch, theta, rho12_eq, rho2s_eq)
    a, b = float(a), float(b)
    if np.isnan(a) or np.isnan(b):
        raise DomainError("recast DF objective undefined at these parameters")
    return TermBreakdown((("relay_decode", a), ("coop_sum", b)), min(a, b))


# ---------------------------------------------------------------------------
# partial decode-and-forward lower bound
# ---------------------------------------------------------------------------

def alpha_opt(ch: GaussianChannel, theta: float, rho2s: float) -> float:
    """Optimal dirty-paper scale of the full-DF construction.

    For rho2s = 0 this is the classic Costa coefficient
    theta*P2 / (theta*P2 + N3).
    """
    tp2 = theta * ch.p2
    resid = tp2 * (1.0 - rho2s ** 2)
    if ch.q == 0.0:
        if rho2s != 0.0:
            raise DomainError("state correlation requires a nonzero state variance")
        cross = 0.0
    else:
        cross = rho2s * np.sqrt(tp2 / ch.q)
    den = resid + ch.n3
    if den <= 0:
        raise DomainError("degenerate dirty-paper denominator")
    return float((resid - cross * ch.n3) / den)


def pdf_terms(ch: GaussianChannel, gamma, theta, rho12, rho2s, alpha):
    """(T1, T2, T3) of the rate-splitting lower bound.

    gamma*P1 goes to the direct message, (1-gamma)*P1 to the relayed one.
    alpha is the free dirty-paper scale.  Notation:

      p2p = theta*P2*(1-rho2s^2)             residual state-layer power,
      qp  = (sqrt(Q) + rho2s*sqrt(theta*P2))^2   effective state power,
      phi = p2p*qp*(1-alpha)^2 / (p2p + alpha^2*qp)   uncancelled state noise.

    Degenerate state layer (p2p = 0): the binning auxiliary carries nothing,
    so points with alpha != 0 are undefined; at alpha = 0 each term takes its
    exact degenerate value (phi = qp, T2's binning log reduces to the direct
    link through state-plus-noise, T3's binning log vanishes).
    """
    p1, p2, q, n2, n3 = ch.p1, ch.p2, ch.q, ch.n2, ch.n3
    gamma = np.asarray(gamma, dtype=float)
    theta = np.asarray(theta, dtype=float)
    rho12 = np.asarray(rho12, dtype=float)
    rho2s = np.asarray(rho2s, dtype=float)
    alpha = np.asarray(alpha, dtype=float)

    gp1 = gamma * p1
    cg = 1.0 - gamma
    tp2 = theta * p2
    cp2 = (1.0 - theta) * p2
    with np.errstate(invalid="ignore", divide="ignore"):
        p2p = tp2 * (1.0 - rho2s ** 2)
        qp = (np.sqrt(q) + rho2s * np.sqrt(tp2)) ** 2
        live = p2p > 0.0
        degenerate_ok = ~live & (alpha == 0.0)

        den_dpc = p2p * qp * (1.0 - alpha) ** 2 + n3 * (p2p + alpha ** 2 * qp)
        phi_live = p2p * qp * (1.0 - alpha) ** 2 / np.where(live, p2p + alpha ** 2 * qp, 1.0)
        phi = np.where(live, phi_live, qp)

        first_log = 0.5 * _log2p(cg * p1 * (1.0 - rho12 ** 2) / (n2 + gp1))
        direct_log = 0.5 * _log2p(gp1 / (n3 + phi))
        t1 = first_log + direct_log

        t2_bin_live = 0.5 * _log2r(p2p * (p2p + qp + gp1 + n3) / np.where(live, den_dpc, 1.0))
        t2_bin = np.where(live, t2_bin_live,
                          np.where(degenerate_ok, 0.5 * _log2p(gp1 / (qp + n3)), np.nan))
        t2 = first_log + t2_bin

        t3_bin_live = 0.5 * _log2r(p2p * (p2p + qp + n3) / np.where(live, den_dpc, 1.0))
        t3_bin = np.where(live, t3_bin_live, np.where(degenerate_ok, 0.0, np.nan))
        den_mac = tp2 + q + n3 + 2.0 * rho2s * np.sqrt(tp2 * q)
        t3 = (0.5 * _log2p((p1 + cp2 + 2.0 * rho12 * np.sqrt(cp2 * cg * p1)) / den_mac)
              + t3_bin)
    return t1, t2, t3


def pdf_value(ch, gamma, theta, rho12, rho2s, alpha):
    t1, t2, t3 = pdf_terms(ch, gamma, theta, rho12, rho2s, alpha)
    return np.minimum(np.minimum(t1, t2), t3)


def inner_pdf_objective(ch: GaussianChannel, p: CodingParams) -> TermBreakdown:
    """Partial decode-and-forward achievable rate at fixed coding parameters."""
    t1, t2, t3 = pdf_terms(ch, p.gamma, p.theta, p.rho12, p.rho2s, p.alpha)
    t1, t2, t3 = float(t1), float(t2), float(t3)
    if np.isnan(t1) or np.isnan(t2) or np.isnan(t3):
        raise DomainError(
            "rate-splitting objective undefined (degenerate binning layer "
            "with a nonzero dirty-paper scale, or log argument <= 0)")
    return TermBreakdown((("T1", t1), ("T2", t2), ("T3", t3)), min(t1, t2, t3))


# ---------------------------------------------------------------------------
# upper bounds
# ---------------------------------------------------------------------------

def outer_sum_term(p1, p2, q, n3, rho12, rho2s):
    """Cooperative-sum term shared by all upper bounds (and the half-duplex
    transmit phase): coherent MAC gain minus the state-ignorance penalty."""
    with np.errstate(invalid="ignore"):
        resid = 1.0 - rho12 ** 2 - rho2s ** 2
        den = p2 * resid + (np.sqrt(q) + rho2s * np.sqrt(p2)) ** 2 + n3
        return (0.5 * _log2p((np.sqrt(p1) + rho12 * np.sqrt(p2)) ** 2 / den)
                + 0.5 * _log2p(p2 * resid / n3))


def outer_terms(ch: GaussianChannel, rho12, rho2s):
    """(broadcast term, cooperative-sum term) of the general upper bound."""
    p1, n2, n3 = ch.p1, ch.n2, ch.n3
    rho12 = np.asarray(rho12, dtype=float)
    rho2s = np.asarray(rho2s, dtype=float)
    frac = _div0(rho12 ** 2, 1.0 - rho2s ** 2)
    term_bc = 0.5 * _log2p(p1 * (1.0 - frac) * (1.0 / n2 + 1.0 / n3))
    term_sum = outer_sum_term(p1, ch.p2, ch.q, n3, rho12, rho2s)
    return term_bc, term_sum


def outer_value(ch, rho12, rho2s):
    a, b = outer_terms(ch, rho12, rho2s)
    return np.minimum(a, b)


def outer_objective(ch: GaussianChannel, op: OuterParams) -> TermBreakdown:
    """General upper bound at a fixed correlation pair."""
    a, b = outer_terms(ch, op.rho12, op.rho2s)
    a, b = float(a), float(b)
    if np.isnan(a) or np.isnan(b):
        raise DomainError("upper-bound objective undefined at these parameters")
    return TermBreakdown((("broadcast", a), ("coop_sum", b)), min(a, b))


def outer_degraded_terms(ch: GaussianChannel, rho12, rho2s):
    """Degraded-channel variant: the broadcast term sees only the relay noise."""
    rho12 = np.asarray(rho12, dtype=float)
    rho2s = np.asarray(rho2s, dtype=float)
    frac = _div0(ch.p1 * (1.0 - rho12 ** 2 - rho2s ** 2), ch.n2 * (1.0 - rho2s ** 2))
    term_bc = 0.5 * _log2p(frac)
    term_sum = outer_sum_term(ch.p1, ch.p2, ch.q, ch.n3, rho12, rho2s)
    return term_bc, term_sum


def outer_degraded_value(ch, rho12, rho2s):
    a, b = outer_degraded_terms(ch, rho12, rho2s)
    return np.minimum(a, b)


def outer_degraded_objective(ch: GaussianChannel, op: OuterParams) -> TermBreakdown:
    require_degraded(ch)
    a, b = outer_degraded_terms(ch, op.rho12, op.rho2s)
    a, b = float(a), float(b)
    if np.isnan(a) or np.isnan(b):
        raise DomainError("degraded upper-bound objective undefined")
    return TermBreakdown((("broadcast", a), ("coop_sum", b)), min(a, b))


def outer_degraded_equiv_terms(ch: GaussianChannel, kappa, rho):
    """Degraded upper bound in (kappa, rho) coordinates,
    kappa = rho12 / sqrt(1 - rho2s^2), rho = rho2s."""
    p1, p2, q, n2, n3 = ch.p1, ch.p2, ch.q, ch.n2, ch.n3
    kappa = np.asarray(kappa, dtype=float)
    rho = np.asarray(rho, dtype=float)
    term_bc = 0.5 * _log2p(p1 * (1.0 - kappa ** 2) / n2)
    with np.errstate(invalid="ignore"):
        k2 = kappa ** 2 * (1.0 - rho ** 2)
        num = p1 + k2 * p2 + 2.0 * kappa * np.sqrt((1.0 - rho ** 2) * p1 * p2)
        den = p2 * (1.0 - k2) + q + 2.0 * rho * np.sqrt(p2 * q) + n3
        term_sum = (0.5 * _log2p(p2 * (1.0 - k2 - rho ** 2) / n3)
                    + 0.5 * _log2p(num / den))
    return term_bc, term_sum


def outer_degraded_equiv_value(ch, kappa, rho):
    a, b = outer_degraded_equiv_terms(ch, kappa, rho)
    return np.minimum(a, b)


def outer_degraded_equiv_objective(ch: GaussianChannel, kappa: float,
                                   rho: float) -> TermBreakdown:
    if not (0.0 <= kappa <= 1.0 and -1.0 <= rho <= 0.0):
        raise ConstraintViolated("kappa in [0,1] and rho in [-1,0] required")
    a, b = outer_degraded_equiv_terms(ch, kappa, rho)
    a, b = float(a), float(b)
    if np.isnan(a) or np.isnan(b):
        raise DomainError("recast degraded upper bound undefined")
    return TermBreakdown((("broadcast", a), ("coop_sum", b)), min(a, b))


# ---------------------------------------------------------------------------
# reference bounds: cut-set (state known everywhere) and state-as-noise DF
# ---------------------------------------------------------------------------

def cutset_terms(ch: GaussianChannel, beta, degraded: bool = False):
    """Classic relay cut-set terms; the state is removable when known
    everywhere, so it does not appear.  beta is the source-relay coherence."""
    p1, p2, n2, n3 = ch.p1, ch.p2, ch.n2, ch.n3
    beta = np.asarray(beta, dtype=float)
    with np.errstate(invalid="ignore"):
        bc_snr = p1 * (1.0 - beta ** 2) / n2 if degraded \
            else p1 * (1.0 - beta ** 2) * (1.0 / n2 + 1.0 / n3)
        term_bc = 0.5 * _log2p(bc_snr)
        term_sum = 0.5 * _log2p((p1 + p2 + 2.0 * beta * np.sqrt(p1 * p2)) / n3)
    return term_bc, term_sum


def cutset_value(ch, beta, degraded=False):
    a, b = cutset_terms(ch, beta, degraded)
    return np.minimum(a, b)


def cutset_objective(ch: GaussianChannel, beta: float,
                     degraded: bool = False) -> TermBreakdown:
    if not 0.0 <= beta <= 1.0:
        raise ConstraintViolated("beta must lie in [0, 1]")
    a, b = cutset_terms(ch, beta, degraded)
    a, b = float(a), float(b)
    return TermBreakdown((("broadcast", a), ("coop_sum", b)), min(a, b))


def trivial_inner_terms(ch: GaussianChannel, beta):
    """Full-DF with the state treated as extra noise at both receivers."""
    p1, p2, q, n2, n3 = ch.p1, ch.p2, ch.q, ch.n2, ch.n3
    beta = np.asarray(beta, dtype=float)
    with np.errstate(invalid="ignore"):
        term_bc = 0.5 * _log2p(p1 * (1.0 - beta ** 2) / (n2 + q))
        term_sum = 0.5 * _log2p((p1 + p2 + 2.0 * beta * np.sqrt(p1 * p2)) / (n3 + q))
    return term_bc, term_sum


def trivial_inner_value(ch, beta):
    a, b = trivial_inner_terms(ch, beta)
    return np.minimum(a, b)


def trivial_inner_objective(ch: GaussianChannel, beta: float) -> TermBreakdown:
    if not 0.0 <= beta <= 1.0:
        raise ConstraintViolated("beta must lie in [0, 1]")
    a, b = trivial_inner_terms(ch, beta)
    a, b = float(a), float(b)
    return TermBreakdown((("relay_decode", a), ("coop_sum", b)), min(a, b))
