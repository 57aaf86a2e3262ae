"""Finite-alphabet bound evaluation by numeric search over factored pmfs.

The lower bound optimizes the relay's two-layer input distribution (a
state-independent cooperative layer U1 and a state-aware binning layer U2);
the upper bounds optimize plain input distributions.  All alphabets are
tiny (<= 4), so joints are built dense and mutual informations computed
exactly; the only approximation is the nonconcave maximization, handled by
softmax-parameterized coordinate ascent with deterministic random restarts.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from .errors import (
    BadGrouping,
    CardinalityExceeded,
    InvalidFactorization,
    NotDegraded,
)
from .gaussian import TermBreakdown
from .model import BoundPoint, DmChannel, DmCoding, aux_cardinality_caps

__all__ = [
    "JointPmf",
    "mutual_information",
    "dm_inner_objective",
    "dm_inner",
    "dm_outer_objective",
    "dm_outer",
    "dm_cutset",
    "dm_outer_degraded",
    "degraded_factorization_residual",
    "load_dm_channel",
    "dump_dm_channel",
]

_INNER_AXES = ("s", "u1", "x1", "u2", "x2", "y2", "y3")
_OUTER_AXES = ("s", "x1", "x2", "y2", "y3")


@dataclass(frozen=True)
class JointPmf:
    """Dense joint pmf over named axes."""

    table: np.ndarray
    axes: tuple

    def __post_init__(self):
        table = np.asarray(self.table, dtype=float)
        object.__setattr__(self, "table", table)
        object.__setattr__(self, "axes", tuple(self.axes))
        if table.ndim != len(self.axes):
            raise InvalidFactorization("axis labels do not match table rank")
        if np.any(table < 0):
            raise InvalidFactorization("joint pmf has negative entries")
        if abs(table.sum() - 1.0) > 1e-10:
            raise InvalidFactorization(f"joint pmf sums to {table.sum()!r}, not 1")

    def entropy(self, group) -> float:
        return _entropy(self.table, self.axes, group)


def _entropy(table: np.ndarray, axes, group) -> float:
    """Entropy in bits of the marginal over ``group`` (0*log0 = 0)."""
    if not group:
        return 0.0
    drop = tuple(i for i, name in enumerate(axes) if name not in group)
    p = table.sum(axis=drop) if drop else table
    p = p.ravel()
    p = p[p > 0.0]
    return float(-(p * np.log2(p)).sum())


def _mi(table, axes, group_a, group_b, conditioning=()):
    a, b, c = tuple(group_a), tuple(group_b), tuple(conditioning)
    return (_entropy(table, axes, a + c) + _entropy(table, axes, b + c)
            - _entropy(table, axes, c) - _entropy(table, axes, a + b + c))


def mutual_information(j: JointPmf, group_a, group_b, conditioning=()) -> float:
    """I(A; B | C) in bits.  Groups must be disjoint known axis labels."""
    a, b, c = tuple(group_a), tuple(group_b), tuple(conditioning)
    seen = set()
    for name in a + b + c:
        if name not in j.axes:
            raise BadGrouping(f"unknown axis {name!r}; have {j.axes}")
        if name in seen:
            raise BadGrouping(f"axis {name!r} appears in more than one group")
        seen.add(name)
    if not a or not b:
        raise BadGrouping("both variable groups must be nonempty")
    return _mi(j.table, j.axes, a, b, c)


# ---------------------------------------------------------------------------
# joint assembly
# ---------------------------------------------------------------------------

def _inner_joint(ch: DmChannel, p_u1, p_x1_u1, p_u2_u1s, p_x2_u1u2s) -> np.ndarray:
    """Joint over (s, u1, x1, u2, x2, y2, y3) for the lower bound."""
    return np.einsum("s,u,ux,usv,uvsz,sxzyw->suxvzyw",
                     ch.qs, p_u1, p_x1_u1, p_u2_u1s, p_x2_u1u2s, ch.w)


def inner_joint(ch: DmChannel, c: DmCoding) -> JointPmf:
    return JointPmf(_inner_joint(ch, c.p_u1, c.p_x1_given_u1,
                                 c.p_u2_given_u1_s, c.p_x2_given_u1_u2_s),
                    _INNER_AXES)


def _outer_joint(ch: DmChannel, p_x1s, p_x2_x1s) -> np.ndarray:
    """Joint over (s, x1, x2, y2, y3); p_x1s has shape (|S|, |X1|) so the
    cut-set family (state-aware source) is the general case."""
    return np.einsum("s,sx,xsz,sxzyw->sxzyw", ch.qs, p_x1s, p_x2_x1s, ch.w)


# ---------------------------------------------------------------------------
# objectives
# ---------------------------------------------------------------------------

def _inner_terms(table, window_constraint=False):
    term_relay = _mi(table, _INNER_AXES, ("x1",), ("y2",), ("s", "u1", "x2"))
    term_sum = (_mi(table, _INNER_AXES, ("x1", "u1", "u2"), ("y3",))
                - _mi(table, _INNER_AXES, ("u2",), ("s",), ("u1",)))
    margin = None
    if window_constraint:
        margin = (_mi(table, _INNER_AXES, ("u2",), ("y3",), ("u1",))
                  - _mi(table, _INNER_AXES, ("u2",), ("s",), ("u1",)))
    return term_relay, term_sum, margin


def dm_inner_objective(ch: DmChannel, c: DmCoding,
                       window_constraint: bool = False) -> TermBreakdown:
    """Lower-bound objective min{relay decoding, destination sum rate}.

    With ``window_constraint`` the sliding-window decodability margin
    I(U2;Y3|U1) - I(U2;S|U1) must be positive; the value is -inf when it is
    not (the margin is reported as an extra term).
    """
    table = _inner_joint(ch, c.p_u1, c.p_x1_given_u1,
                         c.p_u2_given_u1_s, c.p_x2_given_u1_u2_s)
    a, b, margin = _inner_terms(table, window_constraint)
    terms = [("relay_decode", a), ("sum_rate", b)]
    value = min(a, b)
    if window_constraint:
        terms.append(("window_margin", margin))
        if margin <= 0.0:
            value = float("-inf")
    return TermBreakdown(tuple(terms), value)


def _outer_terms(table):
    term_cut = _mi(table, _OUTER_AXES, ("x1",), ("y2", "y3"), ("s", "x2"))
    term_sum = (_mi(table, _OUTER_AXES, ("x1", "x2"), ("y3",), ("s",))
                - _mi(table, _OUTER_AXES, ("x1",), ("s",), ("y3",)))
    return term_cut, term_sum


def dm_outer_objective(ch: DmChannel, px1, px2_given_x1s) -> TermBreakdown:
    """Upper-bound objective: broadcast cut against the state-penalized sum
    rate.  ``px1`` has shape (|X1|,) (the source cannot see the state);
    ``px2_given_x1s`` has shape (|X1|, |S|, |X2|)."""
    px1 = np.asarray(px1, dtype=float)
    px2 = np.asarray(px2_given_x1s, dtype=float)
    _check_pmf_arg("px1", px1, 1)
    _check_pmf_arg("px2_given_x1s", px2, 3)
    table = _outer_joint(ch, np.broadcast_to(px1, (ch.sizes[0], px1.shape[0])), px2)
    a, b = _outer_terms(table)
    return TermBreakdown((("broadcast_cut", a), ("sum_rate", b)), min(a, b))


def _check_pmf_arg(name, arr, rank):
    if arr.ndim != rank:
        raise InvalidFactorization(f"{name} must have rank {rank}")
    if np.any(arr < 0) or np.any(np.abs(arr.sum(axis=-1) - 1.0) > 1e-10):
        raise InvalidFactorization(f"{name} rows must be pmfs")


# ---------------------------------------------------------------------------
# pmf-space maximizer: softmax rows, per-logit golden section, restarts
# ---------------------------------------------------------------------------

_LOGIT_RANGE = 8.0
_GOLD = (np.sqrt(5.0) - 1.0) / 2.0


def _softmax(logits):
    z = logits - logits.max(axis=-1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=-1, keepdims=True)


def _golden_scalar(f, lo, hi, xtol=1e-3):
    a, b = lo, hi
    h = b - a
    c = b - _GOLD * h
    d = a + _GOLD * h
    fc, fd = f(c), f(d)
    while h > xtol:
        if fc >= fd:
            b, d, fd = d, c, fc
            h = b - a
            c = b - _GOLD * h
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            h = b - a
            d = a + _GOLD * h
            fd = f(d)
    return (c, fc) if fc >= fd else (d, fd)


def _ascend_pmfs(shapes, value_of, restarts, seed, sweeps=12, tol=1e-5):
    """Maximize ``value_of(mats)`` over lists of row-stochastic arrays.

    Rows are softmax images of bounded logits, so every iterate is strictly
    positive and normalized without barriers or projections.  Returns
    (value, mats, last_improvement) of the best restart; ties go to the
    earlier restart for determinism.
    """
    best = None
    for r in range(restarts):
        rng = np.random.default_rng(0xD1CE + seed * 1009 + r)
        logits = [np.zeros(sh) if r == 0 else rng.normal(0.0, 1.5, size=sh)
                  for sh in shapes]
        mats = [_softmax(lg) for lg in logits]
        fx = value_of(mats)
        gap = np.inf
        for _ in range(sweeps):
            f_before = fx
            for k, lg in enumerate(logits):
                flat = lg.reshape(-1)
                for j in range(flat.size):
                    keep = flat[j]

                    def slider(t, _k=k, _j=j):
                        flat[_j] = t
                        mats[_k] = _softmax(lg)
                        return value_of(mats)

                    t_best, f_best = _golden_scalar(slider, -_LOGIT_RANGE, _LOGIT_RANGE)
                    if f_best > fx:
                        flat[j] = t_best
                        fx = f_best
                    else:
                        flat[j] = keep
                    mats[k] = _softmax(lg)
            gap = fx - f_before
            if gap < tol:
                break
        cand = (fx, [m.copy() for m in mats], max(gap, 0.0))
        if best is None or cand[0] > best[0]:
            best = cand
    return best


def dm_inner(ch: DmChannel, card=(2, 2), restarts: int = 20, seed: int = 0,
             window_constraint: bool = False) -> BoundPoint:
    """Maximized finite-alphabet lower bound.

    ``card`` picks the auxiliary alphabet sizes.  Sizes above 4 are rejected
    outright; the theoretical sufficiency caps also apply.  When run below
    the caps (the default binary auxiliaries) the result is a lower bound on
    the maximal lower bound.
    """
    n_u1, n_u2 = card
    cap1, cap2 = aux_cardinality_caps(ch)
    for name, size, cap in (("u1", n_u1, cap1), ("u2", n_u2, cap2)):
        if size > min(cap, 4) or size < 1:
            raise CardinalityExceeded(
                f"|{name}| = {size} exceeds min(sufficiency cap {cap}, 4)")
    n_s, n_x1, n_x2 = ch.sizes[0], ch.sizes[1], ch.sizes[2]
    shapes = [(n_u1,), (n_u1, n_x1), (n_u1, n_s, n_u2), (n_u1, n_u2, n_s, n_x2)]

    def value_of(mats):
        table = _inner_joint(ch, mats[0].reshape(n_u1), mats[1], mats[2], mats[3])
        a, b, margin = _inner_terms(table, window_constraint)
        if window_constraint and margin <= 0.0:
            return -np.inf
        return min(a, b)

    value, mats, gap = _ascend_pmfs(shapes, value_of, restarts, seed)
    if value == -np.inf:
        value = 0.0  # window-constrained search found nothing decodable
    return BoundPoint(kind="dm_inner", rate=max(value, 0.0),
                      argmax={"card_u1": float(n_u1), "card_u2": float(n_u2)},
                      tol=gap if np.isfinite(gap) else 0.0)


def _outer_like(ch: DmChannel, state_aware_source: bool, degraded: bool,
                restarts: int, seed: int, kind: str) -> BoundPoint:
    n_s, n_x1, n_x2 = ch.sizes[0], ch.sizes[1], ch.sizes[2]
    src_shape = (n_s, n_x1) if state_aware_source else (n_x1,)
    shapes = [src_shape, (n_x1, n_s, n_x2)]

    def value_of(mats):
        px1s = mats[0] if state_aware_source \
            else np.broadcast_to(mats[0].reshape(n_x1), (n_s, n_x1))
        table = _outer_joint(ch, px1s, mats[1])
        if degraded:
            a = _mi(table, _OUTER_AXES, ("x1",), ("y2",), ("s", "x2"))
        else:
            a = _mi(table, _OUTER_AXES, ("x1",), ("y2", "y3"), ("s", "x2"))
        if kind == "dm_cutset":
            b = _mi(table, _OUTER_AXES, ("x1", "x2"), ("y3",), ("s",))
        else:
            b = (_mi(table, _OUTER_AXES, ("x1", "x2"), ("y3",), ("s",))
                 - _mi(table, _OUTER_AXES, ("x1",), ("s",), ("y3",)))
        return min(a, b)

    value, mats, gap = _ascend_pmfs(shapes, value_of, restarts, seed)
    return BoundPoint(kind=kind, rate=max(value, 0.0), argmax={}, tol=gap)


def dm_outer(ch: DmChannel, restarts: int = 20, seed: int = 0) -> BoundPoint:
    """Maximized finite-alphabet upper bound (state-blind source)."""
    return _outer_like(ch, False, False, restarts, seed, "dm_outer")


def dm_cutset(ch: DmChannel, restarts: int = 20, seed: int = 0) -> BoundPoint:
    """Cut-set bound with the state known everywhere (state-aware source,
    no state-ignorance penalty)."""
    return _outer_like(ch, True, False, restarts, seed, "dm_cutset")


def dm_outer_degraded(ch: DmChannel, restarts: int = 20, seed: int = 0,
                      factor_tol: float = 1e-9) -> BoundPoint:
    """Degraded-channel upper bound: the broadcast cut drops Y3.

    Requires the kernel to factor through the relay output, i.e. a
    stochastic map Y2 -> Y3 given (X2, S) must reproduce W; checked by
    linear programming up to ``factor_tol``.
    """
    resid = degraded_factorization_residual(ch)
    if resid > factor_tol:
        raise NotDegraded(
            f"kernel is not physically degraded: factorization residual {resid:.3g}")
    return _outer_like(ch, False, True, restarts, seed, "dm_outer_degraded")


def degraded_factorization_residual(ch: DmChannel) -> float:
    """Worst-case L-infinity residual of the best factorization
    W = W(y2|x1,x2,s) * V(y3|y2,x2,s), over all (x2, s) pairs."""
    n_s, n_x1, n_x2, n_y2, n_y3 = ch.sizes
    w2 = ch.w.sum(axis=4)  # (s, x1, x2, y2)
    worst = 0.0
    n_var = n_y2 * n_y3
    for s in range(n_s):
        for x2 in range(n_x2):
            # variables: V[y2, y3] flattened, then the residual bound t
            n_rows = n_x1 * n_y2 * n_y3
            a_ub = np.zeros((2 * n_rows, n_var + 1))
            b_ub = np.zeros(2 * n_rows)
            r = 0
            for x1 in range(n_x1):
                for y2 in range(n_y2):
                    for y3 in range(n_y3):
                        col = y2 * n_y3 + y3
                        coeff = w2[s, x1, x2, y2]
                        target = ch.w[s, x1, x2, y2, y3]
                        a_ub[r, col] = coeff
                        a_ub[r, n_var] = -1.0
                        b_ub[r] = target
                        a_ub[r + 1, col] = -coeff
                        a_ub[r + 1, n_var] = -1.0
                        b_ub[r + 1] = -target
                        r += 2
            a_eq = np.zeros((n_y2, n_var + 1))
            for y2 in range(n_y2):
                a_eq[y2, y2 * n_y3:(y2 + 1) * n_y3] = 1.0
            b_eq = np.ones(n_y2)
            cost = np.zeros(n_var + 1)
            cost[n_var] = 1.0
            bounds = [(0.0, 1.0)] * n_var + [(0.0, None)]
            res = linprog(cost, A_ub=a_ub, b_ub=b_ub, A_eq=a_eq, b_eq=b_eq,
                          bounds=bounds, method="highs")
            if not res.success:
                return np.inf
            worst = max(worst, float(res.x[n_var]))
    return worst


# ---------------------------------------------------------------------------
# JSON channel documents
# ---------------------------------------------------------------------------

def load_dm_channel(doc) -> DmChannel:
    """Build a DmChannel from a JSON document (dict or JSON text).

    Expected keys: ``sizes`` = [|S|, |X1|, |X2|, |Y2|, |Y3|], ``qs`` = flat
    state pmf, ``w`` = flat kernel in row-major order with the state index
    slowest: (s, x1, x2, y2, y3).
    """
    if isinstance(doc, (str, bytes)):
        doc = json.loads(doc)
    try:
        sizes = [int(n) for n in doc["sizes"]]
        qs = np.asarray(doc["qs"], dtype=float)
        w_flat = np.asarray(doc["w"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidFactorization(f"malformed channel document: {exc}") from exc
    if len(sizes) != 5:
        raise InvalidFactorization(f"sizes must have 5 entries, got {sizes}")
    expected = int(np.prod(sizes))
    if w_flat.size != expected:
        raise InvalidFactorization(
            f"kernel needs {expected} entries for sizes {sizes}, got {w_flat.size}")
    if qs.size != sizes[0]:
        raise InvalidFactorization(
            f"state pmf needs {sizes[0]} entries, got {qs.size}")
    return DmChannel(qs=qs, w=w_flat.reshape(sizes))


def dump_dm_channel(ch: DmChannel) -> str:
    """Serialize a DmChannel to the JSON layout of :func:`load_dm_channel`."""
    return json.dumps({
        "sizes": list(ch.sizes),
        "qs": ch.qs.tolist(),
        "w": ch.w.ravel().tolist(),
    })
