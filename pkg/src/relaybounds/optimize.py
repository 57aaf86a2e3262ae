"""Box-constrained maximization of the bound objectives.

Two stages: a full (chunked, vectorized) grid scan, then coordinate-ascent
refinement with golden-section line searches started from the best grid
points.  Infeasible or undefined points are rejected, never penalized.
Identical inputs and configuration produce bit-identical results; ties are
broken toward the lexicographically smallest parameter vector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import gaussian
from .errors import NoFeasiblePoint, NotDegraded
from .model import BoundPoint, GaussianChannel

__all__ = [
    "OptimizerConfig",
    "maximize_box",
    "inner_df",
    "inner_pdf",
    "outer",
    "outer_degraded",
    "cutset",
    "trivial_inner",
]

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class OptimizerConfig:
    grid_points_per_dim: int = 33
    tol: float = 1e-6            # stop refining a start when a full sweep gains less
    max_refine_iters: int = 40   # cap on refinement sweeps per start
    alpha_box: tuple = (-2.0, 3.0)
    n_starts: int = 5            # grid points carried into refinement
    chunk: int = 1 << 19         # grid points evaluated per vectorized batch

    def __post_init__(self):
        if self.grid_points_per_dim < 2:
            raise ValueError("grid_points_per_dim must be at least 2")
        if self.alpha_box[0] >= self.alpha_box[1]:
            raise ValueError("alpha_box must be a nonempty interval")


DEFAULT_CONFIG = OptimizerConfig()


def _feasible_mask(constraints, cols):
    mask = None
    for g in constraints:
        ok = np.asarray(g(*cols))
        mask = ok if mask is None else (mask & ok)
    return mask


def _scan_grid(objective, axes, constraints, n_starts, chunk):
    """Full grid scan; returns the top candidates as (value, params) pairs
    sorted by decreasing value then increasing parameter vector.

    Axis columns are passed to the objective as mutually broadcastable
    arrays, so subexpressions touching few parameters stay small.  The grid
    is processed in slabs along the first axis to bound peak memory.
    """
    ndim = len(axes)
    npts = [len(a) for a in axes]
    tail = int(np.prod(npts[1:])) if ndim > 1 else 1
    slab0 = max(1, min(npts[0], chunk // max(tail, 1)))
    cols_tail = [axes[d].reshape((1,) * d + (npts[d],) + (1,) * (ndim - d - 1))
                 for d in range(1, ndim)]
    candidates = []
    for i0 in range(0, npts[0], slab0):
        j0 = min(i0 + slab0, npts[0])
        col0 = axes[0][i0:j0].reshape((j0 - i0,) + (1,) * (ndim - 1))
        cols = [col0] + cols_tail
        shape = (j0 - i0,) + tuple(npts[1:])
        vals = np.broadcast_to(np.asarray(objective(*cols), dtype=float), shape)
        mask = _feasible_mask(constraints, cols)
        if mask is not None:
            vals = np.where(np.broadcast_to(mask, shape), vals, -np.inf)
        vals = np.where(np.isnan(vals), -np.inf, vals)
        flat = vals.ravel()
        k = min(n_starts, flat.size)
        top = np.argpartition(-flat, k - 1)[:k]
        multi = np.unravel_index(top, shape)
        for n in range(k):
            params = tuple(float(axes[d][multi[d][n] + (i0 if d == 0 else 0)])
                           for d in range(ndim))
            candidates.append((float(flat[top[n]]), params))
        candidates.sort(key=lambda t: (-t[0], t[1]))
        del candidates[n_starts:]
    return candidates


def _golden_max(f, lo, hi, xtol):
    """Golden-section maximization of a scalar function on [lo, hi]."""
    a, b = lo, hi
    h = b - a
    if h <= xtol:
        m = 0.5 * (a + b)
        fm = f(m)
        return m, fm
    c = b - _INVPHI * h
    d = a + _INVPHI * h
    fc, fd = f(c), f(d)
    while h > xtol:
        if fc >= fd:
            b, d, fd = d, c, fc
            h = b - a
            c = b - _INVPHI * h
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            h = b - a
            d = a + _INVPHI * h
            fd = f(d)
    if fc >= fd:
        return c, fc
    return d, fd


def _refine(objective, box, constraints, start, f_start, cfg):
    """Coordinate ascent from one start point.  Returns (value, params,
    final-sweep improvement).  The value never decreases."""
    x = list(start)
    dims = len(box)

    def point_value(v):
        val = float(objective(*v))
        if math.isnan(val):
            return -math.inf
        for g in constraints:
            if not bool(g(*v)):
                return -math.inf
        return val

    fx = f_start
    improvement = math.inf
    for _ in range(cfg.max_refine_iters):
        f_before = fx
        for d in range(dims):
            lo, hi = box[d]

            def line(t, _d=d):
                trial = list(x)
                trial[_d] = t
                return point_value(trial)

            xtol = max(1e-9, 1e-7 * (hi - lo))
            t_best, f_best = _golden_max(line, lo, hi, xtol)
            if f_best > fx:
                x[d] = t_best
                fx = f_best
        improvement = fx - f_before
        if improvement < cfg.tol:
            break
    return fx, tuple(x), max(improvement, 0.0)


def maximize_box(objective, box, constraints=(), cfg: OptimizerConfig | None = None,
                 kind: str = "cutset", param_names=None, extra_starts=()) -> BoundPoint:
    """Maximize ``objective`` over the cartesian product of intervals ``box``.

    objective    -- numpy-generic callable of one positional argument per
                    dimension; NaN marks undefined points
    box          -- sequence of (lo, hi) pairs
    constraints  -- callables with the objective's signature returning a
                    boolean feasibility mask (True = feasible)
    extra_starts -- additional refinement start points (used by bounds whose
                    optimum is known to live on a slice a coarse grid misses)

    Raises NoFeasiblePoint when the whole grid is infeasible.
    """
    cfg = cfg or DEFAULT_CONFIG
    axes = [np.linspace(lo, hi, cfg.grid_points_per_dim) for lo, hi in box]
    starts = _scan_grid(objective, axes, constraints, cfg.n_starts, cfg.chunk)
    for x0 in extra_starts:
        v = float(objective(*x0))
        if not math.isnan(v) and all(bool(g(*x0)) for g in constraints):
            starts.append((v, tuple(float(t) for t in x0)))
    if not any(f0 > -math.inf for f0, _ in starts):
        raise NoFeasiblePoint("every grid point was infeasible or undefined")
    results = []
    for f0, x0 in starts:
        if f0 == -math.inf:
            continue
        results.append(_refine(objective, box, constraints, x0, f0, cfg))
    value, params, gap = min(results, key=lambda r: (-r[0], r[1]))
    if -1e-9 <= value < 0.0:
        value = 0.0  # a zero-rate point is always feasible; this is float noise
    names = param_names or [f"x{d}" for d in range(len(box))]
    return BoundPoint(kind=kind, rate=value, argmax=dict(zip(names, params)), tol=gap)


# ---------------------------------------------------------------------------
# bound-specific wrappers
# ---------------------------------------------------------------------------

_DF_BOX = ((0.0, 1.0), (0.0, 1.0), (-1.0, 0.0))
_OUTER_BOX = ((0.0, 1.0), (-1.0, 0.0))


def _corr_disc(r12, r2s):
    return r12 ** 2 + r2s ** 2 <= 1.0 + 1e-12


def inner_df(ch: GaussianChannel, cfg: OptimizerConfig | None = None) -> BoundPoint:
    """Maximized full decode-and-forward lower bound."""
    return maximize_box(lambda t, r12, r2s: gaussian.df_value(ch, t, r12, r2s),
                        _DF_BOX, cfg=cfg, kind="inner_df",
                        param_names=("theta", "rho12", "rho2s"))


def inner_pdf(ch: GaussianChannel, cfg: OptimizerConfig | None = None) -> BoundPoint:
    """Maximized rate-splitting (partial DF) lower bound.

    The dirty-paper scale is searched over cfg.alpha_box; the box doubles in
    width (up to three times) whenever the optimum lands within 1% of an
    edge, which guards against channels whose optimal scale is unusual.

    Refinement starts include, beyond the best grid points, the full-DF
    maximizer on the gamma = 0 slice (rate splitting strictly generalizes
    full DF, but a coarse 5-d grid can miss that slice) and the
    direct-transmission corner gamma = 1 with a pure dirty-paper relay.
    """
    cfg = cfg or DEFAULT_CONFIG
    df_point = inner_df(ch, cfg)
    t_df = df_point.argmax["theta"]
    r2s_df = df_point.argmax["rho2s"]
    p2p_df = t_df * ch.p2 * (1.0 - r2s_df ** 2)
    extra = [
        (0.0, t_df, df_point.argmax["rho12"], r2s_df, p2p_df / (p2p_df + ch.n3)),
        (1.0, 1.0, 0.0, 0.0, ch.p2 / (ch.p2 + ch.n3)),
    ]
    alo, ahi = cfg.alpha_box
    for _ in range(4):
        point = maximize_box(
            lambda g, t, r12, r2s, a: gaussian.pdf_value(ch, g, t, r12, r2s, a),
            ((0.0, 1.0), (0.0, 1.0), (0.0, 1.0), (-1.0, 0.0), (alo, ahi)),
            cfg=replace(cfg, alpha_box=(alo, ahi)), kind="inner_pdf",
            param_names=("gamma", "theta", "rho12", "rho2s", "alpha"),
            extra_starts=extra)
        width = ahi - alo
        a_star = point.argmax["alpha"]
        if min(a_star - alo, ahi - a_star) > 0.01 * width:
            break
        mid = 0.5 * (alo + ahi)
        alo, ahi = mid - width, mid + width
    return point


def outer(ch: GaussianChannel, cfg: OptimizerConfig | None = None) -> BoundPoint:
    """Maximized general upper bound."""
    return maximize_box(lambda r12, r2s: gaussian.outer_value(ch, r12, r2s),
                        _OUTER_BOX, constraints=(_corr_disc,), cfg=cfg,
                        kind="outer", param_names=("rho12", "rho2s"))


def outer_degraded(ch: GaussianChannel, cfg: OptimizerConfig | None = None) -> BoundPoint:
    """Maximized degraded-channel upper bound (requires n3 >= n2, with the
    2% boundary slack of :func:`relaybounds.gaussian.require_degraded`)."""
    gaussian.require_degraded(ch)
    return maximize_box(lambda r12, r2s: gaussian.outer_degraded_value(ch, r12, r2s),
                        _OUTER_BOX, constraints=(_corr_disc,), cfg=cfg,
                        kind="outer_degraded", param_names=("rho12", "rho2s"))


def cutset(ch: GaussianChannel, cfg: OptimizerConfig | None = None,
           degraded: bool = False) -> BoundPoint:
    """Maximized cut-set bound with the state known everywhere."""
    return maximize_box(lambda b: gaussian.cutset_value(ch, b, degraded),
                        ((0.0, 1.0),), cfg=cfg, kind="cutset", param_names=("beta",))


def trivial_inner(ch: GaussianChannel, cfg: OptimizerConfig | None = None) -> BoundPoint:
    """Maximized state-as-noise full-DF lower bound."""
    return maximize_box(lambda b: gaussian.trivial_inner_value(ch, b),
                        ((0.0, 1.0),), cfg=cfg, kind="trivial_inner",
                        param_names=("beta",))
