"""Domain types for the state-dependent relay channel with an informed relay.

Conventions used everywhere in this package:
  * powers and variances are linear (never dB); dB conversion happens only
    at the CLI boundary,
  * rates are in bits per channel use (log base 2),
  * 0/0 = 0 wherever a correlation ratio degenerates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    CardinalityExceeded,
    ConstraintViolated,
    InvalidFactorization,
    NegativePower,
    NonPositiveNoise,
)

_PMF_ATOL = 1e-12


def db_to_linear(x_db: float) -> float:
    """Convert a dB quantity to linear units: 10**(x_db/10)."""
    if not math.isfinite(x_db):
        raise ValueError(f"dB value must be finite, got {x_db}")
    return 10.0 ** (x_db / 10.0)


def linear_to_db(x: float) -> float:
    """Inverse of :func:`db_to_linear` (requires x > 0)."""
    if not (x > 0):
        raise ValueError(f"linear value must be positive, got {x}")
    return 10.0 * math.log10(x)


def _check_power(name: str, value: float) -> None:
    if not (np.isfinite(value) and value >= 0):
        raise NegativePower(f"{name} must be finite and >= 0, got {value}")


def _check_noise(name: str, value: float) -> None:
    if not (np.isfinite(value) and value > 0):
        raise NonPositiveNoise(f"{name} must be finite and > 0, got {value}")


@dataclass(frozen=True)
class GaussianChannel:
    """Full-duplex Gaussian relay channel with additive state.

    The relay observes the source signal plus state plus noise of variance
    ``n2``; the destination observes source plus relay plus state plus noise
    of variance ``n3``.  ``q`` is the state variance.
    """

    p1: float  # source power
    p2: float  # relay power
    q: float   # state (interference) variance
    n2: float  # relay noise variance
    n3: float  # destination noise variance

    def __post_init__(self):
        _check_power("p1", self.p1)
        _check_power("p2", self.p2)
        _check_power("q", self.q)
        _check_noise("n2", self.n2)
        _check_noise("n3", self.n3)

    @property
    def is_degraded(self) -> bool:
        """True when the destination noise dominates the relay noise."""
        return self.n3 >= self.n2

    def scaled(self, c: float) -> "GaussianChannel":
        """All powers and variances multiplied by a common factor."""
        return GaussianChannel(self.p1 * c, self.p2 * c, self.q * c,
                               self.n2 * c, self.n3 * c)


def validate_channel(ch: GaussianChannel) -> bool:
    """Re-check channel invariants; returns the degraded flag.

    Raises NegativePower / NonPositiveNoise when a field is out of range
    (useful for channels assembled from untrusted configs).
    """
    _check_power("p1", ch.p1)
    _check_power("p2", ch.p2)
    _check_power("q", ch.q)
    _check_noise("n2", ch.n2)
    _check_noise("n3", ch.n3)
    return ch.is_degraded


def _check_box(name: str, value: float, lo: float, hi: float) -> None:
    if not (np.isfinite(value) and lo <= value <= hi):
        raise ConstraintViolated(f"{name} must lie in [{lo}, {hi}], got {value}")


@dataclass(frozen=True)
class CodingParams:
    """Free parameters of the decode-and-forward coding constructions.

    gamma  -- fraction of source power spent on the direct (non-relayed) part
    theta  -- fraction of relay power spent on the state-dependent layer
    rho12  -- coherence between the source input and the relay's cooperative layer
    rho2s  -- correlation between the relay's state layer and the state
    alpha  -- dirty-paper scale of the binning auxiliary (any finite real)

    Full decode-and-forward evaluation ignores ``gamma`` and ``alpha`` (the
    dirty-paper scale is then set internally to its optimal value).
    """

    gamma: float = 0.0
    theta: float = 0.0
    rho12: float = 0.0
    rho2s: float = 0.0
    alpha: float = 0.0

    def __post_init__(self):
        _check_box("gamma", self.gamma, 0.0, 1.0)
        _check_box("theta", self.theta, 0.0, 1.0)
        _check_box("rho12", self.rho12, 0.0, 1.0)
        _check_box("rho2s", self.rho2s, -1.0, 0.0)
        if not np.isfinite(self.alpha):
            raise ConstraintViolated(f"alpha must be finite, got {self.alpha}")

    @property
    def rho12_pooled(self) -> float:
        """Coherence coordinate rho12 * sqrt(1 - theta) of the recast lower bound."""
        return self.rho12 * math.sqrt(1.0 - self.theta)

    @property
    def rho2s_pooled(self) -> float:
        """State coordinate rho2s * sqrt(theta) of the recast lower bound."""
        return self.rho2s * math.sqrt(self.theta)


@dataclass(frozen=True)
class OuterParams:
    """Correlation pair of the upper bounds; must satisfy rho12^2 + rho2s^2 <= 1."""

    rho12: float = 0.0
    rho2s: float = 0.0

    def __post_init__(self):
        _check_box("rho12", self.rho12, 0.0, 1.0)
        _check_box("rho2s", self.rho2s, -1.0, 0.0)
        if self.rho12 ** 2 + self.rho2s ** 2 > 1.0 + 1e-12:
            raise ConstraintViolated(
                f"rho12^2 + rho2s^2 = {self.rho12**2 + self.rho2s**2:.6g} exceeds 1")

    @property
    def kappa(self) -> float:
        """rho12 / sqrt(1 - rho2s^2), with 0/0 = 0 at |rho2s| = 1."""
        den = 1.0 - self.rho2s ** 2
        if den == 0.0:
            return 0.0
        return self.rho12 / math.sqrt(den)

    @property
    def rho(self) -> float:
        """The state correlation itself (second coordinate of the recast bound)."""
        return self.rho2s


@dataclass(frozen=True)
class TdChannel:
    """Half-duplex (time-division) Gaussian relay channel.

    The relay listens during a fraction ``nu`` of the block and transmits
    during the remaining ``1 - nu``.  Source power and state variance may
    differ between the two phases.
    """

    nu: float      # relay-receive fraction of the block
    p1_rx: float   # source power while the relay listens
    p1_tx: float   # source power while the relay transmits
    p2: float      # relay power
    q_rx: float    # state variance while the relay listens
    q_tx: float    # state variance while the relay transmits
    n2: float
    n3: float

    def __post_init__(self):
        _check_box("nu", self.nu, 0.0, 1.0)
        _check_power("p1_rx", self.p1_rx)
        _check_power("p1_tx", self.p1_tx)
        _check_power("p2", self.p2)
        _check_power("q_rx", self.q_rx)
        _check_power("q_tx", self.q_tx)
        _check_noise("n2", self.n2)
        _check_noise("n3", self.n3)

    def scaled(self, c: float) -> "TdChannel":
        return TdChannel(self.nu, self.p1_rx * c, self.p1_tx * c, self.p2 * c,
                         self.q_rx * c, self.q_tx * c, self.n2 * c, self.n3 * c)


_MAX_ALPHABET = 4


@dataclass(frozen=True)
class DmChannel:
    """Finite-alphabet state-dependent relay channel.

    qs : state pmf, shape (|S|,)
    w  : transition kernel W(y2, y3 | x1, x2, s), stored dense with axis
         order (s, x1, x2, y2, y3); every (s, x1, x2) slice sums to 1.

    All alphabet sizes are capped at 4 to keep exhaustive searches tractable.
    """

    qs: np.ndarray
    w: np.ndarray

    def __post_init__(self):
        qs = np.asarray(self.qs, dtype=float)
        w = np.asarray(self.w, dtype=float)
        object.__setattr__(self, "qs", qs)
        object.__setattr__(self, "w", w)
        if qs.ndim != 1 or w.ndim != 5:
            raise InvalidFactorization(
                f"qs must be 1-d and w 5-d, got shapes {qs.shape} and {w.shape}")
        if w.shape[0] != qs.shape[0]:
            raise InvalidFactorization(
                f"state axis mismatch: |S|={qs.shape[0]} but w has {w.shape[0]}")
        for n, size in zip("s x1 x2 y2 y3".split(), (qs.shape[0],) + w.shape[1:]):
            if not (1 <= size <= _MAX_ALPHABET):
                raise CardinalityExceeded(f"|{n}| = {size} outside [1, {_MAX_ALPHABET}]")
        if np.any(qs < 0) or np.any(w < 0):
            raise InvalidFactorization("probabilities must be non-negative")
        if abs(qs.sum() - 1.0) > _PMF_ATOL:
            raise InvalidFactorization(f"state pmf sums to {qs.sum()!r}, not 1")
        slice_sums = w.sum(axis=(3, 4))
        bad = np.argwhere(np.abs(slice_sums - 1.0) > _PMF_ATOL)
        if bad.size:
            s, x1, x2 = bad[0]
            raise InvalidFactorization(
                f"kernel slice (s={s}, x1={x1}, x2={x2}) sums to "
                f"{slice_sums[s, x1, x2]!r}, not 1")

    @property
    def sizes(self) -> tuple[int, int, int, int, int]:
        """(|S|, |X1|, |X2|, |Y2|, |Y3|)."""
        return (self.qs.shape[0],) + self.w.shape[1:]


def _check_rows(name: str, arr: np.ndarray) -> None:
    if np.any(arr < 0):
        raise InvalidFactorization(f"{name} has negative entries")
    sums = arr.sum(axis=-1)
    if np.any(np.abs(sums - 1.0) > _PMF_ATOL):
        raise InvalidFactorization(f"{name} rows must sum to 1, got {sums!r}")


@dataclass(frozen=True)
class DmCoding:
    """Factored input distribution for the discrete lower bound.

    The joint law is qs * p_u1 * p_x1_given_u1 * p_u2_given_u1_s *
    p_x2_given_u1_u2_s * w, i.e. the cooperative layer U1 is state
    independent while the binning layer U2 sees both U1 and the state.
    """

    p_u1: np.ndarray                 # (|U1|,)
    p_x1_given_u1: np.ndarray        # (|U1|, |X1|)
    p_u2_given_u1_s: np.ndarray      # (|U1|, |S|, |U2|)
    p_x2_given_u1_u2_s: np.ndarray   # (|U1|, |U2|, |S|, |X2|)

    def __post_init__(self):
        for name in ("p_u1", "p_x1_given_u1", "p_u2_given_u1_s", "p_x2_given_u1_u2_s"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float))
        if self.p_u1.ndim != 1 or self.p_x1_given_u1.ndim != 2 \
                or self.p_u2_given_u1_s.ndim != 3 or self.p_x2_given_u1_u2_s.ndim != 4:
            raise InvalidFactorization("coding pmf arrays have wrong ranks")
        n_u1 = self.p_u1.shape[0]
        n_u2 = self.p_u2_given_u1_s.shape[2]
        if self.p_x1_given_u1.shape[0] != n_u1 \
                or self.p_u2_given_u1_s.shape[0] != n_u1 \
                or self.p_x2_given_u1_u2_s.shape[:2] != (n_u1, n_u2):
            raise InvalidFactorization("auxiliary axis sizes disagree between factors")
        _check_rows("p_u1", self.p_u1)
        _check_rows("p_x1_given_u1", self.p_x1_given_u1)
        _check_rows("p_u2_given_u1_s", self.p_u2_given_u1_s)
        _check_rows("p_x2_given_u1_u2_s", self.p_x2_given_u1_u2_s)

    @property
    def card(self) -> tuple[int, int]:
        """(|U1|, |U2|)."""
        return self.p_u1.shape[0], self.p_u2_given_u1_s.shape[2]


def aux_cardinality_caps(ch: DmChannel) -> tuple[int, int]:
    """Largest auxiliary alphabets the discrete lower bound ever needs.

    |U1| <= |S||X1||X2| + 1 and |U2| <= (|S||X1||X2| + 1) |S||X1||X2|.
    """
    m = ch.sizes[0] * ch.sizes[1] * ch.sizes[2]
    return m + 1, (m + 1) * m


_BOUND_KINDS = frozenset({
    "inner_df", "inner_pdf", "outer", "outer_degraded", "cutset",
    "trivial_inner", "td_inner", "td_outer", "dm_inner", "dm_outer",
    "dm_cutset", "dm_outer_degraded",
})


@dataclass(frozen=True)
class BoundPoint:
    """A maximized bound value together with its maximizing parameters."""

    kind: str
    rate: float
    argmax: dict = field(default_factory=dict)
    tol: float = 0.0

    def __post_init__(self):
        if self.kind not in _BOUND_KINDS:
            raise ValueError(f"unknown bound kind {self.kind!r}")
        if not (np.isfinite(self.rate) and self.rate >= 0):
            raise ValueError(f"rate must be finite and >= 0, got {self.rate}")

    def as_dict(self) -> dict:
        return {"kind": self.kind, "rate": self.rate,
                "argmax": dict(self.argmax), "tol": self.tol}
