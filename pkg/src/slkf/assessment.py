"""Streaming self-assessment of a Kalman filter with subjective logic.

Each measurement is whitened with the filter's predicted measurement
distribution, dropped into one of ``n_x`` equiprobable bins of the assumed
standard normal, and turned into a single unit of evidence. A sliding
short-term opinion and an accumulating long-term opinion are fused; the degree
of conflict between that fused opinion and the ideal (uniform) histogram is the
assessment ``delta``, and its uncertainty mass is ``u_delta``.
"""
from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import opinion as sl
from .consistency import chi2_cdf, chi2_quantile, norm_cdf, norm_inv_cdf
from .errors import DomainError, LengthMismatch, RangeError
from .kalman import MeasPrediction

TD_TARGETS = ("long_term", "combined")


class Event(enum.Enum):
    NONE = ""
    TRUST_DISCOUNT = "td"
    LONG_TERM_RESET = "reset"
    WARMUP = "warmup"


@dataclass(frozen=True)
class AssessmentConfig:
    n_x: int = 9
    prior_weight: float = 9.0
    n_st: int = 35
    n_c: int = 1
    theta: float = 0.25
    p_d: float = 0.99
    td_target: str = "long_term"

    def __post_init__(self):
        if self.n_x < 2:
            raise RangeError("n_x must be at least 2")
        if not self.prior_weight > 0:
            raise RangeError("prior_weight must be positive")
        if self.n_st < 2:
            raise RangeError("n_st must be at least 2")
        if not 1 <= self.n_c < self.n_st:
            raise RangeError("n_c must satisfy 1 <= n_c < n_st")
        if not 0.0 <= self.theta <= 1.0:
            raise RangeError(f"theta must lie in [0, 1], got {self.theta!r}")
        if not 0.0 <= self.p_d <= 1.0:
            raise RangeError(f"p_d must lie in [0, 1], got {self.p_d!r}")
        if self.td_target not in TD_TARGETS:
            raise RangeError(f"td_target must be one of {TD_TARGETS}")


@dataclass(frozen=True)
class BinningScheme:
    """Equiprobable bins under the whitened residual's reference distribution.

    For scalar residuals (``dof == 1``) the edges live on the standard-normal
    axis. For ``dof > 1`` they bin the squared norm under χ²(dof).
    """

    edges: np.ndarray
    n_x: int
    dof: int = 1

    def __post_init__(self):
        edges = np.asarray(self.edges, dtype=float)
        if edges.size != self.n_x - 1 or np.any(np.diff(edges) <= 0):
            raise DomainError("bin edges must be n_x - 1 strictly increasing values")
        edges.flags.writeable = False
        object.__setattr__(self, "edges", edges)

    def masses(self) -> np.ndarray:
        """Reference probability of each bin (computed, not assumed)."""
        if self.dof == 1:
            cdf = [norm_cdf(e) for e in self.edges]
        else:
            cdf = [chi2_cdf(e, self.dof) for e in self.edges]
        return np.diff(np.concatenate([[0.0], cdf, [1.0]]))


def make_bins(n_x: int, dof: int = 1) -> BinningScheme:
    if n_x < 2:
        raise DomainError("need at least 2 bins")
    probs = np.arange(1, n_x) / n_x
    if dof == 1:
        edges = [norm_inv_cdf(p) for p in probs]
    else:
        edges = [chi2_quantile(p, dof) for p in probs]
    return BinningScheme(np.array(edges), n_x, dof)


def whiten(z, pred: MeasPrediction) -> np.ndarray:
    """Solve ``L z_t = z - z_pred`` with ``S = L Lᵀ``."""
    z = np.atleast_1d(np.asarray(z, dtype=float))
    if z.shape != pred.z_pred.shape:
        raise LengthMismatch(f"measurement shape {z.shape} vs prediction {pred.z_pred.shape}")
    return np.linalg.solve(pred.chol, z - pred.z_pred)


def assign_bin(z_t, bins: BinningScheme) -> int:
    """Index of the bin holding ``z_t``; a value on an edge goes to the upper bin."""
    z_t = np.atleast_1d(np.asarray(z_t, dtype=float))
    if bins.dof == 1:
        if z_t.size != 1:
            raise LengthMismatch("scalar binning needs a scalar residual")
        stat = z_t[0]
    else:
        if z_t.size != bins.dof:
            raise LengthMismatch(f"binning expects {bins.dof}-dim residuals, got {z_t.size}")
        stat = float(z_t @ z_t)
    return int(np.searchsorted(bins.edges, stat, side="right"))


def measurement_opinion(bin_index: int, n_x: int, prior_weight: float) -> sl.Opinion:
    ev = sl.EvidenceVector.unit(bin_index, n_x, prior_weight)
    return sl.from_evidence(ev, sl.uniform(n_x))


def update_opinion(op: sl.Opinion, pred: MeasPrediction, z, bins: BinningScheme,
                   prior_weight: float) -> tuple[sl.Opinion, sl.Opinion]:
    """Fuse the evidence of one measurement into ``op``.

    Returns ``(updated, measurement_opinion)``.
    """
    idx = assign_bin(whiten(z, pred), bins)
    meas = measurement_opinion(idx, bins.n_x, prior_weight)
    return sl.fuse_acbf(op, meas), meas


@dataclass(frozen=True)
class AssessmentRecord:
    k: int
    delta: float
    u_delta: float
    event: Event = Event.NONE
    bin: int | None = None


@dataclass
class AssessmentState:
    """Mutable state of one sensor's assessor; create with :meth:`initial`."""

    cfg: AssessmentConfig
    bins: BinningScheme
    short_term: sl.Opinion
    long_term: sl.Opinion
    reference: sl.Opinion
    window: deque = field(default_factory=deque)
    l: int = 0  # records in the current long-term epoch, including its opening record
    i: int = 0  # long-term epoch index
    k: int = 0
    since_compare: int = 0
    combined: sl.Opinion | None = None

    @classmethod
    def initial(cls, cfg: AssessmentConfig | None = None, dof: int = 1) -> AssessmentState:
        cfg = cfg or AssessmentConfig()
        base = sl.uniform(cfg.n_x)
        v = sl.vacuous(base)
        return cls(cfg=cfg, bins=make_bins(cfg.n_x, dof), short_term=v, long_term=v,
                   reference=sl.dogmatic(base, base), combined=v)

    @property
    def steady(self) -> bool:
        return len(self.window) >= self.cfg.n_st

    def record(self, event: Event = Event.NONE, bin_index: int | None = None) -> AssessmentRecord:
        combined = self.combined
        return AssessmentRecord(self.k, sl.degree_of_conflict(combined, self.reference),
                                combined.uncertainty, event, bin_index)

    def window_fusion(self) -> sl.Opinion:
        """Cumulative fusion of the windowed measurement opinions (for checks)."""
        out = sl.vacuous(self.short_term.base_rate)
        for op in self.window:
            out = sl.fuse_acbf(out, op)
        return out

    def ingest(self, pred: MeasPrediction, z) -> int:
        """Add a measurement to the short-term window without emitting a record."""
        self.short_term, meas = update_opinion(self.short_term, pred, z, self.bins,
                                               self.cfg.prior_weight)
        self.window.append(meas)
        if len(self.window) == self.cfg.n_st:
            self.l = 1
        self.combined = self.short_term
        return int(np.argmax(meas.belief))

    def _discount_combined(self):
        # Scale the evidence behind every stored opinion by the factor that trust
        # discounting applies to the fused opinion, so st ⊕ lt == TD(st ⊕ lt).
        cfg = self.cfg
        W = cfg.prior_weight
        fused = sl.fuse_acbf(self.short_term, self.long_term)
        R = W * (1.0 - fused.uncertainty) / fused.uncertainty
        c = W * cfg.p_d / (W + (1.0 - cfg.p_d) * R)

        def scale(op):
            r = W * (1.0 - op.uncertainty) / op.uncertainty
            return sl.trust_discount(op, c * (W + r) / (W + c * r))

        self.short_term = scale(self.short_term)
        self.long_term = scale(self.long_term)
        self.window = deque(scale(op) for op in self.window)

    def _compare(self) -> Event:
        cfg = self.cfg
        mature = self.l >= cfg.n_st
        event = Event.NONE
        if mature and sl.degree_of_conflict(self.long_term, self.short_term) > cfg.theta:
            self.long_term = sl.vacuous(self.long_term.base_rate)
            event = Event.LONG_TERM_RESET
        elif mature:
            if cfg.td_target == "combined":
                self._discount_combined()
            else:
                self.long_term = sl.trust_discount(self.long_term, cfg.p_d)
            event = Event.TRUST_DISCOUNT
        if event is not Event.NONE:
            self.l = 1
        self.i += 1
        return event

    def step(self, pred: MeasPrediction, z) -> AssessmentRecord:
        self.k += 1
        was_steady = self.steady
        bin_index = self.ingest(pred, z)
        if not was_steady:
            return self.record(Event.WARMUP, bin_index)
        oldest = self.window.popleft()
        self.short_term = sl.unfuse_cbf(self.short_term, oldest)
        self.long_term = sl.fuse_acbf(self.long_term, oldest)
        self.l += 1
        self.since_compare += 1
        event = Event.NONE
        if self.since_compare == self.cfg.n_c:
            self.since_compare = 0
            event = self._compare()
        self.combined = sl.fuse_acbf(self.short_term, self.long_term)
        return self.record(event, bin_index)


def step(state: AssessmentState, pred: MeasPrediction, z,
         cfg: AssessmentConfig | None = None) -> AssessmentRecord:
    if cfg is not None and cfg != state.cfg:
        raise DomainError("config differs from the one the state was built with")
    return state.step(pred, z)


def initial_record(state: AssessmentState) -> AssessmentRecord:
    return state.record(Event.WARMUP)


def run_trace(preds: Sequence[MeasPrediction], zs: Sequence,
              cfg: AssessmentConfig | None = None) -> list[AssessmentRecord]:
    """Assess a full measurement sequence ``z_0 .. z_n``.

    Record 0 is the vacuous start. ``z_0`` is then ingested without a record of
    its own, so record ``k >= 1`` reflects the evidence of ``z_0 .. z_k``.
    """
    if len(preds) != len(zs):
        raise LengthMismatch(f"{len(preds)} predictions for {len(zs)} measurements")
    dof = preds[0].z_pred.size if len(preds) else 1
    state = AssessmentState.initial(cfg, dof)
    records = [initial_record(state)]
    if not len(zs):
        return records
    state.ingest(preds[0], zs[0])
    for pred, z in zip(preds[1:], zs[1:]):
        records.append(state.step(pred, z))
    return records
