"""Multinomial subjective-logic opinions and the operators used by the assessor.

An opinion over a domain of ``n`` outcomes is a triple ``(belief, uncertainty,
base_rate)`` with ``sum(belief) + uncertainty == 1`` and ``sum(base_rate) == 1``.
Opinions are immutable; every operator returns a fresh, validated value.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (BaseRateMismatch, DegenerateUnfusion, DomainError,
                     LengthMismatch, NegativeMass, SumViolation)

TOL = 1e-9
DEGENERATE_TOL = 1e-12


def _frozen(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.flags.writeable = False
    return arr


def _clamp(values: np.ndarray, what: str) -> np.ndarray:
    if np.any(values < -TOL):
        raise NegativeMass(f"{what} has a component below zero: {values.min()!r}")
    if np.any(values > 1 + TOL):
        raise SumViolation(f"{what} has a component above one: {values.max()!r}")
    return np.clip(values, 0.0, 1.0)


def _check_base_rate(base_rate) -> np.ndarray:
    a = np.asarray(base_rate, dtype=float)
    if a.ndim != 1 or a.size < 2:
        raise LengthMismatch("base rate must be a vector with at least 2 entries")
    a = _clamp(a, "base rate")
    total = a.sum()
    if abs(total - 1.0) > TOL:
        raise SumViolation(f"base rate sums to {total!r}, expected 1")
    # renormalizing at rounding level would perturb shared base rates on every call
    return a / total if abs(total - 1.0) > 1e-14 else a


@dataclass(frozen=True, eq=False)
class Opinion:
    belief: np.ndarray
    uncertainty: float
    base_rate: np.ndarray

    @property
    def size(self) -> int:
        return self.belief.size

    def __repr__(self):
        b = np.array2string(self.belief, precision=4)
        a = np.array2string(self.base_rate, precision=4)
        return f"Opinion(b={b}, u={self.uncertainty:.6g}, a={a})"


def make_opinion(belief, uncertainty: float, base_rate) -> Opinion:
    """Validate and build an opinion.

    Rounding noise up to 1e-9 is absorbed: components are clamped to [0, 1] and
    the uncertainty is recomputed so the masses sum to exactly one. Anything
    larger raises.
    """
    b = np.asarray(belief, dtype=float)
    if b.ndim != 1:
        raise LengthMismatch("belief must be a vector")
    a = _check_base_rate(base_rate)
    if b.size != a.size:
        raise LengthMismatch(f"belief has {b.size} entries, base rate {a.size}")
    b = _clamp(b, "belief")
    u = float(_clamp(np.array([uncertainty], dtype=float), "uncertainty")[0])
    total = b.sum() + u
    if abs(total - 1.0) > TOL:
        raise SumViolation(f"belief + uncertainty sums to {total!r}, expected 1")
    u = 1.0 - b.sum()
    if u < 0.0:
        b = b / b.sum()
        u = 0.0
    return Opinion(_frozen(b), float(u), _frozen(a))


def vacuous(base_rate) -> Opinion:
    a = _check_base_rate(base_rate)
    return make_opinion(np.zeros_like(a), 1.0, a)


def dogmatic(prob, base_rate) -> Opinion:
    return make_opinion(prob, 0.0, base_rate)


def uniform(n: int) -> np.ndarray:
    if n < 2:
        raise DomainError("domain needs at least 2 outcomes")
    return np.full(n, 1.0 / n)


@dataclass(frozen=True)
class EvidenceVector:
    """Pseudo-observation counts per outcome plus the non-informative prior weight."""

    counts: np.ndarray
    prior_weight: float = 9.0

    def __post_init__(self):
        counts = np.asarray(self.counts, dtype=float)
        if counts.ndim != 1:
            raise LengthMismatch("counts must be a vector")
        if np.any(counts < 0):
            raise NegativeMass("evidence counts must be non-negative")
        if not self.prior_weight > 0:
            raise DomainError("prior weight must be positive")
        object.__setattr__(self, "counts", _frozen(counts))

    @classmethod
    def unit(cls, index: int, n: int, prior_weight: float = 9.0) -> EvidenceVector:
        counts = np.zeros(n)
        counts[index] = 1.0
        return cls(counts, prior_weight)


def from_evidence(ev: EvidenceVector, base_rate) -> Opinion:
    denom = ev.prior_weight + ev.counts.sum()
    return make_opinion(ev.counts / denom, ev.prior_weight / denom, base_rate)


def to_evidence(op: Opinion, prior_weight: float) -> EvidenceVector:
    """Inverse of :func:`from_evidence`; undefined for dogmatic opinions."""
    if op.uncertainty <= 0.0:
        raise DomainError("a dogmatic opinion carries infinite evidence")
    return EvidenceVector(prior_weight * op.belief / op.uncertainty, prior_weight)


def project(op: Opinion) -> np.ndarray:
    return op.belief + op.base_rate * op.uncertainty


def _same_size(A: Opinion, B: Opinion):
    if A.size != B.size:
        raise LengthMismatch(f"domains differ: {A.size} vs {B.size}")


def fuse_acbf(A: Opinion, B: Opinion) -> Opinion:
    """Aleatory cumulative belief fusion, ``A ⊕ B``.

    Two limits lie outside the closed form. Both dogmatic: beliefs are averaged
    with equal weight. Both vacuous: vacuous with averaged base rates.
    """
    _same_size(A, B)
    uA, uB = A.uncertainty, B.uncertainty
    if uA == 0.0 and uB == 0.0:
        return make_opinion((A.belief + B.belief) / 2, 0.0,
                            (A.base_rate + B.base_rate) / 2)
    if uA == 1.0 and uB == 1.0:
        return vacuous((A.base_rate + B.base_rate) / 2)
    denom = uA + uB - uA * uB
    belief = (A.belief * uB + B.belief * uA) / denom
    u = uA * uB / denom
    if np.array_equal(A.base_rate, B.base_rate):
        # the general rule is ill-conditioned as both uncertainties approach 1
        base_rate = A.base_rate
    else:
        a_denom = uA + uB - 2 * uA * uB
        base_rate = (A.base_rate * uB + B.base_rate * uA
                     - (A.base_rate + B.base_rate) * uA * uB) / a_denom
    return make_opinion(belief, u, base_rate)


def unfuse_cbf(C: Opinion, B: Opinion) -> Opinion:
    """Cumulative unfusion: remove B's contribution from the fused opinion C."""
    _same_size(C, B)
    if np.max(np.abs(C.base_rate - B.base_rate)) > TOL:
        raise BaseRateMismatch("unfusion requires equal base rates")
    uB, uC = B.uncertainty, C.uncertainty
    denom = uB - uC + uB * uC
    if denom <= DEGENERATE_TOL:
        raise DegenerateUnfusion(f"unfusion denominator {denom!r} is not positive")
    belief = (C.belief * uB - B.belief * uC) / denom
    return make_opinion(belief, uB * uC / denom, C.base_rate)


def trust_discount(A: Opinion, p_d: float) -> Opinion:
    if not 0.0 <= p_d <= 1.0:
        raise DomainError(f"discount probability {p_d!r} outside [0, 1]")
    belief = p_d * A.belief
    return make_opinion(belief, 1.0 - belief.sum(), A.base_rate)


def projected_distance(A: Opinion, B: Opinion) -> float:
    _same_size(A, B)
    return 0.5 * float(np.abs(project(A) - project(B)).sum())


def degree_of_conflict(A: Opinion, B: Opinion) -> float:
    """Projected distance scaled by conjunctive certainty; lies in [0, 1]."""
    cc = (1.0 - A.uncertainty) * (1.0 - B.uncertainty)
    return min(1.0, max(0.0, projected_distance(A, B) * cc))
