"""Scenario definitions and deterministic ground-truth / measurement generation."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .assessment import AssessmentConfig
from .errors import DomainError, UnknownScenario
from .rng import gaussian_stream

TRUTH_STREAM = 0


@dataclass(frozen=True)
class NoiseProfile:
    """True measurement-noise standard deviation over time.

    ``piecewise_constant``: ``segments`` is a tuple of ``(start_step, sigma)``
    with the first start at 0. ``linear_drift``: ``segments`` holds a single
    ``(sigma_start, sigma_end, steps)`` and ``sigma(k) = s0 + (s1 - s0)(k+1)/steps``,
    held at ``s1`` afterwards.
    """

    kind: str
    segments: tuple

    def __post_init__(self):
        segs = tuple(tuple(float(v) for v in seg) for seg in self.segments)
        if self.kind == "piecewise_constant":
            if not segs or any(len(s) != 2 for s in segs):
                raise DomainError("piecewise_constant needs (start, sigma) segments")
            starts = [s[0] for s in segs]
            if starts[0] != 0 or any(b <= a for a, b in zip(starts, starts[1:])):
                raise DomainError("segment starts must increase strictly from 0")
            if any(s[1] < 0 for s in segs):
                raise DomainError("noise sigmas must be non-negative")
            segs = tuple((int(a), b) for a, b in segs)
        elif self.kind == "linear_drift":
            if len(segs) != 1 or len(segs[0]) != 3:
                raise DomainError("linear_drift needs one (sigma_start, sigma_end, steps)")
            s0, s1, n = segs[0]
            if s0 < 0 or s1 < 0 or n < 1:
                raise DomainError("drift needs non-negative sigmas and positive steps")
            segs = ((s0, s1, int(n)),)
        else:
            raise DomainError(f"unknown noise profile kind {self.kind!r}")
        object.__setattr__(self, "segments", segs)

    @classmethod
    def constant(cls, sigma: float) -> NoiseProfile:
        return cls("piecewise_constant", ((0, sigma),))

    @classmethod
    def piecewise(cls, *segments) -> NoiseProfile:
        return cls("piecewise_constant", tuple(segments))

    @classmethod
    def drift(cls, sigma_start: float, sigma_end: float, steps: int) -> NoiseProfile:
        return cls("linear_drift", ((sigma_start, sigma_end, steps),))

    def sigma(self, k: int) -> float:
        if self.kind == "linear_drift":
            s0, s1, n = self.segments[0]
            return s0 + (s1 - s0) * min(k + 1, n) / n
        value = self.segments[0][1]
        for start, sigma in self.segments:
            if k >= start:
                value = sigma
        return value

    def sigmas(self, n: int) -> np.ndarray:
        return np.array([self.sigma(k) for k in range(n)])


@dataclass(frozen=True)
class VelocityProfile:
    """Piecewise ground-truth velocity.

    Each piece is ``(start_step, mode, value)``: ``constant`` holds ``value`` m/s,
    ``ramp`` adds ``value`` m/s per step starting from the previous step's
    velocity. Constant pieces must continue the preceding velocity.
    """

    pieces: tuple
    _anchors: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        pieces = tuple((int(s), str(m), float(v)) for s, m, v in self.pieces)
        if not pieces or pieces[0][0] != 0:
            raise DomainError("first velocity piece must start at step 0")
        if pieces[0][1] != "constant":
            raise DomainError("first velocity piece must be constant")
        starts = [p[0] for p in pieces]
        if any(b <= a for a, b in zip(starts, starts[1:])):
            raise DomainError("velocity piece starts must increase strictly")
        anchors = []
        prev = None
        for i, (start, mode, value) in enumerate(pieces):
            if mode not in ("constant", "ramp"):
                raise DomainError(f"unknown velocity mode {mode!r}")
            if i > 0:
                p_start, p_mode, p_value = pieces[i - 1]
                prev = anchors[-1] + (p_value * (start - p_start) if p_mode == "ramp" else 0.0)
            if mode == "constant":
                if prev is not None and abs(prev - value) > 1e-9:
                    raise DomainError(f"velocity jumps from {prev} to {value} at step {start}")
                anchors.append(value)
            else:
                anchors.append(prev)
        object.__setattr__(self, "pieces", pieces)
        object.__setattr__(self, "_anchors", tuple(anchors))

    @classmethod
    def constant(cls, v: float) -> VelocityProfile:
        return cls(((0, "constant", v),))

    def velocity(self, k: int) -> float:
        idx = 0
        for i, (start, _, _) in enumerate(self.pieces):
            if k >= start:
                idx = i
        start, mode, value = self.pieces[idx]
        if mode == "constant":
            return value
        return self._anchors[idx] + value * (k - start + 1)

    def velocities(self, n: int) -> np.ndarray:
        return np.array([self.velocity(k) for k in range(n)])


@dataclass(frozen=True)
class Scenario:
    name: str
    steps: int
    dt: float
    sensors: tuple
    velocity: VelocityProfile
    assumed_sigma_w: float = 1.0
    assumed_sigma_v: float = 1.0
    seed: int = 0
    assessment: AssessmentConfig = field(default_factory=AssessmentConfig)
    nis_window: int = 35
    # white-noise acceleration added to the nominal truth trajectory
    truth_sigma_v: float = 0.0
    v_prior_std: float = 40.0
    confidence: float = 0.95

    def __post_init__(self):
        object.__setattr__(self, "sensors", tuple(self.sensors))
        if not self.sensors:
            raise DomainError("a scenario needs at least one sensor")
        if self.steps < 2:
            raise DomainError("a scenario needs at least 2 steps")
        if not self.dt > 0:
            raise DomainError("dt must be positive")
        if not self.assumed_sigma_w > 0 or self.assumed_sigma_v < 0:
            raise DomainError("assumed noise levels out of range")
        if self.truth_sigma_v < 0 or not self.v_prior_std > 0:
            raise DomainError("truth_sigma_v must be >= 0 and v_prior_std > 0")
        if self.nis_window < 1:
            raise DomainError("nis_window must be positive")
        if not 0 < self.confidence < 1:
            raise DomainError("confidence must lie in (0, 1)")
        if not 0 <= self.seed < 2 ** 64:
            raise DomainError("seed must be an unsigned 64-bit integer")

    @property
    def sensor_names(self) -> list[str]:
        return [f"sensor{i + 1}" for i in range(len(self.sensors))]


@dataclass(frozen=True)
class SensorTrace:
    positions: np.ndarray
    velocities: np.ndarray
    measurements: tuple

    @property
    def truth(self) -> np.ndarray:
        return np.column_stack([self.positions, self.velocities])


BUILTIN_NAMES = ("jumps", "drift", "velocity_change")


def builtin_scenario(name: str, seed: int = 0) -> Scenario:
    """The three reference experiments.

    All truths move at a nominal velocity profile. ``drift`` additionally draws
    white-noise acceleration with the filter's own process noise (1), so the
    unaffected sensor is exactly matched. ``jumps`` and ``velocity_change`` follow
    their profiles exactly; the latter's filter assumes a larger process noise of 5.
    """
    if name == "jumps":
        return Scenario(
            name="jumps", steps=315, dt=1.0,
            sensors=(NoiseProfile.piecewise((0, 1.0), (106, 3.0), (211, 2.0)),
                     NoiseProfile.piecewise((0, 3.0), (106, 1.0))),
            velocity=VelocityProfile.constant(10.0), seed=seed)
    if name == "drift":
        return Scenario(
            name="drift", steps=135, dt=1.0,
            sensors=(NoiseProfile.drift(1.0, 3.0, 135), NoiseProfile.constant(1.0)),
            velocity=VelocityProfile.constant(10.0), truth_sigma_v=1.0, seed=seed)
    if name == "velocity_change":
        return Scenario(
            name="velocity_change", steps=380, dt=1.0,
            sensors=(NoiseProfile.constant(1.0), NoiseProfile.constant(1.0)),
            velocity=VelocityProfile(((0, "constant", 35.0), (77, "ramp", -0.4),
                                      (153, "constant", 4.6), (229, "ramp", 0.4),
                                      (305, "constant", 35.0))),
            assumed_sigma_v=5.0, seed=seed)
    raise UnknownScenario(f"unknown scenario {name!r}; choose from {', '.join(BUILTIN_NAMES)}")


def gen_truth(s: Scenario) -> tuple[np.ndarray, np.ndarray]:
    """Positions and velocities for steps 0..n-1, starting at position 0.

    The velocity profile fixes the nominal trajectory. With ``truth_sigma_v > 0``
    a white-noise-acceleration deviation (stream 0) is added on top.
    """
    n, T = s.steps, s.dt
    pos = np.zeros(n)
    vel = s.velocity.velocities(n)
    if s.truth_sigma_v > 0:
        noise = gaussian_stream(s.seed, TRUTH_STREAM)
        dp = dv = 0.0
        dev_p, dev_v = np.zeros(n), np.zeros(n)
        for k in range(1, n):
            a = s.truth_sigma_v * next(noise)
            dp, dv = dp + dv * T + a * T * T / 2, dv + a * T
            dev_p[k], dev_v[k] = dp, dv
    for k in range(1, n):
        pos[k] = pos[k - 1] + vel[k - 1] * T
    if s.truth_sigma_v > 0:
        pos = pos + dev_p
        vel = vel + dev_v
    return pos, vel


def gen_measurements(positions, profile: NoiseProfile, stream) -> np.ndarray:
    return np.array([p + profile.sigma(k) * next(stream) for k, p in enumerate(positions)])


def simulate(s: Scenario) -> SensorTrace:
    pos, vel = gen_truth(s)
    meas = tuple(gen_measurements(pos, profile, gaussian_stream(s.seed, i + 1))
                 for i, profile in enumerate(s.sensors))
    return SensorTrace(pos, vel, meas)
