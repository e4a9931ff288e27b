"""JSON scenario configuration: parsing, validation and emission.

A config names a builtin scenario (``jumps``, ``drift``, ``velocity_change``)
and optionally overrides fields, or sets ``"scenario": "custom"`` and supplies
at least ``steps`` and ``sensors``. Example::

    {"scenario": "jumps", "seed": 7, "assessment": {"theta": 0.3}}
"""
from __future__ import annotations

import dataclasses
import json
import math
import numbers

from .assessment import AssessmentConfig
from .errors import DomainError, ParseError, RangeError, SchemaError
from .sim import BUILTIN_NAMES, NoiseProfile, Scenario, VelocityProfile, builtin_scenario

CUSTOM = "custom"
SCALAR_FIELDS = {
    "steps": int, "dt": float, "seed": int, "assumed_sigma_w": float,
    "assumed_sigma_v": float, "nis_window": int, "truth_sigma_v": float,
    "v_prior_std": float, "confidence": float,
}
ASSESSMENT_FIELDS = {
    "n_x": int, "prior_weight": float, "n_st": int, "n_c": int,
    "theta": float, "p_d": float, "td_target": str,
}
TOP_LEVEL = {"scenario", "velocity", "sensors", "assessment", *SCALAR_FIELDS}
DEFAULT_VELOCITY = 10.0
DEFAULT_DT = 1.0


def _coerce(field: str, value, kind):
    if kind is str:
        if not isinstance(value, str):
            raise SchemaError(field, f"{field!r} must be a string")
        return value
    if isinstance(value, bool) or not isinstance(value, numbers.Real):
        raise SchemaError(field, f"{field!r} must be a number")
    if not math.isfinite(value):
        raise RangeError(f"{field!r} must be finite, got {value!r}")
    if kind is int:
        if value != int(value):
            raise SchemaError(field, f"{field!r} must be an integer")
        return int(value)
    return float(value)


def _check_keys(doc: dict, allowed, where: str):
    for key in doc:
        if key not in allowed:
            raise SchemaError(key, f"unknown field {key!r} in {where}")


def parse_noise(doc, field: str = "sensors") -> NoiseProfile:
    """Accepts ``{"sigma": s}``, ``{"kind": "piecewise_constant", "segments": [[k, s], ...]}``
    or ``{"kind": "linear_drift", "sigma_start": a, "sigma_end": b, "steps": n}``."""
    if not isinstance(doc, dict):
        raise SchemaError(field, f"{field!r} entries must be objects")
    try:
        if "sigma" in doc:
            _check_keys(doc, {"sigma"}, field)
            return NoiseProfile.constant(_coerce(f"{field}.sigma", doc["sigma"], float))
        kind = doc.get("kind")
        if kind == "piecewise_constant":
            _check_keys(doc, {"kind", "segments"}, field)
            segs = doc.get("segments")
            if not isinstance(segs, list):
                raise SchemaError(f"{field}.segments")
            return NoiseProfile.piecewise(*(
                (_coerce(f"{field}.segments", a, int), _coerce(f"{field}.segments", b, float))
                for a, b in (_pair(seg, f"{field}.segments") for seg in segs)))
        if kind == "linear_drift":
            _check_keys(doc, {"kind", "sigma_start", "sigma_end", "steps"}, field)
            values = []
            for key, kind_ in (("sigma_start", float), ("sigma_end", float), ("steps", int)):
                if key not in doc:
                    raise SchemaError(f"{field}.{key}")
                values.append(_coerce(f"{field}.{key}", doc[key], kind_))
            return NoiseProfile.drift(*values)
        if kind is None:
            raise SchemaError(f"{field}.kind")
        raise SchemaError(f"{field}.kind", f"unknown noise profile kind {kind!r}")
    except (SchemaError, RangeError):
        raise
    except DomainError as exc:
        raise RangeError(f"{field}: {exc}") from exc


def _pair(seg, field):
    if not isinstance(seg, list) or len(seg) != 2:
        raise SchemaError(field, f"{field!r} entries must be [start, sigma] pairs")
    return seg


def parse_velocity(doc) -> VelocityProfile:
    """A bare number means constant velocity; otherwise ``{"pieces": [[start, mode, value], ...]}``."""
    try:
        if not isinstance(doc, bool) and isinstance(doc, numbers.Real):
            return VelocityProfile.constant(float(doc))
        if not isinstance(doc, dict) or not isinstance(doc.get("pieces"), list):
            raise SchemaError("velocity.pieces")
        _check_keys(doc, {"pieces"}, "velocity")
        pieces = []
        for p in doc["pieces"]:
            if not isinstance(p, list) or len(p) != 3:
                raise SchemaError("velocity.pieces", "pieces must be [start, mode, value]")
            pieces.append((_coerce("velocity.pieces", p[0], int),
                           _coerce("velocity.pieces", p[1], str),
                           _coerce("velocity.pieces", p[2], float)))
        return VelocityProfile(tuple(pieces))
    except (SchemaError, RangeError):
        raise
    except DomainError as exc:
        raise RangeError(f"velocity: {exc}") from exc


def parse_assessment(doc, base: AssessmentConfig) -> AssessmentConfig:
    if not isinstance(doc, dict):
        raise SchemaError("assessment", "'assessment' must be an object")
    _check_keys(doc, ASSESSMENT_FIELDS, "assessment")
    values = {k: _coerce(f"assessment.{k}", v, ASSESSMENT_FIELDS[k]) for k, v in doc.items()}
    return dataclasses.replace(base, **values)


def config_from_dict(doc) -> Scenario:
    if not isinstance(doc, dict):
        raise SchemaError("scenario", "config must be a JSON object")
    if "scenario" not in doc:
        raise SchemaError("scenario")
    _check_keys(doc, TOP_LEVEL, "config")
    name = _coerce("scenario", doc["scenario"], str)
    overrides = {k: _coerce(k, doc[k], kind) for k, kind in SCALAR_FIELDS.items() if k in doc}

    if name == CUSTOM:
        for required in ("steps", "sensors"):
            if required not in doc:
                raise SchemaError(required, f"custom scenarios need {required!r}")
        base = None
    elif name in BUILTIN_NAMES:
        base = builtin_scenario(name)
    else:
        raise SchemaError("scenario", f"unknown scenario {name!r}; choose from "
                          f"{', '.join(BUILTIN_NAMES + (CUSTOM,))}")

    if "sensors" in doc:
        if not isinstance(doc["sensors"], list) or not doc["sensors"]:
            raise SchemaError("sensors", "'sensors' must be a non-empty array")
        overrides["sensors"] = tuple(parse_noise(d) for d in doc["sensors"])
    if "velocity" in doc:
        overrides["velocity"] = parse_velocity(doc["velocity"])
    base_assessment = base.assessment if base else AssessmentConfig()
    if "assessment" in doc:
        overrides["assessment"] = parse_assessment(doc["assessment"], base_assessment)

    try:
        if base is None:
            overrides.setdefault("velocity", VelocityProfile.constant(DEFAULT_VELOCITY))
            overrides.setdefault("dt", DEFAULT_DT)
            return Scenario(name=CUSTOM, **overrides)
        return dataclasses.replace(base, **overrides)
    except RangeError:
        raise
    except DomainError as exc:
        raise RangeError(str(exc)) from exc


def parse_config(text: str) -> Scenario:
    """Parse and validate a JSON config document into a :class:`Scenario`."""
    try:
        doc = json.loads(text)
    except (json.JSONDecodeError, UnicodeDecodeError, TypeError) as exc:
        raise ParseError(f"malformed config: {exc}") from exc
    return config_from_dict(doc)


def noise_to_dict(p: NoiseProfile) -> dict:
    if p.kind == "linear_drift":
        s0, s1, n = p.segments[0]
        return {"kind": "linear_drift", "sigma_start": s0, "sigma_end": s1, "steps": n}
    return {"kind": "piecewise_constant", "segments": [[k, s] for k, s in p.segments]}


def scenario_to_dict(s: Scenario) -> dict:
    """Full config document; ``parse_config`` of its JSON gives back ``s``."""
    doc = {"scenario": s.name if s.name in BUILTIN_NAMES else CUSTOM}
    doc.update({k: getattr(s, k) for k in SCALAR_FIELDS})
    doc["sensors"] = [noise_to_dict(p) for p in s.sensors]
    doc["velocity"] = {"pieces": [list(p) for p in s.velocity.pieces]}
    doc["assessment"] = dataclasses.asdict(s.assessment)
    return doc


def scenario_to_config(s: Scenario) -> str:
    return json.dumps(scenario_to_dict(s), indent=2) + "\n"
