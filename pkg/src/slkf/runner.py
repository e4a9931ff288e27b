"""Run a scenario end to end and read/write its trace and summary files."""
from __future__ import annotations

import csv
import json
import math
import os
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import kalman as kf
from .assessment import AssessmentState, Event, initial_record
from .consistency import NisWindow, nis, time_avg_nis_band
from .errors import IoError, SLKFError
from .sim import Scenario, simulate

CSV_HEADER = ["k", "sensor", "z", "z_pred", "s", "nis", "avg_nis", "ci_lo", "ci_hi",
              "delta", "u_delta", "event"]
FLOAT_COLUMNS = ["z", "z_pred", "s", "nis", "avg_nis", "ci_lo", "ci_hi", "delta", "u_delta"]


class SensorRunError(SLKFError):
    """A numerical failure inside one sensor's pipeline."""

    def __init__(self, sensor: str, step: int, cause: Exception):
        self.sensor, self.step, self.cause = sensor, step, cause
        super().__init__(f"{sensor} failed at step {step}: {type(cause).__name__}: {cause}")


@dataclass(frozen=True)
class TraceRow:
    k: int
    sensor: str
    z: float
    z_pred: float
    s: float
    nis: float | None
    avg_nis: float | None
    ci_lo: float | None
    ci_hi: float | None
    delta: float
    u_delta: float
    event: str


@dataclass
class RunOutput:
    sensors: dict = field(default_factory=dict)  # sensor name -> list[TraceRow]

    def rows(self):
        """All rows sorted by (sensor, k)."""
        for name in sorted(self.sensors):
            yield from sorted(self.sensors[name], key=lambda r: r.k)

    def column(self, sensor: str, name: str) -> np.ndarray:
        return np.array([np.nan if getattr(r, name) is None else getattr(r, name)
                         for r in self.sensors[sensor]], dtype=float)


def run_sensor(s: Scenario, name: str, zs) -> list[TraceRow]:
    model = kf.make_cv_model(s.dt, s.assumed_sigma_v, s.assumed_sigma_w)
    window = NisWindow(s.nis_window)
    assessor = AssessmentState.initial(s.assessment)
    k = 0
    try:
        state = kf.init_state([zs[0]], model, s.v_prior_std)
        # no innovation exists for the initialising measurement; its prediction
        # is the prior itself, so its evidence lands in the central bin
        pred = kf.measurement_prediction(state, model)
        rec = initial_record(assessor)
        rows = [TraceRow(0, name, float(zs[0]), float(pred.z_pred[0]), float(pred.S[0, 0]),
                         None, None, None, None, rec.delta, rec.u_delta, rec.event.value)]
        assessor.ingest(pred, [zs[0]])
        for k in range(1, len(zs)):
            prior = kf.predict(state, model)
            state, residual, pred = kf.update(prior, model, [zs[k]])
            eps = nis(residual, pred.S)
            avg = window.push(eps)
            band = time_avg_nis_band(len(window), model.m, s.confidence)
            rec = assessor.step(pred, [zs[k]])
            event = rec.event
            if event is Event.NONE and not window.full:
                event = Event.WARMUP
            rows.append(TraceRow(k, name, float(zs[k]), float(pred.z_pred[0]),
                                 float(pred.S[0, 0]), eps, avg, band.lo, band.hi,
                                 rec.delta, rec.u_delta, event.value))
    except (SLKFError, ArithmeticError, ValueError) as exc:
        raise SensorRunError(name, k, exc) from exc
    return rows


def run_scenario(s: Scenario) -> RunOutput:
    trace = simulate(s)
    return RunOutput({name: run_sensor(s, name, zs)
                      for name, zs in zip(s.sensor_names, trace.measurements)})


def _fmt(value) -> str:
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return ""
    return format(value, ".12g")


def write_csv(out: RunOutput, path) -> None:
    try:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(CSV_HEADER)
            for r in out.rows():
                writer.writerow([r.k, r.sensor] + [_fmt(getattr(r, c)) for c in FLOAT_COLUMNS]
                                + [r.event])
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def read_csv(path) -> RunOutput:
    out = RunOutput()
    try:
        with open(path, newline="") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames != CSV_HEADER:
                raise IoError(f"{path}: unexpected header {reader.fieldnames}")
            for rec in reader:
                values = {c: (float(rec[c]) if rec[c] != "" else None) for c in FLOAT_COLUMNS}
                row = TraceRow(k=int(rec["k"]), sensor=rec["sensor"], event=rec["event"],
                               **values)
                out.sensors.setdefault(row.sensor, []).append(row)
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    except (KeyError, TypeError, ValueError) as exc:
        raise IoError(f"{path}: malformed trace: {exc}") from exc
    return out


def summarize(out: RunOutput) -> dict:
    summary = {}
    for name, rows in sorted(out.sensors.items()):
        deltas = [r.delta for r in rows]
        banded = [r for r in rows if r.avg_nis is not None and r.event != Event.WARMUP.value]
        inside = sum(r.ci_lo <= r.avg_nis <= r.ci_hi for r in banded)
        summary[name] = {
            "rows": len(rows),
            "mean_delta": float(np.mean(deltas)) if rows else None,
            "max_delta": float(np.max(deltas)) if rows else None,
            "final_u_delta": rows[-1].u_delta if rows else None,
            "td_count": sum(r.event == Event.TRUST_DISCOUNT.value for r in rows),
            "reset_count": sum(r.event == Event.LONG_TERM_RESET.value for r in rows),
            "avg_nis_in_band": inside / len(banded) if banded else None,
        }
    return summary


def run_command(s: Scenario, out_dir) -> RunOutput:
    """Run ``s`` and write ``trace.csv`` and ``summary.json`` into ``out_dir``."""
    out_dir = Path(out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise IoError(f"cannot create output directory {out_dir}: {exc}") from exc
    if not os.access(out_dir, os.W_OK):
        raise IoError(f"output directory {out_dir} is not writable")
    out = run_scenario(s)
    write_csv(out, out_dir / "trace.csv")
    doc = {"scenario": s.name, "seed": s.seed, "steps": s.steps, "sensors": summarize(out)}
    try:
        with open(out_dir / "summary.json", "w", newline="") as fh:
            json.dump(doc, fh, indent=2, sort_keys=True)
            fh.write("\n")
    except OSError as exc:
        raise IoError(f"cannot write summary: {exc}") from exc
    return out
