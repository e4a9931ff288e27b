"""Self-assessing Kalman filter: subjective-logic opinions over whitened
innovations, with classical NIS baselines and a reproducible simulation harness.
"""
from .assessment import AssessmentConfig, AssessmentRecord, AssessmentState, Event, run_trace
from .config import parse_config, scenario_to_config
from .consistency import NisWindow, chi2_interval, nees, nis, time_avg_nis_band
from .kalman import GaussState, LinearModel, make_cv_model
from .opinion import Opinion, fuse_acbf, make_opinion, trust_discount, unfuse_cbf
from .runner import RunOutput, run_command, run_scenario, summarize, write_csv
from .sim import NoiseProfile, Scenario, VelocityProfile, builtin_scenario, simulate

__version__ = "0.1.0"

__all__ = [
    "AssessmentConfig", "AssessmentRecord", "AssessmentState", "Event", "run_trace",
    "parse_config", "scenario_to_config",
    "NisWindow", "chi2_interval", "nees", "nis", "time_avg_nis_band",
    "GaussState", "LinearModel", "make_cv_model",
    "Opinion", "fuse_acbf", "make_opinion", "trust_discount", "unfuse_cbf",
    "RunOutput", "run_command", "run_scenario", "summarize", "write_csv",
    "NoiseProfile", "Scenario", "VelocityProfile", "builtin_scenario", "simulate",
]
