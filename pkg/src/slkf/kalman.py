"""Linear Kalman filter and the constant-velocity model used in every experiment."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, DomainError, NonPositiveDefinite


def _sym(M: np.ndarray) -> np.ndarray:
    return (M + M.T) / 2


def cholesky(S: np.ndarray) -> np.ndarray:
    """Lower Cholesky factor; raises NonPositiveDefinite instead of LinAlgError."""
    try:
        L = np.linalg.cholesky(S)
    except np.linalg.LinAlgError as exc:
        raise NonPositiveDefinite(f"matrix is not positive definite: {S.tolist()}") from exc
    if not np.all(np.isfinite(L)) or np.any(np.diag(L) <= 0):
        raise NonPositiveDefinite(f"matrix is not positive definite: {S.tolist()}")
    return L


def chol_solve(L: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve (L Lᵀ) x = b given the lower factor L."""
    y = np.linalg.solve(L, b)
    return np.linalg.solve(L.T, y)


@dataclass(frozen=True)
class GaussState:
    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        mean = np.atleast_1d(np.asarray(self.mean, dtype=float))
        cov = np.atleast_2d(np.asarray(self.cov, dtype=float))
        if cov.shape != (mean.size, mean.size):
            raise DimensionMismatch(f"cov shape {cov.shape} does not match mean length {mean.size}")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)


@dataclass(frozen=True)
class LinearModel:
    F: np.ndarray
    Q: np.ndarray
    H: np.ndarray
    R: np.ndarray
    T: float = 1.0

    def __post_init__(self):
        for name in ("F", "Q", "H", "R"):
            object.__setattr__(self, name, np.atleast_2d(np.asarray(getattr(self, name), dtype=float)))
        n = self.F.shape[0]
        m = self.H.shape[0]
        if self.F.shape != (n, n) or self.Q.shape != (n, n):
            raise DimensionMismatch("F and Q must be square with equal size")
        if self.H.shape != (m, n) or self.R.shape != (m, m):
            raise DimensionMismatch("H must be m×n and R m×m")

    @property
    def n(self) -> int:
        return self.F.shape[0]

    @property
    def m(self) -> int:
        return self.H.shape[0]


@dataclass(frozen=True)
class MeasPrediction:
    z_pred: np.ndarray
    S: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "z_pred", np.atleast_1d(np.asarray(self.z_pred, dtype=float)))
        object.__setattr__(self, "S", np.atleast_2d(np.asarray(self.S, dtype=float)))

    @property
    def chol(self) -> np.ndarray:
        return cholesky(self.S)


def _check(state: GaussState, model: LinearModel):
    if state.mean.size != model.n:
        raise DimensionMismatch(f"state has {state.mean.size} entries, model expects {model.n}")


def predict(state: GaussState, model: LinearModel) -> GaussState:
    _check(state, model)
    F = model.F
    return GaussState(F @ state.mean, _sym(F @ state.cov @ F.T + model.Q))


def measurement_prediction(state: GaussState, model: LinearModel) -> MeasPrediction:
    _check(state, model)
    H = model.H
    S = _sym(H @ state.cov @ H.T + model.R)
    cholesky(S)
    return MeasPrediction(H @ state.mean, S)


def update(state: GaussState, model: LinearModel, z):
    """Measurement update of a predicted state.

    Returns ``(posterior, residual, prediction)``. The posterior covariance uses
    the subtractive form ``(I - K H) P``.
    """
    pred = measurement_prediction(state, model)
    z = np.atleast_1d(np.asarray(z, dtype=float))
    if z.shape != pred.z_pred.shape:
        raise DimensionMismatch(f"measurement has shape {z.shape}, expected {pred.z_pred.shape}")
    residual = z - pred.z_pred
    L = pred.chol
    PHt = state.cov @ model.H.T
    K = chol_solve(L, PHt.T).T
    mean = state.mean + K @ residual
    cov = _sym((np.eye(model.n) - K @ model.H) @ state.cov)
    return GaussState(mean, cov), residual, pred


def cv_process_noise(T: float, sigma_v: float) -> np.ndarray:
    """Discrete white-noise acceleration covariance for a 1-D constant-velocity state."""
    return sigma_v ** 2 * np.array([[T ** 4 / 4, T ** 3 / 2],
                                    [T ** 3 / 2, T ** 2]])


def make_cv_model(T: float, sigma_v: float, sigma_w: float) -> LinearModel:
    if not T > 0:
        raise DomainError(f"time step must be positive, got {T!r}")
    if not sigma_w > 0:
        raise DomainError(f"measurement noise must be positive, got {sigma_w!r}")
    if sigma_v < 0:
        raise DomainError(f"process noise must be non-negative, got {sigma_v!r}")
    return LinearModel(F=[[1.0, T], [0.0, 1.0]],
                       Q=cv_process_noise(T, sigma_v),
                       H=[[1.0, 0.0]],
                       R=[[sigma_w ** 2]],
                       T=T)


def init_state(z0, model: LinearModel, v_prior_std: float = 40.0) -> GaussState:
    """Prior from a first position measurement: zero velocity, wide velocity spread."""
    z0 = np.atleast_1d(np.asarray(z0, dtype=float))
    if z0.size != 1 or model.n != 2 or model.m != 1:
        raise DimensionMismatch("init_state expects a scalar position and a 1-D CV model")
    return GaussState([z0[0], 0.0], np.diag([model.R[0, 0], v_prior_std ** 2]))
