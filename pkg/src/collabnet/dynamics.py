"""Two-compartment growth model for developing-country connections.

    dx/dt = alpha*x + beta*x*y
    dy/dt = 0

``x`` is split into cumulative self-driven connections ``S`` (fed by
``alpha*x``) and foreign-driven connections ``F`` (fed by ``beta*x*y``), so
that ``x = S + F`` and the foreign share is ``100*F/x``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateRates,
    EmptyTrajectory,
    InvalidParameter,
    NonPositiveHorizon,
    NonPositiveStep,
)

DEFAULT_DT = 1e-3
DEFAULT_T_END = 50.0

TRAJECTORY_HEADER = "t,x,S,F,y,pct_foreign"
FIG3_HEADER = "self_connections,pct_foreign"


@dataclass(frozen=True)
class ModelParams:
    """Rates and initial state.

    Defaults are illustrative choices, not fitted values.
    """

    alpha: float = 0.05
    beta: float = 0.01
    y0: float = 5.0
    x0: float = 1.0
    p0: float = 1.0

    def __post_init__(self):
        for name in ("alpha", "beta", "y0", "x0", "p0"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidParameter(f"{name} must be finite")
        if self.alpha < 0 or self.beta < 0 or self.y0 < 0:
            raise InvalidParameter("alpha, beta and y0 must be >= 0")
        if not self.x0 > 0:
            raise InvalidParameter(f"x0 must be > 0, got {self.x0}")
        if not 0.0 <= self.p0 <= 1.0:
            raise InvalidParameter(f"p0 must lie in [0, 1], got {self.p0}")

    @property
    def foreign_rate(self) -> float:
        return self.beta * self.y0

    @property
    def rate(self) -> float:
        """Total growth rate r = alpha + beta*y0."""
        return self.alpha + self.beta * self.y0


@dataclass(frozen=True)
class TrajectoryPoint:
    t: float
    x: float
    S: float
    F: float
    y: float
    pct_foreign: float


@dataclass(frozen=True)
class Trajectory:
    params: ModelParams
    dt: float
    t: np.ndarray
    x: np.ndarray
    S: np.ndarray
    F: np.ndarray

    @property
    def y(self) -> np.ndarray:
        return np.full_like(self.t, self.params.y0)

    @property
    def pct_foreign(self) -> np.ndarray:
        return 100.0 * self.F / self.x

    def __len__(self):
        return len(self.t)

    @property
    def points(self) -> list[TrajectoryPoint]:
        y0 = self.params.y0
        return [
            TrajectoryPoint(float(t), float(x), float(s), float(f), y0, float(100.0 * f / x))
            for t, x, s, f in zip(self.t, self.x, self.S, self.F)
        ]


def derivatives(state, params: ModelParams) -> tuple[float, float, float]:
    """``(dx/dt, dS/dt, dF/dt)`` for ``state = (x, S, F)``."""
    x = state[0]
    ds = params.alpha * x
    df = params.beta * x * params.y0
    return ds + df, ds, df


def _rk4(x, s, f, alpha, g, h):
    # dS = alpha*x and dF = g*x depend on x alone, so the stages only need x
    k1 = alpha * x + g * x
    x2 = x + 0.5 * h * k1
    k2 = alpha * x2 + g * x2
    x3 = x + 0.5 * h * k2
    k3 = alpha * x3 + g * x3
    x4 = x + h * k3
    k4 = alpha * x4 + g * x4
    xbar = (x + 2.0 * x2 + 2.0 * x3 + x4) * (h / 6.0)
    ds = alpha * xbar
    df = g * xbar
    return x + (ds + df), s + ds, f + df


def _point(t, x, s, f, params) -> TrajectoryPoint:
    return TrajectoryPoint(t, x, s, f, params.y0, 100.0 * f / x)


def initial_point(params: ModelParams) -> TrajectoryPoint:
    f = params.p0 * params.x0
    return _point(0.0, params.x0, params.x0 - f, f, params)


def step_rk4(point: TrajectoryPoint, params: ModelParams, dt: float) -> TrajectoryPoint:
    """One classical RK4 step of ``(x, S, F)``."""
    if not dt > 0:
        raise NonPositiveStep(f"dt must be > 0, got {dt}")
    x, s, f = _rk4(point.x, point.S, point.F, params.alpha, params.foreign_rate, dt)
    return _point(point.t + dt, x, s, f, params)


def closed_form_x(params: ModelParams, t) -> float:
    return params.x0 * np.exp(params.rate * np.asarray(t, dtype=float))


def closed_form_foreign(params: ModelParams, t):
    """Exact F(t); S(t) is ``closed_form_x - closed_form_foreign``."""
    r = params.rate
    t = np.asarray(t, dtype=float)
    if r == 0:
        return np.full_like(t, params.p0 * params.x0)
    return params.p0 * params.x0 + params.foreign_rate / r * params.x0 * np.expm1(r * t)


def closed_form_share(params: ModelParams, t):
    """Exact foreign fraction F/x = p* + (p0 - p*) exp(-r t)."""
    r = params.rate
    t = np.asarray(t, dtype=float)
    if r == 0:
        return np.full_like(t, params.p0)
    p_star = params.foreign_rate / r
    return p_star + (params.p0 - p_star) * np.exp(-r * t)


def time_grid(t_end: float, dt: float) -> np.ndarray:
    """0, dt, 2dt, ... with a final shortened step landing on ``t_end``."""
    n = int(math.floor(t_end / dt))
    grid = np.arange(n + 1, dtype=float) * dt
    if t_end - grid[-1] > 1e-9 * dt:
        grid = np.append(grid, t_end)
    else:
        grid[-1] = t_end
    return grid


def simulate(params: ModelParams, t_end: float = DEFAULT_T_END, dt: float = DEFAULT_DT) -> Trajectory:
    if not dt > 0:
        raise NonPositiveStep(f"dt must be > 0, got {dt}")
    if not t_end > 0:
        raise NonPositiveHorizon(f"t_end must be > 0, got {t_end}")
    if dt > t_end:
        raise NonPositiveStep(f"dt ({dt}) must not exceed t_end ({t_end})")

    grid = time_grid(t_end, dt)
    n = len(grid)
    xs = [0.0] * n
    ss = [0.0] * n
    fs = [0.0] * n
    p = initial_point(params)
    x, s, f = p.x, p.S, p.F
    xs[0], ss[0], fs[0] = x, s, f
    alpha, g = params.alpha, params.foreign_rate
    hs = np.diff(grid).tolist()
    for i, h in enumerate(hs, start=1):
        x, s, f = _rk4(x, s, f, alpha, g, h)
        xs[i], ss[i], fs[i] = x, s, f
    return Trajectory(params, dt, grid, np.array(xs), np.array(ss), np.array(fs))


def fig3_curve(traj: Trajectory) -> list[tuple[float, float]]:
    """``(S, pct_foreign)`` per trajectory point, in time order."""
    if len(traj) == 0:
        raise EmptyTrajectory("trajectory has no points")
    return list(zip(traj.S.tolist(), traj.pct_foreign.tolist()))


def foreign_share_asymptote(params: ModelParams) -> float:
    """Limiting foreign share, 100*beta*y0/(alpha + beta*y0)."""
    r = params.rate
    if r == 0:
        raise DegenerateRates("alpha + beta*y0 = 0: the foreign share never moves")
    return 100.0 * params.foreign_rate / r


def _g9(v: float) -> str:
    return f"{v:.9g}"


def trajectory_to_csv(traj: Trajectory) -> str:
    y = _g9(traj.params.y0)
    lines = [TRAJECTORY_HEADER]
    for t, x, s, f, pct in zip(traj.t, traj.x, traj.S, traj.F, traj.pct_foreign):
        lines.append(f"{_g9(t)},{_g9(x)},{_g9(s)},{_g9(f)},{y},{_g9(pct)}")
    return "\n".join(lines) + "\n"


def fig3_to_csv(curve) -> str:
    lines = [FIG3_HEADER]
    lines.extend(f"{_g9(s)},{_g9(p)}" for s, p in curve)
    return "\n".join(lines) + "\n"
