"""Piecewise-linear moving map that pins the layer path to the line x = d.

Physical (s, t) and computational (x, t) coordinates are related by

    x = (d / d(t)) s                         for s <= d(t)
    x = 1 - ((1 - d) / (1 - d(t))) (1 - s)   for s >= d(t)

In the computational frame the equation picks up the metric g (squared
stretch factor, discontinuous across x = d) and the convection kappa.
"""

from __future__ import annotations

import numpy as np

from .characteristic import CharacteristicCurve
from .errors import OutOfRange
from .problem import ProblemSpec

LEFT = "left"
RIGHT = "right"


class TransformContext:
    """Map between frames for a fixed layer path; caches d(t) per queried time."""

    def __init__(self, curve: CharacteristicCurve):
        self.curve = curve
        self.d = float(curve.d0)
        self.T = float(curve.T)
        self._cache: dict[float, float] = {}

    def position(self, t: float) -> float:
        t = float(t)
        try:
            return self._cache[t]
        except KeyError:
            pass
        if not 0.0 <= t <= self.T:
            raise OutOfRange(f"t={t} outside [0, {self.T}]")
        v = self.d if t == 0.0 else float(self.curve(t))
        self._cache[t] = v
        return v

    def forward_map(self, s, t: float):
        """Physical s -> computational x at time t."""
        s = _unit(s, "s")
        dt = self.position(t)
        d = self.d
        x = np.where(s <= dt, (d / dt) * s, 1.0 - ((1.0 - d) / (1.0 - dt)) * (1.0 - s))
        # pin the interface exactly
        x = np.where(s == dt, d, x)
        return _unbox(x)

    def inverse_map(self, x, t: float):
        """Computational x -> physical s at time t."""
        x = _unit(x, "x")
        dt = self.position(t)
        d = self.d
        s = np.where(x <= d, (dt / d) * x, 1.0 - ((1.0 - dt) / (1.0 - d)) * (1.0 - x))
        s = np.where(x == d, dt, s)
        return _unbox(s)

    def metric_g(self, side: str, t: float) -> float:
        dt = self.position(t)
        if side == LEFT:
            return (dt / self.d) ** 2
        if side == RIGHT:
            return ((1.0 - dt) / (1.0 - self.d)) ** 2
        raise ValueError(f"side must be {LEFT!r} or {RIGHT!r}, got {side!r}")

    def sqrt_g(self, side: str, t: float) -> float:
        dt = self.position(t)
        return dt / self.d if side == LEFT else (1.0 - dt) / (1.0 - self.d)

    def g_nodes(self, x, t: float) -> np.ndarray:
        """g at each x; the interface takes the left value (it is never used there)."""
        x = np.asarray(x, dtype=float)
        return np.where(x <= self.d, self.metric_g(LEFT, t), self.metric_g(RIGHT, t))

    def sqrt_g_nodes(self, x, t: float) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return np.where(x <= self.d, self.sqrt_g(LEFT, t), self.sqrt_g(RIGHT, t))

    def psi_d(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        d = self.d
        return np.where(x < d, (d - x) / d, (x - d) / (1.0 - d))

    def convection_kappa(self, p: ProblemSpec, x, t: float):
        """Convection coefficient of the computational frame.

        Both one-sided limits at x = d are zero, and that is what is returned there.
        """
        x = _unit(x, "x")
        dt = self.position(t)
        a_x = p.a(self.inverse_map(x, t), t)
        a_d = float(p.a(dt, t))
        root_g = self.sqrt_g_nodes(x, t)
        kappa = root_g * (a_x + a_d * (self.psi_d(x) - 1.0))
        kappa = np.where(x == self.d, 0.0, kappa)
        return _unbox(kappa)


def _unit(v, name):
    v = np.asarray(v, dtype=float)
    if np.any(v < 0.0) or np.any(v > 1.0) or np.any(np.isnan(v)):
        raise OutOfRange(f"{name} outside [0, 1]")
    return v


def _unbox(v):
    return float(v) if np.ndim(v) == 0 else v


def forward_map(ctx: TransformContext, s, t):
    return ctx.forward_map(s, t)


def inverse_map(ctx: TransformContext, x, t):
    return ctx.inverse_map(x, t)


def metric_g(ctx: TransformContext, side: str, t):
    return ctx.metric_g(side, t)


def convection_kappa(ctx: TransformContext, p: ProblemSpec, x, t):
    return ctx.convection_kappa(p, x, t)
