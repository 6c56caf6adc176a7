"""Path of the interior layer: d'(t) = a(d(t), t), d(0) = d."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.interpolate import CubicHermiteSpline

from .errors import LayerHitsBoundary, OutOfRange
from .problem import ProblemSpec, evaluate1

BASE_STEPS = 2048
MAX_STEPS = 2**20
BOUNDARY_GUARD = 1e-12


@dataclass(frozen=True)
class CharacteristicCurve:
    """Dense representation of the layer path on [0, T].

    ``t``, ``d`` and ``dd`` hold the integrator nodes (time, position, slope).
    Between nodes the curve is the cubic Hermite interpolant of those values;
    with the slopes taken from the ODE itself it is monotone for any a > 0 at
    the step sizes used here. ``exact`` bypasses the interpolant when a closed
    form is known.
    """

    t: np.ndarray
    d: np.ndarray
    dd: np.ndarray
    d0: float
    T: float
    exact: Optional[Callable] = None
    steps: int = 0
    _spline: Optional[CubicHermiteSpline] = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self._spline is None:
            object.__setattr__(self, "_spline", CubicHermiteSpline(self.t, self.d, self.dd))

    def __call__(self, t):
        return eval_position(self, t)

    @property
    def d_final(self) -> float:
        return float(self(self.T))


def _check_range(c: CharacteristicCurve, t) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    if np.any(t < 0.0) or np.any(t > c.T) or np.any(np.isnan(t)):
        raise OutOfRange(f"time outside [0, {c.T}]")
    return t


def eval_position(c: CharacteristicCurve, t):
    """Layer position d(t); scalar in, float out."""
    t = _check_range(c, t)
    if c.exact is not None:
        out = evaluate1(c.exact, t)
    else:
        out = c._spline(t)
    return float(out) if np.ndim(out) == 0 else np.array(out)


def eval_slope(c: CharacteristicCurve, t):
    t = _check_range(c, t)
    out = c._spline(t, 1)
    return float(out) if np.ndim(out) == 0 else np.array(out)


def rk4_march(a: Callable[[float, float], float], d0: float, T: float, n: int):
    """Classical fourth-order Runge-Kutta with ``n`` equal steps.

    Returns (t, d) at the n + 1 step points. Raises LayerHitsBoundary as
    soon as the path reaches the outflow boundary.
    """
    h = T / n
    t = np.empty(n + 1)
    d = np.empty(n + 1)
    y = float(d0)
    d[0] = y
    t[0] = 0.0
    for j in range(n):
        tj = T * j / n
        k1 = a(y, tj)
        k2 = a(y + 0.5 * h * k1, tj + 0.5 * h)
        k3 = a(y + 0.5 * h * k2, tj + 0.5 * h)
        k4 = a(y + h * k3, tj + h)
        y = y + h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0
        if not y < 1.0 - BOUNDARY_GUARD:
            raise LayerHitsBoundary(f"layer path reaches s=1 near t={tj + h:.6g} (before T={T})")
        d[j + 1] = y
        t[j + 1] = T * (j + 1) / n
    return t, d


def integrate_characteristic(p: ProblemSpec, tol: float = 1e-12) -> CharacteristicCurve:
    """Integrate the layer path of ``p``; step halving until d(T) settles to ``tol``."""
    if not tol > 0.0:
        raise ValueError("tol must be positive")

    def a(s, t):
        return float(p.a(s, t))

    if p.characteristic is not None:
        n = BASE_STEPS
        t = np.linspace(0.0, p.T, n + 1)
        d = np.asarray(evaluate1(p.characteristic, t), dtype=float)
        if np.any(d >= 1.0 - BOUNDARY_GUARD):
            raise LayerHitsBoundary("closed-form layer path reaches s=1 before T")
        dd = np.asarray(p.a(d, t), dtype=float)
        return CharacteristicCurve(t=t, d=d, dd=dd, d0=p.d, T=p.T, exact=p.characteristic, steps=n)

    n = BASE_STEPS
    t, d = rk4_march(a, p.d, p.T, n)
    while True:
        t2, d2 = rk4_march(a, p.d, p.T, 2 * n)
        n *= 2
        converged = abs(d2[-1] - d[-1]) < tol
        t, d = t2, d2
        if converged or n >= MAX_STEPS:
            break
    d[0] = p.d
    dd = np.asarray(p.a(d, t), dtype=float)
    return CharacteristicCurve(t=t, d=d, dd=dd, d0=p.d, T=p.T, steps=n)


@dataclass(frozen=True)
class HorizonDiagnostics:
    delta: float
    A: float
    sup_a: float
    sup_as: float
    sup_ax: float
    gamma_condition_lhs: float
    gamma_condition_ok: bool
    gamma_max: float


def horizon_diagnostics(c: CharacteristicCurve, p: ProblemSpec, samples: int = 201) -> HorizonDiagnostics:
    """Final-time restrictions and the convection bound constant on a sample grid."""
    dT = c.d_final
    delta = (1.0 - dT) / (1.0 - p.d)

    s = np.linspace(0.0, 1.0, samples)
    tt = np.linspace(0.0, p.T, samples)
    S, Tg = np.meshgrid(s, tt, indexing="ij")
    a = np.asarray(p.a(S, Tg))
    a_s = np.gradient(a, s, axis=0, edge_order=2)
    sup_a = float(np.abs(a).max())
    sup_as = float(np.abs(a_s).max())

    # a_x = a_s * ds/dx in the moving frame
    dt = np.asarray(c(tt))
    x = np.linspace(0.0, 1.0, samples)
    X, Tx = np.meshgrid(x, tt, indexing="ij")
    Dt = np.broadcast_to(dt, X.shape)
    left = X <= p.d
    Smap = np.where(left, Dt / p.d * X, 1.0 - (1.0 - Dt) / (1.0 - p.d) * (1.0 - X))
    ds_dx = np.where(left, Dt / p.d, (1.0 - Dt) / (1.0 - p.d))
    h = 1e-6
    as_mapped = (np.asarray(p.a(np.clip(Smap + h, 0, 1), Tx)) - np.asarray(p.a(np.clip(Smap - h, 0, 1), Tx))) / (
        np.clip(Smap + h, 0, 1) - np.clip(Smap - h, 0, 1)
    )
    sup_ax = float(np.abs(as_mapped * ds_dx).max())

    A = (1.0 + p.T * sup_a / p.d) * (sup_ax + sup_a * max(1.0 / p.d, 1.0 / (1.0 - p.d)))
    lhs = 2.0 * p.T / delta * sup_as
    return HorizonDiagnostics(
        delta=delta,
        A=A,
        sup_a=sup_a,
        sup_as=sup_as,
        sup_ax=sup_ax,
        gamma_condition_lhs=lhs,
        gamma_condition_ok=lhs < 1.0,
        gamma_max=1.0 - lhs,
    )
