"""Closed-form singular functions carried by the jump in the initial data.

psi0 = erfc((d(t) - s) / (2 sqrt(eps t))) holds the discontinuity; psi1..psi4
are the weakly singular family built from it by the recurrence

    psi_k = sqrt(g) (d - x) psi_{k-1} + 2 eps t (k - 1) psi_{k-2}.

With a reaction term the singular part is damped by
I(t) = exp(-int_0^t b(d(r), r) dr) along the layer path.
"""

from __future__ import annotations

import math

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy import special

from .errors import OutOfRange
from .problem import ProblemSpec
from .transform import TransformContext

GAUSS_POINTS = 5
BASE_PANELS = 256
QUAD_TOL = 1e-12
MAX_PANELS = 2**16

_GL_NODES, _GL_WEIGHTS = leggauss(GAUSS_POINTS)


def erfc(z):
    """Complementary error function, elementwise."""
    out = special.erfc(z)
    return float(out) if np.ndim(out) == 0 else out


class SingularContext:
    def __init__(self, epsilon: float, ctx: TransformContext, p: ProblemSpec):
        if not epsilon > 0.0:
            raise ValueError(f"epsilon={epsilon} must be positive")
        self.epsilon = float(epsilon)
        self.ctx = ctx
        self.p = p
        self._damping: dict[float, float] = {}

    def psi0_hat(self, s, t: float):
        """erfc((d(t) - s) / (2 sqrt(eps t))); one-sided limits 0, 1, 2 at t = 0."""
        s = np.asarray(s, dtype=float)
        if t == 0.0:
            d = self.ctx.d
            out = np.where(s < d, 0.0, np.where(s > d, 2.0, 1.0))
        else:
            out = special.erfc((self.ctx.position(t) - s) / (2.0 * math.sqrt(self.epsilon * t)))
        return float(out) if out.ndim == 0 else out

    def _scaled_distance(self, x, t: float) -> np.ndarray:
        """sqrt(g) (d - x), which equals d(t) - s."""
        x = np.asarray(x, dtype=float)
        return self.ctx.sqrt_g_nodes(x, t) * (self.ctx.d - x)

    def exp_factor(self, x, t: float):
        """E = exp(-g (x - d)^2 / (4 eps t)); underflows to exactly 0."""
        r = self._scaled_distance(x, t)
        out = np.exp(-(r * r) / (4.0 * self.epsilon * t))
        return float(out) if out.ndim == 0 else out

    def psi_all(self, x, t: float, kmax: int = 4) -> list:
        """[psi_0, ..., psi_kmax] in the computational frame."""
        if not 0 <= kmax <= 4:
            raise ValueError("kmax must be in 0..4")
        x = np.asarray(x, dtype=float)
        r = self._scaled_distance(x, t)
        if t == 0.0:
            d = self.ctx.d
            base = np.where(x > d, 2.0, np.where(x < d, 0.0, 1.0))
            return [base * (d - x) ** k if k else base for k in range(kmax + 1)]
        et = self.epsilon * t
        psi = [special.erfc(r / (2.0 * math.sqrt(et)))]
        if kmax >= 1:
            E = np.exp(-(r * r) / (4.0 * et))
            psi.append(r * psi[0] - 2.0 * math.sqrt(et / math.pi) * E)
        for k in range(2, kmax + 1):
            psi.append(r * psi[k - 1] + 2.0 * et * (k - 1) * psi[k - 2])
        return psi

    def psi_transformed(self, k: int, x, t: float):
        out = self.psi_all(x, t, k)[k]
        return float(out) if np.ndim(out) == 0 else out

    def damping_I(self, t: float) -> float:
        t = float(t)
        if not 0.0 <= t <= self.p.T:
            raise OutOfRange(f"t={t} outside [0, {self.p.T}]")
        if not self.p.has_reaction or t == 0.0:
            return 1.0
        try:
            return self._damping[t]
        except KeyError:
            pass
        panels = BASE_PANELS
        prev = self._integral(t, panels)
        while panels < MAX_PANELS:
            panels *= 2
            cur = self._integral(t, panels)
            if abs(cur - prev) < QUAD_TOL:
                break
            prev = cur
        value = math.exp(-cur)
        self._damping[t] = value
        return value

    def _integral(self, t: float, panels: int) -> float:
        """Composite Gauss-Legendre for int_0^t b(d(r), r) dr."""
        edges = np.linspace(0.0, t, panels + 1)
        half = 0.5 * (edges[1:] - edges[:-1])
        mid = 0.5 * (edges[1:] + edges[:-1])
        r = (mid[:, None] + half[:, None] * _GL_NODES[None, :]).ravel()
        vals = self.p.b(self.ctx.curve(r), r).reshape(panels, GAUSS_POINTS)
        return float(np.sum(half * (vals @ _GL_WEIGHTS)))


def psi0_hat(sc: SingularContext, s, t):
    return sc.psi0_hat(s, t)


def psi_transformed(sc: SingularContext, k: int, x, t):
    return sc.psi_transformed(k, x, t)


def damping_I(sc: SingularContext, t):
    return sc.damping_I(t)
