"""Upwind implicit-Euler scheme on the Shishkin mesh in the computational frame.

Unknown: y = u - 0.5 [phi](d) I(t) psi0, the solution with the leading
singular term removed. At every interior node x_i != d

    -eps delta_x^2 Y + kappa D_x Y + g (b Y + D_t^- Y) = rhs(x_i, t_j)

with kappa D_x split by sign (kappa+ backward, kappa- forward). The node
x_{N/2} = d carries the flux transmission condition instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .characteristic import CharacteristicCurve, horizon_diagnostics, integrate_characteristic
from .errors import SingularSystem, StructureViolation
from .mesh import SpaceMesh, TimeMesh, build_space_mesh, transition_points
from .problem import ProblemSpec, effective_alpha
from .singular import SingularContext
from .transform import LEFT, RIGHT, TransformContext

PIVOT_FLOOR = 1e-300
STRUCTURE_RTOL = 1e-12


@dataclass(frozen=True)
class DiscreteSolution:
    """Grid function Y[i, j] ~ y(x_i, t_j) plus what is needed to evaluate it."""

    Y: np.ndarray
    space_mesh: SpaceMesh
    time_mesh: TimeMesh
    epsilon: float
    problem: ProblemSpec
    curve: CharacteristicCurve
    damping: np.ndarray
    delta: float
    alpha: float

    @property
    def N(self) -> int:
        return self.space_mesh.N

    @property
    def M(self) -> int:
        return self.time_mesh.M

    def singular_context(self) -> SingularContext:
        return SingularContext(self.epsilon, TransformContext(self.curve), self.problem)


class Discretization:
    """Per-solve state: meshes, frame map and singular functions for one (p, eps, N, M)."""

    def __init__(self, p: ProblemSpec, epsilon: float, space_mesh: SpaceMesh, time_mesh: TimeMesh,
                 curve: CharacteristicCurve, check_structure: bool = True):
        self.p = p
        self.epsilon = float(epsilon)
        self.space = space_mesh
        self.time = time_mesh
        self.curve = curve
        self.ctx = TransformContext(curve)
        self.sc = SingularContext(epsilon, self.ctx, p)
        self.check_structure = check_structure

        x = space_mesh.nodes
        N = space_mesh.N
        self.mid = N // 2
        h = np.diff(x)
        self.h_lo = h[:-1]  # h_i for interior i = 1..N-1
        self.h_hi = h[1:]  # h_{i+1}
        self.hbar = 0.5 * (self.h_lo + self.h_hi)
        self.x_int = x[1:-1]
        self.left = self.x_int < p.d

    # -- data -------------------------------------------------------------

    def initial_column(self) -> np.ndarray:
        return initial_value_y(self.p, self.space.nodes)

    def boundary_values(self, t: float) -> tuple[float, float]:
        return boundary_value_y(self.sc, 0, t), boundary_value_y(self.sc, 1, t)

    def rhs(self, x, t: float) -> np.ndarray:
        return rhs_interior(self.sc, x, t)

    # -- one time level ---------------------------------------------------

    def assemble(self, y_prev: np.ndarray, t: float):
        """Tridiagonal system for the interior unknowns Y_1..Y_{N-1} at time t.

        Returns (lower, diag, upper, rhs); lower[0] and upper[-1] are unused.
        """
        lower, diag, upper, source, gk, _ = self._rows(t)
        return lower, diag, upper, source + gk * y_prev[1:-1]

    def _rows(self, t: float):
        """Operator rows at time t split as diag = -(lower + upper) + g/k + g b.

        Returns (lower, diag, upper, source, gk, react) where gk and react are
        zero on the transmission row.
        """
        eps = self.epsilon
        k = self.time.k
        ctx = self.ctx
        x = self.x_int
        hl, hh, hb = self.h_lo, self.h_hi, self.hbar

        g = np.where(self.left, ctx.metric_g(LEFT, t), ctx.metric_g(RIGHT, t))
        kappa = ctx.convection_kappa(self.p, x, t)
        kp = np.maximum(kappa, 0.0)
        km = np.minimum(kappa, 0.0)
        lower = -eps / (hb * hl) - kp / hl
        upper = -eps / (hb * hh) + km / hh
        gk = g / k
        if self.p.has_reaction:
            react = g * self.p.b(ctx.inverse_map(x, t), t)
        else:
            react = np.zeros_like(x)
        source = np.zeros_like(x)
        interior = np.ones(x.shape, dtype=bool)
        j = self.mid - 1
        interior[j] = False
        source[interior] = self.rhs(x[interior], t)

        # flux transmission at x = d, sign chosen so the diagonal is positive
        dt = ctx.position(t)
        lower[j] = -(self.p.d / dt) / hl[j]
        upper[j] = -((1.0 - self.p.d) / (1.0 - dt)) / hh[j]
        gk[j] = 0.0
        react[j] = 0.0
        diag = -(lower + upper) + gk + react

        if self.check_structure:
            self._check_rows(lower, diag, upper, gk, interior)
        return lower, diag, upper, source, gk, react

    @staticmethod
    def _check_rows(lower, diag, upper, gk, interior):
        lo, dg, up = lower[interior], diag[interior], upper[interior]
        if np.any(lo > 0.0) or np.any(up > 0.0) or np.any(dg <= 0.0):
            raise StructureViolation("assembled row breaks the M-matrix sign pattern")
        need = np.abs(lo) + np.abs(up) + gk[interior]
        if np.any(dg < need * (1.0 - STRUCTURE_RTOL)):
            raise StructureViolation("assembled row is not diagonally dominant by g/k")

    def advance_step(self, y_prev: np.ndarray, j: int) -> np.ndarray:
        """Solve for the increment Y^j - Y^{j-1}.

        The residual is formed from neighbour differences, so columns the
        operator annihilates (constants) produce an exactly zero update.
        """
        t = float(self.time.nodes[j])
        lower, diag, upper, source, _, react = self._rows(t)
        y = y_prev[1:-1]
        res = source - react * y - lower * (y_prev[:-2] - y) - upper * (y_prev[2:] - y)
        y0, yN = self.boundary_values(t)
        dy0 = y0 - y_prev[0]
        dyN = yN - y_prev[-1]
        res[0] -= lower[0] * dy0
        res[-1] -= upper[-1] * dyN
        out = np.empty_like(y_prev)
        out[0] = y0
        out[-1] = yN
        out[1:-1] = y + thomas(lower, diag, upper, res)
        return out


def thomas(lower, diag, upper, rhs) -> np.ndarray:
    """Tridiagonal elimination without pivoting.

    Row i reads lower[i] y[i-1] + diag[i] y[i] + upper[i] y[i+1] = rhs[i];
    lower[0] and upper[-1] are ignored.
    """
    n = len(diag)
    a = lower.tolist()
    b = diag.tolist()
    c = upper.tolist()
    r = rhs.tolist()
    cp = [0.0] * n
    dp = [0.0] * n
    piv = b[0]
    if abs(piv) < PIVOT_FLOOR:
        raise SingularSystem("zero pivot in tridiagonal elimination (row 0)")
    cp[0] = c[0] / piv
    dp[0] = r[0] / piv
    for i in range(1, n):
        ai = a[i]
        piv = b[i] - ai * cp[i - 1]
        if abs(piv) < PIVOT_FLOOR:
            raise SingularSystem(f"zero pivot in tridiagonal elimination (row {i})")
        cp[i] = c[i] / piv
        dp[i] = (r[i] - ai * dp[i - 1]) / piv
    y = [0.0] * n
    y[-1] = dp[-1]
    for i in range(n - 2, -1, -1):
        y[i] = dp[i] - cp[i] * y[i + 1]
    return np.array(y)


def initial_value_y(p: ProblemSpec, x) -> np.ndarray:
    """Initial data of y: phi left of d, phi(d-) at d, phi - [phi](d) right of d."""
    x = np.asarray(x, dtype=float)
    left = np.asarray(p.phi_left(x), dtype=float) * np.ones_like(x)
    right = np.asarray(p.phi_right(x), dtype=float) * np.ones_like(x) - p.jump
    out = np.where(x < p.d, left, right)
    out = np.where(x == p.d, p.phi_minus, out)
    return float(out) if out.ndim == 0 else out


def boundary_value_y(sc: SingularContext, side: int, t: float) -> float:
    """u(side, t) - 0.5 [phi](d) I(t) psi0(side, t) for side in {0, 1}."""
    p = sc.p
    u = float(p.boundary(side, t))
    jump = p.jump
    if jump == 0.0:
        return u
    return u - 0.5 * jump * sc.damping_I(t) * sc.psi0_hat(float(side), t)


def rhs_interior(sc: SingularContext, x, t: float):
    """Forcing of the y-equation at interior nodes x != d, t > 0."""
    p = sc.p
    ctx = sc.ctx
    x = np.asarray(x, dtype=float)
    s = ctx.inverse_map(x, t)
    g = ctx.g_nodes(x, t)
    out = g * p.f(s, t)
    jump = p.jump
    if jump != 0.0:
        eps = sc.epsilon
        dt = ctx.position(t)
        damp = sc.damping_I(t)
        a_x = p.a(s, t)
        a_d = float(p.a(dt, t))
        E = sc.exp_factor(x, t)
        out = out + g * 0.5 * jump * (a_d - a_x) / math.sqrt(eps * math.pi * t) * damp * E
        if p.has_reaction:
            b_x = p.b(s, t)
            b_d = float(p.b(dt, t))
            psi0 = sc.psi_transformed(0, x, t)
            out = out + 0.5 * jump * (b_d - b_x) * g * damp * psi0
    return float(out) if np.ndim(out) == 0 else out


def prepare(p: ProblemSpec, epsilon: float, N: int, M: int, curve: Optional[CharacteristicCurve] = None,
            check_structure: bool = True) -> Discretization:
    if M < 1:
        raise ValueError(f"M must be at least 1 (got {M})")
    if not epsilon > 0.0:
        raise ValueError(f"epsilon={epsilon} must be positive")
    if curve is None:
        curve = integrate_characteristic(p)
    delta = (1.0 - curve.d_final) / (1.0 - p.d)
    alpha = effective_alpha(p)
    sig = transition_points(epsilon, N, p.d, p.T, delta, alpha, d_final=curve.d_final)
    space = build_space_mesh(N, p.d, sig)
    time = TimeMesh(M, p.T)
    return Discretization(p, epsilon, space, time, curve, check_structure)


def solve(p: ProblemSpec, epsilon: float, N: int, M: int, curve: Optional[CharacteristicCurve] = None,
          check_structure: bool = True) -> DiscreteSolution:
    """March the scheme from t = 0 to T and return the full space-time grid function."""
    disc = prepare(p, epsilon, N, M, curve, check_structure)
    Y = np.empty((N + 1, M + 1))
    Y[:, 0] = disc.initial_column()
    for j in range(1, M + 1):
        Y[:, j] = disc.advance_step(Y[:, j - 1], j)
    damping = np.array([disc.sc.damping_I(t) for t in disc.time.nodes])
    delta = (1.0 - disc.curve.d_final) / (1.0 - p.d)
    return DiscreteSolution(
        Y=Y,
        space_mesh=disc.space,
        time_mesh=disc.time,
        epsilon=float(epsilon),
        problem=p,
        curve=disc.curve,
        damping=damping,
        delta=delta,
        alpha=effective_alpha(p),
    )


def transmission_residual(sol: DiscreteSolution, j: int) -> float:
    """Discrete flux jump at x = d in column j (j >= 1)."""
    x = sol.space_mesh.nodes
    i = sol.space_mesh.d_index
    y = sol.Y[:, j]
    t = float(sol.time_mesh.nodes[j])
    dt = float(sol.curve(t))
    d = sol.problem.d
    fwd = (y[i + 1] - y[i]) / (x[i + 1] - x[i])
    bwd = (y[i] - y[i - 1]) / (x[i] - x[i - 1])
    return (1.0 - d) / (1.0 - dt) * fwd - d / dt * bwd


def stability_bound(sol: DiscreteSolution) -> float:
    """Right side of the discrete maximum-norm bound with sampled constants."""
    p = sol.problem
    diag = horizon_diagnostics(sol.curve, p)
    s = np.linspace(0.0, 1.0, 201)
    t = np.linspace(0.0, p.T, 201)
    S, Tg = np.meshgrid(s, t, indexing="ij")
    f_sup = float(np.abs(p.f(S, Tg)).max())
    phi_sup = float(max(np.abs(p.phi_left(s[s <= p.d])).max(), np.abs(p.phi_right(s[s >= p.d])).max()))
    return diag.A / diag.delta**2 * (1.0 + f_sup) * p.T + phi_sup + abs(p.jump) + 1.0
