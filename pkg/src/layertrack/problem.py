"""Problem definitions for convection-diffusion with a discontinuous initial profile.

The PDE in physical coordinates (s, t) on (0,1) x (0,T] is

    -eps u_ss + a(s,t) u_s + b(s,t) u + u_t = f(s,t),

with initial data given as two smooth branches meeting at a jump location ``d``.
All coefficient callbacks must accept numpy arrays (or floats) and broadcast.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import numpy as np

from .errors import NegativeReaction, NonFiniteJump, NonPositiveConvection, ProblemError

Field2 = Callable[[np.ndarray, np.ndarray], np.ndarray]
Field1 = Callable[[np.ndarray], np.ndarray]

AUTO_GRID = 101
AUTO_MARGIN = 0.999


def constant2(c: float) -> Field2:
    return lambda s, t: np.full(np.broadcast(s, t).shape, c, dtype=float)


def constant1(c: float) -> Field1:
    return lambda x: np.full(np.shape(x), c, dtype=float)


def evaluate2(fn: Field2, s, t) -> np.ndarray:
    """Evaluate a (s,t) callback and broadcast the result to the input shape."""
    s = np.asarray(s, dtype=float)
    t = np.asarray(t, dtype=float)
    shape = np.broadcast(s, t).shape
    return np.broadcast_to(np.asarray(fn(s, t), dtype=float), shape)


def evaluate1(fn: Field1, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    return np.broadcast_to(np.asarray(fn(x), dtype=float), x.shape)


@dataclass(frozen=True)
class ProblemSpec:
    """Coefficients and data of one problem instance.

    ``b_hat=None`` means the reaction term is identically zero, which switches
    off the damping factor along the characteristic. ``characteristic`` may
    carry a closed-form layer path ``d(t)``; when present it replaces numerical
    integration.
    """

    name: str
    a_hat: Field2
    f_hat: Field2
    phi_left: Field1
    phi_right: Field1
    d: float
    T: float
    u_left: Field1
    u_right: Field1
    b_hat: Optional[Field2] = None
    alpha: Union[float, str] = "auto"
    characteristic: Optional[Field1] = field(default=None, compare=False)
    example_id: Optional[int] = None

    def __post_init__(self):
        if not 0.0 < self.d < 1.0:
            raise ProblemError(f"jump location d={self.d} must lie in (0, 1)")
        if not self.T > 0.0:
            raise ProblemError(f"final time T={self.T} must be positive")
        if isinstance(self.alpha, str):
            if self.alpha != "auto":
                raise ProblemError(f"alpha must be a positive number or 'auto', got {self.alpha!r}")
        elif not self.alpha > 0.0:
            raise ProblemError(f"alpha={self.alpha} must be positive")

    @property
    def has_reaction(self) -> bool:
        return self.b_hat is not None

    @property
    def phi_minus(self) -> float:
        return float(evaluate1(self.phi_left, self.d))

    @property
    def phi_plus(self) -> float:
        return float(evaluate1(self.phi_right, self.d))

    @property
    def jump(self) -> float:
        return self.phi_plus - self.phi_minus

    def a(self, s, t) -> np.ndarray:
        return evaluate2(self.a_hat, s, t)

    def b(self, s, t) -> np.ndarray:
        if self.b_hat is None:
            return np.zeros(np.broadcast(np.asarray(s), np.asarray(t)).shape)
        return evaluate2(self.b_hat, s, t)

    def f(self, s, t) -> np.ndarray:
        return evaluate2(self.f_hat, s, t)

    def phi(self, s) -> np.ndarray:
        """Initial data; the right branch is used at s == d."""
        s = np.asarray(s, dtype=float)
        return np.where(s < self.d, evaluate1(self.phi_left, s), evaluate1(self.phi_right, s))

    def boundary(self, side: int, t) -> np.ndarray:
        fn = self.u_left if side == 0 else self.u_right
        return evaluate1(fn, t)


@dataclass(frozen=True)
class ValidationReport:
    min_a: float
    alpha: float
    min_b: float
    b_nonnegative: bool
    jump: float
    dphi_jump: float
    dphi_jump_zero: bool
    a_s_at_d: float
    b_s_at_d: float
    warnings: tuple[str, ...]


def _sample_grid(p: ProblemSpec, n: int):
    s = np.linspace(0.0, 1.0, n)
    t = np.linspace(0.0, p.T, n)
    return np.meshgrid(s, t, indexing="ij")


def validate(p: ProblemSpec, grid_density: int = AUTO_GRID) -> ValidationReport:
    """Check positivity of the coefficients and report the regularity assumptions."""
    if grid_density < 2:
        raise ValueError("grid_density must be at least 2")
    S, Tg = _sample_grid(p, grid_density)
    a = p.a(S, Tg)
    min_a = float(a.min())
    if not np.isfinite(min_a) or min_a <= 0.0:
        raise NonPositiveConvection(f"convection coefficient is not positive (min sampled value {min_a})")
    b = p.b(S, Tg)
    min_b = float(b.min())
    if min_b < 0.0:
        raise NegativeReaction(f"reaction coefficient is negative (min sampled value {min_b})")
    jump = p.jump
    if not math.isfinite(jump):
        raise NonFiniteJump(f"initial-data jump {jump} is not finite")

    alpha = AUTO_MARGIN * min_a if p.alpha == "auto" else float(p.alpha)

    h = 1e-5
    d = p.d
    left = evaluate1(p.phi_left, np.array([d - 2 * h, d - h, d]))
    right = evaluate1(p.phi_right, np.array([d, d + h, d + 2 * h]))
    dphi_left = (3 * left[2] - 4 * left[1] + left[0]) / (2 * h)
    dphi_right = (-3 * right[0] + 4 * right[1] - right[2]) / (2 * h)
    dphi_jump = float(dphi_right - dphi_left)
    scale = 1.0 + abs(dphi_left) + abs(dphi_right)
    dphi_zero = abs(dphi_jump) <= 1e-6 * scale

    hs = 1e-6
    a_s = float((p.a(d + hs, 0.0) - p.a(d - hs, 0.0)) / (2 * hs))
    b_s = float((p.b(d + hs, 0.0) - p.b(d - hs, 0.0)) / (2 * hs))

    warnings = []
    if not dphi_zero:
        warnings.append("[phi'](d) != 0")
    if abs(a_s) > 1e-7 * (1.0 + abs(float(p.a(d, 0.0)))):
        warnings.append("a_s(d,0) != 0")
    if p.has_reaction and abs(b_s) > 1e-7 * (1.0 + abs(float(p.b(d, 0.0)))):
        warnings.append("b_s(d,0) != 0")
    return ValidationReport(
        min_a=min_a,
        alpha=alpha,
        min_b=min_b,
        b_nonnegative=min_b >= 0.0,
        jump=jump,
        dphi_jump=dphi_jump,
        dphi_jump_zero=dphi_zero,
        a_s_at_d=a_s,
        b_s_at_d=b_s,
        warnings=tuple(warnings),
    )


def effective_alpha(p: ProblemSpec) -> float:
    if p.alpha != "auto":
        return float(p.alpha)
    return validate(p).alpha


def example1_characteristic(t):
    """Closed-form layer path of example 1."""
    e = np.exp(-9.0 * np.asarray(t, dtype=float) / 20.0)
    return (1.1 - 0.7 * e) / (1.0 + e)


def example2_characteristic(t):
    """Closed-form layer path of example 2: solution of d' = 1 + d^2, d(0) = 0.1."""
    return np.tan(np.asarray(t, dtype=float) + math.atan(0.1))


def example2_damping(t):
    """Closed-form damping factor exp(-int_0^t b(d(r), r) dr) of example 2."""
    t = np.asarray(t, dtype=float)
    return (np.cos(t) - 0.1 * np.sin(t)) * np.exp(-(t**2) / 2.0)


def make_example1(exact_characteristic: bool = False) -> ProblemSpec:
    """Space-dependent convection, no reaction, jump of 3 at s = 0.2."""
    return ProblemSpec(
        name="example1",
        a_hat=lambda s, t: (0.9**2 - (s - 0.2) ** 2) / 4.0 + 0.0 * t,
        f_hat=lambda s, t: 4.0 * s * (1.0 - s) * t + t**2,
        phi_left=constant1(-2.0),
        phi_right=constant1(1.0),
        d=0.2,
        T=0.5,
        u_left=constant1(-2.0),
        u_right=constant1(1.0),
        b_hat=None,
        characteristic=example1_characteristic if exact_characteristic else None,
        example_id=1,
    )


def make_example2(exact_characteristic: bool = False) -> ProblemSpec:
    """Convection 1 + s^2 with reaction s + t, jump of 3 at s = 0.1."""
    return ProblemSpec(
        name="example2",
        a_hat=lambda s, t: 1.0 + s**2 + 0.0 * t,
        f_hat=lambda s, t: 4.0 * s * (1.0 - s) * t + t**2,
        phi_left=constant1(-2.0),
        phi_right=constant1(1.0),
        d=0.1,
        T=0.5,
        u_left=constant1(-2.0),
        u_right=constant1(1.0),
        b_hat=lambda s, t: s + t,
        characteristic=example2_characteristic if exact_characteristic else None,
        example_id=2,
    )


EXAMPLES = {1: make_example1, 2: make_example2}


def get_example(example_id: int, **kwargs) -> ProblemSpec:
    try:
        factory = EXAMPLES[example_id]
    except KeyError:
        raise ProblemError(f"unknown example id {example_id}; choose from {sorted(EXAMPLES)}") from None
    return factory(**kwargs)
