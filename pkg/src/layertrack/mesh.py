"""Piecewise-uniform Shishkin mesh around the fixed interface and the outflow layer."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidMesh

# intervals per piece, in units of N/8:
# [0, d-s1], [d-s1, d], [d, d+s2], [d+s2, 1-s], [1-s, 1]
PIECE_EIGHTHS = (3, 1, 1, 2, 1)


def transition_points(epsilon: float, N: int, d: float, T: float, delta: float, alpha: float, d_final=None):
    """Return (sigma1, sigma2, sigma).

    ``d_final`` is the layer position at T; it defaults to the value implied by
    ``delta`` so callers holding only the horizon diagnostics need not pass it.
    """
    _check_N(N)
    if not 0.0 < delta < 1.0:
        raise InvalidMesh(f"delta={delta} must lie in (0, 1)")
    if not alpha > 0.0:
        raise InvalidMesh(f"alpha={alpha} must be positive")
    if not epsilon > 0.0:
        raise InvalidMesh(f"epsilon={epsilon} must be positive")
    if d_final is None:
        d_final = 1.0 - delta * (1.0 - d)
    lnN = math.log(N)
    sigma1 = min(d / 4.0, 2.0 * math.sqrt(T * epsilon) * lnN)
    sigma2 = min(1.0 - d_final, d / 4.0, 2.0 * math.sqrt(T * epsilon / delta) * lnN)
    sigma = min((1.0 - (d + sigma2)) / 2.0, 2.0 * epsilon / (alpha * delta) * lnN)
    if min(sigma1, sigma2, sigma) <= 0.0:
        raise InvalidMesh(f"non-positive transition point ({sigma1}, {sigma2}, {sigma})")
    if d + sigma2 > 1.0 - 2.0 * sigma:
        raise InvalidMesh("interior and boundary layer pieces overlap")
    return sigma1, sigma2, sigma


@dataclass(frozen=True)
class SpaceMesh:
    N: int
    nodes: np.ndarray
    sigma1: float
    sigma2: float
    sigma: float
    d: float

    @property
    def d_index(self) -> int:
        return self.N // 2

    @property
    def h(self) -> np.ndarray:
        """h[i-1] = x_i - x_{i-1}, i = 1..N."""
        return np.diff(self.nodes)

    @property
    def breakpoints(self) -> tuple[float, ...]:
        return (0.0, self.d - self.sigma1, self.d, self.d + self.sigma2, 1.0 - self.sigma, 1.0)

    @property
    def piece_counts(self) -> tuple[int, ...]:
        return tuple(k * self.N // 8 for k in PIECE_EIGHTHS)


@dataclass(frozen=True)
class TimeMesh:
    M: int
    T: float

    @property
    def k(self) -> float:
        return self.T / self.M

    @property
    def nodes(self) -> np.ndarray:
        # t_M == T exactly
        return self.T * np.arange(self.M + 1) / self.M


def _check_N(N: int):
    if N < 8 or N % 8:
        raise InvalidMesh(f"N must be divisible by 8 (got {N})")


def build_space_mesh(N: int, d: float, sigmas) -> SpaceMesh:
    """Uniform nodes on each of the five pieces, in the ratio 3:1:1:2:1 (eighths of N)."""
    _check_N(N)
    sigma1, sigma2, sigma = sigmas
    edges = (0.0, d - sigma1, d, d + sigma2, 1.0 - sigma, 1.0)
    if any(b <= a for a, b in zip(edges, edges[1:])):
        raise InvalidMesh(f"mesh pieces overlap or are empty: {edges}")
    n1, n2, n3, n4, n5 = (k * N // 8 for k in PIECE_EIGHTHS)
    x = np.empty(N + 1)
    i = np.arange
    x[0:n1] = edges[1] * i(n1) / n1
    # pieces touching d are anchored to it so x[N/2] == d exactly
    x[n1 : n1 + n2] = d - sigma1 * (n2 - i(n2)) / n2
    m = n1 + n2
    x[m : m + n3] = d + sigma2 * i(n3) / n3
    m += n3
    x[m : m + n4] = edges[3] + (edges[4] - edges[3]) * i(n4) / n4
    m += n4
    x[m : m + n5] = edges[4] + sigma * i(n5) / n5
    x[N] = 1.0
    if not np.all(np.diff(x) > 0.0):
        raise InvalidMesh("mesh nodes are not strictly increasing")
    return SpaceMesh(N=N, nodes=x, sigma1=sigma1, sigma2=sigma2, sigma=sigma, d=d)
