"""Two-mesh convergence experiments over a set of perturbation parameters.

For each eps, D(N) is the max difference between the bilinear interpolants of
the (N, M) and (2N, 2M) solutions over the union of both meshes; the order is
log2(D(N) / D(2N)). The uniform row takes the max over eps.
"""

from __future__ import annotations

import csv
import io
import logging
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .characteristic import integrate_characteristic
from .errors import LayerTrackError, NonPositiveDifference
from .postprocess import bilinear_grid
from .problem import ProblemSpec
from .solver import DiscreteSolution, solve

logger = logging.getLogger(__name__)

THREADS_ENV = "LAYERTRACK_THREADS"


def default_threads() -> int:
    env = os.environ.get(THREADS_ENV)
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def mesh_difference(coarse: DiscreteSolution, fine: DiscreteSolution) -> float:
    """Max |Ybar_coarse - Ybar_fine| over the union of both tensor meshes."""
    xs = np.union1d(coarse.space_mesh.nodes, fine.space_mesh.nodes)
    ts = np.union1d(coarse.time_mesh.nodes, fine.time_mesh.nodes)
    diff = bilinear_grid(coarse, xs, ts) - bilinear_grid(fine, xs, ts)
    return float(np.abs(diff).max())


def two_mesh_difference(p: ProblemSpec, epsilon: float, N: int, M: int) -> float:
    curve = integrate_characteristic(p)
    coarse = solve(p, epsilon, N, M, curve)
    fine = solve(p, epsilon, 2 * N, 2 * M, curve)
    return mesh_difference(coarse, fine)


def order_from_pair(d_coarse: float, d_fine: float) -> float:
    if not (d_coarse > 0.0 and d_fine > 0.0):
        raise NonPositiveDifference(f"differences must be positive (got {d_coarse}, {d_fine})")
    return math.log2(d_coarse / d_fine)


def _orders(D: np.ndarray, N_list: Sequence[int]) -> np.ndarray:
    P = np.full(D.shape, np.nan)
    for k in range(len(N_list) - 1):
        if N_list[k + 1] != 2 * N_list[k]:
            continue
        a, b = D[..., k], D[..., k + 1]
        ok = (a > 0) & (b > 0)
        with np.errstate(invalid="ignore", divide="ignore"):
            P[..., k] = np.where(ok, np.log2(a / b), np.nan)
    return P


@dataclass
class ConvergenceReport:
    """Two-mesh differences D[e, n] and orders P[e, n] for eps = 2^-eps_powers[e], N = N_list[n]."""

    example_id: Optional[int]
    N_list: list[int]
    eps_powers: list[int]
    D: np.ndarray
    P: np.ndarray
    uniform_D: np.ndarray
    uniform_P: np.ndarray
    wall_times: dict = field(default_factory=dict)
    failures: dict = field(default_factory=dict)

    @property
    def epsilons(self) -> list[float]:
        return [2.0 ** -k for k in self.eps_powers]

    def row(self, eps_power: int) -> np.ndarray:
        return self.D[self.eps_powers.index(eps_power)]


def _default_M(N: int) -> int:
    return N


def epsilon_sweep(p: ProblemSpec, N_list: Sequence[int], eps_powers: Sequence[int],
                  M_rule: Callable[[int], int] = _default_M, threads: Optional[int] = None,
                  progress: Optional[Callable[[str], None]] = None) -> ConvergenceReport:
    """Fill the (eps, N) table; solves run in a thread pool, results merge in index order."""
    N_list = [int(n) for n in N_list]
    eps_powers = [int(k) for k in eps_powers]
    if any(b <= a for a, b in zip(N_list, N_list[1:])):
        raise ValueError("N_list must be strictly ascending")
    curve = integrate_characteristic(p)
    sizes = sorted(set(N_list) | {2 * n for n in N_list})
    threads = default_threads() if threads is None else max(1, int(threads))

    def run(eps_power: int, N: int):
        start = time.perf_counter()
        try:
            sol = solve(p, 2.0 ** -eps_power, N, M_rule(N), curve)
            err = None
        except LayerTrackError as exc:
            sol, err = None, exc
        return sol, err, time.perf_counter() - start

    def run_eps(eps_power: int):
        sols = {}
        errs = {}
        times = {}
        for N in sizes:
            sols[N], errs[N], times[N] = run(eps_power, N)
        D = np.full(len(N_list), np.nan)
        for n, N in enumerate(N_list):
            c, f = sols[N], sols[2 * N]
            if c is not None and f is not None:
                D[n] = mesh_difference(c, f)
        if progress:
            progress(f"eps=2^-{eps_power} done")
        return D, times, {N: str(e) for N, e in errs.items() if e is not None}

    if threads == 1:
        results = [run_eps(k) for k in eps_powers]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run_eps, eps_powers))

    D = np.vstack([r[0] for r in results]) if results else np.empty((0, len(N_list)))
    wall = {(k, N): t for k, r in zip(eps_powers, results) for N, t in r[1].items()}
    failures = {(k, N): msg for k, r in zip(eps_powers, results) for N, msg in r[2].items()}
    for key, msg in failures.items():
        logger.warning("cell eps=2^-%d N=%d failed: %s", key[0], key[1], msg)
    if D.shape[0]:
        with np.errstate(all="ignore"):
            uniform = np.where(np.all(np.isnan(D), axis=0), np.nan, np.nanmax(np.where(np.isnan(D), -np.inf, D), axis=0))
    else:
        uniform = np.full(len(N_list), np.nan)
    return ConvergenceReport(
        example_id=p.example_id,
        N_list=N_list,
        eps_powers=eps_powers,
        D=D,
        P=_orders(D, N_list),
        uniform_D=uniform,
        uniform_P=_orders(uniform, N_list),
        wall_times=wall,
        failures=failures,
    )


def _fmt_d(v: float) -> str:
    return "failed" if not np.isfinite(v) else f"{v:.3E}"


def _fmt_p(v: float) -> str:
    return "" if not np.isfinite(v) else f"{v:.3f}"


def render_table(report: ConvergenceReport, fmt: str = "aligned-text") -> str:
    """Per-eps D rows with order rows beneath, uniform rows last."""
    header = [f"N=M={n}" for n in report.N_list]
    rows: list[list[str]] = []
    for e, k in enumerate(report.eps_powers):
        rows.append([f"eps=2^-{k}", "D"] + [_fmt_d(v) for v in report.D[e]])
        rows.append([f"eps=2^-{k}", "P"] + [_fmt_p(v) for v in report.P[e]])
    if report.eps_powers:
        rows.append(["uniform", "D"] + [_fmt_d(v) for v in report.uniform_D])
        rows.append(["uniform", "P"] + [_fmt_p(v) for v in report.uniform_P])

    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["epsilon", "quantity"] + header)
        writer.writerows(rows)
        return buf.getvalue()
    if fmt != "aligned-text":
        raise ValueError(f"unknown table format {fmt!r}")
    table = [["", ""] + header] + [[r[0] if r[1] == "D" else "", r[1]] + r[2:] for r in rows]
    widths = [max(len(r[c]) for r in table) for c in range(len(table[0]))]
    lines = []
    for r in table:
        lines.append("  ".join(cell.rjust(w) for cell, w in zip(r, widths)).rstrip())
    return "\n".join(lines) + "\n"


def parse_table_csv(text: str) -> dict:
    """Inverse of the csv rendering: {(label, quantity): [float | nan, ...]}."""
    reader = csv.reader(io.StringIO(text))
    next(reader)
    out = {}
    for row in reader:
        vals = [float(v) if v not in ("", "failed") else math.nan for v in row[2:]]
        out[(row[0], row[1])] = vals
    return out
