"""Bilinear interpolant of a discrete solution, reconstruction of u, CSV export."""

from __future__ import annotations

import io
from pathlib import Path

import numpy as np

from .errors import OutOfRange
from .solver import DiscreteSolution

PHYSICAL_POINTS = 201
FLOAT_FMT = "%.17g"


def _locate(nodes: np.ndarray, v: np.ndarray, name: str):
    """Cell index and local weight in [0, 1] for each query."""
    if np.any(v < nodes[0]) or np.any(v > nodes[-1]) or np.any(np.isnan(v)):
        raise OutOfRange(f"{name} outside [{nodes[0]}, {nodes[-1]}]")
    i = np.searchsorted(nodes, v, side="right") - 1
    i = np.clip(i, 0, nodes.size - 2)
    w = (v - nodes[i]) / (nodes[i + 1] - nodes[i])
    return i, w


def bilinear_eval(sol: DiscreteSolution, x, t):
    """Value of the bilinear interpolant of Y at (x, t); broadcasts."""
    x, t = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(t, dtype=float))
    i, wx = _locate(sol.space_mesh.nodes, x, "x")
    j, wt = _locate(sol.time_mesh.nodes, t, "t")
    Y = sol.Y
    out = ((1 - wx) * (1 - wt) * Y[i, j] + wx * (1 - wt) * Y[i + 1, j]
           + (1 - wx) * wt * Y[i, j + 1] + wx * wt * Y[i + 1, j + 1])
    return float(out) if out.ndim == 0 else out


def bilinear_grid(sol: DiscreteSolution, xs, ts) -> np.ndarray:
    """Interpolant on the tensor grid xs x ts, shape (len(xs), len(ts))."""
    xs = np.asarray(xs, dtype=float)
    ts = np.asarray(ts, dtype=float)
    i, wx = _locate(sol.space_mesh.nodes, xs, "x")
    j, wt = _locate(sol.time_mesh.nodes, ts, "t")
    Y = sol.Y
    along_x = (1 - wx)[:, None] * Y[i, :] + wx[:, None] * Y[i + 1, :]
    return (1 - wt)[None, :] * along_x[:, j] + wt[None, :] * along_x[:, j + 1]


def reconstruct_u(sol: DiscreteSolution, s, t: float):
    """u(s, t) = Ybar(x(s, t), t) + 0.5 [phi](d) I(t) psi0(s, t)."""
    sc = sol.singular_context()
    x = sc.ctx.forward_map(s, t)
    y = np.asarray(bilinear_eval(sol, x, t))
    out = y + 0.5 * sol.problem.jump * sc.damping_I(t) * np.asarray(sc.psi0_hat(s, t))
    return float(out) if out.ndim == 0 else out


def _metadata(sol: DiscreteSolution, mode: str) -> dict:
    p = sol.problem
    return {
        "problem": p.name,
        "example": p.example_id if p.example_id is not None else "",
        "mode": mode,
        "epsilon": FLOAT_FMT % sol.epsilon,
        "N": sol.N,
        "M": sol.M,
        "d": FLOAT_FMT % p.d,
        "d_T": FLOAT_FMT % sol.curve.d_final,
        "delta": FLOAT_FMT % sol.delta,
    }


def solution_rows(sol: DiscreteSolution, mode: str = "transformed") -> tuple[list[str], np.ndarray]:
    if mode == "transformed":
        X, Tg = np.meshgrid(sol.space_mesh.nodes, sol.time_mesh.nodes, indexing="xy")
        return ["x", "t", "y"], np.column_stack([X.ravel(), Tg.ravel(), sol.Y.T.ravel()])
    if mode == "physical":
        s = np.linspace(0.0, 1.0, PHYSICAL_POINTS)
        blocks = []
        for t in sol.time_mesh.nodes:
            u = reconstruct_u(sol, s, float(t))
            blocks.append(np.column_stack([s, np.full_like(s, t), u]))
        return ["s", "t", "u"], np.vstack(blocks)
    raise ValueError(f"mode must be 'transformed' or 'physical', got {mode!r}")


def write_csv(path, meta: dict, columns: list[str], rows: np.ndarray) -> None:
    buf = io.StringIO()
    for key, value in meta.items():
        buf.write(f"# {key}={value}\n")
    buf.write(",".join(columns) + "\n")
    np.savetxt(buf, rows, fmt=FLOAT_FMT, delimiter=",")
    Path(path).write_text(buf.getvalue())


def read_csv(path) -> tuple[dict, list[str], np.ndarray]:
    meta = {}
    columns: list[str] = []
    data_lines = []
    for line in Path(path).read_text().splitlines():
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition("=")
            meta[key] = value
        elif not columns:
            columns = line.split(",")
        elif line:
            data_lines.append(line)
    rows = np.loadtxt(data_lines, delimiter=",", ndmin=2) if data_lines else np.empty((0, len(columns)))
    return meta, columns, rows


def export_csv(sol: DiscreteSolution, mode: str, path) -> None:
    """Write (x, t, y) on the mesh, or (s, t, u) on a uniform s-grid per time level."""
    columns, rows = solution_rows(sol, mode)
    write_csv(path, _metadata(sol, mode), columns, rows)
