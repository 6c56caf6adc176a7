import dataclasses

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from layertrack.errors import OutOfRange
from layertrack.postprocess import (
    PHYSICAL_POINTS,
    bilinear_eval,
    bilinear_grid,
    export_csv,
    read_csv,
    reconstruct_u,
    write_csv,
)
from layertrack.solver import solve

from conftest import constant_problem


@pytest.fixture(scope="module")
def sol1():
    from layertrack.problem import make_example1

    return solve(make_example1(), 2.0**-10, 32, 16)


@pytest.fixture(scope="module")
def planar(sol1):
    X, Tg = np.meshgrid(sol1.space_mesh.nodes, sol1.time_mesh.nodes, indexing="ij")
    return dataclasses.replace(sol1, Y=2 * X + 3 * Tg)


def test_nodes_reproduced(sol1):
    x, t = sol1.space_mesh.nodes, sol1.time_mesh.nodes
    for i in (0, 5, 16, 31, 32):
        for j in (0, 7, 16):
            assert bilinear_eval(sol1, x[i], t[j]) == sol1.Y[i, j]


def test_cell_centre_is_mean(sol1):
    x, t = sol1.space_mesh.nodes, sol1.time_mesh.nodes
    i, j = 10, 4
    xc, tc = 0.5 * (x[i] + x[i + 1]), 0.5 * (t[j] + t[j + 1])
    corners = sol1.Y[i : i + 2, j : j + 2]
    assert bilinear_eval(sol1, xc, tc) == pytest.approx(corners.mean(), abs=1e-15)


def test_bilinear_reproduces_planes(planar):
    gen = np.random.default_rng(7)
    x = gen.uniform(0, 1, 100)
    t = gen.uniform(0, planar.problem.T, 100)
    np.testing.assert_allclose(bilinear_eval(planar, x, t), 2 * x + 3 * t, atol=1e-14)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(0, 1), min_size=1, max_size=6), st.lists(st.floats(0, 0.5), min_size=1, max_size=6))
def test_grid_matches_pointwise(sol1, xs, ts):
    G = bilinear_grid(sol1, xs, ts)
    X, Tg = np.meshgrid(xs, ts, indexing="ij")
    np.testing.assert_allclose(G, bilinear_eval(sol1, X, Tg), atol=1e-14)


@pytest.mark.parametrize("xt", [(-0.1, 0.1), (1.1, 0.1), (0.5, -0.01), (0.5, 0.51)])
def test_out_of_range(sol1, xt):
    with pytest.raises(OutOfRange):
        bilinear_eval(sol1, *xt)


def test_reconstruct_without_jump():
    p = constant_problem(c=0.4)
    sol = dataclasses.replace(solve(p, 0.01, 16, 8), Y=None)
    X, Tg = np.meshgrid(sol.space_mesh.nodes, sol.time_mesh.nodes, indexing="ij")
    sol = dataclasses.replace(sol, Y=np.sin(3 * X) + Tg)
    for s, t in ((0.1, 0.2), (0.77, 0.4), (0.3, 0.5)):
        x = sol.singular_context().ctx.forward_map(s, t)
        assert reconstruct_u(sol, s, t) == bilinear_eval(sol, x, t)


def test_reconstruct_recovers_boundary_data(sol1):
    for t in sol1.time_mesh.nodes[1:]:
        assert reconstruct_u(sol1, 1.0, float(t)) == pytest.approx(1.0, abs=1e-14)
        assert reconstruct_u(sol1, 0.0, float(t)) == pytest.approx(-2.0, abs=1e-14)


def test_reconstruct_initial_data(sol1):
    s = np.array([0.0, 0.1, 0.3, 0.9])
    np.testing.assert_allclose(reconstruct_u(sol1, s, 0.0), [-2, -2, 1, 1], atol=1e-14)


def test_reconstruct_far_right_adds_full_jump():
    from layertrack.problem import make_example1

    sol = solve(make_example1(), 2.0**-20, 32, 16)
    sc = sol.singular_context()
    s, t = 0.6, 0.25
    y = bilinear_eval(sol, sc.ctx.forward_map(s, t), t)
    assert reconstruct_u(sol, s, t) == pytest.approx(y + 3.0, abs=1e-14)


def test_csv_transformed(sol1, tmp_path):
    path = tmp_path / "y.csv"
    export_csv(sol1, "transformed", path)
    lines = path.read_text().splitlines()
    header = [ln for ln in lines if ln.startswith("#")]
    assert len(lines) == len(header) + 1 + 33 * 17
    meta, cols, rows = read_csv(path)
    assert cols == ["x", "t", "y"]
    assert meta["N"] == "32" and meta["M"] == "16" and meta["example"] == "1"
    assert float(meta["epsilon"]) == 2.0**-10
    assert float(meta["d_T"]) == sol1.curve.d_final
    np.testing.assert_array_equal(rows[:, 2], sol1.Y.T.ravel())


def test_csv_physical(sol1, tmp_path):
    path = tmp_path / "u.csv"
    export_csv(sol1, "physical", path)
    meta, cols, rows = read_csv(path)
    assert cols == ["s", "t", "u"]
    assert rows.shape == (PHYSICAL_POINTS * 17, 3)
    lines = path.read_text().splitlines()
    assert len(lines) == len(meta) + 1 + PHYSICAL_POINTS * 17


@pytest.mark.parametrize("mode", ["transformed", "physical"])
def test_csv_round_trip_is_byte_identical(sol1, tmp_path, mode):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    export_csv(sol1, mode, a)
    write_csv(b, *read_csv(a))
    assert a.read_bytes() == b.read_bytes()


def test_bad_mode(sol1, tmp_path):
    with pytest.raises(ValueError):
        export_csv(sol1, "polar", tmp_path / "x.csv")
