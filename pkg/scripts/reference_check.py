"""Compare the layer-tracking solution with a brute-force reference in the physical frame.

The reference solves -eps u_ss + a u_s + b u + u_t = f directly on a fine
uniform s-mesh (central differences, implicit Euler) from the discontinuous
initial data. It needs no transformation or singular functions, so it is an
independent check of what the layer-tracking scheme converges to.

    python scripts/reference_check.py --example 2 --eps-power 6 --J 8000 --K 20000
"""

from __future__ import annotations

import argparse
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_banded

from layertrack.postprocess import reconstruct_u
from layertrack.problem import get_example
from layertrack.solver import solve


@dataclass
class ReferenceConfig:
    example: int = 2
    eps_power: int = 6
    J: int = 8000  # uniform s-intervals
    K: int = 20000  # time steps
    N_list: tuple = (32, 64, 128, 256)
    samples: int = 401


def reference_solution(p, eps: float, J: int, K: int):
    s = np.linspace(0.0, 1.0, J + 1)
    h = 1.0 / J
    k = p.T / K
    u = np.where(s < p.d, p.phi_left(s), p.phi_right(s)) * np.ones_like(s)
    u = np.where(s == p.d, 0.5 * (p.phi_minus + p.phi_plus), u)
    si = s[1:-1]
    ab = np.zeros((3, J - 1))
    for j in range(1, K + 1):
        t = j * k
        a = p.a(si, t) * np.ones_like(si)
        b = p.b(si, t) * np.ones_like(si)
        lo = -eps / h**2 - a / (2 * h)
        up = -eps / h**2 + a / (2 * h)
        ab[0, 1:] = up[:-1]
        ab[1] = 2 * eps / h**2 + b + 1.0 / k
        ab[2, :-1] = lo[1:]
        rhs = p.f(si, t) + u[1:-1] / k
        u0, u1 = float(p.boundary(0, t)), float(p.boundary(1, t))
        rhs[0] -= lo[0] * u0
        rhs[-1] -= up[-1] * u1
        u = np.concatenate([[u0], solve_banded((1, 1), ab, rhs), [u1]])
    return s, u


def run(cfg: ReferenceConfig):
    p = get_example(cfg.example)
    eps = 2.0**-cfg.eps_power
    s_ref, u_ref = reference_solution(p, eps, cfg.J, cfg.K)
    s = np.linspace(0.0, 1.0, cfg.samples)
    ref = np.interp(s, s_ref, u_ref)
    print(f"example {cfg.example}, eps=2^-{cfg.eps_power}, reference J={cfg.J}, K={cfg.K}, t=T")
    prev = None
    for N in cfg.N_list:
        sol = solve(p, eps, N, N)
        err = float(np.abs(reconstruct_u(sol, s, p.T) - ref).max())
        rate = "" if prev is None else f"  rate {np.log2(prev / err):.2f}"
        print(f"N=M={N:<5d} max|u_N - u_ref| = {err:.3E}{rate}")
        prev = err


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--example", type=int, default=2, choices=(1, 2))
    ap.add_argument("--eps-power", type=int, default=6)
    ap.add_argument("--J", type=int, default=8000)
    ap.add_argument("--K", type=int, default=20000)
    args = ap.parse_args()
    run(ReferenceConfig(args.example, args.eps_power, args.J, args.K))


if __name__ == "__main__":
    main()
