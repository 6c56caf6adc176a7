"""Reproduce a two-mesh convergence table for example 1 or 2.

    python scripts/reproduce_table.py --example 1 --N 32,64,128,256 --out example1.csv
"""

from __future__ import annotations

import argparse
import logging
import time
from dataclasses import dataclass, field
from pathlib import Path

from layertrack.harness import default_threads, epsilon_sweep, render_table
from layertrack.problem import get_example

log = logging.getLogger("reproduce_table")

REFERENCE = {
    1: ([4.422e-2, 4.546e-2, 1.531e-2, 5.169e-3, 2.066e-3], [-0.040, 1.570, 1.567, 1.323]),
    2: ([3.583e-1, 2.450e-1, 1.616e-1, 8.540e-2, 4.605e-2], [0.548, 0.601, 0.920, 0.891]),
}


@dataclass
class TableConfig:
    example: int = 1
    N_list: list = field(default_factory=lambda: [32, 64, 128, 256])
    eps_powers: list = field(default_factory=lambda: list(range(27)))
    threads: int = 1
    out: str | None = None


def run(cfg: TableConfig) -> str:
    p = get_example(cfg.example)
    start = time.perf_counter()
    rep = epsilon_sweep(p, cfg.N_list, cfg.eps_powers, threads=cfg.threads, progress=log.info)
    log.info("sweep took %.1f s", time.perf_counter() - start)
    text = render_table(rep, "csv" if cfg.out and cfg.out.endswith(".csv") else "aligned-text")
    if cfg.out:
        Path(cfg.out).write_text(text)

    D_ref, P_ref = REFERENCE[cfg.example]
    lines = ["N      D (ours)   D (reference)  rel.diff   P (ours)  P (reference)"]
    for n, N in enumerate(rep.N_list):
        k = {32: 0, 64: 1, 128: 2, 256: 3, 512: 4}.get(N)
        ref = D_ref[k] if k is not None else float("nan")
        pref = P_ref[k] if k is not None and k < len(P_ref) else float("nan")
        d = rep.uniform_D[n]
        lines.append(f"{N:<6d} {d:.3E}  {ref:.3E}      {(d - ref) / ref:+.3f}    {rep.uniform_P[n]:7.3f}   {pref:7.3f}")
    return text + "\n" + "\n".join(lines) + "\n"


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--example", type=int, default=1, choices=(1, 2))
    ap.add_argument("--N", default="32,64,128,256")
    ap.add_argument("--eps-max-power", type=int, default=26)
    ap.add_argument("--threads", type=int, default=default_threads())
    ap.add_argument("--out")
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(message)s")
    cfg = TableConfig(args.example, [int(v) for v in args.N.split(",")], list(range(args.eps_max_power + 1)),
                      args.threads, args.out)
    print(run(cfg))


if __name__ == "__main__":
    main()
