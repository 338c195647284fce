"""Measured versus modelled work for FCD and NCD joint steps."""

from __future__ import annotations

import csv
from dataclasses import astuple, dataclass, fields
from pathlib import Path

import numpy as np

from fastcd import synthetic
from fastcd.lzw import extract_dictionary, intersect
from fastcd.similarity import CostModelInput, cost_model, joint_lzw_steps

WORKLOADS = ("random", "structured")


@dataclass(frozen=True)
class BenchRow:
    n: int
    m_x: int
    m_y: int
    fcd_comparisons: int
    ncd_symbol_steps: int
    model_fcd: float
    model_ncd: float
    workload: str


def measure_pair(x, y, workload: str = "", filter_pairs: bool = False) -> BenchRow:
    dx = extract_dictionary(x)
    dy = extract_dictionary(y)
    stats = intersect(dx, dy, filter_pairs)
    steps = joint_lzw_steps(x, y)
    model = cost_model(CostModelInput(len(x), len(y), max(len(dx), 1), max(len(dy), 1)))
    return BenchRow(len(x), len(dx), len(dy), stats.comparisons, steps, *model, workload)


def run_bench(sizes=(1024, 4096), trials: int = 5, seed: int = 0, workloads=WORKLOADS) -> list[BenchRow]:
    rng = np.random.default_rng(seed)
    rows = []
    for workload in workloads:
        gen = synthetic.random_symbols if workload == "random" else synthetic.markov_symbols
        for n in sizes:
            for _ in range(trials):
                rows.append(measure_pair(gen(rng, n), gen(rng, n), workload))
    return rows


def write_bench_csv(rows: list[BenchRow], path) -> None:
    with Path(path).open("w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow([fl.name for fl in fields(BenchRow)])
        for r in rows:
            w.writerow(
                [f"{v:.6f}" if isinstance(v, float) else v for v in astuple(r)]
            )
