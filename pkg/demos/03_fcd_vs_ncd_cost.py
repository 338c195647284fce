"""
How much work does each distance do?
====================================

FCD intersects two stored dictionaries; NCD re-compresses the concatenated
strings for every pair. Counting lookups on both sides shows the gap, next to
the analytic operation-count model.
"""

import time

import numpy as np

from fastcd import bench, synthetic
from fastcd.lzw import extract_dictionary
from fastcd.similarity import LzwSizeCompressor, fcd, ncd

rows = bench.run_bench(sizes=(1024, 4096), trials=3, seed=0)
print(f"{'workload':>10s} {'n':>5s} {'m_x':>5s} {'fcd cmp':>8s} {'ncd steps':>9s} {'model fcd':>10s} {'model ncd':>10s}")
for r in rows:
    print(f"{r.workload:>10s} {r.n:5d} {r.m_x:5d} {r.fcd_comparisons:8d} {r.ncd_symbol_steps:9d} "
          f"{r.model_fcd:10.0f} {r.model_ncd:10.0f}")

#%%
# Wall-clock on 64x64-sized strings: dictionaries are built once, so only the
# intersection is paid per pair.
rng = np.random.default_rng(2)
strings = [synthetic.markov_symbols(rng, 4096, stay=0.8) for _ in range(20)]
dicts = [extract_dictionary(s) for s in strings]
comp = LzwSizeCompressor(512)

t0 = time.perf_counter()
for a in dicts:
    for b in dicts:
        fcd(a, b)
t_fcd = time.perf_counter() - t0

t0 = time.perf_counter()
for a in strings[:5]:
    for b in strings[:5]:
        ncd(a, b, comp)
t_ncd = (time.perf_counter() - t0) * (len(strings) / 5) ** 2

print(f"\n400 pairs: FCD {t_fcd:.3f}s, NCD (extrapolated) {t_ncd:.1f}s")
