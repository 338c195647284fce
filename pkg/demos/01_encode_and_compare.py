"""
Encoding images and comparing dictionaries
==========================================

An image becomes a string of 9-bit symbols: 8 bits of quantized HSV color and
one bit that flags a rough vertical transition. LZW then learns a dictionary
of phrases from that string, and two dictionaries are compared by counting
shared phrases.
"""

import numpy as np

from fastcd import PipelineConfig, encode_image, extract_dictionary, fcd, fcd_symmetric, ncd
from fastcd import synthetic
from fastcd.similarity import LzwSizeCompressor

rng = np.random.default_rng(0)
stripes_a = synthetic.textured_image("stripes", synthetic.PALETTES[0], rng)
stripes_b = synthetic.textured_image("stripes", synthetic.PALETTES[0], rng)
checker = synthetic.textured_image("checker", synthetic.PALETTES[1], rng)

cfg = PipelineConfig()  # 16x4x4 bins, t = 0.4, 64x64
strings = {name: encode_image(img, cfg, name) for name, img in
           [("stripes_a", stripes_a), ("stripes_b", stripes_b), ("checker", checker)]}

for name, s in strings.items():
    rough = np.count_nonzero(s.symbols >= cfg.color_levels) / len(s)
    print(f"{name:10s} {len(s)} symbols, {len(np.unique(s.symbols))} distinct, {rough:.0%} rough")

#%%
# Dictionaries are sorted and prefix-closed: every entry's one-shorter prefix
# is also an entry.
dicts = {name: extract_dictionary(s) for name, s in strings.items()}
d = dicts["stripes_a"]
print(f"\nstripes_a dictionary: {len(d)} entries, longest {max(map(len, d.entries))} symbols")
print("first entries:", d.entries[:4])

#%%
# FCD is asymmetric: the denominator is the probe dictionary's size.
print()
for a, b in [("stripes_a", "stripes_b"), ("stripes_b", "stripes_a"), ("stripes_a", "checker")]:
    print(f"fcd({a}, {b}) = {fcd(dicts[a], dicts[b]):.3f}   "
          f"symmetric = {fcd_symmetric(dicts[a], dicts[b]):.3f}")

#%%
# NCD needs the raw strings and a compressor; the built-in one measures the
# LZW code stream with growing code width.
comp = LzwSizeCompressor(512)
print()
for a, b in [("stripes_a", "stripes_b"), ("stripes_a", "checker")]:
    print(f"ncd({a}, {b}) = {ncd(strings[a].symbols, strings[b].symbols, comp):.3f}")
