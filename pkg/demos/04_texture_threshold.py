"""
Choosing the texture threshold
==============================

The vertical-texture bit should carry as much information as possible, so the
threshold is picked to maximize the entropy of the pooled bits. This runs the
sweep on the color photographs bundled with scikit-image.
"""

import skimage.data

from fastcd.evaluation import calibrate_threshold, threshold_entropies
from fastcd.image_pipeline import resample, rgb_to_hsv

names = ("astronaut", "chelsea", "coffee", "rocket")
for side in (64, 128):
    sample = [rgb_to_hsv(resample(getattr(skimage.data, n)(), side)) for n in names]
    print(f"\n{side}x{side}:   t   ones   H(bits)")
    for t, p, h in threshold_entropies(sample):
        print(f"        {t:.2f}  {p:.3f}  {h:.3f}")
    print(f"best t = {calibrate_threshold(sample):.2f}")
