"""
Retrieval and classification scores
====================================

Five texture classes share a single palette, so only spatial structure
separates them. The FCD matrix feeds leave-one-out classification, average
normalized rank and precision/recall.
"""

import numpy as np

from fastcd import PipelineConfig, encode_image, extract_dictionary, synthetic
from fastcd.evaluation import confusion_matrix, mean_anr, mean_pr_curve, ns_score
from fastcd.store import DistanceMatrix, fcd_matrix

rng = np.random.default_rng(1)
images, labels = [], []
for k in range(5):
    for _ in range(20):
        images.append(synthetic.textured_image(synthetic.KINDS[k], synthetic.PALETTES[0], rng))
        labels.append(synthetic.KINDS[k])

dicts = [extract_dictionary(encode_image(img, PipelineConfig())) for img in images]
ids = [f"img{k:03d}" for k in range(len(dicts))]
m = DistanceMatrix(ids, fcd_matrix(dicts))

cm = confusion_matrix(m, labels)
print("confusion matrix (rows = true class)")
print(" " * 10 + " ".join(f"{c[:8]:>8s}" for c in cm.classes))
for c, row in zip(cm.classes, cm.counts):
    print(f"{c:10s}" + " ".join(f"{v:8d}" for v in row))
print(f"average accuracy {cm.accuracy:.1%}")
print(f"mean ANR {mean_anr(m, labels):.3f}  (0 = perfect, 0.5 = random)")

#%%
pts = mean_pr_curve(m, labels)
for p in pts[4::15]:
    print(f"cutoff {p.cutoff:3d}: precision {p.precision:.3f} recall {p.recall:.3f}")

#%%
# N-S style score: groups of four near-copies of one scene. Each copy gets its
# own pixel noise, so the dictionaries differ slightly.
groups, quads = [], []
for g in range(10):
    base = synthetic.textured_image(synthetic.KINDS[g % 5], synthetic.PALETTES[g % 7], rng).astype(float)
    for _ in range(4):
        noisy = np.clip(base + rng.normal(0, 6, base.shape), 0, 255).astype(np.uint8)
        quads.append(extract_dictionary(encode_image(noisy)))
        groups.append(f"g{g}")
q = DistanceMatrix([f"q{k}" for k in range(len(quads))], fcd_matrix(quads))
print(f"\nN-S score over {len(quads)} images: {ns_score(q, groups):.2f} / 4")
