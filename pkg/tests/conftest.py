import numpy as np
import pytest
from PIL import Image

from fastcd import synthetic


def sym(text):
    """Letters to symbol codes, so hand traces read naturally."""
    return [ord(c) for c in text]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def image_dir(tmp_path):
    """Ten PNGs in two classes plus a manifest; returns (dir, manifest path)."""
    images, labels = synthetic.make_classes(2, 5, side=48, seed=7)
    rows = ["item_id,path,label"]
    for k, (img, label) in enumerate(zip(images, labels)):
        name = f"img{k:02d}"
        Image.fromarray(img).save(tmp_path / f"{name}.png")
        rows.append(f"{name},{name}.png,{label}")
    manifest = tmp_path / "manifest.csv"
    manifest.write_text("\n".join(rows) + "\n")
    return tmp_path, manifest
