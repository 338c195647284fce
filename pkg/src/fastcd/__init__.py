"""Fast Compression Distance over sorted LZW dictionaries.

Typical use::

    from fastcd import PipelineConfig, encode_image, extract_dictionary, fcd

    cfg = PipelineConfig()
    dx = extract_dictionary(encode_image("a.png", cfg))
    dy = extract_dictionary(encode_image("b.png", cfg))
    fcd(dx, dy)
"""

from fastcd.image_pipeline import (
    PipelineConfig,
    SymbolString,
    encode_image,
    hsv_distance,
    quantize,
    rgb_to_hsv,
    texture_bit,
    texture_bits,
)
from fastcd.lzw import (
    Dictionary,
    IntersectionStats,
    contains,
    extract_dictionary,
    intersect,
    lzw_code_stream,
    lzw_decode,
)
from fastcd.similarity import (
    CostModelInput,
    LzwSizeCompressor,
    ZlibCompressor,
    cost_model,
    fcd,
    fcd_symmetric,
    lzw_size,
    ncd,
)
from fastcd.store import DatasetManifest, DictionaryStore, DistanceMatrix, build_matrix, ingest, query
from fastcd.evaluation import (
    anr,
    calibrate_threshold,
    classify_min_avg_distance,
    confusion_matrix,
    ns_score,
    pr_curve,
)

__version__ = "0.1.0"
