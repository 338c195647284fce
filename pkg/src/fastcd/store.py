"""On-disk dictionary store, dataset manifests and distance matrices.

Store layout::

    <store>/manifest.csv          item_id,path,label of every ingested item
    <store>/config.json           PipelineConfig used at ingest
    <store>/dicts/<item_id>.fcd   serialized Dictionary
    <store>/symbols/<item_id>.sym raw little-endian uint16 symbol string
    <store>/matrix-<measure>.csv  optional cached distance matrix
"""

from __future__ import annotations

import csv
import io
import json
import logging
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from fastcd import _kernels
from fastcd.image_pipeline import PipelineConfig, SymbolString, encode_image
from fastcd.lzw import DEFAULT_ALPHABET_WIDTH, Dictionary, extract_dictionary
from fastcd.similarity import MEASURES, LzwSizeCompressor, fcd, fcd_symmetric, ncd

log = logging.getLogger(__name__)

MAGIC = b"FCD1"
VERSION = 1
_HEADER = struct.Struct("<4sBBI")


# -- dictionary files ---------------------------------------------------------

def serialize(d: Dictionary) -> bytes:
    buf = io.BytesIO()
    buf.write(_HEADER.pack(MAGIC, VERSION, d.alphabet_width, len(d)))
    lengths = np.diff(d.offsets)
    for k, length in enumerate(lengths.tolist()):
        buf.write(struct.pack("<H", length))
        buf.write(d.symbols[d.offsets[k]:d.offsets[k + 1]].astype("<u2").tobytes())
    return buf.getvalue()


def deserialize(data: bytes, source_id: str = "") -> Dictionary:
    if len(data) < _HEADER.size:
        raise ValueError("truncated dictionary header")
    magic, version, width, count = _HEADER.unpack_from(data, 0)
    if magic != MAGIC:
        raise ValueError(f"bad magic {magic!r}")
    if version != VERSION:
        raise ValueError(f"unsupported dictionary version {version}")
    pos = _HEADER.size
    offsets = np.zeros(count + 1, dtype=np.int64)
    chunks = []
    for k in range(count):
        (length,) = struct.unpack_from("<H", data, pos)
        pos += 2
        end = pos + 2 * length
        if end > len(data):
            raise ValueError("truncated dictionary entry")
        chunks.append(np.frombuffer(data, dtype="<u2", count=length, offset=pos))
        offsets[k + 1] = offsets[k] + length
        pos = end
    if pos != len(data):
        raise ValueError("trailing bytes after dictionary entries")
    symbols = np.concatenate(chunks).astype(np.uint16) if chunks else np.zeros(0, np.uint16)
    return Dictionary(symbols, offsets, width, source_id)


def save_dictionary(d: Dictionary, path) -> None:
    Path(path).write_bytes(serialize(d))


def load_dictionary(path, source_id: str | None = None) -> Dictionary:
    path = Path(path)
    return deserialize(path.read_bytes(), path.stem if source_id is None else source_id)


# -- manifests ----------------------------------------------------------------

@dataclass(frozen=True)
class ManifestItem:
    item_id: str
    path: str
    label: str = ""


@dataclass
class DatasetManifest:
    items: list[ManifestItem] = field(default_factory=list)
    name: str = ""

    def __post_init__(self):
        seen = set()
        for it in self.items:
            if not it.item_id or "/" in it.item_id or "\\" in it.item_id or it.item_id.startswith("."):
                raise ValueError(f"invalid item_id {it.item_id!r}")
            if it.item_id in seen:
                raise ValueError(f"duplicate item_id {it.item_id!r}")
            seen.add(it.item_id)

    def __len__(self) -> int:
        return len(self.items)

    @property
    def labels(self) -> dict[str, str]:
        return {it.item_id: it.label for it in self.items}


def read_manifest(path) -> DatasetManifest:
    """Read a ``item_id,path,label`` CSV; relative paths resolve against its folder."""
    path = Path(path)
    with path.open(newline="") as f:
        reader = csv.DictReader(f)
        missing = {"item_id", "path"} - set(reader.fieldnames or ())
        if missing:
            raise ValueError(f"manifest {path} lacks columns {sorted(missing)}")
        items = []
        for row in reader:
            p = Path(row["path"])
            if not p.is_absolute():
                p = path.parent / p
            items.append(ManifestItem(row["item_id"], str(p), row.get("label") or ""))
    return DatasetManifest(items, path.stem)


def write_manifest(manifest: DatasetManifest, path) -> None:
    with Path(path).open("w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["item_id", "path", "label"])
        for it in manifest.items:
            w.writerow([it.item_id, it.path, it.label])


# -- store --------------------------------------------------------------------

class DictionaryStore:
    def __init__(self, root):
        self.root = Path(root)

    @property
    def dict_dir(self) -> Path:
        return self.root / "dicts"

    @property
    def symbol_dir(self) -> Path:
        return self.root / "symbols"

    def manifest(self) -> DatasetManifest:
        p = self.root / "manifest.csv"
        if not p.exists():
            return DatasetManifest([], self.root.name)
        return read_manifest(p)

    def config(self) -> PipelineConfig:
        p = self.root / "config.json"
        if not p.exists():
            return PipelineConfig()
        return PipelineConfig(**json.loads(p.read_text()))

    def ids(self) -> list[str]:
        return [it.item_id for it in self.manifest().items]

    def load(self, item_id: str) -> Dictionary:
        p = self.dict_dir / f"{item_id}.fcd"
        if not p.exists():
            raise FileNotFoundError(f"missing dictionary for {item_id!r}: {p}")
        return load_dictionary(p, item_id)

    def load_symbols(self, item_id: str) -> SymbolString:
        p = self.symbol_dir / f"{item_id}.sym"
        if not p.exists():
            raise FileNotFoundError(f"missing symbol string for {item_id!r}: {p}")
        return SymbolString(np.fromfile(p, dtype="<u2").astype(np.uint16), item_id)

    def load_all(self) -> list[Dictionary]:
        return [self.load(i) for i in self.ids()]

    def __len__(self) -> int:
        return len(self.ids())


@dataclass
class IngestReport:
    store: DictionaryStore
    ingested: list[str] = field(default_factory=list)
    skipped: list[tuple[str, str, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.skipped


def ingest(
    manifest: DatasetManifest,
    cfg: PipelineConfig,
    store_root,
    alphabet_width: int = DEFAULT_ALPHABET_WIDTH,
    progress=None,
) -> IngestReport:
    """Encode every manifest image and write its dictionary and symbol string.

    Items whose image cannot be read or decoded are skipped and listed in the
    report. ``progress`` is called as ``progress(item, error_or_None)``.
    """
    store = DictionaryStore(store_root)
    store.dict_dir.mkdir(parents=True, exist_ok=True)
    store.symbol_dir.mkdir(parents=True, exist_ok=True)
    report = IngestReport(store)
    kept = []
    for it in manifest.items:
        try:
            s = encode_image(it.path, cfg, it.item_id)
        except Exception as exc:  # unreadable or undecodable image
            log.warning("skipping %s (%s): %s", it.item_id, it.path, exc)
            report.skipped.append((it.item_id, it.path, str(exc)))
            if progress:
                progress(it, exc)
            continue
        d = extract_dictionary(s, alphabet_width, it.item_id)
        save_dictionary(d, store.dict_dir / f"{it.item_id}.fcd")
        s.symbols.astype("<u2").tofile(store.symbol_dir / f"{it.item_id}.sym")
        kept.append(it)
        report.ingested.append(it.item_id)
        if progress:
            progress(it, None)
    write_manifest(DatasetManifest(kept, manifest.name), store.root / "manifest.csv")
    (store.root / "config.json").write_text(json.dumps(asdict(cfg), sort_keys=True) + "\n")
    return report


# -- distance matrices --------------------------------------------------------

@dataclass
class DistanceMatrix:
    """Rows are probes (FCD numerator side), columns are targets."""

    ids: list[str]
    values: np.ndarray
    measure: str = "fcd"

    def index(self, item_id: str) -> int:
        return self.ids.index(item_id)

    def row(self, item_id: str) -> np.ndarray:
        return self.values[self.index(item_id)]

    def to_csv(self, path) -> None:
        with Path(path).open("w", newline="") as f:
            w = csv.writer(f, lineterminator="\n")
            w.writerow(["item_id", *self.ids])
            for i, row in zip(self.ids, self.values):
                w.writerow([i, *(f"{v:.6f}" for v in row)])

    @classmethod
    def from_csv(cls, path, measure: str | None = None) -> "DistanceMatrix":
        path = Path(path)
        with path.open(newline="") as f:
            rows = list(csv.reader(f))
        ids = rows[0][1:]
        if [r[0] for r in rows[1:]] != ids:
            raise ValueError(f"{path}: row ids do not match header")
        values = np.array([[float(v) for v in r[1:]] for r in rows[1:]], dtype=float).reshape(len(ids), len(ids))
        if measure is None:
            stem = path.stem
            measure = stem[len("matrix-"):] if stem.startswith("matrix-") else "fcd"
        return cls(ids, values, measure)


def _pack(dicts: list[Dictionary]):
    symbols = np.concatenate([d.symbols for d in dicts]) if dicts else np.zeros(0, np.uint16)
    offsets, starts, base = [], [0], 0
    for d in dicts:
        offsets.append(d.offsets[:-1] + base)
        base += len(d.symbols)
        starts.append(starts[-1] + len(d))
    offsets.append(np.array([base], dtype=np.int64))
    index = np.stack([d.first_index for d in dicts]) if dicts else np.zeros((0, 1), np.int64)
    return (
        symbols.astype(np.uint16),
        np.concatenate(offsets).astype(np.int64),
        np.asarray(starts, dtype=np.int64),
        index,
    )


def fcd_matrix(dicts: list[Dictionary], filter_pairs: bool = False, threads: int = 1) -> np.ndarray:
    """Full asymmetric FCD matrix; row blocks are spread over ``threads`` workers."""
    n = len(dicts)
    widths = {d.alphabet_width for d in dicts}
    if len(widths) > 1:
        raise ValueError(f"mixed alphabet widths in corpus: {sorted(widths)}")
    out = np.zeros((n, n), dtype=np.float64)
    if n == 0:
        return out
    symbols, offsets, starts, index = _pack(dicts)
    threads = max(1, min(int(threads), n))
    if threads == 1:
        _kernels.fcd_rows(symbols, offsets, starts, index, 0, n, bool(filter_pairs), out)
        return out
    bounds = np.linspace(0, n, threads + 1).astype(int)
    with ThreadPoolExecutor(threads) as pool:
        futures = [
            pool.submit(_kernels.fcd_rows, symbols, offsets, starts, index, int(lo), int(hi), bool(filter_pairs), out)
            for lo, hi in zip(bounds[:-1], bounds[1:])
        ]
        for fut in futures:
            fut.result()
    return out


def _check_measure(measure: str) -> None:
    if measure not in MEASURES:
        raise ValueError(f"unknown measure {measure!r}; expected one of {MEASURES}")


def ncd_matrix(strings: list[SymbolString], threads: int = 1) -> np.ndarray:
    comp = LzwSizeCompressor(512)
    n = len(strings)
    sizes = [comp.compressed_size(s.symbols) for s in strings]
    out = np.zeros((n, n))

    def row(r):
        for c in range(n):
            if c != r:
                joint = comp.compressed_size(np.concatenate([strings[r].symbols, strings[c].symbols]))
                out[r, c] = (joint - min(sizes[r], sizes[c])) / max(sizes[r], sizes[c])

    with ThreadPoolExecutor(max(1, threads)) as pool:
        list(pool.map(row, range(n)))
    return out


def build_matrix(
    store: DictionaryStore,
    measure: str = "fcd",
    filter_pairs: bool = False,
    threads: int = 1,
) -> DistanceMatrix:
    _check_measure(measure)
    ids = store.ids()
    if not ids:
        raise ValueError(f"store {store.root} is empty")
    if measure == "ncd":
        values = ncd_matrix([store.load_symbols(i) for i in ids], threads)
    else:
        values = fcd_matrix([store.load(i) for i in ids], filter_pairs, threads)
        if measure == "fcd-sym":
            values = np.maximum(values, values.T)
    return DistanceMatrix(ids, values, measure)


def query(
    store: DictionaryStore,
    q,
    k: int = 10,
    measure: str = "fcd",
    filter_pairs: bool = False,
) -> list[tuple[str, float]]:
    """Rank store items by distance from ``q``.

    ``q`` is a :class:`SymbolString` (any measure) or a :class:`Dictionary`
    (FCD measures only). Ties are broken by item id.
    """
    _check_measure(measure)
    if k < 1:
        raise ValueError("k must be >= 1")
    ids = store.ids()
    if not ids:
        raise ValueError(f"store {store.root} is empty")
    if measure == "ncd":
        if not isinstance(q, SymbolString):
            raise TypeError("ncd queries need a SymbolString")
        comp = LzwSizeCompressor(512)
        scores = [ncd(q.symbols, store.load_symbols(i).symbols, comp) for i in ids]
    else:
        qd = q if isinstance(q, Dictionary) else extract_dictionary(q, source_id=q.source_id)
        score = fcd if measure == "fcd" else fcd_symmetric
        scores = [score(qd, store.load(i), filter_pairs) for i in ids]
    ranked = sorted(zip(ids, scores), key=lambda t: (t[1], t[0]))
    return ranked[:k]
