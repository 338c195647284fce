"""Command-line front end.

    fastcd ingest    --manifest M --store S [pipeline flags]
    fastcd matrix    --store S [--measure fcd] [--threads N]
    fastcd query     --store S IMAGE [--k 10] [--measure fcd]
    fastcd eval      --store S --protocol pr|anr|ns|classify [--out FILE]
    fastcd calibrate --manifest M [--size 64]
    fastcd bench     [--sizes 1024,4096] [--trials 5] [--out bench.csv]

Machine-readable results go to CSV files, summaries to stdout.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from fastcd import bench, evaluation, store as st
from fastcd.image_pipeline import PipelineConfig, encode_image, load_image, resample, rgb_to_hsv
from fastcd.similarity import MEASURES


def _pipeline_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--hue-bins", type=int, default=16)
    p.add_argument("--sat-bins", type=int, default=4)
    p.add_argument("--val-bins", type=int, default=4)
    p.add_argument("--threshold", type=float, default=0.4)
    p.add_argument("--size", type=int, default=64)


def _config(args) -> PipelineConfig:
    return PipelineConfig(args.hue_bins, args.sat_bins, args.val_bins, args.threshold, args.size)


def _matrix(store: st.DictionaryStore, measure: str, filter_pairs: bool, threads: int) -> st.DistanceMatrix:
    path = store.root / f"matrix-{measure}.csv"
    if path.exists() and not filter_pairs:
        return st.DistanceMatrix.from_csv(path, measure)
    m = st.build_matrix(store, measure, filter_pairs, threads)
    if not filter_pairs:
        m.to_csv(path)
    return m


def cmd_ingest(args) -> int:
    manifest = st.read_manifest(args.manifest)

    def progress(item, err):
        if err is None:
            print(f"ingested {item.item_id}")
        else:
            print(f"error: {item.item_id}: {item.path}: {err}", file=sys.stderr)

    report = st.ingest(manifest, _config(args), args.store, progress=progress)
    print(f"ingested={len(report.ingested)} skipped={len(report.skipped)}")
    return 0 if report.ok else 1


def cmd_matrix(args) -> int:
    store = st.DictionaryStore(args.store)
    m = st.build_matrix(store, args.measure, args.filter_pairs, args.threads)
    out = Path(args.out) if args.out else store.root / f"matrix-{args.measure}.csv"
    m.to_csv(out)
    print(f"wrote {len(m.ids)}x{len(m.ids)} {args.measure} matrix to {out}")
    return 0


def cmd_query(args) -> int:
    store = st.DictionaryStore(args.store)
    q = encode_image(args.image, store.config())
    for rank, (item_id, score) in enumerate(
        st.query(store, q, args.k, args.measure, args.filter_pairs), start=1
    ):
        print(f"{rank},{item_id},{score:.6f}")
    return 0


def cmd_eval(args) -> int:
    store = st.DictionaryStore(args.store)
    labels = store.manifest().labels
    if args.matrix:
        m = st.DistanceMatrix.from_csv(args.matrix)
    else:
        m = _matrix(store, args.measure, args.filter_pairs, args.threads)
    out = Path(args.out) if args.out else store.root / f"eval-{args.protocol}-{m.measure}.csv"
    if args.protocol == "classify":
        cm = evaluation.confusion_matrix(m, labels)
        cm.to_csv(out)
        print(f"accuracy={cm.accuracy:.4f}")
    elif args.protocol == "anr":
        scores = evaluation.query_anr(m, labels)
        with out.open("w") as f:
            f.write("item_id,anr\n")
            for i, v in zip(m.ids, scores):
                f.write(f"{i},{v:.6f}\n")
        print(f"anr={evaluation.mean_anr(m, labels):.4f}")
    elif args.protocol == "ns":
        scores = evaluation.ns_scores(m, labels)
        with out.open("w") as f:
            f.write("item_id,ns\n")
            for i, v in zip(m.ids, scores):
                f.write(f"{i},{int(v)}\n")
        print(f"ns={scores.mean():.4f}")
    else:
        pts = evaluation.mean_pr_curve(m, labels)
        with out.open("w") as f:
            f.write("cutoff,precision,recall\n")
            for p in pts:
                f.write(f"{p.cutoff},{p.precision:.6f},{p.recall:.6f}\n")
        print(f"pr_points={len(pts)}")
    print(f"report={out}")
    return 0


def cmd_calibrate(args) -> int:
    manifest = st.read_manifest(args.manifest)
    sample, failed = [], 0
    for it in manifest.items:
        try:
            sample.append(rgb_to_hsv(resample(load_image(it.path), args.size)))
        except Exception as exc:
            print(f"error: {it.item_id}: {it.path}: {exc}", file=sys.stderr)
            failed += 1
    if not sample:
        print("error: no readable images", file=sys.stderr)
        return 1
    print("t,ones_fraction,entropy")
    for t, p, h in evaluation.threshold_entropies(sample):
        print(f"{t:.2f},{p:.6f},{h:.6f}")
    print(f"best_t={evaluation.calibrate_threshold(sample):.2f}")
    return 0 if failed == 0 else 1


def cmd_bench(args) -> int:
    sizes = [int(s) for s in args.sizes.split(",") if s]
    rows = bench.run_bench(sizes, args.trials, args.seed)
    bench.write_bench_csv(rows, args.out)
    for w in bench.WORKLOADS:
        sel = [r for r in rows if r.workload == w]
        if sel:
            ratio = sum(r.fcd_comparisons for r in sel) / sum(r.ncd_symbol_steps for r in sel)
            print(f"{w}: pairs={len(sel)} fcd_comparisons/ncd_symbol_steps={ratio:.3f}")
    print(f"wrote {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fastcd", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, store=True):
        if store:
            p.add_argument("--store", required=True)
        p.add_argument("--measure", choices=MEASURES, default="fcd")
        p.add_argument("--filter-pairs", action="store_true")
        p.add_argument("--threads", type=int, default=1)

    p = sub.add_parser("ingest", help="encode images and store their dictionaries")
    p.add_argument("--manifest", required=True)
    p.add_argument("--store", required=True)
    _pipeline_flags(p)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("matrix", help="build the full distance matrix")
    common(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_matrix)

    p = sub.add_parser("query", help="rank stored items against a query image")
    common(p)
    p.add_argument("image")
    p.add_argument("--k", type=int, default=10)
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("eval", help="score a distance matrix")
    common(p)
    p.add_argument("--protocol", choices=("pr", "anr", "ns", "classify"), required=True)
    p.add_argument("--matrix", help="precomputed matrix CSV (default: store cache)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("calibrate", help="pick the texture threshold by bit entropy")
    p.add_argument("--manifest", required=True)
    p.add_argument("--size", type=int, default=64)
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("bench", help="measured vs modelled FCD/NCD joint work")
    p.add_argument("--sizes", default="1024,4096")
    p.add_argument("--trials", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="bench.csv")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except (ValueError, FileNotFoundError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
