#!/usr/bin/env python3
"""All-pairs worker agreement over a raw multi-worker file.

Splits a dense file by worker source, scores every pair of workers that
share enough predicates, and reports per-pair and mean F1.  Agreement is
computed with the unlabeled metric by default; pass --mode la for the
strict-label variant.
"""

from __future__ import annotations

import argparse
import sys
from itertools import combinations
from pathlib import Path
from statistics import fmean

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from qasrl_kit.data import DENSE_JSONL, AnnotationSet, load_dataset
from qasrl_kit.metrics import MACRO, MICRO, EvalConfig, iaa_pairwise


def split_by_source(dataset: AnnotationSet) -> dict[str, AnnotationSet]:
    by_source: dict[str, list] = {}
    for annotation in dataset.annotations:
        by_source.setdefault(annotation.source, []).append(annotation)
    return {
        source: AnnotationSet(sentences=dataset.sentences,
                              annotations=tuple(annotations),
                              redundant=True)
        for source, annotations in by_source.items()
    }


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("path", help="dense file with one record per (verb, worker)")
    parser.add_argument("--mode", choices=("ua", "la"), default="ua")
    parser.add_argument("--macro", action="store_true")
    parser.add_argument("--iou-threshold", type=float, default=0.5)
    parser.add_argument("--min-shared", type=int, default=1,
                        help="minimum shared predicates per worker pair")
    args = parser.parse_args()

    dataset = load_dataset(args.path, DENSE_JSONL)
    workers = split_by_source(dataset)
    workers.pop("consolidated", None)
    workers.pop("parser", None)
    if len(workers) < 2:
        print("need at least two worker sources", file=sys.stderr)
        return 2

    cfg = EvalConfig(mode=args.mode,
                     aggregation=MACRO if args.macro else MICRO,
                     iou_threshold=args.iou_threshold)
    results = []
    for (name_a, set_a), (name_b, set_b) in combinations(sorted(workers.items()), 2):
        shared = {a.predicate for a in set_a.annotations} & \
            {b.predicate for b in set_b.annotations}
        if len(shared) < args.min_shared:
            continue
        f1 = iaa_pairwise(set_a, set_b, cfg)
        results.append(f1)
        print(f"{name_a} vs {name_b}: F1 {100 * f1:.1f} over {len(shared)} predicates")

    if not results:
        print("no worker pair shares enough predicates", file=sys.stderr)
        return 2
    print(f"mean over {len(results)} experiments: F1 {100 * fmean(results):.1f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
