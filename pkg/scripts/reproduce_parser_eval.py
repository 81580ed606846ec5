#!/usr/bin/env python3
"""Score released parser predictions against the released gold test split
and compare the result to the reference numbers.

Expects a data directory (argument or QASRL_GS_DATA environment variable)
containing ``test.gold.jsonl`` and ``test.parser.jsonl`` in the schema
documented in the README; files converted from other releases must be
brought into that schema first.

Reference values (micro-aggregated, redundancy-aware, IOU 0.5):
    UA  P 87.1  R 50.2  F1 63.7
    LA  P 67.8  R 39.1  F1 49.6
and 2.9 roles per verb in the gold data.  A +-0.5 band absorbs
tokenization and tie-breaking differences (+-0.1 for roles per verb).
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from qasrl_kit.data import GOLD_JSONL, PARSER_JSONL, load_dataset
from qasrl_kit.metrics import (
    EvalConfig,
    aggregate,
    dataset_stats,
    evaluate_annotation_sets,
)

EXPECTED = {
    "ua": (87.1, 50.2, 63.7),
    "la": (67.8, 39.1, 49.6),
}
SCORE_TOLERANCE = 0.5
ROLES_PER_VERB = 2.9
ROLES_TOLERANCE = 0.1


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("data_dir", nargs="?", default=os.environ.get("QASRL_GS_DATA"),
                        help="directory with test.gold.jsonl and test.parser.jsonl")
    parser.add_argument("--workers", type=int, default=1)
    args = parser.parse_args()
    if not args.data_dir:
        parser.error("pass a data directory or set QASRL_GS_DATA")

    root = Path(args.data_dir)
    gold = load_dataset(root / "test.gold.jsonl", GOLD_JSONL)
    pred = load_dataset(root / "test.parser.jsonl", PARSER_JSONL)
    print(f"gold: {len(gold.annotations)} verbs; "
          f"parser: {len(pred.annotations)} annotations")

    ok = True
    for mode, (exp_p, exp_r, exp_f) in EXPECTED.items():
        cfg = EvalConfig(mode=mode, redundant=True)
        per_predicate = evaluate_annotation_sets(pred, gold, cfg,
                                                 workers=args.workers)
        scores = aggregate([c for _, c in per_predicate], cfg)
        got = (100 * scores.precision, 100 * scores.recall, 100 * scores.f1)
        within = all(abs(g - e) <= SCORE_TOLERANCE
                     for g, e in zip(got, (exp_p, exp_r, exp_f)))
        ok &= within
        print(f"{mode.upper()}: P {got[0]:.1f} R {got[1]:.1f} F1 {got[2]:.1f}   "
              f"(reference {exp_p} {exp_r} {exp_f}) "
              f"{'PASS' if within else 'FAIL'}")

    stats = dataset_stats(gold)
    within = abs(stats.questions_per_verb - ROLES_PER_VERB) <= ROLES_TOLERANCE
    ok &= within
    print(f"roles per verb: {stats.questions_per_verb:.2f} "
          f"(reference {ROLES_PER_VERB}) {'PASS' if within else 'FAIL'}")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
