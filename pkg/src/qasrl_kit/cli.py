"""Command-line entry point.

Subcommands: validate, eval, iaa, stats, cost, consolidate, propbank.
Exit codes: 0 success, 1 validation violations, 2 usage or format errors.
Machine reports are byte-stable across runs for identical inputs; tables
render percentages with one decimal.
"""

from __future__ import annotations

import argparse
import json
import sys

from .consolidation import propose, validate_consolidation
from .data import (
    DENSE_JSONL,
    FORMATS,
    GOLD_JSONL,
    LoadError,
    PARSER_JSONL,
    load_dataset,
    validate,
)
from .metrics import (
    LA,
    MACRO,
    MICRO,
    UA,
    CostSchedule,
    EvalConfig,
    Scores,
    aggregate,
    build_report,
    cost,
    dataset_stats,
    evaluate_annotation_sets,
    iaa_pairwise,
)
from .propbank import compare_propbank, load_propbank
from .questions import (
    DEFAULT_MODALS,
    load_inflection_lexicon,
    load_modal_lexicon,
    render_question,
)

TABLE = "table"
MACHINE = "machine"


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except LoadError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qasrl-kit",
        description="Validate, consolidate, analyze and score QA-SRL annotations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a dataset file's invariants")
    p.add_argument("path")
    _add_format(p)
    _add_lexicons(p)
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("eval", help="score predictions against a reference file")
    p.add_argument("--gold", required=True)
    p.add_argument("--pred", required=True)
    p.add_argument("--gold-format", choices=FORMATS, default=GOLD_JSONL)
    p.add_argument("--pred-format", choices=FORMATS, default=PARSER_JSONL)
    p.add_argument("--mode", choices=(UA, LA, "both"), default="both")
    p.add_argument("--redundant", action="store_true",
                   help="use the redundancy-aware variant")
    p.add_argument("--workers", type=int, default=1,
                   help="parallel per-predicate evaluation processes")
    _add_metric_flags(p)
    _add_report(p)
    _add_lexicons(p)
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("iaa", help="pairwise agreement between two sources")
    p.add_argument("--a", dest="first", required=True)
    p.add_argument("--b", dest="second", required=True)
    _add_format(p, default=DENSE_JSONL)
    p.add_argument("--mode", choices=(UA, LA), default=UA)
    p.add_argument("--redundant", action="store_true")
    _add_metric_flags(p)
    _add_report(p)
    _add_lexicons(p)
    p.set_defaults(func=_cmd_iaa)

    p = sub.add_parser("stats", help="dataset statistics")
    p.add_argument("path")
    _add_format(p)
    _add_report(p)
    _add_lexicons(p)
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("cost", help="annotation cost accounting")
    p.add_argument("path")
    _add_format(p, default=DENSE_JSONL)
    p.add_argument("--generation-base", type=float, default=5.0)
    p.add_argument("--generation-bonus", type=float, default=2.0)
    p.add_argument("--consolidation-base", type=float, default=5.0)
    p.add_argument("--consolidation-per-question", type=float, default=3.0)
    _add_report(p)
    _add_lexicons(p)
    p.set_defaults(func=_cmd_cost)

    p = sub.add_parser("consolidate",
                       help="merge two workers' annotations into proposals")
    p.add_argument("--a", dest="first", required=True)
    p.add_argument("--b", dest="second", required=True)
    _add_format(p, default=DENSE_JSONL)
    p.add_argument("--out", help="write proposals as line-delimited records")
    p.add_argument("--check",
                   help="validate an existing consolidation against the sources")
    _add_lexicons(p)
    p.set_defaults(func=_cmd_consolidate)

    p = sub.add_parser("propbank", help="agreement against PropBank-style frames")
    p.add_argument("--gold", required=True)
    p.add_argument("--propbank", required=True)
    p.add_argument("--gold-format", choices=FORMATS, default=GOLD_JSONL)
    p.add_argument("--iou-threshold", type=float, default=0.5)
    _add_report(p)
    _add_lexicons(p)
    p.set_defaults(func=_cmd_propbank)

    return parser


def _add_format(parser: argparse.ArgumentParser, default: str = GOLD_JSONL) -> None:
    parser.add_argument("--format", choices=FORMATS, default=default)


def _add_metric_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--macro", action="store_true",
                        help="macro-average per-predicate scores")
    parser.add_argument("--iou-threshold", type=float, default=0.5)


def _add_report(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--report", choices=(TABLE, MACHINE), default=TABLE)


def _add_lexicons(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--inflections",
                        help="shared inflection lexicon (5 forms per line)")
    parser.add_argument("--modal-lexicon",
                        help="modal auxiliary lexicon (one word per line)")


def _lexicons(args) -> tuple[dict, frozenset[str]]:
    inflections = (load_inflection_lexicon(args.inflections)
                   if getattr(args, "inflections", None) else {})
    modals = (load_modal_lexicon(args.modal_lexicon)
              if getattr(args, "modal_lexicon", None) else DEFAULT_MODALS)
    return inflections, modals


def _config(args, mode: str) -> EvalConfig:
    _, modals = _lexicons(args)
    return EvalConfig(
        mode=mode,
        redundant=getattr(args, "redundant", False),
        aggregation=MACRO if getattr(args, "macro", False) else MICRO,
        iou_threshold=args.iou_threshold,
        modals=modals,
    )


def _emit_machine(payload) -> None:
    print(json.dumps(payload, sort_keys=True, separators=(",", ":")))


def _percent(value: float) -> str:
    return f"{100 * value:.1f}"


def _scores_table(rows: list[tuple[str, Scores]]) -> str:
    lines = [f"{'':8}{'P':>8}{'R':>8}{'F1':>8}"]
    for name, scores in rows:
        lines.append(
            f"{name:8}{_percent(scores.precision):>8}"
            f"{_percent(scores.recall):>8}{_percent(scores.f1):>8}"
        )
    return "\n".join(lines)


def _cmd_validate(args) -> int:
    inflections, _ = _lexicons(args)
    dataset = load_dataset(args.path, args.format, inflections)
    report = validate(dataset)
    if report.ok:
        print(f"OK: {len(dataset.annotations)} annotations, "
              f"{len(dataset.sentences)} sentences")
        return 0
    for violation in report.violations:
        print(f"{violation.code} sentence={violation.sentence_id} "
              f"verb={violation.verb_index}: {violation.message}")
    print(f"{len(report.violations)} violations")
    return 1


def _cmd_eval(args) -> int:
    inflections, _ = _lexicons(args)
    gold = load_dataset(args.gold, args.gold_format, inflections)
    pred = load_dataset(args.pred, args.pred_format, inflections)
    modes = [UA, LA] if args.mode == "both" else [args.mode]

    reports = {}
    rows = []
    for mode in modes:
        cfg = _config(args, mode)
        per_predicate = evaluate_annotation_sets(pred, gold, cfg, workers=args.workers)
        scores = aggregate([c for _, c in per_predicate], cfg)
        reports[mode] = build_report(cfg, per_predicate, scores)
        rows.append((mode.upper(), scores))

    if args.report == MACHINE:
        _emit_machine(reports[modes[0]] if len(modes) == 1 else reports)
    else:
        print(_scores_table(rows))
    return 0


def _cmd_iaa(args) -> int:
    inflections, _ = _lexicons(args)
    first = load_dataset(args.first, args.format, inflections)
    second = load_dataset(args.second, args.format, inflections)
    cfg = _config(args, args.mode)
    f1 = iaa_pairwise(first, second, cfg)
    if args.report == MACHINE:
        _emit_machine({
            "config": {"mode": cfg.mode, "aggregation": cfg.aggregation,
                       "iou_threshold": cfg.iou_threshold},
            "f1": f1,
        })
    else:
        print(f"{cfg.mode.upper()} agreement F1: {_percent(f1)}")
    return 0


def _cmd_stats(args) -> int:
    inflections, _ = _lexicons(args)
    dataset = load_dataset(args.path, args.format, inflections)
    stats = dataset_stats(dataset)
    if args.report == MACHINE:
        _emit_machine({
            "verbs": stats.verbs,
            "roles_total": stats.roles_total,
            "questions_per_verb": stats.questions_per_verb,
            "answers_per_question": stats.answers_per_question,
        })
    else:
        print(f"verbs:                {stats.verbs}")
        print(f"roles total:          {stats.roles_total}")
        print(f"questions per verb:   {stats.questions_per_verb:.2f}")
        print(f"answers per question: {stats.answers_per_question:.2f}")
    return 0


def _cmd_cost(args) -> int:
    inflections, _ = _lexicons(args)
    dataset = load_dataset(args.path, args.format, inflections)
    schedule = CostSchedule(
        generation_base=args.generation_base,
        generation_bonus=args.generation_bonus,
        consolidation_base=args.consolidation_base,
        consolidation_per_question=args.consolidation_per_question,
    )
    report = cost(dataset, schedule)
    if args.report == MACHINE:
        _emit_machine({
            "average": report.average,
            "total": report.total,
            "per_verb": [
                {"id": f"{v.sentence_id}:{v.verb_index}",
                 "generation": v.generation,
                 "consolidation": v.consolidation,
                 "total": v.total}
                for v in report.per_verb
            ],
        })
    else:
        print(f"predicates:            {len(report.per_verb)}")
        print(f"total cost:            {report.total:.1f}c")
        print(f"average per predicate: {report.average:.1f}c")
    return 0


def _cmd_consolidate(args) -> int:
    inflections, modals = _lexicons(args)
    first = load_dataset(args.first, args.format, inflections)
    second = load_dataset(args.second, args.format, inflections)
    first_by = {a.predicate: a for a in first.annotations}
    second_by = {a.predicate: a for a in second.annotations}
    shared = sorted(set(first_by) & set(second_by))
    if not shared:
        raise ValueError("the two sources annotate disjoint predicate sets")

    if args.check:
        return _check_consolidation(args, first_by, second_by, shared, inflections, modals)

    out = open(args.out, "w", encoding="utf-8") if args.out else None
    try:
        total_conflicts = 0
        for key in shared:
            annotation = first_by[key]
            proposal = propose(annotation, second_by[key],
                               first.sentences.get(key[0]), modals)
            total_conflicts += len(proposal.conflicts)
            if out is not None:
                out.write(json.dumps(_proposal_record(proposal), sort_keys=True,
                                     separators=(",", ":")) + "\n")
            print(f"{key[0]}:{key[1]}: {len(proposal.groups)} role groups, "
                  f"{len(proposal.conflicts)} conflicts")
            for conflict in proposal.conflicts:
                line = f"  [{conflict.kind}] {conflict.detail}"
                if conflict.split_suggestion:
                    pieces = ", ".join(f"[{s.start}, {s.end})"
                                       for s in conflict.split_suggestion)
                    line += f" -> suggest split {pieces}"
                print(line)
        print(f"{len(shared)} predicates, {total_conflicts} conflicts to review")
    finally:
        if out is not None:
            out.close()
    return 0


def _check_consolidation(args, first_by, second_by, shared, inflections, modals) -> int:
    consolidated = load_dataset(args.check, GOLD_JSONL, inflections)
    violations = 0
    for annotation in consolidated.annotations:
        key = annotation.predicate
        if key not in first_by or key not in second_by:
            print(f"{key[0]}:{key[1]}: no source annotations, skipped")
            continue
        report = validate_consolidation(annotation, first_by[key], second_by[key],
                                        modals)
        for violation in report.violations:
            violations += 1
            print(f"{key[0]}:{key[1]}: {violation.code}: {violation.message}")
        for qi in report.novel_roles:
            print(f"{key[0]}:{key[1]}: NOVEL_ROLE: qa #{qi} matches no source role")
    print(f"{violations} violations")
    return 1 if violations else 0


def _proposal_record(proposal) -> dict:
    return {
        "sentence_id": proposal.sentence_id,
        "verb_index": proposal.verb_index,
        "groups": [
            {
                "signature": {
                    "wh": g.signature.wh,
                    "subj": g.signature.subj,
                    "obj": g.signature.obj,
                    "negated": g.signature.negated,
                    "voice": g.signature.voice,
                    "modal": g.signature.modal,
                },
                "questions": [
                    {"source": item.source,
                     "question_string": render_question(item.qa.question)}
                    for item in g.qas
                ],
                "answers": [{"start": s.start, "end": s.end} for s in g.answers],
                "flags": list(g.flags),
            }
            for g in proposal.groups
        ],
        "conflicts": [
            {
                "kind": c.kind,
                "detail": c.detail,
                "split_suggestion": [{"start": s.start, "end": s.end}
                                     for s in c.split_suggestion],
            }
            for c in proposal.conflicts
        ],
    }


def _cmd_propbank(args) -> int:
    inflections, _ = _lexicons(args)
    gold = load_dataset(args.gold, args.gold_format, inflections)
    frames = load_propbank(args.propbank)
    results = {
        name: compare_propbank(gold, frames, name, args.iou_threshold)
        for name in ("all", "core", "adjunct")
    }
    if args.report == MACHINE:
        _emit_machine({
            name: {"precision": s.precision, "recall": s.recall, "f1": s.f1}
            for name, s in results.items()
        })
    else:
        print(_scores_table([
            ("All", results["all"]),
            ("Core", results["core"]),
            ("Adj.", results["adjunct"]),
        ]))
    return 0


if __name__ == "__main__":
    sys.exit(main())
