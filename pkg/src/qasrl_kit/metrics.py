"""Argument-detection metrics over aligned spans.

Evaluation units are flattened (answer span, owning question) pairs.  UA
credits every bipartite-aligned span; LA additionally requires the owning
questions to pass strict matching.  The redundancy-aware variant discards
unmatched predictions that still hit some reference span and collapses the
remaining overlapping false positives into connected components, so that
redundant output is not penalized once per duplicate.

Also here: micro/macro aggregation, pairwise inter-annotator agreement,
dataset statistics, and annotation cost accounting.
"""

from __future__ import annotations

import multiprocessing
from dataclasses import dataclass
from statistics import fmean

from .alignment import DEFAULT_IOU_THRESHOLD, IouThreshold, align, iou
from .data import AnnotationSet, Span, VerbAnnotation, SOURCE_CONSOLIDATED, SOURCE_PARSER
from .questions import DEFAULT_MODALS, strict_match

__all__ = [
    "UA", "LA", "MICRO", "MACRO",
    "Counts", "Scores", "EvalConfig", "CostSchedule", "VerbCost", "CostReport",
    "DatasetStats", "evaluate_verb", "evaluate_verb_redundant", "aggregate",
    "evaluate_annotation_sets", "iaa_pairwise", "dataset_stats", "cost",
    "merge_redundant", "build_report",
]

UA = "ua"
LA = "la"
MICRO = "micro"
MACRO = "macro"


@dataclass(frozen=True)
class Counts:
    """Additive true/false positive/negative tallies for one or more verbs.

    Zero-denominator conventions: a score with an empty denominator is 1.0
    when the other error count is also zero (empty prediction against empty
    reference is perfect) and 0.0 otherwise.
    """

    tp: int = 0
    fp: int = 0
    fn: int = 0

    def __post_init__(self) -> None:
        if min(self.tp, self.fp, self.fn) < 0:
            raise ValueError("counts must be non-negative")

    def __add__(self, other: "Counts") -> "Counts":
        return Counts(self.tp + other.tp, self.fp + other.fp, self.fn + other.fn)

    @property
    def precision(self) -> float:
        if self.tp + self.fp == 0:
            return 1.0 if self.fn == 0 else 0.0
        return self.tp / (self.tp + self.fp)

    @property
    def recall(self) -> float:
        if self.tp + self.fn == 0:
            return 1.0 if self.fp == 0 else 0.0
        return self.tp / (self.tp + self.fn)

    @property
    def f1(self) -> float:
        return _f1(self.precision, self.recall)


@dataclass(frozen=True)
class Scores:
    precision: float
    recall: float
    f1: float


def _f1(precision: float, recall: float) -> float:
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


@dataclass(frozen=True)
class EvalConfig:
    """One evaluation run's settings.

    ``la_ignore_requires_label`` controls whether, under LA, an unmatched
    redundant prediction must also strict-match the reference question it
    overlaps before being discarded (on by default).
    """

    mode: str = UA
    redundant: bool = False
    aggregation: str = MICRO
    iou_threshold: float = DEFAULT_IOU_THRESHOLD
    la_ignore_requires_label: bool = True
    modals: frozenset[str] = DEFAULT_MODALS

    def __post_init__(self) -> None:
        if self.mode not in (UA, LA):
            raise ValueError(f"mode must be {UA!r} or {LA!r}, got {self.mode!r}")
        if self.aggregation not in (MICRO, MACRO):
            raise ValueError(f"aggregation must be {MICRO!r} or {MACRO!r}")
        IouThreshold(self.iou_threshold)


def _units(annotation: VerbAnnotation) -> list[tuple[int, Span]]:
    """Flattened (owning question index, answer span) evaluation units."""
    return [(qi, span)
            for qi, qa in enumerate(annotation.qa_pairs)
            for span in qa.answers]


def _check_same_predicate(pred: VerbAnnotation, gold: VerbAnnotation) -> None:
    if pred.predicate != gold.predicate:
        raise ValueError(
            f"predicate mismatch: {pred.predicate} vs {gold.predicate}"
        )


def _aligned_tp_pairs(
    pred: VerbAnnotation,
    gold: VerbAnnotation,
    cfg: EvalConfig,
) -> tuple[list[tuple[int, Span]], list[tuple[int, Span]], list[tuple[int, int]]]:
    pred_units = _units(pred)
    gold_units = _units(gold)
    result = align([s for _, s in pred_units], [s for _, s in gold_units],
                   cfg.iou_threshold)
    tp_pairs = [(i, j) for i, j, _ in result.pairs]
    if cfg.mode == LA:
        tp_pairs = [
            (i, j) for i, j in tp_pairs
            if strict_match(
                pred.qa_pairs[pred_units[i][0]].question,
                gold.qa_pairs[gold_units[j][0]].question,
                gold.verb_forms,
                cfg.modals,
            )
        ]
    return pred_units, gold_units, tp_pairs


def evaluate_verb(pred: VerbAnnotation, gold: VerbAnnotation,
                  cfg: EvalConfig = EvalConfig()) -> Counts:
    """Score one non-redundant prediction against one consolidated reference."""
    _check_same_predicate(pred, gold)
    pred_units, gold_units, tp_pairs = _aligned_tp_pairs(pred, gold, cfg)
    tp = len(tp_pairs)
    return Counts(tp=tp, fp=len(pred_units) - tp, fn=len(gold_units) - tp)


def evaluate_verb_redundant(pred: VerbAnnotation, gold: VerbAnnotation,
                            cfg: EvalConfig = EvalConfig()) -> Counts:
    """Score a redundant prediction, forgiving duplicates of credited spans.

    Predicted spans that did not contribute a true positive are discarded
    when they still reach the IOU threshold against some reference span
    (under LA, when they also strict-match that span's question, unless
    configured otherwise).  Whatever remains is grouped into connected
    components of mutually overlapping spans, each costing one false
    positive.
    """
    _check_same_predicate(pred, gold)
    pred_units, gold_units, tp_pairs = _aligned_tp_pairs(pred, gold, cfg)
    tp_pred = {i for i, _ in tp_pairs}
    matched_gold = {j for _, j in tp_pairs}

    require_label = cfg.mode == LA and cfg.la_ignore_requires_label
    leftovers = []
    for i in range(len(pred_units)):
        if i in tp_pred:
            continue
        if any(
            iou(pred_units[i][1], gold_span) >= cfg.iou_threshold
            and (
                not require_label
                or strict_match(
                    pred.qa_pairs[pred_units[i][0]].question,
                    gold.qa_pairs[gold_qi].question,
                    gold.verb_forms,
                    cfg.modals,
                )
            )
            for gold_qi, gold_span in gold_units
        ):
            continue  # redundant duplicate of a credited reference span
        leftovers.append(pred_units[i][1])

    return Counts(
        tp=len(tp_pairs),
        fp=_overlap_components(leftovers),
        fn=len(gold_units) - len(matched_gold),
    )


def _overlap_components(spans: list[Span]) -> int:
    parent = list(range(len(spans)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in range(len(spans)):
        for j in range(i + 1, len(spans)):
            if spans[i].overlaps(spans[j]):
                parent[find(i)] = find(j)
    return len({find(i) for i in range(len(spans))})


def aggregate(per_verb, cfg: EvalConfig = EvalConfig()) -> Scores:
    """Combine per-verb counts into precision/recall/F1.

    Micro sums the counts; macro averages per-verb precision and recall
    (skipping verbs where both sides are empty) and takes the F1 of the
    averages.
    """
    counts = list(per_verb)
    if not counts:
        raise ValueError("nothing to aggregate")
    if cfg.aggregation == MICRO:
        total = Counts()
        for c in counts:
            total = total + c
        return Scores(total.precision, total.recall, total.f1)
    informative = [c for c in counts if c.tp or c.fp or c.fn]
    if not informative:
        raise ValueError("no informative predicates to macro-average")
    precision = fmean(c.precision for c in informative)
    recall = fmean(c.recall for c in informative)
    return Scores(precision, recall, _f1(precision, recall))


def merge_redundant(annotations: list[VerbAnnotation]) -> VerbAnnotation:
    """Concatenate several sources' annotations of one verb into a single
    redundant annotation (used before redundancy-aware scoring)."""
    if not annotations:
        raise ValueError("nothing to merge")
    first = annotations[0]
    for other in annotations[1:]:
        _check_same_predicate(other, first)
    qa_pairs = tuple(qa for a in annotations for qa in a.qa_pairs)
    return VerbAnnotation(
        sentence_id=first.sentence_id,
        verb_index=first.verb_index,
        verb_forms=first.verb_forms,
        source="+".join(dict.fromkeys(a.source for a in annotations)),
        qa_pairs=qa_pairs,
    )


def _empty_like(reference: VerbAnnotation, source: str) -> VerbAnnotation:
    return VerbAnnotation(
        sentence_id=reference.sentence_id,
        verb_index=reference.verb_index,
        verb_forms=reference.verb_forms,
        source=source,
        qa_pairs=(),
    )


def _index_unique(annotation_set: AnnotationSet, role: str) -> dict[tuple[str, int], VerbAnnotation]:
    indexed: dict[tuple[str, int], VerbAnnotation] = {}
    for annotation in annotation_set.annotations:
        if annotation.predicate in indexed:
            raise ValueError(
                f"{role} set has multiple annotations for predicate "
                f"{annotation.predicate}"
            )
        indexed[annotation.predicate] = annotation
    return indexed


def _evaluate_item(task: tuple[VerbAnnotation, VerbAnnotation, EvalConfig]) -> Counts:
    pred, gold, cfg = task
    if cfg.redundant:
        return evaluate_verb_redundant(pred, gold, cfg)
    return evaluate_verb(pred, gold, cfg)


def evaluate_annotation_sets(
    pred_set: AnnotationSet,
    gold_set: AnnotationSet,
    cfg: EvalConfig = EvalConfig(),
    workers: int = 1,
) -> list[tuple[tuple[str, int], Counts]]:
    """Per-predicate counts over the union of both sets' predicates.

    A predicate present on only one side scores against an empty annotation.
    Multiple prediction sources for one verb are merged when the
    configuration is redundant and rejected otherwise.  Results are keyed
    and ordered by (sentence id, verb index); the optional process pool
    never changes the output.
    """
    gold_by = _index_unique(gold_set, "reference")
    pred_by = pred_set.by_predicate()
    keys = sorted(set(gold_by) | set(pred_by))

    tasks: list[tuple[VerbAnnotation, VerbAnnotation, EvalConfig]] = []
    for key in keys:
        gold_ann = gold_by.get(key)
        pred_anns = pred_by.get(key, [])
        if len(pred_anns) > 1:
            if not cfg.redundant:
                raise ValueError(
                    f"multiple prediction annotations for {key}; "
                    "use a redundant evaluation"
                )
            pred_ann = merge_redundant(pred_anns)
        elif pred_anns:
            pred_ann = pred_anns[0]
        else:
            pred_ann = _empty_like(gold_ann, "empty")
        if gold_ann is None:
            gold_ann = _empty_like(pred_ann, "empty")
        tasks.append((pred_ann, gold_ann, cfg))

    if workers > 1 and len(tasks) > 1:
        with multiprocessing.Pool(processes=workers) as pool:
            counts = pool.map(_evaluate_item, tasks)
    else:
        counts = [_evaluate_item(task) for task in tasks]
    return list(zip(keys, counts))


def iaa_pairwise(a: AnnotationSet, b: AnnotationSet,
                 cfg: EvalConfig = EvalConfig()) -> float:
    """Agreement F1 between two annotation sources over shared predicates.

    Exactly symmetric in its arguments for unlabeled evaluation: swapping
    them swaps precision and recall, leaving F1 unchanged.
    """
    a_by = _index_unique(a, "first")
    b_by = _index_unique(b, "second")
    shared = sorted(set(a_by) & set(b_by))
    if not shared:
        raise ValueError("the two sets annotate disjoint predicate sets")
    evaluate = evaluate_verb_redundant if cfg.redundant else evaluate_verb
    per_verb = [evaluate(a_by[key], b_by[key], cfg) for key in shared]
    return aggregate(per_verb, cfg).f1


@dataclass(frozen=True)
class DatasetStats:
    verbs: int
    roles_total: int
    questions_per_verb: float
    answers_per_question: float


def dataset_stats(annotation_set: AnnotationSet) -> DatasetStats:
    verbs = len(annotation_set.annotations)
    questions = sum(len(a.qa_pairs) for a in annotation_set.annotations)
    answers = sum(len(qa.answers)
                  for a in annotation_set.annotations
                  for qa in a.qa_pairs)
    return DatasetStats(
        verbs=verbs,
        roles_total=questions,
        questions_per_verb=questions / verbs if verbs else 0.0,
        answers_per_question=answers / questions if questions else 0.0,
    )


@dataclass(frozen=True)
class CostSchedule:
    """Payment rates in cents.

    Generators earn a base rate per predicate plus a bonus for every
    question beyond the first two; the consolidator earns a base rate per
    verb plus a per-question rate.  The bonus size is not part of the
    published rate card; the 2 cent default is this tool's choice and should
    be overridden to match an actual schedule.
    """

    generation_base: float = 5.0
    generation_bonus: float = 2.0
    consolidation_base: float = 5.0
    consolidation_per_question: float = 3.0

    def __post_init__(self) -> None:
        for name in ("generation_base", "generation_bonus",
                     "consolidation_base", "consolidation_per_question"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")


@dataclass(frozen=True)
class VerbCost:
    sentence_id: str
    verb_index: int
    generation: float
    consolidation: float

    @property
    def total(self) -> float:
        return self.generation + self.consolidation


@dataclass(frozen=True)
class CostReport:
    per_verb: tuple[VerbCost, ...]
    average: float
    total: float


def cost(annotation_set: AnnotationSet,
         schedule: CostSchedule = CostSchedule()) -> CostReport:
    """Average and per-verb annotation cost from a set carrying per-worker
    generator annotations and (optionally) the consolidated result."""
    per_verb: list[VerbCost] = []
    for key, annotations in annotation_set.by_predicate().items():
        generators = [a for a in annotations
                      if a.source not in (SOURCE_CONSOLIDATED, SOURCE_PARSER)]
        consolidated = [a for a in annotations if a.source == SOURCE_CONSOLIDATED]
        if not generators:
            raise ValueError(f"missing generator provenance for predicate {key}")
        if len(consolidated) > 1:
            raise ValueError(f"multiple consolidated annotations for predicate {key}")
        generation = sum(
            schedule.generation_base
            + schedule.generation_bonus * max(0, len(a.qa_pairs) - 2)
            for a in generators
        )
        consolidation = (
            schedule.consolidation_base
            + schedule.consolidation_per_question * len(consolidated[0].qa_pairs)
            if consolidated else 0.0
        )
        per_verb.append(VerbCost(key[0], key[1], generation, consolidation))
    per_verb.sort(key=lambda v: (v.sentence_id, v.verb_index))
    total = sum(v.total for v in per_verb)
    return CostReport(
        per_verb=tuple(per_verb),
        average=total / len(per_verb) if per_verb else 0.0,
        total=total,
    )


def build_report(
    cfg: EvalConfig,
    per_predicate: list[tuple[tuple[str, int], Counts]],
    scores: Scores,
) -> dict:
    """Machine-readable evaluation report; byte-stable once serialized with
    sorted keys."""
    return {
        "config": {
            "mode": cfg.mode,
            "redundant": cfg.redundant,
            "aggregation": cfg.aggregation,
            "iou_threshold": cfg.iou_threshold,
        },
        "per_predicate": [
            {"id": f"{key[0]}:{key[1]}", "tp": c.tp, "fp": c.fp, "fn": c.fn}
            for key, c in sorted(per_predicate, key=lambda item: item[0])
        ],
        "totals": {
            "precision": scores.precision,
            "recall": scores.recall,
            "f1": scores.f1,
        },
    }
