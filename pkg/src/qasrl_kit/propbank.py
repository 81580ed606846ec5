"""Cross-scheme agreement between QA annotations and PropBank-style frames.

PropBank arguments arrive in a simplified span-column format (tab-separated
``sentence_id  pred_index  label  start  end``, one argument per line; a
two-column line declares a predicate with no arguments).  Arguments A0-A5
are core roles and AM-* labels are adjuncts; on the QA side a span counts
as core when its question's WH word is "who" or "what".

Agreement treats the PropBank data as the reference set and reports
macro-averaged (over predicates) precision and recall under the unlabeled
span-matching criterion.  Matching never crosses the core/adjunct boundary,
so per-predicate true positives decompose exactly into core + adjunct.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from statistics import fmean

from .alignment import DEFAULT_IOU_THRESHOLD, align
from .data import AnnotationSet, LoadError, Span
from .metrics import Scores, _f1
from .questions import QuestionSlots

__all__ = [
    "CORE", "ADJUNCT", "CLASS_FILTERS", "CORE_LABELS", "CORE_WH_WORDS",
    "PropBankArg", "PropBankFrame", "classify_label", "classify_question",
    "load_propbank", "compare_propbank",
]

CORE = "core"
ADJUNCT = "adjunct"
CLASS_FILTERS = ("all", CORE, ADJUNCT)

CORE_LABELS = frozenset({"A0", "A1", "A2", "A3", "A4", "A5"})
CORE_WH_WORDS = frozenset({"who", "what"})

_ADJUNCT_LABEL = re.compile(r"^AM-[A-Z]+$")


@dataclass(frozen=True)
class PropBankArg:
    label: str
    span: Span


@dataclass(frozen=True)
class PropBankFrame:
    sentence_id: str
    pred_index: int
    args: tuple[PropBankArg, ...]

    @property
    def predicate(self) -> tuple[str, int]:
        return (self.sentence_id, self.pred_index)


def classify_label(label: str) -> str:
    return CORE if label in CORE_LABELS else ADJUNCT


def classify_question(question: QuestionSlots) -> str:
    return CORE if question.wh.lower() in CORE_WH_WORDS else ADJUNCT


def load_propbank(path) -> list[PropBankFrame]:
    """Read a span-column PropBank file; frames keep first-appearance order
    and argument-less predicates are retained."""
    frames: dict[tuple[str, int], list[PropBankArg]] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            body = line.rstrip("\n")
            if not body.strip():
                continue
            where = f"{path}:{lineno}"
            columns = body.split("\t")
            if len(columns) == 2:
                key = _frame_key(columns, where)
                frames.setdefault(key, [])
                continue
            if len(columns) != 5:
                raise LoadError(f"{where}: expected 2 or 5 tab-separated columns, "
                                f"got {len(columns)}")
            key = _frame_key(columns[:2], where)
            label = columns[2].strip()
            if label not in CORE_LABELS and not _ADJUNCT_LABEL.match(label):
                raise LoadError(f"{where}: unknown argument label {label!r}")
            try:
                span = Span(int(columns[3]), int(columns[4]))
            except ValueError as exc:
                raise LoadError(f"{where}: bad span: {exc}") from exc
            frames.setdefault(key, []).append(PropBankArg(label=label, span=span))
    return [
        PropBankFrame(sentence_id=key[0], pred_index=key[1], args=tuple(args))
        for key, args in frames.items()
    ]


def _frame_key(columns: list[str], where: str) -> tuple[str, int]:
    sentence_id = columns[0].strip()
    if not sentence_id:
        raise LoadError(f"{where}: empty sentence id")
    try:
        pred_index = int(columns[1])
    except ValueError as exc:
        raise LoadError(f"{where}: bad predicate index {columns[1]!r}") from exc
    if pred_index < 0:
        raise LoadError(f"{where}: negative predicate index")
    return (sentence_id, pred_index)


def compare_propbank(
    qasrl: AnnotationSet,
    frames: list[PropBankFrame],
    class_filter: str = "all",
    iou_threshold: float = DEFAULT_IOU_THRESHOLD,
) -> Scores:
    """Macro-averaged agreement with PropBank as the reference.

    Precision averages over predicates with at least one QA span surviving
    the class filter; recall averages over predicates with at least one
    surviving PropBank argument.
    """
    if class_filter not in CLASS_FILTERS:
        raise ValueError(f"class_filter must be one of {CLASS_FILTERS}")
    qa_by: dict[tuple[str, int], list[tuple[Span, str]]] = {}
    for annotation in qasrl.annotations:
        units = qa_by.setdefault(annotation.predicate, [])
        for qa in annotation.qa_pairs:
            role_class = classify_question(qa.question)
            units.extend((span, role_class) for span in qa.answers)
    pb_by = {frame.predicate: frame for frame in frames}

    shared = sorted(set(qa_by) & set(pb_by))
    if not shared:
        raise ValueError("no shared predicates between the QA set and PropBank")

    wanted = (CORE, ADJUNCT) if class_filter == "all" else (class_filter,)
    precisions: list[float] = []
    recalls: list[float] = []
    for key in shared:
        qa_units = [(s, c) for s, c in qa_by[key] if c in wanted]
        pb_args = [(a.span, classify_label(a.label)) for a in pb_by[key].args
                   if classify_label(a.label) in wanted]
        tp = 0
        for role_class in wanted:
            qa_spans = [s for s, c in qa_units if c == role_class]
            pb_spans = [s for s, c in pb_args if c == role_class]
            tp += len(align(qa_spans, pb_spans, iou_threshold).pairs)
        if qa_units:
            precisions.append(tp / len(qa_units))
        if pb_args:
            recalls.append(tp / len(pb_args))

    precision = fmean(precisions) if precisions else 0.0
    recall = fmean(recalls) if recalls else 0.0
    return Scores(precision, recall, _f1(precision, recall))
