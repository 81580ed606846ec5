"""Domain types, JSONL dataset ingestion/serialization, and validation.

Datasets are UTF-8 line-delimited JSON, one verb entry per line:

    {"sentence_id": ..., "tokens": [...], "verb_index": ..,
     "verb_forms": {"stem": .., "present": .., "past": ..,
                    "past_participle": .., "present_participle": ..},
     "source": ..,
     "qas": [{"question_string": ..,
              "slots": {"wh","aux","subj","verb","obj","prep","misc"},
              "answers": [{"start": .., "end": ..}]}]}

The slot decomposition is authoritative; the question string is display
only.  ``tokens`` may be omitted once a sentence id has been declared.  A
record without ``verb_index`` declares a sentence with no annotations.
Three format profiles exist: ``gold-jsonl`` (consolidated, at most one entry
per verb), ``dense-jsonl`` (raw multi-worker; a per-QA ``source`` field may
split one record into per-worker annotations) and ``parser-jsonl``
(model output, possibly redundant).
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass

from .questions import (
    WH_WORDS,
    QuestionSlots,
    UnparseableQuestionError,
    VerbForms,
    heuristic_verb_forms,
    parse_question,
    render_question,
    signature,
)

logger = logging.getLogger(__name__)

GOLD_JSONL = "gold-jsonl"
DENSE_JSONL = "dense-jsonl"
PARSER_JSONL = "parser-jsonl"
FORMATS = (GOLD_JSONL, DENSE_JSONL, PARSER_JSONL)

SOURCE_CONSOLIDATED = "consolidated"
SOURCE_PARSER = "parser"

_DEFAULT_SOURCE = {
    GOLD_JSONL: SOURCE_CONSOLIDATED,
    DENSE_JSONL: "worker",
    PARSER_JSONL: SOURCE_PARSER,
}

_RECORD_FIELDS = {"sentence_id", "tokens", "verb_index", "verb_forms", "source", "qas"}
_QA_FIELDS = {"question_string", "slots", "answers", "source"}
_SLOT_FIELDS = ("wh", "aux", "subj", "verb", "obj", "prep", "misc")
_FORM_FIELDS = ("stem", "present", "past", "past_participle", "present_participle")


class LoadError(ValueError):
    """A record cannot be materialized; the message carries file:line."""


@dataclass(frozen=True)
class Sentence:
    id: str
    tokens: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "tokens", tuple(self.tokens))
        if not self.tokens:
            raise ValueError(f"sentence {self.id!r} has no tokens")


@dataclass(frozen=True)
class Span:
    """Half-open token range [start, end)."""

    start: int
    end: int

    def __post_init__(self) -> None:
        if not (0 <= self.start < self.end):
            raise ValueError(f"invalid span [{self.start}, {self.end})")

    def __len__(self) -> int:
        return self.end - self.start

    def overlaps(self, other: "Span") -> bool:
        return self.start < other.end and other.start < self.end

    def text(self, sentence: Sentence) -> str:
        return " ".join(sentence.tokens[self.start:self.end])


@dataclass(frozen=True)
class QAPair:
    question: QuestionSlots
    answers: tuple[Span, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "answers", tuple(self.answers))
        if not self.answers:
            raise ValueError("a question must have at least one answer span")


@dataclass(frozen=True)
class VerbAnnotation:
    """All QA pairs for one predicate from one source (worker, consolidated
    gold, or parser)."""

    sentence_id: str
    verb_index: int
    verb_forms: VerbForms
    source: str
    qa_pairs: tuple[QAPair, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "qa_pairs", tuple(self.qa_pairs))

    @property
    def predicate(self) -> tuple[str, int]:
        return (self.sentence_id, self.verb_index)


@dataclass(frozen=True)
class AnnotationSet:
    """Sentences plus annotations from one provenance class.

    ``redundant`` is True for raw multi-worker or parser output and False
    for consolidated gold, where at most one annotation may exist per verb.
    """

    sentences: dict[str, Sentence]
    annotations: tuple[VerbAnnotation, ...]
    redundant: bool

    def __post_init__(self) -> None:
        object.__setattr__(self, "annotations", tuple(self.annotations))

    def sentence_for(self, annotation: VerbAnnotation) -> Sentence:
        return self.sentences[annotation.sentence_id]

    def by_predicate(self) -> dict[tuple[str, int], list[VerbAnnotation]]:
        grouped: dict[tuple[str, int], list[VerbAnnotation]] = {}
        for annotation in self.annotations:
            grouped.setdefault(annotation.predicate, []).append(annotation)
        return grouped


@dataclass(frozen=True)
class Violation:
    code: str
    sentence_id: str | None
    verb_index: int | None
    message: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def codes(self) -> list[str]:
        return [v.code for v in self.violations]


def load_dataset(path, fmt: str = GOLD_JSONL, inflections: dict[str, VerbForms] | None = None) -> AnnotationSet:
    """Materialize a line-delimited dataset file.

    Malformed records raise LoadError naming the offending line.
    Unparseable question strings and unknown fields are logged as warnings
    with their locations, never silently dropped.  ``inflections`` is an
    optional shared lexicon consulted when a record omits its verb_forms.
    """
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")
    lexicon = inflections or {}
    sentences: dict[str, Sentence] = {}
    annotations: list[VerbAnnotation] = []
    seen_gold: set[tuple[str, int]] = set()
    warned_fields: set[str] = set()

    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            where = f"{path}:{lineno}"
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise LoadError(f"{where}: invalid JSON: {exc}") from exc
            if not isinstance(record, dict):
                raise LoadError(f"{where}: record is not an object")
            _warn_unknown(record, _RECORD_FIELDS, where, warned_fields)

            sentence = _resolve_sentence(record, sentences, where)
            if "verb_index" not in record:
                if record.get("qas"):
                    raise LoadError(f"{where}: 'qas' present but no 'verb_index'")
                continue

            verb_index = record["verb_index"]
            if not isinstance(verb_index, int) or not 0 <= verb_index < len(sentence.tokens):
                raise LoadError(
                    f"{where}: verb_index {verb_index!r} out of bounds for "
                    f"sentence {sentence.id!r} ({len(sentence.tokens)} tokens)"
                )
            verb_forms = _resolve_verb_forms(
                record.get("verb_forms"), sentence, verb_index, lexicon, where
            )
            record_source = record.get("source") or _DEFAULT_SOURCE[fmt]
            qas_raw = record.get("qas", [])
            if not isinstance(qas_raw, list):
                raise LoadError(f"{where}: 'qas' must be a list")

            # Per-source grouping: dense records may attribute individual
            # QAs to different workers.  Order of first appearance is kept.
            grouped: dict[str, list[QAPair]] = {}
            for index, qa_raw in enumerate(qas_raw):
                parsed = _parse_qa(qa_raw, index, sentence, verb_forms, where, warned_fields)
                if parsed is None:
                    continue
                qa_source, qa = parsed
                if fmt != DENSE_JSONL:
                    qa_source = None
                grouped.setdefault(qa_source or record_source, []).append(qa)
            if not grouped:
                grouped[record_source] = []

            for source, qa_pairs in grouped.items():
                annotation = VerbAnnotation(
                    sentence_id=sentence.id,
                    verb_index=verb_index,
                    verb_forms=verb_forms,
                    source=source,
                    qa_pairs=tuple(qa_pairs),
                )
                if fmt == GOLD_JSONL:
                    if annotation.predicate in seen_gold:
                        raise LoadError(
                            f"{where}: duplicate consolidated entry for verb "
                            f"{verb_index} of sentence {sentence.id!r}"
                        )
                    seen_gold.add(annotation.predicate)
                annotations.append(annotation)

    return AnnotationSet(
        sentences=sentences,
        annotations=tuple(annotations),
        redundant=fmt != GOLD_JSONL,
    )


def _resolve_sentence(record: dict, sentences: dict[str, Sentence], where: str) -> Sentence:
    sentence_id = record.get("sentence_id")
    if not isinstance(sentence_id, str) or not sentence_id:
        raise LoadError(f"{where}: missing or invalid 'sentence_id'")
    tokens = record.get("tokens")
    if tokens is None:
        if sentence_id not in sentences:
            raise LoadError(f"{where}: dangling sentence reference {sentence_id!r}")
        return sentences[sentence_id]
    if not isinstance(tokens, list) or not tokens or not all(
        isinstance(t, str) and t for t in tokens
    ):
        raise LoadError(f"{where}: 'tokens' must be a non-empty list of strings")
    known = sentences.get(sentence_id)
    if known is not None:
        if known.tokens != tuple(tokens):
            raise LoadError(
                f"{where}: sentence {sentence_id!r} redeclared with different tokens"
            )
        return known
    sentence = Sentence(id=sentence_id, tokens=tuple(tokens))
    sentences[sentence_id] = sentence
    return sentence


def _resolve_verb_forms(
    raw,
    sentence: Sentence,
    verb_index: int,
    lexicon: dict[str, VerbForms],
    where: str,
) -> VerbForms:
    if isinstance(raw, dict) and all(
        isinstance(raw.get(f), str) and raw.get(f) for f in _FORM_FIELDS
    ):
        return VerbForms(*(raw[f].lower() for f in _FORM_FIELDS))
    if raw is not None and not isinstance(raw, dict):
        raise LoadError(f"{where}: 'verb_forms' must be an object")

    token = sentence.tokens[verb_index].lower()
    if raw:
        stem = (raw.get("stem") or token).lower()
    else:
        stem = token
    entry = lexicon.get(stem) or _lexicon_by_surface(lexicon, token)
    if entry is not None:
        base = entry
    else:
        base = heuristic_verb_forms(stem)
        logger.warning(
            "%s: LOW_CONFIDENCE verb_forms for %r derived by suffix heuristic",
            where, token,
        )
    if raw:
        fields = {f: (raw.get(f) or getattr(base, f)).lower() for f in _FORM_FIELDS}
        return VerbForms(**fields)
    return base


def _lexicon_by_surface(lexicon: dict[str, VerbForms], token: str) -> VerbForms | None:
    for entry in lexicon.values():
        if token in entry.surface_forms():
            return entry
    return None


def _parse_qa(
    qa_raw,
    index: int,
    sentence: Sentence,
    verb_forms: VerbForms,
    where: str,
    warned_fields: set[str],
) -> tuple[str | None, QAPair] | None:
    if not isinstance(qa_raw, dict):
        raise LoadError(f"{where}: qa #{index} is not an object")
    _warn_unknown(qa_raw, _QA_FIELDS, where, warned_fields)

    slots_raw = qa_raw.get("slots")
    if slots_raw is not None:
        question = _slots_from_record(slots_raw, index, where)
    else:
        text = qa_raw.get("question_string")
        if not isinstance(text, str) or not text:
            raise LoadError(f"{where}: qa #{index} has neither 'slots' nor 'question_string'")
        try:
            question = parse_question(text, verb_forms)
        except UnparseableQuestionError as exc:
            logger.warning("%s: qa #%d skipped, unparseable question: %s", where, index, exc)
            return None

    answers_raw = qa_raw.get("answers")
    if not isinstance(answers_raw, list) or not answers_raw:
        raise LoadError(f"{where}: qa #{index} has no answers")
    answers = []
    for answer in answers_raw:
        if not isinstance(answer, dict) or not isinstance(answer.get("start"), int) \
                or not isinstance(answer.get("end"), int):
            raise LoadError(f"{where}: qa #{index} has a malformed answer span")
        start, end = answer["start"], answer["end"]
        if not (0 <= start < end <= len(sentence.tokens)):
            raise LoadError(
                f"{where}: qa #{index} answer [{start}, {end}) out of bounds for "
                f"sentence {sentence.id!r} ({len(sentence.tokens)} tokens)"
            )
        answers.append(Span(start, end))

    source = qa_raw.get("source")
    if source is not None and not isinstance(source, str):
        raise LoadError(f"{where}: qa #{index} has a non-string source")
    return source, QAPair(question=question, answers=tuple(answers))


def _slots_from_record(slots_raw, index: int, where: str) -> QuestionSlots:
    if not isinstance(slots_raw, dict):
        raise LoadError(f"{where}: qa #{index} 'slots' is not an object")
    values = {}
    for field in _SLOT_FIELDS:
        value = slots_raw.get(field)
        if value is not None and not isinstance(value, str):
            raise LoadError(f"{where}: qa #{index} slot {field!r} is not a string")
        values[field] = value.lower() if value else None
    if not values["wh"] or not values["verb"]:
        raise LoadError(f"{where}: qa #{index} slots must include 'wh' and 'verb'")
    if values["wh"] not in WH_WORDS:
        logger.warning("%s: qa #%d has unknown WH word %r", where, index, values["wh"])
    return QuestionSlots(**values)


def _warn_unknown(record: dict, known: set[str], where: str, warned: set[str]) -> None:
    for field in record:
        if field not in known and field not in warned:
            warned.add(field)
            logger.warning("%s: ignoring unknown field %r", where, field)


def validate(annotation_set: AnnotationSet) -> ValidationReport:
    """Check contextual invariants; violations are data, not failures.

    Consolidated annotations (any annotation in a non-redundant set, or one
    whose source is "consolidated") must additionally be non-redundant:
    no repeated strict signature per verb and no overlapping answers within
    one QA.
    """
    violations: list[Violation] = []
    seen: set[tuple[str, int]] = set()
    for annotation in annotation_set.annotations:
        sid, vi = annotation.predicate
        sentence = annotation_set.sentences.get(sid)
        if sentence is None:
            violations.append(Violation(
                "DANGLING_SENTENCE", sid, vi,
                f"annotation references unknown sentence {sid!r}",
            ))
            continue
        n = len(sentence.tokens)
        if not 0 <= annotation.verb_index < n:
            violations.append(Violation(
                "VERB_INDEX_OUT_OF_BOUNDS", sid, vi,
                f"verb_index {vi} outside sentence of {n} tokens",
            ))
        consolidated = (not annotation_set.redundant
                        or annotation.source == SOURCE_CONSOLIDATED)
        for qi, qa in enumerate(annotation.qa_pairs):
            for span in qa.answers:
                if span.end > n:
                    violations.append(Violation(
                        "SPAN_OUT_OF_BOUNDS", sid, vi,
                        f"qa #{qi} answer [{span.start}, {span.end}) outside "
                        f"sentence of {n} tokens",
                    ))
            if consolidated:
                for i, a in enumerate(qa.answers):
                    if any(a.overlaps(b) for b in qa.answers[i + 1:]):
                        violations.append(Violation(
                            "OVERLAPPING_ANSWERS", sid, vi,
                            f"qa #{qi} has overlapping answer spans",
                        ))
                        break
        if consolidated:
            signatures = [signature(qa.question, annotation.verb_forms)
                          for qa in annotation.qa_pairs]
            if len(set(signatures)) != len(signatures):
                violations.append(Violation(
                    "DUPLICATE_ROLE", sid, vi,
                    "two questions share an identical strict signature",
                ))
            if annotation.predicate in seen:
                violations.append(Violation(
                    "DUPLICATE_VERB", sid, vi,
                    "multiple consolidated annotations for one verb",
                ))
            seen.add(annotation.predicate)
    return ValidationReport(tuple(violations))


def write_dataset(annotation_set: AnnotationSet, path) -> None:
    """Serialize a validated set; load(write(s)) is structurally s."""
    report = validate(annotation_set)
    if not report.ok:
        summary = "; ".join(f"{v.code} at {v.sentence_id}:{v.verb_index}"
                            for v in report.violations)
        raise ValueError(f"refusing to write invalid dataset: {summary}")
    referenced = {a.sentence_id for a in annotation_set.annotations}
    with open(path, "w", encoding="utf-8") as fh:
        for sid, sentence in annotation_set.sentences.items():
            if sid not in referenced:
                fh.write(json.dumps(
                    {"sentence_id": sid, "tokens": list(sentence.tokens)},
                    ensure_ascii=False,
                ) + "\n")
        for annotation in annotation_set.annotations:
            fh.write(json.dumps(
                annotation_record(annotation, annotation_set.sentences[annotation.sentence_id]),
                ensure_ascii=False,
            ) + "\n")


def annotation_record(annotation: VerbAnnotation, sentence: Sentence) -> dict:
    """The JSON object serialized for one verb annotation."""
    return {
        "sentence_id": annotation.sentence_id,
        "tokens": list(sentence.tokens),
        "verb_index": annotation.verb_index,
        "verb_forms": {f: getattr(annotation.verb_forms, f) for f in _FORM_FIELDS},
        "source": annotation.source,
        "qas": [
            {
                "question_string": render_question(qa.question),
                "slots": {f: getattr(qa.question, f) for f in _SLOT_FIELDS},
                "answers": [{"start": s.start, "end": s.end} for s in qa.answers],
            }
            for qa in annotation.qa_pairs
        ],
    }
