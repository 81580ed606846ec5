"""Machine-side support for consolidating two generators' annotations.

``propose`` merges two workers' QA sets for one verb into signature-keyed
groups with every disagreement flagged for a human reviewer: overlapping
answer spans (with a deterministic split suggestion), question variants
that share a relaxed role key but differ in strict signature, and roles
seen by only one worker.  The tool never resolves a conflict on its own.

``validate_consolidation`` checks a human-produced consolidation against
its two sources.
"""

from __future__ import annotations

from dataclasses import dataclass

from .data import QAPair, Sentence, Span, VerbAnnotation, Violation
from .questions import DEFAULT_MODALS, StrictSignature, render_question, signature

__all__ = [
    "ANSWER_OVERLAP", "QUESTION_VARIANT", "SINGLETON", "NOVEL_ROLE",
    "SourcedQA", "ProposalGroup", "Conflict", "ConsolidationProposal",
    "ConsolidationReport", "relaxed_key", "propose", "validate_consolidation",
]

ANSWER_OVERLAP = "ANSWER_OVERLAP"
QUESTION_VARIANT = "QUESTION_VARIANT"
SINGLETON = "SINGLETON"
NOVEL_ROLE = "NOVEL_ROLE"

# Tokens treated as boundaries when trimming split suggestions.
_PUNCTUATION = frozenset({
    "(", ")", "[", "]", "{", "}", ",", ".", ";", ":", "-", "--",
    "''", "``", '"', "'",
})


def relaxed_key(sig: StrictSignature) -> tuple:
    """Coarser role key ignoring negation and modality; used to spot
    question variants and novel roles."""
    return (sig.wh, sig.subj, sig.obj, sig.voice)


@dataclass(frozen=True)
class SourcedQA:
    origin: int  # 0 = first annotator, 1 = second
    source: str
    qa: QAPair


@dataclass(frozen=True)
class ProposalGroup:
    signature: StrictSignature
    qas: tuple[SourcedQA, ...]
    answers: tuple[Span, ...]  # union, deduplicated, sorted
    flags: tuple[str, ...]


@dataclass(frozen=True)
class Conflict:
    kind: str
    detail: str
    split_suggestion: tuple[Span, ...] = ()


@dataclass(frozen=True)
class ConsolidationProposal:
    sentence_id: str
    verb_index: int
    groups: tuple[ProposalGroup, ...]
    conflicts: tuple[Conflict, ...]


@dataclass(frozen=True)
class ConsolidationReport:
    violations: tuple[Violation, ...]
    novel_roles: tuple[int, ...]  # indices into the consolidation's qa_pairs

    @property
    def ok(self) -> bool:
        return not self.violations


def propose(
    a1: VerbAnnotation,
    a2: VerbAnnotation,
    sentence: Sentence | None = None,
    modals: frozenset[str] = DEFAULT_MODALS,
) -> ConsolidationProposal:
    """Merge two single-worker annotations of one verb into a reviewable
    proposal.  ``sentence`` enables punctuation-aware split suggestions."""
    if a1.predicate != a2.predicate:
        raise ValueError(f"predicate mismatch: {a1.predicate} vs {a2.predicate}")

    sourced = [SourcedQA(0, a1.source, qa) for qa in a1.qa_pairs]
    sourced += [SourcedQA(1, a2.source, qa) for qa in a2.qa_pairs]

    grouped: dict[StrictSignature, list[SourcedQA]] = {}
    for item in sourced:
        sig = signature(item.qa.question, a1.verb_forms, modals)
        grouped.setdefault(sig, []).append(item)

    conflicts: list[Conflict] = []
    flags: dict[StrictSignature, list[str]] = {sig: [] for sig in grouped}

    # Cluster signature groups by relaxed key to detect variants/singletons.
    clusters: dict[tuple, list[StrictSignature]] = {}
    for sig in grouped:
        clusters.setdefault(relaxed_key(sig), []).append(sig)
    for key, sigs in clusters.items():
        # A variant is a disagreement: the two sources used different
        # signature sets for one relaxed role key.  Identical variant
        # structure on both sides (as in self-merging) is not a conflict.
        per_origin = [
            {sig for sig in sigs if any(item.origin == o for item in grouped[sig])}
            for o in (0, 1)
        ]
        if len(sigs) > 1 and per_origin[0] != per_origin[1]:
            questions = " | ".join(
                render_question(grouped[sig][0].qa.question) for sig in sigs
            )
            conflicts.append(Conflict(
                QUESTION_VARIANT,
                f"{len(sigs)} question variants for role {key}: {questions}",
            ))
            for sig in sigs:
                flags[sig].append(QUESTION_VARIANT)
        origins = {item.origin for sig in sigs for item in grouped[sig]}
        if len(origins) == 1:
            only = grouped[sigs[0]][0].source
            conflicts.append(Conflict(
                SINGLETON,
                f"role {key} appears only in source {only!r}",
            ))
            for sig in sigs:
                flags[sig].append(SINGLETON)

    groups: list[ProposalGroup] = []
    for sig, items in grouped.items():
        answers = sorted(
            {span for item in items for span in item.qa.answers},
            key=lambda s: (s.start, s.end),
        )
        for overlap in _cross_source_overlaps(items):
            suggestion = _split_suggestion(*overlap, sentence)
            conflicts.append(Conflict(
                ANSWER_OVERLAP,
                f"overlapping answers for {render_question(items[0].qa.question)!r}: "
                f"[{overlap[0].start}, {overlap[0].end}) vs "
                f"[{overlap[1].start}, {overlap[1].end})",
                split_suggestion=suggestion,
            ))
            if ANSWER_OVERLAP not in flags[sig]:
                flags[sig].append(ANSWER_OVERLAP)
        groups.append(ProposalGroup(
            signature=sig,
            qas=tuple(items),
            answers=tuple(answers),
            flags=tuple(sorted(set(flags[sig]))),
        ))

    return ConsolidationProposal(
        sentence_id=a1.sentence_id,
        verb_index=a1.verb_index,
        groups=tuple(groups),
        conflicts=tuple(conflicts),
    )


def _cross_source_overlaps(items: list[SourcedQA]) -> list[tuple[Span, Span]]:
    """Overlapping span pairs that represent a genuine cross-source
    disagreement: each side's span is absent from the other source."""
    spans = {0: set(), 1: set()}
    for item in items:
        spans[item.origin].update(item.qa.answers)
    exclusive0 = spans[0] - spans[1]
    exclusive1 = spans[1] - spans[0]
    pairs = []
    for a in sorted(exclusive0, key=lambda s: (s.start, s.end)):
        for b in sorted(exclusive1, key=lambda s: (s.start, s.end)):
            if a != b and a.overlaps(b):
                pairs.append((a, b))
    return pairs


def _split_suggestion(a: Span, b: Span, sentence: Sentence | None) -> tuple[Span, ...]:
    """Longest non-overlapping decomposition of the longer span along the
    shorter one's boundaries, with punctuation-only edges trimmed."""
    longer, shorter = (a, b) if len(a) >= len(b) else (b, a)
    cuts = sorted({longer.start, longer.end,
                   max(longer.start, shorter.start),
                   min(longer.end, shorter.end)})
    pieces = []
    for start, end in zip(cuts, cuts[1:]):
        if start >= end:
            continue
        trimmed = _trim_punctuation(Span(start, end), sentence)
        if trimmed is not None:
            pieces.append(trimmed)
    return tuple(pieces)


def _trim_punctuation(span: Span, sentence: Sentence | None) -> Span | None:
    if sentence is None:
        return span
    start, end = span.start, span.end
    while start < end and sentence.tokens[start] in _PUNCTUATION:
        start += 1
    while end > start and sentence.tokens[end - 1] in _PUNCTUATION:
        end -= 1
    return Span(start, end) if start < end else None


def validate_consolidation(
    consolidated: VerbAnnotation,
    source1: VerbAnnotation,
    source2: VerbAnnotation,
    modals: frozenset[str] = DEFAULT_MODALS,
) -> ConsolidationReport:
    """Check a consolidation against its two sources.

    Duplicate strict signatures and overlapping answers within one QA are
    violations; a role whose relaxed key appears in neither source is
    allowed but reported as novel.
    """
    for source in (source1, source2):
        if consolidated.predicate != source.predicate:
            raise ValueError(
                f"predicate mismatch: {consolidated.predicate} vs {source.predicate}"
            )
    sid, vi = consolidated.predicate
    forms = consolidated.verb_forms
    violations: list[Violation] = []

    signatures = [signature(qa.question, forms, modals) for qa in consolidated.qa_pairs]
    seen: set[StrictSignature] = set()
    for qi, sig in enumerate(signatures):
        if sig in seen:
            violations.append(Violation(
                "DUPLICATE_ROLE", sid, vi,
                f"qa #{qi} repeats the strict signature of an earlier question",
            ))
        seen.add(sig)
    for qi, qa in enumerate(consolidated.qa_pairs):
        for i, first in enumerate(qa.answers):
            if any(first.overlaps(other) for other in qa.answers[i + 1:]):
                violations.append(Violation(
                    "OVERLAPPING_ANSWERS", sid, vi,
                    f"qa #{qi} has overlapping answer spans",
                ))
                break

    source_keys = {
        relaxed_key(signature(qa.question, forms, modals))
        for source in (source1, source2)
        for qa in source.qa_pairs
    }
    novel = tuple(
        qi for qi, sig in enumerate(signatures)
        if relaxed_key(sig) not in source_keys
    )
    return ConsolidationReport(violations=tuple(violations), novel_roles=novel)
