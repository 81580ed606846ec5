from __future__ import annotations

import random

import pytest

from conftest import CONTAIN, CUT, IDENTIFY, qa, verb
from qasrl_kit.consolidation import (
    ANSWER_OVERLAP,
    QUESTION_VARIANT,
    SINGLETON,
    propose,
    relaxed_key,
    validate_consolidation,
)
from qasrl_kit.data import Sentence, Span
from qasrl_kit.questions import signature

USGS_SENTENCE = Sentence("wiki.usgs.1", (
    "The", "U.S.", "Geological", "Survey", "(", "USGS", ")", "identified",
    "the", "quake", "early", ".",
))


def worker_usgs(source: str, span: tuple[int, int]):
    return verb(USGS_SENTENCE.id, 7, IDENTIFY, source,
                qa("Who identified something?", IDENTIFY, span))


class TestProposeOverlap:
    def test_overlap_flagged_with_split_suggestion(self):
        # One worker highlighted the parenthetical, the other did not; the
        # suggestion splits the longer span at the shorter span's boundary
        # and trims the parentheses.
        a1 = worker_usgs("w1", (0, 7))
        a2 = worker_usgs("w2", (0, 4))
        proposal = propose(a1, a2, USGS_SENTENCE)
        assert len(proposal.groups) == 1
        group = proposal.groups[0]
        assert group.flags == (ANSWER_OVERLAP,)
        assert group.answers == (Span(0, 4), Span(0, 7))
        overlap = [c for c in proposal.conflicts if c.kind == ANSWER_OVERLAP]
        assert len(overlap) == 1
        assert overlap[0].split_suggestion == (Span(0, 4), Span(5, 6))

    def test_split_without_sentence_keeps_punctuation(self):
        proposal = propose(worker_usgs("w1", (0, 7)), worker_usgs("w2", (0, 4)))
        overlap = [c for c in proposal.conflicts if c.kind == ANSWER_OVERLAP]
        assert overlap[0].split_suggestion == (Span(0, 4), Span(4, 7))

    def test_identical_answers_merge_silently(self):
        a1 = worker_usgs("w1", (0, 4))
        a2 = worker_usgs("w2", (0, 4))
        proposal = propose(a1, a2, USGS_SENTENCE)
        assert proposal.conflicts == ()
        assert proposal.groups[0].answers == (Span(0, 4),)


class TestProposeVariants:
    def test_modality_variant_flagged_but_not_resolved(self):
        a1 = verb("wiki.basin.1", 5, CONTAIN, "w1",
                  qa("What might contain something?", CONTAIN, (2, 4)))
        a2 = verb("wiki.basin.1", 5, CONTAIN, "w2",
                  qa("What contains something?", CONTAIN, (2, 4)))
        proposal = propose(a1, a2)
        assert len(proposal.groups) == 2  # no auto-pick: both variants kept
        assert {g.flags for g in proposal.groups} == {(QUESTION_VARIANT,)}
        kinds = [c.kind for c in proposal.conflicts]
        assert kinds == [QUESTION_VARIANT]

    def test_singleton_roles_kept_and_flagged(self):
        a1 = verb("s", 0, CUT, "w1",
                  qa("Who cut something?", CUT, (0, 1)),
                  qa("Why was something cut by someone?", CUT, (2, 4)))
        a2 = verb("s", 0, CUT, "w2",
                  qa("Who cut something?", CUT, (0, 1)))
        proposal = propose(a1, a2)
        singleton_groups = [g for g in proposal.groups if SINGLETON in g.flags]
        assert len(singleton_groups) == 1
        assert singleton_groups[0].qas[0].qa.question.wh == "why"
        assert [c.kind for c in proposal.conflicts] == [SINGLETON]


class TestProposeInvariants:
    def test_self_merge_has_no_conflicts(self):
        annotation = verb("s", 0, CUT, "w1",
                          qa("Who cut something?", CUT, (0, 1)),
                          qa("Why was something cut by someone?", CUT, (2, 4)))
        proposal = propose(annotation, annotation)
        assert proposal.conflicts == ()
        assert {item.qa for g in proposal.groups for item in g.qas} == \
            set(annotation.qa_pairs)

    def test_self_merge_with_internal_variants_is_clean(self):
        # A single worker may legitimately use two signature-distinct
        # questions for one relaxed key; self-merging must not flag them.
        annotation = verb("s", 0, CONTAIN, "w1",
                          qa("What might contain something?", CONTAIN, (2, 4)),
                          qa("What contains something?", CONTAIN, (5, 6)))
        proposal = propose(annotation, annotation)
        assert proposal.conflicts == ()

    def test_symmetric_up_to_group_order(self):
        rng = random.Random(17)
        pool = [
            "Who cut something?", "What did someone cut?",
            "Why was something cut by someone?", "Who didn't cut something?",
        ]
        for _ in range(50):
            def build(source):
                texts = rng.sample(pool, k=rng.randint(1, 3))
                qa_pairs = []
                for text in texts:
                    start = rng.randrange(8)
                    end = rng.randint(start + 1, min(start + 3, 8))
                    qa_pairs.append(qa(text, CUT, (start, end)))
                return verb("s", 0, CUT, source, *qa_pairs)
            a1, a2 = build("w1"), build("w2")
            forward = propose(a1, a2)
            backward = propose(a2, a1)
            assert {(g.signature, g.answers) for g in forward.groups} == \
                {(g.signature, g.answers) for g in backward.groups}
            assert {c.kind for c in forward.conflicts} == \
                {c.kind for c in backward.conflicts}

    def test_all_answers_come_from_sources(self):
        rng = random.Random(19)
        pool = ["Who cut something?", "What did someone cut?",
                "Where was something cut?"]
        for _ in range(50):
            def build(source):
                qa_pairs = []
                for text in rng.sample(pool, k=rng.randint(1, 3)):
                    start = rng.randrange(8)
                    end = rng.randint(start + 1, min(start + 3, 8))
                    qa_pairs.append(qa(text, CUT, (start, end)))
                return verb("s", 0, CUT, source, *qa_pairs)
            a1, a2 = build("w1"), build("w2")
            source_spans = {span for a in (a1, a2)
                            for qa_pair in a.qa_pairs for span in qa_pair.answers}
            proposal = propose(a1, a2)
            for group in proposal.groups:
                assert set(group.answers) <= source_spans
            for conflict in proposal.conflicts:
                for piece in conflict.split_suggestion:
                    assert any(piece.start >= s.start and piece.end <= s.end
                               for s in source_spans)

    def test_predicate_mismatch_rejected(self):
        a1 = worker_usgs("w1", (0, 4))
        a2 = verb("other", 7, IDENTIFY, "w2",
                  qa("Who identified something?", IDENTIFY, (0, 4)))
        with pytest.raises(ValueError, match="predicate mismatch"):
            propose(a1, a2)


class TestValidateConsolidation:
    def sources(self):
        a1 = verb(USGS_SENTENCE.id, 7, IDENTIFY, "w1",
                  qa("Who identified something?", IDENTIFY, (0, 7)))
        a2 = verb(USGS_SENTENCE.id, 7, IDENTIFY, "w2",
                  qa("Who identified something?", IDENTIFY, (0, 4)))
        return a1, a2

    def test_faithful_consolidation_is_clean(self):
        consolidated = verb(USGS_SENTENCE.id, 7, IDENTIFY, "consolidated",
                            qa("Who identified something?", IDENTIFY, (0, 4), (5, 6)))
        report = validate_consolidation(consolidated, *self.sources())
        assert report.ok
        assert report.novel_roles == ()

    def test_duplicate_signature_is_a_violation(self):
        consolidated = verb(USGS_SENTENCE.id, 7, IDENTIFY, "consolidated",
                            qa("Who identified something?", IDENTIFY, (0, 4)),
                            qa("Who identifies something?", IDENTIFY, (5, 6)))
        report = validate_consolidation(consolidated, *self.sources())
        assert [v.code for v in report.violations] == ["DUPLICATE_ROLE"]

    def test_overlapping_answers_is_a_violation(self):
        consolidated = verb(USGS_SENTENCE.id, 7, IDENTIFY, "consolidated",
                            qa("Who identified something?", IDENTIFY, (0, 4), (3, 6)))
        report = validate_consolidation(consolidated, *self.sources())
        assert [v.code for v in report.violations] == ["OVERLAPPING_ANSWERS"]

    def test_novel_role_reported_but_allowed(self):
        consolidated = verb(USGS_SENTENCE.id, 7, IDENTIFY, "consolidated",
                            qa("Who identified something?", IDENTIFY, (0, 4)),
                            qa("When did someone identify something?", IDENTIFY, (10, 11)))
        report = validate_consolidation(consolidated, *self.sources())
        assert report.ok
        assert report.novel_roles == (1,)


def test_relaxed_key_drops_negation_and_modality():
    base = signature(qa("Who cut something?", CUT, (0, 1)).question, CUT)
    negated = signature(qa("Who didn't cut something?", CUT, (0, 1)).question, CUT)
    assert base != negated
    assert relaxed_key(base) == relaxed_key(negated)
