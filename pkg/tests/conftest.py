"""Shared builders, lexicon constants and hypothesis strategies."""

from __future__ import annotations

from pathlib import Path

import pytest
from hypothesis import strategies as st

from qasrl_kit.data import AnnotationSet, QAPair, Sentence, Span, VerbAnnotation
from qasrl_kit.questions import (
    PLACEHOLDERS,
    WH_WORDS,
    QuestionSlots,
    VerbForms,
    parse_question,
)

FIXTURES = Path(__file__).parent / "fixtures"

CUT = VerbForms("cut", "cuts", "cut", "cut", "cutting")
ARREST = VerbForms("arrest", "arrests", "arrested", "arrested", "arresting")
GIVE = VerbForms("give", "gives", "gave", "given", "giving")
IDENTIFY = VerbForms("identify", "identifies", "identified", "identified", "identifying")
CONTAIN = VerbForms("contain", "contains", "contained", "contained", "containing")
CARRY = VerbForms("carry", "carries", "carried", "carried", "carrying")
SUGGEST = VerbForms("suggest", "suggests", "suggested", "suggested", "suggesting")

VERB_LEXICON = (CUT, ARREST, GIVE, IDENTIFY, CONTAIN, CARRY, SUGGEST)


def qa(text: str, forms: VerbForms, *spans: tuple[int, int]) -> QAPair:
    return QAPair(parse_question(text, forms),
                  tuple(Span(start, end) for start, end in spans))


def verb(sentence_id: str, index: int, forms: VerbForms, source: str,
         *qa_pairs: QAPair) -> VerbAnnotation:
    return VerbAnnotation(
        sentence_id=sentence_id,
        verb_index=index,
        verb_forms=forms,
        source=source,
        qa_pairs=tuple(qa_pairs),
    )


def dataset(sentences: list[Sentence], annotations: list[VerbAnnotation],
            redundant: bool = False) -> AnnotationSet:
    return AnnotationSet(
        sentences={s.id: s for s in sentences},
        annotations=tuple(annotations),
        redundant=redundant,
    )


@pytest.fixture
def gold_cut_path() -> Path:
    return FIXTURES / "gold_cut.jsonl"


# --- hypothesis strategies ---------------------------------------------

def spans(max_len: int = 12) -> st.SearchStrategy[Span]:
    return st.integers(0, max_len - 1).flatmap(
        lambda start: st.integers(start + 1, min(start + 5, max_len)).map(
            lambda end: Span(start, end)
        )
    )


def verb_forms() -> st.SearchStrategy[VerbForms]:
    return st.sampled_from(VERB_LEXICON)


def question_slots(forms: VerbForms) -> st.SearchStrategy[QuestionSlots]:
    verb_variants = [
        forms.stem, forms.present, forms.past,
        f"be {forms.past_participle}", f"been {forms.past_participle}",
        f"being {forms.past_participle}", f"have been {forms.past_participle}",
        forms.present_participle,
    ]
    return st.builds(
        QuestionSlots,
        wh=st.sampled_from(WH_WORDS),
        verb=st.sampled_from(verb_variants),
        aux=st.sampled_from([
            None, "did", "does", "was", "is", "has", "had", "will",
            "might", "would", "can", "must", "should",
            "didn't", "wasn't", "can't", "won't", "did not", "might not",
        ]),
        subj=st.sampled_from((None,) + PLACEHOLDERS),
        obj=st.sampled_from((None,) + PLACEHOLDERS),
        prep=st.sampled_from([None, "to", "by", "for", "with", "from", "out of"]),
        misc=st.sampled_from([None, "someone", "something", "somewhere",
                              "do", "do something"]),
    )


def slots_with_forms() -> st.SearchStrategy[tuple[QuestionSlots, VerbForms]]:
    return verb_forms().flatmap(
        lambda forms: question_slots(forms).map(lambda slots: (slots, forms))
    )
