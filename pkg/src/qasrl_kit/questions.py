"""Seven-slot role questions: parsing, rendering, and strict role signatures.

A role question is the slot sequence ``WH AUX SUBJ VERB OBJ PREP MISC``
followed by a terminal ``?``.  WH words, argument placeholders and
auxiliaries come from closed vocabularies; the verb slot holds an inflected
form of the target verb, optionally preceded by "be"/"been"/"being" or
"have been".  Two questions denote the same role under strict matching iff
they agree on WH, SUBJ, OBJ, negation, voice and modality.
"""

from __future__ import annotations

from dataclasses import dataclass

__all__ = [
    "WH_WORDS",
    "PLACEHOLDERS",
    "DEFAULT_MODALS",
    "ACTIVE",
    "PASSIVE",
    "VerbForms",
    "QuestionSlots",
    "StrictSignature",
    "UnparseableQuestionError",
    "heuristic_verb_forms",
    "parse_question",
    "render_question",
    "signature",
    "strict_match",
    "load_modal_lexicon",
    "load_inflection_lexicon",
]

WH_WORDS: tuple[str, ...] = (
    "who", "what", "when", "where", "why", "how", "how much", "how long",
)
PLACEHOLDERS: tuple[str, ...] = ("someone", "something", "somewhere")

# Factuality-changing modal verbs.  "will" and do-support auxiliaries carry
# tense only and never count as modal.
DEFAULT_MODALS: frozenset[str] = frozenset(
    {"might", "may", "should", "could", "can", "must", "would"}
)

ACTIVE = "active"
PASSIVE = "passive"

_BE_FORMS = frozenset({"be", "been", "being", "am", "is", "are", "was", "were"})
_AUX_BASES = _BE_FORMS | frozenset(
    {
        "do", "does", "did", "have", "has", "had",
        "will", "shall", "can", "could", "may", "might",
        "must", "should", "would",
    }
)
# Contracted negations map to (base, negated).  "can't" and "won't" do not
# decompose by suffix stripping alone.
_NEGATED_CONTRACTIONS = {
    "isn't": "is", "aren't": "are", "wasn't": "was", "weren't": "were",
    "don't": "do", "doesn't": "does", "didn't": "did",
    "hasn't": "has", "haven't": "have", "hadn't": "had",
    "won't": "will", "shan't": "shall", "can't": "can", "cannot": "can",
    "couldn't": "could", "mightn't": "might", "mustn't": "must",
    "shouldn't": "should", "wouldn't": "would",
}

_PREPOSITIONS = frozenset(
    """about above across after against along around as at before behind below
    beneath beside between beyond by despite down during for from in inside
    into like near of off on onto out outside over past since through
    throughout till to toward towards under until up upon with within
    without""".split()
)
_TWO_WORD_PREPOSITIONS = frozenset(
    {"out of", "up to", "due to", "according to", "next to", "away from"}
)

# Prefixes that may precede the inflected form inside the verb slot.
_VERB_PREFIXES: tuple[tuple[str, ...], ...] = (
    ("have", "been"), ("be",), ("been",), ("being",), (),
)


class UnparseableQuestionError(ValueError):
    """No slot assignment is consistent with the template vocabularies."""


@dataclass(frozen=True)
class VerbForms:
    """Inflection record for one target verb."""

    stem: str
    present: str
    past: str
    past_participle: str
    present_participle: str

    def surface_forms(self) -> frozenset[str]:
        return frozenset(
            f.lower()
            for f in (
                self.stem, self.present, self.past,
                self.past_participle, self.present_participle,
            )
            if f
        )


def heuristic_verb_forms(token: str) -> VerbForms:
    """Guess regular inflections from a (possibly inflected) verb token.

    Strips a recognizable -ing/-ed/-en/-es/-s suffix to recover a stem, then
    regenerates regular forms.  Results are low-confidence by nature; callers
    should prefer an explicit inflection record or lexicon when available.
    """
    stem = _strip_inflection(token.lower())
    if stem.endswith("e"):
        present = stem + "s"
        past = stem + "d"
        participle = stem[:-1] + "ing"
    elif len(stem) > 1 and stem.endswith("y") and stem[-2] not in "aeiou":
        present = stem[:-1] + "ies"
        past = stem[:-1] + "ied"
        participle = stem + "ing"
    else:
        present = stem + ("es" if stem.endswith(("s", "sh", "ch", "x", "z", "o")) else "s")
        past = stem + "ed"
        participle = stem + "ing"
    return VerbForms(
        stem=stem,
        present=present,
        past=past,
        past_participle=past,
        present_participle=participle,
    )


def _strip_inflection(token: str) -> str:
    for suffix in ("ing", "ied", "ed", "en", "ies", "es", "s"):
        if token.endswith(suffix) and len(token) - len(suffix) >= 2:
            stem = token[: -len(suffix)]
            if suffix in ("ied", "ies"):
                stem += "y"
            # cutting -> cutt -> cut; legitimate doubles (tell, miss) stay
            if (suffix in ("ing", "ed") and len(stem) >= 3
                    and stem[-1] == stem[-2] and stem[-1] not in "lsfz"):
                stem = stem[:-1]
            return stem
    return token


@dataclass(frozen=True)
class QuestionSlots:
    """One role question decomposed into the seven template slots.

    Slot strings are stored lowercase; rendering recapitalizes the first
    letter.  Optional slots are ``None`` when absent.  The verb slot may be
    multi-word (e.g. "be arrested").
    """

    wh: str
    verb: str
    aux: str | None = None
    subj: str | None = None
    obj: str | None = None
    prep: str | None = None
    misc: str | None = None

    def __post_init__(self) -> None:
        if not self.wh or not self.wh.strip():
            raise ValueError("WH slot must be non-empty")
        if not self.verb or not self.verb.strip():
            raise ValueError("verb slot must be non-empty")


@dataclass(frozen=True)
class StrictSignature:
    """Role-equivalence key: two questions denote the same role iff equal."""

    wh: str
    subj: str | None
    obj: str | None
    negated: bool
    voice: str
    modal: bool


def render_question(slots: QuestionSlots) -> str:
    """Render slots back to a surface question string."""
    parts = [slots.wh, slots.aux, slots.subj, slots.verb,
             slots.obj, slots.prep, slots.misc]
    text = " ".join(p for p in parts if p)
    return text[0].upper() + text[1:] + "?"


def parse_question(text: str, verb_forms: VerbForms) -> QuestionSlots:
    """Assign the tokens of a question string to the seven template slots.

    All candidate slot assignments consistent with the vocabularies are
    enumerated (the space is tiny: at most a few dozen); ambiguity is
    resolved deterministically by preferring the longest verb slot, then the
    longest auxiliary, then an assigned SUBJ.

    Raises UnparseableQuestionError when no assignment exists.
    """
    stripped = text.strip()
    if not stripped.endswith("?"):
        raise UnparseableQuestionError(f"question must end with '?': {text!r}")
    tokens = stripped[:-1].lower().split()
    if not tokens:
        raise UnparseableQuestionError("empty question")

    if len(tokens) >= 2 and " ".join(tokens[:2]) in WH_WORDS:
        wh, rest = " ".join(tokens[:2]), tokens[2:]
    elif tokens[0] in WH_WORDS:
        wh, rest = tokens[0], tokens[1:]
    else:
        raise UnparseableQuestionError(f"unknown WH word in {text!r}")

    candidates: list[tuple[tuple[int, int, int], QuestionSlots]] = []
    for aux_tokens in _aux_options(rest):
        after_aux = rest[len(aux_tokens):]
        for subj in _subj_options(after_aux):
            after_subj = after_aux[1 if subj else 0:]
            for verb_tokens in _verb_options(after_subj, verb_forms):
                obj, prep, misc = _parse_tail(after_subj[len(verb_tokens):])
                rank = (len(verb_tokens), len(aux_tokens), 1 if subj else 0)
                candidates.append((rank, QuestionSlots(
                    wh=wh,
                    verb=" ".join(verb_tokens),
                    aux=" ".join(aux_tokens) or None,
                    subj=subj,
                    obj=obj,
                    prep=prep,
                    misc=misc,
                )))
    if not candidates:
        raise UnparseableQuestionError(
            f"no verb-slot assignment for {text!r} with forms of "
            f"{verb_forms.stem!r}"
        )
    return max(candidates, key=lambda c: c[0])[1]


def _aux_options(tokens: list[str]) -> list[tuple[str, ...]]:
    options: list[tuple[str, ...]] = [()]
    if tokens and (tokens[0] in _AUX_BASES or tokens[0] in _NEGATED_CONTRACTIONS):
        options.append((tokens[0],))
        if tokens[0] in _AUX_BASES and len(tokens) >= 2 and tokens[1] == "not":
            options.append((tokens[0], "not"))
    return options


def _subj_options(tokens: list[str]) -> list[str | None]:
    if tokens and tokens[0] in PLACEHOLDERS:
        return [tokens[0], None]
    return [None]


def _verb_options(tokens: list[str], verb_forms: VerbForms) -> list[tuple[str, ...]]:
    forms = verb_forms.surface_forms()
    options: list[tuple[str, ...]] = []
    for prefix in _VERB_PREFIXES:
        if tuple(tokens[: len(prefix)]) != prefix:
            continue
        remainder = tokens[len(prefix):]
        for form in forms:
            form_tokens = tuple(form.split())
            if tuple(remainder[: len(form_tokens)]) == form_tokens:
                options.append(prefix + form_tokens)
    return options


def _parse_tail(tokens: list[str]) -> tuple[str | None, str | None, str | None]:
    obj = None
    if tokens and tokens[0] in PLACEHOLDERS:
        obj, tokens = tokens[0], tokens[1:]
    prep = None
    if len(tokens) >= 2 and " ".join(tokens[:2]) in _TWO_WORD_PREPOSITIONS:
        prep, tokens = " ".join(tokens[:2]), tokens[2:]
    elif tokens and tokens[0] in _PREPOSITIONS:
        prep, tokens = tokens[0], tokens[1:]
    misc = " ".join(tokens) or None
    return obj, prep, misc


def signature(
    slots: QuestionSlots,
    verb_forms: VerbForms,
    modals: frozenset[str] = DEFAULT_MODALS,
) -> StrictSignature:
    """Derive the strict role-equivalence key from a slot assignment.

    Negation comes from "not"/"n't" in the auxiliary; modality from the
    first auxiliary word; voice is passive iff the verb slot's head token is
    the past participle and a form of "be" precedes it (in the auxiliary or
    inside the verb slot).  Aux-less questions default to active voice.
    """
    aux_words = slots.aux.lower().split() if slots.aux else []
    bases: list[str] = []
    negated = False
    for word in aux_words:
        if word == "not":
            negated = True
        elif word in _NEGATED_CONTRACTIONS:
            bases.append(_NEGATED_CONTRACTIONS[word])
            negated = True
        elif word.endswith("n't"):
            bases.append(word[:-3])
            negated = True
        else:
            bases.append(word)
    modal = bool(bases) and bases[0] in modals

    verb_tokens = slots.verb.lower().split()
    head = verb_tokens[-1]
    be_before = any(t in _BE_FORMS for t in verb_tokens[:-1]) or any(
        b in _BE_FORMS for b in bases
    )
    voice = PASSIVE if head == verb_forms.past_participle.lower() and be_before else ACTIVE

    return StrictSignature(
        wh=slots.wh.lower(),
        subj=_normalize_placeholder(slots.subj),
        obj=_normalize_placeholder(slots.obj),
        negated=negated,
        voice=voice,
        modal=modal,
    )


def _normalize_placeholder(value: str | None) -> str | None:
    return value.lower().strip() if value else None


def strict_match(
    q1: QuestionSlots,
    q2: QuestionSlots,
    verb_forms: VerbForms,
    modals: frozenset[str] = DEFAULT_MODALS,
) -> bool:
    """True iff the two questions denote the same role under strict matching."""
    return signature(q1, verb_forms, modals) == signature(q2, verb_forms, modals)


def load_modal_lexicon(path) -> frozenset[str]:
    """Read a modal lexicon: one auxiliary per line, '#' comments allowed."""
    entries = set()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            word = line.split("#", 1)[0].strip().lower()
            if word:
                entries.add(word)
    return frozenset(entries)


def load_inflection_lexicon(path) -> dict[str, VerbForms]:
    """Read an inflection lexicon: five whitespace-separated forms per line
    (stem, present, past, past participle, present participle)."""
    lexicon: dict[str, VerbForms] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            body = line.split("#", 1)[0].strip()
            if not body:
                continue
            columns = body.lower().split()
            if len(columns) != 5:
                raise ValueError(
                    f"{path}:{lineno}: expected 5 forms, got {len(columns)}"
                )
            lexicon[columns[0]] = VerbForms(*columns)
    return lexicon
