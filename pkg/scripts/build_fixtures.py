#!/usr/bin/env python3
"""Regenerate the bundled fixture files under tests/fixtures/.

The fixtures are small hand-checked datasets: two consolidated gold files,
a redundant parser-output file with its gold counterpart, two single-worker
files sharing the same predicates, a combined worker+consolidated file for
cost accounting, and a PropBank span file.
"""

from __future__ import annotations

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from qasrl_kit.data import AnnotationSet, QAPair, Sentence, Span, VerbAnnotation, write_dataset
from qasrl_kit.questions import VerbForms, parse_question

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"

CUT = VerbForms("cut", "cuts", "cut", "cut", "cutting")
ARREST = VerbForms("arrest", "arrests", "arrested", "arrested", "arresting")
IDENTIFY = VerbForms("identify", "identifies", "identified", "identified", "identifying")
CONTAIN = VerbForms("contain", "contains", "contained", "contained", "containing")
SUGGEST = VerbForms("suggest", "suggests", "suggested", "suggested", "suggesting")
CARRY = VerbForms("carry", "carries", "carried", "carried", "carrying")

PERRY = Sentence("wikinews.perry.1", (
    "Perry", "called", "for", "the", "DA", "'s", "resignation", ",", "and",
    "when", "she", "did", "not", "resign", ",", "cut", "funding", "to", "a",
    "program", "she", "ran", ".",
))
ARRESTED = Sentence("wikinews.arrest.1", (
    "Around", "47", "people", "could", "be", "arrested", ",", "including",
    "the", "councillor", ".",
))
USGS = Sentence("wiki.usgs.1", (
    "The", "U.S.", "Geological", "Survey", "(", "USGS", ")", "identified",
    "the", "quake", "early", ".",
))
BASIN = Sentence("wiki.basin.1", (
    "Experts", "say", "that", "basin", "might", "contain", "oil", ".",
))
REPORTS = Sentence("wiki.reports.1", (
    "Reports", "from", "Minnesota", "suggest", "a", "shortage", ".",
))
CARRIED = Sentence("wiki.carried.1", (
    "They", "were", "carried", "to", "reclining", "chairs", ".",
))


def qa(text: str, forms: VerbForms, *spans: tuple[int, int]) -> QAPair:
    return QAPair(parse_question(text, forms),
                  tuple(Span(start, end) for start, end in spans))


def verb(sentence: Sentence, index: int, forms: VerbForms, source: str,
         *qa_pairs: QAPair) -> VerbAnnotation:
    return VerbAnnotation(
        sentence_id=sentence.id,
        verb_index=index,
        verb_forms=forms,
        source=source,
        qa_pairs=tuple(qa_pairs),
    )


def dataset(sentences: list[Sentence], annotations: list[VerbAnnotation],
            redundant: bool) -> AnnotationSet:
    return AnnotationSet(
        sentences={s.id: s for s in sentences},
        annotations=tuple(annotations),
        redundant=redundant,
    )


def main() -> None:
    FIXTURES.mkdir(parents=True, exist_ok=True)

    gold_cut = dataset(
        [PERRY, ARRESTED],
        [
            verb(PERRY, 15, CUT, "consolidated",
                 qa("Why was something cut by someone?", CUT, (10, 14)),
                 qa("Who cut something?", CUT, (0, 1)),
                 qa("What did someone cut?", CUT, (16, 17))),
            verb(ARRESTED, 5, ARREST, "consolidated",
                 qa("Who might be arrested?", ARREST, (1, 3), (8, 10))),
        ],
        redundant=False,
    )
    write_dataset(gold_cut, FIXTURES / "gold_cut.jsonl")

    gold_identify = dataset(
        [USGS, BASIN],
        [
            verb(USGS, 7, IDENTIFY, "consolidated",
                 qa("Who identified something?", IDENTIFY, (0, 4), (5, 6)),
                 qa("What did someone identify?", IDENTIFY, (8, 10))),
            verb(BASIN, 5, CONTAIN, "consolidated",
                 qa("What might contain something?", CONTAIN, (2, 4)),
                 qa("What might something contain?", CONTAIN, (6, 7))),
        ],
        redundant=False,
    )
    write_dataset(gold_identify, FIXTURES / "gold_identify.jsonl")

    gold_reports = dataset(
        [REPORTS, CARRIED],
        [
            verb(REPORTS, 3, SUGGEST, "consolidated",
                 qa("What suggests something?", SUGGEST, (0, 3))),
            verb(CARRIED, 2, CARRY, "consolidated",
                 qa("Where was someone carried?", CARRY, (3, 6))),
        ],
        redundant=False,
    )
    write_dataset(gold_reports, FIXTURES / "gold_reports.jsonl")

    parser_reports = dataset(
        [REPORTS, CARRIED],
        [
            verb(REPORTS, 3, SUGGEST, "parser",
                 qa("What suggests something?", SUGGEST, (0, 1)),
                 qa("What suggests something?", SUGGEST, (0, 3))),
            verb(CARRIED, 2, CARRY, "parser",
                 qa("Where was someone carried?", CARRY, (3, 6)),
                 qa("What was someone carried to?", CARRY, (4, 6))),
        ],
        redundant=True,
    )
    write_dataset(parser_reports, FIXTURES / "parser_reports.jsonl")

    worker_a = dataset(
        [USGS, BASIN],
        [
            verb(USGS, 7, IDENTIFY, "w1",
                 qa("Who identified something?", IDENTIFY, (0, 7))),
            verb(BASIN, 5, CONTAIN, "w1",
                 qa("What might contain something?", CONTAIN, (2, 4))),
        ],
        redundant=True,
    )
    write_dataset(worker_a, FIXTURES / "worker_a.jsonl")

    worker_b = dataset(
        [USGS, BASIN],
        [
            verb(USGS, 7, IDENTIFY, "w2",
                 qa("Who identified something?", IDENTIFY, (0, 4))),
            verb(BASIN, 5, CONTAIN, "w2",
                 qa("What contains something?", CONTAIN, (2, 4))),
        ],
        redundant=True,
    )
    write_dataset(worker_b, FIXTURES / "worker_b.jsonl")

    combined = dataset(
        [USGS, BASIN],
        [
            worker_a.annotations[0],
            worker_b.annotations[0],
            gold_identify.annotations[0],
            worker_a.annotations[1],
            worker_b.annotations[1],
            verb(BASIN, 5, CONTAIN, "consolidated",
                 qa("What might contain something?", CONTAIN, (2, 4))),
        ],
        redundant=True,
    )
    write_dataset(combined, FIXTURES / "dense_combined.jsonl")

    propbank_rows = [
        (PERRY.id, 15, "A0", 0, 1),
        (PERRY.id, 15, "A1", 16, 17),
        (PERRY.id, 15, "AM-TMP", 9, 14),
        (ARRESTED.id, 5, "A1", 1, 3),
    ]
    with open(FIXTURES / "propbank_cut.tsv", "w", encoding="utf-8") as fh:
        for sid, pred, label, start, end in propbank_rows:
            fh.write(f"{sid}\t{pred}\t{label}\t{start}\t{end}\n")
        fh.write(f"{PERRY.id}\t21\n")  # predicate with no arguments

    print(f"fixtures written to {FIXTURES}")


if __name__ == "__main__":
    main()
