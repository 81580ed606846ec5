"""Toolkit for validating, consolidating, analyzing and scoring QA-SRL
annotations and parser outputs."""

from .alignment import IouThreshold, MatchResult, align, iou
from .consolidation import (
    ConsolidationProposal,
    ConsolidationReport,
    propose,
    validate_consolidation,
)
from .data import (
    AnnotationSet,
    LoadError,
    QAPair,
    Sentence,
    Span,
    ValidationReport,
    VerbAnnotation,
    Violation,
    load_dataset,
    validate,
    write_dataset,
)
from .metrics import (
    Counts,
    CostReport,
    CostSchedule,
    DatasetStats,
    EvalConfig,
    Scores,
    aggregate,
    cost,
    dataset_stats,
    evaluate_annotation_sets,
    evaluate_verb,
    evaluate_verb_redundant,
    iaa_pairwise,
)
from .propbank import PropBankArg, PropBankFrame, compare_propbank, load_propbank
from .questions import (
    QuestionSlots,
    StrictSignature,
    UnparseableQuestionError,
    VerbForms,
    parse_question,
    render_question,
    signature,
    strict_match,
)

__version__ = "0.1.0"
