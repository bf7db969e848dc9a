"""Self-reported age detection for short social-media posts.

The package retrieves candidate posts with a high-recall query pattern set,
classifies each candidate as carrying a self-reported age or not, and then
extracts the exact age with an ordered rule cascade. Each stage is usable on
its own; ``run_pipeline`` chains them over JSONL input files.
"""

from .classify import (
    BaselineConfig,
    BaselineModel,
    NgramVocabulary,
    Prediction,
    featurize,
    kfold_indices,
    load_model,
    predict,
    save_model,
    scale,
    score_text,
    train_baseline,
)
from .corpus import (
    Label,
    LabeledPost,
    Post,
    SplitResult,
    iter_posts,
    load_labels,
    load_posts,
    save_labels,
    save_posts,
    stratified_split,
)
from .errors import (
    CorpusError,
    EvalError,
    PatternError,
    PipelineError,
    PluginError,
    ProtocolError,
    RuleError,
    SelfageError,
    TrainingError,
)
from .evaluate import (
    EvalCounts,
    JointBreakdown,
    Metrics,
    RatingMatrix,
    classification_eval,
    classification_report,
    display_round,
    fleiss_kappa,
    joint_extraction_breakdown,
    joint_extraction_eval,
    joint_report,
    prf,
    render_report_table,
)
from .extract import (
    AGE_MAX,
    AGE_MIN,
    Extraction,
    ExtractionRule,
    RuleKind,
    apply_cascade,
    countdown_age,
    default_rules,
    fallback_first_two_digit,
    load_rules,
)
from .normalize import (
    normalize_for_contextual_classifier,
    normalize_for_extraction,
    normalize_for_extraction_with_offsets,
    normalize_for_ngram_classifier,
)
from .pipeline import (
    PipelineConfig,
    PipelineReport,
    UserAgeRecord,
    UserPostAge,
    rollup_user,
    run_pipeline,
)
from .plugin_client import (
    PROTOCOL_NAME,
    ExternalClassifierClient,
    classify_external,
)
from .retrieval import (
    CompiledPatternSet,
    DropDecision,
    QueryPattern,
    RetrievalHit,
    compile_pattern_set,
    default_pattern_set,
    load_query_patterns,
    match_candidates,
    should_drop,
)

__all__ = [
    "AGE_MAX",
    "AGE_MIN",
    "BaselineConfig",
    "BaselineModel",
    "CompiledPatternSet",
    "CorpusError",
    "DropDecision",
    "EvalCounts",
    "EvalError",
    "Extraction",
    "ExtractionRule",
    "ExternalClassifierClient",
    "JointBreakdown",
    "Label",
    "LabeledPost",
    "Metrics",
    "NgramVocabulary",
    "PROTOCOL_NAME",
    "PatternError",
    "PipelineConfig",
    "PipelineError",
    "PipelineReport",
    "PluginError",
    "Post",
    "Prediction",
    "ProtocolError",
    "QueryPattern",
    "RatingMatrix",
    "RetrievalHit",
    "RuleError",
    "RuleKind",
    "SelfageError",
    "SplitResult",
    "TrainingError",
    "UserAgeRecord",
    "UserPostAge",
    "apply_cascade",
    "classification_eval",
    "classification_report",
    "classify_external",
    "compile_pattern_set",
    "countdown_age",
    "default_pattern_set",
    "default_rules",
    "display_round",
    "fallback_first_two_digit",
    "featurize",
    "fleiss_kappa",
    "iter_posts",
    "joint_extraction_breakdown",
    "joint_extraction_eval",
    "joint_report",
    "kfold_indices",
    "load_labels",
    "load_model",
    "load_posts",
    "load_query_patterns",
    "load_rules",
    "match_candidates",
    "normalize_for_contextual_classifier",
    "normalize_for_extraction",
    "normalize_for_extraction_with_offsets",
    "normalize_for_ngram_classifier",
    "predict",
    "prf",
    "render_report_table",
    "rollup_user",
    "run_pipeline",
    "save_labels",
    "save_model",
    "save_posts",
    "scale",
    "score_text",
    "should_drop",
    "stratified_split",
    "train_baseline",
]
