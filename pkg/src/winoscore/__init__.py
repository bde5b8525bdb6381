"""Evaluation harness for two-option fill-in-the-blank commonsense problems.

Problems are decomposed into paired hypothesis/premise source strings,
scored through a pluggable seq2seq backend, and resolved by greedy-token
or logit-softmax rules into accuracy and learning-curve AUC metrics.
"""
from .backend import (
    Backend,
    BackendConfig,
    RemoteBackend,
    ScoreRequest,
    ScriptedBackend,
    constant_backend,
    oracle_backend,
    random_backend,
)
from .dataset import (
    Choice,
    Problem,
    SplitSpec,
    load_jsonl,
    load_manifest,
    load_split,
    parse_problem,
    serialize_problem,
)
from .evaluation import (
    CurvePoint,
    EvalConfig,
    EvalReport,
    LearningCurve,
    evaluate_split,
    learning_curve_auc,
    predict_unlabeled,
    write_leaderboard_csv,
    zero_shot_eval,
)
from .scoring import (
    Prediction,
    Resolution,
    classify_case,
    resolve_greedy,
    resolve_logit,
    softmax_pair,
)
from .templating import (
    ENTAILMENT_CONTRADICTION,
    TRUE_FALSE,
    BlankSplit,
    RenderedInstance,
    TargetTokenPair,
    build_training_pairs,
    emit_training_file,
    render_both,
    render_instance,
    split_at_blank,
)

__version__ = "0.1.0"

__all__ = [
    "Backend",
    "BackendConfig",
    "BlankSplit",
    "Choice",
    "CurvePoint",
    "ENTAILMENT_CONTRADICTION",
    "EvalConfig",
    "EvalReport",
    "LearningCurve",
    "Prediction",
    "Problem",
    "RemoteBackend",
    "RenderedInstance",
    "Resolution",
    "ScoreRequest",
    "ScriptedBackend",
    "SplitSpec",
    "TRUE_FALSE",
    "TargetTokenPair",
    "build_training_pairs",
    "classify_case",
    "constant_backend",
    "emit_training_file",
    "evaluate_split",
    "learning_curve_auc",
    "load_jsonl",
    "load_manifest",
    "load_split",
    "oracle_backend",
    "parse_problem",
    "predict_unlabeled",
    "random_backend",
    "render_both",
    "render_instance",
    "resolve_greedy",
    "resolve_logit",
    "serialize_problem",
    "softmax_pair",
    "split_at_blank",
    "write_leaderboard_csv",
    "zero_shot_eval",
]
