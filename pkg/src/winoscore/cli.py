"""Command-line surface: decompose, emit-train, eval, predict, auc.

Exit codes are a stable contract: 0 success, 1 data error, 2 usage or IO
error, 3 backend/transport error. Settings resolve flags over environment
variables (endpoint, timeout) over the optional key=value config file.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .backend import (
    Backend,
    BackendConfig,
    RemoteBackend,
    constant_backend,
    oracle_backend,
    random_backend,
)
from .dataset import Problem, load_jsonl, load_manifest, load_split, require_answers
from .errors import BackendError, DataError
from .evaluation import (
    CurvePoint,
    EvalConfig,
    LearningCurve,
    evaluate_split,
    learning_curve_auc,
    predict_unlabeled,
    write_leaderboard_csv,
    zero_shot_eval,
)
from .templating import (
    ENTAILMENT_CONTRADICTION,
    TRUE_FALSE,
    TargetTokenPair,
    emit_training_file,
    render_both,
)

ENV_ENDPOINT = "WINOSCORE_ENDPOINT"
ENV_TIMEOUT = "WINOSCORE_TIMEOUT"

DEFAULT_TOKEN_REGISTRY: dict[str, TargetTokenPair] = {
    "entailment,contradiction": ENTAILMENT_CONTRADICTION,
    "true,false": TRUE_FALSE,
}

# Fine-tuning settings recorded alongside emitted training data for
# downstream trainers; this harness itself never trains.
TRAINER_HYPERPARAMETERS = {
    "batch_size": 16,
    "learning_rate": 2e-4,
    "checkpoint_every_steps": 5000,
    "steps_to_converge_xl": 130000,
    "decoding": "greedy",
}

SCRIPTED_BACKENDS = ("oracle", "inverted", "random", "constant")


class UsageError(Exception):
    """Bad flag combination or malformed config; maps to exit code 2."""


def read_config_file(path: str | Path) -> dict[str, str]:
    """Parse a flat key=value config file; '#' starts a comment line."""
    values: dict[str, str] = {}
    for line_number, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{line_number}: expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        values[key.strip()] = value.strip()
    return values


def _parse_bool(value: str, *, key: str) -> bool:
    lowered = value.lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise UsageError(f"config key {key!r} must be boolean, got {value!r}")


@dataclass
class Settings:
    """Resolved run settings: flags > environment > config file > defaults."""

    manifest: Path | None = None
    backend: str = "oracle"
    endpoint: str = "http://127.0.0.1:8000"
    timeout: float = 30.0
    retries: int = 2
    batch_size: int = 16
    max_in_flight: int = 4
    tokens_key: str = "entailment,contradiction"
    use_logit: bool = True
    seed: int = 0
    skip_failures: bool = False
    registry: dict[str, TargetTokenPair] | None = None

    def token_pair(self) -> TargetTokenPair:
        registry = self.registry or DEFAULT_TOKEN_REGISTRY
        if self.tokens_key not in registry:
            raise UsageError(
                f"token pair {self.tokens_key!r} is not registered; "
                f"known pairs: {', '.join(sorted(registry))}"
            )
        return registry[self.tokens_key]

    def backend_config(self) -> BackendConfig:
        return BackendConfig(
            endpoint=self.endpoint,
            max_in_flight=self.max_in_flight,
            timeout=self.timeout,
            retries=self.retries,
            batch_size=self.batch_size,
        )

    def eval_config(self, mode_label: str = "") -> EvalConfig:
        return EvalConfig(
            tokens=self.token_pair(), use_logit=self.use_logit, mode_label=mode_label
        )


def resolve_settings(args: argparse.Namespace) -> Settings:
    settings = Settings()
    registry = dict(DEFAULT_TOKEN_REGISTRY)

    config_path = getattr(args, "config", None)
    if config_path:
        file_values = read_config_file(config_path)
        for key, value in file_values.items():
            if key == "manifest":
                settings.manifest = Path(config_path).parent / value
            elif key == "backend":
                settings.backend = value
            elif key == "endpoint":
                settings.endpoint = value
            elif key == "timeout":
                settings.timeout = float(value)
            elif key == "retries":
                settings.retries = int(value)
            elif key == "batch_size":
                settings.batch_size = int(value)
            elif key == "max_in_flight":
                settings.max_in_flight = int(value)
            elif key == "tokens":
                settings.tokens_key = value
            elif key == "logit":
                settings.use_logit = _parse_bool(value, key=key)
            elif key == "seed":
                settings.seed = int(value)
            elif key == "skip_failures":
                settings.skip_failures = _parse_bool(value, key=key)
            elif key == "extra_token_pairs":
                for spec in value.split(";"):
                    spec = spec.strip()
                    if not spec:
                        continue
                    positive, _, negative = spec.partition(",")
                    registry[spec] = TargetTokenPair(positive.strip(), negative.strip())
            else:
                raise UsageError(f"unknown config key {key!r}")

    if os.environ.get(ENV_ENDPOINT):
        settings.endpoint = os.environ[ENV_ENDPOINT]
    if os.environ.get(ENV_TIMEOUT):
        settings.timeout = float(os.environ[ENV_TIMEOUT])

    if getattr(args, "manifest", None):
        settings.manifest = Path(args.manifest)
    if getattr(args, "backend", None):
        settings.backend = args.backend
    if getattr(args, "endpoint", None):
        settings.endpoint = args.endpoint
    if getattr(args, "tokens", None):
        settings.tokens_key = args.tokens
    if getattr(args, "use_logit", None) is not None:
        settings.use_logit = args.use_logit
    if getattr(args, "seed", None) is not None:
        settings.seed = args.seed
    if getattr(args, "skip_failures", False):
        settings.skip_failures = True

    settings.registry = registry
    if settings.backend not in SCRIPTED_BACKENDS + ("remote",):
        raise UsageError(
            f"unknown backend {settings.backend!r}; "
            f"expected one of {', '.join(SCRIPTED_BACKENDS + ('remote',))}"
        )
    return settings


def _load_problems(args: argparse.Namespace, settings: Settings) -> list[Problem]:
    if getattr(args, "input", None):
        return load_jsonl(args.input)
    if settings.manifest is None:
        raise UsageError("either --input or --manifest with --split is required")
    splits = load_manifest(settings.manifest)
    label = getattr(args, "split", None)
    if not label:
        raise UsageError("--split is required when loading through a manifest")
    if label not in splits:
        raise UsageError(
            f"split {label!r} not in manifest; available: {', '.join(sorted(splits))}"
        )
    return load_split(splits[label])


def make_backend(settings: Settings, problems: Sequence[Problem]) -> Backend:
    tokens = settings.token_pair()
    if settings.backend == "oracle":
        return oracle_backend(problems, tokens)
    if settings.backend == "inverted":
        return oracle_backend(problems, tokens, invert=True)
    if settings.backend == "random":
        return random_backend(tokens, settings.seed)
    if settings.backend == "constant":
        return constant_backend(tokens)
    return RemoteBackend(settings.backend_config())


def cmd_decompose(args: argparse.Namespace) -> int:
    settings = resolve_settings(args)
    problems = _load_problems(args, settings)
    for problem in problems:
        if args.qid and problem.qid != args.qid:
            continue
        for instance in render_both(problem):
            print(instance.source)
    return 0


def cmd_emit_train(args: argparse.Namespace) -> int:
    settings = resolve_settings(args)
    problems = _load_problems(args, settings)
    require_answers(problems)
    tokens = settings.token_pair()
    out = Path(args.out)
    count = emit_training_file(problems, tokens, out)
    manifest_path = out.with_name(out.name + ".manifest.json")
    manifest = {
        "training_file": out.name,
        "pairs_written": count,
        "problems": len(problems),
        "target_tokens": {"positive": tokens.positive, "negative": tokens.negative},
        "trainer_hyperparameters": TRAINER_HYPERPARAMETERS,
        "note": "settings recorded for downstream trainers; this harness does not train",
    }
    manifest_path.write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    print(f"wrote {count} pairs to {out} (manifest: {manifest_path.name})")
    return 0


def _print_report(report) -> None:
    header = (
        f"split={report.split_label} tokens={report.tokens} "
        f"logit={'on' if report.use_logit else 'off'}"
    )
    auto_label = f"tokens={report.tokens} logit={'on' if report.use_logit else 'off'}"
    if report.mode_label and report.mode_label != auto_label:
        header += f" mode={report.mode_label}"
    print(header)
    print(
        f"items={report.n_items} correct={report.n_correct} "
        f"accuracy={report.accuracy:.3f}"
    )
    cases = " ".join(f"{k}={v}" for k, v in sorted(report.case_histogram.items()))
    print(f"cases: {cases} ties={report.tie_count}")
    if report.skipped:
        print(f"skipped={len(report.skipped)}")
        for item in report.skipped:
            print(f"  {item.qid}: {item.error}")


def cmd_eval(args: argparse.Namespace) -> int:
    settings = resolve_settings(args)
    problems = _load_problems(args, settings)
    require_answers(problems)
    backend = make_backend(settings, problems)
    runner = zero_shot_eval if args.zero_shot else evaluate_split
    report = runner(
        problems,
        backend,
        settings.eval_config(),
        split_label=args.split or "dev",
        skip_failures=settings.skip_failures,
    )
    _print_report(report)
    if args.out:
        report.write_json(args.out)
        print(f"report written to {args.out}")
    return 0


def cmd_predict(args: argparse.Namespace) -> int:
    settings = resolve_settings(args)
    problems = _load_problems(args, settings)
    if settings.backend in ("oracle", "inverted"):
        require_answers(problems)
    backend = make_backend(settings, problems)
    predictions = predict_unlabeled(
        problems, backend, settings.eval_config(), skip_failures=settings.skip_failures
    )
    if args.out:
        count = write_leaderboard_csv(predictions, args.out)
        print(f"wrote {count} predictions to {args.out}")
    else:
        write_leaderboard_csv(predictions, sys.stdout)
    return 0


def _accuracy_from(token: str) -> float:
    try:
        return float(token)
    except ValueError:
        pass
    report = json.loads(Path(token).read_text(encoding="utf-8"))
    if "accuracy" not in report:
        raise UsageError(f"{token}: report has no 'accuracy' field")
    return float(report["accuracy"])


def cmd_auc(args: argparse.Namespace) -> int:
    accuracies = [_accuracy_from(value) for value in args.values]
    if len(accuracies) < 2:
        raise UsageError("auc needs at least two accuracies or report paths")
    if args.sizes:
        sizes = [int(s) for s in args.sizes.split(",")]
        if len(sizes) != len(accuracies):
            raise UsageError("--sizes must list one size per accuracy")
        curve = LearningCurve(
            tuple(
                CurvePoint(label=f"p{i}", accuracy=acc, size=size)
                for i, (acc, size) in enumerate(zip(accuracies, sizes))
            )
        )
    else:
        curve = LearningCurve.from_accuracies(accuracies)
    print(f"{learning_curve_auc(curve, spacing=args.spacing):.6f}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="winoscore",
        description="Score two-option fill-in-the-blank problems through a seq2seq backend.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_data_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--input", help="bare JSONL file (bypasses the manifest)")
        p.add_argument("--manifest", help="dataset manifest JSON path")
        p.add_argument("--split", help="split label from the manifest")
        p.add_argument("--config", help="key=value config file")

    def add_run_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--backend", choices=SCRIPTED_BACKENDS + ("remote",))
        p.add_argument("--endpoint", help="inference service base URL (remote backend)")
        p.add_argument("--tokens", help="target token pair as POS,NEG")
        logit = p.add_mutually_exclusive_group()
        logit.add_argument("--logit", dest="use_logit", action="store_true", default=None)
        logit.add_argument("--no-logit", dest="use_logit", action="store_false")
        p.add_argument("--seed", type=int, help="seed for the random scripted backend")
        p.add_argument("--skip-failures", action="store_true",
                       help="exclude failing items instead of aborting (always reported)")

    p_decompose = sub.add_parser("decompose", help="print both source strings per problem")
    add_data_flags(p_decompose)
    p_decompose.add_argument("--qid", help="only decompose the problem with this qid")
    p_decompose.set_defaults(func=cmd_decompose)

    p_train = sub.add_parser("emit-train", help="write source<TAB>target training pairs")
    add_data_flags(p_train)
    p_train.add_argument("--tokens", help="target token pair as POS,NEG")
    p_train.add_argument("--out", required=True, help="output TSV path")
    p_train.set_defaults(func=cmd_emit_train)

    p_eval = sub.add_parser("eval", help="evaluate a labeled split")
    add_data_flags(p_eval)
    add_run_flags(p_eval)
    p_eval.add_argument("--out", help="write the JSON report here")
    p_eval.add_argument("--zero-shot", action="store_true",
                        help="label the report as a zero-shot run")
    p_eval.set_defaults(func=cmd_eval)

    p_predict = sub.add_parser("predict", help="write leaderboard predictions qID,choice")
    add_data_flags(p_predict)
    add_run_flags(p_predict)
    p_predict.add_argument("--out", help="output CSV path (default: stdout)")
    p_predict.set_defaults(func=cmd_predict)

    p_auc = sub.add_parser("auc", help="learning-curve AUC from accuracies or report paths")
    p_auc.add_argument("values", nargs="+", help="accuracies or EvalReport JSON paths")
    p_auc.add_argument("--spacing", choices=("equal", "log"), default="equal")
    p_auc.add_argument("--sizes", help="comma-separated training sizes (log spacing)")
    p_auc.set_defaults(func=cmd_auc)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 1
    except BackendError as exc:
        print(f"backend error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
