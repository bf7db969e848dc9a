"""Command-line surface for retrieval, training, extraction, and the full run."""

from __future__ import annotations

import json
import shlex
import sys
from pathlib import Path
from typing import Optional

import click

from .classify import (
    BaselineConfig,
    Prediction,
    load_model,
    predict,
    save_model,
    train_baseline,
)
from .corpus import (
    Label,
    load_labels,
    load_posts,
    save_labels,
    save_posts,
    stratified_split,
)
from .errors import EvalError, SelfageError
from .evaluate import (
    RatingMatrix,
    classification_eval,
    classification_report,
    fleiss_kappa,
    joint_extraction_breakdown,
    joint_report,
    render_report_table,
)
from .extract import Extraction, apply_cascade, load_rules
from .normalize import normalize_for_extraction
from .pipeline import PipelineConfig, run_pipeline
from .plugin_client import ExternalClassifierClient
from .retrieval import (
    DropDecision,
    compile_pattern_set,
    load_query_patterns,
    match_candidates,
    should_drop,
)


def _fail(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(1)


def _open_output(path: Optional[str]):
    if path is None or path == "-":
        return sys.stdout
    return open(path, "w", encoding="utf-8")


@click.group()
def main() -> None:
    """Find self-reported exact ages in short social-media posts."""


@main.command()
@click.option("--posts", "posts_path", required=True, type=click.Path(exists=True))
@click.option("--patterns", "patterns_path", type=click.Path(exists=True))
@click.option("--output", "output_path", default="-", show_default=True)
@click.option("--keep-dropped", is_flag=True, help="Match retweets and reported speech too.")
def retrieve(posts_path: str, patterns_path: Optional[str], output_path: str,
             keep_dropped: bool) -> None:
    """Write retrieval hits as JSONL (post_id, pattern_id, span)."""
    try:
        matcher = compile_pattern_set(load_query_patterns(patterns_path))
        out = _open_output(output_path)
        try:
            for post in load_posts(posts_path):
                if not keep_dropped and should_drop(post) is not DropDecision.KEEP:
                    continue
                for hit in match_candidates(post, matcher):
                    out.write(json.dumps({
                        "post_id": hit.post_id,
                        "pattern_id": hit.pattern_id,
                        "span": list(hit.span),
                    }, sort_keys=True) + "\n")
        finally:
            if out is not sys.stdout:
                out.close()
    except SelfageError as exc:
        _fail(str(exc))


@main.command()
@click.option("--posts", "posts_path", required=True, type=click.Path(exists=True))
@click.option("--labels", "labels_path", required=True, type=click.Path(exists=True))
@click.option("--out", "model_path", required=True, type=click.Path())
@click.option("--seed", required=True, type=int)
@click.option("--cost", "c", default=32.0, show_default=True, type=float)
@click.option("--weight-age", default=2.0, show_default=True, type=float)
@click.option("--weight-no-age", default=1.0, show_default=True, type=float)
def train(posts_path: str, labels_path: str, model_path: str, seed: int,
          c: float, weight_age: float, weight_no_age: float) -> None:
    """Train the n-gram baseline and save it as a JSON model file."""
    try:
        posts = load_posts(posts_path)
        labeled = load_labels(labels_path, posts)
        config = BaselineConfig(seed=seed, c=c, weight_age=weight_age,
                                weight_no_age=weight_no_age)
        model = train_baseline(labeled, config)
        save_model(model, model_path)
        click.echo(f"saved model with {len(model.vocabulary)} features to {model_path}")
    except SelfageError as exc:
        _fail(str(exc))


def _predictions_for(posts, model_path: Optional[str], plugin: Optional[str]):
    if (model_path is None) == (plugin is None):
        raise SelfageError("exactly one of --model or --plugin is required")
    if model_path is not None:
        model = load_model(model_path)
        return [predict(model, post) for post in posts]
    with ExternalClassifierClient(shlex.split(plugin)) as client:
        return client.classify(posts)


@main.command()
@click.option("--posts", "posts_path", required=True, type=click.Path(exists=True))
@click.option("--model", "model_path", type=click.Path(exists=True))
@click.option("--plugin", type=str, help="Plug-in command line speaking age-clf/1.")
@click.option("--output", "output_path", default="-", show_default=True)
def classify(posts_path: str, model_path: Optional[str], plugin: Optional[str],
             output_path: str) -> None:
    """Label each post age/no_age with a signed score."""
    try:
        posts = load_posts(posts_path)
        predictions = _predictions_for(posts, model_path, plugin)
        out = _open_output(output_path)
        try:
            for prediction in predictions:
                out.write(json.dumps({
                    "post_id": prediction.post_id,
                    "label": prediction.label.value,
                    "score": prediction.score,
                }, sort_keys=True) + "\n")
        finally:
            if out is not sys.stdout:
                out.close()
    except SelfageError as exc:
        _fail(str(exc))


@main.command()
@click.option("--posts", "posts_path", required=True, type=click.Path(exists=True))
@click.option("--rules", "rules_path", type=click.Path(exists=True))
@click.option("--output", "output_path", default="-", show_default=True)
def extract(posts_path: str, rules_path: Optional[str], output_path: str) -> None:
    """Extract an exact age from each post where a rule fires."""
    try:
        rules = load_rules(rules_path)
        out = _open_output(output_path)
        try:
            for post in load_posts(posts_path):
                normalized = normalize_for_extraction(post.text)
                extraction = apply_cascade(normalized, rules, post_id=post.id)
                if extraction is None:
                    continue
                out.write(json.dumps({
                    "post_id": extraction.post_id,
                    "age": extraction.age,
                    "rule_id": extraction.rule_id,
                    "span": list(extraction.span),
                }, sort_keys=True) + "\n")
        finally:
            if out is not sys.stdout:
                out.close()
    except SelfageError as exc:
        _fail(str(exc))


def _load_predictions(path: str) -> list[Prediction]:
    predictions = []
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
                predictions.append(Prediction(
                    post_id=str(record["post_id"]),
                    label=Label(record["label"]),
                    score=float(record.get("score", 0.0)),
                ))
            except (KeyError, ValueError, json.JSONDecodeError) as exc:
                raise EvalError(f"{path}:{lineno}: bad prediction record ({exc})") from exc
    return predictions


def _load_extractions(path: str) -> dict[str, Extraction]:
    extractions: dict[str, Extraction] = {}
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
                span = record.get("span", [0, 0])
                extraction = Extraction(
                    post_id=str(record["post_id"]),
                    age=int(record["age"]),
                    rule_id=str(record.get("rule_id", "")),
                    span=(int(span[0]), int(span[1])),
                )
            except (KeyError, ValueError, json.JSONDecodeError) as exc:
                raise EvalError(f"{path}:{lineno}: bad extraction record ({exc})") from exc
            if extraction.post_id in extractions:
                raise EvalError(f"{path}:{lineno}: duplicate extraction for {extraction.post_id}")
            extractions[extraction.post_id] = extraction
    return extractions


@main.command()
@click.option("--posts", "posts_path", required=True, type=click.Path(exists=True))
@click.option("--labels", "labels_path", required=True, type=click.Path(exists=True))
@click.option("--predictions", "predictions_path", required=True, type=click.Path(exists=True))
@click.option("--extractions", "extractions_path", type=click.Path(exists=True),
              help="Adds the joint class+age taxonomy to the report.")
@click.option("--json-out", "json_path", type=click.Path())
def evaluate(posts_path: str, labels_path: str, predictions_path: str,
             extractions_path: Optional[str], json_path: Optional[str]) -> None:
    """Score predictions (and optionally extracted ages) against gold labels."""
    try:
        posts = load_posts(posts_path)
        gold = load_labels(labels_path, posts)
        predictions = _load_predictions(predictions_path)
        if extractions_path is None:
            counts = classification_eval(predictions, gold)
            report = classification_report(counts, total_items=len(gold))
        else:
            extractions = _load_extractions(extractions_path)
            results = [(p, extractions.get(p.post_id)) for p in predictions]
            report = joint_report(joint_extraction_breakdown(results, gold))
        click.echo(render_report_table(report))
        if json_path is not None:
            Path(json_path).write_text(
                json.dumps(report, sort_keys=True, indent=2) + "\n", encoding="utf-8"
            )
    except SelfageError as exc:
        _fail(str(exc))


@main.command()
@click.option("--ratings", "ratings_path", required=True, type=click.Path(exists=True),
              help="TSV of per-item category counts, one row per item.")
def kappa(ratings_path: str) -> None:
    """Fleiss' kappa over a rating count matrix."""
    try:
        rows = []
        with open(ratings_path, encoding="utf-8") as handle:
            for lineno, line in enumerate(handle, start=1):
                if not line.strip() or line.lstrip().startswith("#"):
                    continue
                try:
                    rows.append([int(v) for v in line.split("\t")])
                except ValueError as exc:
                    raise EvalError(f"{ratings_path}:{lineno}: non-integer count") from exc
        value = fleiss_kappa(RatingMatrix.from_rows(rows))
        click.echo(f"{value:.6f}")
    except SelfageError as exc:
        _fail(str(exc))


@main.command()
@click.option("--posts", "posts_paths", required=True, multiple=True,
              type=click.Path(exists=True))
@click.option("--output-dir", "output_dir", required=True, type=click.Path())
@click.option("--model", "model_path", type=click.Path(exists=True))
@click.option("--plugin", type=str, help="Plug-in command line speaking age-clf/1.")
@click.option("--patterns", "patterns_path", type=click.Path(exists=True))
@click.option("--rules", "rules_path", type=click.Path(exists=True))
@click.option("--parallelism", default=1, show_default=True, type=int)
@click.option("--batch-size", default=256, show_default=True, type=int)
@click.option("--seed", type=int)
def run(posts_paths: tuple[str, ...], output_dir: str, model_path: Optional[str],
        plugin: Optional[str], patterns_path: Optional[str], rules_path: Optional[str],
        parallelism: int, batch_size: int, seed: Optional[int]) -> None:
    """Run the full pipeline and print the funnel report."""
    try:
        config = PipelineConfig(
            input_paths=tuple(Path(p) for p in posts_paths),
            output_dir=Path(output_dir),
            model_path=Path(model_path) if model_path else None,
            plugin_command=tuple(shlex.split(plugin)) if plugin else None,
            pattern_path=Path(patterns_path) if patterns_path else None,
            rule_path=Path(rules_path) if rules_path else None,
            parallelism=parallelism,
            batch_size=batch_size,
            seed=seed,
        )
        report = run_pipeline(config)
        click.echo(json.dumps(report.to_json(), sort_keys=True, indent=2))
    except SelfageError as exc:
        _fail(str(exc))


@main.command()
@click.option("--posts", "posts_path", required=True, type=click.Path(exists=True))
@click.option("--labels", "labels_path", required=True, type=click.Path(exists=True))
@click.option("--train-fraction", default=0.8, show_default=True, type=float)
@click.option("--seed", required=True, type=int)
@click.option("--output-dir", "output_dir", required=True, type=click.Path())
def split(posts_path: str, labels_path: str, train_fraction: float, seed: int,
          output_dir: str) -> None:
    """Stratified train/test split written as posts and label files."""
    try:
        posts = load_posts(posts_path)
        labeled = load_labels(labels_path, posts)
        result = stratified_split(labeled, train_fraction, seed)
        out = Path(output_dir)
        out.mkdir(parents=True, exist_ok=True)
        for name, side in (("train", result.train), ("test", result.test)):
            save_posts(out / f"{name}_posts.jsonl", [item.post for item in side])
            save_labels(out / f"{name}_labels.tsv", side)
        click.echo(
            f"train: {len(result.train)} posts, test: {len(result.test)} posts"
        )
    except SelfageError as exc:
        _fail(str(exc))


if __name__ == "__main__":
    main()
