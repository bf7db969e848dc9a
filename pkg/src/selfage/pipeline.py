"""End-to-end orchestration: ingest, retrieve, classify, extract, report."""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path
from typing import Iterable, Iterator, Optional, Sequence

from .classify import BaselineModel, Prediction, load_model, predict
from .corpus import Label, Post, format_timestamp, iter_posts
from .errors import PipelineError, SelfageError
from .extract import Extraction, apply_cascade, load_rules
from .normalize import normalize_for_extraction
from .plugin_client import ExternalClassifierClient
from .retrieval import (
    DropDecision,
    RetrievalHit,
    compile_pattern_set,
    load_query_patterns,
    match_candidates,
    should_drop,
)


@dataclass(frozen=True)
class PipelineConfig:
    input_paths: tuple[Path, ...]
    output_dir: Path
    model_path: Optional[Path] = None
    plugin_command: Optional[tuple[str, ...]] = None
    pattern_path: Optional[Path] = None
    rule_path: Optional[Path] = None
    parallelism: int = 1
    batch_size: int = 256
    seed: Optional[int] = None

    def validate(self) -> None:
        if not self.input_paths:
            raise PipelineError("config", "at least one input path is required")
        for path in self.input_paths:
            if not Path(path).exists():
                raise PipelineError("config", f"input path does not exist: {path}")
        have_model = self.model_path is not None
        have_plugin = bool(self.plugin_command)
        if have_model == have_plugin:
            raise PipelineError(
                "config", "exactly one of model_path or plugin_command is required"
            )
        if have_model and not Path(self.model_path).exists():
            raise PipelineError("config", f"model file does not exist: {self.model_path}")
        if self.pattern_path is not None and not Path(self.pattern_path).exists():
            raise PipelineError("config", f"pattern file does not exist: {self.pattern_path}")
        if self.rule_path is not None and not Path(self.rule_path).exists():
            raise PipelineError("config", f"rule file does not exist: {self.rule_path}")
        if self.parallelism < 1:
            raise PipelineError("config", "parallelism must be at least 1")
        if self.batch_size < 1:
            raise PipelineError("config", "batch size must be at least 1")


@dataclass(frozen=True)
class PipelineReport:
    posts_scanned: int
    users_scanned: int
    retweets_dropped: int
    reported_speech_dropped: int
    candidates_matched: int
    users_matched: int
    age_classified: int
    ages_extracted: int
    users_with_age: int

    def fractions(self) -> dict[str, float]:
        def ratio(num: int, den: int) -> float:
            return num / den if den else 0.0

        return {
            "retweets_dropped_of_scanned": ratio(self.retweets_dropped, self.posts_scanned),
            "reported_speech_dropped_of_scanned": ratio(
                self.reported_speech_dropped, self.posts_scanned
            ),
            "candidates_of_scanned": ratio(self.candidates_matched, self.posts_scanned),
            "age_classified_of_candidates": ratio(
                self.age_classified, self.candidates_matched
            ),
            "ages_extracted_of_age_classified": ratio(
                self.ages_extracted, self.age_classified
            ),
            "users_matched_of_scanned": ratio(self.users_matched, self.users_scanned),
            "users_with_age_of_scanned": ratio(self.users_with_age, self.users_scanned),
        }

    def to_json(self) -> dict:
        return {
            "counts": {
                "posts_scanned": self.posts_scanned,
                "users_scanned": self.users_scanned,
                "retweets_dropped": self.retweets_dropped,
                "reported_speech_dropped": self.reported_speech_dropped,
                "candidates_matched": self.candidates_matched,
                "users_matched": self.users_matched,
                "age_classified": self.age_classified,
                "ages_extracted": self.ages_extracted,
                "users_with_age": self.users_with_age,
            },
            "fractions": self.fractions(),
        }


@dataclass(frozen=True)
class UserPostAge:
    post_id: str
    created_at: datetime
    age: int
    rule_id: str


@dataclass(frozen=True)
class UserAgeRecord:
    user_id: str
    posts: tuple[UserPostAge, ...]
    latest_age: int


def rollup_user(
    user_id: str, extractions: Sequence[tuple[Extraction, datetime]]
) -> UserAgeRecord:
    """Keep every contributing extraction; the record's headline age comes
    from the most recent post, ties broken by the larger age. This policy is
    a placeholder, not a validated aggregation method."""
    if not extractions:
        raise PipelineError("rollup", f"no extractions for user {user_id}")
    posts = tuple(
        UserPostAge(
            post_id=extraction.post_id,
            created_at=created_at,
            age=extraction.age,
            rule_id=extraction.rule_id,
        )
        for extraction, created_at in extractions
    )
    latest = max(posts, key=lambda p: (p.created_at, p.age))
    return UserAgeRecord(user_id=user_id, posts=posts, latest_age=latest.age)


class _BuiltinClassifier:
    def __init__(self, model: BaselineModel):
        self.model = model

    def classify(self, posts: Sequence[Post]) -> list[Prediction]:
        return [predict(self.model, post) for post in posts]

    def close(self) -> None:
        pass


class _PluginClassifier:
    def __init__(self, command: Sequence[str]):
        self.client = ExternalClassifierClient(command)
        self.client.start()

    def classify(self, posts: Sequence[Post]) -> list[Prediction]:
        return self.client.classify(posts)

    def close(self) -> None:
        self.client.close()


def _batches(items: Iterable[Post], size: int) -> Iterator[list[Post]]:
    batch: list[Post] = []
    for item in items:
        batch.append(item)
        if len(batch) >= size:
            yield batch
            batch = []
    if batch:
        yield batch


def _stage(name: str, fn, *args):
    try:
        return fn(*args)
    except PipelineError:
        raise
    except SelfageError as exc:
        raise PipelineError(name, str(exc)) from exc


def _iter_all_posts(paths: Sequence[Path]) -> Iterator[Post]:
    for path in paths:
        try:
            yield from iter_posts(path)
        except PipelineError:
            raise
        except (SelfageError, OSError) as exc:
            raise PipelineError("input", str(exc)) from exc


def run_pipeline(config: PipelineConfig) -> PipelineReport:
    """Stream posts through retrieve -> classify -> extract, writing
    posts.jsonl, users.jsonl, and report.json into the output directory.
    Outputs go to *.partial files first, so an aborted run leaves only
    clearly marked partial files behind."""
    config.validate()
    patterns = _stage(
        "retrieve",
        lambda: compile_pattern_set(load_query_patterns(config.pattern_path)),
    )
    rules = _stage("extract", load_rules, config.rule_path)
    if config.model_path is not None:
        classifier = _stage(
            "classify", lambda: _BuiltinClassifier(load_model(config.model_path))
        )
    else:
        classifier = _stage(
            "classify", lambda: _PluginClassifier(config.plugin_command)
        )

    out_dir = Path(config.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    posts_partial = out_dir / "posts.jsonl.partial"
    users_partial = out_dir / "users.jsonl.partial"
    report_partial = out_dir / "report.json.partial"

    posts_scanned = retweets = reported = candidates = 0
    age_classified = ages_extracted = 0
    users_seen: set[str] = set()
    users_matched: set[str] = set()
    per_user: dict[str, list[tuple[Extraction, datetime]]] = {}

    executor = (
        ThreadPoolExecutor(max_workers=config.parallelism)
        if config.parallelism > 1
        else None
    )

    def inspect(post: Post) -> tuple[DropDecision, list[RetrievalHit], str]:
        try:
            decision = should_drop(post)
            if decision is not DropDecision.KEEP:
                return decision, [], ""
            return decision, match_candidates(post, patterns), normalize_for_extraction(post.text)
        except SelfageError as exc:
            raise PipelineError("retrieve", str(exc)) from exc

    try:
        with posts_partial.open("w", encoding="utf-8") as posts_out:
            for batch in _batches(_iter_all_posts(config.input_paths), config.batch_size):
                if executor is not None:
                    inspected = list(executor.map(inspect, batch))
                else:
                    inspected = [inspect(post) for post in batch]
                kept: list[tuple[Post, list[RetrievalHit], str]] = []
                for post, (decision, hits, normalized) in zip(batch, inspected):
                    posts_scanned += 1
                    users_seen.add(post.user_id)
                    if decision is DropDecision.RETWEET:
                        retweets += 1
                        continue
                    if decision is DropDecision.REPORTED_SPEECH:
                        reported += 1
                        continue
                    if not hits:
                        continue
                    candidates += 1
                    users_matched.add(post.user_id)
                    kept.append((post, hits, normalized))
                if not kept:
                    continue
                predictions = _stage(
                    "classify", classifier.classify, [post for post, _, _ in kept]
                )
                for (post, hits, normalized), prediction in zip(kept, predictions):
                    extraction: Optional[Extraction] = None
                    if prediction.label is Label.AGE:
                        age_classified += 1
                        extraction = apply_cascade(normalized, rules, post_id=post.id)
                        if extraction is not None:
                            ages_extracted += 1
                            per_user.setdefault(post.user_id, []).append(
                                (extraction, post.created_at)
                            )
                    record = {
                        "post_id": post.id,
                        "user_id": post.user_id,
                        "created_at": format_timestamp(post.created_at),
                        "label": prediction.label.value,
                        "score": prediction.score,
                        "pattern_id": hits[0].pattern_id,
                    }
                    if extraction is not None:
                        record["age"] = extraction.age
                        record["rule_id"] = extraction.rule_id
                    posts_out.write(json.dumps(record, sort_keys=True) + "\n")

        with users_partial.open("w", encoding="utf-8") as users_out:
            for user_id in sorted(per_user):
                record = rollup_user(user_id, per_user[user_id])
                users_out.write(
                    json.dumps(
                        {
                            "user_id": record.user_id,
                            "posts": [
                                {
                                    "post_id": p.post_id,
                                    "created_at": format_timestamp(p.created_at),
                                    "age": p.age,
                                    "rule_id": p.rule_id,
                                }
                                for p in record.posts
                            ],
                            "latest_age": record.latest_age,
                        },
                        sort_keys=True,
                    )
                    + "\n"
                )

        report = PipelineReport(
            posts_scanned=posts_scanned,
            users_scanned=len(users_seen),
            retweets_dropped=retweets,
            reported_speech_dropped=reported,
            candidates_matched=candidates,
            users_matched=len(users_matched),
            age_classified=age_classified,
            ages_extracted=ages_extracted,
            users_with_age=len(per_user),
        )
        report_partial.write_text(
            json.dumps(report.to_json(), sort_keys=True, indent=2) + "\n",
            encoding="utf-8",
        )
        posts_partial.rename(out_dir / "posts.jsonl")
        users_partial.rename(out_dir / "users.jsonl")
        report_partial.rename(out_dir / "report.json")
        return report
    except OSError as exc:
        raise PipelineError("write", str(exc)) from exc
    finally:
        classifier.close()
        if executor is not None:
            executor.shutdown()
