"""Corpus data model, file I/O, and stratified train/test splitting.

Posts live in JSONL (one object per line) or TSV (header row); labels live
in TSV with columns ``post_id``, ``label`` (``age``/``no_age``) and ``age``
(empty for ``no_age`` rows). Timestamps are RFC-3339 strings on disk and
timezone-aware UTC datetimes in memory, truncated to whole seconds.
"""

from __future__ import annotations

import csv
import json
import math
import random
from dataclasses import dataclass
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from .errors import CorpusError

AGE_MIN = 10
AGE_MAX = 99

POST_FIELDS = ("id", "user_id", "created_at", "text", "is_retweet")


class Label(str, Enum):
    AGE = "age"
    NO_AGE = "no_age"


@dataclass(frozen=True)
class Post:
    """One social-media message."""

    id: str
    user_id: str
    created_at: datetime
    text: str
    is_retweet: bool = False

    def __post_init__(self):
        if not self.id:
            raise CorpusError("post id must be non-empty")


@dataclass(frozen=True)
class LabeledPost:
    """A post plus its gold class and, for 'age' posts, the gold exact age."""

    post: Post
    label: Label
    age: int | None = None

    def __post_init__(self):
        if self.label is Label.AGE:
            if self.age is None:
                raise CorpusError(f"post {self.post.id}: 'age' label requires an age")
            if not AGE_MIN <= self.age <= AGE_MAX:
                raise CorpusError(
                    f"post {self.post.id}: age {self.age} outside [{AGE_MIN}, {AGE_MAX}]"
                )
        elif self.age is not None:
            raise CorpusError(f"post {self.post.id}: 'no_age' label must not carry an age")


@dataclass(frozen=True)
class SplitResult:
    train: tuple[LabeledPost, ...]
    test: tuple[LabeledPost, ...]
    seed: int


def parse_timestamp(value: str) -> datetime:
    """Parse an RFC-3339 timestamp into a UTC datetime with whole seconds."""
    if not isinstance(value, str) or not value:
        raise CorpusError(f"invalid timestamp: {value!r}")
    text = value.strip()
    if text.endswith(("Z", "z")):
        text = text[:-1] + "+00:00"
    try:
        parsed = datetime.fromisoformat(text)
    except ValueError as exc:
        raise CorpusError(f"invalid timestamp: {value!r}") from exc
    if parsed.tzinfo is None:
        raise CorpusError(f"timestamp missing UTC offset: {value!r}")
    return parsed.astimezone(timezone.utc).replace(microsecond=0)


def format_timestamp(value: datetime) -> str:
    return value.astimezone(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def _parse_retweet_flag(value, where: str) -> bool:
    if isinstance(value, bool):
        return value
    if value is None or value == "":
        return False
    if isinstance(value, str):
        lowered = value.strip().lower()
        if lowered in ("true", "1", "yes"):
            return True
        if lowered in ("false", "0", "no"):
            return False
    raise CorpusError(f"{where}: invalid is_retweet value {value!r}")


def _post_from_record(record: dict, where: str) -> Post:
    for field in ("id", "user_id", "created_at", "text"):
        if field not in record or record[field] is None:
            raise CorpusError(f"{where}: missing field {field!r}")
    text = record["text"]
    if not isinstance(text, str):
        raise CorpusError(f"{where}: text must be a string")
    try:
        created = parse_timestamp(record["created_at"])
    except CorpusError as exc:
        raise CorpusError(f"{where}: {exc}") from exc
    return Post(
        id=str(record["id"]),
        user_id=str(record["user_id"]),
        created_at=created,
        text=text,
        is_retweet=_parse_retweet_flag(record.get("is_retweet"), where),
    )


def iter_posts(path: str | Path, format: str = "jsonl") -> Iterator[Post]:
    """Stream posts from a JSONL or TSV file in file order."""
    path = Path(path)
    if format == "jsonl":
        with open(path, encoding="utf-8") as handle:
            for lineno, line in enumerate(handle, start=1):
                if not line.strip():
                    continue
                where = f"{path}:{lineno}"
                try:
                    record = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise CorpusError(f"{where}: invalid JSON ({exc.msg})") from exc
                if not isinstance(record, dict):
                    raise CorpusError(f"{where}: record must be an object")
                yield _post_from_record(record, where)
    elif format == "tsv":
        with open(path, encoding="utf-8", newline="") as handle:
            reader = csv.DictReader(handle, delimiter="\t")
            if reader.fieldnames is None:
                return
            missing = {"id", "user_id", "created_at", "text"} - set(reader.fieldnames)
            if missing:
                raise CorpusError(f"{path}: missing TSV columns {sorted(missing)}")
            for record in reader:
                where = f"{path}:{reader.line_num}"
                if any(record.get(field) is None for field in ("id", "user_id", "created_at", "text")):
                    raise CorpusError(f"{where}: truncated row")
                yield _post_from_record(record, where)
    else:
        raise ValueError(f"unknown corpus format: {format!r}")


def load_posts(path: str | Path, format: str = "jsonl") -> list[Post]:
    """Load a whole post file; validates id uniqueness across the corpus."""
    posts = list(iter_posts(path, format=format))
    seen: set[str] = set()
    for post in posts:
        if post.id in seen:
            raise CorpusError(f"duplicate post id {post.id!r} in {path}")
        seen.add(post.id)
    return posts


def post_to_record(post: Post) -> dict:
    return {
        "id": post.id,
        "user_id": post.user_id,
        "created_at": format_timestamp(post.created_at),
        "text": post.text,
        "is_retweet": post.is_retweet,
    }


def save_posts(path: str | Path, posts: Iterable[Post], format: str = "jsonl") -> None:
    path = Path(path)
    if format == "jsonl":
        with open(path, "w", encoding="utf-8") as handle:
            for post in posts:
                handle.write(json.dumps(post_to_record(post), ensure_ascii=False) + "\n")
    elif format == "tsv":
        with open(path, "w", encoding="utf-8", newline="") as handle:
            writer = csv.DictWriter(handle, fieldnames=list(POST_FIELDS), delimiter="\t")
            writer.writeheader()
            for post in posts:
                record = post_to_record(post)
                record["is_retweet"] = "true" if post.is_retweet else "false"
                writer.writerow(record)
    else:
        raise ValueError(f"unknown corpus format: {format!r}")


def load_labels(path: str | Path, posts: Sequence[Post]) -> list[LabeledPost]:
    """Load a label TSV and join it against the given posts.

    Every row must reference a known post id; 'age' rows must carry an
    integer age in [10, 99] and 'no_age' rows must leave the age column
    empty.
    """
    by_id = {post.id: post for post in posts}
    path = Path(path)
    labeled: list[LabeledPost] = []
    with open(path, encoding="utf-8", newline="") as handle:
        reader = csv.DictReader(handle, delimiter="\t")
        if reader.fieldnames is None:
            return []
        missing = {"post_id", "label"} - set(reader.fieldnames)
        if missing:
            raise CorpusError(f"{path}: missing label columns {sorted(missing)}")
        for row in reader:
            where = f"{path}:{reader.line_num}"
            post_id = row.get("post_id") or ""
            post = by_id.get(post_id)
            if post is None:
                raise CorpusError(f"{where}: unknown post id {post_id!r}")
            raw_label = (row.get("label") or "").strip().lower()
            try:
                label = Label(raw_label)
            except ValueError:
                raise CorpusError(f"{where}: unknown label {raw_label!r}") from None
            raw_age = (row.get("age") or "").strip()
            age: int | None = None
            if label is Label.AGE:
                if not raw_age:
                    raise CorpusError(f"{where}: 'age' row missing age value")
                try:
                    age = int(raw_age)
                except ValueError:
                    raise CorpusError(f"{where}: non-integer age {raw_age!r}") from None
            elif raw_age:
                raise CorpusError(f"{where}: 'no_age' row carries an age")
            try:
                labeled.append(LabeledPost(post=post, label=label, age=age))
            except CorpusError as exc:
                raise CorpusError(f"{where}: {exc}") from exc
    return labeled


def save_labels(path: str | Path, labeled: Iterable[LabeledPost]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, delimiter="\t")
        writer.writerow(["post_id", "label", "age"])
        for item in labeled:
            writer.writerow([item.post.id, item.label.value, "" if item.age is None else item.age])


def stratified_split(
    data: Sequence[LabeledPost], train_fraction: float, seed: int
) -> SplitResult:
    """Split per class: floor(count * fraction) items to train, rest to test.

    Shuffling is seeded and per-class, so the result is deterministic
    across machines for a fixed seed.
    """
    if not 0 < train_fraction < 1:
        raise ValueError(f"train_fraction must be in (0, 1), got {train_fraction}")
    by_class: dict[Label, list[LabeledPost]] = {Label.AGE: [], Label.NO_AGE: []}
    for item in data:
        by_class[item.label].append(item)
    for label, items in by_class.items():
        if not items:
            raise CorpusError(f"cannot stratify: class {label.value!r} has no items")
    rng = random.Random(seed)
    train: list[LabeledPost] = []
    test: list[LabeledPost] = []
    for label in (Label.AGE, Label.NO_AGE):
        items = list(by_class[label])
        rng.shuffle(items)
        # Epsilon guards against float dust when count * fraction is integral.
        n_train = math.floor(len(items) * train_fraction + 1e-9)
        train.extend(items[:n_train])
        test.extend(items[n_train:])
    return SplitResult(train=tuple(train), test=tuple(test), seed=seed)
