"""High-recall retrieval of posts that may state the author's age (10-99)."""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import Iterable, Optional, Union

from .corpus import Post
from .errors import PatternError
from .normalize import URL_RE

# Cheap gate run before the full pattern set: every shipped pattern requires
# a digit or a spelled-out number, so a post without these can be skipped.
_PREFILTER_RE = re.compile(
    r"\d|ten|teen|eleven|twelf|twelve|twent|thirt|fort|fift|sixt|sevent|eight|ninet",
    re.IGNORECASE,
)

_QUOTE_CHARS = {'"', "“", "”"}
_ATTRIBUTION_RE = re.compile(
    r"—|–|(?:^|\s)--?\s|\bvia\b|\bsays?\b|\bsaid\b",
    re.IGNORECASE,
)
_FIRST_PERSON_RE = re.compile(
    r"\b(?:i|i'?m|i'?ll|i'?ve|i'?d|me|my|mine|we|our|ours|us)\b", re.IGNORECASE
)
_TRAILING_URL_RE = re.compile(r"(?:https?://\S+|www\.\S+)[\s.!?]*$", re.IGNORECASE)
_RT_PREFIX_RE = re.compile(r"^\s*rt\s*@", re.IGNORECASE)
_DIGIT_RUN_RE = re.compile(r"\d+")


@dataclass(frozen=True)
class QueryPattern:
    id: str
    source: str
    description: str


@dataclass(frozen=True)
class RetrievalHit:
    post_id: str
    pattern_id: str
    span: tuple[int, int]


class DropDecision(Enum):
    KEEP = "keep"
    RETWEET = "retweet"
    REPORTED_SPEECH = "reported_speech"


class CompiledPatternSet:
    """Immutable matcher over an ordered pattern list."""

    def __init__(self, patterns: list[QueryPattern], compiled: list[re.Pattern]):
        self._patterns = tuple(patterns)
        self._compiled = tuple(compiled)

    @property
    def patterns(self) -> tuple[QueryPattern, ...]:
        return self._patterns

    def finditer(self, text: str):
        if not _PREFILTER_RE.search(text):
            return
        found = []
        for index, compiled in enumerate(self._compiled):
            for m in compiled.finditer(text):
                found.append((m.start(), m.end(), index))
        found.sort(key=lambda item: (item[0], item[2], item[1]))
        last_end = 0
        for start, end, index in found:
            if start >= last_end:
                last_end = end
                yield self._patterns[index], (start, end)


def compile_pattern_set(patterns: Iterable[QueryPattern]) -> CompiledPatternSet:
    ordered = list(patterns)
    seen: set[str] = set()
    compiled = []
    for pattern in ordered:
        if pattern.id in seen:
            raise PatternError(f"duplicate pattern id: {pattern.id}")
        seen.add(pattern.id)
        try:
            compiled.append(re.compile(pattern.source, re.IGNORECASE))
        except re.error as exc:
            raise PatternError(f"pattern {pattern.id} does not compile: {exc}") from exc
    return CompiledPatternSet(ordered, compiled)


def load_query_patterns(path: Optional[Union[str, Path]] = None) -> list[QueryPattern]:
    """Read patterns from a TSV file (id, source, description); '#' comments
    and blank lines are skipped. Defaults to the shipped set."""
    if path is None:
        text = (
            resources.files("selfage").joinpath("data/query_patterns.tsv")
        ).read_text(encoding="utf-8")
        origin = "<shipped query patterns>"
    else:
        text = Path(path).read_text(encoding="utf-8")
        origin = str(path)
    patterns = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise PatternError(
                f"{origin}:{lineno}: expected 3 tab-separated fields, got {len(parts)}"
            )
        patterns.append(QueryPattern(parts[0].strip(), parts[1], parts[2].strip()))
    return patterns


def default_pattern_set() -> CompiledPatternSet:
    return compile_pattern_set(load_query_patterns())


def match_candidates(post: Post, matcher: CompiledPatternSet) -> list[RetrievalHit]:
    """All non-overlapping hits in text order; overlaps resolve to the
    earliest start, then the earliest pattern in file order."""
    return [
        RetrievalHit(post_id=post.id, pattern_id=pattern.id, span=span)
        for pattern, span in matcher.finditer(post.text)
    ]


def _quoted_spans(text: str) -> list[tuple[int, int]]:
    spans = []
    open_at: Optional[int] = None
    for i, ch in enumerate(text):
        if ch not in _QUOTE_CHARS:
            continue
        if ch == "“":
            open_at = i
        elif ch == "”":
            if open_at is not None:
                spans.append((open_at, i + 1))
                open_at = None
        else:
            if open_at is None:
                open_at = i
            else:
                spans.append((open_at, i + 1))
                open_at = None
    return spans


def should_drop(post: Post) -> DropDecision:
    """Drop retweets and text quoting someone else's age statement.

    Reported speech fires when a digit run sits inside a balanced quoted
    span with an attribution marker (dash, "via", "says", a URL) outside
    it, or when the text has no first-person pronoun and trails off in a
    URL (headline shape).
    """
    text = post.text
    if post.is_retweet or _RT_PREFIX_RE.search(text):
        return DropDecision.RETWEET
    spans = _quoted_spans(text)
    if spans:
        quoted_digit = any(
            any(start <= m.start() and m.end() <= end for start, end in spans)
            for m in _DIGIT_RUN_RE.finditer(text)
        )
        if quoted_digit:
            outside = "".join(
                ch
                for i, ch in enumerate(text)
                if not any(start <= i < end for start, end in spans)
            )
            if _ATTRIBUTION_RE.search(outside) or URL_RE.search(outside):
                return DropDecision.REPORTED_SPEECH
    if not _FIRST_PERSON_RE.search(text) and _TRAILING_URL_RE.search(text):
        return DropDecision.REPORTED_SPEECH
    return DropDecision.KEEP
