"""Text normalization for the extraction, bag-of-words, and contextual paths."""

from __future__ import annotations

import re

from .numbers import SPELLED_NUMBER_RE, spelled_to_digits
from .stemmer import stem

# Trailing punctuation is left out of the match so "see http://x.co." keeps
# its sentence period. Schemeless matching sticks to a short TLD allowlist so
# stray punctuation ("birthday.My plans") is not mistaken for a domain.
_TRAIL = r"(?=$|\s|[.,!?;:)\"']+(?:\s|$))"
URL_RE = re.compile(
    rf"(?:https?://\S+?{_TRAIL}"
    rf"|www\.\S+?{_TRAIL}"
    r"|\b(?:[A-Za-z0-9-]+\.)+"
    r"(?:com|net|org|edu|gov|io|co|ly|me|tv|be|gg|info|biz)"
    rf"(?:/\S*?)?{_TRAIL})",
    re.IGNORECASE,
)
MENTION_RE = re.compile(r"@\w+")

# Both neighbours must be lone digits; the gap may not contain word characters.
_DIGIT_JOIN_RE = re.compile(r"(?<!\d)(\d)[\W_]{1,2}(\d)(?!\d)")

_SENTINEL_RE = re.compile(r"<url>|<user>|<num>")
_NGRAM_SPAN_RE = re.compile(
    rf"(?P<sent>{_SENTINEL_RE.pattern})|(?P<url>{URL_RE.pattern})"
    rf"|(?P<user>{MENTION_RE.pattern})|(?P<num>\d+)",
    re.IGNORECASE,
)
_WORD_SPLIT_RE = re.compile(r"[\W_]+")

# Entity removal can splice text into a fresh entity ("x.co@m" -> "x.co"),
# so every normalizer reruns its passes until nothing changes.
_MAX_ROUNDS = 100


class _Tracked:
    """A string plus, per character, the index it came from in the original."""

    def __init__(self, text: str):
        self.text = text
        self.src = list(range(len(text)))

    def rewrite(self, pattern: re.Pattern, pieces_fn) -> bool:
        """Replace each match with pieces_fn(match) -> [(chars, at)] where
        ``at`` is an index into the current text the chars derive from."""
        out: list[str] = []
        src: list[int] = []
        pos = 0
        changed = False
        for m in pattern.finditer(self.text):
            out.append(self.text[pos:m.start()])
            src.extend(self.src[pos:m.start()])
            pieces = pieces_fn(m)
            for chars, at in pieces:
                out.append(chars)
                src.extend([self.src[at]] * len(chars))
            if m.group(0) != "".join(chars for chars, _ in pieces):
                changed = True
            pos = m.end()
        out.append(self.text[pos:])
        src.extend(self.src[pos:])
        self.text = "".join(out)
        self.src = src
        return changed


def _extraction_fixpoint(tracked: _Tracked) -> None:
    for _ in range(_MAX_ROUNDS):
        changed = tracked.rewrite(URL_RE, lambda m: [])
        changed |= tracked.rewrite(MENTION_RE, lambda m: [])
        changed |= tracked.rewrite(
            SPELLED_NUMBER_RE,
            lambda m: [(spelled_to_digits(m.group(0)), m.start())],
        )
        while tracked.rewrite(
            _DIGIT_JOIN_RE,
            lambda m: [(m.group(1), m.start(1)), (m.group(2), m.start(2))],
        ):
            changed = True
        if not changed:
            return


def normalize_for_extraction(text: str) -> str:
    """Strip URLs and mentions, spell numbers as digits, join split digits.

    Case and all other characters are preserved so downstream patterns see
    the author's wording.
    """
    tracked = _Tracked(text)
    _extraction_fixpoint(tracked)
    return tracked.text


def normalize_for_extraction_with_offsets(text: str) -> tuple[str, tuple[int, ...]]:
    """Like normalize_for_extraction, also mapping each output character to
    the index in ``text`` it derives from (synthesized characters map to the
    start of the span they replaced)."""
    tracked = _Tracked(text)
    _extraction_fixpoint(tracked)
    return tracked.text, tuple(tracked.src)


def _stem_fixpoint(word: str) -> str:
    for _ in range(_MAX_ROUNDS):
        out = stem(word)
        if out == word:
            return out
        word = out
    return word


def normalize_for_ngram_classifier(text: str) -> list[str]:
    """Tokenize for the bag-of-words model: sentinel URLs, mentions and
    numbers, lowercase, drop punctuation, stem.

    Sentinels pass through unchanged and stemming runs to a fixpoint, so
    renormalizing the joined output reproduces the same tokens.
    """
    tokens: list[str] = []

    def add_words(segment: str) -> None:
        for word in _WORD_SPLIT_RE.split(segment.lower()):
            if word:
                tokens.append(_stem_fixpoint(word))

    pos = 0
    for m in _NGRAM_SPAN_RE.finditer(text):
        add_words(text[pos:m.start()])
        if m.lastgroup == "sent":
            tokens.append(m.group(0).lower())
        elif m.lastgroup == "url":
            tokens.append("<url>")
        elif m.lastgroup == "user":
            tokens.append("<user>")
        else:
            tokens.append("<num>")
        pos = m.end()
    add_words(text[pos:])
    return tokens


def normalize_for_contextual_classifier(text: str) -> str:
    """Sentinel URLs and mentions, lowercase; punctuation and digits stay."""
    out = text
    for _ in range(_MAX_ROUNDS):
        step = MENTION_RE.sub("<user>", URL_RE.sub("<url>", out))
        if step == out:
            break
        out = step
    return out.lower()
