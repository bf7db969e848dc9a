"""Spelled-out number grammar for 1-99: cardinals, ordinals, compounds."""

from __future__ import annotations

import re

_UNITS = {
    "one": 1, "two": 2, "three": 3, "four": 4, "five": 5,
    "six": 6, "seven": 7, "eight": 8, "nine": 9,
}
_TEENS = {
    "ten": 10, "eleven": 11, "twelve": 12, "thirteen": 13, "fourteen": 14,
    "fifteen": 15, "sixteen": 16, "seventeen": 17, "eighteen": 18,
    "nineteen": 19,
}
_TENS = {
    "twenty": 20, "thirty": 30, "forty": 40, "fifty": 50,
    "sixty": 60, "seventy": 70, "eighty": 80, "ninety": 90,
}
_ORDINAL_UNITS = {
    "first": 1, "second": 2, "third": 3, "fourth": 4, "fifth": 5,
    "sixth": 6, "seventh": 7, "eighth": 8, "ninth": 9,
}
_ORDINAL_TEENS = {
    "tenth": 10, "eleventh": 11, "twelfth": 12, "thirteenth": 13,
    "fourteenth": 14, "fifteenth": 15, "sixteenth": 16, "seventeenth": 17,
    "eighteenth": 18, "nineteenth": 19,
}
_ORDINAL_TENS = {
    "twentieth": 20, "thirtieth": 30, "fortieth": 40, "fiftieth": 50,
    "sixtieth": 60, "seventieth": 70, "eightieth": 80, "ninetieth": 90,
}

_CARDINAL_WORDS = {**_UNITS, **_TEENS, **_TENS}
_ORDINAL_WORDS = {**_ORDINAL_UNITS, **_ORDINAL_TEENS, **_ORDINAL_TENS}


def _alt(words) -> str:
    return "|".join(sorted(words, key=len, reverse=True))


# Compounds first so "twenty-one"/"twenty first" win over the bare tens word.
SPELLED_NUMBER_RE = re.compile(
    r"\b(?:"
    rf"(?:{_alt(_TENS)})[\s-](?:{_alt(_ORDINAL_UNITS)})"
    rf"|(?:{_alt(_TENS)})[\s-](?:{_alt(_UNITS)})"
    rf"|{_alt(_ORDINAL_TENS)}"
    rf"|{_alt(_ORDINAL_TEENS)}"
    rf"|{_alt(_TEENS)}"
    rf"|{_alt(_TENS)}"
    rf"|{_alt(_ORDINAL_UNITS)}"
    rf"|{_alt(_UNITS)}"
    r")\b",
    re.IGNORECASE,
)

SPELLED_AGE_SOURCE = (
    rf"(?:(?:{_alt(_TENS)})[\s-](?:{_alt(_UNITS)})"
    rf"|{_alt(_TEENS)}"
    rf"|{_alt(_TENS)})"
)

SPELLED_ORDINAL_SOURCE = (
    rf"(?:(?:{_alt(_TENS)})[\s-](?:{_alt(_ORDINAL_UNITS)})"
    rf"|{_alt(_ORDINAL_TENS)}"
    rf"|{_alt(_ORDINAL_TEENS)})"
)


def ordinal_suffix(n: int) -> str:
    if n % 100 in (11, 12, 13):
        return "th"
    return {1: "st", 2: "nd", 3: "rd"}.get(n % 10, "th")


def spelled_to_digits(phrase: str) -> str:
    """Render a matched spelled-out number as digits ("twenty-first" -> "21st")."""
    parts = re.split(r"[\s-]+", phrase.strip().lower())
    value = 0
    is_ordinal = False
    for part in parts:
        if part in _CARDINAL_WORDS:
            value += _CARDINAL_WORDS[part]
        elif part in _ORDINAL_WORDS:
            value += _ORDINAL_WORDS[part]
            is_ordinal = True
        else:
            raise ValueError(f"not a spelled-out number part: {part!r}")
    if is_ordinal:
        return f"{value}{ordinal_suffix(value)}"
    return str(value)
