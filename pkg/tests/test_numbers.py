"""Spelled-out number recognition and conversion to digits."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from selfage.numbers import SPELLED_NUMBER_RE, ordinal_suffix, spelled_to_digits

_UNITS = ["one", "two", "three", "four", "five", "six", "seven", "eight",
          "nine"]
_TEENS = ["ten", "eleven", "twelve", "thirteen", "fourteen", "fifteen",
          "sixteen", "seventeen", "eighteen", "nineteen"]
_TENS = ["twenty", "thirty", "forty", "fifty", "sixty", "seventy", "eighty",
         "ninety"]
_ORDINAL_UNITS = ["first", "second", "third", "fourth", "fifth", "sixth",
                  "seventh", "eighth", "ninth"]
_ORDINAL_TEENS = ["tenth", "eleventh", "twelfth", "thirteenth", "fourteenth",
                  "fifteenth", "sixteenth", "seventeenth", "eighteenth",
                  "nineteenth"]
_ORDINAL_TENS = ["twentieth", "thirtieth", "fortieth", "fiftieth", "sixtieth",
                 "seventieth", "eightieth", "ninetieth"]


def spell_cardinal(n: int) -> str:
    if 1 <= n <= 9:
        return _UNITS[n - 1]
    if 10 <= n <= 19:
        return _TEENS[n - 10]
    tens, units = divmod(n, 10)
    word = _TENS[tens - 2]
    return f"{word}-{spell_cardinal(units)}" if units else word


def spell_ordinal(n: int) -> str:
    if 1 <= n <= 9:
        return _ORDINAL_UNITS[n - 1]
    if 10 <= n <= 19:
        return _ORDINAL_TEENS[n - 10]
    tens, units = divmod(n, 10)
    if units == 0:
        return _ORDINAL_TENS[tens - 2]
    return f"{_TENS[tens - 2]}-{_ORDINAL_UNITS[units - 1]}"


class TestSpelledToDigits:
    @pytest.mark.parametrize("phrase,expected", [
        ("two", "2"),
        ("ten", "10"),
        ("twelve", "12"),
        ("twenty", "20"),
        ("twenty one", "21"),
        ("twenty-one", "21"),
        ("ninety nine", "99"),
        ("first", "1st"),
        ("second", "2nd"),
        ("third", "3rd"),
        ("twelfth", "12th"),
        ("twentieth", "20th"),
        ("twenty-first", "21st"),
        ("thirty second", "32nd"),
        ("fortieth", "40th"),
        ("ninety-ninth", "99th"),
    ])
    def test_examples(self, phrase, expected):
        assert spelled_to_digits(phrase) == expected

    def test_case_insensitive(self):
        assert spelled_to_digits("Twenty-One") == "21"
        assert spelled_to_digits("TWELFTH") == "12th"

    def test_rejects_non_numbers(self):
        with pytest.raises(ValueError):
            spelled_to_digits("banana")

    @given(st.integers(min_value=1, max_value=99))
    def test_cardinal_round_trip(self, n):
        assert spelled_to_digits(spell_cardinal(n)) == str(n)

    @given(st.integers(min_value=1, max_value=99))
    def test_ordinal_round_trip(self, n):
        assert spelled_to_digits(spell_ordinal(n)) == f"{n}{ordinal_suffix(n)}"


class TestSpelledNumberRe:
    @given(st.integers(min_value=1, max_value=99))
    def test_matches_whole_cardinal(self, n):
        phrase = spell_cardinal(n)
        m = SPELLED_NUMBER_RE.search(f"I am {phrase} years old")
        assert m is not None
        assert m.group(0).lower() == phrase

    @given(st.integers(min_value=1, max_value=99))
    def test_matches_whole_ordinal(self, n):
        phrase = spell_ordinal(n)
        m = SPELLED_NUMBER_RE.search(f"my {phrase} birthday")
        assert m is not None
        assert m.group(0).lower() == phrase

    def test_compound_preferred_over_tens_prefix(self):
        m = SPELLED_NUMBER_RE.search("twenty one")
        assert m.group(0) == "twenty one"

    def test_no_match_inside_words(self):
        assert SPELLED_NUMBER_RE.search("someone attended") is None
        assert SPELLED_NUMBER_RE.search("nettenham") is None


class TestOrdinalSuffix:
    @pytest.mark.parametrize("n,suffix", [
        (1, "st"), (2, "nd"), (3, "rd"), (4, "th"), (10, "th"),
        (11, "th"), (12, "th"), (13, "th"), (21, "st"), (22, "nd"),
        (23, "rd"), (24, "th"), (99, "th"),
    ])
    def test_examples(self, n, suffix):
        assert ordinal_suffix(n) == suffix
