"""Ordered rule cascade mapping normalized text to an exact age."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import Optional, Union

from .corpus import AGE_MAX, AGE_MIN
from .errors import RuleError


class RuleKind(Enum):
    DIRECT = "direct"
    FUTURE_COUNTDOWN = "future_countdown"
    PAST_ELAPSED = "past_elapsed"
    MAX_OF_AGES = "max_of_ages"
    ANTICIPATORY_BIRTHDAY = "anticipatory_birthday"
    TURNED_REPEAT = "turned_repeat"
    FALLBACK = "fallback"


UNITS_IN_YEAR = {"day": 365, "week": 52, "month": 12, "year": 1, "yr": 1}

# Named capture groups each kind's arithmetic consumes.
_REQUIRED_GROUPS = {
    RuleKind.DIRECT: {"age"},
    RuleKind.FUTURE_COUNTDOWN: {"qty", "unit", "age"},
    RuleKind.PAST_ELAPSED: {"qty", "age"},
    RuleKind.MAX_OF_AGES: {"age1", "age2"},
    RuleKind.ANTICIPATORY_BIRTHDAY: {"age"},
    RuleKind.TURNED_REPEAT: {"age", "times"},
    RuleKind.FALLBACK: set(),
}

_TWO_DIGIT_RUN_RE = re.compile(r"(?<!\d)\d{2}(?!\d)")


@dataclass(frozen=True)
class ExtractionRule:
    id: str
    priority: int
    kind: RuleKind
    source: str
    notes: str = ""
    compiled: Optional[re.Pattern] = field(default=None, compare=False)


@dataclass(frozen=True)
class Extraction:
    post_id: str
    age: int
    rule_id: str
    span: tuple[int, int]


def countdown_age(quantity: int, unit: str, future_age: int) -> int:
    """Age today given a countdown ("3 weeks until my 18th" -> 17)."""
    key = unit.strip().lower()
    if key.endswith("s") and key not in UNITS_IN_YEAR:
        key = key[:-1]
    if key not in UNITS_IN_YEAR:
        raise RuleError(f"unknown time unit: {unit!r}")
    return future_age - math.ceil(quantity / UNITS_IN_YEAR[key])


def fallback_first_two_digit(normalized_text: str) -> Optional[int]:
    """Leftmost maximal digit run of exactly two digits, if any."""
    m = _TWO_DIGIT_RUN_RE.search(normalized_text)
    return int(m.group(0)) if m else None


def _rule_age(rule: ExtractionRule, m: re.Match) -> int:
    kind = rule.kind
    if kind is RuleKind.DIRECT:
        return int(m.group("age"))
    if kind is RuleKind.FUTURE_COUNTDOWN:
        return countdown_age(int(m.group("qty")), m.group("unit"), int(m.group("age")))
    if kind is RuleKind.PAST_ELAPSED:
        return int(m.group("qty")) + int(m.group("age"))
    if kind is RuleKind.MAX_OF_AGES:
        return max(int(m.group("age1")), int(m.group("age2")))
    if kind is RuleKind.ANTICIPATORY_BIRTHDAY:
        return int(m.group("age")) - 1
    if kind is RuleKind.TURNED_REPEAT:
        return int(m.group("age")) + int(m.group("times")) - 1
    raise RuleError(f"rule {rule.id}: kind {kind.value} has no arithmetic")


def apply_cascade(
    normalized_text: str,
    rules: list[ExtractionRule],
    *,
    post_id: str = "",
) -> Optional[Extraction]:
    """First matching rule (rules are already priority-ordered) decides the
    age; a result outside [10, 99] means a mis-parse and yields nothing."""
    for rule in rules:
        if rule.kind is RuleKind.FALLBACK:
            m = _TWO_DIGIT_RUN_RE.search(normalized_text)
        else:
            m = rule.compiled.search(normalized_text)
        if m is None:
            continue
        if rule.kind is RuleKind.FALLBACK:
            age = int(m.group(0))
        else:
            age = _rule_age(rule, m)
        if AGE_MIN <= age <= AGE_MAX:
            return Extraction(post_id=post_id, age=age, rule_id=rule.id, span=m.span())
        return None
    return None


_FALLBACK_RULE = ExtractionRule(
    id="fallback", priority=10_000, kind=RuleKind.FALLBACK, source="-",
    notes="first two-digit group when nothing else matches",
)


def load_rules(path: Optional[Union[str, Path]] = None) -> list[ExtractionRule]:
    """Read cascade rules from TSV (id, priority, kind, pattern, notes),
    sorted by priority with a Fallback rule guaranteed present and last."""
    if path is None:
        text = (
            resources.files("selfage").joinpath("data/extraction_rules.tsv")
        ).read_text(encoding="utf-8")
        origin = "<shipped extraction rules>"
    else:
        text = Path(path).read_text(encoding="utf-8")
        origin = str(path)
    rules: list[ExtractionRule] = []
    seen_ids: set[str] = set()
    seen_priorities: dict[int, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 5:
            raise RuleError(
                f"{origin}:{lineno}: expected 5 tab-separated fields, got {len(parts)}"
            )
        rule_id, priority_text, kind_text, source, notes = (
            parts[0].strip(), parts[1].strip(), parts[2].strip(), parts[3], parts[4].strip(),
        )
        if rule_id in seen_ids:
            raise RuleError(f"duplicate rule id: {rule_id}")
        seen_ids.add(rule_id)
        try:
            priority = int(priority_text)
        except ValueError as exc:
            raise RuleError(f"rule {rule_id}: bad priority {priority_text!r}") from exc
        if priority in seen_priorities:
            raise RuleError(
                f"rule {rule_id}: priority {priority} already used by "
                f"{seen_priorities[priority]}"
            )
        seen_priorities[priority] = rule_id
        try:
            kind = RuleKind(kind_text)
        except ValueError as exc:
            raise RuleError(f"rule {rule_id}: unknown kind {kind_text!r}") from exc
        compiled = None
        if kind is not RuleKind.FALLBACK:
            try:
                compiled = re.compile(source, re.IGNORECASE)
            except re.error as exc:
                raise RuleError(f"rule {rule_id}: pattern does not compile: {exc}") from exc
            required = _REQUIRED_GROUPS[kind]
            have = set(compiled.groupindex)
            if not required <= have:
                missing = ", ".join(sorted(required - have))
                raise RuleError(f"rule {rule_id}: missing capture groups: {missing}")
        rules.append(ExtractionRule(rule_id, priority, kind, source, notes, compiled))
    rules.sort(key=lambda r: r.priority)
    if not any(r.kind is RuleKind.FALLBACK for r in rules):
        fallback = _FALLBACK_RULE
        if rules and rules[-1].priority >= fallback.priority:
            fallback = ExtractionRule(
                fallback.id, rules[-1].priority + 1, fallback.kind,
                fallback.source, fallback.notes,
            )
        rules.append(fallback)
    if rules[-1].kind is not RuleKind.FALLBACK:
        raise RuleError("a non-fallback rule sorts after the fallback rule")
    return rules


def default_rules() -> list[ExtractionRule]:
    return load_rules()
