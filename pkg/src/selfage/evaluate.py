"""Classification metrics, joint extraction metrics, and rater agreement."""

from __future__ import annotations

from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Decimal
from typing import Optional, Sequence

import numpy as np

from .classify import Prediction
from .corpus import Label, LabeledPost
from .errors import EvalError
from .extract import Extraction


@dataclass(frozen=True)
class EvalCounts:
    tp: int
    fp: int
    fn: int

    def __post_init__(self):
        if min(self.tp, self.fp, self.fn) < 0:
            raise EvalError("counts must be non-negative")

    def __add__(self, other: "EvalCounts") -> "EvalCounts":
        return EvalCounts(self.tp + other.tp, self.fp + other.fp, self.fn + other.fn)


@dataclass(frozen=True)
class Metrics:
    precision: float
    recall: float
    f1: float


def _ratio(num: float, den: float) -> float:
    return num / den if den else 0.0


def prf(counts: EvalCounts) -> Metrics:
    """Precision, recall, F1 with the 0/0 -> 0 convention."""
    precision = _ratio(counts.tp, counts.tp + counts.fp)
    recall = _ratio(counts.tp, counts.tp + counts.fn)
    f1 = _ratio(2 * recall * precision, recall + precision)
    return Metrics(precision=precision, recall=recall, f1=f1)


def display_round(value: float, places: int = 3) -> float:
    """Half-to-even rounding for display; raw values stay untouched."""
    quantum = Decimal(1).scaleb(-places)
    return float(Decimal(repr(value)).quantize(quantum, rounding=ROUND_HALF_EVEN))


def _check_bijective(pred_ids: Sequence[str], gold: Sequence[LabeledPost]) -> None:
    gold_ids = [item.post.id for item in gold]
    if len(set(pred_ids)) != len(pred_ids):
        raise EvalError("duplicate prediction ids")
    if len(set(gold_ids)) != len(gold_ids):
        raise EvalError("duplicate gold ids")
    if set(pred_ids) != set(gold_ids):
        missing = set(gold_ids) - set(pred_ids)
        extra = set(pred_ids) - set(gold_ids)
        raise EvalError(
            f"prediction ids do not match gold ids "
            f"(missing: {sorted(missing)[:3]}, extra: {sorted(extra)[:3]})"
        )


def classification_eval(
    predictions: Sequence[Prediction], gold: Sequence[LabeledPost]
) -> EvalCounts:
    _check_bijective([p.post_id for p in predictions], gold)
    by_id = {item.post.id: item for item in gold}
    tp = fp = fn = 0
    for pred in predictions:
        truth = by_id[pred.post_id]
        if truth.label is Label.AGE and pred.label is Label.AGE:
            tp += 1
        elif truth.label is Label.NO_AGE and pred.label is Label.AGE:
            fp += 1
        elif truth.label is Label.AGE and pred.label is Label.NO_AGE:
            fn += 1
    return EvalCounts(tp=tp, fp=fp, fn=fn)


@dataclass(frozen=True)
class JointBreakdown:
    """The five error cells of the joint class+age taxonomy, plus the rest."""

    correct_age: int
    wrong_age: int
    spurious_age: int
    missing_extraction: int
    missed_class: int
    true_negative: int

    def counts(self) -> EvalCounts:
        return EvalCounts(
            tp=self.correct_age,
            fp=self.wrong_age + self.spurious_age,
            fn=self.missing_extraction + self.missed_class,
        )


def joint_extraction_breakdown(
    results: Sequence[tuple[Prediction, Optional[Extraction]]],
    gold: Sequence[LabeledPost],
) -> JointBreakdown:
    _check_bijective([pred.post_id for pred, _ in results], gold)
    by_id = {item.post.id: item for item in gold}
    correct_age = wrong_age = spurious_age = 0
    missing_extraction = missed_class = true_negative = 0
    for pred, extraction in results:
        if extraction is not None and extraction.post_id != pred.post_id:
            raise EvalError(
                f"extraction id {extraction.post_id!r} does not match "
                f"prediction id {pred.post_id!r}"
            )
        truth = by_id[pred.post_id]
        gold_age = truth.label is Label.AGE
        pred_age = pred.label is Label.AGE
        if gold_age and pred_age and extraction is not None:
            if extraction.age == truth.age:
                correct_age += 1
            else:
                wrong_age += 1
        elif not gold_age and pred_age and extraction is not None:
            spurious_age += 1
        elif gold_age and pred_age and extraction is None:
            missing_extraction += 1
        elif gold_age and not pred_age:
            missed_class += 1
        else:
            true_negative += 1
    return JointBreakdown(
        correct_age=correct_age,
        wrong_age=wrong_age,
        spurious_age=spurious_age,
        missing_extraction=missing_extraction,
        missed_class=missed_class,
        true_negative=true_negative,
    )


def joint_extraction_eval(
    results: Sequence[tuple[Prediction, Optional[Extraction]]],
    gold: Sequence[LabeledPost],
) -> EvalCounts:
    return joint_extraction_breakdown(results, gold).counts()


@dataclass(frozen=True)
class RatingMatrix:
    """Items x categories table of per-item rater counts."""

    table: tuple[tuple[int, ...], ...]

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "RatingMatrix":
        return cls(tuple(tuple(int(v) for v in row) for row in rows))

    @classmethod
    def from_labels(cls, rows: Sequence[Sequence[str]]) -> "RatingMatrix":
        """Build from per-item rater label lists."""
        categories = sorted({label for row in rows for label in row})
        table = []
        for row in rows:
            counts = [0] * len(categories)
            for label in row:
                counts[categories.index(label)] += 1
            table.append(tuple(counts))
        return cls(tuple(table))

    @property
    def raters_per_item(self) -> int:
        return sum(self.table[0]) if self.table else 0

    def validate(self) -> None:
        if not self.table:
            raise EvalError("rating matrix needs at least one item")
        widths = {len(row) for row in self.table}
        if len(widths) != 1:
            raise EvalError("rating matrix rows have differing category counts")
        raters = self.raters_per_item
        if raters < 2:
            raise EvalError("rating matrix needs at least two raters per item")
        for i, row in enumerate(self.table):
            if any(v < 0 for v in row):
                raise EvalError(f"rating matrix row {i} has a negative count")
            if sum(row) != raters:
                raise EvalError(
                    f"rating matrix row {i} sums to {sum(row)}, expected {raters}"
                )


def fleiss_kappa(matrix: RatingMatrix) -> float:
    """Standard Fleiss' kappa; degenerate chance agreement of 1 (all raters
    one category everywhere) reads as perfect agreement, 1.0."""
    matrix.validate()
    table = np.asarray(matrix.table, dtype=np.float64)
    n_items, _ = table.shape
    raters = matrix.raters_per_item
    p_categories = table.sum(axis=0) / (n_items * raters)
    p_items = ((table * table).sum(axis=1) - raters) / (raters * (raters - 1))
    p_bar = float(p_items.mean())
    p_expected = float((p_categories * p_categories).sum())
    if p_expected >= 1.0:
        return 1.0
    return (p_bar - p_expected) / (1.0 - p_expected)


def classification_report(
    counts: EvalCounts, total_items: int
) -> dict:
    metrics = prf(counts)
    tn = total_items - counts.tp - counts.fp - counts.fn
    return {
        "counts": {"tp": counts.tp, "fp": counts.fp, "fn": counts.fn, "tn": tn},
        "metrics": {
            "precision": metrics.precision,
            "recall": metrics.recall,
            "f1": metrics.f1,
        },
        "display": {
            "precision": display_round(metrics.precision),
            "recall": display_round(metrics.recall),
            "f1": display_round(metrics.f1),
        },
    }


def joint_report(breakdown: JointBreakdown) -> dict:
    counts = breakdown.counts()
    report = classification_report(
        counts,
        total_items=counts.tp + counts.fp + counts.fn + breakdown.true_negative,
    )
    report["taxonomy"] = {
        "correct_age": breakdown.correct_age,
        "wrong_age": breakdown.wrong_age,
        "spurious_age": breakdown.spurious_age,
        "missing_extraction": breakdown.missing_extraction,
        "missed_class": breakdown.missed_class,
        "true_negative": breakdown.true_negative,
    }
    return report


def render_report_table(report: dict) -> str:
    lines = []
    counts = report["counts"]
    lines.append(f"{'':<22}{'tp':>8}{'fp':>8}{'fn':>8}{'tn':>8}")
    lines.append(
        f"{'counts':<22}{counts['tp']:>8}{counts['fp']:>8}"
        f"{counts['fn']:>8}{counts['tn']:>8}"
    )
    display = report["display"]
    lines.append("")
    lines.append(f"{'precision':<12}{display['precision']:>8.3f}")
    lines.append(f"{'recall':<12}{display['recall']:>8.3f}")
    lines.append(f"{'f1':<12}{display['f1']:>8.3f}")
    if "taxonomy" in report:
        lines.append("")
        for cell, value in report["taxonomy"].items():
            lines.append(f"{cell:<22}{value:>8}")
    return "\n".join(lines)
