"""Binary age/no-age classification: n-gram max-margin baseline."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence, Union

import numpy as np
from scipy.sparse import csr_matrix
from sklearn.svm import LinearSVC

from .corpus import Label, LabeledPost, Post
from .errors import TrainingError
from .normalize import normalize_for_ngram_classifier

MODEL_MAGIC = "selfage-baseline-model"
MODEL_SCHEMA_VERSION = 1

NGRAM_MIN = 1
NGRAM_MAX = 3


@dataclass(frozen=True)
class BaselineConfig:
    seed: int
    c: float = 32.0
    weight_no_age: float = 1.0
    weight_age: float = 2.0


@dataclass(frozen=True)
class NgramVocabulary:
    index: dict[str, int]
    feature_min: np.ndarray
    feature_max: np.ndarray

    def __len__(self) -> int:
        return len(self.index)


@dataclass(frozen=True)
class BaselineModel:
    vocabulary: NgramVocabulary
    weights: np.ndarray
    bias: float
    config: BaselineConfig


@dataclass(frozen=True)
class Prediction:
    post_id: str
    label: Label
    score: float


def iter_ngrams(tokens: Sequence[str], n_min: int = NGRAM_MIN, n_max: int = NGRAM_MAX):
    for n in range(n_min, n_max + 1):
        for i in range(len(tokens) - n + 1):
            yield " ".join(tokens[i:i + n])


def featurize(tokens: Sequence[str], vocab: NgramVocabulary) -> dict[int, float]:
    """Counts of vocabulary n-grams; out-of-vocabulary n-grams contribute
    nothing."""
    counts: dict[int, float] = {}
    index = vocab.index
    for gram in iter_ngrams(tokens):
        j = index.get(gram)
        if j is not None:
            counts[j] = counts.get(j, 0.0) + 1.0
    return counts


def scale(vector: dict[int, float], vocab: NgramVocabulary) -> dict[int, float]:
    """Map each coordinate to [0, 1] by the training min/max, clamping
    out-of-range values; constant features map to 0."""
    lo = vocab.feature_min
    hi = vocab.feature_max
    out: dict[int, float] = {}
    for j, value in vector.items():
        width = hi[j] - lo[j]
        if width <= 0:
            continue
        scaled = (value - lo[j]) / width
        if scaled < 0.0:
            scaled = 0.0
        elif scaled > 1.0:
            scaled = 1.0
        if scaled != 0.0:
            out[j] = scaled
    return out


def _to_csr(vectors: list[dict[int, float]], width: int) -> csr_matrix:
    data: list[float] = []
    indices: list[int] = []
    indptr = [0]
    for vec in vectors:
        for j in sorted(vec):
            indices.append(j)
            data.append(vec[j])
        indptr.append(len(indices))
    return csr_matrix(
        (np.array(data), np.array(indices, dtype=np.int64), np.array(indptr, dtype=np.int64)),
        shape=(len(vectors), width),
    )


def _fit_vocabulary(token_lists: list[list[str]]) -> NgramVocabulary:
    index: dict[str, int] = {}
    for tokens in token_lists:
        for gram in iter_ngrams(tokens):
            if gram not in index:
                index[gram] = len(index)
    size = len(index)
    feature_max = np.zeros(size)
    feature_min = np.zeros(size)
    doc_freq = np.zeros(size, dtype=np.int64)
    per_doc_min = np.full(size, np.inf)
    for tokens in token_lists:
        counts: dict[int, float] = {}
        for gram in iter_ngrams(tokens):
            j = index[gram]
            counts[j] = counts.get(j, 0.0) + 1.0
        for j, value in counts.items():
            doc_freq[j] += 1
            if value > feature_max[j]:
                feature_max[j] = value
            if value < per_doc_min[j]:
                per_doc_min[j] = value
    # A feature missing from any document has an implicit zero there, so its
    # training minimum is zero.
    in_every_doc = doc_freq == len(token_lists)
    feature_min[in_every_doc] = per_doc_min[in_every_doc]
    return NgramVocabulary(index=index, feature_min=feature_min, feature_max=feature_max)


def train_baseline(train: list[LabeledPost], config: BaselineConfig) -> BaselineModel:
    """Fit the class-weighted L2 hinge-loss linear model on scaled n-gram
    counts. Deterministic for a fixed seed."""
    labels = {item.label for item in train}
    if labels != {Label.AGE, Label.NO_AGE}:
        raise TrainingError("training data must contain both classes")
    token_lists = [normalize_for_ngram_classifier(item.post.text) for item in train]
    vocab = _fit_vocabulary(token_lists)
    vectors = [scale(featurize(tokens, vocab), vocab) for tokens in token_lists]
    matrix = _to_csr(vectors, len(vocab))
    y = np.array([1 if item.label is Label.AGE else 0 for item in train])
    clf = LinearSVC(
        C=config.c,
        loss="hinge",
        class_weight={0: config.weight_no_age, 1: config.weight_age},
        random_state=config.seed,
        max_iter=50_000,
        tol=1e-5,
    )
    clf.fit(matrix, y)
    return BaselineModel(
        vocabulary=vocab,
        weights=np.asarray(clf.coef_[0], dtype=np.float64).copy(),
        bias=float(clf.intercept_[0]),
        config=config,
    )


def score_text(model: BaselineModel, text: str) -> float:
    vector = scale(featurize(normalize_for_ngram_classifier(text), model.vocabulary),
                   model.vocabulary)
    total = model.bias
    weights = model.weights
    for j, value in vector.items():
        total += weights[j] * value
    return float(total)


def predict(model: BaselineModel, post: Post) -> Prediction:
    """Signed margin; positive scores read as the Age class (threshold 0)."""
    score = score_text(model, post.text)
    label = Label.AGE if score > 0 else Label.NO_AGE
    return Prediction(post_id=post.id, label=label, score=score)


def save_model(model: BaselineModel, path: Union[str, Path]) -> None:
    payload = {
        "magic": MODEL_MAGIC,
        "schema_version": MODEL_SCHEMA_VERSION,
        "ngram_range": [NGRAM_MIN, NGRAM_MAX],
        "vocabulary": model.vocabulary.index,
        "feature_min": [float(v) for v in model.vocabulary.feature_min],
        "feature_max": [float(v) for v in model.vocabulary.feature_max],
        "weights": [float(v) for v in model.weights],
        "bias": model.bias,
        "config": {
            "seed": model.config.seed,
            "c": model.config.c,
            "weight_no_age": model.config.weight_no_age,
            "weight_age": model.config.weight_age,
        },
    }
    Path(path).write_text(json.dumps(payload), encoding="utf-8")


def load_model(path: Union[str, Path]) -> BaselineModel:
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise TrainingError(f"cannot read model file {path}: {exc}") from exc
    if not isinstance(payload, dict) or payload.get("magic") != MODEL_MAGIC:
        raise TrainingError(f"{path} is not a model file")
    if payload.get("schema_version") != MODEL_SCHEMA_VERSION:
        raise TrainingError(
            f"unsupported model schema version: {payload.get('schema_version')}"
        )
    vocab = NgramVocabulary(
        index={str(k): int(v) for k, v in payload["vocabulary"].items()},
        feature_min=np.array(payload["feature_min"], dtype=np.float64),
        feature_max=np.array(payload["feature_max"], dtype=np.float64),
    )
    config = BaselineConfig(
        seed=int(payload["config"]["seed"]),
        c=float(payload["config"]["c"]),
        weight_no_age=float(payload["config"]["weight_no_age"]),
        weight_age=float(payload["config"]["weight_age"]),
    )
    weights = np.array(payload["weights"], dtype=np.float64)
    if len(weights) != len(vocab):
        raise TrainingError("weight dimension does not match vocabulary size")
    return BaselineModel(vocabulary=vocab, weights=weights,
                         bias=float(payload["bias"]), config=config)


def kfold_indices(
    n_items: int, n_folds: int = 10, seed: int = 0
) -> list[tuple[list[int], list[int]]]:
    """Shuffled k-fold split; the test folds partition range(n_items)."""
    if n_folds < 2:
        raise TrainingError("n_folds must be at least 2")
    if n_items < n_folds:
        raise TrainingError(f"cannot split {n_items} items into {n_folds} folds")
    order = list(range(n_items))
    random.Random(seed).shuffle(order)
    base, extra = divmod(n_items, n_folds)
    folds = []
    start = 0
    for i in range(n_folds):
        size = base + (1 if i < extra else 0)
        folds.append(order[start:start + size])
        start += size
    out = []
    for i in range(n_folds):
        test = sorted(folds[i])
        train = sorted(x for j, fold in enumerate(folds) if j != i for x in fold)
        out.append((train, test))
    return out
