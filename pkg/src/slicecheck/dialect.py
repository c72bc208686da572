"""Message-level demographic dialect proportions.

Inference only: the word-probability table comes from an externally
trained model (e.g. a TwitterAAE-style count table).  Each in-vocabulary
token gets a posterior over topics, ``p(topic | word) ∝ p(word | topic) *
prior(topic)``, and a message's score is the mean of its token
posteriors.  Topic 0 is the dialect scored by the ``aave`` analysis.

Model file format (tab separated, UTF-8)::

    word    aa      hispanic    other   white      <- optional header
    lol     0.004   0.002       0.001   0.001

Values may be probabilities or raw counts; with ``normalize="auto"`` a
table containing any value above 1 is treated as counts and each topic
column is rescaled to sum to 1.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Iterable, Mapping, Sequence
from dataclasses import dataclass
from pathlib import Path

from .errors import FormatError, SliceCheckError

DEFAULT_TOPICS = ("aa", "hispanic", "other", "white")


class DialectValueError(SliceCheckError, ValueError):
    pass


@dataclass(frozen=True)
class DialectModel:
    topics: tuple[str, ...]
    vocab: Mapping[str, tuple[float, ...]]
    priors: tuple[float, ...]

    def __post_init__(self) -> None:
        k = len(self.topics)
        if k == 0:
            raise DialectValueError("a dialect model needs at least one topic")
        if len(self.priors) != k:
            raise DialectValueError(f"expected {k} priors, got {len(self.priors)}")
        if any(p < 0 for p in self.priors) or abs(math.fsum(self.priors) - 1.0) > 1e-9:
            raise DialectValueError("priors must be non-negative and sum to 1")
        for word, vec in self.vocab.items():
            if len(vec) != k:
                raise DialectValueError(f"vector for {word!r} has {len(vec)} entries, expected {k}")
            if any(v < 0 or math.isnan(v) for v in vec):
                raise DialectValueError(f"negative or NaN likelihood for {word!r}")

    @property
    def k(self) -> int:
        return len(self.topics)

    def likelihood(self, token: str) -> tuple[float, ...] | None:
        vec = self.vocab.get(token)
        if vec is None:
            vec = self.vocab.get(token.lower())
        return vec


@dataclass(frozen=True)
class DialectScore:
    proportions: tuple[float, ...]
    uninformative: bool
    n_informative: int = 0

    def __getitem__(self, i: int) -> float:
        return self.proportions[i]


def uniform_priors(k: int) -> tuple[float, ...]:
    return tuple([1.0 / k] * k)


def _is_number(s: str) -> bool:
    try:
        float(s)
    except ValueError:
        return False
    return True


def load_dialect_model(
    path: str | Path,
    priors: Sequence[float] | None = None,
    normalize: bool | str = "auto",
) -> DialectModel:
    """Read a tab-separated word/likelihood table."""
    topics: tuple[str, ...] | None = None
    rows: dict[str, list[float]] = {}
    k: int | None = None
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\r\n")
            if not line.strip() or line.startswith("#"):
                continue
            fields = line.split("\t")
            if topics is None and k is None and not all(_is_number(f) for f in fields[1:]):
                topics = tuple(fields[1:])
                k = len(topics)
                continue
            if k is None:
                k = len(fields) - 1
            if len(fields) - 1 != k:
                raise FormatError(f"expected {k} value columns, found {len(fields) - 1}", line=lineno)
            try:
                values = [float(f) for f in fields[1:]]
            except ValueError:
                raise FormatError("non-numeric value", line=lineno) from None
            if any(v < 0 or math.isnan(v) for v in values):
                raise DialectValueError(f"line {lineno}: negative or NaN value")
            rows[fields[0]] = values
    if not k:
        raise FormatError("model file has no value columns", line=1)
    if topics is None:
        topics = DEFAULT_TOPICS if k == len(DEFAULT_TOPICS) else tuple(f"topic{i}" for i in range(k))

    if normalize == "auto":
        normalize = any(v > 1.0 for vec in rows.values() for v in vec)
    if normalize:
        totals = [math.fsum(vec[t] for vec in rows.values()) for t in range(k)]
        rows = {
            w: [v / totals[t] if totals[t] > 0 else 0.0 for t, v in enumerate(vec)]
            for w, vec in rows.items()
        }

    return DialectModel(
        topics=topics,
        vocab={w: tuple(vec) for w, vec in rows.items()},
        priors=tuple(priors) if priors is not None else uniform_priors(k),
    )


def token_posterior(likelihood: Sequence[float], priors: Sequence[float]) -> tuple[float, ...] | None:
    """Normalized ``likelihood * prior``; ``None`` when the token carries no mass."""
    joint = [l * p for l, p in zip(likelihood, priors)]
    z = math.fsum(joint)
    if z <= 0:
        return None
    return tuple(j / z for j in joint)


def mean_posterior(posteriors: Sequence[Sequence[float]], k: int) -> tuple[float, ...]:
    n = len(posteriors)
    return tuple(math.fsum(p[t] for p in posteriors) / n for t in range(k))


# Pluggable rule: token posteriors -> message proportions.
InferenceRule = Callable[[Sequence[Sequence[float]], int], tuple[float, ...]]


def score_message(
    tokens: Iterable[str],
    model: DialectModel,
    rule: InferenceRule = mean_posterior,
) -> DialectScore:
    """Topic proportions for a tokenized message.

    Out-of-vocabulary tokens are skipped.  With no informative token the
    priors are returned and the score is flagged ``uninformative``.
    """
    posteriors = []
    for tok in tokens:
        lik = model.likelihood(tok)
        if lik is None:
            continue
        post = token_posterior(lik, model.priors)
        if post is not None:
            posteriors.append(post)
    if not posteriors:
        return DialectScore(tuple(model.priors), uninformative=True)
    return DialectScore(rule(posteriors, model.k), uninformative=False, n_informative=len(posteriors))
