"""Concept-membership data: ratings, membership rows, and the bundled dataset.

Participants rate an exemplar on a 7-point scale ``-3..+3``.  A rating earns
credit 1 if positive, 0.5 if neutral and 0 if negative; the membership weight
is the mean credit over participants.  Membership rows collect the weights of
one exemplar with respect to the concepts A, B, not-B, "A and B" and
"A and not B".
"""

from __future__ import annotations

import csv
import io
import math
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from typing import NamedTuple, TextIO

import numpy as np

from .errors import (
    EmptyInput,
    InputError,
    InvalidRating,
    MalformedLine,
    MissingCombination,
    OutOfRangeValue,
    UnknownLabel,
)

ADMISSIBLE_RATINGS = frozenset(range(-3, 4))

RATINGS_HEADER = ("participant_id", "pair_id", "exemplar", "concept_label", "rating")
WEIGHTS_HEADER = ("pair_id", "exemplar", "mu_A", "mu_B", "mu_notB", "mu_AandB", "mu_AandNotB")
FITTED_HEADER = ("pair_id", "exemplar", "kind", "theta_deg", "m2", "n2",
                 "a1", "a2", "a3", "b1", "b2", "b3")

# Tolerance on m2 + n2 = 1 for a stored fitted row to count as well-formed.
FITTED_SUM_TOL = 0.01


class Label(str, Enum):
    """The five concepts an exemplar is rated against."""

    A = "A"
    B = "B"
    NOT_B = "NotB"
    A_AND_B = "AandB"
    A_AND_NOT_B = "AandNotB"


class Kind(str, Enum):
    """Which combination experiment a fitted row or report row belongs to."""

    CONJUNCTION = "conjunction"
    NEGATION = "negation"


def format_real(value: float | None) -> str:
    """Format a real with at least five decimals; ``None`` becomes ``""``.

    Ten decimals are kept and trailing zeros trimmed down to five, so weights
    that are multiples of 1/160 print exactly and float noise is hidden.
    """
    if value is None:
        return ""
    if not math.isfinite(value):
        return str(value)
    head, _, frac = f"{value:.10f}".partition(".")
    frac = frac.rstrip("0").ljust(5, "0")
    text = f"{head}.{frac}"
    if text.startswith("-") and float(text) == 0.0:
        text = text[1:]
    return text


# ---------------------------------------------------------------------------
# Ratings
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Rating:
    participant_id: str
    pair_id: str
    exemplar: str
    concept_label: Label
    value: int

    def __post_init__(self):
        if not isinstance(self.concept_label, Label):
            try:
                object.__setattr__(self, "concept_label", Label(self.concept_label))
            except ValueError:
                raise UnknownLabel(str(self.concept_label)) from None
        _check_rating(self.value)


def _check_rating(value) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        raise InvalidRating(value)
    if int(value) not in ADMISSIBLE_RATINGS:
        raise InvalidRating(value)
    return int(value)


def credit(value: int) -> float:
    """Credit of one rating: 1 if positive, 0.5 if zero, 0 if negative."""
    value = _check_rating(value)
    if value > 0:
        return 1.0
    if value == 0:
        return 0.5
    return 0.0


def ratings_to_weight(ratings: Iterable[Rating | int]) -> float:
    """Membership weight of a group of ratings (mean credit).

    Accepts bare integers or :class:`Rating` objects.

    >>> ratings_to_weight([3, 1, -2])
    0.6666666666666666
    """
    values = [r.value if isinstance(r, Rating) else r for r in ratings]
    if not values:
        raise EmptyInput("no ratings to aggregate")
    # Sum doubled credits as integers so the mean is correctly rounded.
    doubled = 0
    for v in values:
        v = _check_rating(v)
        doubled += 2 if v > 0 else (1 if v == 0 else 0)
    return doubled / (2 * len(values))


def parse_ratings(stream: TextIO) -> list[Rating]:
    """Parse the ratings CSV format; one :class:`Rating` per data line."""
    reader = csv.reader(stream)
    try:
        header = next(reader)
    except StopIteration:
        raise MalformedLine(1, "missing header") from None
    if tuple(h.strip() for h in header) != RATINGS_HEADER:
        raise MalformedLine(1, f"expected header {','.join(RATINGS_HEADER)}")
    ratings = []
    labels = {lab.value: lab for lab in Label}
    for fields in reader:
        line_no = reader.line_num
        if not fields or all(not f.strip() for f in fields):
            continue
        if len(fields) != len(RATINGS_HEADER):
            raise MalformedLine(line_no, f"expected {len(RATINGS_HEADER)} fields, got {len(fields)}")
        participant, pair_id, exemplar, label, raw = (f.strip() for f in fields)
        if label not in labels:
            raise UnknownLabel(label, line_no)
        try:
            value = int(raw)
        except ValueError:
            raise MalformedLine(line_no, f"rating {raw!r} is not an integer") from None
        if value not in ADMISSIBLE_RATINGS:
            raise OutOfRangeValue(value, line_no)
        ratings.append(Rating(participant, pair_id, exemplar, labels[label], value))
    return ratings


def write_ratings(ratings: Iterable[Rating], stream: TextIO) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(RATINGS_HEADER)
    for r in ratings:
        writer.writerow((r.participant_id, r.pair_id, r.exemplar, r.concept_label.value, r.value))


# ---------------------------------------------------------------------------
# Membership rows and datasets
# ---------------------------------------------------------------------------


def _check_weight(name: str, value: float | None) -> float | None:
    if value is None:
        return None
    value = float(value)
    if not (0.0 <= value <= 1.0):
        raise InputError(f"{name}={value!r} outside [0, 1]")
    return value


@dataclass(frozen=True, slots=True)
class MembershipRow:
    pair_id: str
    exemplar: str
    mu_a: float
    mu_b: float
    mu_not_b: float | None = None
    mu_a_and_b: float | None = None
    mu_a_and_not_b: float | None = None

    def __post_init__(self):
        for name in ("mu_a", "mu_b", "mu_not_b", "mu_a_and_b", "mu_a_and_not_b"):
            object.__setattr__(self, name, _check_weight(name, getattr(self, name)))
        if self.mu_a is None or self.mu_b is None:
            raise MissingCombination(f"{self.pair_id}/{self.exemplar}: weights for A and B are required")
        if self.mu_a_and_b is None and self.mu_a_and_not_b is None:
            raise MissingCombination(
                f"{self.pair_id}/{self.exemplar}: neither 'A and B' nor 'A and not B' present"
            )
        if self.mu_a_and_not_b is not None and self.mu_not_b is None:
            raise MissingCombination(
                f"{self.pair_id}/{self.exemplar}: 'A and not B' present without 'not B'"
            )

    @property
    def key(self) -> tuple[str, str]:
        return (self.pair_id, self.exemplar)

    @property
    def has_conjunction(self) -> bool:
        return self.mu_a_and_b is not None

    @property
    def has_negation(self) -> bool:
        return self.mu_a_and_not_b is not None

    def weights_for(self, kind: Kind) -> tuple[float, float, float]:
        """``(mu_A, mu_second, mu_combined)`` for the given experiment kind."""
        kind = Kind(kind)
        if kind is Kind.CONJUNCTION:
            if self.mu_a_and_b is None:
                raise MissingCombination(f"{self.pair_id}/{self.exemplar}: no 'A and B' weight")
            return self.mu_a, self.mu_b, self.mu_a_and_b
        if self.mu_a_and_not_b is None:
            raise MissingCombination(f"{self.pair_id}/{self.exemplar}: no 'A and not B' weight")
        return self.mu_a, self.mu_not_b, self.mu_a_and_not_b

    def kinds(self) -> list[Kind]:
        out = []
        if self.has_conjunction:
            out.append(Kind.CONJUNCTION)
        if self.has_negation:
            out.append(Kind.NEGATION)
        return out

    def present_weights(self) -> dict[Label, float]:
        values = {
            Label.A: self.mu_a,
            Label.B: self.mu_b,
            Label.NOT_B: self.mu_not_b,
            Label.A_AND_B: self.mu_a_and_b,
            Label.A_AND_NOT_B: self.mu_a_and_not_b,
        }
        return {lab: v for lab, v in values.items() if v is not None}


@dataclass(frozen=True, slots=True)
class Pair:
    pair_id: str
    concept_a: str = ""
    concept_b: str = ""


@dataclass(frozen=True)
class Dataset:
    pairs: tuple[Pair, ...]
    rows: tuple[MembershipRow, ...]
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple(self.pairs))
        object.__setattr__(self, "rows", tuple(self.rows))
        index = {}
        for i, row in enumerate(self.rows):
            if row.key in index:
                raise InputError(f"duplicate row {row.pair_id}/{row.exemplar}")
            index[row.key] = i
        object.__setattr__(self, "_index", index)
        known = {p.pair_id for p in self.pairs}
        missing = [r.pair_id for r in self.rows if r.pair_id not in known]
        if missing:
            extra = tuple(Pair(pid) for pid in dict.fromkeys(missing))
            object.__setattr__(self, "pairs", self.pairs + extra)

    def __len__(self) -> int:
        return len(self.rows)

    def __iter__(self) -> Iterator[MembershipRow]:
        return iter(self.rows)

    def row(self, pair_id: str, exemplar: str) -> MembershipRow:
        return self.rows[self._index[(pair_id, exemplar)]]

    def __contains__(self, key) -> bool:
        return key in self._index

    def rows_for_pair(self, pair_id: str) -> list[MembershipRow]:
        return [r for r in self.rows if r.pair_id == pair_id]

    def pair(self, pair_id: str) -> Pair:
        for p in self.pairs:
            if p.pair_id == pair_id:
                return p
        raise KeyError(pair_id)


def aggregate(ratings: Iterable[Rating]) -> Dataset:
    """Group ratings by (pair, exemplar, label) and build membership rows.

    Rows appear in order of first appearance of their (pair, exemplar) key.
    """
    groups: dict[tuple[str, str], dict[Label, list[int]]] = {}
    for r in ratings:
        groups.setdefault((r.pair_id, r.exemplar), {}).setdefault(r.concept_label, []).append(r.value)
    if not groups:
        raise EmptyInput("no ratings to aggregate")
    rows = []
    for (pair_id, exemplar), by_label in groups.items():
        weights = {lab: ratings_to_weight(vals) for lab, vals in by_label.items()}
        for required in (Label.A, Label.B):
            if required not in weights:
                raise MissingCombination(f"{pair_id}/{exemplar}: no ratings for concept {required.value}")
        rows.append(MembershipRow(
            pair_id, exemplar,
            mu_a=weights[Label.A],
            mu_b=weights[Label.B],
            mu_not_b=weights.get(Label.NOT_B),
            mu_a_and_b=weights.get(Label.A_AND_B),
            mu_a_and_not_b=weights.get(Label.A_AND_NOT_B),
        ))
    pairs = tuple(Pair(pid) for pid in dict.fromkeys(r.pair_id for r in rows))
    return Dataset(pairs, rows)


def simulate_ratings(row: MembershipRow, participants_per_concept: int,
                     seed: int | Sequence[int] = 0) -> list[Rating]:
    """Draw synthetic ratings whose expected weight equals each weight of ``row``.

    Each participant gives +3 with probability mu and -3 otherwise.  Labels
    are emitted in the order A, B, NotB, AandB, AandNotB.
    """
    n = int(participants_per_concept)
    if n < 1:
        raise ValueError("participants_per_concept must be >= 1")
    rng = np.random.default_rng(seed)
    width = len(str(n))
    ids = [f"s{i:0{width}d}" for i in range(1, n + 1)]
    out = []
    for label, mu in row.present_weights().items():
        positive = rng.random(n) < mu
        for pid, pos in zip(ids, positive.tolist()):
            out.append(Rating(pid, row.pair_id, row.exemplar, label, 3 if pos else -3))
    return out


# ---------------------------------------------------------------------------
# Weights CSV
# ---------------------------------------------------------------------------


def _dict_rows(stream: TextIO, header: Sequence[str]) -> Iterator[tuple[int, dict[str, str]]]:
    reader = csv.DictReader(stream)
    if reader.fieldnames is None:
        raise MalformedLine(1, "missing header")
    names = [h.strip() for h in reader.fieldnames]
    missing = [h for h in header if h not in names]
    if missing:
        raise MalformedLine(1, f"header lacks column(s) {', '.join(missing)}")
    reader.fieldnames = names
    for rec in reader:
        if None in rec or any(v is None for v in rec.values()):
            raise MalformedLine(reader.line_num, "wrong number of fields")
        if all(not (v or "").strip() for v in rec.values()):
            continue
        yield reader.line_num, {k: v.strip() for k, v in rec.items()}


def _parse_opt_real(text: str, line_no: int, column: str) -> float | None:
    if text == "":
        return None
    try:
        value = float(text)
    except ValueError:
        raise MalformedLine(line_no, f"{column}={text!r} is not a number") from None
    if not math.isfinite(value):
        raise MalformedLine(line_no, f"{column}={text!r} is not finite")
    return value


def read_weights(stream: TextIO, pairs: Sequence[Pair] = ()) -> Dataset:
    """Read a weights CSV into a :class:`Dataset` (input order preserved)."""
    rows = []
    seen = set()
    for line_no, rec in _dict_rows(stream, WEIGHTS_HEADER):
        vals = {c: _parse_opt_real(rec[c], line_no, c) for c in WEIGHTS_HEADER[2:]}
        key = (rec["pair_id"], rec["exemplar"])
        if key in seen:
            raise MalformedLine(line_no, f"duplicate row {key[0]}/{key[1]}")
        seen.add(key)
        if vals["mu_A"] is None or vals["mu_B"] is None:
            raise MalformedLine(line_no, "mu_A and mu_B are required")
        try:
            rows.append(MembershipRow(
                rec["pair_id"], rec["exemplar"],
                mu_a=vals["mu_A"], mu_b=vals["mu_B"], mu_not_b=vals["mu_notB"],
                mu_a_and_b=vals["mu_AandB"], mu_a_and_not_b=vals["mu_AandNotB"],
            ))
        except InputError as exc:
            raise MalformedLine(line_no, str(exc)) from None
    return Dataset(tuple(pairs), rows)


def write_weights(dataset: Dataset | Iterable[MembershipRow], stream: TextIO) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(WEIGHTS_HEADER)
    for r in dataset:
        writer.writerow((
            r.pair_id, r.exemplar,
            *(format_real(v) for v in (r.mu_a, r.mu_b, r.mu_not_b, r.mu_a_and_b, r.mu_a_and_not_b)),
        ))


def weights_to_string(dataset: Dataset | Iterable[MembershipRow]) -> str:
    buf = io.StringIO()
    write_weights(dataset, buf)
    return buf.getvalue()


# ---------------------------------------------------------------------------
# Fitted-parameters CSV
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class FittedRow:
    """One row of published fitted parameters, stored verbatim.

    ``vec_b`` holds the components of |B> with its global phase stripped.
    """

    pair_id: str
    exemplar: str
    kind: Kind
    theta_deg: float
    m2: float
    n2: float
    vec_a: tuple[float, float, float]
    vec_b: tuple[float, float, float]

    @property
    def key(self) -> tuple[str, str, Kind]:
        return (self.pair_id, self.exemplar, self.kind)

    @property
    def in_range(self) -> bool:
        """True when (m2, n2) is an admissible sector weighting."""
        return (0.0 <= self.m2 <= 1.0 and 0.0 <= self.n2 <= 1.0
                and abs(self.m2 + self.n2 - 1.0) <= FITTED_SUM_TOL)


def read_fitted(stream: TextIO) -> list[FittedRow]:
    out = []
    kinds = {k.value: k for k in Kind}
    for line_no, rec in _dict_rows(stream, FITTED_HEADER):
        if rec["kind"] not in kinds:
            raise MalformedLine(line_no, f"unknown kind {rec['kind']!r}")
        nums = {}
        for c in FITTED_HEADER[3:]:
            v = _parse_opt_real(rec[c], line_no, c)
            if v is None:
                raise MalformedLine(line_no, f"{c} is required")
            nums[c] = v
        out.append(FittedRow(
            rec["pair_id"], rec["exemplar"], kinds[rec["kind"]],
            theta_deg=nums["theta_deg"], m2=nums["m2"], n2=nums["n2"],
            vec_a=(nums["a1"], nums["a2"], nums["a3"]),
            vec_b=(nums["b1"], nums["b2"], nums["b3"]),
        ))
    return out


def write_fitted(rows: Iterable[FittedRow], stream: TextIO) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(FITTED_HEADER)
    for r in rows:
        writer.writerow((r.pair_id, r.exemplar, r.kind.value,
                         *(format_real(v) for v in (r.theta_deg, r.m2, r.n2, *r.vec_a, *r.vec_b))))


# ---------------------------------------------------------------------------
# Bundled dataset
# ---------------------------------------------------------------------------


class PublishedDiagnostics(NamedTuple):
    pair_id: str
    exemplar: str
    kind: Kind
    delta: float
    k: float
    doub: float
    l: float | None  # noqa: E741 - the symbol used for the negation identity


def _open_bundled(name: str) -> TextIO:
    return resources.files(__package__).joinpath("tables").joinpath(name).open("r", encoding="utf-8", newline="")


def load_bundled_pairs() -> tuple[Pair, ...]:
    with _open_bundled("pairs.csv") as fh:
        return tuple(Pair(r["pair_id"], r["concept_a"], r["concept_b"]) for r in csv.DictReader(fh))


def load_bundled_dataset() -> Dataset:
    """The 4 x 24 exemplar weights of the combination experiments."""
    with _open_bundled("weights.csv") as fh:
        return read_weights(fh, load_bundled_pairs())


def load_bundled_fitted() -> list[FittedRow]:
    """Published (theta, m2, n2) and vector components, one row per exemplar and kind."""
    with _open_bundled("fitted.csv") as fh:
        return read_fitted(fh)


def load_published_diagnostics() -> list[PublishedDiagnostics]:
    """Published Delta, k, Doub (and l) values, for regression tests."""
    out = []
    with _open_bundled("published_diagnostics.csv") as fh:
        for rec in csv.DictReader(fh):
            out.append(PublishedDiagnostics(
                rec["pair_id"], rec["exemplar"], Kind(rec["kind"]),
                float(rec["delta"]), float(rec["k"]), float(rec["doub"]),
                float(rec["l"]) if rec["l"] else None,
            ))
    return out


def bundled_path(name: str):
    """Filesystem path of a bundled data file (for CLI defaults)."""
    return resources.files(__package__).joinpath("tables").joinpath(name)
