"""Trial and tally data model: parsing, tallying, merging, validation.

A trial is two setting bits and two +/-1 outcomes. Trials aggregate into a
tally of eight counts: trials per setting pair (a, b, c, d for settings
00, 01, 10, 11) and correlated results per setting pair (n00..n11), where
a trial is *correlated* when the product of its outcomes is +1.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, Iterator, Literal

from .errors import DomainError, EmptyCellError, InvariantError, ParseError

TrialFormat = Literal["jsonl", "csv"]

# Counts are 64-bit-capacity nonnegative integers; exceeding this is an
# error, never wraparound.
COUNT_MAX = 2**64 - 1

CELL_LABELS = ("a", "b", "c", "d")
CORR_LABELS = ("n00", "n01", "n10", "n11")

_TRIAL_FIELDS = ("s1", "s2", "o1", "o2")


def _check_count(label: str, value: object) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise DomainError(f"{label} must be an integer, got {value!r}")
    if value < 0:
        raise DomainError(f"{label} must be nonnegative, got {value}")
    if value > COUNT_MAX:
        raise OverflowError(f"{label} exceeds 64-bit count capacity: {value}")
    return value


@dataclass(frozen=True)
class TrialRecord:
    """One experimental trial: setting bits s1, s2 and outcomes o1, o2."""

    s1: int
    s2: int
    o1: int
    o2: int

    def __post_init__(self):
        for name in ("s1", "s2"):
            v = getattr(self, name)
            if isinstance(v, bool) or v not in (0, 1):
                raise DomainError(f"{name} must be 0 or 1, got {v!r}")
        for name in ("o1", "o2"):
            v = getattr(self, name)
            if isinstance(v, bool) or v not in (-1, 1):
                raise DomainError(f"{name} must be +1 or -1, got {v!r}")

    @property
    def setting_index(self) -> int:
        """Setting pair as 0..3 (00, 01, 10, 11)."""
        return 2 * self.s1 + self.s2

    @property
    def correlated(self) -> bool:
        """True when the outcome product is +1 (outcomes equal)."""
        return self.o1 * self.o2 == 1


@dataclass(frozen=True)
class TallyTable:
    """The eight aggregate counts of a CHSH experiment.

    a, b, c, d count trials under settings 00, 01, 10, 11; n00..n11 count
    the correlated results under the same settings. Construction checks
    each field's own domain (nonnegative, 64-bit capacity); cross-field
    invariants such as n00 <= a are checked by validate_tally so that
    externally supplied tallies can be represented and then diagnosed.
    """

    a: int = 0
    b: int = 0
    c: int = 0
    d: int = 0
    n00: int = 0
    n01: int = 0
    n10: int = 0
    n11: int = 0

    def __post_init__(self):
        for label in CELL_LABELS + CORR_LABELS:
            _check_count(label, getattr(self, label))

    @property
    def total_trials(self) -> int:
        """N = a + b + c + d."""
        return self.a + self.b + self.c + self.d

    @property
    def setting_counts(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    @property
    def corr_counts(self) -> tuple[int, int, int, int]:
        return (self.n00, self.n01, self.n10, self.n11)

    @property
    def anti_corr_counts(self) -> tuple[int, int, int, int]:
        """Anti-correlated results per setting: count minus correlated."""
        return tuple(m - n for m, n in zip(self.setting_counts, self.corr_counts))

    def to_dict(self) -> dict[str, int]:
        return {label: getattr(self, label) for label in CELL_LABELS + CORR_LABELS}

    @classmethod
    def from_dict(cls, data: dict) -> "TallyTable":
        missing = [k for k in CELL_LABELS + CORR_LABELS if k not in data]
        if missing:
            raise ParseError(f"tally object missing fields: {', '.join(missing)}")
        return cls(**{k: data[k] for k in CELL_LABELS + CORR_LABELS})


@dataclass(frozen=True)
class ThreeSettingTally:
    """Counts for the three setting pairs of the 1964 two-outcome test.

    N_xy is the number of trials under setting pair xy and n_xy the number
    of correlated results among them.
    """

    n_ac: int
    n_ba: int
    n_bc: int
    N_ac: int
    N_ba: int
    N_bc: int

    def __post_init__(self):
        for name in ("n_ac", "n_ba", "n_bc", "N_ac", "N_ba", "N_bc"):
            _check_count(name, getattr(self, name))
        for pair in ("ac", "ba", "bc"):
            n = getattr(self, f"n_{pair}")
            total = getattr(self, f"N_{pair}")
            if n > total:
                raise InvariantError(f"n_{pair}={n} exceeds N_{pair}={total}")


@dataclass(frozen=True)
class TallyValidation:
    """Structured result of validate_tally: hard errors plus empty-cell warnings."""

    ok: bool
    errors: tuple[str, ...]
    empty_cells: tuple[str, ...]


def validate_tally(t: TallyTable) -> TallyValidation:
    """Check cross-field invariants and flag empty setting cells.

    Never raises: invalid tallies come back with ok=False and one message
    per violated bound. Empty cells are warnings, not errors, because a
    tally with an empty cell is internally consistent even though its
    correlation coefficient is undefined there.
    """
    errors = []
    for cell, corr in zip(CELL_LABELS, CORR_LABELS):
        count = getattr(t, cell)
        n = getattr(t, corr)
        if n > count:
            errors.append(f"{corr}={n} exceeds {cell}={count}")
    empty = tuple(cell for cell in CELL_LABELS if getattr(t, cell) == 0)
    return TallyValidation(ok=not errors, errors=tuple(errors), empty_cells=empty)


def require_valid_nonempty(t: TallyTable) -> None:
    """Raise unless every invariant holds and every setting cell is populated."""
    result = validate_tally(t)
    if not result.ok:
        raise InvariantError("; ".join(result.errors))
    if result.empty_cells:
        raise EmptyCellError(result.empty_cells[0])


def parse_trial_line(
    line: str, format: TrialFormat = "jsonl", line_number: int | None = None
) -> TrialRecord:
    """Parse one trial record from a line of text.

    JSONL lines are objects with integer fields s1, s2, o1, o2; CSV lines
    are `s1,s2,o1,o2`. Malformed syntax and out-of-domain values raise
    ParseError, tagged with line_number when given.
    """
    if format == "jsonl":
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", line_number) from exc
        if not isinstance(obj, dict):
            raise ParseError("expected a JSON object", line_number)
        values = []
        for field in _TRIAL_FIELDS:
            if field not in obj:
                raise ParseError(f"missing field '{field}'", line_number)
            v = obj[field]
            if isinstance(v, bool) or not isinstance(v, int):
                raise ParseError(f"field '{field}' must be an integer, got {v!r}", line_number)
            values.append(v)
    elif format == "csv":
        parts = line.strip().split(",")
        if len(parts) != 4:
            raise ParseError(f"expected 4 comma-separated fields, got {len(parts)}", line_number)
        values = []
        for field, part in zip(_TRIAL_FIELDS, parts):
            try:
                values.append(int(part.strip()))
            except ValueError:
                raise ParseError(f"field '{field}' is not an integer: {part!r}", line_number) from None
    else:
        raise DomainError(f"unknown trial format: {format!r}")

    try:
        return TrialRecord(*values)
    except DomainError as exc:
        raise ParseError(str(exc), line_number) from exc


def serialize_trial_line(record: TrialRecord, format: TrialFormat = "jsonl") -> str:
    """Render one trial record as a line (no trailing newline)."""
    if format == "jsonl":
        return json.dumps(
            {f: getattr(record, f) for f in _TRIAL_FIELDS}, separators=(",", ":")
        )
    if format == "csv":
        return f"{record.s1},{record.s2},{record.o1},{record.o2}"
    raise DomainError(f"unknown trial format: {format!r}")


def read_trials(
    source: str | Path | IO[str] | Iterable[str],
    format: TrialFormat = "jsonl",
    header: bool = False,
) -> Iterator[TrialRecord]:
    """Stream trial records from a path, file object, or iterable of lines.

    Blank lines are skipped. With header=True the first line is skipped
    (headerless CSV is the default contract). Parse failures carry the
    1-based line number.
    """
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as handle:
            yield from read_trials(handle, format=format, header=header)
        return
    for lineno, line in enumerate(source, start=1):
        if header and lineno == 1:
            continue
        if not line.strip():
            continue
        yield parse_trial_line(line, format=format, line_number=lineno)


def tally_from_trials(trials: Iterable[TrialRecord]) -> TallyTable:
    """Aggregate trials into the eight counts.

    Each trial increments exactly one setting count and, when its outcome
    product is +1, the matching correlated count.
    """
    counts = [0, 0, 0, 0]
    corr = [0, 0, 0, 0]
    for rec in trials:
        key = rec.setting_index
        counts[key] += 1
        if rec.correlated:
            corr[key] += 1
    return TallyTable(
        a=counts[0], b=counts[1], c=counts[2], d=counts[3],
        n00=corr[0], n01=corr[1], n10=corr[2], n11=corr[3],
    )


def merge_tallies(t1: TallyTable, t2: TallyTable) -> TallyTable:
    """Componentwise sum of two tallies (associative and commutative)."""
    merged = {}
    for label in CELL_LABELS + CORR_LABELS:
        total = getattr(t1, label) + getattr(t2, label)
        if total > COUNT_MAX:
            raise OverflowError(f"merged count {label} exceeds 64-bit capacity")
        merged[label] = total
    return TallyTable(**merged)


def write_tally(path: str | Path, t: TallyTable, seed: int | None = None) -> None:
    """Write a tally as a JSON object; byte-identical for identical inputs.

    The object holds the eight count fields; when a simulation seed is
    given it is recorded under the extra key "seed" for provenance.
    """
    payload: dict = t.to_dict()
    if seed is not None:
        payload["seed"] = seed
    Path(path).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")


def load_tally(path: str | Path) -> tuple[TallyTable, dict]:
    """Load a tally JSON file; returns (tally, extra keys such as seed).

    The eight count fields are required integers; unknown keys are
    surfaced in the extras dict rather than rejected.
    """
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid tally JSON: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise ParseError("tally file must hold a single JSON object")
    for key in CELL_LABELS + CORR_LABELS:
        if key not in data:
            raise ParseError(f"tally object missing field '{key}'")
        v = data[key]
        if isinstance(v, bool) or not isinstance(v, int):
            raise ParseError(f"tally field '{key}' must be an integer, got {v!r}")
    try:
        tally = TallyTable.from_dict(data)
    except (DomainError, OverflowError) as exc:
        raise ParseError(str(exc)) from exc
    extras = {k: v for k, v in data.items() if k not in CELL_LABELS + CORR_LABELS}
    return tally, extras
