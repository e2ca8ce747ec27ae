"""Exhaustive verification of the necessity conditions on small tallies.

Enumerates every uniform-settings tally (a=b=c=d) up to a given count per
setting and checks, in exact rational arithmetic, that each derived
inequality holds with zero counterexamples:

  sigma_ge_1:               S > 2 implies sigma >= 1
  sigma_gt_NDelta_24:       S > 2 implies sigma > N*(S-2)/24
  eps_gt_Delta_12:          S > 2 implies achieved epsilon > (S-2)/12
  sprime_bounds:            S'_min <= S' <= S'_max for every tally
  uniformity_no_violation:  sigma = 0 implies S <= 2

Exact arithmetic matters: several conditions sit on strict-inequality
boundaries (S exactly 2) where floating point could manufacture or hide a
counterexample.
"""

from __future__ import annotations

import itertools
import json
import time
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .bounds import epsilon_floor, nosignalling_deltas, required_skew
from .errors import DomainError, EnumerationCapError
from .stats import chsh_statistic
from .trials import TallyTable

CONDITIONS = (
    "sigma_ge_1",
    "sigma_gt_NDelta_24",
    "eps_gt_Delta_12",
    "sprime_bounds",
    "uniformity_no_violation",
)

DEFAULT_CAP = 10**8


@dataclass(frozen=True)
class CounterexampleReport:
    """Outcome of an exhaustive run: tallies checked and any failures found."""

    checked: int
    counterexamples: tuple[tuple[TallyTable, str], ...]
    n_per_setting: int
    elapsed_seconds: float
    conditions: tuple[str, ...] = field(default=CONDITIONS)

    @property
    def ok(self) -> bool:
        return not self.counterexamples

    def to_dict(self) -> dict:
        return {
            "checked": self.checked,
            "n_per_setting": self.n_per_setting,
            "conditions": list(self.conditions),
            "counterexamples": [
                {"tally": tally.to_dict(), "condition": condition}
                for tally, condition in self.counterexamples
            ],
            "elapsed_seconds": self.elapsed_seconds,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _check_domain(n_per_setting: int, cap: int, outer: Sequence[int]) -> None:
    if n_per_setting < 1:
        raise DomainError(f"n_per_setting must be >= 1, got {n_per_setting}")
    size = len(outer) * (n_per_setting + 1) ** 3
    if size > cap:
        raise EnumerationCapError(
            f"enumeration of {size} tallies exceeds cap {cap}"
        )


def enumerate_uniform_tallies(
    n_per_setting: int,
    cap: int = DEFAULT_CAP,
    n00_values: Iterable[int] | None = None,
) -> Iterator[TallyTable]:
    """All tallies with a=b=c=d=n_per_setting, in lexicographic n-order.

    Yields (n_per_setting+1)^4 tallies. n00_values restricts the outermost
    index so the domain can be partitioned across workers; partitioned
    enumerations concatenate to the full one.
    """
    q = n_per_setting
    outer = tuple(range(q + 1)) if n00_values is None else tuple(n00_values)
    if any(not 0 <= v <= q for v in outer):
        raise DomainError(f"n00 partition values must lie in 0..{q}")
    _check_domain(q, cap, outer)
    inner = range(q + 1)
    for n00, n01, n10, n11 in itertools.product(outer, inner, inner, inner):
        yield TallyTable(a=q, b=q, c=q, d=q, n00=n00, n01=n01, n10=n10, n11=n11)


def verify_necessary_conditions(
    n_per_setting: int,
    cap: int = DEFAULT_CAP,
    n00_values: Iterable[int] | None = None,
) -> CounterexampleReport:
    """Check every condition on every enumerated tally; report failures verbatim.

    Each tally is pushed through the real statistics pipeline (test value,
    skew, S' bounds, marginal deltas) rather than any algebraic shortcut,
    so this exercises the same code paths the analyzer uses.
    """
    started = time.perf_counter()
    checked = 0
    failures: list[tuple[TallyTable, str]] = []
    for tally in enumerate_uniform_tallies(n_per_setting, cap=cap, n00_values=n00_values):
        checked += 1
        summary = chsh_statistic(tally)
        if not summary.s_prime_min <= summary.s_prime <= summary.s_prime_max:
            failures.append((tally, "sprime_bounds"))
        if summary.sigma == 0 and summary.s_exact > 2:
            failures.append((tally, "uniformity_no_violation"))
        if summary.s_exact > 2:
            excess = summary.s_exact - 2
            if summary.sigma < 1:
                failures.append((tally, "sigma_ge_1"))
            if not summary.sigma > required_skew(tally.total_trials, excess):
                failures.append((tally, "sigma_gt_NDelta_24"))
            achieved = nosignalling_deltas(tally).epsilon_achieved_exact
            if not achieved > epsilon_floor(excess):
                failures.append((tally, "eps_gt_Delta_12"))
    return CounterexampleReport(
        checked=checked,
        counterexamples=tuple(failures),
        n_per_setting=n_per_setting,
        elapsed_seconds=time.perf_counter() - started,
    )


def merge_reports(reports: Sequence[CounterexampleReport]) -> CounterexampleReport:
    """Combine partitioned verification reports (counterexamples concatenate)."""
    if not reports:
        raise DomainError("need at least one report to merge")
    sizes = {r.n_per_setting for r in reports}
    if len(sizes) != 1:
        raise DomainError(f"cannot merge reports over different domains: {sorted(sizes)}")
    return CounterexampleReport(
        checked=sum(r.checked for r in reports),
        counterexamples=tuple(
            pair for r in reports for pair in r.counterexamples
        ),
        n_per_setting=reports[0].n_per_setting,
        elapsed_seconds=sum(r.elapsed_seconds for r in reports),
    )
