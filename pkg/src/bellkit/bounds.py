"""Necessary conditions for CHSH violation and the no-signalling analysis.

All threshold comparisons here are strict inequalities evaluated in exact
rational arithmetic. Tolerances supplied as floats are interpreted through
their shortest decimal representation (0.01 means 1/100, not the nearest
binary double), so integer thresholds like the minimum trial count land
exactly where the decimal value puts them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError
from .stats import chsh_exact, skew
from .trials import CELL_LABELS, TallyTable, require_valid_nonempty

# Unordered setting-cell pairs whose comparison is a physical marginal
# test: one station's setting is held fixed while the other's varies.
PHYSICAL_PAIRS = (
    frozenset(("a", "b")),
    frozenset(("c", "d")),
    frozenset(("a", "c")),
    frozenset(("b", "d")),
)


def as_exact(value) -> Fraction:
    """Convert a tolerance/magnitude input to an exact rational.

    ints, Fractions, and decimal strings convert losslessly; floats go
    through repr so the decimal the caller typed is honored.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise DomainError(f"expected a number, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise DomainError(f"expected a finite number, got {value!r}")
        return Fraction(repr(value))
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError(f"not a number: {value!r}") from exc
    raise DomainError(f"expected a number, got {value!r}")


@dataclass(frozen=True)
class MarginalDelta:
    """One ordered-pair marginal probability difference.

    value is (alpha*n_beta - beta*n_alpha) / (alpha*(alpha+beta)) for cell
    counts alpha, beta and correlated counts n_alpha, n_beta. strength is
    |alpha*n_beta - beta*n_alpha| / ((alpha+beta)*min(alpha,beta)), the
    quantity the smallness criterion compares against epsilon; it is the
    same for both orientations of a pair.
    """

    alpha: str
    beta: str
    value: float
    value_exact: Fraction
    strength_exact: Fraction
    physical: bool


@dataclass(frozen=True)
class NoSignallingReport:
    """All twelve ordered-pair marginal deltas plus the achieved epsilon.

    epsilon_achieved is the infimum of tolerances satisfying the strict
    smallness criterion for every pair; being an infimum it is not itself
    admissible unless every delta vanishes. The four physically meaningful
    unordered pairs are tagged via MarginalDelta.physical.
    """

    deltas: tuple[MarginalDelta, ...]
    epsilon_achieved: float
    epsilon_achieved_exact: Fraction

    def pairs_failing(self, epsilon) -> tuple[MarginalDelta, ...]:
        """Ordered pairs whose strength breaks the strict criterion at epsilon."""
        eps = as_exact(epsilon)
        return tuple(d for d in self.deltas if d.strength_exact >= eps)

    def passes(self, epsilon) -> bool:
        """True when every pair satisfies the strict criterion at epsilon."""
        return not self.pairs_failing(epsilon)


def nosignalling_deltas(t: TallyTable) -> NoSignallingReport:
    """Marginal probability differences for all ordered cell pairs.

    Requires every setting cell populated. The achieved epsilon is
    max over pairs of |alpha*n_beta - beta*n_alpha| / ((alpha+beta)*min),
    computed exactly.
    """
    require_valid_nonempty(t)
    counts = dict(zip(CELL_LABELS, t.setting_counts))
    corr = dict(zip(CELL_LABELS, t.corr_counts))
    deltas = []
    achieved = Fraction(0)
    for alpha in CELL_LABELS:
        for beta in CELL_LABELS:
            if alpha == beta:
                continue
            ca, cb = counts[alpha], counts[beta]
            cross = ca * corr[beta] - cb * corr[alpha]
            value = Fraction(cross, ca * (ca + cb))
            strength = Fraction(abs(cross), (ca + cb) * min(ca, cb))
            achieved = max(achieved, strength)
            deltas.append(
                MarginalDelta(
                    alpha=alpha,
                    beta=beta,
                    value=float(value),
                    value_exact=value,
                    strength_exact=strength,
                    physical=frozenset((alpha, beta)) in PHYSICAL_PAIRS,
                )
            )
    return NoSignallingReport(
        deltas=tuple(deltas),
        epsilon_achieved=float(achieved),
        epsilon_achieved_exact=achieved,
    )


def violation_possible(n_min: int, sigma: int, n_total: int, delta_small=0) -> bool:
    """Strict necessary condition for a violation of count margin delta_small.

    True iff 2*n_min + 3*sigma > N/2 + delta_small, evaluated exactly.
    """
    if n_total <= 0:
        raise DomainError(f"trial count must be positive, got {n_total}")
    if n_min < 0 or sigma < 0:
        raise DomainError("n_min and sigma must be nonnegative")
    margin = as_exact(delta_small)
    if margin < 0:
        raise DomainError(f"delta_small must be nonnegative, got {delta_small!r}")
    return Fraction(2 * n_min + 3 * sigma) > Fraction(n_total, 2) + margin


def required_skew(n_total: int, delta) -> Fraction:
    """Strict lower bound N*Delta/24 on the skew needed to exceed 2 by Delta.

    Callers compare sigma > required_skew strictly; the bound is returned
    as an exact rational.
    """
    if n_total <= 0:
        raise DomainError(f"trial count must be positive, got {n_total}")
    magnitude = as_exact(delta)
    if magnitude < 0:
        raise DomainError(f"violation magnitude must be nonnegative, got {delta!r}")
    return Fraction(n_total) * magnitude / 24


def epsilon_floor(delta) -> Fraction:
    """Strict lower bound Delta/12 on the achievable no-signalling tolerance.

    Holds for any uniform-settings experiment violating by Delta,
    independent of the number of trials.
    """
    magnitude = as_exact(delta)
    if magnitude < 0:
        raise DomainError(f"violation magnitude must be nonnegative, got {delta!r}")
    return magnitude / 12


def min_trials(epsilon) -> int:
    """Smallest trial count N strictly greater than 2/epsilon."""
    eps = as_exact(epsilon)
    if eps <= 0:
        raise DomainError(f"epsilon must be positive, got {epsilon!r}")
    return math.floor(2 / eps) + 1


@dataclass(frozen=True)
class BoundsReport:
    """Necessity thresholds for a tally at a given violation magnitude.

    delta is the magnitude the thresholds are computed for (the achieved
    excess over 2 unless a target was requested); delta_small = N*delta/8
    converts it to count units, and required_skew = delta_small/3 exactly.
    violation_possible asks whether any violation is count-compatible
    (threshold N/2, no margin). min_trials is the smallest N compatible
    with min_trials_epsilon, which is the requested tolerance when given,
    else the epsilon floor.
    """

    delta: Fraction
    delta_source: str
    delta_small: Fraction
    required_skew: Fraction
    violation_possible: bool
    epsilon_floor: Fraction
    min_trials: int | None
    min_trials_epsilon: Fraction | None


def bounds_report(t: TallyTable, delta=None, epsilon=None) -> BoundsReport:
    """Assemble the necessity thresholds for a tally.

    delta defaults to the achieved violation magnitude max(0, S - 2);
    epsilon, when given, is the requested no-signalling tolerance.
    """
    require_valid_nonempty(t)
    n_total = t.total_trials
    if delta is None:
        magnitude = max(Fraction(0), chsh_exact(t) - 2)
        source = "achieved"
    else:
        magnitude = as_exact(delta)
        if magnitude < 0:
            raise DomainError(f"delta must be nonnegative, got {delta!r}")
        source = "requested"
    sigma, _, n_min = skew(t)
    delta_small = Fraction(n_total) * magnitude / 8
    floor = epsilon_floor(magnitude)
    eps_for_n = as_exact(epsilon) if epsilon is not None else (floor if floor > 0 else None)
    return BoundsReport(
        delta=magnitude,
        delta_source=source,
        delta_small=delta_small,
        required_skew=required_skew(n_total, magnitude),
        violation_possible=violation_possible(n_min, sigma, n_total),
        epsilon_floor=floor,
        min_trials=min_trials(eps_for_n) if eps_for_n is not None else None,
        min_trials_epsilon=eps_for_n,
    )
