"""Correlation coefficients and CHSH test statistics.

Count-derived quantities (sigma, S', bounds) stay in exact integer
arithmetic; ratio statistics are evaluated as exact rationals and rounded
once to float, so strict comparisons such as S > 2 are decided on the
exact value and never disturbed by intermediate rounding.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, EmptyCellError, InvariantError
from .trials import TallyTable, ThreeSettingTally, require_valid_nonempty


@dataclass(frozen=True)
class ChshSummary:
    """All statistics derived from one tally.

    E values and S are floats correctly rounded from the exact rationals;
    s_exact retains the unrounded test value for exact threshold checks.
    sigma is the range (max minus min) of the four correlated counts,
    s_prime their signed combination n00 + n01 + n10 - n11, bounded by
    s_prime_min and s_prime_max as functions of sigma and n_min alone.
    """

    e00: float
    e01: float
    e10: float
    e11: float
    s: float
    s_exact: Fraction
    sigma: int
    n_max: int
    n_min: int
    s_prime: int
    s_prime_max: int
    s_prime_min: int
    violated: bool
    violation_magnitude: float

    @property
    def violation_magnitude_exact(self) -> Fraction:
        return max(Fraction(0), self.s_exact - 2)


def correlation_coefficient(corr_count: int, trial_count: int) -> float:
    """E = p(corr) - p(anti-corr) = 2*corr_count/trial_count - 1.

    Correctly rounded to float from the exact rational.
    """
    if trial_count == 0:
        raise EmptyCellError("trial_count")
    if trial_count < 0 or corr_count < 0:
        raise DomainError("counts must be nonnegative")
    if corr_count > trial_count:
        raise InvariantError(
            f"correlated count {corr_count} exceeds trial count {trial_count}"
        )
    return float(Fraction(2 * corr_count - trial_count, trial_count))


def uniform_prob_s(p: float) -> float:
    """Test value when all four correlation probabilities equal p: 2*(2p - 1).

    At most 2, with equality only at p = 1, so uniform correlation
    probabilities can never violate the CHSH bound.
    """
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"probability must lie in [0, 1], got {p!r}")
    return 2.0 * (2.0 * p - 1.0)


def skew(t: TallyTable) -> tuple[int, int, int]:
    """Range of the correlated counts: (sigma, n_max, n_min)."""
    n_max = max(t.corr_counts)
    n_min = min(t.corr_counts)
    return n_max - n_min, n_max, n_min


def sprime(t: TallyTable) -> tuple[int, int, int]:
    """S' = n00 + n01 + n10 - n11 and its skew bounds.

    Returns (s_prime, s_prime_max, s_prime_min) with
    s_prime_max = 2*n_min + 3*sigma = 3*n_max - n_min and
    s_prime_min = 2*n_min - sigma = 3*n_min - n_max.
    """
    n00, n01, n10, n11 = t.corr_counts
    s_prime = n00 + n01 + n10 - n11
    sigma, n_max, n_min = skew(t)
    return s_prime, 2 * n_min + 3 * sigma, 2 * n_min - sigma


def chsh_exact(t: TallyTable) -> Fraction:
    """Exact rational test value S = 2*(n00/a + n01/b + n10/c - n11/d - 1)."""
    require_valid_nonempty(t)
    return 2 * (
        Fraction(t.n00, t.a)
        + Fraction(t.n01, t.b)
        + Fraction(t.n10, t.c)
        - Fraction(t.n11, t.d)
        - 1
    )


def chsh_statistic(t: TallyTable) -> ChshSummary:
    """Compute the full CHSH summary for a tally with all cells populated.

    S = E00 + E01 + E10 - E11; a violation is the strict inequality S > 2,
    decided on the exact rational value.
    """
    require_valid_nonempty(t)
    s_exact = chsh_exact(t)
    e_values = [
        correlation_coefficient(n, m)
        for n, m in zip(t.corr_counts, t.setting_counts)
    ]
    sigma, n_max, n_min = skew(t)
    s_prime, s_prime_max, s_prime_min = sprime(t)
    violated = s_exact > 2
    return ChshSummary(
        e00=e_values[0],
        e01=e_values[1],
        e10=e_values[2],
        e11=e_values[3],
        s=float(s_exact),
        s_exact=s_exact,
        sigma=sigma,
        n_max=n_max,
        n_min=n_min,
        s_prime=s_prime,
        s_prime_max=s_prime_max,
        s_prime_min=s_prime_min,
        violated=violated,
        violation_magnitude=float(max(Fraction(0), s_exact - 2)),
    )


def chsh_from_sprime(s_prime: int, n_total: int) -> float:
    """S recovered from S' under exactly uniform settings a=b=c=d=N/4.

    S = (8/N) * (S' - N/4); requires N divisible by 4 because a silent
    approximation here would invalidate the exact necessity checks.
    """
    if n_total <= 0:
        raise DomainError(f"trial count must be positive, got {n_total}")
    if n_total % 4 != 0:
        raise DomainError(
            f"uniform-settings form needs N divisible by 4, got {n_total}"
        )
    return float(Fraction(2 * (4 * s_prime - n_total), n_total))


@dataclass(frozen=True)
class Bell1964Result:
    """Both forms of the three-setting 1964 statistic.

    corr_form = E_ac - E_ba - E_bc, bounded by 1 under local realism;
    fraction_form = n_ac/N_ac - n_ba/N_ba - n_bc/N_bc, bounded by 0.
    The two are linked exactly by corr_form = 2*fraction_form + 1.
    """

    corr_form: float
    fraction_form: float
    corr_form_exact: Fraction
    fraction_form_exact: Fraction
    violated: bool


def bell1964_statistic(t: ThreeSettingTally) -> Bell1964Result:
    """Evaluate the original three-setting inequality in both forms."""
    for pair in ("ac", "ba", "bc"):
        if getattr(t, f"N_{pair}") == 0:
            raise EmptyCellError(f"N_{pair}")
    frac = (
        Fraction(t.n_ac, t.N_ac)
        - Fraction(t.n_ba, t.N_ba)
        - Fraction(t.n_bc, t.N_bc)
    )
    corr = 2 * frac + 1
    return Bell1964Result(
        corr_form=float(corr),
        fraction_form=float(frac),
        corr_form_exact=corr,
        fraction_form_exact=frac,
        violated=frac > 0,
    )
