"""bellkit: simulator and statistics toolkit for CHSH/Bell-test experiments."""

__version__ = "0.1.0"

from .errors import (
    BellkitError,
    ConfigError,
    DomainError,
    EmptyCellError,
    EnumerationCapError,
    InvariantError,
    ParseError,
)
from .trials import (
    TallyTable,
    ThreeSettingTally,
    TrialRecord,
    load_tally,
    merge_tallies,
    parse_trial_line,
    read_trials,
    serialize_trial_line,
    tally_from_trials,
    validate_tally,
    write_tally,
)
from .stats import (
    Bell1964Result,
    ChshSummary,
    bell1964_statistic,
    chsh_exact,
    chsh_from_sprime,
    chsh_statistic,
    correlation_coefficient,
    skew,
    sprime,
    uniform_prob_s,
)
from .bounds import (
    BoundsReport,
    MarginalDelta,
    NoSignallingReport,
    bounds_report,
    epsilon_floor,
    min_trials,
    nosignalling_deltas,
    required_skew,
    violation_possible,
)
from .simulate import (
    CHSH_MAX_ANGLES,
    ExperimentRun,
    SimulationConfig,
    analytic_correlation,
    iter_trials,
    run_experiment,
    sample_lhv_trial,
    sample_quantum_trial,
    sample_trial,
)
from .oracle import (
    CounterexampleReport,
    enumerate_uniform_tallies,
    merge_reports,
    verify_necessary_conditions,
)
from .report import AnalysisReport, build_analysis_report

__all__ = [
    "__version__",
    "AnalysisReport",
    "Bell1964Result",
    "BellkitError",
    "BoundsReport",
    "CHSH_MAX_ANGLES",
    "ChshSummary",
    "ConfigError",
    "CounterexampleReport",
    "DomainError",
    "EmptyCellError",
    "EnumerationCapError",
    "ExperimentRun",
    "InvariantError",
    "MarginalDelta",
    "NoSignallingReport",
    "ParseError",
    "SimulationConfig",
    "TallyTable",
    "ThreeSettingTally",
    "TrialRecord",
    "analytic_correlation",
    "bell1964_statistic",
    "bounds_report",
    "build_analysis_report",
    "chsh_exact",
    "chsh_from_sprime",
    "chsh_statistic",
    "correlation_coefficient",
    "enumerate_uniform_tallies",
    "epsilon_floor",
    "iter_trials",
    "load_tally",
    "merge_reports",
    "merge_tallies",
    "min_trials",
    "nosignalling_deltas",
    "parse_trial_line",
    "read_trials",
    "required_skew",
    "run_experiment",
    "sample_lhv_trial",
    "sample_quantum_trial",
    "sample_trial",
    "serialize_trial_line",
    "skew",
    "sprime",
    "tally_from_trials",
    "uniform_prob_s",
    "validate_tally",
    "verify_necessary_conditions",
    "violation_possible",
    "write_tally",
]
