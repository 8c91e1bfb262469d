"""Power-law toolkit for compressed-LLM performance: fitting, recovery analysis, planning."""

from . import cli, errors, io, laws, planner, recovery, regression, synth
from .errors import (
    CompressLawError,
    DataFormatError,
    DomainError,
    InfeasibleBudgetError,
    RegimeError,
    SingularDesignError,
)
from .laws import (
    CompressionLaw,
    MetricKind,
    RuntimeLaw,
    SignViolation,
    check_feasibility,
    evaluate,
    evaluate_ablation_d,
    evaluate_ablation_r,
    evaluate_runtime,
)
from .planner import (
    CandidateModel,
    PlanEntry,
    PlanRequest,
    PlanResult,
    SkippedCandidate,
    plan,
    predict_speedup,
    required_ratio,
)
from .recovery import (
    RecoveryAnalysis,
    RecoveryQuery,
    Regime,
    analyze,
    classify_regime,
    critical_ratio,
    min_rft_size,
    recoverable,
    recovery_margin,
)
from .regression import (
    DesignForm,
    ExperimentRecord,
    FeasibilityWarning,
    FitStatistics,
    build_design,
    fit_law,
    ols_fit,
)
from .synth import SyntheticConfig, generate

__version__ = "0.1.0"

__all__ = [
    "cli",
    "errors",
    "io",
    "laws",
    "planner",
    "recovery",
    "regression",
    "synth",
    "CompressLawError",
    "DataFormatError",
    "DomainError",
    "InfeasibleBudgetError",
    "RegimeError",
    "SingularDesignError",
    "CompressionLaw",
    "MetricKind",
    "RuntimeLaw",
    "SignViolation",
    "check_feasibility",
    "evaluate",
    "evaluate_ablation_d",
    "evaluate_ablation_r",
    "evaluate_runtime",
    "CandidateModel",
    "PlanEntry",
    "PlanRequest",
    "PlanResult",
    "SkippedCandidate",
    "plan",
    "predict_speedup",
    "required_ratio",
    "RecoveryAnalysis",
    "RecoveryQuery",
    "Regime",
    "analyze",
    "classify_regime",
    "critical_ratio",
    "min_rft_size",
    "recoverable",
    "recovery_margin",
    "DesignForm",
    "ExperimentRecord",
    "FeasibilityWarning",
    "FitStatistics",
    "build_design",
    "fit_law",
    "ols_fit",
    "SyntheticConfig",
    "generate",
]
