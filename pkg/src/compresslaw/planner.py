"""Budget-constrained compression planning.

Given candidate base models and a target post-compression parameter count,
each candidate needs ratio ``r = 1 - budget/param_count`` (linear in
parameters; the simplest proportional budget-matching rule).  Candidates
are ranked by predicted performance under their compression laws, with the
smaller required ratio breaking ties (less extrapolation risk).

The default ratio cap of 0.9 mirrors the largest ratio the underlying
experiments explored; anything above 0.9 that a raised cap lets through is
flagged as an extrapolation.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .errors import DomainError, InfeasibleBudgetError
from .laws import CompressionLaw, MetricKind, RuntimeLaw, evaluate

__all__ = [
    "CandidateModel",
    "PlanRequest",
    "PlanEntry",
    "SkippedCandidate",
    "PlanResult",
    "required_ratio",
    "plan",
    "predict_speedup",
]

OBSERVED_RATIO_MAX = 0.9


@dataclass(frozen=True)
class CandidateModel:
    """A base model that could be compressed down to the budget."""

    model_id: str
    param_count: float
    l0: float
    law: CompressionLaw
    runtime_law: RuntimeLaw | None = None

    def __post_init__(self) -> None:
        if not (math.isfinite(self.param_count) and self.param_count > 0.0):
            raise DomainError(f"param_count must be > 0, got {self.param_count}")
        if not (math.isfinite(self.l0) and self.l0 > 0.0):
            raise DomainError(f"l0 must be > 0, got {self.l0}")
        if self.law.metric not in (MetricKind.LOSS, MetricKind.ACCURACY):
            raise DomainError("candidate laws must target loss or accuracy")


@dataclass(frozen=True)
class PlanRequest:
    """Target budget (post-compression parameter count) and planning knobs."""

    budget: float
    metric: MetricKind
    rft_size: float = 0.0
    max_ratio: float = 0.9

    def __post_init__(self) -> None:
        if not (math.isfinite(self.budget) and self.budget > 0.0):
            raise DomainError(f"budget must be > 0, got {self.budget}")
        if not (math.isfinite(self.rft_size) and self.rft_size >= 0.0):
            raise DomainError(f"rft_size must be >= 0, got {self.rft_size}")
        if not 0.0 < self.max_ratio <= 1.0:
            raise DomainError(f"max_ratio must lie in (0, 1], got {self.max_ratio}")


@dataclass(frozen=True)
class PlanEntry:
    model_id: str
    required_ratio: float
    predicted_performance: float
    predicted_runtime_factor: float | None = None
    notes: tuple[str, ...] = ()


@dataclass(frozen=True)
class SkippedCandidate:
    model_id: str
    reason: str


@dataclass(frozen=True)
class PlanResult:
    """Feasible candidates ranked best-first, plus skipped ones with reasons."""

    entries: tuple[PlanEntry, ...]
    skipped: tuple[SkippedCandidate, ...]


def required_ratio(param_count: float, budget: float, max_ratio: float = 0.9) -> float:
    """Compression ratio needed to fit ``param_count`` into ``budget`` parameters.

    Returns 0.0 when the model already fits (no compression needed).

    Raises:
        InfeasibleBudgetError: When the required ratio reaches ``max_ratio``.
        DomainError: On nonpositive inputs.
    """
    if not (math.isfinite(param_count) and param_count > 0.0):
        raise DomainError(f"param_count must be > 0, got {param_count}")
    if not (math.isfinite(budget) and budget > 0.0):
        raise DomainError(f"budget must be > 0, got {budget}")
    if budget >= param_count:
        return 0.0
    ratio = 1.0 - budget / param_count
    if ratio >= max_ratio:
        raise InfeasibleBudgetError(
            f"requires ratio {ratio:.4f} >= cap {max_ratio:.4f} "
            f"({param_count:.3g} -> {budget:.3g} parameters)",
            ratio=ratio,
        )
    return ratio


def plan(candidates: list[CandidateModel], request: PlanRequest) -> PlanResult:
    """Rank candidates by predicted post-compression performance at the budget.

    Args:
        candidates: Models to consider; their laws must all share
            ``request.metric``.
        request: Budget, assumed RFT size and ratio cap.

    Returns:
        A :class:`PlanResult` with entries sorted best-first (descending
        predicted accuracy, ascending predicted loss; ties broken by the
        smaller required ratio) and over-budget candidates listed as
        skipped.
    """
    if not candidates:
        raise DomainError("need at least one candidate model")
    for candidate in candidates:
        if candidate.law.metric is not request.metric:
            raise DomainError(
                f"candidate '{candidate.model_id}' targets {candidate.law.metric.value}, "
                f"request asks for {request.metric.value}"
            )

    entries: list[PlanEntry] = []
    skipped: list[SkippedCandidate] = []
    for candidate in candidates:
        try:
            ratio = required_ratio(candidate.param_count, request.budget, request.max_ratio)
        except InfeasibleBudgetError as exc:
            skipped.append(SkippedCandidate(candidate.model_id, str(exc)))
            continue
        predicted = evaluate(candidate.law, candidate.l0, ratio, request.rft_size)
        runtime_factor = None
        if candidate.runtime_law is not None:
            runtime_factor = math.exp(candidate.runtime_law.beta * math.log1p(ratio))
        notes: tuple[str, ...] = ()
        if ratio > OBSERVED_RATIO_MAX:
            notes = (f"ratio {ratio:.4f} exceeds the observed range (<= {OBSERVED_RATIO_MAX}); extrapolation",)
        entries.append(PlanEntry(candidate.model_id, ratio, predicted, runtime_factor, notes))

    descending = request.metric is MetricKind.ACCURACY
    entries.sort(
        key=lambda e: (
            -e.predicted_performance if descending else e.predicted_performance,
            e.required_ratio,
            e.model_id,
        )
    )
    skipped.sort(key=lambda s: s.model_id)
    return PlanResult(entries=tuple(entries), skipped=tuple(skipped))


def predict_speedup(runtime_law: RuntimeLaw, r: float) -> float:
    """Fractional inference-time improvement ``1 - (1 + r)**beta`` at ratio ``r``.

    Assumes ``beta < 0`` (compression speeds inference up); for ``beta >= 0``
    a warning is emitted and 0.0 returned.
    """
    r = float(r)
    if not (math.isfinite(r) and 0.0 <= r < 1.0):
        raise DomainError(f"r must lie in [0, 1), got {r!r}")
    if runtime_law.beta >= 0.0:
        warnings.warn(
            f"runtime exponent beta = {runtime_law.beta:.6g} is nonnegative; no speedup predicted",
            UserWarning,
            stacklevel=2,
        )
        return 0.0
    return -math.expm1(runtime_law.beta * math.log1p(r))
