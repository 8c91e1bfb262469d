"""Power-law models of compressed-model performance and inference runtime.

The central object is :class:`CompressionLaw`, the three-exponent power law

    predicted = l0**alpha * (1 + r)**beta * (1 + 1/(d + epsilon))**gamma

linking a compressed model's performance to the base model's performance
``l0``, the fraction of parameters removed ``r`` and the recovery
fine-tuning (RFT) dataset size ``d``.  :class:`RuntimeLaw` is the
two-parameter analogue ``c * (1 + r)**beta`` for inference runtime.

All evaluation goes through ``exp`` of the log-linear form so predictions
stay numerically consistent with the log-space regression in
:mod:`compresslaw.regression`.

Sign conventions: a physically sensible law moves in the right direction as
``r`` and ``d`` grow.  For loss-like metrics (lower is better) that means
``beta > 0`` and ``gamma > 0``; for accuracy-like metrics (higher is
better), ``beta < 0`` and ``gamma < 0``.  :func:`check_feasibility` reports
violations of these expectations but never rejects a law: fitted signs are
findings, not constraints.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

from .errors import DomainError

if TYPE_CHECKING:
    from .regression import FitStatistics

__all__ = [
    "MetricKind",
    "CompressionLaw",
    "RuntimeLaw",
    "SignViolation",
    "evaluate",
    "evaluate_ablation_r",
    "evaluate_ablation_d",
    "evaluate_runtime",
    "check_feasibility",
]


class MetricKind(enum.Enum):
    """What a performance number means, and therefore which sign pattern is feasible."""

    LOSS = "loss"
    ACCURACY = "accuracy"
    RUNTIME = "runtime"


# +1 means "beta and gamma should be positive", -1 the opposite.  Runtime laws
# carry no recovery semantics and are exempt from the check.
_FEASIBLE_SIGN = {MetricKind.LOSS: 1.0, MetricKind.ACCURACY: -1.0}


def _require_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class CompressionLaw:
    """Fitted (or fixture) exponents of the compression power law.

    Attributes:
        alpha: Exponent of the base-model performance ``l0``.
        beta: Exponent of ``(1 + r)``.
        gamma: Exponent of ``(1 + 1/(d + epsilon))``.
        metric: Which kind of performance the law describes.
        epsilon: Positive smoothing constant added to ``d`` so the no-RFT
            boundary ``d = 0`` stays in-domain.  Defaults to 1.
        stats: Goodness-of-fit statistics when the law came out of a
            regression; ``None`` for fixture laws quoted from elsewhere.
    """

    alpha: float
    beta: float
    gamma: float
    metric: MetricKind
    epsilon: float = 1.0
    stats: "FitStatistics | None" = None

    def __post_init__(self) -> None:
        for name in ("alpha", "beta", "gamma"):
            _require_finite(name, getattr(self, name))
        eps = _require_finite("epsilon", self.epsilon)
        if eps <= 0.0:
            raise DomainError(f"epsilon must be > 0, got {eps}")
        if not isinstance(self.metric, MetricKind):
            raise DomainError(f"metric must be a MetricKind, got {self.metric!r}")


@dataclass(frozen=True)
class RuntimeLaw:
    """Inference-runtime power law ``runtime = c * (1 + r)**beta``.

    ``c`` has the units of the runtime observations (e.g. seconds), or 1.0
    when the law is normalized to the uncompressed model's runtime.
    """

    c: float
    beta: float
    stats: "FitStatistics | None" = None

    def __post_init__(self) -> None:
        c = _require_finite("c", self.c)
        if c <= 0.0:
            raise DomainError(f"c must be > 0, got {c}")
        _require_finite("beta", self.beta)


@dataclass(frozen=True)
class SignViolation:
    """One exponent whose fitted sign contradicts the metric's feasible pattern."""

    exponent: str
    value: float
    expected: str

    def __str__(self) -> str:
        return f"{self.exponent} = {self.value:.6g} violates the feasible sign ({self.expected})"


def _validate_point(l0: float, r: float, d: float) -> tuple[float, float, float]:
    l0 = _require_finite("l0", l0)
    r = _require_finite("r", r)
    d = _require_finite("d", d)
    if l0 <= 0.0:
        raise DomainError(f"l0 must be > 0, got {l0}")
    if not 0.0 <= r < 1.0:
        raise DomainError(f"r must lie in [0, 1), got {r}")
    if d < 0.0:
        raise DomainError(f"d must be >= 0, got {d}")
    return l0, r, d


def _checked_exp(log_value: float) -> float:
    try:
        value = math.exp(log_value)
    except OverflowError:
        value = math.inf
    if not math.isfinite(value) or value <= 0.0:
        raise DomainError(f"prediction overflowed the finite positive range (log value {log_value:.6g})")
    return value


def evaluate(law: CompressionLaw, l0: float, r: float, d: float) -> float:
    """Predict compressed-model performance at one point.

    Args:
        law: Compression law to evaluate.
        l0: Base-model performance, > 0.
        r: Compression ratio in [0, 1).  ``r = 0`` is the explicit
            no-compression case.
        d: RFT dataset size, >= 0 (0 means no recovery fine-tuning).

    Returns:
        ``l0**alpha * (1 + r)**beta * (1 + 1/(d + epsilon))**gamma``,
        always finite and positive.

    Raises:
        DomainError: On out-of-domain or non-finite inputs.
    """
    l0, r, d = _validate_point(l0, r, d)
    log_pred = (
        law.alpha * math.log(l0)
        + law.beta * math.log1p(r)
        + law.gamma * math.log1p(1.0 / (d + law.epsilon))
    )
    return _checked_exp(log_pred)


def evaluate_ablation_r(alpha: float, beta: float, l0: float, r: float) -> float:
    """Ratio-only ablation ``l0**alpha * (1 + r)**beta`` (RFT factor removed)."""
    _require_finite("alpha", alpha)
    _require_finite("beta", beta)
    l0, r, _ = _validate_point(l0, r, 0.0)
    return _checked_exp(alpha * math.log(l0) + beta * math.log1p(r))


def evaluate_ablation_d(alpha: float, gamma: float, epsilon: float, l0: float, d: float) -> float:
    """Data-only ablation ``l0**alpha * (1 + 1/(d + epsilon))**gamma`` (ratio factor removed)."""
    _require_finite("alpha", alpha)
    _require_finite("gamma", gamma)
    epsilon = _require_finite("epsilon", epsilon)
    if epsilon <= 0.0:
        raise DomainError(f"epsilon must be > 0, got {epsilon}")
    l0, _, d = _validate_point(l0, 0.0, d)
    return _checked_exp(alpha * math.log(l0) + gamma * math.log1p(1.0 / (d + epsilon)))


def evaluate_runtime(law: RuntimeLaw, r: float) -> float:
    """Predicted inference runtime ``c * (1 + r)**beta`` at compression ratio ``r``."""
    r = _require_finite("r", r)
    if not 0.0 <= r < 1.0:
        raise DomainError(f"r must lie in [0, 1), got {r}")
    return _checked_exp(math.log(law.c) + law.beta * math.log1p(r))


def check_feasibility(law: CompressionLaw) -> list[SignViolation]:
    """Report which of ``beta``/``gamma`` contradict the metric's feasible signs.

    An empty list means the law is feasible.  This is a report, not a
    rejection: laws with "wrong" signs evaluate fine, they just move in a
    physically implausible direction as ``r`` or ``d`` grows.
    """
    sign = _FEASIBLE_SIGN.get(law.metric)
    if sign is None:
        return []
    wanted = "> 0" if sign > 0 else "< 0"
    violations = []
    for name in ("beta", "gamma"):
        value = getattr(law, name)
        if sign * value <= 0.0:
            violations.append(
                SignViolation(exponent=name, value=value, expected=f"{name} {wanted} for {law.metric.value}")
            )
    return violations
