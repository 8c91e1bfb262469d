"""Log-space ordinary least squares for the compression power laws.

Taking logs turns the multiplicative law into a linear model

    log l = alpha*log(l0) + beta*log(1 + r) + gamma*log(1 + 1/(d + epsilon))

with no intercept (the law carries no multiplicative constant).  The
runtime law does carry a constant, so its design gets an intercept column
and the fitted intercept becomes ``log c``.

Solving uses a QR decomposition rather than the normal equations, with a
condition-number guard at 1e8.  R-squared follows the convention of
standard statistics packages: uncentered (``1 - SSR/sum(y**2)``) for the
intercept-free forms, centered for the runtime form.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .errors import DomainError, SingularDesignError
from .laws import CompressionLaw, MetricKind, RuntimeLaw, check_feasibility

__all__ = [
    "ExperimentRecord",
    "FitStatistics",
    "DesignForm",
    "FeasibilityWarning",
    "FITTED_SIGN_EXPONENTS",
    "build_design",
    "ols_fit",
    "fit_law",
]

CONDITION_NUMBER_LIMIT = 1e8


class FeasibilityWarning(UserWarning):
    """A fitted exponent has a sign the metric deems physically implausible."""


class DesignForm(enum.Enum):
    """Which regressors enter the design matrix."""

    FULL = "full"
    RATIO_ONLY = "ratio"
    DATA_ONLY = "data"
    RUNTIME = "runtime"


_COLUMN_NAMES: dict[DesignForm, tuple[str, ...]] = {
    DesignForm.FULL: ("log_l0", "log_ratio", "log_data"),
    DesignForm.RATIO_ONLY: ("log_l0", "log_ratio"),
    DesignForm.DATA_ONLY: ("log_l0", "log_data"),
    DesignForm.RUNTIME: ("intercept", "log_ratio"),
}

# Exponents a given form actually estimates, for sign-feasibility warnings.
# Pinned-to-zero exponents of the ablation forms are exempt.
FITTED_SIGN_EXPONENTS: dict[DesignForm, tuple[str, ...]] = {
    DesignForm.FULL: ("beta", "gamma"),
    DesignForm.RATIO_ONLY: ("beta",),
    DesignForm.DATA_ONLY: ("gamma",),
    DesignForm.RUNTIME: (),
}


@dataclass(frozen=True)
class ExperimentRecord:
    """One measured observation of a compressed model.

    ``d`` is in caller-chosen units (samples, tokens, ...); units must be
    consistent within a fit.  ``d = 0`` is the valid no-RFT case.
    """

    model_id: str
    metric: MetricKind
    l0: float
    r: float
    d: float
    l: float

    def __post_init__(self) -> None:
        if not isinstance(self.metric, MetricKind):
            raise DomainError(f"metric must be a MetricKind, got {self.metric!r}")
        for name in ("l0", "r", "d", "l"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise DomainError(f"{name} must be finite, got {value!r}")
        if self.l0 <= 0.0:
            raise DomainError(f"l0 must be > 0, got {self.l0}")
        if self.l <= 0.0:
            raise DomainError(f"l must be > 0, got {self.l}")
        if not 0.0 <= self.r < 1.0:
            raise DomainError(f"r must lie in [0, 1), got {self.r}")
        if self.d < 0.0:
            raise DomainError(f"d must be >= 0, got {self.d}")


@dataclass(frozen=True)
class FitStatistics:
    """Goodness-of-fit summary for one least-squares solve.

    ``f_statistic`` is ``math.inf`` for an exact (zero-residual) fit.
    """

    n: int
    p: int
    r_squared: float
    adj_r_squared: float
    f_statistic: float
    residual_std: float
    condition_number: float

    def __post_init__(self) -> None:
        if self.n <= self.p:
            raise DomainError(f"need n > p, got n={self.n}, p={self.p}")
        if not 0.0 <= self.r_squared <= 1.0:
            raise DomainError(f"r_squared must lie in [0, 1], got {self.r_squared}")
        if self.adj_r_squared > self.r_squared + 1e-12:
            raise DomainError("adj_r_squared cannot exceed r_squared")
        if self.f_statistic < 0.0:
            raise DomainError("f_statistic must be nonnegative")
        if self.residual_std < 0.0:
            raise DomainError("residual_std must be nonnegative")
        if not self.condition_number > 0.0:
            raise DomainError("condition_number must be positive")


def build_design(
    records: Sequence[ExperimentRecord],
    epsilon: float = 1.0,
    form: DesignForm = DesignForm.FULL,
) -> tuple[np.ndarray, np.ndarray]:
    """Build the (X, y) regression problem in log space.

    Args:
        records: Observations sharing one metric kind.
        epsilon: Smoothing constant for the RFT factor.
        form: Which columns to include; see :class:`DesignForm`.

    Returns:
        ``X`` of shape (n, p) and ``y = log(l)`` of shape (n,).  Columns in
        the order given by the form: FULL is ``[log l0, log(1+r),
        log(1 + 1/(d+epsilon))]``; RUNTIME is ``[1, log(1+r)]``.

    Raises:
        DomainError: Mixed metric kinds, too few records (need at least
            p + 1), or a non-finite transform.
    """
    if epsilon <= 0.0 or not math.isfinite(epsilon):
        raise DomainError(f"epsilon must be a positive finite real, got {epsilon}")
    names = _COLUMN_NAMES[form]
    p = len(names)
    if len(records) < p + 1:
        raise DomainError(f"need at least {p + 1} records for the {form.value} form, got {len(records)}")
    metrics = {record.metric for record in records}
    if len(metrics) != 1:
        raise DomainError(f"records mix metric kinds: {sorted(m.value for m in metrics)}")

    n = len(records)
    x = np.empty((n, p))
    y = np.empty(n)
    for i, record in enumerate(records):
        cols = {
            "intercept": 1.0,
            "log_l0": math.log(record.l0),
            "log_ratio": math.log1p(record.r),
            "log_data": math.log1p(1.0 / (record.d + epsilon)),
        }
        x[i] = [cols[name] for name in names]
        y[i] = math.log(record.l)
    if not (np.isfinite(x).all() and np.isfinite(y).all()):
        raise DomainError("log transform produced non-finite design entries")
    return x, y


def _name_collinear_columns(x: np.ndarray, names: Sequence[str]) -> str:
    norms = np.linalg.norm(x, axis=0)
    dead = [names[j] for j in np.nonzero(norms < 1e-12)[0]]
    if dead:
        return f"column(s) {dead} are numerically zero"
    unit = x / norms
    cos = np.abs(unit.T @ unit)
    np.fill_diagonal(cos, 0.0)
    i, j = divmod(int(np.argmax(cos)), cos.shape[1])
    return f"columns '{names[i]}' and '{names[j]}' are nearly collinear (|cos| = {cos[i, j]:.6f})"


def ols_fit(
    x: np.ndarray,
    y: np.ndarray,
    column_names: Sequence[str] | None = None,
) -> tuple[np.ndarray, FitStatistics]:
    """Solve ``min ||X b - y||^2`` by QR and compute fit statistics.

    Args:
        x: Design matrix, shape (n, p) with n > p and full column rank.
        y: Response vector, shape (n,).
        column_names: Optional labels used in singular-design diagnostics.

    Returns:
        The coefficient vector and a :class:`FitStatistics`.

    Raises:
        SingularDesignError: Rank deficiency, i.e. condition number above
            ``CONDITION_NUMBER_LIMIT``; the message names the offending
            columns.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.ndim != 2 or y.ndim != 1 or x.shape[0] != y.shape[0]:
        raise DomainError(f"incompatible shapes X{x.shape}, y{y.shape}")
    n, p = x.shape
    if n <= p:
        raise DomainError(f"need more rows than columns, got {n} x {p}")
    names = list(column_names) if column_names is not None else [f"x{j}" for j in range(p)]

    condition = float(np.linalg.cond(x))
    if not math.isfinite(condition) or condition > CONDITION_NUMBER_LIMIT:
        raise SingularDesignError(
            f"design is rank deficient or ill conditioned (cond = {condition:.3g}); "
            + _name_collinear_columns(x, names)
        )

    q, r = np.linalg.qr(x)
    coef = np.linalg.solve(r, q.T @ y)

    residuals = y - x @ coef
    ssr = float(residuals @ residuals)
    has_intercept = bool(np.any(np.all(x == 1.0, axis=0)))
    if has_intercept:
        centered = y - y.mean()
        tss = float(centered @ centered)
        dof_model = p - 1
    else:
        tss = float(y @ y)
        dof_model = p
    if tss > 0.0:
        r_squared = min(max(1.0 - ssr / tss, 0.0), 1.0)
    else:
        r_squared = 1.0 if ssr <= 1e-30 else 0.0
    if has_intercept:
        adj = 1.0 - (1.0 - r_squared) * (n - 1) / (n - p)
    else:
        adj = 1.0 - (1.0 - r_squared) * n / (n - p)
    if r_squared < 1.0 and dof_model > 0:
        f_stat = (r_squared / dof_model) / ((1.0 - r_squared) / (n - p))
    else:
        f_stat = math.inf
    stats = FitStatistics(
        n=n,
        p=p,
        r_squared=r_squared,
        adj_r_squared=adj,
        f_statistic=f_stat,
        residual_std=math.sqrt(ssr / (n - p)),
        condition_number=condition,
    )
    return coef, stats


def fit_law(
    records: Sequence[ExperimentRecord],
    epsilon: float = 1.0,
    form: DesignForm = DesignForm.FULL,
) -> CompressionLaw | RuntimeLaw:
    """Fit a law to experiment records; thin wrapper over the two steps above.

    For the ablation forms the missing exponent is pinned to 0 in the
    returned :class:`CompressionLaw`, so ``evaluate`` on the result equals
    the corresponding ablation formula exactly.  ``DesignForm.RUNTIME``
    returns a :class:`RuntimeLaw` with ``c = exp(intercept)``.

    Emits a :class:`FeasibilityWarning` per fitted exponent whose sign
    contradicts the records' metric kind.
    """
    x, y = build_design(records, epsilon=epsilon, form=form)
    coef, stats = ols_fit(x, y, column_names=_COLUMN_NAMES[form])
    metric = records[0].metric

    if form is DesignForm.RUNTIME:
        return RuntimeLaw(c=math.exp(coef[0]), beta=float(coef[1]), stats=stats)

    if form is DesignForm.FULL:
        law = CompressionLaw(float(coef[0]), float(coef[1]), float(coef[2]), metric, epsilon, stats)
    elif form is DesignForm.RATIO_ONLY:
        law = CompressionLaw(float(coef[0]), float(coef[1]), 0.0, metric, epsilon, stats)
    else:
        law = CompressionLaw(float(coef[0]), 0.0, float(coef[1]), metric, epsilon, stats)

    fitted = FITTED_SIGN_EXPONENTS[form]
    for violation in check_feasibility(law):
        if violation.exponent in fitted:
            warnings.warn(str(violation), FeasibilityWarning, stacklevel=2)
    return law


def strip_stats(law: CompressionLaw | RuntimeLaw) -> CompressionLaw | RuntimeLaw:
    """Copy of a law without its fit statistics (handy for value comparisons)."""
    return replace(law, stats=None)
