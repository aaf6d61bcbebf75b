"""Maximum-likelihood binary logistic regression with Wald inference.

Newton/IRLS with step-halving: standard errors need the observed
information anyway, and at vocabulary sizes of a few hundred columns a
dense Cholesky solve is both fast and deterministic. An optional ridge
penalty (non-intercept coefficients only) stabilizes separated fits.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .emotions import pair_sort_key
from .errors import (
    ConstantColumnError,
    DegenerateOutcomeError,
    NotConvergedError,
    SeparationDetectedError,
)
from .pairfeat import DesignMatrix, PairVocabulary

SEPARATION_BETA_LIMIT = 30.0

MAX_STEP_HALVINGS = 10

CORRECTIONS = ("none", "bonferroni")


@dataclass
class FitConfig:
    max_iterations: int = 100
    tolerance: float = 1e-8
    ridge: float = 0.0
    alpha: float = 0.05
    correction: str = "none"

    def __post_init__(self):
        if self.tolerance <= 0:
            raise ValueError("tolerance must be > 0")
        if self.ridge < 0:
            raise ValueError("ridge must be >= 0")
        if not 0 < self.alpha < 1:
            raise ValueError("alpha must be in (0, 1)")
        if self.correction not in CORRECTIONS:
            raise ValueError(f"unknown correction {self.correction!r}")


@dataclass
class FitResult:
    """Per-column Wald statistics; index 0 is the intercept."""

    coefficients: np.ndarray
    standard_errors: np.ndarray
    z_values: np.ndarray
    p_values: np.ndarray
    odds_ratios: np.ndarray
    log_likelihood: float
    converged: bool
    iterations: int
    separation_flag: bool = False
    config: FitConfig = field(default_factory=FitConfig)


def std_normal_cdf(z: float) -> float:
    """Standard normal CDF via the complementary error function."""
    return 0.5 * math.erfc(-z / math.sqrt(2.0))


def _log_likelihood(eta: np.ndarray, y: np.ndarray) -> float:
    # y*eta - log(1 + exp(eta)), evaluated stably for large |eta|
    return float(np.sum(y * eta - np.logaddexp(0.0, eta)))


def _objective(X: np.ndarray, y: np.ndarray, beta: np.ndarray, ridge: float) -> float:
    value = _log_likelihood(X @ beta, y)
    if ridge > 0:
        value -= 0.5 * ridge * float(np.dot(beta[1:], beta[1:]))
    return value


def log_likelihood_gradient(
    X: np.ndarray, y: np.ndarray, beta: np.ndarray, ridge: float = 0.0
) -> np.ndarray:
    """Analytic gradient of the (penalized) log-likelihood at beta."""
    p = _sigmoid(X @ beta)
    grad = X.T @ (y - p)
    if ridge > 0:
        grad[1:] -= ridge * beta[1:]
    return grad


def _sigmoid(eta: np.ndarray) -> np.ndarray:
    out = np.empty_like(eta, dtype=float)
    positive = eta >= 0
    out[positive] = 1.0 / (1.0 + np.exp(-eta[positive]))
    exp_eta = np.exp(eta[~positive])
    out[~positive] = exp_eta / (1.0 + exp_eta)
    return out


def _validate_design(X: np.ndarray, y: np.ndarray) -> None:
    if X.shape[0] == 0:
        raise DegenerateOutcomeError("design matrix has no rows")
    classes = np.unique(y)
    if classes.size < 2:
        raise DegenerateOutcomeError(
            f"outcome vector contains a single class ({int(classes[0]) if classes.size else 'empty'})"
        )
    for j in range(1, X.shape[1]):
        column = X[:, j]
        if np.all(column == column[0]):
            raise ConstantColumnError(j - 1, f"feature column {j - 1} is constant {column[0]:g}")


def _penalized_hessian(X: np.ndarray, p: np.ndarray, ridge: float) -> np.ndarray:
    w = p * (1.0 - p)
    H = X.T @ (X * w[:, None])
    if ridge > 0:
        idx = np.arange(1, X.shape[1])
        H[idx, idx] += ridge
    return H


def fit_logistic(
    matrix: DesignMatrix,
    config: FitConfig | None = None,
    *,
    trace: list | None = None,
) -> FitResult:
    """Fit y ~ intercept + pair features by Newton/IRLS.

    Raises DegenerateOutcomeError for a single-class outcome,
    ConstantColumnError for a constant feature column, and
    SeparationDetectedError when the MLE diverges (coefficients past
    +/-30, or a singular Hessian at ridge=0). A fit that hits the
    iteration cap raises NotConvergedError carrying the partial result.
    ``trace``, when given, collects the objective after every accepted
    step.
    """
    config = config or FitConfig()
    X = matrix.to_dense(intercept=True)
    y = np.asarray(matrix.y, dtype=float)
    _validate_design(X, y)

    beta = np.zeros(X.shape[1])
    ybar = float(np.mean(y))
    beta[0] = math.log(ybar / (1.0 - ybar))

    objective = _objective(X, y, beta, config.ridge)
    converged = False
    iterations = 0
    for iterations in range(1, config.max_iterations + 1):
        p = _sigmoid(X @ beta)
        grad = X.T @ (y - p)
        if config.ridge > 0:
            grad[1:] -= config.ridge * beta[1:]
        H = _penalized_hessian(X, p, config.ridge)
        try:
            np.linalg.cholesky(H)
            delta = np.linalg.solve(H, grad)
        except np.linalg.LinAlgError:
            hint = " (consider a small --ridge)" if config.ridge == 0 else ""
            raise SeparationDetectedError(
                f"Hessian is numerically singular; data may be separated{hint}"
            ) from None

        # step-halving keeps the objective nondecreasing; a rejected step
        # at t=2^-10 means the gradient is numerically zero
        step = 1.0
        accepted = objective
        for _ in range(MAX_STEP_HALVINGS + 1):
            candidate = beta + step * delta
            value = _objective(X, y, candidate, config.ridge)
            if value >= objective:
                beta = candidate
                accepted = value
                break
            step *= 0.5
        if trace is not None:
            trace.append(accepted)
        if float(np.max(np.abs(beta))) > SEPARATION_BETA_LIMIT:
            raise SeparationDetectedError(
                f"coefficient magnitude exceeded {SEPARATION_BETA_LIMIT:g}; data may be "
                "separated (consider a small --ridge)"
            )
        if abs(accepted - objective) < config.tolerance:
            objective = accepted
            converged = True
            break
        objective = accepted

    result = _wald_result(X, y, beta, objective, converged, iterations, config)
    if not converged:
        raise NotConvergedError(
            f"IRLS did not converge in {config.max_iterations} iterations", result
        )
    return result


def _wald_result(X, y, beta, objective, converged, iterations, config) -> FitResult:
    p = _sigmoid(X @ beta)
    H = _penalized_hessian(X, p, config.ridge)
    try:
        covariance = np.linalg.inv(H)
    except np.linalg.LinAlgError:
        raise SeparationDetectedError(
            "information matrix singular at the optimum"
            + (" (consider a small --ridge)" if config.ridge == 0 else "")
        ) from None
    se = np.sqrt(np.clip(np.diag(covariance), 0.0, None))
    with np.errstate(divide="ignore", invalid="ignore"):
        z = np.where(se > 0, beta / se, np.inf * np.sign(beta))
    p_values = np.array([2.0 * (1.0 - std_normal_cdf(abs(value))) for value in z])
    return FitResult(
        coefficients=beta,
        standard_errors=se,
        z_values=z,
        p_values=np.clip(p_values, 0.0, 1.0),
        odds_ratios=np.exp(beta),
        log_likelihood=objective,
        converged=converged,
        iterations=iterations,
        separation_flag=bool(np.max(np.abs(beta)) > SEPARATION_BETA_LIMIT),
        config=config,
    )


@dataclass
class PairEffect:
    pair: tuple[str, str]
    coefficient: float
    standard_error: float
    z: float
    p: float
    odds_ratio: float


def significant_pairs(
    fit: FitResult,
    vocabulary: PairVocabulary,
    alpha: float | None = None,
    correction: str | None = None,
) -> list[PairEffect]:
    """Pair rows with p below the (corrected) significance level.

    Sorted by p ascending, ties by canonical pair order. Bonferroni
    divides alpha by the number of non-intercept columns.
    """
    if not fit.converged:
        raise ValueError("significant_pairs requires a converged fit")
    alpha = fit.config.alpha if alpha is None else alpha
    correction = fit.config.correction if correction is None else correction
    if correction not in CORRECTIONS:
        raise ValueError(f"unknown correction {correction!r}")
    n_features = len(fit.coefficients) - 1
    threshold = alpha / n_features if correction == "bonferroni" else alpha
    rows = [
        PairEffect(
            pair=vocabulary.pairs[j],
            coefficient=float(fit.coefficients[j + 1]),
            standard_error=float(fit.standard_errors[j + 1]),
            z=float(fit.z_values[j + 1]),
            p=float(fit.p_values[j + 1]),
            odds_ratio=float(fit.odds_ratios[j + 1]),
        )
        for j in range(n_features)
        if fit.p_values[j + 1] < threshold
    ]
    rows.sort(key=lambda row: (row.p, pair_sort_key(row.pair)))
    return rows


def fit_marginal(
    matrix: DesignMatrix,
    vocabulary: PairVocabulary,
    config: FitConfig | None = None,
) -> list[PairEffect]:
    """One single-feature model per pair (comparison mode, not the default)."""
    config = config or FitConfig()
    dense = matrix.to_dense(intercept=False)
    effects = []
    for j, pair in enumerate(vocabulary.pairs):
        single = DesignMatrix.from_dense(dense[:, [j]], matrix.y, matrix.post_ids)
        fit = fit_logistic(single, config)
        effects.append(
            PairEffect(
                pair=pair,
                coefficient=float(fit.coefficients[1]),
                standard_error=float(fit.standard_errors[1]),
                z=float(fit.z_values[1]),
                p=float(fit.p_values[1]),
                odds_ratio=float(fit.odds_ratios[1]),
            )
        )
    effects.sort(key=lambda row: (row.p, pair_sort_key(row.pair)))
    return effects


def write_results_csv(fit: FitResult, vocabulary: PairVocabulary, destination) -> None:
    """Full coefficient table: intercept first, then features by p ascending."""
    order = sorted(
        range(len(vocabulary)),
        key=lambda j: (fit.p_values[j + 1], pair_sort_key(vocabulary.pairs[j])),
    )
    with open(destination, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["pair", "coef", "se", "z", "p", "odds_ratio"])
        writer.writerow(_result_row("(intercept)", fit, 0))
        for j in order:
            writer.writerow(_result_row(f"{vocabulary.pairs[j][0]}-{vocabulary.pairs[j][1]}", fit, j + 1))


def _result_row(name: str, fit: FitResult, idx: int) -> list:
    return [
        name,
        f"{fit.coefficients[idx]:.10g}",
        f"{fit.standard_errors[idx]:.10g}",
        f"{fit.z_values[idx]:.10g}",
        f"{fit.p_values[idx]:.10g}",
        f"{fit.odds_ratios[idx]:.10g}",
    ]
