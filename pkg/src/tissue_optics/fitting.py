"""Nonlinear least-squares refitting of constituent absorption spectra.

Given a measured spectrum and a model family (Gaussian sum, shared-rate
Fourier series, or power law), finds coefficients minimising the
normalised mean square error

    NMSE = ||X - m(lam)||^2 / ||X||^2

via damped Gauss-Newton iteration (Levenberg-Marquardt): solve
``(J'J + damping * diag(J'J)) step = -J' r`` and accept the step only if
the residual norm drops, multiplying the damping by 10 on rejection and
dividing by 10 on acceptance (initial 1e-3). Minimising the NMSE
numerator in ordinary least-squares form is the same argmin with a
simpler Jacobian. The NMSE trace over accepted steps is therefore
non-increasing by construction.

Initialisation matters: the all-zeros start (a=0, b=0, c=1, w=0,
selectable as ``"algorithm1_default"``) leaves Gaussian terms centred at
0 nm with underflowed gradients over a 400-1000 nm grid, and for the
Fourier family zeroes the sine/rate gradients while the cosine columns
collapse onto the constant term, so it is reproducibly degenerate and
raises :class:`DegenerateFitError`. The
default ``"auto_peaks"`` seeds Gaussian terms on the largest local maxima
of the data, scans the Fourier rate w against linear least squares, and
seeds the power law from a log-log regression.

Two front ends share the engine: the :func:`fit` function over a
:class:`FitProblem`, and sklearn-compatible regressors
(:class:`GaussianSumRegressor` and friends) for pipeline composition.
Each fit owns its state; independent fits may run concurrently.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin

from . import constituents
from .constituents import FourierSeriesModel, GaussianSumModel

DEFAULT_NMSE_THRESHOLD = 1e-3
DEFAULT_MAX_ITERATIONS = 500
DEFAULT_INITIAL_DAMPING = 1e-3

_DAMPING_CAP = 1e15
_DAMPING_FLOOR = 1e-12
_SQRT_LN2 = math.sqrt(math.log(2.0))


class UndefinedNormalizationError(ValueError):
    """NMSE is undefined because the data vector has zero norm."""


class InsufficientDataError(ValueError):
    """Too few samples for the number of free parameters."""


class DegenerateFitError(RuntimeError):
    """The normal equations are rank-deficient at the starting point."""

    def __init__(self, parameters: Sequence[str], reason: str):
        self.parameters = tuple(parameters)
        self.reason = reason
        super().__init__(
            f"degenerate fit ({reason}): parameters {', '.join(self.parameters)}"
        )


class SpectrumFormatError(ValueError):
    """Malformed spectrum CSV; carries the offending line number."""

    def __init__(self, message: str, line: int):
        self.line = line
        super().__init__(f"line {line}: {message}")


@dataclass(frozen=True, eq=False)
class SampledSpectrum:
    """Ordered (wavelength [nm], value [cm^-1]) samples of a spectrum."""

    wavelengths_nm: np.ndarray
    values: np.ndarray
    label: str = ""

    def __post_init__(self) -> None:
        lam = np.asarray(self.wavelengths_nm, dtype=float)
        val = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "wavelengths_nm", lam)
        object.__setattr__(self, "values", val)
        if lam.ndim != 1 or val.ndim != 1 or lam.size != val.size:
            raise ValueError("spectrum needs matching 1-D wavelength and value arrays")
        if lam.size == 0:
            raise ValueError("spectrum is empty")
        if not np.all(np.isfinite(lam)):
            raise ValueError("wavelengths must be finite")
        if not np.all(np.isfinite(val)):
            raise ValueError("spectrum values must be finite")
        if lam.size > 1 and not np.all(np.diff(lam) > 0):
            raise ValueError("wavelengths must be strictly increasing")

    def __len__(self) -> int:
        return int(self.wavelengths_nm.size)


def nmse(data, model_values) -> float:
    """Normalised mean square error sum((x-m)^2) / sum(x^2)."""
    x = np.asarray(data.values if isinstance(data, SampledSpectrum) else data, dtype=float)
    m = np.asarray(model_values, dtype=float)
    if x.shape != m.shape:
        raise ValueError(f"length mismatch: data {x.shape} vs model {m.shape}")
    norm2 = float(x @ x)
    if norm2 == 0.0:
        raise UndefinedNormalizationError("all-zero data has no NMSE normalisation")
    diff = x - m
    return float(diff @ diff) / norm2


# --------------------------------------------------------------------------
# model families


class GaussianSumFamily:
    """k Gaussian terms; parameter vector [a1, b1, c1, ..., ak, bk, ck]."""

    def __init__(self, n_terms: int):
        if n_terms < 1:
            raise ValueError("Gaussian sum needs at least one term")
        self.n_terms = int(n_terms)
        self.n_params = 3 * self.n_terms
        self.param_names = tuple(
            f"{prefix}{i}" for i in range(1, self.n_terms + 1) for prefix in ("a", "b", "c")
        )

    def describe(self) -> dict:
        return {"family": "gaussian_sum", "n_terms": self.n_terms}

    @staticmethod
    def _split(theta: np.ndarray):
        terms = np.asarray(theta, dtype=float).reshape(-1, 3)
        widths = np.where(terms[:, 2] == 0.0, 1e-300, terms[:, 2])
        return terms[:, 0], terms[:, 1], widths

    def model(self, theta: np.ndarray, lam: np.ndarray) -> np.ndarray:
        a, b, c = self._split(theta)
        z = (lam[:, None] - b[None, :]) / c[None, :]
        return np.exp(-z * z) @ a

    def jacobian(self, theta: np.ndarray, lam: np.ndarray) -> np.ndarray:
        a, b, c = self._split(theta)
        z = (lam[:, None] - b[None, :]) / c[None, :]
        e = np.exp(-z * z)
        J = np.empty((lam.size, self.n_params))
        J[:, 0::3] = e
        J[:, 1::3] = a[None, :] * e * 2.0 * z / c[None, :]
        J[:, 2::3] = a[None, :] * e * 2.0 * z * z / c[None, :]
        return J

    def default_init(self, lam: np.ndarray, y: np.ndarray) -> np.ndarray:
        return _gaussian_peak_seed(lam, y, self.n_terms)

    def algorithm1_init(self) -> np.ndarray:
        return np.tile([0.0, 0.0, 1.0], self.n_terms)

    def canonicalize(self, theta: np.ndarray) -> np.ndarray:
        terms = np.asarray(theta, dtype=float).reshape(-1, 3).copy()
        terms[:, 2] = np.abs(terms[:, 2])  # the model is even in the width
        order = np.lexsort((terms[:, 0], terms[:, 1]))  # by center, then amplitude
        return terms[order].ravel()

    def coefficients(self, theta: np.ndarray) -> dict[str, float]:
        return {name: float(v) for name, v in zip(self.param_names, theta)}


class FourierSeriesFamily:
    """Shared-rate Fourier series; parameter vector [a0, a1..ak, b1..bk, w]."""

    def __init__(self, n_harmonics: int = 7):
        if n_harmonics < 1:
            raise ValueError("Fourier series needs at least one harmonic")
        self.n_harmonics = int(n_harmonics)
        self.n_params = 2 * self.n_harmonics + 2
        self.param_names = (
            ("a0",)
            + tuple(f"a{i}" for i in range(1, self.n_harmonics + 1))
            + tuple(f"b{i}" for i in range(1, self.n_harmonics + 1))
            + ("w",)
        )

    def describe(self) -> dict:
        return {"family": "fourier", "n_harmonics": self.n_harmonics}

    def _split(self, theta: np.ndarray):
        theta = np.asarray(theta, dtype=float)
        k = self.n_harmonics
        return theta[0], theta[1 : 1 + k], theta[1 + k : 1 + 2 * k], theta[-1]

    def model(self, theta: np.ndarray, lam: np.ndarray) -> np.ndarray:
        a0, a, b, w = self._split(theta)
        phase = np.outer(lam, np.arange(1, self.n_harmonics + 1)) * w
        return a0 + np.cos(phase) @ a + np.sin(phase) @ b

    def jacobian(self, theta: np.ndarray, lam: np.ndarray) -> np.ndarray:
        a0, a, b, w = self._split(theta)
        k = self.n_harmonics
        ilam = np.outer(lam, np.arange(1, k + 1))
        phase = ilam * w
        cos, sin = np.cos(phase), np.sin(phase)
        J = np.empty((lam.size, self.n_params))
        J[:, 0] = 1.0
        J[:, 1 : 1 + k] = cos
        J[:, 1 + k : 1 + 2 * k] = sin
        J[:, -1] = (-sin * ilam) @ a + (cos * ilam) @ b
        return J

    def default_init(self, lam: np.ndarray, y: np.ndarray) -> np.ndarray:
        return _fourier_rate_scan_seed(lam, y, self.n_harmonics)

    def algorithm1_init(self) -> np.ndarray:
        return np.zeros(self.n_params)

    def canonicalize(self, theta: np.ndarray) -> np.ndarray:
        theta = np.asarray(theta, dtype=float).copy()
        if theta[-1] < 0:  # (b, w) -> (-b, -w) leaves the model unchanged
            theta[-1] = -theta[-1]
            k = self.n_harmonics
            theta[1 + k : 1 + 2 * k] = -theta[1 + k : 1 + 2 * k]
        return theta

    def coefficients(self, theta: np.ndarray) -> dict[str, float]:
        return {name: float(v) for name, v in zip(self.param_names, theta)}


class PowerLawFamily:
    """amplitude * (lam / lambda_ref)^exponent; vector [amplitude, exponent]."""

    def __init__(self, lambda_ref: float = 550.0):
        if lambda_ref <= 0:
            raise ValueError("reference wavelength must be positive")
        self.lambda_ref = float(lambda_ref)
        self.n_params = 2
        self.param_names = ("amplitude", "exponent")

    def describe(self) -> dict:
        return {"family": "power_law", "lambda_ref": self.lambda_ref}

    def model(self, theta: np.ndarray, lam: np.ndarray) -> np.ndarray:
        amplitude, exponent = float(theta[0]), float(theta[1])
        return amplitude * (lam / self.lambda_ref) ** exponent

    def jacobian(self, theta: np.ndarray, lam: np.ndarray) -> np.ndarray:
        amplitude, exponent = float(theta[0]), float(theta[1])
        ratio = lam / self.lambda_ref
        powered = ratio**exponent
        J = np.empty((lam.size, 2))
        J[:, 0] = powered
        J[:, 1] = amplitude * powered * np.log(ratio)
        return J

    def default_init(self, lam: np.ndarray, y: np.ndarray) -> np.ndarray:
        positive = y > 0
        if np.count_nonzero(positive) >= 2:
            slope, intercept = np.polyfit(
                np.log(lam[positive] / self.lambda_ref), np.log(y[positive]), 1
            )
            return np.array([math.exp(intercept), slope])
        return np.array([max(float(np.max(np.abs(y), initial=0.0)), 1.0), -1.0])

    # the all-zeros start has no meaning for this family; reuse the log-log seed
    def algorithm1_init(self) -> np.ndarray:
        return np.array([1.0, -1.0])

    def canonicalize(self, theta: np.ndarray) -> np.ndarray:
        return np.asarray(theta, dtype=float).copy()

    def coefficients(self, theta: np.ndarray) -> dict[str, float]:
        return {name: float(v) for name, v in zip(self.param_names, theta)}


ModelFamily = GaussianSumFamily | FourierSeriesFamily | PowerLawFamily


def _gaussian_peak_seed(lam: np.ndarray, y: np.ndarray, n_terms: int) -> np.ndarray:
    """Centres on the largest local maxima; width from the half-height span."""
    n = lam.size
    peaks = [
        i
        for i in range(n)
        if (i == 0 or y[i] > y[i - 1]) and (i == n - 1 or y[i] > y[i + 1])
    ]
    peaks.sort(key=lambda i: y[i], reverse=True)
    span = float(lam[-1] - lam[0]) or 1.0
    fallback_width = span / (4.0 * n_terms)

    terms = []
    for i in peaks[:n_terms]:
        height = y[i]
        half = height / 2.0
        left = i
        while left > 0 and y[left - 1] > half:
            left -= 1
        right = i
        while right < n - 1 and y[right + 1] > half:
            right += 1
        hwhm = max(float(lam[right] - lam[left]) / 2.0, float(span) / (2.0 * n))
        width = hwhm / _SQRT_LN2 if height > 0 else fallback_width
        amplitude = height if height > 0 else max(float(np.ptp(y)), 1.0)
        terms.append((amplitude, float(lam[i]), width))

    missing = n_terms - len(terms)
    if missing > 0:
        fillers = np.linspace(lam[0], lam[-1], missing + 2)[1:-1]
        fill_amp = max(float(np.max(y, initial=0.0)) / 4.0, 1.0)
        for center in fillers:
            terms.append((fill_amp, float(center), span / (2.0 * n_terms)))
    return np.array(terms).ravel()


def _fourier_rate_scan_seed(lam: np.ndarray, y: np.ndarray, n_harmonics: int) -> np.ndarray:
    """Scan w candidates, solving the then-linear coefficients for each."""
    span = float(lam[-1] - lam[0]) or 1.0
    base = 2.0 * math.pi / span
    candidates = base * np.linspace(0.05, 4.0, 160)
    indices = np.arange(1, n_harmonics + 1)

    best = None
    for w in candidates:
        phase = np.outer(lam, indices) * w
        design = np.hstack([np.ones((lam.size, 1)), np.cos(phase), np.sin(phase)])
        coef, *_ = np.linalg.lstsq(design, y, rcond=None)
        resid = design @ coef - y
        sse = float(resid @ resid)
        if best is None or sse < best[0]:
            best = (sse, w, coef)
    _, w, coef = best
    return np.concatenate([coef, [w]])


# --------------------------------------------------------------------------
# damped Gauss-Newton engine


def _check_degenerate(family: ModelFamily, theta: np.ndarray, lam: np.ndarray) -> None:
    J = family.jacobian(theta, lam)
    names = family.param_names
    norms = np.linalg.norm(J, axis=0)
    dead = [names[i] for i in range(len(names)) if norms[i] == 0.0]
    if dead:
        raise DegenerateFitError(dead, reason="zero gradient at the starting point")
    normalized = J / norms
    correlation = normalized.T @ normalized
    involved: set[str] = set()
    p = len(names)
    for i in range(p):
        for j in range(i + 1, p):
            if abs(correlation[i, j]) >= 1.0 - 1e-12:
                involved.update((names[i], names[j]))
    if involved:
        ordered = [name for name in names if name in involved]
        raise DegenerateFitError(ordered, reason="collinear gradients at the starting point")


def _damped_least_squares(
    family: ModelFamily,
    lam: np.ndarray,
    y: np.ndarray,
    theta0: np.ndarray,
    *,
    nmse_threshold: float,
    max_iterations: int,
    initial_damping: float,
):
    y_norm2 = float(y @ y)
    theta = np.asarray(theta0, dtype=float).copy()
    with np.errstate(all="ignore"):
        resid = family.model(theta, lam) - y
    if not np.all(np.isfinite(resid)):
        raise ValueError("model is not finite at the initial parameters")
    sse = float(resid @ resid)
    current = sse / y_norm2
    trace = [current]

    _check_degenerate(family, theta, lam)

    damping = initial_damping
    iterations = 0
    J = gradient = normal = diag = None
    need_jacobian = True

    while current >= nmse_threshold and iterations < max_iterations and damping < _DAMPING_CAP:
        if need_jacobian:
            J = family.jacobian(theta, lam)
            gradient = J.T @ resid
            normal = J.T @ J
            diag = np.diag(normal).copy()
            diag = np.maximum(diag, diag.max() * 1e-14)
            need_jacobian = False
        iterations += 1
        system = normal + damping * np.diag(diag)
        try:
            step = np.linalg.solve(system, -gradient)
        except np.linalg.LinAlgError:
            step, *_ = np.linalg.lstsq(system, -gradient, rcond=None)
        candidate = theta + step
        with np.errstate(all="ignore"):
            cand_resid = family.model(candidate, lam) - y
        if np.all(np.isfinite(cand_resid)):
            cand_sse = float(cand_resid @ cand_resid)
        else:
            cand_sse = math.inf
        if cand_sse < sse:
            theta, resid, sse = candidate, cand_resid, cand_sse
            current = sse / y_norm2
            trace.append(current)
            damping = max(damping / 10.0, _DAMPING_FLOOR)
            need_jacobian = True
            if float(np.linalg.norm(step)) <= 1e-15 * (1.0 + float(np.linalg.norm(theta))):
                break
        else:
            damping *= 10.0

    converged = current < nmse_threshold
    return theta, trace, iterations, converged


# --------------------------------------------------------------------------
# problem/report front end


@dataclass(frozen=True, eq=False)
class FitProblem:
    data: SampledSpectrum
    family: ModelFamily
    nmse_threshold: float = DEFAULT_NMSE_THRESHOLD
    max_iterations: int = DEFAULT_MAX_ITERATIONS
    init: str | Sequence[float] = "auto_peaks"
    initial_damping: float = DEFAULT_INITIAL_DAMPING

    def __post_init__(self) -> None:
        if self.nmse_threshold <= 0:
            raise ValueError("nmse_threshold must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")
        if self.initial_damping <= 0:
            raise ValueError("initial_damping must be positive")


@dataclass(frozen=True, eq=False)
class FitReport:
    """Outcome of a fit: canonical coefficients plus convergence bookkeeping."""

    family: dict
    coefficients: dict[str, float]
    params: np.ndarray
    nmse: float
    iterations: int
    converged: bool
    nmse_trace: tuple[float, ...]
    residuals: SampledSpectrum

    def to_json_dict(self) -> dict:
        return {
            "family": self.family,
            "coefficients": self.coefficients,
            "nmse": self.nmse,
            "iterations": self.iterations,
            "converged": self.converged,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2) + "\n"


def _resolve_init(problem: FitProblem, lam: np.ndarray, y: np.ndarray) -> np.ndarray:
    family = problem.family
    init = problem.init
    if isinstance(init, str):
        if init == "auto_peaks":
            return family.default_init(lam, y)
        if init == "algorithm1_default":
            return family.algorithm1_init()
        raise ValueError(
            f"init must be 'auto_peaks', 'algorithm1_default' or a coefficient sequence, got {init!r}"
        )
    theta0 = np.asarray(init, dtype=float)
    if theta0.shape != (family.n_params,):
        raise ValueError(
            f"seeded init needs {family.n_params} values for {family.describe()}, got shape {theta0.shape}"
        )
    return theta0


def fit(problem: FitProblem) -> FitReport:
    """Run the damped-least-squares fit for a problem; deterministic."""
    spectrum = problem.data
    family = problem.family
    lam = spectrum.wavelengths_nm
    y = spectrum.values
    if len(spectrum) < 2 * family.n_params:
        raise InsufficientDataError(
            f"{family.n_params} free parameters need at least {2 * family.n_params} samples, "
            f"got {len(spectrum)}"
        )
    if float(y @ y) == 0.0:
        raise UndefinedNormalizationError("all-zero data has no NMSE normalisation")

    theta0 = _resolve_init(problem, lam, y)
    theta, trace, iterations, converged = _damped_least_squares(
        family,
        lam,
        y,
        theta0,
        nmse_threshold=problem.nmse_threshold,
        max_iterations=problem.max_iterations,
        initial_damping=problem.initial_damping,
    )
    theta = family.canonicalize(theta)
    model_values = family.model(theta, lam)
    final_nmse = nmse(y, model_values)
    residuals = SampledSpectrum(lam, y - model_values, label="residuals")
    return FitReport(
        family=family.describe(),
        coefficients=family.coefficients(theta),
        params=theta,
        nmse=final_nmse,
        iterations=iterations,
        converged=converged,
        nmse_trace=tuple(trace),
        residuals=residuals,
    )


# --------------------------------------------------------------------------
# constituent refits

REFITTABLE_CONSTITUENTS = ("oBlood", "dBlood", "water", "fat")
REQUIRED_COVERAGE_NM = (450.0, 950.0)


def _family_for_constituent(name: str) -> ModelFamily:
    model = constituents.CONSTITUENT_MODELS[name]
    if isinstance(model, GaussianSumModel):
        return GaussianSumFamily(len(model.terms))
    if isinstance(model, FourierSeriesModel):
        return FourierSeriesFamily(len(model.harmonics))
    raise ValueError(f"constituent {name!r} has a closed-form model and is not refittable")


def embedded_params(name: str) -> np.ndarray:
    """Bundled coefficients of a refittable constituent as a parameter vector."""
    model = constituents.CONSTITUENT_MODELS[constituents.resolve_constituent(name)]
    if isinstance(model, GaussianSumModel):
        return np.array([v for term in model.terms for v in term])
    if isinstance(model, FourierSeriesModel):
        a = [pair[0] for pair in model.harmonics]
        b = [pair[1] for pair in model.harmonics]
        return np.array([model.a0, *a, *b, model.w])
    raise ValueError(f"constituent {name!r} has a closed-form model and is not refittable")


def refit_constituent(
    name: str,
    data: SampledSpectrum,
    *,
    init: str | Sequence[float] = "embedded",
    nmse_threshold: float = DEFAULT_NMSE_THRESHOLD,
    max_iterations: int = DEFAULT_MAX_ITERATIONS,
) -> FitReport:
    """Refit one constituent's model family to a measured spectrum.

    The family and term count match the bundled registry (oBlood: 5
    Gaussians, dBlood: 4, fat: 5, water: 7-harmonic Fourier), so the report
    reads side-by-side against the bundled coefficients. The default
    ``"embedded"`` init warm-starts from those coefficients; broad
    background terms are not identifiable from 400-1000 nm data alone, so a
    cold start cannot recover them. Data must cover at least 450-950 nm.
    """
    key = constituents.resolve_constituent(name)
    if key not in REFITTABLE_CONSTITUENTS:
        raise ValueError(
            f"constituent {key!r} is not refittable; choose one of {REFITTABLE_CONSTITUENTS}"
        )
    lo, hi = REQUIRED_COVERAGE_NM
    if data.wavelengths_nm[0] > lo or data.wavelengths_nm[-1] < hi:
        raise InsufficientDataError(
            f"refit data must cover at least [{lo:g}, {hi:g}] nm, got "
            f"[{data.wavelengths_nm[0]:g}, {data.wavelengths_nm[-1]:g}]"
        )
    family = _family_for_constituent(key)
    resolved_init = embedded_params(key) if isinstance(init, str) and init == "embedded" else init
    problem = FitProblem(
        data=data,
        family=family,
        nmse_threshold=nmse_threshold,
        max_iterations=max_iterations,
        init=resolved_init,
    )
    return fit(problem)


# --------------------------------------------------------------------------
# spectrum CSV interchange

SPECTRUM_CSV_HEADER = "lambda_nm,mu_a_cm1"


def read_spectrum_csv(path: str | Path, label: str = "") -> SampledSpectrum:
    """Read a two-column spectrum CSV (header ``lambda_nm,mu_a_cm1``).

    Wavelengths must be strictly increasing; errors carry the 1-based line
    number of the offending row.
    """
    lam: list[float] = []
    values: list[float] = []
    with open(path, "r", encoding="utf-8") as handle:
        for line_no, raw in enumerate(handle, start=1):
            text = raw.strip()
            if not text:
                continue
            if line_no == 1:
                if text.replace(" ", "") != SPECTRUM_CSV_HEADER:
                    raise SpectrumFormatError(
                        f"expected header {SPECTRUM_CSV_HEADER!r}, got {text!r}", line_no
                    )
                continue
            parts = text.split(",")
            if len(parts) != 2:
                raise SpectrumFormatError(f"expected 2 comma-separated fields, got {len(parts)}", line_no)
            try:
                x, v = float(parts[0]), float(parts[1])
            except ValueError:
                raise SpectrumFormatError(f"could not parse numbers from {text!r}", line_no) from None
            if not (math.isfinite(x) and math.isfinite(v)):
                raise SpectrumFormatError("values must be finite", line_no)
            if lam and x <= lam[-1]:
                raise SpectrumFormatError(
                    f"wavelengths must be strictly increasing ({x:g} after {lam[-1]:g})", line_no
                )
            lam.append(x)
            values.append(v)
    if not lam:
        raise SpectrumFormatError("no data rows", 1)
    return SampledSpectrum(np.array(lam), np.array(values), label=label or str(path))


# --------------------------------------------------------------------------
# sklearn-style estimators


def _as_curve_x(X) -> np.ndarray:
    x = np.asarray(X, dtype=float)
    if x.ndim == 2 and x.shape[1] == 1:
        x = x[:, 0]
    if x.ndim != 1:
        raise ValueError(f"X must be a 1-D wavelength array or an (n, 1) column, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise ValueError("wavelengths must be finite")
    return x


class _CurveRegressor(BaseEstimator, RegressorMixin):
    """Shared fit/predict machinery for the spectral model families."""

    def _make_family(self) -> ModelFamily:
        raise NotImplementedError

    def _resolved_init(self) -> str | Sequence[float]:
        return self.init

    def fit(self, X, y):
        lam = _as_curve_x(X)
        values = np.asarray(y, dtype=float)
        if values.shape != lam.shape:
            raise ValueError("X and y must have the same length")
        order = np.argsort(lam, kind="stable")
        lam, values = lam[order], values[order]
        if lam.size > 1 and np.any(np.diff(lam) == 0):
            raise ValueError("duplicate wavelengths in X")
        problem = FitProblem(
            data=SampledSpectrum(lam, values, label="training data"),
            family=self._make_family(),
            nmse_threshold=self.nmse_tol,
            max_iterations=self.max_iter,
            init=self._resolved_init(),
            initial_damping=self.damping,
        )
        report = fit(problem)
        self.family_ = problem.family
        self.report_ = report
        self.params_ = report.params
        self.coefficients_ = report.coefficients
        self.nmse_ = report.nmse
        self.n_iter_ = report.iterations
        self.converged_ = report.converged
        self.nmse_trace_ = report.nmse_trace
        return self

    def predict(self, X):
        if not hasattr(self, "params_"):
            raise RuntimeError("estimator is not fitted; call fit(X, y) first")
        return self.family_.model(self.params_, _as_curve_x(X))


class GaussianSumRegressor(_CurveRegressor):
    """Fit a k-term Gaussian sum to a sampled spectrum."""

    def __init__(
        self,
        n_terms: int = 1,
        init: str | Sequence[float] = "auto_peaks",
        nmse_tol: float = DEFAULT_NMSE_THRESHOLD,
        max_iter: int = DEFAULT_MAX_ITERATIONS,
        damping: float = DEFAULT_INITIAL_DAMPING,
    ):
        self.n_terms = n_terms
        self.init = init
        self.nmse_tol = nmse_tol
        self.max_iter = max_iter
        self.damping = damping

    def _make_family(self) -> GaussianSumFamily:
        return GaussianSumFamily(self.n_terms)

    @property
    def amplitudes_(self) -> np.ndarray:
        return self.params_[0::3]

    @property
    def centers_(self) -> np.ndarray:
        return self.params_[1::3]

    @property
    def widths_(self) -> np.ndarray:
        return self.params_[2::3]


class FourierSeriesRegressor(_CurveRegressor):
    """Fit a shared-rate Fourier series to a sampled spectrum."""

    def __init__(
        self,
        n_harmonics: int = 7,
        init: str | Sequence[float] = "auto_peaks",
        nmse_tol: float = DEFAULT_NMSE_THRESHOLD,
        max_iter: int = DEFAULT_MAX_ITERATIONS,
        damping: float = DEFAULT_INITIAL_DAMPING,
    ):
        self.n_harmonics = n_harmonics
        self.init = init
        self.nmse_tol = nmse_tol
        self.max_iter = max_iter
        self.damping = damping

    def _make_family(self) -> FourierSeriesFamily:
        return FourierSeriesFamily(self.n_harmonics)

    @property
    def rate_(self) -> float:
        return float(self.params_[-1])


class PowerLawRegressor(_CurveRegressor):
    """Fit amplitude * (lam/lambda_ref)^exponent to a sampled spectrum."""

    def __init__(
        self,
        lambda_ref: float = 550.0,
        init: str | Sequence[float] = "auto_peaks",
        nmse_tol: float = DEFAULT_NMSE_THRESHOLD,
        max_iter: int = DEFAULT_MAX_ITERATIONS,
        damping: float = DEFAULT_INITIAL_DAMPING,
    ):
        self.lambda_ref = lambda_ref
        self.init = init
        self.nmse_tol = nmse_tol
        self.max_iter = max_iter
        self.damping = damping

    def _make_family(self) -> PowerLawFamily:
        return PowerLawFamily(self.lambda_ref)

    @property
    def amplitude_(self) -> float:
        return float(self.params_[0])

    @property
    def exponent_(self) -> float:
        return float(self.params_[1])
