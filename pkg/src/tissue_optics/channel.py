"""Beer-Lambert channel: slab pathloss, wavelength sweeps, transmission windows.

The loss of an optical signal through a homogeneous tissue slab of
thickness ``delta`` [cm] is ``L = exp((mu_a + mu_s) * delta)``; in power
decibels ``L_dB = (10/ln 10) * (mu_a + mu_s) * delta``. ``absorption``
mode drops the scattering term from the loss (the coefficient is still
reported). Losses are computed in the dB domain first, so thick/turbid
slabs whose linear loss overflows a float simply mark the point
``saturated`` instead of failing.

Everything here is pure and stateless; sweeps over a wavelength grid are
deterministic and may be parallelised externally without changing results.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .tissue import TissuePreset, mu_a_tissue, mu_s_tissue

NEPER_TO_DB = 10.0 / math.log(10.0)

MODE_ABSORPTION = "absorption"
MODE_COMPLETE = "complete"
MODES = (MODE_ABSORPTION, MODE_COMPLETE)

DEFAULT_GRID = (400.0, 1000.0, 1.0)

# exp() overflows just above 709 nepers
_MAX_LINEAR_NEPER = 709.0


class NegativeCoefficientWarning(UserWarning):
    """A negative attenuation coefficient was passed through unclamped."""


@dataclass(frozen=True)
class PathlossPoint:
    """One sweep sample: coefficients [cm^-1] and slab loss at one wavelength."""

    lambda_nm: float
    mu_a: float
    mu_s: float
    loss_db: float
    loss_linear: float
    mode: str
    saturated: bool = False


@dataclass(frozen=True)
class TransmissionWindow:
    """Contiguous wavelength interval [nm] whose loss stays at or below a threshold."""

    lo_nm: float
    hi_nm: float
    threshold_db: float


def _check_mode(mode: str) -> str:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    return mode


def _check_thickness(thickness_cm: float) -> float:
    if not math.isfinite(thickness_cm) or thickness_cm <= 0:
        raise ValueError(f"slab thickness must be positive, got {thickness_cm!r}")
    return float(thickness_cm)


def transmittance(mu_a: float, thickness_cm: float, *, allow_negative: bool = False) -> float:
    """Residual intensity fraction exp(-mu_a * delta) through the slab."""
    thickness_cm = _check_thickness(thickness_cm)
    if not math.isfinite(mu_a):
        raise ValueError("absorption coefficient must be finite")
    if mu_a < 0:
        if not allow_negative:
            raise ValueError(f"absorption coefficient must be non-negative, got {mu_a!r}")
        warnings.warn(
            "negative absorption coefficient passed through; transmittance exceeds 1",
            NegativeCoefficientWarning,
            stacklevel=2,
        )
    return math.exp(-mu_a * thickness_cm)


def pathloss(
    mu_a: float,
    mu_s: float,
    thickness_cm: float,
    mode: str = MODE_COMPLETE,
    *,
    lambda_nm: float = float("nan"),
    allow_negative: bool = False,
) -> PathlossPoint:
    """Slab pathloss for one pair of coefficients [cm^-1].

    ``absorption`` mode excludes mu_s from the loss but reports it. The dB
    value is always finite; ``loss_linear`` saturates to inf past the float
    range.
    """
    _check_mode(mode)
    thickness_cm = _check_thickness(thickness_cm)
    mu_a, mu_s = float(mu_a), float(mu_s)
    if not (math.isfinite(mu_a) and math.isfinite(mu_s)):
        raise ValueError("attenuation coefficients must be finite")
    if (mu_a < 0 or mu_s < 0) and not allow_negative:
        raise ValueError(
            f"attenuation coefficients must be non-negative, got mu_a={mu_a!r}, mu_s={mu_s!r}"
        )
    if (mu_a < 0 or mu_s < 0) and allow_negative:
        warnings.warn(
            "negative attenuation coefficient passed through; loss may be negative",
            NegativeCoefficientWarning,
            stacklevel=2,
        )
    neper = (mu_a + (mu_s if mode == MODE_COMPLETE else 0.0)) * thickness_cm
    saturated = neper > _MAX_LINEAR_NEPER
    return PathlossPoint(
        lambda_nm=float(lambda_nm),
        mu_a=mu_a,
        mu_s=mu_s,
        loss_db=neper * NEPER_TO_DB,
        loss_linear=math.inf if saturated else math.exp(neper),
        mode=mode,
        saturated=saturated,
    )


def wavelength_grid(lo_nm: float, hi_nm: float, step_nm: float) -> np.ndarray:
    """Wavelengths lo, lo+step, ... <= hi (the degenerate lo == hi grid is one point)."""
    if not (math.isfinite(lo_nm) and math.isfinite(hi_nm) and math.isfinite(step_nm)):
        raise ValueError("grid bounds and step must be finite")
    if lo_nm <= 0:
        raise ValueError("grid start must be positive")
    if hi_nm < lo_nm:
        raise ValueError(f"grid needs lo <= hi, got [{lo_nm!r}, {hi_nm!r}]")
    if step_nm <= 0:
        raise ValueError(f"grid step must be positive, got {step_nm!r}")
    count = int(math.floor((hi_nm - lo_nm) / step_nm + 1e-9)) + 1
    grid = lo_nm + step_nm * np.arange(count)
    return grid


def sweep(
    preset: TissuePreset,
    thickness_cm: float,
    grid: tuple[float, float, float] = DEFAULT_GRID,
    mode: str = MODE_COMPLETE,
    *,
    clamp: bool = True,
) -> list[PathlossPoint]:
    """Pathloss of a preset tissue across a wavelength grid.

    ``clamp=True`` (default) floors negative fitted absorption at zero,
    keeping the link budget physical; ``clamp=False`` passes raw model
    values through (loss can go negative, flagged by a warning).
    """
    _check_mode(mode)
    _check_thickness(thickness_cm)
    lam = wavelength_grid(*grid)
    mu_a = np.atleast_1d(mu_a_tissue(preset.composition, lam, clamp=clamp))
    mu_s = np.atleast_1d(mu_s_tissue(preset, lam))
    return [
        pathloss(
            a, s, thickness_cm, mode, lambda_nm=w, allow_negative=not clamp
        )
        for w, a, s in zip(lam, mu_a, mu_s)
    ]


def find_windows(points: list[PathlossPoint], threshold_db: float) -> list[TransmissionWindow]:
    """Maximal contiguous wavelength intervals with loss_db <= threshold.

    Interval edges falling between grid samples are refined by linear
    interpolation of the dB curve and reported to 0.1 nm, rounded toward
    the window interior so grid samples above the threshold never land
    inside a window. Returns an empty list when no sample qualifies.
    """
    if not points:
        raise ValueError("sweep result is empty")
    if not (math.isfinite(threshold_db) and threshold_db > 0):
        raise ValueError(f"threshold must be positive, got {threshold_db!r}")

    lam = [p.lambda_nm for p in points]
    loss = [p.loss_db for p in points]
    n = len(points)

    def crossing(i: int, j: int, inward_up: bool) -> float:
        # linear interpolation of loss between samples i and j at the threshold
        frac = (threshold_db - loss[i]) / (loss[j] - loss[i])
        tenths = (lam[i] + frac * (lam[j] - lam[i])) * 10.0
        rounded = math.ceil(tenths - 1e-9) if inward_up else math.floor(tenths + 1e-9)
        return rounded / 10.0

    windows: list[TransmissionWindow] = []
    i = 0
    while i < n:
        if loss[i] > threshold_db:
            i += 1
            continue
        j = i
        while j + 1 < n and loss[j + 1] <= threshold_db:
            j += 1
        lo = lam[i] if i == 0 else crossing(i - 1, i, inward_up=True)
        hi = lam[j] if j == n - 1 else crossing(j + 1, j, inward_up=False)
        windows.append(TransmissionWindow(lo_nm=lo, hi_nm=hi, threshold_db=threshold_db))
        i = j + 1
    return windows


def optimal_wavelength(points: list[PathlossPoint]) -> float:
    """Wavelength of minimum loss; ties resolve to the smallest wavelength."""
    if not points:
        raise ValueError("sweep result is empty")
    best = min(points, key=lambda p: (p.loss_db, p.lambda_nm))
    return best.lambda_nm


def sweep_csv_lines(
    preset: TissuePreset,
    thickness_cm: float,
    grid: tuple[float, float, float] = DEFAULT_GRID,
    *,
    clamp: bool = True,
) -> list[str]:
    """Sweep rows in the CSV interchange schema, 6 significant digits.

    Columns: lambda_nm, mu_a_cm1, mu_s_cm1, loss_db_absorption,
    loss_db_complete.
    """
    absorption = sweep(preset, thickness_cm, grid, MODE_ABSORPTION, clamp=clamp)
    complete = sweep(preset, thickness_cm, grid, MODE_COMPLETE, clamp=clamp)
    lines = ["lambda_nm,mu_a_cm1,mu_s_cm1,loss_db_absorption,loss_db_complete"]
    for pa, pc in zip(absorption, complete):
        lines.append(
            f"{pa.lambda_nm:.6g},{pa.mu_a:.6g},{pa.mu_s:.6g},{pa.loss_db:.6g},{pc.loss_db:.6g}"
        )
    return lines
