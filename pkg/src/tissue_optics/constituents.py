"""Absorption spectra of the five generic-tissue constituents.

Evaluates the bundled analytic absorption models (all in cm^-1, wavelengths
in nm):

* oxygenated blood  -- 5-term Gaussian sum
* de-oxygenated blood -- 4-term Gaussian sum
* water             -- 7-harmonic Fourier series
* fat               -- 5-term Gaussian sum
* melanin           -- power law, 519 cm^-1 at 550 nm with a -3 exponent

The coefficient registry is a frozen data table; ``table_checksum`` lets
regression tests detect any drift in the numbers. The fits are trustworthy
on 400-1000 nm; evaluation outside that range still computes but emits a
``ModelRangeWarning``. Fitted curves can dip below zero (the bundled water
fit is negative through most of the visible range); pass ``clamp=True``
where a physical, non-negative coefficient is required.

All evaluators are pure functions over immutable tables and are safe to
call concurrently.
"""

from __future__ import annotations

import hashlib
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

VALID_RANGE_NM = (400.0, 1000.0)


class ModelRangeWarning(UserWarning):
    """Wavelength lies outside the 400-1000 nm fitted validity range."""


class GaussianTerm(NamedTuple):
    amplitude: float  # cm^-1
    center: float  # nm
    width: float  # nm


@dataclass(frozen=True)
class GaussianSumModel:
    """Sum of Gaussian bumps: sum_i a_i * exp(-((lam - b_i) / c_i)^2)."""

    terms: tuple[GaussianTerm, ...]

    def __post_init__(self) -> None:
        if len(self.terms) < 1:
            raise ValueError("GaussianSumModel needs at least one term")
        if any(t.width == 0 for t in self.terms):
            raise ValueError("Gaussian term widths must be non-zero")


@dataclass(frozen=True)
class FourierSeriesModel:
    """a0 + sum_i a_i*cos(i*w*lam) + b_i*sin(i*w*lam), shared angular rate w."""

    a0: float  # cm^-1
    harmonics: tuple[tuple[float, float], ...]  # (a_i, b_i) pairs, cm^-1
    w: float  # rad / nm

    def __post_init__(self) -> None:
        if self.w <= 0:
            raise ValueError("Fourier angular rate w must be positive")
        if len(self.harmonics) < 1:
            raise ValueError("FourierSeriesModel needs at least one harmonic")


@dataclass(frozen=True)
class PowerLawModel:
    """mu_ref * (lam / lambda_ref)^exponent."""

    mu_ref: float  # cm^-1 at the reference wavelength
    lambda_ref: float  # nm
    exponent: float

    def __post_init__(self) -> None:
        if self.mu_ref <= 0:
            raise ValueError("power-law reference value must be positive")
        if self.lambda_ref <= 0:
            raise ValueError("power-law reference wavelength must be positive")


# Bundled fit coefficients. These numbers are the model; do not edit without
# updating the checksum regression test.
OXY_BLOOD = GaussianSumModel(
    terms=(
        GaussianTerm(14.0, 419.7, 16.97),
        GaussianTerm(13.75, 581.5, 11.68),
        GaussianTerm(29.69, 559.9, 46.71),
        GaussianTerm(4.317e15, -25880.0, 4668.0),
        GaussianTerm(-34.3, 642.6, 162.5),
    )
)

DEOXY_BLOOD = GaussianSumModel(
    terms=(
        GaussianTerm(38.63, 423.9, 33.06),
        GaussianTerm(60.18, 31.57, 660.8),
        GaussianTerm(25.11, 559.3, 59.08),
        GaussianTerm(2.988, 664.7, 28.53),
    )
)

FAT = GaussianSumModel(
    terms=(
        GaussianTerm(33.53, 411.5, 38.38),
        GaussianTerm(50.09, 968.7, 525.9),
        GaussianTerm(3.66, 742.9, 80.22),
        GaussianTerm(2.5, 671.2, 32.97),
        GaussianTerm(19.86, 513.8, 119.2),
    )
)

WATER = FourierSeriesModel(
    a0=324.1,
    harmonics=(
        (102.2, 697.9),
        (-568.0, 121.7),
        (-126.6, -395.3),
        (236.8, -107.1),
        (73.0, 115.6),
        (-40.53, 35.46),
        (-12.92, -8.373),
    ),
    w=0.006663,
)

MELANIN = PowerLawModel(mu_ref=519.0, lambda_ref=550.0, exponent=-3.0)

CONSTITUENT_MODELS: dict[str, GaussianSumModel | FourierSeriesModel | PowerLawModel] = {
    "oBlood": OXY_BLOOD,
    "dBlood": DEOXY_BLOOD,
    "water": WATER,
    "fat": FAT,
    "melanin": MELANIN,
}

# Experimental datasets the bundled fits were derived from.
CONSTITUENT_SOURCES = {
    "oBlood": "Takatani 1979; Moaveni 1970; Schmitt 1986; Zhao 2017",
    "dBlood": "Takatani 1979; Moaveni 1970; Schmitt 1986; Zhao 2017",
    "water": "Hale & Querry 1973; Zolotarev 1969; Segelstein 1981",
    "fat": "Bashkatov 2005",
    "melanin": "Jacques 1991; Zonios 2008",
}


def _as_wavelength(wavelength_nm, require_positive: bool = False):
    """Validate and coerce wavelengths to a float array; report scalar-ness."""
    lam = np.asarray(wavelength_nm, dtype=float)
    if not np.all(np.isfinite(lam)):
        raise ValueError("wavelength must be finite")
    if require_positive and np.any(lam <= 0):
        raise ValueError("wavelength must be positive")
    return lam, lam.ndim == 0


def _maybe_scalar(values: np.ndarray, scalar: bool):
    return float(values) if scalar else values


def _warn_outside_range(lam: np.ndarray) -> None:
    lo, hi = VALID_RANGE_NM
    if np.any((lam < lo) | (lam > hi)):
        warnings.warn(
            f"wavelength outside the fitted {lo:g}-{hi:g} nm validity range; "
            "values are extrapolated",
            ModelRangeWarning,
            stacklevel=3,
        )


def in_model_range(wavelength_nm) -> bool:
    """True when every wavelength lies inside the fitted validity range."""
    lam, _ = _as_wavelength(wavelength_nm)
    lo, hi = VALID_RANGE_NM
    return bool(np.all((lam >= lo) & (lam <= hi)))


def _clamped(values: np.ndarray, clamp: bool) -> np.ndarray:
    return np.maximum(values, 0.0) if clamp else values


def eval_gaussian_sum(model: GaussianSumModel, wavelength_nm):
    """Evaluate a Gaussian-sum model at one or many wavelengths [cm^-1]."""
    lam, scalar = _as_wavelength(wavelength_nm)
    total = np.zeros(lam.shape)
    for amplitude, center, width in model.terms:
        z = (lam - center) / width
        total += amplitude * np.exp(-z * z)
    return _maybe_scalar(total, scalar)


def gaussian_term_value(term: GaussianTerm, wavelength_nm):
    """Single Gaussian term; equals the amplitude exactly at its center."""
    lam, scalar = _as_wavelength(wavelength_nm)
    z = (lam - term.center) / term.width
    return _maybe_scalar(term.amplitude * np.exp(-z * z), scalar)


def eval_fourier_series(model: FourierSeriesModel, wavelength_nm):
    """Evaluate a shared-rate Fourier series at one or many wavelengths [cm^-1]."""
    lam, scalar = _as_wavelength(wavelength_nm)
    total = np.full(lam.shape, model.a0)
    for i, (a_i, b_i) in enumerate(model.harmonics, start=1):
        phase = i * model.w * lam
        total += a_i * np.cos(phase) + b_i * np.sin(phase)
    return _maybe_scalar(total, scalar)


def eval_power_law(model: PowerLawModel, wavelength_nm):
    """Evaluate a power-law model at one or many wavelengths [cm^-1]."""
    lam, scalar = _as_wavelength(wavelength_nm, require_positive=True)
    return _maybe_scalar(model.mu_ref * (lam / model.lambda_ref) ** model.exponent, scalar)


def mu_a_oxy_blood(wavelength_nm, *, clamp: bool = False):
    """Absorption coefficient of oxygenated blood [cm^-1]."""
    lam, scalar = _as_wavelength(wavelength_nm)
    _warn_outside_range(lam)
    return _maybe_scalar(_clamped(eval_gaussian_sum(OXY_BLOOD, lam), clamp), scalar)


def mu_a_deoxy_blood(wavelength_nm, *, clamp: bool = False):
    """Absorption coefficient of de-oxygenated blood [cm^-1]."""
    lam, scalar = _as_wavelength(wavelength_nm)
    _warn_outside_range(lam)
    return _maybe_scalar(_clamped(eval_gaussian_sum(DEOXY_BLOOD, lam), clamp), scalar)


def mu_a_water(wavelength_nm, *, clamp: bool = False):
    """Absorption coefficient of water [cm^-1].

    Note: the bundled Fourier fit is negative over most of 400-1000 nm even
    though it tracks the near-infrared water band's shape; use ``clamp=True``
    for link-budget work.
    """
    lam, scalar = _as_wavelength(wavelength_nm)
    _warn_outside_range(lam)
    return _maybe_scalar(_clamped(eval_fourier_series(WATER, lam), clamp), scalar)


def mu_a_fat(wavelength_nm, *, clamp: bool = False):
    """Absorption coefficient of fat [cm^-1]."""
    lam, scalar = _as_wavelength(wavelength_nm)
    _warn_outside_range(lam)
    return _maybe_scalar(_clamped(eval_gaussian_sum(FAT, lam), clamp), scalar)


def mu_a_melanin(wavelength_nm, *, clamp: bool = False):
    """Absorption coefficient of melanin [cm^-1]; 519 at 550 nm, ~lam^-3."""
    lam, scalar = _as_wavelength(wavelength_nm, require_positive=True)
    _warn_outside_range(lam)
    return _maybe_scalar(_clamped(eval_power_law(MELANIN, lam), clamp), scalar)


_MU_A_BY_NAME = {
    "oBlood": mu_a_oxy_blood,
    "dBlood": mu_a_deoxy_blood,
    "water": mu_a_water,
    "fat": mu_a_fat,
    "melanin": mu_a_melanin,
}


def constituent_names() -> tuple[str, ...]:
    return tuple(_MU_A_BY_NAME)


def resolve_constituent(name: str) -> str:
    """Map a case-insensitive name to its canonical registry key."""
    by_fold = {key.lower(): key for key in _MU_A_BY_NAME}
    try:
        return by_fold[name.lower()]
    except KeyError:
        raise KeyError(
            f"unknown constituent {name!r}; available: {', '.join(_MU_A_BY_NAME)}"
        ) from None


def mu_a_constituent(name: str, wavelength_nm, *, clamp: bool = False):
    """Absorption coefficient of a named constituent [cm^-1]."""
    return _MU_A_BY_NAME[resolve_constituent(name)](wavelength_nm, clamp=clamp)


def table_checksum() -> str:
    """SHA-256 over the canonical text of the bundled coefficient registry."""
    chunks = []
    for name in sorted(CONSTITUENT_MODELS):
        model = CONSTITUENT_MODELS[name]
        if isinstance(model, GaussianSumModel):
            body = ";".join(f"{t.amplitude!r},{t.center!r},{t.width!r}" for t in model.terms)
        elif isinstance(model, FourierSeriesModel):
            harm = ";".join(f"{a!r},{b!r}" for a, b in model.harmonics)
            body = f"{model.a0!r};{harm};{model.w!r}"
        else:
            body = f"{model.mu_ref!r},{model.lambda_ref!r},{model.exponent!r}"
        chunks.append(f"{name}:{body}")
    return hashlib.sha256("|".join(chunks).encode("ascii")).hexdigest()
