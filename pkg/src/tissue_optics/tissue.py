"""Composite tissue optics: total absorption, reduced scattering, presets.

A tissue is a homogeneous mix of the five constituents plus a hybrid
Rayleigh/Mie scattering law:

* total absorption [cm^-1]:
  ``B*S*oBlood + B*(1-S)*dBlood + W*water + F*fat + M*melanin``
* reduced scattering [cm^-1]:
  ``mu_s'(lam) = mu_s'(lam0) * (f_ray*(lam/lam0)^-4 + (1-f_ray)*(lam/lam0)^-beta)``
* full scattering coefficient: ``mu_s = mu_s' / (1 - g)``

Built-in presets cover skin, breast, bone and brain; the registry source
table lists composition and scattering values as percentages, converted
here to fractions. Extra presets load from JSON files (see
``load_preset_file``); built-ins are immutable. Register user presets
before sharing a mapping across threads (single-writer, then readers).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from types import MappingProxyType
from typing import Mapping

import numpy as np

from .constituents import (
    _as_wavelength,
    _maybe_scalar,
    mu_a_deoxy_blood,
    mu_a_fat,
    mu_a_melanin,
    mu_a_oxy_blood,
    mu_a_water,
)

VOLUME_SUM_TOLERANCE = 1e-9
DEFAULT_LAMBDA_REF_NM = 500.0


class UnknownTissueError(KeyError):
    """Requested tissue preset does not exist."""

    def __init__(self, name: str, available: tuple[str, ...]):
        super().__init__(name)
        self.name = name
        self.available = available

    def __str__(self) -> str:
        return f"unknown tissue {self.name!r}; available: {', '.join(self.available)}"


def _check_fraction(label: str, value: float) -> None:
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{label} must lie in [0, 1], got {value!r}")


@dataclass(frozen=True)
class TissueComposition:
    """Volume fractions (0-1) of the tissue constituents.

    ``oxygen_saturation`` splits the blood fraction between the oxygenated
    and de-oxygenated models; it is not part of the volume budget.
    """

    blood: float
    oxygen_saturation: float
    water: float
    fat: float
    melanin: float

    def __post_init__(self) -> None:
        _check_fraction("blood fraction B", self.blood)
        _check_fraction("oxygen saturation S", self.oxygen_saturation)
        _check_fraction("water fraction W", self.water)
        _check_fraction("fat fraction F", self.fat)
        _check_fraction("melanin fraction M", self.melanin)
        total = self.blood + self.water + self.fat + self.melanin
        if total > 1.0 + VOLUME_SUM_TOLERANCE:
            raise ValueError(
                f"constituent volume fractions B+W+F+M = {total!r} exceed the whole volume"
            )


@dataclass(frozen=True)
class ScatteringParams:
    """Hybrid Rayleigh/Mie reduced-scattering parameters.

    ``rayleigh_fraction`` weights the lam^-4 component, ``mie_exponent`` is
    the Mie power-law slope, ``reduced_ref`` is mu_s' [cm^-1] at
    ``lambda_ref`` [nm], and ``anisotropy`` is the mean scattering cosine g.
    """

    rayleigh_fraction: float
    mie_exponent: float
    reduced_ref: float
    anisotropy: float
    lambda_ref: float = DEFAULT_LAMBDA_REF_NM

    def __post_init__(self) -> None:
        _check_fraction("Rayleigh fraction f_ray", self.rayleigh_fraction)
        if not 0.0 < self.mie_exponent <= 4.0:
            raise ValueError(f"Mie exponent beta must lie in (0, 4], got {self.mie_exponent!r}")
        if self.reduced_ref <= 0:
            raise ValueError("reference reduced scattering mu_s'(lambda_ref) must be positive")
        if not 0.0 <= self.anisotropy < 1.0:
            raise ValueError(f"anisotropy g must lie in [0, 1), got {self.anisotropy!r}")
        if self.lambda_ref <= 0:
            raise ValueError("reference wavelength must be positive")


@dataclass(frozen=True)
class TissuePreset:
    name: str
    composition: TissueComposition
    scattering: ScatteringParams
    source: str = ""


# Registry source values are percentages; stored here as fractions.
BUILTIN_TISSUES: Mapping[str, TissuePreset] = MappingProxyType({
    "skin": TissuePreset(
        name="skin",
        composition=TissueComposition(0.0041, 0.992, 0.261, 0.225, 0.0115),
        scattering=ScatteringParams(0.409, 0.702, 48.0, 0.92),
        source="Tseng 2011; Salomatina 2006; Sandell 2011; Shimojo 2020",
    ),
    "breast": TissuePreset(
        name="breast",
        composition=TissueComposition(0.005, 0.52, 0.50, 0.13, 0.0),
        scattering=ScatteringParams(0.288, 0.685, 18.7, 0.96),
        source="Pifferi 2004; Sandell 2011; Spinelli 2004",
    ),
    "bone": TissuePreset(
        name="bone",
        composition=TissueComposition(0.0015, 0.30, 0.30, 0.07, 0.0),
        scattering=ScatteringParams(0.174, 0.447, 19.3, 0.93),
        source="Sandell 2011; Bashkatov 2006; Ugryumova 2004",
    ),
    "brain": TissuePreset(
        name="brain",
        composition=TissueComposition(0.0171, 0.587, 0.50, 0.20, 0.0),
        scattering=ScatteringParams(0.32, 1.09, 12.72, 0.9),
        source="Zhao 2005; Yaroslavsky 2002; van der Zee 1993",
    ),
})


def mu_a_tissue(composition: TissueComposition, wavelength_nm, *, clamp: bool = False):
    """Total absorption coefficient of a tissue [cm^-1].

    With ``clamp=True`` each constituent spectrum is floored at zero before
    weighting, which keeps the composite physical where a fit dips negative.
    """
    lam, scalar = _as_wavelength(wavelength_nm)
    c = composition
    total = (
        c.blood * c.oxygen_saturation * np.asarray(mu_a_oxy_blood(lam, clamp=clamp))
        + c.blood * (1.0 - c.oxygen_saturation) * np.asarray(mu_a_deoxy_blood(lam, clamp=clamp))
        + c.water * np.asarray(mu_a_water(lam, clamp=clamp))
        + c.fat * np.asarray(mu_a_fat(lam, clamp=clamp))
        + c.melanin * np.asarray(mu_a_melanin(lam, clamp=clamp))
    )
    return _maybe_scalar(total, scalar)


def reduced_scattering(params: ScatteringParams, wavelength_nm):
    """Reduced scattering coefficient mu_s' [cm^-1] from the hybrid power law."""
    lam, scalar = _as_wavelength(wavelength_nm, require_positive=True)
    ratio = lam / params.lambda_ref
    f = params.rayleigh_fraction
    out = params.reduced_ref * (f * ratio**-4.0 + (1.0 - f) * ratio**-params.mie_exponent)
    return _maybe_scalar(out, scalar)


def scattering_from_reduced(mu_s_prime, anisotropy: float):
    """Full scattering coefficient mu_s = mu_s' / (1 - g) [cm^-1]."""
    if not 0.0 <= anisotropy < 1.0:
        raise ValueError(f"anisotropy g must lie in [0, 1), got {anisotropy!r}")
    mu = np.asarray(mu_s_prime, dtype=float)
    if np.any(mu < 0):
        raise ValueError("reduced scattering coefficient must be non-negative")
    out = mu / (1.0 - anisotropy)
    return _maybe_scalar(out, mu.ndim == 0)


def mu_s_tissue(preset: TissuePreset, wavelength_nm):
    """Full scattering coefficient of a preset tissue [cm^-1]."""
    return scattering_from_reduced(
        reduced_scattering(preset.scattering, wavelength_nm), preset.scattering.anisotropy
    )


def available_tissues(user_presets: Mapping[str, TissuePreset] | None = None) -> tuple[str, ...]:
    names = dict(BUILTIN_TISSUES)
    if user_presets:
        names.update(user_presets)
    return tuple(names)


def lookup_tissue(
    name: str, user_presets: Mapping[str, TissuePreset] | None = None
) -> TissuePreset:
    """Fetch a preset by case-insensitive name; user presets shadow built-ins."""
    combined: dict[str, TissuePreset] = dict(BUILTIN_TISSUES)
    if user_presets:
        combined.update(user_presets)
    by_fold = {key.lower(): preset for key, preset in combined.items()}
    try:
        return by_fold[name.lower()]
    except KeyError:
        raise UnknownTissueError(name, tuple(combined)) from None


def _composition_from_mapping(raw: Mapping[str, float], percent: bool) -> TissueComposition:
    missing = [key for key in ("B", "S", "W", "F", "M") if key not in raw]
    if missing:
        raise ValueError(f"composition is missing key(s): {', '.join(missing)}")
    scale = 0.01 if percent else 1.0
    return TissueComposition(
        blood=raw["B"] * scale,
        oxygen_saturation=raw["S"] * scale,
        water=raw["W"] * scale,
        fat=raw["F"] * scale,
        melanin=raw["M"] * scale,
    )


def _scattering_from_mapping(raw: Mapping[str, float]) -> ScatteringParams:
    missing = [key for key in ("f_ray", "beta", "mu_s_prime_ref", "g") if key not in raw]
    if missing:
        raise ValueError(f"scattering is missing key(s): {', '.join(missing)}")
    return ScatteringParams(
        rayleigh_fraction=raw["f_ray"],
        mie_exponent=raw["beta"],
        reduced_ref=raw["mu_s_prime_ref"],
        anisotropy=raw["g"],
        lambda_ref=raw.get("lambda_ref", DEFAULT_LAMBDA_REF_NM),
    )


def preset_from_dict(raw: Mapping) -> TissuePreset:
    """Build a preset from the JSON schema.

    Required keys: ``name``, ``composition`` (B/S/W/F/M), ``scattering``
    (f_ray/beta/mu_s_prime_ref/g, optional lambda_ref) and ``units``, which
    must be ``"fraction"`` or ``"percent"`` and applies to the composition
    values. The mandatory units tag exists to stop silent percent/fraction
    mix-ups.
    """
    units = raw.get("units")
    if units not in ("fraction", "percent"):
        raise ValueError('preset "units" field must be "fraction" or "percent"')
    name = raw.get("name")
    if not name or not isinstance(name, str):
        raise ValueError('preset "name" field must be a non-empty string')
    if "composition" not in raw or "scattering" not in raw:
        raise ValueError('preset needs "composition" and "scattering" sections')
    return TissuePreset(
        name=name,
        composition=_composition_from_mapping(raw["composition"], percent=units == "percent"),
        scattering=_scattering_from_mapping(raw["scattering"]),
        source=raw.get("source", ""),
    )


def load_preset_file(path: str | Path) -> TissuePreset:
    """Load one tissue preset from a JSON file."""
    with open(path, "r", encoding="utf-8") as handle:
        try:
            raw = json.load(handle)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}: not valid JSON ({exc})") from exc
    try:
        return preset_from_dict(raw)
    except ValueError as exc:
        raise ValueError(f"{path}: {exc}") from exc
