"""Optical pathloss of light through human tissue.

Composes analytic constituent absorption spectra (blood, water, fat,
melanin) with a hybrid Rayleigh/Mie scattering law into Beer-Lambert slab
pathloss, finds transmission windows and optimal wavelengths, and refits
the constituent models to measured spectra with a damped Gauss-Newton
NMSE minimiser (also exposed as sklearn-style regressors).

Modules
-------
constituents
    The five bundled absorption models and their coefficient registry.
tissue
    Tissue composition, scattering parameters, and the preset registry.
channel
    Slab transmittance/pathloss, wavelength sweeps, window search.
fitting
    NMSE, model families, the fit engine, constituent refits, estimators.
svg
    Deterministic SVG line charts.
cli
    The ``tissue-optics`` command-line tool.
"""

from .channel import (
    MODE_ABSORPTION,
    MODE_COMPLETE,
    PathlossPoint,
    TransmissionWindow,
    find_windows,
    optimal_wavelength,
    pathloss,
    sweep,
    transmittance,
    wavelength_grid,
)
from .constituents import (
    CONSTITUENT_MODELS,
    ModelRangeWarning,
    VALID_RANGE_NM,
    eval_gaussian_sum,
    mu_a_constituent,
    mu_a_deoxy_blood,
    mu_a_fat,
    mu_a_melanin,
    mu_a_oxy_blood,
    mu_a_water,
)
from .fitting import (
    FitProblem,
    FitReport,
    FourierSeriesRegressor,
    GaussianSumRegressor,
    PowerLawRegressor,
    SampledSpectrum,
    fit,
    nmse,
    read_spectrum_csv,
    refit_constituent,
)
from .tissue import (
    BUILTIN_TISSUES,
    ScatteringParams,
    TissueComposition,
    TissuePreset,
    UnknownTissueError,
    load_preset_file,
    lookup_tissue,
    mu_a_tissue,
    mu_s_tissue,
    reduced_scattering,
    scattering_from_reduced,
)

__version__ = "0.1.0"

__all__ = [
    "BUILTIN_TISSUES",
    "CONSTITUENT_MODELS",
    "FitProblem",
    "FitReport",
    "FourierSeriesRegressor",
    "GaussianSumRegressor",
    "MODE_ABSORPTION",
    "MODE_COMPLETE",
    "ModelRangeWarning",
    "PathlossPoint",
    "PowerLawRegressor",
    "SampledSpectrum",
    "ScatteringParams",
    "TissueComposition",
    "TissuePreset",
    "TransmissionWindow",
    "UnknownTissueError",
    "VALID_RANGE_NM",
    "eval_gaussian_sum",
    "find_windows",
    "fit",
    "load_preset_file",
    "lookup_tissue",
    "mu_a_constituent",
    "mu_a_deoxy_blood",
    "mu_a_fat",
    "mu_a_melanin",
    "mu_a_oxy_blood",
    "mu_a_tissue",
    "mu_a_water",
    "mu_s_tissue",
    "nmse",
    "optimal_wavelength",
    "pathloss",
    "read_spectrum_csv",
    "reduced_scattering",
    "refit_constituent",
    "scattering_from_reduced",
    "sweep",
    "transmittance",
    "wavelength_grid",
    "__version__",
]
