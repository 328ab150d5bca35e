"""Tissue composition, hybrid scattering law, and the preset registry."""

import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from tissue_optics import tissue as T
from tissue_optics.constituents import (
    mu_a_deoxy_blood,
    mu_a_fat,
    mu_a_melanin,
    mu_a_oxy_blood,
    mu_a_water,
)

GRID = np.arange(400.0, 1001.0)

fractions = st.floats(min_value=0.0, max_value=1.0)


def test_all_zero_composition_absorbs_nothing():
    comp = T.TissueComposition(0.0, 0.0, 0.0, 0.0, 0.0)
    assert T.mu_a_tissue(comp, 550.0) == 0.0
    assert np.all(T.mu_a_tissue(comp, GRID) == 0.0)


def test_pure_melanin_reproduces_the_reference_value():
    comp = T.TissueComposition(0.0, 0.0, 0.0, 0.0, 1.0)
    assert T.mu_a_tissue(comp, 550.0) == pytest.approx(519.0, rel=1e-12)


def test_skin_composite_matches_term_by_term_oracle():
    skin = T.lookup_tissue("skin").composition
    # 50-digit oracle, term-by-term evaluation of the weighted sum at 550 nm
    assert T.mu_a_tissue(skin, 550.0) == pytest.approx(-3.9123470008902157838, rel=1e-12)
    # and the composite equals the weighted constituent calls exactly
    expected = (
        skin.blood * skin.oxygen_saturation * mu_a_oxy_blood(550.0)
        + skin.blood * (1 - skin.oxygen_saturation) * mu_a_deoxy_blood(550.0)
        + skin.water * mu_a_water(550.0)
        + skin.fat * mu_a_fat(550.0)
        + skin.melanin * mu_a_melanin(550.0)
    )
    assert T.mu_a_tissue(skin, 550.0) == pytest.approx(expected, rel=1e-14)


@pytest.mark.parametrize(
    "kwargs, message",
    [
        (dict(blood=-0.1, oxygen_saturation=0.5, water=0.1, fat=0.1, melanin=0.0), "blood"),
        (dict(blood=0.1, oxygen_saturation=1.5, water=0.1, fat=0.1, melanin=0.0), "saturation"),
        (dict(blood=0.1, oxygen_saturation=0.5, water=1.01, fat=0.1, melanin=0.0), "water"),
        (dict(blood=0.4, oxygen_saturation=0.5, water=0.4, fat=0.3, melanin=0.0), "exceed"),
    ],
)
def test_composition_validation(kwargs, message):
    with pytest.raises(ValueError, match=message):
        T.TissueComposition(**kwargs)


def test_saturation_outside_volume_budget():
    # S splits blood, it does not consume volume
    T.TissueComposition(blood=0.5, oxygen_saturation=1.0, water=0.5, fat=0.0, melanin=0.0)


@given(s=fractions, b=st.floats(min_value=0.0, max_value=1.0))
def test_saturation_split_conservation(s, b):
    blood_only = T.TissueComposition(b, s, 0.0, 0.0, 0.0)
    oxy = T.TissueComposition(b, 1.0, 0.0, 0.0, 0.0)
    deoxy = T.TissueComposition(b, 0.0, 0.0, 0.0, 0.0)
    lam = 612.0
    mixed = T.mu_a_tissue(blood_only, lam)
    split = s * T.mu_a_tissue(oxy, lam) + (1 - s) * T.mu_a_tissue(deoxy, lam)
    assert mixed == pytest.approx(split, rel=1e-12, abs=1e-12)


@given(t=fractions)
def test_convex_combination_linearity(t):
    # mixing volume fractions at a shared saturation mixes the spectra linearly
    c1 = T.TissueComposition(0.02, 0.7, 0.5, 0.2, 0.01)
    c2 = T.TissueComposition(0.001, 0.7, 0.1, 0.05, 0.0)
    mix = T.TissueComposition(
        blood=t * c1.blood + (1 - t) * c2.blood,
        oxygen_saturation=0.7,
        water=t * c1.water + (1 - t) * c2.water,
        fat=t * c1.fat + (1 - t) * c2.fat,
        melanin=t * c1.melanin + (1 - t) * c2.melanin,
    )
    lam = 633.0
    expected = t * T.mu_a_tissue(c1, lam) + (1 - t) * T.mu_a_tissue(c2, lam)
    assert T.mu_a_tissue(mix, lam) == pytest.approx(expected, rel=1e-12, abs=1e-12)


def test_builtin_skin_row():
    skin = T.lookup_tissue("skin")
    comp = skin.composition
    assert (comp.blood, comp.oxygen_saturation, comp.water, comp.fat, comp.melanin) == (
        0.0041,
        0.992,
        0.261,
        0.225,
        0.0115,
    )
    assert skin.scattering.anisotropy == 0.92


def test_builtin_brain_scattering_row():
    brain = T.lookup_tissue("brain").scattering
    assert (brain.rayleigh_fraction, brain.mie_exponent, brain.reduced_ref, brain.anisotropy) == (
        0.32,
        1.09,
        12.72,
        0.9,
    )


def test_unknown_tissue_lists_available():
    with pytest.raises(T.UnknownTissueError) as err:
        T.lookup_tissue("cartilage")
    assert "cartilage" in str(err.value)
    for name in ("skin", "breast", "bone", "brain"):
        assert name in err.value.available


def test_lookup_is_case_insensitive():
    assert T.lookup_tissue("Skin").name == "skin"


@pytest.mark.parametrize("name", list(T.BUILTIN_TISSUES))
def test_reference_point_identity(name):
    params = T.BUILTIN_TISSUES[name].scattering
    assert T.reduced_scattering(params, params.lambda_ref) == pytest.approx(
        params.reduced_ref, rel=1e-12
    )


def test_pure_rayleigh_closed_form():
    params = T.ScatteringParams(1.0, 1.0, 16.0, 0.0, lambda_ref=500.0)
    assert T.reduced_scattering(params, 1000.0) == pytest.approx(1.0, rel=1e-12)


def test_skin_reduced_scattering_at_1000():
    skin = T.lookup_tissue("skin").scattering
    # 50-digit oracle of the hybrid law with lambda_ref = 500 nm
    assert T.reduced_scattering(skin, 1000.0) == pytest.approx(18.66536089313897284, rel=1e-12)


@given(
    f=fractions,
    beta=st.floats(min_value=0.05, max_value=4.0),
    lam=st.floats(min_value=400.0, max_value=1000.0),
)
def test_hybrid_law_bounded_by_pure_components(f, beta, lam):
    mixed = T.ScatteringParams(f, beta, 20.0, 0.5)
    rayleigh = T.ScatteringParams(1.0, beta, 20.0, 0.5)
    mie = T.ScatteringParams(0.0, beta, 20.0, 0.5)
    value = T.reduced_scattering(mixed, lam)
    bounds = sorted(
        [T.reduced_scattering(rayleigh, lam), T.reduced_scattering(mie, lam)]
    )
    assert bounds[0] - 1e-12 <= value <= bounds[1] + 1e-12


@pytest.mark.parametrize("name", list(T.BUILTIN_TISSUES))
def test_reduced_scattering_strictly_decreasing(name):
    params = T.BUILTIN_TISSUES[name].scattering
    values = T.reduced_scattering(params, GRID)
    assert np.all(np.diff(values) < 0)


def test_rayleigh_equivalence_of_beta_four():
    pure = T.ScatteringParams(1.0, 2.0, 30.0, 0.8)
    mie4 = T.ScatteringParams(0.0, 4.0, 30.0, 0.8)
    a = T.reduced_scattering(pure, GRID)
    b = T.reduced_scattering(mie4, GRID)
    assert np.allclose(a, b, rtol=1e-12)


def test_reduced_scattering_requires_positive_wavelength():
    params = T.lookup_tissue("bone").scattering
    with pytest.raises(ValueError, match="positive"):
        T.reduced_scattering(params, 0.0)


def test_scattering_from_reduced():
    assert T.scattering_from_reduced(5.0, 0.0) == 5.0
    assert T.scattering_from_reduced(5.0, 0.9) == pytest.approx(50.0, rel=1e-12)
    assert T.scattering_from_reduced(18.7, 0.92) == pytest.approx(233.75, rel=1e-12)


@given(g1=st.floats(min_value=0.0, max_value=0.98), g2=st.floats(min_value=0.0, max_value=0.98))
def test_scattering_increases_with_anisotropy(g1, g2):
    lo, hi = sorted([g1, g2])
    if (1.0 - lo) == (1.0 - hi):  # g difference too small to register in 1 - g
        return
    assert T.scattering_from_reduced(7.0, hi) > T.scattering_from_reduced(7.0, lo)


def test_scattering_from_reduced_rejects_bad_inputs():
    with pytest.raises(ValueError, match="anisotropy"):
        T.scattering_from_reduced(5.0, 1.0)
    with pytest.raises(ValueError, match="non-negative"):
        T.scattering_from_reduced(-1.0, 0.5)


def test_scattering_params_validation():
    with pytest.raises(ValueError, match="beta"):
        T.ScatteringParams(0.5, 0.0, 10.0, 0.9)
    with pytest.raises(ValueError, match="beta"):
        T.ScatteringParams(0.5, 4.5, 10.0, 0.9)
    with pytest.raises(ValueError, match="f_ray"):
        T.ScatteringParams(1.2, 1.0, 10.0, 0.9)
    with pytest.raises(ValueError, match="positive"):
        T.ScatteringParams(0.5, 1.0, 0.0, 0.9)
    with pytest.raises(ValueError, match="anisotropy"):
        T.ScatteringParams(0.5, 1.0, 10.0, 1.0)


SKIN_JSON_PERCENT = {
    "name": "skin-copy",
    "composition": {"B": 0.41, "S": 99.2, "W": 26.1, "F": 22.5, "M": 1.15},
    "scattering": {"f_ray": 0.409, "beta": 0.702, "mu_s_prime_ref": 48.0, "g": 0.92},
    "units": "percent",
}


def test_preset_file_percent_units(tmp_path):
    path = tmp_path / "skin_copy.json"
    path.write_text(json.dumps(SKIN_JSON_PERCENT))
    preset = T.load_preset_file(path)
    builtin = T.lookup_tissue("skin")
    assert preset.composition.blood == pytest.approx(builtin.composition.blood, rel=1e-12)
    assert preset.composition.oxygen_saturation == pytest.approx(
        builtin.composition.oxygen_saturation, rel=1e-12
    )
    assert preset.scattering.lambda_ref == T.DEFAULT_LAMBDA_REF_NM


def test_preset_file_fraction_units(tmp_path):
    raw = dict(SKIN_JSON_PERCENT)
    raw["composition"] = {"B": 0.0041, "S": 0.992, "W": 0.261, "F": 0.225, "M": 0.0115}
    raw["units"] = "fraction"
    path = tmp_path / "skin_fraction.json"
    path.write_text(json.dumps(raw))
    preset = T.load_preset_file(path)
    assert preset.composition.water == 0.261


def test_preset_file_requires_units(tmp_path):
    raw = {k: v for k, v in SKIN_JSON_PERCENT.items() if k != "units"}
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(raw))
    with pytest.raises(ValueError, match="units"):
        T.load_preset_file(path)


def test_preset_file_rejects_unknown_units(tmp_path):
    raw = dict(SKIN_JSON_PERCENT, units="permille")
    path = tmp_path / "bad_units.json"
    path.write_text(json.dumps(raw))
    with pytest.raises(ValueError, match="units"):
        T.load_preset_file(path)


def test_preset_file_reports_missing_keys(tmp_path):
    raw = dict(SKIN_JSON_PERCENT)
    raw["composition"] = {"B": 0.41, "S": 99.2}
    path = tmp_path / "missing.json"
    path.write_text(json.dumps(raw))
    with pytest.raises(ValueError, match="W, F, M"):
        T.load_preset_file(path)


def test_preset_file_rejects_broken_json(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    with pytest.raises(ValueError, match="JSON"):
        T.load_preset_file(path)


def test_user_preset_shadows_builtin():
    custom = T.TissuePreset(
        name="skin",
        composition=T.TissueComposition(0.0, 0.0, 0.0, 0.0, 1.0),
        scattering=T.ScatteringParams(0.5, 1.0, 10.0, 0.9),
    )
    found = T.lookup_tissue("skin", {"skin": custom})
    assert found.composition.melanin == 1.0
    assert "skin" in T.available_tissues({"skin": custom})
