"""Golden-file regression of generated spectra and charts.

These freeze the byte-exact output of the current tables and formatting;
any drift in coefficients, evaluation order, or renderer shows up as a
diff against tests/golden/.
"""

from pathlib import Path

import numpy as np

from tissue_optics import channel, svg
from tissue_optics.constituents import constituent_names, mu_a_constituent
from tissue_optics.tissue import lookup_tissue, mu_a_tissue, reduced_scattering

GOLDEN = Path(__file__).parent / "golden"


def test_skin_sweep_csv_regression():
    lines = channel.sweep_csv_lines(lookup_tissue("skin"), 0.1, (400.0, 1000.0, 50.0))
    expected = (GOLDEN / "skin_sweep_1mm_coarse.csv").read_text()
    assert "\n".join(lines) + "\n" == expected


def test_constituent_spectra_regression():
    lam = channel.wavelength_grid(400.0, 1000.0, 100.0)
    header = "lambda_nm," + ",".join(f"{n}_cm1" for n in constituent_names())
    rows = [header]
    for w in lam:
        values = [mu_a_constituent(n, float(w)) for n in constituent_names()]
        rows.append(f"{w:.6g}," + ",".join(f"{v:.6g}" for v in values))
    expected = (GOLDEN / "constituents_coarse.csv").read_text()
    assert "\n".join(rows) + "\n" == expected


def test_brain_chart_svg_regression():
    preset = lookup_tissue("brain")
    lam = channel.wavelength_grid(400.0, 1000.0, 25.0)
    mu_a = np.atleast_1d(mu_a_tissue(preset.composition, lam, clamp=True))
    mu_sp = np.atleast_1d(reduced_scattering(preset.scattering, lam))
    spec = svg.PlotSpec(
        series=(
            svg.Series("brain mu_a", tuple(lam), tuple(mu_a)),
            svg.Series("brain mu_s'", tuple(lam), tuple(mu_sp)),
        ),
        x_label="wavelength [nm]",
        y_label="coefficient [1/cm]",
        y_scale=svg.Y_SCALE_LOG10,
        title="brain attenuation coefficients",
    )
    assert svg.render_svg(spec) == (GOLDEN / "brain_coeff.svg").read_text()
