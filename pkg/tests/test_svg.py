"""Deterministic SVG renderer."""

import re

import pytest

from tissue_optics import svg


def _flat_spec():
    series = svg.Series("flat", (400.0, 500.0, 600.0), (5.0, 5.0, 5.0))
    return svg.PlotSpec(series=(series,), x_label="wavelength [nm]", y_label="value")


def _y_tick_labels(doc: str) -> list[str]:
    return re.findall(r'text-anchor="end"[^>]*>([^<]+)</text>', doc)


def test_constant_series_renders_horizontal_polyline():
    doc = svg.render_svg(_flat_spec())
    match = re.search(r'<polyline[^>]*points="([^"]+)"', doc)
    ys = {pair.split(",")[1] for pair in match.group(1).split()}
    assert len(ys) == 1


def test_constant_series_has_two_y_ticks():
    assert len(_y_tick_labels(svg.render_svg(_flat_spec()))) == 2


def test_log_scale_decade_ticks():
    series = svg.Series("a", (1.0, 2.0), (1.0, 1000.0))
    spec = svg.PlotSpec(series=(series,), x_label="x", y_label="y", y_scale=svg.Y_SCALE_LOG10)
    labels = _y_tick_labels(svg.render_svg(spec))
    assert labels == ["1", "10", "100", "1000"]


def test_byte_determinism():
    series = svg.Series("loss", tuple(float(x) for x in range(400, 500, 10)),
                        tuple(float(x % 7) for x in range(400, 500, 10)))
    spec = svg.PlotSpec(series=(series,), x_label="x", y_label="y", title="t")
    assert svg.render_svg(spec).encode() == svg.render_svg(spec).encode()


def test_two_series_get_distinct_colors_and_legend():
    a = svg.Series("first & <best>", (1.0, 2.0), (1.0, 2.0))
    b = svg.Series("second", (1.0, 2.0), (3.0, 4.0))
    doc = svg.render_svg(svg.PlotSpec(series=(a, b), x_label="x", y_label="y"))
    assert doc.count("<polyline") == 2
    assert "first &amp; &lt;best&gt;" in doc
    assert "second" in doc


def test_validation_errors():
    with pytest.raises(ValueError, match="at least one series"):
        svg.PlotSpec(series=(), x_label="x", y_label="y")
    with pytest.raises(ValueError, match="strictly increasing"):
        svg.Series("bad", (2.0, 1.0), (1.0, 2.0))
    with pytest.raises(ValueError, match="common x range"):
        svg.PlotSpec(
            series=(
                svg.Series("a", (1.0, 2.0), (1.0, 2.0)),
                svg.Series("b", (1.0, 3.0), (1.0, 2.0)),
            ),
            x_label="x",
            y_label="y",
        )
    with pytest.raises(ValueError, match="y_scale"):
        svg.PlotSpec(
            series=(svg.Series("a", (1.0, 2.0), (1.0, 2.0)),),
            x_label="x",
            y_label="y",
            y_scale="log2",
        )


def test_log_scale_needs_positive_values():
    series = svg.Series("neg", (1.0, 2.0), (-1.0, -2.0))
    spec = svg.PlotSpec(series=(series,), x_label="x", y_label="y", y_scale=svg.Y_SCALE_LOG10)
    with pytest.raises(ValueError, match="positive"):
        svg.render_svg(spec)


def test_write_svg(tmp_path):
    path = tmp_path / "chart.svg"
    svg.write_svg(_flat_spec(), path)
    content = path.read_text()
    assert content.startswith("<svg ")
    assert content.rstrip().endswith("</svg>")
