"""Command-line front end: coeff / pathloss / windows / optimum / fit / tissues.

Exit codes: 0 success, 1 non-converged fit, 2 invalid input, 3 I/O failure.
Thicknesses are given in millimetres on the command line and converted to
centimetres internally (the attenuation coefficients are per cm). The
``TISSUE_OPTICS_PRESET_DIR`` environment variable adds a directory of
JSON tissue presets; ``--tissue-file`` adds one more for a single run.
"""

from __future__ import annotations

import os
import sys
from pathlib import Path

import click
import numpy as np

from . import channel, fitting, svg, tissue
from .constituents import mu_a_constituent, resolve_constituent
from .tissue import UnknownTissueError, load_preset_file, lookup_tissue

PRESET_DIR_ENV = "TISSUE_OPTICS_PRESET_DIR"

EXIT_NON_CONVERGED = 1
EXIT_INVALID_INPUT = 2
EXIT_IO_FAILURE = 3


def _fail(code: int, message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _grid_options(fn):
    fn = click.option("--step", "step_nm", type=float, default=1.0, show_default=True,
                      help="Grid step [nm].")(fn)
    fn = click.option("--to", "to_nm", type=float, default=1000.0, show_default=True,
                      help="Grid end [nm].")(fn)
    fn = click.option("--from", "from_nm", type=float, default=400.0, show_default=True,
                      help="Grid start [nm].")(fn)
    return fn


def _preset_options(fn):
    fn = click.option("--tissue-file", type=click.Path(), default=None,
                      help="JSON tissue preset to add for this run.")(fn)
    return fn


def _clamp_option(fn):
    return click.option("--no-clamp", is_flag=True,
                        help="Pass negative fitted absorption through instead of flooring at 0.")(fn)


def _user_presets(tissue_file: str | None) -> dict[str, tissue.TissuePreset]:
    presets: dict[str, tissue.TissuePreset] = {}
    preset_dir = os.environ.get(PRESET_DIR_ENV)
    paths: list[Path] = []
    if preset_dir:
        paths.extend(sorted(Path(preset_dir).glob("*.json")))
    if tissue_file:
        paths.append(Path(tissue_file))
    for path in paths:
        try:
            preset = load_preset_file(path)
        except OSError as exc:
            _fail(EXIT_IO_FAILURE, f"cannot read preset {path}: {exc}")
        except ValueError as exc:
            _fail(EXIT_INVALID_INPUT, str(exc))
        presets[preset.name] = preset
    return presets


def _resolve_tissue(name: str, tissue_file: str | None) -> tissue.TissuePreset:
    try:
        return lookup_tissue(name, _user_presets(tissue_file))
    except UnknownTissueError as exc:
        _fail(EXIT_INVALID_INPUT, str(exc))


def _grid(from_nm: float, to_nm: float, step_nm: float) -> tuple[float, float, float]:
    try:
        channel.wavelength_grid(from_nm, to_nm, step_nm)
    except ValueError as exc:
        _fail(EXIT_INVALID_INPUT, str(exc))
    return (from_nm, to_nm, step_nm)


def _thickness_cm(thickness_mm: float) -> float:
    if not thickness_mm > 0:
        _fail(EXIT_INVALID_INPUT, f"thickness must be positive, got {thickness_mm:g} mm")
    return thickness_mm / 10.0


def _write_text(path: str | None, text: str) -> None:
    if path is None:
        click.echo(text, nl=False)
        return
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        _fail(EXIT_IO_FAILURE, f"cannot write {path}: {exc}")


def _write_svg(spec: svg.PlotSpec, path: str) -> None:
    try:
        svg.write_svg(spec, path)
    except OSError as exc:
        _fail(EXIT_IO_FAILURE, f"cannot write {path}: {exc}")


@click.group()
def main() -> None:
    """Optical pathloss of light through human tissue."""


@main.command()
@click.option("--tissue-file", type=click.Path(), default=None,
              help="JSON tissue preset to include in the listing.")
def tissues(tissue_file: str | None) -> None:
    """List available tissue presets."""
    presets = dict(tissue.BUILTIN_TISSUES)
    presets.update(_user_presets(tissue_file))
    for name, preset in presets.items():
        suffix = f"  ({preset.source})" if preset.source else ""
        click.echo(f"{name}{suffix}")


@main.command()
@click.argument("name")
@_grid_options
@_preset_options
@_clamp_option
@click.option("--out", "out_path", type=click.Path(), default=None,
              help="CSV output path (stdout if omitted).")
@click.option("--svg", "svg_path", type=click.Path(), default=None,
              help="Also render the curve(s) to an SVG file.")
def coeff(name, from_nm, to_nm, step_nm, tissue_file, no_clamp, out_path, svg_path) -> None:
    """Attenuation coefficient spectrum of a constituent or tissue preset."""
    grid = _grid(from_nm, to_nm, step_nm)
    lam = channel.wavelength_grid(*grid)
    clamp = not no_clamp

    try:
        key = resolve_constituent(name)
    except KeyError:
        key = None

    if key is not None:
        mu_a = np.atleast_1d(mu_a_constituent(key, lam, clamp=clamp))
        lines = ["lambda_nm,mu_a_cm1"]
        lines += [f"{w:.6g},{a:.6g}" for w, a in zip(lam, mu_a)]
        series = [svg.Series(f"{key} mu_a", tuple(lam), tuple(mu_a))]
        title = f"{key} absorption coefficient"
    else:
        preset = _resolve_tissue(name, tissue_file)
        mu_a = np.atleast_1d(tissue.mu_a_tissue(preset.composition, lam, clamp=clamp))
        mu_sp = np.atleast_1d(tissue.reduced_scattering(preset.scattering, lam))
        lines = ["lambda_nm,mu_a_cm1,mu_s_prime_cm1"]
        lines += [f"{w:.6g},{a:.6g},{s:.6g}" for w, a, s in zip(lam, mu_a, mu_sp)]
        series = [
            svg.Series(f"{preset.name} mu_a", tuple(lam), tuple(mu_a)),
            svg.Series(f"{preset.name} mu_s'", tuple(lam), tuple(mu_sp)),
        ]
        title = f"{preset.name} attenuation coefficients"

    _write_text(out_path, "\n".join(lines) + "\n")
    if svg_path:
        # log axis only works when every series has something positive to show
        log_ok = all(max(s.y) > 0 for s in series)
        spec = svg.PlotSpec(
            series=tuple(series),
            x_label="wavelength [nm]",
            y_label="coefficient [1/cm]",
            y_scale=svg.Y_SCALE_LOG10 if log_ok else svg.Y_SCALE_LINEAR,
            title=title,
        )
        _write_svg(spec, svg_path)


@main.command()
@click.argument("tissue_name", metavar="TISSUE")
@click.option("-d", "--thickness", "thickness_mm", type=float, required=True,
              help="Slab thickness [mm].")
@click.option("--mode", type=click.Choice(channel.MODES), default=channel.MODE_COMPLETE,
              show_default=True,
              help="Loss mode plotted in the SVG; the CSV always reports both columns.")
@_grid_options
@_preset_options
@_clamp_option
@click.option("--out", "out_path", type=click.Path(), default=None,
              help="CSV output path (stdout if omitted).")
@click.option("--svg", "svg_path", type=click.Path(), default=None,
              help="Also render the loss curves to an SVG file.")
def pathloss(tissue_name, thickness_mm, mode, from_nm, to_nm, step_nm, tissue_file,
             no_clamp, out_path, svg_path) -> None:
    """Pathloss sweep of a tissue slab across the wavelength grid."""
    preset = _resolve_tissue(tissue_name, tissue_file)
    delta_cm = _thickness_cm(thickness_mm)
    grid = _grid(from_nm, to_nm, step_nm)
    lines = channel.sweep_csv_lines(preset, delta_cm, grid, clamp=not no_clamp)
    _write_text(out_path, "\n".join(lines) + "\n")
    if svg_path:
        points_abs = channel.sweep(preset, delta_cm, grid, channel.MODE_ABSORPTION,
                                   clamp=not no_clamp)
        lam = tuple(p.lambda_nm for p in points_abs)
        series = [svg.Series("absorption only", lam, tuple(p.loss_db for p in points_abs))]
        if mode == channel.MODE_COMPLETE:
            points_full = channel.sweep(preset, delta_cm, grid, channel.MODE_COMPLETE,
                                        clamp=not no_clamp)
            series.append(svg.Series("complete", lam, tuple(p.loss_db for p in points_full)))
        spec = svg.PlotSpec(
            series=tuple(series),
            x_label="wavelength [nm]",
            y_label="pathloss [dB]",
            title=f"{preset.name}, {thickness_mm:g} mm slab",
        )
        _write_svg(spec, svg_path)


@main.command()
@click.argument("tissue_name", metavar="TISSUE")
@click.option("-d", "--thickness", "thickness_mm", type=float, required=True,
              help="Slab thickness [mm].")
@click.option("--threshold-db", type=float, default=6.0, show_default=True,
              help="Window loss ceiling [dB].")
@click.option("--mode", type=click.Choice(channel.MODES), default=channel.MODE_ABSORPTION,
              show_default=True, help="Loss mode used for the windows.")
@_grid_options
@_preset_options
@_clamp_option
def windows(tissue_name, thickness_mm, threshold_db, mode, from_nm, to_nm, step_nm,
            tissue_file, no_clamp) -> None:
    """Transmission windows where the slab loss stays at or below the threshold."""
    if not threshold_db > 0:
        _fail(EXIT_INVALID_INPUT, f"threshold must be positive, got {threshold_db:g} dB")
    preset = _resolve_tissue(tissue_name, tissue_file)
    delta_cm = _thickness_cm(thickness_mm)
    grid = _grid(from_nm, to_nm, step_nm)
    points = channel.sweep(preset, delta_cm, grid, mode, clamp=not no_clamp)
    found = channel.find_windows(points, threshold_db)
    if not found:
        click.echo("none")
        return
    for window in found:
        click.echo(f"[{window.lo_nm:g}, {window.hi_nm:g}]")


@main.command()
@click.argument("tissue_name", metavar="TISSUE")
@click.option("-d", "--thickness", "thickness_mm", type=float, required=True,
              help="Slab thickness [mm].")
@click.option("--mode", type=click.Choice(channel.MODES), default=channel.MODE_COMPLETE,
              show_default=True, help="Loss mode used for the optimum.")
@_grid_options
@_preset_options
@_clamp_option
def optimum(tissue_name, thickness_mm, mode, from_nm, to_nm, step_nm, tissue_file,
            no_clamp) -> None:
    """Wavelength of minimum pathloss on the grid."""
    preset = _resolve_tissue(tissue_name, tissue_file)
    delta_cm = _thickness_cm(thickness_mm)
    grid = _grid(from_nm, to_nm, step_nm)
    points = channel.sweep(preset, delta_cm, grid, mode, clamp=not no_clamp)
    click.echo(f"{channel.optimal_wavelength(points):g}")


@main.command("fit")
@click.argument("input_csv", type=click.Path())
@click.option("--family", type=click.Choice(["gaussian", "fourier", "power"]), required=True,
              help="Model family to fit.")
@click.option("--k", "n_components", type=int, default=None,
              help="Gaussian terms / Fourier harmonics (gaussian: required; fourier default 7).")
@click.option("--init", type=click.Choice(["auto", "algorithm1"]), default="auto",
              show_default=True, help="Initialisation strategy.")
@click.option("--nmse-threshold", type=float, default=fitting.DEFAULT_NMSE_THRESHOLD,
              show_default=True, help="Stop once the NMSE drops below this.")
@click.option("--max-iter", type=int, default=fitting.DEFAULT_MAX_ITERATIONS,
              show_default=True, help="Iteration budget.")
@click.option("--out", "out_path", type=click.Path(), default=None,
              help="JSON report path (stdout if omitted).")
def fit_command(input_csv, family, n_components, init, nmse_threshold, max_iter,
                out_path) -> None:
    """Fit a model family to a measured spectrum CSV (lambda_nm,mu_a_cm1)."""
    try:
        spectrum = fitting.read_spectrum_csv(input_csv)
    except fitting.SpectrumFormatError as exc:
        _fail(EXIT_INVALID_INPUT, f"{input_csv}: {exc}")
    except OSError as exc:
        _fail(EXIT_IO_FAILURE, f"cannot read {input_csv}: {exc}")

    if family == "gaussian":
        if n_components is None:
            _fail(EXIT_INVALID_INPUT, "--k is required for the gaussian family")
        model_family = fitting.GaussianSumFamily(n_components)
    elif family == "fourier":
        model_family = fitting.FourierSeriesFamily(n_components or 7)
    else:
        model_family = fitting.PowerLawFamily()

    init_mode = "auto_peaks" if init == "auto" else "algorithm1_default"
    try:
        problem = fitting.FitProblem(
            data=spectrum,
            family=model_family,
            nmse_threshold=nmse_threshold,
            max_iterations=max_iter,
            init=init_mode,
        )
        report = fitting.fit(problem)
    except (fitting.InsufficientDataError, fitting.UndefinedNormalizationError,
            fitting.DegenerateFitError, ValueError) as exc:
        _fail(EXIT_INVALID_INPUT, str(exc))

    _write_text(out_path, report.to_json())
    if not report.converged:
        click.echo(
            f"fit did not reach NMSE < {nmse_threshold:g} "
            f"(final {report.nmse:.3e} after {report.iterations} iterations)",
            err=True,
        )
        sys.exit(EXIT_NON_CONVERGED)


if __name__ == "__main__":
    main()
