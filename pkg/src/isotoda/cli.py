"""
Command-line interface for isotoda.

Results are written to ``--out`` or stdout; log records go to stderr.
Exit codes: 0 success, 2 invalid input or configuration, 3 numeric
failure (including failed invariant monitors), 4 I/O error.
"""

import logging
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Dict, Optional, Tuple

import click
import numpy as np

from . import formats, homology, matrix, schrodinger, spectrum, tiling, toda
from .config import ConfigurationManager
from .exceptions import (
    ConfigurationError,
    DriftError,
    NumericalError,
    ValidationError,
)
from .logging import LogConfig, LoggingService, MonitorLogger
from .models import PeriodicJacobi, RunConfig
from .poly import product_value

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3
EXIT_IO = 4

MONODROMY_DET_TOL = 1e-10
MONODROMY_TRACE_TOL = 1e-7
MIN_SVG_SAMPLES = 16
MAX_TABLE_N = homology.MAX_BETTI_N


@dataclass
class CliState:
    """Objects shared by every command of one invocation."""
    config: RunConfig
    logging_service: LoggingService
    monitor: MonitorLogger


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text, encoding='utf-8')
    else:
        click.echo(text, nl=False)


def _execute(ctx: click.Context, command: str, parameters: Dict[str, Any],
             body: Callable[[CliState], None]) -> None:
    """Run a command body and translate exceptions into exit codes."""
    state: CliState = ctx.obj
    state.logging_service.log_run_start(command, parameters)
    started = time.perf_counter()
    exit_code = EXIT_OK
    try:
        body(state)
    except (ValidationError, ConfigurationError) as e:
        click.echo(f"Error: {e}", err=True)
        exit_code = EXIT_VALIDATION
    except NumericalError as e:
        click.echo(f"Error: {e}", err=True)
        exit_code = EXIT_NUMERICAL
    except OSError as e:
        click.echo(f"Error: {e}", err=True)
        exit_code = EXIT_IO
    finally:
        duration_ms = (time.perf_counter() - started) * 1000.0
        state.logging_service.log_run_end(command, duration_ms, exit_code)
    if exit_code != EXIT_OK:
        ctx.exit(exit_code)


def _settings(state: CliState, **overrides: Any) -> RunConfig:
    return state.config.merged(overrides)


def _matrix_input(matrix_file: Optional[str], random_n: Optional[int],
                  settings: RunConfig) -> PeriodicJacobi:
    if matrix_file is not None:
        return formats.load_matrix(matrix_file)
    if random_n is None:
        raise ValidationError("either MATRIX_FILE or --random-n is required")
    rng = np.random.default_rng(settings.seed or 0)
    logger.info("drawing a random matrix of size %d with seed %s", random_n, settings.seed)
    return matrix.random_periodic_jacobi(random_n, rng)


matrix_argument = click.argument(
    'matrix_file', required=False, type=click.Path(dir_okay=False),
)
random_option = click.option(
    '--random-n', type=int, default=None,
    help='Draw a random matrix of this size (seeded by the run config) instead of reading one.',
)
out_option = click.option('--out', type=click.Path(dir_okay=False), default=None,
                          help='Write the result to a file instead of stdout.')


@click.group()
@click.option('--config', 'config_path', type=click.Path(dir_okay=False), default=None,
              help='YAML or JSON file with run defaults.')
@click.option('--log-level', type=click.Choice(['DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL'],
                                               case_sensitive=False),
              default=None, help='Logging level (stderr).')
@click.option('--structured-logs', is_flag=True, default=None,
              help='Emit log records as JSON lines.')
@click.version_option(package_name='isotoda', message='%(prog)s %(version)s')
@click.pass_context
def cli(ctx: click.Context, config_path: Optional[str], log_level: Optional[str],
        structured_logs: Optional[bool]) -> None:
    """Isospectral periodic tridiagonal matrices and their topology."""
    try:
        config = ConfigurationManager().build_run_config(config_path, {
            'log_level': log_level.upper() if log_level else None,
            'structured_logging': structured_logs,
        })
    except ConfigurationError as e:
        click.echo(f"Error: {e}", err=True)
        ctx.exit(EXIT_VALIDATION)

    service = LoggingService(LogConfig(
        log_level=config.log_level,
        structured_format=config.structured_logging,
    ))
    ctx.call_on_close(service.close)
    ctx.obj = CliState(config=config, logging_service=service, monitor=service.monitor)


@cli.command()
@click.argument('spectrum_file', type=click.Path(dir_okay=False))
@out_option
@click.pass_context
def analyze(ctx: click.Context, spectrum_file: str, out: Optional[str]) -> None:
    """Invariants M, m, n+, n- of a spectrum and what they imply."""

    def body(state: CliState) -> None:
        settings = _settings(state, out=out)
        s = formats.load_spectrum(spectrum_file)
        inv = spectrum.analyze(s)
        descriptor = spectrum.orbit_space_descriptor(s.n, inv)
        result = {
            'm': inv.m,
            'M': inv.M,
            'n_plus': inv.n_plus,
            'n_minus': inv.n_minus,
            'manifold': spectrum.manifold_status(inv).value,
            'pi1_rank': descriptor.k,
            'orbit_space': descriptor.describe(),
            'chebyshev_degenerate': spectrum.is_chebyshev_degenerate(s),
        }
        _emit(formats.dump_json(result), settings.out)

    _execute(ctx, 'analyze', {'spectrum_file': spectrum_file}, body)


@cli.command()
@click.argument('spectrum_file', type=click.Path(dir_okay=False))
@click.option('--samples', type=int, default=None, help='Points per boundary arc.')
@click.option('--format', 'fmt', type=click.Choice(['svg', 'json']), default=None)
@click.option('--point', type=(float, float), default=None,
              help='Classify the complex number RE IM against the region.')
@out_option
@click.pass_context
def bset(ctx: click.Context, spectrum_file: str, samples: Optional[int], fmt: Optional[str],
         point: Optional[Tuple[float, float]], out: Optional[str]) -> None:
    """The region of possible values of B for a spectrum."""

    def body(state: CliState) -> None:
        settings = _settings(state, samples=samples, format=fmt, out=out)
        if settings.samples < MIN_SVG_SAMPLES:
            raise ValidationError(f"samples must be at least {MIN_SVG_SAMPLES}")
        inv = spectrum.analyze(formats.load_spectrum(spectrum_file))
        z = complex(*point) if point is not None else None

        if (settings.format or 'svg') == 'svg':
            _emit(formats.render_bset_svg(inv, settings.samples, z), settings.out)
            return

        z_top, z_bot = spectrum.bset_corners(inv)
        plus_arc, minus_arc = spectrum.bset_boundary(inv, settings.samples)
        result: Dict[str, Any] = {
            'invariants': inv.to_dict(),
            'corners': [z_top, z_bot],
            'axis_radii': {
                'positive': spectrum.bset_radius(inv, 0.0),
                'negative': spectrum.bset_radius(inv, np.pi),
            },
            'boundary_plus': plus_arc,
            'boundary_minus': minus_arc,
        }
        if z is not None:
            query = spectrum.bset_contains(inv, z)
            result['query'] = {
                'z': query.z, 'location': query.location.value, 'fiber_dim': query.fiber_dim,
            }
        _emit(formats.dump_json(result), settings.out)

    _execute(ctx, 'bset', {'spectrum_file': spectrum_file}, body)


@cli.command('toda')
@matrix_argument
@random_option
@click.option('--t-end', type=float, default=None, help='Final time.')
@click.option('--dt', type=float, default=None, help='Step size.')
@click.option('--tol', type=float, default=None, help='Drift tolerance.')
@click.option('--store-every', type=int, default=1, show_default=True,
              help='Keep every k-th state.')
@click.option('--format', 'fmt', type=click.Choice(['csv', 'json']), default=None)
@out_option
@click.pass_context
def toda_command(ctx: click.Context, matrix_file: Optional[str], random_n: Optional[int],
                 t_end: Optional[float], dt: Optional[float], tol: Optional[float],
                 store_every: int, fmt: Optional[str], out: Optional[str]) -> None:
    """Integrate the Toda flow and monitor the conserved quantities."""

    def body(state: CliState) -> None:
        settings = _settings(state, t_end=t_end, dt=dt, tol=tol, format=fmt, out=out)
        L0 = _matrix_input(matrix_file, random_n, settings)
        trajectory = toda.integrate(L0, settings.t_end, dt=settings.dt, tol=settings.tol,
                                    store_every=store_every, monitor=state.monitor)
        worst = trajectory.max_drift()
        if (settings.format or 'csv') == 'csv':
            _emit(formats.trajectory_to_csv(trajectory), settings.out)
        else:
            _emit(formats.dump_json({
                'failed': trajectory.failed,
                'failed_step': trajectory.failed_step,
                'stored_states': len(trajectory.states),
                'max_drift': {
                    'spectrum_drift': worst.spectrum_drift,
                    'b_drift': worst.b_drift,
                    'phase_drift': worst.phase_drift,
                },
                'final': trajectory.final.to_dict(),
            }), settings.out)
        if trajectory.failed:
            name, value = trajectory.drift[-1].worst()
            raise DriftError(
                f"{name} = {value:.3e} exceeds {settings.tol:.1e} at step {trajectory.failed_step}"
            )

    _execute(ctx, 'toda', {'matrix_file': matrix_file, 'random_n': random_n}, body)


@cli.command()
@matrix_argument
@random_option
@click.option('--samples', type=int, default=None, help='Number of sample points.')
@click.option('--format', 'fmt', type=click.Choice(['csv', 'json']), default=None)
@out_option
@click.pass_context
def monodromy(ctx: click.Context, matrix_file: Optional[str], random_n: Optional[int],
              samples: Optional[int], fmt: Optional[str], out: Optional[str]) -> None:
    """Sample trace and determinant of the monodromy over the spectral hull."""

    def body(state: CliState) -> None:
        settings = _settings(state, samples=samples, format=fmt, out=out)
        L = _matrix_input(matrix_file, random_n, settings)
        form = matrix.gauge_normalize(L)
        B = float(matrix.product_B(form.base).real)
        values = matrix.eigenvalues(L)
        rows = schrodinger.monodromy_samples(
            form.base, np.linspace(values[0], values[-1], settings.samples),
        )

        det_error = max(abs(r.det - 1.0) for r in rows)
        trace_error = max(
            abs(B * r.trace - (F + 2.0 * B * form.w.real)) / max(1.0, abs(F) + 2.0 * B)
            for r, F in zip(rows, (product_value(values, r.x) for r in rows))
        )
        state.monitor.log_monitor('det_monodromy', det_error, MONODROMY_DET_TOL,
                                  det_error <= MONODROMY_DET_TOL, component='schrodinger')
        state.monitor.log_monitor('trace_identity', trace_error, MONODROMY_TRACE_TOL,
                                  trace_error <= MONODROMY_TRACE_TOL, component='schrodinger')

        if (settings.format or 'csv') == 'csv':
            _emit(formats.monodromy_samples_to_csv(rows), settings.out)
        else:
            _emit(formats.dump_json({
                'B': B,
                'w': form.w,
                'max_det_error': det_error,
                'max_trace_error': trace_error,
                'samples': [{'x': r.x, 'trace': r.trace, 'det': r.det} for r in rows],
            }), settings.out)

        if det_error > MONODROMY_DET_TOL:
            raise DriftError(f"|det M - 1| = {det_error:.3e} exceeds {MONODROMY_DET_TOL:.1e}")
        if trace_error > MONODROMY_TRACE_TOL:
            raise DriftError(
                f"trace identity error {trace_error:.3e} exceeds {MONODROMY_TRACE_TOL:.1e}"
            )

    _execute(ctx, 'monodromy', {'matrix_file': matrix_file, 'random_n': random_n}, body)


@cli.command()
@matrix_argument
@random_option
@click.option('--tol', type=float, default=None, help='Relative collapse tolerance.')
@click.option('--format', 'fmt', type=click.Choice(['json', 'svg']), default=None)
@out_option
@click.pass_context
def zones(ctx: click.Context, matrix_file: Optional[str], random_n: Optional[int],
          tol: Optional[float], fmt: Optional[str], out: Optional[str]) -> None:
    """Forbidden zones of the periodic Schrodinger operator of a matrix."""

    def body(state: CliState) -> None:
        settings = _settings(state, format=fmt, out=out)
        L = _matrix_input(matrix_file, random_n, settings)
        result = schrodinger.forbidden_zones(
            L, tol=tol if tol is not None else schrodinger.DEFAULT_ZONE_TOL,
        )
        if (settings.format or 'json') == 'svg':
            _emit(formats.render_zones_svg(result), settings.out)
        else:
            _emit(formats.dump_json(result.to_dict()), settings.out)

    _execute(ctx, 'zones', {'matrix_file': matrix_file, 'random_n': random_n}, body)


@cli.command('tiling')
@click.argument('n', type=int)
@click.option('--poset', is_flag=True, help='Also build the subdivision and dump its face poset.')
@out_option
@click.pass_context
def tiling_command(ctx: click.Context, n: int, poset: bool, out: Optional[str]) -> None:
    """f-, h-, h'- and h''-numbers of the torus subdivision."""

    def body(state: CliState) -> None:
        settings = _settings(state, out=out)
        stats = tiling.dual_poset_stats(n)
        lattices = tiling.Lattices.from_n(n)
        result: Dict[str, Any] = stats.to_dict()
        result['lattice'] = {'index': lattices.index(), 'violations': lattices.check()}
        if poset:
            complex_ = tiling.build_complex(n)
            report = tiling.verify_crystallization(complex_)
            result['f_vector'] = complex_.f_vector()
            result['euler_characteristic'] = complex_.euler_characteristic()
            result['crystallization'] = {
                'vertex_count': report.vertex_count,
                'dimension': report.dimension,
                'pure': report.pure,
                'ok': report.ok,
                'violations': report.violations,
            }
            result['poset'] = tiling.poset_to_dict(complex_)
        _emit(formats.dump_json(result), settings.out)

    _execute(ctx, 'tiling', {'n': n, 'poset': poset}, body)


def betti_rows(n_max: int):
    """Manifold rows for 3..n_max, most degenerate rows for 4..n_max."""
    if not 3 <= n_max <= MAX_TABLE_N:
        raise ValidationError(f"n_max must be between 3 and {MAX_TABLE_N}")
    rows = [('manifold', homology.betti_table(n, 1, 1)) for n in range(3, n_max + 1)]
    for n in range(4, n_max + 1):
        n_plus, n_minus = homology.degenerate_split(n)
        rows.append(('degenerate', homology.betti_table(n, n_plus, n_minus)))
    return rows


@cli.command('betti-table')
@click.option('--n-max', type=int, default=6, show_default=True)
@click.option('--format', 'fmt', type=click.Choice(['csv', 'json']), default=None)
@out_option
@click.pass_context
def betti_table_command(ctx: click.Context, n_max: int, fmt: Optional[str],
                        out: Optional[str]) -> None:
    """Betti numbers for the manifold and the most degenerate case."""

    def body(state: CliState) -> None:
        settings = _settings(state, format=fmt, out=out)
        rows = betti_rows(n_max)
        if (settings.format or 'csv') == 'csv':
            _emit(formats.betti_tables_to_csv(rows, n_max), settings.out)
        else:
            grouped: Dict[str, list] = {'manifold': [], 'degenerate': []}
            for name, table in rows:
                grouped[name].append(table.to_dict())
            _emit(formats.dump_json(grouped), settings.out)

    _execute(ctx, 'betti-table', {'n_max': n_max}, body)


@cli.command()
@click.argument('n', type=int)
@click.option('--terms', type=int, default=None, help='Number of series coefficients.')
@out_option
@click.pass_context
def hilbert(ctx: click.Context, n: int, terms: Optional[int], out: Optional[str]) -> None:
    """Equivariant Hilbert-Poincare series coefficients."""

    def body(state: CliState) -> None:
        settings = _settings(state, terms=terms, out=out)
        collar = homology.collar_series(n)
        exact = collar.check_exact(settings.terms)
        state.monitor.log_monitor('series_exact', 0.0 if exact else 1.0, 0.0, exact,
                                  component='homology')
        if not exact:
            raise NumericalError("series expansion does not reproduce its numerator")

        full = homology.equivariant_series_full(n)
        result = {
            'n': n,
            'terms': settings.terms,
            'principal': homology.principal_part(n).expand(settings.terms),
            'collar': collar.expand(settings.terms),
            'collar_closed_form': collar.describe(),
            'full_remainder_known': full.remainder_known,
            'full': full.expand(settings.terms) if full.remainder_known else None,
            'full_closed_form': full.describe(),
        }
        _emit(formats.dump_json(result), settings.out)

    _execute(ctx, 'hilbert', {'n': n, 'terms': terms}, body)


def main() -> None:
    """Console script entry point."""
    sys.exit(cli(obj=None))


if __name__ == '__main__':
    main()
