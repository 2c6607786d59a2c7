"""
Readers and writers for the files isotoda consumes and produces.

Floats are written with 12 significant digits so that repeated runs on
the same input give byte-identical output.
"""

import csv
import io
import json
import logging
import math
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import jsonschema
import numpy as np
from jinja2 import Environment, FileSystemLoader, StrictUndefined

from .config import load_schema
from .exceptions import ValidationError
from .homology import BettiTable
from .models import PeriodicJacobi, Spectrum
from .schrodinger import ForbiddenZones, MonodromySample, ZONE_UPPER
from .spectrum import SpectrumInvariants, bset_boundary, bset_corners
from .toda import TodaTrajectory

logger = logging.getLogger(__name__)

TEMPLATE_DIR = Path(__file__).parent / 'templates'

SVG_WIDTH = 480
SVG_MARGIN = 0.08


def format_float(x: float) -> str:
    return f"{float(x):.12g}"


def _normalize(obj: Any) -> Any:
    """Plain JSON types with every float rounded to 12 significant digits."""
    if isinstance(obj, dict):
        return {str(key): _normalize(value) for key, value in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_normalize(value) for value in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        if not math.isfinite(obj):
            return None
        return float(format_float(obj))
    if isinstance(obj, (complex, np.complexfloating)):
        return [_normalize(obj.real), _normalize(obj.imag)]
    return obj


def dump_json(obj: Any) -> str:
    return json.dumps(_normalize(obj), indent=2, ensure_ascii=False) + "\n"


def _load_document(path: str, schema_name: str) -> Dict[str, Any]:
    with open(path, 'r', encoding='utf-8') as f:
        text = f.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ValidationError(f"{path} is not valid JSON: {e}")
    try:
        jsonschema.validate(data, load_schema(schema_name))
    except jsonschema.ValidationError as e:
        raise ValidationError(f"{path} does not match the {schema_name} schema: {e.message}")
    return data


def load_spectrum(path: str) -> Spectrum:
    """Read ``{"lambda": [...]}``.

    Raises:
        OSError: If the file cannot be read.
        ValidationError: If the document or the spectrum is invalid.
    """
    return Spectrum.from_dict(_load_document(path, 'spectrum'))


def load_matrix(path: str) -> PeriodicJacobi:
    """Read ``{"a": [...], "b": [[re, im], ...]}``.

    Raises:
        OSError: If the file cannot be read.
        ValidationError: If the document or the matrix is invalid.
    """
    return PeriodicJacobi.from_dict(_load_document(path, 'matrix'))


def _csv_text(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_float(v) if isinstance(v, (float, np.floating)) else v
                         for v in row])
    return buffer.getvalue()


def trajectory_to_csv(traj: TodaTrajectory) -> str:
    """One row per stored state with its drift record."""
    if not traj.states:
        raise ValidationError("trajectory has no states")
    n = traj.states[0].n
    header = (['t'] + [f'a{i}' for i in range(1, n + 1)]
              + [part for i in range(1, n + 1) for part in (f're_b{i}', f'im_b{i}')]
              + ['spectrum_drift', 'b_drift', 'phase_drift'])
    rows = []
    for time, state, record in zip(traj.times, traj.states, traj.drift):
        rows.append(
            [float(time)] + [float(x) for x in state.a]
            + [part for z in state.b for part in (float(z.real), float(z.imag))]
            + [record.spectrum_drift, record.b_drift, record.phase_drift]
        )
    return _csv_text(header, rows)


def monodromy_samples_to_csv(samples: Sequence[MonodromySample]) -> str:
    return _csv_text(['x', 'trace', 'det'], ([s.x, s.trace, s.det] for s in samples))


def betti_tables_to_csv(rows: Sequence[Tuple[str, BettiTable]], n_max: int) -> str:
    """Rows ``table, n, n_plus, n_minus, b0..b{2 n_max}``, short rows padded empty."""
    width = 2 * n_max + 1
    header = ['table', 'n', 'n_plus', 'n_minus'] + [f'b{i}' for i in range(width)]
    body = []
    for name, table in rows:
        betti: List[Any] = list(table.betti)
        body.append([name, table.n, table.n_plus, table.n_minus]
                    + betti + [''] * (width - len(betti)))
    return _csv_text(header, body)


# -- SVG --------------------------------------------------------------------

def _environment() -> Environment:
    return Environment(
        loader=FileSystemLoader(str(TEMPLATE_DIR)),
        autoescape=True,
        undefined=StrictUndefined,
        keep_trailing_newline=True,
        trim_blocks=True,
        lstrip_blocks=True,
    )


class _Frame:
    """Maps complex points into SVG coordinates (y axis flipped)."""

    def __init__(self, points: Sequence[complex], width: int = SVG_WIDTH):
        xs = [p.real for p in points]
        ys = [p.imag for p in points]
        span = max(max(xs) - min(xs), max(ys) - min(ys), 1e-12)
        pad = SVG_MARGIN * span
        self.x0 = min(xs) - pad
        self.y1 = max(ys) + pad
        self.scale = width / (span + 2 * pad)
        self.width = width
        self.height = int(math.ceil((max(ys) - min(ys) + 2 * pad) * self.scale))

    def point(self, z: complex) -> Tuple[str, str]:
        return (format_float((z.real - self.x0) * self.scale),
                format_float((self.y1 - z.imag) * self.scale))

    def polyline(self, zs: Sequence[complex]) -> str:
        return ' '.join(f'{x},{y}' for x, y in map(self.point, zs))


def render_bset_svg(inv: SpectrumInvariants, samples: int,
                    point: Optional[complex] = None) -> str:
    """Image set region: both boundary arcs, the two corners and an optional point."""
    plus_arc, minus_arc = bset_boundary(inv, samples)
    z_top, z_bot = bset_corners(inv)
    frame = _Frame(plus_arc + minus_arc + ([point] if point is not None else []) + [0j])
    origin = frame.point(0j)
    return _environment().get_template('bset.svg.j2').render(
        width=frame.width,
        height=frame.height,
        origin=origin,
        plus_arc=frame.polyline(plus_arc),
        minus_arc=frame.polyline(minus_arc),
        corners=[frame.point(z_top), frame.point(z_bot)],
        point=frame.point(point) if point is not None else None,
        M=format_float(inv.M),
        m=format_float(inv.m),
        n_plus=inv.n_plus,
        n_minus=inv.n_minus,
    )


def render_zones_svg(zones: ForbiddenZones) -> str:
    """Real axis with the interleaved roots and the forbidden zones shaded."""
    lo, hi = zones.roots[0], zones.roots[-1]
    span = max(hi - lo, 1e-12)
    pad = SVG_MARGIN * span
    scale = SVG_WIDTH / (span + 2 * pad)

    def x(value: float) -> str:
        return format_float((value - lo + pad) * scale)

    return _environment().get_template('zones.svg.j2').render(
        width=SVG_WIDTH,
        roots=[x(r) for r in zones.roots],
        zones=[
            {
                'index': z.index,
                'left': x(z.left),
                'width': format_float(max(z.width * scale, 0.0)),
                'upper': z.kind == ZONE_UPPER,
                'collapsed': z.collapsed,
                'center': x(0.5 * (z.left + z.right)),
            }
            for z in zones.zones
        ],
        fiber_dim=zones.fiber_dim,
    )
