"""
Transfer matrices, monodromy and forbidden zones of the periodic discrete
Schrodinger operator b_{k-1} psi_{k-1} + a_k psi_k + b_k psi_{k+1} = x psi_k.
"""

import logging
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np
from numpy.polynomial import Polynomial
from numpy.polynomial.chebyshev import chebpts1

from .exceptions import ConvergenceError, DegenerateLocusError, ValidationError
from .matrix import eigenvalues, gauge_normalize, product_B, twisted
from .models import PeriodicJacobi
from .poly import RealPolynomial

logger = logging.getLogger(__name__)

MONIC_TOL = 1e-8
DEFAULT_ZONE_TOL = 1e-7

ZONE_UPPER = 'upper'
ZONE_LOWER = 'lower'


@dataclass(frozen=True, eq=False)
class Monodromy:
    """The period map M(x) = M_n ... M_1 at a point x."""
    entries: np.ndarray
    x: float
    source: PeriodicJacobi

    @property
    def trace(self) -> float:
        return float(np.trace(self.entries))

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.entries))


@dataclass(frozen=True)
class MonodromySample:
    x: float
    trace: float
    det: float


@dataclass(frozen=True)
class ForbiddenZone:
    """The interval I_k = [x_{2k}, x_{2k+1}]."""
    index: int
    left: float
    right: float
    kind: str
    collapsed: bool

    @property
    def width(self) -> float:
        return self.right - self.left


@dataclass(frozen=True)
class ForbiddenZones:
    """Interleaved roots of P - 2B and P + 2B and the zones between them."""
    roots: Tuple[float, ...]
    zones: Tuple[ForbiddenZone, ...]
    B: float

    @property
    def collapsed_upper(self) -> int:
        return sum(1 for z in self.zones if z.collapsed and z.kind == ZONE_UPPER)

    @property
    def collapsed_lower(self) -> int:
        return sum(1 for z in self.zones if z.collapsed and z.kind == ZONE_LOWER)

    @property
    def open_count(self) -> int:
        return sum(1 for z in self.zones if not z.collapsed)

    @property
    def fiber_dim(self) -> int:
        """Dimension of the fiber torus through the matrix."""
        return self.open_count

    def to_dict(self) -> dict:
        return {
            'B': self.B,
            'roots': list(self.roots),
            'zones': [
                {
                    'index': z.index,
                    'left': z.left,
                    'right': z.right,
                    'kind': z.kind,
                    'collapsed': z.collapsed,
                }
                for z in self.zones
            ],
            'collapsed_upper': self.collapsed_upper,
            'collapsed_lower': self.collapsed_lower,
            'fiber_dim': self.fiber_dim,
        }


def _require_positive(L: PeriodicJacobi) -> None:
    moduli = np.abs(L.b)
    if np.any(moduli == 0.0):
        raise DegenerateLocusError("some b_i vanishes; transfer matrices are undefined")
    if np.any(np.abs(L.b.imag) > 1e-12 * moduli) or np.any(L.b.real <= 0.0):
        raise ValidationError("off-diagonal entries must be real positive; gauge normalize first")


def transfer_matrix(L: PeriodicJacobi, i: int, x: float) -> np.ndarray:
    """Matrix sending (psi_{i-1}, psi_i) to (psi_i, psi_{i+1}); i is one-based."""
    _require_positive(L)
    if not 1 <= i <= L.n:
        raise ValidationError(f"index {i} out of range 1..{L.n}")
    b = L.b.real
    b_prev = b[(i - 2) % L.n]
    b_i = b[i - 1]
    return np.array([
        [0.0, 1.0],
        [-b_prev / b_i, (x - L.a[i - 1]) / b_i],
    ])


def _monodromy_entries(a: np.ndarray, b: np.ndarray, x: float) -> np.ndarray:
    n = a.size
    result = np.eye(2)
    for i in range(n):
        step = np.array([[0.0, 1.0], [-b[i - 1] / b[i], (x - a[i]) / b[i]]])
        result = step @ result
    return result


def monodromy(L: PeriodicJacobi, x: float) -> Monodromy:
    """Ordered product M_n M_{n-1} ... M_1 at x."""
    _require_positive(L)
    return Monodromy(entries=_monodromy_entries(L.a, L.b.real, x), x=float(x), source=L)


def monodromy_samples(L: PeriodicJacobi, xs: Sequence[float]) -> List[MonodromySample]:
    """Trace and determinant of M(x) at each x."""
    _require_positive(L)
    samples = []
    for x in xs:
        entries = _monodromy_entries(L.a, L.b.real, float(x))
        samples.append(MonodromySample(
            x=float(x),
            trace=float(np.trace(entries)),
            det=float(np.linalg.det(entries)),
        ))
    return samples


def gershgorin_interval(L: PeriodicJacobi) -> Tuple[float, float]:
    """Interval containing the spectrum of every L(w)."""
    radius = 2.0 * float(np.max(np.abs(L.b)))
    return float(np.min(L.a)) - radius, float(np.max(L.a)) + radius


def spectral_polynomial(L: PeriodicJacobi) -> RealPolynomial:
    """P(x) = B tr M(x), recovered by interpolation at n+1 Chebyshev nodes.

    Raises:
        ValidationError: If L is not gauge normalized.
        ConvergenceError: If the interpolant is not monic within 1e-8.
    """
    _require_positive(L)
    n = L.n
    B = float(np.prod(L.b.real))
    lo, hi = gershgorin_interval(L)
    nodes = 0.5 * (lo + hi) + 0.5 * (hi - lo) * chebpts1(n + 1)
    values = [B * np.trace(_monodromy_entries(L.a, L.b.real, x)) for x in nodes]

    coeffs = Polynomial.fit(nodes, values, deg=n).convert().coef
    if coeffs.size != n + 1 or abs(coeffs[-1] - 1.0) > MONIC_TOL:
        raise ConvergenceError(
            f"interpolated spectral polynomial is not monic (leading coefficient "
            f"{coeffs[-1] if coeffs.size else 0.0:.12g})"
        )
    coeffs[-1] = 1.0
    return RealPolynomial.from_array(coeffs)


def _root_labels(n: int) -> List[bool]:
    """True where the merged root x_j (j = 1..2n) is a root of P - 2B."""
    labels = []
    for j in range(1, 2 * n + 1):
        group = (2 * n - j + 1) // 2
        labels.append(group % 2 == 0)
    return labels


def forbidden_zones(L: PeriodicJacobi, tol: float = DEFAULT_ZONE_TOL) -> ForbiddenZones:
    """The n-1 forbidden zones of L with upper/lower tags and collapse flags.

    The roots of P - 2B and P + 2B are the spectra of L(1) and L(-1) built
    from the gauge-normalized base of L.

    Raises:
        DegenerateLocusError: If some b_i vanishes.
        ConvergenceError: If the two root sets do not interlace.
    """
    if tol <= 0:
        raise ValidationError("tol must be positive")
    base = gauge_normalize(L).base
    n = base.n
    B = float(product_B(base).real)

    minus_roots = iter(eigenvalues(twisted(base, 1.0)))
    plus_roots = iter(eigenvalues(twisted(base, -1.0)))
    merged = [next(minus_roots) if label else next(plus_roots) for label in _root_labels(n)]

    diameter = merged[-1] - merged[0]
    slack = 1e-9 * max(diameter, 1.0)
    if any(right < left - slack for left, right in zip(merged, merged[1:])):
        raise ConvergenceError("roots of P - 2B and P + 2B do not interlace")

    zones = []
    for k in range(1, n):
        left, right = merged[2 * k - 1], merged[2 * k]
        zones.append(ForbiddenZone(
            index=k,
            left=float(left),
            right=float(right),
            kind=ZONE_LOWER if (n - 1 - k) % 2 == 0 else ZONE_UPPER,
            collapsed=bool(abs(right - left) <= tol * diameter),
        ))

    result = ForbiddenZones(roots=tuple(float(x) for x in merged), zones=tuple(zones), B=B)
    logger.debug("forbidden zones: %d open, %d upper collapsed, %d lower collapsed",
                 result.open_count, result.collapsed_upper, result.collapsed_lower)
    return result
