"""
Invariants of a simple spectrum and the image set of B.

For F(x) = prod(x - lambda_i) the module extracts M (smallest local-max
value), m (smallest |local-min value|), their multiplicities n_plus and
n_minus, and classifies points of the complex plane against the region
|z| <= R(arg z) bounded by two confocal parabolas.
"""

import cmath
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np

from .exceptions import ValidationError
from .models import Spectrum
from .poly import CriticalProfile, RealPolynomial, critical_profile, from_roots

logger = logging.getLogger(__name__)

DEFAULT_GROUPING_TOL = 1e-9
DEFAULT_BOUNDARY_TOL = 1e-8


class BSetLocation(str, Enum):
    """Position of a point relative to the image set."""
    INTERIOR = 'Interior'
    BOUNDARY_PLUS = 'BoundaryPlus'
    BOUNDARY_MINUS = 'BoundaryMinus'
    CORNER = 'Corner'
    OUTSIDE = 'Outside'


class ManifoldStatus(str, Enum):
    """What is known about the isospectral space being a manifold."""
    NOT_HOMOLOGY_MANIFOLD = 'NotHomologyManifold'
    NO_OBSTRUCTION_GENERIC_SMOOTH = 'NoObstructionGenericSmooth'


@dataclass(frozen=True)
class SpectrumInvariants:
    """Extremal critical values of F and how often they are attained."""
    n: int
    M: float
    m: float
    n_plus: int
    n_minus: int
    grouping_tol: float

    def to_dict(self) -> dict:
        return {
            'n': self.n,
            'M': self.M,
            'm': self.m,
            'n_plus': self.n_plus,
            'n_minus': self.n_minus,
        }


@dataclass(frozen=True)
class BSetQuery:
    """Classification of a complex number against the image set."""
    z: complex
    location: BSetLocation
    fiber_dim: Optional[int]


@dataclass(frozen=True)
class OrbitSpaceDescriptor:
    """Homotopy type of the orbit space: suspension of a join times a torus."""
    n_minus: int
    n_plus: int
    k: int

    def as_tuple(self) -> Tuple[int, int, int]:
        return (self.n_minus, self.n_plus, self.k)

    def describe(self) -> str:
        if self.n_minus == 1 and self.n_plus == 1:
            head = "S^4"
        else:
            head = f"Σ(T^{self.n_minus} * T^{self.n_plus})"
        if self.k == 0:
            return head
        return f"{head} × T^{self.k}"


def characteristic_polynomial(s: Spectrum) -> RealPolynomial:
    """F(x) = prod(x - lambda_i) in monomial form.

    Only well conditioned for spectra near the origin; ``critical_values``
    works on the centered and rescaled spectrum instead.
    """
    return from_roots(s.values)


def _unit_spectrum(s: Spectrum) -> Tuple[float, float, np.ndarray]:
    """Midpoint, half-diameter and the spectrum mapped onto [-1, 1]."""
    center = 0.5 * float(s.values[0] + s.values[-1])
    scale = 0.5 * s.diameter
    return center, scale, (s.values - center) / scale


def critical_values(s: Spectrum) -> CriticalProfile:
    """Critical points and values of the characteristic polynomial of s.

    With x = c + h*y, F(x) = h**n * prod(y - mu_i) for the rescaled
    spectrum mu, so the profile is computed on [-1, 1] and mapped back.
    """
    center, scale, unit = _unit_spectrum(s)
    profile = critical_profile(from_roots(unit), roots=unit)
    factor = scale ** s.n
    return CriticalProfile(
        points=tuple(center + scale * y for y in profile.points),
        values=tuple(factor * v for v in profile.values),
        kinds=profile.kinds,
    )


def analyze(s: Spectrum, grouping_tol: float = DEFAULT_GROUPING_TOL) -> SpectrumInvariants:
    """Compute M, m, n_plus and n_minus of a spectrum.

    Args:
        s: Simple spectrum with n >= 3.
        grouping_tol: Relative tolerance for counting extrema equal to M (m).

    Returns:
        The spectrum invariants.

    Raises:
        ValidationError: If grouping_tol is not positive.
        ConvergenceError: If the critical profile cannot be extracted.
    """
    if grouping_tol <= 0:
        raise ValidationError("grouping_tol must be positive")

    return _invariants(s.n, critical_values(s), grouping_tol)


def _invariants(n: int, profile: CriticalProfile,
                grouping_tol: float) -> SpectrumInvariants:
    maxima = profile.maxima_values
    minima = [-v for v in profile.minima_values]
    M = min(maxima)
    m = min(minima)
    n_plus = sum(1 for v in maxima if abs(v - M) <= grouping_tol * M)
    n_minus = sum(1 for v in minima if abs(v - m) <= grouping_tol * m)

    logger.debug("spectrum of size %d: M=%.6g (x%d), m=%.6g (x%d)",
                 n, M, n_plus, m, n_minus)
    return SpectrumInvariants(
        n=n, M=M, m=m, n_plus=n_plus, n_minus=n_minus, grouping_tol=grouping_tol,
    )


def _branches(inv: SpectrumInvariants, theta: float) -> Tuple[float, float]:
    """Radii of the M-branch and the m-branch at angle theta."""
    c = math.cos(theta)
    plus = inv.M / (2.0 * (1.0 - c)) if c < 1.0 else math.inf
    minus = inv.m / (2.0 * (1.0 + c)) if c > -1.0 else math.inf
    return plus, minus


def bset_radius(inv: SpectrumInvariants, theta: float) -> float:
    """Boundary radius R(theta) of the image set."""
    return min(_branches(inv, theta))


def bset_contains(inv: SpectrumInvariants, z: complex,
                  boundary_tol: float = DEFAULT_BOUNDARY_TOL) -> BSetQuery:
    """Classify z against the image set and report the fiber dimension."""
    if boundary_tol < 0:
        raise ValidationError("boundary_tol must be non-negative")

    n = inv.n
    z = complex(z)
    if z == 0:
        return BSetQuery(z=z, location=BSetLocation.INTERIOR, fiber_dim=n - 1)

    plus, minus = _branches(inv, cmath.phase(z))
    radius = min(plus, minus)
    r = abs(z)

    if r < radius - boundary_tol:
        return BSetQuery(z=z, location=BSetLocation.INTERIOR, fiber_dim=n - 1)
    if r > radius + boundary_tol:
        return BSetQuery(z=z, location=BSetLocation.OUTSIDE, fiber_dim=None)
    if abs(plus - minus) <= boundary_tol:
        return BSetQuery(z=z, location=BSetLocation.CORNER,
                         fiber_dim=n - 1 - inv.n_plus - inv.n_minus)
    if plus < minus:
        return BSetQuery(z=z, location=BSetLocation.BOUNDARY_PLUS,
                         fiber_dim=n - 1 - inv.n_plus)
    return BSetQuery(z=z, location=BSetLocation.BOUNDARY_MINUS,
                     fiber_dim=n - 1 - inv.n_minus)


def bset_corners(inv: SpectrumInvariants) -> Tuple[complex, complex]:
    """The two points (z_top, z_bot) where the boundary arcs meet."""
    theta = math.acos((inv.m - inv.M) / (inv.m + inv.M))
    radius = (inv.m + inv.M) / 4.0
    z_top = cmath.rect(radius, theta)
    return z_top, z_top.conjugate()


def bset_boundary(inv: SpectrumInvariants,
                  samples: int) -> Tuple[List[complex], List[complex]]:
    """Sample the M-branch arc (through the negative axis) and the m-branch arc.

    Returns:
        Two lists of boundary points, each running from z_bot side to z_top
        side, with ``samples`` points per arc.
    """
    if samples < 2:
        raise ValidationError("samples must be at least 2")
    corner = math.acos((inv.m - inv.M) / (inv.m + inv.M))

    plus_arc = []
    for theta in np.linspace(corner, 2.0 * math.pi - corner, samples):
        plus_arc.append(cmath.rect(_branches(inv, theta)[0], theta))
    minus_arc = []
    for theta in np.linspace(-corner, corner, samples):
        minus_arc.append(cmath.rect(_branches(inv, theta)[1], theta))
    return plus_arc, minus_arc


def manifold_status(inv: SpectrumInvariants) -> ManifoldStatus:
    if inv.n_plus > 1 or inv.n_minus > 1:
        return ManifoldStatus.NOT_HOMOLOGY_MANIFOLD
    return ManifoldStatus.NO_OBSTRUCTION_GENERIC_SMOOTH


def orbit_space_descriptor(n: int, inv: SpectrumInvariants) -> OrbitSpaceDescriptor:
    """The triple (n_minus, n_plus, n-1-n_minus-n_plus)."""
    if n < 3:
        raise ValidationError("n must be at least 3")
    return OrbitSpaceDescriptor(
        n_minus=inv.n_minus, n_plus=inv.n_plus, k=n - 1 - inv.n_minus - inv.n_plus,
    )


def is_chebyshev_degenerate(s: Spectrum, tol: float = DEFAULT_GROUPING_TOL) -> bool:
    """True iff all local maxima of F agree and all local minima agree."""
    if tol <= 0:
        raise ValidationError("tol must be positive")
    profile = critical_values(s)
    inv = _invariants(s.n, profile, tol)
    return (inv.n_plus == len(profile.maxima_values)
            and inv.n_minus == len(profile.minima_values))
