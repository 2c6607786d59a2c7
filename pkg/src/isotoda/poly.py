"""
Real univariate polynomials, real-root isolation and critical values.

Coefficients are stored in ascending degree as double precision floats.
Roots are isolated by derivative interlacing: the real roots of p' split
the real line into intervals on which p is monotone, so every sign change
over such an interval brackets exactly one root, which is then refined
with Brent's method.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy.optimize import brentq

from .exceptions import ConvergenceError, ValidationError

logger = logging.getLogger(__name__)

DEFAULT_ROOT_TOL = 1e-12
MAX_ITERATIONS = 200

KIND_MAX = 'max'
KIND_MIN = 'min'

Number = Union[float, np.ndarray]


@dataclass(frozen=True)
class RealPolynomial:
    """A real polynomial with ascending coefficients."""
    coeffs: Tuple[float, ...]

    def __post_init__(self):
        coeffs = [float(c) for c in self.coeffs]
        if not coeffs:
            coeffs = [0.0]
        if not all(np.isfinite(coeffs)):
            raise ValidationError("polynomial coefficients must be finite")
        while len(coeffs) > 1 and coeffs[-1] == 0.0:
            coeffs.pop()
        object.__setattr__(self, 'coeffs', tuple(coeffs))

    @classmethod
    def from_array(cls, coeffs: Sequence[float]) -> 'RealPolynomial':
        return cls(coeffs=tuple(float(c) for c in coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> float:
        return self.coeffs[-1]

    @property
    def is_zero(self) -> bool:
        return self.coeffs == (0.0,)

    def __call__(self, x: Number) -> Number:
        return npoly.polyval(x, self.coeffs)

    def deriv(self) -> 'RealPolynomial':
        return RealPolynomial.from_array(npoly.polyder(self.coeffs))

    def __add__(self, other: 'RealPolynomial') -> 'RealPolynomial':
        return RealPolynomial.from_array(npoly.polyadd(self.coeffs, other.coeffs))

    def __sub__(self, other: 'RealPolynomial') -> 'RealPolynomial':
        return RealPolynomial.from_array(npoly.polysub(self.coeffs, other.coeffs))

    def __mul__(self, other: 'RealPolynomial') -> 'RealPolynomial':
        return RealPolynomial.from_array(npoly.polymul(self.coeffs, other.coeffs))

    def shift_constant(self, c: float) -> 'RealPolynomial':
        """Return p(x) + c."""
        coeffs = list(self.coeffs)
        coeffs[0] += c
        return RealPolynomial.from_array(coeffs)

    def to_list(self) -> List[float]:
        return list(self.coeffs)


@dataclass(frozen=True)
class CriticalProfile:
    """Critical points of a polynomial with n simple real roots.

    Kinds alternate and the largest critical point is a local minimum.
    """
    points: Tuple[float, ...]
    values: Tuple[float, ...]
    kinds: Tuple[str, ...]

    @property
    def maxima_values(self) -> List[float]:
        return [v for v, k in zip(self.values, self.kinds) if k == KIND_MAX]

    @property
    def minima_values(self) -> List[float]:
        return [v for v, k in zip(self.values, self.kinds) if k == KIND_MIN]


def from_roots(roots: Sequence[float]) -> RealPolynomial:
    """Monic polynomial with the given multiset of real roots.

    The monomial expansion is only well conditioned for roots of modest
    size that are not tightly clustered. ``real_roots(from_roots(r))``
    recovers ``r`` to ``tol`` when the coefficients stay within about 1e3
    in magnitude; otherwise center and rescale the roots first, as
    ``spectrum.critical_values`` does, or evaluate with ``product_value``.
    """
    return RealPolynomial.from_array(npoly.polyfromroots(list(roots)))


def product_value(roots: Sequence[float], x: float) -> float:
    """prod(x - r) evaluated factor by factor."""
    return float(np.prod(x - np.asarray(roots, dtype=float)))


def cauchy_bound(p: RealPolynomial) -> float:
    """Radius containing every complex root of p."""
    if p.degree == 0:
        return 0.0
    lead = abs(p.leading)
    return 1.0 + max(abs(c) for c in p.coeffs[:-1]) / lead


def _evaluation_error(p: RealPolynomial, x: float) -> float:
    """Bound on the rounding error of evaluating p at x."""
    magnitude = npoly.polyval(abs(x), np.abs(p.coeffs))
    return 8.0 * np.finfo(float).eps * (p.degree + 1) * magnitude


def real_roots(p: RealPolynomial, interval: Optional[Tuple[float, float]] = None,
               tol: float = DEFAULT_ROOT_TOL,
               max_iter: int = MAX_ITERATIONS) -> List[float]:
    """Real roots of p in ascending order, multiplicities collapsed.

    Args:
        p: Polynomial, not identically zero.
        interval: Optional closed interval (lo, hi) to restrict the output.
        tol: Absolute accuracy of each returned root.
        max_iter: Iteration cap of each bracketed refinement.

    Returns:
        Ascending list of distinct real roots.

    Raises:
        ValidationError: If p is identically zero or tol is not positive.
        ConvergenceError: If a bracketed refinement does not converge.
    """
    if p.is_zero:
        raise ValidationError("cannot isolate roots of the zero polynomial")
    if tol <= 0:
        raise ValidationError("tol must be positive")

    roots = _isolate(p, tol, max_iter)
    if interval is not None:
        lo, hi = interval
        roots = [r for r in roots if lo - tol <= r <= hi + tol]
    return roots


def _isolate(p: RealPolynomial, tol: float, max_iter: int) -> List[float]:
    if p.degree == 0:
        return []
    if p.degree == 1:
        return [-p.coeffs[0] / p.coeffs[1]]

    critical = _isolate(p.deriv(), tol, max_iter)
    bound = cauchy_bound(p)
    breaks = [-bound] + [c for c in critical if -bound < c < bound] + [bound]

    found: List[float] = []
    for c in breaks[1:-1]:
        # a critical point where p vanishes is a multiple root
        if abs(p(c)) <= _evaluation_error(p, c):
            found.append(c)

    for left, right in zip(breaks[:-1], breaks[1:]):
        f_left, f_right = p(left), p(right)
        if f_left == 0.0 and left not in found:
            found.append(left)
        if f_left * f_right < 0.0:
            root, result = brentq(p, left, right, xtol=tol, maxiter=max_iter,
                                  full_output=True, disp=False)
            if not result.converged:
                raise ConvergenceError(
                    f"root refinement on [{left}, {right}] did not converge "
                    f"after {result.iterations} iterations"
                )
            found.append(float(root))

    found.sort()
    roots: List[float] = []
    for r in found:
        if not roots or r - roots[-1] > tol:
            roots.append(r)
    logger.debug("isolated %d real roots of a degree %d polynomial", len(roots), p.degree)
    return roots


def critical_profile(F: RealPolynomial, tol: float = DEFAULT_ROOT_TOL,
                     roots: Optional[Sequence[float]] = None) -> CriticalProfile:
    """Critical points, values and min/max tags of F.

    When the roots of the monic F are given, critical values are evaluated
    in product form instead of from the coefficients.

    Raises:
        ValidationError: If F has degree below 3.
        ConvergenceError: If fewer than n-1 critical points are found or
            the values do not alternate in sign.
    """
    n = F.degree
    if n < 3:
        raise ValidationError("critical profile requires degree at least 3")
    points = real_roots(F.deriv(), tol=tol)
    if len(points) != n - 1:
        raise ConvergenceError(
            f"found {len(points)} critical points, expected {n - 1}; "
            "roots are numerically coincident"
        )

    if roots is None:
        values = [float(F(x)) for x in points]
    else:
        values = [product_value(roots, x) for x in points]
    kinds = [KIND_MIN if (n - 2 - i) % 2 == 0 else KIND_MAX for i in range(n - 1)]
    for value, kind in zip(values, kinds):
        if (kind == KIND_MAX and value <= 0.0) or (kind == KIND_MIN and value >= 0.0):
            raise ConvergenceError(
                "critical values do not alternate in sign; "
                "polynomial does not have simple real roots"
            )
    return CriticalProfile(points=tuple(points), values=tuple(values), kinds=tuple(kinds))
