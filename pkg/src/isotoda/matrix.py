"""
Torus action, gauge normalization and eigenvalues of periodic Jacobi matrices.
"""

import itertools
import logging
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from .exceptions import (
    CapExceededError,
    ConvergenceError,
    DegenerateLocusError,
    NonSimpleSpectrumError,
    ValidationError,
)
from .models import PeriodicJacobi, Spectrum, TorusElement

logger = logging.getLogger(__name__)

DEFAULT_GAUGE_TOL = 1e-12
SIMPLICITY_TOL = 1e-8
DEFAULT_FIXED_POINT_CAP = 8


@dataclass(frozen=True)
class GaugeForm:
    """L = act(gauge, L(w)) where L(w) is ``base`` with corner twisted by w."""
    base: PeriodicJacobi
    w: complex
    gauge: TorusElement

    def twisted(self) -> PeriodicJacobi:
        return twisted(self.base, self.w)

    def reconstruct(self) -> PeriodicJacobi:
        return act(self.gauge, self.twisted())


def act(t: TorusElement, L: PeriodicJacobi) -> PeriodicJacobi:
    """Apply b_i -> t_i t_{i+1}^{-1} b_i cyclically."""
    if t.n != L.n:
        raise ValidationError(
            f"torus element of size {t.n} cannot act on a matrix of size {L.n}"
        )
    return L.with_b(L.b * t.t / np.roll(t.t, -1))


def product_B(L: PeriodicJacobi) -> complex:
    """B = b_1 b_2 ... b_n."""
    return complex(np.prod(L.b))


def twisted(base: PeriodicJacobi, w: complex) -> PeriodicJacobi:
    """The matrix L(w): the corner entry of ``base`` multiplied by w."""
    return base.with_corner(w * base.b[-1])


def gauge_normalize(L: PeriodicJacobi, tol: float = DEFAULT_GAUGE_TOL) -> GaugeForm:
    """Rotate b_1 ... b_{n-1} to positive reals, leaving the phase of B at the corner.

    Raises:
        DegenerateLocusError: If some |b_i| <= tol.
    """
    moduli = np.abs(L.b)
    if np.any(moduli <= tol):
        index = int(np.argmin(moduli)) + 1
        raise DegenerateLocusError(
            f"b_{index} vanishes (|b_{index}| = {moduli[index - 1]:.3e}); "
            "matrix lies on the degenerate locus"
        )

    phases = L.b / moduli
    g = np.concatenate(([1.0 + 0.0j], np.cumprod(phases[:-1])))
    w = complex(g[-1] * phases[-1])
    w /= abs(w)

    base = PeriodicJacobi(a=L.a, b=moduli)
    logger.debug("gauge normalized matrix of size %d: arg w = %.6g", L.n, np.angle(w))
    return GaugeForm(base=base, w=w, gauge=TorusElement(t=np.conj(g)))


def eigenvalues(L: PeriodicJacobi) -> np.ndarray:
    """Ascending eigenvalues of the assembled Hermitian matrix."""
    try:
        return np.linalg.eigvalsh(L.assemble())
    except np.linalg.LinAlgError as e:
        raise ConvergenceError(f"Hermitian eigensolver failed: {e}")


def is_simple(values: np.ndarray, rel_tol: float = SIMPLICITY_TOL) -> bool:
    """No two sorted eigenvalues closer than rel_tol times the diameter."""
    diameter = float(values[-1] - values[0])
    if diameter <= 0.0:
        return False
    return bool(np.min(np.diff(values)) > rel_tol * diameter)


def spectrum_of(L: PeriodicJacobi, rel_tol: float = SIMPLICITY_TOL) -> Spectrum:
    """Spectrum of L, rejecting repeated eigenvalues."""
    values = eigenvalues(L)
    if not is_simple(values, rel_tol):
        raise NonSimpleSpectrumError(
            f"spectrum is not simple: eigenvalues {np.round(values, 12).tolist()}"
        )
    return Spectrum(values=values)


def is_equilibrium(L: PeriodicJacobi, tol: float) -> bool:
    return bool(np.max(np.abs(L.b)) <= tol)


def fixed_points(s: Spectrum, cap: int = DEFAULT_FIXED_POINT_CAP) -> List[PeriodicJacobi]:
    """All diagonal matrices diag(lambda_sigma(1), ..., lambda_sigma(n)).

    Raises:
        CapExceededError: If n exceeds ``cap``.
    """
    if s.n > cap:
        raise CapExceededError(f"n = {s.n} exceeds the fixed point cap {cap}")
    zeros = np.zeros(s.n, dtype=complex)
    return [
        PeriodicJacobi(a=list(perm), b=zeros)
        for perm in itertools.permutations(s.values.tolist())
    ]


def random_periodic_jacobi(n: int, rng: np.random.Generator,
                           diagonal_scale: float = 1.0,
                           modulus_range: Tuple[float, float] = (0.5, 1.5),
                           phases: bool = True,
                           tridiagonal: bool = False) -> PeriodicJacobi:
    """Draw a random matrix with |b_i| in ``modulus_range``.

    Args:
        n: Matrix size.
        rng: numpy random generator.
        diagonal_scale: a_i is uniform on [-diagonal_scale, diagonal_scale].
        modulus_range: Range of |b_i|.
        phases: Draw uniform phases for b_i; real positive b otherwise.
        tridiagonal: Set the corner entry b_n to zero.
    """
    a = rng.uniform(-diagonal_scale, diagonal_scale, n)
    b = rng.uniform(modulus_range[0], modulus_range[1], n).astype(complex)
    if phases:
        b = b * np.exp(1j * rng.uniform(-np.pi, np.pi, n))
    if tridiagonal:
        b[-1] = 0.0
    return PeriodicJacobi(a=a, b=b)

