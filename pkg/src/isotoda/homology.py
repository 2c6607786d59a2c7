"""
Hilbert-Poincare series and Betti numbers of isospectral spaces.

Everything here is exact integer arithmetic. Polynomials in t are sympy
``Poly`` objects over ZZ; rational series with denominator (1 - t^2)^e
are expanded through the closed form of 1/(1 - t^2)^e.
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from sympy import Poly, Symbol

from .exceptions import ValidationError
from .logging import MonitorLogger
from .tiling import dual_poset_stats

logger = logging.getLogger(__name__)

t = Symbol('t')

MAX_BETTI_N = 10

# Remainders R(t) of the full-space equivariant series that are known in closed form.
KNOWN_REMAINDERS: Dict[int, Tuple[int, ...]] = {3: (0, 0, 2)}


def poly_from_coeffs(coeffs: Sequence[int]) -> Poly:
    """Poly in t from ascending integer coefficients."""
    return Poly(list(reversed([int(c) for c in coeffs])) or [0], t, domain='ZZ')


def coeffs_of(p: Poly, length: Optional[int] = None) -> List[int]:
    """Ascending integer coefficients of p, zero-padded or truncated to ``length``."""
    coeffs = [int(c) for c in reversed(p.all_coeffs())]
    if p.is_zero:
        coeffs = [0]
    if length is None:
        return coeffs
    return (coeffs + [0] * length)[:length]


def binomial_power(k: int) -> Poly:
    """(1 + t)^k."""
    return Poly((1 + t) ** k, t, domain='ZZ')


@dataclass(frozen=True)
class RationalSeries:
    """numerator(t) / (1 - t^2)^denominator_exponent with integer coefficients."""
    numerator: Tuple[int, ...]
    denominator_exponent: int

    def __post_init__(self):
        if self.denominator_exponent < 0:
            raise ValidationError("denominator exponent must be non-negative")

    def _inverse_denominator(self, terms: int) -> List[int]:
        e = self.denominator_exponent
        series = [0] * terms
        for j in range(0, (terms + 1) // 2):
            series[2 * j] = math.comb(j + e - 1, j) if e > 0 else int(j == 0)
        return series

    def expand(self, terms: int) -> List[int]:
        """Coefficients of t^0 .. t^{terms-1}."""
        if terms < 1:
            raise ValidationError("terms must be at least 1")
        inverse = self._inverse_denominator(terms)
        return [
            sum(self.numerator[i] * inverse[k - i]
                for i in range(min(k, len(self.numerator) - 1) + 1))
            for k in range(terms)
        ]

    def check_exact(self, terms: int) -> bool:
        """Multiplying the expansion back by the denominator recovers the numerator."""
        product = poly_from_coeffs(self.expand(terms)) * Poly(
            (1 - t ** 2) ** self.denominator_exponent, t, domain='ZZ'
        )
        return coeffs_of(product, terms) == (list(self.numerator) + [0] * terms)[:terms]

    def add_polynomial(self, coeffs: Sequence[int]) -> 'RationalSeries':
        """The series plus a polynomial, over the same denominator."""
        numerator = poly_from_coeffs(self.numerator) + poly_from_coeffs(coeffs) * Poly(
            (1 - t ** 2) ** self.denominator_exponent, t, domain='ZZ'
        )
        return RationalSeries(tuple(coeffs_of(numerator)), self.denominator_exponent)

    def describe(self) -> str:
        return f"({poly_from_coeffs(self.numerator).as_expr()})/(1 - t**2)**{self.denominator_exponent}"


# -- equivariant series -------------------------------------------------------

def principal_part(n: int) -> RationalSeries:
    """(sum h_i t^{2i}) / (1 - t^2)^{n-1} with h the dual poset h-numbers."""
    h = dual_poset_stats(n).h
    numerator = [0] * (2 * n + 1)
    for i, value in enumerate(h):
        numerator[2 * i] = value
    return RationalSeries(tuple(numerator), n - 1)


def collar_tail(n: int) -> List[int]:
    """(1 + t)^n - 1 - t."""
    return coeffs_of(binomial_power(n) - Poly(1 + t, t, domain='ZZ'))


def collar_series(n: int) -> RationalSeries:
    return principal_part(n).add_polynomial(collar_tail(n))


def equivariant_series_collar(n: int, terms: int) -> List[int]:
    """Equivariant Hilbert-Poincare series of the collar neighbourhood to ``terms`` terms."""
    if n < 3:
        raise ValidationError("n must be at least 3")
    return collar_series(n).expand(terms)


@dataclass(frozen=True)
class FullEquivariantSeries:
    """Principal part plus a polynomial remainder R(t), when R is known."""
    n: int
    principal: RationalSeries
    remainder: Optional[Tuple[int, ...]]

    @property
    def remainder_known(self) -> bool:
        return self.remainder is not None

    def expand(self, terms: int) -> List[int]:
        if self.remainder is None:
            raise ValidationError(f"remainder R(t) is not determined for n = {self.n}")
        return self.principal.add_polynomial(self.remainder).expand(terms)

    def describe(self) -> str:
        if self.remainder is None:
            return f"{self.principal.describe()} + R(t)"
        return f"{self.principal.describe()} + {poly_from_coeffs(self.remainder).as_expr()}"


def equivariant_series_full(n: int,
                            remainder: Optional[Sequence[int]] = None) -> FullEquivariantSeries:
    """Equivariant series of the whole isospectral space, up to its remainder."""
    if n < 3:
        raise ValidationError("n must be at least 3")
    if remainder is None:
        remainder = KNOWN_REMAINDERS.get(n)
    return FullEquivariantSeries(
        n=n,
        principal=principal_part(n),
        remainder=tuple(int(c) for c in remainder) if remainder is not None else None,
    )


# -- Betti numbers ------------------------------------------------------------

def _check_parameters(n: int, n_plus: int, n_minus: int) -> None:
    if n < 3:
        raise ValidationError("n must be at least 3")
    if n_plus < 1 or n_minus < 1:
        raise ValidationError("n_plus and n_minus must be at least 1")
    if n_plus + n_minus > n - 1:
        raise ValidationError(
            f"n_plus + n_minus must not exceed n - 1 (got {n_plus} + {n_minus} for n = {n})"
        )


@dataclass(frozen=True)
class BettiComponents:
    """The four Mayer-Vietoris pieces, as ascending coefficient lists."""
    eps: List[int]
    geq: List[int]
    leq: List[int]
    ker: List[int]


def kernel_indices(n: int, n_plus: int,
                   n_minus: int) -> List[Tuple[int, int, int, int, int]]:
    """All (p, e, q, s, r) contributing to the connecting-map kernel."""
    free = n - 1 - n_plus - n_minus
    indices = []
    for p in range(free + 1):
        for e in range(2):
            for q in range(n_plus + 1):
                for s in range(n_minus + 1):
                    for r in range(n):
                        if r + e <= p + q + s:
                            continue
                        if (e == 0 and q + s > 0) or (e == 1 and q > 0 and s > 0):
                            indices.append((p, e, q, s, r))
    return indices


def collar_bigraded_betti(n: int) -> List[List[int]]:
    """dim H_{p,q} of the collar, as table[p][q] for 0 <= p, q < n."""
    if n < 3:
        raise ValidationError("n must be at least 3")
    h = dual_poset_stats(n).h
    table = [[0] * n for _ in range(n)]
    for p in range(n):
        table[p][p] = h[p] + math.comb(n, p) * sum(
            (-1) ** (p + k - 1) * math.comb(n - 1, k - 1) for k in range(2, p + 2)
        )
        for q in range(p):
            table[p][q] = math.comb(n - 1, p) * math.comb(n, q)
    return table


def collar_diagonal_from_h2(n: int) -> Dict[int, int]:
    """Diagonal entries dim H_{p,p} for p >= 2 from the h''-numbers."""
    stats = dual_poset_stats(n)
    return {
        p: stats.h_pp[p] + math.comb(n, p) * math.comb(n - 1, p)
        for p in range(2, n)
    }


def betti_components(n: int, n_plus: int, n_minus: int) -> BettiComponents:
    """Series of the thin part, the thick part, their intersection and the kernel term."""
    _check_parameters(n, n_plus, n_minus)

    eps = binomial_power(2 * n - 1)
    geq = binomial_power(2 * n - n_plus - n_minus - 2) * (
        Poly(1 - t, t, domain='ZZ')
        + Poly(t, t, domain='ZZ') * (binomial_power(n_plus) + binomial_power(n_minus))
    )

    leq = [0] * (2 * n - 1)
    for p, row in enumerate(collar_bigraded_betti(n)):
        for q, value in enumerate(row):
            leq[p + q] += value

    ker = [0] * (2 * n)
    for p, e, q, s, r in kernel_indices(n, n_plus, n_minus):
        ker[p + e + q + s + r] += (
            math.comb(n - 1 - n_plus - n_minus, p) * math.comb(n_plus, q)
            * math.comb(n_minus, s) * math.comb(n - 1, r)
        )

    return BettiComponents(
        eps=coeffs_of(eps), geq=coeffs_of(geq), leq=leq, ker=coeffs_of(poly_from_coeffs(ker)),
    )


def euler_characteristic(betti: Sequence[int]) -> int:
    return sum((-1) ** i * b for i, b in enumerate(betti))


def is_palindromic(betti: Sequence[int]) -> bool:
    return list(betti) == list(reversed(betti))


def degenerate_split(n: int) -> Tuple[int, int]:
    """(n_plus, n_minus) of the most degenerate spectrum of size n."""
    if n < 3:
        raise ValidationError("n must be at least 3")
    return (n - 1) // 2, n // 2


@dataclass(frozen=True)
class BettiTable:
    """Betti numbers beta_0 .. beta_{2n} of one isospectral space."""
    n: int
    n_plus: int
    n_minus: int
    betti: Tuple[int, ...]

    def __post_init__(self):
        if len(self.betti) != 2 * self.n + 1:
            raise ValidationError(
                f"expected {2 * self.n + 1} Betti numbers, got {len(self.betti)}"
            )
        if self.betti[0] != 1:
            raise ValidationError("beta_0 must be 1")
        if any(b < 0 for b in self.betti):
            raise ValidationError(f"negative Betti number in {list(self.betti)}")

    @property
    def euler(self) -> int:
        return euler_characteristic(self.betti)

    @property
    def pi1_rank(self) -> int:
        return self.n - 1 - self.n_plus - self.n_minus

    def to_dict(self) -> dict:
        return {
            'n': self.n,
            'n_plus': self.n_plus,
            'n_minus': self.n_minus,
            'betti': list(self.betti),
            'euler': self.euler,
            'pi1_rank': self.pi1_rank,
        }


def betti_table(n: int, n_plus: int, n_minus: int,
                monitor: Optional[MonitorLogger] = None) -> BettiTable:
    """Betti numbers from the Mayer-Vietoris assembly of the four components.

    Raises:
        ValidationError: If the parameters are out of range or the result
            is not a valid Betti list.
    """
    if n > MAX_BETTI_N:
        raise ValidationError(f"n must be at most {MAX_BETTI_N}")
    parts = betti_components(n, n_plus, n_minus)
    total = (poly_from_coeffs(parts.geq) + poly_from_coeffs(parts.leq)
             - poly_from_coeffs(parts.eps)
             + Poly(1 + t, t, domain='ZZ') * poly_from_coeffs(parts.ker))
    table = BettiTable(n=n, n_plus=n_plus, n_minus=n_minus,
                       betti=tuple(coeffs_of(total, 2 * n + 1)))

    (monitor or MonitorLogger()).log_monitor(
        'euler_characteristic', abs(table.euler - math.factorial(n)), 0,
        table.euler == math.factorial(n), component='homology',
    )
    return table


def orbit_poincare(n: int, n_plus: int, n_minus: int) -> List[int]:
    """Poincare polynomial of the orbit space."""
    _check_parameters(n, n_plus, n_minus)
    one = Poly(1, t, domain='ZZ')
    core = one + Poly(t ** 2, t, domain='ZZ') * (binomial_power(n_plus) - one) * (
        binomial_power(n_minus) - one
    )
    return coeffs_of(core * binomial_power(n - 1 - n_plus - n_minus))


@dataclass(frozen=True)
class Diagnostics:
    """Topological consequences of one Betti table."""
    euler: int
    pi1_rank: int
    odd_betti_total: int
    equivariantly_formal: bool
    orbit_poincare: Tuple[int, ...]

    def to_dict(self) -> dict:
        return {
            'euler': self.euler,
            'pi1_rank': self.pi1_rank,
            'odd_betti_total': self.odd_betti_total,
            'equivariantly_formal': self.equivariantly_formal,
            'orbit_poincare': list(self.orbit_poincare),
        }


def diagnostics(n: int, n_plus: int, n_minus: int) -> Diagnostics:
    table = betti_table(n, n_plus, n_minus)
    odd = sum(table.betti[1::2])
    return Diagnostics(
        euler=table.euler,
        pi1_rank=table.pi1_rank,
        odd_betti_total=odd,
        equivariantly_formal=odd == 0,
        orbit_poincare=tuple(orbit_poincare(n, n_plus, n_minus)),
    )
