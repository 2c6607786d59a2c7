"""
Tests for equivariant Hilbert-Poincare series and Betti numbers.
"""

import math
from unittest.mock import Mock

import pytest

from src.isotoda.exceptions import ValidationError
from src.isotoda.homology import (
    MAX_BETTI_N,
    BettiTable,
    RationalSeries,
    betti_components,
    betti_table,
    collar_bigraded_betti,
    collar_diagonal_from_h2,
    collar_series,
    collar_tail,
    degenerate_split,
    diagnostics,
    equivariant_series_collar,
    equivariant_series_full,
    is_palindromic,
    orbit_poincare,
    principal_part,
)
from src.isotoda.logging import MonitorLogger

MANIFOLD_TABLES = {
    3: (1, 0, 2, 0, 2, 0, 1),
    4: (1, 1, 6, 2, 16, 2, 6, 1, 1),
    5: (1, 2, 13, 9, 65, 16, 65, 9, 13, 2, 1),
    6: (1, 3, 23, 25, 203, 67, 456, 67, 203, 25, 23, 3, 1),
}

DEGENERATE_TABLES = {
    4: (1, 0, 3, 1, 16, 3, 9, 2, 1),
    5: (1, 0, 4, 2, 57, 16, 77, 22, 24, 4, 1),
    6: (1, 0, 5, 4, 167, 55, 471, 115, 276, 61, 39, 5, 1),
}


class TestRationalSeries:
    """Test cases for RationalSeries."""

    def test_expand_inverse(self):
        """Test 1/(1 - t^2)^2 expands to 1 + 2t^2 + 3t^4 + ..."""
        assert RationalSeries((1,), 2).expand(7) == [1, 0, 2, 0, 3, 0, 4]

    def test_zero_exponent(self):
        """Test a polynomial is its own expansion."""
        assert RationalSeries((1, 2, 3), 0).expand(5) == [1, 2, 3, 0, 0]

    def test_check_exact(self):
        """Test multiplying back by the denominator recovers the numerator."""
        for n in (3, 4, 5):
            assert principal_part(n).check_exact(30)
            assert collar_series(n).check_exact(30)

    def test_add_polynomial(self):
        """Test adding a polynomial keeps the denominator."""
        series = RationalSeries((1,), 1).add_polynomial((0, 1))
        assert series.denominator_exponent == 1
        assert series.expand(6) == [1, 1, 1, 0, 1, 0]

    def test_invalid(self):
        """Test negative exponents and empty expansions are rejected."""
        with pytest.raises(ValidationError, match="non-negative"):
            RationalSeries((1,), -1)
        with pytest.raises(ValidationError, match="terms must be at least 1"):
            RationalSeries((1,), 1).expand(0)

    def test_describe(self):
        """Test the closed form text names the denominator."""
        assert principal_part(3).describe().endswith("/(1 - t**2)**2")


class TestEquivariantSeries:
    """Test cases for the collar and full-space series."""

    def test_principal_part_numerator(self):
        """Test the numerator carries h_i at t^{2i}."""
        series = principal_part(3)
        assert series.numerator[:7] == (1, 0, 0, 0, 6, 0, -1)
        assert series.denominator_exponent == 2

    def test_collar_tail(self):
        """Test (1 + t)^n - 1 - t."""
        assert collar_tail(3) == [0, 2, 3, 1]
        assert collar_tail(4) == [0, 3, 6, 4, 1]

    def test_full_series_n3(self):
        """Test the full series for n=3 expands like (1+2t^2+2t^4+t^6)/(1-t^2)^2."""
        full = equivariant_series_full(3)
        assert full.remainder_known
        coefficients = full.expand(20)
        assert coefficients[:9] == [1, 0, 4, 0, 9, 0, 15, 0, 21]
        for k in range(2, 10):
            assert coefficients[2 * k] == 6 * k - 3
            assert coefficients[2 * k + 1] == 0
        assert coefficients == RationalSeries((1, 0, 2, 0, 2, 0, 1), 2).expand(20)

    def test_collar_agrees_above_dimension(self):
        """Test the collar and full series differ only in degrees up to n."""
        full = equivariant_series_full(3).expand(20)
        collar = equivariant_series_collar(3, 20)
        assert collar[:4] == [1, 2, 5, 1]
        assert collar[4:] == full[4:]

    def test_unknown_remainder(self):
        """Test the full series for n=4 is reported but not expanded."""
        full = equivariant_series_full(4)
        assert not full.remainder_known
        assert full.describe().endswith("+ R(t)")
        with pytest.raises(ValidationError, match="not determined"):
            full.expand(10)

    def test_supplied_remainder(self):
        """Test an explicit remainder is used."""
        full = equivariant_series_full(4, remainder=[0, 1])
        assert full.expand(3) == principal_part(4).add_polynomial([0, 1]).expand(3)

    def test_n_too_small(self):
        """Test n < 3 is rejected."""
        with pytest.raises(ValidationError, match="at least 3"):
            equivariant_series_collar(2, 5)


class TestCollarBetti:
    """Test cases for the bigraded collar Betti numbers."""

    def test_n3_table(self):
        """Test the diagonal (1, 6, 3) and the off-diagonal entries for n=3."""
        table = collar_bigraded_betti(3)
        assert [table[p][p] for p in range(3)] == [1, 6, 3]
        assert table[1][0] == 2
        assert table[2][0] == 1
        assert table[2][1] == 3

    def test_shape(self):
        """Test zeros above the diagonal and binomial products below it."""
        for n in range(3, 8):
            table = collar_bigraded_betti(n)
            for p in range(n):
                for q in range(n):
                    if q > p:
                        assert table[p][q] == 0
                    elif q < p:
                        assert table[p][q] == math.comb(n - 1, p) * math.comb(n, q)

    def test_diagonal_from_h2(self):
        """Test the diagonal agrees with the h''-number expression."""
        for n in range(3, 9):
            table = collar_bigraded_betti(n)
            for p, value in collar_diagonal_from_h2(n).items():
                assert table[p][p] == value


class TestBettiTable:
    """Test cases for betti_table."""

    @pytest.mark.parametrize("n", sorted(MANIFOLD_TABLES))
    def test_manifold_tables(self, n):
        """Test the generic spectrum tables."""
        table = betti_table(n, 1, 1)
        assert table.betti == MANIFOLD_TABLES[n]
        assert is_palindromic(table.betti)

    @pytest.mark.parametrize("n", sorted(DEGENERATE_TABLES))
    def test_degenerate_tables(self, n):
        """Test the most degenerate spectrum tables."""
        n_plus, n_minus = degenerate_split(n)
        table = betti_table(n, n_plus, n_minus)
        assert table.betti == DEGENERATE_TABLES[n]
        assert not is_palindromic(table.betti)

    def test_n3_components(self):
        """Test the four pieces for n=3."""
        parts = betti_components(3, 1, 1)
        assert parts.eps == [1, 5, 10, 10, 5, 1]
        assert parts.geq == [1, 3, 5, 5, 2]
        assert parts.leq == [1, 2, 7, 3, 3]
        assert parts.ker == [0, 0, 0, 2, 0, 1]

    def test_euler_characteristic(self):
        """Test chi = n! and beta_1 = n-1-n_plus-n_minus for every split up to n=10."""
        for n in range(3, MAX_BETTI_N + 1):
            splits = [(p, q) for p in range(1, n - 1) for q in range(1, n - p)]
            assert degenerate_split(n) in splits
            for n_plus, n_minus in splits:
                table = betti_table(n, n_plus, n_minus)
                assert table.euler == math.factorial(n)
                assert table.betti[1] == n - 1 - n_plus - n_minus
                assert table.betti[1] == table.pi1_rank

    def test_monitor_called(self):
        """Test the Euler characteristic is reported to the monitor."""
        monitor = Mock(spec=MonitorLogger)
        betti_table(4, 1, 1, monitor=monitor)
        args, kwargs = monitor.log_monitor.call_args
        assert args[0] == 'euler_characteristic'
        assert args[3] is True
        assert kwargs['component'] == 'homology'

    def test_parameter_errors(self):
        """Test out-of-range parameters."""
        with pytest.raises(ValidationError, match="at most 10"):
            betti_table(11, 1, 1)
        with pytest.raises(ValidationError, match="must not exceed n - 1"):
            betti_table(4, 2, 2)
        with pytest.raises(ValidationError, match="at least 1"):
            betti_table(4, 0, 1)
        with pytest.raises(ValidationError, match="at least 3"):
            betti_table(2, 1, 1)

    def test_table_validation(self):
        """Test malformed Betti lists are rejected."""
        with pytest.raises(ValidationError, match="expected 7 Betti numbers"):
            BettiTable(n=3, n_plus=1, n_minus=1, betti=(1, 0, 2))
        with pytest.raises(ValidationError, match="beta_0 must be 1"):
            BettiTable(n=3, n_plus=1, n_minus=1, betti=(2, 0, 2, 0, 2, 0, 1))
        with pytest.raises(ValidationError, match="negative"):
            BettiTable(n=3, n_plus=1, n_minus=1, betti=(1, -1, 2, 0, 2, 0, 1))

    def test_degenerate_split(self):
        """Test ((n-1)//2, n//2)."""
        assert degenerate_split(3) == (1, 1)
        assert degenerate_split(6) == (2, 3)
        assert degenerate_split(7) == (3, 3)

    def test_to_dict(self):
        """Test the serialized table."""
        data = betti_table(3, 1, 1).to_dict()
        assert data['betti'] == list(MANIFOLD_TABLES[3])
        assert data['euler'] == 6
        assert data['pi1_rank'] == 0


class TestDiagnostics:
    """Test cases for orbit Poincare polynomials and diagnostics."""

    def test_orbit_poincare(self):
        """Test the orbit space for n=3 looks like S^4."""
        assert orbit_poincare(3, 1, 1) == [1, 0, 0, 0, 1]

    def test_orbit_poincare_free_factor(self):
        """Test free directions contribute (1 + t)^k."""
        assert orbit_poincare(4, 1, 1) == [1, 1, 0, 0, 1, 1]

    def test_diagnostics_n3(self):
        """Test n=3 has no odd cohomology."""
        result = diagnostics(3, 1, 1)
        assert result.euler == 6
        assert result.pi1_rank == 0
        assert result.odd_betti_total == 0
        assert result.equivariantly_formal
        assert result.orbit_poincare == (1, 0, 0, 0, 1)

    def test_diagnostics_n4(self):
        """Test n=4 has odd cohomology and is not formal."""
        result = diagnostics(4, 1, 1)
        assert result.odd_betti_total == 6
        assert not result.equivariantly_formal
        assert result.to_dict()['pi1_rank'] == 1
