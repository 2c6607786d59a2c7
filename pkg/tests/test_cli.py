"""
Tests for the command-line interface.
"""

import csv
import io
import json

import pytest
from click.testing import CliRunner

from src.isotoda.cli import EXIT_IO, EXIT_NUMERICAL, EXIT_VALIDATION, betti_rows, cli
from src.isotoda.exceptions import ValidationError
from src.isotoda.models import PeriodicJacobi


@pytest.mark.integration
class TestCli:
    """Integration tests for the isotoda commands."""

    def setup_method(self):
        """Setup test fixtures."""
        self.runner = CliRunner()

    def write_json(self, tmp_path, name, data):
        path = tmp_path / name
        path.write_text(json.dumps(data))
        return str(path)

    def test_analyze(self, tmp_path):
        """Test the invariants of lambda = (0, 1, 2)."""
        path = self.write_json(tmp_path, 'spectrum.json', {'lambda': [0, 1, 2]})
        result = self.runner.invoke(cli, ['analyze', path])

        assert result.exit_code == 0, result.output
        data = json.loads(result.output)
        assert data['M'] == pytest.approx(0.3849, abs=1e-4)
        assert data['m'] == pytest.approx(0.3849, abs=1e-4)
        assert (data['n_plus'], data['n_minus']) == (1, 1)
        assert data['manifold'] == 'NoObstructionGenericSmooth'
        assert data['pi1_rank'] == 0
        assert data['orbit_space'] == 'S^4'
        assert data['chebyshev_degenerate'] is True

    def test_analyze_invalid_spectrum(self, tmp_path):
        """Test a non-increasing spectrum exits with the validation code."""
        path = self.write_json(tmp_path, 'spectrum.json', {'lambda': [0, 2, 1]})
        result = self.runner.invoke(cli, ['analyze', path])
        assert result.exit_code == EXIT_VALIDATION
        assert 'strictly increasing' in result.output

    def test_missing_file(self, tmp_path):
        """Test a missing input file exits with the I/O code."""
        result = self.runner.invoke(cli, ['analyze', str(tmp_path / 'absent.json')])
        assert result.exit_code == EXIT_IO

    def test_bad_config(self, tmp_path):
        """Test an invalid config file exits with the validation code."""
        config = tmp_path / 'config.yaml'
        config.write_text('dt: -1.0\n')
        spectrum = self.write_json(tmp_path, 'spectrum.json', {'lambda': [0, 1, 2]})
        result = self.runner.invoke(cli, ['--config', str(config), 'analyze', spectrum])
        assert result.exit_code == EXIT_VALIDATION
        assert 'Invalid configuration' in result.output

    def test_out_file(self, tmp_path):
        """Test --out writes the result to a file."""
        spectrum = self.write_json(tmp_path, 'spectrum.json', {'lambda': [0, 1, 2]})
        out = tmp_path / 'result.json'
        result = self.runner.invoke(cli, ['analyze', spectrum, '--out', str(out)])
        assert result.exit_code == 0
        assert json.loads(out.read_text())['n_plus'] == 1

    def test_bset_svg(self, tmp_path):
        """Test the default SVG output."""
        path = self.write_json(tmp_path, 'spectrum.json', {'lambda': [0, 1, 2]})
        result = self.runner.invoke(cli, ['bset', path, '--samples', '32'])
        assert result.exit_code == 0, result.output
        assert result.output.startswith('<?xml')
        assert 'boundary-plus' in result.output

    def test_bset_json_query(self, tmp_path):
        """Test the JSON output classifies a query point."""
        path = self.write_json(tmp_path, 'spectrum.json', {'lambda': [0, 1, 2]})
        result = self.runner.invoke(cli, ['bset', path, '--format', 'json', '--samples', '16',
                                          '--point', '0', '0'])
        assert result.exit_code == 0, result.output
        data = json.loads(result.output)
        assert len(data['boundary_plus']) == 16
        assert data['query']['location'] == 'Interior'
        assert data['query']['fiber_dim'] == 2
        assert data['axis_radii']['positive'] == pytest.approx(data['invariants']['m'] / 4)

    def test_bset_too_few_samples(self, tmp_path):
        """Test fewer than 16 samples is rejected."""
        path = self.write_json(tmp_path, 'spectrum.json', {'lambda': [0, 1, 2]})
        result = self.runner.invoke(cli, ['bset', path, '--samples', '8'])
        assert result.exit_code == EXIT_VALIDATION

    def test_toda_json(self, tmp_path):
        """Test a short Toda run from a matrix file."""
        L = PeriodicJacobi(a=[0.2, -0.1, 0.4], b=[0.3, 0.2j, -0.25])
        path = self.write_json(tmp_path, 'matrix.json', L.to_dict())
        result = self.runner.invoke(cli, ['toda', path, '--t-end', '0.5', '--dt', '0.01',
                                          '--tol', '1e-8', '--format', 'json'])
        assert result.exit_code == 0, result.output
        data = json.loads(result.output)
        assert data['failed'] is False
        assert data['max_drift']['spectrum_drift'] <= 1e-8
        assert len(data['final']['a']) == 3

    def test_toda_csv_random(self):
        """Test a seeded random run writes CSV rows."""
        result = self.runner.invoke(cli, ['toda', '--random-n', '4', '--t-end', '0.1',
                                          '--dt', '0.01', '--tol', '1e-6',
                                          '--store-every', '5'])
        assert result.exit_code == 0, result.output
        rows = list(csv.reader(io.StringIO(result.output)))
        assert rows[0][0] == 't'
        assert len(rows) == 4

    def test_toda_drift_failure(self, tmp_path):
        """Test a breached tolerance exits with the numeric code."""
        L = PeriodicJacobi(a=[3.0, -2.0, 1.0], b=[2.0, 1.5, 2.5j])
        path = self.write_json(tmp_path, 'matrix.json', L.to_dict())
        result = self.runner.invoke(cli, ['toda', path, '--t-end', '5', '--dt', '0.5',
                                          '--tol', '1e-14'])
        assert result.exit_code == EXIT_NUMERICAL

    def test_toda_requires_input(self):
        """Test a matrix file or --random-n is required."""
        result = self.runner.invoke(cli, ['toda'])
        assert result.exit_code == EXIT_VALIDATION
        assert '--random-n' in result.output

    def test_monodromy(self):
        """Test the sampled monodromy passes both identities."""
        result = self.runner.invoke(cli, ['monodromy', '--random-n', '5', '--samples', '50',
                                          '--format', 'json'])
        assert result.exit_code == 0, result.output
        data = json.loads(result.output)
        assert len(data['samples']) == 50
        assert data['max_det_error'] <= 1e-10
        assert data['max_trace_error'] <= 1e-7

    def test_monodromy_offset_diagonal(self, tmp_path):
        """Test the trace identity holds for a matrix whose spectrum sits near 500."""
        L = PeriodicJacobi(a=[500.2, 499.9, 500.4, 500.0], b=[0.8, 0.6j, -0.7, 0.5 + 0.3j])
        path = self.write_json(tmp_path, 'matrix.json', L.to_dict())
        result = self.runner.invoke(cli, ['monodromy', path, '--samples', '40',
                                          '--format', 'json'])
        assert result.exit_code == 0, result.output
        data = json.loads(result.output)
        assert data['max_det_error'] <= 1e-10
        assert data['max_trace_error'] <= 1e-7

    def test_analyze_offset_spectrum(self, tmp_path):
        """Test analyze reports the same invariants for a translated spectrum."""
        centered = self.write_json(tmp_path, 'a.json', {'lambda': [0.0, 1.0, 2.0]})
        shifted = self.write_json(tmp_path, 'b.json', {'lambda': [1000.0, 1001.0, 1002.0]})
        first = json.loads(self.runner.invoke(cli, ['analyze', centered]).output)
        second = json.loads(self.runner.invoke(cli, ['analyze', shifted]).output)
        assert second['M'] == pytest.approx(first['M'], rel=1e-10)
        assert second['m'] == pytest.approx(first['m'], rel=1e-10)
        assert (second['n_plus'], second['n_minus']) == (first['n_plus'], first['n_minus'])

    def test_zones(self, tmp_path):
        """Test the collapsed zones of the twisted 4-cycle."""
        L = PeriodicJacobi(a=[0.0] * 4, b=[1.0, 1.0, 1.0, 1j])
        path = self.write_json(tmp_path, 'matrix.json', L.to_dict())
        result = self.runner.invoke(cli, ['zones', path])
        assert result.exit_code == 0, result.output
        data = json.loads(result.output)
        assert data['fiber_dim'] == 0
        assert data['collapsed_upper'] == 1
        assert data['collapsed_lower'] == 2

    def test_zones_svg(self):
        """Test the SVG rendering of a random matrix."""
        result = self.runner.invoke(cli, ['zones', '--random-n', '4', '--format', 'svg'])
        assert result.exit_code == 0, result.output
        assert '<rect' in result.output

    def test_tiling(self):
        """Test the numbers for n=3 with the poset dump."""
        result = self.runner.invoke(cli, ['tiling', '3', '--poset'])
        assert result.exit_code == 0, result.output
        data = json.loads(result.output)
        assert data['h'] == [1, 0, 6, -1]
        assert data['h_pp'] == [1, 0, 0, 1]
        assert data['lattice'] == {'index': 3, 'violations': []}
        assert data['f_vector'] == [6, 9, 3]
        assert data['crystallization']['ok'] is True
        assert len(data['poset']['faces']) == 18

    def test_tiling_out_of_range(self):
        """Test n above the stats range exits with the validation code."""
        result = self.runner.invoke(cli, ['tiling', '21'])
        assert result.exit_code == EXIT_VALIDATION

    def test_betti_table_csv(self):
        """Test the default table rows."""
        result = self.runner.invoke(cli, ['betti-table'])
        assert result.exit_code == 0, result.output
        rows = list(csv.reader(io.StringIO(result.output)))

        assert rows[0][-1] == 'b12'
        assert [row[0] for row in rows[1:]] == ['manifold'] * 4 + ['degenerate'] * 3
        assert rows[4][4:] == ['1', '3', '23', '25', '203', '67', '456', '67', '203',
                               '25', '23', '3', '1']
        assert rows[5][:4] == ['degenerate', '4', '1', '2']
        assert rows[5][4:13] == ['1', '0', '3', '1', '16', '3', '9', '2', '1']

    def test_betti_table_json(self):
        """Test n_max=3 has no degenerate rows."""
        result = self.runner.invoke(cli, ['betti-table', '--n-max', '3', '--format', 'json'])
        assert result.exit_code == 0, result.output
        data = json.loads(result.output)
        assert data['degenerate'] == []
        assert data['manifold'][0]['betti'] == [1, 0, 2, 0, 2, 0, 1]

    def test_betti_rows_range(self):
        """Test n_max outside 3..10 is rejected."""
        with pytest.raises(ValidationError, match="between 3 and 10"):
            betti_rows(11)

    def test_hilbert(self):
        """Test the series for n=3."""
        result = self.runner.invoke(cli, ['hilbert', '3', '--terms', '8'])
        assert result.exit_code == 0, result.output
        data = json.loads(result.output)
        assert data['terms'] == 8
        assert data['full_remainder_known'] is True
        assert data['full'] == [1, 0, 4, 0, 9, 0, 15, 0]
        assert data['collar'] == [1, 2, 5, 1, 9, 0, 15, 0]

    def test_hilbert_unknown_remainder(self):
        """Test the full series is null when its remainder is unknown."""
        result = self.runner.invoke(cli, ['hilbert', '4', '--terms', '6'])
        assert result.exit_code == 0, result.output
        data = json.loads(result.output)
        assert data['full_remainder_known'] is False
        assert data['full'] is None
        assert data['full_closed_form'].endswith('+ R(t)')
