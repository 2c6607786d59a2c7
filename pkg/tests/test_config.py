"""
Tests for configuration management.
"""

import json
import os
import tempfile
from pathlib import Path
from unittest.mock import patch

import pytest
import yaml

from src.isotoda.config import ConfigurationManager, seed_from_env
from src.isotoda.exceptions import ConfigurationError
from src.isotoda.models import RunConfig


class TestConfigurationManager:
    """Test cases for ConfigurationManager."""

    def setup_method(self):
        """Set up test fixtures."""
        self.config_manager = ConfigurationManager()
        self.temp_dir = tempfile.mkdtemp()

    def teardown_method(self):
        """Clean up test fixtures."""
        import shutil
        shutil.rmtree(self.temp_dir, ignore_errors=True)

    def _write(self, name, content):
        path = Path(self.temp_dir) / name
        path.write_text(content)
        return str(path)

    def test_load_yaml_config(self):
        """Test loading YAML configuration."""
        path = self._write('run.yaml', yaml.dump({'dt': 0.01, 't_end': 2.0}))
        assert self.config_manager.load_config(path) == {'dt': 0.01, 't_end': 2.0}

    def test_load_json_config(self):
        """Test loading JSON configuration."""
        path = self._write('run.json', json.dumps({'terms': 12}))
        assert self.config_manager.load_config(path) == {'terms': 12}

    def test_missing_file(self):
        """Test error on missing configuration file."""
        with pytest.raises(ConfigurationError, match="Configuration file not found"):
            self.config_manager.load_config('/nonexistent/run.yaml')

    def test_unsupported_format(self):
        """Test error on unsupported file extension."""
        path = self._write('run.txt', 'dt = 1')
        with pytest.raises(ConfigurationError, match="Unsupported configuration file format"):
            self.config_manager.load_config(path)

    def test_invalid_yaml(self):
        """Test error on unparsable YAML."""
        path = self._write('run.yaml', 'dt: [0.1')
        with pytest.raises(ConfigurationError, match="Failed to parse YAML"):
            self.config_manager.load_config(path)

    def test_root_must_be_mapping(self):
        """Test error when the document root is not a mapping."""
        path = self._write('run.yaml', '- 1\n- 2\n')
        with pytest.raises(ConfigurationError, match="expected a mapping at root level, got list"):
            self.config_manager.load_config(path)

    def test_env_substitution(self):
        """Test ${VAR} and ${VAR:default} substitution."""
        path = self._write('run.yaml', 'dt: ${ISOTODA_TEST_DT:0.5}\nterms: ${ISOTODA_TEST_TERMS}\n')
        with patch.dict(os.environ, {'ISOTODA_TEST_TERMS': '7'}, clear=False):
            os.environ.pop('ISOTODA_TEST_DT', None)
            data = self.config_manager.load_config(path)
        assert data == {'dt': 0.5, 'terms': 7}

    def test_unset_variable_without_fallback(self):
        """Test a placeholder with no fallback fails when the variable is unset."""
        path = self._write('run.yaml', 'terms: ${ISOTODA_TEST_MISSING}\n')
        with patch.dict(os.environ, {}, clear=True):
            with pytest.raises(ConfigurationError, match="ISOTODA_TEST_MISSING is not set"):
                self.config_manager.load_config(path)

    def test_empty_fallback(self):
        """Test ${VAR:} falls back to an empty value, read by YAML as null."""
        path = self._write('run.yaml', 'seed: ${ISOTODA_TEST_SEED:}\n')
        with patch.dict(os.environ, {}, clear=True):
            assert self.config_manager.load_config(path) == {'seed': None}

    def test_empty_file(self):
        """Test an empty document loads as an empty mapping."""
        path = self._write('run.yaml', '')
        assert self.config_manager.load_config(path) == {}

    def test_validate_config(self):
        """Test a valid mapping becomes a RunConfig."""
        run_config = self.config_manager.validate_config({'dt': 0.01, 'format': 'csv'})
        assert isinstance(run_config, RunConfig)
        assert run_config.dt == 0.01
        assert self.config_manager.get_run_config() is run_config

    def test_validate_rejects_unknown_key(self):
        """Test the schema rejects unknown keys."""
        with pytest.raises(ConfigurationError, match="Invalid configuration"):
            self.config_manager.validate_config({'stepsize': 0.1})

    def test_validate_rejects_non_positive(self):
        """Test the schema rejects non-positive numeric overrides."""
        with pytest.raises(ConfigurationError, match="Invalid configuration at dt"):
            self.config_manager.validate_config({'dt': 0})

    def test_get_run_config_before_load(self):
        """Test accessing the run config before validation fails."""
        with pytest.raises(ConfigurationError, match="Configuration not loaded"):
            self.config_manager.get_run_config()

    def test_build_run_config_layers(self):
        """Test defaults < file < overrides."""
        path = self._write('run.yaml', yaml.dump({'dt': 0.01, 't_end': 3.0}))
        run_config = self.config_manager.build_run_config(
            path, {'t_end': 5.0, 'tol': None},
        )
        assert run_config.dt == 0.01
        assert run_config.t_end == 5.0
        assert run_config.tol == 1e-8
        assert run_config.samples == 256

    def test_build_run_config_defaults_only(self):
        """Test the packaged defaults alone are valid."""
        run_config = self.config_manager.build_run_config()
        assert run_config == RunConfig(seed=run_config.seed)

    def test_sample_config(self):
        """Test the shipped sample configuration validates."""
        sample = Path(__file__).parent.parent / 'sample_config.yaml'
        with patch.dict(os.environ, {}, clear=True):
            run_config = self.config_manager.build_run_config(str(sample))
        assert run_config.t_end == 20.0
        assert run_config.seed == 42
        assert run_config.log_level == 'INFO'


class TestSeedFromEnv:
    """Test cases for seed_from_env."""

    def test_default_when_unset(self):
        """Test the default seed is used when the variable is absent."""
        with patch.dict(os.environ, {}, clear=True):
            assert seed_from_env() == 0
            assert seed_from_env(default=11) == 11

    def test_reads_integer(self):
        """Test an integer seed is read."""
        with patch.dict(os.environ, {'ISOTODA_SEED': '1234'}):
            assert seed_from_env() == 1234

    def test_rejects_non_integer(self):
        """Test a malformed seed raises ConfigurationError."""
        with patch.dict(os.environ, {'ISOTODA_SEED': 'abc'}):
            with pytest.raises(ConfigurationError, match="ISOTODA_SEED must be an integer"):
                seed_from_env()
