"""
Core data models for isotoda.
"""

import json
import math
from dataclasses import dataclass, fields
from typing import Any, Dict, Iterable, Optional, Sequence

import numpy as np

from .exceptions import ValidationError


def _frozen_array(values: Iterable, dtype) -> np.ndarray:
    array = np.array(values, dtype=dtype)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class Spectrum:
    """A simple real spectrum lambda_1 < ... < lambda_n with n >= 3."""
    values: np.ndarray

    def __post_init__(self):
        """Validate the spectrum."""
        try:
            values = _frozen_array(self.values, float)
        except (TypeError, ValueError) as e:
            raise ValidationError(f"spectrum values must be real numbers: {e}")
        if values.ndim != 1:
            raise ValidationError("spectrum must be a flat list of numbers")
        if values.size < 3:
            raise ValidationError("spectrum must have at least 3 values")
        if not np.all(np.isfinite(values)):
            raise ValidationError("spectrum values must be finite")
        if np.any(np.diff(values) <= 0):
            raise ValidationError("spectrum must be strictly increasing")
        object.__setattr__(self, 'values', values)

    @property
    def n(self) -> int:
        return int(self.values.size)

    @property
    def diameter(self) -> float:
        return float(self.values[-1] - self.values[0])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Spectrum):
            return NotImplemented
        return bool(np.array_equal(self.values, other.values))

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary for serialization."""
        return {'lambda': [float(v) for v in self.values]}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'Spectrum':
        """Create instance from dictionary."""
        if 'lambda' not in data:
            raise ValidationError("spectrum document requires a 'lambda' list")
        return cls(values=data['lambda'])

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> 'Spectrum':
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True, eq=False)
class PeriodicJacobi:
    """Periodic tridiagonal Hermitian matrix L(a, b).

    ``b[i]`` sits at entry (i, i+1) for i < n-1 and ``b[n-1]`` at the
    corner (n, 1); the conjugates fill the mirrored positions.
    """
    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        """Validate sizes and finiteness."""
        try:
            a = _frozen_array(self.a, float)
            b = _frozen_array(self.b, complex)
        except (TypeError, ValueError) as e:
            raise ValidationError(f"matrix entries must be numbers: {e}")
        if a.ndim != 1 or b.ndim != 1:
            raise ValidationError("a and b must be flat lists")
        if a.size != b.size:
            raise ValidationError(
                f"a and b must have equal lengths (got {a.size} and {b.size})"
            )
        if a.size < 3:
            raise ValidationError("matrix size must be at least 3")
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
            raise ValidationError("matrix entries must be finite")
        object.__setattr__(self, 'a', a)
        object.__setattr__(self, 'b', b)

    @property
    def n(self) -> int:
        return int(self.a.size)

    def assemble(self) -> np.ndarray:
        """Return the Hermitian n x n matrix."""
        n = self.n
        matrix = np.diag(self.a.astype(complex))
        rows = np.arange(n)
        cols = (rows + 1) % n
        matrix[rows, cols] = self.b
        matrix[cols, rows] = np.conj(self.b)
        return matrix

    def with_b(self, b: Sequence[complex]) -> 'PeriodicJacobi':
        return PeriodicJacobi(a=self.a, b=b)

    def with_corner(self, value: complex) -> 'PeriodicJacobi':
        b = np.array(self.b)
        b[-1] = value
        return PeriodicJacobi(a=self.a, b=b)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PeriodicJacobi):
            return NotImplemented
        return bool(np.array_equal(self.a, other.a) and np.array_equal(self.b, other.b))

    def allclose(self, other: 'PeriodicJacobi', tol: float) -> bool:
        """Entrywise comparison within an absolute tolerance."""
        return (
            self.n == other.n
            and bool(np.all(np.abs(self.a - other.a) <= tol))
            and bool(np.all(np.abs(self.b - other.b) <= tol))
        )

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary for serialization."""
        return {
            'a': [float(x) for x in self.a],
            'b': [[float(z.real), float(z.imag)] for z in self.b],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'PeriodicJacobi':
        """Create instance from dictionary."""
        try:
            b = [complex(re, im) for re, im in data['b']]
        except KeyError:
            raise ValidationError("matrix document requires 'a' and 'b'")
        except (TypeError, ValueError):
            raise ValidationError("each entry of 'b' must be a [re, im] pair")
        if 'a' not in data:
            raise ValidationError("matrix document requires 'a' and 'b'")
        return cls(a=data['a'], b=b)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> 'PeriodicJacobi':
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True, eq=False)
class TorusElement:
    """A point t = (t_1, ..., t_n) of the compact torus T^n."""
    t: np.ndarray

    def __post_init__(self):
        """Validate unit modulus."""
        t = _frozen_array(self.t, complex)
        if t.ndim != 1 or t.size == 0:
            raise ValidationError("torus element must be a non-empty flat list")
        if np.any(np.abs(np.abs(t) - 1.0) > 1e-12):
            raise ValidationError("torus element entries must have unit modulus")
        object.__setattr__(self, 't', t)

    @property
    def n(self) -> int:
        return int(self.t.size)

    @classmethod
    def identity(cls, n: int) -> 'TorusElement':
        return cls(t=np.ones(n, dtype=complex))

    @classmethod
    def from_angles(cls, angles: Sequence[float]) -> 'TorusElement':
        return cls(t=np.exp(1j * np.asarray(angles, dtype=float)))

    def __mul__(self, other: 'TorusElement') -> 'TorusElement':
        if self.n != other.n:
            raise ValidationError("torus elements must have equal sizes")
        return TorusElement(t=self.t * other.t)

    def inverse(self) -> 'TorusElement':
        return TorusElement(t=np.conj(self.t))


_OUTPUT_FORMATS = ('json', 'csv', 'svg')
_LOG_LEVELS = ('DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL')


@dataclass
class RunConfig:
    """Numeric defaults and output options for a CLI run."""
    dt: float = 1e-3
    t_end: float = 10.0
    tol: float = 1e-8
    terms: int = 20
    samples: int = 256
    format: Optional[str] = None
    out: Optional[str] = None
    seed: Optional[int] = None
    log_level: str = "WARNING"
    structured_logging: bool = False

    def __post_init__(self):
        """Validate run configuration."""
        for name in ('dt', 't_end', 'tol'):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or isinstance(value, bool) \
                    or not math.isfinite(value) or value <= 0:
                raise ValidationError(f"{name} must be a positive number")
        for name in ('terms', 'samples'):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool) or value <= 0:
                raise ValidationError(f"{name} must be a positive integer")
        if self.format is not None and self.format not in _OUTPUT_FORMATS:
            raise ValidationError(f"format must be one of {list(_OUTPUT_FORMATS)}")
        if self.log_level.upper() not in _LOG_LEVELS:
            raise ValidationError(f"log_level must be one of {list(_LOG_LEVELS)}")

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary for serialization."""
        return {f.name: getattr(self, f.name) for f in fields(self)}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'RunConfig':
        """Create instance from dictionary, rejecting unknown keys."""
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ValidationError(f"unknown configuration keys: {unknown}")
        return cls(**data)

    def merged(self, overrides: Dict[str, Any]) -> 'RunConfig':
        """Return a copy with the non-None overrides applied."""
        data = self.to_dict()
        data.update({k: v for k, v in overrides.items() if v is not None})
        return RunConfig.from_dict(data)
