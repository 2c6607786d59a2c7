"""
Periodic Toda flow dL/dt = [L, P(L)] with conserved-quantity monitoring.

P(L) is the skew-Hermitian part obtained from the cyclic upper band of L
minus its conjugate transpose. Expanding the commutator on the periodic
band gives

    da_i/dt = 2 (|b_{i-1}|^2 - |b_i|^2),    db_i/dt = b_i (a_i - a_{i+1}),

which is what the integrator advances with classical fixed-step RK4.
The flow preserves the spectrum, B = prod(b_i) and every arg(b_i); these
are checked at each stored step.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from .exceptions import ValidationError
from .logging import MonitorLogger
from .matrix import eigenvalues, product_B
from .models import PeriodicJacobi, Spectrum

logger = logging.getLogger(__name__)

DEFAULT_DT = 1e-3
DEFAULT_DRIFT_TOL = 1e-8


@dataclass(frozen=True)
class DriftRecord:
    """Deviation of the conserved quantities at one stored step."""
    step: int
    time: float
    spectrum_drift: float
    b_drift: float
    phase_drift: float

    def worst(self) -> Tuple[str, float]:
        return max(
            (('spectrum_drift', self.spectrum_drift),
             ('b_drift', self.b_drift),
             ('phase_drift', self.phase_drift)),
            key=lambda item: item[1],
        )


@dataclass
class TodaTrajectory:
    """Stored states of one integration run."""
    times: List[float] = field(default_factory=list)
    states: List[PeriodicJacobi] = field(default_factory=list)
    drift: List[DriftRecord] = field(default_factory=list)
    tol: float = DEFAULT_DRIFT_TOL
    failed: bool = False
    failed_step: Optional[int] = None

    @property
    def final(self) -> PeriodicJacobi:
        return self.states[-1]

    def max_drift(self) -> DriftRecord:
        """Componentwise maxima over all stored steps."""
        return DriftRecord(
            step=self.drift[-1].step if self.drift else 0,
            time=self.times[-1] if self.times else 0.0,
            spectrum_drift=max((d.spectrum_drift for d in self.drift), default=0.0),
            b_drift=max((d.b_drift for d in self.drift), default=0.0),
            phase_drift=max((d.phase_drift for d in self.drift), default=0.0),
        )


def lax_pair(L: PeriodicJacobi) -> np.ndarray:
    """The skew-Hermitian matrix P(L)."""
    n = L.n
    P = np.zeros((n, n), dtype=complex)
    rows = np.arange(n)
    cols = (rows + 1) % n
    P[rows, cols] = L.b
    P[cols, rows] = -np.conj(L.b)
    return P


def vector_field(L: PeriodicJacobi) -> PeriodicJacobi:
    """The commutator [L, P(L)] read back on the periodic band."""
    matrix = L.assemble()
    P = lax_pair(L)
    commutator = matrix @ P - P @ matrix
    rows = np.arange(L.n)
    return PeriodicJacobi(
        a=np.real(np.diag(commutator)),
        b=commutator[rows, (rows + 1) % L.n],
    )


def _band_rhs(a: np.ndarray, b: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    moduli = np.abs(b) ** 2
    return 2.0 * (np.roll(moduli, 1) - moduli), b * (a - np.roll(a, -1))


def _rk4(a: np.ndarray, b: np.ndarray, h: float) -> Tuple[np.ndarray, np.ndarray]:
    ka1, kb1 = _band_rhs(a, b)
    ka2, kb2 = _band_rhs(a + 0.5 * h * ka1, b + 0.5 * h * kb1)
    ka3, kb3 = _band_rhs(a + 0.5 * h * ka2, b + 0.5 * h * kb2)
    ka4, kb4 = _band_rhs(a + h * ka3, b + h * kb3)
    return (
        a + (h / 6.0) * (ka1 + 2.0 * ka2 + 2.0 * ka3 + ka4),
        b + (h / 6.0) * (kb1 + 2.0 * kb2 + 2.0 * kb3 + kb4),
    )


def rk4_step(L: PeriodicJacobi, dt: float) -> PeriodicJacobi:
    """One classical Runge-Kutta step of size dt."""
    a, b = _rk4(np.array(L.a), np.array(L.b), dt)
    return PeriodicJacobi(a=a, b=b)


def _phase_drift(b0: np.ndarray, b: np.ndarray, tol: float) -> float:
    mask = (np.abs(b0) > tol) & (np.abs(b) > tol)
    if not np.any(mask):
        return 0.0
    return float(np.max(np.abs(np.angle(b[mask] / b0[mask]))))


def integrate(L0: PeriodicJacobi, t_end: float, dt: float = DEFAULT_DT,
              tol: float = DEFAULT_DRIFT_TOL, store_every: int = 1,
              monitor: Optional[MonitorLogger] = None) -> TodaTrajectory:
    """Integrate the Toda flow from L0 up to t_end.

    The step is shrunk to t_end / ceil(t_end / dt) so the run ends exactly
    at t_end. Integration stops at the first stored step whose drift
    exceeds ``tol``; the trajectory is then marked failed.

    Args:
        L0: Initial matrix.
        t_end: Final time, positive.
        dt: Requested step, positive.
        tol: Drift tolerance for spectrum, B and phases.
        store_every: Keep (and check) every k-th state.
        monitor: Receives the monitor outcomes; a default one is created.

    Returns:
        The trajectory with drift records for every stored state.

    Raises:
        ValidationError: If t_end, dt, tol or store_every are not positive.
    """
    if t_end <= 0 or dt <= 0:
        raise ValidationError("t_end and dt must be positive")
    if tol <= 0:
        raise ValidationError("tol must be positive")
    if store_every < 1:
        raise ValidationError("store_every must be at least 1")

    monitor = monitor or MonitorLogger()
    steps = max(1, math.ceil(t_end / dt - 1e-9))
    h = t_end / steps

    lambda0 = eigenvalues(L0)
    B0 = product_B(L0)
    b0 = np.array(L0.b)

    trajectory = TodaTrajectory(tol=tol)
    trajectory.times.append(0.0)
    trajectory.states.append(L0)
    trajectory.drift.append(DriftRecord(0, 0.0, 0.0, 0.0, 0.0))

    a, b = np.array(L0.a), np.array(L0.b)
    logger.debug("integrating Toda flow: n=%d, %d steps of %.3e", L0.n, steps, h)
    for step in range(1, steps + 1):
        a, b = _rk4(a, b, h)
        if step % store_every and step != steps:
            continue

        state = PeriodicJacobi(a=a, b=b)
        record = DriftRecord(
            step=step,
            time=step * h,
            spectrum_drift=float(np.max(np.abs(eigenvalues(state) - lambda0))),
            b_drift=abs(product_B(state) - B0),
            phase_drift=_phase_drift(b0, b, tol),
        )
        trajectory.times.append(record.time)
        trajectory.states.append(state)
        trajectory.drift.append(record)

        name, value = record.worst()
        if value > tol:
            trajectory.failed = True
            trajectory.failed_step = step
            monitor.log_monitor(name, value, tol, False, step=step, component='toda')
            logger.warning("Toda integration failed at step %d (t=%.6g)", step, record.time)
            return trajectory

    worst = trajectory.max_drift()
    for name in ('spectrum_drift', 'b_drift', 'phase_drift'):
        monitor.log_monitor(name, getattr(worst, name), tol, True,
                            step=steps, component='toda')
    return trajectory


def classify_equilibrium(L: PeriodicJacobi, tol: float,
                         reference: Optional[Spectrum] = None) -> Optional[Tuple[int, ...]]:
    """Permutation sigma with a_i = lambda_sigma(i), or None off equilibrium.

    Args:
        L: Matrix to inspect.
        tol: Bound on |b_i| and on |a_i - lambda_sigma(i)|.
        reference: Spectrum to match; defaults to the sorted diagonal.

    Returns:
        One-based permutation as a tuple, or None.
    """
    if np.max(np.abs(L.b)) > tol:
        return None
    if reference is None:
        values = np.sort(L.a)
    elif reference.n != L.n:
        raise ValidationError("reference spectrum size does not match matrix size")
    else:
        values = reference.values

    unused = list(range(L.n))
    sigma = []
    for entry in L.a:
        best = min(unused, key=lambda j: abs(entry - values[j]))
        if abs(entry - values[best]) > tol:
            return None
        unused.remove(best)
        sigma.append(best + 1)
    return tuple(sigma)
