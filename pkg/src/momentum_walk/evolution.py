"""One-step unitary map and its incoherent (Markov) counterpart.

A step is coin, then conditional shift, then drift phase keyed to the
destination site:

    a_k(t+1) = (a_{k+1}(t) + b_{k+1}(t)) / sqrt(2) * exp(-i*2*pi*omega*k^2)
    b_k(t+1) = (a_{k-1}(t) - b_{k-1}(t)) / sqrt(2) * exp(-i*2*pi*omega*k^2)

Dropping the interference contribution from the probability balance of this
map leaves the unbiased averaging chain F_k <- (F_{k+1} + F_{k-1}) / 2, which
diffuses with variance exactly t from a single-site start.

The sub-steps below are exposed individually (they compose exactly to
``step``); the batch drivers ``evolve`` / ``markov_evolve`` run the selected
kernel backend and record observables as they go.
"""

from __future__ import annotations

import enum
import math

import numpy as np

from . import kernels
from .errors import ConfigurationError, LatticeOverflowError, ValidationError
from .observables import ObservableSeries
from .phases import Omega
from .state import NORM_DRIFT_LIMIT, ProbabilityField, SpinorField, WalkParams

INV_SQRT2 = 1.0 / math.sqrt(2.0)

#: observable names the drivers can record
RECORDABLE = ("variance", "mean", "participation", "boundary_leak", "norm")
DEFAULT_RECORD = ("variance", "mean", "participation", "boundary_leak")

# column layout produced by the kernels
_COLUMNS = {"variance": 1, "mean": 2, "participation": 3, "boundary_leak": 4, "norm": 5}


class StepMode(enum.Enum):
    COHERENT = "coherent"
    MARKOV = "markov"


def boundary_probability(state) -> float:
    """Occupancy of the two outermost sites on each edge."""
    if isinstance(state, ProbabilityField):
        F = state.F
    else:
        F = state.probabilities()
    n = F.shape[0]
    return float(sum(F[i] for i in sorted({0, 1, n - 2, n - 1})))


def coin_step(state: SpinorField) -> SpinorField:
    """Balanced coin at every site: (a, b) <- ((a+b), (a-b)) / sqrt(2)."""
    na = (state.a + state.b) * INV_SQRT2
    nb = (state.a - state.b) * INV_SQRT2
    return SpinorField(state.k_min, na, nb, state.t, validate=False)


def shift_step(state: SpinorField, boundary_tolerance: float = 1e-12) -> SpinorField:
    """Conditional translation: a moves down-index, b moves up-index.

    Amplitude shifted past the stored range is discarded, which is only legal
    while the boundary occupancy stays below ``boundary_tolerance``.
    """
    leak = boundary_probability(state)
    if leak > boundary_tolerance:
        raise LatticeOverflowError(state.t + 1, leak, boundary_tolerance)
    na = np.zeros_like(state.a)
    nb = np.zeros_like(state.b)
    na[:-1] = state.a[1:]
    nb[1:] = state.b[:-1]
    return SpinorField(state.k_min, na, nb, state.t, validate=False)


def phase_step(state: SpinorField, omega) -> SpinorField:
    """Site-dependent drift factor exp(-i*2*pi*omega*k^2); probabilities unchanged."""
    omega = Omega.coerce(omega)
    table = omega.phase_table(state.k_min, state.k_max)
    return SpinorField(state.k_min, state.a * table, state.b * table,
                       state.t, validate=False)


def step(state: SpinorField, params: WalkParams) -> SpinorField:
    """One full map application; equals phase_step(shift_step(coin_step(.)))."""
    _check_lattice(state, params)
    leak = boundary_probability(state)
    if leak > params.boundary_tolerance:
        raise LatticeOverflowError(state.t + 1, leak, params.boundary_tolerance)
    table = params.omega.phase_table(state.k_min, state.k_max)
    a, b = state.a, state.b
    na = np.zeros_like(a)
    nb = np.zeros_like(b)
    tmp = (a[1:] + b[1:]) * INV_SQRT2
    na[:-1] = tmp * table[:-1]
    tmp = (a[:-1] - b[:-1]) * INV_SQRT2
    nb[1:] = tmp * table[1:]
    out = SpinorField(state.k_min, na, nb, state.t + 1, validate=False)
    norm = out.norm()
    if abs(norm - 1.0) > NORM_DRIFT_LIMIT:
        raise ValidationError(
            f"norm drifted to {norm!r} at step {out.t}; the map must stay unitary"
        )
    return out


def markov_step(field: ProbabilityField,
                boundary_tolerance: float = 1e-12) -> ProbabilityField:
    """Unbiased averaging chain F_k <- (F_{k+1} + F_{k-1}) / 2."""
    if field.n_sites < 3:
        raise ConfigurationError("field must span at least 3 sites")
    leak = boundary_probability(field)
    if leak > boundary_tolerance:
        raise LatticeOverflowError(field.t + 1, leak, boundary_tolerance)
    F = field.F
    nF = np.empty_like(F)
    nF[1:-1] = 0.5 * (F[2:] + F[:-2])
    nF[0] = 0.5 * F[1]
    nF[-1] = 0.5 * F[-2]
    return ProbabilityField(field.k_min, nF, field.t + 1)


def evolve(state: SpinorField, params: WalkParams,
           record=DEFAULT_RECORD, stride: int = 1):
    """Apply ``params.steps`` map iterations, recording observables.

    Returns ``(series, final_state)``; the input state is left untouched.
    Observables are recorded after every step whose absolute time is a
    multiple of ``stride``, and always after the final step.
    """
    _check_lattice(state, params)
    record = _check_record(record)
    final = state.copy()
    table = params.omega.phase_table(state.k_min, state.k_max)
    rec_steps = _record_offsets(state.t, params.steps, stride)
    out = np.empty((rec_steps.shape[0], 6))
    failed = kernels.evolve_coherent(final.a, final.b, np.asarray(table),
                                     state.k_min, state.t, rec_steps,
                                     params.boundary_tolerance, out)
    final.t = state.t + params.steps
    if failed:
        final.t = failed - 1
        raise LatticeOverflowError(failed, boundary_probability(final),
                                   params.boundary_tolerance)
    _check_recorded_norms(out)
    return _series_from(out, record), final


def markov_evolve(field: ProbabilityField, steps: int,
                  boundary_tolerance: float = 1e-12,
                  record=DEFAULT_RECORD, stride: int = 1):
    """Markov analogue of :func:`evolve`, acting on a probability field."""
    if steps < 1:
        raise ValidationError(f"steps must be >= 1, got {steps}")
    if field.n_sites < 3:
        raise ConfigurationError("field must span at least 3 sites")
    record = _check_record(record)
    final = field.copy()
    rec_steps = _record_offsets(field.t, steps, stride)
    out = np.empty((rec_steps.shape[0], 6))
    failed = kernels.markov_evolve(final.F, field.k_min, field.t, rec_steps,
                                   boundary_tolerance, out)
    final.t = field.t + steps
    if failed:
        final.t = failed - 1
        raise LatticeOverflowError(failed, boundary_probability(final),
                                   boundary_tolerance)
    return _series_from(out, record), final


def _check_lattice(state: SpinorField, params: WalkParams):
    if state.n_sites != params.n_sites or state.k_min != -params.half_width:
        raise ConfigurationError(
            f"state lattice [{state.k_min}, {state.k_max}] does not match "
            f"half_width {params.half_width}"
        )


def _check_record(record):
    names = tuple(record)
    for name in names:
        if name not in RECORDABLE:
            raise ConfigurationError(
                f"unknown observable {name!r}; valid names: {', '.join(RECORDABLE)}"
            )
    if not names:
        raise ConfigurationError("record must name at least one observable")
    return names


def _record_offsets(t0: int, steps: int, stride: int) -> np.ndarray:
    if stride < 1:
        raise ConfigurationError(f"stride must be >= 1, got {stride}")
    offsets = [i for i in range(1, steps + 1) if (t0 + i) % stride == 0]
    if not offsets or offsets[-1] != steps:
        offsets.append(steps)
    return np.asarray(offsets, dtype=np.int64)


def _check_recorded_norms(out: np.ndarray):
    drift = np.max(np.abs(out[:, 5] - 1.0))
    if drift > NORM_DRIFT_LIMIT:
        raise ValidationError(
            f"norm drifted by {drift:.3e} during evolution; the map must stay unitary"
        )


def _series_from(out: np.ndarray, record) -> ObservableSeries:
    times = out[:, 0].astype(np.int64)
    columns = {name: out[:, _COLUMNS[name]].copy() for name in record}
    return ObservableSeries(times, columns)
