"""Lattice state types and run parameters.

The walker lives on an integer lattice k in [-K, K] with a two-component
complex amplitude per site. Storage is dense: the resonant regimes fill the
ballistic light cone, so sparse bookkeeping would buy nothing at desk scale.

Truncation policy: amplitudes never wrap or reflect. Evolution monitors the
occupancy of the two outermost sites on each edge and aborts once it exceeds
``boundary_tolerance``; with the default sizing ``half_width >= steps + |k0|``
the light cone never reaches the edge and the leak stays exactly zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, ValidationError
from .phases import Omega

#: tolerated norm drift before a state is rejected as corrupted
NORM_DRIFT_LIMIT = 1e-9


@dataclass(frozen=True)
class WalkParams:
    """Run-defining parameters: scale parameter, lattice size, duration."""

    omega: Omega
    half_width: int
    steps: int
    boundary_tolerance: float = 1e-12

    def __post_init__(self):
        object.__setattr__(self, "omega", Omega.coerce(self.omega))
        if self.half_width < 1:
            raise ValidationError(f"half_width must be >= 1, got {self.half_width}")
        if self.steps < 1:
            raise ValidationError(f"steps must be >= 1, got {self.steps}")
        if not (math.isfinite(self.boundary_tolerance) and self.boundary_tolerance >= 0):
            raise ValidationError("boundary_tolerance must be finite and non-negative")

    @property
    def n_sites(self) -> int:
        return 2 * self.half_width + 1


@dataclass(frozen=True)
class InitialCondition:
    """Single-site start: lattice index and a normalized chirality spinor."""

    site: int = 0
    chirality: tuple[complex, complex] = field(default=None)

    def __post_init__(self):
        if self.chirality is None:
            object.__setattr__(self, "chirality", SYMMETRIC_CHIRALITY)
        c_l, c_r = (complex(c) for c in self.chirality)
        object.__setattr__(self, "chirality", (c_l, c_r))
        norm = abs(c_l) ** 2 + abs(c_r) ** 2
        if not math.isfinite(norm) or abs(norm - 1.0) > NORM_DRIFT_LIMIT:
            raise ValidationError(
                f"chirality spinor norm is {norm!r}, must be 1 within {NORM_DRIFT_LIMIT:g}"
            )


#: (1, i)/sqrt(2) -- the spinor that walks symmetrically under the balanced coin
SYMMETRIC_CHIRALITY = (1.0 / math.sqrt(2.0) + 0j, 1j / math.sqrt(2.0))


class SpinorField:
    """Two complex amplitude arrays over k in [k_min, k_min + len - 1].

    ``a`` holds the left-chirality amplitudes, ``b`` the right-chirality ones,
    ``t`` the number of elapsed steps.
    """

    __slots__ = ("k_min", "a", "b", "t")

    def __init__(self, k_min: int, a, b, t: int = 0, validate: bool = True):
        a = np.ascontiguousarray(a, dtype=np.complex128)
        b = np.ascontiguousarray(b, dtype=np.complex128)
        if a.ndim != 1 or a.shape != b.shape:
            raise ValidationError("a and b must be equal-length 1-d arrays")
        self.k_min = int(k_min)
        self.a = a
        self.b = b
        self.t = int(t)
        if validate:
            if not (np.all(np.isfinite(a.view(np.float64)))
                    and np.all(np.isfinite(b.view(np.float64)))):
                raise ValidationError("amplitudes must be finite")
            norm = self.norm()
            if abs(norm - 1.0) > NORM_DRIFT_LIMIT:
                raise ValidationError(
                    f"state norm is {norm!r}, must be 1 within {NORM_DRIFT_LIMIT:g}"
                )

    @property
    def n_sites(self) -> int:
        return self.a.shape[0]

    @property
    def k_max(self) -> int:
        return self.k_min + self.n_sites - 1

    def k_values(self) -> np.ndarray:
        return np.arange(self.k_min, self.k_min + self.n_sites)

    def index_of(self, k: int) -> int:
        return k - self.k_min

    def probabilities(self) -> np.ndarray:
        a, b = self.a, self.b
        return a.real ** 2 + a.imag ** 2 + b.real ** 2 + b.imag ** 2

    def norm(self) -> float:
        return float(np.sum(self.probabilities()))

    def copy(self) -> "SpinorField":
        return SpinorField(self.k_min, self.a.copy(), self.b.copy(), self.t,
                           validate=False)


class ProbabilityField:
    """A real occupation-probability array over k in [k_min, ...]."""

    __slots__ = ("k_min", "F", "t")

    def __init__(self, k_min: int, F, t: int = 0):
        F = np.ascontiguousarray(F, dtype=np.float64)
        if F.ndim != 1 or F.shape[0] == 0:
            raise ValidationError("F must be a non-empty 1-d array")
        if not np.all(np.isfinite(F)):
            raise ValidationError("probabilities must be finite")
        if np.any(F < 0.0):
            raise ValidationError("probabilities must be non-negative")
        self.k_min = int(k_min)
        self.F = F
        self.t = int(t)

    @property
    def n_sites(self) -> int:
        return self.F.shape[0]

    @property
    def k_max(self) -> int:
        return self.k_min + self.n_sites - 1

    def k_values(self) -> np.ndarray:
        return np.arange(self.k_min, self.k_min + self.n_sites)

    def total(self) -> float:
        return float(np.sum(self.F))

    def copy(self) -> "ProbabilityField":
        return ProbabilityField(self.k_min, self.F.copy(), self.t)


def new_state(params: WalkParams, init: InitialCondition) -> SpinorField:
    """All-zero lattice with the initial spinor placed at ``init.site``."""
    if abs(init.site) > params.half_width:
        raise ConfigurationError(
            f"initial site {init.site} outside lattice |k| <= {params.half_width}"
        )
    n = params.n_sites
    a = np.zeros(n, dtype=np.complex128)
    b = np.zeros(n, dtype=np.complex128)
    i = init.site + params.half_width
    a[i], b[i] = init.chirality
    return SpinorField(-params.half_width, a, b, t=0)


def probability_at(state: SpinorField, k: int) -> float:
    """Occupation probability of site k; sites outside the store hold zero."""
    if k < state.k_min or k > state.k_max:
        return 0.0
    i = state.index_of(k)
    a = state.a[i]
    b = state.b[i]
    return float(a.real ** 2 + a.imag ** 2 + b.real ** 2 + b.imag ** 2)
