"""Measured quantities: distribution, moments, localization and growth fits,
resonance peak structure.

All functions are pure; the moment sums are routed through the selected
kernel backend so a recomputed variance matches the value recorded during
evolution bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ConfigurationError, FitError, ValidationError
from .state import ProbabilityField, SpinorField

#: fields with |sum - 1| beyond this are rejected by moment routines
NORM_TOLERANCE = 1e-9
#: probabilities below this floor are treated as noise in log-domain fits
FIT_FLOOR = 1e-14
#: fraction of occupied sites stripped from each end before a log fit
EDGE_DROP = 0.025
#: slopes shallower than this (per site) count as non-localized
LOCALIZED_SLOPE_MIN = 1e-12
#: a peak must reach this fraction of the global maximum to count
PEAK_PROMINENCE = 1e-6


@dataclass(frozen=True)
class ObservableSeries:
    """Time-indexed observable columns recorded during evolution."""

    times: np.ndarray
    columns: dict

    def __post_init__(self):
        if np.any(np.diff(self.times) <= 0):
            raise ValidationError("times must be strictly increasing")
        for name, col in self.columns.items():
            if len(col) != len(self.times):
                raise ValidationError(f"column {name!r} length mismatch")

    def __len__(self):
        return len(self.times)

    def column(self, name: str) -> np.ndarray:
        try:
            return self.columns[name]
        except KeyError:
            raise ConfigurationError(f"series has no column {name!r}") from None


@dataclass(frozen=True)
class FitResult:
    """Least-squares line fit plus the quantity derived from its slope."""

    slope: float
    intercept: float
    r_squared: float
    n_points: int
    derived_quantity: float
    localized: bool | None = None


@dataclass(frozen=True)
class PeakReport:
    """Local maxima of a distribution and their alignment with a period."""

    positions: tuple          # every detected peak site, ascending
    top_positions: tuple      # the n_top highest peaks, ascending
    n_top: int
    q: int
    aligned: bool             # every top peak within +-1 site of a multiple of q


def distribution(state: SpinorField) -> ProbabilityField:
    """Site probabilities |a_k|^2 + |b_k|^2 as a ProbabilityField."""
    return ProbabilityField(state.k_min, state.probabilities(), state.t)


def interference_term(state: SpinorField, k: int) -> float:
    """Re(a_k * conj(b_k)) at site k."""
    if k < state.k_min or k > state.k_max:
        raise ConfigurationError(f"site {k} outside [{state.k_min}, {state.k_max}]")
    i = state.index_of(k)
    a, b = state.a[i], state.b[i]
    return float(a.real * b.real + a.imag * b.imag)


def variance(field: ProbabilityField) -> float:
    """Second central moment of the site distribution."""
    norm, _, var, _ = _checked_moments(field)
    return var


def mean_position(field: ProbabilityField) -> float:
    """First moment of the site distribution."""
    _, mean, _, _ = _checked_moments(field)
    return mean


def participation_number(field: ProbabilityField) -> float:
    """Effective count of occupied sites, 1 / sum(F_k^2)."""
    _, _, _, part = _checked_moments(field)
    return part


def off_parity_probability(state: SpinorField, origin: int) -> float:
    """Total probability on sites the map cannot reach from ``origin``.

    A single-site start only ever populates sites with (k - origin + t) even,
    so this is exactly zero for a correct evolution.
    """
    k = state.k_values()
    wrong = ((k - origin + state.t) % 2) != 0
    return float(np.sum(state.probabilities()[wrong]))


def localization_length_fit(field: ProbabilityField) -> FitResult:
    """Fit ln F_k against |k - mean| and report the decay length.

    Sites below the noise floor and the outermost 2.5% of occupied sites on
    each side are excluded (log of float dust and ballistic fronts would
    wreck the least squares). The derived quantity is ell in
    F_k ~ exp(-|k - mean| / ell); a fit whose slope is not genuinely negative
    is flagged non-localized.
    """
    F = field.F
    k = field.k_values()
    occupied = np.where(F >= FIT_FLOOR)[0]
    if occupied.size < 3:
        raise FitError(f"only {occupied.size} sites above the fit floor; need >= 3")
    n_drop = math.ceil(EDGE_DROP * occupied.size)
    keep = occupied[n_drop:occupied.size - n_drop]
    if keep.size < 3:
        raise FitError("fewer than 3 sites remain after edge trimming")
    center = float(np.sum(k * F) / np.sum(F))
    x = np.abs(k[keep] - center)
    y = np.log(F[keep])
    slope, intercept, r2 = _line_fit(x, y)
    localized = slope < -LOCALIZED_SLOPE_MIN
    ell = -1.0 / slope if slope != 0.0 else math.inf
    return FitResult(slope, intercept, r2, keep.size, ell, localized)


def growth_exponent_fit(series: ObservableSeries, t_min: int, t_max: int) -> FitResult:
    """Fit ln(variance) against ln(t) on [t_min, t_max]; slope is the exponent."""
    if not (t_max > t_min >= 1):
        raise ConfigurationError(f"need t_max > t_min >= 1, got [{t_min}, {t_max}]")
    t = series.times
    var = series.column("variance")
    sel = (t >= t_min) & (t <= t_max)
    if np.count_nonzero(sel) < 10:
        raise FitError(f"window [{t_min}, {t_max}] holds {np.count_nonzero(sel)} "
                       f"recorded points; need >= 10")
    v = var[sel]
    if np.any(v <= 0.0):
        raise FitError("variance vanishes inside the fit window")
    slope, intercept, r2 = _line_fit(np.log(t[sel].astype(np.float64)), np.log(v))
    return FitResult(slope, intercept, r2, int(np.count_nonzero(sel)), slope)


def quadratic_coefficient(series: ObservableSeries, t_min: int, t_max: int) -> float:
    """Least-squares c in variance ~ c * t^2 over the window (through origin)."""
    t = series.times
    var = series.column("variance")
    sel = (t >= t_min) & (t <= t_max)
    if np.count_nonzero(sel) < 2:
        raise FitError("quadratic-coefficient fit needs >= 2 points")
    tf = t[sel].astype(np.float64)
    t2 = tf * tf
    return float(np.sum(var[sel] * t2) / np.sum(t2 * t2))


def resonance_peaks(field: ProbabilityField, q: int) -> PeakReport:
    """Locate strict local maxima on the occupied parity class and check
    whether the dominant ones sit on (within one site of) multiples of q.

    The number of peaks tested is ceil(width / q) with the participation
    number as the effective width, so only order-of-magnitude peaks are
    judged rather than far-tail ripple.
    """
    if q < 2:
        raise ConfigurationError(f"q must be >= 2, got {q}")
    F = field.F
    k = field.k_values()
    f_max = float(F.max()) if F.size else 0.0
    if f_max <= 0.0:
        raise ValidationError("field holds no probability")
    floor = PEAK_PROMINENCE * f_max

    peaks = []
    for parity in (0, 1):
        sel = np.where((np.mod(k, 2) == parity) & (F > 0.0))[0]
        if sel.size < 3:
            continue
        Fs = F[sel]
        local = (Fs[1:-1] > Fs[:-2]) & (Fs[1:-1] > Fs[2:]) & (Fs[1:-1] >= floor)
        peaks.extend(int(k[sel[j + 1]]) for j in np.where(local)[0])
    peaks.sort()

    width = 1.0 / float(np.sum(F * F) / (np.sum(F) ** 2))
    n_top = max(1, math.ceil(width / q))
    by_height = sorted(peaks, key=lambda kk: F[kk - field.k_min], reverse=True)
    top = sorted(by_height[:n_top])
    aligned = all(_distance_to_multiple(kk, q) <= 1 for kk in top)
    return PeakReport(tuple(peaks), tuple(top), n_top, q, aligned)


def _distance_to_multiple(k: int, q: int) -> int:
    r = k % q
    return min(r, q - r)


def _checked_moments(field: ProbabilityField):
    norm, mean, var, part = kernels.moments(field.F, field.k_min)
    if abs(norm - 1.0) > NORM_TOLERANCE:
        raise ValidationError(
            f"field sums to {norm!r}; must be 1 within {NORM_TOLERANCE:g}"
        )
    return norm, mean, var, part


def _line_fit(x: np.ndarray, y: np.ndarray):
    if x.size < 3:
        raise FitError(f"line fit needs >= 3 points, got {x.size}")
    A = np.vstack([x, np.ones_like(x)]).T
    (slope, intercept), *_ = np.linalg.lstsq(A, y, rcond=None)
    residual = y - (slope * x + intercept)
    ss_res = float(np.sum(residual ** 2))
    ss_tot = float(np.sum((y - np.mean(y)) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0.0 else 0.0
    return float(slope), float(intercept), r2
