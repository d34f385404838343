"""Stationary states of the one-step operator and their tight-binding form.

A stationary state of the drifted walk satisfies, site by site,

    f_k a_k = a_{k+1} + b_{k+1}
    f_k b_k = a_{k-1} - b_{k-1}          with  f_k = sqrt(2) e^{i(2 pi omega k^2 - w)},

where w is the quasienergy. Such a pair is built here by a two-sided
recursion from a seed at the origin. After the change of variable
(alpha_k, beta_k) = i^k f_k (a_k, b_k) each component obeys a three-term
relation with complex on-site coefficients,

    g_k alpha_k = alpha_{k+1} + alpha_{k-1},       g_k = i (f_{k+1} - conj(f_k)),
    gt_k beta_k = beta_{k+1} + beta_{k-1},         gt_k = i (f_{k-1} - conj(f_k)),

and eliminating the imaginary parts turns the alpha relation into a
five-site lattice equation with real coefficients,

    T_k alpha_k + sum_{l != k} W_kl alpha_l = 0,

with the diagonal (kinetic) term T_k built from the real/imaginary parts of
g and a hopping band W that vanishes beyond |l - k| = 2. For generic omega
the T_k sequence is pseudo-random along the lattice, which is the standard
route to exponentially localized eigenstates of disordered chains; the
routines here verify the whole chain numerically and characterize T_k.

Generic recursion solutions grow exponentially, so the builder rescales
periodically; rescaling multiplies every stored amplitude, keeping the
sequence an exact solution. Keep windows modest (|k| of a few hundred).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, NumericError, ValidationError
from .phases import TWO_PI, Omega

SQRT2 = math.sqrt(2.0)

#: relative tolerance on the stationary-state relations after the recursion
RECURSION_RESIDUAL_TOL = 1e-10
#: frozen verification thresholds for the transformed three-term relation
#: and the real-coefficient lattice form (observed residuals are ~1e-15)
SECOND_ORDER_RESIDUAL_TOL = 1e-10
ANDERSON_RESIDUAL_TOL = 1e-10

#: |g imaginary part| below this across the window makes T and W vanish
#: identically and the lattice form vacuous
DEGENERATE_G_IMAG = 1e-14

_RESCALE_EVERY = 32
_RESCALE_THRESHOLD = 1e50


@dataclass(frozen=True)
class QuasiEnergy:
    """Phase of the one-step eigenvalue, reduced to [0, 2*pi)."""

    w: float

    def __post_init__(self):
        if not math.isfinite(self.w):
            raise ValidationError("quasienergy must be finite")
        object.__setattr__(self, "w", self.w % TWO_PI)


@dataclass(frozen=True)
class AndersonCoefficients:
    """Site factors f, three-term coefficients g / g_tilde, and the
    real-coefficient lattice terms T (diagonal) and W (hopping band).

    Index conventions: ``f[j]`` is the factor at site ``k_min + j``;
    ``g`` starts at ``k_min``, ``g_tilde`` at ``k_min + 1``; ``T`` and the
    four ``W`` bands (offsets -2, -1, +1, +2) start at ``k_min + 1`` and
    end at ``k_max - 2``.
    """

    k_min: int
    k_max: int
    f: np.ndarray
    g: np.ndarray
    g_tilde: np.ndarray
    T: np.ndarray
    W: dict

    def f_at(self, k: int) -> complex:
        return complex(self.f[k - self.k_min])

    def g_at(self, k: int) -> complex:
        return complex(self.g[k - self.k_min])

    def g_tilde_at(self, k: int) -> complex:
        return complex(self.g_tilde[k - self.k_min - 1])

    def T_at(self, k: int) -> float:
        return float(self.T[k - self.k_min - 1])

    def W_at(self, k: int, l: int) -> float:
        off = l - k
        if off in self.W:
            return float(self.W[off][k - self.k_min - 1])
        return 0.0

    @property
    def degenerate(self) -> bool:
        return bool(np.max(np.abs(self.g.imag)) < DEGENERATE_G_IMAG)


@dataclass(frozen=True)
class FloquetPair:
    """A stationary-state amplitude pair with its verification residual."""

    k_min: int
    a: np.ndarray
    b: np.ndarray
    w: QuasiEnergy
    residual: float       # max relative defect of the defining relations
    log_scale: float      # total log of the rescaling absorbed during the build

    @property
    def k_max(self) -> int:
        return self.k_min + self.a.shape[0] - 1


@dataclass(frozen=True)
class TransformedPair:
    """(alpha, beta) = i^k f_k (a, b)."""

    k_min: int
    alpha: np.ndarray
    beta: np.ndarray


@dataclass(frozen=True)
class ResidualReport:
    max_residual: float
    median_residual: float
    degenerate: bool = False


@dataclass(frozen=True)
class KineticStatistics:
    """Distribution statistics of the diagonal term along the lattice."""

    values: np.ndarray
    median: float
    iqr: float
    value_range: float
    lag1_autocorrelation: float
    histogram_counts: np.ndarray
    histogram_edges: np.ndarray
    narrowly_peaked: bool     # iqr < range / 4
    pseudo_random: bool       # |lag-1 autocorrelation| < 0.3
    degenerate: bool


def site_factors(omega, w: QuasiEnergy, k_lo: int, k_hi: int) -> np.ndarray:
    """f_k = sqrt(2) e^{i(2 pi omega k^2 - w)} over [k_lo, k_hi]."""
    omega = Omega.coerce(omega)
    ang = omega.angles(k_lo, k_hi) - w.w
    return SQRT2 * (np.cos(ang) + 1j * np.sin(ang))


def coefficients(omega, w: QuasiEnergy, k_range) -> AndersonCoefficients:
    """Build every coefficient sequence over ``k_range = (k_lo, k_hi)``."""
    k_lo, k_hi = int(k_range[0]), int(k_range[1])
    if k_hi - k_lo < 6:
        raise ValidationError(
            f"range [{k_lo}, {k_hi}] too small; the lattice terms need "
            f"k_hi - k_lo >= 6"
        )
    f = site_factors(omega, w, k_lo, k_hi)
    mags = np.abs(f)
    if np.max(np.abs(mags - SQRT2)) > 1e-14:
        raise NumericError("site factors lost their fixed magnitude sqrt(2)")
    g = 1j * (f[1:] - np.conj(f[:-1]))       # g[j]  lives at site k_lo + j
    gt = 1j * (f[:-1] - np.conj(f[1:]))      # gt[j] lives at site k_lo + j + 1
    gr, gi = np.ascontiguousarray(g.real), np.ascontiguousarray(g.imag)
    # diagonal and hopping terms live on sites k_lo+1 .. k_hi-2; index shift:
    # entry m corresponds to site k = k_lo + 1 + m, so g_{k+d} -> gi[m + 1 + d]
    c = slice(1, -1)          # g_k
    up = slice(2, None)       # g_{k+1}
    dn = slice(0, -2)         # g_{k-1}
    T = gi[c] * (gi[dn] + gi[up]) + gi[up] * gi[dn] * (gr[c] ** 2 + gi[c] ** 2)
    W = {
        +2: gi[c] * gi[dn],
        +1: -gi[dn] * (gr[up] * gi[c] + gi[up] * gr[c]),
        -1: -gi[up] * (gr[dn] * gi[c] + gi[dn] * gr[c]),
        -2: gi[c] * gi[up],
    }
    return AndersonCoefficients(k_lo, k_hi, f, g, gt, T, W)


def floquet_recursion(omega, w: QuasiEnergy, seed, k_range) -> FloquetPair:
    """Build a stationary pair over ``k_range`` from ``seed = (a_0, b_0)``.

    The range must contain the origin. The pair is rescaled in flight to
    dodge overflow (exponential growth is generic); the returned residual is
    the maximum relative defect of the defining relations and must come out
    below ``RECURSION_RESIDUAL_TOL``.
    """
    a0, b0 = complex(seed[0]), complex(seed[1])
    if a0 == 0 and b0 == 0:
        raise ValidationError("seed must not be the zero pair")
    k_lo, k_hi = int(k_range[0]), int(k_range[1])
    if not (k_lo <= 0 <= k_hi) or k_hi - k_lo < 2:
        raise ValidationError(
            f"range [{k_lo}, {k_hi}] must contain the seed site 0 and span >= 3 sites"
        )
    f = site_factors(omega, w, k_lo, k_hi)
    n = k_hi - k_lo + 1
    a = np.zeros(n, dtype=np.complex128)
    b = np.zeros(n, dtype=np.complex128)
    i0 = -k_lo
    a[i0], b[i0] = a0, b0
    log_scale = 0.0

    # upward sweep: b_{k+1} = (a_k - b_k) / f_{k+1}; a_{k+1} = f_k a_k - b_{k+1}
    for j in range(i0, n - 1):
        b[j + 1] = (a[j] - b[j]) / f[j + 1]
        a[j + 1] = f[j] * a[j] - b[j + 1]
        if (j - i0) % _RESCALE_EVERY == _RESCALE_EVERY - 1:
            log_scale += _maybe_rescale(a, b, j + 1)
    # downward sweep: a_{k-1} = (a_k + b_k) / f_{k-1}; b_{k-1} = a_{k-1} - f_k b_k
    for j in range(i0, 0, -1):
        a[j - 1] = (a[j] + b[j]) / f[j - 1]
        b[j - 1] = a[j - 1] - f[j] * b[j]
        if (i0 - j) % _RESCALE_EVERY == _RESCALE_EVERY - 1:
            log_scale += _maybe_rescale(a, b, j - 1)

    if not (np.all(np.isfinite(a.view(np.float64)))
            and np.all(np.isfinite(b.view(np.float64)))):
        raise NumericError("recursion overflowed despite rescaling")

    scale = max(float(np.abs(a).max()), float(np.abs(b).max()))
    if scale > 0:
        log_scale += math.log(scale)
        a /= scale
        b /= scale
    residual = _pair_residual(f, a, b)
    if residual > RECURSION_RESIDUAL_TOL:
        raise NumericError(
            f"stationary-state relations violated: relative residual {residual:.3e}"
        )
    return FloquetPair(k_lo, a, b, w, residual, log_scale)


def transform(pair: FloquetPair, coeffs: AndersonCoefficients) -> TransformedPair:
    """Change of variable (alpha_k, beta_k) = i^k f_k (a_k, b_k)."""
    if (pair.k_min, pair.k_max) != (coeffs.k_min, coeffs.k_max):
        raise ValidationError(
            f"pair range [{pair.k_min}, {pair.k_max}] does not match coefficient "
            f"range [{coeffs.k_min}, {coeffs.k_max}]"
        )
    k = np.arange(pair.k_min, pair.k_max + 1)
    i_pow = np.array([1, 1j, -1, -1j], dtype=np.complex128)[np.mod(k, 4)]
    factor = i_pow * coeffs.f
    return TransformedPair(pair.k_min, factor * pair.a, factor * pair.b)


def second_order_residual(seq: np.ndarray, coeffs: AndersonCoefficients,
                          component: str = "alpha") -> ResidualReport:
    """Defect of the three-term relation for a transformed component.

    ``component`` selects the coefficient sequence: "alpha" checks
    g_k s_k = s_{k+1} + s_{k-1}, "beta" the g_tilde counterpart.
    """
    seq = np.asarray(seq, dtype=np.complex128)
    n = coeffs.k_max - coeffs.k_min + 1
    if seq.shape[0] != n:
        raise ValidationError("sequence length does not match the coefficient range")
    if n < 3:
        raise ValidationError("need at least 3 sites")
    if component == "alpha":
        on_site = coeffs.g[1:]        # g at sites k_min+1 .. k_max-1
    elif component == "beta":
        on_site = coeffs.g_tilde[:-1]  # g_tilde at the same sites
    else:
        raise ConfigurationError(f"component must be 'alpha' or 'beta', not {component!r}")
    scale = float(np.abs(seq).max())
    if scale == 0.0:
        return ResidualReport(0.0, 0.0, degenerate=True)
    defect = np.abs(on_site * seq[1:-1] - seq[2:] - seq[:-2]) / scale
    return ResidualReport(float(defect.max()), float(np.median(defect)))


def anderson_residual(alpha: np.ndarray,
                      coeffs: AndersonCoefficients) -> ResidualReport:
    """Defect of the real-coefficient lattice form on the interior sites.

    Per site the residual is |T_k a_k + sum W_kl a_l| normalized by the
    largest participating term, so a clean cancellation identity scores at
    rounding level regardless of the local amplitude scale.
    """
    alpha = np.asarray(alpha, dtype=np.complex128)
    n = coeffs.k_max - coeffs.k_min + 1
    if alpha.shape[0] != n:
        raise ValidationError("sequence length does not match the coefficient range")
    if n < 7:
        raise ValidationError("need at least 7 sites for the five-site form")
    if coeffs.degenerate:
        return ResidualReport(0.0, 0.0, degenerate=True)
    # T entry m is site k_min+1+m; usable sites need alpha at k +- 2
    m = slice(1, n - 4 + 1)
    T = coeffs.T[m]
    terms = np.stack([
        T * alpha[2:n - 2],
        coeffs.W[+2][m] * alpha[4:n],
        coeffs.W[+1][m] * alpha[3:n - 1],
        coeffs.W[-1][m] * alpha[1:n - 3],
        coeffs.W[-2][m] * alpha[0:n - 4],
    ])
    total = np.abs(terms.sum(axis=0))
    denom = np.abs(terms).max(axis=0)
    ok = denom > 0.0
    defect = np.zeros_like(total)
    defect[ok] = total[ok] / denom[ok]
    return ResidualReport(float(defect.max()), float(np.median(defect)))


def kinetic_statistics(omega, w: QuasiEnergy, n_sites: int) -> KineticStatistics:
    """Distribution statistics of T_k over sites 0 .. n_sites-1."""
    if n_sites < 100:
        raise ConfigurationError(f"need n_sites >= 100, got {n_sites}")
    coeffs = coefficients(omega, w, (-1, n_sites + 1))
    T = coeffs.T[:n_sites]
    value_range = float(T.max() - T.min())
    median = float(np.median(T))
    q25, q75 = np.percentile(T, [25.0, 75.0])
    iqr = float(q75 - q25)
    counts, edges = np.histogram(T, bins=32)
    degenerate = value_range < 1e-12 * max(1.0, float(np.abs(T).max()))
    if degenerate or np.std(T[:-1]) == 0.0 or np.std(T[1:]) == 0.0:
        lag1 = 0.0
        degenerate = True
    else:
        lag1 = float(np.corrcoef(T[:-1], T[1:])[0, 1])
    return KineticStatistics(
        values=T,
        median=median,
        iqr=iqr,
        value_range=value_range,
        lag1_autocorrelation=lag1,
        histogram_counts=counts,
        histogram_edges=edges,
        narrowly_peaked=bool(iqr < value_range / 4.0) if not degenerate else True,
        pseudo_random=bool(abs(lag1) < 0.3),
        degenerate=degenerate,
    )


def _maybe_rescale(a: np.ndarray, b: np.ndarray, j: int) -> float:
    mag = max(abs(a[j]), abs(b[j]))
    if mag > _RESCALE_THRESHOLD:
        a /= mag
        b /= mag
        return math.log(mag)
    return 0.0


def _pair_residual(f: np.ndarray, a: np.ndarray, b: np.ndarray) -> float:
    scale = max(float(np.abs(a).max()), float(np.abs(b).max()))
    if scale == 0.0:
        return 0.0
    r1 = float(np.abs(f[:-1] * a[:-1] - a[1:] - b[1:]).max())
    r2 = float(np.abs(f[1:] * b[1:] - a[:-1] + b[:-1]).max())
    return max(r1, r2) / scale
