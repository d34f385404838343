"""Scale parameter and exactly-reduced drift phases.

The per-site drift factor is ``exp(-i * 2*pi*omega * k**2)``. At desk scale
(|k| up to a few thousand) the raw argument reaches 1e6 radians, where naive
``fmod``-style trigonometry loses ~10 significant digits. That is fatal for
near-resonance scans that must resolve offsets of 1e-9 in omega, and it breaks
the exact site-periodicity that rational omega values are supposed to have.

The reduction here is therefore exact:

* When omega is supplied as a ratio ``p/q`` (optionally plus a small decimal
  offset) or as a decimal literal, the value is held as an exact
  ``fractions.Fraction`` (every float is a dyadic rational, so no information
  is lost). The fractional part of ``omega * k**2`` is then computed in
  integer arithmetic, ``(P * k**2) % Q / Q``, and only the final division and
  the multiplication by 2*pi round. Equal fractions give bit-identical
  angles, so a rational omega yields a phase table that repeats exactly along
  the lattice.

* When the product ``2*pi*omega`` itself is the supplied number (the natural
  parameterization for some experiments), the angle ``c * k**2 mod 2*pi``
  is reduced with 40-digit arithmetic before rounding to a double.

Tables are cached per instance, so the reduction cost is paid once per run.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
from mpmath import mp

from .errors import ConfigurationError

TWO_PI = 2.0 * math.pi


class Omega:
    """The dimensionless scale parameter of the walk's drift phase.

    Construct through one of the classmethods; the chosen spelling is kept
    verbatim for reporting.
    """

    __slots__ = ("kind", "fraction", "two_pi_value", "delta", "spelling", "_angle_cache")

    def __init__(self, kind, fraction, two_pi_value, delta, spelling):
        self.kind = kind                # "rational" | "decimal" | "two_pi"
        self.fraction = fraction        # exact Fraction, or None for two_pi
        self.two_pi_value = two_pi_value
        self.delta = delta
        self.spelling = spelling
        self._angle_cache = {}

    @classmethod
    def rational(cls, p: int, q: int, delta: float = 0.0) -> "Omega":
        """Exact ratio p/q, optionally shifted by a small decimal offset."""
        if q <= 0:
            raise ConfigurationError(f"denominator must be positive, got {q}")
        if not math.isfinite(delta):
            raise ConfigurationError("delta must be finite")
        frac = Fraction(p, q) + Fraction(delta)
        spelling = f"{p}/{q}" if delta == 0.0 else f"{p}/{q}+{delta!r}"
        return cls("rational", frac, None, float(delta), spelling)

    @classmethod
    def decimal(cls, x: float) -> "Omega":
        """A decimal value, honored exactly as the double it parses to."""
        x = float(x)
        if not math.isfinite(x):
            raise ConfigurationError("omega must be finite")
        return cls("decimal", Fraction(x), None, 0.0, repr(x))

    @classmethod
    def two_pi(cls, c: float) -> "Omega":
        """The supplied number is the whole product ``2*pi*omega``."""
        c = float(c)
        if not math.isfinite(c):
            raise ConfigurationError("2*pi*omega must be finite")
        return cls("two_pi", None, c, 0.0, f"two_pi={c!r}")

    @classmethod
    def coerce(cls, value) -> "Omega":
        """Accept an Omega, a Fraction, or a real number."""
        if isinstance(value, cls):
            return value
        if isinstance(value, Fraction):
            return cls.rational(value.numerator, value.denominator)
        if isinstance(value, (int, float)):
            return cls.decimal(value)
        raise ConfigurationError(f"cannot interpret {value!r} as a scale parameter")

    @property
    def value(self) -> float:
        """The parameter as a double (reporting only; never used to build phases)."""
        if self.kind == "two_pi":
            return self.two_pi_value / TWO_PI
        return float(self.fraction)

    def __repr__(self):
        return f"Omega({self.spelling})"

    def angles(self, k_min: int, k_max: int) -> np.ndarray:
        """Reduced angles ``(2*pi*omega*k**2) mod 2*pi`` for k in [k_min, k_max]."""
        key = (k_min, k_max)
        cached = self._angle_cache.get(key)
        if cached is not None:
            return cached
        ks = range(k_min, k_max + 1)
        if self.kind == "two_pi":
            out = _reduce_two_pi_product(self.two_pi_value, ks)
        else:
            p = self.fraction.numerator
            q = self.fraction.denominator
            out = np.empty(k_max - k_min + 1)
            for i, k in enumerate(ks):
                out[i] = TWO_PI * (((p * k * k) % q) / q)
        out.setflags(write=False)
        self._angle_cache[key] = out
        return out

    def phase_table(self, k_min: int, k_max: int) -> np.ndarray:
        """Per-site drift factors ``exp(-i * angle_k)`` over [k_min, k_max]."""
        key = ("table", k_min, k_max)
        cached = self._angle_cache.get(key)
        if cached is not None:
            return cached
        ang = self.angles(k_min, k_max)
        table = np.cos(ang) - 1j * np.sin(ang)
        table.setflags(write=False)
        self._angle_cache[key] = table
        return table


def _reduce_two_pi_product(c: float, ks) -> np.ndarray:
    """Reduce ``c * k**2`` modulo 2*pi in 40-digit arithmetic."""
    out = np.empty(len(ks))
    with mp.workdps(40):
        two_pi = 2 * mp.pi
        cm = mp.mpf(c)
        for i, k in enumerate(ks):
            out[i] = float(mp.fmod(cm * (int(k) * int(k)), two_pi))
    return out
