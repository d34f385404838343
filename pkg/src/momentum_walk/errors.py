"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """A run was asked for with inconsistent or out-of-range settings."""


class ValidationError(ValueError):
    """Input data violates a contract (normalization, shape, range)."""


class LatticeOverflowError(RuntimeError):
    """Probability reached the truncation boundary; the run cannot continue.

    Amplitudes are never reflected or wrapped at the edge of the stored
    lattice, so once the boundary occupancy exceeds the configured tolerance
    the simulation would silently lose probability. The offending step is
    reported in ``step``.
    """

    def __init__(self, step, leak, tolerance):
        self.step = step
        self.leak = leak
        self.tolerance = tolerance
        super().__init__(
            f"boundary occupancy {leak:.3e} exceeds tolerance {tolerance:.3e} "
            f"at step {step}; enlarge half_width"
        )


class NumericError(RuntimeError):
    """A numerical procedure overflowed or lost internal consistency."""


class FitError(RuntimeError):
    """A least-squares fit had too few usable points or degenerate data."""
