import numpy as np
import pytest

from momentum_walk import (InitialCondition, Omega, ProbabilityField,
                           WalkParams, evolve, markov_evolve, new_state)

FIGURE_STEPS = 2000
RECORD_ALL = ("variance", "mean", "participation", "boundary_leak", "norm")


class RunCache:
    """Session-wide cache of figure-scale runs keyed by the omega spelling."""

    def __init__(self):
        self._runs = {}

    def coherent(self, omega: Omega, steps: int = FIGURE_STEPS):
        key = ("coherent", omega.spelling, steps)
        if key not in self._runs:
            params = WalkParams(omega, steps + 64, steps)
            state = new_state(params, InitialCondition())
            self._runs[key] = evolve(state, params, record=RECORD_ALL)
        return self._runs[key]

    def markov(self, steps: int = FIGURE_STEPS):
        key = ("markov", steps)
        if key not in self._runs:
            half = steps + 4
            F = np.zeros(2 * half + 1)
            F[half] = 1.0
            field = ProbabilityField(-half, F)
            self._runs[key] = markov_evolve(field, steps, record=RECORD_ALL)
        return self._runs[key]


@pytest.fixture(scope="session")
def runs():
    return RunCache()
