import math

import numpy as np
import pytest

from momentum_walk import (ConfigurationError, InitialCondition, Omega,
                           ProbabilityField, SpinorField, ValidationError,
                           WalkParams, new_state, probability_at)

INV_SQRT2 = 1.0 / math.sqrt(2.0)


def params(half_width=4, steps=1):
    return WalkParams(Omega.rational(0, 1), half_width, steps)


class TestWalkParams:
    def test_rejects_degenerate_settings(self):
        with pytest.raises(ValidationError):
            WalkParams(Omega.rational(0, 1), 0, 10)
        with pytest.raises(ValidationError):
            WalkParams(Omega.rational(0, 1), 10, 0)
        with pytest.raises(ValidationError):
            WalkParams(Omega.rational(0, 1), 10, 5, boundary_tolerance=-1.0)

    def test_coerces_omega(self):
        p = WalkParams(0.25, 8, 4)
        assert isinstance(p.omega, Omega)
        assert p.n_sites == 17


class TestInitialCondition:
    def test_default_is_the_symmetric_spinor_at_origin(self):
        init = InitialCondition()
        assert init.site == 0
        c_l, c_r = init.chirality
        assert c_l == pytest.approx(INV_SQRT2)
        assert c_r == pytest.approx(1j * INV_SQRT2)

    def test_rejects_non_normalized_chirality(self):
        with pytest.raises(ValidationError):
            InitialCondition(0, (0.7071, 0.7071j))  # off by ~2e-4


class TestNewState:
    def test_single_site_delta(self):
        st = new_state(params(), InitialCondition(0, (1.0, 0.0)))
        assert probability_at(st, 0) == 1.0
        assert st.norm() == 1.0
        assert st.t == 0
        assert np.count_nonzero(st.a) == 1 and np.count_nonzero(st.b) == 0

    def test_symmetric_start_has_no_interference(self):
        st = new_state(params(), InitialCondition())
        i = st.index_of(0)
        beta = (st.a[i] * st.b[i].conjugate()).real
        assert beta == 0.0
        assert probability_at(st, 0) == pytest.approx(1.0, abs=1e-15)

    def test_site_outside_lattice(self):
        with pytest.raises(ConfigurationError):
            new_state(WalkParams(Omega.rational(0, 1), 2, 1),
                      InitialCondition(3, (1.0, 0.0)))


class TestProbabilityAt:
    def test_normalized_site(self):
        st = new_state(params(), InitialCondition())
        assert probability_at(st, 0) == pytest.approx(1.0)

    def test_empty_site_and_out_of_range(self):
        st = new_state(params(), InitialCondition(0, (1.0, 0.0)))
        assert probability_at(st, 2) == 0.0
        assert probability_at(st, 99) == 0.0
        assert probability_at(st, -99) == 0.0

    def test_half_occupied_site(self):
        a = np.zeros(9, complex)
        b = np.zeros(9, complex)
        a[4] = (1 + 1j) / 2          # carries probability 1/2
        b[8] = INV_SQRT2             # parks the rest elsewhere
        st = SpinorField(-4, a, b)
        assert probability_at(st, 0) == pytest.approx(0.5, abs=1e-15)


class TestFieldValidation:
    def test_norm_gate(self):
        a = np.zeros(5, complex)
        a[2] = 0.5
        with pytest.raises(ValidationError):
            SpinorField(-2, a, np.zeros(5, complex))

    def test_shape_gate(self):
        with pytest.raises(ValidationError):
            SpinorField(0, np.zeros(3, complex), np.zeros(4, complex))

    def test_non_finite_rejected(self):
        a = np.zeros(5, complex)
        a[0] = complex(math.nan, 0.0)
        with pytest.raises(ValidationError):
            SpinorField(-2, a, np.zeros(5, complex))

    def test_probability_field_rejects_negative(self):
        with pytest.raises(ValidationError):
            ProbabilityField(0, np.array([0.5, -0.1, 0.6]))
