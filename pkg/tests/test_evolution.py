import math

import numpy as np
import pytest

from momentum_walk import (ConfigurationError, InitialCondition,
                           LatticeOverflowError, Omega, ProbabilityField,
                           ValidationError, WalkParams, boundary_probability,
                           coin_step, distribution, evolve, markov_evolve,
                           markov_step, new_state, phase_step,
                           probability_at, shift_step, step, variance)

from oracles import hadamard_walk, walk_distribution, walk_moments

INV_SQRT2 = 1.0 / math.sqrt(2.0)
OMEGA0 = Omega.rational(0, 1)


def make_state(half_width=8, site=0, chirality=(1.0, 0.0)):
    params = WalkParams(OMEGA0, half_width, 1)
    return new_state(params, InitialCondition(site, chirality)), params


class TestCoinStep:
    def test_on_left_basis_state(self):
        st, _ = make_state()
        out = coin_step(st)
        i = out.index_of(0)
        assert out.a[i] == INV_SQRT2 and out.b[i] == INV_SQRT2

    def test_on_right_basis_state(self):
        st, _ = make_state(chirality=(0.0, 1.0))
        out = coin_step(st)
        i = out.index_of(0)
        assert out.a[i] == INV_SQRT2 and out.b[i] == -INV_SQRT2

    def test_involution(self):
        rng = np.random.default_rng(7)
        a = rng.normal(size=9) + 1j * rng.normal(size=9)
        b = rng.normal(size=9) + 1j * rng.normal(size=9)
        scale = math.sqrt(np.sum(np.abs(a) ** 2 + np.abs(b) ** 2))
        st = __import__("momentum_walk").SpinorField(-4, a / scale, b / scale)
        twice = coin_step(coin_step(st))
        np.testing.assert_allclose(twice.a, st.a, rtol=0, atol=1e-15)
        np.testing.assert_allclose(twice.b, st.b, rtol=0, atol=1e-15)


class TestShiftStep:
    def test_left_component_moves_down(self):
        st, _ = make_state()
        out = shift_step(st)
        assert out.a[out.index_of(-1)] == 1.0
        assert probability_at(out, 0) == 0.0

    def test_right_component_moves_up(self):
        st, _ = make_state(chirality=(0.0, 1.0))
        out = shift_step(st)
        assert out.b[out.index_of(1)] == 1.0

    def test_boundary_overflow(self):
        st, _ = make_state(half_width=4, site=4, chirality=(1.0, 0.0))
        with pytest.raises(LatticeOverflowError):
            shift_step(st)


class TestPhaseStep:
    def test_integer_omega_is_identity(self):
        st, _ = make_state(chirality=(INV_SQRT2, 1j * INV_SQRT2))
        for val in (0, 1, 2):
            out = phase_step(st, Omega.rational(val, 1))
            assert np.array_equal(out.a, st.a) and np.array_equal(out.b, st.b)

    def test_origin_site_is_never_rotated(self):
        st, _ = make_state()
        out = phase_step(st, Omega.two_pi(0.37))
        assert out.a[out.index_of(0)] == 1.0

    def test_explicit_rotation_value(self):
        # site k=1 with the whole product 2*pi*omega = 0.1
        a = np.zeros(9, complex)
        a[5] = 1.0
        st = __import__("momentum_walk").SpinorField(-4, a, np.zeros(9, complex))
        out = phase_step(st, Omega.two_pi(0.1))
        expected = complex(math.cos(0.1), -math.sin(0.1))
        assert out.a[5] == pytest.approx(expected, abs=1e-16)

    def test_probabilities_unchanged_elementwise(self):
        st, params = make_state(chirality=(INV_SQRT2, 1j * INV_SQRT2))
        st = step(st, params)
        out = phase_step(st, Omega.two_pi(0.7))
        assert np.array_equal(out.probabilities(), st.probabilities())


class TestStep:
    def test_symmetric_first_step(self):
        st, params = make_state(chirality=(INV_SQRT2, 1j * INV_SQRT2))
        out = step(st, params)
        assert out.t == 1
        assert probability_at(out, -1) == pytest.approx(0.5, abs=1e-15)
        assert probability_at(out, 1) == pytest.approx(0.5, abs=1e-15)
        assert out.a[out.index_of(-1)] == pytest.approx((1 + 1j) / 2, abs=1e-15)
        assert out.b[out.index_of(1)] == pytest.approx((1 - 1j) / 2, abs=1e-15)

    def test_two_steps_from_left_state(self):
        st, _ = make_state()
        params = WalkParams(OMEGA0, 8, 2)
        out = step(step(st, params), params)
        dist = {k: probability_at(out, k) for k in (-2, 0, 2)}
        assert dist[-2] == pytest.approx(0.25, abs=1e-15)
        assert dist[0] == pytest.approx(0.5, abs=1e-15)
        assert dist[2] == pytest.approx(0.25, abs=1e-15)

    def test_matches_sub_step_composition_exactly(self):
        st, _ = make_state(half_width=40, chirality=(INV_SQRT2, 1j * INV_SQRT2))
        params = WalkParams(Omega.two_pi(0.3), 40, 1)
        cur = st
        for _ in range(20):
            direct = step(cur, params)
            composed = phase_step(shift_step(coin_step(cur)), params.omega)
            assert np.array_equal(direct.a, composed.a)
            assert np.array_equal(direct.b, composed.b)
            cur = direct

    def test_integer_omega_reduces_to_plain_walk(self):
        runs = []
        for val in (0, 1, 2):
            st, _ = make_state(half_width=64, chirality=(INV_SQRT2, 1j * INV_SQRT2))
            params = WalkParams(Omega.rational(val, 1), 64, 1)
            for _ in range(60):
                st = step(st, params)
            runs.append(st)
        for other in runs[1:]:
            assert np.array_equal(runs[0].a, other.a)
            assert np.array_equal(runs[0].b, other.b)

    def test_lattice_mismatch(self):
        st, _ = make_state(half_width=8)
        with pytest.raises(ConfigurationError):
            step(st, WalkParams(OMEGA0, 9, 1))


class TestAgainstIndependentOracle:
    def test_drift_free_run_matches_dict_walk_exactly(self):
        steps = 120
        st, _ = make_state(half_width=steps + 2,
                           chirality=(INV_SQRT2, 1j * INV_SQRT2))
        params = WalkParams(OMEGA0, steps + 2, steps)
        _, final = evolve(st, params)
        ref = hadamard_walk(0, (INV_SQRT2, 1j * INV_SQRT2), steps)
        for k, (al, br) in ref.items():
            i = final.index_of(k)
            assert final.a[i] == al
            assert final.b[i] == br
        # and nothing extra is populated
        ref_dist = walk_distribution(ref)
        total = sum(ref_dist.values())
        assert final.norm() == pytest.approx(total, abs=1e-13)

    def test_spread_speed_matches_known_ballistic_limit(self):
        # the balanced-coin walk spreads with variance -> (1 - 1/sqrt(2)) t^2
        steps = 400
        ref = hadamard_walk(0, (INV_SQRT2, 1j * INV_SQRT2), steps)
        _, _, var = walk_moments(ref)
        assert var / steps ** 2 == pytest.approx(1 - INV_SQRT2, abs=1e-3)


class TestMarkov:
    def test_single_split(self):
        F = np.zeros(9)
        F[4] = 1.0
        out = markov_step(ProbabilityField(-4, F))
        assert out.F[3] == 0.5 and out.F[5] == 0.5 and out.F[4] == 0.0
        assert out.t == 1

    def test_uniform_interior_is_fixed(self):
        F = np.full(11, 1 / 11)
        out = markov_step(ProbabilityField(-5, F), boundary_tolerance=1.0)
        np.testing.assert_array_equal(out.F[1:-1], F[1:-1])

    def test_variance_is_exactly_time(self):
        steps = 200
        half = steps + 2
        F = np.zeros(2 * half + 1)
        F[half] = 1.0
        series, _ = markov_evolve(ProbabilityField(-half, F), steps)
        np.testing.assert_allclose(series.column("variance"),
                                   series.times.astype(float),
                                   rtol=0, atol=1e-11)

    def test_overflow_check(self):
        F = np.zeros(5)
        F[0] = 1.0
        with pytest.raises(LatticeOverflowError):
            markov_step(ProbabilityField(0, F))


class TestEvolve:
    def test_zero_steps_rejected(self):
        with pytest.raises(ValidationError):
            WalkParams(OMEGA0, 8, 0)

    def test_unknown_observable_name(self):
        st, params = make_state()
        with pytest.raises(ConfigurationError):
            evolve(st, params, record=("variance", "entropy"))

    def test_equals_repeated_single_steps(self):
        steps = 40
        params = WalkParams(Omega.two_pi(0.1), steps + 2, steps)
        st = new_state(params, InitialCondition())
        _, fast = evolve(st, params)
        slow = st
        for _ in range(steps):
            slow = step(slow, params)
        assert np.abs(fast.a - slow.a).max() < 1e-13
        assert np.abs(fast.b - slow.b).max() < 1e-13
        assert fast.t == slow.t == steps

    def test_input_state_is_not_mutated(self):
        st, params = make_state(chirality=(INV_SQRT2, 1j * INV_SQRT2))
        before = st.a.copy()
        evolve(st, params)
        assert np.array_equal(st.a, before) and st.t == 0

    def test_stride_recording(self):
        steps = 50
        params = WalkParams(OMEGA0, steps + 2, steps)
        st = new_state(params, InitialCondition())
        series, _ = evolve(st, params, stride=20)
        assert list(series.times) == [20, 40, 50]

    def test_determinism(self):
        params = WalkParams(Omega.two_pi(0.2), 80, 64)
        st = new_state(params, InitialCondition())
        s1, f1 = evolve(st, params)
        s2, f2 = evolve(st, params)
        assert np.array_equal(f1.a, f2.a)
        assert np.array_equal(s1.column("variance"), s2.column("variance"))

    def test_overflow_reports_the_offending_step(self):
        params = WalkParams(OMEGA0, 10, 40)  # light cone hits the edge
        st = new_state(params, InitialCondition())
        with pytest.raises(LatticeOverflowError) as err:
            evolve(st, params)
        assert 8 <= err.value.step <= 11

    def test_light_cone_runs_never_leak(self):
        params = WalkParams(Omega.two_pi(0.1), 70, 64)
        st = new_state(params, InitialCondition())
        series, final = evolve(st, params)
        assert np.all(series.column("boundary_leak") == 0.0)
        assert boundary_probability(final) == 0.0

    def test_recomputed_variance_matches_last_record_exactly(self):
        params = WalkParams(Omega.two_pi(0.7), 80, 64)
        st = new_state(params, InitialCondition())
        series, final = evolve(st, params)
        assert variance(distribution(final)) == series.column("variance")[-1]
