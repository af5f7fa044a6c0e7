import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from schurhorn import (
    HermitianOperator,
    StepFunction,
    build_flag,
    diagonal_flag,
    discretize_along_flag,
    dyadic_average,
    spectral_scale,
    trace_norm,
)
from schurhorn.dyadic import discretization_error, select_level
from schurhorn.exceptions import GridMismatch

from ._helpers import hermitian


class TestDyadicAverage:
    def test_constant(self):
        f = StepFunction(np.full(16, 2.5))
        for n in range(5):
            assert np.allclose(dyadic_average(f, n).values, 2.5)

    def test_halves_to_level_zero(self):
        assert dyadic_average(StepFunction(np.array([1.0, 0.0]), 1), 0).values.tolist() == [0.5]

    def test_block_mean_oracle(self):
        lam = spectral_scale(hermitian(64, 0))
        got = dyadic_average(lam, 3).values
        oracle = [sum(lam.values[8 * i + r] for r in range(8)) / 8 for i in range(8)]
        assert np.allclose(got, oracle, atol=1e-15)

    def test_grid_mismatch(self):
        with pytest.raises(GridMismatch):
            dyadic_average(spectral_scale(hermitian(6, 0)), 2)

    def test_coarser_dyadic_input_is_refined(self):
        f = StepFunction(np.array([3.0, 1.0]), 1)
        assert dyadic_average(f, 3).values.tolist() == [3.0] * 4 + [1.0] * 4

    def test_json(self):
        f = dyadic_average(StepFunction(np.arange(8.0)), 2)
        payload = json.loads(json.dumps(f.to_json()))
        assert payload["n"] == 2
        assert np.array_equal(StepFunction.from_json(payload).values, f.values)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(-1e3, 1e3), min_size=32, max_size=32), st.integers(0, 5), st.integers(0, 5))
def test_averaging_algebra(values, m, n):
    f = StepFunction(np.array(values))
    en = dyadic_average(f, n)
    assert en.l1() <= f.l1() + 1e-9
    assert en.sup() <= f.sup() + 1e-9
    assert np.allclose(dyadic_average(en, n).values, en.values)
    composed = dyadic_average(dyadic_average(f, n), m)
    direct = dyadic_average(f, min(m, n))
    assert np.allclose(composed.refine(32), direct.refine(32), atol=1e-9)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(-100, 100), min_size=16, max_size=16), st.integers(0, 4))
def test_averages_of_decreasing_are_decreasing(values, n):
    lam = np.sort(values)[::-1]
    assert np.all(np.diff(dyadic_average(lam, n).values) <= 1e-12)


class TestFlags:
    def test_sorted_diagonal_gives_identity(self):
        assert np.allclose(build_flag(HermitianOperator.diagonal([3, 2, 1])).basis, np.eye(3))

    def test_reversed_diagonal_gives_reversal(self):
        assert np.allclose(build_flag(HermitianOperator.diagonal([1, 2, 3])).basis, np.eye(3)[::-1])

    @pytest.mark.parametrize("seed", range(4))
    def test_reconstruction(self, seed):
        a = hermitian(16, seed)
        flag = build_flag(a)
        lam = spectral_scale(a).values
        rebuilt = sum(lam[i] * (flag.projection(i + 1) - flag.projection(i)) for i in range(16))
        assert np.max(np.abs(rebuilt - a.entries)) <= 1e-9
        for k in range(17):
            assert np.trace(flag.projection(k)).real / 16 == pytest.approx(k / 16)

    def test_diagonal_flag_stays_in_masa(self):
        flag = diagonal_flag([0.5, 2.0, 0.5, 1.0])
        for i in range(2):
            p = flag.block_projection(i, 1)
            assert np.allclose(p, np.diag(np.diag(p)))
        assert np.allclose(flag.rayleigh(HermitianOperator.diagonal([0.5, 2.0, 0.5, 1.0])), [2, 1, 0.5, 0.5])


class TestDiscretize:
    def test_block_constant_is_exact(self):
        a = HermitianOperator.diagonal([4, 4, 1, 1, 1, 1, 0, 0])
        d = discretize_along_flag(a, build_flag(a), 2)
        assert d.scale_error == 0
        assert np.allclose(d.operator.entries, a.entries)

    def test_two_by_two(self):
        a = HermitianOperator.diagonal([1, 0])
        d = discretize_along_flag(a, build_flag(a), 0)
        assert np.allclose(d.operator.entries, 0.5 * np.eye(2))
        assert d.operator_error == pytest.approx(0.5)

    def test_sweep_levels(self):
        a = hermitian(128, 7)
        flag = build_flag(a)
        lam = spectral_scale(a).values
        errors = []
        for n in range(8):
            d = discretize_along_flag(a, flag, n)
            oracle = np.mean(np.abs(lam - np.repeat(lam.reshape(2**n, -1).mean(axis=1), 128 // 2**n)))
            assert d.scale_error == pytest.approx(oracle, abs=1e-12)
            assert abs(d.scale_error - d.operator_error) <= 1e-9
            errors.append(d.scale_error)
        assert all(x >= y - 1e-15 for x, y in zip(errors, errors[1:]))
        assert errors[-1] < 1e-12

    def test_grid_mismatch(self):
        a = hermitian(6, 0)
        with pytest.raises(GridMismatch):
            discretize_along_flag(a, build_flag(a), 2)


def test_select_level():
    lam_b = np.array([2.0, 1, 1, 0])
    lam_a = np.array([1.5, 1.5, 0.5, 0.5])
    assert discretization_error(lam_a, 1) == 0
    assert discretization_error(lam_b, 1) == pytest.approx(0.5)
    n, err_a, err_b = select_level(lam_a, lam_b, 0.3)
    assert (n, err_a, err_b) == (2, 0.0, 0.0)
    assert select_level(lam_a, lam_b, 0.6)[0] == 0
    assert select_level(np.array([1.0, 0, 0]), np.array([1.0, 0, 0]), 0.1)[0] is None


def test_operator_error_equals_trace_norm():
    a = hermitian(32, 1)
    d = discretize_along_flag(a, build_flag(a), 2)
    assert d.operator_error == pytest.approx(trace_norm(a - d.operator), abs=1e-15)
