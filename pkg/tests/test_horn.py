import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from schurhorn import HermitianOperator, horn_construct, schur_check
from schurhorn.exceptions import NotMajorized
from schurhorn.sampling import make_rng

from ._helpers import hermitian, unitary


def diag_of_conjugate(U, beta):
    return np.real(np.einsum("ij,j,ij->i", U, beta, U.conj()))


def replay_chain(beta, steps):
    """Apply the recorded rotations to diag(beta_sorted) one by one.

    Returns the matrices after each step so diagonal and spectrum can be checked.
    """
    x = np.diag(np.sort(beta)[::-1]).astype(float)
    out = []
    for st_ in steps:
        g = np.eye(len(beta))
        g[st_.i, st_.i], g[st_.i, st_.j] = st_.c, -st_.s
        g[st_.j, st_.i], g[st_.j, st_.j] = st_.s, st_.c
        x = g @ x @ g.T
        out.append(x)
    return out


def test_two_by_two_explicit():
    sol = horn_construct([2, 1], [3, 0])
    expected = np.array([[np.sqrt(2 / 3), -np.sqrt(1 / 3)], [np.sqrt(1 / 3), np.sqrt(2 / 3)]])
    assert np.allclose(sol.U.real, expected)
    # explicit 2x2 product
    m = expected @ np.diag([3, 0]) @ expected.T
    assert np.allclose(np.diag(m), [2, 1])
    assert sol.steps[0].c ** 2 == pytest.approx(2 / 3)


def test_equal_vectors_give_identity():
    sol = horn_construct([5, 2, 2], [5, 2, 2])
    assert np.allclose(sol.U, np.eye(3))
    assert sol.steps == ()


def test_chain_oracle():
    sol = horn_construct([1, 1, 1], [3, 0, 0])
    assert sol.steps[0].c ** 2 == pytest.approx(1 / 3)
    mats = replay_chain([3, 0, 0], sol.steps)
    # after step 1 slot 0 holds target 1 and the pool is (2, 0)
    assert mats[0][sol.steps[0].i, sol.steps[0].i] == pytest.approx(1)
    pool = np.delete(np.diag(mats[0]), sol.steps[0].i)
    assert np.allclose(np.sort(pool)[::-1], [2, 0])
    for m in mats:
        assert np.allclose(np.linalg.eigvalsh(m)[::-1], [3, 0, 0])
    assert np.allclose(np.sort(np.diag(mats[-1])), [1, 1, 1])
    assert sol.residual <= sol.tol


def test_degenerate_n1():
    sol = horn_construct([4.0], [4.0])
    assert np.allclose(sol.U, [[1]])


def test_not_majorized():
    with pytest.raises(NotMajorized):
        horn_construct([3, 0], [2, 1])


def test_unsorted_orderings_respected():
    alpha = np.array([0.5, 2.5, 1.0])
    beta = np.array([0.0, 1.0, 3.0])
    sol = horn_construct(alpha, beta)
    assert np.allclose(diag_of_conjugate(sol.U, beta), alpha)


@pytest.mark.parametrize("n", [2, 3, 5, 16, 33])
@pytest.mark.parametrize("seed", range(4))
def test_round_trip(n, seed):
    rng = make_rng(seed)
    beta = rng.standard_normal(n)
    U0 = unitary(n, seed + 99)
    alpha = diag_of_conjugate(U0, beta)
    sol = horn_construct(alpha, beta)
    assert sol.residual <= sol.tol
    assert np.max(np.abs(sol.U.conj().T @ sol.U - np.eye(n))) <= 1e-9
    spec = np.linalg.eigvalsh(sol.U @ np.diag(beta) @ sol.U.conj().T)
    assert np.allclose(spec, np.sort(beta), atol=1e-9)
    assert sum(1 for s in sol.steps if s.s != 0) <= n - 1


@pytest.mark.parametrize("seed", range(20))
def test_rotation_steps_keep_pool_majorizing(seed):
    # replay: after each rotation the spectrum is beta and the rotated slot holds its target
    rng = make_rng(seed)
    beta = rng.standard_normal(8)
    alpha = diag_of_conjugate(unitary(8, seed), beta)
    sol = horn_construct(alpha, beta, check_steps=True)
    for m, st_ in zip(replay_chain(beta, sol.steps), sol.steps):
        assert np.allclose(np.linalg.eigvalsh(m), np.sort(beta), atol=1e-12)
        assert m[st_.i, st_.i] == pytest.approx(alpha[st_.k], abs=1e-12)
        assert 0 <= st_.c <= 1


def test_ties_in_beta():
    sol = horn_construct([1, 1, 0, 0], [1, 1, 0, 0])
    assert sol.residual <= sol.tol
    sol = horn_construct([0.5, 0.5, 0.5, 0.5], [1, 1, 0, 0])
    assert sol.residual <= sol.tol


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 12), st.integers(0, 2**32 - 1))
def test_round_trip_property(n, seed):
    rng = make_rng(seed)
    beta = np.round(rng.standard_normal(n), int(rng.integers(0, 3)))  # rounding creates ties
    alpha = diag_of_conjugate(unitary(n, seed + 1), beta)
    sol = horn_construct(alpha, beta)
    assert sol.residual <= sol.tol


class TestSchurCheck:
    def test_ones(self):
        v = schur_check([[1, 1], [1, 1]])
        assert v.holds

    def test_diagonal(self):
        v = schur_check(HermitianOperator.diagonal([3, 1, 2]))
        assert v.holds and abs(v.margins[-1]) < 1e-14

    @pytest.mark.parametrize("seed", range(10))
    def test_ensemble(self, seed):
        assert schur_check(hermitian(32, seed)).holds
