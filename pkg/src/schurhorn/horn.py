"""Constructive finite Schur-Horn: a real rotation chain prescribing a diagonal.

Given ``alpha < beta`` the solver returns an orthogonal ``U`` (stored as a
complex array) with ``diag(U diag(beta) U*) = alpha``.  Each step consumes
the largest remaining target with a single plane rotation mixing two
remaining eigenvalues ``beta_j >= alpha_k >= beta_{j+1}``; the leftover
``beta_j + beta_{j+1} - alpha_k`` stays in the pool.  The remaining pool is
diagonal between steps, so only diagonal values need tracking.
"""

from dataclasses import dataclass, field

import numpy as np

from .exceptions import NotMajorized, NumericalBreakdown
from .majorization import Mode, _verdict, check_vector_majorization
from .tolerances import DEFAULT
from .tracial import as_operator, eigenvalues
from .validation import check_same_length, check_vector


@dataclass(frozen=True)
class RotationStep:
    """Rotation on slots ``(i, j)``: slot ``i`` receives target ``k``.

    Slots index the decreasingly sorted ``beta``.  The rotation acts as
    ``row_i <- c row_i - s row_j``, ``row_j <- s row_i + c row_j``.
    """

    i: int
    j: int
    c: float
    s: float
    k: int


@dataclass(frozen=True, eq=False)
class HornSolution:
    U: np.ndarray = field(repr=False)
    steps: tuple
    residual: float
    tol: float

    def to_dict(self):
        return {
            "U": [[[float(z.real), float(z.imag)] for z in row] for row in self.U],
            "steps": [vars(s) for s in self.steps],
            "residual": self.residual,
        }


def _permutation(order):
    """``S`` with ``S[i, order[i]] = 1``, so ``(S x)[i] = x[order[i]]``."""
    n = len(order)
    s = np.zeros((n, n))
    s[np.arange(n), order] = 1.0
    return s


def horn_construct(alpha, beta, tol=DEFAULT, check_steps=True):
    """Orthogonal ``U`` with ``diag(U M_beta U*) = alpha`` for ``alpha < beta``.

    Raises :class:`NotMajorized` when the precondition fails.  With
    ``check_steps`` the remaining targets are re-checked against the
    remaining pool after every step.
    """
    alpha = check_vector(alpha, "alpha")
    beta = check_vector(beta, "beta")
    check_same_length(alpha, beta)
    verdict = check_vector_majorization(alpha, beta, Mode.MAJORIZE, tol)
    if not verdict.holds:
        raise NotMajorized(f"alpha is not majorized by beta (worst margin {verdict.worst_margin:.3e})", verdict)

    n = alpha.size
    a_ord = np.argsort(-alpha, kind="stable")
    b_ord = np.argsort(-beta, kind="stable")
    a = alpha[a_ord]
    vals = beta[b_ord].astype(float)
    sup = float(np.max(np.abs(beta)))
    tiny = 1e-14 * sup

    U = np.eye(n)
    active = list(range(n))  # slots of the pool, kept sorted by value decreasing
    consumed = np.empty(n, dtype=int)
    steps = []
    for k in range(n):
        target = a[k]
        pool = vals[active]
        above = np.flatnonzero(pool >= target)
        j = int(above[-1]) if above.size else 0
        direct = j == len(active) - 1 or abs(pool[j] - target) <= tiny
        if abs(pool[j] - target) <= tiny:
            # consume the first of equal pool values so that alpha == beta gives U = I
            j = int(np.flatnonzero(np.abs(pool - target) <= tiny)[0])
        p = active[j]
        if not direct:
            q = active[j + 1]
            x, y = pool[j], pool[j + 1]
            if x - y < tiny:
                if abs(target - x) > tol.maj_tol(n, sup):
                    raise NumericalBreakdown(f"pivot gap {x - y:.3e} at step {k}")
                direct = True
        if not direct:
            c2 = min(max((target - y) / (x - y), 0.0), 1.0)
            c, s = float(np.sqrt(c2)), float(np.sqrt(1.0 - c2))
            row_p, row_q = U[p].copy(), U[q].copy()
            U[p] = c * row_p - s * row_q
            U[q] = s * row_p + c * row_q
            vals[q] = x + y - target
            vals[p] = target
            steps.append(RotationStep(int(p), int(q), c, s, int(a_ord[k])))
        consumed[k] = p
        del active[j]
        if not direct:
            # leftover lies in [y, x]; restore decreasing order around slot q
            active.sort(key=lambda slot: -vals[slot])
        if check_steps and k + 1 < n:
            v = _verdict(a[k + 1:], vals[active], Mode.MAJORIZE, tol)
            if not v.holds:
                raise NumericalBreakdown(f"pool no longer majorizes remaining targets at step {k}")

    W = _permutation(consumed) @ U
    U_final = (_permutation(a_ord).T @ W @ _permutation(b_ord)).astype(np.complex128)
    diag = np.real(np.einsum("ij,j,ij->i", U_final, beta, U_final.conj()))
    residual = float(np.max(np.abs(diag - alpha)))
    return HornSolution(U_final, tuple(steps), residual, tol.horn_tol(n, sup))


def schur_check(A, tol=DEFAULT):
    """Verdict for ``diag(A) < eig(A)``; holds for every Hermitian ``A``."""
    A = as_operator(A, tol)
    return check_vector_majorization(A.diag(), eigenvalues(A, tol), Mode.MAJORIZE, tol)
