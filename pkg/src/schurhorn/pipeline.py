"""Approximate a masa element majorized by ``b`` by expectations of unitary conjugates of ``b``.

For diagonal ``a < b`` and ``epsilon > 0`` :func:`reconstruct` returns a
unitary ``u`` with ``||E_A(u b u*) - a||_1 < 2 epsilon``:

1. complete flags for ``a`` (a sort of its diagonal) and ``b`` (eigenvectors);
2. the coarsest dyadic level where both step approximations are
   ``epsilon``-close in trace norm;
3. block averages ``alpha < beta`` of the two spectral scales;
4. Horn rotations ``U`` with ``E_D(U M_beta U*) = M_alpha``;
5. ``u = pi(U) w`` where ``w`` carries the flag blocks of ``b`` onto those of ``a``.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

from .dyadic import CompleteFlag, block_means, diagonal_flag, discretization_error, select_level
from .embedding import BlockStructure, flag_matching_unitary, pi_embed
from .exceptions import DimensionMismatch, LevelExhausted, NotMajorized, NumericalBreakdown
from .horn import horn_construct
from .majorization import MajorizationVerdict, Mode, check_vector_majorization, omega_membership
from .sampling import make_rng
from .tolerances import DEFAULT
from .tracial import as_operator, eigen_decompose, trace_norm
from .validation import check_level, max_dyadic_level


def _r12(x):
    return float(f"{x:.12g}")


@dataclass(frozen=True, eq=False)
class ReconstructionCertificate:
    epsilon: float
    level: int
    alpha: np.ndarray = field(repr=False)
    beta: np.ndarray = field(repr=False)
    verdict: MajorizationVerdict = field(repr=False)
    err_a: float
    err_b: float
    horn_residual: float
    u: np.ndarray = field(repr=False)
    achieved: float
    bound: float
    unitarity_defect: float

    @property
    def ok(self):
        return self.achieved < self.bound

    def to_dict(self, include_u=False):
        """Report form, numbers rounded to 12 significant digits."""
        out = {
            "epsilon": _r12(self.epsilon),
            "n": self.level,
            "alpha": [_r12(x) for x in self.alpha],
            "beta": [_r12(x) for x in self.beta],
            "alpha_majorized_by_beta": bool(self.verdict.holds),
            "err_a": _r12(self.err_a),
            "err_b": _r12(self.err_b),
            "horn_residual": _r12(self.horn_residual),
            "achieved": _r12(self.achieved),
            "bound": _r12(self.bound),
            "unitarity_defect": _r12(self.unitarity_defect),
        }
        if include_u:
            out["u"] = [[[_r12(z.real), _r12(z.imag)] for z in row] for row in self.u]
        return out


def resolution_floor(n, scale_sup, tol=DEFAULT):
    """Smallest epsilon the floating-point model honors (exact recovery costs ``10 eig_tol N``)."""
    return 5.0 * tol.eig * n * max(1.0, scale_sup)


def _check_inputs(a, b, tol):
    a = as_operator(a, tol)
    b = as_operator(b, tol)
    if a.dim != b.dim:
        raise DimensionMismatch(f"dimension mismatch: {a.dim} vs {b.dim}")
    verdict = omega_membership(a, b, tol)
    if not verdict.holds:
        raise NotMajorized(f"a is not majorized by b (worst margin {verdict.worst_margin:.3e}, "
                           f"trace gap {verdict.trace_gap:.3e})", verdict)
    return a, b


def reconstruct(a, b, epsilon, level=None, tol=DEFAULT):
    """Unitary ``u`` with ``||E_A(u b u*) - a||_1 < 2 epsilon`` and its certificate.

    ``level`` forces the dyadic level instead of searching for the coarsest
    admissible one; the certificate then reports whatever it achieves.
    """
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    a, b = _check_inputs(a, b, tol)
    N = a.dim
    flag_a = diagonal_flag(a.diag())
    lam_a = flag_a.rayleigh(a)
    eig_b = eigen_decompose(b, tol)
    lam_b = np.asarray(eig_b.values)
    sup_b = float(np.max(np.abs(lam_b)))
    top = max_dyadic_level(N)

    numeric = resolution_floor(N, sup_b, tol)
    if level is None:
        level, _, _ = select_level(lam_a, lam_b, epsilon, top)
        if level is None or epsilon <= numeric:
            fine = max(discretization_error(lam_a, top), discretization_error(lam_b, top))
            raise LevelExhausted(f"epsilon {epsilon:g} is below the resolution floor", max(fine, numeric))
    else:
        check_level(N, level)
    flag_b = CompleteFlag(b.ctx, eig_b.vectors)
    return _construct(a, b, lam_a, lam_b, flag_a, flag_b, level, epsilon, tol)


def _construct(a, b, lam_a, lam_b, flag_a, flag_b, level, epsilon, tol):
    N = a.dim
    m = N >> level
    alpha = block_means(lam_a, level)
    beta = block_means(lam_b, level)
    verdict = check_vector_majorization(alpha, beta, Mode.MAJORIZE, tol)
    horn = horn_construct(alpha, beta, tol)

    bs = BlockStructure.dyadic(N, level)
    basis_a, basis_b = flag_a.basis, flag_b.basis
    w = flag_matching_unitary(flag_a, flag_b, level)
    u = pi_embed(horn.U, bs, basis_a) @ w

    a_n = (basis_a * np.repeat(alpha, m)) @ basis_a.conj().T
    b_n = (basis_b * np.repeat(beta, m)) @ basis_b.conj().T
    chain = np.real(np.einsum("ij,jk,ik->i", u, b_n, u.conj()))
    chain_defect = max(float(np.max(np.abs(chain - np.real(np.diag(a_n))))),
                       float(np.max(np.abs(a_n - np.diag(np.diag(a_n))))))
    if chain_defect > 1e-10 * max(1.0, float(np.max(np.abs(beta)))):
        raise NumericalBreakdown(f"E_A(u b_n u*) misses sum alpha_i p_i by {chain_defect:.3e}")

    err_a = trace_norm(a.entries - a_n, tol)
    err_b = trace_norm(b.entries - b_n, tol)
    achieved = expectation_gap(u, a, b)
    defect = float(np.max(np.abs(u.conj().T @ u - np.eye(N))))
    return ReconstructionCertificate(
        epsilon=float(epsilon), level=int(level), alpha=alpha, beta=beta, verdict=verdict,
        err_a=err_a, err_b=err_b, horn_residual=horn.residual, u=u,
        achieved=achieved, bound=2.0 * float(epsilon), unitarity_defect=defect,
    )


def expectation_gap(u, a, b):
    """``||E_A(u b u*) - a||_1``; both operators are diagonal so this is a mean."""
    a = as_operator(a)
    b = as_operator(b)
    diag = np.real(np.einsum("ij,jk,ik->i", u, b.entries, u.conj()))
    return float(np.mean(np.abs(diag - a.diag())))


def verify_certificate(cert, a, b, tol=DEFAULT):
    """Recompute ``achieved`` from ``u``, ``a``, ``b`` through a full trace-norm evaluation."""
    a = as_operator(a, tol)
    b = as_operator(b, tol)
    ubu = cert.u @ b.entries @ cert.u.conj().T
    pinched = np.diag(np.real(np.diag(ubu)))
    return trace_norm(pinched - a.entries, tol)


def arveson_kadison_probe(b, a, trials=200, epsilon=0.1, seed=0, step=0.3, tol=DEFAULT):
    """Random local search for ``v`` minimizing ``||E_A(v b v*) - a||_1``.

    Starts from the better of ``v = I`` and the reconstruction unitary and
    tries ``v exp(i t H)`` for random Hermitian ``H``.  ``v b v*`` keeps the
    spectral scale of ``b`` by construction.  Emits data only; nothing is
    claimed about the infimum.
    """
    a, b = _check_inputs(a, b, tol)
    N = a.dim
    try:
        cert = reconstruct(a, b, epsilon, tol=tol)
    except LevelExhausted:
        cert = reconstruct(a, b, epsilon, level=max_dyadic_level(N), tol=tol)
    candidates = [np.eye(N, dtype=complex), cert.u]
    gaps = [expectation_gap(v, a, b) for v in candidates]
    best = int(np.argmin(gaps))
    v, gap = candidates[best], gaps[best]
    rng = make_rng(seed)
    history = [gap]
    scale = step
    for _ in range(int(trials)):
        g = rng.standard_normal((N, N)) + 1j * rng.standard_normal((N, N))
        h = (g + g.conj().T) / (2 * np.sqrt(N))
        trial = v @ expm(1j * scale * h)
        trial_gap = expectation_gap(trial, a, b)
        if trial_gap < gap:
            v, gap = trial, trial_gap
        else:
            scale *= 0.97
        history.append(gap)
    spec = np.linalg.eigvalsh(v @ b.entries @ v.conj().T)[::-1]
    return {
        "start": ["identity", "reconstruct"][best],
        "initial_gap": history[0],
        "best_gap": gap,
        "history": history,
        "spectrum_defect": float(np.max(np.abs(spec - eigen_decompose(b, tol).values))),
        "reconstruct_level": cert.level,
    }
