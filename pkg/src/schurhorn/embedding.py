"""Conditional expectations onto masas and the matrix-unit embedding of M_k into M_N."""

from dataclasses import dataclass

import numpy as np

from .exceptions import DimensionMismatch
from .tracial import HermitianOperator, TracialContext, as_operator
from .validation import check_level, check_square


@dataclass(frozen=True)
class BlockStructure:
    """``k`` consecutive blocks of size ``m`` partitioning ``{0, ..., N-1}``."""

    dim: int
    block_count: int

    def __post_init__(self):
        if self.block_count < 1 or self.dim % self.block_count:
            raise DimensionMismatch(f"{self.block_count} blocks do not divide dim {self.dim}")

    @classmethod
    def dyadic(cls, dim, level):
        check_level(dim, level)
        return cls(dim, 1 << level)

    @property
    def block_size(self):
        return self.dim // self.block_count

    @property
    def ctx(self):
        return TracialContext(self.dim)

    def block(self, i):
        m = self.block_size
        return range(i * m, (i + 1) * m)

    def projection(self, i):
        p = np.zeros((self.dim, self.dim), dtype=complex)
        idx = np.asarray(self.block(i))
        p[idx, idx] = 1.0
        return p


def conditional_expectation_diagonal(x):
    """Compression onto the diagonal masa: drop the off-diagonal entries."""
    x = as_operator(x)
    return HermitianOperator.diagonal(x.diag())


def conditional_expectation_blocks(x, bs):
    """Expectation onto the abelian algebra spanned by the block projections.

    Each block contributes ``tau(p_i x p_i) / tau(p_i)``, the mean of its
    diagonal entries, on the whole block.
    """
    x = as_operator(x)
    if x.dim != bs.dim:
        raise DimensionMismatch(f"operator dim {x.dim} vs block structure dim {bs.dim}")
    means = x.diag().reshape(bs.block_count, bs.block_size).mean(axis=1)
    return HermitianOperator.diagonal(np.repeat(means, bs.block_size))


def matrix_unit(i, j, bs):
    """Block shift ``v_ij = e_ij (x) I_m`` carrying block ``j`` onto block ``i``."""
    e = np.zeros((bs.block_count, bs.block_count))
    e[i, j] = 1.0
    return np.kron(e, np.eye(bs.block_size)).astype(complex)


def pi_embed(A, bs, basis=None):
    """``pi(A) = sum_ij A_ij v_ij = A (x) I_m``.

    With ``basis`` (a unitary whose columns order the blocks) the matrix
    units are transported to ``basis v_ij basis*``.  A permutation basis
    keeps ``pi(e_ii)`` inside the diagonal masa.
    """
    A = check_square(A, "A")
    if A.shape[0] != bs.block_count:
        raise DimensionMismatch(f"A is {A.shape[0]}x{A.shape[0]} but there are {bs.block_count} blocks")
    out = np.kron(A, np.eye(bs.block_size))
    if basis is not None:
        out = basis @ out @ basis.conj().T
    return out


def flag_matching_unitary(flag_a, flag_b, n):
    """``w = B_a B_b*``, so ``w q_i w* = p_i`` for the level-``n`` flag blocks."""
    if flag_a.ctx.dim != flag_b.ctx.dim:
        raise DimensionMismatch(f"flag dims {flag_a.ctx.dim} vs {flag_b.ctx.dim}")
    check_level(flag_a.ctx.dim, n)
    return flag_a.basis @ flag_b.basis.conj().T
