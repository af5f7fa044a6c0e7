"""Seeded random instances.

All randomness flows from ``numpy.random.default_rng(seed)`` (PCG64).
Haar unitaries come from the QR factorization of a complex Ginibre matrix
with the phases of ``diag(R)`` divided out; Hermitian test matrices are
GUE-type ``(G + G*) / (2 sqrt(N))``.  Other implementations can match the
distributions, not the streams.
"""

import enum

import numpy as np

from .embedding import conditional_expectation_diagonal
from .tracial import HermitianOperator, TracialContext


class InstanceMode(str, enum.Enum):
    PINCH = "pinch"
    TTRANSFORM = "ttransform"
    UNIFORM = "uniform"


def make_rng(seed):
    return np.random.default_rng(int(seed) % (1 << 64))


def ginibre(n, rng):
    return (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)


def haar_unitary(n, rng):
    q, r = np.linalg.qr(ginibre(n, rng))
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_hermitian(n, rng):
    g = ginibre(n, rng)
    return HermitianOperator.from_matrix((g + g.conj().T) / (2 * np.sqrt(n)))


def t_transform_chain(values, rng, steps=None):
    """Random chain of two-coordinate averages ``(x, y) -> (t x + (1-t) y, (1-t) x + t y)``."""
    x = np.array(values, dtype=float)
    n = x.size
    if n < 2:
        return x
    for _ in range(steps if steps is not None else 2 * n):
        i, j = rng.choice(n, size=2, replace=False)
        t = rng.uniform()
        x[i], x[j] = t * x[i] + (1 - t) * x[j], (1 - t) * x[i] + t * x[j]
    return x


def generate_instance(ctx, seed, mode=InstanceMode.PINCH, unitary=None):
    """Return a diagonal ``a`` and a Hermitian ``b`` with ``a < b`` by construction.

    ``unitary`` replaces the Haar draw in PINCH mode.
    """
    if isinstance(ctx, int):
        ctx = TracialContext(ctx)
    mode = InstanceMode(mode)
    rng = make_rng(seed)
    n = ctx.dim
    b = random_hermitian(n, rng)
    if mode is InstanceMode.PINCH:
        u = haar_unitary(n, rng) if unitary is None else np.asarray(unitary)
        a = conditional_expectation_diagonal(b.conjugate_by(u))
    elif mode is InstanceMode.TTRANSFORM:
        spectrum = np.linalg.eigvalsh(b.entries)
        a = HermitianOperator.diagonal(rng.permutation(t_transform_chain(spectrum, rng)))
    else:
        a = HermitianOperator.diagonal(np.full(n, b.trace()))
    return a, b
