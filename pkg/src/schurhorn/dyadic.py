"""Step functions on [0, 1], dyadic averaging, complete flags and discretization.

The diffuse masa of a II_1 factor has no finite counterpart.  At matrix
scale it is replaced by the diagonal masa of M_N with N = 2**n * m, so
"diffuse" means "the grid divides".  Flag blocks use half-open index ranges
``[i*m, (i+1)*m)``; the endpoint convention is immaterial here.
"""

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .exceptions import GridMismatch
from .tolerances import DEFAULT
from .tracial import HermitianOperator, SpectralScale, TracialContext, as_operator, eigen_decompose, trace_norm
from .validation import check_level, max_dyadic_level


@dataclass(frozen=True, eq=False)
class StepFunction:
    """Values on a uniform grid of ``len(values)`` cells.

    ``level`` is set when the grid is the dyadic grid of ``2**level`` cells.
    """

    values: np.ndarray
    level: int | None = None

    @property
    def cells(self):
        return self.values.size

    def __call__(self, t):
        idx = np.clip(np.floor(np.asarray(t, dtype=float) * self.cells).astype(int), 0, self.cells - 1)
        return self.values[idx]

    def l1(self):
        return float(np.mean(np.abs(self.values)))

    def sup(self):
        return float(np.max(np.abs(self.values)))

    def integral(self):
        return float(np.mean(self.values))

    def refine(self, cells):
        """Same function on a finer uniform grid of ``cells`` cells."""
        if cells % self.cells:
            raise GridMismatch(f"{cells} cells do not refine {self.cells}")
        return np.repeat(self.values, cells // self.cells)

    def to_json(self):
        return {"n": self.level, "values": [float(v) for v in self.values]}

    @classmethod
    def from_json(cls, payload):
        return cls(np.asarray(payload["values"], dtype=float), payload.get("n"))


def _values_of(f):
    if isinstance(f, (StepFunction, SpectralScale)):
        return np.asarray(f.values, dtype=float)
    return np.asarray(f, dtype=float)


def block_means(values, level):
    m = check_level(values.size, level)
    return values.reshape(1 << level, m).mean(axis=1)


def dyadic_average(f, n):
    """Average ``f`` over the ``2**n`` dyadic cells.

    Accepts a :class:`StepFunction`, a :class:`SpectralScale` or a plain
    array of cell values.  A dyadic step function coarser than level ``n``
    is already measurable for the level-``n`` grid and is returned refined.
    """
    values = _values_of(f)
    k = 1 << n
    if values.size % k == 0:
        out = block_means(values, n)
    elif isinstance(f, StepFunction) and f.level is not None and f.level < n:
        out = np.repeat(values, k // values.size)
    else:
        raise GridMismatch(f"{values.size} cells are not divisible by 2**{n}")
    if __debug__:
        slack = 1e-12 * max(1.0, float(np.max(np.abs(values))))
        assert np.mean(np.abs(out)) <= np.mean(np.abs(values)) + slack
        assert np.max(np.abs(out)) <= np.max(np.abs(values)) + slack
    return StepFunction(out, n)


def discretization_error(f, n):
    """``||f - E_n f||_1`` for a function given by its cell values."""
    values = _values_of(f)
    means = block_means(values, n)
    return float(np.mean(np.abs(values - np.repeat(means, values.size // means.size))))


def select_level(values_a, values_b, epsilon, max_level=None):
    """Smallest level at which both discretization errors are below ``epsilon``.

    Returns ``(level, err_a, err_b)``, or ``(None, err_a, err_b)`` with the
    errors at the finest admissible level when none qualifies.
    """
    if max_level is None:
        max_level = max_dyadic_level(len(values_a))
    for n in range(max_level + 1):
        err_a = discretization_error(values_a, n)
        err_b = discretization_error(values_b, n)
        if err_a < epsilon and err_b < epsilon:
            return n, err_a, err_b
    return None, err_a, err_b


@dataclass(frozen=True, eq=False)
class CompleteFlag:
    """Flag ``e(k/N)`` = projection onto the first ``k`` columns of ``basis``."""

    ctx: TracialContext
    basis: np.ndarray = field(repr=False)

    def projection(self, k):
        cols = self.basis[:, :k]
        return cols @ cols.conj().T

    def block_projection(self, i, level):
        """``e(I_i)`` for the ``i``-th cell (0-based) of the level grid."""
        m = check_level(self.ctx.dim, level)
        cols = self.basis[:, i * m:(i + 1) * m]
        return cols @ cols.conj().T

    def synthesize(self, cell_values):
        """``sum_i v_i (e((i+1)/N) - e(i/N))`` for per-column values ``v``."""
        return (self.basis * np.asarray(cell_values)) @ self.basis.conj().T

    def rayleigh(self, a):
        """Diagonal of ``basis* a basis``; the spectral scale when the flag is built from ``a``."""
        a = as_operator(a)
        return np.real(np.einsum("ij,ik,kj->j", self.basis.conj(), a.entries, self.basis))


def build_flag(a, tol=DEFAULT):
    """Complete flag from the eigenvectors of ``a`` in decreasing eigenvalue order."""
    a = as_operator(a, tol)
    es = eigen_decompose(a, tol)
    return CompleteFlag(a.ctx, es.vectors)


def diagonal_flag(diagonal):
    """Flag inside the diagonal masa: a permutation basis sorting ``diagonal`` decreasingly.

    Ties keep index order, so the flag projections are diagonal exactly.
    """
    diagonal = np.asarray(diagonal, dtype=float)
    order = np.argsort(-diagonal, kind="stable")
    basis = np.zeros((diagonal.size, diagonal.size), dtype=complex)
    basis[order, np.arange(diagonal.size)] = 1.0
    return CompleteFlag(TracialContext(diagonal.size), basis)


class Discretization(NamedTuple):
    operator: HermitianOperator
    step: StepFunction
    scale_error: float
    operator_error: float


def discretize_along_flag(a, flag, n, tol=DEFAULT):
    """Replace the spectral scale of ``a`` by its level-``n`` averages along ``flag``.

    ``operator_error`` is ``||a - a_n||_1`` computed on the operators and
    ``scale_error`` is ``||lambda_a - E_n(lambda_a)||_1``; they agree because
    ``a`` and ``a_n`` are diagonal in the same basis.
    """
    a = as_operator(a, tol)
    m = check_level(a.dim, n)
    scale = flag.rayleigh(a)
    step = dyadic_average(scale, n)
    a_n = HermitianOperator.from_matrix(flag.synthesize(np.repeat(step.values, m)))
    return Discretization(a_n, step, discretization_error(scale, n), trace_norm(a - a_n, tol))
