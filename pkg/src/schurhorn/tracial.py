"""Finite model of a II_1 factor: N x N matrices under the normalized trace.

Everything here is a pure function of immutable inputs.  Operators are
stored as complex arrays; a real fast path is taken inside the eigensolver
when the imaginary part vanishes identically.
"""

import json
from dataclasses import dataclass, field

import numpy as np

from .exceptions import DimensionMismatch, NonConvergence
from .tolerances import DEFAULT
from .validation import check_hermitian


@dataclass(frozen=True)
class TracialContext:
    """Dimension ``N`` of the model algebra, with ``tau(x) = tr(x) / N``."""

    dim: int

    def __post_init__(self):
        if int(self.dim) < 1:
            raise ValueError(f"dim must be >= 1, got {self.dim}")

    def trace(self, x):
        return complex(np.trace(x)).real / self.dim


def _frozen(arr):
    arr = np.array(arr, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class HermitianOperator:
    """Self-adjoint element of the model algebra.

    Build through :meth:`from_matrix`, which symmetrizes the input.
    """

    ctx: TracialContext
    entries: np.ndarray = field(repr=False)

    @classmethod
    def from_matrix(cls, matrix, tol=DEFAULT):
        arr = check_hermitian(matrix, tol=tol.herm_tol(0.0))
        return cls(TracialContext(arr.shape[0]), _frozen(arr))

    @classmethod
    def diagonal(cls, values):
        values = np.asarray(values, dtype=float)
        return cls(TracialContext(values.size), _frozen(np.diag(values).astype(complex)))

    @property
    def dim(self):
        return self.ctx.dim

    @property
    def max_abs(self):
        return float(np.max(np.abs(self.entries)))

    def trace(self):
        """Normalized trace."""
        return float(np.real(np.trace(self.entries))) / self.dim

    def diag(self):
        return np.real(np.diag(self.entries)).copy()

    def is_real(self):
        return not np.any(np.imag(self.entries))

    def conjugate_by(self, u):
        """Return ``u x u*``."""
        return HermitianOperator.from_matrix(u @ self.entries @ u.conj().T)

    def __add__(self, other):
        _same_ctx(self, other)
        return HermitianOperator.from_matrix(self.entries + other.entries)

    def __sub__(self, other):
        _same_ctx(self, other)
        return HermitianOperator.from_matrix(self.entries - other.entries)

    def __mul__(self, scalar):
        return HermitianOperator.from_matrix(float(scalar) * self.entries)

    __rmul__ = __mul__

    def to_json(self):
        flat = self.entries.ravel()
        return {"dim": self.dim, "entries": [[float(z.real), float(z.imag)] for z in flat]}

    @classmethod
    def from_json(cls, payload, tol=DEFAULT):
        try:
            dim = int(payload["dim"])
            raw = payload["entries"]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed operator JSON: {exc}") from None
        if dim < 1 or len(raw) != dim * dim:
            raise DimensionMismatch(f"expected {dim * dim} entries for dim {dim}, got {len(raw)}")
        pairs = np.asarray(raw, dtype=float)
        if pairs.shape != (dim * dim, 2):
            raise ValueError("entries must be [re, im] pairs")
        matrix = (pairs[:, 0] + 1j * pairs[:, 1]).reshape(dim, dim)
        return cls.from_matrix(matrix, tol=tol)


def as_operator(x, tol=DEFAULT):
    if isinstance(x, HermitianOperator):
        return x
    return HermitianOperator.from_matrix(x, tol=tol)


def _same_ctx(a, b):
    if a.dim != b.dim:
        raise DimensionMismatch(f"dimension mismatch: {a.dim} vs {b.dim}")


def load_operator(path, tol=DEFAULT):
    with open(path) as fh:
        return HermitianOperator.from_json(json.load(fh), tol=tol)


def save_operator(op, path):
    with open(path, "w") as fh:
        json.dump(op.to_json(), fh)


@dataclass(frozen=True, eq=False)
class EigenSystem:
    """Eigenvalues sorted decreasing, eigenvectors as the columns of ``vectors``."""

    values: np.ndarray
    vectors: np.ndarray = field(repr=False)

    def reconstruct(self):
        return (self.vectors * self.values) @ self.vectors.conj().T


@dataclass(frozen=True, eq=False)
class SpectralScale:
    """Decreasing step function ``t -> values[floor(t * N)]`` on ``[0, 1)``."""

    values: np.ndarray

    @property
    def cells(self):
        return self.values.size

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        idx = np.clip(np.floor(t * self.cells).astype(int), 0, self.cells - 1)
        return self.values[idx]

    def integral(self):
        return float(np.sum(self.values)) / self.cells

    def partial_integrals(self):
        """``int_0^{k/N} lambda`` for ``k = 1..N``."""
        return np.cumsum(self.values) / self.cells

    def sup(self):
        return float(np.max(np.abs(self.values)))


def _phase_normalize(vectors, cutoff=1e-12):
    out = vectors.copy()
    for j in range(out.shape[1]):
        col = out[:, j]
        nz = np.flatnonzero(np.abs(col) > cutoff)
        if nz.size:
            z = col[nz[0]]
            out[:, j] = col * (np.conj(z) / abs(z))
    return out


def _tie_break(values, vectors, scale):
    """Order eigenvectors inside clusters of (near) equal eigenvalues.

    Clusters chain consecutive gaps below ``1e-12 * scale``; inside a cluster
    columns are sorted by the real parts of their entries, lexicographically
    descending.
    """
    gap = 1e-12 * scale
    order = np.arange(values.size)
    start = 0
    n = values.size
    while start < n:
        stop = start + 1
        while stop < n and values[stop - 1] - values[stop] < gap:
            stop += 1
        if stop - start > 1:
            block = vectors[:, start:stop].real
            # lexsort uses the last key as primary; negate for descending
            keys = [-block[i] for i in range(block.shape[0] - 1, -1, -1)]
            order[start:stop] = start + np.lexsort(keys)
        start = stop
    return vectors[:, order]


def eigen_decompose(a, tol=DEFAULT):
    """Eigen-decomposition with decreasing eigenvalues and deterministic ties."""
    a = as_operator(a, tol)
    mat = a.entries
    try:
        if a.is_real():
            w, v = np.linalg.eigh(mat.real)
            v = v.astype(np.complex128)
        else:
            w, v = np.linalg.eigh(mat)
    except np.linalg.LinAlgError as exc:
        raise NonConvergence(str(exc)) from exc
    w = w[::-1].copy()
    v = _phase_normalize(v[:, ::-1])
    scale = max(a.max_abs, np.finfo(float).tiny)
    v = _tie_break(w, v, scale)
    recon = (v * w) @ v.conj().T
    resid = float(np.max(np.abs(recon - mat)))
    ortho = float(np.max(np.abs(v.conj().T @ v - np.eye(a.dim))))
    if resid > tol.eig * scale or ortho > tol.eig:
        raise NonConvergence(f"eigen residual {resid:.3e}, orthogonality defect {ortho:.3e}")
    return EigenSystem(_frozen(w), _frozen(v))


def eigenvalues(a, tol=DEFAULT):
    """Decreasing eigenvalues only; cheaper than :func:`eigen_decompose`."""
    a = as_operator(a, tol)
    mat = a.entries.real if a.is_real() else a.entries
    try:
        return np.linalg.eigvalsh(mat)[::-1].copy()
    except np.linalg.LinAlgError as exc:
        raise NonConvergence(str(exc)) from exc


def spectral_scale(a, tol=DEFAULT):
    return SpectralScale(_frozen(eigenvalues(a, tol)))


def trace_norm(x, tol=DEFAULT):
    """``tau(|x|)``, the normalized trace norm."""
    x = as_operator(x, tol)
    return float(np.sum(np.abs(eigenvalues(x, tol)))) / x.dim


def operator_norm(x, tol=DEFAULT):
    return float(np.max(np.abs(eigenvalues(x, tol))))


def scale_distance(a, b, tol=DEFAULT):
    """Sup and L1 distances between the spectral scales of ``a`` and ``b``."""
    a = as_operator(a, tol)
    b = as_operator(b, tol)
    _same_ctx(a, b)
    diff = eigenvalues(a, tol) - eigenvalues(b, tol)
    return float(np.max(np.abs(diff))), float(np.mean(np.abs(diff)))
