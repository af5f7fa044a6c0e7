"""Input validation helpers used at every public entry point."""

import numpy as np

from .exceptions import DimensionMismatch, EmptyInput, GridMismatch, NotHermitian


def check_square(x, name="matrix"):
    """Return ``x`` as a 2-D complex array, raising if it is not square."""
    arr = np.asarray(x)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionMismatch(f"{name} must be square, got shape {arr.shape}")
    if arr.shape[0] == 0:
        raise EmptyInput(f"{name} is empty")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} has non-finite entries")
    return arr.astype(np.complex128, copy=False)


def check_hermitian(x, tol=None, name="matrix"):
    """Symmetrize ``x``; reject defects too large to be roundoff.

    The acceptance threshold is ``1e3 * herm_tol`` with
    ``herm_tol = 1e-12 * max(1, max|x_ij|)``.
    """
    arr = check_square(x, name)
    scale = float(np.max(np.abs(arr)))
    herm_tol = (tol if tol is not None else 1e-12) * max(1.0, scale)
    defect = float(np.max(np.abs(arr - arr.conj().T)))
    if defect > 1e3 * herm_tol:
        raise NotHermitian(f"{name} has Hermitian defect {defect:.3e}")
    return (arr + arr.conj().T) / 2


def check_vector(x, name="vector"):
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 1:
        arr = arr.ravel()
    if arr.size == 0:
        raise EmptyInput(f"{name} is empty")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} has non-finite entries")
    return arr


def check_same_length(x, y):
    if len(x) != len(y):
        raise DimensionMismatch(f"length mismatch: {len(x)} vs {len(y)}")


def check_level(cells, level):
    """Return the block size ``cells // 2**level``."""
    if level < 0:
        raise GridMismatch(f"level must be nonnegative, got {level}")
    k = 1 << level
    if cells % k:
        raise GridMismatch(f"{cells} cells are not divisible by 2**{level}")
    return cells // k


def max_dyadic_level(n):
    """Largest ``L`` with ``2**L`` dividing ``n``."""
    level = 0
    while n % (1 << (level + 1)) == 0:
        level += 1
    return level
