"""scikit-learn style wrappers so the construction composes with pipelines."""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .dyadic import block_means
from .pipeline import reconstruct
from .tolerances import DEFAULT
from .tracial import HermitianOperator, eigen_decompose
from .validation import check_level


class DyadicAverager(BaseEstimator, TransformerMixin):
    """Row-wise dyadic averaging ``E_n`` of sampled step functions.

    Each row holds the cell values of one step function; ``transform``
    returns the ``2**level`` cell means per row.
    """

    def __init__(self, level=0):
        self.level = level

    def fit(self, X, y=None):
        X = check_array(X, dtype=float)
        check_level(X.shape[1], self.level)
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "n_features_in_")
        X = check_array(X, dtype=float)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"expected {self.n_features_in_} cells, got {X.shape[1]}")
        return np.vstack([block_means(row, self.level) for row in X])


class SchurHornReconstructor(BaseEstimator, TransformerMixin):
    """Fit on a Hermitian ``b``; transform target diagonals into reachable ones.

    ``fit(B)`` takes the ``N x N`` matrix ``b``.  ``transform(X)`` takes
    rows of diagonal entries ``a`` majorized by ``b`` and returns the
    diagonals of ``E_A(u b u*)`` for the constructed unitaries, each within
    ``2 * epsilon`` of its row in normalized ``l1``.
    """

    def __init__(self, epsilon=0.05, level=None):
        self.epsilon = epsilon
        self.level = level

    def fit(self, X, y=None):
        # check_array rejects complex input; the operator constructor validates instead
        self.b_ = HermitianOperator.from_matrix(X, DEFAULT)
        self.spectral_scale_ = np.asarray(eigen_decompose(self.b_).values)
        self.n_features_in_ = self.b_.dim
        return self

    def certificate(self, a_diagonal):
        check_is_fitted(self, "b_")
        a = HermitianOperator.diagonal(np.asarray(a_diagonal, dtype=float))
        return reconstruct(a, self.b_, self.epsilon, level=self.level)

    def transform(self, X):
        check_is_fitted(self, "b_")
        X = check_array(X, dtype=float)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"expected {self.n_features_in_} diagonal entries, got {X.shape[1]}")
        out = np.empty_like(X)
        for r, row in enumerate(X):
            u = self.certificate(row).u
            out[r] = np.real(np.einsum("ij,jk,ik->i", u, self.b_.entries, u.conj()))
        return out
