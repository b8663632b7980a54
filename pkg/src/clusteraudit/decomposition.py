"""Principal component analysis with a deterministic Jacobi eigensolver."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from ._validation import check_matrix


def jacobi_eigh(S, tol: float = 1e-10, max_sweeps: int = 100):
    """Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.

    Sweeps stop when the off-diagonal Frobenius norm drops below ``tol``.
    Returns eigenvalues (descending) and the matching orthonormal
    eigenvectors as columns.
    """
    A = np.array(S, dtype=np.float64)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"matrix must be square, got shape {A.shape}")
    if not np.allclose(A, A.T, rtol=0, atol=1e-12 * max(1.0, np.abs(A).max())):
        raise ValueError("matrix must be symmetric")
    d = A.shape[0]
    V = np.eye(d)
    for _ in range(max_sweeps):
        off = np.sqrt((A**2).sum() - (np.diag(A) ** 2).sum())
        if off < tol:
            break
        for p in range(d - 1):
            for q in range(p + 1, d):
                apq = A[p, q]
                if apq == 0.0:
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta == 0.0:
                    t = 1.0
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                rot_p = c * A[:, p] - s * A[:, q]
                rot_q = s * A[:, p] + c * A[:, q]
                A[:, p], A[:, q] = rot_p, rot_q
                rot_p = c * A[p, :] - s * A[q, :]
                rot_q = s * A[p, :] + c * A[q, :]
                A[p, :], A[q, :] = rot_p, rot_q
                rot_p = c * V[:, p] - s * V[:, q]
                rot_q = s * V[:, p] + c * V[:, q]
                V[:, p], V[:, q] = rot_p, rot_q
    eigenvalues = np.diag(A).copy()
    order = np.argsort(-eigenvalues, kind="stable")
    return eigenvalues[order], V[:, order]


class PCA(BaseEstimator, TransformerMixin):
    """PCA of the sample covariance (divisor n - 1), fully deterministic.

    Fitted attributes follow the scikit-learn convention: ``components_``
    holds one orthonormal direction per row, sorted by ``explained_variance_``
    descending. The sign of each component is fixed so its largest-magnitude
    entry is positive.
    """

    def fit(self, X, y=None) -> "PCA":
        X = check_matrix(X, min_rows=2)
        self.mean_ = X.mean(axis=0)
        centered = X - self.mean_
        cov = (centered.T @ centered) / (X.shape[0] - 1)
        eigenvalues, vectors = jacobi_eigh(cov)
        components = vectors.T
        for i, row in enumerate(components):
            if row[int(np.argmax(np.abs(row)))] < 0:
                components[i] = -row
        self.components_ = components
        self.explained_variance_ = np.maximum(eigenvalues, 0.0)
        return self

    def _check_fitted(self):
        if not hasattr(self, "components_"):
            raise ValueError("this PCA instance is not fitted yet")

    def _resolve_indices(self, component_indices):
        d = self.components_.shape[0]
        if component_indices is None:
            return np.arange(d)
        idx = np.asarray(component_indices, dtype=np.int64)
        if idx.ndim != 1 or idx.size == 0:
            raise ValueError("component_indices must be a non-empty 1-D sequence")
        if (idx < 0).any() or (idx >= d).any():
            raise ValueError(f"component indices must lie in [0, {d}), got {idx.tolist()}")
        return idx

    def transform(self, X, component_indices=None) -> np.ndarray:
        """Project centered data onto the chosen components (all by default)."""
        self._check_fitted()
        X = check_matrix(X)
        idx = self._resolve_indices(component_indices)
        return (X - self.mean_) @ self.components_[idx].T

    def inverse_transform(self, T, component_indices=None) -> np.ndarray:
        """Map projected coordinates back into the original feature space."""
        self._check_fitted()
        T = np.asarray(T, dtype=np.float64)
        idx = self._resolve_indices(component_indices)
        return T @ self.components_[idx] + self.mean_
