"""Small shared numerics: exactly-unitary exponentials and unitarization."""

from __future__ import annotations

import numpy as np

__all__ = ["unitary_exp_i", "unitarize", "max_abs"]


def unitary_exp_i(H: np.ndarray) -> np.ndarray:
    """exp(i H) for Hermitian H via eigendecomposition.

    Unitary to roundoff by construction, which keeps long path-ordered
    products from drifting off the unitary group.
    """
    w, V = np.linalg.eigh(H)
    return (V * np.exp(1j * w)) @ V.conj().T


def unitarize(M: np.ndarray) -> np.ndarray:
    """Closest unitary in Frobenius norm (polar factor via SVD)."""
    u, _, vh = np.linalg.svd(M)
    return u @ vh


def max_abs(A: np.ndarray, B: np.ndarray | None = None) -> float:
    """Max-norm of A, or of A - B."""
    d = A if B is None else A - B
    return float(np.max(np.abs(d))) if d.size else 0.0
