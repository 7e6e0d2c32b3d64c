"""Complex linear-algebra primitives used throughout the simulator.

All matrices here are small (at most a few hundred rows), so plain dense
numpy routines are used; there is no attempt at large-matrix performance.
"""

import numpy as np

from .errors import ContractError

HERMITIAN_TOL = 1e-10


def _as_complex_matrix(a):
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2:
        raise ContractError(f"expected a 2-D matrix, got shape {a.shape}")
    return a


def hermitian_eigenvalues(a, tol=HERMITIAN_TOL):
    """Eigenvalues of a Hermitian matrix, sorted ascending.

    Raises ContractError if ``a`` is not square or deviates from ``a == a†``
    by more than ``tol`` (absolute, entry-wise).
    """
    a = _as_complex_matrix(a)
    n, m = a.shape
    if n != m:
        raise ContractError(f"matrix is not square: {a.shape}")
    dev = np.abs(a - a.conj().T).max() if n else 0.0
    if dev > tol:
        raise ContractError(f"matrix is not Hermitian within {tol:g} (max deviation {dev:g})")
    return np.linalg.eigvalsh(a)


def gram_eigenvalues(g):
    """Eigenvalues of ``g @ g†`` (ascending), via the smaller-side Gram matrix."""
    g = _as_complex_matrix(g)
    nr, nt = g.shape
    gram = g @ g.conj().T if nr <= nt else g.conj().T @ g
    lam = np.linalg.eigvalsh(gram)
    if nr <= nt:
        return lam
    # pad the spectrum with the structural zeros of the taller Gram product
    return np.concatenate([np.zeros(nr - nt), lam])


def log_det_capacity_term(g, rho, nt):
    """``log2 det(I + (rho/nt) g g†)`` in bits.

    Computed from the eigenvalues of the Gram matrix for numerical robustness
    at large ``rho``.
    """
    if rho < 0:
        raise ContractError(f"rho must be non-negative, got {rho}")
    lam = np.maximum(gram_eigenvalues(g), 0.0)
    return float(np.sum(np.log2(1.0 + (rho / nt) * lam)))


def block_diag(blocks):
    """Block-diagonal assembly of a non-empty sequence of complex matrices."""
    blocks = [_as_complex_matrix(b) for b in blocks]
    if not blocks:
        raise ContractError("block_diag requires at least one block")
    rows = sum(b.shape[0] for b in blocks)
    cols = sum(b.shape[1] for b in blocks)
    out = np.zeros((rows, cols), dtype=np.complex128)
    r = c = 0
    for b in blocks:
        out[r : r + b.shape[0], c : c + b.shape[1]] = b
        r += b.shape[0]
        c += b.shape[1]
    return out


def frobenius_norm_sq(a):
    """Sum of squared entry magnitudes."""
    a = np.asarray(a)
    return float(np.sum(np.abs(a) ** 2))
