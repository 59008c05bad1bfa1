"""Dense linear-algebra kernels used by the analysis modules.

All routines operate on small-to-medium real dense matrices and return new
arrays; inputs are never modified.  Sign conventions are fixed so that
singular vectors and null vectors are reproducible across runs.
"""

from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateCovarianceError,
    InvalidInputError,
    NoNullSpaceError,
    UnsupportedOrderError,
)

__all__ = [
    "SvdResult",
    "EigenResult",
    "svd",
    "sym_eig",
    "inv_sqrt_sym",
    "null_vector",
    "hermite_poly",
    "HERMITE_MAX_ORDER",
]

HERMITE_MAX_ORDER = 200
SYMMETRY_RTOL = 1e-12
SPD_RTOL = 1e-10


def _frozen(a):
    a = np.ascontiguousarray(a, dtype=float)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class SvdResult:
    """Thin SVD ``m = left_vectors @ diag(singular_values) @ right_vectors.T``."""

    left_vectors: np.ndarray
    singular_values: np.ndarray
    right_vectors: np.ndarray

    def reconstruct(self):
        return (self.left_vectors * self.singular_values) @ self.right_vectors.T


@dataclass(frozen=True)
class EigenResult:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def _as_matrix(m):
    a = np.asarray(m, dtype=float)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise InvalidInputError(f"expected a non-empty 2-D matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidInputError("matrix contains non-finite entries")
    return a


def _check_symmetric(a):
    if a.shape[0] != a.shape[1]:
        raise InvalidInputError(f"expected a square matrix, got shape {a.shape}")
    scale = max(np.max(np.abs(a)), np.finfo(float).tiny)
    asym = np.max(np.abs(a - a.T))
    if asym > SYMMETRY_RTOL * scale:
        raise InvalidInputError(
            f"matrix is not symmetric (max |m - m.T| = {asym:.3e}, scale {scale:.3e})"
        )


def svd(m):
    """Thin singular value decomposition with a deterministic sign convention.

    Singular values are returned in descending order.  Each left singular
    vector is flipped so that its entry of largest magnitude is positive
    (the lowest index wins a tie); the matching right vector is flipped with
    it, so the product is unchanged.

    Raises
    ------
    InvalidInputError
        If ``m`` is not a finite 2-D array.
    """
    a = _as_matrix(m)
    u, s, vt = np.linalg.svd(a, full_matrices=False)
    v = vt.T
    pivots = np.argmax(np.abs(u), axis=0)
    signs = np.sign(u[pivots, np.arange(u.shape[1])])
    signs[signs == 0] = 1.0
    return SvdResult(_frozen(u * signs), _frozen(s), _frozen(v * signs))


def sym_eig(m):
    """Eigendecomposition of a real symmetric matrix, eigenvalues descending."""
    a = _as_matrix(m)
    _check_symmetric(a)
    w, v = np.linalg.eigh(0.5 * (a + a.T))
    order = np.argsort(w)[::-1]
    return EigenResult(_frozen(w[order]), _frozen(v[:, order]))


def inv_sqrt_sym(m):
    """Inverse principal square root of a symmetric positive-definite matrix.

    Raises
    ------
    DegenerateCovarianceError
        If an eigenvalue does not exceed ``1e-10`` times the largest one.
        The offending eigenvalue is attached as ``.eigenvalue``.
    """
    eig = sym_eig(m)
    w, v = eig.eigenvalues, eig.eigenvectors
    w_max = w[0]
    w_min = w[-1]
    if w_max <= 0 or w_min <= SPD_RTOL * w_max:
        raise DegenerateCovarianceError(
            f"matrix is not positive definite: eigenvalue {w_min:.6g} "
            f"(largest {w_max:.6g})",
            eigenvalue=float(w_min),
        )
    r = (v / np.sqrt(w)) @ v.T
    return _frozen(0.5 * (r + r.T))


def null_vector(m, tol=1e-8):
    """Unit vector spanning the (numerical) null space of a square matrix.

    The right singular vector of the smallest singular value is used.  Its
    first component whose magnitude exceeds ``1e-12`` of the largest is made
    positive.

    Raises
    ------
    NoNullSpaceError
        If the smallest singular value exceeds ``tol * ||m||_2``.
    """
    a = _as_matrix(m)
    if a.shape[0] != a.shape[1]:
        raise InvalidInputError(f"expected a square matrix, got shape {a.shape}")
    _, s, vt = np.linalg.svd(a)
    norm = s[0]
    if s[-1] > tol * norm:
        raise NoNullSpaceError(
            f"smallest singular value {s[-1]:.3e} exceeds {tol:g} * ||m|| = {tol * norm:.3e}"
        )
    v = vt[-1].copy()
    v /= np.linalg.norm(v)
    big = np.abs(v) > 1e-12 * np.max(np.abs(v))
    if v[np.argmax(big)] < 0:
        v = -v
    return _frozen(v)


def hermite_poly(k, x):
    """Physicists' Hermite polynomial ``H_k`` evaluated at ``x``.

    Uses the three-term recurrence ``H_{k+1} = 2x H_k - 2k H_{k-1}``.
    ``x`` may be a scalar or an array; the result has the same shape.
    """
    if int(k) != k or k < 0:
        raise InvalidInputError(f"Hermite order must be a nonnegative integer, got {k!r}")
    k = int(k)
    if k > HERMITE_MAX_ORDER:
        raise UnsupportedOrderError(
            f"Hermite order {k} exceeds the supported maximum {HERMITE_MAX_ORDER}"
        )
    x = np.asarray(x, dtype=float)
    h_prev = np.ones_like(x)
    if k == 0:
        return h_prev if h_prev.ndim else float(h_prev)
    h = 2.0 * x
    for n in range(1, k):
        h_prev, h = h, 2.0 * x * h - 2.0 * n * h_prev
    return h if h.ndim else float(h)
