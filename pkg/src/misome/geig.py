"""Dense generalized eigenvalue machinery for Hermitian-definite pairs.

Solves ``A psi = lambda B psi`` for Hermitian ``A`` and positive definite
``B`` by Cholesky whitening: with ``B = L L^H``, the pair reduces to an
ordinary Hermitian eigenproblem for ``L^-1 A L^-H``.  Also provides the
rank-one shortcut ``a^H B^-1 a``, orthogonal null-space projectors, and
the reduction of a channel pair onto the row space of a rank-deficient
matrix.  All functions are pure and safe to call concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve, solve_triangular

# Allowed relative asymmetry before an input is rejected as non-Hermitian.
HERMITIAN_RTOL = 1e-12
# B counts as positive definite when min(eig) > DEFINITE_RTOL * max(eig).
DEFINITE_RTOL = 1e-12
# Singular values below RANK_RTOL * sigma_max are treated as zero.
RANK_RTOL = 1e-10


@dataclass(frozen=True)
class GeigResult:
    """Largest generalized eigenvalue and eigenvector of a definite pair.

    ``psi_max`` has unit norm and canonical phase: its first entry of
    non-negligible magnitude is rotated to be real and nonnegative, so
    identical inputs always yield identical output.  When the top
    eigenvalue is degenerate any unit vector in the top eigenspace is a
    valid maximizer; the deterministic ordering of the whitened solver
    picks one.
    """

    lambda_max: float
    psi_max: np.ndarray


def _as_square_hermitian(M, name: str) -> np.ndarray:
    """Validate and symmetrize a Hermitian matrix argument."""
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"{name} must be square, got shape {M.shape}")
    if not np.all(np.isfinite(M.view(float))):
        raise ValueError(f"{name} contains non-finite entries")
    scale = max(1.0, np.abs(M).max()) if M.size else 1.0
    asym = np.abs(M - M.conj().T).max() if M.size else 0.0
    if asym > HERMITIAN_RTOL * scale:
        raise ValueError(
            f"{name} is not Hermitian within tolerance "
            f"(asymmetry {asym:.3e}, scale {scale:.3e})"
        )
    # Absorb construction round-off before any decomposition.
    return 0.5 * (M + M.conj().T)


def _as_vector(a, name: str) -> np.ndarray:
    a = np.asarray(a, dtype=complex).reshape(-1)
    if not np.all(np.isfinite(a.view(float))):
        raise ValueError(f"{name} contains non-finite entries")
    return a


def _require_definite(B: np.ndarray, name: str = "B") -> None:
    if B.shape[0] == 0:
        return
    ev = np.linalg.eigvalsh(B)
    if ev[0] <= DEFINITE_RTOL * max(ev[-1], 0.0):
        raise ValueError(
            f"{name} is not positive definite (min eigenvalue {ev[0]:.6e})"
        )


def canonical_phase(v: np.ndarray) -> np.ndarray:
    """Rotate a vector so its first non-negligible entry is real and >= 0.

    The reference entry is the first one with magnitude above 1e-10 times
    the vector norm; an all-zero vector is returned unchanged.
    """
    v = np.asarray(v, dtype=complex)
    scale = np.linalg.norm(v)
    if scale == 0.0:
        return v.copy()
    idx = np.flatnonzero(np.abs(v) > 1e-10 * scale)
    if idx.size == 0:
        return v.copy()
    ref = v[idx[0]]
    return v * (ref.conjugate() / abs(ref))


def lambda_max(A, B) -> GeigResult:
    """Largest generalized eigenvalue of the Hermitian-definite pair (A, B).

    Parameters
    ----------
    A : array_like
        Hermitian positive semidefinite matrix.
    B : array_like
        Hermitian positive definite matrix of the same dimension.

    Returns
    -------
    GeigResult
        The maximum of the Rayleigh quotient ``psi^H A psi / psi^H B psi``
        together with the unit-norm, canonical-phase maximizer.

    Raises
    ------
    ValueError
        On dimension mismatch, on inputs that are not Hermitian within
        tolerance, or when ``B`` is not positive definite (the message
        reports its smallest eigenvalue).
    """
    A = _as_square_hermitian(A, "A")
    B = _as_square_hermitian(B, "B")
    if A.shape != B.shape:
        raise ValueError(f"dimension mismatch: A is {A.shape}, B is {B.shape}")
    _require_definite(B)

    L = np.linalg.cholesky(B)
    # M = L^-1 A L^-H is Hermitian with the same eigenvalues as the pair.
    X = solve_triangular(L, A, lower=True)
    M = solve_triangular(L, X.conj().T, lower=True).conj().T
    M = 0.5 * (M + M.conj().T)
    w, V = np.linalg.eigh(M)
    psi = solve_triangular(L.conj().T, V[:, -1], lower=False)
    psi = canonical_phase(psi / np.linalg.norm(psi))
    return GeigResult(lambda_max=max(float(w[-1]), 0.0), psi_max=psi)


def lambda_max_rank_one(a, B) -> GeigResult:
    """Largest generalized eigenvalue of (a a^H, B) via the quadratic form.

    For rank-one numerators the eigenvalue collapses to ``a^H B^-1 a`` and
    the eigenvector is proportional to ``B^-1 a``.  Much cheaper than the
    general solver and exact for this structure.
    """
    a = _as_vector(a, "a")
    B = _as_square_hermitian(B, "B")
    if B.shape[0] != a.shape[0]:
        raise ValueError(f"dimension mismatch: a is {a.shape}, B is {B.shape}")
    _require_definite(B)

    y = cho_solve(cho_factor(B, lower=True), a)
    lam = float(np.vdot(a, y).real)
    nrm = np.linalg.norm(y)
    if nrm == 0.0:
        # a = 0: every direction is a maximizer of the (zero) quotient.
        psi = np.zeros_like(a)
        psi[0] = 1.0
    else:
        psi = canonical_phase(y / nrm)
    return GeigResult(lambda_max=max(lam, 0.0), psi_max=psi)


def null_projector(H) -> np.ndarray:
    """Orthogonal projector onto the null space of H.

    Works for any shape, including matrices with zero rows.  The result
    is Hermitian, idempotent, annihilated by ``H`` on the left, and has
    rank ``n - rank(H)``.  A full-column-rank ``H`` yields the zero
    matrix.  Rank decisions use ``RANK_RTOL`` relative to the largest
    singular value.
    """
    H = np.asarray(H, dtype=complex)
    if H.ndim != 2:
        raise ValueError(f"H must be a matrix, got shape {H.shape}")
    n = H.shape[1]
    if H.shape[0] == 0:
        return np.eye(n, dtype=complex)
    _, s, Vh = np.linalg.svd(H)
    rank = int(np.count_nonzero(s > RANK_RTOL * s[0])) if s.size else 0
    N = Vh[rank:].conj().T
    P = N @ N.conj().T
    return 0.5 * (P + P.conj().T)


def matrix_rank(H) -> int:
    """Rank of H under the shared RANK_RTOL singular value cutoff."""
    H = np.asarray(H, dtype=complex)
    if H.size == 0:
        return 0
    s = np.linalg.svd(H, compute_uv=False)
    return int(np.count_nonzero(s > RANK_RTOL * s[0]))


def reduce_rank_deficient(h, H) -> tuple[np.ndarray, np.ndarray]:
    """Project a channel pair onto the row space of a rank-deficient H.

    Returns ``(g, G) = (Q^H h, H Q)`` where the columns of ``Q`` are an
    orthonormal basis of the column space of ``H^H``.  ``G`` has full
    column rank equal to ``rank(H)``.  A zero ``H`` yields an empty
    reduction (``g`` of length 0, ``G`` with 0 columns).

    Raises
    ------
    ValueError
        If ``H`` already has full column rank, in which case there is
        nothing to reduce.
    """
    h = _as_vector(h, "h")
    H = np.asarray(H, dtype=complex)
    if H.ndim != 2 or H.shape[1] != h.shape[0]:
        raise ValueError(
            f"dimension mismatch: h is {h.shape}, H is {H.shape}"
        )
    n = H.shape[1]
    if H.shape[0] == 0:
        return np.zeros(0, dtype=complex), np.zeros((0, 0), dtype=complex)
    _, s, Vh = np.linalg.svd(H)
    rank = int(np.count_nonzero(s > RANK_RTOL * s[0])) if s.size else 0
    if rank >= n:
        raise ValueError("H has full column rank; reduction is undefined")
    Q = Vh[:rank].conj().T
    return Q.conj().T @ h, H @ Q
