"""Largest eigenvalue of small dense symmetric matrices.

The principal submatrices that feed the bound have strictly positive
entries, so the Perron root is simple and power iteration from the all-ones
vector converges. A cyclic Jacobi sweep serves as fallback and as the
independent cross-check.
"""

from __future__ import annotations

import numpy as np

POWER_TOL = 1e-13
POWER_MAX_ITER = 10_000
JACOBI_TOL = 1e-14


class ConvergenceError(ArithmeticError):
    """An iterative eigensolver hit its iteration cap."""


def _as_symmetric(m) -> np.ndarray:
    a = np.array(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.array_equal(a, a.T):
        # keep the upper triangle as the authoritative copy
        a = np.triu(a) + np.triu(a, 1).T
    return a


def _shift(stack: np.ndarray) -> np.ndarray:
    """Per-matrix shift ``max(0, -g/2)``, ``g`` the Gershgorin lower bound.

    With ``lambda_min >= g`` and a positive Perron root, the shifted Perron
    root strictly dominates every other eigenvalue in magnitude.
    """
    d = np.diagonal(stack, axis1=1, axis2=2)
    radius = np.abs(stack).sum(axis=2) - np.abs(d)
    return np.maximum(0.0, -0.5 * (d - radius).min(axis=1))


def power_iteration(m, tol: float = POWER_TOL, max_iter: int = POWER_MAX_ITER):
    """Perron root and unit eigenvector of a symmetric positive matrix.

    Starts from the all-ones vector and stops once the Rayleigh quotient
    changes by at most ``tol`` relative to its value. The iteration runs on
    ``A + sigma I`` with ``sigma`` taken from the Gershgorin disks, so that
    ``-rho`` being (nearly) an eigenvalue cannot stall the quotient.

    Raises
    ------
    ConvergenceError
        If ``max_iter`` iterations pass without meeting ``tol``.
    """
    a = _as_symmetric(m)
    sigma = _shift(a[None])[0]
    a = a + sigma * np.eye(a.shape[0])
    v = np.ones(a.shape[0]) / np.sqrt(a.shape[0])
    w = a @ v
    rho = v @ w
    for _ in range(max_iter):
        nrm = np.linalg.norm(w)
        if nrm == 0.0:
            return -float(sigma), v
        v = w / nrm
        w = a @ v
        new = v @ w
        if abs(new - rho) <= tol * abs(new):
            return float(new - sigma), v
        rho = new
    raise ConvergenceError(f"power iteration did not converge in {max_iter} steps")


def jacobi_eigenvalues(m, tol: float = JACOBI_TOL, max_sweeps: int = 100) -> np.ndarray:
    """All eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending."""
    a = _as_symmetric(m)
    n = a.shape[0]
    fro = np.linalg.norm(a)
    if n == 1 or fro == 0.0:
        return np.sort(np.diag(a))
    for _ in range(max_sweeps):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off < tol * fro:
            return np.sort(np.diag(a))
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                diff = a[q, q] - a[p, p]
                if abs(apq) <= 1e-150 * abs(diff):
                    # rotation angle below resolution
                    t = apq / diff
                else:
                    theta = diff / (2.0 * apq)
                    t = np.sign(theta) / (abs(theta) + np.hypot(theta, 1.0)) if theta != 0 else 1.0
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                ap = a[:, p].copy()
                aq = a[:, q].copy()
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                rp = a[p, :].copy()
                rq = a[q, :].copy()
                a[p, :] = c * rp - s * rq
                a[q, :] = s * rp + c * rq
                a[p, q] = a[q, p] = 0.0
    raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps")


def max_eigenvalue(m, tol: float = POWER_TOL) -> float:
    """Largest eigenvalue of a symmetric matrix.

    Power iteration is used when every entry is positive; otherwise, or if
    it fails to converge, the Jacobi decomposition decides.
    """
    a = _as_symmetric(m)
    if np.all(a > 0):
        try:
            return power_iteration(a, tol)[0]
        except ConvergenceError:
            pass
    return float(jacobi_eigenvalues(a)[-1])


def max_eigenvalues(stack, tol: float = POWER_TOL, max_iter: int = POWER_MAX_ITER) -> np.ndarray:
    """Vectorized ``max_eigenvalue`` over a ``(count, k, k)`` stack of positive matrices.

    Each matrix follows the same iteration as :func:`power_iteration`;
    stragglers that exhaust ``max_iter`` go through Jacobi one by one.
    """
    a = np.asarray(stack, dtype=float)
    count, k = a.shape[0], a.shape[1]
    out = np.empty(count)
    if count == 0:
        return out
    if k == 1:
        return a[:, 0, 0].copy()
    sigma = _shift(a)
    a_orig, a = a, a + sigma[:, None, None] * np.eye(k)
    active = np.arange(count)
    v = np.full((count, k), 1.0 / np.sqrt(k))
    w = np.einsum("bij,bj->bi", a, v)
    rho = np.einsum("bi,bi->b", v, w)
    for _ in range(max_iter):
        v = w / np.linalg.norm(w, axis=1, keepdims=True)
        w = np.einsum("bij,bj->bi", a[active], v)
        new = np.einsum("bi,bi->b", v, w)
        done = np.abs(new - rho) <= tol * np.abs(new)
        if np.any(done):
            out[active[done]] = new[done] - sigma[active[done]]
            keep = ~done
            active, v, w, new = active[keep], v[keep], w[keep], new[keep]
            if active.size == 0:
                return out
        rho = new
    for i in active:
        out[i] = jacobi_eigenvalues(a_orig[i])[-1]
    return out


def dominates(a, b) -> bool:
    """True iff ``b - a`` is entrywise non-negative.

    For non-negative ``a`` this implies ``max_eigenvalue(a) <= max_eigenvalue(b)``.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"size mismatch: {a.shape} vs {b.shape}")
    return bool(np.all(b - a >= 0))
