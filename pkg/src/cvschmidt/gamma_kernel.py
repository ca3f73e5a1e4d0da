"""Entries of the block matrices ``A^(J)`` and their monotonicity thresholds.

The ``(n, m)`` entry of block ``J`` is

    gamma^(J)_{n,m} = (n+m+|J|)! kappa^J x^(n+m+|J|)
                      / sqrt(n! m! (n+|J|)! (m+|J|)!)

All arithmetic is done on natural logs, backed by a shared table of
``ln(n!)`` that grows on demand. Thresholds are evaluated at the worst case
``x = 1/2`` in exact integer arithmetic, since several entries of the
threshold table sit exactly on a tie.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.special import gammaln

from .params import KernelParams

# --------------------------------------------------------------------------
# log-factorial table
# --------------------------------------------------------------------------

_LOGFACT = gammaln(np.arange(1025, dtype=float) + 1.0)
_LOGFACT_LOCK = threading.Lock()


def log_factorial(n):
    """``ln(n!)`` for a non-negative integer or integer array."""
    global _LOGFACT
    top = int(np.max(n))
    table = _LOGFACT
    if top >= table.size:
        with _LOGFACT_LOCK:
            table = _LOGFACT
            if top >= table.size:
                size = max(2 * table.size, top + 1)
                # readers holding the old array keep a valid prefix
                _LOGFACT = table = gammaln(np.arange(size, dtype=float) + 1.0)
    return table[n]


# --------------------------------------------------------------------------
# entries
# --------------------------------------------------------------------------


def _log_gamma_base(a, n, m, x: float):
    """``ln gamma`` without the ``kappa^J`` factor; depends on ``|J| = a`` only."""
    tot = n + m + a
    return (
        log_factorial(tot)
        + tot * math.log(x)
        - 0.5 * ((log_factorial(n) + log_factorial(m)) + (log_factorial(n + a) + log_factorial(m + a)))
    )


def log_gamma_entry(J, n, m, p: KernelParams):
    """Natural log of ``gamma^(J)_{n,m}``; broadcasts over array arguments."""
    out = _log_gamma_base(np.abs(J), n, m, p.x) + J * math.log(p.kappa)
    if np.ndim(out) == 0:
        return float(out)
    return out


def gamma_entry(J, n, m, p: KernelParams):
    lg = log_gamma_entry(J, n, m, p)
    if np.max(lg) > 709.78:
        raise OverflowError(f"gamma^({J}) entry exceeds the double range (log = {np.max(lg):.1f})")
    return np.exp(lg) if np.ndim(lg) else math.exp(lg)


def diagonal(J: int, p: KernelParams, stop: int) -> np.ndarray:
    """Diagonal entries ``gamma^(J)_{n,n}`` for ``n = 0 .. stop-1``."""
    n = np.arange(stop)
    return np.exp(log_gamma_entry(J, n, n, p))


@dataclass(frozen=True)
class SubmatrixSpec:
    """A block index ``J`` and a strictly increasing Fock-index tuple."""

    J: int
    tuple: tuple[int, ...]

    def __post_init__(self):
        t = tuple(int(v) for v in self.tuple)
        if not t:
            raise ValueError("index tuple must be non-empty")
        if t[0] < 0 or any(b <= a for a, b in zip(t, t[1:])):
            raise ValueError(f"index tuple must be strictly increasing and non-negative: {t}")
        object.__setattr__(self, "tuple", t)
        object.__setattr__(self, "J", int(self.J))

    @property
    def k(self) -> int:
        return len(self.tuple)


def build_submatrix(spec: SubmatrixSpec, p: KernelParams) -> np.ndarray:
    """The ``k x k`` principal submatrix ``A^(J)`` restricted to ``spec.tuple``."""
    idx = np.asarray(spec.tuple)
    return np.exp(log_gamma_entry(spec.J, idx[:, None], idx[None, :], p))


def build_submatrices(J: int, tuples: np.ndarray, p: KernelParams) -> np.ndarray:
    """Stack of principal submatrices, one per row of the ``(count, k)`` index array."""
    tuples = np.asarray(tuples, dtype=np.int64)
    return np.exp(log_gamma_entry(J, tuples[:, :, None], tuples[:, None, :], p))


class GammaKernel:
    """Lazy evaluator of ``gamma^(J)_{n,m}`` at fixed ``(x, kappa)``."""

    def __init__(self, kernel_params: KernelParams):
        self.kernel_params = kernel_params

    def __call__(self, J, n, m):
        return gamma_entry(J, n, m, self.kernel_params)

    def log(self, J, n, m):
        return log_gamma_entry(J, n, m, self.kernel_params)

    def submatrix(self, J: int, tuple_: Sequence[int]) -> np.ndarray:
        return build_submatrix(SubmatrixSpec(J, tuple(tuple_)), self.kernel_params)

    def diagonal(self, J: int, stop: int) -> np.ndarray:
        return diagonal(J, self.kernel_params, stop)

    def __repr__(self):
        p = self.kernel_params
        return f"GammaKernel(x={p.x!r}, kappa={p.kappa!r})"


# --------------------------------------------------------------------------
# thresholds
# --------------------------------------------------------------------------


def _poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return out


def _poly_eval(c, n):
    v = 0
    for coef in reversed(c):
        v = v * n + coef
    return v


def _offdiag_slack_poly(l: int, a: int) -> list[int]:
    """Integer polynomial ``D(n)`` with ``D(n) >= 0`` iff the ``l``-th
    off-diagonal does not increase from ``(n, n-l)`` to ``(n+1, n-l+1)`` at
    ``x = 1/2``. Coefficients in ascending order.

    The ratio of consecutive entries is ``(T+2)(T+1) / (4 sqrt(P))`` with
    ``T = 2n - l + a`` and ``P = (n+1)(n-l+1)(n+a+1)(n-l+a+1)``; squaring gives
    ``D = 16 P - (T+2)^2 (T+1)^2``.
    """
    P = [1]
    for c in (1, 1 - l, a + 1, a + 1 - l):
        P = _poly_mul(P, [c, 1])
    P = [16 * c for c in P]
    Q = _poly_mul([a - l + 2, 2], [a - l + 1, 2])
    Q = _poly_mul(Q, Q)
    return [pc - qc for pc, qc in zip(P, Q)]


def _eventual_start(poly: list[int], lo: int) -> int:
    """Smallest integer ``t >= lo`` with ``poly(n) >= 0`` for every integer ``n >= t``."""
    c = list(poly)
    while c and c[-1] == 0:
        c.pop()
    if not c:
        return lo
    lead = c[-1]
    if lead < 0:
        raise ArithmeticError("polynomial is eventually negative; no threshold exists")
    # Cauchy bound: every real root lies below this
    bound = 1 + max((abs(ci) + abs(lead) - 1) // abs(lead) for ci in c[:-1]) if len(c) > 1 else 0
    t = lo
    for n in range(lo, max(lo, bound) + 1):
        if _poly_eval(c, n) < 0:
            t = n + 1
    return t


def t_threshold(l: int, J: int, x: float | None = None) -> int:
    """First row index from which the ``l``-th off-diagonal of ``A^(J)`` is non-increasing.

    Returns the smallest ``t >= l`` such that
    ``gamma^(J)_{n+1,n-l+1} <= gamma^(J)_{n,n-l}`` for every ``n >= t``.
    Without ``x`` the worst case ``x = 1/2`` is used and the answer is exact.
    Passing ``x < 1/2`` gives a (never larger) parameter-specific threshold,
    evaluated in floating point.
    """
    if l < 0:
        raise ValueError("l must be non-negative")
    a = abs(int(J))
    if x is None or x >= 0.5:
        return _eventual_start(_offdiag_slack_poly(l, a), l)
    # ratio^2 <= 1  <=>  P - x^4 (T+2)^2 (T+1)^2 >= 0 ; leading coeff 1 - 16x^4 > 0
    x4 = x**4

    def slack(n):
        T = 2 * n - l + a
        P = (n + 1) * (n - l + 1) * (n + a + 1) * (n - l + a + 1)
        return P - x4 * ((T + 2) * (T + 1)) ** 2

    t_worst = _eventual_start(_offdiag_slack_poly(l, a), l)
    t = l
    for n in range(l, t_worst + 1):
        if slack(n) < 0:
            t = n + 1
    return t


def u_threshold(J: int) -> float:
    """Row index ``(-4 - 4|J| + J^2) / 8`` past which columns decrease downward."""
    a = abs(J)
    return (-4 - 4 * a + a * a) / 8


def diagonal_peak_index(J: int) -> int:
    """Approximate location ``(|J|^2 - |J| - 2) / 2`` of the diagonal maximum.

    For ``n`` at or beyond this index the diagonal is non-increasing for any
    ``x <= 1/2``.
    """
    a = abs(J)
    return max(0, round(0.5 * (a * a - a - 2)))


def tail_diagonal_sum(J: int, from_n: int, p: KernelParams, rel_eps: float = 1e-14):
    """Truncation point for a scan down the diagonal of ``A^(J)``.

    From ``n0 = max(from_n, diagonal_peak_index(J))`` onward the ratio
    ``gamma_{n+1,n+1} / gamma_{n,n}`` never exceeds ``r = 4 x^2``, so
    ``sum_{n >= c} gamma_{n,n} <= gamma_{c,c} / (1 - r)``.

    Returns ``(tail_bound, cutoff)``: ``cutoff`` is the first ``c >= n0`` at
    which that majorant drops to ``rel_eps`` times the partial sum over
    ``n0 .. c-1``, and ``tail_bound`` is the majorant at ``c``. At
    ``x = 1/2`` the diagonal decays like ``n^(-1/2)`` and the series
    diverges; ``(inf, None)`` is returned.
    """
    r = 4.0 * p.x * p.x
    n0 = max(int(from_n), diagonal_peak_index(J))
    if r >= 1.0:
        return math.inf, None
    scale = 1.0 / (1.0 - r)
    partial = 0.0
    n = n0
    chunk = 256
    while True:
        idx = np.arange(n, n + chunk)
        vals = np.exp(log_gamma_entry(J, idx, idx, p))
        # partial sums before each index in the chunk
        before = partial + np.concatenate(([0.0], np.cumsum(vals)[:-1]))
        ok = np.nonzero((vals * scale <= rel_eps * before) & (before > 0))[0]
        if ok.size:
            i = int(ok[0])
            return float(vals[i] * scale), n + i
        partial = float(before[-1] + vals[-1])
        n += chunk
