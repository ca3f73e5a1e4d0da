"""Search for the largest principal-submatrix eigenvalue over all blocks ``A^(J)``.

Beyond a few thresholds every ``k x k`` principal submatrix is entrywise
dominated by one with smaller indices, either by a diagonal shift (move the
whole window down the diagonal) or a spreading shift (push a trailing block
of indices further out). Only the finitely many tuples that cannot be
connected this way need their eigenvalue computed.

Candidate tuples come from a recursive suffix-shift walk:

1. seeds ``{m, ..., m+k-1}`` for ``m = 0 .. t_{k-1} - k + 1``;
2. for ``l = k-1`` down to ``1``, every tuple so far spawns copies with its
   last ``l`` entries shifted by ``1, 2, ...`` for as long as the last index
   stays at or below ``max(t_{l-1}, ceil(u) + l - 1)``.

Blocks are filtered beforehand with a trace bound: a PSD matrix has no
eigenvalue above its trace, and the trace of a ``k``-subset of the diagonal
is at most the sum of the ``k`` largest diagonal entries.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from math import comb

import numpy as np

from . import eigen
from .gamma_kernel import (
    SubmatrixSpec,
    build_submatrices,
    build_submatrix,
    diagonal,
    diagonal_peak_index,
    t_threshold,
    u_threshold,
)
from .params import KernelParams

J_HARD_CAP = 256
BRUTE_FORCE_CAP = 5_000_000
# relative slack on bounds and ties, far above rounding in the log-space entries
REL_SLACK = 1e-12


class SearchError(RuntimeError):
    """The block scan ran past the hard cap without its stopping rule firing."""


@dataclass(frozen=True)
class CandidateSet:
    J: int
    k: int
    tuples: np.ndarray  # (count, k) int64, rows strictly increasing
    thresholds: tuple[int, ...]  # t_l for l = 0 .. k-1
    u_ceiling: int
    limits: tuple[int, ...]  # last-index limit of each shift stage, l = 1 .. k-1

    def __len__(self):
        return self.tuples.shape[0]

    def __iter__(self):
        return (tuple(int(v) for v in row) for row in self.tuples)

    @property
    def size_bound(self) -> int | None:
        """``prod_l (t_l - l - 1)`` when positive, else ``None``."""
        prod = math.prod(t - l - 1 for l, t in enumerate(self.thresholds))
        return prod if prod > 0 else None


@dataclass(frozen=True)
class BoundResult:
    """Outcome of the block/tuple maximization.

    ``raw_value`` is the largest principal-submatrix eigenvalue found;
    ``value`` multiplies it by ``prefactor`` (1 for a bare maximization,
    ``(1+lam)/(1+eta+lam)`` for a fidelity bound). The conjectured value is
    the eigenvalue of the leading ``J = 0`` window ``{0, ..., k-1}``.
    """

    k: int
    raw_value: float
    conjectured_raw: float
    best_J: int
    best_tuple: tuple[int, ...]
    candidates_examined: int
    eigen_evaluations: int
    J_range_scanned: tuple[int, int]
    relevant_J: tuple[int, ...]
    cutoff_used: int
    prefactor: float = 1.0

    @property
    def value(self) -> float:
        return self.prefactor * self.raw_value

    @property
    def conjectured_value(self) -> float:
        return self.prefactor * self.conjectured_raw

    @property
    def conjecture_holds(self) -> bool:
        return self.best_J == 0 and self.best_tuple == tuple(range(self.k))


def _stage_limits(k: int, J: int) -> tuple[list[int], int, list[int]]:
    t = [t_threshold(l, J) for l in range(k)]
    uc = math.ceil(u_threshold(J))
    # limits[l] for suffix length l = 1 .. k-1 ; index 0 unused
    limits = [0] + [max(t[l - 1], uc + l - 1) for l in range(1, k)]
    return t, uc, limits


def _walk(k: int, J: int, prune=None) -> list[tuple[int, ...]]:
    """Suffix-shift walk; ``prune(prefix, l)`` may cut a subtree.

    ``prune`` receives a tuple whose last ``l`` entries are free to move
    further out and must return True only if no tuple in that subtree, nor in
    any later shift of the same suffix, can matter.
    """
    t, _, limits = _stage_limits(k, J)
    out: list[tuple[int, ...]] = []

    def descend(T, l):
        if l == 0:
            out.append(T)
            return
        lim = limits[l]
        cur = T
        while True:
            descend(cur, l - 1)
            cur = cur[: k - l] + tuple(v + 1 for v in cur[k - l :])
            if cur[-1] > lim or (prune is not None and prune(cur, l)):
                break

    for m in range(0, max(0, t[k - 1] - k + 1) + 1):
        seed = tuple(range(m, m + k))
        if prune is not None and m > 0 and prune(seed, k):
            break
        descend(seed, k - 1)
    return out


def generate_candidates(k: int, J: int) -> CandidateSet:
    """Every tuple produced by the suffix-shift walk for block ``J``."""
    if k < 1:
        raise ValueError("k must be >= 1")
    t, uc, limits = _stage_limits(k, J)
    tuples = np.array(_walk(k, J), dtype=np.int64).reshape(-1, k)
    return CandidateSet(J=J, k=k, tuples=tuples, thresholds=tuple(t), u_ceiling=uc,
                        limits=tuple(limits[1:]))


def brute_force_candidates(k: int, n_max: int, cap: int = BRUTE_FORCE_CAP) -> np.ndarray:
    """All strictly increasing ``k``-tuples drawn from ``0 .. n_max``, lexicographic."""
    count = comb(n_max + 1, k)
    if count > cap:
        raise ValueError(f"{count} tuples exceeds the cap of {cap}")
    return np.array(list(itertools.combinations(range(n_max + 1), k)), dtype=np.int64).reshape(-1, k)


def _block_sign(p: KernelParams) -> int:
    return 1 if p.kappa >= 1.0 else -1


def trace_bound(k: int, J: int, p: KernelParams) -> float:
    """Sum of the ``k`` largest diagonal entries of ``A^(J)``.

    Past ``diagonal_peak_index(J)`` the diagonal never increases, so the
    window ``0 .. peak + k - 1`` already holds the global top ``k``.
    """
    d = diagonal(J, p, diagonal_peak_index(J) + k)
    return float(np.sort(d)[-k:].sum())


def relevant_J_range(k: int, p: KernelParams, incumbent: float, window: int = 3) -> list[int]:
    """Blocks whose trace bound reaches ``incumbent``, scanned outward from 0.

    Only one sign of ``J`` is scanned: with ``kappa >= 1`` every negative
    block is dominated by its mirror, and vice versa. The scan stops once
    ``window`` consecutive blocks fall short.
    """
    sign = _block_sign(p)
    out = []
    misses = 0
    for a in range(J_HARD_CAP + 1):
        J = sign * a
        if trace_bound(k, J, p) * (1 + REL_SLACK) >= incumbent:
            out.append(J)
            misses = 0
        else:
            misses += 1
            if misses >= window:
                return out
    raise SearchError(f"trace bound still above the incumbent at |J| = {J_HARD_CAP}")


def _pruned_candidates(k: int, J: int, p: KernelParams, incumbent: float) -> np.ndarray:
    """The walk of :func:`generate_candidates`, minus subtrees whose trace
    bound falls below ``incumbent``."""
    t, _, limits = _stage_limits(k, J)
    top = max([t[k - 1]] + limits[1:]) + 1
    d = diagonal(J, p, top + 1)
    # tops[l][s]: sum of the l largest diagonal entries at indices >= s
    tops = np.zeros((k + 1, top + 2))
    for s in range(top, -1, -1):
        tail = np.sort(d[s:])[::-1]
        tops[1 : min(k, tail.size) + 1, s] = np.cumsum(tail[:k])
        if tail.size < k:
            tops[tail.size + 1 :, s] = tops[tail.size, s]
    cut = incumbent / (1 + REL_SLACK)

    def prune(T, l):
        s = T[k - l]
        if s > top:
            return True
        head = d[list(T[: k - l])].sum() if l < k else 0.0
        return head + tops[l, s] < cut

    return np.array(_walk(k, J, prune), dtype=np.int64).reshape(-1, k)


def _submatrix_upper_bounds(mats: np.ndarray) -> np.ndarray:
    """``min(trace, max row sum)``; both bound the Perron root of a positive PSD matrix."""
    return np.minimum(np.trace(mats, axis1=1, axis2=2), mats.sum(axis=2).max(axis=1))


def _order_key(J: int) -> tuple[int, int]:
    return (abs(J), 0 if J >= 0 else 1)


def maximize(k: int, p: KernelParams, window: int = 3, tol: float = eigen.POWER_TOL) -> BoundResult:
    """``max_J max_{|n|=k} ||A^(J)_n||`` with diagnostics.

    Ties within a relative ``1e-12`` go to the smaller ``|J|``, then
    non-negative ``J``, then the lexicographically smaller tuple.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    seed = tuple(range(k))
    conj = eigen.max_eigenvalue(build_submatrix(SubmatrixSpec(0, seed), p), tol)
    blocks = sorted(relevant_J_range(k, p, conj, window), key=_order_key)
    best = (conj, 0, seed)
    examined = evaluated = 0
    cutoff = k - 1
    for J in blocks:
        cands = _pruned_candidates(k, J, p, conj)
        examined += len(cands)
        if not len(cands):
            continue
        cutoff = max(cutoff, int(cands[:, -1].max()))
        mats = build_submatrices(J, cands, p)
        keep = np.nonzero(_submatrix_upper_bounds(mats) * (1 + REL_SLACK) >= best[0])[0]
        if not keep.size:
            continue
        vals = eigen.max_eigenvalues(mats[keep], tol)
        evaluated += keep.size
        i = int(np.argmax(vals))  # first maximum; rows are lexicographic
        if vals[i] > best[0] * (1 + REL_SLACK):
            best = (float(vals[i]), J, tuple(int(v) for v in cands[keep[i]]))
    lo, hi = (min(blocks), max(blocks))
    return BoundResult(
        k=k,
        raw_value=best[0],
        conjectured_raw=conj,
        best_J=best[1],
        best_tuple=best[2],
        candidates_examined=examined,
        eigen_evaluations=evaluated,
        J_range_scanned=(lo, hi),
        relevant_J=tuple(blocks),
        cutoff_used=cutoff,
    )


def brute_force_maximize(k: int, p: KernelParams, n_max: int = 12, J_max: int = 10):
    """Exhaustive reference: every tuple in ``0 .. n_max`` and every ``|J| <= J_max``.

    Uses LAPACK's symmetric eigensolver so it shares no code path with
    :func:`maximize` beyond the matrix entries. Returns ``(value, J, tuple)``.
    """
    tuples = brute_force_candidates(k, n_max)
    best = (-math.inf, 0, ())
    for J in sorted(range(-J_max, J_max + 1), key=_order_key):
        mats = build_submatrices(J, tuples, p)
        vals = np.linalg.eigvalsh(mats)[:, -1]
        i = int(np.argmax(vals))
        if vals[i] > best[0] * (1 + REL_SLACK):
            best = (float(vals[i]), J, tuple(int(v) for v in tuples[i]))
    return best
