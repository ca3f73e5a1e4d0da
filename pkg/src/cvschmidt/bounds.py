"""Fidelity benchmarks: Schmidt-class-k bound, its conjectured closed form,
the classical and quantum limits, and the quadrature-noise thresholds."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

from . import eigen
from .enumeration import BoundResult, maximize
from .gamma_kernel import SubmatrixSpec, build_submatrix
from .params import DomainError, GainWidthParams, kernel_from_gain_width


def _params(p) -> GainWidthParams:
    return p if isinstance(p, GainWidthParams) else GainWidthParams(*p)


def schmidt_bound(k: int, p: GainWidthParams, window: int = 3) -> BoundResult:
    """``U_k(eta, lam)``: the largest fidelity any Schmidt-class-``k`` map can reach.

    The returned result's ``value`` is ``U_k``; ``raw_value`` is the bare
    eigenvalue maximum it is built from.
    """
    p = _params(p)
    res = maximize(k, kernel_from_gain_width(p), window=window)
    return dataclasses.replace(res, prefactor=p.prefactor)


def conjectured_bound(k: int, p: GainWidthParams) -> float:
    """Prefactor times the top eigenvalue of the leading ``J = 0`` window ``{0..k-1}``."""
    p = _params(p)
    if k < 1:
        raise DomainError("k must be >= 1")
    a = build_submatrix(SubmatrixSpec(0, tuple(range(k))), kernel_from_gain_width(p))
    return p.prefactor * eigen.max_eigenvalue(a)


def classical_limit(p: GainWidthParams) -> float:
    return _params(p).prefactor


def quantum_limit(p: GainWidthParams) -> float:
    p = _params(p)
    return min(1.0, (1.0 + p.lam) / p.eta)


def noise_threshold(k: int, p: GainWidthParams, u_k: float | None = None) -> float:
    """``3 - 2 U_k``: an observed ``Vx + Vp`` below this excludes every Schmidt-class-``k`` map."""
    if u_k is None:
        u_k = schmidt_bound(k, p).value
    return 3.0 - 2.0 * u_k


def fidelity_lower_bound_from_noise(vx: float, vp: float) -> float:
    """Fidelity implied by the quadrature mean-square deviations, ``3/2 - (vx + vp)/2``.

    Not clamped; values at or below zero carry no information.
    """
    if vx < 0 or vp < 0:
        raise DomainError("mean-square deviations must be non-negative")
    return 1.5 - 0.5 * (vx + vp)


@dataclass(frozen=True)
class BenchmarkTableRow:
    k: int
    eta: float
    lam: float
    u_k: float
    conjectured: float
    classical: float
    quantum: float
    noise_threshold: float
    best_J: int
    best_tuple: tuple[int, ...]


def table_row(k: int, p: GainWidthParams) -> BenchmarkTableRow:
    p = _params(p)
    res = schmidt_bound(k, p)
    return BenchmarkTableRow(
        k=k,
        eta=p.eta,
        lam=p.lam,
        u_k=res.value,
        conjectured=res.conjectured_value,
        classical=classical_limit(p),
        quantum=quantum_limit(p),
        noise_threshold=noise_threshold(k, p, res.value),
        best_J=res.best_J,
        best_tuple=res.best_tuple,
    )
