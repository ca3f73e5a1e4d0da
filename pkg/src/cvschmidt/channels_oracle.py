"""Fidelities of the bound-attaining constructions and a quadrature oracle.

Two Schmidt-class-k constructions reach the conjectured bound:

* the channel with Kraus operators ``D(sqrt(eta) a / (1+lam)) diag(c) D(a)^dag``,
  whose fidelity is known in closed form in the flat-prior limit;
* the probabilistic diagonal filter ``Q_k = sqrt(N) sum_n c_n g^n |n><n|``,
  which attains the bound at every ``lam > 0`` once ``g = sqrt(1 + lam)``.

The oracle integrates the fidelity numerically from the Fock amplitudes of
the output state, independently of the kernel algebra behind the closed
forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Protocol

import numpy as np
from scipy.special import roots_genlaguerre

from . import eigen
from .gamma_kernel import SubmatrixSpec, build_submatrix
from .params import DomainError, GainWidthParams, KernelParams, kernel_from_gain_width

UNIT_NORM_TOL = 1e-14


def _unit(coeffs, tol=UNIT_NORM_TOL) -> np.ndarray:
    a = np.asarray(coeffs)
    if a.ndim != 1 or a.size == 0:
        raise DomainError("coefficient vector must be one-dimensional and non-empty")
    if abs(np.vdot(a, a).real - 1.0) > tol * max(1, a.size):
        raise DomainError(f"coefficients must have unit norm, got {np.linalg.norm(a)!r}")
    return a


def normalized(coeffs) -> np.ndarray:
    a = np.asarray(coeffs, dtype=complex if np.iscomplexobj(coeffs) else float)
    return a / np.linalg.norm(a)


@dataclass(frozen=True)
class DiagonalKrausChannel:
    coeffs: np.ndarray
    eta: float

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _unit(np.asarray(self.coeffs, dtype=float)))
        if not self.eta > 0:
            raise DomainError("eta must be positive")

    @property
    def k(self) -> int:
        return self.coeffs.size


@dataclass(frozen=True)
class FilterSpec:
    """``Q_k = sqrt(norm_N) sum_n coeffs[n] g^n |n><n|``."""

    coeffs: np.ndarray
    g: float
    norm_N: float

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _unit(self.coeffs))
        if not self.g > 0:
            raise DomainError("g must be positive")
        if not self.norm_N > 0:
            raise DomainError("norm_N must be positive")
        if self.norm_N * self.max_gain_sq > 1.0 + 1e-12:
            raise DomainError("filter is unphysical: Q^dag Q exceeds the identity")

    @property
    def k(self) -> int:
        return self.coeffs.size

    @property
    def max_gain_sq(self) -> float:
        n = np.arange(self.k)
        return float(np.max(np.abs(self.coeffs) ** 2 * self.g ** (2 * n)))

    @classmethod
    def bound_attaining(cls, coeffs, lam: float) -> "FilterSpec":
        """``g = sqrt(1 + lam)`` and the largest physical ``norm_N``."""
        a = _unit(coeffs)
        g = math.sqrt(1.0 + lam)
        n = np.arange(a.size)
        return cls(coeffs=a, g=g, norm_N=1.0 / float(np.max(np.abs(a) ** 2 * g ** (2 * n))))


# --------------------------------------------------------------------------
# closed forms
# --------------------------------------------------------------------------


def _window_matrix(k: int, x: float) -> np.ndarray:
    return build_submatrix(SubmatrixSpec(0, tuple(range(k))), KernelParams(x=x, kappa=1.0))


def ek_fidelity_gamma_form(c: DiagonalKrausChannel) -> float:
    """Flat-prior fidelity ``a^T A a / (1 + eta)`` with ``x = sqrt(eta)/(1 + eta)``."""
    x = math.sqrt(c.eta) / (1.0 + c.eta)
    a = c.coeffs
    return float(a @ _window_matrix(c.k, x) @ a) / (1.0 + c.eta)


def ek_fidelity_derivative_form(c: DiagonalKrausChannel) -> float:
    """Same fidelity from the derivative expansion, using
    ``(-d/deta)^p 1/(1+eta) = p! / (1+eta)^(p+1)``."""
    eta = c.eta
    total = 0.0
    for n, an in enumerate(c.coeffs):
        for m, am in enumerate(c.coeffs):
            p = n + m
            total += an * am * math.comb(p, n) * eta ** (p / 2) / (1.0 + eta) ** (p + 1)
    return total


def optimal_ek_coefficients(k: int, eta: float) -> np.ndarray:
    """Perron vector of the leading ``k x k`` window: the best channel coefficients."""
    _, v = eigen.power_iteration(_window_matrix(k, math.sqrt(eta) / (1.0 + eta)))
    return v


def optimal_ek_fidelity(k: int, eta: float) -> float:
    """``max_a f^(k) = ||A_{0..k-1}|| / (1 + eta)``."""
    if k < 1 or not eta > 0:
        raise DomainError("need k >= 1 and eta > 0")
    x = math.sqrt(eta) / (1.0 + eta)
    return eigen.max_eigenvalue(_window_matrix(k, x)) / (1.0 + eta)


def filter_moments(f: FilterSpec, p: GainWidthParams) -> tuple[float, float]:
    """Unnormalized fidelity integral and success probability of ``Q_k`` for any ``g``.

    Term by term from the Gaussian moments
    ``int p_lam e^{-c|a|^2} |a|^{2j} d^2a = lam j! / (c + lam)^(j+1)``.
    """
    lam, eta = p.lam, p.eta
    a = f.coeffs
    num = 0.0
    for n in range(f.k):
        for m in range(f.k):
            j = n + m
            term = math.comb(j, n) * (math.sqrt(eta) * f.g) ** j / (1.0 + eta + lam) ** (j + 1)
            num += (a[n] * np.conj(a[m])).real * term
    ps = sum(abs(a[n]) ** 2 * f.g ** (2 * n) / (1.0 + lam) ** (n + 1) for n in range(f.k))
    return f.norm_N * lam * num, f.norm_N * lam * ps


def filter_fidelity_closed(f: FilterSpec, p: GainWidthParams) -> tuple[float, float]:
    """Renormalized fidelity and success probability of a bound-attaining filter.

    Fidelity is ``(1+lam)/(1+eta+lam) a^T A a`` at the kernel point of
    ``(eta, lam)``; success probability is ``norm_N lam / (1 + lam)``.
    """
    if not p.lam > 0:
        raise DomainError("the filter fidelity needs lam > 0")
    if not math.isclose(f.g, math.sqrt(1.0 + p.lam), rel_tol=1e-14):
        raise DomainError("closed form requires g = sqrt(1 + lam)")
    kp = kernel_from_gain_width(p)
    a = f.coeffs
    quad = float(np.real(np.conj(a) @ _window_matrix(f.k, kp.x) @ a))
    return p.prefactor * quad, f.norm_N * p.lam / (1.0 + p.lam)


# --------------------------------------------------------------------------
# quadrature oracle
# --------------------------------------------------------------------------


class QuadratureError(ArithmeticError):
    """Radial quadrature order exhausted before two successive orders agreed."""


class CoherentAction(Protocol):
    """What a map does to coherent-state inputs, as the oracle needs it.

    ``overlap_rate`` / ``trace_rate`` give the Gaussian envelope
    ``exp(-rate |alpha|^2)`` of each integrand and set the node scaling.
    """

    overlap_rate: float
    trace_rate: float

    def overlap(self, alpha: np.ndarray) -> np.ndarray: ...

    def trace(self, alpha: np.ndarray) -> np.ndarray: ...


def _log_fact(n):
    return np.array([math.lgamma(i + 1) for i in np.atleast_1d(n)])


class FilterAction:
    """``Q_k`` acting on ``|alpha>``, evaluated from truncated Fock amplitudes."""

    def __init__(self, f: FilterSpec, eta: float):
        self.f = f
        self.eta = eta
        self.overlap_rate = 1.0 + eta
        self.trace_rate = 1.0
        self._n = np.arange(f.k)
        self._inv_sqrt_fact = np.exp(-0.5 * _log_fact(self._n))

    def _amplitudes(self, alpha):
        alpha = np.asarray(alpha, dtype=complex)[..., None]
        pw = alpha ** self._n * self._inv_sqrt_fact
        out = math.sqrt(self.f.norm_N) * np.exp(-0.5 * np.abs(alpha) ** 2) * self.f.coeffs * self.f.g ** self._n * pw
        target = np.exp(-0.5 * self.eta * np.abs(alpha) ** 2) * (math.sqrt(self.eta) * alpha) ** self._n * self._inv_sqrt_fact
        return out, target

    def overlap(self, alpha):
        out, target = self._amplitudes(alpha)
        return np.abs(np.sum(np.conj(target) * out, axis=-1)) ** 2

    def trace(self, alpha):
        out, _ = self._amplitudes(alpha)
        return np.sum(np.abs(out) ** 2, axis=-1)


class IdentityAction:
    """The identity map; overlap ``|<sqrt(eta) a | a>|^2 = exp(-(sqrt(eta)-1)^2 |a|^2)``."""

    def __init__(self, eta: float):
        self.eta = eta
        self.overlap_rate = (math.sqrt(eta) - 1.0) ** 2
        self.trace_rate = 0.0

    def overlap(self, alpha):
        return np.exp(-self.overlap_rate * np.abs(np.asarray(alpha)) ** 2)

    def trace(self, alpha):
        return np.ones(np.shape(alpha))


@dataclass(frozen=True)
class QuadConfig:
    order: int = 16
    max_order: int = 512
    rtol: float = 1e-9
    mode: str = "radial"  # or "polar" for the 2-D grid
    angular_points: int = 32
    alpha: float = 0.0  # generalized Laguerre exponent


def _prior_integral_at(func, lam, rate, order, cfg):
    """``int p_lam(a) func(a) d^2a`` with an ``order``-point radial rule."""
    beta = lam + rate
    t, w = roots_genlaguerre(order, cfg.alpha)
    ok = w > 0  # underflowed weights carry nothing
    t, w = t[ok], w[ok]
    u = t / beta
    # weight t^alpha e^{-t} is divided back out of the integrand
    scale = w * np.exp(t - lam * u) * t ** (-cfg.alpha)
    r = np.sqrt(u)
    if cfg.mode == "radial":
        vals = func(r.astype(complex))
    elif cfg.mode == "polar":
        theta = 2 * np.pi * np.arange(cfg.angular_points) / cfg.angular_points
        vals = func(r[:, None] * np.exp(1j * theta[None, :])).mean(axis=1)
    else:
        raise ValueError(f"unknown quadrature mode {cfg.mode!r}")
    return lam / beta * float(np.sum(scale * np.real(vals)))


def prior_integral(func, lam: float, rate: float, cfg: QuadConfig = QuadConfig()) -> float:
    """``int p_lam(a) func(a) d^2a`` with orders doubled until two agree to ``cfg.rtol``.

    ``func`` must decay like ``exp(-rate |a|^2)`` times slower factors;
    ``rate`` only sets the node scaling.
    """
    if not lam > 0:
        raise DomainError("the Gaussian prior needs lam > 0")
    order = cfg.order
    prev = _prior_integral_at(func, lam, rate, order, cfg)
    while order < cfg.max_order:
        order *= 2
        cur = _prior_integral_at(func, lam, rate, order, cfg)
        if abs(cur - prev) <= cfg.rtol * abs(cur) or cur == prev:
            return cur
        prev = cur
    raise QuadratureError(f"no agreement to {cfg.rtol} up to order {cfg.max_order}")


def gaussian_moment(m: int, eta: float, lam: float, cfg: QuadConfig = QuadConfig()) -> float:
    """``int p_lam e^{-(1+eta)|a|^2} |a|^{2m} d^2a`` by quadrature."""
    return prior_integral(lambda a: np.exp(-(1 + eta) * np.abs(a) ** 2) * np.abs(a) ** (2 * m),
                          lam, 1.0 + eta, cfg)


def gaussian_moment_closed(m: int, eta: float, lam: float) -> float:
    return lam * math.factorial(m) / (1.0 + eta + lam) ** (m + 1)


def quadrature_fidelity_oracle(action: CoherentAction, p: GainWidthParams,
                               cfg: QuadConfig = QuadConfig()) -> tuple[float, float, float]:
    """``(numerator, success_prob, fidelity)`` by numerical integration over the prior."""
    num = prior_integral(action.overlap, p.lam, action.overlap_rate, cfg)
    ps = prior_integral(action.trace, p.lam, action.trace_rate, cfg)
    return num, ps, num / ps
