"""Benchmark parameterizations and the exact maps between them.

Three equivalent ways of pinning down one benchmark point:

* ``GainWidthParams`` -- the target gain ``eta`` of ``|a> -> |sqrt(eta) a>``
  and the inverse width ``lam`` of the Gaussian prior over coherent states;
* ``KernelParams`` -- the pair ``(x, kappa)`` entering the matrix elements of
  the benchmark kernel;
* ``StateParams`` -- the two-mode-state parameters ``(s, xi, kappa)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


class DomainError(ValueError):
    """A parameter lies outside the domain where the benchmark is defined."""


@dataclass(frozen=True)
class GainWidthParams:
    """Amplitude gain ``eta > 0`` and prior inverse width ``lam >= 0``.

    ``lam = 0`` is the flat-prior limit. Closed-form bounds accept it; the
    quadrature oracle does not.
    """

    eta: float
    lam: float

    def __post_init__(self):
        if not (math.isfinite(self.eta) and self.eta > 0):
            raise DomainError(f"eta must be a positive finite number, got {self.eta!r}")
        if not (math.isfinite(self.lam) and self.lam >= 0):
            raise DomainError(f"lambda must be a non-negative finite number, got {self.lam!r}")

    @property
    def prefactor(self) -> float:
        """``(1 + lam) / (1 + eta + lam)``, the classical-limit fidelity."""
        return (1.0 + self.lam) / (1.0 + self.eta + self.lam)


@dataclass(frozen=True)
class KernelParams:
    x: float
    kappa: float

    def __post_init__(self):
        if not (math.isfinite(self.kappa) and self.kappa > 0):
            raise DomainError(f"kappa must be positive, got {self.kappa!r}")
        # x is a rounded expression; allow a few ulps above 1/2
        if not (self.x > 0 and self.x <= 0.5 * (1 + 4e-16)):
            raise DomainError(f"x must lie in (0, 1/2], got {self.x!r}")


@dataclass(frozen=True)
class StateParams:
    s: float
    xi: float
    kappa: float

    def __post_init__(self):
        if not self.s >= 0:
            raise DomainError(f"s must be non-negative, got {self.s!r}")
        if not 0 < self.xi < 1:
            raise DomainError(f"xi must lie in (0, 1), got {self.xi!r}")
        if not self.kappa > 0:
            raise DomainError(f"kappa must be positive, got {self.kappa!r}")

    @property
    def N(self) -> float:
        return self.kappa**2 * self.xi**2

    @property
    def tau(self) -> float:
        return self.s + (1.0 - self.xi**2) * self.kappa**2

    @property
    def x(self) -> float:
        """Kernel parameter ``kappa / (1 + s + kappa**2)`` of the state form."""
        return self.kappa / (1.0 + self.s + self.kappa**2)


def kernel_from_gain_width(p: GainWidthParams) -> KernelParams:
    """Map ``(eta, lam)`` to the kernel pair ``(x, kappa)``.

    ``x = sqrt(eta (1 + lam)) / (1 + eta + lam)`` and
    ``kappa = sqrt((1 + lam) / eta)``. By AM-GM ``x <= 1/2`` with equality
    iff ``eta == 1 + lam``.
    """
    if not isinstance(p, GainWidthParams):
        p = GainWidthParams(*p)
    s = 1.0 + p.lam
    x = math.sqrt(p.eta * s) / (p.eta + s)
    return KernelParams(x=min(x, 0.5), kappa=math.sqrt(s / p.eta))


def gain_width_from_state(p: StateParams) -> GainWidthParams:
    """Fidelity arguments ``(eta, lam) = (1/N, tau/N)`` of a state point."""
    n = p.N
    if n <= 0:
        raise DomainError("N = kappa^2 xi^2 must be positive")
    return GainWidthParams(eta=1.0 / n, lam=p.tau / n)
