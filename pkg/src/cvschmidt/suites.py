"""Verification suites run by ``cvschmidt verify``.

Each suite returns a :class:`Report` with one entry per checked point.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from . import eigen
from .bounds import conjectured_bound, schmidt_bound
from .channels_oracle import FilterSpec, filter_fidelity_closed, filter_moments
from .enumeration import brute_force_maximize, maximize
from .gamma_kernel import SubmatrixSpec, build_submatrix, t_threshold
from .params import GainWidthParams, kernel_from_gain_width

# published threshold table: rows l = 0..10, columns |J| = 0..4
TABLE_I = (
    (0, 0, 0, 2, 5),
    (1, 1, 2, 4, 7),
    (2, 3, 4, 6, 9),
    (5, 6, 7, 9, 12),
    (9, 10, 11, 13, 16),
    (14, 15, 16, 18, 21),
    (20, 21, 22, 24, 27),
    (27, 28, 29, 31, 34),
    (35, 36, 37, 39, 42),
    (44, 45, 46, 48, 51),
    (54, 55, 56, 58, 61),
)

CURVE_ETAS = (0.5, 0.75, 1.0, 1.5, 2.0)
CURVE_LAMBDA = 0.01
PRUNING_POINTS = tuple((eta, lam) for eta in (0.5, 1.0, 2.0) for lam in (0.01, 0.1, 1.0))


@dataclass
class Config:
    etas: tuple = CURVE_ETAS
    lam: float = CURVE_LAMBDA
    k_min: int = 1
    k_max: int = 10
    conjecture_atol: float = 1e-10
    attain_k_max: int = 8
    attain_atol: float = 1e-10
    pruning_k_max: int = 4
    pruning_points: tuple = PRUNING_POINTS
    pruning_n_max: int = 12
    pruning_J_max: int = 10
    pruning_rtol: float = 1e-11
    quad_order: int = 16
    quad_max_order: int = 512

    @classmethod
    def from_mapping(cls, data: dict) -> "Config":
        known = {f for f in cls.__dataclass_fields__}
        extra = set(data) - known
        if extra:
            raise ValueError(f"unknown config keys: {sorted(extra)}")
        data = dict(data)
        for key in ("etas", "pruning_points"):
            if key in data:
                data[key] = tuple(tuple(v) if isinstance(v, list) else v for v in data[key])
        return cls(**data)

    @classmethod
    def load(cls, path) -> "Config":
        with open(path) as fh:
            return cls.from_mapping(json.load(fh))


@dataclass
class Entry:
    point: dict
    passed: bool
    margin: float | None = None
    detail: str = ""


@dataclass
class Report:
    suite: str
    entries: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    def add(self, point, passed, margin=None, detail=""):
        self.entries.append(Entry(point, bool(passed), None if margin is None else float(margin), detail))

    def to_json(self) -> dict:
        return {"suite": self.suite, "passed": self.passed,
                "n_pass": sum(e.passed for e in self.entries), "n_total": len(self.entries),
                "entries": [asdict(e) for e in self.entries]}

    def to_text(self) -> str:
        lines = [f"[{'PASS' if e.passed else 'FAIL'}] {self.suite} {_point(e.point)}"
                 + (f" margin={e.margin:.3e}" if e.margin is not None else "")
                 + (f" {e.detail}" if e.detail else "") for e in self.entries]
        n = sum(e.passed for e in self.entries)
        lines.append(f"{self.suite}: {n}/{len(self.entries)} passed")
        return "\n".join(lines)


def _point(d):
    return " ".join(f"{k}={v}" for k, v in d.items())


def table1(cfg: Config = Config()) -> Report:
    rep = Report("table1")
    for l, row in enumerate(TABLE_I):
        for J, expected in enumerate(row):
            got = t_threshold(l, J)
            rep.add({"l": l, "J": J}, got == expected, detail=f"t={got} expected={expected}")
    return rep


def conjecture(cfg: Config = Config()) -> Report:
    """``U_k`` against the leading-window value on the configured grid."""
    rep = Report("conjecture")
    for eta in cfg.etas:
        p = GainWidthParams(eta, cfg.lam)
        for k in range(cfg.k_min, cfg.k_max + 1):
            res = schmidt_bound(k, p)
            gap = res.value - res.conjectured_value
            rep.add({"eta": eta, "lambda": cfg.lam, "k": k}, abs(gap) <= cfg.conjecture_atol, gap,
                    f"U_k={res.value!r} best_J={res.best_J} best_tuple={res.best_tuple}")
    return rep


def attainability(cfg: Config = Config()) -> Report:
    """Perron-optimized filter fidelity against the conjectured bound, and the
    success-probability closed form against the general moment sum."""
    rep = Report("attainability")
    lams = sorted({cfg.lam, *(lam for _, lam in cfg.pruning_points)})
    etas = sorted({*cfg.etas, *(eta for eta, _ in cfg.pruning_points)})
    for eta in etas:
        for lam in lams:
            p = GainWidthParams(eta, lam)
            kp = kernel_from_gain_width(p)
            for k in range(1, cfg.attain_k_max + 1):
                a = build_submatrix(SubmatrixSpec(0, tuple(range(k))), kp)
                _, vec = eigen.power_iteration(a)
                f = FilterSpec.bound_attaining(vec, lam)
                fid, ps = filter_fidelity_closed(f, p)
                num, ps_sum = filter_moments(f, p)
                gap = fid - conjectured_bound(k, p)
                ps_err = abs(ps - ps_sum) / ps
                ok = abs(gap) <= cfg.attain_atol and ps_err <= 1e-14 and abs(num / ps_sum - fid) <= cfg.attain_atol
                rep.add({"eta": eta, "lambda": lam, "k": k}, ok, gap, f"P_s={ps!r} rel_err={ps_err:.1e}")
    return rep


def pruning(cfg: Config = Config()) -> Report:
    """Pruned search against exhaustive enumeration over a fixed box."""
    rep = Report("pruning")
    for eta, lam in cfg.pruning_points:
        kp = kernel_from_gain_width(GainWidthParams(eta, lam))
        for k in range(1, cfg.pruning_k_max + 1):
            res = maximize(k, kp)
            val, J, tup = brute_force_maximize(k, kp, cfg.pruning_n_max, cfg.pruning_J_max)
            rel = abs(res.raw_value - val) / val
            rep.add({"eta": eta, "lambda": lam, "k": k}, rel <= cfg.pruning_rtol, rel,
                    f"search=({res.best_J}, {res.best_tuple}) brute=({J}, {tup})")
    return rep


SUITES = {"table1": table1, "conjecture": conjecture, "attainability": attainability, "pruning": pruning}


def verify(suite: str, cfg: Config = Config()) -> Report:
    try:
        fn = SUITES[suite]
    except KeyError:
        raise ValueError(f"unknown suite {suite!r}; choose from {sorted(SUITES)}") from None
    return fn(cfg)
