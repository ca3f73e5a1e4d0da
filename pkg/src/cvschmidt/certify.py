"""Certification of experimental records and benchmark-table sweeps."""

from __future__ import annotations

import csv
import functools
import io
from dataclasses import dataclass, field

from .bounds import BenchmarkTableRow, conjectured_bound, schmidt_bound, table_row
from .params import GainWidthParams

CSV_HEADER = ["k", "eta", "lambda", "U_k", "conjectured", "classical", "quantum",
              "noise_threshold", "best_J", "best_tuple"]


@dataclass(frozen=True)
class ExperimentRecord:
    """Observed gain/width point plus either a fidelity or the quadrature deviations."""

    eta: float
    lam: float
    fidelity: float | None = None
    vx: float | None = None
    vp: float | None = None

    def __post_init__(self):
        GainWidthParams(self.eta, self.lam)
        has_f = self.fidelity is not None
        has_v = self.vx is not None or self.vp is not None
        if has_f == has_v:
            raise ValueError("a record carries either a fidelity or (vx, vp), not both")
        if has_v and (self.vx is None or self.vp is None):
            raise ValueError("noise records need both vx and vp")
        if has_f and self.fidelity < 0:
            raise ValueError("fidelity must be non-negative")
        if has_v and (self.vx < 0 or self.vp < 0):
            raise ValueError("mean-square deviations must be non-negative")

    @property
    def kind(self) -> str:
        return "fidelity" if self.fidelity is not None else "noise"

    @property
    def params(self) -> GainWidthParams:
        return GainWidthParams(self.eta, self.lam)


@dataclass(frozen=True)
class CertificationResult:
    max_k_excluded: int
    margins: dict[int, float]
    bound_kind: str  # "proven" or "conjectural"
    record_kind: str
    bounds: dict[int, float] = field(default_factory=dict)

    @property
    def schmidt_lower_bound(self) -> int:
        return self.max_k_excluded + 1


@functools.lru_cache(maxsize=4096)
def _bound(k: int, eta: float, lam: float, conjectural: bool) -> float:
    p = GainWidthParams(eta, lam)
    return conjectured_bound(k, p) if conjectural else schmidt_bound(k, p).value


def certify(record: ExperimentRecord, k_max: int = 10, conjectural: bool = False) -> CertificationResult:
    """Largest ``k`` such that the record beats every Schmidt-class-``k'`` map, ``k' <= k``.

    A fidelity record beats class ``k`` when ``F > U_k``; a noise record when
    ``vx + vp < 3 - 2 U_k``. Margins are ``F - U_k`` and ``3 - 2 U_k - (vx + vp)``.
    """
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    margins: dict[int, float] = {}
    bounds: dict[int, float] = {}
    for k in range(1, k_max + 1):
        u = _bound(k, float(record.eta), float(record.lam), conjectural)
        bounds[k] = u
        if record.kind == "fidelity":
            margins[k] = record.fidelity - u
        else:
            margins[k] = (3.0 - 2.0 * u) - (record.vx + record.vp)
    excluded = 0
    while excluded < k_max and margins[excluded + 1] > 0:
        excluded += 1
    return CertificationResult(
        max_k_excluded=excluded,
        margins=margins,
        bound_kind="conjectural" if conjectural else "proven",
        record_kind=record.kind,
        bounds=bounds,
    )


def sweep_table(etas, lam: float, k_range) -> list[BenchmarkTableRow]:
    """One row per ``(eta, k)``, etas in the given order and ``k`` ascending."""
    ks = list(k_range)
    return [table_row(k, GainWidthParams(eta, lam)) for eta in etas for k in ks]


def _fmt(v) -> str:
    return repr(float(v))


def rows_to_csv(rows, sink=None) -> str:
    """Serialize rows with the fixed header; floats as shortest round-trip decimals."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow([r.k, _fmt(r.eta), _fmt(r.lam), _fmt(r.u_k), _fmt(r.conjectured), _fmt(r.classical),
                    _fmt(r.quantum), _fmt(r.noise_threshold), r.best_J, "-".join(map(str, r.best_tuple))])
    text = buf.getvalue()
    if sink is not None:
        sink.write(text)
    return text


def read_csv(text: str) -> list[dict]:
    """Parse a table written by :func:`rows_to_csv` back into typed dicts."""
    out = []
    for row in csv.DictReader(io.StringIO(text)):
        rec = {key: float(row[key]) for key in CSV_HEADER[1:8]}
        rec["k"] = int(row["k"])
        rec["best_J"] = int(row["best_J"])
        rec["best_tuple"] = tuple(int(v) for v in row["best_tuple"].split("-"))
        out.append(rec)
    return out
