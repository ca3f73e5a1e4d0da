"""Command-line front end.

    cvschmidt bound   --eta 1 --lambda 0.01 --k 3
    cvschmidt table   --lambda 0.01 --kmax 10 --out curves.csv
    cvschmidt certify --eta 1 --lambda 0.01 --fidelity 0.66
    cvschmidt certify --eta 1 --lambda 0.01 --vx 0.6 --vp 0.6
    cvschmidt verify  table1

Exit codes: 0 success, 1 usage error, 2 verification failure,
3 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import json
import sys

from .bounds import classical_limit, conjectured_bound, quantum_limit, schmidt_bound
from .certify import ExperimentRecord, certify, rows_to_csv, sweep_table
from .channels_oracle import QuadratureError
from .eigen import ConvergenceError
from .enumeration import SearchError
from .params import DomainError, GainWidthParams
from .suites import SUITES, Config, verify

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_NUMERIC = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="cvschmidt", description="Schmidt-number fidelity benchmarks for CV devices.")
    ap.add_argument("--config", help="JSON config (grids, k ranges, tolerances)")
    ap.add_argument("--json", action="store_true", help="machine-readable output")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    b = sub.add_parser("bound", help="U_k and related limits at one point")
    b.add_argument("--eta", type=float, required=True)
    b.add_argument("--lambda", dest="lam", type=float, required=True)
    b.add_argument("--k", type=int, required=True)

    t = sub.add_parser("table", help="sweep U_k over a grid of gains, CSV out")
    t.add_argument("--eta", type=float, action="append", help="repeatable; default from config")
    t.add_argument("--lambda", dest="lam", type=float)
    t.add_argument("--k", type=int, help="smallest k (default 1)")
    t.add_argument("--kmax", type=int)
    t.add_argument("--out", help="CSV path (default stdout)")

    c = sub.add_parser("certify", help="Schmidt-number lower bound for an experimental record")
    c.add_argument("--eta", type=float, required=True)
    c.add_argument("--lambda", dest="lam", type=float, required=True)
    c.add_argument("--fidelity", type=float)
    c.add_argument("--vx", type=float)
    c.add_argument("--vp", type=float)
    c.add_argument("--kmax", type=int, default=10)
    c.add_argument("--conjectural", action="store_true", help="compare against the conjectured bound")

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=sorted(SUITES))
    v.add_argument("--kmax", type=int)
    return ap


def _emit(obj, as_json, text):
    print(json.dumps(obj, indent=2) if as_json else text)


def _run(args, cfg: Config) -> int:
    if args.command == "bound":
        p = GainWidthParams(args.eta, args.lam)
        res = schmidt_bound(args.k, p)
        out = {"k": args.k, "eta": p.eta, "lambda": p.lam, "U_k": res.value,
               "conjectured": res.conjectured_value, "classical": classical_limit(p),
               "quantum": quantum_limit(p), "noise_threshold": 3 - 2 * res.value,
               "best_J": res.best_J, "best_tuple": list(res.best_tuple),
               "relevant_J": list(res.relevant_J), "candidates_examined": res.candidates_examined,
               "eigen_evaluations": res.eigen_evaluations, "cutoff_used": res.cutoff_used}
        _emit(out, args.json, "\n".join(f"{k}: {v}" for k, v in out.items()))
        return EXIT_OK

    if args.command == "table":
        etas = args.eta or list(cfg.etas)
        lam = cfg.lam if args.lam is None else args.lam
        kmin = args.k or cfg.k_min
        kmax = args.kmax or cfg.k_max
        text = rows_to_csv(sweep_table(etas, lam, range(kmin, kmax + 1)))
        if args.out:
            with open(args.out, "w", newline="") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        return EXIT_OK

    if args.command == "certify":
        rec = ExperimentRecord(args.eta, args.lam, fidelity=args.fidelity, vx=args.vx, vp=args.vp)
        res = certify(rec, args.kmax, conjectural=args.conjectural)
        out = {"record": rec.kind, "bound_kind": res.bound_kind, "max_k_excluded": res.max_k_excluded,
               "schmidt_lower_bound": res.schmidt_lower_bound,
               "margins": {str(k): m for k, m in res.margins.items()}}
        tag = " (conjectural)" if args.conjectural else ""
        text = (f"excluded Schmidt classes k <= {res.max_k_excluded}{tag}; "
                f"Schmidt number >= {res.schmidt_lower_bound}\n"
                + "\n".join(f"  k={k}: bound={res.bounds[k]:.12g} margin={m:+.6g}" for k, m in res.margins.items()))
        _emit(out, args.json, text)
        return EXIT_OK

    if args.command == "verify":
        if args.kmax:
            cfg.k_max = args.kmax
        rep = verify(args.suite, cfg)
        _emit(rep.to_json(), args.json, rep.to_text())
        return EXIT_OK if rep.passed else EXIT_VERIFY
    return EXIT_USAGE


def main(argv=None) -> int:
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:  # --help exits 0, bad usage exits 1
        return int(exc.code or 0)
    try:
        cfg = Config.load(args.config) if args.config else Config()
        return _run(args, cfg)
    except (ConvergenceError, QuadratureError, SearchError) as exc:
        print(f"cvschmidt: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (DomainError, ValueError, OSError) as exc:
        print(f"cvschmidt: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
