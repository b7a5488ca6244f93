"""Command line entry point.

Exit codes: 0 when every check passes, 1 when a check fails, 2 for usage
errors and 3 when a size cap is exceeded.

Shared options may also come from the environment; an explicit flag wins,
then the variable, then the built-in default:

    --format      DYCKMOMENTS_FORMAT      text
    --seed        DYCKMOMENTS_SEED        0
    --samples     DYCKMOMENTS_SAMPLES     20000
    --workers     DYCKMOMENTS_WORKERS     1
    --cap         DYCKMOMENTS_CAP         14
    --max-order   DYCKMOMENTS_MAX_ORDER   15
    --dist        DYCKMOMENTS_DIST        uniform:0,1
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import lattice, moments, series, spectra, trees
from .lattice import CapExceededError
from .report import Report, jsonable

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3

SHARED = {
    # dest: (env var, default, type)
    "format": ("DYCKMOMENTS_FORMAT", "text", str),
    "seed": ("DYCKMOMENTS_SEED", 0, int),
    "samples": ("DYCKMOMENTS_SAMPLES", 20000, int),
    "workers": ("DYCKMOMENTS_WORKERS", 1, int),
    "cap": ("DYCKMOMENTS_CAP", lattice.ENUM_CAP, int),
    "max_order": ("DYCKMOMENTS_MAX_ORDER", 15, int),
    "dist": ("DYCKMOMENTS_DIST", "uniform:0,1", str),
}


class UsageError(Exception):
    pass


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text}")
    return v


def _comp(text: str) -> tuple:
    try:
        c = tuple(int(x) for x in text.replace(" ", "").split(",") if x)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad composition {text!r}") from None
    if not c or any(x <= 0 for x in c):
        raise argparse.ArgumentTypeError(f"composition parts must be positive: {text!r}")
    return c


def _shared_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("shared options")
    g.add_argument("--format", choices=("text", "json", "csv"), default=None)
    g.add_argument("--seed", type=_nonneg, default=None)
    g.add_argument("--samples", type=_positive, default=None)
    g.add_argument("--workers", type=_positive, default=None)
    g.add_argument("--cap", type=_positive, default=None, help="enumeration cap on semilength")
    g.add_argument("--max-order", dest="max_order", type=_positive, default=None)
    g.add_argument("--dist", default=None, help="distribution as name:params, e.g. uniform:0,1")
    return p


def build_parser() -> argparse.ArgumentParser:
    shared = _shared_parser()
    parser = argparse.ArgumentParser(prog="dyckmoments", description=__doc__.split("\n")[0],
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("paths", parents=[shared], help="enumerate or count lattice paths")
    p.add_argument("--kind", choices=("dyck", "generalized", "dyck_returns"), default="dyck")
    p.add_argument("-n", type=_nonneg, required=True)
    p.add_argument("--returns", type=_nonneg, default=None)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--count", action="store_true")
    mode.add_argument("--weights", action="store_true", help="print each path with its weight")

    p = sub.add_parser("weights", parents=[shared], help="weight polynomials W, A, B")
    p.add_argument("--kind", choices=("W", "A", "B"), default="A")
    p.add_argument("-n", type=_nonneg, required=True)
    p.add_argument("--shift", type=_nonneg, default=0)
    p.add_argument("--cross-check", action="store_true", help="compare enumeration with closed forms")

    p = sub.add_parser("series", parents=[shared], help="check a series relation")
    p.add_argument("--relation", choices=series.RELATIONS + ("all",), default="all")
    p.add_argument("--depth", type=_positive, default=4)

    p = sub.add_parser("moments", parents=[shared], help="alpha/omega tables and checks")
    p.add_argument("--sequence", choices=moments.SEQUENCES + ("both",), default="both")
    p.add_argument("--max", dest="nmax", type=_nonneg, default=5)
    p.add_argument("-k", type=_nonneg, default=2)
    p.add_argument("--check", action="store_true", help="run recurrence and bridge checks instead")

    p = sub.add_parser("trees", parents=[shared], help="tree classes and inversion formulas")
    tsub = p.add_subparsers(dest="action", required=True)
    t = tsub.add_parser("list", parents=[shared])
    t.add_argument("--class", dest="cls", type=int, choices=(1, 2, 3, 4), required=True)
    t.add_argument("--comp", type=_comp, required=True)
    t = tsub.add_parser("phi", parents=[shared])
    t.add_argument("--class", dest="cls", type=int, choices=(1, 2, 3, 4), required=True)
    g = t.add_mutually_exclusive_group(required=True)
    g.add_argument("--comp", type=_comp)
    g.add_argument("-n", type=_positive)
    t = tsub.add_parser("invert", parents=[shared])
    t.add_argument("--target", choices=tuple(trees.TARGETS), required=True)
    t.add_argument("-n", type=_positive, required=True)
    t.add_argument("--oracle", action="store_true", help="also compare with triangular elimination")

    p = sub.add_parser("spectra", parents=[shared], help="random Jacobi matrices")
    ssub = p.add_subparsers(dest="action", required=True)
    s = ssub.add_parser("exact", parents=[shared])
    s.add_argument("--kind", choices=("trace", "entry11"), default="entry11")
    s.add_argument("-n", type=_positive, required=True)
    s.add_argument("-k", type=_nonneg, required=True)
    s = ssub.add_parser("mc", parents=[shared])
    s.add_argument("--kind", choices=spectra.KINDS, default="entry11")
    s.add_argument("-n", type=_positive, required=True)
    s.add_argument("-k", type=_nonneg, required=True)
    s = ssub.add_parser("rows", parents=[shared])
    s.add_argument("-n", type=_positive, required=True)
    s.add_argument("-m", type=_nonneg, required=True)
    s = ssub.add_parser("asymptotics", parents=[shared])
    s.add_argument("-m", type=_positive, required=True)
    s.add_argument("--n-max", dest="n_max", type=_positive, default=40)
    s = ssub.add_parser("consistency", parents=[shared])
    s.add_argument("--n-max", dest="n_max", type=_positive, default=30)
    s.add_argument("--k-max", dest="k_max", type=_nonneg, default=8)

    p = sub.add_parser("verify-all", parents=[shared], help="run every self-check up to size N")
    p.add_argument("N", type=_positive)
    return parser


def resolve(args: argparse.Namespace, environ=None) -> argparse.Namespace:
    """Fill unset shared options from the environment, then defaults."""
    environ = os.environ if environ is None else environ
    for dest, (var, default, typ) in SHARED.items():
        if getattr(args, dest, None) is not None:
            continue
        raw = environ.get(var)
        if raw is None or raw == "":
            setattr(args, dest, default)
            continue
        try:
            val = typ(raw)
        except ValueError:
            raise UsageError(f"{var}={raw!r} is not a valid {typ.__name__}") from None
        if dest == "format" and val not in ("text", "json", "csv"):
            raise UsageError(f"{var} must be text, json or csv")
        if typ is int and (val < 0 or (dest != "seed" and val < 1)):
            raise UsageError(f"{var} must be positive")
        setattr(args, dest, val)
    return args


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------


def _dumps(obj) -> str:
    return json.dumps(jsonable(obj), sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def _emit_reports(reports: list[Report], fmt: str, out, meta: dict | None = None) -> int:
    ok = all(r.passed for r in reports)
    if fmt == "json":
        doc = {"status": "PASS" if ok else "FAIL", "reports": [r.to_json_obj() for r in reports]}
        if meta:
            doc["config"] = meta
        out.write(_dumps(doc) + "\n")
    elif fmt == "csv":
        out.write("name,status,checked,mismatches\n")
        for r in reports:
            out.write(f"{r.name},{r.status},{r.checked},{len(r.mismatches)}\n")
    else:
        for r in reports:
            out.write(r.summary() + "\n")
            for mm in r.mismatches[:10]:
                out.write("    " + _dumps(mm) + "\n")
        out.write(("PASS" if ok else "FAIL") + "\n")
    return EXIT_OK if ok else EXIT_FAIL


def _emit_rows(rows: list[dict], fmt: str, out, columns) -> None:
    if fmt == "json":
        out.write(_dumps(rows) + "\n")
    elif fmt == "csv":
        import csv

        w = csv.DictWriter(out, fieldnames=columns, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({c: jsonable(r.get(c, "")) for c in columns})
    else:
        for r in rows:
            out.write("  ".join(f"{c}={jsonable(r.get(c, ''))}" for c in columns) + "\n")


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def _cmd_paths(a, out) -> int:
    if a.kind == "dyck_returns" and a.returns is None:
        raise UsageError("--kind dyck_returns needs --returns")
    if a.count:
        c = lattice.count_paths(a.kind, a.n, a.returns, cap=a.cap)
        if a.format == "json":
            out.write(_dumps({"kind": a.kind, "n": a.n, "count": c}) + "\n")
        else:
            out.write(f"{c}\n")
        return EXIT_OK
    rows = []
    for p in lattice.enumerate_paths(a.kind, a.n, a.returns, cap=a.cap):
        row = {"path": p.to_string()}
        if a.weights:
            row["weight"] = str(lattice.path_weight(p))
        rows.append(row)
    _emit_rows(rows, a.format, out, ["path", "weight"] if a.weights else ["path"])
    return EXIT_OK


def _cmd_weights(a, out) -> int:
    poly = lattice.weight_polynomial(a.kind, a.n, shift=a.shift, cap=a.cap)
    if not a.cross_check:
        if a.format == "json":
            out.write(_dumps({"kind": a.kind, "n": a.n, "shift": a.shift, "poly": poly.to_json_obj()}) + "\n")
        else:
            out.write(f"{poly}\n")
        return EXIT_OK
    r = Report(f"{a.kind}_{a.n} closed forms")
    if a.kind == "A":
        forms = ["shifted_A"] if a.shift else ["flajolet_A", "touchard_A"]
    elif a.kind == "B":
        forms = ["shifted_B"] if a.shift else ["flajolet_B"]
    else:
        if a.shift:
            raise UsageError("W has no shifted closed form")
        forms = ["theorem_W", "nested_W"]
    for f in forms:
        r.check(f, lattice.closed_form(f, a.n, a.shift), poly)
    return _emit_reports([r], a.format, out)


def _cmd_series(a, out) -> int:
    rels = series.RELATIONS if a.relation == "all" else (a.relation,)
    reports = []
    for rel in rels:
        if rel == "contfrac":
            for d in range(1, a.depth + 1):
                rep = series.verify_relation(rel, a.max_order, depth=d)
                rep.name = f"contfrac depth {d}"
                reports.append(rep)
        else:
            reports.append(series.verify_relation(rel, a.max_order, seed=a.seed))
    return _emit_reports(reports, a.format, out)


def _cmd_moments(a, out) -> int:
    if a.check:
        reports = [moments.check_recurrences(max(a.nmax, 1))]
        for n in range(a.nmax + 1):
            reports.append(moments.expectation_bridge(n))
        return _emit_reports(reports, a.format, out)
    seqs = ("alpha", "omega") if a.sequence == "both" else (a.sequence,)
    out.write(moments.moment_table(a.nmax, a.format, k=a.k, sequences=seqs))
    if a.format == "json":
        out.write("\n")
    return EXIT_OK


def _cmd_trees(a, out) -> int:
    if a.action == "list":
        ts = trees.enumerate_trees(a.cls, a.comp)
        if a.format == "json":
            objs = [{**t.to_json_obj(), "weight": str(trees.tree_weight(a.cls, t))} for t in ts]
            out.write(_dumps(objs) + "\n")
        else:
            for i, t in enumerate(ts, 1):
                out.write(f"# tree {i}  weight {trees.tree_weight(a.cls, t)}\n{t.dump()}\n")
            out.write(f"# {len(ts)} trees\n")
        return EXIT_OK
    if a.action == "phi":
        comps = [a.comp] if a.comp else lattice.compositions(a.n)
        rows = [{"comp": ",".join(map(str, c)), "phi": trees.phi(a.cls, c)} for c in comps]
        _emit_rows(rows, a.format, out, ["comp", "phi"])
        return EXIT_OK
    poly = trees.reconstruct(a.target, a.n)
    if a.oracle:
        r = Report(f"{a.target} n={a.n}", info={"poly": poly})
        r.check("trees vs elimination", poly, trees.invert_oracle(a.target, a.n))
        return _emit_reports([r], a.format, out)
    if a.format == "json":
        out.write(_dumps({"target": a.target, "n": a.n, "poly": poly.to_json_obj()}) + "\n")
    else:
        out.write(f"{poly}\n")
    return EXIT_OK


def _cmd_spectra(a, out) -> int:
    try:
        dist = spectra.DistributionSpec.parse(a.dist)
    except spectra.DistributionError as e:
        raise UsageError(str(e)) from None
    if a.action == "exact":
        val = spectra.exact_expected(a.kind, a.n, a.k, dist, cap=a.cap)
        row = {"kind": a.kind, "n": a.n, "k": a.k, "dist": str(dist), "exact": val}
        _emit_rows([row], a.format, out, list(spectra.CSV_COLUMNS[:5]))
        return EXIT_OK
    if a.action == "mc":
        res = spectra.mc_estimate(a.kind, a.n, a.k, dist, a.samples, seed=a.seed, workers=a.workers)
        row = {"kind": a.kind, "n": a.n, "k": a.k, "dist": str(dist), "mc_mean": repr(res.mean),
               "mc_stderr": repr(res.std_error), "N": a.samples, "seed": a.seed}
        if a.kind in ("trace", "entry11"):
            row["exact"] = spectra.exact_expected(a.kind, a.n, a.k, dist, cap=a.cap)
        _emit_rows([row], a.format, out, list(spectra.CSV_COLUMNS))
        return EXIT_OK
    if a.action == "rows":
        return _emit_reports([spectra.interior_row_check(a.n, a.m, dist)], a.format, out)
    if a.action == "asymptotics":
        rep = spectra.asymptotic_check(a.m, dist, range(2 * a.m + 1, a.n_max + 1))
        if a.format == "csv":
            _emit_rows(rep.info["table"], "csv", out, ["n", "mean_trace", "omega_m", "deficit", "bound"])
            return EXIT_OK if rep.passed else EXIT_FAIL
        return _emit_reports([rep], a.format, out)
    import numpy as np

    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([a.seed, 1 << 20])))
    total = Report("tau consistency", info={"samples": a.samples, "seed": a.seed, "dist": str(dist)})
    for _ in range(a.samples):
        n = int(rng.integers(1, a.n_max + 1))
        k = int(rng.integers(0, a.k_max + 1))
        total.merge(spectra.tau_consistency(n, k, dist.sample(rng, (n - 1,))))
    return _emit_reports([total], a.format, out)


def _cmd_verify_all(a, out) -> int:
    from .verify import verify_all

    samples = a.samples
    reports = verify_all(a.N, seed=a.seed, samples=samples, workers=a.workers)
    meta = {"N": a.N, "seed": a.seed, "samples": samples}
    return _emit_reports(reports, a.format, out, meta)


COMMANDS = {
    "paths": _cmd_paths,
    "weights": _cmd_weights,
    "series": _cmd_series,
    "moments": _cmd_moments,
    "trees": _cmd_trees,
    "spectra": _cmd_spectra,
    "verify-all": _cmd_verify_all,
}


def run(argv=None, out=None, environ=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        resolve(args, environ)
        return COMMANDS[args.command](args, out)
    except UsageError as e:
        sys.stderr.write(f"dyckmoments: usage error: {e}\n")
        return EXIT_USAGE
    except CapExceededError as e:
        payload = {"error": "cap_exceeded", "what": e.what, "value": e.value, "bound": e.bound}
        sys.stderr.write(_dumps(payload) + "\n")
        return EXIT_CAP


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
