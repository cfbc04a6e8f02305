"""Command-line front end: reproducible experiments with machine-readable
reports.

All inputs arrive via flags or JSON files; reports are canonical JSON (sorted
keys, no timestamps) embedding the configuration hash, field basis and code
version, so identical config + seed + version produce byte-identical output.

Exit codes: 0 success, 1 guard violation, 2 configuration error,
3 acceptance failure.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import json
import sys

from . import __version__
from . import acceptance, census, constants, densities, ffpoly, galois
from . import resolvent, sievestats
from .errors import TooLarge
from .ofield import OPoly, load_field, make_field, preset

NAMED_GROUPS = {
    "S2": (2, ((1, 0),)),
    "A3": (3, ((1, 2, 0),)),
    "S3": (3, ((1, 2, 0), (1, 0, 2))),
    "C4": (4, ((1, 2, 3, 0),)),
    "V4": (4, ((1, 0, 3, 2), (2, 3, 0, 1))),
    "D4": (4, ((1, 2, 3, 0), (3, 2, 1, 0))),
    "A4": (4, ((1, 2, 0, 3), (0, 2, 3, 1))),
    "S4": (4, ((1, 2, 3, 0), (1, 0, 2, 3))),
}


def _config_hash(cfg: dict) -> str:
    canon = json.dumps(cfg, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()[:16]


def _resolve_field(args):
    if args.poly:
        coeffs = json.loads(args.poly)
        return make_field(coeffs, class_number=args.class_number,
                          label=f"poly:{coeffs}", precision=args.precision)
    if args.field.endswith(".json"):
        return load_field(args.field)
    return preset(args.field)


def _parse_poly(K, text):
    """Polynomial coefficients as a JSON array: integers for d = 1, else
    coordinate vectors, constant term first, monic lead implied."""
    rows = json.loads(text)
    coeffs = []
    for row in rows:
        if isinstance(row, list):
            coeffs.append(K.element(row))
        else:
            coeffs.append(K.from_int(row))
    return OPoly(K, coeffs)


def _parse_group(text):
    if text in NAMED_GROUPS:
        return NAMED_GROUPS[text]
    gens = []
    for part in text.split(";"):
        gens.append(tuple(int(v) for v in part.split(",")))
    return len(gens[0]), tuple(gens)


def _parse_type(text):
    return tuple(int(v) for v in text.split(","))


def _emit(args, payload: dict, config: dict):
    payload = dict(payload)
    payload["config_hash"] = _config_hash(config)
    payload["version"] = __version__
    text = json.dumps(payload, sort_keys=True, indent=2, default=str)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
        print(f"wrote {args.out}")
    else:
        print(text)


def _common_config(args, **extra):
    cfg = {"seed": args.seed, "workers": args.workers,
           "precision": args.precision}
    cfg.update(extra)
    return cfg


def _add_common(p):
    p.add_argument("--field", default="Q",
                   help="preset label (Q, Q(i), Q(sqrt2), Q(sqrt-5)) or a "
                        "field-config JSON path")
    p.add_argument("--poly", default=None,
                   help="inline defining polynomial as JSON [c0,...,1]")
    p.add_argument("--class-number", type=int, default=1)
    p.add_argument("--out", default=None, help="output JSON path")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--precision", type=int, default=50)


def cmd_census(args):
    K = _resolve_field(args)
    spec = census.CensusSpec(K, args.n, args.N)
    report = census.run_census(spec)
    cfg = _common_config(args, cmd="census", field=K.label, n=args.n, N=args.N)
    payload = report.to_dict()
    payload["meta"] = {"guards": {"enumeration": census.ENUMERATION_GUARD,
                                  "exhaustive_rho": census.EXHAUSTIVE_RHO_GUARD}}
    _emit(args, payload, cfg)
    return 0


def cmd_sieve_stats(args):
    K = _resolve_field(args)
    x = args.x if args.x else sievestats.default_x(K, args.N)
    spec = census.CensusSpec(K, args.n, args.N)
    r = _parse_type(args.r)
    rep = sievestats.deviation_sweep(spec, r, x, keep_rows=bool(args.csv),
                                     workers=args.workers)
    if args.csv:
        with open(args.csv, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(["coefficients", "pi_f_r", "deviation"])
            for coeffs, cnt, dev in rep.rows:
                w.writerow([json.dumps(coeffs), cnt, dev])
    payload = rep.to_dict()
    if args.R:
        E = sievestats.avoidance(spec, [_parse_type(t) for t in args.R], x)
        payload["avoidance"] = E.to_dict()
    cfg = _common_config(args, cmd="sieve-stats", field=K.label, n=args.n,
                         N=args.N, x=x, r=list(r))
    _emit(args, payload, cfg)
    return 0


def cmd_densities(args):
    n = args.n
    rows = {}
    for t in ffpoly.all_splitting_types(n):
        val = densities.delta_r(t).value
        rows[str(list(t.r))] = [val.numerator, val.denominator,
                                f"{float(val):.10f}"]
    dT, dP = densities.delta_T(n).value, densities.delta_P(n).value
    payload = {
        "n": n,
        "delta_r": rows,
        "delta_T": [dT.numerator, dT.denominator, f"{float(dT):.10f}"],
        "delta_P": [dP.numerator, dP.denominator, f"{float(dP):.10f}"],
        "T_set": sorted(list(t.r) for t in densities.type_sets(n)[0]),
        "P_set": sorted(list(t.r) for t in densities.type_sets(n)[1]),
    }
    print(f"delta_T = {dT} = {float(dT):.6f}")
    print(f"delta_P = {dP} = {float(dP):.6f}")
    cfg = _common_config(args, cmd="densities", n=n)
    _emit(args, payload, cfg)
    return 0


def cmd_constants(args):
    K = _resolve_field(args)
    bundle = constants.constant_bundle(K, args.n, fit_x=args.fit_x)
    payload = bundle.to_dict()
    if args.N_grid:
        grid = [int(v) for v in args.N_grid.split(",")]
        payload["theorem3"] = constants.theorem3_compare(K, args.n, grid)
    cfg = _common_config(args, cmd="constants", field=K.label, n=args.n)
    _emit(args, payload, cfg)
    return 0


def cmd_galois(args):
    K = _resolve_field(args)
    if args.input_poly:
        f = _parse_poly(K, args.input_poly)
        cert = galois.certify_sn(f, x_max=args.x_max)
        payload = {"certificate": cert.to_dict()}
        try:
            payload["group"] = galois.classify_small(f)
        except Exception as exc:  # degree > 4 or reducible
            payload["group"] = f"unavailable: {exc}"
    else:
        spec = census.CensusSpec(K, args.n, args.N)
        payload = galois.non_sn_census(spec, x_max=args.x_max)
        if args.csv:
            with open(args.csv, "w", newline="", encoding="utf-8") as fh:
                w = csv.writer(fh)
                w.writerow(["label", "count"])
                for label, count in sorted(payload["counts"].items()):
                    w.writerow([label, count])
    cfg = _common_config(args, cmd="galois", field=K.label, n=args.n,
                         N=args.N, x_max=args.x_max)
    _emit(args, payload, cfg)
    return 0


def cmd_resolvent(args):
    K = _resolve_field(args)
    f = _parse_poly(K, args.input_poly)
    n, gens = _parse_group(args.group)
    if n != f.degree:
        raise ValueError(f"group degree {n} != polynomial degree {f.degree}")
    res = resolvent.build_resolvent(f, gens)
    payload = {
        "field": K.label,
        "f": f.coord_rows(),
        "group_order": res.group_order,
        "index": res.index,
        "phi": res.phi.coord_rows(),
        "residual": res.residual,
        "has_ok_root": resolvent.resolvent_has_ok_root(res),
    }
    cfg = _common_config(args, cmd="resolvent", field=K.label,
                         group=args.group)
    _emit(args, payload, cfg)
    return 0


def cmd_theorem2(args):
    K = _resolve_field(args)
    n, gens = _parse_group(args.group)
    grid = [int(v) for v in args.N_grid.split(",")]
    rep = resolvent.theorem2_sweep(K, n, gens, grid, x_max=args.x_max)
    if args.csv:
        with open(args.csv, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(["N", "count"])
            for row in rep["rows"]:
                w.writerow([row["N"], row["count"]])
    cfg = _common_config(args, cmd="theorem2", field=K.label,
                         group=args.group, N_grid=grid)
    _emit(args, rep, cfg)
    return 0


def cmd_verify(args):
    only = {int(v) for v in args.only.split(",")} if args.only else None
    results = acceptance.run_all(only=only)
    all_pass = True
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"[{status}] {r.cid:2d} {r.name:<26s} ({r.elapsed:.1f}s / "
              f"budget {r.budget:.0f}s)")
        if not r.passed:
            all_pass = False
            print(f"       {r.details}")
    if args.out:
        payload = {"results": [{"id": r.cid, "name": r.name,
                                "passed": r.passed,
                                "elapsed": round(r.elapsed, 2),
                                "details": r.details} for r in results]}
        cfg = _common_config(args, cmd="verify")
        _emit(args, payload, cfg)
    return 0 if all_pass else 3


def build_parser():
    ap = argparse.ArgumentParser(
        prog="sncensus",
        description="Census, sieve statistics and Galois certification for "
                    "monic polynomials over number-field integer rings.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("census", help="exhaustive census counters")
    _add_common(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--N", type=int, required=True)
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("sieve-stats", help="splitting-type deviation sweep")
    _add_common(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--x", type=int, default=None)
    p.add_argument("--r", required=True, help="splitting type, e.g. 2,0")
    p.add_argument("--R", action="append", default=None,
                   help="avoidance set member (repeatable)")
    p.add_argument("--csv", default=None, help="per-polynomial CSV dump path")
    p.set_defaults(func=cmd_sieve_stats)

    p = sub.add_parser("densities", help="exact splitting-type densities")
    _add_common(p)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_densities)

    p = sub.add_parser("constants", help="constant bundle evaluation")
    _add_common(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--fit-x", type=int, default=10**5)
    p.add_argument("--N-grid", default=None,
                   help="comma list to run the census comparison")
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("galois", help="classify one polynomial or sweep")
    _add_common(p)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--N", type=int, default=10)
    p.add_argument("--x-max", type=int, default=500)
    p.add_argument("--input-poly", default=None,
                   help="coefficients JSON (see resolvent)")
    p.add_argument("--csv", default=None)
    p.set_defaults(func=cmd_galois)

    p = sub.add_parser("resolvent", help="emit the resolvent for f and G")
    _add_common(p)
    p.add_argument("--input-poly", required=True,
                   help="JSON array of coefficients, constant first; "
                        "coordinate vectors for d > 1")
    p.add_argument("--group", required=True,
                   help="named group (A3, V4, ...) or generators "
                        "'1,2,0;0,2,1'")
    p.set_defaults(func=cmd_resolvent)

    p = sub.add_parser("theorem2", help="exponent sweep for a fixed group")
    _add_common(p)
    p.add_argument("--group", required=True)
    p.add_argument("--N-grid", required=True)
    p.add_argument("--x-max", type=int, default=500)
    p.add_argument("--csv", default=None)
    p.set_defaults(func=cmd_theorem2)

    p = sub.add_parser("verify", help="run the acceptance suite")
    _add_common(p)
    p.add_argument("--only", default=None, help="comma list of criterion ids")
    p.set_defaults(func=cmd_verify)

    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except TooLarge as exc:
        print(f"guard violation: {exc}", file=sys.stderr)
        return 1
    except (ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
