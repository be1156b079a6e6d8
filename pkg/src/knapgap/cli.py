"""``knapgap`` command line.

Exit codes: 0 success, 2 invalid input, 3 scale refusal, 4 verification failure.
"""

import argparse
import csv
import io
import os
import sys
from fractions import Fraction

from . import __version__
from .config import DEFAULT_CAPS, caps_from_env, caps_from_mapping, parse_assignments
from .errors import InfeasibleError, InvalidInstanceError, ScaleError, UnboundedError
from .serialize import dumps, jsonable, number

EXIT_OK, EXIT_INVALID, EXIT_SCALE, EXIT_VERIFY = 0, 2, 3, 4
FORMATS = ("json", "csv")


class UsageError(Exception):
    pass


def int_vector(text):
    parts = text.split(",")
    try:
        return tuple(int(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def rational_vector(text):
    try:
        return tuple(Fraction(p) for p in text.split(","))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected comma-separated rationals, got {text!r}")


def rational(text):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a rational, got {text!r}")


class Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value file (caps, workers, format, seed)")
    common.add_argument("--workers", type=int, help="worker processes for sweeps")
    common.add_argument("--format", choices=FORMATS, help="output format (default json)")
    common.add_argument("--seed", type=int, help="random seed for sampled sweeps")

    p = Parser(prog="knapgap", description="Vertex distances and integrality gaps of knapsack polyhedra.")
    p.add_argument("--version", action="version", version=f"knapgap {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=Parser)

    s = sub.add_parser("distance", parents=[common], help="vertex distance d(a, b)")
    s.add_argument("--a", type=int_vector, required=True)
    s.add_argument("--b", type=int, required=True)
    s.add_argument("--l1", action="store_true", help="also report the l1 refinement")

    s = sub.add_parser("frobenius", parents=[common], help="Frobenius number and related bounds")
    s.add_argument("--a", type=int_vector, required=True)

    s = sub.add_parser("covering", parents=[common], help="covering radii of the simplex w.r.t. Lambda_a")
    s.add_argument("--a", type=int_vector, required=True)

    s = sub.add_parser("gap", parents=[common], help="integrality gap for one b, or a scan over b")
    s.add_argument("--a", type=int_vector, required=True)
    s.add_argument("--c", type=rational_vector, required=True)
    s.add_argument("--b", type=int, help="right-hand side; omit to scan")
    s.add_argument("--b-max", type=int, help="scan window end (default f(a+))")

    s = sub.add_parser("group", parents=[common], help="group relaxation table over Z_|a_n|")
    s.add_argument("--a", type=int_vector, required=True)
    s.add_argument("--l", type=rational_vector, required=True)
    s.add_argument("--residue", type=int_vector, help="a point of Z^(n-1); report its class only")

    s = sub.add_parser("witness", parents=[common], help="the tight instance (k,...,k,1), b = k-1")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int, required=True)

    s = sub.add_parser("bounds", parents=[common], help="reference bounds on d(a, b)")
    s.add_argument("--a", type=int_vector, required=True)

    s = sub.add_parser("verify", parents=[common], help="run the invariant sweeps")
    s.add_argument("--quick", action="store_true", help="reduced sweep sizes")
    s.add_argument("--only", type=int_vector, help="criterion numbers to run")

    s = sub.add_parser("experiment", parents=[common], help="tail and average statistics")
    s.add_argument("kind", choices=("tail", "avg"))
    s.add_argument("--n", type=int, default=3)
    s.add_argument("--H", type=int, default=30)
    s.add_argument("--eps", type=rational, default=Fraction(1, 2))
    s.add_argument("--samples", type=int, default=1000)
    s.add_argument("--window", type=int, help="fixed b window W (default f(a+) + ||a||_1)")
    s.add_argument("--mode", choices=("random", "exhaustive", "auto"), default="random")
    s.add_argument("--t-grid", type=rational_vector, help="thresholds t (default 1/4, 1/2, ..., 6)")
    s.add_argument("--out", help="write per-sample records as CSV to this path")
    return p


class Settings:
    """Caps, workers, format and seed after defaults < KNAPGAP_CAPS < --config < flags."""

    def __init__(self, args, environ):
        caps = caps_from_env(DEFAULT_CAPS, environ)
        file_values = {}
        if args.config:
            with open(args.config, encoding="utf-8") as fh:
                file_values = parse_assignments(fh.read())
            caps = caps_from_mapping(file_values, caps)
        self.caps = caps
        self.workers = args.workers or int(file_values.get("workers", 1))
        self.format = args.format or file_values.get("format", "json")
        self.seed = args.seed if args.seed is not None else (
            int(file_values["seed"]) if "seed" in file_values else None)
        if self.workers < 1:
            raise InvalidInstanceError("workers must be >= 1", clause="workers")
        if self.format not in FORMATS:
            raise InvalidInstanceError(f"format must be one of {FORMATS}", clause="format")


# -- commands --------------------------------------------------------------------


def cmd_distance(args, cfg):
    from .distance import l1_nearest_check, vertex_distance
    from .knapsack import KnapsackInstance, classify
    inst = KnapsackInstance(args.a, args.b)
    res = vertex_distance(inst, cfg.caps)
    out = {"a": inst.a, "b": inst.b, "d": res.value, "kind": classify(inst),
           "vertices": [{"vertex": r.vertex.point(inst.n), "nearest": r.point, "distance": r.distance}
                        for r in res.per_vertex]}
    if args.l1:
        chk = l1_nearest_check(inst, cfg.caps)
        out["l1"] = {"value": chk.value, "bound": chk.bound, "holds": chk.holds}
    return out, out["vertices"]


def cmd_frobenius(args, cfg):
    from .frobenius import f_plus, frobenius_number, schur_bound
    res = frobenius_number(args.a)
    out = {"a": args.a, "g": res.g, "f_plus": f_plus(args.a), "schur": schur_bound(args.a),
           "apery": res.apery}
    return out, None


def cmd_covering(args, cfg):
    from .frobenius import discrete_radius_bruteforce, kannan_radii
    radii = kannan_radii(args.a)
    out = {"a": args.a, "continuous": radii.continuous, "discrete": radii.discrete}
    try:
        brute = discrete_radius_bruteforce(args.a, cfg.caps)
        out["discrete_bruteforce"] = brute
        out["agree"] = brute == radii.discrete
    except ScaleError as exc:
        out["discrete_bruteforce"] = None
        out["note"] = str(exc)
    return out, None


def cmd_gap(args, cfg):
    from .gaps import gap_scan, gap_special, integrality_gap, lattice_gap, gap_lower_bound
    from .knapsack import KnapsackInstance
    from .lattice import CongruenceLattice
    if args.b is not None:
        rep = integrality_gap(args.c, KnapsackInstance(args.a, args.b), cfg.caps)
        return {"a": args.a, "b": args.b, "c": args.c, **jsonable(rep)}, None
    scan = gap_scan(args.c, args.a, args.b_max, caps=cfg.caps)
    out = {"a": args.a, "c": args.c, "scan": {"max_ig": scan.value, "argmax_b": scan.argmax,
                                               "b_min": scan.b_min, "b_max": scan.b_max,
                                               "feasible_b": scan.scanned}}
    if all(x > 0 for x in args.a):
        t4 = gap_lower_bound(args.a, args.c)
        out["generic"] = t4.generic
        if t4.generic:
            out["tau"] = t4.tau + 1
            out["l"] = t4.l
            out["lower_bound"] = float(t4.bound)
            out["rho_exact"] = t4.rho_exact
            if all(x > 0 for x in t4.l):
                lat = CongruenceLattice.of_knapsack(args.a, drop=t4.tau)
                out["lattice_gap"] = lattice_gap(lat, t4.l).gap  # a lower bound on Gap(c, a)
        if tuple(args.c) == tuple(args.a[:-1]) + (0,):
            out["gap_special"] = gap_special(args.a)
    return out, None


def cmd_group(args, cfg):
    from .gaps import GroupProblem, group_value, lattice_gap
    from .lattice import CongruenceLattice, require_knapsack_vector
    a = require_knapsack_vector(args.a)
    lat = CongruenceLattice.of_knapsack(a)
    if args.residue is not None:
        m, witness = group_value(GroupProblem(lat, args.l, args.residue))
        out = {"a": a, "l": args.l, "residue": lat.residue(args.residue), "value": m, "witness": witness}
        return out, None
    res = lattice_gap(lat, args.l)
    rows = [{"residue": e.residue, "value": e.value, "witness": e.witness} for e in res.table.entries]
    out = {"a": a, "l": args.l, "modulus": lat.modulus, "gap": res.gap, "argmax": res.argmax,
           "table": rows}
    return out, rows


def cmd_witness(args, cfg):
    from .distance import tight_witness, vertex_distance
    inst, expected = tight_witness(args.n, args.k)
    d = vertex_distance(inst, cfg.caps).value
    return {"a": inst.a, "b": inst.b, "d": d, "expected": expected, "tight": d == expected}, None


def cmd_bounds(args, cfg):
    from .distance import reference_bounds
    from .lattice import require_knapsack_vector
    a = require_knapsack_vector(args.a)
    rb = reference_bounds(a)
    return {"a": a, "cook": rb.cook, "ew_l1": rb.ew_l1, "sup_norm": rb.sup_norm}, None


def cmd_verify(args, cfg):
    from .verify import SCALES, run_checks
    scale = SCALES["quick" if args.quick else "full"]
    if cfg.seed is not None:
        scale = scale.__class__(**{**scale.__dict__, "seed": cfg.seed})
    checks = run_checks(scale, args.only, cfg.workers)
    rows = [{"criterion": c.criterion, "name": c.name, "passed": c.passed, "checked": c.checked}
            for c in checks]
    out = {"scale": "quick" if args.quick else "full", "seed": scale.seed,
           "passed": all(c.passed for c in checks), "checks": checks}
    return out, rows


def cmd_experiment(args, cfg):
    from .experiments import (SampleSpec, averages, csv_text, emit_csv, run_records,
                              tail_table)
    seed = cfg.seed if cfg.seed is not None else 0
    spec = SampleSpec(args.n, args.H, args.samples, seed, args.eps, args.window, args.mode)
    if args.kind == "tail":
        spec.check_tail_range()
    records = run_records(spec, cfg.caps, cfg.workers)
    if args.out:
        emit_csv(records, args.out)
    out = {"kind": args.kind, "n": spec.n, "H": spec.H, "eps": spec.eps, "seed": seed,
           "samples": len(records), "mode": spec.mode,
           "window": "fixed" if spec.window is not None else "f_plus+norm1",
           "note": "max over b is taken over the finite window; N_eps is a lower estimate"}
    if args.kind == "tail":
        grid = args.t_grid or tuple(Fraction(k, 4) for k in range(1, 25))
        table = tail_table(records, spec, grid)
        rows = [{"t": r.t, "count": r.count, "ratio": r.ratio, "reference": r.reference}
                for r in table.rows]
        out.update({"alpha": table.alpha, "C": table.C, "t_fit": table.t_fit,
                    "monotone": table.monotone(), "rows": rows})
        return out, rows
    av = averages(records)
    out.update({"upper_proxy_mean": av.upper_proxy, "lower_witness_mean": av.lower_witness,
                "positive_samples": av.positive_samples})
    return out, csv_text(records)


COMMANDS = {"distance": cmd_distance, "frobenius": cmd_frobenius, "covering": cmd_covering,
            "gap": cmd_gap, "group": cmd_group, "witness": cmd_witness, "bounds": cmd_bounds,
            "verify": cmd_verify, "experiment": cmd_experiment}


def to_csv(out, rows):
    if isinstance(rows, str):
        return rows
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if rows:
        rows = [jsonable(r) for r in rows]
        keys = list(rows[0])
        w.writerow(keys)
        for r in rows:
            w.writerow([_cell(r[k]) for k in keys])
    else:
        w.writerow(["key", "value"])
        for k, v in sorted(jsonable(out).items()):
            w.writerow([k, _cell(v)])
    return buf.getvalue()


def _cell(v):
    if isinstance(v, list):
        return ";".join(_cell(x) for x in v)
    if isinstance(v, bool):
        return "true" if v else "false"
    return "" if v is None else str(v)


def run(argv=None, stdout=None, stderr=None, environ=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    environ = os.environ if environ is None else environ
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(exc, file=stderr)
        return EXIT_INVALID
    except SystemExit as exc:  # --help / --version
        return exc.code or 0
    try:
        cfg = Settings(args, environ)
        out, rows = COMMANDS[args.command](args, cfg)
    except InvalidInstanceError as exc:
        clause = f" [condition {exc.clause}]" if exc.clause else ""
        print(f"invalid input{clause}: {exc}", file=stderr)
        return EXIT_INVALID
    except (InfeasibleError, UnboundedError) as exc:
        print(f"invalid input: {exc}", file=stderr)
        return EXIT_INVALID
    except ScaleError as exc:
        bracket = "" if exc.bracket is None else f" (open bracket {[number(x) if x is not None else None for x in exc.bracket]})"
        print(f"scale refusal: {exc}{bracket}", file=stderr)
        return EXIT_SCALE
    except (ValueError, OSError) as exc:
        print(f"invalid input: {exc}", file=stderr)
        return EXIT_INVALID
    stdout.write(to_csv(out, rows) if cfg.format == "csv" else dumps(out))
    if args.command == "verify" and not out["passed"]:
        return EXIT_VERIFY
    return EXIT_OK


def main():
    sys.exit(run())
