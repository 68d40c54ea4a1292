"""Scenario-driven command line front end.

Scenarios are JSON files declaring a ring, named ideals, named
presentation matrices, an optional schedule/system block, and a task
list; see scenarios/ for the bundled examples and README.md for the
report schema.  Exit codes: 0 success, 1 assertion or certificate
failure, 2 input error, 3 cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from importlib import resources

from .exactlinalg import FieldConfig
from .fitting import (MinorCapExceeded, NotFiniteLength, PresentedModule,
                      fitting_ideal, minimal_presentation, module_length,
                      realize_vector_space)
from .growth import SequenceTooShort, growth_degree
from .ideals import (IdealHandle, NotArtinianWithinCap,
                     StabilizationCapExceeded, colength, equimultiple_check,
                     hs_dimension, ideal_power, membership, min_generators,
                     analytic_spread)
from .koszul import (TemplateMismatch, WitnessFailure,
                     depth_certificate_auslander,
                     depth_certificate_determinant, eta_witness,
                     realize_levels, regular_sequence_certificate,
                     tor_inverse_system)
from .lifting import (LiftingSystem, PerturbationSchedule, associated_lift,
                      build_phi_n, fitting_sequence,
                      liftable_dim_certificate, system_from_module,
                      validate_schedule, verify_system_invariants)
from .localring import ParseError, Polynomial, RingContext, parse_poly

EXIT_OK = 0
EXIT_CERT = 1
EXIT_INPUT = 2
EXIT_CAP = 3

_CAP_ERRORS = (NotArtinianWithinCap, StabilizationCapExceeded,
               MinorCapExceeded, NotFiniteLength, SequenceTooShort)


class ScenarioError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Scenario loading
# ---------------------------------------------------------------------------

class Scenario:
    def __init__(self, data, trunc=None, char=None, horizon=None):
        ring = data.get("ring")
        if not ring or "variables" not in ring:
            raise ScenarioError("scenario needs a ring block with variables")
        p = char if char is not None else ring.get("char", 32003)
        N = trunc if trunc is not None else ring.get("trunc", 10)
        self.field = FieldConfig(p)
        self.ctx = RingContext(tuple(ring["variables"]), self.field, N)
        self.name = data.get("name", "unnamed")
        self.data = data
        self.ideals = {}
        for nm, gens in data.get("ideals", {}).items():
            self.ideals[nm] = IdealHandle(
                [self._poly(s) for s in gens], self.ctx)
        self.presentations = {}
        for nm, rows in data.get("presentations", {}).items():
            self.presentations[nm] = PresentedModule(
                self.ctx, [[self._poly(s) for s in row] for row in rows])
        self.system = None
        self.horizon = horizon
        if "system" in data:
            self.system = self._build_system(data["system"], horizon)
        self.tasks = data.get("tasks", [])
        self.expect = data.get("expect", {})
        self._level_cache = {}

    def _poly(self, s):
        return parse_poly(s, self.ctx)

    def _build_system(self, block, horizon):
        a = self.ideals[block["ideal"]]
        phi = self.presentations[block["presentation"]]
        J = horizon if horizon is not None else block.get("horizon", 4)
        sigma = {}
        for entry in block.get("schedule", []):
            j, k = entry["j"], entry["k"]
            mat = [[self._poly(s) for s in row] for row in entry["matrix"]]
            blocks = sigma.setdefault(
                j, [[[Polynomial.zero(self.ctx.nvars, self.field)
                      for _ in range(phi.ncols)] for _ in range(phi.mu0)]
                    for _ in a.generators])
            blocks[k - 1] = mat
        return LiftingSystem(self.ctx, a, phi,
                             PerturbationSchedule(self.ctx, sigma), J)

    def levels(self, n_max):
        if n_max not in self._level_cache:
            best = max((k for k in self._level_cache if k >= n_max),
                       default=None)
            if best is not None:
                return self._level_cache[best][:n_max]
            self._level_cache[n_max] = realize_levels(self.system, n_max)
        return self._level_cache[n_max]


def load_scenario(path, trunc=None, char=None, horizon=None):
    with open(path) as fh:
        data = json.load(fh)
    return Scenario(data, trunc=trunc, char=char, horizon=horizon)


def bundled_scenario_path(example_id):
    name = "%s.json" % example_id
    ref = resources.files("liftcert") / "scenarios" / name
    if not ref.is_file():
        raise ScenarioError("unknown example id %r" % example_id)
    return ref


# ---------------------------------------------------------------------------
# Task execution
# ---------------------------------------------------------------------------

def _fmt(poly, sc):
    return poly.format(sc.ctx.variable_names)


def _ideal_arg(sc, args, key="ideal"):
    name = args.get(key)
    if name not in sc.ideals:
        raise ScenarioError("unknown ideal %r" % name)
    return sc.ideals[name]


def _need_system(sc):
    if sc.system is None:
        raise ScenarioError("task needs a system block")
    return sc.system


def task_validate_schedule(sc, args):
    rep = validate_schedule(_need_system(sc))
    return {"valid": rep.valid, "flagged": len(rep.flagged),
            "stamp": "SCHEDULE-VALID" if rep.valid else "SCHEDULE-INVALID"}


def task_mu(sc, args):
    sys_ = _need_system(sc)
    _, mu = minimal_presentation(build_phi_n(sys_, args.get("n", 1)))
    return {"mu": mu}


def task_system_invariants(sc, args):
    rep = verify_system_invariants(_need_system(sc), args.get("n", 2))
    return {"mu_values": rep.mu_values, "mu_constant": rep.mu_constant,
            "quotient_consistent": rep.quotient_consistent,
            "annihilation_ok": rep.annihilation_ok,
            "stamp": "SYSTEM-VALID" if rep.all_ok else "SYSTEM-INVALID"}


def task_fitting_sequence(sc, args):
    seq = fitting_sequence(_need_system(sc), args["n_max"])
    return {"lengths": [l for _, l in seq], "n_max": args["n_max"]}


def task_liftable_dim(sc, args):
    rep = liftable_dim_certificate(_need_system(sc), args["n_max"],
                                   window=args.get("window"))
    return {"lengths": rep.lengths, "degree": rep.growth.degree,
            "fd_degree": rep.growth.fd_degree,
            "loglog_degree": rep.growth.loglog_degree,
            "agreement": rep.growth.agreement,
            "dim_r": rep.dim_r, "dim_s": rep.dim_s, "stamp": rep.stamp}


def task_tor(sc, args):
    sys_ = _need_system(sc)
    n_max = args["n_max"]
    rep = tor_inverse_system(sys_, args.get("i", 1), n_max,
                             levels=sc.levels(n_max))
    return {"i": rep.index, "dims": rep.dims,
            "composite_dims": rep.composite_dims,
            "stable_image_dim": rep.stable_image_dim, "stamp": rep.stamp}


def task_eta(sc, args):
    sys_ = _need_system(sc)
    n_max = args["n_max"]
    wit = eta_witness(sys_, n_max, levels=sc.levels(n_max))
    return {"levels": wit.levels, "cycle_ok": wit.cycle_ok,
            "nonzero_class": wit.nonzero_class,
            "compatible": wit.compatible, "stamp": wit.stamp}


def task_depth_auslander(sc, args):
    sys_ = _need_system(sc)
    n_max = args["n_max"]
    rep = depth_certificate_auslander(sys_, n_max, levels=sc.levels(n_max))
    return {"depth": rep.depth, "q": rep.q, "stamp": rep.stamp}


def task_depth_determinant(sc, args):
    if "presentation" in args:
        mod = sc.presentations[args["presentation"]]
    else:
        sys_ = _need_system(sc)
        mod = associated_lift(sys_, args["J"]).module
    rep = depth_certificate_determinant(mod)
    return {"depth": rep.depth, "stamp": rep.stamp}


def task_associated_lift(sc, args):
    sys_ = _need_system(sc)
    lift = associated_lift(sys_, args["J"])
    return {"J": lift.J, "trunc": lift.N,
            "matrix": [[_fmt(p, sc) for p in row]
                       for row in lift.module.matrix]}


def task_regular(sc, args):
    gens = _ideal_arg(sc, args).generators
    rep = regular_sequence_certificate(gens, sc.ctx)
    return {"stamp": rep.stamp, "dim": rep.observed_dim}


def task_colength(sc, args):
    length, witness = colength(_ideal_arg(sc, args))
    return {"length": length, "witness": witness}


def task_hs_dim(sc, args):
    dim, _ = hs_dimension(_ideal_arg(sc, args))
    return {"dim": dim}


def task_mu_ideal(sc, args):
    I = _ideal_arg(sc, args)
    n = args.get("power", 1)
    mu, _ = min_generators(ideal_power(I, n) if n > 1 else I)
    return {"mu": mu, "power": n}


def task_spread(sc, args):
    spread, _ = analytic_spread(_ideal_arg(sc, args))
    return {"spread": spread}


def task_equimultiple(sc, args):
    eq, height, spread = equimultiple_check(_ideal_arg(sc, args))
    return {"equimultiple": eq, "height": height, "spread": spread,
            "stamp": "EQUIMULTIPLE" if eq else "NOT-EQUIMULTIPLE"}


def task_proper_intersection(sc, args):
    a = _ideal_arg(sc, args, "a")
    b = _ideal_arg(sc, args, "b")
    da, _ = hs_dimension(a)
    db, _ = hs_dimension(b)
    proper = da + db == sc.ctx.nvars
    return {"dim_a": da, "dim_b": db, "ambient": sc.ctx.nvars,
            "proper": proper,
            "stamp": "PROPER-INTERSECTION" if proper else "IMPROPER"}


def task_min_gen_exclusion(sc, args):
    """Every minimal generator of a^n stays outside b, n <= n_max."""
    a = _ideal_arg(sc, args, "a")
    b = _ideal_arg(sc, args, "b")
    n_max = args.get("n_max", 4)
    N = sc.ctx.truncation_degree
    all_excluded = True
    per_n = []
    for n in range(1, n_max + 1):
        _, reps = min_generators(ideal_power(a, n))
        verdicts = [membership(g, b, N).status for g in reps]
        ok = all(v == "NotMember" for v in verdicts)
        all_excluded = all_excluded and ok
        per_n.append({"n": n, "generators": len(reps), "excluded": ok})
    return {"per_n": per_n, "all_excluded": all_excluded,
            "stamp": "EXCLUSION-CONFIRMED" if all_excluded
            else "EXCLUSION-FAILED"}


def task_fitt(sc, args):
    mod = sc.presentations[args["presentation"]]
    I = fitting_ideal(mod, args.get("i", 0))
    return {"i": args.get("i", 0),
            "generators": sorted(_fmt(g, sc) for g in I.generators),
            "is_unit": I.is_unit}


def task_length(sc, args):
    mod = sc.presentations[args["presentation"]]
    length, witness = module_length(mod)
    return {"length": length, "witness": witness}


def task_growth(sc, args):
    rep = growth_degree(args["sequence"], window=args.get("window", 4))
    return {"degree": rep.degree, "fd_degree": rep.fd_degree,
            "loglog_degree": rep.loglog_degree,
            "agreement": rep.agreement}


TASKS = {
    "validate_schedule": task_validate_schedule,
    "mu": task_mu,
    "system_invariants": task_system_invariants,
    "fitting_sequence": task_fitting_sequence,
    "liftable_dim": task_liftable_dim,
    "tor": task_tor,
    "eta": task_eta,
    "depth_auslander": task_depth_auslander,
    "depth_determinant": task_depth_determinant,
    "associated_lift": task_associated_lift,
    "regular": task_regular,
    "colength": task_colength,
    "hs_dim": task_hs_dim,
    "mu_ideal": task_mu_ideal,
    "spread": task_spread,
    "equimultiple": task_equimultiple,
    "proper_intersection": task_proper_intersection,
    "min_gen_exclusion": task_min_gen_exclusion,
    "fitt": task_fitt,
    "length": task_length,
    "growth": task_growth,
}


def run_scenario(sc: Scenario, timing=False):
    report = {
        "scenario": sc.name,
        "char": sc.field.p,
        "trunc": sc.ctx.truncation_degree,
        "variables": list(sc.ctx.variable_names),
        "tasks": [],
    }
    for task in sc.tasks:
        op = task.get("op")
        if op not in TASKS:
            raise ScenarioError("unknown task op %r" % op)
        t0 = time.monotonic()
        result = TASKS[op](sc, task)
        entry = {"op": op,
                 "args": {k: v for k, v in task.items() if k != "op"},
                 "result": result}
        if timing:
            entry["wall_clock_s"] = round(time.monotonic() - t0, 3)
        report["tasks"].append(entry)
    return report


def compare_expectations(report, expect):
    """Flat comparison: expect maps task label -> {result key: value}."""
    diffs = []
    by_label = {}
    for idx, entry in enumerate(report["tasks"]):
        label = entry["args"].get("label", entry["op"])
        by_label[label] = entry
        by_label["%s#%d" % (entry["op"], idx)] = entry
    for label, wanted in expect.items():
        entry = by_label.get(label)
        if entry is None:
            diffs.append("missing task %r" % label)
            continue
        for key, val in wanted.items():
            got = entry["result"].get(key)
            if got != val:
                diffs.append("%s.%s: expected %r, got %r"
                             % (label, key, val, got))
    return diffs


# ---------------------------------------------------------------------------
# Output helpers
# ---------------------------------------------------------------------------

def emit(report, fmt, out):
    if fmt == "json":
        text = json.dumps(report, indent=2, sort_keys=True)
    else:
        lines = ["scenario %s (char %s, trunc %s)"
                 % (report["scenario"], report["char"], report["trunc"])]
        for entry in report["tasks"]:
            res = entry["result"]
            stamp = res.get("stamp", "")
            rest = {k: v for k, v in res.items() if k != "stamp"}
            lines.append("%-22s %s %s" % (entry["op"], stamp,
                                          json.dumps(rest, sort_keys=True)))
        text = "\n".join(lines)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    print(text)


def _inline_context(args):
    field = FieldConfig(args.char)
    names = tuple(args.vars.split(","))
    return RingContext(names, field, args.trunc)


def _inline_ideal(args, ctx):
    return IdealHandle([parse_poly(s, ctx) for s in args.gens.split(",")],
                       ctx)


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------

def _add_common(p, trunc_default=10):
    p.add_argument("--char", type=int, default=32003,
                   help="field characteristic (0 for exact rationals, slow)")
    p.add_argument("--trunc", type=int, default=trunc_default,
                   help="truncation degree N")
    p.add_argument("--format", choices=["json", "text"], default="text")
    p.add_argument("--out", default=None)


def build_parser():
    ap = argparse.ArgumentParser(
        prog="liftcert",
        description="Exact certificates for lifting systems over local "
                    "rings")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("run", help="run a scenario file")
    p.add_argument("scenario")
    p.add_argument("--trunc", type=int, default=None)
    p.add_argument("--char", type=int, default=None)
    p.add_argument("--horizon", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--timing", action="store_true",
                   help="include wall-clock per task (breaks byte "
                        "determinism)")
    p.add_argument("--format", choices=["json", "text"], default="json")
    p.add_argument("--out", default=None)

    p = sub.add_parser("verify-paper", help="run a bundled example and "
                                            "check its expected certificates")
    p.add_argument("example_id")
    p.add_argument("--format", choices=["json", "text"], default="text")
    p.add_argument("--out", default=None)

    p = sub.add_parser("length", help="colength of an ideal")
    p.add_argument("--vars", required=True)
    p.add_argument("--gens", required=True)
    _add_common(p)

    p = sub.add_parser("dim", help="Hilbert-Samuel dimension of R/I")
    p.add_argument("--vars", required=True)
    p.add_argument("--gens", required=True)
    p.add_argument("--horizon", type=int, default=12)
    _add_common(p)

    p = sub.add_parser("fitt", help="Fitting ideal of a presentation")
    p.add_argument("--vars", required=True)
    p.add_argument("--matrix", required=True,
                   help="rows separated by ';', entries by ','")
    p.add_argument("-i", type=int, default=0)
    _add_common(p)

    p = sub.add_parser("mu", help="minimal number of generators")
    p.add_argument("--vars", required=True)
    p.add_argument("--gens", required=True)
    p.add_argument("--power", type=int, default=1)
    _add_common(p)

    p = sub.add_parser("spread", help="analytic spread of an ideal")
    p.add_argument("--vars", required=True)
    p.add_argument("--gens", required=True)
    p.add_argument("--horizon", type=int, default=12)
    _add_common(p)

    p = sub.add_parser("tor", help="Tor inverse system of a scenario system")
    p.add_argument("scenario")
    p.add_argument("-i", type=int, default=1)
    p.add_argument("--n-max", type=int, default=5)
    p.add_argument("--trunc", type=int, default=None)
    p.add_argument("--char", type=int, default=None)
    p.add_argument("--format", choices=["json", "text"], default="json")
    p.add_argument("--out", default=None)

    p = sub.add_parser("depth", help="depth certificates for a scenario "
                                     "system")
    p.add_argument("scenario")
    p.add_argument("--n-max", type=int, default=5)
    p.add_argument("--determinant", type=int, default=None, metavar="J",
                   help="use the determinant route on the associated lift "
                        "Phi_J")
    p.add_argument("--trunc", type=int, default=None)
    p.add_argument("--char", type=int, default=None)
    p.add_argument("--format", choices=["json", "text"], default="json")
    p.add_argument("--out", default=None)

    p = sub.add_parser("growth", help="growth degree of an integer sequence")
    p.add_argument("sequence", help="comma-separated values for n = 1..")
    p.add_argument("--window", type=int, default=4)
    p.add_argument("--format", choices=["json", "text"], default="text")
    p.add_argument("--out", default=None)
    return ap


def _dispatch(args):
    if args.cmd == "run":
        sc = load_scenario(args.scenario, trunc=args.trunc, char=args.char,
                           horizon=args.horizon)
        report = run_scenario(sc, timing=args.timing)
        diffs = compare_expectations(report, sc.expect)
        report["verified"] = not diffs
        report["diffs"] = diffs
        emit(report, args.format, args.out)
        if diffs:
            for d in diffs:
                print("DIFF:", d, file=sys.stderr)
            return EXIT_CERT
        return EXIT_OK

    if args.cmd == "verify-paper":
        path = bundled_scenario_path(args.example_id)
        with path.open() as fh:
            sc = Scenario(json.load(fh))
        report = run_scenario(sc)
        diffs = compare_expectations(report, sc.expect)
        report["verified"] = not diffs
        report["diffs"] = diffs
        emit(report, args.format, args.out)
        if diffs:
            for d in diffs:
                print("DIFF:", d, file=sys.stderr)
            return EXIT_CERT
        print("verify-paper %s: PASS" % args.example_id)
        return EXIT_OK

    if args.cmd in ("length", "dim", "mu", "spread"):
        ctx = _inline_context(args)
        I = _inline_ideal(args, ctx)
        if args.cmd == "length":
            length, witness = colength(I)
            rep = {"length": length, "witness": witness}
        elif args.cmd == "dim":
            dim, _ = hs_dimension(I, horizon=args.horizon)
            rep = {"dim": dim}
        elif args.cmd == "mu":
            J = ideal_power(I, args.power) if args.power > 1 else I
            mu, _ = min_generators(J)
            rep = {"mu": mu}
        else:
            spread, _ = analytic_spread(I, horizon=args.horizon)
            rep = {"spread": spread}
        emit({"scenario": "inline", "char": args.char, "trunc": args.trunc,
              "variables": args.vars.split(","),
              "tasks": [{"op": args.cmd, "args": {}, "result": rep}]},
             args.format, args.out)
        return EXIT_OK

    if args.cmd == "fitt":
        ctx = _inline_context(args)
        rows = [[parse_poly(s, ctx) for s in row.split(",")]
                for row in args.matrix.split(";")]
        mod = PresentedModule(ctx, rows)
        I = fitting_ideal(mod, args.i)
        rep = {"i": args.i,
               "generators": sorted(g.format(ctx.variable_names)
                                    for g in I.generators)}
        emit({"scenario": "inline", "char": args.char, "trunc": args.trunc,
              "variables": args.vars.split(","),
              "tasks": [{"op": "fitt", "args": {}, "result": rep}]},
             args.format, args.out)
        return EXIT_OK

    if args.cmd == "tor":
        sc = load_scenario(args.scenario, trunc=args.trunc, char=args.char)
        rep = task_tor(sc, {"i": args.i, "n_max": args.n_max})
        emit({"scenario": sc.name, "char": sc.field.p,
              "trunc": sc.ctx.truncation_degree,
              "variables": list(sc.ctx.variable_names),
              "tasks": [{"op": "tor", "args": {"i": args.i,
                                               "n_max": args.n_max},
                         "result": rep}]}, args.format, args.out)
        return EXIT_OK

    if args.cmd == "depth":
        sc = load_scenario(args.scenario, trunc=args.trunc, char=args.char)
        if args.determinant is not None:
            rep = task_depth_determinant(sc, {"J": args.determinant})
        else:
            rep = task_depth_auslander(sc, {"n_max": args.n_max})
        emit({"scenario": sc.name, "char": sc.field.p,
              "trunc": sc.ctx.truncation_degree,
              "variables": list(sc.ctx.variable_names),
              "tasks": [{"op": "depth", "args": {}, "result": rep}]},
             args.format, args.out)
        return EXIT_CERT if rep["stamp"] == "INCONCLUSIVE" else EXIT_OK

    if args.cmd == "growth":
        seq = [int(x) for x in args.sequence.split(",")]
        rep = growth_degree(seq, window=args.window)
        emit({"scenario": "inline", "char": None, "trunc": None,
              "variables": [],
              "tasks": [{"op": "growth", "args": {"window": args.window},
                         "result": {"degree": rep.degree,
                                    "fd_degree": rep.fd_degree,
                                    "loglog_degree": rep.loglog_degree,
                                    "agreement": rep.agreement}}]},
             args.format, args.out)
        return EXIT_OK

    raise ScenarioError("unhandled command %r" % args.cmd)


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return _dispatch(args)
    except (WitnessFailure, TemplateMismatch, AssertionError) as e:
        print("certificate failure: %s" % e, file=sys.stderr)
        return EXIT_CERT
    except _CAP_ERRORS as e:
        print("cap exceeded: %s: %s" % (type(e).__name__, e),
              file=sys.stderr)
        return EXIT_CAP
    except (ScenarioError, ParseError, FileNotFoundError, ValueError,
            KeyError, json.JSONDecodeError) as e:
        print("input error: %s" % e, file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
