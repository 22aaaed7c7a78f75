"""Command-line front end.

Exit codes: 0 success or property holds, 1 sought object absent or property
violated, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction

from . import _kernels, bounds
from .errors import InputError, LimitExceeded, PreconditionError
from .formats import format_system, parse, parse_rational, to_json_obj
from .gen import GeneratorConfig, random_family, tree_family
from .setsystem import SetSystem
from .spread import (
    avoids_every_pair,
    count_bound,
    count_bound_vc1,
    decompose,
    expectation_large_weight_exact,
)
from .sunflower import (
    Inconclusive,
    StructWitness,
    Sunflower,
    disjoint_via_partition,
    extract_er,
    extract_vc1,
    find_sunflower_exact,
    witness_or_sunflower,
)
from .threshold import kk_dichotomy, min_cover_weight, upset_profile
from .vc import vc_dimension

OK, ABSENT, USAGE = 0, 1, 2


@dataclass
class RunReport:
    command: str
    parameters: dict
    seed: int | None = None
    outcome: str = ""
    witnesses: dict = field(default_factory=dict)
    input_digest: str | None = None
    timing: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(self.__dict__, sort_keys=True, indent=2, default=str) + "\n"


class _Ctx:
    """Per-invocation state: the loaded input and where output goes."""

    def __init__(self, args):
        self.args = args
        self.digest: str | None = None
        self.lines: list[str] = []

    def load(self) -> SetSystem:
        path = self.args.file
        try:
            raw = sys.stdin.buffer.read() if path == "-" else open(path, "rb").read()
        except OSError as e:
            raise InputError(f"cannot read {path}: {e.strerror}") from None
        self.digest = "sha256:" + hashlib.sha256(raw).hexdigest()
        try:
            text = raw.decode("utf-8")
        except UnicodeDecodeError:
            raise InputError(f"{path} is not UTF-8") from None
        return parse(text, self.args.format)

    def say(self, line: str = ""):
        self.lines.append(line)


def _fmt_set(H: SetSystem, mask: int) -> str:
    return "{" + ", ".join(H.labels(mask)) + "}"


def _sunflower_obj(H: SetSystem, sf: Sunflower) -> dict:
    return {
        "r": sf.r,
        "indices": list(sf.members),
        "members": [H.labels(H.members[i]) for i in sf.members],
        "kernel": H.labels(sf.kernel),
    }


def _say_sunflower(ctx: _Ctx, H: SetSystem, sf: Sunflower):
    ctx.say(f"{sf.r}-sunflower with kernel {_fmt_set(H, sf.kernel)}")
    for i in sf.members:
        ctx.say(f"  {_fmt_set(H, H.members[i])}")


def _mask_arg(H: SetSystem, spec: str) -> int:
    return H.mask(t for t in spec.replace(",", " ").split() if t)


# ---------------------------------------------------------------- commands


def cmd_vc(ctx, rep):
    H = ctx.load()
    r = vc_dimension(H)
    rep.outcome = f"dimension {r.dimension}"
    rep.witnesses = {"dimension": r.dimension, "witness_set": H.labels(r.witness_set)}
    ctx.say(f"vc-dimension: {r.dimension}")
    ctx.say(f"shattered set: {_fmt_set(H, r.witness_set)}")
    return OK


def cmd_sunflower(ctx, rep):
    a = ctx.args
    H = ctx.load()
    mode = a.mode
    if mode == "witness":
        out = witness_or_sunflower(H, a.r)
        if isinstance(out, Sunflower):
            rep.outcome = "sunflower"
            rep.witnesses = {"sunflower": _sunflower_obj(H, out)}
            _say_sunflower(ctx, H, out)
            return OK
        if isinstance(out, StructWitness):
            rep.outcome = "witness"
            rep.witnesses = {
                "x": H.ground[out.x],
                "y": H.ground[out.y],
                "s_x": H.labels(H.members[out.s_x]),
                "s_y": H.labels(H.members[out.s_y]),
                "s_xy": H.labels(H.members[out.s_xy]),
            }
            ctx.say(f"witness x={H.ground[out.x]} y={H.ground[out.y]}")
            for key in ("s_x", "s_y", "s_xy"):
                ctx.say(f"  {key}: {_fmt_set(H, H.members[getattr(out, key)])}")
            return OK
        assert isinstance(out, Inconclusive)
        rep.outcome = "inconclusive"
        ctx.say(f"inconclusive: {out.reason}")
        return ABSENT
    if mode == "find":
        sf = find_sunflower_exact(H, a.r)
    elif mode == "er":
        sf = extract_er(H, a.r)
    elif mode == "vc1":
        sf = extract_vc1(H, a.r)
    else:
        rep.seed = a.seed
        sf = disjoint_via_partition(H, a.r, a.trials, a.seed)
    if sf is None:
        rep.outcome = "absent"
        ctx.say("absent")
        return ABSENT
    rep.outcome = "present"
    rep.witnesses = {"sunflower": _sunflower_obj(H, sf)}
    _say_sunflower(ctx, H, sf)
    return OK


def _int_list(s: str) -> list[int]:
    try:
        return [int(x) for x in s.replace(",", " ").split()]
    except ValueError:
        raise InputError(f"not a list of integers: {s!r}") from None


def _rational_list(s: str) -> list[Fraction]:
    return [parse_rational(x) for x in s.replace(",", " ").split()]


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def cmd_threshold_sweep(ctx, rep):
    a = ctx.args
    rep.seed = a.seed
    rows = []
    k = 0
    for r in _int_list(a.r_values):
        for ell in _int_list(a.ell_values):
            thr = bounds.vc1_threshold(r, ell)
            tree = tree_family(r, ell) if r >= 2 and ell >= 1 else None
            if tree is not None:
                rows.append([r, ell, thr, len(tree), "tree", 1, int(find_sunflower_exact(tree, r) is not None)])
            for size in (thr, thr + 1):
                found = 0
                for _ in range(a.count):
                    k += 1
                    cfg = GeneratorConfig(size + 2 * ell, ell, size, a.seed ^ k, "forest-path")
                    found += find_sunflower_exact(random_family(cfg), r) is not None
                rows.append([r, ell, thr, size, "forest-path", a.count, found])
    ctx.say(_csv_text(["r", "ell", "threshold", "family_size", "kind", "instances", "with_sunflower"], rows).rstrip("\n"))
    rep.outcome = f"{len(rows)} rows"
    rep.witnesses = {"rows": rows}
    return OK


def cmd_construct(ctx, rep):
    a = ctx.args
    H = tree_family(a.r, a.ell)
    rep.outcome = f"{len(H)} members"
    rep.witnesses = {"system": to_json_obj(H)}
    ctx.say(format_system(H, "json" if a.json else "text").rstrip("\n"))
    ctx.raw = True
    return OK


def cmd_spread(ctx, rep):
    a = ctx.args
    H = ctx.load()
    rep.seed = a.seed
    if a.mode == "decompose":
        W = _mask_arg(H, a.W)
        dec = decompose(H, W, a.t, a.chooser, a.seed)
        rep.outcome = f"small {len(dec.small)}, large {len(dec.large)}"
        rep.witnesses = {
            "W": H.labels(W),
            "chooser": [[H.labels(S), H.labels(dec.chooser[S]), H.labels(dec.f_star[S])] for S in H.members],
            "small": dec.small.sets(),
            "large": dec.large.sets(),
        }
        ctx.say(f"W = {_fmt_set(H, W)}, t = {a.t}, chooser = {a.chooser}")
        for S in H.members:
            ctx.say(f"  {_fmt_set(H, S)}: F = {_fmt_set(H, dec.chooser[S])}, F* = {_fmt_set(H, dec.f_star[S])}")
        ctx.say("small: " + ", ".join(_fmt_set(H, F) for F in dec.small.members))
        ctx.say("large: " + ", ".join(_fmt_set(H, F) for F in dec.large.members))
        return OK
    p, q = parse_rational(a.p), parse_rational(a.q)
    value = expectation_large_weight_exact(H, p, q, a.t, a.chooser, a.seed)
    d = vc_dimension(H).dimension
    ell = a.ell if a.ell is not None else max(H.ell, d)
    rep.witnesses = {"expectation": str(value), "vc_dimension": d, "ell": ell}
    ctx.say(f"expectation: {value} (~{float(value):.6g})")
    status = OK
    if q > 0 and p >= 2 * q and d <= ell:
        b = count_bound(ell, d, q, p, a.t)
        rep.witnesses["count_bound"] = str(b)
        ctx.say(f"count bound (ell={ell}, d={d}): {b} (~{float(b):.6g}) {'holds' if value <= b else 'VIOLATED'}")
        status = OK if value <= b else ABSENT
        if d <= 1 and avoids_every_pair(H):
            b1 = count_bound_vc1(q, p, a.t)
            rep.witnesses["count_bound_vc1"] = str(b1)
            ctx.say(f"vc1 count bound: {b1} {'holds' if value <= b1 else 'VIOLATED'}")
            if value > b1:
                status = ABSENT
    rep.outcome = "bound holds" if status == OK else "bound violated"
    return status


def _report_obj(H, r):
    return {
        "variant": r.variant,
        "q": str(r.q),
        "epsilon": str(r.epsilon),
        "constant": str(r.constant_used),
        "p": str(r.p_evaluated),
        "p_uncapped": str(r.p_uncapped),
        "min_cover_weight": str(r.min_cover_weight),
        "cover": r.best_cover.pieces.sets(),
        "prob_upset": str(r.prob_upset),
        "branch1": r.branch1_holds,
        "branch2": r.branch2_holds,
    }


def cmd_kk(ctx, rep):
    a = ctx.args
    H = ctx.load()
    const = parse_rational(a.constant) if a.constant is not None else None
    if a.mode == "check":
        r = kk_dichotomy(H, parse_rational(a.q), parse_rational(a.epsilon), a.variant, const)
        rep.witnesses = _report_obj(H, r)
        rep.outcome = "dichotomy holds" if r.holds else "dichotomy fails"
        ctx.say(f"variant {r.variant}, constant {r.constant_used}, p = {r.p_evaluated}")
        ctx.say(f"min cover weight: {r.min_cover_weight} via {', '.join(_fmt_set(H, P) for P in r.best_cover.pieces.members)}")
        ctx.say(f"branch1 (cover <= {r.cover_threshold}): {'holds' if r.branch1_holds else 'fails'}")
        ctx.say(f"P[W in upset] = {r.prob_upset} (~{float(r.prob_upset):.6g})")
        ctx.say(f"branch2 (> 1 - {r.epsilon}): {'holds' if r.branch2_holds else 'fails'}")
        return OK if r.holds else ABSENT
    prof = upset_profile(H)
    rows = []
    ok = True
    for q in _rational_list(a.q_values):
        cover = min_cover_weight(H, q)
        for eps in _rational_list(a.epsilon_values):
            r = kk_dichotomy(H, q, eps, a.variant, const, cover=cover, profile=prof)
            ok &= r.holds
            rows.append([q, eps, r.p_evaluated, r.min_cover_weight, r.prob_upset, int(r.branch1_holds), int(r.branch2_holds)])
    ctx.say(_csv_text(["q", "epsilon", "p", "min_cover_weight", "prob_upset", "branch1", "branch2"], rows).rstrip("\n"))
    rep.outcome = "dichotomy holds" if ok else "dichotomy fails"
    rep.witnesses = {"rows": [[str(v) for v in row] for row in rows]}
    return OK if ok else ABSENT


def cmd_bounds(ctx, rep):
    a = ctx.args
    if a.mode == "logstar":
        v = bounds.log_star_smoothed(a.x)
    elif a.mode == "lambda":
        v = bounds.lambda_d(a.d, a.ell)
    elif a.mode == "er-bound":
        v = bounds.er_bound(a.r, a.ell)
    elif a.mode == "vc1-threshold":
        v = bounds.vc1_threshold(a.r, a.ell)
    else:
        v = bounds.ell_zero(a.d, parse_rational(a.epsilon))
    rep.outcome = str(v)
    ctx.say(str(v))
    return OK


def cmd_gen(ctx, rep):
    a = ctx.args
    rep.seed = a.seed
    for i in range(a.count):
        cfg = GeneratorConfig(a.n, a.ell, a.size, a.seed ^ i, a.kind, a.min_size)
        ctx.say(json.dumps(to_json_obj(random_family(cfg)), sort_keys=True))
    rep.outcome = f"{a.count} systems"
    ctx.raw = True
    return OK


def cmd_verify(ctx, rep):
    from .verify import SUITES, run_suite

    a = ctx.args
    rep.seed = a.seed
    names = list(SUITES) if a.suite == "all" else [a.suite]
    if a.suite != "all" and a.suite not in SUITES:
        raise InputError(f"unknown suite {a.suite!r}; choose from all, {', '.join(SUITES)}")
    ok = True
    results = {}
    for name in names:
        res = run_suite(name, a.seed, a.scale)
        ok &= res.passed
        results[name] = {
            "properties": [{"name": p.name, "passed": p.passed, "checked": p.checked, "detail": p.detail} for p in res.properties],
            "notes": res.notes,
        }
        for p in res.properties:
            line = f"{'PASS' if p.passed else 'FAIL'} {name}/{p.name} ({p.checked} checks)"
            ctx.say(line + (f": {p.detail}" if p.detail else ""))
        for k, v in res.notes.items():
            ctx.say(f"  note {name}/{k} = {v}")
    rep.outcome = "all properties hold" if ok else "property violated"
    rep.witnesses = results
    return OK if ok else ABSENT


# ---------------------------------------------------------------- parser


def _common(suppress: bool) -> argparse.ArgumentParser:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--json", action="store_true", default=d(False), help="emit a structured JSON report")
    p.add_argument("--output", "-o", default=d(None), help="write to this path instead of stdout")
    p.add_argument("--threads", type=int, default=d(None), help="worker threads for parallel kernels")
    return p


def _file_args(p: argparse.ArgumentParser):
    p.add_argument("file", help="set-system file, or - for stdin")
    p.add_argument("--format", choices=("auto", "text", "json"), default="auto")


def build_parser() -> argparse.ArgumentParser:
    common = _common(suppress=True)
    parser = argparse.ArgumentParser(prog="sunflower-vc", description=__doc__.split("\n")[0], parents=[_common(False)])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("vc", parents=[common], help="VC-dimension and a largest shattered set")
    _file_args(p)
    p.set_defaults(func=cmd_vc)

    sf = sub.add_parser("sunflower", help="sunflower search and extraction").add_subparsers(dest="mode", required=True)
    for mode, helptext in (
        ("find", "exact search"),
        ("er", "greedy sunflower-lemma extractor"),
        ("vc1", "extraction for VC-dimension <= 1 families"),
        ("witness", "sunflower or two-element structure witness"),
        ("partition", "disjoint members via random 2r-partitions"),
    ):
        p = sf.add_parser(mode, parents=[common], help=helptext)
        _file_args(p)
        p.add_argument("--r", type=int, required=True)
        if mode == "partition":
            p.add_argument("--trials", type=int, default=100)
            p.add_argument("--seed", type=int, default=0)
        p.set_defaults(func=cmd_sunflower)
    p = sf.add_parser("threshold-sweep", parents=[common], help="CSV: sunflowers around the (r-1)**ell threshold")
    p.add_argument("--r-values", default="3,4")
    p.add_argument("--ell-values", default="1,2,3")
    p.add_argument("--count", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_threshold_sweep, mode="threshold-sweep")

    cons = sub.add_parser("construct", help="named constructions").add_subparsers(dest="mode", required=True)
    p = cons.add_parser("tree", parents=[common], help="root-to-leaf paths of the complete (r-1)-ary tree")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--ell", type=int, required=True)
    p.set_defaults(func=cmd_construct)

    sp = sub.add_parser("spread", help="small/large decomposition").add_subparsers(dest="mode", required=True)
    for mode in ("decompose", "expectation"):
        p = sp.add_parser(mode, parents=[common])
        _file_args(p)
        p.add_argument("--t", type=int, required=True)
        p.add_argument("--chooser", choices=("lexicographic", "seeded-random"), default="lexicographic")
        p.add_argument("--seed", type=int, default=0)
        if mode == "decompose":
            p.add_argument("--W", default="", help="labels of W, comma or space separated")
        else:
            p.add_argument("--p", required=True)
            p.add_argument("--q", required=True)
            p.add_argument("--ell", type=int, default=None, help="size bound used in the counting bound")
        p.set_defaults(func=cmd_spread)

    kk = sub.add_parser("kk", help="threshold dichotomy checks").add_subparsers(dest="mode", required=True)
    for mode in ("check", "sweep"):
        p = kk.add_parser(mode, parents=[common])
        _file_args(p)
        p.add_argument("--variant", choices=("kk-bell", "vc", "vc1"), default="kk-bell")
        p.add_argument("--constant", default=None)
        if mode == "check":
            p.add_argument("--q", required=True)
            p.add_argument("--epsilon", required=True)
        else:
            p.add_argument("--q-values", required=True)
            p.add_argument("--epsilon-values", default="1/2,1/4,1/8")
        p.set_defaults(func=cmd_kk)

    bd = sub.add_parser("bounds", help="scalar bound functions").add_subparsers(dest="mode", required=True)
    p = bd.add_parser("logstar", parents=[common])
    p.add_argument("--x", type=int, required=True)
    p = bd.add_parser("lambda", parents=[common])
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--ell", type=int, required=True)
    for mode in ("er-bound", "vc1-threshold"):
        p = bd.add_parser(mode, parents=[common])
        p.add_argument("--r", type=int, required=True)
        p.add_argument("--ell", type=int, required=True)
    p = bd.add_parser("ell-zero", parents=[common])
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--epsilon", required=True)
    for sp_ in bd.choices.values():
        sp_.set_defaults(func=cmd_bounds)

    p = sub.add_parser("gen", parents=[common], help="emit random set systems as JSON lines")
    p.add_argument("--kind", choices=("uniform-random", "forest-path", "rejection-vc1"), default="uniform-random")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--min-size", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=1)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("verify", parents=[common], help="run a named property suite")
    p.add_argument("suite", help="suite name or 'all'")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--scale", type=float, default=1.0, help="corpus size multiplier")
    p.set_defaults(func=cmd_verify)
    return parser


def _parameters(args) -> dict:
    skip = {"func", "json", "output", "threads"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads is not None and _kernels.NUMBA_ENABLED:
        import numba

        numba.set_num_threads(max(1, min(args.threads, numba.config.NUMBA_NUM_THREADS)))
    ctx = _Ctx(args)
    ctx.raw = False
    command = args.command + (f" {args.mode}" if getattr(args, "mode", None) else "")
    rep = RunReport(command, _parameters(args))
    start = time.perf_counter()
    try:
        status = args.func(ctx, rep)
    except (InputError, PreconditionError, LimitExceeded) as e:
        print(f"sunflower-vc: error: {e}", file=sys.stderr)
        return USAGE
    rep.input_digest = ctx.digest
    rep.timing = {"seconds": round(time.perf_counter() - start, 6)}
    if args.json and not ctx.raw:
        text = rep.to_json()
    else:
        text = "\n".join(ctx.lines) + "\n" if ctx.lines else ""
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
