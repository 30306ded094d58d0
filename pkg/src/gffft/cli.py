"""gffft command line: plan, transform, verify, report, conv.

Exit status: 0 success, 1 verification failure, 2 usage error.
GFFFT_SEED sets the default seed for every command that takes --seed.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from pathlib import Path
from typing import Sequence

from . import ccft, cyconv
from .cfft import DEFAULT_COMBOS, conv_vector, find_normal_basis, naive_dft
from .cse import MODES, CseConfig
from .gf2 import DEFAULT_MODULI, FieldError, FieldSpec

SCHEMA = "gffft-plan"
SCHEMA_VERSION = 1

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

# effective multiplications of the specialized L-point convolutions
REFERENCE_SPECIALIZED_MULTS = {2: 1, 3: 3, 4: 5, 5: 9, 6: 10, 7: 12, 8: 19, 9: 18, 10: 28, 11: 42, 12: 32}


class UsageError(Exception):
    pass


def _default_seed() -> int:
    env = os.environ.get("GFFFT_SEED")
    if env is None:
        return 0
    try:
        return int(env, 0)
    except ValueError:
        raise UsageError(f"GFFFT_SEED must be an integer, got {env!r}")


# -- file formats -----------------------------------------------------------


def read_vector(path: str | Path, spec: FieldSpec) -> list[int]:
    """One hex element per line; '#' starts a comment; blank lines ignored."""
    out = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        text = line.split("#", 1)[0].strip()
        if not text:
            continue
        try:
            v = int(text, 16)
        except ValueError:
            raise UsageError(f"{path}:{lineno}: not a hex field element: {text!r}")
        if not 0 <= v < spec.size:
            raise UsageError(f"{path}:{lineno}: {text} is outside GF(2^{spec.l})")
        out.append(v)
    return out


def write_vector(path: str | Path, v: Sequence[int], spec: FieldSpec, comment: str = ""):
    width = (spec.l + 3) // 4
    lines = [f"# {comment}"] if comment else []
    lines += [format(x, f"0{width}x") for x in v]
    Path(path).write_text("\n".join(lines) + "\n")


def plan_to_json(plan: ccft.TransformPlan, provenance: dict) -> dict:
    r = plan.report()
    prov = dict(provenance)
    prov.update(decomposition=plan.decomposition(), mult=r.mult, add=r.add, total=r.total)
    return {"schema": SCHEMA, "version": SCHEMA_VERSION, "N": plan.N,
            "field": plan.spec.to_json(), "provenance": prov, "plan": plan.to_json()}


def plan_from_json(d: dict) -> tuple[ccft.TransformPlan, dict]:
    if d.get("schema") != SCHEMA:
        raise UsageError("not a gffft plan file")
    if d.get("version") != SCHEMA_VERSION:
        raise UsageError(f"unsupported plan schema version {d.get('version')}")
    spec = FieldSpec.from_json(d["field"])
    plan = ccft.TransformPlan.from_json(d["plan"], spec)
    if plan.N != d["N"]:
        raise UsageError("plan length does not match its header")
    return plan, d.get("provenance", {})


def load_plan(path: str | Path) -> tuple[ccft.TransformPlan, dict]:
    try:
        d = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise UsageError(f"cannot read plan file {path}: {e}")
    return plan_from_json(d)


SHIPPED_DIR = Path(__file__).resolve().parent / "plans"


def shipped_plans() -> dict[int, Path]:
    """Plan files bundled with the package, by length."""
    return {int(p.stem.split("_")[1]): p for p in sorted(SHIPPED_DIR.glob("plan_*.json"))}


def save_plan(path: str | Path, plan: ccft.TransformPlan, provenance: dict):
    Path(path).write_text(json.dumps(plan_to_json(plan, provenance), indent=1) + "\n")


# -- commands ---------------------------------------------------------------


def _field(args) -> FieldSpec:
    try:
        if args.modulus is not None:
            return FieldSpec(args.field, int(args.modulus, 16))
        return FieldSpec.default(args.field)
    except (FieldError, ValueError) as e:
        raise UsageError(str(e))


def _cse_cfg(args, seed: int) -> CseConfig:
    return CseConfig(restarts=args.cse_restarts,
                     seed=args.cse_seed if args.cse_seed is not None else seed,
                     mode=args.cse_mode)


def _row_line(n, l, dec, mult, add, total) -> str:
    return f"{n:>6} {l:>3}  {dec:<16} {mult:>8} {add:>9} {total:>10}"


HEADER = f"{'N':>6} {'l':>3}  {'decomposition':<16} {'mult':>8} {'add':>9} {'total':>10}"


def cmd_plan(args) -> int:
    spec = _field(args)
    N = args.N
    if N < 1 or (spec.size - 1) % N:
        raise UsageError(f"{N} does not divide 2^{spec.l}-1 = {spec.size - 1}")
    seed = args.seed if args.seed is not None else _default_seed()
    cfg = _cse_cfg(args, seed)
    leaves = ccft.LeafBuilder(spec, cfg, scheme=args.scheme, combos=args.combos)
    plan = ccft.plan_search(N, spec, args.max_sub, allow_ct=not args.no_ct,
                            use_published_costs=args.published_costs, leaves=leaves)
    prov = {"seed": seed, "scheme": args.scheme, "combos": args.combos,
            "cse": {"restarts": cfg.restarts, "seed": cfg.seed, "mode": cfg.mode},
            "costs": "published" if args.published_costs else "achieved",
            "leaf_schemes": {str(p.N): {"scheme": p.scheme, "basis_seed": p.seed}
                             for p in plan.leaves()}}
    save_plan(args.out, plan, prov)
    r = plan.report()
    print(HEADER)
    print(_row_line(N, spec.l, plan.decomposition(), r.mult, r.add, r.total))
    return EXIT_OK


def cmd_transform(args) -> int:
    plan, prov = load_plan(args.plan)
    f = read_vector(args.inp, plan.spec)
    if len(f) != plan.N:
        raise UsageError(f"input has {len(f)} elements, plan expects {plan.N}")
    F, counts = plan.evaluate(f)
    write_vector(args.out, F, plan.spec, f"{plan.N}-point DFT over GF(2^{plan.spec.l})")
    if args.count:
        r = plan.report()
        print(f"mult {counts['mults']} add {counts['adds']} "
              f"(predicted mult {r.mult} add {r.add})")
        if counts["mults"] != r.mult or counts["adds"] != r.add:
            print("measured counts differ from the plan's prediction", file=sys.stderr)
            return EXIT_FAIL
    return EXIT_OK


def cmd_verify(args) -> int:
    plan, _ = load_plan(args.plan)
    if args.trials < 0:
        raise UsageError("--trials must be non-negative")
    if args.trials == 0:
        print("warning: 0 trials requested, nothing was checked", file=sys.stderr)
        return EXIT_OK
    seed = args.seed if args.seed is not None else _default_seed()
    rng = random.Random(seed)
    spec = plan.spec
    alpha = plan.alpha
    for t in range(args.trials):
        f = [rng.randrange(spec.size) for _ in range(plan.N)]
        got, _ = plan.evaluate(f)
        want = naive_dft(spec, f, alpha)
        if got != want:
            j = next(i for i, (a, b) in enumerate(zip(got, want)) if a != b)
            print(f"FAIL trial {t}: first mismatch at index {j} "
                  f"(got {got[j]:x}, expected {want[j]:x})")
            return EXIT_FAIL
    print(f"ok: {args.trials} random vectors match the direct DFT (N={plan.N}, l={spec.l})")
    return EXIT_OK


def _parse_lengths(text: str | None) -> list[int] | None:
    if text is None or text == "all":
        return None
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"--lengths expects a comma-separated list or 'all', got {text!r}")


def cmd_report(args) -> int:
    spec = _field(args)
    seed = args.seed if args.seed is not None else _default_seed()
    leaves = None
    if not args.published_costs:
        leaves = ccft.LeafBuilder(spec, _cse_cfg(args, seed), scheme=args.scheme, combos=args.combos)
    try:
        rows = ccft.report_rows(spec.l, _parse_lengths(args.lengths), args.published_costs,
                                leaves, args.max_sub, spec)
    except FieldError as e:
        raise UsageError(str(e))
    if args.json:
        print(json.dumps(rows, indent=1))
        return EXIT_OK
    print(HEADER)
    for r in rows:
        if r["decomposition"] is None:
            print(f"{r['N']:>6} {r['l']:>3}  (no decomposition from available costs)")
        else:
            print(_row_line(r["N"], r["l"], r["decomposition"], r["mult"], r["add"], r["total"]))
        pub = r.get("published_decomposition")
        if pub is not None and (r["decomposition"] is None
                                or ccft.canonical(pub) != ccft.canonical(r["decomposition"])):
            if r["published_mult"] is None:
                print(f"{'':>11}  printed {r['published_decomposition']}: not reproducible from the costs")
            else:
                print(f"{'':>11}  {'printed ' + r['published_decomposition']:<16} {r['published_mult']:>8} "
                      f"{r['published_add']:>9} {r['published_total']:>10}")
    return EXIT_OK


def _conv_field(L: int) -> FieldSpec:
    for l in sorted(DEFAULT_MODULI):
        if l % L == 0:
            return FieldSpec.default(l)
    raise UsageError(f"no supported field contains GF(2^{L})")


def cmd_conv(args) -> int:
    L = args.length
    try:
        alg = cyconv.prime_reformulated_conv(L) if args.prime_reform else cyconv.catalog(L)
    except cyconv.ConvolutionError as e:
        raise UsageError(str(e))
    spec = _field(args) if args.field is not None else _conv_field(L)
    if spec.l % L:
        raise UsageError(f"GF(2^{L}) is not a subfield of GF(2^{spec.l})")
    b = conv_vector(find_normal_basis(spec, L))
    sp = cyconv.specialize(alg, b)
    print(f"{L}-point cyclic convolution ({alg.origin}): {alg.m} general / {sp.mults} specialized")
    want = REFERENCE_SPECIALIZED_MULTS.get(L)
    if want is not None and want != sp.mults:
        print(f"note: specialized count {sp.mults} differs from the tabulated {want}")
    seed = args.seed if args.seed is not None else _default_seed()
    rng = random.Random(seed)
    bad = 0
    for _ in range(args.trials):
        a = [rng.randrange(spec.size) for _ in range(L)]
        bb = [rng.randrange(spec.size) for _ in range(L)]
        if alg.convolve(spec, a, bb) != cyconv.naive_cyclic_conv(spec, a, bb):
            bad += 1
        z, _ = sp.convolve(spec, a)
        if z != cyconv.naive_cyclic_conv(spec, a, b):
            bad += 1
    if args.demo:
        print(f"field GF(2^{spec.l}), normal element {b[0]:x}; c = R b = "
              + " ".join(format(x, "x") for x in sp.c))
    if bad:
        print(f"FAIL: {bad} mismatches against the direct convolution in {args.trials} trials")
        return EXIT_FAIL
    print(f"ok: {args.trials} random trials match the direct convolution")
    return EXIT_OK


# -- argument parsing ---------------------------------------------------------


def _add_field(p, required=True):
    p.add_argument("--field", "-l", type=int, required=required, help="extension degree l")
    p.add_argument("--modulus", help="primitive polynomial as hex (default: built-in table)")


def _add_cse(p):
    p.add_argument("--scheme", default="auto", choices=["A", "B", "C", "D", "auto"])
    p.add_argument("--combos", type=int, default=DEFAULT_COMBOS,
                   help="random normal-basis combinations for schemes C/D")
    p.add_argument("--cse-restarts", type=int, default=4)
    p.add_argument("--cse-seed", type=int, default=None)
    p.add_argument("--cse-mode", default="greedy-single", choices=list(MODES))
    p.add_argument("--max-sub", type=int, default=ccft.MAX_SUB_LEN)
    p.add_argument("--seed", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gffft", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("plan", help="search a decomposition and build a plan file")
    p.add_argument("N", type=int)
    _add_field(p)
    _add_cse(p)
    p.add_argument("--published-costs", "--paper-costs", dest="published_costs",
                   action="store_true", help="choose the tree from published sub-DFT costs")
    p.add_argument("--no-ct", action="store_true", help="disallow Cooley-Tukey splits")
    p.add_argument("--out", "-o", required=True)
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("transform", help="apply a plan to a vector file")
    p.add_argument("--plan", required=True)
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--count", action="store_true", help="print measured operation counts")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("verify", help="check a plan against the direct DFT")
    p.add_argument("--plan", required=True)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("report", help="complexity table for all N | 2^l - 1")
    _add_field(p)
    _add_cse(p)
    p.add_argument("--lengths", default="all", help="comma-separated lengths or 'all'")
    p.add_argument("--published-costs", "--paper-costs", dest="published_costs",
                   action="store_true", help="cost trees with published sub-DFT costs")
    p.add_argument("--json", action="store_true", help="machine-readable rows")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("conv", help="inspect and self-check a cyclic convolution")
    p.add_argument("--length", "-L", type=int, required=True)
    p.add_argument("--prime-reform", action="store_true",
                   help="use the Toeplitz reformulation (odd prime L)")
    p.add_argument("--demo", action="store_true", help="print the precomputed constants")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=None)
    _add_field(p, required=False)
    p.set_defaults(func=cmd_conv)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as e:
        print(f"gffft {args.cmd}: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
