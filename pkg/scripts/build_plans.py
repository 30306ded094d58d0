"""Regenerate the plan files shipped in gffft/plans/.

Usage: python scripts/build_plans.py [--restarts 8] [--combos 32]
"""

import argparse
import time
from pathlib import Path

from gffft import ccft, cli
from gffft.cse import CseConfig
from gffft.gf2 import FieldSpec

# length -> smallest field holding it
SHIPPED = {3: 2, 5: 4, 7: 3, 9: 6, 15: 4, 21: 6, 31: 5, 33: 10, 63: 6, 65: 12, 255: 8,
           511: 9, 1023: 10}
OUT = Path(__file__).resolve().parent.parent / "src" / "gffft" / "plans"


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--restarts", type=int, default=8)
    ap.add_argument("--combos", type=int, default=32)
    ap.add_argument("--max-auto", type=int, default=100,
                    help="leaves longer than this use scheme B with multi-pair CSE")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    OUT.mkdir(exist_ok=True)
    for N, l in SHIPPED.items():
        t = time.time()
        spec = FieldSpec.default(l)
        cfg = CseConfig(restarts=args.restarts, seed=args.seed)
        leaves = ccft.LeafBuilder(spec, cfg, scheme="auto", combos=args.combos,
                                  max_auto=args.max_auto)
        plan = ccft.plan_search(N, spec, leaves=leaves)
        prov = {"seed": args.seed, "scheme": "auto", "combos": args.combos,
                "cse": {"restarts": cfg.restarts, "seed": cfg.seed, "mode": cfg.mode},
                "costs": "achieved",
                "leaf_schemes": {str(p.N): {"scheme": p.scheme, "basis_seed": p.seed}
                                 for p in plan.leaves()}}
        cli.save_plan(OUT / f"plan_{N}.json", plan, prov)
        r = plan.report()
        print(f"{N:>5} GF(2^{l:<2}) {plan.decomposition():<12} mult {r.mult:>5} add {r.add:>6}"
              f"  ({time.time() - t:.1f}s)", flush=True)


if __name__ == "__main__":
    main()
