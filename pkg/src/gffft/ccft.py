"""Composite cyclotomic Fourier transforms.

A long DFT is split as N = N1 N2 into N1 sub-DFTs of length N2 followed by
N2 sub-DFTs of length N1.  Coprime splits use the prime-factor (Good-Thomas)
index maps and need no twiddles; other splits use Cooley-Tukey maps with a
twiddle alpha^(i1 j2) applied between the stages.  Leaves are CFFT plans.

For a split, cost(N) = N2 cost(N1) + N1 cost(N2) (+ T twiddle mults), so
minimizing the weighted total over divisor trees has optimal substructure
and a memoized search is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

from . import cfft as cfft_mod
from .binmat import DimensionError
from .cse import CseConfig
from .gf2 import FieldError, FieldSpec

MAX_SUB_LEN = 320

# Published per-length CFFT costs: N -> (mult, smallest additive count
# over schemes A-D)
PUBLISHED_CFFT_COSTS = {
    3: (1, 6), 5: (5, 16), 7: (6, 24), 9: (11, 48), 11: (28, 84), 13: (32, 91),
    15: (16, 74), 17: (38, 151), 21: (27, 147), 23: (84, 323), 31: (54, 299),
    33: (85, 404), 35: (75, 299), 39: (97, 391), 45: (90, 414), 51: (115, 641),
    63: (97, 759), 65: (165, 901), 73: (144, 1447), 85: (195, 1589), 89: (336, 2085),
    91: (230, 1421), 93: (223, 1736), 105: (234, 1333), 117: (299, 1947),
    195: (496, 4166), 273: (699, 7217), 315: (752, 8032),
}


# Published composite-length rows: (l, N) -> (decomposition, mult, add,
# total) as printed.  The row for 91 prints "1×93"; the intended leaf 1×91 is stored here.
PUBLISHED_CCFT_ROWS = {
    (4, 15): ("1×15", 16, 74, 186),
    (6, 9): ("(3×3)", 10, 36, 146),
    (6, 21): ("3×7", 25, 114, 389),
    (6, 63): ("(3×3)×7", 124, 468, 1832),
    (8, 51): ("1×51", 115, 641, 2366),
    (8, 85): ("1×85", 195, 1590, 4515),
    (8, 255): ("3×85", 670, 5277, 15327),
    (9, 511): ("7×73", 1446, 11881, 36463),
    (10, 33): ("1×33", 85, 404, 2019),
    (10, 93): ("3×31", 193, 1083, 4750),
    (10, 341): ("1×341", 922, 15184, 32702),
    (10, 1023): ("33×31", 4417, 22391, 106314),
    (11, 2047): ("23×89", 15204, 76702, 395986),
    (12, 35): ("5×7", 65, 232, 1727),
    (12, 39): ("1×39", 97, 391, 2622),
    (12, 45): ("(3×15)", 91, 312, 2405),
    (12, 65): ("1×65", 165, 902, 4697),
    (12, 91): ("1×91", 230, 1421, 6711),
    (12, 105): ("7×15", 202, 878, 5524),
    (12, 117): ("1×117", 299, 1947, 8824),
    (12, 195): ("3×65", 560, 3093, 15973),
    (12, 273): ("3×91", 781, 4809, 22772),
    (12, 315): ("5×63", 800, 4803, 23203),
    (12, 455): ("7×65", 1545, 7867, 43402),
    (12, 585): ("5×117", 2080, 11607, 59447),
    (12, 819): ("7×117", 2795, 16437, 80722),
    (12, 1365): ("7×195", 4642, 33842, 140608),
    (12, 4095): ("65×63", 16700, 106098, 490198),
}


@dataclass(frozen=True)
class ComplexityReport:
    mult: int
    add: int
    l: int

    @property
    def total(self) -> int:
        return (2 * self.l - 1) * self.mult + self.add


# -- index maps ---------------------------------------------------------------


def pfa_index_maps(N1: int, N2: int) -> tuple[list[list[int]], list[list[int]]]:
    """in_map[i1][i2] = i1 N2 + i2 N1 mod N; out_map[j1][j2] is the CRT
    inverse of (j mod N1, j mod N2)."""
    if math.gcd(N1, N2) != 1:
        raise ValueError(f"prime-factor split needs coprime factors, got {N1} and {N2}")
    N = N1 * N2
    e1 = N2 * pow(N2, -1, N1) if N1 > 1 else 0
    e2 = N1 * pow(N1, -1, N2) if N2 > 1 else 0
    in_map = [[(i1 * N2 + i2 * N1) % N for i2 in range(N2)] for i1 in range(N1)]
    out_map = [[(j1 * e1 + j2 * e2) % N for j2 in range(N2)] for j1 in range(N1)]
    return in_map, out_map


def ct_index_maps(N1: int, N2: int) -> tuple[list[list[int]], list[list[int]]]:
    """in_map[i1][i2] = i1 + i2 N1; out_map[j1][j2] = j1 N2 + j2."""
    in_map = [[i1 + i2 * N1 for i2 in range(N2)] for i1 in range(N1)]
    out_map = [[j1 * N2 + j2 for j2 in range(N2)] for j1 in range(N1)]
    return in_map, out_map


def ct_index_maps_and_twiddles(spec: FieldSpec, N1: int, N2: int, alpha: int):
    """Maps plus twiddles t[i1][j2] = alpha^(i1 j2) and the non-unit count."""
    N = N1 * N2
    if alpha == 0 or spec.order(alpha) != N:
        raise FieldError(f"alpha must have order {N}")
    in_map, out_map = ct_index_maps(N1, N2)
    tw = [[spec.pow(alpha, i1 * j2) for j2 in range(N2)] for i1 in range(N1)]
    nonunit = sum(1 for row in tw for t in row if t != 1)
    return in_map, out_map, tw, nonunit


def is_bijective(m: Sequence[Sequence[int]], N: int) -> bool:
    flat = [x for row in m for x in row]
    return sorted(flat) == list(range(N))


def ct_twiddle_count(N1: int, N2: int) -> int:
    # i1 j2 < N, so alpha^(i1 j2) = 1 only when i1 = 0 or j2 = 0
    return (N1 - 1) * (N2 - 1)


def predict_complexity(parts: Sequence[tuple[int, int, int]], l: int,
                       twiddles: int = 0) -> ComplexityReport:
    """parts: (N_i, mult_i, add_i) for each factor of a split of N = prod N_i.

    K_add = sum (N/N_i) add_i and K_mult = sum (N/N_i) mult_i + T.
    """
    N = math.prod(n for n, _, _ in parts)
    mult = sum((N // n) * m for n, m, _ in parts) + twiddles
    add = sum((N // n) * a for n, _, a in parts)
    return ComplexityReport(mult, add, l)


# -- decomposition trees --------------------------------------------------------


@dataclass(frozen=True)
class Tree:
    """Shape of a decomposition: kind in {"leaf", "pfa", "ct"}."""

    kind: str
    N: int
    mult: int
    add: int
    left: Tree | None = None   # N1-point sub-DFT
    right: Tree | None = None  # N2-point sub-DFT

    def label(self) -> str:
        if self.kind == "leaf":
            return str(self.N)
        inner = f"{self.left.label()}×{self.right.label()}"
        return f"({inner})" if self.kind == "ct" else inner

    def decomposition(self) -> str:
        return f"1×{self.N}" if self.kind == "leaf" else self.label()


CostFn = Callable[[int], "tuple[int, int] | None"]


def published_costs(N: int) -> tuple[int, int] | None:
    return PUBLISHED_CFFT_COSTS.get(N)


def _child_order(a: Tree, b: Tree) -> tuple[Tree, Tree]:
    # composite children first, then by length
    ka = (a.kind == "leaf", a.N)
    kb = (b.kind == "leaf", b.N)
    return (a, b) if ka <= kb else (b, a)


def search_tree(N: int, l: int, costs: CostFn, max_sub: int = MAX_SUB_LEN,
                allow_ct: bool = True) -> Tree:
    """Cheapest decomposition by weighted total (2l-1) mult + add."""
    w = 2 * l - 1

    @lru_cache(maxsize=None)
    def best(n: int) -> Tree | None:
        cands = []
        divs = [d for d in range(2, math.isqrt(n) + 1) if n % d == 0]
        if n <= max_sub or not divs:
            c = costs(n)
            if c is not None:
                cands.append(Tree("leaf", n, c[0], c[1]))
        for d in divs:
            e = n // d
            coprime = math.gcd(d, e) == 1
            if not coprime and not allow_ct:
                continue
            a, b = best(d), best(e)
            if a is None or b is None:
                continue
            a, b = _child_order(a, b)
            tw = 0 if coprime else ct_twiddle_count(a.N, b.N)
            r = predict_complexity([(a.N, a.mult, a.add), (b.N, b.mult, b.add)], l, tw)
            cands.append(Tree("pfa" if coprime else "ct", n, r.mult, r.add, a, b))
        if not cands:
            return None
        return min(cands, key=lambda t: (w * t.mult + t.add, t.mult))

    t = best(N)
    if t is None:
        raise ValueError(f"no decomposition of {N} with available sub-DFT costs")
    return t


def parse_decomposition(text: str) -> Tree:
    """Parse strings like "3×85", "(3×3)×7" or "1×15" into a cost-free tree.

    A parenthesized product is a Cooley-Tukey node, a bare product a
    prime-factor node, and "1×N" a single CFFT leaf.
    """
    s = text.replace(" ", "").replace("x", "×").replace("*", "×")
    pos = 0

    def expr() -> Tree:
        nonlocal pos
        node = term()
        while pos < len(s) and s[pos] == "×":
            pos += 1
            rhs = term()
            if node.kind == "leaf" and node.N == 1:
                node = rhs
                continue
            node = Tree("pfa", node.N * rhs.N, 0, 0, node, rhs)
        return node

    def term() -> Tree:
        nonlocal pos
        if pos < len(s) and s[pos] == "(":
            pos += 1
            inner = expr()
            if pos >= len(s) or s[pos] != ")":
                raise ValueError(f"unbalanced parentheses in {text!r}")
            pos += 1
            if inner.kind == "pfa":
                inner = Tree("ct", inner.N, 0, 0, inner.left, inner.right)
            return inner
        start = pos
        while pos < len(s) and s[pos].isdigit():
            pos += 1
        if start == pos:
            raise ValueError(f"expected a length at position {start} of {text!r}")
        return Tree("leaf", int(s[start:pos]), 0, 0)

    tree = expr()
    if pos != len(s):
        raise ValueError(f"trailing text in {text!r}")
    return tree


def canonical(text: str) -> str:
    """Decomposition string with the factors of every node sorted, so that
    "65×63" and "63×65" compare equal."""
    def walk(t: Tree) -> str:
        if t.kind == "leaf":
            return str(t.N)
        a, b = sorted((walk(t.left), walk(t.right)), key=lambda x: (len(x), x))
        return f"({a}×{b})" if t.kind == "ct" else f"{a}×{b}"
    t = parse_decomposition(text)
    return f"1×{t.N}" if t.kind == "leaf" else walk(t)


def cost_tree(tree: Tree, l: int, costs: CostFn) -> Tree:
    """Fill in mult/add of every node from leaf costs."""
    if tree.kind == "leaf":
        c = (0, 0) if tree.N == 1 else costs(tree.N)
        if c is None:
            raise ValueError(f"no cost available for a {tree.N}-point CFFT")
        return Tree("leaf", tree.N, c[0], c[1])
    a, b = cost_tree(tree.left, l, costs), cost_tree(tree.right, l, costs)
    if tree.kind == "pfa" and math.gcd(a.N, b.N) != 1:
        raise ValueError(f"{a.N}×{b.N} is not coprime; write it as ({a.N}×{b.N})")
    tw = ct_twiddle_count(a.N, b.N) if tree.kind == "ct" else 0
    r = predict_complexity([(a.N, a.mult, a.add), (b.N, b.mult, b.add)], l, tw)
    return Tree(tree.kind, tree.N, r.mult, r.add, a, b)


# -- executable plans ----------------------------------------------------------


@dataclass(frozen=True)
class TransformPlan:
    kind: str
    N: int
    spec: FieldSpec
    leaf: cfft_mod.CfftPlan | None = None
    sub1: TransformPlan | None = None
    sub2: TransformPlan | None = None

    @property
    def n1(self) -> int:
        return self.sub1.N

    @property
    def n2(self) -> int:
        return self.sub2.N

    @property
    def alpha(self) -> int:
        return self.spec.element_of_order(self.N)

    def twiddles(self) -> list[list[int]]:
        return ct_index_maps_and_twiddles(self.spec, self.n1, self.n2, self.alpha)[2]

    def report(self) -> ComplexityReport:
        if self.kind == "leaf":
            if self.leaf is None:
                return ComplexityReport(0, 0, self.spec.l)
            return ComplexityReport(self.leaf.mults, self.leaf.adds, self.spec.l)
        a, b = self.sub1.report(), self.sub2.report()
        tw = ct_twiddle_count(self.n1, self.n2) if self.kind == "ct" else 0
        return predict_complexity([(self.n1, a.mult, a.add), (self.n2, b.mult, b.add)],
                                  self.spec.l, tw)

    def tree(self) -> Tree:
        r = self.report()
        if self.kind == "leaf":
            return Tree("leaf", self.N, r.mult, r.add)
        return Tree(self.kind, self.N, r.mult, r.add, self.sub1.tree(), self.sub2.tree())

    def decomposition(self) -> str:
        return self.tree().decomposition()

    def evaluate(self, f: Sequence[int]) -> tuple[list[int], dict]:
        if len(f) != self.N:
            raise DimensionError(f"input has length {len(f)}, plan expects {self.N}")
        if self.kind == "leaf":
            if self.leaf is None:
                return list(f), {"mults": 0, "adds": 0}
            return self.leaf.evaluate(f)
        N1, N2 = self.n1, self.n2
        if self.kind == "pfa":
            in_map, out_map = pfa_index_maps(N1, N2)
            tw = None
        else:
            in_map, out_map = ct_index_maps(N1, N2)
            tw = self.twiddles()
        mults = adds = 0
        G = []
        for i1 in range(N1):
            row, cnt = self.sub2.evaluate([f[i] for i in in_map[i1]])
            mults += cnt["mults"]
            adds += cnt["adds"]
            G.append(row)
        if tw is not None:
            mul = self.spec.mul
            for i1 in range(N1):
                for j2 in range(N2):
                    t = tw[i1][j2]
                    if t != 1:
                        G[i1][j2] = mul(G[i1][j2], t)
                        mults += 1
        out = [0] * self.N
        for j2 in range(N2):
            col, cnt = self.sub1.evaluate([G[i1][j2] for i1 in range(N1)])
            mults += cnt["mults"]
            adds += cnt["adds"]
            for j1 in range(N1):
                out[out_map[j1][j2]] = col[j1]
        return out, {"mults": mults, "adds": adds}

    def leaves(self) -> list[cfft_mod.CfftPlan]:
        if self.kind == "leaf":
            return [self.leaf] if self.leaf is not None else []
        return self.sub1.leaves() + self.sub2.leaves()

    def to_json(self) -> dict:
        if self.kind == "leaf":
            return {"kind": "leaf", "N": self.N,
                    "cfft": None if self.leaf is None else self.leaf.to_json()}
        return {"kind": self.kind, "N": self.N, "factors": [self.n1, self.n2],
                "sub1": self.sub1.to_json(), "sub2": self.sub2.to_json()}

    @classmethod
    def from_json(cls, d: dict, spec: FieldSpec) -> TransformPlan:
        kind = d["kind"]
        if kind == "leaf":
            leaf = None if d.get("cfft") is None else cfft_mod.CfftPlan.from_json(d["cfft"])
            return cls("leaf", int(d["N"]), spec, leaf)
        if kind not in ("pfa", "ct"):
            raise ValueError(f"unknown plan node kind {kind!r}")
        s1 = cls.from_json(d["sub1"], spec)
        s2 = cls.from_json(d["sub2"], spec)
        if s1.N * s2.N != int(d["N"]):
            raise ValueError("plan node length does not match its factors")
        if kind == "pfa" and math.gcd(s1.N, s2.N) != 1:
            raise ValueError("prime-factor node with non-coprime factors")
        return cls(kind, int(d["N"]), spec, None, s1, s2)


class LeafBuilder:
    """Builds and caches CFFT leaves for one field."""

    def __init__(self, spec: FieldSpec, cse_cfg: CseConfig | None = None,
                 scheme: str = "auto", combos: int = cfft_mod.DEFAULT_COMBOS,
                 max_auto: int = MAX_SUB_LEN):
        self.spec = spec
        self.cse_cfg = cse_cfg or CseConfig()
        self.scheme = scheme
        self.combos = combos
        self.max_auto = max_auto
        self.cache: dict[int, cfft_mod.CfftPlan] = {}

    def __call__(self, N: int) -> cfft_mod.CfftPlan:
        if N not in self.cache:
            cfg = self.cse_cfg
            if self.scheme == "auto" and N > self.max_auto:
                # fixed-basis schemes only, with the fast multi-pair CSE
                fast = CseConfig(restarts=1, seed=cfg.seed, mode="greedy-multi")
                plans = [cfft_mod.build_cfft(N, self.spec, s, fast, seed=cfg.seed) for s in "AB"]
                self.cache[N] = min(plans, key=lambda p: p.adds)
            else:
                self.cache[N] = cfft_mod.build_cfft(N, self.spec, self.scheme, cfg, self.combos,
                                                    cfg.seed)
        return self.cache[N]

    def costs(self, N: int) -> tuple[int, int]:
        if N == 1:
            return 0, 0
        p = self(N)
        return p.mults, p.adds


def materialize(tree: Tree, spec: FieldSpec, leaves: LeafBuilder) -> TransformPlan:
    if tree.kind == "pfa" and math.gcd(tree.left.N, tree.right.N) != 1:
        raise ValueError(f"{tree.left.N}×{tree.right.N} is not coprime; "
                         f"write it as ({tree.left.N}×{tree.right.N})")
    if tree.kind == "leaf":
        return TransformPlan("leaf", tree.N, spec, None if tree.N == 1 else leaves(tree.N))
    return TransformPlan(tree.kind, tree.N, spec, None,
                         materialize(tree.left, spec, leaves),
                         materialize(tree.right, spec, leaves))


def plan_search(N: int, spec: FieldSpec, max_sub_len: int = MAX_SUB_LEN, allow_ct: bool = True,
                use_published_costs: bool = False, leaves: LeafBuilder | None = None) -> TransformPlan:
    """Pick the cheapest decomposition tree, then build its CFFT leaves.

    With use_published_costs the tree is chosen from the published per-length
    costs; otherwise from costs of our own CFFT builds.
    """
    if N < 1 or (spec.size - 1) % N:
        raise FieldError(f"{N} does not divide 2^{spec.l}-1 = {spec.size - 1}")
    leaves = leaves or LeafBuilder(spec)
    costs = published_costs if use_published_costs else leaves.costs
    tree = search_tree(N, spec.l, costs, max_sub_len, allow_ct)
    return materialize(tree, spec, leaves)


def report_rows(l: int, lengths: Sequence[int] | None = None, use_published_costs: bool = True,
                leaves: LeafBuilder | None = None, max_sub_len: int = MAX_SUB_LEN,
                spec: FieldSpec | None = None) -> list[dict]:
    """One row per N | 2^l - 1 (N > 1): the searched decomposition and costs.

    With published costs, lengths that have a printed decomposition also get
    that decomposition re-costed ("published_*" keys), so both can be compared.
    """
    spec = spec or FieldSpec.default(l)
    q = spec.size - 1
    if lengths is None:
        lengths = [n for n in range(2, q + 1) if q % n == 0]
    costs = published_costs if use_published_costs else (leaves or LeafBuilder(spec)).costs
    rows = []
    for n in lengths:
        if n < 1 or q % n:
            raise FieldError(f"{n} does not divide {q}")
        row = {"N": n, "l": l}
        try:
            t = search_tree(n, l, costs, max_sub_len)
            r = ComplexityReport(t.mult, t.add, l)
            row.update(decomposition=t.decomposition(), mult=r.mult, add=r.add, total=r.total)
        except ValueError:
            row.update(decomposition=None, mult=None, add=None, total=None)
        if use_published_costs and (l, n) in PUBLISHED_CCFT_ROWS:
            printed = PUBLISHED_CCFT_ROWS[(l, n)][0]
            try:
                pt = cost_tree(parse_decomposition(printed), l, costs)
                pr = ComplexityReport(pt.mult, pt.add, l)
                row.update(published_decomposition=printed, published_mult=pr.mult,
                           published_add=pr.add, published_total=pr.total)
            except ValueError:
                row.update(published_decomposition=printed, published_mult=None,
                           published_add=None, published_total=None)
        rows.append(row)
    return rows
