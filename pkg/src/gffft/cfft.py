"""Cyclotomic FFTs: F = A Q (c * P f') for N | 2^l - 1.

Indices are split into cyclotomic cosets C_k = {s_k 2^i mod N}.  Each
coset gives a linearized polynomial L_k, evaluated on a normal basis
{gamma^(2^i)} of GF(2^{m_k}) by an m_k-point cyclic convolution with the
known vector b_k.  The binary matrix A holds the normal-basis coordinates
of alpha^(j s_k).
"""

from __future__ import annotations

import itertools
import random
import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import cse as cse_mod
from .binmat import (AdditionProgram, BinaryMatrix, DimensionError, block_diag,
                     concat_block_programs, mat_mul, naive_addition_count, naive_program, rank)
from .cyconv import ConvAlgorithm, SpecializedConv, catalog, specialize
from .gf2 import FieldError, FieldSpec

SCHEMES = ("A", "B", "C", "D")
DEFAULT_COMBOS = 32


@dataclass(frozen=True)
class CyclotomicCoset:
    leader: int
    elements: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.elements)


def cyclotomic_cosets(N: int) -> list[CyclotomicCoset]:
    if N < 1 or N % 2 == 0:
        raise ValueError(f"cyclotomic cosets need odd N, got {N}")
    seen = [False] * N
    out = []
    for s in range(N):
        if seen[s]:
            continue
        els = []
        x = s
        while not seen[x]:
            seen[x] = True
            els.append(x)
            x = (2 * x) % N
        out.append(CyclotomicCoset(s, tuple(els)))
    return out


# -- normal bases -----------------------------------------------------------


@dataclass(frozen=True)
class NormalBasis:
    spec: FieldSpec
    m: int
    gamma: int

    @property
    def elements(self) -> tuple[int, ...]:
        out = [self.gamma]
        for _ in range(self.m - 1):
            out.append(self.spec.square(out[-1]))
        return tuple(out)

    def coordinates(self) -> dict[int, int]:
        """Map each element of GF(2^m) to its coordinate bitmask."""
        basis = self.elements
        table = {}
        for bits in range(1 << self.m):
            x = 0
            for i in range(self.m):
                if (bits >> i) & 1:
                    x ^= basis[i]
            table[x] = bits
        return table


def is_normal_element(spec: FieldSpec, gamma: int, m: int) -> bool:
    if not spec.is_in_subfield(gamma, m):
        return False
    basis = [gamma]
    for _ in range(m - 1):
        basis.append(spec.square(basis[-1]))
    return rank(basis) == m


def normal_elements(spec: FieldSpec, m: int) -> list[int]:
    return [g for g in spec.subfield_elements(m) if g and is_normal_element(spec, g, m)]


def find_normal_basis(spec: FieldSpec, m: int, strategy: str = "fixed",
                      rng: random.Random | None = None) -> NormalBasis:
    """fixed: the numerically smallest normal element; random: a uniform pick."""
    if m < 1 or spec.l % m:
        raise FieldError(f"{m} does not divide {spec.l}")
    if strategy == "fixed":
        for g in spec.subfield_elements(m):
            if g and is_normal_element(spec, g, m):
                return NormalBasis(spec, m, g)
    elif strategy == "random":
        rng = rng or random.Random(0)
        sub = spec.subfield_elements(m)
        while True:
            g = rng.choice(sub)
            if g and is_normal_element(spec, g, m):
                return NormalBasis(spec, m, g)
    raise ValueError(f"unknown basis strategy {strategy!r}")


# -- oracle ------------------------------------------------------------------


def naive_dft(spec: FieldSpec, f: Sequence[int], alpha: int) -> list[int]:
    """F_j = sum_i f_i alpha^(ij), by table lookups (vectorized over i)."""
    N = len(f)
    if N == 0:
        return []
    if alpha == 0 or spec.order(alpha) != N:
        raise FieldError(f"alpha {alpha:#x} does not have order {N}")
    q = spec.size - 1
    exp = np.asarray(spec.exp_table[:q], dtype=np.int64)
    log = np.asarray(spec.log_table, dtype=np.int64)
    fv = np.asarray(f, dtype=np.int64)
    nz = np.flatnonzero(fv)
    if nz.size == 0:
        return [0] * N
    lf = log[fv[nz]]
    la = int(log[alpha])
    out = []
    for j in range(N):
        e = (lf + nz * ((la * j) % q)) % q
        out.append(int(np.bitwise_xor.reduce(exp[e])))
    return out


# -- plan --------------------------------------------------------------------


@dataclass(frozen=True)
class CfftPlan:
    N: int
    spec: FieldSpec
    alpha: int
    cosets: tuple[CyclotomicCoset, ...]
    gammas: tuple[int, ...]
    perm: tuple[int, ...]                  # f'[t] = f[perm[t]]
    convs: tuple[SpecializedConv, ...]
    A: BinaryMatrix
    Q: BinaryMatrix
    P: BinaryMatrix
    c: tuple[int, ...]
    scheme: str
    p_prog: AdditionProgram
    a_prog: AdditionProgram | None        # schemes A/C: A and Q separately
    q_prog: AdditionProgram | None
    aq_prog: AdditionProgram | None       # schemes B/D: AQ jointly
    seed: int | None = None
    meta: dict = field(default_factory=dict, compare=False)

    @property
    def mults(self) -> int:
        return sum(1 for x in self.c if x not in (0, 1))

    @property
    def adds(self) -> int:
        if self.aq_prog is not None:
            return self.p_prog.additions + self.aq_prog.additions
        return self.p_prog.additions + self.a_prog.additions + self.q_prog.additions

    @property
    def naive_adds(self) -> int:
        return naive_addition_count(self.P) + naive_addition_count(mat_mul(self.A, self.Q))

    def evaluate(self, f: Sequence[int]) -> tuple[list[int], dict]:
        if len(f) != self.N:
            raise DimensionError(f"input has length {len(f)}, plan expects {self.N}")
        fp = [f[i] for i in self.perm]
        x = self.p_prog.run(fp)
        mul = self.spec.mul
        used = 0
        y = []
        for ci, xi in zip(self.c, x):
            if ci == 1:
                y.append(xi)
            else:
                y.append(mul(ci, xi))
                used += 1
        if self.aq_prog is not None:
            out = self.aq_prog.run(y)
        else:
            out = self.a_prog.run(self.q_prog.run(y))
        return out, {"mults": used, "adds": self.adds}

    def to_json(self) -> dict:
        d = {
            "N": self.N, "field": self.spec.to_json(), "alpha": format(self.alpha, "x"),
            "scheme": self.scheme, "seed": self.seed,
            "bases": [[c.leader, format(g, "x")] for c, g in zip(self.cosets, self.gammas)],
            "A": self.A.to_json(), "Q": self.Q.to_json(), "P": self.P.to_json(),
            "c": [format(x, "x") for x in self.c],
            "conv_sizes": [[cv.L, cv.products] for cv in self.convs],
            "p_prog": self.p_prog.to_json(),
        }
        if self.aq_prog is not None:
            d["aq_prog"] = self.aq_prog.to_json()
        else:
            d["a_prog"] = self.a_prog.to_json()
            d["q_prog"] = self.q_prog.to_json()
        return d

    @classmethod
    def from_json(cls, d: dict, repair: bool = True) -> CfftPlan:
        """Rebuild a plan; programs that disagree with their matrices are
        replaced by naive ones when repair is set (so the matrices, which
        are the inspectable part of the file, stay authoritative)."""
        spec = FieldSpec.from_json(d["field"])
        N = int(d["N"])
        cosets = tuple(cyclotomic_cosets(N))
        gammas = tuple(int(g, 16) for _, g in d["bases"])
        A = BinaryMatrix.from_json(d["A"])
        Q = BinaryMatrix.from_json(d["Q"])
        P = BinaryMatrix.from_json(d["P"])
        c = tuple(int(x, 16) for x in d["c"])
        perm = tuple(e for cs in cosets for e in cs.elements)
        convs = []
        r0 = c0 = p0 = 0
        for L, k in d["conv_sizes"]:
            convs.append(SpecializedConv(L, c[p0:p0 + k],
                                         Q.select_rows(range(r0, r0 + L)).select_cols(range(p0, p0 + k)),
                                         P.select_rows(range(p0, p0 + k)).select_cols(range(c0, c0 + L))))
            r0 += L
            c0 += L
            p0 += k

        def load(key, mat):
            prog = AdditionProgram.from_json(d[key])
            if not prog.computes(mat):
                if not repair:
                    raise ValueError(f"program {key} does not compute its matrix")
                warnings.warn(f"{N}-point plan: {key} does not match its matrix; "
                              "using a direct program for the stored matrix")
                prog = naive_program(mat)
            return prog

        p_prog = load("p_prog", P)
        if "aq_prog" in d:
            aq, a_p, q_p = load("aq_prog", mat_mul(A, Q)), None, None
        else:
            aq, a_p, q_p = None, load("a_prog", A), load("q_prog", Q)
        return cls(N, spec, int(d["alpha"], 16), cosets, gammas, perm, tuple(convs), A, Q, P, c,
                   d["scheme"], p_prog, a_p, q_p, aq, d.get("seed"))


def conv_vector(basis: NormalBasis) -> list[int]:
    """b = (gamma, gamma^(2^(m-1)), ..., gamma^2): first row of the circulant."""
    e = basis.elements
    m = basis.m
    return [e[(-n) % m] for n in range(m)]


def build_A(spec: FieldSpec, N: int, alpha: int, cosets: Sequence[CyclotomicCoset],
            bases: Sequence[NormalBasis]) -> BinaryMatrix:
    """Column (k, n) is the coordinate of alpha^(j s_k) on gamma_k^(2^(-n))."""
    cols_total = sum(cs.size for cs in cosets)
    rows = [0] * N
    off = 0
    for cs, nb in zip(cosets, bases):
        coords = nb.coordinates()
        m = cs.size
        step = spec.pow(alpha, cs.leader)
        x = 1
        for j in range(N):
            a = coords[x]
            v = 0
            for n in range(m):
                if (a >> ((-n) % m)) & 1:
                    v |= 1 << (off + n)
            rows[j] |= v
            x = spec.mul(x, step)
        off += m
    return BinaryMatrix(tuple(rows), cols_total)


def _structure(spec: FieldSpec, N: int, bases: Sequence[NormalBasis],
               cosets: Sequence[CyclotomicCoset], algs: dict[int, ConvAlgorithm] | None):
    alpha = spec.element_of_order(N)
    convs = []
    for cs, nb in zip(cosets, bases):
        alg = (algs or {}).get(cs.size) or catalog(cs.size)
        convs.append(specialize(alg, conv_vector(nb)))
    A = build_A(spec, N, alpha, cosets, bases)
    Q = block_diag([cv.Q for cv in convs])
    P = block_diag([cv.P for cv in convs])
    c = tuple(x for cv in convs for x in cv.c)
    return alpha, tuple(convs), A, Q, P, c


def _check_length(spec: FieldSpec, N: int):
    if N < 1 or (spec.size - 1) % N:
        raise FieldError(f"{N} does not divide 2^{spec.l}-1 = {spec.size - 1}")


def _block_cse(blocks: Sequence[BinaryMatrix], cfg: cse_mod.CseConfig, memo: dict) -> AdditionProgram:
    progs = []
    for b in blocks:
        key = (b.rows_bits, b.cols)
        if key not in memo:
            memo[key] = cse_mod.optimize(b, cfg)
        progs.append(memo[key])
    return concat_block_programs(progs)


def build_cfft(N: int, spec: FieldSpec, scheme: str = "B",
               cse_cfg: cse_mod.CseConfig | None = None,
               combos: int = DEFAULT_COMBOS, seed: int = 0,
               conv_algs: dict[int, ConvAlgorithm] | None = None) -> CfftPlan:
    """Build one scheme.  A/B use the fixed basis, C/D the best of `combos`
    random basis combinations; A/C reduce A and Q separately, B/D reduce AQ.

    Scheme "auto" builds all four and keeps the one with fewest additions.
    """
    _check_length(spec, N)
    cfg = cse_cfg or cse_mod.CseConfig(seed=seed)
    if scheme == "auto":
        plans = [build_cfft(N, spec, s, cfg, combos, seed, conv_algs) for s in SCHEMES]
        return min(plans, key=lambda p: p.adds)
    if scheme not in SCHEMES:
        raise ValueError(f"unknown scheme {scheme!r}")
    cosets = cyclotomic_cosets(N)
    perm = tuple(e for cs in cosets for e in cs.elements)
    joint = scheme in ("B", "D")
    memo: dict = {}
    if scheme in ("A", "B"):
        trials = [(None, [find_normal_basis(spec, cs.size) for cs in cosets])]
    else:
        rng = random.Random(seed)
        trials = []
        for t in range(combos):
            trial_seed = rng.randrange(1 << 30)
            r = random.Random(trial_seed)
            trials.append((trial_seed, [find_normal_basis(spec, cs.size, "random", r) for cs in cosets]))
    best = None
    for trial_seed, bases in trials:
        alpha, convs, A, Q, P, c = _structure(spec, N, bases, cosets, conv_algs)
        p_prog = _block_cse([cv.P for cv in convs], cfg, memo)
        if joint:
            aq = cse_mod.optimize(mat_mul(A, Q), cfg)
            a_p = q_p = None
        else:
            aq = None
            a_p = cse_mod.optimize(A, cfg)
            q_p = _block_cse([cv.Q for cv in convs], cfg, memo)
        plan = CfftPlan(N, spec, alpha, tuple(cosets), tuple(nb.gamma for nb in bases), perm,
                        convs, A, Q, P, c, scheme, p_prog, a_p, q_p, aq, trial_seed)
        if best is None or plan.adds < best.adds:
            best = plan
    return best


def predicted_mults(N: int, spec: FieldSpec) -> int:
    """Multiplication count of the CFFT (independent of the basis choice)."""
    _check_length(spec, N)
    cosets = cyclotomic_cosets(N)
    bases = [find_normal_basis(spec, cs.size) for cs in cosets]
    return sum(specialize(catalog(cs.size), conv_vector(nb)).mults for cs, nb in zip(cosets, bases))


def all_normal_basis_choices(spec: FieldSpec, cosets: Sequence[CyclotomicCoset]):
    """Iterate over every combination of normal elements (small fields only)."""
    per_size = {m: normal_elements(spec, m) for m in {cs.size for cs in cosets}}
    for combo in itertools.product(*(per_size[cs.size] for cs in cosets)):
        yield [NormalBasis(spec, cs.size, g) for cs, g in zip(cosets, combo)]
