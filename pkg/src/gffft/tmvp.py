"""Bilinear algorithms for Toeplitz matrix-vector products over GF(2^l).

An n x n Toeplitz matrix is described by r = (r_0, ..., r_{2n-2}) with
entry (i, j) = r_{n-1-i+j}; the first row is r_{n-1}..r_{2n-2} and the
last row r_0..r_{n-1}.  The product u = T v is computed as
``post (pre_left r * pre_right v)`` with binary matrices.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

from . import data
from .binmat import BinaryMatrix, DimensionError, kron
from .gf2 import FieldSpec


@dataclass(frozen=True)
class BilinearAlgorithm:
    """post . (pre_left a  (*)  pre_right b); m component-wise products."""

    post: BinaryMatrix
    pre_left: BinaryMatrix
    pre_right: BinaryMatrix

    def __post_init__(self):
        m = self.post.cols
        if self.pre_left.rows != m or self.pre_right.rows != m:
            raise DimensionError(
                f"inconsistent bilinear shapes: post {self.post.shape}, "
                f"left {self.pre_left.shape}, right {self.pre_right.shape}")

    @property
    def m(self) -> int:
        return self.post.cols

    @property
    def n_out(self) -> int:
        return self.post.rows

    def evaluate(self, spec: FieldSpec, left: Sequence[int], right: Sequence[int]) -> list[int]:
        x, _ = self.pre_left.apply(left)
        y, _ = self.pre_right.apply(right)
        mul = spec.mul
        out, _ = self.post.apply([mul(a, b) for a, b in zip(x, y)])
        return out

    def swapped(self) -> BilinearAlgorithm:
        return BilinearAlgorithm(self.post, self.pre_right, self.pre_left)

    def select_products(self, keep: Sequence[int]) -> BilinearAlgorithm:
        return BilinearAlgorithm(self.post.select_cols(keep),
                                 self.pre_left.select_rows(keep),
                                 self.pre_right.select_rows(keep))

    def to_json(self) -> dict:
        return {"post": self.post.to_json(), "pre_left": self.pre_left.to_json(),
                "pre_right": self.pre_right.to_json()}

    @classmethod
    def from_json(cls, d: dict) -> BilinearAlgorithm:
        return cls(BinaryMatrix.from_json(d["post"]), BinaryMatrix.from_json(d["pre_left"]),
                   BinaryMatrix.from_json(d["pre_right"]))


@dataclass(frozen=True)
class ToeplitzSpec:
    n: int
    diag: tuple[int, ...]

    def __post_init__(self):
        if len(self.diag) != 2 * self.n - 1:
            raise DimensionError(f"need {2 * self.n - 1} diagonal values, got {len(self.diag)}")

    def entry(self, i: int, j: int) -> int:
        return self.diag[self.n - 1 - i + j]

    def matrix(self) -> list[list[int]]:
        return [[self.entry(i, j) for j in range(self.n)] for i in range(self.n)]


def naive_tmvp(spec: FieldSpec, r: Sequence[int], v: Sequence[int]) -> list[int]:
    """Direct n^2-multiplication Toeplitz product (the oracle)."""
    n = len(v)
    if len(r) != 2 * n - 1:
        raise DimensionError("r must have 2n-1 entries")
    mul = spec.mul
    out = []
    for i in range(n):
        acc = 0
        base = n - 1 - i
        for j in range(n):
            acc ^= mul(r[base + j], v[j])
        out.append(acc)
    return out


def check_tmvp(alg: BilinearAlgorithm, n: int, spec: FieldSpec, trials: int, rng) -> bool:
    for _ in range(trials):
        r = [rng.randrange(spec.size) for _ in range(2 * n - 1)]
        v = [rng.randrange(spec.size) for _ in range(n)]
        if alg.evaluate(spec, r, v) != naive_tmvp(spec, r, v):
            return False
    return True


def is_exact_tmvp(alg: BilinearAlgorithm, n: int) -> bool:
    """Symbolic check: sum_k post[i,k] left[k,d] right[k,j] == [d == n-1-i+j] for all i, d, j."""
    if alg.n_out != n or alg.pre_left.cols != 2 * n - 1 or alg.pre_right.cols != n:
        return False
    left = alg.pre_left.rows_bits
    right = alg.pre_right.rows_bits
    for i in range(n):
        acc = [0] * (2 * n - 1)  # acc[d] = bitmask over j
        row = alg.post.rows_bits[i]
        k = 0
        while row:
            if row & 1:
                lk, rk = left[k], right[k]
                d = 0
                while lk:
                    if lk & 1:
                        acc[d] ^= rk
                    lk >>= 1
                    d += 1
            row >>= 1
            k += 1
        for d in range(2 * n - 1):
            j = d - (n - 1 - i)
            want = (1 << j) if 0 <= j < n else 0
            if acc[d] != want:
                return False
    return True


def trivial() -> BilinearAlgorithm:
    one = BinaryMatrix.identity(1)
    return BilinearAlgorithm(one, one, one)


@lru_cache(maxsize=None)
def kernel(n: int) -> BilinearAlgorithm:
    """Short TMVP kernels with 3, 6 and 14 multiplications for n = 2, 3, 5."""
    if n == 2:
        alg = BilinearAlgorithm(BinaryMatrix.from_strings(data.TMVP2_POST),
                                BinaryMatrix.from_strings(data.TMVP2_PRE_R),
                                BinaryMatrix.from_strings(data.TMVP2_PRE_V))
    elif n == 3:
        alg = BilinearAlgorithm(BinaryMatrix.from_strings(data.TMVP3_POST_T).T,
                                BinaryMatrix.from_strings(data.TMVP3_PRE_R),
                                BinaryMatrix.from_strings(data.TMVP3_PRE_V))
    elif n == 5:
        alg = BilinearAlgorithm(BinaryMatrix.from_strings(data.TMVP5_POST),
                                BinaryMatrix.from_strings(data.TMVP5_PRE_R),
                                BinaryMatrix.from_strings(data.TMVP5_PRE_V))
    else:
        raise ValueError(f"no TMVP kernel for n={n}; available: 2, 3, 5")
    if not is_exact_tmvp(alg, n):
        raise AssertionError(f"TMVP kernel n={n} fails validation")
    return alg


def compose(outer: BilinearAlgorithm, inner: BilinearAlgorithm) -> BilinearAlgorithm:
    """Nest two TMVP algorithms (n1, n2) into one of size n1*n2.

    The big Toeplitz matrix is block Toeplitz with Toeplitz blocks; block
    offset D uses the inner diagonals r[D*n2 : D*n2 + 2*n2 - 1].
    """
    n1, n2 = outer.n_out, inner.n_out
    n = n1 * n2
    post = kron(outer.post, inner.post)
    right = kron(outer.pre_right, inner.pre_right)
    rows = []
    for g1 in outer.pre_left.rows_bits:
        for g2 in inner.pre_left.rows_bits:
            v = 0
            d = 0
            r = g1
            while r:
                if r & 1:
                    v ^= g2 << (d * n2)
                r >>= 1
                d += 1
            rows.append(v)
    left = BinaryMatrix(tuple(rows), 2 * n - 1)
    return BilinearAlgorithm(post, left, right)


KERNEL_SIZES = (2, 3, 5)


def factor_235(n: int) -> list[int] | None:
    out = []
    for p in KERNEL_SIZES:
        while n % p == 0:
            out.append(p)
            n //= p
    return out if n == 1 else None


def tmvp_from_factors(factors: Sequence[int]) -> BilinearAlgorithm:
    alg = None
    for p in factors:
        alg = kernel(p) if alg is None else compose(alg, kernel(p))
    return trivial() if alg is None else alg


def embed(alg: BilinearAlgorithm, n: int, row_off: int = 0, col_off: int = 0) -> BilinearAlgorithm:
    """Use a t x t TMVP algorithm for an n x n TMVP (n <= t).

    The n x n matrix sits at (row_off, col_off) inside the t x t one; the
    unused diagonals and vector entries are zero and surplus outputs are
    discarded.  Products that are then provably zero or unused are removed.
    """
    t = alg.n_out
    if n > t:
        raise ValueError(f"cannot embed {n} into {t}")
    if not (0 <= row_off <= t - n and 0 <= col_off <= t - n):
        raise ValueError("embedding offset out of range")
    # big index e' = t-1-(i+ro)+(j+co) = e + shift where e = n-1-i+j
    shift = t - n - row_off + col_off
    live_r = {e + shift: e for e in range(2 * n - 1)}
    live_v = {j + col_off: j for j in range(n)}
    live_u = {i + row_off: i for i in range(n)}
    r_mask = sum(1 << e for e in live_r)
    v_mask = sum(1 << j for j in live_v)
    u_mask = sum(1 << i for i in live_u)
    post_t = alg.post.transpose()
    keep = [k for k in range(alg.m)
            if alg.pre_left.rows_bits[k] & r_mask
            and alg.pre_right.rows_bits[k] & v_mask
            and post_t.rows_bits[k] & u_mask]
    sub = alg.select_products(keep)
    r_idx = [e for e, _ in sorted(live_r.items(), key=lambda kv: kv[1])]
    v_idx = [j for j, _ in sorted(live_v.items(), key=lambda kv: kv[1])]
    u_idx = [i for i, _ in sorted(live_u.items(), key=lambda kv: kv[1])]
    return BilinearAlgorithm(sub.post.select_rows(u_idx),
                             sub.pre_left.select_cols(r_idx),
                             sub.pre_right.select_cols(v_idx))


def _orderings(factors: Sequence[int]) -> list[tuple[int, ...]]:
    return sorted(set(itertools.permutations(factors)))


def pad_to(target: int, source_n: int,
           is_useful: Callable[[BilinearAlgorithm], bool] | None = None) -> BilinearAlgorithm:
    """Best embedding of a source_n TMVP into a target x target one.

    Tries every factor ordering and placement and keeps the one with the
    fewest products left after removing dead ones.
    """
    if target < source_n:
        raise ValueError("target must be at least source_n")
    factors = factor_235(target)
    if factors is None:
        raise ValueError(f"{target} does not factor over {{2, 3, 5}}")
    best = None
    for order in _orderings(factors):
        big = tmvp_from_factors(order)
        for ro in range(target - source_n + 1):
            for co in range(target - source_n + 1):
                cand = embed(big, source_n, ro, co)
                if is_useful is not None and not is_useful(cand):
                    continue
                if best is None or cand.m < best.m:
                    best = cand
    return best


@lru_cache(maxsize=None)
def plan_tmvp(n: int) -> BilinearAlgorithm:
    """Cheapest known TMVP algorithm for size n from the 2/3/5 kernels."""
    if n < 1:
        raise ValueError("n must be positive")
    if n == 1:
        return trivial()
    factors = factor_235(n)
    if factors is not None:
        return tmvp_from_factors(sorted(factors))
    best = None
    for t in range(n + 1, 2 * n + 1):
        if factor_235(t) is None:
            continue
        cand = pad_to(t, n)
        if best is None or cand.m < best.m:
            best = cand
        # product counts grow roughly like t^1.6; larger targets won't help
        if best is not None and t > n + 8:
            break
    return best
