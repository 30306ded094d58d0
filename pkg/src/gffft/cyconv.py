"""Bilinear algorithms for short cyclic convolutions over GF(2^l).

Every algorithm here has the form z = Q (R b * P a), with b the operand
that is known ahead of time in a cyclotomic FFT (a normal-basis vector)
and a the data.  The catalog covers lengths 1..13:

* 2: a three-product kernel with two all-ones rows on the b side
* 3, 5, 7, 9: CRT (Winograd) construction over the GF(2) factors of w^L + 1
* 4, 8, 11: fixed tables
* 6, 10, 12: two-dimensional nesting of coprime lengths
* 13 (and any odd prime): reduction to a (p-1) x (p-1) Toeplitz product
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache, reduce
from typing import Sequence

from . import data
from .binmat import BinaryMatrix, DimensionError, kron, solve
from .gf2 import FieldSpec
from .tmvp import BilinearAlgorithm, plan_tmvp


class ConvolutionError(ValueError):
    pass


def naive_cyclic_conv(spec: FieldSpec, a: Sequence[int], b: Sequence[int]) -> list[int]:
    """z_k = sum_j a_j b_{(k-j) mod L}."""
    if len(a) != len(b):
        raise DimensionError(f"length mismatch {len(a)} vs {len(b)}")
    n = len(a)
    mul = spec.mul
    out = []
    for k in range(n):
        acc = 0
        for j in range(n):
            acc ^= mul(a[j], b[(k - j) % n])
        out.append(acc)
    return out


@dataclass(frozen=True)
class ConvAlgorithm:
    L: int
    bilinear: BilinearAlgorithm  # post Q, pre_left R (known operand), pre_right P (data)
    origin: str = ""

    @property
    def m(self) -> int:
        return self.bilinear.m

    @property
    def Q(self) -> BinaryMatrix:
        return self.bilinear.post

    @property
    def R(self) -> BinaryMatrix:
        return self.bilinear.pre_left

    @property
    def P(self) -> BinaryMatrix:
        return self.bilinear.pre_right

    def convolve(self, spec: FieldSpec, a: Sequence[int], b: Sequence[int]) -> list[int]:
        if len(a) != self.L or len(b) != self.L:
            raise DimensionError(f"expected length {self.L}")
        return self.bilinear.evaluate(spec, b, a)

    def to_json(self) -> dict:
        return {"L": self.L, "origin": self.origin, "bilinear": self.bilinear.to_json()}

    @classmethod
    def from_json(cls, d: dict) -> ConvAlgorithm:
        return cls(int(d["L"]), BilinearAlgorithm.from_json(d["bilinear"]), d.get("origin", ""))


# -- exactness and post-matrix synthesis -----------------------------------


def _outer(left: int, right: int, L: int) -> int:
    """Bit (i*L + j) set iff left has bit i and right has bit j."""
    v = 0
    i = 0
    while left:
        if left & 1:
            v |= right << (i * L)
        left >>= 1
        i += 1
    return v


def _conv_target(t: int, L: int) -> int:
    return sum(1 << (i * L + (t - i) % L) for i in range(L))


def is_exact_conv(alg: BilinearAlgorithm, L: int) -> bool:
    """Symbolic check that post (left b * right a) is the cyclic convolution."""
    if alg.n_out != L or alg.pre_left.cols != L or alg.pre_right.cols != L:
        return False
    outers = [_outer(l, r, L) for l, r in zip(alg.pre_left.rows_bits, alg.pre_right.rows_bits)]
    for t, row in enumerate(alg.post.rows_bits):
        acc = 0
        k = 0
        while row:
            if row & 1:
                acc ^= outers[k]
            row >>= 1
            k += 1
        if acc != _conv_target(t, L):
            return False
    return True


def solve_post(pre_left: BinaryMatrix, pre_right: BinaryMatrix, L: int) -> BinaryMatrix:
    """Find Q with Q (pre_left b * pre_right a) = b (*) a, or raise."""
    outers = [_outer(l, r, L) for l, r in zip(pre_left.rows_bits, pre_right.rows_bits)]
    rows = []
    for t in range(L):
        x = solve(outers, _conv_target(t, L))
        if x is None:
            raise ConvolutionError(f"products do not span output {t} of the {L}-point convolution")
        rows.append(x)
    return BinaryMatrix(tuple(rows), len(outers))


def _validated(alg: BilinearAlgorithm, L: int, origin: str) -> ConvAlgorithm:
    if not is_exact_conv(alg, L):
        raise AssertionError(f"{origin} {L}-point convolution fails validation")
    return ConvAlgorithm(L, alg, origin)


# -- GF(2)[w] helpers -------------------------------------------------------


def _pdeg(a: int) -> int:
    return a.bit_length() - 1


def _pmod(a: int, m: int) -> int:
    dm = _pdeg(m)
    while a and _pdeg(a) >= dm:
        a ^= m << (_pdeg(a) - dm)
    return a


def _pdivmod(a: int, m: int) -> tuple[int, int]:
    q = 0
    dm = _pdeg(m)
    while a and _pdeg(a) >= dm:
        s = _pdeg(a) - dm
        q |= 1 << s
        a ^= m << s
    return q, a


def _is_irreducible(f: int) -> bool:
    d = _pdeg(f)
    if d < 1:
        return False
    for g in range(2, 1 << (d // 2 + 1)):
        if _pdeg(g) >= 1 and _pdeg(g) <= d // 2 and _pmod(f, g) == 0:
            return False
    return True


def factor_cyclic_modulus(L: int) -> list[int]:
    """Irreducible GF(2) factors of w^L + 1, for odd L (squarefree)."""
    if L % 2 == 0:
        raise ConvolutionError("w^L + 1 is not squarefree for even L")
    rest = (1 << L) | 1
    out = []
    d = 1
    while _pdeg(rest) > 0:
        for f in range(1 << d, 1 << (d + 1)):
            if _is_irreducible(f):
                while True:
                    q, r = _pdivmod(rest, f)
                    if r:
                        break
                    out.append(f)
                    rest = q
        d += 1
    return out


# -- products modulo a single factor: lists of linear forms ----------------
# A form is a bitmask over the d coefficients of (x mod f); the same forms
# are used for both operands.


def _karatsuba_forms(d: int) -> list[int]:
    if d == 1:
        return [1]
    if d == 2:
        return [0b01, 0b10, 0b11]
    if d == 3:
        return [0b001, 0b010, 0b100, 0b011, 0b101, 0b110]
    h = (d + 1) // 2
    lo = _karatsuba_forms(h)
    hi_d = d - h
    hi = _karatsuba_forms(hi_d)
    if hi_d == h:
        return lo + [f << h for f in lo] + [f | (f << h) for f in lo]
    return lo + [f << h for f in hi] + [f | (f << h) for f in lo]


def _gf4_mul_u(e: tuple[int, int]) -> tuple[int, int]:
    # (e0 + e1 u) u = e1 + (e0 + e1) u, using u^2 = u + 1
    return e[1], e[0] ^ e[1]


def _phi9_forms() -> list[int]:
    """15 products for multiplication modulo w^6 + w^3 + 1.

    With u = w^3 (u^2 + u + 1 = 0) the ring is GF(4)[w]/(w^3 - u): operands
    become quadratics over GF(4), multiplied by evaluation at 0, 1, u, u^2
    and infinity, each GF(4) product costing three GF(2) products.
    """
    c = [(1 << k, 1 << (k + 3)) for k in range(3)]  # coefficient k = x_k + x_{k+3} u

    def lin(*terms):
        out = (0, 0)
        for t in terms:
            out = (out[0] ^ t[0], out[1] ^ t[1])
        return out

    u = _gf4_mul_u
    points = [
        c[0],
        lin(c[0], c[1], c[2]),
        lin(c[0], u(c[1]), u(u(c[2]))),
        lin(c[0], u(u(c[1])), u(c[2])),
        c[2],
    ]
    forms = []
    for e0, e1 in points:
        forms += [e0, e1, e0 ^ e1]
    return forms


PHI9 = 0b1001001


def _factor_forms(f: int) -> list[int]:
    d = _pdeg(f)
    if f == PHI9:
        return _phi9_forms()
    return _karatsuba_forms(d)


def _reduction_rows(f: int, L: int) -> list[int]:
    """Row t: bitmask over i of coeff_t(w^i mod f)."""
    d = _pdeg(f)
    rows = [0] * d
    for i in range(L):
        r = _pmod(1 << i, f)
        for t in range(d):
            if (r >> t) & 1:
                rows[t] |= 1 << i
    return rows


def _compose_form(form: int, red_rows: list[int]) -> int:
    out = 0
    t = 0
    while form:
        if form & 1:
            out ^= red_rows[t]
        form >>= 1
        t += 1
    return out


def crt_conv(L: int) -> ConvAlgorithm:
    """Winograd-style construction: one short product per factor of w^L + 1."""
    rows = []
    for f in factor_cyclic_modulus(L):
        red = _reduction_rows(f, L)
        rows += [_compose_form(form, red) for form in _factor_forms(f)]
    pre = BinaryMatrix(tuple(rows), L)
    post = solve_post(pre, pre, L)
    return _validated(BilinearAlgorithm(post, pre, pre), L, "crt")


def two_point_conv() -> ConvAlgorithm:
    # a1 (b0+b1), (a0+a1) b0, (a0+a1)(b0+b1)
    left = BinaryMatrix.from_strings(["11", "10", "11"])
    right = BinaryMatrix.from_strings(["01", "11", "11"])
    return _validated(BilinearAlgorithm(solve_post(left, right, 2), left, right), 2, "kernel")


def one_point_conv() -> ConvAlgorithm:
    one = BinaryMatrix.identity(1)
    return _validated(BilinearAlgorithm(one, one, one), 1, "trivial")


@lru_cache(maxsize=None)
def hardcoded_conv(L: int) -> ConvAlgorithm:
    """The fixed 4-, 8- and 11-point tables.

    For L = 4 the table called P has the four all-ones rows, so it is the
    one applied to the known operand (both orientations are valid since
    convolution is commutative).
    """
    if L == 4:
        alg = BilinearAlgorithm(BinaryMatrix.from_strings(data.CONV4_Q),
                                BinaryMatrix.from_strings(data.CONV4_P),
                                BinaryMatrix.from_strings(data.CONV4_R))
    elif L == 8:
        alg = BilinearAlgorithm(BinaryMatrix.from_strings(data.CONV8_Q),
                                BinaryMatrix.from_strings(data.CONV8_R_T).T,
                                BinaryMatrix.from_strings(data.CONV8_P_T).T)
    elif L == 11:
        alg = BilinearAlgorithm(BinaryMatrix.from_strings(data.CONV11_Q),
                                BinaryMatrix.from_strings(data.CONV11_R_T).T,
                                BinaryMatrix.from_strings(data.CONV11_P_T).T)
    else:
        raise ConvolutionError(f"no fixed table for L={L}; available: 4, 8, 11")
    return _validated(alg, L, "table")


def _is_odd_prime(p: int) -> bool:
    return p > 2 and all(p % q for q in range(2, math.isqrt(p) + 1))


@dataclass(frozen=True)
class PrimeConvConstruction:
    """Pieces of the Toeplitz reformulation for an odd prime p."""

    p: int
    B: BinaryMatrix
    A3: BinaryMatrix
    tmvp_alg: BilinearAlgorithm

    @property
    def B_inverse_closed_form(self) -> BinaryMatrix:
        n = self.p - 1
        a1 = sum(1 << j for j in range(2, n + 1))  # (0, 1, ..., 1) in columns 1..n
        rows = [1 | a1]
        for r in self.A3.rows_bits:
            rows.append(1 | (r << 1))
        return BinaryMatrix(tuple(rows), self.p)

    def toeplitz_r_rows(self) -> list[int]:
        """Diagonal r_e (e = 0..2n-2) of R as forms over Y' (n coordinates).

        R_{i,j} = Y'_{i-j+1} + Y'_{i-j+p+1} + sum_s Y'_s, indices outside
        0..p-2 contributing nothing; r_e = R at i - j = n-1-e.
        """
        n = self.p - 1
        full = (1 << n) - 1
        rows = []
        for e in range(2 * n - 1):
            d = n - 1 - e
            v = full
            for idx in (d + 1, d + self.p + 1):
                if 0 <= idx < n:
                    v ^= 1 << idx
            rows.append(v)
        return rows

    def R_entry_forms(self) -> list[list[int]]:
        """R_{i,j} as forms over Y', computed from A3 and M directly."""
        n, p = self.p - 1, self.p

        def Y(i):
            return (1 << i) if 0 <= i < n else 0

        M = [[Y(k - j) ^ Y(k - j + p) ^ Y(p - 1 - j) for j in range(n)] for k in range(n)]
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = 0
                for k in range(n):
                    if self.A3.entry(i, k):
                        acc ^= M[k][j]
                row.append(acc)
            out.append(row)
        return out


def prime_construction(p: int) -> PrimeConvConstruction:
    if not _is_odd_prime(p):
        raise ConvolutionError(f"{p} is not an odd prime")
    n = p - 1
    b_rows = [(1 << p) - 1] + [(1 << i) | (1 << (p - 1)) for i in range(n)]
    full = (1 << n) - 1
    a3_rows = [full ^ (1 << (i + 1)) if i + 1 < n else full for i in range(n)]
    return PrimeConvConstruction(p, BinaryMatrix(tuple(b_rows), p),
                                 BinaryMatrix(tuple(a3_rows), n), plan_tmvp(n))


@lru_cache(maxsize=None)
def prime_reformulated_conv(p: int) -> ConvAlgorithm:
    """p-point convolution from one scalar product plus a (p-1)-point TMVP."""
    con = prime_construction(p)
    n = p - 1
    T = con.tmvp_alg
    # X'_i = x_i + x_{p-1}
    bprime = [(1 << i) | (1 << (p - 1)) for i in range(n)]
    r_forms = [_compose_form(f, bprime) for f in con.toeplitz_r_rows()]
    left = [(1 << p) - 1] + [_compose_form(g, r_forms) for g in T.pre_left.rows_bits]
    right = [(1 << p) - 1] + [_compose_form(h, bprime) for h in T.pre_right.rows_bits]
    # z_0 = Z0 + sum(A3 Z'), z_{i+1} = Z0 + (A3 Z')_i, with A3 Z' = E q
    e_rows = [r << 1 for r in T.post.rows_bits]
    total = reduce(lambda x, y: x ^ y, e_rows, 0)
    post = [1 | total] + [1 | r for r in e_rows]
    alg = BilinearAlgorithm(BinaryMatrix(tuple(post), T.m + 1),
                            BinaryMatrix(tuple(left), p), BinaryMatrix(tuple(right), p))
    return _validated(alg, p, "toeplitz")


def composite_conv(c1: ConvAlgorithm, c2: ConvAlgorithm) -> ConvAlgorithm:
    """Nest coprime lengths via n -> (n mod L1, n mod L2)."""
    L1, L2 = c1.L, c2.L
    if math.gcd(L1, L2) != 1:
        raise ConvolutionError(f"lengths {L1} and {L2} are not coprime")
    L = L1 * L2
    pos = [(n % L1) * L2 + (n % L2) for n in range(L)]
    perm = BinaryMatrix.permutation([pos.index(k) for k in range(L)])  # (perm x)[pos(n)] = x[n]
    left = kron(c1.R, c2.R) @ perm
    right = kron(c1.P, c2.P) @ perm
    post = kron(c1.Q, c2.Q).select_rows(pos)
    return _validated(BilinearAlgorithm(post, left, right), L, f"nested {L1}x{L2}")


CATALOG_MAX = 13


@lru_cache(maxsize=None)
def catalog(L: int) -> ConvAlgorithm:
    if not 1 <= L <= CATALOG_MAX:
        raise ConvolutionError(f"no convolution algorithm for L={L} (supported 1..{CATALOG_MAX})")
    if L == 1:
        return one_point_conv()
    if L == 2:
        return two_point_conv()
    if L in (4, 8, 11):
        return hardcoded_conv(L)
    if L in (3, 5, 7, 9):
        return crt_conv(L)
    if L == 6:
        return composite_conv(catalog(2), catalog(3))
    if L == 10:
        return composite_conv(catalog(2), catalog(5))
    if L == 12:
        return composite_conv(catalog(3), catalog(4))
    return prime_reformulated_conv(L)


# -- specialization to a known operand -------------------------------------


@dataclass(frozen=True)
class SpecializedConv:
    """Q (c * P a) with c = R b precomputed; products with c == 0 removed."""

    L: int
    c: tuple[int, ...]
    Q: BinaryMatrix
    P: BinaryMatrix

    @property
    def mults(self) -> int:
        return sum(1 for x in self.c if x not in (0, 1))

    @property
    def products(self) -> int:
        return len(self.c)

    def convolve(self, spec: FieldSpec, a: Sequence[int]) -> tuple[list[int], int]:
        x, _ = self.P.apply(a)
        mul = spec.mul
        y = []
        used = 0
        for ci, xi in zip(self.c, x):
            if ci == 1:
                y.append(xi)
            else:
                y.append(mul(ci, xi))
                used += 1
        out, _ = self.Q.apply(y)
        return out, used


def specialize(alg: ConvAlgorithm, b: Sequence[int]) -> SpecializedConv:
    if len(b) != alg.L:
        raise DimensionError(f"operand has length {len(b)}, expected {alg.L}")
    c, _ = alg.R.apply(b)
    keep = [k for k, x in enumerate(c) if x != 0]
    return SpecializedConv(alg.L, tuple(c[k] for k in keep),
                           alg.Q.select_cols(keep), alg.P.select_rows(keep))


def full_rows(m: BinaryMatrix) -> int:
    full = (1 << m.cols) - 1
    return sum(1 for r in m.rows_bits if r == full)
