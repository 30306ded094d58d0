import random

import pytest
from hypothesis import given, strategies as st

from gffft.binmat import BinaryMatrix, DimensionError, invert, mat_mul
from gffft.cfft import conv_vector, find_normal_basis
from gffft.cyconv import (CATALOG_MAX, ConvAlgorithm, ConvolutionError, catalog, composite_conv,
                          crt_conv, factor_cyclic_modulus, full_rows, hardcoded_conv,
                          is_exact_conv, naive_cyclic_conv, prime_construction,
                          prime_reformulated_conv, solve_post, specialize)
from gffft.gf2 import FieldSpec

GF4 = FieldSpec.default(2)
GF16 = FieldSpec.default(4)
FIELDS = [FieldSpec.default(l) for l in (4, 11, 12)]

# general / specialized multiplication counts per length
GENERAL = {1: 1, 2: 3, 3: 4, 4: 9, 5: 10, 6: 12, 7: 13, 8: 27, 9: 19, 10: 30, 11: 43,
           12: 36, 13: 55}
SPECIALIZED = {2: 1, 3: 3, 4: 5, 5: 9, 6: 10, 7: 12, 8: 19, 9: 18, 10: 28, 11: 42, 12: 32}


def poly_conv(spec, a, b):
    """Oracle: multiply as polynomials, then fold exponents mod L."""
    L = len(a)
    full = [0] * (2 * L - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            full[i + j] ^= spec.mul(x, y)
    out = [0] * L
    for k, v in enumerate(full):
        out[k % L] ^= v
    return out


def rand_vec(spec, L, rng):
    return [rng.randrange(spec.size) for _ in range(L)]


def field_for(L):
    for l in (2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13):
        if l % L == 0:
            return FieldSpec.default(l)


def test_naive_examples():
    rng = random.Random(0)
    a = rand_vec(GF16, 5, rng)
    assert naive_cyclic_conv(GF16, a, [1, 0, 0, 0, 0]) == a
    assert naive_cyclic_conv(GF16, a, [0, 1, 0, 0, 0]) == a[-1:] + a[:-1]
    # (1 + w)(1 + w) = 1 + w^2 with L = 3
    assert naive_cyclic_conv(GF4, [1, 1, 0], [1, 1, 0]) == [1, 0, 1]
    with pytest.raises(DimensionError):
        naive_cyclic_conv(GF16, [1, 2], [1])


@given(st.integers(1, 9), st.integers(0, 2**32))
def test_naive_matches_polynomial_oracle(L, seed):
    rng = random.Random(seed)
    a, b = rand_vec(GF16, L, rng), rand_vec(GF16, L, rng)
    assert naive_cyclic_conv(GF16, a, b) == poly_conv(GF16, a, b)
    assert naive_cyclic_conv(GF16, a, b) == naive_cyclic_conv(GF16, b, a)


@pytest.mark.parametrize("L", range(1, CATALOG_MAX + 1))
def test_catalog_exact_and_counted(L):
    alg = catalog(L)
    assert alg.m == GENERAL[L]
    assert is_exact_conv(alg.bilinear, L)
    assert alg.Q.shape == (L, alg.m)
    assert alg.R.shape == alg.P.shape == (alg.m, L)


@pytest.mark.parametrize("L", range(1, CATALOG_MAX + 1))
def test_catalog_matches_oracle_over_several_fields(L):
    rng = random.Random(10 * L)
    alg = catalog(L)
    for spec in FIELDS:
        for _ in range(40):
            a, b = rand_vec(spec, L, rng), rand_vec(spec, L, rng)
            assert alg.convolve(spec, a, b) == poly_conv(spec, a, b)


@given(st.integers(1, CATALOG_MAX), st.integers(0, 2**32))
def test_catalog_property(L, seed):
    rng = random.Random(seed)
    spec = FieldSpec.default(13)
    a, b = rand_vec(spec, L, rng), rand_vec(spec, L, rng)
    assert catalog(L).convolve(spec, a, b) == naive_cyclic_conv(spec, a, b)


def test_unsupported_lengths():
    for L in (0, 14, 17):
        with pytest.raises(ConvolutionError):
            catalog(L)
    with pytest.raises(ConvolutionError):
        hardcoded_conv(5)
    with pytest.raises(DimensionError):
        catalog(3).convolve(GF16, [1, 2], [1, 2])


def test_cyclic_modulus_factors():
    assert factor_cyclic_modulus(7) == [0b11, 0b1011, 0b1101]
    assert factor_cyclic_modulus(9) == [0b11, 0b111, 0b1001001]
    for L in range(1, 14, 2):
        prod = 1
        for f in factor_cyclic_modulus(L):
            acc = 0
            b = 0
            while f >> b:
                if (f >> b) & 1:
                    acc ^= prod << b
                b += 1
            prod = acc
        assert prod == (1 << L) | 1


@pytest.mark.parametrize("L,m", [(3, 4), (5, 10), (7, 13), (9, 19)])
def test_crt_construction(L, m):
    assert crt_conv(L).m == m


@pytest.mark.parametrize("L,m", [(4, 9), (8, 27), (11, 43)])
def test_fixed_tables(L, m):
    alg = hardcoded_conv(L)
    assert alg.m == m
    rng = random.Random(L)
    spec = field_for(L)
    for _ in range(100):
        a, b = rand_vec(spec, L, rng), rand_vec(spec, L, rng)
        assert alg.convolve(spec, a, b) == poly_conv(spec, a, b)


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
def test_prime_reformulation_pieces(p):
    con = prime_construction(p)
    n = p - 1
    assert con.B.rows_bits[0] == (1 << p) - 1
    for i in range(n):
        assert con.B.rows_bits[i + 1] == (1 << i) | (1 << (p - 1))
    assert mat_mul(con.B, con.B_inverse_closed_form).is_identity()
    assert invert(con.B) == con.B_inverse_closed_form
    for i in range(n):
        for j in range(n):
            assert con.A3.entry(i, j) == (0 if j == i + 1 else 1)
    # R, derived from A3 and M directly, is Toeplitz and equals the diagonal forms
    forms = con.R_entry_forms()
    r = con.toeplitz_r_rows()
    for i in range(n):
        for j in range(n):
            assert forms[i][j] == r[n - 1 - i + j]


@pytest.mark.parametrize("p,m", [(3, 4), (5, 10), (7, 19), (11, 43), (13, 55)])
def test_prime_reformulated_products(p, m):
    alg = prime_reformulated_conv(p)
    assert alg.m == m == prime_construction(p).tmvp_alg.m + 1
    rng = random.Random(p)
    spec = FieldSpec.default(12)
    for _ in range(100):
        a, b = rand_vec(spec, p, rng), rand_vec(spec, p, rng)
        assert alg.convolve(spec, a, b) == poly_conv(spec, a, b)


def test_prime_reformulation_rejects_non_primes():
    for p in (1, 2, 4, 9):
        with pytest.raises(ConvolutionError):
            prime_construction(p)


@pytest.mark.parametrize("L1,L2", [(2, 3), (2, 5), (3, 4), (4, 3), (3, 5), (2, 7)])
def test_composite(L1, L2):
    alg = composite_conv(catalog(L1), catalog(L2))
    assert alg.m == catalog(L1).m * catalog(L2).m
    rng = random.Random(L1 * 100 + L2)
    spec = FieldSpec.default(12)
    for _ in range(30):
        a, b = rand_vec(spec, L1 * L2, rng), rand_vec(spec, L1 * L2, rng)
        assert alg.convolve(spec, a, b) == poly_conv(spec, a, b)


def test_composite_requires_coprime():
    with pytest.raises(ConvolutionError):
        composite_conv(catalog(2), catalog(4))


@pytest.mark.parametrize("L", sorted(SPECIALIZED))
def test_specialized_counts(L):
    spec = field_for(L)
    b = conv_vector(find_normal_basis(spec, L))
    sp = specialize(catalog(L), b)
    assert sp.mults == SPECIALIZED[L]
    # trace of a normal element is 1, so all-ones rows of R give c = 1
    assert sp.mults <= catalog(L).m - full_rows(catalog(L).R)
    rng = random.Random(L)
    for _ in range(50):
        a = rand_vec(spec, L, rng)
        z, used = sp.convolve(spec, a)
        assert z == poly_conv(spec, a, b)
        assert used == sp.mults


def test_specialized_13():
    spec = FieldSpec.default(13)
    b = conv_vector(find_normal_basis(spec, 13))
    assert specialize(catalog(13), b).mults == 54


def test_specializing_an_impulse_gives_identity():
    rng = random.Random(3)
    for L in (4, 7, 11):
        sp = specialize(catalog(L), [1] + [0] * (L - 1))
        a = rand_vec(GF16, L, rng)
        assert sp.convolve(GF16, a)[0] == a
        assert sp.mults == 0


def test_specialize_length_mismatch():
    with pytest.raises(DimensionError):
        specialize(catalog(3), [1, 2])


def test_solve_post_reconstructs_known_post():
    alg = catalog(5)
    assert solve_post(alg.R, alg.P, 5) == alg.Q


def test_solve_post_rejects_insufficient_products():
    pre = BinaryMatrix.from_strings(["100", "010", "001"])
    with pytest.raises(ConvolutionError):
        solve_post(pre, pre, 3)


def test_json_round_trip():
    for L in (4, 6, 13):
        alg = catalog(L)
        assert ConvAlgorithm.from_json(alg.to_json()) == alg
