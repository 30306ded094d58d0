import random

import pytest
from hypothesis import given, strategies as st

from gffft.binmat import DimensionError
from gffft.gf2 import FieldSpec
from gffft.tmvp import (BilinearAlgorithm, ToeplitzSpec, check_tmvp, compose, embed, factor_235,
                        is_exact_tmvp, kernel, naive_tmvp, pad_to, plan_tmvp, tmvp_from_factors,
                        trivial)

GF256 = FieldSpec.default(8)
GF2_12 = FieldSpec.default(12)


def dense_tmvp(spec, r, v):
    """Build the full matrix entry by entry and multiply (independent oracle)."""
    T = ToeplitzSpec(len(v), tuple(r)).matrix()
    out = []
    for row in T:
        acc = 0
        for a, b in zip(row, v):
            acc ^= spec.mul(a, b)
        out.append(acc)
    return out


def rand_case(spec, n, rng):
    return ([rng.randrange(spec.size) for _ in range(2 * n - 1)],
            [rng.randrange(spec.size) for _ in range(n)])


def test_toeplitz_entries_are_constant_along_diagonals():
    t = ToeplitzSpec(4, tuple(range(7)))
    M = t.matrix()
    for i in range(1, 4):
        for j in range(1, 4):
            assert M[i][j] == M[i - 1][j - 1]
    assert M[0] == [3, 4, 5, 6]
    assert [row[0] for row in M] == [3, 2, 1, 0]
    with pytest.raises(DimensionError):
        ToeplitzSpec(3, (1, 2))


def test_naive_matches_dense_oracle():
    rng = random.Random(1)
    for n in range(1, 9):
        r, v = rand_case(GF256, n, rng)
        assert naive_tmvp(GF256, r, v) == dense_tmvp(GF256, r, v)
    with pytest.raises(DimensionError):
        naive_tmvp(GF256, [1, 2], [1, 2])


@pytest.mark.parametrize("n,m", [(2, 3), (3, 6), (5, 14)])
def test_kernel_sizes(n, m):
    alg = kernel(n)
    assert alg.m == m
    assert is_exact_tmvp(alg, n)
    assert check_tmvp(alg, n, GF256, 100, random.Random(n))


def test_unknown_kernel_rejected():
    with pytest.raises(ValueError):
        kernel(7)


def test_trivial():
    alg = trivial()
    assert alg.m == 1 and is_exact_tmvp(alg, 1)


@pytest.mark.parametrize("outer,inner", [(2, 5), (5, 2), (3, 3), (2, 2), (3, 5), (2, 3)])
def test_compose_multiplies_products(outer, inner):
    alg = compose(kernel(outer), kernel(inner))
    assert alg.m == kernel(outer).m * kernel(inner).m
    n = outer * inner
    assert is_exact_tmvp(alg, n)
    assert check_tmvp(alg, n, GF256, 50, random.Random(n))


def test_compose_examples():
    assert compose(kernel(2), kernel(5)).m == 42
    assert plan_tmvp(10).m == 42
    assert plan_tmvp(12).m == 54
    assert plan_tmvp(4).m == 9


def test_compose_is_associative_in_behaviour():
    rng = random.Random(5)
    a = compose(compose(kernel(2), kernel(2)), kernel(3))
    b = compose(kernel(2), compose(kernel(2), kernel(3)))
    assert a.m == b.m == 54
    for _ in range(30):
        r, v = rand_case(GF256, 12, rng)
        assert a.evaluate(GF256, r, v) == b.evaluate(GF256, r, v) == naive_tmvp(GF256, r, v)


def test_factor_235():
    assert sorted(factor_235(60)) == [2, 2, 3, 5]
    assert factor_235(7) is None
    assert factor_235(1) == []


@pytest.mark.parametrize("target,source,m", [(12, 11, 52), (15, 11, 66)])
def test_padding_product_counts(target, source, m):
    alg = pad_to(target, source)
    assert alg.m == m
    assert is_exact_tmvp(alg, source)
    assert check_tmvp(alg, source, GF2_12, 100, random.Random(target))


def test_padding_to_16():
    # 60 products are quoted for this embedding; the best placement found
    # here keeps one product fewer and is still exact.
    alg = pad_to(16, 11)
    assert alg.m <= 60
    assert alg.m == 59
    assert is_exact_tmvp(alg, 11)
    assert check_tmvp(alg, 11, GF2_12, 100, random.Random(16))


def test_padding_to_same_size_is_a_no_op():
    for n in (2, 3, 4, 6, 10):
        assert pad_to(n, n).m == tmvp_from_factors(sorted(factor_235(n))).m


def test_pad_errors():
    with pytest.raises(ValueError):
        pad_to(7, 5)
    with pytest.raises(ValueError):
        pad_to(4, 5)


@pytest.mark.parametrize("n", range(1, 26))
def test_plan_tmvp_exact_for_every_size(n):
    alg = plan_tmvp(n)
    assert is_exact_tmvp(alg, n)
    assert check_tmvp(alg, n, GF256, 100, random.Random(1000 + n))
    assert alg.m <= n * n


@given(st.sampled_from([2, 3, 4, 5, 6, 7, 9, 10, 11]), st.integers(0, 2**32))
def test_plan_tmvp_matches_oracle(n, seed):
    r, v = rand_case(GF2_12, n, random.Random(seed))
    assert plan_tmvp(n).evaluate(GF2_12, r, v) == dense_tmvp(GF2_12, r, v)


def test_embed_extracts_a_sub_problem():
    big = tmvp_from_factors([2, 2])
    sub = embed(big, 3, 1, 0)
    assert is_exact_tmvp(sub, 3)
    assert sub.m <= big.m


def test_exactness_rejects_wrong_algorithms():
    alg = kernel(2)
    broken = BilinearAlgorithm(alg.post, alg.pre_right.__class__.from_strings(["100", "110", "011"]),
                               alg.pre_right)
    assert not is_exact_tmvp(broken, 2)
    assert not is_exact_tmvp(alg, 3)


def test_json_round_trip():
    alg = plan_tmvp(6)
    assert BilinearAlgorithm.from_json(alg.to_json()) == alg
