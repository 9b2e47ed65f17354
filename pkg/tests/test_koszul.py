from itertools import permutations
from math import prod

import pytest

from kz.algebra import PolynomialRing
from kz.groebner import INFINITE
from kz.koszul import (KoszulComplex, binom, chi_k, chi_via_colons, h0_from_homology, homology_from_h0,
                       homology_length, homology_length_from_h0, koszul_summary, multiplicity)
from kz.modules import FPModule, chi1_via_multiplicity, h0_length
from kz.problem import load_fixture
from kz.sequences import exponent_grid, is_dd_sequence, is_strong_d
from randmod import random_monomial_module

SEEDS = range(20)


def powered(x, n):
    return [f ** a for f, a in zip(x, n)]


def test_binom_convention():
    assert binom(3, 5) == 0 and binom(-1, 0) == 0 and binom(4, 2) == 6 and binom(0, 0) == 1


@pytest.mark.parametrize("seed", SEEDS)
def test_differentials_compose_to_zero(seed):
    M, x, _ = random_monomial_module(seed)
    K = KoszulComplex(M, powered(x, (2,) + (1,) * (len(x) - 1)))
    assert K.check_differentials()


def test_koszul_sign_convention():
    R = PolynomialRing(["a", "b"])
    K = KoszulComplex(FPModule.free_module(R), [R.var(0), R.var(1)])
    top = K.differential(2)[0]
    # e_{01} maps to a e_1 - b e_0
    assert sorted(top.values()) == [-1, 1]


@pytest.mark.parametrize("seed", SEEDS)
def test_homology_routes_and_alternating_sums(seed):
    M, x, _ = random_monomial_module(seed)
    d = len(x)
    for n in exponent_grid(d, 1, 2):
        lengths = koszul_summary(M, x, n).lengths
        kernel_route = [homology_length(M, x, n, i) for i in range(d + 1)]
        assert kernel_route == lengths
        chis = [chi_k(M, x, n, k) for k in range(d + 2)]
        for k in range(d + 1):
            assert lengths[k] == chis[k] + chis[k + 1]
        assert chis[1] == chi1_via_multiplicity(M, powered(x, n))


@pytest.mark.parametrize("seed", SEEDS)
def test_bound_monotonicity_multiplicativity(seed):
    M, x, _ = random_monomial_module(seed)
    d = len(x)
    grid = exponent_grid(d, 1, 2)
    e = multiplicity(x, M)
    for k in range(d + 1):
        base = chi_k(M, x, None, k)
        values = {n: chi_k(M, x, n, k) for n in grid}
        for n, v in values.items():
            assert v <= prod(n) * base
            for m in grid:
                if all(a <= b for a, b in zip(n, m)):
                    assert v <= values[m]
    for n in grid:
        assert chi_k(M, x, n, 0) == prod(n) * e == multiplicity(powered(x, n), M)


@pytest.mark.parametrize("seed", SEEDS)
def test_permutation_invariance(seed):
    M, x, _ = random_monomial_module(seed)
    d = len(x)
    n = tuple(range(1, d + 1))
    for k in range(1, d + 1):
        ref = chi_k(M, x, n, k)
        for perm in permutations(range(d)):
            assert chi_k(M, [x[i] for i in perm], [n[i] for i in perm], k) == ref


@pytest.mark.parametrize("seed", SEEDS)
def test_colon_multiplicity_route(seed):
    M, x, _ = random_monomial_module(seed)
    for k in range(1, len(x) + 1):
        assert chi_via_colons(M, x, None, k) == chi_k(M, x, None, k)


@pytest.mark.parametrize("name", ["colon_gap", "staircase_d2", "staircase_d3", "cm_polyring", "three_layer"])
def test_prefix_homology_from_h0_on_strong_d(name):
    P = load_fixture(name)
    M, x = P.module(), P.sequence
    assert is_strong_d(M, x, 2).at_least("strong-d")
    for j in range(1, len(x) + 1):
        for n in exponent_grid(j, 1, 2):
            for i in range(1, j + 1):
                assert homology_length(M, x[:j], n, i) == homology_length_from_h0(M, x[:j], n, i, j)


@pytest.mark.parametrize("name", ["staircase_d2", "staircase_d3", "three_layer", "xz_yz_distinguished"])
def test_h0_inversion_both_directions(name):
    P = load_fixture(name)
    M, x = P.module(), P.sequence
    d = len(x)
    assert is_dd_sequence(M, x, 2, certify=False).is_dd
    for n in exponent_grid(d, 1, 2):
        xn = powered(x, n)
        lengths = koszul_summary(M, xn).lengths
        for i in range(d):
            assert h0_from_homology(M, xn, None, i) == h0_length(M.quotient_by_elements(xn[:i]))
            assert homology_from_h0(M, xn, None, i) == lengths[d - i]


def test_colon_gap_chi1_display():
    P = load_fixture("colon_gap")
    M, x = P.module(), P.sequence
    for m in range(1, 5):
        for n in range(1, 5):
            assert chi_k(M, x, (m, n), 1) == (2 if m == 1 else 3)


def test_example39_lengths():
    for d in (2, 3):
        P = load_fixture(f"staircase_d{d}")
        M, x = P.module(), P.sequence
        for n in exponent_grid(d, 1, 3):
            assert M.quotient_by_elements(powered(x, n)).length() == sum(prod(n[:i]) for i in range(d + 1))
            assert chi_k(M, x, n, 1) == sum(prod(n[:i]) for i in range(d))


def test_cohen_macaulay_has_no_higher_homology():
    P = load_fixture("cm_complete_intersection")
    lengths = koszul_summary(P.module(), P.sequence).lengths
    assert lengths[1:] == [0] * (len(lengths) - 1)


def test_non_parameters_give_infinite_lengths():
    R = PolynomialRing(["x", "y"])
    M = FPModule.free_module(R)
    assert koszul_summary(M, [R.var(0)]).lengths[0] is INFINITE
