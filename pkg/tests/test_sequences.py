import pytest
from hypothesis import given
from hypothesis import strategies as st

from kz.algebra import PolynomialRing
from kz.modules import FPModule
from kz.problem import load_fixture
from kz.sequences import (MultilinearPolynomial, estimate_pk, exponent_grid, fit_multilinear, is_d_sequence,
                          is_dd_sequence, is_strong_d, polynomial_type_check, stabilization_entry, verdict_chain)
from randmod import random_monomial_module

SEEDS = range(20)


def drop(x, i):
    return x[:i] + x[i + 1:]


def test_colon_gap_is_strong_d_but_not_dd():
    P = load_fixture("colon_gap")
    M, x = P.module(), P.sequence
    assert is_d_sequence(M, x)[0]
    strong = is_strong_d(M, x, 3)
    assert strong.level == "strong-d" and strong.single_exponent_closed
    verdict = is_dd_sequence(M, x, 2)
    assert not verdict.is_dd
    w = verdict.witness
    assert w is not None and w.reverify()
    info = w.describe()
    assert info["left"] == ["X*Y^2", "Y^3"] and info["right"] == ["Y^2"]
    assert info["quotient_by"] == ["Y^2"]


@pytest.mark.parametrize("d", [2, 3])
def test_staircase_dd_with_certificate(d):
    P = load_fixture(f"staircase_d{d}")
    v = is_dd_sequence(P.module(), P.sequence, 2)
    assert v.is_dd
    assert v.certificate["coefficients"] == [1] * d
    assert v.certificate["p1"] == d - 1
    assert v.certificate["fitted"]["degree"] == d - 1


def test_not_d_sequence_witness():
    P = load_fixture("xz_yz_not_distinguished")
    ok, w = is_d_sequence(P.module(), P.sequence)
    assert not ok and w.reverify()


@pytest.mark.parametrize("seed", SEEDS)
def test_strength_chain(seed):
    M, x, _ = random_monomial_module(seed)
    chain = verdict_chain(M, x, 2)
    assert chain["d"] or not chain["strong-d"]
    assert chain["strong-d"] or not chain["dd"]


def _dd_cases():
    cases = [(load_fixture(n).module(), load_fixture(n).sequence) for n in
             ("staircase_d2", "staircase_d3", "three_layer", "xz_yz_distinguished", "cm_polyring")]
    for seed in SEEDS:
        M, x, _ = random_monomial_module(seed)
        if is_dd_sequence(M, x, 2, certify=False).is_dd:
            cases.append((M, x))
    return cases


def test_dropping_an_element_keeps_dd():
    cases = _dd_cases()
    assert len(cases) >= 8
    for M, x in cases:
        for i in range(len(x)):
            rest = drop(list(x), i)
            if not rest:
                continue
            Q = M.quotient_by_elements([x[i]])
            assert is_dd_sequence(Q, rest, 2, certify=False).is_dd
            assert is_dd_sequence(M, rest, 2, certify=False).is_dd


coeff = st.integers(-4, 4)


@given(st.integers(1, 3).flatmap(lambda d: st.tuples(st.just(d), st.lists(coeff, min_size=2 ** d, max_size=2 ** d))))
def test_multilinear_fit_recovers_polynomials(data):
    d, cs = data
    subsets = sorted({tuple(i + 1 for i in range(d) if m >> i & 1) for m in range(2 ** d)})
    poly = MultilinearPolynomial(d, dict(zip(subsets, cs)))
    samples = {n: poly(n) for n in exponent_grid(d, 1, 3)}
    fit = fit_multilinear(samples, d)
    assert fit.exact and fit.polynomial == poly


def test_fit_detects_non_multilinear_data():
    samples = {n: n[0] ** 2 for n in exponent_grid(1, 1, 3)}
    assert not fit_multilinear(samples, 1).exact


def test_polynomial_rendering():
    p = MultilinearPolynomial(2, {(): 1, (1,): 1, (1, 2): 1})
    assert str(p) == "1 + n1 + n1*n2"
    assert str(MultilinearPolynomial(2, {(2,): -2})) == "-2*n2"
    assert MultilinearPolynomial(2, {}).degree() is None


def test_polynomial_type_estimates():
    P = load_fixture("staircase_d3")
    M, x = P.module(), P.sequence
    assert [estimate_pk(M, x, k).value for k in (1, 2, 3)] == [2, 1, 0]
    C = load_fixture("cm_polyring")
    e = estimate_pk(C.module(), C.sequence, 1)
    assert e.value is None and e.display() == "≤ 0 (empty)"
    E = load_fixture("colon_gap")
    e = estimate_pk(E.module(), E.sequence, 1, 2)
    assert e.value == 0 and e.confidence == "eventual"


def test_stabilization_and_polynomial_beyond_it():
    P = load_fixture("colon_gap")
    M, x = P.module(), P.sequence
    entry = stabilization_entry(M, x, 1, 1, (1, 1))
    assert entry.exponent == 2
    res = polynomial_type_check(M, x, 1, 2)
    assert res["polynomial_beyond_n0"] and res["fit"]["polynomial"]["rendered"] == "3"


def test_regular_sequence_is_dd():
    R = PolynomialRing(["a", "b", "c"])
    M = FPModule.quotient_ring(R, ["a*b - c^2"])
    v = is_dd_sequence(M, [R.parse("a"), R.parse("b")], 2)
    assert v.is_dd and v.certificate["coefficients"] == [0, 0]
