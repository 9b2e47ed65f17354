"""The twelve acceptance criteria, each timed against its budget."""

import time
from contextlib import contextmanager
from math import prod

import pytest

from conftest import ACCEPTANCE_LINES
from kz.koszul import (chi_k, chi_via_colons, h0_from_homology, homology_from_h0, homology_length,
                       homology_length_from_h0, koszul_summary, multiplicity)
from kz.localcoh import (layer_polynomial_types, dimension_filtration, is_sequentially_cm, is_standard_sop,
                         lc_length_from_chi, quotient_h0_fit_check, layered_chi, layer_coefficients,
                         distinguished_verdicts)
from kz.modules import h0_length
from kz.problem import fixture_names, load_fixture
from kz.sequences import estimate_pk, exponent_grid, is_dd_sequence, is_strong_d
from randmod import random_monomial_module


@contextmanager
def criterion(number: int, title: str, budget: float):
    start = time.perf_counter()
    status = "FAIL"
    try:
        yield
        elapsed = time.perf_counter() - start
        status = "PASS" if elapsed < budget else "FAIL (over budget)"
    finally:
        elapsed = time.perf_counter() - start
        line = f"AC{number} {status} {title} [{elapsed:.2f}s / budget {budget:.0f}s]"
        ACCEPTANCE_LINES.append(line)
        print(line)
    assert elapsed < budget, line


def corpus():
    for name in fixture_names():
        P = load_fixture(name)
        yield name, P.module(), P.sequence


def powered(x, n):
    return [f ** a for f, a in zip(x, n)]


def test_ac01_colon_gap_chi1_display():
    with criterion(1, "colon-gap chi_1(X^m, Y^2n) = 2 (m=1), 3 (m=2..4)", 10):
        P = load_fixture("colon_gap")
        M, x = P.module(), P.sequence
        for m in range(1, 5):
            for n in range(1, 5):
                assert chi_k(M, x, (m, n), 1) == (2 if m == 1 else 3)


def test_ac02_colon_gap_colons():
    with criterion(2, "colon-gap colons Y^2M:X = (XY^2, Y^3), Y^2M:X^m = (Y^2)", 5):
        P = load_fixture("colon_gap")
        M = P.module()
        X, Y2 = P.ring.parse("X"), P.ring.parse("Y^2")
        N = M.times_ideal([Y2])
        xy2 = M.submodule([M.free.element(["0", "Y", "0"]), M.free.element(["0", "0", "Y"])])
        c1 = N.colon(X)
        assert c1.same_as(xy2)
        assert [str(f) for f in c1.image_in_ring().gb_polys()] == ["X*Y^2", "Y^3"]
        y2 = M.submodule([M.free.element(["0", "0", "1"])])
        for m in (2, 3, 4):
            assert N.colon(X, m).same_as(y2)


@pytest.mark.parametrize("d", [2, 3])
def test_ac03_example39_lengths_and_chi1(d):
    with criterion(3, f"staircase d={d} lengths and chi_1 on {{1..3}}^{d}", 60):
        P = load_fixture(f"staircase_d{d}")
        M, x = P.module(), P.sequence
        for n in exponent_grid(d, 1, 3):
            assert M.quotient_by_elements(powered(x, n)).length() == sum(prod(n[:i]) for i in range(d + 1))
            assert chi_k(M, x, n, 1) == sum(prod(n[:i]) for i in range(d))


def test_ac04_verdicts():
    with criterion(4, "verdicts: colon-gap strong-d not dd; staircase dd with all-one certificate", 120):
        P = load_fixture("colon_gap")
        M, x = P.module(), P.sequence
        assert is_strong_d(M, x, 3).level == "strong-d"
        v = is_dd_sequence(M, x, 3)
        assert not v.is_dd and v.witness is not None and v.witness.reverify()
        for d in (2, 3):
            Q = load_fixture(f"staircase_d{d}")
            v = is_dd_sequence(Q.module(), Q.sequence, 2)
            assert v.is_dd
            assert v.certificate["coefficients"] == [1] * d and v.certificate["p1"] == d - 1


def test_ac05_colon_multiplicity_identity():
    with criterion(5, "chi_k via colon multiplicities = chi_k on the corpus, n in {1,2}^d", 300):
        for _, M, x in corpus():
            d = len(x)
            for k in range(1, d + 1):
                for n in exponent_grid(d, 1, 2):
                    assert chi_via_colons(M, x, n, k) == chi_k(M, x, n, k)


def test_ac06_homology_from_h0_on_strong_d():
    with criterion(6, "prefix Koszul homology lengths from H^0 lengths on strong-d entries", 300):
        used = 0
        for _, M, x in corpus():
            if not is_strong_d(M, x, 2).at_least("strong-d"):
                continue
            used += 1
            for j in range(1, len(x) + 1):
                for n in exponent_grid(j, 1, 2):
                    for i in range(1, j + 1):
                        assert homology_length_from_h0(M, x[:j], n, i, j) == homology_length(M, x[:j], n, i)
        assert used >= 5


def test_ac07_h0_inversion_on_dd():
    with criterion(7, "H^0 lengths and top Koszul homology are mutually inverse on dd entries", 300):
        used = 0
        for _, M, x in corpus():
            if not is_dd_sequence(M, x, 2, certify=False).is_dd:
                continue
            used += 1
            d = len(x)
            for n in exponent_grid(d, 1, 2):
                xn = powered(x, n)
                lengths = koszul_summary(M, xn).lengths
                for i in range(d):
                    assert h0_from_homology(M, xn, None, i) == h0_length(M.quotient_by_elements(xn[:i]))
                    assert homology_from_h0(M, xn, None, i) == lengths[d - i]
        assert used >= 5


def test_ac08_local_cohomology_well_defined():
    with criterion(8, "generalized CM: l(H^i_m) independent of standard s.o.p. and squaring", 60):
        P = load_fixture("generalized_cm")
        M, R = P.module(), P.ring
        seqs = [P.sequence, [R.parse(f) for f in P.expected["alternate_sequences"][0]]]
        seqs += [[f ** 2 for f in s] for s in seqs]
        assert all(is_standard_sop(M, s) for s in seqs)
        values = {tuple(lc_length_from_chi(M, s, i) for i in range(2)) for s in seqs}
        assert len(values) == 1


def test_ac09_quotient_h0_polynomial():
    with criterion(9, "staircase d=3, k=p_1=2: H^0 of the quotient fits exactly on {1..3}^2", 60):
        P = load_fixture("staircase_d3")
        M, x = P.module(), P.sequence
        assert estimate_pk(M, x, 1).value == 2
        res = quotient_h0_fit_check(M, x, 2, 0, 2)
        assert res["exact"] and not res["fit"]["nonzero_residuals"]
        assert len(res["values"]) == 9


PAIRS = [
    ("three_layer", None), ("three_layer", ["z", "y", "x+w"]), ("three_layer", ["y+w", "z", "x"]),
    ("staircase_d2", None), ("staircase_d2", ["X2", "X1"]), ("staircase_d2", ["X1+X3", "X2"]),
    ("staircase_d3", None), ("staircase_d3", ["X3", "X2", "X1"]),
    ("xz_yz_distinguished", None), ("xz_yz_not_distinguished", None),
    ("cm_polyring", None), ("cm_polyring", ["x+y", "y+z", "z"]), ("cm_complete_intersection", None),
]


def test_ac10_sequentially_cm_formulas():
    with criterion(10, "four equivalent conditions agree; layer formula = chi_k for k=1,2", 300):
        negatives = 0
        for name, seq in PAIRS:
            P = load_fixture(name)
            M = P.module()
            x = P.sequence if seq is None else [P.ring.parse(f) for f in seq]
            F = dimension_filtration(M, P.filtration_chain())
            assert is_sequentially_cm(M, F).overall
            v = distinguished_verdicts(M, x, F, 1)
            assert v["agree"], (name, seq, v)
            if not v["ii_annihilation"]:
                negatives += 1
                continue
            assert layer_coefficients(F.dims, 1) == [1] * F.t
            for k in (1, 2):
                for n in exponent_grid(len(x), 1, 2):
                    assert layered_chi(M, x, n, k, F) == chi_k(M, x, n, k)
        assert negatives >= 1


def test_ac11_polynomial_types_from_filtration():
    with criterion(11, "three-layer fixture: p_k = d_i for d - d_(i+1) < k <= d - d_i", 120):
        P = load_fixture("three_layer")
        M, x = P.module(), P.sequence
        F = dimension_filtration(M)
        assert F.dims == [0, 2, 3]
        expected = layer_polynomial_types(F.dims, 3)
        assert expected == {1: 2, 2: 0, 3: 0}
        for k, dk in expected.items():
            assert estimate_pk(M, x, k, 2).value == dk


def test_ac12_property_suites():
    with criterion(12, "properties on 20 random monomial modules (d <= 3)", 600):
        dd_count = 0
        for seed in range(20):
            M, x, _ = random_monomial_module(seed)
            d = len(x)
            grid = exponent_grid(d, 1, 2)
            e = multiplicity(x, M)
            for k in range(d + 1):
                base = chi_k(M, x, None, k)
                vals = {n: chi_k(M, x, n, k) for n in grid}
                for n, v in vals.items():
                    assert v <= prod(n) * base
                    assert all(v <= vals[m] for m in grid if all(a <= b for a, b in zip(n, m)))
            for n in grid:
                lengths = koszul_summary(M, x, n).lengths
                chis = [chi_k(M, x, n, k) for k in range(d + 2)]
                assert all(lengths[k] == chis[k] + chis[k + 1] for k in range(d + 1))
                assert chis[0] == prod(n) * e
            rev = list(reversed(x))
            for k in range(1, d + 1):
                for n in grid:
                    assert chi_k(M, rev, tuple(reversed(n)), k) == chi_k(M, x, n, k)
            if is_dd_sequence(M, x, 2, certify=False).is_dd:
                dd_count += 1
                for i in range(d):
                    rest = x[:i] + x[i + 1:]
                    if rest:
                        assert is_dd_sequence(M.quotient_by_elements([x[i]]), rest, 2, certify=False).is_dd
                        assert is_dd_sequence(M, rest, 2, certify=False).is_dd
        assert dd_count >= 3
