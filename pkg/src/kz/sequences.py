"""Decision procedures for d-, strong d- and dd-sequences, and polynomial fits of chi_k.

"For all exponents" quantifiers are handled in two ways.  A single exponent
is closed exactly by saturating the relevant colon and recording where it
stabilises.  Joint exponent tuples are checked on the grid
``{1..n_max}^s`` and every positive verdict records that bound.  Negative
verdicts carry a witness pair of unequal colon submodules that can be
re-checked independently.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import prod
from typing import Sequence

from .algebra import Polynomial
from .errors import PreconditionError
from .koszul import KoszulComplex, chi_k, colon_terms
from .modules import FPModule, SubmoduleOfModule, is_system_of_parameters
from .parallel import grid_map

LEVELS = ("not-d", "d", "strong-d", "dd")


def exponent_grid(s: int, lo: int, hi: int) -> list[tuple]:
    return list(itertools.product(range(lo, hi + 1), repeat=s))


def _elems(M: FPModule, x) -> list[Polynomial]:
    return [M.ring(f) for f in x]


def _powered(elems, n):
    return [f ** a for f, a in zip(elems, n)]


# ---------------------------------------------------------------------------
# d-sequences


@dataclass
class ColonWitness:
    """Two colon submodules that a d-sequence would need to be equal.

    ``module_tail`` lists the elements ``M`` was divided by; the failing
    equality is ``(x_1..x_{i-1}) Q : x_j = (x_1..x_{i-1}) Q : x_i x_j`` on
    ``Q = M / (module_tail) M`` for the powered sequence ``sequence``.
    """

    i: int
    j: int
    exponents: tuple
    sequence: list
    module_tail: list
    left: SubmoduleOfModule
    right: SubmoduleOfModule
    base: FPModule

    def reverify(self) -> bool:
        """Recompute both colons from scratch and confirm they differ."""
        Q = self.base.quotient_by_elements(self.module_tail) if self.module_tail else self.base
        N = Q.times_ideal(self.sequence[: self.i - 1])
        xi, xj = self.sequence[self.i - 1], self.sequence[self.j - 1]
        left = N.colon(xj)
        right = N.colon(xi * xj)
        return not left.same_as(right) and left.same_as(self.left) and right.same_as(self.right)

    def describe(self) -> dict:
        def gens(sub):
            if sub.parent.embedding is not None:
                return [str(f) for f in sub.image_in_ring().gb_polys()]
            return [str(g) for g in sub.full().gb().elements]
        prefix = ", ".join(str(f) for f in self.sequence[: self.i - 1]) or "0"
        tail = ", ".join(str(f) for f in self.module_tail)
        return {
            "i": self.i,
            "j": self.j,
            "exponents": list(self.exponents),
            "sequence": [str(f) for f in self.sequence],
            "quotient_by": [str(f) for f in self.module_tail],
            "failing_equality": f"({prefix})Q : {self.sequence[self.j - 1]} = ({prefix})Q : "
                                f"{self.sequence[self.i - 1] * self.sequence[self.j - 1]}",
            "Q": f"M/({tail})M" if self.module_tail else "M",
            "left": gens(self.left),
            "right": gens(self.right),
        }


def d_sequence_failure(M: FPModule, elems: Sequence[Polynomial]):
    """First ``(i, j, left, right)`` violating the d-sequence equalities, else ``None``."""
    elems = list(elems)
    s = len(elems)
    for i in range(1, s + 1):
        N = M.times_ideal(elems[: i - 1]) if i > 1 else M.zero_submodule()
        xi = elems[i - 1]
        for j in range(i, s + 1):
            xj = elems[j - 1]
            left = N.colon(xj)
            right = N.colon(xi * xj)
            if not left.same_as(right):
                return i, j, left, right
    return None


def is_d_sequence(M: FPModule, x) -> tuple[bool, ColonWitness | None]:
    elems = _elems(M, x)
    fail = d_sequence_failure(M, elems)
    if fail is None:
        return True, None
    i, j, left, right = fail
    return False, ColonWitness(i, j, (1,) * len(elems), elems, [], left, right, M)


@dataclass
class StabilizationEntry:
    """Where ``(0 : x_i^n)`` stabilises inside a Koszul homology module."""

    k: int
    i: int
    context: tuple
    exponent: int
    stable_generators: list

    def to_dict(self) -> dict:
        return {"k": self.k, "i": self.i, "context": list(self.context),
                "n0": self.exponent, "stable_colon": self.stable_generators}


@dataclass
class DdVerdict:
    level: str
    n_max: int
    witness: ColonWitness | None = None
    certificate: dict | None = None
    grid: list = field(default_factory=list)
    stabilization: dict = field(default_factory=dict)
    single_exponent_closed: bool = False
    notes: list = field(default_factory=list)

    @property
    def is_dd(self) -> bool:
        return self.level == "dd"

    def at_least(self, level: str) -> bool:
        return LEVELS.index(self.level) >= LEVELS.index(level)

    def to_dict(self) -> dict:
        return {
            "level": self.level,
            "n_max": self.n_max,
            "grid_points_checked": len(self.grid),
            "witness": self.witness.describe() if self.witness else None,
            "certificate": self.certificate,
            "stabilization": self.stabilization,
            "single_exponent_closed": self.single_exponent_closed,
            "notes": list(self.notes),
        }


def _colon_stabilization(M: FPModule, elems, n_max: int) -> tuple[dict, bool]:
    """Saturation exponents of ``(x_1^{n_1}..x_{i-1}^{n_{i-1}}) M : x_j^infinity``.

    Returns the exponents keyed by ``"i,j;prefix-exponents"`` and whether
    all of them are at most ``n_max``, in which case every single-exponent
    colon in the d-sequence conditions is constant beyond the grid.
    """
    s = len(elems)
    out = {}
    closed = True
    for i in range(1, s + 1):
        for pre in exponent_grid(i - 1, 1, n_max):
            N = M.times_ideal(_powered(elems[: i - 1], pre)) if i > 1 else M.zero_submodule()
            for j in range(i, s + 1):
                _, e = N.saturate(elems[j - 1])
                out[f"{i},{j};{','.join(map(str, pre))}"] = e
                closed = closed and e <= n_max
    return out, closed


def is_strong_d(M: FPModule, x, n_max: int = 2) -> DdVerdict:
    """d-sequence property of every ``x(n)`` on ``{1..n_max}^s``."""
    if n_max < 1:
        raise PreconditionError("n_max must be at least 1")
    elems = _elems(M, x)
    s = len(elems)
    ok, wit = is_d_sequence(M, elems)
    if not ok:
        return DdVerdict("not-d", n_max, witness=wit)
    grid = exponent_grid(s, 1, n_max)
    for n in grid:
        pw = _powered(elems, n)
        fail = d_sequence_failure(M, pw)
        if fail is not None:
            i, j, left, right = fail
            return DdVerdict("d", n_max, witness=ColonWitness(i, j, n, pw, [], left, right, M), grid=grid)
    stab, closed = _colon_stabilization(M, elems, n_max)
    return DdVerdict("strong-d", n_max, grid=grid, stabilization=stab, single_exponent_closed=closed,
                     notes=[f"joint exponents checked on {{1..{n_max}}}^{s}"])


def is_dd_sequence(M: FPModule, x, n_max: int = 2, certify: bool = True) -> DdVerdict:
    """Grid check of: ``x_1^{n_1}..x_i^{n_i}`` is a d-sequence on ``M/(x_{i+1}^{n_{i+1}}..)M``."""
    verdict = is_strong_d(M, x, n_max)
    if verdict.level != "strong-d":
        return verdict
    elems = _elems(M, x)
    s = len(elems)
    quotients: dict = {}
    for n in verdict.grid:
        pw = _powered(elems, n)
        for i in range(1, s):
            tail = tuple(n[i:])
            Q = quotients.get(tail)
            if Q is None:
                Q = M.quotient_by_elements(pw[i:])
                quotients[tail] = Q
            fail = d_sequence_failure(Q, pw[:i])
            if fail is not None:
                a, b, left, right = fail
                verdict.witness = ColonWitness(a, b, n, pw[:i], pw[i:], left, right, M)
                return verdict
    verdict.level = "dd"
    if certify and is_system_of_parameters(M, elems):
        verdict.certificate = certify_dd_by_fit(M, elems, n_max)
    return verdict


# ---------------------------------------------------------------------------
# multilinear polynomials


class MultilinearPolynomial:
    """``sum_S lambda_S prod_{i in S} n_i`` over subsets ``S`` of ``{1..d}``."""

    def __init__(self, d: int, coefficients: dict):
        self.d = d
        self.coefficients = {tuple(sorted(S)): Fraction(c) for S, c in coefficients.items() if c != 0}

    def __call__(self, n: Sequence[int]):
        total = Fraction(0)
        for S, c in self.coefficients.items():
            total += c * prod(n[i - 1] for i in S)
        return int(total) if total.denominator == 1 else total

    def coefficient(self, S) -> Fraction:
        return self.coefficients.get(tuple(sorted(S)), Fraction(0))

    def is_zero(self) -> bool:
        return not self.coefficients

    def degree(self) -> int | None:
        """Total degree; ``None`` for the zero polynomial."""
        if not self.coefficients:
            return None
        return max(len(S) for S in self.coefficients)

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coefficients.values())

    def __eq__(self, other):
        return isinstance(other, MultilinearPolynomial) and self.coefficients == other.coefficients

    def __str__(self):
        if not self.coefficients:
            return "0"
        parts = []
        for S in sorted(self.coefficients, key=lambda S: (len(S), S)):
            c = self.coefficients[S]
            mono = "*".join(f"n{i}" for i in S)
            cs = str(c)
            if not mono:
                body = cs
            elif c == 1:
                body = mono
            elif c == -1:
                body = "-" + mono
            else:
                body = f"{cs}*{mono}"
            parts.append(body)
        return " + ".join(parts).replace("+ -", "- ")

    def to_dict(self) -> dict:
        return {
            "coefficients": {",".join(map(str, S)) or "{}": (int(c) if c.denominator == 1 else str(c))
                             for S, c in sorted(self.coefficients.items(), key=lambda t: (len(t[0]), t[0]))},
            "rendered": str(self),
            "degree": self.degree(),
        }


@dataclass
class FitResult:
    polynomial: MultilinearPolynomial
    residuals: dict
    corner: tuple

    @property
    def exact(self) -> bool:
        return all(v == 0 for v in self.residuals.values()) and self.polynomial.is_integral()

    def to_dict(self) -> dict:
        return {
            "polynomial": self.polynomial.to_dict(),
            "corner": list(self.corner),
            "exact": self.exact,
            "nonzero_residuals": {",".join(map(str, n)): str(v)
                                  for n, v in sorted(self.residuals.items()) if v != 0},
        }


def fit_multilinear(samples: dict, d: int, corner: tuple = (1, 2)) -> FitResult:
    """Interpolate on ``{a, b}^d`` and report residuals at the other samples.

    In each variable the unique line through ``(a, f(a))`` and ``(b, f(b))``
    has constant ``(b f(a) - a f(b)) / (b - a)`` and slope
    ``(f(b) - f(a)) / (b - a)``; applying this axis by axis gives all
    ``lambda_S`` at once.
    """
    a, b = corner
    if a == b:
        raise ValueError("corner values must differ")
    vals = {}
    for bits in itertools.product((0, 1), repeat=d):
        n = tuple(b if t else a for t in bits)
        if n not in samples:
            raise PreconditionError(f"missing corner sample {n}")
        vals[bits] = Fraction(samples[n])
    for axis in range(d):
        new = {}
        for bits, v in vals.items():
            if bits[axis]:
                continue
            hi = bits[:axis] + (1,) + bits[axis + 1:]
            va, vb = v, vals[hi]
            new[bits] = (b * va - a * vb) / (b - a)
            new[hi] = (vb - va) / (b - a)
        vals = new
    coeffs = {tuple(i + 1 for i, t in enumerate(bits) if t): c for bits, c in vals.items()}
    poly = MultilinearPolynomial(d, coeffs)
    corner_pts = set(itertools.product((a, b), repeat=d))
    residuals = {n: Fraction(v) - Fraction(poly(n)) for n, v in samples.items() if n not in corner_pts}
    return FitResult(poly, residuals, (a, b))


# ---------------------------------------------------------------------------
# grid evaluation


def _chi_task(M, elems, n, k):
    return chi_k(M, _powered(elems, n), None, k)


def chi_samples(M: FPModule, x, k: int, points: Sequence[tuple], jobs: int = 1) -> dict:
    elems = _elems(M, x)
    pts = sorted(set(tuple(p) for p in points))
    values = grid_map(_chi_task, [(M, elems, n, k) for n in pts], jobs)
    return dict(zip(pts, values))


def chi1_coefficients(M: FPModule, x) -> list[int]:
    """``a_i = e(x_1..x_i; (0 : x_{i+1}) in M/(x_{i+2}..x_d)M)`` for ``i = 0..d-1``."""
    return colon_terms(M, _elems(M, x), None, 1)


def chi1_rhs_theorem12(M: FPModule, x, n) -> int:
    """``sum_{i=0}^{d-1} n_1..n_i a_i``; terms past the polynomial type vanish."""
    a = chi1_coefficients(M, x)
    return sum(prod(n[:i]) * ai for i, ai in enumerate(a))


def chik_coefficients(M: FPModule, x, k: int) -> list[int]:
    """``e(x_1..x_i; (0 : x_{i+1}) in H_{k-1}(x_{i+2}..x_d; M))`` for ``i = 0..d-k``."""
    return colon_terms(M, _elems(M, x), None, k)


def chik_closed_form(M: FPModule, x, n, k: int) -> int:
    a = chik_coefficients(M, x, k)
    return sum(prod(n[:i]) * ai for i, ai in enumerate(a))


def certify_dd_by_fit(M: FPModule, x, n_max: int = 2, jobs: int = 1) -> dict | None:
    """Fit ``chi_1`` on ``{1,2}^d`` and match it to ``sum a_i n_1..n_i``.

    The certificate holds when the fitted coefficients are the computed
    multiplicities on prefix sets, zero elsewhere, and the closed form agrees
    with ``chi_1`` on ``{1..n_max+1}^d``.  It is evidence on a finite grid.
    """
    elems = _elems(M, x)
    d = len(elems)
    hi = max(n_max + 1, 2)
    samples = chi_samples(M, elems, 1, exponent_grid(d, 1, hi), jobs)
    fit = fit_multilinear(samples, d)
    a = chi1_coefficients(M, elems)
    for S, c in fit.polynomial.coefficients.items():
        if S != tuple(range(1, len(S) + 1)):
            return None
    for i, ai in enumerate(a):
        if fit.polynomial.coefficient(tuple(range(1, i + 1))) != ai:
            return None
    for n, v in samples.items():
        if v != sum(prod(n[:i]) * ai for i, ai in enumerate(a)):
            return None
    nonzero = [i for i, ai in enumerate(a) if ai]
    return {
        "coefficients": a,
        "fitted": fit.polynomial.to_dict(),
        "grid": f"{{1..{hi}}}^{d}",
        "p1": max(nonzero) if nonzero else None,
        "status": "certified on grid",
    }


# ---------------------------------------------------------------------------
# Colon stabilisation and polynomial type


def stabilization_entry(M: FPModule, x, k: int, i: int, n: Sequence[int]) -> StabilizationEntry:
    """Saturate ``(0 : x_i^infinity)`` in ``H_{k-1}`` of the sequence without ``x_i``."""
    elems = _elems(M, x)
    d = len(elems)
    if not 1 <= i <= d:
        raise PreconditionError("index out of range")
    n = tuple(n)
    others = [elems[j] ** n[j] for j in range(d) if j != i - 1]
    H = KoszulComplex(M, others).homology(k - 1)
    stable, e = H.zero_submodule().saturate(elems[i - 1])
    rel = H.relations.gb()
    gens = [str(g) for v, g in zip(stable.vecs, stable.generators) if not rel.contains_vec(v)]
    context = tuple(n[j] for j in range(d) if j != i - 1)
    return StabilizationEntry(k, i, context, max(1, e), gens)


def polynomial_type_check(M: FPModule, x, k: int, n_max: int = 2, jobs: int = 1) -> dict:
    """Stabilisation exponents against polynomiality of ``chi_k`` beyond them.

    Computes the colon stabilisation exponent for every ``i`` and every
    context on ``{1..n_max}^{d-1}``, takes the maximum ``n0`` and fits
    ``chi_k`` on ``{n0, n0+1}^d`` with residuals on ``{n0..n0+2}^d``.
    """
    elems = _elems(M, x)
    d = len(elems)
    entries = []
    for i in range(1, d + 1):
        for ctx in exponent_grid(d - 1, 1, n_max):
            n = list(ctx[: i - 1]) + [1] + list(ctx[i - 1:])
            entries.append(stabilization_entry(M, elems, k, i, n))
    n0 = max(e.exponent for e in entries) if entries else 1
    samples = chi_samples(M, elems, k, exponent_grid(d, n0, n0 + 2), jobs)
    fit = fit_multilinear(samples, d, (n0, n0 + 1))
    return {"n0": n0, "entries": [e.to_dict() for e in entries], "fit": fit.to_dict(),
            "polynomial_beyond_n0": fit.exact}


@dataclass
class PkEstimate:
    value: int | None
    polynomial: MultilinearPolynomial | None
    exact: bool
    confidence: str

    def display(self) -> str:
        if self.value is None:
            return "≤ 0 (empty)"
        return str(self.value)

    def to_dict(self) -> dict:
        return {"p_k": self.display(), "value": self.value, "exact": self.exact,
                "confidence": self.confidence,
                "polynomial": self.polynomial.to_dict() if self.polynomial else None}


def estimate_pk(M: FPModule, x, k: int, n_max: int = 2, jobs: int = 1) -> PkEstimate:
    """Degree of the multilinear polynomial fitted to ``chi_k(x(n); M)``.

    With an exact fit on ``{1..n_max+1}^d`` the degree is returned as is.
    Otherwise a fit on the last corner ``{n_max, n_max+1}^d`` checked on
    ``{n_max..n_max+2}^d`` is tried and flagged ``eventual``; failing that
    the general bound ``d - k`` is returned.
    """
    elems = _elems(M, x)
    d = len(elems)
    if k > d:
        return PkEstimate(None, MultilinearPolynomial(d, {}), True, "exact")
    hi = max(n_max + 1, 2)
    samples = chi_samples(M, elems, k, exponent_grid(d, 1, hi), jobs)
    fit = fit_multilinear(samples, d)
    if fit.exact:
        return PkEstimate(fit.polynomial.degree(), fit.polynomial, True, "exact")
    a = max(n_max, 2)
    later = chi_samples(M, elems, k, exponent_grid(d, a, a + 2), jobs)
    fit2 = fit_multilinear(later, d, (a, a + 1))
    if fit2.exact:
        return PkEstimate(fit2.polynomial.degree(), fit2.polynomial, False, "eventual")
    return PkEstimate(d - k, None, False, "bound")


def verdict_chain(M: FPModule, x, n_max: int = 2) -> dict:
    """Levels reached by the individual checks, for the strength-chain property."""
    d_ok, _ = is_d_sequence(M, x)
    strong = is_strong_d(M, x, n_max)
    dd = is_dd_sequence(M, x, n_max, certify=False)
    return {"d": d_ok, "strong-d": strong.at_least("strong-d"), "dd": dd.is_dd}

