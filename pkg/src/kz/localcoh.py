"""Local cohomology lengths, dimension filtrations and sequential Cohen-Macaulayness."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import prod
from typing import Sequence

from .algebra import Polynomial, PolynomialRing
from .errors import PreconditionError, SearchFailure
from .koszul import binom, chi_k, multiplicity
from .modules import (FPModule, Ideal, SubmoduleOfModule, h0_length, h0_submodule, is_cohen_macaulay,
                      is_system_of_parameters)
from .parallel import grid_map
from .sequences import exponent_grid, fit_multilinear

__all__ = [
    "h0_length", "h0_submodule", "is_standard_sop", "lc_length_from_chi", "quotient_h0_fit_check",
    "monomial_primary_decomposition", "MonomialPrimaryDecomposition", "DimensionFiltration",
    "dimension_filtration", "is_filtration_valid", "SeqCMReport", "is_sequentially_cm",
    "is_distinguished", "layer_coefficients", "layered_chi", "layered_chi1", "distinguished_sop",
    "distinguished_verdicts", "top_layer_colon_check", "quotient_filtration_check", "layer_polynomial_types",
    "chi1_values",
]


def _elems(M: FPModule, x) -> list[Polynomial]:
    return [M.ring(f) for f in x]


# ---------------------------------------------------------------------------
# standard systems of parameters and higher local cohomology


def _chi1_task(M, elems, n):
    return chi_k(M, [f ** a for f, a in zip(elems, n)], None, 1)


def chi1_values(M: FPModule, x, n_max: int, jobs: int = 1) -> dict:
    elems = _elems(M, x)
    pts = exponent_grid(len(elems), 1, n_max + 1)
    return dict(zip(pts, grid_map(_chi1_task, [(M, elems, n) for n in pts], jobs)))


def is_standard_sop(M: FPModule, x, n_max: int = 2, jobs: int = 1) -> bool:
    """``chi_1(x(n); M)`` constant on ``{1..n_max+1}^d`` (bounded evidence)."""
    elems = _elems(M, x)
    if not is_system_of_parameters(M, elems):
        raise PreconditionError("sequence is not a system of parameters")
    if not elems:
        return True
    return len(set(chi1_values(M, elems, n_max, jobs).values())) == 1


def lc_length_from_chi(M: FPModule, x, i: int, check: bool = True, n_max: int = 2) -> int:
    """``sum_{j=0}^{i} (-1)^{i-j} C(i, j) l(H^0_m(M / (x_1..x_j) M))``.

    Requires ``M`` generalized Cohen-Macaulay and ``x`` standard; with
    ``check`` both are tested (standardness on the bounded grid, which for
    a system of parameters also shows ``p_1(M) <= 0``).
    """
    elems = _elems(M, x)
    d = len(elems)
    if not 0 <= i < d:
        raise PreconditionError("need 0 <= i < dim M")
    if check and not is_standard_sop(M, elems, n_max):
        raise PreconditionError("sequence is not a standard system of parameters")
    total = 0
    for j in range(i + 1):
        total += (-1) ** (i - j) * binom(i, j) * h0_length(M.quotient_by_elements(elems[:j]))
    return total


def _lc_on_quotient(M, elems, k, i, n):
    Q = M.quotient_by_elements([f ** a for f, a in zip(elems[:k], n)])
    tail = elems[k:]
    return sum((-1) ** (i - j) * binom(i, j) * h0_length(Q.quotient_by_elements(tail[:j]))
               for j in range(i + 1))


def quotient_h0_fit_check(M: FPModule, x, k: int, i: int, n_max: int = 2, jobs: int = 1,
                    check_tail: bool = True) -> dict:
    """Fit ``l(H^i_m(M / (x_1^{n_1}..x_k^{n_k}) M))`` as a multilinear polynomial in ``n``.

    Lengths come from the alternating H^0 sum applied to the quotient with
    the standard tail ``x_{k+1}..x_d``.
    """
    elems = _elems(M, x)
    d = len(elems)
    if not 0 <= i < d - k:
        raise PreconditionError("need 0 <= i < d - k")
    if check_tail:
        Q = M.quotient_by_elements(elems[:k])
        if not is_standard_sop(Q, elems[k:], 1):
            raise PreconditionError("tail is not a standard system of parameters of the quotient")
    pts = exponent_grid(k, 1, n_max + 1)
    values = grid_map(_lc_on_quotient, [(M, elems, k, i, n) for n in pts], jobs)
    samples = dict(zip(pts, values))
    fit = fit_multilinear(samples, k) if k else None
    return {
        "k": k, "i": i,
        "values": {",".join(map(str, n)): v for n, v in sorted(samples.items())},
        "fit": fit.to_dict() if fit else {"polynomial": {"rendered": str(values[0])}, "exact": True},
        "exact": fit.exact if fit else True,
    }


# ---------------------------------------------------------------------------
# monomial primary decomposition


def _divides(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _minimal(gens) -> tuple:
    gens = sorted(set(gens), key=lambda e: (sum(e), e))
    out = []
    for e in gens:
        if not any(_divides(f, e) for f in out):
            out.append(e)
    return tuple(sorted(out))


def _irreducible_components(gens: tuple) -> list[tuple]:
    gens = _minimal(gens)
    for g in gens:
        support = [i for i, a in enumerate(g) if a]
        if len(support) > 1:
            i = support[0]
            u = tuple(g[i] if k == i else 0 for k in range(len(g)))
            v = tuple(0 if k == i else a for k, a in enumerate(g))
            rest = tuple(h for h in gens if h != g)
            return _irreducible_components(rest + (u,)) + _irreducible_components(rest + (v,))
    return [gens]


def _intersect_monomial(a: tuple, b: tuple) -> tuple:
    return _minimal(tuple(max(x, y) for x, y in zip(g, h)) for g in a for h in b)


def _contains(big: tuple, small: tuple) -> bool:
    """Ideal ``big`` contains ideal ``small``."""
    return all(any(_divides(g, h) for g in big) for h in small)


@dataclass
class MonomialPrimaryDecomposition:
    """``I = ∩ Q_j`` with ``Q_j`` primary to the prime spanned by ``primes[j]``."""

    ring: PolynomialRing
    components: list
    primes: list

    def component_dims(self) -> list[int]:
        return [self.ring.nvars - len(p) for p in self.primes]

    def to_dict(self) -> dict:
        def mono(e):
            return str(self.ring.monomial(e))
        return {"components": [
            {"prime": [self.ring.variables[i] for i in sorted(p)],
             "dim": self.ring.nvars - len(p),
             "generators": [mono(e) for e in q]}
            for q, p in zip(self.components, self.primes)]}


def monomial_primary_decomposition(ring: PolynomialRing, gens) -> MonomialPrimaryDecomposition:
    """Irredundant primary decomposition of a monomial ideal given by exponent tuples.

    Splits generators into irreducible components, drops the non-minimal
    ones, and intersects those with the same radical.
    """
    gens = _minimal(tuple(gens))
    if not gens:
        raise PreconditionError("the zero ideal has no proper primary decomposition here")
    comps = [_minimal(c) for c in _irreducible_components(gens)]
    comps = sorted(set(comps))
    irredundant = [c for c in comps if not any(o != c and _contains(c, o) for o in comps)]
    by_prime: dict = {}
    for c in irredundant:
        p = frozenset(i for g in c for i, a in enumerate(g) if a)
        by_prime[p] = _intersect_monomial(by_prime[p], c) if p in by_prime else c
    primes = sorted(by_prime, key=lambda p: (-len(p), sorted(p)))
    return MonomialPrimaryDecomposition(ring, [by_prime[p] for p in primes], primes)


# ---------------------------------------------------------------------------
# dimension filtration


@dataclass
class DimensionFiltration:
    """Nonzero layers ``M_0 ⊂ ... ⊂ M_t = M`` with strictly increasing dimensions.

    ``h0_is_zero`` records that ``H^0_m(M) = 0``, in which case the chain of
    the definition starts with a zero module that is not listed here.
    """

    module: FPModule
    chain: list
    dims: list
    provenance: str
    h0_is_zero: bool
    notes: list = field(default_factory=list)

    @property
    def t(self) -> int:
        return len(self.chain) - 1

    def layer(self, i: int) -> FPModule:
        """``M_i / M_{i-1}`` as a presented module."""
        if i == 0:
            return self.chain[0].as_module()
        return self.chain[i].subquotient_over(self.chain[i - 1])

    def to_dict(self) -> dict:
        def gens(sub):
            return [str(g) for g in sub.generators]
        return {
            "dims": list(self.dims),
            "provenance": self.provenance,
            "h0_is_zero": self.h0_is_zero,
            "chain": [gens(s) for s in self.chain],
            "notes": list(self.notes),
        }


def _monomial_relations(M: FPModule):
    if M.free.rank != 1:
        return None
    gens = []
    for v in M.relations.gb().vecs:
        if len(v) != 1:
            return None
        ((_, e),) = v.keys()
        gens.append(e)
    return gens


def dimension_filtration(M: FPModule, candidate: Sequence[SubmoduleOfModule] | None = None) -> DimensionFiltration:
    """Dimension filtration from a monomial primary decomposition or a verified candidate."""
    if candidate is not None:
        return is_filtration_valid(M, candidate)
    gens = _monomial_relations(M)
    if gens is None:
        raise PreconditionError("engine filtrations need a cyclic module with monomial relations; "
                                "supply a candidate chain")
    ring = M.ring
    d = M.krull_dim()
    if not gens:
        chain = [M.whole()]
        return DimensionFiltration(M, chain, [d], "monomial-primary-decomposition", True)
    dec = monomial_primary_decomposition(ring, gens)
    cdims = dec.component_dims()
    levels = sorted(set(cdims))
    chain = []
    for di in levels:
        keep = [q for q, dim in zip(dec.components, cdims) if dim > di]
        if not keep:
            chain.append(M.whole())
            continue
        inter = keep[0]
        for q in keep[1:]:
            inter = _intersect_monomial(inter, q)
        chain.append(M.submodule([ring.monomial(e) for e in inter]))
    return DimensionFiltration(M, chain, levels, "monomial-primary-decomposition", 0 not in levels,
                               notes=[f"associated primes: {dec.to_dict()['components']}"])


def _low_dim_part_is_zero(L: FPModule, di: int) -> bool:
    """No nonzero element of ``L`` is supported on a coordinate subspace of dimension < ``di``."""
    ring = L.ring
    n = ring.nvars
    size = n - di + 1
    if size > n:
        return True
    gens = ring.gens
    for S in itertools.combinations(range(n), max(size, 0)):
        part = None
        for i in S:
            s, _ = L.zero_submodule().saturate(gens[i])
            part = s if part is None else part.intersect(s)
        if part is not None and not part.is_zero():
            return False
    return True


def is_filtration_valid(M: FPModule, chain: Sequence[SubmoduleOfModule]) -> DimensionFiltration:
    """Verify a user chain; raises :class:`PreconditionError` when a check fails.

    Strict inclusions, strictly increasing dimensions and ``M_t = M`` are
    required.  When every layer is Cohen-Macaulay the chain is the dimension
    filtration outright; otherwise each layer is checked to have no
    low-dimensional part along coordinate subspaces, which is partial.
    """
    chain = list(chain)
    if not chain:
        raise PreconditionError("empty chain")
    if not chain[-1].same_as(M.whole()):
        raise PreconditionError("the last member of the chain must be M")
    for a, b in zip(chain, chain[1:]):
        if not b.contains_submodule(a) or a.same_as(b):
            raise PreconditionError("chain inclusions must be strict")
    dims = [s.krull_dim() for s in chain]
    if any(a >= b for a, b in zip(dims, dims[1:])) or dims[0] < 0:
        raise PreconditionError(f"dimensions {dims} are not strictly increasing")
    h0 = h0_submodule(M)
    if dims[0] == 0:
        if not chain[0].same_as(h0):
            raise PreconditionError("a zero-dimensional first layer must equal H^0_m(M)")
    elif not h0.is_zero():
        raise PreconditionError("H^0_m(M) is nonzero but missing from the chain")
    filt = DimensionFiltration(M, chain, dims, "user-supplied-verified", dims[0] != 0)
    layers_cm = [is_cohen_macaulay(filt.layer(i)) for i in range(len(chain))]
    if all(layers_cm):
        filt.notes.append("all layers Cohen-Macaulay with increasing dimensions")
        return filt
    for i in range(len(chain)):
        if not _low_dim_part_is_zero(filt.layer(i), dims[i]):
            raise PreconditionError(f"layer {i} has a nonzero part of smaller dimension")
    filt.notes.append("maximality checked along coordinate subspaces only")
    return filt


@dataclass
class SeqCMReport:
    filtration: DimensionFiltration
    layer_cm: list
    overall: bool

    def to_dict(self) -> dict:
        return {"filtration": self.filtration.to_dict(), "layer_cm": list(self.layer_cm),
                "sequentially_cm": self.overall}


def is_sequentially_cm(M: FPModule, filtration: DimensionFiltration | None = None) -> SeqCMReport:
    filt = filtration if filtration is not None else dimension_filtration(M)
    verdicts = [is_cohen_macaulay(filt.layer(i)) for i in range(len(filt.chain))]
    return SeqCMReport(filt, verdicts, all(verdicts))


# ---------------------------------------------------------------------------
# distinguished systems of parameters


def is_distinguished(M: FPModule, x, filtration: DimensionFiltration) -> dict:
    """Check ``(x_{d_i+1}..x_d) M_i = 0`` and ``M_i ∩ (x_{d_i+1}..x_d) M = 0`` for every layer below the top."""
    elems = _elems(M, x)
    d = len(elems)
    annihilation = True
    intersection = True
    for sub, di in zip(filtration.chain[:-1], filtration.dims[:-1]):
        tail = elems[di:d]
        if not tail:
            continue
        if not sub.times_ideal(tail).is_zero():
            annihilation = False
        if not sub.intersect(M.times_ideal(tail)).is_zero():
            intersection = False
    return {"annihilation": annihilation, "intersection": intersection}


def layer_coefficients(dims: Sequence[int], k: int) -> list[int]:
    """Coefficients ``a_0..a_{t-1}`` of the layers in the chi_k formula.

    For layer ``m`` put ``s = t - m``; then ``a_m`` sums
    ``(-1)^{J - k} prod_l C(d_{t-l+1} - d_{t-l}, j_l)`` over ``(j_1..j_s)``
    with ``j_1 + .. + j_{s-1} <= k - 1`` and ``J = j_1 + .. + j_s >= k``.
    """
    dims = list(dims)
    if any(a >= b for a, b in zip(dims, dims[1:])):
        raise PreconditionError("dimensions must increase strictly")
    if k < 1:
        raise PreconditionError("k must be positive")
    t = len(dims) - 1
    gaps = [dims[t - l + 1] - dims[t - l] for l in range(1, t + 1)]
    out = []
    for m in range(t):
        s = t - m
        total = 0
        for js in itertools.product(*(range(g + 1) for g in gaps[:s])):
            head = sum(js[:-1])
            J = head + js[-1]
            if head <= k - 1 and J >= k:
                total += (-1) ** (J - k) * prod(binom(g, j) for g, j in zip(gaps, js))
        out.append(total)
    return out


def layered_chi(M: FPModule, x, n: Sequence[int], k: int, filtration: DimensionFiltration) -> int:
    """``sum_{d_i <= d-k} a_i n_1..n_{d_i} e(x_1..x_{d_i}; M_i)``."""
    elems = _elems(M, x)
    d = len(elems)
    n = tuple(n)
    a = layer_coefficients(filtration.dims, k)
    total = 0
    for m, (sub, di) in enumerate(zip(filtration.chain[:-1], filtration.dims[:-1])):
        if di > d - k:
            continue
        e = multiplicity(elems[:di], sub)
        total += a[m] * prod(n[:di]) * e
    return total


def layered_chi1(M: FPModule, x, n: Sequence[int], filtration: DimensionFiltration) -> int:
    """``sum_{i<t} n_1..n_{d_i} e(x_1..x_{d_i}; M_i)``."""
    elems = _elems(M, x)
    return sum(prod(tuple(n)[:di]) * multiplicity(elems[:di], sub)
               for sub, di in zip(filtration.chain[:-1], filtration.dims[:-1]))


def _candidates(ring: PolynomialRing, ideal: Ideal | None, max_degree: int = 3):
    """Homogeneous elements of ``ideal`` (or of the maximal ideal), small ones first."""
    seen = []
    pool = []
    for deg in range(1, max_degree + 1):
        base = [x ** deg for x in ring.gens]
        if ideal is not None:
            base += [g for g in ideal.gb_polys() if g.degree() == deg]
        level = []
        for f in base:
            if ideal is None or ideal.contains(f):
                if f not in level:
                    level.append(f)
        pool.extend(level)
        for f in level:
            if f not in seen:
                seen.append(f)
                yield f
        for f, g in itertools.combinations(level, 2):
            for c in (1, -1, 2, -2):
                h = f + ring.constant(c) * g
                if h and h not in seen:
                    seen.append(h)
                    yield h


def distinguished_sop(M: FPModule, filtration: DimensionFiltration | None = None, max_degree: int = 3) -> list[Polynomial]:
    """Greedy construction of a system of parameters with ``(x_{d_i+1}..x_d) M_i = 0``.

    Positions are filled from ``x_d`` down.  Position ``p`` must annihilate
    every layer ``M_i`` with ``d_i < p`` and keep ``x_p..x_d`` part of a
    system of parameters.
    """
    filt = filtration if filtration is not None else dimension_filtration(M)
    d = M.krull_dim()
    anns = [sub.annihilator() for sub in filt.chain[:-1]]
    chosen: list[Polynomial] = []
    current = M
    for p in range(d, 0, -1):
        idx = [i for i, di in enumerate(filt.dims[:-1]) if di < p]
        ideal = anns[max(idx)] if idx else None
        pick = None
        for f in _candidates(M.ring, ideal, max_degree):
            if current.quotient_by_elements([f]).krull_dim() == p - 1:
                pick = f
                break
        if pick is None:
            raise SearchFailure(f"no admissible element for position {p}")
        chosen.append(pick)
        current = current.quotient_by_elements([pick])
    return list(reversed(chosen))


def layer_polynomial_types(dims: Sequence[int], d: int) -> dict:
    """``k -> d_i`` for ``d - d_{i+1} < k <= d - d_i``."""
    out = {}
    dims = list(dims)
    for i in range(len(dims) - 1):
        for k in range(d - dims[i + 1] + 1, d - dims[i] + 1):
            if k >= 1:
                out[k] = dims[i]
    return out



def distinguished_verdicts(M: FPModule, x, filtration: DimensionFiltration, n_max: int = 1) -> dict:
    """The four equivalent conditions side by side.

    ``(i)`` intersection zero, ``(ii)`` annihilation, ``(iii)`` the chi_1
    formula on ``{1..n_max+1}^d`` and ``(iv)`` the dd verdict at ``n_max``.
    """
    from .sequences import is_dd_sequence
    elems = _elems(M, x)
    dist = is_distinguished(M, elems, filtration)
    formula = True
    mismatches = []
    for n in exponent_grid(len(elems), 1, n_max + 1):
        lhs = chi_k(M, elems, n, 1)
        try:
            rhs = layered_chi1(M, elems, n, filtration)
        except PreconditionError:
            rhs = None
        if lhs != rhs:
            formula = False
            mismatches.append({"n": list(n), "chi1": lhs, "formula": rhs})
    dd = is_dd_sequence(M, elems, n_max).is_dd
    out = {"i_intersection": dist["intersection"], "ii_annihilation": dist["annihilation"],
           "iii_chi1_formula": formula, "iv_dd": dd, "grid_bound": n_max,
           "formula_mismatches": mismatches[:3]}
    out["agree"] = len({out["i_intersection"], out["ii_annihilation"], formula, dd}) == 1
    return out


def top_layer_colon_check(M: FPModule, x, filtration: DimensionFiltration) -> dict:
    """``M_{t-1} = 0 :_M x_d`` (as submodules, by Groebner basis equality)."""
    elems = _elems(M, x)
    if filtration.t < 1:
        return {"applicable": False, "equal": True}
    colon = M.zero_submodule().colon(elems[-1])
    return {"applicable": True, "equal": filtration.chain[-2].same_as(colon)}


def quotient_filtration_check(M: FPModule, f, filtration: DimensionFiltration) -> dict:
    """Quotient by a parameter ``f`` killing ``M_{t-1}``; the images ``(M_i + fM)/fM`` should filter it."""
    f = M.ring(f)
    if filtration.t >= 1 and not filtration.chain[-2].times_ideal([f]).is_zero():
        raise PreconditionError("element does not annihilate M_{t-1}")
    Q = M.quotient_by_elements([f])
    if Q.krull_dim() != M.krull_dim() - 1:
        raise PreconditionError("element is not a parameter")
    images = [Q.submodule(s.vecs) for s in filtration.chain]
    chain = []
    for s in images:
        if s.is_zero():
            continue
        dim = s.krull_dim()
        while chain and chain[-1].krull_dim() >= dim:
            chain.pop()
        chain.append(s)
    predicted = is_filtration_valid(Q, chain)
    report = is_sequentially_cm(Q, predicted)
    return {"predicted_dims": list(predicted.dims), "sequentially_cm": report.overall,
            "layer_cm": report.layer_cm}
