"""Finitely presented graded modules and the operations used on them.

A module is ``M = F / K`` with ``F`` a graded free module and ``K`` a
homogeneous submodule.  A submodule of ``M`` is stored by generators in
``F``; it stands for ``(N + K) / K``.  Lengths and dimensions are read off
Hilbert series, which works because every input is homogeneous.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Sequence

from .algebra import Polynomial, PolynomialRing, require_homogeneous
from .errors import InfiniteLengthError, PreconditionError, RingMismatchError, SearchFailure
from .groebner import (INFINITE, FreeModule, FreeModuleElement, HilbertSeries, Submodule,
                       _to_vec, eliminate, poly_coeffs, vec_degree, vec_mul_poly)

MAXIMAL_IDEAL = "m"


def _zero_exps(ring: PolynomialRing) -> tuple:
    return (0,) * ring.nvars


def _unit_vec(ring: PolynomialRing, pos: int) -> dict:
    return {(pos, _zero_exps(ring)): 1}


def _poly_vec(f: Polynomial) -> dict:
    return {(0, e): c for e, c in poly_coeffs(f).items()}


class Ideal:
    """A homogeneous ideal, stored as a submodule of ``R^1``."""

    def __init__(self, ring: PolynomialRing, gens: Iterable = ()):
        polys = [ring(g) for g in gens]
        require_homogeneous(polys, "ideal generator")
        self.ring = ring
        self.sub = Submodule.from_vecs(FreeModule(ring, 1), [_poly_vec(f) for f in polys if f])

    @classmethod
    def from_submodule(cls, sub: Submodule) -> "Ideal":
        obj = cls.__new__(cls)
        obj.ring = sub.free.ring
        obj.sub = sub
        return obj

    @property
    def gens(self) -> list[Polynomial]:
        return [Polynomial(self.ring, {e: c for (_, e), c in v.items()}) for v in self.sub.vecs if v]

    def gb_polys(self) -> list[Polynomial]:
        return [Polynomial(self.ring, {e: c for (_, e), c in v.items()}) for v in self.sub.gb().vecs]

    def contains(self, f: Polynomial) -> bool:
        return self.sub.gb().contains_vec(_poly_vec(self.ring(f)))

    def is_zero(self) -> bool:
        return self.sub.is_zero()

    def __eq__(self, other):
        if not isinstance(other, Ideal):
            return NotImplemented
        return self.sub.same_as(other.sub)

    def __hash__(self):
        return hash(self.sub)

    def __str__(self):
        return "(" + ", ".join(str(f) for f in self.gb_polys()) + ")"

    __repr__ = __str__


class FPModule:
    """``F / K`` for a graded free module ``F`` and relation submodule ``K``.

    ``embedding`` optionally records images of the free generators in ``R``
    when the module was built as an ideal; it is bookkeeping only.
    """

    def __init__(self, free: FreeModule, relations: Submodule, embedding=None, name: str = ""):
        if relations.free.rank != free.rank or relations.free.ring != free.ring:
            raise RingMismatchError("relations live in a different free module")
        self.free = free
        self.relations = relations
        self.embedding = embedding
        self.name = name
        self._hs = None

    # constructors

    @classmethod
    def free_module(cls, ring: PolynomialRing, rank: int = 1, shifts=None) -> "FPModule":
        free = FreeModule(ring, rank, shifts)
        return cls(free, Submodule.from_vecs(free, []))

    @classmethod
    def quotient_ring(cls, ring: PolynomialRing, ideal_gens: Iterable) -> "FPModule":
        polys = [ring(g) for g in ideal_gens]
        require_homogeneous(polys, "ideal generator")
        free = FreeModule(ring, 1)
        return cls(free, Submodule.from_vecs(free, [_poly_vec(f) for f in polys if f]))

    @classmethod
    def ideal_as_module(cls, ring: PolynomialRing, gens: Iterable) -> "FPModule":
        """The ideal ``(gens)`` as a module, presented by the relations of ``gens``."""
        polys = [ring(g) for g in gens]
        require_homogeneous(polys, "ideal generator")
        if any(f.is_zero() for f in polys):
            raise PreconditionError("ideal generators must be nonzero")
        cover = FreeModule(ring, 1)
        vecs = [_poly_vec(f) for f in polys]
        degs = [f.degree() for f in polys]
        free = FreeModule(ring, len(polys), degs)
        zero = _zero_exps(ring)
        rows = [(v, {(i, zero): 1}) for i, v in enumerate(vecs)]
        syz = eliminate(cover, free, rows)
        return cls(free, Submodule.from_vecs(free, syz), embedding=polys)

    @classmethod
    def cokernel(cls, free: FreeModule, relations: Iterable) -> "FPModule":
        return cls(free, Submodule(free, relations))

    # basic invariants

    @property
    def ring(self) -> PolynomialRing:
        return self.free.ring

    def hilbert_series(self) -> HilbertSeries:
        if self._hs is None:
            self._hs = self.relations.gb().hilbert_series()
        return self._hs

    def length(self):
        return self.hilbert_series().length()

    def krull_dim(self) -> int:
        """Krull dimension; ``-1`` for the zero module."""
        return self.hilbert_series().dimension()

    def is_zero(self) -> bool:
        return self.hilbert_series().is_zero()

    def multiplicity(self, elements: Sequence[Polynomial], check: bool = True) -> int:
        return multiplicity_of_series(self.hilbert_series(), elements,
                                      (lambda: self.quotient_by_elements(elements)) if check else None)

    # derived modules

    def quotient_by_elements(self, elems: Sequence[Polynomial]) -> "FPModule":
        """``M / (elems) M``."""
        elems = [self.ring(f) for f in elems]
        require_homogeneous(elems, "element")
        p = self.ring.field.characteristic
        extra = []
        for f in elems:
            c = poly_coeffs(f)
            for j in range(self.free.rank):
                v = vec_mul_poly(_unit_vec(self.ring, j), c, p)
                if v:
                    extra.append(v)
        rel = Submodule.from_vecs(self.free, self.relations.vecs + extra)
        return FPModule(self.free, rel, self.embedding)

    def submodule(self, gens: Iterable) -> "SubmoduleOfModule":
        vecs = []
        for g in gens:
            if isinstance(g, dict):
                vecs.append(g)
            elif isinstance(g, FreeModuleElement):
                vecs.append(_to_vec(g)[0])
            elif isinstance(g, (list, tuple)):
                vecs.append(_to_vec(self.free.element(g))[0])
            else:
                if self.free.rank != 1:
                    raise ValueError("a bare polynomial names an element only of a cyclic module")
                vecs.append(_poly_vec(self.ring(g)))
        return SubmoduleOfModule(self, vecs)

    def zero_submodule(self) -> "SubmoduleOfModule":
        return SubmoduleOfModule(self, [])

    def whole(self) -> "SubmoduleOfModule":
        return SubmoduleOfModule(self, [_unit_vec(self.ring, j) for j in range(self.free.rank)])

    def times_ideal(self, elems: Sequence[Polynomial]) -> "SubmoduleOfModule":
        """The submodule ``(elems) M``."""
        p = self.ring.field.characteristic
        vecs = []
        for f in elems:
            c = poly_coeffs(self.ring(f))
            for j in range(self.free.rank):
                v = vec_mul_poly(_unit_vec(self.ring, j), c, p)
                if v:
                    vecs.append(v)
        return SubmoduleOfModule(self, vecs)

    def annihilator(self) -> Ideal:
        return self.whole().annihilator()

    def __repr__(self):
        label = f" {self.name}" if self.name else ""
        return f"FPModule{label}(rank={self.free.rank}, {len(self.relations.vecs)} relations)"


class SubmoduleOfModule:
    """The submodule ``(N + K) / K`` of ``M = F / K`` spanned by vectors of ``F``."""

    def __init__(self, parent: FPModule, vecs: Iterable[dict]):
        self.parent = parent
        self.vecs = [v for v in vecs if v]
        self._full = None

    @property
    def free(self) -> FreeModule:
        return self.parent.free

    @property
    def ring(self) -> PolynomialRing:
        return self.parent.ring

    def full(self) -> Submodule:
        """``N + K`` as a submodule of the free cover."""
        if self._full is None:
            self._full = Submodule.from_vecs(self.free, self.vecs + self.parent.relations.vecs)
        return self._full

    @property
    def generators(self) -> list[FreeModuleElement]:
        return Submodule.from_vecs(self.free, self.vecs).generators

    def _same_parent(self, other: "SubmoduleOfModule"):
        if other.free != self.free or not other.parent.relations.same_as(self.parent.relations):
            raise RingMismatchError("submodules of different modules")

    def contains(self, elem) -> bool:
        vec = _to_vec(elem)[0] if isinstance(elem, FreeModuleElement) else elem
        return self.full().gb().contains_vec(vec)

    def contains_submodule(self, other: "SubmoduleOfModule") -> bool:
        gb = self.full().gb()
        return all(gb.contains_vec(v) for v in other.vecs)

    def same_as(self, other: "SubmoduleOfModule") -> bool:
        self._same_parent(other)
        return self.full().same_as(other.full())

    def __eq__(self, other):
        if not isinstance(other, SubmoduleOfModule):
            return NotImplemented
        return self.same_as(other)

    def __hash__(self):
        return hash(self.full())

    def is_zero(self) -> bool:
        return self.parent.relations.contains_submodule(Submodule.from_vecs(self.free, self.vecs))

    def __add__(self, other: "SubmoduleOfModule") -> "SubmoduleOfModule":
        self._same_parent(other)
        return SubmoduleOfModule(self.parent, self.vecs + other.vecs)

    def times_ideal(self, elems: Sequence[Polynomial]) -> "SubmoduleOfModule":
        p = self.ring.field.characteristic
        vecs = []
        for f in elems:
            c = poly_coeffs(self.ring(f))
            vecs.extend(vec_mul_poly(v, c, p) for v in self.vecs)
        return SubmoduleOfModule(self.parent, vecs)

    # lengths

    def hilbert_series(self) -> HilbertSeries:
        return self.parent.hilbert_series() - self.full().gb().hilbert_series()

    def length(self):
        return self.hilbert_series().length()

    def krull_dim(self) -> int:
        return self.hilbert_series().dimension()

    # operations

    def colon(self, f: Polynomial, k: int = 1) -> "SubmoduleOfModule":
        """``{v in M : f^k v in N}``."""
        f = self.ring(f)
        require_homogeneous([f], "element")
        if k < 1:
            raise ValueError("k must be positive")
        g = f ** k
        c = poly_coeffs(g)
        p = self.ring.field.characteristic
        dg = g.degree()
        aug = FreeModule(self.ring, self.free.rank, [s + dg for s in self.free.shifts])
        rows = []
        for j in range(self.free.rank):
            u = _unit_vec(self.ring, j)
            rows.append((vec_mul_poly(u, c, p), u))
        for v in self.full().vecs:
            if v:
                rows.append((v, {}))
        out = eliminate(self.free, aug, rows)
        return SubmoduleOfModule(self.parent, out)

    def saturate(self, f) -> tuple["SubmoduleOfModule", int]:
        """``N : f^infinity`` and the least ``n`` with ``N : f^n = N : f^(n+1)``.

        With ``f = MAXIMAL_IDEAL`` the result is the intersection of the
        saturations by the individual variables and the exponent is their
        maximum.
        """
        if isinstance(f, str) and f == MAXIMAL_IDEAL:
            result = None
            exps = []
            for x in self.ring.gens:
                s, e = self.saturate(x)
                exps.append(e)
                result = s if result is None else result.intersect(s)
            if result is None:
                return self, 0
            return result, max(exps)
        f = self.ring(f)
        cur = self
        n = 0
        while True:
            nxt = cur.colon(f)
            if nxt.full().same_as(cur.full()):
                return cur, n
            cur = nxt
            n += 1

    def saturation_exponents(self) -> dict:
        return {str(x): self.saturate(x)[1] for x in self.ring.gens}

    def intersect(self, other: "SubmoduleOfModule") -> "SubmoduleOfModule":
        """``(N1 + K) ∩ (N2 + K)`` modulo ``K``."""
        self._same_parent(other)
        a = self.full().nonzero_vecs()
        b = other.full().nonzero_vecs()
        rows = [(v, v) for v in a] + [(v, {}) for v in b]
        out = eliminate(self.free, self.free, rows)
        return SubmoduleOfModule(self.parent, out)

    def annihilator(self) -> Ideal:
        """``{a in R : a N ⊆ K}`` as the intersection of ``K : g`` over generators."""
        ring = self.ring
        result = None
        for g in self.vecs:
            aug = FreeModule(ring, 1, [vec_degree(self.free, g)])
            rows = [(g, _unit_vec(ring, 0))] + [(v, {}) for v in self.parent.relations.vecs if v]
            ideal = Submodule.from_vecs(FreeModule(ring, 1), eliminate(self.free, aug, rows))
            if result is None:
                result = ideal
            else:
                rows = [(v, v) for v in result.nonzero_vecs()] + [(v, {}) for v in ideal.nonzero_vecs()]
                one = FreeModule(ring, 1)
                result = Submodule.from_vecs(one, eliminate(one, one, rows))
        if result is None:
            return Ideal(ring, [ring.one])
        return Ideal.from_submodule(result)

    def as_module(self) -> FPModule:
        """A presentation of ``(N + K) / K`` on the generators of ``N``."""
        return present_subquotient(self.free, self.vecs, self.parent.relations.vecs)

    def quotient_module(self) -> FPModule:
        """``M / N``."""
        return FPModule(self.free, self.full(), self.parent.embedding)

    def subquotient_over(self, smaller: "SubmoduleOfModule") -> FPModule:
        """Presentation of ``self / smaller`` (``smaller`` must be contained in ``self``)."""
        return present_subquotient(self.free, self.vecs, smaller.full().vecs)

    def image_in_ring(self) -> Ideal:
        """For a module built as an ideal: the image of the submodule in ``R``."""
        emb = self.parent.embedding
        if emb is None:
            raise PreconditionError("module carries no embedding into the ring")
        p = self.ring.field.characteristic
        coeffs = [poly_coeffs(g) for g in emb]
        vecs = []
        for v in self.vecs:
            out: dict = {}
            for (pos, e), c in v.items():
                for m, a in coeffs[pos].items():
                    k = (0, tuple(x + y for x, y in zip(e, m)))
                    out[k] = out.get(k, 0) + a * c
            if p:
                out = {k: x % p for k, x in out.items() if x % p}
            else:
                out = {k: x for k, x in out.items() if x}
            if out:
                vecs.append(out)
        return Ideal.from_submodule(Submodule.from_vecs(FreeModule(self.ring, 1), vecs))

    def __repr__(self):
        return f"SubmoduleOfModule({len(self.vecs)} generators)"


def present_subquotient(free: FreeModule, gen_vecs: Sequence[dict], rel_vecs: Sequence[dict]) -> FPModule:
    """Present ``(span(gens) + span(rels)) / span(rels)`` on the given generators.

    The relations are the vectors ``a`` with ``sum a_i g_i`` in the span of
    ``rels``; they are found in one elimination.
    """
    ring = free.ring
    gens = [g for g in gen_vecs if g]
    target = FreeModule(ring, len(gens), [vec_degree(free, g) for g in gens])
    zero = _zero_exps(ring)
    rows = [(g, {(i, zero): 1}) for i, g in enumerate(gens)]
    rows += [(r, {}) for r in rel_vecs if r]
    rel = eliminate(free, target, rows) if gens else []
    return FPModule(target, Submodule.from_vecs(target, rel))


def quotient_by_elements(M: FPModule, elems: Sequence[Polynomial]) -> FPModule:
    return M.quotient_by_elements(elems)


def colon(N: SubmoduleOfModule, f: Polynomial, k: int = 1) -> SubmoduleOfModule:
    return N.colon(f, k)


def saturate(N: SubmoduleOfModule, f) -> tuple[SubmoduleOfModule, int]:
    return N.saturate(f)


def intersect(N1: SubmoduleOfModule, N2: SubmoduleOfModule) -> SubmoduleOfModule:
    return N1.intersect(N2)


def annihilator(M) -> Ideal:
    if isinstance(M, SubmoduleOfModule):
        return M.annihilator()
    return M.annihilator()


def length(M):
    return M.length()


def krull_dim(M) -> int:
    return M.krull_dim()


def multiplicity_of_series(hs: HilbertSeries, elements: Sequence[Polynomial], quotient=None) -> int:
    """Koszul Euler characteristic of ``elements`` on a module with series ``hs``.

    ``quotient`` (a thunk returning ``N / (elements) N``) is used to check
    that the quotient has finite length; without it the caller vouches.
    """
    degrees = [f.degree() for f in elements]
    if any(d <= 0 for d in degrees):
        raise PreconditionError("sequence elements must have positive degree")
    if hs.is_zero():
        return 0
    if quotient is not None:
        q = quotient()
        if q.length() is INFINITE:
            raise InfiniteLengthError("module modulo the sequence has infinite length")
    if not elements:
        value = hs.length()
        if value is INFINITE:
            raise InfiniteLengthError("empty sequence on a module of positive dimension")
        return value
    try:
        return hs.multiplicity(degrees)
    except ArithmeticError as exc:
        raise InfiniteLengthError(str(exc)) from None


# ---------------------------------------------------------------------------
# systems of parameters and Cohen-Macaulayness


def is_system_of_parameters(M: FPModule, x: Sequence[Polynomial], partial: bool = False) -> bool:
    x = [M.ring(f) for f in x]
    if any(f.degree() <= 0 for f in x):
        return False
    d = M.krull_dim()
    if partial:
        for i in range(1, len(x) + 1):
            if M.quotient_by_elements(x[:i]).krull_dim() != d - i:
                return False
        return True
    if len(x) != d:
        return False
    return M.quotient_by_elements(x).length() is not INFINITE


def _candidates(ring: PolynomialRing, degree: int, coeff_range: int):
    n = ring.nvars
    monos = [ring.var(i) ** degree for i in range(n)]
    yield from monos
    values = [c for a in range(1, coeff_range + 1) for c in (a, -a)]
    for size in range(2, n + 1):
        for combo in itertools.combinations(range(n), size):
            for coeffs in itertools.product(values, repeat=size - 1):
                f = monos[combo[0]]
                for c, i in zip(coeffs, combo[1:]):
                    f = f + ring.constant(c) * monos[i]
                yield f


def find_sop(M: FPModule, max_degree: int = 3, coeff_range: int = 2, avoid=()) -> list[Polynomial]:
    """Deterministic greedy search for a homogeneous system of parameters.

    Each step picks the first candidate that drops the dimension: variables
    first, then small integer combinations, then higher-degree powers.
    """
    d = M.krull_dim()
    if d <= 0:
        return []
    chosen: list[Polynomial] = []
    current = M
    p = M.ring.field.characteristic
    ranges = [coeff_range] if not p else [min(coeff_range, max(p // 2, 1)), max(p // 2, 1)]
    while len(chosen) < d:
        target = d - len(chosen) - 1
        found = None
        for deg in range(1, max_degree + 1):
            for cr in ranges:
                for f in _candidates(M.ring, deg, cr):
                    if f in avoid:
                        continue
                    if current.quotient_by_elements([f]).krull_dim() == target:
                        found = f
                        break
                if found is not None:
                    break
            if found is not None:
                break
        if found is None:
            raise SearchFailure(f"no parameter found after {len(chosen)} elements")
        chosen.append(found)
        current = current.quotient_by_elements([found])
    return chosen


def chi1_via_multiplicity(M: FPModule, x: Sequence[Polynomial]) -> int:
    """``l(M / xM) - e(x; M)``."""
    q = M.quotient_by_elements(x).length()
    if q is INFINITE:
        raise InfiniteLengthError("sequence is not a system of parameters")
    return q - multiplicity_of_series(M.hilbert_series(), x)


def is_cohen_macaulay(M: FPModule, sop: Sequence[Polynomial] | None = None) -> bool:
    """``chi_1(x; M) = 0`` for a system of parameters ``x`` (found if not given)."""
    if M.krull_dim() <= 0:
        return True
    x = list(sop) if sop is not None else find_sop(M)
    return chi1_via_multiplicity(M, x) == 0


def h0_submodule(M: FPModule) -> SubmoduleOfModule:
    """``H^0_m(M) = 0 :_M m^infinity``."""
    return M.zero_submodule().saturate(MAXIMAL_IDEAL)[0]


def h0_length(M: FPModule) -> int:
    """Length of ``H^0_m(M)``; always finite."""
    if M.krull_dim() <= 0:
        value = M.length()
        return 0 if value is INFINITE else value
    return h0_submodule(M).length()
