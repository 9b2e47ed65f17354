"""Groebner bases for graded submodules of free modules.

Vectors are stored internally as dictionaries ``{(position, exponents): c}``.
Over the rationals the engine works fraction-free: coefficients are Python
integers and every basis element is kept primitive with a positive leading
coefficient.  Over ``GF(p)`` coefficients are residues and basis elements
are monic.  Both normalisations make reduced bases canonical, so submodule
equality is a plain comparison of reduced bases.

Inputs must be homogeneous, which lets Buchberger's algorithm run degree by
degree and makes the basis it produces minimal without extra work.
"""

from __future__ import annotations

import heapq
from collections import defaultdict
from fractions import Fraction
from math import gcd
from operator import add, ge, sub
from typing import Iterable, Sequence

from .algebra import Polynomial, PolynomialRing
from .errors import NotHomogeneousError, ResourceBudgetExceeded, RingMismatchError

DEFAULT_MAX_PAIRS = 2_000_000


class _Infinite:
    """Marker for an infinite length."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITE"

    __str__ = __repr__

    def __reduce__(self):
        return (_Infinite, ())


INFINITE = _Infinite()


def is_infinite(value) -> bool:
    return value is INFINITE


# ---------------------------------------------------------------------------
# free modules and their elements


class FreeModule:
    """``R^rank`` with basis vector ``e_i`` placed in degree ``shifts[i]``."""

    def __init__(self, ring: PolynomialRing, rank: int, shifts: Sequence[int] | None = None):
        if rank < 0:
            raise ValueError("rank must be nonnegative")
        shifts = tuple(int(s) for s in shifts) if shifts is not None else (0,) * rank
        if len(shifts) != rank:
            raise ValueError("one shift per basis vector is required")
        if any(s < 0 for s in shifts):
            raise ValueError("degree shifts must be nonnegative")
        self.ring = ring
        self.rank = rank
        self.shifts = shifts

    def __eq__(self, other):
        return (isinstance(other, FreeModule) and self.ring == other.ring
                and self.rank == other.rank and self.shifts == other.shifts)

    def __hash__(self):
        return hash((self.ring, self.rank, self.shifts))

    def __repr__(self):
        return f"FreeModule(rank={self.rank}, shifts={list(self.shifts)})"

    def basis(self, i: int) -> "FreeModuleElement":
        one = self.ring.field.convert(1)
        return FreeModuleElement(self, {(i, (0,) * self.ring.nvars): one})

    def zero(self) -> "FreeModuleElement":
        return FreeModuleElement(self, {})

    def element(self, components: Sequence) -> "FreeModuleElement":
        if len(components) != self.rank:
            raise ValueError(f"expected {self.rank} components, got {len(components)}")
        terms = {}
        for pos, comp in enumerate(components):
            comp = self.ring(comp)
            for e, c in comp.as_dict().items():
                terms[(pos, e)] = c
        return FreeModuleElement(self, terms)

    def direct_sum(self, other: "FreeModule") -> "FreeModule":
        if self.ring != other.ring:
            raise RingMismatchError("free modules over different rings")
        return FreeModule(self.ring, self.rank + other.rank, self.shifts + other.shifts)

    def term_degree(self, term) -> int:
        return self.ring.wdeg(term[1]) + self.shifts[term[0]]


class FreeModuleElement:
    """An element of a free module with exact field coefficients."""

    __slots__ = ("free", "terms")

    def __init__(self, free: FreeModule, terms: dict):
        self.free = free
        self.terms = {t: c for t, c in terms.items() if c != 0}

    @property
    def rank(self) -> int:
        return self.free.rank

    def components(self) -> list[Polynomial]:
        parts: list[dict] = [{} for _ in range(self.free.rank)]
        for (pos, e), c in self.terms.items():
            parts[pos][e] = c
        return [Polynomial(self.free.ring, p) for p in parts]

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int | None:
        """Common degree of the terms, ``None`` for zero; raises if mixed."""
        degs = {self.free.term_degree(t) for t in self.terms}
        if not degs:
            return None
        if len(degs) > 1:
            raise NotHomogeneousError(f"vector {self} is not homogeneous")
        return degs.pop()

    def _check(self, other):
        if not isinstance(other, FreeModuleElement) or other.free.ring != self.free.ring \
                or other.free.rank != self.free.rank:
            raise RingMismatchError("vectors from different free modules")

    def __add__(self, other):
        self._check(other)
        return FreeModuleElement(self.free, _field_combine(self.free.ring, self.terms, other.terms, 1))

    def __sub__(self, other):
        self._check(other)
        return FreeModuleElement(self.free, _field_combine(self.free.ring, self.terms, other.terms, -1))

    def __neg__(self):
        return FreeModuleElement(self.free, _field_combine(self.free.ring, {}, self.terms, -1))

    def __rmul__(self, f):
        ring = self.free.ring
        f = ring(f)
        p = ring.field.characteristic
        out: dict = {}
        for m, a in f.as_dict().items():
            for (pos, e), c in self.terms.items():
                k = (pos, tuple(map(add, e, m)))
                out[k] = out.get(k, 0) + a * c
        if p:
            out = {k: v % p for k, v in out.items()}
        return FreeModuleElement(self.free, out)

    def __eq__(self, other):
        if not isinstance(other, FreeModuleElement):
            return NotImplemented
        return self.free == other.free and self.terms == other.terms

    def __hash__(self):
        return hash((self.free, frozenset(self.terms.items())))

    def __str__(self):
        return "(" + ", ".join(str(c) for c in self.components()) + ")"

    def __repr__(self):
        return f"FreeModuleElement{self}"


def _field_combine(ring, a: dict, b: dict, sign: int) -> dict:
    p = ring.field.characteristic
    out = dict(a)
    for t, c in b.items():
        v = out.get(t, 0) + sign * c
        if p:
            v %= p
        if v:
            out[t] = v
        else:
            out.pop(t, None)
    return out


# ---------------------------------------------------------------------------
# internal vector helpers


def _to_vec(elem: FreeModuleElement) -> tuple[dict, int]:
    """Return ``(v, s)`` with integer coefficients and ``v = s * elem``."""
    p = elem.free.ring.field.characteristic
    if p:
        return dict(elem.terms), 1
    den = 1
    for c in elem.terms.values():
        d = Fraction(c).denominator
        den = den * d // gcd(den, d)
    return {t: int(Fraction(c) * den) for t, c in elem.terms.items()}, den


def _from_vec(free: FreeModule, vec: dict, scale=1) -> FreeModuleElement:
    p = free.ring.field.characteristic
    if p:
        inv = pow(int(scale) % p, -1, p) if scale != 1 else 1
        return FreeModuleElement(free, {t: c * inv % p for t, c in vec.items()})
    return FreeModuleElement(free, {t: Fraction(c) / scale for t, c in vec.items()})


def vec_degree(free: FreeModule, vec: dict) -> int:
    t = next(iter(vec))
    return free.ring.wdeg(t[1]) + free.shifts[t[0]]


def check_homogeneous(free: FreeModule, vec: dict):
    degs = {free.ring.wdeg(e) + free.shifts[pos] for pos, e in vec}
    if len(degs) > 1:
        raise NotHomogeneousError(f"vector {_from_vec(free, vec)} is not homogeneous")


def vec_scale(vec: dict, a: int, p: int) -> dict:
    if p:
        a %= p
        return {t: c * a % p for t, c in vec.items()} if a else {}
    return {t: c * a for t, c in vec.items()} if a else {}


def vec_mul_poly(vec: dict, poly: dict, p: int) -> dict:
    """``poly * vec`` with ``poly`` an ``{exps: coeff}`` dictionary."""
    out: dict = {}
    for m, a in poly.items():
        for (pos, e), c in vec.items():
            k = (pos, tuple(map(add, e, m)))
            out[k] = out.get(k, 0) + a * c
    if p:
        return {k: v % p for k, v in out.items() if v % p}
    return {k: v for k, v in out.items() if v}


def vec_add(a: dict, b: dict, p: int, sign: int = 1) -> dict:
    out = dict(a)
    for t, c in b.items():
        v = out.get(t, 0) + sign * c
        if p:
            v %= p
        if v:
            out[t] = v
        else:
            out.pop(t, None)
    return out


def vec_shift_pos(vec: dict, offset: int) -> dict:
    return {(pos + offset, e): c for (pos, e), c in vec.items()}


def poly_coeffs(f: Polynomial) -> dict:
    """Integer (or residue) coefficient dictionary of a polynomial, up to a unit."""
    p = f.ring.field.characteristic
    terms = f.as_dict()
    if p:
        return dict(terms)
    den = 1
    for c in terms.values():
        d = Fraction(c).denominator
        den = den * d // gcd(den, d)
    return {e: int(Fraction(c) * den) for e, c in terms.items()}


def _content(values) -> int:
    g = 0
    for v in values:
        g = gcd(g, v)
        if g == 1:
            return 1
    return g


# ---------------------------------------------------------------------------
# term orders


def make_sort_key(ring: PolynomialRing, shifts: Sequence[int], kind: str):
    """Sort key on terms ``(pos, exps)``: smaller key means larger term.

    ``pot`` compares positions first (lower index wins), ``top`` compares
    shifted degree, then the monomial, then position.
    """
    wdeg = ring.wdeg
    lex = ring.order == "lex"
    if kind == "pot":
        if lex:
            def key(t):
                return (t[0],) + tuple(-a for a in t[1])
        else:
            def key(t):
                e = t[1]
                return (t[0], -wdeg(e)) + e[::-1]
    elif kind == "top":
        if lex:
            def key(t):
                e = t[1]
                return (-(wdeg(e) + shifts[t[0]]),) + tuple(-a for a in e) + (t[0],)
        else:
            def key(t):
                e = t[1]
                return (-(wdeg(e) + shifts[t[0]]), -wdeg(e)) + e[::-1] + (t[0],)
    else:
        raise ValueError(f"unknown module order {kind!r}")
    return key


def leading_term(vec: dict, key):
    return min(vec, key=key)


# ---------------------------------------------------------------------------
# reduction


class _Index:
    """Leading terms of a basis, bucketed by position, for divisor lookup."""

    def __init__(self):
        self.by_pos: dict = defaultdict(list)

    def add(self, lead_exps, lead_coeff, vec, pos):
        self.by_pos[pos].append((lead_exps, lead_coeff, vec))

    def find(self, term, skip=None):
        for le, lc, g in self.by_pos.get(term[0], ()):
            if g is not skip and all(map(ge, term[1], le)):
                return le, lc, g
        return None


def _reduce(vec: dict, index: _Index, key, p: int, skip=None):
    """Full reduction.  Returns ``(r, s)`` with ``s * vec - r`` in the span.

    ``s`` is an integer (a Fraction after content removal) over the
    rationals and ``1`` over prime fields.
    """
    f = dict(vec)
    r: dict = {}
    scale = Fraction(1) if not p else 1
    heap = [(key(t), t) for t in f]
    heapq.heapify(heap)
    queued = set(f)
    while heap:
        _, t = heapq.heappop(heap)
        queued.discard(t)
        c = f.get(t)
        if not c:
            continue
        div = index.find(t, skip)
        if div is None:
            r[t] = c
            del f[t]
            continue
        le, lc, g = div
        m = tuple(map(sub, t[1], le))
        if p:
            b = c * pow(lc, -1, p) % p if lc != 1 else c
            for (gp, ge_), gc in g.items():
                k = (gp, tuple(map(add, ge_, m)))
                v = (f.get(k, 0) - b * gc) % p
                if v:
                    f[k] = v
                    if k not in queued:
                        queued.add(k)
                        heapq.heappush(heap, (key(k), k))
                else:
                    f.pop(k, None)
        else:
            gg = gcd(c, lc)
            a = lc // gg
            b = c // gg
            if a < 0:
                a, b = -a, -b
            if a != 1:
                for k in f:
                    f[k] *= a
                for k in r:
                    r[k] *= a
                scale *= a
            for (gp, ge_), gc in g.items():
                k = (gp, tuple(map(add, ge_, m)))
                v = f.get(k, 0) - b * gc
                if v:
                    f[k] = v
                    if k not in queued:
                        queued.add(k)
                        heapq.heappush(heap, (key(k), k))
                else:
                    f.pop(k, None)
            if a != 1:
                cont = _content(list(f.values()) + list(r.values()))
                if cont > 1:
                    for k in f:
                        f[k] //= cont
                    for k in r:
                        r[k] //= cont
                    scale /= cont
    return r, scale


def _normalize(vec: dict, key, p: int) -> dict:
    lt = min(vec, key=key)
    lc = vec[lt]
    if p:
        if lc == 1:
            return vec
        inv = pow(lc, -1, p)
        return {t: c * inv % p for t, c in vec.items()}
    cont = _content(vec.values())
    if lc < 0:
        cont = -cont
    if cont == 1:
        return vec
    return {t: c // cont for t, c in vec.items()}


# ---------------------------------------------------------------------------
# Buchberger


def _lcm(a, b):
    return tuple(x if x > y else y for x, y in zip(a, b))


def _divides(a, b):
    return all(map(ge, b, a))


def _coprime(a, b):
    return not any(x and y for x, y in zip(a, b))


def compute_groebner(free: FreeModule, vecs: Iterable[dict], kind: str = "pot",
                     max_pairs: int = DEFAULT_MAX_PAIRS, max_degree: int | None = None,
                     reduced: bool = True) -> list[dict]:
    """Degree-by-degree Buchberger on homogeneous vectors.

    Uses the normal selection strategy (all pairs of the lowest degree
    first) with the Gebauer-Moeller installation of Buchberger's criteria.
    The coprime-leading-term criterion is only applied in rank one.
    """
    ring = free.ring
    p = ring.field.characteristic
    key = make_sort_key(ring, free.shifts, kind)
    wdeg = ring.wdeg
    shifts = free.shifts
    rank_one = free.rank == 1

    pending: dict = defaultdict(list)
    for v in vecs:
        if v:
            check_homogeneous(free, v)
            pending[vec_degree(free, v)].append(v)

    basis: list[dict] = []
    leads: list = []
    lead_coeffs: list = []
    index = _Index()
    pairs: dict = defaultdict(list)
    processed = 0

    def install(h):
        lt = min(h, key=key)
        hi = len(basis)
        basis.append(h)
        leads.append(lt)
        lead_coeffs.append(h[lt])
        index.add(lt[1], h[lt], h, lt[0])
        pos_h, eh = lt
        cand = []
        for i in range(hi):
            if leads[i][0] == pos_h:
                ei = leads[i][1]
                cand.append((i, _lcm(ei, eh), rank_one and _coprime(ei, eh)))
        kept = []
        for idx, (i, L, cop) in enumerate(cand):
            if cop:
                kept.append((i, L, True))
                continue
            if any(_divides(L2, L) for _, L2, _ in cand[idx + 1:]):
                continue
            if any(_divides(L2, L) for _, L2, _ in kept):
                continue
            kept.append((i, L, False))
        for deg in list(pairs):
            lst = pairs[deg]
            new = []
            for (i, j, L) in lst:
                if leads[i][0] == pos_h and _divides(eh, L):
                    if _lcm(leads[i][1], eh) != L and _lcm(leads[j][1], eh) != L:
                        continue
                new.append((i, j, L))
            if new:
                pairs[deg] = new
            else:
                del pairs[deg]
        for i, L, cop in kept:
            if not cop:
                pairs[wdeg(L) + shifts[pos_h]].append((i, hi, L))

    def spoly(i, j, L):
        gi, gj = basis[i], basis[j]
        ci, cj = lead_coeffs[i], lead_coeffs[j]
        mi = tuple(map(sub, L, leads[i][1]))
        mj = tuple(map(sub, L, leads[j][1]))
        if p:
            a, b = cj, ci
        else:
            gg = gcd(ci, cj)
            a, b = cj // gg, ci // gg
        out: dict = {}
        for (pos, e), c in gi.items():
            k = (pos, tuple(map(add, e, mi)))
            out[k] = out.get(k, 0) + a * c
        for (pos, e), c in gj.items():
            k = (pos, tuple(map(add, e, mj)))
            out[k] = out.get(k, 0) - b * c
        if p:
            return {k: v % p for k, v in out.items() if v % p}
        return {k: v for k, v in out.items() if v}

    while pending or pairs:
        D = min(set(pending) | set(pairs))
        if max_degree is not None and D > max_degree:
            raise ResourceBudgetExceeded(f"Groebner basis degree {D} exceeds cap {max_degree}")
        work = []
        todo = sorted(pairs.pop(D, []), key=lambda q: (key((leads[q[0]][0], q[2])), q[0], q[1]))
        processed += len(todo)
        if processed > max_pairs:
            raise ResourceBudgetExceeded(f"more than {max_pairs} S-pairs processed")
        for i, j, L in todo:
            work.append(spoly(i, j, L))
        work.extend(pending.pop(D, []))
        for f in work:
            if not f:
                continue
            h, _ = _reduce(f, index, key, p)
            if h:
                install(_normalize(h, key, p))

    if reduced:
        out = []
        final_index = index
        for g in basis:
            h, _ = _reduce(g, final_index, key, p, skip=g)
            out.append(_normalize(h, key, p))
        basis = out
    basis.sort(key=lambda g: key(min(g, key=key)))
    return basis


class GroebnerBasis:
    """A (by default reduced) Groebner basis of a submodule of ``free``."""

    def __init__(self, free: FreeModule, vecs: list[dict], kind: str, reduced: bool,
                 source: "Submodule | None" = None):
        self.free = free
        self.kind = kind
        self.reduced = reduced
        self.source = source
        self.vecs = vecs
        self.key = make_sort_key(free.ring, free.shifts, kind)
        self.p = free.ring.field.characteristic
        self.leads = [min(v, key=self.key) for v in vecs]
        self._index = None

    def __getstate__(self):
        state = dict(self.__dict__)
        state["key"] = None
        state["_index"] = None
        return state

    def __setstate__(self, state):
        self.__dict__.update(state)
        self.key = make_sort_key(self.free.ring, self.free.shifts, self.kind)

    @property
    def index(self) -> _Index:
        if self._index is None:
            idx = _Index()
            for v, lt in zip(self.vecs, self.leads):
                idx.add(lt[1], v[lt], v, lt[0])
            self._index = idx
        return self._index

    @property
    def elements(self) -> list[FreeModuleElement]:
        return [_from_vec(self.free, v) for v in self.vecs]

    def __len__(self):
        return len(self.vecs)

    def reduce_vec(self, vec: dict):
        return _reduce(vec, self.index, self.key, self.p)

    def contains_vec(self, vec: dict) -> bool:
        if not vec:
            return True
        r, _ = self.reduce_vec(vec)
        return not r

    def canonical(self) -> tuple:
        """Hashable canonical form; equal for equal submodules when reduced."""
        return tuple(tuple(sorted(v.items())) for v in self.vecs)

    def leading_ideals(self) -> list[list[tuple]]:
        out: list[list] = [[] for _ in range(self.free.rank)]
        for pos, e in self.leads:
            out[pos].append(e)
        return out

    def hilbert_series(self) -> "HilbertSeries":
        """Hilbert series of ``free / span``."""
        ring = self.free.ring
        num: tuple = ()
        for pos, ideal in enumerate(self.leading_ideals()):
            part = monomial_numerator(ideal, ring.weights)
            num = _padd(num, _pshift(part, self.free.shifts[pos]))
        return HilbertSeries(num, ring.weights)


# ---------------------------------------------------------------------------
# submodules


class Submodule:
    """The span of finitely many homogeneous vectors in a free module.

    Generators are stored internally with integer coefficients, each equal
    to a positive integer multiple of the user-supplied vector.
    """

    def __init__(self, free: FreeModule, generators: Iterable = ()):
        vecs, scales = [], []
        for g in generators:
            if isinstance(g, FreeModuleElement):
                if g.free.ring != free.ring or g.free.rank != free.rank:
                    raise RingMismatchError("generator from a different free module")
                v, s = _to_vec(g)
            else:
                v, s = _to_vec(free.element(g))
            if v:
                check_homogeneous(free, v)
            vecs.append(v)
            scales.append(s)
        self._init(free, vecs, scales)

    def _init(self, free, vecs, scales=None):
        self.free = free
        self.vecs = list(vecs)
        self.scales = list(scales) if scales is not None else [1] * len(self.vecs)
        self._gbs: dict = {}

    @classmethod
    def from_vecs(cls, free: FreeModule, vecs: Iterable[dict]) -> "Submodule":
        obj = cls.__new__(cls)
        obj._init(free, [v for v in vecs])
        return obj

    @property
    def rank(self) -> int:
        return self.free.rank

    @property
    def ring(self) -> PolynomialRing:
        return self.free.ring

    @property
    def generators(self) -> list[FreeModuleElement]:
        return [_from_vec(self.free, v, s) for v, s in zip(self.vecs, self.scales)]

    def nonzero_vecs(self) -> list[dict]:
        return [v for v in self.vecs if v]

    def gb(self, kind: str = "pot", max_pairs: int = DEFAULT_MAX_PAIRS,
           max_degree: int | None = None) -> GroebnerBasis:
        cached = self._gbs.get(kind)
        if cached is not None:
            return cached
        vecs = compute_groebner(self.free, self.nonzero_vecs(), kind, max_pairs, max_degree)
        gb = GroebnerBasis(self.free, vecs, kind, True, self)
        return self._gbs.setdefault(kind, gb)

    def contains(self, elem) -> bool:
        if isinstance(elem, FreeModuleElement):
            vec, _ = _to_vec(elem)
        else:
            vec = elem
        return self.gb().contains_vec(vec)

    def contains_submodule(self, other: "Submodule") -> bool:
        gb = self.gb()
        return all(gb.contains_vec(v) for v in other.vecs)

    def is_zero(self) -> bool:
        return not self.nonzero_vecs()

    def same_as(self, other: "Submodule") -> bool:
        if self.free.rank != other.free.rank or self.free.ring != other.free.ring:
            raise RingMismatchError("submodules of different free modules")
        return self.gb().canonical() == other.gb().canonical()

    def __eq__(self, other):
        if not isinstance(other, Submodule):
            return NotImplemented
        return self.same_as(other)

    def __hash__(self):
        return hash(self.gb().canonical())

    def __add__(self, other: "Submodule") -> "Submodule":
        if self.free.rank != other.free.rank:
            raise RingMismatchError("submodules of different free modules")
        obj = Submodule.from_vecs(self.free, self.vecs + other.vecs)
        obj.scales = self.scales + other.scales
        return obj

    def times(self, f: Polynomial) -> "Submodule":
        """``f`` times this submodule."""
        p = self.free.ring.field.characteristic
        c = poly_coeffs(f)
        return Submodule.from_vecs(self.free, [vec_mul_poly(v, c, p) for v in self.nonzero_vecs()])

    def hilbert_series_quotient(self) -> "HilbertSeries":
        return self.gb().hilbert_series()

    def __repr__(self):
        return f"Submodule(rank={self.rank}, {len(self.vecs)} generators)"


def buchberger(sub: Submodule, order: str = "pot", max_pairs: int = DEFAULT_MAX_PAIRS,
               max_degree: int | None = None) -> GroebnerBasis:
    """Reduced Groebner basis of ``sub`` for a position-over-term or term-over-position order."""
    return sub.gb(order, max_pairs, max_degree)


def normal_form(f: FreeModuleElement, gb: GroebnerBasis) -> FreeModuleElement:
    """Unique remainder of ``f`` modulo the submodule, with field coefficients."""
    if f.free.rank != gb.free.rank or f.free.ring != gb.free.ring:
        raise RingMismatchError("vector and basis live in different free modules")
    vec, s = _to_vec(f)
    r, t = gb.reduce_vec(vec)
    return _from_vec(gb.free, r, Fraction(s) * t if not gb.p else 1)


# ---------------------------------------------------------------------------
# elimination


def eliminate(free_a: FreeModule, free_b: FreeModule, rows: Iterable[tuple[dict, dict]],
              max_pairs: int = DEFAULT_MAX_PAIRS) -> list[dict]:
    """Span of ``rows`` in ``A + B`` intersected with ``0 + B``, projected to ``B``.

    A position-over-term order with the ``A`` block first makes every basis
    element whose leading term lies in ``B`` have zero ``A`` part, and those
    elements generate the intersection.
    """
    total = free_a.direct_sum(free_b)
    r = free_a.rank
    vecs = []
    for a, b in rows:
        v = dict(a)
        v.update(vec_shift_pos(b, r))
        if v:
            vecs.append(v)
    basis = compute_groebner(total, vecs, "pot", max_pairs)
    out = []
    key = make_sort_key(total.ring, total.shifts, "pot")
    for g in basis:
        if min(g, key=key)[0] >= r:
            out.append(vec_shift_pos(g, -r))
    return out


def syzygy_vecs(free: FreeModule, vecs: Sequence[dict]) -> tuple[FreeModule, list[dict]]:
    """Generators of the relation module of ``vecs`` in ``R^len(vecs)``."""
    ring = free.ring
    degs = [vec_degree(free, v) if v else 0 for v in vecs]
    target = FreeModule(ring, len(vecs), degs)
    zero = (0,) * ring.nvars
    rows = [(v, {(i, zero): 1}) for i, v in enumerate(vecs)]
    return target, eliminate(free, target, rows)


def syzygies(obj) -> Submodule:
    """Relation module of the generators of a submodule (or of a basis' source)."""
    sub = obj.source if isinstance(obj, GroebnerBasis) else obj
    if sub is None:
        raise ValueError("basis has no recorded generators")
    target, syz = syzygy_vecs(sub.free, sub.vecs)
    p = sub.free.ring.field.characteristic
    if any(s != 1 for s in sub.scales):
        # relations of the integer generators rescale to relations of the originals
        fixed = []
        for v in syz:
            w = {}
            for (pos, e), c in v.items():
                w[(pos, e)] = c * sub.scales[pos]
            fixed.append(w if not p else {t: c % p for t, c in w.items()})
        syz = fixed
    return Submodule.from_vecs(target, syz)


# ---------------------------------------------------------------------------
# Hilbert series


def _padd(a: tuple, b: tuple, sign: int = 1) -> tuple:
    n = max(len(a), len(b))
    out = [0] * n
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i] += sign * c
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def _pshift(a: tuple, k: int) -> tuple:
    return (0,) * k + a if a else ()


def _pmul(a: tuple, b: tuple) -> tuple:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return tuple(out)


def _one_minus_t(d: int) -> tuple:
    return (1,) + (0,) * (d - 1) + (-1,)


def _divide_exact(a: tuple, d: int):
    """Divide by ``1 - t^d``; ``None`` when the division is not exact."""
    out = list(a)
    q = [0] * max(len(a) - d, 0)
    for i in range(len(q)):
        c = out[i]
        q[i] = c
        out[i] = 0
        out[i + d] += c
    if any(out):
        return None
    while q and q[-1] == 0:
        q.pop()
    return tuple(q)


def _minimalize(gens) -> tuple:
    gens = sorted(set(gens), key=lambda e: (sum(e), e))
    out = []
    for e in gens:
        if not any(_divides(f, e) for f in out):
            out.append(e)
    return tuple(sorted(out))


_NUM_CACHE: dict = {}


def monomial_numerator(gens, weights) -> tuple:
    """Numerator of the Hilbert series of ``R / (gens)`` over ``prod(1 - t^w)``."""
    J = _minimalize(gens)
    ck = (J, tuple(weights))
    hit = _NUM_CACHE.get(ck)
    if hit is not None:
        return hit
    res = _numerator(J, tuple(weights))
    if len(_NUM_CACHE) > 200_000:
        _NUM_CACHE.clear()
    _NUM_CACHE[ck] = res
    return res


def _numerator(J: tuple, w: tuple) -> tuple:
    if not J:
        return (1,)
    if any(not any(e) for e in J):
        return ()
    mixed = [e for e in J if sum(1 for a in e if a) > 1]
    if not mixed:
        out = (1,)
        for e in J:
            out = _pmul(out, _one_minus_t(sum(a * b for a, b in zip(e, w))))
        return out
    n = len(w)
    counts = [0] * n
    for e in mixed:
        for i, a in enumerate(e):
            if a:
                counts[i] += 1
    i = max(range(n), key=lambda k: (counts[k], -k))
    a = min(e[i] for e in mixed if e[i])
    piv = tuple(a if k == i else 0 for k in range(n))
    plus = monomial_numerator(J + (piv,), w)
    colon = tuple(tuple(max(x - y, 0) for x, y in zip(e, piv)) for e in J)
    quo = monomial_numerator(colon, w)
    return _padd(plus, _pshift(quo, a * w[i]))


class HilbertSeries:
    """``numerator(t) / prod(1 - t^w)`` with an integer polynomial numerator."""

    __slots__ = ("numerator", "weights")

    def __init__(self, numerator: tuple, weights: tuple):
        self.numerator = tuple(numerator)
        self.weights = tuple(weights)

    def __add__(self, other):
        return HilbertSeries(_padd(self.numerator, other.numerator), self.weights)

    def __sub__(self, other):
        return HilbertSeries(_padd(self.numerator, other.numerator, -1), self.weights)

    def shift(self, k: int) -> "HilbertSeries":
        return HilbertSeries(_pshift(self.numerator, k), self.weights)

    def scale(self, c: int) -> "HilbertSeries":
        return HilbertSeries(tuple(c * x for x in self.numerator) if c else (), self.weights)

    def is_zero(self) -> bool:
        return not self.numerator

    def __eq__(self, other):
        return isinstance(other, HilbertSeries) and self.numerator == other.numerator \
            and self.weights == other.weights

    def __hash__(self):
        return hash((self.numerator, self.weights))

    def _order_at_one(self) -> tuple[int, tuple]:
        a = self.numerator
        k = 0
        while a and sum(a) == 0:
            a = _divide_exact(a, 1)
            k += 1
        return k, a

    def dimension(self) -> int:
        """Krull dimension of the module; ``-1`` for the zero module."""
        if not self.numerator:
            return -1
        k, _ = self._order_at_one()
        return len(self.weights) - k

    def length(self):
        """Total length, or ``INFINITE`` when the module has positive dimension."""
        if not self.numerator:
            return 0
        if self.dimension() > 0:
            return INFINITE
        a = self.numerator
        for d in self.weights:
            a = _divide_exact(a, d)
            if a is None:
                raise ArithmeticError("inconsistent Hilbert series")
        return sum(a)

    def multiplicity(self, degrees: Sequence[int]) -> int:
        """Value at ``t = 1`` of ``HS * prod(1 - t^delta)``.

        For a sequence of homogeneous elements of the given degrees this is the
        Euler characteristic of their Koszul complex, whenever the module modulo
        those elements has finite length.
        """
        if not self.numerator:
            return 0
        n = len(self.weights)
        s = len(degrees)
        k, rest = self._order_at_one()
        if n - k > s:
            raise ArithmeticError("Hilbert series times the Koszul factor is not a polynomial")
        if k > n - s:
            return 0
        # rest = numerator / (1-t)^k; need numerator / (1-t)^(n-s) at t = 1
        val = Fraction(sum(rest))
        for d in degrees:
            val *= d
        for w in self.weights:
            val /= w
        if val.denominator != 1:
            raise ArithmeticError("non-integral multiplicity")
        return int(val)

    def coefficients(self, upto: int) -> list[int]:
        """Hilbert function values in degrees ``0..upto``."""
        series = [0] * (upto + 1)
        for i, c in enumerate(self.numerator):
            if i <= upto:
                series[i] += c
        for w in self.weights:
            for i in range(w, upto + 1):
                series[i] += series[i - w]
        return series

    def __repr__(self):
        return f"HilbertSeries({list(self.numerator)}, weights={list(self.weights)})"


# ---------------------------------------------------------------------------
# standard monomials


def standard_monomials(gb: GroebnerBasis, rank: int | None = None):
    """Sorted standard terms ``(pos, exps)`` of ``free / span``, or ``INFINITE``."""
    rank = gb.free.rank if rank is None else rank
    if rank != gb.free.rank:
        raise RingMismatchError("rank does not match the basis")
    n = gb.free.ring.nvars
    ideals = gb.leading_ideals()
    bounds = []
    for ideal in ideals:
        b = [None] * n
        for e in ideal:
            nz = [i for i, a in enumerate(e) if a]
            if not nz:
                b = [0] * n
                break
            if len(nz) == 1:
                i = nz[0]
                b[i] = e[i] if b[i] is None else min(b[i], e[i])
        if any(x is None for x in b):
            return INFINITE
        bounds.append(b)
    out = []
    for pos, (ideal, b) in enumerate(zip(ideals, bounds)):
        if not ideal:
            continue
        if any(x == 0 for x in b):
            continue

        def rec(prefix, i):
            if i == n:
                e = tuple(prefix)
                if not any(_divides(g, e) for g in ideal):
                    out.append((pos, e))
                return
            for a in range(b[i]):
                prefix.append(a)
                rec(prefix, i + 1)
                prefix.pop()

        rec([], 0)
    out.sort(key=gb.key)
    return out
