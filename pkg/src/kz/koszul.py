"""Koszul complexes, homology lengths, Euler characteristics and multiplicities.

Two independent routes compute homology lengths.  :func:`koszul_summary`
never forms a kernel: it reads ``l(H_i)`` off the Hilbert series of the
images ``im(phi_{i+1}) + K^{b_i}`` alone.  :func:`koszul_homology` builds
``ker(phi_i) / im(phi_{i+1})`` as an explicit presentation; the Lemma-style
sums below use that route.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb, prod
from typing import Sequence

from .algebra import Polynomial, require_homogeneous
from .errors import InfiniteLengthError, PreconditionError
from .groebner import INFINITE, FreeModule, HilbertSeries, Submodule, eliminate, poly_coeffs
from .modules import FPModule, SubmoduleOfModule, h0_length, multiplicity_of_series, present_subquotient


def binom(a: int, b: int) -> int:
    """Binomial coefficient, zero unless ``0 <= b <= a``."""
    if b < 0 or a < b:
        return 0
    return comb(a, b)


class ParamSequence:
    """Homogeneous elements of positive degree."""

    def __init__(self, ring, elements: Sequence):
        elems = [ring(f) for f in elements]
        require_homogeneous(elems, "sequence element")
        for f in elems:
            if f.is_zero() or f.degree() <= 0:
                raise PreconditionError(f"sequence element {f} must have positive degree")
        self.ring = ring
        self.elements = tuple(elems)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __getitem__(self, i):
        return self.elements[i]

    def powered(self, n: Sequence[int] | None) -> list[Polynomial]:
        """``x(n) = (x_1^{n_1}, ..., x_s^{n_s})``."""
        if n is None:
            return list(self.elements)
        n = check_exponents(n, len(self.elements))
        return [f ** a for f, a in zip(self.elements, n)]

    def __repr__(self):
        return "ParamSequence(" + ", ".join(str(f) for f in self.elements) + ")"


def check_exponents(n: Sequence[int], s: int) -> tuple:
    n = tuple(int(a) for a in n)
    if len(n) != s:
        raise PreconditionError(f"exponent tuple {n} must have length {s}")
    if any(a < 1 for a in n):
        raise PreconditionError(f"exponents must be positive, got {n}")
    return n


def _as_list(ring, x, n=None) -> list[Polynomial]:
    if isinstance(x, ParamSequence):
        return x.powered(n)
    elems = [ring(f) for f in x]
    if n is not None:
        n = check_exponents(n, len(elems))
        elems = [f ** a for f, a in zip(elems, n)]
    return elems


class KoszulComplex:
    """``K(x; M)`` on the free cover of ``M``.

    ``K_k`` has the basis ``e_I ⊗ e_p`` for ``I`` a ``k``-subset (in
    lexicographic order) and ``p`` a cover position; ``e_I ⊗ e_p`` sits in
    position ``idx(I) * rank + p``.  The differential sends
    ``e_{i_1 < ... < i_k}`` to ``sum_j (-1)^(j+1) x_{i_j} e_{I - i_j}``.
    """

    def __init__(self, M: FPModule, elements: Sequence[Polynomial]):
        self.M = M
        self.elements = [M.ring(f) for f in elements]
        require_homogeneous(self.elements, "sequence element")
        self.s = len(self.elements)
        self.ring = M.ring
        self.rank = M.free.rank
        self.degs = [f.degree() for f in self.elements]
        self.subsets = [list(combinations(range(self.s), k)) for k in range(self.s + 1)]
        self.subset_index = [{I: i for i, I in enumerate(sub)} for sub in self.subsets]
        self._coeffs = [poly_coeffs(f) for f in self.elements]
        self._images: dict = {}
        self._image_hs: dict = {}

    def free(self, k: int) -> FreeModule:
        shifts = []
        for I in self.subsets[k]:
            dI = sum(self.degs[i] for i in I)
            shifts.extend(dI + s for s in self.M.free.shifts)
        return FreeModule(self.ring, len(self.subsets[k]) * self.rank, shifts)

    def rank_of(self, k: int) -> int:
        if k < 0 or k > self.s:
            return 0
        return len(self.subsets[k])

    def _lift(self, vec: dict, k: int) -> list[dict]:
        """``vec`` (a cover vector) placed in each summand of ``K_k``."""
        r = self.rank
        return [{(b * r + pos, e): c for (pos, e), c in vec.items()} for b in range(len(self.subsets[k]))]

    def relations(self, k: int) -> list[dict]:
        """Generators of ``K^{b_k}`` inside the free module of ``K_k``."""
        out = []
        for v in self.M.relations.vecs:
            if v:
                out.extend(self._lift(v, k))
        return out

    def differential(self, k: int) -> list[dict]:
        """Images of the basis of ``K_k`` in the free module of ``K_{k-1}`` (``1 <= k <= s``)."""
        if k in self._images:
            return self._images[k]
        p = self.ring.field.characteristic
        r = self.rank
        idx_prev = self.subset_index[k - 1]
        out = []
        for I in self.subsets[k]:
            for pos in range(r):
                img: dict = {}
                for j, i in enumerate(I):
                    sign = 1 if j % 2 == 0 else -1
                    J = I[:j] + I[j + 1:]
                    tgt = idx_prev[J] * r + pos
                    for e, c in self._coeffs[i].items():
                        t = (tgt, e)
                        v = img.get(t, 0) + sign * c
                        if p:
                            v %= p
                        if v:
                            img[t] = v
                        else:
                            img.pop(t, None)
                out.append(img)
        self._images[k] = out
        return out

    def apply(self, k: int, vec: dict) -> dict:
        """``phi_k`` applied to a vector of the free module of ``K_k``."""
        p = self.ring.field.characteristic
        imgs = self.differential(k)
        out: dict = {}
        for (pos, e), c in vec.items():
            for (tp, te), tc in imgs[pos].items():
                t = (tp, tuple(a + b for a, b in zip(e, te)))
                out[t] = out.get(t, 0) + c * tc
        if p:
            return {t: v % p for t, v in out.items() if v % p}
        return {t: v for t, v in out.items() if v}

    def module_series(self, k: int) -> HilbertSeries:
        """Hilbert series of ``K_k(x; M) = ⊕ M(-deg e_I)``."""
        hs = self.M.hilbert_series()
        total = HilbertSeries((), hs.weights)
        for I in self.subsets[k]:
            total = total + hs.shift(sum(self.degs[i] for i in I))
        return total

    def boundary_submodule(self, k: int) -> Submodule:
        """``im(phi_{k+1}) + K^{b_k}`` in the free module of ``K_k``."""
        gens = self.relations(k)
        if k < self.s:
            gens = self.differential(k + 1) + gens
        return Submodule.from_vecs(self.free(k), gens)

    def quotient_series(self, k: int) -> HilbertSeries:
        """Hilbert series of ``K_k / im(phi_{k+1})``."""
        if k not in self._image_hs:
            self._image_hs[k] = self.boundary_submodule(k).gb().hilbert_series()
        return self._image_hs[k]

    def homology_series(self, k: int) -> HilbertSeries:
        """Hilbert series of ``H_k`` from image data only.

        ``H_k = Z_k / B_k`` with ``Z_k = K_k - B_{k-1}`` in the Grothendieck
        group, so ``HS(H_k) = Q_k + Q_{k-1} - HS(K_{k-1})`` where ``Q_j`` is the
        series of ``K_j / B_j``.
        """
        hs = self.quotient_series(k)
        if k > 0:
            hs = hs + self.quotient_series(k - 1) - self.module_series(k - 1)
        return hs

    def kernel(self, k: int) -> list[dict]:
        """Generators of ``ker(phi_k)`` in the free module of ``K_k`` (relations included)."""
        if k == 0:
            r = self.rank
            zero = (0,) * self.ring.nvars
            return [{(pos, zero): 1} for pos in range(r)]
        rows = [(img, {(b, (0,) * self.ring.nvars): 1}) for b, img in enumerate(self.differential(k))]
        rows += [(v, {}) for v in self.relations(k - 1)]
        return eliminate(self.free(k - 1), self.free(k), rows)

    def homology(self, k: int) -> FPModule:
        """``H_k(x; M)`` presented on generators of the cycles."""
        if k < 0 or k > self.s:
            return FPModule.free_module(self.ring, 0)
        F = self.free(k)
        cycles = self.kernel(k)
        rels = self.relations(k)
        if k < self.s:
            rels = self.differential(k + 1) + rels
        return present_subquotient(F, cycles, rels)

    def check_differentials(self) -> bool:
        for k in range(2, self.s + 1):
            for img in self.differential(k):
                if self.apply(k - 1, img):
                    return False
        return True


@dataclass
class KoszulSummary:
    """Homology lengths and the derived partial Euler characteristics."""

    lengths: list
    chi: list = field(default_factory=list)

    def to_dict(self) -> dict:
        def enc(v):
            return "infinite" if v is INFINITE else v
        return {"lengths": [enc(v) for v in self.lengths], "chi": [enc(v) for v in self.chi]}


def _chis(lengths: list) -> list:
    s = len(lengths) - 1
    out = []
    for k in range(s + 1):
        tail = lengths[k:]
        if any(v is INFINITE for v in tail):
            out.append(None)
        else:
            out.append(sum((-1) ** (i - k) * v for i, v in enumerate(tail, start=k)))
    return out


_SUMMARY_CACHE: dict = {}


def _cache_key(M: FPModule, elems: list[Polynomial]):
    return (id(M), tuple(str(f) for f in elems))


def koszul_summary(M: FPModule, x, n=None) -> KoszulSummary:
    """``l(H_i(x(n); M))`` for ``i = 0..s`` and ``chi_k`` wherever it is finite."""
    elems = _as_list(M.ring, x, n)
    key = _cache_key(M, elems)
    hit = _SUMMARY_CACHE.get(key)
    if hit is not None and hit[0] is M:
        return hit[1]
    K = KoszulComplex(M, elems)
    lengths = [K.homology_series(k).length() for k in range(K.s + 1)]
    summary = KoszulSummary(lengths, _chis(lengths))
    if len(_SUMMARY_CACHE) > 4096:
        _SUMMARY_CACHE.clear()
    _SUMMARY_CACHE[key] = (M, summary)
    return summary


def koszul_homology(M: FPModule, x, n=None, i: int = 0) -> FPModule:
    """``H_i(x(n); M)`` as a finitely presented module."""
    return KoszulComplex(M, _as_list(M.ring, x, n)).homology(i)


def homology_length(M: FPModule, x, n=None, i: int = 0):
    """``l(H_i)`` through the explicit kernel presentation."""
    return koszul_homology(M, x, n, i).length()


def chi_k(M: FPModule, x, n=None, k: int = 1) -> int:
    """``chi_k(x(n); M) = sum_{i >= k} (-1)^{i-k} l(H_i)``."""
    summary = koszul_summary(M, x, n)
    s = len(summary.lengths) - 1
    if k > s:
        return 0
    if k < 0:
        raise PreconditionError("k must be nonnegative")
    value = summary.chi[k]
    if value is None:
        raise InfiniteLengthError("a Koszul homology module in the sum has infinite length")
    return value


def _quotient_length_thunk(N, elems):
    if isinstance(N, FPModule):
        return lambda: N.quotient_by_elements(elems)
    if isinstance(N, SubmoduleOfModule):
        return lambda: _SubquotientLength(N, elems)
    return None


class _SubquotientLength:
    """Length of ``N / (elems) N`` for a submodule ``N`` of ``F / K``."""

    def __init__(self, N: SubmoduleOfModule, elems):
        self.N = N
        self.elems = elems

    def length(self):
        smaller = self.N.times_ideal(self.elems).full()
        hs = smaller.gb().hilbert_series() - self.N.full().gb().hilbert_series()
        return hs.length()


def multiplicity(prefix: Sequence[Polynomial], N, check: bool = True) -> int:
    """``e(prefix; N)``: the Koszul Euler characteristic of ``prefix`` on ``N``.

    ``N`` is an :class:`FPModule` or a :class:`SubmoduleOfModule`.  For the
    empty prefix this is ``l(N)``.  The value is read from the Hilbert series
    as ``[HS_N(t) * prod(1 - t^deg y_j)]`` at ``t = 1``.
    """
    elems = [N.ring(f) for f in prefix]
    thunk = _quotient_length_thunk(N, elems) if check else None
    return multiplicity_of_series(N.hilbert_series(), elems, thunk)


def multiplicity_via_koszul(prefix: Sequence[Polynomial], N: FPModule) -> int:
    """``chi_0`` of the Koszul complex, summed from homology lengths."""
    return chi_k(N, list(prefix), None, 0)


def colon_terms(M: FPModule, x, n=None, k: int = 1) -> list[int]:
    """Summands ``e(x_1..x_i; (0 : x_{i+1}) in H_{k-1}(x_{i+2}..x_d; M))`` for ``i = 0..d-k``."""
    if k < 1:
        raise PreconditionError("the colon formula needs k >= 1")
    elems = _as_list(M.ring, x, n)
    d = len(elems)
    out = []
    for i in range(0, d - k + 1):
        H = KoszulComplex(M, elems[i + 1:]).homology(k - 1)
        colon = H.zero_submodule().colon(elems[i])
        out.append(multiplicity(elems[:i], colon))
    return out


def chi_via_colons(M: FPModule, x, n=None, k: int = 1) -> int:
    """``chi_k`` through the sum of multiplicities of colon modules in Koszul homology."""
    return sum(colon_terms(M, x, n, k))


def homology_length_from_h0(M: FPModule, x, n, i: int, j: int) -> int:
    """``sum_{t=0}^{j-i} C(j-t-1, i-1) l(H^0_m(M / (x_1^{n_1}, ..., x_t^{n_t}) M))``."""
    elems = _as_list(M.ring, x, n)
    if not 0 < i <= j <= len(elems):
        raise PreconditionError("need 0 < i <= j <= d")
    total = 0
    for t in range(0, j - i + 1):
        total += binom(j - t - 1, i - 1) * h0_length(M.quotient_by_elements(elems[:t]))
    return total


def h0_from_homology(M: FPModule, x, n, i: int) -> int:
    """``sum_{j=0}^{i} (-1)^{i-j} C(d-j-1, d-i-1) l(H_{d-j}(x(n); M))``."""
    elems = _as_list(M.ring, x, n)
    d = len(elems)
    if not 0 <= i <= d - 1:
        raise PreconditionError("need 0 <= i <= d - 1")
    lengths = koszul_summary(M, elems).lengths
    total = 0
    for j in range(i + 1):
        v = lengths[d - j]
        if v is INFINITE:
            raise InfiniteLengthError("top Koszul homology has infinite length")
        total += (-1) ** (i - j) * binom(d - j - 1, d - i - 1) * v
    return total


def homology_from_h0(M: FPModule, x, n, i: int) -> int:
    """Forward direction of the same triangular system: ``l(H_{d-i})`` from ``H^0`` lengths.

    Inverts the display above: ``l(H_{d-i}) = sum_{j<=i} C(d-j-1, d-i-1) h_j``
    with ``h_j = l(H^0_m(M / (x_1^{n_1}, ..., x_j^{n_j}) M))``.
    """
    elems = _as_list(M.ring, x, n)
    d = len(elems)
    if not 0 <= i <= d - 1:
        raise PreconditionError("need 0 <= i <= d - 1")
    return sum(binom(d - j - 1, d - i - 1) * h0_length(M.quotient_by_elements(elems[:j]))
               for j in range(i + 1))


def power_product(n: Sequence[int], i: int) -> int:
    """``n_1 ... n_i`` (``1`` for ``i = 0``)."""
    return prod(n[:i])
