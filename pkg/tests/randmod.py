"""Deterministic random monomial modules with a system of parameters."""

import random
from functools import lru_cache

from kz.algebra import PolynomialRing
from kz.groebner import FreeModule
from kz.modules import FPModule, find_sop


def _monomials(rng, R, count, lo=2, hi=3):
    out = []
    for _ in range(count):
        e = [0] * R.nvars
        for _ in range(rng.randint(lo, hi)):
            e[rng.randrange(R.nvars)] += 1
        out.append(R.monomial(tuple(e)))
    return out


@lru_cache(maxsize=None)
def random_monomial_module(seed: int, dims=(2, 3)):
    """``(M, sop, description)`` for a cyclic, direct-sum or ideal-as-module monomial module."""
    rng = random.Random(seed)
    while True:
        r = rng.choice([3, 4])
        R = PolynomialRing([f"x{i}" for i in range(1, r + 1)])
        kind = rng.choice(["cyclic", "cyclic", "sum", "ideal"])
        if kind == "cyclic":
            gens = _monomials(rng, R, rng.randint(1, 4))
            M = FPModule.quotient_ring(R, gens)
            desc = f"R/({', '.join(map(str, gens))})"
        elif kind == "sum":
            a = _monomials(rng, R, rng.randint(1, 3))
            b = _monomials(rng, R, rng.randint(1, 3))
            free = FreeModule(R, 2, (0, rng.randint(0, 1)))
            rels = [free.element([f, 0]) for f in a] + [free.element([0, g]) for g in b]
            M = FPModule.cokernel(free, rels)
            desc = f"R/({', '.join(map(str, a))}) + R/({', '.join(map(str, b))})"
        else:
            gens = _monomials(rng, R, rng.randint(2, 3), 1, 2)
            M = FPModule.ideal_as_module(R, gens)
            desc = f"ideal ({', '.join(map(str, gens))})"
        d = M.krull_dim()
        if d in dims:
            return M, find_sop(M), desc
