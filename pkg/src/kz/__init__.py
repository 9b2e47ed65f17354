"""Exact Koszul homology, partial Euler characteristics and sequence verdicts for graded modules."""

from .algebra import GF, QQ, Polynomial, PolynomialRing
from .errors import (InfiniteLengthError, KzError, NotHomogeneousError, ParseError, PreconditionError,
                     ResourceBudgetExceeded, RingMismatchError, SearchFailure, VerificationFailure)
from .groebner import INFINITE, FreeModule, FreeModuleElement, GroebnerBasis, HilbertSeries, Submodule
from .koszul import KoszulComplex, chi_k, chi_via_colons, homology_length, koszul_summary, multiplicity
from .localcoh import dimension_filtration, is_distinguished, is_sequentially_cm, lc_length_from_chi
from .modules import FPModule, Ideal, SubmoduleOfModule, h0_length
from .problem import load_fixture, parse_problem
from .sequences import estimate_pk, is_d_sequence, is_dd_sequence, is_strong_d

__version__ = "0.1.0"
