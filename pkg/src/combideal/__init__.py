"""Exact ideal membership for combinatorial ideals of CSP instances."""

from .csp import Constraint, CspInstance, Relation, enumerate_solutions, parse_instance
from .engines import Decision, EngineConfig, decide, oracle_member
from .errors import CapExceeded, DegreeBoundError, EngineInapplicable, ParseError
from .groebner import GroebnerBasis, buchberger, is_member, normal_form
from .polyring import GRLEX, LEX, MonomialOrder, Polynomial, parse_polynomial

__version__ = "0.1.0"

__all__ = [
    "CapExceeded",
    "Constraint",
    "CspInstance",
    "Decision",
    "DegreeBoundError",
    "EngineConfig",
    "EngineInapplicable",
    "GRLEX",
    "GroebnerBasis",
    "LEX",
    "MonomialOrder",
    "ParseError",
    "Polynomial",
    "Relation",
    "buchberger",
    "decide",
    "enumerate_solutions",
    "is_member",
    "normal_form",
    "oracle_member",
    "parse_instance",
    "parse_polynomial",
]
