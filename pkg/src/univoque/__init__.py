"""Smallest univoque bases of real numbers, computed with certified arithmetic."""

from .cascades import level_point, qs_closed_form, xi
from .expansions import alpha, check_unique, evaluate, membership, quasi_greedy_digits, solve_base
from .landmarks import catalog, catalog_match, golden, hat_q, komornik_loreti, q_max
from .numeric import Ordering, compare, enclose
from .qsolve import QsOptions, QsResult, qs
from .words import EPSequence, lex_compare, parse_sequence, s_elements, thue_morse

__version__ = "0.1.0"
