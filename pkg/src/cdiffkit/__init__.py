"""Finite-field toolkit for c-differential and Walsh analysis of permutation families."""

from .gf import ContextMismatch, FieldCtx, FieldElem, FieldError, make_field, parse_field
from .funcspec import FuncSpec, SpecError, ValueTable, is_permutation, parse_element, parse_func
from .cubic import classify_cubic, p_n_eval
from .cdiff import bct, cddt_entry, cdu, count_via_charsum
from .walsh import gold_pair_vanishing, quad_form_kernel, quad_walsh_law_check, walsh_point, walsh_spectrum

__version__ = "0.1.0"
