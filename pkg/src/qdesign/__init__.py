"""Exact computations with subspace designs (q-analogs of block designs)."""

from .designs import Design, combine, complete_design, derived, dual, reduce, residual, verify
from .gfq import Field, Subspace, enumerate_subspaces, field_make
from .largesets import LargeSet, combine_ls, derived_ls, dual_ls, residual_ls, verify_ls
from .params import ParameterSet, gauss, is_admissible

__version__ = "0.1.0"

__all__ = [
    "Design",
    "Field",
    "LargeSet",
    "ParameterSet",
    "Subspace",
    "combine",
    "combine_ls",
    "complete_design",
    "derived",
    "derived_ls",
    "dual",
    "dual_ls",
    "enumerate_subspaces",
    "field_make",
    "gauss",
    "is_admissible",
    "reduce",
    "residual",
    "residual_ls",
    "verify",
    "verify_ls",
]
