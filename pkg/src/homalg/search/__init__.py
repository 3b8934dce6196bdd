"""Finite model search over structure constants and twisting maps."""

from .engine import (
    BUDGET_EXCEEDED,
    COUNT,
    EXHAUSTED_NONE,
    FOUND,
    NAIVE_CAP,
    NaiveCapExceeded,
    SearchInconsistency,
    SearchOutcome,
    codim2_spec,
    explore_codim2,
    naive_enumerate,
    search,
)
from .kernel import BACKEND
from .program import SearchSpec, SpecError, constraint_vocabulary, decode, encode

__all__ = [
    "BACKEND",
    "BUDGET_EXCEEDED",
    "COUNT",
    "EXHAUSTED_NONE",
    "FOUND",
    "NAIVE_CAP",
    "NaiveCapExceeded",
    "SearchInconsistency",
    "SearchOutcome",
    "SearchSpec",
    "SpecError",
    "codim2_spec",
    "constraint_vocabulary",
    "decode",
    "encode",
    "explore_codim2",
    "naive_enumerate",
    "search",
]
