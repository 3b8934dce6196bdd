"""Pruned depth-first model search, its brute-force oracle, and the codim-2 explorer."""

from __future__ import annotations

import time
from dataclasses import dataclass, field as dc_field

import numpy as np

from ..algebra import HomAlgebra
from ..linalg import Field
from ..structure import codim_analysis
from ..terms import Term
from . import kernel as _kernel
from . import parallel as _parallel
from .program import (
    EQUATIONAL,
    SearchSpec,
    SpecError,
    alpha_predicate,
    compile_spec,
    decode,
    initial_values,
    leaf_predicate,
    parse_constraint,
    satisfies,
)

NAIVE_CAP = 1 << 24
NAIVE_CHUNK = 1 << 14

FOUND = "Found"
EXHAUSTED_NONE = "ExhaustedNone"
BUDGET_EXCEEDED = "BudgetExceeded"
COUNT = "Count"


class SearchInconsistency(AssertionError):
    """A model reported by the kernel failed independent revalidation."""


class NaiveCapExceeded(SpecError):
    pass


@dataclass
class SearchOutcome:
    status: str
    nodes_explored: int
    count: int | None = None
    model: HomAlgebra | None = None
    interrupted: bool = False
    backend: str = ""
    elapsed: float = 0.0
    extra: dict = dc_field(default_factory=dict)

    @property
    def label(self) -> str:
        return f"Count({self.count})" if self.status == COUNT else self.status

    def to_dict(self) -> dict:
        from ..io import hom_algebra_to_dict

        return {
            "status": self.status,
            "label": self.label,
            "count": self.count,
            "nodes_explored": self.nodes_explored,
            "interrupted": self.interrupted,
            "backend": self.backend,
            "elapsed_seconds": round(self.elapsed, 6),
            "model": hom_algebra_to_dict(self.model) if self.model is not None else None,
            **self.extra,
        }


def _leaf_hook(spec: SearchSpec, prog):
    if not prog.leaf_checks:
        return None
    F, n, checks = spec.field, spec.dim, prog.leaf_checks

    def hook(vals):
        return leaf_predicate(decode(F, n, vals), checks)

    return hook


def _revalidated(spec: SearchSpec, values) -> HomAlgebra:
    h = decode(spec.field, spec.dim, values)
    if not satisfies(spec, h):
        raise SearchInconsistency("kernel model fails independent revalidation")
    return h


def search(spec: SearchSpec, progress=None, backend: str | None = None, workers: int = 1) -> SearchOutcome:
    """Depth-first search with incremental ground-instance checking.

    ``progress(nodes, count)`` is called periodically; returning ``False`` (or
    raising ``KeyboardInterrupt``) stops the search with a partial
    ``BudgetExceeded`` outcome flagged ``interrupted``. With ``workers > 1``
    subtrees run in separate processes; the outcome is unchanged.
    """
    if workers < 1:
        raise SpecError("workers must be >= 1")
    run = _kernel.get_run(backend)
    name = backend or _kernel.BACKEND
    prog = compile_spec(spec)
    leaf_hook = _leaf_hook(spec, prog)
    last = [0, 0]

    def tick(nodes, count):
        last[0], last[1] = nodes, count
        if progress is None:
            return True
        try:
            return progress(nodes, count) is not False
        except KeyboardInterrupt:
            return False

    t0 = time.perf_counter()
    find_first = spec.goal != "count-models"
    try:
        if workers > 1:
            status, count, nodes, model = _parallel.run_split(
                spec, prog, backend, workers, find_first, spec.budget, leaf_hook, tick
            )
        else:
            status, count, nodes, model = run(
                prog.n, prog.p, prog.values, prog.order, prog.n_alpha_free, prog.ops,
                prog.inst_start, prog.inst_end, prog.inst_lhs, prog.inst_rhs, prog.n_universal,
                prog.group_start, prog.group_end, prog.nregs, prog.alpha_rank,
                find_first, spec.budget, leaf_hook, tick,
            )
    except KeyboardInterrupt:
        status, count, nodes, model = _kernel.INTERRUPTED, last[1], last[0], None
    elapsed = time.perf_counter() - t0

    out = SearchOutcome(status="", nodes_explored=int(nodes), backend=name, elapsed=elapsed)
    if status in (_kernel.BUDGET, _kernel.INTERRUPTED):
        out.status = BUDGET_EXCEEDED
        out.interrupted = status == _kernel.INTERRUPTED
        out.count = int(count) if spec.goal == "count-models" else None
        return out
    if spec.goal == "count-models":
        out.status = COUNT
        out.count = int(count)
        if model is not None:
            _revalidated(spec, model)
        return out
    if status == _kernel.FOUND:
        out.status = FOUND
        out.count = 1
        out.model = _revalidated(spec, model)
        return out
    out.status = EXHAUSTED_NONE
    out.count = 0
    return out


# -- brute-force oracle ---------------------------------------------------------


def _batch_eval(term: Term, env: dict, A, sc, unit_vec, p):
    """Evaluate ``term`` for a batch of candidates; leading axis indexes candidates."""
    if term.op == "var":
        return env[term.name]
    if term.op == "const":
        if term.name != "1" or unit_vec is None:
            raise SpecError(f"constant {term.name!r} needs a designated unit")
        return unit_vec
    if term.op == "alpha":
        v = _batch_eval(term.args[0], env, A, sc, unit_vec, p)
        return np.einsum("z...a,zta->z...t", v, A) % p
    if term.op == "mul":
        u = _batch_eval(term.args[0], env, A, sc, unit_vec, p)
        v = _batch_eval(term.args[1], env, A, sc, unit_vec, p)
        u, v = np.broadcast_arrays(u, v)
        # contract one factor at a time to keep int64 intermediates small
        uv = np.einsum("z...a,zabt->z...bt", u, sc) % p
        return np.einsum("z...b,z...bt->z...t", v, uv) % p
    raise SpecError(f"unsupported operation {term.op!r}")


def _identity_holds(ident, Z, n, A, sc, unit_vec, p) -> np.ndarray:
    """Boolean per candidate: identity holds on every basis tuple."""
    k = ident.arity
    env = {}
    for pos, name in enumerate(ident.variables):
        shape = [1] * (k + 2)
        shape[pos + 1] = n
        shape[-1] = n
        env[name] = np.eye(n, dtype=np.int64).reshape(shape)
    lhs = _batch_eval(ident.lhs, env, A, sc, unit_vec, p)
    rhs = _batch_eval(ident.rhs, env, A, sc, unit_vec, p)
    full = (Z,) + (n,) * k + (n,)
    eq = np.broadcast_to(lhs, full) == np.broadcast_to(rhs, full)
    return eq.reshape(Z, -1).all(axis=1)


def naive_enumerate(spec: SearchSpec, cap: int = NAIVE_CAP) -> SearchOutcome:
    """Enumerate every completion of the fixed entries without pruning.

    Candidates are visited in the same canonical order as :func:`search`.
    ``p ** (number of free entries)`` must not exceed ``cap``.
    """
    F, n, p = spec.field, spec.dim, spec.field.p
    base = initial_values(spec)
    free = np.flatnonzero(base < 0)
    total = p ** len(free)
    if total > cap:
        raise NaiveCapExceeded(f"{total} candidates exceed the naive cap {cap}")
    unit = spec.unit_index
    universal, negated, alpha_checks, leaf_checks = [], [], [], []
    for c in spec.constraints:
        kind, arg = parse_constraint(c, n)
        {"eq": universal, "neg": negated, "alpha": alpha_checks, "leaf": leaf_checks, "unit": []}[kind].append(arg)
    if spec.goal == "find-countermodel":
        negated.append(EQUATIONAL[spec.identity])

    t0 = time.perf_counter()
    weights = p ** np.arange(len(free) - 1, -1, -1, dtype=np.int64)
    count = 0
    first = None
    first_index = None
    for start in range(0, total, NAIVE_CHUNK):
        idx = np.arange(start, min(total, start + NAIVE_CHUNK), dtype=np.int64)
        Z = len(idx)
        vals = np.repeat(base[None, :], Z, axis=0)
        vals[:, free] = (idx[:, None] // weights[None, :]) % p
        A = vals[:, : n * n].reshape(Z, n, n).transpose(0, 2, 1)
        sc = vals[:, n * n :].reshape(Z, n, n, n)
        unit_vec = None
        if unit is not None:
            unit_vec = np.zeros((1,) + (1,) * 3 + (n,), dtype=np.int64)
            unit_vec[..., unit] = 1
        keep = np.ones(Z, dtype=bool)
        for ident in universal:
            uv = None if unit_vec is None else unit_vec.reshape((1,) * (ident.arity + 1) + (n,))
            keep &= _identity_holds(ident, Z, n, A, sc, uv, p)
        for ident in negated:
            uv = None if unit_vec is None else unit_vec.reshape((1,) * (ident.arity + 1) + (n,))
            keep &= ~_identity_holds(ident, Z, n, A, sc, uv, p)
        for z in np.flatnonzero(keep):
            if alpha_checks and not alpha_predicate(spec, A[z], alpha_checks):
                continue
            if leaf_checks and not leaf_predicate(decode(F, n, vals[z]), leaf_checks):
                continue
            count += 1
            if first is None:
                first, first_index = vals[z].copy(), int(idx[z])
                if spec.goal != "count-models":
                    break
        if first is not None and spec.goal != "count-models":
            break
    elapsed = time.perf_counter() - t0
    out = SearchOutcome(status="", nodes_explored=total, backend="naive", elapsed=elapsed)
    if spec.goal == "count-models":
        out.status, out.count = COUNT, count
        return out
    if first is None:
        out.status, out.count = EXHAUSTED_NONE, 0
        return out
    out.status, out.count = FOUND, 1
    out.nodes_explored = first_index + 1
    out.model = _revalidated(spec, first)
    return out


# -- codimension-two exploration -------------------------------------------------


def codim2_spec(field: Field, dim: int, budget: int, codim: int = 2, fixed_alpha=None) -> SearchSpec:
    """Unital (unit ``e1``), hom-associative, nonassociative, ``codim Im(alpha) = codim``.

    Placing the unit at ``e1`` loses no generality: any unital algebra has a
    basis starting with its unit.
    """
    if codim == 2 and dim < 4:
        raise SpecError("codimension-two exploration needs dim >= 4")
    if dim < codim:
        raise SpecError("codimension exceeds dimension")
    return SearchSpec(
        field=field,
        dim=dim,
        constraints=("unital(e1)", "hom-associative", f"codim-im-alpha={codim}", "not-associative"),
        goal="find-model",
        budget=budget,
        fixed_alpha=fixed_alpha,
    )


def explore_codim2(field: Field, dim: int, budget: int, codim: int = 2, fixed_alpha=None,
                   progress=None, backend: str | None = None, workers: int = 1) -> SearchOutcome:
    """Look for a unital hom-associative nonassociative algebra with the given codimension.

    Any model found is re-run through :func:`codim_analysis`, which must
    report no associativity clause firing.
    """
    spec = codim2_spec(field, dim, budget, codim, fixed_alpha)
    out = search(spec, progress=progress, backend=backend, workers=workers)
    out.extra["codim"] = codim
    if out.model is not None:
        unit = field.basis_vector(dim, 0)
        report = codim_analysis(out.model, unit)
        if report.triggering_clause is not None or report.actual_associative:
            raise SearchInconsistency("found model contradicts the codimension criteria")
        out.extra["codim_report"] = report.to_dict()
    return out
