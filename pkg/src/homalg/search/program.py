"""Search specifications and their compilation to kernel programs.

Unknowns live in one flat ``int64`` array (``-1`` = unassigned):

* ``i*n + t`` holds coordinate ``t`` of ``alpha(e_i)``;
* ``n*n + (i*n + j)*n + t`` holds coordinate ``t`` of ``e_i * e_j``.

The assignment order is simply ascending index, so twisting-map entries come
before structure constants, which are in lexicographic ``(i, j, k)`` order.

Every equational constraint becomes one *instance* per basis tuple: a short
register program evaluating both sides on partially known vectors.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field as dc_field

import numpy as np

from ..algebra import Algebra, HomAlgebra, check_identity, find_units, is_two_sided_unit
from ..linalg import Field, rank
from ..terms import BASE_IDENTITIES, UNITAL_IDENTITIES, Identity, Term

OP_BASIS, OP_ALPHA, OP_MUL = 0, 1, 2

EQUATIONAL = {**BASE_IDENTITIES, **UNITAL_IDENTITIES}
NEGATABLE = tuple(BASE_IDENTITIES)
LEAF_ONLY = ("unital", "weakly-unital", "weakly-left-unital", "weakly-right-unital")
ALPHA_ONLY = ("alpha-bijective",)
GOALS = ("find-model", "count-models", "find-countermodel")

_UNIT_RE = re.compile(r"^unital\(e(\d+)\)$")
_CODIM_RE = re.compile(r"^codim-im-alpha=(\d+)$")


class SpecError(ValueError):
    pass


def constraint_vocabulary() -> list[str]:
    return (
        list(EQUATIONAL)
        + [f"not-{k}" for k in NEGATABLE]
        + list(LEAF_ONLY)
        + list(ALPHA_ONLY)
        + ["unital(eK)", "codim-im-alpha=K"]
    )


@dataclass(frozen=True)
class SearchSpec:
    """What to search for. ``unit`` and ``fixed_products`` use 0-based indices."""

    field: Field
    dim: int
    constraints: tuple = ()
    goal: str = "find-model"
    identity: str | None = None
    budget: int = 10**7
    fixed_alpha: tuple | None = None
    fixed_products: tuple = ()
    unit: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "constraints", tuple(self.constraints))
        object.__setattr__(self, "fixed_products", tuple(tuple(e) for e in self.fixed_products))
        if self.fixed_alpha is not None:
            object.__setattr__(self, "fixed_alpha", tuple(tuple(int(v) for v in row) for row in self.fixed_alpha))
        self.validate()

    def validate(self) -> None:
        if self.field.is_rational:
            raise SpecError("search runs over prime fields only")
        if self.dim < 1:
            raise SpecError("dimension must be at least 1")
        if self.goal not in GOALS:
            raise SpecError(f"unknown goal {self.goal!r}")
        if self.goal == "find-countermodel":
            if self.identity not in EQUATIONAL:
                raise SpecError(f"countermodel target must be one of {sorted(EQUATIONAL)}")
        if self.budget < 0:
            raise SpecError("budget must be non-negative")
        for c in self.constraints:
            parse_constraint(c, self.dim)
        if self.fixed_alpha is not None and (
            len(self.fixed_alpha) != self.dim or any(len(r) != self.dim for r in self.fixed_alpha)
        ):
            raise SpecError("fixed alpha must be dim x dim")
        for entry in self.fixed_products:
            if len(entry) != 4 or not all(0 <= int(v) < self.dim for v in entry[:3]):
                raise SpecError(f"bad fixed product entry {entry!r}")
        if self.unit is not None and not 0 <= self.unit < self.dim:
            raise SpecError("unit index out of range")

    @property
    def unit_index(self) -> int | None:
        units = {self.unit} if self.unit is not None else set()
        for c in self.constraints:
            kind, arg = parse_constraint(c, self.dim)
            if kind == "unit":
                units.add(arg)
        if len(units) > 1:
            raise SpecError("conflicting designated units")
        return units.pop() if units else None

    def to_dict(self) -> dict:
        out = {
            "field": {"GF": self.field.p},
            "dim": self.dim,
            "constraints": list(self.constraints),
            "goal": self.goal if self.goal != "find-countermodel" else {"find-countermodel": self.identity},
            "budget": self.budget,
        }
        fixed = {}
        if self.fixed_alpha is not None:
            fixed["alpha"] = [[str(v) for v in row] for row in self.fixed_alpha]
        if self.fixed_products:
            fixed["products"] = [[int(i), int(j), int(k), str(v)] for i, j, k, v in self.fixed_products]
        if self.unit is not None:
            fixed["unit"] = self.unit
        if fixed:
            out["fixed"] = fixed
        return out

    @classmethod
    def from_dict(cls, doc: dict) -> "SearchSpec":
        try:
            fld = doc["field"]
            p = fld["GF"] if isinstance(fld, dict) else None
            if p is None:
                raise SpecError("search field must be {'GF': p}")
            goal = doc.get("goal", "find-model")
            identity = None
            if isinstance(goal, dict):
                (goal, identity), = goal.items()
            fixed = doc.get("fixed", {}) or {}
            F = Field.gf(int(p))
            alpha = fixed.get("alpha")
            if alpha is not None:
                alpha = [[F.parse(str(v)) for v in row] for row in alpha]
            prods = [(int(i), int(j), int(k), F.parse(str(v))) for i, j, k, v in fixed.get("products", [])]
            return cls(
                field=F,
                dim=int(doc["dim"]),
                constraints=tuple(doc.get("constraints", ())),
                goal=goal,
                identity=identity,
                budget=int(doc.get("budget", 10**7)),
                fixed_alpha=alpha,
                fixed_products=prods,
                unit=fixed.get("unit"),
            )
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, SpecError):
                raise
            raise SpecError(f"malformed search spec: {exc}") from exc


def parse_constraint(c: str, dim: int):
    """Classify a constraint string as ``(kind, argument)``."""
    if c in EQUATIONAL:
        return "eq", EQUATIONAL[c]
    if c.startswith("not-") and c[4:] in NEGATABLE:
        return "neg", EQUATIONAL[c[4:]]
    if c in LEAF_ONLY:
        return "leaf", c
    if c in ALPHA_ONLY:
        return "alpha", c
    m = _UNIT_RE.match(c)
    if m:
        k = int(m.group(1))
        if not 1 <= k <= dim:
            raise SpecError(f"{c}: basis vector out of range")
        return "unit", k - 1
    m = _CODIM_RE.match(c)
    if m:
        k = int(m.group(1))
        if k > dim:
            raise SpecError(f"{c}: codimension exceeds dimension")
        return "alpha", c
    raise SpecError(f"unknown constraint {c!r}")


# -- variable layout ----------------------------------------------------------


def alpha_var(n: int, i: int, t: int) -> int:
    return i * n + t


def sc_var(n: int, i: int, j: int, t: int) -> int:
    return n * n + (i * n + j) * n + t


def decode(F: Field, n: int, values) -> HomAlgebra:
    vals = np.asarray(values, dtype=np.int64)
    A = vals[: n * n].reshape(n, n).T.copy()
    sc = vals[n * n :].reshape(n, n, n).copy()
    return HomAlgebra(Algebra(F, sc), A)


def encode(h: HomAlgebra) -> np.ndarray:
    return np.concatenate([h.alpha_matrix.T.reshape(-1), h.sc.reshape(-1)]).astype(np.int64)


# -- compilation ----------------------------------------------------------------


class _Builder:
    def __init__(self, unit: int | None):
        self.ops: list[tuple[int, int, int, int]] = []
        self.unit = unit

    def instance(self, lhs: Term, rhs: Term, binding: dict):
        start = len(self.ops)
        cache: dict = {}
        regs = [0]

        def emit(t: Term) -> int:
            if t in cache:
                return cache[t]
            if t.op == "var":
                r = regs[0]
                self.ops.append((OP_BASIS, r, binding[t.name], 0))
            elif t.op == "const":
                if t.name != "1" or self.unit is None:
                    raise SpecError(f"constant {t.name!r} needs a designated unit")
                r = regs[0]
                self.ops.append((OP_BASIS, r, self.unit, 0))
            elif t.op == "alpha":
                s = emit(t.args[0])
                r = regs[0]
                self.ops.append((OP_ALPHA, r, s, 0))
            elif t.op == "mul":
                a = emit(t.args[0])
                b = emit(t.args[1])
                r = regs[0]
                self.ops.append((OP_MUL, r, a, b))
            else:
                raise SpecError(f"search does not support {t.op!r} in identities")
            regs[0] += 1
            cache[t] = r
            return r

        lr = emit(lhs)
        rr = emit(rhs)
        return start, len(self.ops), lr, rr, regs[0]


@dataclass
class Program:
    """Everything a kernel needs, as flat integer arrays."""

    n: int
    p: int
    values: np.ndarray
    order: np.ndarray
    n_alpha_free: int
    ops: np.ndarray
    inst_start: np.ndarray
    inst_end: np.ndarray
    inst_lhs: np.ndarray
    inst_rhs: np.ndarray
    n_universal: int
    group_start: np.ndarray
    group_end: np.ndarray
    nregs: int
    alpha_rank: int = -1  # required rank of alpha, -1 for none, -2 if unsatisfiable
    alpha_checks: list = dc_field(default_factory=list)
    leaf_checks: list = dc_field(default_factory=list)

    @property
    def n_free(self) -> int:
        return len(self.order)


def initial_values(spec: SearchSpec) -> np.ndarray:
    """Unknown vector with every fixed entry (alpha, products, unit) filled in."""
    F, n = spec.field, spec.dim
    vals = np.full(n * n + n**3, -1, dtype=np.int64)

    def put(idx: int, v: int):
        v = int(F(v))
        if vals[idx] not in (-1, v):
            raise SpecError("fixed entries conflict")
        vals[idx] = v

    if spec.fixed_alpha is not None:
        for t in range(n):
            for i in range(n):
                put(alpha_var(n, i, t), spec.fixed_alpha[t][i])
    for i, j, k, v in spec.fixed_products:
        put(sc_var(n, int(i), int(j), int(k)), v)
    u = spec.unit_index
    if u is not None:
        for j in range(n):
            for t in range(n):
                put(sc_var(n, u, j, t), int(t == j))
                put(sc_var(n, j, u, t), int(t == j))
    return vals


def compile_spec(spec: SearchSpec) -> Program:
    n = spec.dim
    unit = spec.unit_index
    vals = initial_values(spec)
    order = np.array([i for i in range(len(vals)) if vals[i] < 0], dtype=np.int64)
    n_alpha_free = int(np.count_nonzero(order < n * n))

    universal: list[Identity] = []
    negated: list[Identity] = []
    alpha_checks: list[str] = []
    leaf_checks: list[str] = []
    for c in spec.constraints:
        kind, arg = parse_constraint(c, n)
        if kind == "eq":
            universal.append(arg)
        elif kind == "neg":
            negated.append(arg)
        elif kind == "alpha":
            alpha_checks.append(arg)
        elif kind == "leaf":
            leaf_checks.append(arg)
    if spec.goal == "find-countermodel":
        negated.append(EQUATIONAL[spec.identity])

    b = _Builder(unit)
    rows = []
    nregs = 1
    for ident in universal:
        for tup in itertools.product(range(n), repeat=ident.arity):
            s, e, l, r, k = b.instance(ident.lhs, ident.rhs, dict(zip(ident.variables, tup)))
            rows.append((s, e, l, r))
            nregs = max(nregs, k)
    n_universal = len(rows)
    gstart, gend = [], []
    for ident in negated:
        gstart.append(len(rows))
        for tup in itertools.product(range(n), repeat=ident.arity):
            s, e, l, r, k = b.instance(ident.lhs, ident.rhs, dict(zip(ident.variables, tup)))
            rows.append((s, e, l, r))
            nregs = max(nregs, k)
        gend.append(len(rows))

    ranks = {required_rank(c, n) for c in alpha_checks}
    alpha_rank = -1 if not ranks else ranks.pop() if len(ranks) == 1 else -2

    ops = np.array(b.ops if b.ops else np.zeros((0, 4)), dtype=np.int32).reshape(-1, 4)
    cols = np.array(rows, dtype=np.int32).reshape(-1, 4)
    return Program(
        n=n,
        p=spec.field.p,
        values=vals,
        order=order,
        n_alpha_free=n_alpha_free,
        ops=np.ascontiguousarray(ops),
        inst_start=np.ascontiguousarray(cols[:, 0]),
        inst_end=np.ascontiguousarray(cols[:, 1]),
        inst_lhs=np.ascontiguousarray(cols[:, 2]),
        inst_rhs=np.ascontiguousarray(cols[:, 3]),
        n_universal=n_universal,
        group_start=np.array(gstart, dtype=np.int32),
        group_end=np.array(gend, dtype=np.int32),
        nregs=nregs,
        alpha_rank=alpha_rank,
        alpha_checks=alpha_checks,
        leaf_checks=leaf_checks,
    )


# -- checks shared by every search route ---------------------------------------


def required_rank(check: str, n: int) -> int:
    if check == "alpha-bijective":
        return n
    return n - int(_CODIM_RE.match(check).group(1))


def alpha_predicate(spec: SearchSpec, A: np.ndarray, checks) -> bool:
    """Constraints that depend on the twisting map only (all are rank conditions)."""
    if not checks:
        return True
    r = rank(spec.field, A)
    return all(r == required_rank(c, spec.dim) for c in checks)


def leaf_predicate(h: HomAlgebra, checks) -> bool:
    """Existential constraints, decided by the unit solvers."""
    if not checks:
        return True
    units = find_units(h)
    for c in checks:
        if c == "unital" and units.two_sided_unit is None:
            return False
        if c in ("weakly-unital", "weakly-left-unital") and units.weak_left_units is None:
            return False
        if c in ("weakly-unital", "weakly-right-unital") and units.weak_right_units is None:
            return False
    return True


def satisfies(spec: SearchSpec, h: HomAlgebra) -> bool:
    """Full independent check of a complete model against every constraint and the goal.

    Uses the algebra-level checkers only, never the kernel's propagation.
    """
    n = spec.dim
    vals = encode(h)
    fixed = initial_values(spec)
    if np.any((fixed >= 0) & (fixed != vals)):
        return False
    unit = spec.unit_index
    consts = {"1": h.field.basis_vector(n, unit)} if unit is not None else None
    if unit is not None and not is_two_sided_unit(h.algebra, consts["1"]):
        return False
    for c in spec.constraints:
        kind, arg = parse_constraint(c, n)
        if kind == "eq" and not check_identity(h, arg, consts):
            return False
        if kind == "neg" and check_identity(h, arg, consts):
            return False
        if kind == "alpha" and not alpha_predicate(spec, h.alpha_matrix, [arg]):
            return False
        if kind == "leaf" and not leaf_predicate(h, [arg]):
            return False
    if spec.goal == "find-countermodel" and check_identity(h, EQUATIONAL[spec.identity], consts):
        return False
    return True
