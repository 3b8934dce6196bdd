"""Identity terms over a hom-algebra signature.

A term is built from the variables ``x, y, z``, the constants ``ONE`` (a
two-sided unit) and ``C`` (a weak left unit), the binary product ``*`` and
the unary maps :func:`alpha` and :func:`beta` (the inverse of alpha). An
identity is a pair of terms; it is evaluated on every tuple of basis
vectors at once by :func:`evaluate`, which broadcasts each variable along
its own axis.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

VARIABLES = ("x", "y", "z")


@dataclass(frozen=True)
class Term:
    op: str
    args: tuple = ()
    name: str = ""

    def __mul__(self, other: "Term") -> "Term":
        return Term("mul", (self, other))

    def __str__(self) -> str:
        if self.op in ("var", "const"):
            return self.name
        if self.op == "mul":
            a, b = (f"({t})" if t.op == "mul" else str(t) for t in self.args)
            return f"{a}*{b}"
        return f"{self.op}({self.args[0]})"

    def variables(self) -> set[str]:
        if self.op == "var":
            return {self.name}
        out: set[str] = set()
        for a in self.args:
            out |= a.variables()
        return out

    def uses(self, op: str, name: str | None = None) -> bool:
        if self.op == op and (name is None or self.name == name):
            return True
        return any(a.uses(op, name) for a in self.args)


def alpha(t: Term) -> Term:
    return Term("alpha", (t,))


def beta(t: Term) -> Term:
    return Term("beta", (t,))


x = Term("var", name="x")
y = Term("var", name="y")
z = Term("var", name="z")
ONE = Term("const", name="1")
C = Term("const", name="c")


@dataclass(frozen=True)
class Identity:
    id: str
    lhs: Term
    rhs: Term
    note: str = ""

    @property
    def variables(self) -> tuple[str, ...]:
        used = self.lhs.variables() | self.rhs.variables()
        return tuple(v for v in VARIABLES if v in used)

    @property
    def arity(self) -> int:
        return len(self.variables)

    def needs(self, op: str, name: str | None = None) -> bool:
        return self.lhs.uses(op, name) or self.rhs.uses(op, name)

    def __str__(self) -> str:
        return f"{self.lhs} = {self.rhs}"


def _catalog(*idents: Identity) -> dict[str, Identity]:
    return {i.id: i for i in idents}


BASE_IDENTITIES = _catalog(
    Identity("hom-associative", alpha(x) * (y * z), (x * y) * alpha(z)),
    Identity("associative", (x * y) * z, x * (y * z)),
    Identity("commutative", x * y, y * x),
)

# Identities every unital hom-associative algebra satisfies.
UNITAL_IDENTITIES = _catalog(
    Identity("alpha-adjoint", alpha(x) * y, x * alpha(y)),
    Identity("unit-image", x * alpha(ONE), alpha(x)),
    Identity("alpha-pulls-right", alpha(x * y), x * alpha(y)),
    Identity("image-left-associates", alpha(x) * (y * z), (alpha(x) * y) * z),
    Identity("image-middle-associates", x * (alpha(y) * z), (x * alpha(y)) * z),
    Identity("image-right-associates", x * (y * alpha(z)), (x * y) * alpha(z)),
    Identity("alpha-kills-associator", alpha(x * (y * z)), alpha((x * y) * z)),
)

# Identities of a weakly left unital hom-associative algebra (weak left unit c)
# with bijective twisting map; beta is the inverse of alpha.
WEAK_UNIT_IDENTITIES = _catalog(
    Identity("inverse-twist-associativity", (beta(x) * y) * z, x * (y * beta(z))),
    Identity("weak-unit-symmetry", (C * x) * y, (x * C) * y),
    Identity("inverse-product-rule", beta(x) * beta(y), beta(C) * beta(beta(x * y))),
    Identity("inverse-hom-associativity", x * beta(y * z), beta(x * y) * z),
    Identity("weak-unit-shift", x * beta(y), beta((beta(C) * x) * y)),
    Identity("weak-unit-exchange", (C * (beta(x) * y)) * z, (x * (y * beta(C))) * z),
    Identity("weak-unit-transfer", (x * beta(C)) * beta(y * z), (x * beta(y)) * z),
)

ALL_IDENTITIES = {**BASE_IDENTITIES, **UNITAL_IDENTITIES, **WEAK_UNIT_IDENTITIES}


def variable_tensors(F, n: int, arity: int) -> list[np.ndarray]:
    """Basis tensors for ``arity`` variables, variable ``i`` on axis ``i``."""
    E = F.eye(n)
    out = []
    for i in range(arity):
        shape = [1] * arity + [n]
        shape[i] = n
        out.append(E.reshape(shape))
    return out


def evaluate(term: Term, mul, apply_alpha, apply_beta, env: dict[str, np.ndarray]) -> np.ndarray:
    """Evaluate ``term`` with broadcasting product and map callables."""
    if term.op in ("var", "const"):
        try:
            return env[term.name]
        except KeyError:
            raise KeyError(f"no value bound for {term.name!r}") from None
    if term.op == "mul":
        a = evaluate(term.args[0], mul, apply_alpha, apply_beta, env)
        b = evaluate(term.args[1], mul, apply_alpha, apply_beta, env)
        return mul(a, b)
    inner = evaluate(term.args[0], mul, apply_alpha, apply_beta, env)
    if term.op == "alpha":
        return apply_alpha(inner)
    if term.op == "beta":
        if apply_beta is None:
            raise ValueError("term uses beta but alpha is not invertible")
        return apply_beta(inner)
    raise ValueError(f"unknown term op {term.op!r}")
