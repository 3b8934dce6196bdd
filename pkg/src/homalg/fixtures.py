"""Built-in example algebras, addressable by id."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import Algebra, HomAlgebra, check_associative
from .linalg import Field, Subspace, kernel_basis
from .structure import quotient_algebra
from .terms import ALL_IDENTITIES, Identity, evaluate, variable_tensors

Q = Field.rationals()
GF2 = Field.gf(2)

DEFAULT_DEGREE_BOUND = 6


def ex_non_adjoint(F: Field = Q) -> HomAlgebra:
    """``K^2`` with ``(l1, l2) * (m1, m2) = (0, l1 m1)`` and ``alpha(l, m) = (l + m, m)``."""
    a = Algebra.from_products(F, 2, {(0, 0): [0, 1]}, metadata={"fixture": "ex-non-adjoint"})
    return HomAlgebra(a, [[1, 1], [0, 1]])


def unital_nonassoc_3d(F: Field = Q) -> HomAlgebra:
    """Basis ``1, u, v`` with ``uu = v, uv = u, vu = vv = 0``; zero twisting map."""
    prods = {(1, 1): [0, 0, 1], (1, 2): [0, 1, 0]}
    for i in range(3):
        prods[(0, i)] = F.basis_vector(3, i)
        prods[(i, 0)] = F.basis_vector(3, i)
    a = Algebra.from_products(
        F, 3, prods, basis_names=["1", "u", "v"], unit=[1, 0, 0], metadata={"fixture": "unital-nonassoc-3d"}
    )
    return HomAlgebra(a, F.zeros((3, 3)))


def gf2_componentwise() -> HomAlgebra:
    F = GF2
    a = Algebra.from_products(F, 2, {(0, 0): [1, 0], (1, 1): [0, 1]}, unit=[1, 1], metadata={"fixture": "gf2-componentwise"})
    return HomAlgebra(a, F.eye(2))


def matrix_algebra(F: Field, k: int = 2, metadata=None) -> Algebra:
    """Full ``k x k`` matrices, basis ``E_rc`` at index ``k*r + c``."""
    n = k * k
    sc = F.zeros((n, n, n))
    for r in range(k):
        for c in range(k):
            for c2 in range(k):
                sc[k * r + c, k * c + c2, k * r + c2] = F.one
    unit = F.zeros(n)
    for r in range(k):
        unit[k * r + r] = F.one
    names = [f"E{r + 1}{c + 1}" for r in range(k) for c in range(k)]
    return Algebra(F, sc, names, unit=unit, metadata=metadata)


def mat2_gf2() -> HomAlgebra:
    a = matrix_algebra(GF2, 2, metadata={"fixture": "mat2-gf2"})
    return HomAlgebra(a, GF2.eye(4))


def truncated_polynomials(F: Field, s: int) -> Algebra:
    """``K[t]/(t^s)`` in the monomial basis."""
    sc = F.zeros((s, s, s))
    for i in range(s):
        for j in range(s - i):
            sc[i, j, i + j] = F.one
    names = ["1"] + [f"t^{i}" if i > 1 else "t" for i in range(1, s)]
    return Algebra(F, sc, names, unit=F.basis_vector(s, 0))


def dual_numbers_q() -> HomAlgebra:
    a = truncated_polynomials(Q, 2)
    a.metadata = {"fixture": "dual-numbers-q"}
    return HomAlgebra(a, Q.eye(2))


# -- polynomial ring extended by a nonassociative plane -------------------------


def _poly_extension(F: Field, D: int) -> HomAlgebra:
    """``K[X]/(X^D) x U`` with ``(a, u)(b, v) = (ab, a(0) v + b(0) u + uv)`` and ``alpha = X*``.

    ``U`` has basis ``u1, u2`` with ``u1 u1 = u2``, ``u1 u2 = u1`` (nonassociative).
    Basis order: ``X^0 .. X^(D-1), u1, u2``.
    """
    n = D + 2
    u1, u2 = D, D + 1
    sc = F.zeros((n, n, n))
    for i in range(D):
        for j in range(D - i):
            sc[i, j, i + j] = F.one
    for u in (u1, u2):
        sc[0, u, u] = F.one
        sc[u, 0, u] = F.one
    sc[u1, u1, u2] = F.one
    sc[u1, u2, u1] = F.one
    A = F.zeros((n, n))
    for i in range(D - 1):
        A[i + 1, i] = F.one
    names = [f"X^{i}" for i in range(D)] + ["u1", "u2"]
    a = Algebra(F, sc, names, unit=F.basis_vector(n, 0))
    return HomAlgebra(a, A)


@dataclass
class BoundedReport:
    identity_id: str
    status: str
    checked: int
    rejected: int
    witness: dict | None = None

    @property
    def ok(self) -> bool:
        return self.status == "pass"

    def to_dict(self) -> dict:
        return {
            "identity": self.identity_id,
            "status": self.status,
            "checked_tuples": self.checked,
            "rejected_tuples": self.rejected,
            "witness": self.witness,
        }


class DimTwoKernelFixture:
    """Degree-bounded view of ``K[X] x U`` with ``alpha(a, u) = (Xa, 0)``.

    The carrier is polynomials of degree ``< degree_bound`` plus ``U``.
    Computations run in a larger truncation; any basis tuple whose evaluation
    produces a term of degree ``>= degree_bound`` is rejected, never wrapped.
    """

    def __init__(self, degree_bound: int = DEFAULT_DEGREE_BOUND, field: Field = Q):
        if degree_bound < 2:
            raise ValueError("degree bound must be at least 2")
        self.field = field
        self.degree_bound = d = degree_bound
        self._D = 3 * d + 2
        self.ambient = _poly_extension(field, self._D)
        self.carrier = list(range(d)) + [self._D, self._D + 1]
        self.names = [self.ambient.algebra.name(i) for i in self.carrier]

    @property
    def dim(self) -> int:
        return len(self.carrier)

    def hom_algebra(self) -> HomAlgebra:
        """The finite quotient ``K[X]/(X^d) x U``: a genuine finite-dimensional hom-algebra."""
        h = _poly_extension(self.field, self.degree_bound)
        h.algebra.metadata = {"fixture": "ex-dim-two-kernel", "degree_bound": self.degree_bound}
        return h

    def alpha_matrix(self) -> np.ndarray:
        """Alpha on the carrier, with codomain the ambient truncation (rectangular)."""
        return self.ambient.alpha_matrix[:, self.carrier]

    def alpha_kernel(self) -> Subspace:
        return kernel_basis(self.field, self.alpha_matrix())

    def check(self, identity: Identity) -> BoundedReport:
        F, d, D = self.field, self.degree_bound, self._D
        h = self.ambient
        hits: list[np.ndarray] = []

        def track(v):
            hits.append(np.any(v[..., d:D] != 0, axis=-1))
            return v

        env_tensors = variable_tensors(F, len(self.carrier), identity.arity)
        E = F.eye(h.dim)[self.carrier]
        env = {name: np.tensordot(t, E, axes=([-1], [0])) for name, t in zip(identity.variables, env_tensors)}
        lhs = evaluate(identity.lhs, lambda a, b: track(h.mul(a, b)), lambda v: track(h.alpha(v)), None, env)
        rhs = evaluate(identity.rhs, lambda a, b: track(h.mul(a, b)), lambda v: track(h.alpha(v)), None, env)
        shape = (len(self.carrier),) * identity.arity
        over = np.zeros(shape, dtype=bool)
        for hit in hits:
            over |= np.broadcast_to(hit, shape)
        lhs = np.broadcast_to(lhs, shape + (h.dim,))
        rhs = np.broadcast_to(rhs, shape + (h.dim,))
        bad = np.any(lhs != rhs, axis=-1) & ~over
        checked = int(np.count_nonzero(~over))
        rejected = int(np.count_nonzero(over))
        if not np.any(bad):
            return BoundedReport(identity.id, "pass", checked, rejected)
        idx = tuple(int(i) for i in np.argwhere(bad)[0])
        witness = {v: self.names[i] for v, i in zip(identity.variables, idx)}
        return BoundedReport(identity.id, "fail", checked, rejected, witness)

    def check_hom_associative(self) -> BoundedReport:
        return self.check(ALL_IDENTITIES["hom-associative"])

    def check_associative(self) -> BoundedReport:
        return self.check(ALL_IDENTITIES["associative"])

    def associative_factor(self):
        """Quotient of the finite truncation by ``U``: truncated polynomials."""
        h = self.hom_algebra()
        d = self.degree_bound
        U = Subspace.span(self.field, [self.field.basis_vector(d + 2, d), self.field.basis_vector(d + 2, d + 1)], d + 2)
        return quotient_algebra(h, U)

    def report(self) -> dict:
        K = self.alpha_kernel()
        q, _, _ = self.associative_factor()
        return {
            "degree_bound": self.degree_bound,
            "carrier_dim": self.dim,
            "alpha_kernel_dim": K.dim,
            "hom_associative": self.check_hom_associative().to_dict(),
            "associative": self.check_associative().to_dict(),
            "factor_dim": q.dim,
            "factor_associative": bool(check_associative(q)),
        }


def ex_dim_two_kernel(degree_bound: int = DEFAULT_DEGREE_BOUND) -> HomAlgebra:
    return DimTwoKernelFixture(degree_bound).hom_algebra()


FIXTURES = {
    "ex-non-adjoint": lambda d: ex_non_adjoint(),
    "ex-dim-two-kernel": lambda d: ex_dim_two_kernel(d),
    "unital-nonassoc-3d": lambda d: unital_nonassoc_3d(),
    "gf2-componentwise": lambda d: gf2_componentwise(),
    "mat2-gf2": lambda d: mat2_gf2(),
    "dual-numbers-q": lambda d: dual_numbers_q(),
}


def fixture(name: str, degree_bound: int = DEFAULT_DEGREE_BOUND) -> HomAlgebra:
    try:
        build = FIXTURES[name]
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; choose from {', '.join(FIXTURES)}") from None
    return build(degree_bound)
