"""Twisting and de-twisting of products by linear maps.

The basic move is ``x * y := alpha(x . y)``; :func:`detwist` inverts it for
weakly left unital hom-associative algebras with bijective ``alpha``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .algebra import (
    Algebra,
    AlgebraError,
    HomAlgebra,
    IdentityReport,
    PreconditionError,
    check_associative,
    check_hom_associative,
    check_identity,
    find_units,
    is_two_sided_unit,
)
from .linalg import NotInvertible, Subspace, is_zero, kernel_basis
from .structure import centralizer, nucleus
from .terms import ALL_IDENTITIES, WEAK_UNIT_IDENTITIES, Identity, alpha, x, y, z


class NotEndomorphism(PreconditionError):
    pass


class NotAssociative(PreconditionError):
    pass


class NotUnital(PreconditionError):
    pass


class ConditionFails(PreconditionError):
    pass


class NotBijective(PreconditionError):
    pass


class NoWeakLeftUnit(PreconditionError):
    pass


class BudgetExceeded(AlgebraError):
    pass


# alpha(alpha(x) alpha(yz)) = alpha(alpha(xy) alpha(z)), in the untwisted product
TWIST_CONDITION = Identity("twist-condition", alpha(alpha(x) * alpha(y * z)), alpha(alpha(x * y) * alpha(z)))


def twisted_product(a: Algebra, A: np.ndarray) -> np.ndarray:
    """Structure constants of ``x * y = A (x . y)``."""
    return a.field.reduce(a.sc @ A.T)


def _unit_of(a: Algebra, unit=None) -> np.ndarray:
    if unit is not None:
        if not is_two_sided_unit(a, unit):
            raise NotUnital("supplied element is not a two-sided unit")
        return np.asarray(unit)
    u = find_units(a).two_sided_unit
    if u is None:
        raise NotUnital("algebra has no two-sided unit")
    return u


def endomorphism_witness(a: Algebra, A: np.ndarray):
    """First basis pair with ``A(e_i e_j) != A e_i . A e_j``, or ``None``."""
    F, n = a.field, a.dim
    E = F.eye(n)
    img = F.reduce(E @ A.T)
    lhs = F.reduce(a.mul(E[:, None, :], E[None, :, :]) @ A.T)
    rhs = a.mul(img[:, None, :], img[None, :, :])
    bad = np.argwhere(np.any(lhs != rhs, axis=-1))
    if bad.size:
        i, j = (int(v) for v in bad[0])
        return (i, j, lhs[i, j], rhs[i, j])
    return None


def yau_twist(a: Algebra, alpha_matrix, unit=None) -> HomAlgebra:
    """Twist a unital associative algebra by a unit-preserving endomorphism."""
    F = a.field
    A = F.array(alpha_matrix) if not isinstance(alpha_matrix, np.ndarray) else alpha_matrix
    assoc = check_associative(a)
    if not assoc:
        raise NotAssociative("yau_twist needs an associative algebra", assoc.witness)
    one = _unit_of(a, unit)
    w = endomorphism_witness(a, A)
    if w is not None:
        raise NotEndomorphism(f"alpha(e{w[0] + 1} e{w[1] + 1}) != alpha(e{w[0] + 1}) alpha(e{w[1] + 1})", w)
    if np.any(F.matmul(A, one) != one):
        raise NotEndomorphism("alpha does not fix the unit", ("unit", F.matmul(A, one)))
    h = HomAlgebra(Algebra(F, twisted_product(a, A), a.basis_names, metadata=a.metadata), A)
    assert check_hom_associative(h), "twist of an endomorphism must be hom-associative"
    return h


def generalized_twist(a: Algebra, alpha_matrix) -> HomAlgebra:
    """Twist by any linear map satisfying the twist condition on basis triples."""
    F = a.field
    A = F.array(alpha_matrix) if not isinstance(alpha_matrix, np.ndarray) else alpha_matrix
    cond = check_identity(HomAlgebra(a, A), TWIST_CONDITION)
    if not cond:
        raise ConditionFails("twist condition fails", cond.witness)
    h = HomAlgebra(Algebra(F, twisted_product(a, A), a.basis_names, metadata=a.metadata), A)
    assert check_hom_associative(h), "twist condition must imply hom-associativity"
    return h


@dataclass
class DetwistResult:
    detwisted: Algebra
    left_unit: np.ndarray
    beta: np.ndarray
    round_trip: bool

    def to_dict(self) -> dict:
        F = self.detwisted.field
        n = self.detwisted.dim
        prods = [
            [i, j, k, F.format(self.detwisted.sc[i, j, k])]
            for i in range(n) for j in range(n) for k in range(n)
            if self.detwisted.sc[i, j, k] != 0
        ]
        return {
            "products": prods,
            "left_unit": [F.format(v) for v in self.left_unit],
            "beta": [[F.format(v) for v in row] for row in self.beta],
            "round_trip": self.round_trip,
        }


def detwist(h: HomAlgebra) -> DetwistResult:
    """Recover ``x . y = beta(x * y)``: associative with left unit ``c``."""
    hom = check_hom_associative(h)
    if not hom:
        raise PreconditionError("input is not hom-associative", hom.witness)
    try:
        B = h.beta_matrix
    except NotInvertible:
        raise NotBijective("twisting map is not bijective") from None
    weak = find_units(h).weak_left_units
    if weak is None:
        raise NoWeakLeftUnit("no weak left unit exists")
    c = weak.particular
    F = h.field
    dot = Algebra(F, twisted_product(h.algebra, B), h.algebra.basis_names)
    E = F.eye(h.dim)
    if not check_associative(dot):
        raise AssertionError("detwisted product is not associative")
    if np.any(dot.mul(c, E) != E):
        raise AssertionError("weak left unit is not a left unit of the detwisted product")
    round_trip = bool(np.all(twisted_product(dot, h.alpha_matrix) == h.sc))
    return DetwistResult(dot, c, B, round_trip)


def verify_weak_unit_identities(h: HomAlgebra, diagnostic: bool = False) -> list[IdentityReport]:
    """Check the identities of a weakly left unital algebra with bijective alpha.

    Outside diagnostic mode a missing weak left unit, non-bijective alpha or
    failing hom-associativity raises. In diagnostic mode identities that
    cannot be stated are reported as skipped.
    """
    invertible = h.alpha_invertible()
    weak = find_units(h).weak_left_units if invertible else None
    if not diagnostic:
        hom = check_hom_associative(h)
        if not hom:
            raise PreconditionError("input is not hom-associative", hom.witness)
        if not invertible:
            raise NotBijective("twisting map is not bijective")
        if weak is None:
            raise NoWeakLeftUnit("no weak left unit exists")
    reports = []
    for ident in WEAK_UNIT_IDENTITIES.values():
        if ident.needs("beta") and not invertible:
            reports.append(IdentityReport(ident.id, "skipped", reason="alpha is not invertible"))
        elif ident.needs("const", "c") and weak is None:
            reports.append(IdentityReport(ident.id, "skipped", reason="no weak left unit"))
        else:
            consts = {"c": weak.particular} if weak is not None else None
            reports.append(check_identity(h, ident, consts))
    return reports


# -- twisting maps of a unital algebra ----------------------------------------


@dataclass
class TwistCorrespondence:
    """Elements ``a`` with ``y -> a*y`` a compatible twisting map, paired with those maps."""

    ac_elements: list
    twist_maps: list
    candidate_dim: int | None = None
    verified: bool = True

    def __len__(self) -> int:
        return len(self.ac_elements)

    def to_dict(self, F) -> dict:
        return {
            "count": len(self),
            "candidate_dim": self.candidate_dim,
            "ac_elements": [[F.format(v) for v in a] for a in self.ac_elements],
            "twist_maps": [[[F.format(v) for v in row] for row in M] for M in self.twist_maps],
            "verified": self.verified,
        }


def ac_candidate_space(a: Algebra) -> Subspace:
    """Linear part of the conditions: ``a`` central and ``e_i * a`` in the nucleus for all i."""
    F, n = a.field, a.dim
    Rn = nucleus(a).residual_matrix()
    # residual matrices vanish exactly on their subspace
    blocks = [centralizer(a).residual_matrix()]
    blocks += [F.matmul(Rn, a.left_matrix(F.basis_vector(n, i))) for i in range(n)]
    return kernel_basis(F, np.vstack(blocks))


def _aa_is_ideal(a: Algebra, elem: np.ndarray) -> bool:
    F, n = a.field, a.dim
    E = F.eye(n)
    Aa = Subspace.span(F, list(a.mul(E, elem)), n)
    if Aa.dim == 0:
        return True
    return Aa.contains_all(a.mul(E[:, None, :], Aa.basis[None, :, :])) and Aa.contains_all(
        a.mul(Aa.basis[None, :, :], E[:, None, :])
    )


def twist_map_of(a: Algebra, elem) -> np.ndarray:
    """``y -> elem * y`` as a matrix."""
    return a.left_matrix(np.asarray(elem))


def enumerate_twists(a: Algebra, unit=None, budget: int = 2**16, candidates=None) -> TwistCorrespondence:
    """All compatible twisting maps of a unital algebra via their values at 1.

    Over GF(p) the candidate subspace is enumerated exhaustively (raising
    :class:`BudgetExceeded` when it has more than ``budget`` points). Over Q
    only the supplied ``candidates`` are tested.
    """
    F, n = a.field, a.dim
    one = _unit_of(a, unit)
    space = ac_candidate_space(a)
    if candidates is None:
        if F.is_rational:
            raise ValueError("over Q supply candidate elements explicitly")
        size = F.p ** space.dim
        if size > budget:
            raise BudgetExceeded(f"{size} candidates exceed budget {budget}")
        pool = (
            F.reduce(np.asarray(coeffs, dtype=np.int64) @ space.basis) if space.dim else F.zeros(n)
            for coeffs in itertools.product(range(F.p), repeat=space.dim)
        )
    else:
        pool = (F.array(c) for c in candidates)

    found = []
    for elem in pool:
        if not space.contains(elem) or not _aa_is_ideal(a, elem):
            continue
        found.append(elem)
    found.sort(key=lambda v: tuple(v.tolist()))
    maps = [twist_map_of(a, e) for e in found]
    _verify_correspondence(a, one, found, maps, closed=candidates is None)
    return TwistCorrespondence(found, maps, space.dim)


def _verify_correspondence(a: Algebra, one, elems, maps, closed: bool = True) -> None:
    # a hand-picked candidate list need not be closed under products
    F = a.field
    index = {tuple(e.tolist()): i for i, e in enumerate(elems)}
    for e, M in zip(elems, maps):
        h = HomAlgebra(a, M)
        if not check_hom_associative(h):
            raise AssertionError("enumerated twisting map is not hom-associative")
        if np.any(F.matmul(M, one) != e):
            raise AssertionError("Phi(Psi(a)) != a")
    for (e1, M1), (e2, M2) in itertools.product(list(zip(elems, maps)), repeat=2):
        comp = F.matmul(M1, M2)
        prod = a.mul(e1, e2)
        if np.any(F.matmul(comp, one) != prod):
            raise AssertionError("Phi(a1 o a2) != Phi(a1) * Phi(a2)")
        if closed and tuple(prod.tolist()) not in index:
            raise AssertionError("AC set is not closed under multiplication")
        if np.any(twist_map_of(a, prod) != comp):
            raise AssertionError("Psi(a1 a2) != Psi(a1) o Psi(a2)")


# -- unitalization and embedding obstruction ---------------------------------


def unitalize_associative(a: Algebra) -> Algebra:
    """``K + A`` with ``(l, a)(m, b) = (lm, lb + ma + ab)``; unit is the new first basis vector.

    Basis vector ``e_{i+1}`` of the result is the image of ``e_i``.
    """
    assoc = check_associative(a)
    if not assoc:
        raise NotAssociative("unitalization needs an associative algebra", assoc.witness)
    F, n = a.field, a.dim
    sc = F.zeros((n + 1, n + 1, n + 1))
    sc[0, 0, 0] = F.one
    for i in range(n):
        sc[0, i + 1, i + 1] = F.one
        sc[i + 1, 0, i + 1] = F.one
    sc[1:, 1:, 1:] = a.sc
    names = ["1"] + [a.name(i) for i in range(n)]
    out = Algebra(F, sc, names, unit=F.basis_vector(n + 1, 0))
    assert check_associative(out) and is_two_sided_unit(out, out.unit)
    return out


@dataclass
class ObstructionWitness:
    x: np.ndarray
    y: np.ndarray
    value: np.ndarray  # alpha(x) * alpha(y), nonzero while x * y == 0

    def to_dict(self, F) -> dict:
        return {k: [F.format(v) for v in getattr(self, k)] for k in ("x", "y", "value")}


def weak_embedding_obstruction(h: HomAlgebra) -> ObstructionWitness | None:
    """Find ``x, y`` with ``x*y = 0`` but ``alpha(x)*alpha(y) != 0``.

    ``x`` ranges over the basis and ``y`` over a basis of the kernel of
    ``v -> x*v``; since ``alpha(x)*alpha(y)`` is linear in ``y`` this is
    complete for that shape of witness. ``None`` proves nothing.
    """
    F, n = h.field, h.dim
    for i in range(n):
        xv = F.basis_vector(n, i)
        K = kernel_basis(F, h.algebra.left_matrix(xv))
        ax = h.alpha(xv)
        for yv in K.basis:
            val = h.mul(ax, h.alpha(yv))
            if not is_zero(val):
                return ObstructionWitness(xv, yv.copy(), val)
    return None


def identity_by_id(name: str) -> Identity:
    return ALL_IDENTITIES[name]
