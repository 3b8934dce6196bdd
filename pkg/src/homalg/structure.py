"""Derived subspaces, unital identity suites, quotients and codimension analysis."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .algebra import (
    Algebra,
    AlgebraError,
    HomAlgebra,
    IdentityReport,
    PreconditionError,
    check_associative,
    check_commutative,
    check_hom_associative,
    check_identity,
    is_two_sided_unit,
)
from .linalg import Subspace, complement, image_basis, kernel_basis, rank
from .terms import UNITAL_IDENTITIES


class NotWellDefined(AlgebraError):
    """The product (or twisting map) does not descend to the quotient."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class DegenerateQuotient(AlgebraError):
    pass


def alpha_image(h: HomAlgebra) -> Subspace:
    return image_basis(h.field, h.alpha_matrix)


def alpha_kernel(h: HomAlgebra) -> Subspace:
    return kernel_basis(h.field, h.alpha_matrix)


@dataclass
class StabilityResult:
    ok: bool
    witness: tuple | None = None  # (kind, basis index, subspace row, offending vector)

    def __bool__(self) -> bool:
        return self.ok


def is_hom_ideal(h: HomAlgebra, s: Subspace) -> StabilityResult:
    """Is ``s`` closed under left/right products with any element and under alpha?"""
    if s.ambient_dim != h.dim:
        raise AlgebraError("subspace lives in a different ambient space")
    if s.dim == 0:
        return StabilityResult(True)
    E = h.field.eye(h.dim)
    S = s.basis
    checks = (
        ("left", h.mul(E[:, None, :], S[None, :, :])),   # e_i * s_r
        ("right", h.mul(S[None, :, :], E[:, None, :])),  # s_r * e_i
        ("alpha", h.alpha(S)[None, :, :]),
    )
    for kind, vecs in checks:
        res = s.residual(vecs)
        bad = np.argwhere(np.any(res != 0, axis=-1))
        if bad.size:
            i, r = (int(v) for v in bad[0])
            return StabilityResult(False, (kind, i, r, vecs[i, r]))
    return StabilityResult(True)


def associator_tensor(a: Algebra) -> np.ndarray:
    """``T[i, j, k] = (e_i e_j) e_k - e_i (e_j e_k)``."""
    E = a.field.eye(a.dim)
    n = a.dim
    X, Y, Z = E.reshape(n, 1, 1, n), E.reshape(1, n, 1, n), E.reshape(1, 1, n, n)
    return a.associator(X, Y, Z)


def nucleus(a) -> Subspace:
    """Elements whose associator vanishes in the left, middle and right slot."""
    if isinstance(a, HomAlgebra):
        a = a.algebra
    n = a.dim
    T = associator_tensor(a)
    left = T.transpose(1, 2, 3, 0).reshape(-1, n)
    middle = T.transpose(0, 2, 3, 1).reshape(-1, n)
    right = T.transpose(0, 1, 3, 2).reshape(-1, n)
    return kernel_basis(a.field, np.vstack([left, middle, right]))


def centralizer(a) -> Subspace:
    """Elements commuting with every element."""
    if isinstance(a, HomAlgebra):
        a = a.algebra
    n = a.dim
    D = a.field.reduce(a.sc - a.sc.transpose(1, 0, 2))
    return kernel_basis(a.field, D.transpose(1, 2, 0).reshape(n * n, n))


def verify_unital_identities(h: HomAlgebra, unit=None, diagnostic: bool = False) -> list[IdentityReport]:
    """Check the identities forced by a two-sided unit on all basis tuples.

    Outside diagnostic mode the unit and hom-associativity are verified
    first and a violation raises :class:`PreconditionError`. Diagnostic mode
    skips that and reports identities needing a unit as skipped when none
    is given.
    """
    if not diagnostic:
        if unit is None or not is_two_sided_unit(h.algebra, unit):
            raise PreconditionError("a verified two-sided unit is required")
        hom = check_hom_associative(h)
        if not hom:
            raise PreconditionError("input is not hom-associative", hom.witness)
    reports = []
    for ident in UNITAL_IDENTITIES.values():
        if ident.needs("const", "1") and unit is None:
            reports.append(IdentityReport(ident.id, "skipped", reason="no unit supplied"))
            continue
        consts = {"1": np.asarray(unit)} if unit is not None else None
        reports.append(check_identity(h, ident, consts))
    return reports


def quotient_algebra(h, s: Subspace):
    """The quotient by an ideal ``s`` in the basis of :func:`complement`.

    Returns ``(quotient, projection, induced_alpha)``; ``induced_alpha`` is
    ``None`` when ``h`` is a plain :class:`Algebra`.
    """
    a = h.algebra if isinstance(h, HomAlgebra) else h
    F, n = a.field, a.dim
    if s.dim == n:
        raise DegenerateQuotient("quotient by the whole space is zero-dimensional")
    E = F.eye(n)
    # the product descends iff S*V and V*S lie in S
    if s.dim:
        for kind, vecs in (
            ("left", a.mul(E[:, None, :], s.basis[None, :, :])),
            ("right", a.mul(s.basis[None, :, :], E[:, None, :])),
        ):
            bad = np.argwhere(np.any(s.residual(vecs) != 0, axis=-1))
            if bad.size:
                i, r = (int(v) for v in bad[0])
                raise NotWellDefined(f"product does not descend ({kind})", (kind, i, r))
    U = complement(s)
    reps = U.basis  # standard basis vectors at the free coordinates
    proj = s.coordinates_on_complement(E).T  # m x n
    sc = s.coordinates_on_complement(a.mul(reps[:, None, :], reps[None, :, :]))
    q = Algebra(F, sc)
    induced = None
    if isinstance(h, HomAlgebra):
        if s.dim and not s.contains_all(h.alpha(s.basis)):
            raise NotWellDefined("twisting map does not preserve the ideal")
        induced = s.coordinates_on_complement(h.alpha(reps)).T
    return q, proj, induced


def associative_factor(h: HomAlgebra):
    """Quotient by the kernel of the twisting map, with the induced twisting map."""
    K = alpha_kernel(h)
    ideal = is_hom_ideal(h, K)
    if not ideal:
        raise NotWellDefined("kernel of alpha is not a hom-ideal", ideal.witness)
    return quotient_algebra(h, K)


@dataclass
class CodimReport:
    dim: int
    rank_alpha: int
    codim_im_alpha: int
    alpha_injective: bool
    alpha_surjective: bool
    alpha_injective_on_image: bool
    unit_in_image: bool
    unit_line: Subspace
    im_alpha: Subspace
    u_complement: Subspace
    commutative: bool
    clauses: dict
    predicted_associative: bool
    triggering_clause: str | None
    actual_associative: bool
    violations: list = dc_field(default_factory=list)
    cube_defect_in_image: bool | None = None

    @property
    def consistent(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "rank_alpha": self.rank_alpha,
            "codim_im_alpha": self.codim_im_alpha,
            "alpha_injective": self.alpha_injective,
            "alpha_surjective": self.alpha_surjective,
            "alpha_injective_on_image": self.alpha_injective_on_image,
            "unit_in_image": self.unit_in_image,
            "decomposition": {
                "unit_line_dim": self.unit_line.dim,
                "im_alpha_dim": self.im_alpha.dim,
                "u_complement_dim": self.u_complement.dim,
            },
            "commutative": self.commutative,
            "clauses": self.clauses,
            "predicted_associative": self.predicted_associative,
            "triggering_clause": self.triggering_clause,
            "actual_associative": self.actual_associative,
            "cube_defect_in_image": self.cube_defect_in_image,
            "violations": list(self.violations),
        }


def codim_analysis(h: HomAlgebra, unit) -> CodimReport:
    """Codimension-based associativity criteria, cross-checked against the algebra.

    Clauses: (1) codim Im(alpha) <= 1; (2) codim <= 2 and commutative;
    (3) codim <= 2 and alpha injective on Im(alpha).
    """
    F, n = h.field, h.dim
    unit = np.asarray(unit)
    if not is_two_sided_unit(h.algebra, unit):
        raise PreconditionError("codim_analysis needs a two-sided unit")
    hom = check_hom_associative(h)
    if not hom:
        raise PreconditionError("input is not hom-associative", hom.witness)

    A = h.alpha_matrix
    r = rank(F, A)
    r2 = rank(F, F.matmul(A, A))
    codim = n - r
    im = alpha_image(h)
    line = Subspace.span(F, [unit], n)
    unit_in_image = im.contains(unit)
    base = im + line
    U = complement(base)
    commutative = bool(check_commutative(h))
    clauses = {
        "codim<=1": codim <= 1,
        "codim<=2+commutative": codim <= 2 and commutative,
        "codim<=2+injective-on-image": codim <= 2 and r2 == r,
    }
    trigger = next((k for k, v in clauses.items() if v), None)
    actual = bool(check_associative(h))
    injective = surjective = r == n

    violations = []
    if surjective and not injective:
        violations.append("surjective alpha is not injective")
    if injective and not actual:
        violations.append("injective alpha but not associative")
    if trigger is not None and not actual:
        violations.append(f"clause {trigger} fired but algebra is not associative")

    cube = None
    if not unit_in_image and U.dim == 1:
        u = U.basis[0]
        uu = h.mul(u, u)
        defect = F.reduce(h.mul(u, uu) - h.mul(uu, u))
        cube = im.contains(defect)

    return CodimReport(
        dim=n,
        rank_alpha=r,
        codim_im_alpha=codim,
        alpha_injective=injective,
        alpha_surjective=surjective,
        alpha_injective_on_image=r2 == r,
        unit_in_image=unit_in_image,
        unit_line=line,
        im_alpha=im,
        u_complement=U,
        commutative=commutative,
        clauses=clauses,
        predicted_associative=trigger is not None,
        triggering_clause=trigger,
        actual_associative=actual,
        violations=violations,
        cube_defect_in_image=cube,
    )
