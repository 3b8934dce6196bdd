"""Structure-constant algebras, twisting maps and unit solvers."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .linalg import (
    INT64_SAFE,
    Field,
    NoSolution,
    NotInvertible,
    Subspace,
    from_scaled,
    invert,
    scaled_integers,
    solve_affine,
)
from .terms import BASE_IDENTITIES, Identity, evaluate, variable_tensors


class AlgebraError(ValueError):
    pass


class PreconditionError(AlgebraError):
    """An operation was called on an input outside its domain."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class Algebra:
    """A finite-dimensional algebra with ``e_i * e_j = sum_k sc[i, j, k] e_k``.

    ``unit`` and ``metadata`` are carried along for serialization only; a
    declared unit is never trusted without :func:`find_units`.
    """

    def __init__(self, field: Field, sc, basis_names=None, unit=None, metadata=None):
        sc = sc if isinstance(sc, np.ndarray) and sc.dtype == field.dtype else field.array(sc)
        if sc.ndim != 3 or len(set(sc.shape)) != 1:
            raise AlgebraError(f"structure constants must be an n x n x n tensor, got shape {sc.shape}")
        n = sc.shape[0]
        if n < 1:
            raise AlgebraError("algebra dimension must be at least 1")
        self.field = field
        self.sc = sc
        self.dim = n
        self._scflat = sc.reshape(n, n * n)
        self._sc_scaled = scaled_integers(self._scflat) if field.is_rational else None
        if basis_names is not None:
            basis_names = list(basis_names)
            if len(basis_names) != n:
                raise AlgebraError(f"{len(basis_names)} basis names for dimension {n}")
        self.basis_names = basis_names
        self.unit = None if unit is None else field.array(unit)
        if self.unit is not None and self.unit.shape != (n,):
            raise AlgebraError("declared unit has the wrong length")
        self.metadata = dict(metadata or {})

    @classmethod
    def from_products(cls, field: Field, n: int, products: dict, **kw) -> "Algebra":
        """Build from a sparse ``{(i, j): vector}`` product table."""
        sc = field.zeros((n, n, n))
        for (i, j), v in products.items():
            sc[i, j] = field.array(v)
        return cls(field, sc, **kw)

    def __repr__(self) -> str:
        return f"Algebra({self.field}, dim={self.dim})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, Algebra):
            return NotImplemented
        return self.field == other.field and self.dim == other.dim and bool(np.all(self.sc == other.sc))

    __hash__ = None

    def name(self, i: int) -> str:
        return self.basis_names[i] if self.basis_names else f"e{i + 1}"

    def e(self, i: int) -> np.ndarray:
        return self.field.basis_vector(self.dim, i)

    def element(self, coords) -> np.ndarray:
        v = self.field.array(coords)
        if v.shape != (self.dim,):
            raise AlgebraError(f"element needs {self.dim} coordinates, got {v.shape}")
        return v

    def mul(self, x, y) -> np.ndarray:
        """Bilinear product, broadcasting over leading axes of ``x`` and ``y``."""
        F, n = self.field, self.dim
        x = np.asarray(x)
        y = np.asarray(y)
        if x.shape[-1] != n or y.shape[-1] != n:
            raise AlgebraError("dimension mismatch in product")
        if self._sc_scaled is not None:
            fast = self._mul_scaled(x, y)
            if fast is not None:
                return fast
        tmp = F.reduce(x @ self._scflat).reshape(x.shape[:-1] + (n, n))
        return F.reduce(np.einsum("...b,...bt->...t", y, tmp))

    def _mul_scaled(self, x, y):
        # over Q: clear denominators and multiply in int64 when no sum can overflow
        n = self.dim
        S, ds, bs = self._sc_scaled
        sx, sy = scaled_integers(x), scaled_integers(y)
        if sx is None or sy is None:
            return None
        (X, dx, bx), (Y, dy, by) = sx, sy
        if bx * by * bs * n * n >= INT64_SAFE:
            return None
        tmp = (X @ S).reshape(x.shape[:-1] + (n, n))
        return from_scaled(np.einsum("...b,...bt->...t", Y, tmp), dx * dy * ds)

    def associator(self, x, y, z) -> np.ndarray:
        return self.field.reduce(self.mul(self.mul(x, y), z) - self.mul(x, self.mul(y, z)))

    def left_matrix(self, x) -> np.ndarray:
        """``L`` with ``L @ y == x * y``."""
        n = self.dim
        return self.field.reduce(np.asarray(x) @ self._scflat).reshape(n, n).T.copy()

    def right_matrix(self, y) -> np.ndarray:
        """``R`` with ``R @ x == x * y``."""
        return self.field.reduce(np.einsum("b,abt->ta", np.asarray(y), self.sc))

    def change_basis(self, P: np.ndarray) -> "Algebra":
        """Re-express in the basis given by the columns of ``P``."""
        F = self.field
        Pinv = invert(F, P)
        cols = P.T
        prods = self.mul(cols[:, None, :], cols[None, :, :])
        sc = F.reduce(prods @ Pinv.T)
        unit = None if self.unit is None else F.matmul(Pinv, self.unit)
        return Algebra(F, sc, unit=unit, metadata=self.metadata)

    def with_unit(self, unit) -> "Algebra":
        return Algebra(self.field, self.sc, self.basis_names, unit, self.metadata)


class HomAlgebra:
    """An :class:`Algebra` with a linear twisting map ``alpha(v) = A @ v``.

    Hom-associativity is deliberately not enforced; see
    :func:`check_hom_associative`.
    """

    def __init__(self, algebra: Algebra, alpha):
        F = algebra.field
        A = alpha if isinstance(alpha, np.ndarray) and alpha.dtype == F.dtype else F.array(alpha)
        if A.shape != (algebra.dim, algebra.dim):
            raise AlgebraError(f"twisting map must be {algebra.dim} x {algebra.dim}, got {A.shape}")
        self.algebra = algebra
        self.alpha_matrix = A
        self._beta = None

    def __repr__(self) -> str:
        return f"HomAlgebra({self.field}, dim={self.dim})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, HomAlgebra):
            return NotImplemented
        return self.algebra == other.algebra and bool(np.all(self.alpha_matrix == other.alpha_matrix))

    __hash__ = None

    @property
    def field(self) -> Field:
        return self.algebra.field

    @property
    def dim(self) -> int:
        return self.algebra.dim

    @property
    def sc(self) -> np.ndarray:
        return self.algebra.sc

    @property
    def unit(self):
        return self.algebra.unit

    def mul(self, x, y):
        return self.algebra.mul(x, y)

    def alpha(self, v) -> np.ndarray:
        return self.field.reduce(np.asarray(v) @ self.alpha_matrix.T)

    @property
    def beta_matrix(self) -> np.ndarray:
        """Inverse twisting matrix; raises :class:`NotInvertible`."""
        if self._beta is None:
            self._beta = invert(self.field, self.alpha_matrix)
        return self._beta

    def beta(self, v) -> np.ndarray:
        return self.field.reduce(np.asarray(v) @ self.beta_matrix.T)

    def alpha_invertible(self) -> bool:
        try:
            self.beta_matrix
        except NotInvertible:
            return False
        return True

    def change_basis(self, P: np.ndarray) -> "HomAlgebra":
        F = self.field
        Pinv = invert(F, P)
        return HomAlgebra(self.algebra.change_basis(P), F.matmul(Pinv, F.matmul(self.alpha_matrix, P)))


@dataclass
class IdentityReport:
    """Outcome of checking one identity on all basis tuples."""

    identity_id: str
    status: str  # "pass" | "fail" | "skipped"
    witness: dict | None = None
    lhs: np.ndarray | None = None
    rhs: np.ndarray | None = None
    failures: int = 0
    reason: str = ""
    names: list = dc_field(default_factory=list, repr=False)
    field: Field | None = dc_field(default=None, repr=False)

    @property
    def ok(self) -> bool:
        return self.status == "pass"

    def __bool__(self) -> bool:
        return self.ok

    def to_dict(self) -> dict:
        out = {"identity": self.identity_id, "status": self.status}
        if self.witness is not None:
            out["witness"] = {k: self.names[i] for k, i in self.witness.items()}
            out["lhs"] = [self.field.format(v) for v in self.lhs]
            out["rhs"] = [self.field.format(v) for v in self.rhs]
            out["failures"] = self.failures
        if self.reason:
            out["reason"] = self.reason
        return out


def _names(a: Algebra) -> list[str]:
    return [a.name(i) for i in range(a.dim)]


def identity_sides(a: Algebra, identity: Identity, alpha=None, beta=None, constants=None):
    """Evaluate both sides of ``identity`` on every basis tuple.

    Returns arrays of shape ``(n,) * arity + (n,)``.
    """
    F, n = a.field, a.dim
    env = dict(zip(identity.variables, variable_tensors(F, n, identity.arity)))
    for k, v in (constants or {}).items():
        env[k] = v
    apply_a = (lambda v: F.reduce(v @ alpha.T)) if alpha is not None else _missing_alpha
    apply_b = (lambda v: F.reduce(v @ beta.T)) if beta is not None else None
    lhs = evaluate(identity.lhs, a.mul, apply_a, apply_b, env)
    rhs = evaluate(identity.rhs, a.mul, apply_a, apply_b, env)
    shape = (n,) * identity.arity + (n,)
    return np.broadcast_to(lhs, shape), np.broadcast_to(rhs, shape)


def _missing_alpha(v):
    raise AlgebraError("identity uses alpha but no twisting map was given")


def compare_sides(a: Algebra, identity_id: str, variables, lhs, rhs) -> IdentityReport:
    bad = np.any(lhs != rhs, axis=-1)
    names = _names(a)
    if not np.any(bad):
        return IdentityReport(identity_id, "pass", names=names, field=a.field)
    # argwhere is row-major, so this is the lexicographically first tuple
    idx = tuple(int(i) for i in np.argwhere(bad)[0])
    return IdentityReport(
        identity_id,
        "fail",
        witness=dict(zip(variables, idx)),
        lhs=np.array(lhs[idx]),
        rhs=np.array(rhs[idx]),
        failures=int(np.count_nonzero(bad)),
        names=names,
        field=a.field,
    )


def check_identity(target, identity: Identity, constants=None) -> IdentityReport:
    """Check ``identity`` on ``target`` (Algebra or HomAlgebra) over all basis tuples."""
    if isinstance(target, HomAlgebra):
        a, A = target.algebra, target.alpha_matrix
        B = target.beta_matrix if identity.needs("beta") else None
    else:
        a, A, B = target, None, None
    lhs, rhs = identity_sides(a, identity, A, B, constants)
    return compare_sides(a, identity.id, identity.variables, lhs, rhs)


def check_hom_associative(h: HomAlgebra) -> IdentityReport:
    """``alpha(x)*(y*z) == (x*y)*alpha(z)`` on every basis triple (complete by multilinearity)."""
    return check_identity(h, BASE_IDENTITIES["hom-associative"])


def check_associative(a) -> IdentityReport:
    if isinstance(a, HomAlgebra):
        a = a.algebra
    return check_identity(a, BASE_IDENTITIES["associative"])


def check_commutative(a) -> IdentityReport:
    if isinstance(a, HomAlgebra):
        a = a.algebra
    return check_identity(a, BASE_IDENTITIES["commutative"])


def multiply(a: Algebra, x, y) -> np.ndarray:
    x, y = np.asarray(x), np.asarray(y)
    if x.shape != (a.dim,) or y.shape != (a.dim,):
        raise AlgebraError("dimension mismatch in product")
    return a.mul(x, y)


def associator(a: Algebra, x, y, z) -> np.ndarray:
    for v in (x, y, z):
        if np.asarray(v).shape != (a.dim,):
            raise AlgebraError("dimension mismatch in associator")
    return a.associator(x, y, z)


# -- units --------------------------------------------------------------------


@dataclass(frozen=True)
class AffineSet:
    """The solution set ``particular + homogeneous``."""

    particular: np.ndarray
    homogeneous: Subspace

    @property
    def dim(self) -> int:
        return self.homogeneous.dim

    def contains(self, v) -> bool:
        F = self.homogeneous.field
        return self.homogeneous.contains(F.reduce(np.asarray(v) - self.particular))

    def to_dict(self, F: Field) -> dict:
        return {
            "particular": [F.format(v) for v in self.particular],
            "homogeneous_dim": self.dim,
            "homogeneous_basis": [[F.format(v) for v in row] for row in self.homogeneous.basis],
        }


@dataclass(frozen=True)
class UnitReport:
    two_sided_unit: np.ndarray | None
    left_units: AffineSet | None
    right_units: AffineSet | None
    weak_left_units: AffineSet | None
    weak_right_units: AffineSet | None

    @property
    def unital(self) -> bool:
        return self.two_sided_unit is not None

    @property
    def weakly_unital(self) -> bool:
        return self.weak_left_units is not None and self.weak_right_units is not None

    def to_dict(self, F: Field) -> dict:
        def enc(s):
            return None if s is None else s.to_dict(F)

        return {
            "two_sided_unit": None if self.two_sided_unit is None else [F.format(v) for v in self.two_sided_unit],
            "left_units": enc(self.left_units),
            "right_units": enc(self.right_units),
            "weak_left_units": enc(self.weak_left_units),
            "weak_right_units": enc(self.weak_right_units),
        }


def _left_system(a: Algebra) -> np.ndarray:
    # rows (i, t), column k: coefficient of u_k in (u * e_i)_t
    n = a.dim
    return a.sc.transpose(1, 2, 0).reshape(n * n, n)


def _right_system(a: Algebra) -> np.ndarray:
    # rows (i, t), column k: coefficient of u_k in (e_i * u)_t
    n = a.dim
    return a.sc.transpose(0, 2, 1).reshape(n * n, n)


def _solve(F, lhs, rhs) -> AffineSet | None:
    try:
        return AffineSet(*solve_affine(F, lhs, rhs))
    except NoSolution:
        return None


def find_units(target) -> UnitReport:
    """Solve the linear systems for left, right, two-sided and weak units.

    Weak units need a twisting map; for a plain :class:`Algebra` they are
    reported as absent.
    """
    if isinstance(target, HomAlgebra):
        a, A = target.algebra, target.alpha_matrix
    else:
        a, A = target, None
    F, n = a.field, a.dim
    L, R = _left_system(a), _right_system(a)
    ident = F.eye(n).reshape(n * n)
    left = _solve(F, L, ident)
    right = _solve(F, R, ident)
    two = None
    if left is not None and right is not None:
        both = _solve(F, np.vstack([L, R]), np.concatenate([ident, ident]))
        if both is not None:
            if both.dim != 0:
                raise AssertionError("two-sided unit is not unique")
            two = both.particular
    weak_left = weak_right = None
    if A is not None:
        target_rows = A.T.reshape(n * n)  # (i, t) -> alpha(e_i)_t
        weak_left = _solve(F, L, target_rows)
        weak_right = _solve(F, R, target_rows)
    return UnitReport(two, left, right, weak_left, weak_right)


def is_two_sided_unit(a: Algebra, u) -> bool:
    E = a.field.eye(a.dim)
    u = np.asarray(u)
    return bool(np.all(a.mul(u, E) == E) and np.all(a.mul(E, u) == E))


def is_weak_left_unit(h: HomAlgebra, c) -> bool:
    E = h.field.eye(h.dim)
    return bool(np.all(h.mul(np.asarray(c), E) == h.alpha(E)))


def is_weak_right_unit(h: HomAlgebra, c) -> bool:
    E = h.field.eye(h.dim)
    return bool(np.all(h.mul(E, np.asarray(c)) == h.alpha(E)))
