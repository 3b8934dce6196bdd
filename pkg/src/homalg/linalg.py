"""Exact linear algebra over the rationals and prime fields.

Vectors and matrices are numpy arrays. Over GF(p) they hold canonical
``int64`` residues in ``[0, p)``; over Q they are ``object`` arrays of
:class:`fractions.Fraction`. Every function takes the :class:`Field` as its
first argument so the same code path serves both.
"""

from __future__ import annotations

from dataclasses import dataclass
import math
from fractions import Fraction
from typing import Iterable, Iterator

import numpy as np

MAX_PRIME = 2**16


class LinAlgError(ValueError):
    pass


class NotInvertible(LinAlgError):
    pass


class NoSolution(LinAlgError):
    pass


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class Field:
    """Either Q (``p is None``) or GF(p) for a prime ``2 <= p < 2**16``."""

    p: int | None = None

    def __post_init__(self):
        if self.p is not None:
            if not isinstance(self.p, int) or not _is_prime(self.p):
                raise ValueError(f"GF(p) requires a prime p, got {self.p!r}")
            if self.p >= MAX_PRIME:
                raise ValueError(f"prime {self.p} too large (must be < 2^16)")

    @classmethod
    def rationals(cls) -> "Field":
        return cls(None)

    @classmethod
    def gf(cls, p: int) -> "Field":
        return cls(p)

    @property
    def is_rational(self) -> bool:
        return self.p is None

    @property
    def dtype(self):
        return object if self.p is None else np.int64

    def __str__(self) -> str:
        return "Q" if self.p is None else f"GF({self.p})"

    __repr__ = __str__

    # -- scalars ---------------------------------------------------------

    def __call__(self, x) -> Fraction | int:
        """Coerce ``x`` (int, Fraction, numeric string) to a canonical scalar."""
        if isinstance(x, str):
            return self.parse(x)
        if self.p is None:
            return Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"{x} has no value in {self}")
            return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
        return int(x) % self.p

    def parse(self, s: str) -> Fraction | int:
        s = s.strip()
        try:
            value = Fraction(s)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"cannot parse scalar {s!r}") from exc
        return self(value)

    def format(self, x) -> str:
        return str(Fraction(x)) if self.p is None else str(int(x))

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.p is None:
            return 1 / Fraction(x)
        return pow(int(x), self.p - 2, self.p)

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def elements(self) -> Iterator[int]:
        if self.p is None:
            raise ValueError("Q is infinite")
        return iter(range(self.p))

    def random_scalar(self, rng, spread: int = 3):
        """Uniform residue over GF(p); a small integer in ``[-spread, spread]`` over Q."""
        if self.p is None:
            return Fraction(rng.randint(-spread, spread))
        return rng.randrange(self.p)

    # -- arrays ----------------------------------------------------------

    def array(self, data) -> np.ndarray:
        """Convert nested data to a canonical array over this field."""
        if self.p is None:
            arr = np.array(data, dtype=object)
            if arr.size:
                flat = [self(v) for v in arr.ravel()]
                arr = np.empty(arr.shape, dtype=object)
                arr.ravel()[:] = flat
            return arr
        arr = np.array(data, dtype=object)
        if arr.size:
            flat = [self(v) for v in arr.ravel()]
            return np.array(flat, dtype=np.int64).reshape(arr.shape)
        return np.zeros(arr.shape, dtype=np.int64)

    def reduce(self, arr: np.ndarray) -> np.ndarray:
        """Bring an integer-valued array back into ``[0, p)``; no-op over Q."""
        if self.p is None:
            return arr
        return np.mod(arr, self.p)

    def zeros(self, shape) -> np.ndarray:
        if self.p is None:
            out = np.empty(shape, dtype=object)
            out.fill(Fraction(0))
            return out
        return np.zeros(shape, dtype=np.int64)

    def eye(self, n: int) -> np.ndarray:
        out = self.zeros((n, n))
        for i in range(n):
            out[i, i] = self.one
        return out

    def basis_vector(self, n: int, i: int) -> np.ndarray:
        v = self.zeros(n)
        v[i] = self.one
        return v

    def random_array(self, rng, shape, spread: int = 3) -> np.ndarray:
        out = self.zeros(shape)
        for idx in np.ndindex(*out.shape):
            out[idx] = self.random_scalar(rng, spread)
        return out

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self.reduce(a @ b)


INT64_SAFE = 1 << 62


def scaled_integers(arr: np.ndarray):
    """``(ints, denom, bound)`` with ``arr == ints / denom`` for a rational array.

    ``ints`` is ``int64`` and ``bound`` the largest absolute numerator.
    Returns ``None`` when the numerators do not fit.
    """
    flat = arr.ravel().tolist()
    denom = math.lcm(*(Fraction(v).denominator for v in flat)) if flat else 1
    nums = [int(Fraction(v) * denom) for v in flat]
    bound = max(map(abs, nums), default=0)
    if bound >= INT64_SAFE:
        return None
    return np.array(nums, dtype=np.int64).reshape(arr.shape), denom, bound


def from_scaled(ints: np.ndarray, denom: int) -> np.ndarray:
    out = np.empty(ints.shape, dtype=object)
    out.ravel()[:] = [Fraction(v, denom) for v in ints.ravel().tolist()]
    return out


def is_zero(arr: np.ndarray) -> bool:
    return not np.any(arr != 0)


def rref(F: Field, m) -> tuple[np.ndarray, list[int]]:
    """Reduced row-echelon form and pivot columns of ``m``."""
    R = F.array(m) if not isinstance(m, np.ndarray) else m.copy()
    if R.ndim != 2:
        raise LinAlgError("rref expects a 2-d matrix")
    rows, cols = R.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(R[r:, c] != 0)[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            R[[r, i]] = R[[i, r]]
        R[r] = F.reduce(R[r] * F.inv(R[r, c]))
        for i in np.nonzero(R[:, c] != 0)[0]:
            if i != r:
                R[i] = F.reduce(R[i] - R[i, c] * R[r])
        pivots.append(c)
        r += 1
    return R, pivots


def rank(F: Field, m) -> int:
    return len(rref(F, m)[1])


@dataclass(frozen=True, eq=False)
class Subspace:
    """A subspace of ``F^n`` held as the nonzero rows of an RREF matrix.

    The representation is canonical, so ``==`` is subspace equality.
    """

    field: Field
    ambient_dim: int
    basis: np.ndarray
    pivots: tuple[int, ...]

    @classmethod
    def span(cls, F: Field, vectors, ambient_dim: int) -> "Subspace":
        vecs = [np.asarray(v) for v in vectors]
        if not vecs:
            return cls.zero(F, ambient_dim)
        M = np.vstack(vecs)
        if M.dtype != F.dtype:
            M = F.array(M)
        if M.shape[1] != ambient_dim:
            raise LinAlgError("vector length does not match ambient dimension")
        R, piv = rref(F, M)
        return cls(F, ambient_dim, R[: len(piv)].copy(), tuple(piv))

    @classmethod
    def zero(cls, F: Field, n: int) -> "Subspace":
        return cls(F, n, F.zeros((0, n)), ())

    @classmethod
    def full(cls, F: Field, n: int) -> "Subspace":
        return cls(F, n, F.eye(n), tuple(range(n)))

    @property
    def dim(self) -> int:
        return len(self.pivots)

    @property
    def codim(self) -> int:
        return self.ambient_dim - self.dim

    def __len__(self) -> int:
        return self.dim

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return (
            self.field == other.field
            and self.ambient_dim == other.ambient_dim
            and self.pivots == other.pivots
            and bool(np.all(self.basis == other.basis))
        )

    def __hash__(self):
        return hash((self.field, self.ambient_dim, self.pivots))

    def __repr__(self) -> str:
        rows = [[self.field.format(x) for x in row] for row in self.basis]
        return f"Subspace({self.field}, dim={self.dim}/{self.ambient_dim}, {rows})"

    def residual(self, v: np.ndarray) -> np.ndarray:
        """Reduce ``v`` (or a stack of vectors on the last axis) modulo this subspace.

        The result is zero exactly when ``v`` lies in the subspace; otherwise it
        is supported on the non-pivot coordinates only.
        """
        v = np.asarray(v)
        out = v.copy()
        for row, piv in zip(self.basis, self.pivots):
            out = self.field.reduce(out - out[..., piv, None] * row)
        return out

    def contains(self, v: np.ndarray) -> bool:
        return is_zero(self.residual(v))

    def contains_all(self, vs: np.ndarray) -> bool:
        return is_zero(self.residual(vs))

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace.span(self.field, list(self.basis) + list(other.basis), self.ambient_dim)

    def __le__(self, other: "Subspace") -> bool:
        return other.contains_all(self.basis) if self.dim else True

    def residual_matrix(self) -> np.ndarray:
        """Matrix ``R`` with ``R @ v == residual(v)``."""
        return self.residual(self.field.eye(self.ambient_dim)).T

    def coordinates_on_complement(self, v: np.ndarray) -> np.ndarray:
        """Coordinates of ``v + S`` in the basis of :func:`complement`."""
        free = [c for c in range(self.ambient_dim) if c not in self.pivots]
        return self.residual(v)[..., free]

    def vectors(self) -> Iterable[np.ndarray]:
        return iter(self.basis)


def kernel_basis(F: Field, m: np.ndarray) -> Subspace:
    """``{v : m @ v = 0}`` as a canonical subspace."""
    m = np.asarray(m)
    cols = m.shape[1]
    if m.shape[0] == 0:
        return Subspace.full(F, cols)
    R, piv = rref(F, m)
    vecs = []
    for f in range(cols):
        if f in piv:
            continue
        v = F.zeros(cols)
        v[f] = F.one
        for r, pc in enumerate(piv):
            v[pc] = -R[r, f]
        vecs.append(F.reduce(v))
    return Subspace.span(F, vecs, cols)


def image_basis(F: Field, m: np.ndarray) -> Subspace:
    """Column space of ``m``."""
    m = np.asarray(m)
    return Subspace.span(F, list(m.T), m.shape[0])


def invert(F: Field, m: np.ndarray) -> np.ndarray:
    m = np.asarray(m)
    n, k = m.shape
    if n != k:
        raise LinAlgError("invert expects a square matrix")
    aug = np.hstack([m, F.eye(n)])
    R, piv = rref(F, aug)
    if piv[:n] != list(range(n)):
        raise NotInvertible(f"matrix has rank {sum(1 for c in piv if c < n)} < {n}")
    return R[:, n:].copy()


def complement(s: Subspace) -> Subspace:
    """Direct complement spanned by the standard basis vectors at non-pivot positions."""
    F, n = s.field, s.ambient_dim
    free = [c for c in range(n) if c not in s.pivots]
    return Subspace.span(F, [F.basis_vector(n, c) for c in free], n)


def solve_affine(F: Field, lhs: np.ndarray, rhs: np.ndarray) -> tuple[np.ndarray, Subspace]:
    """All solutions of ``lhs @ x = rhs`` as ``(particular, kernel)``.

    Raises :class:`NoSolution` when ``rhs`` is outside the column space.
    """
    lhs = np.asarray(lhs)
    rhs = np.asarray(rhs)
    if lhs.shape[0] != rhs.shape[0]:
        raise LinAlgError("lhs rows and rhs length differ")
    cols = lhs.shape[1]
    aug = np.hstack([lhs, rhs.reshape(-1, 1)])
    R, piv = rref(F, aug)
    if piv and piv[-1] == cols:
        raise NoSolution("right-hand side is not in the column space")
    x = F.zeros(cols)
    for r, pc in enumerate(piv):
        x[pc] = R[r, cols]
    return x, kernel_basis(F, lhs)
