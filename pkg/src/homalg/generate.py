"""Seeded random hom-associative algebras, one recipe per known construction.

Recipes
-------
central-multiplication
    A unital algebra with ``alpha = a *`` for an element ``a`` in the
    admissible set (central, and ``A a`` an ideal of associating elements).
    Either a product of associative blocks, or ``K[t]/(f) x U`` with ``U`` a
    random (usually nonassociative) algebra acted on through a character.
yau
    ``x * y = alpha(x . y)`` for a unit-preserving endomorphism of a unital
    associative algebra.
generalized-yau
    ``x * y = alpha(x . y)`` for ``alpha = c . phi(-)`` (``c`` central,
    ``phi`` an endomorphism) or ``lambda phi`` on a left-unital-only algebra.
zero-twist
    A random product with ``alpha = 0``.

All outputs are moved to a random basis and re-checked before return.
"""

from __future__ import annotations

import random

import numpy as np

from .algebra import Algebra, HomAlgebra, check_hom_associative, is_two_sided_unit
from .fixtures import matrix_algebra, truncated_polynomials
from .linalg import Field, invert, rank
from .twisting import generalized_twist, yau_twist

RECIPES = ("central-multiplication", "yau", "generalized-yau", "zero-twist")
MAX_TRIES = 64


class GenerationError(RuntimeError):
    pass


def random_invertible(F: Field, n: int, rng: random.Random, spread: int = 2) -> np.ndarray:
    for _ in range(MAX_TRIES):
        P = F.random_array(rng, (n, n), spread)
        if rank(F, P) == n:
            return P
    raise GenerationError("no invertible matrix found")


def _nonzero(F: Field, rng: random.Random, spread: int = 3):
    while True:
        v = F.random_scalar(rng, spread)
        if v != 0:
            return v


def _poly_mul(F: Field, p, q):
    out = [F.zero] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] = F(out[i + j] + a * b)
    return out


def _poly_mulmod(F: Field, p, q, f):
    """Product of coefficient lists (low degree first) modulo the monic ``f``."""
    k = len(f) - 1
    out = _poly_mul(F, p, q)
    for deg in range(len(out) - 1, k - 1, -1):
        c = out[deg]
        if c != 0:
            for i in range(k + 1):
                out[deg - k + i] = F(out[deg - k + i] - c * f[i])
    out = out[:k] + [F.zero] * max(0, k - len(out))
    return out


def _quotient_ring(F: Field, f) -> Algebra:
    """``K[t]/(f)`` in the monomial basis for a monic ``f`` (low degree first)."""
    k = len(f) - 1
    sc = F.zeros((k, k, k))
    for i in range(k):
        for j in range(k):
            mono = [F.zero] * (i + j) + [F.one]
            sc[i, j] = F.array(_poly_mulmod(F, mono, [F.one], f))
    return Algebra(F, sc, unit=F.basis_vector(k, 0))


def _block_sum(F: Field, blocks: list[Algebra]) -> Algebra:
    n = sum(b.dim for b in blocks)
    sc = F.zeros((n, n, n))
    unit = F.zeros(n)
    o = 0
    for b in blocks:
        m = b.dim
        sc[o : o + m, o : o + m, o : o + m] = b.sc
        unit[o : o + m] = b.unit
        o += m
    return Algebra(F, sc, unit=unit)


def _random_blocks(F: Field, n: int, rng: random.Random, allow_matrix: bool = True):
    """Random composition of ``n`` into local rings ``K[t]/(t^s)`` and 2x2 matrix blocks."""
    kinds = []
    left = n
    while left:
        if allow_matrix and left >= 4 and rng.random() < 0.4:
            kinds.append(("mat", 4))
            left -= 4
        else:
            s = rng.randint(1, left)
            kinds.append(("loc", s))
            left -= s
    return kinds


def _block_algebra(F: Field, kind) -> Algebra:
    t, s = kind
    return matrix_algebra(F, 2) if t == "mat" else truncated_polynomials(F, s)


def _block_endomorphism(F: Field, kind, rng: random.Random, bijective: bool) -> np.ndarray:
    t, s = kind
    if t == "mat":
        g = random_invertible(F, 2, rng)
        gi = invert(F, g)
        M = F.zeros((4, 4))
        for r in range(2):
            for c in range(2):
                E = F.zeros((2, 2))
                E[r, c] = F.one
                M[:, 2 * r + c] = F.matmul(g, F.matmul(E, gi)).reshape(4)
        return M
    # t -> q(t) with q(0) = 0; alpha(t^i) = q(t)^i mod t^s
    q = [F.zero] + [F.random_scalar(rng) for _ in range(1, s)]
    if s > 1 and bijective and q[1] == 0:
        q[1] = _nonzero(F, rng)
    M = F.zeros((s, s))
    power = [F.one] + [F.zero] * (s - 1)
    for i in range(s):
        M[:, i] = F.array(power)
        nxt = [F.zero] * s
        for a in range(s):
            for b in range(s - a):
                nxt[a + b] = F(nxt[a + b] + power[a] * q[b])
        power = nxt
    return M


def _random_endomorphism(F: Field, kinds, rng: random.Random, bijective: bool) -> np.ndarray:
    """Unit-preserving endomorphism of a block sum: permute equal blocks, then act inside."""
    offsets = np.cumsum([0] + [s for _, s in kinds])
    n = int(offsets[-1])
    target = list(range(len(kinds)))
    groups: dict = {}
    for b, kind in enumerate(kinds):
        groups.setdefault(kind, []).append(b)
    for members in groups.values():
        shuffled = members[:]
        rng.shuffle(shuffled)
        for src, dst in zip(members, shuffled):
            target[src] = dst
    A = F.zeros((n, n))
    for b, kind in enumerate(kinds):
        s = kind[1]
        o, to = offsets[b], offsets[target[b]]
        A[to : to + s, o : o + s] = _block_endomorphism(F, kind, rng, bijective)
    return A


def _random_central(F: Field, kinds, rng: random.Random, invertible: bool) -> np.ndarray:
    parts = []
    for t, s in kinds:
        if t == "mat":
            lam = _nonzero(F, rng) if invertible else F.random_scalar(rng)
            parts += [lam, F.zero, F.zero, lam]
        else:
            c = [F.random_scalar(rng) for _ in range(s)]
            if invertible and c[0] == 0:
                c[0] = _nonzero(F, rng)
            parts += c
    return F.array(parts)


def _finish(h: HomAlgebra, rng: random.Random, unit=None) -> HomAlgebra:
    F = h.field
    P = random_invertible(F, h.dim, rng)
    out = h.change_basis(P)
    if unit is not None:
        out.algebra.unit = F.matmul(invert(F, P), np.asarray(unit))
    return out


def _central_multiplication(F: Field, n: int, rng: random.Random, bijective: bool) -> HomAlgebra:
    # the ring branch needs deg f >= 2, otherwise (t - r) h(t) vanishes mod f
    if bijective or n < 3 or rng.random() < 0.35:
        kinds = _random_blocks(F, n, rng)
        a = _block_sum(F, [_block_algebra(F, k) for k in kinds])
        c = _random_central(F, kinds, rng, invertible=bijective)
        return HomAlgebra(a, a.left_matrix(c)), a.unit

    k = rng.randint(2, n - 1)
    m = n - k
    r = F.random_scalar(rng)
    g = [F.random_scalar(rng) for _ in range(k - 1)] + [F.one]
    f = _poly_mul(F, [F(-r), F.one], g)  # monic of degree k with root r
    ring = _quotient_ring(F, f)
    eps = F.array([F(r**i) for i in range(k)])  # evaluation at r
    sc = F.zeros((n, n, n))
    sc[:k, :k, :k] = ring.sc
    for i in range(k):
        for u in range(k, n):
            sc[i, u, u] = F(sc[i, u, u] + eps[i])
            sc[u, i, u] = F(sc[u, i, u] + eps[i])
    sc[k:, k:, k:] = F.random_array(rng, (m, m, m))
    unit = F.zeros(n)
    unit[:k] = ring.unit
    b = Algebra(F, sc, unit=unit)
    # a = (t - r) h(t) lies in the kernel of the character
    for _ in range(MAX_TRIES):
        hcoef = [F.random_scalar(rng) for _ in range(k)]
        aval = _poly_mulmod(F, [F(-r), F.one], hcoef, f)
        if any(v != 0 for v in aval):
            break
    elem = F.zeros(n)
    elem[:k] = F.array(aval)
    return HomAlgebra(b, b.left_matrix(elem)), unit


def _yau(F: Field, n: int, rng: random.Random, bijective: bool) -> HomAlgebra:
    kinds = _random_blocks(F, n, rng)
    a = _block_sum(F, [_block_algebra(F, k) for k in kinds])
    A = _random_endomorphism(F, kinds, rng, bijective)
    P = random_invertible(F, n, rng)
    Pi = invert(F, P)
    a2 = a.change_basis(P)
    return yau_twist(a2, F.matmul(Pi, F.matmul(A, P)), a2.unit)


def _generalized_yau(F: Field, n: int, rng: random.Random, bijective: bool) -> HomAlgebra:
    if rng.random() < 0.5:
        kinds = _random_blocks(F, n, rng)
        a = _block_sum(F, [_block_algebra(F, k) for k in kinds])
        phi = _random_endomorphism(F, kinds, rng, bijective)
        c = _random_central(F, kinds, rng, invertible=bijective)
        A = F.matmul(a.left_matrix(c), phi)
        left_unit = a.unit
    else:
        # x . y = x_0 y: associative, every c with c_0 = 1 is a left unit
        sc = F.zeros((n, n, n))
        for j in range(n):
            sc[0, j, j] = F.one
        a = Algebra(F, sc)
        phi = F.random_array(rng, (n, n))
        phi[0] = F.zeros(n)
        phi[0, 0] = F.one
        if bijective:
            phi[1:, 1:] = random_invertible(F, n - 1, rng) if n > 1 else phi[1:, 1:]
        A = F.reduce(phi * _nonzero(F, rng))
        left_unit = F.basis_vector(n, 0)
    P = random_invertible(F, n, rng)
    Pi = invert(F, P)
    a2 = a.change_basis(P)
    h = generalized_twist(a2, F.matmul(Pi, F.matmul(A, P)))
    h.algebra.metadata = {"weak_left_unit": [F.format(v) for v in F.matmul(Pi, left_unit)]}
    return h


def _zero_twist(F: Field, n: int, rng: random.Random, bijective: bool) -> HomAlgebra:
    a = Algebra(F, F.random_array(rng, (n, n, n)))
    return HomAlgebra(a, F.zeros((n, n)))


def random_hom_algebra(field: Field, dim: int, recipe: str, seed: int, bijective: bool = False) -> HomAlgebra:
    """Deterministic hom-associative algebra from ``recipe`` and ``seed``.

    ``bijective`` requests an invertible twisting map (not available for
    ``zero-twist``). Unital recipes record the unit on ``result.unit``.
    """
    if recipe not in RECIPES:
        raise ValueError(f"unknown recipe {recipe!r}; choose from {RECIPES}")
    if dim < 1:
        raise ValueError("dimension must be at least 1")
    if bijective and recipe == "zero-twist":
        raise GenerationError("zero-twist cannot have a bijective twisting map")
    rng = random.Random(f"{recipe}:{field}:{dim}:{seed}")
    for _ in range(MAX_TRIES):
        if recipe == "central-multiplication":
            base, unit = _central_multiplication(field, dim, rng, bijective)
            h = _finish(base, rng, unit)
        elif recipe == "yau":
            h = _yau(field, dim, rng, bijective)
        elif recipe == "generalized-yau":
            h = _generalized_yau(field, dim, rng, bijective)
        else:
            h = _finish(_zero_twist(field, dim, rng, bijective), rng)
        if bijective and not h.alpha_invertible():
            continue
        if not check_hom_associative(h):
            raise AssertionError(f"recipe {recipe} produced a non-hom-associative algebra")
        if recipe == "central-multiplication" and not is_two_sided_unit(h.algebra, h.unit):
            raise AssertionError("central-multiplication lost its unit")
        return h
    raise GenerationError(f"recipe {recipe} failed after {MAX_TRIES} tries")
