import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from homalg.linalg import (
    Field,
    NoSolution,
    NotInvertible,
    Subspace,
    complement,
    from_scaled,
    image_basis,
    invert,
    kernel_basis,
    rank,
    rref,
    scaled_integers,
    solve_affine,
)

PRIMES = (2, 3, 5, 7)
Q = Field.rationals()


@st.composite
def matrices(draw, max_rows=4, max_cols=4, fields=None):
    F = draw(st.sampled_from(fields or [Q] + [Field.gf(p) for p in PRIMES]))
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    if F.is_rational:
        entries = st.fractions(min_value=-5, max_value=5, max_denominator=4)
    else:
        entries = st.integers(0, F.p - 1)
    data = draw(st.lists(st.lists(entries, min_size=c, max_size=c), min_size=r, max_size=r))
    return F, F.array(data)


def test_scalar_parsing_and_format():
    assert Q("2/4") == Fraction(1, 2)
    assert Q.format(Q("-6/4")) == "-3/2"
    F5 = Field.gf(5)
    assert F5("-1") == 4
    assert F5("1/2") == 3
    assert F5.format(F5(12)) == "2"
    with pytest.raises(ZeroDivisionError):
        F5("1/5")
    with pytest.raises(ValueError):
        Q("one")


@pytest.mark.parametrize("p", [0, 1, 4, 9, 2**16 + 1])
def test_bad_characteristic(p):
    with pytest.raises(ValueError):
        Field.gf(p)


def test_inverse_of_zero():
    with pytest.raises(ZeroDivisionError):
        Field.gf(7).inv(0)
    assert Field.gf(7).inv(3) * 3 % 7 == 1


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_rref_is_idempotent_and_rank_matches_transpose(fm):
    F, M = fm
    R, piv = rref(F, M)
    R2, piv2 = rref(F, R)
    assert piv == piv2 and np.array_equal(R, R2)
    assert rank(F, M) == rank(F, M.T) == len(piv)
    for r, c in enumerate(piv):
        assert R[r, c] == 1
        assert all(R[i, c] == 0 for i in range(R.shape[0]) if i != r)


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_kernel_and_image(fm):
    F, M = fm
    K = kernel_basis(F, M)
    assert K.dim == M.shape[1] - rank(F, M)
    for v in K.basis:
        assert not np.any(F.matmul(M, v) != 0)
    im = image_basis(F, M)
    assert im.dim == rank(F, M)
    assert im.contains_all(M.T)


@settings(max_examples=100, deadline=None)
@given(matrices(max_rows=3, max_cols=3, fields=[Field.gf(2), Field.gf(3)]))
def test_kernel_size_by_exhaustion(fm):
    # independent oracle: count solutions of M v = 0 by enumerating F^n
    F, M = fm
    n = M.shape[1]
    count = sum(
        1 for v in itertools.product(range(F.p), repeat=n) if not np.any(F.matmul(M, np.array(v)) != 0)
    )
    assert count == F.p ** kernel_basis(F, M).dim


@settings(max_examples=150, deadline=None)
@given(matrices(max_rows=4, max_cols=4))
def test_invert(fm):
    F, M = fm
    if M.shape[0] != M.shape[1]:
        return
    n = M.shape[0]
    if rank(F, M) < n:
        with pytest.raises(NotInvertible):
            invert(F, M)
        return
    Mi = invert(F, M)
    assert np.array_equal(F.matmul(M, Mi), F.eye(n))
    assert np.array_equal(F.matmul(Mi, M), F.eye(n))


@settings(max_examples=150, deadline=None)
@given(matrices(), st.data())
def test_solve_affine(fm, data):
    F, M = fm
    x0 = F.array(data.draw(st.lists(st.integers(-3, 3), min_size=M.shape[1], max_size=M.shape[1])))
    b = F.matmul(M, x0)
    x, K = solve_affine(F, M, b)
    assert np.array_equal(F.matmul(M, x), b)
    assert K.contains(F.reduce(x - x0))


def test_solve_affine_inconsistent():
    F = Field.gf(3)
    with pytest.raises(NoSolution):
        solve_affine(F, F.array([[1, 0], [1, 0]]), F.array([1, 2]))


@settings(max_examples=100, deadline=None)
@given(matrices(max_rows=4, max_cols=4))
def test_subspace_canonical_and_complement(fm):
    F, M = fm
    n = M.shape[1]
    S = Subspace.span(F, list(M), n)
    # spanning the reversed rows gives the same canonical subspace
    assert S == Subspace.span(F, list(M[::-1]), n)
    U = complement(S)
    assert S.dim + U.dim == n
    assert (S + U).dim == n
    assert S <= S + U and U <= S + U
    for v in itertools.islice(itertools.product(range(3), repeat=n), 20):
        v = F.array(list(v))
        # residual is zero exactly on the subspace and v - residual(v) lies in S
        r = S.residual(v)
        assert S.contains(F.reduce(v - r))
        assert S.contains(v) == (not np.any(r != 0))


@settings(max_examples=100, deadline=None)
@given(matrices(fields=[Q]))
def test_scaled_integers_round_trip(fm):
    _, M = fm
    ints, denom, bound = scaled_integers(M)
    assert np.array_equal(from_scaled(ints, denom), M)
    assert bound == max(abs(int(v)) for v in ints.ravel())


def test_scaled_integers_overflow():
    M = np.array([Fraction(2**70), Fraction(1, 3)], dtype=object)
    assert scaled_integers(M) is None
