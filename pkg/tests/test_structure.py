import itertools

import numpy as np
import pytest

from conftest import GF5, Oracle
from homalg import Field, HomAlgebra, PreconditionError
from homalg.algebra import check_associative
from homalg.fixtures import (
    DimTwoKernelFixture,
    dual_numbers_q,
    ex_non_adjoint,
    gf2_componentwise,
    mat2_gf2,
    truncated_polynomials,
    unital_nonassoc_3d,
)
from homalg.generate import random_hom_algebra
from homalg.linalg import Subspace, rank
from homalg.structure import (
    DegenerateQuotient,
    NotWellDefined,
    alpha_image,
    alpha_kernel,
    associative_factor,
    centralizer,
    codim_analysis,
    is_hom_ideal,
    nucleus,
    quotient_algebra,
    verify_unital_identities,
)

GF2, GF3, Q = Field.gf(2), Field.gf(3), Field.rationals()


def all_vectors(F, n):
    return [list(v) for v in itertools.product(range(F.p), repeat=n)]


def brute_nucleus(F, sc):
    o = Oracle(F, sc)
    n = o.n
    E = [o.e(i) for i in range(n)]

    def assoc(x, y, z):
        return o.red([a - b for a, b in zip(o.mul(o.mul(x, y), z), o.mul(x, o.mul(y, z)))])

    zero = [0] * n
    return {
        tuple(v) for v in all_vectors(F, n)
        if all(assoc(v, a, b) == zero and assoc(a, v, b) == zero and assoc(a, b, v) == zero for a in E for b in E)
    }


def members(S: Subspace):
    F, n = S.field, S.ambient_dim
    return {tuple(v) for v in all_vectors(F, n) if S.contains(F.array(v))}


@pytest.mark.parametrize(
    "h",
    [unital_nonassoc_3d(GF3), unital_nonassoc_3d(GF2), mat2_gf2()]
    + [random_hom_algebra(GF2, n, "zero-twist", s) for n in (2, 3) for s in range(3)],
    ids=lambda h: f"{h.field}-{h.dim}-{h.algebra.metadata.get('fixture', 'random')}",
)
def test_nucleus_by_exhaustion(h):
    assert members(nucleus(h)) == brute_nucleus(h.field, h.sc)


def test_nucleus_excludes_u():
    h = unital_nonassoc_3d(GF3)
    N = nucleus(h)
    assert not N.contains(GF3.basis_vector(3, 1))
    assert N.contains(GF3.basis_vector(3, 0))


def test_nucleus_of_associative_algebra_is_full():
    assert nucleus(mat2_gf2()).dim == 4


def test_centralizer_of_matrices_is_scalars():
    C = centralizer(mat2_gf2())
    o = Oracle(GF2, mat2_gf2().sc)
    brute = {
        tuple(v) for v in all_vectors(GF2, 4)
        if all(o.mul(v, w) == o.mul(w, v) for w in all_vectors(GF2, 4))
    }
    assert members(C) == brute == {(0, 0, 0, 0), (1, 0, 0, 1)}
    assert C.dim == 1


def test_centralizer_of_commutative_algebra_is_full():
    assert centralizer(gf2_componentwise()).dim == 2


def _brute_stable(h, S):
    F = h.field
    o = Oracle(F, h.sc, h.alpha_matrix)
    inside = members(S)
    for v in inside:
        v = list(v)
        if tuple(o.alpha(v)) not in inside:
            return False
        for w in all_vectors(F, h.dim):
            if tuple(o.mul(v, w)) not in inside or tuple(o.mul(w, v)) not in inside:
                return False
    return True


def _all_subspaces(F, n):
    seen = set()
    out = []
    vecs = all_vectors(F, n)
    for k in range(n + 1):
        for combo in itertools.combinations(vecs, k):
            S = Subspace.span(F, [F.array(v) for v in combo], n) if combo else Subspace.zero(F, n)
            key = (S.pivots, tuple(map(tuple, S.basis.tolist())))
            if key not in seen:
                seen.add(key)
                out.append(S)
    return out


@pytest.mark.parametrize("h", [gf2_componentwise(), unital_nonassoc_3d(GF2), ex_non_adjoint(GF2)], ids=str)
def test_hom_ideal_against_exhaustion(h):
    for S in _all_subspaces(h.field, h.dim):
        res = is_hom_ideal(h, S)
        assert bool(res) == _brute_stable(h, S), S
        if not res:
            kind, i, r, vec = res.witness
            assert kind in ("left", "right", "alpha")
            assert not S.contains(vec)


def test_hom_ideal_examples():
    h = gf2_componentwise()
    assert is_hom_ideal(h, Subspace.span(GF2, [GF2.array([1, 0])], 2))
    assert not is_hom_ideal(h, Subspace.span(GF2, [GF2.array([1, 1])], 2))
    assert is_hom_ideal(h, Subspace.full(GF2, 2))


def test_image_and_kernel_extremes():
    h = dual_numbers_q()
    assert alpha_image(h).dim == 2 and alpha_kernel(h).dim == 0
    z = HomAlgebra(h.algebra, Q.zeros((2, 2)))
    assert alpha_image(z).dim == 0 and alpha_kernel(z).dim == 2


def test_degree_bounded_kernel_is_u():
    fx = DimTwoKernelFixture(4)
    K = fx.alpha_kernel()
    assert K.dim == 2
    n = fx.dim
    assert K.contains(Q.basis_vector(n, n - 1)) and K.contains(Q.basis_vector(n, n - 2))


def test_unital_identities_need_preconditions():
    h = ex_non_adjoint()
    with pytest.raises(PreconditionError):
        verify_unital_identities(h, None)
    reps = {r.identity_id: r for r in verify_unital_identities(h, None, diagnostic=True)}
    assert reps["unit-image"].status == "skipped"
    adj = reps["alpha-adjoint"]
    assert adj.status == "fail" and adj.failures == 2
    # both orders of the basis pair witness the failure
    o = Oracle(h.field, h.sc, h.alpha_matrix)
    for i, j in ((0, 1), (1, 0)):
        x, y = o.e(i), o.e(j)
        assert o.mul(o.alpha(x), y) != o.mul(x, o.alpha(y))


def test_unital_identities_identity_map():
    h = dual_numbers_q()
    assert all(r.ok for r in verify_unital_identities(h, Q.array([1, 0])))


def test_unital_identities_reject_non_hom_associative():
    h = HomAlgebra(dual_numbers_q().algebra, [[0, 1], [1, 0]])
    with pytest.raises(PreconditionError):
        verify_unital_identities(h, Q.array([1, 0]))


@pytest.mark.parametrize("seed", range(12))
def test_associative_factor_intertwines(seed):
    F = (GF5, Q)[seed % 2]
    h = random_hom_algebra(F, 2 + seed % 4, "central-multiplication", seed)
    K = alpha_kernel(h)
    if K.dim == h.dim:
        with pytest.raises(DegenerateQuotient):
            associative_factor(h)
        return
    q, proj, induced = associative_factor(h)
    assert check_associative(q)
    # the induced map is injective exactly when Ke(alpha^2) = Ke(alpha)
    A = h.alpha_matrix
    assert (rank(F, induced) == q.dim) == (rank(F, F.matmul(A, A)) == rank(F, A))
    E = F.eye(h.dim)
    for i, j in itertools.product(range(h.dim), repeat=2):
        lhs = F.matmul(proj, h.mul(E[i], E[j]))
        rhs = q.mul(F.matmul(proj, E[i]), F.matmul(proj, E[j]))
        assert np.array_equal(lhs, rhs)
    # the induced twisting map commutes with the projection
    assert np.array_equal(F.matmul(induced, proj), F.matmul(proj, h.alpha_matrix))


def test_induced_twisting_map_need_not_be_injective():
    # K[t]/(t^3) with alpha = t * (-): Ke(alpha) = <t^2>, and t + Ke maps to t^2 = 0 in the factor
    a = truncated_polynomials(Q, 3)
    h = HomAlgebra(a, a.left_matrix(Q.array([0, 1, 0])))
    q, proj, induced = associative_factor(h)
    assert q.dim == 2
    assert rank(Q, induced) == 1


def test_associative_factor_injective_alpha_is_whole_algebra():
    q, proj, _ = associative_factor(dual_numbers_q())
    assert q.dim == 2 and rank(Q, proj) == 2


def test_quotient_not_well_defined():
    h = gf2_componentwise()
    with pytest.raises(NotWellDefined):
        quotient_algebra(h, Subspace.span(GF2, [GF2.array([1, 1])], 2))


def test_degree_bounded_factor_is_truncated_polynomials():
    rep = DimTwoKernelFixture(5).report()
    assert rep["factor_dim"] == 5 and rep["factor_associative"]


def test_codim_identity_map():
    rep = codim_analysis(dual_numbers_q(), Q.array([1, 0]))
    assert rep.codim_im_alpha == 0
    assert rep.predicted_associative and rep.actual_associative
    assert rep.triggering_clause == "codim<=1"
    assert rep.consistent


def test_codim_unital_nonassociative_3d():
    h = unital_nonassoc_3d()
    rep = codim_analysis(h, Q.array([1, 0, 0]))
    assert rep.codim_im_alpha == 3
    assert rep.triggering_clause is None
    assert not rep.actual_associative
    assert rep.consistent
    d = rep.to_dict()
    assert d["decomposition"]["im_alpha_dim"] == 0


def test_codim_preconditions():
    with pytest.raises(PreconditionError):
        codim_analysis(ex_non_adjoint(), Q.array([1, 0]))
    h = HomAlgebra(dual_numbers_q().algebra, [[0, 1], [1, 0]])
    with pytest.raises(PreconditionError):
        codim_analysis(h, Q.array([1, 0]))


@pytest.mark.parametrize("seed", range(10))
def test_codim_invertible_alpha_one(seed):
    h = random_hom_algebra(GF5, 1 + seed % 5, "central-multiplication", seed, bijective=True)
    rep = codim_analysis(h, h.unit)
    assert rep.alpha_injective and rep.alpha_surjective
    assert rep.actual_associative and rep.predicted_associative


def test_decomposition_spans():
    h = random_hom_algebra(GF5, 5, "central-multiplication", 3)
    rep = codim_analysis(h, h.unit)
    K = alpha_kernel(h)
    total = rep.unit_line + rep.im_alpha + rep.u_complement
    assert total.dim == h.dim
    assert rep.rank_alpha + K.dim == h.dim
    assert rep.unit_line.contains(h.unit)
