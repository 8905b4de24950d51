from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bridgeland.homological import check_exact, euler_matrix, ext_dims, minimal_projective_resolution
from bridgeland.linalg import GF, QQ
from bridgeland.quiver import (
    InfiniteDimensionalError,
    Quiver,
    QuiverError,
    beilinson,
    format_quiver,
    kronecker,
    linear_quiver,
    parse_quiver,
)
from bridgeland.representation import (
    Representation,
    RepresentationError,
    cokernel,
    direct_sum,
    hom_basis,
    hom_dim,
    image_bases,
    is_isomorphic,
    kernel,
    projective,
    simple,
)
from bridgeland.subreps import count_subspaces, enumerate_subreps, gaussian_binomial, subspaces

from oracles import kronecker_subreps

F5 = GF(5)


def kron_rep(dims, m0, m1, F=F5, n=2):
    return Representation(kronecker(n), F, tuple(dims), {"a0": m0, "a1": m1})


@st.composite
def kronecker_reps(draw, max_dim=3, field=F5):
    a = draw(st.integers(0, max_dim))
    b = draw(st.integers(0, max_dim))
    entry = st.integers(0, 4) if field is F5 else st.integers(-2, 2)
    mat = st.lists(st.lists(entry, min_size=a, max_size=a), min_size=b, max_size=b)
    return kron_rep((a, b), draw(mat), draw(mat), field)


# ------------------------------------------------------------------ quivers


def test_path_algebra_of_beilinson_counts_monomials():
    for N in (1, 2, 3):
        A = beilinson(N).path_algebra
        for x in range(N + 1):
            for y in range(N + 1):
                want = comb(y - x + N, N) if y >= x else 0
                assert A.dim(x, y) == want


def test_cycle_without_relations_is_rejected():
    Q = Quiver(("0",), (("a", "0", "0"),))
    with pytest.raises(InfiniteDimensionalError):
        Q.path_algebra


def test_parse_round_trip():
    T = beilinson(2)
    again = parse_quiver(format_quiver(T))
    assert again.vertices == T.vertices
    assert [a.name for a in again.arrows] == [a.name for a in T.arrows]
    assert again.path_algebra.total_dim == T.path_algebra.total_dim == 15


def test_parse_errors_name_the_line():
    with pytest.raises(QuiverError, match="line 3"):
        parse_quiver("[vertices]\n0 1\n[edges]\n")
    with pytest.raises(QuiverError, match="malformed arrow"):
        parse_quiver("[vertices]\n0 1\n[arrows]\na 0 1\n")
    with pytest.raises(QuiverError, match="no vertices"):
        parse_quiver("")


def test_hereditary_flags():
    assert kronecker(3).hereditary
    assert linear_quiver(3, [2, 1]).hereditary
    assert not beilinson(2).hereditary


# ---------------------------------------------------------- representations


def test_shape_validation():
    with pytest.raises(RepresentationError):
        kron_rep((1, 1), [[1, 2]], [[0]], QQ)


def test_projectives_and_simples():
    Q = kronecker(2)
    assert projective(Q, "0").dims == (1, 2)
    assert projective(beilinson(2), "0").dims == (1, 3, 6)
    assert hom_dim(projective(Q, "0"), simple(Q, 0)) == 1
    assert hom_dim(simple(Q, 0), simple(Q, 1)) == 0


def test_direct_sum_order_is_irrelevant_up_to_iso():
    Q = kronecker(2)
    A = direct_sum([simple(Q, 0), simple(Q, 1)])
    B = direct_sum([simple(Q, 1), simple(Q, 0)])
    assert is_isomorphic(A, B) is not None
    assert is_isomorphic(A, projective(Q, "0")) is None


@settings(max_examples=30, deadline=None)
@given(kronecker_reps(), kronecker_reps())
def test_hom_basis_elements_are_homomorphisms(M, N):
    for f in hom_basis(M, N):
        assert f.is_homomorphism()


@settings(max_examples=30, deadline=None)
@given(kronecker_reps())
def test_rank_nullity(M):
    for f in hom_basis(M, M)[:3]:
        K, _ = kernel(f)
        C, _ = cokernel(f)
        im = [len(b) for b in image_bases(f)]
        assert all(k + i == d for k, i, d in zip(K.dims, im, M.dims))
        assert all(c + i == d for c, i, d in zip(C.dims, im, M.dims))


@settings(max_examples=25, deadline=None)
@given(kronecker_reps(max_dim=2, field=QQ), kronecker_reps(max_dim=2, field=QQ))
def test_hom_minus_ext_is_the_euler_form(M, N):
    e = ext_dims(M, N)
    chi = sum((-1) ** k * d for k, d in enumerate(e))
    E = euler_matrix(kronecker(2)).tolist()
    want = sum(M.dims[i] * E[i][j] * N.dims[j] for i in range(2) for j in range(2))
    assert chi == want
    assert e[0] == hom_dim(M, N)


# ------------------------------------------------------------- homological


def test_koszul_resolution_on_t2():
    r = minimal_projective_resolution(simple(beilinson(2), 0))
    assert r.multiplicity_table() == [(1, 0, 0), (0, 3, 0), (0, 0, 3)]
    assert check_exact(r)


def test_kronecker_euler_matrix():
    assert euler_matrix(kronecker(2)).tolist() == [[1, -2], [0, 1]]
    assert euler_matrix(kronecker(3)).tolist() == [[1, -3], [0, 1]]


def test_ext_between_kronecker_simples():
    Q = kronecker(2)
    assert ext_dims(simple(Q, 0), simple(Q, 1)) == [0, 2]
    assert ext_dims(simple(Q, 1), simple(Q, 0)) == [0]


# --------------------------------------------------------- subspace search


@pytest.mark.parametrize("d,p", [(2, 5), (3, 5), (3, 2), (4, 3)])
def test_subspace_counts_match_gaussian_binomials(d, p):
    total = sum(len(list(subspaces(d, k, p))) for k in range(d + 1))
    assert total == count_subspaces(d, p)
    assert len(list(subspaces(d, 1, p))) == gaussian_binomial(d, 1, p) == (p**d - 1) // (p - 1)


def test_subreps_of_kronecker_projective():
    # U0 = 0 with any U1 (8 choices), or U0 = F_5 forcing U1 = F_5^2
    P = kron_rep((1, 2), [[1], [0]], [[0], [1]])
    subs = enumerate_subreps(P)
    assert len(subs) == 9
    assert sum(1 for U0, _ in subs if U0) == 1


@settings(max_examples=40, deadline=None)
@given(kronecker_reps(max_dim=2))
def test_subrep_count_matches_brute_force(M):
    maps = [M.mat("a0"), M.mat("a1")]
    maps = [[[int(x) for x in row] for row in m] for m in maps]
    assert len(enumerate_subreps(M)) == len(kronecker_subreps(M.dims, maps, 5))
