import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bridgeland.braid import BraidWord, act_braid, b3_word_identity
from bridgeland.corpus import collection_from_spec, corpus
from bridgeland.derived import (
    DerivedError,
    ExceptionalCollection,
    GradedHom,
    NotExceptionalError,
    chi,
    classify_collection,
    collections_isomorphic,
    euler_form,
    hom_complex,
    is_exceptional,
    isomorphic_up_to_shift,
    k_mutation,
    mutate_collection,
    pn_object,
    pn_pair,
)

COR = corpus()


def test_pn_family_dimension_vectors():
    got = {i: (pn_object(2, i).klass, pn_object(2, i).label) for i in range(-1, 4)}
    assert [k for k, _ in got.values()] == [(-2, -1), (-1, 0), (0, 1), (1, 2), (2, 3)]


@settings(max_examples=40, deadline=None)
@given(st.integers(-2, 3), st.integers(-2, 3), st.integers(-2, 2), st.integers(-2, 2))
def test_hom_under_shifts(i, j, s, t):
    A, B = pn_object(2, i), pn_object(2, j)
    assert hom_complex(A.shift(s), B.shift(t)) == hom_complex(A, B).shifted(t - s)


@settings(max_examples=30, deadline=None)
@given(st.integers(-2, 4), st.integers(-2, 4), st.sampled_from([2, 3]))
def test_graded_euler_characteristic_is_the_euler_form(i, j, n):
    A, B = pn_object(n, i), pn_object(n, j)
    E = euler_form(A.quiver).tolist()
    a, b = A.klass, B.klass
    assert hom_complex(A, B).euler == chi(A, B) == sum(a[x] * E[x][y] * b[y] for x in range(2) for y in range(2))


@pytest.mark.parametrize("i", range(-2, 4))
def test_pn_objects_are_exceptional(i):
    assert is_exceptional(pn_object(3, i))
    assert hom_complex(pn_object(3, i), pn_object(3, i)) == GradedHom.of({0: 1})


def test_graded_hom_rejects_negative_dims():
    with pytest.raises(DerivedError):
        GradedHom.of({0: -1})


@pytest.mark.parametrize("name", sorted(COR))
def test_corpus_collections_are_full_and_exceptional(name):
    C = COR[name]
    assert C.is_exceptional() and C.is_complete()
    assert abs(C.class_determinant()) == 1


def test_strong_and_ext_flags():
    assert classify_collection(COR["T2_projectives"]).strong
    flags = classify_collection(COR["T2_simples"])
    assert flags.ext and not flags.strong
    assert not classify_collection(pn_pair(2, 0)).orthogonal


def test_backwards_morphisms_are_reported():
    C = pn_pair(2, 0)
    with pytest.raises(NotExceptionalError):
        ExceptionalCollection((C[1], C[0])).assert_exceptional()


def test_isomorphism_up_to_shift():
    assert isomorphic_up_to_shift(pn_object(2, 0).shift(2), pn_object(2, 0)) == 2
    assert isomorphic_up_to_shift(pn_object(2, 0), pn_object(2, 1)) is None


@pytest.mark.parametrize("n,k", [(2, 0), (2, -1), (3, 1)])
def test_mutating_a_pn_pair_moves_along_the_family(n, k):
    C = pn_pair(n, k)
    assert collections_isomorphic(mutate_collection(C, 0, "left"), pn_pair(n, k - 1))
    assert collections_isomorphic(mutate_collection(C, 0, "right"), pn_pair(n, k + 1))


@pytest.mark.parametrize("name", ["A3_21_simples", "A3_12_projectives"])
@pytest.mark.parametrize("i", [0, 1])
@pytest.mark.parametrize("direction", ["left", "right"])
def test_concrete_and_class_mutation_agree(name, i, direction):
    C = COR[name]
    D = mutate_collection(C, i, direction)
    assert [tuple(c) for c in D.classes] == [tuple(c) for c in k_mutation(euler_form(C.quiver), C.classes, i, direction)]


def test_k_tier_mutation_keeps_exceptionality():
    D = mutate_collection(COR["T2_projectives"], 0, "right")
    assert D.tier == "K" and D.is_exceptional()


def test_braid_word_parsing_and_inverse():
    w = BraidWord.parse("R0 L1^2 S2[3]")
    assert str(w) == "R0 L1 L1 S2[3]"
    assert str(w.inverse()) == "S2[-3] R1 R1 L0"
    with pytest.raises(DerivedError):
        BraidWord.parse("X0")
    with pytest.raises(DerivedError):
        act_braid(pn_pair(2, 0), "R1")


@pytest.mark.parametrize("a", [1, 2, 3])
def test_word_identity_in_b3(a):
    assert b3_word_identity(f"R1 R0 R1^{a} L0 L1 L0^{a}")
    assert b3_word_identity("R0 R1 R0 L1 L0 L1")
    assert not b3_word_identity("R0 R1 L0 L1")


def test_braid_action_inverse_round_trip():
    C = COR["A3_11_simples"]
    w = BraidWord.parse("R0 R1 L0")
    assert collections_isomorphic(act_braid(act_braid(C, w), w.inverse()), C)


def test_collection_spec_round_trip():
    C = collection_from_spec({"quiver": "pn:2", "objects": [{"pn": 0}, {"pn": 1}]})
    assert collections_isomorphic(C, pn_pair(2, 0))
    K = collection_from_spec(
        {"quiver": "tn:2", "objects": [{"projective": 2}, {"projective": 1}, {"projective": 0}]}
    )
    assert K.tier == "K" and collections_isomorphic(K, COR["T2_projectives"])
    with pytest.raises(DerivedError):
        collection_from_spec({"quiver": "pn:2", "objects": [{"pn": 1}, {"pn": 0}]})
