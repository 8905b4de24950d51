from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bridgeland.chambers import sigma_minus_one
from bridgeland.derived import pn_object, pn_pair
from bridgeland.hn import hn_factors
from bridgeland.linalg import GF
from bridgeland.phase import Gauss, GLElement, rational_phase_ray
from bridgeland.quiver import kronecker
from bridgeland.representation import Representation
from bridgeland.stability import (
    HeartSpec,
    StabilityError,
    build_stability,
    distance_lower_bound,
    gl_action,
    hn_filtration,
    is_stable,
    module_status,
    object_phase,
    object_status,
)

F5 = GF(5)
HEART = HeartSpec(pn_pair(2, 0), (1, 0))
entries = st.integers(0, 4)


@st.composite
def modules(draw, max_dim=3):
    a, b = draw(st.integers(0, max_dim)), draw(st.integers(0, max_dim))
    if a + b == 0:
        b = 1
    mat = st.lists(st.lists(entries, min_size=a, max_size=a), min_size=b, max_size=b)
    return Representation(kronecker(2), F5, (a, b), {"a0": draw(mat), "a1": draw(mat)})


@st.composite
def charges(draw):
    def one():
        im = draw(st.fractions(0, 6, max_denominator=4))
        re = draw(st.fractions(-6, 6, max_denominator=4))
        if im == 0:
            re = -abs(re) - 1
        return Gauss(re, im)

    return [one(), one()]


POSITIVE = [
    ((a, b), (c, d))
    for a in range(-2, 3) for b in range(-2, 3) for c in range(-2, 3) for d in range(-2, 3)
    if a * d - b * c > 0
]
gl_elements = st.builds(GLElement, st.sampled_from(POSITIVE), st.integers(-1, 1))


def test_charges_must_lie_in_H():
    with pytest.raises(StabilityError, match="half plane"):
        build_stability(HEART, ["1", "1+i"])
    with pytest.raises(StabilityError, match="one charge per"):
        build_stability(HEART, ["-1"])


def test_sigma_minus_one_phases_of_the_family():
    sg = sigma_minus_one(2)
    phases = [object_phase(pn_object(2, i), sg) for i in range(-2, 5)]
    assert phases[1].exact() == Fraction(-1, 4) and phases[2].exact() == 0 and phases[3].exact() == Fraction(1, 4)
    assert all(phases[i] < phases[i + 1] for i in range(len(phases) - 1))
    assert all(object_status(pn_object(2, i), sg) == "stable" for i in range(-2, 5))


@settings(max_examples=60, deadline=None)
@given(modules(), charges())
def test_hn_factors_are_a_filtration(M, z):
    sg = build_stability(HEART, z)
    filt = hn_filtration(M, sg)
    total = [sum(f.dims[i] for f in filt.factors) for i in range(2)]
    assert tuple(total) == M.dims
    ph = filt.phases
    assert all(ph[i + 1] < ph[i] for i in range(len(ph) - 1))
    for f in filt.factors:
        if f.module is not None:
            assert module_status(f.module, sg) in ("stable", "semistable")


@settings(max_examples=40, deadline=None)
@given(modules(max_dim=2), charges(), gl_elements)
def test_gl_action_moves_phases_and_keeps_classes(M, z, g):
    sg = build_stability(HEART, z)
    moved = gl_action(sg, g)
    a, b = hn_filtration(M, sg), hn_filtration(M, moved)
    assert [f.dims for f in a.factors] == [f.dims for f in b.factors]
    assert [g.transport(p) for p in a.phases] == b.phases
    assert module_status(M, sg) == module_status(M, moved)


def test_full_turn_adds_two_to_every_phase():
    sg = sigma_minus_one(2)
    turned = gl_action(sg, ((1, 0), (0, 1)), 1)
    for i in range(-1, 3):
        assert object_phase(pn_object(2, i), turned) == object_phase(pn_object(2, i), sg) + 2
    bound = distance_lower_bound(sg, turned, [pn_object(2, 1), pn_object(2, 2)])
    assert bound.exact == 2
    assert distance_lower_bound(sg, sg, [pn_object(2, 1)]).value == 0


def test_rotation_phase_transport_is_increasing():
    rot = GLElement(((0, -1), (1, 0)))  # charges turn by -pi/2
    grid = [rational_phase_ray(Fraction(k, 4)) for k in range(-4, 5)]
    out = [rot.transport(p) for p in grid]
    assert all(out[i] < out[i + 1] for i in range(len(out) - 1))
    assert all(out[i] + 1 == out[i + 4] for i in range(len(out) - 4))


def test_kronecker_projective_stability_depends_on_the_sink_phase():
    P = Representation(kronecker(2), F5, (1, 2), {"a0": [[1], [0]], "a1": [[0], [1]]})
    # proper subobjects live at the sink, so P is stable iff the sink phase is smaller
    assert module_status(P, build_stability(HEART, ["-1", "1+i"])) == "stable"
    assert module_status(P, build_stability(HEART, ["1+i", "-1"])) == "unstable"


def test_equal_phases_give_semistable_direct_sums():
    M = Representation(kronecker(2), F5, (1, 1), {"a0": [[0]], "a1": [[0]]})
    assert hn_factors(M, [Gauss(0, 1), Gauss(0, 1)])[0].dims == (1, 1)
    assert module_status(M, build_stability(HEART, ["i", "i"])) == "semistable"
    assert is_stable(pn_object(2, 1), build_stability(HEART, ["i", "i"]))
