from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bridgeland.chambers import (
    ChamberError,
    ChamberPoint,
    SearchExhausted,
    alpha_table,
    boundary_probe,
    chamber_region,
    degenerate_point,
    glue_witness,
    k_table,
    probe_intersection,
    realize,
    region_contains,
    rho,
    sample_point,
    theta_membership,
    tight_inequalities,
)
from bridgeland.corpus import corpus
from bridgeland.derived import pn_pair
from bridgeland.phase import Gauss, Q, rational_phase_ray
from bridgeland.plot import grid_csv, slice_grid, slice_polygon, slice_svg

COR = corpus()
ROUND_TRIP = ["P2_pair_0", "P3_pair_1", "A3_11_simples", "A3_21_projectives", "A3_12_simples"]


def test_pair_regions():
    assert chamber_region(pn_pair(2, 0)).relations == {(0, 1, 0)}
    # Ext triples: every adjacent and outer pair gets alpha = 1
    assert chamber_region(COR["A3_11_simples"]).relations == {(0, 1, 1), (1, 2, 1), (0, 2, 1)}


def test_alpha_recursion_on_a_strong_triple():
    K = k_table(COR["A3_11_projectives"])
    assert alpha_table(K, (0, 1, 2)).alphas == (-1, 0, 0)
    with pytest.raises(ChamberError):
        alpha_table(K, (1, 0))


def test_orthogonal_pairs_are_vacuous():
    # (S_0, S_2) on the straight A_3 quiver has no Hom in any degree
    K = k_table(COR["A3_11_simples"].sub((0, 2)))
    assert chamber_region(K).relations == frozenset()


@pytest.mark.parametrize("name", sorted(COR))
def test_subcollection_regions_only_lose_inequalities(name):
    C = COR[name]
    full = chamber_region(C)
    if len(C) < 3:
        return
    for drop in range(len(C)):
        keep = [i for i in range(len(C)) if i != drop]
        sub = chamber_region(k_table(C.sub(keep)))
        lifted = {(keep[lo], keep[hi], a) for lo, hi, a in sub.relations}
        for lo, hi, a in lifted:
            # the full region carries an inequality on that pair at least as strong
            assert any(q.low == lo and q.high == hi and q.alpha <= a for q in full.inequalities)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(ROUND_TRIP), st.integers(0, 10**6))
def test_realize_then_rho_is_the_identity(name, index):
    C = COR[name]
    R = chamber_region(C)
    pt = sample_point(R, 3, index)
    assert region_contains(R, pt)
    sigma = realize(C, pt)
    assert rho(sigma, C) == pt
    assert theta_membership(sigma, C)


def test_sampling_is_counter_indexed():
    R = chamber_region(pn_pair(2, 0))
    assert sample_point(R, 9, 17) == sample_point(R, 9, 17)
    assert sample_point(R, 9, 17) != sample_point(R, 9, 18)


def test_tight_and_violated_inequalities():
    R = chamber_region(pn_pair(2, 0))
    same = ChamberPoint(("1+i", "2+2i"), (0, 0))
    eq, bad = tight_inequalities(R, same)
    assert [str(q) for q in eq] == ["phi_0 < phi_1"] and not bad
    flipped = ChamberPoint(("i", "1+i"), (0, 0))
    assert tight_inequalities(R, flipped)[1]
    assert not region_contains(R, flipped)


@pytest.mark.parametrize("name", sorted(COR))
def test_degenerate_points(name):
    C = COR[name]
    sg = degenerate_point(C)
    assert sg.degenerate
    assert theta_membership(sg, C)


def test_glue_witness_report():
    w = glue_witness(COR["P2_pair_0"], 0)
    assert w.member_original and w.member_mutated and w.displayed_stable
    data = w.to_json()
    assert data["phases_in_window"] is True
    assert all(-0.5 <= p["display"] < 0.5 for p in data["window_phases"])


def test_probe_intersection_small_run_is_reproducible():
    a = probe_intersection(2, 0, 1, 40, 5).to_json()
    b = probe_intersection(2, 0, 1, 40, 5).to_json()
    assert a == b
    assert a["counterexample_count"] == 0
    assert a["member_count"] > 0


def test_boundary_probe_adjacent_walls():
    C = pn_pair(2, 0)
    r = boundary_probe(C, ChamberPoint(("1+i", Gauss(1, 1) * Q("1/3")), (0, 0)))
    assert r.case == "adjacent" and r.member
    r = boundary_probe(C, ChamberPoint(("1+i", Gauss(1, 1) * Q(3)), (0, 0)))
    assert r.case == "adjacent" and r.member


def test_boundary_probe_reports_exhaustion_and_bad_inputs():
    C = pn_pair(2, 0)
    # Z(S_1) = Z(S_0): a class gets zero charge, so the limit is not a stability condition
    with pytest.raises(SearchExhausted):
        boundary_probe(C, ChamberPoint(("1+i", "1+i"), (0, 0)))
    with pytest.raises(ChamberError, match="interior"):
        boundary_probe(C, ChamberPoint(("1+i", "i"), (0, 0)))


# ----------------------------------------------------------------- slices


def _triple_region():
    return chamber_region(COR["A3_11_projectives"])


def test_slice_polygon_of_the_strong_triple():
    R = _triple_region()
    # free coordinates (phi_0, phi_2): phi_0 < 3/2 < phi_2 and phi_0 < phi_2 - 1
    poly = slice_polygon(R, -2, 2, {1: Fraction(3, 2)})
    half, three_halves = Fraction(1, 2), Fraction(3, 2)
    assert set(poly) == {(-2, three_halves), (half, three_halves), (1, 2), (-2, 2)}
    assert len(poly) == 4


def test_slice_grid_agrees_with_region_membership():
    R = _triple_region()
    rows = slice_grid(R, -2, 2, 8, {1: Fraction(1, 4)})
    for x, y, inside in rows:
        if (x * 4).denominator == 1 and (y * 4).denominator == 1:
            pt = ChamberPoint.from_phases(
                [rational_phase_ray(x), rational_phase_ray(Fraction(1, 4)), rational_phase_ray(y)]
            )
            assert inside == region_contains(R, pt)


def test_slice_outputs():
    R = chamber_region(pn_pair(2, 0))
    text = grid_csv(slice_grid(R, 0, 1, 2), (0, 1))
    lines = text.strip().splitlines()
    assert lines[0] == "phi_0,phi_1,phi_display_x,phi_display_y,inside"
    assert len(lines) == 10
    svg = slice_svg(R, -1, 1)
    assert svg.startswith("<svg") and "phi_0 &lt; phi_1" in svg and "<polygon" in svg


def test_slice_needs_two_free_coordinates():
    R = _triple_region()
    with pytest.raises(ChamberError, match="fix all but two"):
        slice_grid(R, 0, 1, 4)
    with pytest.raises(ChamberError):
        slice_polygon(chamber_region(COR["A3_11_projectives"].sub((0,))), 0, 1)
