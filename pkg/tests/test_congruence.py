import pytest

from dilatations.congruence import (
    FiltrationSpec,
    GroupSpec,
    IntModOps,
    LevelRing,
    congruent_iso_check,
    expected_trivial_quotient_order,
    group_points,
    lie_points,
    mat_id,
    mat_inv,
    mat_mul,
    normalizer_check,
    subgroup_elements,
    validate_congruent_levels,
    verify_lie_closure,
    verify_subgroup_closure,
)
from dilatations.poly import InputError


def test_gl1_classical_filtration():
    filt = FiltrationSpec(GroupSpec("GL", 1), [("e", 1)])
    pts = group_points(filt, LevelRing(3, 3))
    assert len(pts) == 9
    assert sorted(g[0][0] for g in pts.elements) == [1, 4, 7, 10, 13, 16, 19, 22, 25]


def test_sl2_principal_level():
    filt = FiltrationSpec(GroupSpec("SL", 2), [("e", 1)])
    pts = group_points(filt, LevelRing(2, 3))
    # kernel of SL_2(Z/8) -> SL_2(Z/2): 384 / 6
    assert len(pts) == 64


def test_sl2_mixed_filtration_points():
    filt = FiltrationSpec(GroupSpec("SL", 2), [("e", 1), ("T", 2)])
    pts = group_points(filt, LevelRing(2, 3))
    for g in pts.elements:
        assert g[0][1] % 4 == 0 and g[1][0] % 4 == 0
        assert (g[0][0] - 1) % 2 == 0 and (g[1][1] - 1) % 2 == 0
    assert len(pts) > 0


def test_group_points_intersection_formula():
    # points = intersection of the mono-centered point sets
    ring = LevelRing(2, 3)
    spec = GroupSpec("SL", 2)
    both = group_points(FiltrationSpec(spec, [("e", 1), ("T", 2)]), ring)
    only_e = group_points(FiltrationSpec(spec, [("e", 1)]), ring)
    only_t = group_points(FiltrationSpec(spec, [("e", 1), ("T", 2)]), ring)
    t_side = group_points(FiltrationSpec(spec, [("e", 0), ("T", 2)]), ring)
    assert both.as_set == only_e.as_set & t_side.as_set


def test_group_points_monotone_in_levels():
    ring = LevelRing(2, 3)
    spec = GroupSpec("SL", 2)
    lo = group_points(FiltrationSpec(spec, [("e", 1), ("T", 1)]), ring)
    hi = group_points(FiltrationSpec(spec, [("e", 2), ("T", 3)]), ring)
    assert hi.as_set <= lo.as_set


def test_lie_points_gl1():
    filt = FiltrationSpec(GroupSpec("GL", 1), [("e", 1)])
    xs = lie_points(filt, LevelRing(3, 3))
    assert sorted(x[0][0] for x in xs) == [0, 3, 6, 9, 12, 15, 18, 21, 24]


def test_lie_points_sl2_count_and_closure():
    filt = FiltrationSpec(GroupSpec("SL", 2), [("e", 1)])
    ring = LevelRing(2, 3)
    xs = lie_points(filt, ring)
    # x = 2m with tr(2m) = 0 mod 8: 4^4 / 4 choices
    assert len(xs) == 64
    assert verify_lie_closure(xs, ring)


def test_catalog_subgroups_closed():
    spec = GroupSpec("SL", 2)
    ops = IntModOps(4)
    for name in ("e", "T", "B", "Z", "G"):
        assert verify_subgroup_closure(spec, name, ops)
    spec_gl = GroupSpec("GL", 2)
    assert verify_subgroup_closure(spec_gl, "L(1,1)", IntModOps(4))


def test_levi_equals_torus_for_unit_blocks():
    spec = GroupSpec("GL", 2)
    ops = IntModOps(3)
    levi = set(subgroup_elements(spec, "L(1,1)", ops))
    torus = set(subgroup_elements(spec, "T", ops))
    assert levi == torus


def test_validate_congruent_levels():
    assert validate_congruent_levels([1, 2], [2, 3], 4) is None
    assert validate_congruent_levels([1], [3], 4) is not None  # r - s > s_0
    assert validate_congruent_levels([1, 1], [2, 3], 4) is not None  # r_1 - s_1 > s_0
    assert validate_congruent_levels([1], [2], 1) is not None  # r > N


def test_congruent_iso_gl1():
    filt = FiltrationSpec(GroupSpec("GL", 1), [("e", 1)])
    rep = congruent_iso_check(filt, [1], [2], LevelRing(3, 3))
    assert rep.ok
    orders = [d for k, _, d in rep.clauses if k == "orders_equal"][0]
    assert "3" in orders


def test_congruent_iso_sl2_quotient_eight():
    filt = FiltrationSpec(GroupSpec("SL", 2), [("e", 1)])
    ring = LevelRing(2, 4)
    ps = group_points(filt.with_levels([1]), ring)
    pr = group_points(filt.with_levels([2]), ring)
    assert len(ps) // len(pr) == 8
    rep = congruent_iso_check(filt, [1], [2], ring)
    assert rep.ok


def test_congruent_iso_mixed_sl2():
    filt = FiltrationSpec(GroupSpec("SL", 2), [("e", 1), ("T", 2)])
    rep = congruent_iso_check(filt, [1, 2], [2, 3], LevelRing(2, 4))
    assert rep.ok


def test_congruent_iso_gl2_levi():
    filt = FiltrationSpec(GroupSpec("GL", 2), [("e", 1), ("L(1,1)", 2)])
    rep = congruent_iso_check(filt, [1, 2], [2, 3], LevelRing(3, 3))
    assert rep.ok


def test_congruent_iso_rejects_bad_levels():
    filt = FiltrationSpec(GroupSpec("GL", 1), [("e", 1)])
    rep = congruent_iso_check(filt, [1], [3], LevelRing(3, 3))
    assert not rep.ok


def test_quotient_order_formula():
    # |Q_grp| = p^{(r0-s0) dim g} for H = {e}
    for spec, p, n_level, s0, r0 in [
        (GroupSpec("SL", 2), 2, 4, 1, 2),
        (GroupSpec("GL", 2), 2, 3, 1, 2),
        (GroupSpec("SL", 2), 3, 3, 1, 2),
        (GroupSpec("GL", 1), 3, 3, 1, 2),
    ]:
        ring = LevelRing(p, n_level)
        filt = FiltrationSpec(spec, [("e", s0)])
        ps = group_points(filt, ring)
        pr = group_points(filt.with_levels([r0]), ring)
        assert len(ps) // len(pr) == expected_trivial_quotient_order(spec, s0, r0, p)


def test_normalizer_scalar_center():
    filt = FiltrationSpec(GroupSpec("GL", 2), [("e", 1), ("T", 2)])
    rep = normalizer_check(filt, "Z", LevelRing(2, 3))
    assert rep.ok


def test_normalizer_torus_torus():
    filt = FiltrationSpec(GroupSpec("GL", 2), [("e", 1), ("T", 2)])
    rep = normalizer_check(filt, "T", LevelRing(2, 3))
    assert rep.ok


def test_normalizer_sl2_vs_torus_hypothesis_fails():
    filt = FiltrationSpec(GroupSpec("SL", 2), [("e", 1), ("T", 1)])
    rep = normalizer_check(filt, "G", LevelRing(2, 3))
    d = {k: ok for k, ok, _ in rep.clauses}
    assert d["commutes_1"] is False
    assert d["main_check_skipped"] is True


def test_budget_guard():
    filt = FiltrationSpec(GroupSpec("GL", 2), [("G", 1)])
    from dilatations.oracle import SizeCapError

    with pytest.raises(SizeCapError):
        group_points(filt, LevelRing(2, 20))


def test_matrix_inverse():
    ops = IntModOps(9)
    g = ((1, 3), (0, 1))
    assert mat_mul(ops, g, mat_inv(ops, g)) == mat_id(ops, 2)
    g3 = ((1, 2, 0), (0, 1, 5), (0, 0, 1))
    ops3 = IntModOps(8)
    assert mat_mul(ops3, g3, mat_inv(ops3, g3)) == mat_id(ops3, 3)


def test_level_ring_bounds():
    with pytest.raises(InputError):
        LevelRing(4, 2)  # not prime
    with pytest.raises(InputError):
        LevelRing(2, 21)  # p^N over the enumeration cap
    assert LevelRing(2, 20).mod == 2**20


def test_congruent_iso_borel_odd_characteristic():
    filt = FiltrationSpec(GroupSpec("SL", 2), [("e", 1), ("B", 2)])
    rep = congruent_iso_check(filt, [1, 2], [2, 3], LevelRing(3, 3))
    assert rep.ok


def test_full_group_order_sanity():
    # |SL_2(Z/8)| = 2^6 * |SL_2(F_2)| = 384, via the trivial filtration
    filt = FiltrationSpec(GroupSpec("SL", 2), [("e", 0)])
    pts = group_points(filt, LevelRing(2, 3))
    assert len(pts) == 384


def test_gl3_points_and_iso():
    ring_ = LevelRing(2, 2)
    filt = FiltrationSpec(GroupSpec("GL", 3), [("e", 1)])
    pts = group_points(filt, ring_)
    assert len(pts) == 2**9  # principal congruence kernel mod 4
    rep = congruent_iso_check(filt, [1], [2], ring_)
    assert rep.ok


def test_gl3_levi_points():
    ring_ = LevelRing(2, 2)
    filt = FiltrationSpec(GroupSpec("GL", 3), [("e", 1), ("L(2,1)", 2)])
    pts = group_points(filt, ring_)
    for g in pts.elements:
        assert g[0][2] % 4 == 0 and g[1][2] % 4 == 0
        assert g[2][0] % 4 == 0 and g[2][1] % 4 == 0
