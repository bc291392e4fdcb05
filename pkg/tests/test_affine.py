"""Tests for affine group elements, walks, inversion sets, and the alcove stabilizer."""

from fractions import Fraction as Q
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corelab.affine import (
    AffineElement,
    AffineRoot,
    alcove_vertices,
    alcove_walk,
    apply_to_affine_root,
    b_omega_action,
    base_point,
    compute_w_b,
    element_from_word,
    in_dilated_alcove,
    inversions_of_inverse,
    omega_group,
    simple_affine_root,
    simple_reflection,
    size_of_element,
    sommers_contains,
    to_dominant,
    word_of,
)
from corelab.rootsys import build_root_system, pairing, vec_scale


A2 = build_root_system("A", 2)
A3 = build_root_system("A", 3)
C2 = build_root_system("C", 2)
D4 = build_root_system("D", 4)


def test_simple_reflections_are_involutions():
    for rs in (A2, C2, D4, build_root_system("G", 2)):
        for i in range(rs.rank + 1):
            s = simple_reflection(rs, i)
            assert (s * s).is_identity()
            assert not s.is_identity()


def test_braid_relation_a2():
    s1 = simple_reflection(A2, 1)
    s2 = simple_reflection(A2, 2)
    assert s1 * s2 * s1 == s2 * s1 * s2


def test_reflection_index_out_of_range():
    with pytest.raises(ValueError):
        simple_reflection(A2, 3)


def test_affine_reflection_fixes_wall_and_moves_origin():
    s0 = simple_reflection(A2, 0)
    # the origin reflects to the highest coroot
    assert s0.apply((Q(0), Q(0))) == (Q(1), Q(1))
    # a point on the affine wall is fixed
    wall_point = vec_scale(Q(1, 2), (Q(1), Q(1)))
    assert s0.apply(wall_point) == wall_point


def test_walk_at_base_point_is_trivial():
    elem, word = alcove_walk(A2, base_point(A2))
    assert word == ()
    assert elem.is_identity()


def test_walk_word_a2_b4():
    x = vec_scale(Q(4), base_point(A2))
    elem, word = alcove_walk(A2, x)
    assert word == (0, 1, 2, 1)
    assert elem.linear == ((1, 0), (0, 1))
    assert elem.translation == (Q(1), Q(1))


def test_walk_rejects_wall_points():
    with pytest.raises(ValueError, match="not regular"):
        alcove_walk(A2, (Q(0), Q(0)))
    with pytest.raises(ValueError, match="not regular"):
        alcove_walk(A2, (Q(1, 2), Q(1, 2)))


def test_compute_w_b_a2_b4_is_translation_by_rho_check():
    w4 = compute_w_b(A2, 4)
    assert w4.linear == ((1, 0), (0, 1))
    assert w4.translation == (Q(1), Q(1))


def test_compute_w_b_rejects_non_coprime():
    with pytest.raises(ValueError, match="coprime"):
        compute_w_b(A2, 3)
    with pytest.raises(ValueError, match="coprime"):
        compute_w_b(D4, 2)


def test_inversions_of_inverse_a2_example():
    # the element s1 s2 s1 s0, whose inverse moves the base point to 4/3 rho_check
    w = element_from_word(A2, (1, 2, 1, 0))
    inv = set(inversions_of_inverse(A2, w))
    assert inv == {
        AffineRoot((-1, 0), 1),
        AffineRoot((0, -1), 1),
        AffineRoot((-1, -1), 1),
        AffineRoot((-1, -1), 2),
    }
    assert size_of_element(A2, w) == 5


def test_inversion_set_of_w_b_matches_height_formula():
    # inv(w_b) = {-alpha + k delta : alpha positive, 0 < k < b ht(alpha) / h}
    for rs in (A2, A3, C2, D4):
        h = rs.coxeter_number
        for b in range(2, 8):
            if gcd(b, h) != 1:
                continue
            wb = compute_w_b(rs, b)
            got = set(inversions_of_inverse(rs, wb.inverse()))
            expected = set()
            for root in rs.positive_roots:
                neg = tuple(-c for c in root.coeffs)
                k = 1
                while k * h < b * root.height:
                    expected.add(AffineRoot(neg, k))
                    k += 1
            assert got == expected
            assert len(got) == len(word_of(rs, wb))


def test_size_of_c2_word():
    w = element_from_word(C2, (0, 1, 0, 1, 2, 1, 0))
    assert size_of_element(C2, w) == 11


def test_word_roundtrip_short_words():
    for word in [(1,), (0,), (1, 2), (0, 1, 0), (2, 1, 0, 1)]:
        w = element_from_word(A2, word)
        recovered = element_from_word(A2, word_of(A2, w))
        assert recovered == w


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(min_value=0, max_value=3), max_size=10))
def test_walk_recovers_element_from_any_word(word):
    w = element_from_word(A3, word)
    elem, _ = alcove_walk(A3, w.apply(base_point(A3)))
    assert elem == w


def test_apply_to_affine_root_levels():
    s0 = simple_reflection(A2, 0)
    a0 = simple_affine_root(A2, 0)
    assert a0 == AffineRoot((-1, -1), 1)
    # s0 negates its own root
    assert apply_to_affine_root(A2, s0, a0) == AffineRoot((1, 1), -1)
    # and sends alpha1 to -alpha2 + delta
    assert apply_to_affine_root(A2, s0, simple_affine_root(A2, 1)) == AffineRoot(
        (0, -1), 1
    )


def test_affine_root_positivity():
    assert AffineRoot((-1, -1), 1).is_positive()
    assert AffineRoot((1, 0), 0).is_positive()
    assert not AffineRoot((-1, 0), 0).is_positive()
    assert not AffineRoot((1, 1), -1).is_positive()


def test_sommers_region_a2_b4():
    # b = 4 = 1*3 + 1: height-1 roots bounded below by -1, height-2 by 2
    assert sommers_contains(A2, 4, (Q(-1), Q(-1)))
    assert sommers_contains(A2, 4, (Q(1), Q(1)))
    assert not sommers_contains(A2, 4, (Q(-2), Q(-1)))
    assert not sommers_contains(A2, 4, (Q(2), Q(1)))
    with pytest.raises(ValueError, match="coprime"):
        sommers_contains(A2, 3, (Q(0), Q(0)))


def test_in_dilated_alcove():
    assert in_dilated_alcove(A2, 4, (Q(1), Q(1)))
    assert in_dilated_alcove(A2, 2, (Q(1), Q(1)))
    assert not in_dilated_alcove(A2, 1, (Q(1), Q(1)))
    assert not in_dilated_alcove(A2, 4, (Q(-1), Q(0)))
    assert in_dilated_alcove(A2, 0, (Q(0), Q(0)))


def test_to_dominant():
    for x in [(Q(-3), Q(2)), (Q(0), Q(-5)), (Q(7), Q(1))]:
        u = to_dominant(A2, x)
        y = u.apply(x)
        for i in range(2):
            simple = tuple(int(j == i) for j in range(2))
            assert pairing(A2, y, simple) >= 0


def test_omega_group_orders():
    expected = {
        ("A", 2): 3,
        ("A", 3): 4,
        ("B", 3): 2,
        ("C", 3): 2,
        ("D", 4): 4,
        ("D", 5): 4,
        ("E", 6): 3,
        ("E", 7): 2,
        ("E", 8): 1,
        ("F", 4): 1,
        ("G", 2): 1,
    }
    for (fam, rank), order in expected.items():
        rs = build_root_system(fam, rank)
        omega = omega_group(rs)
        assert len(omega) == order
        assert omega[0].is_identity()


def test_omega_group_is_closed_and_abelian():
    for rs in (A2, A3, D4, build_root_system("D", 5)):
        omega = omega_group(rs)
        for g in omega:
            for k in omega:
                gk = g * k
                assert gk in omega
                assert gk == k * g


def test_omega_group_element_orders_d4_vs_d5():
    # even rank D gives the Klein group, odd rank the cyclic group of order 4
    d4 = omega_group(D4)
    assert all((g * g).is_identity() for g in d4)
    d5 = omega_group(build_root_system("D", 5))
    orders = set()
    for g in d5:
        k, power = 1, g
        while not power.is_identity():
            power = power * g
            k += 1
        orders.add(k)
    assert orders == {1, 2, 4}


def test_b_omega_action_preserves_dilated_alcove():
    b = 4
    for g in omega_group(A2):
        for v in alcove_vertices(A2, b):
            assert in_dilated_alcove(A2, b, b_omega_action(A2, b, g, v))
        assert b_omega_action(A2, b, g, vec_scale(Q(b), base_point(A2))) == vec_scale(
            Q(b), base_point(A2)
        )


def test_alcove_vertices():
    verts = alcove_vertices(A2, 3)
    assert verts[0] == (Q(0), Q(0))
    assert (Q(2), Q(1)) in verts
    assert (Q(1), Q(2)) in verts
