"""Tests for the size statistics, moment reports, and conjecture experiments."""

from fractions import Fraction as Q
from math import gcd

import pytest

from corelab.affine import b_omega_action, omega_group
from corelab.lattice_enum import coroot_points_in_bA, coweight_points_in_bA
from corelab.rootsys import build_root_system
from corelab.stats import (
    MomentReport,
    QuadraticStatistic,
    closed_m3_type_a,
    closed_max,
    closed_mean,
    closed_variance,
    experiment_cn_fuss,
    experiment_cn_selfconjugate_weighting,
    experiment_weak_order_maximality,
    floor_identity_check,
    haiman_count,
    is_simply_laced,
    moments,
    q_form_point,
    sc_core_from_word,
    sc_weighted_size,
    size_point,
    verify_max,
    zise_point,
)


A2 = build_root_system("A", 2)
A3 = build_root_system("A", 3)
C2 = build_root_system("C", 2)
D4 = build_root_system("D", 4)

ZERO2 = (Q(0), Q(0))


def test_size_point_anchors():
    assert size_point(A2, ZERO2) == 0
    assert size_point(A2, (Q(-1), Q(-1))) == 5
    assert size_point(A2, (Q(1), Q(1))) == 1
    assert size_point(A2, (Q(1), Q(0))) == 2


def test_q_form_minimum():
    assert q_form_point(A2, ZERO2) == Q(-1, 3)
    for rs in (A2, A3, D4):
        n, h = rs.rank, rs.coxeter_number
        assert q_form_point(rs, tuple(Q(0) for _ in range(n))) == -Q(n * (h + 1), 24)
        # size never goes below the q-form floor on sample lattice points
        for x in coroot_points_in_bA(rs, 3).points:
            assert size_point(rs, x) >= -Q(n * (h + 1), 24)


def test_zise_anchors():
    assert zise_point(A2, 4, ZERO2) == 5
    assert zise_point(build_root_system("D", 4), 5, tuple(Q(0) for _ in range(4))) == 28
    # b = 1 reduces zise to size
    for x in coroot_points_in_bA(A2, 4).points:
        assert zise_point(A2, 1, x) == size_point(A2, x)
    with pytest.raises(ValueError, match="coprime"):
        zise_point(A2, 6, ZERO2)


def test_quadratic_statistic_dispatch():
    assert QuadraticStatistic(A2, "size").evaluate((Q(-1), Q(-1))) == 5
    assert QuadraticStatistic(A2, "Q").evaluate(ZERO2) == Q(-1, 3)
    assert QuadraticStatistic(A2, "zise", 4).evaluate(ZERO2) == 5
    with pytest.raises(ValueError):
        QuadraticStatistic(A2, "sise")
    with pytest.raises(ValueError):
        QuadraticStatistic(A2, "size", 4)
    with pytest.raises(ValueError):
        QuadraticStatistic(A2, "zise")


def test_moments_a2_b4_ground_truth():
    report = moments(A2, 4, max_k=3)
    assert report.count == 5
    assert report.mean == 2
    assert report.max_value == 5
    assert report.max_multiplicity == 1
    assert report.m2 == Q(14, 5)
    assert report.m3 == Q(18, 5)
    assert report.grade == "match"
    assert all(v == "match" for _, v in report.verdicts)
    sizes = sorted(zise_point(A2, 4, x) for x in coroot_points_in_bA(A2, 4).points)
    assert sizes == [0, 1, 2, 2, 5]


def test_moments_type_a_grid():
    for rank in (1, 2, 3):
        rs = build_root_system("A", rank)
        for b in range(2, 8):
            if gcd(b, rs.coxeter_number) != 1:
                continue
            report = moments(rs, b, max_k=3)
            assert report.grade == "match"
            assert dict(report.verdicts)["m3"] == "match"


def test_moments_simply_laced_outside_a():
    report = moments(D4, 5, max_k=3)
    verdicts = dict(report.verdicts)
    assert verdicts["count"] == "match"
    assert verdicts["max"] == "match"
    assert verdicts["mean"] == "match"
    assert verdicts["m2"] == "match"
    assert verdicts["m3"] == "no closed form"
    assert report.grade == "match"


def test_moments_non_simply_laced():
    report = moments(C2, 5, max_k=2)
    verdicts = dict(report.verdicts)
    assert verdicts["count"] == "match"
    assert verdicts["max"] == "no closed form"
    assert verdicts["mean"] == "no closed form"
    assert verdicts["m2"] == "no closed form"


def test_moments_rejects_bad_input():
    with pytest.raises(ValueError):
        moments(A2, 3)
    with pytest.raises(ValueError):
        moments(A2, 4, max_k=4)


def test_closed_form_values():
    assert haiman_count(A2, 4) == 5
    assert closed_max(A2, 4) == 5
    assert closed_mean(A2, 4) == 2
    assert closed_variance(A2, 4) == Q(14, 5)
    assert closed_m3_type_a(A2, 4) == Q(18, 5)


def test_verify_max_a2_b4():
    best, mult, argmax = verify_max(A2, 4)
    assert (best, mult) == (5, 1)
    assert argmax == (Q(-1), Q(-1))


def test_verify_max_on_simply_laced_grid():
    for rs, bs in ((A3, (3, 5)), (D4, (5, 7))):
        for b in bs:
            best, mult, _ = verify_max(rs, b)
            assert best == closed_max(rs, b)
            assert mult == 1


def test_floor_identities():
    assert floor_identity_check(A2, 4)
    assert floor_identity_check(D4, 5)
    for b in (2, 3, 5, 7, 9, 11):
        if gcd(b, A3.coxeter_number) == 1:
            assert floor_identity_check(A3, b)
        if gcd(b, D4.coxeter_number) == 1:
            assert floor_identity_check(D4, b)
    with pytest.raises(ValueError):
        floor_identity_check(C2, 3)
    with pytest.raises(ValueError):
        floor_identity_check(A2, 6)


def test_zise_constant_on_stabilizer_orbits():
    for rs, b in ((A2, 4), (A3, 5), (D4, 5)):
        omega = omega_group(rs)
        for x in coweight_points_in_bA(rs, b).points:
            vals = {zise_point(rs, b, b_omega_action(rs, b, g, x)) for g in omega}
            assert len(vals) == 1


def test_coweight_power_sums_are_f_times_coroot_power_sums():
    for rs, b in ((A2, 4), (A3, 5), (D4, 5)):
        assert gcd(b, rs.index_f) == 1
        cw = [zise_point(rs, b, x) for x in coweight_points_in_bA(rs, b).points]
        cr = [zise_point(rs, b, x) for x in coroot_points_in_bA(rs, b).points]
        for k in range(4):
            assert sum(v**k for v in cw) == rs.index_f * sum(v**k for v in cr)


def test_fuss_experiment_small_cases():
    r2 = experiment_cn_fuss(2, 1)
    assert r2["b"] == 5
    assert r2["mean"] == Q(11, 3)
    assert r2["conjecture"] == Q(11, 3)
    assert r2["verdict"] == "agree"
    r3 = experiment_cn_fuss(3, 1)
    assert r3["conjecture"] == Q(23, 2)
    assert r3["verdict"] == "agree"
    with pytest.raises(ValueError):
        experiment_cn_fuss(1, 1)


def test_weak_order_experiment_a2_b4():
    report = experiment_weak_order_maximality(A2, 4)
    assert report["total"] == 5
    assert report["contained"] == 5
    assert report["verdict"] == "agree"


def test_weak_order_experiment_d4_b5():
    report = experiment_weak_order_maximality(D4, 5)
    assert report["total"] == 20
    assert report["contained"] + len(report["violations"]) == 20


def test_selfconjugate_core_anchor():
    core = sc_core_from_word(2, (0, 1, 0, 1, 2, 1, 0))
    assert core == (6, 3, 3, 1, 1, 1)
    assert sum(core) == 15
    assert sc_weighted_size(core, 2) == 11
    assert sc_core_from_word(2, ()) == ()
    assert sc_weighted_size((), 2) == 0


def test_selfconjugate_experiment():
    report = experiment_cn_selfconjugate_weighting(2, 50, seed=7)
    assert report["agreements"] + len(report["mismatches"]) == 50
    assert report["verdict"] == "agree"
    report3 = experiment_cn_selfconjugate_weighting(3, 25, seed=11)
    assert report3["verdict"] == "agree"
