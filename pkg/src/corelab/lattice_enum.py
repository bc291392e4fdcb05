"""Lattice point enumeration for dilated alcoves and related regions.

Coweight points of ``b * A`` are the solutions of the mark knapsack
``sum_i c_i x_i <= b`` in nonnegative integers, written in coroot
coordinates as ``sum_i x_i omega_check_i``.  Coroot points are the subset
with integer coroot coordinates.  Enumeration is lexicographic in the
coweight coefficients so output is deterministic; large folds go through
either the streaming iterators or an exact dynamic program that never
materializes the point set.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction as Q
from functools import lru_cache
from math import gcd, isqrt, lcm
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from corelab.affine import compute_w_b, in_dilated_alcove, sommers_contains
from corelab.rootsys import (
    RootSystem,
    Vector,
    build_root_system,
    inner,
    invert_matrix,
)


@dataclass(frozen=True)
class LatticePointSet:
    """An immutable set of lattice points, sorted by coroot coordinates."""

    rs: RootSystem
    b: int
    lattice: str
    points: Tuple[Vector, ...]

    def __post_init__(self):
        assert self.lattice in ("coweight", "coroot")
        assert list(self.points) == sorted(self.points)

    @property
    def count(self) -> int:
        return len(self.points)


def iter_coweight_coeffs(rs: RootSystem, b: int) -> Iterator[Tuple[int, ...]]:
    """Knapsack solutions ``sum c_i x_i <= b`` in lexicographic order."""
    if b < 0:
        raise ValueError("dilation must be nonnegative")
    n = rs.rank
    marks = rs.marks
    coeffs = [0] * n

    def rec(i: int, budget: int) -> Iterator[Tuple[int, ...]]:
        if i == n:
            yield tuple(coeffs)
            return
        for v in range(budget // marks[i] + 1):
            coeffs[i] = v
            yield from rec(i + 1, budget - v * marks[i])
        coeffs[i] = 0

    yield from rec(0, b)


@lru_cache(maxsize=None)
def _scaled_coweight_rows(rs: RootSystem) -> Tuple[int, Tuple[Tuple[int, ...], ...]]:
    """Common denominator and integer rows of the coweight coordinate matrix."""
    n = rs.rank
    den = 1
    for w in rs.fund_coweights:
        for v in w:
            den = lcm(den, v.denominator)
    rows = tuple(
        tuple(int(rs.fund_coweights[i][k] * den) for i in range(n)) for k in range(n)
    )
    return den, rows


def coeffs_to_point(rs: RootSystem, coeffs: Sequence[int]) -> Vector:
    """Coroot coordinates of ``sum_i coeffs[i] * omega_check_i``."""
    den, rows = _scaled_coweight_rows(rs)
    return tuple(Q(sum(c * r for c, r in zip(coeffs, row)), den) for row in rows)


def is_coroot_point(x: Sequence[Q]) -> bool:
    return all(v.denominator == 1 for v in x)


def iter_coweight_points(rs: RootSystem, b: int) -> Iterator[Vector]:
    for coeffs in iter_coweight_coeffs(rs, b):
        yield coeffs_to_point(rs, coeffs)


def iter_coroot_points(rs: RootSystem, b: int) -> Iterator[Vector]:
    for x in iter_coweight_points(rs, b):
        if is_coroot_point(x):
            yield x


def _shard_worker(args) -> List[Tuple[int, ...]]:
    family, rank, total = args
    rs = build_root_system(family, rank)
    out = []
    for coeffs in iter_coweight_coeffs(rs, total):
        if sum(c * m for c, m in zip(coeffs, rs.marks)) == total:
            out.append(coeffs)
    return out


def _all_coeffs(rs: RootSystem, b: int, jobs: int) -> List[Tuple[int, ...]]:
    if jobs <= 1:
        return list(iter_coweight_coeffs(rs, b))
    # shard on the slack variable: shard s holds the solutions of total weight b - s
    tasks = [(rs.family, rs.rank, b - s) for s in range(b + 1)]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        shards = list(pool.map(_shard_worker, tasks))
    merged = [c for shard in shards for c in shard]
    merged.sort()
    return merged


def coweight_points_in_bA(rs: RootSystem, b: int, jobs: int = 1) -> LatticePointSet:
    """All coweight lattice points of the closed dilated alcove ``b * A``."""
    points = tuple(sorted(coeffs_to_point(rs, c) for c in _all_coeffs(rs, b, jobs)))
    for x in points[: min(len(points), 64)]:
        assert in_dilated_alcove(rs, b, x)
    return LatticePointSet(rs, b, "coweight", points)


def coroot_points_in_bA(rs: RootSystem, b: int, jobs: int = 1) -> LatticePointSet:
    """Coroot lattice points of ``b * A``; counts follow the exponent product rule."""
    points = tuple(
        sorted(
            x
            for c in _all_coeffs(rs, b, jobs)
            if is_coroot_point(x := coeffs_to_point(rs, c))
        )
    )
    if gcd(b, rs.coxeter_number) == 1:
        expected = 1
        for e in rs.exponents:
            expected *= b + e
        assert expected % rs.weyl_order == 0
        assert len(points) == expected // rs.weyl_order
    return LatticePointSet(rs, b, "coroot", points)


def core_points_in_sommers(rs: RootSystem, b: int, jobs: int = 1) -> LatticePointSet:
    """Coroot points of the height-``b`` region, as the ``w_b`` transport of ``b * A``."""
    h = rs.coxeter_number
    if gcd(b, h) != 1:
        raise ValueError("b not coprime to Coxeter number")
    winv = compute_w_b(rs, b).inverse()
    moved = [winv.apply(x) for x in coroot_points_in_bA(rs, b, jobs).points]
    for x in moved:
        assert is_coroot_point(x)
        assert sommers_contains(rs, b, x)
    return LatticePointSet(rs, b, "coroot", tuple(sorted(moved)))


def _size_value(rs: RootSystem, x: Sequence[Q]) -> Q:
    g = rs.dual_coxeter_number
    return Q(g, 2) * inner(rs, x, x) - sum(x)


def coroot_points_in_size_ellipsoid(
    rs: RootSystem, N: int
) -> List[Tuple[Vector, Q]]:
    """All coroot lattice points with size at most ``N``, with their sizes.

    The size form is ``g/2 ||x - rho/g||^2`` minus a constant, so points live
    in an ellipsoid around ``rho/g``; each coordinate is bounded through the
    inverse Gram matrix with exact integer square roots, then candidates are
    filtered.
    """
    if N < 0:
        raise ValueError("size bound must be nonnegative")
    n = rs.rank
    g = rs.dual_coxeter_number
    h = rs.coxeter_number
    center = tuple(Q(v, g) for v in rs.rho)
    radius_sq = Q(2, g) * (N + Q(n * (h + 1), 24))
    ginv = invert_matrix([list(row) for row in rs.gram])
    ranges = []
    for i in range(n):
        bound = radius_sq * ginv[i][i]
        # smallest integer s with s^2 >= bound
        s = isqrt(bound.numerator // bound.denominator) + 1
        lo = (center[i].numerator - s * center[i].denominator) // center[i].denominator
        hi = -((-center[i].numerator - s * center[i].denominator) // center[i].denominator)
        ranges.append(range(lo, hi + 1))

    out: List[Tuple[Vector, Q]] = []

    if all(l == 1 for l in rs.simple_lengths):
        # Integer fast path: the Gram matrix equals the Cartan matrix, so
        # x^T G x and the size are integers; carry the form incrementally.
        cartan = rs.cartan

        def rec_int(i: int, prefix: List[int], quad: int, lin: int):
            if i == n:
                assert g * quad % 2 == 0
                s = g * quad // 2 - lin
                if s <= N:
                    out.append((tuple(Q(v) for v in prefix), Q(s)))
                return
            row = cartan[i]
            cross = sum(row[j] * prefix[j] for j in range(i))
            for v in ranges[i]:
                prefix.append(v)
                rec_int(i + 1, prefix, quad + row[i] * v * v + 2 * v * cross, lin + v)
                prefix.pop()

        rec_int(0, [], 0, 0)
    else:

        def rec(i: int, prefix: List[int]):
            if i == n:
                x = tuple(Q(v) for v in prefix)
                s = _size_value(rs, x)
                if s <= N:
                    assert s.denominator == 1
                    out.append((x, s))
                return
            for v in ranges[i]:
                prefix.append(v)
                rec(i + 1, prefix)
                prefix.pop()

        rec(0, [])
    out.sort(key=lambda item: item[0])
    return out


def _zise_closed_form(rs: RootSystem, b: int, x: Sequence[Q]) -> Q:
    n = rs.rank
    h = rs.coxeter_number
    return (
        Q(h, 2) * inner(rs, x, x)
        - b * sum(x)
        + Q((b * b - 1) * n * (h + 1), 24)
    )


def alcove_size_sums(rs: RootSystem, b: int, lattice: str) -> Tuple[int, Optional[Q]]:
    """Count and size-sum over ``b * A`` lattice points, by exact dynamic programming.

    Returns ``(S0, S1)`` where ``S0`` is the number of points and ``S1`` the
    sum of the dilation-``b`` size form over them.  The form is the closed
    simply-laced quadratic ``h/2 ||x||^2 - b sum(x) + (b^2-1) n (h+1)/24``;
    for other systems ``S1`` is ``None`` and only the count is meaningful.
    The program runs over knapsack budgets and coroot-residue classes,
    carrying exact zeroth, first, and second moments of the point
    coordinates, and never materializes the point set.
    """
    if lattice not in ("coweight", "coroot"):
        raise ValueError(f"unknown lattice {lattice!r}")
    if b < 0:
        raise ValueError("dilation must be nonnegative")
    n = rs.rank
    f = rs.index_f
    # integer coweight vectors: D * omega_check_i
    D = lcm(*(v.denominator for row in rs.inv_cartan_t for v in row))
    w_vecs = []
    for i in range(n):
        scaled = [rs.fund_coweights[i][k] * D for k in range(n)]
        assert all(v.denominator == 1 for v in scaled)
        w_vecs.append(tuple(int(v) for v in scaled))
    # residue class of sum x_i omega_check_i modulo the coroot lattice:
    # adj(A^T) y mod f, where adj = f * inv(A^T)
    adj = [
        [int(rs.inv_cartan_t[r][c] * f) for c in range(n)] for r in range(n)
    ]
    for r in range(n):
        for c in range(n):
            assert rs.inv_cartan_t[r][c] * f == adj[r][c]

    zero_cls = tuple(0 for _ in range(n))
    zero_m1 = tuple(0 for _ in range(n))
    zero_m2 = tuple(0 for _ in range(n * n))
    # state[budget][cls] = (M0, M1, M2) exact integer moment sums of D*x
    state: List[Dict[Tuple[int, ...], Tuple[int, Tuple[int, ...], Tuple[int, ...]]]] = [
        dict() for _ in range(b + 1)
    ]
    state[0][zero_cls] = (1, zero_m1, zero_m2)
    items = [(rs.marks[i], w_vecs[i], tuple(adj[r][i] % f for r in range(n)))
             for i in range(n)]
    items.append((1, tuple(0 for _ in range(n)), zero_cls))  # slack node
    for weight, w, cls_shift in items:
        for budget in range(weight, b + 1):
            src = state[budget - weight]
            if not src:
                continue
            dst = state[budget]
            for cls, (m0, m1, m2) in list(src.items()):
                new_cls = tuple((cls[r] + cls_shift[r]) % f for r in range(n))
                nm1 = tuple(m1[r] + w[r] * m0 for r in range(n))
                nm2 = tuple(
                    m2[r * n + c] + w[r] * m1[c] + m1[r] * w[c] + w[r] * w[c] * m0
                    for r in range(n)
                    for c in range(n)
                )
                if new_cls in dst:
                    o0, o1, o2 = dst[new_cls]
                    dst[new_cls] = (
                        o0 + m0,
                        tuple(a + bb for a, bb in zip(o1, nm1)),
                        tuple(a + bb for a, bb in zip(o2, nm2)),
                    )
                else:
                    dst[new_cls] = (m0, nm1, nm2)
    final = state[b]
    if lattice == "coroot":
        picked = [final.get(zero_cls, (0, zero_m1, zero_m2))]
    else:
        picked = list(final.values())
    s0 = sum(m0 for m0, _, _ in picked)
    if s0 == 0:
        return 0, Q(0)
    if any(l != 1 for l in rs.simple_lengths):
        return s0, None
    h = rs.coxeter_number
    sum_m1 = [sum(p[1][r] for p in picked) for r in range(n)]
    sum_m2 = [sum(p[2][k] for p in picked) for k in range(n * n)]
    # sum of h/2 <x, x> with the Gram matrix equal to the Cartan matrix
    quad = sum(
        rs.cartan[r][c] * sum_m2[r * n + c] for r in range(n) for c in range(n)
    )
    s1 = (
        Q(h * quad, 2 * D * D)
        - Q(b * sum(sum_m1), D)
        + Q((b * b - 1) * n * (h + 1), 24) * s0
    )
    return s0, s1


def streamed_size_sums(rs: RootSystem, b: int, lattice: str) -> Tuple[int, Q]:
    """Reference implementation of alcove_size_sums by direct streaming."""
    points = iter_coweight_points(rs, b) if lattice == "coweight" else iter_coroot_points(rs, b)
    s0 = 0
    s1 = Q(0)
    for x in points:
        s0 += 1
        s1 += _zise_closed_form(rs, b, x)
    return s0, s1
