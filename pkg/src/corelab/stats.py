"""Size statistics on lattice points: quadratic forms, exact moments, experiments.

``size`` is the quadratic form ``g/2 ||x||^2 - <x, rho>`` on coroot
coordinates; ``zise`` at dilation ``b`` is its pullback through ``w_b``.
Moments over the coroot points of ``b * A`` are folded exactly as power
sums and compared against closed formulas where those exist (count for
every type; maximum, mean, and variance for simply-laced systems; the
third central moment for type A only).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction as Q
from functools import lru_cache
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

from corelab.affine import (
    AffineElement,
    compute_w_b,
    element_from_word,
    inversions_of_inverse,
    size_of_element,
    to_dominant,
)
from corelab.lattice_enum import coroot_points_in_bA, core_points_in_sommers
from corelab.rootsys import (
    RootSystem,
    Vector,
    build_root_system,
    inner,
    roots_of_height,
    vec_scale,
    vec_sub,
)


def is_simply_laced(rs: RootSystem) -> bool:
    return all(l == 1 for l in rs.simple_lengths)


def size_point(rs: RootSystem, x: Sequence[Q]) -> Q:
    """The size form ``g/2 ||x||^2 - <x, rho>``; integer on coroot points."""
    xq = tuple(Q(v) for v in x)
    return Q(rs.dual_coxeter_number, 2) * inner(rs, xq, xq) - sum(xq)


def q_form_point(rs: RootSystem, x: Sequence[Q]) -> Q:
    """The centered form ``g/2 ||x||^2 - n (h+1)/24``; minimal value of size."""
    xq = tuple(Q(v) for v in x)
    n, h = rs.rank, rs.coxeter_number
    return Q(rs.dual_coxeter_number, 2) * inner(rs, xq, xq) - Q(n * (h + 1), 24)


@lru_cache(maxsize=None)
def _w_b_inverse(rs: RootSystem, b: int) -> AffineElement:
    return compute_w_b(rs, b).inverse()


def zise_point(rs: RootSystem, b: int, x: Sequence[Q]) -> Q:
    """Size pulled back through ``w_b``; checked against the closed quadratic
    ``h/2 ||x||^2 - b sum(x) + (b^2 - 1) n (h+1)/24`` on every simply-laced call."""
    h = rs.coxeter_number
    if gcd(b, h) != 1:
        raise ValueError("b not coprime to Coxeter number")
    xq = tuple(Q(v) for v in x)
    value = size_point(rs, _w_b_inverse(rs, b).apply(xq))
    if is_simply_laced(rs):
        n = rs.rank
        closed = (
            Q(h, 2) * inner(rs, xq, xq)
            - b * sum(xq)
            + Q((b * b - 1) * n * (h + 1), 24)
        )
        assert value == closed
    return value


@dataclass(frozen=True)
class QuadraticStatistic:
    """One of the three quadratic statistics, bound to a root system."""

    rs: RootSystem
    kind: str
    b: Optional[int] = None

    def __post_init__(self):
        if self.kind not in ("size", "zise", "Q"):
            raise ValueError(f"unknown statistic kind {self.kind!r}")
        if (self.kind == "zise") != (self.b is not None):
            raise ValueError("zise takes a dilation b; size and Q take none")

    def evaluate(self, x: Sequence[Q]) -> Q:
        if self.kind == "size":
            return size_point(self.rs, x)
        if self.kind == "Q":
            return q_form_point(self.rs, x)
        return zise_point(self.rs, self.b, x)


def haiman_count(rs: RootSystem, b: int) -> Q:
    """Number of coroot points of ``b * A`` for ``b`` coprime to ``h``."""
    num = 1
    for e in rs.exponents:
        num *= b + e
    return Q(num, rs.weyl_order)


def closed_max(rs: RootSystem, b: int) -> Q:
    return Q(rs.rank * (b * b - 1) * (rs.coxeter_number + 1), 24)


def closed_mean(rs: RootSystem, b: int) -> Q:
    h = rs.coxeter_number
    return Q(rs.rank * (b - 1) * (h + b + 1), 24)


def closed_variance(rs: RootSystem, b: int) -> Q:
    n, h = rs.rank, rs.coxeter_number
    return Q(n * h * b * (b - 1) * (h + b) * (h + b + 1), 1440)


def closed_m3_type_a(rs: RootSystem, b: int) -> Q:
    a = rs.rank + 1
    poly = (
        2 * a * a * b
        - 3 * a * a
        + 2 * a * b * b
        - 3 * a * b
        - 3 * b * b
        - 3
    )
    return Q(
        a * b * (a - 1) * (b - 1) * (a + b) * (a + b + 1) * poly,
        60480,
    )


@dataclass(frozen=True)
class MomentReport:
    """Exact enumerated statistics next to their closed forms and verdicts."""

    family: str
    rank: int
    b: int
    count: int
    max_value: Q
    max_multiplicity: int
    mean: Q
    m2: Optional[Q]
    m3: Optional[Q]
    closed_forms: Tuple[Tuple[str, Optional[Q]], ...]
    verdicts: Tuple[Tuple[str, str], ...]

    def verdict_map(self) -> Dict[str, str]:
        return dict(self.verdicts)

    @property
    def grade(self) -> str:
        vs = self.verdict_map().values()
        return "mismatch" if any(v.startswith("mismatch") for v in vs) else "match"


def _verdict(enumerated: Optional[Q], closed: Optional[Q]) -> str:
    if closed is None:
        return "no closed form"
    if enumerated == closed:
        return "match"
    return f"mismatch({enumerated}!={closed})"


def moments(rs: RootSystem, b: int, max_k: int = 3) -> MomentReport:
    """Exact moments of zise over the coroot points of ``b * A``.

    Power sums are folded in one streaming pass; mean and central moments
    are then formed symbolically, and an independent centered fold checks
    them.  Closed forms fill in per type as available.
    """
    if max_k not in (1, 2, 3):
        raise ValueError("max_k must be 1, 2, or 3")
    h = rs.coxeter_number
    if gcd(b, h) != 1:
        raise ValueError("b not coprime to Coxeter number")
    values = [zise_point(rs, b, x) for x in coroot_points_in_bA(rs, b).points]
    s0 = len(values)
    s1 = sum(values)
    s2 = sum(v * v for v in values)
    s3 = sum(v * v * v for v in values)
    best = max(values)
    mult = values.count(best)
    mean = Q(s1, s0)
    m2 = s2 / s0 - mean * mean if max_k >= 2 else None
    m3 = (
        s3 / s0 - 3 * mean * (s2 / s0) + 2 * mean**3 if max_k >= 3 else None
    )
    if m2 is not None:
        assert m2 == sum((v - mean) ** 2 for v in values) / s0
    if m3 is not None:
        assert m3 == sum((v - mean) ** 3 for v in values) / s0
    simply = is_simply_laced(rs)
    closed: Dict[str, Optional[Q]] = {"count": haiman_count(rs, b)}
    closed["max"] = closed_max(rs, b) if simply else None
    closed["mean"] = closed_mean(rs, b) if simply else None
    if max_k >= 2:
        closed["m2"] = closed_variance(rs, b) if simply else None
    if max_k >= 3:
        closed["m3"] = closed_m3_type_a(rs, b) if rs.family == "A" else None
    verdicts = {
        "count": _verdict(Q(s0), closed["count"]),
        "max": _verdict(best, closed["max"]),
        "mean": _verdict(mean, closed["mean"]),
    }
    if max_k >= 2:
        verdicts["m2"] = _verdict(m2, closed["m2"])
    if max_k >= 3:
        verdicts["m3"] = _verdict(m3, closed["m3"])
    return MomentReport(
        family=rs.family,
        rank=rs.rank,
        b=b,
        count=s0,
        max_value=best,
        max_multiplicity=mult,
        mean=mean,
        m2=m2,
        m3=m3,
        closed_forms=tuple(sorted(closed.items())),
        verdicts=tuple(sorted(verdicts.items())),
    )


def verify_max(rs: RootSystem, b: int) -> Tuple[Q, int, Vector]:
    """Maximum of size over the height-``b`` core points, with multiplicity and argmax.

    For simply-laced systems the maximum is asserted to be the closed value
    ``n (b^2-1)(h+1)/24``, attained exactly once, at the image of the origin.
    """
    h = rs.coxeter_number
    if gcd(b, h) != 1:
        raise ValueError("b not coprime to Coxeter number")
    best = None
    mult = 0
    arg = None
    for x in coroot_points_in_bA(rs, b).points:
        v = zise_point(rs, b, x)
        if best is None or v > best:
            best, mult, arg = v, 1, x
        elif v == best:
            mult += 1
    argmax = _w_b_inverse(rs, b).apply(arg)
    if is_simply_laced(rs):
        assert best == closed_max(rs, b)
        assert mult == 1
        assert arg == tuple(Q(0) for _ in range(rs.rank))
    return best, mult, argmax


def floor_identity_check(rs: RootSystem, b: int) -> bool:
    """Exact floor-sum identities for the total size of the height-``b`` core set.

    The general rank-by-rank sum is compared to ``n (b^2-1)(h+1)/24``; for
    types A and D the displayed floor/ceiling specializations are evaluated
    and compared as well.  Returns True iff every evaluated form agrees.
    """
    if not is_simply_laced(rs):
        raise ValueError("floor identities apply to simply-laced systems")
    n, h = rs.rank, rs.coxeter_number
    if gcd(b, h) != 1:
        raise ValueError("b not coprime to Coxeter number")
    target = Q(n * (b * b - 1) * (h + 1), 24)
    general = Q(0)
    for i in range(1, b):
        for j in range(1, (i * h) // b + 1):
            general += (b - i) * len(roots_of_height(rs, h - j))
    results = [general == target]
    if rs.family == "A":
        a_target = Q(n * (b * b - 1) * (n + 2), 24)
        a_sum = Q(0)
        for i in range(1, b):
            fl = (i * (n + 1)) // b
            a_sum += Q(b - i, 2) * fl * (1 + fl)
        results.append(a_sum == a_target)
    if rs.family == "D":
        d_target = Q(n * (b * b - 1) * (2 * n - 1), 24)
        d_sum = Q(0)
        for i in range(1, b):
            fl = (i * (2 * n - 2)) // b
            low = sum((j + 1) // 2 for j in range(1, min(fl, n - 2) + 1))
            high = sum(-((-(j + 3)) // 2) for j in range(n - 2, fl))
            d_sum += (b - i) * (low + high)
        results.append(d_sum == d_target)
    return all(results)


def experiment_cn_fuss(n: int, m: int) -> Dict[str, object]:
    """Mean size over the height-``(2mn+1)`` core set of C_n vs the conjectured value."""
    if n < 2 or m < 1:
        raise ValueError("need n >= 2 and m >= 1")
    rs = build_root_system("C", n)
    h = rs.coxeter_number
    b = m * h + 1
    points = coroot_points_in_bA(rs, b).points
    total = sum(zise_point(rs, b, x) for x in points)
    mean = Q(total, len(points))
    conjecture = Q(m * n * (2 * (m + 1) * n * n + (m + 3) * n - (m + 1)), 12)
    return {
        "experiment": "fuss_mean",
        "family": "C",
        "rank": n,
        "m": m,
        "b": b,
        "count": len(points),
        "mean": mean,
        "conjecture": conjecture,
        "verdict": "agree" if mean == conjecture else "disagree",
    }


def experiment_weak_order_maximality(rs: RootSystem, b: int) -> Dict[str, object]:
    """Check inversion-set containment in the height-``b`` element.

    For every coroot point ``lam`` of the bounded region, the dominant
    representative ``w`` with ``w^{-1}(0) = lam`` is built by a chamber walk
    and its inversion set compared against the inversions of the element for
    dilation ``b``.  Containment for all points is the conjectured behavior;
    violations are reported, never raised.
    """
    h = rs.coxeter_number
    if gcd(b, h) != 1:
        raise ValueError("b not coprime to Coxeter number")
    wb = compute_w_b(rs, b)
    big = set(inversions_of_inverse(rs, wb.inverse()))
    base = vec_scale(Q(1, h), rs.rho_check)
    contained = 0
    violations: List[Tuple[Vector, int]] = []
    points = core_points_in_sommers(rs, b).points
    for lam in points:
        u = to_dominant(rs, vec_sub(base, lam))
        w = AffineElement(u.linear, tuple(-v for v in u.apply(lam)))
        assert w.apply(lam) == tuple(Q(0) for _ in range(rs.rank))
        inv_w = set(inversions_of_inverse(rs, w.inverse()))
        if inv_w <= big:
            contained += 1
        else:
            violations.append((lam, len(inv_w - big)))
    return {
        "experiment": "weak_order_maximality",
        "family": rs.family,
        "rank": rs.rank,
        "b": b,
        "total": len(points),
        "contained": contained,
        "violations": violations,
        "verdict": "agree" if not violations else "disagree",
    }


def _sc_residues(n: int, i: int) -> Tuple[int, ...]:
    m = 2 * n
    return tuple(sorted({i % m, (-i) % m}))


def _sc_corners(parts: Sequence[int]) -> Tuple[List[Tuple[int, int]], List[Tuple[int, int]]]:
    """Addable and removable corners of a partition as (row, content) pairs, 1-indexed rows."""
    addable = []
    removable = []
    rows = len(parts)
    for r in range(rows + 1):
        here = parts[r] if r < rows else 0
        above = parts[r - 1] if r > 0 else None
        if above is None or above > here:
            addable.append((r + 1, here + 1 - (r + 1)))
        if r < rows and (r + 1 >= rows or parts[r + 1] < parts[r]) and parts[r] > 0:
            removable.append((r + 1, parts[r] - (r + 1)))
    return addable, removable


def _sc_apply_letter(parts: Tuple[int, ...], n: int, i: int) -> Tuple[int, ...]:
    """Toggle all corners whose content lies in the residue pair {i, -i} mod 2n."""
    m = 2 * n
    classes = set(_sc_residues(n, i))
    addable, removable = _sc_corners(parts)
    add_hits = [(r, c) for r, c in addable if c % m in classes]
    rem_hits = [(r, c) for r, c in removable if c % m in classes]
    assert not (add_hits and rem_hits)
    out = list(parts)
    if add_hits:
        for r, _ in add_hits:
            if r - 1 < len(out):
                out[r - 1] += 1
            else:
                out.append(1)
    elif rem_hits:
        for r, _ in rem_hits:
            out[r - 1] -= 1
        while out and out[-1] == 0:
            out.pop()
    result = tuple(out)
    assert all(result[k] >= result[k + 1] for k in range(len(result) - 1))
    return result


def sc_core_from_word(n: int, word: Sequence[int]) -> Tuple[int, ...]:
    """Apply a word (rightmost letter first) to the empty self-conjugate core."""
    parts: Tuple[int, ...] = ()
    for i in reversed(tuple(word)):
        if not 0 <= i <= n:
            raise ValueError(f"letter {i} out of range")
        parts = _sc_apply_letter(parts, n, i)
    conj = _conjugate_parts(parts)
    assert conj == parts
    return parts


def _conjugate_parts(parts: Sequence[int]) -> Tuple[int, ...]:
    if not parts:
        return ()
    return tuple(
        sum(1 for p in parts if p >= c) for c in range(1, parts[0] + 1)
    )


def sc_weighted_size(parts: Sequence[int], n: int) -> int:
    """Box weights 2 / 1 / 0: strictly-above-diagonal boxes with content divisible
    by ``n`` count twice, other boxes on or above the diagonal once, the rest zero."""
    total = 0
    for r, p in enumerate(parts, start=1):
        for c in range(1, p + 1):
            if c < r:
                continue
            if c > r and (c - r) % n == 0:
                total += 2
            else:
                total += 1
    return total


def experiment_cn_selfconjugate_weighting(
    n: int, trials: int, seed: int = 0
) -> Dict[str, object]:
    """Compare element size against the weighted box count of the matching core.

    Random short words in the rank-``n`` C-type affine group are applied to
    the empty self-conjugate core; the weighted box sum is compared with the
    inversion-level size of the element.  Agreement statistics are reported.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    rs = build_root_system("C", n)
    rng = random.Random(seed)
    agree = 0
    mismatches: List[Dict[str, object]] = []
    for _ in range(trials):
        length = rng.randint(0, 10)
        word = tuple(rng.randint(0, n) for _ in range(length))
        elem = element_from_word(rs, word)
        elem_size = size_of_element(rs, elem)
        core = sc_core_from_word(n, word)
        weighted = sc_weighted_size(core, n)
        if weighted == elem_size:
            agree += 1
        else:
            mismatches.append(
                {"word": word, "element_size": elem_size, "weighted": weighted}
            )
    return {
        "experiment": "selfconjugate_weighting",
        "family": "C",
        "rank": n,
        "trials": trials,
        "agreements": agree,
        "mismatches": mismatches,
        "verdict": "agree" if not mismatches else "disagree",
    }
