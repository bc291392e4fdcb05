"""Exact root system data for the finite crystallographic families.

All vectors live in the basis of simple coroots, so coroot lattice points are
exactly the integer tuples.  The Cartan matrix convention is
``A[i][j] = <coroot_i, root_j>``; lengths are normalized so the highest root
has squared length 2.  Everything is computed over the rationals and validated
at construction time against independent identities (root counts, determinant,
exponent sums, the strange formula), so a successfully built ``RootSystem``
carries internally consistent tables.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction as Q
from math import factorial
from typing import Dict, Iterable, List, Sequence, Tuple

Vector = Tuple[Q, ...]
#: Coordinates in the simple-coroot basis; integer entries mean a coroot
#: lattice point, fractional entries a general (co)weight.
CorootVector = Vector

_RANK_RANGE = {
    "A": (1, None),
    "B": (2, None),
    "C": (2, None),
    "D": (3, None),
    "E": (6, 8),
    "F": (4, 4),
    "G": (2, 2),
}


@dataclass(frozen=True)
class RootSystemType:
    """A family letter together with a rank, e.g. ``RootSystemType("D", 4)``."""

    family: str
    rank: int

    def __post_init__(self) -> None:
        if self.family not in _RANK_RANGE:
            raise ValueError(f"unknown family {self.family!r}")
        lo, hi = _RANK_RANGE[self.family]
        if self.rank < lo or (hi is not None and self.rank > hi):
            raise ValueError(f"rank {self.rank} out of range for family {self.family}")

    def __str__(self) -> str:
        return f"{self.family}{self.rank}"


@dataclass(frozen=True)
class Root:
    """A positive root, stored as its simple-root coefficients."""

    coeffs: Tuple[int, ...]
    height: int

    def __post_init__(self) -> None:
        assert all(c >= 0 for c in self.coeffs) and sum(self.coeffs) == self.height


def _cartan_matrix(family: str, n: int) -> List[List[int]]:
    a = [[2 if i == j else 0 for j in range(n)] for i in range(n)]

    def edge(i: int, j: int, aij: int = -1, aji: int = -1) -> None:
        a[i][j] = aij
        a[j][i] = aji

    if family in "ABCF":
        for i in range(n - 1):
            edge(i, i + 1)
    if family == "B":
        edge(n - 2, n - 1, -1, -2)
    elif family == "C":
        edge(n - 2, n - 1, -2, -1)
    elif family == "F":
        edge(1, 2, -1, -2)
    elif family == "D":
        for i in range(n - 2):
            edge(i, i + 1)
        edge(n - 3, n - 1)
    elif family == "E":
        for i, j in [(0, 2), (2, 3), (3, 4), (4, 5), (1, 3)]:
            edge(i, j)
        for i in range(5, n - 1):
            edge(i, i + 1)
    elif family == "G":
        edge(0, 1, -3, -1)
    return a


def _exponents(family: str, n: int) -> Tuple[int, ...]:
    if family == "A":
        return tuple(range(1, n + 1))
    if family in "BC":
        return tuple(range(1, 2 * n, 2))
    if family == "D":
        return tuple(sorted(list(range(1, 2 * n - 2, 2)) + [n - 1]))
    table = {
        ("E", 6): (1, 4, 5, 7, 8, 11),
        ("E", 7): (1, 5, 7, 9, 11, 13, 17),
        ("E", 8): (1, 7, 11, 13, 17, 19, 23, 29),
        ("F", 4): (1, 5, 7, 11),
        ("G", 2): (1, 5),
    }
    return table[(family, n)]


def _weyl_order(family: str, n: int) -> int:
    if family == "A":
        return factorial(n + 1)
    if family in "BC":
        return 2**n * factorial(n)
    if family == "D":
        return 2 ** (n - 1) * factorial(n)
    return {("E", 6): 51840, ("E", 7): 2903040, ("E", 8): 696729600,
            ("F", 4): 1152, ("G", 2): 12}[(family, n)]


def _expected_dual_coxeter(family: str, n: int) -> int:
    if family == "A":
        return n + 1
    if family == "B":
        return 2 * n - 1
    if family == "C":
        return n + 1
    if family == "D":
        return 2 * n - 2
    return {("E", 6): 12, ("E", 7): 18, ("E", 8): 30, ("F", 4): 9, ("G", 2): 4}[(family, n)]


def _expected_index(family: str, n: int) -> int:
    if family == "A":
        return n + 1
    if family in "BC":
        return 2
    if family == "D":
        return 4
    if family == "E":
        return 9 - n
    return 1


def det_int(m: Sequence[Sequence[int]]) -> int:
    """Determinant of an integer matrix by fraction-free Gaussian elimination."""
    n = len(m)
    a = [list(row) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[i][j] * a[k][k] - a[i][k] * a[k][j]
                assert num % prev == 0
                a[i][j] = num // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def invert_matrix(m: Sequence[Sequence[Q]]) -> Tuple[Vector, ...]:
    """Exact inverse of a square matrix over the rationals (Gauss-Jordan)."""
    n = len(m)
    a = [[Q(x) for x in row] + [Q(int(i == j)) for j in range(n)]
         for i, row in enumerate(m)]
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return tuple(tuple(row[n:]) for row in a)


def mat_vec(m: Sequence[Sequence[Q]], v: Sequence[Q]) -> Vector:
    return tuple(sum(r * x for r, x in zip(row, v)) for row in m)


def vec_add(x: Sequence[Q], y: Sequence[Q]) -> Vector:
    return tuple(a + b for a, b in zip(x, y))


def vec_sub(x: Sequence[Q], y: Sequence[Q]) -> Vector:
    return tuple(a - b for a, b in zip(x, y))


def vec_scale(c: Q, x: Sequence[Q]) -> Vector:
    return tuple(c * a for a in x)


def _close_roots(cartan: Sequence[Sequence[int]]) -> List[Root]:
    """Generate all positive roots from the simples by root strings.

    Builds height by height: ``a + alpha_i`` is a root exactly when the
    downward string length through ``a`` in direction ``i`` exceeds the
    pairing ``<a, coroot_i>``.
    """
    n = len(cartan)
    known = {tuple(int(i == j) for j in range(n)) for i in range(n)}
    layer = sorted(known)
    height = 1
    roots: List[Root] = [Root(c, 1) for c in layer]
    while layer:
        nxt = set()
        for a in layer:
            for i in range(n):
                pairing = sum(cartan[i][j] * a[j] for j in range(n))
                down = 0
                probe = list(a)
                while True:
                    probe[i] -= 1
                    if probe[i] < 0 or tuple(probe) not in known:
                        break
                    down += 1
                if down - pairing > 0:
                    up = list(a)
                    up[i] += 1
                    nxt.add(tuple(up))
        height += 1
        layer = sorted(nxt)
        known.update(nxt)
        roots.extend(Root(c, height) for c in layer)
    return roots


class RootSystem:
    """Immutable bundle of exact data for one irreducible root system.

    Attributes of note (all tuples, all exact):

    - ``cartan``: integer Cartan matrix, ``cartan[i][j] = <coroot_i, root_j>``
    - ``gram``: Gram matrix of the simple coroots
    - ``positive_roots`` / ``roots_by_height`` / ``highest_root``
    - ``marks`` / ``comarks``: highest-root coefficients on roots / coroots
    - ``coxeter_number`` (h), ``dual_coxeter_number`` (g), ``exponents``,
      ``weyl_order``, ``index_f`` (connection index, = det of ``cartan``)
    - ``fund_coweights``: coroot-basis coordinates of the fundamental coweights
    - ``rho`` / ``rho_check``: half-sums of positive roots / coroots
    """

    def __init__(self, rstype: RootSystemType) -> None:
        self.rstype = rstype
        self.family = rstype.family
        n = self.rank = rstype.rank
        self.cartan = tuple(tuple(row) for row in _cartan_matrix(self.family, n))

        roots = _close_roots(self.cartan)
        self.positive_roots = tuple(roots)
        by_height: Dict[int, List[Root]] = {}
        for r in roots:
            by_height.setdefault(r.height, []).append(r)
        self.roots_by_height = {h: tuple(v) for h, v in by_height.items()}

        top_height = max(self.roots_by_height)
        top = self.roots_by_height[top_height]
        assert len(top) == 1, "highest root must be unique"
        self.highest_root = top[0]
        self.marks = self.highest_root.coeffs
        self.coxeter_number = top_height + 1
        h = self.coxeter_number
        assert 2 * len(roots) == n * h

        # Simple root squared lengths / 2, from the symmetry l_i A_ij = l_j A_ji,
        # normalized so the highest root has squared length 2.
        lengths: List[Q] = [Q(0)] * n
        lengths[0] = Q(1)
        todo = [0]
        seen = {0}
        while todo:
            i = todo.pop()
            for j in range(n):
                if j not in seen and self.cartan[i][j] != 0:
                    lengths[j] = lengths[i] * self.cartan[i][j] / self.cartan[j][i]
                    seen.add(j)
                    todo.append(j)
        assert len(seen) == n, "Dynkin diagram must be connected"
        c = self.marks
        top_norm = sum(
            c[i] * c[j] * lengths[i] * self.cartan[i][j]
            for i in range(n) for j in range(n)
        )
        scale = 2 / top_norm
        self.simple_lengths = tuple(l * scale for l in lengths)

        gram = tuple(
            tuple(Q(self.cartan[i][j]) / self.simple_lengths[j] for j in range(n))
            for i in range(n)
        )
        for i in range(n):
            for j in range(n):
                assert gram[i][j] == gram[j][i]
        self.gram = gram

        comarks = tuple(c[i] * self.simple_lengths[i] for i in range(n))
        assert all(d.denominator == 1 for d in comarks)
        self.comarks = tuple(int(d) for d in comarks)
        self.dual_coxeter_number = 1 + sum(self.comarks)
        assert self.dual_coxeter_number == _expected_dual_coxeter(self.family, n)

        self.exponents = _exponents(self.family, n)
        assert len(self.exponents) == n
        assert sum(self.exponents) == len(roots)
        assert all(self.exponents[i] + self.exponents[n - 1 - i] == h for i in range(n))
        self.weyl_order = _weyl_order(self.family, n)
        prod = 1
        for e in self.exponents:
            prod *= e + 1
        assert prod == self.weyl_order

        self.index_f = det_int(self.cartan)
        assert self.index_f == _expected_index(self.family, n)

        cartan_t = tuple(tuple(self.cartan[j][i] for j in range(n)) for i in range(n))
        self.inv_cartan_t = invert_matrix([[Q(x) for x in row] for row in cartan_t])
        self.fund_coweights = tuple(
            tuple(self.inv_cartan_t[r][i] for r in range(n)) for i in range(n)
        )
        self.rho_check = tuple(sum(w[r] for w in self.fund_coweights) for r in range(n))

        half = Q(1, 2)
        rho = [Q(0)] * n
        for r in roots:
            for i in range(n):
                rho[i] += half * r.coeffs[i] * self.simple_lengths[i]
        self.rho = tuple(rho)

        ones = mat_vec(self.gram, self.rho)
        assert all(x == 1 for x in ones), "rho must pair to 1 with every simple coroot"
        for r in roots:
            assert pairing(self, self.rho_check, r.coeffs) == r.height
        g = self.dual_coxeter_number
        assert inner(self, self.rho, self.rho) * 24 == 2 * g * n * (h + 1), (
            "strange formula failed"
        )

    def __repr__(self) -> str:
        return f"RootSystem({self.rstype})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, RootSystem) and self.rstype == other.rstype

    def __hash__(self) -> int:
        return hash(self.rstype)


def build_root_system(family: str | RootSystemType, rank: int | None = None) -> RootSystem:
    """Construct and validate the root system, e.g. ``build_root_system("E", 6)``."""
    if isinstance(family, RootSystemType):
        rstype = family
    else:
        if rank is None:
            raise ValueError("rank required")
        rstype = RootSystemType(family, rank)
    return RootSystem(rstype)


def inner(rs: RootSystem, x: Sequence[Q], y: Sequence[Q]) -> Q:
    """Invariant inner product of two vectors in coroot coordinates."""
    total = Q(0)
    for i, xi in enumerate(x):
        if xi:
            row = rs.gram[i]
            total += xi * sum(row[j] * yj for j, yj in enumerate(y) if yj)
    return total


def pairing(rs: RootSystem, x: Sequence[Q], root_coeffs: Sequence[int]) -> Q:
    """Evaluate ``<x, alpha>`` for ``alpha`` given by simple-root coefficients."""
    total = Q(0)
    for i in range(rs.rank):
        v = sum(rs.cartan[i][j] * root_coeffs[j] for j in range(rs.rank))
        if v:
            total += x[i] * v
    return total


def roots_of_height(rs: RootSystem, height: int) -> Tuple[Root, ...]:
    """All positive roots of the given height (empty tuple if none)."""
    return rs.roots_by_height.get(height, ())


def coweight_to_coroot_coords(rs: RootSystem, coweight: Sequence[int]) -> CorootVector:
    """Coroot-basis coordinates of an integer combination of fundamental coweights."""
    assert len(coweight) == rs.rank
    coords = [Q(0)] * rs.rank
    for i, yi in enumerate(coweight):
        if yi:
            w = rs.fund_coweights[i]
            for r in range(rs.rank):
                coords[r] += yi * w[r]
    return tuple(coords)


def root_vector(rs: RootSystem, coeffs: Sequence[int]) -> Vector:
    """Coroot-basis coordinates of the root with the given coefficients."""
    return tuple(coeffs[i] * rs.simple_lengths[i] for i in range(rs.rank))


def vector_to_root_coeffs(rs: RootSystem, vec: Sequence[Q]) -> Tuple[int, ...]:
    """Inverse of :func:`root_vector`; asserts the result is integral."""
    out = []
    for i in range(rs.rank):
        c = vec[i] / rs.simple_lengths[i]
        assert c.denominator == 1
        out.append(int(c))
    return tuple(out)
