"""Quivers, dimension vectors and their bilinear forms.

A quiver is a finite directed multigraph; loops and parallel arrows are
allowed.  Vertex order and arrow order are fixed, serialized, and
significant: canonical forms downstream depend on them.

Conventions.  The (non-symmetric) form on dimension vectors is

    <d, e> = sum_i d_i e_i  -  sum_{arrows i->j} d_i e_j

and (d, e) = <d, e> + <e, d> is its symmetrization, so the Cartan matrix
has C_ii = 2 - 2*(loops at i) and C_ij = -(number of arrows between i and
j, both directions).  A connected quiver is finite / affine / wild
according to whether C is positive definite / positive semidefinite of
corank one / neither; in the affine case the radical of C is spanned by a
unique primitive positive vector `delta`, and the defect of d is
<delta, d>.  All the decisions here are made in exact rational
arithmetic.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

from .errors import SizeMismatch

DimVector = tuple

# ---------------------------------------------------------------------------
# quiver


@dataclass(frozen=True)
class Quiver:
    vertices: tuple
    arrows: tuple  # pairs (source index, target index)

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("vertex labels must be unique")
        for (s, t) in self.arrows:
            if not (0 <= s < self.n and 0 <= t < self.n):
                raise ValueError(f"arrow ({s},{t}) out of range")

    @property
    def n(self) -> int:
        return len(self.vertices)

    def loops_at(self, i: int) -> int:
        return sum(1 for (s, t) in self.arrows if s == i and t == i)

    def arrows_from(self, i: int):
        return [a for a, (s, _) in enumerate(self.arrows) if s == i]

    def arrows_into(self, i: int):
        return [a for a, (_, t) in enumerate(self.arrows) if t == i]

    def is_sink(self, i: int) -> bool:
        return not self.arrows_from(i)

    def is_acyclic(self) -> bool:
        return self.topological_order() is not None

    def topological_order(self) -> Optional[list]:
        indeg = [0] * self.n
        for (_, t) in self.arrows:
            indeg[t] += 1
        order, stack = [], sorted(i for i in range(self.n) if indeg[i] == 0)
        while stack:
            v = stack.pop(0)
            order.append(v)
            for (s, t) in self.arrows:
                if s == v:
                    indeg[t] -= 1
                    if indeg[t] == 0:
                        stack.append(t)
        return order if len(order) == self.n else None

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        return support_is_connected(self, (1,) * self.n)

    def check_dim(self, d: Sequence) -> tuple:
        d = tuple(int(x) for x in d)
        if len(d) != self.n:
            raise SizeMismatch(f"dimension vector {d} does not fit {self.n} vertices")
        if any(x < 0 for x in d):
            raise ValueError(f"negative entry in dimension vector {d}")
        return d

    # serialization: arrow list order is significant and preserved
    def to_json(self) -> str:
        return json.dumps(
            {"vertices": list(self.vertices), "arrows": [list(a) for a in self.arrows]}
        )

    @classmethod
    def from_json(cls, text: str) -> "Quiver":
        data = json.loads(text)
        return cls(tuple(data["vertices"]), tuple((int(s), int(t)) for s, t in data["arrows"]))


# ---------------------------------------------------------------------------
# bilinear forms


def euler_form(q: Quiver, d: Sequence, e: Sequence) -> int:
    """<d, e> = sum d_i e_i - sum over arrows i->j of d_i e_j."""
    d, e = q.check_dim(d), q.check_dim(e)
    total = sum(di * ei for di, ei in zip(d, e))
    total -= sum(d[s] * e[t] for (s, t) in q.arrows)
    return total


def symmetrized_form(q: Quiver, d: Sequence, e: Sequence) -> int:
    """(d, e) = <d, e> + <e, d>; orientation independent."""
    return euler_form(q, d, e) + euler_form(q, e, d)


def cartan_matrix(q: Quiver):
    """Symmetric integer matrix C with (d, e) = d^T C e; loops count twice."""
    n = q.n
    c = [[0] * n for _ in range(n)]
    for i in range(n):
        c[i][i] = 2 - 2 * q.loops_at(i)
    for (s, t) in q.arrows:
        if s != t:
            c[s][t] -= 1
            c[t][s] -= 1
    return c


# ---------------------------------------------------------------------------
# type classification


@dataclass(frozen=True)
class QuiverType:
    tag: str  # "finite" | "affine" | "wild"
    delta: Optional[tuple] = None


def _psd_rank(c) -> Optional[int]:
    """Rank of a symmetric rational matrix if it is PSD, else None.

    Symmetric elimination: a PSD matrix with a zero diagonal entry has a
    zero row, so at every step either some diagonal entry is positive (use
    it as pivot) or the remainder must vanish entirely.
    """
    n = len(c)
    m = [[Fraction(x) for x in row] for row in c]
    active = list(range(n))
    rank = 0
    while active:
        piv = next((i for i in active if m[i][i] > 0), None)
        if piv is None:
            if any(m[i][j] != 0 for i in active for j in active):
                return None
            return rank
        if m[piv][piv] < 0:
            return None
        rank += 1
        active.remove(piv)
        p = m[piv][piv]
        for i in active:
            f = m[i][piv] / p
            for j in active:
                m[i][j] -= f * m[piv][j]
    return rank


def _radical_vector(c) -> tuple:
    """Primitive integer kernel vector of a corank-one symmetric matrix."""
    n = len(c)
    m = [[Fraction(x) for x in row] + [Fraction(0)] for row in c]
    # fraction-free enough at these sizes: plain Gauss over Q
    pivots = []
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, n) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        pv = m[r][col]
        m[r] = [x / pv for x in m[r]]
        for i in range(n):
            if i != r and m[i][col] != 0:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
    free = [j for j in range(n) if j not in pivots]
    assert len(free) == 1, "corank-one expected"
    vec = [Fraction(0)] * n
    vec[free[0]] = Fraction(1)
    for row, col in zip(range(r), pivots):
        vec[col] = -m[row][free[0]]
    denom = 1
    for x in vec:
        denom = denom * x.denominator // gcd(denom, x.denominator)
    ints = [int(x * denom) for x in vec]
    g = 0
    for x in ints:
        g = gcd(g, x)
    ints = [x // g for x in ints]
    if next(x for x in ints if x != 0) < 0:
        ints = [-x for x in ints]
    return tuple(ints)


def classify_type(q: Quiver) -> QuiverType:
    """Finite / affine / wild trichotomy of a connected quiver.

    Affine means the symmetrized form is PSD with one-dimensional radical;
    `delta` is then returned normalized to positive entries with gcd 1.
    The Jordan quiver (one vertex, one loop) classifies affine, delta=(1).
    """
    if not q.is_connected():
        raise ValueError("classify_type requires a connected quiver")
    c = cartan_matrix(q)
    rank = _psd_rank(c)
    if rank is None:
        return QuiverType("wild")
    if rank == q.n:
        return QuiverType("finite")
    if rank != q.n - 1:
        return QuiverType("wild")
    delta = _radical_vector(c)
    assert all(x > 0 for x in delta), "affine delta must be positive on a connected quiver"
    return QuiverType("affine", delta)


def defect(q: Quiver, d: Sequence, qtype: Optional[QuiverType] = None) -> int:
    """<delta, d> for an affine quiver; sign sorts indecomposables."""
    qtype = qtype or classify_type(q)
    if qtype.tag != "affine":
        raise ValueError("defect is defined for affine quivers only")
    return euler_form(q, qtype.delta, d)


# ---------------------------------------------------------------------------
# support and dualization


def support(d: Sequence) -> frozenset:
    return frozenset(i for i, x in enumerate(d) if x > 0)


def support_is_connected(q: Quiver, d: Sequence) -> bool:
    """Connectivity of the full subquiver on the support of d."""
    supp = support(d)
    if not supp:
        return True
    seen = {min(supp)}
    frontier = [min(supp)]
    while frontier:
        v = frontier.pop()
        for (s, t) in q.arrows:
            for a, b in ((s, t), (t, s)):
                if a == v and b in supp and b not in seen:
                    seen.add(b)
                    frontier.append(b)
    return seen == supp


def subquiver_on(q: Quiver, verts: Sequence) -> Quiver:
    """Full subquiver on the given vertices (in their original order)."""
    verts = sorted(set(verts))
    pos = {v: i for i, v in enumerate(verts)}
    arrows = tuple((pos[s], pos[t]) for (s, t) in q.arrows if s in pos and t in pos)
    return Quiver(tuple(q.vertices[v] for v in verts), arrows)


def restrict_dim(d: Sequence, verts: Sequence) -> tuple:
    verts = sorted(set(verts))
    return tuple(d[v] for v in verts)


def dual_quiver(q: Quiver) -> Quiver:
    """Reverse every arrow; vertex order and arrow list order preserved."""
    return Quiver(q.vertices, tuple((t, s) for (s, t) in q.arrows))


# ---------------------------------------------------------------------------
# standard quivers


def single_vertex() -> Quiver:
    return Quiver(("1",), ())


def jordan() -> Quiver:
    return Quiver(("1",), ((0, 0),))


def kronecker(arrows: int = 2) -> Quiver:
    return Quiver(("1", "2"), tuple((0, 1) for _ in range(arrows)))


def cyclic_quiver(n: int) -> Quiver:
    """Cyclic quiver with one arrow i -> i+1 (mod n)."""
    return Quiver(tuple(str(i) for i in range(n)), tuple((i, (i + 1) % n) for i in range(n)))


def affine_a(n: int, flips: Sequence = ()) -> Quiver:
    """Cycle on n+1 vertices; arrows i->i+1 except the flipped positions."""
    m = n + 1
    arrows = []
    for i in range(m):
        j = (i + 1) % m
        arrows.append((j, i) if i in set(flips) else (i, j))
    return Quiver(tuple(str(i) for i in range(m)), tuple(arrows))


def affine_d(n: int) -> Quiver:
    """D_n^(1) shape (n+1 vertices, n >= 4): a chain with forks at both ends."""
    assert n >= 4
    # vertices: 0,1 fork into 2, chain 2..n-2, fork out to n-1, n
    arrows = [(0, 2), (1, 2)]
    arrows += [(i, i + 1) for i in range(2, n - 2)]
    arrows += [(n - 2, n - 1), (n - 2, n)]
    return Quiver(tuple(str(i) for i in range(n + 1)), tuple(arrows))


def affine_e(n: int) -> Quiver:
    """E_n^(1) shape for n in {6, 7, 8}, some orientation."""
    assert n in (6, 7, 8)
    arms = {6: (2, 2, 2), 7: (3, 3, 1), 8: (5, 2, 1)}[n]
    arrows = []
    verts = ["c"]
    for arm, length in enumerate(arms):
        prev = 0
        for step in range(length):
            verts.append(f"{arm}.{step}")
            arrows.append((prev, len(verts) - 1))
            prev = len(verts) - 1
    return Quiver(tuple(verts), tuple(arrows))


def affine_a2_acyclic() -> Quiver:
    """Triangle with two arrows one way and one the other (acyclic)."""
    return Quiver(("1", "2", "3"), ((0, 1), (1, 2), (0, 2)))


def d4_star_out() -> Quiver:
    """D_4^(1): central vertex mapping onto four outer vertices."""
    return Quiver(("c", "a", "b", "u", "v"), ((0, 1), (0, 2), (0, 3), (0, 4)))


def a4_square() -> Quiver:
    """A_4-type square: two paths of length two meeting at a sink."""
    return Quiver(("tl", "tr", "bl", "br"), ((0, 1), (0, 2), (1, 3), (2, 3)))
