"""Quiver representations over a finite field.

A representation assigns GF(q)-spaces to vertices and one matrix per
arrow; the matrix of an arrow i -> j has shape (dim_j, dim_i) and acts on
column vectors.  This module provides the exact linear algebra on
representations: intertwiner (Hom) spaces, Ext^1 dimensions through the
Euler form, direct sums, dualization, the Fitting-lemma machinery for
Krull-Schmidt decompositions, and sub/quotient representations cut out by
stable subspace tuples.

Indecomposability is certified, not guessed: a representation is
indecomposable iff its endomorphism ring is local, which is detected by a
splitter search over the endomorphism basis, pairwise sums, and (within
caps) a full scan of End(M).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .config import DEFAULT_CAPS, Caps
from .errors import SizeMismatch
from .gf import GF, Mat, min_poly, monic_irreducibles, poly_divmod
from .quiver import Quiver, dual_quiver, euler_form


@dataclass(frozen=True)
class Rep:
    quiver: Quiver
    ctx: GF
    dims: tuple
    mats: tuple  # one Mat per arrow, shape (dims[target], dims[source])

    def __post_init__(self):
        if len(self.dims) != self.quiver.n or len(self.mats) != len(self.quiver.arrows):
            raise SizeMismatch("representation data does not fit the quiver")
        for (s, t), m in zip(self.quiver.arrows, self.mats):
            if m.shape != (self.dims[t], self.dims[s]):
                raise SizeMismatch(
                    f"arrow {s}->{t} matrix has shape {m.shape}, expected "
                    f"({self.dims[t]}, {self.dims[s]})"
                )
            if m.ctx is not self.ctx:
                raise SizeMismatch("mixed field contexts in one representation")

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def tobytes(self) -> bytes:
        return b"|".join(m.tobytes() for m in self.mats) + bytes(self.dims)

    def __eq__(self, other):
        return (
            isinstance(other, Rep)
            and self.quiver == other.quiver
            and self.ctx is other.ctx
            and self.dims == other.dims
            and all(a == b for a, b in zip(self.mats, other.mats))
        )

    def __hash__(self):
        return hash((self.quiver, id(self.ctx), self.tobytes()))


def make_rep(quiver: Quiver, ctx: GF, dims: Sequence, mats: Sequence) -> Rep:
    dims = quiver.check_dim(dims)
    return Rep(quiver, ctx, dims, tuple(mats))


def zero_rep(quiver: Quiver, ctx: GF) -> Rep:
    dims = (0,) * quiver.n
    mats = tuple(Mat.zeros(ctx, 0, 0) for _ in quiver.arrows)
    return Rep(quiver, ctx, dims, mats)


def simple_rep(quiver: Quiver, ctx: GF, vertex: int) -> Rep:
    """One-dimensional representation at a vertex, zero maps everywhere.

    For a loop at the vertex this is the nilpotent simple.
    """
    dims = tuple(1 if i == vertex else 0 for i in range(quiver.n))
    mats = tuple(
        Mat.zeros(ctx, dims[t], dims[s]) for (s, t) in quiver.arrows
    )
    return Rep(quiver, ctx, dims, mats)


def rep_with_dims(quiver: Quiver, ctx: GF, dims: Sequence, entries) -> Rep:
    """Build a representation from nested lists per arrow."""
    dims = quiver.check_dim(dims)
    mats = []
    for (s, t), block in zip(quiver.arrows, entries):
        mats.append(Mat(ctx, np.asarray(block, dtype=np.uint8).reshape(dims[t], dims[s])))
    return Rep(quiver, ctx, dims, tuple(mats))


def direct_sum(m: Rep, n: Rep) -> Rep:
    if m.quiver != n.quiver or m.ctx is not n.ctx:
        raise SizeMismatch("direct sum requires matching quiver and field")
    dims = tuple(a + b for a, b in zip(m.dims, n.dims))
    mats = []
    for idx, (s, t) in enumerate(m.quiver.arrows):
        block = np.zeros((dims[t], dims[s]), dtype=np.uint8)
        block[: m.dims[t], : m.dims[s]] = m.mats[idx].a
        block[m.dims[t]:, m.dims[s]:] = n.mats[idx].a
        mats.append(Mat(m.ctx, block))
    return Rep(m.quiver, m.ctx, dims, tuple(mats))


def direct_sum_all(parts: Sequence[Rep], quiver: Quiver, ctx: GF) -> Rep:
    out = zero_rep(quiver, ctx)
    for p in parts:
        out = direct_sum(out, p)
    return out


def dualize_rep(m: Rep) -> Rep:
    """Transpose all matrices; lives over the dual quiver."""
    dq = dual_quiver(m.quiver)
    mats = tuple(mat.transpose() for mat in m.mats)
    return Rep(dq, m.ctx, m.dims, mats)


# ---------------------------------------------------------------------------
# intertwiner spaces


def _hom_system(m: Rep, n: Rep) -> Mat:
    """Coefficient matrix whose kernel is Hom(m, n).

    Unknowns are the blocks f_i : m_i -> n_i (shape n.dims[i] x m.dims[i]),
    flattened row-major and concatenated; one equation block per arrow
    says f_j m_alpha = n_alpha f_i.
    """
    ctx = m.ctx
    offs, total = [], 0
    for i in range(m.quiver.n):
        offs.append(total)
        total += n.dims[i] * m.dims[i]
    rows = sum(n.dims[t] * m.dims[s] for (s, t) in m.quiver.arrows)
    sys = np.zeros((rows, total), dtype=np.uint8)
    r0 = 0
    for idx, (s, t) in enumerate(m.quiver.arrows):
        nrows = n.dims[t] * m.dims[s]
        if nrows:
            # + I_{n_t} (x) m_alpha^T acting on vec(f_t)
            if n.dims[t] and m.dims[t]:
                blk = np.kron(np.eye(n.dims[t], dtype=np.uint8), m.mats[idx].a.T)
                sys[r0: r0 + nrows, offs[t]: offs[t] + n.dims[t] * m.dims[t]] = blk
            # - n_alpha (x) I_{m_s} acting on vec(f_s)
            if n.dims[s] and m.dims[s]:
                blk = np.kron(ctx.NEG[n.mats[idx].a], np.eye(m.dims[s], dtype=np.uint8))
                base = sys[r0: r0 + nrows, offs[s]: offs[s] + n.dims[s] * m.dims[s]]
                sys[r0: r0 + nrows, offs[s]: offs[s] + n.dims[s] * m.dims[s]] = ctx.ADD[base, blk]
        r0 += nrows
    return Mat(ctx, sys)


def hom_space(m: Rep, n: Rep) -> Tuple[int, list]:
    """Dimension and basis of Hom(m, n); basis entries are tuples of Mat."""
    if m.quiver != n.quiver or m.ctx is not n.ctx:
        raise SizeMismatch("hom requires matching quiver and field")
    kernel = _hom_system(m, n).kernel_basis()
    basis = []
    for row in kernel.a:
        blocks, pos = [], 0
        for i in range(m.quiver.n):
            size = n.dims[i] * m.dims[i]
            blocks.append(Mat(m.ctx, row[pos: pos + size].reshape(n.dims[i], m.dims[i])))
            pos += size
        basis.append(tuple(blocks))
    return kernel.rows, basis


def hom_dim(m: Rep, n: Rep) -> int:
    sys = _hom_system(m, n)
    return sys.cols - sys.rank()


def ext1_dim(m: Rep, n: Rep) -> int:
    """dim Ext^1 = hom(m, n) - <dim m, dim n>; nonnegative for path algebras."""
    val = hom_dim(m, n) - euler_form(m.quiver, m.dims, n.dims)
    assert val >= 0, "negative ext dimension signals an internal bug"
    return val


def end_basis(m: Rep) -> list:
    return hom_space(m, m)[1]


# ---------------------------------------------------------------------------
# nilpotency


def is_nilpotent_rep(m: Rep) -> bool:
    """True when iterating all arrows eventually kills every vector.

    Computed as the stabilization of the chain W <- span of arrow images
    of W, starting from the full spaces; nilpotent iff the chain reaches
    zero.  On acyclic quivers every representation is nilpotent.
    """
    bases = [Mat.identity(m.ctx, d) for d in m.dims]  # rows span W_i
    for _ in range(m.total_dim + 1):
        new_rows = [[] for _ in range(m.quiver.n)]
        for idx, (s, t) in enumerate(m.quiver.arrows):
            if bases[s].rows and m.dims[t]:
                img = (m.mats[idx] @ bases[s].transpose()).transpose()
                new_rows[t].append(img.a)
        new_bases = []
        for i in range(m.quiver.n):
            if not new_rows[i]:
                new_bases.append(Mat.zeros(m.ctx, 0, m.dims[i]))
                continue
            stacked = Mat(m.ctx, np.concatenate(new_rows[i], axis=0))
            red, rank, _ = stacked.rref()
            new_bases.append(Mat(m.ctx, red.a[:rank]))
        if all(b.rows == 0 for b in new_bases):
            return True
        if all(a.rows == b.rows for a, b in zip(bases, new_bases)):
            return False
        bases = new_bases
    return False


# ---------------------------------------------------------------------------
# sub- and quotient representations from stable subspace tuples


def is_stable(m: Rep, sub_bases: Sequence[Mat]) -> bool:
    """Do the row-span subspaces form a subrepresentation?"""
    for idx, (s, t) in enumerate(m.quiver.arrows):
        if sub_bases[s].rows == 0:
            continue
        image = (m.mats[idx] @ sub_bases[s].transpose()).transpose()
        if not sub_bases[t].row_space_contains(image):
            return False
    return True


def sub_quotient(m: Rep, sub_bases: Sequence[Mat]) -> Tuple[Rep, Rep]:
    """Subrepresentation on the given RREF bases and the quotient by it.

    The quotient uses the canonical complement spanned by the non-pivot
    coordinate vectors.
    """
    ctx = m.ctx
    piv, free = [], []
    for i, b in enumerate(sub_bases):
        red, rank, pivots = b.rref()
        assert rank == b.rows, "sub_quotient expects independent basis rows"
        piv.append(list(pivots))
        free.append([c for c in range(m.dims[i]) if c not in pivots])
    sub_dims = tuple(b.rows for b in sub_bases)
    quot_dims = tuple(len(f) for f in free)
    sub_mats, quot_mats = [], []
    for idx, (s, t) in enumerate(m.quiver.arrows):
        img = m.mats[idx] @ sub_bases[s].transpose()  # (d_t, sub_s)
        coords = img.a[piv[t], :] if sub_dims[t] else np.zeros((0, sub_dims[s]), dtype=np.uint8)
        sub_mats.append(Mat(ctx, coords.copy()))
        # quotient: push forward the free coordinate vectors and reduce mod the sub
        w = m.mats[idx].a[:, free[s]] if quot_dims[s] else np.zeros((m.dims[t], 0), dtype=np.uint8)
        if sub_dims[t]:
            coeff = w[piv[t], :]  # coordinates along the sub basis
            corr = (sub_bases[t].transpose() @ Mat(ctx, coeff)).a
            w = ctx.ADD[w, ctx.NEG[corr]] if ctx.k > 1 else (w.astype(np.int64) - corr) % ctx.p
        quot_mats.append(Mat(ctx, np.asarray(w, dtype=np.uint8)[free[t], :].copy()))
    sub = Rep(m.quiver, ctx, sub_dims, tuple(sub_mats))
    quot = Rep(m.quiver, ctx, quot_dims, tuple(quot_mats))
    return sub, quot


def restrict_to_invariant(m: Rep, bases: Sequence[Mat]) -> Rep:
    """Subrepresentation on arbitrary invariant row bases (not assumed RREF)."""
    ctx = m.ctx
    dims = tuple(b.rows for b in bases)
    mats = []
    for idx, (s, t) in enumerate(m.quiver.arrows):
        img = m.mats[idx] @ bases[s].transpose()  # columns live in span of bases[t]
        sol = bases[t].transpose().solve(img)
        assert sol is not None, "subspaces are not invariant"
        mats.append(sol)
    return Rep(m.quiver, ctx, dims, tuple(mats))


# ---------------------------------------------------------------------------
# Fitting splits and Krull-Schmidt


def _endo_power_blocks(m: Rep, f: Sequence[Mat]) -> list:
    e = m.total_dim
    return [fi.power(e) for fi in f]


def _split_rank(m: Rep, f: Sequence[Mat]) -> Tuple[int, list]:
    g = _endo_power_blocks(m, f)
    return sum(gi.rank() for gi in g), g


def _find_splitter(m: Rep, basis: list, caps: Caps, certify: bool):
    """An endomorphism whose Fitting power is neither zero nor invertible.

    Returns (splitter_blocks, certified_local).  When no splitter is found
    and `certify` is set, a full scan of End(m) proves locality (within
    the end-scan cap).
    """
    total = m.total_dim
    h = len(basis)
    candidates = list(basis)
    candidates.extend(
        tuple(a + b for a, b in zip(basis[i], basis[j]))
        for i in range(h)
        for j in range(i + 1, h)
    )
    for f in candidates:
        rank, g = _split_rank(m, f)
        if 0 < rank < total:
            return g, False
    if not certify:
        return None, False
    scan = m.ctx.q ** h
    caps.check("end_scan", scan)
    for combo in itertools.product(range(m.ctx.q), repeat=h):
        if not any(combo):
            continue
        f = None
        for c, b in zip(combo, basis):
            if c:
                part = tuple(bi.scale(c) for bi in b)
                f = part if f is None else tuple(x + y for x, y in zip(f, part))
        rank, g = _split_rank(m, f)
        if 0 < rank < total:
            return g, True
    return None, True


def _image_kernel_bases(g: Sequence[Mat]):
    kers, ims = [], []
    for gi in g:
        kb = gi.kernel_basis()
        kers.append(kb)
        red, rank, _ = gi.transpose().rref()
        ims.append(Mat(gi.ctx, red.a[:rank]))
    return kers, ims


def krull_schmidt(m: Rep, caps: Caps = DEFAULT_CAPS, scan_order: Optional[Sequence[int]] = None) -> List[Rep]:
    """Indecomposable direct summands, with multiplicity, via Fitting splits.

    `scan_order` permutes the endomorphism basis before the splitter
    search; the resulting multiset of summand classes is independent of
    it, which the test suite checks.
    """
    if m.total_dim == 0:
        return []
    basis = end_basis(m)
    if scan_order is not None:
        basis = [basis[i] for i in scan_order]
    g, _ = _find_splitter(m, basis, caps, certify=True)
    if g is None:
        return [m]
    kers, ims = _image_kernel_bases(g)
    part1 = restrict_to_invariant(m, kers)
    part2 = restrict_to_invariant(m, ims)
    return krull_schmidt(part1, caps) + krull_schmidt(part2, caps)


def is_indecomposable(m: Rep, caps: Caps = DEFAULT_CAPS) -> bool:
    if m.total_dim == 0:
        raise ValueError("the zero representation is not indecomposable")
    basis = end_basis(m)
    g, _ = _find_splitter(m, basis, caps, certify=True)
    return g is None


def iso_indecomposables(m: Rep, n: Rep) -> bool:
    """Isomorphism test for two certified-indecomposable representations.

    If m and n are isomorphic indecomposables, some basis element of
    Hom(m, n) must be invertible (the non-invertible homs form a proper
    subspace), so scanning the basis is a complete test.
    """
    if m.dims != n.dims:
        return False
    dim, basis = hom_space(m, n)
    if dim == 0:
        return m.total_dim == 0
    for f in basis:
        if all(fi.rank() == d for fi, d in zip(f, m.dims)):
            return True
    return False


def residue_degree(m: Rep, caps: Caps = DEFAULT_CAPS) -> int:
    """Degree over GF(q) of the residue field End(m)/rad for indecomposable m.

    End(m) being local, each endomorphism has a minimal polynomial that is
    a power of a single irreducible; the residue field is generated by the
    images of any spanning set, so the lcm of those irreducible degrees is
    the residue degree.
    """
    basis = end_basis(m)
    t = 1
    for f in basis:
        block = None
        for fi in f:
            block = fi if block is None else block.block_diag(fi)
        mp = min_poly(block)
        deg = _prime_power_degree(m.ctx, mp)
        t = t * deg // _gcd(t, deg)
    return t


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _prime_power_degree(ctx: GF, poly: list) -> int:
    """poly must be phi^k with phi irreducible; returns deg phi."""
    deg = len(poly) - 1
    for d in range(1, deg + 1):
        if deg % d:
            continue
        for cand in monic_irreducibles(ctx, d)[d]:
            q, r = poly_divmod(ctx, poly, cand)
            if not r:
                # check the full factorization is a power of cand
                rest = q
                while len(rest) > 1:
                    rest, rem = poly_divmod(ctx, rest, cand)
                    if rem:
                        raise AssertionError("minimal polynomial of a local endomorphism "
                                             "is not a prime power")
                return d
    raise AssertionError("irreducible factor search failed")


def aut_order_from_summands(h_end: int, summands: Sequence[Tuple[int, int]], q: int) -> int:
    """|Aut(M)| from dim End(M) and the (multiplicity, residue degree) data.

    End(M)/rad is a product of matrix algebras M_{m_a}(F_{q^{t_a}}), so
    |Aut(M)| = q^(dim rad) * prod |GL_{m_a}(F_{q^{t_a}})|.
    """
    reductive = sum(mult * mult * t for (mult, t) in summands)
    out = q ** (h_end - reductive)
    for mult, t in summands:
        qq = q ** t
        for i in range(mult):
            out *= qq ** mult - qq ** i
    return out


# ---------------------------------------------------------------------------
# defect bookkeeping


def pri_of_defect(value: int) -> str:
    if value < 0:
        return "preprojective"
    if value > 0:
        return "preinjective"
    return "regular"
