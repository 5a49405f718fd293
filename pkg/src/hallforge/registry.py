"""Registries of isomorphism classes of quiver representations.

A registry holds, per (quiver, field, dimension vector), the ordered list
of isomorphism classes together with automorphism orders, indecomposable
flags, Krull-Schmidt summand data and structural flags.  Two enumeration
modes feed it:

* orbit mode: when the ambient tuple space q^(#matrix entries) fits under
  the cap, the base-change orbits are walked exactly (vectorized BFS over
  group generators).  The canonical representative is the
  lexicographically least matrix tuple of the orbit, the automorphism
  order is group order / orbit size, and identification of an arbitrary
  representation is a single table lookup.

* constructive mode: above the cap, classes are generated without
  touching the ambient space: on acyclic quivers as iterated extensions
  by a simple at a support sink, on the one-loop quiver by conjugacy-type
  data (irreducible polynomial, partition).  Identification goes through
  certified Krull-Schmidt decompositions or complete rank fingerprints,
  and automorphism orders come from the endomorphism-ring structure.

Every slice, in either mode, must pass the exact mass identity
sum over classes of |G| / |Aut| = #points of the ambient space, which
certifies completeness and all automorphism orders at once.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .config import DEFAULT_CAPS, Caps
from .errors import CapExceeded
from .gf import (GF, Mat, char_poly, gl_order, monic_irreducibles,
                 poly_divmod, poly_mul, subspaces_of_dim)
from .quiver import Quiver, classify_type, euler_form
from .reps import (Rep, aut_order_from_summands, direct_sum_all, hom_dim,
                   is_nilpotent_rep, iso_indecomposables, krull_schmidt,
                   pri_of_defect, residue_degree, sub_quotient, zero_rep)

ClassKey = Tuple[tuple, int]  # (grade, index within grade)


@dataclass
class IsoClass:
    grade: tuple
    index: int
    canon: Rep
    aut_order: int
    indec: bool
    summands: tuple  # sorted tuple of (ClassKey, multiplicity)
    nilpotent: bool
    res_degree: Optional[int] = None  # residue field degree, indecomposables only
    pri_class: Optional[str] = None   # affine acyclic quivers only
    tube_id: Optional[int] = None
    tube_level: Optional[int] = None

    @property
    def key(self) -> ClassKey:
        return (self.grade, self.index)


# ---------------------------------------------------------------------------
# encoding of representations as base-q integers (orbit mode)


def _entry_count(quiver: Quiver, dims: Sequence) -> int:
    return sum(dims[s] * dims[t] for (s, t) in quiver.arrows)


def encode_rep(rep: Rep) -> int:
    code = 0
    q = rep.ctx.q
    for m in rep.mats:
        for x in m.a.reshape(-1):
            code = code * q + int(x)
    return code


def decode_rep(quiver: Quiver, ctx: GF, dims: tuple, code: int) -> Rep:
    e = _entry_count(quiver, dims)
    digits = [0] * e
    for t in range(e - 1, -1, -1):
        digits[t] = code % ctx.q
        code //= ctx.q
    mats, pos = [], 0
    for (s, t) in quiver.arrows:
        size = dims[t] * dims[s]
        block = np.array(digits[pos: pos + size], dtype=np.uint8).reshape(dims[t], dims[s])
        mats.append(Mat(ctx, block))
        pos += size
    return Rep(quiver, ctx, dims, tuple(mats))


def _decode_batch(codes: np.ndarray, e: int, q: int) -> np.ndarray:
    out = np.empty((codes.size, e), dtype=np.uint8)
    c = codes.astype(np.int64).copy()
    for t in range(e - 1, -1, -1):
        out[:, t] = c % q
        c //= q
    return out


def _encode_batch(digits: np.ndarray, q: int) -> np.ndarray:
    c = np.zeros(digits.shape[0], dtype=np.int64)
    for t in range(digits.shape[1]):
        c = c * q + digits[:, t]
    return c


def _gl_generators(ctx: GF, n: int) -> List[Mat]:
    """Small generating set of GL_n(q) (as a semigroup it still generates)."""
    if n == 0:
        return []
    gens = []
    if ctx.q > 2:
        d = np.eye(n, dtype=np.uint8)
        d[0, 0] = ctx.generator
        gens.append(Mat(ctx, d))
    if n >= 2:
        cyc = np.zeros((n, n), dtype=np.uint8)
        for i in range(n):
            cyc[i, (i + 1) % n] = 1
        gens.append(Mat(ctx, cyc))
        tv = np.eye(n, dtype=np.uint8)
        tv[0, 1] = 1
        gens.append(Mat(ctx, tv))
    return gens


def _batch_left(ctx: GF, g: np.ndarray, x: np.ndarray) -> np.ndarray:
    """g @ x for a stack x of shape (N, r, c)."""
    if ctx.k == 1:
        return np.einsum("ij,njk->nik", g.astype(np.int64), x.astype(np.int64)) % ctx.p
    out = np.zeros_like(x)
    for i in range(g.shape[0]):
        acc = np.zeros((x.shape[0], x.shape[2]), dtype=np.uint8)
        for t in range(g.shape[1]):
            acc = ctx.ADD[acc, ctx.MUL[g[i, t], x[:, t, :]]]
        out[:, i, :] = acc
    return out


def _batch_right(ctx: GF, x: np.ndarray, g: np.ndarray) -> np.ndarray:
    """x @ g for a stack x of shape (N, r, c)."""
    if ctx.k == 1:
        return np.einsum("njk,kl->njl", x.astype(np.int64), g.astype(np.int64)) % ctx.p
    out = np.zeros_like(x)
    for j in range(g.shape[1]):
        acc = np.zeros((x.shape[0], x.shape[1]), dtype=np.uint8)
        for t in range(g.shape[0]):
            acc = ctx.ADD[acc, ctx.MUL[g[t, j], x[:, :, t]]]
        out[:, :, j] = acc
    return out


# ---------------------------------------------------------------------------
# grade slices


class GradeSlice:
    def __init__(self, grade: tuple, mode: str):
        self.grade = grade
        self.mode = mode
        self.classes: List[IsoClass] = []
        self.by_summands: Dict[tuple, int] = {}
        self.code_to_class: Optional[np.ndarray] = None  # orbit mode
        self.fingerprint_to_class: Dict[tuple, int] = {}  # one-loop constructive mode
        self.indec_buckets: Dict[tuple, list] = {}
        self.bytes_cache: Dict[bytes, int] = {}
        self.census_cache: Dict[int, dict] = {}

    def __len__(self):
        return len(self.classes)


class IsoRegistry:
    """All iso-class data for one quiver over one finite field.

    `nilpotent_only` restricts to nilpotent representations (used for
    cyclic quivers, whose nilpotent classes form a sub-Hopf-theory).
    Slices are built on demand and frozen afterwards; queries on built
    slices do not mutate shared state except caches keyed by class.
    """

    def __init__(self, quiver: Quiver, ctx: GF, caps: Caps = DEFAULT_CAPS,
                 nilpotent_only: bool = False):
        self.quiver = quiver
        self.ctx = ctx
        self.caps = caps
        self.nilpotent_only = nilpotent_only
        self.slices: Dict[tuple, GradeSlice] = {}
        try:
            self.qtype = classify_type(quiver) if quiver.is_connected() else None
        except ValueError:
            self.qtype = None
        self._is_one_loop = quiver.n == 1 and quiver.arrows == ((0, 0),)
        self._is_cyclic = (
            quiver.n >= 2
            and sorted(quiver.arrows) == sorted(((i, (i + 1) % quiver.n) for i in range(quiver.n)))
        )
        if nilpotent_only and not (self._is_cyclic or self._is_one_loop):
            raise ValueError("nilpotent-only registries are for cyclic/one-loop quivers")

    # -- public API

    def slice(self, grade: Sequence) -> GradeSlice:
        grade = self.quiver.check_dim(grade)
        if grade not in self.slices:
            self.slices[grade] = self._build(grade)
        return self.slices[grade]

    def classes(self, grade: Sequence) -> List[IsoClass]:
        return self.slice(grade).classes

    def cls(self, key: ClassKey) -> IsoClass:
        return self.slice(key[0]).classes[key[1]]

    def grades_below(self, top: Sequence) -> List[tuple]:
        top = self.quiver.check_dim(top)
        ranges = [range(x + 1) for x in top]
        return [tuple(g) for g in itertools.product(*ranges)]

    def identify(self, rep: Rep) -> ClassKey:
        """Class of an arbitrary representation of a built (or buildable) grade."""
        grade = rep.dims
        sl = self.slice(grade)
        if sl.mode == "zero":
            return (grade, 0)
        if sl.mode == "orbit":
            return (grade, int(sl.code_to_class[encode_rep(rep)]))
        buf = rep.tobytes()
        hit = sl.bytes_cache.get(buf)
        if hit is not None:
            return (grade, hit)
        if self._is_one_loop:
            idx = self._one_loop_identify(sl, rep)
        else:
            idx = self._ks_identify(sl, rep, register_new=False)
        sl.bytes_cache[buf] = idx
        return (grade, idx)

    def group_order(self, grade: tuple) -> int:
        out = 1
        for d in grade:
            out *= gl_order(d, self.ctx.q)
        return out

    def ambient_count(self, grade: tuple) -> int:
        if not self.nilpotent_only:
            return self.ctx.q ** _entry_count(self.quiver, grade)
        return self._count_nilpotent_ambient(grade)

    # -- construction dispatch; every built slice must pass the mass identity

    def _build(self, grade: tuple) -> GradeSlice:
        if all(x == 0 for x in grade):
            sl = GradeSlice(grade, "zero")
            z = zero_rep(self.quiver, self.ctx)
            sl.classes.append(IsoClass(grade, 0, z, 1, False, (), True))
            sl.by_summands[()] = 0
            return sl
        e = _entry_count(self.quiver, grade)
        ambient = self.ctx.q ** e
        if ambient <= self.caps.max_tuple_count:
            sl = self._build_orbit(grade)
        elif self._is_one_loop:
            sl = self._build_one_loop(grade)
        elif self.quiver.is_acyclic():
            sl = self._build_extension_chain(grade)
        else:
            raise CapExceeded("tuple_count", ambient, self.caps.max_tuple_count)
        self._annotate(sl)
        self._mass_check(sl)
        return sl

    def _mass_check(self, sl: GradeSlice) -> None:
        total = Fraction(0)
        g = self.group_order(sl.grade)
        for c in sl.classes:
            total += Fraction(g, c.aut_order)
        expected = self.ambient_count(sl.grade)
        assert total == expected, (
            f"mass identity failed at grade {sl.grade}: {total} != {expected}"
        )

    def _annotate(self, sl: GradeSlice) -> None:
        affine_acyclic = (
            self.qtype is not None
            and self.qtype.tag == "affine"
            and self.quiver.is_acyclic()
        )
        if not affine_acyclic:
            return
        for c in sl.classes:
            if c.indec:
                defects = {euler_form(self.quiver, self.qtype.delta, c.grade)}
            else:
                defects = {
                    euler_form(self.quiver, self.qtype.delta, key[0])
                    for key, _ in c.summands
                }
            kinds = {pri_of_defect(d) for d in defects}
            c.pri_class = kinds.pop() if len(kinds) == 1 else "mixed"

    # -- orbit mode

    def _build_orbit(self, grade: tuple) -> GradeSlice:
        quiver, ctx = self.quiver, self.ctx
        e = _entry_count(quiver, grade)
        q = ctx.q
        ambient = q ** e
        self.caps.check_memory(ambient * 10)
        sl = GradeSlice(grade, "orbit")

        # slices of the digit vector per arrow
        spans = []
        pos = 0
        for (s, t) in quiver.arrows:
            size = grade[t] * grade[s]
            spans.append((pos, pos + size, grade[t], grade[s]))
            pos += size

        gens = []  # (vertex, g, g_inv)
        for v in range(quiver.n):
            for g in _gl_generators(ctx, grade[v]):
                gens.append((v, g.a, g.inverse().a))

        if self.nilpotent_only:
            allowed = self._nilpotent_mask(grade, e, ambient)
        else:
            allowed = None

        class_of = np.full(ambient, -1, dtype=np.int64)
        if allowed is not None:
            class_of[~allowed] = -2  # excluded from this registry
        group = self.group_order(grade)
        seeds = []
        next_code = 0
        while True:
            while next_code < ambient and class_of[next_code] != -1:
                next_code += 1
            if next_code == ambient:
                break
            cid = len(seeds)
            class_of[next_code] = cid
            frontier = np.array([next_code], dtype=np.int64)
            size = 1
            while frontier.size and gens:
                digs = _decode_batch(frontier, e, q)
                images = []
                for (v, g, ginv) in gens:
                    nd = digs.copy()
                    for span, (s, t) in zip(spans, quiver.arrows):
                        lo, hi, r, c = span
                        if hi == lo:
                            continue
                        block = nd[:, lo:hi].reshape(-1, r, c)
                        if t == v:
                            block = _batch_left(ctx, g, block)
                        if s == v:
                            block = _batch_right(ctx, block, ginv)
                        nd[:, lo:hi] = block.reshape(-1, hi - lo)
                    images.append(_encode_batch(nd, q))
                allim = np.unique(np.concatenate(images))
                new = allim[class_of[allim] == -1]
                class_of[new] = cid
                size += new.size
                frontier = new
            seeds.append((next_code, size))

        for idx, (seed, size) in enumerate(seeds):
            canon = decode_rep(quiver, ctx, grade, seed)
            assert group % size == 0
            sl.classes.append(
                IsoClass(grade, idx, canon, group // size, False, (), False)
            )
        sl.code_to_class = class_of
        self._fill_structure(sl)
        return sl

    def _nilpotent_mask(self, grade: tuple, e: int, ambient: int) -> np.ndarray:
        """Boolean mask of nilpotent points (cyclic and one-loop quivers)."""
        quiver, ctx = self.quiver, self.ctx
        q = ctx.q
        codes = np.arange(ambient, dtype=np.int64)
        digs = _decode_batch(codes, e, q)
        # composite map around the cycle, starting at vertex 0
        n = quiver.n
        arr_of = {}
        pos = 0
        for (s, t) in quiver.arrows:
            size = grade[t] * grade[s]
            arr_of[s] = (pos, pos + size, grade[t], grade[s])
            pos += size
        comp = None
        for v in range(n):
            lo, hi, r, c = arr_of[v]
            block = digs[:, lo:hi].reshape(ambient, r, c)
            comp = block if comp is None else _batch_matmul(ctx, block, comp)
        total = sum(grade)
        power = comp
        steps = 1
        while steps < total:
            power = _batch_matmul(ctx, power, power)
            steps *= 2
        return ~power.reshape(power.shape[0], -1).any(axis=1)

    def _fill_structure(self, sl: GradeSlice) -> None:
        """Krull-Schmidt data, flags and summand keys for every class."""
        for c in sl.classes:
            parts = krull_schmidt(c.canon, self.caps)
            if len(parts) == 1:
                c.indec = True
                c.res_degree = residue_degree(c.canon, self.caps)
                c.summands = (((c.grade, c.index), 1),)
            else:
                counts: Dict[ClassKey, int] = {}
                for p in parts:
                    key = self.identify(p)
                    counts[key] = counts.get(key, 0) + 1
                c.summands = tuple(sorted(counts.items()))
            c.nilpotent = is_nilpotent_rep(c.canon)
            sl.by_summands[c.summands] = c.index

    # -- constructive mode: acyclic quivers, extensions by a sink simple

    def _support_sink(self, grade: tuple) -> int:
        supp = [i for i, x in enumerate(grade) if x > 0]
        sinks = [
            v for v in supp
            if not any(s == v and t in supp and t != v for (s, t) in self.quiver.arrows)
        ]
        assert sinks, "acyclic support must contain a sink"
        return sinks[-1]

    def _build_extension_chain(self, grade: tuple) -> GradeSlice:
        quiver, ctx = self.quiver, self.ctx
        v = self._support_sink(grade)
        lower = tuple(x - (1 if i == v else 0) for i, x in enumerate(grade))
        base = self.slice(lower)
        sl = GradeSlice(grade, "constructive")
        into_v = [idx for idx, (s, t) in enumerate(quiver.arrows) if t == v]
        cocycle_shape = [(idx, lower[quiver.arrows[idx][0]]) for idx in into_v]
        cocycle_dim = sum(w for _, w in cocycle_shape)
        for a_cls in base.classes:
            a = a_cls.canon
            # two cocycles differing by a coboundary phi |-> (phi a_alpha)
            # have isomorphic middle terms, so enumerate a transversal of
            # the coboundary row space: entries at its pivots stay zero
            if cocycle_dim and lower[v]:
                stacked = np.concatenate(
                    [a.mats[idx].a for idx, _ in cocycle_shape], axis=1
                )
                _, _, piv = Mat(ctx, stacked).rref()
            else:
                piv = ()
            free_pos = [t for t in range(cocycle_dim) if t not in piv]
            for free_vals in itertools.product(range(ctx.q), repeat=len(free_pos)):
                combo = [0] * cocycle_dim
                for t, val in zip(free_pos, free_vals):
                    combo[t] = val
                mats = list(a.mats)
                pos = 0
                for idx, width in cocycle_shape:
                    row = np.array(combo[pos: pos + width], dtype=np.uint8).reshape(1, width)
                    mats[idx] = Mat(ctx, np.concatenate([row, a.mats[idx].a], axis=0))
                    pos += width
                for idx, (s, t) in enumerate(quiver.arrows):
                    if s == v:  # sink of the support: targets have dimension zero
                        mats[idx] = Mat.zeros(ctx, grade[t], grade[s])
                cand = Rep(quiver, ctx, grade, tuple(mats))
                self._ks_identify(sl, cand, register_new=True)
        self._order_constructive(sl)
        return sl

    @staticmethod
    def _indec_signature(rep: Rep, h_end: int) -> tuple:
        return (h_end, tuple(m.rank() for m in rep.mats))

    def _ks_identify(self, sl: GradeSlice, rep: Rep, register_new: bool) -> int:
        buf = rep.tobytes()
        hit = sl.bytes_cache.get(buf)
        if hit is not None:
            return hit
        parts = krull_schmidt(rep, self.caps)
        counts: Dict[ClassKey, int] = {}
        top_indec: List[Rep] = []
        for p in parts:
            if p.dims == sl.grade:
                top_indec.append(p)
                continue
            key = self.identify(p)
            counts[key] = counts.get(key, 0) + 1
        for p in top_indec:
            sig = self._indec_signature(p, hom_dim(p, p))
            idx = None
            for j in sl.indec_buckets.get(sig, ()):
                if iso_indecomposables(p, sl.classes[j].canon):
                    idx = j
                    break
            if idx is None:
                if not register_new:
                    raise AssertionError(
                        f"unregistered indecomposable of grade {sl.grade}"
                    )
                idx = self._register_constructive(sl, p, indec=True)
                sl.indec_buckets.setdefault(sig, []).append(idx)
            counts[(sl.grade, idx)] = counts.get((sl.grade, idx), 0) + 1
        key = tuple(sorted(counts.items()))
        found = sl.by_summands.get(key)
        if found is None:
            if not register_new:
                raise AssertionError(f"unregistered class of grade {sl.grade}")
            found = self._register_constructive(sl, None, indec=False, summands=key)
        sl.bytes_cache[buf] = found
        return found

    def _register_constructive(self, sl: GradeSlice, rep: Optional[Rep],
                               indec: bool, summands: Optional[tuple] = None) -> int:
        idx = len(sl.classes)
        if indec:
            canon = rep
            summands = (((sl.grade, idx), 1),)
            t = residue_degree(canon, self.caps)
            h_end = hom_dim(canon, canon)
            aut = aut_order_from_summands(h_end, [(1, t)], self.ctx.q)
            cls = IsoClass(sl.grade, idx, canon, aut, True, summands,
                           is_nilpotent_rep(canon), res_degree=t)
        else:
            parts, data = [], []
            for (g, i), mult in summands:
                piece = sl.classes[i] if g == sl.grade else self.cls((g, i))
                parts.extend([piece.canon] * mult)
                data.append((mult, piece.res_degree))
            canon = direct_sum_all(parts, self.quiver, self.ctx)
            h_end = hom_dim(canon, canon)
            aut = aut_order_from_summands(h_end, data, self.ctx.q)
            cls = IsoClass(sl.grade, idx, canon, aut, False, summands,
                           is_nilpotent_rep(canon))
        sl.classes.append(cls)
        sl.by_summands[summands] = idx
        return idx

    def _order_constructive(self, sl: GradeSlice) -> None:
        """Stable deterministic order: indecomposables first by byte string."""
        order = sorted(range(len(sl.classes)),
                       key=lambda i: (not sl.classes[i].indec, sl.classes[i].canon.tobytes()))
        remap = {old: new for new, old in enumerate(order)}
        new_classes = []
        for new, old in enumerate(order):
            c = sl.classes[old]
            c.index = new
            c.summands = tuple(sorted(
                (((g, remap[i] if g == sl.grade else i), m) for (g, i), m in c.summands)
            ))
            new_classes.append(c)
        sl.classes = new_classes
        sl.by_summands = {c.summands: c.index for c in new_classes}
        sl.bytes_cache = {}
        sl.indec_buckets = {}
        for c in new_classes:
            if c.indec:
                sig = self._indec_signature(c.canon, hom_dim(c.canon, c.canon))
                sl.indec_buckets.setdefault(sig, []).append(c.index)

    # -- constructive mode: one-loop quiver, conjugacy-type data

    def _one_loop_types(self, n: int) -> List[tuple]:
        """All multisets of (irreducible poly, partition) with total weight n."""
        ctx = self.ctx
        irr = monic_irreducibles(ctx, n)
        polys = []
        for d in range(1, n + 1):
            for f in irr[d]:
                if self.nilpotent_only and (d > 1 or f[0] != 0):
                    continue
                polys.append((d, tuple(f)))
        out = []

        def rec(i: int, budget: int, acc: list):
            if budget == 0:
                out.append(tuple(sorted(acc)))
                return
            if i == len(polys):
                return
            d, f = polys[i]
            rec(i + 1, budget, acc)
            for lam in _partitions_up_to(budget // d):
                if lam and sum(lam) * d <= budget:
                    acc.append((f, lam))
                    rec(i + 1, budget - sum(lam) * d, acc)
                    acc.pop()

        rec(0, n, [])
        return sorted(out)

    def _companion(self, poly: tuple) -> Mat:
        ctx = self.ctx
        m = len(poly) - 1
        a = np.zeros((m, m), dtype=np.uint8)
        for i in range(m - 1):
            a[i + 1, i] = 1
        for i in range(m):
            a[i, m - 1] = ctx.neg(poly[i])
        return Mat(ctx, a)

    def _one_loop_rep(self, typ: tuple) -> Rep:
        ctx = self.ctx
        blocks = None
        for f, lam in typ:
            for part in lam:
                comp = self._companion(tuple(_poly_pow_full(ctx, f, part)))
                blocks = comp if blocks is None else blocks.block_diag(comp)
        return Rep(self.quiver, ctx, (blocks.rows,), (blocks,))

    def _build_one_loop(self, grade: tuple) -> GradeSlice:
        n = grade[0]
        sl = GradeSlice(grade, "constructive")
        for idx, typ in enumerate(self._one_loop_types(n)):
            canon = self._one_loop_rep(typ)
            aut = 1
            for f, lam in typ:
                aut *= a_lambda(self.ctx.q ** (len(f) - 1), lam)
            indec = len(typ) == 1 and len(typ[0][1]) == 1
            nilp = all(len(f) == 2 and f[0] == 0 for f, _ in typ)
            cls = IsoClass(grade, idx, canon, aut, indec, (), nilp)
            if indec:
                cls.res_degree = len(typ[0][0]) - 1
            sl.classes.append(cls)
            sl.fingerprint_to_class[typ] = idx
        # summand keys: indecomposable pieces are (poly, single part) types
        types = self._one_loop_types(n)
        for idx, typ in enumerate(types):
            counts: Dict[ClassKey, int] = {}
            for f, lam in typ:
                d = len(f) - 1
                for part in lam:
                    g = (d * part,)
                    sub_sl = self.slice(g) if g != grade else sl
                    j = (sub_sl.fingerprint_to_class.get(((f, (part,)),))
                         if sub_sl.mode == "constructive"
                         else self._orbit_index_of_type(sub_sl, ((f, (part,)),)))
                    key = (g, j)
                    counts[key] = counts.get(key, 0) + 1
            sl.classes[idx].summands = tuple(sorted(counts.items()))
            sl.by_summands[sl.classes[idx].summands] = idx
        return sl

    def _orbit_index_of_type(self, sl: GradeSlice, typ: tuple) -> int:
        rep = self._one_loop_rep(typ)
        return int(sl.code_to_class[encode_rep(rep)])

    def _one_loop_identify(self, sl: GradeSlice, rep: Rep) -> int:
        typ = one_loop_fingerprint(rep)
        idx = sl.fingerprint_to_class.get(typ)
        assert idx is not None, f"unregistered conjugacy type {typ}"
        return idx

    # -- nilpotent ambient count (mass identity in nilpotent-only mode)

    def _count_nilpotent_ambient(self, grade: tuple) -> int:
        e = _entry_count(self.quiver, grade)
        ambient = self.ctx.q ** e
        self.caps.check("tuple_count", ambient)
        if e == 0:
            return 1
        mask = self._nilpotent_mask(grade, e, ambient)
        return int(mask.sum())

    # -- submodule census

    def census(self, key: ClassKey) -> Dict[tuple, int]:
        """Counts of stable subspace tuples by (quotient class, sub class).

        census[((gq, iq), (gs, is_))] = number of subrepresentations of the
        canonical representative isomorphic to class (gs, is_) with
        quotient of class (gq, iq).
        """
        grade, idx = key
        sl = self.slice(grade)
        hit = sl.census_cache.get(idx)
        if hit is not None:
            return hit
        rep = sl.classes[idx].canon
        ctx = self.ctx
        n = self.quiver.n
        total_tuples = 1
        sub_lists = []
        for i in range(n):
            opts = []
            for m in range(grade[i] + 1):
                for b in subspaces_of_dim(grade[i], m, ctx, self.caps):
                    red, rank, piv = b.rref()
                    opts.append((b, piv))
            sub_lists.append(opts)
            total_tuples *= len(opts)
        self.caps.check("subspace_enum", total_tuples)

        arrows_by_max = [[] for _ in range(n)]
        for a_idx, (s, t) in enumerate(self.quiver.arrows):
            arrows_by_max[max(s, t)].append((a_idx, s, t))

        out: Dict[tuple, int] = {}
        chosen: List[tuple] = [None] * n

        def assign(v: int):
            if v == n:
                bases = [c[0] for c in chosen]
                sub, quot = sub_quotient(rep, bases)
                k = (self.identify(quot), self.identify(sub))
                out[k] = out.get(k, 0) + 1
                return
            for opt in sub_lists[v]:
                chosen[v] = opt
                ok = True
                for (a_idx, s, t) in arrows_by_max[v]:
                    bs, _ = chosen[s]
                    bt, piv_t = chosen[t]
                    if bs.rows == 0:
                        continue
                    img = (rep.mats[a_idx] @ bs.transpose()).transpose()
                    if bt.rows == 0:
                        if img.a.any():
                            ok = False
                            break
                        continue
                    coords = img.a[:, list(piv_t)]
                    recon = (Mat(ctx, coords) @ bt).a
                    if not np.array_equal(recon, img.a):
                        ok = False
                        break
                if ok:
                    assign(v + 1)
            chosen[v] = None

        assign(0)
        sl.census_cache[idx] = out
        return out

    # -- export

    def export_jsonl(self, grades: Sequence[tuple]) -> str:
        lines = []
        for g in sorted(self.quiver.check_dim(x) for x in grades):
            for c in self.slice(g).classes:
                mats = [
                    [[list(self.ctx.coeff_vector(int(x))) for x in row] for row in m.tolist()]
                    for m in c.canon.mats
                ]
                lines.append(json.dumps({
                    "dim": list(c.grade),
                    "canon": mats,
                    "aut_order": c.aut_order,
                    "indec": c.indec,
                    "pri_class": c.pri_class,
                    "tube_id": c.tube_id,
                }, sort_keys=True))
        return "\n".join(lines) + "\n"


def _batch_matmul(ctx: GF, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if ctx.k == 1:
        return np.einsum("nij,njk->nik", a.astype(np.int64), b.astype(np.int64)) % ctx.p
    out = np.zeros((a.shape[0], a.shape[1], b.shape[2]), dtype=np.uint8)
    for i in range(a.shape[1]):
        for j in range(b.shape[2]):
            acc = np.zeros(a.shape[0], dtype=np.uint8)
            for t in range(a.shape[2]):
                acc = ctx.ADD[acc, ctx.MUL[a[:, i, t], b[:, t, j]]]
            out[:, i, j] = acc
    return out


# ---------------------------------------------------------------------------
# partitions and automorphism counts


def _partitions_up_to(n: int) -> List[tuple]:
    """All nonempty partitions of 1..n, each as a weakly decreasing tuple."""
    out = []
    for total in range(1, n + 1):
        out.extend(partitions_of(total))
    return out


def partitions_of(n: int) -> List[tuple]:
    if n == 0:
        return [()]
    out = []

    def rec(remaining: int, max_part: int, acc: list):
        if remaining == 0:
            out.append(tuple(acc))
            return
        for part in range(min(remaining, max_part), 0, -1):
            acc.append(part)
            rec(remaining - part, part, acc)
            acc.pop()

    rec(n, n, [])
    return out


def n_weight(lam: Sequence) -> int:
    """n(lambda) = sum (i-1) * lambda_i."""
    return sum(i * part for i, part in enumerate(lam))


def a_lambda(q: int, lam: Sequence) -> int:
    """Automorphism count of the nilpotent one-loop module of type lambda."""
    lam = tuple(sorted(lam, reverse=True))
    mult: Dict[int, int] = {}
    for part in lam:
        mult[part] = mult.get(part, 0) + 1
    val = Fraction(q) ** (sum(lam) + 2 * n_weight(lam))
    for m in mult.values():
        for j in range(1, m + 1):
            val *= 1 - Fraction(1, q ** j)
    assert val.denominator == 1
    return int(val)


def _poly_pow_full(ctx: GF, f: Sequence, e: int) -> list:
    out = [1]
    for _ in range(e):
        out = poly_mul(ctx, out, list(f))
    return out


def one_loop_fingerprint(rep: Rep) -> tuple:
    """Complete invariant of a one-loop representation.

    Factors the characteristic polynomial and reads off the partition at
    each irreducible factor from the rank chain of its matrix powers.
    """
    ctx = rep.ctx
    a = rep.mats[0]
    n = a.rows
    cp = char_poly(a)
    irr = monic_irreducibles(ctx, n)
    typ = []
    rest = cp
    for d in range(1, n + 1):
        for f in irr[d]:
            expo = 0
            while len(rest) > 1:
                quot, rem = poly_divmod(ctx, rest, f)
                if rem:
                    break
                rest = quot
                expo += 1
            if expo == 0:
                continue
            # partition from rank chain of phi(A)^j
            b = _eval_poly_at_matrix(ctx, f, a)
            ranks = [n]
            power = Mat.identity(ctx, n)
            while True:
                power = power @ b
                r = power.rank()
                ranks.append(r)
                if r == ranks[-2]:
                    break
            blocks = []
            for j in range(1, len(ranks)):
                diff = ranks[j - 1] - ranks[j]
                assert diff % d == 0
                blocks.append(diff // d)
            lam: List[int] = []
            for j in range(len(blocks)):
                nxt = blocks[j + 1] if j + 1 < len(blocks) else 0
                lam.extend([j + 1] * (blocks[j] - nxt))
            lam_t = tuple(sorted(lam, reverse=True))
            assert sum(lam_t) == expo
            typ.append((tuple(f), lam_t))
    return tuple(sorted(typ))


def _eval_poly_at_matrix(ctx: GF, poly: Sequence, a: Mat) -> Mat:
    acc = Mat.zeros(ctx, a.rows, a.cols)
    for c in reversed(list(poly)):
        acc = acc @ a
        if c:
            acc = acc + Mat.identity(ctx, a.rows).scale(int(c))
    return acc
