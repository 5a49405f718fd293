"""Exact arithmetic and linear algebra over GF(p^k) for small prime powers.

Field elements are integer codes 0..q-1: the code of an element with
coefficient vector (c_0, ..., c_{k-1}) (c_0 = constant term) is
sum c_i p^i.  Codes 0..p-1 are the prime field.  Increasing code order is
the canonical total order used everywhere downstream (registry canonical
forms, subspace enumeration, orbit minima).

The modulus for each (p, k) is fixed by MODULUS_TABLE below so that runs
are reproducible across machines; every entry is a monic irreducible
polynomial over GF(p), checked by the test suite.

Matrices are thin immutable wrappers over numpy uint8 code arrays.  Prime
fields use native modular arithmetic; extension fields go through q x q
add/mul lookup tables.  Everything is exact; there is no floating point
anywhere in this package.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, List, Optional, Sequence

import numpy as np

from .config import DEFAULT_CAPS, Caps
from .errors import SingularMatrix, SizeMismatch

# monic irreducible moduli: (p, k) -> coefficients of x^0..x^{k-1}; leading 1 implicit
MODULUS_TABLE = {
    (2, 2): (1, 1),            # x^2 + x + 1
    (2, 3): (1, 1, 0),         # x^3 + x + 1
    (2, 4): (1, 1, 0, 0),      # x^4 + x + 1
    (2, 5): (1, 0, 1, 0, 0),   # x^5 + x^2 + 1
    (2, 6): (1, 1, 0, 1, 1, 0),  # x^6 + x^4 + x^3 + x + 1
    (3, 2): (2, 2),            # x^2 + 2x + 2
    (3, 3): (1, 2, 0),         # x^3 + 2x + 1
    (5, 2): (2, 4),            # x^2 + 4x + 2
    (7, 2): (3, 6),            # x^2 + 6x + 3
}

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n == p:
            return True
        if n % p == 0:
            return False
    return n < 61 * 61  # fields are capped way below this


@dataclass(frozen=True)
class FieldSpec:
    p: int
    k: int = 1

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.k < 1:
            raise ValueError("extension degree must be >= 1")

    @property
    def q(self) -> int:
        return self.p ** self.k

    @property
    def modulus(self) -> tuple:
        if self.k == 1:
            return ()
        try:
            return MODULUS_TABLE[(self.p, self.k)]
        except KeyError:
            raise ValueError(f"no fixed modulus for GF({self.p}^{self.k})") from None


def spec_for_q(q: int) -> FieldSpec:
    """FieldSpec for a prime power q, factoring out the prime."""
    for p in _SMALL_PRIMES:
        if q % p == 0:
            k = 0
            m = q
            while m % p == 0:
                m //= p
                k += 1
            if m != 1:
                break
            return FieldSpec(p, k)
    raise ValueError(f"{q} is not a small prime power")


# ---------------------------------------------------------------------------
# field context


class GF:
    """Arithmetic context for GF(p^k): lookup tables and matrix kernels."""

    _cache: dict = {}

    def __init__(self, spec: FieldSpec, caps: Caps = DEFAULT_CAPS):
        caps.check("field_size", spec.q)
        self.spec = spec
        self.p, self.k, self.q = spec.p, spec.k, spec.q
        self._build_tables()

    @classmethod
    def of(cls, p: int, k: int = 1) -> "GF":
        key = (p, k)
        if key not in cls._cache:
            cls._cache[key] = cls(FieldSpec(p, k))
        return cls._cache[key]

    @classmethod
    def of_q(cls, q: int) -> "GF":
        s = spec_for_q(q)
        return cls.of(s.p, s.k)

    # -- scalar arithmetic on codes

    def _vec(self, code: int) -> list:
        out = []
        for _ in range(self.k):
            out.append(code % self.p)
            code //= self.p
        return out

    def _code(self, vec: Sequence) -> int:
        c = 0
        for x in reversed(vec):
            c = c * self.p + (x % self.p)
        return c

    def coeff_vector(self, code: int) -> tuple:
        """Coefficient vector (c_0, ..., c_{k-1}) of an element code."""
        return tuple(self._vec(code))

    def _poly_mul_mod(self, a: Sequence, b: Sequence) -> list:
        p, k = self.p, self.k
        prod = [0] * (2 * k - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    prod[i + j] = (prod[i + j] + ai * bj) % p
        mod = self.spec.modulus
        for deg in range(2 * k - 2, k - 1, -1):
            c = prod[deg]
            if c:
                prod[deg] = 0
                for j, mj in enumerate(mod):
                    prod[deg - k + j] = (prod[deg - k + j] - c * mj) % p
        return prod[:k]

    def _build_tables(self):
        q, p, k = self.q, self.p, self.k
        if k == 1:
            add = (np.arange(q)[:, None] + np.arange(q)[None, :]) % p
            mul = (np.arange(q)[:, None] * np.arange(q)[None, :]) % p
        else:
            add = np.zeros((q, q), dtype=np.uint8)
            mul = np.zeros((q, q), dtype=np.uint8)
            vecs = [self._vec(c) for c in range(q)]
            for a in range(q):
                for b in range(q):
                    add[a, b] = self._code([(x + y) % p for x, y in zip(vecs[a], vecs[b])])
                    mul[a, b] = self._code(self._poly_mul_mod(vecs[a], vecs[b]))
        self.ADD = add.astype(np.uint8)
        self.MUL = mul.astype(np.uint8)
        self.NEG = np.array([self.ADD[a].tolist().index(0) for a in range(q)], dtype=np.uint8)
        inv = np.zeros(q, dtype=np.uint8)
        for a in range(1, q):
            inv[a] = self.MUL[a].tolist().index(1)
        self.INV = inv
        # a multiplicative generator (smallest code that works)
        self.generator = next(
            g for g in range(2, q) if self._mult_order(g) == q - 1
        ) if q > 2 else 1

    def _mult_order(self, a: int) -> int:
        x, n = a, 1
        while x != 1:
            x = int(self.MUL[x, a])
            n += 1
        return n

    def add(self, a: int, b: int) -> int:
        return int(self.ADD[a, b])

    def sub(self, a: int, b: int) -> int:
        return int(self.ADD[a, self.NEG[b]])

    def neg(self, a: int) -> int:
        return int(self.NEG[a])

    def mul(self, a: int, b: int) -> int:
        return int(self.MUL[a, b])

    def inv(self, a: int) -> int:
        if a == 0:
            raise SingularMatrix("inversion of zero")
        return int(self.INV[a])

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        r, x = 1, a
        while e:
            if e & 1:
                r = self.mul(r, x)
            x = self.mul(x, x)
            e >>= 1
        return r

    def elements(self) -> list:
        """All element codes in the canonical order."""
        return list(range(self.q))

    # -- embedding into an extension of the same characteristic

    def embed_into(self, big: "GF") -> np.ndarray:
        """Code map GF(p^k) -> GF(p^(k*m)) sending x to x^((Q-1)/(q-1))-compatible image.

        Computed as the unique field embedding fixing the prime field and
        sending our generator to an element of matching multiplicative
        order whose minimal polynomial matches.
        """
        assert big.p == self.p and big.k % self.k == 0
        if big.k == self.k:
            return np.arange(self.q, dtype=np.uint8)
        minpoly = self.minimal_polynomial_of(self.generator)
        root = next(
            x for x in range(1, big.q) if _poly_eval(big, minpoly, x) == 0
        )
        table = np.zeros(self.q, dtype=np.uint8)
        # generator powers cover nonzero elements
        x_small, x_big = 1, 1
        table[1] = 1
        for _ in range(self.q - 2):
            x_small = self.mul(x_small, self.generator)
            x_big = big.mul(x_big, root)
            table[x_small] = x_big
        return table

    def minimal_polynomial_of(self, a: int) -> list:
        """Coefficients (constant first, monic) of the minimal polynomial over GF(p)."""
        # multiply out (x - conj) over the Frobenius orbit of a
        conj, seen = a, []
        while conj not in seen:
            seen.append(conj)
            conj = self.pow(conj, self.p)
        poly = [1]
        for c in seen:
            new = [0] * (len(poly) + 1)
            for i, pi in enumerate(poly):
                new[i + 1] = self.add(new[i + 1], pi)
                new[i] = self.sub(new[i], self.mul(c, pi))
            poly = new
        return poly


def _poly_eval(ctx: GF, coeffs: Sequence, x: int) -> int:
    acc = 0
    for c in reversed(list(coeffs)):
        acc = ctx.add(ctx.mul(acc, x), int(c))
    return acc


# ---------------------------------------------------------------------------
# matrices


class Mat:
    """Immutable matrix of field-element codes over a GF context."""

    __slots__ = ("ctx", "a")

    def __init__(self, ctx: GF, array):
        self.ctx = ctx
        arr = np.asarray(array, dtype=np.uint8)
        if arr.ndim != 2:
            raise SizeMismatch(f"matrix must be 2d, got shape {arr.shape}")
        arr.setflags(write=False)
        self.a = arr

    # -- constructors

    @classmethod
    def zeros(cls, ctx: GF, rows: int, cols: int) -> "Mat":
        return cls(ctx, np.zeros((rows, cols), dtype=np.uint8))

    @classmethod
    def identity(cls, ctx: GF, n: int) -> "Mat":
        return cls(ctx, np.eye(n, dtype=np.uint8))

    @property
    def shape(self) -> tuple:
        return self.a.shape

    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    def tolist(self) -> list:
        return self.a.tolist()

    def tobytes(self) -> bytes:
        return self.a.shape[0].to_bytes(2, "big") + self.a.shape[1].to_bytes(2, "big") + self.a.tobytes()

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Mat)
            and self.ctx is other.ctx
            and self.shape == other.shape
            and bool(np.array_equal(self.a, other.a))
        )

    def __hash__(self):
        return hash((id(self.ctx), self.tobytes()))

    def __repr__(self):
        return f"Mat(GF{self.ctx.q}, {self.tolist()})"

    # -- arithmetic

    def __add__(self, other: "Mat") -> "Mat":
        if self.ctx.k == 1:
            return Mat(self.ctx, (self.a.astype(np.int64) + other.a) % self.ctx.p)
        return Mat(self.ctx, self.ctx.ADD[self.a, other.a])

    def __sub__(self, other: "Mat") -> "Mat":
        if self.ctx.k == 1:
            return Mat(self.ctx, (self.a.astype(np.int64) - other.a) % self.ctx.p)
        return Mat(self.ctx, self.ctx.ADD[self.a, self.ctx.NEG[other.a]])

    def __neg__(self) -> "Mat":
        if self.ctx.k == 1:
            return Mat(self.ctx, (-self.a.astype(np.int64)) % self.ctx.p)
        return Mat(self.ctx, self.ctx.NEG[self.a])

    def scale(self, c: int) -> "Mat":
        if self.ctx.k == 1:
            return Mat(self.ctx, (self.a.astype(np.int64) * c) % self.ctx.p)
        return Mat(self.ctx, self.ctx.MUL[c, self.a])

    def __matmul__(self, other: "Mat") -> "Mat":
        if self.cols != other.rows:
            raise SizeMismatch(f"matmul {self.shape} @ {other.shape}")
        ctx = self.ctx
        if self.cols == 0 or self.rows == 0 or other.cols == 0:
            return Mat.zeros(ctx, self.rows, other.cols)
        if ctx.k == 1:
            return Mat(ctx, (self.a.astype(np.int64) @ other.a.astype(np.int64)) % ctx.p)
        acc = np.zeros((self.rows, other.cols), dtype=np.uint8)
        for t in range(self.cols):
            term = ctx.MUL[self.a[:, t][:, None], other.a[t, :][None, :]]
            acc = ctx.ADD[acc, term]
        return Mat(ctx, acc)

    def is_zero(self) -> bool:
        return not self.a.any()

    # -- elimination

    def rref(self, with_transform: bool = False):
        """Reduced row echelon form.

        Returns (R, rank, pivots) or, with `with_transform`, additionally
        the invertible T with T @ self == R.
        """
        ctx = self.ctx
        work = self.a.astype(np.int64).copy() if ctx.k == 1 else self.a.copy()
        rows, cols = work.shape
        trans = np.eye(rows, dtype=work.dtype) if with_transform else None
        pivots = []
        r = 0
        for c in range(cols):
            if r == rows:
                break
            nz = np.nonzero(work[r:, c])[0]
            if nz.size == 0:
                continue
            piv = r + int(nz[0])
            if piv != r:
                work[[r, piv]] = work[[piv, r]]
                if trans is not None:
                    trans[[r, piv]] = trans[[piv, r]]
            pv = int(work[r, c])
            if pv != 1:
                factor = ctx.inv(pv)
                work[r] = self._row_scale(work[r], factor)
                if trans is not None:
                    trans[r] = self._row_scale(trans[r], factor)
            mask = np.nonzero(work[:, c])[0]
            for i in mask:
                if i == r:
                    continue
                f = int(work[i, c])
                work[i] = self._row_axpy(work[i], work[r], f)
                if trans is not None:
                    trans[i] = self._row_axpy(trans[i], trans[r], f)
            pivots.append(c)
            r += 1
        res = Mat(ctx, work.astype(np.uint8))
        if with_transform:
            return res, r, tuple(pivots), Mat(ctx, trans.astype(np.uint8))
        return res, r, tuple(pivots)

    def _row_scale(self, row, factor: int):
        ctx = self.ctx
        if ctx.k == 1:
            return (row * factor) % ctx.p
        return ctx.MUL[factor, row]

    def _row_axpy(self, row, pivot_row, f: int):
        """row - f * pivot_row."""
        ctx = self.ctx
        if ctx.k == 1:
            return (row - f * pivot_row) % ctx.p
        return ctx.ADD[row, ctx.NEG[ctx.MUL[f, pivot_row]]]

    def rank(self) -> int:
        return self.rref()[1]

    def kernel_basis(self) -> "Mat":
        """Basis of the right kernel, rows in canonical (RREF-style) form."""
        ctx = self.ctx
        red, rank, pivots = self.rref()
        free = [c for c in range(self.cols) if c not in pivots]
        basis = np.zeros((len(free), self.cols), dtype=np.uint8)
        for i, fc in enumerate(free):
            basis[i, fc] = 1
            for r, pc in enumerate(pivots):
                basis[i, pc] = ctx.neg(int(red.a[r, fc]))
        return Mat(ctx, basis)

    def solve(self, rhs: "Mat") -> Optional["Mat"]:
        """X with self @ X = rhs, or None when inconsistent."""
        aug = Mat(self.ctx, np.concatenate([self.a, rhs.a], axis=1))
        red, rank, pivots = aug.rref()
        n = self.cols
        if any(p >= n for p in pivots):
            return None
        x = np.zeros((n, rhs.cols), dtype=np.uint8)
        for r, pc in enumerate(pivots):
            x[pc] = red.a[r, n:]
        return Mat(self.ctx, x)

    def inverse(self) -> "Mat":
        if self.rows != self.cols:
            raise SizeMismatch("inverse of non-square matrix")
        red, rank, pivots, trans = self.rref(with_transform=True)
        if rank != self.rows:
            raise SingularMatrix("matrix is singular")
        return trans

    def transpose(self) -> "Mat":
        return Mat(self.ctx, self.a.T.copy())

    def hstack(self, other: "Mat") -> "Mat":
        return Mat(self.ctx, np.concatenate([self.a, other.a], axis=1))

    def vstack(self, other: "Mat") -> "Mat":
        return Mat(self.ctx, np.concatenate([self.a, other.a], axis=0))

    def block_diag(self, other: "Mat") -> "Mat":
        out = np.zeros((self.rows + other.rows, self.cols + other.cols), dtype=np.uint8)
        out[: self.rows, : self.cols] = self.a
        out[self.rows:, self.cols:] = other.a
        return Mat(self.ctx, out)

    def power(self, e: int) -> "Mat":
        assert self.rows == self.cols
        result = Mat.identity(self.ctx, self.rows)
        base = self
        while e:
            if e & 1:
                result = result @ base
            base = base @ base
            e >>= 1
        return result

    def row_space_contains(self, vectors: "Mat") -> bool:
        """True when every row of `vectors` lies in the row space of self (RREF rows)."""
        red, rank, pivots = self.rref()
        if rank == 0:
            return vectors.is_zero()
        coords = vectors.a[:, list(pivots)]
        recon = Mat(self.ctx, coords) @ Mat(self.ctx, red.a[:rank])
        return bool(np.array_equal(recon.a, vectors.a))


# ---------------------------------------------------------------------------
# counting and enumeration helpers


def gl_order(n: int, q: int) -> int:
    """Number of invertible n x n matrices over GF(q)."""
    assert n >= 0
    out = 1
    for i in range(n):
        out *= q ** n - q ** i
    return out


def gaussian_binomial(n: int, m: int, q: int) -> int:
    """Number of m-dimensional subspaces of GF(q)^n (exact integer)."""
    if m < 0 or m > n:
        return 0
    num = den = 1
    for i in range(m):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    assert num % den == 0
    return num // den


def subspaces_of_dim(n: int, m: int, ctx: GF, caps: Caps = DEFAULT_CAPS) -> Iterator[Mat]:
    """All m-dimensional subspaces of GF(q)^n as RREF basis matrices.

    Deterministic order: pivot-column patterns lexicographically, then the
    free entries as an odometer in field code order.  Total count is the
    Gaussian binomial.
    """
    caps.check("subspace_enum", gaussian_binomial(n, m, ctx.q))
    if m == 0:
        yield Mat.zeros(ctx, 0, n)
        return
    for pivots in itertools.combinations(range(n), m):
        free_pos = [
            (r, c)
            for r in range(m)
            for c in range(pivots[r] + 1, n)
            if c not in pivots
        ]
        base = np.zeros((m, n), dtype=np.uint8)
        for r, pc in enumerate(pivots):
            base[r, pc] = 1
        for assignment in itertools.product(range(ctx.q), repeat=len(free_pos)):
            mat = base.copy()
            for (r, c), val in zip(free_pos, assignment):
                mat[r, c] = val
            yield Mat(ctx, mat)


# ---------------------------------------------------------------------------
# polynomials over GF (dense code lists, index = degree, trimmed)


def poly_trim(a: list) -> list:
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_mul(ctx: GF, a: Sequence, b: Sequence) -> list:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    out[i + j] = ctx.add(out[i + j], ctx.mul(ai, bj))
    return poly_trim(out)


def poly_divmod(ctx: GF, a: Sequence, b: Sequence) -> tuple:
    a, b = list(a), list(b)
    poly_trim(b)
    assert b, "division by zero polynomial"
    a = list(a)
    poly_trim(a)
    inv_lead = ctx.inv(b[-1])
    quot = [0] * max(0, len(a) - len(b) + 1)
    while len(a) >= len(b):
        shift = len(a) - len(b)
        factor = ctx.mul(a[-1], inv_lead)
        quot[shift] = factor
        for i, bi in enumerate(b):
            a[shift + i] = ctx.sub(a[shift + i], ctx.mul(factor, bi))
        poly_trim(a)
        if not a:
            break
    return poly_trim(quot), a


def monic_polys(ctx: GF, deg: int) -> Iterator[list]:
    for tail in itertools.product(range(ctx.q), repeat=deg):
        yield list(tail) + [1]


def monic_irreducibles(ctx: GF, max_deg: int) -> List[List[list]]:
    """Lists of monic irreducible polynomials by degree 1..max_deg (cached)."""
    cache = getattr(ctx, "_irr_cache", {})
    if max_deg in cache:
        return cache[max_deg]
    by_deg: List[List[list]] = [[]]
    for d in range(1, max_deg + 1):
        found = []
        for cand in monic_polys(ctx, d):
            irr = True
            for dd in range(1, d // 2 + 1):
                for f in by_deg[dd]:
                    if not poly_divmod(ctx, cand, f)[1]:
                        irr = False
                        break
                if not irr:
                    break
            if irr:
                found.append(cand)
        by_deg.append(found)
    cache[max_deg] = by_deg
    ctx._irr_cache = cache
    return by_deg


def char_poly(m: Mat) -> list:
    """Characteristic polynomial of a square matrix, constant term first.

    Division-free (Berkowitz), so it is exact in any characteristic.
    """
    ctx = m.ctx
    n = m.rows
    assert n == m.cols
    # vectors of coefficients, leading coefficient first
    v = [1]
    for i in range(1, n + 1):
        sub = m.a[: i - 1, : i - 1]
        row = m.a[i - 1, : i - 1]
        col = m.a[: i - 1, i - 1]
        a_ii = int(m.a[i - 1, i - 1])
        toep = [1, ctx.neg(a_ii)]
        if i > 1:
            vec = Mat(ctx, col[:, None])
            rowm = Mat(ctx, row[None, :])
            subm = Mat(ctx, sub)
            cur = vec
            for _ in range(i - 1):
                val = (rowm @ cur).a[0, 0]
                toep.append(ctx.neg(int(val)))
                cur = subm @ cur
        new = [0] * (i + 1)
        for s in range(i + 1):
            acc = 0
            for j in range(min(s, len(toep) - 1) + 1):
                if s - j < len(v):
                    acc = ctx.add(acc, ctx.mul(toep[j], v[s - j]))
            new[s] = acc
        v = new
    return list(reversed(v))  # constant first


def min_poly(m: Mat) -> list:
    """Minimal polynomial (monic, constant term first) via Krylov dependence."""
    ctx = m.ctx
    n = m.rows
    powers = [Mat.identity(ctx, n)]
    flat = [powers[0].a.reshape(-1)]
    for _ in range(n):
        powers.append(powers[-1] @ m)
        flat.append(powers[-1].a.reshape(-1))
        stacked = Mat(ctx, np.stack(flat))
        red, rank, pivots = stacked.transpose().rref()
        if rank < len(flat):
            ker = stacked.transpose().kernel_basis()
            # last power participates in some dependence; take the one with
            # the highest degree coefficient normalized
            for row in ker.a:
                if row[len(flat) - 1]:
                    coeffs = [int(x) for x in row]
                    lead = ctx.inv(coeffs[len(flat) - 1])
                    return poly_trim([ctx.mul(lead, c) for c in coeffs])
    raise AssertionError("minimal polynomial search failed")
