"""Exact dense/blocked linear algebra over FieldSpec scalars.

Matrices are NumPy arrays of Gaussian-integer values, reduced mod p
after every operation.  Prime fields run on float64 internally (all
imaginary parts are zero there); the quadratic extension runs on
complex128.  Either way the arithmetic is exact: components are bounded
by p**2 times the contraction length, far below 2**53.

Every reported basis is in canonical reduced row echelon form (pivots 1,
pivot columns strictly increasing and cleared above and below), so equal
subspaces have bitwise-equal bases and serialized output is
deterministic.
"""

from __future__ import annotations

import numpy as np

from .field import FieldSpec


def amod(field: FieldSpec, a):
    """Reduce an array mod p, componentwise on real and imaginary parts."""
    a = np.asarray(a)
    if np.iscomplexobj(a):
        return (a.real % field.p) + 1j * (a.imag % field.p)
    return a % field.p


def iszero(a) -> bool:
    return not np.any(a)


def mm(field: FieldSpec, a, b):
    return amod(field, np.asarray(a) @ np.asarray(b))


def as_complex(a):
    return np.ascontiguousarray(np.asarray(a), dtype=np.complex128)


class Eliminator:
    """Incremental Gaussian elimination with a fully reduced pivot set.

    Rows are fed in blocks.  Each block is first reduced against the
    accumulated pivot rows with one matmul (valid because the pivot
    columns of the accumulated rows form an identity), surviving rows
    are then absorbed in small chunks by a plain pivot loop.  The final
    row set, ordered by pivot column, is the canonical RREF of
    everything fed in; the result does not depend on feeding order.
    """

    _CHUNK = 128

    def __init__(self, field: FieldSpec, ncols: int):
        self.field = field
        self.ncols = ncols
        self.real = not field.ext
        self.dtype = np.float64 if self.real else np.complex128
        self._rows = np.zeros((min(128, max(ncols, 1)), ncols), dtype=self.dtype)
        self.rank = 0
        self.pivcols: list[int] = []

    # -- internals -------------------------------------------------------

    def _mod(self, a):
        if np.iscomplexobj(a):
            return (a.real % self.field.p) + 1j * (a.imag % self.field.p)
        return a % self.field.p

    def _coerce(self, rows):
        rows = np.asarray(rows)
        if rows.ndim == 1:
            rows = rows[None, :]
        if self.real and np.iscomplexobj(rows):
            rows = np.ascontiguousarray(rows.real)
        rows = np.asarray(rows, dtype=self.dtype)
        return self._mod(rows)

    def _ensure_capacity(self, need: int):
        cap = self._rows.shape[0]
        if need <= cap:
            return
        while cap < need:
            cap = min(max(cap * 2, 128), max(self.ncols, need))
        grown = np.zeros((cap, self.ncols), dtype=self.dtype)
        grown[:self.rank] = self._rows[:self.rank]
        self._rows = grown

    def _reduce_block(self, block):
        if self.rank and block.size:
            piv = np.asarray(self.pivcols, dtype=np.intp)
            block = block - block[:, piv] @ self._rows[:self.rank]
            block = self._mod(block)
        if block.size:
            block = block[block.any(axis=1)]
        return block

    def _absorb_chunk(self, chunk):
        """Plain RREF loop on a small chunk; returns new pivot rows."""
        new_rows = []
        new_cols = []
        while chunk.shape[0]:
            lead = (chunk != 0).argmax(axis=1)
            r = int(np.argmin(lead))
            c = int(lead[r])
            ival = self.field.inv(chunk[r, c])
            if self.real:
                ival = ival.real
            prow = self._mod(chunk[r] * ival)
            keep = np.ones(chunk.shape[0], dtype=bool)
            keep[r] = False
            chunk = chunk[keep]
            if chunk.shape[0]:
                chunk = self._mod(chunk - np.outer(chunk[:, c], prow))
                chunk = chunk[chunk.any(axis=1)]
            for i, row in enumerate(new_rows):
                if row[c]:
                    new_rows[i] = self._mod(row - row[c] * prow)
            new_rows.append(prow)
            new_cols.append(c)
        return new_rows, new_cols

    def add_rows(self, rows):
        block = self._reduce_block(self._coerce(rows))
        n = block.shape[0]
        for start in range(0, n, self._CHUNK):
            chunk = self._reduce_block(block[start:start + self._CHUNK])
            if not chunk.shape[0]:
                continue
            new_rows, new_cols = self._absorb_chunk(chunk)
            if not new_rows:
                continue
            newmat = np.stack(new_rows)
            if self.rank:
                cols = np.asarray(new_cols, dtype=np.intp)
                r = self._rows[:self.rank]
                r -= r[:, cols] @ newmat
                self._rows[:self.rank] = self._mod(r)
            self._ensure_capacity(self.rank + len(new_rows))
            self._rows[self.rank:self.rank + len(new_rows)] = newmat
            self.rank += len(new_rows)
            self.pivcols.extend(new_cols)

    # -- results ---------------------------------------------------------

    def rref(self):
        """Canonical RREF of everything fed in, as complex128."""
        order = np.argsort(np.asarray(self.pivcols, dtype=np.intp)) \
            if self.pivcols else np.zeros(0, dtype=np.intp)
        out = self._rows[:self.rank][order]
        piv = [self.pivcols[i] for i in order]
        return as_complex(out), piv

    def kernel_rows(self):
        """Canonical RREF basis of the kernel of the fed row system."""
        r, piv = self.rref()
        free = [c for c in range(self.ncols) if c not in set(piv)]
        if not free:
            return np.zeros((0, self.ncols), dtype=np.complex128)
        k = np.zeros((len(free), self.ncols), dtype=np.complex128)
        for t, c in enumerate(free):
            k[t, c] = 1.0
        if piv:
            k[:, np.asarray(piv, dtype=np.intp)] = \
                amod(self.field, -r[:, np.asarray(free, dtype=np.intp)].T)
        sub = Eliminator(self.field, self.ncols)
        sub.add_rows(k)
        return sub.rref()[0]


def rref(field: FieldSpec, m):
    """Canonical RREF; returns (reduced matrix, rank, pivot columns)."""
    m = np.asarray(m)
    e = Eliminator(field, m.shape[1])
    e.add_rows(m)
    r, piv = e.rref()
    return r, e.rank, piv


def rank(field: FieldSpec, m) -> int:
    return rref(field, m)[1]


def kernel(field: FieldSpec, m) -> "Subspace":
    """Right kernel {v : m v = 0} as a canonical Subspace of F^ncols."""
    m = np.asarray(m)
    e = Eliminator(field, m.shape[1])
    e.add_rows(m)
    return Subspace(field, m.shape[1], e.kernel_rows(), _canonical=True)


class Subspace:
    """A subspace of F^ambient with a canonical RREF row basis."""

    def __init__(self, field: FieldSpec, ambient: int, rows=None, _canonical=False):
        self.field = field
        self.ambient = ambient
        if rows is None:
            rows = np.zeros((0, ambient), dtype=np.complex128)
        rows = np.asarray(rows)
        if rows.size and rows.shape[1] != ambient:
            raise ValueError("row length does not match ambient dimension")
        if _canonical:
            self.basis = as_complex(rows)
            self.pivots = [int((r != 0).argmax()) for r in self.basis]
        else:
            r, _, piv = rref(field, rows.reshape(-1, ambient))
            self.basis = r
            self.pivots = piv

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient})"

    def residual(self, v):
        """v reduced against the basis; zero iff v is in the subspace."""
        v = amod(self.field, np.asarray(v, dtype=np.complex128))
        if self.dim:
            piv = np.asarray(self.pivots, dtype=np.intp)
            v = amod(self.field, v - v[..., piv] @ self.basis)
        return v

    def contains_vector(self, v) -> bool:
        return iszero(self.residual(v))

    def coords_of(self, v):
        """Coordinates of v in the basis, or None if v is outside."""
        v = amod(self.field, np.asarray(v, dtype=np.complex128))
        c = v[np.asarray(self.pivots, dtype=np.intp)] if self.dim else \
            np.zeros(0, dtype=np.complex128)
        if not iszero(amod(self.field, (c @ self.basis if self.dim else 0) - v)):
            return None
        return c

    def contains(self, other: "Subspace") -> bool:
        if other.dim == 0:
            return True
        return iszero(self.residual(other.basis))

    def equals(self, other: "Subspace") -> bool:
        return (self.ambient == other.ambient and self.dim == other.dim
                and np.array_equal(self.basis, other.basis))

    def sum(self, other: "Subspace") -> "Subspace":
        rows = np.vstack([self.basis, other.basis])
        return Subspace(self.field, self.ambient, rows)

    def intersect(self, other: "Subspace") -> "Subspace":
        """Zassenhaus: RREF [[A|A],[B|0]]; zero-left rows carry A∩B."""
        n = self.ambient
        top = np.hstack([self.basis, self.basis])
        bot = np.hstack([other.basis, np.zeros_like(other.basis)])
        r, _, _ = rref(self.field, np.vstack([top, bot]))
        left_zero = ~r[:, :n].any(axis=1)
        return Subspace(self.field, n, r[left_zero][:, n:])

    def is_direct_sum(self, other: "Subspace") -> bool:
        return self.sum(other).dim == self.dim + other.dim


def solve_right(field: FieldSpec, a, b):
    """One solution x of a x = b (free variables zero), or None."""
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128).reshape(a.shape[0], -1)
    aug = np.hstack([a, b])
    r, _, piv = rref(field, aug)
    ncols = a.shape[1]
    x = np.zeros((ncols, b.shape[1]), dtype=np.complex128)
    for row, c in enumerate(piv):
        if c >= ncols:
            return None
        x[c] = r[row, ncols:]
    if not iszero(amod(field, a @ x - b)):
        return None
    return x if b.shape[1] > 1 else x[:, 0]


def inverse(field: FieldSpec, m):
    m = np.asarray(m, dtype=np.complex128)
    n = m.shape[0]
    if m.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    r, rk, _ = rref(field, np.hstack([m, np.eye(n, dtype=np.complex128)]))
    if rk < n or not iszero(amod(field, r[:, :n] - np.eye(n))):
        raise ValueError("matrix is singular")
    return r[:, n:]


def matrix_to_json(field: FieldSpec, m) -> list:
    m = amod(field, np.asarray(m, dtype=np.complex128))
    return [[field.scalar_to_json(x) for x in row] for row in m]


def matrix_from_json(field: FieldSpec, obj) -> np.ndarray:
    rows = [[field.scalar_from_json(x) for x in row] for row in obj]
    return np.asarray(rows, dtype=np.complex128).reshape(len(obj), -1)
