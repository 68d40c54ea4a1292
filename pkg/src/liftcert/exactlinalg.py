"""Exact linear algebra over a prime field (or the rationals).

Everything downstream (truncated rings, ideals, module realizations)
reduces to the operations here.  All arithmetic is exact: integers mod a
prime p, or ``fractions.Fraction`` when p = 0.  Pivoting is deterministic
(first nonzero entry in column order) so results are bit-reproducible.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field as dc_field
from fractions import Fraction


class DimensionMismatch(ValueError):
    pass


def _is_prime(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class FieldConfig:
    """Coefficient field: GF(p) for prime p, exact rationals for p = 0."""

    p: int = 32003

    def __post_init__(self):
        if self.p != 0 and not _is_prime(self.p):
            raise ValueError("characteristic must be 0 or prime, got %r" % (self.p,))

    def of(self, n):
        if self.p:
            return int(n) % self.p
        return Fraction(n)

    @property
    def zero(self):
        return self.of(0)

    @property
    def one(self):
        return self.of(1)

    def add(self, a, b):
        return (a + b) % self.p if self.p else a + b

    def sub(self, a, b):
        return (a - b) % self.p if self.p else a - b

    def mul(self, a, b):
        return (a * b) % self.p if self.p else a * b

    def neg(self, a):
        return (-a) % self.p if self.p else -a

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        if self.p:
            return pow(a, self.p - 2, self.p)
        return Fraction(1) / a


@dataclass
class DenseMatrix:
    """Row-major dense matrix over a FieldConfig."""

    field: FieldConfig
    rows: int
    cols: int
    entries: list  # list of rows, each a list of scalars

    @classmethod
    def from_rows(cls, field, rows, cols=None):
        rows = [list(map(field.of, r)) for r in rows]
        if cols is None:
            if not rows:
                raise ValueError("cols required for an empty matrix")
            cols = len(rows[0])
        for r in rows:
            if len(r) != cols:
                raise DimensionMismatch("ragged rows")
        return cls(field, len(rows), cols, rows)

    @classmethod
    def identity(cls, field, n):
        ent = [[field.of(1 if i == j else 0) for j in range(n)] for i in range(n)]
        return cls(field, n, n, ent)

    @classmethod
    def zero(cls, field, rows, cols):
        ent = [[field.zero for _ in range(cols)] for _ in range(rows)]
        return cls(field, rows, cols, ent)

    def copy(self):
        return DenseMatrix(self.field, self.rows, self.cols,
                           [row[:] for row in self.entries])

    def __eq__(self, other):
        return (isinstance(other, DenseMatrix) and self.rows == other.rows
                and self.cols == other.cols and self.entries == other.entries)


def rref(m: DenseMatrix):
    """Unique reduced row-echelon form.  Returns (reduced, rank, pivots)."""
    F = m.field
    a = [row[:] for row in m.entries]
    pivots = []
    r = 0
    for c in range(m.cols):
        pr = next((i for i in range(r, m.rows) if a[i][c]), None)
        if pr is None:
            continue
        a[r], a[pr] = a[pr], a[r]
        inv = F.inv(a[r][c])
        a[r] = [F.mul(inv, x) for x in a[r]]
        for i in range(m.rows):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == m.rows:
            break
    reduced = DenseMatrix(F, m.rows, m.cols, a)
    return reduced, r, pivots


@dataclass
class Subspace:
    """Subspace of k^n given by a basis in reduced row-echelon form."""

    field: FieldConfig
    ambient_dim: int
    basis: DenseMatrix  # RREF, no zero rows

    @classmethod
    def from_rows(cls, field, ambient_dim, rows):
        if not rows:
            return cls(field, ambient_dim, DenseMatrix(field, 0, ambient_dim, []))
        m = DenseMatrix.from_rows(field, rows, ambient_dim)
        red, rank, _ = rref(m)
        return cls(field, ambient_dim,
                   DenseMatrix(field, rank, ambient_dim, red.entries[:rank]))

    @property
    def dim(self):
        return self.basis.rows

    def __eq__(self, other):
        return (isinstance(other, Subspace)
                and self.ambient_dim == other.ambient_dim
                and self.basis == other.basis)


def kernel_basis(m: DenseMatrix) -> Subspace:
    """Right kernel {v : m v = 0} as a Subspace of k^cols."""
    F = m.field
    red, rank, pivots = rref(m)
    free = [c for c in range(m.cols) if c not in pivots]
    rows = []
    for c in free:
        v = [F.zero] * m.cols
        v[c] = F.one
        for r, pc in enumerate(pivots):
            v[pc] = F.neg(red.entries[r][c])
        rows.append(v)
    return Subspace.from_rows(F, m.cols, rows)


def contains(a: Subspace, v) -> bool:
    """Membership of a vector in the subspace (exact reduction)."""
    if len(v) != a.ambient_dim:
        raise DimensionMismatch("vector length %d != ambient %d"
                                % (len(v), a.ambient_dim))
    F = a.field
    w = list(map(F.of, v))
    for row in a.basis.entries:
        pc = next(i for i, x in enumerate(row) if x)
        if w[pc]:
            f = w[pc]
            w = [F.sub(x, F.mul(f, y)) for x, y in zip(w, row)]
    return not any(w)


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    if a.ambient_dim != b.ambient_dim:
        raise DimensionMismatch("ambient dims differ")
    return Subspace.from_rows(a.field, a.ambient_dim,
                              a.basis.entries + b.basis.entries)


def subspace_intersect(a: Subspace, b: Subspace) -> Subspace:
    """Intersection via the kernel of the stacked coefficient system."""
    if a.ambient_dim != b.ambient_dim:
        raise DimensionMismatch("ambient dims differ")
    F = a.field
    ra, rb = a.dim, b.dim
    if ra == 0 or rb == 0:
        return Subspace.from_rows(F, a.ambient_dim, [])
    # Solve x.A = y.B: kernel of the (ambient x (ra+rb)) matrix [A^T | -B^T].
    stacked = [[a.basis.entries[i][c] for i in range(ra)]
               + [F.neg(b.basis.entries[j][c]) for j in range(rb)]
               for c in range(a.ambient_dim)]
    ker = kernel_basis(DenseMatrix.from_rows(F, stacked, ra + rb))
    rows = []
    for sol in ker.basis.entries:
        v = [F.zero] * a.ambient_dim
        for i in range(ra):
            if sol[i]:
                for c in range(a.ambient_dim):
                    v[c] = F.add(v[c], F.mul(sol[i], a.basis.entries[i][c]))
        rows.append(v)
    return Subspace.from_rows(F, a.ambient_dim, rows)


def subspace_leq(a: Subspace, b: Subspace) -> bool:
    """Containment a <= b."""
    return all(contains(b, row) for row in a.basis.entries)


# ---------------------------------------------------------------------------
# Sparse incremental echelon forms.
#
# The large truncated spans downstream (module quotients, colengths) are far
# too big for dense elimination but are extremely sparse.  Rows are dicts
# mapping totally ordered keys to nonzero scalars; the leading term of a row
# is its *largest* key, so elimination pushes support toward small keys.
# ---------------------------------------------------------------------------

def _neg_key(key):
    """Order-reversing involution on nested int tuples (for min-heaps)."""
    return tuple(_neg_key(k) if isinstance(k, tuple) else -k for k in key)


class SparseEchelon:
    """Incremental row echelon over sparse vectors with ordered keys.

    Rows are kept pivot-normalized (leading coefficient 1) but not
    inter-reduced; `reduce` cancels leading terms only, `reduce_full`
    eliminates every pivot key and returns a vector supported on
    non-pivot keys.
    """

    def __init__(self, field: FieldConfig):
        self.field = field
        self.rows = {}  # pivot key -> row dict

    @property
    def rank(self):
        return len(self.rows)

    def pivots(self):
        return self.rows.keys()

    def reduce(self, vec):
        """Cancel leading terms against pivot rows; returns the residual."""
        F = self.field
        v = dict(vec)
        while v:
            lead = max(v)
            row = self.rows.get(lead)
            if row is None:
                return v
            f = v[lead]
            for k, c in row.items():
                nv = F.sub(v.get(k, F.zero), F.mul(f, c))
                if nv:
                    v[k] = nv
                else:
                    v.pop(k, None)
        return v

    def reduce_full(self, vec):
        """Eliminate all pivot keys; residual is supported off the pivots."""
        F = self.field
        v = dict(vec)
        heap = [_neg_key(k) for k in v]
        heapq.heapify(heap)
        seen = set()
        while heap:
            k = _neg_key(heapq.heappop(heap))
            if k in seen or k not in v:
                continue
            seen.add(k)
            row = self.rows.get(k)
            if row is None:
                continue
            f = v[k]
            for kk, c in row.items():
                nv = F.sub(v.get(kk, F.zero), F.mul(f, c))
                if nv:
                    if kk not in v and kk not in seen:
                        heapq.heappush(heap, _neg_key(kk))
                    v[kk] = nv
                else:
                    v.pop(kk, None)
        return v

    def insert(self, vec):
        """Reduce and insert; returns the new pivot key or None."""
        F = self.field
        v = self.reduce(vec)
        if not v:
            return None
        lead = max(v)
        inv = F.inv(v[lead])
        self.rows[lead] = {k: F.mul(inv, c) for k, c in v.items()}
        return lead

    def member(self, vec) -> bool:
        return not self.reduce(vec)


def variable_closure(ech: SparseEchelon, seeds, shift_ops):
    """Close a span under a family of shift maps (multiplication operators).

    `seeds` is an iterable of sparse rows; `shift_ops` is a list of
    functions mapping a key to a shifted key or None (truncated away).
    The echelon is grown until it is stable under every shift.
    """
    frontier = []
    for v in seeds:
        piv = ech.insert(v)
        if piv is not None:
            frontier.append(ech.rows[piv])
    while frontier:
        new = []
        for row in frontier:
            for op in shift_ops:
                shifted = {}
                for k, c in row.items():
                    nk = op(k)
                    if nk is not None:
                        shifted[nk] = c
                if not shifted:
                    continue
                piv = ech.insert(shifted)
                if piv is not None:
                    new.append(ech.rows[piv])
        frontier = new
    return ech


# ---------------------------------------------------------------------------
# numpy-backed dense matrices for the module/homology layer.
#
# dtype int64 with entries reduced mod p (object/Fraction when p = 0); the
# same elimination code serves both lanes.
# ---------------------------------------------------------------------------

import numpy as _np


def np_mat(field, rows, cols=None):
    if len(rows) == 0:
        return _np.zeros((0, cols or 0), dtype=_np.int64 if field.p else object)
    if field.p:
        return _np.array([[int(x) % field.p for x in r] for r in rows],
                         dtype=_np.int64)
    return _np.array([[Fraction(x) for x in r] for r in rows], dtype=object)


def np_zeros(field, r, c):
    if field.p:
        return _np.zeros((r, c), dtype=_np.int64)
    return _np.full((r, c), Fraction(0), dtype=object)


def np_identity(field, n):
    m = np_zeros(field, n, n)
    for i in range(n):
        m[i, i] = field.one
    return m


def np_matmul(field, a, b):
    c = a @ b
    return c % field.p if field.p else c


def np_rref(field, a):
    """Reduced row echelon form; returns (reduced, rank, pivots)."""
    a = a.copy()
    if field.p:
        a %= field.p
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        col = a[r:, c]
        nz = _np.nonzero(col)[0] if field.p else \
            _np.nonzero([bool(x) for x in col])[0]
        if len(nz) == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            a[[r, pr]] = a[[pr, r]]
        inv = field.inv(int(a[r, c]) if field.p else a[r, c])
        a[r] = (a[r] * inv) % field.p if field.p else a[r] * inv
        colvals = a[:, c].copy()
        colvals[r] = field.zero
        if field.p:
            a -= _np.outer(colvals, a[r])
            a %= field.p
        else:
            a = a - _np.outer(colvals, a[r])
        pivots.append(c)
        r += 1
    return a, r, pivots


def np_rank(field, a):
    if a.shape[0] == 0 or a.shape[1] == 0:
        return 0
    return np_rref(field, a)[1]


def np_kernel(field, a):
    """Right kernel basis as rows of a matrix."""
    rows, cols = a.shape
    if rows == 0:
        return np_identity(field, cols)
    red, rank, pivots = np_rref(field, a)
    free = [c for c in range(cols) if c not in pivots]
    ker = np_zeros(field, len(free), cols)
    for i, c in enumerate(free):
        ker[i, c] = field.one
        for r, pc in enumerate(pivots):
            ker[i, pc] = field.neg(red[r, c])
    return ker
