"""Finitely presented modules, their Fitting ideals and exact lengths.

A module is a cokernel of a matrix of polynomials (columns are relations).
Finite-length modules are realized as explicit vector spaces: the quotient
of a truncated free cover by the span of all monomial multiples of the
relation columns, together with commuting multiplication maps.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb

from .exactlinalg import (SparseEchelon, np_kernel, np_mat, np_matmul,
                          np_rank, np_rref, np_zeros, variable_closure)
from .ideals import IdealHandle, ideal_power, ideal_sum, ideal_span_eq, \
    ideal_span_leq
from .localring import Polynomial, RingContext, key_mono, mono_key


class NotFiniteLength(RuntimeError):
    pass


class MinorCapExceeded(RuntimeError):
    pass


DEFAULT_LENGTH_CAP = 32
DEFAULT_MINOR_CAP = 200000


@dataclass
class PresentedModule:
    """Cokernel presentation: mu0 rows, columns are relations."""

    ctx: RingContext
    matrix: list  # mu0 x m nested list of Polynomial

    def __post_init__(self):
        if not self.matrix:
            raise ValueError("need at least one row")
        m = len(self.matrix[0])
        if any(len(r) != m for r in self.matrix):
            raise ValueError("ragged presentation matrix")

    @classmethod
    def from_strings(cls, rows, ctx):
        from .localring import parse_poly
        return cls(ctx, [[parse_poly(s, ctx) for s in row] for row in rows])

    @property
    def mu0(self):
        return len(self.matrix)

    @property
    def ncols(self):
        return len(self.matrix[0])

    def column(self, j):
        return [self.matrix[r][j] for r in range(self.mu0)]

    def entry_degree(self):
        return max((p.degree() for row in self.matrix for p in row), default=0)

    def augment(self, blocks):
        """New presentation with extra relation columns appended."""
        extra = [[blocks[r][j] for r in range(self.mu0)]
                 for j in range(len(blocks[0]))]
        rows = [self.matrix[r] + [col[r] for col in extra]
                for r in range(self.mu0)]
        return PresentedModule(self.ctx, rows)


def _column_vec(col, N):
    """Sparse vector of a relation column; keys are (deg, revexp, row)."""
    v = {}
    for r, p in enumerate(col):
        for m, c in p.terms.items():
            if sum(m) <= N:
                k = mono_key(m)
                v[(k[0], k[1], r)] = c
    return v


def _module_shift_ops(nvars, N):
    ops = []
    for i in range(nvars):
        def op(key, i=i):
            deg, negrev, row = key
            if deg + 1 > N:
                return None
            m = list(key_mono((deg, negrev)))
            m[i] += 1
            k = mono_key(tuple(m))
            return (k[0], k[1], row)
        ops.append(op)
    return ops


def module_span_echelon(M: PresentedModule, N) -> SparseEchelon:
    """Span of the relation submodule inside R_N^mu0."""
    ech = SparseEchelon(M.ctx.field)
    seeds = [v for v in (_column_vec(M.column(j), N) for j in range(M.ncols)) if v]
    variable_closure(ech, seeds, _module_shift_ops(M.ctx.nvars, N))
    return ech


def _covers_top_degree(ech, ctx, mu0, N):
    one = ctx.field.one
    for m in ctx.monomials(N, min_degree=N):
        k = mono_key(m)
        for r in range(mu0):
            key = (k[0], k[1], r)
            row = ech.rows.get(key)
            if row is not None and len(row) == 1:
                continue
            if not ech.member({key: one}):
                return False
    return True


def module_length(M: PresentedModule, cap=DEFAULT_LENGTH_CAP):
    """Exact length of coker(M) with its witness truncation degree."""
    ctx = M.ctx
    start = max(1, M.entry_degree() + 1)
    for N in range(start, cap + 1):
        ech = module_span_echelon(M, N)
        if _covers_top_degree(ech, ctx, M.mu0, N):
            return M.mu0 * ctx.basis_size(N) - ech.rank, N
    raise NotFiniteLength("no witness truncation <= %d (Fitt_0 not certified "
                          "m-primary within cap)" % cap)


class ModuleVectorSpace:
    """Finite-length module as a based vector space with x_i-actions."""

    def __init__(self, module: PresentedModule, witness=None, cap=DEFAULT_LENGTH_CAP):
        ctx = module.ctx
        if witness is None:
            _, witness = module_length(module, cap=cap)
        self.module = module
        self.ctx = ctx
        self.N = witness
        self.ech = module_span_echelon(module, witness)
        ambient = [(k[0], k[1], r)
                   for m in ctx.monomials(witness)
                   for k in [mono_key(m)]
                   for r in range(module.mu0)]
        self.basis = sorted(k for k in ambient if k not in self.ech.rows)
        self.index = {k: i for i, k in enumerate(self.basis)}
        self._coord_cache = {}
        self._mono_action = {}
        self.mult = [self._variable_matrix(i) for i in range(ctx.nvars)]

    @property
    def dim(self):
        return len(self.basis)

    def key_coords(self, key):
        """Coordinates of a single ambient basis key in the quotient."""
        cached = self._coord_cache.get(key)
        if cached is not None:
            return cached
        field = self.ctx.field
        if key in self.index:
            v = np_zeros(field, 1, self.dim)[0]
            v[self.index[key]] = field.one
        else:
            red = self.ech.reduce_full({key: field.one})
            v = np_zeros(field, 1, self.dim)[0]
            for k, c in red.items():
                v[self.index[k]] = c
        self._coord_cache[key] = v
        return v

    def coords_of_vec(self, vec):
        """Quotient coordinates of a sparse ambient vector."""
        field = self.ctx.field
        red = self.ech.reduce_full(vec)
        v = np_zeros(field, 1, self.dim)[0]
        for k, c in red.items():
            v[self.index[k]] = c
        return v

    def coords_of_columns(self, polys):
        """Coordinates of an element given as one polynomial per row."""
        vec = _column_vec(polys, self.N)
        return self.coords_of_vec(vec)

    def _variable_matrix(self, i):
        field = self.ctx.field
        mat = np_zeros(field, self.dim, self.dim)
        for j, (deg, negrev, row) in enumerate(self.basis):
            m = list(key_mono((deg, negrev)))
            m[i] += 1
            k = mono_key(tuple(m))
            mat[:, j] = self.key_coords((k[0], k[1], row))
        return mat

    def monomial_action(self, mono):
        mat = self._mono_action.get(mono)
        if mat is not None:
            return mat
        field = self.ctx.field
        from .exactlinalg import np_identity
        mat = np_identity(field, self.dim)
        for i, e in enumerate(mono):
            for _ in range(e):
                mat = np_matmul(field, self.mult[i], mat)
        self._mono_action[mono] = mat
        return mat

    def action(self, poly: Polynomial):
        """Matrix of multiplication by a ring element."""
        field = self.ctx.field
        mat = np_zeros(field, self.dim, self.dim)
        for m, c in poly.terms.items():
            if field.p:
                mat = (mat + int(c) * self.monomial_action(m)) % field.p
            else:
                mat = mat + c * self.monomial_action(m)
        return mat

    def annihilates(self, poly: Polynomial) -> bool:
        a = self.action(poly)
        return not a.any() if self.ctx.field.p else not any(x for x in a.flat)

    def multiplication_maps_commute(self) -> bool:
        field = self.ctx.field
        for i in range(len(self.mult)):
            for j in range(i + 1, len(self.mult)):
                ab = np_matmul(field, self.mult[i], self.mult[j])
                ba = np_matmul(field, self.mult[j], self.mult[i])
                if (ab != ba).any():
                    return False
        return True


def realize_vector_space(M: PresentedModule, cap=DEFAULT_LENGTH_CAP) -> ModuleVectorSpace:
    return ModuleVectorSpace(M, cap=cap)


# ---------------------------------------------------------------------------
# Fitting ideals
# ---------------------------------------------------------------------------

def _minor(M, rows, cols, memo):
    """Determinant of a square submatrix by Laplace expansion, memoized."""
    key = (rows, cols)
    hit = memo.get(key)
    if hit is not None:
        return hit
    ctx = M.ctx
    if len(rows) == 1:
        val = M.matrix[rows[0]][cols[0]]
    else:
        val = Polynomial.zero(ctx.nvars, ctx.field)
        r0 = rows[0]
        rest = rows[1:]
        for j, c in enumerate(cols):
            e = M.matrix[r0][c]
            if e.is_zero():
                continue
            sub = _minor(M, rest, cols[:j] + cols[j + 1:], memo)
            term = e * sub
            val = val + term if j % 2 == 0 else val - term
    memo[key] = val
    return val


def fitting_ideal(M: PresentedModule, i, minor_cap=DEFAULT_MINOR_CAP) -> IdealHandle:
    """Fitt_i = ideal of (mu0 - i)-minors of the presentation matrix."""
    if i < 0:
        raise ValueError("index must be >= 0")
    k = M.mu0 - i
    ctx = M.ctx
    if k <= 0:
        return IdealHandle([ctx.one()], ctx)
    if k > M.ncols:
        return IdealHandle([], ctx)
    count = comb(M.mu0, k) * comb(M.ncols, k)
    if count > minor_cap:
        raise MinorCapExceeded("%d minors exceed cap %d" % (count, minor_cap))
    memo = {}
    gens = []
    for rows in combinations(range(M.mu0), k):
        for cols in combinations(range(M.ncols), k):
            gens.append(_minor(M, rows, cols, memo))
    from .ideals import _dedup
    return IdealHandle(_dedup(gens), ctx)


def _inverse_trunc(p: Polynomial, ctx: RingContext) -> Polynomial:
    """Inverse of a unit in R_N via the geometric series."""
    from .localring import mul_trunc
    c = p.constant_term()
    if not c:
        raise ZeroDivisionError("not a unit in the local ring")
    F = ctx.field
    cinv = F.inv(c)
    q = Polynomial.constant(ctx.nvars, F, 1) - p.scale(cinv)  # q in m
    inv = Polynomial.constant(ctx.nvars, F, 1)
    power = Polynomial.constant(ctx.nvars, F, 1)
    for _ in range(ctx.truncation_degree):
        power = mul_trunc(power, q, ctx)
        if power.is_zero():
            break
        inv = inv + power
    return inv.scale(cinv)


def minimal_presentation(M: PresentedModule):
    """Reduce unit entries away; returns (minimal module, mu).

    Row/column operations happen in the truncated ring R_N, which leaves
    the cokernel unchanged up to isomorphism modulo m^(N+1); mu itself is
    exact (rank of the constant-term matrix).
    """
    from .localring import mul_trunc
    ctx = M.ctx
    F = ctx.field
    mat = [row[:] for row in M.matrix]
    while True:
        pivot = None
        for r, row in enumerate(mat):
            for c, p in enumerate(row):
                if p.constant_term():
                    pivot = (r, c)
                    break
            if pivot:
                break
        if pivot is None:
            break
        r0, c0 = pivot
        inv = _inverse_trunc(mat[r0][c0], ctx)
        mat[r0] = [mul_trunc(inv, p, ctx) for p in mat[r0]]
        for r in range(len(mat)):
            if r != r0 and not mat[r][c0].is_zero():
                f = mat[r][c0]
                mat[r] = [a - mul_trunc(f, b, ctx)
                          for a, b in zip(mat[r], mat[r0])]
        for c in range(len(mat[0])):
            if c != c0 and not mat[r0][c].is_zero():
                f = mat[r0][c]
                for r in range(len(mat)):
                    mat[r][c] = mat[r][c] - mul_trunc(f, mat[r][c0], ctx)
        mat = [row[:c0] + row[c0 + 1:] for i, row in enumerate(mat) if i != r0]
        if not mat:
            return None, 0
        if not mat[0]:
            mat = [[Polynomial.zero(ctx.nvars, F)] for _ in mat]
    return PresentedModule(ctx, mat), len(mat)


def base_change_fitt(L: PresentedModule, a: IdealHandle, N=None):
    """Fitt_0 of L tensored down along R -> R/a, three ways.

    Returns (lhs, mid, rhs, identity_check) where mid is Fitt_0 of the
    augmented presentation (columns of L plus a-multiples of the free
    cover), lhs = Fitt_0(L) + a^mu, rhs = Fitt_0(L) + a, and
    identity_check verifies mid = sum_j a^j Fitt_j(L) together with the
    sandwich lhs <= mid <= rhs, all as truncated spans at N.
    """
    ctx = L.ctx
    N = ctx.truncation_degree if N is None else N
    mu = L.mu0
    blocks = []
    for g in a.generators:
        for r in range(mu):
            col = [Polynomial.zero(ctx.nvars, ctx.field)] * mu
            col = list(col)
            col[r] = g
            blocks.append(col)
    aug = L.augment(list(map(list, zip(*blocks)))) if blocks else L
    mid = fitting_ideal(aug, 0)

    fitt0 = fitting_ideal(L, 0)
    total = IdealHandle(list(fitt0.generators), ctx)
    for j in range(1, mu + 1):
        fj = fitting_ideal(L, j)
        if not fj.generators:
            continue
        aj = ideal_power(a, j)
        gens = ([f * g for f in aj.generators for g in fj.generators]
                if not any(p.constant_term() for p in fj.generators)
                else list(aj.generators))
        total = IdealHandle(total.generators + gens, ctx)
    lhs = ideal_sum(fitt0, ideal_power(a, mu))
    rhs = ideal_sum(fitt0, a)
    ok = (ideal_span_eq(mid, total, N)
          and ideal_span_leq(lhs, mid, N)
          and ideal_span_leq(mid, rhs, N))
    return lhs, mid, rhs, ok


def annihilator(V: ModuleVectorSpace) -> IdealHandle:
    """Exact annihilator of a realized finite-length module."""
    ctx = V.ctx
    field = ctx.field
    monos = ctx.monomials(V.N)
    rows = []
    for m in monos:
        rows.append(list(V.monomial_action(m).reshape(-1)))
    A = np_mat(field, rows, V.dim * V.dim)
    # combinations of monomials acting by zero = left kernel of A
    ker = np_kernel(field, A.T)
    gens = []
    for krow in ker:
        terms = {m: krow[i] for i, m in enumerate(monos) if krow[i]}
        if terms:
            gens.append(Polynomial(ctx.nvars, field, terms))
    return IdealHandle(gens, ctx)
