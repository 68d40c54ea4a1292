"""Ideal arithmetic and ring-theoretic invariants in the truncated model.

The central soundness fact: for generators inside the maximal ideal, the
image of an ideal I in R/m^(N+1) equals the span of the monomial multiples
of the generators up to degree N (coefficient tails of degree > N only
contribute inside m^(N+1)).  Every span below is computed that way, with
no standard-basis machinery.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement

from .exactlinalg import SparseEchelon, Subspace, variable_closure
from .growth import GrowthReport, growth_degree
from .localring import (Polynomial, RingContext, key_mono, mono_key,
                        poly_from_vec)


class NotArtinianWithinCap(RuntimeError):
    pass


class StabilizationCapExceeded(RuntimeError):
    pass


DEFAULT_COLENGTH_CAP = 40
DEFAULT_GROWTH_HORIZON = 12


@dataclass
class IdealHandle:
    """Finitely generated ideal, given by explicit polynomial generators."""

    generators: list
    ctx: RingContext

    def __post_init__(self):
        self.generators = [g for g in self.generators if not g.is_zero()]
        self.is_unit = any(g.constant_term() for g in self.generators)

    @classmethod
    def from_strings(cls, strs, ctx):
        from .localring import parse_poly
        return cls([parse_poly(s, ctx) for s in strs], ctx)

    def maximal_check(self):
        if self.is_unit:
            raise ValueError("unit ideal where a proper ideal is required")


def maximal_ideal(ctx) -> IdealHandle:
    return IdealHandle(ctx.maximal_ideal_gens(), ctx)


def ideal_sum(a: IdealHandle, b: IdealHandle) -> IdealHandle:
    return IdealHandle(a.generators + b.generators, a.ctx)


def ideal_product(a: IdealHandle, b: IdealHandle) -> IdealHandle:
    gens = [f * g for f in a.generators for g in b.generators]
    return IdealHandle(_dedup(gens), a.ctx)


def ideal_power(a: IdealHandle, n: int) -> IdealHandle:
    """Generated by all degree-n products of the generators."""
    if n < 1:
        raise ValueError("power must be >= 1")
    gens = []
    for combo in combinations_with_replacement(a.generators, n):
        p = combo[0]
        for q in combo[1:]:
            p = p * q
        gens.append(p)
    return IdealHandle(_dedup(gens), a.ctx)


def _dedup(polys):
    seen = set()
    out = []
    for p in polys:
        if p.is_zero():
            continue
        key = p.canonical()
        if key not in seen:
            seen.add(key)
            out.append(p)
    return out


# ---------------------------------------------------------------------------
# Truncated spans
# ---------------------------------------------------------------------------

def _shift_ops(nvars, N):
    """Multiplication-by-x_i maps on degrevlex monomial keys, truncated."""
    ops = []
    for i in range(nvars):
        def op(key, i=i):
            deg, negrev = key
            if deg + 1 > N:
                return None
            m = list(key_mono(key))
            m[i] += 1
            return mono_key(tuple(m))
        ops.append(op)
    return ops


def span_echelon(gens, ctx, N) -> SparseEchelon:
    """Sparse echelon basis of the image of (gens) in R/m^(N+1)."""
    ech = SparseEchelon(ctx.field)
    seeds = []
    for g in gens:
        v = g.truncate(N).vec()
        if v:
            seeds.append(v)
    variable_closure(ech, seeds, _shift_ops(ctx.nvars, N))
    return ech


def truncated_span(I: IdealHandle, N) -> Subspace:
    """Exact image of I in R_N as a dense subspace of k^C(N+v,v)."""
    I.maximal_check()
    ctx = I.ctx
    ech = span_echelon(I.generators, ctx, N)
    idx = ctx.basis_index(N)
    size = ctx.basis_size(N)
    rows = []
    for row in ech.rows.values():
        v = [ctx.field.zero] * size
        for k, c in row.items():
            v[idx[key_mono(k)]] = c
        rows.append(v)
    return Subspace.from_rows(ctx.field, size, rows)


def span_contains(outer: SparseEchelon, inner: SparseEchelon) -> bool:
    return all(outer.member(row) for row in inner.rows.values())


def span_equal(a: SparseEchelon, b: SparseEchelon) -> bool:
    return a.rank == b.rank and span_contains(a, b)


def ideal_span_leq(a: IdealHandle, b: IdealHandle, N) -> bool:
    """Containment of truncated images: a <= b in R/m^(N+1)."""
    eb = span_echelon(b.generators, b.ctx, N)
    return all(eb.member(g.truncate(N).vec()) for g in a.generators)


def ideal_span_eq(a: IdealHandle, b: IdealHandle, N) -> bool:
    return ideal_span_leq(a, b, N) and ideal_span_leq(b, a, N)


# ---------------------------------------------------------------------------
# Invariants
# ---------------------------------------------------------------------------

def colength(I: IdealHandle, cap=DEFAULT_COLENGTH_CAP):
    """Length of R/I, exact, with the certified witness degree.

    Finds the least s <= cap with m^s contained in I + m^(s+1); by
    completeness m^s is then inside I and dim R_s / span(I) is the exact
    length.  Raises NotArtinianWithinCap when no witness exists below cap.
    """
    if I.is_unit:
        return 0, 0
    ctx = I.ctx
    for s in range(1, cap + 1):
        ech = span_echelon(I.generators, ctx, s)
        if _covers_degree(ech, ctx, s):
            return ctx.basis_size(s) - ech.rank, s
    raise NotArtinianWithinCap(
        "no witness degree <= %d; ideal is (or appears) not m-primary" % cap)


def _covers_degree(ech, ctx, s):
    one = ctx.field.one
    for m in ctx.monomials(s, min_degree=s):
        k = mono_key(m)
        row = ech.rows.get(k)
        if row is not None and len(row) == 1:
            continue
        if not ech.member({k: one}):
            return False
    return True


def min_generators(I: IdealHandle, cap=40):
    """Minimal generator count and representatives among the given ones.

    mu = dim I/mI computed from truncated spans at increasing N until two
    consecutive truncations agree; the representatives are the (first, in
    the given order) generators whose images form a basis of I/mI.
    """
    I.maximal_check()
    ctx = I.ctx
    if not I.generators:
        return 0, []
    start = max(g.degree() for g in I.generators) + 1
    prev = None
    for N in range(start, cap + 1):
        mu = _mu_at(I, N)
        if prev is not None and mu == prev:
            return mu, _representatives(I, N, mu)
        prev = mu
    raise StabilizationCapExceeded("mu did not stabilize below N = %d" % cap)


def _mu_at(I, N):
    ctx = I.ctx
    full = span_echelon(I.generators, ctx, N)
    mI = [ctx.var(i) * g for i in range(ctx.nvars) for g in I.generators]
    sub = span_echelon(mI, ctx, N)
    return full.rank - sub.rank


def _representatives(I, N, mu):
    ctx = I.ctx
    mI = [ctx.var(i) * g for i in range(ctx.nvars) for g in I.generators]
    ech = span_echelon(mI, ctx, N)
    reps = []
    for g in I.generators:
        if ech.insert(g.truncate(N).vec()) is not None:
            reps.append(g)
    assert len(reps) == mu, "representative count %d != mu %d" % (len(reps), mu)
    return reps


@dataclass
class MembershipVerdict:
    status: str  # NotMember | MemberUpTo | MemberExact
    witness: int

    def __bool__(self):
        return self.status != "NotMember"


def membership(g: Polynomial, I: IdealHandle, N) -> MembershipVerdict:
    """Three-valued membership verdict modulo m^(N+1).

    NotMember is a sound refutation; MemberExact is certified by
    cofiniteness (m^s <= I with s <= N) or by g literally appearing among
    the generators up to a scalar; MemberUpTo is the honest remainder.
    """
    if I.is_unit:
        return MembershipVerdict("MemberExact", 0)
    ctx = I.ctx
    for h in I.generators:
        if _scalar_multiple(g, h):
            return MembershipVerdict("MemberExact", g.degree())
    ech = span_echelon(I.generators, ctx, N)
    if not ech.member(g.truncate(N).vec()):
        return MembershipVerdict("NotMember", N)
    try:
        _, s = colength(I, cap=N)
    except NotArtinianWithinCap:
        return MembershipVerdict("MemberUpTo", N)
    return MembershipVerdict("MemberExact", s)


def _scalar_multiple(g, h):
    if g.terms.keys() != h.terms.keys() or g.is_zero():
        return False
    F = g.field
    items = iter(g.terms.items())
    m0, c0 = next(items)
    ratio = F.mul(c0, F.inv(h.terms[m0]))
    return all(c == F.mul(ratio, h.terms[m]) for m, c in g.terms.items())


def hs_dimension(I: IdealHandle, horizon=DEFAULT_GROWTH_HORIZON, window=None):
    """dim R/I from the Hilbert-Samuel growth of l(R/(I + m^n))."""
    from .growth import DEFAULT_WINDOW
    window = DEFAULT_WINDOW if window is None else window
    ctx = I.ctx
    if I.is_unit:
        raise ValueError("unit ideal has empty quotient")
    seq = []
    for n in range(1, horizon + 1):
        mn = [Polynomial(ctx.nvars, ctx.field, {m: 1})
              for m in ctx.monomials(n, min_degree=n)]
        length, _ = colength(IdealHandle(I.generators + mn, ctx), cap=n)
        seq.append(length)
    report = growth_degree(seq, window=window)
    if report.degree is None:
        raise NotArtinianWithinCap("Hilbert-Samuel growth degree undetermined "
                                   "at horizon %d" % horizon)
    return report.degree, report


def analytic_spread(a: IdealHandle, horizon=DEFAULT_GROWTH_HORIZON, window=None):
    """1 + growth degree of n -> mu(a^n)."""
    from .growth import DEFAULT_WINDOW
    window = DEFAULT_WINDOW if window is None else window
    a.maximal_check()
    mus = []
    for n in range(1, horizon + 1):
        mu, _ = min_generators(ideal_power(a, n))
        mus.append(mu)
    report = growth_degree(mus, window=window)
    if report.degree is None:
        raise StabilizationCapExceeded("mu growth degree undetermined")
    return report.degree + 1, report


def equimultiple_check(a: IdealHandle, horizon=DEFAULT_GROWTH_HORIZON):
    """(is_equimultiple, height, spread) over the regular truncated ambient."""
    dim_quotient, _ = hs_dimension(a, horizon=horizon)
    height = a.ctx.nvars - dim_quotient
    spread, _ = analytic_spread(a, horizon=horizon)
    return height == spread, height, spread


@dataclass
class ArtinReesReport:
    n: int
    truncation: int
    status: str  # HoldsUpTo | FailsWithWitness
    witness: Polynomial | None = None
    caveat: bool = False


def artin_rees_condition(b: IdealHandle, a: IdealHandle, n, N) -> ArtinReesReport:
    """Check b intersect a^n <= m a^n at truncation N.

    The intersection is computed on truncated spans, which over-approximates
    the image of the true intersection: the Holds verdict is therefore a
    sound verification modulo m^(N+1), and a Fails verdict is only issued
    with a fully certified witness element.
    """
    ctx = b.ctx
    an = ideal_power(a, n)
    Sb = truncated_span(b, N)
    San = truncated_span(an, N)
    from .exactlinalg import subspace_intersect
    S1 = subspace_intersect(Sb, San)
    man = ideal_product(maximal_ideal(ctx), an)
    ech2 = span_echelon(man.generators, ctx, N)
    monos = ctx.monomials(N)
    offenders = []
    for row in S1.basis.entries:
        vec = {mono_key(m): c for m, c in zip(monos, row) if c}
        if not ech2.member(vec):
            offenders.append(poly_from_vec(ctx.nvars, ctx.field, vec))
    if not offenders:
        return ArtinReesReport(n, N, "HoldsUpTo")
    for g in offenders:
        in_b = membership(g, b, N)
        in_an = membership(g, an, N)
        if in_b.status == "MemberExact" and in_an.status == "MemberExact":
            return ArtinReesReport(n, N, "FailsWithWitness", witness=g)
    return ArtinReesReport(n, N, "HoldsUpTo", caveat=True)
