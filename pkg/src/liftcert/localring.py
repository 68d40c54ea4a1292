"""Sparse multivariate polynomials and the degree-truncated local ring.

The ambient ring k[[x_1..x_v]] is modeled exactly up to a truncation
degree N: R_N = R / m^(N+1) with the monomial basis enumerated in a fixed
deterministic order (ascending total degree, degrevlex inside a degree).
Monomials are exponent tuples; polynomials are dicts of nonzero terms.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from math import comb

from .exactlinalg import FieldConfig


class TruncationOverflow(ValueError):
    pass


class ParseError(ValueError):
    pass


def mono_degree(m):
    return sum(m)


def mono_key(m):
    """Sortable key realizing degrevlex: larger key = larger monomial."""
    return (sum(m), tuple(-e for e in reversed(m)))


def key_mono(key):
    return tuple(-e for e in reversed(key[1]))


def mono_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


class Polynomial:
    """Sparse polynomial; no zero coefficients are stored."""

    __slots__ = ("nvars", "field", "terms")

    def __init__(self, nvars, field, terms=None):
        self.nvars = nvars
        self.field = field
        self.terms = {}
        if terms:
            for m, c in terms.items():
                c = field.of(c)
                if c:
                    self.terms[m] = c

    # -- constructors ------------------------------------------------------
    @classmethod
    def zero(cls, nvars, field):
        return cls(nvars, field)

    @classmethod
    def constant(cls, nvars, field, c):
        return cls(nvars, field, {(0,) * nvars: c})

    @classmethod
    def variable(cls, nvars, field, i, power=1):
        m = [0] * nvars
        m[i] = power
        return cls(nvars, field, {tuple(m): 1})

    # -- simple queries ----------------------------------------------------
    def is_zero(self):
        return not self.terms

    def degree(self):
        return max((sum(m) for m in self.terms), default=-1)

    def min_degree(self):
        return min((sum(m) for m in self.terms), default=-1)

    def constant_term(self):
        return self.terms.get((0,) * self.nvars, self.field.zero)

    def canonical(self):
        """Hashable canonical form (for dedup and equality)."""
        return tuple(sorted(self.terms.items()))

    def __eq__(self, other):
        return (isinstance(other, Polynomial) and self.nvars == other.nvars
                and self.terms == other.terms)

    def __hash__(self):
        return hash(self.canonical())

    # -- arithmetic ---------------------------------------------------------
    def _check(self, other):
        if self.nvars != other.nvars:
            raise ValueError("variable-arity mismatch")

    def __add__(self, other):
        self._check(other)
        F = self.field
        t = dict(self.terms)
        for m, c in other.terms.items():
            nc = F.add(t.get(m, F.zero), c)
            if nc:
                t[m] = nc
            else:
                t.pop(m, None)
        return Polynomial(self.nvars, F, t)

    def __neg__(self):
        F = self.field
        return Polynomial(self.nvars, F, {m: F.neg(c) for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        """Exact (untruncated) product."""
        self._check(other)
        F = self.field
        t = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                nc = F.add(t.get(m, F.zero), F.mul(c1, c2))
                if nc:
                    t[m] = nc
                else:
                    t.pop(m, None)
        return Polynomial(self.nvars, F, t)

    def scale(self, c):
        F = self.field
        c = F.of(c)
        return Polynomial(self.nvars, F, {m: F.mul(c, x) for m, x in self.terms.items()})

    def truncate(self, N):
        return Polynomial(self.nvars, self.field,
                          {m: c for m, c in self.terms.items() if sum(m) <= N})

    # -- conversions ---------------------------------------------------------
    def vec(self):
        """Sparse vector keyed by degrevlex monomial keys."""
        return {mono_key(m): c for m, c in self.terms.items()}

    def format(self, names):
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=mono_key, reverse=True):
            c = self.terms[m]
            factors = ["%s^%d" % (names[i], e) if e > 1 else names[i]
                       for i, e in enumerate(m) if e]
            body = "*".join(factors)
            if not body:
                parts.append(str(c))
            elif c == self.field.one:
                parts.append(body)
            else:
                parts.append("%s*%s" % (c, body))
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return "Polynomial(%r)" % (dict(self.terms),)


def poly_from_vec(nvars, field, vec):
    return Polynomial(nvars, field, {key_mono(k): c for k, c in vec.items()})


@dataclass(frozen=True)
class RingContext:
    """Truncated model of k[[x_1..x_v]]: immutable, shareable."""

    variable_names: tuple
    field: FieldConfig
    truncation_degree: int

    def __post_init__(self):
        if self.truncation_degree < 1:
            raise ValueError("truncation degree must be >= 1")
        if len(set(self.variable_names)) != len(self.variable_names):
            raise ValueError("duplicate variable names")

    @property
    def nvars(self):
        return len(self.variable_names)

    def with_truncation(self, N):
        return RingContext(self.variable_names, self.field, N)

    def basis_size(self, N=None):
        N = self.truncation_degree if N is None else N
        return comb(N + self.nvars, self.nvars)

    def monomials(self, N=None, min_degree=0):
        """Monomials of degree in [min_degree, N], in basis order."""
        N = self.truncation_degree if N is None else N
        return _monomials(self.nvars, N, min_degree)

    def basis_index(self, N=None):
        """Monomial -> position map for the fixed basis order."""
        N = self.truncation_degree if N is None else N
        return _basis_index(self.nvars, N)

    # -- element helpers -----------------------------------------------------
    def zero(self):
        return Polynomial.zero(self.nvars, self.field)

    def one(self):
        return Polynomial.constant(self.nvars, self.field, 1)

    def var(self, name_or_index, power=1):
        i = (name_or_index if isinstance(name_or_index, int)
             else self.variable_names.index(name_or_index))
        return Polynomial.variable(self.nvars, self.field, i, power)

    def maximal_ideal_gens(self):
        return [self.var(i) for i in range(self.nvars)]


@lru_cache(maxsize=None)
def _monomials(nvars, N, min_degree):
    def gen(prefix, remaining, slots, acc):
        if slots == 1:
            acc.append(prefix + (remaining,))
            return
        for e in range(remaining + 1):
            gen(prefix + (e,), remaining - e, slots - 1, acc)

    out = []
    for d in range(min_degree, N + 1):
        level = []
        gen((), d, nvars, level)
        level.sort(key=mono_key)
        out.extend(level)
    return tuple(out)


@lru_cache(maxsize=None)
def _basis_index(nvars, N):
    return {m: i for i, m in enumerate(_monomials(nvars, N, 0))}


def mul_trunc(p: Polynomial, q: Polynomial, ctx: RingContext) -> Polynomial:
    """Product in R_N: terms of degree > N are discarded."""
    if p.nvars != ctx.nvars or q.nvars != ctx.nvars:
        raise ValueError("variable-arity mismatch")
    F = ctx.field
    N = ctx.truncation_degree
    t = {}
    for m1, c1 in p.terms.items():
        d1 = sum(m1)
        if d1 > N:
            continue
        for m2, c2 in q.terms.items():
            if d1 + sum(m2) > N:
                continue
            m = mono_mul(m1, m2)
            nc = F.add(t.get(m, F.zero), F.mul(c1, c2))
            if nc:
                t[m] = nc
            else:
                t.pop(m, None)
    return Polynomial(ctx.nvars, F, t)


def to_vector(p: Polynomial, ctx: RingContext):
    """Coefficient vector of p in the fixed basis of R_N."""
    if p.degree() > ctx.truncation_degree:
        raise TruncationOverflow("degree %d exceeds truncation %d"
                                 % (p.degree(), ctx.truncation_degree))
    idx = ctx.basis_index()
    v = [ctx.field.zero] * ctx.basis_size()
    for m, c in p.terms.items():
        v[idx[m]] = c
    return v

def from_vector(v, ctx: RingContext) -> Polynomial:
    monos = ctx.monomials()
    if len(v) != len(monos):
        raise ValueError("vector length %d != basis size %d" % (len(v), len(monos)))
    return Polynomial(ctx.nvars, ctx.field,
                      {m: c for m, c in zip(monos, v) if ctx.field.of(c)})


_TOKEN = re.compile(r"\s*([A-Za-z_][A-Za-z_0-9]*|\d+|\^|\*|\+|-)")


def parse_poly(s: str, ctx: RingContext) -> Polynomial:
    """Parse the scenario polynomial grammar.

    Terms are separated by + / -; a term is an optional integer
    coefficient and *-separated variable powers name^k (k >= 1, ^1
    optional).  Whitespace is ignored.
    """
    tokens = []
    pos = 0
    while pos < len(s):
        m = _TOKEN.match(s, pos)
        if m is None:
            if s[pos:].strip():
                raise ParseError("syntax error at position %d: %r" % (pos, s[pos:]))
            break
        tokens.append((m.group(1), pos))
        pos = m.end()

    names = {n: i for i, n in enumerate(ctx.variable_names)}
    result = ctx.zero()
    i = 0
    n = len(tokens)
    sign = 1
    expect_term = True
    while i < n:
        tok, at = tokens[i]
        if tok in "+-":
            if expect_term and tok == "-":
                sign = -sign
                i += 1
                continue
            if expect_term:
                i += 1
                continue
            sign = 1 if tok == "+" else -1
            expect_term = True
            i += 1
            continue
        # parse one term
        coeff = 1
        mono = [0] * ctx.nvars
        saw_factor = False
        while i < n:
            tok, at = tokens[i]
            if tok.isdigit():
                coeff *= int(tok)
                saw_factor = True
                i += 1
            elif tok not in ("+", "-", "*", "^"):
                if tok not in names:
                    raise ParseError("unknown variable %r at position %d" % (tok, at))
                vi = names[tok]
                power = 1
                i += 1
                if i < n and tokens[i][0] == "^":
                    i += 1
                    if i >= n or not tokens[i][0].isdigit():
                        raise ParseError("expected exponent at position %d" % at)
                    power = int(tokens[i][0])
                    if power < 1:
                        raise ParseError("exponent must be >= 1 at position %d" % at)
                    i += 1
                mono[vi] += power
                saw_factor = True
            elif tok == "*":
                i += 1
                if i >= n or tokens[i][0] in ("+", "-", "*", "^"):
                    raise ParseError("expected factor after '*' at position %d" % at)
            else:
                break
        if not saw_factor:
            raise ParseError("empty term at position %d" % at)
        term = Polynomial(ctx.nvars, ctx.field, {tuple(mono): sign * coeff})
        result = result + term
        expect_term = False
    if expect_term and n:
        raise ParseError("trailing operator")
    return result
