"""Tests for ideal invariants, cross-checked against staircase oracles."""

import random

import pytest

from liftcert.exactlinalg import FieldConfig
from liftcert.ideals import (
    IdealHandle,
    NotArtinianWithinCap,
    analytic_spread,
    artin_rees_condition,
    colength,
    equimultiple_check,
    hs_dimension,
    ideal_power,
    ideal_span_eq,
    ideal_sum,
    maximal_ideal,
    membership,
    min_generators,
)
from liftcert.localring import RingContext, parse_poly

from oracle_utils import power_exps, staircase_colength


F = FieldConfig(32003)


def ctx2(N=14):
    return RingContext(("x", "y"), F, N)


def ctx3(N=10):
    return RingContext(("x", "y", "z"), F, N)


def mono_ideal(ctx, exps):
    gens = []
    for e in exps:
        s = "*".join("%s^%d" % (n, k) for n, k in zip(ctx.variable_names, e)
                     if k) or "1"
        gens.append(parse_poly(s, ctx))
    return IdealHandle(gens, ctx)


def test_colength_staircase_oracle():
    ctx = ctx2()
    cases = [
        [(2, 0), (0, 2)],
        [(3, 0), (1, 1), (0, 3)],
        [(4, 0), (2, 1), (0, 2)],
        [(5, 0), (0, 1)],
    ]
    for exps in cases:
        ell, _ = colength(mono_ideal(ctx, exps))
        assert ell == staircase_colength(exps), exps


def test_colength_powers_match_oracle():
    ctx = ctx2(N=16)
    exps = [(2, 0), (0, 2)]
    I = mono_ideal(ctx, exps)
    for n in range(1, 5):
        ell, _ = colength(ideal_power(I, n))
        assert ell == staircase_colength(power_exps(exps, n)), n


def test_colength_random_monomial_ideals():
    rng = random.Random(7)
    ctx = ctx2(N=12)
    for _ in range(15):
        a = rng.randint(1, 4)
        b = rng.randint(1, 4)
        exps = [(a, 0), (0, b)]
        if rng.random() < 0.5:
            exps.append((rng.randint(1, a), rng.randint(1, b)))
        ell, _ = colength(mono_ideal(ctx, exps))
        assert ell == staircase_colength(exps)


def test_colength_nonmonomial():
    # (x^2 - y^3, y^4): change of monomial leading terms, length 8.
    ctx = ctx2()
    I = IdealHandle.from_strings(["x^2 - y^3", "y^4"], ctx)
    ell, _ = colength(I)
    assert ell == 8


def test_not_artinian_raises():
    ctx = ctx2()
    I = IdealHandle.from_strings(["x^2"], ctx)
    with pytest.raises(NotArtinianWithinCap):
        colength(I, cap=8)


def test_min_generators():
    ctx = ctx3()
    I = IdealHandle.from_strings(["x^2", "y^2", "x^2 + y^2"], ctx)
    mu, reps = min_generators(I)
    assert mu == 2
    assert ideal_span_eq(IdealHandle(reps, ctx), I, ctx.truncation_degree)
    m = maximal_ideal(ctx)
    assert min_generators(m)[0] == 3
    assert min_generators(ideal_power(m, 2))[0] == 6


def test_membership():
    ctx = ctx2()
    I = IdealHandle.from_strings(["x^2", "y^2"], ctx)
    assert membership(parse_poly("x^2 + 3*y^2", ctx), I, 8).status == "MemberExact"
    assert membership(parse_poly("x*y", ctx), I, 8).status == "NotMember"
    # A truncation-level zero is only membership up to the cutoff.
    ctxs = ctx2(N=3)
    Is = IdealHandle.from_strings(["x^2", "y^2"], ctxs)
    v = membership(parse_poly("x^2*y^2", ctxs).truncate(3), Is, 3)
    assert v.status in ("MemberExact", "MemberUpTo")


def test_hs_dimension():
    # hs_dimension(I) is the Krull dimension of the quotient R/I.
    ctx = ctx2()
    assert hs_dimension(maximal_ideal(ctx))[0] == 0
    assert hs_dimension(IdealHandle.from_strings(["x^2", "y^2"], ctx))[0] == 0
    assert hs_dimension(IdealHandle([], ctx))[0] == 2
    assert hs_dimension(IdealHandle.from_strings(["x"], ctx))[0] == 1
    ctx3_ = ctx3(N=9)
    assert hs_dimension(IdealHandle.from_strings(["x^2", "y^2"], ctx3_),
                        horizon=8)[0] == 1


def test_analytic_spread():
    ctx = ctx3(N=9)
    a = IdealHandle.from_strings(["x", "y"], ctx)
    spread, _ = analytic_spread(a, horizon=8)
    assert spread == 2
    b = IdealHandle.from_strings(["x"], ctx)
    spread, _ = analytic_spread(b, horizon=8)
    assert spread == 1


def test_equimultiple():
    ctx = ctx3(N=9)
    a = IdealHandle.from_strings(["x", "y"], ctx)
    ok, height, spread = equimultiple_check(a, horizon=8)
    assert ok and height == 2 and spread == 2


def test_artin_rees_holds():
    ctx = ctx3(N=8)
    a = IdealHandle.from_strings(["x", "y"], ctx)
    b = IdealHandle.from_strings(["z + x"], ctx)
    for n in (2, 3):
        rep = artin_rees_condition(b, a, n, 8)
        assert rep.status == "HoldsUpTo", (n, rep.status)


def test_artin_rees_fails_with_witness():
    ctx = ctx3(N=8)
    a = IdealHandle.from_strings(["x", "y"], ctx)
    b = IdealHandle.from_strings(["x"], ctx)
    rep = artin_rees_condition(b, a, 1, 8)
    assert rep.status == "FailsWithWitness"
    assert rep.witness is not None
    w = rep.witness
    assert membership(w, b, 8).status == "MemberExact"
    assert membership(w, a, 8).status == "MemberExact"


def test_ideal_sum_and_span():
    ctx = ctx2()
    I = IdealHandle.from_strings(["x^2"], ctx)
    J = IdealHandle.from_strings(["y^2"], ctx)
    K = IdealHandle.from_strings(["x^2 + y^2", "x^2 - y^2"], ctx)
    assert ideal_span_eq(ideal_sum(I, J), K, 10)
