"""Tests for Koszul homology, Tor inverse systems, and depth certificates."""

from math import comb

import pytest

from liftcert.exactlinalg import FieldConfig
from liftcert.fitting import PresentedModule, module_length, realize_vector_space
from liftcert.ideals import IdealHandle
from liftcert.koszul import (
    KoszulComplexOnModule,
    depth_certificate_auslander,
    depth_certificate_determinant,
    eta_witness,
    homology_quotient,
    koszul_homology,
    realize_levels,
    regular_sequence_certificate,
    tor_inverse_system,
)
from liftcert.lifting import (
    alternating_perturbation_system,
    build_phi_n,
    extension_family_system,
)
from liftcert.localring import RingContext, parse_poly


F = FieldConfig(32003)


def residue_field_module(ctx):
    return PresentedModule(ctx, [list(ctx.maximal_ideal_gens())])


def test_koszul_on_residue_field_binomials():
    # All generators act by zero on k, so H_i has dimension C(d, i).
    for d, names in [(2, ("x", "y")), (3, ("x", "y", "z"))]:
        ctx = RingContext(names, F, 6)
        V = realize_vector_space(residue_field_module(ctx))
        gens = [parse_poly("%s^2" % n, ctx) for n in names]
        K = KoszulComplexOnModule(gens, V)
        for i in range(d + 1):
            assert K.homology_dim(i) == comb(d, i), (d, i)


def test_h0_is_quotient_length():
    ctx = RingContext(("x", "y"), F, 10)
    M = PresentedModule.from_strings([["x^3", "y^4"]], ctx)
    gens = [parse_poly("y^2", ctx)]
    dim0, _ = koszul_homology(gens, M, 0)
    ell, _ = module_length(PresentedModule.from_strings([["x^3", "y^2"]], ctx))
    assert dim0 == ell == 6


def test_euler_characteristic_vanishes():
    ctx = RingContext(("x", "y"), F, 10)
    cases = [
        (PresentedModule.from_strings([["x^3", "y^3"]], ctx),
         [parse_poly("x^2", ctx), parse_poly("y^2", ctx)]),
        (PresentedModule.from_strings([["x^2", "x*y", "y^2"]], ctx),
         [parse_poly("x + y", ctx)]),
    ]
    for M, gens in cases:
        V = realize_vector_space(M)
        K = KoszulComplexOnModule(gens, V)
        chi = sum((-1) ** i * K.homology_dim(i) for i in range(len(gens) + 1))
        assert chi == 0


def test_regular_sequence_certificate():
    ctx = RingContext(("x", "y", "z"), F, 8)
    good = [parse_poly("x^2", ctx), parse_poly("y^2 + z^2", ctx)]
    rep = regular_sequence_certificate(good, ctx, horizon=8)
    assert rep.stamp == "REGULAR"
    bad = [parse_poly("x", ctx), parse_poly("x*y", ctx)]
    rep2 = regular_sequence_certificate(bad, ctx, horizon=8)
    assert rep2.stamp == "UNCERTIFIED"


def test_tor0_constant_across_levels():
    sys = alternating_perturbation_system(F, trunc=12, horizon=4)
    rep = tor_inverse_system(sys, 0, 4, window=2)
    assert len(set(rep.dims)) == 1  # M_n / a M_n is level-independent


def test_tor1_alternating_vanishes_stably():
    sys = alternating_perturbation_system(F, trunc=12, horizon=5)
    rep = tor_inverse_system(sys, 1, 5)
    assert rep.stable_image_dim == 0
    assert rep.stamp == "STABILIZED"
    # Stable image dimensions can only shrink down the tower.
    assert all(a >= b for a, b in zip(rep.composite_dims, rep.composite_dims[1:]))


def test_tor1_extension_family_persists():
    sys = extension_family_system(2, F, trunc=12, horizon=5)
    levels = realize_levels(sys, 5)
    rep = tor_inverse_system(sys, 1, 5, levels=levels)
    assert rep.stable_image_dim == 4
    assert rep.stamp == "STABILIZED"
    wit = eta_witness(sys, 5, levels=levels)
    assert wit.cycle_ok and wit.nonzero_class and wit.compatible
    assert wit.stamp == "UNLIFTABLE-WITNESSED"
    dep = depth_certificate_auslander(sys, 5, levels=levels)
    assert dep.depth == 1
    assert dep.stamp == "UNLIFTABLE"


def test_depth_certificates_alternating():
    sys = alternating_perturbation_system(F, trunc=12, horizon=5)
    dep = depth_certificate_auslander(sys, 5)
    assert dep.depth == 2
    assert dep.stamp == "NO-TOR-OBSTRUCTION"
    ctx = sys.ctx
    Phi = PresentedModule(ctx, sys.perturbed_phi(5))
    det_rep = depth_certificate_determinant(Phi)
    assert det_rep.depth == 2
    assert det_rep.stamp == "DEPTH-EXACT"


def test_determinant_certificate_inconclusive():
    ctx = RingContext(("x", "y", "z"), F, 8)
    Phi = PresentedModule.from_strings([["x", "y"], ["x", "y"]], ctx)
    rep = depth_certificate_determinant(Phi)
    assert rep.stamp == "INCONCLUSIVE"


def test_homology_quotient_class_logic():
    ctx = RingContext(("x", "y"), F, 8)
    V = realize_vector_space(residue_field_module(ctx))
    gens = [parse_poly("x", ctx), parse_poly("y", ctx)]
    K = KoszulComplexOnModule(gens, V)
    H = homology_quotient(K, 1)
    assert H.dim == 2
    for rep_vec in H.reps:
        assert not H.class_is_zero(rep_vec)
