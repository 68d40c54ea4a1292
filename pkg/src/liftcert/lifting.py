"""Lifting systems: block presentations phi_n, Fitting sequences, lifts.

A lifting system packages a base presentation matrix phi over R, an ideal
a with chosen generators g_1..g_d, and a perturbation schedule of matrices
sigma_{j,k} whose entries lie in a^(j-1).  Level n of the system is

    phi_n = ( phi + sum_{j<n} sigma_j | A_n-blocks ),

where sigma_j = sum_k sigma_{j,k} * g_k and A_n is the deterministic row
of minimal generators of a^n, repeated once per row of phi.  M_n denotes
coker(phi_n).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .fitting import (ModuleVectorSpace, PresentedModule, fitting_ideal,
                      minimal_presentation, module_length,
                      realize_vector_space)
from .growth import GrowthReport, growth_degree
from .ideals import (IdealHandle, colength, hs_dimension, ideal_power,
                     ideal_span_eq, membership, min_generators)
from .localring import Polynomial, RingContext, mul_trunc


class ScheduleHorizonExceeded(ValueError):
    pass


def _zero_matrix(rows, cols, ctx):
    z = Polynomial.zero(ctx.nvars, ctx.field)
    return [[z for _ in range(cols)] for _ in range(rows)]


@dataclass
class PerturbationSchedule:
    """sigma[j][k] for j = 1..horizon, k over the chosen generators of a."""

    ctx: RingContext
    sigma: dict = field(default_factory=dict)  # j -> list of matrices

    @classmethod
    def zero(cls, ctx, horizon=0):
        return cls(ctx, {})

    @property
    def horizon(self):
        return max(self.sigma, default=0)

    def blocks(self, j):
        return self.sigma.get(j, [])

    def sigma_j(self, j, a_gens, shape):
        """sigma_j = sum_k sigma_{j,k} * g_k as a polynomial matrix."""
        rows, cols = shape
        ctx = self.ctx
        out = _zero_matrix(rows, cols, ctx)
        for k, mat in enumerate(self.blocks(j)):
            g = a_gens[k]
            for r in range(rows):
                for c in range(cols):
                    if not mat[r][c].is_zero():
                        out[r][c] = out[r][c] + mul_trunc(mat[r][c], g, ctx)
        return out


@dataclass
class LiftingSystem:
    ctx: RingContext
    a: IdealHandle
    phi: PresentedModule
    schedule: PerturbationSchedule
    horizon: int

    @property
    def shape(self):
        return (self.phi.mu0, self.phi.ncols)

    def perturbed_phi(self, n):
        """phi + sum_{j=1}^{n-1} sigma_j as a polynomial matrix."""
        mat = [row[:] for row in self.phi.matrix]
        for j in range(1, n):
            sj = self.schedule.sigma_j(j, self.a.generators, self.shape)
            for r in range(self.phi.mu0):
                for c in range(self.phi.ncols):
                    mat[r][c] = mat[r][c] + sj[r][c]
        return mat


@dataclass
class AssociatedLiftTruncation:
    module: PresentedModule
    J: int
    N: int


def an_row(a: IdealHandle, n, cap=None):
    """Deterministic minimal-generator representatives of a^n."""
    from .ideals import DEFAULT_COLENGTH_CAP
    power = ideal_power(a, n)
    _, reps = min_generators(power, cap=cap or DEFAULT_COLENGTH_CAP)
    return reps


def build_phi_n(sys: LiftingSystem, n) -> PresentedModule:
    if not 1 <= n <= sys.horizon + 1:
        raise ScheduleHorizonExceeded(
            "n=%d outside schedule horizon %d" % (n, sys.horizon))
    ctx = sys.ctx
    mat = sys.perturbed_phi(n)
    mu0 = sys.phi.mu0
    z = Polynomial.zero(ctx.nvars, ctx.field)
    for g in an_row(sys.a, n):
        for r in range(mu0):
            for rr in range(mu0):
                mat[rr].append(g if rr == r else z)
    return PresentedModule(ctx, mat)


@dataclass
class ScheduleReport:
    valid: bool
    flagged: list  # (j, k, row, col, reason)

    def summary(self):
        if self.valid and not self.flagged:
            return "schedule valid"
        return "schedule issues: " + "; ".join(
            "j=%d k=%d (%d,%d): %s" % f for f in self.flagged)


def validate_schedule(sys: LiftingSystem, N=None) -> ScheduleReport:
    """Certify sigma_{j,k} entries in a^(j-1) and flag a^(j+1) slippage."""
    ctx = sys.ctx
    N = ctx.truncation_degree if N is None else N
    flagged = []
    valid = True
    for j in sorted(sys.schedule.sigma):
        blocks = sys.schedule.blocks(j)
        for k, mat in enumerate(blocks):
            lower = ideal_power(sys.a, j - 1) if j > 1 else None
            for r, row in enumerate(mat):
                for c, p in enumerate(row):
                    if p.is_zero():
                        continue
                    if lower is not None:
                        verdict = membership(p, lower, N)
                        if verdict.status == "NotMember":
                            valid = False
                            flagged.append((j, k, r, c,
                                            "entry not in a^%d" % (j - 1)))
        # full sigma_j entries should avoid a^(j+1)
        sj = sys.schedule.sigma_j(j, sys.a.generators, sys.shape)
        upper = ideal_power(sys.a, j + 1)
        for r, row in enumerate(sj):
            for c, p in enumerate(row):
                if p.is_zero():
                    continue
                verdict = membership(p, upper, N)
                if verdict.status != "NotMember":
                    flagged.append((j, 0, r, c,
                                    "sigma_%d entry possibly in a^%d"
                                    % (j, j + 1)))
    return ScheduleReport(valid, flagged)


def fitting_sequence(sys: LiftingSystem, n_max, colength_cap=None):
    """[(I_n, colength(I_n))] for n = 1..n_max, I_n = Fitt_0(M_n)."""
    from .ideals import DEFAULT_COLENGTH_CAP
    cap = colength_cap or DEFAULT_COLENGTH_CAP
    out = []
    for n in range(1, n_max + 1):
        Mn = build_phi_n(sys, n)
        In = fitting_ideal(Mn, 0)
        length, _ = colength(In, cap=cap)
        out.append((In, length))
    return out


@dataclass
class LiftableDimReport:
    lengths: list
    growth: GrowthReport
    dim_r: int
    dim_s: int
    criterion_met: bool
    stamp: str


def liftable_dim_certificate(sys: LiftingSystem, n_max, colength_cap=None,
                             window=None) -> LiftableDimReport:
    """Growth degree of ell(R/I_n) versus the codimension dim R - dim S."""
    seq = fitting_sequence(sys, n_max, colength_cap=colength_cap)
    lengths = [l for _, l in seq]
    from .growth import DEFAULT_WINDOW
    if window is None:
        window = max(2, min(DEFAULT_WINDOW, len(lengths) - 3))
    growth = growth_degree(lengths, window=window)
    dim_r = sys.ctx.nvars
    dim_s, _ = hs_dimension(sys.a)
    met = growth.degree is not None and growth.degree == dim_r - dim_s
    stamp = "SERRE-LIFT-CRITERION-MET" if met else "CRITERION-NOT-CONFIRMED"
    return LiftableDimReport(lengths, growth, dim_r, dim_s, met, stamp)


def associated_lift(sys: LiftingSystem, J, N=None) -> AssociatedLiftTruncation:
    if J > sys.horizon:
        raise ScheduleHorizonExceeded("J=%d beyond horizon %d"
                                      % (J, sys.horizon))
    ctx = sys.ctx
    N = ctx.truncation_degree if N is None else N
    mat = sys.perturbed_phi(J + 1)
    return AssociatedLiftTruncation(PresentedModule(ctx, mat), J, N)


def system_from_module(L: PresentedModule, a: IdealHandle, n_max) -> LiftingSystem:
    """Canonical zero-schedule system {L / a^n L}."""
    sys = LiftingSystem(L.ctx, a, L, PerturbationSchedule.zero(L.ctx), n_max)
    M1 = build_phi_n(sys, 1)
    module_length(M1)  # raises NotFiniteLength if L/aL is not Artinian
    return sys


@dataclass
class SystemReport:
    mu_values: list
    mu_constant: bool
    quotient_consistent: bool
    annihilation_ok: bool

    @property
    def all_ok(self):
        return self.mu_constant and self.quotient_consistent \
            and self.annihilation_ok


def verify_system_invariants(sys: LiftingSystem, n, N=None) -> SystemReport:
    """Invariant-level checks at levels 1..n (needs n+1 <= horizon+1)."""
    ctx = sys.ctx
    N = ctx.truncation_degree if N is None else N
    mus = []
    modules = {}
    for m in range(1, n + 2):
        Mm = build_phi_n(sys, m)
        modules[m] = Mm
        _, mu = minimal_presentation(Mm)
        mus.append(mu)
    mu_constant = len(set(mus)) == 1

    # M_{n+1} augmented with A_n blocks should match phi_n at the
    # invariant level (length, mu, Fitting ideals as truncated spans).
    Mn, Mn1 = modules[n], modules[n + 1]
    blocks = []
    z = Polynomial.zero(ctx.nvars, ctx.field)
    for g in an_row(sys.a, n):
        for r in range(Mn1.mu0):
            blocks.append([g if rr == r else z for rr in range(Mn1.mu0)])
    aug = Mn1.augment(list(map(list, zip(*blocks)))) if blocks else Mn1
    quotient_ok = (module_length(aug)[0] == module_length(Mn)[0]
                   and minimal_presentation(aug)[1]
                   == minimal_presentation(Mn)[1])
    if quotient_ok:
        for i in range(Mn.mu0 + 1):
            fa = fitting_ideal(aug, i)
            fb = fitting_ideal(Mn, i)
            if not ideal_span_eq(fa, fb, N):
                quotient_ok = False
                break

    V = realize_vector_space(Mn)
    ann_ok = all(V.annihilates(g)
                 for g in ideal_power(sys.a, n).generators)
    return SystemReport(mus, mu_constant, quotient_ok, ann_ok)


# ---------------------------------------------------------------------------
# Bundled example systems
# ---------------------------------------------------------------------------

def alternating_perturbation_system(field, trunc, horizon):
    """System over k[[x,y,z]] with a = (x^2,y^2), base [[z,y],[y,z]].

    The schedule puts x^(2j) in the (1,2) slot for odd j and in the (2,1)
    slot for even j; sigma_{j,1} carries x^(2j-2) so that
    sigma_j = sigma_{j,1} * x^2.
    """
    ctx = RingContext(("x", "y", "z"), field, trunc)
    a = IdealHandle.from_strings(["x^2", "y^2"], ctx)
    phi = PresentedModule.from_strings([["z", "y"], ["y", "z"]], ctx)
    z = Polynomial.zero(ctx.nvars, ctx.field)
    sigma = {}
    for j in range(1, horizon + 1):
        xe = Polynomial(ctx.nvars, field, {(2 * j - 2, 0, 0): field.one}) \
            if 2 * j - 2 <= trunc else z
        m = [[z, xe], [z, z]] if j % 2 == 1 else [[z, z], [xe, z]]
        sigma[j] = [m, [[z, z], [z, z]]]
    return LiftingSystem(ctx, a, phi, PerturbationSchedule(ctx, sigma),
                         horizon)


def extension_family_context(d, field, trunc):
    names = tuple("x%d" % i for i in range(1, d + 1)) + \
        tuple("y%d" % i for i in range(1, d + 1))
    return RingContext(names, field, trunc)


def extension_family_phi(ctx, d):
    """2 x 2d base matrix [[0..0, x_i^(d-1)..], [y_i^(d-1).., f_i..]]."""
    field = ctx.field
    nv = ctx.nvars

    def mono(exps):
        e = [0] * nv
        for i, k in exps:
            e[i] += k
        return Polynomial(nv, field, {tuple(e): field.one})

    zero = Polynomial.zero(nv, field)
    top = [zero] * d + [mono([(i, d - 1)]) for i in range(d)]
    bot = [mono([(d + i, d - 1)]) for i in range(d)] + \
        [mono([(j, 1) for j in range(d) if j != i]) for i in range(d)]
    return PresentedModule(ctx, [top, bot])


def extension_family_system(d, field, trunc, horizon, schedule=None):
    """System for the extension module of the 2d-variable family.

    Ambient k[[x_1..x_d, y_1..y_d]], a = (x_i^d + y_i^d), base phi the
    2 x 2d matrix of extension_family_phi; zero schedule by default.
    """
    ctx = extension_family_context(d, field, trunc)
    nv = ctx.nvars
    gens = []
    for i in range(d):
        e1 = [0] * nv
        e1[i] = d
        e2 = [0] * nv
        e2[d + i] = d
        gens.append(Polynomial(nv, field,
                               {tuple(e1): field.one, tuple(e2): field.one}))
    a = IdealHandle(gens, ctx)
    phi = extension_family_phi(ctx, d)
    sched = schedule if schedule is not None \
        else PerturbationSchedule.zero(ctx)
    return LiftingSystem(ctx, a, phi, sched, horizon)
