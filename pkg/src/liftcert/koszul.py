"""Koszul complexes on finite-length modules and depth certificates.

Builds Kos(g_1..g_d) tensored with a realized module, computes exact
homology dimensions over k, tracks the inverse system of homologies along
a lifting system (stable images as the computable stand-in for the
inverse limit), constructs explicit nonvanishing degree-1 cycle witnesses
for the extension-family systems, and derives depth bounds.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as _np

from .exactlinalg import (np_kernel, np_matmul, np_rank, np_rref, np_zeros)
from .fitting import ModuleVectorSpace, PresentedModule, realize_vector_space
from .ideals import IdealHandle, hs_dimension
from .lifting import LiftingSystem, build_phi_n, extension_family_phi
from .localring import Polynomial, mul_trunc


class TemplateMismatch(ValueError):
    pass


class WitnessFailure(AssertionError):
    pass


DEFAULT_STABLE_WINDOW = 3


# ---------------------------------------------------------------------------
# Koszul complex
# ---------------------------------------------------------------------------

class KoszulComplexOnModule:
    """Kos(g_1..g_d; V) with basis e_T (sorted subsets) tensor V-basis."""

    def __init__(self, gens, V: ModuleVectorSpace):
        self.gens = list(gens)
        self.V = V
        self.d = len(self.gens)
        self.field = V.ctx.field
        self.subsets = [list(combinations(range(self.d), i))
                        for i in range(self.d + 1)]
        self.actions = [V.action(g) for g in self.gens]
        self._diff = {}
        for i in range(1, self.d + 1):
            self._diff[i] = self._build_differential(i)
        for i in range(1, self.d):
            comp = np_matmul(self.field, self.differential(i),
                             self.differential(i + 1))
            if comp.any() if self.field.p else any(x for x in comp.flat):
                raise AssertionError("Koszul differential does not square "
                                     "to zero")

    def term_dim(self, i):
        if i < 0 or i > self.d:
            return 0
        return len(self.subsets[i]) * self.V.dim

    def _build_differential(self, i):
        F = self.field
        dimv = self.V.dim
        src = self.subsets[i]
        tgt_index = {T: j for j, T in enumerate(self.subsets[i - 1])}
        mat = np_zeros(F, len(self.subsets[i - 1]) * dimv, len(src) * dimv)
        for col_block, T in enumerate(src):
            for pos, t in enumerate(T):
                rest = tuple(x for x in T if x != t)
                row_block = tgt_index[rest]
                sign = 1 if pos % 2 == 0 else -1
                block = self.actions[t] if sign == 1 else \
                    ((-self.actions[t]) % F.p if F.p else -self.actions[t])
                mat[row_block * dimv:(row_block + 1) * dimv,
                    col_block * dimv:(col_block + 1) * dimv] = block
        return mat

    def differential(self, i):
        """The map K_i -> K_{i-1}; zero map outside 1..d."""
        if i in self._diff:
            return self._diff[i]
        return np_zeros(self.field, self.term_dim(i - 1), self.term_dim(i))

    def cycles(self, i):
        """Rows spanning ker(d_i)."""
        if i == 0:
            from .exactlinalg import np_identity
            return np_identity(self.field, self.term_dim(0))
        if i > self.d:
            return np_zeros(self.field, 0, 0)
        return np_kernel(self.field, self.differential(i))

    def boundaries(self, i):
        """Rows spanning im(d_{i+1}) inside K_i."""
        if i >= self.d or i < 0:
            return np_zeros(self.field, 0, self.term_dim(i))
        return self.differential(i + 1).T

    def homology_dim(self, i):
        z = self.cycles(i)
        b = self.boundaries(i)
        return np_rank(self.field, z) - np_rank(self.field, b)


@dataclass
class HomologyQuotient:
    """Homology at a fixed index with explicit class coordinates."""

    field: object
    boundary_red: object  # rref of the boundary rows
    boundary_pivots: list
    reps: object  # homology-basis cycle representatives (rows)

    @property
    def dim(self):
        return self.reps.shape[0]

    def reduce_mod_boundaries(self, vec):
        F = self.field
        v = vec.copy()
        red = self.boundary_red
        for r, c in enumerate(self.boundary_pivots):
            coeff = v[c]
            if coeff:
                v = (v - coeff * red[r]) % F.p if F.p else v - coeff * red[r]
        return v

    def class_coords(self, vec):
        """Coordinates of [vec] in the homology basis; None if not a class
        of a cycle representable here (i.e. the system is inconsistent)."""
        F = self.field
        resid = self.reduce_mod_boundaries(vec)
        reduced_reps = _np.array([self.reduce_mod_boundaries(r)
                                  for r in self.reps]) \
            if self.dim else np_zeros(F, 0, len(vec))
        if self.dim == 0:
            return None if (resid.any() if F.p else
                            any(x for x in resid.flat)) else \
                np_zeros(F, 1, 0)[0]
        aug = _np.concatenate(
            [reduced_reps.T, resid.reshape(-1, 1)], axis=1)
        red, rank, pivots = np_rref(F, aug)
        if (self.dim) in pivots:
            return None
        coeffs = np_zeros(F, 1, self.dim)[0]
        for r, c in enumerate(pivots):
            coeffs[c] = red[r, self.dim]
        return coeffs

    def class_is_zero(self, vec):
        resid = self.reduce_mod_boundaries(vec)
        return not (resid.any() if self.field.p else
                    any(x for x in resid.flat))


def homology_quotient(K: KoszulComplexOnModule, i) -> HomologyQuotient:
    F = K.field
    b = K.boundaries(i)
    red, rank, pivots = np_rref(F, b)
    red = red[:rank]
    z = K.cycles(i)
    reps = []
    have = red.copy()
    have_piv = list(pivots)
    for row in z:
        v = row.copy()
        for r, c in enumerate(have_piv):
            if v[c]:
                v = (v - v[c] * have[r]) % F.p if F.p else v - v[c] * have[r]
        nz = _np.nonzero(v)[0] if F.p else \
            _np.nonzero([bool(x) for x in v])[0]
        if len(nz):
            reps.append(row)
            c = int(nz[0])
            inv = F.inv(int(v[c]) if F.p else v[c])
            v = (v * inv) % F.p if F.p else v * inv
            # keep `have` in echelon form for further independence tests
            k = 0
            while k < len(have_piv) and have_piv[k] < c:
                k += 1
            have = _np.insert(have, k, v, axis=0)
            have_piv.insert(k, c)
    reps = _np.array(reps) if reps else np_zeros(F, 0, K.term_dim(i))
    return HomologyQuotient(F, red, list(pivots), reps)


# ---------------------------------------------------------------------------
# Certificates and reports
# ---------------------------------------------------------------------------

@dataclass
class RegularityReport:
    stamp: str  # REGULAR or UNCERTIFIED
    expected_drop: int
    observed_dim: int

    @property
    def regular(self):
        return self.stamp == "REGULAR"


def regular_sequence_certificate(gens, ctx, horizon=None) -> RegularityReport:
    """Sequence is regular iff dim R/(g) = dim R - d in a regular ambient."""
    for g in gens:
        if g.constant_term():
            raise ValueError("sequence entries must be non-units")
    I = IdealHandle(list(gens), ctx)
    kwargs = {} if horizon is None else {"horizon": horizon}
    dim, _ = hs_dimension(I, **kwargs)
    expected = ctx.nvars - len(gens)
    stamp = "REGULAR" if dim == expected else "UNCERTIFIED"
    return RegularityReport(stamp, expected, dim)


def koszul_homology(gens, M: PresentedModule, i, cap=None):
    """(dim H_i(Kos(g; M)), basis rows); exact over k."""
    kwargs = {} if cap is None else {"cap": cap}
    V = realize_vector_space(M, **kwargs)
    K = KoszulComplexOnModule(gens, V)
    H = homology_quotient(K, i)
    return H.dim, H.reps


@dataclass
class TorReport:
    index: int
    dims: list                 # dim H_i at levels 1..n_max
    induced_ranks: list        # rank of H_i(n+1) -> H_i(n)
    composite_dims: list       # dim im(H_i(n) -> H_i(1)) for n = 2..n_max
    stable_image_dim: int
    stabilized: bool
    stamp: str
    window: int = DEFAULT_STABLE_WINDOW


def _projection_matrix(V_hi: ModuleVectorSpace, V_lo: ModuleVectorSpace):
    """Matrix of the natural surjection coker(hi) -> coker(lo)."""
    F = V_lo.ctx.field
    P = np_zeros(F, V_lo.dim, V_hi.dim)
    for j, key in enumerate(V_hi.basis):
        if key[0] > V_lo.N:
            continue  # class of a monomial beyond the lower truncation is 0
        P[:, j] = V_lo.key_coords(key)
    return P


def _block_diag(field, P, blocks):
    m, n = P.shape
    out = np_zeros(field, m * blocks, n * blocks)
    for b in range(blocks):
        out[b * m:(b + 1) * m, b * n:(b + 1) * n] = P
    return out


def realize_levels(sys: LiftingSystem, n_max, cap=None):
    kwargs = {} if cap is None else {"cap": cap}
    return [realize_vector_space(build_phi_n(sys, n), **kwargs)
            for n in range(1, n_max + 1)]


def tor_inverse_system(sys: LiftingSystem, i, n_max,
                       window=DEFAULT_STABLE_WINDOW, levels=None,
                       cap=None) -> TorReport:
    """Homology inverse system H_i(Kos(g; M_n)) with stable images."""
    F = sys.ctx.field
    gens = sys.a.generators
    if levels is None:
        levels = realize_levels(sys, n_max, cap=cap)
    complexes = [KoszulComplexOnModule(gens, V) for V in levels]
    quots = [homology_quotient(K, i) for K in complexes]
    dims = [H.dim for H in quots]

    maps = []  # maps[n-2]: H_i(level n) -> H_i(level n-1)
    for n in range(1, n_max):
        hi, lo = quots[n], quots[n - 1]
        P = _projection_matrix(levels[n], levels[n - 1])
        PB = _block_diag(F, P, len(complexes[n].subsets[i]))
        mat = np_zeros(F, lo.dim, hi.dim)
        for j in range(hi.dim):
            img = np_matmul(F, PB, hi.reps[j].reshape(-1, 1)).reshape(-1)
            coords = lo.class_coords(img)
            if coords is None:
                raise AssertionError("induced image is not a cycle class")
            mat[:, j] = coords
        maps.append(mat)

    induced_ranks = [np_rank(F, m) for m in maps]
    composite_dims = []
    comp = None
    for n in range(2, n_max + 1):
        comp = maps[n - 2] if comp is None \
            else np_matmul(F, comp, maps[n - 2])
        composite_dims.append(np_rank(F, comp))
    stable = composite_dims[-1] if composite_dims else (dims[0] if dims else 0)
    tail = composite_dims[-window:]
    stabilized = len(tail) == window and len(set(tail)) == 1
    stamp = "STABILIZED" if stabilized else "NOT-STABILIZED"
    return TorReport(i, dims, induced_ranks, composite_dims, stable,
                     stabilized, stamp, window)


# ---------------------------------------------------------------------------
# Eta-cycle witness for the extension family
# ---------------------------------------------------------------------------

@dataclass
class CycleWitness:
    d: int
    levels: int
    chains: list        # per n: list of d column-pairs of Polynomial
    cycle_ok: bool
    nonzero_class: bool
    compatible: bool
    stamp: str


def _check_extension_template(sys: LiftingSystem):
    ctx = sys.ctx
    if ctx.nvars % 2:
        raise TemplateMismatch("need an even number of variables")
    d = ctx.nvars // 2
    expected = extension_family_phi(ctx, d)
    if [[p.canonical() for p in row] for row in expected.matrix] != \
            [[p.canonical() for p in row] for row in sys.phi.matrix]:
        raise TemplateMismatch("base matrix is not the extension-family "
                               "presentation")
    if len(sys.a.generators) != d:
        raise TemplateMismatch("expected %d ideal generators" % d)
    return d


def _eta_chain(sys: LiftingSystem, d, n):
    """m_n = m_0 + sum_{j<=n} r_j as d pairs of polynomials."""
    ctx = sys.ctx
    F = ctx.field
    nv = ctx.nvars
    zero = Polynomial.zero(nv, F)

    def mono(idx, k):
        e = [0] * nv
        e[idx] = k
        return Polynomial(nv, F, {tuple(e): F.one})

    h = Polynomial.constant(nv, F, 1)
    for i in range(d - 2):
        h = mul_trunc(h, mono(i, 1), ctx)
    m = [[zero, zero] for _ in range(d)]
    m[d - 2][1] = zero - h
    m[d - 1][1] = h
    y_dm1 = mono(nv - 2, 1)
    y_d = mono(nv - 1, 1)
    x_dm1_p = mono(d - 2, d - 1)
    x_d_p = mono(d - 1, d - 1)
    for j in range(1, n + 1):
        blocks = sys.schedule.blocks(j)
        for i in range(d):
            sig = blocks[i] if i < len(blocks) else None
            if sig is None:
                continue
            for row in range(2):
                r = (zero
                     - mul_trunc(mul_trunc(h, y_dm1, ctx),
                                 sig[row][d - 2], ctx)
                     + mul_trunc(mul_trunc(h, y_d, ctx),
                                 sig[row][d - 1], ctx)
                     + mul_trunc(x_d_p, sig[row][2 * d - 2], ctx)
                     - mul_trunc(x_dm1_p, sig[row][2 * d - 1], ctx))
                m[i][row] = m[i][row] + r
    return m


def eta_witness(sys: LiftingSystem, n_max, cap=None, levels=None) -> CycleWitness:
    """Explicit compatible degree-1 cycles with nonzero classes.

    At each level n the chain m_n satisfies d_1(m_n) = 0 and represents a
    nonzero class in H_1(Kos(g; M_n)); successive classes map to one
    another under the system's natural surjections.  Any assertion failure
    is raised as a hard error.
    """
    d = _check_extension_template(sys)
    F = sys.ctx.field
    gens = sys.a.generators
    if levels is None:
        levels = realize_levels(sys, n_max, cap=cap)
    chains = [_eta_chain(sys, d, n + 1) for n in range(n_max)]
    complexes = [KoszulComplexOnModule(gens, V) for V in levels]
    quots = [homology_quotient(K, 1) for K in complexes]

    coords = []
    for n in range(n_max):
        V = levels[n]
        vec = _np.concatenate([V.coords_of_columns(pair)
                               for pair in chains[n]])
        img = np_matmul(F, complexes[n].differential(1),
                        vec.reshape(-1, 1))
        if img.any() if F.p else any(x for x in img.flat):
            raise WitnessFailure("chain at level %d is not a cycle" % (n + 1))
        if quots[n].class_is_zero(vec):
            raise WitnessFailure("cycle class vanishes at level %d" % (n + 1))
        coords.append(vec)

    for n in range(n_max - 1):
        P = _projection_matrix(levels[n + 1], levels[n])
        PB = _block_diag(F, P, d)
        img = np_matmul(F, PB, coords[n + 1].reshape(-1, 1)).reshape(-1)
        diff = (img - coords[n]) % F.p if F.p else img - coords[n]
        if not quots[n].class_is_zero(diff):
            raise WitnessFailure("classes at levels %d -> %d are "
                                 "incompatible" % (n + 2, n + 1))
    return CycleWitness(d, n_max, chains, True, True, True,
                        "UNLIFTABLE-WITNESSED")


# ---------------------------------------------------------------------------
# Depth certificates
# ---------------------------------------------------------------------------

@dataclass
class DepthReport:
    depth: int
    q: int
    stamp: str
    detail: dict = field(default_factory=dict)


def depth_certificate_auslander(sys: LiftingSystem, n_max,
                                window=DEFAULT_STABLE_WINDOW,
                                cap=None, levels=None) -> DepthReport:
    """depth of the limit = d - q, q = top index with nonzero stable image."""
    d = len(sys.a.generators)
    reg = regular_sequence_certificate(sys.a.generators, sys.ctx)
    if not reg.regular:
        raise ValueError("ideal generators are not certified regular")
    if levels is None:
        levels = realize_levels(sys, n_max, cap=cap)
    reports = [tor_inverse_system(sys, i, n_max, window=window,
                                  levels=levels) for i in range(d + 1)]
    if not all(r.stabilized for r in reports):
        raise ValueError("Tor system did not stabilize at horizon %d"
                         % n_max)
    q = 0
    for i in range(d, -1, -1):
        if reports[i].stable_image_dim > 0:
            q = i
            break
    depth = d - q
    stamp = "UNLIFTABLE" if q >= 1 else "NO-TOR-OBSTRUCTION"
    return DepthReport(depth, q, stamp,
                       {"tor": reports, "horizon": n_max})


def depth_certificate_determinant(Phi: PresentedModule) -> DepthReport:
    """Square presentation with nonzero determinant: pdim <= 1."""
    from .fitting import _minor, minimal_presentation
    if Phi.mu0 != Phi.ncols:
        raise ValueError("need a square presentation matrix")
    det = _minor(Phi, tuple(range(Phi.mu0)), tuple(range(Phi.ncols)), {})
    if det.is_zero():
        return DepthReport(-1, -1, "INCONCLUSIVE",
                           {"reason": "determinant vanishes at truncation"})
    _, mu = minimal_presentation(Phi)
    if mu == 0:
        return DepthReport(-1, -1, "INCONCLUSIVE",
                           {"reason": "cokernel is zero"})
    v = Phi.ctx.nvars
    return DepthReport(v - 1, 1, "DEPTH-EXACT",
                       {"det_degree": det.degree(), "ambient_dim": v})
