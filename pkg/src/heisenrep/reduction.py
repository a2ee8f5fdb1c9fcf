"""Reduction of a p-primary symplectic module to an elementary quotient.

The canonical isotropic subgroup S is built by the halving recursion
S_1 = p^ceil(r/2) M on the exponent; M_c = S^perp / S is then an F_p
symplectic space.  Induced modules over lagrangians containing S have their
S-invariants identified with induced modules of the reduced Heisenberg
group, which is how the canonical system lifts from M_c to M.
"""

from __future__ import annotations

from .abgroup import prime_factors, subgroup_from_gens, zero_subgroup
from .cyclo import CycNum, root_of_unity
from .heisenberg import HeisGrp, induce
from .intertwine import CanonicalSystem, SolveError, standard_T
from .kmat import mat_mul, proportionality, scalar_of
from .symplectic import (
    Lagrangian,
    SympAut,
    induced_form,
    orth_complement,
)


class ReductionError(ValueError):
    pass


def _p_valuation(n, p):
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def canonical_isotropic(M):
    """The characteristic isotropic subgroup S with S^perp/S elementary.

    Returns (S, chain) where chain lists the exponent valuation at each
    recursion level.  Base case: elementary modules give S = 0.
    """
    primes = prime_factors(M.group.order()) if M.group.rank else []
    if len(primes) > 1:
        raise ReductionError("module is not primary; reduce per prime")
    p = primes[0] if primes else None
    if p is None:
        return zero_subgroup(M.group), [0]
    r_s = _p_valuation(M.n, p)
    if r_s <= 1:
        return zero_subgroup(M.group), [r_s]
    r_half = (r_s + 1) // 2
    m = M.group.rank
    step = p ** r_half
    S1 = subgroup_from_gens(
        M.group, [tuple(step if j == i else 0 for j in range(m)) for i in range(m)]
    )
    M1, qm1 = induced_form(M, S1)
    S_next, chain = canonical_isotropic(M1)
    gens = [qm1.section(g) for g in S_next.gens()] + list(S1.gens())
    S = subgroup_from_gens(M.group, gens)
    return S, [r_s] + chain


class ReductionData:
    """Everything attached to the reduction (M, S) -> (M_c, omega_c)."""

    def __init__(self, M):
        primes = prime_factors(M.group.order()) if M.group.rank else []
        if len(primes) > 1:
            raise ReductionError("module is not primary; reduce per prime")
        self.M = M
        self.p = primes[0] if primes else 1
        self.S, self.chain = canonical_isotropic(M)
        self.S_perp = orth_complement(M, self.S)
        self.Mc, self.qm = induced_form(M, self.S)
        if self.Mc.group.rank and any(d != self.p for d in self.Mc.group.orders):
            raise ReductionError("reduced module is not elementary abelian")
        self.Hc = HeisGrp(self.Mc)
        self.H = HeisGrp(M)

    def proj(self, m):
        return self.qm.proj(m)

    def section(self, q):
        return self.qm.section(q)

    def in_domain(self, h):
        """Membership of (m, a) in the alpha domain S^perp x mu_p."""
        m, a = h
        n = self.M.n
        return self.S_perp.contains(m) and (a * self.p) % n == 0

    def alpha(self, h):
        """The reduction homomorphism on S^perp x mu_p, kernel exactly S.

        The central scale identifies the order-p subgroup of mu_n with mu_p
        through zeta_n^(n/p) = zeta_p; no larger central domain admits a
        homomorphism compatible with the reduced cocycle.
        """
        if not self.in_domain(h):
            raise ReductionError("element %r is outside S^perp x mu_p" % (h,))
        m, a = h
        n = self.M.n
        return (self.proj(m), (a // (n // self.p)) % self.p if self.p > 1 else 0)

    def central_lift(self, hc):
        """The subgroup embedding H_c -> H^S/S, choosing the canonical
        section on the module part."""
        mc, b = hc
        return (self.section(mc), (b * (self.M.n // self.p)) % self.M.n)

    def lag_lift(self, lag_c):
        """Preimage in S^perp of a lagrangian of M_c; lagrangian in M."""
        gens = [self.section(g) for g in lag_c.sub.gens()] + list(self.S.gens())
        sub = subgroup_from_gens(self.M.group, gens)
        L = Lagrangian(self.M, sub)
        return L

    def tau_matrix(self, Vc, V):
        """The isomorphism H_{L_c} -> (H_L)^S as a dim(V) x dim(Vc) matrix.

        tau(f)((m, a)) = zeta_n^a * f((m mod S, 0)), extended by zero off
        S^perp x mu_n; columns are images of the basis of H_{L_c}.
        """
        n = self.M.n
        p = self.p
        cols = []
        zero = CycNum.zero(n)
        for j in range(Vc.dim):
            col = []
            for r in V.reps:
                if not self.S_perp.contains(r):
                    col.append(zero)
                    continue
                q = self.proj(r)
                rj = Vc.rep_of(q)
                if rj != Vc.reps[j]:
                    col.append(zero)
                    continue
                lp = Vc.H.base.group.sub(q, rj)
                e = (-Vc.H.base.beta(lp, rj) + Vc.chi.exponent_on(lp)) % max(p, 1)
                col.append(root_of_unity(n, (e * (n // p)) % n) if p > 1
                           else CycNum.one(n))
            cols.append(col)
        return [[cols[j][i] for j in range(Vc.dim)] for i in range(V.dim)]


def reduce_module(M):
    return ReductionData(M)


def reduced_heisenberg(M):
    """(H_c, alpha) for the canonical reduction of M."""
    red = ReductionData(M)
    return red.Hc, red.alpha


def g_to_gc(red, g):
    """The induced symplectic automorphism of M_c; errors if g moves S."""
    if g.on_subgroup(red.S) != red.S:
        raise ReductionError("automorphism does not fix the canonical subgroup")
    if g.on_subgroup(red.S_perp) != red.S_perp:
        raise ReductionError("automorphism does not fix S^perp")
    k = red.Mc.group.rank
    rows = []
    for i in range(k):
        basis = tuple(1 if j == i else 0 for j in range(k))
        img = g.apply(red.section(basis))
        rows.append(red.proj(img))
    return SympAut(red.Mc, rows)


def lift_canonical_system(red, sys_c):
    """Lift the canonical system from M_c to intertwiners over M.

    Each lifted operator is the unique H-intertwiner restricting on
    S-invariants to tau o F_c o tau^(-1); concretely a scalar multiple of
    the standard intertwiner, with the scalar matched through tau.
    """
    H = red.H
    n = red.M.n
    count = sys_c.count
    lifted_lags = [red.lag_lift(L) for L in sys_c.lags]
    mods = [induce(H, L) for L in lifted_lags]
    B = sys_c.base_index
    T_LB = [standard_T(mods[i], mods[B]).matrix for i in range(count)]
    T_BL = [standard_T(mods[B], mods[i]).matrix for i in range(count)]
    delta = []
    for i in range(count):
        scal = scalar_of(mat_mul(T_BL[i], T_LB[i]))
        if scal is None or scal.is_zero():
            raise SolveError("lifted standard composite not scalar")
        delta.append(scal)
    tau_B = red.tau_matrix(sys_c.modules[B], mods[B])
    c = {}
    for i in range(count):
        tau_i = red.tau_matrix(sys_c.modules[i], mods[i])
        target = mat_mul(tau_i, sys_c.anchored(i, 1))
        image = mat_mul(T_LB[i], tau_B)
        scal = proportionality(target, image)
        if scal is None or scal.is_zero():
            raise SolveError(
                "lifted operator is not determined on S-invariants "
                "(lagrangian %d)" % i
            )
        c[i] = scal
    return CanonicalSystem(red.M, sys_c.enh_module, lifted_lags,
                           sys_c.enh_lags, B, mods, T_LB, T_BL, delta, c,
                           conductor=n)
