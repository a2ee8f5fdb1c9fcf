"""Intertwining operators between induced modules and the canonical system.

The standard (unnormalized) intertwiner averages over the target lagrangian;
the canonical system is the unique normalization of these satisfying the
identity, transitivity, genuineness, and symplectic-equivariance axioms on
enhanced lagrangians.  It is found by anchoring at a basepoint and
propagating the equivariance constraints until every scalar is pinned.
"""

from __future__ import annotations

import itertools

from .abgroup import subgroup_intersect
from .cyclo import CycNum, root_of_unity, sqrt_prime, in_subfield
from .heisenberg import HeisGrp, _counts_to_cyc, g_transport, induce
from .kmat import (
    GenPerm,
    identity as kmat_identity,
    mat_eq,
    mat_mul,
    mat_to_json,
    proportionality,
    scalar_mul,
    scalar_of,
)
from .symplectic import (
    EnhLag,
    SymplecticError,
    act_enhanced,
    enumerate_lagrangians,
    transvections,
)


class SolveError(RuntimeError):
    pass


class Intertwiner:
    __slots__ = ("source", "target", "matrix")

    def __init__(self, source, target, matrix, verify=False):
        self.source = source
        self.target = target
        self.matrix = matrix
        if verify:
            self.verify()

    def verify(self):
        """Exact intertwining check over a generating set of H."""
        for h in self.source.group_generators():
            lhs = mat_mul(self.matrix, self.source.rho(h))
            rhs = mat_mul(self.target.rho(h), self.matrix)
            if not mat_eq(lhs, rhs):
                raise SolveError("operator does not intertwine at %r" % (h,))
        return True


def standard_T(target, source):
    """The averaging intertwiner H_L -> H_N for lagrangians L (source) and
    N (target): (Tf)(h) = sum over N/(N cap L) of chi_N(n)^(-1) f(n h).

    T_{L,L} = id; T is always nonzero and intertwines right translation.
    """
    H = target.H
    M = H.base
    n = H.n
    inter = subgroup_intersect(target.lag.sub, source.lag.sub)
    reps = sorted({inter.coset_reduce(v) for v in target.lag.sub.elements()})
    counts = [[[0] * n for _ in range(source.dim)] for _ in range(target.dim)]
    chi_t = target.chi
    chi_s = source.chi
    for i, ri in enumerate(target.reps):
        for nn in reps:
            y = M.group.add(nn, ri)
            c = M.beta(nn, ri)
            rj = source.rep_of(y)
            j = source.index[rj]
            lp = M.group.sub(y, rj)
            e = (c - M.beta(lp, rj) + chi_s.exponent_on(lp) - chi_t.exponent_on(nn)) % n
            counts[i][j][e] += 1
    matrix = [
        [_counts_to_cyc(n, counts[i][j]) for j in range(source.dim)]
        for i in range(target.dim)
    ]
    if all(x.is_zero() for row in matrix for x in row):
        raise SolveError("standard intertwiner vanished; this is a bug")
    return Intertwiner(source, target, matrix)


def composition_scalar(lag_a, lag_b, H=None):
    """The scalar d with T_{A,B} o T_{B,A} = d * id."""
    if H is None:
        H = HeisGrp(lag_a.module)
    Va = induce(H, lag_a)
    Vb = induce(H, lag_b)
    T_ba = standard_T(Vb, Va)
    T_ab = standard_T(Va, Vb)
    prod = mat_mul(T_ab.matrix, T_ba.matrix)
    scal = scalar_of(prod)
    if scal is None:
        raise SolveError("composite of standard intertwiners is not scalar")
    return scal


class _RatioUnionFind:
    """Union-find over unknowns with root-of-unity ratios to the root.

    Ratios are exponents of zeta_n, stored as ints mod n; an inconsistent
    cycle forces the component to zero.  Used to count the solution
    dimension of the two-term intertwining equations.
    """

    def __init__(self, size, n):
        self.parent = list(range(size))
        self.ratio = [0] * size
        self.dead = [False] * size
        self.n = n

    def find(self, x):
        root = x
        acc = 0
        while self.parent[root] != root:
            acc += self.ratio[root]
            root = self.parent[root]
        # path compression with accumulated exponents
        cur = x
        acc2 = acc
        while self.parent[cur] != cur:
            nxt = self.parent[cur]
            step = self.ratio[cur]
            self.parent[cur] = root
            self.ratio[cur] = acc2 % self.n
            acc2 -= step
            cur = nxt
        return root, acc % self.n

    def union(self, a, b, e):
        """Impose a = zeta^e * b."""
        ra, qa = self.find(a)
        rb, qb = self.find(b)
        if ra == rb:
            if (qa - e - qb) % self.n:
                self.dead[ra] = True
            return
        self.parent[rb] = ra
        self.ratio[rb] = (qa - e - qb) % self.n
        if self.dead[rb]:
            self.dead[ra] = True

    def kill(self, x):
        r, _ = self.find(x)
        self.dead[r] = True

    def dimension(self):
        roots = set()
        dead_roots = set()
        for x in range(len(self.parent)):
            r, _ = self.find(x)
            roots.add(r)
            if self.dead[r]:
                dead_roots.add(r)
        return len(roots) - len(dead_roots)


def hom_dim(V, W):
    """Dimension of the space of H-intertwiners V -> W.

    The intertwining equations for monomial generator actions pair the
    matrix unknowns two at a time with root-of-unity coefficients, so the
    solve reduces to ratio-tracking union-find over the matrix entries.
    """
    if V.H != W.H:
        raise SolveError("modules over different Heisenberg groups")
    dv, dw = V.dim, W.dim
    n = V.H.n
    uf = _RatioUnionFind(dv * dw, n)
    for h in V.group_generators():
        permV, expV = V.rho_parts(h)
        permW, expW = W.rho_parts(h)
        for b in range(dv):
            eb = expV[b]
            pb = permV[b]
            for k in range(dw):
                # X[a][permV[b]] * sV[b] = sW[k] * X[k][b],  a = permW[k]
                u1 = permW[k] * dv + pb
                u2 = k * dv + b
                e = (expW[k] - eb) % n
                if u1 == u2:
                    if e:
                        uf.kill(u1)
                else:
                    uf.union(u1, u2, e)
    return uf.dimension()


class DirectSum:
    """Direct sum of induced modules; enough structure for hom_dim."""

    def __init__(self, parts):
        self.parts = parts
        self.H = parts[0].H
        self.dim = sum(p.dim for p in parts)

    def group_generators(self):
        return self.parts[0].group_generators()

    def rho_parts(self, h):
        perm = []
        exp = []
        off = 0
        for p in self.parts:
            pp, ee = p.rho_parts(h)
            perm.extend(x + off for x in pp)
            exp.extend(ee)
            off += p.dim
        return perm, exp

    def rho(self, h):
        perm, exp = self.rho_parts(h)
        n = self.H.n
        return GenPerm(perm, [root_of_unity(n, e) for e in exp]).to_dense(n)


# -- kernels ---------------------------------------------------------------


def kernel_of(F):
    """Kernel function on H with F f (h1) = sum_{h2} k(h1 h2^(-1)) f(h2),
    the measure giving every point volume one.

    Covariance: k(nbar x) = chi_N(nbar) k(x) and k(x lbar) = chi_L(lbar) k(x).
    The sign on the right factor differs from a naive transcription; it is
    the one under which the convolution reproduces F exactly and the kernel
    of the identity is the normalized indicator of L-bar.
    """
    V, W = F.source, F.target
    H = V.H
    n = H.n
    norm = CycNum.rational(1) / (n * V.lag.order())
    out = {}
    r0 = V.reps[0]
    for h in H.elements():
        m, a = h
        y = H.base.group.add(m, r0)
        ri = W.rep_of(y)
        i = W.index[ri]
        nn = H.base.group.sub(y, ri)
        if not W.lag.sub.contains(nn):
            raise SolveError("kernel support decomposition failed")
        z = H.product((ri, 0), H.inverse((r0, 0)))
        full = H.product((nn, 0), z)
        c0 = full[1]
        val = root_of_unity(n, (a - c0) % n) * F.matrix[i][0] * norm
        # fold in the left character of nn (trivial theta gives 1)
        et = W.chi.exponent_on(nn)
        if et:
            val = val * root_of_unity(n, et)
        out[h] = val
    return out


def operator_from_kernel(k, source, target):
    """Rebuild the intertwiner from a bicovariant kernel by convolution."""
    H = source.H
    n = H.n
    # bicovariance validation
    ngens = [(g, 0) for g in target.lag.sub.gens()] + [(H.base.group.zero(), 1)]
    lgens = [(g, 0) for g in source.lag.sub.gens()] + [(H.base.group.zero(), 1)]
    for x in H.elements():
        for nb in ngens:
            lhs = k[H.product(nb, x)]
            rhs = root_of_unity(n, target.chi.value_exponent(nb)) * k[x]
            if lhs != rhs:
                raise SolveError("kernel is not left covariant")
        for lb in lgens:
            lhs = k[H.product(x, lb)]
            rhs = root_of_unity(n, source.chi.value_exponent(lb)) * k[x]
            if lhs != rhs:
                raise SolveError("kernel is not right covariant")
    mat = []
    for i in range(target.dim):
        row = []
        h1 = (target.reps[i], 0)
        for j in range(source.dim):
            acc = CycNum.zero(n)
            for l in source.lag.sub.elements():
                for a in range(n):
                    h2 = H.product((l, a), (source.reps[j], 0))
                    fval = source.chi.value_exponent((l, a))
                    kv = k[H.product(h1, H.inverse(h2))]
                    if not kv.is_zero():
                        acc = acc + kv * root_of_unity(n, fval)
            row.append(acc)
        mat.append(row)
    return Intertwiner(source, target, mat)


# -- the canonical system --------------------------------------------------


class CanonicalSystem:
    """The family F_{N0, L0} over enhanced lagrangians.

    Stored through the anchored scalars: F_{(i,e),(j,f)} =
    e * f * (c_i / (c_j * delta_j)) * T_{i,B} @ T_{B,j}.  Identity and
    transitivity hold by construction; genuineness and equivariance are what
    the solver's propagation enforces.

    For a reduced module the same structure holds with the enhanced points
    living on the elementary quotient while the operators act upstairs; the
    ``lag_of`` table maps enhanced-point indices to operator-level
    lagrangians.
    """

    def __init__(self, module, enh_module, lags, enh_lags, base_index,
                 modules, T_LB, T_BL, delta, c, conductor):
        self.module = module
        self.enh_module = enh_module
        self.lags = lags
        self.enh_lags = enh_lags
        self.base_index = base_index
        self.modules = modules
        self.T_LB = T_LB
        self.T_BL = T_BL
        self.delta = delta
        self.c = c
        self.conductor = conductor
        self._pair_cache = {}

    @property
    def count(self):
        return len(self.lags)

    def enhanced(self):
        return [(i, e) for i in range(self.count) for e in (1, -1)]

    def module_of(self, i):
        return self.modules[i]

    def anchored(self, i, e=1):
        """F_{(i,e), basepoint} as a dense matrix."""
        m = scalar_mul(self.c[i], self.T_LB[i])
        return scalar_mul(CycNum.rational(e), m) if e == -1 else m

    def operator(self, n0, l0):
        """F_{n0, l0}: module_of(j) -> module_of(i) for n0=(i,e), l0=(j,f)."""
        i, e = n0
        j, f = l0
        base = self._pair_cache.get((i, j))
        if base is None:
            if i == j:
                prod = scalar_mul(self.delta[j], kmat_identity(
                    self.modules[j].dim, self.conductor))
            else:
                prod = mat_mul(self.T_LB[i], self.T_BL[j])
            coef = self.c[i] / (self.c[j] * self.delta[j])
            base = scalar_mul(coef, prod)
            self._pair_cache[(i, j)] = base
        if e * f == 1:
            return base
        return scalar_mul(CycNum.rational(-1), base)

    def enhanced_index(self, point):
        key = point.lag.key()
        for i, L in enumerate(self.enh_lags):
            if L.key() == key:
                return (i, point.eps)
        raise SolveError("enhanced point not in the system")

    def act_point(self, g, n0):
        """Transport an enhanced index pair along g in Sp(enh_module)."""
        i, e = n0
        moved = act_enhanced(g, EnhLag(self.enh_lags[i], e))
        return self.enhanced_index(moved)

    def field_generators(self):
        p = self.enh_module.n if self.enh_module.group.rank else 1
        gens = [root_of_unity(self.module.n if self.module.group.rank else 1)]
        if p > 1:
            gens.append(sqrt_prime(p))
        return gens

    def entries_in_field(self, generators=None):
        """Every anchored entry lies in the subfield cut out by generators."""
        gens = generators if generators is not None else self.field_generators()
        for i in range(self.count):
            for row in self.anchored(i):
                for x in row:
                    if not in_subfield(x, gens):
                        return False
        return True

    def pair_table_json(self):
        """Basepoint-independent serialization of the full pair table."""
        table = {}
        for i, e in self.enhanced():
            for j, f in self.enhanced():
                key = "L%d:%s|L%d:%s" % (i, "+" if e > 0 else "-",
                                         j, "+" if f > 0 else "-")
                mat = [[x.lift(self.conductor) if x.n != self.conductor else x
                        for x in row] for row in self.operator((i, e), (j, f))]
                table[key] = mat_to_json(mat)
        return {
            "lagrangians": [[list(r) for r in L.sub.rows] for L in self.enh_lags],
            "pairs": table,
        }

    def export(self, include_pairs=None):
        import hashlib
        import json

        if include_pairs is None:
            include_pairs = 2 * self.count <= 16
        mod_json = json.dumps(self.module.to_json(), sort_keys=True)
        out = {
            "module": self.module.to_json(),
            "module_sha256": hashlib.sha256(mod_json.encode()).hexdigest(),
            "conductor": self.conductor,
            "basepoint": "L%d:+" % self.base_index,
            "lagrangians": [[list(r) for r in L.sub.rows] for L in self.enh_lags],
            "operator_lagrangians": [[list(r) for r in L.sub.rows] for L in self.lags],
            "anchored": {
                "L%d:%s" % (i, "+" if e > 0 else "-"): mat_to_json(
                    [[x.lift(self.conductor) if x.n != self.conductor else x
                      for x in row] for row in self.anchored(i, e)])
                for i in range(self.count)
                for e in (1, -1)
            },
        }
        if include_pairs:
            out["pairs"] = self.pair_table_json()["pairs"]
        return out


def solve_canonical_system(Mc, base_index=0, verify="light", seed=0,
                           max_rounds=3):
    """Normalize the averaging intertwiners into the canonical system.

    Anchors the basepoint scalar at 1, then walks equivariance relations
    c_t = sign * mu * delta * c_j * c_b over products of transvections until
    every lift scalar is pinned.  Raises SolveError when the propagation is
    inconsistent (convention bug) or underdetermined (should not happen).
    """
    if Mc.group.rank:
        from .abgroup import prime_factors

        if prime_factors(Mc.n) != [Mc.n] or \
                any(d != Mc.n for d in Mc.group.orders):
            raise SymplecticError("canonical system needs an elementary module")
    lags = enumerate_lagrangians(Mc)
    H = HeisGrp(Mc)
    mods = [induce(H, L) for L in lags]
    nlag = len(lags)
    p = Mc.n if Mc.group.rank else 1
    conductor = p
    one = CycNum.one(conductor)
    if base_index < 0 or base_index >= nlag:
        raise SolveError("basepoint index out of range")
    B = base_index
    T_LB = [standard_T(mods[i], mods[B]).matrix for i in range(nlag)]
    T_BL = [standard_T(mods[B], mods[i]).matrix for i in range(nlag)]
    delta = []
    for i in range(nlag):
        scal = scalar_of(mat_mul(T_BL[i], T_LB[i]))
        if scal is None or scal.is_zero():
            raise SolveError("standard composite not an invertible scalar")
        delta.append(scal)

    c = {B: one}
    if nlag > 1:
        _propagate_scalars(Mc, lags, mods, B, T_LB, T_BL, delta, c, max_rounds)
    sys = CanonicalSystem(Mc, Mc, lags, lags, B, mods, T_LB, T_BL, delta,
                          c, conductor)
    if verify != "none":
        from .verify import check_system_axioms

        report = check_system_axioms(sys, level=verify, seed=seed)
        if not report.ok():
            raise SolveError("canonical system failed verification:\n%s"
                             % report.text())
    return sys


def _lag_perm(g, lags, key_index):
    return [key_index[g.on_subgroup(L.sub).key()] for L in lags]


def _propagate_scalars(Mc, lags, mods, B, T_LB, T_BL, delta, c, max_rounds):
    nlag = len(lags)
    key_index = {lags[i].key(): i for i in range(nlag)}
    pool = transvections(Mc)[1:]
    pool_info = []
    rel_cache = {}

    def add_pool(gs):
        for g in gs:
            perm = _lag_perm(g, lags, key_index)
            if perm[B] == B and all(perm[i] == i for i in range(nlag)):
                continue
            eps = [act_enhanced(g, EnhLag(lags[i], 1)).eps for i in range(nlag)]
            pool_info.append((g, perm, eps))

    add_pool(pool)

    def extract(gi, j):
        """Relation c_t = sign * const * c_j * c_b2 for (g, j)."""
        key = (gi, j)
        if key in rel_cache:
            return rel_cache[key]
        g, perm, eps = pool_info[gi]
        t, b2 = perm[j], perm[B]
        GP, _ = g_transport(g, mods[j], target=mods[t])
        GPBinv, _ = g_transport(g.inverse(), mods[b2], target=mods[B])
        m1 = GP.apply_left(GPBinv.apply_right(T_LB[j]))
        m2 = mat_mul(T_LB[t], T_BL[b2])
        mu = proportionality(m1, m2)
        if mu is None:
            raise SolveError("equivariance constraint is not proportional; "
                             "convention bug at transvection %r" % (g.mat,))
        sign = eps[j] * eps[B]
        const = mu * delta[b2]
        rel = (t, b2, sign, const)
        rel_cache[key] = rel
        return rel

    def learn(idx, value, context):
        old = c.get(idx)
        if old is None:
            c[idx] = value
            return True
        if old != value:
            raise SolveError(
                "inconsistent equivariance constraint at lagrangian %d (%s): "
                "%r vs %r" % (idx, context, old, value)
            )
        return False

    rounds = 0
    while len(c) < nlag:
        progress = True
        while progress:
            progress = False
            for gi in range(len(pool_info)):
                _, perm, _ = pool_info[gi]
                b2 = perm[B]
                for j in range(nlag):
                    if j == B:
                        continue
                    t = perm[j]
                    known = (t in c) + (j in c) + (b2 in c)
                    if t == j and b2 not in c:
                        t_, b2_, sign, const = extract(gi, j)
                        val = CycNum.rational(sign) / const
                        if learn(b2, val, "fixed-lagrangian cancellation"):
                            progress = True
                        continue
                    if known < 2:
                        continue
                    if t not in c and j in c and b2 in c:
                        t_, b2_, sign, const = extract(gi, j)
                        val = CycNum.rational(sign) * const * c[j] * c[b2]
                        if learn(t, val, "forward transport"):
                            progress = True
                    elif j not in c and t in c and b2 in c and j != b2:
                        t_, b2_, sign, const = extract(gi, j)
                        val = c[t] / (CycNum.rational(sign) * const * c[b2])
                        if learn(j, val, "backward transport"):
                            progress = True
                    elif b2 not in c and t in c and j in c and j != b2:
                        t_, b2_, sign, const = extract(gi, j)
                        val = c[t] / (CycNum.rational(sign) * const * c[j])
                        if learn(b2, val, "base transport"):
                            progress = True
        if len(c) == nlag:
            break
        rounds += 1
        if rounds >= max_rounds:
            raise SolveError(
                "axioms do not pin the system: %d of %d scalars undetermined"
                % (nlag - len(c), nlag)
            )
        base_gs = [info[0] for info in pool_info[: 2 * nlag]]
        extra = [a.compose(b) for a, b in itertools.product(base_gs, repeat=2)]
        seen = {info[0].key() for info in pool_info}
        add_pool([g for g in extra
                  if g.key() not in seen and not g.is_identity()])
