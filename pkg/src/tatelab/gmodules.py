"""Modules over the integral group ring of a finite group.

A GModule is a presented abelian group together with one action matrix
per group element; a GMap is a homomorphism commuting with both actions.
All the standard constructions live here: the regular module, permutation
and induced modules, augmentation ideals and the left ideals they
generate, Hom and tensor with the diagonal action, equivariant kernels
and cokernels, fixed points and the norm.
"""

from __future__ import annotations

from .abelian import AbMap, FgAb, ab_quotient
from .lattice import IntMatrix, Lattice


def _sparse_cols(mat):
    """Columns of an IntMatrix as {row: value} dicts."""
    cols = [dict() for _ in range(mat.cols)]
    for r, row in enumerate(mat.entries):
        for c, v in enumerate(row):
            if v:
                cols[c][r] = v
    return cols


def _sparse_mul(a_cols, b_cols, nrows):
    """Columns of A*B from sparse columns of A and B."""
    out = []
    for bc in b_cols:
        acc = {}
        for k, bv in bc.items():
            for r, av in a_cols[k].items():
                nv = acc.get(r, 0) + av * bv
                if nv:
                    acc[r] = nv
                elif r in acc:
                    del acc[r]
        out.append(acc)
    return out


class NotEquivariant(Exception):
    def __init__(self, witness_elt, witness_g):
        self.witness = (witness_elt, witness_g)
        super().__init__(f"map is not equivariant at generator {witness_elt} "
                         f"under group element {witness_g}")


class NotFree(Exception):
    pass


class GModule:
    __slots__ = ("group", "underlying", "action")

    def __init__(self, group, underlying, action, check=True):
        self.group = group
        self.underlying = underlying
        self.action = tuple(m if isinstance(m, IntMatrix) else
                            IntMatrix(m, cols=underlying.n) for m in action)
        if len(self.action) != group.order:
            raise ValueError("one action matrix per group element required")
        if check:
            self.validate()

    def validate(self, full=False):
        """Relation-compatibility of every action matrix, identity acting
        as the identity, and multiplicativity.  Multiplicativity on pairs
        (s, h) with s from a generating set implies it on all pairs; pass
        full=True to check every pair anyway."""
        grp, ab = self.group, self.underlying
        for m in self.action:
            AbMap(ab, ab, m)  # relation check
        lat = ab.rel_lattice()
        cols = [_sparse_cols(m) for m in self.action]
        ident = self.action[grp.identity]
        for j in range(ab.n):
            col = [0] * ab.n
            for r, v in _sparse_cols(ident)[j].items():
                col[r] = v
            col[j] -= 1
            if not lat.contains(col):
                raise ValueError("identity must act as the identity")
        firsts = range(grp.order) if full else grp.generating_set()
        for g in firsts:
            for h in range(grp.order):
                prod = _sparse_mul(cols[g], cols[h], ab.n)
                tgt = cols[grp.mul(g, h)]
                for j in range(ab.n):
                    diff = dict(prod[j])
                    for r, v in tgt[j].items():
                        nv = diff.get(r, 0) - v
                        if nv:
                            diff[r] = nv
                        elif r in diff:
                            del diff[r]
                    if diff and not lat.contains(diff):
                        raise ValueError(f"action is not multiplicative at "
                                         f"({g}, {h})")

    def act(self, g, x):
        return self.action[g].apply(x)

    def act_map(self, g):
        return AbMap(self.underlying, self.underlying, self.action[g],
                     check=False)

    def norm_map(self):
        """Multiplication by the sum of all group elements."""
        n = self.underlying.n
        rows = [[sum(self.action[g].entries[i][j] for g in range(self.group.order))
                 for j in range(n)] for i in range(n)]
        return AbMap(self.underlying, self.underlying,
                     IntMatrix(rows, cols=n), check=False)

    def __repr__(self):
        return f"GModule({self.underlying!r} over order-{self.group.order} group)"


class GMap:
    __slots__ = ("dom", "cod", "ab")

    def __init__(self, dom, cod, ab_or_mat, check=True):
        if dom.group is not cod.group:
            raise ValueError("equivariant maps need one group on both sides")
        if isinstance(ab_or_mat, AbMap):
            ab = ab_or_mat
        else:
            ab = AbMap(dom.underlying, cod.underlying, ab_or_mat)
        self.dom = dom
        self.cod = cod
        self.ab = ab
        if check:
            self.check_equivariance()

    def check_equivariance(self):
        fc = _sparse_cols(self.ab.mat)
        lat = self.cod.underlying.rel_lattice()
        nc = self.cod.underlying.n
        for g in self.dom.group.generating_set():
            left = _sparse_mul(fc, _sparse_cols(self.dom.action[g]), nc)
            right = _sparse_mul(_sparse_cols(self.cod.action[g]), fc, nc)
            for j in range(self.dom.underlying.n):
                diff = dict(left[j])
                for r, v in right[j].items():
                    nv = diff.get(r, 0) - v
                    if nv:
                        diff[r] = nv
                    elif r in diff:
                        del diff[r]
                if diff and not lat.contains(diff):
                    raise NotEquivariant(j, g)

    def apply(self, x):
        return self.ab.apply(x)

    def compose(self, other):
        return GMap(other.dom, self.cod, self.ab.compose(other.ab), check=False)

    def kernel(self):
        kgrp, incl = self.ab.kernel()
        acts = []
        for g in range(self.dom.group.order):
            cols = []
            for i in range(kgrp.n):
                moved = self.dom.act(g, incl.apply(kgrp.gen(i)))
                c = incl.solve(moved)
                if c is None:
                    raise NotEquivariant(i, g)
                cols.append(c)
            acts.append(IntMatrix.from_columns(cols, kgrp.n))
        kmod = GModule(self.dom.group, kgrp, acts)
        return kmod, GMap(kmod, self.dom, incl, check=False)

    def image(self):
        igrp, incl, proj = self.ab.image()
        imod = GModule(self.dom.group, igrp, self.dom.action)
        return (imod, GMap(imod, self.cod, incl, check=False),
                GMap(self.dom, imod, proj, check=False))

    def cokernel(self):
        qgrp, proj = self.ab.cokernel()
        qmod = GModule(self.cod.group, qgrp, self.cod.action)
        return qmod, GMap(self.cod, qmod, proj, check=False)

    @classmethod
    def zero(cls, dom, cod):
        return cls(dom, cod, AbMap.zero(dom.underlying, cod.underlying),
                   check=False)

    def __eq__(self, other):
        return isinstance(other, GMap) and self.ab == other.ab

    def __hash__(self):
        raise TypeError("GMap is unhashable")


def gmap_kernel_image(f):
    """{kernel, image, cokernel} with their witness maps, per the module
    contract."""
    kmod, kincl = f.kernel()
    imod, iincl, iproj = f.image()
    cmod, cproj = f.cokernel()
    return {"kernel": kmod, "kernel_incl": kincl,
            "image": imod, "image_incl": iincl, "image_proj": iproj,
            "cokernel": cmod, "cokernel_proj": cproj}


# -- constructions ----------------------------------------------------------

def trivial_module(group, fgab=None):
    fgab = fgab if fgab is not None else FgAb(1)
    ident = IntMatrix.identity(fgab.n)
    return GModule(group, fgab, [ident] * group.order, check=False)


def regular_module(group):
    """Z[G] with left translation, basis indexed by group elements."""
    n = group.order
    acts = []
    for g in range(n):
        cols = []
        for h in range(n):
            col = [0] * n
            col[group.mul(g, h)] = 1
            cols.append(col)
        acts.append(IntMatrix.from_columns(cols, n))
    return GModule(group, FgAb(n), acts, check=False)


def perm_module(group, sub):
    """Permutation module on left cosets G/H; basis = coset reps."""
    from .groups import cosets_and_reps
    reps, rho = cosets_and_reps(group, sub)
    pos = {r: i for i, r in enumerate(reps)}
    k = len(reps)
    acts = []
    for g in range(group.order):
        cols = []
        for r in reps:
            col = [0] * k
            col[pos[rho[group.mul(g, r)]]] = 1
            cols.append(col)
        acts.append(IntMatrix.from_columns(cols, k))
    mod = GModule(group, FgAb(k), acts, check=False)
    return mod, reps, rho, pos


def group_ring_element(group, coeffs):
    """Vector in the regular module from {element: coefficient}."""
    v = [0] * group.order
    for g, c in coeffs.items():
        v[g] += c
    return tuple(v)


def norm_element(group):
    return tuple(1 for _ in range(group.order))


def left_mul_matrix(group, lam):
    """Matrix of x -> lam * x on the regular module, lam a coefficient
    vector."""
    n = group.order
    rows = [[0] * n for _ in range(n)]
    for g in range(n):
        c = lam[g]
        if c:
            for h in range(n):
                rows[group.mul(g, h)][h] += c
    return IntMatrix(rows, cols=n)


def augmentation_map(group, regular=None):
    reg = regular if regular is not None else regular_module(group)
    triv = trivial_module(group)
    return GMap(reg, triv, IntMatrix([[1] * group.order]), check=False), reg, triv


class LocalIdeal:
    """The left ideal Z[G] * (augmentation ideal of H) with an explicit
    lattice basis, its inclusion into the regular module, and witnesses
    decomposing each basis vector over the spanning set g(h-1)."""

    __slots__ = ("module", "incl", "spanning", "witnesses")

    def __init__(self, module, incl, spanning, witnesses):
        self.module = module
        self.incl = incl
        self.spanning = spanning
        self.witnesses = witnesses


def local_aug_ideal(group, sub, regular):
    spanning = [(g, h) for g in range(group.order) for h in sub.elems
                if h != group.identity]
    lat = Lattice(group.order, witnesses=True)
    for (g, h) in spanning:
        v = [0] * group.order
        v[group.mul(g, h)] += 1
        v[g] -= 1
        lat.add(v)
    basis = lat.basis()
    k = len(basis)
    incl_mat = IntMatrix.from_columns(basis, group.order)
    from .abelian import _express_in_echelon
    acts = []
    for g in range(group.order):
        cols = []
        for b in basis:
            moved = regular.act(g, b)
            cols.append(tuple(_express_in_echelon(lat, moved)))
        acts.append(IntMatrix.from_columns(cols, k))
    mod = GModule(group, FgAb(k), acts)
    incl = GMap(mod, regular, incl_mat)
    witnesses = [lat.basis_witness(i) for i in range(k)]
    return LocalIdeal(mod, incl, spanning, witnesses)


def standard_modules(group, sub):
    """The stock of modules the instance pipelines need, for H <= G."""
    reg = regular_module(group)
    triv = trivial_module(group)
    aug = GMap(reg, triv, IntMatrix([[1] * group.order]), check=False)
    aug_mod, aug_incl = aug.kernel()
    induced, reps, rho, pos = perm_module(group, sub)
    ideal = local_aug_ideal(group, sub, reg)
    return {
        "regular": reg,
        "trivial": triv,
        "augmentation": aug,
        "aug_ideal": aug_mod,
        "aug_ideal_incl": aug_incl,
        "induced": induced,
        "induced_reps": reps,
        "local_aug_ideal": ideal,
    }


def direct_sum(mods):
    """(sum module, injections, projections) of a list of GModules over
    the same group."""
    group = mods[0].group
    ns = [m.underlying.n for m in mods]
    total = sum(ns)
    offs = []
    o = 0
    for n in ns:
        offs.append(o)
        o += n
    rel_cols = []
    for mi, m in enumerate(mods):
        for j in range(m.underlying.rel.cols):
            col = [0] * total
            for i in range(ns[mi]):
                col[offs[mi] + i] = m.underlying.rel.entries[i][j]
            rel_cols.append(col)
    ab = FgAb(total, IntMatrix.from_columns(rel_cols, total))
    acts = []
    for g in range(group.order):
        rows = [[0] * total for _ in range(total)]
        for mi, m in enumerate(mods):
            blk = m.action[g].entries
            for i in range(ns[mi]):
                for j in range(ns[mi]):
                    rows[offs[mi] + i][offs[mi] + j] = blk[i][j]
        acts.append(IntMatrix(rows, cols=total))
    smod = GModule(group, ab, acts, check=False)
    injs, projs = [], []
    for mi, m in enumerate(mods):
        icols = []
        for j in range(ns[mi]):
            col = [0] * total
            col[offs[mi] + j] = 1
            icols.append(col)
        injs.append(GMap(m, smod, IntMatrix.from_columns(icols, total),
                         check=False))
        prows = [[0] * total for _ in range(ns[mi])]
        for i in range(ns[mi]):
            prows[i][offs[mi] + i] = 1
        projs.append(GMap(smod, m, IntMatrix(prows, cols=total), check=False))
    return smod, injs, projs


# -- Hom and tensor ---------------------------------------------------------

def _free_basis_maps(c):
    """(k, TB, FB) for torsion-free c: TB maps coordinates to the free
    basis, FB embeds back, TB*FB = identity."""
    if not c.is_free():
        raise NotFree("module has torsion")
    idx = [i for i in c._canon_idx if c._mods[i] == 0]
    k = len(idx)
    if c._u is None:
        tb = IntMatrix([[1 if j == i else 0 for j in range(c.n)] for i in idx],
                       cols=c.n)
        fb = IntMatrix.from_columns([tuple(1 if r == i else 0
                                           for r in range(c.n)) for i in idx],
                                    c.n)
    else:
        tb = IntMatrix([c._u.entries[i] for i in idx], cols=c.n)
        fb = IntMatrix.from_columns([c._uinv.column(i) for i in idx], c.n)
    return k, tb, fb


class HomModule:
    """Hom_Z(C, A) with the conjugation action, C torsion-free."""

    __slots__ = ("module", "c", "a", "k", "tb", "fb")

    def __init__(self, cmod, amod):
        if cmod.group is not amod.group:
            raise ValueError("modules over different groups")
        group = cmod.group
        c, a = cmod.underlying, amod.underlying
        k, tb, fb = _free_basis_maps(c)
        na = a.n
        rel_cols = []
        for i in range(k):
            for j in range(a.rel.cols):
                col = [0] * (k * na)
                for l in range(na):
                    col[i * na + l] = a.rel.entries[l][j]
                rel_cols.append(col)
        ab = FgAb(k * na, IntMatrix.from_columns(rel_cols, k * na))
        acts = []
        for g in range(group.order):
            ginv = group.inv[g]
            s = tb.mul(cmod.action[ginv]).mul(fb)  # action of g^-1 on the basis
            ag = amod.action[g].entries
            rows = [[0] * (k * na) for _ in range(k * na)]
            for i in range(k):
                for j in range(k):
                    sij = s.entries[i][j]
                    if sij:
                        for m in range(na):
                            for l in range(na):
                                if ag[m][l]:
                                    rows[j * na + m][i * na + l] += sij * ag[m][l]
            acts.append(IntMatrix(rows, cols=k * na))
        self.module = GModule(group, ab, acts)
        self.c, self.a = cmod, amod
        self.k, self.tb, self.fb = k, tb, fb

    def to_matrix(self, h):
        """Hom element -> matrix of the underlying map C -> A."""
        na = self.a.underlying.n
        e = IntMatrix([[h[i * na + l] for i in range(self.k)]
                       for l in range(na)], cols=self.k)
        return e.mul(self.tb)

    def from_matrix(self, f):
        """Matrix of a map C -> A -> Hom element coordinates."""
        e = f.mul(self.fb)
        out = []
        for i in range(self.k):
            for l in range(self.a.underlying.n):
                out.append(e.entries[l][i])
        return tuple(out)

    def apply(self, h, x):
        """Evaluate a Hom element at x in C."""
        return self.to_matrix(h).apply(x)


class TensorModule:
    """C tensor A over Z with the diagonal action."""

    __slots__ = ("module", "c", "a")

    def __init__(self, cmod, amod):
        if cmod.group is not amod.group:
            raise ValueError("modules over different groups")
        c, a = cmod.underlying, amod.underlying
        if not (c.is_finite() or a.is_finite() or c.is_free() or a.is_free()):
            raise ValueError("tensor factors must include a finite or a "
                             "Z-free module")
        nc, na = c.n, a.n
        rel_cols = []
        for j in range(c.rel.cols):
            col_c = c.rel.column(j)
            for l in range(na):
                col = [0] * (nc * na)
                for i in range(nc):
                    if col_c[i]:
                        col[i * na + l] = col_c[i]
                rel_cols.append(col)
        for j in range(a.rel.cols):
            col_a = a.rel.column(j)
            for i in range(nc):
                col = [0] * (nc * na)
                for l in range(na):
                    if col_a[l]:
                        col[i * na + l] = col_a[l]
                rel_cols.append(col)
        ab = FgAb(nc * na, IntMatrix.from_columns(rel_cols, nc * na))
        acts = []
        for g in range(cmod.group.order):
            cg = cmod.action[g].entries
            ag = amod.action[g].entries
            rows = [[0] * (nc * na) for _ in range(nc * na)]
            for i in range(nc):
                for j in range(nc):
                    x = cg[i][j]
                    if x:
                        for l in range(na):
                            for m in range(na):
                                if ag[l][m]:
                                    rows[i * na + l][j * na + m] += x * ag[l][m]
            acts.append(IntMatrix(rows, cols=nc * na))
        self.module = GModule(cmod.group, ab, acts, check=False)
        self.c, self.a = cmod, amod

    def pure(self, x, y):
        na = self.a.underlying.n
        out = [0] * (self.c.underlying.n * na)
        for i, xi in enumerate(x):
            if xi:
                for l, yl in enumerate(y):
                    if yl:
                        out[i * na + l] += xi * yl
        return tuple(out)


def hom_and_tensor(cmod, amod):
    """{hom, tensor, evaluation} as in the module contract."""
    hom = HomModule(cmod, amod)
    tensor = TensorModule(cmod, hom.module)
    na = amod.underlying.n
    ev_cols = []
    nh = hom.module.underlying.n
    for i in range(cmod.underlying.n):
        tbcol = hom.tb.column(i)
        for hidx in range(nh):
            k, l = divmod(hidx, na)
            col = [0] * na
            col[l] = tbcol[k]
            ev_cols.append(col)
    evaluation = GMap(tensor.module, amod, IntMatrix.from_columns(ev_cols, na))
    return {"hom": hom, "tensor": tensor, "evaluation": evaluation,
            "plain_tensor": TensorModule(cmod, amod)}


# -- fixed points, norm, direct low-degree cohomology -----------------------

class FixedNormData:
    __slots__ = ("fixed", "fixed_incl", "norm_image", "norm_incl",
                 "h0", "_h0_solve", "h1_neg", "_h1_solve", "module")

    def __init__(self, module):
        self.module = module
        grp = module.group
        ab = module.underlying
        summands = [module] * grp.order
        big, _, _ = direct_sum(summands)
        rows = []
        for g in range(grp.order):
            delta = [[module.action[g].entries[i][j] - (1 if i == j else 0)
                      for j in range(ab.n)] for i in range(ab.n)]
            rows.extend(delta)
        stacked = AbMap(ab, big.underlying, IntMatrix(rows, cols=ab.n),
                        check=False)
        fgrp, fincl = stacked.kernel()
        self.fixed = fgrp
        self.fixed_incl = fincl
        nu = module.norm_map()
        igrp, iincl, _ = nu.image()
        self.norm_image = igrp
        self.norm_incl = iincl
        h0_gens = []
        for j in range(ab.n):
            c = fincl.solve(nu.apply(ab.gen(j)))
            if c is None:
                raise ValueError("norm image escapes the fixed points")
            h0_gens.append(c)
        self.h0, _ = ab_quotient(fgrp, h0_gens)
        self._h0_solve = fincl
        kgrp, kincl = nu.kernel()
        dens = []
        for g in range(grp.order):
            for j in range(ab.n):
                moved = ab.sub(module.act(g, ab.gen(j)), ab.gen(j))
                c = kincl.solve(moved)
                if c is None:
                    raise ValueError("(g-1)m escapes the norm kernel")
                dens.append(c)
        self.h1_neg, _ = ab_quotient(kgrp, dens)
        self._h1_solve = kincl

    def h0_class(self, x):
        """Class in M^G / N M of a fixed element x."""
        c = self._h0_solve.solve(x)
        if c is None:
            raise ValueError("element is not G-fixed")
        return self.h0.canon(c)

    def h1_class(self, x):
        """Class in ker(N)/<(g-1)m> of a norm-killed element x."""
        c = self._h1_solve.solve(x)
        if c is None:
            raise ValueError("element is not killed by the norm")
        return self.h1_neg.canon(c)

    def h1_rep(self, cls):
        return self.module.underlying.reduce_rep(
            self._h1_solve.apply(self.h1_neg.from_canon(cls)))


def fixed_and_norm(module):
    return FixedNormData(module)
