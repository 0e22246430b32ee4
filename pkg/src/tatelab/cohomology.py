"""Tate cohomology of a finite group from a complete resolution.

The resolution splices the bar resolution (degrees <= -1 of the cochain
complex, where the groups are homology-style chain groups) with its dual
(degrees >= 0, carried in the standard inhomogeneous cochain
conventions), through the norm map at the middle.  Concretely, for a
module A the coefficient complex is

  ... -> Maps(G^2, A) -> Maps(G, A) -> A --N--> A -> Maps(G, A) -> ...

with the homology boundary on the left, the norm in the middle and the
usual cochain differential on the right.  Degree i of Tate cohomology is
the homology of this complex at position i, so H^0 = A^G / N A and H^-1
= ker(N) / <(g-1)a> drop out literally, H^-2 is the first homology group
and H^1 the usual crossed homomorphisms modulo principal ones.

Everything is stored as a matrix over the group ring per pair of adjacent
degrees and specialized at a coefficient module by replacing each ring
entry with the matrix by which it acts.
"""

from __future__ import annotations

import itertools

from .abelian import AbMap, FgAb, Homology
from .gmodules import (GMap, GModule, HomModule, TensorModule,
                       regular_module, standard_modules, trivial_module)
from .groups import abelianization, subgroup_as_group
from .lattice import IntMatrix, Lattice, kernel_basis


class WindowTooLarge(Exception):
    pass


class DegreeOutOfWindow(Exception):
    pass


class DegreeMismatch(Exception):
    pass


MAX_WINDOW = (-5, 5)


class TateComplex:
    """Complete-resolution data for one finite group over a degree window.

    Cohomology is computable at every degree of `window`; internally the
    complex extends one degree beyond each end.
    """

    def __init__(self, group, window=(-4, 3)):
        lo, hi = window
        if lo > hi or lo < MAX_WINDOW[0] or hi > MAX_WINDOW[1]:
            raise WindowTooLarge(f"window {window} exceeds {MAX_WINDOW}")
        self.group = group
        self.window = (lo, hi)
        self._bases = {}
        self._diffs = {}

    def degrees(self):
        return range(self.window[0], self.window[1] + 1)

    def _check_degree(self, i, public=False):
        lo, hi = self.window
        if not public:
            lo, hi = lo - 1, hi + 1  # internal widening for edge homology
        if not lo <= i <= hi:
            raise DegreeOutOfWindow(f"degree {i} outside window {self.window}")

    def tuple_length(self, i):
        return -i - 1 if i <= -1 else i

    def basis(self, i):
        """Bar-type basis of the degree-i term: tuples of group elements."""
        if i not in self._bases:
            k = self.tuple_length(i)
            self._bases[i] = list(itertools.product(range(self.group.order),
                                                    repeat=k))
        return self._bases[i]

    def rank(self, i):
        return self.group.order ** self.tuple_length(i)

    def ring_differential(self, i):
        """Differential degree i -> i+1 as {source: {target: {g: coeff}}}."""
        if i in self._diffs:
            return self._diffs[i]
        grp = self.group
        n = grp.order
        src = self.basis(i)
        tgt_index = {w: k for k, w in enumerate(self.basis(i + 1))}
        cols = {}

        def put(col, target, g, c):
            zg = col.setdefault(tgt_index[target], {})
            zg[g] = zg.get(g, 0) + c
            if not zg[g]:
                del zg[g]
                if not zg:
                    del col[tgt_index[target]]

        if i <= -2:
            m = -i - 1
            for s_idx, w in enumerate(src):
                col = {}
                put(col, w[:-1], w[-1], 1)
                for k in range(1, m):
                    merged = w[:k - 1] + (grp.mul(w[k - 1], w[k]),) + w[k + 1:]
                    put(col, merged, grp.identity, (-1) ** (m - k))
                put(col, w[1:], grp.identity, (-1) ** m)
                cols[s_idx] = col
        elif i == -1:
            col = {}
            for g in range(n):
                put(col, (), g, 1)
            cols[0] = col
        else:
            for t_idx, w in enumerate(self.basis(i + 1)):
                for s_w, g, c in self._cochain_terms(w, i):
                    s_idx2 = self._basis_index(i, s_w)
                    col = cols.setdefault(s_idx2, {})
                    zg = col.setdefault(t_idx, {})
                    zg[g] = zg.get(g, 0) + c
                    if not zg[g]:
                        del zg[g]
                        if not zg:
                            del col[t_idx]
        self._diffs[i] = cols
        return cols

    def _basis_index(self, i, w):
        n = self.group.order
        idx = 0
        for x in w:
            idx = idx * n + x
        return idx

    def _cochain_terms(self, w, i):
        """(source tuple, acting element, sign) triples of (delta f)(w) for
        the standard inhomogeneous differential, w in G^(i+1)."""
        grp = self.group
        out = [(w[1:], w[0], 1)]
        for k in range(1, i + 1):
            merged = w[:k - 1] + (grp.mul(w[k - 1], w[k]),) + w[k + 1:]
            out.append((merged, grp.identity, (-1) ** k))
        out.append((w[:-1], grp.identity, (-1) ** (i + 1)))
        return out

    def ring_compose_is_zero(self, i):
        """Verify d^{i+1} . d^i = 0 as matrices over the group ring."""
        grp = self.group
        a = self.ring_differential(i)
        b = self.ring_differential(i + 1)
        for s_idx, col in a.items():
            acc = {}
            for mid, zg1 in col.items():
                for tgt, zg2 in b.get(mid, {}).items():
                    bucket = acc.setdefault(tgt, {})
                    for g2, c2 in zg2.items():
                        for g1, c1 in zg1.items():
                            g = grp.mul(g2, g1)
                            bucket[g] = bucket.get(g, 0) + c1 * c2
            for bucket in acc.values():
                if any(bucket.values()):
                    return False
        return True

    # -- specialization at a module ---------------------------------------

    def cochain_group(self, module, i):
        self._check_degree(i)
        return _sum_fgab(module.underlying, self.rank(i))

    def blockified(self, module, i, dom=None, cod=None):
        """The degree i -> i+1 differential specialized at `module`."""
        self._check_degree(i)
        self._check_degree(i + 1)
        na = module.underlying.n
        dom = dom if dom is not None else self.cochain_group(module, i)
        cod = cod if cod is not None else _sum_fgab(module.underlying,
                                                    self.rank(i + 1))
        rows = [[0] * dom.n for _ in range(cod.n)]
        for s_idx, col in self.ring_differential(i).items():
            for t_idx, zg in col.items():
                for g, c in zg.items():
                    act = module.action[g].entries
                    for r in range(na):
                        ar = act[r]
                        for q in range(na):
                            if ar[q]:
                                rows[t_idx * na + r][s_idx * na + q] += c * ar[q]
        return AbMap(dom, cod, IntMatrix(rows, cols=dom.n), check=False)

    def sparse_blockified_columns(self, module, i):
        """Columns of the specialized differential as sparse dicts (for
        free coefficient modules and the acyclicity fast path)."""
        na = module.underlying.n
        ncols = self.rank(i) * na
        cols = [dict() for _ in range(ncols)]
        for s_idx, col in self.ring_differential(i).items():
            for t_idx, zg in col.items():
                for g, c in zg.items():
                    act = module.action[g].entries
                    for r in range(na):
                        ar = act[r]
                        for q in range(na):
                            if ar[q]:
                                d = cols[s_idx * na + q]
                                key = t_idx * na + r
                                d[key] = d.get(key, 0) + c * ar[q]
        return cols, self.rank(i + 1) * na

    def acyclic_at(self, module, i):
        """True iff the specialized complex is exact at degree i.  Fast
        lattice path for relation-free modules, generic homology
        otherwise."""
        self._check_degree(i, public=True)
        if module.underlying.rel.cols == 0:
            out_cols, _ = self.sparse_blockified_columns(module, i)
            nmid = self.rank(i) * module.underlying.n
            rows = {}
            for j, col in enumerate(out_cols):
                for r, val in col.items():
                    rows.setdefault(r, {})[j] = val
            kern = kernel_basis(iter(rows.values()), nmid)
            in_cols, _ = self.sparse_blockified_columns(module, i - 1)
            lat = Lattice(nmid)
            for col in in_cols:
                lat.add(col)
            return all(lat.contains(k) for k in kern)
        h = self.homology(module, i)
        return h.group.is_trivial()

    def homology(self, module, i):
        self._check_degree(i, public=True)
        mid = self.cochain_group(module, i)
        d_in = self.blockified(module, i - 1, cod=mid)
        d_out = self.blockified(module, i, dom=mid)
        return Homology(d_in, d_out)


def _sum_fgab(ab, count):
    """Direct sum of `count` copies of a presented group."""
    n, m = ab.n, ab.rel.cols
    cols = []
    for k in range(count):
        for j in range(m):
            col = [0] * (n * count)
            for ii in range(n):
                col[k * n + ii] = ab.rel.entries[ii][j]
            cols.append(col)
    return FgAb(n * count, IntMatrix.from_columns(cols, n * count))


class CohClass:
    """An element of H^i(G, M): degree, a representative cochain, and its
    canonical coordinates in the cohomology group."""

    __slots__ = ("degree", "module", "rep", "canon", "calc")

    def __init__(self, calc, degree, rep):
        self.calc = calc
        self.degree = degree
        self.module = calc.module
        self.rep = tuple(rep)
        self.canon = calc.homology(degree).class_of(self.rep)

    def group(self):
        return self.calc.homology(self.degree).group

    def is_zero(self):
        return not any(self.canon)

    def add(self, other):
        if other.degree != self.degree:
            raise DegreeMismatch("adding classes of different degrees")
        return CohClass(self.calc, self.degree,
                        tuple(a + b for a, b in zip(self.rep, other.rep)))

    def neg(self):
        return CohClass(self.calc, self.degree, tuple(-a for a in self.rep))

    def __eq__(self, other):
        return (isinstance(other, CohClass) and self.degree == other.degree
                and self.canon == other.canon)

    def __hash__(self):
        return hash((self.degree, self.canon))


class TateCohomology:
    """Calculator for the Tate cohomology of one module over one complex;
    caches cochain groups, differentials and homologies per degree."""

    def __init__(self, complex_, module):
        self.complex = complex_
        self.module = module
        self._groups = {}
        self._diffs = {}
        self._homs = {}

    def cochain_group(self, i):
        if i not in self._groups:
            self._groups[i] = self.complex.cochain_group(self.module, i)
        return self._groups[i]

    def differential(self, i):
        if i not in self._diffs:
            self._diffs[i] = self.complex.blockified(
                self.module, i, dom=self.cochain_group(i),
                cod=self.cochain_group(i + 1))
        return self._diffs[i]

    def homology(self, i):
        if i not in self._homs:
            self.complex._check_degree(i, public=True)
            self._homs[i] = Homology(self.differential(i - 1),
                                     self.differential(i))
        return self._homs[i]

    def group(self, i):
        return self.homology(i).group

    def class_of(self, i, rep):
        return CohClass(self, i, rep)

    def rep_of(self, i, canon):
        return self.homology(i).rep_of(canon)

    def classes(self, i):
        """All classes of a finite cohomology group."""
        h = self.homology(i)
        return [CohClass(self, i, h.rep_of(h.group.canon(e)))
                for e in h.group.elements()]

    def zero_class(self, i):
        return CohClass(self, i, (0,) * self.cochain_group(i).n)


def cohomology(complex_, module, i):
    """(group, class_of, rep_of) at degree i, per the operation contract."""
    calc = TateCohomology(complex_, module)
    h = calc.homology(i)
    return h.group, h.class_of, h.rep_of


def induced_map(calc_dom, calc_cod, f, i):
    """Map on degree-i cohomology induced by an equivariant map f."""
    def push(cls):
        na_d = calc_dom.module.underlying.n
        na_c = calc_cod.module.underlying.n
        r = calc_dom.complex.rank(i)
        out = [0] * (r * na_c)
        for b in range(r):
            chunk = cls.rep[b * na_d:(b + 1) * na_d]
            img = f.apply(chunk)
            for l, val in enumerate(img):
                out[b * na_c + l] = val
        return CohClass(calc_cod, i, out)
    return push


# -- short exact sequences and connecting homomorphisms ---------------------

class ExtensionData:
    """0 -> A -> B -> C -> 0 of equivariant maps, exactness verified."""

    __slots__ = ("a_to_b", "b_to_c", "a", "b", "c", "_section")

    def __init__(self, a_to_b, b_to_c):
        self.a_to_b = a_to_b
        self.b_to_c = b_to_c
        self.a, self.b, self.c = a_to_b.dom, a_to_b.cod, b_to_c.cod
        if not a_to_b.ab.is_injective():
            raise ValueError("left map is not injective")
        if not b_to_c.ab.is_surjective():
            raise ValueError("right map is not surjective")
        h = Homology(a_to_b.ab, b_to_c.ab)
        if not h.group.is_trivial():
            raise ValueError("sequence is not exact in the middle")
        self._section = None

    def section_matrix(self):
        """A Z-linear section of B ->> C on generators (not equivariant)."""
        if self._section is None:
            cols = [self.b_to_c.ab.solve(self.c.underlying.gen(j))
                    for j in range(self.c.underlying.n)]
            self._section = IntMatrix.from_columns(cols, self.b.underlying.n)
        return self._section


def connecting_hom(complex_, ext, i, calc_c=None, calc_a=None,
                   section=None):
    """The connecting homomorphism H^i(C) -> H^{i+1}(A) by the zig-zag:
    lift a representative through B, apply the differential, pull back.

    A custom (Z-linear) `section` matrix may be supplied to re-randomize
    the lift; the class of the result does not depend on it.
    """
    calc_c = calc_c or TateCohomology(complex_, ext.c)
    calc_a = calc_a or TateCohomology(complex_, ext.a)
    calc_b = TateCohomology(complex_, ext.b)
    sec = section if section is not None else ext.section_matrix()
    na_c = ext.c.underlying.n
    na_b = ext.b.underlying.n
    na_a = ext.a.underlying.n
    r_i = complex_.rank(i)
    r_i1 = complex_.rank(i + 1)

    def delta(cls):
        if cls.degree != i:
            raise DegreeMismatch(f"class has degree {cls.degree}, need {i}")
        lift = [0] * (r_i * na_b)
        for b in range(r_i):
            chunk = cls.rep[b * na_c:(b + 1) * na_c]
            img = sec.apply(chunk)
            for l, val in enumerate(img):
                lift[b * na_b + l] = val
        db = calc_b.differential(i).apply(lift)
        out = [0] * (r_i1 * na_a)
        for b in range(r_i1):
            chunk = db[b * na_b:(b + 1) * na_b]
            pre = ext.a_to_b.ab.solve(chunk)
            if pre is None:
                raise ValueError("differential of lift does not pull back; "
                                 "input was not a cocycle")
            for l, val in enumerate(pre):
                out[b * na_a + l] = val
        return CohClass(calc_a, i + 1, out)

    return delta


# -- 1-cocycles and extension classes ---------------------------------------

class Cocycle1:
    """Normalized 1-cocycle G -> M: f(gh) = f(g) + g f(h), f(1) = 0."""

    __slots__ = ("module", "values")

    def __init__(self, module, values, check=True):
        self.module = module
        self.values = tuple(tuple(v) for v in values)
        grp = module.group
        if len(self.values) != grp.order:
            raise ValueError("need one value per group element")
        if check:
            ab = module.underlying
            if not ab.is_zero(self.values[grp.identity]):
                raise ValueError("cocycle not normalized at the identity")
            for g in range(grp.order):
                for h in range(grp.order):
                    lhs = self.values[grp.mul(g, h)]
                    rhs = ab.add(self.values[g], module.act(g, self.values[h]))
                    if not ab.eq(lhs, rhs):
                        raise ValueError(f"cocycle identity fails at ({g},{h})")

    def as_cochain(self):
        """Flat degree-1 cochain coordinates for the resolution."""
        out = []
        for v in self.values:
            out.extend(v)
        return tuple(out)

    @classmethod
    def from_cochain(cls, module, rep, check=True):
        na = module.underlying.n
        vals = [tuple(rep[g * na:(g + 1) * na])
                for g in range(module.group.order)]
        return cls(module, vals, check=check)

    def add(self, other):
        vals = [self.module.underlying.add(a, b)
                for a, b in zip(self.values, other.values)]
        return Cocycle1(self.module, vals, check=False)

    def neg(self):
        return Cocycle1(self.module,
                        [self.module.underlying.neg(v) for v in self.values],
                        check=False)

    def is_coboundary(self):
        """Whether f(g) = g m - m for some m; returns (flag, witness)."""
        ab = self.module.underlying
        n = ab.n
        grp = self.module.group
        rows = []
        target = []
        for g in range(grp.order):
            delta = self.module.action[g].entries
            for r in range(n):
                rows.append([delta[r][q] - (1 if r == q else 0)
                             for q in range(n)])
            target.extend(self.values[g])
        big = _sum_fgab(ab, grp.order)
        stack = AbMap(ab, big, IntMatrix(rows, cols=n), check=False)
        m = stack.solve(tuple(target))
        return (m is not None), m


def cocycle_to_extension(hom, f):
    """Extension 0 -> A -> A+C -> C -> 0 built from a 1-cocycle f valued
    in Hom(C, A): the middle is A (+) C with g(a, c) = (ga + f(g)(gc), gc).
    """
    if not isinstance(f, Cocycle1) or f.module is not hom.module:
        raise ValueError("cocycle must take values in the given Hom module")
    cmod, amod = hom.c, hom.a
    grp = amod.group
    na, nc = amod.underlying.n, cmod.underlying.n
    rel_cols = []
    for j in range(amod.underlying.rel.cols):
        col = list(amod.underlying.rel.column(j)) + [0] * nc
        rel_cols.append(col)
    for j in range(cmod.underlying.rel.cols):
        col = [0] * na + list(cmod.underlying.rel.column(j))
        rel_cols.append(col)
    ab = FgAb(na + nc, IntMatrix.from_columns(rel_cols, na + nc))
    acts = []
    for g in range(grp.order):
        fmat = hom.to_matrix(f.values[g])
        fg = fmat.mul(cmod.action[g])
        rows = []
        for r in range(na):
            rows.append(list(amod.action[g].entries[r]) + list(fg.entries[r]))
        for r in range(nc):
            rows.append([0] * na + list(cmod.action[g].entries[r]))
        acts.append(IntMatrix(rows, cols=na + nc))
    bmod = GModule(grp, ab, acts)
    incl = GMap(amod, bmod,
                IntMatrix.from_columns([tuple(1 if i == j else 0
                                              for i in range(na + nc))
                                        for j in range(na)], na + nc))
    proj = GMap(bmod, cmod,
                IntMatrix([[1 if j == na + i else 0 for j in range(na + nc)]
                           for i in range(nc)], cols=na + nc))
    return ExtensionData(incl, proj)


def extension_to_cocycle(hom, ext, section=None):
    """The 1-cocycle g -> (g.s - s) of a Z-linear section s of B ->> C,
    read inside Hom(C, A)."""
    if hom.c is not ext.c or hom.a is not ext.a:
        if (hom.c.underlying.n != ext.c.underlying.n
                or hom.a.underlying.n != ext.a.underlying.n):
            raise ValueError("Hom module does not match the sequence")
    sec = section if section is not None else ext.section_matrix()
    grp = ext.b.group
    vals = []
    for g in range(grp.order):
        ginv = grp.inv[g]
        twisted = ext.b.action[g].mul(sec).mul(ext.c.action[ginv])
        diff = IntMatrix([[a - b for a, b in zip(ra, rb)]
                          for ra, rb in zip(twisted.entries, sec.entries)],
                         cols=sec.cols)
        cols = []
        for j in range(diff.cols):
            pre = ext.a_to_b.ab.solve(diff.column(j))
            if pre is None:
                raise ValueError("section difference does not land in A")
            cols.append(pre)
        fmat = IntMatrix.from_columns(cols, ext.a.underlying.n)
        vals.append(hom.from_matrix(fmat))
    return Cocycle1(hom.module, vals)


# -- Shapiro in degree -2 ----------------------------------------------------

def shapiro_hminus2(complex_, group, sub):
    """The map H^ab -> H^-2(G, Z[G] (x)_{Z[H]} Z) sending h to the class
    of the chain ([h], trivial coset); returns (map, H^ab, calculator,
    induced module) with bijectivity verified."""
    from .gmodules import perm_module
    induced, reps, rho, pos = perm_module(group, sub)
    calc = TateCohomology(complex_, induced)
    h = calc.homology(-2)
    hgrp, elems = subgroup_as_group(sub)
    hab, proj, _ = abelianization(hgrp)
    na = induced.underlying.n
    trivial_coset = pos[group.identity]
    cols = []
    for new_idx, parent_elt in enumerate(elems):
        rep = [0] * (complex_.rank(-2) * na)
        b_idx = complex_._basis_index(-2, (parent_elt,))
        rep[b_idx * na + trivial_coset] = 1
        cols.append(h.class_of(tuple(rep)))
    # columns are canonical coordinates in the homology group
    mat = IntMatrix.from_columns([h.group.from_canon(c) for c in cols],
                                 h.group.n)
    iso = AbMap(hab, h.group, mat)
    return iso, hab, calc, induced


# -- cup product with a degree-1 class (bidegree (-2, 1) -> -1) --------------

def _aug_sequence(group, module, std=None):
    """0 -> aug (x) M -> Z[G] (x) M -> M -> 0 with the diagonal action."""
    std = std or standard_modules(group, _full_subgroup(group))
    reg = std["regular"]
    augm = std["aug_ideal"]
    aug_incl = std["aug_ideal_incl"]
    t_aug = TensorModule(augm, module)
    t_reg = TensorModule(reg, module)
    na = module.underlying.n
    # inclusion (x) id
    cols = []
    for j in range(augm.underlying.n):
        icol = aug_incl.ab.mat.column(j)
        for l in range(na):
            col = [0] * (reg.underlying.n * na)
            for i, v in enumerate(icol):
                if v:
                    col[i * na + l] = v
            cols.append(col)
    left = GMap(t_aug.module, t_reg.module,
                IntMatrix.from_columns(cols, reg.underlying.n * na))
    # augmentation (x) id
    rows = []
    for l in range(na):
        row = [0] * (reg.underlying.n * na)
        for i in range(reg.underlying.n):
            row[i * na + l] = 1
        rows.append(row)
    right = GMap(t_reg.module, module,
                 IntMatrix(rows, cols=reg.underlying.n * na))
    return ExtensionData(left, right), t_aug, t_reg


def _full_subgroup(group):
    from .groups import Subgroup
    return Subgroup(group, range(group.order))


def cup_with_h1(complex_, xi, z, calc_c=None):
    """Cup product H^-2(G, C) x H^1(G, A) -> H^-1(G, C (x) A).

    xi is a degree-1 class or a Cocycle1 valued in A; z a degree -2 class
    with coefficients in C.  Computed through the dimension shift by the
    augmentation sequence: push z to H^-1(aug (x) C), pair with the
    cocycle by v = -sum_g (g.w) (x) xi(g) in degree 0, and pull back
    through the (bijective) connecting map of the augmentation sequence
    of C (x) A.
    """
    if isinstance(xi, CohClass):
        if xi.degree != 1:
            raise DegreeMismatch("xi must have degree 1")
        xi = Cocycle1.from_cochain(xi.module, xi.rep, check=False)
    if z.degree != -2:
        raise DegreeMismatch("z must have degree -2")
    amod = xi.module
    cmod = z.module
    group = complex_.group
    std = standard_modules(group, _full_subgroup(group))
    ext_c, t_aug_c, _ = _aug_sequence(group, cmod, std)
    calc_c = calc_c or z.calc
    calc_augc = TateCohomology(complex_, t_aug_c.module)
    delta1 = connecting_hom(complex_, ext_c, -2, calc_c=calc_c,
                            calc_a=calc_augc)
    w_cls = delta1(z)
    w = w_cls.rep  # element of aug (x) C (degree -1 cochain group)
    ca = TensorModule(cmod, amod)
    t3 = TensorModule(t_aug_c.module, amod)
    v = [0] * t3.module.underlying.n
    for g in range(group.order):
        gw = t_aug_c.module.act(g, w)
        term = t3.pure(gw, xi.values[g])
        v = [x - y for x, y in zip(v, term)]
    ext_ca, t_aug_ca, _ = _aug_sequence(group, ca.module, std)
    # aug (x) (C (x) A) and (aug (x) C) (x) A share coordinates
    calc_ca = TateCohomology(complex_, ca.module)
    calc_t3 = TateCohomology(complex_, t3.module)
    delta2 = connecting_hom(complex_, ext_ca, -1, calc_c=calc_ca,
                            calc_a=calc_t3)
    h_ca = calc_ca.homology(-1)
    h_t3 = calc_t3.homology(-1 + 1)
    cols = []
    for j in range(h_ca.group.n):
        rep = h_ca.rep_of(h_ca.group.canon(h_ca.group.gen(j)))
        cols.append(h_t3.group.from_canon(delta2(
            CohClass(calc_ca, -1, rep)).canon))
    dmat = AbMap(h_ca.group, h_t3.group,
                 IntMatrix.from_columns(cols, h_t3.group.n), check=False)
    target = h_t3.group.from_canon(CohClass(calc_t3, 0, v).canon)
    sol = dmat.solve(target)
    if sol is None:
        raise ValueError("cup value escaped the image of the dimension "
                         "shift; conventions are inconsistent")
    rep = h_ca.rep_of(h_ca.group.canon(sol))
    return CohClass(calc_ca, -1, rep), ca


# -- Ext^1(aug, A) = H^2(G, A) ------------------------------------------------

def build_ext1_data(complex_, group, amod, std=None):
    """The sequence 0 -> A -> Hom(Z[G], A) -> Hom(aug, A) -> 0 together
    with Hom-module wrappers; returns dict of parts."""
    std = std or standard_modules(group, _full_subgroup(group))
    reg, augm, aug_incl = std["regular"], std["aug_ideal"], std["aug_ideal_incl"]
    hom_reg = HomModule(reg, amod)
    hom_aug = HomModule(augm, amod)
    na = amod.underlying.n
    # A -> Hom(Z[G], A): a |-> (x |-> eps(x) a)
    cols = []
    for m in range(na):
        fmat = IntMatrix([[1 if r == m else 0 for _ in range(reg.underlying.n)]
                          for r in range(na)], cols=reg.underlying.n)
        cols.append(hom_reg.from_matrix(fmat))
    left = GMap(amod, hom_reg.module,
                IntMatrix.from_columns(cols, hom_reg.module.underlying.n))
    # restriction Hom(Z[G], A) -> Hom(aug, A)
    cols = []
    for j in range(hom_reg.module.underlying.n):
        fmat = hom_reg.to_matrix(hom_reg.module.underlying.gen(j))
        restricted = fmat.mul(aug_incl.ab.mat)
        cols.append(hom_aug.from_matrix(restricted))
    right = GMap(hom_reg.module, hom_aug.module,
                 IntMatrix.from_columns(cols, hom_aug.module.underlying.n))
    ext = ExtensionData(left, right)
    return {"ext": ext, "hom_reg": hom_reg, "hom_aug": hom_aug}


def ext1_class_to_h2(complex_, group, amod, f, data=None):
    """H^2(G, A) class of a 1-cocycle f valued in Hom(aug ideal, A)."""
    data = data or build_ext1_data(complex_, group, amod)
    ext = data["ext"]
    calc_c = TateCohomology(complex_, ext.c)
    calc_a = TateCohomology(complex_, amod)
    delta = connecting_hom(complex_, ext, 1, calc_c=calc_c, calc_a=calc_a)
    cls = CohClass(calc_c, 1, f.as_cochain())
    return delta(cls), calc_a


ext1_aug_to_h2 = ext1_class_to_h2
