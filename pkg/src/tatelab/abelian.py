"""Finitely generated abelian groups presented by integer relation matrices.

A group is Z^n modulo the column span of a relation matrix.  Elements are
plain integer coordinate tuples in the presentation's generators; equality
and hashing go through a canonical form computed from the Smith normal
form of the relations.  Maps carry their matrix on generators and are
validated at construction.
"""

from __future__ import annotations

import itertools
from bisect import bisect_left
from math import gcd, prod

from .lattice import (IntMatrix, Lattice, _snf_data, kernel_basis,
                      solve_matrix)


class NonComplex(Exception):
    """Raised when homology is requested of maps that do not compose to 0."""


def _chain_from_multiset(ds):
    """Recombine torsion moduli into an invariant-factor chain d1 | d2 | ..."""
    primes = {}
    for d in ds:
        n, p = d, 2
        while p * p <= n:
            if n % p == 0:
                e = 0
                while n % p == 0:
                    n //= p
                    e += 1
                primes.setdefault(p, []).append(e)
            p += 1
        if n > 1:
            primes.setdefault(n, []).append(1)
    for p in primes:
        primes[p].sort()
    chain = []
    while any(primes.values()):
        d = 1
        for p, es in primes.items():
            if es:
                d *= p ** es.pop()
        chain.append(d)
    chain.reverse()
    return tuple(chain)


class FgAb:
    """Finitely generated abelian group Z^n / (column span of rel).

    An empty relation matrix presents the free group Z^n.
    """

    __slots__ = ("n", "rel", "_mods", "_u", "_uinv", "_rel_lat",
                 "_canon_idx", "_inv_factors")

    def __init__(self, n, rel=None):
        n = int(n)
        if rel is None:
            rel = IntMatrix([[] for _ in range(n)], cols=0)
        if not isinstance(rel, IntMatrix):
            rel = IntMatrix(rel)
        if rel.rows != n:
            raise ValueError(f"relation matrix has {rel.rows} rows, expected {n}")
        if rel.cols > max(n, 32):
            # large redundant relation sets: keep a lattice basis instead
            lat = Lattice(n)
            for j in range(rel.cols):
                lat.add(rel.column(j))
            rel = IntMatrix.from_columns(lat.basis(), n)
        self.n = n
        self.rel = rel
        self._rel_lat = None
        self._inv_factors = None
        if all(sum(1 for i in range(n) if rel.entries[i][j]) <= 1
               for j in range(rel.cols)):
            # every relation touches a single generator: no basis change needed
            mods = [0] * n
            for j in range(rel.cols):
                for i in range(n):
                    x = rel.entries[i][j]
                    if x:
                        mods[i] = gcd(mods[i], abs(x))
            self._mods = tuple(mods)
            self._u = None
            self._uinv = None
        else:
            u, d, _, uinv, _ = _snf_data(rel)
            mods = [0] * n
            for i in range(min(n, rel.cols)):
                mods[i] = d.entries[i][i]
            self._mods = tuple(mods)
            self._u = u
            self._uinv = uinv
        self._canon_idx = tuple(i for i, m in enumerate(self._mods) if m != 1)

    # -- elements ---------------------------------------------------------

    def zero(self):
        return (0,) * self.n

    def canon(self, x):
        """Canonical coordinates; two vectors are equal in the group iff
        their canonical coordinates coincide."""
        if len(x) != self.n:
            raise ValueError("coordinate length mismatch")
        y = x if self._u is None else self._u.apply(x)
        out = []
        for i in self._canon_idx:
            m = self._mods[i]
            out.append(y[i] % m if m else y[i])
        return tuple(out)

    def from_canon(self, c):
        y = [0] * self.n
        for i, v in zip(self._canon_idx, c):
            y[i] = v
        if self._uinv is None:
            return tuple(y)
        return self._uinv.apply(y)

    def eq(self, x, y):
        return self.canon(x) == self.canon(y)

    def is_zero(self, x):
        return not any(self.canon(x))

    def add(self, x, y):
        return tuple(a + b for a, b in zip(x, y))

    def sub(self, x, y):
        return tuple(a - b for a, b in zip(x, y))

    def neg(self, x):
        return tuple(-a for a in x)

    def smul(self, k, x):
        return tuple(k * a for a in x)

    def gen(self, i):
        return tuple(1 if j == i else 0 for j in range(self.n))

    def gens(self):
        return [self.gen(i) for i in range(self.n)]

    def order_of(self, x):
        c = self.canon(x)
        n = 1
        for i, v in zip(self._canon_idx, c):
            m = self._mods[i]
            if m == 0:
                if v:
                    return 0
            elif v:
                n = n * (m // gcd(m, v)) // gcd(n, m // gcd(m, v))
        return n

    # -- structure --------------------------------------------------------

    def invariant_factors(self):
        """Torsion invariant factors d1 | d2 | ... (entries > 1 only)."""
        if self._inv_factors is None:
            ds = [self._mods[i] for i in self._canon_idx if self._mods[i] > 1]
            if self._u is None:
                self._inv_factors = _chain_from_multiset(ds)
            else:
                # SNF already produced a divisibility chain
                self._inv_factors = tuple(d for d in ds)
        return self._inv_factors

    def free_rank(self):
        return sum(1 for i in self._canon_idx if self._mods[i] == 0)

    def is_finite(self):
        return self.free_rank() == 0

    def is_free(self):
        return not self.invariant_factors()

    def is_trivial(self):
        return self.is_finite() and self.torsion_order() == 1

    def torsion_order(self):
        return prod(self.invariant_factors()) if self.invariant_factors() else 1

    def order(self):
        """Group order; 0 means infinite."""
        return self.torsion_order() if self.is_finite() else 0

    def same_invariants(self, other):
        return (self.invariant_factors() == other.invariant_factors()
                and self.free_rank() == other.free_rank())

    def elements(self):
        """All elements of a finite group, in a deterministic order."""
        if not self.is_finite():
            raise ValueError("infinite group is not enumerable")
        ranges = [range(self._mods[i]) for i in self._canon_idx]
        for combo in itertools.product(*ranges):
            yield self.from_canon(combo)

    def smith_gens(self):
        """Independent generators (one per canonical coordinate); generator
        i has order mods[i] (0 = infinite)."""
        out = []
        k = len(self._canon_idx)
        for i in range(k):
            out.append(self.from_canon(tuple(1 if j == i else 0
                                             for j in range(k))))
        return out

    def rel_lattice(self):
        if self._rel_lat is None:
            lat = Lattice(self.n)
            for j in range(self.rel.cols):
                lat.add(self.rel.column(j))
            self._rel_lat = lat
        return self._rel_lat

    def reduce_rep(self, x):
        """Small deterministic coset representative of x."""
        return self.rel_lattice().reduce(x)

    def contains_in_relations(self, x):
        return self.rel_lattice().contains(x)

    def __repr__(self):
        parts = ["Z"] * self.free_rank()
        parts += [f"Z/{d}" for d in self.invariant_factors()]
        return "FgAb(" + (" + ".join(parts) if parts else "0") + ")"


def fgab_from_relations(n, rel):
    """Public constructor mirroring the relation-matrix presentation."""
    return FgAb(n, rel)


class AbMap:
    """Homomorphism between presented groups, given by a matrix on
    generators.  Construction verifies every domain relation is carried
    into the codomain's relation lattice."""

    __slots__ = ("dom", "cod", "mat", "_solve_snf", "_img_lat")

    def __init__(self, dom, cod, mat, check=True):
        if not isinstance(mat, IntMatrix):
            mat = IntMatrix(mat, cols=dom.n)
        if mat.rows != cod.n or mat.cols != dom.n:
            raise ValueError(f"map matrix is {mat.shape}, expected "
                             f"({cod.n}, {dom.n})")
        self.dom = dom
        self.cod = cod
        self.mat = mat
        self._solve_snf = None
        self._img_lat = None
        if check:
            lat = cod.rel_lattice()
            for j in range(dom.rel.cols):
                img = mat.apply(dom.rel.column(j))
                if not lat.contains(img):
                    raise ValueError("matrix does not respect domain relations")

    @classmethod
    def identity(cls, grp):
        return cls(grp, grp, IntMatrix.identity(grp.n), check=False)

    @classmethod
    def zero(cls, dom, cod):
        return cls(dom, cod, IntMatrix.zeros(cod.n, dom.n), check=False)

    def apply(self, x):
        return self.mat.apply(x)

    def compose(self, other):
        """self after other."""
        return AbMap(other.dom, self.cod, self.mat.mul(other.mat), check=False)

    def add(self, other):
        m = IntMatrix([[a + b for a, b in zip(ra, rb)]
                       for ra, rb in zip(self.mat.entries, other.mat.entries)],
                      cols=self.mat.cols)
        return AbMap(self.dom, self.cod, m, check=False)

    def neg(self):
        return AbMap(self.dom, self.cod,
                     IntMatrix([[-a for a in r] for r in self.mat.entries],
                               cols=self.mat.cols), check=False)

    def __eq__(self, other):
        if not isinstance(other, AbMap):
            return NotImplemented
        if self.mat.cols != other.mat.cols or self.cod.n != other.cod.n:
            return False
        for j in range(self.mat.cols):
            if not self.cod.eq(self.mat.column(j), other.mat.column(j)):
                return False
        return True

    def __hash__(self):
        raise TypeError("AbMap is unhashable")

    def is_zero_map(self):
        return all(self.cod.is_zero(self.mat.column(j))
                   for j in range(self.mat.cols))

    # -- solving ----------------------------------------------------------

    def _solver(self):
        if self._solve_snf is None:
            aug = self.mat.hstack(self.cod.rel)
            self._solve_snf = (aug, _snf_data(aug))
        return self._solve_snf

    def solve(self, y):
        """Some x with f(x) = y in the codomain, or None."""
        aug, snf = self._solver()
        sol = solve_matrix(aug, y, snf_cache=snf)
        if sol is None:
            return None
        return tuple(sol[:self.dom.n])

    def image_lattice(self):
        """Lattice in Z^{cod.n} spanned by generator images and codomain
        relations; membership = lying in the image subgroup."""
        if self._img_lat is None:
            lat = Lattice(self.cod.n)
            for j in range(self.mat.cols):
                lat.add(self.mat.column(j))
            for j in range(self.cod.rel.cols):
                lat.add(self.cod.rel.column(j))
            self._img_lat = lat
        return self._img_lat

    def in_image(self, y):
        return self.image_lattice().contains(y)

    # -- kernel / image / cokernel ----------------------------------------

    def kernel_lattice_basis(self):
        """Basis of {x in Z^dom.n : f(x) = 0 in cod} as a lattice."""
        aug = self.mat.hstack(self.cod.rel)
        cols = kernel_basis(aug.entries, aug.cols)
        lat = Lattice(self.dom.n)
        for col in cols:
            lat.add(col[:self.dom.n])
        return lat

    def kernel(self):
        """(K, incl) with incl an injective map K -> dom whose image is
        the kernel subgroup."""
        lat = self.kernel_lattice_basis()
        basis = lat.basis()
        k = len(basis)
        incl_mat = IntMatrix.from_columns(basis, self.dom.n)
        rel_cols = []
        for j in range(self.dom.rel.cols):
            coeffs = _express_in_echelon(lat, self.dom.rel.column(j))
            rel_cols.append(tuple(coeffs))
        kgrp = FgAb(k, IntMatrix.from_columns(rel_cols, k))
        return kgrp, AbMap(kgrp, self.dom, incl_mat, check=False)

    def image(self):
        """(I, incl, proj): dom ->> I >-> cod factoring f."""
        lat = self.kernel_lattice_basis()
        rel = IntMatrix.from_columns(lat.basis(), self.dom.n)
        igrp = FgAb(self.dom.n, rel)
        incl = AbMap(igrp, self.cod, self.mat, check=False)
        proj = AbMap(self.dom, igrp, IntMatrix.identity(self.dom.n), check=False)
        return igrp, incl, proj

    def cokernel(self):
        """(Q, proj) with proj: cod ->> cod/im f."""
        rel = self.cod.rel.hstack(self.mat)
        q = FgAb(self.cod.n, rel)
        return q, AbMap(self.cod, q, IntMatrix.identity(self.cod.n), check=False)

    def is_injective(self):
        k, _ = self.kernel()
        return k.is_trivial()

    def is_surjective(self):
        q, _ = self.cokernel()
        return q.is_trivial()

    def is_bijective(self):
        return self.is_injective() and self.is_surjective()


def _express_in_echelon(lat, vec):
    """Coefficients of vec over lat's basis rows; vec must lie in lat."""
    v = Lattice._to_sparse(vec)
    coeffs = [0] * len(lat.rows)
    while v:
        piv = min(v)
        i = bisect_left(lat.pivots, piv)
        if i < len(lat.pivots) and lat.pivots[i] == piv:
            idx = i
        else:
            raise ValueError("vector not in lattice")
        row = lat.rows[idx]
        if v[piv] % row[piv]:
            raise ValueError("vector not in lattice")
        q = v[piv] // row[piv]
        coeffs[idx] = q
        for c, val in row.items():
            nv = v.get(c, 0) - q * val
            if nv:
                v[c] = nv
            elif c in v:
                del v[c]
    return coeffs


def ab_quotient(grp, gens):
    """(Q, proj) where Q = grp / <gens>."""
    cols = [tuple(g) for g in gens]
    rel = grp.rel.hstack(IntMatrix.from_columns(cols, grp.n))
    q = FgAb(grp.n, rel)
    return q, AbMap(grp, q, IntMatrix.identity(grp.n), check=False)


def ab_kernel(f):
    """(K, incl) for a map f; mirrors AbMap.kernel."""
    return f.kernel()


def subgroup_span(grp, elems):
    """(S, incl) with S presented on the given elements of grp."""
    free = FgAb(len(elems))
    to_grp = AbMap(free, grp,
                   IntMatrix.from_columns([tuple(e) for e in elems], grp.n),
                   check=False)
    sgrp, incl, _ = to_grp.image()
    return sgrp, incl


class Homology:
    """Ker(d_out)/Im(d_in) at the middle of d_in: A -> B, d_out: B -> C."""

    __slots__ = ("group", "_kgrp", "_incl", "_proj", "middle")

    def __init__(self, d_in, d_out):
        if d_in.cod is not d_out.dom and d_in.cod.n != d_out.dom.n:
            raise ValueError("maps are not composable")
        comp = d_out.compose(d_in)
        if not comp.is_zero_map():
            raise NonComplex("d_out . d_in is nonzero")
        self.middle = d_out.dom
        kgrp, incl = d_out.kernel()
        imgs = []
        for j in range(d_in.dom.n):
            v = d_in.mat.column(j)
            c = incl.solve(v)
            if c is None:
                raise NonComplex("image of d_in escapes the kernel")
            imgs.append(c)
        q, proj = ab_quotient(kgrp, imgs)
        self.group = q
        self._kgrp = kgrp
        self._incl = incl
        self._proj = proj

    def class_of(self, z):
        """Class of a cycle z (an element of the middle group)."""
        c = self._incl.solve(z)
        if c is None:
            raise ValueError("element is not a cycle")
        return self.group.canon(c)

    def rep_of(self, cls_canon):
        """A deterministic representative cycle of a class."""
        c = self.group.from_canon(cls_canon)
        return self.middle.reduce_rep(self._incl.apply(c))

    def is_cycle(self, z):
        return self._incl.solve(z) is not None


def homology_at(d_in, d_out):
    """(group, class_of, rep_of) of the homology at the shared module."""
    h = Homology(d_in, d_out)
    return h.group, h.class_of, h.rep_of
