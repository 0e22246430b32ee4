"""Finite groups given by explicit multiplication tables.

Everything is index-based: a group of order n has elements 0..n-1 and a
table with table[i][j] = index of the product.  Orders stay small (the
targeted instances have |G| <= 16 and group extensions up to a few
hundred elements), so full tables beat any permutation-group machinery.
"""

from __future__ import annotations

import itertools

from .abelian import FgAb
from .lattice import IntMatrix


class NotAGroup(Exception):
    def __init__(self, axiom, witness=None):
        self.axiom = axiom
        self.witness = witness
        super().__init__(f"not a group: {axiom} violated (witness {witness!r})")


class NotACocycle(Exception):
    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"2-cocycle identity fails at {witness!r}")


class FiniteGroup:
    __slots__ = ("order", "table", "identity", "inv", "labels")

    def __init__(self, table, identity, inv, labels=None):
        self.table = tuple(tuple(row) for row in table)
        self.order = len(self.table)
        self.identity = identity
        self.inv = tuple(inv)
        self.labels = tuple(labels) if labels else tuple(str(i) for i in range(self.order))

    def mul(self, a, b):
        return self.table[a][b]

    def inverse(self, a):
        return self.inv[a]

    def conj(self, g, x):
        """g x g^-1."""
        return self.mul(self.mul(g, x), self.inv[g])

    def elements(self):
        return range(self.order)

    def element_order(self, a):
        k, x = 1, a
        while x != self.identity:
            x = self.mul(x, a)
            k += 1
        return k

    def commutator(self, a, b):
        return self.mul(self.mul(a, b), self.mul(self.inv[a], self.inv[b]))

    def is_abelian(self):
        t = self.table
        return all(t[i][j] == t[j][i] for i in range(self.order)
                   for j in range(i))

    def closure(self, gens):
        """Sorted element set of the subgroup generated by gens."""
        seen = {self.identity}
        frontier = [self.identity]
        gens = sorted(set(gens) | {self.identity})
        while frontier:
            new = []
            for x in frontier:
                for g in gens:
                    for y in (self.mul(x, g), self.mul(g, x)):
                        if y not in seen:
                            seen.add(y)
                            new.append(y)
            frontier = new
        return tuple(sorted(seen))

    def subgroup(self, elems):
        return Subgroup(self, elems)

    def generating_set(self):
        """A small generating set, chosen deterministically."""
        gens = []
        cur = {self.identity}
        while len(cur) < self.order:
            nxt = min(x for x in range(self.order) if x not in cur)
            gens.append(nxt)
            cur = set(self.closure(gens))
        return tuple(gens)

    def all_subgroups(self, max_gens=2):
        """Subgroups generated by up to max_gens elements (all subgroups,
        for the small groups this package targets)."""
        found = {(self.identity,)}
        singles = [self.closure([g]) for g in range(self.order)]
        found.update(singles)
        if max_gens >= 2:
            for a in range(self.order):
                for b in range(a + 1, self.order):
                    found.add(self.closure([a, b]))
        return [Subgroup(self, s) for s in sorted(found, key=lambda s: (len(s), s))]

    def __repr__(self):
        return f"FiniteGroup(order={self.order})"


class Subgroup:
    __slots__ = ("group", "elems", "_set")

    def __init__(self, group, elems):
        elems = tuple(sorted(set(elems)))
        self.group = group
        self.elems = elems
        self._set = frozenset(elems)
        if group.identity not in self._set:
            raise NotAGroup("identity", witness=elems)
        for a in elems:
            if group.inv[a] not in self._set:
                raise NotAGroup("inverses", witness=a)
            for b in elems:
                if group.mul(a, b) not in self._set:
                    raise NotAGroup("closure", witness=(a, b))

    def __contains__(self, x):
        return x in self._set

    def __len__(self):
        return len(self.elems)

    def __eq__(self, other):
        return isinstance(other, Subgroup) and self.elems == other.elems \
            and self.group is other.group

    def __hash__(self):
        return hash(self.elems)

    def is_full(self):
        return len(self.elems) == self.group.order

    def __repr__(self):
        return f"Subgroup({list(self.elems)})"


class GroupHom:
    __slots__ = ("dom", "cod", "images")

    def __init__(self, dom, cod, images, check=True):
        self.dom = dom
        self.cod = cod
        self.images = tuple(images)
        if len(self.images) != dom.order:
            raise ValueError("image table length mismatch")
        if check:
            if self.images[dom.identity] != cod.identity:
                raise NotAGroup("hom-identity", witness=dom.identity)
            for a in range(dom.order):
                for b in range(dom.order):
                    if self.images[dom.mul(a, b)] != cod.mul(self.images[a],
                                                             self.images[b]):
                        raise NotAGroup("hom-multiplicativity", witness=(a, b))

    def __call__(self, x):
        return self.images[x]

    def is_surjective(self):
        return len(set(self.images)) == self.cod.order

    def kernel_elements(self):
        return tuple(i for i, v in enumerate(self.images)
                     if v == self.cod.identity)


def group_from_table(table, labels=None, check="auto"):
    """Validate a multiplication table and wrap it as a FiniteGroup.

    Associativity is checked on all triples for orders <= 64 and on a
    deterministic sample beyond that (larger tables only arise from the
    extension constructor, which is associative by the cocycle identity).
    """
    n = len(table)
    for i, row in enumerate(table):
        if len(row) != n:
            raise NotAGroup("shape", witness=i)
        for x in row:
            if not (0 <= x < n):
                raise NotAGroup("range", witness=(i, x))
    for i in range(n):
        if len(set(table[i])) != n:
            raise NotAGroup("cancellation", witness=("row", i))
        if len({table[j][i] for j in range(n)}) != n:
            raise NotAGroup("cancellation", witness=("column", i))
    identity = None
    for e in range(n):
        if all(table[e][j] == j for j in range(n)) and \
           all(table[i][e] == i for i in range(n)):
            identity = e
            break
    if identity is None:
        raise NotAGroup("identity")
    inv = [None] * n
    for i in range(n):
        for j in range(n):
            if table[i][j] == identity and table[j][i] == identity:
                inv[i] = j
                break
        if inv[i] is None:
            raise NotAGroup("inverses", witness=i)
    if check == "full" or (check == "auto" and n <= 64):
        triples = itertools.product(range(n), repeat=3)
    else:
        step = max(1, (n * n * n) // 250_000)
        triples = (((k * 2654435761) % n, (k * 40503) % n, (k * 69069) % n)
                   for k in range(0, n * n * n, step))
    for a, b, c in triples:
        if table[table[a][b]][c] != table[a][table[b][c]]:
            raise NotAGroup("associativity", witness=(a, b, c))
    return FiniteGroup(table, identity, inv, labels)


# -- catalog ---------------------------------------------------------------

def cyclic(n, label="g"):
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    labels = ["1"] + [f"{label}{'' if i == 1 else i}" for i in range(1, n)]
    return group_from_table(table, labels)


def direct_product(g1, g2):
    pairs = [(a, b) for a in range(g1.order) for b in range(g2.order)]
    idx = {p: i for i, p in enumerate(pairs)}
    table = [[idx[(g1.mul(a, c), g2.mul(b, d))] for (c, d) in pairs]
             for (a, b) in pairs]
    labels = [f"({g1.labels[a]},{g2.labels[b]})" for (a, b) in pairs]
    return group_from_table(table, labels)


def symmetric3():
    perms = [(0, 1, 2), (1, 2, 0), (2, 0, 1), (1, 0, 2), (0, 2, 1), (2, 1, 0)]
    idx = {p: i for i, p in enumerate(perms)}

    def compose(p, q):  # apply q first, then p
        return tuple(p[q[i]] for i in range(3))

    table = [[idx[compose(p, q)] for q in perms] for p in perms]
    labels = ["1", "r", "r2", "s", "rs", "r2s"]
    return group_from_table(table, labels)


def dihedral4():
    """Dihedral group of order 8: r^4 = s^2 = 1, s r s = r^-1."""
    elems = [(i, j) for j in range(2) for i in range(4)]  # r^i s^j
    idx = {e: i for i, e in enumerate(elems)}

    def mul(a, b):
        i, j = a
        k, l = b
        # (r^i s^j)(r^k s^l) = r^(i + k*(-1)^j) s^(j+l)
        return ((i + (k if j == 0 else -k)) % 4, (j + l) % 2)

    table = [[idx[mul(a, b)] for b in elems] for a in elems]
    labels = [f"r{i}" if j == 0 else (f"r{i}s" if i else "s") for (i, j) in elems]
    labels[0] = "1"
    return group_from_table(table, labels)


def quaternion8():
    """Quaternion group {1, -1, i, -i, j, -j, k, -k}."""
    names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
    idx = {n: i for i, n in enumerate(names)}

    def mul(a, b):
        sa, ua = (a[0] == "-", a.lstrip("-"))
        sb, ub = (b[0] == "-", b.lstrip("-"))
        basic = {("1", "1"): "1", ("1", "i"): "i", ("1", "j"): "j", ("1", "k"): "k",
                 ("i", "1"): "i", ("j", "1"): "j", ("k", "1"): "k",
                 ("i", "i"): "-1", ("j", "j"): "-1", ("k", "k"): "-1",
                 ("i", "j"): "k", ("j", "k"): "i", ("k", "i"): "j",
                 ("j", "i"): "-k", ("k", "j"): "-i", ("i", "k"): "-j"}
        r = basic[(ua, ub)]
        s = sa ^ sb ^ (r[0] == "-")
        return ("-" if s else "") + r.lstrip("-")

    table = [[idx[mul(a, b)] for b in names] for a in names]
    return group_from_table(table, names)


GROUP_CATALOG = {
    "1": lambda: cyclic(1),
    "C2": lambda: cyclic(2),
    "C3": lambda: cyclic(3),
    "C4": lambda: cyclic(4),
    "C6": lambda: cyclic(6),
    "V4": lambda: direct_product(cyclic(2), cyclic(2)),
    "S3": symmetric3,
    "D4": dihedral4,
    "Q8": quaternion8,
}


def named_group(name):
    try:
        return GROUP_CATALOG[name]()
    except KeyError:
        raise ValueError(f"unknown group name {name!r}; "
                         f"choose from {sorted(GROUP_CATALOG)}") from None


# -- coset and quotient machinery ------------------------------------------

def cosets_and_reps(group, sub):
    """Left-coset representatives (identity first) and the map sigma ->
    representative of sigma*H.  Ties break to the least element index."""
    if sub.group is not group:
        raise ValueError("subgroup of a different group")
    rho = [None] * group.order
    reps = []
    for x in range(group.order):
        if rho[x] is None:
            coset = sorted(group.mul(x, h) for h in sub.elems)
            rep = group.identity if group.identity in coset else coset[0]
            for y in coset:
                rho[y] = rep
            reps.append(rep)
    reps.sort(key=lambda r: (r != group.identity, r))
    return tuple(reps), tuple(rho)


def normal_closure(group, gens):
    """Smallest normal subgroup containing gens."""
    cur = set(group.closure(gens))
    changed = True
    while changed:
        changed = False
        for g in range(group.order):
            for x in sorted(cur):
                c = group.conj(g, x)
                if c not in cur:
                    cur = set(group.closure(sorted(cur | {c})))
                    changed = True
    return Subgroup(group, sorted(cur))


def commutator_subgroup(group):
    comms = {group.commutator(a, b)
             for a in range(group.order) for b in range(group.order)}
    return normal_closure(group, sorted(comms))


def abelianization(group):
    """(A, proj, commutators): A = G^ab as an FgAb on one generator per
    group element, proj[g] = coordinate vector of the image of g.

    Relations e_g + e_s - e_{gs} over a generating set s already present
    the full abelianization.
    """
    n = group.order
    gens = group.generating_set() + (group.identity,)
    cols = []
    for g in range(n):
        for s in gens:
            col = [0] * n
            col[g] += 1
            col[s] += 1
            col[group.mul(g, s)] -= 1
            cols.append(tuple(col))
    a = FgAb(n, IntMatrix.from_columns(cols, n))
    proj = [a.gen(g) for g in range(n)]
    return a, proj, commutator_subgroup(group)


def subgroup_as_group(sub):
    """(H as a FiniteGroup, list mapping new indices to parent indices)."""
    parent = sub.group
    elems = list(sub.elems)
    pos = {e: i for i, e in enumerate(elems)}
    table = [[pos[parent.mul(a, b)] for b in elems] for a in elems]
    labels = [parent.labels[e] for e in elems]
    return group_from_table(table, labels), elems


# -- extensions with abelian kernel ----------------------------------------

def extension_from_cocycle(cl_mod, group, cocycle):
    """Group extension of `group` by the finite module `cl_mod` along a
    normalized 2-cocycle.

    cl_mod must expose `.underlying` (finite FgAb) and `.act(g, x)`;
    cocycle maps (g, h) element-index pairs to elements of the module.
    Returns (GS, kappa, pi, member): kappa maps canonical module
    coordinates to element indices of GS, pi is the projection GS ->
    group, and member[(canon(c), g)] is the index of the pair (c, g).
    """
    cl = cl_mod.underlying
    if not cl.is_finite():
        raise ValueError("extension kernel must be finite")
    n = group.order
    e = group.identity

    def cval(g, h):
        v = cocycle(g, h) if callable(cocycle) else cocycle[(g, h)]
        return tuple(v)

    for g in range(n):
        if not cl.is_zero(cval(g, e)) or not cl.is_zero(cval(e, g)):
            raise NotACocycle((g, "identity-normalization"))
    for g in range(n):
        for h in range(n):
            for k in range(n):
                lhs = cl.add(cl_mod.act(g, cval(h, k)), cval(g, group.mul(h, k)))
                rhs = cl.add(cval(group.mul(g, h), k), cval(g, h))
                if not cl.eq(lhs, rhs):
                    raise NotACocycle((g, h, k))

    members = [(c, g) for g in range(n) for c in
               (tuple(x) for x in cl.elements())]
    canon_members = [(cl.canon(c), g) for (c, g) in members]
    idx = {m: i for i, m in enumerate(canon_members)}

    def key(c, g):
        return (cl.canon(c), g)

    table = []
    for (c1, g1) in members:
        row = []
        for (c2, g2) in members:
            c = cl.add(cl.add(c1, cl_mod.act(g1, c2)), cval(g1, g2))
            row.append(idx[key(c, group.mul(g1, g2))])
        table.append(row)
    labels = [f"({'+'.join(map(str, cl.canon(c))) or '0'};{group.labels[g]})"
              for (c, g) in members]
    gs = group_from_table(table, labels)
    kappa = {cl.canon(c): idx[key(c, e)] for c in cl.elements()}
    pi = GroupHom(gs, group, [g for (_, g) in members])
    return gs, kappa, pi, idx
