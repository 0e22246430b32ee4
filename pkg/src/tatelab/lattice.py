"""Exact linear algebra over the integers.

Everything downstream (group rings, cohomology, the instance pipelines)
reduces to integer matrix normal forms, kernels and lattice arithmetic,
so this module is the substrate of the whole package.  No floating point
is used anywhere; Python ints are arbitrary precision.
"""

from __future__ import annotations

from bisect import bisect_left


class IntMatrix:
    """Immutable integer matrix, row-major.

    >>> IntMatrix([[1, 2], [3, 4]]).shape
    (2, 2)
    """

    __slots__ = ("rows", "cols", "entries", "_colcache")

    def __init__(self, entries, cols=None):
        entries = tuple(tuple(int(x) for x in row) for row in entries)
        rows = len(entries)
        if rows:
            cols = len(entries[0])
        elif cols is None:
            cols = 0
        for row in entries:
            if len(row) != cols:
                raise ValueError("ragged rows in matrix")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "_colcache", None)

    def __setattr__(self, *a):
        raise AttributeError("IntMatrix is immutable")

    @property
    def shape(self):
        return (self.rows, self.cols)

    @classmethod
    def identity(cls, n):
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, rows, cols):
        return cls([[0] * cols for _ in range(rows)], cols=cols)

    @classmethod
    def from_columns(cls, columns, rows):
        """Build a rows x len(columns) matrix from column vectors."""
        return cls([[col[i] for col in columns] for i in range(rows)],
                   cols=len(columns))

    def column(self, j):
        return tuple(self.entries[i][j] for i in range(self.rows))

    def columns(self):
        return [self.column(j) for j in range(self.cols)]

    def transpose(self):
        return IntMatrix([[self.entries[i][j] for i in range(self.rows)]
                          for j in range(self.cols)], cols=self.rows)

    def mul(self, other):
        if self.cols != other.rows:
            raise ValueError("shape mismatch in matrix product")
        ot = other.transpose().entries
        return IntMatrix([[sum(a * b for a, b in zip(row, col)) for col in ot]
                          for row in self.entries], cols=other.cols)

    def apply(self, vec):
        """Matrix times column vector; sparse vectors use cached columns."""
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        support = [j for j, x in enumerate(vec) if x]
        if 3 * len(support) < self.cols:
            if self._colcache is None:
                cache = [tuple((i, row[j]) for i, row in
                               enumerate(self.entries) if row[j])
                         for j in range(self.cols)]
                object.__setattr__(self, "_colcache", cache)
            out = [0] * self.rows
            for j in support:
                vj = vec[j]
                for i, a in self._colcache[j]:
                    out[i] += a * vj
            return tuple(out)
        return tuple(sum(a * b for a, b in zip(row, vec))
                     for row in self.entries)

    def hstack(self, other):
        if self.rows != other.rows:
            raise ValueError("row mismatch in hstack")
        return IntMatrix([ra + rb for ra, rb in zip(self.entries, other.entries)],
                         cols=self.cols + other.cols)

    def is_zero(self):
        return all(all(x == 0 for x in row) for row in self.entries)

    def __eq__(self, other):
        return (isinstance(other, IntMatrix) and self.entries == other.entries
                and self.cols == other.cols)

    def __hash__(self):
        return hash((self.cols, self.entries))

    def __repr__(self):
        return f"IntMatrix({[list(r) for r in self.entries]!r})"


def _smallest_pivot(d, t, rows, cols):
    """Position of the nonzero entry of least absolute value in d[t:, t:]."""
    best = None
    best_abs = None
    for i in range(t, rows):
        di = d[i]
        for j in range(t, cols):
            x = di[j]
            if x:
                a = -x if x < 0 else x
                if best_abs is None or a < best_abs:
                    best, best_abs = (i, j), a
                    if a == 1:
                        return best
    return best


def smith_normal_form(m: IntMatrix):
    """Smith normal form with unimodular witnesses: U * m * V == D.

    D is diagonal with d1 | d2 | ... and nonnegative diagonal.  Pivoting
    always picks the entry of least absolute value, which keeps the
    intermediate entries from exploding on the matrices this package
    produces.

    >>> u, d, v = smith_normal_form(IntMatrix([[2, 4], [6, 8]]))
    >>> [d.entries[i][i] for i in range(2)]
    [2, 4]
    """
    u, d, v, _, _ = _snf_data(m)
    return u, d, v


def _snf_data(m: IntMatrix):
    """(U, D, V, Uinv, Vinv) with U m V = D and the inverses tracked."""
    rows, cols = m.rows, m.cols
    d = [list(r) for r in m.entries]
    u = [[1 if i == j else 0 for j in range(rows)] for i in range(rows)]
    uinv = [[1 if i == j else 0 for j in range(rows)] for i in range(rows)]
    v = [[1 if i == j else 0 for j in range(cols)] for i in range(cols)]
    vinv = [[1 if i == j else 0 for j in range(cols)] for i in range(cols)]

    def row_swap(a, b):
        d[a], d[b] = d[b], d[a]
        u[a], u[b] = u[b], u[a]
        for r in uinv:
            r[a], r[b] = r[b], r[a]

    def row_sub(a, q, b):
        # row a -= q * row b ; inverse op: column b += q * column a of uinv
        da, db = d[a], d[b]
        for j in range(cols):
            if db[j]:
                da[j] -= q * db[j]
        ua, ub = u[a], u[b]
        for j in range(rows):
            if ub[j]:
                ua[j] -= q * ub[j]
        for r in uinv:
            if r[a]:
                r[b] += q * r[a]

    def row_neg(a):
        d[a] = [-x for x in d[a]]
        u[a] = [-x for x in u[a]]
        for r in uinv:
            r[a] = -r[a]

    def col_swap(a, b):
        for r in d:
            r[a], r[b] = r[b], r[a]
        for r in v:
            r[a], r[b] = r[b], r[a]
        vinv[a], vinv[b] = vinv[b], vinv[a]

    def col_sub(a, q, b):
        # col a -= q * col b ; inverse: row b of vinv += q * row a
        for r in d:
            if r[b]:
                r[a] -= q * r[b]
        for r in v:
            if r[b]:
                r[a] -= q * r[b]
        va, vb = vinv[a], vinv[b]
        for j in range(cols):
            if va[j]:
                vb[j] += q * va[j]

    t = 0
    limit = min(rows, cols)
    while t < limit:
        pos = _smallest_pivot(d, t, rows, cols)
        if pos is None:
            break
        while True:
            i, j = pos
            if (i, j) != (t, t):
                if i != t:
                    row_swap(i, t)
                if j != t:
                    col_swap(j, t)
            p = d[t][t]
            dirty = False
            for i in range(t + 1, rows):
                x = d[i][t]
                if x:
                    q = x // p
                    row_sub(i, q, t)
                    if d[i][t]:
                        dirty = True
            for j in range(t + 1, cols):
                x = d[t][j]
                if x:
                    q = x // p
                    col_sub(j, q, t)
                    if d[t][j]:
                        dirty = True
            if dirty:
                pos = _smallest_pivot(d, t, rows, cols)
                continue
            # pivot clean; enforce divisibility against the rest
            p = d[t][t]
            offender = None
            for i in range(t + 1, rows):
                di = d[i]
                for j in range(t + 1, cols):
                    if di[j] % p:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            row_sub(t, -1, offender)
            pos = (t, t)
        t += 1
    for i in range(limit):
        if d[i][i] < 0:
            row_neg(i)
    return (IntMatrix(u, cols=rows), IntMatrix(d, cols=cols),
            IntMatrix(v, cols=cols), IntMatrix(uinv, cols=rows),
            IntMatrix(vinv, cols=cols))


def kernel_basis(row_iter, ncols):
    """Basis of {x in Z^ncols : r . x = 0 for every row r}.

    Rows may be given as sparse dicts {index: value} or dense sequences.
    Returns a list of dense tuple columns.  Works column-by-column so the
    very sparse boundary matrices of bar resolutions stay cheap.
    """
    basis = {j: {j: 1} for j in range(ncols)}
    touch = {j: {j} for j in range(ncols)}  # coordinate -> basis col ids
    next_id = ncols

    def set_entry(col_id, coord, val):
        col = basis[col_id]
        if val:
            col[coord] = val
            touch.setdefault(coord, set()).add(col_id)
        elif coord in col:
            del col[coord]
            touch[coord].discard(col_id)

    def col_sub(a, q, b):
        # column a -= q * column b
        ca, cb = basis[a], basis[b]
        for coord, val in list(cb.items()):
            set_entry(a, coord, ca.get(coord, 0) - q * val)

    for row in row_iter:
        if not isinstance(row, dict):
            row = {j: x for j, x in enumerate(row) if x}
        if not row:
            continue
        hit = set()
        for coord in row:
            hit |= touch.get(coord, set())
        vals = {}
        for cid in hit:
            col = basis[cid]
            s = 0
            for coord, rv in row.items():
                cv = col.get(coord)
                if cv:
                    s += rv * cv
            if s:
                vals[cid] = s
        while len(vals) > 1:
            order = sorted(vals, key=lambda c: (abs(vals[c]), c))
            k0 = order[0]
            p = vals[k0]
            for cid in order[1:]:
                q = vals[cid] // p
                if q:
                    col_sub(cid, q, k0)
                    vals[cid] -= q * p
                if not vals[cid]:
                    del vals[cid]
        if vals:
            (k0, _), = vals.items()
            for coord in list(basis[k0]):
                touch[coord].discard(k0)
            del basis[k0]
    cols = []
    for cid in sorted(basis):
        col = basis[cid]
        cols.append(tuple(col.get(i, 0) for i in range(ncols)))
    return cols


def matrix_kernel(m: IntMatrix):
    """Kernel basis columns of an IntMatrix."""
    return kernel_basis(m.entries, m.cols)


def solve_matrix(m: IntMatrix, b, snf_cache=None):
    """One integer solution x of m x = b, or None.

    `snf_cache` may hold the `_snf_data` result for m to amortize solves
    against the same matrix.
    """
    if snf_cache is None:
        snf_cache = _snf_data(m)
    u, d, v, _, _ = snf_cache
    ub = u.apply(b)
    z = [0] * m.cols
    r = min(m.rows, m.cols)
    for i in range(m.rows):
        di = d.entries[i][i] if i < r else 0
        if di:
            if ub[i] % di:
                return None
            z[i] = ub[i] // di
        elif ub[i]:
            return None
    return v.apply(z)


class Lattice:
    """Integer row lattice in Z^dim kept in echelon form.

    Supports incremental insertion, membership, reduction of a vector
    modulo the lattice, and (optionally) witnesses expressing each basis
    row over the inserted generators.
    """

    def __init__(self, dim, witnesses=False):
        self.dim = dim
        self.rows = []        # sparse dicts, sorted by pivot column
        self.pivots = []      # pivot column per row
        self.witnesses = [] if witnesses else None
        self._count = 0

    def __len__(self):
        return len(self.rows)

    @staticmethod
    def _to_sparse(vec):
        if isinstance(vec, dict):
            return {int(k): int(v) for k, v in vec.items() if v}
        return {j: int(x) for j, x in enumerate(vec) if x}

    def add(self, vec):
        """Insert a vector; returns True if it enlarged the lattice.

        The basis is kept in Hermite-reduced echelon form (entries above a
        pivot reduced modulo it) so entries stay small during long runs of
        insertions.
        """
        v = self._to_sparse(vec)
        w = {self._count: 1} if self.witnesses is not None else None
        self._count += 1
        grew = False
        while v:
            piv = min(v)
            idx = bisect_left(self.pivots, piv)
            if idx < len(self.pivots) and self.pivots[idx] == piv:
                row = self.rows[idx]
                a, b = row[piv], v[piv]
                if b % a == 0:
                    q = b // a
                    self._sub_from(v, q, row, w, idx)
                else:
                    # replace stored row by gcd combination
                    g, x, y = _xgcd(a, b)
                    new_row = {}
                    for c in set(row) | set(v):
                        val = x * row.get(c, 0) + y * v.get(c, 0)
                        if val:
                            new_row[c] = val
                    qa, qb = a // g, b // g
                    red = {}
                    for c in set(row) | set(v):
                        val = qa * v.get(c, 0) - qb * row.get(c, 0)
                        if val:
                            red[c] = val
                    if self.witnesses is not None:
                        old_w = self.witnesses[idx]
                        new_w = _wcomb(x, old_w, y, w)
                        red_w = _wcomb(qa, w, -qb, old_w)
                        self.witnesses[idx] = new_w
                        w = red_w
                    self.rows[idx] = new_row
                    v = red
                    grew = True
                    self._reduce_above(idx)
            else:
                if v[piv] < 0:
                    v = {c: -x for c, x in v.items()}
                    if w is not None:
                        w = {c: -x for c, x in w.items()}
                self.rows.insert(idx, v)
                self.pivots.insert(idx, piv)
                if self.witnesses is not None:
                    self.witnesses.insert(idx, w)
                self._reduce_above(idx)
                return True
        return grew

    def _reduce_above(self, idx):
        """Hermite-reduce around row idx: its own entries at later pivot
        columns, then earlier rows' entries at its pivot column."""
        row = self.rows[idx]
        changed = True
        while changed:
            changed = False
            for j in range(idx + 1, len(self.rows)):
                pj = self.pivots[j]
                x = row.get(pj)
                if not x:
                    continue
                q = x // self.rows[j][pj]
                if not q:
                    continue
                changed = True
                other = self.rows[j]
                for c, rv in other.items():
                    nv = row.get(c, 0) - q * rv
                    if nv:
                        row[c] = nv
                    elif c in row:
                        del row[c]
                if self.witnesses is not None:
                    wi = self.witnesses[idx]
                    for c, rv in self.witnesses[j].items():
                        nv = wi.get(c, 0) - q * rv
                        if nv:
                            wi[c] = nv
                        elif c in wi:
                            del wi[c]
        piv = self.pivots[idx]
        val = row[piv]
        for j in range(idx):
            other = self.rows[j]
            x = other.get(piv)
            if x is None:
                continue
            q = x // val
            if not q:
                continue
            for c, rv in row.items():
                nv = other.get(c, 0) - q * rv
                if nv:
                    other[c] = nv
                elif c in other:
                    del other[c]
            if self.witnesses is not None:
                wo = self.witnesses[j]
                for c, rv in self.witnesses[idx].items():
                    nv = wo.get(c, 0) - q * rv
                    if nv:
                        wo[c] = nv
                    elif c in wo:
                        del wo[c]

    def _sub_from(self, v, q, row, w, idx):
        if not q:
            return
        for c, val in row.items():
            nv = v.get(c, 0) - q * val
            if nv:
                v[c] = nv
            elif c in v:
                del v[c]
        if w is not None:
            for c, val in self.witnesses[idx].items():
                nv = w.get(c, 0) - q * val
                if nv:
                    w[c] = nv
                elif c in w:
                    del w[c]

    def reduce(self, vec):
        """Residue of vec after subtracting lattice rows (pivot-wise)."""
        v = self._to_sparse(vec)
        out = {}
        while v:
            piv = min(v)
            idx = bisect_left(self.pivots, piv)
            if idx < len(self.pivots) and self.pivots[idx] == piv:
                row = self.rows[idx]
                q = v[piv] // row[piv]
                if q:
                    for c, val in row.items():
                        nv = v.get(c, 0) - q * val
                        if nv:
                            v[c] = nv
                        elif c in v:
                            del v[c]
                if piv in v:
                    out[piv] = v.pop(piv)
            else:
                out[piv] = v.pop(piv)
        return tuple(out.get(i, 0) for i in range(self.dim))

    def contains(self, vec):
        return not any(self.reduce(vec))

    def basis(self):
        return [tuple(r.get(i, 0) for i in range(self.dim)) for r in self.rows]

    def basis_witness(self, idx):
        """Witness coefficients of basis row idx over inserted generators."""
        if self.witnesses is None:
            raise ValueError("lattice built without witness tracking")
        w = self.witnesses[idx]
        return {k: v for k, v in w.items()}


def _xgcd(a, b):
    """g, x, y with x*a + y*b == g == gcd(a, b), g > 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def _wcomb(a, wa, b, wb):
    out = {}
    for c in set(wa) | set(wb):
        val = a * wa.get(c, 0) + b * wb.get(c, 0)
        if val:
            out[c] = val
    return out
