import itertools

import pytest
from hypothesis import given, settings, strategies as st

from tatelab.lattice import (IntMatrix, Lattice, _snf_data, kernel_basis,
                             matrix_kernel, smith_normal_form, solve_matrix)

small_entries = st.integers(min_value=-9, max_value=9)


def matrices(max_dim=4):
    return st.integers(0, max_dim).flatmap(
        lambda r: st.integers(0, max_dim).flatmap(
            lambda c: st.lists(
                st.lists(small_entries, min_size=c, max_size=c),
                min_size=r, max_size=r).map(
                    lambda rows: IntMatrix(rows, cols=c))))


def unimodular_2x2(bound=3):
    for a, b, c, d in itertools.product(range(-bound, bound + 1), repeat=4):
        if a * d - b * c in (1, -1):
            yield IntMatrix([[a, b], [c, d]])


def test_snf_identity_and_zero():
    u, d, v = smith_normal_form(IntMatrix.identity(2))
    assert d == IntMatrix.identity(2)
    u, d, v = smith_normal_form(IntMatrix.zeros(2, 2))
    assert d == IntMatrix.zeros(2, 2)
    assert abs(_det2(u)) == 1 and abs(_det2(v)) == 1


def _det2(m):
    e = m.entries
    return e[0][0] * e[1][1] - e[0][1] * e[1][0]


def test_snf_2x2_example_against_exhaustive_unimodular_search():
    # oracle: scan small unimodular U, V for a diagonal form with a chain
    m = IntMatrix([[2, 4], [6, 8]])
    found = None
    for u in unimodular_2x2():
        for v in unimodular_2x2():
            d = u.mul(m).mul(v)
            e = d.entries
            if e[0][1] == 0 and e[1][0] == 0 and e[0][0] > 0 \
                    and e[1][1] % e[0][0] == 0:
                found = (abs(e[0][0]), abs(e[1][1]))
                break
        if found:
            break
    assert found == (2, 4)
    u, d, v = smith_normal_form(m)
    assert (d.entries[0][0], d.entries[1][1]) == found
    assert u.mul(m).mul(v) == d


@settings(max_examples=120, deadline=None)
@given(matrices())
def test_snf_properties(m):
    u, d, v, uinv, vinv = _snf_data(m)
    assert u.mul(m).mul(v) == d
    assert u.mul(uinv) == IntMatrix.identity(m.rows)
    assert v.mul(vinv) == IntMatrix.identity(m.cols)
    diag = [d.entries[i][i] for i in range(min(m.rows, m.cols))]
    for i in range(m.rows):
        for j in range(m.cols):
            if i != j:
                assert d.entries[i][j] == 0
    for a, b in zip(diag, diag[1:]):
        if a:
            assert b % a == 0
        else:
            assert b == 0
    assert all(x >= 0 for x in diag)


@settings(max_examples=100, deadline=None)
@given(matrices())
def test_kernel_rank_nullity_and_membership(m):
    ker = matrix_kernel(m)
    _, d, _ = smith_normal_form(m)
    rank = sum(1 for i in range(min(m.rows, m.cols)) if d.entries[i][i])
    assert len(ker) == m.cols - rank
    for col in ker:
        assert all(x == 0 for x in m.apply(col))


@settings(max_examples=80, deadline=None)
@given(matrices(), st.lists(st.integers(-3, 3), min_size=0, max_size=4))
def test_solve_hits_constructed_targets(m, x):
    x = (x + [0] * m.cols)[:m.cols]
    b = m.apply(x)
    sol = solve_matrix(m, b)
    assert sol is not None
    assert m.apply(sol) == tuple(b)


def test_solve_reports_unsolvable():
    m = IntMatrix([[2]])
    assert solve_matrix(m, (1,)) is None


def test_kernel_basis_streaming_sparse_rows():
    rows = [{0: 1, 1: 1, 2: 1}, {1: 2}]
    ker = kernel_basis(iter(rows), 3)
    assert len(ker) == 1
    v = ker[0]
    assert v[0] + v[1] + v[2] == 0 and 2 * v[1] == 0


def test_lattice_membership_reduction_and_witnesses():
    gens = [(2, 0, 0), (0, 3, 0), (1, 1, 1)]
    lat = Lattice(3, witnesses=True)
    for g in gens:
        lat.add(g)
    assert lat.contains((3, 4, 1))
    assert not lat.contains((1, 0, 0))
    for i, row in enumerate(lat.basis()):
        w = lat.basis_witness(i)
        rebuilt = [0, 0, 0]
        for k, c in w.items():
            for j in range(3):
                rebuilt[j] += c * gens[k][j]
        assert tuple(rebuilt) == row


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(small_entries, small_entries, small_entries),
                min_size=1, max_size=6),
       st.tuples(small_entries, small_entries, small_entries),
       st.lists(st.integers(-2, 2), min_size=6, max_size=6))
def test_lattice_reduce_is_coset_canonical(gens, v, coeffs):
    lat = Lattice(3)
    for g in gens:
        lat.add(g)
    shift = [0, 0, 0]
    for g, c in zip(gens, coeffs):
        for j in range(3):
            shift[j] += c * g[j]
    assert lat.reduce(v) == lat.reduce(tuple(a + b for a, b in
                                             zip(v, shift)))


def test_intmatrix_validation():
    with pytest.raises(ValueError):
        IntMatrix([[1, 2], [3]])
    m = IntMatrix([[1, 2], [3, 4]])
    with pytest.raises(AttributeError):
        m.rows = 3
