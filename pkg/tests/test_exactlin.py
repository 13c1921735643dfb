import math
from fractions import Fraction

import pytest
import sympy
from sympy.matrices.normalforms import smith_normal_form
from hypothesis import given, settings
from hypothesis import strategies as st

from bindmod import exactlin as el
from bindmod.errors import NotSublattice


def int_matrices(max_rows=4, max_cols=5, lo=-6, hi=6):
    return st.integers(1, max_rows).flatmap(
        lambda m: st.integers(1, max_cols).flatmap(
            lambda n: st.lists(st.lists(st.integers(lo, hi), min_size=n, max_size=n), min_size=m, max_size=m)))


def test_hnf_small():
    H, U = el.hermite_normal_form([[2, 4], [0, 3]])
    assert H == ((2, 1), (0, 3))
    assert el.matmul(U, ((2, 4), (0, 3))) == H


def test_snf_small():
    S, U, V = el.smith_normal_form([[2, 0], [0, 3]])
    assert S == ((1, 0), (0, 6))


def test_kernel_and_saturation():
    assert el.kernel_lattice([[2, 3]]).basis == ((3, -2),)
    # big example 1, J = {1,2,5}: columns (1,0),(0,1),(3,3)
    assert el.kernel_lattice([[1, 0, 3], [0, 1, 3]]).basis == ((3, 3, -1),)
    L = el.Lattice.from_generators([(2, -2)], 2)
    assert el.saturate(L).basis == ((1, -1),)
    assert not L.is_saturated()


def test_lattice_index():
    sub = el.Lattice.from_generators([(2, 0), (0, 1)], 2)
    assert el.lattice_index(sub, el.Lattice.full(2)) == 2
    assert el.lattice_index(el.Lattice.from_generators([(1, 0)], 2), el.Lattice.full(2)) == math.inf
    with pytest.raises(NotSublattice):
        el.lattice_index(el.Lattice.full(2), sub)


def test_solve_rational():
    sol = el.solve_rational([[2, 3]], [5])
    assert sol.particular == (Fraction(5, 2), 0)
    assert sol.contains((1, 1))
    assert not sol.contains((1, 0))
    assert el.solve_rational([[1, 1], [1, 1]], [0, 1]) is None


def test_column_lattice_coordinates():
    L, coords = el.column_lattice([(1, 1), (2, 0), (0, 2)])
    assert L.rank == 2
    for c, col in zip(coords, [(1, 1), (2, 0), (0, 2)]):
        assert tuple(sum(a * b[i] for a, b in zip(c, L.basis)) for i in range(2)) == col


def test_parse_fraction():
    assert el.parse_fraction("3/6") == Fraction(1, 2)
    assert el.fraction_str(Fraction(4, 2)) == "2"
    with pytest.raises(ValueError):
        el.parse_fraction(0.5)


@settings(max_examples=60, deadline=None)
@given(int_matrices())
def test_hnf_properties(M):
    H, U = el.hermite_normal_form(M)
    assert el.matmul(U, M) == H
    assert abs(el.det(U)) == 1
    # canonical: the row lattice determines H
    H2, _ = el.hermite_normal_form(list(reversed(M)) + [[sum(c) for c in zip(*M)]])
    nz = lambda X: tuple(r for r in X if any(r))
    assert nz(H) == nz(H2)


@settings(max_examples=60, deadline=None)
@given(int_matrices())
def test_snf_against_sympy(M):
    S, U, V = el.smith_normal_form(M)
    assert el.matmul(el.matmul(U, M), V) == S
    assert abs(el.det(U)) == 1 and abs(el.det(V)) == 1
    diag = [S[i][i] for i in range(min(len(S), len(S[0])))]
    nonzero = [x for x in diag if x]
    assert all(b % a == 0 for a, b in zip(nonzero, nonzero[1:]))
    ref = smith_normal_form(sympy.Matrix(M), domain=sympy.ZZ)
    ref_diag = [abs(int(ref[i, i])) for i in range(min(ref.shape))]
    assert sorted(x for x in ref_diag if x) == sorted(nonzero)


@settings(max_examples=60, deadline=None)
@given(int_matrices())
def test_rank_det_nullspace_against_sympy(M):
    SM = sympy.Matrix(M)
    assert el.rank(M) == SM.rank()
    ker = el.nullspace(M)
    assert len(ker) == len(SM.nullspace())
    for v in ker:
        assert all(x == 0 for x in el.matvec(M, v))
    if len(M) == len(M[0]):
        assert el.det(M) == SM.det()


@settings(max_examples=60, deadline=None)
@given(int_matrices(max_rows=3, max_cols=5))
def test_kernel_lattice_is_saturated_kernel(M):
    K = el.kernel_lattice(M)
    assert K.rank == len(M[0]) - el.rank(M)
    for u in K.basis:
        assert not any(el.matvec(M, u))
    assert el.saturate(K) == K
