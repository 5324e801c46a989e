from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st
from sympy.matrices.normalforms import smith_normal_form

from oistab.exact_linalg import (GF, QQ, ZZ, ChainComplex, ComplexIntegrityError, SpanSolver,
                                 SparseMatrix, UnsupportedDomainError, homology_dims,
                                 homology_groups_integral, kernel_basis, parse_domain, rank,
                                 read_triplets, rref, snf, write_triplets)


def naive_rank(rows, p=None):
    """Textbook Gaussian elimination with Fractions (or mod p)."""
    A = [[Fraction(x) if p is None else x % p for x in r] for r in rows]
    r = 0
    ncols = len(A[0]) if A else 0
    for c in range(ncols):
        k = next((i for i in range(r, len(A)) if A[i][c]), None)
        if k is None:
            continue
        A[r], A[k] = A[k], A[r]
        inv = 1 / A[r][c] if p is None else pow(A[r][c], -1, p)
        for i in range(len(A)):
            if i != r and A[i][c]:
                f = A[i][c] * inv
                A[i] = [a - f * b if p is None else (a - f * b) % p for a, b in zip(A[i], A[r])]
        r += 1
    return r


def matrices(max_dim=7, lo=-4, hi=4):
    return st.integers(1, max_dim).flatmap(lambda r: st.integers(1, max_dim).flatmap(
        lambda c: st.lists(st.lists(st.integers(lo, hi), min_size=c, max_size=c),
                           min_size=r, max_size=r)))


@given(matrices())
@settings(max_examples=150, deadline=None)
def test_rank_matches_naive_oracle(rows):
    assert rank(SparseMatrix.from_dense(rows, QQ)) == naive_rank(rows)


@given(matrices(), st.sampled_from([2, 3, 5]))
@settings(max_examples=150, deadline=None)
def test_rank_mod_p_matches_naive_oracle(rows, p):
    assert rank(SparseMatrix.from_dense(rows, GF(p))) == naive_rank(rows, p)


@given(matrices(), st.randoms(use_true_random=False))
@settings(max_examples=100, deadline=None)
def test_rank_permutation_invariant(rows, rnd):
    m = SparseMatrix.from_dense(rows, QQ)
    rp, cp = list(range(m.nrows)), list(range(m.ncols))
    rnd.shuffle(rp)
    rnd.shuffle(cp)
    assert rank(m.permuted(rp, cp)) == rank(m)


@given(matrices())
@settings(max_examples=100, deadline=None)
def test_kernel_basis(rows):
    m = SparseMatrix.from_dense(rows, QQ)
    ker = kernel_basis(m)
    assert len(ker) == m.ncols - rank(m)
    for v in ker:
        assert not any(m.apply(v).values())


@given(matrices(max_dim=6, lo=-9, hi=9))
@settings(max_examples=100, deadline=None)
def test_snf_matches_sympy_and_transforms(rows):
    m = SparseMatrix.from_dense(rows, ZZ)
    diag, U, V = snf(m)
    oracle = smith_normal_form(sympy.Matrix(rows), domain=sympy.ZZ)
    want = [abs(int(oracle[i, i])) for i in range(min(oracle.shape))]
    assert diag == want
    prod = sympy.Matrix(U) * sympy.Matrix(rows) * sympy.Matrix(V)
    for i in range(prod.rows):
        for j in range(prod.cols):
            assert prod[i, j] == (diag[i] if i == j else 0)
    assert abs(sympy.Matrix(U).det()) == 1 and abs(sympy.Matrix(V).det()) == 1


def test_snf_golden():
    assert snf(SparseMatrix.from_dense([[2, 4], [6, 8]], ZZ))[0] == [2, 4]


@given(st.lists(st.dictionaries(st.integers(0, 6), st.integers(-3, 3), max_size=4), max_size=8))
@settings(max_examples=150, deadline=None)
def test_span_solver_coordinates(vecs):
    s = SpanSolver(QQ)
    accepted = {}
    for v in vecs:
        idx = s.add(v)
        if idx is not None:
            accepted[idx] = v
    assert len(accepted) == naive_rank([[v.get(c, 0) for c in range(7)] for v in vecs] or [[0]])
    for v in vecs:
        coords = s.coordinates(v)
        assert coords is not None
        recon = {}
        for idx, c in coords.items():
            for k, x in accepted[idx].items():
                recon[k] = recon.get(k, 0) + c * x
        assert {k: x for k, x in recon.items() if x} == {k: Fraction(x) for k, x in v.items() if x}


def test_rref_is_reduced():
    piv = rref([{0: 2, 1: 4}, {0: 1, 2: 1}, {1: 1}], QQ)
    assert sorted(piv) == [0, 1, 2]
    for c, row in piv.items():
        assert row[c] == 1
        assert all(other == c or other not in row for other in piv)


def test_domains():
    assert parse_domain("q") == QQ and parse_domain("Z") == ZZ
    assert parse_domain("f2") == GF(2) == parse_domain("fp:2") == parse_domain("GF(2)")
    with pytest.raises(ValueError):
        parse_domain("reals")
    with pytest.raises(UnsupportedDomainError):
        ZZ.inv(2)


def test_duplicate_entries_rejected():
    with pytest.raises(ValueError):
        SparseMatrix(2, 2, [((0, 0), 1), ((0, 0), 2)])


def test_matmul_and_transpose():
    a = SparseMatrix.from_dense([[1, 2], [0, 1]])
    b = SparseMatrix.from_dense([[1, -2], [0, 1]])
    assert (a @ b) == SparseMatrix.identity(2)
    assert a.transpose().to_dense() == [[1, 0], [2, 1]]


def test_triplet_round_trip(tmp_path):
    m = SparseMatrix.from_dense([[1, 0, Fraction(1, 2)], [0, -3, 0]])
    write_triplets(m, tmp_path / "m.tri")
    assert read_triplets(tmp_path / "m.tri") == m


def _circle(domain):
    # two vertices, two edges forming a circle
    d1 = SparseMatrix.from_dense([[-1, -1], [1, 1]], domain)
    return ChainComplex([2, 2], [d1], domain)


def test_homology_of_circle():
    assert homology_dims(_circle(QQ)) == [1, 1]
    assert homology_groups_integral(_circle(ZZ)) == [(1, []), (1, [])]


def test_rp2_integral_homology():
    # cellular complex of RP^2: d1 = 0, d2 = 2
    d1 = SparseMatrix(1, 1, {}, ZZ)
    d2 = SparseMatrix.from_dense([[2]], ZZ)
    cx = ChainComplex([1, 1, 1], [d1, d2], ZZ)
    assert homology_groups_integral(cx) == [(1, []), (0, [2]), (0, [])]
    assert homology_dims(ChainComplex([1, 1, 1], [d1.to_domain(GF(2)), d2.to_domain(GF(2))],
                                      GF(2))) == [1, 1, 1]


def test_integrity_errors():
    d1 = SparseMatrix.from_dense([[1]])
    d2 = SparseMatrix.from_dense([[1]])
    with pytest.raises(ComplexIntegrityError) as exc:
        ChainComplex([1, 1, 1], [d1, d2]).check()
    assert exc.value.degree == 1
    with pytest.raises(ComplexIntegrityError):
        ChainComplex([1, 2], [d1]).check()
