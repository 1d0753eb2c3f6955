import random
from itertools import product
import warnings

import pytest
from hypothesis import given, strategies as st

from fermat_k3.lattices import (
    REFERENCE_ORBIT_GRAM,
    ROTATION,
    GluePartitionProblem,
    Lattice,
    brute_force_fixed_vectors,
    count_short_vectors,
    determinant,
    discriminant_group,
    fixed_lattice_audit,
    h_squared_case_analysis,
    hermite_basis,
    in_span,
    invariant_codewords,
    invariant_gram_solver,
    invariant_sublattice,
    niemeier_a1_24,
    niemeier_selection_audit,
    norm_divisibility_check,
    overlattice_enumeration,
    rank_relation_check,
    root_lattice_index,
    smith_normal_form,
)
from fermat_k3.mathieu import golay_construct, weight

CODE = golay_construct()


def test_snf_examples():
    assert smith_normal_form(REFERENCE_ORBIT_GRAM) == [1, 1, 4, 8, 8]
    assert smith_normal_form([[8, 4, 4], [4, 8, 0], [4, 0, 8]]) == [4, 4, 16]
    assert smith_normal_form([[16, 0, 0], [0, 4, 0], [0, 0, 4]]) == [4, 4, 16]
    assert smith_normal_form([[2, 4], [4, 8]]) == [2, 0]
    assert smith_normal_form([[0, 0], [0, 0]]) == [0, 0]


def _divisor_chain_ok(d):
    nz = [x for x in d if x]
    return all(b % a == 0 for a, b in zip(nz, nz[1:])) and d[len(nz):] == [0] * (len(d) - len(nz))


_mat = st.integers(1, 4).flatmap(
    lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=n, max_size=n))


@given(_mat)
def test_snf_against_sympy(m):
    sympy = pytest.importorskip("sympy")
    from sympy.matrices.normalforms import smith_normal_form as sympy_snf

    d = smith_normal_form(m)
    assert _divisor_chain_ok(d)
    ref = sympy_snf(sympy.Matrix(m), domain=sympy.ZZ)
    assert sorted(abs(int(ref[i, i])) for i in range(len(m))) == sorted(d)


@given(_mat)
def test_snf_product_is_abs_det(m):
    d = smith_normal_form(m)
    prod = 1
    for x in d:
        prod *= x
    assert prod == abs(determinant(m))


def test_lattice_validation_and_text():
    with pytest.raises(ValueError):
        Lattice([[1, 2], [3, 4]])
    with pytest.raises(ValueError):
        Lattice([[2, 0], [0, -2]], sign="positive")
    with pytest.raises(ValueError):
        Lattice([[2, 3], [3, 2]], sign="positive")
    lat = Lattice([[8, 4, 4], [4, 8, 0], [4, 0, 8]], sign="positive")
    assert Lattice.from_text(lat.to_text()).gram == lat.gram
    assert discriminant_group(lat).factors == (4, 4, 16)
    assert discriminant_group(lat).order == abs(lat.det()) == 256
    with pytest.raises(ValueError):
        discriminant_group(Lattice([[2, 2], [2, 2]]))


def test_niemeier_lattice():
    n = niemeier_a1_24(CODE)
    assert n.lattice.rank == 24 and abs(n.lattice.det()) == 1 and n.lattice.is_even()
    assert root_lattice_index(n) == 2 ** 24
    assert count_short_vectors(CODE) == 48


def test_invariant_codewords_and_fixed_lattice():
    audit = fixed_lattice_audit()
    assert audit["sylow_order"] == 128
    assert audit["sizes"] == [1, 1, 2, 4, 16] and audit["agree"]
    assert audit["invariant_codeword_weights"] == [0, 8, 16, 24]
    assert audit["octad_is_small_blocks"] and audit["complement_is_large_block"]
    assert audit["rank"] == 5 and audit["snf"] == [1, 1, 4, 8, 8]
    assert audit["discriminant"] == [4, 8, 8]
    assert audit["orbit_gram_matches"] and audit["rank_relation"]


def test_fixed_lattice_brute_force():
    audit = fixed_lattice_audit()
    problem = audit["problem"]
    _, basis = invariant_sublattice(problem)
    vecs = brute_force_fixed_vectors(problem, height=2)
    assert all(in_span(basis, v) is not None for v in vecs)
    # small combinations of basis vectors pass the membership test
    found = set(vecs)
    for coeffs in product((-1, 0, 1), repeat=len(basis)):
        v = tuple(sum(c * b[i] for c, b in zip(coeffs, basis)) for i in range(len(basis[0])))
        if max(map(abs, v)) <= 2:
            assert v in found


def test_trivial_and_octad_partitions():
    singles = GluePartitionProblem([[i] for i in range(24)], CODE)
    lat, _ = invariant_sublattice(singles)
    assert lat.rank == 24 and abs(lat.det()) == 1
    octad = next(w for w in CODE.codewords if weight(w) == 8)
    blocks = [[i for i in range(24) if octad >> i & 1], [i for i in range(24) if not octad >> i & 1]]
    problem = GluePartitionProblem(blocks, CODE)
    assert len(invariant_codewords(problem)) == 4
    lat, basis = invariant_sublattice(problem)
    assert lat.rank == 2 and sorted(abs(x) for r in lat.gram for x in r) == [0, 0, 4, 8]
    assert all(in_span(basis, v) is not None for v in brute_force_fixed_vectors(problem, 3))
    with pytest.raises(ValueError):
        GluePartitionProblem([[0, 1]], CODE)


def test_selection_audit():
    audit = niemeier_selection_audit()
    assert audit["verdict"] == "N(A1^24)" and audit["survivors"] == ["N(A1^24)"]
    values = {(s["candidate"], s["label"]): s["value"] for s in audit["steps"]}
    assert values[("N(A2^12)", "2-part exponent of |M12|")] == 6
    assert values[("N(A3^8)", "2-part exponent of |C2.L3(2)|")] == 4


def test_norm_divisibility():
    assert norm_divisibility_check([[8, 4, 4], [4, 8, 0], [4, 0, 8]], 4)
    assert not norm_divisibility_check([[4, 1], [1, 4]], 4)
    assert not norm_divisibility_check([[2, 0], [0, 4]], 4)


def test_invariant_gram_solver():
    assert invariant_gram_solver(ROTATION) == [[[1, 0], [0, 1]]]
    assert len(invariant_gram_solver([[1, 0], [0, 1]])) == 3
    swap = invariant_gram_solver([[0, 1], [1, 0]])
    assert sorted(swap) == sorted([[[1, 0], [0, 1]], [[0, 1], [1, 0]]])
    # divisibility by 4 then forces diag(4m, 4m)
    assert [p for p in range(1, 13) if norm_divisibility_check([[p, 0], [0, p]], 4)] == [4, 8, 12]


def test_overlattices():
    assert [o.index for o in overlattice_enumeration(1, 2)] == [1]
    over = overlattice_enumeration(4, 2)
    assert [o.index for o in over] == [1, 2]
    assert over[1].gram == [[8, 4, 4], [4, 8, 0], [4, 0, 8]]
    for n in range(1, 5):
        for m in range(1, 3):
            assert {o.index for o in overlattice_enumeration(n, m)} <= {1, 2}


def test_h_squared_analysis():
    report = h_squared_case_analysis()
    assert report.result == 4 and report.passed
    rejected = {(c.index, c.m, c.n): c for c in report.cases if not c.accepted}
    assert rejected[(2, 2, 4)].snf == [4, 4, 16]
    assert rejected[(1, 1, 4)].snf == [4, 4, 16]
    for seed in range(5):
        order = [1, 2]
        random.Random(seed).shuffle(order)
        assert h_squared_case_analysis(order=order).result == 4


def test_rank_relation():
    assert rank_relation_check(3) == 5
    with pytest.warns(RuntimeWarning):
        assert rank_relation_check(20) == 22
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        rank_relation_check(14)
    with pytest.raises(ValueError):
        rank_relation_check(23)


@given(st.lists(st.lists(st.integers(-6, 6), min_size=3, max_size=3), min_size=1, max_size=5))
def test_hermite_basis_spans(rows):
    basis = hermite_basis(rows)
    assert all(in_span(basis, r) is not None for r in rows)


@st.composite
def _unimodular(draw, n):
    # product of elementary integer operations
    u = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(draw(st.integers(0, 6))):
        i, j = draw(st.integers(0, n - 1)), draw(st.integers(0, n - 1))
        if i != j:
            k = draw(st.integers(-3, 3))
            u[i] = [a + k * b for a, b in zip(u[i], u[j])]
    return u


@given(st.data())
def test_snf_unimodular_invariance(data):
    n = data.draw(st.integers(1, 4))
    m = data.draw(st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=n, max_size=n))
    u, v = data.draw(_unimodular(n)), data.draw(_unimodular(n))
    mul = lambda a, b: [[sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    assert smith_normal_form(mul(mul(u, m), v)) == smith_normal_form(m)


@given(st.lists(st.integers(0, 2), min_size=24, max_size=24))
def test_invariant_sublattice_matches_brute_force(assignment):
    blocks = [[i for i, b in enumerate(assignment) if b == k] for k in range(3)]
    problem = GluePartitionProblem([b for b in blocks if b], CODE)
    _, basis = invariant_sublattice(problem)
    found = set(brute_force_fixed_vectors(problem, height=2))
    assert all(in_span(basis, v) is not None for v in found)
    for coeffs in product((-1, 0, 1), repeat=len(basis)):
        v = tuple(sum(c * b[i] for c, b in zip(coeffs, basis)) for i in range(len(basis[0])))
        if max(map(abs, v)) <= 2:
            assert v in found
