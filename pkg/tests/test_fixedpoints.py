from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from fermat_k3.cyclotomic import euler_phi
from fermat_k3.finitegroups import FiniteGroup, cyclic_group, dihedral_group, quaternion_group
from fermat_k3.fixedpoints import (
    SUBGROUP_PROFILES,
    admissible_transcendental_values,
    elementary_abelian_profile,
    enumerate_local_types,
    fixed_point_bound_note,
    lefschetz_residual,
    load_mukai_table,
    max_I_under_rank_bound,
    mukai_rank,
    nikulin_fixed_count,
    nilpotent_bound_audit,
    orders_with_fixed_count_at_least,
    rational_solution_exists,
    realizable_transcendental_values,
    solvable_bound_audit,
    solve_lefschetz,
    topological_fixed_bound,
)


def test_nikulin_table():
    assert [nikulin_fixed_count(n) for n in range(2, 9)] == [8, 6, 4, 4, 2, 3, 2]
    for bad in (1, 9, 0):
        with pytest.raises(ValueError):
            nikulin_fixed_count(bad)


def test_local_types():
    pairs = lambda N, w: sorted(tuple(sorted((t.p, t.q))) for t in enumerate_local_types(N, w))
    assert pairs(6, 2) == [(1, 1), (3, 5)]
    assert pairs(9, 3) == [(1, 2), (4, 8), (5, 7)]
    assert len(enumerate_local_types(12, 4)) == 3
    assert [t.label for t in enumerate_local_types(6, 2)] == [1, 5]
    assert [t.label for t in enumerate_local_types(9, 3)] == [1, 2, 7]
    assert [t.label for t in enumerate_local_types(12, 4)] == [1, 3, 9]
    loose = sorted(tuple(sorted((t.p, t.q))) for t in enumerate_local_types(6, 2, faithful=False))
    assert loose == [(1, 1), (3, 5), (4, 4)]
    with pytest.raises(ValueError):
        enumerate_local_types(6, 0)


def test_lefschetz_solutions():
    assert solve_lefschetz(9, 3, 6) == []
    assert not rational_solution_exists(9, 3)
    assert [s.counts for s in solve_lefschetz(6, 2, 8)] == [(2, 0), (4, 1), (6, 2)]
    assert [s.counts for s in solve_lefschetz(12, 4, 4)] == [(1, 0, 0), (2, 1, 1)]
    for N, w, b in ((6, 2, 8), (12, 4, 4)):
        for s in solve_lefschetz(N, w, b):
            assert s.residual().is_zero()
    with pytest.raises(ValueError):
        solve_lefschetz(6, 2, 25)


def test_unfaithful_types_change_solutions():
    strict = {s.counts for s in solve_lefschetz(6, 2, 8)}
    loose = solve_lefschetz(6, 2, 8, faithful=False)
    assert len(loose) > len(strict)
    assert all(s.residual().is_zero() for s in loose)


def test_order_six_bound_note():
    note = fixed_point_bound_note()
    assert note["printed_bound"] == 8 and note["symplectic_power"] == 3
    assert note["bound_used"] == nikulin_fixed_count(2)


def test_mukai_rank_examples():
    assert mukai_rank(SUBGROUP_PROFILES["Q16"]) == 3
    assert mukai_rank({1: 1}) == 22
    assert mukai_rank(SUBGROUP_PROFILES["C5"]) == 6
    assert mukai_rank(SUBGROUP_PROFILES["C7"]) == 4
    assert mukai_rank(SUBGROUP_PROFILES["C2^4:C5"]) == 3
    assert mukai_rank(SUBGROUP_PROFILES["A4xA4"]) == 3
    for n in range(8):
        assert mukai_rank(elementary_abelian_profile(n)) == 6 + Fraction(16, 2 ** n)
    with pytest.raises(ValueError):
        mukai_rank({1: 1, 9: 8})


def _f16_affine():
    # F16 = F2[x]/(x^4 + x + 1); translations and multiplication by x^3 (order 5)
    def times(a, b):
        r = 0
        for i in range(4):
            if b >> i & 1:
                r ^= a << i
        for i in (7, 6, 5, 4):
            if r >> i & 1:
                r ^= 0b10011 << (i - 4)
        return r

    gens = [tuple(t ^ (1 << k) for t in range(16)) for k in range(4)]
    gens.append(tuple(times(t, 8) for t in range(16)))
    return FiniteGroup.from_permutations(gens)


def _affine(p, a):
    return FiniteGroup.from_permutations([tuple((t + 1) % p for t in range(p)), tuple(a * t % p for t in range(p))])


def _product(g1, g2, n1, n2):
    shift = lambda g: tuple(range(n1)) + tuple(n1 + x for x in g)
    pad = lambda g: tuple(g) + tuple(range(n1, n1 + n2))
    return FiniteGroup.from_permutations([pad(g) for g in g1] + [shift(g) for g in g2])


A4 = [(1, 2, 0, 3), (1, 0, 3, 2)]
S3 = [(1, 2, 0), (1, 0, 2)]
C3 = [(1, 2, 0)]

MODELS = {
    "Q16": lambda: quaternion_group(16),
    "C8": lambda: cyclic_group(8),
    "C3": lambda: cyclic_group(3),
    "C5": lambda: cyclic_group(5),
    "C7": lambda: cyclic_group(7),
    "C3^2": lambda: _product(C3, C3, 3, 3),
    "C2^4:C5": _f16_affine,
    "A4xA4": lambda: _product(A4, A4, 4, 4),
}


@pytest.mark.parametrize("name", sorted(MODELS))
def test_subgroup_profiles_match_models(name):
    g = MODELS[name]()
    assert g.order_structure() == SUBGROUP_PROFILES[name]


def test_rank_of_further_solvable_groups():
    extra = {
        "D10": dihedral_group(10),
        "C5:C4": _affine(5, 2),
        "C7:C3": _affine(7, 2),
        "S3xS3": _product(S3, S3, 3, 3),
        "C3xS3": _product(C3, S3, 3, 3),
    }
    assert {k: g.order for k, g in extra.items()} == {"D10": 10, "C5:C4": 20, "C7:C3": 21, "S3xS3": 36, "C3xS3": 18}
    entries, _ = load_mukai_table()
    orders = {e.name: e.order for e in entries}
    for name, g in extra.items():
        assert orders[name] == g.order
        r = mukai_rank(g.order_structure())
        assert r.denominator == 1 and r >= 3


def test_mukai_table_ranks():
    entries, nilpotent_ii = load_mukai_table()
    assert {e.case for e in entries} == {"I", "II", "III", "IV", "V"}
    with_structure = [e for e in entries if e.order_structure]
    assert len(with_structure) >= 6
    for e in with_structure:
        assert sum(e.order_structure.values()) == e.order
        r = mukai_rank(e.order_structure)
        assert r.denominator == 1 and r >= 3
    assert max(order for _, order in nilpotent_ii) == 12


def test_phi_and_transcendental_values():
    assert euler_phi(1) == 1 and euler_phi(66) == 20 and euler_phi(60) == 16
    assert admissible_transcendental_values(2) == {1, 2, 3, 4, 6}
    assert admissible_transcendental_values(4) == {1, 2, 3, 4, 6, 5, 8, 10, 12}
    real = realizable_transcendental_values()
    assert len(real) == 40 and max(real) == 66 and 60 not in real
    assert [max_I_under_rank_bound(r) for r in (3, 5, 9)] == [6, 12, 30]


def test_fixed_bounds():
    assert topological_fixed_bound(12) == 6
    assert topological_fixed_bound(9) == 0
    assert topological_fixed_bound(13) == 8
    assert orders_with_fixed_count_at_least(8) == [2]
    assert orders_with_fixed_count_at_least(6, strict_orders=(3,)) == [2]
    assert orders_with_fixed_count_at_least(6) == [2, 3]


def test_solvable_audit():
    report = solvable_bound_audit()
    assert report.final_bound == 1536
    assert report.passed and not report.failed_steps()
    assert report.attained_by == ("F384", 4)
    assert report.assumptions
    d = report.as_dict()
    assert d["passed"] and len(d["steps"]) == len(report.steps)


def test_nilpotent_audit():
    report = nilpotent_bound_audit()
    assert report.final_bound == 512
    assert report.passed
    assert report.attained_by == ("F128", 4)


def test_audit_marks_failing_step():
    report = solvable_bound_audit()
    report.check("deliberately false", 2, "<", 1)
    assert not report.passed
    assert [s.label for s in report.failed_steps()] == ["deliberately false"]


@given(st.integers(1, 21), st.integers(1, 4))
def test_admissible_values_monotone_under_divisibility(r, k):
    if r * k <= 21:
        assert admissible_transcendental_values(r) <= admissible_transcendental_values(r * k)


@given(st.integers(1, 40))
def test_max_I_nondecreasing(r):
    assert max_I_under_rank_bound(r) <= max_I_under_rank_bound(r + 1)


@given(st.integers(2, 12), st.integers(1, 11), st.integers(0, 4))
def test_residual_matches_solver(N, w, bound):
    if w % N == 0 or N > 9:
        return
    types = enumerate_local_types(N, w)
    sols = {s.counts for s in solve_lefschetz(N, w, bound)}
    # every solver output has zero residual; a small sample of non-solutions does not
    for counts in sols:
        assert lefschetz_residual(N, w, types, counts).is_zero()
    if types:
        probe = tuple([bound] + [0] * (len(types) - 1))
        assert (probe in sols) == lefschetz_residual(N, w, types, probe).is_zero()
