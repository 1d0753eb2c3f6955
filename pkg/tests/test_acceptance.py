"""One test per acceptance criterion; each prints a single PASS/FAIL line."""

import random
import subprocess
import sys
import time
from contextlib import contextmanager
from fractions import Fraction

from hypothesis import settings

from fermat_k3 import fixedpoints as FP
from fermat_k3 import lattices as LT
from fermat_k3 import mathieu as MA
from fermat_k3 import matgroups as MG
from fermat_k3 import quartics as QT
from fermat_k3.finitegroups import c2_times_d8, quaternion_group


@contextmanager
def criterion(number, name, limit):
    start = time.perf_counter()
    outcome = "FAIL"
    try:
        yield
        elapsed = time.perf_counter() - start
        assert elapsed < limit, f"took {elapsed:.2f}s, limit {limit}s"
        outcome = "PASS"
    finally:
        elapsed = time.perf_counter() - start
        print(f"[criterion {number:2d}] {outcome} {name} ({elapsed:.2f}s, limit {limit}s)")


def test_c01_golay_steiner():
    with criterion(1, "Golay code and Steiner system", 1):
        code = MA.golay_construct()
        assert len(code.octads()) == 759
        assert code.weight_spectrum() == {0: 1, 8: 759, 12: 2576, 16: 759, 24: 1}
        rng = random.Random(0)
        for _ in range(100):
            five = MA.mask_of(rng.sample(range(24), 5))
            assert len(MA.octads_containing(code, five)) == 1


def test_c02_mathieu_orders():
    with criterion(2, "orders of M24 and M23", 5):
        code = MA.golay_construct()
        m24 = MA.m24_construct(code)
        assert m24.order() == 244823040
        m23 = MA.point_stabilizer(m24, MA.INFINITY)
        assert m23.order() == m24.order() // 24
        assert all(MA.preserves_octads(g, code) for g in m24.generators)


def test_c03_sylow2_of_m23():
    with criterion(3, "Sylow 2-subgroup of M23 is F128", 30):
        p = MA.m23_sylow2(seed=0)
        assert p.order() == 128
        f128 = MG.symplectic_part(MG.f128_tilde())
        s = {1: 1, 2: 35, 4: 76, 8: 16}
        assert p.abstract().order_structure() == s == f128.order_structure()
        iso = MG.iso_search(p.abstract(), f128.abstract)
        assert iso is not None


def test_c04_matrix_groups():
    # The commutator subgroup is C2 x D8, but the three printed matrices A, B, C
    # generate a different group of order 16 (A is a square in F128), so this
    # criterion fails as stated.
    with criterion(4, "F384 closure, symplectic parts, commutator, Q16", 20):
        big = MG.f384_tilde()
        assert big.order == 1536
        assert MG.symplectic_part(big).order == 384
        f128 = MG.symplectic_part(MG.f128_tilde())
        assert f128.order == 128
        q = MG.pq_group()
        assert q.order_structure() == {1: 1, 2: 1, 4: 10, 8: 4}
        assert MG.iso_search(q, quaternion_group(16)) is not None
        d = MG.commutator_subgroup(f128)
        assert MG.iso_search(d, c2_times_d8()) is not None
        assert MG.abc_group().same_elements(d)


def test_c05_lefschetz():
    with criterion(5, "holomorphic Lefschetz solutions", 1):
        assert FP.solve_lefschetz(9, 3, 6) == []
        assert {s.counts for s in FP.solve_lefschetz(6, 2, 8)} == {(2, 0), (4, 1), (6, 2)}
        assert {s.counts for s in FP.solve_lefschetz(12, 4, 4)} == {(1, 0, 0), (2, 1, 1)}


def test_c06_rank_formula():
    with criterion(6, "invariant rank formula", 1):
        P = FP.SUBGROUP_PROFILES
        assert FP.mukai_rank(P["Q16"]) == 3
        assert FP.mukai_rank({1: 1}) == 22
        assert FP.mukai_rank(P["C5"]) == 6
        assert FP.mukai_rank(P["C7"]) == 4
        assert FP.mukai_rank(P["C2^4:C5"]) == 3
        assert FP.mukai_rank(P["A4xA4"]) == 3
        for n in range(5):
            assert FP.mukai_rank(FP.elementary_abelian_profile(n)) == 6 + Fraction(16, 2 ** n)


def test_c07_transcendental_values():
    with criterion(7, "transcendental values", 1):
        r2 = FP.admissible_transcendental_values(2)
        assert r2 == {1, 2, 3, 4, 6}
        assert FP.admissible_transcendental_values(4) == r2 | {5, 8, 10, 12}
        assert len(FP.realizable_transcendental_values()) == 40


def test_c08_bound_audits():
    with criterion(8, "solvable and nilpotent bound audits", 5):
        s = FP.solvable_bound_audit()
        assert s.final_bound == 1536 and s.attained_by == ("F384", 4)
        n = FP.nilpotent_bound_audit()
        assert n.final_bound == 512 and n.attained_by == ("F128", 4)
        for report in (s, n):
            assert report.steps and all(step.passed for step in report.steps)


def test_c09_quartic_audits():
    with criterion(9, "representation and quartic audits", 30):
        assert QT.check_d8_obstruction()
        reps = QT.q16_irreps()
        chars = [r.character() for r in reps]
        for i, a in enumerate(chars):
            for j, b in enumerate(chars):
                assert QT.character_inner_product(a, b) == (1 if i == j else 0)
        dims = sorted(r.dimension for r in reps)
        assert dims == [1, 1, 1, 1, 2, 2, 2] and 4 * 1 + 3 * 4 == 16
        quad = QT.quadric_case_audit()
        assert quad.passed and any("4 != 8" in st.detail for st in quad.steps)
        quart = QT.quartic_case_audit()
        expected = QT.poly({(4, 0, 0, 0): 1, (0, 4, 0, 0): 1, (0, 0, 3, 1): 1, (0, 0, 1, 3): 1})
        assert quart.passed and quart.result == expected
        assert QT.smoothness_certificate(quart.result)["smooth"]
        assert QT.fermat_q16_check().passed


def test_c10_lattice_chain():
    with criterion(10, "Niemeier lattice and polarization degree", 60):
        code = MA.golay_construct()
        n = LT.niemeier_a1_24(code)
        assert n.lattice.is_even() and abs(n.lattice.det()) == 1
        assert LT.count_short_vectors(code) == 48
        assert LT.niemeier_selection_audit()["verdict"] == "N(A1^24)"
        assert MA.orbit_type_solver(24, 5) == [[1, 1, 2, 4, 16]]
        audit = LT.fixed_lattice_audit(seed=0, code=code)
        assert audit["agree"] and audit["sizes"] == [1, 1, 2, 4, 16]
        assert audit["snf"] == [1, 1, 4, 8, 8] and audit["discriminant"] == [4, 8, 8]
        h = LT.h_squared_case_analysis()
        assert h.result == 4
        rejected = [c for c in h.cases if not c.accepted and c.snf]
        assert len(rejected) == 2 and all(c.snf == [4, 4, 16] for c in rejected)


def test_c11_property_suites():
    import test_cyclotomic
    import test_lattices
    import test_matgroups
    import test_quartics

    with criterion(11, "property suites, 1000 cases each", 60):
        assert settings.default.max_examples == 1000 and settings.default.derandomize
        for prop in (
            test_cyclotomic.test_ring_axioms,
            test_matgroups.test_closure_idempotence,
            test_matgroups.test_alpha_is_homomorphism,
            test_quartics.test_apply_is_right_action,
            test_lattices.test_snf_unimodular_invariance,
            test_lattices.test_invariant_sublattice_matches_brute_force,
        ):
            prop()


def test_c12_end_to_end(tmp_path):
    with criterion(12, "verify --all is green and byte-stable", 300):
        outs = []
        for k in range(2):
            out = tmp_path / f"report{k}.json"
            proc = subprocess.run([sys.executable, "-m", "fermat_k3", "verify", "--all", "--format", "json",
                                   "--seed", "0", "--out", str(out)], capture_output=True)
            assert proc.returncode == 0, proc.stderr.decode()
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]
