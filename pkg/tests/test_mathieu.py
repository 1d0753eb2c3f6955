import random
from math import comb

import pytest
from hypothesis import given, strategies as st

from fermat_k3 import mathieu as MA
from fermat_k3.matgroups import f128_tilde, iso_search, symplectic_part
from fermat_k3.permgroups import PermGroup, SearchExhausted, identity, mul, setwise_stabilizer_of_pair

CODE = MA.golay_construct()
WORDS = sorted(CODE.codewords)
_groups = {}


def m24():
    if "m24" not in _groups:
        _groups["m24"] = MA.m24_construct(CODE)
    return _groups["m24"]


def m23():
    if "m23" not in _groups:
        _groups["m23"] = MA.point_stabilizer(m24(), MA.INFINITY)
    return _groups["m23"]


def syl():
    if "syl" not in _groups:
        _groups["syl"] = MA.sylow2(m23())
    return _groups["syl"]


def test_golay_counts():
    assert len(CODE) == 4096
    assert len(CODE.octads()) == 759
    assert MA.FULL in CODE and 0 in CODE
    assert CODE.weight_spectrum() == {0: 1, 8: 759, 12: 2576, 16: 759, 24: 1}
    assert len(CODE.generator_rows) == 12


def test_steiner_queries():
    rng = random.Random(0)
    for _ in range(100):
        five = MA.mask_of(rng.sample(range(24), 5))
        octad = MA.steiner_query(CODE, five)
        assert octad & five == five and MA.weight(octad) == 8
    four = MA.mask_of([0, 1, 2, 3])
    assert len(MA.octads_containing(CODE, four)) == (24 - 4) // (8 - 4)
    assert comb(24, 5) == 759 * comb(8, 5)
    with pytest.raises(ValueError):
        MA.steiner_query(CODE, four)


def test_code_cache_round_trip(tmp_path):
    text = CODE.to_text()
    assert MA.code_from_text(text) == CODE
    bad = text.replace(text.splitlines()[5], "ffffff", 1)
    with pytest.raises(MA.CorruptCode):
        MA.code_from_text(bad)
    first = MA.load_or_build_code(str(tmp_path))
    second = MA.load_or_build_code(str(tmp_path))
    assert first == second == CODE


def test_m24_order_and_generators():
    g = m24()
    assert g.order() == 244823040 == 2 ** 10 * 3 ** 3 * 5 * 7 * 11 * 23
    for perm in MA.m24_generators().values():
        assert MA.preserves_octads(perm, CODE)
    assert MA.orbit_partition(g)[0] == [24]


def test_m24_against_sympy_oracle():
    sympy_comb = pytest.importorskip("sympy.combinatorics")
    gens = [sympy_comb.Permutation(list(p)) for p in MA.m24_generators().values()]
    assert sympy_comb.PermutationGroup(gens).order() == m24().order()


def test_rejects_bad_generator():
    bad = list(identity(24))
    bad[0], bad[1] = 1, 0
    assert not MA.preserves_octads(tuple(bad), CODE)


def test_five_transitivity_samples():
    assert MA.is_five_transitive_sample(m24(), random.Random(3), samples=25)


def test_bsgs_cache_round_trip(tmp_path):
    text = MA.bsgs_to_json(m24())
    again = MA.bsgs_from_json(text, CODE)
    assert again.order() == m24().order()
    assert MA.load_or_build_m24(CODE, str(tmp_path)).order() == 244823040
    assert MA.load_or_build_m24(CODE, str(tmp_path)).order() == 244823040


def test_m23():
    h = m23()
    assert h.order() == 244823040 // 24 == 10200960
    for g in h.generators:
        assert g[MA.INFINITY] == MA.INFINITY
        assert MA.preserves_octads(g, CODE)
    trivial = PermGroup([], 24)
    assert trivial.point_stabilizer(5).order() == 1


def test_sylow2_of_m23():
    p = syl()
    assert p.order() == 128
    assert all(g[MA.INFINITY] == MA.INFINITY for g in p.generators)
    assert all(g in m23() for g in p.generators)
    assert p.abstract().order_structure() == {1: 1, 2: 35, 4: 76, 8: 16}
    sizes, blocks = MA.orbit_partition(p)
    assert sizes == [1, 1, 2, 4, 16]
    assert [min(b) for b in blocks] == sorted(min(b) for b in blocks)


def test_sylow2_isomorphic_to_f128():
    f128 = symplectic_part(f128_tilde())
    iso = iso_search(syl().abstract(), f128.abstract)
    assert iso is not None


def test_sylow2_other_seeds_and_odd_groups():
    assert MA.sylow2(m23(), seed=5).order() == 128
    odd = PermGroup([tuple((i + 1) % 7 for i in range(7))], 7)
    assert MA.sylow2(odd).order() == 1


def test_sylow2_search_exhausted_without_odd_orbits():
    # C8 acting regularly has only even orbits on points and on pairs
    g = PermGroup([tuple((i + 1) % 8 for i in range(8))], 8)
    with pytest.raises(SearchExhausted):
        MA.sylow2(g, enumeration_limit=4)
    assert MA.sylow2(g).order() == 8


def test_orbit_type_solver():
    assert MA.orbit_type_solver(24, 5) == [[1, 1, 2, 4, 16]]
    assert MA.orbit_type_solver(1, 1) == [[1]]
    assert len(MA.orbit_type_solver(24, 5, powers_of_two=False)) > 1


def test_pair_stabilizer_orders():
    g = m24()
    assert setwise_stabilizer_of_pair(g, 0, 1).order() == 244823040 // 276


@given(st.integers(0, 4095), st.integers(0, 4095))
def test_golay_closed_under_symmetric_difference(i, j):
    assert WORDS[i] ^ WORDS[j] in CODE


@given(st.permutations(range(4)), st.integers(0, 10 ** 6))
def test_bsgs_order_independent_of_generator_order(order, salt):
    gens = list(MA.m24_generators().values())
    rng = random.Random(salt)
    chosen = [gens[k] for k in order[: 2 + salt % 3]]
    # conjugate by a random permutation to vary the input further
    c = list(range(24))
    rng.shuffle(c)
    c = tuple(c)
    ci = tuple(sorted(range(24), key=lambda x: c[x]))
    conj = [mul(mul(ci, g), c) for g in chosen]
    a = PermGroup(chosen, 24).order()
    assert PermGroup(list(reversed(chosen)), 24).order() == a
    assert PermGroup(conj, 24).order() == a


@given(st.integers(0, 10 ** 6))
def test_stabilizer_orbit_relation(salt):
    rng = random.Random(salt)
    gens = list(MA.m24_generators().values())
    sub = PermGroup(rng.sample(gens, rng.randint(1, 2)), 24)
    p = rng.randrange(24)
    orbit = next(o for o in sub.orbits() if p in o)
    assert sub.point_stabilizer(p).order() * len(orbit) == sub.order()
