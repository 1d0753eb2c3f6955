import pytest
from hypothesis import given, strategies as st

from fermat_k3 import matgroups as M
from fermat_k3.cyclotomic import cyc, zeta
from fermat_k3.finitegroups import (
    CapacityError,
    ClosureOverflow,
    FiniteGroup,
    c2_times_d8,
    cyclic_group,
    dihedral_group,
    quaternion_group,
)
from fermat_k3.matgroups import (
    CycMatrix,
    ProjMatrix,
    ShapeError,
    alpha_multiplier,
    commutator_subgroup,
    group_closure,
    group_invariants,
    iso_search,
    projective_normalize,
    symplectic_part,
)

I = zeta(4)

_cache = {}


def cached(name, build):
    if name not in _cache:
        _cache[name] = build()
    return _cache[name]


def f384t():
    return cached("f384t", M.f384_tilde)


def f128t():
    return cached("f128t", M.f128_tilde)


def f128():
    return cached("f128", lambda: symplectic_part(f128t()))


def test_projective_normalize_examples():
    assert projective_normalize(CycMatrix.diag(I, I, I, I)).is_identity()
    m = CycMatrix([[0, 2, 0, 0], [I, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 3]])
    assert projective_normalize(m) == projective_normalize(-m)
    assert projective_normalize(CycMatrix.diag(I, 1, 1, 1)).rep == CycMatrix.diag(1, -I, -I, -I)
    with pytest.raises(ValueError):
        projective_normalize(CycMatrix.diag(0, 0, 0, 0))


def test_closure_examples():
    assert group_closure([ProjMatrix(CycMatrix.identity(4))]).order == 1
    assert f384t().order == 1536
    assert M.abc_group().order == 16
    assert M.pq_group().order == 16


def test_closure_overflow_carries_partial_count():
    with pytest.raises(ClosureOverflow) as err:
        group_closure(M.fermat_generators(), cap=100)
    assert err.value.partial == 100


def test_symplectic_parts():
    assert symplectic_part(f384t()).order == 384
    assert f128().order == 128
    assert symplectic_part(M.diagonal_group()).order == 16
    assert symplectic_part(f384t()).order * 4 == f384t().order
    assert f128().order * 4 == f128t().order


def test_order_structures():
    assert f128().order_structure() == {1: 1, 2: 35, 4: 76, 8: 16}
    assert M.pq_group().order_structure() == {1: 1, 2: 1, 4: 10, 8: 4}
    assert group_closure([ProjMatrix(CycMatrix.identity(4))]).order_structure() == {1: 1}


def test_f128_elements_of_order_eight_do_not_square_to_identity():
    g = f128()
    for x in g.elements:
        o = g.abstract.element_order(g.index[x])
        assert o in (1, 2, 4, 8)
        if o == 8:
            assert not (x * x).is_identity()


def test_commutator_subgroup_of_f128():
    d = commutator_subgroup(f128())
    assert d.order == 16
    assert iso_search(d, c2_times_d8()) is not None
    assert d.is_subgroup_of(f128())
    # A and C lie in it, but A is a square there, so the three printed matrices
    # cannot generate it: they give a different order-16 group.
    a, c = ProjMatrix(M.MATRIX_A), ProjMatrix(M.MATRIX_C)
    assert a in d and c in d
    assert a in {x * x for x in d.elements}
    abc = M.abc_group()
    assert abc.order_structure() == {1: 1, 2: 7, 4: 8}
    assert not abc.same_elements(d)


def test_commutator_examples():
    assert commutator_subgroup(M.diagonal_group()).order == 1
    q = M.pq_group()
    d = commutator_subgroup(q)
    p = ProjMatrix(M.MATRIX_P)
    assert d.order == 4
    assert d.same_elements(group_closure([p * p]))
    brute = group_closure([x.inverse() * y.inverse() * x * y for x in q.elements for y in q.elements])
    assert brute.same_elements(d)


def test_alpha_examples():
    assert alpha_multiplier(ProjMatrix(CycMatrix.diag(1, 1, 1, I))) == I
    assert alpha_multiplier(ProjMatrix(CycMatrix.identity(4))) == 1
    assert alpha_multiplier(ProjMatrix(M.MATRIX_P)) == 1
    with pytest.raises(ShapeError):
        alpha_multiplier(CycMatrix([[1, 1, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]))


def test_group_invariants_examples():
    assert group_invariants(M.pq_group()).center_order == 2
    assert group_invariants(c2_times_d8()).abelianization == (2, 2, 2)
    assert group_invariants(cyclic_group(8)).exponent == 8
    inv = group_invariants(f128())
    assert inv.center_order == 2 and inv.exponent == 8


def test_iso_search_examples():
    assert iso_search(M.abc_group(), M.abc_group()) is not None
    assert iso_search(M.pq_group(), quaternion_group(16)) is not None
    assert iso_search(quaternion_group(16), dihedral_group(16)) is None
    g = quaternion_group(16)
    iso = iso_search(g, g)
    for a in range(16):
        for b in range(16):
            assert iso(g.mul(a, b)) == g.mul(iso(a), iso(b))
    with pytest.raises(CapacityError):
        iso_search(f384t(), f384t())


def test_abelian_invariants_against_models():
    prod = FiniteGroup.from_permutations([(1, 2, 3, 0, 4, 5, 6), (0, 1, 2, 3, 5, 6, 4)])
    assert prod.abelian_invariants() == (12,)
    klein = FiniteGroup.from_permutations([(1, 0, 2, 3), (0, 1, 3, 2)])
    assert klein.abelian_invariants() == (2, 2)


def test_sylow_conjugates_share_order_structure():
    structures = [s.order_structure() for s in M.sylow_conjugates()]
    assert structures[0] == structures[1] == structures[2]
    sets = [frozenset(s.elements) for s in M.sylow_conjugates()]
    assert len(set(sets)) == 3
    assert all(all(x in f384t() for x in s) for s in sets)


def test_closure_idempotent_on_full_element_sets():
    for g in (M.pq_group(), M.abc_group(), commutator_subgroup(f128())):
        again = group_closure(g.elements)
        assert again.same_elements(g)


def test_matrix_linear_algebra():
    m = CycMatrix([[1, I, 0, 0], [0, 2, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])
    assert m * m.inverse() == CycMatrix.identity(4)
    assert m.det() == -2
    assert M.MATRIX_P.det() == 1
    assert (M.MATRIX_A * M.MATRIX_B).trace() == cyc(0) + 1 + I - 1 + I


def test_cache_round_trip():
    g = M.pq_group()
    text = M.dump_group(g)
    back = M.load_group(text)
    assert back.elements == g.elements
    assert M.dump_group(back) == text
    with pytest.raises(ValueError):
        M.load_group("garbage\n")


f128_index = st.integers(0, 127)


@given(f128_index, f128_index, st.integers(0, 3))
def test_alpha_is_homomorphism(i, j, k):
    g = f128t().elements
    x, y = g[i * 4 + k], g[(j * 4 + 3 * k) % 512]
    assert alpha_multiplier(x * y) == alpha_multiplier(x) * alpha_multiplier(y)


@given(st.lists(f128_index, min_size=1, max_size=2), st.lists(st.integers(0, 10 ** 6), max_size=3))
def test_closure_idempotence(gen_idx, extra):
    elems = f128().elements
    h = group_closure([elems[i] for i in gen_idx])
    more = [h.elements[e % h.order] for e in extra]
    again = group_closure(list(h.generators) + more)
    assert again.same_elements(h)
    assert h.is_subgroup_of(f128())
