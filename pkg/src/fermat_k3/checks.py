"""Registry of named verification checks.

Check ids and citation strings are stable interface data: reports and scripts
refer to them.  Each check returns (passed, detail) where detail is a short
deterministic trace.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass

from . import fixedpoints as FP
from . import lattices as LT
from . import mathieu as MA
from . import matgroups as MG
from . import quartics as QT
from .finitegroups import c2_times_d8, quaternion_group


@dataclass(frozen=True)
class Check:
    id: str
    citation: str
    section: str
    run: object


@dataclass
class CheckResult:
    id: str
    status: str
    citation: str
    elapsed_ms: float
    detail: str

    def as_dict(self):
        return {"id": self.id, "status": self.status, "citation": self.citation,
                "elapsed_ms": self.elapsed_ms, "detail": self.detail}


class Context:
    """Lazily built shared objects; the cache directory holds the code and the M24 chain."""

    def __init__(self, seed=0, cache_dir=None):
        self.seed = seed
        self.cache_dir = cache_dir
        self._memo = {}

    def get(self, key, build):
        if key not in self._memo:
            self._memo[key] = build()
        return self._memo[key]

    @property
    def code(self):
        return self.get("code", lambda: MA.load_or_build_code(self.cache_dir))

    @property
    def m24(self):
        return self.get("m24", lambda: MA.load_or_build_m24(self.code, self.cache_dir))

    @property
    def m23(self):
        return self.get("m23", lambda: MA.point_stabilizer(self.m24, MA.INFINITY))

    @property
    def sylow(self):
        return self.get("sylow", lambda: MA.sylow2(self.m23, self.seed))

    @property
    def f384t(self):
        return self.get("f384t", MG.f384_tilde)

    @property
    def f128(self):
        return self.get("f128", lambda: MG.symplectic_part(MG.f128_tilde()))


REGISTRY = []


def check(id, citation, section):
    def wrap(fn):
        REGISTRY.append(Check(id, citation, section, fn))
        return fn
    return wrap


def _fmt(d):
    return "{" + ", ".join(f"{k}: {d[k]}" for k in sorted(d)) + "}"


# -- Golay code and Mathieu groups ----------------------------------------------------------

S2 = "Section 2: Golay code, Mathieu groups, the group F384"


@check("sec-2-octads", "Section 2, |St(5,8,24)| = 759", S2)
def _octads(ctx):
    spectrum = ctx.code.weight_spectrum()
    ok = len(ctx.code.octads()) == 759 and spectrum == {0: 1, 8: 759, 12: 2576, 16: 759, 24: 1}
    return ok, f"octads {len(ctx.code.octads())}; weight spectrum {_fmt(spectrum)}"


@check("sec-2-steiner", "Section 2, Steiner system St(5,8,24)", S2)
def _steiner(ctx):
    rng = random.Random(ctx.seed)
    bad = 0
    for _ in range(100):
        five = MA.mask_of(rng.sample(range(24), 5))
        if len(MA.octads_containing(ctx.code, five)) != 1:
            bad += 1
    return bad == 0, f"100 random 5-sets, {bad} not in exactly one octad"


@check("sec-2-m24-order", "Section 2, order of M24", S2)
def _m24(ctx):
    n = ctx.m24.order()
    return n == MA.M24_ORDER == 244823040, f"|M24| = {n}"


@check("sec-2-m24-octads", "Section 2, M24 preserves the octads", S2)
def _m24_octads(ctx):
    ok = all(MA.preserves_octads(g, ctx.code) for g in ctx.m24.generators)
    return ok, f"{len(ctx.m24.generators)} generators checked against 759 octads"


@check("sec-2-m23-order", "Section 2, M23 as a point stabilizer", S2)
def _m23(ctx):
    n = ctx.m23.order()
    return n * 24 == MA.M24_ORDER, f"|M23| = {n}"


@check("cor-2.4-sylow2", "Cor 2.4", S2)
def _sylow(ctx):
    p = ctx.sylow
    s = p.abstract().order_structure()
    ok = p.order() == 128 and s == {1: 1, 2: 35, 4: 76, 8: 16}
    return ok, f"order {p.order()}; order structure {_fmt(s)}"


@check("cor-2.4-iso-f128", "Cor 2.4", S2)
def _sylow_iso(ctx):
    iso = MG.iso_search(ctx.sylow.abstract(), ctx.f128.abstract)
    return iso is not None, "explicit isomorphism found" if iso is not None else "no isomorphism"


@check("thm-1.2-order-1536", "Thm 1.2, order 1536", S2)
def _f384(ctx):
    return ctx.f384t.order == 1536, f"closure order {ctx.f384t.order}"


@check("ex-2.1-symplectic-parts", "Example 2.1", S2)
def _symp(ctx):
    a = MG.symplectic_part(ctx.f384t).order
    b = ctx.f128.order
    return (a, b) == (384, 128), f"symplectic parts of orders {a} and {b}"


@check("prop-2.6-order-structure", "Prop 2.6(1)", S2)
def _f128_struct(ctx):
    s = ctx.f128.order_structure()
    return s == {1: 1, 2: 35, 4: 76, 8: 16}, f"order structure {_fmt(s)}"


@check("prop-2.6-commutator", "Prop 2.6(2)", S2)
def _commutator(ctx):
    d = MG.commutator_subgroup(ctx.f128)
    iso = MG.iso_search(d, c2_times_d8()) is not None
    abc = MG.abc_group()
    same = abc.same_elements(d)
    detail = (f"[F128, F128] has order {d.order} and is isomorphic to C2 x D8: {iso}; "
              f"the subgroup generated by A, B, C has order {abc.order} and order structure "
              f"{_fmt(abc.order_structure())}; equal to the commutator subgroup: {same}")
    return d.order == 16 and iso, detail


@check("lemma-4.6-q16", "Lemma 4.6", S2)
def _pq(ctx):
    g = MG.pq_group()
    s = g.order_structure()
    ok = s == {1: 1, 2: 1, 4: 10, 8: 4} and MG.iso_search(g, quaternion_group(16)) is not None
    return ok, f"<P, Q> order structure {_fmt(s)}"


@check("thm-2.5-transcendental", "Thm 2.5(3), Thm 2.5(4)", S2)
def _trans(ctx):
    r2 = FP.admissible_transcendental_values(2)
    r4 = FP.admissible_transcendental_values(4)
    real = FP.realizable_transcendental_values()
    ok = r2 == {1, 2, 3, 4, 6} and r4 - r2 == {5, 8, 10, 12} and len(real) == 40
    return ok, f"rank 2 {sorted(r2)}; rank 4 adds {sorted(r4 - r2)}; realizable count {len(real)}"


@check("thm-2.2-nikulin", "Thm 2.2", S2)
def _nikulin(ctx):
    vals = [FP.nikulin_fixed_count(n) for n in range(2, 9)]
    return vals == [8, 6, 4, 4, 2, 3, 2], f"fixed counts for orders 2..8: {vals}"


# -- projective representations and quartics --------------------------------------------------

S4 = "Section 4: representations of Q16 and the quartic model"


@check("lemma-4.8-irreps", "Lemma 4.8", S4)
def _irreps(ctx):
    reps = QT.q16_irreps()
    chars = [r.character() for r in reps]
    ortho = all(QT.character_inner_product(a, b) == int(i == j)
                for i, a in enumerate(chars) for j, b in enumerate(chars))
    dims = sum(r.dimension ** 2 for r in reps)
    return len(reps) == 7 and dims == 16 and ortho, f"{len(reps)} irreducibles; sum of squared dimensions {dims}"


@check("remark-4.3-d8", "Remark 4.3, Lemma 4.2", S4)
def _d8(ctx):
    return QT.check_d8_obstruction(), "no linear lift of the dihedral projective representation"


@check("lemma-4.9-quadric", "Lemma 4.9", S4)
def _quadric(ctx):
    a = QT.quadric_case_audit()
    fails = [s.label for s in a.failed_steps()]
    return a.passed and a.verdict == "case II impossible", f"verdict {a.verdict}; failed steps {fails}"


@check("lemma-4.11-quartic", "Lemma 4.11, Claims 4.13 and 4.14", S4)
def _quartic(ctx):
    a = QT.quartic_case_audit()
    ok = a.passed and a.result == QT.CANONICAL_QUARTIC
    return ok, f"result {a.result}; {len(a.steps)} steps; notes {len(a.notes)}"


@check("lemma-4.11-smooth", "Lemma 4.11", S4)
def _smooth(ctx):
    cert = QT.smoothness_certificate(QT.CANONICAL_QUARTIC)
    return bool(cert["smooth"]), f"binary resultant {cert.get('resultant')}"


@check("sec-4-fermat-q16", "Lemma 4.6", S4)
def _fermat(ctx):
    a = QT.fermat_q16_check()
    return a.passed, a.verdict


# -- fixed points and bounds -----------------------------------------------------------------

S5 = "Section 5: fixed points, ranks and order bounds"


@check("prop-5.1-order-9", "Prop 5.1(1)", S5)
def _o9(ctx):
    sols = FP.solve_lefschetz(9, 3, 6)
    return sols == [], f"{len(sols)} solutions"


@check("prop-5.1-order-6", "Prop 5.1(2)", S5)
def _o6(ctx):
    sols = {s.counts for s in FP.solve_lefschetz(6, 2, 8)}
    note = FP.fixed_point_bound_note()
    return sols == {(2, 0), (4, 1), (6, 2)}, (
        f"solutions {sorted(sols)}; bound {note['printed_bound']} used as printed, "
        f"symplectic power is {note['symplectic_power']}")


@check("prop-5.1-order-12", "Prop 5.1(3)", S5)
def _o12(ctx):
    sols = {s.counts for s in FP.solve_lefschetz(12, 4, 4)}
    return sols == {(1, 0, 0), (2, 1, 1)}, f"solutions {sorted(sols)}"


@check("prop-4.5-rank", "Prop 4.5, Lemmas 5.4 and 5.6", S5)
def _rank(ctx):
    P = FP.SUBGROUP_PROFILES
    got = [FP.mukai_rank(P[k]) for k in ("Q16", "C5", "C7", "C2^4:C5", "A4xA4")] + [FP.mukai_rank({1: 1})]
    pw = [FP.mukai_rank(FP.elementary_abelian_profile(n)) for n in range(5)]
    from fractions import Fraction
    ok = got == [3, 6, 4, 3, 3, 22] and pw == [6 + Fraction(16, 2 ** n) for n in range(5)]
    return ok, f"ranks {[str(x) for x in got]}; elementary abelian {[str(x) for x in pw]}"


@check("sec-5-solvable-bound", "Prop 3.2, Prop 5.3", S5)
def _solv(ctx):
    r = FP.solvable_bound_audit()
    return r.passed and r.final_bound == 1536 and r.attained_by == ("F384", 4), (
        f"bound {r.final_bound} attained by {r.attained_by}; {len(r.steps)} steps, "
        f"{len(r.failed_steps())} failed")


@check("sec-5-nilpotent-bound", "Prop 3.2, Lemma 5.2", S5)
def _nil(ctx):
    r = FP.nilpotent_bound_audit()
    return r.passed and r.final_bound == 512 and r.attained_by == ("F128", 4), (
        f"bound {r.final_bound} attained by {r.attained_by}; {len(r.steps)} steps, "
        f"{len(r.failed_steps())} failed")


# -- lattices --------------------------------------------------------------------------------

S6 = "Section 6: Niemeier lattice and the polarization degree"


@check("lemma-6.5-niemeier", "Lemma 6.5", S6)
def _niemeier(ctx):
    n = LT.niemeier_a1_24(ctx.code)
    roots = LT.count_short_vectors(ctx.code)
    ok = n.lattice.is_even() and abs(n.lattice.det()) == 1 and roots == 48
    return ok, f"even {n.lattice.is_even()}; det {n.lattice.det()}; roots {roots}"


@check("lemma-6.5-selection", "Lemma 6.5, Prop 6.2", S6)
def _select(ctx):
    a = LT.niemeier_selection_audit()
    return a["verdict"] == "N(A1^24)", f"survivors {a['survivors']}"


@check("lemma-6.6-orbits", "Lemma 6.6", S6)
def _orbits(ctx):
    abstract = MA.orbit_type_solver(24, 5)
    sizes, _ = MA.orbit_partition(ctx.sylow)
    return abstract == [[1, 1, 2, 4, 16]] and sorted(sizes) == [1, 1, 2, 4, 16], (
        f"solver {abstract}; concrete orbits {sizes}")


@check("lemma-6.7-snf", "Lemma 6.7", S6)
def _snf(ctx):
    problem = LT.GluePartitionProblem(
        sorted(MA.orbit_partition(ctx.sylow)[1], key=lambda b: (len(b), b[0])), ctx.code)
    words = LT.invariant_codewords(problem)
    lat, _ = LT.invariant_sublattice(problem)
    snf = LT.smith_normal_form(lat.gram)
    disc = list(LT.discriminant_group(lat).factors)
    ok = snf == [1, 1, 4, 8, 8] and disc == [4, 8, 8] and len(words) == 4
    return ok, (f"invariant codeword weights {[MA.weight(w) for w in words]}; "
                f"invariant factors {tuple(snf)}; discriminant group {tuple(disc)}")


@check("lemma-6.7-gram", "Lemma 6.7", S6)
def _gram(ctx):
    problem = LT.GluePartitionProblem(
        sorted(MA.orbit_partition(ctx.sylow)[1], key=lambda b: (len(b), b[0])), ctx.code)
    gram, _ = LT.orbit_basis_gram(problem)
    absolute = [[abs(x) for x in r] for r in gram]
    return absolute == LT.REFERENCE_ORBIT_GRAM, f"absolute Gram {absolute}"


@check("lemma-6.8-divisibility", "Lemma 6.8(2)", S6)
def _div(ctx):
    fam = LT.invariant_gram_solver(LT.ROTATION)
    ok = fam == [[[1, 0], [0, 1]]] and LT.norm_divisibility_check([[4, 0], [0, 4]], 4) \
        and not LT.norm_divisibility_check([[2, 0], [0, 2]], 4)
    return ok, f"rotation-invariant forms {fam}; diag(4m, 4m) forced"


@check("lemma-6.10-overlattices", "Lemma 6.10", S6)
def _over(ctx):
    a = [o.index for o in LT.overlattice_enumeration(1, 2)]
    b = LT.overlattice_enumeration(4, 2)
    ok = a == [1] and [o.index for o in b] == [1, 2] and b[1].gram == [[8, 4, 4], [4, 8, 0], [4, 0, 8]]
    return ok, f"(n, m) = (1, 2): indices {a}; (4, 2): indices {[o.index for o in b]}"


@check("lemma-6.11-h-squared", "Lemma 6.11", S6)
def _h2(ctx):
    r = LT.h_squared_case_analysis()
    rejected = [(c.index, c.m, c.n, tuple(c.snf)) for c in r.cases if not c.accepted and c.snf]
    return r.passed and r.result == 4, f"(H^2) = {r.result}; rejected by invariant factors {rejected}"


@check("cor-6.4-rank", "Cor 6.4(1)", S6)
def _rank_rel(ctx):
    rank_lk = FP.mukai_rank(ctx.f128.order_structure())
    rk = LT.rank_relation_check(int(rank_lk))
    return rank_lk == 3 and rk == 5, f"rank L^K = {rank_lk}; rank N^K = {rk}"


# -- running ---------------------------------------------------------------------------------


class UnknownCheck(KeyError):
    pass


def list_checks():
    return [(c.id, c.citation) for c in REGISTRY]


def select(ids=None):
    if ids is None:
        return list(REGISTRY)
    by_id = {c.id: c for c in REGISTRY}
    missing = [i for i in ids if i not in by_id]
    if missing:
        raise UnknownCheck(", ".join(missing))
    return [by_id[i] for i in ids]


def run_check(c, ctx, timings=False):
    start = time.perf_counter()
    try:
        ok, detail = c.run(ctx)
        status = "pass" if ok else "fail"
    except Exception as exc:  # reported, not raised
        status, detail = "error", f"{type(exc).__name__}: {exc}"
    elapsed = round((time.perf_counter() - start) * 1000, 3) if timings else None
    if status != "pass" and not detail:
        detail = "no trace"
    return CheckResult(c.id, status, c.citation, elapsed, detail)


def run_checks(ids=None, seed=0, cache_dir=None, timings=False):
    ctx = Context(seed, cache_dir)
    return [run_check(c, ctx, timings) for c in select(ids)]


def section_of(check_id):
    return next(c.section for c in REGISTRY if c.id == check_id)
