"""Fixed-point arithmetic for finite automorphism groups of K3 surfaces.

Contents:

* the fixed-point counts of symplectic automorphisms of order 2..8;
* the holomorphic Lefschetz identity for a non-symplectic g of order N with
  ``g^* omega = zeta_N^w omega``, solved for nonnegative counts of isolated
  fixed points of each local type;
* the rank formula for the invariant lattice of a symplectic group from its
  order structure;
* the admissible orders of the transcendental multiplier;
* replayed bound audits for solvable and nilpotent K3 groups.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from itertools import product
from math import gcd

from .cyclotomic import euler_phi, zeta
from .linalg import solve

NIKULIN_TABLE = {2: 8, 3: 6, 4: 4, 5: 4, 6: 2, 7: 3, 8: 2}


def nikulin_fixed_count(n):
    """Number of fixed points of a symplectic automorphism of order n."""
    if n not in NIKULIN_TABLE:
        raise ValueError(f"symplectic automorphisms have order 2..8, got {n}")
    return NIKULIN_TABLE[n]


def orders_with_fixed_count_at_least(bound, strict_orders=()):
    """Orders n whose fixed-point count is >= bound (> bound for strict_orders)."""
    out = []
    for n, f in NIKULIN_TABLE.items():
        if f > bound or (f == bound and n not in strict_orders):
            out.append(n)
    return sorted(out)


# -- holomorphic Lefschetz ---------------------------------------------------------


@dataclass(frozen=True, order=True)
class LocalFixedType:
    """Local linearization diag(zeta_N^p, zeta_N^q) at an isolated fixed point."""

    N: int
    p: int
    q: int

    @property
    def label(self):
        # written as (zeta^-k x, zeta^(w+k) y), the smaller such k labels the type
        return min(self.N - self.p, self.N - self.q)

    def contribution(self):
        z = zeta(self.N)
        return ((1 - z ** self.p) * (1 - z ** self.q)).inverse()


def enumerate_local_types(N, w, faithful=True):
    if N < 2 or w % N == 0:
        raise ValueError("need N >= 2 and w not divisible by N")
    out = []
    for p in range(1, N):
        for q in range(p, N):
            if (p + q - w) % N:
                continue
            if faithful:
                op, oq = N // gcd(p, N), N // gcd(q, N)
                if op * oq // gcd(op, oq) != N:
                    continue
            out.append(LocalFixedType(N, q, p))
    return sorted(out, key=lambda t: t.label)


@dataclass(frozen=True)
class LefschetzSolution:
    N: int
    w: int
    types: tuple
    counts: tuple

    def as_dict(self):
        return {t.label: m for t, m in zip(self.types, self.counts)}

    def residual(self):
        return lefschetz_residual(self.N, self.w, self.types, self.counts)


def lefschetz_lhs(N, w):
    return 1 + zeta(N, -w)


def lefschetz_residual(N, w, types, counts):
    total = lefschetz_lhs(N, w)
    for t, m in zip(types, counts):
        total = total - t.contribution() * m
    return total


def lefschetz_linear_system(N, w, types):
    """Coefficient columns and right-hand side over the power basis of Q(zeta_N)."""
    phi = euler_phi(N)
    cols = [list(t.contribution().promote(N).coeffs) for t in types]
    rows = [[cols[j][i] for j in range(len(types))] for i in range(phi)]
    rhs = list(lefschetz_lhs(N, w).promote(N).coeffs)
    return rows, rhs


def rational_solution_exists(N, w, faithful=True):
    types = enumerate_local_types(N, w, faithful)
    rows, rhs = lefschetz_linear_system(N, w, types)
    return solve(rows, rhs) is not None


def solve_lefschetz(N, w, bound, faithful=True):
    """All nonnegative integer count vectors with total <= bound.

    Counts are ordered by type label.  The search is exhaustive over the
    bounded box and each candidate is checked exactly in Q(zeta_N).
    """
    if bound > 24:
        raise ValueError("fixed-point bound above 24 is outside the supported range")
    types = enumerate_local_types(N, w, faithful)
    rows, rhs = lefschetz_linear_system(N, w, types)
    out = []
    for counts in product(range(bound + 1), repeat=len(types)):
        if sum(counts) > bound:
            continue
        if all(sum(r[j] * counts[j] for j in range(len(types))) == b for r, b in zip(rows, rhs)):
            sol = LefschetzSolution(N, w, tuple(types), counts)
            if not sol.residual().is_zero():  # pragma: no cover - same equation in two forms
                raise AssertionError("linear system and cyclotomic identity disagree")
            out.append(sol)
    return out


# -- rank formula ----------------------------------------------------------------


@dataclass(frozen=True)
class GroupOrderProfile:
    order: int
    structure: dict

    @classmethod
    def of(cls, structure):
        structure = {int(k): int(v) for k, v in structure.items()}
        return cls(sum(structure.values()), structure)


def _profile(p):
    if isinstance(p, GroupOrderProfile):
        return p
    return GroupOrderProfile.of(p)


def mukai_rank(profile):
    """(1/|G|)(24 + sum_n m(n) f(n)) - 2 for the order structure m of G."""
    p = _profile(profile)
    total = Fraction(24)
    for n, m in p.structure.items():
        if n == 1:
            continue
        total += m * nikulin_fixed_count(n)
    return total / p.order - 2


def elementary_abelian_profile(n):
    return GroupOrderProfile.of({1: 1, 2: 2 ** n - 1} if n else {1: 1})


SUBGROUP_PROFILES = {
    "Q16": {1: 1, 2: 1, 4: 10, 8: 4},
    "C8": {1: 1, 2: 1, 4: 2, 8: 4},
    "C3": {1: 1, 3: 2},
    "C5": {1: 1, 5: 4},
    "C7": {1: 1, 7: 6},
    "C3^2": {1: 1, 3: 8},
    "C2^4:C5": {1: 1, 2: 15, 5: 64},
    "A4xA4": {1: 1, 2: 15, 3: 80, 6: 48},
}


# -- transcendental values ---------------------------------------------------------


def admissible_transcendental_values(rank_t):
    """{I >= 1 : phi(I) divides rank_t, I != 60}."""
    if rank_t < 1:
        raise ValueError("rank must be positive")
    # phi(I) >= sqrt(I/2), so phi(I) <= r forces I <= 2 r^2
    return {i for i in range(1, 2 * rank_t * rank_t + 3) if rank_t % euler_phi(i) == 0 and i != 60}


def realizable_transcendental_values():
    return {i for i in range(1, 2 * 20 * 20 + 3) if euler_phi(i) <= 20 and i != 60}


def max_I_under_rank_bound(r):
    vals = set()
    for s in range(1, r + 1):
        vals |= admissible_transcendental_values(s)
    return max(vals)


def rank_t_bound(invariant_rank):
    """rank T <= rank H^2(X,Z)^G - 1 (an ample class is invariant); also rank T >= 2."""
    return math.floor(Fraction(invariant_rank)) - 1


def topological_fixed_bound(rank_t):
    if rank_t < 2:
        raise ValueError("rank T is at least 2")
    return 2 * rank_t - 18


# -- Mukai table -------------------------------------------------------------------


@dataclass(frozen=True)
class TableEntry:
    name: str
    order: int
    case: str
    order_structure: dict = None
    nilpotent: bool = None


def load_mukai_table():
    text = resources.files("fermat_k3").joinpath("data/mukai_solvable.json").read_text()
    data = json.loads(text)
    entries = []
    for g in data["groups"]:
        s = g.get("order_structure")
        entries.append(TableEntry(g["name"], g["order"], g["case"],
                                  {int(k): v for k, v in s.items()} if s else None,
                                  g.get("nilpotent")))
    nilpotent_ii = [(g["name"], g["order"]) for g in data["nilpotent_in_case_II"]]
    return entries, nilpotent_ii


# -- bound audits ------------------------------------------------------------------


_RELATIONS = {
    "<": lambda a, b: a < b,
    "<=": lambda a, b: a <= b,
    "==": lambda a, b: a == b,
    ">=": lambda a, b: a >= b,
    ">": lambda a, b: a > b,
    "in": lambda a, b: a in b,
    "not in": lambda a, b: a not in b,
}


@dataclass
class AuditStep:
    label: str
    lhs: object
    relation: str
    rhs: object
    passed: bool
    note: str = ""

    def as_dict(self):
        def enc(v):
            if isinstance(v, Fraction):
                return str(v)
            if isinstance(v, (set, frozenset)):
                return sorted(v)
            return v

        return {"label": self.label, "lhs": enc(self.lhs), "relation": self.relation,
                "rhs": enc(self.rhs), "passed": self.passed, "note": self.note}


@dataclass
class AuditReport:
    name: str
    target: int
    steps: list = field(default_factory=list)
    assumptions: list = field(default_factory=list)
    final_bound: int = 0
    attained_by: tuple = ()
    notes: list = field(default_factory=list)

    def check(self, label, lhs, relation, rhs, note=""):
        ok = bool(_RELATIONS[relation](lhs, rhs))
        self.steps.append(AuditStep(label, lhs, relation, rhs, ok, note))
        return ok

    def assume(self, text):
        self.assumptions.append(text)

    @property
    def passed(self):
        return all(s.passed for s in self.steps) and self.final_bound == self.target

    def failed_steps(self):
        return [s for s in self.steps if not s.passed]

    def as_dict(self):
        return {
            "name": self.name,
            "final_bound": self.final_bound,
            "attained_by": list(self.attained_by),
            "passed": self.passed,
            "steps": [s.as_dict() for s in self.steps],
            "assumptions": list(self.assumptions),
            "notes": list(self.notes),
        }


def _i_cap_from_rank(invariant_rank):
    return max_I_under_rank_bound(rank_t_bound(invariant_rank))


def _large_transcendental_lemma(report, prefix):
    """A nontrivial symplectic g with phi(I) >= 12 is an involution, and G_N has order <= 2."""
    t = topological_fixed_bound(12)
    report.check(f"{prefix}: rank T >= 12 gives |X^g| >= 2 rank T - 18", t, ">=", 6)
    orders = orders_with_fixed_count_at_least(6, strict_orders=(3,))
    report.check(f"{prefix}: only involutions have >= 6 fixed points (> 6 for order 3)", orders, "==", [2])
    surviving = [n for n in range(0, 8) if mukai_rank(elementary_abelian_profile(n)) > 12]
    for n in range(0, 5):
        value = mukai_rank(elementary_abelian_profile(n))
        report.check(f"{prefix}: rank of C2^{n} invariants is 6 + 16/2^{n}", value, "==", 6 + Fraction(16, 2 ** n))
    report.check(f"{prefix}: 6 + 16/2^n > 12 only for n in {{0,1}}", surviving, "==", [0, 1])
    big = sorted(i for i in realizable_transcendental_values() if i >= 32)
    report.check(f"{prefix}: every realizable I >= 32 has phi(I) >= 12",
                 min(euler_phi(i) for i in big), ">=", 12)
    return 2


def _two_group_bounds(report, prefix, odd_factor=1):
    """Bounds for G_N whose Sylow 2-subgroup has order 2^n, n <= 6."""
    target = 2 ** 9 * odd_factor
    results = {}
    # an element of order 8
    r8 = mukai_rank(SUBGROUP_PROFILES["C8"])
    report.check(f"{prefix}: rank of C8 invariants", r8, "==", 4)
    cap8 = _i_cap_from_rank(r8)
    report.check(f"{prefix}: order-8 element gives I <= 6", cap8, "==", 6)
    # no element of order 8: order structure 1, 2k+1, 2m with k + m = 2^(n-1) - 1
    k_max = (35 - 1) // 2
    report.check(f"{prefix}: 2k+1 involutions inside F128 give k <= 17", 2 * k_max + 1, "<=", 35)
    for n, k_bound, rank_cap, i_cap in ((6, 17, 4, 6), (5, 15, 6, 12)):
        worst = None
        for k in range(0, min(k_bound, 2 ** (n - 1) - 1) + 1):
            m = 2 ** (n - 1) - 1 - k
            value = mukai_rank({1: 1, 2: 2 * k + 1, 4: 2 * m})
            report.check(f"{prefix}: n={n}, k={k} closed form", value, "==", 2 + Fraction(24 + 8 * k, 2 ** n))
            worst = value if worst is None else max(worst, value)
        report.check(f"{prefix}: n={n} invariant rank stays below {rank_cap + 1}", worst, "<", rank_cap + 1)
        cap = _i_cap_from_rank(rank_cap)
        report.check(f"{prefix}: n={n} gives I <= {i_cap}", cap, "==", i_cap)
        bound = 2 ** n * odd_factor * max(cap, cap8)
        report.check(f"{prefix}: n={n} bound |G_N| * I", bound, "<", target)
        results[n] = bound
    # n <= 4: |G| >= target forces I >= 32, hence phi(I) >= 12
    i_needed = target // (2 ** 4 * odd_factor)
    report.check(f"{prefix}: n<=4 needs I >= {i_needed}", i_needed, ">=", 32)
    gn_max = _large_transcendental_lemma(report, f"{prefix}: n<=4")
    results[4] = gn_max * 66
    report.check(f"{prefix}: n<=4 then |G| <= 2 * 66", gn_max * 66, "<", target)
    return results


def solvable_bound_audit():
    entries, _ = load_mukai_table()
    report = AuditReport("solvable", target=2 ** 9 * 3)
    target = report.target
    best = 0
    attained = ()

    # cases III, IV, V: a small cyclic or C3^2 subgroup caps I
    caps = {}
    for case, sub in (("III", "C3^2"), ("IV", "C5"), ("V", "C7")):
        r = mukai_rank(SUBGROUP_PROFILES[sub])
        report.check(f"case {case}: rank of {sub} invariants", r, "==", {"C3^2": 6, "C5": 6, "C7": 4}[sub])
        caps[case] = _i_cap_from_rank(r)
        report.check(f"case {case}: I cap", caps[case], "==", {"III": 12, "IV": 12, "V": 6}[case])
    exceptions = []
    for e in entries:
        if e.case in caps:
            bound = e.order * caps[e.case]
            if bound >= target:
                exceptions.append(e.name)
            else:
                report.check(f"case {e.case}: {e.name} has |G| <= {e.order}*{caps[e.case]}", bound, "<", target)
                best = max(best, bound)
    report.check("cases III-V: exceptional groups", sorted(exceptions), "==", sorted(["C2^4:D10", "A4xA4", "A4,4"]))

    r = mukai_rank(SUBGROUP_PROFILES["C2^4:C5"])
    report.check("C2^4:D10 contains C2^4:C5 with invariant rank", r, "==", 3)
    cap = _i_cap_from_rank(r)
    report.check("C2^4:D10: bound 160 * I", 160 * cap, "<", target)
    best = max(best, 160 * cap)

    r = mukai_rank(SUBGROUP_PROFILES["A4xA4"])
    report.check("A4xA4: invariant rank", r, "==", 3)
    cap = _i_cap_from_rank(r)
    report.check("A4xA4: I <= 6", cap, "==", 6)
    report.check("A4xA4: bound 144 * I", 144 * cap, "<", target)
    best = max(best, 144 * cap)

    allowed = admissible_transcendental_values(2)
    report.check("A4,4 contains A4xA4, so rank T = 2 and I is in", sorted(allowed), "==", [1, 2, 3, 4, 6])
    report.assume("an A4,4 group admits no transcendental value 3 or 6 (commutator and GL(4,F2) argument)")
    cap = max(allowed - {3, 6})
    report.check("A4,4: 288 * 4", 288 * cap, "<", target)
    report.check("A4,4: 288 * 6 would exceed the bound", 288 * 6, ">", target)
    best = max(best, 288 * cap)

    # case I: 2-groups
    report.assume("a symplectic 2-group embeds in F128 and equals it when of order 2^7")
    report.assume("a K3 group with symplectic part F128 or F384 has I in {1, 2, 4}")
    q16 = mukai_rank(SUBGROUP_PROFILES["Q16"])
    report.check("F128 contains Q16 with invariant rank", q16, "==", 3)
    report.check("so rank T = 2 and I is in", sorted(admissible_transcendental_values(rank_t_bound(q16))), "==",
                 [1, 2, 3, 4, 6])
    report.check("case I, n=7: 128 * 4", 128 * 4, "<", target)
    best = max(best, 128 * 4)
    sub = _two_group_bounds(report, "case I")
    best = max(best, max(sub.values()))

    # case II: order 2^n * 3
    report.check("case II, n=7: 384 * 4 attains the bound", 384 * 4, "==", target)
    for n, i_cap in ((6, 6), (5, 12)):
        report.check(f"case II, n={n}: {2 ** n * 3} * {i_cap}", 2 ** n * 3 * i_cap, "<", target)
        best = max(best, 2 ** n * 3 * i_cap)
    report.check("case II, n<=4: |G| >= 1536 needs I >= 32", target // 48, ">=", 32)
    _large_transcendental_lemma(report, "case II, n<=4")
    report.check("case II, n<=4: |G_N| <= 2 contradicts 3 | |G_N|", 2, "<", 3)

    report.final_bound = max(best, 384 * 4)
    report.attained_by = ("F384", 4)
    report.check("final solvable bound", report.final_bound, "==", target)
    return report


def nilpotent_bound_audit():
    entries, nilpotent_ii = load_mukai_table()
    report = AuditReport("nilpotent", target=2 ** 9)
    target = report.target
    best = 0

    report.assume("a symplectic 2-group embeds in F128 and equals it when of order 2^7")
    report.assume("a K3 group with symplectic part F128 has I in {1, 2, 4}")
    report.check("case I, n=7: 128 * 4 attains the bound", 128 * 4, "==", target)
    sub = _two_group_bounds(report, "case I")
    best = max(best, max(sub.values()))

    largest_ii = max(order for _, order in nilpotent_ii)
    report.check("case II nilpotent: |G_N| <= 12", largest_ii, "<=", 12)
    r = mukai_rank(SUBGROUP_PROFILES["C3"])
    report.check("case II nilpotent: rank of C3 invariants", r, "==", 10)
    rt = rank_t_bound(r)
    report.check("case II nilpotent: rank T <= 9", rt, "==", 9)
    cap = max_I_under_rank_bound(rt)
    report.check("case II nilpotent: phi(I) <= 8 gives I <= 30", cap, "==", 30)
    report.check("case II nilpotent: 12 * 30", largest_ii * cap, "<", target)
    best = max(best, largest_ii * cap)

    nilpotent_rest = [e for e in entries if e.case in ("III", "IV", "V") and e.nilpotent]
    names = sorted(e.name for e in nilpotent_rest)
    report.check("cases III-V nilpotent members", names, "==", sorted(["C3^2", "C5", "C7"]))
    largest = max(e.order for e in nilpotent_rest)
    report.check("cases III-V nilpotent: |G_N| <= 9", largest, "<=", 9)
    report.check("cases III-V nilpotent: 9 * 12", largest * 12, "<", target)
    best = max(best, largest * 12)

    report.final_bound = max(best, 128 * 4)
    report.attained_by = ("F128", 4)
    report.check("final nilpotent bound", report.final_bound, "==", target)
    return report


def fixed_point_bound_note():
    """Which power of an order-6 element bounds its fixed points."""
    return {
        "printed_power": 2,
        "printed_bound": 8,
        "symplectic_power": 3,
        "symplectic_power_order": 2,
        "bound_used": nikulin_fixed_count(2),
        "note": ("the square of an order-6 element with multiplier zeta_3 has order 3 and is not "
                 "symplectic; the symplectic power is the cube, an involution with 8 fixed points"),
    }
