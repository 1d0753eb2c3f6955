"""Integral lattices: Smith normal form, discriminant groups, the Niemeier
lattice with root system 24 A1 glued by the Golay code, fixed sublattices of
orbit partitions, overlattices of H + T and the polarization degree analysis.

Conventions.  The Niemeier lattice is negative definite: the roots r_i satisfy
(r_i, r_j) = -2 delta_ij.  A vector sum a_i r_i / 2 is recorded by its integer
"glue coordinates" a; it lies in N exactly when a mod 2 is a codeword, and its
norm is -(sum a_i^2) / 2.  All invariant-factor comparisons ignore signs.
"""

from __future__ import annotations

import random
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from math import gcd

from .fixedpoints import mukai_rank, elementary_abelian_profile
from .linalg import nullspace
from .mathieu import (
    INFINITY,
    M24_ORDER,
    N_POINTS,
    golay_construct,
    m24_construct,
    mask_of,
    orbit_partition,
    orbit_type_solver,
    point_stabilizer,
    sylow2,
    weight,
)

# -- integer matrices ---------------------------------------------------------


def _copy(m):
    return [list(map(int, r)) for r in m]


def smith_normal_form(m):
    """Invariant factors d1 | d2 | ... (min(rows, cols) of them, zeros last)."""
    a = _copy(m)
    if not a or not a[0]:
        return []
    rows, cols = len(a), len(a[0])
    diag = []
    t = 0
    while t < min(rows, cols):
        # pivot: smallest nonzero absolute value in the remaining block
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        a[t], a[i] = a[i], a[t]
        for r in a:
            r[t], r[j] = r[j], r[t]
        done = False
        while not done:
            done = True
            p = a[t][t]
            for i in range(t + 1, rows):
                q = a[i][t] // p
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                if a[i][t]:
                    done = False
            for j in range(t + 1, cols):
                q = a[t][j] // p
                if q:
                    for r in a:
                        r[j] -= q * r[t]
                if a[t][j]:
                    done = False
            if not done:
                # move a smaller remainder into the pivot position
                best = None
                for i in range(t, rows):
                    if a[i][t] and (best is None or abs(a[i][t]) < abs(a[best][t])):
                        best = i
                bj = None
                for j in range(t, cols):
                    if a[t][j] and (bj is None or abs(a[t][j]) < abs(a[t][bj])):
                        bj = j
                if abs(a[best][t]) <= abs(a[t][bj]):
                    a[t], a[best] = a[best], a[t]
                else:
                    for r in a:
                        r[t], r[bj] = r[bj], r[t]
                continue
            # pivot must divide the rest of the block
            bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols) if a[i][j] % p), None)
            if bad is not None:
                a[t] = [x + y for x, y in zip(a[t], a[bad[0]])]
                done = False
        diag.append(abs(a[t][t]))
        t += 1
    diag += [0] * (min(rows, cols) - len(diag))
    return diag


def determinant(m):
    """Exact integer determinant (fraction-free elimination)."""
    a = [list(map(Fraction, r)) for r in m]
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c]), None)
        if p is None:
            return 0
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det *= a[c][c]
        for i in range(c + 1, n):
            f = a[i][c] / a[c][c]
            if f:
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return int(det)


def hermite_basis(rows):
    """A basis (row echelon, positive pivots) of the Z-span of integer rows."""
    a = [list(map(int, r)) for r in rows if any(r)]
    if not a:
        return []
    cols = len(a[0])
    out = []
    for c in range(cols):
        live = [r for r in a if r[c]]
        rest = [r for r in a if not r[c]]
        while len(live) > 1:
            live.sort(key=lambda r: abs(r[c]))
            p = live[0]
            nxt = [p]
            for r in live[1:]:
                q = r[c] // p[c]
                r = [x - q * y for x, y in zip(r, p)]
                (nxt if r[c] else rest).append(r)
            live = nxt
        if live:
            p = live[0]
            if p[c] < 0:
                p = [-x for x in p]
            for k, r in enumerate(out):
                q = r[c] // p[c]
                out[k] = [x - q * y for x, y in zip(r, p)]
            out.append(p)
        a = [r for r in rest if any(r)]
    return out


def gram_of(basis, inner):
    return [[inner(u, v) for v in basis] for u in basis]


# -- lattices --------------------------------------------------------------------


@dataclass
class Lattice:
    gram: list
    basis_labels: list = None
    sign: str = "indefinite"

    def __post_init__(self):
        self.gram = _copy(self.gram)
        n = len(self.gram)
        if n == 0 or any(len(r) != n for r in self.gram):
            raise ValueError("Gram matrix must be square and nonempty")
        if any(self.gram[i][j] != self.gram[j][i] for i in range(n) for j in range(n)):
            raise ValueError("Gram matrix must be symmetric")
        if self.basis_labels is None:
            self.basis_labels = [f"e{i + 1}" for i in range(n)]
        if self.sign not in ("positive", "negative", "indefinite"):
            raise ValueError(f"unknown sign convention {self.sign}")
        if self.sign != "indefinite":
            s = 1 if self.sign == "positive" else -1
            if any(s * self.gram[i][i] <= 0 for i in range(n)):
                raise ValueError(f"diagonal entries contradict the {self.sign} definite flag")
            if n <= 5:
                for k in range(1, n + 1):
                    minor = determinant([r[:k] for r in self.gram[:k]])
                    if (s ** k) * minor <= 0:
                        raise ValueError(f"leading minor {k} contradicts the {self.sign} definite flag")

    @property
    def rank(self):
        return len(self.gram)

    def det(self):
        return determinant(self.gram)

    def is_even(self):
        return all(self.gram[i][i] % 2 == 0 for i in range(self.rank))

    def absolute_gram(self):
        return [[abs(x) for x in r] for r in self.gram]

    def norm(self, x):
        return sum(x[i] * self.gram[i][j] * x[j] for i in range(self.rank) for j in range(self.rank))

    def to_text(self):
        lines = [f"rank {self.rank} {self.sign}"]
        lines += [" ".join(str(x) for x in r) for r in self.gram]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text):
        lines = [ln for ln in text.strip().splitlines() if ln.strip()]
        head = lines[0].split()
        if len(head) != 3 or head[0] != "rank":
            raise ValueError("header must read 'rank <n> <sign>'")
        n = int(head[1])
        rows = [list(map(int, ln.split())) for ln in lines[1:]]
        if len(rows) != n:
            raise ValueError(f"expected {n} rows, found {len(rows)}")
        return cls(rows, sign=head[2])


@dataclass(frozen=True)
class DiscriminantGroup:
    factors: tuple

    @property
    def order(self):
        out = 1
        for f in self.factors:
            out *= f
        return out


def discriminant_group(lattice):
    gram = lattice.gram if isinstance(lattice, Lattice) else lattice
    snf = smith_normal_form(gram)
    if 0 in snf:
        raise ValueError("degenerate Gram matrix")
    return DiscriminantGroup(tuple(d for d in snf if d > 1))


# -- the Niemeier lattice with root system 24 A1 --------------------------------------


@dataclass
class NiemeierA1:
    lattice: Lattice
    basis_glue: list  # glue coordinates of each basis vector
    code: object
    pivots: list


def glue_inner(a, b):
    s = sum(x * y for x, y in zip(a, b))
    if s % 2:
        raise ValueError("glue vectors are not in the lattice")
    return -s // 2


def niemeier_a1_24(code=None):
    """N(24 A1) with a basis of 12 glue vectors and 12 roots."""
    code = code or golay_construct()
    rows = list(code.generator_rows)
    pivots = [r & -r for r in rows]
    if len(set(pivots)) != 12 or any(p & r for p in pivots for r in rows if p != (r & -r)):
        raise ValueError("generator rows are not in reduced echelon form")
    pivot_idx = [p.bit_length() - 1 for p in pivots]
    basis = []
    labels = []
    for r in rows:
        basis.append([r >> i & 1 for i in range(N_POINTS)])
        labels.append("glue " + "".join(str(i + 1) + "," for i in range(N_POINTS) if r >> i & 1).rstrip(","))
    for i in range(N_POINTS):
        if i not in pivot_idx:
            basis.append([2 if k == i else 0 for k in range(N_POINTS)])
            labels.append(f"r{i + 1}")
    gram = gram_of(basis, glue_inner)
    lat = Lattice(gram, labels, "indefinite")
    if not lat.is_even():
        raise ValueError("glue vectors have odd norm")
    if abs(lat.det()) != 1:
        raise ValueError("constructed lattice is not unimodular")
    lat.sign = "negative"
    return NiemeierA1(lat, basis, code, pivot_idx)


def root_lattice_index(n):
    """[N : R] computed from determinants: |det R| = 2^24, |det N| = 1."""
    return 2 ** 24 // abs(n.lattice.det())


def in_niemeier(a, code):
    return mask_of(i for i, x in enumerate(a) if x % 2) in code


def count_short_vectors(code, norm=-2):
    """Vectors of N with the given (negative) norm, by enumerating glue patterns.

    Norm -2 means sum a_i^2 = 4: either a single entry +-2 or four entries +-1
    supported on a codeword of weight 4.
    """
    if norm != -2:
        raise ValueError("only roots are enumerated")
    count = 0
    for i in range(N_POINTS):
        for s in (2, -2):
            a = [0] * N_POINTS
            a[i] = s
            count += in_niemeier(a, code)
    for quad in combinations(range(N_POINTS), 4):
        if mask_of(quad) in code:
            count += 16
    return count


# -- orbit partitions and fixed sublattices -----------------------------------------


@dataclass
class GluePartitionProblem:
    blocks: list
    code: object

    def __post_init__(self):
        self.blocks = [sorted(b) for b in self.blocks]
        seen = sorted(p for b in self.blocks for p in b)
        if seen != list(range(N_POINTS)):
            raise ValueError("blocks must partition the 24 points")

    @property
    def sizes(self):
        return [len(b) for b in self.blocks]

    def block_masks(self):
        return [mask_of(b) for b in self.blocks]


def invariant_codewords(problem):
    masks = problem.block_masks()
    out = []
    for w in problem.code.codewords:
        if all(w & m in (0, m) for m in masks):
            out.append(w)
    return sorted(out, key=lambda w: (weight(w), w))


def _block_vector(problem, w):
    masks = problem.block_masks()
    return [1 if w & m else 0 for m in masks]


def invariant_sublattice(problem):
    """Vectors of N constant on every block.

    In block coordinates c (a_i = c_B for i in B) the lattice is spanned by
    2 e_B (orbit sums of roots) and the block patterns of invariant codewords.
    """
    k = len(problem.blocks)
    gens = [[2 if j == i else 0 for j in range(k)] for i in range(k)]
    gens += [_block_vector(problem, w) for w in invariant_codewords(problem)]
    basis = hermite_basis(gens)
    sizes = problem.sizes

    def inner(u, v):
        s = sum(sz * x * y for sz, x, y in zip(sizes, u, v))
        return -s // 2

    gram = gram_of(basis, inner)
    labels = ["c=(" + ",".join(map(str, b)) + ")" for b in basis]
    return Lattice(gram, labels, "negative"), basis


def orbit_basis_gram(problem):
    """Gram in the basis s1, s2, s3, (s1+s2+s3+s4)/2, s5/2 for a five-block partition."""
    if len(problem.blocks) != 5:
        raise ValueError("five blocks expected")
    sizes = problem.sizes
    basis = [[2, 0, 0, 0, 0], [0, 2, 0, 0, 0], [0, 0, 2, 0, 0], [1, 1, 1, 1, 0], [0, 0, 0, 0, 1]]

    def inner(u, v):
        return -sum(sz * x * y for sz, x, y in zip(sizes, u, v)) // 2

    return gram_of(basis, inner), basis


def brute_force_fixed_vectors(problem, height=3):
    """Block-constant vectors of N with |c_B| <= height, straight from the membership test."""
    out = []
    for c in product(range(-height, height + 1), repeat=len(problem.blocks)):
        a = [0] * N_POINTS
        for val, b in zip(c, problem.blocks):
            for p in b:
                a[p] = val
        if in_niemeier(a, problem.code):
            out.append(c)
    return out


def in_span(basis, v):
    """Integer coordinates of v in an echelon basis, or None."""
    v = list(v)
    coords = []
    for b in basis:
        c = next(j for j, x in enumerate(b) if x)
        if v[c] % b[c]:
            return None
        q = v[c] // b[c]
        coords.append(q)
        v = [x - q * y for x, y in zip(v, b)]
    return coords if not any(v) else None


def concrete_partition(seed=0, code=None):
    """Orbits of a Sylow 2-subgroup of M23 on the 24 points, blocks sorted by size then point."""
    code = code or golay_construct()
    m24 = m24_construct(code)
    p = sylow2(point_stabilizer(m24, INFINITY), seed)
    sizes, blocks = orbit_partition(p)
    blocks.sort(key=lambda b: (len(b), b[0]))
    return GluePartitionProblem(blocks, code), p


# -- Niemeier selection -------------------------------------------------------------


def two_part(n):
    k = 0
    while n % 2 == 0:
        n //= 2
        k += 1
    return k


NIEMEIER_CANDIDATES = [
    # name, |S(N)|, subgroup forced by fixing a root, its order
    ("N(A1^24)", M24_ORDER, "M24", M24_ORDER),
    ("N(A2^12)", 2 * 95040, "M12", 95040),
    ("N(A3^8)", 2 * 8 * 168, "C2.L3(2)", 2 * 168),
    ("other, inside 2.S6", 2 * 720, "2.S6", 2 * 720),
    ("other, inside 3.S6", 3 * 720, "3.S6", 3 * 720),
]


@dataclass
class SelectionStep:
    candidate: str
    label: str
    value: int
    passed: bool

    def as_dict(self):
        return {"candidate": self.candidate, "label": self.label, "value": self.value, "passed": self.passed}


def niemeier_selection_audit(k_exponent=7):
    steps = []
    survivors = []
    for name, s_order, sub, sub_order in NIEMEIER_CANDIDATES:
        e = two_part(s_order)
        first = e >= k_exponent
        steps.append(SelectionStep(name, "2-part exponent of |S(N)|", e, first))
        if not first:
            continue
        e2 = two_part(sub_order)
        second = e2 >= k_exponent
        steps.append(SelectionStep(name, f"2-part exponent of |{sub}|", e2, second))
        if second:
            survivors.append(name)
    return {"survivors": survivors, "verdict": survivors[0] if len(survivors) == 1 else None,
            "steps": [s.as_dict() for s in steps]}


# -- norms and invariant forms ---------------------------------------------------------


def norm_divisibility_check(lattice, k, samples=200, seed=0):
    """True iff every vector has norm divisible by k."""
    g = lattice.gram if isinstance(lattice, Lattice) else _copy(lattice)
    n = len(g)
    off_mod = k // 2 if k % 2 == 0 else k
    exact = all(g[i][i] % k == 0 for i in range(n)) and all(
        g[i][j] % off_mod == 0 for i in range(n) for j in range(n) if i != j)
    rng = random.Random(seed)
    for _ in range(samples):
        x = [rng.randint(-5, 5) for _ in range(n)]
        value = sum(x[i] * g[i][j] * x[j] for i in range(n) for j in range(n))
        if exact and value % k:  # pragma: no cover - the criterion is exact
            raise AssertionError("sampling contradicts the divisibility criterion")
    return exact


ROTATION = [[0, -1], [1, 0]]  # columns: e1 -> e2, e2 -> -e1


def invariant_gram_solver(action):
    """Basis of symmetric G with action^T G action = G."""
    n = len(action)
    slots = [(i, j) for i in range(n) for j in range(i, n)]

    def sym(vals):
        G = [[Fraction(0)] * n for _ in range(n)]
        for (i, j), v in zip(slots, vals):
            G[i][j] = G[j][i] = v
        return G

    rows = []
    for i in range(n):
        for j in range(i, n):
            row = []
            for s in range(len(slots)):
                unit = [Fraction(int(t == s)) for t in range(len(slots))]
                G = sym(unit)
                v = sum(action[a][i] * G[a][b] * action[b][j] for a in range(n) for b in range(n)) - G[i][j]
                row.append(Fraction(v))
            rows.append(row)
    basis = nullspace(rows, len(slots))
    out = []
    for v in basis:
        den = 1
        for x in v:
            den = den * x.denominator // gcd(den, x.denominator)
        ints = [int(x * den) for x in v]
        g = 0
        for x in ints:
            g = gcd(g, x)
        out.append([[int(x) for x in r] for r in sym([Fraction(x // g) for x in ints])])
    return out


# -- overlattices of Z H + T ------------------------------------------------------------


@dataclass
class Overlattice:
    index: int
    glue: tuple  # generator of the glue group as fractions of (H, v1, v2)
    basis: list
    gram: list


def overlattice_enumeration(n, m):
    """Even overlattices of Z H + T with Gram diag(4n, 4m, 4m), H and T primitive, stable
    under H fixed and v1 -> v2 -> -v1.

    Primitivity of H and T makes the glue group embed into both projections,
    so it is cyclic (a subgroup of Z/4n); every cyclic candidate is tested.
    """
    dh, dt = 4 * n, 4 * m
    norms = (dh, dt, dt)

    def qform(x, y):
        return sum(Fraction(a * b, d * d) * nn for a, b, d, nn in zip(x, y, (dh, dt, dt), norms))

    def multiples(x):
        out = set()
        y = (0, 0, 0)
        while True:
            y = ((y[0] + x[0]) % dh, (y[1] + x[1]) % dt, (y[2] + x[2]) % dt)
            out.add(y)
            if y == (0, 0, 0):
                return out

    found = {}
    for x in product(range(dh), range(dt), range(dt)):
        q = qform(x, x)
        if q.denominator != 1 or q % 2:
            continue
        group = multiples(x)
        if any(y[0] == 0 and (y[1] or y[2]) for y in group):
            continue  # T would not be primitive
        if any(y[0] and not (y[1] or y[2]) for y in group):
            continue  # H would not be primitive
        gx = (x[0], (-x[2]) % dt, x[1])
        if gx not in group:
            continue
        key = frozenset(group)
        if key not in found:
            found[key] = x
    out = []
    for key, x in sorted(found.items(), key=lambda kv: (len(kv[0]), kv[1])):
        glue = (Fraction(x[0], dh), Fraction(x[1], dt), Fraction(x[2], dt))
        den = 1
        for f in glue:
            den = den * f.denominator // gcd(den, f.denominator)
        gens = [[den, 0, 0], [0, den, 0], [0, 0, den], [int(f * den) for f in glue]]
        basis = [[Fraction(a, den) for a in b] for b in hermite_basis(gens)]
        gram = [[int(sum(u[i] * v[i] * norms[i] for i in range(3))) for v in basis] for u in basis]
        out.append(Overlattice(len(key), glue, basis, gram))
    return out


# -- the polarization degree ----------------------------------------------------------


@dataclass
class DegreeCase:
    index: int
    m: int
    n: int
    gram: list
    snf: list
    accepted: bool
    reason: str

    def as_dict(self):
        return {"l": self.index, "m": self.m, "n": self.n, "gram": self.gram, "snf": self.snf,
                "accepted": self.accepted, "reason": self.reason}


@dataclass
class DegreeAnalysis:
    target: tuple
    cases: list = field(default_factory=list)
    result: int = None

    @property
    def passed(self):
        return self.result == 4 and sum(c.accepted for c in self.cases) == 1

    def as_dict(self):
        return {"target": list(self.target), "result": self.result, "passed": self.passed,
                "cases": [c.as_dict() for c in self.cases]}


def _positive_solutions(product_value):
    return [(m, product_value // (m * m)) for m in range(1, product_value + 1)
            if product_value % (m * m) == 0]


def h_squared_case_analysis(target=(4, 8, 8), det_target=2 ** 8, order=None):
    """(H^2) = 4n from det(ZH + T) = l^2 det L^K with T = diag(4m, 4m)."""
    report = DegreeAnalysis(tuple(target))
    indices = list(order) if order is not None else [1, 2]
    for index in indices:
        # 4n * 16 m^2 = l^2 * det_target
        value = index * index * det_target // 64
        for m, n in _positive_solutions(value):
            if index == 2:
                if (n + 2 * m) % 4:
                    report.cases.append(DegreeCase(index, m, n, [], [], False, "n + 2m is not divisible by 4"))
                    continue
                gram = [[n + 2 * m, 2 * m, 2 * m], [2 * m, 4 * m, 0], [2 * m, 0, 4 * m]]
            elif index == 1:
                gram = [[4 * n, 0, 0], [0, 4 * m, 0], [0, 0, 4 * m]]
            else:
                raise ValueError("the glue index is 1 or 2")
            snf = smith_normal_form(gram)
            ok = tuple(d for d in snf if d > 1) == tuple(target)
            report.cases.append(DegreeCase(index, m, n, gram, snf, ok,
                                           "invariant factors match" if ok else "invariant factors differ"))
    accepted = [c for c in report.cases if c.accepted]
    if len(accepted) == 1:
        report.result = 4 * accepted[0].n
    return report


def rank_relation_check(rank_lk):
    """rank N^K = rank L^K + 2."""
    if rank_lk < 1:
        raise ValueError("rank must be positive")
    out = rank_lk + 2
    if out > 24:
        raise ValueError("rank N^K cannot exceed 24")
    # the largest invariant rank of a nontrivial symplectic group is that of C2
    if rank_lk > mukai_rank(elementary_abelian_profile(1)):
        warnings.warn(f"invariant rank {rank_lk} exceeds that of any nontrivial symplectic group",
                      RuntimeWarning, stacklevel=2)
    return out


# -- the fixed lattice of the Sylow 2-subgroup of M23 --------------------------------------


REFERENCE_ORBIT_GRAM = [
    [2, 0, 0, 1, 0],
    [0, 2, 0, 1, 0],
    [0, 0, 4, 2, 0],
    [1, 1, 2, 4, 0],
    [0, 0, 0, 0, 8],
]


def fixed_lattice_audit(seed=0, code=None):
    code = code or golay_construct()
    problem, p = concrete_partition(seed, code)
    abstract = orbit_type_solver(24, 5)
    words = invariant_codewords(problem)
    small = mask_of(x for b in problem.blocks[:4] for x in b)
    lat, basis = invariant_sublattice(problem)
    gram, _ = orbit_basis_gram(problem)
    return {
        "sylow_order": p.order(),
        "sizes": problem.sizes,
        "abstract_types": abstract,
        "agree": abstract == [sorted(problem.sizes)],
        "invariant_codeword_weights": [weight(w) for w in words],
        "octad_is_small_blocks": small in words and weight(small) == 8,
        "complement_is_large_block": (((1 << N_POINTS) - 1) ^ small) in words,
        "rank": lat.rank,
        "snf": smith_normal_form(lat.gram),
        "discriminant": list(discriminant_group(lat).factors),
        "orbit_gram_abs": [[abs(x) for x in r] for r in gram],
        "orbit_gram_matches": [[abs(x) for x in r] for r in gram] == REFERENCE_ORBIT_GRAM,
        "reference_snf": smith_normal_form(REFERENCE_ORBIT_GRAM),
        "rank_relation": rank_relation_check(3) == lat.rank,
        "problem": problem,
        "lattice": lat,
    }
