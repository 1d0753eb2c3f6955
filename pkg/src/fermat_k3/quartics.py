"""Q16 representations and the projective geometry of Q16-invariant quadrics and quartics.

Polynomials are homogeneous forms in x1..x4 with cyclotomic coefficients.  A
matrix g acts on forms by substitution, ``(g F)(x) = F(g x)``, which is a right
action: ``apply(g, apply(h, F)) == apply(h * g, F)``.

The group Q_{4m} is presented as <a, b | a^{2m} = 1, a^m = b^2, b^-1 a b = a^-1>
and its elements are enumerated as a^n b^j with 0 <= n < 2m and j in {0, 1}.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement, product

from .cyclotomic import CycNumber, UnsupportedRadicand, cyc, zeta
from .fixedpoints import nikulin_fixed_count
from .linalg import nullspace, rank
from .matgroups import CycMatrix, ProjMatrix, alpha_multiplier, as_abstract, iso_search, pq_group

ZERO = cyc(0)
ONE = cyc(1)
Z8 = zeta(8)
Z4 = zeta(4)


def _c(x):
    return x if isinstance(x, CycNumber) else cyc(x)


# -- forms ---------------------------------------------------------------------


class Poly4:
    """Sparse polynomial in x1..x4: exponent 4-tuple -> nonzero CycNumber."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        out = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != 4 or any(k < 0 for k in e):
                raise ValueError(f"bad exponent {e}")
            c = _c(c)
            if c:
                out[e] = c
        self.terms = out

    @classmethod
    def monomial(cls, exps, coeff=1):
        return cls({tuple(exps): coeff})

    @classmethod
    def var(cls, i):
        e = [0, 0, 0, 0]
        e[i] = 1
        return cls({tuple(e): 1})

    @property
    def degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self):
        return len({sum(e) for e in self.terms}) <= 1

    def is_zero(self):
        return not self.terms

    def variables(self):
        return sorted({i for e in self.terms for i in range(4) if e[i]})

    def coeff(self, exps):
        return self.terms.get(tuple(exps), ZERO)

    def __add__(self, other):
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, ZERO) + c
        return Poly4(out)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s):
        s = _c(s)
        return Poly4({e: s * c for e, c in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Poly4):
            return self.scale(other)
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, ZERO) + c1 * c2
        return Poly4(out)

    __rmul__ = scale

    def __pow__(self, k):
        out = Poly4({(0, 0, 0, 0): 1})
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        return isinstance(other, Poly4) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def evaluate(self, point):
        pt = [_c(x) for x in point]
        total = ZERO
        for e, c in self.terms.items():
            t = c
            for x, k in zip(pt, e):
                if k:
                    t = t * x ** k
            total = total + t
        return total

    def partial(self, i):
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                d = list(e)
                d[i] -= 1
                out[tuple(d)] = c * e[i]
        return Poly4(out)

    def restrict(self, keep):
        """Set every variable outside ``keep`` to zero."""
        return Poly4({e: c for e, c in self.terms.items() if all(e[i] == 0 for i in range(4) if i not in keep)})

    def proportional_to(self, other):
        """The scalar s with self == s * other, or None."""
        if other.is_zero():
            return ONE if self.is_zero() else None
        e0 = next(iter(other.terms))
        s = self.coeff(e0) / other.terms[e0]
        return s if self == other.scale(s) else None

    def __repr__(self):
        return f"Poly4({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            mono = "*".join(f"x{i + 1}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k)
            if not mono:
                parts.append(str(c))
            elif c.is_one():
                parts.append(mono)
            elif (-c).is_one():
                parts.append("-" + mono)
            else:
                parts.append(f"({c})*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def poly(terms):
    """Build a form from {exponent tuple: coefficient}."""
    return Poly4(terms)


FERMAT = poly({(4, 0, 0, 0): 1, (0, 4, 0, 0): 1, (0, 0, 4, 0): 1, (0, 0, 0, 4): 1})
CANONICAL_QUARTIC = poly({(4, 0, 0, 0): 1, (0, 4, 0, 0): 1, (0, 0, 3, 1): 1, (0, 0, 1, 3): 1})


def monomials(degree, nvars=4):
    """Exponent tuples of the given degree, lexicographically decreasing."""
    out = []
    for combo in combinations_with_replacement(range(nvars), degree):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return sorted(out, reverse=True)


def _rep_matrix(g):
    return g.rep if isinstance(g, ProjMatrix) else g


def apply_matrix(g, F):
    """F composed with x -> g x."""
    m = _rep_matrix(g)
    linear = [Poly4({tuple(1 if k == j else 0 for k in range(4)): m[i, j] for j in range(4)}) for i in range(4)]
    powers = {}

    def pw(i, k):
        if (i, k) not in powers:
            powers[(i, k)] = linear[i] ** k
        return powers[(i, k)]

    out = Poly4()
    for e, c in F.terms.items():
        t = Poly4({(0, 0, 0, 0): c})
        for i, k in enumerate(e):
            if k:
                t = t * pw(i, k)
        out = out + t
    return out


# -- points --------------------------------------------------------------------


class NotOnSurface(ValueError):
    pass


@dataclass(frozen=True)
class PointP3:
    coords: tuple

    def __post_init__(self):
        coords = tuple(_c(x) for x in self.coords)
        if len(coords) != 4:
            raise ValueError("a point of P^3 has four coordinates")
        k = next((i for i, x in enumerate(coords) if x), None)
        if k is None:
            raise ValueError("all coordinates vanish")
        inv = coords[k].inverse()
        object.__setattr__(self, "coords", tuple(x * inv for x in coords))

    @classmethod
    def coordinate(cls, i):
        return cls(tuple(1 if j == i else 0 for j in range(4)))

    def __str__(self):
        return "[" + " : ".join(str(x) for x in self.coords) + "]"


COORDINATE_POINTS = tuple(PointP3.coordinate(i) for i in range(4))


def _coords(P):
    return P.coords if isinstance(P, PointP3) else tuple(_c(x) for x in P)


def singular_at(F, P):
    """True iff every partial derivative of F vanishes at P (which must lie on F = 0)."""
    pt = _coords(P)
    if F.evaluate(pt):
        raise NotOnSurface(f"{F} does not vanish at {list(map(str, pt))}")
    return all(F.partial(i).evaluate(pt).is_zero() for i in range(4))


def common_singular_point(forms, candidates=COORDINATE_POINTS):
    """A candidate point at which every form of a linear family is singular."""
    for P in candidates:
        if all(not f.evaluate(P.coords) and singular_at(f, P) for f in forms):
            return P
    return None


def quadric_gram(F):
    """Symmetric matrix of a quadratic form."""
    if F.degree != 2 or not F.is_homogeneous():
        raise ValueError("not a quadratic form")
    rows = [[ZERO] * 4 for _ in range(4)]
    for e, c in F.terms.items():
        idx = [i for i in range(4) for _ in range(e[i])]
        i, j = idx
        if i == j:
            rows[i][i] = c
        else:
            rows[i][j] = rows[j][i] = c / 2
    return CycMatrix(rows)


# -- binary forms ----------------------------------------------------------------


def _binary_coeffs(f, i, j):
    """Coefficients of x_i^(d-k) x_j^k for k = 0..d."""
    d = f.degree
    out = [ZERO] * (d + 1)
    for e, c in f.terms.items():
        if any(e[k] for k in range(4) if k not in (i, j)):
            raise ValueError(f"{f} involves variables other than x{i + 1}, x{j + 1}")
        out[e[j]] = c
    return out


def binary_resultant(f, g, variables=None):
    """Sylvester resultant of two binary forms; zero iff they share a projective root."""
    if f.is_zero() or g.is_zero():
        raise ValueError("resultant of a zero form")
    if not (f.is_homogeneous() and g.is_homogeneous()):
        raise ValueError("binary forms must be homogeneous")
    if variables is None:
        used = sorted(set(f.variables()) | set(g.variables()))
        if len(used) != 2:
            raise ValueError("give the two variables explicitly")
        variables = used
    i, j = variables
    a, b = _binary_coeffs(f, i, j), _binary_coeffs(g, i, j)
    m, n = len(a) - 1, len(b) - 1
    size = m + n
    if size == 0:
        return ONE
    rows = []
    for r in range(n):
        rows.append([ZERO] * r + a + [ZERO] * (size - m - 1 - r))
    for r in range(m):
        rows.append([ZERO] * r + b + [ZERO] * (size - n - 1 - r))
    return CycMatrix(rows).det()


class InfiniteFixedLocus(ValueError):
    pass


class UnsupportedRestriction(ValueError):
    pass


def _divide_linear(coeffs, root):
    """Synthetic division of sum coeffs[k] r^(d-k) by (r - root); returns (quotient, remainder)."""
    out = [coeffs[0]]
    for c in coeffs[1:]:
        out.append(c + out[-1] * root)
    return out[:-1], out[-1]


def _roots_of_unity_candidates(coeffs, degree):
    conductor = 1
    for c in coeffs:
        if c:
            d = c.canonical_key()[0]
            conductor = conductor * d // _gcd(conductor, d)
    bound = 2 * degree * conductor
    seen = set()
    for n in range(1, bound + 1):
        if bound % n:
            continue
        for k in range(n):
            if _gcd(k, n) == 1:
                z = zeta(n, k)
                if z not in seen:
                    seen.add(z)
                    yield z


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def binary_roots(f, i, j):
    """Distinct projective zeros of a binary form in x_i, x_j, as points of P^3.

    Supported when every zero has a root-of-unity coordinate ratio (or a zero coordinate).
    """
    coeffs = _binary_coeffs(f, i, j)
    pts = []

    def point(u, v):
        c = [0, 0, 0, 0]
        c[i], c[j] = u, v
        return PointP3(tuple(c))

    if not coeffs[0]:
        pts.append(point(1, 0))
    if not coeffs[-1]:
        pts.append(point(0, 1))
    while coeffs and not coeffs[0]:
        coeffs = coeffs[1:]
    while coeffs and not coeffs[-1]:
        coeffs = coeffs[:-1]
    degree = len(coeffs) - 1
    found = []
    if degree > 0:
        for z in _roots_of_unity_candidates(coeffs, degree):
            while len(coeffs) > 1:
                q, r = _divide_linear(coeffs, z)
                if r:
                    break
                coeffs = q
                if z not in found:
                    found.append(z)
            if len(coeffs) == 1:
                break
        if len(coeffs) > 1:
            raise UnsupportedRestriction(f"{f} has zeros without root-of-unity ratios")
    # r = x_i / x_j, so the point is [r : 1]
    pts.extend(point(z, 1) for z in found)
    return pts


def diagonal_fixed_points(g, F):
    """Fixed points of a diagonal projective transformation lying on F = 0."""
    m = _rep_matrix(g)
    if not m.is_diagonal():
        raise ValueError("diagonal_fixed_points needs a diagonal matrix")
    classes = {}
    for i in range(4):
        classes.setdefault(m[i, i], []).append(i)
    out = []
    for idx in classes.values():
        if len(idx) == 1:
            P = PointP3.coordinate(idx[0])
            if F.evaluate(P.coords).is_zero():
                out.append(P)
        elif len(idx) == 2:
            r = F.restrict(idx)
            if r.is_zero():
                raise InfiniteFixedLocus(f"the line x{idx} lies on the surface")
            out.extend(binary_roots(r, *idx))
        else:
            raise InfiniteFixedLocus(f"eigenspace of dimension {len(idx)} meets the surface in a curve")
    return sorted(out, key=lambda p: [x.canonical_key() for x in p.coords])


# -- representations of Q_{4m} -------------------------------------------------------


@dataclass(frozen=True)
class LinearCharacter:
    a: int
    b: int

    def values(self):
        return (cyc(self.a), cyc(self.b))


CHARACTERS = tuple(LinearCharacter(x, y) for x in (1, -1) for y in (1, -1))


@dataclass
class LinearRep:
    name: str
    a: CycMatrix
    b: CycMatrix
    m: int = 4

    @property
    def dimension(self):
        return self.a.size

    def relation_residuals(self):
        a, b, m = self.a, self.b, self.m
        ident = CycMatrix.identity(self.dimension)
        return (a ** (2 * m) - ident, a ** m - b * b, b.inverse() * a * b - a.inverse())

    def relations_hold(self):
        return all(r.is_zero() for r in self.relation_residuals())

    def projective_relations_hold(self):
        a, b, m = ProjMatrix(self.a), ProjMatrix(self.b), self.m
        return (a ** (2 * m)).is_identity() and a ** m == b * b and b.inverse() * a * b == a.inverse()

    def elements(self):
        out = []
        for j in (0, 1):
            for n in range(2 * self.m):
                out.append(self.a ** n * self.b ** j)
        return out

    def character(self):
        return [g.trace() for g in self.elements()]


def direct_sum(*reps, name=""):
    def block(ms):
        n = sum(x.size for x in ms)
        rows = [[ZERO] * n for _ in range(n)]
        off = 0
        for x in ms:
            for i in range(x.size):
                for j in range(x.size):
                    rows[off + i][off + j] = x[i, j]
            off += x.size
        return CycMatrix(rows)

    return LinearRep(name or "+".join(r.name for r in reps), block([r.a for r in reps]),
                     block([r.b for r in reps]), reps[0].m)


def q16_irreps():
    """The seven complex irreducible representations of Q16."""
    one = [LinearRep(f"rho1,{k + 1}", CycMatrix([[x]]), CycMatrix([[y]]))
           for k, (x, y) in enumerate(((1, 1), (1, -1), (-1, 1), (-1, -1)))]
    swap_i = CycMatrix([[0, Z4], [Z4, 0]])
    two = [
        LinearRep("rho2,1", CycMatrix.diag(Z8, Z8 ** 7), swap_i),
        LinearRep("rho2,2", CycMatrix.diag(Z8 ** 3, Z8 ** 5), swap_i),
        LinearRep("rho2,3", CycMatrix.diag(Z4, Z4 ** 3), CycMatrix([[0, 1], [1, 0]])),
    ]
    return one + two


def irreps_by_name():
    return {r.name: r for r in q16_irreps()}


def character_inner_product(chi, psi):
    total = ZERO
    for x, y in zip(chi, psi):
        total = total + x * y.conjugate()
    return total / len(chi)


@dataclass
class LiftResult:
    rep: LinearRep
    beta: CycNumber
    alpha: CycNumber


def _scalar_of(m):
    """s with m == s * I, or None."""
    s = m[0, 0]
    return s if m == CycMatrix.identity(m.size).scale(s) else None


def lift_projective_rep(A, B, m):
    """Rescale A, B so that the Q_{4m} relations hold exactly.

    With B^-1 A B = beta A^-1, A' = A / sqrt(beta) satisfies B^-1 A' B = A'^-1;
    then with A'^m = alpha B^2, B' = sqrt(alpha) B satisfies A'^m = B'^2.
    """
    beta = _scalar_of(B.inverse() * A * B * A)
    if beta is None:
        raise ValueError("B^-1 A B is not a scalar multiple of A^-1")
    A1 = A.scale(beta.sqrt().inverse())
    alpha = _scalar_of(A1 ** m * (B * B).inverse())
    if alpha is None:
        raise ValueError("A^m is not a scalar multiple of B^2")
    B1 = B.scale(alpha.sqrt())
    rep = LinearRep("lift", A1, B1, m)
    if not rep.relations_hold():  # pragma: no cover - the two rescalings are exact
        raise AssertionError("lift failed")
    return LiftResult(rep, beta, alpha)


D8_A = CycMatrix.diag(Z8, Z8 ** 7)
D8_B = CycMatrix([[0, Z4], [Z4, 0]])


def d8_lift_scan(A=D8_A, B=D8_B):
    """Scalars lambda, mu making (lambda A, mu B) satisfy a^4 = b^2 = 1, b^-1 a b = a^-1.

    The conjugation relation reads lambda beta A^-1 = lambda^-1 A^-1, so
    lambda^2 = 1 / beta; then a^4 = 1 needs lambda^4 * (A^4) = I.
    """
    beta = _scalar_of(B.inverse() * A * B * A)
    if beta is None:
        raise ValueError("not a projective dihedral representation")
    root = beta.inverse().sqrt()
    lambdas = [root, -root]
    a4 = _scalar_of(A ** 4)
    b2 = _scalar_of(B * B)
    consistent = [lam for lam in lambdas if a4 is not None and (lam ** 4 * a4).is_one()]
    return {
        "beta": beta,
        "lambda_candidates": lambdas,
        "a4_scalar": a4,
        "b2_scalar": b2,
        "mu_exists": b2 is not None and b2.root_of_unity_order() is not None,
        "consistent_lambdas": consistent,
    }


def check_d8_obstruction():
    """True: the displayed projective D8 representation has no linear lift."""
    scan = d8_lift_scan()
    return scan["mu_exists"] and not scan["consistent_lambdas"]


# -- semi-invariants -------------------------------------------------------------


def _generator_data(rep, chi):
    if isinstance(rep, LinearRep):
        mats = [rep.a, rep.b]
    else:
        mats = list(rep)
    if isinstance(chi, LinearCharacter):
        scalars = list(chi.values())
    else:
        scalars = [_c(s) for s in chi]
    if len(mats) != len(scalars):
        raise ValueError("one scalar per generator")
    return mats, scalars


def semi_invariant_space(rep, degree, chi):
    """Basis of forms F of the degree with g(F) = chi(g) F for every generator g."""
    mats, scalars = _generator_data(rep, chi)
    mons = monomials(degree)
    pos = {e: k for k, e in enumerate(mons)}
    rows = []
    for g, s in zip(mats, scalars):
        cols = []
        for e in mons:
            image = apply_matrix(g, Poly4.monomial(e)) - Poly4.monomial(e, s)
            col = [ZERO] * len(mons)
            for f, c in image.terms.items():
                col[pos[f]] = c
            cols.append(col)
        rows.extend([cols[j][i] for j in range(len(mons))] for i in range(len(mons)))
    basis = nullspace(rows, len(mons), ZERO, ONE) if rows else []
    out = [Poly4({mons[k]: v[k] for k in range(len(mons))}) for v in basis]
    return sorted(out, key=lambda p: max(p.terms), reverse=True)


def torus_normalizable(basis):
    """True if a diagonal substitution takes every all-nonzero combination of the basis to their sum.

    Each basis element must be homogeneous for the subtorus that scales all of
    its monomials alike; the induced characters of that subtorus on the basis
    must be independent, so the torus acts transitively on nonzero coefficients.
    """
    constraints = []
    for f in basis:
        exps = list(f.terms)
        for e in exps[1:]:
            constraints.append([Fraction(x - y) for x, y in zip(e, exps[0])])
    kernel = nullspace(constraints, 4) if constraints else [
        [Fraction(int(i == j)) for j in range(4)] for i in range(4)]
    weights = [[sum(Fraction(e) * k for e, k in zip(next(iter(f.terms)), kv)) for kv in kernel] for f in basis]
    return rank(weights) == len(basis)


def _fourth_root_rescale(F, target):
    """Diagonal d with apply(d, F) == target, using fourth roots of roots of unity on pure powers."""
    entries = [ONE] * 4
    for i in range(4):
        e = tuple(4 if k == i else 0 for k in range(4))
        if e in F.terms and e in target.terms:
            ratio = target.terms[e] / F.terms[e]
            if not ratio.is_one():
                try:
                    entries[i] = ratio.sqrt().sqrt()
                except UnsupportedRadicand:
                    return None
    d = CycMatrix.diag(*entries)
    return d if apply_matrix(d, F) == target else None


# -- audit traces ----------------------------------------------------------------


@dataclass
class CaseStep:
    case: str
    label: str
    passed: bool
    detail: str = ""

    def as_dict(self):
        return {"case": self.case, "label": self.label, "passed": self.passed, "detail": self.detail}


@dataclass
class CaseAudit:
    name: str
    steps: list = field(default_factory=list)
    assumptions: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    verdict: str = ""
    result: object = None

    def step(self, case, label, ok, detail=""):
        self.steps.append(CaseStep(case, label, bool(ok), detail))
        return bool(ok)

    @property
    def passed(self):
        return bool(self.steps) and all(s.passed for s in self.steps)

    def failed_steps(self):
        return [s for s in self.steps if not s.passed]

    def as_dict(self):
        return {
            "name": self.name,
            "passed": self.passed,
            "verdict": self.verdict,
            "result": str(self.result) if self.result is not None else None,
            "steps": [s.as_dict() for s in self.steps],
            "assumptions": list(self.assumptions),
            "notes": list(self.notes),
        }


def _projective_order(m, limit=64):
    p = ProjMatrix(m)
    x = p
    for k in range(1, limit + 1):
        if x.is_identity():
            return k
        x = x * p
    return None


def _rule_out_by_order(audit, irreps):
    for case, second in (("i", "rho2,1"), ("ii", "rho2,2")):
        rep = direct_sum(irreps["rho2,1"], irreps[second])
        order = _projective_order(rep.a)
        audit.step(case, "a^4 is scalar, so a acts on P^3 with order < 8 (not faithful)",
                   (ProjMatrix(rep.a ** 4)).is_identity() and order == 4, f"projective order of a = {order}")


def _one_dim_summands(irreps):
    return [irreps[f"rho1,{k}"] for k in range(1, 5)]


def quadric_case_audit():
    """The double-cover case: no smooth Q16-invariant quadric carries a consistent action."""
    audit = CaseAudit("quadric")
    audit.assumptions += [
        "the quadric image is smooth and Q16 acts on it faithfully (covering-involution argument)",
        "a^2 and a^4 fix the preimage of their common fixed set pointwise (degree-2 finite map)",
    ]
    irreps = irreps_by_name()
    _rule_out_by_order(audit, irreps)

    rep = direct_sum(irreps["rho2,1"], irreps["rho2,3"])
    for chi in CHARACTERS:
        basis = semi_invariant_space(rep, 2, chi)
        P = common_singular_point(basis) if basis else None
        audit.step("iii", f"character {chi.a},{chi.b}: every semi-invariant quadric is singular",
                   not basis or P is not None,
                   f"basis {[str(f) for f in basis]}; singular at {P}")

    smooth_found = []
    for r3, r4 in product(_one_dim_summands(irreps), repeat=2):
        rep = direct_sum(irreps["rho2,1"], r3, r4)
        tag = f"{r3.name}+{r4.name}"
        for chi in CHARACTERS:
            basis = semi_invariant_space(rep, 2, chi)
            if not basis:
                continue
            P = common_singular_point(basis)
            if P is not None:
                audit.step("iv", f"{tag}, character {chi.a},{chi.b}: family singular",
                           True, f"basis {[str(f) for f in basis]}; singular at {P}")
                continue
            ok = _forced_nonzero(basis) and torus_normalizable(basis)
            F2 = sum(basis[1:], basis[0])
            smooth = not quadric_gram(F2).det().is_zero()
            audit.step("iv", f"{tag}, character {chi.a},{chi.b}: smooth family normalizes to {F2}",
                       ok and smooth, f"basis {[str(f) for f in basis]}")
            smooth_found.append((rep, F2))
    audit.step("iv", "a smooth semi-invariant quadric occurs", bool(smooth_found),
               f"{len(smooth_found)} sign choices")
    normal = poly({(1, 1, 0, 0): 1, (0, 0, 1, 1): 1})
    for rep, F2 in smooth_found:
        audit.step("iv", "normal form is x1*x2 + x3*x4", F2 == normal, str(F2))
        a = rep.a
        fixed = {k: diagonal_fixed_points(a ** k, F2) for k in (1, 2, 4)}
        same = fixed[1] == fixed[2] == fixed[4] == sorted(
            COORDINATE_POINTS, key=lambda p: [x.canonical_key() for x in p.coords])
        audit.step("iv", "W^a = W^(a^2) = W^(a^4) = the four coordinate points", same,
                   f"sizes {[len(v) for v in fixed.values()]}")
        preimage_bound = 2 * len(fixed[2])
        n2, n4 = nikulin_fixed_count(4), nikulin_fixed_count(2)
        audit.step("iv", "preimage of the fixed set has at most 8 points", preimage_bound <= 8, str(preimage_bound))
        audit.step("iv", "|X^(a^2)| = 4 and |X^(a^4)| = 8 cannot both equal the same preimage",
                   n2 != n4, f"{n2} != {n4}")
    audit.verdict = "case II impossible" if audit.passed else "audit failed"
    return audit


def _forced_nonzero(basis):
    """Dropping any one basis element leaves a family with a common singular point."""
    for k in range(len(basis)):
        rest = basis[:k] + basis[k + 1:]
        if rest and common_singular_point(rest) is None:
            return False
    return True


def _det_scalar(m):
    return m.det()


def quartic_case_audit():
    """The embedded case: the quartic is projectively x1^4 + x2^4 + x3^3 x4 + x3 x4^3."""
    audit = CaseAudit("quartic")
    audit.assumptions += [
        "a symplectic linear automorphism g of a smooth quartic satisfies g(F) = det(g) F",
        "the induced action of Q16 on the quartic is faithful and symplectic",
    ]
    irreps = irreps_by_name()
    _rule_out_by_order(audit, irreps)

    rep = direct_sum(irreps["rho2,1"], irreps["rho2,3"])
    det_a = _det_scalar(rep.a)
    basis = semi_invariant_space([rep.a], 4, [det_a])
    P = common_singular_point(basis)
    audit.step("iii", "det a = 1 and every a-invariant quartic is singular at [1:0:0:0]",
               det_a.is_one() and P == COORDINATE_POINTS[0], f"basis {[str(f) for f in basis]}")
    displayed = {(2, 2, 0, 0), (1, 1, 1, 1)}
    extra = sorted({e for f in basis for e in f.terms} - displayed)
    audit.notes.append("a-invariant quartics besides x1^2 x2^2 and x1 x2 x3 x4: "
                       + ", ".join(str(Poly4.monomial(e)) for e in extra))

    a1 = CycMatrix.diag(Z8, Z8 ** 7, 1, 1)
    a2 = CycMatrix.diag(Z8, Z8 ** 7, 1, -1)
    swap34 = CycMatrix([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])
    normalization = {
        (1, 1): ("a1", ProjMatrix(CycMatrix.diag(Z8, Z8 ** 7, 1, 1)) == ProjMatrix(a1)),
        (-1, -1): ("a1^5", ProjMatrix(CycMatrix.diag(Z8, Z8 ** 7, -1, -1)) == ProjMatrix(a1 ** 5)),
        (1, -1): ("a2", ProjMatrix(CycMatrix.diag(Z8, Z8 ** 7, 1, -1)) == ProjMatrix(a2)),
        (-1, 1): ("a2^5", ProjMatrix(CycMatrix.diag(Z8, Z8 ** 7, -1, 1)) == ProjMatrix(a2 ** 5)),
    }
    for signs, (label, ok) in normalization.items():
        audit.step("iv", f"a with signs {signs} is projectively {label}", ok)
    audit.step("iv", "swapping x3, x4 conjugates a2 to the signs (-1, 1)",
               ProjMatrix(swap34 * a2 * swap34) == ProjMatrix(CycMatrix.diag(Z8, Z8 ** 7, -1, 1)))

    outcomes = []
    for r3, r4 in product(_one_dim_summands(irreps), repeat=2):
        rep = direct_sum(irreps["rho2,1"], r3, r4)
        signs = (r3.a[0, 0].to_fraction(), r4.a[0, 0].to_fraction())
        kind = "a1" if signs[0] == signs[1] else "a2"
        da, db = _det_scalar(rep.a), _det_scalar(rep.b)
        basis = semi_invariant_space(rep, 4, [da, db])
        tag = f"{r3.name}+{r4.name} ({kind}, det b = {db})"
        P = common_singular_point(basis) if basis else None
        if kind == "a1":
            audit.step("iv", f"{tag}: a = a1 is excluded by a singular point", not basis or P is not None,
                       f"basis {[str(f) for f in basis]}; singular at {P}")
            continue
        audit.step("iv", f"{tag}: x1*x2*x3*x4 is not semi-invariant",
                   all((1, 1, 1, 1) not in f.terms for f in basis))
        audit.step("iv", f"{tag}: every basis coefficient is forced nonzero by singularity",
                   P is None and _forced_nonzero(basis), f"basis {[str(f) for f in basis]}")
        audit.step("iv", f"{tag}: a diagonal rescaling sets all coefficients to 1", torus_normalizable(basis))
        F = sum(basis[1:], basis[0])
        d = _fourth_root_rescale(F, CANONICAL_QUARTIC)
        audit.step("iv", f"{tag}: {F} rescales to the canonical quartic", d is not None,
                   f"rescaling {d}" if d is not None else "")
        if d is not None:
            outcomes.append(apply_matrix(d, F))
    canonical = outcomes[0] if outcomes and all(o == outcomes[0] for o in outcomes) else None
    audit.step("iv", "all surviving branches give the same quartic", canonical == CANONICAL_QUARTIC,
               str(canonical))
    cert = smoothness_certificate(CANONICAL_QUARTIC)
    audit.step("smooth", "the canonical quartic is smooth", cert["smooth"], cert["detail"])
    audit.result = canonical
    audit.verdict = str(canonical) if audit.passed else "audit failed"
    return audit


def smoothness_certificate(F):
    """Smoothness of x1^4 + x2^4 + f(x3, x4) style forms.

    The x1 and x2 partials are monomials c x_i^3, forcing x1 = x2 = 0; the
    x3 and x4 partials are then binary forms whose resultant must be nonzero.
    """
    p = [F.partial(i) for i in range(4)]
    decoupled = all(len(p[i].terms) == 1 and next(iter(p[i].terms)) == tuple(3 if k == i else 0 for k in range(4))
                    for i in (0, 1))
    rest = [q.restrict([2, 3]) for q in p[2:]]
    coupled_only = all(q == r for q, r in zip(p[2:], rest))
    if not (decoupled and coupled_only):
        return {"smooth": False, "detail": "form is not of the decoupled shape"}
    res = binary_resultant(rest[0], rest[1], (2, 3))
    return {"smooth": not res.is_zero(), "resultant": res,
            "detail": f"partials in x1, x2 force x1 = x2 = 0; resultant of the x3, x4 partials = {res}"}


def fermat_q16_check():
    audit = CaseAudit("fermat-q16")
    g = pq_group()
    audit.step("order", "<P, Q> has order 16", g.order == 16, str(g.order))
    P, Q = g.generators
    audit.step("relations", "P^8 = 1, P^4 = Q^2, Q^-1 P Q = P^-1 projectively",
               (P ** 8).is_identity() and P ** 4 == Q * Q and Q.inverse() * P * Q == P.inverse())
    from .finitegroups import quaternion_group

    audit.step("iso", "<P, Q> is isomorphic to Q16", iso_search(as_abstract(g), quaternion_group(16)) is not None)
    bad = []
    for x in g.elements:
        s = apply_matrix(x, FERMAT).proportional_to(FERMAT)
        alpha = alpha_multiplier(x)
        if s is None or not s.is_one() or not alpha.is_one():
            bad.append(str(x))
    audit.step("forms", "every element fixes the Fermat quartic with scalar 1 and has multiplier 1",
               not bad, f"{len(bad)} exceptions")
    audit.verdict = "Q16 inside the Fermat symmetry group" if audit.passed else "audit failed"
    return audit
