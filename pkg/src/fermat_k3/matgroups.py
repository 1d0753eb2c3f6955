"""Matrices over cyclotomic fields and the finite (projective) groups they generate.

The explicit groups used throughout are built here: the Fermat symmetry group
``(mu_4^4 : S_4) / mu_4`` of order 1536, its Sylow 2-subgroup of order 512,
their symplectic parts (the kernels of the determinant-type multiplier), and
the subgroups generated by the five named matrices ``A, B, C, P, Q``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations as _perms

from .cyclotomic import CycNumber, cyc, zeta
from .finitegroups import ClosureOverflow, FiniteGroup, closure
from .finitegroups import iso_search as _iso_search

__all__ = [
    "CycMatrix", "ProjMatrix", "MatrixGroup", "ClosureOverflow", "ShapeError",
    "projective_normalize", "group_closure", "order_structure", "commutator_subgroup",
    "alpha_multiplier", "symplectic_part", "group_invariants", "iso_search",
]


class ShapeError(ValueError):
    """A matrix does not have the shape an operation requires (e.g. not monomial)."""


def _c(x):
    return x if isinstance(x, CycNumber) else cyc(x)


class CycMatrix:
    """Square matrix with CycNumber entries; immutable and hashable."""

    __slots__ = ("rows", "_hash")

    def __init__(self, rows):
        rows = tuple(tuple(_c(x) for x in r) for r in rows)
        if not rows or any(len(r) != len(rows) for r in rows):
            raise ShapeError("matrix must be square and nonempty")
        self.rows = rows
        self._hash = None

    @property
    def size(self):
        return len(self.rows)

    @classmethod
    def identity(cls, n):
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def diag(cls, *entries):
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def perm(cls, sigma, entries=None):
        """Monomial matrix with ``M[sigma[j]][j] = entries[j]`` (0-based sigma)."""
        n = len(sigma)
        entries = entries or [1] * n
        rows = [[0] * n for _ in range(n)]
        for j in range(n):
            rows[sigma[j]][j] = entries[j]
        return cls(rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __mul__(self, other):
        if isinstance(other, CycMatrix):
            n = self.size
            cols = list(zip(*other.rows))
            out = []
            for r in self.rows:
                nz = [(k, a) for k, a in enumerate(r) if a]
                row = []
                for c in cols:
                    acc = None
                    for k, a in nz:
                        b = c[k]
                        if b:
                            t = a * b
                            acc = t if acc is None else acc + t
                    row.append(acc if acc is not None else cyc(0))
                out.append(row)
            m = CycMatrix.__new__(CycMatrix)
            m.rows = tuple(tuple(r) for r in out)
            m._hash = None
            if len(out) != n:  # pragma: no cover
                raise ShapeError("size mismatch")
            return m
        return self.scale(other)

    def scale(self, s):
        s = _c(s)
        return CycMatrix([[s * x for x in r] for r in self.rows])

    def __neg__(self):
        return self.scale(-1)

    def __add__(self, other):
        return CycMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        return isinstance(other, CycMatrix) and self.rows == other.rows

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.rows)
        return self._hash

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        result = CycMatrix.identity(self.size)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def is_zero(self):
        return not any(x for r in self.rows for x in r)

    def trace(self):
        t = cyc(0)
        for i in range(self.size):
            t = t + self.rows[i][i]
        return t

    def transpose(self):
        return CycMatrix(list(zip(*self.rows)))

    def det(self):
        a = [list(r) for r in self.rows]
        n = self.size
        d = cyc(1)
        for c in range(n):
            p = next((i for i in range(c, n) if a[i][c]), None)
            if p is None:
                return cyc(0)
            if p != c:
                a[c], a[p] = a[p], a[c]
                d = -d
            piv = a[c][c]
            d = d * piv
            inv = piv.inverse()
            for i in range(c + 1, n):
                if a[i][c]:
                    f = a[i][c] * inv
                    a[i] = [x - f * y for x, y in zip(a[i], a[c])]
        return d

    def inverse(self):
        n = self.size
        a = [list(r) + [cyc(1) if i == j else cyc(0) for j in range(n)] for i, r in enumerate(self.rows)]
        for c in range(n):
            p = next((i for i in range(c, n) if a[i][c]), None)
            if p is None:
                raise ZeroDivisionError("singular matrix")
            a[c], a[p] = a[p], a[c]
            inv = a[c][c].inverse()
            a[c] = [x * inv for x in a[c]]
            for i in range(n):
                if i != c and a[i][c]:
                    f = a[i][c]
                    a[i] = [x - f * y for x, y in zip(a[i], a[c])]
        return CycMatrix([r[n:] for r in a])

    def is_monomial(self):
        n = self.size
        cols = set()
        for r in self.rows:
            nz = [j for j in range(n) if r[j]]
            if len(nz) != 1:
                return False
            cols.add(nz[0])
        return len(cols) == n

    def monomial_data(self):
        """``(sigma, entries)`` with ``M[sigma[j]][j] = entries[j]``."""
        if not self.is_monomial():
            raise ShapeError("matrix is not monomial")
        n = self.size
        sigma = [0] * n
        entries = [None] * n
        for i, r in enumerate(self.rows):
            for j in range(n):
                if r[j]:
                    sigma[j] = i
                    entries[j] = r[j]
        return tuple(sigma), entries

    def is_diagonal(self):
        return all(not self.rows[i][j] for i in range(self.size) for j in range(self.size) if i != j)

    def eigenvalue_of(self, v):
        """lambda with M v = lambda v, or None if v is not an eigenvector."""
        mv = [sum((a * b for a, b in zip(r, v)), cyc(0)) for r in self.rows]
        k = next((i for i, x in enumerate(v) if x), None)
        if k is None:
            raise ValueError("zero vector")
        lam = mv[k] / v[k]
        if all(x == lam * y for x, y in zip(mv, v)):
            return lam
        return None

    def __repr__(self):
        return "CycMatrix([" + ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self.rows) + "])"


def sign_of_permutation(sigma):
    seen = [False] * len(sigma)
    sign = 1
    for i in range(len(sigma)):
        if not seen[i]:
            j, length = i, 0
            while not seen[j]:
                seen[j] = True
                j = sigma[j]
                length += 1
            if length % 2 == 0:
                sign = -sign
    return sign


def cycle_to_perm(cycles, n=4):
    """1-based cycle notation such as ``[(1, 3, 2, 4)]`` to a 0-based image tuple."""
    img = list(range(n))
    for cyc_ in cycles:
        for a, b in zip(cyc_, cyc_[1:] + cyc_[:1]):
            img[a - 1] = b - 1
    return tuple(img)


class ProjMatrix:
    """Class of a matrix modulo nonzero scalars, stored by its normalized representative."""

    __slots__ = ("rep",)

    def __init__(self, m):
        if not isinstance(m, CycMatrix):
            m = CycMatrix(m)
        self.rep = _normalized(m)

    @classmethod
    def _trusted(cls, rep):
        p = object.__new__(cls)
        p.rep = rep
        return p

    @property
    def size(self):
        return self.rep.size

    def __mul__(self, other):
        return ProjMatrix._trusted(_normalized(self.rep * other.rep))

    def __eq__(self, other):
        return isinstance(other, ProjMatrix) and self.rep == other.rep

    def __hash__(self):
        return hash(self.rep)

    def inverse(self):
        return ProjMatrix(self.rep.inverse())

    def __pow__(self, k):
        return ProjMatrix(self.rep ** k)

    def is_identity(self):
        return self.rep == CycMatrix.identity(self.size)

    def __repr__(self):
        return f"ProjMatrix({self.rep!r})"


def _normalized(m):
    for r in m.rows:
        for x in r:
            if x:
                if x.is_one():
                    return m
                return m.scale(x.inverse())
    raise ValueError("the zero matrix has no projective class")


def projective_normalize(m):
    """Canonical representative: the first nonzero entry (row-major) becomes 1."""
    return ProjMatrix(m)


@dataclass
class MatrixGroup:
    """A finite group of CycMatrix (linear) or ProjMatrix (projective) elements."""

    elements: list
    generators: list
    projective: bool
    abstract: FiniteGroup = field(repr=False)
    name: str = ""
    _index: dict = field(default=None, repr=False)

    @property
    def order(self):
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, x):
        return x in self.index

    @property
    def index(self):
        if self._index is None:
            self._index = {x: i for i, x in enumerate(self.elements)}
        return self._index

    def matrix(self, x):
        return x.rep if self.projective else x

    def subgroup(self, indices, name=""):
        """Subgroup on a set of element indices (must be closed)."""
        indices = sorted(set(indices))
        sub = self.abstract.subgroup(indices, name)
        elems = [self.elements[i] for i in indices]
        gens = [elems[i] for i in sub.generators()]
        return MatrixGroup(elems, gens, self.projective, sub, name)

    def subgroup_generated(self, gens, name=""):
        idx = [self.index[g] for g in gens]
        return self.subgroup(self.abstract.subgroup_closure(idx), name)

    def order_structure(self):
        return self.abstract.order_structure()

    def is_subgroup_of(self, other):
        return all(x in other for x in self.elements)

    def same_elements(self, other):
        return set(self.elements) == set(other.elements)


def group_closure(gens, cap=100000, name=""):
    """Breadth-first closure of invertible generators.

    ``gens`` are either all CycMatrix (linear group) or all ProjMatrix.
    """
    gens = list(gens)
    if not gens:
        raise ValueError("need at least one generator (use the identity)")
    projective = isinstance(gens[0], ProjMatrix)
    n = gens[0].size
    ident = ProjMatrix(CycMatrix.identity(n)) if projective else CycMatrix.identity(n)
    elements, perms = closure(gens, lambda a, b: a * b, ident, cap)
    return MatrixGroup(elements, gens, projective, FiniteGroup.from_right_regular(perms, name), name)


def order_structure(g):
    return g.order_structure()


def commutator_subgroup(g):
    return g.subgroup(g.abstract.derived_subgroup(), name=f"[{g.name},{g.name}]" if g.name else "")


def alpha_multiplier(m):
    """sgn(sigma) times the product of the nonzero entries of a monomial matrix.

    For a projective class the canonical representative is used.
    """
    rep = m.rep if isinstance(m, ProjMatrix) else m
    sigma, entries = rep.monomial_data()
    prod = cyc(sign_of_permutation(sigma))
    for e in entries:
        prod = prod * e
    return prod


def symplectic_part(g):
    keep = [i for i, x in enumerate(g.elements) if alpha_multiplier(x).is_one()]
    return g.subgroup(keep, name=g.name.replace("~", "") if g.name else "")


def group_invariants(g):
    return as_abstract(g).invariants()


def as_abstract(g):
    """The FiniteGroup behind a MatrixGroup, permutation group or FiniteGroup."""
    if isinstance(g, FiniteGroup):
        return g
    return g.abstract


def iso_search(g, h):
    """Isomorphism between two groups of order <= 512, or None."""
    return _iso_search(as_abstract(g), as_abstract(h))


def conjugate_group(g, h):
    """The group h^-1 g h as a new MatrixGroup."""
    hi = h.inverse()
    elems = [hi * x * h for x in g.elements]
    gens = [hi * x * h for x in g.generators]
    return MatrixGroup(elems, gens, g.projective, g.abstract, g.name)


# -- the explicit groups ------------------------------------------------------

I4 = zeta(4)


def _pm(m):
    return ProjMatrix(m)


def fermat_generators():
    """Generators of (mu_4^4 : S_4)/mu_4 acting on P^3."""
    return [
        _pm(CycMatrix.diag(I4, 1, 1, 1)),
        _pm(CycMatrix.diag(1, I4, 1, 1)),
        _pm(CycMatrix.diag(1, 1, I4, 1)),
        _pm(CycMatrix.perm(cycle_to_perm([(1, 2)]))),
        _pm(CycMatrix.perm(cycle_to_perm([(1, 2, 3, 4)]))),
    ]


def fermat_sylow_generators():
    """Diagonal generators plus the dihedral permutations (1324), (34)."""
    return fermat_generators()[:3] + [
        _pm(CycMatrix.perm(cycle_to_perm([(1, 3, 2, 4)]))),
        _pm(CycMatrix.perm(cycle_to_perm([(3, 4)]))),
    ]


def f384_tilde():
    return group_closure(fermat_generators(), cap=2000, name="F384~")


def f128_tilde():
    return group_closure(fermat_sylow_generators(), cap=1000, name="F128~")


def diagonal_group():
    """mu_4^4 / mu_4, the diagonal part (order 64)."""
    return group_closure(fermat_generators()[:3], cap=100, name="diag")


MATRIX_A = CycMatrix.diag(1, 1, -1, -1)
MATRIX_B = CycMatrix.diag(1, I4, 1, I4 ** 3)
MATRIX_C = CycMatrix.perm(cycle_to_perm([(1, 2), (3, 4)]))
MATRIX_P = CycMatrix([[0, 1, 0, 0], [I4, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, I4]])
MATRIX_Q = CycMatrix([[I4, 0, 0, 0], [0, I4, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])


def abc_group():
    return group_closure([_pm(MATRIX_A), _pm(MATRIX_B), _pm(MATRIX_C)], cap=100, name="<A,B,C>")


def pq_group():
    return group_closure([_pm(MATRIX_P), _pm(MATRIX_Q)], cap=100, name="<P,Q>")


def sylow_conjugates(big=None):
    """The three Sylow 2-subgroups of the order-1536 group, as conjugates of F128~."""
    base = f128_tilde()
    three_cycle = _pm(CycMatrix.perm(cycle_to_perm([(1, 2, 3)])))
    out = [base]
    h = three_cycle
    for _ in range(2):
        out.append(conjugate_group(base, h))
        h = h * three_cycle
    return out


def permutation_matrices(n=4):
    return [CycMatrix.perm(p) for p in _perms(range(n))]


# -- cache round-trip ---------------------------------------------------------

CACHE_HEADER = "fermat_k3 matrix-group cache v1"


def _num_to_text(x):
    x = x.minimal()
    return f"{x.conductor}:" + ",".join(str(c) for c in x.coeffs)


def _num_from_text(s):
    n, coeffs = s.split(":")
    from fractions import Fraction

    return CycNumber(int(n), [Fraction(c) for c in coeffs.split(",")])


def dump_group(g):
    """Text dump: header, flags, generators, then one element per line."""
    lines = [CACHE_HEADER, f"projective {int(g.projective)} size {g.elements[0].size if not g.projective else g.elements[0].rep.size}", f"name {g.name}"]

    def row(x):
        m = g.matrix(x)
        return " ".join(_num_to_text(v) for r in m.rows for v in r)

    lines.append(f"generators {len(g.generators)}")
    lines += [row(x) for x in g.generators]
    lines.append(f"elements {len(g.elements)}")
    lines += [row(x) for x in g.elements]
    return "\n".join(lines) + "\n"


def load_group(text):
    lines = text.splitlines()
    if not lines or lines[0] != CACHE_HEADER:
        raise ValueError("not a matrix-group cache")
    _, proj, _, size = lines[1].split()
    projective, size = bool(int(proj)), int(size)
    name = lines[2][len("name "):]

    def parse(line):
        vals = [_num_from_text(t) for t in line.split()]
        m = CycMatrix([vals[i * size:(i + 1) * size] for i in range(size)])
        return ProjMatrix(m) if projective else m

    ng = int(lines[3].split()[1])
    gens = [parse(s) for s in lines[4:4 + ng]]
    ne = int(lines[4 + ng].split()[1])
    elems = [parse(s) for s in lines[5 + ng:5 + ng + ne]]
    rebuilt = group_closure(gens, cap=ne, name=name)
    if set(rebuilt.elements) != set(elems):
        raise ValueError("cached elements do not match the closure of the cached generators")
    return rebuilt
