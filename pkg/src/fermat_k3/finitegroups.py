"""Small finite groups as Cayley tables.

Matrix groups and permutation groups of moderate size are converted into a
:class:`FiniteGroup` whose elements are the integers ``0..order-1`` (0 is the
identity).  Everything structural (orders, centre, classes, derived subgroup,
abelianization, isomorphism search) is computed on the table.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from math import gcd


class ClosureOverflow(RuntimeError):
    """Raised when a generated group exceeds the requested cap."""

    def __init__(self, cap, partial):
        super().__init__(f"group closure exceeded cap {cap} (reached {partial} elements)")
        self.cap = cap
        self.partial = partial


class CapacityError(ValueError):
    pass


def closure(gens, mul, identity, cap=10 ** 6):
    """Breadth-first closure of ``gens`` under right multiplication.

    Returns ``(elements, perms)`` where ``elements[0]`` is the identity and
    ``perms[k][i]`` is the index of ``elements[i] * gens[k]``.
    """
    elements = [identity]
    index = {identity: 0}
    perms = [[] for _ in gens]
    i = 0
    while i < len(elements):
        x = elements[i]
        for k, g in enumerate(gens):
            y = mul(x, g)
            j = index.get(y)
            if j is None:
                if len(elements) >= cap:
                    raise ClosureOverflow(cap, len(elements))
                j = len(elements)
                index[y] = j
                elements.append(y)
            perms[k].append(j)
        i += 1
    return elements, [tuple(p) for p in perms]


@dataclass
class FiniteGroup:
    """A group on ``range(order)`` with identity 0 given by its Cayley table."""

    table: list
    name: str = ""
    _inv: list = field(default=None, repr=False)
    _orders: list = field(default=None, repr=False)
    _classes: list = field(default=None, repr=False)
    _gens: list = field(default=None, repr=False)

    @classmethod
    def from_right_regular(cls, perms, name=""):
        """Build the table from right multiplication by generators.

        ``perms[k][i]`` is ``i * g_k``; element 0 must be the identity.
        """
        n = len(perms[0]) if perms else 1
        # right-regular permutation R_y (x -> x*y) for each y, found by BFS
        right = [None] * n
        right[0] = list(range(n))
        queue = deque([0])
        while queue:
            y = queue.popleft()
            ry = right[y]
            for p in perms:
                z = p[y]
                if right[z] is None:
                    right[z] = [p[v] for v in ry]
                    queue.append(z)
        if any(r is None for r in right):
            raise ValueError("generators do not reach every element")
        table = [[right[y][x] for y in range(n)] for x in range(n)]
        return cls(table, name)

    @classmethod
    def from_generators(cls, gens, mul, identity, cap=10 ** 6, name=""):
        elements, perms = closure(gens, mul, identity, cap)
        return cls.from_right_regular(perms, name), elements

    @classmethod
    def from_permutations(cls, gens, name=""):
        """Abstract group generated by permutations given as image tuples."""
        degree = len(gens[0])
        ident = tuple(range(degree))
        group, _ = cls.from_generators([tuple(g) for g in gens], _compose, ident, name=name)
        return group

    # -- basic data ---------------------------------------------------------

    @property
    def order(self):
        return len(self.table)

    def __len__(self):
        return len(self.table)

    def mul(self, a, b):
        return self.table[a][b]

    def inverse(self, a):
        if self._inv is None:
            inv = [0] * self.order
            for x, row in enumerate(self.table):
                inv[x] = row.index(0)
            self._inv = inv
        return self._inv[a]

    def power(self, a, k):
        result = 0
        if k < 0:
            a, k = self.inverse(a), -k
        while k:
            if k & 1:
                result = self.table[result][a]
            a = self.table[a][a]
            k >>= 1
        return result

    def element_order(self, a):
        if self._orders is None:
            orders = [0] * self.order
            for x in range(self.order):
                k, y = 1, x
                while y != 0:
                    y = self.table[y][x]
                    k += 1
                orders[x] = k
            self._orders = orders
        return self._orders[a]

    def order_structure(self):
        counts = {}
        for x in range(self.order):
            o = self.element_order(x)
            counts[o] = counts.get(o, 0) + 1
        return dict(sorted(counts.items()))

    def exponent(self):
        e = 1
        for x in range(self.order):
            o = self.element_order(x)
            e = e * o // gcd(e, o)
        return e

    def commutator(self, a, b):
        t = self.table
        return t[t[self.inverse(a)][self.inverse(b)]][t[a][b]]

    def conjugate(self, a, g):
        """g^-1 a g."""
        t = self.table
        return t[t[self.inverse(g)][a]][g]

    def is_abelian(self):
        t = self.table
        n = self.order
        return all(t[a][b] == t[b][a] for a in range(n) for b in range(a + 1, n))

    # -- subgroups ------------------------------------------------------------

    def subgroup_closure(self, gens):
        """Sorted element list of the subgroup generated by ``gens``."""
        seen = {0}
        frontier = [0]
        gens = [g for g in set(gens) if g != 0]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.table[x][g]
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return sorted(seen)

    def normal_closure(self, elems):
        gens = set(elems)
        current = set(self.subgroup_closure(gens))
        while True:
            extra = {self.conjugate(x, g) for x in gens for g in self.generators()} - current
            if not extra:
                return sorted(current)
            gens |= extra
            current = set(self.subgroup_closure(gens))

    def generators(self):
        """A small generating set, chosen greedily by decreasing element order."""
        if self._gens is not None:
            return self._gens
        candidates = sorted(range(1, self.order), key=lambda x: (-self.element_order(x), x))
        gens = []
        span = {0}
        for x in candidates:
            if len(span) == self.order:
                break
            if x not in span:
                gens.append(x)
                span = set(self.subgroup_closure(gens))
        self._gens = gens
        return gens

    def subgroup(self, elems, name=""):
        """The subgroup on ``elems`` as a new FiniteGroup (relabelled, identity first)."""
        elems = sorted(set(elems))
        if elems[0] != 0:
            raise ValueError("subgroup must contain the identity")
        pos = {x: i for i, x in enumerate(elems)}
        try:
            table = [[pos[self.table[a][b]] for b in elems] for a in elems]
        except KeyError:
            raise ValueError("element set is not closed") from None
        return FiniteGroup(table, name)

    def center(self):
        t = self.table
        n = self.order
        gens = self.generators()
        return [z for z in range(n) if all(t[z][g] == t[g][z] for g in gens)]

    def derived_subgroup(self):
        gens = self.generators()
        comms = {self.commutator(a, b) for a in gens for b in gens}
        return self.normal_closure(comms)

    def conjugacy_classes(self):
        if self._classes is None:
            seen = set()
            classes = []
            gens = self.generators()
            for x in range(self.order):
                if x in seen:
                    continue
                cls_ = {x}
                frontier = [x]
                while frontier:
                    nxt = []
                    for y in frontier:
                        for g in gens:
                            z = self.conjugate(y, g)
                            if z not in cls_:
                                cls_.add(z)
                                nxt.append(z)
                    frontier = nxt
                seen |= cls_
                classes.append(sorted(cls_))
            self._classes = classes
        return self._classes

    def class_of(self):
        lookup = [0] * self.order
        for i, c in enumerate(self.conjugacy_classes()):
            for x in c:
                lookup[x] = i
        return lookup

    def quotient(self, normal):
        """G/N as a FiniteGroup, for a normal subgroup given by its elements."""
        normal = set(normal)
        coset_of = [-1] * self.order
        reps = []
        for x in range(self.order):
            if coset_of[x] < 0:
                c = len(reps)
                reps.append(x)
                for h in normal:
                    coset_of[self.table[x][h]] = c
        table = [[coset_of[self.table[a][b]] for b in reps] for a in reps]
        return FiniteGroup(table)

    def abelian_invariants(self):
        """Invariant factors of G/[G,G], ascending, e.g. (2, 2, 2)."""
        ab = self.quotient(self.derived_subgroup())
        return abelian_group_invariants(ab)

    def invariants(self):
        return GroupInvariants(
            order=self.order,
            center_order=len(self.center()),
            exponent=self.exponent(),
            abelianization=self.abelian_invariants(),
            class_sizes=tuple(sorted(len(c) for c in self.conjugacy_classes())),
            order_structure=self.order_structure(),
        )


@dataclass(frozen=True)
class GroupInvariants:
    order: int
    center_order: int
    exponent: int
    abelianization: tuple
    class_sizes: tuple
    order_structure: dict


def _compose(p, q):
    """Apply p first, then q."""
    return tuple(q[x] for x in p)


def _prime_factors(n):
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def abelian_group_invariants(group):
    """Invariant factors of an abelian FiniteGroup from its element orders."""
    if not group.is_abelian():
        raise ValueError("group is not abelian")
    n = group.order
    if n == 1:
        return ()
    primary = {}
    for p in _prime_factors(n):
        # c_k = #{x : x^(p^k) = 1} = prod p^min(k, e_i)
        counts = []
        k = 0
        while True:
            k += 1
            c = sum(1 for x in range(n) if group.power(x, p ** k) == 0)
            counts.append(c)
            if k > 1 and counts[-1] == counts[-2]:
                break
        # number of cyclic factors of exponent >= k is log_p(c_k / c_{k-1})
        prev = 1
        ge = []
        for c in counts:
            r, t = 0, c // prev
            while t > 1:
                t //= p
                r += 1
            ge.append(r)
            prev = c
        exps = []
        for k in range(len(ge)):
            at_least = ge[k]
            more = ge[k + 1] if k + 1 < len(ge) else 0
            exps += [k + 1] * (at_least - more)
        primary[p] = sorted(exps, reverse=True)
    width = max(len(v) for v in primary.values())
    factors = []
    for i in range(width):
        f = 1
        for p, exps in primary.items():
            if i < len(exps):
                f *= p ** exps[i]
        factors.append(f)
    return tuple(sorted(factors))


# -- standard models --------------------------------------------------------

def cyclic_group(n):
    return FiniteGroup.from_permutations([tuple((i + 1) % n for i in range(n))], name=f"C{n}")


def dihedral_group(order):
    """Dihedral group of the given order (symmetries of an order/2-gon)."""
    m = order // 2
    rot = tuple((i + 1) % m for i in range(m))
    ref = tuple((-i) % m for i in range(m))
    if m == 2:
        return FiniteGroup.from_permutations([(1, 0, 3, 2), (2, 3, 0, 1)], name="D4")
    return FiniteGroup.from_permutations([rot, ref], name=f"D{order}")


def c2_times_d8():
    """C2 x D8 acting on 4 + 2 points."""
    return FiniteGroup.from_permutations(
        [(1, 2, 3, 0, 4, 5), (0, 3, 2, 1, 4, 5), (0, 1, 2, 3, 5, 4)], name="C2xD8"
    )


def quaternion_group(order):
    """Generalised quaternion (binary dihedral) group via its regular action."""
    n = order // 4
    # elements a^i b^j, i in [0, 2n), j in {0, 1}; encoded as i + 2n*j
    m = 2 * n

    def times_a(e):
        i, j = e % m, e // m
        # a^i b^j a = a^(i + (-1)^j) b^j
        return ((i + (1 if j == 0 else -1)) % m) + m * j

    def times_b(e):
        i, j = e % m, e // m
        # b^2 = a^n
        return i + m if j == 0 else (i + n) % m

    gens = [tuple(times_a(e) for e in range(2 * m)), tuple(times_b(e) for e in range(2 * m))]
    return FiniteGroup.from_permutations(gens, name=f"Q{order}")


# -- isomorphism search -----------------------------------------------------

@dataclass
class Isomorphism:
    generators: list
    images: list
    mapping: list

    def __call__(self, x):
        return self.mapping[x]


ISO_CAP = 512


def iso_search(g, h, cap=ISO_CAP):
    """Find an isomorphism g -> h by backtracking over generator images.

    Returns an :class:`Isomorphism` (generator images plus the full element
    map, verified on the whole table) or None when the groups are not
    isomorphic.
    """
    if g.order > cap or h.order > cap:
        raise CapacityError(f"iso_search is limited to groups of order <= {cap}")
    if g.order != h.order:
        return None
    if g.order_structure() != h.order_structure():
        return None
    g_class_size = _class_sizes(g)
    h_class_size = _class_sizes(h)
    if sorted(g_class_size) != sorted(h_class_size):
        return None
    gens = g.generators()
    h_orders = [h.element_order(x) for x in range(h.order)]
    h_reps = {c[0] for c in h.conjugacy_classes()}
    candidates = []
    for i, x in enumerate(gens):
        want = (g.element_order(x), g_class_size[x])
        cand = [y for y in range(h.order) if (h_orders[y], h_class_size[y]) == want]
        if i == 0:
            # an inner automorphism of h can move the first image to its class representative
            cand = [y for y in cand if y in h_reps]
        candidates.append(cand)

    n = g.order

    def extend(mapping, k, img):
        """Extend mapping from <gens[:k]> to <gens[:k+1]>; None if inconsistent."""
        mapping = list(mapping)
        assigned = gens[: k + 1]
        images = [mapping_images[j] for j in range(k)] + [img]
        used = {v for v in mapping if v >= 0}
        frontier = [x for x in range(n) if mapping[x] >= 0]
        while frontier:
            nxt = []
            for x in frontier:
                for s, t in zip(assigned, images):
                    y = g.table[x][s]
                    v = h.table[mapping[x]][t]
                    if mapping[y] < 0:
                        if v in used:
                            return None
                        mapping[y] = v
                        used.add(v)
                        nxt.append(y)
                    elif mapping[y] != v:
                        return None
            frontier = nxt
        return mapping

    mapping_images = []

    def search(k, mapping):
        if k == len(gens):
            return mapping
        for img in candidates[k]:
            new = extend(mapping, k, img)
            if new is None:
                continue
            mapping_images.append(img)
            found = search(k + 1, new)
            if found is not None:
                return found
            mapping_images.pop()
        return None

    start = [-1] * n
    start[0] = 0
    result = search(0, start)
    if result is None:
        return None
    for a in range(n):
        ra = result[a]
        row_g = g.table[a]
        row_h = h.table[ra]
        for b in range(n):
            if result[row_g[b]] != row_h[result[b]]:  # pragma: no cover - guaranteed by construction
                raise AssertionError("iso_search produced a non-homomorphism")
    return Isomorphism(list(gens), list(mapping_images), result)


def _class_sizes(group):
    sizes = [0] * group.order
    for c in group.conjugacy_classes():
        for x in c:
            sizes[x] = len(c)
    return sizes
