"""Permutation groups with a base and strong generating set (Schreier-Sims).

Permutations are 0-based image tuples; the product ``p * q`` means "apply p,
then q", so ``mul(p, q)[x] == q[p[x]]``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass


def mul(p, q):
    return tuple(q[x] for x in p)


def inv(p):
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def identity(n):
    return tuple(range(n))


def is_identity(p):
    return all(i == x for i, x in enumerate(p))


def perm_order(p):
    seen = [False] * len(p)
    order = 1
    for i in range(len(p)):
        if not seen[i]:
            j, k = i, 0
            while not seen[j]:
                seen[j] = True
                j = p[j]
                k += 1
            order = order * k // _gcd(order, k)
    return order


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def from_cycles(cycles, n):
    img = list(range(n))
    for c in cycles:
        for a, b in zip(c, c[1:] + c[:1]):
            img[a] = b
    return tuple(img)


class SearchExhausted(RuntimeError):
    pass


@dataclass
class StabilizerChain:
    base: list
    strong: list
    transversals: list  # per level: dict orbit point -> u with u[base[i]] == point
    level_gens: list

    def order(self):
        n = 1
        for t in self.transversals:
            n *= len(t)
        return n

    def sift(self, g, start=0):
        for i in range(start, len(self.base)):
            b = g[self.base[i]]
            u = self.transversals[i].get(b)
            if u is None:
                return g, i
            g = mul(g, inv(u))
        return g, len(self.base)


def _transversal(base_point, gens, degree):
    return _extend_transversal({base_point: identity(degree)}, gens)


def _extend_transversal(trans, gens):
    """Grow a transversal in place; existing representatives never change."""
    frontier = list(trans)
    while frontier:
        nxt = []
        for x in frontier:
            ux = trans[x]
            for s in gens:
                y = s[x]
                if y not in trans:
                    trans[y] = mul(ux, s)
                    nxt.append(y)
        frontier = nxt
    return trans


def schreier_sims(gens, degree, base_prefix=()):
    """Deterministic Schreier-Sims; returns a StabilizerChain."""
    ident = identity(degree)
    gens = [tuple(g) for g in gens if not is_identity(g)]
    base = list(base_prefix)
    for g in gens:
        if all(g[b] == b for b in base):
            base.append(next(i for i in range(degree) if g[i] != i))
    strong = list(gens)

    def fixes(s, k):
        return all(s[b] == b for b in base[:k])

    level_gens = [[s for s in strong if fixes(s, i)] for i in range(len(base))]
    transversals = []
    for i in range(len(base)):
        transversals.append(_transversal(base[i], level_gens[i], degree))
    chain = StabilizerChain(base, strong, transversals, level_gens)
    # per level, (orbit point, generator) pairs whose Schreier generator sifts trivially
    checked = [set() for _ in base]

    i = len(base) - 1
    while i >= 0:
        restart = None
        trans = chain.transversals[i]
        for beta, u in list(trans.items()):
            for s in chain.level_gens[i]:
                key = (beta, s)
                if key in checked[i]:
                    continue
                target = trans[s[beta]]
                us = mul(u, s)
                if us == target:
                    checked[i].add(key)
                    continue
                y = mul(us, inv(target))
                h, j = chain.sift(y, i + 1)
                if j == len(chain.base) and is_identity(h):
                    checked[i].add(key)
                    continue
                if j == len(chain.base):
                    chain.base.append(next(p for p in range(degree) if h[p] != p))
                    chain.level_gens.append([])
                    chain.transversals.append({chain.base[-1]: ident})
                    checked.append(set())
                chain.strong.append(h)
                for lvl in range(i + 1, j + 1):
                    chain.level_gens[lvl].append(h)
                    _extend_transversal(chain.transversals[lvl], chain.level_gens[lvl])
                restart = j
                break
            if restart is not None:
                break
        if restart is not None:
            i = restart
        else:
            i -= 1
    return chain


class PermGroup:
    """A permutation group on ``range(degree)`` with a lazily built BSGS."""

    def __init__(self, generators, degree=None, base_prefix=(), name=""):
        gens = [tuple(g) for g in generators]
        if degree is None:
            if not gens:
                raise ValueError("degree required for a group without generators")
            degree = len(gens[0])
        self.degree = degree
        self.generators = gens
        self.name = name
        self._base_prefix = tuple(base_prefix)
        self._chain = None

    @property
    def chain(self):
        if self._chain is None:
            self._chain = schreier_sims(self.generators, self.degree, self._base_prefix)
        return self._chain

    @property
    def base(self):
        return list(self.chain.base)

    def order(self):
        return self.chain.order()

    def __contains__(self, g):
        h, j = self.chain.sift(tuple(g))
        return j == len(self.chain.base) and is_identity(h)

    def with_base(self, prefix):
        """Same group with a chain whose base starts with ``prefix``."""
        g = PermGroup(self.generators, self.degree, prefix, self.name)
        # reuse the known strong generators for speed
        g._chain = schreier_sims(self.chain.strong, self.degree, prefix)
        return g

    def pointwise_stabilizer(self, points):
        points = list(points)
        g = self.with_base(points)
        k = len(points)
        gens = [s for s in g.chain.strong if all(s[p] == p for p in points)]
        stab = PermGroup(gens, self.degree, name=f"{self.name}_{points}")
        if k < len(g.chain.base):
            # the chain below level k is a chain for the stabilizer
            stab._chain = StabilizerChain(
                g.chain.base[k:],
                gens,
                g.chain.transversals[k:],
                g.chain.level_gens[k:],
            )
        else:
            stab._chain = StabilizerChain([], gens, [], [])
        return stab

    def point_stabilizer(self, p):
        return self.pointwise_stabilizer([p])

    def element_mapping(self, src, dst):
        """Some g with g[src[i]] == dst[i] for all i, or None."""
        g = self.with_base(src)
        chain = g.chain
        # g = h_k ... u_1 u_0 with u_i chosen level by level (u_0 applied last)
        right = identity(self.degree)
        for i, a in enumerate(src):
            want = inv(right)[dst[i]]
            if i >= len(chain.base):
                if want != a:
                    return None
                continue
            u = chain.transversals[i].get(want)
            if u is None:
                return None
            right = mul(u, right)
        return right

    def orbits(self):
        seen = [False] * self.degree
        out = []
        for p in range(self.degree):
            if seen[p]:
                continue
            orb = {p}
            frontier = [p]
            while frontier:
                nxt = []
                for x in frontier:
                    for s in self.generators:
                        y = s[x]
                        if y not in orb:
                            orb.add(y)
                            nxt.append(y)
                frontier = nxt
            for x in orb:
                seen[x] = True
            out.append(sorted(orb))
        return out

    def elements(self, limit=10 ** 5):
        if self.order() > limit:
            raise ValueError(f"refusing to enumerate {self.order()} elements")
        elems = [identity(self.degree)]
        for t in reversed(self.chain.transversals):
            elems = [mul(e, u) for u in t.values() for e in elems]
        return elems

    def random_element(self, rng):
        g = identity(self.degree)
        for t in self.chain.transversals:
            keys = sorted(t)
            g = mul(t[keys[rng.randrange(len(keys))]], g)
        return g

    def is_subgroup_of(self, other):
        return all(g in other for g in self.generators)

    def abstract(self, limit=4096):
        from .finitegroups import FiniteGroup

        if self.order() > limit:
            raise ValueError("group too large for a Cayley table")
        return FiniteGroup.from_permutations(self.generators or [identity(self.degree)], name=self.name)

    def __repr__(self):
        return f"PermGroup(degree={self.degree}, gens={len(self.generators)}, name={self.name!r})"


def setwise_stabilizer_of_pair(group, a, b):
    """Stabilizer of the unordered pair {a, b}."""
    pointwise = group.pointwise_stabilizer([a, b])
    g = group.with_base([a, b])
    chain = g.chain
    swap = None
    u1 = chain.transversals[0].get(b)
    if u1 is not None and len(chain.base) > 1:
        # want h in G_a with h[b] = u1^-1[a], then g = h * u1 swaps a and b
        want = inv(u1)[a]
        h = chain.transversals[1].get(want)
        if h is not None:
            swap = mul(h, u1)
    gens = list(pointwise.generators)
    if swap is not None:
        gens.append(swap)
    return PermGroup(gens, group.degree, name=f"{group.name}_{{{a},{b}}}")


def pair_orbits(group):
    """Orbits of the group on unordered pairs of points."""
    n = group.degree
    seen = set()
    out = []
    for a in range(n):
        for b in range(a + 1, n):
            if (a, b) in seen:
                continue
            orb = {(a, b)}
            frontier = [(a, b)]
            while frontier:
                nxt = []
                for x, y in frontier:
                    for s in group.generators:
                        p = (min(s[x], s[y]), max(s[x], s[y]))
                        if p not in orb:
                            orb.add(p)
                            nxt.append(p)
                frontier = nxt
            seen |= orb
            out.append(sorted(orb))
    return out


def two_part(n):
    k = 1
    while n % 2 == 0:
        n //= 2
        k *= 2
    return k


ENUMERATION_LIMIT = 4096
RETRY_BUDGET = 8


def odd_index_reduction(group, limit=ENUMERATION_LIMIT):
    """Shrink to a subgroup of odd index using point and pair stabilizers."""
    h = group
    while h.order() > limit:
        nxt = None
        for orb in h.orbits():
            if len(orb) > 1 and len(orb) % 2 == 1:
                nxt = h.point_stabilizer(orb[0])
                break
        if nxt is None:
            for orb in pair_orbits(h):
                if len(orb) > 1 and len(orb) % 2 == 1:
                    nxt = setwise_stabilizer_of_pair(h, *orb[0])
                    break
        if nxt is None:
            raise SearchExhausted("no odd orbit on points or pairs to reduce the group")
        h = nxt
    return h


def sylow2(group, seed=0, enumeration_limit=ENUMERATION_LIMIT):
    """A Sylow 2-subgroup, by a seeded ascent inside an odd-index subgroup.

    Starting from the trivial group, repeatedly pick (in a seeded random order)
    an element x normalizing the current 2-group P with x not in P and
    x^2 in P; then <P, x> is a 2-group of twice the order.
    """
    target = two_part(group.order())
    if target == 1:
        return PermGroup([], group.degree, name="1")
    h = odd_index_reduction(group, enumeration_limit)
    elements = h.elements()
    for attempt in range(RETRY_BUDGET):
        rng = random.Random(seed + attempt)
        order = list(range(len(elements)))
        rng.shuffle(order)
        p_elems = {identity(group.degree)}
        p_gens = []
        while len(p_elems) < target:
            found = None
            for k in order:
                x = elements[k]
                if x in p_elems:
                    continue
                if mul(x, x) not in p_elems:
                    continue
                xi = inv(x)
                if all(mul(mul(xi, g), x) in p_elems for g in p_gens):
                    found = x
                    break
            if found is None:
                break
            p_gens.append(found)
            p_elems = _close(p_gens, group.degree)
        if len(p_elems) == target:
            return PermGroup(p_gens, group.degree, name=f"Syl2({group.name})")
    raise SearchExhausted(f"Sylow ascent failed after {RETRY_BUDGET} seeds starting at {seed}")


def _close(gens, degree):
    elems = {identity(degree)}
    frontier = list(elems)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = mul(x, g)
                if y not in elems:
                    elems.add(y)
                    nxt.append(y)
        frontier = nxt
    return elems
