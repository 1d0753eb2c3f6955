"""The extended binary Golay code, the Steiner system St(5,8,24) and M24.

Points.  The 24 points are the projective line over F_23.  Internally point
``t`` in F_23 is index ``t`` and the point at infinity is index 23; the
1-based labels used in reports are ``index + 1``, so infinity is point 24.

Code.  The generator rows are the 23 translates of the weight-12 word
supported on {0} and the nonzero squares mod 23, together with the all-ones
word.  Their span is the extended quadratic residue code of length 24, which
is the Golay code.  A reduced 12-row basis is kept as the generator matrix.

Group.  M24 is generated by the four permutations of the projective line

    alpha: t -> t + 1        beta: t -> 2t        gamma: t -> -1/t
    delta: t -> t^3 / 9 for t a nonzero square, 9 t^3 otherwise, fixing 0 and infinity

each of which is checked to preserve the octads before a stabilizer chain
is built.
"""

from __future__ import annotations

import json
import os
import tempfile
from collections import Counter
from dataclasses import dataclass

from .permgroups import PermGroup, SearchExhausted, schreier_sims
from .permgroups import sylow2 as _sylow2

N_POINTS = 24
INFINITY = 23
FULL = (1 << N_POINTS) - 1
M24_ORDER = 244823040
GOLAY_SPECTRUM = {0: 1, 8: 759, 12: 2576, 16: 759, 24: 1}

SQUARES_MOD_23 = frozenset(x * x % 23 for x in range(1, 23))


class CorruptCode(RuntimeError):
    pass


class GeneratorRejected(RuntimeError):
    pass


def weight(mask):
    return bin(mask).count("1")


def mask_of(points):
    m = 0
    for p in points:
        if not 0 <= p < N_POINTS:
            raise ValueError(f"point index {p} outside 0..23")
        m |= 1 << p
    return m


def points_of(mask):
    return [i for i in range(N_POINTS) if mask >> i & 1]


def _reduce_basis(vectors):
    """Reduced row echelon basis of a set of GF(2) vectors (bit i = column i)."""
    basis = []
    for v in vectors:
        for b in basis:
            if v & (b & -b):
                v ^= b
        if v:
            low = v & -v
            basis = [b ^ v if b & low else b for b in basis]
            basis.append(v)
    return sorted(basis, key=lambda b: (b & -b))


def _span(basis):
    words = [0]
    for b in basis:
        words += [w ^ b for w in words]
    return words


@dataclass(frozen=True)
class GolayCode:
    generator_rows: tuple
    codewords: frozenset

    def __contains__(self, mask):
        return mask in self.codewords

    def __len__(self):
        return len(self.codewords)

    def weight_spectrum(self):
        return dict(sorted(Counter(weight(w) for w in self.codewords).items()))

    def octads(self):
        return sorted(w for w in self.codewords if weight(w) == 8)

    def to_text(self):
        return "".join(f"{w:06x}\n" for w in sorted(self.codewords))


def golay_construct():
    rows = []
    support = {0} | SQUARES_MOD_23
    for i in range(23):
        rows.append(mask_of((i + s) % 23 for s in support))
    rows.append(FULL)
    basis = _reduce_basis(rows)
    return _checked_code(basis)


def _checked_code(basis):
    if len(basis) != 12:
        raise CorruptCode(f"generator rows span dimension {len(basis)}, expected 12")
    code = GolayCode(tuple(basis), frozenset(_span(basis)))
    spectrum = code.weight_spectrum()
    if spectrum != GOLAY_SPECTRUM:
        raise CorruptCode(f"weight spectrum {spectrum} differs from {GOLAY_SPECTRUM}")
    return code


def code_from_text(text):
    """Load a code cache (4096 sorted 6-hex-digit masks) and validate it."""
    words = [int(line, 16) for line in text.split()]
    if len(words) != 4096 or words != sorted(set(words)):
        raise CorruptCode("cache must hold 4096 distinct sorted codewords")
    basis = _reduce_basis(words)
    code = _checked_code(basis)
    if set(words) != code.codewords:
        raise CorruptCode("cached words are not closed under symmetric difference")
    return code


def octads_containing(code, subset):
    """All octads containing the given set of points (a mask)."""
    return [o for o in code.octads() if o & subset == subset]


def steiner_query(code, five_set):
    """The unique octad containing a 5-set."""
    if weight(five_set) != 5:
        raise ValueError("steiner_query needs exactly five points")
    found = octads_containing(code, five_set)
    if len(found) != 1:
        raise CorruptCode(f"{len(found)} octads contain {points_of(five_set)}")
    return found[0]


# -- M24 --------------------------------------------------------------------


def _line_perm(f):
    return tuple(f(t) for t in range(N_POINTS))


def _inv23(t):
    return pow(t, 21, 23)


def m24_generators():
    """The permutations alpha, beta, gamma, delta described in the module docstring."""

    def alpha(t):
        return t if t == INFINITY else (t + 1) % 23

    def beta(t):
        return t if t == INFINITY else 2 * t % 23

    def gamma(t):
        if t == INFINITY:
            return 0
        if t == 0:
            return INFINITY
        return -_inv23(t) % 23

    def delta(t):
        if t in (0, INFINITY):
            return t
        if t in SQUARES_MOD_23:
            return pow(t, 3, 23) * _inv23(9) % 23
        return 9 * pow(t, 3, 23) % 23

    return {name: _line_perm(f) for name, f in
            (("alpha", alpha), ("beta", beta), ("gamma", gamma), ("delta", delta))}


def apply_to_mask(perm, mask):
    out = 0
    for i in range(N_POINTS):
        if mask >> i & 1:
            out |= 1 << perm[i]
    return out


def preserves_code(perm, code):
    # images of the basis suffice since the action is linear
    return all(apply_to_mask(perm, row) in code for row in code.generator_rows)


def preserves_octads(perm, code):
    octads = set(code.octads())
    return all(apply_to_mask(perm, o) in octads for o in octads)


def m24_construct(code, verify_all_octads=True):
    gens = m24_generators()
    for name, g in gens.items():
        ok = preserves_octads(g, code) if verify_all_octads else preserves_code(g, code)
        if not ok:
            raise GeneratorRejected(f"generator {name} does not preserve the octads")
    group = PermGroup(list(gens.values()), N_POINTS, name="M24")
    if group.order() != M24_ORDER:
        raise GeneratorRejected(f"generated group has order {group.order()}, expected {M24_ORDER}")
    return group


def point_stabilizer(group, p):
    stab = group.point_stabilizer(p)
    if group.name == "M24" and p == INFINITY:
        stab.name = "M23"
    return stab


def sylow2(group, seed=0, **kwargs):
    return _sylow2(group, seed, **kwargs)


def orbit_partition(group):
    """Orbits as (sorted sizes, blocks ordered by their smallest point)."""
    blocks = group.orbits()
    blocks.sort(key=min)
    return sorted(len(b) for b in blocks), blocks


def orbit_type_solver(total, orbit_count, powers_of_two=True):
    """Multisets of ``orbit_count`` orbit sizes summing to ``total``.

    With ``powers_of_two`` the sizes are powers of two and at least one is 1
    (a 2-group with a fixed point).
    """
    if powers_of_two:
        sizes = [1 << k for k in range(total.bit_length()) if 1 << k <= total]
    else:
        sizes = list(range(1, total + 1))
    out = []

    def rec(remaining, slots, smallest, acc):
        if slots == 0:
            if remaining == 0:
                out.append(list(acc))
            return
        for s in sizes:
            if s < smallest or s > remaining:
                continue
            acc.append(s)
            rec(remaining - s, slots - 1, s, acc)
            acc.pop()

    rec(total, orbit_count, 1, [])
    if powers_of_two:
        out = [o for o in out if 1 in o]
    return sorted(out)


def is_five_transitive_sample(group, rng, samples=20):
    """Map random ordered 5-tuples onto random ordered 5-tuples."""
    for _ in range(samples):
        src = rng.sample(range(N_POINTS), 5)
        dst = rng.sample(range(N_POINTS), 5)
        g = group.element_mapping(src, dst)
        if g is None or any(g[a] != b for a, b in zip(src, dst)):
            return False
    return True


# -- caches -------------------------------------------------------------------


def _atomic_write(path, text):
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


GOLAY_CACHE = "golay.txt"
BSGS_CACHE = "m24_bsgs.json"


def load_or_build_code(cache_dir=None):
    if cache_dir:
        path = os.path.join(cache_dir, GOLAY_CACHE)
        if os.path.exists(path):
            with open(path) as fh:
                return code_from_text(fh.read())
        code = golay_construct()
        _atomic_write(path, code.to_text())
        return code
    return golay_construct()


def bsgs_to_json(group):
    chain = group.chain
    return json.dumps({
        "version": 1,
        "name": group.name,
        "generators": [list(g) for g in group.generators],
        "base": chain.base,
        "strong": [list(s) for s in chain.strong],
        "order": chain.order(),
    }, sort_keys=True)


def bsgs_from_json(text, code, expected_order=M24_ORDER):
    data = json.loads(text)
    if data.get("version") != 1:
        raise ValueError("unsupported BSGS cache version")
    gens = [tuple(g) for g in data["generators"]]
    for g in gens:
        if sorted(g) != list(range(N_POINTS)) or not preserves_octads(g, code):
            raise ValueError("cached generator is not an octad-preserving permutation")
    group = PermGroup(gens, N_POINTS, name=data["name"])
    strong = [tuple(s) for s in data["strong"]]
    group._chain = schreier_sims(gens + strong, N_POINTS, data["base"])
    if group.order() != data["order"] or group.order() != expected_order:
        raise ValueError("cached BSGS order does not validate")
    return group


def load_or_build_m24(code, cache_dir=None):
    if cache_dir:
        path = os.path.join(cache_dir, BSGS_CACHE)
        if os.path.exists(path):
            with open(path) as fh:
                return bsgs_from_json(fh.read(), code)
        group = m24_construct(code)
        _atomic_write(path, bsgs_to_json(group))
        return group
    return m24_construct(code)


def m23_sylow2(seed=0, code=None):
    code = code or golay_construct()
    m24 = m24_construct(code)
    m23 = point_stabilizer(m24, INFINITY)
    return sylow2(m23, seed)


__all__ = [
    "GolayCode", "golay_construct", "steiner_query", "octads_containing", "m24_construct",
    "point_stabilizer", "sylow2", "orbit_partition", "orbit_type_solver", "SearchExhausted",
]
