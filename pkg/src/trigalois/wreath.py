"""Signed-permutation (hyperoctahedral) machinery: orbit counts on tuples,
derived subgroups, and block-complement checks.

Elements of C2 wr S_m act on 2m points arranged in m blocks {2b, 2b+1}; they
are stored directly as permutation tuples of range(2m), so all group
operations are permutation composition and the predicates (preserves blocks,
sign pattern, block parity) read off the tuple.
"""

from __future__ import annotations

import itertools
import math
from typing import Iterable, Sequence

__all__ = [
    "orbit_count_formula",
    "involution_count",
    "brute_orbits",
    "derived_subgroup_check",
    "complement_block_check",
    "wreath_order",
    "full_wreath_gens",
    "u_alt_gens",
    "signed_perm",
]

Perm = tuple[int, ...]


def compose(f: Perm, g: Perm) -> Perm:
    """f after g."""
    return tuple(f[x] for x in g)


def inverse(f: Perm) -> Perm:
    out = [0] * len(f)
    for i, x in enumerate(f):
        out[x] = i
    return tuple(out)


def signed_perm(m: int, signs: Sequence[int], block_perm: Sequence[int]) -> Perm:
    """Element of C2 wr S_m from a sign vector in {+1,-1}^m and a block map.

    Point (b, s) goes to (block_perm[b], s flipped when signs[block_perm[b]] = -1).
    """
    out = [0] * (2 * m)
    for b in range(m):
        tb = block_perm[b]
        flip = 1 if signs[tb] == -1 else 0
        for s in (0, 1):
            out[2 * b + s] = 2 * tb + (s ^ flip)
    return tuple(out)


def wreath_order(m: int) -> int:
    return (1 << m) * math.factorial(m)


def full_wreath_gens(m: int) -> list[Perm]:
    """Block transposition, block m-cycle, one sign flip: generate C2 wr S_m."""
    ident_signs = [1] * m
    gens = [signed_perm(m, ident_signs, _transposition(m, 0, 1))]
    if m > 2:
        gens.append(signed_perm(m, ident_signs, _cycle(m, list(range(m)))))
    flip0 = [1] * m
    flip0[0] = -1
    gens.append(signed_perm(m, flip0, list(range(m))))
    return gens


def u_alt_gens(m: int) -> list[Perm]:
    """Generators of U[m] x| A_m: paired sign flip plus standard A_m generators."""
    ident_signs = [1] * m
    gens = []
    if m >= 3:
        gens.append(signed_perm(m, ident_signs, _cycle(m, [0, 1, 2])))
    if m >= 4:
        cyc = list(range(m)) if m % 2 == 1 else list(range(1, m))
        gens.append(signed_perm(m, ident_signs, _cycle(m, cyc)))
    flip01 = [1] * m
    flip01[0] = flip01[1] = -1
    gens.append(signed_perm(m, flip01, list(range(m))))
    return gens


def _transposition(m: int, i: int, j: int) -> list[int]:
    perm = list(range(m))
    perm[i], perm[j] = perm[j], perm[i]
    return perm


def _cycle(m: int, points: list[int]) -> list[int]:
    perm = list(range(m))
    for a, b in zip(points, points[1:] + points[:1]):
        perm[a] = b
    return perm


def orbit_count_formula(k: int) -> int:
    """Number of orbits of C2 wr S_m (m >= k) on ordered distinct k-tuples:
    sum over k1 + 2 k2 = k of k! / (k1! 2^k2 k2!)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    total = 0
    for k2 in range(k // 2 + 1):
        k1 = k - 2 * k2
        total += math.factorial(k) // (
            math.factorial(k1) * (1 << k2) * math.factorial(k2)
        )
    return total


def involution_count(k: int) -> int:
    """Number of sigma in S_k with sigma^2 = 1, by the telephone recurrence."""
    if k < 0:
        raise ValueError("k must be >= 0")
    prev, cur = 1, 1
    for j in range(2, k + 1):
        prev, cur = cur, cur + (j - 1) * prev
    return cur if k else 1


class _UnionFind:
    def __init__(self, size: int):
        self.parent = list(range(size))

    def find(self, x: int) -> int:
        parent = self.parent
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, x: int, y: int):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            self.parent[ry] = rx


def brute_orbits(m: int, k: int, subgroup: str = "full") -> int:
    """Orbit count of the block action on ordered distinct k-tuples of 2m points,
    by union-find over generator moves."""
    if not (1 <= k <= m <= 6):
        raise ValueError("requires 1 <= k <= m <= 6")
    gens = full_wreath_gens(m) if subgroup == "full" else u_alt_gens(m)
    omega = 2 * m
    weights = [omega**i for i in range(k - 1, -1, -1)]

    def encode(tup):
        return sum(w * t for w, t in zip(weights, tup))

    uf = _UnionFind(omega**k)
    tuples = list(itertools.permutations(range(omega), k))
    for g in gens:
        for tup in tuples:
            a = encode(tup)
            b = encode(tuple(g[t] for t in tup))
            uf.union(a, b)
    roots = {uf.find(encode(t)) for t in tuples}
    return len(roots)


def close_subgroup(gens: Iterable[Perm]) -> set[Perm]:
    """Subgroup closure by BFS under left multiplication."""
    gens = list(gens)
    if not gens:
        raise ValueError("empty generating set")
    ident = tuple(range(len(gens[0])))
    seen = {ident}
    frontier = [ident]
    while frontier:
        new = []
        for h in frontier:
            for g in gens:
                x = compose(g, h)
                if x not in seen:
                    seen.add(x)
                    new.append(x)
        frontier = new
    return seen


def derived_subgroup(gens: Sequence[Perm]) -> set[Perm]:
    """Commutator subgroup: normal closure of generator commutators."""
    comms = {
        compose(compose(inverse(g), inverse(h)), compose(g, h))
        for g in gens
        for h in gens
    }
    seeds = set(comms)
    while True:
        sub = close_subgroup(seeds) if seeds else set()
        extra = set()
        for g in gens:
            ginv = inverse(g)
            for s in seeds:
                c = compose(compose(g, s), ginv)
                if c not in sub:
                    extra.add(c)
        if not extra:
            return sub
        seeds |= extra


def _is_in_u_alt(perm: Perm, m: int) -> bool:
    """Membership in U[m] x| A_m: blocks preserved setwise, sign product +1,
    even block permutation."""
    block_map = []
    flips = 0
    for b in range(m):
        tb, s0 = divmod(perm[2 * b], 2)
        tb2, s1 = divmod(perm[2 * b + 1], 2)
        if tb != tb2 or s0 == s1:
            return False
        block_map.append(tb)
        flips += s0
    if flips % 2:
        return False
    # parity of block_map
    seen = [False] * m
    parity = 0
    for i in range(m):
        if not seen[i]:
            j = i
            clen = 0
            while not seen[j]:
                seen[j] = True
                j = block_map[j]
                clen += 1
            parity ^= (clen - 1) & 1
    return parity == 0


def derived_subgroup_check(m: int) -> bool:
    """Derived subgroup of C2 wr S_m equals U[m] x| A_m, of index 4."""
    if not (2 <= m <= 6):
        raise ValueError("requires 2 <= m <= 6")
    gens = full_wreath_gens(m)
    der = derived_subgroup(gens)
    expected = (1 << (m - 1)) * math.factorial(m) // 2
    if len(der) != expected:
        return False
    if wreath_order(m) != 4 * len(der):
        return False
    return all(_is_in_u_alt(g, m) for g in der)


def _induced_on_first_blocks(sub: Iterable[Perm]) -> set[Perm]:
    """Restrictions to points {0,1,2,3} of the elements stabilizing blocks
    {0,1} setwise."""
    induced = set()
    for g in sub:
        image = {g[0] // 2, g[1] // 2, g[2] // 2, g[3] // 2}
        if image == {0, 1}:
            induced.add((g[0], g[1], g[2], g[3]))
    return induced


def complement_block_check(m: int) -> bool:
    """The three distinguished complements of C2^m induce a group of order < 8
    on the union of two blocks, unlike the full wreath product (order 8)."""
    if not (4 <= m <= 6):
        raise ValueError("requires 4 <= m <= 6")
    perms = list(itertools.permutations(range(m)))
    plain = {signed_perm(m, [1] * m, p) for p in perms}
    twisted = set()
    for p in perms:
        sign = _perm_parity(p)
        twisted.add(signed_perm(m, [sign] * m, p))
    minus_one = signed_perm(m, [-1] * m, list(range(m)))
    with_center = plain | {compose(minus_one, g) for g in plain}
    for sub in (plain, twisted, with_center):
        if len(_induced_on_first_blocks(sub)) >= 8:
            return False
    control = close_subgroup(full_wreath_gens(m))
    return len(_induced_on_first_blocks(control)) == 8


def _perm_parity(p: Sequence[int]) -> int:
    seen = [False] * len(p)
    parity = 0
    for i in range(len(p)):
        if not seen[i]:
            j = i
            clen = 0
            while not seen[j]:
                seen[j] = True
                j = p[j]
                clen += 1
            parity ^= (clen - 1) & 1
    return -1 if parity else 1
