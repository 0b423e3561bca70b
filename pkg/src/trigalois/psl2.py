"""PSL2(p) elements, the projective-line action, BFS closure and diameters,
and executable checks of the generation lemmas for transfer matrices.

Group elements are canonicalized 2x2 unimodular matrices.  The closure and
diameter engines never multiply matrices: each element of PSL2(p) (or of a
product of such groups) is identified by the images of the three projective
base points 0, 1, infinity under its Mobius action, which is faithful.  Left
multiplication by a generator is then three table lookups per factor, which
vectorizes well enough to sweep every lambda for all primes up to 101.
"""

from __future__ import annotations

import dataclasses
from typing import Iterable, Optional, Sequence

import numpy as np

__all__ = [
    "PSL2Elem",
    "CheckResult",
    "group_order",
    "transfer_mat",
    "dyson_transfer_mat",
    "act",
    "infinity",
    "proj_points",
    "closure_size",
    "cayley_diameter",
    "lemma_gen_check",
    "lemma_genprod_check",
    "dyson_gen_check",
    "dyson_genprod_check",
    "gen_threshold",
]

# visited sets are dense boolean arrays up to this index-space size
_DENSE_SPACE = 1 << 26
_CHUNK = 1 << 21


def group_order(p: int) -> int:
    """|PSL2(p)| = p (p^2 - 1) / 2 for p >= 3."""
    return p * (p * p - 1) // 2


def gen_threshold(v: int, vp: int) -> int:
    """Smallest admissible prime for a generating pair built from v, v'."""
    return max(5, abs(v - vp) + 1)


def infinity(p: int) -> int:
    """Index of the point at infinity on the projective line over F_p."""
    return p


def proj_points(p: int) -> range:
    """Indices of the p + 1 projective points; p stands for infinity."""
    return range(p + 1)


@dataclasses.dataclass(frozen=True)
class PSL2Elem:
    """Canonical representative of {M, -M} in SL2(p).

    Of the pair, the representative is the one whose first nonzero entry in
    (a, b, c, d) order lies in [1, (p-1)/2].
    """

    p: int
    a: int
    b: int
    c: int
    d: int

    @staticmethod
    def from_entries(p: int, a: int, b: int, c: int, d: int) -> "PSL2Elem":
        if p < 3:
            raise ValueError("p must be an odd prime >= 3")
        a, b, c, d = a % p, b % p, c % p, d % p
        if (a * d - b * c) % p != 1:
            raise ValueError("matrix is not unimodular mod p")
        half = (p - 1) // 2
        for entry in (a, b, c, d):
            if entry:
                if entry > half:
                    a, b, c, d = (-a) % p, (-b) % p, (-c) % p, (-d) % p
                break
        return PSL2Elem(p, a, b, c, d)

    @staticmethod
    def identity(p: int) -> "PSL2Elem":
        return PSL2Elem.from_entries(p, 1, 0, 0, 1)

    def __mul__(self, other: "PSL2Elem") -> "PSL2Elem":
        if self.p != other.p:
            raise ValueError("mismatched moduli")
        p = self.p
        return PSL2Elem.from_entries(
            p,
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inv(self) -> "PSL2Elem":
        return PSL2Elem.from_entries(self.p, self.d, -self.b, -self.c, self.a)

    def order(self) -> int:
        e = PSL2Elem.identity(self.p)
        g = self
        k = 1
        while g != e:
            g = g * self
            k += 1
        return k

    def perm_table(self) -> np.ndarray:
        """Images of the p + 1 projective points under the Mobius action."""
        p = self.p
        out = np.empty(p + 1, dtype=np.int64)
        for x in range(p):
            out[x] = act(self, x)
        out[p] = act(self, p)
        return out


def act(g: PSL2Elem, pt: int) -> int:
    """Mobius action on projective-point indices; index p means infinity."""
    p = g.p
    if pt == p:
        if g.c == 0:
            return p
        return g.a * pow(g.c, p - 2, p) % p
    num = (g.a * pt + g.b) % p
    den = (g.c * pt + g.d) % p
    if den == 0:
        return p
    return num * pow(den, p - 2, p) % p


def transfer_mat(lam: int, v: int, p: int) -> PSL2Elem:
    """Canonical image of the transfer step [[lam - v, -1], [1, 0]]."""
    return PSL2Elem.from_entries(p, lam - v, -1, 1, 0)


def dyson_transfer_mat(lam: int, w: int, p: int) -> PSL2Elem:
    """Unimodular normalization [[lam/w, -w], [1/w, 0]] of the weighted step."""
    if w % p == 0:
        raise ValueError("weight divisible by p has no unimodular normalization")
    winv = pow(w % p, p - 2, p)
    return PSL2Elem.from_entries(p, lam * winv, -w, winv, 0)


@dataclasses.dataclass(frozen=True)
class CheckResult:
    """Outcome of a generation check: passed, failed, or skipped with reason."""

    status: str  # "pass" | "fail" | "skipped"
    reason: str = ""
    size: int | None = None
    expected: int | None = None

    def __bool__(self) -> bool:
        return self.status == "pass"


def _as_tuples(gens: Iterable) -> list[tuple[PSL2Elem, ...]]:
    out = []
    for g in gens:
        out.append((g,) if isinstance(g, PSL2Elem) else tuple(g))
    if not out:
        raise ValueError("empty generating set")
    k = len(out[0])
    if any(len(t) != k for t in out):
        raise ValueError("generators have mismatched factor counts")
    return out


class _TripleClosure:
    """BFS over a product of PSL2 groups in the images-of-(0,1,inf) encoding."""

    def __init__(self, ps: Sequence[int]):
        self.ps = list(ps)
        self.cols = 3 * len(self.ps)
        radices = []
        for p in self.ps:
            radices.extend([p + 1] * 3)
        self.radices = np.asarray(radices, dtype=np.int64)
        space = 1
        for r in radices:
            space *= r
        if space >= 1 << 62:
            raise ValueError("product group index space too large to encode")
        self.space = space
        weights = np.ones(self.cols, dtype=np.int64)
        for i in range(self.cols - 2, -1, -1):
            weights[i] = weights[i + 1] * self.radices[i + 1]
        self.weights = weights
        base = []
        for p in self.ps:
            base.extend([0, 1, p])
        self.base = np.asarray(base, dtype=np.int64)

    def encode(self, cols: np.ndarray) -> np.ndarray:
        out = cols[:, 0] * int(self.weights[0])
        for i in range(1, self.cols):
            w = int(self.weights[i])
            out += cols[:, i] * w if w != 1 else cols[:, i]
        return out

    def decode(self, codes: np.ndarray) -> np.ndarray:
        out = np.empty((codes.shape[0], self.cols), dtype=np.int64)
        rem = codes.copy()
        for i in range(self.cols - 1, -1, -1):
            r = int(self.radices[i])
            out[:, i] = rem % r
            rem //= r
        return out

    def gen_tables(self, gens: Sequence[tuple[PSL2Elem, ...]]) -> list[list[np.ndarray]]:
        return [[g.perm_table() for g in tup] for tup in gens]

    def run(self, gens, cap: Optional[int] = None):
        """BFS closure from the identity; returns (size, complete, eccentricity).

        Codes produced by one generator from a duplicate-free frontier are
        themselves duplicate-free, so marking the visited set generator by
        generator needs no sorting; visit order stays deterministic.
        """
        tables = self.gen_tables(_as_tuples(gens))
        dense = self.space <= _DENSE_SPACE
        frontier = self.base[None, :].copy()
        first = self.encode(frontier)
        if dense:
            visited = np.zeros(self.space, dtype=bool)
            visited[first] = True
        else:
            seen_sorted = first.copy()
        total = 1
        depth = 0
        gathered = np.empty((0, self.cols), dtype=np.int64)
        while frontier.shape[0]:
            fresh_parts = []
            if dense:
                for tup in tables:
                    nxt = np.empty_like(frontier)
                    for fi, table in enumerate(tup):
                        for c in range(3):
                            col = 3 * fi + c
                            nxt[:, col] = table[frontier[:, col]]
                    codes = self.encode(nxt)
                    new = codes[~visited[codes]]
                    visited[new] = True
                    fresh_parts.append(new)
                fresh = np.concatenate(fresh_parts) if fresh_parts else first[:0]
            else:
                cand_codes = []
                for tup in tables:
                    nxt = np.empty_like(frontier)
                    for fi, table in enumerate(tup):
                        for c in range(3):
                            col = 3 * fi + c
                            nxt[:, col] = table[frontier[:, col]]
                    cand_codes.append(self.encode(nxt))
                cand = np.unique(np.concatenate(cand_codes))
                pos = np.searchsorted(seen_sorted, cand)
                pos = np.clip(pos, 0, seen_sorted.size - 1)
                fresh = cand[seen_sorted[pos] != cand]
                seen_sorted = np.sort(np.concatenate([seen_sorted, fresh]))
            if fresh.size == 0:
                break
            total += int(fresh.size)
            depth += 1
            if cap is not None and total > cap:
                return total, False, depth
            frontier = self.decode(fresh)
        return total, True, depth


def closure_size(gens, cap: int = 1 << 32) -> tuple[int, bool]:
    """Size of the subgroup generated by tuples of PSL2 elements, BFS from identity.

    Returns (size, complete); complete is False when the cap was exceeded and
    the reported size is only the count visited so far.
    """
    tuples = _as_tuples(gens)
    ps = [g.p for g in tuples[0]]
    engine = _TripleClosure(ps)
    size, complete, _ = engine.run(tuples, cap=cap)
    return size, complete


def cayley_diameter(gens) -> int:
    """Exact Cayley-graph diameter for a symmetric generating set.

    One BFS from the identity suffices by vertex transitivity.  Rejects
    non-symmetric and non-generating inputs.
    """
    tuples = _as_tuples(gens)
    gen_set = set(tuples)
    for tup in tuples:
        if tuple(g.inv() for g in tup) not in gen_set:
            raise ValueError("generating set is not closed under inverses")
    ps = [g.p for g in tuples[0]]
    engine = _TripleClosure(ps)
    size, complete, depth = engine.run(tuples)
    expected = 1
    for p in ps:
        expected *= group_order(p)
    if not complete or size != expected:
        raise ValueError(f"set generates a proper subgroup of size {size} < {expected}")
    return depth


def _word_products(s: Sequence[tuple[PSL2Elem, ...]], j: int, inverses_first: bool):
    """All 4^j ... products of the pattern S^j S^-j (or S^-j S^j) as element tuples."""
    k = len(s[0])

    def tup_mul(x, y):
        return tuple(a * b for a, b in zip(x, y))

    def tup_inv(x):
        return tuple(a.inv() for a in x)

    words = [tuple(PSL2Elem.identity(g.p) for g in s[0])]
    first = [tup_inv(g) for g in s] if inverses_first else list(s)
    second = list(s) if inverses_first else [tup_inv(g) for g in s]
    for _ in range(j):
        words = [tup_mul(w, g) for w in words for g in first]
    for _ in range(j):
        words = [tup_mul(w, g) for w in words for g in second]
    return words


def _closure_check(gens, expected: int) -> CheckResult:
    """Closure-size test with a monotonicity fast path.

    If a small subset of the products already generates the whole group, the
    full set does too; only when the subset falls short is the complete
    product set enumerated, so the verdict is always that of the full set.
    """
    tuples = _as_tuples(gens)
    uniq: list[tuple[PSL2Elem, ...]] = []
    seen = set()
    for t in tuples:
        if t not in seen:
            seen.add(t)
            uniq.append(t)
    if len(uniq) > 4:
        # spread through the word list: a lexicographic prefix tends to land in
        # a triangular subgroup for the weighted transfer steps
        k = len(uniq)
        subset = [uniq[1], uniq[k // 3], uniq[2 * k // 3]]
        size, complete = closure_size(subset, cap=expected)
        if complete and size == expected:
            return CheckResult("pass", size=size, expected=expected)
    size, complete = closure_size(uniq, cap=expected)
    if complete and size == expected:
        return CheckResult("pass", size=size, expected=expected)
    return CheckResult("fail", size=size, expected=expected)


def lemma_gen_check(
    v: int, vp: int, p: int, lam: int, force_below_threshold: bool = False
) -> CheckResult:
    """Do S^2 S^-2 and S^-2 S^2 with S = {T(lam-v), T(lam-v')} generate PSL2(p)?

    Primes below the admissibility threshold are skipped unless forced (the
    exploratory mode, whose outcomes are recorded separately by callers).
    """
    if v == vp:
        return CheckResult("skipped", "v and v' must be distinct")
    if p < gen_threshold(v, vp) and not force_below_threshold:
        return CheckResult("skipped", f"p below threshold {gen_threshold(v, vp)}")
    s = [(transfer_mat(lam, v, p),), (transfer_mat(lam, vp, p),)]
    expected = group_order(p)
    for inv_first in (False, True):
        res = _closure_check(_word_products(s, 2, inv_first), expected)
        if not res:
            return res
    return res


def lemma_genprod_check(
    v: int, vp: int, primes: Sequence[int], lambdas: Sequence[int]
) -> CheckResult:
    """Product version: S^3 S^-3 must generate the full product of PSL2(p_i)."""
    if v == vp:
        return CheckResult("skipped", "v and v' must be distinct")
    if len(primes) != len(lambdas) or not primes:
        raise ValueError("primes and lambdas must have equal positive length")
    if len(primes) > 3:
        return CheckResult("skipped", "k <= 3 enforced")
    if list(primes) != sorted(primes, reverse=True):
        return CheckResult("skipped", "primes must be non-ascending")
    thr = gen_threshold(v, vp)
    if any(p < thr for p in primes):
        return CheckResult("skipped", f"prime below threshold {thr}")
    for i in range(len(primes)):
        for j in range(i + 1, len(primes)):
            if primes[i] == primes[j] and lambdas[i] % primes[i] == lambdas[j] % primes[j]:
                return CheckResult("skipped", "equal lambdas at a repeated prime")
    s = [
        tuple(transfer_mat(lam, v, p) for p, lam in zip(primes, lambdas)),
        tuple(transfer_mat(lam, vp, p) for p, lam in zip(primes, lambdas)),
    ]
    expected = 1
    for p in primes:
        expected *= group_order(p)
    for inv_first in (False, True):
        res = _closure_check(_word_products(s, 3, inv_first), expected)
        if not res:
            return res
    return res


def dyson_gen_check(w: int, wp: int, p: int, lam: int) -> CheckResult:
    """Weighted-step version with S = {T~(lam, w), T~(lam, w')} and S^3 S^-3."""
    if w % p == 0 or wp % p == 0:
        return CheckResult("skipped", "weight divisible by p")
    if (w - wp) % p == 0 or (w + wp) % p == 0:
        return CheckResult("skipped", "w = +-w' mod p")
    if p < gen_threshold(w, wp):
        return CheckResult("skipped", f"p below threshold {gen_threshold(w, wp)}")
    if lam % p == 0:
        return CheckResult("skipped", "lambda must be nonzero")
    s = [(dyson_transfer_mat(lam, w, p),), (dyson_transfer_mat(lam, wp, p),)]
    expected = group_order(p)
    for inv_first in (False, True):
        res = _closure_check(_word_products(s, 3, inv_first), expected)
        if not res:
            return res
    return res


def dyson_genprod_check(
    w: int, wp: int, primes: Sequence[int], lambdas: Sequence[int]
) -> CheckResult:
    """Product version of the weighted-step generation check, k <= 2."""
    if len(primes) != len(lambdas) or not primes:
        raise ValueError("primes and lambdas must have equal positive length")
    if len(primes) > 2:
        return CheckResult("skipped", "k <= 2 enforced")
    thr = gen_threshold(w, wp)
    for p, lam in zip(primes, lambdas):
        if w % p == 0 or wp % p == 0:
            return CheckResult("skipped", "weight divisible by p")
        if (w - wp) % p == 0 or (w + wp) % p == 0:
            return CheckResult("skipped", "w = +-w' mod p")
        if p < thr:
            return CheckResult("skipped", f"prime below threshold {thr}")
        if lam % p == 0:
            return CheckResult("skipped", "lambda must be nonzero")
    for i in range(len(primes)):
        for j in range(i + 1, len(primes)):
            if primes[i] == primes[j]:
                if (lambdas[i] - lambdas[j]) % primes[i] == 0 or (
                    lambdas[i] + lambdas[j]
                ) % primes[i] == 0:
                    return CheckResult("skipped", "lambda_i = +-lambda_j at a repeated prime")
    s = [
        tuple(dyson_transfer_mat(lam, w, p) for p, lam in zip(primes, lambdas)),
        tuple(dyson_transfer_mat(lam, wp, p) for p, lam in zip(primes, lambdas)),
    ]
    expected = 1
    for p in primes:
        expected *= group_order(p)
    for inv_first in (False, True):
        res = _closure_check(_word_products(s, 3, inv_first), expected)
        if not res:
            return res
    return res
