"""Markov chains on products of PSL2(p): exact operators, total-variation
decay curves, and spectral bounds.

All four chains step h -> g h with g drawn from a chain-specific increment
distribution; operators act on distributions as columns, M[x, y] = Q(x y^-1).
Increment distributions are kept as dictionaries with exact rational weights,
so the operator identities (three-fold convolution, adjoint composition, the
convex decomposition against the uniform two-atom chain) are checked exactly.
Dense evolution uses one permutation gather per increment.
"""

from __future__ import annotations

import dataclasses
from fractions import Fraction
from typing import Sequence

import numpy as np

from .model import ModelConfig
from .psl2 import PSL2Elem, _TripleClosure, dyson_transfer_mat, group_order, transfer_mat

__all__ = [
    "ChainSpec",
    "DistVector",
    "GroupIndex",
    "build_chain",
    "evolve",
    "d_k",
    "decay_curve",
    "second_eigenvalue",
    "decomposition_check",
]

STATE_CAP = 1 << 25

ElementTuple = tuple[PSL2Elem, ...]
Increments = dict[ElementTuple, Fraction]


def _tuple_mul(x: ElementTuple, y: ElementTuple) -> ElementTuple:
    return tuple(a * b for a, b in zip(x, y))


def _tuple_inv(x: ElementTuple) -> ElementTuple:
    return tuple(a.inv() for a in x)


def _convolve(q1: Increments, q2: Increments) -> Increments:
    out: Increments = {}
    for g1, w1 in q1.items():
        for g2, w2 in q2.items():
            g = _tuple_mul(g1, g2)
            out[g] = out.get(g, Fraction(0)) + w1 * w2
    return out


def _inverse_law(q: Increments) -> Increments:
    return {_tuple_inv(g): w for g, w in q.items()}


@dataclasses.dataclass(frozen=True)
class ChainSpec:
    """A chain on PSL2(p_1) x ... x PSL2(p_k) given by its increment law."""

    primes: tuple[int, ...]
    lambdas: tuple[int, ...]
    chain_id: int
    increments: tuple[tuple[ElementTuple, Fraction], ...]
    alpha: Fraction

    def __post_init__(self):
        total = sum(w for _, w in self.increments)
        if total != 1:
            raise ValueError(f"increment weights sum to {total}, expected 1")
        if any(w <= 0 for _, w in self.increments):
            raise ValueError("increment weights must be positive")
        if self.chain_id in (3, 4):
            law = dict(self.increments)
            for g, w in self.increments:
                if law.get(_tuple_inv(g)) != w:
                    raise ValueError("reversible chain increments must be symmetric")

    def increment_dict(self) -> Increments:
        return dict(self.increments)

    def support(self) -> list[ElementTuple]:
        return [g for g, _ in self.increments]


def _step_law(cfg: ModelConfig, primes, lambdas) -> Increments:
    """Law of one transfer step as a tuple over the prime vector."""
    law: Increments = {}
    if cfg.kind == "iid-diag":
        for v, w in cfg.diag_table:
            g = tuple(transfer_mat(lam, v, p) for p, lam in zip(primes, lambdas))
            law[g] = law.get(g, Fraction(0)) + w
    else:
        for wval, w in cfg.offdiag_table:
            if any(wval % p == 0 for p in primes):
                raise ValueError("offdiagonal weight divisible by a chain prime")
            g = tuple(dyson_transfer_mat(lam, wval, p) for p, lam in zip(primes, lambdas))
            law[g] = law.get(g, Fraction(0)) + w
    return law


def build_chain(
    cfg: ModelConfig, chain_id: int, primes: Sequence[int], lambdas: Sequence[int]
) -> ChainSpec:
    """Materialize the increment distribution of chains 1-4 by exact convolution.

    Chain 1: one transfer step.  Chain 2: three independent steps.  Chain 3:
    three inverse steps then three steps (the adjoint-composed square of
    chain 2).  Chain 4: same pattern with steps uniform on the two heaviest
    atoms.
    """
    primes = tuple(primes)
    lambdas = tuple(int(l) % p for l, p in zip(lambdas, primes))
    if len(primes) != len(lambdas) or not primes:
        raise ValueError("primes and lambdas must have equal positive length")
    if chain_id not in (1, 2, 3, 4):
        raise ValueError("chain_id must be 1..4")
    alpha = cfg.alpha()
    if chain_id == 4:
        (v1, _), (v2, _) = cfg.top_two_atoms()
        if cfg.kind == "iid-diag":
            sub = ModelConfig(
                "iid-diag", cfg.n, ((v1, Fraction(1, 2)), (v2, Fraction(1, 2)))
            )
        else:
            sub = ModelConfig(
                "dyson",
                cfg.n,
                offdiag_table=((v1, Fraction(1, 2)), (v2, Fraction(1, 2))),
                a=cfg.a,
            )
        base = _step_law(sub, primes, lambdas)
    else:
        base = _step_law(cfg, primes, lambdas)
    if chain_id == 1:
        law = base
    else:
        cubed = _convolve(_convolve(base, base), base)
        if chain_id == 2:
            law = cubed
        else:
            law = _convolve(_inverse_law(cubed), cubed)
    items = tuple(sorted(law.items(), key=lambda kv: _element_key(kv[0])))
    return ChainSpec(primes, lambdas, chain_id, items, alpha)


def _element_key(g: ElementTuple):
    return tuple((e.a, e.b, e.c, e.d) for e in g)


@dataclasses.dataclass(frozen=True)
class DistVector:
    """Distribution over the enumerated group, with a float roundoff budget."""

    values: np.ndarray
    err_bound: float

    def l1_to_uniform(self) -> float:
        n = self.values.shape[0]
        return float(np.abs(self.values - 1.0 / n).sum())


class GroupIndex:
    """Frozen enumeration of a product of PSL2(p)'s.

    Order is BFS from the identity under the standard unipotent generators of
    each factor, so vector indices are reproducible for fixed (primes).
    """

    def __init__(self, primes: Sequence[int]):
        self.primes = tuple(primes)
        self.order = 1
        for p in self.primes:
            self.order *= group_order(p)
        if self.order > STATE_CAP:
            raise ValueError(f"group of size {self.order} exceeds the state cap")
        self.engine = _TripleClosure(self.primes)
        gens = []
        for i, p in enumerate(self.primes):
            for mat in ((1, 1, 0, 1), (1, 0, 1, 1)):
                tup = [PSL2Elem.identity(q) for q in self.primes]
                tup[i] = PSL2Elem.from_entries(p, *mat)
                gens.append(tuple(tup))
        codes = self._bfs_codes(gens)
        if codes.shape[0] != self.order:
            raise AssertionError("enumeration did not reach the full group")
        self.codes = codes
        self.sorted_codes = np.sort(codes)
        self.rank_of_sorted = np.argsort(codes, kind="stable")
        self._cols = self.engine.decode(codes)

    def _bfs_codes(self, gens) -> np.ndarray:
        eng = self.engine
        tables = eng.gen_tables(gens)
        frontier = eng.base[None, :].copy()
        first = eng.encode(frontier)
        chunks = [first]
        seen_sorted = first.copy()
        while frontier.shape[0]:
            parts = []
            for tup in tables:
                nxt = np.empty_like(frontier)
                for fi, table in enumerate(tup):
                    for c in range(3):
                        col = 3 * fi + c
                        nxt[:, col] = table[frontier[:, col]]
                parts.append(eng.encode(nxt))
            cand = np.unique(np.concatenate(parts))
            pos = np.clip(np.searchsorted(seen_sorted, cand), 0, seen_sorted.size - 1)
            fresh = cand[seen_sorted[pos] != cand]
            if fresh.size == 0:
                break
            chunks.append(fresh)
            seen_sorted = np.sort(np.concatenate([seen_sorted, fresh]))
            frontier = eng.decode(fresh)
        return np.concatenate(chunks)

    def rank(self, codes: np.ndarray) -> np.ndarray:
        pos = np.searchsorted(self.sorted_codes, codes)
        return self.rank_of_sorted[pos]

    def left_mul_perm(self, g: ElementTuple) -> np.ndarray:
        """perm[i] = index of g * element_i."""
        tables = [e.perm_table() for e in g]
        nxt = np.empty_like(self._cols)
        for fi, table in enumerate(tables):
            for c in range(3):
                col = 3 * fi + c
                nxt[:, col] = table[self._cols[:, col]]
        return self.rank(self.engine.encode(nxt))

    def identity_index(self) -> int:
        return 0


_INDEX_CACHE: dict[tuple[int, ...], GroupIndex] = {}


def group_index(primes: Sequence[int]) -> GroupIndex:
    key = tuple(primes)
    if key not in _INDEX_CACHE:
        _INDEX_CACHE[key] = GroupIndex(key)
    return _INDEX_CACHE[key]


def _gather_perms(spec: ChainSpec, index: GroupIndex):
    """Per-increment inverse permutations so a step is new[j] = sum q old[inv[j]]."""
    perms = []
    for g, w in spec.increments:
        perm = index.left_mul_perm(g)
        inv = np.empty_like(perm)
        inv[perm] = np.arange(perm.shape[0])
        perms.append((inv, w))
    return perms


def evolve(spec: ChainSpec, n: int, exact: bool = False):
    """Distribution of the chain after n steps from the identity.

    Float mode returns a DistVector with the accumulated roundoff budget
    n * states * 2^-53; exact mode returns a list of Fractions.
    """
    index = group_index(spec.primes)
    perms = _gather_perms(spec, index)
    size = index.order
    if exact:
        vec: list[Fraction] = [Fraction(0)] * size
        vec[index.identity_index()] = Fraction(1)
        for _ in range(n):
            new = [Fraction(0)] * size
            for inv, w in perms:
                inv_list = inv.tolist()
                for j in range(size):
                    new[j] += w * vec[inv_list[j]]
            vec = new
        return vec
    v = np.zeros(size, dtype=np.float64)
    v[index.identity_index()] = 1.0
    for _ in range(n):
        acc = np.zeros(size, dtype=np.float64)
        for inv, w in perms:
            acc += float(w) * v[inv]
        v = acc
    return DistVector(v, n * size * 2.0**-53)


def d_k(spec: ChainSpec, n: int, exact: bool = False):
    """l1 distance of the n-step law from uniform (twice total variation)."""
    if exact:
        vec = evolve(spec, n, exact=True)
        u = Fraction(1, len(vec))
        return sum(abs(x - u) for x in vec)
    return evolve(spec, n).l1_to_uniform()


def decay_curve(spec: ChainSpec, n_max: int, floor: float = 0.0) -> np.ndarray:
    """d_k at every step 0..n_max (stops early when the floor is reached)."""
    index = group_index(spec.primes)
    perms = _gather_perms(spec, index)
    size = index.order
    v = np.zeros(size, dtype=np.float64)
    v[index.identity_index()] = 1.0
    uniform = 1.0 / size
    out = [float(np.abs(v - uniform).sum())]
    for _ in range(n_max):
        acc = np.zeros(size, dtype=np.float64)
        for inv, w in perms:
            acc += float(w) * v[inv]
        v = acc
        d = float(np.abs(v - uniform).sum())
        out.append(d)
        if floor and d < floor:
            break
    return np.asarray(out)


def _apply(perms, v: np.ndarray) -> np.ndarray:
    acc = np.zeros_like(v)
    for inv, w in perms:
        acc += float(w) * v[inv]
    return acc


def _apply_adjoint(perms_fwd, v: np.ndarray) -> np.ndarray:
    acc = np.zeros_like(v)
    for fwd, w in perms_fwd:
        acc += float(w) * v[fwd]
    return acc


def second_eigenvalue(
    spec: ChainSpec, tol: float = 1e-10, max_iter: int = 100_000
) -> float:
    """Largest modulus among non-top eigenvalues (chains 3, 4) or the second
    singular value (chains 1, 2), by power iteration deflated against constants.

    Raises RuntimeError with the residual when the iteration stalls.
    """
    index = group_index(spec.primes)
    perms_inv = _gather_perms(spec, index)
    perms_fwd = [(np.argsort(inv), w) for inv, w in perms_inv]
    # argsort of inv recovers the forward permutation
    size = index.order
    symmetric = spec.chain_id in (3, 4)

    def op(v: np.ndarray) -> np.ndarray:
        if symmetric:
            return _apply(perms_inv, v)
        return _apply_adjoint(perms_fwd, _apply(perms_inv, v))

    best = 0.0
    for attempt in range(3):
        rng = np.random.default_rng(0x5EED + attempt)
        v = rng.standard_normal(size)
        v -= v.mean()
        norm = np.linalg.norm(v)
        if norm == 0:
            continue
        v /= norm
        est_prev = np.inf
        for it in range(max_iter):
            w = op(v)
            w -= w.mean()
            norm = np.linalg.norm(w)
            if norm < 1e-300:
                return 0.0
            est = norm
            v = w / norm
            if abs(est - est_prev) <= tol * max(est, 1e-30):
                val = est if symmetric else float(np.sqrt(est))
                return max(best, val)
            est_prev = est
        best = max(best, est if symmetric else float(np.sqrt(est)))
    raise RuntimeError(
        f"power iteration did not converge; last residual {abs(est - est_prev):.3e}"
    )


def decomposition_check(spec3: ChainSpec, spec4: ChainSpec) -> tuple[bool, dict]:
    """Exact check that (Q3 - alpha Q4) / (1 - alpha) is a probability law.

    Entry nonnegativity of the remainder operator is equivalent to pointwise
    domination Q3 >= alpha Q4 on increments; row sums are the total mass.
    """
    if spec3.chain_id != 3 or spec4.chain_id != 4:
        raise ValueError("expects chain 3 and chain 4 specs")
    alpha = spec4.alpha
    q3 = spec3.increment_dict()
    q4 = spec4.increment_dict()
    residual: Increments = {}
    ok = True
    for g in set(q3) | set(q4):
        val = (q3.get(g, Fraction(0)) - alpha * q4.get(g, Fraction(0))) / (1 - alpha)
        if val < 0:
            ok = False
        if val:
            residual[g] = val
    total = sum(residual.values())
    return ok and total == 1, {
        "alpha": alpha,
        "residual_mass": total,
        "support": len(residual),
    }
