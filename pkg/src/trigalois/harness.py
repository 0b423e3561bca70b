"""Experiment harness: reproducible sampling, the prime-range root-statistics
estimator, Galois-group certification, and the population experiments for the
two matrix families.

The per-prime estimator for a monic P and range (x, 2x] is
A_k = (1/x) sum_p log p * (r_p)_k with r_p the distinct-root count of P mod p
(optionally excluding the root at zero); (r)_k is the falling factorial.  For
an n-dimensional sample the estimator concentrates near the number of Galois
orbits on ordered k-tuples of roots: 1 for the iid-diagonal family, and the
signed-involution count for the constant-diagonal family.
"""

from __future__ import annotations

import dataclasses
import math
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import rootbatch
from .intpoly import (
    IntPoly,
    char_poly,
    discriminant,
    height,
    height_bound,
    is_perfect_power,
)
from .model import ModelConfig, sample
from .modp import factor_degree_multiset, falling_factorial, reduce_mod
from .primes import is_prime, sieve_range
from .wreath import orbit_count_formula

__all__ = [
    "ChebotarevRecord",
    "ChebotarevResult",
    "GaloisCertificate",
    "run_chebotarev",
    "certify_galois",
    "disc_square_test",
    "bv_error_bound",
    "irreducibility_evidence",
    "run_population",
    "theorem1_samples",
    "theorem1_population",
    "theorem2_samples",
    "sample",
]


@dataclasses.dataclass(frozen=True)
class ChebotarevRecord:
    """Per-prime root statistics of one polynomial."""

    p: int
    logp: float
    r_all: int
    r_nonzero: int
    degrees: Optional[tuple[int, ...]] = None
    squarefree: Optional[bool] = None


@dataclasses.dataclass(frozen=True)
class ChebotarevResult:
    records: tuple[ChebotarevRecord, ...]
    x: int
    k_max: int
    exclude_zero: bool
    a_k: dict[int, float]
    se_k: dict[int, float]
    skipped: dict[str, int]


def run_chebotarev(
    P: IntPoly,
    x: int,
    k_max: int,
    exclude_zero: bool = False,
    with_degrees: bool = True,
    skip_below: int = 5,
    skip_divisors_of: int = 1,
    use_batch: bool = True,
) -> ChebotarevResult:
    """One record per admissible prime in (x, 2x], plus the A_k table.

    Primes <= skip_below and primes dividing skip_divisors_of (the product of
    offdiagonal weights, for the constant-diagonal family) are skipped and
    counted, never silently dropped.
    """
    if not P.is_monic() or P.degree < 1:
        raise ValueError("expects a monic polynomial of degree >= 1")
    rng = sieve_range(x)
    skipped = {"below_threshold": 0, "divides_weights": 0}
    kept: list[int] = []
    for p in rng.primes:
        if p <= skip_below:
            skipped["below_threshold"] += 1
        elif skip_divisors_of % p == 0:
            skipped["divides_weights"] += 1
        else:
            kept.append(p)
    n = P.degree
    if use_batch and n >= 2 and kept:
        r_all = rootbatch.root_counts(P.coeffs, kept).tolist()
    else:
        r_all = [_scalar_root_count(P, p) for p in kept]
    const = P.coeffs[0] if P.coeffs else 0
    records = []
    for p, r in zip(kept, r_all):
        r_nz = r - (1 if const % p == 0 else 0)
        degrees = None
        squarefree = None
        if with_degrees:
            degrees, squarefree = factor_degree_multiset(reduce_mod(P, p))
        records.append(
            ChebotarevRecord(p, math.log(p), int(r), r_nz, degrees, squarefree)
        )
    a_k, se_k = estimator_tables(records, x, k_max, exclude_zero)
    return ChebotarevResult(
        tuple(records), x, k_max, exclude_zero, a_k, se_k, skipped
    )


def estimator_tables(
    records: Sequence[ChebotarevRecord], x: int, k_max: int, exclude_zero: bool
) -> tuple[dict[int, float], dict[int, float]]:
    a_k: dict[int, float] = {}
    se_k: dict[int, float] = {}
    for k in range(1, k_max + 1):
        terms = []
        wsum = 0.0
        for rec in records:
            r = rec.r_nonzero if exclude_zero else rec.r_all
            terms.append(rec.logp * falling_factorial(r, k))
            wsum += rec.logp
        a = math.fsum(terms) / x
        a_k[k] = a
        if records and wsum > 0:
            mean = math.fsum(terms) / wsum
            resid = math.fsum(
                (rec.logp * ((t / rec.logp) - mean)) ** 2
                for rec, t in zip(records, terms)
            )
            se_k[k] = math.sqrt(resid) / x
        else:
            se_k[k] = float("nan")
    return a_k, se_k


def _scalar_root_count(P: IntPoly, p: int) -> int:
    from .modp import count_distinct_roots

    f = reduce_mod(P, p)
    if f.degree < 1:
        return 0
    return count_distinct_roots(f)


def disc_square_test(P: IntPoly) -> str:
    """Exact square test of the discriminant; 'square' or 'nonsquare'."""
    d = discriminant(P)
    if d == 0:
        raise ValueError("zero discriminant signals a repeated root")
    if d < 0:
        return "nonsquare"
    r = math.isqrt(d)
    return "square" if r * r == d else "nonsquare"


@dataclasses.dataclass(frozen=True)
class GaloisCertificate:
    """Verdict with the witnessing primes; every step is theorem-backed."""

    verdict: str  # contains_An | Sn | An | undetermined | reducible
    irreducible_witness: Optional[int] = None
    qcycle_witness: Optional[tuple[int, int]] = None  # (prime p, cycle length q)
    disc_is_square: Optional[bool] = None
    primes_tested: int = 0
    non_squarefree_skips: int = 0
    reducible_reason: Optional[str] = None


def _jordan_window(n: int) -> list[int]:
    return [q for q in range(n // 2 + 1, n - 2) if is_prime(q)]


def certify_galois(P: IntPoly, prime_budget: int) -> GaloisCertificate:
    """Certificate chain: an irreducible reduction gives transitivity and an
    n-cycle; a prime-length q-cycle with n/2 < q <= n-3 gives primitivity and,
    by Jordan, the alternating group; the discriminant square test separates
    A_n from S_n.  Never returns a false positive.

    The prime scan runs ascending from 5.  After a scalar warmup the hunt for
    an irreducible reduction switches to chunks: batched root counts reject
    primes where P has a root, and the survivors get Rabin's irreducibility
    test; reducible inputs burn the budget at a few entries of bookkeeping per
    prime instead of a full factor-degree extraction.
    """
    if not P.is_monic() or P.degree < 1:
        raise ValueError("expects a monic polynomial of degree >= 1")
    n = P.degree
    if n >= 2 and P.coeffs[0] == 0:
        return GaloisCertificate("reducible", reducible_reason="zero constant term")
    power = is_perfect_power(P) if n >= 2 else None
    if power is not None:
        return GaloisCertificate(
            "reducible", reducible_reason=f"perfect power with exponent {power[0]}"
        )
    disc = discriminant(P) if n >= 2 else 1
    if disc == 0:
        return GaloisCertificate("reducible", reducible_reason="repeated factor")
    if n >= 2:
        roots = integer_roots(P)
        if roots:
            return GaloisCertificate(
                "reducible", reducible_reason=f"integer root {roots[0]}"
            )
    if n < 8:
        return GaloisCertificate("undetermined", disc_is_square=_is_square(disc))
    window = set(_jordan_window(n))
    irr_witness = None
    q_witness = None
    tested = 0
    skips = 0
    p = 3
    warmup = min(prime_budget, 200)
    while tested < warmup and (irr_witness is None or q_witness is None):
        p = _next_prime(p)
        tested += 1
        degrees, squarefree = factor_degree_multiset(reduce_mod(P, p))
        if not squarefree:
            skips += 1
            continue
        if irr_witness is None and degrees == (n,):
            irr_witness = p
        if q_witness is None:
            for d in degrees:
                if d in window:
                    q_witness = (p, d)
                    break
    while tested < prime_budget and (irr_witness is None or q_witness is None):
        chunk = []
        while len(chunk) < 1024 and tested + len(chunk) < prime_budget:
            p = _next_prime(p)
            chunk.append(p)
        if not chunk:
            break
        tested += len(chunk)
        _, squarefree, irr_mask, window_deg = rootbatch.chunk_scan(
            P.coeffs, chunk, sorted(window)
        )
        skips += int((~squarefree).sum())
        for j, q in enumerate(chunk):
            if irr_witness is None and irr_mask[j]:
                irr_witness = q
            if q_witness is None and window_deg[j]:
                q_witness = (q, int(window_deg[j]))
            if irr_witness is not None and q_witness is not None:
                break
    if irr_witness is not None and q_witness is not None:
        square = _is_square(disc)
        return GaloisCertificate(
            "An" if square else "Sn",
            irreducible_witness=irr_witness,
            qcycle_witness=q_witness,
            disc_is_square=square,
            primes_tested=tested,
            non_squarefree_skips=skips,
        )
    return GaloisCertificate(
        "undetermined",
        irreducible_witness=irr_witness,
        qcycle_witness=q_witness,
        disc_is_square=_is_square(disc),
        primes_tested=tested,
        non_squarefree_skips=skips,
    )


def _is_square(d: int) -> bool:
    if d < 0:
        return False
    r = math.isqrt(d)
    return r * r == d


def integer_roots(P: IntPoly, p1: int = 49999, p2: int = 50021) -> list[int]:
    """Integer roots of P, reconstructed by CRT from two mod-p root scans and
    verified by exact evaluation.  Misses only roots beyond +-p1*p2/2, far
    outside any matrix spectrum handled here."""
    if P.degree < 1:
        return []
    found = []
    sets = []
    for q in (p1, p2):
        xs = np.arange(q, dtype=np.int64)
        acc = np.zeros(q, dtype=np.int64)
        for c in reversed(P.coeffs):
            acc = (acc * xs + c % q) % q
        sets.append(np.flatnonzero(acc == 0).tolist())
    modulus = p1 * p2
    inv1 = pow(p1, -1, p2)
    for r1 in sets[0]:
        for r2 in sets[1]:
            cand = (r1 + p1 * ((r2 - r1) * inv1 % p2)) % modulus
            if cand > modulus // 2:
                cand -= modulus
            if P.evaluate(cand) == 0:
                found.append(cand)
    return sorted(set(found))


def _next_prime(p: int) -> int:
    q = p + 2 if p % 2 else p + 1
    while not is_prime(q):
        q += 2
    return q


def bv_error_bound(k: int, n: int, H: int, x: float, C: float = 1.0) -> float:
    """Right side of the conditional estimate: C k n^k log(H n) log^2(x) / sqrt(x)."""
    if min(k, n, H) < 1 or x <= 1:
        raise ValueError("k, n, H must be >= 1 and x > 1")
    return C * k * float(n) ** k * math.log(H * n) * math.log(x) ** 2 / math.sqrt(x)


def irreducibility_evidence(P: IntPoly, prime_budget: int) -> Optional[dict]:
    """Sound irreducibility certificate for monic P by mod-p analysis.

    Either a prime with irreducible reduction, or a cross-prime degree sieve:
    a rational factor of degree 0 < d < n forces d to be a subset sum of every
    square-free factor-degree pattern, so an empty intersection of proper
    subset sums proves irreducibility.  The sieve matters for the constant
    diagonal family, whose Galois groups may contain no n-cycle at all.
    """
    n = P.degree
    if n < 1 or not P.is_monic():
        raise ValueError("expects a monic polynomial of degree >= 1")
    if n >= 2 and P.coeffs[0] == 0:
        return None
    full_mask = (1 << (n + 1)) - 1
    proper = full_mask & ~1 & ~(1 << n)
    sieve = proper
    used = []
    p = 3
    for _ in range(prime_budget):
        p = _next_prime(p)
        degrees, squarefree = factor_degree_multiset(reduce_mod(P, p))
        if not squarefree or sum(degrees) != n:
            continue
        if degrees == (n,):
            return {"kind": "irreducible_mod_p", "witness": p}
        acc = 1
        for d in degrees:
            acc |= acc << d
        sieve &= acc
        used.append(p)
        if sieve == 0:
            return {"kind": "degree_sieve", "witness_primes": used}
    return None


@dataclasses.dataclass(frozen=True)
class PopulationRow:
    index: int
    height_ok: bool
    perfect_power: bool
    verdict: str
    reducible_reason: Optional[str]
    a_k: Optional[dict[int, float]]


def run_population(
    cfg: ModelConfig,
    samples: int,
    master_seed: int,
    budget: int = 10_000,
    x: Optional[int] = None,
    k_max: int = 3,
    threads: int = 1,
) -> dict:
    """Population experiment: verdict histogram, perfect-power and
    reducibility-evidence fractions, optional per-draw estimator tables."""
    rows: list[Optional[PopulationRow]] = [None] * samples

    def work(i: int) -> PopulationRow:
        draw = sample(cfg, master_seed, i)
        m = draw.matrix()
        P = char_poly(m)
        h_ok = height(P) <= height_bound(m)
        analyzed = P
        if cfg.kind == "dyson" and cfg.n % 2 == 1:
            if P.coeffs[0] != 0:
                raise AssertionError("odd constant-diagonal sample without root at 0")
            analyzed = IntPoly(P.coeffs[1:])
        pp = is_perfect_power(analyzed) is not None if analyzed.degree >= 2 else False
        cert = certify_galois(analyzed, budget)
        a_k = None
        if x is not None:
            res = run_chebotarev(
                analyzed,
                x,
                k_max,
                exclude_zero=(cfg.kind == "dyson"),
                with_degrees=False,
            )
            a_k = res.a_k
        return PopulationRow(i, h_ok, pp, cert.verdict, cert.reducible_reason, a_k)

    _parallel_fill(rows, work, threads)
    hist: dict[str, int] = {}
    for row in rows:
        hist[row.verdict] = hist.get(row.verdict, 0) + 1
    nontrivial = sum(
        1
        for r in rows
        if r.verdict == "reducible"
        and r.reducible_reason != "zero constant term"
        and not (r.reducible_reason or "").startswith("integer root")
    )
    out = {
        "samples": samples,
        "master_seed": master_seed,
        "kind": cfg.kind,
        "n": cfg.n,
        "budget": budget,
        "verdict_histogram": dict(sorted(hist.items())),
        "perfect_power_fraction": sum(r.perfect_power for r in rows) / samples,
        "reducible_fraction": hist.get("reducible", 0) / samples,
        "nontrivial_reducible_fraction": nontrivial / samples,
        "height_bound_ok": all(r.height_ok for r in rows),
        "good_verdict_fraction": (hist.get("Sn", 0) + hist.get("An", 0)) / samples,
    }
    if x is not None:
        out["per_sample_a_k"] = [
            {str(k): v for k, v in r.a_k.items()} for r in rows
        ]
    return out


def _parallel_fill(slots: list, work, threads: int):
    """Fill slots[i] = work(i); results identical for any thread count."""
    import concurrent.futures as cf

    if threads <= 1:
        for i in range(len(slots)):
            slots[i] = work(i)
        return
    with cf.ThreadPoolExecutor(max_workers=threads) as ex:
        for i, row in enumerate(ex.map(work, range(len(slots)))):
            slots[i] = row


def theorem1_samples(
    master_seed: int,
    n: int = 40,
    samples: int = 50,
    x: int = 100_000,
    k_max: int = 3,
    threads: int = 1,
    diag_table=((0, Fraction(1, 2)), (1, Fraction(1, 2))),
) -> dict:
    """Per-sample estimator tables for the random-diagonal family; the target
    orbit count is 1 for every k."""
    cfg = ModelConfig("iid-diag", n, tuple(diag_table))
    rows: list = [None] * samples

    def work(i: int) -> dict:
        draw = sample(cfg, master_seed, i)
        m = draw.matrix()
        P = char_poly(m)
        if height(P) > height_bound(m):
            raise AssertionError("height bound violated")
        res = run_chebotarev(P, x, k_max, exclude_zero=False, with_degrees=False)
        ok = all(abs(res.a_k[k] - 1.0) < 0.5 for k in range(1, k_max + 1))
        return {
            "index": i,
            "a_k": {str(k): res.a_k[k] for k in range(1, k_max + 1)},
            "se_k": {str(k): res.se_k[k] for k in range(1, k_max + 1)},
            "within_half": ok,
        }

    _parallel_fill(rows, work, threads)
    frac = sum(r["within_half"] for r in rows) / samples
    return {
        "experiment": "iid-diag-estimator",
        "master_seed": master_seed,
        "n": n,
        "samples": samples,
        "x": x,
        "k_max": k_max,
        "target": 1.0,
        "within_half_fraction": frac,
        "per_sample": rows,
    }


def theorem1_population(
    master_seed: int,
    n: int = 30,
    samples: int = 500,
    budget: int = 10_000,
    threads: int = 1,
) -> dict:
    cfg = ModelConfig(
        "iid-diag", n, ((0, Fraction(1, 2)), (1, Fraction(1, 2)))
    )
    return run_population(cfg, samples, master_seed, budget=budget, threads=threads)


def theorem2_samples(
    master_seed: int,
    n: int = 40,
    samples: int = 50,
    x: int = 100_000,
    k_max: int = 3,
    evidence_budget: int = 3_000,
    threads: int = 1,
) -> dict:
    """Constant-diagonal family with |W| uniform on {1, 2}: nonzero-root
    estimator against the orbit-count targets, plus irreducibility evidence
    for even n and the forced linear factor for odd n."""
    cfg = ModelConfig(
        "dyson",
        n,
        offdiag_table=((1, Fraction(1, 2)), (2, Fraction(1, 2))),
        a=0,
    )
    targets = {k: float(orbit_count_formula(k)) for k in range(1, k_max + 1)}
    rows: list = [None] * samples

    def work(i: int) -> dict:
        draw = sample(cfg, master_seed, i)
        m = draw.matrix()
        P = char_poly(m)
        if height(P) > height_bound(m):
            raise AssertionError("height bound violated")
        wprod = 1
        for w in draw.offdiag:
            wprod *= w
        res = run_chebotarev(
            P,
            x,
            k_max,
            exclude_zero=True,
            with_degrees=False,
            skip_divisors_of=wprod,
        )
        all_even = all(rec.r_nonzero % 2 == 0 for rec in res.records)
        ok = all(abs(res.a_k[k] - targets[k]) < 0.5 for k in range(1, k_max + 1))
        ev = irreducibility_evidence(P, evidence_budget) if n % 2 == 0 else None
        return {
            "index": i,
            "a_k": {str(k): res.a_k[k] for k in range(1, k_max + 1)},
            "within_half": ok,
            "r_nonzero_all_even": all_even,
            "evidence": None if ev is None else ev["kind"],
        }

    _parallel_fill(rows, work, threads)
    out = {
        "experiment": "dyson-estimator",
        "master_seed": master_seed,
        "n": n,
        "samples": samples,
        "x": x,
        "k_max": k_max,
        "targets": {str(k): v for k, v in targets.items()},
        "within_half_fraction": sum(r["within_half"] for r in rows) / samples,
        "r_nonzero_all_even": all(r["r_nonzero_all_even"] for r in rows),
        "per_sample": rows,
    }
    if n % 2 == 0:
        out["evidence_fraction"] = sum(
            r["evidence"] is not None for r in rows
        ) / samples
    else:
        zero_root = 0
        for i in range(samples):
            P = char_poly(sample(cfg, master_seed, i).matrix())
            zero_root += P.coeffs[0] == 0
        out["linear_factor_fraction"] = zero_root / samples
    return out
