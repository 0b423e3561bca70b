import math
import random

import pytest

from trigalois.intpoly import IntPoly, TridiagMatrix, char_poly
from trigalois.modp import (
    FpPoly,
    count_distinct_roots,
    factor_degree_multiset,
    falling_factorial,
    moment_constant,
    mth_power_residues,
    reduce_mod,
    _count_roots_scan,
)
from trigalois.primes import PrimeRange, is_prime, sieve_range


def test_reduce_mod_examples():
    assert reduce_mod(IntPoly([-1, 0, 1]), 7).coeffs == (6, 0, 1)
    assert reduce_mod(IntPoly([-2, 9, -6, 1]), 3).coeffs == (1, 0, 0, 1)
    assert reduce_mod(IntPoly([-2, 9, -6, 1]), 5).is_monic()
    with pytest.raises(ValueError):
        reduce_mod(IntPoly([1, 1]), 2)


def test_count_roots_examples():
    assert count_distinct_roots(FpPoly(7, [6, 0, 1])) == 2
    assert count_distinct_roots(FpPoly(7, [1, 0, 1])) == 0
    assert count_distinct_roots(FpPoly(13, [1, 0, 1])) == 2
    with pytest.raises(ValueError):
        count_distinct_roots(FpPoly(7, []))


def test_count_roots_gcd_vs_scan():
    rng = random.Random(2)
    primes = [p for p in range(3, 2000) if is_prime(p)]
    for _ in range(60):
        p = rng.choice(primes)
        deg = rng.randint(1, 8)
        coeffs = [rng.randrange(p) for _ in range(deg)] + [1]
        f = FpPoly(p, coeffs)
        scan = _count_roots_scan(f)
        # force the gcd path regardless of the size heuristic
        from trigalois import modp

        h = modp._xpow_mod(p, list(f.coeffs), p)
        hx = list(h) + [0] * max(0, 2 - len(h))
        hx[1] = (hx[1] - 1) % p
        g = modp._gcd(list(f.coeffs), modp._trim(hx), p)
        assert len(g) - 1 == scan
        assert count_distinct_roots(f) == scan


def test_factor_degrees_examples():
    assert factor_degree_multiset(FpPoly(3, [1, 0, 1])) == ((2,), True)
    assert factor_degree_multiset(FpPoly(7, [6, 0, 1])) == ((1, 1), True)
    assert factor_degree_multiset(FpPoly(11, [1, 1, 1, 1, 1])) == ((1, 1, 1, 1), True)


def test_factor_degrees_non_squarefree_flag():
    # (x^2 + 1)^2 mod 3 keeps only the square-free part's degrees
    f = reduce_mod(IntPoly([1, 0, 1]) ** 2, 3)
    degrees, squarefree = factor_degree_multiset(f)
    assert degrees == (2,) and not squarefree


def test_factor_degrees_sum_and_root_consistency():
    rng = random.Random(4)
    primes = [5, 7, 11, 13, 101, 257]
    for _ in range(40):
        p = rng.choice(primes)
        deg = rng.randint(1, 10)
        f = FpPoly(p, [rng.randrange(p) for _ in range(deg)] + [1])
        degrees, squarefree = factor_degree_multiset(f)
        if squarefree:
            assert sum(degrees) == f.degree
            assert degrees.count(1) == count_distinct_roots(f)
        else:
            assert sum(degrees) < f.degree


def test_factor_degrees_vs_brute_linear_and_irreducible():
    # degree-2 polynomials factor as (1,1), (1,) with multiplicity, or (2,)
    for p in (5, 13):
        for b in range(p):
            for c in range(p):
                f = FpPoly(p, [c, b, 1])
                degrees, squarefree = factor_degree_multiset(f)
                roots = _count_roots_scan(f)
                disc = (b * b - 4 * c) % p
                if disc == 0:
                    assert not squarefree and degrees == (1,)
                elif roots == 2:
                    assert degrees == (1, 1)
                else:
                    assert degrees == (2,) and roots == 0


def test_transfer_product_consistency():
    # the (1,1) entry of the 2x2 transfer product reduces to the
    # characteristic polynomial at every point
    rng = random.Random(8)
    for p in (5, 7, 11, 101, 199):
        n = rng.randint(1, 50)
        diag = [rng.randint(-10, 10) for _ in range(n)]
        m = TridiagMatrix(diag, [1] * (n - 1))
        P = reduce_mod(char_poly(m), p)
        for lam in range(p):
            a, b, c, d = 1, 0, 0, 1
            for v in diag:
                t = (lam - v) % p
                a, b, c, d = (t * a - c) % p, (t * b - d) % p, a, b
            assert a == P.evaluate(lam)


def test_falling_factorial():
    assert falling_factorial(5, 2) == 20
    assert falling_factorial(1, 2) == 0
    assert falling_factorial(6, 6) == 720
    assert falling_factorial(7, 0) == 1


def test_moment_identity():
    # (N)_k^2 = sum_l binom(k,l)^2 l! (N)_{2k-l}
    for n_val in range(0, 61, 12):
        for k in range(0, 7):
            lhs = falling_factorial(n_val, k) ** 2
            rhs = sum(
                math.comb(k, ell) ** 2
                * math.factorial(ell)
                * falling_factorial(n_val, 2 * k - ell)
                for ell in range(k + 1)
            )
            assert lhs == rhs


def test_moment_constants():
    assert moment_constant(1) == 2
    assert moment_constant(2) == 7
    # A(k) emerges from the identity at r = large
    for k in (1, 2, 3):
        big = 10**6
        lhs = falling_factorial(big, k) ** 2
        # leading term of the identity sum is A(k) big^(2k) asymptotically;
        # instead check the exact identity rearranged at N = 2k
        n_val = 2 * k
        rhs = sum(
            math.comb(k, ell) ** 2
            * math.factorial(ell)
            * falling_factorial(n_val, 2 * k - ell)
            for ell in range(k + 1)
        )
        assert rhs == falling_factorial(n_val, k) ** 2
    assert lhs > 0


def test_mth_power_residues():
    cubes = mth_power_residues(7, 3)
    assert cubes == {0, 1, 6} and len(cubes) == (7 - 1) // 3 + 1
    squares5 = mth_power_residues(5, 2)
    assert squares5 == {0, 1, 4}
    assert len(mth_power_residues(7, 2)) == (7 - 1) // 2 + 1
    with pytest.raises(ValueError):
        mth_power_residues(7, 4)


def test_sieve_examples():
    assert sieve_range(10).primes == (11, 13, 17, 19)
    pr = sieve_range(100)
    brute = tuple(q for q in range(101, 201) if all(q % d for d in range(2, q)))
    assert pr.primes == brute and len(pr) == 21
    assert all(is_prime(p) for p in pr)
    with pytest.raises(ValueError):
        sieve_range(4)


def test_sieve_segment_boundaries():
    pr = sieve_range(10**4, segment=1 << 8)
    pr2 = sieve_range(10**4)
    assert pr.primes == pr2.primes
    assert all(10**4 < p <= 2 * 10**4 for p in pr)


def test_prime_range_type():
    with pytest.raises(ValueError):
        PrimeRange(3, (5,))
