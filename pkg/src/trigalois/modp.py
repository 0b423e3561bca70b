"""Polynomial arithmetic over F_p: root counting, factor-degree extraction,
falling factorials and power-residue sets.

Internally polynomials are plain lists of residues in ascending degree order
with a nonzero top entry (the empty list is zero).  numpy convolution is used
for multiplication whenever the modulus is small enough that int64 cannot
overflow; everything stays exact.
"""

from __future__ import annotations

import dataclasses
import math
from typing import Sequence

import numpy as np

from .intpoly import IntPoly
from .primes import PrimeRange, is_prime, sieve_range  # re-exported surface

__all__ = [
    "FpPoly",
    "PrimeRange",
    "sieve_range",
    "reduce_mod",
    "count_distinct_roots",
    "factor_degree_multiset",
    "falling_factorial",
    "mth_power_residues",
    "moment_constant",
    "is_prime",
]

# numpy convolution is safe while (deg+1) * p^2 fits in int64
_NP_SAFE_P = 1 << 27
# below p = scan_factor * deg(f) a direct residue scan beats the gcd method
SCAN_FACTOR = 64


@dataclasses.dataclass(frozen=True)
class FpPoly:
    """Polynomial over F_p with reduced coefficients, ascending degree."""

    p: int
    coeffs: tuple[int, ...]

    def __init__(self, p: int, coeffs: Sequence[int]):
        if p < 3:
            raise ValueError("modulus must be an odd prime >= 3")
        cs = [c % p for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "coeffs", tuple(cs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1 if self.coeffs else -1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def evaluate(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * x + c) % self.p
        return acc


def reduce_mod(poly: IntPoly, q: int) -> FpPoly:
    """Coefficientwise reduction of an integer polynomial modulo a prime q >= 3."""
    if q < 3:
        raise ValueError("modulus must be >= 3")
    return FpPoly(q, [c % q for c in poly.coeffs])


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _mul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    if p < _NP_SAFE_P and min(len(a), len(b)) >= 8:
        out = np.convolve(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
        return _trim((out % p).tolist())
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _trim([c % p for c in out])


def _rem(a: list[int], f: list[int], p: int) -> list[int]:
    """a mod f; f need not be monic."""
    r = list(a)
    df = len(f) - 1
    inv = pow(f[-1], p - 2, p)
    for i in range(len(r) - 1, df - 1, -1):
        c = r[i] % p
        if c:
            t = c * inv % p
            for j in range(df + 1):
                r[i - df + j] = (r[i - df + j] - t * f[j]) % p
    del r[df:]
    return _trim(r)


def _gcd(a: list[int], b: list[int], p: int) -> list[int]:
    """Monic gcd."""
    a, b = list(a), list(b)
    while b:
        a, b = b, _rem(a, b, p)
    if a:
        inv = pow(a[-1], p - 2, p)
        a = [c * inv % p for c in a]
    return a


def _div_exact(a: list[int], b: list[int], p: int) -> list[int]:
    """a / b assuming exact divisibility."""
    r = list(a)
    q = [0] * (len(a) - len(b) + 1)
    inv = pow(b[-1], p - 2, p)
    for i in range(len(r) - 1, len(b) - 2, -1):
        c = r[i] % p
        if c:
            t = c * inv % p
            q[i - (len(b) - 1)] = t
            for j in range(len(b)):
                r[i - (len(b) - 1) + j] = (r[i - (len(b) - 1) + j] - t * b[j]) % p
    if _trim(r):
        raise ArithmeticError("non-exact division in F_p[x]")
    return _trim(q)


def _xpow_mod(e: int, f: list[int], p: int) -> list[int]:
    """x^e mod f by square-and-multiply."""
    result = [1]
    for bit in bin(e)[2:]:
        result = _rem(_mul(result, result, p), f, p)
        if bit == "1":
            result = _rem([0] + result, f, p)
    return result


def _derivative(f: list[int], p: int) -> list[int]:
    return _trim([i * c % p for i, c in enumerate(f)][1:])


def count_distinct_roots(f: FpPoly, scan_factor: int = SCAN_FACTOR) -> int:
    """#Z(f, p), the number of distinct roots of f in F_p.

    Uses deg gcd(x^p - x, f); below p = scan_factor * deg(f) a full residue
    scan is cheaper and is used instead (and doubles as the independent oracle
    in tests).
    """
    if f.is_zero():
        raise ValueError("zero polynomial")
    p = f.p
    if f.degree == 0:
        return 0
    if p < scan_factor * f.degree:
        return _count_roots_scan(f)
    coeffs = list(f.coeffs)
    h = _xpow_mod(p, coeffs, p)
    # gcd(h - x, f)
    hx = list(h) + [0] * max(0, 2 - len(h))
    hx[1] = (hx[1] - 1) % p
    g = _gcd(coeffs, _trim(hx), p)
    return len(g) - 1


def _count_roots_scan(f: FpPoly) -> int:
    """Direct scan of all residues, vectorized Horner."""
    p = f.p
    xs = np.arange(p, dtype=np.int64)
    acc = np.zeros(p, dtype=np.int64)
    for c in reversed(f.coeffs):
        acc = (acc * xs + c) % p
    return int(np.count_nonzero(acc == 0))


def _frobenius_matrix(h: list[int], f: list[int], p: int) -> np.ndarray:
    """Matrix of g -> g^p on F_p[x]/(f), columns x^{ip} = h^i mod f."""
    n = len(f) - 1
    q = np.zeros((n, n), dtype=np.int64)
    col = [1]
    q[0, 0] = 1
    for i in range(1, n):
        col = _rem(_mul(col, h, p), f, p)
        for j, c in enumerate(col):
            q[j, i] = c
    return q


def factor_degree_multiset(f: FpPoly) -> tuple[tuple[int, ...], bool]:
    """Degrees (with multiplicity) of the irreducible factors of the square-free
    part of f, plus a flag telling whether f itself was square-free.

    Distinct-degree counts come from c_d = deg gcd(x^{p^d} - x, f*), inverted
    triangularly; x^{p^d} is advanced by one Frobenius-matrix product per step.
    """
    if f.is_zero():
        raise ValueError("zero polynomial")
    p = f.p
    coeffs = list(f.coeffs)
    if f.degree == 0:
        return (), True
    g = _gcd(coeffs, _derivative(coeffs, p), p)
    squarefree = len(g) == 1
    fstar = coeffs if squarefree else _div_exact(coeffs, g, p)
    inv = pow(fstar[-1], p - 2, p)
    fstar = [c * inv % p for c in fstar]
    nstar = len(fstar) - 1
    if nstar == 0:
        return (), squarefree
    if nstar == 1:
        return (1,), squarefree

    h = _xpow_mod(p, fstar, p)
    frob = _frobenius_matrix(h, fstar, p)
    hd = list(h)
    found: dict[int, int] = {}
    counted = 0
    d = 1
    while counted < nstar:
        remaining = nstar - counted
        if 2 * d > remaining:
            found[remaining] = found.get(remaining, 0) + 1
            break
        # c_d counts each factor of degree e | d exactly e times
        hx = list(hd) + [0] * max(0, 2 - len(hd))
        hx[1] = (hx[1] - 1) % p
        c_d = len(_gcd(fstar, _trim(hx), p)) - 1
        known = sum(e * m for e, m in found.items() if d % e == 0)
        m_d, rem = divmod(c_d - known, d)
        if rem:
            raise ArithmeticError("inconsistent distinct-degree counts")
        if m_d:
            found[d] = m_d
            counted += d * m_d
        if counted < nstar:
            vec = np.zeros(nstar, dtype=np.int64)
            vec[: len(hd)] = hd
            hd = _trim(((frob @ vec) % p).tolist())
        d += 1
    degrees = []
    for e in sorted(found):
        degrees.extend([e] * found[e])
    return tuple(degrees), squarefree


def falling_factorial(r: int, k: int) -> int:
    """r (r-1) ... (r-k+1); zero when r < k, one when k = 0."""
    out = 1
    for i in range(k):
        out *= r - i
        if out == 0:
            return 0
    return out


def mth_power_residues(p: int, m: int) -> set[int]:
    """The set {a^m mod p}; requires m | p - 1, cardinality (p-1)/m + 1."""
    if m < 2:
        raise ValueError("m must be >= 2")
    if (p - 1) % m:
        raise ValueError("m must divide p - 1")
    return {pow(a, m, p) for a in range(p)}


def moment_constant(k: int) -> int:
    """A(k) = sum_l binom(k, l)^2 l!; second moment of root-tuple counts."""
    return sum(math.comb(k, ell) ** 2 * math.factorial(ell) for ell in range(k + 1))
