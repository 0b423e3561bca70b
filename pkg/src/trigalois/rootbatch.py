"""Vectorized per-prime root counting for one fixed integer polynomial.

Counting distinct roots of P mod p needs deg gcd(x^p - x, P mod p).  Doing
that prime by prime in Python is the bottleneck of the Chebotarev estimator,
so this kernel carries all primes of a range through the same square-and-
multiply and Euclid schedule simultaneously: coefficients live in an
(m, n+1) int64 array with a per-row modulus, exponent bits are handled with
row masks, and the gcd runs as a synchronized elimination with per-row shifts.

Squaring uses batched real FFT when the a-priori roundoff bound stays far
below 1/2 (convolution values are at most (n+1) p^2, exact integers), and a
sliced int64 accumulation otherwise.  Degree reduction is one einsum against
the precomputed table of x^{n+j} mod f.  The scalar path in modp is the
reference implementation the tests compare against.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

# slice path overflow guard: (n+1) * p^2 must fit comfortably in int64
_INT64_LIMIT = 1 << 62
# FFT path roundoff guard: error ~ log2(N) * eps * (n+1) p^2 must be << 1/2
_FFT_LIMIT = 1 << 49


def reduce_rows(coeffs: Sequence[int], primes: np.ndarray) -> np.ndarray:
    """(m, n+1) array of coefficients reduced per row modulus."""
    m = primes.shape[0]
    out = np.empty((m, len(coeffs)), dtype=np.int64)
    plist = primes.tolist()
    for i, c in enumerate(coeffs):
        c = int(c)
        if -(1 << 62) < c < (1 << 62):
            out[:, i] = c % primes
        else:
            out[:, i] = [c % q for q in plist]
    return out


def _degrees(a: np.ndarray) -> np.ndarray:
    """Degree per row, -1 for zero rows."""
    nz = a != 0
    deg = a.shape[1] - 1 - np.argmax(nz[:, ::-1], axis=1)
    deg[~nz.any(axis=1)] = -1
    return deg


def _modpow(base: np.ndarray, exp: np.ndarray, mod: np.ndarray) -> np.ndarray:
    """Per-row base^exp mod mod for int64 vectors."""
    result = np.ones_like(base)
    b = base % mod
    e = exp.copy()
    while np.any(e > 0):
        odd = (e & 1).astype(bool)
        result[odd] = result[odd] * b[odd] % mod[odd]
        b = b * b % mod
        e >>= 1
    return result


class _RowReducer:
    """Per-row quotient-ring helper for a batch of monic moduli of equal degree."""

    def __init__(self, f: np.ndarray, primes: np.ndarray):
        m, width = f.shape
        n = width - 1
        if n < 1:
            raise ValueError("modulus degree must be >= 1")
        pmax = int(primes.max())
        if (n + 1) * pmax * pmax >= _INT64_LIMIT:
            raise ValueError("prime too large for the int64 kernel")
        self.f = f
        self.primes = primes
        self.n = n
        self.use_fft = (n + 1) * pmax * pmax < _FFT_LIMIT
        self.fft_size = 1 << (2 * n - 1).bit_length()
        # xpows[j] = x^{n+j} mod f, for j = 0 .. n-2
        xp = np.empty((m, max(n - 1, 1), n), dtype=np.int64)
        cur = (-f[:, :n]) % primes[:, None]
        xp[:, 0] = cur
        for j in range(1, n - 1):
            top = cur[:, n - 1]
            shifted = np.zeros_like(cur)
            shifted[:, 1:] = cur[:, : n - 1]
            cur = (shifted + top[:, None] * xp[:, 0]) % primes[:, None]
            xp[:, j] = cur
        self.xpows = xp

    def reduce_wide(self, wide: np.ndarray) -> np.ndarray:
        """Reduce a width 2n-1 coefficient block below degree n, mod p per row."""
        n = self.n
        upper = wide[:, n:] % self.primes[:, None]
        out = wide[:, :n] + np.einsum("mj,mjn->mn", upper, self.xpows[:, : n - 1])
        return out % self.primes[:, None]

    def square(self, r: np.ndarray) -> np.ndarray:
        return self.mul(r, r)

    def mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        n = self.n
        if n == 1:
            return a * b % self.primes[:, None]
        if self.use_fft:
            sa = np.fft.rfft(a.astype(np.float64), n=self.fft_size, axis=1)
            sb = sa if a is b else np.fft.rfft(b.astype(np.float64), n=self.fft_size, axis=1)
            wide_f = np.fft.irfft(sa * sb, n=self.fft_size, axis=1)[:, : 2 * n - 1]
            wide = np.rint(wide_f).astype(np.int64)
        else:
            m = a.shape[0]
            wide = np.zeros((m, 2 * n - 1), dtype=np.int64)
            buf = np.empty((m, n), dtype=np.int64)
            for i in range(n):
                np.multiply(a[:, i : i + 1], b, out=buf)
                wide[:, i : i + n] += buf
            wide[:, n:] %= self.primes[:, None]
        return self.reduce_wide(wide)

    def mul_x(self, r: np.ndarray) -> np.ndarray:
        out = np.zeros_like(r)
        out[:, 1:] = r[:, :-1]
        out += r[:, self.n - 1 : self.n] * self.xpows[:, 0]
        return out % self.primes[:, None]


def xpow_rows(f: np.ndarray, primes: np.ndarray) -> np.ndarray:
    """x^p mod f per row, f monic of degree n, exponent = the row's own modulus."""
    red = _RowReducer(f, primes)
    m = f.shape[0]
    r = np.zeros((m, red.n), dtype=np.int64)
    r[:, 0] = 1
    nbits = int(primes.max()).bit_length()
    for bit in range(nbits - 1, -1, -1):
        r = red.square(r)
        mask = (primes >> bit) & 1 == 1
        if mask.any():
            r = np.where(mask[:, None], red.mul_x(r), r)
    return r


def gcd_degrees(a0: np.ndarray, b0: np.ndarray, primes: np.ndarray) -> np.ndarray:
    """deg gcd(a, b) per row; a, b given as equally wide coefficient arrays."""
    m, width = a0.shape
    pad = width - b0.shape[1]
    if pad:
        b0 = np.concatenate([b0, np.zeros((m, pad), dtype=np.int64)], axis=1)
    a = a0 % primes[:, None]
    b = b0 % primes[:, None]
    da = _degrees(a)
    db = _degrees(b)
    sw = da < db
    if sw.any():
        a[sw], b[sw] = b[sw], a[sw].copy()
        da[sw], db[sw] = db[sw], da[sw].copy()
    result = np.where(db < 0, da, -1)
    active = db >= 0

    def normalize(rows):
        lc = np.take_along_axis(b[rows], db[rows][:, None], axis=1)[:, 0]
        inv = _modpow(lc, primes[rows] - 2, primes[rows])
        b[rows] = b[rows] * inv[:, None] % primes[rows][:, None]

    if active.any():
        normalize(active)
    cols = np.arange(width)
    guard = 0
    while active.any():
        guard += 1
        if guard > 4 * width + 64:
            raise RuntimeError("batched gcd failed to terminate")
        idx = np.flatnonzero(active)
        sa, sb = a[idx], b[idx]
        pda, pdb = da[idx], db[idx]
        pp = primes[idx]
        lca = np.take_along_axis(sa, pda[:, None], axis=1)[:, 0]
        shift = pda - pdb
        pos = shift[:, None] + cols[None, :]
        np.clip(pos, 0, width - 1, out=pos)
        vals = np.take_along_axis(sa, pos, axis=1)
        vals = (vals - lca[:, None] * sb) % pp[:, None]
        np.put_along_axis(sa, pos, vals, axis=1)
        # the top term cancels by construction; walk the degree down
        pda -= 1
        while True:
            top = np.take_along_axis(sa, np.clip(pda, 0, None)[:, None], axis=1)[:, 0]
            drop = (pda >= 0) & (top == 0)
            if not drop.any():
                break
            pda[drop] -= 1
        a[idx], da[idx] = sa, pda
        done = pda < 0
        if done.any():
            gi = idx[done]
            result[gi] = db[gi]
            active[gi] = False
        swap = (~done) & (pda < pdb)
        if swap.any():
            si = idx[swap]
            a[si], b[si] = b[si], a[si].copy()
            da[si], db[si] = db[si], da[si].copy()
            normalize(si)
    return result


def root_counts(coeffs: Sequence[int], primes: Sequence[int]) -> np.ndarray:
    """Distinct-root counts of a monic integer polynomial modulo each prime."""
    p = np.asarray(primes, dtype=np.int64)
    if p.size == 0:
        return np.zeros(0, dtype=np.int64)
    n = len(coeffs) - 1
    if n < 1 or coeffs[-1] != 1:
        raise ValueError("expects a monic polynomial of degree >= 1")
    if n == 1:
        return np.ones(p.shape[0], dtype=np.int64)
    f = reduce_rows(coeffs, p)
    h = xpow_rows(f, p)
    h[:, 1] = (h[:, 1] - 1) % p
    return gcd_degrees(f, h, p)


def _prime_divisors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def rabin_irreducible(coeffs: Sequence[int], primes: Sequence[int]) -> np.ndarray:
    """Boolean mask: is the monic polynomial irreducible modulo each prime?"""
    _, _, irr, _ = chunk_scan(coeffs, primes, ())
    return irr


def chunk_scan(
    coeffs: Sequence[int], primes: Sequence[int], window: Sequence[int]
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Per-prime scan of one monic polynomial: distinct-root counts, a
    square-free mask, Rabin irreducibility, and the smallest window degree
    present in the factor pattern (0 if none).

    All Frobenius powers x^(p^d) advance by one product with the per-row
    Frobenius matrix (columns h^i, h = x^p).  Rabin's criterion checks
    x^(p^n) = x with trivial gcds at the maximal proper divisors of n.  For a
    prime window degree q > n/2, a factor of degree q exists exactly when
    deg gcd(x^(p^q) - x, f) exceeds the root count (the only smaller divisor
    of q is 1); that certificate is only claimed on square-free rows.
    """
    p = np.asarray(primes, dtype=np.int64)
    n = len(coeffs) - 1
    if n < 1 or coeffs[-1] != 1:
        raise ValueError("expects a monic polynomial of degree >= 1")
    window = sorted(set(window))
    if any(w <= n // 2 or w > n or not _is_small_prime(w) for w in window):
        raise ValueError("window degrees must be primes in (n/2, n]")
    if p.size == 0:
        z = np.zeros(0, dtype=np.int64)
        return z, z.astype(bool), z.astype(bool), z
    m = p.shape[0]
    if n == 1:
        ones = np.ones(m, dtype=np.int64)
        return ones, np.ones(m, dtype=bool), np.ones(m, dtype=bool), np.zeros(m, dtype=np.int64)
    f = reduce_rows(coeffs, p)
    deriv = (f[:, 1:] * np.arange(1, n + 1, dtype=np.int64)[None, :]) % p[:, None]
    squarefree = gcd_degrees(f, deriv, p) == 0
    red = _RowReducer(f, p)
    h = xpow_rows(f, p)
    x_vec = np.zeros((m, n), dtype=np.int64)
    x_vec[:, 1] = 1
    roots = gcd_degrees(f, (h - x_vec) % p[:, None], p)
    frob = np.zeros((m, n, n), dtype=np.int64)
    frob[:, 0, 0] = 1
    col = h.copy()
    frob[:, :, 1] = col
    for i in range(2, n):
        col = red.mul(col, h)
        frob[:, :, i] = col
    rabin_checks = sorted({n // ell for ell in _prime_divisors(n)})
    irr = np.ones(m, dtype=bool)
    if 1 in rabin_checks:
        irr &= roots == 0
    window_deg = np.zeros(m, dtype=np.int64)
    g = h
    for d in range(2, n + 1):
        g = np.einsum("mij,mj->mi", frob, g) % p[:, None]
        if d not in rabin_checks and d not in window:
            continue
        cd = gcd_degrees(f, (g - x_vec) % p[:, None], p)
        if d in rabin_checks:
            irr &= cd == 0
        if d in window:
            hit = squarefree & (cd > roots) & (window_deg == 0)
            window_deg[hit] = d
    irr &= (g == x_vec).all(axis=1)
    return roots, squarefree, irr, window_deg


def _is_small_prime(k: int) -> bool:
    if k < 2:
        return False
    return all(k % d for d in range(2, int(k**0.5) + 1))
