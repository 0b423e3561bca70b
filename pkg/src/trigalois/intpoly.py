"""Exact integer polynomial arithmetic and tridiagonal characteristic polynomials.

Polynomials are dense, with arbitrary-precision integer coefficients stored in
ascending degree order.  The zero polynomial is the empty coefficient tuple and
has the sentinel degree -1.  Coefficients of characteristic polynomials grow
multiplicatively with the matrix dimension, so nothing here ever touches
floating point or fixed-width integers.
"""

from __future__ import annotations

import dataclasses
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .primes import nth_prime_below

ZERO_DEGREE = -1


@dataclasses.dataclass(init=False, eq=True, frozen=True)
class IntPoly:
    """Integer polynomial; ``coeffs[i]`` is the coefficient of x^i.

    >>> IntPoly([-1, 0, 1]).degree
    2
    """

    coeffs: tuple[int, ...]

    def __init__(self, coeffs: Iterable[int] = ()):
        cs = list(coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(int(c) for c in cs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1 if self.coeffs else ZERO_DEGREE

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def leading(self) -> int:
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def evaluate(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other: "IntPoly") -> "IntPoly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return IntPoly(out)

    def __neg__(self) -> "IntPoly":
        return IntPoly([-c for c in self.coeffs])

    def __sub__(self, other: "IntPoly") -> "IntPoly":
        return self + (-other)

    def __mul__(self, other) -> "IntPoly":
        if isinstance(other, int):
            return IntPoly([c * other for c in self.coeffs])
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return IntPoly()
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    out[i + j] += ai * bj
        return IntPoly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "IntPoly":
        if e < 0:
            raise ValueError("negative power")
        result = IntPoly([1])
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def divmod_exact(self, d: "IntPoly") -> tuple["IntPoly", "IntPoly"]:
        """Quotient and remainder; every leading-coefficient division must be exact."""
        if d.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        r = list(self.coeffs)
        dc = d.coeffs
        q = [0] * max(len(r) - len(dc) + 1, 0)
        while len(r) >= len(dc) and any(r):
            while r and r[-1] == 0:
                r.pop()
            if len(r) < len(dc):
                break
            t, rem = divmod(r[-1], dc[-1])
            if rem:
                raise ValueError("non-exact polynomial division")
            shift = len(r) - len(dc)
            q[shift] = t
            for i, c in enumerate(dc):
                r[shift + i] -= t * c
        return IntPoly(q), IntPoly(r)

    def derivative(self) -> "IntPoly":
        return IntPoly([i * c for i, c in enumerate(self.coeffs)][1:])

    def taylor_shift(self, c: int) -> "IntPoly":
        """Return P(x + c)."""
        out = IntPoly()
        lin = IntPoly([c, 1])
        for coeff in reversed(self.coeffs):
            out = out * lin + IntPoly([coeff])
        return out

    def __repr__(self) -> str:
        return f"IntPoly({list(self.coeffs)})"


@dataclasses.dataclass(frozen=True)
class TridiagMatrix:
    """Symmetric tridiagonal integer matrix: diagonal V_1..V_n, offdiagonal W_1..W_{n-1}."""

    diag: tuple[int, ...]
    offdiag: tuple[int, ...]

    def __init__(self, diag: Iterable[int], offdiag: Iterable[int] = ()):
        d = tuple(int(v) for v in diag)
        w = tuple(int(v) for v in offdiag)
        if len(w) != max(len(d) - 1, 0):
            raise ValueError(f"offdiag length {len(w)} != diag length {len(d)} - 1")
        object.__setattr__(self, "diag", d)
        object.__setattr__(self, "offdiag", w)

    @property
    def n(self) -> int:
        return len(self.diag)

    def dense(self) -> list[list[int]]:
        n = self.n
        m = [[0] * n for _ in range(n)]
        for i, v in enumerate(self.diag):
            m[i][i] = v
        for i, w in enumerate(self.offdiag):
            m[i][i + 1] = w
            m[i + 1][i] = w
        return m


def char_poly(m: TridiagMatrix) -> IntPoly:
    """det(x*Id - m) by the three-term recurrence P_k = (x - V_k) P_{k-1} - W_{k-1}^2 P_{k-2}.

    The scalar recurrence halves big-integer multiplications compared with 2x2
    transfer-matrix products; P_0 = 1 by the empty-product convention.
    """
    prev: list[int] = []      # P_{-1} = 0
    cur: list[int] = [1]      # P_0 = 1
    for k in range(m.n):
        v = m.diag[k]
        w2 = m.offdiag[k - 1] ** 2 if k >= 1 else 0
        nxt = [0] * (len(cur) + 1)
        for i, c in enumerate(cur):
            nxt[i + 1] += c
            nxt[i] -= v * c
        if w2:
            for i, c in enumerate(prev):
                nxt[i] -= w2 * c
        prev, cur = cur, nxt
    return IntPoly(cur)


def _det_bareiss(rows: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free Gaussian elimination."""
    n = len(rows)
    if n == 0:
        return 1
    m = [list(r) for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        for i in range(k + 1, n):
            mik = m[i][k]
            row_i = m[i]
            row_k = m[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pivot - mik * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return sign * m[n - 1][n - 1]


def char_poly_oracle(m: TridiagMatrix) -> IntPoly:
    """Independent characteristic polynomial: Bareiss determinants at n+1 points,
    then exact Newton interpolation.  Test oracle; never reads the recurrence path."""
    n = m.n
    if n == 0:
        return IntPoly([1])
    base = m.dense()
    xs = [j - n // 2 for j in range(n + 1)]
    vals = []
    for x in xs:
        rows = [[(x if i == j else 0) - base[i][j] for j in range(n)] for i in range(n)]
        vals.append(_det_bareiss(rows))
    # Newton divided differences, exact rational arithmetic.
    dd = [Fraction(v) for v in vals]
    coefs = [dd[0]]
    for level in range(1, n + 1):
        for i in range(n, level - 1, -1):
            dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - level])
        coefs.append(dd[level])
    poly = [Fraction(0)] * (n + 1)
    basis = [Fraction(1)]
    for i, c in enumerate(coefs):
        for j, b in enumerate(basis):
            poly[j] += c * b
        if i < n:
            new_basis = [Fraction(0)] * (len(basis) + 1)
            for j, b in enumerate(basis):
                new_basis[j + 1] += b
                new_basis[j] -= xs[i] * b
            basis = new_basis
    out = []
    for c in poly:
        if c.denominator != 1:
            raise ArithmeticError("interpolation produced a non-integer coefficient")
        out.append(c.numerator)
    return IntPoly(out)


def chebyshev_u(n: int) -> IntPoly:
    """Chebyshev polynomial of the second kind U_n, integer coefficients in y."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    prev = IntPoly([1])
    if n == 0:
        return prev
    cur = IntPoly([0, 2])
    two_y = IntPoly([0, 2])
    for _ in range(n - 1):
        prev, cur = cur, two_y * cur - prev
    return cur


def height(p: IntPoly) -> int:
    """Maximal absolute value of the coefficients."""
    if p.is_zero():
        raise ValueError("height of the zero polynomial is undefined")
    return max(abs(c) for c in p.coeffs)


def height_bound(m: TridiagMatrix) -> int:
    """Coarse a-priori bound (2 + max|V| + max|W|^2)^n on H(char_poly(m))."""
    base = 2
    if m.diag:
        base += max(abs(v) for v in m.diag)
    if m.offdiag:
        base += max(abs(w) for w in m.offdiag) ** 2
    return base ** m.n


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


def _formal_root(p: IntPoly, m: int) -> Optional[IntPoly]:
    """Monic q with q^m = p, found by coefficient matching from the top, or None."""
    n = p.degree
    if n % m:
        return None
    k = n // m
    # Work on the reversed polynomial as a power series with constant term 1.
    rev = [p.coeffs[n - i] for i in range(n + 1)]
    root = [1] + [0] * k
    for j in range(1, k + 1):
        # coefficient of y^j in root^m given root[j] = 0 so far
        partial = _series_pow(root, m, j)
        diff = rev[j] - partial
        if diff % m:
            return None
        root[j] = diff // m
    q = IntPoly(list(reversed(root)))
    return q


def _series_pow(series: list[int], m: int, upto: int) -> int:
    """Coefficient of y^upto in series(y)^m, truncated multiplication."""
    acc = [1] + [0] * upto
    for _ in range(m):
        nxt = [0] * (upto + 1)
        for i, a in enumerate(acc):
            if a:
                top = upto - i
                for j, b in enumerate(series[: top + 1]):
                    if b:
                        nxt[i + j] += a * b
        acc = nxt
    return acc[upto]


def is_perfect_power(p: IntPoly) -> Optional[tuple[int, IntPoly]]:
    """Maximal m >= 2 and witness q with p = q^m, verified by full expansion."""
    if not p.is_monic() or p.degree < 1:
        raise ValueError("expects a monic polynomial of degree >= 1")
    n = p.degree
    for ell in sorted(_prime_divisors(n), reverse=True):
        q = _formal_root(p, ell)
        if q is None:
            continue
        if q ** ell != p:
            continue
        deeper = None
        if q.degree >= 1:
            deeper = is_perfect_power(q)
        if deeper is not None:
            return ell * deeper[0], deeper[1]
        return ell, q
    return None


def _resultant_mod(f: Sequence[int], g: Sequence[int], q: int) -> int:
    """Res(f, g) over F_q by the Euclidean remainder sequence."""
    a = [c % q for c in f]
    b = [c % q for c in g]
    while a and a[-1] == 0:
        a.pop()
    while b and b[-1] == 0:
        b.pop()
    if not a or not b:
        return 0
    res = 1
    while True:
        da, db = len(a) - 1, len(b) - 1
        if db == 0:
            res = res * pow(b[0], da, q) % q
            return res
        # remainder of a by b
        inv = pow(b[-1], q - 2, q)
        r = list(a)
        for i in range(da, db - 1, -1):
            c = r[i] % q
            if c:
                t = c * inv % q
                for j in range(db + 1):
                    r[i - db + j] = (r[i - db + j] - t * b[j]) % q
        while r and r[-1] == 0:
            r.pop()
        if not r:
            return 0
        dr = len(r) - 1
        res = res * pow(b[-1], da - dr, q) % q
        if (da * db) & 1:
            res = q - res if res else 0
        a, b = b, r


def discriminant(p: IntPoly) -> int:
    """(-1)^{n(n-1)/2} Res(p, p') for monic p, by CRT over word-size primes.

    The modulus product exceeds twice the Hadamard-type bound 2 n^n H^{2n-1};
    the reconstruction is re-verified at one extra prime.
    """
    if not p.is_monic() or p.degree < 1:
        raise ValueError("expects a monic polynomial of degree >= 1")
    n = p.degree
    if n == 1:
        return 1
    dp = p.derivative()
    h = height(p)
    bound = 2 * n**n * h ** (2 * n - 1)
    target = 2 * bound + 1

    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    residues: list[int] = []
    moduli: list[int] = []
    prod = 1
    q = 1 << 62
    while prod < target:
        q = nth_prime_below(q)
        residues.append(sign * _resultant_mod(p.coeffs, dp.coeffs, q) % q)
        moduli.append(q)
        prod *= q
    # CRT, then symmetric lift
    x = 0
    m_acc = 1
    for r, q_i in zip(residues, moduli):
        inc = (r - x) * pow(m_acc, -1, q_i) % q_i
        x += m_acc * inc
        m_acc *= q_i
    if x > m_acc // 2:
        x -= m_acc
    # verification prime beyond the bound
    q = nth_prime_below(q)
    if x % q != sign * _resultant_mod(p.coeffs, dp.coeffs, q) % q:
        raise ArithmeticError("discriminant CRT verification failed")
    return x
