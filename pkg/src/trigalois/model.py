"""Model configurations and bit-exact reproducible sampling.

The two matrix families are `iid-diag` (random integer diagonal, unit
offdiagonal) and `dyson` (constant diagonal `a`, random positive offdiagonal
weights).  Draws are generated by xoshiro256** seeded through SplitMix64 from
(master_seed, sample index), so every draw is reproducible bit for bit across
platforms and thread counts.
"""

from __future__ import annotations

import dataclasses
from fractions import Fraction
from typing import Sequence

from .intpoly import TridiagMatrix

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


class SplitMix64:
    """Standard SplitMix64 stream, used only to seed xoshiro."""

    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next(self) -> int:
        self.state = (self.state + _GOLDEN) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)


class Xoshiro256StarStar:
    """xoshiro256** with 53-bit uniform output for discrete inversion."""

    def __init__(self, seed: int):
        sm = SplitMix64(seed)
        self.s = [sm.next() for _ in range(4)]

    @staticmethod
    def _rotl(x: int, k: int) -> int:
        return ((x << k) | (x >> (64 - k))) & _MASK

    def next_u64(self) -> int:
        s = self.s
        result = (self._rotl((s[1] * 5) & _MASK, 7) * 9) & _MASK
        t = (s[1] << 17) & _MASK
        s[2] ^= s[0]
        s[3] ^= s[1]
        s[1] ^= s[2]
        s[0] ^= s[3]
        s[2] ^= t
        s[3] = self._rotl(s[3], 45)
        return result

    def next_u53(self) -> int:
        return self.next_u64() >> 11


def stream_seed(master_seed: int, index: int) -> int:
    """Per-sample stream seed: master_seed XOR (index+1) * golden ratio."""
    return (master_seed ^ ((index + 1) * _GOLDEN)) & _MASK


@dataclasses.dataclass(frozen=True)
class ModelConfig:
    """Distribution tables for one matrix family.

    kind "iid-diag": diag entries sampled from diag_table, offdiagonal = 1.
    kind "dyson": diag constant `a`, |W| sampled from offdiag_table (> 0).
    Weights are exact rationals and must sum to 1.
    """

    kind: str
    n: int
    diag_table: tuple[tuple[int, Fraction], ...] = ()
    offdiag_table: tuple[tuple[int, Fraction], ...] = ()
    a: int = 0

    def __post_init__(self):
        if self.kind not in ("iid-diag", "dyson"):
            raise ValueError(f"unknown model kind {self.kind!r}")
        if self.n < 0:
            raise ValueError("n must be nonnegative")
        if self.kind == "iid-diag":
            _check_table(self.diag_table, "diag")
            if len(self.diag_table) < 2:
                raise ValueError("iid-diag needs a non-constant diagonal distribution")
        else:
            _check_table(self.offdiag_table, "offdiag")
            if len(self.offdiag_table) < 2:
                raise ValueError("dyson needs a non-degenerate offdiagonal distribution")
            if any(v <= 0 for v, _ in self.offdiag_table):
                raise ValueError("dyson offdiagonal support must be positive integers")

    def active_table(self) -> tuple[tuple[int, Fraction], ...]:
        return self.diag_table if self.kind == "iid-diag" else self.offdiag_table

    def top_two_atoms(self) -> tuple[tuple[int, Fraction], tuple[int, Fraction]]:
        """The two heaviest atoms (ties broken by value), i.e. the pair whose
        smaller mass realizes the second-largest-probability bound."""
        table = sorted(self.active_table(), key=lambda t: (-t[1], t[0]))
        return table[0], table[1]

    def alpha(self) -> Fraction:
        a1, a2 = self.top_two_atoms()
        return min(a1[1], a2[1])


def _check_table(table, name: str):
    if not table:
        raise ValueError(f"{name} table is empty")
    total = Fraction(0)
    seen = set()
    for value, weight in table:
        if weight <= 0:
            raise ValueError(f"{name} weights must be positive")
        if value in seen:
            raise ValueError(f"duplicate {name} value {value}")
        seen.add(value)
        total += weight
    if total != 1:
        raise ValueError(f"{name} weights sum to {total}, expected 1")


@dataclasses.dataclass(frozen=True)
class SampleDraw:
    """One reproducible matrix draw."""

    master_seed: int
    index: int
    diag: tuple[int, ...]
    offdiag: tuple[int, ...]

    def matrix(self) -> TridiagMatrix:
        return TridiagMatrix(self.diag, self.offdiag)


def _thresholds(table: Sequence[tuple[int, Fraction]]) -> list[tuple[int, int]]:
    """Cumulative 53-bit integer thresholds for inversion sampling."""
    out = []
    acc = Fraction(0)
    for value, weight in table:
        acc += weight
        out.append((value, (acc.numerator << 53) // acc.denominator))
    out[-1] = (out[-1][0], 1 << 53)
    return out


def sample(cfg: ModelConfig, master_seed: int, index: int) -> SampleDraw:
    """Draw matrix entries for one sample; bit-exact for fixed inputs."""
    rng = Xoshiro256StarStar(stream_seed(master_seed, index))

    def draw_from(thresholds):
        u = rng.next_u53()
        for value, t in thresholds:
            if u < t:
                return value
        return thresholds[-1][0]

    if cfg.kind == "iid-diag":
        thr = _thresholds(cfg.diag_table)
        diag = tuple(draw_from(thr) for _ in range(cfg.n))
        offdiag = tuple([1] * max(cfg.n - 1, 0))
    else:
        thr = _thresholds(cfg.offdiag_table)
        diag = tuple([cfg.a] * cfg.n)
        offdiag = tuple(draw_from(thr) for _ in range(max(cfg.n - 1, 0)))
    return SampleDraw(master_seed, index, diag, offdiag)
