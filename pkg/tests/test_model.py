from fractions import Fraction

import pytest

from trigalois.model import (
    ModelConfig,
    SplitMix64,
    Xoshiro256StarStar,
    sample,
    stream_seed,
)


HALF = Fraction(1, 2)


def test_splitmix64_reference_vector():
    sm = SplitMix64(0)
    assert sm.next() == 0xE220A8397B1DCDAF
    assert sm.next() == 0x6E789E6AA1B965F4
    assert sm.next() == 0x06C45D188009454F


def test_xoshiro_determinism_and_range():
    a = Xoshiro256StarStar(42)
    b = Xoshiro256StarStar(42)
    va = [a.next_u64() for _ in range(100)]
    vb = [b.next_u64() for _ in range(100)]
    assert va == vb
    assert all(0 <= v < 1 << 64 for v in va)
    assert all(0 <= (v >> 11) < 1 << 53 for v in va)


def test_stream_seed_distinct_per_index():
    seeds = {stream_seed(99, i) for i in range(1000)}
    assert len(seeds) == 1000


def test_sample_determinism():
    cfg = ModelConfig("iid-diag", 50, ((0, HALF), (1, HALF)))
    d1 = sample(cfg, 7, 3)
    d2 = sample(cfg, 7, 3)
    assert d1 == d2
    assert d1.offdiag == tuple([1] * 49)
    assert sample(cfg, 7, 4) != d1


def test_sample_empirical_mean():
    cfg = ModelConfig("iid-diag", 10_000, ((0, HALF), (1, HALF)))
    draw = sample(cfg, 123, 0)
    mean = sum(draw.diag) / len(draw.diag)
    assert 0.47 <= mean <= 0.53


def test_weighted_sampling():
    cfg = ModelConfig("iid-diag", 20_000, ((0, Fraction(3, 4)), (5, Fraction(1, 4))))
    draw = sample(cfg, 5, 0)
    frac5 = sum(1 for v in draw.diag if v == 5) / len(draw.diag)
    assert 0.22 <= frac5 <= 0.28
    assert set(draw.diag) == {0, 5}


def test_dyson_sampling():
    cfg = ModelConfig(
        "dyson", 30, offdiag_table=((1, HALF), (2, HALF)), a=3
    )
    draw = sample(cfg, 11, 2)
    assert draw.diag == tuple([3] * 30)
    assert set(draw.offdiag) <= {1, 2} and len(draw.offdiag) == 29
    m = draw.matrix()
    assert m.diag == draw.diag


def test_config_validation():
    with pytest.raises(ValueError):
        ModelConfig("iid-diag", 5, ((0, Fraction(1, 1)),))  # single atom
    with pytest.raises(ValueError):
        ModelConfig("iid-diag", 5, ((0, HALF), (1, Fraction(1, 3))))  # sum != 1
    with pytest.raises(ValueError):
        ModelConfig("dyson", 5, offdiag_table=((0, HALF), (1, HALF)))  # zero weight value
    with pytest.raises(ValueError):
        ModelConfig("other", 5, ((0, HALF), (1, HALF)))


def test_top_two_atoms_and_alpha():
    cfg = ModelConfig(
        "iid-diag",
        5,
        ((3, Fraction(1, 5)), (0, Fraction(3, 5)), (7, Fraction(1, 5))),
    )
    (v1, w1), (v2, w2) = cfg.top_two_atoms()
    assert (v1, w1) == (0, Fraction(3, 5))
    assert (v2, w2) == (3, Fraction(1, 5))  # value tie broken upward
    assert cfg.alpha() == Fraction(1, 5)
