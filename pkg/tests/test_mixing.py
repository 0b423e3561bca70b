from fractions import Fraction

import numpy as np
import pytest

from trigalois.mixing import (
    build_chain,
    d_k,
    decay_curve,
    decomposition_check,
    evolve,
    group_index,
    second_eigenvalue,
)
from trigalois.mixing import _convolve, _gather_perms, _inverse_law
from trigalois.model import ModelConfig
from trigalois.psl2 import cayley_diameter, group_order

HALF = Fraction(1, 2)
BERN = ModelConfig("iid-diag", 40, ((0, HALF), (1, HALF)))


def dense_matrix(spec):
    idx = group_index(spec.primes)
    m = np.zeros((idx.order, idx.order))
    for inv, w in _gather_perms(spec, idx):
        m[np.arange(idx.order), inv] += float(w)
    return m


def test_chain1_increments():
    c1 = build_chain(BERN, 1, (5,), (0,))
    assert len(c1.increments) == 2
    assert all(w == HALF for _, w in c1.increments)


def test_chain2_is_cube_and_chain3_is_adjoint_square():
    c1 = build_chain(BERN, 1, (5,), (0,))
    c2 = build_chain(BERN, 2, (5,), (0,))
    c3 = build_chain(BERN, 3, (5,), (0,))
    q1 = c1.increment_dict()
    q2 = _convolve(_convolve(q1, q1), q1)
    assert q2 == c2.increment_dict()
    assert _convolve(_inverse_law(q2), q2) == c3.increment_dict()
    m2, m3 = dense_matrix(c2), dense_matrix(c3)
    assert np.allclose(m3, m2.T @ m2, atol=1e-14)
    assert np.allclose(m3, m3.T, atol=1e-14)


def test_chain4_symmetric_and_alpha():
    c4 = build_chain(BERN, 4, (5,), (0,))
    assert c4.alpha == HALF
    m4 = dense_matrix(c4)
    assert np.allclose(m4, m4.T, atol=1e-14)
    assert np.allclose(m4.sum(axis=0), 1.0)
    assert np.allclose(m4.sum(axis=1), 1.0)


def test_evolve_basics():
    c1 = build_chain(BERN, 1, (5,), (0,))
    v0 = evolve(c1, 0)
    assert v0.values[0] == 1.0 and v0.values.sum() == 1.0
    v1 = evolve(c1, 1, exact=True)
    assert sorted(x for x in v1 if x) == [HALF, HALF]
    vf = evolve(c1, 37)
    assert abs(vf.values.sum() - 1.0) < 1e-12
    assert vf.err_bound < 1e-9


def test_dk_at_zero():
    c1 = build_chain(BERN, 1, (5,), (0,))
    assert d_k(c1, 0, exact=True) == Fraction(59, 30)
    assert abs(d_k(c1, 0) - float(Fraction(59, 30))) < 1e-14


def test_dk_golden_crossing():
    c1 = build_chain(BERN, 1, (5,), (0,))
    curve = decay_curve(c1, 130)
    assert curve[116] > 1e-3 > curve[117]  # frozen by the pre-build run


def test_chain3_monotone_decay():
    c3 = build_chain(BERN, 3, (7,), (2,))
    curve = decay_curve(c3, 120)
    assert all(curve[i + 1] <= curve[i] + 1e-13 for i in range(len(curve) - 1))


def test_uniform_is_stationary_exact():
    idx = group_index((5,))
    for cid in (1, 2, 3, 4):
        spec = build_chain(BERN, cid, (5,), (0,))
        u = [Fraction(1, idx.order)] * idx.order
        new = [Fraction(0)] * idx.order
        for inv, w in _gather_perms(spec, idx):
            lst = inv.tolist()
            for j in range(idx.order):
                new[j] += w * u[lst[j]]
        assert new == u


def test_float_matches_exact_200_steps():
    c1 = build_chain(BERN, 1, (5,), (0,))
    exact = evolve(c1, 200, exact=True)
    approx = evolve(c1, 200)
    err = max(abs(float(a) - b) for a, b in zip(exact, approx.values))
    assert err < 1e-9


def test_second_eigenvalue_uniform_chain_is_zero():
    # increments uniform over the whole group: one-step stationary
    from trigalois.mixing import ChainSpec
    from trigalois.psl2 import PSL2Elem

    group = set()
    p = 5
    for a in range(p):
        for b in range(p):
            for c in range(p):
                for d in range(p):
                    if (a * d - b * c) % p == 1:
                        group.add(PSL2Elem.from_entries(p, a, b, c, d))
    group = sorted(group, key=lambda g: (g.a, g.b, g.c, g.d))
    w = Fraction(1, len(group))
    spec = ChainSpec((5,), (0,), 3, tuple(((g,), w) for g in group), Fraction(1, 2))
    assert second_eigenvalue(spec) < 1e-8


def test_second_eigenvalue_vs_dense():
    for cid in (3, 4):
        spec = build_chain(BERN, cid, (7,), (1,))
        got = second_eigenvalue(spec)
        m = dense_matrix(spec)
        ev = np.linalg.eigvalsh(m)
        want = max(abs(ev[0]), abs(ev[-2]))
        assert abs(got - want) < 1e-8


def test_singular_value_for_chain1():
    spec = build_chain(BERN, 1, (5,), (0,))
    got = second_eigenvalue(spec)
    m = dense_matrix(spec)
    # second singular value = top singular value restricted to 1-perp
    n = m.shape[0]
    proj = np.eye(n) - np.ones((n, n)) / n
    sv = np.linalg.svd(m @ proj, compute_uv=False)
    assert abs(got - sv[0]) < 1e-8


def test_dsc_bound_chains():
    for p in (5, 7):
        c3 = build_chain(BERN, 3, (p,), (0,))
        c4 = build_chain(BERN, 4, (p,), (0,))
        diam = cayley_diameter(c4.support())
        bound4 = 1 - 1 / (64 * diam * diam)
        assert second_eigenvalue(c4) <= bound4 + 1e-9
        alpha = float(c3.alpha)
        assert second_eigenvalue(c3) <= 1 - alpha / (64 * diam * diam) + 1e-9


def test_decomposition_check():
    c3 = build_chain(BERN, 3, (5,), (0,))
    c4 = build_chain(BERN, 4, (5,), (0,))
    ok, info = decomposition_check(c3, c4)
    assert ok and info["alpha"] == HALF and info["residual_mass"] == 1
    with pytest.raises(ValueError):
        decomposition_check(c4, c3)


def test_decomposition_three_atom_model():
    cfg = ModelConfig(
        "iid-diag",
        10,
        ((0, Fraction(2, 5)), (1, Fraction(2, 5)), (2, Fraction(1, 5))),
    )
    c3 = build_chain(cfg, 3, (5,), (0,))
    c4 = build_chain(cfg, 4, (5,), (0,))
    ok, info = decomposition_check(c3, c4)
    assert info["alpha"] == Fraction(2, 5)
    assert ok  # domination holds at alpha = 2/5 for this table


def test_pi2_norm_decay_envelope():
    # || Pi2^n w || <= exp(-alpha n / (128 diam^2)) with the measured diameter
    spec2 = build_chain(BERN, 2, (5,), (0,))
    c4 = build_chain(BERN, 4, (5,), (0,))
    diam = cayley_diameter(c4.support())
    m2 = dense_matrix(spec2)
    n = m2.shape[0]
    rng = np.random.default_rng(1)
    w = rng.standard_normal(n)
    w -= w.mean()
    w /= np.linalg.norm(w)
    alpha = 0.5
    for steps in (1, 5, 20, 60):
        acc = w.copy()
        for _ in range(steps):
            acc = m2 @ acc
        assert np.linalg.norm(acc) <= np.exp(-alpha * steps / (128 * diam**2)) + 1e-12


def test_state_cap():
    with pytest.raises(ValueError):
        group_index((101, 101))


def test_dyson_chain_rejects_divisible_weight():
    cfg = ModelConfig("dyson", 10, offdiag_table=((5, HALF), (2, HALF)))
    with pytest.raises(ValueError):
        build_chain(cfg, 1, (5,), (1,))
