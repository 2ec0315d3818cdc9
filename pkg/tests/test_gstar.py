from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, strategies as st

from holonomy import gstar
from holonomy.errors import DecompositionError, DomainError
from holonomy.gstar import (GStarPoint, PoissonPoly, big_I, braid, braid_inv, braid_check,
                            classical_tau, dress, gauss, ginv, gmul, partner, pbracket,
                            random_sl2)

seeds = st.integers(0, 2 ** 32 - 1)


def _sl2(seed, scale=0.3):
    return random_sl2(np.random.default_rng(seed), scale)


@given(seeds)
def test_gauss_roundtrip_both_branches(seed):
    g = _sl2(seed, 0.6)
    p, m = gauss(g, 1), gauss(g, -1)
    assert np.abs(big_I(p) - g).max() < 1e-12
    assert np.abs(big_I(m) - g).max() < 1e-12
    assert np.allclose(m.coords, -p.coords)


def test_gauss_errors():
    with pytest.raises(DecompositionError):
        gauss(np.array([[0, 1], [-1, 0]]))
    with pytest.raises(DomainError):
        gauss(np.array([[2, 0], [0, 2]]))


@given(seeds)
def test_group_law(seed):
    rng = np.random.default_rng(seed)
    p, q, r = (gauss(random_sl2(rng, 0.3)) for _ in range(3))
    lhs, rhs = gmul(gmul(p, q), r), gmul(p, gmul(q, r))
    assert np.allclose(lhs.coords, rhs.coords, atol=1e-12)
    e = gmul(p, ginv(p))
    assert np.allclose(e.coords, [1, 0, 0], atol=1e-12)


@given(seeds)
def test_braid_relation_and_inverse(seed):
    rng = np.random.default_rng(seed)
    x, y, z = (random_sl2(rng, 0.2) for _ in range(3))
    assert braid_check(x, y, z) < 1e-9
    px, py = gauss(x), gauss(y)
    u, v = braid(px, py)
    a, b = braid_inv(u, v)
    assert np.allclose(a.coords, px.coords, atol=1e-12)
    assert np.allclose(b.coords, py.coords, atol=1e-12)


@given(seeds)
def test_braid_matches_matrix_formulas(seed):
    rng = np.random.default_rng(seed)
    x, y = random_sl2(rng, 0.2), random_sl2(rng, 0.2)
    u, v = braid(gauss(x), gauss(y))
    assert np.allclose(big_I(u), gstar.xL(x, y), atol=1e-12)
    assert np.allclose(big_I(v), gstar.xR(x, y), atol=1e-12)


@given(seeds)
def test_gstar_product_conserved(seed):
    rng = np.random.default_rng(seed)
    x, y = random_sl2(rng, 0.3), random_sl2(rng, 0.3)
    assert gstar.gstar_product_defect(x, y) < 1e-12


def test_matrix_product_not_conserved(rng):
    # the SL2 product is not an invariant of the braiding; recorded, not assumed
    x, y = random_sl2(rng, 0.3), random_sl2(rng, 0.3)
    assert gstar.product_defect(x, y) > 1e-4


@given(seeds)
def test_partner_is_fixed(seed):
    x = gauss(_sl2(seed))
    y = partner(x)
    u, v = braid(x, y)
    assert np.allclose(u.coords, x.coords, atol=1e-12)
    assert np.allclose(v.coords, y.coords, atol=1e-12)


@given(seeds)
def test_dress_conjugates(seed):
    rng = np.random.default_rng(seed)
    x = gauss(random_sl2(rng, 0.3))
    g = random_sl2(rng, 0.2)
    y = dress(g, x)
    assert np.allclose(big_I(y), g @ big_I(x) @ np.linalg.inv(g), atol=1e-12)
    # the continued branch, not its negative
    assert abs(y.k - x.k) < abs(y.k + x.k)


def test_dress_identity(rng):
    x = gauss(random_sl2(rng, 0.3))
    assert np.allclose(dress(np.eye(2), x).coords, x.coords)


def test_poisson_brackets():
    k, e, f = (PoissonPoly.gen(n) for n in "kef")
    assert pbracket(k, k).is_zero()
    assert pbracket(e, f) == k ** 2 - PoissonPoly.gen("k", -2)
    assert pbracket(k, e) == k * e
    for a in (k, e, f):
        for b in (k, e, f):
            assert pbracket(a, b) == -pbracket(b, a)
            for c in (k, e, f):
                s = pbracket(a, pbracket(b, c)) + pbracket(b, pbracket(c, a)) \
                    + pbracket(c, pbracket(a, b))
                assert s.is_zero()


def test_tau_is_poisson_automorphism():
    gens = [PoissonPoly.gen(n) for n in "kef"]
    assert classical_tau(gens[1]) == -(gens[2] * PoissonPoly.gen("k", -2))
    assert classical_tau(gens[2]) == -(gens[1] * gens[0] ** 2)
    mons = gens + [gens[0] * gens[1], gens[1] * gens[2], gens[0] ** 2 * gens[2]]
    for a in mons:
        for b in mons:
            assert classical_tau(pbracket(a, b)) == pbracket(classical_tau(a), classical_tau(b))


def test_point_json_roundtrip(rng):
    p = gauss(random_sl2(rng, 0.3), -1)
    assert GStarPoint.from_json(p.to_json()) == p
    g = big_I(p)
    assert np.allclose(gstar.mat2_from_json(gstar.mat2_to_json(g)), g)


def test_braid_with_identity(rng):
    x = random_sl2(rng, 0.3)
    one = np.eye(2)
    assert np.allclose(gstar.xR(one, one), one)
    assert np.allclose(gstar.xL(x, one), one)
    assert np.allclose(gstar.xR(x, one), x)
    assert gstar.braid_check(one, one, one) == 0
