from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from holonomy.cyclicrep import (CentralChar, build, casimir_check, casimir_lifts, dual,
                                hom_space, intertwiner, rep_at, tensor_ops)
from holonomy.errors import GenericityError, LiftError
from holonomy.gstar import gauss, ginv, random_sl2
from holonomy.suites import random_char, random_elem

seeds = st.integers(0, 2 ** 32 - 1)


@pytest.mark.parametrize("l", [3, 5])
@given(seed=seeds)
def test_rep_contract(l, seed):
    rng = np.random.default_rng(seed)
    r = build(random_char(rng, l))
    assert r.relation_residual() < 1e-11
    assert r.power_residual() < 1e-10
    assert r.commutant_dim() == 1
    C, res = casimir_check(r)
    assert res < 1e-10
    assert abs(C - r.casimir) < 1e-10 * max(1, abs(C))


@settings(max_examples=10)
@given(seed=seeds)
def test_lifts_are_inequivalent(seed):
    l = 3
    p = gauss(random_sl2(np.random.default_rng(seed), 0.5))
    reps = [rep_at(p, l, j) for j in range(l)]
    Cs = casimir_lifts(p, l)
    assert len({round(c.real, 8) + 1j * round(c.imag, 8) for c in Cs}) == l
    for i in range(l):
        for j in range(i + 1, l):
            assert hom_space(reps[j].gens(), reps[i].gens())[0] == []


@settings(max_examples=10)
@given(seed=seeds)
def test_root_choices_are_gauge(seed):
    rng = np.random.default_rng(seed)
    p = gauss(random_sl2(rng, 0.5))
    a = build(CentralChar.of(p, 5, 2, 0, 0))
    b = build(CentralChar.of(p, 5, 2, 3, 4))
    T, nullity = intertwiner(a, b)
    assert nullity == 1


def test_dual(rng):
    p = gauss(random_sl2(rng, 0.4))
    r = rep_at(p, 3, 1)
    d = dual(r)
    assert d.relation_residual() < 1e-11
    assert intertwiner(dual(d), r)[1] == 1
    assert intertwiner(d, rep_at(ginv(p), 3, casimir=r.casimir))[1] == 1


def test_evaluate_is_homomorphism(rng):
    r = rep_at(gauss(random_sl2(rng, 0.4)), 5, 0)
    for _ in range(5):
        a, b = random_elem(rng), random_elem(rng)
        lhs = r.evaluate(a * b)
        rhs = r.evaluate(a) @ r.evaluate(b)
        assert np.linalg.norm(lhs - rhs) < 1e-10 * max(1, np.linalg.norm(lhs))


def test_tensor_ops_satisfy_relations(rng):
    eps = np.exp(2j * np.pi / 3)
    r1 = rep_at(gauss(random_sl2(rng, 0.4)), 3, 0)
    r2 = rep_at(gauss(random_sl2(rng, 0.4)), 3, 1)
    E, F, L = tensor_ops(r1, r2)
    K = L @ L
    assert np.allclose(L @ E, eps * E @ L)
    assert np.allclose(E @ F - F @ E, (eps - 1 / eps) * (K - np.linalg.inv(K)))


def test_nongeneric_characters():
    with pytest.raises(GenericityError):
        rep_at(gauss(np.eye(2)), 3, 0)
    p = gauss(random_sl2(np.random.default_rng(1), 0.4))
    with pytest.raises(LiftError):
        rep_at(p, 3, casimir=casimir_lifts(p, 3)[0] + 0.1)
    with pytest.raises(LiftError):
        CentralChar.of(p, 3, lift=3)
    with pytest.raises(GenericityError):
        rep_at(p, 4, 0)


def test_json_shape(rng):
    r = rep_at(gauss(random_sl2(rng, 0.4)), 3, 2)
    obj = r.to_json()
    assert obj["l"] == 3 and obj["chi"]["lift"] == 2
    assert np.array(obj["E"]).shape == (3, 3, 2)
