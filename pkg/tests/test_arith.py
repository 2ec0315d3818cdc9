from __future__ import annotations

import cmath
import math
import random

import mpmath
import pytest
import sympy
from hypothesis import given, strategies as st

from holonomy import _laurent_py, arith
from holonomy.arith import (CycNum, Laurent, RatFuncQ, cyclotomic_poly, embed, euler_phi,
                            poly_gcd, qbinom, qfactorial, qint, specialize)
from holonomy.errors import PoleError

Z = 0.7 + 0.3j  # generic evaluation point

small_ints = st.integers(-6, 6)
laurents = st.builds(Laurent.make, st.integers(-3, 3), st.lists(small_ints, max_size=5))
nonzero_laurents = laurents.filter(lambda p: not p.is_zero())
ratfuncs = st.builds(RatFuncQ.make, laurents, nonzero_laurents)


def test_cyclotomic_matches_sympy():
    x = sympy.Symbol("x")
    for n in range(1, 31):
        ref = sympy.Poly(sympy.cyclotomic_poly(n, x), x).all_coeffs()[::-1]
        assert list(cyclotomic_poly(n)) == [int(c) for c in ref]
        assert euler_phi(n) == int(sympy.totient(n))


@given(st.lists(small_ints, min_size=1, max_size=6), st.lists(small_ints, min_size=1, max_size=6),
       st.lists(small_ints, min_size=1, max_size=4))
def test_poly_gcd_matches_sympy(a, b, c):
    x = sympy.Symbol("x")
    a = arith._kernel.conv(a, c)
    b = arith._kernel.conv(b, c)
    g = poly_gcd(a, b)
    ref = sympy.Poly(sympy.gcd(sympy.Poly(a[::-1], x), sympy.Poly(b[::-1], x)), x)
    ref = sympy.Poly(ref.primitive()[1], x)  # content-free
    if not g:
        assert ref.is_zero
        return
    mine = sympy.Poly(g[::-1], x)
    # equal up to sign
    assert mine == ref or mine == -ref


def test_qint_values():
    q = RatFuncQ.q
    assert qint(2) == q(1) + q(-1)
    assert qint(1) == RatFuncQ.const(1)
    assert qint(0).is_zero()
    for n in range(1, 7):
        assert abs(qint(n)(Z) - (Z ** n - Z ** -n) / (Z - 1 / Z)) < 1e-12
        assert abs(qint(n, 2)(Z) - (Z ** (2 * n) - Z ** (-2 * n)) / (Z ** 2 - Z ** -2)) < 1e-12


def test_qbinom_pascal_and_factorial():
    for m in range(1, 7):
        for n in range(1, m + 1):
            lhs = qbinom(m + 1, n)
            rhs = RatFuncQ.q(n) * qbinom(m, n) + RatFuncQ.q(-(m + 1 - n)) * qbinom(m, n - 1)
            assert lhs == rhs
        assert qbinom(m, 0) == RatFuncQ.const(1) == qbinom(m, m)
        assert qfactorial(m) == qfactorial(m - 1) * qint(m)


@given(ratfuncs, ratfuncs, ratfuncs)
def test_ratfunc_field_axioms(a, b, c):
    assert (a + b) - b == a
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    if not b.is_zero():
        assert (a / b) * b == a


@given(laurents, nonzero_laurents, nonzero_laurents)
def test_ratfunc_canonical_form(num, den, common):
    assert RatFuncQ.make(num * common, den * common) == RatFuncQ.make(num, den)


@given(ratfuncs)
def test_ratfunc_evaluation_and_bar(a):
    try:
        v = a(Z)
    except ZeroDivisionError:
        return
    assert abs(a.bar()(1 / Z) - v) < 1e-8 * max(1.0, abs(v))


@pytest.mark.parametrize("l", [3, 5, 7, 9])
def test_specialize_qint_l_vanishes(l):
    assert specialize(qint(l), l).is_zero()
    assert not specialize(qint(l - 1), l).is_zero()


def test_specialize_pole():
    with pytest.raises(PoleError):
        specialize(RatFuncQ.const(1) / qint(3), 3)


@pytest.mark.parametrize("l", [3, 5, 7])
def test_embed_eps(l):
    assert abs(embed(CycNum.eps(l)) - cmath.exp(2j * math.pi / l)) < 1e-14


@pytest.mark.parametrize("l", [3, 5, 7])
@given(data=st.data())
def test_cycnum_inverse_and_embedding(l, data):
    coeffs = data.draw(st.lists(st.integers(-5, 5), min_size=1, max_size=l - 1))
    x = CycNum.make(l, coeffs)
    if x.is_zero():
        return
    assert x * x.inverse() == CycNum.const(l, 1)
    eps = cmath.exp(2j * math.pi / l)
    assert abs(embed(x) - sum(c * eps ** i for i, c in enumerate(coeffs))) < 1e-12


@given(laurents)
def test_specialize_agrees_with_evaluation(p):
    for l in (3, 5):
        eps = cmath.exp(2j * math.pi / l)
        assert abs(embed(specialize(p, l)) - p(eps)) < 1e-9 * max(1.0, abs(p(eps)))


def test_precision_modes():
    old = arith.get_precision()
    try:
        arith.set_precision("high", 160)
        v = embed(CycNum.eps(5))
        assert isinstance(v, mpmath.mpc)
        with mpmath.workprec(160):
            assert abs(v - mpmath.exp(2j * mpmath.pi / 5)) < mpmath.mpf(2) ** -150
    finally:
        arith.set_precision(*old)
    with pytest.raises(ValueError):
        arith.set_precision("quad")


big = st.integers(-(2 ** 70), 2 ** 70)


@pytest.mark.skipif(arith.KERNEL_BACKEND != "cython", reason="extension not built")
@given(st.lists(big, max_size=12), st.lists(big, max_size=12), st.integers(-20, 20),
       st.integers(1, 9))
def test_compiled_kernels_match_fallback(a, b, shift, l):
    from holonomy import _laurent
    assert list(_laurent.conv(a, b)) == _laurent_py.conv(a, b)
    assert list(_laurent.fold_mod(a, shift, l)) == _laurent_py.fold_mod(a, shift, l)
    mod = [random.Random(len(a)).randint(-3, 3) for _ in range(l)] + [1]
    assert list(_laurent.reduce_monic(a, mod)) == _laurent_py.reduce_monic(a, mod)
