from __future__ import annotations

import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from holonomy import tangle
from holonomy.errors import ParseError
from holonomy.gstar import big_I, braid, gauss, random_sl2
from holonomy.suites import reidemeister2
from holonomy.tangle import (CLOSED_TREFOIL, CLOSED_TWIST, FIGURE_EIGHT, TREFOIL,
                             evaluate_diagram, gauge_test, kashaev_oracle, parse, propagate,
                             string_knot)

seeds = st.integers(0, 2 ** 32 - 1)


# ---------------------------------------------------------------------------
# parsing


def test_parse_trefoil():
    d = parse(TREFOIL)
    assert d.bottom == 1 and d.top == 1
    assert d.is_string_knot
    assert d.slices[0] == ("cup", 0)


def test_parse_separators_and_comments():
    a = parse("cup 1; xp 2 # twist\n\n; xp 2;xp 2\ncap 2")
    b = parse("cup 1\nxp 2\nxp 2\ncap 2")
    assert a.slices[:2] == b.slices[:2] and len(a.slices) == 5


def test_parse_closed_unknot():
    d = parse("cup 1\ncap 1")
    assert d.bottom == 0 and d.top == 0 and d.is_closed and d.n_components == 1


def test_parse_errors():
    with pytest.raises(ParseError, match="out of range"):
        parse("xp 3", width=2)
    with pytest.raises(ParseError, match="out of range"):
        parse("bottom 2\nxp 3")
    with pytest.raises(ParseError, match="unknown token"):
        parse("twist 1")
    with pytest.raises(ParseError, match="empty"):
        parse("# nothing\n\n")
    with pytest.raises(ParseError, match="width mismatch"):
        parse("cup 1\ntop 3")
    with pytest.raises(ParseError):
        parse("xp 0")
    with pytest.raises(ParseError):
        parse("xp one")


def test_width_inference():
    assert parse("xp 3").bottom == 4
    assert parse("cup 1\nxp 2\ncap 2").bottom == 1
    assert parse("cup 3\ncap 1").bottom == 2
    assert parse("id").bottom == 1


slice_st = st.lists(st.tuples(st.sampled_from(["xp", "xm", "cup", "cap", "id"]),
                              st.integers(1, 4)), min_size=1, max_size=8)


@given(slice_st)
def test_parse_roundtrip(sl):
    text = "\n".join("id" if k == "id" else f"{k} {i}" for k, i in sl)
    try:
        d = parse(text)
    except ParseError:
        return
    again = parse(d.to_text())
    assert again == d
    widths = d.widths
    for (kind, _), w0, w1 in zip(d.slices, widths, widths[1:]):
        assert w1 - w0 == {"cup": 2, "cap": -2}.get(kind, 0)
        assert w0 >= 0


def test_components_and_string_knot_predicate():
    assert parse(FIGURE_EIGHT).is_string_knot
    assert parse("cup 2\ncap 2").n_components == 2
    assert not parse("cup 2\ncap 2").is_string_knot
    assert parse(CLOSED_TREFOIL).n_components == 1


# ---------------------------------------------------------------------------
# colors


def test_identity_colors_propagate():
    one = gauss(np.eye(2))
    cs = propagate(parse("xp 1\nxm 2\nxp 1"), [one, one, one])
    for lvl in cs.levels:
        for p in lvl:
            assert np.allclose(p.coords, [1, 0, 0])


def test_single_crossing_colors(rng):
    a, b = (gauss(random_sl2(rng, 0.2)) for _ in range(2))
    cs = propagate(parse("xp 1"), [a, b])
    u, v = braid(a, b)
    assert np.allclose(cs.top[0].coords, u.coords) and np.allclose(cs.top[1].coords, v.coords)
    cs = propagate(parse("xm 1"), [u, v])
    assert np.allclose(cs.top[0].coords, a.coords) and np.allclose(cs.top[1].coords, b.coords)


@settings(max_examples=10)
@given(seed=seeds)
def test_string_knot_top_color_conjugate(seed):
    x = gauss(random_sl2(np.random.default_rng(seed), 0.2))
    for text in (TREFOIL, FIGURE_EIGHT):
        cs = propagate(parse(text), [x])
        assert abs(np.trace(big_I(cs.top[0])) - np.trace(big_I(x))) < 1e-10
        assert cs.cap_residual < 1e-10


# ---------------------------------------------------------------------------
# evaluation


def test_id_is_identity(rng):
    x = gauss(random_sl2(rng, 0.2))
    r, _ = evaluate_diagram(parse("id"), [x], 3)
    assert np.allclose(r.operator, np.eye(3))


@pytest.mark.parametrize("text", [TREFOIL, FIGURE_EIGHT])
@settings(max_examples=5)
@given(seed=seeds)
def test_string_knot_centrality(text, seed):
    x = gauss(random_sl2(np.random.default_rng(seed), 0.2))
    r = string_knot(text, x, 3, seed % 3)
    assert r.centrality_residual < 1e-8
    assert np.linalg.norm(r.operator - r.scalar * np.eye(3)) < 1e-8 * abs(r.scalar) * 3


@pytest.mark.parametrize("text", [CLOSED_TREFOIL, CLOSED_TWIST, "cup 1\ncap 1"])
def test_closed_knots_vanish(text, rng):
    x = gauss(random_sl2(rng, 0.2))
    r, _ = evaluate_diagram(parse(text), [], 3, cup_guess=[x])
    assert r.expected_zero
    assert r.norm < 1e-8 * r.scale


@pytest.mark.parametrize("orient", [(1, 1), (1, -1), (-1, 1), (-1, -1)])
def test_reidemeister_two(orient, rng):
    a, b = (gauss(random_sl2(rng, 0.2)) for _ in range(2))
    res, c = reidemeister2(3, a, b, orient)
    assert res < 1e-8
    assert abs(c) > 1e-6


def test_gauge_identity_and_small(rng):
    x = gauss(random_sl2(rng, 0.2))
    d = parse(TREFOIL)
    assert gauge_test(d, [x], np.eye(2), 3)["relative_difference"] < 1e-12
    for _ in range(3):
        g = random_sl2(rng, 0.1)
        assert gauge_test(d, [x], g, 3)["relative_difference"] < 1e-6


def test_unknot_string_is_scalar(rng):
    # a cup followed by a cap on the other side is a zig-zag: identity up to scale
    x = gauss(random_sl2(rng, 0.2))
    r, _ = evaluate_diagram(parse("cup 2\ncap 1"), [x], 3)
    assert np.linalg.norm(r.operator - r.operator[0, 0] * np.eye(3)) < 1e-10


def test_result_json(rng):
    x = gauss(random_sl2(rng, 0.2))
    obj = string_knot(TREFOIL, x, 3).to_json()
    assert {"operator", "scalar", "residuals", "ledger"} <= set(obj)
    assert len(obj["ledger"]) == 3


# ---------------------------------------------------------------------------
# oracle


def _brute(knot, N):
    q = mpmath.exp(2j * mpmath.pi / N)
    tot = 0
    for k in range(N):
        p = mpmath.mpc(1)
        for j in range(1, k + 1):
            p *= 1 - q ** j
        tot += mpmath.conj(p) if knot == "3_1" else abs(p) ** 2
    return complex(tot)


def test_kashaev_small_values():
    assert kashaev_oracle("4_1", 1) == 1
    assert kashaev_oracle("3_1", 1) == 1
    for N in (2, 3, 5):
        for knot in ("3_1", "4_1"):
            assert abs(kashaev_oracle(knot, N) - _brute(knot, N)) < 1e-12
    # <4_1>_3 = 1 + |1 - w|^2 + |(1 - w)(1 - w^2)|^2 = 1 + 3 + 9
    assert abs(kashaev_oracle("4_1", 3) - 13) < 1e-12


@given(st.integers(1, 40))
def test_kashaev_41_real_and_reorder(N):
    v = kashaev_oracle("4_1", N)
    assert abs(v.imag) < 1e-12 and v.real >= 1
    w = kashaev_oracle("4_1", N, reverse=True)
    assert abs(v - w) < 1e-12 * abs(v)


def test_kashaev_high_precision():
    v = kashaev_oracle("3_1", 7, precision="high")
    assert isinstance(v, mpmath.mpc)
    assert abs(complex(v) - kashaev_oracle("3_1", 7)) < 1e-12


def test_kashaev_errors():
    with pytest.raises(ParseError):
        kashaev_oracle("5_2", 3)
    with pytest.raises(ValueError):
        kashaev_oracle("4_1", 0)


def test_gauge_far_from_identity(rng):
    from holonomy.suites import REJECT
    x = gauss(random_sl2(rng, 0.2))
    d = parse(TREFOIL)
    done = 0
    for _ in range(6):
        g = random_sl2(rng, 1.0)
        try:
            gt = gauge_test(d, [x], g, 3)
        except REJECT:
            continue
        done += 1
        assert gt["relative_difference"] < 1e-5
    assert done >= 1


@pytest.mark.parametrize("text", ["cup 2\nxp 1\ncap 2", "cup 2\nxm 1\ncap 2",
                                  "cup 1\nxp 2\ncap 1", "cup 1\nxm 2\ncap 1"])
def test_reidemeister_one_is_unit_scalar(text, rng):
    x = gauss(random_sl2(rng, 0.2))
    r, _ = evaluate_diagram(parse(text), [x], 3)
    M = r.operator
    c = np.trace(M) / 3
    assert np.linalg.norm(M - c * np.eye(3)) < 1e-10 * np.linalg.norm(M)
    assert abs(abs(c) - 1) < 1e-10
