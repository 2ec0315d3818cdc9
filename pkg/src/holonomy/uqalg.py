"""Symbolic U_q(sl2) in the integral form, over exact rational functions of q.

Generators are Ebar, Fbar and L = L_omega; K = L_alpha = L^2.  Elements are
kept in PBW normal form as sums of monomials Ebar^k L^n Fbar^m with the
relations

    L Ebar = q Ebar L,   L Fbar = q^-1 Fbar L,
    Ebar Fbar - Fbar Ebar = (q - q^-1)(K - K^-1).

With M = Q only even powers of L are allowed.
"""
from __future__ import annotations

import functools
import json
from dataclasses import dataclass

from .arith import Laurent, RatFuncQ, specialize
from .errors import DomainError

ONE = RatFuncQ.const(1)
ZERO = RatFuncQ.const(0)
Q = RatFuncQ.q(1)
QMQ = RatFuncQ.q(1) - RatFuncQ.q(-1)  # q - q^-1


@dataclass(frozen=True, order=True)
class PBWMonomial:
    """Ebar^k L_omega^n Fbar^m."""
    k: int
    n: int
    m: int

    def __post_init__(self):
        if self.k < 0 or self.m < 0:
            raise DomainError("PBW exponents of Ebar and Fbar must be nonnegative")


def _add_into(acc: dict, key, c):
    if c.is_zero():
        return
    old = acc.get(key)
    new = c if old is None else old + c
    if new.is_zero():
        acc.pop(key, None)
    else:
        acc[key] = new


class AlgElem:
    """Finite linear combination of PBW monomials with RatFuncQ coefficients."""

    __slots__ = ("terms", "lattice")

    def __init__(self, terms=None, lattice: str = "P"):
        t = {}
        for mono, c in (terms or {}).items():
            if not isinstance(mono, PBWMonomial):
                mono = PBWMonomial(*mono)
            if lattice == "Q" and mono.n % 2:
                raise DomainError("odd power of L_omega is not in the Q-form")
            c = c if isinstance(c, RatFuncQ) else RatFuncQ.make(c)
            _add_into(t, mono, c)
        self.terms = t
        self.lattice = lattice

    # constructors
    @staticmethod
    def scalar(c, lattice="P") -> "AlgElem":
        return AlgElem({PBWMonomial(0, 0, 0): c}, lattice)

    @staticmethod
    def mono(k=0, n=0, m=0, c=ONE, lattice="P") -> "AlgElem":
        return AlgElem({PBWMonomial(k, n, m): c}, lattice)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, (int, RatFuncQ)):
            other = AlgElem.scalar(other)
        if not isinstance(other, AlgElem):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        if isinstance(other, (int, RatFuncQ)):
            other = AlgElem.scalar(other)
        out = dict(self.terms)
        for mono, c in other.terms.items():
            _add_into(out, mono, c)
        return AlgElem._raw(out, self.lattice)

    __radd__ = __add__

    def __neg__(self):
        return AlgElem._raw({m: -c for m, c in self.terms.items()}, self.lattice)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, RatFuncQ)):
            c = other if isinstance(other, RatFuncQ) else RatFuncQ.const(other)
            if c.is_zero():
                return AlgElem(lattice=self.lattice)
            return AlgElem._raw({m: v * c for m, v in self.terms.items()}, self.lattice)
        return multiply(self, other)

    def __rmul__(self, other):
        return self * other

    def __pow__(self, n: int):
        if n < 0:
            raise DomainError("negative powers are only defined for L")
        out = AlgElem.scalar(1, self.lattice)
        for _ in range(n):
            out = out * self
        return out

    @staticmethod
    def _raw(terms, lattice):
        e = AlgElem.__new__(AlgElem)
        e.terms = terms
        e.lattice = lattice
        return e

    def __repr__(self):
        if not self.terms:
            return "AlgElem(0)"
        parts = [f"({c})*E^{mo.k} L^{mo.n} F^{mo.m}" for mo, c in sorted(self.terms.items())]
        return "AlgElem(" + " + ".join(parts) + ")"

    def to_json(self) -> list:
        return [{"k": mo.k, "mu": mo.n, "m": mo.m,
                 "coeff": {"num_low": c.num.low, "num": list(c.num.coeffs),
                           "den_low": c.den.low, "den": list(c.den.coeffs)}}
                for mo, c in sorted(self.terms.items())]

    @staticmethod
    def from_json(records, lattice="P") -> "AlgElem":
        terms = {}
        for r in records:
            c = r["coeff"]
            terms[PBWMonomial(r["k"], r["mu"], r["m"])] = RatFuncQ.make(
                Laurent.make(c["num_low"], c["num"]), Laurent.make(c["den_low"], c["den"]))
        return AlgElem(terms, lattice)

    def dumps(self) -> str:
        return json.dumps(self.to_json())


# generators
E = AlgElem.mono(k=1)
F = AlgElem.mono(m=1)
L = AlgElem.mono(n=1)
Linv = AlgElem.mono(n=-1)
K = AlgElem.mono(n=2)
Kinv = AlgElem.mono(n=-2)
UNIT = AlgElem.scalar(1)


def Lpow(n: int) -> AlgElem:
    return AlgElem.mono(n=n)


# ---------------------------------------------------------------------------
# straightening


@functools.lru_cache(maxsize=None)
def _fbar_ebar(c: int, d: int):
    """Fbar^c Ebar^d in normal form, as a tuple of (monomial, coeff)."""
    if c == 0 or d == 0:
        return ((PBWMonomial(d, 0, c), ONE),)
    # Fbar Ebar^d = Ebar^d Fbar - (q - q^-1) Ebar^{d-1} (A K - B K^-1)
    # with A = sum_r q^{2r}, B = sum_r q^{-2r}, r = 0..d-1
    A = RatFuncQ(Laurent.make(0, [1 if j % 2 == 0 else 0 for j in range(2 * d - 1)]))
    B = A.bar()
    one_step = {PBWMonomial(d, 0, 1): ONE}
    _add_into(one_step, PBWMonomial(d - 1, 2, 0), -(QMQ * A))
    _add_into(one_step, PBWMonomial(d - 1, -2, 0), QMQ * B)
    if c == 1:
        return tuple(one_step.items())
    out = {}
    for mono, coef in one_step.items():
        for m2, c2 in _mono_mul(PBWMonomial(0, 0, c - 1), mono):
            _add_into(out, m2, coef * c2)
    return tuple(out.items())


def _qpow(e: int) -> RatFuncQ:
    return RatFuncQ(Laurent.q(e))


@functools.lru_cache(maxsize=200000)
def _mono_mul(x: PBWMonomial, y: PBWMonomial):
    """(E^a L^b F^c)(E^d L^e F^f) in normal form."""
    a, b, c = x.k, x.n, x.m
    d, e, f = y.k, y.n, y.m
    out = {}
    for mid, coef in _fbar_ebar(c, d):
        i, j, k = mid.k, mid.n, mid.m
        # L^b E^i = q^{bi} E^i L^b ;  F^k L^e = q^{ke} L^e F^k
        ph = b * i + k * e
        _add_into(out, PBWMonomial(a + i, b + j + e, k + f), coef * _qpow(ph))
    return tuple(out.items())


def multiply(a: AlgElem, b: AlgElem) -> AlgElem:
    out = {}
    for x, cx in a.terms.items():
        for y, cy in b.terms.items():
            cxy = cx * cy
            for mono, c in _mono_mul(x, y):
                _add_into(out, mono, cxy * c)
    lat = "Q" if a.lattice == b.lattice == "Q" else "P"
    return AlgElem._raw(out, lat)


def commutator(a: AlgElem, b: AlgElem) -> AlgElem:
    return a * b - b * a


# ---------------------------------------------------------------------------
# tensor powers


class TensorElem:
    """Finite sum over tuples of PBW monomials (any number of tensor factors)."""

    __slots__ = ("terms", "arity")

    def __init__(self, terms=None, arity: int = 2):
        self.terms = {}
        self.arity = arity
        for key, c in (terms or {}).items():
            key = tuple(m if isinstance(m, PBWMonomial) else PBWMonomial(*m) for m in key)
            if len(key) != arity:
                raise DomainError("tensor key has wrong arity")
            _add_into(self.terms, key, c if isinstance(c, RatFuncQ) else RatFuncQ.make(c))

    @staticmethod
    def pure(*factors: AlgElem) -> "TensorElem":
        out = {(): ONE}
        for f in factors:
            nxt = {}
            for key, c in out.items():
                for mono, c2 in f.terms.items():
                    _add_into(nxt, key + (mono,), c * c2)
            out = nxt
        t = TensorElem(arity=len(factors))
        t.terms = out
        return t

    def __eq__(self, other):
        return isinstance(other, TensorElem) and self.terms == other.terms

    def __add__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            _add_into(out, k, c)
        t = TensorElem(arity=self.arity)
        t.terms = out
        return t

    def __neg__(self):
        t = TensorElem(arity=self.arity)
        t.terms = {k: -c for k, c in self.terms.items()}
        return t

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: "TensorElem") -> "TensorElem":
        out = {}
        for kx, cx in self.terms.items():
            for ky, cy in other.terms.items():
                partial = {(): cx * cy}
                for x, y in zip(kx, ky):
                    nxt = {}
                    prods = _mono_mul(x, y)
                    for key, c in partial.items():
                        for mono, c2 in prods:
                            _add_into(nxt, key + (mono,), c * c2)
                    partial = nxt
                for key, c in partial.items():
                    _add_into(out, key, c)
        t = TensorElem(arity=self.arity)
        t.terms = out
        return t

    def is_zero(self):
        return not self.terms

    def map_specialized(self, l: int) -> dict:
        return {k: specialize(c, l) for k, c in self.terms.items()}

    def __repr__(self):
        return f"TensorElem({len(self.terms)} terms, arity={self.arity})"


def _tensor_pow(t: TensorElem, n: int) -> TensorElem:
    out = TensorElem({tuple(PBWMonomial(0, 0, 0) for _ in range(t.arity)): ONE}, t.arity)
    for _ in range(n):
        out = out * t
    return out


@functools.lru_cache(maxsize=None)
def _delta_E_pow(k: int) -> TensorElem:
    dE = TensorElem.pure(E, UNIT) + TensorElem.pure(K, E)
    return _tensor_pow(dE, k)


@functools.lru_cache(maxsize=None)
def _delta_F_pow(m: int) -> TensorElem:
    dF = TensorElem.pure(F, Kinv) + TensorElem.pure(UNIT, F)
    return _tensor_pow(dF, m)


def _coproduct_mono(mono: PBWMonomial) -> TensorElem:
    Ln = Lpow(mono.n)
    return _delta_E_pow(mono.k) * TensorElem.pure(Ln, Ln) * _delta_F_pow(mono.m)


def coproduct(a: AlgElem) -> TensorElem:
    """Delta Ebar = Ebar x 1 + K x Ebar, Delta Fbar = Fbar x K^-1 + 1 x Fbar, Delta L = L x L."""
    out = TensorElem(arity=2)
    for mono, c in a.terms.items():
        d = _coproduct_mono(mono)
        for key, c2 in d.terms.items():
            _add_into(out.terms, key, c * c2)
    return out


def _apply_factorwise(t: TensorElem, idx: int, fn, new_arity_delta: int) -> TensorElem:
    """Replace factor idx of every term by fn(monomial), a TensorElem or AlgElem."""
    out = {}
    for key, c in t.terms.items():
        img = fn(key[idx])
        if isinstance(img, AlgElem):
            items = [((m,), v) for m, v in img.terms.items()]
        else:
            items = list(img.terms.items())
        for sub, c2 in items:
            _add_into(out, key[:idx] + tuple(sub) + key[idx + 1:], c * c2)
    r = TensorElem(arity=t.arity + new_arity_delta)
    r.terms = out
    return r


def coproduct_left(t: TensorElem) -> TensorElem:
    """(Delta x id) applied to a two-fold tensor."""
    return _apply_factorwise(t, 0, _coproduct_mono, 1)


def coproduct_right(t: TensorElem) -> TensorElem:
    return _apply_factorwise(t, t.arity - 1, _coproduct_mono, 1)


def counit(a: AlgElem) -> RatFuncQ:
    """eps(Ebar) = eps(Fbar) = 0, eps(L) = 1."""
    c = ZERO
    for mono, v in a.terms.items():
        if mono.k == 0 and mono.m == 0:
            c = c + v
    return c


def _counit_mono(mono: PBWMonomial) -> RatFuncQ:
    return ONE if mono.k == 0 and mono.m == 0 else ZERO


def counit_factor(t: TensorElem, idx: int) -> AlgElem:
    """Apply the counit to factor idx of a two-fold tensor, giving an element."""
    if t.arity != 2:
        raise DomainError("counit_factor expects a two-fold tensor")
    out = {}
    for key, c in t.terms.items():
        v = _counit_mono(key[idx])
        if not v.is_zero():
            _add_into(out, key[1 - idx], c * v)
    return AlgElem._raw(out, "P")


# ---------------------------------------------------------------------------
# antipode and braid automorphism

S_E = -(Kinv * E)       # S(Ebar) = -K^-1 Ebar
S_F = -(F * K)          # S(Fbar) = -Fbar K


@functools.lru_cache(maxsize=None)
def _antipode_mono(mono: PBWMonomial) -> AlgElem:
    # anti-multiplicative: S(E^k L^n F^m) = S(F)^m L^{-n} S(E)^k
    return (S_F ** mono.m) * Lpow(-mono.n) * (S_E ** mono.k)


def antipode(a: AlgElem) -> AlgElem:
    out = AlgElem()
    for mono, c in a.terms.items():
        out = out + _antipode_mono(mono) * c
    return out


def hopf_multiply(t: TensorElem, left_antipode: bool = True) -> AlgElem:
    """m(S x id)(t) or m(id x S)(t) for a two-fold tensor."""
    out = AlgElem()
    for (x, y), c in t.terms.items():
        mx, my = AlgElem({x: ONE}), AlgElem({y: ONE})
        if left_antipode:
            mx = _antipode_mono(x)
        else:
            my = _antipode_mono(y)
        out = out + (mx * my) * c
    return out


T_IMAGES = {
    "fwd": (-(F * K), -(Kinv * E), -1),    # T(Ebar), T(Fbar), L -> L^sign
    "inv": (-(Kinv * F), -(E * K), -1),
}


@functools.lru_cache(maxsize=None)
def _braid_mono(mono: PBWMonomial, direction: str) -> AlgElem:
    te, tf, sgn = T_IMAGES[direction]
    return (te ** mono.k) * Lpow(sgn * mono.n) * (tf ** mono.m)


def braid_T(a: AlgElem, direction: str = "fwd") -> AlgElem:
    """Quantum Weyl group automorphism: T(Ebar) = -Fbar K, T(Fbar) = -K^-1 Ebar."""
    if direction not in T_IMAGES:
        raise DomainError("direction must be 'fwd' or 'inv'")
    out = AlgElem()
    for mono, c in a.terms.items():
        out = out + _braid_mono(mono, direction) * c
    return out


def casimir() -> AlgElem:
    """Omega = Fbar Ebar + q K + q^-1 K^-1 (central in the integral form)."""
    return F * E + K * Q + Kinv * RatFuncQ.q(-1)


def as_E(a: AlgElem) -> AlgElem:
    """Rewrite Ebar as (q - q^-1) E, i.e. divide out the integral scaling.

    Returns the same element with coefficients expressed in the E, F basis:
    the coefficient of E^k L^n F^m is multiplied by (q - q^-1)^(k + m).
    """
    out = {}
    for mono, c in a.terms.items():
        _add_into(out, mono, c * QMQ ** (mono.k + mono.m))
    return AlgElem._raw(out, a.lattice)


# ---------------------------------------------------------------------------
# root of unity checks


def specialize_elem(a: AlgElem, l: int) -> dict:
    return {mono: specialize(c, l) for mono, c in a.terms.items()}


def _vanishes(a, l: int) -> bool:
    terms = a.terms.values()
    try:
        return all(specialize(c, l).is_zero() for c in terms)
    except ZeroDivisionError:
        return False


def central_power_check(l: int) -> dict:
    """Exact checks that Ebar^l, Fbar^l, L^l, K^l are central and that their
    coproducts are group-like plus primitive at q = eps."""
    if l < 3 or l % 2 == 0:
        raise DomainError(f"level must be odd and >= 3, got {l}")
    El, Fl = E ** l, F ** l
    central = {"E^l": El, "F^l": Fl, "L^l": Lpow(l), "K^l": Lpow(2 * l)}
    gens = {"E": E, "F": F, "L": L}
    report = {}
    for cn, c in central.items():
        for gn, g in gens.items():
            report[f"[{cn},{gn}]"] = _vanishes(commutator(c, g), l)
    dEl = coproduct(El) - TensorElem.pure(El, UNIT) - TensorElem.pure(Lpow(2 * l), El)
    dFl = coproduct(Fl) - TensorElem.pure(Fl, Lpow(-2 * l)) - TensorElem.pure(UNIT, Fl)
    dLl = coproduct(Lpow(l)) - TensorElem.pure(Lpow(l), Lpow(l))
    report["Delta(E^l)"] = _vanishes(dEl, l)
    report["Delta(F^l)"] = _vanishes(dFl, l)
    report["Delta(L^l)"] = _vanishes(dLl, l)
    return report
