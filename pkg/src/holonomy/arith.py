"""Exact arithmetic in Z[q, 1/q], Q(q) and Q(eps), plus complex embedding.

Laurent polynomials carry integer coefficients and a lowest exponent.
``RatFuncQ`` is a reduced quotient of Laurent polynomials with a canonical
representative, so equality of values is equality of fields.  ``CycNum``
models the cyclotomic field Q(eps), eps = exp(2 pi i / l), in the power
basis modulo the l-th cyclotomic polynomial.

The integer convolution and reduction kernels come from the compiled
``_laurent`` extension when it is available and from ``_laurent_py``
otherwise (set ``HOLONOMY_PURE=1`` to force the fallback).
"""
from __future__ import annotations

import cmath
import functools
import math
import os
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .errors import DomainError, PoleError

if os.environ.get("HOLONOMY_PURE"):
    from . import _laurent_py as _kernel
else:
    try:
        from . import _laurent as _kernel
    except ImportError:  # extension not built
        from . import _laurent_py as _kernel

KERNEL_BACKEND = _kernel.BACKEND

# ---------------------------------------------------------------------------
# precision setting for the numeric layer

_PRECISION = {"mode": os.environ.get("HOLONOMY_PRECISION", "double"), "bits": 128}


def set_precision(mode: str, bits: int = 128) -> None:
    """Select 'double' or 'high' (mpmath with ``bits`` of mantissa)."""
    if mode not in ("double", "high"):
        raise DomainError(f"unknown precision mode {mode!r}")
    if mode == "high" and bits < 128:
        raise DomainError("high precision needs at least 128 bits")
    _PRECISION["mode"] = mode
    _PRECISION["bits"] = bits


def get_precision() -> tuple[str, int]:
    return _PRECISION["mode"], _PRECISION["bits"]


# ---------------------------------------------------------------------------
# integer polynomial helpers (dense lists, constant term first)


def _trim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return c


def _content(c) -> int:
    g = 0
    for x in c:
        g = math.gcd(g, x)
    return g


def _primitive(c):
    g = _content(c)
    if g == 0:
        return []
    p = [x // g for x in c]
    if p[-1] < 0:
        p = [-x for x in p]
    return p


def _pseudo_rem(a, b):
    """Pseudo-remainder of a by b over Z (b nonzero)."""
    r = list(a)
    lb = b[-1]
    db = len(b) - 1
    while len(r) - 1 >= db and r:
        lr = r[-1]
        shift = len(r) - 1 - db
        r = [x * lb for x in r]
        for j, y in enumerate(b):
            r[shift + j] -= lr * y
        r = _trim(r)
    return r


def poly_gcd(a, b):
    """Primitive gcd of two integer polynomials (primitive PRS)."""
    a, b = _primitive(_trim(a)), _primitive(_trim(b))
    if not a:
        return b
    if not b:
        return a
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = _pseudo_rem(a, b)
        a, b = b, _primitive(r)
    return a


def poly_exact_div(a, b):
    """Quotient a / b over Z; raises if the division is not exact."""
    a = _trim(a)
    b = _trim(b)
    if not b:
        raise ZeroDivisionError("division by zero polynomial")
    if not a:
        return []
    q = [Fraction(0)] * (len(a) - len(b) + 1)
    r = [Fraction(x) for x in a]
    lb = b[-1]
    for i in range(len(a) - len(b), -1, -1):
        c = r[i + len(b) - 1] / lb
        q[i] = c
        if c:
            for j, y in enumerate(b):
                r[i + j] -= c * y
    if any(r):
        raise ArithmeticError("inexact polynomial division")
    if any(x.denominator != 1 for x in q):
        raise ArithmeticError("non-integral polynomial quotient")
    return [int(x) for x in q]


# ---------------------------------------------------------------------------
# Laurent polynomials


@dataclass(frozen=True)
class Laurent:
    """sum_i coeffs[i] q^(low + i) with integer coefficients.

    >>> Laurent.q(1) * Laurent.q(-1)
    Laurent(low=0, coeffs=(1,))
    """
    low: int
    coeffs: tuple

    @staticmethod
    def make(low: int, coeffs) -> "Laurent":
        c = list(coeffs)
        start = 0
        while start < len(c) and c[start] == 0:
            start += 1
        c = _trim(c[start:])
        if not c:
            return ZERO_L
        return Laurent(low + start, tuple(c))

    @staticmethod
    def const(n: int) -> "Laurent":
        return Laurent.make(0, (n,))

    @staticmethod
    def q(n: int = 1) -> "Laurent":
        return Laurent(n, (1,))

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def high(self) -> int:
        return self.low + len(self.coeffs) - 1

    def __add__(self, other):
        other = _as_laurent(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        low = min(self.low, other.low)
        high = max(self.high, other.high)
        out = [0] * (high - low + 1)
        for i, c in enumerate(self.coeffs):
            out[self.low - low + i] += c
        for i, c in enumerate(other.coeffs):
            out[other.low - low + i] += c
        return Laurent.make(low, out)

    __radd__ = __add__

    def __neg__(self):
        return Laurent(self.low, tuple(-c for c in self.coeffs)) if self.coeffs else self

    def __sub__(self, other):
        other = _as_laurent(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _as_laurent(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return ZERO_L
        return Laurent.make(self.low + other.low, _kernel.conv(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if len(self.coeffs) != 1 or abs(self.coeffs[0]) != 1:
                raise DomainError("only monomial units have Laurent inverses")
            return Laurent(-self.low * (-n), (self.coeffs[0] ** (-n),))
        out = ONE_L
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def bar(self) -> "Laurent":
        """Substitute q -> 1/q."""
        if self.is_zero():
            return self
        return Laurent.make(-self.high, tuple(reversed(self.coeffs)))

    def __call__(self, z):
        return sum(c * z ** (self.low + i) for i, c in enumerate(self.coeffs) if c)

    def __repr__(self):
        return f"Laurent(low={self.low}, coeffs={self.coeffs})"

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for i, c in reversed(list(enumerate(self.coeffs))):
            if c:
                e = self.low + i
                mono = "" if e == 0 else ("q" if e == 1 else f"q^{e}")
                coef = str(c) if (abs(c) != 1 or not mono) else ("-" if c < 0 else "")
                parts.append(f"{coef}{mono}")
        return " + ".join(parts).replace("+ -", "- ")


ZERO_L = Laurent(0, ())
ONE_L = Laurent(0, (1,))


def _as_laurent(x):
    if isinstance(x, Laurent):
        return x
    if isinstance(x, int):
        return Laurent.const(x)
    return NotImplemented


# ---------------------------------------------------------------------------
# rational functions


@dataclass(frozen=True)
class RatFuncQ:
    """Reduced quotient num/den of Laurent polynomials in q.

    Canonical form: den is an honest polynomial with nonzero constant term
    and positive leading coefficient, gcd(num, den) = 1 and the integer
    contents of num and den are coprime.
    """
    num: Laurent
    den: Laurent = ONE_L

    @staticmethod
    def make(num, den=ONE_L) -> "RatFuncQ":
        num = _as_laurent(num)
        den = _as_laurent(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            return RatFuncQ(ZERO_L, ONE_L)
        shift = num.low - den.low
        n, d = list(num.coeffs), list(den.coeffs)
        if len(d) > 1:
            g = poly_gcd(n, d)
            if len(g) > 1:
                n, d = poly_exact_div(n, g), poly_exact_div(d, g)
        c = math.gcd(_content(n), _content(d))
        if c > 1:
            n, d = [x // c for x in n], [x // c for x in d]
        if d[-1] < 0:
            n, d = [-x for x in n], [-x for x in d]
        return RatFuncQ(Laurent.make(shift, n), Laurent.make(0, d))

    @staticmethod
    def const(n: int) -> "RatFuncQ":
        return RatFuncQ(Laurent.const(n))

    @staticmethod
    def q(n: int = 1) -> "RatFuncQ":
        return RatFuncQ(Laurent.q(n))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_laurent(self) -> bool:
        return self.den == ONE_L

    def __add__(self, other):
        other = _as_rat(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_laurent() and other.is_laurent():
            return RatFuncQ(self.num + other.num)
        return RatFuncQ.make(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFuncQ(-self.num, self.den)

    def __sub__(self, other):
        other = _as_rat(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _as_rat(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_laurent() and other.is_laurent():
            return RatFuncQ(self.num * other.num)
        return RatFuncQ.make(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_rat(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RatFuncQ.make(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return _as_rat(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return RatFuncQ.const(1) / (self ** (-n))
        if self.is_laurent():
            return RatFuncQ(self.num ** n)
        return RatFuncQ.make(self.num ** n, self.den ** n)

    def bar(self) -> "RatFuncQ":
        return RatFuncQ.make(self.num.bar(), self.den.bar())

    def __call__(self, z):
        return self.num(z) / self.den(z)

    def __repr__(self):
        if self.is_laurent():
            return f"RatFuncQ({self.num})"
        return f"RatFuncQ(({self.num}) / ({self.den}))"


def _as_rat(x):
    if isinstance(x, RatFuncQ):
        return x
    if isinstance(x, (int, Laurent)):
        return RatFuncQ(_as_laurent(x))
    return NotImplemented


def qint(n: int, d: int = 1) -> RatFuncQ:
    """[n]_{q^d} = (q^{dn} - q^{-dn}) / (q^d - q^{-d})."""
    if d < 1:
        raise DomainError("d must be positive")
    if n < 0:
        return -qint(-n, d)
    if n == 0:
        return RatFuncQ.const(0)
    # q^{d(n-1)} + q^{d(n-3)} + ... + q^{-d(n-1)}
    coeffs = [0] * (2 * d * (n - 1) + 1)
    for j in range(n):
        coeffs[2 * d * j] = 1
    return RatFuncQ(Laurent.make(-d * (n - 1), coeffs))


def qfactorial(n: int, d: int = 1) -> RatFuncQ:
    if n < 0:
        raise DomainError("factorial of a negative integer")
    out = RatFuncQ.const(1)
    for j in range(1, n + 1):
        out = out * qint(j, d)
    return out


def qbinom(m: int, n: int, d: int = 1) -> RatFuncQ:
    """Symmetric q-binomial [m]! / ([m-n]! [n]!)."""
    if n < 0 or m < 0:
        raise DomainError("negative argument")
    if n > m:
        raise DomainError("qbinom needs n <= m")
    return qfactorial(m, d) / (qfactorial(m - n, d) * qfactorial(n, d))


# ---------------------------------------------------------------------------
# cyclotomic field


@functools.lru_cache(maxsize=None)
def cyclotomic_poly(l: int) -> tuple:
    """Coefficients (constant first) of the l-th cyclotomic polynomial."""
    if l < 1:
        raise DomainError("cyclotomic index must be positive")
    p = [-1] + [0] * (l - 1) + [1]
    for d in range(1, l):
        if l % d == 0:
            p = poly_exact_div(p, list(cyclotomic_poly(d)))
    return tuple(p)


def euler_phi(l: int) -> int:
    return len(cyclotomic_poly(l)) - 1


def _check_level(l: int) -> None:
    if l < 3 or l % 2 == 0:
        raise DomainError(f"level must be odd and >= 3, got {l}")


def _to_int_vec(coeffs):
    den = 1
    for c in coeffs:
        den = den * c.denominator // math.gcd(den, c.denominator)
    return [int(c * den) for c in coeffs], den


@dataclass(frozen=True)
class CycNum:
    """Element of Q(eps) as rational coefficients on eps^0 .. eps^(phi(l)-1)."""
    l: int
    coeffs: tuple

    @staticmethod
    def make(l: int, coeffs) -> "CycNum":
        _check_level(l)
        phi = cyclotomic_poly(l)
        n = len(phi) - 1
        fr = [Fraction(c) for c in coeffs]
        ints, den = _to_int_vec(fr) if fr else ([], 1)
        if len(ints) > n:
            ints = _kernel.reduce_monic(ints, phi)
        ints = list(ints) + [0] * (n - len(ints))
        return CycNum(l, tuple(Fraction(x, den) for x in ints))

    @staticmethod
    def const(l: int, c) -> "CycNum":
        return CycNum.make(l, [c])

    @staticmethod
    def eps(l: int, power: int = 1) -> "CycNum":
        power %= l
        return CycNum.make(l, [0] * power + [1])

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def _same(self, other):
        if isinstance(other, (int, Fraction)):
            return CycNum.const(self.l, other)
        if isinstance(other, CycNum):
            if other.l != self.l:
                raise DomainError("mixing cyclotomic fields of different level")
            return other
        return NotImplemented

    def __add__(self, other):
        other = self._same(other)
        if other is NotImplemented:
            return NotImplemented
        return CycNum(self.l, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CycNum(self.l, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        other = self._same(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._same(other)
        if other is NotImplemented:
            return NotImplemented
        a, da = _to_int_vec(self.coeffs)
        b, db = _to_int_vec(other.coeffs)
        prod = _kernel.reduce_monic(_kernel.conv(a, b), cyclotomic_poly(self.l))
        return CycNum(self.l, tuple(Fraction(x, da * db) for x in prod))

    __rmul__ = __mul__

    def inverse(self) -> "CycNum":
        """Inverse via the extended Euclidean algorithm in Q[x]."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(eps)")
        phi = [Fraction(c) for c in cyclotomic_poly(self.l)]
        r0, r1 = phi, _ftrim(list(self.coeffs))
        s0, s1 = [Fraction(0)], [Fraction(1)]
        while len(r1) > 1:
            q, r = _fdivmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _fsub(s0, _fmul(q, s1))
        # r1 is a nonzero constant since phi is irreducible
        c = r1[0]
        return CycNum.make(self.l, [x / c for x in s1])

    def __truediv__(self, other):
        other = self._same(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._same(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = CycNum.const(self.l, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        other = self._same(other)
        if other is NotImplemented:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.l, self.coeffs))

    def __repr__(self):
        return f"CycNum(l={self.l}, coeffs={[str(c) for c in self.coeffs]})"


def _ftrim(c):
    while c and c[-1] == 0:
        c.pop()
    return c


def _fmul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _ftrim(out)


def _fsub(a, b):
    n = max(len(a), len(b))
    a = a + [Fraction(0)] * (n - len(a))
    b = b + [Fraction(0)] * (n - len(b))
    return _ftrim([x - y for x, y in zip(a, b)])


def _fdivmod(a, b):
    r = list(a)
    q = [Fraction(0)] * max(1, len(a) - len(b) + 1)
    while len(r) >= len(b) and r:
        c = r[-1] / b[-1]
        k = len(r) - len(b)
        q[k] = c
        for j, y in enumerate(b):
            r[k + j] -= c * y
        r = _ftrim(r[:-1] if r[-1] == 0 else r)
    return _ftrim(q), r


def _specialize_laurent(p: Laurent, l: int) -> CycNum:
    if p.is_zero():
        return CycNum.const(l, 0)
    folded = _kernel.fold_mod(list(p.coeffs), p.low, l)
    red = _kernel.reduce_monic(folded, cyclotomic_poly(l))
    return CycNum(l, tuple(Fraction(x) for x in red))


def specialize(f, l: int) -> CycNum:
    """Value of a Laurent polynomial or rational function at q = eps."""
    _check_level(l)
    if isinstance(f, int):
        return CycNum.const(l, f)
    if isinstance(f, Laurent):
        return _specialize_laurent(f, l)
    if not isinstance(f, RatFuncQ):
        raise TypeError(f"cannot specialize {type(f).__name__}")
    num = _specialize_laurent(f.num, l)
    if f.is_laurent():
        return num
    den = _specialize_laurent(f.den, l)
    if den.is_zero():
        raise PoleError(f"denominator of {f!r} vanishes at a primitive {l}-th root of unity")
    return num / den


def embed(c: CycNum, precision: str | None = None):
    """Complex value of c with eps = exp(2 pi i / l).

    Returns a Python complex in 'double' mode and an mpmath mpc in 'high'.
    """
    mode, bits = get_precision()
    if precision is not None:
        mode = precision
    if mode == "high":
        with mpmath.workprec(bits):
            z = mpmath.expjpi(mpmath.mpf(2) / c.l)
            acc = mpmath.mpc(0)
            zk = mpmath.mpc(1)
            for a in c.coeffs:
                if a:
                    acc += (mpmath.mpf(a.numerator) / a.denominator) * zk
                zk *= z
            return +acc
    z = cmath.exp(2j * math.pi / c.l)
    acc = 0j
    for k, a in enumerate(c.coeffs):
        if a:
            acc += float(a) * z ** k
    return acc
