"""The dual Poisson-Lie group G* of SL2 and its coloring maps.

A point of G* is a pair (b+, b-) with b+ = [[k, e], [0, 1/k]] and
b- = [[1/k, 0], [f, k]].  The map I(x) = b+ b-^{-1} lands in SL2 and is
a double cover onto its image: (k, e, f) and (-k, -e, -f) have the same I.
The coordinate k is therefore carried explicitly, and every operation
that has to pick a square root either takes a branch sign or continues
from a reference point.
"""
from __future__ import annotations

import cmath
import json
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import BranchError, DecompositionError, DomainError

TOL = 1e-12
# |d| below this is treated as outside the big cell
_CELL_EPS = 1e-13


@dataclass(frozen=True)
class GStarPoint:
    k: complex
    e: complex
    f: complex
    branch: int = 1

    def __post_init__(self):
        if self.k == 0:
            raise DomainError("k must be nonzero")

    @property
    def coords(self) -> np.ndarray:
        return np.array([self.k, self.e, self.f], dtype=complex)

    @staticmethod
    def from_coords(z, branch: int = 1) -> "GStarPoint":
        return GStarPoint(complex(z[0]), complex(z[1]), complex(z[2]), branch)

    def bplus(self) -> np.ndarray:
        return np.array([[self.k, self.e], [0, 1 / self.k]], dtype=complex)

    def bminus(self) -> np.ndarray:
        return np.array([[1 / self.k, 0], [self.f, self.k]], dtype=complex)

    def to_json(self) -> dict:
        return {"k": [self.k.real, self.k.imag], "e": [self.e.real, self.e.imag],
                "f": [self.f.real, self.f.imag], "branch": self.branch}

    @staticmethod
    def from_json(obj) -> "GStarPoint":
        c = lambda v: complex(v[0], v[1])
        return GStarPoint(c(obj["k"]), c(obj["e"]), c(obj["f"]), int(obj.get("branch", 1)))


def mat2_to_json(g) -> list:
    g = np.asarray(g, dtype=complex)
    return [[float(z.real), float(z.imag)] for z in g.ravel()]


def mat2_from_json(obj) -> np.ndarray:
    if len(obj) != 4 or any(len(p) != 2 for p in obj):
        raise DomainError("a 2x2 matrix is four [re, im] pairs")
    return np.array([complex(a, b) for a, b in obj], dtype=complex).reshape(2, 2)


def big_I(x: GStarPoint) -> np.ndarray:
    """b+ b-^{-1} = [[k^2 - e f, e/k], [-f/k, 1/k^2]]."""
    k, e, f = x.k, x.e, x.f
    return np.array([[k * k - e * f, e / k], [-f / k, 1 / (k * k)]], dtype=complex)


def _check_sl2(g, tol):
    det = g[0, 0] * g[1, 1] - g[0, 1] * g[1, 0]
    if abs(det - 1) > tol * max(1.0, np.abs(g).max() ** 2):
        raise DomainError(f"matrix is not in SL2 (det = {det})")


def gauss(g, branch: int = 1, tol: float = 1e-9) -> GStarPoint:
    """Point x with I(x) = g: k = branch / sqrt(g22), e = g12 k, f = -g21 k."""
    g = np.asarray(g, dtype=complex)
    if branch not in (1, -1):
        raise DomainError("branch must be +1 or -1")
    _check_sl2(g, tol)
    d = g[1, 1]
    if abs(d) < _CELL_EPS:
        raise DecompositionError("g22 = 0: point outside the image of I")
    k = branch / cmath.sqrt(d)
    return GStarPoint(k, g[0, 1] * k, -g[1, 0] * k, branch)


def _branch_of(k: complex, d: complex) -> int:
    return 1 if abs(k * cmath.sqrt(d) - 1) < abs(k * cmath.sqrt(d) + 1) else -1


def gauss_near(g, ref_k: complex, ref_d: complex | None = None) -> GStarPoint:
    """Gauss decomposition with k continued from a nearby reference.

    ``ref_d`` is g22 at the reference point (defaults to 1/ref_k^2).  The
    ratio g22/ref_d must stay away from the negative real axis.
    """
    g = np.asarray(g, dtype=complex)
    d = g[1, 1]
    if abs(d) < _CELL_EPS:
        raise DecompositionError("g22 = 0: point outside the image of I")
    if ref_d is None:
        ref_d = 1 / (ref_k * ref_k)
    ratio = d / ref_d
    if ratio.real < 0 and abs(ratio.imag) < 1e-6 * abs(ratio):
        raise BranchError("continuation crosses the square-root cut")
    k = ref_k / cmath.sqrt(ratio)
    return GStarPoint(k, g[0, 1] * k, -g[1, 0] * k, _branch_of(k, d))


def gmul(p: GStarPoint, q: GStarPoint) -> GStarPoint:
    """Group law of G*: componentwise product of (b+, b-)."""
    bp = p.bplus() @ q.bplus()
    bm = p.bminus() @ q.bminus()
    k = bp[0, 0]
    return GStarPoint(k, bp[0, 1], bm[1, 0], _branch_of(k, 1 / (k * k)))


def ginv(p: GStarPoint) -> GStarPoint:
    """i(k, e, f) = (1/k, -e, -f)."""
    return GStarPoint(1 / p.k, -p.e, -p.f, p.branch)


def partner(x: GStarPoint) -> GStarPoint:
    """The point y with I(y) = b-(x)^{-1} b+(x); (x, y) is fixed by the braiding.

    This is the color pattern used for the d-matrix.
    """
    y = np.linalg.solve(x.bminus(), x.bplus())
    # I(y)_22 = (1 - k^2 e f) / k^2, so k(y) is continued from k(x)
    return gauss_near(y, x.k)


# ---------------------------------------------------------------------------
# braiding of colors


def xL(x, y) -> np.ndarray:
    """x_L(x, y) = x_- y x_-^{-1} (matrix level; independent of the branch)."""
    px = gauss(x)
    m = px.bminus()
    return m @ np.asarray(y, dtype=complex) @ np.linalg.inv(m)


def xR(x, y) -> np.ndarray:
    """x_R(x, y) = x_L(x, y)_+^{-1} x x_L(x, y)_+."""
    pl = gauss(xL(x, y))
    p = pl.bplus()
    return np.linalg.inv(p) @ np.asarray(x, dtype=complex) @ p


def braid(px: GStarPoint, py: GStarPoint):
    """Lifted crossing map (x, y) -> (x_L, x_R) on G* points.

    k of x_L is continued from k of y; x_R is then fixed by conservation of
    the G* product, x_L * x_R = x * y, which also reproduces the matrix
    formula for x_R.
    """
    x = big_I(px)
    y = big_I(py)
    m = px.bminus()
    yl = m @ y @ np.linalg.inv(m)
    pl = gauss_near(yl, py.k, y[1, 1])
    pr = gmul(gmul(ginv(pl), px), py)
    return pl, pr


def braid_inv(pu: GStarPoint, pv: GStarPoint):
    """Inverse of ``braid``: (x, y) with braid(x, y) = (u, v)."""
    up = pu.bplus()
    v = big_I(pv)
    xm = up @ v @ np.linalg.inv(up)
    px = gauss_near(xm, pv.k, v[1, 1])
    py = gmul(gmul(ginv(px), pu), pv)
    return px, py


def braid_matrices(x, y):
    return xL(x, y), xR(x, y)


def braid_check(x, y, z) -> float:
    """Max entrywise discrepancy of B12 B23 B12 and B23 B12 B23 on a triple."""
    def b12(t):
        a, b = braid_matrices(t[0], t[1])
        return (a, b, t[2])

    def b23(t):
        a, b = braid_matrices(t[1], t[2])
        return (t[0], a, b)

    t = (np.asarray(x, complex), np.asarray(y, complex), np.asarray(z, complex))
    lhs = b12(b23(b12(t)))
    rhs = b23(b12(b23(t)))
    return max(float(np.abs(a - b).max()) for a, b in zip(lhs, rhs))


def product_defect(x, y) -> float:
    """|x y - x_L x_R| for the SL2 matrix product (max entry); measured, not assumed."""
    a, b = braid_matrices(x, y)
    return float(np.abs(np.asarray(x) @ np.asarray(y) - a @ b).max())


def gstar_product_defect(x, y) -> float:
    """Same comparison for the G* group law, with x_L, x_R from the matrix formulas.

    I(x * y) versus I(x_L * x_R) where * is the product of G*; the result
    does not depend on the branch signs.
    """
    a, b = braid_matrices(x, y)
    lhs = gmul(gauss(x), gauss(y))
    rhs = gmul(gauss(a), gauss(b))
    return float(np.abs(big_I(lhs) - big_I(rhs)).max())


def dress(g, x: GStarPoint, steps: int = 16) -> GStarPoint:
    """Dressing action: I(dress(g, x)) = g I(x) g^{-1}.

    k is continued from x along the straight segment (1 - t) 1 + t g.
    """
    g = np.asarray(g, dtype=complex)
    X = big_I(x)
    cur = x
    prev_d = X[1, 1]
    for s in range(1, steps + 1):
        t = s / steps
        h = (1 - t) * np.eye(2) + t * g
        if abs(np.linalg.det(h)) < 1e-12:
            raise BranchError("path of dressing elements is singular")
        Y = h @ X @ np.linalg.inv(h)
        cur = gauss_near(Y, cur.k, prev_d)
        prev_d = Y[1, 1]
    return cur


def random_sl2(rng, scale: float) -> np.ndarray:
    """exp of a random traceless complex matrix with entries of size ~scale."""
    from scipy.linalg import expm
    X = scale * (rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))
    X -= np.trace(X) / 2 * np.eye(2)
    return expm(X)


# ---------------------------------------------------------------------------
# Poisson polynomials on G* (k = k_omega, k_alpha = k^2)


class PoissonPoly:
    """Commutative polynomial in k^{+-1}, e, f with rational coefficients.

    Terms map exponent triples (a, b, c) for k^a e^b f^c to Fractions.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        for key, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                self.terms[tuple(key)] = self.terms.get(tuple(key), Fraction(0)) + c
        self.terms = {k: v for k, v in self.terms.items() if v}

    @staticmethod
    def gen(name: str, power: int = 1) -> "PoissonPoly":
        idx = {"k": 0, "e": 1, "f": 2}[name]
        key = [0, 0, 0]
        key[idx] = power
        return PoissonPoly({tuple(key): 1})

    @staticmethod
    def const(c) -> "PoissonPoly":
        return PoissonPoly({(0, 0, 0): c})

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = PoissonPoly.const(other)
        return isinstance(other, PoissonPoly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = PoissonPoly.const(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, Fraction(0)) + v
        return PoissonPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return PoissonPoly({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return PoissonPoly({k: v * other for k, v in self.terms.items()})
        out = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                key = (k1[0] + k2[0], k1[1] + k2[1], k1[2] + k2[2])
                out[key] = out.get(key, Fraction(0)) + v1 * v2
        return PoissonPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if len(self.terms) != 1:
                raise DomainError("only monomials can be inverted")
            (key, c), = self.terms.items()
            if key[1] or key[2]:
                raise DomainError("only powers of k are invertible")
            return PoissonPoly({(-key[0] * -n, 0, 0): Fraction(1) / c ** (-n)})
        out = PoissonPoly.const(1)
        for _ in range(n):
            out = out * self
        return out

    def partial(self, idx: int) -> "PoissonPoly":
        out = {}
        for key, c in self.terms.items():
            p = key[idx]
            if p:
                nk = list(key)
                nk[idx] -= 1
                out[tuple(nk)] = out.get(tuple(nk), Fraction(0)) + c * p
        return PoissonPoly(out)

    def __call__(self, k, e, f):
        return sum(complex(c) * k ** a * e ** b * f ** cc for (a, b, cc), c in self.terms.items())

    def __repr__(self):
        return f"PoissonPoly({dict(sorted(self.terms.items()))})"


_K = PoissonPoly.gen("k")
_E = PoissonPoly.gen("e")
_Fp = PoissonPoly.gen("f")


def _generator_bracket(i: int, j: int) -> PoissonPoly:
    """{x_i, x_j} for x = (k, e, f).

    {k, e} = (omega, alpha) k e, {k, f} = -(omega, alpha) k f,
    {e, f} = k_alpha - k_alpha^{-1} with k_alpha = k^2.
    """
    if i == j:
        return PoissonPoly()
    if i > j:
        return -_generator_bracket(j, i)
    if (i, j) == (0, 1):
        return _K * _E
    if (i, j) == (0, 2):
        return -(_K * _Fp)
    return _K ** 2 - _K ** -2


def pbracket(P: PoissonPoly, Q: PoissonPoly) -> PoissonPoly:
    """Leibniz extension: {P, Q} = sum_ij dP/dx_i dQ/dx_j {x_i, x_j}."""
    out = PoissonPoly()
    dP = [P.partial(i) for i in range(3)]
    dQ = [Q.partial(j) for j in range(3)]
    for i in range(3):
        if dP[i].is_zero():
            continue
        for j in range(3):
            if i == j or dQ[j].is_zero():
                continue
            out = out + dP[i] * dQ[j] * _generator_bracket(i, j)
    return out


def classical_tau(P: PoissonPoly) -> PoissonPoly:
    """tau(k) = k^{-1}, tau(e) = -f k^{-2}, tau(f) = -e k^2, multiplicative."""
    img = (_K ** -1, -(_Fp * _K ** -2), -(_E * _K ** 2))
    out = PoissonPoly()
    for (a, b, c), coef in P.terms.items():
        term = PoissonPoly.const(coef)
        term = term * (img[0] ** a if a >= 0 else _K ** (-a))
        term = term * img[1] ** b * img[2] ** c
        out = out + term
    return out


def gstar_point_json(p: GStarPoint) -> str:
    return json.dumps(p.to_json())
