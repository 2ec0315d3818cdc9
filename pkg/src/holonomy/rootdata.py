"""Cartan data, Weyl group combinatorics and convex orders of positive roots.

Conventions
-----------
The Cartan matrix is ``a[i][j] = <alpha_i^vee, alpha_j>``, so the simple
root alpha_j has fundamental-weight coordinates given by column j.  Roots
are stored as integer vectors in the simple-root basis, weights in the
fundamental-weight basis.  The invariant form is normalized by
``(alpha_i, omega_j) = d_i delta_ij``, which gives
``(alpha_i, alpha_j) = d_i a_ij``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DomainError

MAX_WEYL_RANK = 4
_BRAID_M = {0: 2, 1: 3, 2: 4, 3: 6}


def _series_matrix(series: str, r: int):
    s = series.upper()
    if r < 1:
        raise DomainError("rank must be positive")
    a = [[0] * r for _ in range(r)]
    for i in range(r):
        a[i][i] = 2
    for i in range(r - 1):
        a[i][i + 1] = a[i + 1][i] = -1
    if s == "A":
        pass
    elif s == "B":
        if r < 2:
            raise DomainError("B_n needs n >= 2")
        # alpha_r short: <alpha_r^vee, alpha_{r-1}> = -2
        a[r - 1][r - 2] = -2
    elif s == "C":
        if r < 2:
            raise DomainError("C_n needs n >= 2")
        a[r - 2][r - 1] = -2
    elif s == "D":
        if r < 4:
            raise DomainError("D_n needs n >= 4")
        a[r - 2][r - 1] = a[r - 1][r - 2] = 0
        a[r - 3][r - 1] = a[r - 1][r - 3] = -1
    elif s == "G":
        if r != 2:
            raise DomainError("G2 only")
        # alpha_1 short
        a[0][1] = -3
        a[1][0] = -1
    elif s == "F":
        if r != 4:
            raise DomainError("F4 only")
        a[2][1] = -2
    else:
        raise DomainError(f"unsupported series {series!r}")
    return a


def _symmetrizer(a):
    """Minimal positive integers d with d_i a_ij = d_j a_ji."""
    r = len(a)
    d = [None] * r
    for start in range(r):
        if d[start] is not None:
            continue
        d[start] = Fraction(1)
        stack = [start]
        while stack:
            i = stack.pop()
            for j in range(r):
                if i == j or a[i][j] == 0:
                    continue
                if a[j][i] == 0:
                    raise DomainError("matrix is not symmetrizable (a_ij != 0 but a_ji = 0)")
                val = d[i] * Fraction(a[i][j], a[j][i])
                if d[j] is None:
                    d[j] = val
                    stack.append(j)
                elif d[j] != val:
                    raise DomainError("matrix is not symmetrizable")
    den = 1
    for x in d:
        den = den * x.denominator // math.gcd(den, x.denominator)
    ints = [int(x * den) for x in d]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    return tuple(x // g for x in ints)


@dataclass(frozen=True)
class CartanData:
    a: tuple
    d: tuple
    lattice: str = "P"
    series: str | None = None

    @property
    def rank(self) -> int:
        return len(self.a)

    @property
    def braid_m(self) -> dict:
        """m_ij for i < j (0-based indices)."""
        out = {}
        for i in range(self.rank):
            for j in range(i + 1, self.rank):
                out[(i, j)] = _BRAID_M[self.a[i][j] * self.a[j][i]]
        return out

    @property
    def b(self) -> np.ndarray:
        """Symmetrized Cartan matrix b_ij = d_i a_ij = (alpha_i, alpha_j)."""
        a = np.array(self.a)
        return np.array(self.d)[:, None] * a

    def root_to_weight(self, beta) -> tuple:
        a = np.array(self.a)
        return tuple(int(x) for x in a @ np.asarray(beta))

    def coroot_pairing(self, beta, i: int) -> int:
        """<beta, alpha_i^vee> for beta in the simple-root basis."""
        return sum(self.a[i][j] * beta[j] for j in range(self.rank))

    def form_weights(self, lam, mu) -> Fraction:
        """(lam, mu) for weights in fundamental coordinates."""
        # (omega_i, omega_j) = d_i (A^{-1})_{ij}; solve exactly
        inv = _exact_inverse(self.a)
        tot = Fraction(0)
        for i in range(self.rank):
            for j in range(self.rank):
                if lam[i] and mu[j]:
                    tot += lam[i] * mu[j] * self.d[j] * inv[j][i]
        return tot

    def in_root_lattice(self, mu) -> bool:
        inv = _exact_inverse(self.a)
        # mu = sum_j c_j alpha_j  <=>  c = A^{-1} mu (columns are roots)
        c = [sum(inv[i][j] * mu[j] for j in range(self.rank)) for i in range(self.rank)]
        return all(x.denominator == 1 for x in c)

    def to_json(self) -> str:
        return json.dumps({"series": self.series, "rank": self.rank,
                           "matrix": [list(r) for r in self.a], "lattice": self.lattice})

    @staticmethod
    def from_json(text: str) -> "CartanData":
        obj = json.loads(text)
        return build_cartan(matrix=obj["matrix"], lattice=obj.get("lattice", "P"),
                            series=obj.get("series"))


def _exact_inverse(a):
    n = len(a)
    m = [[Fraction(a[i][j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)]
         for i in range(n)]
    for c in range(n):
        p = next(r for r in range(c, n) if m[r][c] != 0)
        m[c], m[p] = m[p], m[c]
        piv = m[c][c]
        m[c] = [x / piv for x in m[c]]
        for r in range(n):
            if r != c and m[r][c] != 0:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return [row[n:] for row in m]


def build_cartan(name: str | None = None, matrix=None, lattice: str = "P",
                 series: str | None = None) -> CartanData:
    """Validated Cartan data from a type label like 'A2' or an explicit matrix."""
    if lattice not in ("P", "Q"):
        raise DomainError("lattice selector must be 'P' or 'Q'")
    if name is not None:
        s, r = name[0], int(name[1:])
        matrix = _series_matrix(s, r)
        series = name.upper()
    if matrix is None:
        raise DomainError("need a type label or an explicit matrix")
    a = [list(map(int, row)) for row in matrix]
    r = len(a)
    if any(len(row) != r for row in a):
        raise DomainError("Cartan matrix must be square")
    for i in range(r):
        if a[i][i] != 2:
            raise DomainError("diagonal entries must be 2")
        for j in range(r):
            if i != j:
                if a[i][j] > 0:
                    raise DomainError("off-diagonal entries must be <= 0")
                if (a[i][j] == 0) != (a[j][i] == 0):
                    raise DomainError("a_ij = 0 iff a_ji = 0")
                if a[i][j] * a[j][i] > 3:
                    raise DomainError("a_ij a_ji must be at most 3 for finite type")
    d = _symmetrizer(a)
    return CartanData(tuple(tuple(row) for row in a), d, lattice, series)


# ---------------------------------------------------------------------------
# Weyl group


def simple_reflect(cd: CartanData, mu, i: int) -> tuple:
    """s_i(mu) = mu - <mu, alpha_i^vee> alpha_i for mu in weight coordinates (0-based i)."""
    if not 0 <= i < cd.rank:
        raise DomainError("reflection index out of range")
    mu = list(mu)
    c = mu[i]
    return tuple(mu[j] - c * cd.a[j][i] for j in range(cd.rank))


def reflect_root(cd: CartanData, beta, i: int) -> tuple:
    """s_i on a root in the simple-root basis."""
    c = cd.coroot_pairing(beta, i)
    out = list(beta)
    out[i] -= c
    return tuple(out)


def positive_roots(cd: CartanData) -> list:
    """Positive roots by closure of the simple roots under reflections."""
    r = cd.rank
    simple = [tuple(int(i == j) for j in range(r)) for i in range(r)]
    seen = set(simple)
    frontier = list(simple)
    while frontier:
        nxt = []
        for beta in frontier:
            for i in range(r):
                g = reflect_root(cd, beta, i)
                if all(x >= 0 for x in g) and g not in seen:
                    seen.add(g)
                    nxt.append(g)
        frontier = nxt
    return sorted(seen, key=lambda b: (sum(b), b))


def _act(cd: CartanData, word, beta):
    """s_{w_1} ... s_{w_k} (beta), rightmost first."""
    for i in reversed(word):
        beta = reflect_root(cd, beta, i)
    return beta


@dataclass(frozen=True)
class ReducedWord:
    letters: tuple  # 1-based indices

    def __len__(self):
        return len(self.letters)


def longest_word(cd: CartanData) -> ReducedWord:
    """Lexicographically least reduced word of w0 (1-based letters).

    Greedy on left descents: every left descent of w can begin a reduced
    word for w, so choosing the smallest one at each step yields the
    lexicographically least word.
    """
    if cd.rank > MAX_WEYL_RANK:
        raise DomainError(f"rank {cd.rank} exceeds supported bound {MAX_WEYL_RANK}")
    r = cd.rank
    simple = [tuple(int(i == j) for j in range(r)) for i in range(r)]
    n_pos = len(positive_roots(cd))
    # v = s_{j_k} ... s_{j_1} w0 after k steps; w0 itself is never formed
    remaining = []
    word = []
    for _ in range(n_pos):
        for j in range(r):
            # left descent test on v = s_{j_k}...s_{j_1} w0:
            # v^{-1}(alpha_j) = w0 s_{j_1} ... s_{j_k}(alpha_j) is negative
            g = _act(cd, remaining, simple[j])
            # w0 maps positive roots to negative ones
            if all(x >= 0 for x in g):
                word.append(j + 1)
                remaining.append(j)
                break
        else:  # pragma: no cover - unreachable for finite type
            raise DomainError("descent search failed")
    return ReducedWord(tuple(word))


def convex_order(cd: CartanData, word: ReducedWord) -> list:
    """beta_a = s_{j_1} ... s_{j_{a-1}} alpha_{j_a}."""
    r = cd.rank
    out = []
    letters = [j - 1 for j in word.letters]
    for a, j in enumerate(letters):
        if not 0 <= j < r:
            raise DomainError("letter out of range")
        alpha = tuple(int(i == j) for i in range(r))
        beta = _act(cd, letters[:a], alpha)
        if any(x < 0 for x in beta) or beta in out:
            raise DomainError("word is not reduced")
        out.append(beta)
    return out


def is_convex(order) -> bool:
    """If beta_i + beta_j = beta_k with i < j, then i < k < j."""
    pos = {b: n for n, b in enumerate(order)}
    for i, bi in enumerate(order):
        for j in range(i + 1, len(order)):
            s = tuple(x + y for x, y in zip(bi, order[j]))
            k = pos.get(s)
            if k is not None and not i < k < j:
                return False
    return True


# sl2 shortcuts used by the algebra and R-matrix layers
A1 = build_cartan("A1")
# (alpha, omega) = d_1 = 1, (omega, omega) = 1/2
ALPHA_OMEGA = 1
OMEGA_OMEGA = A1.form_weights((1,), (1,))
