"""Holonomy R-matrices for pairs of cyclic representations.

A crossing with input colors (x, y) and Casimir values (Cx, Cy) is an
operator

    Rhat : V_x (x) V_y  ->  V_{x_L} (x) V_{x_R}

intertwining the coproduct actions, where V_{x_L} carries Cy and V_{x_R}
carries Cx.  These intertwiners form an l-dimensional space.  The
distinguished element is the one of the form P (A (x) B) R0 with

    R0 = R_c f(eps * Fbar (x) Ebar),  f(u) = prod_m (1 - eps^{2m} u)^{-m/l},

R_c the Cartan factor, P the flip, and A, B invertible (the T-maps).  It
is found as the rank-one point of the realigned pencil.  Operators are
normalized to determinant one with a deterministic choice among the l^2
roots.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from . import rootdata
from .cyclicrep import (CentralChar, CyclicRep, build, casimir_lifts, eps_of, hom_space,
                        tensor_ops)
from .errors import BranchError, ConsistencyError, GenericityError
from .gstar import GStarPoint, braid, partner

CUT_TOL = 1e-6
RANK1_TOL = 1e-8
_SEARCH_SEED = 20240611


# ---------------------------------------------------------------------------
# scalar dilogarithm-type product


@dataclass(frozen=True)
class DilogSpec:
    """f(u) = prod_{m=0}^{l-1} (1 - eps^(base m + offset) u)^(-m/l), principal powers."""
    l: int
    base: int = 1
    offset: int = 0

    def factors(self, u: complex):
        eps = eps_of(self.l)
        return [1 - eps ** (self.base * m + self.offset) * u for m in range(self.l)]

    def check_cut(self, u: complex):
        for w in self.factors(u)[1:]:
            if w.real <= 0 and abs(w.imag) < CUT_TOL * max(1.0, abs(w)):
                raise BranchError(f"fractional power argument {w} lies on the cut")

    def __call__(self, u: complex) -> complex:
        self.check_cut(u)
        val = 1.0 + 0j
        for m, w in enumerate(self.factors(u)):
            if m:
                val *= w ** (-m / self.l)
        return val

    def log_series(self, X: np.ndarray) -> np.ndarray:
        """sum_n c_n X^n for log f, truncated at n < l (exact when X^l = 0)."""
        eps = eps_of(self.l)
        out = np.zeros_like(X)
        P = np.eye(X.shape[0], dtype=complex)
        for n in range(1, self.l):
            P = P @ X
            c = sum((m / self.l) * eps ** ((self.base * m + self.offset) * n)
                    for m in range(self.l)) / n
            out = out + c * P
        return out


def _ell_root_projectors(X: np.ndarray, l: int, c: complex):
    """Spectral projectors of X with X^l = c Id (c != 0): eigenvalues c^(1/l) eps^j."""
    eps = eps_of(l)
    lam0 = c ** (1.0 / l)
    powers = [np.eye(X.shape[0], dtype=complex)]
    for _ in range(l - 1):
        powers.append(powers[-1] @ X)
    out = []
    for j in range(l):
        lam = lam0 * eps ** j
        P = sum(Pk / lam ** k for k, Pk in enumerate(powers)) / l
        out.append((lam, P))
    return out


def matrix_function(spec: DilogSpec, X: np.ndarray) -> np.ndarray:
    """f(X) for X with X^l scalar, by the spectral projectors of X."""
    l = spec.l
    Xl = np.linalg.matrix_power(X, l)
    c = np.trace(Xl) / X.shape[0]
    nrm = max(np.linalg.norm(X, 2), 1e-300)
    if abs(c) <= 1e-13 * nrm ** l:
        if np.linalg.norm(Xl) > 1e-10 * nrm ** l:
            raise GenericityError("X^l is neither scalar nor zero")
        from scipy.linalg import expm
        return expm(spec.log_series(X))
    if np.linalg.norm(Xl - c * np.eye(X.shape[0])) > 1e-9 * abs(c) * math.sqrt(X.shape[0]):
        raise GenericityError("X^l is not scalar")
    out = np.zeros_like(X)
    for lam, P in _ell_root_projectors(X, l, c):
        out = out + spec(lam) * P
    return out


RN_BASE, RN_OFFSET = 2, 1


def rn_factor(rx: CyclicRep, ry: CyclicRep, legs: str = "FE",
              base: int = RN_BASE, offset: int = RN_OFFSET) -> np.ndarray:
    """f(pi_x(Fbar) (x) pi_y(Ebar)) with the crossing convention (default),
    or f(pi_x(Ebar) (x) pi_y(Fbar)) with legs='EF'."""
    if legs == "FE":
        X = np.kron(rx.F, ry.E)
    elif legs == "EF":
        X = np.kron(rx.E, ry.F)
    else:
        raise ValueError("legs must be 'FE' or 'EF'")
    return matrix_function(DilogSpec(rx.l, base, offset), X)


def weight_labels(rep: CyclicRep) -> np.ndarray:
    """Labels lambda = -2n (in units of omega) of the L eigenvalues mu eps^-n."""
    if np.count_nonzero(rep.L - np.diag(np.diag(rep.L))):
        raise GenericityError("weight labels need a diagonal L")
    l = rep.l
    mu = rep.chi.mu
    ang = np.angle(np.diag(rep.L) / mu)
    n = np.mod(np.rint(-ang * l / (2 * math.pi)).astype(int), l)
    if len(set(n.tolist())) != l:
        raise GenericityError("degenerate L spectrum")
    return -2 * n


def rc_factor(rx: CyclicRep, ry: CyclicRep) -> np.ndarray:
    """sum eps^{(lambda, lambda')} P_lambda (x) P_lambda' (diagonal)."""
    l = rx.l
    eps = eps_of(l)
    la, lb = weight_labels(rx), weight_labels(ry)
    w = rootdata.OMEGA_OMEGA  # (omega, omega)
    ex = np.array([[int(a * b * w) for b in lb] for a in la]).ravel()
    return np.diag(eps ** ex)


def flip(l: int) -> np.ndarray:
    P = np.zeros((l * l, l * l))
    for i in range(l):
        for j in range(l):
            P[j * l + i, i * l + j] = 1
    return P


def realign(N: np.ndarray, l: int) -> np.ndarray:
    """N[(i,j),(k,m)] -> N'[(i,k),(j,m)]; maps A (x) B to vec(A) vec(B)^T."""
    return N.reshape(l, l, l, l).transpose(0, 2, 1, 3).reshape(l * l, l * l)


def partial_transpose_1(M: np.ndarray, l: int) -> np.ndarray:
    return M.reshape(l, l, l, l).transpose(2, 1, 0, 3).reshape(l * l, l * l)


def partial_transpose_2(M: np.ndarray, l: int) -> np.ndarray:
    return M.reshape(l, l, l, l).transpose(0, 3, 2, 1).reshape(l * l, l * l)


# ---------------------------------------------------------------------------
# crossing operators


@dataclass
class CrossingSpace:
    l: int
    basis: list
    singular_values: np.ndarray
    reps: tuple  # (rx, ry, rl, rr)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def projection_residual(self, R: np.ndarray) -> float:
        B = np.stack([b.ravel() for b in self.basis], 1)
        coef, *_ = np.linalg.lstsq(B, R.ravel(), rcond=None)
        return float(np.linalg.norm(R.ravel() - B @ coef) / np.linalg.norm(R))


@dataclass
class CrossingOperator:
    l: int
    matrix: np.ndarray
    x: GStarPoint
    y: GStarPoint
    xL: GStarPoint
    xR: GStarPoint
    casimirs: tuple          # (Cx, Cy) on the inputs; outputs carry (Cy, Cx)
    gauge_scalar: complex
    tmaps: tuple
    residuals: dict = field(default_factory=dict)

    def unit_max(self) -> np.ndarray:
        """The operator rescaled so that its largest-modulus entry is 1."""
        return self.matrix / self.gauge_scalar

    def to_json(self) -> dict:
        enc = lambda M: [[[float(z.real), float(z.imag)] for z in row] for row in M]
        c = lambda z: [float(z.real), float(z.imag)]
        return {"l": self.l, "x": self.x.to_json(), "y": self.y.to_json(),
                "xL": self.xL.to_json(), "xR": self.xR.to_json(),
                "lifts": {"in": [c(self.casimirs[0]), c(self.casimirs[1])],
                          "out": [c(self.casimirs[1]), c(self.casimirs[0])]},
                "matrix": enc(self.matrix), "gauge_scalar": c(self.gauge_scalar),
                "residuals": {k: float(v) for k, v in sorted(self.residuals.items())}}


def _casimir(point: GStarPoint, l: int, lift, C):
    if C is not None:
        return complex(C)
    return casimir_lifts(point, l)[lift]


def crossing_reps(px: GStarPoint, py: GStarPoint, l: int, Cx: complex, Cy: complex):
    pl, pr = braid(px, py)
    rx = build(CentralChar.with_casimir(px, l, Cx))
    ry = build(CentralChar.with_casimir(py, l, Cy))
    rl = build(CentralChar.with_casimir(pl, l, Cy))
    rr = build(CentralChar.with_casimir(pr, l, Cx))
    return rx, ry, rl, rr


def solve_crossing(px: GStarPoint, py: GStarPoint, l: int, lifts=(0, 0),
                   casimirs=None, tol: float = 1e-8) -> CrossingSpace:
    """Null space of the intertwining contract for the crossing at (x, y)."""
    Cx = _casimir(px, l, lifts[0], None if casimirs is None else casimirs[0])
    Cy = _casimir(py, l, lifts[1], None if casimirs is None else casimirs[1])
    reps = crossing_reps(px, py, l, Cx, Cy)
    rx, ry, rl, rr = reps
    basis, s = hom_space(tensor_ops(rx, ry), tensor_ops(rl, rr), tol)
    if not basis:
        raise ConsistencyError("the intertwining contract has no solution")
    return CrossingSpace(l, basis, s, reps)


def _rank1_point(mats: list, rng) -> tuple:
    """Coefficients c making sum c_i N_i rank one, via a random pencil."""
    n = mats[0].shape[0]
    w1 = rng.normal(size=n) + 1j * rng.normal(size=n)
    w2 = rng.normal(size=n) + 1j * rng.normal(size=n)
    U1 = np.stack([N @ w1 for N in mats], 1)
    U2 = np.stack([N @ w2 for N in mats], 1)
    Qp = rng.normal(size=(len(mats), n))
    from scipy.linalg import eig
    _, vecs = eig(Qp @ U1, Qp @ U2)
    best = None
    for i in range(vecs.shape[1]):
        c = vecs[:, i]
        if not np.all(np.isfinite(c)):
            continue
        M = sum(ci * N for ci, N in zip(c, mats))
        sv = np.linalg.svd(M, compute_uv=False)
        r = sv[1] / sv[0]
        if best is None or r < best[0]:
            best = (r, c)
    return best


def det_normalize(R: np.ndarray):
    """Scale R to determinant 1, choosing the root that puts the phase of the
    largest-modulus entry in (-pi/N, pi/N], N = dim.  Returns (R, largest entry)."""
    N = R.shape[0]
    sign, logabs = np.linalg.slogdet(R)
    R = R / np.exp((logabs + 1j * np.angle(sign)) / N)
    j = np.argmax(np.abs(R))
    ph = np.angle(R.ravel()[j])
    step = 2 * math.pi / N
    m = math.floor((ph + math.pi / N) / step)
    R = R * np.exp(-1j * step * m)
    if np.angle(R.ravel()[j]) <= -math.pi / N:  # rounding guard
        R = R * np.exp(1j * step)
    return R, complex(R.ravel()[j])


def contract_residual(R, reps) -> float:
    rx, ry, rl, rr = reps
    out = 0.0
    for A, B in zip(tensor_ops(rx, ry), tensor_ops(rl, rr)):
        num = np.linalg.norm(R @ A - B @ R)
        den = np.linalg.norm(R) * max(np.linalg.norm(A), np.linalg.norm(B))
        out = max(out, num / den)
    return float(out)


def build_crossing(px: GStarPoint, py: GStarPoint, l: int, lifts=(0, 0),
                   casimirs=None) -> CrossingOperator:
    space = solve_crossing(px, py, l, lifts, casimirs)
    rx, ry, rl, rr = space.reps
    if space.dim != l:
        raise GenericityError(f"intertwiner space has dimension {space.dim}, expected {l}")
    R0 = rc_factor(rx, ry) @ rn_factor(rx, ry)
    R0inv = np.linalg.inv(R0)
    P = flip(l)
    mats = [realign(P.T @ h @ R0inv, l) for h in space.basis]
    rng = np.random.default_rng(_SEARCH_SEED)
    ratio, c = _rank1_point(mats, rng)
    if ratio > RANK1_TOL:
        raise ConsistencyError(f"no factorized element in the intertwiner space ({ratio:.2e})")
    R = sum(ci * h for ci, h in zip(c, space.basis))
    R, top = det_normalize(R)
    M = realign(P.T @ R @ R0inv, l)
    u, s, vh = np.linalg.svd(M)
    A = (u[:, 0] * s[0]).reshape(l, l)
    B = vh[0].reshape(l, l)
    res = {"contract": contract_residual(R, space.reps), "rank1": float(ratio),
           "projection": space.projection_residual(R),
           "cond": float(np.linalg.cond(R))}
    Cx, Cy = rx.casimir, ry.casimir
    return CrossingOperator(l, R, px, py, rl.point, rr.point, (Cx, Cy), top, (A, B), res)


def fit_scalar(lhs: np.ndarray, rhs: np.ndarray):
    """min_c |lhs - c rhs| / |lhs| and the optimal c."""
    a, b = lhs.ravel(), rhs.ravel()
    c = np.vdot(b, a) / np.vdot(b, b)
    return float(np.linalg.norm(a - c * b) / np.linalg.norm(a)), complex(c)


def _apply(state, i, l):
    (pa, Ca), (pb, Cb) = state[i], state[i + 1]
    X = build_crossing(pa, pb, l, casimirs=(Ca, Cb))
    new = list(state)
    new[i], new[i + 1] = (X.xL, Cb), (X.xR, Ca)
    n = len(state)
    op = np.kron(np.kron(np.eye(l ** i), X.matrix), np.eye(l ** (n - i - 2)))
    return new, op


def ybe_residual(px, py, pz, l: int, lifts=(0, 0, 0), casimirs=None):
    """Projective residual of R12 R23 R12 = R23 R12 R23 on V_x (x) V_y (x) V_z.

    Colors are propagated through each side; returns (residual, fitted scalar).
    """
    pts = (px, py, pz)
    if casimirs is None:
        casimirs = [casimir_lifts(p, l)[j] for p, j in zip(pts, lifts)]
    st = list(zip(pts, casimirs))
    s1, A1 = _apply(st, 0, l)
    s1, A2 = _apply(s1, 1, l)
    s1, A3 = _apply(s1, 0, l)
    s2, B1 = _apply(st, 1, l)
    s2, B2 = _apply(s2, 0, l)
    s2, B3 = _apply(s2, 1, l)
    color_gap = max(float(np.abs(a[0].coords - b[0].coords).max()) for a, b in zip(s1, s2))
    if color_gap > 1e-8:
        raise ConsistencyError(f"output colors of the two sides differ by {color_gap:.2e}")
    return fit_scalar(A3 @ A2 @ A1, B3 @ B2 @ B1)


# ---------------------------------------------------------------------------
# d-matrix


@dataclass
class DMatrix:
    d: np.ndarray
    c_V: complex
    residual: float
    s: int
    fitting_exponents: tuple
    s2_residual: float


def dmat_formula(px: GStarPoint, l: int, C: complex) -> np.ndarray:
    """Second-factor partial trace of P t1(t1(R)^-1), R = P^T Rhat(x, y*).

    y* is the partner color of x; (x, y*) is fixed by the braiding.
    """
    py = partner(px)
    X = build_crossing(px, py, l, casimirs=(C, C))
    P = flip(l)
    R = P.T @ X.matrix
    Q = partial_transpose_1(np.linalg.inv(partial_transpose_1(R, l)), l)
    return np.einsum("ijkj->ik", (P @ Q).reshape(l, l, l, l))


def pivot(rep: CyclicRep) -> np.ndarray:
    """k^2 pi(K^-1) = pi(L^(2l-2)): the d-operator used at cups and caps."""
    return rep.point.k ** 2 * rep.Kinv


def dmat(px: GStarPoint, l: int, lift: int = 0, casimir=None, tol: float = 1e-8) -> DMatrix:
    from . import uqalg
    C = _casimir(px, l, lift, casimir)
    rep = build(CentralChar.with_casimir(px, l, C))
    d = dmat_formula(px, l, C)
    fits = {}
    for s in (-2, -1, 1, 2):
        G = np.linalg.matrix_power(rep.L if s > 0 else np.linalg.inv(rep.L), abs(s))
        r, c = fit_scalar(d, G)
        fits[s] = (r, c)
    ok = tuple(s for s in (-2, -1, 1, 2) if fits[s][0] <= tol)
    s_best = ok[0] if ok else min(fits, key=lambda s: fits[s][0])
    res, c_V = fits[s_best]
    dinv = np.linalg.inv(d)
    s2 = 0.0
    for g in (uqalg.E, uqalg.F, uqalg.L):
        lhs = rep.evaluate(uqalg.antipode(uqalg.antipode(g)))
        rhs = d @ rep.evaluate(g) @ dinv
        s2 = max(s2, float(np.linalg.norm(lhs - rhs) / np.linalg.norm(lhs)))
    return DMatrix(d, c_V, res, s_best, ok, s2)


_CS_FORMS = {
    # name: (partial transpose, order) where "inv-first" is t(inv(t(inv R)))
    # and "t-first" is inv(t(inv(t(R))))
    "t1/inv-first": (1, "inv-first"),
    "t1/t-first": (1, "t-first"),
    "t2/inv-first": (2, "inv-first"),
    "t2/t-first": (2, "t-first"),
}


def crossing_symmetry_check(px: GStarPoint, py: GStarPoint, l: int, lifts=(0, 0),
                            tol: float = 1e-7) -> dict:
    """Search the readings of the crossing-symmetry identities R = D^-1 G(R) D.

    G(R) is a double partial-transpose-inverse of R = P^T Rhat (four forms),
    D = d (x) 1 or 1 (x) d acts on one tensor factor, and d is pi(K^-1) or its
    inverse taken in the representation of one of the colors x, y, x_L, x_R
    (on each side).  Each reading is fitted projectively; the report lists
    all readings with their residuals and the ones that hold.
    """
    if np.allclose(px.coords, [1, 0, 0]) or np.allclose(py.coords, [1, 0, 0]):
        return {"skipped": "identity color is not generic", "passing": [], "variants": []}
    X = build_crossing(px, py, l, lifts)
    reps = dict(zip(("x", "y", "xL", "xR"), solve_crossing(px, py, l, lifts).reps))
    R = flip(l).T @ X.matrix
    inv = np.linalg.inv
    I = np.eye(l)
    out = []
    for form, (factor, order) in _CS_FORMS.items():
        tp = partial_transpose_1 if factor == 1 else partial_transpose_2
        if order == "inv-first":
            G = tp(inv(tp(inv(R), l)), l)
        else:
            G = inv(tp(inv(tp(R, l)), l))
        for side in (1, 2):
            emb = (lambda M: np.kron(M, I)) if side == 1 else (lambda M: np.kron(I, M))
            for power in (1, -1):
                for a in reps:
                    for b in reps:
                        Da = reps[a].Kinv if power == 1 else reps[a].K
                        Db = reps[b].Kinv if power == 1 else reps[b].K
                        r, _ = fit_scalar(R, emb(inv(Da)) @ G @ emb(Db))
                        name = f"{form}|d on factor {side}|d=K^{-power}|colors {a},{b}"
                        out.append({"variant": name, "residual": r})
    passing = [v["variant"] for v in out if v["residual"] < tol]
    return {"variants": out, "passing": passing}
