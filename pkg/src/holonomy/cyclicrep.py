"""Cyclic l-dimensional representations of U_eps(sl2) at an odd root of unity.

For a point x = (k, e, f) of G* the central character is

    L^l -> kappa = k,   Ebar^l -> k e,   Fbar^l -> -f / k,

and the l values of the Casimir Omega = Fbar Ebar + q K + q^-1 K^-1 that are
compatible with it are the lifts.  In the basis v_0 .. v_{l-1}

    L v_n = mu eps^-n v_n,   Fbar v_n = beta v_{n+1},   Ebar v_n = a_n v_{n-1},
    a_n = (C - eps^(1-2n) mu^2 - eps^(2n-1) mu^-2) / beta,

with mu^l = kappa, beta^l = Fbar^l and C the chosen Casimir value.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import GenericityError, LiftError
from .gstar import GStarPoint, big_I, ginv

REL_TOL = 1e-11
_GENERIC_EPS = 1e-12


def eps_of(l: int) -> complex:
    return cmath.exp(2j * math.pi / l)


def casimir_lifts(x: GStarPoint, l: int) -> list:
    """The l Casimir values over the central character of x.

    With s^l + s^-l = tr I(x) = kappa^2 + kappa^-2 + Ebar^l Fbar^l, the lifts
    are C_j = s0 eps^j + (s0 eps^j)^-1 for the principal root s0.
    """
    T = complex(np.trace(big_I(x)))
    w = (T + cmath.sqrt(T * T - 4)) / 2
    s0 = w ** (1.0 / l)
    eps = eps_of(l)
    return [s0 * eps ** j + 1 / (s0 * eps ** j) for j in range(l)]


@dataclass(frozen=True)
class CentralChar:
    point: GStarPoint
    l: int
    casimir: complex
    lift: int | None = None   # index into casimir_lifts, if known
    mu_index: int = 0
    beta_index: int = 0

    @staticmethod
    def of(point: GStarPoint, l: int, lift: int = 0, mu_index: int = 0,
           beta_index: int = 0) -> "CentralChar":
        if not 0 <= lift < l:
            raise LiftError(f"lift index {lift} out of range 0..{l - 1}")
        C = casimir_lifts(point, l)[lift]
        return CentralChar(point, l, C, lift, mu_index % l, beta_index % l)

    @staticmethod
    def with_casimir(point: GStarPoint, l: int, C: complex) -> "CentralChar":
        return CentralChar(point, l, complex(C))

    @property
    def kappa(self) -> complex:
        return self.point.k

    @property
    def e_char(self) -> complex:
        return self.point.e * self.point.k

    @property
    def f_char(self) -> complex:
        return -self.point.f / self.point.k

    @property
    def mu(self) -> complex:
        return complex(self.kappa) ** (1.0 / self.l) * eps_of(self.l) ** self.mu_index

    @property
    def beta(self) -> complex:
        return complex(self.f_char) ** (1.0 / self.l) * eps_of(self.l) ** self.beta_index

    def to_json(self) -> dict:
        return {"point": self.point.to_json(), "l": self.l,
                "casimir": [self.casimir.real, self.casimir.imag], "lift": self.lift,
                "mu_index": self.mu_index, "beta_index": self.beta_index}


@dataclass(frozen=True, eq=False)
class CyclicRep:
    l: int
    E: np.ndarray
    F: np.ndarray
    L: np.ndarray
    chi: CentralChar
    is_dual: bool = False
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def K(self) -> np.ndarray:
        return self.L @ self.L

    @property
    def Kinv(self) -> np.ndarray:
        c = self._cache
        if "Kinv" not in c:
            c["Kinv"] = np.linalg.inv(self.K)
        return c["Kinv"]

    @property
    def point(self) -> GStarPoint:
        return self.chi.point

    @property
    def casimir(self) -> complex:
        return self.chi.casimir

    def gens(self):
        return [self.E, self.F, self.L]

    def relation_residual(self) -> float:
        eps = eps_of(self.l)
        E, F, L = self.E, self.F, self.L
        K, Ki = self.K, self.Kinv
        scale = max(np.linalg.norm(E) * np.linalg.norm(F), np.linalg.norm(K), 1.0)
        res = [
            np.linalg.norm(L @ E - eps * E @ L) / (np.linalg.norm(L) * np.linalg.norm(E) or 1),
            np.linalg.norm(L @ F - F @ L / eps) / (np.linalg.norm(L) * np.linalg.norm(F) or 1),
            np.linalg.norm(E @ F - F @ E - (eps - 1 / eps) * (K - Ki)) / scale,
        ]
        return float(max(res))

    def power_residual(self) -> float:
        """Relative deviation of E^l, F^l, L^l from the central character."""
        l = self.l
        I = np.eye(l)
        pt = self.point
        targets = [(self.E, pt.e * pt.k), (self.F, -pt.f / pt.k), (self.L, pt.k)]
        out = 0.0
        for M, c in targets:
            P = np.linalg.matrix_power(M, l)
            out = max(out, np.linalg.norm(P - c * I) / max(abs(c) * math.sqrt(l), 1e-300))
        return float(out)

    def commutant_dim(self, tol: float = 1e-8) -> int:
        basis, _ = hom_space(self.gens(), self.gens(), tol)
        return len(basis)

    def evaluate(self, elem) -> np.ndarray:
        """Matrix of a symbolic AlgElem, coefficients specialized at eps."""
        from .arith import embed, specialize
        out = np.zeros((self.l, self.l), dtype=complex)
        Linv = np.linalg.inv(self.L)
        for mono, c in elem.terms.items():
            val = complex(embed(specialize(c, self.l), "double"))
            Ln = np.linalg.matrix_power(self.L if mono.n >= 0 else Linv, abs(mono.n))
            out += val * (np.linalg.matrix_power(self.E, mono.k) @ Ln
                          @ np.linalg.matrix_power(self.F, mono.m))
        return out

    def to_json(self) -> dict:
        enc = lambda M: [[[float(z.real), float(z.imag)] for z in row] for row in M]
        return {"l": self.l, "chi": self.chi.to_json(), "dual": self.is_dual,
                "E": enc(self.E), "F": enc(self.F), "L": enc(self.L)}


def build(chi: CentralChar) -> CyclicRep:
    l = chi.l
    if l < 3 or l % 2 == 0:
        raise GenericityError(f"level must be odd and >= 3, got {l}")
    eps = eps_of(l)
    fc = chi.f_char
    scale = max(1.0, abs(chi.kappa), abs(1 / chi.kappa))
    if abs(fc) < _GENERIC_EPS * scale:
        raise GenericityError("Fbar^l vanishes: the module is not cyclic")
    mu, beta = chi.mu, chi.beta
    n = np.arange(l)
    a = (chi.casimir - eps ** (1 - 2 * n) * mu ** 2 - eps ** (2 * n - 1) * mu ** -2) / beta
    if np.min(np.abs(a)) < _GENERIC_EPS * np.max(np.abs(a)):
        raise GenericityError("some a_n vanishes: the module is reducible")
    Lm = np.diag(mu * eps ** (-n.astype(float)))
    E = np.zeros((l, l), dtype=complex)
    F = np.zeros((l, l), dtype=complex)
    for i in range(l):
        F[(i + 1) % l, i] = beta
        E[(i - 1) % l, i] = a[i]
    prod = complex(np.prod(a))
    ec = chi.e_char
    if abs(prod - ec) > 1e-8 * max(1.0, abs(ec), abs(prod)):
        raise LiftError("Casimir value is not a lift of this central character")
    return CyclicRep(l, E, F, Lm, chi)


def rep_at(point: GStarPoint, l: int, lift: int = 0, casimir: complex | None = None) -> CyclicRep:
    if casimir is None:
        return build(CentralChar.of(point, l, lift))
    return build(CentralChar.with_casimir(point, l, casimir))


def dual(rep: CyclicRep) -> CyclicRep:
    """pi*(X) = pi(S(X))^T: E* = (-K^-1 E)^T, F* = (-F K)^T, L* = (L^-1)^T."""
    Ki = rep.Kinv
    chi = CentralChar(ginv(rep.point), rep.l, rep.casimir, rep.chi.lift)
    return CyclicRep(rep.l, (-Ki @ rep.E).T, (-rep.F @ rep.K).T,
                     np.linalg.inv(rep.L).T, chi, not rep.is_dual)


def casimir_check(rep: CyclicRep):
    """(scalar, off-scalar residual) of Omega = Fbar Ebar + eps K + eps^-1 K^-1."""
    eps = eps_of(rep.l)
    Om = rep.F @ rep.E + eps * rep.K + rep.Kinv / eps
    s = np.trace(Om) / rep.l
    res = np.linalg.norm(Om - s * np.eye(rep.l)) / max(np.linalg.norm(Om), 1e-300)
    return complex(s), float(res)


# ---------------------------------------------------------------------------
# linear intertwiner solving


def hom_space(src, dst, tol: float = 1e-8):
    """Basis of {X : X src_i = dst_i X for all i}.

    When the last operator is diagonal on both sides, X is restricted a
    priori to the entries where the diagonals agree, which shrinks the
    linear system by a factor of the dimension.
    Returns (list of basis matrices, singular values of the reduced system).
    """
    n_in = src[0].shape[0]
    n_out = dst[0].shape[0]
    mask = None
    Ls, Ld = src[-1], dst[-1]
    if _is_diag(Ls) and _is_diag(Ld):
        ds, dd = np.diag(Ls), np.diag(Ld)
        scale = max(np.abs(ds).max(), np.abs(dd).max())
        mask = np.abs(dd[:, None] - ds[None, :]) < 1e-7 * scale
        ops = list(zip(src[:-1], dst[:-1]))
    else:
        ops = list(zip(src, dst))
    cols = np.flatnonzero(mask.ravel()) if mask is not None else np.arange(n_in * n_out)
    if cols.size == 0:
        return [], np.zeros(0)
    Iin, Iout = np.eye(n_in), np.eye(n_out)
    blocks = []
    for A, B in ops:
        # row-major vec: vec(X A) = (I kron A^T) vec X, vec(B X) = (B kron I) vec X
        M = np.kron(Iout, A.T) - np.kron(B, Iin)
        blocks.append(M[:, cols] / max(np.linalg.norm(A), np.linalg.norm(B), 1e-300))
    M = np.vstack(blocks)
    # the right singular vectors are all that is needed; U stays thin
    _, s, vh = np.linalg.svd(M, full_matrices=M.shape[0] < M.shape[1])
    smax = s[0] if s.size else 1.0
    s_full = np.concatenate([s, np.zeros(max(0, cols.size - s.size))])
    null = [i for i in range(cols.size) if s_full[i] < tol * smax]
    basis = []
    for i in null:
        X = np.zeros(n_in * n_out, dtype=complex)
        X[cols] = vh[i].conj()
        basis.append(X.reshape(n_out, n_in))
    return basis, s_full


def _is_diag(M) -> bool:
    return np.count_nonzero(M - np.diag(np.diag(M))) == 0


def intertwiner(A: CyclicRep, B: CyclicRep, tol: float = 1e-8):
    """T with T piB(X) = piA(X) T; returns (T or None, nullity).

    T is normalized so that its largest-modulus entry is 1.
    """
    basis, _ = hom_space(B.gens(), A.gens(), tol)
    if not basis:
        return None, 0
    T = basis[0]
    j = np.argmax(np.abs(T))
    return T / T.ravel()[j], len(basis)


def tensor_ops(r1: CyclicRep, r2: CyclicRep):
    """Images of Ebar, Fbar, L under the coproduct on r1 (x) r2."""
    I1, I2 = np.eye(r1.l), np.eye(r2.l)
    return [np.kron(r1.E, I2) + np.kron(r1.K, r2.E),
            np.kron(r1.F, r2.Kinv) + np.kron(I1, r2.F),
            np.kron(r1.L, r2.L)]
