"""Sliced tangle diagrams, G*-colorings and their invariants.

A diagram is read bottom to top as a list of slices acting on a row of
strand positions.  Every segment carries the G* point of its *upward*
orientation; a strand oriented downward at some level is represented by
the dual of the representation of that point.  With this convention a cup
or cap joins two positions carrying the same point, and crossings between
strands that are not both oriented upward are obtained by rotating a
crossing of the opposite sign with a cup and a cap.

The turn maps are

    cup (up, down):  identity          cap (down, up):  identity
    cup (down, up):  (D^-1)^T          cap (up, down):  D^T

with D = k^2 pi(K^-1) in the representation of the joined point.
"""
from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .cyclicrep import CentralChar, build, casimir_lifts, dual
from .errors import ConsistencyError, GenericityError, ParseError
from .gstar import GStarPoint, big_I, braid, braid_inv, dress, gauss
from .rmatrix import build_crossing, pivot

KINDS = ("xp", "xm", "cup", "cap", "id")
NEWTON_TOL = 1e-13
NEWTON_ACCEPT = 1e-10


# ---------------------------------------------------------------------------
# diagrams


@dataclass(frozen=True)
class Diagram:
    slices: tuple          # (kind, 0-based position); position is None for id
    bottom: int
    widths: tuple          # width before each slice, plus the final width

    @property
    def top(self) -> int:
        return self.widths[-1]

    def trace(self):
        """Edge ids per level and the joins (a, b, sign) between edges.

        sign = +1 when a and b are the same strand traversed in the same
        direction (through a crossing), -1 for the two ends of a cup or cap.
        """
        nid = itertools.count()
        pos = [next(nid) for _ in range(self.bottom)]
        hist, links = [], []
        for kind, i in self.slices:
            hist.append(list(pos))
            if kind == "cup":
                a, b = next(nid), next(nid)
                links.append((a, b, -1))
                pos[i:i] = [a, b]
            elif kind == "cap":
                links.append((pos[i], pos[i + 1], -1))
                del pos[i:i + 2]
            elif kind in ("xp", "xm"):
                a, b = next(nid), next(nid)
                links += [(pos[i], b, 1), (pos[i + 1], a, 1)]
                pos[i], pos[i + 1] = a, b
        hist.append(list(pos))
        return hist, links, next(nid)

    def orientations(self, bottom_or=None) -> list:
        """+1 (up) / -1 (down) for every position at every level."""
        bor = list(bottom_or) if bottom_or is not None else [1] * self.bottom
        if len(bor) != self.bottom:
            raise ParseError("orientation list does not match the bottom width")
        hist, links, n = self.trace()
        o = dict(zip(hist[0], bor))
        while len(o) < n:
            changed = False
            for a, b, s in links:
                if a in o and b not in o:
                    o[b] = s * o[a]
                    changed = True
                elif b in o and a not in o:
                    o[a] = s * o[b]
                    changed = True
            if not changed:
                # a closed component: orient its first cup left-up
                for a, b, s in links:
                    if s == -1 and a not in o:
                        o[a], o[b] = 1, -1
                        break
        for a, b, s in links:
            if o[a] != s * o[b]:
                raise ConsistencyError("bottom orientations are incompatible with the diagram")
        return [[o[e] for e in h] for h in hist]

    def components(self) -> list:
        """Component label of every position at every level."""
        hist, links, n = self.trace()
        parent = list(range(n))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for a, b, _ in links:
            parent[find(a)] = find(b)
        labels = {}
        out = []
        for h in hist:
            out.append([labels.setdefault(find(e), len(labels)) for e in h])
        return out

    @property
    def n_components(self) -> int:
        return len({c for lvl in self.components() for c in lvl})

    @property
    def is_string_knot(self) -> bool:
        return self.bottom == 1 and self.top == 1 and self.n_components == 1

    @property
    def is_closed(self) -> bool:
        return self.bottom == 0 and self.top == 0

    def to_text(self) -> str:
        lines = [f"bottom {self.bottom}"]
        for kind, i in self.slices:
            lines.append("id" if kind == "id" else f"{kind} {i + 1}")
        return "\n".join(lines)


def _need(kind: str, i: int) -> int:
    return {"xp": i + 2, "xm": i + 2, "cap": i + 2, "cup": i, "id": 0}[kind]


def _delta(kind: str) -> int:
    return {"cup": 2, "cap": -2}.get(kind, 0)


def parse(text: str, width: int | None = None) -> Diagram:
    """Read a diagram: one slice per line (';' also separates slices).

    Tokens are ``xp I``, ``xm I``, ``cup I``, ``cap I`` and ``id`` with
    1-based positions; ``#`` starts a comment.  Optional directives
    ``bottom N`` and ``top N`` fix the boundary widths; otherwise the bottom
    width is the least one that makes every slice valid.
    """
    slices = []
    top = None
    for lineno, raw in enumerate(text.replace(";", "\n").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        kind = tok[0].lower()
        if kind in ("bottom", "top"):
            if len(tok) != 2 or not tok[1].isdigit():
                raise ParseError(f"line {lineno}: '{kind}' needs one non-negative integer")
            n = int(tok[1])
            if kind == "bottom":
                if width is not None and width != n:
                    raise ParseError(f"line {lineno}: width mismatch ({n} != {width})")
                width = n
            else:
                top = n
            continue
        if kind not in KINDS:
            raise ParseError(f"line {lineno}: unknown token {tok[0]!r}")
        if kind == "id":
            if len(tok) > 2:
                raise ParseError(f"line {lineno}: malformed slice {line!r}")
            slices.append(("id", None))
            continue
        if len(tok) != 2:
            raise ParseError(f"line {lineno}: '{kind}' needs exactly one position")
        try:
            i = int(tok[1])
        except ValueError:
            raise ParseError(f"line {lineno}: bad position {tok[1]!r}") from None
        if i < 1:
            raise ParseError(f"line {lineno}: position out of range ({i})")
        slices.append((kind, i - 1))
    if not slices:
        raise ParseError("empty diagram")
    if width is None:
        off, w0 = 0, 0
        for kind, i in slices:
            need = 1 if kind == "id" else _need(kind, i)
            w0 = max(w0, need - off)
            off += _delta(kind)
        width = w0
    widths = [width]
    w = width
    for n, (kind, i) in enumerate(slices, 1):
        if kind != "id" and _need(kind, i) > w:
            raise ParseError(f"slice {n}: position {i + 1} out of range for width {w}")
        w += _delta(kind)
        widths.append(w)
    if kind == "id" and w == 0 and len(slices) == 1:
        raise ParseError("id slice on an empty boundary")
    if top is not None and top != w:
        raise ParseError(f"width mismatch: top is {w}, declared {top}")
    return Diagram(tuple(slices), width, tuple(widths))


# ---------------------------------------------------------------------------
# colors


def newton(fun, z0, tol: float = NEWTON_TOL, accept: float = NEWTON_ACCEPT,
           maxit: int = 50) -> np.ndarray:
    """Solve fun(z) = 0 for holomorphic fun by Newton with a difference Jacobian."""
    z = np.array(z0, dtype=complex)
    r = fun(z)
    for _ in range(maxit):
        if np.linalg.norm(r) < tol:
            return z
        J = np.empty((len(r), len(z)), dtype=complex)
        h = 1e-7
        for j in range(len(z)):
            dz = np.zeros(len(z), dtype=complex)
            dz[j] = h
            J[:, j] = (fun(z + dz) - r) / h
        z = z - np.linalg.lstsq(J, r, rcond=None)[0]
        r = fun(z)
    if np.linalg.norm(r) < accept:
        return z
    raise ConsistencyError(f"color equations did not converge (residual {np.linalg.norm(r):.2e})")


def _pt(z) -> GStarPoint:
    return GStarPoint.from_coords(z)


def _flip(kind: str) -> str:
    return "xm" if kind == "xp" else "xp"


def crossing_colors(kind: str, a: GStarPoint, b: GStarPoint, ol: int, orr: int):
    """Output up-colors (left, right) of a crossing with input up-colors (a, b)."""
    if ol == 1 and orr == 1:
        return braid(a, b) if kind == "xp" else braid_inv(a, b)
    fl = _flip(kind)
    if orr == -1:
        # cup on the left, crossing of the other sign on (p, a), cap with b
        def f(z):
            _, po = crossing_colors(fl, _pt(z), a, 1, ol)
            return po.coords - b.coords
        p = _pt(newton(f, b.coords))
        ao, _ = crossing_colors(fl, p, a, 1, ol)
        return p, ao
    def f(z):
        po, _ = crossing_colors(fl, b, _pt(z), orr, 1)
        return po.coords - a.coords
    p = _pt(newton(f, a.coords))
    _, ao = crossing_colors(fl, b, p, orr, 1)
    return ao, p


@dataclass
class ColorState:
    diagram: Diagram
    levels: list           # GStarPoint per position, per level
    orientation: list      # +-1 per position, per level
    components: list       # component label per position, per level
    cup_colors: list
    cap_residual: float = 0.0

    @property
    def bottom(self) -> list:
        return self.levels[0]

    @property
    def top(self) -> list:
        return self.levels[-1]


def _sweep(d: Diagram, ors, bottom, cups):
    pos = list(bottom)
    levels = [list(pos)]
    res = []
    it = iter(cups)
    for n, (kind, i) in enumerate(d.slices):
        o = ors[n]
        if kind == "cup":
            p = next(it)
            pos[i:i] = [p, p]
        elif kind == "cap":
            res.append(pos[i].coords - pos[i + 1].coords)
            del pos[i:i + 2]
        elif kind in ("xp", "xm"):
            pos[i], pos[i + 1] = crossing_colors(kind, pos[i], pos[i + 1], o[i], o[i + 1])
        levels.append(list(pos))
    return levels, (np.concatenate(res) if res else np.zeros(0, dtype=complex))


def propagate(d: Diagram, bottom, bottom_or=None, cup_guess=None) -> ColorState:
    """Color every segment from the bottom colors.

    Cup colors are unknowns fixed by requiring both ends of every cap to
    carry the same point.  ``cup_guess`` seeds the solve (needed for a
    closed diagram, where it also fixes the free color of the first cup).
    """
    bottom = [b if isinstance(b, GStarPoint) else gauss(b) for b in bottom]
    if len(bottom) != d.bottom:
        raise ParseError(f"width mismatch: {len(bottom)} colors for {d.bottom} bottom strands")
    ors = d.orientations(bottom_or)
    ncup = sum(1 for k, _ in d.slices if k == "cup")
    guess = list(cup_guess) if cup_guess is not None else []
    fixed = []
    if not bottom:
        if not guess:
            raise ConsistencyError("a closed diagram needs the color of its first cup")
        fixed = [guess[0]]
        guess = guess[1:]
    nfree = ncup - len(fixed)
    seed = bottom[0] if bottom else fixed[0]
    while len(guess) < nfree:
        guess.append(seed)

    def cups(z):
        return fixed + [_pt(z[3 * j:3 * j + 3]) for j in range(nfree)]

    if nfree:
        z0 = np.concatenate([g.coords for g in guess[:nfree]])
        z = newton(lambda z: _sweep(d, ors, bottom, cups(z))[1], z0)
        cc = cups(z)
    else:
        cc = fixed
    levels, res = _sweep(d, ors, bottom, cc)
    if res.size and np.linalg.norm(res) > NEWTON_ACCEPT:
        raise ConsistencyError(f"closed-loop colors are inconsistent ({np.linalg.norm(res):.2e})")
    return ColorState(d, levels, ors, d.components(), cc,
                      float(np.linalg.norm(res)) if res.size else 0.0)


# ---------------------------------------------------------------------------
# operators


def _rep(p: GStarPoint, l: int, C: complex):
    return build(CentralChar.with_casimir(p, l, C))


def _dpiv(p: GStarPoint, l: int, C: complex) -> np.ndarray:
    return pivot(_rep(p, l, C))


def crossing_tensor(kind, a, b, ol, orr, Ca, Cb, l, log=None) -> np.ndarray:
    """4-tensor X[out_l, out_r, in_l, in_r] of a crossing; strand casimirs (Ca, Cb)."""
    if ol == 1 and orr == 1:
        if kind == "xp":
            X = build_crossing(a, b, l, casimirs=(Ca, Cb))
            M = X.matrix
        else:
            u, v = braid_inv(a, b)
            X = build_crossing(u, v, l, casimirs=(Cb, Ca))
            M = np.linalg.inv(X.matrix)
        if log is not None:
            log.append({"kind": kind, "gauge_scalar": [X.gauge_scalar.real, X.gauge_scalar.imag],
                        "contract": X.residuals["contract"]})
        return M.reshape(l, l, l, l)
    fl = _flip(kind)
    lo, ro = crossing_colors(kind, a, b, ol, orr)
    if orr == -1:
        p = lo
        cup = np.linalg.inv(_dpiv(p, l, Cb)).T
        Y = crossing_tensor(fl, p, a, 1, ol, Cb, Ca, l, log)
        cap = _dpiv(b, l, Cb).T
        return np.einsum("lj,oqja,qb->loab", cup, Y, cap)
    p = ro
    Y = crossing_tensor(fl, b, p, orr, 1, Cb, Ca, l, log)
    # identity turns on this side
    return np.einsum("qobr->orqb", Y)


@dataclass
class InvariantResult:
    operator: np.ndarray
    scalar: complex | None
    centrality_residual: float | None
    ledger: list = field(default_factory=list)
    scale: float = 1.0
    expected_zero: bool = False
    residuals: dict = field(default_factory=dict)
    gauge_log: list = field(default_factory=list)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.operator))

    def to_json(self) -> dict:
        enc = lambda M: [[[float(z.real), float(z.imag)] for z in row] for row in M]
        s = None if self.scalar is None else [self.scalar.real, self.scalar.imag]
        res = dict(self.residuals)
        if self.centrality_residual is not None:
            res["centrality"] = self.centrality_residual
        res["norm"] = self.norm
        res["scale"] = self.scale
        return {"operator": enc(self.operator), "scalar": s,
                "expected_zero": self.expected_zero,
                "residuals": {k: float(v) for k, v in sorted(res.items())},
                "ledger": self.ledger, "gauge_log": self.gauge_log}


def component_casimirs(state: ColorState, l: int, lifts=None) -> dict:
    """Casimir value per component, from the first segment seen and its lift index."""
    lifts = lifts or {}
    out = {}
    for lvl, comps in zip(state.levels, state.components):
        for p, c in zip(lvl, comps):
            if c not in out:
                out[c] = casimir_lifts(p, l)[lifts.get(c, 0) if isinstance(lifts, dict) else lifts[c]]
    return out


def evaluate(d: Diagram, colors: ColorState, l: int, lifts=None) -> InvariantResult:
    """Compose the slice operators bottom to top."""
    Cs = component_casimirs(colors, l, lifts)
    nb = d.bottom
    T = np.eye(l ** nb, dtype=complex).reshape([l] * (2 * nb))
    ledger = []
    scale = 1.0
    for n, (kind, i) in enumerate(d.slices):
        before, after = colors.levels[n], colors.levels[n + 1]
        o = colors.orientation[n]
        comps = colors.components[n]
        if kind == "cup":
            o2 = colors.orientation[n + 1]
            p = after[i]
            C = Cs[colors.components[n + 1][i]]
            M = np.eye(l) if (o2[i], o2[i + 1]) == (1, -1) else np.linalg.inv(_dpiv(p, l, C)).T
            T = np.moveaxis(np.tensordot(M, T, 0), [0, 1], [i, i + 1])
            scale *= np.linalg.norm(M, 2)
        elif kind == "cap":
            p = before[i]
            C = Cs[comps[i]]
            E = np.eye(l) if (o[i], o[i + 1]) == (-1, 1) else _dpiv(p, l, C).T
            T = np.tensordot(E, T, axes=([0, 1], [i, i + 1]))
            scale *= np.linalg.norm(E, 2)
        elif kind in ("xp", "xm"):
            log = []
            X = crossing_tensor(kind, before[i], before[i + 1], o[i], o[i + 1],
                                Cs[comps[i]], Cs[comps[i + 1]], l, log)
            for entry in log:
                entry["slice"] = n
            ledger += log
            T = np.moveaxis(np.tensordot(X, T, axes=([2, 3], [i, i + 1])), [0, 1], [i, i + 1])
            scale *= np.linalg.norm(X.reshape(l * l, l * l), 2)
    nt = d.top
    op = T.reshape(l ** nt, l ** nb)
    scalar = None
    cen = None
    res = {"cap": colors.cap_residual}
    if d.is_closed:
        scalar = complex(op[0, 0])
    elif nb == nt == 1:
        Cb = Cs[colors.components[0][0]]
        Ct = Cs[colors.components[-1][0]]
        rb = _rep(colors.bottom[0], l, Cb)
        rt = _rep(colors.top[0], l, Ct)
        if colors.orientation[0][0] == -1:
            rb = dual(rb)
        if colors.orientation[-1][0] == -1:
            rt = dual(rt)
        cen = max(float(np.linalg.norm(op @ A - B @ op) / (np.linalg.norm(op) * np.linalg.norm(A)))
                  for A, B in zip(rb.gens(), rt.gens()))
        scalar = complex(np.trace(op) / l)
        res["top_color"] = float(np.abs(colors.top[0].coords - colors.bottom[0].coords).max())
        res["top_trace"] = float(abs(np.trace(big_I(colors.top[0]))
                                     - np.trace(big_I(colors.bottom[0]))))
    return InvariantResult(op, scalar, cen, ledger, float(scale), d.is_closed, res)


def evaluate_diagram(d: Diagram, bottom, l: int, lifts=None, bottom_or=None,
                     cup_guess=None) -> tuple:
    cs = propagate(d, bottom, bottom_or, cup_guess)
    return evaluate(d, cs, l, lifts), cs


TREFOIL = "cup 1\nxp 2\nxp 2\nxp 2\ncap 2"
FIGURE_EIGHT = "cup 2\ncup 3\nxp 1\nxm 2\nxp 1\nxm 2\ncap 3\ncap 2"
CLOSED_TREFOIL = "cup 1\ncup 2\nxp 3\nxp 3\nxp 3\ncap 3\ncap 1"
CLOSED_TWIST = "cup 1\ncup 2\nxp 3\ncap 3\ncap 1"
STRING_KNOTS = {"3_1": TREFOIL, "4_1": FIGURE_EIGHT}


def string_knot(text: str, x, l: int, lift: int = 0) -> InvariantResult:
    """F_V(t, x) for a 1-1 tangle with bottom color x."""
    d = parse(text)
    if not d.is_string_knot:
        raise ParseError("diagram is not a string knot")
    res, _ = evaluate_diagram(d, [x], l, lifts={0: lift})
    return res


def _root_distance(r: complex, m: int) -> tuple:
    """Distance of r to the nearest m-th root of unity, and that root's index."""
    j = round(cmath.phase(r) * m / (2 * math.pi)) % m
    return abs(r - cmath.exp(2j * math.pi * j / m)), j


def gauge_test(d: Diagram, bottom, g, l: int, lifts=None, base=None) -> dict:
    """Relative change of the scalar when the colors are dressed by g.

    The bottom colors are dressed along a path from the identity, the cup
    colors are re-solved starting from the dressed old ones, and the two
    scalars are compared up to an l^2-th root of unity (the normalization
    of each crossing is fixed only up to such a root).
    """
    if base is None:
        base = evaluate_diagram(d, bottom, l, lifts)
    r0, cs0 = base
    bottom = [b if isinstance(b, GStarPoint) else gauss(b) for b in bottom]
    nb = [dress(g, b) for b in bottom]
    guess = [dress(g, c) for c in cs0.cup_colors]
    r1, _ = evaluate_diagram(d, nb, l, lifts, cup_guess=guess)
    if r0.scalar is None or r1.scalar is None:
        raise GenericityError("gauge test needs a scalar-valued diagram")
    dist, j = _root_distance(r1.scalar / r0.scalar, l * l)
    return {"relative_difference": float(dist), "root_index": int(j),
            "scalars": [[r0.scalar.real, r0.scalar.imag], [r1.scalar.real, r1.scalar.imag]]}


# ---------------------------------------------------------------------------
# oracle and limit probe


def kashaev_oracle(knot: str, N: int, precision: str = "double", reverse: bool = False):
    """<3_1>_N = sum_k (qbar)_k and <4_1>_N = sum_k |(q)_k|^2, q = exp(2 pi i / N)."""
    if knot not in ("3_1", "4_1"):
        raise ParseError(f"unsupported knot {knot!r}; expected 3_1 or 4_1")
    if N < 1:
        raise ValueError("N must be at least 1")
    if precision == "high":
        import mpmath
        q = mpmath.exp(2j * mpmath.pi / N)
        one = mpmath.mpc(1)
    else:
        q = cmath.exp(2j * math.pi / N)
        one = 1 + 0j
    terms = []
    poch = one
    for k in range(N):
        if k:
            poch = poch * (1 - q ** k)
        terms.append(poch.conjugate() if knot == "3_1" else abs(poch) ** 2)
    if reverse:
        terms = terms[::-1]
    tot = 0 * one
    for t in terms:
        tot = tot + t
    return complex(tot) if precision != "high" else tot


ORACLE_CONVENTION = ("q = exp(2 pi i/N), (q)_k = prod_{j=1}^k (1 - q^j); "
                     "<3_1>_N = sum_{k<N} conj((q)_k), <4_1>_N = sum_{k<N} |(q)_k|^2")


def limit_probe(knot: str, l: int, xi=None, ts=(1e-1, 1e-2, 1e-3), lift: int = 0,
                seed: int = 0) -> dict:
    """String-knot scalar along x_t = exp(t xi) and its successive differences."""
    from scipy.linalg import expm
    if xi is None:
        rng = np.random.default_rng(seed)
        xi = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        xi -= np.trace(xi) / 2 * np.eye(2)
    vals = []
    for t in ts:
        r = string_knot(STRING_KNOTS[knot], gauss(expm(t * xi)), l, lift)
        vals.append(r.scalar)
    diffs = [abs(b - a) for a, b in zip(vals, vals[1:])]
    # the normalization fixes each scalar only up to an l^2-th root of unity
    aligned = [vals[0]]
    for v in vals[1:]:
        _, j = _root_distance(v / aligned[-1], l * l)
        aligned.append(v * cmath.exp(-2j * math.pi * j / (l * l)))
    orc = kashaev_oracle(knot, l)
    return {"knot": knot, "l": l, "t": list(ts),
            "scalars": [[v.real, v.imag] for v in vals],
            "aligned_scalars": [[v.real, v.imag] for v in aligned],
            "moduli": [abs(v) for v in vals], "cauchy_diffs": diffs,
            "aligned_cauchy_diffs": [abs(b - a) for a, b in zip(aligned, aligned[1:])],
            "oracle": [orc.real, orc.imag], "oracle_convention": ORACLE_CONVENTION}
