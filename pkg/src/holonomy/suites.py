"""Verification suites behind ``holonomy verify``.

Each suite returns a report dict with a list of checks; a check records the
measured value, its tolerance and whether it passed.  All randomness comes
from named substreams of one root seed, so a suite draws the same samples
whether it runs alone or as part of ``all``.
"""
from __future__ import annotations

import zlib
from dataclasses import dataclass

import numpy as np

from . import gstar, uqalg
from .arith import RatFuncQ
from .cyclicrep import CentralChar, build, casimir_check, hom_space
from .errors import BranchError, ConsistencyError, DecompositionError, GenericityError
from .rmatrix import build_crossing, crossing_symmetry_check, dmat, solve_crossing, ybe_residual
from . import tangle

SCHEMA_VERSION = 1
SUITES = ("algebra", "gstar", "reps", "ybe", "tangle")
REJECT = (GenericityError, BranchError, DecompositionError, ConsistencyError)

# default tolerances
TOL = {
    "gauss_roundtrip": 1e-12,
    "braid_relation": 1e-9,
    "gstar_product": 1e-10,
    "relations": 1e-11,
    "powers": 1e-10,
    "casimir": 1e-10,
    "contract": 1e-8,
    "projection": 1e-8,
    "ybe": 1e-7,
    "dmat": 1e-8,
    "s2": 1e-8,
    "cross_sym": 1e-7,
    "reidemeister2": 1e-8,
    "centrality": 1e-8,
    "gauge": 1e-6,
    "closed": 1e-8,
    "top_trace": 1e-10,
    "oracle_reorder": 1e-12,
}


def substream(seed: int, name: str) -> np.random.Generator:
    return np.random.default_rng([int(seed), zlib.crc32(name.encode())])


@dataclass
class Report:
    suite: str
    l: int
    seed: int
    checks: list
    info: dict

    @property
    def passed(self) -> bool:
        return all(c["passed"] for c in self.checks)

    def to_json(self) -> dict:
        return {"schema_version": SCHEMA_VERSION, "suite": self.suite, "l": self.l,
                "seed": self.seed, "passed": self.passed, "checks": self.checks,
                "info": self.info}


def check(name: str, value, tol, passed=None, **extra) -> dict:
    value = float(value)
    if passed is None:
        passed = value <= tol
    out = {"name": name, "value": value, "tol": tol, "passed": bool(passed)}
    out.update(extra)
    return out


def _tol(over, key):
    return (over or {}).get(key, TOL[key])


# ---------------------------------------------------------------------------
# algebra


def random_elem(rng, deg: int = 3, nterms: int = 3) -> uqalg.AlgElem:
    """Random element whose monomials E^k L^n F^m have k + |n| + m <= deg."""
    terms = {}
    for _ in range(nterms):
        k = int(rng.integers(0, deg + 1))
        m = int(rng.integers(0, deg + 1 - k))
        r = deg - k - m
        n = int(rng.integers(-r, r + 1))
        c = RatFuncQ.const(int(rng.integers(1, 4)) * int(rng.choice([-1, 1])))
        terms[uqalg.PBWMonomial(k, n, m)] = c * RatFuncQ.q(int(rng.integers(-1, 2)))
    return uqalg.AlgElem(terms)


def hopf_failures(a, b, c) -> dict:
    """Exact Hopf-algebra identities on a triple; value 1 marks a failure."""
    Da = uqalg.coproduct(a)
    ea = uqalg.AlgElem.scalar(uqalg.counit(a))
    return {
        "associativity": int((a * b) * c != a * (b * c)),
        "coassociativity": int(uqalg.coproduct_left(Da) != uqalg.coproduct_right(Da)),
        "counit": int(uqalg.counit_factor(Da, 0) != a or uqalg.counit_factor(Da, 1) != a),
        "antipode": int(uqalg.hopf_multiply(Da, True) != ea
                        or uqalg.hopf_multiply(Da, False) != ea),
        "coproduct_hom": int(uqalg.coproduct(a * b) != Da * uqalg.coproduct(b)),
        "antipode_antihom": int(uqalg.antipode(a * b) != uqalg.antipode(b) * uqalg.antipode(a)),
    }


def algebra_suite(l: int, seed: int, samples: int = 200, levels=None, tol=None) -> Report:
    levels = levels or sorted({l})
    checks = []
    for lv in levels:
        rep = uqalg.central_power_check(lv)
        bad = [k for k, ok in sorted(rep.items()) if not ok]
        checks.append(check(f"center[l={lv}]", len(bad), 0, failing=bad))
    rng = substream(seed, "algebra")
    fails = {}
    for _ in range(samples):
        a, b, c = (random_elem(rng) for _ in range(3))
        for k, v in hopf_failures(a, b, c).items():
            fails[k] = fails.get(k, 0) + v
    for k in sorted(fails):
        checks.append(check(f"hopf.{k}", fails[k], 0, samples=samples))
    # relations and the braid automorphism on generators
    E, F, L, K, Kinv = uqalg.E, uqalg.F, uqalg.L, uqalg.K, uqalg.Kinv
    q = RatFuncQ.q(1)
    rel = [L * E - E * L * q, L * F * q - F * L,
           E * F - F * E - (K - Kinv) * uqalg.QMQ]
    checks.append(check("relations", sum(not r.is_zero() for r in rel), 0))
    tb = 0
    for g in (E, F, L):
        tb += uqalg.braid_T(uqalg.braid_T(g, "fwd"), "inv") != g
        tb += uqalg.braid_T(uqalg.braid_T(g, "inv"), "fwd") != g
    for x, y in ((L, E), (L, F), (E, F)):
        tb += uqalg.braid_T(x * y) != uqalg.braid_T(x) * uqalg.braid_T(y)
    checks.append(check("braid_T.automorphism", tb, 0))
    Om = uqalg.casimir()
    cas = sum(not uqalg.commutator(Om, g).is_zero() for g in (E, F, L))
    checks.append(check("casimir.central", cas, 0))
    return Report("algebra", l, seed, checks, {"levels": levels, "samples": samples})


# ---------------------------------------------------------------------------
# G*


def gstar_suite(l: int, seed: int, samples: int = 1000, tol=None) -> Report:
    rng = substream(seed, "gstar")
    rt = bc = pd = 0.0
    for _ in range(samples):
        g = gstar.random_sl2(rng, 0.5)
        for branch in (1, -1):
            p = gstar.gauss(g, branch)
            rt = max(rt, float(np.abs(gstar.big_I(p) - g).max()))
    for _ in range(samples):
        x, y, z = (gstar.random_sl2(rng, 0.2) for _ in range(3))
        bc = max(bc, gstar.braid_check(x, y, z))
        pd = max(pd, gstar.gstar_product_defect(x, y))
    # lifted braiding on G* points: inverse and braid relation with branches
    lift = 0.0
    for _ in range(min(samples, 200)):
        px, py, pz = (gstar.gauss(gstar.random_sl2(rng, 0.2)) for _ in range(3))
        u, v = gstar.braid(px, py)
        a, b = gstar.braid_inv(u, v)
        lift = max(lift, float(np.abs(a.coords - px.coords).max()),
                   float(np.abs(b.coords - py.coords).max()))
    P = [gstar.PoissonPoly.gen(n) for n in ("k", "e", "f")]
    br = gstar.pbracket
    jac = 0
    for i in range(3):
        for j in range(3):
            for k in range(3):
                s = br(P[i], br(P[j], P[k])) + br(P[j], br(P[k], P[i])) + br(P[k], br(P[i], P[j]))
                jac += not s.is_zero()
    tau = 0
    for i in range(3):
        for j in range(3):
            lhs = gstar.classical_tau(br(P[i], P[j]))
            rhs = br(gstar.classical_tau(P[i]), gstar.classical_tau(P[j]))
            tau += not (lhs - rhs).is_zero()
    checks = [
        check("gauss.roundtrip", rt, _tol(tol, "gauss_roundtrip"), samples=samples),
        check("braid.relation", bc, _tol(tol, "braid_relation"), samples=samples),
        check("braid.gstar_product", pd, _tol(tol, "gstar_product"), samples=samples),
        check("braid.lift_inverse", lift, _tol(tol, "gauss_roundtrip") * 100),
        check("poisson.jacobi", jac, 0),
        check("poisson.tau_automorphism", tau, 0),
    ]
    return Report("gstar", l, seed, checks, {"samples": samples})


# ---------------------------------------------------------------------------
# representations


def random_char(rng, l: int, scale: float = 0.5) -> CentralChar:
    p = gstar.gauss(gstar.random_sl2(rng, scale))
    return CentralChar.of(p, l, int(rng.integers(l)), int(rng.integers(l)), int(rng.integers(l)))


def reps_suite(l: int, seed: int, samples: int = 50, levels=None, tol=None) -> Report:
    levels = levels or sorted({l})
    checks = []
    for lv in levels:
        rng = substream(seed, f"reps.{lv}")
        rel = pw = cas = 0.0
        bad_comm = bad_lift = bad_dual = rejected = 0
        n = 0
        while n < samples:
            chi = random_char(rng, lv)
            try:
                r = build(chi)
            except REJECT:
                rejected += 1
                continue
            n += 1
            rel = max(rel, r.relation_residual())
            pw = max(pw, r.power_residual())
            s, c = casimir_check(r)
            cas = max(cas, c, abs(s - r.casimir) / max(1.0, abs(s)))
            bad_comm += r.commutant_dim() != 1
            lifts = [build(CentralChar.of(chi.point, lv, j)) for j in range(lv)]
            for i in range(lv):
                for j in range(i + 1, lv):
                    bad_lift += len(hom_space(lifts[j].gens(), lifts[i].gens())[0]) != 0
            from .cyclicrep import dual, intertwiner
            _, nul = intertwiner(dual(dual(r)), r)
            bad_dual += nul != 1
        checks += [
            check(f"relations[l={lv}]", rel, _tol(tol, "relations")),
            check(f"powers[l={lv}]", pw, _tol(tol, "powers")),
            check(f"casimir[l={lv}]", cas, _tol(tol, "casimir")),
            check(f"commutant_dim_one[l={lv}]", bad_comm, 0),
            check(f"lifts_inequivalent[l={lv}]", bad_lift, 0),
            check(f"double_dual[l={lv}]", bad_dual, 0, rejected=rejected),
        ]
    return Report("reps", l, seed, checks, {"levels": levels, "samples": samples})


# ---------------------------------------------------------------------------
# R-matrices


def _pair(rng, scale=0.2):
    return (gstar.gauss(gstar.random_sl2(rng, scale)), gstar.gauss(gstar.random_sl2(rng, scale)))


def crossing_contract(l: int, rng, samples: int, tol=None) -> list:
    worst = {"contract": 0.0, "projection": 0.0, "rank1": 0.0}
    bad_dim = bad_colors = rejected = n = 0
    while n < samples:
        px, py = _pair(rng)
        lifts = (int(rng.integers(l)), int(rng.integers(l)))
        try:
            X = build_crossing(px, py, l, lifts)
            sp = solve_crossing(px, py, l, lifts)
        except REJECT:
            rejected += 1
            if rejected > 3 * samples:
                break
            continue
        n += 1
        worst["contract"] = max(worst["contract"], X.residuals["contract"])
        worst["projection"] = max(worst["projection"], sp.projection_residual(X.matrix))
        worst["rank1"] = max(worst["rank1"], X.residuals["rank1"])
        bad_dim += sp.dim != l
        gl = gstar.braid_matrices(gstar.big_I(px), gstar.big_I(py))
        gap = max(np.abs(gstar.big_I(X.xL) - gl[0]).max(), np.abs(gstar.big_I(X.xR) - gl[1]).max())
        bad_colors += gap > 1e-9
    return [
        check(f"crossing.contract[l={l}]", worst["contract"], _tol(tol, "contract"),
              accepted=n, rejected=rejected),
        check(f"crossing.projection[l={l}]", worst["projection"], _tol(tol, "projection")),
        check(f"crossing.rank_one[l={l}]", worst["rank1"], 1e-8),
        check(f"crossing.nullspace_dim[l={l}]", bad_dim, 0),
        check(f"crossing.output_colors[l={l}]", bad_colors, 0),
        check(f"crossing.accepted[l={l}]", samples - n, 0),
    ]


def ybe_sweep(l: int, rng, samples: int, tol=None) -> tuple:
    res, scalars = [], []
    rejected = 0
    while len(res) < samples:
        pts = [gstar.gauss(gstar.random_sl2(rng, 0.2)) for _ in range(3)]
        lifts = tuple(int(rng.integers(l)) for _ in range(3))
        try:
            r, c = ybe_residual(*pts, l, lifts)
        except REJECT:
            rejected += 1
            if rejected > 3 * samples:
                break
            continue
        res.append(r)
        scalars.append([c.real, c.imag])
    chk = check(f"ybe.residual[l={l}]", max(res) if res else float("inf"), _tol(tol, "ybe"),
                accepted=len(res), rejected=rejected)
    acc = check(f"ybe.accepted[l={l}]", samples - len(res), 0)
    return [chk, acc], scalars


def dmat_sweep(l: int, rng, samples: int, tol=None) -> tuple:
    sgn, fits, res, s2, cv = [], [], 0.0, 0.0, float("inf")
    while len(sgn) < samples:
        p = gstar.gauss(gstar.random_sl2(rng, 0.2))
        try:
            D = dmat(p, l, int(rng.integers(l)))
        except REJECT:
            continue
        sgn.append(D.s)
        fits.append(list(D.fitting_exponents))
        res = max(res, D.residual)
        s2 = max(s2, D.s2_residual)
        cv = min(cv, abs(D.c_V))
    common = sorted(set.intersection(*(set(f) for f in fits))) if fits else []
    checks = [
        check(f"dmat.proportional[l={l}]", res, _tol(tol, "dmat")),
        check(f"dmat.constant_sign[l={l}]", len(set(sgn)), 1, passed=len(set(sgn)) == 1,
              s=sgn[0] if sgn else None, common_exponents=common),
        check(f"dmat.c_V_nonzero[l={l}]", cv, 0.0, passed=cv > 1e-12),
        check(f"dmat.s2_conjugation[l={l}]", s2, _tol(tol, "s2")),
    ]
    return checks, {"exponents": sgn, "fitting": fits}


def cross_sym_sweep(l: int, rng, samples: int) -> dict:
    """Readings of the crossing-symmetry identities that hold on every sample."""
    common = None
    worst = {}
    for _ in range(samples):
        px, py = _pair(rng)
        try:
            rep = crossing_symmetry_check(px, py, l)
        except REJECT:
            continue
        ok = set(rep["passing"])
        common = ok if common is None else common & ok
        for v in rep["variants"]:
            worst[v["variant"]] = max(worst.get(v["variant"], 0.0), v["residual"])
    forms = sorted({v.split("|colors")[0] for v in (common or ())})
    return {"holding_readings": forms, "n_holding_with_colors": len(common or ())}


def ybe_suite(l: int, seed: int, samples: int = 20, tol=None, contract_samples=None,
              dmat_samples: int = 20) -> Report:
    checks = []
    cs = contract_samples if contract_samples is not None else {l: 50}
    for lv, n in sorted(cs.items()):
        checks += crossing_contract(lv, substream(seed, f"crossing.{lv}"), n, tol)
    yc, scalars = ybe_sweep(l, substream(seed, "ybe"), samples, tol)
    checks += yc
    dc, dinfo = dmat_sweep(l, substream(seed, "dmat"), dmat_samples, tol)
    checks += dc
    csym = cross_sym_sweep(l, substream(seed, "cross_sym"), 3)
    checks.append(check(f"crossing_symmetry.some_reading[l={l}]",
                        len(csym["holding_readings"]), 1,
                        passed=len(csym["holding_readings"]) >= 1))
    info = {"ybe_scalars": scalars, "dmat": dinfo, "crossing_symmetry": csym}
    return Report("ybe", l, seed, checks, info)


# ---------------------------------------------------------------------------
# tangles


R2_ORIENTATIONS = ([1, 1], [1, -1], [-1, 1], [-1, -1])


def reidemeister2(l: int, a, b, bottom_or=(1, 1)) -> tuple:
    """(residual, scalar) of xp 1 followed by xm 1 against a multiple of the identity."""
    d = tangle.parse("xp 1\nxm 1")
    r, _ = tangle.evaluate_diagram(d, [a, b], l, bottom_or=list(bottom_or))
    M = r.operator
    c = np.trace(M) / M.shape[0]
    return float(np.linalg.norm(M - c * np.eye(M.shape[0])) / np.linalg.norm(M)), complex(c)


def oracle_report(levels=(5, 7), Ns=(1, 2, 3, 5, 7), precision: str = "double",
                  seed: int = 0) -> dict:
    rows = []
    reorder = 0.0
    min_41 = float("inf")
    imag_41 = 0.0
    for knot in ("3_1", "4_1"):
        for N in Ns:
            a = complex(tangle.kashaev_oracle(knot, N, precision))
            b = complex(tangle.kashaev_oracle(knot, N, precision, reverse=True))
            reorder = max(reorder, abs(a - b) / max(1.0, abs(a)))
            if knot == "4_1":
                min_41 = min(min_41, a.real)
                imag_41 = max(imag_41, abs(a.imag))
            rows.append({"knot": knot, "N": N, "value": [a.real, a.imag]})
    probes = []
    for lv in levels:
        for knot in ("3_1", "4_1"):
            try:
                probes.append(tangle.limit_probe(knot, lv, seed=seed))
            except REJECT as exc:
                probes.append({"knot": knot, "l": lv, "error": str(exc)})
    return {"oracle": rows, "reorder": reorder, "min_4_1": min_41, "imag_4_1": imag_41,
            "convention": tangle.ORACLE_CONVENTION, "limit_probes": probes}


def tangle_suite(l: int, seed: int, samples: int = 20, tol=None, probe_levels=None) -> Report:
    rng = substream(seed, "tangle")
    checks = []
    r2 = 0.0
    for bo in R2_ORIENTATIONS:
        a, b = _pair(rng)
        r2 = max(r2, reidemeister2(l, a, b, bo)[0])
    checks.append(check("reidemeister2", r2, _tol(tol, "reidemeister2")))
    x = gstar.gauss(gstar.random_sl2(rng, 0.2))
    info = {}
    for name, text in (("trefoil", tangle.TREFOIL), ("figure_eight", tangle.FIGURE_EIGHT)):
        d = tangle.parse(text)
        base = tangle.evaluate_diagram(d, [x], l)
        res = base[0]
        checks.append(check(f"{name}.centrality", res.centrality_residual,
                            _tol(tol, "centrality")))
        checks.append(check(f"{name}.top_conjugate", res.residuals["top_trace"],
                            _tol(tol, "top_trace")))
        worst = 0.0
        rejected = 0
        roots = []
        n = 0
        while n < samples:
            g = gstar.random_sl2(rng, 0.1)
            try:
                gt = tangle.gauge_test(d, [x], g, l, base=base)
            except REJECT:
                rejected += 1
                if rejected > samples:
                    break
                continue
            n += 1
            worst = max(worst, gt["relative_difference"])
            roots.append(gt["root_index"])
        checks.append(check(f"{name}.gauge", worst, _tol(tol, "gauge"), dressings=n,
                            rejected=rejected))
        info[name] = {"scalar": [res.scalar.real, res.scalar.imag], "gauge_roots": roots}
    for name, text in (("closed_trefoil", tangle.CLOSED_TREFOIL),
                       ("closed_twist", tangle.CLOSED_TWIST), ("unknot", "cup 1\ncap 1")):
        d = tangle.parse(text)
        res, _ = tangle.evaluate_diagram(d, [], l, cup_guess=[x])
        checks.append(check(f"{name}.vanishes", res.norm / res.scale, _tol(tol, "closed"),
                            norm=res.norm, scale=res.scale))
    orc = oracle_report(levels=tuple(probe_levels) if probe_levels else (), seed=seed)
    checks.append(check("oracle.reorder", orc["reorder"], _tol(tol, "oracle_reorder")))
    checks.append(check("oracle.4_1_real_ge_1", orc["imag_4_1"], 1e-12,
                        passed=orc["min_4_1"] >= 1 - 1e-12 and orc["imag_4_1"] <= 1e-12))
    info["oracle"] = orc
    return Report("tangle", l, seed, checks, info)


def run_suite(name: str, l: int, seed: int, samples: int | None = None, tol=None) -> Report:
    kw = {} if samples is None else {"samples": samples}
    if name == "algebra":
        return algebra_suite(l, seed, tol=tol, **kw)
    if name == "gstar":
        return gstar_suite(l, seed, tol=tol, **kw)
    if name == "reps":
        return reps_suite(l, seed, tol=tol, **kw)
    if name == "ybe":
        return ybe_suite(l, seed, tol=tol, **kw)
    if name == "tangle":
        return tangle_suite(l, seed, tol=tol, **kw)
    raise ValueError(f"unknown suite {name!r}")
