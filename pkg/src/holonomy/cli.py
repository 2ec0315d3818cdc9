"""Command-line front end.

    holonomy verify {algebra,gstar,reps,ybe,tangle,all} [--l L] [--seed S] [--samples N]
    holonomy rmatrix --x X.json --y Y.json [--lifts I J]
    holonomy invariant TANGLE --colors COLORS.json [--lifts ...]
    holonomy oracle kashaev --knot {3_1,4_1} --N N
    holonomy oracle limit --knot {3_1,4_1} --l L

Exit codes: 0 pass, 1 failed check, 2 usage or parse error, 3 runtime or
genericity error.  Reports are JSON with sorted keys.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field

from . import arith, suites, tangle
from .errors import HolonomyError, ParseError

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_RUNTIME = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    l: int = 3
    seed: int = 0
    samples: int | None = None
    tol: dict = field(default_factory=dict)
    precision: str = "double"
    out: str | None = None

    def validate(self):
        if self.l < 3 or self.l % 2 == 0:
            raise UsageError(f"--l must be odd and at least 3, got {self.l}")
        if self.samples is not None and self.samples < 1:
            raise UsageError("--samples must be positive")
        if self.precision not in ("double", "high"):
            raise UsageError("--precision must be 'double' or 'high'")
        unknown = sorted(set(self.tol) - set(suites.TOL))
        if unknown:
            raise UsageError(f"unknown tolerance name(s): {', '.join(unknown)}")


def _tol_item(text: str):
    name, sep, val = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError("expected NAME=VALUE")
    try:
        return name.strip(), float(val)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad tolerance value {val!r}") from None


def _common(p: argparse.ArgumentParser):
    p.add_argument("--l", type=int, default=3, help="odd root-of-unity order (default 3)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--tol", type=_tol_item, action="append", default=[],
                   metavar="NAME=VALUE", help="override a tolerance (repeatable)")
    p.add_argument("--precision", choices=("double", "high"),
                   default=os.environ.get("HOLONOMY_PRECISION", "double"))
    p.add_argument("--out", default=None, help="write the JSON report here")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="holonomy", description=__doc__.split("\n\n")[0])
    sub = ap.add_subparsers(dest="cmd", required=True)

    v = sub.add_parser("verify", help="run an invariant suite")
    v.add_argument("suite", choices=suites.SUITES + ("all",))
    _common(v)

    r = sub.add_parser("rmatrix", help="crossing operator for two colors")
    r.add_argument("--x", required=True, help="color file of the left strand")
    r.add_argument("--y", required=True, help="color file of the right strand")
    r.add_argument("--lifts", type=int, nargs=2, default=(0, 0), metavar=("I", "J"))
    _common(r)

    i = sub.add_parser("invariant", help="evaluate a colored tangle")
    i.add_argument("tangle", help="tangle text file")
    i.add_argument("--colors", required=True, help="JSON list of bottom colors")
    i.add_argument("--lifts", type=int, nargs="*", default=None,
                   help="lift index per component (default 0)")
    _common(i)

    o = sub.add_parser("oracle", help="oracle values")
    osub = o.add_subparsers(dest="oracle", required=True)
    k = osub.add_parser("kashaev")
    k.add_argument("--knot", required=True)
    k.add_argument("--N", type=int, required=True)
    _common(k)
    lim = osub.add_parser("limit", help="string-knot scalar along exp(t xi)")
    lim.add_argument("--knot", required=True)
    _common(lim)
    return ap


def _config(ns) -> RunConfig:
    cfg = RunConfig(ns.l, ns.seed, ns.samples, dict(ns.tol), ns.precision, ns.out)
    cfg.validate()
    return cfg


def _emit(obj: dict, cfg: RunConfig):
    text = json.dumps(obj, sort_keys=True, indent=2, default=_default) + "\n"
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _default(o):
    if isinstance(o, complex):
        return [o.real, o.imag]
    try:
        import numpy as np
        if isinstance(o, np.generic):
            return o.item()
    except ImportError:  # pragma: no cover
        pass
    raise TypeError(f"not serializable: {type(o)}")


def _read_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: malformed JSON ({exc})") from None


def decode_color(obj):
    """A color is {"matrix": four [re, im] pairs (row-major), "branch": +-1}."""
    from .gstar import gauss, mat2_from_json
    if isinstance(obj, list) and len(obj) == 1:
        obj = obj[0]
    if not isinstance(obj, dict) or "matrix" not in obj:
        raise ParseError("a color is an object with a 'matrix' field")
    try:
        g = mat2_from_json(obj["matrix"])
    except (TypeError, ValueError, HolonomyError) as exc:
        raise ParseError(f"bad color matrix: {exc}") from None
    branch = obj.get("branch", 1)
    if branch not in (1, -1):
        raise ParseError("branch must be 1 or -1")
    return gauss(g, branch)


def cmd_verify(ns) -> int:
    cfg = _config(ns)
    arith.set_precision(cfg.precision)
    names = suites.SUITES if ns.suite == "all" else (ns.suite,)
    reports = [suites.run_suite(n, cfg.l, cfg.seed, cfg.samples, cfg.tol) for n in names]
    ok = all(r.passed for r in reports)
    out = {"schema_version": suites.SCHEMA_VERSION, "command": "verify", "l": cfg.l,
           "seed": cfg.seed, "passed": ok, "precision": cfg.precision,
           "reports": [r.to_json() for r in reports]}
    _emit(out, cfg)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_rmatrix(ns) -> int:
    from .rmatrix import build_crossing
    cfg = _config(ns)
    px = decode_color(_read_json(ns.x))
    py = decode_color(_read_json(ns.y))
    for j in ns.lifts:
        if not 0 <= j < cfg.l:
            raise UsageError(f"lift index {j} out of range for l = {cfg.l}")
    X = build_crossing(px, py, cfg.l, tuple(ns.lifts))
    out = {"schema_version": suites.SCHEMA_VERSION, "command": "rmatrix"}
    out.update(X.to_json())
    _emit(out, cfg)
    return EXIT_OK


def cmd_invariant(ns) -> int:
    cfg = _config(ns)
    try:
        with open(ns.tangle) as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {ns.tangle}: {exc}") from None
    cols = _read_json(ns.colors)
    if not isinstance(cols, list):
        raise ParseError("the colors file holds a JSON list")
    pts = [decode_color(c) for c in cols]
    d = tangle.parse(text)
    lifts = None
    if ns.lifts:
        lifts = {n: j for n, j in enumerate(ns.lifts)}
    if d.bottom == 0:
        if not pts:
            raise ParseError("a closed diagram needs one color for its first cup")
        res, cs = tangle.evaluate_diagram(d, [], cfg.l, lifts, cup_guess=pts[:1])
    else:
        if len(pts) != d.bottom:
            raise ParseError(f"width mismatch: {len(pts)} colors for {d.bottom} bottom strands")
        res, cs = tangle.evaluate_diagram(d, pts, cfg.l, lifts)
    out = {"schema_version": suites.SCHEMA_VERSION, "command": "invariant", "l": cfg.l,
           "string_knot": d.is_string_knot, "components": d.n_components,
           "top_colors": [p.to_json() for p in cs.top]}
    out.update(res.to_json())
    if d.is_closed:
        out["expected_zero"] = True
        out["near_zero"] = res.norm < suites.TOL["closed"] * res.scale
    _emit(out, cfg)
    return EXIT_OK


def cmd_oracle(ns) -> int:
    cfg = _config(ns)
    if ns.knot not in ("3_1", "4_1"):
        raise UsageError(f"unsupported knot {ns.knot!r}; expected 3_1 or 4_1")
    if ns.oracle == "kashaev":
        if ns.N < 1:
            raise UsageError("--N must be at least 1")
        v = complex(tangle.kashaev_oracle(ns.knot, ns.N, cfg.precision))
        out = {"schema_version": suites.SCHEMA_VERSION, "command": "oracle", "knot": ns.knot,
               "N": ns.N, "value": [v.real, v.imag], "convention": tangle.ORACLE_CONVENTION,
               "precision": cfg.precision}
    else:
        out = {"schema_version": suites.SCHEMA_VERSION, "command": "oracle"}
        out.update(tangle.limit_probe(ns.knot, cfg.l, seed=cfg.seed))
    _emit(out, cfg)
    return EXIT_OK


COMMANDS = {"verify": cmd_verify, "rmatrix": cmd_rmatrix, "invariant": cmd_invariant,
            "oracle": cmd_oracle}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return COMMANDS[ns.cmd](ns)
    except (UsageError, ParseError) as exc:
        print(f"holonomy: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (HolonomyError, ArithmeticError, ValueError, KeyError, FloatingPointError) as exc:
        print(f"holonomy: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
