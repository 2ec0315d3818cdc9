"""Compiled versus pure-Python Laurent kernels.

Times the three kernels on random integer inputs, checks that both
backends agree, and times the exact algebra suite at one level in a
subprocess per backend.

    python benchmarks/bench_kernels.py [--repeat 5] [--level 5]
"""
from __future__ import annotations

import argparse
import json
import os
import random
import subprocess
import sys
import timeit

from holonomy import _laurent_py

try:
    from holonomy import _laurent
except ImportError:  # extension not built
    _laurent = None


def _inputs(rng, n):
    a = [rng.randint(-50, 50) for _ in range(n)]
    b = [rng.randint(-50, 50) for _ in range(n)]
    return a, b


def kernel_table(repeat: int, sizes=(8, 32, 128)) -> list:
    rng = random.Random(0)
    rows = []
    phi7 = [1] * 7  # 7th cyclotomic polynomial, monic
    for n in sizes:
        a, b = _inputs(rng, n)
        cases = {
            "conv": lambda m: m.conv(a, b),
            "fold_mod": lambda m: m.fold_mod(a + b, -n, 7),
            "reduce_monic": lambda m: m.reduce_monic(a + b, phi7),
        }
        for name, fn in cases.items():
            row = {"kernel": name, "n": n}
            for label, mod in (("python", _laurent_py), ("cython", _laurent)):
                if mod is None:
                    row[label] = None
                    continue
                number = max(1, 2000 // n)
                t = min(timeit.repeat(lambda: fn(mod), number=number, repeat=repeat)) / number
                row[label] = t
            if _laurent is not None:
                row["agree"] = list(fn(_laurent)) == list(fn(_laurent_py))
                row["speedup"] = row["python"] / row["cython"]
            rows.append(row)
    return rows


_E2E = ("import time; from holonomy import arith, suites; t = time.perf_counter(); "
        "ok = suites.algebra_suite({l}, 0, samples=60, levels=[{l}]).passed; "
        "print(arith.KERNEL_BACKEND, ok, time.perf_counter() - t)")


def end_to_end(level: int) -> dict:
    out = {}
    for pure in (False, True):
        env = dict(os.environ)
        env.pop("HOLONOMY_PURE", None)
        if pure:
            env["HOLONOMY_PURE"] = "1"
        res = subprocess.run([sys.executable, "-c", _E2E.format(l=level)], env=env,
                             capture_output=True, text=True, check=True)
        backend, ok, secs = res.stdout.split()
        out[backend] = {"seconds": float(secs), "passed": ok == "True"}
    return out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--level", type=int, default=5)
    ap.add_argument("--json", action="store_true", help="print JSON instead of a table")
    args = ap.parse_args(argv)
    rows = kernel_table(args.repeat)
    e2e = end_to_end(args.level)
    if args.json:
        print(json.dumps({"kernels": rows, "algebra_suite": e2e}, indent=2, sort_keys=True))
        return
    print(f"{'kernel':<14}{'n':>5}{'python (us)':>14}{'cython (us)':>14}{'speedup':>9}  agree")
    for r in rows:
        cy = "-" if r["cython"] is None else f"{r['cython'] * 1e6:14.2f}"
        sp = f"{r['speedup']:9.1f}" if "speedup" in r else f"{'-':>9}"
        print(f"{r['kernel']:<14}{r['n']:>5}{r['python'] * 1e6:14.2f}{cy:>14}{sp}  {r.get('agree', '-')}")
    for backend, v in sorted(e2e.items()):
        print(f"algebra suite l={args.level} [{backend}]: {v['seconds']:.3f} s, "
              f"passed = {v['passed']}")


if __name__ == "__main__":
    main()
