"""Pure-Python integer polynomial kernels.

Same interface as the compiled ``_laurent`` module; used when the extension
is not built.  Coefficient sequences are dense, constant term first.
"""
from __future__ import annotations


def conv(a, b):
    """Product of two dense integer coefficient sequences."""
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def fold_mod(coeffs, shift, l):
    """Reduce sum_i coeffs[i] q^(shift+i) modulo q^l - 1 into a length-l list."""
    out = [0] * l
    for i, c in enumerate(coeffs):
        if c:
            out[(shift + i) % l] += c
    return out


def reduce_monic(coeffs, modulus):
    """Remainder of an integer polynomial by a monic integer polynomial."""
    r = list(coeffs)
    n = len(modulus) - 1
    for top in range(len(r) - 1, n - 1, -1):
        c = r[top]
        if c == 0:
            continue
        base = top - n
        for j in range(n + 1):
            r[base + j] -= c * modulus[j]
    r = r[:n] + [0] * max(0, n - len(r))
    return r


BACKEND = "python"
