"""Exact characteristic polynomials of integer matrices.

Polynomials are tuples of Python ints, highest degree first, so
``(1, -3, 1)`` is x^2 - 3x + 1.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

Poly = tuple[int, ...]


def char_poly(matrix) -> Poly:
    """det(xI - M) by Berkowitz's division-free algorithm."""
    A = [[int(x) for x in row] for row in matrix]
    n = len(A)
    if any(len(row) != n for row in A):
        raise ValueError("matrix must be square")
    p = [1]
    for k in range(n):
        # border the leading k x k block with row/column k
        row = A[k][:k]
        col = [A[i][k] for i in range(k)]
        t = [1, -A[k][k]]
        vec = col
        for _ in range(k):
            t.append(-sum(r * v for r, v in zip(row, vec)))
            vec = [sum(A[i][j] * vec[j] for j in range(k)) for i in range(k)]
        new = [0] * (k + 2)
        for i in range(k + 2):
            s = 0
            for j in range(max(0, i - len(t) + 1), min(i, k) + 1):
                s += t[i - j] * p[j]
            new[i] = s
        p = new
    return tuple(p)


def is_reciprocal(p: Sequence[int]) -> bool:
    return tuple(p) == tuple(reversed(p))


def poly_mul(p: Sequence[int], q: Sequence[int]) -> Poly:
    out = [0] * (len(p) + len(q) - 1)
    for i, x in enumerate(p):
        if x:
            for j, y in enumerate(q):
                out[i + j] += x * y
    return tuple(out)


def poly_eval(p: Sequence[int], x: int) -> int:
    acc = 0
    for coeff in p:
        acc = acc * x + coeff
    return acc


def poly_str(p: Sequence[int], var: str = "x") -> str:
    deg = len(p) - 1
    terms = []
    for i, coeff in enumerate(p):
        if coeff == 0:
            continue
        power = deg - i
        mag = abs(coeff)
        if power == 0:
            body = str(mag)
        else:
            body = ("" if mag == 1 else str(mag)) + (var if power == 1 else f"{var}^{power}")
        sign = "-" if coeff < 0 else "+"
        terms.append((sign, body))
    if not terms:
        return "0"
    first_sign, first = terms[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


def char_poly_mod(matrix, p: int) -> Poly:
    """Berkowitz over Z/p with int64 arithmetic; needs p < 2**28 for n <= 64."""
    if p >= 1 << 28:
        raise ValueError("modulus too large for the int64 kernel")
    A = np.asarray(matrix, dtype=np.int64) % p
    n = A.shape[0]
    poly = np.array([1], dtype=np.int64)
    for k in range(n):
        row = A[k, :k]
        vec = A[:k, k].copy()
        sub = A[:k, :k]
        t = np.empty(k + 2, dtype=np.int64)
        t[0] = 1
        t[1] = (-A[k, k]) % p
        for i in range(k):
            t[i + 2] = (-(row @ vec)) % p
            vec = (sub @ vec) % p
        new = np.zeros(k + 2, dtype=np.int64)
        for j in range(k + 1):
            new[j:] = (new[j:] + poly[j] * t[: k + 2 - j]) % p
        poly = new
    return tuple(int(x) for x in poly)
