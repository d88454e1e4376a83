"""Letter-by-letter evaluation of very long words on H_1.

Each letter of a packed word (e.g. ``h0``, ``rho``) is re-expanded into its
Dehn twists and ``r``, and the accumulated matrix is left-multiplied by one
twist at a time as elementary row operations.  The kernel runs in int64 and
aborts if any entry could leave the exactly representable range, in which
case the caller falls back to the big-integer evaluator.
"""

from __future__ import annotations

import re

import numba
import numpy as np

from .homology import SpMatrix, evaluate_by_row_ops, macro_word
from .words import PackedWord, Word

_TWIST_RE = re.compile(r"^([abc])(\d+)$")
_KIND = {"a": 0, "b": 1, "c": 2}
_ROT = 3
_LIMIT = 1 << 52


def _ops_for(word: Word, genus: int) -> list[tuple[int, int, int]]:
    """Primitive ops that left-multiply by ``word`` (rightmost letter first)."""
    ops = []
    for tok, exp in reversed(word.letters):
        match = _TWIST_RE.match(tok)
        if match:
            idx = int(match.group(2))
            if not 1 <= idx <= genus:
                raise ValueError(f"{tok} out of range for genus {genus}")
            ops.append((_KIND[match.group(1)], idx - 1, exp))
        elif tok == "r":
            ops.append((_ROT, 0, exp))
        else:
            raise ValueError(f"macro bodies must be twist words, got {tok!r}")
    return ops


def op_table(alphabet: tuple[str, ...], genus: int, n: int | None):
    ops: list[tuple[int, int, int]] = []
    start = np.zeros(2 * len(alphabet), dtype=np.int64)
    end = np.zeros(2 * len(alphabet), dtype=np.int64)
    for t, tok in enumerate(alphabet):
        body = macro_word(tok, n) if tok in ("h0", "rho") else Word(((tok, 1),))
        for sign, w in ((0, body), (1, body.inverse())):
            start[2 * t + sign] = len(ops)
            ops.extend(_ops_for(w, genus))
            end[2 * t + sign] = len(ops)
    return np.array(ops, dtype=np.int64).reshape(-1, 3), start, end


@numba.njit(cache=True)
def _kernel(tokens, exps, ops, start, end, g, limit):
    size = 2 * g
    rows = np.zeros((size, size), dtype=np.int64)
    for i in range(size):
        rows[i, i] = 1
    shift = 0  # stored row p holds true row (p + shift) mod g in each block
    for idx in range(len(tokens) - 1, -1, -1):
        e = exps[idx]
        slot = 2 * tokens[idx] + (0 if e > 0 else 1)
        for _ in range(abs(e)):
            for o in range(start[slot], end[slot]):
                kind = ops[o, 0]
                k = ops[o, 2]
                if kind == 3:
                    shift = (shift + k) % g
                    continue
                i = (ops[o, 1] - shift) % g
                if kind == 0:
                    for col in range(size):
                        rows[i, col] -= k * rows[g + i, col]
                        if abs(rows[i, col]) > limit:
                            return rows, shift, False
                elif kind == 1:
                    for col in range(size):
                        rows[g + i, col] += k * rows[i, col]
                        if abs(rows[g + i, col]) > limit:
                            return rows, shift, False
                else:
                    j = (ops[o, 1] + 1 - shift) % g
                    for col in range(size):
                        sval = rows[g + i, col] + rows[g + j, col]
                        rows[i, col] -= k * sval
                        rows[j, col] -= k * sval
                        if abs(rows[i, col]) > limit or abs(rows[j, col]) > limit:
                            return rows, shift, False
    return rows, shift, True


def evaluate_packed(word: PackedWord, genus: int, n: int | None = None, limit: int | None = None) -> SpMatrix:
    """Exact matrix of a packed word; rightmost letter acts first."""
    ops, start, end = op_table(word.alphabet, genus, n)
    if limit is None:
        # keeps every intermediate of one row operation below 2**53
        kmax = int(np.abs(ops[:, 2]).max()) if len(ops) else 1
        limit = _LIMIT // (2 * max(kmax, 1) + 2)
    rows, shift, ok = _kernel(word.tokens.astype(np.int64), word.exps, ops, start, end, genus, limit)
    if not ok:
        return evaluate_by_row_ops(word.to_word(), genus, n)
    g = genus
    out = np.empty_like(rows)
    for p in range(g):
        out[(p + shift) % g] = rows[p]
        out[g + (p + shift) % g] = rows[g + p]
    return SpMatrix(out.astype(object))
