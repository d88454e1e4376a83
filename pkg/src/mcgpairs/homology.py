"""Symplectic action of mapping classes on H_1(Sigma_g; Z).

A Dehn twist about a curve with class v acts as the transvection
x -> x + <x, v> v.  Words are evaluated so that the rightmost letter acts
first: the matrix of ``"x y"`` is M(x) @ M(y).
"""

from __future__ import annotations

import contextlib
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import TYPE_CHECKING, Iterator

import numpy as np

from .charpoly import Poly, char_poly as _char_poly
from .curves import CurveId, homology_class, standard_curves
from .words import Word, as_word

if TYPE_CHECKING:
    from .derivation import SLP

_TWIST_RE = re.compile(r"^([abc])(\d+)$")

_recorders: list = []
_poly_recorders: list = []


def _discard(stack: list, sink) -> None:
    # by identity: two empty list sinks compare equal
    for k in range(len(stack) - 1, -1, -1):
        if stack[k] is sink:
            del stack[k]
            return


@contextlib.contextmanager
def record_matrices(sink=None) -> Iterator:
    """Pass every SpMatrix constructed inside the block to ``sink.append``.

    With no sink, matrices are collected in a list that is yielded.
    """
    seen = [] if sink is None else sink
    _recorders.append(seen)
    try:
        yield seen
    finally:
        _discard(_recorders, seen)


@contextlib.contextmanager
def record_char_polys(sink=None) -> Iterator:
    """Like :func:`record_matrices`, for polynomials returned by :func:`char_poly`."""
    seen = [] if sink is None else sink
    _poly_recorders.append(seen)
    try:
        yield seen
    finally:
        _discard(_poly_recorders, seen)


class NotInvariant(ValueError):
    def __init__(self, label: str):
        super().__init__(f"subspace {label} is not invariant")
        self.label = label


class UnknownToken(KeyError):
    pass


@lru_cache(maxsize=None)
def form_matrix(genus: int) -> np.ndarray:
    """Gram matrix J of the pairing: <u, v> = u^T J v."""
    J = np.zeros((2 * genus, 2 * genus), dtype=object)
    for i in range(genus):
        J[i, genus + i] = 1
        J[genus + i, i] = -1
    J.flags.writeable = False
    return J


class SpMatrix:
    """Immutable 2g x 2g integer matrix acting on H_1 (column vectors)."""

    __slots__ = ("entries", "genus", "_key")

    def __init__(self, entries):
        arr = np.array(entries, dtype=object)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] % 2:
            raise ValueError(f"expected a square matrix of even size, got {arr.shape}")
        arr.flags.writeable = False
        self.entries = arr
        self.genus = arr.shape[0] // 2
        self._key = None
        for rec in _recorders:
            rec.append(self)

    @classmethod
    def identity(cls, genus: int) -> "SpMatrix":
        return cls(np.identity(2 * genus, dtype=int).astype(object))

    def small(self) -> np.ndarray | None:
        """int64 copy of the entries when they fit in 28 bits, else None."""
        try:
            arr = self.entries.astype(np.int64)
        except OverflowError:
            return None
        if arr.size and np.abs(arr).max() >= 1 << 28:
            return None
        return arr

    def __matmul__(self, other):
        if isinstance(other, SpMatrix):
            if self.entries.shape[0] <= 64:
                A, B = self.small(), other.small()
            else:
                A = B = None
            if A is not None and B is not None:
                # |entries| < 2**28 and n <= 64 keep every sum below 2**62
                return SpMatrix((A @ B).astype(object))
            return SpMatrix(self.entries @ other.entries)
        return self.entries @ np.asarray(other, dtype=object)

    def __mul__(self, other: "SpMatrix") -> "SpMatrix":
        # group product, so words and matrices share the Nielsen-move code
        if not isinstance(other, SpMatrix):
            return NotImplemented
        return self @ other

    def inverse(self) -> "SpMatrix":
        # M^T J M = J  =>  M^-1 = -J M^T J
        J = form_matrix(self.genus)
        return SpMatrix(-(J @ self.entries.T @ J))

    def __pow__(self, k: int) -> "SpMatrix":
        if k < 0:
            return self.inverse() ** (-k)
        out, base = SpMatrix.identity(self.genus), self
        while k:
            if k & 1:
                out = out @ base
            k >>= 1
            if k:
                base = base @ base
        return out

    def key(self) -> tuple:
        if self._key is None:
            self._key = tuple(int(x) for x in self.entries.flat)
        return self._key

    def __eq__(self, other):
        if not isinstance(other, SpMatrix):
            return NotImplemented
        return self.entries.shape == other.entries.shape and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"SpMatrix(genus={self.genus}, {self.entries.tolist()})"

    def is_symplectic(self) -> bool:
        J = form_matrix(self.genus)
        A = self.small()
        if A is not None and A.shape[0] <= 64:
            return bool(np.array_equal(A.T @ J.astype(np.int64) @ A, J.astype(np.int64)))
        return bool(np.array_equal(self.entries.T @ J @ self.entries, J))

    def trace(self) -> int:
        return int(sum(self.entries[i, i] for i in range(2 * self.genus)))

    def max_bits(self) -> int:
        return max(int(x).bit_length() for x in self.entries.flat)

    def to_json(self) -> list[list[str]]:
        return [[str(int(x)) for x in row] for row in self.entries]

    @classmethod
    def from_json(cls, rows) -> "SpMatrix":
        return cls([[int(x) for x in row] for row in rows])


def transvection(v, power: int = 1) -> SpMatrix:
    """Matrix of x -> x + power * <x, v> v; unchanged by v -> -v."""
    v = np.asarray(v, dtype=object)
    if not any(v):
        raise ValueError("transvection of the zero vector")
    genus = len(v) // 2
    Jv = form_matrix(genus) @ v
    # <x, v> = x^T J v = (J v) . x
    return SpMatrix(np.identity(2 * genus, dtype=int).astype(object) + power * np.outer(v, Jv))


def twist(curve: CurveId | str, genus: int, power: int = 1) -> SpMatrix:
    return transvection(homology_class(curve, genus), power)


@lru_cache(maxsize=None)
def _rotation(genus: int, steps: int) -> SpMatrix:
    P = np.zeros((2 * genus, 2 * genus), dtype=object)
    for i in range(genus):
        j = (i + steps) % genus
        P[j, i] = 1
        P[genus + j, genus + i] = 1
    return SpMatrix(P)


def rotation_matrix(genus: int, power: int = 1) -> SpMatrix:
    """r^power, where r sends m_i -> m_{i+1}, l_i -> l_{i+1} (mod g)."""
    if genus < 2:
        raise ValueError("rotation needs genus >= 2")
    return _rotation(genus, power % genus)


def macro_word(token: str, n: int | None) -> Word:
    """Expansion of the built-in macros ``h0`` and ``rho``."""
    if token == "h0":
        return Word.parse("b1 b2 a3 c5")
    if token == "rho":
        if n is None:
            raise UnknownToken("rho needs the parameter n")
        return Word((("r", 1), ("a1", n)))
    raise UnknownToken(token)


def generator_matrix(token: str, exp: int, genus: int, n: int | None = None,
                     slp: "SLP | None" = None) -> SpMatrix:
    match = _TWIST_RE.match(token)
    if match:
        return twist(CurveId(match.group(1), int(match.group(2))), genus, exp)
    if token == "r":
        return rotation_matrix(genus, exp)
    if slp is not None and token in slp:
        return slp.matrix(token) ** exp
    if token in ("h0", "rho"):
        return evaluate(macro_word(token, n), genus) ** exp
    raise UnknownToken(f"cannot resolve token {token!r}")


def evaluate(word: Word | str, genus: int, n: int | None = None, slp: "SLP | None" = None) -> SpMatrix:
    """Matrix of a word; the rightmost letter acts first."""
    word = as_word(word)
    out = SpMatrix.identity(genus)
    for tok, exp in word:
        out = out @ generator_matrix(tok, exp, genus, n, slp)
    return out


def evaluate_by_row_ops(word: Word | str, genus: int, n: int | None = None) -> SpMatrix:
    """Independent evaluator: applies each letter as elementary row operations.

    Only twist tokens, ``r``, ``h0`` and ``rho`` are accepted.  Runs right to
    left, left-multiplying the accumulated matrix by one generator at a time.
    """
    word = as_word(word)
    g = genus
    rows = [[1 if i == j else 0 for j in range(2 * g)] for i in range(2 * g)]

    def left_twist(family: str, idx: int, k: int) -> None:
        i = idx - 1
        if not 0 <= i < g:
            raise ValueError(f"{family}{idx} out of range for genus {g}")
        if family == "a":
            # T = I + k m_i (J m_i)^T, J m_i = -l_i
            rows[i] = [x - k * y for x, y in zip(rows[i], rows[g + i])]
        elif family == "b":
            # J l_i = m_i
            rows[g + i] = [x + k * y for x, y in zip(rows[g + i], rows[i])]
        else:
            j = (i + 1) % g
            s = [y + z for y, z in zip(rows[g + i], rows[g + j])]
            rows[i] = [x - k * y for x, y in zip(rows[i], s)]
            rows[j] = [x - k * y for x, y in zip(rows[j], s)]

    def left_rotate(k: int) -> None:
        k %= g
        rows[:g] = rows[:g][-k:] + rows[:g][:-k] if k else rows[:g]
        rows[g:] = rows[g:][-k:] + rows[g:][:-k] if k else rows[g:]

    def apply(tok: str, exp: int) -> None:
        match = _TWIST_RE.match(tok)
        if match:
            left_twist(match.group(1), int(match.group(2)), exp)
        elif tok == "r":
            left_rotate(exp)
        elif tok in ("h0", "rho"):
            sub = macro_word(tok, n)
            if exp < 0:
                sub, exp = sub.inverse(), -exp
            for _ in range(exp):
                for t, e in reversed(sub.letters):
                    apply(t, e)
        else:
            raise UnknownToken(f"row-op evaluator cannot resolve {tok!r}")

    for tok, exp in reversed(word.letters):
        apply(tok, exp)
    return SpMatrix(rows)


def random_word(genus: int, rng: np.random.Generator, length: int,
                max_power: int = 2, rotation: bool = True) -> Word:
    """Random word in the Lickorish twists (and r)."""
    names = [str(x) for x in standard_curves(genus, lickorish=True)]
    if rotation:
        names.append("r")
    letters = []
    for _ in range(length):
        tok = names[rng.integers(len(names))]
        exp = int(rng.integers(1, max_power + 1)) * (1 if rng.random() < 0.5 else -1)
        letters.append((tok, exp))
    return Word(tuple(letters))


def random_symplectic(genus: int, rng: np.random.Generator, factors: int = 12,
                      spread: int = 2) -> SpMatrix:
    """Product of transvections along random nonzero vectors with entries in [-spread, spread]."""
    out = SpMatrix.identity(genus)
    for _ in range(factors):
        v = np.zeros(2 * genus, dtype=int)
        while not v.any():
            v = rng.integers(-spread, spread + 1, size=2 * genus)
        out = out @ transvection(v.astype(object), int(rng.choice([-1, 1])))
    return out


def char_poly(M) -> Poly:
    if isinstance(M, SpMatrix):
        M = M.entries
    p = _char_poly(M)
    for rec in _poly_recorders:
        rec.append(p)
    return p


@dataclass(frozen=True)
class Subspace:
    label: str
    basis: tuple[int, ...]  # positions in the (m_1..m_g, l_1..l_g) basis


def handle_subspace(label: str, handles, genus: int) -> Subspace:
    basis = []
    for h in handles:
        basis += [h - 1, genus + h - 1]
    return Subspace(label, tuple(basis))


def invariant_subspaces(genus: int) -> list[Subspace]:
    """R_1..R_4 single handles, R_5 handles 5-7, R_6 handles 8..g."""
    if genus < 8:
        raise ValueError("the R_1..R_6 splitting needs genus >= 8")
    subs = [handle_subspace(f"R{j}", [j], genus) for j in range(1, 5)]
    subs.append(handle_subspace("R5", [5, 6, 7], genus))
    subs.append(handle_subspace("R6", range(8, genus + 1), genus))
    return subs


def restrict(M: SpMatrix, S: Subspace) -> np.ndarray:
    """Matrix of M on S's basis; raises NotInvariant if M(S) leaves S."""
    inside = list(S.basis)
    outside = [i for i in range(2 * M.genus) if i not in set(inside)]
    if outside and any(M.entries[np.ix_(outside, inside)].flat):
        raise NotInvariant(S.label)
    return M.entries[np.ix_(inside, inside)].copy()
