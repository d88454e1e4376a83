"""Nielsen moves on tuples and the commutator invariant of generating pairs.

For a pair (x1, x2) every Nielsen move sends the commutator [x1, x2] to a
conjugate of itself or of its inverse.  The invariant kept here is the
unordered pair {p(C), p(C^-1)} of characteristic polynomials of the
commutator's action on H_1, which is therefore unchanged by moves; pairs
whose invariants are disjoint lie in different Nielsen classes.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .charpoly import Poly, char_poly_mod, is_reciprocal, poly_mul
from .homology import (
    NotInvariant,
    SpMatrix,
    char_poly,
    evaluate,
    form_matrix,
    invariant_subspaces,
    restrict,
)
from .words import Word, as_word, commutator

# primes just below 2**28, so products of residues fit int64 with headroom
PRIMES = (268435399, 268435367, 268435361)


class MoveKind(enum.Enum):
    INVERT = "Invert"
    SWAP = "Swap"
    RIGHT_MULTIPLY = "RightMultiply"


@dataclass(frozen=True)
class NielsenMove:
    """A move on 1-based tuple positions; RightMultiply(i, j) sets x_i <- x_i x_j."""

    kind: MoveKind
    i: int
    j: int | None = None

    def __post_init__(self):
        if self.i < 1 or (self.j is not None and self.j < 1):
            raise ValueError("positions are 1-based")
        if self.kind is MoveKind.INVERT:
            if self.j is not None:
                raise ValueError("Invert takes one position")
        elif self.j is None or self.i == self.j:
            raise ValueError(f"{self.kind.value} needs two distinct positions")

    @classmethod
    def invert(cls, i: int) -> "NielsenMove":
        return cls(MoveKind.INVERT, i)

    @classmethod
    def swap(cls, i: int, j: int) -> "NielsenMove":
        return cls(MoveKind.SWAP, i, j)

    @classmethod
    def right_multiply(cls, i: int, j: int) -> "NielsenMove":
        return cls(MoveKind.RIGHT_MULTIPLY, i, j)

    def __str__(self):
        args = f"{self.i}" if self.j is None else f"{self.i},{self.j}"
        return f"{self.kind.value}({args})"


Invert = NielsenMove.invert
Swap = NielsenMove.swap
RightMultiply = NielsenMove.right_multiply


def apply_move(items: Sequence, move: NielsenMove) -> tuple:
    """Apply one move to a tuple of group elements (anything with ``*`` and ``inverse``)."""
    out = list(items)
    size = len(out)
    for pos in (move.i, move.j):
        if pos is not None and pos > size:
            raise IndexError(f"position {pos} out of range for a {size}-tuple")
    i = move.i - 1
    if move.kind is MoveKind.INVERT:
        out[i] = out[i].inverse()
    elif move.kind is MoveKind.SWAP:
        j = move.j - 1
        out[i], out[j] = out[j], out[i]
    else:
        out[i] = out[i] * out[move.j - 1]
    return tuple(out)


def apply_moves(items: Sequence, moves: Sequence[NielsenMove]) -> tuple:
    out = tuple(items)
    for mv in moves:
        out = apply_move(out, mv)
    return out


def all_moves(size: int = 2) -> list[NielsenMove]:
    moves = [Invert(i) for i in range(1, size + 1)]
    moves += [Swap(i, j) for i in range(1, size + 1) for j in range(i + 1, size + 1)]
    moves += [RightMultiply(i, j) for i in range(1, size + 1) for j in range(1, size + 1) if i != j]
    return moves


def random_moves(rng: np.random.Generator, count: int, size: int = 2) -> list[NielsenMove]:
    """``count`` moves drawn uniformly from every valid move on a ``size``-tuple."""
    pool = all_moves(size)
    return [pool[k] for k in rng.integers(len(pool), size=count)]


@dataclass(frozen=True)
class GeneratingPair:
    words: tuple[Word, Word]
    genus: int
    n: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "words", tuple(as_word(w) for w in self.words))
        if len(self.words) != 2:
            raise ValueError("a pair has two entries")

    @classmethod
    def h0_rho(cls, n: int, genus: int = 8) -> "GeneratingPair":
        return cls((Word.parse("h0"), Word.parse("rho")), genus, n)

    def matrices(self) -> tuple[SpMatrix, SpMatrix]:
        mats = tuple(evaluate(w, self.genus, self.n) for w in self.words)
        for w, M in zip(self.words, mats):
            if not M.is_symplectic():
                raise ValueError(f"{w} does not act symplectically")
        return mats

    def move(self, mv: NielsenMove) -> "GeneratingPair":
        return GeneratingPair(apply_move(self.words, mv), self.genus, self.n)

    def is_h0_rho(self) -> bool:
        return self.words == (Word.parse("h0"), Word.parse("rho")) and self.n is not None


def reduced_commutator_word(n: int) -> Word:
    """[h0, rho_n] after cancelling the twists that commute past each other."""
    return Word.parse(f"b1 a4^-1 c5 c6^-1 b2 a2^{n} b2^-1 a2^{-n} a3 b3^-1")


@dataclass(frozen=True)
class CommutatorInvariant:
    """Sorted pair (p(C), p(C^-1)); equality and hashing use only ``polys``."""

    polys: tuple[Poly, Poly]
    genus: int
    blocks: dict | None = field(default=None, compare=False, hash=False)
    reduced_form_verified: bool | None = field(default=None, compare=False, hash=False)

    def __post_init__(self):
        for p in self.polys:
            if len(p) != 2 * self.genus + 1 or p[0] != 1:
                raise ValueError("expected monic polynomials of degree 2g")
            if not is_reciprocal(p):
                raise ValueError("commutator polynomial is not reciprocal")

    def as_set(self) -> frozenset:
        return frozenset(self.polys)


def _commutator_matrix(pair) -> tuple[SpMatrix, int, bool | None]:
    if isinstance(pair, GeneratingPair):
        A, B = pair.matrices()
        C = A * B * A.inverse() * B.inverse()
        verified = None
        if pair.is_h0_rho():
            R = evaluate(reduced_commutator_word(pair.n), pair.genus)
            if R != C:
                raise ArithmeticError(f"reduced commutator form fails at n={pair.n}")
            verified = True
        return C, pair.genus, verified
    A, B = pair
    return A * B * A.inverse() * B.inverse(), A.genus, None


def block_polys(M: SpMatrix) -> dict[str, Poly | None]:
    """Char poly of M on each R_i, or None where R_i is not invariant."""
    out = {}
    for S in invariant_subspaces(M.genus):
        try:
            out[S.label] = char_poly(restrict(M, S))
        except NotInvariant:
            out[S.label] = None
    return out


def commutator_invariant(pair: GeneratingPair | tuple[SpMatrix, SpMatrix]) -> CommutatorInvariant:
    C, genus, verified = _commutator_matrix(pair)
    p, q = char_poly(C), char_poly(C.inverse())
    blocks = block_polys(C) if genus >= 8 else None
    return CommutatorInvariant(tuple(sorted((p, q))), genus, blocks, verified)


class Verdict(enum.Enum):
    DISTINCT = "Distinct"
    INCONCLUSIVE = "Inconclusive"


def distinguish(A, B) -> Verdict:
    """Distinct if the commutator invariants share no polynomial; never claims equivalence."""
    inv = [x if isinstance(x, CommutatorInvariant) else commutator_invariant(x) for x in (A, B)]
    if inv[0].genus != inv[1].genus:
        raise ValueError(f"genus mismatch: {inv[0].genus} vs {inv[1].genus}")
    if inv[0].as_set() & inv[1].as_set():
        return Verdict.INCONCLUSIVE
    return Verdict.DISTINCT


def stated_r2_poly(m: int) -> Poly:
    """lambda^2 - (m^2 + 2) lambda - 1: trace m^2 + 2, eigenvalue product -1."""
    return (1, -(m * m + 2), -1)


@dataclass
class R2Report:
    m: int
    genus: int
    reference_m: int
    blocks: dict[str, Poly | None]
    all_invariant: bool
    r2_poly: Poly | None
    expected_r2_poly: Poly
    r2_trace: int | None
    r2_det: int | None
    inverse_r2_poly: Poly | None
    independent_of_m: dict[str, bool]
    blocks_multiply: bool
    failures: list[str]

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "genus": self.genus,
            "reference_m": self.reference_m,
            "blocks": {k: list(v) if v is not None else None for k, v in self.blocks.items()},
            "all_invariant": self.all_invariant,
            "r2_charpoly": list(self.r2_poly) if self.r2_poly else None,
            "expected_r2_charpoly": list(self.expected_r2_poly),
            "r2_trace": self.r2_trace,
            "r2_det": self.r2_det,
            "inverse_r2_charpoly": list(self.inverse_r2_poly) if self.inverse_r2_poly else None,
            "independent_of_m": self.independent_of_m,
            "blocks_multiply": self.blocks_multiply,
            "failures": self.failures,
        }


def _h0_rho_commutator(m: int, genus: int) -> SpMatrix:
    return evaluate(commutator(Word.parse("h0"), Word.parse("rho")), genus, m)


def r2_formula_check(m: int, genus: int = 8, reference_m: int | None = None) -> R2Report:
    """Block-by-block check of [h0, rho_m] on R_1..R_6 against the stated R_2 polynomial."""
    if m < 1 or genus < 8:
        raise ValueError("need m >= 1 and genus >= 8")
    if reference_m is None:
        reference_m = 2 if m == 1 else 1
    C = _h0_rho_commutator(m, genus)
    blocks = block_polys(C)
    ref = block_polys(_h0_rho_commutator(reference_m, genus))
    failures = [f"{k}: not invariant" for k, v in blocks.items() if v is None]
    all_invariant = not failures

    r2 = trace = det = inv_poly = None
    S2 = invariant_subspaces(genus)[1]
    expected = stated_r2_poly(m)
    if blocks["R2"] is not None:
        blk = restrict(C, S2)
        r2 = blocks["R2"]
        trace = int(blk[0, 0] + blk[1, 1])
        det = int(blk[0, 0] * blk[1, 1] - blk[0, 1] * blk[1, 0])
        # the 2x2 inverse computed directly, not via the symplectic shortcut
        if det in (1, -1):
            inv = np.array([[blk[1, 1], -blk[0, 1]], [-blk[1, 0], blk[0, 0]]], dtype=object) * det
            inv_poly = char_poly(inv)
        else:
            failures.append(f"R2: determinant {det} is not a unit")
        if r2 != expected:
            failures.append(f"R2: char poly {list(r2)} != expected {list(expected)}")
        if trace != m * m + 2:
            failures.append(f"R2: trace {trace} != {m * m + 2}")
        if inv_poly is not None and inv_poly != char_poly(restrict(C.inverse(), S2)):
            failures.append("R2: direct 2x2 inverse disagrees with the symplectic inverse")

    independent = {}
    for label in blocks:
        if label == "R2":
            continue
        independent[label] = blocks[label] is not None and blocks[label] == ref[label]
        if not independent[label]:
            failures.append(f"{label}: char poly changes between m={m} and m={reference_m}")

    multiply = False
    if all_invariant:
        prod: Poly = (1,)
        for v in blocks.values():
            prod = poly_mul(prod, v)
        multiply = prod == char_poly(C)
        if not multiply:
            failures.append("block char polys do not multiply to the full char poly")

    return R2Report(m, genus, reference_m, blocks, all_invariant, r2, expected, trace, det,
                    inv_poly, independent, multiply, failures)


# --- residue arithmetic for long move sequences -------------------------------------


class ModMatrix:
    """A symplectic matrix reduced modulo several primes at once (shape P x 2g x 2g)."""

    __slots__ = ("res", "primes")

    def __init__(self, res: np.ndarray, primes: np.ndarray):
        self.res = res
        self.primes = primes

    @classmethod
    def from_sp(cls, M: SpMatrix, primes: Sequence[int] = PRIMES) -> "ModMatrix":
        P = np.array(primes, dtype=np.int64)
        ent = M.entries
        res = np.stack([np.array((ent % p).tolist(), dtype=np.int64) for p in primes])
        return cls(res, P)

    def __mul__(self, other: "ModMatrix") -> "ModMatrix":
        return ModMatrix(np.matmul(self.res, other.res) % self.primes[:, None, None], self.primes)

    def inverse(self) -> "ModMatrix":
        J = np.array(form_matrix(self.res.shape[1] // 2).tolist(), dtype=np.int64)
        out = -(J @ np.transpose(self.res, (0, 2, 1)) @ J)
        return ModMatrix(out % self.primes[:, None, None], self.primes)

    def char_polys(self) -> list[Poly]:
        return [char_poly_mod(self.res[k], int(p)) for k, p in enumerate(self.primes)]


def invariant_mod(pair: Sequence[ModMatrix]) -> list[tuple[Poly, Poly]]:
    """Per prime, the sorted pair of char polys of the commutator and its inverse."""
    A, B = pair
    C = A * B * A.inverse() * B.inverse()
    return [tuple(sorted(x)) for x in zip(C.char_polys(), C.inverse().char_polys())]


def reduce_invariant(inv: CommutatorInvariant, primes: Sequence[int] = PRIMES) -> list[tuple[Poly, Poly]]:
    return [tuple(sorted(tuple(c % p for c in poly) for poly in inv.polys)) for p in primes]


@dataclass
class SequenceCheck:
    moves: int
    exact_moves: int  # length of the prefix replayed in exact integers
    exact_equal: bool
    residues_equal: bool

    @property
    def ok(self) -> bool:
        return self.exact_equal and self.residues_equal


def check_move_sequence(pair: tuple[SpMatrix, SpMatrix], moves: Sequence[NielsenMove],
                        reference: CommutatorInvariant | None = None, exact_bits: int = 256,
                        primes: Sequence[int] = PRIMES) -> SequenceCheck:
    """Replay ``moves`` on a matrix pair and compare commutator invariants with ``reference``.

    The whole sequence runs modulo ``primes``; the longest prefix whose
    entries stay within ``exact_bits`` bits is also replayed exactly and its
    invariant compared as integer polynomials.
    """
    if reference is None:
        reference = commutator_invariant(pair)
    exact = tuple(pair)
    done = 0
    for mv in moves:
        nxt = apply_move(exact, mv)
        if max(M.max_bits() for M in nxt) > exact_bits:
            break
        exact, done = nxt, done + 1
    exact_equal = commutator_invariant(exact) == reference

    residues = tuple(ModMatrix.from_sp(M, primes) for M in pair)
    residues = apply_moves(residues, moves)
    residues_equal = invariant_mod(residues) == reduce_invariant(reference, primes)
    return SequenceCheck(len(moves), done, exact_equal, residues_equal)
