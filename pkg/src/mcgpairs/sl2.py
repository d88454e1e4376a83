"""SL(2, Z) as the amalgam Z_4 *_{Z_2} Z_6.

Fixed realizations: x = [[0,-1],[1,0]] (order 4), y = [[0,-1],[1,1]]
(order 6), with x^2 = y^3 = -I and x^-1 y = [[1,1],[0,1]].  Every element is
uniquely (-I)^eps times an alternating product of syllables x and y, y2
(= y^2), which is the reduced word of its image in PSL(2, Z) = Z_2 * Z_3.
"""

from __future__ import annotations

import enum
import itertools
from collections import deque
from dataclasses import dataclass, field

from .nielsen import Invert, NielsenMove, RightMultiply, Swap, apply_moves
from .words import Word


class NotUnimodular(ValueError):
    pass


@dataclass(frozen=True)
class Mat2:
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise NotUnimodular(f"determinant of {self.rows()} is not 1")

    @classmethod
    def of(cls, rows) -> "Mat2":
        (a, b), (c, d) = rows
        return cls(int(a), int(b), int(c), int(d))

    def rows(self):
        return [[self.a, self.b], [self.c, self.d]]

    def __mul__(self, o: "Mat2") -> "Mat2":
        return Mat2(self.a * o.a + self.b * o.c, self.a * o.b + self.b * o.d,
                    self.c * o.a + self.d * o.c, self.c * o.b + self.d * o.d)

    def inverse(self) -> "Mat2":
        return Mat2(self.d, -self.b, -self.c, self.a)

    def __neg__(self) -> "Mat2":
        return Mat2(-self.a, -self.b, -self.c, -self.d)

    def __pow__(self, k: int) -> "Mat2":
        base = self if k >= 0 else self.inverse()
        out = I
        for _ in range(abs(k)):
            out = out * base
        return out

    def trace(self) -> int:
        return self.a + self.d

    def __str__(self):
        return f"{self.a} {self.b} {self.c} {self.d}"


I = Mat2(1, 0, 0, 1)
X = Mat2(0, -1, 1, 0)
Y = Mat2(0, -1, 1, 1)
Z = Mat2(-1, 0, 0, -1)
T = Mat2(1, 1, 0, 1)

SYLLABLE = {"x": X, "y": Y, "y2": Y * Y}


def _push(stack: list[str], s: str) -> None:
    """Append a syllable, reducing in Z_2 * Z_3 (x^2 = y^3 = 1)."""
    if not stack:
        stack.append(s)
        return
    top = stack[-1]
    if s == "x":
        if top == "x":
            stack.pop()
        else:
            stack.append(s)
        return
    if top == "x":
        stack.append(s)
        return
    total = (1 if top == "y" else 2) + (1 if s == "y" else 2)
    stack.pop()
    if total % 3 == 1:
        stack.append("y")
    elif total % 3 == 2:
        stack.append("y2")


@dataclass(frozen=True)
class AmalgamNormalForm:
    central: int  # exponent of -I, 0 or 1
    syllables: tuple[str, ...]

    def __post_init__(self):
        if self.central not in (0, 1):
            raise ValueError("central exponent must be 0 or 1")
        for s, t in zip(self.syllables, self.syllables[1:]):
            if (s == "x") == (t == "x"):
                raise ValueError(f"syllables {s}, {t} do not alternate")
        if any(s not in SYLLABLE for s in self.syllables):
            raise ValueError("unknown syllable")

    @property
    def syllable_length(self) -> int:
        return len(self.syllables)

    def tokens(self) -> str:
        return " ".join((("z",) if self.central else ()) + self.syllables)


def recompose(nf: AmalgamNormalForm) -> Mat2:
    out = Z if nf.central else I
    for s in nf.syllables:
        out = out * SYLLABLE[s]
    return out


def _round_div(a: int, c: int) -> int:
    # nearest integer to a / c, exact in integers
    q, r = divmod(a, c)
    if 2 * r > abs(c) or (2 * r == abs(c) and c > 0):
        q += 1
    return q


def decompose(M: Mat2 | tuple | list) -> AmalgamNormalForm:
    """Normal form by continued-fraction reduction over T and x, then reduction in Z_2 * Z_3."""
    if not isinstance(M, Mat2):
        M = Mat2.of(M) if len(M) == 2 else Mat2(*M)
    # M = T^q1 x T^q2 x ... T^qk up to sign, found by left-dividing
    letters: list[tuple[str, int]] = []
    W = M
    while W.c != 0:
        q = _round_div(W.a, W.c)
        if q:
            letters.append(("T", q))
            W = T ** (-q) * W
        letters.append(("x", 1))
        W = X.inverse() * W
    if W.b:
        letters.append(("T", W.b * W.a))  # W = +-T^(b/a) with a = +-1
    stack: list[str] = []
    for tok, k in letters:
        if tok == "x":
            _push(stack, "x")
        elif k > 0:
            for _ in range(k):  # T = x^-1 y, i.e. x y up to sign
                _push(stack, "x")
                _push(stack, "y")
        else:
            for _ in range(-k):  # T^-1 = y^-1 x, i.e. y2 x up to sign
                _push(stack, "y2")
                _push(stack, "x")
    nf = AmalgamNormalForm(0, tuple(stack))
    R = recompose(nf)
    if R == M:
        return nf
    if -R == M:
        return AmalgamNormalForm(1, nf.syllables)
    raise ArithmeticError(f"normal form of {M} failed to recompose")


def syllable_length(M: Mat2) -> int:
    return decompose(M).syllable_length


# --- Nielsen reduction ----------------------------------------------------------------


@dataclass(frozen=True)
class ExtendedMove:
    """x_i <- x_i x_j^e (side "right") or x_j^e x_i (side "left"), as elementary moves."""

    side: str
    i: int
    j: int
    e: int

    def elementary(self) -> tuple[NielsenMove, ...]:
        i, j = self.i, self.j
        if self.side == "right":
            if self.e == 1:
                return (RightMultiply(i, j),)
            return (Invert(j), RightMultiply(i, j), Invert(j))
        # x_j^e x_i = (x_i^-1 x_j^-e)^-1
        if self.e == 1:
            return (Invert(i), Invert(j), RightMultiply(i, j), Invert(i), Invert(j))
        return (Invert(i), RightMultiply(i, j), Invert(i))

    def __str__(self):
        inv = "" if self.e == 1 else "Inverse"
        side = "Right" if self.side == "right" else "Left"
        return f"{side}Multiply{inv}({self.i},{self.j})"


EXTENDED = tuple(ExtendedMove(side, i, j, e) for side in ("right", "left")
                 for i, j in ((1, 2), (2, 1)) for e in (1, -1))


@dataclass
class ReductionResult:
    pair: tuple[Mat2, Mat2]
    log: list[ExtendedMove]
    canonical: bool  # both entries have syllable length <= 1
    exhausted: bool  # stopped without reaching a canonical pair

    def elementary_moves(self) -> list[NielsenMove]:
        return [m for ext in self.log for m in ext.elementary()]

    def lengths(self) -> tuple[int, int]:
        return tuple(syllable_length(M) for M in self.pair)


def _total(pair) -> int:
    return syllable_length(pair[0]) + syllable_length(pair[1])


def _step(pair, mv: ExtendedMove):
    return apply_moves(pair, mv.elementary())


def _bfs_improve(pair, depth: int):
    """Shortest extended-move path to a strictly shorter pair, never exceeding the start length."""
    start = _total(pair)
    seen = {pair}
    frontier = deque([(pair, [])])
    while frontier:
        cur, path = frontier.popleft()
        if len(path) == depth:
            continue
        for mv in EXTENDED:
            nxt = _step(cur, mv)
            if nxt in seen:
                continue
            seen.add(nxt)
            length = _total(nxt)
            if length < start:
                return nxt, path + [mv]
            if length == start:
                frontier.append((nxt, path + [mv]))
    return None


def nielsen_reduce(pair: tuple[Mat2, Mat2], depth: int = 4, max_steps: int = 10_000) -> ReductionResult:
    """Greedy length reduction with a bounded breadth-first escape from plateaus."""
    cur = tuple(pair)
    log: list[ExtendedMove] = []
    for _ in range(max_steps):
        if all(syllable_length(M) <= 1 for M in cur):
            break
        length = _total(cur)
        best = min(((_total(_step(cur, mv)), k) for k, mv in enumerate(EXTENDED)))
        if best[0] < length:
            mv = EXTENDED[best[1]]
            cur = _step(cur, mv)
            log.append(mv)
            continue
        found = _bfs_improve(cur, depth)
        if found is None:
            break
        cur, path = found
        log.extend(path)
    canonical = all(syllable_length(M) <= 1 for M in cur)
    return ReductionResult(cur, log, canonical, not canonical)


# --- generation -----------------------------------------------------------------------


class Generation(enum.Enum):
    YES = "Yes"
    UNKNOWN = "Unknown"


@dataclass
class GenerationResult:
    status: Generation
    certificates: dict[str, Word] = field(default_factory=dict)
    reason: str = ""


_LETTERS = (("g1", 1), ("g1", -1), ("g2", 1), ("g2", -1))


def evaluate_pair_word(word: Word, pair: tuple[Mat2, Mat2]) -> Mat2:
    out = I
    for tok, e in word:
        out = out * (pair[0] if tok == "g1" else pair[1]) ** e
    return out


def _ball(pair, radius: int) -> dict[Mat2, Word]:
    """Shortest word for every element within ``radius`` letters."""
    gens = {("g1", 1): pair[0], ("g1", -1): pair[0].inverse(),
            ("g2", 1): pair[1], ("g2", -1): pair[1].inverse()}
    ball = {I: Word()}
    layer = [(I, ())]
    for _ in range(radius):
        nxt = []
        for M, letters in layer:
            for lt in _LETTERS:
                if letters and letters[-1] == (lt[0], -lt[1]):
                    continue
                P = M * gens[lt]
                if P not in ball:
                    w = letters + (lt,)
                    ball[P] = Word(w)
                    nxt.append((P, w))
        layer = nxt
    return ball


def is_generating(pair: tuple[Mat2, Mat2], depth: int = 16) -> GenerationResult:
    """Yes with words for x and x^-1 y over (g1, g2), or Unknown; one-sided."""
    radius = (depth + 1) // 2
    ball = _ball(tuple(pair), radius)
    certs = {}
    for name, target in (("x", X), ("T", T)):
        for U, u in ball.items():
            w = ball.get(U.inverse() * target)
            if w is not None and u.length() + w.length() <= depth:
                word = u * w
                if evaluate_pair_word(word, pair) != target:
                    raise ArithmeticError("generation certificate failed to verify")
                certs[name] = word
                break
        else:
            reason = ""
            if pair[0] * pair[1] == pair[1] * pair[0]:
                reason = "entries commute, so they generate an abelian proper subgroup"
            return GenerationResult(Generation.UNKNOWN, {}, reason)
    return GenerationResult(Generation.YES, certs)


@dataclass
class TorsionRow:
    a: int
    b: int
    generating: bool
    certificates: dict[str, Word]
    reason: str

    def to_json(self) -> dict:
        return {"a": self.a, "b": self.b, "generating": self.generating,
                "certificates": {k: str(v) for k, v in self.certificates.items()},
                "reason": self.reason}


def enumerate_torsion_pairs(depth: int = 16) -> list[TorsionRow]:
    rows = []
    for a_, b_ in itertools.product(range(4), range(6)):
        res = is_generating((X ** a_, Y ** b_), depth)
        rows.append(TorsionRow(a_, b_, res.status is Generation.YES, res.certificates, res.reason))
    return rows


def random_generating_pair(rng, moves: int = 15):
    """A canonical generating pair pushed forward by up to ``moves`` random elementary moves."""
    from .nielsen import random_moves

    a_ = int(rng.choice([1, 3]))
    b_ = int(rng.choice([1, 2, 4, 5]))
    start = (X ** a_, Y ** b_)
    if rng.random() < 0.5:
        start = apply_moves(start, [Swap(1, 2)])
    seq = random_moves(rng, int(rng.integers(0, moves + 1)))
    return apply_moves(start, seq), start, seq


@dataclass
class ClassBounds:
    lower: int
    upper: int
    commutator_traces: list[int]
    endpoints: list[tuple[str, str]]


def nielsen_class_bounds() -> ClassBounds:
    """Bounds on the number of Nielsen classes of generating pairs, not a count.

    Lower: distinct traces of [g1, g2] among canonical generating pairs (the
    trace is unchanged by moves in SL(2)).  Upper: canonical generating pairs
    up to inverting entries, assuming every generating pair reduces to one.
    """
    pairs = [(X ** a_, Y ** b_) for a_ in (1, 3) for b_ in (1, 2, 4, 5)]
    traces = sorted({(A * B * A.inverse() * B.inverse()).trace() for A, B in pairs})
    classes = set()
    for A, B in pairs:
        orbit = {(A, B), (A.inverse(), B), (A, B.inverse()), (A.inverse(), B.inverse())}
        classes.add(min((decompose(P).tokens(), decompose(Q).tokens()) for P, Q in orbit))
    return ClassBounds(len(traces), len(classes), traces, sorted(classes))
