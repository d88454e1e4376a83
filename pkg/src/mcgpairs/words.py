"""Words over named generators, stored as freely reduced (token, exponent) runs.

Text grammar: whitespace-separated tokens, each ``tok`` or ``tok^k`` with ``k``
a signed decimal integer, e.g. ``"b1 b2 a3 c5"`` or ``"rho^-2 h0 rho^2"``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable

import numpy as np

_TOKEN_RE = re.compile(r"^([A-Za-z_][A-Za-z0-9_(),.']*)(?:\^([+-]?\d+))?$")


def _push(stack: list[tuple[str, int]], tok: str, exp: int) -> None:
    if exp == 0:
        return
    if stack and stack[-1][0] == tok:
        total = stack[-1][1] + exp
        stack.pop()
        if total:
            stack.append((tok, total))
    else:
        stack.append((tok, exp))


@dataclass(frozen=True)
class Word:
    """A group word; the rightmost letter acts first."""

    letters: tuple[tuple[str, int], ...] = ()

    def __post_init__(self):
        stack: list[tuple[str, int]] = []
        for tok, exp in self.letters:
            _push(stack, tok, int(exp))
        object.__setattr__(self, "letters", tuple(stack))

    @classmethod
    def parse(cls, text: str) -> "Word":
        letters = []
        for item in text.split():
            match = _TOKEN_RE.match(item)
            if match is None:
                raise ValueError(f"malformed token {item!r}")
            tok, exp = match.groups()
            letters.append((tok, int(exp) if exp is not None else 1))
        return cls(tuple(letters))

    @classmethod
    def of(cls, *items: str | tuple[str, int] | "Word") -> "Word":
        """Concatenate tokens, ``(tok, exp)`` pairs and words."""
        out = cls()
        for item in items:
            if isinstance(item, Word):
                out = out * item
            elif isinstance(item, tuple):
                out = out * cls((item,))
            else:
                out = out * cls.parse(item)
        return out

    def __mul__(self, other: "Word") -> "Word":
        if not isinstance(other, Word):
            return NotImplemented
        stack = list(self.letters)
        for i, (tok, exp) in enumerate(other.letters):
            if stack and stack[-1][0] == tok:
                _push(stack, tok, exp)
            else:
                # remaining letters are already reduced
                stack.extend(other.letters[i:])
                break
        word = Word.__new__(Word)
        object.__setattr__(word, "letters", tuple(stack))
        return word

    def inverse(self) -> "Word":
        word = Word.__new__(Word)
        object.__setattr__(word, "letters", tuple((t, -e) for t, e in reversed(self.letters)))
        return word

    def __pow__(self, k: int) -> "Word":
        if k < 0:
            return self.inverse() ** (-k)
        out, base = Word(), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def length(self) -> int:
        """Number of letters, counting ``tok^k`` as ``|k|`` letters."""
        return sum(abs(e) for _, e in self.letters)

    def tokens(self) -> set[str]:
        return {t for t, _ in self.letters}

    def __len__(self) -> int:
        return len(self.letters)

    def __bool__(self) -> bool:
        return bool(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __str__(self) -> str:
        return " ".join(t if e == 1 else f"{t}^{e}" for t, e in self.letters)

    def __repr__(self) -> str:
        return f"Word({str(self)!r})"


def as_word(word: Word | str | Iterable[tuple[str, int]]) -> Word:
    if isinstance(word, Word):
        return word
    if isinstance(word, str):
        return Word.parse(word)
    return Word(tuple(word))


def commutator(x: Word, y: Word) -> Word:
    """``[x, y] = x y x^-1 y^-1``."""
    return x * y * x.inverse() * y.inverse()


def conjugate(f: Word, x: Word) -> Word:
    """``f x f^-1``."""
    return f * x * f.inverse()


class PackedWord:
    """Array-backed freely reduced word over a small fixed alphabet.

    Used for back-substituted certificates, which run to tens of millions
    of letters; ``tokens`` index into ``alphabet``.
    """

    __slots__ = ("alphabet", "tokens", "exps")

    def __init__(self, alphabet: tuple[str, ...], tokens=None, exps=None):
        self.alphabet = alphabet
        self.tokens = np.zeros(0, dtype=np.int8) if tokens is None else np.asarray(tokens, dtype=np.int8)
        self.exps = np.zeros(0, dtype=np.int64) if exps is None else np.asarray(exps, dtype=np.int64)

    @classmethod
    def from_word(cls, word: Word, alphabet: tuple[str, ...]) -> "PackedWord":
        index = {t: i for i, t in enumerate(alphabet)}
        try:
            toks = [index[t] for t, _ in word]
        except KeyError as err:
            raise ValueError(f"token {err.args[0]!r} not in alphabet {alphabet}") from None
        return cls(alphabet, toks, [e for _, e in word])

    def to_word(self) -> Word:
        return Word(tuple((self.alphabet[t], int(e)) for t, e in zip(self.tokens, self.exps)))

    def __len__(self) -> int:
        return len(self.tokens)

    def length(self) -> int:
        return int(np.abs(self.exps).sum())

    def inverse(self) -> "PackedWord":
        return PackedWord(self.alphabet, self.tokens[::-1].copy(), -self.exps[::-1])

    def __mul__(self, other: "PackedWord") -> "PackedWord":
        if self.alphabet != other.alphabet:
            raise ValueError("alphabet mismatch")
        lt, le = self.tokens, self.exps
        rt, re_ = other.tokens, other.exps
        i, j = len(lt), 0
        mid_tok = mid_exp = None
        # cancel across the seam
        while i > 0 and j < len(rt) and lt[i - 1] == rt[j]:
            total = int(le[i - 1] + re_[j])
            i -= 1
            j += 1
            if total:
                mid_tok, mid_exp = lt[i], total
                break
        parts_t = [lt[:i], rt[j:]]
        parts_e = [le[:i], re_[j:]]
        if mid_tok is not None:
            parts_t.insert(1, np.array([mid_tok], dtype=np.int8))
            parts_e.insert(1, np.array([mid_exp], dtype=np.int64))
        return PackedWord(self.alphabet, np.concatenate(parts_t), np.concatenate(parts_e))

    def __pow__(self, k: int) -> "PackedWord":
        if k < 0:
            return self.inverse() ** (-k)
        out, base = PackedWord(self.alphabet), self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def chunks(self, size: int = 65536):
        """Text of the word in pieces, for streaming output."""
        for start in range(0, len(self.tokens), size):
            toks = self.tokens[start:start + size]
            exps = self.exps[start:start + size]
            yield " ".join(
                self.alphabet[t] if e == 1 else f"{self.alphabet[t]}^{e}" for t, e in zip(toks, exps)
            )

    def __str__(self) -> str:
        return " ".join(self.chunks())
