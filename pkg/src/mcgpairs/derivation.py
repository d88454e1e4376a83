"""Straight-line programs reproducing the proof that (h0, rho_n) generates M_g.

Every node is a product of earlier nodes; the two roots ``h0 = b1 b2 a3 c5``
and ``rho = r a1^n`` are the only nodes written over Dehn twists, so every
node back-substitutes to a word over {h0, rho}.  A node may carry a claimed
normal form (a twist word or an explicit matrix); ``SLP.define`` checks the
claim exactly on H_1 and raises :class:`VerificationFailed` at the first
mismatch.

Node names: ``q(u,v)`` is t_u t_v^-1 and ``tw(u)`` is the twist t_u.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .curves import a, b, c, homology_class
from .homology import (
    SpMatrix,
    evaluate,
    generator_matrix,
    macro_word,
    rotation_matrix,
    transvection,
    twist,
)
from .fasteval import evaluate_packed
from .words import PackedWord, Word, as_word

BASE = ("h0", "rho")


class VerificationFailed(AssertionError):
    def __init__(self, name: str, expected=None, got=None, detail: str = ""):
        msg = f"verification failed at {name}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)
        self.name = name
        self.expected = expected
        self.got = got


@dataclass
class Definition:
    name: str
    expression: Word
    claimed: Word | SpMatrix | None = None
    claimed_text: str | None = None
    anchor: str = ""
    verified: bool | None = None

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "expression": str(self.expression),
            "claimed_form": self.claimed_text,
            "verified": self.verified,
            "anchor": self.anchor,
        }


class SLP:
    """Ordered, acyclic list of definitions with memoized H_1 matrices."""

    def __init__(self, genus: int, n: int):
        self.genus = genus
        self.n = n
        self.defs: dict[str, Definition] = {}
        self._matrix: dict[str, SpMatrix] = {}
        self._expanded: dict[str, Word] = {}

    def __contains__(self, name: str) -> bool:
        return name in self.defs

    def __getitem__(self, name: str) -> Definition:
        return self.defs[name]

    def __iter__(self):
        return iter(self.defs.values())

    def __len__(self):
        return len(self.defs)

    def define(self, name: str, expression: Word | str, claimed: Word | str | SpMatrix | None = None,
               anchor: str = "", claimed_text: str | None = None) -> SpMatrix:
        if name in self.defs:
            raise ValueError(f"{name} already defined")
        expression = as_word(expression)
        if isinstance(claimed, str):
            claimed = Word.parse(claimed)
        if isinstance(claimed, Word) and claimed_text is None:
            claimed_text = str(claimed)
        node = Definition(name, expression, claimed, claimed_text, anchor)
        is_root = name in BASE
        for tok in expression.tokens():
            if tok not in self.defs and not is_root:
                raise ValueError(f"{name} refers to undefined node {tok}")
        self.defs[name] = node
        if is_root:
            M = evaluate(expression, self.genus)
        else:
            M = evaluate(expression, self.genus, slp=self)
        self._matrix[name] = M
        if claimed is not None:
            target = claimed if isinstance(claimed, SpMatrix) else evaluate(claimed, self.genus, self.n)
            node.verified = M == target
            if not node.verified:
                raise VerificationFailed(name, target, M, f"{expression} != {claimed_text}")
        return M

    def matrix(self, name: str) -> SpMatrix:
        return self._matrix[name]

    def evaluate(self, word: Word | str) -> SpMatrix:
        return evaluate(word, self.genus, self.n, slp=self)

    def expand(self, name: str, memo: bool = True) -> PackedWord:
        """Full back-substitution of a node to a freely reduced word over h0, rho."""
        if name in BASE:
            return PackedWord(BASE, [BASE.index(name)], [1])
        if name in self._expanded:
            return self._expanded[name]
        out = PackedWord(BASE)
        for tok, exp in self.defs[name].expression:
            out = out * self.expand(tok) ** exp
        if memo:
            self._expanded[name] = out
        return out

    def expanded_length(self, name: str) -> int:
        return self.expand(name).length()

    def ledger(self) -> list[dict]:
        return [d.to_json() for d in self.defs.values()]


def q(u, v) -> str:
    return f"q({u},{v})"


def tw(u) -> str:
    return f"tw({u})"


def _w(*parts) -> Word:
    """Word from node names with optional exponents: ``_w("x", ("y", -1))``."""
    letters = []
    for p in parts:
        letters.append(p if isinstance(p, tuple) else (p, 1))
    return Word(tuple(letters))


def _diff(u, v) -> Word:
    """Twist word t_u t_v^-1."""
    return Word(((str(u), 1), (str(v), -1)))


def _image_twist(f: Word, curve) -> Word:
    """t_{f(curve)} written as f t_curve f^-1."""
    return f * Word(((str(curve), 1),)) * f.inverse()


def build_chain(genus: int, n: int, slp: SLP | None = None) -> SLP:
    """Nodes h0..h6 and the six difference elements at handles 5, 6."""
    if genus < 8:
        raise ValueError("the generating-pair argument needs genus >= 8")
    g = genus
    s = slp if slp is not None else SLP(genus, n)
    a2n_b2 = _image_twist(Word((("a2", n),)), b(2))          # t_{t_{a2}^n(b2)}
    a1n_b1 = _image_twist(Word((("a1", -n),)), b(1))         # t_{t_{a1}^-n(b1)}
    s.define("h0", macro_word("h0", n), anchor="h_0 = t_{b_1}t_{b_2}t_{a_3}t_{c_5}")
    s.define("rho", macro_word("rho", n), anchor="rho_n = r t_{a_1}^n")
    s.define("h1", _w("rho", "h0", ("rho", -1)),
             Word.of(a2n_b2, "b3 a4 c6"),
             anchor="h_1 = t_{t_{a_2}^n(b_2)} t_{b_3} t_{a_4} t_{c_6}")
    s.define("h2", _w(("rho", -1), "h0", "rho"),
             Word.of(f"b{g}", a1n_b1, "a2 c4"),
             anchor="h_2 = t_{b_g} t_{t_{a_1}^{-n}(b_1)} t_{a_2} t_{c_4}")
    s.define("h2^-n", _w(("h2", -n)),
             Word.of(("a2", -n), (f"b{g}", -n), Word((("a1", -n),)) * Word((("b1", -n),)) * Word((("a1", n),)), ("c4", -n)),
             anchor="h_2^{-n} = t_{a_2}^{-n} t_{b_g}^{-n} t_{t_{a_1}^{-n}(b_1)}^{-n} t_{c_4}^{-n}")
    s.define("h3", _w("h2^-n", "h1", ("h2^-n", -1)), "b2 b3 a4 c6",
             anchor="h_3 = t_{b_2} t_{b_3} t_{a_4} t_{c_6}")
    s.define("h0h3", _w("h0", "h3"), "a3 b3 b1 b2^2 c5 a4 c6",
             anchor="h_0h_3 = t_{a_3} t_{b_3} t_{b_1} t_{b_2}^2 t_{c_5} t_{a_4} t_{c_6}")
    s.define("h4", _w("h0h3", "h0", ("h0h3", -1)), "b1 b2 b3 c5",
             anchor="h_4 = t_{b_1} t_{b_2} t_{b_3} t_{c_5}")
    s.define(q("a3", "b3"), _w("h0", ("h4", -1)), "a3 b3^-1",
             anchor="t_{a_3} t_{b_3}^{-1} = h_0h_4^{-1}")
    s.define(q("a5", "b5"), _w(("rho", 2), q("a3", "b3"), ("rho", -2)), "a5 b5^-1",
             anchor="t_{a_5} t_{b_5}^{-1} = rho_n^2 t_{a_3} t_{b_3}^{-1} rho_n^{-2}")
    s.define("h4'", _w("h4", (q("a5", "b5"), -1)), "c5 b5 a5^-1 b1 b2 b3",
             anchor="h_4 t_{b_5} t_{a_5}^{-1} = t_{c_5} t_{b_5} t_{a_5}^{-1} t_{b_1} t_{b_2} t_{b_3}")
    s.define("h5", _w("h4'", "h4", ("h4'", -1)), "b1 b2 b3 b5",
             anchor="h_5 = t_{b_1} t_{b_2} t_{b_3} t_{b_5}")
    s.define(q("b5", "c5"), _w("h5", ("h4", -1)), "b5 c5^-1",
             anchor="t_{b_5} t_{c_5}^{-1} = h_5h_4^{-1}")
    s.define("h2'", _w("h2", (q("a5", "b5"), -1)),
             Word.of(f"b{g}", a1n_b1, "a2 c4 b5 a5^-1"),
             anchor="h_2 t_{b_5} t_{a_5}^{-1} = t_{b_g} t_{t_{a_1}^{-n}(b_1)} t_{a_2} t_{c_4} t_{b_5} t_{a_5}^{-1}")
    s.define("h6", _w("h2'", "h2", ("h2'", -1)),
             Word.of(f"b{g}", a1n_b1, "a2 b5"),
             anchor="h_6 = t_{b_g} t_{t_{a_1}^{-n}(b_1)} t_{a_2} t_{b_5}")
    s.define(q("b5", "c4"), _w("h6", ("h2", -1)), "b5 c4^-1",
             anchor="t_{b_5} t_{c_4}^{-1} = h_6h_2^{-1}")
    s.define(q("a6", "b6"), _w("rho", q("a5", "b5"), ("rho", -1)), "a6 b6^-1",
             anchor="t_{a_6}t_{b_6}^{-1} = rho_n t_{a_5}t_{b_5}^{-1} rho_n^{-1}")
    s.define(q("b6", "c5"), _w("rho", q("b5", "c4"), ("rho", -1)), "b6 c5^-1",
             anchor="t_{b_6}t_{c_5}^{-1} = rho_n t_{b_5}t_{c_4}^{-1} rho_n^{-1}")
    s.define(q("b6", "c6"), _w("rho", q("b5", "c5"), ("rho", -1)), "b6 c6^-1",
             anchor="t_{b_6}t_{c_6}^{-1} = rho_n t_{b_5}t_{c_5}^{-1} rho_n^{-1}")
    s.define(q("c5", "c6"), _w((q("b6", "c5"), -1), q("b6", "c6")), "c5 c6^-1",
             anchor="t_{c_5} t_{c_6}^{-1} = (t_{b_6}t_{c_5}^{-1})^{-1} t_{b_6} t_{c_6}^{-1}")
    s.define(q("b5", "b6"), _w(q("b5", "c5"), (q("b6", "c5"), -1)), "b5 b6^-1",
             anchor="t_{b_5} t_{b_6}^{-1} = t_{b_5}t_{c_5}^{-1} (t_{b_6} t_{c_5}^{-1})^{-1}")
    s.define(q("a5", "a6"), _w(q("a5", "b5"), q("b5", "b6"), (q("a6", "b6"), -1)), "a5 a6^-1",
             anchor="t_{a_5} t_{a_6}^{-1} = t_{a_5}t_{b_5}^{-1} t_{b_5} t_{b_6}^{-1} (t_{a_6} t_{b_6}^{-1})^{-1}")
    return s


@dataclass
class LanternData:
    d1: np.ndarray
    d2: np.ndarray


def lemma7_words(k: int, genus: int, slp: SLP, f: str = "rho") -> tuple[PackedWord, PackedWord, PackedWord]:
    """Express t_{a_k}, t_{b_k}, t_{c_k} through f and the three differences.

    Needs nodes ``q(ak,ak+1)``, ``q(bk,bk+1)``, ``q(ck,ck+1)`` and ``f`` in
    ``slp``; adds the intermediate nodes and returns the back-substituted
    words over the SLP roots.
    """
    if k < 1 or genus < k + 2:
        raise ValueError("need k >= 1 and genus >= k + 2")
    if slp.genus != genus:
        raise ValueError("SLP genus mismatch")
    s = slp
    A = lambda i: f"a{i}"  # noqa: E731
    B = lambda i: f"b{i}"  # noqa: E731
    C = lambda i: f"c{i}"  # noqa: E731
    k1, k2 = k + 1, k + 2
    Da, Db, Dc = q(A(k), A(k1)), q(B(k), B(k1)), q(C(k), C(k1))
    for name in (f, Da, Db, Dc):
        if name not in s:
            raise ValueError(f"SLP lacks required node {name}")

    F = s.matrix(f)
    for src, dst in ((a(k), a(k1)), (b(k), b(k1)), (c(k), c(k1)), (a(k1), a(k2)), (b(k1), b(k2))):
        img = F @ homology_class(src, genus)
        tgt = homology_class(dst, genus)
        if not (np.array_equal(img, tgt) or np.array_equal(img, -tgt)):
            raise VerificationFailed(f, detail=f"{f} does not send {src} to {dst}")

    ak = twist(a(k), genus)

    def add(name, expr, claimed=None, claimed_text=None, anchor=""):
        if name not in s:
            s.define(name, expr, claimed, anchor=anchor, claimed_text=claimed_text)

    add(q(A(k1), A(k2)), _w(f, Da, (f, -1)), _diff(A(k1), A(k2)),
        anchor="t_{a_{k+1}} t_{a_{k+2}}^{-1} = f t_{a_k} t_{a_{k+1}}^{-1} f^{-1}")
    add(q(B(k1), B(k2)), _w(f, Db, (f, -1)), _diff(B(k1), B(k2)),
        anchor="t_{b_{k+1}} t_{b_{k+2}}^{-1} = f t_{b_k} t_{b_{k+1}}^{-1} f^{-1}")
    add(q(A(k), A(k2)), _w(Da, q(A(k1), A(k2))), _diff(A(k), A(k2)),
        anchor="t_{a_k} t_{a_{k+2}}^{-1} = t_{a_k} t_{a_{k+1}}^{-1} t_{a_{k+1}} t_{a_{k+2}}^{-1}")
    add(f"f1[{k}]", _w(Da, Db), Word.parse(f"a{k} b{k} a{k1}^-1 b{k1}^-1"),
        anchor="f_1 = t_{a_k} t_{b_k} t_{a_{k+1}}^{-1} t_{b_{k+1}}^{-1}")
    add(q(B(k), A(k2)), _w(f"f1[{k}]", q(A(k), A(k2)), (f"f1[{k}]", -1)), _diff(B(k), A(k2)),
        anchor="t_{b_k} t_{a_{k+2}}^{-1} = f_1 t_{a_k} t_{a_{k+2}}^{-1} f_1^{-1}")
    add(f"f2[{k}]", _w(q(B(k), A(k2)), Dc), Word.parse(f"b{k} c{k} a{k2}^-1 c{k1}^-1"),
        anchor="f_2 = t_{b_k} t_{c_k} t_{a_{k+2}}^{-1} t_{c_{k+1}}^{-1}")
    add(q(C(k), A(k2)), _w(f"f2[{k}]", q(B(k), A(k2)), (f"f2[{k}]", -1)), _diff(C(k), A(k2)),
        anchor="t_{c_k} t_{a_{k+2}}^{-1} = f_2 t_{b_k} t_{a_{k+2}}^{-1} f_2^{-1}")
    add(q(A(k), B(k1)), _w(q(A(k), A(k2)), (q(B(k), A(k2)), -1), Db), _diff(A(k), B(k1)),
        anchor="t_{a_k} t_{b_{k+1}}^{-1} = t_{a_k} t_{a_{k+2}}^{-1} (t_{b_k} t_{a_{k+2}}^{-1})^{-1} t_{b_k} t_{b_{k+1}}^{-1}")
    add(q(A(k), C(k)), _w(q(A(k), A(k2)), (q(C(k), A(k2)), -1)), _diff(A(k), C(k)),
        anchor="t_{a_k} t_{c_k}^{-1} = t_{a_k} t_{a_{k+2}}^{-1} (t_{c_k} t_{a_{k+2}}^{-1})^{-1}")
    add(q(A(k), C(k1)), _w(q(A(k), C(k)), Dc), _diff(A(k), C(k1)),
        anchor="t_{a_k} t_{c_{k+1}}^{-1} = t_{a_k} t_{c_k}^{-1} t_{c_k} t_{c_{k+1}}^{-1}")
    add(q(A(k), B(k2)), _w(q(A(k), B(k1)), q(B(k1), B(k2))), _diff(A(k), B(k2)),
        anchor="t_{a_k} t_{b_{k+2}}^{-1} = t_{a_k} t_{b_{k+1}}^{-1} t_{b_{k+1}} t_{b_{k+2}}^{-1}")
    phi1_claim, phi2_claim = lantern_phi_words(k)
    add(f"phi1[{k}]", _w((q(A(k), B(k1)), -1), (q(A(k), C(k)), -1), Da, (q(A(k), C(k1)), -1)), phi1_claim,
        anchor="phi_1 = t_{b_{k+1}} t_{a_k}^{-1} t_{c_k} t_{a_k}^{-1} t_{a_k} t_{a_{k+1}}^{-1} t_{c_{k+1}} t_{a_k}^{-1}")
    add(f"phi2[{k}]", _w((q(A(k), B(k2)), -1), (q(A(k), C(k1)), -1), (q(A(k), A(k2)), -1), (q(A(k), B(k2)), -1)),
        phi2_claim,
        anchor="phi_2 = t_{b_{k+2}}t_{a_k}^{-1} t_{c_{k+1}} t_{a_k}^{-1} t_{a_{k+2}} t_{a_k}^{-1} t_{b_{k+2}} t_{a_k}^{-1}")

    lantern = lantern_curves(k, genus, s.matrix(f"phi1[{k}]"), s.matrix(f"phi2[{k}]"))
    add(q(f"d1[{k}]", A(k)), _w(f"phi1[{k}]", (q(A(k), B(k1)), -1), (f"phi1[{k}]", -1)),
        transvection(lantern.d1) @ ak.inverse(), claimed_text=f"T([d1]) a{k}^-1",
        anchor="t_{d_1} t_{a_k}^{-1} = phi_1 t_{b_{k+1}} t_{a_k}^{-1} phi_1^{-1}")
    add(q(f"d2[{k}]", A(k)), _w(f"phi2[{k}]", q(f"d1[{k}]", A(k)), (f"phi2[{k}]", -1)),
        transvection(lantern.d2) @ ak.inverse(), claimed_text=f"T([d2]) a{k}^-1",
        anchor="t_{d_2} t_{a_k}^{-1} = phi_2 t_{d_1} t_{a_k}^{-1} phi_2^{-1}")
    add(q(f"d2[{k}]", C(k)), _w(q(f"d2[{k}]", A(k)), q(A(k), C(k))),
        transvection(lantern.d2) @ twist(c(k), genus).inverse(), claimed_text=f"T([d2]) c{k}^-1",
        anchor="t_{d_2} t_{c_k}^{-1} = t_{d_2} t_{a_k}^{-1} t_{a_k} t_{c_k}^{-1}")
    add(q(A(k1), C(k1)), _w((Da, -1), q(A(k), C(k1))), _diff(A(k1), C(k1)),
        anchor="t_{a_{k+1}} t_{c_{k+1}}^{-1} = (t_{a_k}t_{a_{k+1}}^{-1})^{-1} t_{a_k} t_{c_{k+1}}^{-1}")
    add(tw(A(k2)), _w(q(A(k1), C(k1)), q(f"d1[{k}]", A(k)), q(f"d2[{k}]", C(k))), Word.parse(A(k2)),
        anchor="t_{a_{k+2}} = t_{a_{k+1}} t_{c_{k+1}}^{-1} t_{d_1} t_{a_k}^{-1} t_{d_2} t_{c_k}^{-1}")
    add(tw(A(k)), _w(q(A(k), A(k2)), tw(A(k2))), Word.parse(A(k)),
        anchor="t_{a_k} = t_{a_k}t_{a_{k+2}}^{-1} t_{a_{k+2}}")
    add(tw(B(k)), _w(q(B(k), A(k2)), tw(A(k2))), Word.parse(B(k)),
        anchor="t_{b_k} = t_{b_k} t_{a_{k+2}}^{-1} t_{a_{k+2}}")
    add(tw(C(k)), _w(q(C(k), A(k2)), tw(A(k2))), Word.parse(C(k)),
        anchor="t_{c_k} = t_{c_k} t_{a_{k+2}}^{-1} t_{a_{k+2}}")
    return s.expand(tw(A(k))), s.expand(tw(B(k))), s.expand(tw(C(k)))


def lantern_phi_words(k: int) -> tuple[Word, Word]:
    """Twist words of the two maps fixing a_k that carry b_{k+1} to d_1 and d_1 to d_2."""
    k1, k2 = k + 1, k + 2
    phi1 = Word.of(_diff(b(k1), a(k)), _diff(c(k), a(k)), _diff(a(k), a(k1)), _diff(c(k1), a(k)))
    phi2 = Word.of(_diff(b(k2), a(k)), _diff(c(k1), a(k)), _diff(a(k2), a(k)), _diff(b(k2), a(k)))
    return phi1, phi2


def lantern_curves(k: int, genus: int, phi1: SpMatrix, phi2: SpMatrix) -> LanternData:
    """[d1] = phi1 [b_{k+1}], [d2] = phi2 [d1]; both maps must fix [a_k]."""
    m_k = homology_class(a(k), genus)
    for label, phi in (("phi1", phi1), ("phi2", phi2)):
        if not np.array_equal(phi @ m_k, m_k):
            raise VerificationFailed(f"{label}[{k}]", detail=f"{label} does not fix a{k}")
    d1 = phi1 @ homology_class(b(k + 1), genus)
    d2 = phi2 @ d1
    return LanternData(d1, d2)


@dataclass
class GeneratorCertificate:
    target: str
    node: str
    expanded_length: int
    syllables: int
    verified: bool = False
    checks: dict = field(default_factory=dict)
    slp: SLP | None = field(default=None, repr=False)

    def word(self) -> PackedWord:
        """The certificate word over {h0, rho}, re-expanded on demand."""
        return self.slp.expand(self.node, memo=False)

    def to_json(self) -> dict:
        return {
            "target": self.target,
            "node": self.node,
            "expanded_length": self.expanded_length,
            "syllables": self.syllables,
            "verified": self.verified,
            "checks": self.checks,
        }


def target_matrix(target: str, genus: int) -> SpMatrix:
    if target == "r":
        return rotation_matrix(genus)
    return generator_matrix(target, 1, genus)


def generator_words(genus: int, n: int, slp: SLP | None = None, k: int = 5,
                    second_path: bool = True) -> list[GeneratorCertificate]:
    """Certificates over {h0, rho} for the 3g-1 Lickorish twists and r.

    Each certificate is checked twice: the memoized SLP matrix, and the
    back-substituted word re-evaluated letter by letter from the twists.
    """
    s = build_chain(genus, n, slp)
    lemma7_words(k, genus, s)
    g = genus
    s.define(tw("a1"), _w(("rho", -(k - 1)), tw(f"a{k}"), ("rho", k - 1)), "a1",
             anchor=f"t_{{a_1}} = rho_n^{{-{k - 1}}} t_{{a_{k}}} rho_n^{{{k - 1}}}")
    # "r" itself is a base token, so the derived node gets its own name
    s.define("rot", _w("rho", (tw("a1"), -n)), "r", anchor="r = rho_n t_{a_1}^{-n}")
    for fam in "abc":
        top = g if fam != "c" else g - 1
        for i in range(1, top + 1):
            name = tw(f"{fam}{i}")
            if name in s:
                continue
            j = i - k
            s.define(name, _w(("rot", j), tw(f"{fam}{k}"), ("rot", -j)), f"{fam}{i}",
                     anchor=f"t_{{{fam}_{{j+{k}}}}} = r^j t_{{{fam}_{k}}} r^{{-j}}, j={j}")
    targets = [f"a{i}" for i in range(1, g + 1)] + [f"b{i}" for i in range(1, g + 1)]
    targets += [f"c{i}" for i in range(1, g)] + ["r"]
    certs = []
    for target in targets:
        node = "rot" if target == "r" else tw(target)
        # top-level expansions are the big ones; keep only inner nodes memoized
        word = s.expand(node, memo=False)
        expected = target_matrix(target, g)
        checks = {"slp": s.matrix(node) == expected}
        if second_path:
            checks["expanded"] = evaluate_packed(word, g, n) == expected
        cert = GeneratorCertificate(target, node, word.length(), len(word), all(checks.values()), checks, s)
        if not cert.verified:
            raise VerificationFailed(node, expected, s.matrix(node), f"certificate for {target}: {checks}")
        certs.append(cert)
    return certs
