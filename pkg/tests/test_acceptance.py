"""Acceptance criteria 1-7, one PASS/FAIL line per criterion.

Every matrix constructed while criteria 1-5 run is streamed into an audit
(symplectic form, reciprocal char polys, block factorisation), which is
reported as criterion 7.  Audit time is excluded from the runtime bounds of
the criteria it observes.  Also runnable as ``python3 tests/test_acceptance.py``.

Pinned tolerances: every comparison is exact integer equality; runtime bounds
are 10 s (1), 60 s per (g, n) (2), 10 s (3), 60 s (4), 10 s (5), 30 s (6).
"""

from __future__ import annotations

import contextlib
import sys
import time

import numpy as np
import pytest

from mcgpairs.charpoly import is_reciprocal, poly_mul
from mcgpairs.derivation import generator_words
from mcgpairs.homology import (
    char_poly,
    invariant_subspaces,
    random_symplectic,
    record_char_polys,
    record_matrices,
)
from mcgpairs.nielsen import (
    GeneratingPair,
    Verdict,
    check_move_sequence,
    commutator_invariant,
    distinguish,
    r2_formula_check,
    random_moves,
    stated_r2_poly,
)
from mcgpairs.relations import relation_suite
from mcgpairs import sl2

SEED = 20240611
CHAIN = ["h1", "h2", "h2^-n", "h3", "h0h3", "h4", "h4'", "h5", "h2'", "h6"]
DIFFERENCES = ["q(a6,b6)", "q(b6,c5)", "q(b6,c6)", "q(c5,c6)", "q(b5,b6)", "q(a5,a6)"]
LEMMA7 = ["phi1[5]", "phi2[5]", "q(d1[5],a5)", "q(d2[5],a5)", "q(d2[5],c5)", "tw(a7)",
          "tw(a5)", "tw(b5)", "tw(c5)"]


class MatrixAudit:
    """Streaming checks on recorded matrices; flushes in batches to bound memory."""

    def __init__(self, batch: int = 4000):
        self.batch = batch
        self.buffer = []
        self.count = 0
        self.not_symplectic = 0
        self.block_checked = 0
        self.block_failures = 0
        self.seen_blocks: set[int] = set()
        self.seconds = 0.0

    def append(self, M):
        self.buffer.append(M)
        if len(self.buffer) >= self.batch:
            self.flush()

    def _all_blocks_invariant(self, M) -> bool:
        nz = M.entries != 0
        for S in invariant_subspaces(M.genus):
            inside = np.zeros(2 * M.genus, dtype=bool)
            inside[list(S.basis)] = True
            if nz[np.ix_(~inside, inside)].any():
                return False
        return True

    def flush(self):
        t0 = time.perf_counter()
        buf, self.buffer = self.buffer, []
        with record_matrices([]):  # keep the audit's own products out of the audit
            for M in buf:
                self.count += 1
                if not M.is_symplectic():
                    self.not_symplectic += 1
                if M.genus >= 8 and self._all_blocks_invariant(M):
                    h = hash(M.key())
                    if h in self.seen_blocks:
                        continue
                    self.seen_blocks.add(h)
                    prod = (1,)
                    for S in invariant_subspaces(M.genus):
                        idx = list(S.basis)
                        prod = poly_mul(prod, char_poly(M.entries[np.ix_(idx, idx)]))
                    self.block_checked += 1
                    if prod != char_poly(M):
                        self.block_failures += 1
        self.seconds += time.perf_counter() - t0


class PolyAudit:
    def __init__(self):
        self.count = 0
        self.non_reciprocal = 0

    def append(self, p):
        self.count += 1
        if not is_reciprocal(p):
            self.non_reciprocal += 1


AUDIT = MatrixAudit()
POLYS = PolyAudit()
DONE: set[int] = set()


@contextlib.contextmanager
def audited():
    with record_matrices(AUDIT), record_char_polys(POLYS):
        yield


class Clock:
    """Wall time minus time spent inside the audit."""

    def __enter__(self):
        self.t0, self.a0 = time.perf_counter(), AUDIT.seconds
        return self

    def __exit__(self, *exc):
        self.seconds = time.perf_counter() - self.t0 - (AUDIT.seconds - self.a0)


def say(line: str, capsys=None):
    if capsys is None:
        print(line)
        return
    with capsys.disabled():
        print("\n" + line)


def verdict(num: int, ok: bool, text: str, capsys=None) -> None:
    say(f"{'PASS' if ok else 'FAIL'} criterion {num}: {text}", capsys)


# --------------------------------------------------------------------------------------


def criterion_1():
    bad, total = [], 0
    with audited(), Clock() as clk:
        for g in range(2, 13):
            rs = relation_suite(g, np.random.default_rng([SEED, g]), conjugation_samples=100)
            total += len(rs)
            bad += [r for r in rs if not r.passed]
    ok = not bad and clk.seconds < 10
    return ok, f"relation suite g=2..12, {total} instances, {len(bad)} failures, {clk.seconds:.2f} s (< 10 s)"


def criterion_2():
    slowest, problems = 0.0, []
    for g in (8, 9, 10):
        for n in range(1, 6):
            with audited(), Clock() as clk:
                certs = generator_words(g, n)
            slowest = max(slowest, clk.seconds)
            s = certs[0].slp
            missing = [x for x in CHAIN + DIFFERENCES + LEMMA7 if x not in s or s[x].verified is not True]
            if missing:
                problems.append(f"(g={g},n={n}) unverified {missing}")
            if len(certs) != 3 * g - 1 + 1:
                problems.append(f"(g={g},n={n}) {len(certs)} certificates")
            for c in certs:
                if not (c.verified and c.checks.get("slp") and c.checks.get("expanded")):
                    problems.append(f"(g={g},n={n}) {c.target} failed")
            if clk.seconds >= 60:
                problems.append(f"(g={g},n={n}) took {clk.seconds:.1f} s")
    ok = not problems
    detail = "; ".join(problems[:3]) if problems else "all nodes and certificates verified"
    return ok, f"derivation g=8..10, n=1..5: {detail}; slowest (g, n) {slowest:.2f} s (< 60 s)"


def criterion_3():
    with audited(), Clock() as clk:
        reports = [r2_formula_check(m, 8) for m in range(1, 11)]
        invs = {m: commutator_invariant(GeneratingPair.h0_rho(m, 8)) for m in range(1, 11)}
        verdicts = [distinguish(invs[m], invs[n]) for m in range(1, 11) for n in range(m + 1, 11)]
        base = r2_formula_check(1, 8).blocks
    r2_match = sum(r.r2_poly == stated_r2_poly(r.m) for r in reports)
    invariant = all(r.all_invariant for r in reports)
    independent = all(r.blocks[k] == base[k] for r in reports for k in base if k != "R2")
    distinct = sum(v is Verdict.DISTINCT for v in verdicts)
    ok = r2_match == 10 and invariant and independent and distinct == 45 and clk.seconds < 10
    got = reports[0].r2_poly
    return ok, (f"R2 char poly equals x^2 - (m^2+2)x - 1 for {r2_match}/10 m (m=1 gives {list(got)}); "
                f"all R_i invariant: {invariant}; R_i (i != 2) independent of m: {independent}; "
                f"Distinct {distinct}/45; {clk.seconds:.2f} s (< 10 s)")


def criterion_4():
    rng = np.random.default_rng(SEED)
    with audited(), Clock() as clk:
        pair = GeneratingPair.h0_rho(1, 8).matrices()
        ref = commutator_invariant(pair)
        results = []
        for _ in range(1000):
            moves = random_moves(rng, int(rng.integers(1, 201)))
            results.append(check_move_sequence(pair, moves, ref))
    bad = sum(not r.ok for r in results)
    exact = np.array([r.exact_moves for r in results])
    full = sum(r.exact_moves == r.moves for r in results)
    ok = bad == 0 and clk.seconds < 60
    return ok, (f"1000 sequences (length 1..200): {bad} changed the invariant; exact integer replay "
                f"covered {exact.sum()} moves (median prefix {int(np.median(exact))}, {full} sequences "
                f"in full), all moves modulo 3 primes; {clk.seconds:.2f} s (< 60 s)")


def criterion_5():
    rng = np.random.default_rng([SEED, 5])
    bad = 0
    with audited(), Clock() as clk:
        bases = {n: GeneratingPair.h0_rho(n, 8).matrices() for n in range(1, 6)}
        refs = {n: commutator_invariant(bases[n]) for n in bases}
        for k in range(100):
            n = 1 + k % 5
            A, B = bases[n]
            P = random_symplectic(8, rng)
            Pi = P.inverse()
            bad += commutator_invariant((P @ A @ Pi, P @ B @ Pi)) != refs[n]
    ok = bad == 0 and clk.seconds < 10
    return ok, f"100 symplectic conjugations of (h0, rho_n), n=1..5: {bad} changed; {clk.seconds:.2f} s (< 10 s)"


def criterion_6():
    rng = np.random.default_rng([SEED, 6])
    problems = []
    with Clock() as clk:
        rows = sl2.enumerate_torsion_pairs()
        for r in rows:
            if r.generating:
                pair = (sl2.X ** r.a, sl2.Y ** r.b)
                for name, target in (("x", sl2.X), ("T", sl2.T)):
                    if sl2.evaluate_pair_word(r.certificates[name], pair) != target:
                        problems.append(f"certificate {name} for ({r.a},{r.b})")
            elif not r.reason:
                problems.append(f"no reason for ({r.a},{r.b})")
        expected = {(a, b) for a in (1, 3) for b in (1, 2, 4, 5)}
        if len(rows) != 24 or {(r.a, r.b) for r in rows if r.generating} != expected:
            problems.append("torsion table")
        unreduced = 0
        for _ in range(100):
            pair, _, _ = sl2.random_generating_pair(rng, moves=15)
            res = sl2.nielsen_reduce(pair)
            unreduced += not (res.canonical and max(res.lengths()) <= 1)
        if unreduced:
            problems.append(f"{unreduced}/100 pairs not reduced")
        gens = [sl2.X, sl2.Y, sl2.X.inverse(), sl2.Y.inverse()]
        trips = 0
        for _ in range(10_000):
            M = sl2.I
            for k in rng.integers(4, size=int(rng.integers(0, 31))):
                M = M * gens[k]
            trips += sl2.recompose(sl2.decompose(M)) == M
        if trips != 10_000:
            problems.append(f"{10_000 - trips} round trips failed")
    ok = not problems and clk.seconds < 30
    gen = sum(r.generating for r in rows)
    return ok, (f"24 torsion pairs ({gen} generating), 100 random pairs reduced, {trips} round trips; "
                f"{'; '.join(problems) or 'no problems'}; {clk.seconds:.2f} s (< 30 s)")


def criterion_7():
    AUDIT.flush()
    ok = (DONE >= {1, 2, 3, 4, 5} and AUDIT.count > 0 and AUDIT.not_symplectic == 0
          and POLYS.non_reciprocal == 0 and AUDIT.block_failures == 0)
    return ok, (f"{AUDIT.count} matrices from criteria 1-5: {AUDIT.not_symplectic} not symplectic; "
                f"{POLYS.count} char polys, {POLYS.non_reciprocal} not reciprocal; "
                f"{AUDIT.block_checked} distinct block-diagonal matrices, {AUDIT.block_failures} "
                f"failing the block factorisation; audit {AUDIT.seconds:.1f} s")


CRITERIA = {1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4,
            5: criterion_5, 6: criterion_6, 7: criterion_7}


def _run(num: int, capsys=None) -> bool:
    ok, text = CRITERIA[num]()
    DONE.add(num)
    verdict(num, ok, text, capsys)
    return ok


@pytest.mark.parametrize("num", sorted(CRITERIA))
def test_criterion(num, capsys):
    if num == 7:
        for k in range(1, 6):
            if k not in DONE:
                _run(k, capsys)
    assert _run(num, capsys)


if __name__ == "__main__":
    results = [_run(k) for k in sorted(CRITERIA)]
    sys.exit(0 if all(results) else 1)
