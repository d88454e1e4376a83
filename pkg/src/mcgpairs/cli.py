"""Command-line front end: every check as a JSON-emitting batch command.

Exit status: 0 success, 1 usage or configuration error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import io
import json
import sys
from typing import Callable

import numpy as np

from . import sl2
from .config import DEFAULT_SEED, ConfigError, RunConfig, parse_range
from .derivation import VerificationFailed, generator_words
from .homology import UnknownToken, char_poly, evaluate, invariant_subspaces, restrict
from .nielsen import GeneratingPair, Verdict, commutator_invariant, distinguish, r2_formula_check
from .relations import relation_suite
from .words import Word

OK, CONFIG_ERROR, VERIFY_FAILED = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(CONFIG_ERROR, f"{self.prog}: error: {message}\n")


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--genus", default=None, help="genus, or an inclusive range A..B")
    p.add_argument("--n", default=None, help="parameter n of rho_n = r t_{a1}^n, or A..B")
    p.add_argument("--m", default=None, help="parameter m for prop3/distinguish, or A..B")
    p.add_argument("--range", dest="range_", default=None, metavar="A..B",
                   help="values for the command's main parameter (n for derive, m for prop3)")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--depth", type=int, default=None, help="search depth bound")
    p.add_argument("--json-out", default=None, metavar="PATH")
    p.add_argument("--quiet", action="store_true", help="suppress JSON on stdout")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="mcgpairs", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("relations", parents=[common], help="exact relation suite on H_1")
    d = sub.add_parser("derive", parents=[common], help="SLP ledger and generator certificates")
    d.add_argument("--words", action="store_true",
                   help="include every certificate word over {h0, rho} (tens of millions of letters)")
    sub.add_parser("prop3", parents=[common], help="block char polys of [h0, rho_m]")
    ds = sub.add_parser("distinguish", parents=[common], help="commutator invariant comparison")
    ds.add_argument("--pair-a", default=None, help='two words separated by ";" (uses --n)')
    ds.add_argument("--pair-b", default=None, help='two words separated by ";" (uses --n)')
    s = sub.add_parser("sl2", help="SL(2, Z) normal forms and Nielsen reduction")
    ssub = s.add_subparsers(dest="sl2_command", required=True, parser_class=_Parser)
    ssub.add_parser("enumerate", parents=[common])
    r = ssub.add_parser("reduce", parents=[common])
    r.add_argument("--pair", required=True, help='"a b c d;e f g h"')
    dc = ssub.add_parser("decompose", parents=[common])
    dc.add_argument("--matrix", required=True, help='"a b c d"')
    ev = sub.add_parser("evaluate", parents=[common], help="evaluate a word file on H_1")
    ev.add_argument("file", help="one word per line")
    return parser


def _config(args) -> RunConfig:
    cfg = RunConfig(seed=args.seed, json_out=args.json_out, quiet=args.quiet)
    if args.genus is not None:
        cfg.genus = parse_range(args.genus)
    if args.n is not None:
        cfg.n = parse_range(args.n)
    if args.m is not None:
        cfg.m = parse_range(args.m)
    if args.range_ is not None:
        values = parse_range(args.range_)
        if args.command == "derive":
            cfg.n = values
        elif args.command == "prop3":
            cfg.m = values
        else:
            cfg.genus = values
    if args.depth is not None:
        if args.depth < 1:
            raise ConfigError("--depth must be positive")
        cfg.depth = args.depth
    return cfg


def _emit(cfg: RunConfig, payload: dict, writer: Callable[[io.TextIOBase], None] | None = None) -> None:
    """Write JSON to --json-out and/or stdout; ``writer`` streams payloads too big to hold."""
    payload = {"timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(), **payload}
    sinks = []
    if cfg.json_out:
        sinks.append(open(cfg.json_out, "w"))
    if not cfg.quiet:
        sinks.append(sys.stdout)
    for fh in sinks:
        if writer is None:
            json.dump(payload, fh, indent=1)
        else:
            writer(fh, payload)
        fh.write("\n")
        if fh is not sys.stdout:
            fh.close()


def cmd_relations(cfg: RunConfig, args) -> int:
    cfg.require_genus(2, "the relation suite")
    results, passed = [], True
    for g in cfg.genus:
        rng = np.random.default_rng([cfg.seed, g])
        rs = relation_suite(g, rng)
        passed &= all(r.passed for r in rs)
        results.append({"genus": g, "instances": [r.to_json() for r in rs],
                        "lantern_instances": sum(r.family == "lantern" for r in rs)})
    _emit(cfg, {"command": "relations", "config": cfg.to_json(), "passed": passed, "results": results})
    return OK if passed else VERIFY_FAILED


def _derive_writer(runs, with_words: bool):
    def write(fh, payload):
        head = json.dumps({k: v for k, v in payload.items() if k != "runs"}, indent=1)
        fh.write(head[:-2] + ',\n "runs": [\n')
        for i, (run, certs) in enumerate(runs):
            body = json.dumps(run, indent=1)
            if not with_words or not certs:
                fh.write(body)
            else:
                # certificates are written one by one so the words can stream
                fh.write(body[:-2] + ',\n "certificate_words": {\n')
                for j, cert in enumerate(certs):
                    fh.write(f'  {json.dumps(cert.target)}: "')
                    for piece_no, piece in enumerate(cert.word().chunks()):
                        fh.write((" " if piece_no else "") + piece)
                    fh.write('"' + (",\n" if j < len(certs) - 1 else "\n"))
                fh.write(" }\n}")
            fh.write(",\n" if i < len(runs) - 1 else "\n")
        fh.write("]\n}")
    return write


def cmd_derive(cfg: RunConfig, args) -> int:
    cfg.require_genus(8, "derive")
    runs, status = [], OK
    for g in cfg.genus:
        for n in cfg.n:
            run = {"genus": g, "n": n, "outside_positive_regime": n <= 0}
            certs = []
            try:
                certs = generator_words(g, n)
                slp = certs[0].slp
                run.update(verified=all(c.verified for c in certs), failed_node=None,
                           ledger=slp.ledger(), certificates=[c.to_json() for c in certs])
            except VerificationFailed as err:
                run.update(verified=False, failed_node=err.name, error=str(err))
                status = VERIFY_FAILED
            runs.append((run, certs))
    payload = {"command": "derive", "config": cfg.to_json(),
               "passed": status == OK, "runs": None}
    _emit(cfg, payload, _derive_writer(runs, args.words))
    return status


def _r2_block(m: int, genus: int):
    C = evaluate("h0 rho h0^-1 rho^-1", genus, m)
    return list(char_poly(restrict(C, invariant_subspaces(genus)[1])))


def cmd_prop3(cfg: RunConfig, args) -> int:
    cfg.require_genus(8, "prop3")
    out, passed = [], True
    for g in cfg.genus:
        ms = cfg.m
        if min(ms) < 1:
            raise ConfigError("prop3 needs m >= 1")
        reports = [r2_formula_check(m, g) for m in ms]
        invs = {m: commutator_invariant(GeneratingPair.h0_rho(m, g)) for m in ms}
        pairs = []
        for i, m in enumerate(ms):
            for n in ms[i + 1:]:
                pairs.append({"m": m, "n": n, "verdict": distinguish(invs[m], invs[n]).value})
        all_distinct = all(p["verdict"] == Verdict.DISTINCT.value for p in pairs)
        passed &= all_distinct and all(r.ok for r in reports)
        out.append({"genus": g, "reports": [r.to_json() for r in reports],
                    "pairs": pairs, "all_distinct": all_distinct})
    _emit(cfg, {"command": "prop3", "config": cfg.to_json(), "passed": passed, "results": out})
    return OK if passed else VERIFY_FAILED


def _pair_from_text(text: str, genus: int, n: int | None) -> GeneratingPair:
    parts = [p.strip() for p in text.split(";")]
    if len(parts) != 2:
        raise ConfigError(f"expected two words separated by ';', got {text!r}")
    return GeneratingPair(tuple(Word.parse(p) for p in parts), genus, n)


def cmd_distinguish(cfg: RunConfig, args) -> int:
    g = cfg.genus[0]
    if args.pair_a or args.pair_b:
        cfg.require_genus(2, "distinguish")
        if not (args.pair_a and args.pair_b):
            raise ConfigError("--pair-a and --pair-b go together")
        A = _pair_from_text(args.pair_a, g, cfg.n[0])
        B = _pair_from_text(args.pair_b, g, cfg.n[0])
        verdict = distinguish(A, B)
        payload = {"pair_a": args.pair_a, "pair_b": args.pair_b, "verdict": verdict.value,
                   "invariant_a": [list(p) for p in commutator_invariant(A).polys],
                   "invariant_b": [list(p) for p in commutator_invariant(B).polys]}
    else:
        cfg.require_genus(8, "distinguish of (h0, rho_m) pairs")
        m, n = cfg.m[0], cfg.n[0]
        verdict = distinguish(GeneratingPair.h0_rho(m, g), GeneratingPair.h0_rho(n, g))
        payload = {"m": m, "n": n, "verdict": verdict.value,
                   "r2_charpoly_A": _r2_block(m, g), "r2_charpoly_B": _r2_block(n, g)}
    _emit(cfg, {"command": "distinguish", "config": cfg.to_json(), "genus": g, **payload})
    return OK


def _ints(text: str, count: int) -> list[int]:
    try:
        vals = [int(x) for x in text.replace(",", " ").split()]
    except ValueError:
        raise ConfigError(f"expected integers, got {text!r}") from None
    if len(vals) != count:
        raise ConfigError(f"expected {count} integers, got {len(vals)}")
    return vals


def _mat2(text: str) -> sl2.Mat2:
    try:
        return sl2.Mat2(*_ints(text, 4))
    except sl2.NotUnimodular as err:
        raise ConfigError(str(err)) from None


def _nf_json(M: sl2.Mat2) -> dict:
    nf = sl2.decompose(M)
    return {"matrix": str(M), "normal_form": nf.tokens(), "syllable_length": nf.syllable_length}


def cmd_sl2(cfg: RunConfig, args) -> int:
    depth = cfg.depth
    if args.sl2_command == "enumerate":
        rows = sl2.enumerate_torsion_pairs(16 if args.depth is None else depth)
        bounds = sl2.nielsen_class_bounds()
        payload = {"rows": [r.to_json() for r in rows],
                   "generating_count": sum(r.generating for r in rows),
                   "nielsen_class_bounds": {"lower": bounds.lower, "upper": bounds.upper,
                                            "commutator_traces": bounds.commutator_traces,
                                            "endpoints": [list(e) for e in bounds.endpoints]}}
        status = OK
    elif args.sl2_command == "reduce":
        halves = args.pair.split(";")
        if len(halves) != 2:
            raise ConfigError('--pair must look like "a b c d;e f g h"')
        pair = (_mat2(halves[0]), _mat2(halves[1]))
        res = sl2.nielsen_reduce(pair, depth)
        payload = {"input": [_nf_json(M) for M in pair], "output": [_nf_json(M) for M in res.pair],
                   "log": [str(mv) for mv in res.log],
                   "elementary_moves": [str(mv) for mv in res.elementary_moves()],
                   "canonical": res.canonical, "search_exhausted": res.exhausted}
        status = OK
    else:
        payload = _nf_json(_mat2(args.matrix))
        status = OK
    _emit(cfg, {"command": f"sl2 {args.sl2_command}", "config": cfg.to_json(), **payload})
    return status


def cmd_evaluate(cfg: RunConfig, args) -> int:
    g, n = cfg.genus[0], cfg.n[0]
    cfg.require_genus(2, "evaluate")
    try:
        with open(args.file) as fh:
            lines = [ln.strip() for ln in fh if ln.strip() and not ln.lstrip().startswith("#")]
    except OSError as err:
        raise ConfigError(str(err)) from None
    rows, ok = [], True
    for line in lines:
        M = evaluate(Word.parse(line), g, n)
        sym = M.is_symplectic()
        ok &= sym
        rows.append({"word": line, "matrix": M.to_json(), "charpoly": [str(c) for c in char_poly(M)],
                     "symplectic": sym})
    _emit(cfg, {"command": "evaluate", "config": cfg.to_json(), "results": rows})
    return OK if ok else VERIFY_FAILED


COMMANDS = {"relations": cmd_relations, "derive": cmd_derive, "prop3": cmd_prop3,
            "distinguish": cmd_distinguish, "sl2": cmd_sl2, "evaluate": cmd_evaluate}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config(args)
        return COMMANDS[args.command](cfg, args)
    except (ConfigError, UnknownToken) as err:
        print(f"mcgpairs: {err}", file=sys.stderr)
        return CONFIG_ERROR
    except ValueError as err:
        print(f"mcgpairs: {err}", file=sys.stderr)
        return CONFIG_ERROR
    except (VerificationFailed, ArithmeticError) as err:
        print(f"mcgpairs: {err}", file=sys.stderr)
        return VERIFY_FAILED


if __name__ == "__main__":
    sys.exit(main())
