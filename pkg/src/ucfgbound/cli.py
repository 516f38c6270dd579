"""Command-line front end.

Subcommands::

    gen {kmn,log,ucfg,ucfg-paper,nfa} N   write a grammar or NFA file
    check FILE                            language size, uniform length, ambiguity
    decompose FILE                        balanced rectangle cover and its checks
    verify-lemmas --n N                   discrepancy checks and cover lower bound
    report-series --n-min A --n-max B     size and cover growth table

Reports are JSON (``schemaVersion`` 1) or CSV.  Exit status is 0 when every
asserted check passed, 1 when one failed and 2 for usage or I/O errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from . import constructions as cons
from . import discrepancy as disc
from .errors import CapExceeded, GrammarParseError, UcfgError
from .grammar import (DEFAULT_MAX_WORDS, count_parse_trees, enumerate_language, grammar_size,
                      is_unambiguous, prune_useless, to_cnf)
from .rectangles import extract_rectangle_cover, rectangle_to_set_rectangle
from .textformat import parse_grammar, print_grammar, print_nfa

SCHEMA_VERSION = 1
SAFE_INT = 1 << 53
COVER_CAP = 8


class UsageError(Exception):
    pass


def _jsonable(value):
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, int):
        return str(value) if abs(value) >= SAFE_INT else value
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (frozenset, set)):
        return [_jsonable(v) for v in sorted(value)]
    raise TypeError(f"cannot serialize {type(value).__name__}")


def render_json(report: dict) -> str:
    body = {"schemaVersion": SCHEMA_VERSION, **report}
    return json.dumps(_jsonable(body), indent=2, ensure_ascii=False) + "\n"


def _csv_cell(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    return _jsonable(value)


def render_csv(rows: list) -> str:
    columns = []
    for row in rows:
        columns += [k for k in row if k not in columns]
    buf = io.StringIO()
    writer = csv.DictWriter(buf, columns, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: _csv_cell(v) for k, v in row.items()})
    return buf.getvalue()


def _write(text: str, out):
    if out in (None, "-"):
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {out}: {exc}") from None


def _read_grammar(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_grammar(fh.read())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None


def _n_arg(args):
    n = args.n if args.n is not None else args.n_pos
    if n is None:
        raise UsageError("missing n")
    return n


# -- gen -----------------------------------------------------------------------

GENERATORS = {
    "kmn": lambda n, big: cons.grammar_kmn(n),
    "log": lambda n, big: cons.grammar_log(n),
    "ucfg": lambda n, big: cons.grammar_unambiguous(n, allow_big=big),
    "ucfg-paper": lambda n, big: cons.grammar_unambiguous_paper(n, allow_big=big),
}


def cmd_gen(family: str, n: int, allow_big: bool = False) -> str:
    if family == "nfa":
        return print_nfa(cons.nfa_guess_verify(n))
    return print_grammar(GENERATORS[family](n, allow_big))


# -- check ---------------------------------------------------------------------

def cmd_check(g, max_words: int = DEFAULT_MAX_WORDS):
    """Report on one grammar; raises the usual language errors."""
    pruned = prune_useless(g)
    lang = enumerate_language(pruned, max_words)
    ok, witness = is_unambiguous(pruned, max_words)
    report = {
        "command": "check",
        "grammarSize": grammar_size(g),
        "prunedSize": grammar_size(pruned),
        "cnfSize": grammar_size(to_cnf(pruned)),
        "languageSize": len(lang),
        "uniformLength": lang.uniform_length,
        "unambiguous": ok,
        "witness": witness,
        "witnessTrees": None if ok else count_parse_trees(to_cnf(pruned), witness),
    }
    return report, True


# -- decompose -----------------------------------------------------------------

def cmd_decompose(g, require_disjoint: bool = False, max_words: int = DEFAULT_MAX_WORDS):
    rects, rep = extract_rectangle_cover(g, max_words)
    set_balanced = None
    if rep.word_length % 2 == 0 and rep.word_length:
        set_balanced = all(rectangle_to_set_rectangle(r).partition.is_balanced() for r in rects)
    checks = {
        "unionExact": rep.union_equal,
        "allBalanced": rep.all_balanced,
        "withinBound": rep.within_bound,
    }
    if require_disjoint:
        checks["disjoint"] = rep.disjoint
    report = {
        "command": "decompose",
        "wordLength": rep.word_length,
        "ell": rep.ell,
        "rawSize": rep.raw_size,
        "cnfSize": rep.cnf_size,
        "positionedSize": rep.positioned_size,
        "bound": rep.bound,
        "unionSize": sum(len(r) for r in rects) if rep.disjoint else None,
        "disjoint": rep.disjoint,
        "degenerate": rep.degenerate,
        "setPartitionsBalanced": set_balanced,
        "middleLengths": sorted({r.n2 for r in rects}),
        "rectangleSizes": [len(r) for r in rects],
        "checks": checks,
    }
    return report, all(checks.values())


# -- verify-lemmas -------------------------------------------------------------

def _cover_for(n: int):
    if n <= cons.UCFG_CAP:
        rects, _ = extract_rectangle_cover(cons.grammar_unambiguous(n))
        return "ucfg", [rectangle_to_set_rectangle(r) for r in rects]
    return "rows", disc.row_cover(n)


def cmd_verify_lemmas(n: int, samples: int, seed: int):
    if n < 4:
        raise UsageError("verify-lemmas needs n >= 4")
    n4 = n - n % 4
    _, ab = disc.build_ab(n4)
    m = n4 // 4
    checks = {}

    counting = disc.verify_counting_lemma(n4)
    checks.update({f"counting: {k}": v for k, v in counting.checks.items()})

    restricted = disc.check_restricted_bound(n4, samples, seed, ab)
    checks["restricted bound (sampled)"] = not restricted.violations

    general = disc.check_general_bound(n4, samples, seed, ab)
    checks["general bound (sampled)"] = not general.violations
    checks["alpha decomposition"] = not general.decomposition_failures

    neat = disc.check_make_neat(n4, samples, seed, ab)
    checks["make_neat"] = neat.ok

    f = ab.family
    neat_parts = disc.neat_balanced_partitions(n4)
    checks["good indices (exhaustive)"] = all(disc.lemma47_holds(p) for p in neat_parts)

    cover = {"n": n}
    if n > COVER_CAP:
        cover["skipped"] = f"cover pipeline runs for n <= {COVER_CAP}"
    else:
        source, rects = _cover_for(n)
        cover.update(source=source, ell=len(rects))
        if n4 != n:
            reduced = disc.restrict_to_multiple_of_four(rects, n)
            spares = 2 * (n - n4)
            cover.update(reducedTo=n4, reducedEll=len(reduced.rectangles),
                         maxInflation=max(reduced.pieces), inflationLimit=1 << spares)
            checks["spare reduction inflation"] = max(reduced.pieces) <= 1 << spares
            rects = reduced.rectangles
        lb = disc.cover_lower_bound(rects, n4, ab)
        cover.update(telescopingSum=lb.telescoping_sum, neatPieces=lb.neat_total,
                     maxNeatInflation=lb.max_inflation, maxNeatDiscrepancy=lb.max_neat_discrepancy,
                     impliedMinNeat=lb.implied_min_neat, impliedMinCover=lb.implied_min_cover,
                     neatError=lb.neat_error)
        checks.update({f"cover: {k}": v for k, v in lb.checks.items()})

    report = {
        "command": "verify-lemmas",
        "n": n, "reducedN": n4, "m": m,
        "samples": samples, "seed": seed,
        "familySize": counting.family_size,
        "sizeA": counting.a_count, "sizeB": counting.b_count,
        "gap": counting.gap,
        "gapExceedsThreshold": counting.threshold_holds,
        "restrictedBound": restricted.bound,
        "restrictedMax": restricted.by_mode,
        "restrictedViolations": restricted.violations[:20],
        "generalBound": general.bound,
        "generalMax": general.by_mode,
        "generalViolations": general.violations[:20],
        "neatMaxPieces": neat.max_pieces,
        "neatFailures": neat.failures[:20],
        "neatBalancedPartitions": len(neat_parts),
        "intervals": len(f.intervals),
        "cover": cover,
        "checks": checks,
    }
    return report, all(checks.values())


# -- report-series -------------------------------------------------------------

def series_row(n: int, max_words: int = DEFAULT_MAX_WORDS, allow_big: bool = False) -> dict:
    log = cons.grammar_log(n)
    row = {"n": n, "wordLength": 2 * n, "languageSize": disc.ln_size(n),
           "logSize": grammar_size(log), "logCnfSize": grammar_size(to_cnf(log))}
    u = cons.grammar_unambiguous(n, allow_big=allow_big)
    rects, rep = extract_rectangle_cover(u, max_words)
    row.update(ucfgSize=rep.raw_size, ucfgCnfSize=rep.cnf_size, ell=rep.ell,
               disjoint=rep.disjoint, coverBound=rep.bound,
               coverBoundRatio=Fraction(rep.ell, rep.bound),
               sizeRatio=Fraction(rep.raw_size, row["logSize"]))
    return row


def cmd_report_series(n_min: int, n_max: int, allow_big: bool = False,
                      max_words: int = DEFAULT_MAX_WORDS) -> list:
    if n_min < 1 or n_max < n_min:
        raise UsageError(f"bad range {n_min}..{n_max}")
    rows = []
    for n in range(n_min, n_max + 1):
        if n > cons.UCFG_CAP and not allow_big:
            rows.append({"n": n, "warning": f"truncated: n > {cons.UCFG_CAP} needs --allow-big"})
            break
        rows.append(series_row(n, max_words, allow_big))
    return rows


# -- entry point ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ucfgbound", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, fmt=("json",)):
        p.add_argument("--out", "-o", default=None, help="output path (default stdout)")
        p.add_argument("--format", choices=fmt, default=fmt[0])
        p.add_argument("--max-words", type=int, default=DEFAULT_MAX_WORDS)

    p = sub.add_parser("gen", help="write a generated grammar or NFA")
    p.add_argument("family", choices=["kmn", "log", "ucfg", "ucfg-paper", "nfa"])
    p.add_argument("n_pos", nargs="?", type=int, metavar="N")
    p.add_argument("--n", type=int)
    p.add_argument("--out", "-o", default=None)
    p.add_argument("--allow-big", action="store_true")

    p = sub.add_parser("check", help="language and ambiguity report for a grammar file")
    p.add_argument("path")
    common(p)

    p = sub.add_parser("decompose", help="balanced rectangle cover of a grammar file")
    p.add_argument("path")
    p.add_argument("--require-disjoint", action="store_true")
    common(p)

    p = sub.add_parser("verify-lemmas", help="discrepancy and cover lower-bound checks")
    p.add_argument("n_pos", nargs="?", type=int, metavar="N")
    p.add_argument("--n", type=int)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=42)
    common(p)

    p = sub.add_parser("report-series", help="per-n size and cover table")
    p.add_argument("--n-min", type=int, default=2)
    p.add_argument("--n-max", type=int, default=6)
    p.add_argument("--allow-big", action="store_true")
    common(p, fmt=("csv", "json"))
    return parser


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "gen":
            _write(cmd_gen(args.family, _n_arg(args), args.allow_big), args.out)
            return 0
        if args.command == "report-series":
            rows = cmd_report_series(args.n_min, args.n_max, args.allow_big, args.max_words)
            if args.format == "csv":
                _write(render_csv(rows), args.out)
            else:
                _write(render_json({"command": "report-series", "rows": rows}), args.out)
            return 0
        if args.command == "verify-lemmas":
            report, ok = cmd_verify_lemmas(_n_arg(args), args.samples, args.seed)
        else:
            g = _read_grammar(args.path)
            try:
                if args.command == "check":
                    report, ok = cmd_check(g, args.max_words)
                else:
                    report, ok = cmd_decompose(g, args.require_disjoint, args.max_words)
            except (CapExceeded, GrammarParseError):
                raise
            except UcfgError as exc:
                report, ok = {"command": args.command, "error": type(exc).__name__,
                              "message": str(exc)}, False
        report["ok"] = ok
        _write(render_json(report), args.out)
        return 0 if ok else 1
    except (UsageError, UcfgError, ValueError) as exc:
        print(f"ucfgbound: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


def main(argv=None):
    sys.exit(run(argv))
