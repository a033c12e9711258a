"""Command-line front end: census scan, per-triple analysis, group reports,
fixture verification, and label statistics."""

from __future__ import annotations

import argparse
import json
import random
import sys
from concurrent.futures import ProcessPoolExecutor

from .gaussian import gi_quadratic_symbol, split_prime, symbol_one_plus_i
from .group2 import GroupSizeError, build_two_param_group, fingerprint
from .params import (
    PairData,
    TripleConditionError,
    candidate_triples,
    compute_invariants,
    compute_pair_data,
    group_label,
    validate_triple,
)
from .predict import (
    FixtureFormatError,
    consistency_check,
    predict_all,
    verify_all_fixtures,
)
from .quadfield import (
    class_group_imaginary,
    class_number_real,
    fundamental_unit,
    two_valuation,
)

SCAN_FIELDS = ("d", "p1", "p2", "q", "gamma", "delta", "N", "m", "n",
               "pi", "beta", "I", "disc", "order", "class", "coclass", "label")

_ELEMENT_NAMES = ["1", "H1", "H2", "H1H2", "H3", "H1H3", "H2H3", "H1H2H3"]


def _scan_row(inv) -> dict:
    t = inv.triple
    return {
        "d": t.d, "p1": t.p1, "p2": t.p2, "q": t.q,
        "gamma": inv.gamma, "delta": inv.delta, "N": inv.unit_norm,
        "m": inv.m, "n": inv.n, "pi": inv.pi_symbol, "beta": inv.beta,
        "I": inv.bigI, "disc": inv.disc_k, "order": inv.order_G,
        "class": inv.class_G, "coclass": inv.coclass_G,
        "label": inv.group_label,
    }


def _emit_rows(rows: list[dict], fmt: str, out) -> None:
    if fmt == "json":
        out.write(json.dumps(rows, indent=2))
        out.write("\n")
        return
    out.write(",".join(SCAN_FIELDS) + "\n")
    for row in rows:
        out.write(",".join("" if row[f] is None else str(row[f])
                           for f in SCAN_FIELDS) + "\n")


# ---------------------------------------------------------------------------
# class-number cache (one key:value record per line, append-only)


def _load_cache(path: str) -> dict[int, dict]:
    records = {}
    try:
        with open(path) as fh:
            lines = fh.read().splitlines()
    except FileNotFoundError:
        return records
    for line in lines:
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        rec = {}
        for item in line.split():
            key, value = item.split(":", 1)
            if key == "cl2":
                rec[key] = tuple(int(x) for x in value.split(".")) if value else ()
            else:
                rec[key] = int(value)
        records[rec["radicand"]] = rec
    return records


def _format_record(rec: dict) -> str:
    parts = []
    for key, value in rec.items():
        if key == "cl2":
            parts.append("cl2:" + ".".join(str(x) for x in value))
        else:
            parts.append(f"{key}:{value}")
    return " ".join(parts)


def _records_for_pair(p1: int, p2: int) -> tuple[dict, dict]:
    m12 = p1 * p2
    unit = fundamental_unit(m12)
    h_re, h2_re = class_number_real(m12)
    n = two_valuation(h2_re)
    pos = {"radicand": m12, "h": h_re, "h2": h2_re,
           "cl2": (n,) if n else (),
           "x_num": unit.x_num, "y_num": unit.y_num,
           "denom": unit.denom, "norm": unit.norm}
    h_im, _, cl2_im = class_group_imaginary(-4 * m12)
    neg = {"radicand": -m12, "h": h_im, "h2": 2 ** two_valuation(h_im),
           "cl2": tuple(cl2_im)}
    return pos, neg


def _pair_from_records(p1: int, p2: int, records: dict) -> PairData | None:
    m12 = p1 * p2
    pos, neg = records.get(m12), records.get(-m12)
    if pos is None or neg is None:
        return None
    pi1 = split_prime(p1)[0]
    pi3 = split_prime(p2)[0]
    return PairData(
        unit_norm=pos["norm"],
        m=two_valuation(neg["h"]) - 1,
        n=two_valuation(pos["h2"]),
        pi_symbol=gi_quadratic_symbol(pi1, pi3),
        beta=symbol_one_plus_i(pi1) * symbol_one_plus_i(pi3),
    )


def _spot_check_cache(records: dict) -> list[str]:
    """Recompute a 5% sample of cached records; return mismatch messages."""
    keys = sorted(records)
    if not keys:
        return []
    rng = random.Random(len(keys))
    sample = rng.sample(keys, max(1, len(keys) // 20))
    problems = []
    for rad in sample:
        if rad > 0:
            p_factors = _two_prime_split(rad)
            if p_factors is None:
                continue
            fresh, _ = _records_for_pair(*p_factors)
        else:
            p_factors = _two_prime_split(-rad)
            if p_factors is None:
                continue
            _, fresh = _records_for_pair(*p_factors)
        if fresh != records[rad]:
            problems.append(f"cache record for {rad} does not reproduce")
    return problems


def _two_prime_split(m12: int) -> tuple[int, int] | None:
    for p in range(3, m12):
        if p * p > m12:
            return None
        if m12 % p == 0:
            return (p, m12 // p) if m12 // p != p else None
    return None


# ---------------------------------------------------------------------------
# commands


def cmd_scan(args) -> int:
    try:
        records = _load_cache(args.cache) if args.cache else {}
    except OSError as exc:
        print(f"cache read failed: {exc}", file=sys.stderr)
        return 2
    problems = _spot_check_cache(records)
    if problems:
        for p in problems:
            print(p, file=sys.stderr)
        return 2

    triples = candidate_triples(args.max_d)
    pairs = sorted({(t.p1, t.p2) for t in triples})
    pair_data: dict[tuple[int, int], PairData] = {}
    missing = []
    for pair in pairs:
        cached = _pair_from_records(*pair, records)
        if cached is None:
            missing.append(pair)
        else:
            pair_data[pair] = cached

    new_records = []
    if missing:
        if args.jobs > 1:
            with ProcessPoolExecutor(max_workers=args.jobs) as pool:
                fresh = list(pool.map(_pair_worker, missing))
        else:
            fresh = [_pair_worker(pair) for pair in missing]
        for pair, (data, pos, neg) in zip(missing, fresh):
            pair_data[pair] = data
            new_records.extend([pos, neg])

    if args.cache and new_records:
        try:
            with open(args.cache, "a") as fh:
                for rec in new_records:
                    fh.write(_format_record(rec) + "\n")
        except OSError as exc:
            print(f"cache write failed: {exc}", file=sys.stderr)
            return 2

    rows = [_scan_row(compute_invariants(t, pair_data[(t.p1, t.p2)]))
            for t in triples]
    _emit_rows(rows, args.format, sys.stdout)
    return 0


def _pair_worker(pair: tuple[int, int]):
    pos, neg = _records_for_pair(*pair)
    return compute_pair_data(*pair), pos, neg


def cmd_stats(args) -> int:
    counts: dict[str, int] = {}
    total = 0
    for t in candidate_triples(args.max_d):
        inv = compute_invariants(t)
        counts[inv.group_label] = counts.get(inv.group_label, 0) + 1
        total += 1
    for label, count in sorted(counts.items(), key=lambda kv: (-kv[1], kv[0])):
        print(f"{label}:{count}")
    print(f"total:{total}")
    return 0


def _fmt_type(exps) -> str:
    return "(" + ", ".join(str(2 ** e) for e in exps) + ")"


def _fmt_subgroup(vectors) -> str:
    return "{" + ", ".join(_ELEMENT_NAMES[v] for v in sorted(vectors) if v) + "}"


def cmd_analyze(args) -> int:
    try:
        triple = validate_triple(args.p1, args.p2, args.q)
    except TripleConditionError as exc:
        for cond in exc.conditions:
            print(f"rejected: {cond}", file=sys.stderr)
        return 2
    inv = compute_invariants(triple)
    row = _scan_row(inv)
    for key in SCAN_FIELDS:
        print(f"{key}: {'' if row[key] is None else row[key]}")
    report = predict_all(inv)
    print(f"h2(K3): {report.h2_k3}")
    print(f"tower length: {report.tower_length}")
    print(f"derived type: {_fmt_type(report.derived_type)}")
    for j in range(1, 8):
        print(f"Cl2(K{j}): {_fmt_type(report.quartic_types[j])}"
              f"  kernel {_fmt_subgroup(report.kernels[j])}"
              f"  norms {_fmt_subgroup(report.norm_groups[j])}")
    for j in range(1, 8):
        print(f"Cl2(L{j}): {_fmt_type(report.octic_types[j])}")
    if args.full:
        check = consistency_check(inv)
        if check.ok:
            print(f"consistency: PASS with {check.assignment}")
        else:
            print("consistency: FAIL")
            for failure in check.failures:
                print(f"  {failure}")
            return 1
    return 0


def cmd_group(args) -> int:
    if args.m < 2 or args.n < 1 or args.norm not in (-1, 1):
        print("require m >= 2, n >= 1, norm in {-1, +1}", file=sys.stderr)
        return 2
    try:
        G = build_two_param_group(args.m, args.n, args.norm, args.variant)
        fp = fingerprint(G)
    except (GroupSizeError, ValueError) as exc:
        print(str(exc), file=sys.stderr)
        return 2
    print(f"order: {fp.order}")
    print(f"class: {fp.nilpotency_class}")
    print(f"coclass: {fp.coclass}")
    print(f"abelianization: {_fmt_type(fp.abelianization)}")
    print(f"derived type: {_fmt_type(fp.derived_type)}")
    print(f"center type: {_fmt_type(fp.center_type)}")
    print("layer-1 types: " + ", ".join(_fmt_type(t) for t in fp.layer1_ttt))
    print("layer-2 types: " + ", ".join(_fmt_type(t) for t in fp.layer2_ttt))
    print(f"transfer kernel sizes: {list(fp.tkt_kernel_sizes)}")
    print(f"label: {group_label(args.m, args.n, args.norm)}")
    return 0


def cmd_verify_tables(args) -> int:
    try:
        results = verify_all_fixtures(args.fixtures)
    except FixtureFormatError as exc:
        print(f"fixture format error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"fixture read failed: {exc}", file=sys.stderr)
        return 2
    mismatches = 0
    cells = 0
    for stem in sorted(results):
        for d, verdicts in results[stem]:
            for column, verdict in verdicts.items():
                cells += 1
                if verdict.startswith("mismatch"):
                    mismatches += 1
                    print(f"{stem}:{d}:{column}: {verdict}")
                elif verdict != "match":
                    print(f"{stem}:{d}:{column}: {verdict}")
    print(f"checked {cells} cells, {mismatches} mismatches")
    return 1 if mismatches else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="biqtower",
        description="2-class field tower analysis for the field family "
                    "Q(sqrt(p1*p2*q), i)")
    sub = parser.add_subparsers(dest="command", required=True)

    p_scan = sub.add_parser("scan", help="census of valid (p1, p2, q) triples")
    p_scan.add_argument("--max-d", type=int, required=True)
    p_scan.add_argument("--jobs", type=int, default=1)
    p_scan.add_argument("--cache", type=str, default=None)
    p_scan.add_argument("--format", choices=("csv", "json"), default="csv")
    p_scan.set_defaults(func=cmd_scan)

    p_stats = sub.add_parser("stats", help="group-label histogram")
    p_stats.add_argument("--max-d", type=int, required=True)
    p_stats.set_defaults(func=cmd_stats)

    p_an = sub.add_parser("analyze", help="full report for one triple")
    p_an.add_argument("--p1", type=int, required=True)
    p_an.add_argument("--p2", type=int, required=True)
    p_an.add_argument("--q", type=int, required=True)
    p_an.add_argument("--full", action="store_true",
                      help="also run the group-theoretic consistency check")
    p_an.set_defaults(func=cmd_analyze)

    p_gr = sub.add_parser("group", help="standalone group report")
    p_gr.add_argument("--m", type=int, required=True)
    p_gr.add_argument("--n", type=int, required=True)
    p_gr.add_argument("--norm", type=int, required=True)
    p_gr.add_argument("--variant", choices=("a", "b"), default="a")
    p_gr.set_defaults(func=cmd_group)

    p_vt = sub.add_parser("verify-tables", help="check the shipped fixtures")
    p_vt.add_argument("--fixtures", type=str, default=None,
                      help="directory overriding the embedded fixture files")
    p_vt.set_defaults(func=cmd_verify_tables)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
