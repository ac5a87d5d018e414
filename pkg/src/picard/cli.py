"""Command line entry points: spine census, cohomology of congruence
subgroups, and validation of the shipped cell data.

Exit status: 0 ok, 1 computation or validation failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from fractions import Fraction
from itertools import combinations

from . import golden
from .complex import (CensusIncomplete, build_complex, data_path, incidence_table,
                      level_one_boundaries, load_cells, validate_complex)
from .cosets import DEFAULT_BUDGET, KINDS, BudgetExceeded, assemble_boundary, build_coset_space
from .field import format_level, parse_level
from .group import is_member, q_abs2
from .smith import ComplexError, SparseIntegerMatrix, cohomology

log = logging.getLogger("picard")

OK, FAILED, USAGE = 0, 1, 2
FIELDS = (1, 3)


class UsageError(Exception):
    pass


# --- spine -----------------------------------------------------------------------


def census_records(data):
    recs = []
    for t in data.types:
        vecs = list(t.rep)
        pairs = {str(q_abs2(a.coords, b.coords)) for a, b in combinations(vecs, 2)}
        recs.append({
            "name": t.name,
            "dim": t.dim,
            "size": len(vecs),
            "stabilizer_order": t.stab_order,
            "span_rank": t.rep.span_rank(),
            "pair_values": sorted(pairs, key=Fraction),
            "vectors": [[format_level(a) for a in v.coords] for v in vecs],
        })
    return recs


def render_census(data, fmt):
    recs = census_records(data)
    names, tab = incidence_table(data)
    if fmt == "json":
        return json.dumps({"field": data.d, "floor": str(data.floor), "types": recs,
                           "incidence": {"names": names, "table": tab}}, indent=2) + "\n"
    out = [f"field d={data.d}  floor={data.floor}  types={len(recs)}"]
    out.append(f"{'type':<6} {'dim':>3} {'size':>4} {'|Stab|':>6} {'rank':>4}  |Q|^2 values")
    for r in recs:
        out.append(f"{r['name']:<6} {r['dim']:>3} {r['size']:>4} {r['stabilizer_order']:>6} "
                   f"{r['span_rank']:>4}  {', '.join(r['pair_values'])}")
    out.append("")
    out.append("incidence (row T, column T'):")
    w = max(len(n) for n in names) + 1
    out.append(" " * w + "".join(f"{n:>{w}}" for n in names))
    for n, row in zip(names, tab):
        out.append(f"{n:<{w}}" + "".join(f"{'*' if x is None else x:>{w}}" for x in row))
    out.append("")
    for r in recs:
        out.append(f"{r['name']}: " + "  ".join("(" + ", ".join(v) + ")" for v in r["vectors"]))
    return "\n".join(out) + "\n"


def cmd_spine(args):
    shipped_path = args.data or data_path(args.field)
    if args.floor is not None or args.diff or args.rebuild:
        floor = Fraction(args.floor) if args.floor is not None else None
        if floor is not None and floor <= 0:
            raise UsageError("--floor must be positive")
        log.info("building the complex for d=%d from scratch", args.field)
        data = build_complex(args.field, floor=floor)
    else:
        data = load_cells(args.field, shipped_path)
    sys.stdout.write(render_census(data, args.format))
    if args.diff:
        shipped = load_cells(args.field, shipped_path)
        if shipped.to_text() == data.to_text():
            print("identical")
        else:
            a, b = shipped.to_text().splitlines(), data.to_text().splitlines()
            first = next((i for i, (x, y) in enumerate(zip(a, b)) if x != y), min(len(a), len(b)))
            print(f"differs from {shipped_path} at line {first + 1}")
            return FAILED
    return OK


# --- cohomology -----------------------------------------------------------------


def run_job(d, kind, level, data=None, budget=DEFAULT_BUDGET):
    """Cohomology of the quotient; returns a result dict."""
    data = data or load_cells(d)
    N = parse_level(level, d)
    t0 = time.perf_counter()
    space = build_coset_space(kind, N, data.generators(), budget=budget)
    Q = assemble_boundary(space, data)
    H = cohomology(Q.boundaries, Q.counts)
    return {
        "field": d,
        "kind": kind,
        "level": format_level(N),
        "points": len(space),
        "cells": Q.counts,
        "matrices": [list(B.shape) for B in Q.boundaries],
        "H": H,
        "seconds": time.perf_counter() - t0,
    }


def render_job(res, fmt):
    H = res["H"]
    if fmt == "json":
        rec = {k: v for k, v in res.items() if k not in ("H", "seconds")}
        rec["cohomology"] = {f"H{i}": h.to_record() for i, h in enumerate(H)}
        return json.dumps(rec, sort_keys=True) + "\n"
    if fmt == "csv":
        head = "field,kind,level,points,H0,H1,H2,H3"
        row = [str(res["field"]), res["kind"], res["level"], str(res["points"])] + [str(h) for h in H]
        return head + "\n" + ",".join(f'"{x}"' if "," in x or "+" in x else x for x in row) + "\n"
    lines = [
        f"field d={res['field']}  kind={res['kind']}  level={res['level']}  |X|={res['points']}",
        "cells: " + " ".join(f"C{i}={n}" for i, n in enumerate(res["cells"])),
        "matrices: " + " ".join(f"d{i + 1}={r}x{c}" for i, (r, c) in enumerate(res["matrices"])),
    ]
    lines += [f"H^{i} = {h}" for i, h in enumerate(H)]
    ref = golden.lookup(res["field"], res["kind"], res["level"])
    if ref is not None:
        match = all(a == b for a, b in zip(ref, H[1:]))
        lines.append("reference: " + ("match" if match else "MISMATCH " + ", ".join(map(str, ref))))
    return "\n".join(lines) + "\n"


def cmd_cohomology(args):
    try:
        parse_level(args.level, args.field)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad level {args.level!r}: {exc}") from exc
    if args.budget <= 0:
        raise UsageError("--budget must be positive")
    data = load_cells(args.field, args.data)
    res = run_job(args.field, args.kind, args.level, data=data, budget=args.budget)
    sys.stdout.write(render_job(res, args.format))
    log.info("wall time %.2f s", res["seconds"])
    return OK


# --- validate --------------------------------------------------------------------

SMOKE_LEVELS = {1: [("gamma0", "2"), ("gamma1", "2"), ("principal", "1+i")],
                3: [("gamma0", "2+zeta"), ("gamma0", "5")]}


def validate_field(d, path=None):
    """List of failure messages for one field."""
    bad = []
    try:
        data = load_cells(d, path)
    except (OSError, ValueError, KeyError, IndexError) as exc:
        return [f"d={d}: cannot read cell data: {exc}"]
    goldtab = (list(golden.INCIDENCE_NAMES), [list(r) for r in golden.INCIDENCE_PRINTED]) if d == 3 else None
    bad += [f"d={d}: {m}" for m in validate_complex(data)]
    for g in data.generators():
        if not is_member(g):
            bad.append(f"d={d}: generator outside the group: {g.to_text()}")
            break
    if d == 3:
        orders = {t.name: t.stab_order for t in data.types}
        if orders != golden.STABILIZER_ORDERS:
            bad.append(f"d=3: stabilizer orders {orders}")
        names, tab = incidence_table(data)
        gnames, gtab = goldtab
        for i, a in enumerate(gnames):
            for j, b in enumerate(gnames):
                want = gtab[i][j]
                if want is not None and a in names and b in names:
                    got = tab[names.index(a)][names.index(b)]
                    if got != want:
                        log.warning("d=3 incidence (%s, %s): %s, printed %s", a, b, got, want)
    mats = [SparseIntegerMatrix.from_dense(m.tolist()) for m in level_one_boundaries(data)]
    counts = [len(data.by_dim(k)) for k in range(4)]
    for kind, level in [("gamma0", "1")] + SMOKE_LEVELS[d]:
        try:
            if level == "1":
                H = cohomology(mats, counts)
                cells = counts
            else:
                res = run_job(d, kind, level, data=data)
                H, cells = res["H"], res["cells"]
        except (ComplexError, BudgetExceeded, KeyError) as exc:
            bad.append(f"d={d} {kind}({level}): {exc}")
            continue
        if str(H[0]) != "Z":
            bad.append(f"d={d} {kind}({level}): H^0 = {H[0]}")
        euler = sum((-1) ** i * n for i, n in enumerate(cells))
        if euler != sum((-1) ** i * h.rank for i, h in enumerate(H)):
            bad.append(f"d={d} {kind}({level}): Euler characteristic mismatch")
        ref = golden.lookup(d, kind, level) if level != "1" else None
        if ref is not None and tuple(ref) != tuple(H[1:]):
            bad.append(f"d={d} {kind}({level}): got {', '.join(map(str, H[1:]))}")
    return bad


def cmd_validate(args):
    fields = FIELDS if args.field == "all" else (int(args.field),)
    if args.data and len(fields) > 1:
        raise UsageError("--data needs a single --field")
    failures = []
    for d in fields:
        bad = validate_field(d, args.data)
        print(f"d={d}: {'pass' if not bad else 'FAIL'}")
        for m in bad:
            print(f"  {m}")
        failures += bad
    return FAILED if failures else OK


# --- entry point -----------------------------------------------------------------


def build_parser():
    p = argparse.ArgumentParser(prog="picard", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("spine", help="cell census of the spine")
    s.add_argument("--field", type=int, choices=FIELDS, required=True)
    s.add_argument("--floor", help="height floor (rational); forces a rebuild")
    s.add_argument("--diff", action="store_true", help="rebuild and compare with the cell-data file")
    s.add_argument("--rebuild", action="store_true", help="recompute instead of loading the cell data")
    s.add_argument("--data", help="cell-data file (default: shipped or $PICARD_DATA_DIR)")
    s.add_argument("--format", choices=("table", "json"), default="table")
    s.set_defaults(func=cmd_spine)

    c = sub.add_parser("cohomology", help="integral cohomology of a congruence subgroup")
    c.add_argument("--field", type=int, choices=FIELDS, required=True)
    c.add_argument("--kind", choices=KINDS, default="gamma0")
    c.add_argument("--level", required=True, help='e.g. "7", "2+i", "3+zeta", "2+1*sqrt(-3)"')
    c.add_argument("--format", choices=("table", "csv", "json"), default="table")
    c.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="maximum coset-space points")
    c.add_argument("--threads", type=int, default=1, help="worker cap (computation is sequential)")
    c.add_argument("--data", help="cell-data file (default: shipped or $PICARD_DATA_DIR)")
    c.set_defaults(func=cmd_cohomology)

    v = sub.add_parser("validate", help="check the cell data and a few small levels")
    v.add_argument("--field", choices=("1", "3", "all"), default="all")
    v.add_argument("--data", help="cell-data file to check instead of the shipped one")
    v.set_defaults(func=cmd_validate)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except (CensusIncomplete, BudgetExceeded, ComplexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return FAILED
    except (FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return FAILED


if __name__ == "__main__":
    sys.exit(main())
