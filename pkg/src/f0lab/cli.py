"""Command line front end.

Exit codes: 0 all checks passed, 1 a verification failed, 2 bad input or usage.
Reports go to stdout and depend only on the command line; timing goes to
stderr so that stdout is byte-identical across runs and thread counts.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import io
import json
import sys
import time
from itertools import combinations

from . import clubs as C
from . import enumerator as E
from .errors import InputError
from .files import GOLDEN_DIMS, golden_dir, load_golden, load_model
from .halperin import halperin_check, halperin_check_presentation

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT = 0, 1, 2


def _dump(payload) -> str:
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"


# ---------- enumerate ----------

def enumerate_payload(args) -> dict:
    recs = E.enumerate_tuples(args.dim, args.mode, args.attempts, args.seed,
                              include_rejected=args.include_rejected, threads=args.threads)
    return {"command": "enumerate", "dimension": args.dim, "mode": args.mode,
            "seed": args.seed, "attempts": args.attempts, "count": len(recs),
            "rows": [r.to_json() for r in recs]}


def _note(row: dict) -> str:
    if row["status"] == E.Status.CONFIRMED.value:
        return f"witness {row['witness_source']}"
    if row["status"] == E.Status.REJECTED.value:
        return f"rejected: {row['reason']}"
    return row.get("reason", "")


def render_md(payload: dict) -> str:
    rows = payload["rows"]
    show_note = payload["mode"] == "construct" or any(r["status"] == "rejected" for r in rows)
    head = ["Tuple", "χ"] + (["Note"] if show_note else [])
    out = [f"Dimension {payload['dimension']} (mode {payload['mode']}, seed {payload['seed']})",
           "", "| " + " | ".join(head) + " |", "|" + "---|" * len(head)]
    for r in rows:
        cells = ["(" + ",".join(map(str, r["tuple"])) + ")", str(r["chi"])]
        if show_note:
            cells.append(_note(r))
        out.append("| " + " | ".join(cells) + " |")
    return "\n".join(out) + "\n"


def render_csv(payload: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["tuple", "chi", "status", "note"])
    for r in payload["rows"]:
        w.writerow(["(" + ",".join(map(str, r["tuple"])) + ")", r["chi"], r["status"], _note(r)])
    return buf.getvalue()


def cmd_enumerate(args, out) -> int:
    payload = enumerate_payload(args)
    render = {"json": _dump, "md": render_md, "csv": render_csv}[args.format]
    out.write(render(payload))
    return EXIT_OK


# ---------- verify-tables ----------

def render_tables(payload: dict) -> str:
    lines = [f"verify-tables mode={payload['mode']} seed={payload['seed']} "
             f"attempts={payload['attempts']}"]
    for d in payload["dimensions"]:
        status = "PASS" if d["ok"] else "FAIL"
        lines.append(f"dim {d['dimension']:2d}: {status}  golden {d['golden_rows']}  "
                     f"enumerated {d['enumerated']}")
        for key in ("missing", "extra", "unconfirmed"):
            for t in d[key]:
                lines.append(f"  {key}: {t}")
        for m in d["chi_mismatch"]:
            lines.append(f"  chi mismatch: {m['tuple']} golden {m['golden']} computed {m['computed']}")
        if d["excluded_only_by_subspace_obstruction"]:
            lines.append("  passed series filters, excluded by subspace obstruction: "
                         + " ".join(d["excluded_only_by_subspace_obstruction"]))
    lines.append("result: " + ("all tables match" if payload["ok"] else "MISMATCH"))
    return "\n".join(lines) + "\n"


def cmd_verify_tables(args, out) -> int:
    rep = E.verify_tables(args.dir, args.dims, args.mode, args.attempts, args.seed, args.threads)
    payload = rep.to_json()
    out.write(_dump(payload) if args.format == "json" else render_tables(payload))
    return EXIT_OK if rep.ok else EXIT_MISMATCH


# ---------- halperin ----------

def _certify_tuple(args):
    t, attempts, seed = args
    m, source = E.find_witness(t, attempts, seed)
    if m is None:
        return {"tuple": str(t), "k": t.k, "chi": int(t.chi()), "verdict": "NoWitness",
                "certified": False, "note": source}
    cert = halperin_check(m)
    return {"tuple": str(t), "k": t.k, "chi": int(t.chi()), "witness_source": source,
            **cert.to_json()}


def halperin_tables_payload(args) -> dict:
    gdir = golden_dir(args.dir)
    tables = [load_golden(n, gdir) for n in GOLDEN_DIMS]
    jobs = [(t, args.attempts, args.seed) for tab in tables for t, _ in tab.rows]
    results = E.parallel_map(_certify_tuple, jobs, args.threads)
    counts: dict[str, int] = {}
    for r in results:
        counts[r["verdict"]] = counts.get(r["verdict"], 0) + 1
    chi_bound = [r["tuple"] for r in results if r["chi"] <= 16 and r["k"] > 4]
    ok = all(r["certified"] for r in results) and not chi_bound
    return {"command": "halperin --tables-all", "seed": args.seed, "attempts": args.attempts,
            "ok": ok, "tuples": len(results), "verdicts": dict(sorted(counts.items())),
            "chi_at_most_16_with_k_above_4": chi_bound, "results": results}


def render_halperin_tables(payload: dict) -> str:
    lines = [f"halperin --tables-all seed={payload['seed']} attempts={payload['attempts']}"]
    for r in payload["results"]:
        dims = ", ".join(f"{d}:{n}" for d, n in r.get("derivation_dimensions", {}).items())
        tag = "certified" if r["certified"] else "NOT CERTIFIED"
        extra = f"  split l={r['split_index']}" if "split_index" in r else ""
        lines.append(f"{r['tuple']:28} {r['verdict']:18} {{{dims}}}{extra}  {tag}")
    lines.append("verdicts: " + ", ".join(f"{k} {v}" for k, v in payload["verdicts"].items()))
    bound = payload["chi_at_most_16_with_k_above_4"]
    lines.append("chi <= 16 implies k <= 4: " + ("holds" if not bound else "FAILS " + " ".join(bound)))
    lines.append("result: " + ("all certified" if payload["ok"] else "FAIL"))
    return "\n".join(lines) + "\n"


def cmd_halperin(args, out) -> int:
    if args.tables_all:
        payload = halperin_tables_payload(args)
        out.write(_dump(payload) if args.format == "json" else render_halperin_tables(payload))
        return EXIT_OK if payload["ok"] else EXIT_MISMATCH
    if not args.model:
        raise InputError("give a model file or --tables-all")
    m = load_model(args.model)
    if m.is_balanced:
        cert = halperin_check(m)
    else:
        from .model import Presentation
        cert = halperin_check_presentation(Presentation(m.gens, m.differentials), m)
    out.write(_dump(cert.to_json()) if args.format == "json" else cert.to_text())
    return EXIT_OK if cert.certified else EXIT_MISMATCH


# ---------- clubs ----------

def clubs_checks(seed: int) -> list[tuple[str, bool, str]]:
    clubs = C.all_clubs()
    checks = []
    subgroups = C.index_two_subgroups()
    checks.append(("seven clubs, complements of the index-2 subgroups",
                   len(clubs) == 7 and {c.complement_subgroup() for c in clubs} == set(subgroups)
                   and all(len(c.members) == 4 for c in clubs), f"{len(clubs)} clubs"))
    checks.append(("triple product property",
                   all(C.has_triple_product_property(c) for c in clubs), "all member triples"))
    pairs = [C.classify_pair(a, b) for a, b in combinations(clubs, 2)]
    checks.append(("distinct pairs share exactly two members",
                   len(pairs) == 21 and all(p == C.PairType.TWO_COMMON for p in pairs),
                   f"{len(pairs)} pairs"))
    checks.append(("pair classification of equal clubs",
                   all(C.classify_pair(c, c) == C.PairType.EQUAL for c in clubs), "7 pairs"))
    rows = C.census()
    n1 = sum(r.kind == C.TripleType.TYPE_I for r in rows)
    type2_cover = all(len(r.union) == 7 for r in rows if r.kind == C.TripleType.TYPE_II)
    checks.append(("35 triples classified, Type II unions cover all 7 involutions",
                   len(rows) == 35 and type2_cover, f"Type I {n1}, Type II {len(rows) - n1}"))
    exhaust = all(l == r for l, r in map(C.double_count_identity, C.exhaustive_configs(3)))
    checks.append(("double counting, all configs with <= 3 points", exhaust, "400 configs"))
    rand = all(l == r for l, r in map(C.double_count_identity,
                                      C.random_configs(1000, 50, seed)))
    checks.append(("double counting, 1000 random configs", rand, f"seed {seed}"))
    expected = {12: {(3, 3, 3, 3, 4, 4, 4)}, 14: {(3,) * 7 + (4,) * 7 + (7,)},
                16: {(4,) * 14 + (8,)}}
    for dim, want in expected.items():
        res = C.rigidity(dim)
        checks.append((f"rigidity dim {dim}", set(res.profiles) == want and res.weight_sum_ok,
                       " ".join(C.format_profile(p) for p in sorted(res.profiles))
                       + f" from {res.admissible} of {res.multisets} multisets"))
    return checks


def cmd_clubs(args, out) -> int:
    if args.clubs_cmd == "census":
        rows = C.census()
        if args.format == "json":
            out.write(_dump({"command": "clubs census", "triples": [{
                "clubs": [str(c) for c in r.clubs], "type": r.kind.value,
                "pairwise": [sorted(C.label(x) for x in s) for s in r.intersections],
                "union_size": len(r.union),
                "missing": sorted(C.label(x) for x in r.missing)} for r in rows]}))
        else:
            out.write("clubs:\n")
            for c in C.all_clubs():
                out.write(f"  v={C.label(c.functional):4} {c}\n")
            for i, r in enumerate(rows, 1):
                out.write(f"{i:2d} {r.render()}\n")
            n1 = sum(r.kind == C.TripleType.TYPE_I for r in rows)
            out.write(f"{len(rows)} triples: Type I {n1}, Type II {len(rows) - n1}\n")
        return EXIT_OK
    if args.clubs_cmd == "rigidity":
        res = C.rigidity(args.dim)
        unique = len(res.profiles) == 1
        if args.format == "json":
            out.write(_dump({"command": "clubs rigidity", "dim": res.dim, "r": res.r, "m": res.m,
                             "min_weight": res.min_weight, "multisets": res.multisets,
                             "admissible": res.admissible,
                             "profiles": [list(p) for p in sorted(res.profiles)],
                             "unique": unique, "weight_sum_identity": res.weight_sum_ok}))
        else:
            out.write(f"dim {res.dim}: r={res.r} m={res.m} min weight {res.min_weight}\n")
            out.write(f"multisets {res.multisets}, admissible {res.admissible}\n")
            for p, ex in zip(sorted(res.profiles), res.examples):
                cols = " ".join(format(c, f"0{res.r}b")[::-1] for c in ex)
                out.write(f"profile {C.format_profile(p)}  codims "
                          f"{C.format_profile([2 * w for w in p])}  e.g. columns {cols}\n")
            out.write("unique profile\n" if unique else f"{len(res.profiles)} profiles\n")
        return EXIT_OK if unique and res.weight_sum_ok else EXIT_MISMATCH
    checks = clubs_checks(args.seed)
    ok = all(c[1] for c in checks)
    if args.format == "json":
        out.write(_dump({"command": "clubs verify-all", "seed": args.seed, "ok": ok,
                         "checks": [{"name": n, "pass": p, "detail": d} for n, p, d in checks]}))
    else:
        out.write(f"clubs verify-all seed={args.seed}\n")
        for n, p, d in checks:
            out.write(f"{'PASS' if p else 'FAIL'}  {n}  ({d})\n")
    return EXIT_OK if ok else EXIT_MISMATCH


# ---------- argument parsing ----------

def _common(p: argparse.ArgumentParser, fmt=("text", "json"), default="text"):
    p.add_argument("--seed", type=int, default=E.DEFAULT_SEED,
                   help="seed for witness search and random corpora")
    p.add_argument("--threads", type=int, default=1, help="worker processes")
    p.add_argument("--attempts", type=int, default=E.DEFAULT_ATTEMPTS,
                   help="random witness attempts per tuple")
    p.add_argument("--format", choices=fmt, default=default)
    p.add_argument("--quiet", action="store_true", help="no timing line on stderr")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="f0lab", description="F0 degree tuples, pure models, "
                                 "derivation certificates and club combinatorics")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("enumerate", help="list F0 tuples of one formal dimension")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--mode", choices=("necessary", "construct"), default="necessary")
    p.add_argument("--include-rejected", action="store_true")
    _common(p, ("json", "csv", "md"), "json")

    p = sub.add_parser("verify-tables", help="compare enumeration with the golden tables")
    p.add_argument("--dir", default=None, help="golden directory (default: shipped data, "
                   "or $F0LAB_GOLDEN_DIR)")
    p.add_argument("--mode", choices=("necessary", "construct"), default="necessary")
    p.add_argument("--dims", type=int, nargs="+", default=None)
    _common(p)

    p = sub.add_parser("halperin", help="derivation certificates")
    p.add_argument("model", nargs="?", help="model file")
    p.add_argument("--tables-all", action="store_true",
                   help="certify a representative model for every golden tuple")
    p.add_argument("--dir", default=None, help="golden directory for --tables-all")
    _common(p)

    p = sub.add_parser("clubs", help="club combinatorics in Z_2^3 and weight profiles")
    cs = p.add_subparsers(dest="clubs_cmd", required=True)
    q = cs.add_parser("verify-all")
    _common(q)
    q = cs.add_parser("rigidity")
    q.add_argument("--dim", type=int, required=True)
    _common(q)
    q = cs.add_parser("census")
    _common(q)
    return ap


COMMANDS = {"enumerate": cmd_enumerate, "verify-tables": cmd_verify_tables,
            "halperin": cmd_halperin, "clubs": cmd_clubs}


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        with contextlib.redirect_stderr(err):
            args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    if getattr(args, "threads", 1) < 1 or getattr(args, "attempts", 0) < 0:
        err.write("f0lab: --threads must be >= 1 and --attempts >= 0\n")
        return EXIT_INPUT
    t0 = time.perf_counter()
    try:
        code = COMMANDS[args.cmd](args, out)
    except InputError as e:
        err.write(f"f0lab: error: {e}\n")
        return EXIT_INPUT
    if not args.quiet:
        err.write(f"f0lab: {args.cmd} finished in {time.perf_counter() - t0:.2f}s\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
