"""Command-line front end: construct, verify, scan, reproduce, export.

Exit codes: 0 certified / report emitted, 2 rejected (a hypothesis failed),
3 enumeration budget exceeded, 4 parse error.  All machine output is JSON
(one object per command, or line-delimited for scans).
"""

from __future__ import annotations

import argparse
import json
import re
import sys
import time

from .codes import (
    DistanceResult,
    dual_distance_by_columns,
    exhaustive_distance,
    export_matrix,
    hermitian_gram,
    import_matrix,
    is_mds,
)
from .constructions import CertifiedCode, ConstructionRequest, construct_chain
from .errors import AgqError, CapExceeded, EmbeddingRejected, GramNonzero, ParseError
from .fields import build_tower
from .quantum import stabilizer_params

EXIT_OK = 0
EXIT_REJECTED = 2
EXIT_BUDGET = 3
EXIT_PARSE = 4

_EXHAUSTIVE_AUTO_LIMIT = 1 << 21  # q^{2k} beyond this: skip automatic primal distance


# -- catalog entries -----------------------------------------------------------


def _classical_block(cert: CertifiedCode, want_distance: bool = True) -> dict:
    code = cert.code
    tower = code.tower
    block = {
        "q2": tower.q2,
        "n": code.n,
        "k": code.k,
        "mds": cert.mds,
        "mds_method": cert.mds_method,
        "designed_distance": cert.designed_distance,
    }
    d = None
    d_method = None
    if cert.mds:
        d = code.n - code.k + 1
        d_method = "mds-singleton"
    elif want_distance and tower.q2 ** code.k <= _EXHAUSTIVE_AUTO_LIMIT:
        res = exhaustive_distance(code)
        d = res.value
        d_method = res.method
    block["d"] = d
    block["d_method"] = d_method
    return block


def catalog_entry(cert: CertifiedCode, request: ConstructionRequest | None, elapsed: float) -> dict:
    qp = stabilizer_params(cert)
    entry = {
        "request": request.to_json_dict() if request else None,
        "verdict": "CERTIFIED",
        "classical": _classical_block(cert),
        "quantum": qp.to_json_dict(),
        "gram_digest": cert.gram.digest,
        "witnesses": {
            "mds_singular": list(cert.mds_witness) if cert.mds_witness else None,
            "dual_distance_columns": (
                list(cert.dual_distance.witness)
                if cert.dual_distance and cert.dual_distance.witness
                else None
            ),
        },
        "trace": list(cert.trace),
        "time_s": round(elapsed, 4),
    }
    return entry


def rejection_entry(request, exc: AgqError, elapsed: float) -> dict:
    reason = f"{type(exc).__name__}: {exc}"
    entry = {
        "request": request.to_json_dict() if isinstance(request, ConstructionRequest) else request,
        "verdict": f"REJECTED({type(exc).__name__})",
        "reason": reason,
        "time_s": round(elapsed, 4),
    }
    if isinstance(exc, GramNonzero):
        entry["gram_failure"] = {"row": exc.row, "col": exc.col, "value": exc.value_token}
    if isinstance(exc, EmbeddingRejected) and exc.gram_failure:
        i, j, tok = exc.gram_failure
        entry["gram_failure"] = {"row": i, "col": j, "value": tok}
    return entry


def _emit(obj, out=None):
    text = json.dumps(obj, indent=2)
    if out:
        out.write(text + "\n")
    else:
        print(text)


# -- construct ------------------------------------------------------------------


def _request_from_args(args) -> ConstructionRequest:
    chosen = [c for c in ("c1", "c2", "c3", "c4", "c5", "c6", "c8", "c9", "c10") if getattr(args, c)]
    if args.c7:
        chosen.append("c7" + (args.case or "i"))
    if len(chosen) != 1:
        raise SystemExit("exactly one construction flag (--c1 .. --c10) is required")
    leaders = tuple(int(x) for x in args.leaders.split(",")) if args.leaders else None
    return ConstructionRequest(
        construction=chosen[0],
        p=args.p,
        m=args.m,
        n=args.n,
        t=args.t,
        k=args.k,
        leaders=leaders,
        anchor=args.anchor,
        c_const=args.c_const,
        embed=args.embed,
    )


def cmd_construct(args) -> int:
    request = _request_from_args(args)
    start = time.time()
    try:
        chain = construct_chain(request)
    except CapExceeded as exc:
        _emit(rejection_entry(request, exc, time.time() - start))
        return EXIT_BUDGET
    except AgqError as exc:
        _emit(rejection_entry(request, exc, time.time() - start))
        return EXIT_REJECTED
    cert = chain[-1]
    entry = catalog_entry(cert, request, time.time() - start)
    if len(chain) > 1:
        entry["chain"] = [list(c.code.params()) for c in chain]
    _emit(entry)
    if args.matrix_out:
        with open(args.matrix_out, "w") as fh:
            fh.write(export_matrix(cert.code))
    return EXIT_OK


# -- verify -----------------------------------------------------------------------


def cmd_verify(args) -> int:
    start = time.time()
    try:
        with open(args.file) as fh:
            text = fh.read()
        code = import_matrix(text, systematic_prefix=args.systematic_prefix)
    except ParseError as exc:
        _emit({"verdict": "REJECTED(ParseError)", "reason": str(exc), "file": args.file})
        return EXIT_PARSE
    except AgqError as exc:
        _emit(rejection_entry({"file": args.file}, exc, time.time() - start))
        return EXIT_REJECTED
    gram = hermitian_gram(code)
    entry = {
        "request": {"file": args.file, "systematic_prefix": args.systematic_prefix},
        "classical": {"q2": code.tower.q2, "n": code.n, "k": code.k},
        "gram_digest": gram.digest,
    }
    if not gram.all_zero:
        i, j, tok = gram.first_nonzero
        entry["verdict"] = "REJECTED(GramNonzero)"
        entry["gram_failure"] = {"row": i, "col": j, "value": tok}
        _emit(entry)
        return EXIT_REJECTED
    budget_hit = False
    try:
        flag, witness, method = is_mds(code, method="auto")
    except CapExceeded:
        flag, witness, method = None, None, "cap-exceeded"
        budget_hit = True
    entry["classical"]["mds"] = flag
    entry["classical"]["mds_method"] = method
    if flag:
        dd = DistanceResult(code.k + 1, True, None, "mds-singleton")
    else:
        dd = dual_distance_by_columns(code)
    entry["dual_distance"] = {"value": dd.value, "exact": dd.exact, "method": dd.method}
    qp_k = code.n - 2 * code.k
    entry["quantum"] = {
        "q": code.tower.q,
        "n": code.n,
        "k": qp_k,
        "d": dd.value,
        "d_exact": dd.exact,
    }
    entry["verdict"] = "CERTIFIED"
    entry["time_s"] = round(time.time() - start, 4)
    _emit(entry)
    return EXIT_BUDGET if budget_hit else EXIT_OK


# -- scan --------------------------------------------------------------------------


def _scan_requests(args):
    towers = [tuple(int(x) for x in spec.split(",")) for spec in args.tower]
    cons = args.construction.lower()
    for p, m in towers:
        tower = build_tower(p, m)
        q = tower.q
        if cons == "c1":
            for n in range(3, tower.q2 + 1):
                if tower.n_units % (n - 1) == 0:
                    yield ConstructionRequest("c1", p, m, n=n, embed=args.embed)
        elif cons == "c5":
            kmax = (2 * (tower.q2 // 2 + q) + q + 1) // (q + 1)
            for k in range(2, kmax + 1):
                yield ConstructionRequest("c5", p, m, k=k, embed="none")
        elif cons in ("c9", "c10"):
            ts = [args.t] if args.t else range(2, q + 2)
            for t in ts:
                yield ConstructionRequest(cons, p, m, t=t, k=args.k, embed="none")
        elif cons == "c4":
            ts = [args.t] if args.t else range(1, q + 1)
            for t in ts:
                yield ConstructionRequest("c4", p, m, t=t, embed=args.embed)
        else:
            yield ConstructionRequest(
                cons, p, m, n=args.n, t=args.t, k=args.k, embed=args.embed
            )


def cmd_scan(args) -> int:
    entries = []
    assumption1 = {}
    for request in _scan_requests(args):
        start = time.time()
        try:
            chain = construct_chain(request)
        except AgqError as exc:
            entries.append(rejection_entry(request, exc, time.time() - start))
            if request.construction == "c5":
                assumption1.setdefault(request.p ** request.m, False)
            continue
        if request.construction == "c5":
            assumption1[request.p ** request.m] = True
        for cert in chain:
            entry = catalog_entry(cert, request, time.time() - start)
            entries.append(entry)
    # dedupe certified entries by (q, n, k_quantum), keeping the best distance
    best = {}
    passthrough = []
    for e in entries:
        if not e["verdict"].startswith("CERTIFIED") or "quantum" not in e:
            passthrough.append(e)
            continue
        key = (e["quantum"]["q"], e["quantum"]["n"], e["quantum"]["k"])
        cur = best.get(key)
        score = (e["quantum"]["d_exact"], e["quantum"]["d"])
        if cur is None or score > (cur["quantum"]["d_exact"], cur["quantum"]["d"]):
            best[key] = e
    final = sorted(best.values(), key=lambda e: (e["quantum"]["q"], e["quantum"]["n"], e["quantum"]["k"]))
    out = open(args.out, "w") if args.out else sys.stdout
    try:
        for q, flag in sorted(assumption1.items()):
            out.write(json.dumps({"assumption1": {"q": q, "holds": flag}}) + "\n")
        for e in final + passthrough:
            out.write(json.dumps(e) + "\n")
    finally:
        if args.out:
            out.close()
    return EXIT_OK


# -- reproduce -----------------------------------------------------------------------


_PARAM_RE = re.compile(r"^\[\[(\d+),(\d+),(\d+)\]\]_(\d+)$")


def parse_quantum_params(text: str) -> tuple[int, int, int, int]:
    m = _PARAM_RE.match(text.strip())
    if not m:
        raise ValueError(f"bad quantum parameter string {text!r}")
    n, k, d, q = (int(g) for g in m.groups())
    return n, k, d, q


def _repro_targets() -> list[dict]:
    """Reproduction rows: each pinned to one recipe, never a free search."""
    mds1 = [
        ("mds1-9-3-4-q5", "[[9,3,4]]_5", {"construction": "c1", "p": 5, "m": 1, "t": 2, "embed": "deep"}, "last", None),
        ("mds1-25-11-8-q13", "[[25,11,8]]_13", {"construction": "c1", "p": 13, "m": 1, "t": 2, "embed": "deep"}, "last", None),
        ("mds1-33-15-10-q17", "[[33,15,10]]_17", {"construction": "c1", "p": 17, "m": 1, "t": 2, "embed": "deep"}, "last", None),
        ("mds1-14-6-5-q7", "[[14,6,5]]_7", {"construction": "c1", "p": 7, "m": 1, "t": 2, "embed": "deep"}, "last", None),
        ("mds1-17-7-6-q9", "[[17,7,6]]_9", {"construction": "c1", "p": 3, "m": 2, "t": 2, "embed": "deep"}, "last", None),
        ("mds1-22-10-7-q11", "[[22,10,7]]_11", {"construction": "c1", "p": 11, "m": 1, "t": 2, "embed": "deep"}, "last", None),
        ("mds1-21-13-5-q7", "[[21,13,5]]_7", {"construction": "c4", "p": 7, "m": 1, "t": 3, "embed": "once"}, "last", None),
        ("mds1-22-12-6-q7", "[[22,12,6]]_7", {"construction": "c4", "p": 7, "m": 1, "t": 3, "embed": "iterate"}, (22, 5), None),
        ("mds1-16-10-4-q8", "[[16,10,4]]_8", {"construction": "c4", "p": 2, "m": 3, "t": 2, "embed": "once"}, "last", None),
        ("mds1-16-8-5-q8", "[[16,8,5]]_8", {"construction": "c4", "p": 2, "m": 3, "t": 2, "embed": "iterate"}, (16, 4), None),
        ("mds1-16-6-6-q8", "[[16,6,6]]_8", {"construction": "c4", "p": 2, "m": 3, "t": 2, "embed": "iterate"}, (16, 5), None),
        ("mds1-18-12-4-q9", "[[18,12,4]]_9", {"construction": "c4", "p": 3, "m": 2, "t": 2, "embed": "once"}, "last", None),
        ("mds1-18-10-5-q9", "[[18,10,5]]_9", {"construction": "c4", "p": 3, "m": 2, "t": 2, "embed": "iterate"}, (18, 4), None),
        ("mds1-18-8-6-q9", "[[18,8,6]]_9", {"construction": "c4", "p": 3, "m": 2, "t": 2, "embed": "iterate"}, (18, 5), None),
        ("mds1-13-7-4-q7", "[[13,7,4]]_7", {"construction": "c1", "p": 7, "m": 1, "n": 13, "embed": "once"}, "last", None),
        ("mds1-25-19-4-q13", "[[25,19,4]]_13", {"construction": "c1", "p": 13, "m": 1, "n": 25, "embed": "once"}, "last", None),
        ("mds1-17-11-4-q9", "[[17,11,4]]_9", {"construction": "c1", "p": 3, "m": 2, "n": 17, "embed": "once"}, "last", None),
        ("mds1-49-43-4-q17", "[[49,43,4]]_17", {"construction": "c3", "p": 17, "m": 1, "n": 12, "t": 3, "k": 3}, "last", None),
        (
            "mds1-discrepancy-17-q9",
            "[[17,13,3]]_9",
            {"construction": "c2", "p": 3, "m": 2, "n": 8, "t": 2, "k": 2},
            "last",
            "reference row states 17 points; the stated subgroup/coset parameters do not admit it",
        ),
        (
            "mds1-discrepancy-26-q17",
            "[[26,20,4]]_17",
            {"construction": "c3", "p": 17, "m": 1, "n": 12, "t": 2, "k": 2, "embed": "once"},
            "last",
            "reference row states 25/26 points; the coset-union size formula gives 37/38",
        ),
    ]
    mixed = [
        ("mixed-15-9-3-q3", "[[15,9,3]]_3", {"construction": "c9", "p": 3, "m": 1, "t": 2, "k": 4}, "last", None),
        ("mixed-15-9-3-q3-halfexp", "[[15,9,3]]_3", {"construction": "c8", "p": 3, "m": 1, "k": 4}, "last", None),
        ("mixed-24-18-3-q4", "[[24,18,3]]_4", {"construction": "c5", "p": 2, "m": 2, "k": 4}, "last", None),
        ("mixed-24-16-4-q4", "[[24,16,4]]_4", {"construction": "c5", "p": 2, "m": 2, "k": 5}, "last", None),
        (
            "mixed-20-12-4-q4",
            "[[20,12,4]]_4",
            {"construction": "c5", "p": 2, "m": 2, "k": 5},
            "last",
            "reference row states a shorter length; the curve pipeline yields the 24-column code",
        ),
        ("mixed-64-58-3-q4", "[[64,58,3]]_4", {"construction": "c7i", "p": 2, "m": 2, "n": 16, "k": 8}, "last", None),
        ("mixed-95-89-3-q5", "[[95,89,3]]_5", {"construction": "c7ii", "p": 5, "m": 1, "n": 6, "t": 2, "k": 7}, "last", None),
        ("mixed-91-81-4-q7", "[[91,81,4]]_7", {"construction": "c9", "p": 7, "m": 1, "t": 2, "k": 8}, "last", None),
        ("mixed-65-59-3-q5", "[[65,59,3]]_5", {"construction": "c8", "p": 5, "m": 1, "k": 6}, "last", None),
        ("mixed-175-169-3-q7", "[[175,169,3]]_7", {"construction": "c8", "p": 7, "m": 1, "k": 8}, "last", None),
        ("mixed-176-168-3-q8", "[[176,168,3]]_8", {"construction": "c10", "p": 2, "m": 3, "t": 3, "k": 9}, "last", None),
        ("mixed-369-361-3-q9", "[[369,361,3]]_9", {"construction": "c9", "p": 3, "m": 2, "t": 5, "k": 11}, "last", None),
        (
            "mixed-80-64-8-q8",
            "[[80,64,8]]_8",
            {"construction": "c5", "p": 2, "m": 3, "k": 9},
            "last",
            "exact dual distance 8 needs all 7-column subsets of an 80-column code checked",
        ),
    ]
    out = []
    for table, rows in (("mds1", mds1), ("mixed", mixed)):
        for row_id, expected, recipe, pick, note in rows:
            out.append(
                {
                    "table": table,
                    "row": row_id,
                    "expected": expected,
                    "recipe": recipe,
                    "pick": pick,
                    "note": note,
                }
            )
    return out


def _run_repro_target(target: dict) -> dict:
    expected = parse_quantum_params(target["expected"])
    recipe = dict(target["recipe"])
    request = ConstructionRequest(
        construction=recipe.pop("construction"),
        p=recipe.pop("p"),
        m=recipe.pop("m"),
        n=recipe.pop("n", None),
        t=recipe.pop("t", None),
        k=recipe.pop("k", None),
        embed=recipe.pop("embed", "none"),
    )
    report = {
        "table": target["table"],
        "row": target["row"],
        "expected": target["expected"],
    }
    if target.get("note"):
        report["note"] = target["note"]
    start = time.time()
    try:
        chain = construct_chain(request)
    except CapExceeded as exc:
        report.update(status="SKIPPED", reason=f"cap: {exc}")
        return report
    except AgqError as exc:
        report.update(status="UNMATCHED", got=f"error: {type(exc).__name__}: {exc}")
        return report
    pick = target["pick"]
    cert = None
    if pick == "last":
        cert = chain[-1]
    else:
        for member in chain:
            if member.code.params() == tuple(pick):
                cert = member
                break
        if cert is None:
            report.update(
                status="UNMATCHED",
                got=f"chain {[m.code.params() for m in chain]} missing {pick}",
            )
            return report
    qp = stabilizer_params(cert)
    report["time_s"] = round(time.time() - start, 3)
    got = (qp.n, qp.k, qp.d, qp.q)
    report["got"] = qp.params_string()
    if not qp.d_exact:
        if (qp.n, qp.k, qp.q) == (expected[0], expected[1], expected[3]) and qp.d <= expected[2]:
            report.update(status="SKIPPED", reason=f"cap: distance certified only as >= {qp.d}")
        else:
            report.update(status="UNMATCHED")
        return report
    report["status"] = "MATCH" if got == expected else "UNMATCHED"
    return report


def cmd_reproduce(args) -> int:
    targets = [t for t in _repro_targets() if t["table"] == args.table]
    rows = []
    for target in targets:
        row = _run_repro_target(target)
        rows.append(row)
        status = row["status"]
        detail = row.get("got") or row.get("reason") or ""
        print(f"{status:10s} {row['row']:32s} expected {row['expected']:18s} {detail}")
    summary = {
        "table": args.table,
        "total": len(rows),
        "match": sum(r["status"] == "MATCH" for r in rows),
        "unmatched": sum(r["status"] == "UNMATCHED" for r in rows),
        "skipped": sum(r["status"] == "SKIPPED" for r in rows),
        "rows": rows,
    }
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(summary, fh, indent=2)
            fh.write("\n")
    print(json.dumps({k: summary[k] for k in ("table", "total", "match", "unmatched", "skipped")}))
    return EXIT_OK


# -- export ---------------------------------------------------------------------------


def cmd_export(args) -> int:
    try:
        with open(args.file) as fh:
            code = import_matrix(fh.read(), systematic_prefix=args.systematic_prefix)
    except ParseError as exc:
        print(json.dumps({"verdict": "REJECTED(ParseError)", "reason": str(exc)}))
        return EXIT_PARSE
    text = export_matrix(code)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# -- argument parsing --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="agq",
        description="Hermitian self-orthogonal evaluation codes over GF(q^2) "
        "and their quantum stabilizer parameters, with certificates.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    pc = sub.add_parser("construct", help="run one construction pipeline")
    for flag in ("c1", "c2", "c3", "c4", "c5", "c6", "c7", "c8", "c9", "c10"):
        pc.add_argument(f"--{flag}", action="store_true")
    pc.add_argument("--case", choices=["i", "ii", "iii"], help="c7 x-set family")
    pc.add_argument("--p", type=int, required=True)
    pc.add_argument("--m", type=int, required=True)
    pc.add_argument("--n", type=int)
    pc.add_argument("--t", type=int)
    pc.add_argument("--k", type=int)
    pc.add_argument("--leaders", help="comma-separated coset leader exponents")
    pc.add_argument("--anchor", help="grid anchor element token, e.g. t^1")
    pc.add_argument("--c-const", dest="c_const", help="elliptic constant token")
    pc.add_argument("--embed", choices=["none", "once", "iterate", "deep"], default="none")
    pc.add_argument("--matrix-out", help="write the generator matrix here")
    pc.set_defaults(func=cmd_construct)

    pv = sub.add_parser("verify", help="certify a generator matrix file")
    pv.add_argument("file")
    pv.add_argument("--systematic-prefix", action="store_true",
                    help="prepend the identity block to the stored rows")
    pv.set_defaults(func=cmd_verify)

    ps = sub.add_parser("scan", help="sweep a parameter grid into a catalog")
    ps.add_argument("--construction", required=True)
    ps.add_argument("--tower", action="append", required=True, metavar="p,m")
    ps.add_argument("--n", type=int)
    ps.add_argument("--t", type=int)
    ps.add_argument("--k", type=int)
    ps.add_argument("--embed", choices=["none", "once", "iterate", "deep"], default="iterate")
    ps.add_argument("--out", help="write line-delimited JSON here (default stdout)")
    ps.set_defaults(func=cmd_scan)

    pr = sub.add_parser("reproduce", help="re-derive the bundled reference parameter tables")
    pr.add_argument("table", choices=["mds1", "mixed"])
    pr.add_argument("--out", help="write the JSON report here")
    pr.set_defaults(func=cmd_reproduce)

    pe = sub.add_parser("export", help="normalize a matrix file (canonical tokens)")
    pe.add_argument("file")
    pe.add_argument("--systematic-prefix", action="store_true")
    pe.add_argument("--out")
    pe.set_defaults(func=cmd_export)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
