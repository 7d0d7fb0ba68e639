"""Command-line surface.

Subcommands: predict, sweep, filtration, llc, hecke, check.  Output is
deterministic given identical flags and configuration: JSON is emitted
with sorted keys, CSV columns are fixed, and sweep renders an optional
figure next to the delimited output.  Exit codes: 0 success, 1 check
failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction

from . import engine as _engine
from .apexpr import parse_ap
from .config import load_config
from .errors import ZigzagError
from .gammamod import (
    column_and_diagonal_sums,
    dim_theta_filtration,
    jh_factor_labels,
    verify_subquotient_iso,
)
from .padic import INF
from .suites import run_suite
from .tree import ResidueRing, TreeFunction, ZModRing, apply_T

USAGE_ERROR = 2


def _fmt_rat(x) -> str:
    if x is None:
        return ""
    if x == INF:
        return "inf"
    return str(Fraction(x))


def _prediction_doc(p, k, ap_text, pred):
    doc = {"p": p, "k": k, "ap": ap_text, "provenance": pred.provenance,
           "notes": list(pred.notes)}
    if pred.rep is not None:
        doc.update(pred.rep.to_json())
    else:
        doc["kind"] = "none"
    doc["case"] = pred.branch.descriptor() if pred.branch else None
    if pred.params is not None:
        doc["v"] = _fmt_rat(pred.params.v)
        doc["b"] = pred.params.b
        doc["tau"] = _fmt_rat(pred.params.tau)
        doc["t"] = _fmt_rat(pred.params.t)
    return doc


def _emit_json(doc, out):
    out.write(json.dumps(doc, sort_keys=True, indent=2) + "\n")


def _md_row(cells):
    return "| " + " | ".join(str(c) for c in cells) + " |"


def _prediction_markdown(doc, pred):
    lines = [
        _md_row(["p", "k", "a_p", "v", "b", "tau", "t", "case", "reduction", "provenance"]),
        _md_row(["---"] * 10),
        _md_row([doc["p"], doc["k"], doc["ap"], doc.get("v", ""), doc.get("b", ""),
                 doc.get("tau", ""), doc.get("t", ""), doc.get("case") or "",
                 pred.rep.display() if pred.rep else "(not carried)",
                 doc["provenance"]]),
    ]
    if pred.params is not None and pred.params.exceptional and pred.branch is not None:
        lines.append("")
        lines.append(_timeline_markdown(doc["p"], pred.params.b, pred.branch))
    for note in doc["notes"]:
        lines.append(f"* {note}")
    return "\n".join(lines) + "\n"


def _timeline_markdown(p, b, active):
    """The alternating case list with the active one marked."""
    from .engine import enumerate_branches

    cells, marks = [], []
    n = (b + 1) // 2
    for br in enumerate_branches(b):
        if br.kind == "irred":
            label = f"ind(w2^{b + 1 + br.index * (p - 1)})"
            region = ("tau<t" if br.index == 0 else
                      (f"tau>t+{n - 1}" if br.terminal else
                       f"t+{br.index - 1}<tau<t+{br.index}"))
        else:
            i = br.index
            label = f"w^{(b - i + 1) % (p - 1)}+w^{i}"
            region = (f"tau>=t+{n - 1}" if br.terminal and b % 2 else f"tau=t+{i - 1}")
        cells.append(f"{region}: {label}")
        marks.append("**[*]**" if br == active else "")
    head = _md_row(cells)
    sep = _md_row(["---"] * len(cells))
    mark = _md_row(marks)
    return "\n".join([head, sep, mark])


def cmd_predict(args, cfg, out):
    expr = parse_ap(args.ap, args.p, cfg.residue_degree, cfg.precision)
    pred = _engine.predict(args.p, args.k, expr.value, cfg)
    doc = _prediction_doc(args.p, args.k, expr.render(), pred)
    if args.md:
        out.write(_prediction_markdown(doc, pred))
    else:
        _emit_json(doc, out)
    return 0


SWEEP_COLUMNS = ["p", "k", "ap", "v", "b", "tau", "t", "case", "rep", "provenance"]


def _sweep_rows(p, k_range, ap_text, cfg):
    expr = parse_ap(ap_text, p, cfg.residue_degree, cfg.precision)
    rows = []
    for k in k_range:
        try:
            pred = _engine.predict(p, k, expr.value, cfg)
        except ZigzagError as exc:
            rows.append({"p": p, "k": k, "ap": expr.render(), "v": "", "b": "",
                         "tau": "", "t": "", "case": "",
                         "rep": f"error: {exc}", "provenance": "ERROR"})
            continue
        prm = pred.params
        rows.append({
            "p": p, "k": k, "ap": expr.render(),
            "v": _fmt_rat(prm.v) if prm else _fmt_rat(expr.value.valuation()),
            "b": prm.b if prm else "",
            "tau": _fmt_rat(prm.tau) if prm else "",
            "t": _fmt_rat(prm.t) if prm else "",
            "case": pred.branch.descriptor() if pred.branch else "",
            "rep": pred.rep.display() if pred.rep else "",
            "provenance": pred.provenance,
        })
    return rows


def _write_csv(rows, stream):
    writer = csv.DictWriter(stream, fieldnames=SWEEP_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)


def _render_sweep_figure(rows, path):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    ks, offsets, kinds = [], [], []
    for row in rows:
        if row["tau"] in ("", "inf") or row["t"] in ("", "inf"):
            continue
        ks.append(row["k"])
        offsets.append(float(Fraction(row["tau"]) - Fraction(row["t"])))
        kinds.append(row["case"][:3] if row["case"] else "n/a")
    fig, ax = plt.subplots(figsize=(8, 4.5))
    styles = {"IRR": ("o", "tab:blue"), "RED": ("s", "tab:red"), "n/a": ("x", "gray")}
    for kind, (marker, color) in styles.items():
        xs = [k for k, kk in zip(ks, kinds) if kk == kind]
        ys = [o for o, kk in zip(offsets, kinds) if kk == kind]
        if xs:
            ax.scatter(xs, ys, marker=marker, color=color, label=kind, zorder=3)
    if offsets:
        top = int(max(offsets)) + 1
        for j in range(0, top + 1):
            ax.axhline(j, color="0.85", linestyle="--", zorder=1)
    ax.set_xlabel("weight k")
    ax.set_ylabel("tau - t")
    ax.set_title("case positions along the weight sweep")
    if ks:
        ax.legend(loc="best")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def _parse_k_range(text):
    parts = text.split(":")
    if len(parts) not in (2, 3):
        raise ValueError("expected START:STOP[:STEP] with STOP inclusive")
    start, stop = int(parts[0]), int(parts[1])
    step = int(parts[2]) if len(parts) == 3 else 1
    return range(start, stop + 1, step)


def cmd_sweep(args, cfg, out):
    rows = _sweep_rows(args.p, _parse_k_range(args.k_range), args.ap, cfg)
    if args.emit != "csv":
        raise ValueError(f"unsupported emit format {args.emit!r}")
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            _write_csv(rows, fh)
    else:
        _write_csv(rows, out)
    if args.figure:
        _render_sweep_figure(rows, args.figure)
    return 0


def cmd_filtration(args, cfg, out):
    p, r, imax = args.p, args.r, args.imax
    b = (r - 1) % (p - 1) + 1
    rows = []
    for i in range(imax + 1):
        dim = dim_theta_filtration(p, r, i)
        closed = max(0, r - i * (p + 1) + 1)
        iso = verify_subquotient_iso(p, r, i) if r >= i * (p + 1) else None
        row = {"i": i, "dim": dim, "closed_formula": closed, "iso": iso}
        n = (b + 1) // 2
        top = n - 1 if b % 2 else n
        if i <= top:
            pair = jh_factor_labels(p, b, i)
            row["J_even"] = pair.sub.display()
            row["J_odd"] = pair.quot.display()
            row["column_sum"] = pair.sub.dim + pair.quot.dim
        else:
            row["J_even"] = row["J_odd"] = ""
            row["column_sum"] = ""
        rows.append(row)
    doc = {"p": p, "r": r, "b": b, "rows": rows,
           "identities": column_and_diagonal_sums(p, b)}
    if args.md:
        lines = [_md_row(["i", "dim", "closed", "iso", "J_2i", "J_2i+1", "col sum"]),
                 _md_row(["---"] * 7)]
        for row in rows:
            lines.append(_md_row([row["i"], row["dim"], row["closed_formula"],
                                  row["iso"], row["J_even"], row["J_odd"],
                                  row["column_sum"]]))
        out.write("\n".join(lines) + "\n")
    else:
        _emit_json(doc, out)
    return 0 if all(row["dim"] == row["closed_formula"] for row in rows) else 1


def cmd_llc(args, cfg, out):
    from .llc import SmoothRepLabel, ll_inverse, ll_map
    from .reps import GaloisRep

    p, f = args.p, cfg.residue_degree
    if args.map:
        rep = GaloisRep.from_json(json.loads(args.map), p, f)
        labels = ll_map(rep)
        _emit_json({"p": p, "labels": [l.to_json() for l in labels]}, out)
        return 0
    docs = json.loads(args.unmap)
    labels = []
    from .ffield import quadratic_closure

    closure = quadratic_closure(p, f)
    for d in docs:
        lam_text = d["lambda"]
        lam = 0 if lam_text == "0" else closure.from_literal(lam_text)
        eta_z = d.get("eta_unramified", "1")
        labels.append(SmoothRepLabel(p, d["r"], lam, d["eta_omega"],
                                     None if eta_z == "1" else closure.from_literal(eta_z)))
    rep = ll_inverse(labels, p)
    _emit_json({"p": p, "rep": rep.to_json()}, out)
    return 0


def _coeff_ring(p, spec):
    if spec == "fp":
        return ResidueRing(p, 1)
    if spec == "fp2":
        return ResidueRing(p, 2)
    if spec.startswith("zmod:"):
        return ZModRing(p, int(spec.split(":", 1)[1]))
    raise ValueError(f"unknown coefficient ring {spec!r} (use fp, fp2, or zmod:M)")


def cmd_hecke(args, cfg, out):
    p, r = args.p, args.r
    ring = _coeff_ring(p, args.coeffs)
    if args.value:
        ints = [int(t) for t in args.value.split(",")]
        if len(ints) != r + 1:
            raise ValueError(f"--value needs r+1 = {r + 1} comma-separated integers")
    else:
        ints = [1] + [0] * r
    func = TreeFunction.elementary(p, r, ring, [ring.from_int(n) for n in ints])
    for _ in range(args.apply_t):
        func = apply_T(func)
    doc = func.to_json()
    doc["applied_T"] = args.apply_t
    doc["support_radius"] = func.support_radius()
    if args.md:
        lines = [_md_row(["a", "c", "distance", "coefficients"]), _md_row(["---"] * 4)]
        for row in doc["support"]:
            lines.append(_md_row([row["a"], row["c"], row["distance"],
                                  " ".join(row["coeffs"])]))
        out.write("\n".join(lines) + "\n")
    else:
        _emit_json(doc, out)
    return 0


def cmd_check(args, cfg, out):
    rows = run_suite(args.suite, args.p, cfg)
    ok = all(row["ok"] for row in rows)
    if args.json:
        _emit_json({"suite": args.suite, "ok": ok, "rows": rows}, out)
    else:
        if rows:
            cols = list(rows[0].keys())
            out.write(_md_row(cols) + "\n" + _md_row(["---"] * len(cols)) + "\n")
            for row in rows:
                out.write(_md_row([("PASS" if v else "FAIL") if k == "ok" else v
                                   for k, v in row.items()]) + "\n")
        out.write(f"suite {args.suite}: {'PASS' if ok else 'FAIL'}\n")
    return 0 if ok else 1


def build_parser():
    parser = argparse.ArgumentParser(
        prog="zigzag",
        description="predicted mod-p reductions of two-dimensional crystalline "
                    "representations, and the bookkeeping around them")
    parser.add_argument("--config", help="key=value configuration file")
    parser.add_argument("--f", type=int, dest="residue_degree",
                        help="residue degree (default 2)")
    parser.add_argument("--precision", type=int, help="stored pi-digit precision")
    parser.add_argument("--caveat-exponent", type=int, dest="caveat_exponent")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("predict", help="one (p, k, a_p) prediction")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--ap", required=True)
    group = sp.add_mutually_exclusive_group()
    group.add_argument("--json", action="store_true", default=True)
    group.add_argument("--md", action="store_true")
    sp.set_defaults(func=cmd_predict)

    sp = sub.add_parser("sweep", help="predictions over a weight range")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--k-range", required=True, help="START:STOP[:STEP], STOP inclusive")
    sp.add_argument("--ap", required=True)
    sp.add_argument("--emit", default="csv", choices=["csv"])
    sp.add_argument("--out", help="CSV destination (default stdout)")
    sp.add_argument("--figure", help="also render a case-position figure to this file")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("filtration", help="twisted-polynomial filtration table")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--imax", type=int, required=True)
    sp.add_argument("--md", action="store_true")
    sp.set_defaults(func=cmd_filtration)

    sp = sub.add_parser("llc", help="dictionary between Galois and smooth labels")
    sp.add_argument("--p", type=int, required=True)
    group = sp.add_mutually_exclusive_group(required=True)
    group.add_argument("--map", help="Galois rep JSON to map")
    group.add_argument("--unmap", help="smooth label array JSON to invert")
    sp.set_defaults(func=cmd_llc)

    sp = sub.add_parser("hecke", help="apply T to an elementary tree function")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--coeffs", default="fp", help="fp | fp2 | zmod:M")
    sp.add_argument("--apply-t", type=int, default=1, dest="apply_t")
    sp.add_argument("--value", help="r+1 comma-separated integer coefficients")
    sp.add_argument("--md", action="store_true")
    sp.set_defaults(func=cmd_hecke)

    sp = sub.add_parser("check", help="run a consistency suite")
    sp.add_argument("--suite", required=True,
                    choices=["local-constancy", "blz", "breuil", "theta",
                             "irreducibility", "determinant", "gr19"])
    sp.add_argument("--p", type=int)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_check)
    return parser


def main(argv=None, out=None):
    out = out if out is not None else sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config,
                          residue_degree=args.residue_degree,
                          precision=args.precision,
                          caveat_exponent=args.caveat_exponent)
        return args.func(args, cfg, out)
    except (ZigzagError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
