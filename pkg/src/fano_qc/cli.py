"""``fano-qc`` command line front end.

    fano-qc compute N k [--format table|json|latex]
    fano-qc emit N k --emit-target T [--format ...]
    fano-qc verify N k [--format table|json]
    fano-qc batch --n-max X [--jobs J]

Exit status: 2 for invalid arguments, 1 if a verification fails, 0 otherwise.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from .banded import PolyMatrix, latex_poly, render_latex, render_matrix
from .birkhoff import Pipeline, run_pipeline
from .errors import InvalidParams
from .exact_core import format_poly
from .gw import GWTable, primitive_relations, structural_constants
from .picard_fuchs import MIN_N, MIN_N_SMALL, FanoParams, picard_fuchs_operator
from .verify import VerifyReport, fano_pairs, run_checks
from .weyl import DiffOperator

TARGETS = ("pf", "omega-pf", "q-matrices", "lplus", "omega-hat", "dubrovin", "gw")
FORMATS = ("table", "json", "latex")


def _use_color(stream) -> bool:
    env = os.environ.get("FANO_QC_COLOR")
    if env == "0":
        return False
    if env == "1":
        return True
    return hasattr(stream, "isatty") and stream.isatty()


def _status(ok: bool, color: bool) -> str:
    word = "PASS" if ok else "FAIL"
    if not color:
        return word
    return f"\033[32m{word}\033[0m" if ok else f"\033[31m{word}\033[0m"


def _matrix_json(A: PolyMatrix) -> list[list[str]]:
    return [[format_poly(x) for x in row] for row in A.rows]


def _latex_operator(P: DiffOperator) -> str:
    parts = []
    for j in range(P.order, -1, -1):
        c = P.coeff(j)
        if c.is_zero():
            continue
        op = "" if j == 0 else ("(h\\partial)" if j == 1 else f"(h\\partial)^{{{j}}}")
        neg = c.is_monomial() and c.items()[0][1] < 0
        body = latex_poly(-c if neg else c)
        if not c.is_monomial():
            body = f"\\left({body}\\right)"
        if op:
            body = op if body == "1" else body + op
        sign = "-" if neg else "+"
        parts.append((f"{sign} " if parts or neg else "") + body)
    return " ".join(parts) if parts else "0"


# -- emitters --------------------------------------------------------------


def emit(pl: Pipeline, target: str, fmt: str) -> str:
    p = pl.params
    head = {"N": p.N, "k": p.k, "target": target}
    if target == "pf":
        P = picard_fuchs_operator(p)
        if fmt == "json":
            head["coeffs"] = [{"power": j, "coeff": format_poly(c)} for j, c in enumerate(P.coeffs)]
            head["text"] = str(P)
            return json.dumps(head, ensure_ascii=False)
        if fmt == "latex":
            return f"P^{{{p.N},{p.k}}} = {_latex_operator(P)}"
        return str(P)

    if target == "q-matrices":
        S = pl.qsystem
        entries = []
        for (i, a), m in sorted(S.Q.items(), key=lambda kv: (kv[0][1], -kv[0][0])):
            n = i + a * p.index
            entries.append((i, a, n, [format_poly(v) for v in m.band_values(n)]))
        if fmt == "json":
            head["Q"] = [{"i": i, "alpha": a, "n": n, "values": vals} for i, a, n, vals in entries]
            head["integral"] = S.is_integral()
            return json.dumps(head)
        if fmt == "latex":
            return "\n".join(
                f"Q_{{{i}}}^{{{a}}} = \\mathrm{{diag}}_{{{n}}}({','.join(vals)})" for i, a, n, vals in entries
            )
        lines = S.describe()
        return "\n".join(lines) if lines else "# Q_0 = I (no corrections)"

    if target == "gw":
        return _gw_output(structural_constants(pl.dubrovin), fmt)

    if target == "omega-pf":
        A, label, note = pl.family.omega_matrix, "Omega_PF", "# Omega_PF = (entries below) dt"
        latex_prefix, latex_suffix = "\\Omega_{PF} = ", "dt"
    elif target == "lplus":
        A, label, note = pl.lplus, "L_plus", "# L_+ = Q_0 (I + h Q_1 + ...)"
        latex_prefix, latex_suffix = "L_+ = ", ""
    elif target == "omega-hat":
        A, label, note = pl.omega_hat.M, "Omega_hat", "# Omega_hat = (1/h) M dt, M ="
        latex_prefix, latex_suffix = "\\hat\\Omega^h = \\frac{1}{h}", "dt"
    elif target == "dubrovin":
        shifted = pl.dubrovin.shifted
        note = "# Dubrovin = (1/h) M dt" + (" (shifted by -(N-1)! q/h I)" if shifted else "") + ", M ="
        A, label = pl.dubrovin.M, "dubrovin"
        latex_prefix, latex_suffix = "\\Omega^{Dub} = \\frac{1}{h}", "dt"
    else:
        raise ValueError(f"unknown emit target {target!r}")

    if fmt == "json":
        head["matrix"] = _matrix_json(A)
        if target in ("omega-hat", "dubrovin"):
            head["scale"] = "1/h"
        if target == "dubrovin":
            head["shifted"] = pl.dubrovin.shifted
        return json.dumps(head)
    if fmt == "latex":
        return render_latex(A, latex_prefix) + latex_suffix
    return f"{note}\n{render_matrix(A)}"


def _gw_output(table: GWTable, fmt: str) -> str:
    p = table.params
    if fmt == "json":
        return table.to_json()
    records = table.records()
    if fmt == "latex":
        lines = ["\\begin{tabular}{rrrl}", "$d$ & $m$ & $L_m^d$ & $GW_{dA}(b,b_i,b_j)$ \\\\", "\\hline"]
        for ((m, d), v), r in zip(sorted(table.L.items(), key=lambda kv: (kv[0][1], kv[0][0])), records):
            lines.append(f"{d} & {m} & {v} & $GW_{{{d}A}}(b,b_{{{r.classes[1]}}},b_{{{r.classes[2]}}}) = {r.value}$ \\\\")
        lines.append("\\end{tabular}")
        return "\n".join(lines)
    out = [f"# M_{p.N}^{p.k}: degree {p.k} hypersurface in CP^{p.N - 1}, N-k = {p.index}"]
    out.append(f"{'d':>3} {'m':>3} {'L_m^d':>16}   {'GW_dA(b, b_i, b_j)':<22} {'value':>18}")
    for r in records:
        m = p.N - 2 - r.classes[1]
        cls = f"(b, b_{r.classes[1]}, b_{r.classes[2]})"
        out.append(f"{r.d:>3} {m:>3} {str(table.value(m, r.d)):>16}   {cls:<22} {str(r.value):>18}")
    for rel in primitive_relations(p):
        out.append(f"# {rel}")
    return "\n".join(out)


def _verify_text(rep: VerifyReport, color: bool) -> str:
    p = rep.params
    lines = [f"# verify M_{p.N}^{p.k}"]
    for c in rep.checks:
        tail = f"  {c.detail}" if c.detail and not c.ok else ""
        lines.append(f"{_status(c.ok, color)}  {c.name}{tail}")
    if rep.integral is not None:
        lines.append(f"info  integral output: {'yes' if rep.integral else 'no'}")
    lines.append(f"{_status(rep.ok, color)}  overall")
    return "\n".join(lines)


def _batch_job(nk: tuple[int, int]) -> dict:
    N, k = nk
    return run_checks(FanoParams(N, k, allow_small=True)).to_dict()


# -- argument handling -----------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default="table")
    common.add_argument("--allow-small", action="store_true", help=f"permit N = {MIN_N_SMALL}..{MIN_N - 1}")

    parser = argparse.ArgumentParser(prog="fano-qc", description="Quantum cohomology of Fano hypersurfaces")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in (
        ("compute", "print the Gromov-Witten table"),
        ("emit", "print an intermediate object"),
        ("verify", "run all consistency checks"),
    ):
        sp = sub.add_parser(name, parents=[common], help=helptext)
        sp.add_argument("N", type=int)
        sp.add_argument("k", type=int)
        if name == "emit":
            sp.add_argument("--emit-target", choices=TARGETS, required=True)
    sp = sub.add_parser("batch", parents=[common], help="verify every Fano pair up to --n-max")
    sp.add_argument("--n-max", type=int, required=True)
    sp.add_argument("--jobs", type=int, default=1)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    out = sys.stdout
    color = _use_color(out)

    if args.command == "batch":
        floor = MIN_N_SMALL if args.allow_small else MIN_N
        if args.n_max < floor or args.jobs < 1:
            print(f"fano-qc: error: --n-max must be >= {floor} and --jobs >= 1", file=sys.stderr)
            return 2
        pairs = list(fano_pairs(args.n_max, floor))
        if args.jobs > 1:
            with ProcessPoolExecutor(max_workers=args.jobs) as ex:
                results = list(ex.map(_batch_job, pairs))
        else:
            results = [_batch_job(nk) for nk in pairs]
        if args.format == "json":
            print(json.dumps(results), file=out)
        else:
            for r in results:
                failed = [c["name"] for c in r["checks"] if not c["ok"]]
                tail = "" if not failed else "  failed: " + ", ".join(failed)
                print(f"{_status(r['ok'], color)}  N={r['N']:<3} k={r['k']:<3} {len(r['checks'])} checks{tail}", file=out)
        return 0 if all(r["ok"] for r in results) else 1

    try:
        p = FanoParams(args.N, args.k, allow_small=args.allow_small)
    except InvalidParams as exc:
        print(f"fano-qc: error: {exc}", file=sys.stderr)
        return 2

    pl = run_pipeline(p)
    if args.command == "compute":
        print(_gw_output(structural_constants(pl.dubrovin), args.format), file=out)
        return 0
    if args.command == "emit":
        print(emit(pl, args.emit_target, args.format), file=out)
        return 0
    rep = run_checks(p, pl)
    if args.format == "json":
        print(json.dumps(rep.to_dict()), file=out)
    else:
        print(_verify_text(rep, color), file=out)
    return 0 if rep.ok else 1


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
