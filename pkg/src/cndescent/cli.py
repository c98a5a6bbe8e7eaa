"""Command-line front end: descent reports, residue profiles, the reference
grid, family surveys, and the full regression suite.

Exit codes: 0 success, 1 computation failed (bad pair, budget exhausted,
a verification mismatch), 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .criteria import ALL_PROFILES, classify_profile, residue_profile
from .descent import descend, selmer_group
from .errors import DescentError
from .survey import (
    REFERENCE_GRID,
    FamilySpec,
    render_ndjson,
    run_survey,
    verify_reference,
)


def _sign(x: int) -> str:
    return f"{x:+d}"


def _render_classify(rep) -> str:
    lines = [f"k = {rep.k}"]
    if rep.classification is not None:
        lines.append(f"family: {rep.classification.family}")
    else:
        lines.append("family: none (residue criteria not applicable)")
    lines.append(f"selmer psi: {rep.selmer_psi.describe()}")
    lines.append(f"selmer phi: {rep.selmer_phi.describe()}")
    lines.append(f"solvable classes psi: {rep.w_psi.describe()}")
    lines.append(f"solvable classes phi: {rep.w_phi.describe()}")
    lines.append(f"certified sha psi: {rep.sha_psi_cert.describe()}")
    lines.append(f"certified sha phi: {rep.sha_phi_cert.describe()}")
    lines.append(f"rank bounds: {rep.rank_lower} <= rank <= {rep.rank_upper}")
    if rep.sha2_dim is not None:
        lines.append(f"sha[2] dimension: {rep.sha2_dim}")
    if rep.noncongruent:
        verdict = "yes"
    elif rep.rank_lower > 0:
        verdict = "no (positive rank witnessed)"
    else:
        verdict = "undecided"
    lines.append(f"noncongruent: {verdict}")
    npts = sum(len(w) for w in rep.witnesses.values())
    lines.append(f"witness points found: {npts} (search height {rep.height})")
    for note in rep.notes:
        lines.append(f"note: {note}")
    return "\n".join(lines)


def _cmd_classify(args) -> int:
    rep = descend(args.k, height=args.height)
    if args.json:
        print(json.dumps(rep.to_json()))
    else:
        print(_render_classify(rep))
    return 0


def _cmd_selmer(args) -> int:
    psi = selmer_group(args.k, "psi")
    phi = selmer_group(args.k, "phi")
    if args.json:
        print(json.dumps({
            "k": args.k,
            "selmer_psi": sorted(psi, key=abs),
            "selmer_phi": sorted(phi, key=abs),
        }))
    else:
        print(f"k = {args.k}")
        print(f"selmer psi: {psi.describe()} (dimension {psi.dim})")
        print(f"selmer phi: {phi.describe()} (dimension {phi.dim})")
    return 0


def _cmd_profile(args) -> int:
    pr = residue_profile(args.p, args.l)
    if args.json:
        print(json.dumps({"p": args.p, "l": args.l, "profile": list(pr)}))
    else:
        print(" ".join("+" if s == 1 else "-" for s in pr))
    return 0


def _fmt_gens(gens) -> str:
    return "<" + ", ".join(gens) + ">" if gens else "1"


def _cmd_grid(args) -> int:
    rows_out = []
    all_ok = True
    for i, row in enumerate(REFERENCE_GRID, start=1):
        entry = {
            "row": i,
            "profile": list(row.profile),
            "sha_psi": list(row.sha_psi),
            "sha_phi": list(row.sha_phi),
            "rank_bound": row.rank_bound,
            "w_phi": list(row.w_phi),
            "example": list(row.example),
        }
        if args.verify:
            pc = classify_profile(row.profile)
            ok = (
                pc.rank_bound == row.rank_bound
                and pc.sha_psi_dim == len(row.sha_psi)
                and residue_profile(*row.example) == row.profile
            )
            entry["verified"] = ok
            all_ok = all_ok and ok
        rows_out.append(entry)
    if args.json:
        print(json.dumps(rows_out))
    else:
        for e in rows_out:
            signs = " ".join("+" if s == 1 else "-" for s in e["profile"])
            tail = ""
            if args.verify:
                tail = "  ok" if e["verified"] else "  MISMATCH"
            print(
                f"{e['row']:2d}  {signs}  sha_psi={_fmt_gens(e['sha_psi'])}"
                f"  sha_phi={_fmt_gens(e['sha_phi'])}  rank<={e['rank_bound']}"
                f"  W={_fmt_gens(e['w_phi'])}"
                f"  example=({e['example'][0]}, {e['example'][1]}){tail}"
            )
    return 0 if all_ok else 1


def _cmd_survey(args) -> int:
    if args.two_p:
        spec = FamilySpec(bound=args.bound, two_p=True)
    else:
        r1, r2 = (int(x) for x in args.residues.split(","))
        spec = FamilySpec(
            bound=args.bound,
            residues=(r1, r2),
            legendre=args.legendre,
        )
    rows, summary = run_survey(spec, height=args.height)
    text = render_ndjson(rows, summary)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        print(f"{summary.total} rows -> {args.out}")
    else:
        print(text, end="")
    return 0


def _cmd_verify(args) -> int:
    report = verify_reference()
    if args.json:
        print(json.dumps({
            "passed": report.passed,
            "checks": [
                {"name": c.name, "passed": c.passed, "detail": c.detail}
                for c in report.checks
            ],
        }))
    else:
        print(report.render())
    return 0 if report.passed else 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cndescent",
        description="2-isogeny descent on the curves y^2 = x(x^2 - k^2): "
        "Selmer groups, certified Tate-Shafarevich classes, rank bounds.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="full descent report for one k")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--height", type=int, default=1000,
                   help="point search bound (default 1000)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=_cmd_classify)

    p = sub.add_parser("selmer", help="Selmer groups of both isogeny directions")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=_cmd_selmer)

    p = sub.add_parser("profile", help="five residue symbols of an admissible pair")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=_cmd_profile)

    p = sub.add_parser("grid", help="print the 32-row reference grid")
    p.add_argument("--verify", action="store_true",
                   help="recompute each row and flag mismatches")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=_cmd_grid)

    p = sub.add_parser("survey", help="classify a whole family, NDJSON output")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--residues", help="p and l mod 8, e.g. 1,1")
    group.add_argument("--two-p", action="store_true", dest="two_p")
    p.add_argument("--legendre", type=int, choices=(1, -1), default=None,
                   help="restrict to (p/l) = +1 or -1")
    p.add_argument("--bound", type=int, default=10**4,
                   help="upper bound on the primes (default 10000)")
    p.add_argument("--height", type=int, default=0,
                   help="optional point search height per k (default off)")
    p.add_argument("--out", help="write NDJSON here instead of stdout")
    p.add_argument("--json", action="store_true",
                   help="accepted for symmetry; output is already NDJSON")
    p.set_defaults(fn=_cmd_survey)

    p = sub.add_parser("verify", help="recompute all reference tables")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=_cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    try:
        _validate(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        print(parser.format_usage(), end="", file=sys.stderr)
        return 2
    try:
        return args.fn(args)
    except DescentError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


class _UsageError(Exception):
    pass


def _validate(args) -> None:
    if getattr(args, "k", None) is not None and args.k < 1:
        raise _UsageError("--k must be a positive integer")
    if getattr(args, "height", None) is not None and args.height < 0:
        raise _UsageError("--height must be nonnegative")
    if getattr(args, "bound", None) is not None and args.bound < 3:
        raise _UsageError("--bound must be at least 3")
    for name in ("p", "l"):
        v = getattr(args, name, None)
        if v is not None and v < 3:
            raise _UsageError(f"--{name} must be an odd prime")
    if getattr(args, "residues", None) is not None:
        parts = args.residues.split(",")
        if len(parts) != 2 or not all(x.strip().isdigit() for x in parts):
            raise _UsageError("--residues expects two integers like 1,1")


if __name__ == "__main__":
    sys.exit(main())
