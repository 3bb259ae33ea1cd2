"""Command-line front end.

Exit codes: 0 success, 1 input error, 2 a bound check failed.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import statefile
from .bounds import asymptotic_schedule, capacity_report
from .classical import classical_capacity_report, classical_mutual_information, embed_quantum
from .functionals import mutual_information
from .matcore import max_abs
from .scramble import (
    DEFAULT_GROUPING_TOL,
    ENUMERATION_LIMIT,
    MarginalMismatchError,
    averaged_state,
    block_decompose,
    build_ensemble,
    ensemble_chi,
    enumerate_average,
    verify_privacy,
)
from .states import marginal

EXIT_OK, EXIT_INPUT, EXIT_BOUND = 0, 1, 2
EXACT_COUNT_LIMIT = 20_000
AGREEMENT_TOL = 1e-9
ENUMERATION_TOL = 1e-10


class InputError(Exception):
    pass


def _fmt(v) -> str:
    if isinstance(v, bool) or v is None:
        return str(v).lower() if isinstance(v, bool) else "-"
    if isinstance(v, float):
        return f"{v:.10g}"
    return str(v)


def render_text(report: dict) -> str:
    lines = []
    for key, val in report.items():
        if key == "state":
            lines.append("state:")
            lines.extend("  " + ln for ln in json.dumps(val, indent=1).splitlines())
        elif isinstance(val, list) and val and isinstance(val[0], dict):
            lines.append(f"{key}:")
            if key == "schedule":
                cols = list(val[0])
                lines.append("  " + "  ".join(f"{c:>24}" for c in cols))
                for row in val:
                    lines.append("  " + "  ".join(f"{_fmt(row[c]):>24}" for c in cols))
            else:
                for row in val:
                    lines.append("  - " + ", ".join(f"{k}={_fmt(x)}" for k, x in row.items()))
        elif isinstance(val, list):
            lines.append(f"{key}:")
            lines.extend(f"  - {_fmt(x)}" for x in val)
        else:
            lines.append(f"{key}: {_fmt(val)}")
    return "\n".join(lines)


def _load(path: str, want_pmf: bool = False):
    try:
        sf = statefile.load(path)
    except statefile.StateFileError as exc:
        raise InputError(f"{path}: {exc}") from exc
    if want_pmf and sf.kind != "joint-pmf":
        raise InputError(f"{path}: kind mismatch, expected 'joint-pmf', got {sf.kind!r}")
    return sf


def _bipartite(sf):
    return embed_quantum(sf.state) if sf.kind == "joint-pmf" else sf.state


def _header(name: str, sf) -> dict:
    return {"command": name, "label": sf.label, "kind": sf.kind, "dA": sf.dA, "dB": sf.dB}


def _report_fields(rep) -> dict:
    return {
        "I_rho": rep.I_rho,
        "I_sigma": rep.I_sigma,
        "chiAB": rep.chiAB,
        "chiA": rep.chiA,
        "D": rep.D,
        "logD": rep.logD,
        "lowerBound": rep.lowerBound,
        "upperBound": rep.upperBound,
        "ensembleSize": rep.ensembleSize,
        "blocks": rep.blocks,
        "checks": [{"name": c.name, "holds": c.holds, "margin": c.margin} for c in rep.satisfied],
        "privacyMargin": rep.satisfied[-1].margin,
        "allChecksPass": rep.all_hold,
    }


def cmd_analyze(args) -> tuple[dict, int]:
    sf = _load(args.path)
    rep = capacity_report(_bipartite(sf), args.grouping_tol)
    out = _header("analyze", sf) | _report_fields(rep)
    return out, EXIT_OK if rep.all_hold else EXIT_BOUND


def cmd_scramble(args) -> tuple[dict, int]:
    sf = _load(args.path)
    s = _bipartite(sf)
    blocks = block_decompose(marginal(s, "A"), args.grouping_tol)
    ens = build_ensemble(blocks)
    if args.enumerate and ens.size > ENUMERATION_LIMIT:
        raise InputError(f"ensemble too large to enumerate: N = {ens.size} > {ENUMERATION_LIMIT}")
    priv = verify_privacy(s, ens, args.sample)
    sigma = averaged_state(s, ens)
    out = _header("scramble", sf) | {
        "ensembleSize": ens.size,
        "D": blocks.D,
        "blocks": blocks.summary(),
        "maxMarginalDeviation": priv.max_marginal_deviation,
        "maxCommutator": priv.max_commutator,
        "membersChecked": priv.members_checked,
        "exhaustive": priv.exhaustive,
        "seed": priv.seed,
        "privacyHolds": priv.holds,
        "I_rho": mutual_information(s),
        "I_sigma": mutual_information(sigma),
        "chiAB": ensemble_chi(s, ens),
    }
    ok = priv.holds
    if args.enumerate:
        dev = max_abs(enumerate_average(s, ens).matrix - sigma.matrix)
        out["enumerationDeviation"] = dev
        ok = ok and dev <= ENUMERATION_TOL
    return out, EXIT_OK if ok else EXIT_BOUND


def cmd_asympt(args) -> tuple[dict, int]:
    sf = _load(args.path)
    if args.n_max < 1:
        raise InputError("--n-max must be >= 1")
    s = _bipartite(sf)
    i_rho = mutual_information(s)
    sched = asymptotic_schedule(marginal(s, "A"), i_rho, args.n_max, exact_limit=EXACT_COUNT_LIMIT)
    rows = []
    ok = True
    for row in sched:
        count_bound = (row.n + 1) ** row.d
        rows.append({
            "n": row.n,
            "rateLowerBound": row.rateLowerBound,
            "typeClassBound": row.typeClassBound,
            "typeClassCount": count_bound,
            "exactDistinctEigenvalues": row.exactDistinctEigenvalues,
        })
        if row.exactDistinctEigenvalues is not None and row.exactDistinctEigenvalues > count_bound:
            ok = False
    out = _header("asympt", sf) | {"d": s.dA, "I_rho": i_rho, "schedule": rows}
    return out, EXIT_OK if ok else EXIT_BOUND


def cmd_classical(args) -> tuple[dict, int]:
    sf = _load(args.path, want_pmf=True)
    i_cl = classical_mutual_information(sf.state)
    i_q = mutual_information(embed_quantum(sf.state))
    rep = classical_capacity_report(sf.state, args.grouping_tol)
    diff = abs(i_cl - i_q)
    out = _header("classical", sf) | {
        "I_classical": i_cl,
        "I_quantum": i_q,
        "agreement": diff,
    } | _report_fields(rep) | {"notes": rep.notes}
    return out, EXIT_OK if diff <= AGREEMENT_TOL and rep.all_hold else EXIT_BOUND


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qotp", description=__doc__.splitlines()[0])
    parser.add_argument("--json", action="store_true", help="print the report as JSON")
    parser.add_argument("--grouping-tol", type=float, default=DEFAULT_GROUPING_TOL,
                        help="relative eigenvalue tolerance for degenerate blocks (default 1e-9)")
    parser.add_argument("--echo", action="store_true", help="include the parsed state in the report")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
    common.add_argument("--grouping-tol", type=float, default=argparse.SUPPRESS)
    common.add_argument("--echo", action="store_true", default=argparse.SUPPRESS)

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="capacity report and bound checks")
    p.add_argument("path")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("scramble", parents=[common], help="build and verify the scrambling ensemble")
    p.add_argument("path")
    p.add_argument("--enumerate", action="store_true", help="compare against the brute-force average")
    p.add_argument("--sample", type=int, default=256, help="members checked for privacy (default 256)")
    p.set_defaults(func=cmd_scramble)

    p = sub.add_parser("asympt", parents=[common], help="n-copy rate bounds and type-class counts")
    p.add_argument("path")
    p.add_argument("--n-max", type=int, default=100)
    p.set_defaults(func=cmd_asympt)

    p = sub.add_parser("classical", parents=[common], help="classical key via diagonal embedding")
    p.add_argument("path")
    p.set_defaults(func=cmd_classical)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if not 1e-12 <= args.grouping_tol <= 1e-3:
            raise InputError(f"--grouping-tol must lie in [1e-12, 1e-3], got {args.grouping_tol}")
        if args.command == "scramble" and args.sample < 1:
            raise InputError("--sample must be >= 1")
        sf = _load(args.path) if args.echo else None
        report, code = args.func(args)
    except (InputError, MarginalMismatchError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if sf is not None:
        report["state"] = sf.to_dict()
    if args.json:
        print(json.dumps(report, indent=1, default=_json_default, allow_nan=False))
    else:
        print(render_text(report))
    return code


def _json_default(o):
    if hasattr(o, "item"):
        return o.item()
    raise TypeError(type(o))


if __name__ == "__main__":
    sys.exit(main())
