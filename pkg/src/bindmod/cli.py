"""Command line front end.

    bindmod validate FILE
    bindmod analyze FILE [--beta B]
    bindmod slopes FILE --subspace 5 [--beta B]
    bindmod irregularity FILE --hyperplane 2 --s 3/2
    bindmod rank FILE
    bindmod gevrey FILE --direction 2 --order 8

Reports are JSON with sorted keys (markdown with ``--pretty``).  Exit codes:
0 ok, 2 invalid input, 3 resource limit or violated assumption, 4 bug.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import __version__
from . import exactlin as el
from .errors import BindmodError, ParseError
from .gevrey import gevrey_basis, verify_solution
from .irregularity import (dim_irr_stalk, holonomic_rank_generic, multiplicity, normalized_volume,
                           top_components)
from .model import GENERIC, is_standard_homogeneous_prime, load_problem
from .stratify import (andean_arrangement, classify, is_holonomic, is_regular, nonregular_arrangement,
                       qdeg_component, relevant_components, stratify_parameters)
from .umbrella import component_slopes, slopes_of_module

SCHEMA_VERSION = 1


# --- argument helpers -------------------------------------------------------


def parse_beta(text):
    if text is None:
        return None
    if text.strip().lower() == GENERIC:
        return GENERIC
    try:
        return tuple(el.parse_fraction(x) for x in text.split(","))
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bad --beta {text!r}; expected 'p/q,p/q,...' or 'generic'") from None


def parse_indices(text, n, flag):
    try:
        idx = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ParseError(f"bad {flag} {text!r}; expected 1-based indices like '4,6'") from None
    if not idx or any(not 1 <= i <= n for i in idx):
        raise ParseError(f"{flag} indices must lie in 1..{n}")
    return [i - 1 for i in idx]


def parse_rational(text, flag):
    try:
        return el.parse_fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bad {flag} {text!r}; expected 'p/q'") from None


def parse_vectors(text, flag):
    try:
        return [tuple(el.parse_fraction(x) for x in part.split(",")) for part in text.split(";") if part.strip()]
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bad {flag} {text!r}; expected 'p/q,...;p/q,...'") from None


def _beta_json(beta):
    return GENERIC if beta == GENERIC else [el.fraction_str(x) for x in beta]


# --- commands ---------------------------------------------------------------


def _load(args):
    caps = {"max_pairs": args.max_pairs, "max_degree": args.max_degree}
    p = load_problem(args.file, **caps)
    beta = parse_beta(args.beta)
    if beta is not None:
        if beta != GENERIC and len(beta) != p.A.d:
            raise ParseError(f"--beta needs {p.A.d} entries")
        p = p.with_beta(beta)
    return p


def cmd_validate(args, p):
    return {"valid": True, "warnings": list(p.warnings), "components": [c.label for c in p.components]}


def _classification(p):
    out = []
    for c in p.components:
        cl = classify(c, p.A)
        out.append({
            "component": c.label,
            "J": c.J1,
            "kind": cl.kind,
            "krull_dim": cl.krull_dim,
            "rank_AJ": cl.rank_AJ,
            "homogeneous_prime": is_standard_homogeneous_prime(c),
            "qdeg": qdeg_component(c, p.A).to_json(),
        })
    return out


def _all_slopes(p):
    out = {}
    for k in range(p.A.n):
        res = slopes_of_module(p, {k})
        if res.slopes:
            out[str(k + 1)] = res.to_json()
    return out


def cmd_analyze(args, p):
    holo = is_holonomic(p)
    report = {
        "beta": _beta_json(p.beta),
        "classification": _classification(p),
        "andean_arrangement": andean_arrangement(p).to_json(),
        "nonregular_arrangement": nonregular_arrangement(p).to_json(),
        "holonomic": holo,
        "regularity": is_regular(p).to_json(),
    }
    if holo:
        report["relevant"] = [c.label for c in relevant_components(p)]
        report["slopes"] = _all_slopes(p)
    strata = []
    for st in stratify_parameters(p):
        row = st.to_json()
        q = p.with_beta(st.beta)
        row["regularity"] = is_regular(q).to_json()["verdict"]
        if is_holonomic(q):
            row["slopes"] = {k: v["slopes"] for k, v in _all_slopes(q).items()}
        strata.append(row)
    report["strata"] = strata
    return report


def cmd_slopes(args, p):
    K = parse_indices(args.subspace, p.A.n, "--subspace")
    res = slopes_of_module(p, K)
    out = res.to_json()
    out["beta"] = _beta_json(p.beta)
    out["per_component"] = {
        c.label: [el.fraction_str(s) for s in component_slopes(c, p.A, K)] for c in relevant_components(p)
    }
    return out


def cmd_irregularity(args, p):
    i = parse_indices(args.hyperplane, p.A.n, "--hyperplane")
    if len(i) != 1:
        raise ParseError("--hyperplane takes a single index")
    s = parse_rational(args.s, "--s")
    if s <= 1:
        raise ParseError("--s must be greater than 1")
    return dim_irr_stalk(p, i[0], s, seed=args.seed).to_json()


def cmd_rank(args, p):
    comps = []
    for c in top_components(p):
        mu = multiplicity(c, p.A, args.seed)
        comps.append({"component": c.label, "mu": mu.mu, "method": mu.method,
                      "volume": normalized_volume(p.A.columns(sorted(c.J)))})
    return {"rank": holonomic_rank_generic(p, seed=args.seed), "components": comps}


def _pick_component(p, direction, label):
    comps = relevant_components(p)
    if label is not None:
        for c in p.components:
            if c.label == label:
                return c
        raise ParseError(f"no component labelled {label!r}")
    for c in comps:
        if direction in c.J and component_slopes(c, p.A, {direction}):
            return c
    return comps[0]


def cmd_gevrey(args, p):
    d = parse_indices(args.direction, p.A.n, "--direction")
    if len(d) != 1:
        raise ParseError("--direction takes a single index")
    c = _pick_component(p, d[0], args.component)
    v = parse_vectors(args.v, "--v") if args.v else None
    s = parse_rational(args.s, "--s") if args.s else None
    B = gevrey_basis(c, p.A, p.beta, d[0], args.order, s=s, v=v,
                     max_pairs=args.max_pairs, max_degree=args.max_degree)
    out = B.to_json(sorted(c.Jbar))
    out["component"] = c.label
    out["verification"] = [verify_solution(f, c, p.A, B.beta, B).to_json() for f in B.solution_series()]
    return out


COMMANDS = {
    "validate": cmd_validate,
    "analyze": cmd_analyze,
    "slopes": cmd_slopes,
    "irregularity": cmd_irregularity,
    "rank": cmd_rank,
    "gevrey": cmd_gevrey,
}


# --- output -----------------------------------------------------------------


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False, default=_default)


def _default(x):
    if isinstance(x, Fraction):
        return el.fraction_str(x)
    if isinstance(x, (set, frozenset)):
        return sorted(x)
    raise TypeError(f"cannot serialize {type(x).__name__}")


def to_markdown(obj, title="report", level=1) -> str:
    lines = []
    _md(obj, title, level, lines)
    return "\n".join(lines).rstrip() + "\n"


def _scalar(x):
    return x if isinstance(x, str) else json.dumps(x, sort_keys=True, default=_default)


def _md(obj, title, level, lines):
    if isinstance(obj, dict):
        lines.append(f"{'#' * min(level, 6)} {title}\n")
        simple = {k: v for k, v in obj.items() if not isinstance(v, (dict, list)) or _flat_list(v)}
        for k in sorted(simple):
            lines.append(f"- **{k}**: {_scalar(simple[k])}")
        if simple:
            lines.append("")
        for k in sorted(set(obj) - set(simple)):
            _md(obj[k], k, level + 1, lines)
    elif isinstance(obj, list) and obj and all(isinstance(x, dict) for x in obj):
        lines.append(f"{'#' * min(level, 6)} {title}\n")
        keys = sorted({k for x in obj for k in x})
        lines.append("| " + " | ".join(keys) + " |")
        lines.append("|" + "---|" * len(keys))
        for x in obj:
            lines.append("| " + " | ".join(_scalar(x.get(k, "")).replace("|", "\\|") for k in keys) + " |")
        lines.append("")
    else:
        lines.append(f"- **{title}**: {_scalar(obj)}")


def _flat_list(v):
    return isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v)


# --- entry point ----------------------------------------------------------------


def build_parser():
    ap = argparse.ArgumentParser(prog="bindmod", description="Analyze A-graded binomial D-modules.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("file", help="problem document (JSON)")
    common.add_argument("--beta", help="'p/q,p/q,...' or 'generic' (overrides the document)")
    common.add_argument("--seed", type=int, default=0, help="seed for random specializations")
    common.add_argument("--pretty", action="store_true", help="markdown instead of JSON")
    common.add_argument("--max-pairs", type=int, default=20000, help="Buchberger S-pair cap")
    common.add_argument("--max-degree", type=int, default=200, help="Buchberger degree cap")
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("validate", parents=[common], help="parse and check a problem")
    sub.add_parser("analyze", parents=[common], help="classification, regularity and strata")
    sp = sub.add_parser("slopes", parents=[common], help="slopes along a coordinate subspace")
    sp.add_argument("--subspace", required=True, help="1-based coordinates, e.g. '5' or '4,6'")
    ir = sub.add_parser("irregularity", parents=[common], help="dimension of the irregularity stalk")
    ir.add_argument("--hyperplane", required=True, help="1-based coordinate i of x_i = 0")
    ir.add_argument("--s", required=True, help="Gevrey index s > 1 as 'p/q'")
    sub.add_parser("rank", parents=[common], help="holonomic rank for generic beta")
    gv = sub.add_parser("gevrey", parents=[common], help="truncated Gevrey series solutions")
    gv.add_argument("--direction", required=True, help="1-based coordinate of the hyperplane")
    gv.add_argument("--order", type=int, default=8, help="truncation order N")
    gv.add_argument("--s", help="Gevrey index (default: largest slope)")
    gv.add_argument("--component", help="component label (default: first relevant one with a slope)")
    gv.add_argument("--v", help="explicit base exponents 'p/q,...;p/q,...'")
    return ap


def run(argv=None):
    """Run the CLI; returns ``(exit_code, text)``."""
    args = build_parser().parse_args(argv)
    try:
        p = _load(args)
        result = COMMANDS[args.command](args, p)
        report = {
            "schema_version": SCHEMA_VERSION,
            "tool": {"name": "bindmod", "version": __version__},
            "command": args.command,
            "seed": args.seed,
            "problem": p.to_json(),
            "result": result,
        }
        code = 0
    except BindmodError as exc:
        report = {"schema_version": SCHEMA_VERSION, "command": args.command, "error": exc.to_dict()}
        code = exc.exit_code
    except Exception as exc:  # noqa: BLE001 - anything else is a bug
        report = {"schema_version": SCHEMA_VERSION, "command": args.command,
                  "error": {"reason": "InternalError", "message": f"{type(exc).__name__}: {exc}"}}
        code = 4
    text = to_markdown(report, f"bindmod {args.command}") if args.pretty else dumps(report) + "\n"
    return code, text


def main(argv=None):
    code, text = run(argv)
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
