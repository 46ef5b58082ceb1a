"""Command-line frontend: construct, check, formula, search, verify, table.

Exit codes: 0 success, 1 the checked property does not hold, 2 usage error
or malformed input, 3 a search or canonicalization budget ran out.
"""

from __future__ import annotations

import argparse
import json
import sys
from math import comb
from pathlib import Path
from typing import Sequence

from . import __version__
from . import constructions as C
from . import detectors as D
from . import formulas as F
from . import verify as V
from .hgio import HgFormatError, dumps, read_hg
from .hypercore import CanonicalFormBudgetExceeded, Hypergraph
from .search import (
    SearchError,
    SearchProblem,
    enumerate_extremal,
    exact_max_edges,
    heuristic_lower_bound,
)

EXIT_OK, EXIT_FALSE, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3

CHECK_KINDS = (
    "k-family",
    "fano",
    "expansion",
    "berge",
    "matching-atmost",
    "weak-indep",
    "strong-indep",
    "edge-coloring",
    "high-degree",
)


class UsageError(Exception):
    pass


class BudgetError(Exception):
    pass


# -- output ---------------------------------------------------------------------


def _flatten(obj, prefix: str = ""):
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from _flatten(v, f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(obj, list) and any(isinstance(x, (dict, list)) for x in obj):
        for i, v in enumerate(obj):
            yield from _flatten(v, f"{prefix}[{i}]")
    else:
        yield prefix, obj


def _text_value(v) -> str:
    if v is None:
        return "null"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (list, tuple)):
        if v and all(isinstance(x, (list, tuple)) for x in v):
            return " ".join("(" + " ".join(map(str, x)) + ")" for x in v)
        sep = " || " if any(isinstance(x, str) and "\n" in x for x in v) else " "
        return sep.join(_text_value(x) for x in v)
    if isinstance(v, str) and "\n" in v:
        return v.strip().replace("\n", " | ")
    return str(v)


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2) + "\n"
    return "".join(f"{k}: {_text_value(v)}\n" for k, v in _flatten(report))


def _envelope(args: argparse.Namespace, argv: Sequence[str], body: dict) -> dict:
    config = {k: v for k, v in vars(args).items() if k not in ("func",) and not callable(v)}
    return {"version": __version__, "argv": list(argv), "config": config, **body}


# -- subcommands --------------------------------------------------------------------


def _load(path: str) -> Hypergraph:
    try:
        return read_hg(path)[0]
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc


def cmd_construct(args) -> tuple[dict, int]:
    params = {k: getattr(args, k) for k in ("n", "l", "s", "r", "k") if getattr(args, k) is not None}
    needed = C.KINDS.get(args.kind, (None, ()))[1]
    H, parts = C.build(args.kind, **{k: v for k, v in params.items() if k in needed})
    text = dumps(H, parts)
    body = {
        "kind": args.kind,
        "params": {k: params[k] for k in needed},
        "n": H.n,
        "r": H.r,
        "edges": len(H),
        "parts": [len(p) for p in parts] if parts is not None else None,
    }
    if args.output:
        Path(args.output).write_text(text)
        body["output"] = args.output
    else:
        body["hg"] = text
    return body, EXIT_OK


def _vertex_set(text: str | None, H: Hypergraph) -> list[int]:
    if text is None:
        raise UsageError("--set is required for this check")
    try:
        S = sorted({int(x) for x in text.split(",") if x.strip()})
    except ValueError:
        raise UsageError(f"--set must be comma-separated integers, got {text!r}") from None
    if any(not 0 <= v < H.n for v in S):
        raise UsageError(f"--set vertices must lie in 0..{H.n - 1}")
    return S


def _need(args, name: str) -> int:
    v = getattr(args, name)
    if v is None:
        raise UsageError(f"--{name} is required for check {args.kind}")
    return v


def cmd_check(args) -> tuple[dict, int]:
    H = _load(args.file)
    kind = args.kind
    body: dict = {"constraint": kind, "file": args.file, "n": H.n, "r": H.r, "edges": len(H)}
    if kind in ("k-family", "fano", "expansion", "berge"):
        # forbidden structure: holds means "H contains a copy"
        if kind == "k-family":
            det = D.contains_k_family(H, _need(args, "l"))
        elif kind == "expansion":
            det = D.contains_expansion(H, _need(args, "l"))
        elif kind == "fano":
            det = D.contains_fano(H)
        else:
            if args.pattern is None:
                raise UsageError("--pattern file.hg is required for check berge")
            det = D.contains_berge(H, _load(args.pattern))
        body["holds"] = det.found
        body["satisfied"] = not det.found
        body["witness"] = det.witness.to_json() if det.witness else None
    elif kind == "matching-atmost":
        s = _need(args, "s")
        nu, w = D.matching_number(H)
        body.update(holds=nu <= s, satisfied=nu <= s, matching_number=nu, witness=w.to_json())
    elif kind in ("weak-indep", "strong-indep"):
        S = _vertex_set(args.set, H)
        test = D.is_weakly_independent if kind == "weak-indep" else D.is_strongly_independent
        ok = test(H, S)
        body.update(set=S, holds=ok, satisfied=ok)
    elif kind == "edge-coloring":
        col = D.greedy_edge_coloring(H)
        ok = col.is_proper(H) and col.num_colors <= col.bound
        body.update(
            holds=ok,
            satisfied=ok,
            num_colors=col.num_colors,
            bound=col.bound,
            max_degree=H.max_degree,
            colors=list(col.colors),
        )
    else:
        s = _need(args, "s")
        high = D.high_degree_vertices(H, s)
        ok = len(high) <= s
        body.update(
            holds=ok,
            satisfied=ok,
            threshold=D.high_degree_threshold(H.n, H.r, s),
            vertices=high,
            matching_number=D.matching_number(H)[0],
        )
    return body, EXIT_OK if body["satisfied"] else EXIT_FALSE


def cmd_formula(args) -> tuple[dict, int]:
    params = {k: getattr(args, k) for k in ("n", "l", "s", "r") if getattr(args, k) is not None}
    return F.evaluate(args.formula_id, **params).to_json(), EXIT_OK


def parse_constraint(text: str) -> D.ForbiddenConstraint:
    """``kind[:param]``, e.g. ``k-family:3``, ``matching-atmost:1``, ``fano``, ``berge:g.hg``."""
    kind, _, param = text.partition(":")
    if kind not in D.CONSTRAINT_KINDS:
        raise UsageError(f"unknown constraint {kind!r}; choose from {', '.join(D.CONSTRAINT_KINDS)}")
    if kind == "fano":
        return D.ForbiddenConstraint.fano()
    if not param:
        raise UsageError(f"constraint {kind} needs a parameter, e.g. {kind}:2")
    if kind == "berge":
        return D.ForbiddenConstraint.berge(_load(param))
    try:
        value = int(param)
    except ValueError:
        raise UsageError(f"constraint parameter must be an integer, got {param!r}") from None
    if kind == "k-family":
        return D.ForbiddenConstraint.k_family(value)
    if kind == "expansion":
        return D.ForbiddenConstraint.expansion(value)
    return D.ForbiddenConstraint.matching_at_most(value)


def cmd_search(args) -> tuple[dict, int]:
    constraints = tuple(parse_constraint(c) for c in args.constraint)
    seed = _load(args.seed) if args.seed else None
    mode = "heuristic" if args.heuristic else "exact"
    if mode == "heuristic" and args.enumerate:
        raise UsageError("--enumerate needs exact mode")
    problem = SearchProblem(
        args.n,
        args.r,
        constraints,
        mode=mode,
        lower_bound_seed=seed,
        isomorph_reduce=not args.no_isomorph_reduce,
        node_limit=args.node_limit,
        time_limit=args.time_limit,
        max_candidates=args.max_candidates,
        workers=args.workers,
        rng_seed=args.rng_seed,
        iterations=args.iterations,
        canon_max_n=args.canon_max_n,
    )
    if mode == "exact":
        ncand = comb(args.n, args.r)
        if ncand > args.max_candidates:
            raise BudgetError(f"C({args.n},{args.r}) = {ncand} candidate edges exceeds --max-candidates {args.max_candidates}")
        res = enumerate_extremal(problem) if args.enumerate else exact_max_edges(problem)
    else:
        res = heuristic_lower_bound(problem, seed=seed)
    body = res.to_json(problem)
    if args.json:
        Path(args.json).write_text(json.dumps(body, indent=2) + "\n")
    code = EXIT_OK
    if mode == "exact" and not res.proof_of_optimality:
        code = EXIT_BUDGET
    if args.enumerate and body.get("isomorphism_classes", 0) is None:
        code = EXIT_BUDGET
    return body, code


def cmd_verify(args) -> tuple[dict, int]:
    params = {k: getattr(args, k) for k in ("n", "l", "s", "r") if getattr(args, k) is not None}
    rep = V.verify_theorem(
        args.theorem,
        params,
        max_candidates=args.max_candidates,
        node_limit=args.node_limit,
        time_limit=args.time_limit,
        workers=args.workers,
    )
    budget = rep["search"] is not None and not rep["search"]["proof_of_optimality"]
    return rep, EXIT_BUDGET if budget else EXIT_OK


def cmd_table(args) -> tuple[str, int]:
    if args.spec:
        try:
            specs = json.loads(Path(args.spec).read_text())
        except OSError as exc:
            raise UsageError(f"cannot read {args.spec}: {exc.strerror}") from exc
        except json.JSONDecodeError as exc:
            raise UsageError(f"{args.spec}: invalid JSON at line {exc.lineno}") from exc
        if not isinstance(specs, list) or not all(isinstance(s, dict) and "theorem" in s and "params" in s for s in specs):
            raise UsageError("table spec must be a list of {\"theorem\": ..., \"params\": {...}} objects")
    else:
        specs = V.grid(args.grid)
    rows = V.table_rows(specs, max_candidates=args.max_candidates)
    text = V.render_json(rows) if args.table_format == "json" else V.render_markdown(rows)
    return text, EXIT_OK


# -- parser ---------------------------------------------------------------------


def _int_params(p: argparse.ArgumentParser, names: Sequence[str]) -> None:
    for name in names:
        p.add_argument(f"--{name}", type=int)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text", help="report format")

    parser = argparse.ArgumentParser(prog="turanlab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"turanlab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", parents=[common], help="build a named construction")
    p.add_argument("kind", choices=sorted(C.KINDS))
    _int_params(p, ("n", "l", "s", "r", "k"))
    p.add_argument("-o", "--output", help="write the .hg file here")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("check", parents=[common], help="test a property of a .hg file")
    p.add_argument("kind", choices=CHECK_KINDS)
    p.add_argument("file")
    _int_params(p, ("l", "s"))
    p.add_argument("--pattern", help="pattern graph (.hg, r=2) for berge")
    p.add_argument("--set", help="comma-separated vertex set for the independence checks")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("formula", parents=[common], help="evaluate a closed-form value")
    p.add_argument("formula_id", choices=sorted(F.FORMULAS))
    _int_params(p, ("n", "l", "s", "r"))
    p.set_defaults(func=cmd_formula)

    p = sub.add_parser("search", parents=[common], help="exact or heuristic extremal search")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--constraint", action="append", default=[], help="kind[:param], repeatable")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true", help="exhaustive search (default)")
    mode.add_argument("--heuristic", action="store_true", help="simulated-annealing lower bound")
    p.add_argument("--seed", help="starting hypergraph (.hg)")
    p.add_argument("--enumerate", action="store_true", help="list every extremal isomorphism class")
    p.add_argument("--json", help="also write the JSON report here")
    p.add_argument("--iterations", type=int, default=2000)
    p.add_argument("--rng-seed", type=int, default=0)
    p.add_argument("--node-limit", type=int)
    p.add_argument("--time-limit", type=float)
    p.add_argument("--max-candidates", type=int, default=35)
    p.add_argument("--workers", type=int)
    p.add_argument("--canon-max-n", type=int, default=10)
    p.add_argument("--no-isomorph-reduce", action="store_true")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("verify", parents=[common], help="compare formula, construction and search")
    p.add_argument("theorem", choices=sorted(V.THEOREMS))
    _int_params(p, ("n", "l", "s", "r"))
    p.add_argument("--max-candidates", type=int, default=28)
    p.add_argument("--node-limit", type=int)
    p.add_argument("--time-limit", type=float)
    p.add_argument("--workers", type=int)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("table", help="render a verification table")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--spec", help="JSON list of {theorem, params}")
    src.add_argument("--grid", choices=V.GRIDS)
    p.add_argument("--format", dest="table_format", choices=("markdown", "json"), default="markdown")
    p.add_argument("--max-candidates", type=int, default=28)
    p.set_defaults(func=cmd_table)
    return parser


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        result, code = args.func(args)
    except HgFormatError as exc:
        print(f"turanlab: malformed .hg file: {exc}", file=err)
        return EXIT_USAGE
    except (BudgetError, CanonicalFormBudgetExceeded) as exc:
        print(f"turanlab: budget exhausted: {exc}", file=err)
        return EXIT_BUDGET
    except (UsageError, C.ConstructionError, F.FormulaError, D.DetectorError, SearchError, V.VerifyError) as exc:
        print(f"turanlab: {exc}", file=err)
        return EXIT_USAGE
    if isinstance(result, str):
        out.write(result)
    else:
        out.write(render(_envelope(args, argv, result), args.format))
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
