"""Command line entry point: ``treelip <subcommand> --spec FILE``.

Exit codes: 0 success, 2 schema or domain error, 3 numeric contract
violation (bracket inversion, failed invariant).
"""
from __future__ import annotations

import argparse
import csv
import io as _io
import sys
from importlib import resources

from . import diagnostics as dg
from . import operators as op
from .expr import ExprDomainError, ExprSyntaxError
from .functions import FunctionError, norm
from .io import (ProblemSpec, Realized, SchemaError, dumps, level_profile_rows, parse_problem, profile_csv,
                 realize)
from .tree import TreeError
from .verify import VerifyConfig, run_all
from .witnesses import WitnessError, make_witness

SUBCOMMANDS = ("analyze", "norm", "essnorm", "classify", "witness", "verify")
EXIT_OK, EXIT_SCHEMA, EXIT_NUMERIC = 0, 2, 3
DOMAIN_ERRORS = (SchemaError, ExprSyntaxError, ExprDomainError, TreeError, WitnessError, FunctionError,
                 op.UnboundedOperatorError, ValueError)


class NumericViolation(RuntimeError):
    """A numeric contract failed; the payload is still emitted."""

    def __init__(self, message: str, payload: bytes):
        super().__init__(message)
        self.payload = payload


def default_spec_bytes() -> bytes:
    return resources.files("treelip").joinpath("data/default_spec.json").read_bytes()


def load_spec(path: str | None, depth: int | None, seed: int | None) -> ProblemSpec:
    if path is None:
        data = default_spec_bytes()
    else:
        try:
            with open(path, "rb") as fh:
                data = fh.read()
        except OSError as exc:
            raise SchemaError("$", f"cannot read spec file: {exc}") from exc
    spec = parse_problem(data)
    if depth is not None:
        if spec.tree.kind != "homogeneous":
            raise SchemaError("$.tree.depth", "--depth applies to homogeneous trees only")
        if depth < 0:
            raise SchemaError("$.tree.depth", f"must be >= 0, got {depth}")
        spec = spec.replace(tree=type(spec.tree)(spec.tree.kind, spec.tree.branching, spec.tree.root_degree, depth))
    if seed is not None:
        s = spec.search
        spec = spec.replace(search=op.SearchConfig(s.budget, seed, s.strategy))
    return spec


def _tree_info(real: Realized) -> dict:
    return {"vertex_count": real.tree.vertex_count, "depth": real.tree.depth,
            "spine_substitute": real.spine_substitute}


def _essential(spec: ProblemSpec, real: Realized) -> dict:
    try:
        return op.essential_norm_bracket(spec.space_pair, real.symbol, real.tree).to_dict()
    except op.UnboundedOperatorError as exc:
        return {"error": str(exc)}


def _json(obj) -> bytes:
    return (dumps(obj) + "\n").encode("utf-8")


def _verify_csv(report) -> bytes:
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["kind", "module", "name", "passed", "max_violation", "checks"])
    for kind, rows in (("invariant", report.results), ("advisory", report.advisories)):
        for r in rows:
            w.writerow([kind, r.module, r.name, r.passed, format(r.max_violation, ".17g"), r.checks])
    return buf.getvalue().encode("utf-8")


def run(subcommand: str, spec: ProblemSpec, fmt: str = "json") -> bytes:
    """Execute one subcommand; raises ``NumericViolation`` after building the output when a contract fails."""
    if subcommand not in SUBCOMMANDS:
        raise SchemaError("$", f"unknown subcommand {subcommand!r}")
    real = realize(spec)
    pair, psi, tree = spec.space_pair, real.symbol, real.tree
    slack = spec.tolerance("inversion_slack")
    rows = level_profile_rows(psi, tree)

    if subcommand == "verify":
        cfg = VerifyConfig(seed=spec.search.seed, slack=slack, rtol=spec.tolerance("lemma_rtol"))
        report = run_all(psi, tree, cfg)
        payload = _verify_csv(report) if fmt == "csv" else _json(
            {"problem": spec.to_json(), "tree": _tree_info(real), **report.to_dict()})
        if not report.passed:
            failed = [r.name for r in report.results if not r.passed]
            raise NumericViolation(f"invariants failed: {', '.join(failed)}", payload)
        return payload

    if fmt == "csv":
        # CSV is the level profile for every other subcommand; run the computation for its checks
        out = profile_csv(rows)
        if subcommand in ("analyze", "norm"):
            op.norm_bracket(pair, psi, tree, spec.search)
        return out

    if subcommand == "classify":
        body = {"classification": dg.classify(pair, psi, tree).to_dict()}
    elif subcommand == "norm":
        body = {"norm": op.norm_bracket(pair, psi, tree, spec.search).to_dict()}
    elif subcommand == "essnorm":
        body = {"essential": op.essential_norm_bracket(pair, psi, tree).to_dict()}
    elif subcommand == "witness":
        if spec.witness is None:
            raise SchemaError("$.witness", "required for the witness subcommand")
        w = make_witness(spec.witness, tree, psi)
        src = norm(pair.source, w.function, tree, tail=False)
        tgt = norm(pair.target, op.apply(psi, w.function, tree), tree, tail=False)
        body = {"witness": w.to_dict(), "pair": pair.label,
                "source_norm": src, "target_norm": tgt, "ratio": tgt / src if src else None}
    else:  # analyze
        body = {"diagnostics": dg.classify(pair, psi, tree).to_dict(),
                "norm": op.norm_bracket(pair, psi, tree, spec.search).to_dict(),
                "essential": _essential(spec, real),
                "isometry_defect": op.isometry_defect(pair, psi, tree).to_dict(),
                "level_profile": rows}
    return _json({"problem": spec.to_json(), "tree": _tree_info(real), **body})


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="treelip", description="Multiplication operators between Lipschitz-type "
                                                             "spaces on rooted trees.")
    p.add_argument("subcommand", choices=SUBCOMMANDS)
    p.add_argument("--spec", metavar="FILE", help="problem JSON (default: the shipped default spec)")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", metavar="FILE", help="write output here instead of stdout")
    p.add_argument("--depth", type=int, help="override the homogeneous tree depth")
    p.add_argument("--seed", type=int, help="override the search seed")
    return p


def _write(data: bytes, out: str | None) -> None:
    if out:
        with open(out, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = load_spec(args.spec, args.depth, args.seed)
        data = run(args.subcommand, spec, args.format)
    except NumericViolation as exc:
        _write(exc.payload, args.out)
        print(f"treelip: numeric violation: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except op.BracketInversionError as exc:
        print(f"treelip: numeric violation: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except DOMAIN_ERRORS as exc:
        print(f"treelip: error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    _write(data, args.out)
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
