"""Batch CLI: validate quantum groups, find and classify idempotent states,
build lattices, quotients and random walks.

Inputs are either JSON files (see :mod:`qgidem.serialize`) or builtin
specs like ``fn:S3``, ``ga:D4``, ``dual:fn:Z4`` (``dual:`` may be
repeated).  Builtin groups: Z1..Z12, Z2xZ2, S3, D4, Q8, S4.

Exit status is 0 iff every requested check passed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import analysis, serialize
from .cayley import all_subgroups, builtin_group, builtin_group_names
from .core import (
    QuantumGroupError,
    dual,
    function_algebra,
    gns,
    group_algebra,
    multiplicative_unitary,
    validate,
)
from .states import (
    SolveConfig,
    State,
    _vector_state,
    cesaro_walk,
    idempotency_defect,
    is_idempotent,
    solve_idempotents,
    subgroup_state_fn,
    subgroup_state_ga,
)


class CliError(Exception):
    pass


def parse_input(spec: str, tol: float):
    """Resolve a builtin spec or JSON path to a validated quantum group.

    Returns (qg, info) where info carries the Cayley table and the
    effective kind ('fn' or 'ga') when the input is group-derived; taking
    a dual flips the kind, since the dual of a function algebra is the
    group algebra of the same group (and vice versa).
    """
    info = {"label": spec, "kind": None, "cayley": None}
    if os.path.exists(spec) or spec.endswith(".json"):
        try:
            data = serialize.load_json(spec)
        except (OSError, json.JSONDecodeError) as exc:
            raise CliError(f"cannot read {spec!r}: {exc}") from exc
        try:
            qg = serialize.qg_from_dict(data)
        except (QuantumGroupError, ValueError, TypeError, KeyError) as exc:
            raise CliError(f"malformed quantum group in {spec!r}: {exc}") from exc
    else:
        parts = spec.split(":")
        duals = 0
        while parts and parts[0] == "dual":
            duals += 1
            parts.pop(0)
        if len(parts) != 2 or parts[0] not in ("fn", "ga"):
            raise CliError(
                f"unrecognized input {spec!r}; expected a JSON path or "
                "[dual:]*(fn|ga):GROUP with GROUP in "
                f"{{{', '.join(builtin_group_names())}}}"
            )
        kind, name = parts
        try:
            ct = builtin_group(name)
        except ValueError as exc:
            raise CliError(str(exc)) from exc
        qg = function_algebra(ct, tol) if kind == "fn" else group_algebra(ct, tol)
        for _ in range(duals):
            qg = dual(qg)
            kind = "ga" if kind == "fn" else "fn"
        info["kind"] = kind
        info["cayley"] = ct

    report = validate(qg, tol)
    if not report.passed:
        raise CliError(
            f"input failed validation; failing axioms: {report.failures}\n{report}"
        )
    return qg, info


def _oracle_states(qg, info):
    ct = info["cayley"]
    build = subgroup_state_fn if info["kind"] == "fn" else subgroup_state_ga
    return [build(qg, ct, sub) for sub in all_subgroups(ct)]


def _fmt_state(state, digits=6):
    vals = np.round(state.coeffs, digits)
    return "[" + ", ".join(
        f"{z.real:+.{digits}f}{z.imag:+.{digits}f}j" for z in vals
    ) + "]"


def _solve(qg, args):
    cfg = SolveConfig(starts=args.starts, seed=args.seed)
    return solve_idempotents(qg, cfg)


def cmd_validate(qg, info, args):
    report = validate(qg, args.tol)
    data = {
        "residuals": report.residuals,
        "cancellation_ranks": list(report.cancellation_ranks),
        "failures": report.failures,
        "passed": report.passed,
    }
    return data, report.passed, [str(report)]


def cmd_idempotents(qg, info, args):
    found = _solve(qg, args)
    lines = [f"found {len(found)} idempotent state(s):"]
    for i, st in enumerate(found):
        lines.append(f"  [{i}] {_fmt_state(st)}")
    data = {
        "count": len(found),
        "states": [serialize.state_to_dict(st) for st in found],
    }
    passed = True
    if args.oracle:
        if info["cayley"] is None:
            raise CliError("--oracle requires a builtin group input")
        oracle = _oracle_states(qg, info)
        dist = max(
            (
                min(np.abs(f.coeffs - o.coeffs).max() for o in oracle)
                for f in found
            ),
            default=np.inf,
        )
        dist = max(
            dist,
            max(
                (
                    min(np.abs(f.coeffs - o.coeffs).max() for f in found)
                    for o in oracle
                ),
                default=np.inf,
            ),
        )
        passed = len(found) == len(oracle) and dist <= 1e-7
        data["oracle"] = {
            "subgroup_count": len(oracle),
            "hausdorff_distance": float(dist),
            "match": passed,
        }
        lines.append(
            f"oracle: {len(oracle)} subgroup states, hausdorff distance "
            f"{dist:.2e} -> {'match' if passed else 'MISMATCH'}"
        )
    return data, passed, lines


def cmd_classify(qg, info, args):
    found = _solve(qg, args)
    gd = gns(qg)
    mu = multiplicative_unitary(qg, gd)
    records = []
    lines = [f"classified {len(found)} idempotent state(s):"]
    for i, st in enumerate(found):
        c = analysis.classify(qg, st, gd=gd, mu=mu)
        records.append(
            {
                "coeffs": serialize.state_to_dict(st)["coeffs"],
                "null_space_dim": c.null_space_dim,
                "is_haar": c.is_haar,
                "residuals": {
                    "ideal": c.witnesses["ideal_residual"],
                    "symmetry": c.witnesses["symmetry_residual"],
                },
            }
        )
        lines.append(
            f"  [{i}] haar={str(c.is_haar):5s} null_dim={c.null_space_dim} "
            f"{_fmt_state(st)}"
        )
    n_haar = sum(r["is_haar"] for r in records)
    lines.append(f"{n_haar} of {len(records)} are Haar idempotents")
    data = {"count": len(records), "haar_count": n_haar, "states": records}
    passed = True
    if args.oracle:
        if info["cayley"] is None:
            raise CliError("--oracle requires a builtin group input")
        from .cayley import is_normal_subgroup

        subs = all_subgroups(info["cayley"])
        expected = (
            len(subs)
            if info["kind"] == "fn"
            else sum(is_normal_subgroup(info["cayley"], s) for s in subs)
        )
        passed = n_haar == expected and len(records) == len(subs)
        data["oracle"] = {"expected_haar": expected, "match": passed}
        lines.append(f"oracle: expected {expected} Haar -> {'match' if passed else 'MISMATCH'}")
    return data, passed, lines


def cmd_lattice(qg, info, args):
    found = _solve(qg, args)
    lat = analysis.build_lattice(qg, found)
    lines = [f"lattice on {len(lat.states)} idempotent state(s):"]
    for i, st in enumerate(lat.states):
        lines.append(f"  [{i}] {_fmt_state(st)}")
    lines.append(f"covering relations: {lat.hasse_edges}")
    covers = {str(i): [] for i in range(len(lat.states))}
    for i, j in lat.hasse_edges:
        covers[str(i)].append(j)
    data = {
        "count": len(lat.states),
        "states": [serialize.state_to_dict(st) for st in lat.states],
        "leq": [[bool(x) for x in row] for row in lat.leq],
        "hasse_edges": [list(e) for e in lat.hasse_edges],
        "covers": covers,
    }
    return data, True, lines


def cmd_quotient(qg, info, args):
    found = _solve(qg, args)
    if not 0 <= args.state < len(found):
        raise CliError(
            f"--state must index one of the {len(found)} states found "
            "(see the idempotents command)"
        )
    st = found[args.state]
    try:
        q = analysis.quotient_quantum_group(qg, st)
    except QuantumGroupError as exc:
        raise CliError(f"state [{args.state}] is not a Haar idempotent: {exc}") from exc
    hs = analysis.homogeneous_space_check(qg, st, q)
    sub = analysis.invariant_subalgebra(qg, st)
    co = analysis.coaction_checks(qg, sub.basis)
    quotient_report = validate(q.quotient)
    passed = quotient_report.passed and hs.passed and co.passed
    lines = [
        f"quotient of dim {qg.dim} by state [{args.state}] -> dim {q.quotient.dim}",
        f"  quotient validates: {quotient_report.passed}",
        f"  haar state of quotient: {_fmt_state(q.haar_mu)}",
        f"  homogeneous-space check: {hs.values} passed={hs.passed}",
        f"  coaction checks: {co.values} passed={co.passed}",
    ]
    data = {
        "state_index": args.state,
        "quotient": serialize.qg_to_dict(q.quotient),
        "projection": [[serialize._pair(z) for z in row] for row in q.projection],
        "haar_mu": [serialize._pair(z) for z in q.haar_mu.coeffs],
        "homogeneous_space": {**hs.values, "passed": hs.passed},
        "coaction": {**co.values, "passed": co.passed},
        "passed": passed,
    }
    return data, passed, lines


def cmd_walk(qg, info, args):
    if args.init is not None:
        st = serialize.state_from_dict(serialize.load_json(args.init), qg)
        w0 = st.coeffs
    else:
        # faithful deterministic default: perturb the unit inside a vector state
        a = qg.unit + 0.1 * np.eye(qg.dim)[0]
        w0 = _vector_state(qg, a)
    walk = cesaro_walk(qg, w0, args.steps)
    checkpoints = sorted(
        {1, 2, 4, 8, *(2**k for k in range(4, 32) if 2**k <= args.steps), args.steps}
    )
    lines = [f"cesaro walk for {args.steps} step(s):"]
    diag = []
    for k in checkpoints:
        defect = idempotency_defect(qg, walk[k - 1])
        diag.append({"k": k, "idempotency_defect": float(defect)})
        lines.append(f"  k={k:>7d} idempotency defect {defect:.3e}")
    if args.steps >= 2:
        limit = 2.0 * walk[-1].coeffs - walk[args.steps // 2 - 1].coeffs
    else:
        limit = walk[-1].coeffs
    limit_ok = is_idempotent(qg, limit, 1e-6)
    lines.append(
        f"extrapolated limit point {'is' if limit_ok else 'is NOT'} an "
        f"idempotent state (tol 1e-6): {_fmt_state(State(qg, limit))}"
    )
    data = {
        "steps": args.steps,
        "diagnostics": diag,
        "limit": [serialize._pair(z) for z in limit],
        "limit_is_idempotent": bool(limit_ok),
    }
    return data, bool(limit_ok), lines


COMMANDS = {
    "validate": cmd_validate,
    "idempotents": cmd_idempotents,
    "classify": cmd_classify,
    "lattice": cmd_lattice,
    "quotient": cmd_quotient,
    "walk": cmd_walk,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="qgidem",
        description="finite quantum groups: idempotent states and their structure",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("input", help="builtin spec (fn:S3, ga:D4, dual:fn:Z4) or JSON path")
        p.add_argument("--tol", type=float, default=1e-9)
        p.add_argument("--starts", type=int, default=500)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--oracle", action="store_true",
                       help="cross-check against the subgroup oracle (builtin groups)")
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--out", default=None, help="write the report to this path")
        if name == "quotient":
            p.add_argument("--state", type=int, required=True,
                           help="index of the idempotent state (canonical order)")
        if name == "walk":
            p.add_argument("--steps", type=int, default=1000)
            p.add_argument("--init", default=None,
                           help="JSON file with the initial state (default: a "
                                "faithful deterministic state)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.seed is None:
        args.seed = int(os.environ.get("QGIDEM_SEED", "0"))
    try:
        qg, info = parse_input(args.input, args.tol)
        data, passed, lines = COMMANDS[args.command](qg, info, args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except QuantumGroupError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    report = {
        "command": args.command,
        "input": args.input,
        "passed": bool(passed),
        "data": data,
    }
    if args.format == "json":
        text = json.dumps(report, indent=1, default=float)
    else:
        text = "\n".join(lines + [f"passed: {passed}"])
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0 if passed else 1


if __name__ == "__main__":
    sys.exit(main())
