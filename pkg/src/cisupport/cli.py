"""Command-line interface: deterministic JSON reports over job files.

Exit codes: 0 success; 2 parse/validation error; 3 a computation-level flag
(unstabilized variety) without --allow-unstable; 1 unexpected failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from .cache import cache_key, read_cache, write_cache
from .checksuite import run_check
from .cimodule import residue_module
from .groebner import Ideal
from .jobspec import JobSpec, JobSpecError, parse_input, render
from .operators import chi_action_from_family, operator_family
from .poly import PolyParseError, parse_poly, render_poly
from .realize import ConeSpec, realize_cone
from .resolution import minimal_resolution
from .variety import (
    Subspace,
    dimension,
    membership,
    restrict_to_subspace,
    variety_of,
)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_PARSE = 2
EXIT_UNSTABLE = 3


def _build_parser():
    ap = argparse.ArgumentParser(
        prog="cisupport",
        description="Exact support-variety computations over graded complete intersections",
    )
    sub = ap.add_subparsers(dest="command", required=True)
    for name in ("resolve", "betti", "operators", "variety", "member", "restrict", "realize", "check"):
        sp = sub.add_parser(name)
        sp.add_argument("--input", help="job file (optional for check)")
        sp.add_argument("--length", type=int)
        sp.add_argument("--window", type=int)
        sp.add_argument("--degree-bound", type=int, dest="degree_bound")
        sp.add_argument("--point")
        sp.add_argument("--subspace")
        sp.add_argument("--cone")
        sp.add_argument("--seed", type=int)
        sp.add_argument("--cache-dir", dest="cache_dir")
        sp.add_argument("--allow-unstable", action="store_true")
        sp.add_argument("--json-out", dest="json_out")
    return ap


def _effective_params(job: JobSpec, args) -> dict:
    params = {}
    if job is not None and job.command is not None:
        params.update(job.command.params)
    for cli_name, key in (
        ("length", "length"),
        ("window", "window"),
        ("degree_bound", "degree-bound"),
        ("point", "point"),
        ("subspace", "subspace"),
        ("cone", "cone"),
        ("seed", "seed"),
    ):
        v = getattr(args, cli_name, None)
        if v is not None:
            params[key] = str(v)
    return params


def _parse_point(ring, text: str):
    try:
        coords = tuple(int(t) % ring.field.p for t in text.split(","))
    except ValueError:
        raise JobSpecError(f"bad point {text!r}")
    if len(coords) != ring.c:
        raise JobSpecError(f"point needs {ring.c} coordinates")
    return coords


def _parse_subspace(ring, text: str) -> Subspace:
    body = text
    if ":" in text:
        shape, _, body = text.partition(":")
        try:
            r_s, c_s = shape.lower().split("x")
            r, c = int(r_s), int(c_s)
        except ValueError:
            raise JobSpecError(f"bad subspace shape {shape!r}")
    else:
        r = c = None
    rows = []
    for row_text in body.split(";"):
        try:
            rows.append([int(t) for t in row_text.split(",")])
        except ValueError:
            raise JobSpecError(f"bad subspace row {row_text!r}")
    if r is not None and (len(rows) != r or any(len(row) != c for row in rows)):
        raise JobSpecError("subspace entries do not match the declared shape")
    return Subspace(ring, rows)


def _ideal_report(ideal: Ideal):
    return [render_poly(g) for g in ideal.gens]


def _matrix_report(mat):
    return {
        "rows": mat.nrows,
        "cols": mat.ncols,
        "row_twists": list(mat.row_twists),
        "col_twists": list(mat.col_twists),
        "entries": mat.render(),
    }


def execute(job: JobSpec, command: str, params: dict) -> dict:
    """Build the (deterministic) result body for one command."""
    results = {}
    flags = {}
    if command == "check":
        p_small = job.p if job is not None else 3
        results["properties"] = run_check(p_small=p_small)
        results["passed"] = all(r["passed"] for r in results["properties"])
    else:
        ring = job.ci_ring()
        if command in ("resolve", "betti"):
            name = params.get("module") or job.default_module()
            module = job.build_module(name, ring)
            length = int(params.get("length", 5))
            res = minimal_resolution(ring, module, length)
            results["module"] = name
            results["betti"] = res.betti
            results["betti_by_degree"] = [
                {str(d): c for d, c in sorted(bd.items())} for bd in res.betti_by_degree()
            ]
            results["minimal"] = True
            if command == "resolve":
                results["differentials"] = [
                    _matrix_report(res.differential(i)) for i in range(1, length + 1)
                ]
        elif command == "operators":
            name = params.get("module") or job.default_module()
            module = job.build_module(name, ring)
            window = int(params.get("window", 6))
            res = minimal_resolution(ring, module, window)
            fam = operator_family(ring, res)
            fam.verify_identity()
            fam.verify_chain_property()
            ext = chi_action_from_family(fam)
            ext.verify_commutativity()
            results["module"] = name
            results["window"] = window
            results["operators"] = {
                f"t{i + 1}": {
                    str(n): _matrix_report(fam.t(i, n)) for n in range(2, window + 1)
                }
                for i in range(ring.c)
            }
            results["identity_verified"] = True
            results["commutes_on_ext"] = True
        elif command == "variety":
            name = params.get("module") or job.default_module()
            module = job.build_module(name, ring)
            window = int(params["window"]) if "window" in params else None
            dbound = int(params["degree-bound"]) if "degree-bound" in params else None
            v = variety_of(ring, module, window, dbound)
            results["module"] = name
            results["ideal"] = _ideal_report(v.ideal)
            results["dimension"] = dimension(v)
            results["window_used"] = v.window_used
            results["degree_bound"] = v.degree_bound
            flags["stabilized"] = v.stabilized
        elif command == "member":
            name = params.get("module") or job.default_module()
            module = job.build_module(name, ring)
            if "point" not in params:
                raise JobSpecError("member needs a point")
            coords = _parse_point(ring, params["point"])
            other_name = params.get("module2")
            other = (
                job.build_module(other_name, ring)
                if other_name
                else residue_module(ring)
            )
            results["module"] = name
            results["module2"] = other_name or "k"
            results["point"] = list(coords)
            results["member"] = membership(ring, module, other, coords)
        elif command == "restrict":
            name = params.get("module") or job.default_module()
            module = job.build_module(name, ring)
            if "subspace" not in params:
                raise JobSpecError("restrict needs a subspace")
            w = _parse_subspace(ring, params["subspace"])
            window = int(params["window"]) if "window" in params else None
            dbound = int(params["degree-bound"]) if "degree-bound" in params else None
            v = variety_of(ring, module, window, dbound)
            restricted = restrict_to_subspace(v, w)
            results["module"] = name
            results["subspace"] = [list(r) for r in w.rows]
            results["variety_ideal"] = _ideal_report(v.ideal)
            results["restricted_ideal"] = _ideal_report(restricted)
            flags["stabilized"] = v.stabilized
        elif command == "realize":
            if "cone" not in params:
                raise JobSpecError("realize needs cone generators")
            chi = ring.chi_ring()
            polys = []
            for s in params["cone"].split(";"):
                s = s.strip()
                if not s:
                    continue
                try:
                    polys.append(parse_poly(chi, s))
                except PolyParseError as exc:
                    raise JobSpecError(f"cone generator {s!r}: {exc.message}")
            module = realize_cone(ring, ConeSpec(polys))
            v = variety_of(ring, module)
            results["cone"] = [render_poly(q) for q in polys]
            results["presentation"] = _matrix_report(module.presentation)
            results["row_twists"] = list(module.row_twists)
            results["variety_ideal"] = _ideal_report(v.ideal)
            results["dimension"] = dimension(v)
            flags["stabilized"] = v.stabilized
        else:
            raise JobSpecError(f"unknown command {command!r}")
    report = {
        "version": "1",
        "command": command,
        "parameters": {k: params[k] for k in sorted(params)},
        "results": results,
    }
    if job is not None:
        report["ring"] = {
            "p": job.p,
            "variables": [v for v, _ in job.variables],
            "weights": [w for _, w in job.variables],
            "relations": list(job.relations),
        }
    if flags:
        report["flags"] = flags
    return report


def run_job(job: JobSpec, command: str, params: dict, cache_dir: str = None):
    """Execute with optional report caching; returns (payload, cache_hit)."""
    job_text = render(JobSpec(job.p, job.variables, job.relations, job.modules, None)) if job else "builtin"
    key = cache_key(job_text, command, params)
    if cache_dir:
        payload = read_cache(cache_dir, key)
        if payload is not None:
            return payload, True
    report = execute(job, command, params)
    payload = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if cache_dir:
        write_cache(cache_dir, key, payload)
    return payload, False


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    command = args.command
    job = None
    if args.input:
        try:
            with open(args.input, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_PARSE
        try:
            job = parse_input(text)
        except JobSpecError as exc:
            print(f"{args.input}:{exc.line}:{exc.col}: error: {exc.message}", file=sys.stderr)
            return EXIT_PARSE
    elif command != "check":
        print("error: --input is required for this command", file=sys.stderr)
        return EXIT_PARSE

    cache_dir = args.cache_dir or os.environ.get("CISUPPORT_CACHE")
    t0 = time.monotonic()
    try:
        params = _effective_params(job, args)
        payload, hit = run_job(job, command, params, cache_dir)
    except JobSpecError as exc:
        print(f"error: {exc.message}", file=sys.stderr)
        return EXIT_PARSE
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    wall_ms = int((time.monotonic() - t0) * 1000)

    report = json.loads(payload)
    report["wall_time_ms"] = wall_ms
    out = json.dumps(report, sort_keys=True, indent=2) + "\n"
    sys.stdout.write(out)
    if args.json_out:
        with open(args.json_out, "w", encoding="utf-8") as fh:
            fh.write(out)
    if hit:
        print("# cache hit", file=sys.stderr)

    flags = report.get("flags", {})
    if flags.get("stabilized") is False and not args.allow_unstable:
        print("warning: variety computation did not stabilize", file=sys.stderr)
        return EXIT_UNSTABLE
    results = report.get("results", {})
    if command == "check" and not results.get("passed", True):
        return EXIT_ERROR
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
