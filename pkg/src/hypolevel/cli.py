"""``hypolevel`` command-line interface.

Exit codes: 0 success, 1 verify suite failed, 2 invalid input (parse error,
not a self-map, bad config), 3 empty region, 4 convexity violation found.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from typing import Optional

import numpy as np

from hypolevel import io
from hypolevel.dsl import EvalError, ParseError, eval_jet, load_map, unparse
from hypolevel.hyp_core import InvalidSelfMap, hyp_distance, pseudo_hyp_distance

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_EMPTY, EXIT_VIOLATION = 0, 1, 2, 3, 4


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_INPUT):
        super().__init__(message)
        self.code = code


# ------------------------------------------------------------------ helpers


def parse_complex(text: str) -> complex:
    try:
        return complex(text.strip().replace(" ", "").replace("i", "j"))
    except ValueError:
        raise CliError(f"not a complex number: {text!r}") from None


def read_config(path: str) -> dict:
    """Flat ``key=value`` lines; ``#`` starts a comment."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for n, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise CliError(f"{path}:{n}: expected key=value")
            k, v = (s.strip() for s in line.split("=", 1))
            out[k.replace("-", "_")] = v
    return out


def _load(text: str):
    try:
        return load_map(text)
    except ParseError as exc:
        raise CliError(f"parse error: {exc}") from None
    except InvalidSelfMap as exc:
        raise CliError(str(exc)) from None


def _spec(args):
    from hypolevel.level_set import DMu, OmegaLambda, PhiKind, PhiMu

    chosen = [x for x in (args.omega, args.dmu, args.phi) if x is not None]
    if len(chosen) != 1:
        raise CliError("choose exactly one of --omega, --dmu, --phi")
    if args.omega is not None:
        if not float(args.omega) > 0:
            raise CliError("--omega must be positive")
        return OmegaLambda(float(args.omega))
    if args.dmu is not None:
        z0 = parse_complex(args.z0) if args.z0 else 0j
        w0 = parse_complex(args.w0) if args.w0 else 0j
        if not (abs(z0) < 1 and abs(w0) < 1):
            raise CliError("--z0/--w0 must lie in the unit disk")
        return DMu(float(args.dmu), z0, w0)
    if args.mu is None:
        raise CliError("--phi needs --mu")
    kind = {"log-cosh-half": PhiKind.LOG_COSH_HALF, "identity": PhiKind.IDENTITY}.get(args.phi)
    if kind is None:
        raise CliError(f"unknown --phi {args.phi!r}")
    return PhiMu(kind, float(args.mu))


def _empty_reason(spec, f) -> str:
    from hypolevel.level_set import DMu, OmegaLambda

    if isinstance(spec, DMu):
        g0 = float(pseudo_hyp_distance(complex(f(spec.z0)), spec.w0))
        if spec.mu < 0 and not g0 > -math.tanh(spec.mu / 2):
            return (f"empty: |f(0)| <= -tanh(mu/2) after moving the base points to 0 "
                    f"({g0:.6g} <= {-math.tanh(spec.mu / 2):.6g})")
    if isinstance(spec, OmegaLambda) and spec.lam == 1 and abs(complex(f(0j))) == 0:
        return "empty: f(0) = 0 and lambda = 1, so the Schwarz lemma leaves no point"
    return "empty: no grid cell lies in the region"


def _write(path: Optional[str], text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        io.atomic_write_text(path, text)


def _pt(z: complex):
    return [float(z.real), float(z.imag)]


# ----------------------------------------------------------------- commands


def cmd_eval(args) -> int:
    f = _load(args.map)
    z = parse_complex(args.at)
    if not abs(z) < 1:
        raise CliError(f"--at {args.at} is not in the unit disk")
    try:
        jet = eval_jet(f, z)
    except EvalError as exc:
        raise CliError(f"evaluation failed: {exc}") from None
    fz, dfz = complex(jet.f), complex(jet.d1)
    out = {"map": unparse(f), "z": _pt(z), "f": _pt(fz), "df": _pt(dfz),
           "nu": (1 - abs(fz) ** 2) / (1 - abs(z) ** 2),
           "k_z_0": float(hyp_distance(z, 0j)), "k_fz_0": float(hyp_distance(fz, 0j))}
    _write(args.out, io.dumps(out))
    return EXIT_OK


def cmd_levelset(args) -> int:
    from hypolevel.level_set import extract_region

    f = _load(args.map)
    spec = _spec(args)
    region = extract_region(spec, f, args.resolution, args.tol, map_text=unparse(f))
    data = io.region_to_dict(region)
    _write(args.out, io.dumps(data))
    if args.csv:
        io.atomic_write_text(args.csv, io.contours_to_csv(region))
    if args.svg:
        from hypolevel.render import render_svg

        io.atomic_write_text(args.svg, render_svg(data, args.size))
    if region.in_count() == 0 and not region.contains_origin:
        print(_empty_reason(spec, f), file=sys.stderr)
        return EXIT_EMPTY
    return EXIT_OK


def cmd_convexity(args) -> int:
    from hypolevel.convexity import EmptyRegion, check_h_convex

    spec = _spec(args)
    if args.campaign:
        from hypolevel.campaign import blaschke_pool, falsification_campaign

        t0 = time.perf_counter()
        summary = falsification_campaign(blaschke_pool(args.campaign, args.seed), [spec],
                                         seed=args.seed, n_pairs=args.pairs,
                                         n_segment=args.segment, tol=args.tol)
        if args.jsonl:
            summary.write_jsonl(args.jsonl)
        _write(args.out, io.dumps({"schema": io.REPORT_SCHEMA, "spec": spec.to_dict(),
                                   **summary.to_dict(timings=False)}))
        _meta(args.out, t0)
        return EXIT_VIOLATION if summary.count(status="covered", verdict="violated") else EXIT_OK
    if not args.map:
        raise CliError("--map is required unless --campaign is given")
    f = _load(args.map)
    t0 = time.perf_counter()
    try:
        rep = check_h_convex(spec, f, args.pairs, args.segment, args.tol, args.seed)
    except EmptyRegion:
        print(_empty_reason(spec, f), file=sys.stderr)
        return EXIT_EMPTY
    out = {"schema": io.REPORT_SCHEMA, "map": unparse(f), "spec": spec.to_dict(), **rep.to_dict()}
    _write(args.out, io.dumps(out))
    _meta(args.out, t0)
    return EXIT_VIOLATION if rep.violated else EXIT_OK


def _meta(out: Optional[str], t0: float) -> None:
    if out not in (None, "-"):
        io.atomic_write_text(out + ".meta.json", io.dumps({
            "elapsed_seconds": time.perf_counter() - t0,
            "threads": int(os.environ.get("HYPOLEVEL_THREADS", "1") or 1)}))


def cmd_verify(args) -> int:
    from hypolevel.suites import SUITES, run_suite

    names = list(SUITES) if args.suite == "all" else [args.suite]
    if any(n not in SUITES for n in names):
        raise CliError(f"unknown suite {args.suite!r}; choose from all, {', '.join(SUITES)}")
    t0 = time.perf_counter()
    results = [run_suite(n, args.seed) for n in names]
    payload = results[0] if len(results) == 1 else {
        "suite": "all", "seed": args.seed, "passed": all(r["passed"] for r in results),
        "suites": results}
    _write(args.out, io.dumps(payload))
    _meta(args.out, t0)
    for r in results:
        print(f"{r['suite']}: {'PASS' if r['passed'] else 'FAIL'}", file=sys.stderr)
    return EXIT_OK if payload["passed"] else EXIT_FAIL


def cmd_render(args) -> int:
    from hypolevel.render import render_svg

    try:
        with open(args.region, encoding="utf-8") as fh:
            data = json.load(fh)
        witness = None
        if args.witness:
            with open(args.witness, encoding="utf-8") as fh:
                witness = json.load(fh).get("witness")
        svg = render_svg(data, args.size, witness, show_geodesic=not args.no_geodesic)
    except (OSError, ValueError, KeyError) as exc:
        raise CliError(f"cannot render: {exc}") from None
    _write(args.svg, svg)
    return EXIT_OK


def cmd_sweep(args) -> int:
    """Numbered region JSON + SVG frames over a parameter range."""
    from hypolevel.level_set import DMu, OmegaLambda, extract_region
    from hypolevel.render import render_svg

    f = _load(args.map)
    try:
        lo, hi, n = args.range.split(":")
        values = np.linspace(float(lo), float(hi), int(n))
    except ValueError:
        raise CliError("--range must be start:stop:count") from None
    make = {"omega": OmegaLambda, "dmu": DMu}[args.family]
    os.makedirs(args.out_dir, exist_ok=True)
    for k, v in enumerate(values):
        try:
            spec = make(float(v))
        except ValueError as exc:
            raise CliError(str(exc)) from None
        data = io.region_to_dict(extract_region(spec, f, args.resolution, map_text=unparse(f)))
        stem = os.path.join(args.out_dir, f"frame_{k:04d}")
        io.atomic_write_text(stem + ".json", io.dumps(data))
        io.atomic_write_text(stem + ".svg", render_svg(data, args.size))
    print(f"wrote {len(values)} frames to {args.out_dir}", file=sys.stderr)
    return EXIT_OK


# ------------------------------------------------------------------- parser


def _spec_flags(p):
    p.add_argument("--map", help="self-map expression, e.g. 'z^2' or 'aut(-0.5,0)'")
    p.add_argument("--omega", type=float, help="Omega_lambda with this lambda")
    p.add_argument("--dmu", type=float, help="distance set D_mu with this mu")
    p.add_argument("--phi", help="deformed distance set: log-cosh-half or identity")
    p.add_argument("--mu", type=float, help="mu for --phi")
    p.add_argument("--z0", help="base point in the domain (with --dmu)")
    p.add_argument("--w0", help="base point in the range (with --dmu)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hypolevel", description=__doc__.splitlines()[0])
    ap.add_argument("--config", help="key=value file; command-line flags override it")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate f, f', nu and distances at a point")
    p.add_argument("--map", required=True)
    p.add_argument("--at", required=True, help="point, e.g. 0.5 or 0.3+0.2i")
    p.add_argument("--out")
    p.set_defaults(run=cmd_eval)

    p = sub.add_parser("levelset", help="extract a level set to JSON (and SVG/CSV)")
    _spec_flags(p)
    p.add_argument("--resolution", type=int, default=512)
    p.add_argument("--tol", type=float, default=1e-9, help="contour tolerance")
    p.add_argument("--out")
    p.add_argument("--svg")
    p.add_argument("--csv")
    p.add_argument("--size", type=int, default=512)
    p.set_defaults(run=cmd_levelset)

    p = sub.add_parser("convexity", help="search for a geodesic segment leaving the set")
    _spec_flags(p)
    p.add_argument("--pairs", type=int, default=500)
    p.add_argument("--segment", type=int, default=64)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--campaign", type=int, default=0, metavar="N",
                   help="run on N seeded random Blaschke products instead of --map")
    p.add_argument("--jsonl", help="per-trial JSONL output for --campaign")
    p.add_argument("--out")
    p.set_defaults(run=cmd_convexity)

    p = sub.add_parser("verify", help="run a named verification suite")
    p.add_argument("suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(run=cmd_verify)

    p = sub.add_parser("render", help="render region JSON to SVG")
    p.add_argument("region")
    p.add_argument("--svg")
    p.add_argument("--witness", help="convexity report JSON whose witness to overlay")
    p.add_argument("--no-geodesic", action="store_true")
    p.add_argument("--size", type=int, default=512)
    p.set_defaults(run=cmd_render)

    p = sub.add_parser("sweep", help="numbered frames over a lambda or mu range")
    p.add_argument("--map", required=True)
    p.add_argument("--family", choices=("omega", "dmu"), default="omega")
    p.add_argument("--range", required=True, help="start:stop:count")
    p.add_argument("--resolution", type=int, default=256)
    p.add_argument("--size", type=int, default=512)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(run=cmd_sweep)
    return ap


def _validate(args) -> None:
    res = getattr(args, "resolution", None)
    if res is not None and not 64 <= res <= 8192:
        raise CliError("--resolution must lie in [64, 8192]")
    tol = getattr(args, "tol", None)
    if tol is not None and not tol > 0:
        raise CliError("tolerances must be positive")


def _apply_config(parser, argv) -> None:
    """Install config-file values as subcommand defaults (flags still win)."""
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    ns, _ = pre.parse_known_args(argv)
    if not ns.config:
        return
    subs = parser._subparsers._group_actions[0].choices  # noqa: SLF001
    name = next((a for a in argv if a in subs), None)
    if name is None:
        return
    sp = subs[name]
    known = {a.dest: a for a in sp._actions}  # noqa: SLF001
    cfg = read_config(ns.config)
    bad = sorted(set(cfg) - set(known))
    if bad:
        raise CliError(f"unknown config keys for {name}: {', '.join(bad)}")
    values = {}
    for k, v in cfg.items():
        act = known[k]
        if isinstance(act, argparse._StoreTrueAction):  # noqa: SLF001
            values[k] = v.lower() in ("1", "true", "yes", "on")
        else:
            try:
                values[k] = (act.type or str)(v)
            except ValueError:
                raise CliError(f"config key {k}: bad value {v!r}") from None
        act.required = False
    sp.set_defaults(**values)


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        _apply_config(parser, argv)
        args = parser.parse_args(argv)
        _validate(args)
        return args.run(args)
    except CliError as exc:
        print(f"hypolevel: {exc}", file=sys.stderr)
        return exc.code
    except OSError as exc:
        print(f"hypolevel: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
