"""Command-line interface.

Every command prints a single JSON document on stdout and exits 0 on
success, 1 on a validation failure (machine-readable error JSON) and 2 on an
internal inconsistency.  Rationals are rendered as "p/q" strings (plain "p"
for integers).  All randomness is seeded by --seed, so identical invocations
produce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import engine, picard, surface_arithmetic, toric
from .algebra import fraction_to_str
from .cache import UniversalCache, cache_path, default_cache_dir
from .errors import InternalComputationError, ResLocError, ValidationError
from .hilb import DEFAULT_SEED


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ValidationError(message)


def _parse_bundle(text: str) -> list[list[int]]:
    components = []
    for chunk in text.split("+"):
        try:
            components.append([int(x) for x in chunk.split(",") if x.strip() != ""])
        except ValueError as exc:
            raise ValidationError(f"bad bundle coefficients {chunk!r}") from exc
    return components


def _resolve_cache_dir(args) -> Path:
    if getattr(args, "cache_dir", None):
        return Path(args.cache_dir)
    return default_cache_dir()


def _cmd_direct(args) -> dict:
    surface = toric.build_surface(args.surface)
    bundle = toric.line_bundle(surface, _parse_bundle(args.bundle))
    chi = engine.bundle_chi(surface, bundle)
    value = engine.direct_invariant(surface, bundle, args.n, args.m, seed=args.seed)
    return {
        "command": "direct",
        "surface": args.surface,
        "bundle": [list(c) for c in bundle.divisor_coefficients],
        "n": args.n,
        "m": args.m,
        "chi_L": chi,
        "k": chi - 1 - args.m,
        "seed": args.seed,
        **value.to_json_dict(),
    }


def _cmd_fit(args) -> dict:
    cache_dir = _resolve_cache_dir(args)
    training, holdouts = engine.generate_training_configs(
        args.n, args.k, min_holdouts=args.min_holdouts
    )
    poly = engine.fit_universal(
        args.n, args.k, training, holdouts, seed=args.seed, jobs=args.jobs
    )
    cache = UniversalCache(cache_dir)
    cache.store(poly)
    return {
        "command": "fit",
        "n": args.n,
        "k": args.k,
        "degree_bound": poly.degree_bound,
        "training_size": len(training),
        "holdouts_validated": poly.holdouts_validated,
        "coeffs": [
            {"exp": list(exp), "value": fraction_to_str(c)}
            for exp, c in sorted(poly.coefficients.items())
        ],
        "cache_file": str(cache_path(cache_dir, args.n, args.k)),
        "seed": args.seed,
    }


def _cmd_eval(args) -> dict:
    topology = surface_arithmetic.SurfaceTopology(
        beta_sq=args.beta_sq,
        beta_c1=args.beta_c1,
        c1_sq=args.c1_sq,
        c2=args.c2,
        h01=args.h01,
        h02=args.h02,
    )
    cache = UniversalCache(_resolve_cache_dir(args))
    if args.variant == "linear-system":
        value = engine.linear_system_invariant(
            topology, args.n, args.m, cache=cache, seed=args.seed, jobs=args.jobs
        )
    else:
        value = engine.point_insertion_invariant(
            topology, args.n, args.m, cache=cache, seed=args.seed, jobs=args.jobs
        )
    chi = surface_arithmetic.euler_char_L(topology)
    return {
        "command": "eval",
        "variant": args.variant,
        "n": args.n,
        "m": args.m,
        "chi_L": chi,
        "k": chi - 1 - args.m,
        "seed": args.seed,
        **value.to_json_dict(),
    }


def _cmd_wedge(args) -> dict:
    model = picard.load_h1_model(args.model)
    invariants = picard.wedge_invariants(model)
    return {
        "command": "wedge",
        "b1": model.b1,
        "w": {f"({i},{j},{k})": v for (i, j, k), v in sorted(invariants.items())},
    }


def _cmd_check_purity(args) -> dict:
    out: dict = {"command": "check-purity"}
    did_something = False
    if args.genus is not None or args.delta is not None or args.chi is not None:
        if None in (args.genus, args.delta, args.chi):
            raise ValidationError("--genus, --delta and --chi must be given together")
        out["chi_bound_holds"] = surface_arithmetic.purity_chi_bound(
            args.genus, args.delta, args.chi
        )
        did_something = True
    if args.splitting is not None:
        if args.beta_sq is None:
            raise ValidationError("--splitting requires --beta-sq")
        try:
            pairings = tuple(int(x) for x in args.splitting.split(",") if x.strip() != "")
        except ValueError as exc:
            raise ValidationError(f"bad splitting {args.splitting!r}") from exc
        data = surface_arithmetic.SplittingData(beta_sq=args.beta_sq, pairings=pairings)
        out["splitting_lower_bound"] = fraction_to_str(
            surface_arithmetic.splitting_lower_bound(args.beta_sq, data)
        )
        did_something = True
    if args.l_sq is not None or args.l_dot_a is not None:
        if None in (args.l_sq, args.l_dot_a):
            raise ValidationError("--l-sq and --l-dot-a must be given together")
        out["hodge_index_max_square"] = fraction_to_str(
            surface_arithmetic.hodge_index_max_square(args.l_sq, args.l_dot_a)
        )
        did_something = True
    if not did_something:
        raise ValidationError("check-purity needs at least one bound to evaluate")
    return out


def _cmd_toric_info(args) -> dict:
    surface = toric.build_surface(args.surface)
    out = {
        "command": "toric-info",
        "surface": args.surface,
        "components": len(surface.components),
        "charts": len(surface.charts),
        "c1_sq": surface.c1_sq,
        "c2": surface.c2,
        "chi_O": surface.chi_O,
    }
    if args.bundle is not None:
        bundle = toric.line_bundle(surface, _parse_bundle(args.bundle))
        data = toric.intersection_numbers(bundle)
        out.update(
            {
                "bundle": [list(c) for c in bundle.divisor_coefficients],
                "beta_sq": data.beta_sq,
                "beta_c1": data.beta_c1,
                "chi_L": engine.bundle_chi(surface, bundle),
                "h0_lattice_points": toric.h0_dimension(bundle),
                "h2_vanishes": toric.h2_vanishes(bundle),
                "nef": toric.is_nef(bundle),
            }
        )
    return out


def _build_parser() -> _Parser:
    parser = _Parser(prog="resloc", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add_cache_flags(p):
        p.add_argument("--cache-dir", default=os.environ.get("RESLOC_CACHE"))
        p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("direct", help="invariant of a toric configuration by localization")
    p.add_argument("--surface", required=True)
    p.add_argument("--bundle", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.set_defaults(func=_cmd_direct)

    p = sub.add_parser("fit", help="fit and cache the universal polynomial for (n, k)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--min-holdouts", type=int, default=5)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    add_cache_flags(p)
    p.set_defaults(func=_cmd_fit)

    p = sub.add_parser("eval", help="evaluate the invariant at topological input")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--beta-sq", type=int, required=True)
    p.add_argument("--beta-c1", type=int, required=True)
    p.add_argument("--c1-sq", type=int, required=True)
    p.add_argument("--c2", type=int, required=True)
    p.add_argument("--h01", type=int, default=0)
    p.add_argument("--h02", type=int, default=0)
    p.add_argument(
        "--variant", choices=("linear-system", "point-only"), default="linear-system"
    )
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    add_cache_flags(p)
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("wedge", help="wedge invariants of an H1 model file")
    p.add_argument("--model", required=True)
    p.set_defaults(func=_cmd_wedge)

    p = sub.add_parser("check-purity", help="purity and Hodge-index bounds")
    p.add_argument("--genus", type=int)
    p.add_argument("--delta", type=int)
    p.add_argument("--chi", type=int)
    p.add_argument("--beta-sq", type=int)
    p.add_argument("--splitting")
    p.add_argument("--l-sq", type=int)
    p.add_argument("--l-dot-a", type=int)
    p.set_defaults(func=_cmd_check_purity)

    p = sub.add_parser("toric-info", help="chart and intersection data of a catalog surface")
    p.add_argument("--surface", required=True)
    p.add_argument("--bundle")
    p.set_defaults(func=_cmd_toric_info)

    return parser


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
        payload = args.func(args)
    except InternalComputationError as exc:
        print(json.dumps({"error": {"kind": "internal", "message": str(exc)}},
                         sort_keys=True, separators=(",", ":")))
        return 2
    except ResLocError as exc:
        print(json.dumps({"error": {"kind": "validation", "message": str(exc)}},
                         sort_keys=True, separators=(",", ":")))
        return 1
    print(json.dumps(payload, sort_keys=True, separators=(",", ":")))
    return 0


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
