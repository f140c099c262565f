"""Command line: atlas tables, classification, equation export, orbit
sampling, congruence solving and the verification harness.

Exit codes: 0 success, 1 domain error, 2 usage error, 3 verification
failure.  Output is deterministic for a fixed argv and seed (timings are
only included on request).
"""

from __future__ import annotations

import argparse
import json
import sys

from .equations import component_generators, rank_condition_generators
from .errors import InvalidForm, IsodetError
from .fields import field_create
from .forms_orbits import (
    BilinearForm,
    OrbitParams,
    SpaceConfig,
    classify,
    codimension,
    dimension,
    facts,
    random_orbit_point,
    solve_congruence,
    valid_params,
)
from .linalg import Matrix
from .verify import (
    DEFAULT_BUDGET,
    check_closure_order,
    check_dimensions,
    check_equation_cut,
    exhaustive_census,
    point_count_dimension_estimate,
    run_all,
)

KINDS = {"sym": "symmetric", "symmetric": "symmetric", "alt": "alternating", "alternating": "alternating"}


def parse_field_spec(spec: str):
    """p=<prime>[,ext=2] or 'rationals'/'q'."""
    spec = spec.strip().lower()
    if spec in ("q", "rationals", "rational"):
        return field_create("rationals")
    parts = dict(item.split("=", 1) for item in spec.split(","))
    p = int(parts["p"])
    if parts.get("ext") == "2":
        return field_create("quadratic-extension", p)
    return field_create("prime", p)


def parse_params_spec(spec: str) -> OrbitParams:
    bits = [b.strip() for b in spec.split(",")]
    r1, r2 = int(bits[0]), int(bits[1])
    sign = bits[2] if len(bits) > 2 else None
    return OrbitParams(r1, r2, sign)


def resolve_form(args, field, f: int) -> BilinearForm:
    kind = KINDS[args.kind]
    gram = args.gram
    if gram == "split":
        return BilinearForm.split(field, kind, f)
    if gram == "identity":
        if kind != "symmetric":
            raise InvalidForm("identity Gram matrix is not alternating")
        return BilinearForm(kind, Matrix.identity(field, f))
    if gram.startswith("file:"):
        with open(gram[5:], encoding="utf-8") as fh:
            obj = json.load(fh)
        rows = [[field.parse(s) for s in row] for row in obj["rows"]]
        return BilinearForm(kind, Matrix(field, rows))
    raise InvalidForm(f"unknown gram choice {gram!r}")


def resolve_config(args) -> SpaceConfig:
    field = parse_field_spec(args.field)
    form = resolve_form(args, field, args.f)
    return SpaceConfig(args.e, args.f, field, form)


def echo_config(args, config: SpaceConfig) -> str:
    return (
        f"# isodet {args.command} kind={config.kind} e={config.e} f={config.f} "
        f"field={json.dumps(config.field.descriptor(), sort_keys=True)} "
        f"gram={args.gram} seed={getattr(args, 'seed', 0)}"
    )


# --------------------------------------------------------------------------
# atlas

UNKNOWN_MARK = "?"

FOOTNOTES = [
    "? marks flags the tabulated classification leaves open; they are never guessed.",
    "normality rule (symmetric): normal unless r2 = 2*r1 - f with 0 < r2 < r1; "
    "the full-isotropic-rank case r2 = r1 is treated as normal.",
    "strata counted twice as (f/2,0,+/-) are the two components of the "
    "full-Witt totally isotropic stratum of even orthogonal spaces.",
]


def _flag(v) -> str:
    if v is True:
        return "yes"
    if v is False:
        return "no"
    return UNKNOWN_MARK if v == "unknown" else v


def generator_inventory(params: OrbitParams, config: SpaceConfig) -> dict:
    try:
        gens = (
            component_generators(params.sign, config)
            if params.sign is not None
            else rank_condition_generators(params, config)
        )
    except IsodetError as exc:
        return {"unavailable": type(exc).__name__}
    inv: dict = {}
    for g in gens:
        tag = g.label[0]
        deg = g.poly.degree()
        slot = inv.setdefault(tag, {"count": 0, "degree": deg})
        slot["count"] += 1
    return inv


def render_atlas(config: SpaceConfig) -> dict:
    rows = []
    for params in valid_params(config):
        fx = facts(params, config)
        rows.append(
            {
                "params": params.to_json(),
                "dim": fx.dim,
                "codim": fx.codim,
                "normal": fx.normal,
                "cohen_macaulay": fx.cohen_macaulay,
                "rational_singularities_char0": fx.rational_singularities_char0,
                "gorenstein": fx.gorenstein,
                "strongly_f_regular": fx.strongly_f_regular,
                "generators": generator_inventory(params, config),
            }
        )
    return {"config": config.to_json(), "rows": rows, "footnotes": FOOTNOTES}


def atlas_text(atlas: dict) -> str:
    header = ["params", "dim", "codim", "normal", "CM", "RS(char0)", "Gor", "F-reg", "generators"]
    lines = []
    table = [header]
    for row in atlas["rows"]:
        p = OrbitParams.from_json(row["params"])
        inv = row["generators"]
        inv_text = (
            " ".join(f"{tag}:{slot['count']}(deg {slot['degree']})" for tag, slot in inv.items())
            if inv and "unavailable" not in inv
            else (inv.get("unavailable", "-") if inv else "-")
        )
        table.append(
            [
                str(p),
                str(row["dim"]),
                str(row["codim"]),
                _flag(row["normal"]),
                _flag(row["cohen_macaulay"]),
                _flag(row["rational_singularities_char0"]),
                _flag(row["gorenstein"]),
                _flag(row["strongly_f_regular"]),
                inv_text,
            ]
        )
    widths = [max(len(r[i]) for r in table) for i in range(len(header))]
    for r in table:
        lines.append("  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip())
    for note in atlas["footnotes"]:
        lines.append(f"note: {note}")
    return "\n".join(lines)


# --------------------------------------------------------------------------
# subcommands

def _cmd_atlas(args) -> int:
    config = resolve_config(args)
    atlas = render_atlas(config)
    if args.format == "json":
        print(json.dumps(atlas, sort_keys=True))
    else:
        print(echo_config(args, config))
        print(atlas_text(atlas))
    return 0


def _cmd_classify(args) -> int:
    config = resolve_config(args)
    with open(args.infile, encoding="utf-8") as fh:
        obj = json.load(fh)
    phi = Matrix.from_json(obj, field=config.field)
    params = classify(phi, config)
    if args.format == "json":
        print(json.dumps({"config": config.to_json(), "params": params.to_json()}, sort_keys=True))
    else:
        print(echo_config(args, config))
        print(f"params: {params}")
    return 0


def _cmd_equations(args) -> int:
    config = resolve_config(args)
    params = parse_params_spec(args.params)
    gens = (
        component_generators(params.sign, config)
        if params.sign is not None
        else rank_condition_generators(params, config)
    )
    if args.format == "json":
        payload = {"config": config.to_json(), "params": params.to_json(), "generators": gens.to_json()}
        text = json.dumps(payload, sort_keys=True)
    else:
        text = echo_config(args, config) + f"\n# params {params}, {len(gens)} generators\n" + gens.to_text()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0


def _cmd_sample(args) -> int:
    config = resolve_config(args)
    params = parse_params_spec(args.params)
    points = [
        random_orbit_point(params, config, seed=f"{args.seed}:{i}") for i in range(args.count)
    ]
    if args.format == "json":
        print(
            json.dumps(
                {
                    "config": config.to_json(),
                    "params": params.to_json(),
                    "seed": args.seed,
                    "points": [m.to_json() for m in points],
                },
                sort_keys=True,
            )
        )
    else:
        print(echo_config(args, config))
        for m in points:
            print("; ".join(" ".join(config.field.render(v) for v in row) for row in m.data))
    return 0


def _cmd_solve_congruence(args) -> int:
    field = parse_field_spec(args.field)
    form = resolve_form(args, field, args.f)
    with open(args.infile, encoding="utf-8") as fh:
        obj = json.load(fh)
    S = Matrix.from_json(obj["S"], field=field)
    A = Matrix.from_json(obj["A"], field=field)
    B = solve_congruence(S, A, form)
    residual = (A @ form.gram @ B.T) + (B @ form.gram @ A.T) - S
    residual_zero = all(field.is_zero(v) for row in residual.data for v in row)
    payload = {"B": B.to_json(), "residual_zero": residual_zero}
    if args.format == "json":
        print(json.dumps(payload, sort_keys=True))
    else:
        print(f"# isodet solve-congruence kind={form.kind} f={args.f}")
        print("; ".join(" ".join(field.render(v) for v in row) for row in B.data))
        print(f"residual_zero: {residual_zero}")
    return 0


def _cmd_verify(args) -> int:
    config = resolve_config(args)
    primes = tuple(int(x) for x in args.primes.split(","))
    if args.check == "all":
        reports = run_all(config, budget=args.budget, samples=args.samples, seed=args.seed, primes=primes)
    elif args.check == "census":
        reports = [exhaustive_census(config, budget=args.budget)]
    elif args.check == "dims":
        reports = [check_dimensions(config)]
    elif args.check == "closure":
        reports = [check_closure_order(config, samples=args.samples, seed=args.seed)]
    elif args.check == "cut":
        targets = [parse_params_spec(args.params)] if args.params else valid_params(config)
        reports = [
            check_equation_cut(p, config, budget=args.budget, seed=args.seed) for p in targets
        ]
    elif args.check == "counts":
        targets = [parse_params_spec(args.params)] if args.params else valid_params(config)
        reports = [
            point_count_dimension_estimate(p, config, primes, budget=args.budget) for p in targets
        ]
    else:  # pragma: no cover - argparse restricts choices
        raise AssertionError(args.check)
    if args.format == "json":
        for r in reports:
            print(json.dumps(r.to_json(include_timing=args.timing), sort_keys=True))
    else:
        print(echo_config(args, config))
        for r in reports:
            extra = f" witness={json.dumps(r.witness, sort_keys=True)}" if r.witness else ""
            tall = json.dumps(r.tallies, sort_keys=True)
            print(f"{r.status.upper():4}  {r.name:14} {tall}{extra}")
    return 0 if all(r.ok for r in reports) else 3


# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-e", type=int, required=True, help="dimension of E (rows)")
    common.add_argument("-f", type=int, required=True, help="dimension of F (columns)")
    common.add_argument("--kind", choices=sorted(KINDS), required=True)
    common.add_argument("--field", default="rationals", help="p=<prime>[,ext=2] or 'rationals'")
    common.add_argument("--gram", default="split", help="split | identity | file:<path>")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    common.add_argument("--format", choices=("text", "json"), default="text")

    parser = argparse.ArgumentParser(prog="isodet", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("atlas", parents=[common], help="stratum table with flags and generator inventory")

    p_classify = sub.add_parser("classify", parents=[common], help="classify a matrix from JSON")
    p_classify.add_argument("--in", dest="infile", required=True)

    p_eq = sub.add_parser("equations", parents=[common], help="export a stratum's generators")
    p_eq.add_argument("--params", required=True, help="r1,r2[,sign]")
    p_eq.add_argument("--out")

    p_sample = sub.add_parser("sample", parents=[common], help="sample points of a stratum")
    p_sample.add_argument("--params", required=True, help="r1,r2[,sign]")
    p_sample.add_argument("--count", type=int, default=1)

    p_solve = sub.add_parser("solve-congruence", help="solve A K B^t + B K A^t = S for B")
    p_solve.add_argument("-f", type=int, required=True)
    p_solve.add_argument("--kind", choices=sorted(KINDS), required=True)
    p_solve.add_argument("--field", default="rationals")
    p_solve.add_argument("--gram", default="split")
    p_solve.add_argument("--in", dest="infile", required=True)
    p_solve.add_argument("--format", choices=("text", "json"), default="text")

    p_verify = sub.add_parser("verify", parents=[common], help="run verification checks")
    p_verify.add_argument("check", choices=("census", "cut", "dims", "closure", "counts", "all"))
    p_verify.add_argument("--params", help="restrict cut/counts to one stratum: r1,r2[,sign]")
    p_verify.add_argument("--samples", type=int, default=100)
    p_verify.add_argument("--primes", default="3,5")
    p_verify.add_argument("--timing", action="store_true", help="include wall times in JSON output")

    return parser


_HANDLERS = {
    "atlas": _cmd_atlas,
    "classify": _cmd_classify,
    "equations": _cmd_equations,
    "sample": _cmd_sample,
    "solve-congruence": _cmd_solve_congruence,
    "verify": _cmd_verify,
}


def dispatch(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return _HANDLERS[args.command](args)
    except IsodetError as exc:
        diagnostic = {"error": type(exc).__name__, "message": str(exc)}
        print(json.dumps(diagnostic, sort_keys=True), file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(json.dumps({"error": "FileNotFound", "message": str(exc)}, sort_keys=True), file=sys.stderr)
        return 1


def main(argv=None) -> int:
    return dispatch(argv)


if __name__ == "__main__":
    sys.exit(main())
