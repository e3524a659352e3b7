"""Command-line interface: ``grassmann-hodge <command> ...``.

Exit codes: 0 every verdict PASS, 1 some verdict FAIL, 2 usage error,
3 malformed input text, 4 unreadable input file.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from functools import reduce
from pathlib import Path

from . import combinatorial_hodge as ch
from . import electrodynamics as ed
from ._parsing import ParseError
from .exterior_algebra import (
    Multivector,
    all_blades,
    complement,
    interior_product,
    regressive_product,
    wedge,
)
from .metric_hodge import Metric, double_star_sign, hodge_star

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_PARSE, EXIT_IO = 0, 1, 2, 3, 4

ALGEBRA_CHECKS = ("double-complement", "product-complement", "vector-factors", "interior-orthonormal")


class InputError(Exception):
    pass


def _verdict(ok: bool) -> str:
    return "PASS" if ok else "FAIL"


def _dim_arg(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid dimension {text!r}") from None
    if not 1 <= n <= 8:
        raise argparse.ArgumentTypeError(f"dimension must be between 1 and 8, got {n}")
    return n


def _orientation_arg(text: str) -> int:
    if text in ("1", "+1", "+"):
        return 1
    if text in ("-1", "-"):
        return -1
    raise argparse.ArgumentTypeError("orientation must be +1 or -1")


def _resolve(path: str) -> Path:
    """The path itself, or a packaged fixture with the same file name."""
    p = Path(path)
    if p.is_file():
        return p
    try:
        return ch.fixture_path(p.name)
    except FileNotFoundError:
        raise InputError(f"cannot read {path}") from None


def _table(headers, rows) -> list[str]:
    cells = [list(map(str, headers))] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(headers))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return lines


def _blade_name(b, prefix="e") -> str:
    return "^".join(f"{prefix}{i}" for i in b) if b else "1"


# ---------------------------------------------------------------- algebra


def _random_homogeneous(rng: random.Random, n: int, k: int) -> Multivector:
    blades = list(all_blades(n, 1, k))
    terms = {b: Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for b in rng.sample(blades, rng.randint(1, len(blades)))}
    return Multivector(n, terms)


def cmd_algebra(args) -> tuple[dict, list[str], bool]:
    n = args.dim
    checks = args.check or list(ALGEBRA_CHECKS)
    rng = random.Random(args.seed)

    rows = []
    for b in all_blades(n):
        e = Multivector(n, {b: 1})
        c = complement(e)
        cc = complement(c)
        k = len(b)
        sign = cc.coefficient(b)
        expected = -1 if (k * (n - k)) % 2 else 1
        rows.append({"blade": _blade_name(b), "grade": k, "complement": str(c), "double_sign": int(sign), "expected_sign": expected})

    results = []
    for name in checks:
        if name == "double-complement":
            ok = all(r["double_sign"] == r["expected_sign"] for r in rows)
            cases = len(rows)
        elif name == "product-complement":
            cases, ok = 0, True
            for k in range(n + 1):
                for l in range(n + 1 - k):
                    for _ in range(3):
                        A, B = _random_homogeneous(rng, n, k), _random_homogeneous(rng, n, l)
                        ok &= complement(wedge(A, B)) == regressive_product(complement(A), complement(B))
                        cases += 1
        elif name == "vector-factors":
            cases, ok = 0, True
            for m in range(1, n + 1):
                for _ in range(3):
                    vs = [_random_homogeneous(rng, n, 1) for _ in range(m)]
                    lhs = complement(reduce(wedge, vs))
                    rhs = reduce(regressive_product, [complement(v) for v in vs])
                    ok &= lhs == rhs
                    cases += 1
        else:  # interior-orthonormal
            cases, ok = 0, True
            for i in range(1, n + 1):
                for j in range(1, n + 1):
                    val = interior_product(Multivector.basis(n, i), Multivector.basis(n, j))
                    ok &= val == (1 if i == j else 0)
                    cases += 1
        results.append({"check": name, "cases": cases, "verdict": _verdict(bool(ok))})

    passed = all(r["verdict"] == "PASS" for r in results)
    lines = [f"complement table, n = {n}"]
    lines += _table(
        ("blade", "grade", "|blade", "||sign", "(-1)^{k(n-k)}"),
        [(r["blade"], r["grade"], r["complement"], f"{r['double_sign']:+d}", f"{r['expected_sign']:+d}") for r in rows],
    )
    lines.append("")
    lines += _table(("identity", "cases", "verdict"), [(r["check"], r["cases"], r["verdict"]) for r in results])
    lines.append(f"overall: {_verdict(passed)}")
    data = {"command": "algebra", "dim": n, "seed": args.seed, "table": rows, "checks": results, "verdict": _verdict(passed)}
    return data, lines, passed


# ---------------------------------------------------------------- star


def cmd_star(args) -> tuple[dict, list[str], bool]:
    try:
        g = Metric.from_string(args.sig, orientation=args.orientation)
    except ValueError as exc:
        raise ParseError(str(exc)) from None
    n, base = g.dim, g.base
    prefix = "dx"
    rows = []
    ok = True
    for b in all_blades(n, base):
        e = Multivector(n, {b: 1}, base=base)
        s = hodge_star(e, g)
        ss = hodge_star(s, g).coefficient(b)
        expected = double_star_sign(len(b), g)
        ok &= ss == expected
        comp = complement(e)
        rows.append({
            "blade": _blade_name(b, prefix),
            "grade": len(b),
            "star": s.format(prefix),
            "star_star": int(ss),
            "expected": expected,
            "equals_complement": s == comp,
        })
    lines = [f"Hodge star, signature {g}, orientation {g.orientation:+d}, sign(det g) = {g.det_sign:+d}"]
    lines += _table(
        ("blade", "grade", "*blade", "**", "sign(det g)(-1)^{k(n-k)}", "= complement"),
        [(r["blade"], r["grade"], r["star"], f"{r['star_star']:+d}", f"{r['expected']:+d}", "yes" if r["equals_complement"] else "no") for r in rows],
    )
    lines.append(f"double-star law: {_verdict(ok)}")
    data = {
        "command": "star",
        "signature": str(g),
        "orientation": g.orientation,
        "det_sign": g.det_sign,
        "table": rows,
        "verdict": _verdict(ok),
    }
    return data, lines, ok


# ---------------------------------------------------------------- maxwell


def _residual_rows(result, formulation: str):
    if formulation in ("premetric", "metric"):
        return [
            ("dF", result.homogeneous),
            ("dG - kS" if formulation == "premetric" else "d(*F/mu0) - kS", result.inhomogeneous),
            ("continuity d(kS)", result.continuity),
        ]
    if formulation == "minkowski":
        rows = [(f"div F* [{i}]", r) for i, r in enumerate(result.first)]
        rows += [(f"div G* - kS* [{i}]", r) for i, r in enumerate(result.second)]
        return rows + [("continuity d_mu S*", result.continuity)]
    rows = [(f"curl E + d0 B [{i + 1}]", r) for i, r in enumerate(result.faraday)]
    rows.append(("div B", result.div_B))
    rows += [(f"curl H - d0 D - kJ [{i + 1}]", r) for i, r in enumerate(result.ampere)]
    rows.append(("div D - k rho", result.gauss))
    return rows + [("continuity", result.continuity)]


def cmd_maxwell(args) -> tuple[dict, list[str], bool]:
    path = _resolve(args.config)
    cfg = ed.load_field_config(path)
    if args.units is not None:
        cfg = cfg.with_units(args.units == "gaussian")
    result = ed.check(cfg, args.formulation)
    q, m = ed.source_factor(cfg.constants)
    rows = []
    for name, r in _residual_rows(result, args.formulation):
        rows.append({"equation": name, "residual": r.format(), "norm": r.norm(), "verdict": _verdict(r.is_zero())})
    passed = result.passed
    continuity_ok = result.continuity.is_zero()
    extra = {}
    if args.formulation == "classical":
        extra["agrees_with_forms"] = result.agrees_with_forms
        passed = passed and result.agrees_with_forms

    factor = f"{q}" + ("" if m == 0 else ("*pi" if m == 1 else f"*pi^{m}"))
    c = cfg.constants
    lines = [
        f"Maxwell check: {path.name}, formulation {args.formulation}, units {'gaussian' if c.gaussian_4pi else 'hl'}",
        f"constants: c = {c.c}, mu0 = {c.mu0}, eps0 = {c.eps0}; source factor k = {factor}",
        f"rho = {cfg.rho.format(base=0)}",
        "J = (" + ", ".join(p.format(base=0) for p in cfg.J) + ")",
    ]
    lines += _table(("equation", "norm", "verdict", "residual"), [(r["equation"], f"{r['norm']:.6g}", r["verdict"], r["residual"]) for r in rows])
    if "agrees_with_forms" in extra:
        lines.append(f"term-by-term agreement with dF and dG - kS: {'yes' if extra['agrees_with_forms'] else 'no'}")
    if not continuity_ok:
        lines.append("continuity violated: the source 3-form is not closed, so no excitation can satisfy the source equation")
    lines.append(f"verdict: {_verdict(passed)}")
    data = {
        "command": "maxwell",
        "config": path.name,
        "formulation": args.formulation,
        "units": "gaussian" if c.gaussian_4pi else "hl",
        "constants": {"c": str(c.c), "mu0": str(c.mu0), "eps0": str(c.eps0), "source_factor": factor},
        "rho": cfg.rho.format(base=0),
        "J": [p.format(base=0) for p in cfg.J],
        "residuals": rows,
        "continuity": _verdict(continuity_ok),
        **extra,
        "verdict": _verdict(passed),
    }
    return data, lines, passed


# ---------------------------------------------------------------- betti / decompose


def cmd_betti(args) -> tuple[dict, list[str], bool]:
    path = _resolve(args.mesh)
    K = ch.load_complex(path)
    rows = []
    for k in range(K.dim + 1):
        h = ch.betti_via_harmonic(K, k)
        o = ch.betti_via_rank(K, k)
        f = ch.betti_via_eigenvalues(K, k)
        rows.append({
            "k": k,
            "simplices": K.count(k),
            "harmonic": h,
            "oracle": o,
            "equal": h == o,
            "float_harmonic": f.dimension,
            "smallest_nonzero_eigenvalue": None if f.smallest_nonzero == float("inf") else round(f.smallest_nonzero, 12),
            "gap_ok": f.gap_ok,
        })
    euler_counts = K.euler_characteristic()
    euler_betti = sum((-1) ** r["k"] * r["oracle"] for r in rows)
    ok = all(r["equal"] and r["float_harmonic"] == r["harmonic"] and r["gap_ok"] for r in rows)
    ok &= euler_counts == euler_betti
    lines = [f"complex {path.name}: counts {list(K.counts())}, harmonic dim vs rank oracle"]
    lines += _table(
        ("k", "n_k", "harmonic", "oracle", "equal", "float", "min nonzero eig", "gap"),
        [
            (
                r["k"], r["simplices"], r["harmonic"], r["oracle"], "yes" if r["equal"] else "no",
                r["float_harmonic"],
                "-" if r["smallest_nonzero_eigenvalue"] is None else f"{r['smallest_nonzero_eigenvalue']:.6g}",
                "ok" if r["gap_ok"] else "FAIL",
            )
            for r in rows
        ],
    )
    lines.append(f"Euler characteristic: {euler_counts} from counts, {euler_betti} from Betti numbers")
    lines.append(f"verdict: {_verdict(ok)}")
    data = {
        "command": "betti",
        "mesh": path.name,
        "counts": list(K.counts()),
        "rows": rows,
        "euler": {"counts": euler_counts, "betti": euler_betti},
        "verdict": _verdict(ok),
    }
    return data, lines, ok


def _num(x) -> str:
    return str(x) if isinstance(x, Fraction) else f"{x:.12g}"


def cmd_decompose(args) -> tuple[dict, list[str], bool]:
    mesh = _resolve(args.mesh)
    coch = _resolve(args.cochain)
    K = ch.load_complex(mesh)
    c = ch.load_cochain(coch, K)
    if args.float:
        c = c.to_float()
    dec = ch.hodge_decompose(c)
    norm_c = c.norm()
    recon = (dec.reconstruction() - c).norm()
    orth = dec.max_inner_product()
    scale = max(norm_c, 1e-300)
    ok = recon <= 1e-10 * max(norm_c, 1.0) and orth <= 1e-10 * max(norm_c * norm_c, 1.0)
    simplices = K.simplices(c.degree)
    names = ("exact", "coexact", "harmonic")
    parts = {name: part for name, part in zip(names, dec)}
    lines = [f"Hodge decomposition of a {c.degree}-cochain on {mesh.name} ({'exact rational' if c.exact else 'floating'} path)"]
    lines += _table(
        ("simplex", "c", *names),
        [
            (" ".join(map(str, s)), _num(c.values[i]), *(_num(parts[nm].values[i]) for nm in names))
            for i, s in enumerate(simplices)
        ],
    )
    lines.append("norms: " + ", ".join(f"{nm} {parts[nm].norm():.6g}" for nm in names) + f", input {norm_c:.6g}")
    lines.append(f"max pairwise inner product: {orth:.3e}; reconstruction error: {recon:.3e}")
    lines.append(f"verdict: {_verdict(ok)}")
    data = {
        "command": "decompose",
        "mesh": mesh.name,
        "cochain": coch.name,
        "degree": c.degree,
        "exact": c.exact,
        "simplices": [list(s) for s in simplices],
        "input": [_num(v) for v in c.values],
        "parts": {nm: [_num(v) for v in parts[nm].values] for nm in names},
        "norms": {nm: parts[nm].norm() for nm in names} | {"input": norm_c},
        "orthogonality_residual": orth,
        "reconstruction_error": recon,
        "relative_reconstruction_error": recon / scale if norm_c else recon,
        "verdict": _verdict(ok),
    }
    return data, lines, ok


# ---------------------------------------------------------------- entry point


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="emit JSON instead of text")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="seed for randomized identity suites")
    common.add_argument("--orientation", type=_orientation_arg, default=argparse.SUPPRESS, help="+1 or -1")

    parser = argparse.ArgumentParser(
        prog="grassmann-hodge",
        description="Grassmann complements, Hodge stars, Maxwell checks and combinatorial Hodge theory.",
        parents=[common],
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("algebra", parents=[common], help="complement table and Grassmann identity suite")
    p.add_argument("--dim", type=_dim_arg, required=True, help="dimension n, 1..8")
    p.add_argument("--check", action="append", choices=ALGEBRA_CHECKS, help="run only this identity (repeatable)")
    p.set_defaults(func=cmd_algebra)

    p = sub.add_parser("star", parents=[common], help="Hodge star table for a diagonal signature")
    p.add_argument("--sig", required=True, help='signature string such as "+---"')
    p.set_defaults(func=cmd_star)

    p = sub.add_parser("maxwell", parents=[common], help="check Maxwell's equations on a field config")
    p.add_argument("--config", required=True, help="field-config file")
    p.add_argument("--units", choices=("gaussian", "hl"), default=None, help="override the config's unit system")
    p.add_argument("--formulation", choices=ed.FORMULATIONS, default="premetric")
    p.set_defaults(func=cmd_maxwell)

    p = sub.add_parser("betti", parents=[common], help="Betti numbers: harmonic dimension vs rank oracle")
    p.add_argument("mesh")
    p.set_defaults(func=cmd_betti)

    p = sub.add_parser("decompose", parents=[common], help="Hodge decomposition of a cochain")
    p.add_argument("mesh")
    p.add_argument("cochain")
    p.add_argument("--float", action="store_true", help="use the floating least-squares path")
    p.set_defaults(func=cmd_decompose)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_USAGE
    args.json = getattr(args, "json", False)
    args.seed = getattr(args, "seed", 0)
    args.orientation = getattr(args, "orientation", 1)
    try:
        data, lines, passed = args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    if args.json:
        print(json.dumps(data, indent=2, sort_keys=True))
    else:
        print("\n".join(lines))
    return EXIT_OK if passed else EXIT_FAIL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
