"""Command-line front end.

Exit codes: 0 success, 2 usage or spec error, 3 resource cap exceeded,
4 verification failure.  Errors are reported as one JSON object on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import engine, formulas, verify
from .lattice import Region, render_ascii, render_svg
from .qlaurent import QPoly, QRat
from .regions import (
    FamilySpec,
    HSpec,
    family_collapsed,
    family_region,
    hex_intrusion,
    hexagon,
    quartered,
    trapezoid,
    trapezoid_w,
)

EXIT_OK, EXIT_USAGE, EXIT_CAP, EXIT_FAIL = 0, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# spec parsing


def load_json(text: str):
    """Inline JSON, or ``@path`` to read it from a file."""
    if text.startswith("@"):
        text = Path(text[1:]).read_text(encoding="utf-8")
    return json.loads(text)


def parse_spec(d: dict):
    """Turn a region spec into ``(canonical spec dict, Region, HSpec | None)``.

    Accepted forms: a family spec (``"family"`` key, optional
    ``"collapsed": true``), a dented hexagon (``"type": "H"`` or ``"H'"``),
    a raw region (``"tris"``), or a named shape (``"shape"`` one of
    hexagon, trapezoid, quartered).
    """
    if not isinstance(d, dict):
        raise ValueError("a region spec must be a JSON object")
    if "family" in d:
        fs = FamilySpec.from_json(d)
        canon = fs.to_json()
        if d.get("collapsed"):
            canon["collapsed"] = True
            return canon, family_collapsed(fs), None
        return canon, family_region(fs), None
    if "type" in d:
        spec = HSpec.from_json(d)
        return spec.to_json(), hex_intrusion(spec), spec
    if "tris" in d:
        r = Region.from_json(d)
        return r.to_json(), r, None
    shape = d.get("shape")
    if shape == "hexagon":
        a, b, c = (int(d[k]) for k in "abc")
        k, xy = int(d.get("k", 0)), bool(d.get("xy", False))
        return {"shape": shape, "a": a, "b": b, "c": c, "k": k, "xy": xy}, hexagon(a, b, c, k, xy), None
    if shape == "trapezoid":
        x, y = int(d["x"]), int(d["y"])
        k, xy = int(d.get("k", 0)), bool(d.get("xy", False))
        if "W" in d:
            W = sorted(int(v) for v in d["W"])
            canon = {"shape": shape, "x": x, "y": y, "W": W, "k": k, "xy": xy}
            return canon, trapezoid_w(x, y, W, k, xy), None
        Z = sorted(int(v) for v in d.get("Z", ()))
        canon = {"shape": shape, "x": x, "y": y, "Z": Z, "k": k, "xy": xy}
        return canon, trapezoid(x, y, Z, k, xy), None
    if shape == "quartered":
        x, width = int(d["x"]), int(d["width"])
        Z = sorted(int(v) for v in d.get("Z", ()))
        return {"shape": shape, "x": x, "width": width, "Z": Z}, quartered(x, width, Z), None
    raise ValueError("unrecognised region spec")


def _qrat_json(v) -> dict:
    if isinstance(v, QPoly):
        v = QRat(v)
    out = {"num": v.num.to_list(), "den": v.den.to_list()}
    try:
        out["at_q1"] = str(v.eval_at(1))
    except ZeroDivisionError:
        pass
    return out


# subcommands


def cmd_render(args) -> int:
    canon, region, _ = parse_spec(load_json(args.region))
    fmt = args.format or ("svg" if args.out and args.out.endswith(".svg") else "text")
    if fmt == "svg":
        text = render_svg(region)
    elif fmt == "json":
        text = json.dumps({"spec": canon, "region": region.to_json()})
    else:
        text = render_ascii(region)
    _emit(text, args.out)
    return EXIT_OK


def cmd_tgf(args) -> int:
    _, region, spec = parse_spec(load_json(args.region))
    mode = args.mode or "symbolic"
    if mode.startswith("points:"):
        n = mode.split(":", 1)[1]
        if not n.isdigit() or int(n) < 1:
            raise UsageError(f"bad mode {mode!r}")
        vals = [str(engine.tgf_points(region, q)) for q in range(2, int(n) + 2)]
        out = {"points": {str(q): v for q, v in zip(range(2, int(n) + 2), vals)}}
    elif mode == "symbolic":
        p = _tgf(region, spec, args.engine)
        count = p.eval_at(1)
        out = {"tgf": p.to_list(), "count": int(count) if count.denominator == 1 else str(count)}
    else:
        raise UsageError(f"bad mode {mode!r}")
    if args.format == "text" and "tgf" in out:
        text = f"{json.dumps(out['tgf'])}\ncount {out['count']}"
    else:
        text = json.dumps(out)
    _emit(text, args.out)
    return EXIT_OK


def _tgf(region: Region, spec: HSpec | None, how: str) -> QPoly:
    if how == "split":
        if spec is None:
            raise UsageError("the diagonal split needs a dented hexagon spec")
        return formulas.diagonal_split_tgf(spec)
    if how == "both":
        a, b = engine.tgf_dp(region), engine.tgf_dfs(region)
        if a != b:
            raise _Disagree(a, b)
        return a
    return engine.tgf(region, how)


class _Disagree(Exception):
    def __init__(self, a, b):
        super().__init__("engines disagree")
        self.a, self.b = a, b


FORMULAS = ("macmahon", "hexagon", "trapezoid", "trapezoid-xy", "quartered", "thm31", "thm32", "shuffle", "thm34")


def cmd_formula(args) -> int:
    d = load_json(args.instance)
    name = args.name
    if name == "macmahon":
        out = {"value": formulas.macmahon(int(d["a"]), int(d["b"]), int(d["c"]))}
    elif name == "hexagon":
        v = formulas.hexagon_tgf(int(d["a"]), int(d["b"]), int(d["c"]), int(d.get("k", 0)), bool(d.get("xy")))
        out = _qrat_json(v)
    elif name == "trapezoid":
        out = _qrat_json(formulas.trapezoid_tgf(int(d["x"]), int(d["y"]), [int(v) for v in d.get("Z", ())]))
    elif name == "trapezoid-xy":
        W = [int(v) for v in d["W"]]
        out = _qrat_json(formulas.trapezoid_xy_tgf(int(d["x"]), int(d["y"]), W, int(d.get("k", 0))))
    elif name == "quartered":
        Z = [int(v) for v in d.get("Z", ())]
        out = _qrat_json(formulas.quartered_tgf(int(d["x"]), int(d["width"]), Z))
    elif name in ("thm31", "thm32", "shuffle"):
        spec = HSpec.from_json(d["spec"])
        if "flipped" in d:
            other = HSpec.from_json(d["flipped"])
            L2, R2 = other.L, other.R
        else:
            L2, R2 = tuple(d["L2"]), tuple(d["R2"])
        if name == "thm31":
            v = formulas.thm31_rhs(spec, L2, R2)
        elif name == "thm32":
            v = formulas.thm32_rhs(spec, L2, R2)
        else:
            v = formulas.shuffle_rhs(spec, HSpec(spec.n, spec.m, spec.a, spec.b, spec.c, L2, R2, spec.B, spec.even))
        out = _qrat_json(v)
    elif name == "thm34":
        fs = FamilySpec.from_json(d["family"] if isinstance(d.get("family"), dict) else d)
        variant, d_y = d.get("variant", "statement"), d.get("d_y", "corrected")
        out = {"rhs": _qrat_json(formulas.thm34_rhs(fs, variant, d_y))}
        if d.get("lhs"):
            out["lhs"] = _qrat_json(formulas.thm34_lhs(fs))
    else:
        raise UsageError(f"unknown formula {name!r}; choose from {', '.join(FORMULAS)}")
    _emit(json.dumps(out), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.suite not in verify.SUITES:
        raise UsageError(f"unknown suite {args.suite!r}")
    cfg = verify.SuiteConfig(
        suite=args.suite, max=args.max, samples=args.samples, seed=args.seed,
        mode=args.mode or "symbolic", engine=args.engine,
        variant=args.variant, d_y=args.d_y, rhs=args.rhs, jobs=args.jobs,
    )
    try:
        cfg.points()
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    report = verify.check(cfg)
    data = report.to_json()
    if args.format == "text":
        c = report.counts
        lines = [f"{report.suite}: pass {c['pass']} fail {c['fail']} skip {c['skip']} ({report.wall_ms} ms)"]
        lines += [f"  note: {n}" for n in report.notes]
        lines += [f"  {k}: {v}" for k, v in report.breakdown.items()]
        text = "\n".join(lines)
    else:
        text = json.dumps(data)
    _emit(text, args.out)
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_replay(args) -> int:
    w = load_json(args.witness)
    if "failures" in w:
        # a whole report: replay every stored failure
        items = [{"suite": w["suite"], "config": w["config"], "instance": f["instance"]} for f in w["failures"]]
    else:
        items = [w]
    results = []
    for item in items:
        if item.get("suite") not in verify.SUITES:
            raise UsageError(f"unknown suite {item.get('suite')!r}")
        results.append(verify.replay(item))
    _emit(json.dumps(results if len(results) != 1 else results[0]), args.out)
    return EXIT_FAIL if any(r["status"] == "fail" for r in results) else EXIT_OK


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text + "\n", encoding="utf-8")
    else:
        sys.stdout.write(text + "\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="tilinglab", description="Lozenge tilings with q-weights on the triangular lattice.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, region=True):
        if region:
            sp.add_argument("--region", "--instance", dest="region", required=True,
                            help="region spec as JSON or @file")
        sp.add_argument("--out", help="write output here instead of stdout")
        sp.add_argument("--format", choices=["json", "text", "svg"])

    sp = sub.add_parser("render", help="draw a region")
    common(sp)
    sp.set_defaults(func=cmd_render)

    sp = sub.add_parser("tgf", help="tiling generating function of a region")
    common(sp)
    sp.add_argument("--engine", choices=["dfs", "dp", "split", "both"], default="dp")
    sp.add_argument("--mode", help="symbolic (default) or points:N")
    sp.set_defaults(func=cmd_tgf)

    sp = sub.add_parser("formula", help="evaluate a closed form")
    sp.add_argument("name", choices=FORMULAS)
    sp.add_argument("--instance", "--region", dest="instance", required=True, help="arguments as JSON or @file")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_formula)

    sp = sub.add_parser("verify", help="run a verification suite")
    sp.add_argument("--suite", required=True)
    sp.add_argument("--max", type=int)
    sp.add_argument("--samples", type=int)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--mode", help="symbolic, points:N or points:auto")
    sp.add_argument("--engine", choices=["dfs", "dp", "split", "both"], default="dp")
    sp.add_argument("--variant", choices=["statement", "proof", "both"], default="statement")
    sp.add_argument("--d-y", dest="d_y", choices=["corrected", "printed", "both"], default="corrected")
    sp.add_argument("--rhs", choices=["closed", "engine"], default="closed")
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--out")
    sp.add_argument("--format", choices=["json", "text"], default="json")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("replay", help="re-run a stored failure witness or report")
    sp.add_argument("--witness", required=True, help="witness or report JSON, or @file")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_replay)
    return p


def _error(kind: str, exc: BaseException, code: int, **extra) -> int:
    sys.stderr.write(json.dumps({"error": kind, "message": str(exc), **extra}) + "\n")
    return code


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        return _error("usage", exc, EXIT_USAGE)
    except engine.CapExceeded as exc:
        return _error("cap", exc, EXIT_CAP)
    except _Disagree as exc:
        return _error("engines", exc, EXIT_FAIL, dp=exc.a.to_list(), dfs=exc.b.to_list())
    except (ValueError, KeyError, TypeError, OSError) as exc:
        # json.JSONDecodeError is a ValueError
        return _error("spec", exc, EXIT_USAGE)


if __name__ == "__main__":
    sys.exit(main())
