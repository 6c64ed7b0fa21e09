"""Command-line front end.

Subcommands: ``string {cone|polytope}``, ``degen {build|check}``,
``ghflow {run|limit}``, ``width report``, ``check all``.  Output is JSON
with sorted keys; rationals are ``"p/q"`` strings.  Exit codes: 0 success,
2 validation error, 3 numerical failure, 4 inconclusive search.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import exact

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3
EXIT_INCONCLUSIVE = 4


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_VALIDATION, kind: str = "ValidationError"):
        super().__init__(message)
        self.code = code
        self.kind = kind


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(message, EXIT_VALIDATION, "UsageError")


def _dumps(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True)


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return exact.fmt(obj)
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


def _emit(obj, out: str | None = None) -> None:
    text = _dumps(obj) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.replace(" ", "").split(",") if x != "")
    except ValueError:
        raise CliError(f"expected comma-separated integers, got {text!r}") from None


def _rationals(text: str) -> tuple[Fraction, ...]:
    try:
        return tuple(exact.frac(x) for x in text.replace(" ", "").split(",") if x != "")
    except (ValueError, ZeroDivisionError, TypeError):
        raise CliError(f"expected comma-separated rationals, got {text!r}") from None


def _load_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise CliError(f"file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise CliError(f"invalid JSON in {path}: {exc}") from None


# ---------------------------------------------------------------------------
# run configuration

_CONFIG_KEYS = {"rtol", "atol", "newton_tol", "blowup", "eps", "tol", "seed"}


def load_config(path: str | None) -> dict:
    if not path:
        return {}
    cfg = _load_json(path)
    if not isinstance(cfg, dict):
        raise CliError("config must be a JSON object")
    unknown = sorted(set(cfg) - _CONFIG_KEYS)
    if unknown:
        raise CliError(f"unknown config keys: {', '.join(unknown)}")
    for k, v in cfg.items():
        if k == "seed":
            if not isinstance(v, int):
                raise CliError("seed must be an integer")
        elif not (isinstance(v, (int, float)) and v > 0):
            raise CliError(f"{k} must be positive")
    return cfg


# ---------------------------------------------------------------------------
# string


def cmd_string(args) -> int:
    from .rootsys import build_root_system, weyl_dim
    from .strings import extended_string_cone, string_cone, string_polytope

    rs = build_root_system(args.type)
    word = _ints(args.word)
    if args.what == "cone":
        cone = extended_string_cone(rs, word).extended if args.extended else string_cone(rs, word)
        _emit(
            {
                "type": rs.type_label,
                "word": list(word),
                "extended": bool(args.extended),
                "dim": cone.cone_dim,
                "inequalities": cone.facet_inequalities(),
                "rays": cone.rays,
                "lineality": cone.lineality,
            },
            args.out,
        )
        return EXIT_OK
    if args.lam is None:
        raise CliError("--lambda is required for string polytope")
    lam = _rationals(args.lam)
    poly = string_polytope(rs, word, lam)
    out = {
        "lattice_points": poly.count_lattice_points(),
        "volume": poly.volume(),
        "weyl_dim": weyl_dim(rs, lam),
    }
    if args.verbose:
        m = len(word)
        out["dim"] = poly.dim
        out["vertices"] = [v[:m] for v in poly.vertices]
        out["points"] = [p[:m] for p in poly.lattice_points()]
    _emit(out, args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# degen


def _face_report(family) -> list[dict]:
    from .degen import image_faces, restrict_to_subspace, subfamily_ideal

    rows = []
    polys = family.polynomials()
    for face in image_faces(family):
        sub = subfamily_ideal(family, face)
        dropped_vanish = all(
            not restrict_to_subspace(p, sub.vanishing) for j, p in enumerate(polys) if j not in sub.kept
        )
        row = sub.to_json(family)
        row["face_rays"] = face.rays
        row["dropped_relations_vanish"] = dropped_vanish
        rows.append(row)
    return rows


def cmd_degen(args) -> int:
    from .degen import FamilyIdeal, builtin, initial_ideal_summary
    from .strings import good_valuation_check

    if args.what == "build":
        ex = builtin(args.example)
        fam = ex.family
        report = {
            "example": ex.name,
            "commentary": ex.commentary,
            "e": None if fam.e is None else list(fam.e),
            "t_exponents": [list(r) for r in fam.t_exponents],
            "relations": len(fam.relations),
        }
        if not fam.raw:
            report["initial_ideal"] = initial_ideal_summary(fam).to_json()
        if args.out:
            _emit(fam.to_json(), args.out)
        else:
            report["family"] = fam.to_json()
        _emit(report)
        return EXIT_OK
    fam = FamilyIdeal.from_json(_load_json(args.family))
    out = {"name": fam.name, "relations": len(fam.relations), "raw": fam.raw}
    if not fam.raw:
        out["initial_ideal"] = initial_ideal_summary(fam).to_json()
        out["valuation_check"] = good_valuation_check(fam.valuation).to_json()
        out["faces"] = _face_report(fam)
    _emit(out, args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# ghflow


def _parse_start(text: str, n: int) -> np.ndarray:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError:
        raise CliError(f"--start must be a JSON list, got {text!r}") from None
    if not isinstance(raw, list):
        raise CliError("--start must be a JSON list")
    vals = []
    for item in raw:
        if isinstance(item, list) and len(item) == 2:
            vals.append(complex(float(item[0]), float(item[1])))
        elif isinstance(item, (int, float)):
            vals.append(complex(item))
        elif isinstance(item, str):
            try:
                vals.append(complex(item.replace(" ", "")))
            except ValueError:
                raise CliError(f"cannot parse coordinate {item!r}") from None
        else:
            raise CliError(f"cannot parse coordinate {item!r}")
    if len(vals) != n + 1:
        raise CliError(f"--start needs {n + 1} entries (coordinates then t), got {len(vals)}")
    return np.array(vals, dtype=complex)


def _family_for_flow(args):
    from .degen import FamilyIdeal, builtin
    from .ghflow import NumericFamily

    if args.family and args.example:
        raise CliError("give either --family or --example")
    if args.family:
        fam = FamilyIdeal.from_json(_load_json(args.family))
    elif args.example:
        fam = builtin(args.example).family
    else:
        raise CliError("--family or --example is required")
    return NumericFamily.from_family(fam)


def _flow_options(cfg: dict):
    from .ghflow import FlowOptions

    kw = {k: cfg[k] for k in ("rtol", "atol", "newton_tol", "blowup") if k in cfg}
    return FlowOptions(**kw)


def cmd_flow(args) -> int:
    from .ghflow import check_invariants, integrate, limit_point, trajectory_report

    cfg = load_config(args.config)
    fam = _family_for_flow(args)
    x = _parse_start(args.start, fam.n)
    opts = _flow_options(cfg)
    if args.what == "run":
        tr = integrate(fam, x, args.t_end, opts, record_every=args.record_every)
        _emit(trajectory_report(tr, fam), args.report)
        if args.report:
            _emit({"report": args.report, "invariants": check_invariants(tr, fam).to_json()})
        return EXIT_OK
    eps = args.eps if args.eps is not None else cfg.get("eps", 1e-3)
    tol = cfg.get("tol", 1e-6)
    lim = limit_point(fam, x, eps=eps, tol=tol, opts=opts)
    out = lim.to_json()
    out["psi_start"] = fam.psi(x).tolist()
    out["psi_limit"] = fam.psi(lim.z).tolist()
    _emit(out, args.report)
    return EXIT_OK


# ---------------------------------------------------------------------------
# width


def cmd_width(args) -> int:
    from .rootsys import build_root_system
    from .width import width_report

    rs = build_root_system(args.type)
    word = _ints(args.word)
    lam = _rationals(args.lam)
    rep = width_report(rs, word, lam, delta=exact.frac(args.delta), depth=args.depth)
    for w in rep.warnings:
        sys.stderr.write(_dumps({"warning": w}) + "\n")
    _emit(rep.to_json(), args.out)
    if rep.embedding is not None and rep.embedding.status == "inconclusive":
        return EXIT_INCONCLUSIVE
    return EXIT_OK


# ---------------------------------------------------------------------------
# check


def cmd_check(args) -> int:
    from .selfcheck import run_all

    results = run_all(jobs=args.jobs)
    out = {"passed": all(r.passed for r in results), "checks": [r.to_json() for r in results]}
    if args.no_timing:
        for c in out["checks"]:
            c.pop("seconds")
    _emit(out, args.out)
    return EXIT_OK if out["passed"] else EXIT_NUMERICAL


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="toricdeg", description="String polytopes, Rees families and gradient-Hamiltonian flows.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    s = sub.add_parser("string", help="string cones and polytopes")
    s.add_argument("what", choices=["cone", "polytope"])
    s.add_argument("--type", required=True)
    s.add_argument("--word", required=True)
    s.add_argument("--lambda", dest="lam")
    s.add_argument("--extended", action="store_true")
    s.add_argument("--verbose", action="store_true", help="include vertices and lattice points")
    s.add_argument("--out")
    s.set_defaults(func=cmd_string)

    d = sub.add_parser("degen", help="Rees-algebra families")
    d.add_argument("what", choices=["build", "check"])
    d.add_argument("family", nargs="?")
    d.add_argument("--example")
    d.add_argument("--out")
    d.set_defaults(func=cmd_degen)

    g = sub.add_parser("ghflow", help="gradient-Hamiltonian flow")
    g.add_argument("what", choices=["run", "limit"])
    g.add_argument("--family")
    g.add_argument("--example")
    g.add_argument("--start", required=True)
    g.add_argument("--t-end", type=float, default=1e-3)
    g.add_argument("--eps", type=float)
    g.add_argument("--record-every", type=int, default=1)
    g.add_argument("--config")
    g.add_argument("--report")
    g.set_defaults(func=cmd_flow)

    w = sub.add_parser("width", help="Gromov-width lower bound report")
    w.add_argument("what", choices=["report"])
    w.add_argument("--type", required=True)
    w.add_argument("--word", required=True)
    w.add_argument("--lambda", dest="lam", required=True)
    w.add_argument("--delta", default="0")
    w.add_argument("--depth", type=int, default=3)
    w.add_argument("--out")
    w.set_defaults(func=cmd_width)

    c = sub.add_parser("check", help="run the end-to-end checks")
    c.add_argument("what", choices=["all"])
    c.add_argument("--jobs", type=int, default=int(os.environ.get("TORICDEG_JOBS", "1")))
    c.add_argument("--no-timing", action="store_true", help="omit timings for byte-stable output")
    c.add_argument("--out")
    c.set_defaults(func=cmd_check)
    return p


def main(argv=None) -> int:
    from .ghflow import FlowError

    try:
        args = build_parser().parse_args(argv)
        if args.command == "degen":
            if args.what == "build" and not args.example:
                raise CliError("degen build needs --example")
            if args.what == "check" and not args.family:
                raise CliError("degen check needs a family file")
        return args.func(args)
    except CliError as exc:
        code, kind, msg = exc.code, exc.kind, str(exc)
    except FlowError as exc:
        code, kind, msg = EXIT_NUMERICAL, type(exc).__name__, str(exc)
    except np.linalg.LinAlgError as exc:
        code, kind, msg = EXIT_NUMERICAL, type(exc).__name__, str(exc)
    except (ValueError, KeyError, OSError) as exc:
        code, kind, msg = EXIT_VALIDATION, type(exc).__name__, str(exc)
    sys.stderr.write(_dumps({"error": kind, "message": msg, "exit_code": code}) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
