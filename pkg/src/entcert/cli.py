"""``entcert`` command-line tool.

Subcommands: estimate, rates, coverage, maxent, lowerbound.  Flags may also
come from a flat ``key=value`` config file (``--config``); explicit flags win.

Exit codes: 0 success, 2 validation failure, 3 numeric failure.  Failures
print a one-line JSON object ``{"error": ..., "message": ...}`` on stdout.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import lab
from .bounds import DEFAULT_WY_C, DegenerateConstructionError
from .certify import CertificateError, IngestError, certificate, certificate_best_alpha, ingest
from .dist_core import DivergenceInfiniteError, InvariantError
from .info_moments import OptimizationError, max_alpha_entropy_bounds

EXIT_OK, EXIT_INVALID, EXIT_NUMERIC = 0, 2, 3


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad flags already; route the message through JSON too
    def error(self, message):
        raise UsageError(message)


def _float_list(text):
    return [float(t) for t in text.split(",") if t.strip()]


def _int_list(text):
    out = []
    for t in text.split(","):
        t = t.strip()
        if not t:
            continue
        if "-" in t[1:]:
            lo, hi = t.split("-", 1)
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(t))
    return out


def read_config(path) -> dict:
    """Flat ``key=value`` file; ``#`` starts a comment, dashes in keys become underscores."""
    conf = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        conf[key.lstrip("-").replace("-", "_")] = value
    return conf


def _add_family(p, families=("uniform", "mixture", "zeta")):
    p.add_argument("--family", choices=families, required=True)
    p.add_argument("--k", type=int, default=10, help="uniform support size")
    p.add_argument("--d", type=int, default=10, help="mixture: size of the heavy block")
    p.add_argument("--D", type=int, default=1000, help="mixture: size of the light block")
    p.add_argument("--p", type=float, default=0.95, help="mixture: mass of the heavy block")
    p.add_argument("--q", type=float, default=2.0, help="zeta exponent")


def _family_kw(args):
    return {"k": args.k, "d": args.d, "D": args.D, "p": args.p, "q": args.q}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--config", type=Path)
    common.add_argument("--output", type=Path, help="write here instead of stdout")

    parser = _Parser(prog="entcert", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("estimate", parents=[common], help="plug-in entropy with a certificate")
    p.add_argument("--input", type=Path, required=True)
    p.add_argument("--format", choices=("samples", "counts"), default="samples")
    p.add_argument("--alpha", type=float)
    p.add_argument("--h", type=float, help="assumed bound on H_alpha")
    p.add_argument("--alpha-grid", type=_float_list)
    p.add_argument("--h-table", type=_float_list,
                   help="one h per --alpha-grid entry, same order")
    p.add_argument("--h-from-support", type=int, metavar="K",
                   help="take h as the max-H_alpha upper bound for support size K")
    p.add_argument("--delta", type=float, default=0.05)

    p = sub.add_parser("rates", parents=[common], help="rate curves as CSV")
    _add_family(p, ("uniform", "mixture", "zeta"))
    p.add_argument("--bounds", default="our,wy,ct")
    p.add_argument("--n-grid", default="1e2:1e7:26")
    p.add_argument("--grid-scale", choices=("log", "linear"), default="log")
    p.add_argument("--wy-c", type=float, default=DEFAULT_WY_C)

    p = sub.add_parser("coverage", parents=[common], help="Monte-Carlo certificate coverage")
    _add_family(p)
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--alpha", type=float, default=2.0)
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--trials", type=int, default=500)
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("maxent", parents=[common], help="max H_alpha table as CSV")
    p.add_argument("--k-list", type=_int_list, default=_int_list("2-16"),
                   help="comma list, ranges like 2-64 allowed")
    p.add_argument("--alpha-list", type=_float_list, default=_float_list("1,1.5,2,3"))

    p = sub.add_parser("lowerbound", parents=[common], help="lower-bound construction report")
    p.add_argument("--kind", choices=("noemp", "minimax"), required=True)
    p.add_argument("--h", type=float, default=1.5)
    p.add_argument("--alpha", type=float, default=2.0)
    p.add_argument("--n", type=int, default=4)
    return parser


def _config_path(argv):
    for i, tok in enumerate(argv):
        if tok == "--config" and i + 1 < len(argv):
            return argv[i + 1]
        if tok.startswith("--config="):
            return tok.split("=", 1)[1]
    return None


def _apply_config(parser, argv):
    """Parse ``argv`` with config-file values installed as subcommand defaults."""
    argv = list(sys.argv[1:] if argv is None else argv)
    path = _config_path(argv)
    command = next((t for t in argv if t in COMMANDS), None)
    if path is None or command is None:
        return parser.parse_args(argv)
    try:
        conf = read_config(path)
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc.strerror}") from None
    subparser = parser._subparsers._group_actions[0].choices[command]
    known = {a.dest: a for a in subparser._actions}
    defaults = {}
    for key, raw in conf.items():
        if key not in known or key in ("config", "help"):
            raise UsageError(f"{path}: unknown key {key!r} for {command}")
        action = known[key]
        value = action.type(raw) if action.type else raw
        if action.choices is not None and value not in action.choices:
            raise UsageError(f"{path}: {key}={raw} not in {sorted(action.choices)}")
        defaults[key] = value
        # the config file satisfies a required flag
        action.required = False
    subparser.set_defaults(**defaults)
    return parser.parse_args(argv)


def _json(obj) -> str:
    return json.dumps(obj, allow_nan=False, ensure_ascii=False) + "\n"


def _h_source(args):
    """Callable alpha -> h from --h/--h-table or from a support bound."""
    if args.h_from_support is not None:
        if args.h is not None or args.h_table is not None:
            raise UsageError("--h-from-support excludes --h and --h-table")
        K = args.h_from_support
        return lambda a: max_alpha_entropy_bounds(K, a)[1]
    if args.alpha_grid is not None:
        if args.h_table is None or len(args.h_table) != len(args.alpha_grid):
            raise UsageError("--alpha-grid needs --h-table with one value per grid point")
        return dict(zip(args.alpha_grid, args.h_table)).__getitem__
    if args.h is None:
        raise UsageError("estimate needs --h, --h-table or --h-from-support")
    return lambda a: args.h


def cmd_estimate(args) -> str:
    emp = ingest(args.input, args.format)
    h_of = _h_source(args)
    if args.alpha_grid is not None:
        cert = certificate_best_alpha(emp, h_of, args.delta, args.alpha_grid)
        out = cert.to_dict()
        out["candidates"] = [list(c) for c in cert.diagnostics["candidates"]]
        return _json(out)
    if args.alpha is None:
        raise UsageError("estimate needs --alpha or --alpha-grid")
    return _json(certificate(emp, args.alpha, h_of(args.alpha), args.delta).to_dict())


def cmd_rates(args) -> str:
    ns = lab.parse_n_grid(args.n_grid, args.grid_scale)
    names = [b.strip().lower() for b in args.bounds.split(",") if b.strip()]
    curves = lab.rate_curves(args.family, ns, names, C=args.wy_c, **_family_kw(args))
    return lab.rates_csv(curves)


def cmd_coverage(args) -> str:
    dist = lab.build_family(args.family, **_family_kw(args))
    report = {"family": args.family, **lab.family_params(args.family, **_family_kw(args))}
    report.update(lab.coverage(dist, args.n, args.alpha, args.delta, args.trials,
                               args.seed, workers=args.workers))
    return _json(report)


def cmd_maxent(args) -> str:
    return lab.maxent_csv(lab.maxent_rows(args.k_list, args.alpha_list))


def cmd_lowerbound(args) -> str:
    if args.kind == "noemp":
        return _json(lab.noemp_report(args.h, args.n))
    return _json(lab.minimax_report(args.alpha, args.n))


COMMANDS = {
    "estimate": cmd_estimate,
    "rates": cmd_rates,
    "coverage": cmd_coverage,
    "maxent": cmd_maxent,
    "lowerbound": cmd_lowerbound,
}


def _fail(kind, exc, code, **extra):
    payload = {"error": kind, "message": str(exc), **extra}
    sys.stdout.write(_json(payload))
    return code


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = _apply_config(parser, argv)
        text = COMMANDS[args.command](args)
    except IngestError as exc:
        return _fail("ingest", exc, EXIT_INVALID, line=exc.line)
    except CertificateError as exc:
        return _fail("precondition", exc, EXIT_INVALID, **exc.details)
    except (OptimizationError, FloatingPointError, OverflowError) as exc:
        return _fail("numeric", exc, EXIT_NUMERIC)
    except (UsageError, DegenerateConstructionError, InvariantError,
            DivergenceInfiniteError, ValueError, OSError) as exc:
        return _fail("invalid", exc, EXIT_INVALID)
    if args.output is not None:
        args.output.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
