"""Batch command-line front end.

Results go to stdout (JSON or CSV); a run manifest with the version, the
effective configuration, wall time and tolerances goes to stderr so that
stdout stays byte-identical between runs.  Exit codes: 0 success, 1 usage
or domain error, 2 numeric non-convergence.
"""

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from typing import Any, Dict, List, Optional, Sequence

from . import __version__
from ._kernels import BACKEND
from .errors import ConvergenceError, DomainError

CSV_DIGITS = 12


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _num(v: float) -> Any:
    """12 significant digits; non-finite values become strings."""
    v = float(v)
    if not math.isfinite(v):
        return str(v)
    return float(f"{v:.{CSV_DIGITS}g}")


def _clean(obj: Any) -> Any:
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return obj
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, complex):
        return {"re": _num(obj.real), "im": _num(obj.imag)}
    if hasattr(obj, "item"):     # numpy scalars
        return _clean(obj.item())
    return _num(obj)


def _emit_json(obj: Any, out) -> None:
    out.write(json.dumps(_clean(obj), indent=2, sort_keys=True) + "\n")


def _emit_csv(header: Sequence[str], rows: List[Sequence[Any]], out) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([f"{v:.{CSV_DIGITS}g}" if isinstance(v, float) else v for v in row])
    out.write(buf.getvalue())


def _floats(text: str) -> List[float]:
    try:
        return [float(x) for x in str(text).split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of numbers, got {text!r}")


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_constants(a, out, tol):
    from .special import const_c5, const_c6, const_c20, const_c21
    tol.update({"c6_prime_cutoff": a.P, "quad_epsrel": 1e-12})
    sig = [float(s) for s in a.c20_sigma]
    res = {"c5": const_c5(a.P), "c6": const_c6(a.P), "c21": const_c21(),
           "c20": {f"{s:g}": const_c20(s) for s in sig}}
    fmt = lambda v: f"{v:.12g}"
    _emit_json({"c5": fmt(res["c5"]), "c6": fmt(res["c6"]), "c21": fmt(res["c21"]),
                "c20": {k: fmt(v) for k, v in res["c20"].items()}}, out)


def cmd_identities(a, out, tol):
    from .analytic import identity_suite
    rep = identity_suite(seed=a.seed, triples=a.triples, P=a.P)
    tol.update({k: v["tolerance"] for k, v in rep.items()})
    _emit_json({"all_passed": all(v["passed"] for v in rep.values()), "checks": rep}, out)


def cmd_lvalue(a, out, tol):
    from .lfunc import L_direct, L_half_square, L_twisted_exp
    if a.method == "direct":
        r = L_direct(a.sigma, a.d, a.budget)
        tol["em_terms"] = 8
        _emit_json({"sigma": a.sigma, "d": a.d, "method": "direct", "value": r.value,
                    "error": r.error_estimate, "terms": r.terms_used}, out)
    elif a.method == "twisted":
        if a.x is None:
            raise DomainError("--method twisted needs --x")
        tol["weight_cutoff"] = a.tol
        v = L_twisted_exp(a.sigma, a.d, a.x, a.tol)
        Y = a.x ** 2
        # error is the dropped tail of the smoothed series, not the distance to L
        _emit_json({"sigma": a.sigma, "d": a.d, "method": "twisted", "x": a.x, "value": v,
                    "error": Y * a.tol, "terms": int(math.ceil(Y * math.log(1 / a.tol)))}, out)
    else:
        if a.sigma != 0.5:
            raise DomainError("--method half-square is at sigma = 1/2")
        tol["xi_max"] = 40.0
        v = L_half_square(a.d)
        _emit_json({"sigma": 0.5, "d": a.d, "discriminant": 8 * a.d, "method": "half-square",
                    "value": math.sqrt(v), "square": v, "error": None,
                    "terms": int(40.0 * 8 * a.d / math.pi)}, out)


def cmd_scan_min(a, out, tol):
    from .resonator import scan_min_L
    r = scan_min_L(a.sigma, a.x, threads=a.threads, top=a.top)
    tol["sign_certainty"] = "|L| > error estimate"
    if a.sigma == 0.5 and float(a.x).is_integer():
        from .cache import load_cached
        cached = load_cached("fd8", int(a.x))
        if len(cached) != r.scanned:
            raise ConvergenceError("cached family disagrees with the scanned window")
        tol["family_cache_count"] = len(cached)
    if a.out == "csv":
        _emit_csv(["d", "abs_L", "sign_certain"],
                  [(d, float(v), str(c).lower()) for d, v, c in r.entries], out)
    else:
        _emit_json(r.to_dict(), out)


def cmd_moments(a, out, tol):
    from .resonator import ResonatorSpec, moment_report
    regime = "center" if a.sigma == 0.5 else "right"
    spec = ResonatorSpec(regime, a.x, a.sigma, N=a.n, L=a.l_override)
    rep = moment_report(spec, threads=a.threads)
    _emit_json(rep.to_dict(), out)


def cmd_sono_m(a, out, tol):
    from .lfunc import sono_M
    v = sono_M(a.alpha1, a.alpha2, a.l, a.x)
    _emit_json({"alpha1": a.alpha1, "alpha2": a.alpha2, "l": a.l, "x": a.x, "value": v}, out)


def cmd_build_inert(a, out, tol):
    from .fields import build_inert_polynomial, zeta_field_sigma
    spec = build_inert_polynomial(a.degree, a.inert, seed=a.seed)
    r = zeta_field_sigma(spec, a.sigma, P=a.P)
    tol["prime_cutoff"] = a.P
    _emit_json({"field": spec.to_dict(), "zeta": r.to_dict()}, out)


def cmd_build_split(a, out, tol):
    from .fields import find_split_primes, zeta_field_sigma
    spec = find_split_primes(a.k, a.n)
    r = zeta_field_sigma(spec, a.sigma, P=a.P)
    tol["prime_cutoff"] = a.P
    _emit_json({"field": spec.to_dict(), "zeta": r.to_dict()}, out)


def cmd_neg_line(a, out, tol):
    from .fields import zeta_neg_line
    r = zeta_neg_line(complex(a.sigma_re, a.sigma_im), a.d)
    _emit_json(r.to_dict(), out)


def cmd_northcott(a, out, tol):
    from .fields import northcott_enumerate
    r = northcott_enumerate(a.s, a.bound)
    _emit_json(r.to_dict(), out)


def _density_rows(reports):
    return [(r.B, r.empirical, r.half_width, r.prediction) for r in reports]


def cmd_rand_euler(a, out, tol):
    from .randeuler import RandomEulerSpec, random_euler_density
    spec = RandomEulerSpec(a.sigma, a.y, a.samples, a.seed)
    reps = random_euler_density(spec, a.b, a.side, threads=a.threads)
    tol["half_width"] = "95% normal, 3/n when no hits"
    _emit_csv(["B", "empirical", "half_width", "prediction"], _density_rows(reps), out)


def cmd_density(a, out, tol):
    from .randeuler import empirical_density
    reps = empirical_density(a.sigma, a.x, a.b, a.side)
    _emit_csv(["B", "empirical", "half_width", "prediction"], _density_rows(reps), out)


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="quadzeta", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"quadzeta {__version__}")
    p.add_argument("--config", help="flat JSON object of flag values (command line wins)")
    p.add_argument("--cache-dir", help="cache directory (else $QUADZETA_CACHE_DIR)")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def add(name, fn, help_):
        s = sub.add_parser(name, help=help_)
        s.set_defaults(func=fn)
        return s

    s = add("constants", cmd_constants, "numeric constants c5, c6, c21, c20")
    s.add_argument("--P", type=int, default=10 ** 7)
    s.add_argument("--c20-sigma", type=_floats, default=[0.75])

    s = add("identities", cmd_identities, "run the exact identity suite")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--triples", type=_positive_int, default=10)
    s.add_argument("--P", type=int, default=10 ** 6)

    s = add("lvalue", cmd_lvalue, "one quadratic L-value")
    s.add_argument("--sigma", type=float, required=True)
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--method", choices=["direct", "twisted", "half-square"], default="direct")
    s.add_argument("--x", type=float)
    s.add_argument("--tol", type=float, default=1e-17)
    s.add_argument("--budget", type=int)

    s = add("scan-min", cmd_scan_min, "smallest |L| over the 8d window family")
    s.add_argument("--sigma", type=float, required=True)
    s.add_argument("--x", type=float, required=True)
    s.add_argument("--top", type=_positive_int, default=10)
    s.add_argument("--threads", type=_positive_int, default=1)
    s.add_argument("--out", choices=["csv", "json"], default="csv")

    s = add("moments", cmd_moments, "resonated first and second moments")
    s.add_argument("--sigma", type=float, required=True)
    s.add_argument("--x", type=float, required=True)
    s.add_argument("--n", type=_positive_int)
    s.add_argument("--l-override", type=float)
    s.add_argument("--threads", type=_positive_int, default=1)

    s = add("sono-m", cmd_sono_m, "smoothed twisted second moment")
    s.add_argument("--alpha1", type=float, default=0.0)
    s.add_argument("--alpha2", type=float, default=0.0)
    s.add_argument("--l", type=_positive_int, default=1)
    s.add_argument("--x", type=float, required=True)

    s = add("build-inert", cmd_build_inert, "field with the first n primes inert")
    s.add_argument("--degree", type=_positive_int, required=True)
    s.add_argument("--inert", type=_positive_int, required=True)
    s.add_argument("--sigma", type=float, default=2.0)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--P", type=int, default=20000)

    s = add("build-split", cmd_build_split, "multiquadratic field with the first n primes split")
    s.add_argument("--k", type=_positive_int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--sigma", type=float, default=2.0)
    s.add_argument("--P", type=int, default=20000)

    s = add("neg-line", cmd_neg_line, "quadratic Dedekind zeta at Re(s) < 0")
    s.add_argument("--sigma-re", type=float, required=True)
    s.add_argument("--sigma-im", type=float, default=0.0)
    s.add_argument("--d", type=int, required=True)

    s = add("northcott", cmd_northcott, "quadratic fields with |zeta_K(s)| <= bound")
    s.add_argument("--s", type=float, required=True)
    s.add_argument("--bound", type=float, required=True)

    s = add("rand-euler", cmd_rand_euler, "random Euler product tail densities")
    s.add_argument("--sigma", type=float, required=True)
    s.add_argument("--y", type=float, default=1000.0)
    s.add_argument("--samples", type=_positive_int, default=100000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--b", type=_floats, required=True)
    s.add_argument("--side", choices=["lower", "upper"], default="lower")
    s.add_argument("--threads", type=_positive_int, default=1)

    s = add("density", cmd_density, "empirical density over quadratic fields")
    s.add_argument("--sigma", type=float, required=True)
    s.add_argument("--x", type=float, required=True)
    s.add_argument("--b", type=_floats, required=True)
    s.add_argument("--side", choices=["lower", "upper"], default="lower")
    return p


def _prescan(argv: Sequence[str], commands) -> tuple:
    """(config path, subcommand) found in argv without full validation."""
    cfg, cmd, i = None, None, 0
    while i < len(argv):
        tok = argv[i]
        if tok == "--config" and i + 1 < len(argv):
            cfg = argv[i + 1]
            i += 2
            continue
        if tok.startswith("--config="):
            cfg = tok.split("=", 1)[1]
        elif tok == "--cache-dir":
            i += 2
            continue
        elif tok in commands and cmd is None:
            cmd = tok
            break
        i += 1
    return cfg, cmd


def _apply_config(parser: argparse.ArgumentParser, argv: Sequence[str]) -> argparse.Namespace:
    """Install values from a flat JSON config as defaults, then parse (command line wins)."""
    choices = parser._subparsers._group_actions[0].choices
    path, command = _prescan(argv, choices)
    if path is None or command is None:
        return parser.parse_args(argv)
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise UsageError(f"cannot read config: {e}")
    if not isinstance(cfg, dict) or any(isinstance(v, (dict, list)) for v in cfg.values()):
        raise UsageError("config must be a flat JSON object")
    sub = choices[command]
    known = {a.dest: a for a in sub._actions}
    defaults = {}
    for key, val in cfg.items():
        dest = key.lstrip("-").replace("-", "_")
        if dest in ("command", "config"):
            continue
        if dest == "cache_dir":
            parser.set_defaults(cache_dir=val)
            continue
        if dest not in known or dest == "help":
            raise UsageError(f"config key {key!r} is not a flag of {command}")
        act = known[dest]
        if act.type is not None and (isinstance(val, str) or act.type is _floats):
            try:
                val = act.type(str(val))
            except (ValueError, argparse.ArgumentTypeError) as e:
                raise UsageError(f"config key {key!r}: {e}")
        if act.choices is not None and val not in act.choices:
            raise UsageError(f"config key {key!r}: invalid choice {val!r}")
        defaults[dest] = val
        act.required = False
    sub.set_defaults(**defaults)
    return parser.parse_args(argv)


def main(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    out = stdout or sys.stdout
    err = stderr or sys.stderr
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        a = _apply_config(parser, argv)
        if not getattr(a, "command", None):
            parser.print_usage(err)
            raise UsageError("a subcommand is required")
    except UsageError as e:
        err.write(f"quadzeta: error: {e}\n")
        return 1
    except SystemExit as e:        # --help / --version
        return int(e.code or 0)
    if a.cache_dir:
        os.environ["QUADZETA_CACHE_DIR"] = a.cache_dir
    tol: Dict[str, Any] = {}
    config = {k: v for k, v in vars(a).items() if k != "func"}
    t0 = time.perf_counter()
    code = 0
    try:
        a.func(a, out, tol)
    except DomainError as e:
        err.write(f"quadzeta: error: {e}\n")
        code = 1
    except ConvergenceError as e:
        err.write(f"quadzeta: did not converge: {e}\n")
        code = 2
    manifest = {"tool_version": __version__, "backend": BACKEND, "config": config,
                "wall_time_s": round(time.perf_counter() - t0, 6), "tolerances": tol,
                "exit_code": code}
    err.write("manifest: " + json.dumps(_clean(manifest), sort_keys=True) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
