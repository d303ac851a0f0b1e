"""Command-line front end.

Every subcommand prints one JSON document ``{"header": ..., "result": ...}``
on stdout.  The header carries the timestamp and tool version; the result
is deterministic for identical inputs.  Files (CSV zero lists, plot data,
JSON reports) go to the output directory: ``--out``, else the ``out`` key of
the config file, else ``$HAMBURGER_OUT``, else ``./hamburger-out``.

Exit codes: 0 success, 2 input error, 3 numerical-integrity flag,
4 inapplicable hypothesis.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .dirichlet_algebra import OrdinaryDirichletSeries, convolve, divide
from .errors import (BoundaryTooCloseError, HamburgerError, IllConditionedError, PoleError,
                     PrecisionError, SelectorError)
from .hamburger_tester import (Status, pole_experiment, dual_polynomial_check,
                               ratio_polynomial_test)
from .laplace_measures import (DiscreteMeasure, MollifierRamp, interval_mass_from_laplace,
                               laplace_samples, required_precision, samples_from_json)
from .lfunction_engine import characters_mod, l_value, resolve, to_level_form
from .zero_locator import ZeroFlag, critical_line_zeros, plot_data_csv

EXIT_OK, EXIT_INPUT, EXIT_INTEGRITY, EXIT_INAPPLICABLE = 0, 2, 3, 4
OUT_ENV = "HAMBURGER_OUT"
T_CEILING = 60.0
CONFIG_KEYS = {"T", "n_max", "tol", "epsilon", "degree", "approximant", "out", "seed",
               "cases", "step"}


class InputError(Exception):
    pass


def parse_complex(text: str) -> complex:
    t = text.strip().replace(" ", "").replace("i", "j")
    try:
        return complex(t)
    except ValueError:
        raise InputError(f"cannot parse complex number {text!r}") from None


def load_config(path: str | None) -> dict[str, str]:
    """``key = value`` lines; ``#`` starts a comment."""
    if not path:
        return {}
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise InputError(f"cannot read config {path}: {exc}") from None
    out = {}
    for i, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InputError(f"{path}:{i}: expected 'key = value'")
        key, value = (p.strip() for p in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in CONFIG_KEYS:
            raise InputError(f"{path}:{i}: unknown key {key!r}")
        out[key] = value
    return out


def _json_default(o):
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    if isinstance(o, complex):
        return [o.real, o.imag]
    raise TypeError(f"not serialisable: {type(o)}")


def dump(doc) -> str:
    return json.dumps(doc, sort_keys=True, default=_json_default, allow_nan=False)


def _emit(command: str, result: dict) -> dict:
    doc = {
        "header": {
            "tool": "hamburger",
            "version": __version__,
            "command": command,
            "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
        },
        "result": result,
    }
    print(dump(doc))
    return doc


def _out_dir(args) -> Path:
    d = Path(args.out or os.environ.get(OUT_ENV) or "hamburger-out")
    d.mkdir(parents=True, exist_ok=True)
    return d


def _write(path: Path, text: str) -> str:
    path.write_text(text, encoding="utf-8", newline="\n")
    return str(path)


def _fname(label: str) -> str:
    return label.replace(".", "_")


# -- subcommands -----------------------------------------------------------

def cmd_eval(args) -> int:
    chi = resolve(args.selector)
    s = parse_complex(args.s)
    value, tail = l_value(chi, s, return_bound=True)
    desc, form = to_level_form(chi)
    try:
        fe = float(desc.residual(1 - s))  # L(s) against N^(1-s) gamma(1-s) L*(1-s)
    except PoleError:
        fe = None
    _emit("eval", {
        "selector": args.selector,
        "label": desc.name,
        "s": [s.real, s.imag],
        "value": [value.real, value.imag],
        "tail_bound": tail,
        "functional_equation_residual": fe,
        "N": [form.N.numerator, form.N.denominator],
        "parity": form.gamma.parity,
    })
    return EXIT_OK


def cmd_zeros(args) -> int:
    if not 0 < args.T <= T_CEILING:
        raise InputError(f"T must lie in (0, {T_CEILING:g}]")
    chi = resolve(args.selector)
    desc, _ = to_level_form(chi)
    zl = critical_line_zeros(desc, args.T, step=args.step)
    out = _out_dir(args)
    base = _fname(zl.label)
    csv_path = _write(out / f"{base}_zeros.csv", zl.to_csv())
    plot_path = _write(out / f"{base}_zeros_plot.csv", plot_data_csv([zl]))
    _emit("zeros", {
        **zl.summary(),
        "T_requested": args.T,
        "cross_check": "match" if zl.flag is ZeroFlag.OK else "mismatch",
        "diagnostics": zl.diagnostics,
        "ordinates": [e.ordinate for e in zl.entries],
        "max_residual": max((e.residual for e in zl.entries), default=0.0),
        "csv": csv_path,
        "plot_data": plot_path,
    })
    return EXIT_OK if zl.flag is ZeroFlag.OK else EXIT_INTEGRITY


def cmd_hamburger(args) -> int:
    chi, phi = resolve(args.selector1), resolve(args.selector2)
    L1, _ = to_level_form(chi)
    L2, _ = to_level_form(phi)
    verdict = ratio_polynomial_test(L1, L2, args.n_max, args.tol_coeff)
    result = {"pair": [L1.name, L2.name], "verdict": verdict.to_json(),
              "dual_check": None, "pole_experiment": None}
    code = EXIT_OK
    if verdict.status is Status.INAPPLICABLE:
        code = EXIT_INAPPLICABLE
        print(f"inapplicable: {verdict.reason}", file=sys.stderr)
    elif verdict.status is Status.VERIFIED:
        result["dual_check"] = dual_polynomial_check(verdict, L1, L2).to_json()
    elif chi.primitive and phi.primitive and args.T > 0:
        rep = pole_experiment(chi, phi, args.T, args.tol, args.n_max)
        result["pole_experiment"] = rep.to_json()
        out = _out_dir(args)
        result["plot_data"] = _write(out / f"zeros_{_fname(L1.name)}_{_fname(L2.name)}.csv",
                                     plot_data_csv([rep.zeros_1, rep.zeros_2]))
        if not rep.integrity_ok:
            code = EXIT_INTEGRITY
    out = _out_dir(args)
    result["report"] = str(out / f"hamburger_{_fname(L1.name)}_{_fname(L2.name)}.json")
    doc = _emit("hamburger", result)
    _write(Path(result["report"]), dump(doc["result"]) + "\n")
    return code


def _load_measure(path: str) -> dict:
    try:
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot parse measure file {path}: {exc}") from None
    if isinstance(obj, list):
        obj = {"atoms": obj}
    if not isinstance(obj, dict) or not ("atoms" in obj or "samples" in obj):
        raise InputError("measure file needs an 'atoms' list or a 'samples' table")
    return obj


def cmd_laplace_reconstruct(args) -> int:
    obj = _load_measure(args.measure_file)
    try:
        MollifierRamp(args.a, args.b, args.epsilon)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    truth = None
    ambiguous = False
    if "atoms" in obj:
        try:
            mu = DiscreteMeasure.from_json(obj["atoms"])
        except (TypeError, ValueError) as exc:
            raise InputError(f"bad atoms: {exc}") from None
        samples = laplace_samples(mu, args.degree,
                                  prec=required_precision(args.degree, args.approximant))
        tv = mu.total_variation
        truth = mu.mass(args.a, args.b)
        ramp = MollifierRamp(args.a, args.b, args.epsilon)
        ambiguous = any(ramp.ambiguous(t) for t, _ in mu.atoms)
    else:
        try:
            samples = samples_from_json(obj["samples"])
            tv = float(obj["total_variation"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"bad samples table: {exc}") from None
    rec = interval_mass_from_laplace(samples, args.a, args.b, args.epsilon, args.degree, tv,
                                     approximant=args.approximant)
    result = {**rec.to_json(), "interval": [args.a, args.b], "total_variation": tv,
              "boundary_ambiguous": ambiguous, "true_mass": None, "bound_satisfied": None}
    if truth is not None:
        result["true_mass"] = [truth.real, truth.imag]
        result["bound_satisfied"] = bool(abs(rec.estimate - truth) <= rec.error_bound)
    out = _out_dir(args)
    stem = Path(args.measure_file).stem
    result["report"] = str(out / f"laplace_{stem}.json")
    doc = _emit("laplace-reconstruct", result)
    _write(Path(result["report"]), dump(doc["result"]) + "\n")
    return EXIT_OK


def cmd_props(args) -> int:
    """Seeded randomised spot checks of the core identities."""
    rng = np.random.default_rng(args.seed)
    checks = []

    worst = 0.0
    for _ in range(args.cases):
        a = OrdinaryDirichletSeries.from_values(rng.normal(size=64) + 1j * rng.normal(size=64))
        bv = rng.normal(size=64) + 1j * rng.normal(size=64)
        bv[0] = 1.0
        b = OrdinaryDirichletSeries.from_values(bv)
        back = divide(convolve(a, b, 64), b, 64)
        worst = max(worst, float(np.max(np.abs(back.coeffs - a.coeffs))))
    checks.append({"name": "divide_inverts_convolve", "max_error": worst,
                   "passed": worst <= 1e-10})

    q = int(rng.integers(3, 40))
    ok = True
    for chi in characters_mod(q):
        for _ in range(args.cases):
            m, n = (int(v) for v in rng.integers(1, 10 * q, size=2))
            ang_mn, ang_m, ang_n = chi.angle(m * n), chi.angle(m), chi.angle(n)
            if ang_m is None or ang_n is None:
                ok &= ang_mn is None
            else:
                ok &= ang_mn == (ang_m + ang_n) % 1
    checks.append({"name": "character_multiplicativity", "modulus": q, "passed": bool(ok)})

    worst = 0.0
    for chi in (resolve("3.1"), resolve("4.1"), resolve("5.1")):
        desc, form = to_level_form(chi)
        s = rng.uniform(0, 1, args.cases) + 1j * rng.uniform(-20, 20, args.cases)
        worst = max(worst, float(np.max(desc.residual(s))))
    checks.append({"name": "functional_equation", "max_residual": worst, "passed": worst <= 1e-8})

    _emit("props", {"seed": args.seed, "cases": args.cases, "checks": checks,
                    "passed": all(c["passed"] for c in checks)})
    return EXIT_OK if all(c["passed"] for c in checks) else EXIT_INTEGRITY


# -- parser ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hamburger",
                                description="Dirichlet L-function uniqueness experiments.")
    p.add_argument("--config", help="key = value file overriding defaults")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--out", default=None, help=f"output directory (env {OUT_ENV})")
        return sp

    sp = common(sub.add_parser("eval", help="evaluate L(s, chi)"))
    sp.add_argument("selector", help="'q.index', 'q.even', 'q.odd' or 'zeta'")
    sp.add_argument("--s", required=True, help="complex point, e.g. 0.5+3i")
    sp.set_defaults(func=cmd_eval)

    sp = common(sub.add_parser("zeros", help="critical-line zeros up to height T"))
    sp.add_argument("selector")
    sp.add_argument("--T", type=float, default=30.0)
    sp.add_argument("--step", type=float, default=0.05, help="initial scan step")
    sp.set_defaults(func=cmd_zeros)

    sp = common(sub.add_parser("hamburger", help="ratio test, dual check and zero comparison"))
    sp.add_argument("selector1")
    sp.add_argument("selector2")
    sp.add_argument("--n-max", dest="n_max", type=int, default=64)
    sp.add_argument("--T", type=float, default=30.0)
    sp.add_argument("--tol", type=float, default=1e-4, help="zero matching tolerance")
    sp.add_argument("--tol-coeff", dest="tol_coeff", type=float, default=None,
                    help="coefficient tolerance (default 0 exact, 1e-9 floating)")
    sp.set_defaults(func=cmd_hamburger)

    sp = common(sub.add_parser("laplace-reconstruct", help="interval mass from Laplace samples"))
    sp.add_argument("measure_file")
    sp.add_argument("--a", type=float, required=True)
    sp.add_argument("--b", type=float, required=True)
    sp.add_argument("--epsilon", type=float, default=0.01)
    sp.add_argument("--degree", type=int, default=180)
    sp.add_argument("--approximant", choices=("chebyshev", "bernstein"), default="chebyshev")
    sp.set_defaults(func=cmd_laplace_reconstruct)

    sp = common(sub.add_parser("props", help="seeded randomised property checks"))
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--cases", type=int, default=20)
    sp.set_defaults(func=cmd_props)

    p.subcommands = sub.choices  # config defaults are applied per subcommand
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        first = parser.parse_args(argv)
        config = load_config(first.config)
        if config:
            sp = parser.subcommands[first.command]
            known = {a.dest for a in sp._actions}
            sp.set_defaults(**{k: v for k, v in config.items() if k in known})
            args = parser.parse_args(argv)
        else:
            args = first
        for name in ("tol", "epsilon", "T"):
            v = getattr(args, name, None)
            if v is not None and not v > 0:
                raise InputError(f"{name} must be positive")
        return args.func(args)
    except (InputError, SelectorError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (BoundaryTooCloseError, PrecisionError, IllConditionedError) as exc:
        print(f"numerical integrity: {exc}", file=sys.stderr)
        return EXIT_INTEGRITY
    except (HamburgerError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
