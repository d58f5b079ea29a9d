"""Command-line interface.

    polyfunctors decompose 3
    polyfunctors shift '{"const":0,"schur":[[[2],1]]}' 1
    polyfunctors order '{"schur":[[[1,1],1]]}' '{"schur":[[[2],1],[[1,1],1]]}'
    polyfunctors eval map.dsl bindings.json
    polyfunctors equivariance map.dsl --n 3 --m 2 --trials 50 --seed 1
    polyfunctors determinacy experiment.json --format csv
    polyfunctors examples-list

Errors are reported as a JSON object on stderr with a nonzero exit status.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from . import catalog
from .dsl import DslError, parse
from .functors import PolynomialFunctor, compare, schur_weyl, shift
from .subsets import DEFAULT_BUDGET, determinacy_experiment
from .tensors import DenseTensor, rational
from .transform import check_equivariance, homogeneity_report


class ConfigError(Exception):
    pass


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """Raises instead of exiting so usage errors get the JSON error format."""

    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _load_json_arg(text: str):
    """Inline JSON, or a path to a JSON file."""
    s = text.strip()
    if s.startswith("{") or s.startswith("["):
        return json.loads(s)
    return json.loads(Path(text).read_text())


def _load_functor(text: str) -> PolynomialFunctor:
    try:
        return PolynomialFunctor.from_json(_load_json_arg(text))
    except (ValueError, TypeError, OSError) as e:
        raise ConfigError(f"bad functor {text!r}: {e}") from e


def _read_dsl(path: str):
    return parse(Path(path).read_text())


def load_bindings(obj: dict) -> tuple[dict, int]:
    """Bindings and the common dimension from {"vars": {...}, "params": {...}}."""
    unknown = set(obj) - {"vars", "params"}
    if unknown:
        raise ConfigError(f"unknown binding fields: {sorted(unknown)}")
    bindings: dict = {}
    dims = set()
    for name, spec in obj.get("vars", {}).items():
        t = DenseTensor.from_json(spec)
        bindings[name] = t
        if t.degree:
            dims.add(t.dim)
    for name, value in obj.get("params", {}).items():
        bindings[name] = rational(value)
    if len(dims) > 1:
        raise ConfigError(f"bound tensors disagree on dimension: {sorted(dims)}")
    return bindings, dims.pop() if dims else 0


def _emit(obj, args, csv_rows=None):
    if getattr(args, "format", "json") == "csv" and csv_rows is not None:
        buf = io.StringIO()
        writer = csv.writer(buf)
        for row in csv_rows:
            writer.writerow(row)
        text = buf.getvalue()
    else:
        text = json.dumps(obj, indent=None if getattr(args, "compact", False) else 2) + "\n"
    out = getattr(args, "out", None)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_decompose(args):
    _emit(schur_weyl(args.d).to_json(), args)


def cmd_shift(args):
    _emit(shift(_load_functor(args.functor), args.u).to_json(), args)


def cmd_order(args):
    candidate, reference = _load_functor(args.candidate), _load_functor(args.reference)
    _emit({"verdict": compare(candidate, reference).value}, args)


def cmd_eval(args):
    t = _read_dsl(args.dsl)
    bindings, n = load_bindings(_load_json_arg(args.bindings))
    outputs = t.evaluate(bindings, n)
    _emit({"transformation": t.name, "n": n, "outputs": [o.to_json() for o in outputs]}, args)


def cmd_equivariance(args):
    t = _read_dsl(args.dsl)
    report = check_equivariance(t, args.n, args.m, args.trials, args.seed)
    _emit(report.to_json(), args)
    return 0 if report.ok else 1


def cmd_homogeneity(args):
    t = _read_dsl(args.dsl)
    report = homogeneity_report(t, n=args.n, seed=args.seed)
    _emit(report.to_json(), args)


CONFIG_FIELDS = {"subset", "n", "claimed_m", "samples", "budget", "seed"}


def load_experiment_config(obj: dict, overrides: dict | None = None) -> dict:
    if not isinstance(obj, dict):
        raise ConfigError("experiment config must be a JSON object")
    unknown = set(obj) - CONFIG_FIELDS
    if unknown:
        raise ConfigError(f"unknown config fields: {sorted(unknown)}")
    cfg = dict(obj)
    for k, v in (overrides or {}).items():
        if v is not None:
            cfg[k] = v
    for required in ("subset", "n", "seed"):
        if cfg.get(required) is None:
            raise ConfigError(f"config needs {required!r}")
    for k in ("n", "claimed_m", "samples", "budget", "seed"):
        if cfg.get(k) is not None and (not isinstance(cfg[k], int) or isinstance(cfg[k], bool)):
            raise ConfigError(f"{k!r} must be an integer")
    cfg.setdefault("samples", 100)
    cfg.setdefault("budget", DEFAULT_BUDGET)
    return cfg


def run_determinacy(cfg: dict):
    try:
        subset = catalog.get_subset(cfg["subset"], cfg.get("claimed_m"))
    except (KeyError, ValueError) as e:
        raise ConfigError(str(e.args[0] if e.args else e)) from e
    return determinacy_experiment(subset, cfg["n"], cfg["samples"], cfg["budget"], cfg["seed"])


def cmd_determinacy(args):
    try:
        raw = _load_json_arg(args.config)
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError(f"cannot read config: {e}") from e
    cfg = load_experiment_config(raw, {"seed": args.seed, "samples": args.samples, "budget": args.budget})
    report = run_determinacy(cfg)
    rows = [list(report.CSV_FIELDS), report.csv_row()]
    _emit(report.to_json(), args, rows)
    return 0


def cmd_examples_list(args):
    _emit({"subsets": catalog.DESCRIPTIONS}, args)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="polyfunctors", description="Polynomial functor algebra and determinacy experiments.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, fmt=False):
        sp.add_argument("--out", help="write output here instead of stdout")
        sp.add_argument("--compact", action="store_true", help="single-line JSON")
        if fmt:
            sp.add_argument("--format", choices=("json", "csv"), default="json")

    sp = sub.add_parser("decompose", help="Schur decomposition of T^(x)d")
    sp.add_argument("d", type=int)
    common(sp)
    sp.set_defaults(func=cmd_decompose)

    sp = sub.add_parser("shift", help="shift a functor over K^u")
    sp.add_argument("functor", help="functor JSON (inline or file)")
    sp.add_argument("u", type=int)
    common(sp)
    sp.set_defaults(func=cmd_shift)

    sp = sub.add_parser("order", help="compare a candidate functor with a reference functor")
    sp.add_argument("candidate")
    sp.add_argument("reference")
    common(sp)
    sp.set_defaults(func=cmd_order)

    sp = sub.add_parser("eval", help="evaluate a DSL transformation on JSON bindings")
    sp.add_argument("dsl")
    sp.add_argument("bindings", help="bindings JSON (inline or file)")
    common(sp)
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("equivariance", help="randomized exact equivariance check")
    sp.add_argument("dsl")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--trials", type=int, default=50)
    sp.add_argument("--seed", type=int, required=True)
    common(sp)
    sp.set_defaults(func=cmd_equivariance)

    sp = sub.add_parser("homogeneity", help="scaling and degree-split report")
    sp.add_argument("dsl")
    sp.add_argument("--n", type=int, default=2)
    sp.add_argument("--seed", type=int, required=True)
    common(sp)
    sp.set_defaults(func=cmd_homogeneity)

    sp = sub.add_parser("determinacy", help="run a determinacy experiment from a config file")
    sp.add_argument("config", help="experiment config JSON (inline or file)")
    sp.add_argument("--seed", type=int)
    sp.add_argument("--samples", type=int)
    sp.add_argument("--budget", type=int)
    common(sp, fmt=True)
    sp.set_defaults(func=cmd_determinacy)

    sp = sub.add_parser("examples-list", help="list catalog subsets")
    common(sp)
    sp.set_defaults(func=cmd_examples_list)
    return p


def _fail(kind: str, message: str, **extra) -> int:
    err = {"type": kind, "message": message}
    err.update(extra)
    sys.stderr.write(json.dumps({"error": err}) + "\n")
    return 2


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as e:
        return _fail("usage_error", str(e))
    try:
        return args.func(args) or 0
    except DslError as e:
        err = e.to_json()
        return _fail(err.pop("type"), err.pop("message"), **err)
    except ConfigError as e:
        return _fail("config_error", str(e))
    except (OSError, json.JSONDecodeError) as e:
        return _fail("io_error", str(e))
    except ValueError as e:
        return _fail("value_error", str(e))


if __name__ == "__main__":
    sys.exit(main())
