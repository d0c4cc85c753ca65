"""Command-line runner: ``sumlab verify``, ``sumlab sweep`` and ``sumlab list``.

Exit status is 0 when every report passed, 1 when any failed and 2 for
usage or input errors (reported as a JSON object on stderr).
"""
import argparse
import json
import math
import os
from pathlib import Path
import sys

import numpy as np
import yaml

from .identities import IDENTITIES, get_identity, resolve
from .report import VARIANTS
from .transforms import REGISTRY, SMOOTHING_MODES

REPORT_DIR_ENV = "SUMLAB_REPORT_DIR"


class UsageError(Exception):
    pass


def _key_values(items):
    out = {}
    for item in items or ():
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise UsageError(f"expected KEY=VALUE, got {item!r}")
        out[key] = yaml.safe_load(value) if value else value
    return out


def _load_config(path):
    if path is None:
        return {}
    with open(path, encoding="utf-8") as fh:
        data = yaml.safe_load(fh) or {}
    if not isinstance(data, dict):
        raise UsageError(f"config file {path} must hold a mapping")
    return data


def build_run_config(args):
    """Merge config file values with command-line flags (flags win)."""
    cfg = _load_config(args.config)
    identity = args.identity or cfg.get("identity")
    if not identity:
        raise UsageError("no identity given")
    params = dict(cfg.get("params") or {})
    params.update({k: cfg[k] for k in ("x", "z") if k in cfg})
    for name in ("x", "z"):
        if getattr(args, name) is not None:
            params[name] = getattr(args, name)
    params.update(_key_values(args.set))
    contour = dict(cfg.get("contour") or {})
    for key, flag in (("c", args.c), ("T", args.height), ("h", args.step)):
        if flag is not None:
            contour[key] = flag
    series = dict(cfg.get("series") or {})
    for key, flag in (("N", args.N), ("smoothing", args.smoothing), ("delta", args.delta)):
        if flag is not None:
            series[key] = flag
    fn_params = dict(cfg.get("function_params") or {})
    fn_params.update(_key_values(args.fn_param))
    return {
        "identity": identity,
        "function": args.fn or cfg.get("function", "gaussian"),
        "function_params": fn_params,
        "params": params,
        "contour": contour,
        "series": series,
        "tolerance": args.tol if args.tol is not None else cfg.get("tolerance", cfg.get("tol")),
        "variant": args.variant or cfg.get("variant", "printed"),
        "output": args.out or cfg.get("output"),
        "sweep": cfg.get("sweep"),
    }


def _resolve(config):
    return resolve(
        config["identity"],
        function=config["function"],
        function_params=config["function_params"],
        params=config["params"],
        contour=config["contour"],
        series=config["series"],
        tolerance=config["tolerance"],
        variant=config["variant"],
    )


def run(config):
    """Run one identity; returns its reports."""
    call = _resolve(config)
    return get_identity(config["identity"]).runner(call)


def sweep(config, parameter, factor, steps):
    """Geometric sweep of N, T or h; returns (reports, fitted log-log slope)."""
    if parameter not in ("N", "T", "h"):
        raise UsageError("sweep parameter must be N, T or h")
    if steps < 1 or not factor > 0:
        raise UsageError("sweep needs steps >= 1 and factor > 0")
    call = _resolve(config)
    if parameter == "N":
        base = call.series.cutoff
    else:
        if call.contour is None:
            raise UsageError(f"{config['identity']} has no contour to sweep")
        base = call.contour.height if parameter == "T" else call.contour.step
    reports, values = [], []
    for k in range(steps):
        value = base * factor**k
        step_cfg = {**config, "contour": dict(config["contour"]), "series": dict(config["series"])}
        if parameter == "N":
            value = int(round(value))
            step_cfg["series"]["N"] = value
        elif parameter == "T":
            step_cfg["contour"]["T"] = value
        else:
            step_cfg["contour"]["h"] = value
        reports.append(run(step_cfg)[0])
        values.append(value)
    return reports, convergence_order(values, [r.abs_err for r in reports])


def convergence_order(values, errors):
    """Slope of log(error) against log(parameter); None when undefined."""
    pts = [(math.log(v), math.log(e)) for v, e in zip(values, errors) if e > 0 and v > 0]
    if len(pts) < 2 or len({p[0] for p in pts}) < 2:
        return None
    x, y = np.array(pts).T
    return float(np.polyfit(x, y, 1)[0])


def list_identities():
    return [
        {"id": i.id, "anchor": i.anchor, "params": list(i.params), "tolerance": i.tolerance,
         "uses_function": i.uses_function, "variants": list(VARIANTS) if i.has_variant else []}
        for i in IDENTITIES.values()
    ]


def _output_path(config, suffix=""):
    if config["output"]:
        return Path(config["output"])
    directory = os.environ.get(REPORT_DIR_ENV)
    if directory:
        return Path(directory) / f"{config['identity']}{suffix}.json"
    return None


def _write(path, document):
    if path is None:
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    text = json.dumps(document, indent=2, allow_nan=True)
    path.write_text(text + "\n", encoding="utf-8")


def _add_run_flags(p):
    p.add_argument("identity", nargs="?", help="identity id (see 'sumlab list')")
    p.add_argument("--config", help="YAML run configuration")
    p.add_argument("--fn", help=f"test function label ({', '.join(sorted(REGISTRY))})")
    p.add_argument("--fn-param", action="append", metavar="KEY=VALUE", help="test function parameter")
    p.add_argument("--set", action="append", metavar="KEY=VALUE", help="identity parameter")
    p.add_argument("--x", type=str)
    p.add_argument("--z", type=str)
    p.add_argument("--c", type=float, help="contour abscissa")
    p.add_argument("--height", type=float, help="contour half-height T")
    p.add_argument("--step", type=float, help="contour step h")
    p.add_argument("--N", type=int, help="series cutoff")
    p.add_argument("--smoothing", choices=SMOOTHING_MODES)
    p.add_argument("--delta", type=float, help="Abel smoothing parameter")
    p.add_argument("--tol", type=float)
    p.add_argument("--variant", choices=VARIANTS)
    p.add_argument("--out", help="report path (default: $%s/<id>.json if set)" % REPORT_DIR_ENV)


def make_parser():
    parser = argparse.ArgumentParser(prog="sumlab", description="Two-route checks of summation identities.")
    sub = parser.add_subparsers(dest="command", required=True)
    _add_run_flags(sub.add_parser("verify", help="evaluate both sides of one identity"))
    sw = sub.add_parser("sweep", help="geometric sweep of N, T or h")
    _add_run_flags(sw)
    sw.add_argument("--param", dest="sweep_param", choices=("N", "T", "h"))
    sw.add_argument("--factor", type=float)
    sw.add_argument("--steps", type=int)
    ls = sub.add_parser("list", help="registered identities")
    ls.add_argument("--machine", action="store_true", help="emit JSON")
    return parser


def _print_table(rows):
    width = max(len(r["id"]) for r in rows)
    for r in rows:
        params = ", ".join(r["params"]) or "-"
        print(f"{r['id']:<{width}}  tol={r['tolerance']:.0e}  params: {params:<12}  {r['anchor']}")


def main(argv=None):
    parser = make_parser()
    args = parser.parse_args(argv)
    if args.command == "list":
        rows = list_identities()
        if args.machine:
            print(json.dumps(rows, indent=2))
        else:
            _print_table(rows)
        return 0
    try:
        config = build_run_config(args)
        if args.command == "verify":
            reports = run(config)
            document = reports[0].to_dict() if len(reports) == 1 else {"reports": [r.to_dict() for r in reports]}
            _write(_output_path(config), document)
        else:
            block = config["sweep"] or {}
            parameter = args.sweep_param or block.get("parameter")
            factor = args.factor if args.factor is not None else block.get("factor")
            steps = args.steps if args.steps is not None else block.get("steps")
            if parameter is None or factor is None or steps is None:
                raise UsageError("sweep needs --param, --factor and --steps (or a sweep block)")
            reports, order = sweep(config, parameter, float(factor), int(steps))
            document = {"parameter": parameter, "factor": float(factor), "convergence_order": order,
                        "reports": [r.to_dict() for r in reports]}
            _write(_output_path(config, "-sweep"), document)
            print(f"convergence order in {parameter}: {order if order is None else f'{order:.2f}'}")
    except (UsageError, KeyError, ValueError, TypeError, OSError, yaml.YAMLError) as exc:
        message = exc.args[0] if isinstance(exc, KeyError) and exc.args else str(exc)
        print(json.dumps({"error": type(exc).__name__, "message": message}), file=sys.stderr)
        return 2
    for r in reports:
        print(r.summary())
    return 0 if all(r.passed for r in reports) else 1


if __name__ == "__main__":
    sys.exit(main())
