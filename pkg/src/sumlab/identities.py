"""Registry of verifiable identities keyed by stable string ids.

Each entry adapts a generic run description (test function label, numeric
parameters, contour, truncation, tolerance, variant) to the matching
verifier and returns a list of reports.
"""
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
import math

import yaml

from . import koshlyakov, motohashi, verifiers
from .arith import ArithmeticSequence, DivisorSet, named_sequence
from .report import VerificationReport
from .transforms import ContourSpec, SeriesSpec, get_function

NAMED_REALS = {"sqrt2": math.sqrt(2.0), "golden": (1 + math.sqrt(5.0)) / 2, "e": math.e, "pi": math.pi}


def parse_real(value):
    if isinstance(value, str):
        key = value.strip().lower()
        if key in NAMED_REALS:
            return NAMED_REALS[key]
        return float(key)
    return float(value)


def parse_complex(value):
    if isinstance(value, str):
        return complex(value.strip().replace(" ", "").replace("i", "j"))
    return complex(value)


def parse_int_list(value):
    if isinstance(value, str):
        return [int(v) for v in value.replace(" ", "").split(",") if v]
    if isinstance(value, (int, float)):
        return [int(value)]
    return [int(v) for v in value]


def parse_b(value, N):
    """``"1:1,2:-0.5"`` -> finitely supported b; anything else is a sequence label for a."""
    if isinstance(value, dict):
        return ArithmeticSequence.from_b({int(k): complex(v) for k, v in value.items()}, N, "custom")
    if isinstance(value, str) and ":" in value:
        pairs = (item.split(":") for item in value.replace(" ", "").split(",") if item)
        return ArithmeticSequence.from_b({int(k): complex(v) for k, v in pairs}, N, f"b={value}")
    return named_sequence(str(value), N)


@lru_cache(maxsize=None)
def defaults():
    text = resources.files("sumlab").joinpath("defaults.yaml").read_text()
    return yaml.safe_load(text)


DEFAULT_TOLERANCES = {k: float(v["tolerance"]) for k, v in defaults().items()}


@dataclass(frozen=True)
class Identity:
    id: str
    anchor: str
    params: tuple
    runner: object
    uses_function: bool = False
    has_variant: bool = True

    @property
    def tolerance(self):
        return DEFAULT_TOLERANCES[self.id]

    def default_contour(self):
        c = defaults()[self.id].get("contour")
        return ContourSpec(float(c["c"]), float(c["T"]), float(c["h"])) if c else None

    def default_series(self):
        d = defaults()[self.id]
        if "N" not in d:
            return None
        return SeriesSpec(int(d["N"]), d.get("smoothing", "none"))

    def default_params(self):
        return dict(defaults()[self.id].get("params", {}))


@dataclass
class Call:
    """Resolved inputs for one verifier invocation."""

    params: dict
    function: object
    contour: ContourSpec | None
    series: SeriesSpec | None
    tolerance: float
    variant: str


def _f(call):
    return call.function


def _run_muntz(call):
    return [verifiers.verify_muntz(_f(call), parse_real(call.params["x"]), call.contour, call.series,
                                   tol=call.tolerance)]


def _run_muntz2(call):
    return [verifiers.verify_muntz2(_f(call), parse_real(call.params["x"]), call.contour, call.series,
                                    variant=call.variant, tol=call.tolerance)]


def _run_poisson(call):
    return [verifiers.verify_poisson_cosine(_f(call), call.series.cutoff, tol=call.tolerance)]


def _run_berndt(call):
    N = call.series.cutoff
    seq = named_sequence(call.params["a"], N)
    S = DivisorSet.of(parse_int_list(call.params["S"]))
    return [verifiers.verify_berndt(seq, S, _f(call), call.series, variant=call.variant, tol=call.tolerance)]


def _run_theorem_1_1(call):
    seq = named_sequence(call.params["a"], call.series.cutoff)
    return [verifiers.verify_theorem_1_1(seq, _f(call), call.series, call.contour, tol=call.tolerance)]


def _run_davenport(call):
    seq = named_sequence(call.params["a"], call.series.cutoff)
    delta = call.params.get("delta")
    series = call.series if delta is None else call.series.with_(delta=float(delta))
    x = call.params["x"]
    x = parse_real(x) if isinstance(x, str) else x
    return [verifiers.verify_davenport(seq, x, series, variant=call.variant, tol=call.tolerance)]


def _run_voronoi(call):
    return [verifiers.verify_voronoi_sigma(_f(call), call.series, variant=call.variant,
                                           euler_shift=parse_real(call.params.get("euler_shift", 0.0)),
                                           tol=call.tolerance)]


def _run_theorem_1_3(call):
    seq = parse_b(call.params["b"], call.series.cutoff)
    return [verifiers.verify_theorem_1_3(seq, _f(call), call.series, call.contour, variant=call.variant,
                                         tol=call.tolerance)]


def _run_k24(call):
    x = parse_real(call.params["x"])
    return [koshlyakov.verify_koshlyakov_residue(x, variant=call.variant, tol=call.tolerance)]


def _run_k25(call):
    x = parse_real(call.params["x"])
    return [koshlyakov.verify_koshlyakov_contour(x, call.contour, variant=call.variant, tol=call.tolerance)]


def _run_mellin(call):
    return [koshlyakov.verify_koshlyakov_mellin(parse_complex(call.params["s"]), parse_real(call.params["z"]),
                                                variant=call.variant, tol=call.tolerance)]


def _run_theorem_2_1(call):
    seq = named_sequence(call.params["a"], call.series.cutoff)
    return [koshlyakov.verify_theorem_2_1(seq, parse_real(call.params["z"]), call.series, call.contour,
                                          variant=call.variant, tol=call.tolerance)]


def _run_beta(call):
    import time

    start = time.perf_counter()
    s, v = parse_complex(call.params["s"]), parse_complex(call.params["v"])
    res = motohashi.beta_integral(s, v)
    return [VerificationReport.build("beta_3_4", {"s": s, "v": v}, res.ratio, res.quadrature, call.tolerance,
                                     [("quadrature_error_estimate", res.error_estimate)], start=start)]


def _run_parseval(call):
    return [motohashi.parseval_check(parse_complex(call.params["a"]), parse_real(call.params["x"]), call.contour,
                                     variant=call.variant, tol=call.tolerance)]


def _run_rearrangement(call):
    inp = motohashi.MotohashiInput(parse_real(call.params["A"]), call.series, call.contour)
    return list(motohashi.verify_rearrangement(inp, int(call.params["M"]), call.variant,
                                               tol_r2_r3=call.tolerance,
                                               tol_r1_r2=parse_real(call.params["tol_r1_r2"])))


IDENTITIES = {
    i.id: i
    for i in (
        Identity("muntz", "Müntz formula (zeta times Mellin transform)", ("x",), _run_muntz, True, False),
        Identity("muntz2", "Müntz-type formula for the divisor function", ("x",), _run_muntz2, True),
        Identity("poisson_cosine", "Poisson summation for cosine transforms", (), _run_poisson, True, False),
        Identity("berndt", "Berndt's restricted-divisor summation formula", ("a", "S"), _run_berndt, True),
        Identity("theorem_1_1", "cosine-Müntz summation theorem", ("a",), _run_theorem_1_1, True, False),
        Identity("davenport", "Davenport's fractional-part Fourier series", ("a", "x"), _run_davenport),
        Identity("voronoi_sigma", "Voronoi summation for the divisor function", ("euler_shift",), _run_voronoi,
                 True),
        Identity("theorem_1_3", "divisor-weighted Voronoi-Müntz theorem", ("b",), _run_theorem_1_3, True),
        Identity("koshlyakov_2_4", "Koshlyakov residue relation across s = 1", ("x",), _run_k24),
        Identity("koshlyakov_2_5", "Koshlyakov function via the reflected contour", ("x",), _run_k25),
        Identity("mellin_2_2", "Mellin transform of the theta-built test function", ("s", "z"), _run_mellin),
        Identity("theorem_2_1", "Koshlyakov-function summation theorem", ("a", "z"), _run_theorem_2_1),
        Identity("beta_3_4", "beta integral as a Gamma ratio", ("s", "v"), _run_beta, False, False),
        Identity("parseval_3_5", "Parseval pair for the Hurwitz-type theta sum", ("a", "x"), _run_parseval),
        Identity("rearrangement_3", "rearranged divisor-cosine series (three routes)", ("A", "M"),
                 _run_rearrangement),
    )
}


def get_identity(identity_id):
    try:
        return IDENTITIES[identity_id]
    except KeyError:
        raise KeyError(f"unknown identity {identity_id!r}; choose from {sorted(IDENTITIES)}") from None


def resolve(identity_id, function="gaussian", function_params=None, params=None, contour=None, series=None,
            tolerance=None, variant="printed"):
    """Fill unspecified inputs from the defaults table and build a :class:`Call`.

    ``contour`` and ``series`` may be partial dicts (keys c/T/h and
    N/smoothing/delta) that override the defaults field by field.
    """
    ident = get_identity(identity_id)
    merged = ident.default_params()
    merged.update(params or {})
    base_c = ident.default_contour()
    if contour:
        keys = {"c": "abscissa", "T": "height", "h": "step", "abscissa": "abscissa", "height": "height",
                "step": "step"}
        unknown = set(contour) - set(keys)
        if unknown:
            raise ValueError(f"unknown contour keys {sorted(unknown)}; use c/T/h")
        changes = {keys[k]: float(v) for k, v in contour.items() if v is not None}
        base_c = (base_c or ContourSpec()).with_(**changes)
    base_s = ident.default_series() or SeriesSpec(20)
    if series:
        changes = {k: v for k, v in series.items() if v is not None}
        if "N" in changes:
            changes["cutoff"] = int(changes.pop("N"))
        if "cutoff" in changes and base_s.smoothing == "abel" and "delta" not in changes:
            changes["delta"] = None
        base_s = base_s.with_(**changes)
    fn = get_function(function, **(function_params or {})) if ident.uses_function else None
    tol = ident.tolerance if tolerance is None else float(tolerance)
    if not tol > 0:
        raise ValueError("tolerance must be positive")
    return Call(merged, fn, base_c, base_s, tol, variant)


def run_identity(identity_id, **kwargs):
    """Resolve inputs and run; returns a list of reports."""
    call = resolve(identity_id, **kwargs)
    return get_identity(identity_id).runner(call)
