"""Command-line front end: JSON in, JSON (or CSV) out.

Every invocation prints one report

    {"schema", "command", "inputs", "inputs_digest", "outputs", "notes", "timing"}

where ``outputs`` depends only on ``inputs``. Exit status 2 signals invalid
input and 3 an exhausted budget; both print {"error": {...}} instead.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Sequence

from . import __version__
from .arith import is_prime, primes_up_to
from .catalog import (
    DYADIC_VOLUME,
    fan_p1,
    fan_p1xp1_swap,
    fan_p2,
    quadric_affine,
    quadric_ep,
    quadric_strata,
    quadric_volume,
)
from .clemens import (
    ActionTooLarge,
    DivisorIncidence,
    build_clemens,
    face_dimension_an,
    fixed_subcomplex,
    analytic_subcomplex,
    poset_isomorphic,
    restricted_complex,
)
from .denef import DenefData, LineSpec, igusa_ratfun, igusa_zeta, pole_report, series_coefficients
from .exactcore import Polynomial, RatFun, StructuredConstant, quasi_polynomial
from .galois import artin_local_factor, local_factor_value, truncated_regularized_product
from .heights import (
    binary_form_data,
    global_abscissa,
    global_leading_constant,
    height_from_places,
    height_Pn,
    local_abscissa,
    local_norms,
    log_discrepancy_abscissa,
    x2p1_constant,
)
from .localzeta import REALS, c_constant, integral_over_R
from .pointcount import (
    DEFAULT_BUDGET,
    BudgetExceeded,
    PolySystem,
    StratumSpec,
    all_strata_counts,
    count_points,
    weil_volume,
)
from .rootdata import OrbitBudgetExceeded, beta_coeffs, hull_sigma, root_system, sigma_t
from .tauber import (
    ArchPoleData,
    MixedOrders,
    UnsupportedPoleConfiguration,
    abscissa_and_order,
    arch_leading,
    cesaro_limit,
    numeric_poles,
    progression_limit,
    s_leading,
    ultra_asymptotics,
)
from .toric import Fan, analytic_face_dimensions, fans_equivalent, induced_fan, invariant_sublattice, toric_clemens

SCHEMA = "igusa-report/1"

EXIT_INVALID = 2
EXIT_BUDGET = 3


class UsageError(ValueError):
    """Inconsistent command-line options."""


# ---------------------------------------------------------------------------
# serialisation
# ---------------------------------------------------------------------------


def to_plain(obj: Any) -> Any:
    """Convert library values to JSON-ready data: rationals become "p/q"."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, float):
        return obj
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if isinstance(obj, StructuredConstant):
        return to_plain(obj.to_json())
    if isinstance(obj, (frozenset, set)):
        return sorted(to_plain(x) for x in obj)
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(x) for x in obj]
    if hasattr(obj, "to_json"):
        return to_plain(obj.to_json())
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _float_text(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    text = format(x, ".17g")
    if not any(ch in text for ch in ".en"):
        text += ".0"
    return text


def dumps(obj: Any, indent: int = 2, level: int = 0) -> str:
    """JSON text with floats at 17 significant digits and stable key order."""
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, float):
        return _float_text(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {dumps(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        if all(not isinstance(x, (dict, list)) for x in obj):
            return "[" + ", ".join(dumps(x, indent, level + 1) for x in obj) + "]"
        return "[\n" + ",\n".join(pad + dumps(x, indent, level + 1) for x in obj) + "\n" + end + "]"
    return json.dumps(obj)


def digest(inputs: Any) -> str:
    canonical = json.dumps(to_plain(inputs), sort_keys=True, separators=(",", ":"))
    return "sha256:" + hashlib.sha256(canonical.encode()).hexdigest()


def _csv_text(table: Sequence[dict]) -> str:
    buf = io.StringIO()
    columns: list[str] = []
    for row in table:
        columns += [k for k in row if k not in columns]
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    for row in table:
        writer.writerow({k: _csv_cell(v) for k, v in row.items()})
    return buf.getvalue()


def _csv_cell(value: Any) -> str:
    value = to_plain(value)
    if isinstance(value, float):
        return _float_text(value).strip('"')
    if isinstance(value, (dict, list)):
        return json.dumps(value, separators=(",", ":"))
    return "" if value is None else str(value)


# ---------------------------------------------------------------------------
# input parsing
# ---------------------------------------------------------------------------


def _load_json(path: str) -> Any:
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    return json.loads(text)


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"{text!r} is not a rational number") from exc


def _rational_list(text: str) -> list[Fraction]:
    return [_rational(x) for x in text.split(",") if x.strip()]


def _number(text: str) -> Fraction | float:
    """A rational when the text is one, otherwise a float (e.g. 3.14159e0 or 'pi')."""
    text = text.strip()
    named = {"pi": math.pi, "pi/4": math.pi / 4, "pi^2/6": math.pi**2 / 6}
    if text in named:
        return named[text]
    if any(ch in text for ch in ".eE"):
        try:
            return float(text)
        except ValueError as exc:
            raise UsageError(f"{text!r} is not a number") from exc
    return _rational(text)


def _flags(text: str) -> list[bool]:
    out = []
    for x in text.split(","):
        x = x.strip().lower()
        if x not in ("0", "1", "true", "false"):
            raise UsageError(f"flag {x!r} must be 0/1/true/false")
        out.append(x in ("1", "true"))
    return out


def parse_ratfun(text: str) -> RatFun:
    """Parse an expression in u into a RatFun with (1 - c u^d) denominator factors."""
    import sympy  # slow to import; only this command needs it

    u = sympy.Symbol("u")
    try:
        expr = sympy.sympify(text, locals={"u": u})
    except (sympy.SympifyError, SyntaxError, TypeError) as exc:
        raise UsageError(f"cannot parse {text!r}") from exc
    if expr.free_symbols - {u}:
        raise UsageError("the expression may only use the variable u")
    num, den = sympy.fraction(sympy.together(expr))
    num_poly = sympy.Poly(num, u, domain="QQ")
    den_poly = sympy.Poly(den, u, domain="QQ")
    scale = Fraction(1)
    factors: list[tuple[Fraction, int, int]] = []
    const, parts = den_poly.factor_list()
    scale /= Fraction(str(const))
    for factor, mult in parts:
        terms = factor.terms()
        degrees = sorted(m[0] for m, _ in terms)
        if len(terms) == 1:
            raise UsageError("a pole at u = 0 is not allowed")
        if len(terms) != 2 or degrees[0] != 0:
            raise UsageError(f"denominator factor {factor.as_expr()} is not of the form 1 - c u^d")
        coeff = {m[0]: Fraction(str(c)) for m, c in terms}
        d = degrees[1]
        c0 = coeff[0]
        scale /= c0**mult
        factors.append((-coeff[d] / c0, d, mult))
    coeffs = [Fraction(str(c)) * scale for c in reversed(num_poly.all_coeffs())]
    return RatFun(Polynomial(tuple(coeffs)), tuple(factors))


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


class Result:
    def __init__(self, inputs: dict, outputs: dict, notes: Sequence[str] = (), table: Sequence[dict] | None = None):
        self.inputs = inputs
        self.outputs = outputs
        self.notes = list(notes)
        self.table = table


def cmd_count(args: argparse.Namespace) -> Result:
    if bool(args.system) == bool(args.strata):
        raise UsageError("give exactly one of --system or --strata")
    moduli = list(args.modulus or [])
    if args.primes_up_to:
        moduli += [p for p in primes_up_to(args.primes_up_to) if p not in moduli]
    inputs: dict[str, Any] = {"moduli": moduli, "budget": args.budget}
    outputs: dict[str, Any] = {}
    table: list[dict] = []
    if args.system:
        raw = _load_json(args.system)
        system = PolySystem.from_json(raw)
        inputs["system"] = system.to_json()
        for m in moduli:
            table.append({"modulus": m, "count": count_points(system, m, args.budget)})
        if args.weil is not None:
            inputs["weil"] = {"p": args.weil, "levels": args.levels}
            outputs["weil_volumes"] = [
                {"k": k, "volume": weil_volume(system, args.weil, k, args.budget)} for k in range(1, args.levels + 1)
            ]
    else:
        raw = _load_json(args.strata)
        spec = StratumSpec.from_json(raw)
        inputs["strata"] = {"ambient": spec.ambient.to_json(), "components": {k: v.to_json() for k, v in spec.components.items()}}
        for m in moduli:
            if not is_prime(m):
                raise UsageError("strata are counted over prime fields")
            for subset, n in all_strata_counts(spec, m, args.budget).items():
                table.append({"modulus": m, "A": sorted(subset), "count": n})
    outputs["counts"] = table
    return Result(inputs, outputs, table=table)


def cmd_denef(args: argparse.Namespace) -> Result:
    data = DenefData.from_json(_load_json(args.data))
    line = LineSpec.from_json(_load_json(args.line))
    inputs = {
        "data": {
            "dim": data.dim,
            "q": data.q,
            "mu0": data.mu0,
            "components": dict(sorted(data.components.items())),
            "strata": [{"A": sorted(a), "N": n} for a, n in sorted(data.strata.items(), key=lambda t: (len(t[0]), sorted(t[0])))],
            "nonempty": data.nonempty,
        },
        "line": {k: {"lambda": line.lam[k], "rho": line.rho[k]} for k in sorted(line.lam)},
        "series": args.series,
    }
    scale, rf = igusa_ratfun(data, line)
    report = pole_report(data, line)
    weil = igusa_zeta(data, {alpha: Fraction(1) for alpha in data.components})
    outputs: dict[str, Any] = {
        "scale": scale,
        "variable": f"u = q^(-s/{scale})",
        "ratfun": rf.to_json(),
        "pole": report.to_json(),
        "zeta_at_ones": weil,
    }
    table = None
    if args.series:
        series = series_coefficients(data, line, args.series)
        table = [{"n": n, "Z_n": z, "V": v} for n, (z, v) in enumerate(zip(series.coefficients, series.partial_sums))]
        outputs["series"] = table
        qp = quasi_polynomial(rf)
        outputs["quasi_polynomial_period"] = qp.period
        outputs["reconstruction_matches"] = all(qp.coefficient(n) == z for n, z in enumerate(series.coefficients))
    return Result(inputs, outputs, table=table)


def cmd_tauber(args: argparse.Namespace) -> Result:
    if args.ratfun is None and args.ratfun_json is None:
        return _tauber_arch(args)
    if args.ratfun is not None and args.ratfun_json is not None:
        raise UsageError("give only one of --ratfun and --ratfun-json")
    if args.q is None:
        raise UsageError("--q is required with a rational function")
    rf = parse_ratfun(args.ratfun) if args.ratfun is not None else RatFun.from_json(_load_json(args.ratfun_json))
    q = _rational(args.q)
    inputs = {"ratfun": rf.to_json(), "q": q, "period": args.period, "allow_lower_order": args.allow_lower_order}
    notes = []
    a, b = abscissa_and_order(rf, q)
    outputs: dict[str, Any] = {"abscissa": a, "order": b}
    try:
        ultra = ultra_asymptotics(rf, q)
        outputs["poles"] = ultra.to_json()["poles"]
        outputs["constant"] = ultra.constant
        outputs["valid_from"] = ultra.valid_from
    except UnsupportedPoleConfiguration as exc:
        notes.append(f"exact P_j/Q_j unavailable: {exc}")
        outputs["poles"] = [
            {"point": p.point, "order": p.order, "laurent": p.laurent} for p in numeric_poles(rf)
        ]
    period = args.period
    if period is None:
        dominant = [p for p in numeric_poles(rf) if math.isclose(abs(p.point), 1 / q ** a if math.isfinite(a) else 0, rel_tol=1e-9)]
        period = max(len(dominant), 1)
    limits: dict[str, Any] = {"period": period}
    try:
        limits["progressions"] = [progression_limit(rf, q, period, n0, args.allow_lower_order) for n0 in range(period)]
    except (MixedOrders, UnsupportedPoleConfiguration) as exc:
        notes.append(f"progression limits unavailable: {exc}")
        limits["progressions"] = None
    try:
        limits["cesaro"] = cesaro_limit(rf, q)
    except UnsupportedPoleConfiguration as exc:
        notes.append(f"Cesaro limit unavailable: {exc}")
        limits["cesaro"] = None
    outputs["limits"] = limits
    outputs["normalisation"] = "V(q^n) q^(-n a) n^(-b*), b* = b - 1 if a != 0 else b"
    return Result(inputs, outputs, notes)


def _tauber_arch(args: argparse.Namespace) -> Result:
    if args.a is None or args.b is None or args.leading is None:
        raise UsageError("archimedean mode needs --a, --b and --leading (or give --ratfun)")
    a = _rational(args.a)
    leading = _number(args.leading)
    z0 = _number(args.z0) if args.z0 is not None else None
    places = []
    for item in args.place or []:
        q, _, bj = item.partition(":")
        places.append((int(q), int(bj)))
    inputs = {"a": a, "b": args.b, "leading": leading, "z0": z0, "places": places}
    if places:
        term = s_leading(a, args.b, places, leading, z0)
    else:
        term = arch_leading(ArchPoleData(a, args.b, leading, z0))
    return Result(inputs, {"asymptotic": term.to_json(), "form": "V(B) ~ constant + theta B^exponent (log B)^log_degree"})


def cmd_clemens(args: argparse.Namespace) -> Result:
    raw = _load_json(args.incidence)
    incidence = DivisorIncidence.from_json(raw)
    geometric = build_clemens(incidence)
    fixed = fixed_subcomplex(geometric, incidence.action)
    analytic = analytic_subcomplex(fixed)
    outputs: dict[str, Any] = {
        "geometric": geometric.to_json(),
        "fixed": fixed.to_json(),
        "analytic": analytic.to_json(),
        "analytic_orbit_dimensions": {f.label(): face_dimension_an(f, geometric, incidence.action) for f in analytic.faces},
    }
    inputs = {"incidence": raw}
    if args.line:
        line = LineSpec.from_json(_load_json(args.line))
        inputs["line"] = {k: {"lambda": line.lam[k], "rho": line.rho[k]} for k in sorted(line.lam)}
        res = restricted_complex(analytic, line.lam, line.rho)
        outputs["restricted"] = {
            "a": res.a,
            "b": res.b,
            "critical_components": res.critical_components,
            "complex": res.complex.to_json(),
        }
    return Result(inputs, outputs)


def _fan_outputs(fan: Fan) -> dict:
    basis = invariant_sublattice(fan)
    induced, _ = induced_fan(fan)
    geometric, analytic = toric_clemens(fan)
    induced_complex = toric_clemens(induced)[0] if induced.rank else None
    return {
        "rays": fan.rays,
        "smooth": fan.is_smooth(),
        "invariant_basis": basis,
        "induced_fan": induced.to_json(),
        "geometric": geometric.to_json(),
        "analytic": analytic.to_json(),
        "analytic_face_dimensions": [
            {"cone": sorted(c), "dim": d} for c, d in sorted(analytic_face_dimensions(fan).items(), key=lambda t: (len(t[0]), sorted(t[0])))
        ],
        "analytic_matches_induced": poset_isomorphic(analytic, induced_complex) if induced_complex is not None else not analytic.faces,
    }


def cmd_toric(args: argparse.Namespace) -> Result:
    fan = Fan.from_json(_load_json(args.fan))
    return Result({"fan": fan.to_json()}, _fan_outputs(fan))


def _wonderful_outputs(kind: str, rank: int, d: Sequence[Fraction], weights: Sequence[Sequence[Fraction]] | None) -> dict:
    rs = root_system(kind, rank)
    sigma, t = sigma_t(rs, d)
    out: dict[str, Any] = {
        "type": f"{kind}{rank}",
        "positive_roots": len(rs.positive_roots),
        "m": beta_coeffs(rs),
        "sigma": sigma,
        "t": t,
        "prediction": f"V(B) ~ c B^{sigma} (log B)^{t - 1}",
    }
    if weights is not None:
        hull = hull_sigma(rs, weights)
        out["hull"] = {
            "sigma": hull.sigma,
            "t": hull.t,
            "lambda_tilde": hull.certificate.lambda_tilde,
            "lambda_tilde_sigma": hull.certificate.lambda_tilde_sigma,
            "single_weight_attains": hull.certificate.single_weight_attains,
        }
    return out


def cmd_wonderful(args: argparse.Namespace) -> Result:
    d = _rational_list(args.d)
    weights = [_rational_list(w) for w in args.weights.split(";")] if args.weights else None
    inputs = {"type": args.type.upper(), "rank": args.rank, "d": d, "weights": weights}
    return Result(inputs, _wonderful_outputs(args.type.upper(), args.rank, d, weights))


def cmd_height(args: argparse.Namespace) -> Result:
    coords = [_rational(x) for x in args.coords]
    outputs = {
        "height": height_Pn(coords),
        "local_norms": local_norms(coords),
        "product_of_local_norms": height_from_places(coords),
    }
    return Result({"coords": coords}, outputs)


def _abscissa_json(ab) -> dict:
    return {"a": ab.a, "b": ab.b, "argmax": list(ab.argmax)}


def cmd_abscissa(args: argparse.Namespace) -> Result:
    lam = _rational_list(args.lam)
    inputs: dict[str, Any] = {"lambda": lam}
    outputs: dict[str, Any] = {}
    flags = _flags(args.flags) if args.flags else None
    if args.d:
        d = _rational_list(args.d)
        inputs["d"] = d
        outputs["global"] = _abscissa_json(global_abscissa(d, lam))
        outputs["local"] = _abscissa_json(local_abscissa(d, lam, flags or [True] * len(lam)))
    if args.rho:
        rho = _rational_list(args.rho)
        eps = _rational_list(args.epsilon) if args.epsilon else None
        nd = _rational(args.n_minus_d) if args.n_minus_d is not None else None
        inputs.update({"rho": rho, "epsilon": eps, "n_minus_d": nd})
        outputs["log_discrepancy"] = _abscissa_json(log_discrepancy_abscissa(rho, lam, flags, eps, nd))
    if not outputs:
        raise UsageError("give --d and/or --rho")
    inputs["flags"] = flags
    return Result(inputs, outputs)


def cmd_constant(args: argparse.Namespace) -> Result:
    a = _rational(args.a)
    lam = _rational_list(args.lam)
    integral = _number(args.integral)
    value = global_leading_constant(a, args.b, lam, integral)
    inputs = {"a": a, "b": args.b, "lambda": lam, "integral": integral}
    return Result(inputs, {"constant": value, "formula": "integral * prod(1/lambda) / (a (b-1)!)"})


# examples ---------------------------------------------------------------------


def example_x2p1(args: argparse.Namespace) -> Result:
    bound = args.prime_bound
    count_bound = args.count_bound
    inputs = {
        "prime_bound": bound,
        "count_bound": count_bound,
        "dyadic_levels": args.dyadic_levels,
        "zeta_star": args.zeta_star,
    }
    notes = []
    system = quadric_affine()

    counts = []
    for p in primes_up_to(count_bound)[1:]:
        n = count_points(system, p)
        chi = 1 if p % 4 == 1 else -1
        volume = Fraction(n, p * p)
        ep_factor = local_factor_value(quadric_ep(), p, 1)
        counts.append(
            {
                "p": p,
                "count": n,
                "expected": p * p + chi * p,
                "volume": volume,
                "L_p(1,EP)": ep_factor,
                "product": volume * ep_factor,
            }
        )
    counts_ok = all(r["count"] == r["expected"] and r["product"] == 1 - Fraction(1, r["p"] ** 2) for r in counts)
    if not counts_ok:
        notes.append("point counts disagree with p^2 + (-1/p) p")

    dyadic = [{"k": k, "volume": weil_volume(system, 2, k)} for k in range(1, args.dyadic_levels + 1)]

    strata = all_strata_counts(quadric_strata(), 5)
    data = DenefData(2, 5, Fraction(1), {"D": 1}, strata)
    line = LineSpec.volume_line({"D": 1}, {"D": 1})
    scale, rf = igusa_ratfun(data, line)
    pole = pole_report(data, line)
    ultra = ultra_asymptotics(rf, data.q)
    incidence = DivisorIncidence.from_json({"components": [{"id": "D", "f": 1}], "faces": [{"A": ["D"], "Z": "D", "has_point": True}]})
    analytic = analytic_subcomplex(build_clemens(incidence))
    restricted = restricted_complex(analytic, line.lam, line.rho)

    def local_volume(p: int) -> Fraction:
        return quadric_volume(p)

    product = truncated_regularized_product(local_volume, quadric_ep(), bound, {2: DYADIC_VOLUME})
    vol_real = integral_over_R(lambda z: 1.0 / (1.0 + z * z))
    zeta_star = _number(args.zeta_star)
    assembled = x2p1_constant(vol_real, float(zeta_star))
    notes.append("local volumes above the count bound use the closed form 1 + (-1/p)/p checked by counting below it")
    notes.append("zeta*_{Q(i)}(1) is a user-supplied constant")

    outputs = {
        "point_counts": counts,
        "point_counts_match": counts_ok,
        "dyadic_volumes": dyadic,
        "boundary_strata_mod_5": [{"A": sorted(a), "N": n} for a, n in sorted(strata.items(), key=lambda t: len(t[0]))],
        "local_zeta_mod_5": {"scale": scale, "ratfun": rf.to_json(), "pole": pole.to_json()},
        "local_volume_growth_mod_5": {"constant": ultra.constant, "poles": ultra.to_json()["poles"]},
        "analytic_clemens": {"dimension": analytic.dimension, "restricted_b": restricted.b},
        "regularized_product": {
            "value": product.value,
            "target_6_over_pi2": 6 / math.pi**2,
            "tail_bound": product.tail_bound,
            "primes_used": product.primes_used,
        },
        "L_factor_ep_at_3": artin_local_factor(quadric_ep(), 3).to_json(),
        "vol_D_R": vol_real,
        "c_R": c_constant(REALS),
        "constant": assembled,
    }
    table = [{k: v for k, v in row.items()} for row in counts]
    return Result(inputs, outputs, notes, table)


def example_toric(args: argparse.Namespace) -> Result:
    swap = fan_p1xp1_swap()
    out_swap = _fan_outputs(swap)
    induced, _ = induced_fan(swap)
    out_swap["induced_equivalent_to_P1"] = fans_equivalent(induced, fan_p1())
    geometric_p2, _ = toric_clemens(fan_p2())
    p2 = {
        "dimension": geometric_p2.dimension,
        "vertices": len(geometric_p2.vertices()),
        "edges": sum(1 for f in geometric_p2.faces if geometric_p2.face_dimension(f) == 1),
    }
    return Result({"fans": ["P1xP1 with swap", "P2"]}, {"P1xP1_swap": out_swap, "P2": p2})


def example_wonderful(args: argparse.Namespace) -> Result:
    rows = []
    for kind, rank in (("A", 1), ("A", 2), ("A", 3), ("B", 2), ("G", 2)):
        d = [Fraction(1)] * rank
        out = _wonderful_outputs(kind, rank, d, [d])
        rows.append({"type": out["type"], "sigma": out["sigma"], "t": out["t"], "hull_sigma": out["hull"]["sigma"], "hull_t": out["hull"]["t"]})
    return Result({"types": ["A1", "A2", "A3", "B2", "G2"], "d": "all ones"}, {"adjoint": rows}, table=rows)


def example_binary_forms(args: argparse.Namespace) -> Result:
    rows = []
    for n in range(3, args.max_degree + 1):
        data = binary_form_data(n)
        ab = log_discrepancy_abscissa(data["rho"], data["lambda"], None, data["epsilon"], 0)
        rows.append({"n": n, "a": ab.a, "b": ab.b, "matches_2_over_n": ab.a == Fraction(2, n) and ab.b == 1})
    return Result({"max_degree": args.max_degree}, {"binary_forms": rows}, table=rows)


EXAMPLES: dict[str, Callable[[argparse.Namespace], Result]] = {
    "x2p1": example_x2p1,
    "toric": example_toric,
    "wonderful": example_wonderful,
    "binary-forms": example_binary_forms,
}


def cmd_example(args: argparse.Namespace) -> Result:
    result = EXAMPLES[args.name](args)
    result.inputs = {"example": args.name, **result.inputs}
    return result


# ---------------------------------------------------------------------------
# driver
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="igusa", description="Igusa zeta functions, Clemens complexes and volume asymptotics.")
    parser.add_argument("--version", action="version", version=f"igusa {__version__}")
    parser.add_argument("--csv", action="store_true", help="print the main table as CSV")
    parser.add_argument("--seed", type=int, default=None, help="reserved; no command is randomised")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", help="exhaustive point counts over Z/m")
    p.add_argument("--system", help="polynomial system JSON")
    p.add_argument("--strata", help="ambient system plus boundary components JSON")
    p.add_argument("--modulus", type=int, action="append")
    p.add_argument("--primes-up-to", type=int)
    p.add_argument("--weil", type=int, metavar="P", help="also report #X(Z/P^k)/P^(k dim)")
    p.add_argument("--levels", type=int, default=3)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("denef", help="zeta function, pole data and coefficients from stratum counts")
    p.add_argument("--data", required=True)
    p.add_argument("--line", required=True)
    p.add_argument("--series", type=int, default=0, metavar="N")
    p.set_defaults(func=cmd_denef)

    p = sub.add_parser("tauber", help="asymptotics from a rational function or from pole data")
    p.add_argument("--ratfun", help="expression in u, e.g. '1/(1-u)^2'")
    p.add_argument("--ratfun-json")
    p.add_argument("--q")
    p.add_argument("--period", type=int)
    p.add_argument("--allow-lower-order", action="store_true")
    p.add_argument("--a")
    p.add_argument("--b", type=int)
    p.add_argument("--leading")
    p.add_argument("--z0")
    p.add_argument("--place", action="append", metavar="Q:B")
    p.set_defaults(func=cmd_tauber)

    p = sub.add_parser("clemens", help="Clemens complexes of boundary incidence data")
    p.add_argument("--incidence", required=True)
    p.add_argument("--line")
    p.set_defaults(func=cmd_clemens)

    p = sub.add_parser("toric", help="invariant fan and Clemens complexes of a toric boundary")
    p.add_argument("--fan", required=True)
    p.set_defaults(func=cmd_toric)

    p = sub.add_parser("wonderful", help="exponents for a wonderful compactification")
    p.add_argument("type")
    p.add_argument("rank", type=int)
    p.add_argument("d", help="comma-separated d_1,...,d_r")
    p.add_argument("--weights", help="weights in simple-root coordinates, ';'-separated")
    p.set_defaults(func=cmd_wonderful)

    p = sub.add_parser("height", help="height of a point of projective space")
    p.add_argument("coords", nargs="+")
    p.set_defaults(func=cmd_height)

    p = sub.add_parser("abscissa", help="abscissae a and orders b from boundary data")
    p.add_argument("--lambda", dest="lam", required=True)
    p.add_argument("--d")
    p.add_argument("--rho")
    p.add_argument("--flags")
    p.add_argument("--epsilon")
    p.add_argument("--n-minus-d")
    p.set_defaults(func=cmd_abscissa)

    p = sub.add_parser("constant", help="leading constant of the global volume")
    p.add_argument("--a", required=True)
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--lambda", dest="lam", required=True)
    p.add_argument("--integral", required=True)
    p.set_defaults(func=cmd_constant)

    p = sub.add_parser("example", help="built-in end-to-end pipelines")
    p.add_argument("name", choices=sorted(EXAMPLES))
    p.add_argument("--prime-bound", type=int, default=100000)
    p.add_argument("--count-bound", type=int, default=101)
    p.add_argument("--dyadic-levels", type=int, default=6)
    p.add_argument("--zeta-star", default="pi/4")
    p.add_argument("--max-degree", type=int, default=10)
    p.set_defaults(func=cmd_example)
    return parser


BUDGET_ERRORS = (BudgetExceeded, OrbitBudgetExceeded, ActionTooLarge)


def _error(kind: str, exc: BaseException, code: int) -> int:
    print(dumps({"schema": SCHEMA, "error": {"type": kind, "class": type(exc).__name__, "message": str(exc)}}))
    return code


def run(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and EXIT_INVALID
    start = time.perf_counter()
    try:
        result = args.func(args)
    except BUDGET_ERRORS as exc:
        return _error("budget", exc, EXIT_BUDGET)
    except (ValueError, KeyError, TypeError, OSError, RuntimeError) as exc:
        return _error("validation", exc, EXIT_INVALID)
    elapsed = time.perf_counter() - start
    inputs = {"command": args.command, "seed": args.seed, **result.inputs}
    if args.csv:
        table = result.table
        if table is None:
            table = [{"key": k, "value": v} for k, v in to_plain(result.outputs).items()]
        sys.stdout.write(_csv_text(table))
        return 0
    report = {
        "schema": SCHEMA,
        "command": ["igusa", *argv],
        "inputs": to_plain(inputs),
        "inputs_digest": digest(inputs),
        "outputs": to_plain(result.outputs),
        "notes": result.notes,
        "timing": {"seconds": elapsed},
    }
    print(dumps(report))
    return 0


def main() -> None:
    sys.exit(run())
