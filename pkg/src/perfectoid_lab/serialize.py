"""JSON wire formats for every element type.

All rationals travel as "num/den" strings ("inf" for the zero valuation) so
no floating point ever crosses the wire; parse(print(x)) round-trips
bit-exactly.  Schema violations raise SchemaError with a path diagnostic.
"""

import re
from fractions import Fraction

from .aring import ASeries
from .errors import SchemaError
from .perfseries import FieldContext, PerfSeries
from .rationals import INF, format_rational, parse_rational
from .wittcore import WittVec

_CTX_MEMO = {}


def context_from_params(p, f, modulus, scale, denom_bound, prec_default=24):
    key = (p, f, tuple(modulus), Fraction(scale), denom_bound,
           Fraction(prec_default))
    ctx = _CTX_MEMO.get(key)
    if ctx is None:
        ctx = _CTX_MEMO[key] = FieldContext(
            p, f, list(modulus), Fraction(scale), denom_bound,
            Fraction(prec_default))
    return ctx


def _need(data, key, path):
    if not isinstance(data, dict) or key not in data:
        raise SchemaError(f"{path}.{key}", "missing field")
    return data[key]


# -- PerfSeries -------------------------------------------------------------

def perfseries_to_json(x):
    terms = []
    for e in x.support():
        c = x.terms[e]
        terms.append({"e": format_rational(e), "c": list(c)})
    return {
        "p": x.ctx.p,
        "f": x.ctx.f,
        "modulus": list(x.ctx.fq.modulus),
        "scale": format_rational(x.ctx.scale),
        "terms": terms,
        "prec": format_rational(x.prec),
        "denom_bound": x.ctx.denom_bound,
    }


def perfseries_from_json(data, path="perfseries"):
    p = _need(data, "p", path)
    f = _need(data, "f", path)
    modulus = _need(data, "modulus", path)
    scale = parse_rational(_need(data, "scale", path), f"{path}.scale")
    denom_bound = _need(data, "denom_bound", path)
    ctx = context_from_params(p, f, modulus, scale, denom_bound)
    prec = parse_rational(_need(data, "prec", path), f"{path}.prec")
    terms = {}
    for i, row in enumerate(_need(data, "terms", path)):
        e = parse_rational(_need(row, "e", f"{path}.terms[{i}]"),
                           f"{path}.terms[{i}].e")
        if e == INF:
            raise SchemaError(f"{path}.terms[{i}].e", "exponent cannot be inf")
        den = Fraction(e).denominator
        k = 0
        d = den
        while d % p == 0:
            d //= p
            k += 1
        if d != 1:
            raise SchemaError(f"{path}.terms[{i}].e",
                              f"denominator {den} is not a power of p = {p}")
        if k > denom_bound:
            raise SchemaError(f"{path}.terms[{i}].e",
                              f"denominator p^{k} exceeds bound p^{denom_bound}")
        c = _need(row, "c", f"{path}.terms[{i}]")
        if not isinstance(c, list) or len(c) != f:
            raise SchemaError(f"{path}.terms[{i}].c",
                              f"coefficient must be a list of {f} residues")
        terms[Fraction(e)] = c
    return ctx.series(terms, prec)


# -- WittVec ----------------------------------------------------------------

def wittvec_to_json(x):
    return {"N": x.n, "coords": [perfseries_to_json(c) for c in x.coords]}


def wittvec_from_json(data, path="wittvec"):
    n = _need(data, "N", path)
    coords_json = _need(data, "coords", path)
    if len(coords_json) != n:
        raise SchemaError(f"{path}.coords", f"expected {n} coordinates")
    coords = [perfseries_from_json(c, f"{path}.coords[{i}]")
              for i, c in enumerate(coords_json)]
    if not coords:
        raise SchemaError(f"{path}.coords", "empty coordinate list")
    ctx = coords[0].ctx
    for i, c in enumerate(coords):
        if c.ctx != ctx:
            raise SchemaError(f"{path}.coords[{i}]",
                              "coordinates disagree on field parameters")
    return WittVec(ctx, coords)


# -- ASeries ----------------------------------------------------------------

def aseries_to_json(x):
    return {
        "p": x.p,
        "N": x.level,
        "window": [x.lo, x.hi],
        "coeffs": {str(e): c for e, c in sorted(x.coeffs.items())},
    }


def aseries_from_json(data, path="aseries"):
    p = _need(data, "p", path)
    level = _need(data, "N", path)
    window = data.get("window", [None, None])
    if not isinstance(window, list) or len(window) != 2:
        raise SchemaError(f"{path}.window", "window must be [lo, hi]")
    coeffs = {}
    for k, v in _need(data, "coeffs", path).items():
        try:
            e = int(k)
        except ValueError:
            raise SchemaError(f"{path}.coeffs", f"bad exponent {k!r}") from None
        if not isinstance(v, int):
            raise SchemaError(f"{path}.coeffs[{k}]", "coefficient must be int")
        coeffs[e] = v
    return ASeries(p, level, coeffs, (window[0], window[1]))


# -- gamma descriptions -------------------------------------------------------

_GAMMA_RE = re.compile(r"^1\+(?:(\d+)\*)?p(?:\^(\d+))?$")


def parse_gamma(text, p, path="gamma"):
    """Parse '5', '1+p', '1+p^2', '1+3*p^2' into an exact integer."""
    text = str(text).strip().replace(" ", "")
    if re.fullmatch(r"\d+", text):
        value = int(text)
    else:
        m = _GAMMA_RE.fullmatch(text)
        if not m:
            raise SchemaError(path, f"cannot parse gamma description {text!r}")
        unit = int(m.group(1)) if m.group(1) else 1
        exp = int(m.group(2)) if m.group(2) else 1
        value = 1 + unit * p**exp
    if value < 1 or value % p == 0:
        raise SchemaError(path, f"gamma = {value} is not a unit of Z_{p}")
    return value


def format_gamma(value, p):
    if value % p == 1:
        diff = value - 1
        exp = 0
        while diff % p == 0:
            diff //= p
            exp += 1
        if diff == 1:
            return f"1+p^{exp}" if exp != 1 else "1+p"
        return f"1+{diff}*p^{exp}" if exp != 1 else f"1+{diff}*p"
    return str(value)


# -- (phi, Gamma)-modules -----------------------------------------------------

def module_to_json(module):
    if module.layer.name == "W":
        enc = wittvec_to_json
    else:
        enc = aseries_to_json
    return {
        "d": module.d,
        "layer": module.layer.name,
        "gamma": format_gamma(module.gamma, _module_p(module)),
        "A": [[enc(x) for x in row] for row in module.a_mat],
        "G": [[enc(x) for x in row] for row in module.g_mat],
    }


def _module_p(module):
    if module.layer.name == "W":
        return module.layer.ctx.p
    return module.layer.p


def module_from_json(data, path="module"):
    from .descent import ALayer, PhiGammaModule, WLayer

    d = _need(data, "d", path)
    layer_name = _need(data, "layer", path)
    rows_a = _need(data, "A", path)
    rows_g = _need(data, "G", path)
    if layer_name == "W":
        a_mat = [[wittvec_from_json(x, f"{path}.A[{i}][{j}]")
                  for j, x in enumerate(row)] for i, row in enumerate(rows_a)]
        g_mat = [[wittvec_from_json(x, f"{path}.G[{i}][{j}]")
                  for j, x in enumerate(row)] for i, row in enumerate(rows_g)]
        ctx = a_mat[0][0].ctx
        layer = WLayer(ctx, a_mat[0][0].n)
        p = ctx.p
    elif layer_name == "A":
        a_mat = [[aseries_from_json(x, f"{path}.A[{i}][{j}]")
                  for j, x in enumerate(row)] for i, row in enumerate(rows_a)]
        g_mat = [[aseries_from_json(x, f"{path}.G[{i}][{j}]")
                  for j, x in enumerate(row)] for i, row in enumerate(rows_g)]
        p = a_mat[0][0].p
        layer = ALayer(p, a_mat[0][0].level)
    else:
        raise SchemaError(f"{path}.layer", f"unknown layer {layer_name!r}")
    if len(a_mat) != d or len(g_mat) != d:
        raise SchemaError(f"{path}.d", "matrix shape disagrees with rank")
    gamma = parse_gamma(_need(data, "gamma", path), p, f"{path}.gamma")
    return PhiGammaModule(layer, d, a_mat, g_mat, gamma)


def descent_report_to_json(report):
    return {
        "r": format_rational(report.r),
        "eta": format_rational(report.eta),
        "gamma": report.gamma,
        "iterations": report.iterations,
        "schedule": [
            {"l": row["l"],
             "nu_x": format_rational(row["nu_x"]),
             "nu_y": format_rational(row["nu_y"])}
            for row in report.schedule
        ],
        "flags": dict(report.flags),
        "U": [[wittvec_to_json(x) for x in row] for row in report.u_mat],
        "H": [[aseries_to_json(x) for x in row] for row in report.h_mat_a],
        "A": [[aseries_to_json(x) for x in row] for row in report.a_mat_a],
    }
