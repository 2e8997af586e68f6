"""Truncated elements of F = completed perfect closure of F_q((pi)).

A PerfSeries is a finite sparse map {exponent -> F_q coefficient} with
exponents in Z[1/p] (denominator dividing p^M), together with a precision
cutoff ``prec``: the element is known exactly below ``prec`` and unknown from
``prec`` on.  ``prec = INF`` marks an exact element (finite support, no
unknown tail).  All arithmetic computes the exact propagated cutoff; nothing
is rounded silently.

The associated norm is |x| = p^(-c * v(x)) with v the leading exponent and c
the field-wide scale (cyclotomic preset: c = p/(p-1); Kummer preset: c = 1).
"""

from fractions import Fraction

from .errors import (
    DegenerateRootError,
    DivisionByZeroError,
    ParameterError,
    PrecisionError,
    UnsupportedResidueRootError,
)
from .fq import FqField
from .rationals import INF, check_pexp, p_power_denominator_level

SCALE_PRESETS = {
    "cyclotomic": lambda p: Fraction(p, p - 1),
    "kummer": lambda p: Fraction(1),
}


class FieldContext:
    """Shared parameters of the series field: F_q, norm scale, hard bounds."""

    def __init__(self, p, f=1, modulus=None, scale="cyclotomic", denom_bound=4,
                 prec_default=Fraction(24)):
        self.fq = FqField(p, f, modulus)
        self.p = p
        self.f = f
        if isinstance(scale, str):
            try:
                scale = SCALE_PRESETS[scale](p)
            except KeyError:
                raise ParameterError(f"unknown scale preset {scale!r}") from None
        scale = Fraction(scale)
        if scale <= 0:
            raise ParameterError("norm scale must be positive")
        self.scale = scale
        if denom_bound < 0:
            raise ParameterError("denom_bound must be >= 0")
        self.denom_bound = denom_bound
        self.prec_default = Fraction(prec_default)

    def __eq__(self, other):
        return (
            isinstance(other, FieldContext)
            and self.fq == other.fq
            and self.scale == other.scale
            and self.denom_bound == other.denom_bound
            and self.prec_default == other.prec_default
        )

    def __hash__(self):
        return hash((self.fq, self.scale, self.denom_bound, self.prec_default))

    def __repr__(self):
        return (f"FieldContext(p={self.p}, f={self.f}, scale={self.scale}, "
                f"denom_bound={self.denom_bound})")

    # -- constructors ---------------------------------------------------------

    def series(self, terms, prec=INF):
        """Build a PerfSeries from {exponent: coefficient-ish} pairs."""
        clean = {}
        for e, c in terms.items():
            e = Fraction(e)
            check_pexp(e, self.p, self.denom_bound)
            cv = c if isinstance(c, tuple) else self.fq.element(c)
            if not self.fq.is_zero(cv):
                clean[e] = cv
        return PerfSeries(self, clean, prec)

    def zero(self, prec=INF):
        return PerfSeries(self, {}, prec)

    def one(self):
        return self.series({0: 1})

    def monomial(self, exponent, coeff=1, prec=INF):
        return self.series({Fraction(exponent): coeff}, prec)

    def pi(self):
        return self.monomial(1)


def _require_same_context(a, b):
    if a.ctx != b.ctx:
        raise ParameterError("mismatched field parameters between operands")


class PerfSeries:
    """Immutable sparse Laurent series with Z[1/p] exponents."""

    __slots__ = ("ctx", "terms", "prec")

    def __init__(self, ctx, terms, prec=INF):
        self.ctx = ctx
        if prec != INF:
            prec = Fraction(prec)
            terms = {e: c for e, c in terms.items() if e < prec}
        self.terms = terms
        self.prec = prec

    # -- basic queries ----------------------------------------------------

    def is_zero(self):
        """Zero at the stored precision (exactly zero when prec is INF)."""
        return not self.terms

    def valuation(self):
        """Leading exponent; INF for exact zero, prec for truncated zero."""
        if self.terms:
            return min(self.terms)
        return self.prec

    def val_is_exact(self):
        return bool(self.terms) or self.prec == INF

    def support(self):
        return sorted(self.terms)

    def leading_coeff(self):
        if not self.terms:
            raise DivisionByZeroError("leading coefficient of zero")
        return self.terms[min(self.terms)]

    def denominator_level(self):
        """Smallest k with all exponent denominators dividing p^k."""
        lvl = 0
        for e in self.terms:
            lvl = max(lvl, p_power_denominator_level(e, self.ctx.p))
        return lvl

    # -- ring operations ----------------------------------------------------

    def __add__(self, other):
        _require_same_context(self, other)
        fq = self.ctx.fq
        prec = min(self.prec, other.prec)
        out = dict(self.terms)
        for e, c in other.terms.items():
            if e in out:
                s = fq.add(out[e], c)
                if fq.is_zero(s):
                    del out[e]
                else:
                    out[e] = s
            else:
                out[e] = c
        return PerfSeries(self.ctx, out, prec)

    def __neg__(self):
        fq = self.ctx.fq
        return PerfSeries(self.ctx, {e: fq.neg(c) for e, c in self.terms.items()},
                          self.prec)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        _require_same_context(self, other)
        fq = self.ctx.fq
        # propagated cutoff: unknown tail of one factor times the leading
        # term of the other
        prec = min(self.prec + other.valuation(), other.prec + self.valuation())
        out = {}
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                e = ea + eb
                if e >= prec:
                    continue
                c = fq.mul(ca, cb)
                if e in out:
                    s = fq.add(out[e], c)
                    if fq.is_zero(s):
                        del out[e]
                    else:
                        out[e] = s
                elif not fq.is_zero(c):
                    out[e] = c
        return PerfSeries(self.ctx, out, prec)

    def scale_coeff(self, c):
        """Multiply by a constant in F_q."""
        fq = self.ctx.fq
        cv = c if isinstance(c, tuple) else fq.element(c)
        if fq.is_zero(cv):
            return PerfSeries(self.ctx, {}, self.prec if self.prec != INF else INF)
        return PerfSeries(self.ctx,
                          {e: fq.mul(cv, v) for e, v in self.terms.items()},
                          self.prec)

    def shift(self, exponent):
        """Multiply by the monomial pi^exponent (exact)."""
        exponent = Fraction(exponent)
        check_pexp(exponent, self.ctx.p, self.ctx.denom_bound)
        for e in self.terms:
            check_pexp(e + exponent, self.ctx.p, self.ctx.denom_bound)
        prec = self.prec if self.prec == INF else self.prec + exponent
        return PerfSeries(self.ctx,
                          {e + exponent: c for e, c in self.terms.items()}, prec)

    def int_pow(self, n):
        if n < 0:
            return self.inverse().int_pow(-n)
        result = self.ctx.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def frobenius(self, k=1):
        """x -> x^(p^k); negative k is the inverse (exact, norm-scaling)."""
        if k == 0:
            return self
        p = self.ctx.p
        factor = Fraction(p) ** k
        fq = self.ctx.fq
        out = {}
        for e, c in self.terms.items():
            e2 = e * factor
            check_pexp(e2, p, self.ctx.denom_bound)
            out[e2] = fq.frobenius(c, k) if self.ctx.f > 1 else c
        prec = self.prec if self.prec == INF else self.prec * factor
        return PerfSeries(self.ctx, out, prec)

    def frac_pow(self, exponent):
        """x^e for e = m/p^k >= 0, computed as frobenius(-k) of x^m (exact)."""
        exponent = Fraction(exponent)
        if exponent == 0:
            return self.ctx.one()
        k = p_power_denominator_level(exponent, self.ctx.p)
        m = exponent.numerator if k == 0 else int(exponent * self.ctx.p**k)
        return self.int_pow(m).frobenius(-k)

    def inverse(self, window=None):
        """Invert by factoring the leading monomial and summing a geometric
        series in the remaining 1 + u until the precision window is filled.

        ``window`` (relative precision) is needed only when the input is exact
        and not a monomial; it defaults to the context's prec_default.
        """
        if self.is_zero():
            raise DivisionByZeroError("inverse of zero at working precision")
        v = self.valuation()
        lead = self.ctx.monomial(-v, self.ctx.fq.inv(self.terms[v]))
        if len(self.terms) == 1 and self.prec == INF:
            return lead  # exact monomial inverse
        rel = self.prec - v if self.prec != INF else \
            Fraction(window if window is not None else self.ctx.prec_default)
        if rel <= 0:
            raise PrecisionError("no known digits to invert")
        u = self * lead - self.ctx.one()          # valuation > 0
        u = PerfSeries(self.ctx, u.terms, min(u.prec, rel))
        du = u.valuation()
        if u.terms and du <= 0:
            raise DivisionByZeroError("leading term did not normalize (bug)")
        acc = PerfSeries(self.ctx, self.ctx.one().terms, rel)
        cur = -u
        while not cur.is_zero() and cur.valuation() < rel:
            acc = acc + cur
            cur = cur * (-u)
        return acc * lead

    # -- comparisons / presentation ----------------------------------------

    def __eq__(self, other):
        if not isinstance(other, PerfSeries):
            return NotImplemented
        return (self.ctx == other.ctx and self.terms == other.terms
                and self.prec == other.prec)

    def __hash__(self):
        return hash((self.ctx, tuple(sorted(self.terms.items())), self.prec))

    def same_at_precision(self, other):
        """Equality of all terms below the common precision cutoff."""
        return (self - other).is_zero()

    def __repr__(self):
        if not self.terms:
            body = "0"
        else:
            parts = []
            for e in self.support():
                c = self.terms[e]
                cs = str(c[0]) if self.ctx.f == 1 else str(list(c))
                parts.append(f"{cs}*pi^{e}")
            body = " + ".join(parts)
        tail = "" if self.prec == INF else f" + O(pi^{self.prec})"
        return f"<{body}{tail}>"


class NormExp:
    """Exact norm data: valuation v plus the field scale c, |x| = p^(-c*v).

    ``lower_bound`` flags a truncated zero, where only v >= prec is certified.
    """

    __slots__ = ("v", "scale", "lower_bound")

    def __init__(self, v, scale, lower_bound=False):
        self.v = v
        self.scale = Fraction(scale)
        self.lower_bound = lower_bound

    @property
    def neg_log_norm(self):
        """-log_p |x| = c * v(x); INF for zero."""
        if self.v == INF:
            return INF
        return self.scale * self.v

    def is_zero_norm(self):
        return self.v == INF

    def __eq__(self, other):
        if isinstance(other, NormExp):
            return (self.v == other.v and self.scale == other.scale
                    and self.lower_bound == other.lower_bound)
        return NotImplemented

    def __repr__(self):
        rel = ">=" if self.lower_bound else "="
        return f"NormExp(v {rel} {self.v}, -log_p|x| {rel} {self.neg_log_norm})"


# ---------------------------------------------------------------------------
# Spec-level operation aliases
# ---------------------------------------------------------------------------

def ps_add(a, b):
    return a + b


def ps_mul(a, b):
    return a * b


def ps_inv(a, window=None):
    return a.inverse(window)


def ps_frobenius(a, k):
    return a.frobenius(k)


def ps_val(a):
    """Valuation as a NormExp; truncated zero is flagged as a lower bound."""
    if a.terms:
        return NormExp(a.valuation(), a.ctx.scale)
    if a.prec == INF:
        return NormExp(INF, a.ctx.scale)
    return NormExp(a.prec, a.ctx.scale, lower_bound=True)


# ---------------------------------------------------------------------------
# Newton polygons
# ---------------------------------------------------------------------------

def newton_polygon(coeffs):
    """Lower convex hull of {(i, v(P_i))} for P = sum P_i T^i.

    Returns ascending (slope, multiplicity) pairs; multiplicities are the
    horizontal lengths of the hull segments.  Coefficients that vanish at
    their stored precision contribute no point.
    """
    points = []
    for i, c in enumerate(coeffs):
        if c is not None and not c.is_zero():
            points.append((i, c.valuation()))
    if not points:
        raise DivisionByZeroError("Newton polygon of the zero polynomial")
    if points[-1][0] != len(coeffs) - 1:
        raise PrecisionError("leading coefficient vanishes at working precision")
    # left-to-right lower hull; ties toward the smaller ordinate are automatic
    # because each abscissa appears once
    hull = []
    for pt in points:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # pop while hull turn is not strictly convex (keeps collinear merged)
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    segments = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        slope = Fraction(y2 - y1, x2 - x1)
        if segments and segments[-1][0] == slope:
            segments[-1] = (slope, segments[-1][1] + (x2 - x1))
        else:
            segments.append((slope, x2 - x1))
    return segments


# ---------------------------------------------------------------------------
# Characteristic-p root extraction
# ---------------------------------------------------------------------------

def _poly_eval(coeffs, x):
    acc = x.ctx.zero()
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _poly_derivative(coeffs):
    ctx = coeffs[0].ctx
    out = []
    for i, c in enumerate(coeffs[1:], start=1):
        out.append(c.scale_coeff(i % ctx.p))
    return out


def ps_root(coeffs, want_val):
    """Root of P = sum coeffs[i] T^i with valuation want_val.

    Exact Frobenius solve for T^(p^k) - a; otherwise shift the wanted slope
    to zero and Hensel-lift a simple residue root over F_q.
    """
    ctx = coeffs[0].ctx
    p = ctx.p
    want_val = Fraction(want_val)
    d = len(coeffs) - 1
    if d < 1:
        raise ParameterError("polynomial must have positive degree")

    nonzero = [i for i, c in enumerate(coeffs) if not c.is_zero()]
    # pure radical T^(p^k) = a: exact Frobenius inverse
    if nonzero == [0, d]:
        k = 0
        dd = d
        while dd % p == 0:
            dd //= p
            k += 1
        if dd == 1:
            lead = coeffs[d]
            a = -coeffs[0] * lead.inverse()
            return a.frobenius(-k)

    slopes = newton_polygon(coeffs)
    if all(s != -want_val for s, _ in slopes):
        raise ParameterError(
            f"no Newton polygon segment at slope {-want_val}; slopes {slopes}")

    check_pexp(want_val, p, ctx.denom_bound)
    shift = ctx.monomial(want_val)
    shifted = [c * shift.int_pow(i) if i else c for i, c in enumerate(coeffs)]
    m = min(c.valuation() for c in shifted if not c.is_zero())
    normal = [c.shift(-m) for c in shifted]

    fq = ctx.fq
    residue = [c.terms.get(Fraction(0), fq.zero) for c in normal]
    deriv_res = [fq.mul(fq.from_int(i), c) for i, c in enumerate(residue[1:], start=1)]
    # root search in F_q by enumeration (q is small at desk scale)
    root0 = None
    saw_root = False
    for cand in fq.elements():
        acc = fq.zero
        for c in reversed(residue):
            acc = fq.add(fq.mul(acc, cand), c)
        if not fq.is_zero(acc):
            continue
        saw_root = True
        dacc = fq.zero
        for c in reversed(deriv_res):
            dacc = fq.add(fq.mul(dacc, cand), c)
        if not fq.is_zero(dacc):
            root0 = cand
            break
    if root0 is None:
        if saw_root:
            raise DegenerateRootError("all residue roots are multiple")
        raise UnsupportedResidueRootError(residue)

    y = ctx.series({0: root0})
    deriv = _poly_derivative(normal)
    target = min((c.prec for c in normal), default=INF)
    if target == INF:
        target = ctx.prec_default
    dv = _poly_eval(deriv, y).valuation()
    guard = 0
    while True:
        r = _poly_eval(normal, y)
        if r.is_zero() or r.valuation() - dv >= target:
            break
        dy = r * _poly_eval(deriv, y).inverse(window=target)
        y = y - dy
        guard += 1
        if guard > 64:
            raise PrecisionError("Hensel iteration failed to converge")
    y = PerfSeries(ctx, y.terms, min(y.prec, target))
    return y * shift
