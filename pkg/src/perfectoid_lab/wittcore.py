"""Truncated Witt vectors W(F)/p^N in Teichmuller coordinates.

A WittVec is a list of N PerfSeries coordinates (x_0, ..., x_{N-1}) standing
for sum p^n [x_n].  Addition folds pairs of Teichmuller terms at the same
p-level through the universal 2-variable carry table and propagates carries
upward; multiplication distributes p^m [a] * p^n [b] = p^(m+n) [a b] and folds.
Norm values are exact rationals throughout; no floating point.
"""

import math
from fractions import Fraction

from .errors import (
    NonUnitError,
    ParameterError,
    PrecisionError,
)
from .perfseries import PerfSeries
from .rationals import INF
from .symstrict import carry_tables


class WittVec:
    """Immutable truncated Witt vector over a PerfSeries field context."""

    __slots__ = ("ctx", "coords")

    def __init__(self, ctx, coords):
        coords = tuple(coords)
        for c in coords:
            if c.ctx != ctx:
                raise ParameterError("coordinate from a different field context")
        self.ctx = ctx
        self.coords = coords

    @property
    def n(self):
        return len(self.coords)

    def is_zero(self):
        return all(c.is_zero() for c in self.coords)

    def is_exact_zero(self):
        return all(c.is_zero() and c.prec == INF for c in self.coords)

    def is_unit(self):
        """Units are exactly the vectors with x_0 != 0 (p is in the radical)."""
        return not self.coords[0].is_zero()

    def truncate(self, n):
        if n > self.n:
            raise ParameterError("cannot extend p-adic precision")
        return WittVec(self.ctx, self.coords[:n])

    def __eq__(self, other):
        if not isinstance(other, WittVec):
            return NotImplemented
        return self.ctx == other.ctx and self.coords == other.coords

    def __hash__(self):
        return hash((self.ctx, self.coords))

    def same_at_precision(self, other):
        return w_sub(self, other).is_zero()

    def __repr__(self):
        return "Witt(" + ", ".join(repr(c) for c in self.coords) + ")"

    # operator sugar; the named functions below are the primary surface
    def __add__(self, other):
        return w_add(self, other)

    def __sub__(self, other):
        return w_sub(self, other)

    def __neg__(self):
        return w_neg(self)

    def __mul__(self, other):
        return w_mul(self, other)


# ---------------------------------------------------------------------------
# Constructors
# ---------------------------------------------------------------------------

def w_zero(ctx, n):
    return WittVec(ctx, [ctx.zero() for _ in range(n)])


def w_one(ctx, n):
    return WittVec(ctx, [ctx.one()] + [ctx.zero() for _ in range(n - 1)])


def w_teichmuller(a, n):
    """[a] = (a, 0, ..., 0)."""
    return WittVec(a.ctx, [a] + [a.ctx.zero() for _ in range(n - 1)])


def w_coords(x):
    return list(x.coords)


def teichmuller_digit(value, p, level):
    """Teichmuller lift of (value mod p) in Z/p^level, as an integer."""
    value %= p
    return pow(value, p ** (level - 1), p**level)


def integer_teich_digits(value, p, n):
    """Teichmuller coordinates of an integer modulo p^n (list of F_p values)."""
    value %= p**n
    digits = []
    for i in range(n):
        level = n - i
        d = value % p
        digits.append(d)
        value = (value - teichmuller_digit(d, p, level)) // p
    return digits


def w_from_int(ctx, value, n):
    """Embed an integer (e.g. p itself, or -1) into W(F)/p^n."""
    digits = integer_teich_digits(value, ctx.p, n)
    return WittVec(ctx, [ctx.series({0: d}) if d else ctx.zero() for d in digits])


_MINUS_ONE_MEMO = {}


def w_minus_one(ctx, n):
    key = (ctx, n)
    if key not in _MINUS_ONE_MEMO:
        _MINUS_ONE_MEMO[key] = w_from_int(ctx, -1, n)
    return _MINUS_ONE_MEMO[key]


# ---------------------------------------------------------------------------
# Carry-table folding
# ---------------------------------------------------------------------------

def _combine(ctx, a, b, table, kmax):
    """Merge the level-n terms [a] + [b] into coordinates via the carry table.

    Returns [s_0, ..., s_{kmax-1}] with [a] + [b] = sum p^k [s_k] (mod p^kmax).
    """
    out = [a + b]
    if kmax == 1:
        return out
    pow_a, pow_b = {}, {}

    def pa(e):
        v = pow_a.get(e)
        if v is None:
            v = pow_a[e] = a.frac_pow(e)
        return v

    def pb(e):
        v = pow_b.get(e)
        if v is None:
            v = pow_b[e] = b.frac_pow(e)
        return v

    for k in range(1, kmax):
        acc = ctx.zero()
        for c, ex, ey in table.compiled[k]:
            term = pa(ex) * pb(ey)
            if c != 1:
                term = term.scale_coeff(c)
            acc = acc + term
        out.append(acc)
    return out


def _fold_levels(ctx, levels):
    """Fold lists of Teichmuller terms per p-level into Witt coordinates."""
    n_total = len(levels)
    table = carry_tables(ctx.p, n_total)
    coords = []
    for n in range(n_total):
        pending = [t for t in levels[n] if not (t.is_zero() and t.prec == INF)]
        while len(pending) > 1:
            a = pending.pop()
            b = pending.pop()
            parts = _combine(ctx, a, b, table, n_total - n)
            if not (parts[0].is_zero() and parts[0].prec == INF):
                pending.append(parts[0])
            for k in range(1, len(parts)):
                if not (parts[k].is_zero() and parts[k].prec == INF):
                    levels[n + k].append(parts[k])
        coords.append(pending[0] if pending else ctx.zero())
    return WittVec(ctx, coords)


def _common_length(x, y):
    if x.ctx != y.ctx:
        raise ParameterError("mismatched field contexts")
    return min(x.n, y.n)


# ---------------------------------------------------------------------------
# Ring operations
# ---------------------------------------------------------------------------

def w_add(x, y):
    n = _common_length(x, y)
    levels = [[x.coords[i], y.coords[i]] for i in range(n)]
    return _fold_levels(x.ctx, levels)


def w_neg(x):
    return w_mul(w_minus_one(x.ctx, x.n), x)


def w_sub(x, y):
    return w_add(x, w_neg(y))


def w_mul(x, y):
    n = _common_length(x, y)
    levels = [[] for _ in range(n)]
    for m, a in enumerate(x.coords[:n]):
        if a.is_zero() and a.prec == INF:
            continue
        for k, b in enumerate(y.coords[: n - m]):
            if b.is_zero() and b.prec == INF:
                continue
            levels[m + k].append(a * b)
    return _fold_levels(x.ctx, levels)


def w_scalar_int(x, value):
    return w_mul(w_from_int(x.ctx, value, x.n), x)


def w_inv(x):
    """Inverse of a unit: [x_0]^{-1} times a geometric series in 1 - x[x_0]^{-1},
    which is p-adically nilpotent, so p-adic length n terms suffice.
    """
    if not x.is_unit():
        raise NonUnitError("Witt vector with x_0 = 0 at precision is not a unit")
    n = x.n
    t = w_teichmuller(x.coords[0].inverse(), n)
    u = w_sub(w_one(x.ctx, n), w_mul(x, t))   # divisible by p
    acc = w_one(x.ctx, n)
    cur = u
    for _ in range(1, n):
        acc = w_add(acc, cur)
        cur = w_mul(cur, u)
        if cur.is_exact_zero():
            break
    return w_mul(t, acc)


def w_frobenius(x, k=1):
    return WittVec(x.ctx, [c.frobenius(k) for c in x.coords])


def w_times_p(x):
    """p * x inside W/p^n: shift coordinates up, dropping the top one."""
    return WittVec(x.ctx, (x.ctx.zero(),) + x.coords[:-1])


def w_div_p(x):
    """Exact division by p: requires coordinate 0 to vanish at precision.

    If coordinate 0 is only zero at finite precision, that uncertainty is
    propagated into every quotient coordinate.
    """
    head = x.coords[0]
    if not head.is_zero():
        raise PrecisionError("division by p of a vector with nonzero x_0")
    rest = x.coords[1:]
    if head.prec != INF:
        rest = [PerfSeries(c.ctx, c.terms, min(c.prec, head.prec)) for c in rest]
    return WittVec(x.ctx, rest)


def w_shift_teich(x, exponent):
    """Multiply by the Teichmuller monomial [pi^exponent] (exact, coordinatewise)."""
    return WittVec(x.ctx, [c.shift(exponent) for c in x.coords])


# ---------------------------------------------------------------------------
# Gauss norms
# ---------------------------------------------------------------------------

class GaussNorm:
    """-log_p of a Gauss norm |x|_r as an exact rational (INF for zero).

    ``truncated`` flags that some coordinate vanishing at finite precision
    could lower the value below what the stored terms show.
    """

    __slots__ = ("value", "r", "truncated")

    def __init__(self, value, r, truncated=False):
        self.value = value
        self.r = r
        self.truncated = truncated

    def __repr__(self):
        rel = ">=" if self.truncated else "="
        return f"GaussNorm(-log_p|x|_{self.r} {rel} {self.value})"

    def __eq__(self, other):
        if isinstance(other, GaussNorm):
            return (self.value, self.r, self.truncated) == \
                (other.value, other.r, other.truncated)
        return NotImplemented


def gauss_norm(x, r):
    """|x|_r = sup_n p^{-n} |x_n|^r reported as -log_p value min_n(n + r*c*v(x_n))."""
    r = Fraction(r)
    if r <= 0:
        raise ParameterError("Gauss norm radius r must be positive")
    c = x.ctx.scale
    best = INF
    for n, coord in enumerate(x.coords):
        if coord.terms:
            cand = n + r * c * coord.valuation()
            if cand < best:
                best = cand
    truncated = False
    for n, coord in enumerate(x.coords):
        if not coord.terms and coord.prec != INF:
            if n + r * c * coord.prec <= best:
                truncated = True
                break
    return GaussNorm(best, r, truncated)


def coeff_sup_norm(x):
    """sup_n |x_n| reported as -log_p value min_n c*v(x_n)."""
    c = x.ctx.scale
    best = INF
    truncated = False
    for coord in x.coords:
        if coord.terms:
            best = min(best, c * coord.valuation())
    for coord in x.coords:
        if not coord.terms and coord.prec != INF and c * coord.prec <= best:
            truncated = True
            break
    return GaussNorm(best, None, truncated)


# ---------------------------------------------------------------------------
# Henselian Newton-Raphson
# ---------------------------------------------------------------------------

def w_poly_eval(coeffs, x):
    acc = w_zero(x.ctx, x.n)
    for c in reversed(coeffs):
        acc = w_add(w_mul(acc, x), c)
    return acc


def w_poly_derivative(coeffs):
    out = []
    for i, c in enumerate(coeffs[1:], start=1):
        out.append(w_scalar_int(c, i))
    return out


class HenselResult:
    __slots__ = ("root", "trace")

    def __init__(self, root, trace):
        self.root = root
        self.trace = trace


def w_hensel_root(coeffs, mode="radical", r=Fraction(1)):
    """Root of a monic P with P_0 in pW and P_1 a unit, via Newton-Raphson.

    Returns the root x (with x = 0 mod p and P(x) = 0 mod p^N) plus the
    Gauss-norm trace |P(x_k)|_r per iteration as diagnostics.  Iteration
    count is at most ceil(log2 N) + 1.
    """
    if mode != "radical":
        raise ParameterError(f"unsupported mode {mode!r}")
    if len(coeffs) < 2:
        raise ParameterError("polynomial must have positive degree")
    n = coeffs[0].n
    p0, p1 = coeffs[0], coeffs[1]
    if not p0.coords[0].is_zero():
        raise ParameterError("hypothesis violated: P_0 not divisible by p")
    if not p1.is_unit():
        raise ParameterError("hypothesis violated: P_1 not a unit")
    ctx = coeffs[0].ctx
    deriv = w_poly_derivative(coeffs)
    x = w_zero(ctx, n)
    trace = []
    max_iter = math.ceil(math.log2(n)) + 1 if n > 1 else 1
    for _ in range(max_iter + 1):
        fx = w_poly_eval(coeffs, x)
        trace.append(gauss_norm(fx, r))
        if fx.is_zero():
            return HenselResult(x, trace)
        dfx = w_poly_eval(deriv, x)
        x = w_sub(x, w_mul(fx, w_inv(dfx)))
    fx = w_poly_eval(coeffs, x)
    trace.append(gauss_norm(fx, r))
    if not fx.is_zero():
        raise PrecisionError("Newton-Raphson did not reach p-adic precision")
    return HenselResult(x, trace)
