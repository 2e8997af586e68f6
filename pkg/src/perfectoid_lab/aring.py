"""The truncated imperfect period ring A (Laurent series in pi over Z/p^N),
its phi and Gamma actions, the embedding pi -> [1+pi]-1 into W(L), good lifts,
and the Gamma-decomposition / inversion toolkit used by overconvergent descent.

Window convention: an ASeries is known exactly for exponents in [lo, hi] at
the stated p-adic level; ``lo`` is a support bound (coefficients below it are
p-adically negligible at level N, the truncated form of the convergence
requirement on A), while terms above ``hi`` are genuinely unknown.  ``None``
means unbounded.  This module works coefficientwise over Q_p, so the residue
field is F_p (f = 1).
"""

import math
from fractions import Fraction

from .errors import (
    InternalConsistencyError,
    NonConvergenceError,
    ParameterError,
    PrecisionError,
)
from .perfseries import PerfSeries
from .rationals import INF, p_power_denominator_level
from .wittcore import (
    WittVec,
    gauss_norm,
    integer_teich_digits,
    teichmuller_digit,
    w_add,
    w_div_p,
    w_inv,
    w_mul,
    w_one,
    w_sub,
    w_teichmuller,
    w_zero,
)


def binom_int(n, k):
    """Exact integer binomial C(n, k), valid for negative n as well."""
    if k < 0:
        return 0
    if n >= 0:
        return math.comb(n, k)
    num = 1
    for i in range(k):
        num *= n - i
    return num // math.factorial(k)


def _min_window(a, b):
    """hi bounds: None means +infinity."""
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _lo_union(a, b):
    """lo bounds: None means -infinity (support may extend arbitrarily low)."""
    if a is None or b is None:
        return None
    return min(a, b)


class ASeries:
    """Sparse truncated element of A: {int exponent -> coefficient mod p^N}."""

    __slots__ = ("p", "level", "coeffs", "lo", "hi")

    def __init__(self, p, level, coeffs, window=(None, None)):
        self.p = p
        self.level = level
        lo, hi = window
        mod = p**level
        clean = {}
        for e, c in coeffs.items():
            if hi is not None and e > hi:
                continue
            c %= mod
            if c:
                clean[e] = c
        self.coeffs = clean
        if clean:
            support_lo = min(clean)
            lo = support_lo if lo is None else min(lo, support_lo)
        self.lo = lo
        self.hi = hi

    def _like(self, coeffs, window):
        return ASeries(self.p, self.level, coeffs, window)

    def _check(self, other):
        if (self.p, self.level) != (other.p, other.level):
            raise ParameterError("mismatched A-ring parameters")

    def is_zero(self):
        return not self.coeffs

    def is_exact_zero(self):
        return not self.coeffs and self.hi is None

    def support_min(self):
        if self.coeffs:
            return min(self.coeffs)
        return self.lo if self.lo is not None else 0

    def __add__(self, other):
        self._check(other)
        mod = self.p**self.level
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            s = (out.get(e, 0) + c) % mod
            if s:
                out[e] = s
            elif e in out:
                del out[e]
        return self._like(out, (_lo_union(self.lo, other.lo),
                                _min_window(self.hi, other.hi)))

    def __neg__(self):
        mod = self.p**self.level
        return self._like({e: mod - c for e, c in self.coeffs.items()},
                          (self.lo, self.hi))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        self._check(other)
        if self.is_exact_zero() or other.is_exact_zero():
            return ASeries(self.p, self.level, {})
        mod = self.p**self.level
        va, vb = self.support_min(), other.support_min()
        hi = _min_window(
            None if self.hi is None else self.hi + vb,
            None if other.hi is None else other.hi + va)
        lo = None if (self.lo is None or other.lo is None) else self.lo + other.lo
        out = {}
        for ea, ca in self.coeffs.items():
            for eb, cb in other.coeffs.items():
                e = ea + eb
                if hi is not None and e > hi:
                    continue
                s = (out.get(e, 0) + ca * cb) % mod
                if s:
                    out[e] = s
                elif e in out:
                    del out[e]
        return self._like(out, (lo, hi))

    def scale_int(self, k):
        return self._like({e: c * k for e, c in self.coeffs.items()},
                          (self.lo, self.hi))

    def times_p_power(self, k):
        return self.scale_int(self.p**k)

    def int_pow(self, n):
        if n < 0:
            raise ParameterError("use inverse() for negative powers")
        result = a_one(self.p, self.level)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def reduce_mod_p(self, ctx):
        """Image in F_p((pi)) as an integer-exponent PerfSeries."""
        if ctx.f != 1:
            raise ParameterError("A-ring works over F_p; need f = 1")
        prec = INF if self.hi is None else Fraction(self.hi + 1)
        return PerfSeries(ctx, {Fraction(e): (c % self.p,)
                                for e, c in self.coeffs.items()
                                if c % self.p}, prec)

    def __eq__(self, other):
        if not isinstance(other, ASeries):
            return NotImplemented
        return (self.p, self.level, self.coeffs, self.lo, self.hi) == \
            (other.p, other.level, other.coeffs, other.lo, other.hi)

    def __hash__(self):
        return hash((self.p, self.level, tuple(sorted(self.coeffs.items())),
                     self.lo, self.hi))

    def same_at_precision(self, other):
        return (self - other).is_zero()

    def __repr__(self):
        if not self.coeffs:
            body = "0"
        else:
            body = " + ".join(f"{c}*pi^{e}" for e, c in sorted(self.coeffs.items()))
        w = "" if self.hi is None else f" + O(pi^{self.hi + 1})"
        return f"A<{body}{w} mod {self.p}^{self.level}>"


def a_zero(p, level):
    return ASeries(p, level, {})


def a_one(p, level):
    return ASeries(p, level, {0: 1})


def a_pi(p, level):
    return ASeries(p, level, {1: 1})


def a_from_int(p, level, value):
    return ASeries(p, level, {0: value})


# ---------------------------------------------------------------------------
# phi and Gamma substitutions on A
# ---------------------------------------------------------------------------

def _series_inverse_unit(x, hi):
    """Inverse of a unit power series (support >= 0, constant term a unit)."""
    c0 = x.coeffs.get(0, 0)
    if c0 % x.p == 0 or any(e < 0 for e in x.coeffs):
        raise ParameterError("not a unit power series")
    if hi is None:
        raise PrecisionError(
            "window underflow: inverting a unit series needs a finite "
            "window bound hi")
    mod = x.p**x.level
    c0_inv = pow(c0, -1, mod)
    neg_u = a_one(x.p, x.level) - x.scale_int(c0_inv)    # v_pi >= 1
    acc = a_one(x.p, x.level)
    cur = neg_u
    for _ in range(hi + 2):
        if cur.is_zero():
            break
        acc = acc + cur
        cur = ASeries(x.p, x.level, (cur * neg_u).coeffs, (None, hi))
    acc = ASeries(x.p, x.level, acc.coeffs, (None, hi))
    return acc.scale_int(c0_inv)


def _phi_image_of_pi(p, level):
    """(1 + pi)^p - 1, exact."""
    return ASeries(p, level, {k: math.comb(p, k) for k in range(1, p + 1)})


def _gamma_image_of_pi(p, level, gamma):
    """(1 + pi)^gamma - 1 for an exact positive integer gamma."""
    if gamma < 1:
        raise ParameterError("gamma must be a positive integer")
    mod = p**level
    return ASeries(p, level, {k: binom_int(gamma, k) % mod
                              for k in range(1, gamma + 1)})


def _phi_inverse_image(p, level):
    """((1+pi)^p - 1)^{-1}, exact: pi^{-p} (1 + p h)^{-1} with h p-free."""
    s = _phi_image_of_pi(p, level)
    w = ASeries(p, level, {e - p: c for e, c in s.coeffs.items()})  # 1 + p*h
    mod = p**level
    acc = a_one(p, level)
    cur = a_one(p, level) - w
    while not cur.is_zero():
        acc = acc + cur
        cur = cur * (a_one(p, level) - w)
    return ASeries(p, level, {e - p: c for e, c in acc.coeffs.items()})


def _substitute(x, image, image_inv):
    """sum c_n * image^n; image_inv supplies negative powers."""
    pos = {n for n in x.coeffs if n > 0}
    neg = {n for n in x.coeffs if n < 0}
    out = a_zero(x.p, x.level)
    if 0 in x.coeffs:
        out = out + a_from_int(x.p, x.level, x.coeffs[0])
    powers = {}

    def power_of(base, n):
        key = (id(base), n)
        if key not in powers:
            powers[key] = base.int_pow(n)
        return powers[key]

    for n in sorted(pos):
        out = out + power_of(image, n).scale_int(x.coeffs[n])
    for n in sorted(neg, reverse=True):
        out = out + power_of(image_inv, -n).scale_int(x.coeffs[n])
    return out


def a_phi(x):
    """phi: pi -> (1 + pi)^p - 1 (exact substitution; exact on exact input)."""
    p, level = x.p, x.level
    image = _phi_image_of_pi(p, level)
    image_inv = _phi_inverse_image(p, level) if any(n < 0 for n in x.coeffs) \
        else None
    out = _substitute(x, image, image_inv)
    hi = None if x.hi is None else p * x.hi
    lo = None if x.lo is None else p * x.lo - (level - 1) * (p - 1)
    return ASeries(p, level, out.coeffs, (lo, hi))


def a_gamma(x, gamma, hi=None):
    """gamma: pi -> (1 + pi)^gamma - 1, gamma a positive integer unit of Z_p.

    Negative powers re-expand geometrically and need a finite window bound
    (taken from x.hi if present, else the ``hi`` argument).
    """
    p, level = x.p, x.level
    if gamma % p == 0:
        raise ParameterError("gamma must be a unit of Z_p")
    if gamma == 1:
        return x
    image = _gamma_image_of_pi(p, level, gamma)
    image_inv = None
    if any(n < 0 for n in x.coeffs):
        bound = x.hi if x.hi is not None else hi
        if bound is None:
            raise PrecisionError(
                "window underflow: gamma on negative powers needs a finite "
                "window (pass hi=...)")
        unit = ASeries(p, level, {e - 1: c for e, c in image.coeffs.items()})
        image_inv = _series_inverse_unit(unit, bound + 1)
        image_inv = ASeries(p, level,
                            {e - 1: c for e, c in image_inv.coeffs.items()})
    out = _substitute(x, image, image_inv)
    out_hi = x.hi if x.hi is not None else hi
    return ASeries(p, level, out.coeffs, (x.lo, out_hi))


def a_gauss_norm(x, r, scale):
    """|x|_r = sup_n |x_n| |pi_L|'^{nr} as -log_p value min_n(v_p(x_n) + n r c).

    Returns (value, truncated): the flag marks that unknown terms above the
    window could lower the value.
    """
    r = Fraction(r)
    if r <= 0:
        raise ParameterError("Gauss norm radius must be positive")
    scale = Fraction(scale)
    p = x.p
    best = INF
    for e, c in x.coeffs.items():
        vp = 0
        while c % p == 0:
            c //= p
            vp += 1
        cand = vp + e * r * scale
        if cand < best:
            best = cand
    truncated = x.hi is not None and (x.hi + 1) * r * scale <= best
    return best, truncated


# ---------------------------------------------------------------------------
# Embedding into W(L) and good lifts
# ---------------------------------------------------------------------------

_EMBED_MEMO = {}


def _embedded_pi(ctx, n):
    """B = [1 + pi] - 1 in W(L)/p^n, with its inverse (both exact)."""
    key = (ctx, n)
    hit = _EMBED_MEMO.get(key)
    if hit is None:
        b = w_sub(w_teichmuller(ctx.one() + ctx.pi(), n), w_one(ctx, n))
        hit = _EMBED_MEMO[key] = {"base": b, 1: b}
    return hit


def _embed_tail_slope(ctx, n):
    """kappa such that coordinate k of B^e has valuation >= e - k*kappa.

    Derived from the largest radius r* with |B|_r = |[pi]|_r: the Gauss-norm
    bound k + c*r*v(coord_k(B^e)) >= e*c*r gives v >= e - k/(c*r*).
    """
    memo = _embedded_pi(ctx, n)
    if "kappa" not in memo:
        b = memo["base"]
        c = ctx.scale
        r_star = None
        for k, coord in enumerate(b.coords):
            if k == 0 or not coord.terms:
                continue
            v = coord.valuation()
            if v < 1:
                bound = Fraction(k) / (c * (1 - v))
                r_star = bound if r_star is None else min(r_star, bound)
        memo["kappa"] = Fraction(0) if r_star is None else 1 / (c * r_star)
    return memo["kappa"]


def _embedded_pi_pow(ctx, n, k):
    memo = _embedded_pi(ctx, n)
    if k in memo:
        return memo[k]
    if k == 0:
        memo[0] = w_one(ctx, n)
    elif k < 0:
        if -1 not in memo:
            memo[-1] = w_inv(memo["base"])
        memo[k] = w_mul(_embedded_pi_pow(ctx, n, k + 1), memo[-1])
    else:
        memo[k] = w_mul(_embedded_pi_pow(ctx, n, k - 1), memo["base"])
    return memo[k]


def embed_a_to_w(x, ctx, n=None):
    """Ring embedding of A into W(L): pi -> [1+pi] - 1, integers by
    Teichmuller digits.  Reduces to the identity F_p((pi)) -> L modulo p.

    A finite window on x caps the result's coordinate precisions: unknown
    coefficients above hi contribute to coordinate k only at valuation
    >= (hi+1) - k*kappa.
    """
    if ctx.f != 1:
        raise ParameterError("embedding needs residue coefficients in F_p")
    n = x.level if n is None else n
    acc = w_zero(ctx, n)
    for e, c in sorted(x.coeffs.items()):
        digits = integer_teich_digits(c, ctx.p, n)
        const = WittVec(ctx, [ctx.series({0: d}) if d else ctx.zero()
                              for d in digits])
        acc = w_add(acc, w_mul(const, _embedded_pi_pow(ctx, n, e)))
    if x.hi is not None:
        kappa = _embed_tail_slope(ctx, n)
        coords = [PerfSeries(c.ctx, c.terms,
                             min(c.prec, Fraction(x.hi + 1) - k * kappa))
                  for k, c in enumerate(acc.coords)]
        acc = WittVec(ctx, coords)
    return acc


def good_lift_aseries(a, level):
    """Teichmuller-coefficient lift of an integer-exponent series, as ASeries:
    sum c_n pi^n  ->  sum [c_n] pi^n with [c_n] the Teichmuller integer.
    """
    if a.ctx.f != 1:
        raise ParameterError("good lifts need residue coefficients in F_p")
    p = a.ctx.p
    coeffs = {}
    for e, c in a.terms.items():
        if e.denominator != 1:
            raise ParameterError("good_lift needs integer exponents")
        coeffs[int(e)] = teichmuller_digit(c[0], p, level)
    hi = None if a.prec == INF else math.ceil(a.prec) - 1
    return ASeries(p, level, coeffs, (None, hi))


def good_lift(a, ctx, n):
    """The lift as an embedded Witt vector; reduces to ``a`` modulo p."""
    return embed_a_to_w(good_lift_aseries(a, n), ctx, n)


def good_lift_report(a, ctx, n, rs):
    """Check |x - [a]|_r < |x|_r on a grid of radii; returns (r0, rows).

    r0 is the largest grid radius at which the strict inequality holds (the
    lemma guarantees one exists for small r; the threshold itself is
    existential, so it is reported rather than asserted).
    """
    x = good_lift(a, ctx, n)
    diff = w_sub(x, w_teichmuller(a, n))
    rows = []
    r0 = None
    for r in rs:
        nx = gauss_norm(x, r)
        nd = gauss_norm(diff, r)
        holds = nd.value > nx.value  # -log_p comparison: smaller norm = larger value
        rows.append((Fraction(r), nx.value, nd.value, holds))
        if holds and (r0 is None or r > r0):
            r0 = Fraction(r)
    return r0, rows


# ---------------------------------------------------------------------------
# Gamma on the perfect field L
# ---------------------------------------------------------------------------

_GAMMA_IMAGE_MEMO = {}
_POW_MEMO = {}


def _cached_pow(tag, series, m):
    """Global power memo for immutable exact series (hot in the iterations)."""
    key = (tag, m)
    val = _POW_MEMO.get(key)
    if val is None:
        val = _POW_MEMO[key] = series.int_pow(m)
    return val


def _gamma_image_modp(ctx, gamma):
    """(1+pi)^gamma - 1 in F_p((pi)): exact (finite) for integer gamma."""
    key = (ctx, gamma)
    img = _GAMMA_IMAGE_MEMO.get(key)
    if img is None:
        base = ctx.one() + ctx.pi()
        img = _GAMMA_IMAGE_MEMO[key] = base.int_pow(gamma) - ctx.one()
    return img


def _l_gamma_int(a, gamma, window=INF):
    """Gamma substitution on integer-exponent PerfSeries."""
    ctx = a.ctx
    if a.is_zero():
        return a
    image = _gamma_image_modp(ctx, gamma)
    fq = ctx.fq
    acc = {}
    acc_prec = a.prec if window == INF else min(window, a.prec)
    image_inv = None
    inv_tag = None
    for e in sorted(a.terms, reverse=True):
        m = int(e)
        if m >= 0:
            val = _cached_pow((ctx, "gimg", gamma), image, m)
        else:
            if image_inv is None:
                # relative precision large enough for the lowest power used
                rel = a.prec - a.valuation() if a.prec != INF else \
                    (window - a.valuation() if window != INF
                     else ctx.prec_default)
                rel = max(rel, 1)
                image_inv = image.inverse(window=rel)
                inv_tag = (ctx, "gimg-inv", gamma, rel)
            val = _cached_pow(inv_tag, image_inv, -m)
        coeff = a.terms[e]
        acc_prec = min(acc_prec, val.prec) if val.prec != INF else acc_prec
        for e2, c2 in val.terms.items():
            prod = fq.mul(coeff, c2)
            cur = acc.get(e2)
            if cur is None:
                if not fq.is_zero(prod):
                    acc[e2] = prod
            else:
                s = fq.add(cur, prod)
                if fq.is_zero(s):
                    del acc[e2]
                else:
                    acc[e2] = s
    return PerfSeries(ctx, acc, acc_prec)


def l_gamma(a, gamma):
    """The Gamma action on L: integer-exponent part by direct substitution,
    fractional levels through Frobenius equivariance gamma phi^-k = phi^-k gamma.
    """
    if gamma % a.ctx.p == 0:
        raise ParameterError("gamma must be a unit of Z_p")
    if gamma == 1:
        return a
    ctx = a.ctx
    by_level = {}
    for e, c in a.terms.items():
        k = p_power_denominator_level(e, ctx.p)
        by_level.setdefault(k, {})[e] = c
    out = PerfSeries(ctx, {}, a.prec)
    for k, terms in sorted(by_level.items()):
        part = PerfSeries(ctx, terms, a.prec)
        part_int = part.frobenius(k)
        img = _l_gamma_int(part_int, gamma,
                           window=INF if part_int.prec == INF else part_int.prec)
        out = out + img.frobenius(-k)
    return out


def w_gamma(x, gamma):
    """Gamma on W(L), coordinatewise (the unique lift of gamma on L)."""
    return WittVec(x.ctx, [l_gamma(c, gamma) for c in x.coords])


class ContractionReport:
    """Measured contraction of (gamma - 1) against the certified bound.

    ``gap``: v((gamma-1)a) - v(a) + 1 (the analyticity exponent; certified
    >= p^n for integer-exponent inputs).  ``raw_gap``: the plain valuation
    difference, which scales by p^-k under x -> x^(1/p^k) (recorded, not
    asserted, for fractional exponents).
    """

    __slots__ = ("gap", "raw_gap", "bound", "integer_exponents", "holds")

    def __init__(self, gap, raw_gap, bound, integer_exponents):
        self.gap = gap
        self.raw_gap = raw_gap
        self.bound = bound
        self.integer_exponents = integer_exponents
        self.holds = (not integer_exponents) or gap >= bound

    def __repr__(self):
        return (f"ContractionReport(gap={self.gap}, raw={self.raw_gap}, "
                f"bound={self.bound}, holds={self.holds})")


def gamma_contraction_check(a, n, gamma):
    """Measure the valuation gain of (gamma - 1) on a, gamma in 1 + p^n Z_p."""
    p = a.ctx.p
    if gamma == 1:
        return ContractionReport(INF, INF, p**n, True)
    if (gamma - 1) % p**n:
        raise ParameterError(f"gamma = {gamma} is not in 1 + p^{n} Z_p")
    if a.is_zero():
        raise ParameterError("contraction gap of zero is undefined")
    diff = l_gamma(a, gamma) - a
    va = a.valuation()
    if diff.is_zero():
        return ContractionReport(INF, INF, p**n,
                                 a.denominator_level() == 0)
    raw = diff.valuation() - va
    return ContractionReport(raw + 1, raw, p**n, a.denominator_level() == 0)


# ---------------------------------------------------------------------------
# Direct-sum decomposition of L/(p) over A/(p)
# ---------------------------------------------------------------------------

def decompose_modp(x, m):
    """Write x (exponent denominators dividing p^m) as
    x = integral + sum_{g>0} (1+pi^(1/p^m))^g * comp_g
    with integer-exponent components; returns (integral, {g/p^m: comp_g}).
    """
    ctx = x.ctx
    p = ctx.p
    q = p**m
    if x.denominator_level() > m:
        raise ParameterError(
            f"exponent denominators exceed p^{m}")
    # bucket the monomial basis pi^(g/p^m)
    mono = {}
    for e, c in x.terms.items():
        scaled = e * q
        g = int(scaled) % q
        rest = (scaled - g) / q
        mono.setdefault(g, {})[rest] = c
    buckets = {}
    for g in range(q):
        terms = mono.get(g, {})
        prec = x.prec if x.prec == INF else x.prec - Fraction(g, q)
        buckets[g] = PerfSeries(ctx, terms, prec)
    # triangular change of basis: mono_j = sum_{g >= j} C(g, j) comp_g
    comp = {}
    for g in range(q - 1, -1, -1):
        acc = buckets[g]
        for g2 in range(g + 1, q):
            coef = math.comb(g2, g) % p
            if coef:
                acc = acc - comp[g2].scale_coeff(coef)
        comp[g] = acc
    integral = comp[0]
    tbar = {Fraction(g, q): comp[g] for g in range(1, q) if not comp[g].is_zero()
            or comp[g].prec != INF}
    return integral, tbar


def recompose_modp(integral, tbar, m, ctx):
    """Exact inverse of decompose_modp."""
    q = ctx.p**m
    out = integral
    for e, comp in tbar.items():
        g = int(e * q)
        if e * q != g or not 0 < g < q:
            raise ParameterError(f"component index {e} does not match level {m}")
        out = out + _beta_power(ctx, g, root_level=m) * comp
    return out


# ---------------------------------------------------------------------------
# Inverting gamma - 1 on the complement
# ---------------------------------------------------------------------------

def _choose_gamma_power(p, gamma, m_level):
    """Smallest m' >= 1 with v_p(gamma^m' - 1) >= max(m_level, 2 if p == 2
    else 1); then (gamma^m' - 1) keeps components and contracts strictly.
    Deterministic tie-break toward the smaller congruence level.
    """
    need = max(m_level, 2 if p == 2 else 1)
    mp = 1
    cap = 8 * p ** (m_level + 3)
    while mp <= cap:
        g = gamma**mp - 1
        v = 0
        while g % p == 0 and v < need:
            g //= p
            v += 1
        if v >= need:
            return mp
        mp += 1
    raise NonConvergenceError(
        f"no admissible power of gamma = {gamma} up to {cap}")


def _beta_power(ctx, k, root_level=0):
    """(1 + pi^(1/p^root_level))^k, exact and memoized."""
    base = ctx.one() + (ctx.pi() if root_level == 0
                        else ctx.pi().frobenius(-root_level))
    return _cached_pow((ctx, "beta", root_level), base, k)


def _gamma_on_component(e, x, gamma, ctx):
    """gamma(beta^e x) = beta^e' (beta^k gamma(x)) with gamma e = k + e'."""
    ge = gamma * e
    k = math.floor(ge)
    e2 = ge - k
    val = _l_gamma_int(x, gamma, INF)
    if k:
        val = _beta_power(ctx, k) * val
    return e2, val


def invert_gamma_minus1_modp(tbar, gamma, ctx, window=None):
    """Solve (gamma - 1) z = t on the complement T-bar, componentwise.

    Each component e of denominator level m_e gets its own power gamma^m'
    in 1 + p^n Z_p (n >= max(m_e, 2 for p = 2)), giving a certified strict
    contraction; the solution of (gamma^m' - 1) z' = t_e is then spread
    through 1 + gamma + ... + gamma^(m'-1), which permutes components.
    Returns (z_tbar, residual_ok) with an exact componentwise residual
    certificate at each component's achieved window.
    """
    p = ctx.p
    if gamma == 1 or gamma % p == 0:
        raise ParameterError("gamma must be a unit of Z_p different from 1")
    if not tbar:
        return {}, True
    out = {}
    for e, t in sorted(tbar.items()):
        m_e = p_power_denominator_level(e, p)
        win = t.prec if t.prec != INF else \
            (Fraction(window) if window is not None else ctx.prec_default)
        mp = _choose_gamma_power(p, gamma, m_e)
        g2 = gamma**mp
        w_frac = (g2 - 1) * e
        if w_frac.denominator != 1:
            raise InternalConsistencyError("component shift is not integral")
        beta_w = _beta_power(ctx, int(w_frac))
        d = beta_w - ctx.one()
        d_inv_key = (ctx, "dinv", int(w_frac), win)
        d_inv = _POW_MEMO.get((d_inv_key, 1))
        if d_inv is None:
            d_inv = _POW_MEMO[(d_inv_key, 1)] = \
                d.inverse(window=win + d.valuation())
        z = ctx.zero(prec=win)
        guard = 0
        while True:
            r = t - ((d * z) + beta_w * (_l_gamma_int(z, g2, win) - z))
            r = PerfSeries(ctx, r.terms, min(r.prec, win))
            if r.is_zero():
                break
            z = z + d_inv * r
            guard += 1
            if guard > 4 * math.ceil(win) + 16:
                raise PrecisionError(
                    "gamma-inversion failed to contract (window too small)")
        # the uncertified residual (>= r.prec) maps back through d^-1, so the
        # solution is only certified below r.prec - v(d)
        z = PerfSeries(ctx, z.terms, min(z.prec, r.prec - d.valuation()))
        # spread (1 + gamma + ... + gamma^(mp-1)) z' over the components
        cur_e, cur = e, z
        for j in range(mp):
            if cur_e in out:
                out[cur_e] = out[cur_e] + cur
            else:
                out[cur_e] = cur
            if j < mp - 1:
                cur_e, cur = _gamma_on_component(cur_e, cur, gamma, ctx)
    out = {e: z for e, z in out.items() if not (z.is_zero() and z.prec == INF)}
    # componentwise residual certificate: (gamma - 1)(sum) - t = 0 at precision
    applied = {}
    for e, z in out.items():
        e_img, val = _gamma_on_component(e, z, gamma, ctx)
        applied[e_img] = applied.get(e_img, ctx.zero()) + val
        applied[e] = applied.get(e, ctx.zero()) - z
    residual_ok = True
    for e in set(applied) | set(tbar):
        diff = applied.get(e, ctx.zero()) - tbar.get(e, ctx.zero())
        if not diff.is_zero():
            residual_ok = False
    return out, residual_ok


# ---------------------------------------------------------------------------
# The lifted splitting x = embed(y) + (gamma - 1)(lift of z)
# ---------------------------------------------------------------------------

class SplitResult:
    """Certified splitting of a Witt vector: x = embed(y) + (gamma-1)(T-lift
    of z) at p-adic level N and Laurent window ``window`` (the pessimistic
    common window of all digit computations, per the single-window-per-level
    precision model)."""

    __slots__ = ("y", "z", "gamma", "window", "residual_ok")

    def __init__(self, y, z, gamma, window, residual_ok):
        self.y = y
        self.z = z
        self.gamma = gamma
        self.window = window
        self.residual_ok = residual_ok

    def __repr__(self):
        return f"SplitResult(y={self.y!r}, z components {sorted(self.z)})"


def lift_telt(z, ctx, n):
    """Lift of a T-element: sum_e [1+pi]^e * embed(z_e) (exact Teichmuller
    p-power roots of [1+pi])."""
    acc = w_zero(ctx, n)
    for e, comp in sorted(z.items()):
        k = p_power_denominator_level(e, ctx.p)
        g = int(e * ctx.p**k)
        unit = w_teichmuller(_beta_power(ctx, g, root_level=k), n)
        acc = w_add(acc, w_mul(unit, embed_a_to_w(comp, ctx, n)))
    return acc


def split_lift(x, gamma, n=None):
    """Devissage over p-digits: write x in W(L)/p^n uniquely as
    embed(y) + (gamma - 1)(lift of z) with y in A, z in T.
    """
    ctx = x.ctx
    if ctx.f != 1:
        raise ParameterError("split_lift needs residue coefficients in F_p")
    n = x.n if n is None else n
    x = x.truncate(n)
    p = ctx.p
    y_total = a_zero(p, n)
    z_total = {}
    cur = x
    for i in range(n):
        level = n - i
        x0 = cur.coords[0]
        m = x0.denominator_level()
        integral, tbar = decompose_modp(x0, m)
        zbar, ok = invert_gamma_minus1_modp(tbar, gamma, ctx) if tbar \
            else ({}, True)
        if not ok:
            raise InternalConsistencyError("uncertified gamma-inversion")
        y_lift_a = good_lift_aseries(integral, level)
        y_lift_w = embed_a_to_w(y_lift_a, ctx, level)
        z_lift_a = {e: good_lift_aseries(comp, level) for e, comp in zbar.items()}
        z_lift_w = lift_telt(z_lift_a, ctx, level)
        gz = w_sub(w_gamma(z_lift_w, gamma), z_lift_w)
        cur = w_div_p(w_sub(cur, w_add(y_lift_w, gz)))
        y_total = y_total + ASeries(p, n, y_lift_a.coeffs,
                                    (y_lift_a.lo, y_lift_a.hi)).times_p_power(i)
        for e, comp in z_lift_a.items():
            lifted = ASeries(p, n, comp.coeffs, (comp.lo, comp.hi)).times_p_power(i)
            z_total[e] = z_total.get(e, a_zero(p, n)) + lifted
    # certification below the common certified window
    windows = [y_total.hi] + [z.hi for z in z_total.values()]
    finite = [w for w in windows if w is not None]
    w_cert = Fraction(min(finite) + 1) if finite else INF
    lifted = lift_telt(z_total, ctx, n)
    recon = w_add(embed_a_to_w(y_total, ctx, n),
                  w_sub(w_gamma(lifted, gamma), lifted))
    residual = w_sub(x, recon)
    ok = all(not any(e < min(c.prec, w_cert) for e in c.terms)
             for c in residual.coords)
    return SplitResult(y_total, z_total, gamma, w_cert, ok)
