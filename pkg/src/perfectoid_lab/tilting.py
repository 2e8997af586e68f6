"""Untilting: primitive elements, stable reduction, arithmetic in W(o_F)/(z).

A primitive z = [z_0] + p z_1 (|z_0| = 1/p, z_1 a unit) generates the kernel
of Theta; classes modulo (z, p^N) are canonicalized by stable representatives
(all higher Teichmuller coordinates bounded by the leading one), whose leading
norm is a class invariant.  The division algorithm, the norm, and the
mixed-characteristic root-finding iteration all live here.
"""

import math
from fractions import Fraction

from .errors import (
    DivisionByZeroError,
    InternalConsistencyError,
    NonConvergenceError,
    ParameterError,
    PrecisionError,
)
from .perfseries import NormExp, PerfSeries
from .rationals import INF, p_power_denominator_level
from .wittcore import (
    WittVec,
    w_add,
    w_div_p,
    w_from_int,
    w_inv,
    w_mul,
    w_neg,
    w_one,
    w_shift_teich,
    w_sub,
    w_teichmuller,
    w_times_p,
    w_zero,
)


def is_stable(x):
    """Stable: |x_n| <= |x_0| for all n > 0 (0 counts as stable).

    A coordinate that only vanishes at finite precision certifies the bound
    only when its precision reaches the leading valuation.
    """
    if x.is_zero():
        return True
    head = x.coords[0]
    if head.is_zero():
        return False
    v0 = head.valuation()
    for c in x.coords[1:]:
        if c.terms:
            if c.valuation() < v0:
                return False
        elif c.prec < v0:
            return False
    return True


def stable_factor(x):
    """Write a stable nonzero x as unit * [x_0]; returns (unit, x_0)."""
    if not is_stable(x) or x.is_zero():
        raise ParameterError("stable_factor needs a nonzero stable element")
    head = x.coords[0]
    unit = w_mul(x, w_teichmuller(head.inverse(), x.n))
    return unit, head


class Primitive:
    """A validated primitive element z together with its certified unit z_1."""

    __slots__ = ("z", "z1", "z1_inv", "zbar", "kind")

    def __init__(self, z, z1, z1_inv, kind=None):
        self.z = z
        self.z1 = z1
        self.z1_inv = z1_inv
        self.zbar = z.coords[0]
        self.kind = kind

    @property
    def ctx(self):
        return self.z.ctx

    @property
    def n(self):
        return self.z.n

    def __repr__(self):
        tag = f" ({self.kind})" if self.kind else ""
        return f"Primitive{tag}<z = {self.z!r}>"


def primitive_check(z, kind=None):
    """Validate Definition-level primitivity; names the failed condition.

    The unit z_1 = (z - [z_0])/p is only determined modulo p^(N-1) by a
    length-N z, so its top Teichmuller coordinate is padded with an honest
    unknown (precision-0 zero); any lift gives the same classes mod (z, p^N).
    """
    if z.n < 2:
        raise ParameterError("primitivity needs p-adic length N >= 2")
    for c in z.coords:
        if c.terms and c.valuation() < 0:
            raise ParameterError("z must lie in W(o_F)")
    from .errors import NotPrimitiveError

    zbar = z.coords[0]
    if zbar.is_zero():
        raise NotPrimitiveError("leading-norm", "z_0 = 0 at working precision")
    if z.ctx.scale * zbar.valuation() != 1:
        raise NotPrimitiveError(
            "leading-norm",
            f"-log_p |z_0| = {z.ctx.scale * zbar.valuation()} != 1")
    tail = w_div_p(w_sub(z, w_teichmuller(zbar, z.n)))
    z1bar = tail.coords[0]
    if z1bar.is_zero() or z1bar.valuation() != 0:
        raise NotPrimitiveError("unit", "z_1 = (z - [z_0])/p is not a unit")
    # top coordinate padded with 0: a lift choice, and every lift yields the
    # same classes modulo (z, p^N)
    z1 = WittVec(z.ctx, tail.coords + (z.ctx.zero(),))
    return Primitive(z, z1, w_inv(z1), kind)


def preset_primitive(kind, ctx, n):
    """The two explicit primitives: z = p - [pi] (Kummer, scale 1) and
    z = sum_{i<p} [1+pi]^(i/p) (cyclotomic, scale p/(p-1))."""
    p = ctx.p
    if kind == "kummer":
        if ctx.scale != 1:
            raise ParameterError("Kummer preset needs norm scale c = 1")
        z = w_sub(w_from_int(ctx, p, n), w_teichmuller(ctx.pi(), n))
    elif kind == "cyclotomic":
        if ctx.scale != Fraction(p, p - 1):
            raise ParameterError(
                "cyclotomic preset needs norm scale c = p/(p-1)")
        one_plus_pi_root = (ctx.one() + ctx.pi()).frobenius(-1)
        z = w_zero(ctx, n)
        for i in range(p):
            z = w_add(z, w_teichmuller(one_plus_pi_root.int_pow(i), n))
    else:
        raise ParameterError(f"unknown primitive preset {kind!r}")
    return primitive_check(z, kind)


# ---------------------------------------------------------------------------
# Stable reduction (division algorithm)
# ---------------------------------------------------------------------------

def _passes_proof_test(x):
    """|x_n| < p |x_0| for all n > 0, in exact -log_p form.

    Truncated-zero coordinates certify the strict bound only when their
    precision exceeds it.
    """
    head = x.coords[0]
    if head.is_zero():
        return False
    c = x.ctx.scale
    bound = c * head.valuation() - 1
    for co in x.coords[1:]:
        if co.terms:
            if not c * co.valuation() > bound:
                return False
        elif not c * co.prec > bound:
            return False
    return True


def _reduction_cap(x, window):
    """Certified pass bound: each non-stable pass shrinks the coordinate
    sup-norm by 1/p, so flushing a window of series precision W from minimum
    valuation v takes at most scale*(W - min(v,0)) passes plus slack.
    """
    c = x.ctx.scale
    vmin = Fraction(0)
    for co in x.coords:
        if co.terms:
            vmin = min(vmin, co.valuation())
    return 4 * x.n + math.ceil(c * (window - min(vmin, 0))) + 4


class ReduceResult:
    """Stable representative plus its certified floors.

    ``drop_floor``: the representative is exact as a ring element modulo
    (z, p^N) below this valuation; truncation drops along the iteration sit
    at or above it.  ``class_floor``: additionally capped at N*v(z_0),
    because W(o_F)/(z, p^N) only distinguishes norms above |p^N| = p^{-N};
    leading-norm claims about the class are certified below this only.
    """

    __slots__ = ("rep", "class_floor", "drop_floor")

    def __init__(self, rep, class_floor, drop_floor):
        self.rep = rep
        self.class_floor = class_floor
        self.drop_floor = drop_floor


def class_floor_cap(prim):
    """Valuation below which leading norms of stable reps are class
    invariants modulo (z, p^N): N * v(z_0) = N / scale."""
    return Fraction(prim.n) / prim.ctx.scale


def stable_reduce(x, prim, with_report=False):
    """Stable representative of x modulo z, at working precision.

    Iterates x <- x - x_shift * z1^{-1} * z; terminates when the shifted part
    vanishes at precision or the proof's stability test passes (one more pass
    then yields a stable element, padding choices being class-preserving).
    Exceeding the certified pass bound raises (bug indicator).
    """
    n = min(x.n, prim.n)
    x = x.truncate(n)
    for c in x.coords:
        if c.terms and c.valuation() < 0:
            raise ParameterError("stable_reduce input outside W(o_F)")
    cap = Fraction(n) / x.ctx.scale      # |p^N| bound of the quotient ring
    floor = min((c.prec for c in x.coords), default=INF)
    if is_stable(x):
        return ReduceResult(x, min(floor, cap), floor) if with_report else x
    z = prim.z.truncate(n)
    z1_inv = prim.z1_inv.truncate(n)
    # impose a working window so that zero classes flush to stored zero
    window = min((c.prec for c in x.coords), default=INF)
    if window == INF:
        window = x.ctx.prec_default
        x = WittVec(x.ctx, [PerfSeries(c.ctx, c.terms, min(c.prec, window))
                            for c in x.coords])
        floor = window

    def done(rep):
        if not with_report:
            return rep
        drop = min(floor, *(c.prec for c in rep.coords))
        return ReduceResult(rep, min(drop, cap), drop)

    pass_bound = _reduction_cap(x, window)
    for _ in range(pass_bound):
        floor = min(floor, *(c.prec for c in x.coords))
        if x.is_zero():
            return done(x)
        shifted = WittVec(x.ctx, x.coords[1:] + (x.ctx.zero(),))
        if shifted.is_zero():
            return done(x)
        final = _passes_proof_test(x)
        x = w_sub(x, w_mul(w_mul(shifted, z1_inv), z))
        if final:
            # stable by the proof's norm bound, which also covers content
            # beyond the stored windows; sanity-check the stored terms only
            head = x.coords[0]
            if head.terms and any(
                    c.terms and c.valuation() < head.valuation()
                    for c in x.coords[1:]):
                raise InternalConsistencyError(
                    "post-test reduction pass produced an unstable element")
            return done(x)
    raise NonConvergenceError(
        f"stable reduction exceeded {pass_bound} passes (bug indicator)")


def _reduce_any(x, prim):
    """Stable reduction (with floors) of a vector with possibly negative
    coordinate valuations, by scaling through an exact Teichmuller monomial.
    """
    vmin = Fraction(0)
    for c in x.coords:
        if c.terms:
            vmin = min(vmin, c.valuation())
    if vmin >= 0:
        return stable_reduce(x, prim, with_report=True)
    res = stable_reduce(w_shift_teich(x, -vmin), prim, with_report=True)
    return ReduceResult(w_shift_teich(res.rep, vmin),
                        res.class_floor + vmin, res.drop_floor + vmin)


# ---------------------------------------------------------------------------
# Untilt field arithmetic
# ---------------------------------------------------------------------------

class UntiltElt:
    """A class in W(o_F)/(z, p^N) (denominators allowed: bounded pole in
    [pi]), canonicalized by an eagerly computed stable representative.

    ``floor`` bounds where the representative is exact as a ring element
    (series truncation drops sit at or above it).  Claims about the CLASS
    (norms, equality) are additionally capped at N*v(z_0), the finest norm
    the quotient ring distinguishes.
    """

    __slots__ = ("prim", "rep", "floor")

    def __init__(self, prim, witt, _reduced=False, _floor=INF):
        if witt.n > prim.n:
            witt = witt.truncate(prim.n)
        self.prim = prim
        if _reduced:
            self.rep = witt
            self.floor = min(_floor, *(c.prec for c in witt.coords))
        else:
            res = _reduce_any(witt, prim)
            self.rep = res.rep
            self.floor = min(_floor, res.drop_floor)

    def class_floor(self):
        return min(self.floor, class_floor_cap(self.prim))

    def is_zero(self):
        """Zero as a class: no certified content below the class floor."""
        floor = self.class_floor()
        return all(not any(e < floor for e in c.terms)
                   for c in self.rep.coords)

    def __repr__(self):
        return f"Untilt<{self.rep!r}, floor {self.floor}>"


def untilt_class(prim, witt):
    return UntiltElt(prim, witt)


def untilt_from_int(prim, value):
    return UntiltElt(prim, w_from_int(prim.ctx, value, prim.n))


def untilt_teich(prim, a):
    """Class of the Teichmuller lift [a]; already stable."""
    return UntiltElt(prim, w_teichmuller(a, prim.n), _reduced=True)


def untilt_zero(prim):
    return UntiltElt(prim, w_zero(prim.ctx, prim.n), _reduced=True)


def untilt_one(prim):
    return UntiltElt(prim, w_one(prim.ctx, prim.n), _reduced=True)


def _require_same_prim(a, b):
    if a.prim is not b.prim and not a.prim.z.same_at_precision(b.prim.z):
        raise ParameterError("operands use different primitive moduli")


def _rep_vmin(x):
    vmin = Fraction(0)
    for c in x.coords:
        if c.terms:
            vmin = min(vmin, c.valuation())
    return vmin


def untilt_add(a, b):
    _require_same_prim(a, b)
    return UntiltElt(a.prim, w_add(a.rep, b.rep),
                     _floor=min(a.floor, b.floor))


def untilt_neg(a):
    return UntiltElt(a.prim, w_neg(a.rep), _floor=a.floor)


def untilt_sub(a, b):
    _require_same_prim(a, b)
    return UntiltElt(a.prim, w_sub(a.rep, b.rep),
                     _floor=min(a.floor, b.floor))


def untilt_mul(a, b):
    _require_same_prim(a, b)
    floor = min(a.floor + min(Fraction(0), _rep_vmin(b.rep)),
                b.floor + min(Fraction(0), _rep_vmin(a.rep)))
    return UntiltElt(a.prim, w_mul(a.rep, b.rep), _floor=floor)


def untilt_pow(a, k):
    out = untilt_one(a.prim)
    for _ in range(k):
        out = untilt_mul(out, a)
    return out


def untilt_inv(a):
    """Inverse of a nonzero class: factor the stable rep as unit * [x_0]
    and invert both parts (the Teichmuller one exactly).
    """
    if a.is_zero():
        raise DivisionByZeroError(
            "inversion of a class indistinguishable from zero")
    head = a.rep.coords[0]
    unit = w_mul(a.rep, w_teichmuller(head.inverse(), a.rep.n))
    rep = w_mul(w_inv(unit), w_teichmuller(head.inverse(), a.rep.n))
    # uncertified content of a enters the inverse through a^-2
    floor = a.floor - 2 * head.valuation()
    return UntiltElt(a.prim, rep, _floor=floor)


def untilt_div(a, b):
    return untilt_mul(a, untilt_inv(b))


def untilt_norm(a):
    """|class| = |y_0| for any stable representative (a class invariant,
    certified below the class floor)."""
    head = a.rep.coords[0]
    floor = a.class_floor()
    if head.terms and head.valuation() < floor:
        return NormExp(head.valuation(), a.prim.ctx.scale)
    if a.floor == INF and all(c.is_zero() and c.prec == INF
                              for c in a.rep.coords):
        return NormExp(INF, a.prim.ctx.scale)
    bound = floor
    for c in a.rep.coords:
        bound = min(bound, c.valuation() if c.terms else c.prec)
    return NormExp(bound, a.prim.ctx.scale, lower_bound=True)


def untilt_eq(a, b):
    return untilt_sub(a, b).is_zero()


def untilt_residue(a):
    """Image of the class in o_K/(p) = o_F/(z_0): the leading coordinate of
    the stable representative, capped at the representative's certified
    precision (canonical up to multiples of z_0)."""
    head = a.rep.coords[0]
    return PerfSeries(head.ctx, head.terms, min(head.prec, a.floor))


# ---------------------------------------------------------------------------
# Root finding in the untilt (mixed characteristic)
# ---------------------------------------------------------------------------

class RootStep:
    """Per-step certificate of the root-finding iteration."""

    __slots__ = ("index", "residual_neg_log", "step_neg_log", "required_residual",
                 "required_step")

    def __init__(self, index, residual_neg_log, step_neg_log, required_residual,
                 required_step):
        self.index = index
        self.residual_neg_log = residual_neg_log
        self.step_neg_log = step_neg_log
        self.required_residual = required_residual
        self.required_step = required_step

    def holds(self):
        return (self.residual_neg_log >= self.required_residual
                and self.step_neg_log >= self.required_step)

    def __repr__(self):
        return (f"RootStep({self.index}: -log|P(x)| = {self.residual_neg_log} "
                f">= {self.required_residual}, -log|dx| = {self.step_neg_log} "
                f">= {self.required_step})")


class RootResult:
    __slots__ = ("root", "steps", "exact")

    def __init__(self, root, steps, exact=False):
        self.root = root
        self.steps = steps
        self.exact = exact


def _untilt_poly_eval(coeffs, x):
    acc = untilt_zero(x.prim)
    for c in reversed(coeffs):
        acc = untilt_add(untilt_mul(acc, x), c)
    return acc


def _shift_poly(coeffs, x):
    """Coefficients of P(T + x) by exact binomial expansion."""
    d = len(coeffs) - 1
    out = [untilt_zero(x.prim) for _ in range(d + 1)]
    xpow = [untilt_one(x.prim)]
    for _ in range(d):
        xpow.append(untilt_mul(xpow[-1], x))
    for j, cj in enumerate(coeffs):
        if cj.is_zero():
            continue
        for i in range(j + 1):
            term = untilt_mul(cj, xpow[j - i])
            binom = math.comb(j, i) % (x.prim.ctx.p ** x.prim.n)
            if binom != 1:
                term = untilt_mul(term, untilt_from_int(x.prim, binom))
            out[i] = untilt_add(out[i], term)
    return out


def untilt_root(coeffs, steps):
    """Run the constructive root-finding iteration for a monic P over o_K.

    Produces x with certified |P(x_k)| <= p^{-k} and |x_{k+1} - x_k| <=
    p^{-k/d} at every executed step; stops early on an exact (at precision)
    root.  Char-p root extraction must be solvable over F_q at each step.
    """
    from .perfseries import ps_root

    if len(coeffs) < 2:
        raise ParameterError("polynomial must have positive degree")
    prim = coeffs[0].prim
    d = len(coeffs) - 1
    if not untilt_eq(coeffs[-1], untilt_one(prim)):
        raise ParameterError("polynomial must be monic")
    for c in coeffs:
        if not c.is_zero() and untilt_norm(c).neg_log_norm < 0:
            raise ParameterError("coefficients must lie in o_K")
    ctx = prim.ctx
    x = untilt_zero(prim)
    cert = []
    for k in range(steps):
        q = _shift_poly(coeffs, x)
        if q[0].is_zero():
            return RootResult(x, cert, exact=True)
        nu = [untilt_norm(qi).neg_log_norm for qi in q]
        nu0 = nu[0]
        s = max((Fraction(nu0 - nu[j], j) for j in range(1, d + 1)
                 if not q[j].is_zero()), default=None)
        if s is None:
            raise InternalConsistencyError("shifted polynomial lost its degree")
        uval = s / ctx.scale
        try:
            p_power_denominator_level(uval, ctx.p)
        except ValueError:
            raise PrecisionError(
                f"required norm exponent {s} is not realizable in the "
                f"p-divisible norm group (denominator not a p-power)") from None
        u = untilt_teich(prim, ctx.monomial(uval))
        upow = untilt_one(prim)
        rbar = []
        for i, qi in enumerate(q):
            if i:
                upow = untilt_mul(upow, u)
            if qi.is_zero():
                rbar.append(ctx.zero())
            else:
                rbar.append(untilt_residue(untilt_div(untilt_mul(qi, upow), q[0])))
        yres = ps_root(rbar, Fraction(0))
        x_next = untilt_add(x, untilt_mul(u, untilt_teich(prim, yres)))
        res_norm = untilt_norm(_untilt_poly_eval(coeffs, x_next)).neg_log_norm
        step = RootStep(k, res_norm, s, Fraction(k + 1), Fraction(k, d))
        cert.append(step)
        if not step.holds():
            raise InternalConsistencyError(f"root certificate failed: {step!r}")
        x = x_next
    return RootResult(x, cert)
