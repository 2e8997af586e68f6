"""Etale (phi, Gamma)-modules as matrix data, the good-basis iteration, and
the overconvergent descent iteration with its certified norm schedule.

Matrices act by phi(e_j) = sum_i A_ij e_i; a change of basis by U turns A
into U^{-1} A phi(U) and G into U^{-1} G gamma(U).  The descent loop conjugates
the gamma-matrix into the imperfect subring A and certifies, step by step,
the schedule |Y_l|_r <= eps^(l+2) with exact rational norm exponents.
"""

import math
import random
from fractions import Fraction

from .errors import (
    InternalConsistencyError,
    NonConvergenceError,
    ParameterError,
    PrecisionError,
)
from .aring import (
    ASeries,
    a_gamma,
    a_gauss_norm,
    a_one,
    a_phi,
    a_zero,
    embed_a_to_w,
    lift_telt,
    split_lift,
    w_gamma,
)
from .perfseries import PerfSeries
from .rationals import INF
from .wittcore import (
    WittVec,
    gauss_norm,
    w_add,
    w_div_p,
    w_frobenius,
    w_inv,
    w_mul,
    w_neg,
    w_one,
    w_sub,
    w_teichmuller,
    w_times_p,
    w_zero,
)


# ---------------------------------------------------------------------------
# Small matrix toolkit over either layer
# ---------------------------------------------------------------------------

class WLayer:
    """Adapter for matrices over truncated W(L)."""

    name = "W"

    def __init__(self, ctx, n):
        self.ctx = ctx
        self.n = n

    def zero(self):
        return w_zero(self.ctx, self.n)

    def one(self):
        return w_one(self.ctx, self.n)

    add = staticmethod(w_add)
    sub = staticmethod(w_sub)
    mul = staticmethod(w_mul)
    neg = staticmethod(w_neg)

    def phi(self, x, k=1):
        return w_frobenius(x, k)

    def gamma(self, x, g):
        return w_gamma(x, g)

    def inv_unit(self, x):
        return w_inv(x)

    def is_zero(self, x):
        return x.is_zero()

    def is_unit(self, x):
        return x.is_unit()

    def divisible_by_p(self, x):
        return x.coords[0].is_zero()


class ALayer:
    """Adapter for matrices over truncated A."""

    name = "A"

    def __init__(self, p, n, gamma_window=None):
        self.p = p
        self.n = n
        self.gamma_window = gamma_window

    def zero(self):
        return a_zero(self.p, self.n)

    def one(self):
        return a_one(self.p, self.n)

    @staticmethod
    def add(a, b):
        return a + b

    @staticmethod
    def sub(a, b):
        return a - b

    @staticmethod
    def mul(a, b):
        return a * b

    @staticmethod
    def neg(a):
        return -a

    def phi(self, x, k=1):
        for _ in range(k):
            x = a_phi(x)
        return x

    def gamma(self, x, g):
        return a_gamma(x, g, hi=self.gamma_window)

    def inv_unit(self, x):
        raise ParameterError("general inversion on the A layer is unsupported")

    def is_zero(self, x):
        return x.is_zero()

    def is_unit(self, x):
        return any(c % self.p for c in x.coeffs.values())

    def divisible_by_p(self, x):
        return all(c % self.p == 0 for c in x.coeffs.values())


def mat_identity(layer, d):
    return [[layer.one() if i == j else layer.zero() for j in range(d)]
            for i in range(d)]


def mat_add(layer, a, b):
    return [[layer.add(x, y) for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_sub(layer, a, b):
    return [[layer.sub(x, y) for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_mul(layer, a, b):
    d = len(a)
    k = len(b)
    out = []
    for i in range(d):
        row = []
        for j in range(len(b[0])):
            acc = layer.zero()
            for t in range(k):
                acc = layer.add(acc, layer.mul(a[i][t], b[t][j]))
            row.append(acc)
        out.append(row)
    return out


def mat_map(f, a):
    return [[f(x) for x in row] for row in a]


def mat_is_zero(layer, a):
    return all(layer.is_zero(x) for row in a for x in row)


def mat_det(layer, a):
    d = len(a)
    if d == 1:
        return a[0][0]
    if d == 2:
        return layer.sub(layer.mul(a[0][0], a[1][1]),
                         layer.mul(a[0][1], a[1][0]))
    if d == 3:
        total = layer.zero()
        for cols, sign in (((0, 1, 2), 1), ((1, 2, 0), 1), ((2, 0, 1), 1),
                           ((2, 1, 0), -1), ((1, 0, 2), -1), ((0, 2, 1), -1)):
            term = layer.mul(layer.mul(a[0][cols[0]], a[1][cols[1]]),
                             a[2][cols[2]])
            total = layer.add(total, term if sign > 0 else layer.neg(term))
        return total
    raise ParameterError("determinants implemented for rank <= 3")


def mat_inv_one_plus_nilpotent(layer, u):
    """Inverse of U = 1 (mod p): geometric series, p-adically nilpotent."""
    d = len(u)
    one = mat_identity(layer, d)
    delta = mat_sub(layer, one, u)
    for row in delta:
        for x in row:
            if not layer.divisible_by_p(x):
                raise ParameterError("matrix is not congruent to 1 mod p")
    acc = one
    cur = delta
    for _ in range(1, layer.n):
        acc = mat_add(layer, acc, cur)
        cur = mat_mul(layer, cur, delta)
        if mat_is_zero(layer, cur):
            break
    return acc


def mat_inv(layer, u):
    """Inverse of an invertible matrix (rank <= 2, or anything = 1 mod p)."""
    d = len(u)
    if d == 1:
        return [[layer.inv_unit(u[0][0])]]
    one_mod_p = all(
        layer.divisible_by_p(layer.sub(u[i][j],
                                       layer.one() if i == j else layer.zero()))
        for i in range(d) for j in range(d))
    if one_mod_p:
        return mat_inv_one_plus_nilpotent(layer, u)
    if d == 2:
        det_inv = layer.inv_unit(mat_det(layer, u))
        return [[layer.mul(u[1][1], det_inv), layer.mul(layer.neg(u[0][1]), det_inv)],
                [layer.mul(layer.neg(u[1][0]), det_inv), layer.mul(u[0][0], det_inv)]]
    raise ParameterError("general inverse implemented for rank <= 2")


def mat_phi(layer, a, k=1):
    return mat_map(lambda x: layer.phi(x, k), a)


def mat_gamma(layer, a, g):
    return mat_map(lambda x: layer.gamma(x, g), a)


def mat_gauss_norm_w(a, r):
    """-log_p of the entrywise-sup Gauss norm (min over entries); INF if zero."""
    best = INF
    truncated = False
    for row in a:
        for x in row:
            g = gauss_norm(x, r)
            truncated = truncated or g.truncated
            if g.value < best:
                best = g.value
    return best, truncated


# ---------------------------------------------------------------------------
# Modules and validation
# ---------------------------------------------------------------------------

DEFAULT_GAMMA_EXPONENT = 2  # gamma = 1 + p^2, per the descent proof


class PhiGammaModule:
    """Rank-d module data: phi-matrix A, one gamma-matrix G, over a layer."""

    __slots__ = ("layer", "d", "a_mat", "g_mat", "gamma", "validated")

    def __init__(self, layer, d, a_mat, g_mat, gamma, validated=False):
        self.layer = layer
        self.d = d
        self.a_mat = a_mat
        self.g_mat = g_mat
        self.gamma = gamma
        self.validated = validated

    def __repr__(self):
        return (f"PhiGammaModule(layer={self.layer.name}, d={self.d}, "
                f"gamma={self.gamma})")


def pgm_validate(module):
    """Check the etale condition and the phi/gamma commutation exactly.

    Returns the module marked validated; raises naming the failed invariant
    and the offending residual.
    """
    layer, d = module.layer, module.d
    det = mat_det(layer, module.a_mat)
    if not layer.is_unit(det):
        raise ParameterError(
            "not etale: det(A) is not a unit at working precision")
    lhs = mat_mul(layer, module.a_mat, mat_phi(layer, module.g_mat))
    rhs = mat_mul(layer, module.g_mat, mat_gamma(layer, module.a_mat,
                                                 module.gamma))
    residual = mat_sub(layer, lhs, rhs)
    if not mat_is_zero(layer, residual):
        raise ParameterError(
            f"commutation A phi(G) = G gamma(A) fails; residual {residual!r}")
    return PhiGammaModule(layer, d, module.a_mat, module.g_mat, module.gamma,
                          validated=True)


def change_basis(module, u):
    """New matrices U^{-1} A phi(U), U^{-1} G gamma(U)."""
    layer = module.layer
    u_inv = mat_inv(layer, u)
    a_new = mat_mul(layer, mat_mul(layer, u_inv, module.a_mat),
                    mat_phi(layer, u))
    g_new = mat_mul(layer, mat_mul(layer, u_inv, module.g_mat),
                    mat_gamma(layer, u, module.gamma))
    return PhiGammaModule(layer, module.d, a_new, g_new, module.gamma)


# ---------------------------------------------------------------------------
# Good-basis iteration (pure phi-module descent to the overconvergent ring)
# ---------------------------------------------------------------------------

class GoodBasisResult:
    __slots__ = ("u_mat", "g_limit", "rows", "frobenius_power")

    def __init__(self, u_mat, g_limit, rows, frobenius_power):
        self.u_mat = u_mat
        self.g_limit = g_limit
        self.rows = rows
        self.frobenius_power = frobenius_power


def _matrix_coeff_sup(coords_mat):
    """min over entries of scale * v(entry) for char-p matrices; INF if zero."""
    best = INF
    for row in coords_mat:
        for x in row:
            if x.terms:
                cand = x.ctx.scale * x.valuation()
                if cand < best:
                    best = cand
    return best


def good_basis(f_mat, ctx, n, frobenius_power=1):
    """Conjugate F = 1 (mod p) into a matrix G with |G - 1|_1 < 1.

    Runs the iteration U_k = 1 + p^k [Y_k], choosing at each step the smallest
    m >= 0 with |phi^{-m}(X_k)|' < p^{k/2} (strict; ties toward smaller m).
    The Frobenius power used in the conjugation is a parameter (default 1).
    """
    layer = WLayer(ctx, n)
    d = len(f_mat)
    one = mat_identity(layer, d)
    for i in range(d):
        for j in range(d):
            delta = layer.sub(f_mat[i][j], one[i][j])
            if not layer.divisible_by_p(delta):
                raise ParameterError("good_basis needs F = 1 mod p")
    fn = f_mat
    gn = one
    u_total = one
    rows = []
    for k in range(1, n):
        diff = mat_sub(layer, fn, gn)
        x_k = diff
        for _ in range(k):
            try:
                x_k = mat_map(w_div_p, x_k)
            except PrecisionError as exc:
                raise InternalConsistencyError(
                    f"F_k - G_k not divisible by p^{k}: {exc}") from None
        xbar = mat_map(lambda w: w.coords[0], x_k)
        sup = _matrix_coeff_sup(xbar)
        if sup == INF:
            rows.append({"k": k, "m": 0, "xbar_sup": INF})
            continue
        m = 0
        bound = -Fraction(k, 2)
        while sup / ctx.p**m <= bound:
            m += 1
        ybar = mat_map(lambda w: ctx.zero(), xbar)
        for h in range(1, m + 1):
            shifted = mat_map(lambda w, h=h: w.frobenius(-h), xbar)
            ybar = [[ybar[i][j] - shifted[i][j] for j in range(d)]
                    for i in range(d)]
        u_k = [[layer.add(one[i][j], _p_power_teich(ybar[i][j], k, n))
                for j in range(d)] for i in range(d)]
        fn = mat_mul(layer, mat_mul(layer, mat_inv(layer, u_k), fn),
                     mat_phi(layer, u_k, frobenius_power))
        shift_m = mat_map(lambda w: w.frobenius(-m), xbar)
        gn = [[layer.add(gn[i][j], _p_power_teich(shift_m[i][j], k, n))
               for j in range(d)] for i in range(d)]
        u_total = mat_mul(layer, u_total, u_k)
        rows.append({"k": k, "m": m, "xbar_sup": sup})
    # certification: |G - 1|_1 < 1 strictly, and U = 1 mod p
    gm1 = mat_sub(layer, gn, one)
    nu1, _ = mat_gauss_norm_w(gm1, Fraction(1))
    if not nu1 > 0:
        raise InternalConsistencyError(
            f"good_basis limit fails |G-1|_1 < 1 (value {nu1})")
    for i in range(d):
        for j in range(d):
            if not layer.divisible_by_p(layer.sub(u_total[i][j], one[i][j])):
                raise InternalConsistencyError("U is not 1 mod p")
    return GoodBasisResult(u_total, gn, rows, frobenius_power)


def _p_power_teich(series, k, n):
    """p^k [series] as a WittVec of length n."""
    w = w_teichmuller(series, n)
    for _ in range(k):
        w = w_times_p(w)
    return w


# ---------------------------------------------------------------------------
# Overconvergent descent
# ---------------------------------------------------------------------------

class DescentReport:
    """Ledger of one descent run: chosen radius, exact norm schedule, final
    A-layer matrices, and certification flags.
    """

    __slots__ = ("r", "eta", "iterations", "schedule", "u_mat", "h_mat_a",
                 "a_mat_a", "flags", "gamma")

    def __init__(self, r, eta, iterations, schedule, u_mat, h_mat_a, a_mat_a,
                 flags, gamma):
        self.r = r
        self.eta = eta
        self.iterations = iterations
        self.schedule = schedule
        self.u_mat = u_mat
        self.h_mat_a = h_mat_a
        self.a_mat_a = a_mat_a
        self.flags = flags
        self.gamma = gamma

    def ok(self):
        return all(self.flags.values())


class _ScheduleViolation(Exception):
    pass


def descent_work_precision(ctx, n, content_depth=None):
    """Series-precision budget for one descent run.

    The p-adic digit k of a split only retains about a p^-k share of the
    window (Teichmuller carries take p^k-th roots), each gamma-inversion
    exit costs its contraction margin, and phi doubles the exponent depth of
    the input content, so the budget scales like p^(n-1) times the depth.
    """
    depth = Fraction(max(content_depth or 0, 1))
    return max(ctx.prec_default,
               ctx.p ** (n - 1) * (ctx.p * depth + 4 * n))


def _module_content_depth(module):
    depth = Fraction(0)
    for mat in (module.a_mat, module.g_mat):
        for row in mat:
            for w in row:
                for c in w.coords:
                    if c.terms:
                        depth = max(depth, max(c.terms))
    return depth


def _cap_precision(mat, ctx, budget):
    out = []
    for row in mat:
        new_row = []
        for w in row:
            coords = [PerfSeries(c.ctx, c.terms, min(c.prec, budget))
                      for c in w.coords]
            new_row.append(WittVec(ctx, coords))
        out.append(new_row)
    return out


def _split_matrix(mat, gamma):
    """split_lift entrywise; returns (X_w, Y_w, y_mats, z_maps, ok, window)."""
    d = len(mat)
    ctx = mat[0][0].ctx
    n = mat[0][0].n
    y_mat, z_mat, xw, yw = [], [], [], []
    ok = True
    window = INF
    for i in range(d):
        ry, rz, rxw, ryw = [], [], [], []
        for j in range(d):
            s = split_lift(mat[i][j], gamma)
            ok = ok and s.residual_ok
            window = min(window, s.window)
            ry.append(s.y)
            rz.append(s.z)
            rxw.append(embed_a_to_w(s.y, ctx, n))
            ryw.append(lift_telt(s.z, ctx, n))
        y_mat.append(ry)
        z_mat.append(rz)
        xw.append(rxw)
        yw.append(ryw)
    return xw, yw, y_mat, z_mat, ok, window


def _zero_below_window(mat, window):
    """True if every entry has no terms below min(its precision, window)."""
    for row in mat:
        for w in row:
            for c in w.coords:
                cap = min(c.prec, window)
                if any(e < cap for e in c.terms):
                    return False
    return True


def cc_descent(module, gamma=None, r_grid=None, max_scan=8, work_prec=None):
    """Descend a W-layer module with A = G = 1 (mod p) to the A layer.

    Scans r over a decreasing grid until the measured splitting satisfies the
    eps-condition, iterates U <- U (1 - Y_l) until the T-part vanishes at
    precision, then certifies: the norm schedule |Y_l|_r <= eps^(l+2), the
    final matrices' membership in the A layer (C = 0), the commutation
    residual, and the base extension back to the input.
    """
    layer = module.layer
    if layer.name != "W":
        raise ParameterError("cc_descent starts from the W layer")
    ctx = layer.ctx
    n = layer.n
    p = ctx.p
    gamma = gamma if gamma is not None else 1 + p**DEFAULT_GAMMA_EXPONENT
    if (gamma - 1) % (p**2):
        raise ParameterError("descent needs gamma in 1 + p^2 Z_p")
    module = pgm_validate(module)
    d = module.d
    one = mat_identity(layer, d)
    for mat in (module.a_mat, module.g_mat):
        for i in range(d):
            for j in range(d):
                if not layer.divisible_by_p(layer.sub(mat[i][j], one[i][j])):
                    raise ParameterError("descent needs A = G = 1 mod p")

    budget = work_prec if work_prec is not None else \
        descent_work_precision(ctx, n, _module_content_depth(module))
    a_mat = _cap_precision(module.a_mat, ctx, budget)
    g_mat = _cap_precision(module.g_mat, ctx, budget)

    if r_grid is None:
        r_grid = [Fraction(1, 2**k) for k in range(1, max_scan + 1)]

    gm1 = mat_sub(layer, g_mat, one)
    last_error = None
    for r in r_grid:
        try:
            return _descend_at_radius(module, layer, ctx, n, d, gamma, r,
                                      a_mat, g_mat, gm1)
        except _ScheduleViolation as exc:
            last_error = exc
            continue
    raise NonConvergenceError(
        f"no admissible radius on the grid {r_grid}: {last_error}")


def _descend_at_radius(module, layer, ctx, n, d, gamma, r, a_mat, g_mat, gm1):
    one = mat_identity(layer, d)
    if mat_is_zero(layer, gm1):
        eta = None
    else:
        nu, _ = mat_gauss_norm_w(gm1, r)
        if not nu > 0:
            raise _ScheduleViolation(f"|G-1|_r >= 1 at r = {r}")
        eta = nu / 3

    u_total = one
    g_cur = g_mat
    schedule = []
    iterations = 0
    cap = 8 * n
    h_window = INF
    while True:
        diff = mat_sub(layer, g_cur, one)
        if mat_is_zero(layer, diff):
            x_w = [[w_zero(ctx, n)] * d for _ in range(d)]
            y_w = [[w_zero(ctx, n)] * d for _ in range(d)]
            y_a = [[a_zero(ctx.p, n)] * d for _ in range(d)]
            break
        x_w, y_w, y_a, z_m, ok, h_window = _split_matrix(diff, gamma)
        if not ok:
            raise InternalConsistencyError("split residual nonzero")
        nu_x, _ = mat_gauss_norm_w(x_w, r)
        nu_y, _ = mat_gauss_norm_w(y_w, r)
        schedule.append({"l": iterations, "nu_x": nu_x, "nu_y": nu_y})
        if eta is not None:
            if not (nu_x >= 2 * eta and nu_y >= (iterations + 2) * eta):
                raise _ScheduleViolation(
                    f"schedule fails at l={iterations}, r={r}: "
                    f"nu_x={nu_x}, nu_y={nu_y}, eta={eta}")
        if all(w.is_zero() for row in y_w for w in row):
            break
        v_step = mat_sub(layer, one, y_w)
        u_total = mat_mul(layer, u_total, v_step)
        g_cur = mat_mul(layer,
                        mat_mul(layer, mat_inv(layer, v_step), g_cur),
                        mat_gamma(layer, v_step, gamma))
        iterations += 1
        if iterations > cap:
            raise NonConvergenceError(
                f"descent exceeded the {cap}-iteration cap")

    # H = G in the new basis; its A-layer form comes from the final split
    h_a = [[a_one(ctx.p, n) if i == j else a_zero(ctx.p, n) for j in range(d)]
           for i in range(d)]
    for i in range(d):
        for j in range(d):
            h_a[i][j] = h_a[i][j] + y_a[i][j]

    # final phi-matrix and its membership in the A layer (C = 0)
    a_new = mat_mul(layer, mat_mul(layer, mat_inv(layer, u_total), a_mat),
                    mat_phi(layer, u_total))
    a_a = []
    a_window = INF
    c_zero = True
    for i in range(d):
        row = []
        for j in range(d):
            s = split_lift(a_new[i][j], gamma)
            row.append(s.y)
            a_window = min(a_window, s.window)
            tpart = lift_telt(s.z, ctx, n)
            c_zero = c_zero and tpart.is_zero() and s.residual_ok
        a_a.append(row)
    if not c_zero:
        raise InternalConsistencyError(
            "nonzero T-component C in the final phi-matrix (insufficient "
            "precision or violated commutation)")

    # commutation residual over the A layer
    a_layer = ALayer(ctx.p, n, gamma_window=64)
    lhs = mat_mul(a_layer, a_a, mat_phi(a_layer, h_a))
    rhs = mat_mul(a_layer, h_a, mat_gamma(a_layer, a_a, gamma))
    commutation_ok = mat_is_zero(a_layer, mat_sub(a_layer, lhs, rhs))

    # base extension back: embed, subtract, and compare below the certified
    # splitting windows
    g_final = g_cur
    embed_a = [[w_sub(embed_a_to_w(a_a[i][j], ctx, n), a_new[i][j])
                for j in range(d)] for i in range(d)]
    embed_h = [[w_sub(embed_a_to_w(h_a[i][j], ctx, n), g_final[i][j])
                for j in range(d)] for i in range(d)]
    embed_ok = _zero_below_window(embed_a, a_window) and \
        _zero_below_window(embed_h, h_window)

    flags = {
        "schedule": True,
        "c_component_zero": c_zero,
        "commutation_residual_zero": commutation_ok,
        "base_extension_matches": embed_ok,
    }
    eta_val = eta if eta is not None else Fraction(0)
    return DescentReport(r, eta_val, iterations, schedule, u_total, h_a, a_a,
                         flags, gamma)


# ---------------------------------------------------------------------------
# Seeded test-case generator
# ---------------------------------------------------------------------------

def _random_perfseries(rng, ctx, max_terms=2, denom_level=2, min_v=0,
                       max_num=6):
    terms = {}
    p = ctx.p
    for _ in range(rng.randint(1, max_terms)):
        k = rng.randint(0, denom_level)
        num = rng.randint(min_v * p**k, max_num * p**k)
        e = Fraction(num, p**k)
        coeff = rng.randrange(1, p**ctx.f)
        terms[e] = coeff
    return ctx.series(terms)


def random_gauge_module(seed, d, ctx, n, gamma=None, base_entries=3):
    """Build a hidden (phi, Gamma)-module: an A-layer pair of commuting
    constant matrices 1 + p * (polynomials in one nilpotent), gauged by a
    random V = 1 mod p over the W layer with fractional-exponent coordinates.

    Returns (module, v_secret, base_pair).
    """
    if d < 1:
        raise ParameterError("rank must be >= 1")
    rng = random.Random(seed)
    p = ctx.p
    gamma = gamma if gamma is not None else 1 + p**DEFAULT_GAMMA_EXPONENT
    layer = WLayer(ctx, n)

    # base: A0 = 1 + p(a E + a' 1), G0 = 1 + p(g E + g' 1) with E nilpotent
    def const_mat(diag, nil):
        out = [[a_zero(p, n) for _ in range(d)] for _ in range(d)]
        for i in range(d):
            out[i][i] = a_one(p, n) + a_from_int_local(p, n, p * diag)
        for i in range(d - 1):
            out[i][i + 1] = a_from_int_local(p, n, p * nil)
        return out

    def a_from_int_local(pp, nn, v):
        return ASeries(pp, nn, {0: v})

    a0 = const_mat(rng.randrange(0, p ** (n - 1)), rng.randrange(0, p ** (n - 1)))
    g0 = const_mat(rng.randrange(0, p ** (n - 1)), rng.randrange(0, p ** (n - 1)))

    a_w = mat_map(lambda x: embed_a_to_w(x, ctx, n), a0)
    g_w = mat_map(lambda x: embed_a_to_w(x, ctx, n), g0)

    # random gauge V = 1 + p R with small fractional-exponent coordinates
    v = mat_identity(layer, d)
    for i in range(d):
        for j in range(d):
            coords = [ctx.zero()]
            for _ in range(n - 1):
                if rng.random() < 0.7:
                    coords.append(_random_perfseries(rng, ctx))
                else:
                    coords.append(ctx.zero())
            r_ij = WittVec(ctx, coords)
            v[i][j] = w_add(v[i][j], r_ij)

    base = PhiGammaModule(layer, d, a_w, g_w, gamma)
    hidden = change_basis(base, v)
    return pgm_validate(hidden), v, (a0, g0)
