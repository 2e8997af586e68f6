"""Symbolic strict p-ring oracle: exact arithmetic in Z[X^(1/p^oo)]/(p^N).

Used to (a) generate the universal carry polynomials that drive Witt-vector
addition and (b) provide a slow, table-free cross-check for Witt arithmetic.
Teichmuller coordinates are the only coordinate system used; ghost components
never appear (they break in characteristic p).
"""

import json
import os
import tempfile
from fractions import Fraction

from .errors import (
    InternalConsistencyError,
    OracleTooLargeError,
    ParameterError,
    PerfectoidError,
    SchemaError,
)
from .fq import is_prime
from .rationals import format_rational, parse_rational, p_power_denominator_level

TABLE_VERSION = 1
MAX_TABLE_LEVEL = 5
DEFAULT_TERM_LIMIT = 200_000


class SymElt:
    """Sparse polynomial with Z[1/p] exponents and coefficients in Z/p^N."""

    __slots__ = ("p", "level", "vars", "terms")

    def __init__(self, p, level, vars_, terms=None):
        self.p = p
        self.level = level
        self.vars = tuple(vars_)
        mod = p**level
        clean = {}
        if terms:
            for ex, c in terms.items():
                c %= mod
                if c:
                    clean[ex] = c
        self.terms = clean

    def _like(self, terms):
        return SymElt(self.p, self.level, self.vars, terms)

    def _check(self, other):
        if (self.p, self.level, self.vars) != (other.p, other.level, other.vars):
            raise ParameterError("mismatched symbolic ring parameters")

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        self._check(other)
        mod = self.p**self.level
        out = dict(self.terms)
        for ex, c in other.terms.items():
            s = (out.get(ex, 0) + c) % mod
            if s:
                out[ex] = s
            elif ex in out:
                del out[ex]
        return self._like(out)

    def __neg__(self):
        mod = self.p**self.level
        return self._like({ex: mod - c for ex, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        self._check(other)
        mod = self.p**self.level
        out = {}
        for ex_a, ca in self.terms.items():
            for ex_b, cb in other.terms.items():
                ex = tuple(a + b for a, b in zip(ex_a, ex_b))
                s = (out.get(ex, 0) + ca * cb) % mod
                if s:
                    out[ex] = s
                elif ex in out:
                    del out[ex]
        return self._like(out)

    def int_pow(self, n):
        result = self._like({(Fraction(0),) * len(self.vars): 1})
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def scale(self, k):
        return self._like({ex: c * k for ex, c in self.terms.items()})

    def times_p_power(self, k):
        """Multiply by p^k (coefficient shift; stays at the same level)."""
        return self._like({ex: c * self.p**k for ex, c in self.terms.items()})

    def reduce_level(self, level):
        if level > self.level:
            raise ParameterError("cannot increase symbolic precision")
        return SymElt(self.p, level, self.vars, dict(self.terms))

    def mod_p(self):
        return self.reduce_level(1)

    def divide_by_p_exact(self):
        """Exact division by p, dropping to level-1 precision."""
        out = {}
        for ex, c in self.terms.items():
            if c % self.p:
                raise InternalConsistencyError(
                    f"inexact division by p at exponent {ex} (coefficient {c})")
            out[ex] = c // self.p
        return SymElt(self.p, self.level - 1, self.vars, out)

    def frobenius_root(self):
        """p-th root of a char-p polynomial: divide exponents by p."""
        if self.level != 1:
            raise ParameterError("p-th root only defined at level 1")
        return self._like({tuple(e / self.p for e in ex): c
                           for ex, c in self.terms.items()})

    def denominator_level(self):
        lvl = 0
        for ex in self.terms:
            for e in ex:
                lvl = max(lvl, p_power_denominator_level(e, self.p))
        return lvl

    def sorted_terms(self):
        return sorted(self.terms.items())

    def __eq__(self, other):
        if not isinstance(other, SymElt):
            return NotImplemented
        return (self.p, self.level, self.vars, self.terms) == \
            (other.p, other.level, other.vars, other.terms)

    def __hash__(self):
        return hash((self.p, self.level, self.vars, tuple(self.sorted_terms())))

    def __repr__(self):
        if not self.terms:
            return "Sym<0>"
        parts = []
        for ex, c in self.sorted_terms():
            mono = "*".join(f"{v}^{e}" for v, e in zip(self.vars, ex) if e)
            parts.append(f"{c}*{mono}" if mono else str(c))
        return f"Sym<{' + '.join(parts)} mod {self.p}^{self.level}>"


def sym_ring(p, level, vars_):
    """Convenience constructors (zero, one, generators) for a symbolic ring."""
    zero_ex = (Fraction(0),) * len(vars_)

    def var(name, exponent=Fraction(1)):
        i = vars_.index(name)
        ex = list(zero_ex)
        ex[i] = Fraction(exponent)
        return SymElt(p, level, vars_, {tuple(ex): 1})

    one = SymElt(p, level, vars_, {zero_ex: 1})
    return one, var


# ---------------------------------------------------------------------------
# Teichmuller lifts and coordinates
# ---------------------------------------------------------------------------

def sym_teich_lift(xbar, level, perturb=None):
    """Teichmuller lift of a char-p polynomial to Z/p^level.

    Computes (lift of xbar^(1/p^(level-1)))^(p^(level-1)); the canonical lift
    maps each F_p coefficient to its representative in [0, p).  ``perturb``
    adds p * perturb to that lift first; the result must not change (the lift
    congruence class is all that matters), which the test suite exercises.
    """
    if xbar.level != 1:
        raise ParameterError("sym_teich_lift expects a char-p polynomial")
    p = xbar.p
    root = xbar
    for _ in range(level - 1):
        root = root.frobenius_root()
    lift = SymElt(p, level, xbar.vars, dict(root.terms))
    if perturb is not None:
        lift = lift + perturb.reduce_level(level).times_p_power(1)
    return lift.int_pow(p ** (level - 1))


def sym_coords(z, count=None):
    """Peel Teichmuller coordinates off z in Z/p^level.

    Returns ``count`` (default: z.level) char-p polynomials x_0, x_1, ...; at
    each step the division by p must be exact, else the strict p-ring
    structure has been violated (a bug).
    """
    count = z.level if count is None else count
    coords = []
    cur = z
    for i in range(count):
        xbar = cur.mod_p()
        coords.append(xbar)
        if i == count - 1:
            break
        cur = (cur - sym_teich_lift(xbar, cur.level)).divide_by_p_exact()
    return coords


# ---------------------------------------------------------------------------
# Carry tables
# ---------------------------------------------------------------------------

class CarryTable:
    """Universal coordinates of [x] + [y]: poly n is the n-th Teichmuller
    coordinate, a char-p polynomial in x, y with Z[1/p] exponents.
    """

    kind = "add"

    def __init__(self, p, level, polys):
        self.p = p
        self.level = level
        self.polys = list(polys)
        # compiled form: per level, list of (coeff, ex_x, ex_y)
        self.compiled = [
            [(c, ex[0], ex[1]) for ex, c in poly.sorted_terms()]
            for poly in self.polys
        ]

    def to_json(self):
        return {
            "p": self.p,
            "N": self.level,
            "kind": self.kind,
            "version": TABLE_VERSION,
            "polys": [
                [{"ex": format_rational(ex[0]), "ey": format_rational(ex[1]),
                  "c": c} for ex, c in poly.sorted_terms()]
                for poly in self.polys
            ],
        }

    @classmethod
    def from_json(cls, data):
        try:
            p, level = data["p"], data["N"]
            if data.get("kind") != cls.kind or data.get("version") != TABLE_VERSION:
                raise SchemaError("carry-table", "unknown kind/version")
            polys = []
            for n, rows in enumerate(data["polys"]):
                terms = {}
                for row in rows:
                    ex = (parse_rational(row["ex"]), parse_rational(row["ey"]))
                    terms[ex] = row["c"]
                polys.append(SymElt(p, 1, ("x", "y"), terms))
        except (KeyError, TypeError) as exc:
            raise SchemaError("carry-table", f"malformed cache file: {exc}") from None
        return cls(p, level, polys)


def compute_carry_table(p, level):
    """Derive the addition carry polynomials from the symbolic oracle."""
    if not is_prime(p):
        raise ParameterError(f"p = {p} is not prime")
    if level > MAX_TABLE_LEVEL:
        est = p ** (2 * (level - 1))
        raise ParameterError(
            f"carry table level {level} > {MAX_TABLE_LEVEL}: "
            f"term counts grow like p^(2(N-1)) ~ {est}")
    vars_ = ("x", "y")
    one, var = sym_ring(p, 1, vars_)
    x, y = var("x"), var("y")
    z = sym_teich_lift(x, level) + sym_teich_lift(y, level)
    polys = sym_coords(z)
    # sanity: coordinate 0 must be x + y, every poly homogeneous of degree 1
    if polys[0] != x + y:
        raise InternalConsistencyError("carry poly 0 is not x + y")
    for poly in polys:
        for ex in poly.terms:
            if sum(ex, Fraction(0)) != 1:
                raise InternalConsistencyError(
                    f"carry poly term {ex} not homogeneous of degree 1")
    return CarryTable(p, level, polys)


_TABLE_MEMO = {}


def default_cache_dir():
    env = os.environ.get("PERFECTOID_CACHE_DIR")
    if env:
        return env
    return os.path.join(os.path.expanduser("~"), ".cache", "perfectoid-lab")


def carry_table_path(p, level, cache_dir=None):
    return os.path.join(cache_dir or default_cache_dir(),
                        f"carry_p{p}_N{level}.json")


def carry_tables(p, level, cache_dir=None):
    """Fetch (memo -> disk cache -> compute) the carry table for (p, level).

    The disk cache is written atomically (temp file + rename) and treated as
    read-only afterwards; a corrupt file is rebuilt in place.
    """
    key = (p, level)
    sized = _TABLE_MEMO.get(key)
    if sized is not None:
        return sized
    path = carry_table_path(p, level, cache_dir)
    table = None
    if os.path.exists(path):
        try:
            with open(path, "r", encoding="utf-8") as fh:
                table = CarryTable.from_json(json.load(fh))
        except (OSError, ValueError, PerfectoidError):
            table = None  # corrupt cache: rebuild below
    if table is None:
        table = compute_carry_table(p, level)
        os.makedirs(os.path.dirname(path), exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=os.path.dirname(path), suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                json.dump(table.to_json(), fh, sort_keys=True, indent=0)
            os.replace(tmp, path)
        except OSError:
            try:
                os.unlink(tmp)
            finally:
                pass
    _TABLE_MEMO[key] = table
    return table


# ---------------------------------------------------------------------------
# Brute-force Witt operation oracle (independent of the carry tables)
# ---------------------------------------------------------------------------

def sym_witt_op(xcoords, ycoords, op, p, level, term_limit=DEFAULT_TERM_LIMIT):
    """Apply a ring op to Witt vectors given by char-p coordinate polynomials.

    Assembles sum p^n * [x_n] in the symbolic strict p-ring, applies the ring
    operation there, and re-extracts Teichmuller coordinates.  Slow but
    independent of CarryTable.
    """
    if op not in ("add", "mul"):
        raise ParameterError(f"unsupported op {op!r}")
    if len(xcoords) > level or len(ycoords) > level:
        raise ParameterError("more coordinates than the p-adic level")

    def assemble(coords):
        acc = None
        for n, xbar in enumerate(coords):
            lifted = sym_teich_lift(xbar, level).times_p_power(n)
            acc = lifted if acc is None else acc + lifted
        return acc

    X = assemble(xcoords)
    Y = assemble(ycoords)
    Z = X + Y if op == "add" else X * Y
    if len(Z.terms) > term_limit:
        raise OracleTooLargeError(
            f"oracle intermediate has {len(Z.terms)} terms > {term_limit}")
    return sym_coords(Z, count=level)
