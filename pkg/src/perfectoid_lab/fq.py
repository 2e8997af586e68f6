"""Arithmetic in F_q = F_p[T]/(modulus), q = p^f, f <= 8.

Elements are tuples of f integers in [0, p) (coefficients of 1, T, ..., T^(f-1)).
The modulus is user-supplied and checked irreducible by trial factorization;
there are no built-in Conway tables.  Frobenius x -> x^p is a bijection whose
inverse is Frobenius iterated f-1 times.
"""

from .errors import DivisionByZeroError, ParameterError

MAX_DEGREE = 8

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n):
    if n < 2:
        return False
    for q in _SMALL_PRIMES:
        if n == q:
            return True
        if n % q == 0:
            return False
    i = 41
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


def _poly_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a, m, p):
    """Remainder of a by monic-normalized m over F_p (lists, constant first)."""
    a = list(a)
    dm = len(m) - 1
    inv_lead = pow(m[-1], -1, p)
    while len(a) - 1 >= dm and a:
        if a[-1] == 0:
            a.pop()
            continue
        factor = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, c in enumerate(m):
            a[shift + i] = (a[shift + i] - factor * c) % p
        _poly_trim(a)
    return a


def _poly_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca:
            for j, cb in enumerate(b):
                out[i + j] = (out[i + j] + ca * cb) % p
    return _poly_trim(out)


def _modulus_is_irreducible(modulus, p):
    """Trial factorization: try every monic divisor of degree <= f // 2."""
    f = len(modulus) - 1
    if f == 1:
        return True

    def divides(d):
        return not _poly_mod(modulus, d, p)

    for deg in range(1, f // 2 + 1):
        # enumerate monic polynomials c_0 + c_1 T + ... + T^deg
        for code in range(p**deg):
            cand = []
            c = code
            for _ in range(deg):
                cand.append(c % p)
                c //= p
            cand.append(1)
            if divides(cand):
                return False
    return True


class FqField:
    """Context object for F_{p^f}; element values are plain tuples."""

    def __init__(self, p, f=1, modulus=None):
        if not is_prime(p):
            raise ParameterError(f"p = {p} is not prime")
        if not 1 <= f <= MAX_DEGREE:
            raise ParameterError(f"extension degree f = {f} outside 1..{MAX_DEGREE}")
        if modulus is None:
            if f != 1:
                raise ParameterError("modulus required for f > 1")
            modulus = [0, 1]
        modulus = [c % p for c in modulus]
        if len(modulus) != f + 1 or modulus[-1] == 0:
            raise ParameterError(f"modulus must have degree exactly f = {f}")
        if not _modulus_is_irreducible(modulus, p):
            raise ParameterError(f"modulus {modulus} is reducible over F_{p}")
        self.p = p
        self.f = f
        self.modulus = tuple(modulus)
        self.zero = (0,) * f
        self.one = (1,) + (0,) * (f - 1)

    def __eq__(self, other):
        return (
            isinstance(other, FqField)
            and self.p == other.p
            and self.f == other.f
            and self.modulus == other.modulus
        )

    def __hash__(self):
        return hash((self.p, self.f, self.modulus))

    def __repr__(self):
        return f"FqField(p={self.p}, f={self.f}, modulus={list(self.modulus)})"

    # -- element constructors -------------------------------------------------

    def from_int(self, n):
        return ((n % self.p,) + (0,) * (self.f - 1)) if self.f > 1 else (n % self.p,)

    def element(self, coeffs):
        if isinstance(coeffs, int):
            return self.from_int(coeffs)
        coeffs = [c % self.p for c in coeffs]
        if len(coeffs) > self.f:
            coeffs = _poly_mod(coeffs, list(self.modulus), self.p)
        coeffs += [0] * (self.f - len(coeffs))
        return tuple(coeffs[: self.f])

    # -- ring operations ------------------------------------------------------

    def add(self, a, b):
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def sub(self, a, b):
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def neg(self, a):
        p = self.p
        return tuple((-x) % p for x in a)

    def mul(self, a, b):
        if self.f == 1:
            return ((a[0] * b[0]) % self.p,)
        prod = _poly_mul(list(a), list(b), self.p)
        prod = _poly_mod(prod, list(self.modulus), self.p)
        prod += [0] * (self.f - len(prod))
        return tuple(prod[: self.f])

    def is_zero(self, a):
        return all(c == 0 for c in a)

    def pow(self, a, n):
        if n < 0:
            return self.pow(self.inv(a), -n)
        result = self.one
        base = a
        while n:
            if n & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            n >>= 1
        return result

    def inv(self, a):
        if self.is_zero(a):
            raise DivisionByZeroError("inverse of 0 in F_q")
        # a^(q-2); q <= p^8 is small so square-and-multiply is plenty
        return self.pow(a, self.p**self.f - 2)

    def frobenius(self, a, k=1):
        """a^(p^k); negative k applies the inverse (iterate f-1 times per step)."""
        if self.f == 1:
            return a
        k %= self.f
        for _ in range(k):
            a = self.pow(a, self.p)
        return a

    def elements(self):
        """Iterate over all q elements (used by root search at desk scale)."""
        p, f = self.p, self.f
        for code in range(p**f):
            coeffs = []
            c = code
            for _ in range(f):
                coeffs.append(c % p)
                c //= p
            yield tuple(coeffs)
