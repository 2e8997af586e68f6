"""Exact rational helpers shared by every module.

Exponents, valuations and norm exponents are `fractions.Fraction` throughout;
+infinity (the valuation of zero) is represented by the float `INF`, which
compares and adds correctly against Fraction.  Nothing in the kernel ever
touches an inexact float except this sentinel.
"""

from fractions import Fraction

from .errors import SchemaError

INF = float("inf")


def is_p_power(n, p):
    """True if n is a (possibly zeroth) power of the prime p."""
    if n < 1:
        return False
    while n % p == 0:
        n //= p
    return n == 1


def p_power_denominator_level(x, p):
    """Return k with denominator(x) == p**k, or raise ValueError."""
    den = x.denominator
    k = 0
    while den % p == 0:
        den //= p
        k += 1
    if den != 1:
        raise ValueError(f"denominator of {x} is not a power of {p}")
    return k


def check_pexp(x, p, denom_bound):
    """Validate a Z[1/p] exponent against the hard denominator cap p**denom_bound."""
    k = p_power_denominator_level(x, p)
    if k > denom_bound:
        from .errors import PrecisionError

        raise PrecisionError(
            f"exponent {x} needs denominator p^{k} > allowed p^{denom_bound}"
        )
    return x


def format_rational(x):
    """Serialize a Fraction (or INF) as the wire format 'num/den' / 'inf'."""
    if x == INF:
        return "inf"
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(s, path="rational"):
    """Parse the wire format 'num/den' (or 'inf') back to Fraction/INF."""
    if not isinstance(s, str):
        raise SchemaError(path, f"expected 'num/den' string, got {s!r}")
    if s == "inf":
        return INF
    try:
        if "/" in s:
            num, den = s.split("/")
            return Fraction(int(num), int(den))
        return Fraction(int(s))
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(path, f"bad rational {s!r}: {exc}") from None
