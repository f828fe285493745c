"""Elementary integer arithmetic shared by the numerical modules."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt


def primes_up_to(bound: int) -> list[int]:
    """Primes p <= bound in increasing order (sieve of Eratosthenes)."""
    if bound < 2:
        return []
    sieve = bytearray([1]) * (bound + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, isqrt(bound) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(range(p * p, bound + 1, p)))
    return [i for i, flag in enumerate(sieve) if flag]


def factorize(n: int) -> dict[int, int]:
    """Prime factorisation of |n| by trial division; fine for the small inputs used here."""
    n = abs(n)
    if n == 0:
        raise ValueError("cannot factor 0")
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def is_prime(n: int) -> bool:
    return n >= 2 and factorize(n) == {n: 1}


def prime_power_base(q: int) -> tuple[int, int] | None:
    """Return (p, k) with q = p**k, or None if q is not a prime power."""
    if q < 2:
        return None
    fac = factorize(q)
    if len(fac) != 1:
        return None
    ((p, k),) = fac.items()
    return p, k


def integer_root(n: int, k: int) -> int | None:
    """Exact k-th root of a non-negative integer, or None."""
    if n < 0:
        raise ValueError("negative radicand")
    if n in (0, 1) or k == 1:
        return n
    guess = round(n ** (1.0 / k)) if n < 2**50 else _newton_root(n, k)
    for cand in (guess - 1, guess, guess + 1):
        if cand >= 0 and cand**k == n:
            return cand
    return None


def _newton_root(n: int, k: int) -> int:
    x = 1 << ((n.bit_length() + k - 1) // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            return x
        x = y


def rational_root(x: Fraction, k: int) -> Fraction | None:
    """Exact positive k-th root of a positive rational, or None."""
    x = Fraction(x)
    if x <= 0:
        return None
    num, den = integer_root(x.numerator, k), integer_root(x.denominator, k)
    if num is None or den is None:
        return None
    return Fraction(num, den)


def rational_power(base: Fraction | int, exponent: Fraction | int) -> Fraction | None:
    """base**exponent as an exact rational when that is possible (base > 0)."""
    base, exponent = Fraction(base), Fraction(exponent)
    if base <= 0:
        raise ValueError("base must be positive")
    root = rational_root(base, exponent.denominator)
    if root is None:
        return None
    return root**exponent.numerator


def minimal_root_degree(value: Fraction, d: int) -> int:
    """Smallest k | d such that value**(k/d) is rational (value > 0)."""
    for k in sorted(divisor for divisor in range(1, d + 1) if d % divisor == 0):
        if rational_root(value, d // k) is not None:
            return k
    return d


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n) for n > 0."""
    if n <= 0:
        raise ValueError("n must be positive")
    result = 1
    while n % 2 == 0:
        n //= 2
        if a % 2 == 0:
            return 0
        if a % 8 in (3, 5):
            result = -result
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def lcm(*values: int) -> int:
    out = 1
    for v in values:
        out = out * v // gcd(out, v)
    return out


@lru_cache(maxsize=None)
def binomial_polynomial(k: int) -> tuple[Fraction, ...]:
    """Coefficients (ascending in n) of C(n + k, k) as a polynomial in n."""
    coeffs = [Fraction(1)]
    for i in range(1, k + 1):
        # multiply by (n + i) / i
        shifted = [Fraction(0)] + coeffs
        scaled = [c * i for c in coeffs] + [Fraction(0)]
        coeffs = [(a + b) / i for a, b in zip(shifted, scaled)]
    return tuple(coeffs)
