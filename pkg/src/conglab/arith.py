"""Small integer helpers shared by every module."""

from fractions import Fraction
from math import gcd

from sympy import isprime, primerange

__all__ = ["vp", "vp_fraction", "is_prime", "primes_upto", "lcm", "inv_mod"]


def vp(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def vp_fraction(x: Fraction, p: int) -> int:
    return vp(x.numerator, p) - vp(x.denominator, p)


def is_prime(n: int) -> bool:
    return n >= 2 and bool(isprime(n))


def primes_upto(bound: int) -> list[int]:
    return list(primerange(2, bound + 1))


def lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


def inv_mod(a: int, m: int) -> int:
    return pow(a % m, -1, m)
