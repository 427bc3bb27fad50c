"""Exact coefficient fields: F_p for an odd prime p, and Q."""
from __future__ import annotations

from fractions import Fraction
import random as _random

DEFAULT_CHAR = 32003


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class Field:
    """Base class; elements are plain Python numbers in canonical form."""

    char: int

    def __call__(self, x):
        return self.convert(x)

    def __eq__(self, other):
        return isinstance(other, Field) and self.char == other.char

    def __hash__(self):
        return hash(("Field", self.char))


class PrimeField(Field):
    """F_p with elements stored as ints in [0, p)."""

    def __init__(self, p: int = DEFAULT_CHAR):
        if p == 2 or not _is_prime(p):
            raise ValueError(f"characteristic must be an odd prime, got {p}")
        self.char = p
        self.zero = 0
        self.one = 1

    def __repr__(self):
        return f"GF({self.char})"

    def convert(self, x) -> int:
        if isinstance(x, Fraction):
            return x.numerator * pow(x.denominator, -1, self.char) % self.char
        return int(x) % self.char

    def add(self, a, b):
        return (a + b) % self.char

    def sub(self, a, b):
        return (a - b) % self.char

    def mul(self, a, b):
        return a * b % self.char

    def neg(self, a):
        return -a % self.char

    def inv(self, a):
        if a % self.char == 0:
            raise ZeroDivisionError("inverse of zero in " + repr(self))
        return pow(a, -1, self.char)

    def to_int(self, a) -> int:
        """Symmetric integer representative, used for printing."""
        return a - self.char if a > self.char // 2 else a

    def random(self, rng: _random.Random):
        return rng.randrange(self.char)


class RationalField(Field):
    """Q with elements stored as fractions.Fraction."""

    def __init__(self):
        self.char = 0
        self.zero = Fraction(0)
        self.one = Fraction(1)

    def __repr__(self):
        return "QQ"

    def convert(self, x) -> Fraction:
        return Fraction(x)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero in QQ")
        return 1 / a

    def to_int(self, a):
        return a

    def random(self, rng: _random.Random):
        return Fraction(rng.randint(-20, 20), rng.randint(1, 5))


def make_field(char: int) -> Field:
    """Field of the given characteristic; 0 means Q."""
    if char == 0:
        return RationalField()
    return PrimeField(char)
