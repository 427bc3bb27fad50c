"""Sparse multivariate polynomials over an exact field.

Monomials are exponent tuples. Polynomials are immutable maps from
monomials to nonzero field elements, so equality is structural.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Tuple

from .field import DEFAULT_CHAR, Field, PrimeField, make_field

Monomial = Tuple[int, ...]

DEFAULT_DEGREE_GUARD = 200


class IncompatibleOperandsError(TypeError):
    pass


class DegreeGuardError(ValueError):
    pass


class PolynomialParseError(ValueError):
    def __init__(self, text: str, position: int, message: str):
        self.text = text
        self.position = position
        super().__init__(f"{message} at position {position}: {text!r}")


@lru_cache(maxsize=None)
def monomials_of_degree(nvars: int, d: int) -> Tuple[Monomial, ...]:
    """All exponent vectors of total degree d, lexicographically descending."""
    if d < 0:
        return ()
    if nvars == 1:
        return ((d,),)
    out = []
    for a in range(d, -1, -1):
        for rest in monomials_of_degree(nvars - 1, d - a):
            out.append((a,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def monomial_index(nvars: int, d: int) -> Dict[Monomial, int]:
    return {m: i for i, m in enumerate(monomials_of_degree(nvars, d))}


def monomial_degree(m: Monomial) -> int:
    return sum(m)


class PolynomialRing:
    """k[x1, ..., xn] with a fixed variable order x1 > x2 > ... > xn."""

    def __init__(self, field: Field | None = None, nvars: int = 3, names=None,
                 degree_guard: int = DEFAULT_DEGREE_GUARD):
        self.field = field if field is not None else PrimeField(DEFAULT_CHAR)
        self.nvars = nvars
        self.names = tuple(names) if names else tuple(f"x{i + 1}" for i in range(nvars))
        if len(self.names) != nvars:
            raise ValueError("need one name per variable")
        self.degree_guard = degree_guard
        self._zero_exp = (0,) * nvars
        self.zero = Polynomial(self, {})
        self.one = Polynomial(self, {self._zero_exp: self.field.one})

    def __eq__(self, other):
        return (isinstance(other, PolynomialRing) and self.field == other.field
                and self.names == other.names)

    def __hash__(self):
        return hash((self.field, self.names))

    def __repr__(self):
        return f"{self.field!r}[{','.join(self.names)}]"

    @property
    def char(self) -> int:
        return self.field.char

    def poly(self, terms) -> "Polynomial":
        """Build a polynomial from a {monomial: coefficient} map, normalizing."""
        conv = self.field.convert
        clean = {}
        for m, c in dict(terms).items():
            m = tuple(m)
            if len(m) != self.nvars or min(m, default=0) < 0:
                raise ValueError(f"bad exponent vector {m}")
            c = conv(c)
            if c:
                clean[m] = c
        return Polynomial(self, clean)

    def const(self, c) -> "Polynomial":
        c = self.field.convert(c)
        return Polynomial(self, {self._zero_exp: c} if c else {})

    def monomial(self, exp, c=1) -> "Polynomial":
        return self.poly({tuple(exp): c})

    def var(self, i: int) -> "Polynomial":
        """The variable x_i, 1-based."""
        e = [0] * self.nvars
        e[i - 1] = 1
        return Polynomial(self, {tuple(e): self.field.one})

    @property
    def gens(self):
        return tuple(self.var(i + 1) for i in range(self.nvars))

    def coerce(self, x) -> "Polynomial":
        if isinstance(x, Polynomial):
            if x.ring != self:
                raise IncompatibleOperandsError(f"{x.ring!r} vs {self!r}")
            return x
        if isinstance(x, str):
            return self.parse(x)
        return self.const(x)

    def parse(self, text: str) -> "Polynomial":
        return _Parser(self, text).parse()

    def dim(self, d: int) -> int:
        """Dimension of the degree-d graded piece."""
        return len(monomials_of_degree(self.nvars, d))


class Polynomial:
    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolynomialRing, terms: Dict[Monomial, object]):
        # terms must already be normalized with no zero coefficients
        self.ring = ring
        self.terms = terms
        self._hash = None

    # -- structure ---------------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int,)):
            return self == self.ring.const(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def degree(self) -> int:
        """Maximal total degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        degs = {sum(m) for m in self.terms}
        return len(degs) <= 1

    def homogeneous_degree(self):
        """Common degree of all terms, None for zero, ValueError if mixed."""
        degs = {sum(m) for m in self.terms}
        if not degs:
            return None
        if len(degs) > 1:
            raise ValueError(f"{self} is not homogeneous")
        return degs.pop()

    def homogeneous_component(self, d: int) -> "Polynomial":
        return Polynomial(self.ring, {m: c for m, c in self.terms.items() if sum(m) == d})

    def constant_term(self):
        return self.terms.get(self.ring._zero_exp, self.ring.field.zero)

    def coefficient(self, exp):
        return self.terms.get(tuple(exp), self.ring.field.zero)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    # -- arithmetic --------------------------------------------------------
    def _other(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring is not self.ring and other.ring != self.ring:
                raise IncompatibleOperandsError(f"{self.ring!r} vs {other.ring!r}")
            return other
        if isinstance(other, str):
            raise IncompatibleOperandsError("cannot combine polynomial with str")
        return self.ring.const(other)

    def __add__(self, other):
        other = self._other(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        p = self.ring.field.char
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m)
            if v is None:
                out[m] = c
            else:
                v = (v + c) % p if p else v + c
                if v:
                    out[m] = v
                else:
                    del out[m]
        return Polynomial(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        p = self.ring.field.char
        if p:
            return Polynomial(self.ring, {m: p - c for m, c in self.terms.items()})
        return Polynomial(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._other(other))

    def __rsub__(self, other):
        return self._other(other) - self

    def __mul__(self, other):
        other = self._other(other)
        if not self.terms or not other.terms:
            return self.ring.zero
        if self.degree() + other.degree() > self.ring.degree_guard:
            raise DegreeGuardError(
                f"product degree exceeds guard {self.ring.degree_guard}")
        p = self.ring.field.char
        out: Dict[Monomial, object] = {}
        get = out.get
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = get(m, 0) + c1 * c2
        if p:
            out = {m: c % p for m, c in out.items() if c % p}
        else:
            out = {m: c for m, c in out.items() if c}
        return Polynomial(self.ring, out)

    __rmul__ = __mul__

    def scale(self, c) -> "Polynomial":
        c = self.ring.field.convert(c)
        if not c:
            return self.ring.zero
        p = self.ring.field.char
        if p:
            return Polynomial(self.ring, {m: v * c % p for m, v in self.terms.items()})
        return Polynomial(self.ring, {m: v * c for m, v in self.terms.items()})

    def mul_monomial(self, exp: Monomial, c=1) -> "Polynomial":
        c = self.ring.field.convert(c)
        if not c:
            return self.ring.zero
        p = self.ring.field.char
        out = {}
        for m, v in self.terms.items():
            v = v * c % p if p else v * c
            out[tuple(a + b for a, b in zip(m, exp))] = v
        return Polynomial(self.ring, out)

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power")
        out = self.ring.one
        base = self
        while e:
            if e & 1:
                out = out * base
            e >>= 1
            if e:
                base = base * base
        return out

    # -- printing ----------------------------------------------------------
    def __str__(self):
        return format_polynomial(self)

    def __repr__(self):
        return f"Polynomial({format_polynomial(self)!r})"


def format_polynomial(f: Polynomial) -> str:
    if not f.terms:
        return "0"
    names = f.ring.names
    to_int = f.ring.field.to_int
    pieces = []
    for m, c in f.sorted_terms():
        c = to_int(c)
        neg = c < 0
        c = -c if neg else c
        factors = []
        for name, e in zip(names, m):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        if not factors:
            body = str(c)
        elif c == 1:
            body = "*".join(factors)
        else:
            body = f"{c}*" + "*".join(factors)
        if not pieces:
            pieces.append(("-" if neg else "") + body)
        else:
            pieces.append(("-" if neg else "+") + body)
    return "".join(pieces)


class _Parser:
    """term := [int ['/' int] '*'?] factor ('*' factor)* ; factor := name ['^' int]"""

    def __init__(self, ring: PolynomialRing, text: str):
        self.ring = ring
        self.text = text
        self.pos = 0
        self.names = sorted(ring.names, key=len, reverse=True)

    def error(self, msg, pos=None):
        raise PolynomialParseError(self.text, self.pos if pos is None else pos, msg)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def integer(self) -> int:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.error("expected integer")
        return int(self.text[start:self.pos])

    def factor(self):
        self.skip()
        for k, name in enumerate(self.names):
            if self.text.startswith(name, self.pos):
                end = self.pos + len(name)
                # reject x10 when only x1 is known
                if end < len(self.text) and self.text[end].isdigit():
                    continue
                self.pos = end
                idx = self.ring.names.index(name)
                e = 1
                if self.peek() == "^":
                    self.pos += 1
                    e = self.integer()
                return idx, e
        self.error("expected variable")

    def term(self):
        exp = [0] * self.ring.nvars
        coef = 1
        have = False
        ch = self.peek()
        if ch.isdigit():
            coef = self.integer()
            have = True
            if self.peek() == "/":
                self.pos += 1
                den = self.integer()
                if den == 0:
                    self.error("zero denominator")
                coef = Fraction(coef, den)
            if self.peek() == "*":
                self.pos += 1
            elif self.peek() not in ("", "+", "-"):
                pass  # allow "3x1"
            else:
                return coef, tuple(exp)
        while True:
            idx, e = self.factor()
            exp[idx] += e
            have = True
            if self.peek() == "*":
                self.pos += 1
                continue
            break
        if not have:
            self.error("empty term")
        return coef, tuple(exp)

    def parse(self) -> Polynomial:
        if not self.text.strip():
            self.error("empty polynomial", 0)
        sign = 1
        ch = self.peek()
        if ch in "+-" and ch:
            sign = -1 if ch == "-" else 1
            self.pos += 1
        conv = self.ring.field.convert
        acc = self.ring.zero
        while True:
            c, m = self.term()
            acc = acc + self.ring.poly({m: conv(c) if sign > 0 else self.ring.field.neg(conv(c))})
            ch = self.peek()
            if ch == "":
                break
            if ch not in "+-":
                self.error(f"unexpected character {ch!r}")
            sign = -1 if ch == "-" else 1
            self.pos += 1
        return acc


@lru_cache(maxsize=None)
def default_ring(char: int = DEFAULT_CHAR) -> PolynomialRing:
    """The shared ring k[x1, x2, x3] of the given characteristic."""
    return PolynomialRing(make_field(char), 3)


def poly_arith(a: Polynomial, b: Polynomial, op: str) -> Polynomial:
    """Dispatch add/sub/mul by name."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def poly_eval_zero(a: Polynomial):
    """Image under reduction modulo the irrelevant ideal."""
    return a.constant_term()


def homogeneous_component(a: Polynomial, d: int) -> Polynomial:
    return a.homogeneous_component(d)


def parse_polys(ring: PolynomialRing, texts: Iterable[str]):
    return [ring.parse(t) for t in texts]
