"""Exact multivariate polynomial arithmetic over the rationals.

Variables are nonnegative integer ids; id 0 is reserved for the infection
rate and ids >= 1 denote correlation variables handed out by the pattern
registry.  Coefficients are `fractions.Fraction` values throughout: no
floating point enters this module, so generated identities, ideal
generators and basis elements are reproducible bit for bit.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import gcd, lcm
from typing import Callable, Iterable, Mapping

#: variable id of the infection rate.
RATE = 0

#: default print names: ``l`` is the rate, the six letters are the preloaded
#: correlation variables; any further id renders as ``v<id>``.
NAME_BY_ID = {0: "l", 1: "x", 2: "y", 3: "w", 4: "z", 5: "u", 6: "s"}
ID_BY_NAME = {name: vid for vid, name in NAME_BY_ID.items()}

_GENERATED_NAME = re.compile(r"v(\d+)\Z")


class ParseError(ValueError):
    """Syntax error in polynomial text."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class UnknownVariableError(ParseError):
    pass


class NotDivisibleError(ArithmeticError):
    """Exact division failed: the divisor does not divide the dividend."""


class Monomial:
    """A power product, stored as a sorted tuple of (variable, exponent).

    Exponents are strictly positive; the empty tuple is the unit monomial.
    Instances are immutable and hashable.
    """

    __slots__ = ("exps",)

    def __init__(self, exps: Iterable[tuple[int, int]] = ()):
        acc: dict[int, int] = {}
        items = exps.items() if isinstance(exps, dict) else exps
        for v, e in items:
            if e:
                acc[v] = acc.get(v, 0) + e
        if any(e < 0 for e in acc.values()):
            raise ValueError("negative exponent in monomial")
        object.__setattr__(self, "exps", tuple(sorted(acc.items())))

    def __setattr__(self, name, value):
        raise AttributeError("Monomial is immutable")

    @property
    def degree(self) -> int:
        return sum(e for _, e in self.exps)

    @property
    def is_unit(self) -> bool:
        return not self.exps

    def exponent(self, var: int) -> int:
        for v, e in self.exps:
            if v == var:
                return e
        return 0

    def variables(self) -> set[int]:
        return {v for v, _ in self.exps}

    def __mul__(self, other: "Monomial") -> "Monomial":
        if not isinstance(other, Monomial):
            return NotImplemented
        acc = dict(self.exps)
        for v, e in other.exps:
            acc[v] = acc.get(v, 0) + e
        return Monomial(acc)

    def divides(self, other: "Monomial") -> bool:
        return all(other.exponent(v) >= e for v, e in self.exps)

    def __truediv__(self, other: "Monomial") -> "Monomial":
        acc = dict(self.exps)
        for v, e in other.exps:
            ne = acc.get(v, 0) - e
            if ne < 0:
                raise NotDivisibleError(f"{other!r} does not divide {self!r}")
            acc[v] = ne
        return Monomial(acc)

    def lcm(self, other: "Monomial") -> "Monomial":
        acc = dict(self.exps)
        for v, e in other.exps:
            acc[v] = max(acc.get(v, 0), e)
        return Monomial(acc)

    def __eq__(self, other) -> bool:
        return isinstance(other, Monomial) and self.exps == other.exps

    def __hash__(self) -> int:
        return hash(self.exps)

    def __repr__(self) -> str:
        if not self.exps:
            return "Monomial()"
        body = ",".join(f"{v}^{e}" for v, e in self.exps)
        return f"Monomial({body})"


UNIT = Monomial()


class LexOrder:
    """Lexicographic monomial order driven by a variable precedence key.

    ``precedence`` maps a variable id to a sortable key; variables with
    larger keys dominate the comparison.  Keys must be distinct per
    variable.  The order is total and compatible with multiplication.
    """

    def __init__(self, precedence: Callable[[int], object]):
        self._precedence = precedence
        self._cache: dict[Monomial, tuple] = {}

    @classmethod
    def from_sequence(cls, variables_low_to_high: Iterable[int]) -> "LexOrder":
        """Build an order from an explicit variable listing, lowest first."""
        ranks = {v: i for i, v in enumerate(variables_low_to_high)}

        def key(v: int):
            try:
                return ranks[v]
            except KeyError:
                raise KeyError(f"variable {v} is not ranked by this order") from None

        return cls(key)

    def key(self, m: Monomial) -> tuple:
        """Sort key: comparing keys as tuples realizes the lex order."""
        k = self._cache.get(m)
        if k is None:
            prec = self._precedence
            k = tuple(sorted(((prec(v), e) for v, e in m.exps), reverse=True))
            self._cache[m] = k
        return k

    def compare(self, a: Monomial, b: Monomial) -> int:
        """-1, 0 or +1 as a precedes, equals or dominates b."""
        ka, kb = self.key(a), self.key(b)
        return (ka > kb) - (ka < kb)


#: fallback order: precedence by raw variable id (rate lowest).  Coincides
#: with the registry order on the six preloaded correlation variables.
DEFAULT_ORDER = LexOrder(lambda v: v)

_Coefficient = Fraction | int


class Polynomial:
    """Multivariate polynomial in canonical form.

    ``terms`` maps monomials to nonzero Fraction coefficients; the zero
    polynomial has an empty map.  Two polynomials are equal iff their term
    maps are equal.  Instances are treated as immutable values.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, _Coefficient] | None = None):
        clean: dict[Monomial, Fraction] = {}
        if terms:
            for m, c in terms.items():
                c = Fraction(c)
                if c:
                    clean[m] = c
        self.terms = clean

    @classmethod
    def zero(cls) -> "Polynomial":
        return cls()

    @classmethod
    def constant(cls, c: _Coefficient) -> "Polynomial":
        return cls({UNIT: c})

    @classmethod
    def variable(cls, var: int, exp: int = 1) -> "Polynomial":
        return cls({Monomial([(var, exp)]): 1})

    @classmethod
    def from_terms(cls, pairs: Iterable[tuple[Monomial, _Coefficient]]) -> "Polynomial":
        acc: dict[Monomial, Fraction] = {}
        for m, c in pairs:
            acc[m] = acc.get(m, Fraction(0)) + Fraction(c)
        return cls(acc)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(other)
        return isinstance(other, Polynomial) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __add__(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        acc = dict(self.terms)
        for m, c in other.terms.items():
            s = acc.get(m, Fraction(0)) + c
            if s:
                acc[m] = s
            else:
                acc.pop(m, None)
        res = Polynomial.__new__(Polynomial)
        res.terms = acc
        return res

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        res = Polynomial.__new__(Polynomial)
        res.terms = {m: -c for m, c in self.terms.items()}
        return res

    def __sub__(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Polynomial":
        return (-self) + other

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if not c:
                return Polynomial.zero()
            res = Polynomial.__new__(Polynomial)
            res.terms = {m: k * c for m, k in self.terms.items()}
            return res
        if not isinstance(other, Polynomial):
            return NotImplemented
        acc: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = m1 * m2
                s = acc.get(m, Fraction(0)) + c1 * c2
                if s:
                    acc[m] = s
                else:
                    acc.pop(m, None)
        res = Polynomial.__new__(Polynomial)
        res.terms = acc
        return res

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Polynomial":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        out = Polynomial.constant(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def degree(self, var: int | None = None) -> int:
        """Total degree, or degree in one variable; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        if var is None:
            return max(m.degree for m in self.terms)
        return max(m.exponent(var) for m in self.terms)

    def variables(self) -> set[int]:
        out: set[int] = set()
        for m in self.terms:
            out |= m.variables()
        return out

    def coefficient(self, m: Monomial) -> Fraction:
        return self.terms.get(m, Fraction(0))

    def leading_monomial(self, order: LexOrder) -> Monomial:
        if not self.terms:
            raise ValueError("zero polynomial has no leading monomial")
        return max(self.terms, key=order.key)

    def leading_coefficient(self, order: LexOrder) -> Fraction:
        return self.terms[self.leading_monomial(order)]

    def leading_term(self, order: LexOrder) -> tuple[Monomial, Fraction]:
        m = self.leading_monomial(order)
        return m, self.terms[m]

    def substitute(self, assignment: Mapping[int, "Polynomial | _Coefficient"]) -> "Polynomial":
        """Replace the given variables by polynomials or constants."""
        values: dict[int, Polynomial] = {}
        for v, val in assignment.items():
            values[v] = val if isinstance(val, Polynomial) else Polynomial.constant(val)
        out = Polynomial.zero()
        for m, c in self.terms.items():
            kept = [(v, e) for v, e in m.exps if v not in values]
            piece = Polynomial({Monomial(kept): c})
            for v, e in m.exps:
                if v in values:
                    piece = piece * values[v] ** e
            out = out + piece
        return out

    def evaluate(self, assignment: Mapping[int, _Coefficient]) -> Fraction:
        """Evaluate with every variable assigned a rational value."""
        total = Fraction(0)
        for m, c in self.terms.items():
            val = c
            for v, e in m.exps:
                val *= Fraction(assignment[v]) ** e
            total += val
        return total

    def content(self) -> Fraction:
        """Positive rational content (gcd of numerators over lcm of denominators)."""
        if not self.terms:
            return Fraction(0)
        nums = 0
        dens = 1
        for c in self.terms.values():
            nums = gcd(nums, abs(c.numerator))
            dens = lcm(dens, c.denominator)
        return Fraction(nums, dens)

    def primitive(self, order: LexOrder) -> tuple[Fraction, "Polynomial"]:
        """Split into (scale, primitive part).

        The primitive part has integer coefficients with content 1 and a
        positive leading coefficient under ``order``; self == scale * part.
        """
        if not self.terms:
            raise ValueError("zero polynomial has no primitive part")
        scale = self.content()
        if self.leading_coefficient(order) < 0:
            scale = -scale
        return scale, self * (1 / scale)

    def univariate(self, var: int) -> list[Fraction]:
        """Dense ascending coefficient list; fails if other variables appear."""
        coeffs = [Fraction(0)] * (self.degree(var) + 1) if self.terms else []
        for m, c in self.terms.items():
            if m.variables() - {var}:
                raise ValueError(f"polynomial is not univariate in variable {var}")
            coeffs[m.exponent(var)] += c
        return coeffs

    def __repr__(self) -> str:
        return f"Polynomial({format_polynomial(self)})"


def reduce(
    f: Polynomial, divisors: Iterable[Polynomial], order: LexOrder
) -> tuple[list[Polynomial], Polynomial]:
    """Multivariate division of f by an ordered list of divisors.

    Returns (quotients, remainder) with f == sum(q_i * g_i) + r and no
    monomial of r divisible by the leading monomial of any divisor.
    Deterministic: the current leading monomial is always cancelled against
    the first divisor in list order that divides it.
    """
    G = list(divisors)
    if any(not g for g in G):
        raise ZeroDivisionError("zero polynomial among divisors")
    quotients = [Polynomial.zero() for _ in G]
    if not G:
        return [], f
    leads = [g.leading_term(order) for g in G]
    remainder: dict[Monomial, Fraction] = {}
    p = f
    while p:
        lm, lc = p.leading_term(order)
        for i, (gm, gc) in enumerate(leads):
            if gm.divides(lm):
                q = Polynomial({lm / gm: lc / gc})
                quotients[i] = quotients[i] + q
                p = p - q * G[i]
                break
        else:
            remainder[lm] = lc
            p = p - Polynomial({lm: lc})
    return quotients, Polynomial(remainder)


def exact_divide(f: Polynomial, g: Polynomial) -> Polynomial:
    """Return q with f == q * g, or raise NotDivisibleError."""
    if not g:
        raise ZeroDivisionError("division by the zero polynomial")
    if not f:
        return Polynomial.zero()
    order = LexOrder.from_sequence(sorted(f.variables() | g.variables()))
    quotients, r = reduce(f, [g], order)
    if r:
        raise NotDivisibleError("polynomial division leaves a remainder")
    return quotients[0]


# ---------------------------------------------------------------------------
# text grammar


_TOKEN = re.compile(r"(\d+)|([a-z]\d*)|([()^*/+-])|(\S)")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    for match in _TOKEN.finditer(text):
        pos = match.start()
        if match.group(1):
            tokens.append(("int", match.group(1), pos))
        elif match.group(2):
            tokens.append(("name", match.group(2), pos))
        elif match.group(3):
            tokens.append(("op", match.group(3), pos))
        else:
            raise ParseError(f"unexpected character {match.group(4)!r}", pos)
    return tokens


class _Parser:
    """Recursive-descent parser for the flat polynomial grammar.

    expr   := [+|-] term ((+|-) term)*
    term   := power (('*'? power))*          (product sign optional)
    power  := atom ['^' int]
    atom   := int ['/' int] | name | '(' expr ')'
    """

    def __init__(self, text: str, resolve: Callable[[str, int], int]):
        self.tokens = _tokenize(text)
        self.i = 0
        self.n = len(self.tokens)
        self.resolve = resolve
        self.length = len(text)

    def peek(self):
        return self.tokens[self.i] if self.i < self.n else (None, None, self.length)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect_op(self, op: str):
        kind, val, pos = self.take()
        if kind != "op" or val != op:
            raise ParseError(f"expected {op!r}", pos)

    def parse(self) -> Polynomial:
        p = self.expr()
        kind, val, pos = self.peek()
        if kind is not None:
            raise ParseError(f"unexpected token {val!r}", pos)
        return p

    def expr(self) -> Polynomial:
        sign = 1
        kind, val, _ = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            sign = -1 if val == "-" else 1
        total = self.term() * sign
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                nxt = self.term()
                total = total - nxt if val == "-" else total + nxt
            else:
                return total

    def term(self) -> Polynomial:
        product = self.power()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val == "*":
                self.take()
                product = product * self.power()
            elif kind in ("int", "name") or (kind == "op" and val == "("):
                product = product * self.power()
            else:
                return product

    def power(self) -> Polynomial:
        base = self.atom()
        kind, val, _ = self.peek()
        if kind == "op" and val == "^":
            self.take()
            ekind, eval_, epos = self.take()
            if ekind != "int":
                raise ParseError("expected integer exponent", epos)
            return base ** int(eval_)
        return base

    def atom(self) -> Polynomial:
        kind, val, pos = self.take()
        if kind == "int":
            nkind, nval, _ = self.peek()
            if nkind == "op" and nval == "/":
                self.take()
                dkind, dval, dpos = self.take()
                if dkind != "int":
                    raise ParseError("expected integer denominator", dpos)
                return Polynomial.constant(Fraction(int(val), int(dval)))
            return Polynomial.constant(int(val))
        if kind == "name":
            return Polynomial.variable(self.resolve(val, pos))
        if kind == "op" and val == "(":
            inner = self.expr()
            self.expect_op(")")
            return inner
        raise ParseError(f"unexpected token {val!r}", pos)


def parse(text: str, names: Mapping[str, int] | None = None) -> Polynomial:
    """Parse polynomial text.

    ``names`` maps variable names to ids and defaults to the classical
    table (`l x y w z u s`); names of the form ``v<k>`` always resolve to
    variable id k.
    """
    table = ID_BY_NAME if names is None else names

    def resolve(name: str, pos: int) -> int:
        if name in table:
            return table[name]
        m = _GENERATED_NAME.match(name)
        if m:
            return int(m.group(1))
        raise UnknownVariableError(f"unknown variable {name!r}", pos)

    return _Parser(text, resolve).parse()


def _default_name(vid: int) -> str:
    return NAME_BY_ID.get(vid, f"v{vid}")


def format_monomial(m: Monomial, names: Callable[[int], str] | None = None) -> str:
    name = names or _default_name
    if m.is_unit:
        return "1"
    parts = []
    for v, e in m.exps:
        parts.append(name(v) if e == 1 else f"{name(v)}^{e}")
    return "*".join(parts)


def format_polynomial(
    p: Polynomial,
    order: LexOrder | None = None,
    names: Callable[[int], str] | None = None,
) -> str:
    """Flat expanded form, terms descending under ``order``.

    Examples: ``2*l*y - 2*l*x - x + 1``, ``y - x^2``, ``0``.
    """
    if not p:
        return "0"
    order = order or DEFAULT_ORDER
    pieces = []
    for m in sorted(p.terms, key=order.key, reverse=True):
        c = p.terms[m]
        mono = format_monomial(m, names)
        mag = abs(c)
        if m.is_unit:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        pieces.append(("-" if c < 0 else "+", body))
    sign, body = pieces[0]
    out = body if sign == "+" else f"-{body}"
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out
