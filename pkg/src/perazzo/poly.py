"""Exact multivariate polynomials over the rationals.

Polynomials are sparse maps from exponent tuples to ``Fraction`` coefficients,
in a fixed number of variables named ``x0 .. xN``.  The same representation
doubles as the ring of differential operators ``X0 .. XN`` acting on
polynomials by partial differentiation (``apply_operator``); a polynomial used
as an operator is simply interpreted symbol-for-symbol.

Everything here is exact: no floating point enters at any stage, so identity
tests (e.g. "this determinant is the zero polynomial") are decidable and
reliable.  All values are immutable after construction and all operations are
pure, so they are safe to share between threads.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Sequence, Tuple

Monomial = Tuple[int, ...]


class ParseError(ValueError):
    """Raised on malformed polynomial input; ``position`` is the 0-based offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


def _grlex_key(m: Monomial):
    return (sum(m), m)


class Polynomial:
    """A sparse exact polynomial in ``num_vars`` variables.

    ``terms`` maps exponent tuples to nonzero ``Fraction`` coefficients; the
    zero polynomial has an empty map.  Instances are treated as immutable.
    """

    __slots__ = ("num_vars", "terms")

    def __init__(self, num_vars: int, terms: Dict[Monomial, Fraction] | None = None):
        if num_vars < 1:
            raise ValueError("need at least one variable")
        clean: Dict[Monomial, Fraction] = {}
        for mono, coeff in (terms or {}).items():
            if len(mono) != num_vars:
                raise ValueError(f"monomial {mono} has wrong arity for {num_vars} variables")
            c = Fraction(coeff)
            if c:
                clean[mono] = c
        object.__setattr__(self, "num_vars", num_vars)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):  # pragma: no cover
        raise AttributeError("Polynomial is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, num_vars: int) -> "Polynomial":
        return cls(num_vars, {})

    @classmethod
    def constant(cls, num_vars: int, value) -> "Polynomial":
        return cls(num_vars, {(0,) * num_vars: Fraction(value)})

    @classmethod
    def variable(cls, num_vars: int, index: int) -> "Polynomial":
        if not 0 <= index < num_vars:
            raise IndexError(f"variable index {index} out of range for {num_vars} variables")
        exps = [0] * num_vars
        exps[index] = 1
        return cls(num_vars, {tuple(exps): Fraction(1)})

    @classmethod
    def monomial(cls, exponents: Sequence[int], coeff=1) -> "Polynomial":
        return cls(len(exponents), {tuple(exponents): Fraction(coeff)})

    @property
    def variables(self) -> Tuple[str, ...]:
        return tuple(f"x{i}" for i in range(self.num_vars))

    # -- ring structure ----------------------------------------------------

    def _check(self, other: "Polynomial"):
        if self.num_vars != other.num_vars:
            raise ValueError(f"variable counts differ: {self.num_vars} vs {other.num_vars}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self.num_vars, other)
        self._check(other)
        out = dict(self.terms)
        for mono, coeff in other.terms.items():
            out[mono] = out.get(mono, Fraction(0)) + coeff
        return Polynomial(self.num_vars, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.num_vars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self.num_vars, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            return Polynomial(self.num_vars, {m: v * c for m, v in self.terms.items()})
        self._check(other)
        out: Dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mono = tuple(a + b for a, b in zip(m1, m2))
                out[mono] = out.get(mono, Fraction(0)) + c1 * c2
        return Polynomial(self.num_vars, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = Polynomial.constant(self.num_vars, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.num_vars == other.num_vars and self.terms == other.terms

    def __hash__(self):
        return hash((self.num_vars, tuple(sorted(self.terms.items()))))

    def __bool__(self):
        return bool(self.terms)

    # -- queries -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        degs = {sum(m) for m in self.terms}
        return len(degs) <= 1

    def homogeneous_degree(self) -> int:
        """Degree of a nonzero homogeneous polynomial; raises otherwise."""
        degs = {sum(m) for m in self.terms}
        if len(degs) != 1:
            raise ValueError("polynomial is zero or not homogeneous")
        return degs.pop()

    def coefficient(self, exponents: Sequence[int]) -> Fraction:
        return self.terms.get(tuple(exponents), Fraction(0))

    # -- calculus ----------------------------------------------------------

    def partial(self, i: int) -> "Polynomial":
        """Exact partial derivative with respect to ``x_i``."""
        if not 0 <= i < self.num_vars:
            raise IndexError(f"variable index {i} out of range for {self.num_vars} variables")
        out: Dict[Monomial, Fraction] = {}
        for mono, coeff in self.terms.items():
            if mono[i]:
                lowered = list(mono)
                lowered[i] -= 1
                out[tuple(lowered)] = coeff * mono[i]
        return Polynomial(self.num_vars, out)

    def evaluate(self, point: Sequence) -> Fraction:
        if len(point) != self.num_vars:
            raise ValueError(f"point has {len(point)} coordinates, expected {self.num_vars}")
        pt = [Fraction(c) for c in point]
        total = Fraction(0)
        for mono, coeff in self.terms.items():
            val = coeff
            for c, e in zip(pt, mono):
                if e:
                    val *= c ** e
            total += val
        return total

    # -- printing ----------------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for mono in sorted(self.terms, key=_grlex_key, reverse=True):
            coeff = self.terms[mono]
            factors = []
            for i, e in enumerate(mono):
                if e == 1:
                    factors.append(f"x{i}")
                elif e > 1:
                    factors.append(f"x{i}^{e}")
            body = "*".join(factors)
            mag = abs(coeff)
            if not body:
                text = str(mag)
            elif mag == 1:
                text = body
            else:
                text = f"{mag}*{body}"
            parts.append(("-" if coeff < 0 else "+", text))
        sign, first = parts[0]
        out = ("-" if sign == "-" else "") + first
        for sign, text in parts[1:]:
            out += f" {sign} {text}"
        return out

    def __repr__(self):
        return f"Polynomial({self.num_vars}, {str(self)!r})"


def parse(text: str, num_vars: int) -> Polynomial:
    """Parse ``text`` into an exact ``Polynomial`` in ``num_vars`` variables.

    Grammar: sums/differences of terms, a term is a '*'-separated product of
    factors, a factor is an integer (optionally ``/denominator``), a variable
    ``x<k>`` (optionally ``^<power>``), or a parenthesised expression.
    Whitespace is insignificant.  Round-trips with ``str`` on canonical form.
    """
    tokens = _tokenize(text, num_vars)
    parser = _Parser(tokens, num_vars)
    result = parser.parse_expr()
    if parser.peek()[0] != "end":
        kind, _, pos = parser.peek()
        raise ParseError(f"unexpected {kind!r}", pos)
    return result


def _tokenize(text: str, num_vars: int):
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in "+-*/^()":
            tokens.append((ch, ch, i))
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(("int", int(text[i:j]), i))
            i = j
            continue
        if ch.isalpha():
            if ch != "x":
                raise ParseError(f"unknown variable {ch!r}", i)
            j = i + 1
            while j < n and text[j].isdigit():
                j += 1
            if j == i + 1:
                raise ParseError("variable name needs an index, e.g. x0", i)
            idx = int(text[i + 1:j])
            if idx >= num_vars:
                raise ParseError(f"variable x{idx} exceeds the declared {num_vars} variables", i)
            tokens.append(("var", idx, i))
            i = j
            continue
        raise ParseError(f"unexpected character {ch!r}", i)
    tokens.append(("end", None, n))
    return tokens


class _Parser:
    def __init__(self, tokens, num_vars):
        self.tokens = tokens
        self.pos = 0
        self.num_vars = num_vars

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind):
        tok = self.advance()
        if tok[0] != kind:
            raise ParseError(f"expected {kind!r}, found {tok[0]!r}", tok[2])
        return tok

    def parse_expr(self) -> Polynomial:
        sign = 1
        if self.peek()[0] in "+-":
            if self.advance()[0] == "-":
                sign = -1
        result = self.parse_term() * sign
        while self.peek()[0] in "+-":
            op = self.advance()[0]
            term = self.parse_term()
            result = result + term if op == "+" else result - term
        return result

    def parse_term(self) -> Polynomial:
        result = self.parse_factor()
        while self.peek()[0] == "*":
            self.advance()
            result = result * self.parse_factor()
        return result

    def parse_factor(self) -> Polynomial:
        kind, value, pos = self.peek()
        if kind == "int":
            self.advance()
            num = value
            if self.peek()[0] == "/":
                self.advance()
                den = self.expect("int")[1]
                if den == 0:
                    raise ParseError("zero denominator", pos)
                return Polynomial.constant(self.num_vars, Fraction(num, den))
            return Polynomial.constant(self.num_vars, num)
        if kind == "var":
            self.advance()
            poly = Polynomial.variable(self.num_vars, value)
            if self.peek()[0] == "^":
                self.advance()
                power = self.expect("int")[1]
                poly = poly ** power
            return poly
        if kind == "(":
            self.advance()
            inner = self.parse_expr()
            self.expect(")")
            return inner
        raise ParseError(f"expected a factor, found {kind!r}", pos)


def apply_operator(alpha: Polynomial, f: Polynomial) -> Polynomial:
    """Act with ``alpha`` on ``f`` by differentiation, ``Xi ↦ ∂/∂xi``.

    The action is bilinear and multiplicative in the operator argument:
    composing two operator applications equals applying their product.
    """
    if alpha.num_vars != f.num_vars:
        raise ValueError(f"variable counts differ: {alpha.num_vars} vs {f.num_vars}")
    out: Dict[Monomial, Fraction] = {}
    for op_mono, op_coeff in alpha.terms.items():
        for mono, coeff in f.terms.items():
            scale = op_coeff * coeff
            lowered = []
            for e, a in zip(mono, op_mono):
                if a > e:
                    scale = Fraction(0)
                    break
                for r in range(a):
                    scale *= e - r
                lowered.append(e - a)
            if scale:
                key = tuple(lowered)
                out[key] = out.get(key, Fraction(0)) + scale
    return Polynomial(f.num_vars, out)


def linear_form(coeffs: Sequence) -> Polynomial:
    """The linear polynomial with the given coefficient vector."""
    coeffs = list(coeffs)
    terms: Dict[Monomial, Fraction] = {}
    n = len(coeffs)
    for i, c in enumerate(coeffs):
        c = Fraction(c)
        if c:
            exps = [0] * n
            exps[i] = 1
            terms[tuple(exps)] = c
    return Polynomial(n, terms)


def monomials_of_degree(num_vars: int, degree: int) -> Iterable[Monomial]:
    """All exponent tuples of the given total degree, graded-lex descending."""
    out = []

    def rec(i, rem, cur):
        if i == num_vars - 1:
            out.append(tuple(cur + [rem]))
            return
        for e in range(rem, -1, -1):
            rec(i + 1, rem - e, cur + [e])

    rec(0, degree, [])
    return out
