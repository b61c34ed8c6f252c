"""Exact sparse polynomial arithmetic over the rationals.

Multivariate polynomials are maps from exponent vectors to Fraction
coefficients; univariate ones are dense coefficient tuples, lowest degree
first.  Everything in this module is exact (no floats) and pure (values
are never mutated after construction).

Conventions:
  * an m-variate polynomial lives in variables x1..xm; exponent vectors
    have length m;
  * the zero polynomial stores no terms and has degree -inf (a float
    sentinel, so that degree comparisons still behave);
  * canonical term order is graded lexicographic (total degree first,
    then exponents), which makes the text format byte-reproducible.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Dict, Iterable, Mapping, Sequence, Tuple

from .errors import DimensionMismatch, ParseError, ZeroPolynomialError

Exponents = Tuple[int, ...]
Scalar = Fraction  # every stored coefficient is a Fraction

NEG_INF = float("-inf")


def _frac(value) -> Fraction:
    """Coerce ints, Fractions, and exact strings; floats are rejected so
    inexactness cannot sneak into the ring."""
    if isinstance(value, float):
        raise TypeError("float coefficients are not allowed; use Fraction")
    return Fraction(value)


def as_point(coords: Sequence, num_vars: int) -> Tuple[Fraction, ...]:
    """Validate and coerce a coordinate sequence to exact rationals."""
    pt = tuple(_frac(c) for c in coords)
    if len(pt) != num_vars:
        raise DimensionMismatch(
            f"point has {len(pt)} coordinates, expected {num_vars}")
    return pt


def as_direction(coords: Sequence, num_vars: int) -> Tuple[Fraction, ...]:
    """Like as_point but additionally rejects the zero vector."""
    v = as_point(coords, num_vars)
    if all(c == 0 for c in v):
        raise DimensionMismatch("direction must have a nonzero entry")
    return v


class Polynomial:
    """Immutable sparse polynomial in num_vars variables over Q."""

    __slots__ = ("num_vars", "_terms", "_hash")

    def __init__(self, num_vars: int, terms: Mapping[Exponents, object] = ()):
        if num_vars < 1:
            raise DimensionMismatch("num_vars must be >= 1")
        clean: Dict[Exponents, Fraction] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for exps, coeff in items:
            exps = tuple(int(e) for e in exps)
            if len(exps) != num_vars:
                raise DimensionMismatch(
                    f"exponent vector {exps} has length {len(exps)}, "
                    f"expected {num_vars}")
            if any(e < 0 for e in exps):
                raise ValueError(f"negative exponent in {exps}")
            c = _frac(coeff)
            if c != 0:
                c = clean.get(exps, Fraction(0)) + c
                if c != 0:
                    clean[exps] = c
                elif exps in clean:
                    del clean[exps]
        self.num_vars = num_vars
        self._terms = clean
        self._hash = None

    # -- constructors ----------------------------------------------------

    @classmethod
    def zero(cls, num_vars: int) -> "Polynomial":
        return cls(num_vars, {})

    @classmethod
    def constant(cls, value, num_vars: int) -> "Polynomial":
        return cls(num_vars, {(0,) * num_vars: _frac(value)})

    @classmethod
    def variable(cls, index: int, num_vars: int) -> "Polynomial":
        """The monomial x_index, with 1-based index as in x1..xm."""
        if not 1 <= index <= num_vars:
            raise DimensionMismatch(f"variable index {index} out of range")
        exps = tuple(1 if i == index - 1 else 0 for i in range(num_vars))
        return cls(num_vars, {exps: Fraction(1)})

    # -- inspection -------------------------------------------------------

    @property
    def terms(self) -> Dict[Exponents, Fraction]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def degree(self):
        """Total degree; -inf for the zero polynomial."""
        if not self._terms:
            return NEG_INF
        return max(sum(e) for e in self._terms)

    def coefficient(self, exps: Iterable[int]) -> Fraction:
        return self._terms.get(tuple(exps), Fraction(0))

    def sorted_terms(self):
        """Terms in graded-lex order (ascending), the canonical order."""
        return sorted(self._terms.items(), key=lambda kv: (sum(kv[0]), kv[0]))

    # -- ring operations --------------------------------------------------

    def _check_same_ring(self, other: "Polynomial"):
        if self.num_vars != other.num_vars:
            raise DimensionMismatch(
                f"mixed polynomial rings: {self.num_vars} vs {other.num_vars} variables")

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(other, self.num_vars)
        self._check_same_ring(other)
        out = dict(self._terms)
        for exps, c in other._terms.items():
            s = out.get(exps, Fraction(0)) + c
            if s == 0:
                out.pop(exps, None)
            else:
                out[exps] = s
        return Polynomial(self.num_vars, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.num_vars,
                          {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(other, self.num_vars)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            c = _frac(other)
            return Polynomial(self.num_vars,
                              {e: c * v for e, v in self._terms.items()})
        self._check_same_ring(other)
        out: Dict[Exponents, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                key = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(key, Fraction(0)) + c1 * c2
                if s == 0:
                    out.pop(key, None)
                else:
                    out[key] = s
        return Polynomial(self.num_vars, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = Polynomial.constant(1, self.num_vars)
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other):
        return (isinstance(other, Polynomial)
                and self.num_vars == other.num_vars
                and self._terms == other._terms)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num_vars,
                               frozenset(self._terms.items())))
        return self._hash

    def __repr__(self):
        if self.is_zero():
            return f"Polynomial({self.num_vars}, 0)"
        parts = []
        for exps, c in self.sorted_terms():
            mono = "*".join(f"x{i + 1}^{e}" for i, e in enumerate(exps) if e)
            parts.append(f"{c}" + (f"*{mono}" if mono else ""))
        return f"Polynomial({self.num_vars}, {' + '.join(parts)})"

    # -- evaluation and substitution ---------------------------------------

    def evaluate(self, point: Sequence) -> Fraction:
        """Exact value at a rational point."""
        x = as_point(point, self.num_vars)
        total = Fraction(0)
        for exps, c in self._terms.items():
            v = c
            for xi, e in zip(x, exps):
                if e:
                    v *= xi ** e
            total += v
        return total

    def partial_derivative(self, index: int) -> "Polynomial":
        """d/dx_index, with 1-based index."""
        if not 1 <= index <= self.num_vars:
            raise DimensionMismatch(f"variable index {index} out of range")
        i = index - 1
        out = {}
        for exps, c in self._terms.items():
            e = exps[i]
            if e:
                key = exps[:i] + (e - 1,) + exps[i + 1:]
                out[key] = out.get(key, Fraction(0)) + c * e
        return Polynomial(self.num_vars, out)

    def shift(self, x0: Sequence) -> "Polynomial":
        """p(x + x0), exactly."""
        t = as_point(x0, self.num_vars)
        result: Dict[Exponents, Fraction] = {}
        for exps, c in self._terms.items():
            # expand prod_i (x_i + t_i)^e_i one variable at a time
            partial: Dict[Exponents, Fraction] = {(): c}
            for i, e in enumerate(exps):
                ti = t[i]
                nxt: Dict[Exponents, Fraction] = {}
                for k in range(e + 1):
                    coef = Fraction(comb(e, k)) * ti ** (e - k)
                    if coef == 0:
                        continue
                    for pexps, pc in partial.items():
                        key = pexps + (k,)
                        nxt[key] = nxt.get(key, Fraction(0)) + pc * coef
                partial = nxt
            for exps2, c2 in partial.items():
                s = result.get(exps2, Fraction(0)) + c2
                if s == 0:
                    result.pop(exps2, None)
                else:
                    result[exps2] = s
        return Polynomial(self.num_vars, result)

    def restrict(self, x0: Sequence, v: Sequence) -> "UnivariatePolynomial":
        """The univariate restriction f(mu) = p(x0 + mu*v), exactly.

        deg f can drop below deg p; that happens exactly when the
        top-degree form of p vanishes at v.
        """
        x = as_point(x0, self.num_vars)
        w = as_direction(v, self.num_vars)
        if self.is_zero():
            return UnivariatePolynomial(())
        d = self.degree()
        acc = [Fraction(0)] * (d + 1)
        for exps, c in self._terms.items():
            factor = [c]
            for xi, vi, e in zip(x, w, exps):
                if e:
                    base = _binomial_power(xi, vi, e)
                    factor = _convolve(factor, base)
            for k, fc in enumerate(factor):
                acc[k] += fc
        return UnivariatePolynomial(acc)

    def top_form(self) -> "Polynomial":
        """Sum of the terms of maximal total degree."""
        if self.is_zero():
            return self
        d = self.degree()
        return Polynomial(self.num_vars,
                          {e: c for e, c in self._terms.items()
                           if sum(e) == d})

    def homogenize(self) -> "Polynomial":
        """Degree-d homogenization in m+1 variables; the new variable X0
        is placed first."""
        if self.is_zero():
            raise ZeroPolynomialError("cannot homogenize the zero polynomial")
        d = self.degree()
        out = {}
        for exps, c in self._terms.items():
            out[(d - sum(exps),) + exps] = c
        return Polynomial(self.num_vars + 1, out)

    def dehomogenize(self) -> "Polynomial":
        """Substitute X0 = 1 into a homogeneous polynomial whose first
        variable is X0.  Rejects inputs divisible by X0 (the degree
        would not survive the round trip)."""
        if self.is_zero():
            raise ZeroPolynomialError("cannot dehomogenize the zero polynomial")
        if self.num_vars < 2:
            raise DimensionMismatch("dehomogenize needs at least 2 variables")
        degrees = {sum(e) for e in self._terms}
        if len(degrees) != 1:
            raise ValueError("input is not homogeneous")
        if all(e[0] > 0 for e in self._terms):
            raise ValueError("input is divisible by X0; dehomogenizing "
                             "would lose degree information")
        out = {}
        for exps, c in self._terms.items():
            out[exps[1:]] = out.get(exps[1:], Fraction(0)) + c
        return Polynomial(self.num_vars - 1, out)


def _binomial_power(a: Fraction, b: Fraction, e: int):
    """Dense coefficients of (a + b*mu)^e in mu."""
    return [Fraction(comb(e, k)) * a ** (e - k) * b ** k for k in range(e + 1)]


def _convolve(f, g):
    out = [Fraction(0)] * (len(f) + len(g) - 1)
    for i, fi in enumerate(f):
        if fi == 0:
            continue
        for j, gj in enumerate(g):
            out[i + j] += fi * gj
    return out


class UnivariatePolynomial:
    """Immutable dense univariate polynomial over Q, lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [_frac(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def zero(cls) -> "UnivariatePolynomial":
        return cls(())

    @classmethod
    def constant(cls, value) -> "UnivariatePolynomial":
        return cls((value,))

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def leading(self) -> Fraction:
        if not self.coeffs:
            raise ZeroPolynomialError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def evaluate(self, x) -> Fraction:
        x = _frac(x)
        total = Fraction(0)
        for c in reversed(self.coeffs):
            total = total * x + c
        return total

    def derivative(self) -> "UnivariatePolynomial":
        return UnivariatePolynomial(
            [c * k for k, c in enumerate(self.coeffs)][1:])

    def __add__(self, other):
        if not isinstance(other, UnivariatePolynomial):
            other = UnivariatePolynomial.constant(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return UnivariatePolynomial(
            [(self.coeffs[i] if i < len(self.coeffs) else 0)
             + (other.coeffs[i] if i < len(other.coeffs) else 0)
             for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return UnivariatePolynomial([-c for c in self.coeffs])

    def __sub__(self, other):
        if not isinstance(other, UnivariatePolynomial):
            other = UnivariatePolynomial.constant(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, UnivariatePolynomial):
            c = _frac(other)
            return UnivariatePolynomial([c * v for v in self.coeffs])
        if self.is_zero() or other.is_zero():
            return UnivariatePolynomial(())
        return UnivariatePolynomial(_convolve(list(self.coeffs),
                                              list(other.coeffs)))

    __rmul__ = __mul__

    def __divmod__(self, other: "UnivariatePolynomial"):
        """Exact field division with remainder."""
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        div = other.coeffs
        dd = len(div) - 1
        lead = div[-1]
        q = [Fraction(0)] * max(0, len(rem) - dd)
        for i in range(len(rem) - 1, dd - 1, -1):
            if rem[i] == 0:
                continue
            f = rem[i] / lead
            q[i - dd] = f
            for j in range(dd + 1):
                rem[i - dd + j] -= f * div[j]
        return UnivariatePolynomial(q), UnivariatePolynomial(rem)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other: "UnivariatePolynomial") -> "UnivariatePolynomial":
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ValueError("division is not exact")
        return q

    def monic(self) -> "UnivariatePolynomial":
        if self.is_zero():
            return self
        lead = self.leading()
        return UnivariatePolynomial([c / lead for c in self.coeffs])

    def __eq__(self, other):
        return (isinstance(other, UnivariatePolynomial)
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        if not self.coeffs:
            return "UnivariatePolynomial(0)"
        parts = [f"{c}*mu^{k}" if k else f"{c}"
                 for k, c in enumerate(self.coeffs) if c != 0]
        return f"UnivariatePolynomial({' + '.join(parts)})"


# -- text format ------------------------------------------------------------
#
# First line:            vars m
# Each further line:     NUM/DEN e1 e2 ... em      (or integer NUM)
# '#' starts a comment; blank lines are ignored.  Canonical output is
# graded-lex ordered with coefficients in lowest terms.


def format_rational(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def parse_rational(token: str, line: int | None = None) -> Fraction:
    try:
        return Fraction(token)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad rational {token!r}: {exc}", line)


def format_polynomial(p: Polynomial) -> str:
    lines = [f"vars {p.num_vars}"]
    for exps, c in p.sorted_terms():
        lines.append(" ".join([format_rational(c)] + [str(e) for e in exps]))
    return "\n".join(lines) + "\n"


def parse_polynomial(text: str) -> Polynomial:
    num_vars = None
    terms: Dict[Exponents, Fraction] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if num_vars is None:
            if fields[0] != "vars" or len(fields) != 2:
                raise ParseError("expected header 'vars m'", lineno)
            try:
                num_vars = int(fields[1])
            except ValueError:
                raise ParseError(f"bad variable count {fields[1]!r}", lineno)
            if num_vars < 1:
                raise ParseError("variable count must be positive", lineno)
            continue
        if len(fields) != num_vars + 1:
            raise ParseError(
                f"expected coefficient plus {num_vars} exponents, "
                f"got {len(fields)} fields", lineno)
        coeff = parse_rational(fields[0], lineno)
        try:
            exps = tuple(int(f) for f in fields[1:])
        except ValueError:
            raise ParseError("exponents must be integers", lineno)
        if any(e < 0 for e in exps):
            raise ParseError("exponents must be nonnegative", lineno)
        terms[exps] = terms.get(exps, Fraction(0)) + coeff
    if num_vars is None:
        raise ParseError("missing 'vars m' header")
    return Polynomial(num_vars, terms)
