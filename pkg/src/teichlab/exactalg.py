"""Exact arithmetic kernel: Laurent polynomials, rational functions,
subtraction-free expressions and semifields.

Everything here is exact.  Scalars are ``fractions.Fraction``; a Laurent
polynomial is a dict from integer exponent vectors to nonzero rational
coefficients; a rational function is a reduced pair of Laurent polynomials.
Subtraction never appears in a ``PositiveExpression``, so such expressions can
be evaluated in any semifield (ordinary positive numbers, tropical integers,
symbolic rational functions, ...) with identical structure.
"""

from __future__ import annotations

import json
from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping

Exponent = tuple[int, ...]


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


class LaurentPolynomial:
    """Sparse multivariate Laurent polynomial over the rationals.

    The variable list is part of the value; mixing polynomials with different
    variable tuples is an error, never a silent merge.  Zero coefficients are
    never stored, so equality is plain structural equality.
    """

    __slots__ = ("vars", "terms")

    def __init__(self, variables: Iterable[str], terms: Mapping[Exponent, Fraction] | None = None):
        self.vars = tuple(variables)
        clean: dict[Exponent, Fraction] = {}
        if terms:
            n = len(self.vars)
            for exp, coeff in terms.items():
                c = _as_fraction(coeff)
                if len(exp) != n:
                    raise ValueError(f"exponent {exp} has wrong length for vars {self.vars}")
                if c != 0:
                    clean[tuple(int(e) for e in exp)] = c
        self.terms = clean

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, variables):
        return cls(variables, {})

    @classmethod
    def constant(cls, variables, value):
        variables = tuple(variables)
        return cls(variables, {(0,) * len(variables): _as_fraction(value)})

    @classmethod
    def variable(cls, variables, name):
        variables = tuple(variables)
        exp = [0] * len(variables)
        exp[variables.index(name)] = 1
        return cls(variables, {tuple(exp): Fraction(1)})

    @classmethod
    def monomial(cls, variables, exp, coeff=1):
        return cls(variables, {tuple(exp): _as_fraction(coeff)})

    # -- ring structure -----------------------------------------------

    def _check(self, other: "LaurentPolynomial"):
        if self.vars != other.vars:
            raise ValueError(f"variable mismatch: {self.vars} vs {other.vars}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentPolynomial.constant(self.vars, other)
        self._check(other)
        out = dict(self.terms)
        for exp, c in other.terms.items():
            s = out.get(exp, Fraction(0)) + c
            if s == 0:
                out.pop(exp, None)
            else:
                out[exp] = s
        return LaurentPolynomial(self.vars, out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPolynomial(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentPolynomial.constant(self.vars, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return LaurentPolynomial.zero(self.vars)
            return LaurentPolynomial(self.vars, {e: c * other for e, c in self.terms.items()})
        self._check(other)
        out: dict[Exponent, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, Fraction(0)) + c1 * c2
                if s == 0:
                    out.pop(e, None)
                else:
                    out[e] = s
        return LaurentPolynomial(self.vars, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise TypeError("exponent must be an integer")
        if n < 0:
            unit = self.as_unit()
            if unit is None:
                raise ValueError("negative power of a non-monomial Laurent polynomial")
            exp, coeff = unit
            return LaurentPolynomial.monomial(self.vars, tuple(n * e for e in exp), coeff ** n)
        result = LaurentPolynomial.constant(self.vars, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentPolynomial.constant(self.vars, other)
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        return self.vars == other.vars and self.terms == other.terms

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    # -- inspection ----------------------------------------------------

    def is_zero(self):
        return not self.terms

    def as_unit(self):
        """Return (exponent, coeff) if this is a single term, else None."""
        if len(self.terms) != 1:
            return None
        ((exp, coeff),) = self.terms.items()
        return exp, coeff

    def degree_in(self, name: str) -> int:
        i = self.vars.index(name)
        return max((e[i] for e in self.terms), default=0)

    def sorted_terms(self):
        """Terms in the canonical order: lexicographically decreasing exponents."""
        return sorted(self.terms.items(), key=lambda t: t[0], reverse=True)

    def is_positive_integral(self):
        """Check that every coefficient is a positive integer.

        Returns (True, None) or (False, witness) where witness is the first
        offending (coefficient, exponent) pair in canonical term order.
        """
        for exp, coeff in self.sorted_terms():
            if coeff.denominator != 1 or coeff <= 0:
                return False, (coeff, exp)
        return True, None

    def is_sign_definite(self):
        signs = {c > 0 for c in self.terms.values()}
        return len(signs) <= 1

    def highest_term(self, weight: Iterable[int]):
        """The term maximizing <exponent, weight>; ties broken by canonical order.

        Returns (exponent, coefficient, tied) where `tied` flags a non-unique
        maximizer.  Raises on the zero polynomial.
        """
        if not self.terms:
            raise ValueError("zero polynomial has no highest term")
        w = tuple(weight)

        def key(exp):
            return sum(e * x for e, x in zip(exp, w))

        best = max(key(e) for e in self.terms)
        winners = sorted((e for e in self.terms if key(e) == best), reverse=True)
        exp = winners[0]
        return exp, self.terms[exp], len(winners) > 1

    def tropical_degree(self, point: Iterable) -> Fraction:
        """max over terms of <exponent, point>: the tropicalization of self."""
        if not self.terms:
            raise ValueError("zero polynomial has no tropical degree")
        p = [_as_fraction(x) for x in point]
        return max(sum(e * x for e, x in zip(exp, p)) for exp in self.terms)

    # -- division ------------------------------------------------------

    def monomial_shift(self):
        """Factor out the largest common monomial: returns (exp, polynomial)
        with polynomial having exponents >= 0 in every variable and a term
        with zero exponent in each variable where possible."""
        if not self.terms:
            return (0,) * len(self.vars), self
        mins = tuple(min(e[i] for e in self.terms) for i in range(len(self.vars)))
        if all(m == 0 for m in mins):
            return mins, self
        shifted = {tuple(a - b for a, b in zip(e, mins)): c for e, c in self.terms.items()}
        return mins, LaurentPolynomial(self.vars, shifted)

    def content(self) -> Fraction:
        """gcd of the coefficients (positive; sign of the leading term kept out)."""
        if not self.terms:
            return Fraction(0)
        num = 0
        den = 1
        for c in self.terms.values():
            num = gcd(num, abs(c.numerator))
            den = den * c.denominator // gcd(den, c.denominator)
        return Fraction(num, den)

    def exact_div(self, other: "LaurentPolynomial"):
        """Exact quotient self / other, or None when the division is not exact."""
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("division of Laurent polynomial by zero")
        if self.is_zero():
            return self
        unit = other.as_unit()
        if unit is not None:
            exp, coeff = unit
            return LaurentPolynomial(
                self.vars,
                {tuple(a - b for a, b in zip(e, exp)): c / coeff for e, c in self.terms.items()})
        # reduce to ordinary polynomials and do leading-term elimination
        _, num = self.monomial_shift()
        _, den = other.monomial_shift()
        quot: dict[Exponent, Fraction] = {}
        den_lead = max(den.terms)
        den_lc = den.terms[den_lead]
        rem = num
        while rem.terms:
            lead = max(rem.terms)
            qexp = tuple(a - b for a, b in zip(lead, den_lead))
            if any(e < 0 for e in qexp):
                return None
            qc = rem.terms[lead] / den_lc
            quot[qexp] = qc
            rem = rem - den * LaurentPolynomial.monomial(self.vars, qexp, qc)
        qpoly = LaurentPolynomial(self.vars, quot)
        # undo the monomial shifts
        smin, _ = self.monomial_shift()
        omin, _ = other.monomial_shift()
        shift = tuple(a - b for a, b in zip(smin, omin))
        return qpoly * LaurentPolynomial.monomial(self.vars, shift)

    # -- evaluation ----------------------------------------------------

    def evaluate(self, point: Mapping[str, Fraction]) -> Fraction:
        total = Fraction(0)
        values = [_as_fraction(point[v]) for v in self.vars]
        for exp, coeff in self.terms.items():
            term = coeff
            for v, e in zip(values, exp):
                if e == 0:
                    continue
                if v == 0 and e < 0:
                    raise ZeroDivisionError("negative exponent at zero value")
                term *= v ** e
            total += term
        return total

    def substitute_vars(self, variables, mapping: Mapping[str, int]):
        """Rename/embed into another variable tuple via name mapping."""
        variables = tuple(variables)
        idx = {name: variables.index(new) for name, new in
               ((v, mapping.get(v, v)) for v in self.vars)}
        out: dict[Exponent, Fraction] = {}
        for exp, coeff in self.terms.items():
            new = [0] * len(variables)
            for v, e in zip(self.vars, exp):
                new[idx[v]] += e
            key = tuple(new)
            s = out.get(key, Fraction(0)) + coeff
            if s == 0:
                out.pop(key, None)
            else:
                out[key] = s
        return LaurentPolynomial(variables, out)

    # -- serialization ---------------------------------------------------

    def to_json_dict(self):
        return {
            "vars": list(self.vars),
            "terms": [
                {"exp": list(exp), "num": str(c.numerator), "den": str(c.denominator)}
                for exp, c in self.sorted_terms()
            ],
        }

    @classmethod
    def from_json_dict(cls, data):
        terms = {tuple(t["exp"]): Fraction(int(t["num"]), int(t["den"])) for t in data["terms"]}
        return cls(tuple(data["vars"]), terms)

    def dumps(self):
        return json.dumps(self.to_json_dict(), sort_keys=True)

    def __str__(self):
        if not self.terms:
            return "0"
        chunks = []
        for exp, coeff in self.sorted_terms():
            factors = []
            for v, e in zip(self.vars, exp):
                if e == 1:
                    factors.append(v)
                elif e != 0:
                    factors.append(f"{v}^{e}")
            mono = "*".join(factors)
            if not mono:
                chunks.append(str(coeff))
            elif coeff == 1:
                chunks.append(mono)
            elif coeff == -1:
                chunks.append(f"-{mono}")
            else:
                chunks.append(f"{coeff}*{mono}")
        out = " + ".join(chunks)
        return out.replace("+ -", "- ")

    def __repr__(self):
        return f"LaurentPolynomial({self})"


class RationalFunction:
    """Quotient of two Laurent polynomials, reduced as far as exact division,
    monomial content and rational content allow.

    Equality is decided by cross multiplication, so it is exact even when the
    reduced forms differ.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: LaurentPolynomial, den: LaurentPolynomial | None = None):
        if den is None:
            den = LaurentPolynomial.constant(num.vars, 1)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        num._check(den)
        self.num, self.den = self._reduce(num, den)

    @staticmethod
    def _reduce(num, den):
        if num.is_zero():
            return num, LaurentPolynomial.constant(num.vars, 1)
        q = num.exact_div(den)
        if q is not None:
            return q, LaurentPolynomial.constant(num.vars, 1)
        q = den.exact_div(num)
        if q is not None:
            # normalize to 1/q
            one = LaurentPolynomial.constant(num.vars, 1)
            unit = q.as_unit()
            if unit is not None:
                exp, coeff = unit
                return LaurentPolynomial.monomial(num.vars, tuple(-e for e in exp),
                                                  Fraction(1) / coeff), one
            return one, q
        nexp, npoly = num.monomial_shift()
        dexp, dpoly = den.monomial_shift()
        shift = tuple(a - b for a, b in zip(nexp, dexp))
        ncont = npoly.content()
        dcont = dpoly.content()
        scale = ncont / dcont
        npoly = npoly * (Fraction(1) / ncont)
        dpoly = dpoly * (Fraction(1) / dcont)
        npoly = npoly * LaurentPolynomial.monomial(num.vars, shift, scale)
        return npoly, dpoly

    @classmethod
    def from_scalar(cls, variables, value):
        return cls(LaurentPolynomial.constant(variables, value))

    @classmethod
    def var(cls, variables, name):
        return cls(LaurentPolynomial.variable(variables, name))

    @property
    def vars(self):
        return self.num.vars

    def _coerce(self, other):
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, LaurentPolynomial):
            return RationalFunction(other)
        if isinstance(other, (int, Fraction)):
            return RationalFunction.from_scalar(self.vars, other)
        raise TypeError(f"cannot combine RationalFunction with {other!r}")

    def __add__(self, other):
        o = self._coerce(other)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o.num.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def inv(self):
        return RationalFunction(self.den, self.num)

    def __pow__(self, n: int):
        if n < 0:
            return self.inv() ** (-n)
        out = RationalFunction.from_scalar(self.vars, 1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self.num * o.den == o.num * self.den

    def __hash__(self):
        raise TypeError("RationalFunction is not hashable")

    def is_zero(self):
        return self.num.is_zero()

    def as_laurent(self):
        """Return self as a LaurentPolynomial if the denominator is a unit, else None."""
        q = self.num.exact_div(self.den)
        return q

    def evaluate(self, point):
        d = self.den.evaluate(point)
        if d == 0:
            raise ZeroDivisionError("denominator vanishes at the point")
        return self.num.evaluate(point) / d

    def __str__(self):
        if self.den == LaurentPolynomial.constant(self.vars, 1):
            return str(self.num)
        return f"({self.num}) / ({self.den})"

    def __repr__(self):
        return f"RationalFunction({self})"


# ---------------------------------------------------------------------------
# Semifields
# ---------------------------------------------------------------------------


class Semifield:
    """A set with commutative associative addition, an abelian multiplicative
    group, and distributivity.  Subclasses provide the four operations plus
    the embedding of positive rational constants."""

    name = "abstract"

    def add(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def div(self, a, b):
        raise NotImplementedError

    def one(self):
        raise NotImplementedError

    def from_rational(self, q: Fraction):
        raise NotImplementedError

    def pow(self, a, n: int):
        if n == 0:
            return self.one()
        if n < 0:
            return self.div(self.one(), self.pow(a, -n))
        out = a
        for _ in range(n - 1):
            out = self.mul(out, a)
        return out


class PositiveRationals(Semifield):
    """Q_{>0} with ordinary operations."""

    name = "Q+"

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def div(self, a, b):
        return a / b

    def one(self):
        return Fraction(1)

    def from_rational(self, q):
        q = _as_fraction(q)
        if q <= 0:
            raise ValueError("constant in a positive expression must be positive")
        return q


class TropicalSemifield(Semifield):
    """Z, Q or R with max as addition and + as multiplication."""

    name = "tropical"

    def __init__(self, carrier=Fraction):
        self.carrier = carrier

    def add(self, a, b):
        return max(a, b)

    def mul(self, a, b):
        return a + b

    def div(self, a, b):
        return a - b

    def one(self):
        return self.carrier(0)

    def from_rational(self, q):
        # tropicalization forgets positive constants
        q = _as_fraction(q)
        if q <= 0:
            raise ValueError("tropicalization is defined for positive constants only")
        return self.carrier(0)


class LeadingTermSemifield(Semifield):
    """Laurent series over Q with positive leading coefficient, truncated to
    the pair (leading degree, leading coefficient).

    Addition keeps the smaller degree; since all coefficients are positive,
    equal-degree terms never cancel.  Sending (s, a) to -s is a semifield
    homomorphism onto the tropical integers, which is what the tropical-limit
    tests exercise.
    """

    name = "Q((eps))+"

    def add(self, a, b):
        if a[0] < b[0]:
            return a
        if b[0] < a[0]:
            return b
        return (a[0], a[1] + b[1])

    def mul(self, a, b):
        return (a[0] + b[0], a[1] * b[1])

    def div(self, a, b):
        return (a[0] - b[0], a[1] / b[1])

    def one(self):
        return (Fraction(0), Fraction(1))

    def from_rational(self, q):
        q = _as_fraction(q)
        if q <= 0:
            raise ValueError("leading coefficient must be positive")
        return (Fraction(0), q)


class SymbolicSemifield(Semifield):
    """Rational functions built by subtraction-free operations.

    Useful for instantiating mutation templates symbolically: the same
    expression tree evaluated here yields the rational function, and over a
    tropical carrier yields its tropicalization.
    """

    name = "Q(x)+"

    def __init__(self, variables):
        self.variables = tuple(variables)

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def div(self, a, b):
        return a / b

    def one(self):
        return RationalFunction.from_scalar(self.variables, 1)

    def from_rational(self, q):
        q = _as_fraction(q)
        if q <= 0:
            raise ValueError("constant in a positive expression must be positive")
        return RationalFunction.from_scalar(self.variables, q)

    def var(self, name):
        return RationalFunction.var(self.variables, name)


# ---------------------------------------------------------------------------
# Subtraction-free expressions
# ---------------------------------------------------------------------------


class PositiveExpression:
    """A subtraction-free expression tree with nodes constant / variable /
    add / mul / div.  By construction it can be evaluated in any semifield."""

    __slots__ = ("kind", "payload")

    def __init__(self, kind, payload):
        if kind not in ("const", "var", "add", "mul", "div"):
            raise ValueError(f"unknown node kind {kind}")
        self.kind = kind
        self.payload = payload

    @classmethod
    def const(cls, value):
        q = _as_fraction(value)
        if q <= 0:
            raise ValueError("constants must be positive rationals")
        return cls("const", q)

    @classmethod
    def var(cls, name):
        return cls("var", name)

    def _wrap(self, other):
        if isinstance(other, PositiveExpression):
            return other
        return PositiveExpression.const(other)

    def __add__(self, other):
        return PositiveExpression("add", (self, self._wrap(other)))

    __radd__ = __add__

    def __mul__(self, other):
        return PositiveExpression("mul", (self, self._wrap(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return PositiveExpression("div", (self, self._wrap(other)))

    def __rtruediv__(self, other):
        return self._wrap(other) / self

    def __pow__(self, n: int):
        if n == 0:
            return PositiveExpression.const(1)
        out = self
        for _ in range(abs(n) - 1):
            out = out * self
        if n < 0:
            out = PositiveExpression.const(1) / out
        return out

    def variables(self):
        if self.kind == "var":
            return {self.payload}
        if self.kind == "const":
            return set()
        return self.payload[0].variables() | self.payload[1].variables()

    def evaluate(self, point: Mapping, semifield: Semifield):
        """Structural recursion using the semifield operations.

        Every variable of the expression must be bound in `point`.
        """
        if self.kind == "const":
            return semifield.from_rational(self.payload)
        if self.kind == "var":
            if self.payload not in point:
                raise KeyError(f"unbound variable {self.payload!r}")
            return point[self.payload]
        a = self.payload[0].evaluate(point, semifield)
        b = self.payload[1].evaluate(point, semifield)
        if self.kind == "add":
            return semifield.add(a, b)
        if self.kind == "mul":
            return semifield.mul(a, b)
        return semifield.div(a, b)

    def __str__(self):
        if self.kind == "const":
            return str(self.payload)
        if self.kind == "var":
            return str(self.payload)
        op = {"add": "+", "mul": "*", "div": "/"}[self.kind]
        return f"({self.payload[0]} {op} {self.payload[1]})"


def evaluate(expr: PositiveExpression, point: Mapping, semifield: Semifield):
    """Evaluate a subtraction-free expression at a point of a semifield."""
    return expr.evaluate(point, semifield)


def laurent_is_positive(p: LaurentPolynomial):
    """True iff every coefficient of p is a positive integer; else a witness."""
    return p.is_positive_integral()


def highest_term(p: LaurentPolynomial, weight):
    return p.highest_term(weight)
