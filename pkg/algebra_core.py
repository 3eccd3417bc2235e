#!/usr/bin/env python3
"""
Exact polynomial arithmetic for the quantum cohomology workbench.

Polynomials carry rational (Fraction) coefficients over a declared
Universe of variables with even cohomological degrees. Everything else in
the workbench (quotient rings, potentials, brackets, generating functions)
is built from the Polynomial and TruncatedSeries types defined here.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import sympy
from sympy.parsing.sympy_parser import (
    parse_expr, standard_transformations, convert_xor, implicit_multiplication
)

logger = logging.getLogger(__name__)

_PARSE_TRANSFORMATIONS = standard_transformations + (convert_xor, implicit_multiplication)


class StructuralError(ValueError):
    """Operands live in different universes or mention unknown variables."""


class NotInvertibleError(ValueError):
    """A truncated series does not have constant term 1."""


# ---------------------------
# Monomials (exponent tuples aligned with a Universe)
# ---------------------------

def monomial_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


def monomial_div(a, b):
    return tuple(x - y for x, y in zip(a, b))


def monomial_divides(a, b):
    """True if monomial a divides monomial b."""
    return all(x <= y for x, y in zip(a, b))


def monomial_lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


@dataclass(frozen=True)
class Universe:
    """Ordered variables with even degrees; `quantum` names the q-parameters."""
    names: tuple
    degrees: tuple
    quantum: tuple = ()

    def __post_init__(self):
        if len(self.names) != len(self.degrees):
            raise StructuralError("Universe needs one degree per variable")
        if len(set(self.names)) != len(self.names):
            raise StructuralError(f"Duplicate variable names in {self.names}")
        for name, degree in zip(self.names, self.degrees):
            if degree % 2:
                raise StructuralError(f"Variable {name} has odd degree {degree}")
        for name in self.quantum:
            if name not in self.names:
                raise StructuralError(f"Quantum parameter {name} is not a variable")

    @classmethod
    def build(cls, generators, quantum=()):
        """Universe from [(name, degree), ...] generators plus quantum [(name, degree), ...]."""
        pairs = list(generators) + list(quantum)
        return cls(tuple(n for n, _ in pairs), tuple(int(d) for _, d in pairs),
                   tuple(n for n, _ in quantum))

    def __len__(self):
        return len(self.names)

    def __contains__(self, name):
        return name in self.names

    def index(self, name):
        try:
            return self.names.index(name)
        except ValueError:
            raise StructuralError(f"Unknown variable '{name}' (universe: {', '.join(self.names)})")

    def degree_of(self, name):
        return self.degrees[self.index(name)]

    @property
    def generators(self):
        """Names of the non-quantum variables, in declared order."""
        return tuple(n for n in self.names if n not in self.quantum)

    def weighted_degree(self, exps):
        return sum(e * d for e, d in zip(exps, self.degrees))

    def generator_degree(self, exps):
        return sum(e * d for n, e, d in zip(self.names, exps, self.degrees)
                   if n not in self.quantum)

    def sort_key(self, exps):
        # weighted degree, then degree carried by ring generators, then lex
        return (self.weighted_degree(exps), self.generator_degree(exps), exps)

    def unit(self):
        return (0,) * len(self.names)

    def exponents_dict(self, exps):
        return {n: e for n, e in zip(self.names, exps) if e}

    def monomial_str(self, exps):
        parts = []
        for name, e in zip(self.names, exps):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append(f"{name}^{e}")
        return "*".join(parts) if parts else "1"

    def monomials_of_degree(self, degree, names=None):
        """All exponent tuples of the given weighted degree using only `names`."""
        names = self.names if names is None else tuple(names)
        idx = [self.index(n) for n in names]
        if any(self.degrees[i] <= 0 for i in idx):
            raise StructuralError("Monomial enumeration needs positive degrees")
        found = []

        def walk(pos, remaining, exps):
            if pos == len(idx):
                if remaining == 0:
                    found.append(tuple(exps))
                return
            i = idx[pos]
            d = self.degrees[i]
            for e in range(remaining // d + 1):
                exps[i] = e
                walk(pos + 1, remaining - e * d, exps)
            exps[i] = 0

        if degree >= 0:
            walk(0, degree, [0] * len(self.names))
        return sorted(found, key=self.sort_key, reverse=True)

    def to_dict(self):
        return {
            "generators": [[n, d] for n, d in zip(self.names, self.degrees) if n not in self.quantum],
            "quantum": [[n, self.degree_of(n)] for n in self.quantum],
        }


def _fraction_text(c):
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


class Polynomial:
    """
    Exact multivariate polynomial over Q.

    Terms map exponent tuples (aligned with the universe) to nonzero
    Fractions. Instances are treated as immutable values.
    """
    __slots__ = ("universe", "terms")

    def __init__(self, universe, terms=None):
        self.universe = universe
        clean = {}
        for exps, coeff in (terms or {}).items():
            coeff = Fraction(coeff)
            if coeff:
                clean[tuple(exps)] = coeff
        self.terms = clean

    # -- constructors --------------------------------------------------

    @classmethod
    def zero(cls, universe):
        return cls(universe)

    @classmethod
    def constant(cls, universe, value):
        return cls(universe, {universe.unit(): value})

    @classmethod
    def one(cls, universe):
        return cls.constant(universe, 1)

    @classmethod
    def variable(cls, universe, name):
        exps = [0] * len(universe)
        exps[universe.index(name)] = 1
        return cls(universe, {tuple(exps): 1})

    @classmethod
    def monomial(cls, universe, exps, coeff=1):
        return cls(universe, {tuple(exps): coeff})

    @classmethod
    def parse(cls, text, universe):
        """Parse canonical text such as '1/5*c1^5 - c1^3*c2' in the given universe."""
        symbols = {n: sympy.Symbol(n) for n in universe.names}
        try:
            expr = parse_expr(str(text), local_dict=dict(symbols), transformations=_PARSE_TRANSFORMATIONS)
        except Exception as e:
            raise StructuralError(f"Cannot parse polynomial '{text}': {e}")
        return cls.from_sympy(expr, universe)

    @classmethod
    def from_sympy(cls, expr, universe):
        symbols = [sympy.Symbol(n) for n in universe.names]
        expr = sympy.sympify(expr)
        unknown = expr.free_symbols - set(symbols)
        if unknown:
            names = ", ".join(sorted(str(s) for s in unknown))
            raise StructuralError(f"Unknown variable(s) {names} (universe: {', '.join(universe.names)})")
        try:
            poly = sympy.Poly(sympy.expand(expr), *symbols, domain="QQ")
        except Exception as e:
            raise StructuralError(f"Not a polynomial over Q: {expr} ({e})")
        terms = {}
        for exps, coeff in poly.terms():
            coeff = sympy.Rational(coeff)
            terms[tuple(exps)] = Fraction(int(coeff.p), int(coeff.q))
        return cls(universe, terms)

    @classmethod
    def from_json(cls, data, universe):
        terms = {}
        for term in data:
            exps = [0] * len(universe)
            for name, e in term["exponents"].items():
                exps[universe.index(name)] = int(e)
            terms[tuple(exps)] = Fraction(term["numerator"], term["denominator"])
        return cls(universe, terms)

    # -- coercion ------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            if other.universe != self.universe:
                raise StructuralError(
                    f"Mismatched variable universes: {self.universe.names} vs {other.universe.names}")
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(self.universe, other)
        return NotImplemented

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self.terms)
        for exps, coeff in other.terms.items():
            terms[exps] = terms.get(exps, 0) + coeff
        return Polynomial(self.universe, terms)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.universe, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Polynomial(self.universe, {m: c * other for m, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                m = monomial_mul(ma, mb)
                terms[m] = terms.get(m, 0) + ca * cb
        return Polynomial(self.universe, terms)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, (int, Fraction)) or other == 0:
            raise StructuralError("Polynomials can only be divided by nonzero rationals")
        return self * (Fraction(1) / Fraction(other))

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise StructuralError(f"Exponent must be a non-negative integer, got {n}")
        result = Polynomial.one(self.universe)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self.universe, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.universe == other.universe and self.terms == other.terms

    def __hash__(self):
        # constants compare equal to int/Fraction, so they must hash like them
        if self.is_constant():
            return hash(self.coefficient(self.universe.unit()))
        return hash((self.universe, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    # -- inspection ----------------------------------------------------

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return all(not any(m) for m in self.terms)

    def sorted_terms(self):
        """Terms in canonical (descending) order."""
        return sorted(self.terms.items(), key=lambda t: self.universe.sort_key(t[0]), reverse=True)

    def leading_monomial(self):
        if not self.terms:
            return None
        return max(self.terms, key=self.universe.sort_key)

    def leading_coefficient(self):
        lm = self.leading_monomial()
        return self.terms[lm] if lm is not None else Fraction(0)

    def coefficient(self, exps):
        return self.terms.get(tuple(exps), Fraction(0))

    def degree(self):
        """Maximum weighted degree of a term (None for the zero polynomial)."""
        if not self.terms:
            return None
        return max(self.universe.weighted_degree(m) for m in self.terms)

    def homogeneity_violation(self):
        """First term whose weighted degree differs from the leading one, or None."""
        if not self.terms:
            return None
        ordered = self.sorted_terms()
        top = self.universe.weighted_degree(ordered[0][0])
        for exps, coeff in ordered:
            if self.universe.weighted_degree(exps) != top:
                return exps, coeff
        return None

    def is_homogeneous(self):
        return self.homogeneity_violation() is None

    def variables(self):
        used = set()
        for exps in self.terms:
            used.update(n for n, e in zip(self.universe.names, exps) if e)
        return [n for n in self.universe.names if n in used]

    def degree_in(self, names):
        """Largest total exponent in the given variables over all terms."""
        idx = [self.universe.index(n) for n in names]
        return max((sum(m[i] for i in idx) for m in self.terms), default=0)

    # -- calculus and substitution -------------------------------------

    def diff(self, name):
        i = self.universe.index(name)
        terms = {}
        for exps, coeff in self.terms.items():
            if exps[i]:
                lowered = list(exps)
                lowered[i] -= 1
                terms[tuple(lowered)] = coeff * exps[i]
        return Polynomial(self.universe, terms)

    def substitute(self, mapping, universe=None):
        """
        Replace variables by polynomials. Variables not in `mapping` are kept
        and must exist in the target universe (default: own universe).
        """
        target = universe or self.universe
        images = []
        for name in self.universe.names:
            if name in mapping:
                image = mapping[name]
                if not isinstance(image, Polynomial):
                    image = Polynomial.constant(target, image)
                elif image.universe != target:
                    raise StructuralError(f"Substitution for {name} lives in another universe")
            elif name in target:
                image = Polynomial.variable(target, name)
            else:
                image = None
            images.append(image)
        result = Polynomial.zero(target)
        for exps, coeff in self.terms.items():
            term = Polynomial.constant(target, coeff)
            for image, e in zip(images, exps):
                if e:
                    if image is None:
                        raise StructuralError("Substitution leaves a variable outside the target universe")
                    term = term * image ** e
            result = result + term
        return result

    def convert(self, universe):
        """The same polynomial re-expressed in another universe (by variable name)."""
        return self.substitute({}, universe)

    def evaluate(self, point):
        """Evaluate at {name: value}; exact for Fraction/int values, complex otherwise."""
        values = []
        for name in self.universe.names:
            values.append(point.get(name, 0))
        total = 0
        for exps, coeff in self.terms.items():
            term = coeff
            for v, e in zip(values, exps):
                if e:
                    term = term * v ** e
            total = total + term
        return total

    # -- rendering -----------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        pieces = []
        for exps, coeff in self.sorted_terms():
            mono = self.universe.monomial_str(exps)
            magnitude = abs(coeff)
            if mono == "1":
                body = _fraction_text(magnitude)
            elif magnitude == 1:
                body = mono
            else:
                body = f"{_fraction_text(magnitude)}*{mono}"
            if not pieces:
                pieces.append(body if coeff > 0 else f"-{body}")
            else:
                pieces.append(f"+ {body}" if coeff > 0 else f"- {body}")
        return " ".join(pieces)

    def __repr__(self):
        return f"Polynomial({str(self)!r})"

    def to_sympy(self):
        symbols = [sympy.Symbol(n) for n in self.universe.names]
        expr = sympy.Integer(0)
        for exps, coeff in self.terms.items():
            term = sympy.Rational(coeff.numerator, coeff.denominator)
            for s, e in zip(symbols, exps):
                term *= s ** e
            expr += term
        return expr

    def to_json(self):
        return [
            {
                "exponents": self.universe.exponents_dict(exps),
                "numerator": coeff.numerator,
                "denominator": coeff.denominator,
            }
            for exps, coeff in self.sorted_terms()
        ]


# ---------------------------
# Ring-level helpers
# ---------------------------

def poly_mul(a, b):
    if a.universe != b.universe:
        raise StructuralError(f"Mismatched variable universes: {a.universe.names} vs {b.universe.names}")
    return a * b


def poly_diff(p, name):
    return p.diff(name)


def exact_quotient(a, b):
    """Return c with a == b*c, or None when b does not divide a."""
    if b.is_zero():
        raise StructuralError("Division by the zero polynomial")
    lm_b = b.leading_monomial()
    lc_b = b.terms[lm_b]
    remainder = a
    quotient = Polynomial.zero(a.universe)
    while not remainder.is_zero():
        lm = remainder.leading_monomial()
        if not monomial_divides(lm_b, lm):
            return None
        term = Polynomial.monomial(a.universe, monomial_div(lm, lm_b), remainder.terms[lm] / lc_b)
        quotient = quotient + term
        remainder = remainder - term * b
    return quotient


def numeric_evaluator(p, variables):
    """
    Vectorized complex evaluation of p at points[..., len(variables)].
    Every variable used by p must appear in `variables`.
    """
    idx = [p.universe.index(v) for v in variables]
    used = set(p.variables())
    missing = used - set(variables)
    if missing:
        raise StructuralError(f"Numeric evaluation needs values for {sorted(missing)}")
    items = list(p.terms.items())
    exps = np.array([[m[i] for i in idx] for m, _ in items], dtype=int).reshape(len(items), len(idx))
    coeffs = np.array([float(c) for _, c in items], dtype=complex)

    def evaluate(points):
        pts = np.asarray(points, dtype=complex)
        powers = np.prod(pts[..., None, :] ** exps, axis=-1)
        return powers @ coeffs

    return evaluate


# ---------------------------
# Truncated power series in a formal parameter t
# ---------------------------

@dataclass(frozen=True)
class TruncatedSeries:
    """Σ coefficients[m]·t^m for m ≤ order; coefficients are Polynomials."""
    coefficients: tuple
    order: int

    def __post_init__(self):
        if self.order < 0:
            raise StructuralError("Series order must be non-negative")
        if len(self.coefficients) != self.order + 1:
            raise StructuralError(
                f"Series of order {self.order} needs {self.order + 1} coefficients, got {len(self.coefficients)}")
        universes = {c.universe for c in self.coefficients}
        if len(universes) > 1:
            raise StructuralError("Series coefficients live in different universes")

    @classmethod
    def from_polynomials(cls, polys, order, universe):
        coeffs = list(polys)[:order + 1]
        coeffs += [Polynomial.zero(universe)] * (order + 1 - len(coeffs))
        return cls(tuple(coeffs), order)

    @property
    def universe(self):
        return self.coefficients[0].universe

    def __getitem__(self, m):
        if m < 0 or m > self.order:
            return Polynomial.zero(self.universe)
        return self.coefficients[m]

    def _match(self, other):
        if other.universe != self.universe:
            raise StructuralError("Series live in different universes")
        return min(self.order, other.order)

    def __add__(self, other):
        order = self._match(other)
        return TruncatedSeries(tuple(self[m] + other[m] for m in range(order + 1)), order)

    def __sub__(self, other):
        order = self._match(other)
        return TruncatedSeries(tuple(self[m] - other[m] for m in range(order + 1)), order)

    def __mul__(self, other):
        order = self._match(other)
        coeffs = []
        for m in range(order + 1):
            total = Polynomial.zero(self.universe)
            for i in range(m + 1):
                if self[i] and other[m - i]:
                    total = total + self[i] * other[m - i]
            coeffs.append(total)
        return TruncatedSeries(tuple(coeffs), order)

    def shift(self, i):
        """Multiply by t^i, discarding anything beyond the order."""
        zero = Polynomial.zero(self.universe)
        return TruncatedSeries(tuple(self[m - i] if m >= i else zero for m in range(self.order + 1)), self.order)

    def diff(self, name):
        return TruncatedSeries(tuple(c.diff(name) for c in self.coefficients), self.order)

    def is_one(self):
        return self[0] == 1 and all(c.is_zero() for c in self.coefficients[1:])

    def __str__(self):
        parts = [f"({c})*t^{m}" for m, c in enumerate(self.coefficients) if c]
        return " + ".join(parts) if parts else "0"


def _require_unit_constant(c, what):
    if c[0] != 1:
        raise NotInvertibleError(f"{what} needs constant term 1, got {c[0]}")


def series_invert(c):
    """s with c·s = 1 + O(t^{order+1}), via s_m = −Σ_{i=1}^{m} c_i s_{m−i}."""
    _require_unit_constant(c, "Series inversion")
    s = [Polynomial.one(c.universe)]
    for m in range(1, c.order + 1):
        total = Polynomial.zero(c.universe)
        for i in range(1, m + 1):
            if c[i]:
                total = total - c[i] * s[m - i]
        s.append(total)
    return TruncatedSeries(tuple(s), c.order)


def series_log(c):
    """w = log c, from m·c_m = Σ_{j=1}^{m} j·w_j·c_{m−j}."""
    _require_unit_constant(c, "Series logarithm")
    w = [Polynomial.zero(c.universe)]
    for m in range(1, c.order + 1):
        total = c[m]
        for j in range(1, m):
            if w[j] and c[m - j]:
                total = total - w[j] * c[m - j] * Fraction(j, m)
        w.append(total)
    return TruncatedSeries(tuple(w), c.order)


def series_exp(w):
    """e = exp w for w with zero constant term, from m·e_m = Σ_{j=1}^{m} j·w_j·e_{m−j}."""
    if not w[0].is_zero():
        raise NotInvertibleError(f"Series exponential needs constant term 0, got {w[0]}")
    e = [Polynomial.one(w.universe)]
    for m in range(1, w.order + 1):
        total = Polynomial.zero(w.universe)
        for j in range(1, m + 1):
            if w[j]:
                total = total + w[j] * e[m - j] * Fraction(j, m)
        e.append(total)
    return TruncatedSeries(tuple(e), w.order)
