#!/usr/bin/env python3
"""
Truncated generating functions V(t, q) = <exp(t1 b1 + ... + tr br), M> and
the differential operators R* obtained by reading each degree-two generator
p_i as d/dt_i. A relation R annihilates V exactly when R lies in the ideal.
"""

import logging
from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import product
from math import factorial

from algebra_core import Polynomial, Universe, StructuralError
from quotient_ring import DegreeCapError, complete, default_degree_cap
from space_presentations import UnsupportedSpaceError

logger = logging.getLogger(__name__)

T_DEGREE = -2


@dataclass(frozen=True)
class GeneratingFunction:
    """`body` in t-variables (degree -2) and q-variables, exact up to t-degree `reliable_order`."""
    body: Polynomial
    order: int
    reliable_order: int
    label: str
    t_for: tuple = ()
    notes: tuple = ()

    @property
    def universe(self):
        return self.body.universe

    @property
    def t_names(self):
        return tuple(t for t, _ in self.t_for)

    def t_degree(self, exps):
        return sum(e for n, e in zip(self.universe.names, exps) if n in self.t_names)

    def included_orders(self):
        return sorted({self.t_degree(m) for m in self.body.terms})

    def to_dict(self):
        return {
            "label": self.label,
            "order": self.order,
            "reliable_order": self.reliable_order,
            "V": str(self.body),
            "t_variables": {t: g for t, g in self.t_for},
            "included_orders": self.included_orders(),
            "notes": list(self.notes),
        }


def t_universe(generators, quantum):
    """t-variables named after the degree-two generators, plus the q-parameters."""
    if len(generators) == 1:
        names = ["t"]
    else:
        names = [f"t{i + 1}" for i in range(len(generators))]
    return Universe.build([(n, T_DEGREE) for n in names], quantum), list(zip(names, generators))


def _degree_two_generators(universe):
    gens = [n for n in universe.generators if universe.degree_of(n) == 2]
    if len(gens) != len(universe.generators):
        others = [n for n in universe.generators if n not in gens]
        raise UnsupportedSpaceError(
            f"Ring is not generated in degree 2 (generators {others} have higher degree); "
            "generating-function operators need H^2 to generate the cohomology")
    return gens


def scalar_generating_function(engine, order, top_class=None):
    """
    V = sum over |j| <= order of t^j / j! * <b^j, M>, where <., M> is the
    top-class coefficient normalized by `top_class` (default: the top
    standard monomial itself). q-powers are retained.
    """
    universe = engine.universe
    gens = _degree_two_generators(universe)
    if 2 * order > engine.degree_cap:
        raise DegreeCapError(f"Order {order} needs degree {2 * order}, cap of {engine.label} is {engine.degree_cap}")
    if top_class is None:
        top_class = Polynomial.monomial(universe, engine.top_monomial())
    target, t_for = t_universe(gens, [(n, universe.degree_of(n)) for n in universe.quantum])
    t_index = [target.index(t) for t, _ in t_for]
    q_map = [(universe.index(q), target.index(q)) for q in universe.quantum]

    powers = {(0,) * len(gens): engine.normal_form(Polynomial.one(universe))}
    terms = {}
    for total in range(order + 1):
        for j in product(range(total + 1), repeat=len(gens)):
            if sum(j) != total:
                continue
            if j not in powers:
                i = next(i for i, e in enumerate(j) if e)
                lower = j[:i] + (j[i] - 1,) + j[i + 1:]
                powers[j] = engine.normal_form(Polynomial.variable(universe, gens[i]) * powers[lower])
            pairing = engine.top_class_coefficient(powers[j], top_class)
            weight = Fraction(1, 1)
            for e in j:
                weight /= factorial(e)
            for exps, coeff in pairing.terms.items():
                out = [0] * len(target)
                for idx, e in zip(t_index, j):
                    out[idx] = e
                for src, dst in q_map:
                    out[dst] = exps[src]
                out = tuple(out)
                terms[out] = terms.get(out, 0) + coeff * weight
    gf = GeneratingFunction(Polynomial(target, terms), order, order, engine.label, tuple(t_for))
    logger.info(f"Generating function of {engine.label} to order {order}: {len(gf.body.terms)} terms")
    return replace(gf, notes=(f"t-orders {gf.included_orders()} carry nonzero pairings; orders 0..{order} were summed",))


def classical_generating_function(engine, order, top_class=None):
    """V at q = 0."""
    gf = scalar_generating_function(engine, order, top_class)
    zeros = {q: 0 for q in gf.universe.quantum}
    body = gf.body.substitute(zeros) if zeros else gf.body
    return GeneratingFunction(body, gf.order, gf.reliable_order, f"{engine.label} at q=0", gf.t_for, gf.notes)


def cpn_V_closed_form(n, order):
    """sum over s of t^{(n+1)s+n} q^s / ((n+1)s+n)!, truncated at t-degree `order`."""
    if order < n:
        raise StructuralError(f"Closed form for cpn:{n} needs order >= {n}, got {order}")
    universe, t_for = t_universe(["p"], [("q", 2 * n + 2)])
    t, q = Polynomial.variable(universe, "t"), Polynomial.variable(universe, "q")
    body = Polynomial.zero(universe)
    s = 0
    while (n + 1) * s + n <= order:
        m = (n + 1) * s + n
        body = body + t ** m * q ** s / factorial(m)
        s += 1
    return GeneratingFunction(body, order, order, f"cpn:{n} closed form", tuple(t_for))


def apply_operator(R, V):
    """
    R* V with each degree-two generator acting as d/dt and q by
    multiplication; the result is trusted up to reliable_order - deg_p(R).
    """
    p_names = [g for _, g in V.t_for]
    t_of = {g: t for t, g in V.t_for}
    unknown = [n for n in R.variables() if n not in p_names and n not in V.universe.quantum]
    if unknown:
        raise StructuralError(f"Operator uses {unknown}, which are neither generators {p_names} nor q-parameters")
    degree_p = R.degree_in(p_names) if not R.is_zero() else 0
    reliable = V.reliable_order - degree_p
    result = Polynomial.zero(V.universe)
    for exps, coeff in R.terms.items():
        term = V.body
        q_factor = Polynomial.constant(V.universe, coeff)
        for name, e in zip(R.universe.names, exps):
            if not e:
                continue
            if name in t_of:
                for _ in range(e):
                    term = term.diff(t_of[name])
            else:
                q_factor = q_factor * Polynomial.variable(V.universe, name) ** e
        result = result + q_factor * term
    trimmed = Polynomial(V.universe, {m: c for m, c in result.terms.items() if V.t_degree(m) <= reliable})
    return GeneratingFunction(trimmed, V.order, reliable, f"({R})*V", V.t_for)


@dataclass
class AnnihilationReport:
    label: str
    order: int
    relations: list
    non_member: dict
    passed: bool
    notes: list = field(default_factory=list)

    @property
    def reliable_order(self):
        return min((r["reliable_order"] for r in self.relations), default=self.order)

    def to_dict(self):
        return {
            "label": self.label,
            "order": self.order,
            "reliable_order": self.reliable_order,
            "relations": self.relations,
            "non_member": self.non_member,
            "residual_terms": sum(r["residual_terms"] for r in self.relations),
            "pass": self.passed,
            "notes": self.notes,
        }


def generating_engine(pres, order):
    """An engine whose cap covers every power needed for V to the given order."""
    _degree_two_generators(pres.universe)
    return complete(pres, max(default_degree_cap(pres), 2 * order + 2))


def annihilation_check(pres, order, top_class=None):
    """
    Build V from the ring and apply every relation (each must annihilate V)
    and one degree-two generator (which must not).
    """
    engine = generating_engine(pres, order)
    V = scalar_generating_function(engine, order, top_class)
    rows = []
    for name, rel in pres.named_relations():
        residual = apply_operator(rel, V)
        rows.append({
            "name": name,
            "relation": str(rel),
            "reliable_order": residual.reliable_order,
            "residual_terms": len(residual.body.terms),
            "vanishes": residual.body.is_zero(),
        })
    generator = pres.universe.generators[0]
    control = apply_operator(Polynomial.variable(pres.universe, generator), V)
    non_member = {
        "operator": generator,
        "reliable_order": control.reliable_order,
        "residual_terms": len(control.body.terms),
        "vanishes": control.body.is_zero(),
    }
    passed = all(r["vanishes"] for r in rows) and not non_member["vanishes"]
    logger.info(f"Annihilation check {pres.label} to order {order}: {passed}")
    return AnnihilationReport(pres.label, order, rows, non_member, passed, list(V.notes))


def module_property_check(pres, order, max_multiplier_degree=2, top_class=None):
    """(m * R)* V = 0 for every relation R and every generator monomial m up to the given degree."""
    engine = generating_engine(pres, order)
    V = scalar_generating_function(engine, order, top_class)
    gens = list(pres.universe.generators)
    failures = []
    checked = 0
    for degree in range(0, max_multiplier_degree + 1):
        for m in pres.universe.monomials_of_degree(2 * degree, gens):
            multiplier = Polynomial.monomial(pres.universe, m)
            for name, rel in pres.named_relations():
                residual = apply_operator(multiplier * rel, V)
                checked += 1
                if residual.reliable_order >= 0 and not residual.body.is_zero():
                    failures.append(f"{pres.universe.monomial_str(m)}*{name}")
    return not failures, checked, failures
