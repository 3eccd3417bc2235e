#!/usr/bin/env python3
"""
Ring presentations for the shipped spaces: projective spaces, Grassmannians,
the three-dimensional flag manifold and the Hirzebruch surfaces Σ0, Σ1.

Each space is addressed by a CLI identifier (cpn:<n>, gr:<k>:<n>, flag3,
hirzebruch:<k>) that `parse_space` turns into a SpaceDescriptor.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from math import comb

from algebra_core import Polynomial, Universe, TruncatedSeries, series_invert, StructuralError
from quotient_ring import GradedPresentation, complete

logger = logging.getLogger(__name__)

SPACE_IDENTIFIERS = ["cpn:<n>", "gr:<k>:<n>", "flag3", "hirzebruch:<k>"]


class UnsupportedSpaceError(ValueError):
    """A space identifier or construction that the workbench refuses."""


# ---------------------------
# Projective space
# ---------------------------

def cpn_universe(n, quantum=True):
    quantum_params = [("q", 2 * n + 2)] if quantum else []
    return Universe.build([("p", 2)], quantum_params)


def cpn_presentation(n, quantum=True):
    """C[p]/(p^{n+1}), or C[p,q]/(p^{n+1} - q) with |q| = 2n+2."""
    if n < 1:
        raise UnsupportedSpaceError(f"CP^n needs n >= 1, got {n}")
    universe = cpn_universe(n, quantum)
    p = Polynomial.variable(universe, "p")
    relation = p ** (n + 1)
    if quantum:
        relation = relation - Polynomial.variable(universe, "q")
    kind = "quantum" if quantum else "classical"
    return GradedPresentation(f"cpn:{n} {kind}", universe, (relation,), ("R1",))


def cpn_gw_triple(n, i, j, k, s):
    """The triple product <X_i|X_j|X_k>_s on CP^n."""
    if s == 0:
        return 1 if i + j + k == n else 0
    if s == 1:
        return 1 if i + j + k == 2 * n + 1 else 0
    return 0


def cpn_class_name(i):
    return "1" if i == 0 else ("p" if i == 1 else f"p^{i}")


# ---------------------------
# Grassmannians
# ---------------------------

def _check_grassmannian(k, n):
    if not 1 <= k <= n - 1:
        raise UnsupportedSpaceError(f"Gr_k(C^n) needs 1 <= k <= n-1, got k={k}, n={n}")


def grassmannian_universe(k, n, quantum=True):
    _check_grassmannian(k, n)
    quantum_params = [("q", 2 * n)] if quantum else []
    return Universe.build([(f"c{i}", 2 * i) for i in range(1, k + 1)], quantum_params)


def chern_series(universe, k, order):
    """1 + c1 t + ... + ck t^k as a truncated series."""
    coeffs = [Polynomial.one(universe)] + [Polynomial.variable(universe, f"c{i}") for i in range(1, k + 1)]
    return TruncatedSeries.from_polynomials(coeffs, order, universe)


def special_classes(universe, k, n):
    """The polynomials s_0..s_n in c1..ck with (1 + c1 t + ...)(1 + s1 t + ...) = 1."""
    return series_invert(chern_series(universe, k, n))


def grassmannian_presentation(k, n, quantum=True):
    """
    Generators c1..ck; relations f_{n-k+1}..f_n, where f_i is the i-th
    coefficient of the inverse Chern series. The quantum version replaces
    f_n by f_n + (-1)^{n-k} q with |q| = 2n.
    """
    universe = grassmannian_universe(k, n, quantum)
    s = special_classes(universe, k, n)
    relations = [s[i] for i in range(n - k + 1, n + 1)]
    if quantum:
        relations[-1] = relations[-1] + Polynomial.variable(universe, "q") * (-1) ** (n - k)
    kind = "quantum" if quantum else "classical"
    names = tuple(f"f{i}" for i in range(n - k + 1, n + 1))
    return GradedPresentation(f"gr:{k}:{n} {kind}", universe, tuple(relations), names)


def grassmannian_dual_relations(k, n):
    """
    The classical presentation in the special classes s1..s_{n-k}: the
    coefficients g_{k+1}..g_n of the inverse of 1 + s1 t + ... vanish.
    """
    _check_grassmannian(k, n)
    universe = Universe.build([(f"s{j}", 2 * j) for j in range(1, n - k + 1)])
    coeffs = [Polynomial.one(universe)] + [Polynomial.variable(universe, f"s{j}") for j in range(1, n - k + 1)]
    inverse = series_invert(TruncatedSeries.from_polynomials(coeffs, n, universe))
    relations = tuple(inverse[i] for i in range(k + 1, n + 1))
    names = tuple(f"g{i}" for i in range(k + 1, n + 1))
    return GradedPresentation(f"gr:{k}:{n} classical (s-variables)", universe, relations, names)


# ---------------------------
# Flag manifold F(1,2;3)
# ---------------------------

def flag3_raw_relations(quantum=True):
    """x1, x2, x3 with sigma1 = x1+x2+x3 kept as a relation."""
    quantum_params = [("q1", 4), ("q2", 4)] if quantum else []
    universe = Universe.build([("x1", 2), ("x2", 2), ("x3", 2)], quantum_params)
    x1, x2, x3 = (Polynomial.variable(universe, n) for n in ("x1", "x2", "x3"))
    r1 = x1 * x2 + x2 * x3 + x3 * x1
    r2 = x1 * x2 * x3
    if quantum:
        q1, q2 = Polynomial.variable(universe, "q1"), Polynomial.variable(universe, "q2")
        r1 = r1 + q1 + q2
        r2 = r2 + x3 * q1 + x1 * q2
    kind = "quantum" if quantum else "classical"
    return GradedPresentation(f"flag3 {kind} (x1,x2,x3)", universe, (x1 + x2 + x3, r1, r2),
                              ("sigma1", "R1", "R2"))


def flag3_presentation(quantum=True, chart="p"):
    """
    The flag manifold with x3 = -x1 - x2 eliminated. The x-chart keeps x1, x2;
    the p-chart uses p1 = x1, p2 = x1 + x2.
    """
    raw = flag3_raw_relations(quantum)
    quantum_params = [("q1", 4), ("q2", 4)] if quantum else []
    if chart == "x":
        universe = Universe.build([("x1", 2), ("x2", 2)], quantum_params)
        x1, x2 = Polynomial.variable(universe, "x1"), Polynomial.variable(universe, "x2")
        mapping = {"x1": x1, "x2": x2, "x3": -x1 - x2}
    elif chart == "p":
        universe = Universe.build([("p1", 2), ("p2", 2)], quantum_params)
        p1, p2 = Polynomial.variable(universe, "p1"), Polynomial.variable(universe, "p2")
        mapping = {"x1": p1, "x2": p2 - p1, "x3": -p2}
    else:
        raise UnsupportedSpaceError(f"Unknown flag3 chart '{chart}' (use 'x' or 'p')")
    relations = tuple(r.substitute(mapping, universe) for r in raw.relations[1:])
    kind = "quantum" if quantum else "classical"
    return GradedPresentation(f"flag3 {kind}", universe, relations, ("R1", "R2"))


# ---------------------------
# Hirzebruch surfaces
# ---------------------------

def hirzebruch_presentation(k, quantum=True):
    """
    Generators x1, x4 with x2 = x4 - k*x1 and z = x1*x4. Quantum rings exist
    for k in {0, 1} with |q1| = 4 and |q2| = 2(2-k); for k >= 2 only the
    classical ring is built.
    """
    if k < 0:
        raise UnsupportedSpaceError(f"Hirzebruch surface needs k >= 0, got {k}")
    if quantum and k >= 2:
        raise UnsupportedSpaceError(
            f"No quantum ring for hirzebruch:{k}: the surface is not convex for k >= 2, "
            "so the product would be merely heuristic")
    quantum_params = [("q1", 4), ("q2", 2 * (2 - k))] if quantum else []
    universe = Universe.build([("x1", 2), ("x4", 2)], quantum_params)
    x1, x4 = Polynomial.variable(universe, "x1"), Polynomial.variable(universe, "x4")
    x2 = x4 - x1 * k
    z = x1 * x4
    if not quantum:
        relations = (x1 * x1, x4 * x4 - z * k)
    else:
        q1, q2 = Polynomial.variable(universe, "q1"), Polynomial.variable(universe, "q2")
        if k == 0:
            relations = (x1 * x1 - q2, x4 * x4 - q1)
        else:
            relations = (x1 * x1 - x2 * q2, x4 * x4 - z - q1)
    kind = "quantum" if quantum else "classical"
    return GradedPresentation(f"hirzebruch:{k} {kind}", universe, relations, ("R1", "R2"))


# ---------------------------
# Space descriptors
# ---------------------------

@dataclass(frozen=True)
class SpaceDescriptor:
    identifier: str
    family: str
    parameters: tuple
    complex_dimension: int
    c1_pairing: tuple
    degree_two: tuple = ()
    chart_pairs: tuple = ()
    top_class: str = ""

    def presentation(self, quantum=True):
        if self.family == "projective":
            return cpn_presentation(self.parameters[0], quantum)
        if self.family == "grassmannian":
            return grassmannian_presentation(*self.parameters, quantum=quantum)
        if self.family == "flag3":
            return flag3_presentation(quantum, chart="p")
        return hirzebruch_presentation(self.parameters[0], quantum)

    def engine(self, quantum=True, degree_cap=None):
        return space_engine(self.identifier, quantum, degree_cap)

    @property
    def generated_in_degree_two(self):
        pres = self.presentation(quantum=False)
        return all(d == 2 for _, d in pres.generators)

    @property
    def betti_total(self):
        if self.family == "projective":
            return self.parameters[0] + 1
        if self.family == "grassmannian":
            return comb(self.parameters[1], self.parameters[0])
        return 6 if self.family == "flag3" else 4

    def top_class_polynomial(self, universe):
        if self.family == "grassmannian":
            from schubert import point_class
            return point_class(*self.parameters, universe=universe)
        return Polynomial.parse(self.top_class, universe)

    def to_dict(self):
        return {
            "identifier": self.identifier,
            "family": self.family,
            "parameters": list(self.parameters),
            "complex_dimension": self.complex_dimension,
            "c1_pairing": list(self.c1_pairing),
            "degree_two": list(self.degree_two),
            "chart": [list(p) for p in self.chart_pairs],
            "top_class": self.top_class,
        }


def _parse_int(text, identifier):
    try:
        return int(text)
    except ValueError:
        raise UnsupportedSpaceError(
            f"Bad space identifier '{identifier}' (valid: {', '.join(SPACE_IDENTIFIERS)})")


def parse_space(identifier):
    """Resolve a CLI identifier to a SpaceDescriptor."""
    parts = identifier.strip().lower().split(":")
    family = parts[0]
    if family == "cpn" and len(parts) == 2:
        n = _parse_int(parts[1], identifier)
        if n < 1:
            raise UnsupportedSpaceError(f"CP^n needs n >= 1, got {n}")
        return SpaceDescriptor(identifier, "projective", (n,), n, (n + 1,),
                               ("p",), (("p", "q"),), f"p^{n}")
    if family == "gr" and len(parts) == 3:
        k, n = _parse_int(parts[1], identifier), _parse_int(parts[2], identifier)
        _check_grassmannian(k, n)
        return SpaceDescriptor(identifier, "grassmannian", (k, n), k * (n - k), (n,),
                               ("c1",), (), f"point class of gr:{k}:{n}")
    if family == "flag3" and len(parts) == 1:
        return SpaceDescriptor(identifier, "flag3", (), 3, (2, 2),
                               ("p1", "p2"), (("p1", "q1"), ("p2", "q2")), "p1^2*p2")
    if family == "hirzebruch" and len(parts) == 2:
        k = _parse_int(parts[1], identifier)
        if k < 0:
            raise UnsupportedSpaceError(f"Hirzebruch surface needs k >= 0, got {k}")
        return SpaceDescriptor(identifier, "hirzebruch", (k,), 2, (2, 2 - k),
                               ("x1", "x4"), (("x4", "q1"), ("x1", "q2")), "x1*x4")
    raise UnsupportedSpaceError(
        f"Unknown space '{identifier}' (valid: {', '.join(SPACE_IDENTIFIERS)})")


def shipped_spaces():
    """The spaces exercised by verify-all."""
    return [parse_space(s) for s in
            ("cpn:1", "cpn:2", "cpn:3", "cpn:4", "gr:2:4", "flag3", "hirzebruch:0", "hirzebruch:1")]


@lru_cache(maxsize=None)
def space_engine(identifier, quantum=True, degree_cap=None):
    """Completed engine for a space, cached per (identifier, quantum, cap)."""
    space = parse_space(identifier)
    return complete(space.presentation(quantum), degree_cap)


# ---------------------------
# Basis lifts and product tables
# ---------------------------

def standard_lifts(space, universe):
    """
    Lifts of the additive cohomology basis used by the product tables, as
    [(class name, Polynomial)]. The flag manifold uses the q-corrected
    Schubert lifts; the Grassmannian uses Giambelli classes.
    """
    def var(name):
        return Polynomial.variable(universe, name)

    one = Polynomial.one(universe)
    if space.family == "projective":
        return [(cpn_class_name(i), var("p") ** i) for i in range(space.parameters[0] + 1)]
    if space.family == "grassmannian":
        from schubert import schubert_lifts
        return schubert_lifts(*space.parameters, universe=universe)
    if space.family == "flag3":
        a, b = var("p1"), var("p2")
        a2, b2 = a * a, b * b
        if "q1" in universe:
            a2, b2 = a2 - var("q1"), b2 - var("q2")
        return [("1", one), ("a", a), ("b", b), ("a^2", a2), ("b^2", b2), ("a^2b", a2 * b)]
    k = space.parameters[0]
    x1, x4 = var("x1"), var("x4")
    return [("1", one), ("x1", x1), ("x2", x4 - x1 * k), ("z", x1 * x4)]


@dataclass
class ProductTable:
    """Pairwise products of basis classes as {class: q-polynomial} expansions."""
    label: str
    classes: list
    degrees: dict
    entries: dict

    def get(self, a, b):
        if (a, b) in self.entries:
            return self.entries[(a, b)]
        return self.entries[(b, a)]

    def is_symmetric(self):
        return all(self.entries.get((b, a), self.entries[(a, b)]) == self.entries[(a, b)]
                   for a, b in self.entries)

    def grading_violations(self):
        """Entries where |coefficient| + |class| differs from |a| + |b|."""
        bad = []
        for (a, b), expansion in self.entries.items():
            target = self.degrees[a] + self.degrees[b]
            for cls, coeff in expansion.items():
                if coeff.degree() + self.degrees[cls] != target or not coeff.is_homogeneous():
                    bad.append((a, b, cls))
        return bad

    def to_dict(self):
        return {
            "label": self.label,
            "classes": self.classes,
            "entries": {f"{a}*{b}": {cls: str(c) for cls, c in sorted(exp.items())}
                        for (a, b), exp in self.entries.items()},
        }


def quantum_product_table(engine, lifts):
    """Expand every pairwise product of the lifted basis via normal forms and a graded solve."""
    names = [name for name, _ in lifts]
    degrees = {name: lift.degree() for name, lift in lifts}
    entries = {}
    for a, la in lifts:
        for b, lb in lifts:
            entries[(a, b)] = engine.expand(la * lb, lifts)
    logger.info(f"Product table for {engine.label}: {len(entries)} entries")
    return ProductTable(engine.label, names, degrees, entries)


def cpn_product_from_triples(n):
    """
    CP^n quantum products assembled from triple products: x_i * x_j is the
    sum over s and k of <X_i|X_j|X_k>_s x_{n-k} q^s.
    """
    universe = cpn_universe(n, quantum=True)
    q = Polynomial.variable(universe, "q")
    names = [cpn_class_name(i) for i in range(n + 1)]
    entries = {}
    for i in range(n + 1):
        for j in range(n + 1):
            expansion = {}
            for s in (0, 1):
                for k in range(n + 1):
                    if cpn_gw_triple(n, i, j, k, s):
                        dual = names[n - k]
                        expansion[dual] = expansion.get(dual, Polynomial.zero(universe)) + q ** s
            entries[(names[i], names[j])] = expansion
    return ProductTable(f"cpn:{n} quantum (triple products)", names,
                        {name: 2 * i for i, name in enumerate(names)}, entries)


def resolve_factor(text, lifts, universe):
    """A class name from the lifts, or else a polynomial in the ring generators."""
    for name, lift in lifts:
        if name == text:
            return lift
    try:
        return Polynomial.parse(text, universe)
    except StructuralError:
        raise StructuralError(f"'{text}' is neither a basis class ({', '.join(n for n, _ in lifts)}) nor a polynomial")
