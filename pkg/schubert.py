#!/usr/bin/env python3
"""
Schubert calculus on Gr_k(C^n) through the Borel presentation.

Young diagrams index the Schubert classes; Giambelli's determinant writes
each class in the special classes s_j, and products are reduced in the
(quantum) Grassmannian ring and expanded back over the diagrams.
"""

import logging
from dataclasses import dataclass
from itertools import combinations_with_replacement

import sympy

from algebra_core import Polynomial, Universe, StructuralError
from space_presentations import grassmannian_universe, special_classes, space_engine, _check_grassmannian

logger = logging.getLogger(__name__)


@dataclass(frozen=True, order=True)
class YoungDiagram:
    rows: tuple
    k: int
    n: int

    def __post_init__(self):
        _check_grassmannian(self.k, self.n)
        if len(self.rows) != self.k:
            raise StructuralError(f"Diagram {list(self.rows)} needs exactly {self.k} rows")
        width = self.n - self.k
        if any(r < 0 or r > width for r in self.rows):
            raise StructuralError(f"Diagram {list(self.rows)} does not fit in a {self.k}x{width} box")
        if any(a < b for a, b in zip(self.rows, self.rows[1:])):
            raise StructuralError(f"Diagram rows {list(self.rows)} must be non-increasing")

    @property
    def codegree(self):
        return sum(self.rows)

    @property
    def degree(self):
        return 2 * self.codegree

    def sort_key(self):
        return (self.codegree, self.rows)

    def __str__(self):
        return "[" + ",".join(str(r) for r in self.rows) + "]"


def parse_diagram(text, k, n):
    """Parse '[2,1]' (missing trailing rows are zero)."""
    body = text.strip().strip("[]()").strip()
    try:
        rows = [int(x) for x in body.split(",") if x.strip()] if body else []
    except ValueError:
        raise StructuralError(f"Bad diagram '{text}' (expected [l1,l2,...])")
    if len(rows) > k:
        raise StructuralError(f"Diagram '{text}' has more than {k} rows")
    return YoungDiagram(tuple(rows) + (0,) * (k - len(rows)), k, n)


def enumerate_diagrams(k, n):
    """All diagrams in the k x (n-k) box, by codegree and then lexicographically."""
    _check_grassmannian(k, n)
    diagrams = [YoungDiagram(tuple(sorted(rows, reverse=True)), k, n)
                for rows in combinations_with_replacement(range(n - k + 1), k)]
    return sorted(diagrams, key=YoungDiagram.sort_key)


def special_class_universe(k, n):
    return Universe.build([(f"s{j}", 2 * j) for j in range(1, n - k + 1)])


def giambelli(diagram, universe=None):
    """det(s_{l_i + j - i}) with s_0 = 1 and s_m = 0 outside 0..n-k, in s1..s_{n-k}."""
    k, n = diagram.k, diagram.n
    universe = universe or special_class_universe(k, n)
    symbols = {j: sympy.Symbol(f"s{j}") for j in range(1, n - k + 1)}

    def entry(m):
        if m == 0:
            return sympy.Integer(1)
        return symbols.get(m, sympy.Integer(0))

    matrix = sympy.Matrix(k, k, lambda i, j: entry(diagram.rows[i] + j - i))
    return Polynomial.from_sympy(matrix.det(), universe)


def giambelli_in_chern(diagram, universe=None):
    """The Giambelli class rewritten in c1..ck via the inverse Chern series."""
    k, n = diagram.k, diagram.n
    universe = universe or grassmannian_universe(k, n, quantum=False)
    s = special_classes(universe, k, n)
    mapping = {f"s{j}": s[j] for j in range(1, n - k + 1)}
    return giambelli(diagram).substitute(mapping, universe)


def point_class(k, n, universe=None):
    return giambelli_in_chern(YoungDiagram((n - k,) * k, k, n), universe)


def schubert_lifts(k, n, universe):
    return [(str(d), giambelli_in_chern(d, universe)) for d in enumerate_diagrams(k, n)]


def chern_as_schubert(j, k, n):
    """c_j = (-1)^j x(1,...,1,0,...,0) with j ones: returns (sign, diagram)."""
    if not 1 <= j <= k:
        raise StructuralError(f"Chern class c{j} needs 1 <= j <= {k}")
    return (-1) ** j, YoungDiagram((1,) * j + (0,) * (k - j), k, n)


@dataclass
class SchubertProduct:
    left: YoungDiagram
    right: YoungDiagram
    quantum: bool
    terms: list

    def to_dict(self):
        return {
            "left": str(self.left),
            "right": str(self.right),
            "quantum": self.quantum,
            "terms": [{"diagram": str(d), "coefficient": str(c), "q_power": e} for d, c, e in self.terms],
        }

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for d, c, e in self.terms:
            q = "" if e == 0 else ("q*" if e == 1 else f"q^{e}*")
            coeff = "" if c == 1 else f"{c}*"
            parts.append(f"{coeff}{q}{d}")
        return " + ".join(parts)


def schubert_product(left, right, quantum=False):
    """Multiply two Schubert classes in the Borel presentation and expand over diagrams."""
    if (left.k, left.n) != (right.k, right.n):
        raise StructuralError(f"Diagrams {left} and {right} live in different Grassmannians")
    k, n = left.k, left.n
    engine = space_engine(f"gr:{k}:{n}", quantum)
    lifts = schubert_lifts(k, n, engine.universe)
    lift_of = dict(lifts)
    expansion = engine.expand(lift_of[str(left)] * lift_of[str(right)], lifts)
    by_name = {str(d): d for d in enumerate_diagrams(k, n)}
    terms = []
    for name, coeff in expansion.items():
        for exps, c in coeff.terms.items():
            q_power = exps[engine.universe.index("q")] if quantum else 0
            terms.append((by_name[name], c, q_power))
    terms.sort(key=lambda t: (t[0].sort_key(), t[2]))
    logger.debug(f"Schubert product {left}*{right} on gr:{k}:{n}: {len(terms)} terms")
    return SchubertProduct(left, right, quantum, terms)
