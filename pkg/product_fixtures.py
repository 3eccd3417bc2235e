#!/usr/bin/env python3
"""
Recorded quantum products, kept apart from the engine so that the product
tables computed from the presentations are checked against an independent
source.

Each entry is (left factor, right factor, expansion, label); expansions map
a basis class to its q-polynomial coefficient in canonical text. Factors are
class names of the standard lifts or, failing that, ring generators.
"""

import logging
from dataclasses import dataclass

from algebra_core import Polynomial
from space_presentations import parse_space, standard_lifts, resolve_factor

logger = logging.getLogger(__name__)

# Flag manifold, classes 1, a, b, a^2, b^2, a^2b (a^2 and b^2 are the q-corrected lifts)
FLAG3_PRODUCTS = [
    ("a", "a", {"a^2": "1", "1": "q1"}, "square of a"),
    ("b", "b", {"b^2": "1", "1": "q2"}, "square of b"),
    ("a", "b", {"a^2": "1", "b^2": "1"}, "a times b is the class ab"),
    ("a", "b^2", {"a^2b": "1"}, "a times b^2"),
    ("b", "a^2", {"a^2b": "1"}, "b times a^2"),
    ("a", "a^2", {"b": "q1"}, "a times a^2"),
    ("b", "b^2", {"a": "q2"}, "b times b^2"),
    ("a", "a^2b", {"b^2": "q1", "1": "q1*q2"}, "a times the point class"),
    ("b", "a^2b", {"a^2": "q2", "1": "q1*q2"}, "b times the point class"),
    ("a^2", "a^2", {"b^2": "q1"}, "square of a^2"),
    ("b^2", "b^2", {"a^2": "q2"}, "square of b^2"),
    ("a^2", "b^2", {"1": "q1*q2"}, "a^2 times b^2"),
    ("a^2", "a^2b", {"a": "q1*q2"}, "a^2 times the point class"),
    ("b^2", "a^2b", {"b": "q1*q2"}, "b^2 times the point class"),
    ("a^2b", "a^2b", {"a^2": "q1*q2", "b^2": "q1*q2"}, "square of the point class is ab*q1*q2"),
]

# Hirzebruch surface Σ1, classes 1, x1, x2 = x4 - x1, z = x1*x4
HIRZEBRUCH1_PRODUCTS = [
    ("x1", "x1", {"x2": "q2"}, "square of the fibre class"),
    ("x1", "x4", {"z": "1"}, "fibre times section"),
    ("x2", "x4", {"1": "q1"}, "x2 times x4"),
    ("x4", "x4", {"z": "1", "1": "q1"}, "square of x4"),
    ("x1", "x2", {"z": "1", "x2": "-q2"}, "fibre times x2"),
    ("x2", "x2", {"z": "-1", "1": "q1", "x2": "q2"}, "square of x2"),
]

HIRZEBRUCH0_RELATIONS = ["x1^2 - q2", "x4^2 - q1"]

FIXTURES = {
    "flag3": FLAG3_PRODUCTS,
    "hirzebruch:1": HIRZEBRUCH1_PRODUCTS,
}


@dataclass
class FixtureReport:
    space: str
    entries: list
    passed: bool

    @property
    def mismatches(self):
        return [e for e in self.entries if not e["match"]]

    def to_dict(self):
        return {"space": self.space, "entries": self.entries, "pass": self.passed}


def expected_expansion(expansion, universe):
    return {cls: Polynomial.parse(text, universe) for cls, text in expansion.items()}


def check_product_fixtures(identifier, fixtures=None):
    """Compare every recorded product with the engine's expansion over the standard lifts."""
    space = parse_space(identifier)
    fixtures = FIXTURES[identifier] if fixtures is None else fixtures
    engine = space.engine(quantum=True)
    lifts = standard_lifts(space, engine.universe)
    entries = []
    for left, right, expansion, label in fixtures:
        product = resolve_factor(left, lifts, engine.universe) * resolve_factor(right, lifts, engine.universe)
        computed = engine.expand(product, lifts)
        expected = expected_expansion(expansion, engine.universe)
        match = computed == expected
        if not match:
            logger.warning(f"{identifier}: {left}*{right} computed {computed}, recorded {expected}")
        entries.append({
            "product": f"{left}*{right}",
            "label": label,
            "computed": {cls: str(c) for cls, c in sorted(computed.items())},
            "expected": dict(sorted(expansion.items())),
            "match": match,
        })
    passed = all(e["match"] for e in entries)
    logger.info(f"{identifier}: {sum(e['match'] for e in entries)}/{len(entries)} recorded products reproduced")
    return FixtureReport(identifier, entries, passed)


def check_hirzebruch0_relations():
    """The Σ0 presentation is exactly the recorded pair of relations."""
    pres = parse_space("hirzebruch:0").presentation(quantum=True)
    expected = [Polynomial.parse(text, pres.universe) for text in HIRZEBRUCH0_RELATIONS]
    return list(pres.relations) == expected
