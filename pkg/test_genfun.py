#!/usr/bin/env python3
"""
Generating function test script
Truncated V(t, q), relation operators and the annihilation check
"""

import random
from fractions import Fraction

from algebra_core import Polynomial, StructuralError
from quotient_ring import DegreeCapError, complete
from space_presentations import UnsupportedSpaceError, parse_space, cpn_presentation
from genfun import (
    t_universe, scalar_generating_function, classical_generating_function, cpn_V_closed_form,
    apply_operator, annihilation_check, module_property_check, generating_engine,
)


def test_t_variables():
    universe, t_for = t_universe(["p"], [("q", 4)])
    assert universe.names == ("t", "q") and universe.degree_of("t") == -2
    assert t_for == [("t", "p")]
    _, pairs = t_universe(["p1", "p2"], [("q1", 4), ("q2", 4)])
    assert pairs == [("t1", "p1"), ("t2", "p2")]
    print("✅ t-variables paired with generators")


def test_closed_form_cp1():
    print("📈 Testing the CP^1 closed form...")
    V = cpn_V_closed_form(1, 5)
    u = V.universe
    expected = Polynomial.parse("t + t^3*q/6 + t^5*q^2/120", u)
    assert V.body == expected
    assert V.included_orders() == [1, 3, 5]
    try:
        cpn_V_closed_form(3, 2)
        assert False, "order below n should be refused"
    except StructuralError:
        pass
    print("✅ V = t + q t^3/3! + q^2 t^5/5!")


def test_ring_matches_closed_form():
    print("📈 Testing V built from the ring...")
    for n, order in ((1, 7), (2, 8), (3, 9)):
        pres = cpn_presentation(n)
        engine = generating_engine(pres, order)
        V = scalar_generating_function(engine, order)
        assert V.body == cpn_V_closed_form(n, order).body, n
        assert V.reliable_order == order
    print("✅ Ring pairing reproduces the closed form")


def test_classical_generating_function():
    engine = generating_engine(cpn_presentation(2), 8)
    V0 = classical_generating_function(engine, 8)
    u = V0.universe
    assert V0.body == Polynomial.parse("t^2/2", u)
    print("✅ q = 0 leaves t^n/n!")


def test_apply_operator():
    print("📈 Testing relation operators...")
    V = cpn_V_closed_form(2, 11)
    pres = cpn_presentation(2)
    relation = pres.relations[0]
    residual = apply_operator(relation, V)
    assert residual.body.is_zero()
    assert residual.reliable_order == 8
    p = Polynomial.variable(pres.universe, "p")
    first = apply_operator(p, V)
    assert first.body.coefficient(first.universe.unit()) == 0
    assert first.body.terms[(1, 0)] == Fraction(1)
    print("✅ (p^3 - q) V = 0 while p V = dV/dt")


def test_annihilation_check():
    for identifier, order in (("cpn:1", 6), ("cpn:2", 9), ("flag3", 7), ("hirzebruch:1", 6)):
        pres = parse_space(identifier).presentation()
        report = annihilation_check(pres, order)
        assert report.passed, report.to_dict()
        assert not report.non_member["vanishes"]
        assert report.to_dict()["residual_terms"] == 0
    print("✅ Relations annihilate V, generators do not")


def test_non_relation_is_detected():
    pres = cpn_presentation(2)
    V = scalar_generating_function(generating_engine(pres, 9), 9)
    wrong = Polynomial.parse("p^3 + q", pres.universe)
    assert not apply_operator(wrong, V).body.is_zero()
    print("✅ A perturbed relation leaves a residual")


def test_module_property():
    ok, checked, failures = module_property_check(cpn_presentation(2), 9, max_multiplier_degree=2)
    assert ok and not failures
    assert checked == 3
    print("✅ Multiples of relations annihilate V")


def test_preconditions():
    print("📈 Testing refusals...")
    try:
        generating_engine(parse_space("gr:2:4").presentation(), 6)
        assert False, "degree-four generator should be refused"
    except UnsupportedSpaceError:
        pass
    engine = complete(cpn_presentation(1))
    try:
        scalar_generating_function(engine, engine.degree_cap)
        assert False, "orders above the cap should be refused"
    except DegreeCapError:
        pass
    V = cpn_V_closed_form(1, 5)
    try:
        apply_operator(Polynomial.parse("x1^2", parse_space("hirzebruch:0").presentation().universe), V)
        assert False, "operators in foreign variables should be refused"
    except StructuralError:
        pass
    print("✅ Unsupported inputs refused")


def _trim(gf, order):
    return Polynomial(gf.universe, {m: c for m, c in gf.body.terms.items() if gf.t_degree(m) <= order})


def test_operator_linearity_random():
    """(aR + bS)* V agrees with a R* V + b S* V where all three are reliable."""
    V = cpn_V_closed_form(2, 11)
    u = cpn_presentation(2).universe
    rng = random.Random(17)
    for _ in range(10):
        R, S = (
            sum((Polynomial.monomial(u, (rng.randint(0, 3), rng.randint(0, 1)), rng.randint(-3, 3))
                 for _ in range(3)), Polynomial.zero(u))
            for _ in range(2)
        )
        a, b = Fraction(rng.randint(-4, 4), rng.randint(1, 3)), Fraction(rng.randint(-4, 4), rng.randint(1, 3))
        combined = apply_operator(R * a + S * b, V)
        left, right = apply_operator(R, V), apply_operator(S, V)
        order = min(combined.reliable_order, left.reliable_order, right.reliable_order)
        assert _trim(combined, order) == _trim(left, order) * a + _trim(right, order) * b
    assert apply_operator(Polynomial.zero(u), V).body.is_zero()
    print("✅ Relation operators act linearly")


def main():
    """Run all tests."""
    print("📈 Generating Function Test Suite")
    print("=" * 40)

    tests = [
        ("t-Variables", test_t_variables),
        ("CP^1 Closed Form", test_closed_form_cp1),
        ("Ring vs Closed Form", test_ring_matches_closed_form),
        ("Classical V", test_classical_generating_function),
        ("Relation Operators", test_apply_operator),
        ("Annihilation", test_annihilation_check),
        ("Non-relation Detected", test_non_relation_is_detected),
        ("Module Property", test_module_property),
        ("Preconditions", test_preconditions),
        ("Operator Linearity", test_operator_linearity_random),
    ]

    results = []
    for test_name, test_func in tests:
        print(f"\n{test_name}...")
        try:
            test_func()
            results.append((test_name, True))
        except Exception as e:
            print(f"❌ {test_name} failed with error: {e!r}")
            results.append((test_name, False))

    print("\n" + "=" * 40)
    print("Test Results:")
    for test_name, result in results:
        status = "✅ PASS" if result else "❌ FAIL"
        print(f"{test_name}: {status}")

    passed = sum(1 for _, result in results if result)
    print(f"\nPassed: {passed}/{len(results)} tests")
    return passed == len(results)


if __name__ == "__main__":
    raise SystemExit(0 if main() else 1)
