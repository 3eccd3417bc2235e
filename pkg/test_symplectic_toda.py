#!/usr/bin/env python3
"""
Symplectic and Toda test script
Poisson brackets, Lagrangian checks, RK4 integration of the Toda lattice and
its identification with the flag manifold relations
"""

import random
from fractions import Fraction

import numpy as np

from algebra_core import Polynomial, StructuralError
from quotient_ring import complete
from space_presentations import parse_space
from symplectic_toda import (
    SymplecticChart, TodaState, poisson_bracket, describe_multiple, check_L1, check_L2,
    toda_integrate, drift_report, convergence_ratio, conserved_quantities, characteristic_coefficients,
    lax_derivative, velocity_matrix, toda_vector_field, second_order_residual, toda_matches_flag_relations, substitute_conserved,
)


def _space(identifier):
    space = parse_space(identifier)
    return space.presentation(quantum=True), SymplecticChart.from_pairs(space.chart_pairs)


def test_canonical_brackets():
    print("🔁 Testing the bracket...")
    pres, chart = _space("flag3")
    u = pres.universe
    p1, q1 = Polynomial.variable(u, "p1"), Polynomial.variable(u, "q1")
    assert poisson_bracket(p1, q1, chart) == -q1
    assert poisson_bracket(q1, p1, chart) == q1
    assert poisson_bracket(p1, p1, chart).is_zero()
    print("✅ {p, q} = -q")


def test_flag_bracket_vanishes():
    pres, chart = _space("flag3")
    r1, r2 = pres.relations
    assert poisson_bracket(r1, r2, chart).is_zero()
    report = check_L1(pres, chart)
    assert report.L1 and report.L2
    assert report.to_dict()["bracket"] == "0"
    print("✅ {R1, R2} = 0 on the flag manifold")


def test_hirzebruch_brackets():
    print("🔁 Testing Hirzebruch brackets...")
    pres, chart = _space("hirzebruch:1")
    r1, r2 = pres.relations
    bracket = poisson_bracket(r1, r2, chart)
    assert bracket == Polynomial.variable(pres.universe, "q2") * r2
    assert describe_multiple(bracket, pres.named_relations()) == "q2*R2"
    report = check_L1(pres, chart)
    assert report.L1 is True and report.L2 is False
    assert report.bracket == "q2*R2"
    pres0, chart0 = _space("hirzebruch:0")
    assert check_L2(pres0, chart0).L2
    print("✅ Σ1 bracket q2*R2 lies in the ideal, Σ0 bracket vanishes")


def test_lagrangian_table():
    expected = {"cpn:1": True, "cpn:3": True, "flag3": True, "hirzebruch:0": True, "hirzebruch:1": False}
    for identifier, l2 in expected.items():
        pres, chart = _space(identifier)
        report = check_L1(pres, chart)
        assert report.L1, identifier
        assert report.L2 == l2, identifier
    print("✅ L1 everywhere, L2 except Σ1")


def test_chart_validation():
    for p, q in ((("p1",), ("q1", "q2")), (("x",), ("x",))):
        try:
            SymplecticChart(p, q)
            assert False, "malformed chart should be refused"
        except StructuralError:
            pass
    pres, chart = _space("cpn:2")
    try:
        poisson_bracket(pres.relations[0], pres.relations[0], SymplecticChart(("y",), ("q",)))
        assert False, "variables outside the chart should be refused"
    except StructuralError:
        pass
    print("✅ Malformed charts refused")


def test_toda_state_validation():
    print("🌊 Testing Toda states...")
    for a, b in (((0.0, 1.0), (0.5, 0.0, -0.5)), ((1.0, 1.0), (0.5, 0.0, 0.0))):
        try:
            TodaState.initial(a, b)
            assert False, "invalid Toda state should be refused"
        except StructuralError:
            pass
    try:
        toda_integrate(TodaState.initial((1, 1), (0.5, 0, -0.5)), 1.0, 0.0)
        assert False, "dt = 0 should be refused"
    except StructuralError:
        pass
    print("✅ Invalid states refused")


def test_lax_equation():
    state = TodaState.initial((1.3, 0.7), (0.4, 0.1, -0.5))
    da1, da2, db1, db2, db3 = toda_vector_field(state)
    assert abs(da1 - 1.3 * 0.3) < 1e-14 and abs(da2 - 0.7 * 0.6) < 1e-14
    assert np.allclose((db1, db2, db3), (-1.3, 0.6, 0.7), atol=1e-14)
    assert np.allclose(lax_derivative(state), velocity_matrix(state), atol=1e-14)
    assert second_order_residual(state) < 1e-12
    print("✅ dX/dt = [X, Y] and the second-order form")


def test_conserved_quantities_match_characteristic_polynomial():
    state = TodaState.initial((1.0, 2.0), (0.3, -0.1, -0.2))
    trace, g, h = characteristic_coefficients()
    point = {"a1": 1.0, "a2": 2.0, "b1": 0.3, "b2": -0.1, "b3": -0.2}
    g0, h0 = conserved_quantities(state)
    assert abs(float(g.evaluate(point)) - g0) < 1e-12
    assert abs(float(h.evaluate(point)) - h0) < 1e-12
    assert abs(float(trace.evaluate(point))) < 1e-12
    print("✅ g and h are the characteristic coefficients")


def test_integration_conserves():
    print("🌊 Testing RK4 conservation...")
    state = TodaState.initial((1, 1), (0.5, 0, -0.5))
    trajectory = toda_integrate(state, 10.0, 1e-3)
    assert len(trajectory.times) == 10001
    report = drift_report(trajectory)
    assert report.passed, report.to_dict()
    assert report.trace_drift < 1e-12
    assert report.spectrum_drift < 1e-8
    print(f"✅ drift g {report.g_drift:.1e}, h {report.h_drift:.1e}")


def test_fourth_order_convergence():
    ratio = convergence_ratio(TodaState.initial((1, 1), (0.5, 0, -0.5)), 10.0, 0.02)
    assert 10 < ratio < 24, ratio
    print(f"✅ halving dt shrinks drift by {ratio:.1f}")


def test_flag_identification():
    print("🌊 Testing b -> x, a -> -q...")
    report = toda_matches_flag_relations()
    assert report.holds
    assert report.sign_matches == [[-1, -1]]
    trace, g, h = substitute_conserved((1, 1))
    assert "q1" in str(g)
    print("✅ Conserved quantities become the flag relations")


def _random_polynomial(rng, universe, terms=3, max_exp=2):
    p = Polynomial.zero(universe)
    for _ in range(terms):
        exps = [rng.randint(0, max_exp) for _ in universe.names]
        p = p + Polynomial.monomial(universe, exps, Fraction(rng.randint(-4, 4), rng.randint(1, 3)))
    return p


def test_bracket_identities_random():
    print("🔁 Testing bracket identities on random polynomials...")
    pres, chart = _space("hirzebruch:1")
    rng = random.Random(13)

    def br(f, g):
        return poisson_bracket(f, g, chart)

    for _ in range(8):
        f, g, h = (_random_polynomial(rng, pres.universe) for _ in range(3))
        assert br(f, g) == -br(g, f)
        assert (br(f, br(g, h)) + br(g, br(h, f)) + br(h, br(f, g))).is_zero()
        assert br(f, g * h) == br(f, g) * h + g * br(f, h)
    print("✅ Antisymmetry, Jacobi and Leibniz")


def test_check_L1_raises_cap():
    pres, chart = _space("hirzebruch:1")
    engine = complete(pres, degree_cap=4)
    report = check_L1(pres, chart, engine)
    assert report.L1 is True
    assert any("raised from 4 to 6" in note for note in report.notes), report.notes
    print("✅ Cap raised once for the degree 6 bracket")


def test_vector_field_at_rest():
    state = TodaState.initial((1, 1), (0, 0, 0))
    assert toda_vector_field(state) == (0.0, 0.0, -1.0, 0.0, 1.0)
    assert conserved_quantities(state) == (-2.0, 0.0)
    print("✅ Field and conserved quantities at a = (1, 1), b = 0")


def main():
    """Run all tests."""
    print("🔁 Symplectic / Toda Test Suite")
    print("=" * 40)

    tests = [
        ("Canonical Brackets", test_canonical_brackets),
        ("Flag Bracket", test_flag_bracket_vanishes),
        ("Hirzebruch Brackets", test_hirzebruch_brackets),
        ("Lagrangian Table", test_lagrangian_table),
        ("Chart Validation", test_chart_validation),
        ("Toda State Validation", test_toda_state_validation),
        ("Lax Equation", test_lax_equation),
        ("Characteristic Coefficients", test_conserved_quantities_match_characteristic_polynomial),
        ("RK4 Conservation", test_integration_conserves),
        ("RK4 Convergence", test_fourth_order_convergence),
        ("Flag Identification", test_flag_identification),
        ("Random Bracket Identities", test_bracket_identities_random),
        ("L1 Cap Raise", test_check_L1_raises_cap),
        ("Vector Field at Rest", test_vector_field_at_rest),
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
