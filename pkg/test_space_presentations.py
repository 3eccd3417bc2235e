#!/usr/bin/env python3
"""
Space presentation test script
Identifiers, relations of the shipped spaces and their quantum product tables
"""

from math import comb

from algebra_core import Polynomial
from space_presentations import (
    UnsupportedSpaceError, parse_space, shipped_spaces, space_engine, standard_lifts,
    grassmannian_presentation, grassmannian_dual_relations, flag3_presentation, flag3_raw_relations,
    hirzebruch_presentation, quantum_product_table, cpn_product_from_triples, cpn_gw_triple, resolve_factor,
)
from product_fixtures import check_product_fixtures, check_hirzebruch0_relations
from quotient_ring import complete


def test_parse_space():
    print("🗺️  Testing identifiers...")
    assert parse_space("cpn:3").complex_dimension == 3
    assert parse_space("gr:2:5").parameters == (2, 5)
    assert parse_space("flag3").chart_pairs == (("p1", "q1"), ("p2", "q2"))
    assert parse_space("hirzebruch:1").c1_pairing == (2, 1)
    for bad in ("foo", "cpn:0", "gr:3:3", "gr:0:4", "cpn:x", "hirzebruch:-1", "flag3:1"):
        try:
            parse_space(bad)
            assert False, f"{bad} should be refused"
        except UnsupportedSpaceError:
            pass
    print("✅ Identifiers resolved and refused")


def test_grassmannian_relations():
    pres = grassmannian_presentation(2, 4, quantum=False)
    assert [str(r) for r in pres.relations] == ["-c1^3 + 2*c1*c2", "c1^4 - 3*c1^2*c2 + c2^2"]
    quantum = grassmannian_presentation(2, 4, quantum=True)
    assert str(quantum.relations[1]) == "c1^4 - 3*c1^2*c2 + c2^2 + q"
    assert dict(quantum.quantum_params) == {"q": 8}
    # Gr(2,5): the quantum sign is (-1)^{n-k} = -1
    assert str(grassmannian_presentation(2, 5).relations[-1]).endswith("- q")
    print("✅ f3, f4 of Gr(2,4)")


def test_grassmannian_dual_presentation():
    """Gr(k, n) and Gr(n-k, n) share Betti numbers through the dual presentation."""
    dual = grassmannian_dual_relations(2, 5)
    assert [n for n, _ in dual.generators] == ["s1", "s2", "s3"]
    engine = space_engine("gr:2:5", False)
    assert complete(dual).graded_dimensions() == engine.graded_dimensions()
    print("✅ Dual presentation has the same Betti numbers")


def test_grassmannian_duality():
    """Gr(k, n) and Gr(n-k, n) have the same graded dimensions, C(n, k) in total."""
    pairs = [(k, n) for n in (3, 4, 5) for k in range(1, n)] + [(2, 6)]
    for k, n in pairs:
        dims = space_engine(f"gr:{k}:{n}", False).graded_dimensions()
        assert dims == space_engine(f"gr:{n - k}:{n}", False).graded_dimensions(), (k, n)
        assert sum(dims.values()) == comb(n, k)
        assert all(dims[d] == dims[max(dims) - d] for d in dims)
    print("✅ Gr(k,n) and Gr(n-k,n) agree")


def test_flag_relations():
    print("🗺️  Testing the flag manifold...")
    pres = flag3_presentation(quantum=True)
    u = pres.universe
    r1 = Polynomial.parse("-p1^2 - p2^2 + p1*p2 + q1 + q2", u)
    r2 = Polynomial.parse("-p1*p2^2 + p1^2*p2 - p2*q1 + p1*q2", u)
    assert pres.relations == (r1, r2)
    raw = flag3_raw_relations(quantum=True)
    assert raw.names() == ("sigma1", "R1", "R2")
    x_chart = flag3_presentation(quantum=True, chart="x")
    assert [n for n, _ in x_chart.generators] == ["x1", "x2"]
    print("✅ p-chart relations")


def test_hirzebruch_relations():
    sigma1 = hirzebruch_presentation(1)
    assert [str(r) for r in sigma1.relations] == ["x1^2 + x1*q2 - x4*q2", "-x1*x4 + x4^2 - q1"]
    assert dict(sigma1.quantum_params) == {"q1": 4, "q2": 2}
    assert check_hirzebruch0_relations()
    classical = hirzebruch_presentation(3, quantum=False)
    assert str(classical.relations[1]) == "-3*x1*x4 + x4^2"
    try:
        hirzebruch_presentation(2, quantum=True)
        assert False, "quantum Σ2 should be refused"
    except UnsupportedSpaceError:
        pass
    print("✅ Σ0, Σ1 relations and Σ2 refusal")


def test_betti_totals():
    print("🗺️  Testing Betti totals...")
    for space in shipped_spaces():
        engine = space.engine(quantum=False)
        assert sum(engine.graded_dimensions().values()) == space.betti_total, space.identifier
    print("✅ Basis sizes match")


def test_cpn_table_matches_triple_products():
    for n in (1, 2, 3):
        engine = space_engine(f"cpn:{n}", True)
        table = quantum_product_table(engine, standard_lifts(parse_space(f"cpn:{n}"), engine.universe))
        assert table.entries == cpn_product_from_triples(n).entries
        assert table.is_symmetric()
        assert table.grading_violations() == []
    assert cpn_gw_triple(2, 1, 2, 2, 1) == 1
    assert cpn_gw_triple(2, 1, 1, 0, 1) == 0
    print("✅ CP^n products from triple products")


def test_flag_fixtures():
    print("🗺️  Testing recorded products...")
    report = check_product_fixtures("flag3")
    assert report.passed, report.mismatches
    assert len(report.entries) == 15
    sigma = check_product_fixtures("hirzebruch:1")
    assert sigma.passed, sigma.mismatches
    print("✅ Flag and Σ1 products reproduced")


def test_product_table_is_graded_and_symmetric():
    for identifier in ("flag3", "hirzebruch:0", "hirzebruch:1", "gr:2:4"):
        space = parse_space(identifier)
        engine = space.engine(quantum=True)
        table = quantum_product_table(engine, standard_lifts(space, engine.universe))
        assert table.is_symmetric(), identifier
        assert table.grading_violations() == [], identifier
    print("✅ Tables symmetric and graded")


def test_resolve_factor():
    space = parse_space("flag3")
    engine = space.engine()
    lifts = standard_lifts(space, engine.universe)
    assert resolve_factor("a^2", lifts, engine.universe) == Polynomial.parse("p1^2 - q1", engine.universe)
    assert resolve_factor("p1*p2", lifts, engine.universe) == Polynomial.parse("p1*p2", engine.universe)
    print("✅ Class names and polynomials resolved")


def main():
    """Run all tests."""
    print("🗺️  Space Presentation Test Suite")
    print("=" * 40)

    tests = [
        ("Identifiers", test_parse_space),
        ("Grassmannian Relations", test_grassmannian_relations),
        ("Dual Presentation", test_grassmannian_dual_presentation),
        ("Grassmannian Duality", test_grassmannian_duality),
        ("Flag Relations", test_flag_relations),
        ("Hirzebruch Relations", test_hirzebruch_relations),
        ("Betti Totals", test_betti_totals),
        ("CP^n Triple Products", test_cpn_table_matches_triple_products),
        ("Recorded Products", test_flag_fixtures),
        ("Graded Symmetric Tables", test_product_table_is_graded_and_symmetric),
        ("Factor Resolution", test_resolve_factor),
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
