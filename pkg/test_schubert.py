#!/usr/bin/env python3
"""
Schubert calculus test script
Young diagrams, Giambelli classes and (quantum) Schubert products on Grassmannians
"""

from math import comb

from algebra_core import Polynomial, StructuralError
from space_presentations import grassmannian_universe
from schubert import (
    YoungDiagram, parse_diagram, enumerate_diagrams, giambelli, giambelli_in_chern,
    point_class, chern_as_schubert, schubert_product, special_class_universe,
)


def test_enumerate_diagrams():
    print("🔲 Testing diagram enumeration...")
    for k, n in ((1, 3), (2, 4), (2, 5), (3, 6)):
        assert len(enumerate_diagrams(k, n)) == comb(n, k)
    names = [str(d) for d in enumerate_diagrams(2, 4)]
    assert names == ["[0,0]", "[1,0]", "[1,1]", "[2,0]", "[2,1]", "[2,2]"]
    print("✅ C(n, k) diagrams ordered by codegree")


def test_parse_diagram():
    d = parse_diagram("[2]", 2, 4)
    assert d.rows == (2, 0) and d.codegree == 2 and d.degree == 4
    assert parse_diagram("2,1", 2, 4) == YoungDiagram((2, 1), 2, 4)
    for bad in ("[3]", "[1,2]", "[1,1,1]", "[a]"):
        try:
            parse_diagram(bad, 2, 4)
            assert False, f"{bad} should be refused"
        except StructuralError:
            pass
    print("✅ Diagrams parsed and validated")


def test_giambelli():
    print("🔲 Testing Giambelli...")
    u = special_class_universe(2, 4)
    assert giambelli(parse_diagram("[1,1]", 2, 4)) == Polynomial.parse("s1^2 - s2", u)
    assert giambelli(parse_diagram("[2,2]", 2, 4)) == Polynomial.parse("s2^2", u)
    c = grassmannian_universe(2, 4, quantum=False)
    assert giambelli_in_chern(parse_diagram("[1]", 2, 4)) == Polynomial.parse("-c1", c)
    assert giambelli_in_chern(parse_diagram("[1,1]", 2, 4)) == Polynomial.parse("c2", c)
    assert giambelli_in_chern(parse_diagram("[2]", 2, 4)) == Polynomial.parse("c1^2 - c2", c)
    print("✅ Determinantal formula")


def test_point_class():
    c = grassmannian_universe(2, 4, quantum=False)
    assert point_class(2, 4) == Polynomial.parse("c2^2", c)
    cp2 = grassmannian_universe(1, 3, quantum=False)
    assert point_class(1, 3) == Polynomial.parse("c1^2", cp2)
    print("✅ Point classes")


def test_chern_as_schubert():
    assert chern_as_schubert(1, 2, 4) == (-1, YoungDiagram((1, 0), 2, 4))
    assert chern_as_schubert(2, 2, 4) == (1, YoungDiagram((1, 1), 2, 4))
    try:
        chern_as_schubert(3, 2, 4)
        assert False, "c3 does not exist on Gr(2,4)"
    except StructuralError:
        pass
    print("✅ c_j = (-1)^j x(1^j)")


def test_classical_products():
    print("🔲 Testing classical products...")
    d = {t: parse_diagram(t, 2, 4) for t in ("[1]", "[1,1]", "[2]", "[2,1]", "[2,2]")}
    assert str(schubert_product(d["[1]"], d["[1]"])) == "[1,1] + [2,0]"
    assert str(schubert_product(d["[1]"], d["[2,1]"])) == "[2,2]"
    assert str(schubert_product(d["[1,1]"], d["[2]"])) == "0"
    assert str(schubert_product(d["[2]"], d["[2]"])) == "[2,2]"
    print("✅ Pieri products on Gr(2,4)")


def test_quantum_products():
    print("🔲 Testing quantum products...")
    d = {t: parse_diagram(t, 2, 4) for t in ("[1]", "[2,1]", "[2,2]")}
    assert str(schubert_product(d["[2,2]"], d["[1]"], quantum=True)) == "q*[1,0]"
    assert str(schubert_product(d["[2,1]"], d["[1]"], quantum=True)) == "q*[0,0] + [2,2]"
    product = schubert_product(d["[2,2]"], d["[2,2]"], quantum=True)
    assert product.to_dict()["terms"] == [{"diagram": "[0,0]", "coefficient": "1", "q_power": 2}]
    print("✅ Quantum corrections carry q")


def test_products_need_one_grassmannian():
    try:
        schubert_product(parse_diagram("[1]", 2, 4), parse_diagram("[1]", 2, 5))
        assert False, "diagrams from different Grassmannians should be refused"
    except StructuralError:
        pass
    print("✅ Mixed Grassmannians refused")


def test_products_are_positive_and_graded():
    """Every structure constant is a positive integer and degrees add up, with |q| = 2n."""
    print("🔲 Testing positivity over whole Grassmannians...")
    for k, n in ((2, 4), (2, 5)):
        diagrams = enumerate_diagrams(k, n)
        for quantum in (False, True):
            for i, left in enumerate(diagrams):
                for right in diagrams[i:]:
                    product = schubert_product(left, right, quantum=quantum)
                    for d, c, e in product.terms:
                        assert c > 0 and c.denominator == 1, (left, right, c)
                        assert d.codegree + n * e == left.codegree + right.codegree, (left, right, d, e)
                        assert quantum or e == 0
    print("✅ Positive integer coefficients on Gr(2,4) and Gr(2,5)")


def test_giambelli_degrees():
    for k, n in ((2, 4), (2, 5), (3, 5)):
        for d in enumerate_diagrams(k, n):
            for cls in (giambelli(d), giambelli_in_chern(d)):
                assert cls.is_homogeneous() and (cls.degree() or 0) == d.degree, (d, cls)
    for k, n in ((1, 9), (4, 6), (3, 7), (5, 10)):
        assert len(enumerate_diagrams(k, n)) == comb(n, k)
    print("✅ Giambelli classes have degree 2|λ|")


def main():
    """Run all tests."""
    print("🔲 Schubert Calculus Test Suite")
    print("=" * 40)

    tests = [
        ("Diagram Enumeration", test_enumerate_diagrams),
        ("Diagram Parsing", test_parse_diagram),
        ("Giambelli", test_giambelli),
        ("Point Class", test_point_class),
        ("Chern Classes", test_chern_as_schubert),
        ("Classical Products", test_classical_products),
        ("Quantum Products", test_quantum_products),
        ("Mixed Grassmannians", test_products_need_one_grassmannian),
        ("Positivity", test_products_are_positive_and_graded),
        ("Giambelli Degrees", test_giambelli_degrees),
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
