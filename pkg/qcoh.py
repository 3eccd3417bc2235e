#!/usr/bin/env python3
"""
qcoh: command-line front end of the quantum cohomology workbench.

    python qcoh.py ring cpn:2 --quantum
    python qcoh.py product-table flag3 --json
    python qcoh.py lagrangian-check hirzebruch:1 --json
    python qcoh.py lg residue --space gr:2:4 --T "c1^4" --q 1
    python qcoh.py toda integrate --a 1,1 --b 0.5,0,-0.5 --t-end 10 --dt 1e-3
    python qcoh.py genfun annihilate --space cpn:2 --order 12
    python qcoh.py verify-all

Exit status: 0 when every check passes, 1 on a failed check, 2 on usage errors.
"""

import argparse
import json
import logging
import sys
from dataclasses import dataclass, field
from math import comb

from config import (
    OUTPUT_FORMAT, LOG_FILE, LOG_LEVEL, SCHEMA_VERSION, DEFAULT_SEED,
    ROOT_RESIDUAL, INTEGRATOR_DRIFT, SPECTRUM_RESIDUAL, SPECTRUM_SAMPLES, RESIDUE_INTEGER_TOL,
)
from algebra_core import Polynomial, StructuralError, NotInvertibleError
from quotient_ring import complete, load_presentation, HomogeneityError, DegreeCapError, BasisLiftError
from space_presentations import (
    SPACE_IDENTIFIERS, UnsupportedSpaceError, parse_space, shipped_spaces, standard_lifts,
    quantum_product_table, cpn_product_from_triples, grassmannian_presentation, space_engine,
)
from product_fixtures import FIXTURES, check_product_fixtures, check_hirzebruch0_relations
from schubert import (
    enumerate_diagrams, parse_diagram, giambelli, giambelli_in_chern, chern_as_schubert, schubert_product,
)
from landau_ginzburg import (
    potential, check_gradient, critical_points, vafa_intriligator,
    RootCountError, DegenerateCriticalPointError, ResidueError,
)
from symplectic_toda import (
    SymplecticChart, TodaState, IntegrationError, check_L1, check_L2, poisson_bracket,
    toda_integrate, drift_report, convergence_ratio, conserved_quantities,
    toda_matches_flag_relations,
)
from genfun import (
    scalar_generating_function, classical_generating_function, cpn_V_closed_form,
    annihilation_check, module_property_check, generating_engine,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2

USAGE_ERRORS = (UnsupportedSpaceError, StructuralError)
CHECK_ERRORS = (HomogeneityError, DegreeCapError, BasisLiftError, RootCountError, DegenerateCriticalPointError,
                ResidueError, IntegrationError, NotInvertibleError)

CONVERGENCE_DT = 0.02


class UsageError(ValueError):
    """Bad command-line input detected after argument parsing."""


@dataclass
class RunConfig:
    command: str
    output_format: str
    tolerances: dict
    seed: int
    out: str = None

    @classmethod
    def from_args(cls, args):
        command = " ".join(part for part in (args.verb, getattr(args, "action", None)) if part)
        return cls(
            command=command,
            output_format="json" if args.json else OUTPUT_FORMAT,
            tolerances={
                "root_residual": args.tol_root,
                "integrator_drift": args.tol_drift,
                "spectrum_residual": args.tol_spectrum,
            },
            seed=args.seed,
            out=args.out,
        )

    def to_dict(self):
        return {"command": self.command, "tolerances": self.tolerances, "seed": self.seed}


@dataclass
class Outcome:
    passed: bool
    payload: dict
    lines: list = field(default_factory=list)


def mark(ok):
    return "✅ PASS" if ok else "❌ FAIL"


# ---------------------------
# Shared helpers
# ---------------------------

def _grassmannian_params(identifier):
    """(k, n) for gr:<k>:<n>, or (1, n+1) for cpn:<n>."""
    space = parse_space(identifier)
    if space.family == "grassmannian":
        return space.parameters
    if space.family == "projective":
        return 1, space.parameters[0] + 1
    raise UsageError(f"'{identifier}' is not a Grassmannian (use gr:<k>:<n> or cpn:<n>)")


def _chart(space):
    if not space.chart_pairs:
        raise UsageError(f"No symplectic chart for {space.identifier} (use cpn:<n>, flag3 or hirzebruch:<k>)")
    return SymplecticChart.from_pairs(space.chart_pairs)


def _floats(text, count, name):
    try:
        values = [float(v) for v in text.split(",")]
    except ValueError:
        raise UsageError(f"--{name} expects {count} comma-separated numbers, got '{text}'")
    if len(values) != count:
        raise UsageError(f"--{name} expects {count} comma-separated numbers, got '{text}'")
    return values


def _complex(text):
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise UsageError(f"Not a complex number: '{text}'")


# ---------------------------
# Verbs
# ---------------------------

def cmd_spaces(args, config):
    rows = [s.to_dict() for s in shipped_spaces()]
    lines = ["🗺️  Space identifiers: " + ", ".join(SPACE_IDENTIFIERS), "Shipped spaces:"]
    lines += [f"  {r['identifier']}: {r['family']}, complex dimension {r['complex_dimension']}" for r in rows]
    return Outcome(True, {"identifiers": SPACE_IDENTIFIERS, "spaces": rows}, lines)


def cmd_ring(args, config):
    if args.file:
        pres = load_presentation(args.file)
    elif args.space:
        pres = parse_space(args.space).presentation(quantum=args.quantum)
    else:
        raise UsageError("ring needs a space identifier or --file")
    engine = complete(pres, args.cap)
    payload = engine.to_dict()
    lines = [f"📐 {pres.label}",
             "generators: " + ", ".join(f"{n} (deg {d})" for n, d in pres.generators)]
    if pres.is_quantum:
        lines.append("quantum parameters: " + ", ".join(f"{n} (deg {d})" for n, d in pres.quantum_params))
    lines.append("relations:")
    lines += [f"  {name}: {rel}" for name, rel in pres.named_relations()]
    lines.append(f"completed basis (cap {engine.degree_cap}):")
    lines += [f"  {g}" for g in engine.completed_basis]
    if "basis" in payload:
        lines.append("basis: " + ", ".join(payload["basis"]))
        lines.append("graded dimensions: " + ", ".join(f"{d}:{c}" for d, c in payload["graded_dimensions"].items()))
    return Outcome(True, payload, lines)


def cmd_product_table(args, config):
    space = parse_space(args.space)
    engine = space.engine(quantum=True)
    table = quantum_product_table(engine, standard_lifts(space, engine.universe))
    symmetric = table.is_symmetric()
    grading = table.grading_violations()
    payload = table.to_dict()
    payload.update({"symmetric": symmetric, "grading_violations": [list(g) for g in grading]})
    lines = [f"🧮 Quantum product table of {space.identifier}"]
    for a in table.classes:
        for b in table.classes:
            expansion = table.get(a, b)
            text = " + ".join(f"({c})*{cls}" for cls, c in sorted(expansion.items())) or "0"
            lines.append(f"  {a} * {b} = {text}")
    passed = symmetric and not grading
    lines.append(f"{mark(symmetric)} symmetric")
    lines.append(f"{mark(not grading)} graded")
    if space.identifier in FIXTURES:
        report = check_product_fixtures(space.identifier)
        payload["fixtures"] = report.to_dict()
        lines.append(f"{mark(report.passed)} {len(report.entries) - len(report.mismatches)}/{len(report.entries)} "
                     "recorded products reproduced")
        passed = passed and report.passed
    if space.family == "projective":
        triples = cpn_product_from_triples(space.parameters[0])
        agree = triples.entries == table.entries
        payload["triple_products_agree"] = agree
        lines.append(f"{mark(agree)} agrees with the triple-product formula")
        passed = passed and agree
    if space.identifier == "hirzebruch:0":
        ok = check_hirzebruch0_relations()
        payload["recorded_relations"] = ok
        lines.append(f"{mark(ok)} relations x1^2 - q2, x4^2 - q1")
        passed = passed and ok
    return Outcome(passed, payload, lines)


def cmd_schubert(args, config):
    k, n = _grassmannian_params(args.space)
    if args.action == "diagrams":
        diagrams = enumerate_diagrams(k, n)
        payload = {"space": f"gr:{k}:{n}", "diagrams": [str(d) for d in diagrams], "count": len(diagrams)}
        lines = [f"🔲 {len(diagrams)} diagrams for gr:{k}:{n} (C({n},{k}) = {comb(n, k)})"]
        lines += [f"  {d}  codegree {d.codegree}" for d in diagrams]
        return Outcome(len(diagrams) == comb(n, k), payload, lines)
    if args.action == "giambelli":
        diagram = parse_diagram(args.diagram, k, n)
        s_form, c_form = giambelli(diagram), giambelli_in_chern(diagram)
        payload = {"diagram": str(diagram), "special_classes": str(s_form), "chern": str(c_form)}
        return Outcome(True, payload, [f"🔲 x{diagram} = {s_form}", f"   in Chern classes: {c_form}"])
    if args.action == "chern":
        sign, diagram = chern_as_schubert(args.j, k, n)
        payload = {"j": args.j, "sign": sign, "diagram": str(diagram)}
        return Outcome(True, payload, [f"🔲 c{args.j} = {'+' if sign > 0 else '-'}x{diagram}"])
    left, right = parse_diagram(args.left, k, n), parse_diagram(args.right, k, n)
    result = schubert_product(left, right, quantum=args.quantum)
    kind = "quantum" if args.quantum else "classical"
    return Outcome(True, result.to_dict(), [f"🔲 {left} * {right} ({kind}) = {result}"])


def cmd_lg(args, config):
    k, n = _grassmannian_params(args.space)
    if args.action == "potential":
        pot = potential(k, n, quantum=args.quantum)
        return Outcome(True, pot.to_dict(), [f"🌀 P for gr:{k}:{n}{' (quantum)' if args.quantum else ''} = {pot.body}"])
    if args.action == "check-gradient":
        report = check_gradient(potential(k, n, quantum=args.quantum))
        lines = [f"🌀 Gradient of the gr:{k}:{n} potential"]
        lines += [f"  {mark(c['match'])} d/d{c['variable']} = {c['derivative']}  ({c['relation']})"
                  for c in report.components]
        return Outcome(report.passed, report.to_dict(), lines)
    q_value = _complex(args.q)
    if args.action == "critical-points":
        pot = potential(k, n, quantum=True)
        points = critical_points(pot, q_value, tol=config.tolerances["root_residual"], seed=config.seed)
        payload = {"space": f"gr:{k}:{n}", "q": [q_value.real, q_value.imag], "roots": [p.to_dict() for p in points]}
        lines = [f"🎯 {len(points)} critical points of the gr:{k}:{n} potential at q={q_value}"]
        lines += [f"  {[complex(round(z.real, 10), round(z.imag, 10)) for z in p.coordinates]}  h={p.hessian_det:.6g}"
                  for p in points]
        return Outcome(True, payload, lines)
    T = Polynomial.parse(args.T, grassmannian_presentation(k, n, quantum=False).universe)
    report = vafa_intriligator(k, n, T, q_value, tol=RESIDUE_INTEGER_TOL,
                               seed=config.seed, root_tol=config.tolerances["root_residual"])
    lines = [f"🎯 Residue sum of {T} over {len(report.roots)} critical points of gr:{k}:{n}",
             f"  sum = {report.total:.10g}, rounded {report.rounded}, intersection number {report.oracle}",
             f"{mark(report.passed)} |sum| matches the ring"]
    return Outcome(report.passed, report.to_dict(), lines)


def cmd_bracket(args, config):
    space = parse_space(args.space)
    report = check_L2(space.presentation(quantum=True), _chart(space))
    lines = [f"🔁 Relation brackets on {space.identifier}"]
    lines += [f"  {{{r['pair'][0]},{r['pair'][1]}}} = {r['bracket']}  ({r['description']})" for r in report.brackets]
    payload = {"label": report.label, "brackets": report.brackets}
    if report.bracket is not None:
        payload["bracket"] = report.bracket
    return Outcome(True, payload, lines)


def cmd_lagrangian_check(args, config):
    space = parse_space(args.space)
    report = check_L1(space.presentation(quantum=True), _chart(space))
    lines = [f"🔁 Lagrangian conditions for {space.identifier}",
             f"  L1 (brackets in the ideal): {report.L1}",
             f"  L2 (brackets vanish): {report.L2}"]
    lines += [f"  {{{r['pair'][0]},{r['pair'][1]}}} = {r['description']}" for r in report.brackets]
    lines += [f"  note: {n}" for n in report.notes]
    return Outcome(report.L1, report.to_dict(), lines)


def cmd_toda(args, config):
    if args.action == "identify":
        report = toda_matches_flag_relations()
        lines = [f"🌊 b -> x, a -> -q: g -> {report.images['g']}", f"   h -> {report.images['h']}",
                 f"{mark(report.holds)} unique sign match {report.sign_matches}"]
        return Outcome(report.holds, report.to_dict(), lines)
    state = TodaState.initial(_floats(args.a, 2, "a"), _floats(args.b, 3, "b"))
    if args.action == "conserved":
        g, h = conserved_quantities(state)
        return Outcome(True, {"state": state.to_dict(), "g": g, "h": h}, [f"🌊 g = {g:.12g}, h = {h:.12g}"])
    trajectory = toda_integrate(state, args.t_end, args.dt)
    report = drift_report(trajectory, config.tolerances["integrator_drift"])
    lines = [f"🌊 RK4 to t={args.t_end} with dt={args.dt} ({len(trajectory.times) - 1} steps)",
             f"  g drift {report.g_drift:.3e}, h drift {report.h_drift:.3e}",
             f"  trace drift {report.trace_drift:.3e}, spectrum drift {report.spectrum_drift:.3e}"]
    if args.convergence:
        report.convergence_ratio = convergence_ratio(state, args.t_end, args.convergence_dt)
        lines.append(f"  drift ratio dt={args.convergence_dt} vs dt/2: {report.convergence_ratio:.2f}")
    lines.append(f"{mark(report.passed)} conserved within {report.tol}")
    return Outcome(report.passed, report.to_dict(), lines)


def cmd_spectrum(args, config):
    space = parse_space(args.space)
    engine = space.engine(quantum=True)
    if args.q:
        samples = [tuple(_complex(v) for v in args.q.split(","))]
    else:
        samples = engine.random_q_samples(args.samples, config.seed)
    report = engine.spectrum_check(samples, config.tolerances["spectrum_residual"], config.seed)
    lines = [f"🔭 Joint spectrum of {', '.join(report.generators)} on {space.identifier}"]
    lines += [f"  q={tuple(s.q_values.values())}: {len(s.eigen_tuples)} eigen tuples, residual {s.max_residual:.3e}"
              for s in report.samples]
    lines += [f"  note: {n}" for n in report.notes]
    lines.append(f"{mark(report.passed)} max residual {report.max_residual:.3e} < {report.tol}")
    return Outcome(report.passed, report.to_dict(), lines)


def cmd_genfun(args, config):
    if args.action == "closed-form":
        gf = cpn_V_closed_form(args.n, args.order)
        return Outcome(True, gf.to_dict(), [f"📈 V for cpn:{args.n} to order {args.order}: {gf.body}"])
    space = parse_space(args.space)
    pres = space.presentation(quantum=not getattr(args, "classical", False))
    if not space.generated_in_degree_two:
        raise UnsupportedSpaceError(
            f"{space.identifier} is not generated in degree 2, so generating-function operators do not apply")
    if args.action == "build":
        engine = generating_engine(pres, args.order)
        top = space.top_class_polynomial(engine.universe)
        build = classical_generating_function if args.classical else scalar_generating_function
        gf = build(engine, args.order, top)
        return Outcome(True, gf.to_dict(), [f"📈 V for {space.identifier} to order {args.order}:", f"  {gf.body}"])
    if args.action == "module":
        ok, checked, failures = module_property_check(pres, args.order, args.degree)
        payload = {"label": pres.label, "order": args.order, "checked": checked, "failures": failures, "pass": ok}
        return Outcome(ok, payload, [f"{mark(ok)} {checked} multiples of relations annihilate V"])
    report = annihilation_check(pres, args.order)
    lines = [f"📈 Relations as operators on V for {space.identifier} (order {args.order})"]
    lines += [f"  {mark(r['vanishes'])} {r['name']}*V = 0 to order {r['reliable_order']}" for r in report.relations]
    control = report.non_member
    lines.append(f"  {mark(not control['vanishes'])} {control['operator']}*V is nonzero "
                 f"({control['residual_terms']} terms)")
    return Outcome(report.passed, report.to_dict(), lines)


# ---------------------------
# verify-all fixture suite
# ---------------------------

def fixture_grassmannian_relations():
    pres = grassmannian_presentation(2, 4, quantum=False)
    expected = [Polynomial.parse(t, pres.universe) for t in ("-c1^3 + 2*c1*c2", "c1^4 - 3*c1^2*c2 + c2^2")]
    return list(pres.relations) == expected, "f3, f4 of gr:2:4 from series inversion"


def fixture_potential_gradients():
    pot = potential(2, 4)
    ok = pot.body == Polynomial.parse("1/5*c1^5 - c1^3*c2 + c1*c2^2", pot.universe)
    cases = 0
    for n in range(2, 8):
        for k in range(1, n):
            if k + n <= 8:
                for quantum in (False, True):
                    ok = ok and check_gradient(potential(k, n, quantum)).passed
                    cases += 1
    return ok, f"dP = relations for {cases} (k, n, quantum) cases"


def fixture_flag_products():
    report = check_product_fixtures("flag3")
    return report.passed, f"{len(report.entries) - len(report.mismatches)}/{len(report.entries)} flag3 products"


def fixture_hirzebruch():
    report = check_product_fixtures("hirzebruch:1")
    degrees_ok = all(
        dict(parse_space(f"hirzebruch:{k}").presentation().quantum_params) == {"q1": 4, "q2": 2 * (2 - k)}
        for k in (0, 1))
    ok = report.passed and check_hirzebruch0_relations() and degrees_ok
    return ok, f"Σ0 relations, {len(report.entries)} Σ1 products, q-degrees"


def fixture_brackets():
    flag = parse_space("flag3")
    flag_pres = flag.presentation()
    r1, r2 = flag_pres.relations
    flag_zero = poisson_bracket(r1, r2, _chart(flag)).is_zero()
    sigma1 = parse_space("hirzebruch:1")
    s_pres = sigma1.presentation()
    s1, s2 = s_pres.relations
    q2 = Polynomial.variable(s_pres.universe, "q2")
    sigma_ok = poisson_bracket(s1, s2, _chart(sigma1)) == q2 * s2
    expected = {"cpn:1": True, "cpn:2": True, "cpn:3": True, "cpn:4": True,
                "flag3": True, "hirzebruch:0": True, "hirzebruch:1": False}
    table_ok = True
    for identifier, l2 in expected.items():
        space = parse_space(identifier)
        report = check_L1(space.presentation(), _chart(space))
        table_ok = table_ok and report.L1 and report.L2 == l2
    return flag_zero and sigma_ok and table_ok, "flag3 bracket 0, Σ1 bracket q2*R2, L1/L2 table"


def fixture_toda():
    state = TodaState.initial((1, 1), (0.5, 0, -0.5))
    report = drift_report(toda_integrate(state, 10.0, 1e-3))
    ratio = convergence_ratio(state, 10.0, CONVERGENCE_DT)
    identified = toda_matches_flag_relations().holds
    ok = report.passed and 10 < ratio < 24 and identified
    return ok, f"drift {max(report.g_drift, report.h_drift):.1e}, halving ratio {ratio:.1f}, b->x a->-q"


def fixture_residues():
    cases = [(1, n + 1, f"c1^{n}") for n in (1, 2, 3)] + [(2, 4, t) for t in ("c1^4", "c1^2*c2", "c2^2")]
    ok = True
    for k, n, text in cases:
        T = Polynomial.parse(text, grassmannian_presentation(k, n, quantum=False).universe)
        ok = ok and vafa_intriligator(k, n, T, 1.0).passed
    return ok, f"{len(cases)} top-degree residue sums match intersection numbers"


def fixture_annihilation():
    ok = True
    for n in (1, 2, 3):
        order = 3 * n + 3
        space = parse_space(f"cpn:{n}")
        ok = ok and annihilation_check(space.presentation(), order).passed
        engine = generating_engine(space.presentation(), order)
        built = scalar_generating_function(engine, order, space.top_class_polynomial(engine.universe))
        ok = ok and built.body == cpn_V_closed_form(n, order).body
    ok = ok and annihilation_check(parse_space("flag3").presentation(), 9).passed
    ok = ok and annihilation_check(parse_space("hirzebruch:1").presentation(), 8).passed
    return ok, "CP^n (n <= 3), flag3 to order 9, Σ1 to order 8; non-members detected"


def fixture_spectrum():
    ok = True
    for identifier in ("cpn:1", "cpn:2", "cpn:3", "flag3", "hirzebruch:0", "hirzebruch:1"):
        engine = space_engine(identifier, True)
        report = engine.spectrum_check(engine.random_q_samples(SPECTRUM_SAMPLES, DEFAULT_SEED))
        ok = ok and report.passed
    return ok, f"{SPECTRUM_SAMPLES} q samples per space"


def fixture_betti_and_schubert():
    ok = True
    for n in range(2, 8):
        for k in range(1, n):
            if k + n <= 8:
                ok = ok and sum(space_engine(f"gr:{k}:{n}", False).graded_dimensions().values()) == comb(n, k)
    for space in shipped_spaces():
        ok = ok and sum(space.engine(quantum=False).graded_dimensions().values()) == space.betti_total
    for n in range(1, 5):
        engine = space_engine(f"cpn:{n}", True)
        table = quantum_product_table(engine, standard_lifts(parse_space(f"cpn:{n}"), engine.universe))
        ok = ok and table.entries == cpn_product_from_triples(n).entries
    d = {t: parse_diagram(t, 2, 4) for t in ("[1]", "[2,2]")}
    ok = ok and str(schubert_product(d["[1]"], d["[1]"])) == "[1,1] + [2,0]"
    ok = ok and str(schubert_product(d["[2,2]"], d["[1]"], quantum=True)) == "q*[1,0]"
    return ok, "Betti totals, CP^n triple products, Gr(2,4) Schubert products"


FIXTURE_SUITE = [
    ("Grassmannian relations", fixture_grassmannian_relations),
    ("Landau-Ginzburg gradients", fixture_potential_gradients),
    ("Flag manifold product table", fixture_flag_products),
    ("Hirzebruch surfaces", fixture_hirzebruch),
    ("Poisson brackets", fixture_brackets),
    ("Toda lattice", fixture_toda),
    ("Residue sums", fixture_residues),
    ("Generating functions", fixture_annihilation),
    ("Spectrum", fixture_spectrum),
    ("Betti counts and Schubert products", fixture_betti_and_schubert),
]


def cmd_verify_all(args, config):
    results = []
    for name, check in FIXTURE_SUITE:
        try:
            ok, detail = check()
        except Exception as e:
            logger.error(f"Fixture '{name}' raised: {e}")
            ok, detail = False, f"error: {e}"
        results.append({"name": name, "pass": bool(ok), "detail": detail})
    passed = sum(r["pass"] for r in results)
    lines = ["🧪 Quantum cohomology fixture suite", "=" * 40]
    lines += [f"{mark(r['pass'])} {r['name']}: {r['detail']}" for r in results]
    lines.append(f"\nPassed: {passed}/{len(results)} fixtures")
    return Outcome(passed == len(results), {"fixtures": results, "passed": passed, "total": len(results)}, lines)


# ---------------------------
# Argument parsing and dispatch
# ---------------------------

def common_options(suppress=False):
    """
    Report and tolerance options shared by every verb. Sub-action parsers get
    a suppressed copy so options given before the action are not reset.
    """
    def default(value):
        return argparse.SUPPRESS if suppress else value

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=default(False),
                        help="JSON output (default from QCOH_OUTPUT_FORMAT)")
    common.add_argument("--out", default=default(None), help="Write the report to this file instead of stdout")
    common.add_argument("--seed", type=int, default=default(DEFAULT_SEED),
                        help="Seed for multistart grids and q samples")
    common.add_argument("--tol-root", type=float, default=default(ROOT_RESIDUAL), help="Critical point residual")
    common.add_argument("--tol-drift", type=float, default=default(INTEGRATOR_DRIFT),
                        help="Toda conserved-quantity drift")
    common.add_argument("--tol-spectrum", type=float, default=default(SPECTRUM_RESIDUAL),
                        help="Spectrum residual")
    return common


def build_parser():
    common = common_options()
    action_common = common_options(suppress=True)

    parser = argparse.ArgumentParser(description="Quantum cohomology workbench")
    parser.add_argument("--log-level", default=LOG_LEVEL, help="Logging level (default from QCOH_LOG_LEVEL)")
    verbs = parser.add_subparsers(dest="verb", required=True)

    p = verbs.add_parser("spaces", parents=[common], help="List space identifiers")
    p.set_defaults(handler=cmd_spaces)

    p = verbs.add_parser("ring", parents=[common], help="Presentation, completion and basis of a ring")
    p.add_argument("space", nargs="?")
    p.add_argument("--quantum", action="store_true")
    p.add_argument("--cap", type=int, help="Degree cap for the completion")
    p.add_argument("--file", help="Presentation file (KEY=VALUE format) instead of a space")
    p.set_defaults(handler=cmd_ring)

    p = verbs.add_parser("product-table", parents=[common], help="Quantum products of the basis classes")
    p.add_argument("space")
    p.set_defaults(handler=cmd_product_table)

    p = verbs.add_parser("schubert", parents=[common], help="Young diagrams, Giambelli classes, products")
    actions = p.add_subparsers(dest="action", required=True)
    a = actions.add_parser("diagrams", parents=[action_common])
    a.add_argument("space")
    a = actions.add_parser("giambelli", parents=[action_common])
    a.add_argument("space")
    a.add_argument("diagram")
    a = actions.add_parser("chern", parents=[action_common])
    a.add_argument("space")
    a.add_argument("j", type=int)
    a = actions.add_parser("product", parents=[action_common])
    a.add_argument("space")
    a.add_argument("left")
    a.add_argument("right")
    a.add_argument("--quantum", action="store_true")
    p.set_defaults(handler=cmd_schubert)

    p = verbs.add_parser("lg", parents=[common], help="Landau-Ginzburg potentials and residue sums")
    actions = p.add_subparsers(dest="action", required=True)
    for name in ("potential", "check-gradient"):
        a = actions.add_parser(name, parents=[action_common])
        a.add_argument("--space", required=True)
        a.add_argument("--quantum", action="store_true")
    a = actions.add_parser("critical-points", parents=[action_common])
    a.add_argument("--space", required=True)
    a.add_argument("--q", default="1")
    a = actions.add_parser("residue", parents=[action_common])
    a.add_argument("--space", required=True)
    a.add_argument("--T", required=True, help="Top-degree class in c1..ck")
    a.add_argument("--q", default="1")
    p.set_defaults(handler=cmd_lg)

    p = verbs.add_parser("bracket", parents=[common], help="Poisson brackets of the relations")
    p.add_argument("--space", required=True)
    p.set_defaults(handler=cmd_bracket)

    p = verbs.add_parser("lagrangian-check", parents=[common], help="Conditions L1 and L2")
    p.add_argument("space")
    p.set_defaults(handler=cmd_lagrangian_check)

    p = verbs.add_parser("toda", parents=[common], help="Three-site Toda lattice")
    actions = p.add_subparsers(dest="action", required=True)
    a = actions.add_parser("integrate", parents=[action_common])
    a.add_argument("--a", default="1,1")
    a.add_argument("--b", default="0.5,0,-0.5")
    a.add_argument("--t-end", type=float, default=10.0)
    a.add_argument("--dt", type=float, default=1e-3)
    a.add_argument("--convergence", action="store_true", help="Also report the dt-halving drift ratio")
    a.add_argument("--convergence-dt", type=float, default=CONVERGENCE_DT)
    a = actions.add_parser("conserved", parents=[action_common])
    a.add_argument("--a", default="1,1")
    a.add_argument("--b", default="0.5,0,-0.5")
    actions.add_parser("identify", parents=[action_common])
    p.set_defaults(handler=cmd_toda)

    p = verbs.add_parser("spectrum", parents=[common], help="Joint eigenvalues against the relations")
    p.add_argument("space")
    p.add_argument("--samples", type=int, default=SPECTRUM_SAMPLES)
    p.add_argument("--q", help="One comma-separated q sample instead of random ones")
    p.set_defaults(handler=cmd_spectrum)

    p = verbs.add_parser("genfun", parents=[common], help="Generating functions and relation operators")
    actions = p.add_subparsers(dest="action", required=True)
    a = actions.add_parser("build", parents=[action_common])
    a.add_argument("--space", required=True)
    a.add_argument("--order", type=int, required=True)
    a.add_argument("--classical", action="store_true", help="Set q = 0")
    a = actions.add_parser("annihilate", parents=[action_common])
    a.add_argument("--space", required=True)
    a.add_argument("--order", type=int, required=True)
    a = actions.add_parser("module", parents=[action_common])
    a.add_argument("--space", required=True)
    a.add_argument("--order", type=int, required=True)
    a.add_argument("--degree", type=int, default=2, help="Largest multiplier degree")
    a = actions.add_parser("closed-form", parents=[action_common])
    a.add_argument("--n", type=int, required=True)
    a.add_argument("--order", type=int, required=True)
    p.set_defaults(handler=cmd_genfun)

    p = verbs.add_parser("verify-all", parents=[common], help="Run the full fixture suite")
    p.set_defaults(handler=cmd_verify_all)
    return parser


def setup_logging(level):
    handlers = [logging.StreamHandler(sys.stderr)]
    if LOG_FILE:
        handlers.append(logging.FileHandler(LOG_FILE))
    logging.basicConfig(
        level=getattr(logging, str(level).upper(), logging.WARNING),
        format='%(asctime)s - %(levelname)s - %(message)s',
        handlers=handlers,
        force=True,
    )


def emit(outcome, config):
    if config.output_format == "json":
        payload = {"schema": SCHEMA_VERSION, **config.to_dict(), **outcome.payload}
        text = json.dumps(payload, sort_keys=True, indent=2, default=str)
    else:
        text = "\n".join(outcome.lines)
    if config.out:
        with open(config.out, "w") as f:
            f.write(text + "\n")
        logger.info(f"Report written to {config.out}")
    else:
        print(text)


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    setup_logging(args.log_level)
    config = RunConfig.from_args(args)
    logger.info(f"Running '{config.command}'")

    try:
        outcome = args.handler(args, config)
    except USAGE_ERRORS + (UsageError,) as e:
        logger.error(f"Usage error: {e}")
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_USAGE
    except CHECK_ERRORS as e:
        logger.error(f"Check failed: {e}")
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_FAIL
    except Exception as e:
        logger.error(f"Error running '{config.command}': {e}")
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_FAIL

    emit(outcome, config)
    return EXIT_OK if outcome.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
