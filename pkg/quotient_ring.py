#!/usr/bin/env python3
"""
Graded quotient rings S/I with canonical normal forms.

A GradedPresentation lists generators (with even degrees, quantum
parameters included) and homogeneous relations. `complete` turns it into a
NormalFormEngine by a degree-capped Buchberger completion; the engine gives
normal forms, graded bases, ideal membership, multiplication matrices and
the numeric spectrum check of the relation variety.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import sympy
from dotenv import dotenv_values

from algebra_core import (
    Polynomial, Universe, StructuralError,
    monomial_divides, monomial_div, monomial_mul, monomial_lcm, numeric_evaluator,
)
from config import SPECTRUM_RESIDUAL, DEFAULT_SEED

logger = logging.getLogger(__name__)


class HomogeneityError(ValueError):
    """A relation is not homogeneous for the declared grading."""

    def __init__(self, relation, term):
        self.relation = relation
        self.term = term
        exps, coeff = term
        super().__init__(
            f"Relation {relation} is not homogeneous: term {coeff}*{relation.universe.monomial_str(exps)} "
            f"has degree {relation.universe.weighted_degree(exps)}, leading degree is {relation.degree()}")


class DegreeCapError(ValueError):
    """Normal form requested above the degree the completion certifies."""


class BasisLiftError(ValueError):
    """A lifted basis is not independent, does not span, or is not closed."""


# ---------------------------
# Presentations
# ---------------------------

@dataclass(frozen=True)
class GradedPresentation:
    label: str
    universe: Universe
    relations: tuple
    relation_names: tuple = ()

    def __post_init__(self):
        for rel in self.relations:
            if rel.universe != self.universe:
                raise StructuralError(f"Relation {rel} of {self.label} lives in another universe")
        if self.relation_names and len(self.relation_names) != len(self.relations):
            raise StructuralError(f"{self.label}: one name per relation expected")

    @property
    def generators(self):
        return [(n, self.universe.degree_of(n)) for n in self.universe.generators]

    @property
    def quantum_params(self):
        return [(n, self.universe.degree_of(n)) for n in self.universe.quantum]

    @property
    def is_quantum(self):
        return bool(self.universe.quantum)

    def names(self):
        return self.relation_names or tuple(f"R{i + 1}" for i in range(len(self.relations)))

    def named_relations(self):
        return list(zip(self.names(), self.relations))

    def check_homogeneous(self):
        for rel in self.relations:
            bad = rel.homogeneity_violation()
            if bad is not None:
                raise HomogeneityError(rel, bad)

    def classical(self):
        """The q = 0 specialization, with quantum parameters dropped from the universe."""
        if not self.is_quantum:
            return self
        universe = Universe.build(self.generators)
        zeros = {n: 0 for n in self.universe.quantum}
        relations = tuple(r.substitute(zeros, self.universe).convert(universe) for r in self.relations)
        label = self.label.replace(" quantum", "") + " classical" if " quantum" in self.label else f"{self.label} (q=0)"
        return GradedPresentation(label, universe, relations, self.relation_names)

    def to_dict(self):
        return {
            "label": self.label,
            **self.universe.to_dict(),
            "relations": [{"name": name, "text": str(rel), "terms": rel.to_json()}
                          for name, rel in self.named_relations()],
        }


def _parse_degree_list(text):
    pairs = []
    for item in (text or "").split(","):
        item = item.strip()
        if not item:
            continue
        name, _, degree = item.partition(":")
        try:
            pairs.append((name.strip(), int(degree)))
        except ValueError:
            raise StructuralError(f"Bad generator entry '{item}' (expected name:degree)")
    return pairs


def load_presentation(path):
    """
    Read a presentation file of KEY=VALUE lines:

        LABEL=cpn:2 quantum
        GENERATORS=p:2
        QUANTUM=q:6
        RELATIONS=p^3 - q
        RELATION_NAMES=R1

    Relations are separated by ';'.
    """
    values = dotenv_values(path)
    if not values.get("GENERATORS") or not values.get("RELATIONS"):
        raise StructuralError(f"{path}: GENERATORS and RELATIONS are required")
    universe = Universe.build(_parse_degree_list(values["GENERATORS"]), _parse_degree_list(values.get("QUANTUM")))
    relations = tuple(Polynomial.parse(text, universe) for text in values["RELATIONS"].split(";") if text.strip())
    names = tuple(n.strip() for n in (values.get("RELATION_NAMES") or "").split(",") if n.strip())
    logger.info(f"Loaded presentation {values.get('LABEL', path)} with {len(relations)} relations")
    return GradedPresentation(values.get("LABEL") or str(path), universe, relations, names)


def dump_presentation(pres):
    """Render a presentation in the file format read by load_presentation."""
    lines = [
        f"LABEL={pres.label}",
        "GENERATORS=" + ",".join(f"{n}:{d}" for n, d in pres.generators),
    ]
    if pres.is_quantum:
        lines.append("QUANTUM=" + ",".join(f"{n}:{d}" for n, d in pres.quantum_params))
    lines.append("RELATIONS=" + "; ".join(str(r) for r in pres.relations))
    if pres.relation_names:
        lines.append("RELATION_NAMES=" + ",".join(pres.relation_names))
    return "\n".join(lines) + "\n"


def write_presentation(pres, path):
    with open(path, "w") as f:
        f.write(dump_presentation(pres))
    logger.info(f"Wrote presentation {pres.label} to {path}")


# ---------------------------
# Completion
# ---------------------------

@dataclass(frozen=True)
class _Rule:
    lm: tuple
    terms: dict


def _reduce_terms(terms, rules, key):
    """Reduce a term dict by monic rules; the first applicable rule always wins."""
    work = dict(terms)
    out = {}
    while work:
        lm = max(work, key=key)
        c = work[lm]
        for rule in rules:
            if monomial_divides(rule.lm, lm):
                shift = monomial_div(lm, rule.lm)
                for m, rc in rule.terms.items():
                    mm = monomial_mul(m, shift)
                    v = work.get(mm, 0) - c * rc
                    if v:
                        work[mm] = v
                    else:
                        work.pop(mm, None)
                break
        else:
            out[lm] = c
            del work[lm]
    return out


def _make_rule(terms, key):
    lm = max(terms, key=key)
    lc = terms[lm]
    return _Rule(lm, {m: c / lc for m, c in terms.items()})


def default_degree_cap(pres):
    """Twice the expected top degree plus the largest q-degree."""
    rel_degrees = [r.degree() or 0 for r in pres.relations]
    gen_degrees = [d for _, d in pres.generators]
    if len(rel_degrees) == len(gen_degrees):
        top = sum(rel_degrees) - sum(gen_degrees)
    else:
        top = max(rel_degrees, default=0)
    q_degree = max((d for _, d in pres.quantum_params), default=0)
    return 2 * max(top, max(rel_degrees, default=0)) + q_degree


def complete(pres, degree_cap=None):
    """
    Complete the relations of `pres` to a reduced rewriting basis that is
    confluent for every polynomial of weighted degree <= degree_cap.
    """
    pres.check_homogeneous()
    universe = pres.universe
    if any(d <= 0 for d in universe.degrees):
        raise StructuralError(f"{pres.label}: completion needs positive degrees, got {universe.degrees}")
    cap = default_degree_cap(pres) if degree_cap is None else int(degree_cap)
    key = universe.sort_key
    weighted = universe.weighted_degree

    pending = sorted((r for r in pres.relations if not r.is_zero()), key=lambda r: r.degree())
    rules = []
    pairs = []

    def add(terms):
        rule = _make_rule(terms, key)
        for i, other in enumerate(rules):
            pairs.append((weighted(monomial_lcm(other.lm, rule.lm)), i, len(rules)))
        rules.append(rule)

    for degree in range(0, cap + 1):
        for rel in [r for r in pending if r.degree() == degree]:
            reduced = _reduce_terms(rel.terms, rules, key)
            if reduced:
                add(reduced)
        while True:
            todo = sorted(p for p in pairs if p[0] == degree)
            if not todo:
                break
            pairs[:] = [p for p in pairs if p[0] != degree]
            for _, i, j in todo:
                a, b = rules[i], rules[j]
                lcm = monomial_lcm(a.lm, b.lm)
                if lcm == monomial_mul(a.lm, b.lm):
                    continue
                sa, sb = monomial_div(lcm, a.lm), monomial_div(lcm, b.lm)
                s = {}
                for m, c in a.terms.items():
                    mm = monomial_mul(m, sa)
                    s[mm] = s.get(mm, 0) + c
                for m, c in b.terms.items():
                    mm = monomial_mul(m, sb)
                    s[mm] = s.get(mm, 0) - c
                s = {m: c for m, c in s.items() if c}
                if s:
                    reduced = _reduce_terms(s, rules, key)
                    if reduced:
                        add(reduced)

    # relations above the cap still belong to the ideal
    for rel in pending:
        if rel.degree() > cap:
            reduced = _reduce_terms(rel.terms, rules, key)
            if reduced:
                rules.append(_make_rule(reduced, key))

    # minimal, then fully interreduced, sorted by leading monomial
    minimal = [r for i, r in enumerate(rules)
               if not any(monomial_divides(o.lm, r.lm) and (o.lm != r.lm or j < i)
                          for j, o in enumerate(rules) if j != i)]
    minimal.sort(key=lambda r: key(r.lm))
    final = []
    for i, rule in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1:]
        tail = {m: c for m, c in rule.terms.items() if m != rule.lm}
        tail = _reduce_terms(tail, others, key)
        tail[rule.lm] = Fraction(1)
        final.append(_Rule(rule.lm, tail))
    basis = tuple(Polynomial(universe, r.terms) for r in final)
    logger.info(f"Completed {pres.label}: {len(basis)} rules certified to degree {cap}")
    return NormalFormEngine(pres, basis, cap)


# ---------------------------
# Engine
# ---------------------------

@dataclass
class SpectrumSample:
    q_values: dict
    eigen_tuples: list
    max_residual: float
    diagonalizable: bool

    def to_dict(self):
        return {
            "q_values": {k: [v.real, v.imag] for k, v in self.q_values.items()},
            "eigen_tuples": [[[z.real, z.imag] for z in t] for t in self.eigen_tuples],
            "max_residual": self.max_residual,
            "diagonalizable": self.diagonalizable,
        }


@dataclass
class SpectrumReport:
    label: str
    generators: list
    samples: list
    max_residual: float
    tol: float
    passed: bool
    notes: list = field(default_factory=list)

    def to_dict(self):
        return {
            "label": self.label,
            "generators": self.generators,
            "samples": [s.to_dict() for s in self.samples],
            "max_residual": self.max_residual,
            "tol": self.tol,
            "pass": self.passed,
            "notes": self.notes,
        }


@dataclass
class MultiplicationMatrix:
    """Column j holds the expansion of x * basis[j] in the basis, entries q-polynomials."""
    factor: Polynomial
    basis: list
    entries: list

    def to_numeric(self, q_point):
        size = len(self.basis)
        out = np.zeros((size, size), dtype=complex)
        for i in range(size):
            for j in range(size):
                entry = self.entries[i][j]
                if entry:
                    out[i, j] = complex(entry.evaluate(q_point))
        return out

    def to_dict(self):
        return {
            "factor": str(self.factor),
            "basis": self.basis,
            "entries": [[str(e) for e in row] for row in self.entries],
        }


class NormalFormEngine:
    """Canonical representatives modulo a completed relation ideal."""

    def __init__(self, presentation, completed_basis, degree_cap):
        self.presentation = presentation
        self.completed_basis = completed_basis
        self.degree_cap = degree_cap
        self._rules = [_Rule(g.leading_monomial(), g.terms) for g in completed_basis]
        self._classical = None

    @property
    def universe(self):
        return self.presentation.universe

    @property
    def label(self):
        return self.presentation.label

    def with_cap(self, degree_cap):
        """A fresh completion of the same presentation to a higher cap."""
        logger.info(f"Raising degree cap of {self.label} from {self.degree_cap} to {degree_cap}")
        return complete(self.presentation, degree_cap)

    def _check(self, p):
        if p.universe != self.universe:
            raise StructuralError(f"Polynomial {p} does not live in the universe of {self.label}")
        degree = p.degree()
        if degree is not None and degree > self.degree_cap:
            raise DegreeCapError(
                f"Degree {degree} exceeds the certified cap {self.degree_cap} of {self.label}")

    def normal_form(self, p):
        self._check(p)
        return Polynomial(self.universe, _reduce_terms(p.terms, self._rules, self.universe.sort_key))

    def ideal_membership(self, p):
        return self.normal_form(p).is_zero()

    def is_standard(self, exps):
        return not any(monomial_divides(r.lm, exps) for r in self._rules)

    def monomial_basis(self, degree):
        """Standard monomials of the given weighted degree (q-monomials included)."""
        if degree > self.degree_cap:
            raise DegreeCapError(f"Degree {degree} exceeds the certified cap {self.degree_cap} of {self.label}")
        return [m for m in self.universe.monomials_of_degree(degree) if self.is_standard(m)]

    def classical_basis(self):
        """
        The q-free standard monomials, i.e. the lifted cohomology basis, in
        ascending degree. Raises BasisLiftError unless the cap is high enough to
        show that no standard monomial exists above the top degree.
        """
        if self._classical is not None:
            return list(self._classical)
        generators = self.universe.generators
        found = []
        for degree in range(0, self.degree_cap + 1, 2):
            found.extend(sorted(
                (m for m in self.universe.monomials_of_degree(degree, generators) if self.is_standard(m)),
                key=self.universe.sort_key))
        if not found:
            raise BasisLiftError(f"{self.label}: no standard monomials at all")
        top = max(self.universe.weighted_degree(m) for m in found)
        widest = max(self.universe.degree_of(n) for n in generators)
        if self.degree_cap - top < widest:
            raise BasisLiftError(
                f"{self.label}: cap {self.degree_cap} too small to certify a finite basis (top degree {top})")
        self._classical = found
        return list(found)

    def graded_dimensions(self):
        """{degree: count} of the classical basis."""
        counts = {}
        for m in self.classical_basis():
            d = self.universe.weighted_degree(m)
            counts[d] = counts.get(d, 0) + 1
        return dict(sorted(counts.items()))

    def top_degree(self):
        return max(self.graded_dimensions())

    def top_monomial(self):
        top = self.top_degree()
        tops = [m for m in self.classical_basis() if self.universe.weighted_degree(m) == top]
        if len(tops) != 1:
            raise BasisLiftError(f"{self.label}: top degree {top} is {len(tops)}-dimensional")
        return tops[0]

    def _split(self, exps):
        """(generator part, q part) of an exponent tuple."""
        gen, qs = [], []
        for n, e in zip(self.universe.names, exps):
            quantum = n in self.universe.quantum
            gen.append(0 if quantum else e)
            qs.append(e if quantum else 0)
        return tuple(gen), tuple(qs)

    def by_basis_monomial(self, p):
        """Group the normal form of p as {classical standard monomial: q-polynomial}."""
        grouped = {}
        for exps, coeff in self.normal_form(p).terms.items():
            gen, qs = self._split(exps)
            grouped.setdefault(gen, {})[qs] = coeff
        return {m: Polynomial(self.universe, t) for m, t in grouped.items()}

    def top_class_coefficient(self, p, top_class):
        """
        The pairing <p, M>: the q-polynomial coefficient of the top standard
        monomial in NF(p), normalized so that <top_class, M> = 1.
        """
        m_top = self.top_monomial()
        scale = self.normal_form(top_class).coefficient(m_top)
        if scale == 0:
            raise BasisLiftError(f"{self.label}: {top_class} does not represent the top class")
        value = self.by_basis_monomial(p).get(m_top, Polynomial.zero(self.universe))
        return value / scale

    def q_monomials(self, degree):
        if not self.universe.quantum:
            return [self.universe.unit()] if degree == 0 else []
        return self.universe.monomials_of_degree(degree, self.universe.quantum)

    def expand(self, p, lifts):
        """
        Express p as sum of q-polynomial * lift, solving exactly degree by degree.

        `lifts` is a list of (name, Polynomial) pairs. Returns {name: q-polynomial},
        omitting zero coefficients. Raises BasisLiftError when the lifts are
        dependent or do not span the needed piece.
        """
        target = self.normal_form(p)
        if target.is_zero():
            return {}
        degree = p.degree()
        bad = target.homogeneity_violation()
        if bad is not None:
            raise BasisLiftError(f"Cannot expand non-homogeneous {p}")
        columns = []
        for name, lift in lifts:
            d = degree - lift.degree()
            for qm in self.q_monomials(d):
                image = self.normal_form(lift * Polynomial.monomial(self.universe, qm))
                columns.append((name, qm, image))
        if not columns:
            raise BasisLiftError(f"{self.label}: no lift can reach degree {degree} (element {p})")
        monomials = sorted({m for _, _, image in columns for m in image.terms} | set(target.terms),
                           key=self.universe.sort_key, reverse=True)
        row_of = {m: i for i, m in enumerate(monomials)}
        A = sympy.zeros(len(monomials), len(columns))
        b = sympy.zeros(len(monomials), 1)
        for j, (_, _, image) in enumerate(columns):
            for m, c in image.terms.items():
                A[row_of[m], j] = sympy.Rational(c.numerator, c.denominator)
        for m, c in target.terms.items():
            b[row_of[m], 0] = sympy.Rational(c.numerator, c.denominator)
        if A.rank() < len(columns):
            raise BasisLiftError(f"{self.label}: lifted basis is dependent in degree {degree}")
        try:
            solution, _ = A.gauss_jordan_solve(b)
        except ValueError:
            raise BasisLiftError(f"{self.label}: lifted basis does not span degree {degree} (element {p})")
        result = {}
        for (name, qm, _), value in zip(columns, solution):
            value = sympy.Rational(value)
            if value != 0:
                term = Polynomial.monomial(self.universe, qm, Fraction(int(value.p), int(value.q)))
                result[name] = result.get(name, Polynomial.zero(self.universe)) + term
        return result

    def multiplication_matrix(self, x, lifts=None):
        """Matrix of multiplication by x on the lifted basis (standard monomials by default)."""
        if lifts is None:
            lifts = [(self.universe.monomial_str(m), Polynomial.monomial(self.universe, m))
                     for m in self.classical_basis()]
        names = [name for name, _ in lifts]
        entries = [[Polynomial.zero(self.universe) for _ in lifts] for _ in lifts]
        for j, (_, lift) in enumerate(lifts):
            product = x * lift
            if product.degree() is not None and product.degree() > self.degree_cap:
                raise BasisLiftError(f"{self.label}: x * {lift} exceeds the cap {self.degree_cap}")
            for name, coeff in self.expand(product, lifts).items():
                entries[names.index(name)][j] = coeff
        return MultiplicationMatrix(x, names, entries)

    def relation_evaluators(self):
        names = list(self.universe.names)
        return [numeric_evaluator(r, names) for r in self.presentation.relations]

    def random_q_samples(self, count, seed=DEFAULT_SEED):
        """Random nonzero complex values for the quantum parameters."""
        rng = np.random.default_rng(seed)
        samples = []
        for _ in range(count):
            radius = rng.uniform(0.5, 2.0, size=len(self.universe.quantum))
            angle = rng.uniform(0.0, 2 * np.pi, size=len(self.universe.quantum))
            samples.append(tuple(complex(v) for v in radius * np.exp(1j * angle)))
        return samples

    def spectrum_check(self, q_values, tol=SPECTRUM_RESIDUAL, seed=DEFAULT_SEED):
        """
        At each q sample, diagonalize the commuting multiplication operators of
        the ring generators, read off joint eigenvalue tuples and substitute them
        into every relation. Samples where the operators cannot be diagonalized
        are noted and skipped; the check needs at least one usable sample.
        """
        generators = list(self.universe.generators)
        matrices = [self.multiplication_matrix(Polynomial.variable(self.universe, g)) for g in generators]
        evaluators = self.relation_evaluators()
        rng = np.random.default_rng(seed)
        samples = []
        notes = []
        worst = 0.0
        for values in q_values:
            values = tuple(values)
            if len(values) != len(self.universe.quantum) or any(v == 0 for v in values):
                raise StructuralError(f"Need {len(self.universe.quantum)} nonzero q-values, got {values}")
            q_point = dict(zip(self.universe.quantum, values))
            numeric = [m.to_numeric(q_point) for m in matrices]
            weights = rng.normal(size=len(numeric)) + 1j * rng.normal(size=len(numeric))
            combined = sum(w * m for w, m in zip(weights, numeric))
            _, vectors = np.linalg.eig(combined)
            diagonalizable = bool(np.linalg.cond(vectors) < 1e8)
            if not diagonalizable:
                notes.append(f"multiplication not diagonalizable at q={values}")
                logger.warning(f"{self.label}: multiplication not diagonalizable at q={values}")
                samples.append(SpectrumSample(q_point, [], float("nan"), False))
                continue
            inverse = np.linalg.inv(vectors)
            joint = np.array([np.diag(inverse @ m @ vectors) for m in numeric]).T
            points = []
            for row in joint:
                point = dict(zip(generators, row))
                point.update(q_point)
                points.append([point[n] for n in self.universe.names])
            points = np.array(points)
            residual = max((float(np.max(np.abs(ev(points)))) for ev in evaluators), default=0.0)
            worst = max(worst, residual)
            samples.append(SpectrumSample(q_point, [tuple(complex(z) for z in row) for row in joint],
                                          residual, True))
        # non-diagonalizable samples stay in the report but do not fail it
        checked = [s for s in samples if s.diagonalizable]
        passed = bool(checked) and worst < tol
        logger.info(f"Spectrum check {self.label}: max residual {worst:.3e} over {len(samples)} samples")
        return SpectrumReport(self.label, generators, samples, worst, tol, passed, notes)

    def to_dict(self):
        data = {
            "presentation": self.presentation.to_dict(),
            "degree_cap": self.degree_cap,
            "completed_basis": [str(g) for g in self.completed_basis],
        }
        try:
            basis = self.classical_basis()
            data["basis"] = [self.universe.monomial_str(m) for m in basis]
            data["graded_dimensions"] = {str(d): c for d, c in self.graded_dimensions().items()}
        except BasisLiftError as e:
            data["basis_error"] = str(e)
        return data
