#!/usr/bin/env python3
"""
Poisson brackets on the cotangent chart (p_i, q_i), Lagrangian checks of
relation ideals, and the three-site open Toda lattice whose conserved
quantities become the flag-manifold quantum relations.
"""

import logging
from dataclasses import dataclass, field
from itertools import product

import numpy as np
import sympy

from algebra_core import Polynomial, Universe, StructuralError, exact_quotient
from config import INTEGRATOR_DRIFT
from quotient_ring import DegreeCapError, complete
from space_presentations import flag3_raw_relations

logger = logging.getLogger(__name__)

TRACE_TOLERANCE = 1e-12
# second-order form: d^2 u / dt^2 = K exp(u) with u_i = log a_i
TODA_K = np.array([[-2.0, 1.0], [1.0, -2.0]])


class IntegrationError(ValueError):
    """RK4 left the region a_i > 0."""

    def __init__(self, step, state):
        self.step = step
        self.state = state
        super().__init__(f"a_i <= 0 at step {step} (state {state}); dt is too large")


# ---------------------------
# Poisson bracket and Lagrangian conditions
# ---------------------------

@dataclass(frozen=True)
class SymplecticChart:
    p: tuple
    q: tuple

    def __post_init__(self):
        if len(self.p) != len(self.q):
            raise StructuralError("Chart needs as many p-coordinates as q-coordinates")
        if set(self.p) & set(self.q):
            raise StructuralError(f"p and q coordinates overlap: {set(self.p) & set(self.q)}")

    @classmethod
    def from_pairs(cls, pairs):
        return cls(tuple(p for p, _ in pairs), tuple(q for _, q in pairs))

    @property
    def rank(self):
        return len(self.p)

    def variables(self):
        return set(self.p) | set(self.q)


def poisson_bracket(f, g, chart):
    """{f, g} = -sum_i q_i (df/dp_i dg/dq_i - dg/dp_i df/dq_i)."""
    outside = (set(f.variables()) | set(g.variables())) - chart.variables()
    if outside:
        raise StructuralError(f"Variables {sorted(outside)} are outside the chart")
    result = Polynomial.zero(f.universe)
    for p, q in zip(chart.p, chart.q):
        qi = Polynomial.variable(f.universe, q)
        result = result - qi * (f.diff(p) * g.diff(q) - g.diff(p) * f.diff(q))
    return result


def describe_multiple(bracket, named_relations):
    """Render a bracket as '0', 'm*R_j' when some relation divides it, or its own text."""
    if bracket.is_zero():
        return "0"
    for name, rel in named_relations:
        quotient = exact_quotient(bracket, rel)
        if quotient is not None:
            factor = str(quotient)
            if len(quotient.terms) > 1:
                factor = f"({factor})"
            return name if factor == "1" else f"{factor}*{name}"
    return str(bracket)


@dataclass
class LagrangianReport:
    label: str
    brackets: list
    L1: bool
    L2: bool
    notes: list = field(default_factory=list)

    @property
    def bracket(self):
        """Single summary when there is exactly one pair of relations."""
        if len(self.brackets) == 1:
            return self.brackets[0]["description"]
        return None

    def to_dict(self):
        data = {"label": self.label, "L1": self.L1, "L2": self.L2, "brackets": self.brackets, "notes": self.notes}
        if self.bracket is not None:
            data["bracket"] = self.bracket
        return data


def _relation_brackets(pres, chart):
    if len(pres.relations) != chart.rank:
        raise StructuralError(f"{pres.label}: {len(pres.relations)} relations in a rank-{chart.rank} chart")
    named = pres.named_relations()
    out = []
    for i in range(len(named)):
        for j in range(i + 1, len(named)):
            (a, ra), (b, rb) = named[i], named[j]
            out.append((a, b, poisson_bracket(ra, rb, chart)))
    return out


def check_L1(pres, chart, engine=None):
    """Every pairwise bracket of relations lies in the ideal (cap raised at most once)."""
    engine = engine or complete(pres)
    named = pres.named_relations()
    rows = []
    notes = []
    raised = False
    for a, b, bracket in _relation_brackets(pres, chart):
        degree = bracket.degree() or 0
        if degree > engine.degree_cap:
            if raised:
                raise DegreeCapError(f"Bracket {{{a},{b}}} of degree {degree} exceeds the cap {engine.degree_cap}")
            raised = True
            notes.append(f"degree cap raised from {engine.degree_cap} to {degree}")
            engine = engine.with_cap(degree)
        rows.append({
            "pair": [a, b],
            "bracket": str(bracket),
            "description": describe_multiple(bracket, named),
            "member": engine.ideal_membership(bracket),
            "zero": bracket.is_zero(),
        })
    holds = all(r["member"] for r in rows)
    logger.info(f"L1 for {pres.label}: {holds}")
    return LagrangianReport(pres.label, rows, holds, all(r["zero"] for r in rows), notes)


def check_L2(pres, chart):
    """Every pairwise bracket of relations is literally zero."""
    rows = []
    named = pres.named_relations()
    for a, b, bracket in _relation_brackets(pres, chart):
        rows.append({
            "pair": [a, b],
            "bracket": str(bracket),
            "description": describe_multiple(bracket, named),
            "zero": bracket.is_zero(),
        })
    holds = all(r["zero"] for r in rows)
    return LagrangianReport(pres.label, rows, None, holds)


# ---------------------------
# Toda lattice
# ---------------------------

@dataclass(frozen=True)
class TodaState:
    a1: float
    a2: float
    b1: float
    b2: float
    b3: float

    @classmethod
    def initial(cls, a, b):
        """Validated starting point: a_i > 0 and b1 + b2 + b3 = 0."""
        state = cls(float(a[0]), float(a[1]), float(b[0]), float(b[1]), float(b[2]))
        if state.a1 <= 0 or state.a2 <= 0:
            raise StructuralError(f"Toda state needs a_i > 0, got a = {tuple(a)}")
        if abs(state.trace) > TRACE_TOLERANCE:
            raise StructuralError(f"Toda state needs b1 + b2 + b3 = 0, got {state.trace}")
        return state

    @classmethod
    def from_array(cls, values):
        return cls(*(float(v) for v in values))

    def as_array(self):
        return np.array([self.a1, self.a2, self.b1, self.b2, self.b3])

    @property
    def trace(self):
        return self.b1 + self.b2 + self.b3

    def to_dict(self):
        return {"a": [self.a1, self.a2], "b": [self.b1, self.b2, self.b3]}


def _field(y):
    a1, a2, b1, b2, b3 = y
    return np.array([a1 * (b1 - b2), a2 * (b2 - b3), -a1, a1 - a2, a2])


def toda_vector_field(state):
    """(da1, da2, db1, db2, db3)/dt."""
    return tuple(float(v) for v in _field(state.as_array()))


def lax_matrices(state):
    X = np.array([[state.b1, state.a1, 0.0], [1.0, state.b2, state.a2], [0.0, 1.0, state.b3]])
    Y = np.array([[0.0, state.a1, 0.0], [0.0, 0.0, state.a2], [0.0, 0.0, 0.0]])
    return X, Y


def lax_derivative(state):
    """[X, Y], which equals dX/dt along the flow."""
    X, Y = lax_matrices(state)
    return X @ Y - Y @ X


def velocity_matrix(state):
    """dX/dt assembled from the vector field."""
    da1, da2, db1, db2, db3 = toda_vector_field(state)
    return np.array([[db1, da1, 0.0], [0.0, db2, da2], [0.0, 0.0, db3]])


def toda_universe():
    return Universe.build([("b1", 2), ("b2", 2), ("b3", 2), ("a1", 4), ("a2", 4)])


def characteristic_coefficients():
    """
    Coefficients of det(X + lam I) at lam^2, lam^1, lam^0 as polynomials in
    a and b: the trace, g and h.
    """
    universe = toda_universe()
    a1, a2, b1, b2, b3, lam = sympy.symbols("a1 a2 b1 b2 b3 lam")
    X = sympy.Matrix([[b1, a1, 0], [1, b2, a2], [0, 1, b3]])
    char = sympy.Poly(sympy.expand((X + lam * sympy.eye(3)).det()), lam)
    return tuple(Polynomial.from_sympy(char.coeff_monomial(lam ** d), universe) for d in (2, 1, 0))


def conserved_quantities(state):
    """g = b1b2 + b2b3 + b3b1 - a1 - a2 and h = b1b2b3 - b3a1 - b1a2."""
    a1, a2, b1, b2, b3 = state.as_array()
    g = b1 * b2 + b2 * b3 + b3 * b1 - a1 - a2
    h = b1 * b2 * b3 - b3 * a1 - b1 * a2
    return float(g), float(h)


def _conserved_arrays(states):
    a1, a2, b1, b2, b3 = states.T
    return b1 * b2 + b2 * b3 + b3 * b1 - a1 - a2, b1 * b2 * b3 - b3 * a1 - b1 * a2


@dataclass
class Trajectory:
    times: np.ndarray
    states: np.ndarray
    dt: float

    def state(self, i):
        return TodaState.from_array(self.states[i])


def toda_integrate(s0, t_end, dt):
    """Fixed-step RK4 from s0 to t_end; every step is kept."""
    if dt <= 0:
        raise StructuralError(f"dt must be positive, got {dt}")
    steps = int(round(t_end / dt))
    y = s0.as_array()
    states = np.empty((steps + 1, 5))
    states[0] = y
    for i in range(1, steps + 1):
        k1 = _field(y)
        k2 = _field(y + 0.5 * dt * k1)
        k3 = _field(y + 0.5 * dt * k2)
        k4 = _field(y + dt * k3)
        y = y + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        if y[0] <= 0 or y[1] <= 0:
            raise IntegrationError(i, tuple(y))
        states[i] = y
    logger.info(f"Integrated Toda lattice: {steps} RK4 steps of {dt}")
    return Trajectory(np.arange(steps + 1) * dt, states, dt)


def _spectra(states):
    """Eigenvalues of X along the trajectory via the symmetric tridiagonal form."""
    a1, a2, b1, b2, b3 = states.T
    sym = np.zeros((len(states), 3, 3))
    sym[:, 0, 0], sym[:, 1, 1], sym[:, 2, 2] = b1, b2, b3
    sym[:, 0, 1] = sym[:, 1, 0] = np.sqrt(a1)
    sym[:, 1, 2] = sym[:, 2, 1] = np.sqrt(a2)
    return np.linalg.eigvalsh(sym)


@dataclass
class DriftReport:
    g0: float
    h0: float
    g_drift: float
    h_drift: float
    trace_drift: float
    spectrum_drift: float
    tol: float
    passed: bool
    final_state: dict
    convergence_ratio: float = None

    def to_dict(self):
        data = {
            "g0": self.g0, "h0": self.h0,
            "g_drift": self.g_drift, "h_drift": self.h_drift,
            "trace_drift": self.trace_drift, "spectrum_drift": self.spectrum_drift,
            "tol": self.tol, "pass": self.passed, "final_state": self.final_state,
        }
        if self.convergence_ratio is not None:
            data["convergence_ratio"] = self.convergence_ratio
        return data


def drift_report(trajectory, tol=INTEGRATOR_DRIFT):
    g, h = _conserved_arrays(trajectory.states)
    spectra = _spectra(trajectory.states)
    g_drift = float(np.max(np.abs(g - g[0])))
    h_drift = float(np.max(np.abs(h - h[0])))
    trace_drift = float(np.max(np.abs(trajectory.states[:, 2:].sum(axis=1))))
    spectrum_drift = float(np.max(np.abs(spectra - spectra[0])))
    passed = max(g_drift, h_drift, spectrum_drift) < tol and trace_drift < TRACE_TOLERANCE
    return DriftReport(float(g[0]), float(h[0]), g_drift, h_drift, trace_drift, spectrum_drift,
                       tol, passed, trajectory.state(-1).to_dict())


def convergence_ratio(s0, t_end, dt):
    """Max g/h drift at dt divided by the drift at dt/2 (about 16 for RK4)."""
    coarse = drift_report(toda_integrate(s0, t_end, dt))
    fine = drift_report(toda_integrate(s0, t_end, dt / 2))
    return max(coarse.g_drift, coarse.h_drift) / max(fine.g_drift, fine.h_drift)


def toda_second_order(state):
    """
    (u, du/dt, d^2u/dt^2) with u_i = log a_i; d^2u/dt^2 is read off the
    first-order field and should equal K exp(u).
    """
    a1, a2, b1, b2, b3 = state.as_array()
    _, _, db1, db2, db3 = toda_vector_field(state)
    u = np.log([a1, a2])
    du = np.array([b1 - b2, b2 - b3])
    ddu = np.array([db1 - db2, db2 - db3])
    return u, du, ddu


def second_order_residual(state):
    u, _, ddu = toda_second_order(state)
    return float(np.max(np.abs(ddu - TODA_K @ np.exp(u))))


# ---------------------------
# Toda / flag-manifold identification
# ---------------------------

@dataclass
class IdentificationReport:
    holds: bool
    substitution: dict
    images: dict
    sign_matches: list

    def to_dict(self):
        return {"holds": self.holds, "substitution": self.substitution,
                "images": self.images, "sign_matches": self.sign_matches}


def substitute_conserved(signs=(-1, -1)):
    """Images of (trace, g, h) under b_i -> x_i, a_i -> sign_i * q_i in the raw flag universe."""
    target = flag3_raw_relations(quantum=True).universe
    mapping = {f"b{i}": Polynomial.variable(target, f"x{i}") for i in (1, 2, 3)}
    for i, sign in zip((1, 2), signs):
        mapping[f"a{i}"] = Polynomial.variable(target, f"q{i}") * sign
    return tuple(c.substitute(mapping, target) for c in characteristic_coefficients())


def toda_matches_flag_relations():
    """
    Search the sign maps a_i -> +-q_i for the one sending (trace, g, h) onto
    (sigma1, R1, R2) of the flag manifold; holds iff exactly a_i = -q_i works.
    """
    raw = flag3_raw_relations(quantum=True).relations
    matches = []
    for signs in product((1, -1), repeat=2):
        if substitute_conserved(signs) == tuple(raw):
            matches.append(list(signs))
    trace, g, h = substitute_conserved((-1, -1))
    holds = matches == [[-1, -1]]
    logger.info(f"Toda/flag identification sign matches: {matches}")
    return IdentificationReport(
        holds,
        {"b1": "x1", "b2": "x2", "b3": "x3", "a1": "-q1", "a2": "-q2"},
        {"trace": str(trace), "g": str(g), "h": str(h)},
        matches,
    )
