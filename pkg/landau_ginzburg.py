#!/usr/bin/env python3
"""
Landau-Ginzburg potentials for Grassmannians.

P = w_{n+1} is the (n+1)-st coefficient of log(1 + c1 t + ... + ck t^k),
so that dP/dc_i = s_{n+1-i}; the quantum potential adds (-1)^{n-k} c1 q.
Critical points of the quantum potential are found numerically and feed
the residue sum  sum T(x)/h(x)  compared against intersection numbers
computed in the classical ring.
"""

import logging
from dataclasses import dataclass, field
from itertools import product
from math import comb

import numpy as np

from algebra_core import Polynomial, numeric_evaluator, series_log
from config import (
    ROOT_RESIDUAL, DUPLICATE_ROOT_DISTANCE, NEWTON_MAX_ITER,
    SEED_RADII, SEED_ANGLES, DEFAULT_SEED, RESIDUE_INTEGER_TOL,
)
from space_presentations import grassmannian_universe, chern_series, special_classes, space_engine
from schubert import point_class

logger = logging.getLogger(__name__)

MAX_SEEDS = 4000


class RootCountError(ValueError):
    """Newton multistart did not find the expected number of critical points."""


class DegenerateCriticalPointError(ValueError):
    """A critical point has a vanishing Hessian determinant."""


class ResidueError(ValueError):
    """Residue sum inputs outside the precondition (e.g. T of the wrong degree)."""


@dataclass(frozen=True)
class Potential:
    body: Polynomial
    k: int
    n: int
    quantum: bool

    @property
    def universe(self):
        return self.body.universe

    @property
    def coordinates(self):
        return [f"c{i}" for i in range(1, self.k + 1)]

    def to_dict(self):
        return {
            "space": f"gr:{self.k}:{self.n}",
            "quantum": self.quantum,
            "potential": str(self.body),
            "terms": self.body.to_json(),
        }


@dataclass
class CriticalPoint:
    coordinates: tuple
    residual: float
    hessian_det: complex

    def to_dict(self):
        return {
            "coordinates": [[z.real, z.imag] for z in self.coordinates],
            "residual": self.residual,
            "hessian_det": [self.hessian_det.real, self.hessian_det.imag],
        }


def potential(k, n, quantum=False):
    """P = w_{n+1}; the quantum flag appends (-1)^{n-k} c1 q."""
    universe = grassmannian_universe(k, n, quantum)
    body = series_log(chern_series(universe, k, n + 1))[n + 1]
    if quantum:
        body = body + Polynomial.variable(universe, "c1") * Polynomial.variable(universe, "q") * (-1) ** (n - k)
    return Potential(body, k, n, quantum)


@dataclass
class GradientReport:
    space: str
    quantum: bool
    components: list
    passed: bool

    def to_dict(self):
        return {"space": self.space, "quantum": self.quantum, "components": self.components, "pass": self.passed}


def check_gradient(pot):
    """
    dP/dc_i must equal s_{n+1-i} from series inversion; for the quantum
    potential the c1 component also carries (-1)^{n-k} q, i.e. the gradient
    reproduces the quantum relations.
    """
    k, n = pot.k, pot.n
    s = special_classes(pot.universe, k, n + 1)
    components = []
    for i in range(1, k + 1):
        expected = s[n + 1 - i]
        if pot.quantum and i == 1:
            expected = expected + Polynomial.variable(pot.universe, "q") * (-1) ** (n - k)
        actual = pot.body.diff(f"c{i}")
        components.append({
            "variable": f"c{i}",
            "derivative": str(actual),
            "expected": str(expected),
            "relation": f"f{n + 1 - i}",
            "match": actual == expected,
        })
    passed = all(c["match"] for c in components)
    if not passed:
        logger.warning(f"Gradient of gr:{k}:{n} potential does not reproduce the relations")
    return GradientReport(f"gr:{k}:{n}", pot.quantum, components, passed)


def _derivative_evaluators(pot, q_value):
    names = pot.coordinates + (["q"] if pot.quantum else [])
    grads = [pot.body.diff(c) for c in pot.coordinates]
    hess = [[g.diff(c) for c in pot.coordinates] for g in grads]

    def bind(poly):
        f = numeric_evaluator(poly, names)
        if not pot.quantum:
            return f
        return lambda x: f(np.concatenate([x, np.full(x.shape[:-1] + (1,), q_value, dtype=complex)], axis=-1))

    return [bind(g) for g in grads], [[bind(h) for h in row] for row in hess]


def _seed_grid(k, n, q_value, seed):
    """Polar grid per coordinate, scaled so c_i ~ |q|^{i/n}, plus deterministic jitter."""
    rng = np.random.default_rng(seed)
    r0 = abs(q_value) ** (1.0 / n) if q_value else 1.0
    ring = [r * np.exp(2j * np.pi * (a + 0.5) / SEED_ANGLES) for r in SEED_RADII for a in range(SEED_ANGLES)]
    grid = np.array([[z * r0 ** (i + 1) for i, z in enumerate(combo)] for combo in product(ring, repeat=k)])
    if len(grid) > MAX_SEEDS:
        grid = grid[rng.choice(len(grid), MAX_SEEDS, replace=False)]
    jitter = 0.05 * (rng.normal(size=grid.shape) + 1j * rng.normal(size=grid.shape))
    return grid * (1 + jitter)


def hessian_det(pot, point, q_value=1.0):
    """det(d^2 P / dc_i dc_j) at a numeric point."""
    _, hess = _derivative_evaluators(pot, q_value)
    x = np.asarray(point, dtype=complex)
    matrix = np.array([[h(x) for h in row] for row in hess])
    return complex(np.linalg.det(matrix))


def hessian_matrix(pot):
    """The symbolic Hessian as a list of rows of Polynomials."""
    return [[pot.body.diff(a).diff(b) for b in pot.coordinates] for a in pot.coordinates]


def critical_points(pot, q_value=1.0, tol=ROOT_RESIDUAL, seed=DEFAULT_SEED, expected=None):
    """
    Solve dP = 0 by batched Newton from a deterministic seed grid.

    Raises RootCountError when the number of distinct roots differs from
    `expected` (default C(n, k)).
    """
    if pot.quantum and q_value == 0:
        raise ResidueError("critical points need a nonzero q")
    k, n = pot.k, pot.n
    expected = comb(n, k) if expected is None else expected
    grads, hess = _derivative_evaluators(pot, q_value)
    x = _seed_grid(k, n, q_value, seed)

    with np.errstate(all="ignore"):
        for _ in range(NEWTON_MAX_ITER):
            f = np.stack([g(x) for g in grads], axis=-1)
            jac = np.stack([np.stack([h(x) for h in row], axis=-1) for row in hess], axis=-2)
            step = np.einsum("sij,sj->si", np.linalg.pinv(jac), f)
            x = x - step
            x[~np.isfinite(x).all(axis=1)] = 0
        f = np.stack([g(x) for g in grads], axis=-1)
        residual = np.max(np.abs(f), axis=1)

    accepted = x[np.isfinite(residual) & (residual < tol)]
    roots = []
    for candidate in sorted(accepted.tolist(), key=lambda z: [(round(c.real, 9), round(c.imag, 9)) for c in z]):
        candidate = np.array(candidate)
        if all(np.max(np.abs(candidate - r)) > DUPLICATE_ROOT_DISTANCE for r in roots):
            roots.append(candidate)

    points = []
    for r in roots:
        f = np.array([g(r) for g in grads])
        matrix = np.array([[h(r) for h in row] for row in hess])
        points.append(CriticalPoint(tuple(complex(z) for z in r), float(np.max(np.abs(f))),
                                    complex(np.linalg.det(matrix))))
    logger.info(f"gr:{k}:{n} at q={q_value}: {len(points)} critical points from {len(x)} seeds")
    if len(points) != expected:
        raise RootCountError(f"gr:{k}:{n} at q={q_value}: found {len(points)} critical points, expected {expected}")
    return points


@dataclass
class ResidueReport:
    space: str
    T: str
    q_value: complex
    roots: list
    total: complex
    rounded: int
    oracle: object
    match: bool
    passed: bool
    notes: list = field(default_factory=list)

    def to_dict(self):
        return {
            "space": self.space,
            "T": self.T,
            "q": [self.q_value.real, self.q_value.imag],
            "roots": [r.to_dict() for r in self.roots],
            "hessians": [[r.hessian_det.real, r.hessian_det.imag] for r in self.roots],
            "sum": [self.total.real, self.total.imag],
            "rounded": self.rounded,
            "oracle": str(self.oracle),
            "match": self.match,
            "pass": self.passed,
            "notes": self.notes,
        }


def intersection_number(k, n, T):
    """<T> on Gr_k(C^n): top-class coefficient of T in the classical ring."""
    engine = space_engine(f"gr:{k}:{n}", False)
    T = T.convert(engine.universe)
    return engine.top_class_coefficient(T, point_class(k, n, engine.universe)).coefficient(engine.universe.unit())


def vafa_intriligator(k, n, T, q_value=1.0, tol=RESIDUE_INTEGER_TOL, seed=DEFAULT_SEED, root_tol=ROOT_RESIDUAL):
    """
    Residue sum of T/h over the critical points of the quantum potential,
    compared in absolute value with the classical intersection number.
    """
    q_value = complex(q_value)
    classical_universe = grassmannian_universe(k, n, quantum=False)
    T = T.convert(classical_universe)
    top = 2 * k * (n - k)
    if T.is_zero() or not T.is_homogeneous() or T.degree() != top:
        raise ResidueError(f"T = {T} must be homogeneous of degree {top} on gr:{k}:{n}")
    pot = potential(k, n, quantum=True)
    notes = []
    roots = critical_points(pot, q_value, tol=root_tol, seed=seed)
    degenerate = [r for r in roots if abs(r.hessian_det) < 1e-9]
    if degenerate:
        raise DegenerateCriticalPointError(
            f"gr:{k}:{n}: {len(degenerate)} critical points with vanishing Hessian at q={q_value}")
    evaluate_T = numeric_evaluator(T, pot.coordinates)
    total = complex(sum(evaluate_T(np.array(r.coordinates)) / r.hessian_det for r in roots))
    rounded = int(round(total.real))
    integral = abs(total - rounded) < tol
    if not integral:
        notes.append(f"sum {total} is not within {tol} of an integer")
    oracle = intersection_number(k, n, T)
    match = integral and abs(rounded) == abs(oracle)
    logger.info(f"Residue sum for {T} on gr:{k}:{n}: {total:.6g} (oracle {oracle})")
    return ResidueReport(f"gr:{k}:{n}", str(T), q_value, roots, total, rounded, oracle, match, match, notes)
