"""Derivative-free searches over fractional-mode parameter space.

Covers the aligned-step violation functions and their transcendental
stationarity condition, multi-start simplex maximization of named witness
objectives, the lower-envelope boundary trace in the (r_ab, r_ac) plane
under r_ab = r_bc, and the two integer-OAM reference families.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import bisect, minimize, minimize_scalar
from scipy.stats import qmc

from .frac_modes import CoeffState, coeff_overlap
from .lg_basis import LgIndex
from .overlaps import overlap_sq_equal_ell, sinc, step_overlap_sq
from .witnesses import OverlapTriple, witness_distance_classical, witness_distance_qubit

__all__ = [
    "SearchProblem",
    "SearchResult",
    "BoundaryCurve",
    "violation_functions",
    "solve_transcendental",
    "maximize",
    "default_budget",
    "trace_boundary",
    "scenario_integer_families",
]

TWO_PI = 2.0 * np.pi

OBJECTIVES = ("F1", "F2", "F3", "h_n", "W_c", "W_D")


def violation_functions(x: float, y: float) -> tuple[float, float, float]:
    """The three aligned-step violation combinations (F1, F2, F3).

    For three charges with gaps x = (l_a - l_b) pi and y = (l_b - l_c) pi
    and aligned step directions, the pairwise overlaps are sinc^2 of the
    gaps and the classical inequalities read F_i(x, y) <= 1 with

        F1 = -sinc^2 x + sinc^2(x+y) + sinc^2 y
        F2 = +sinc^2 x - sinc^2(x+y) + sinc^2 y
        F3 = +sinc^2 x + sinc^2(x+y) - sinc^2 y.
    """
    sx = float(sinc(x) ** 2)
    sxy = float(sinc(x + y) ** 2)
    sy = float(sinc(y) ** 2)
    return (-sx + sxy + sy, sx - sxy + sy, sx + sxy - sy)


def _stationarity_residual(x: float) -> float:
    return 4 * x * np.sin(2 * x) - 8 * np.sin(x) ** 2 - x * np.sin(4 * x) + np.sin(2 * x) ** 2


def solve_transcendental() -> float:
    """Root of 4x sin2x - 8 sin^2 x - x sin4x + sin^2 2x = 0 in [0.1 pi, 0.45 pi].

    This is the stationarity condition of F2 along its symmetric ridge
    x = y; the bracketed bisection is solved to 1e-10.
    """
    lo, hi = 0.1 * np.pi, 0.45 * np.pi
    if _stationarity_residual(lo) * _stationarity_residual(hi) >= 0:
        raise RuntimeError("no sign change in the bisection bracket")
    return float(bisect(_stationarity_residual, lo, hi, xtol=1e-10))


# ---------------------------------------------------------------------------
# multi-start bounded maximization
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SearchProblem:
    """A named objective over a box of state parameters.

    parameter_box lists (name, lower, upper).  For state-set objectives the
    convention is [ell_0..ell_{n-1}, alpha_1..alpha_{n-1}] with alpha_0
    pinned to zero (overlaps only see direction differences).
    """

    objective: str
    parameter_box: tuple
    n_states: int = 0

    def __post_init__(self):
        if self.objective not in OBJECTIVES:
            raise ValueError(f"objective must be one of {OBJECTIVES}")
        if not self.parameter_box:
            raise ValueError("parameter box must be non-empty")
        expected = self._expected_dim()
        if expected is not None and len(self.parameter_box) != expected:
            raise ValueError(
                f"objective {self.objective} with n_states={self.n_states} "
                f"needs {expected} parameters, box has {len(self.parameter_box)}"
            )

    def _expected_dim(self):
        if self.objective in ("F1", "F2", "F3"):
            return 2
        if self.objective == "h_n":
            return 2 * self.n_states - 1
        if self.objective in ("W_c", "W_D"):
            return 5
        return None

    @classmethod
    def coherence_violation(cls, which: int = 2) -> "SearchProblem":
        box = (("x", 0.0, np.pi), ("y", 0.0, np.pi))
        return cls(objective=f"F{which}", parameter_box=box)

    @classmethod
    def hn(cls, n_states: int) -> "SearchProblem":
        box = tuple((f"ell{i}", 0.0, 1.0) for i in range(n_states)) + tuple(
            (f"alpha{i}", 0.0, TWO_PI) for i in range(1, n_states)
        )
        return cls(objective="h_n", parameter_box=box, n_states=n_states)

    @classmethod
    def witness_distance(cls, kind: str = "W_c") -> "SearchProblem":
        box = tuple((f"ell{i}", 0.0, 1.0) for i in range(3)) + tuple(
            (f"alpha{i}", 0.0, TWO_PI) for i in range(1, 3)
        )
        return cls(objective=kind, parameter_box=box, n_states=3)


@dataclass(frozen=True)
class SearchResult:
    best_params: np.ndarray
    best_value: float
    evaluations: int
    trace: tuple = field(default=())

    def to_json(self) -> dict:
        return {
            "best_params": [float(v) for v in self.best_params],
            "best_value": self.best_value,
            "evaluations": self.evaluations,
        }


def _state_triple(params) -> OverlapTriple:
    ells = params[:3]
    alphas = np.array([0.0, params[3], params[4]])
    return OverlapTriple(
        float(step_overlap_sq(ells[0], alphas[0], ells[1], alphas[1])),
        float(step_overlap_sq(ells[1], alphas[1], ells[2], alphas[2])),
        float(step_overlap_sq(ells[0], alphas[0], ells[2], alphas[2])),
    )


def _build_objective(problem: SearchProblem):
    name = problem.objective
    if name in ("F1", "F2", "F3"):
        which = int(name[1]) - 1
        return lambda p: violation_functions(p[0], p[1])[which]
    if name == "h_n":
        n = problem.n_states

        def hn_value(p):
            ells = p[:n]
            alphas = np.concatenate([[0.0], p[n:]])
            iu, ju = np.triu_indices(n, k=1)
            vals = step_overlap_sq(ells[iu], alphas[iu], ells[ju], alphas[ju])
            hub = iu == 0
            return float(vals[hub].sum() - vals[~hub].sum())

        return hn_value
    if name == "W_c":
        return lambda p: witness_distance_classical(_state_triple(p).as_array())
    # W_D: coarse inner sampling keeps the objective affordable inside a search
    return lambda p: witness_distance_qubit(
        _state_triple(p).as_array(), samples=41, refine=False
    )


def default_budget(n_params: int) -> int:
    if n_params <= 2:
        return 20_000
    if n_params >= 5:
        return 200_000
    return 100_000


def maximize(problem: SearchProblem, seed: int = 0, budget: int | None = None) -> SearchResult:
    """Multi-start bounded Nelder-Mead maximization of a named objective.

    Latin-hypercube starting points (seeded, so the whole search is
    deterministic in (seed, budget)) each get an equal share of the
    evaluation budget.  Ties in value are broken toward the
    lexicographically smallest parameter vector.
    """
    if budget is None:
        budget = default_budget(len(problem.parameter_box))
    if budget < 1_000:
        raise ValueError("budget must be at least 1e3 evaluations")
    lo = np.array([b[1] for b in problem.parameter_box], dtype=float)
    hi = np.array([b[2] for b in problem.parameter_box], dtype=float)
    dim = lo.size
    objective = _build_objective(problem)

    evals = 0

    def negated(p):
        nonlocal evals
        evals += 1
        return -objective(np.clip(p, lo, hi))

    n_starts = 32
    per_start = max(budget // n_starts, 200)
    starts = lo + qmc.LatinHypercube(d=dim, seed=seed).random(n_starts) * (hi - lo)

    best_value = -np.inf
    best_params = starts[0]
    trace = []
    for x0 in starts:
        res = minimize(
            negated,
            x0,
            method="Nelder-Mead",
            bounds=list(zip(lo, hi)),
            options={"xatol": 1e-8, "fatol": 1e-12, "maxfev": per_start},
        )
        params = np.clip(res.x, lo, hi)
        value = -res.fun
        trace.append((params.copy(), value))
        better = value > best_value + 1e-12
        tie = abs(value - best_value) <= 1e-12 and tuple(params) < tuple(best_params)
        if better or tie:
            best_value = value
            best_params = params
    exact = objective(best_params)
    return SearchResult(best_params, float(exact), evals, tuple(trace))


# ---------------------------------------------------------------------------
# boundary tracing in the r_ab = r_bc plane
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BoundaryCurve:
    """Lower envelope samples (r_ab, r_ac) with r_ab = r_bc enforced."""

    samples: np.ndarray
    family_label: str

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=float)
        if s.ndim != 2 or s.shape[1] != 2:
            raise ValueError("samples must be an (m, 2) array")
        s = s[np.argsort(s[:, 0])]
        object.__setattr__(self, "samples", s)

    def interpolate(self, r_ab) -> np.ndarray:
        return np.interp(r_ab, self.samples[:, 0], self.samples[:, 1])


def _symmetric_ell_floor(target: float) -> float:
    """Minimal r_ac over the equal-charge family at fixed r_ab = r_bc = target.

    States sit at step directions (+beta, 0, -beta) with one common charge,
    so r_ab = r_bc automatically and beta solves the r_ab constraint in
    closed form, leaving a 1-D minimization over the charge.
    """

    def r_ac_of_ell(ell: float) -> float:
        s = np.sin(np.pi * ell) ** 2
        if s < (1.0 - target) - 1e-12:
            return np.inf  # this charge cannot reach so low an r_ab
        disc = np.pi**2 - (1.0 - target) * np.pi**2 / max(s, 1e-300)
        beta = np.pi - np.sqrt(max(disc, 0.0))  # beta in [0, pi], so 2 beta <= 2 pi
        return float(overlap_sq_equal_ell(ell, min(2 * beta, TWO_PI)))

    grid = np.linspace(1e-4, 1.0 - 1e-4, 801)
    vals = np.array([r_ac_of_ell(e) for e in grid])
    i = int(np.argmin(vals))
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, grid.size - 1)]
    res = minimize_scalar(r_ac_of_ell, bounds=(lo, hi), method="bounded")
    return float(min(vals[i], res.fun))


def _penalized_family_floor(target, raw_objective, lo, hi, seeds, budget=500):
    """Minimize r_ac subject to r_ab = r_bc = target via penalty + simplex."""

    def make(kappa):
        def f(p):
            p = np.clip(p, lo, hi)
            r_ab, r_bc, r_ac = raw_objective(p)
            return r_ac + kappa * ((r_ab - target) ** 2 + (r_bc - target) ** 2)

        return f

    best = (np.inf, None)
    for x0 in seeds:
        res = minimize(
            make(1e4),
            x0,
            method="Nelder-Mead",
            bounds=list(zip(lo, hi)),
            options={"xatol": 1e-9, "fatol": 1e-13, "maxfev": budget},
        )
        res = minimize(
            make(1e8),
            np.clip(res.x, lo, hi),
            method="Nelder-Mead",
            bounds=list(zip(lo, hi)),
            options={"xatol": 1e-10, "fatol": 1e-14, "maxfev": budget},
        )
        p = np.clip(res.x, lo, hi)
        r_ab, r_bc, r_ac = raw_objective(p)
        if abs(r_ab - target) < 1e-4 and abs(r_bc - target) < 1e-4 and r_ac < best[0]:
            best = (float(r_ac), p)
    return best[0]


def _beta_sum_overlaps(p):
    # (ell1, ell2, ell3, beta_ab) with beta_ab + beta_ac = pi
    l1, l2, l3, bab = p
    bac = np.pi - bab
    bbc = bac - bab
    return (
        float(step_overlap_sq(l1, bab, l2, 0.0)),
        float(step_overlap_sq(l2, bbc, l3, 0.0)),
        float(step_overlap_sq(l1, bac, l3, 0.0)),
    )


def _all_free_overlaps(p):
    # (ell1, ell2, ell3, alpha2, alpha3), alpha1 = 0
    l1, l2, l3, a2, a3 = p
    return (
        float(step_overlap_sq(l1, 0.0, l2, a2)),
        float(step_overlap_sq(l2, a2, l3, a3)),
        float(step_overlap_sq(l1, 0.0, l3, a3)),
    )


def trace_boundary(family: str, resolution: int = 64, span=(0.0, 1.0), seed: int = 0) -> BoundaryCurve:
    """Lower envelope of r_ac against r_ab (= r_bc) for a state family.

    Families: "symmetric-ell" (one common charge, opposite step tilts),
    "beta-sum-pi" (step direction gaps constrained to beta_ab + beta_ac = pi,
    charges free), "all-free" (three charges and two direction gaps free).
    Each r_ab bin minimizes r_ac subject to r_ab = r_bc.
    """
    if resolution < 64:
        raise ValueError("resolution must be >= 64")
    if family not in ("symmetric-ell", "beta-sum-pi", "all-free"):
        raise ValueError(f"unknown family {family!r}")
    targets = np.linspace(span[0], span[1], resolution)
    targets = np.clip(targets, 1e-6, 1.0 - 1e-6)
    rows = []
    rng = np.random.default_rng(seed)
    for t in targets:
        if family == "symmetric-ell":
            floor = _symmetric_ell_floor(float(t))
        elif family == "beta-sum-pi":
            lo = np.array([0.0, 0.0, 0.0, 0.0])
            hi = np.array([1.0, 1.0, 1.0, np.pi / 2])
            seeds = [lo + rng.random(4) * (hi - lo) for _ in range(10)]
            seeds.append(np.array([0.5, 0.5, 0.5, np.pi / 4]))
            floor = _penalized_family_floor(float(t), _beta_sum_overlaps, lo, hi, seeds)
        else:
            lo = np.array([0.0, 0.0, 0.0, 0.0, 0.0])
            hi = np.array([1.0, 1.0, 1.0, TWO_PI, TWO_PI])
            seeds = [lo + rng.random(5) * (hi - lo) for _ in range(12)]
            # deterministic structured seeds: both named sub-families embed here
            seeds.append(np.array([0.5, 0.75, 0.5, np.pi / 2, np.pi]))
            seeds.append(np.array([0.5, 0.5, 0.5, np.pi / 2, np.pi]))
            seeds.append(np.array([0.5, 0.25, 0.5, np.pi / 2, np.pi]))
            b = np.pi - np.sqrt(max(np.pi**2 * t, 0.0))  # symmetric-ell beta at ell=1/2
            seeds.append(np.array([0.5, 0.5, 0.5, b % TWO_PI, (2 * b) % TWO_PI]))
            floor = _penalized_family_floor(float(t), _all_free_overlaps, lo, hi, seeds)
        if np.isfinite(floor):
            rows.append((float(t), floor))
    return BoundaryCurve(np.array(rows), family)


# ---------------------------------------------------------------------------
# integer-OAM reference families
# ---------------------------------------------------------------------------


def scenario_integer_families(value: float, family: str) -> OverlapTriple:
    """Overlap triples of the two integer-OAM reference triplets.

    "coherence": {cos t |1,0> + sin t |-1,0>, |1,0>, cos t |1,0> - sin t |-1,0>}
    with t in [0, pi/2], giving (cos^2 t, cos^2 t, cos^2 2t).
    "dimension": {|2,0>, sqrt((1-e)/2)(|2,0> + |-2,0>) + sqrt(e) |0,1>, |-2,0>}
    with e in [0, 1], giving ((1-e)/2, (1-e)/2, 0).
    """
    if family == "coherence":
        if not 0.0 <= value <= np.pi / 2 + 1e-12:
            raise ValueError("theta must lie in [0, pi/2]")
        theta = float(value)
        up, dn = LgIndex(1, 0), LgIndex(-1, 0)
        if np.isclose(theta, np.pi / 2):
            a = CoeffState({dn: 1.0})
            c = CoeffState({dn: -1.0})
        else:
            a = CoeffState({up: np.cos(theta), dn: np.sin(theta)})
            c = CoeffState({up: np.cos(theta), dn: -np.sin(theta)})
        b = CoeffState({up: 1.0})
    elif family == "dimension":
        if not 0.0 <= value <= 1.0:
            raise ValueError("epsilon must lie in [0, 1]")
        eps = float(value)
        up, dn, rad = LgIndex(2, 0), LgIndex(-2, 0), LgIndex(0, 1)
        a = CoeffState({up: 1.0})
        c = CoeffState({dn: 1.0})
        w = np.sqrt((1.0 - eps) / 2.0)
        terms = {rad: np.sqrt(eps)} if eps > 0 else {}
        if w > 0:
            terms[up] = w
            terms[dn] = w
        b = CoeffState(terms)
    else:
        raise ValueError(f"unknown family {family!r}")
    return OverlapTriple(
        abs(coeff_overlap(a, b)) ** 2,
        abs(coeff_overlap(b, c)) ** 2,
        abs(coeff_overlap(a, c)) ** 2,
    )
