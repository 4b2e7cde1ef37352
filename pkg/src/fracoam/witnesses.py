"""Overlap-based coherence and dimension witnesses.

Everything here is phrased in terms of pairwise squared overlaps
r_ij = |<psi_i|psi_j>|^2 (or tr(rho_i rho_j) for general states), which are
invariant under common unitaries.  For a triple (r_ab, r_bc, r_ac):

* classical region C: reachable by states diagonal in one common basis;
  the three cyclic inequalities  r_ab + r_bc - r_ac <= 1  (and relabelings)
  together with r >= 0.  Leaving C witnesses basis-independent coherence.
* quantum region Q: reachable by arbitrary quantum states; for each choice
  of "hub" state the opposite overlap is confined to [lower, r_plus] with
  r_pm = (sqrt(x y) +- sqrt((1-x)(1-y)))^2 and lower = r_minus only when
  x + y > 1, else 0.
* qubit region Q_bid: same bounds with the r_minus branch unconditional;
  this is the pure-qubit overlap region.  Leaving Q_bid while staying in Q
  witnesses Hilbert-space dimension >= 3.

The cross-section r_ab = r_bc of [0,1]^3 splits into regions I..V:
V outside Q, IV in Q but not C (coherence), I in Q and C but not Q_bid
(dimension), II/III inside all three, distinguished by whether the triple
is reachable with two-outcome diagonal states (III) or needs a third
outcome (II).

The hub-star combinations h_n = sum_k r_{0,k} - sum_{i<j>=1} r_{ij}
extend the triple inequalities to n states: h_n > 1 requires coherence
and dimension >= n - 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .frac_modes import CoeffState, FracModeSpec, coeff_overlap
from .overlaps import complex_overlap, pairwise_overlap_sq, step_overlap_sq

__all__ = [
    "MEMBERSHIP_TOL",
    "OverlapTriple",
    "OverlapMatrix",
    "GramMatrix",
    "WitnessReport",
    "pairwise_matrix_from_betas",
    "in_classical",
    "in_quantum",
    "in_qubit",
    "classical_margin",
    "quantum_margin",
    "qubit_margin",
    "witness_distance_classical",
    "witness_distance_qubit",
    "h_n",
    "gram_matrix",
    "certify_dimension",
    "classify_region",
    "region_label",
    "binary_outcome_distance",
    "sample_pure_overlap_triples",
    "sample_qubit_overlap_triples",
    "sample_mixed_qubit_overlap_triples",
    "sample_diagonal_overlap_triples",
    "sample_qubit_overlap_matrices",
]

MEMBERSHIP_TOL = 1e-9

# facets of C as A r <= b: three cyclic inequalities plus r >= 0
# (the r <= 1 planes are implied: any two cyclic inequalities sum to 2 r <= 2)
_C_FACETS_A = np.array(
    [
        [1.0, 1.0, -1.0],
        [1.0, -1.0, 1.0],
        [-1.0, 1.0, 1.0],
        [-1.0, 0.0, 0.0],
        [0.0, -1.0, 0.0],
        [0.0, 0.0, -1.0],
    ]
)
_C_FACETS_B = np.array([1.0, 1.0, 1.0, 0.0, 0.0, 0.0])


def _as_triple_array(t) -> np.ndarray:
    arr = np.asarray(
        [t.r_ab, t.r_bc, t.r_ac] if isinstance(t, OverlapTriple) else t, dtype=float
    )
    if arr.shape != (3,):
        raise ValueError(f"expected 3 overlaps, got shape {arr.shape}")
    if np.any(arr < -1e-12) or np.any(arr > 1.0 + 1e-12):
        raise ValueError(f"overlaps must lie in [0, 1], got {arr}")
    return np.clip(arr, 0.0, 1.0)


@dataclass(frozen=True)
class OverlapTriple:
    """Ordered overlap triple (r_ab, r_bc, r_ac), each in [0, 1]."""

    r_ab: float
    r_bc: float
    r_ac: float

    def __post_init__(self):
        for name in ("r_ab", "r_bc", "r_ac"):
            v = float(getattr(self, name))
            if not -1e-12 <= v <= 1.0 + 1e-12:
                raise ValueError(f"{name} = {v} outside [0, 1]")
            object.__setattr__(self, name, min(max(v, 0.0), 1.0))

    def as_array(self) -> np.ndarray:
        return np.array([self.r_ab, self.r_bc, self.r_ac])

    @classmethod
    def from_states(cls, a: FracModeSpec, b: FracModeSpec, c: FracModeSpec):
        from .overlaps import overlap_sq

        return cls(overlap_sq(a, b), overlap_sq(b, c), overlap_sq(a, c))


@dataclass(frozen=True)
class OverlapMatrix:
    """Symmetric matrix of pairwise squared overlaps with unit diagonal."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 2 or v.shape[0] != v.shape[1] or v.shape[0] < 2:
            raise ValueError(f"need a square matrix of order >= 2, got {v.shape}")
        if np.abs(v - v.T).max() > 1e-9:
            raise ValueError("overlap matrix must be symmetric")
        if np.abs(np.diag(v) - 1.0).max() > 1e-9:
            raise ValueError("overlap matrix must have unit diagonal")
        if v.min() < -1e-9 or v.max() > 1.0 + 1e-9:
            raise ValueError("overlaps must lie in [0, 1]")
        object.__setattr__(self, "values", v)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @classmethod
    def from_states(cls, specs):
        specs = list(specs)
        ells = [s.ell for s in specs]
        alphas = [s.alpha for s in specs]
        return cls(pairwise_overlap_sq(ells, alphas))


def pairwise_matrix_from_betas(ells, betas) -> OverlapMatrix:
    """Overlap matrix from charges plus explicit per-pair direction gaps.

    betas maps (i, j) with i < j to beta_ij.  Lets quoted parameter sets be
    evaluated as given, even when their pairwise gaps do not derive from any
    single assignment of step directions.
    """
    n = len(ells)
    v = np.eye(n)
    for (i, j), beta in betas.items():
        v[i, j] = v[j, i] = float(step_overlap_sq(ells[i], float(beta), ells[j], 0.0))
    return OverlapMatrix(v)


@dataclass(frozen=True)
class GramMatrix:
    """Hermitian matrix of complex inner products of a normalized state set."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise ValueError(f"need a square matrix, got {v.shape}")
        if np.abs(v - v.conj().T).max() > 1e-9:
            raise ValueError("Gram matrix must be Hermitian")
        if np.abs(np.diag(v) - 1.0).max() > 1e-9:
            raise ValueError("Gram matrix needs unit diagonal (normalized states)")
        object.__setattr__(self, "values", v)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.values)

    def det(self) -> float:
        return float(np.linalg.det(self.values).real)

    def is_psd(self, tol: float = MEMBERSHIP_TOL) -> bool:
        return bool(self.eigenvalues().min() >= -tol)


# ---------------------------------------------------------------------------
# region membership
# ---------------------------------------------------------------------------


def classical_margin(triples) -> np.ndarray:
    """Largest violation of the classical inequalities; <= 0 means inside C.

    Accepts an (..., 3) array of triples.
    """
    r = np.asarray(triples, dtype=float)
    lhs = r @ _C_FACETS_A.T - _C_FACETS_B
    return lhs.max(axis=-1)


def _hub_bounds(x, y):
    p = np.sqrt(np.clip(x * y, 0.0, None))
    q = np.sqrt(np.clip((1.0 - x) * (1.0 - y), 0.0, None))
    return (p - q) ** 2, (p + q) ** 2


def _hub_margin(triples, conditional_lower: bool) -> np.ndarray:
    r = np.asarray(triples, dtype=float)
    rab, rbc, rac = r[..., 0], r[..., 1], r[..., 2]
    worst = np.full(r.shape[:-1], -np.inf)
    # each state in turn acts as the hub; the opposite overlap is bounded
    for mid, x, y in ((rbc, rab, rac), (rac, rab, rbc), (rab, rac, rbc)):
        rm, rp = _hub_bounds(x, y)
        lower = rm if not conditional_lower else np.where(x + y > 1.0, rm, 0.0)
        worst = np.maximum(worst, np.maximum(mid - rp, lower - mid))
    return worst


def quantum_margin(triples) -> np.ndarray:
    """Largest violation of the general quantum bounds; <= 0 means inside Q."""
    return _hub_margin(triples, conditional_lower=True)


def qubit_margin(triples) -> np.ndarray:
    """Largest violation of the pure-qubit bounds; <= 0 means inside Q_bid."""
    return _hub_margin(triples, conditional_lower=False)


def in_classical(t, tol: float = MEMBERSHIP_TOL) -> bool:
    """Whether the triple admits a common diagonalizing basis."""
    return bool(classical_margin(_as_triple_array(t)) <= tol)


def in_quantum(t, tol: float = MEMBERSHIP_TOL) -> bool:
    """Whether the triple is reachable by any quantum state set."""
    return bool(quantum_margin(_as_triple_array(t)) <= tol)


def in_qubit(t, tol: float = MEMBERSHIP_TOL) -> bool:
    """Whether the triple is reachable by three pure qubit states."""
    return bool(qubit_margin(_as_triple_array(t)) <= tol)


# ---------------------------------------------------------------------------
# witness distances
# ---------------------------------------------------------------------------


def witness_distance_classical(t) -> float:
    """Euclidean distance from the triple to the classical region C.

    C is a convex polyhedron with at most six facets, so the projection is
    computed exactly: enumerate candidate active sets of facets, project
    onto each affine intersection, and keep the closest feasible point.
    """
    r = _as_triple_array(t)
    if classical_margin(r) <= MEMBERSHIP_TOL:
        return 0.0
    import itertools

    best = np.inf
    idx = range(len(_C_FACETS_B))
    for k in (1, 2, 3):
        for subset in itertools.combinations(idx, k):
            a_s = _C_FACETS_A[list(subset)]
            b_s = _C_FACETS_B[list(subset)]
            gram = a_s @ a_s.T
            try:
                lam = np.linalg.solve(gram, a_s @ r - b_s)
            except np.linalg.LinAlgError:
                continue
            x = r - a_s.T @ lam
            if classical_margin(x) <= 1e-9:
                best = min(best, float(np.linalg.norm(x - r)))
    return best


def witness_distance_qubit(t, samples: int = 201, refine: bool = True) -> float:
    """Euclidean distance from the triple to the pure-qubit region Q_bid.

    Q_bid is not convex, so the projection is found by dense sampling of the
    six bounding surfaces (three hub relabelings times the r_minus / r_plus
    branches, `samples`^2 points each) followed by a local simplex
    refinement constrained to the region.  Accurate to about 1e-3.
    """
    r = _as_triple_array(t)
    if qubit_margin(r) <= MEMBERSHIP_TOL:
        return 0.0
    g = np.linspace(0.0, 1.0, samples)
    x, y = np.meshgrid(g, g, indexing="ij")
    rm, rp = _hub_bounds(x, y)
    best_d = np.inf
    best_q = None
    for mid in (rm, rp):
        for arrange in range(3):
            if arrange == 0:
                trip = np.stack([x, mid, y], axis=-1)
            elif arrange == 1:
                trip = np.stack([x, y, mid], axis=-1)
            else:
                trip = np.stack([mid, y, x], axis=-1)
            d = np.linalg.norm(trip - r, axis=-1)
            d[qubit_margin(trip) > MEMBERSHIP_TOL] = np.inf
            i = int(np.argmin(d))
            if d.flat[i] < best_d:
                best_d = float(d.flat[i])
                best_q = trip.reshape(-1, 3)[i]
    if best_q is None:  # degenerate inputs only
        return best_d
    if refine:

        def objective(q):
            q = np.clip(q, 0.0, 1.0)
            return float(
                np.linalg.norm(q - r) + 50.0 * max(qubit_margin(q), 0.0)
            )

        res = minimize(
            objective,
            best_q,
            method="Nelder-Mead",
            options={"xatol": 1e-7, "fatol": 1e-10, "maxfev": 4000},
        )
        q = np.clip(res.x, 0.0, 1.0)
        if qubit_margin(q) <= 1e-7:
            best_d = min(best_d, float(np.linalg.norm(q - r)))
    return best_d


# ---------------------------------------------------------------------------
# n-state witnesses and Gram certification
# ---------------------------------------------------------------------------


def h_n(m, hub=0) -> float:
    """Hub-star witness value for an overlap matrix of n >= 3 states.

    With hub state 0,

        h_n = sum_{k=1}^{n-1} r_{0,k} - sum_{1 <= i < j <= n-1} r_{i,j};

    h_3 reduces to r_01 + r_02 - r_12.  Values above 1 witness coherence
    together with Hilbert-space dimension >= n - 1.  `hub` selects the hub
    state, or "max" to maximize over all hub relabelings.
    """
    v = m.values if isinstance(m, OverlapMatrix) else np.asarray(m, dtype=float)
    n = v.shape[0]
    if n < 3:
        raise ValueError(f"h_n needs at least 3 states, got {n}")
    if hub == "max":
        return max(h_n(v, hub=k) for k in range(n))
    others = [i for i in range(n) if i != hub]
    star = float(sum(v[hub, k] for k in others))
    rest = float(
        sum(v[i, j] for a, i in enumerate(others) for j in others[a + 1 :])
    )
    return star - rest


def gram_matrix(states) -> GramMatrix:
    """Gram matrix G_ij = <psi_i|psi_j> of fractional states or expansions.

    Accepts FracModeSpec sequences on a common carrier (closed-form inner
    products) or CoeffState sequences (finite-expansion inner products).
    """
    states = list(states)
    if len(states) < 2:
        raise ValueError("need at least two states")
    n = len(states)
    g = np.eye(n, dtype=complex)
    if all(isinstance(s, FracModeSpec) for s in states):
        for i in range(n):
            for j in range(i + 1, n):
                # complex_overlap(a, b) is <b|a>; G_ij = <psi_i|psi_j>
                g[i, j] = complex_overlap(states[j], states[i]).complex_value
                g[j, i] = np.conj(g[i, j])
    elif all(isinstance(s, CoeffState) for s in states):
        for i in range(n):
            for j in range(i + 1, n):
                g[i, j] = coeff_overlap(states[i], states[j])
                g[j, i] = np.conj(g[i, j])
    else:
        raise TypeError("states must be all FracModeSpec or all CoeffState")
    return GramMatrix(g)


def certify_dimension(g: GramMatrix, tol: float = 1e-9) -> int:
    """Numerical rank of the Gram matrix: eigenvalues above tol * lambda_max.

    Equals the number of states exactly when det G > 0 within tolerance,
    i.e. when the set is linearly independent and spans that dimension.
    """
    eig = g.eigenvalues()
    top = eig.max()
    if top <= 0:
        return 0
    return int(np.count_nonzero(eig > tol * top))


# ---------------------------------------------------------------------------
# region classification
# ---------------------------------------------------------------------------


def binary_outcome_distance(t) -> float:
    """Distance from the triple to overlaps of three two-outcome distributions.

    Each state is a distribution (a, 1-a); r_ij = a_i a_j + (1-a_i)(1-a_j).
    Grid enumeration over (a, b, c) seeds a simplex polish.
    """
    r = _as_triple_array(t)
    g = np.linspace(0.0, 1.0, 41)
    a, b, c = np.meshgrid(g, g, g, indexing="ij")

    def _triple(a, b, c):
        return (
            a * b + (1 - a) * (1 - b),
            b * c + (1 - b) * (1 - c),
            a * c + (1 - a) * (1 - c),
        )

    rab, rbc, rac = _triple(a, b, c)
    d2 = (rab - r[0]) ** 2 + (rbc - r[1]) ** 2 + (rac - r[2]) ** 2
    i = np.unravel_index(int(np.argmin(d2)), d2.shape)
    x0 = np.array([g[i[0]], g[i[1]], g[i[2]]])

    def objective(x):
        x = np.clip(x, 0.0, 1.0)
        rab, rbc, rac = _triple(*x)
        return (rab - r[0]) ** 2 + (rbc - r[1]) ** 2 + (rac - r[2]) ** 2

    res = minimize(
        objective,
        x0,
        method="Nelder-Mead",
        options={"xatol": 1e-10, "fatol": 1e-16, "maxfev": 4000},
    )
    return float(np.sqrt(max(res.fun, 0.0)))


@dataclass(frozen=True)
class WitnessReport:
    """Region memberships and witness distances for one overlap triple."""

    triple: OverlapTriple
    in_c: bool
    in_q: bool
    in_qbid: bool
    w_c: float
    w_d: float
    region: str

    def to_json(self) -> dict:
        return {
            "r_ab": self.triple.r_ab,
            "r_bc": self.triple.r_bc,
            "r_ac": self.triple.r_ac,
            "in_C": self.in_c,
            "in_Q": self.in_q,
            "in_Qbid": self.in_qbid,
            "W_c": self.w_c,
            "W_D": self.w_d,
            "region": self.region,
        }


def region_label(t, tol: float = MEMBERSHIP_TOL) -> str:
    """The I..V label of a triple, without witness distances."""
    r = _as_triple_array(t)
    if not in_quantum(r, tol):
        return "V"
    if not in_classical(r, tol):
        return "IV"
    if not in_qubit(r, tol):
        return "I"
    return "III" if binary_outcome_distance(r) <= 1e-6 else "II"


def classify_region(t, tol: float = MEMBERSHIP_TOL) -> WitnessReport:
    """Full witness report with the I..V label of the triple.

    V outside Q; IV in Q only; I in Q and C but outside Q_bid; II inside
    all three but needing three outcomes classically; III reachable with
    two-outcome diagonal states.
    """
    r = _as_triple_array(t)
    return WitnessReport(
        OverlapTriple(*r),
        in_classical(r, tol),
        in_quantum(r, tol),
        in_qubit(r, tol),
        witness_distance_classical(r),
        witness_distance_qubit(r),
        region_label(r, tol),
    )


# ---------------------------------------------------------------------------
# seeded Monte Carlo samplers (containment oracles)
# ---------------------------------------------------------------------------


def _rng(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def _random_pure_states(m: int, k: int, dim: int, rng) -> np.ndarray:
    v = rng.normal(size=(m, k, dim)) + 1j * rng.normal(size=(m, k, dim))
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


def _pure_triples(states: np.ndarray) -> np.ndarray:
    def ov(i, j):
        return np.abs(np.einsum("mi,mi->m", states[:, i].conj(), states[:, j])) ** 2

    return np.stack([ov(0, 1), ov(1, 2), ov(0, 2)], axis=-1)


def sample_pure_overlap_triples(m: int, seed=0, max_dim: int = 8) -> np.ndarray:
    """(m, 3) overlap triples of Haar-like random pure states, dim 2..max_dim."""
    rng = _rng(seed)
    dims = rng.integers(2, max_dim + 1, size=m)
    out = np.empty((m, 3))
    for d in np.unique(dims):
        sel = dims == d
        out[sel] = _pure_triples(_random_pure_states(int(sel.sum()), 3, int(d), rng))
    return out


def sample_qubit_overlap_triples(m: int, seed=0) -> np.ndarray:
    """(m, 3) overlap triples of random pure qubit triples."""
    return _pure_triples(_random_pure_states(m, 3, 2, _rng(seed)))


def sample_mixed_qubit_overlap_triples(m: int, seed=0) -> np.ndarray:
    """(m, 3) triples r_ij = tr(rho_i rho_j) of random mixed qubit states.

    Empirical cross-check oracle only; Q_bid membership is defined by the
    pure-qubit bounds.
    """
    rng = _rng(seed)
    a = rng.normal(size=(m, 3, 2, 2)) + 1j * rng.normal(size=(m, 3, 2, 2))
    rho = a @ a.conj().transpose(0, 1, 3, 2)
    rho /= np.trace(rho, axis1=-2, axis2=-1)[..., None, None]

    def ov(i, j):
        return np.einsum("mab,mba->m", rho[:, i], rho[:, j]).real

    return np.stack([ov(0, 1), ov(1, 2), ov(0, 2)], axis=-1)


def sample_diagonal_overlap_triples(m: int, seed=0, max_outcomes: int = 8) -> np.ndarray:
    """(m, 3) triples r_ij = sum_k p_i(k) p_j(k) of random distributions."""
    rng = _rng(seed)
    dims = rng.integers(2, max_outcomes + 1, size=m)
    out = np.empty((m, 3))
    for d in np.unique(dims):
        sel = dims == d
        p = rng.exponential(size=(int(sel.sum()), 3, int(d)))
        p /= p.sum(axis=-1, keepdims=True)

        def ov(i, j):
            return np.einsum("mk,mk->m", p[:, i], p[:, j])

        out[sel] = np.stack([ov(0, 1), ov(1, 2), ov(0, 2)], axis=-1)
    return out


def sample_qubit_overlap_matrices(m: int, n_states: int, seed=0) -> np.ndarray:
    """(m, n, n) overlap matrices of random pure qubit n-tuples."""
    states = _random_pure_states(m, n_states, 2, _rng(seed))
    g = np.einsum("mid,mjd->mij", states.conj(), states)
    out = np.abs(g) ** 2
    ii = np.arange(n_states)
    out[:, ii, ii] = 1.0
    return out
