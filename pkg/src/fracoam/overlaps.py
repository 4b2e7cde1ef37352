"""Closed-form overlaps between fractional-OAM states on a common carrier.

For two states with charges (ell, ell') and step directions (alpha, alpha'),
beta = alpha - alpha', the defining integral

    <ell',alpha' | ell,alpha> = (1/2 pi) int_0^{2 pi} f*_{ell',alpha'} f_{ell,alpha} dphi

evaluates in closed form.  Assuming alpha >= alpha' (the other ordering is
the complex conjugate) the three-segment integral collapses to

    ( e^{-i ell' beta} e^{i pi ell} sin(pi ell)
      - e^{-i ell beta} e^{i 2 pi ell} e^{-i pi ell'} sin(pi ell') )
    / ( pi (ell - ell') ),

whose squared magnitude has the cardinal-sine form

    sinc^2[(ell-ell') pi]
      - beta (2 pi - beta) / pi^2 * sin(ell pi) sin(ell' pi)
        * sinc[(ell-ell') beta / 2] * sinc[(ell-ell') (pi - beta/2)],

with sinc(x) = sin(x)/x, sinc(0) = 1.  The squared magnitude depends on the
step directions only through beta, symmetrically under beta -> 2 pi - beta.

Only same-carrier overlaps are defined: for differing carrier indices the
radial profiles are no longer common factors and the closed form does not
apply.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .frac_modes import FracModeSpec

__all__ = [
    "OverlapValue",
    "complex_overlap",
    "overlap_sq",
    "overlap_sq_beta0",
    "overlap_sq_equal_ell",
    "sinc",
    "step_overlap_complex",
    "step_overlap_sq",
    "pairwise_overlap_sq",
]

TWO_PI = 2.0 * np.pi

# below this charge separation the generic quotient form is 0/0-dominated;
# switch to the analytic ell -> ell' limit
_LIMIT_EPS = 1e-8


def sinc(x):
    """Unnormalized cardinal sine sin(x)/x with sinc(0) = 1."""
    return np.sinc(np.asarray(x) / np.pi)


@dataclass(frozen=True)
class OverlapValue:
    """A complex overlap together with its squared magnitude and the beta used."""

    complex_value: complex
    squared_magnitude: float
    beta: float

    def __post_init__(self):
        if self.squared_magnitude > 1.0 + 1e-12 or self.squared_magnitude < -1e-12:
            raise ValueError(
                f"squared magnitude {self.squared_magnitude} outside [0, 1]"
            )


def _step_overlap_ordered(ell_bra, alpha_bra, ell_ket, alpha_ket):
    # requires alpha_ket >= alpha_bra
    beta = alpha_ket - alpha_bra
    d = ell_ket - ell_bra
    if abs(d) < _LIMIT_EPS:
        lm = 0.5 * (ell_ket + ell_bra)
        return np.exp(1j * lm * (np.pi - beta)) * (
            np.cos(np.pi * lm) - 1j * ((np.pi - beta) / np.pi) * np.sin(np.pi * lm)
        )
    t1 = np.exp(-1j * ell_bra * beta) * np.exp(1j * np.pi * ell_ket) * np.sin(np.pi * ell_ket)
    t2 = (
        np.exp(-1j * ell_ket * beta)
        * np.exp(2j * np.pi * ell_ket)
        * np.exp(-1j * np.pi * ell_bra)
        * np.sin(np.pi * ell_bra)
    )
    return (t1 - t2) / (np.pi * d)


def step_overlap_complex(ell_bra, alpha_bra, ell_ket, alpha_ket) -> complex:
    """<ell_bra, alpha_bra | ell_ket, alpha_ket> for step phases on one carrier."""
    if alpha_ket >= alpha_bra:
        return complex(_step_overlap_ordered(ell_bra, alpha_bra, ell_ket, alpha_ket))
    return complex(np.conj(_step_overlap_ordered(ell_ket, alpha_ket, ell_bra, alpha_bra)))


def step_overlap_sq(ell1, alpha1, ell2, alpha2):
    """Squared overlap magnitude; array-capable in all four arguments."""
    ell1 = np.asarray(ell1, dtype=float)
    ell2 = np.asarray(ell2, dtype=float)
    beta = np.asarray(np.asarray(alpha1, dtype=float) - alpha2) % TWO_PI
    d = ell1 - ell2
    cross = (
        np.sin(ell1 * np.pi)
        * np.sin(ell2 * np.pi)
        * sinc(d * beta / 2.0)
        * sinc(d * (np.pi - beta / 2.0))
    )
    out = sinc(d * np.pi) ** 2 - beta * (TWO_PI - beta) / np.pi**2 * cross
    return out if out.ndim else float(out)


def _require_common_carrier(a: FracModeSpec, b: FracModeSpec):
    if a.carrier != b.carrier:
        raise ValueError(f"carrier mismatch: {a.carrier} vs {b.carrier}")


def complex_overlap(a: FracModeSpec, b: FracModeSpec) -> OverlapValue:
    """Complex overlap <b|a> of two same-carrier fractional states.

    The removable singularity at ell = ell' is handled by the analytic
    limit when the charges coincide to within 1e-8.
    """
    _require_common_carrier(a, b)
    z = step_overlap_complex(b.ell, b.alpha, a.ell, a.alpha)
    beta = (a.alpha - b.alpha) % TWO_PI
    return OverlapValue(z, min(abs(z) ** 2, 1.0), beta)


def overlap_sq(a: FracModeSpec, b: FracModeSpec) -> float:
    """Squared overlap magnitude of two same-carrier fractional states."""
    _require_common_carrier(a, b)
    return float(step_overlap_sq(a.ell, a.alpha, b.ell, b.alpha))


def overlap_sq_beta0(ell_i, ell_j):
    """Squared overlap for aligned step directions: sinc^2[(ell_i - ell_j) pi]."""
    out = sinc((np.asarray(ell_i, dtype=float) - ell_j) * np.pi) ** 2
    return out if out.ndim else float(out)


def overlap_sq_equal_ell(ell, beta):
    """Squared overlap for equal charges: 1 - beta (2 pi - beta) sin^2(ell pi) / pi^2."""
    beta = np.asarray(beta, dtype=float)
    if np.any(beta < -1e-12) or np.any(beta > TWO_PI + 1e-12):
        raise ValueError("beta must lie in [0, 2 pi]")
    out = 1.0 - beta * (TWO_PI - beta) / np.pi**2 * np.sin(np.asarray(ell) * np.pi) ** 2
    return out if out.ndim else float(out)


def pairwise_overlap_sq(ells, alphas) -> np.ndarray:
    """Symmetric matrix of squared overlaps for states (ells[i], alphas[i]).

    Vectorized over all pairs; the workhorse behind witness searches.
    """
    ells = np.asarray(ells, dtype=float)
    alphas = np.asarray(alphas, dtype=float)
    n = ells.size
    iu, ju = np.triu_indices(n, k=1)
    vals = step_overlap_sq(ells[iu], alphas[iu], ells[ju], alphas[ju])
    out = np.eye(n)
    out[iu, ju] = vals
    out[ju, iu] = vals
    return out
