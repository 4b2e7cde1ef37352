"""Fractional-OAM states: step phase function and finite LG expansions.

A fractional state is an LG carrier multiplied by the step phase

    f_{ell,alpha}(phi) = exp(i ell (phi - alpha)) * exp(i 2 pi ell)   on [0, alpha)
                       = exp(i ell (phi - alpha))                    on [alpha, 2 pi)

i.e. a linear azimuthal phase of non-integer slope ell whose 2 pi ell
jump sits along the direction alpha.  Such states are not propagation
eigenmodes; for synthesis they are approximated by finite superpositions
of integer-l LG modes whose weights are the azimuthal Fourier
coefficients of f.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .lg_basis import LgIndex

__all__ = ["FracModeSpec", "CoeffState", "step_phase", "expand_in_lg", "coeff_overlap"]

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class FracModeSpec:
    """A fractional-OAM state: step charge ell, step direction alpha, LG carrier.

    alpha is canonicalized to [0, 2 pi).  ell is a real topological charge;
    integer values reduce to plain LG eigenstates.
    """

    ell: float
    alpha: float = 0.0
    carrier: LgIndex = LgIndex(0, 0)

    def __post_init__(self):
        object.__setattr__(self, "ell", float(self.ell))
        object.__setattr__(self, "alpha", float(self.alpha) % TWO_PI)


@dataclass(frozen=True)
class CoeffState:
    """A finite unit-norm expansion over integer LG indices.

    terms maps LgIndex -> complex amplitude.  Amplitudes are renormalized on
    construction; `captured_norm` records the squared norm the terms carried
    before renormalization (1.0 unless the state is a truncation).
    """

    terms: dict[LgIndex, complex]
    captured_norm: float = field(default=1.0)

    def __post_init__(self):
        if not self.terms:
            raise ValueError("CoeffState needs at least one term")
        total = sum(abs(c) ** 2 for c in self.terms.values())
        if total <= 0:
            raise ValueError("CoeffState terms carry zero norm")
        scale = 1.0 / np.sqrt(total)
        object.__setattr__(
            self, "terms", {k: complex(c) * scale for k, c in self.terms.items()}
        )

    def norm_sq(self) -> float:
        return sum(abs(c) ** 2 for c in self.terms.values())


def step_phase(spec: FracModeSpec, phi):
    """Unit-modulus step phase f_{ell,alpha}(phi) of a fractional mode.

    phi may be a scalar or array in [0, 2 pi).  The phase is continuous
    across the 0/2 pi seam and jumps by exp(i 2 pi ell) across phi = alpha.
    """
    phi = np.asarray(phi, dtype=float)
    base = np.exp(1j * spec.ell * (phi - spec.alpha))
    wrap = np.where(phi < spec.alpha, np.exp(1j * TWO_PI * spec.ell), 1.0)
    out = base * wrap
    return out if out.ndim else complex(out)


def expand_in_lg(spec: FracModeSpec, n_modes: int) -> CoeffState:
    """Truncated integer-LG expansion of a fractional mode.

    Keeps the n_modes azimuthal components of largest weight around
    round(ell), with coefficients c_m = <m, 0 | ell, alpha> taken on the
    common carrier (the step function's Fourier coefficients,
    |c_m| = |sin(pi ell)| / (pi |ell - m|) for non-integer ell).  The kept
    terms are renormalized; the pre-renormalization weight is reported as
    `captured_norm`.  Term keys are absolute LG indices carrier.l + m.

    Only p = 0 carriers are supported: the step operator mixes radial
    orders, and the pure-Fourier coefficients describe exactly the p = 0
    ladder of the carrier.
    """
    if spec.carrier.p != 0:
        raise ValueError("expand_in_lg supports only p = 0 carriers")
    if n_modes < 1:
        raise ValueError("n_modes must be >= 1")
    from .overlaps import complex_overlap  # deferred: overlaps builds on this module

    center = int(np.floor(spec.ell + 0.5))
    ms = np.arange(center - n_modes - 3, center + n_modes + 4)
    coeffs = np.array(
        [
            complex_overlap(spec, FracModeSpec(float(m), 0.0, spec.carrier)).complex_value
            for m in ms
        ]
    )
    # n_modes largest |c|; ties broken toward smaller m for determinism
    order = np.lexsort((ms, -np.abs(coeffs)))
    keep = np.sort(order[:n_modes])
    ms, coeffs = ms[keep], coeffs[keep]
    nonzero = np.abs(coeffs) > 1e-15
    ms, coeffs = ms[nonzero], coeffs[nonzero]
    captured = float(np.sum(np.abs(coeffs) ** 2))
    terms = {
        LgIndex(spec.carrier.l + int(m), 0): complex(c) for m, c in zip(ms, coeffs)
    }
    return CoeffState(terms, captured_norm=captured)


def coeff_overlap(a: CoeffState, b: CoeffState) -> complex:
    """Inner product <a|b> = sum over shared indices of conj(a_k) b_k."""
    total = 0.0 + 0.0j
    for k, ca in a.terms.items():
        cb = b.terms.get(k)
        if cb is not None:
            total += np.conj(ca) * cb
    return complex(total)
