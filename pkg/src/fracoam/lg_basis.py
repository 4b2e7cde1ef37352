"""Laguerre-Gaussian transverse modes evaluated at the beam waist.

The mode family is

    u_{lp}(r, phi) = N_{lp} / sqrt(2 pi) * rb^|l| * L_p^|l|(2 rb^2)
                     * exp(-rb^2) * exp(+i l phi),        rb = r / w,

with N_{lp} fixed so that the continuous-plane L2 norm
``int |u|^2 r dr dphi`` equals one.  Only the waist plane is modelled;
propagation factors (Gouy phase, curvature) are out of scope.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

__all__ = ["LgIndex", "BeamGeometry", "laguerre_poly", "lg_amplitude"]


@dataclass(frozen=True)
class LgIndex:
    """Azimuthal / radial index pair (l, p) of an LG mode.

    l may be any integer; p must be non-negative.
    """

    l: int
    p: int = 0

    def __post_init__(self):
        if self.p < 0:
            raise ValueError(f"radial index p must be >= 0, got {self.p}")


@dataclass(frozen=True)
class BeamGeometry:
    """Beam waist w, in the same unit as the transverse coordinates."""

    w: float = 1.0

    def __post_init__(self):
        if self.w <= 0:
            raise ValueError(f"waist must be positive, got {self.w}")


def laguerre_poly(p, a, x):
    """Generalized Laguerre polynomial L_p^a(x).

    Uses the stable three-term recurrence

        (k+1) L_{k+1} = (2k + 1 + a - x) L_k - (k + a) L_{k-1},

    which avoids the alternating-sign cancellation of the explicit series
    at large x.

    Parameters
    ----------
    p : int
        polynomial degree, >= 0
    a : float
        shape parameter, >= 0
    x : float or ndarray
        evaluation point(s)

    Returns
    -------
    float or ndarray
        L_p^a(x), exact for polynomial degree p up to rounding
    """
    if p < 0:
        raise ValueError(f"degree p must be >= 0, got {p}")
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if p == 0:
        return prev if prev.ndim else float(prev)
    cur = 1.0 + a - x
    for k in range(1, p):
        prev, cur = cur, ((2 * k + 1 + a - x) * cur - (k + a) * prev) / (k + 1)
    return cur if cur.ndim else float(cur)


def _log_norm(idx: LgIndex, w: float) -> float:
    # N_{lp} = (2/w) sqrt(2^|l| p! / (p+|l|)!)
    la = abs(idx.l)
    return (
        np.log(2.0 / w)
        + 0.5 * (la * np.log(2.0) + gammaln(idx.p + 1) - gammaln(idx.p + la + 1))
    )


def lg_amplitude(idx: LgIndex, geom: BeamGeometry, r, phi):
    """Complex LG amplitude u_{lp}(r, phi) at the waist plane.

    Normalized to unit L2 norm over the plane; the azimuthal phase is
    exp(+i l phi).  r and phi broadcast together, so passing meshgrid
    arrays evaluates the mode on a full transverse grid.

    Parameters
    ----------
    idx : LgIndex
    geom : BeamGeometry
    r : float or ndarray
        radius, >= 0
    phi : float or ndarray
        azimuth in radians

    Returns
    -------
    complex or ndarray
    """
    r = np.asarray(r, dtype=float)
    phi = np.asarray(phi, dtype=float)
    if np.any(r < 0):
        raise ValueError("radius must be non-negative")
    rb = r / geom.w
    la = abs(idx.l)
    radial = (
        np.exp(_log_norm(idx, geom.w))
        / np.sqrt(2.0 * np.pi)
        * rb**la
        * laguerre_poly(idx.p, la, 2.0 * rb**2)
        * np.exp(-(rb**2))
    )
    out = radial * np.exp(1j * idx.l * phi)
    return out if out.ndim else complex(out)
