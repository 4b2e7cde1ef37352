import mpmath as mp
import numpy as np
import pytest

from fracoam import BeamGeometry, GridSpec, LgIndex, laguerre_poly, lg_amplitude


def laguerre_series(p, a, x):
    """Independent oracle: explicit finite-sum formula for L_p^a(x).

    Evaluated at 50 decimal digits; the alternating sum cancels badly in
    double precision at large x (the reason the implementation uses the
    recurrence), so the oracle itself must be exact.
    """
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty_like(xs)
    with mp.workdps(50):
        for i, xi in enumerate(xs):
            total = mp.mpf(0)
            for k in range(p + 1):
                coeff = mp.binomial(p + a, p - k) / mp.factorial(k)
                total += (-1) ** k * coeff * mp.mpf(xi) ** k
            out[i] = float(total)
    return out if np.ndim(x) else float(out[0])


def grid_quadrature(values, dx):
    return np.sum(values) * dx * dx


def test_laguerre_degree_zero_is_one():
    assert laguerre_poly(0, 1.0, 3.7) == 1.0


def test_laguerre_degree_one():
    assert laguerre_poly(1, 0.0, 2.0) == pytest.approx(-1.0, abs=1e-15)


def test_laguerre_matches_series_oracle():
    xs = np.linspace(0.0, 20.0, 81)
    for p in range(11):
        for a in (0.0, 1.0, 2.5, 5.0):
            got = laguerre_poly(p, a, xs)
            want = laguerre_series(p, a, xs)
            scale = np.maximum(np.abs(want), 1.0)
            assert np.max(np.abs(got - want) / scale) < 1e-12, (p, a)


def test_laguerre_p3_a2_value():
    want = laguerre_series(3, 2.0, 1.5)
    assert laguerre_poly(3, 2.0, 1.5) == pytest.approx(want, rel=1e-12)


def test_laguerre_rejects_negative_degree():
    with pytest.raises(ValueError):
        laguerre_poly(-1, 0.0, 1.0)


def test_fundamental_peak_at_origin():
    u = lg_amplitude(LgIndex(0, 0), BeamGeometry(1.0), 0.0, 1.23)
    assert u.imag == 0.0
    assert u.real > 0.0


def test_vortex_null_at_origin():
    assert lg_amplitude(LgIndex(2, 0), BeamGeometry(1.0), 0.0, 0.4) == 0.0


def _bench_default_mesh():
    grid = GridSpec()  # the optical bench defaults: n=1024, extent=16
    x = grid.axis()
    xx, yy = np.meshgrid(x, x)
    return np.hypot(xx, yy), np.arctan2(yy, xx), grid.dx


def test_unit_grid_norm_of_u10():
    rr, phi, dx = _bench_default_mesh()
    u = lg_amplitude(LgIndex(1, 0), BeamGeometry(1.0), rr, phi)
    norm = grid_quadrature(np.abs(u) ** 2, dx)
    assert norm == pytest.approx(1.0, abs=1e-6)


def test_orthonormality_across_low_orders():
    # 2-D quadrature of <u_lp | u_l'p'> over the plane; smooth integrands of
    # polynomial-times-Gaussian type converge spectrally on this grid
    grid = GridSpec(512, 16.0)
    x = grid.axis()
    xx, yy = np.meshgrid(x, x)
    rr, phi = np.hypot(xx, yy), np.arctan2(yy, xx)
    geom = BeamGeometry(1.0)
    indices = [LgIndex(l, p) for l in range(-3, 4) for p in range(3)]
    fields = np.stack(
        [lg_amplitude(idx, geom, rr, phi).ravel() for idx in indices]
    )
    overlaps = fields.conj() @ fields.T * grid.dx**2
    expected = np.eye(len(indices))
    assert np.max(np.abs(overlaps - expected)) < 1e-6


def test_azimuthal_phase_winding():
    rng = np.random.default_rng(11)
    geom = BeamGeometry(1.0)
    for _ in range(200):
        idx = LgIndex(int(rng.integers(-3, 4)), int(rng.integers(0, 3)))
        r = rng.uniform(0.3, 2.0)
        phi = rng.uniform(0, 2 * np.pi)
        delta = rng.uniform(0, 2 * np.pi)
        u1 = lg_amplitude(idx, geom, r, phi)
        u2 = lg_amplitude(idx, geom, r, phi + delta)
        if abs(u1) < 1e-12:
            continue
        got = np.angle(u2) - np.angle(u1)
        want = idx.l * delta
        assert np.abs(np.exp(1j * got) - np.exp(1j * want)) < 1e-9


def test_radial_index_validation():
    with pytest.raises(ValueError):
        LgIndex(0, -1)
    with pytest.raises(ValueError):
        BeamGeometry(0.0)
