import numpy as np
import pytest
from scipy.integrate import quad

from fracoam import FracModeSpec, LgIndex, complex_overlap, overlap_sq
from fracoam.frac_modes import step_phase
from fracoam.overlaps import (
    overlap_sq_beta0,
    overlap_sq_equal_ell,
    pairwise_overlap_sq,
    sinc,
    step_overlap_complex,
    step_overlap_sq,
)

TWO_PI = 2 * np.pi


def overlap_by_quadrature(bra: FracModeSpec, ket: FracModeSpec) -> complex:
    """Independent oracle: adaptive quadrature of (1/2pi) int f_bra* f_ket,
    split at both step locations."""

    def integrand(phi, part):
        v = np.conj(step_phase(bra, phi)) * step_phase(ket, phi)
        return v.real if part == 0 else v.imag

    pts = sorted({bra.alpha, ket.alpha} - {0.0, TWO_PI})
    re = quad(integrand, 0, TWO_PI, args=(0,), points=pts, limit=200)[0]
    im = quad(integrand, 0, TWO_PI, args=(1,), points=pts, limit=200)[0]
    return (re + 1j * im) / TWO_PI


def random_specs(rng, n):
    return [
        FracModeSpec(rng.uniform(0, 1), rng.uniform(0, TWO_PI)) for _ in range(n)
    ]


# ---------------------------------------------------------------------------
# complex_overlap
# ---------------------------------------------------------------------------


def test_identical_states_overlap_one():
    s = FracModeSpec(0.5, 0.0)
    ov = complex_overlap(s, s)
    assert ov.complex_value == pytest.approx(1.0, abs=1e-12)
    assert ov.squared_magnitude == pytest.approx(1.0, abs=1e-12)


def test_integer_charges_orthogonal():
    a = FracModeSpec(2.0, 0.7)
    b = FracModeSpec(1.0, 0.7)
    assert abs(complex_overlap(a, b).complex_value) < 1e-12


def test_published_five_mode_values():
    # three of the published values for the five-mode reference set
    assert overlap_sq(FracModeSpec(0.4, 0.0), FracModeSpec(0.4, 1.55)) == pytest.approx(
        0.328, abs=5e-4
    )
    assert overlap_sq(FracModeSpec(0.1, 4.77), FracModeSpec(0.4, 0.0)) == pytest.approx(
        0.541, abs=5e-4
    )
    assert overlap_sq(FracModeSpec(0.4, 0.11), FracModeSpec(0.1, 0.0)) == pytest.approx(
        0.719, abs=5e-4
    )


def test_carrier_mismatch_rejected():
    a = FracModeSpec(0.5, 0.0, LgIndex(0, 0))
    b = FracModeSpec(0.5, 0.0, LgIndex(1, 0))
    with pytest.raises(ValueError):
        complex_overlap(a, b)
    with pytest.raises(ValueError):
        overlap_sq(a, b)


def test_quadrature_oracle():
    rng = np.random.default_rng(3)
    worst = 0.0
    for _ in range(1000):
        bra, ket = random_specs(rng, 2)
        got = complex_overlap(ket, bra).complex_value
        want = overlap_by_quadrature(bra, ket)
        worst = max(worst, abs(got - want))
    assert worst < 1e-8


def test_hermiticity():
    rng = np.random.default_rng(4)
    for _ in range(10_000):
        a, b = random_specs(rng, 2)
        zab = complex_overlap(a, b).complex_value
        zba = complex_overlap(b, a).complex_value
        assert abs(zab - np.conj(zba)) < 1e-12


def test_limit_branch_matches_generic_nearby():
    rng = np.random.default_rng(5)
    for _ in range(100):
        ell = rng.uniform(0.05, 0.95)
        alpha, alphap = rng.uniform(0, TWO_PI, 2)
        exact = step_overlap_complex(ell, alphap, ell, alpha)
        nearby = step_overlap_complex(ell, alphap, ell + 1e-6, alpha)
        assert abs(exact - nearby) < 1e-5


# ---------------------------------------------------------------------------
# squared-magnitude forms
# ---------------------------------------------------------------------------


def test_squared_forms_mutually_consistent():
    rng = np.random.default_rng(6)
    for _ in range(2000):
        a, b = random_specs(rng, 2)
        via_complex = abs(complex_overlap(a, b).complex_value) ** 2
        via_sinc = overlap_sq(a, b)
        assert via_sinc == pytest.approx(via_complex, abs=1e-12)
    # special cases agree with the general form on their domains
    for _ in range(500):
        e1, e2 = rng.uniform(0, 1, 2)
        assert overlap_sq_beta0(e1, e2) == pytest.approx(
            float(step_overlap_sq(e1, 0.0, e2, 0.0)), abs=1e-12
        )
        beta = rng.uniform(0, TWO_PI)
        assert overlap_sq_equal_ell(e1, beta) == pytest.approx(
            float(step_overlap_sq(e1, beta, e1, 0.0)), abs=1e-12
        )


def test_shift_invariance():
    rng = np.random.default_rng(7)
    for _ in range(1000):
        e1, e2 = rng.uniform(0, 1, 2)
        a1, a2 = rng.uniform(0, TWO_PI, 2)
        beta = (a1 - a2) % TWO_PI
        direct = float(step_overlap_sq(e1, a1, e2, a2))
        shifted = float(step_overlap_sq(e1, beta, e2, 0.0))
        assert direct == pytest.approx(shifted, abs=1e-12)


def test_beta_reflection_symmetry():
    rng = np.random.default_rng(8)
    for _ in range(1000):
        e1, e2 = rng.uniform(0, 1, 2)
        beta = rng.uniform(0, TWO_PI)
        assert float(step_overlap_sq(e1, beta, e2, 0.0)) == pytest.approx(
            float(step_overlap_sq(e1, TWO_PI - beta, e2, 0.0)), abs=1e-12
        )


def test_beta0_values():
    assert overlap_sq_beta0(0.5, 0.5) == 1.0
    # quadrature oracle for the aligned-direction special case
    want = abs(
        overlap_by_quadrature(FracModeSpec(0.5, 0.0), FracModeSpec(0.22, 0.0))
    ) ** 2
    assert overlap_sq_beta0(0.22, 0.5) == pytest.approx(want, abs=1e-10)
    assert overlap_sq_beta0(0.22, 0.5) == pytest.approx(float(sinc(0.28 * np.pi) ** 2), abs=1e-12)
    assert overlap_sq_beta0(0.0, 0.5) == pytest.approx(4 / np.pi**2, abs=1e-12)


def test_equal_ell_values():
    assert overlap_sq_equal_ell(0.5, np.pi) == pytest.approx(0.0, abs=1e-12)
    assert overlap_sq_equal_ell(0.5, np.pi / 2) == pytest.approx(0.25, abs=1e-12)
    assert overlap_sq_equal_ell(1.0, 1.3) == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(ValueError):
        overlap_sq_equal_ell(0.5, -0.1)


def test_half_charge_quarter_turn():
    a = FracModeSpec(0.5, np.pi / 2)
    b = FracModeSpec(0.5, 0.0)
    assert overlap_sq(a, b) == pytest.approx(0.25, abs=1e-12)


def test_pairwise_matrix_matches_scalar():
    rng = np.random.default_rng(9)
    ells = rng.uniform(0, 1, 5)
    alphas = rng.uniform(0, TWO_PI, 5)
    m = pairwise_overlap_sq(ells, alphas)
    assert np.allclose(m, m.T)
    assert np.allclose(np.diag(m), 1.0)
    for i in range(5):
        for j in range(5):
            want = float(step_overlap_sq(ells[i], alphas[i], ells[j], alphas[j]))
            assert m[i, j] == pytest.approx(want, abs=1e-12)


def test_overlap_value_invariant():
    rng = np.random.default_rng(10)
    for _ in range(200):
        a, b = random_specs(rng, 2)
        ov = complex_overlap(a, b)
        assert ov.squared_magnitude == pytest.approx(abs(ov.complex_value) ** 2, abs=1e-12)
        assert -1e-12 <= ov.squared_magnitude <= 1 + 1e-12
