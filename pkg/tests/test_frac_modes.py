import numpy as np
import pytest
from scipy.integrate import quad

from fracoam import (
    CoeffState,
    FracModeSpec,
    LgIndex,
    coeff_overlap,
    complex_overlap,
    expand_in_lg,
    step_phase,
)

TWO_PI = 2 * np.pi


def fourier_coeff_by_quadrature(spec: FracModeSpec, m: int) -> complex:
    """Oracle: c_m = (1/2pi) int exp(-i m phi) f_{ell,alpha}(phi) dphi."""

    def integrand(phi, part):
        v = np.exp(-1j * m * phi) * step_phase(spec, phi)
        return v.real if part == 0 else v.imag

    pts = [spec.alpha] if 0 < spec.alpha < TWO_PI else []
    re = quad(integrand, 0, TWO_PI, args=(0,), points=pts, limit=200)[0]
    im = quad(integrand, 0, TWO_PI, args=(1,), points=pts, limit=200)[0]
    return (re + 1j * im) / TWO_PI


# ---------------------------------------------------------------------------
# step phase
# ---------------------------------------------------------------------------


def test_integer_charge_has_no_extra_factor():
    spec = FracModeSpec(1.0, np.pi / 3)
    phi = np.pi
    assert step_phase(spec, phi) == pytest.approx(np.exp(1j * (phi - np.pi / 3)), abs=1e-12)
    assert abs(step_phase(spec, phi)) == pytest.approx(1.0, abs=1e-15)


def test_half_charge_at_quarter_turn():
    assert step_phase(FracModeSpec(0.5, 0.0), np.pi / 2) == pytest.approx(
        np.exp(1j * np.pi / 4), abs=1e-12
    )


def test_unit_modulus_everywhere():
    rng = np.random.default_rng(0)
    ells = rng.uniform(-3, 3, 10_000)
    alphas = rng.uniform(0, TWO_PI, 10_000)
    phis = rng.uniform(0, TWO_PI, 10_000)
    mags = np.array(
        [abs(step_phase(FracModeSpec(e, a), p)) for e, a, p in zip(ells, alphas, phis)]
    )
    assert np.max(np.abs(mags - 1.0)) < 1e-12


def test_step_sits_at_alpha_and_wrap_is_continuous():
    # branch definition: value jumps by exp(i 2 pi ell) across phi = alpha,
    # while the 0 / 2 pi seam is continuous
    spec = FracModeSpec(0.37, 1.1)
    eps = 1e-9
    below = step_phase(spec, spec.alpha - eps)
    above = step_phase(spec, spec.alpha + eps)
    assert abs(below / above - np.exp(1j * TWO_PI * spec.ell)) < 1e-7
    at_zero = step_phase(spec, 0.0)
    near_wrap = step_phase(spec, TWO_PI - eps)
    assert abs(at_zero - near_wrap) < 1e-7
    # integer charge: no jump anywhere
    ispec = FracModeSpec(2.0, 1.1)
    assert abs(step_phase(ispec, 1.1 - eps) - step_phase(ispec, 1.1 + eps)) < 1e-7


# ---------------------------------------------------------------------------
# LG expansion
# ---------------------------------------------------------------------------


def test_integer_charge_is_single_term():
    state = expand_in_lg(FracModeSpec(2.0, 1.234), 5)
    assert len(state.terms) == 1
    (idx, amp), = state.terms.items()
    assert idx == LgIndex(2, 0)
    assert abs(amp) == pytest.approx(1.0, abs=1e-12)


def test_half_charge_two_leading_terms_equal():
    state = expand_in_lg(FracModeSpec(0.5, 0.0), 2)
    assert set(state.terms) == {LgIndex(0, 0), LgIndex(1, 0)}
    a0, a1 = state.terms[LgIndex(0, 0)], state.terms[LgIndex(1, 0)]
    assert abs(a0) == pytest.approx(abs(a1), abs=1e-12)
    # before renormalization both weights are |sin(pi/2)| / (pi/2)
    assert state.captured_norm == pytest.approx(2 * (2 / np.pi) ** 2, abs=1e-12)


def test_coefficients_match_quadrature_oracle():
    rng = np.random.default_rng(1)
    for _ in range(10):
        spec = FracModeSpec(rng.uniform(0.05, 0.95), rng.uniform(0, TWO_PI))
        state = expand_in_lg(spec, 7)
        scale = np.sqrt(state.captured_norm)
        for idx, amp in state.terms.items():
            want = fourier_coeff_by_quadrature(spec, idx.l)
            assert abs(amp * scale - want) < 1e-9


def test_captured_norm_ten_modes_half_charge():
    state = expand_in_lg(FracModeSpec(0.5, 0.0), 10)
    # analytic oracle: sum of |sin(pi/2)|^2 / (pi (1/2 - m))^2 over the ten
    # retained integer offsets m = -4..5
    want = sum(1.0 / (np.pi * (0.5 - m)) ** 2 for m in range(-4, 6))
    assert state.captured_norm == pytest.approx(want, abs=1e-12)
    assert state.captured_norm == pytest.approx(0.96, abs=5e-3)
    assert state.norm_sq() == pytest.approx(1.0, abs=1e-9)


def test_expansion_rejects_radial_carriers_and_bad_counts():
    with pytest.raises(ValueError):
        expand_in_lg(FracModeSpec(0.5, 0.0, LgIndex(0, 1)), 10)
    with pytest.raises(ValueError):
        expand_in_lg(FracModeSpec(0.5, 0.0), 0)


def test_coefficient_tail_symmetry():
    # for alpha = 0 and ell = j + 1/2 the tails pair up: |c_{j+k}| = |c_{j+1-k}|
    for j in (0, 1):
        spec = FracModeSpec(j + 0.5, 0.0)
        state = expand_in_lg(spec, 12)
        for k in range(1, 5):
            hi = state.terms.get(LgIndex(j + k, 0))
            lo = state.terms.get(LgIndex(j + 1 - k, 0))
            assert hi is not None and lo is not None
            assert abs(hi) == pytest.approx(abs(lo), abs=1e-12)


def test_expansion_overlap_converges_to_analytic():
    for e1 in (0.3, 0.5, 0.7):
        for e2 in (0.3, 0.5, 0.7):
            for a1 in (0.0, 1.0, 2.0):
                for a2 in (0.0, 1.0, 2.0):
                    s1 = FracModeSpec(e1, a1)
                    s2 = FracModeSpec(e2, a2)
                    z_trunc = coeff_overlap(expand_in_lg(s1, 41), expand_in_lg(s2, 41))
                    z_exact = complex_overlap(s2, s1).complex_value  # <s1|s2>
                    assert abs(z_trunc - z_exact) < 0.01


def test_carrier_offset_shifts_term_indices():
    state = expand_in_lg(FracModeSpec(0.5, 0.0, LgIndex(3, 0)), 2)
    assert set(state.terms) == {LgIndex(3, 0), LgIndex(4, 0)}


# ---------------------------------------------------------------------------
# coefficient states
# ---------------------------------------------------------------------------


def test_self_overlap_is_one():
    state = CoeffState({LgIndex(1, 0): 0.6, LgIndex(-1, 0): 0.8j})
    assert coeff_overlap(state, state) == pytest.approx(1.0, abs=1e-12)


def test_disjoint_supports_are_orthogonal():
    up = CoeffState({LgIndex(1, 0): 1.0})
    dn = CoeffState({LgIndex(-1, 0): 1.0})
    assert coeff_overlap(up, dn) == 0.0


def test_coherence_family_crossover_vanishes_at_quarter_pi():
    # brute-force dot product of the two tilted superpositions
    theta = np.pi / 4
    a = CoeffState({LgIndex(1, 0): np.cos(theta), LgIndex(-1, 0): np.sin(theta)})
    c = CoeffState({LgIndex(1, 0): np.cos(theta), LgIndex(-1, 0): -np.sin(theta)})
    want = np.cos(theta) ** 2 - np.sin(theta) ** 2
    assert coeff_overlap(a, c) == pytest.approx(want, abs=1e-12)
    assert abs(coeff_overlap(a, c)) < 1e-12


def test_coeff_state_requires_terms():
    with pytest.raises(ValueError):
        CoeffState({})
