import math

import numpy as np
import pytest

from cpwall import asymptotics
from cpwall.constants import C, HBAR, reduce
from cpwall.errors import ConfigurationError, DomainError, TruncationError
from cpwall.lifshitz import (
    ComputeConfig,
    _y_integrals,
    force_factor,
    free_energy_factor,
    ideal_baselines,
    lifshitz_result,
    plate_energy,
    reflection_coefficients,
    two_semispace_free_energy,
    zero_T_energy_factor,
    zero_T_force_factor,
)
from cpwall.materials import Drude, Ideal, Plasma, SingleOscillator, Static, lookup

AU = lookup("au")


def _state(a, T, atom, metal=AU):
    return reduce(a, T, metal, atom)


def test_reflection_ideal_is_one():
    rp, rs = reflection_coefficients(math.inf, 2.0, np.array([2.0, 5.0]))
    assert np.all(rp == 1) and np.all(rs == 1)


def test_reflection_plasma_zero_frequency():
    y = np.array([0.3, 1.0, 7.0])
    rp, rs = reflection_coefficients(math.inf, 0.0, y, inv_beta_p_sq=100.0)
    assert np.all(rp == 1)
    assert rs == pytest.approx((np.sqrt(y * y + 100) - y) / (np.sqrt(y * y + 100) + y))


def test_reflection_hand_value():
    # beta_p = 0.1, zeta = 1: eps = 101, zeta^2 (eps - 1) = 100
    rp, rs = reflection_coefficients(101.0, 1.0, np.array([1.0]))
    s = math.sqrt(101.0)
    assert rp[0] == pytest.approx((101 - s) / (101 + s), rel=1e-14)
    # with zeta^2 (eps - 1) = eps - 1 both coefficients reduce to (s - 1) / (s + 1)
    assert rp[0] == pytest.approx(0.819002, abs=1e-6)
    assert rs[0] == pytest.approx(rp[0], rel=1e-14)


def test_reflection_preconditions():
    with pytest.raises(DomainError):
        reflection_coefficients(10.0, 2.0, np.array([1.0]))


def test_perp_at_zero_frequency_never_contributes():
    y = 0.0 + np.polynomial.laguerre.laggauss(60)[0]
    w = np.polynomial.laguerre.laggauss(60)[1]
    vals = []
    for inv in (math.inf, 0.0, 100.0, 3.7):
        rp, rs = reflection_coefficients(math.inf, 0.0, y, inv_beta_p_sq=inv)
        vals.append(float(np.dot(w, 2 * y * y * rp + 0.0 * (rs - rp))))
    assert len(set(vals)) == 1
    # the library path never consults r_perp at zeta = 0
    for metal in (AU, Drude(1.37e16, 5e13), Ideal()):
        i0, _ = _y_integrals(metal, np.array([0.0]), 1e14, y, w)
        assert i0[0] == pytest.approx(4.0, rel=1e-13)


@pytest.mark.parametrize(
    "atom,a,which,expected",
    [
        ("he-star", 1.0, "eta", 0.9272),
        ("na", 0.3, "eta", 0.8124),
        ("he-star", 0.2, "kappa", 0.5146),
        ("cs", 0.5, "kappa", 0.8257),
    ],
)
def test_table_examples(atom, a, which, expected):
    at = lookup(atom)
    st = _state(a * 1e-6, 300.0, at)
    fn = free_energy_factor if which == "eta" else force_factor
    assert fn(st, AU, at) == pytest.approx(expected, abs=1e-3)


def test_ideal_static_low_temperature_limit():
    st = reduce(1e-6, 1.0, Ideal(), Static())
    res = lifshitz_result(st, Ideal(), Static())
    assert res.eta == pytest.approx(1.0, abs=1e-6)
    assert res.kappa == pytest.approx(1.0, abs=1e-6)


def test_alpha0_independence_is_bit_exact():
    a_plain = SingleOscillator(1.794e15)
    a_heavy = SingleOscillator(1.794e15, alpha0=4.7e-29)
    r1 = lifshitz_result(_state(0.4e-6, 300.0, a_plain), AU, a_plain)
    r2 = lifshitz_result(_state(0.4e-6, 300.0, a_heavy), AU, a_heavy, alpha0=4.7e-29)
    assert r1.eta == r2.eta and r1.kappa == r2.kappa
    e0, f0 = ideal_baselines(0.4e-6, 4.7e-29)
    assert r2.energy == r2.eta * e0 and r2.force == r2.kappa * f0


@pytest.mark.parametrize("a", [0.15e-6, 0.3e-6, 0.6e-6, 1e-6])
def test_curve_ordering(a):
    he = lookup("he-star")

    def eta(metal, atom):
        return lifshitz_result(reduce(a, 300.0, metal, atom), metal, atom).eta

    dyn_real, dyn_ideal = eta(AU, he), eta(Ideal(), he)
    stat_real, stat_ideal = eta(AU, Static()), eta(Ideal(), Static())
    assert dyn_real < dyn_ideal
    assert stat_real < stat_ideal
    assert dyn_real < stat_real and dyn_ideal < stat_ideal


@pytest.mark.parametrize("a", [0.15e-6, 1e-6, 4e-6])
def test_monotone_truncation(a):
    he = lookup("he-star")
    st = _state(a, 300.0, he)
    base = lifshitz_result(st, AU, he)
    tight = lifshitz_result(st, AU, he, ComputeConfig(matsubara_rel_tol=1e-14, quad_rel_tol=1e-13))
    _, tail = base.truncation_report
    assert abs(tight.eta - base.eta) <= tail
    assert abs(tight.kappa - base.kappa) <= tail


def test_truncation_error_carries_partial():
    st = reduce(1e-6, 1.0, Ideal(), Static())
    with pytest.raises(TruncationError) as info:
        free_energy_factor(st, Ideal(), Static(), ComputeConfig(matsubara_max_terms=5))
    assert info.value.partial is not None


@pytest.mark.parametrize("a", [9e-6, 12e-6])
def test_high_temperature_limit(a):
    st = reduce(a, 300.0, Ideal(), Static())
    assert st.tau >= 14
    res = lifshitz_result(st, Ideal(), Static())
    assert 0.999 <= res.eta * 6 / st.tau <= 1.001
    assert 0.999 <= res.kappa * 8 / st.tau <= 1.001


def test_ideal_static_matches_closed_form():
    # for an ideal wall and a static atom the Matsubara sum is (tau/6)(1 + 2s0 + 2s1 + s2)
    for a in (0.5e-6, 2e-6, 6e-6):
        st = reduce(a, 300.0, Ideal(), Static())
        res = lifshitz_result(st, Ideal(), Static())
        assert res.eta == pytest.approx(asymptotics.eta_large(st), rel=1e-10)
        assert res.kappa == pytest.approx(asymptotics.kappa_large(st), rel=1e-10)


def test_finite_temperature_needs_positive_T():
    with pytest.raises(DomainError):
        free_energy_factor(reduce(1e-6, 0.0, AU, Static()), AU, Static())


def test_zero_T_ideal_static_is_one():
    st = reduce(1e-6, 0.0, Ideal(), Static())
    assert zero_T_energy_factor(st, Ideal(), Static()) == pytest.approx(1.0, rel=1e-10)
    assert zero_T_force_factor(st, Ideal(), Static()) == pytest.approx(1.0, rel=1e-10)


def test_zero_T_small_beta_limit():
    atom = SingleOscillator(1e19)
    metal = Plasma(1e20)
    st = reduce(1e-6, 0.0, metal, atom)
    assert zero_T_energy_factor(st, metal, atom) == pytest.approx(1.0, abs=1e-4)


def test_zero_T_close_to_short_asymptotic():
    he = lookup("he-star")
    st = reduce(0.15e-6, 0.0, AU, he)
    eta0 = zero_T_energy_factor(st, AU, he)
    assert eta0 == pytest.approx(asymptotics.eta_short(st), rel=5e-3)
    assert lifshitz_result(st, AU, he).method == "lifshitz"


def test_baselines():
    e0, f0 = ideal_baselines(1e-6, 1e-30)
    assert e0 < 0 and f0 < 0
    assert f0 / e0 == pytest.approx(4 / 1e-6)
    e2, _ = ideal_baselines(2e-6, 1e-30)
    assert e0 / e2 == pytest.approx(16.0)
    with pytest.raises(ConfigurationError):
        ideal_baselines(1e-6, None)


def test_plate_energy():
    assert plate_energy(1e-6) == pytest.approx(-(math.pi**2) * HBAR * C / 720 * 1e18)
    assert plate_energy(1e-6) == pytest.approx(-4.33e-10, rel=2e-3)


def test_config_validation():
    with pytest.raises(ConfigurationError):
        ComputeConfig(quad_rel_tol=0.1)
    with pytest.raises(ConfigurationError):
        ComputeConfig(matsubara_max_terms=0)


def _alpha(xi, alpha0=4.7e-29, atom=lookup("he-star")):
    return alpha0 * float(atom.ratio(xi))


def test_two_semispace_vanishes_without_gas():
    assert two_semispace_free_energy(1e-6, 300.0, 0.0, _alpha, AU) == 0.0


def test_two_semispace_linear_in_density():
    f1 = two_semispace_free_energy(1e-6, 300.0, 1e20, _alpha, AU) / 1e20
    f2 = two_semispace_free_energy(1e-6, 300.0, 2e20, _alpha, AU) / 2e20
    assert f1 < 0
    assert f1 == pytest.approx(f2, rel=1e-6)


def test_two_semispace_rarefaction_guard():
    with pytest.raises(DomainError):
        two_semispace_free_energy(1e-6, 300.0, 1e27, _alpha, AU)
