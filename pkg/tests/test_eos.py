# Copyright Polymorph Corporation (2026)

import math

import numpy as np
import pytest

from eos import (
    BUILTIN_EOS,
    CochranChan,
    EosConfigError,
    EosDomainError,
    HyperbolicityError,
    Ideal,
    Jwl,
    Polynomial,
    Stiffened,
    coefficients,
    condition_report,
    eos_from_dict,
    eos_to_dict,
    fundamental_derivative,
    gamma_infinity,
    internal_energy,
    pressure,
    sound_speed,
    sound_speed_squared,
    validity_domain,
)


WATER = BUILTIN_EOS['polynomial_water']


def test_ideal_gas_sound_speed():
    c = sound_speed(Ideal(1.4), 1.0, 1.0)
    assert c == pytest.approx(math.sqrt(1.4), rel=1e-14)


def test_stiffened_gas_coefficients_and_sound_speed():
    eos = Stiffened(7.15, 3.31e8)
    k = coefficients(eos, 1000.0)
    assert k.gamma == pytest.approx(6.15)
    assert k.h == pytest.approx(-7.15 * 3.31e8)
    assert (k.dgamma, k.d2gamma, k.dh, k.d2h) == (0.0, 0.0, 0.0, 0.0)
    c = sound_speed(eos, 1000.0, 1e5)
    assert c == pytest.approx(math.sqrt(7.15 * (1e5 + 3.31e8) / 1000.0), rel=1e-12)


def test_polynomial_equal_b_gives_constant_gamma():
    rho = np.array([500.0, 1000.0, 2000.0])
    k = coefficients(WATER, rho)
    np.testing.assert_allclose(k.gamma, 0.28)
    np.testing.assert_allclose(k.dgamma, 0.0)


def test_pressure_and_internal_energy_are_inverse():
    for eos, rho, p in [(BUILTIN_EOS['jwl_tnt'], 1630.0, 9.5e9),
                        (BUILTIN_EOS['cochran_chan_saurel'], 1134.0, 2e10),
                        (WATER, 1000.0, 1e5),
                        (WATER, 900.0, 1e5)]:
        e = internal_energy(eos, rho, p)
        assert pressure(eos, rho, e) == pytest.approx(p, rel=1e-12)


def test_gamma_infinity_per_family():
    assert gamma_infinity(Ideal(1.4)) == pytest.approx(0.4)
    assert gamma_infinity(Stiffened(7.15, 3.31e8)) == pytest.approx(6.15)
    assert gamma_infinity(WATER) == pytest.approx(0.28)
    assert gamma_infinity(BUILTIN_EOS['jwl_tnt']) == pytest.approx(0.30)
    assert gamma_infinity(BUILTIN_EOS['cochran_chan_saurel']) == pytest.approx(1.19)


@pytest.mark.parametrize('gamma', [1.2, 1.4, 2.0])
def test_fundamental_derivative_of_ideal_gas(gamma):
    rho = np.geomspace(0.01, 100.0, 7)
    g = fundamental_derivative(Ideal(gamma), rho, 1e5)
    np.testing.assert_allclose(g, (gamma + 1.0) / 2.0, rtol=1e-12)


def test_fundamental_derivative_of_stiffened_gas():
    g = fundamental_derivative(Stiffened(7.15, 3.31e8), 1000.0, 1e5)
    assert g == pytest.approx(8.15 / 2.0, rel=1e-12)


def test_polynomial_validity_lower_bound():
    domain = validity_domain(WATER)
    assert domain.lower == pytest.approx(0.28 * 1000.0 / 2.28, rel=1e-12)
    assert domain.lower == pytest.approx(122.807, rel=1e-5)
    assert math.isinf(domain.upper)


def test_jwl_validity_upper_bound_uses_alpha():
    tnt = BUILTIN_EOS['jwl_tnt']
    exponent = ((2.0 + 0.3) * (4.15 - 0.95) - 0.95) / 0.95
    alpha = 3.23e9 * 0.95**2 / (3.712e11 * 4.15 * (4.15 - 0.95)) * math.exp(exponent)
    upper = 4.15 * 1630.0 / (2.0 + 0.3 + alpha)
    assert validity_domain(tnt).upper == pytest.approx(upper, rel=1e-12)
    assert 2400.0 < upper < 2420.0
    shyue = validity_domain(BUILTIN_EOS['jwl_shyue']).upper
    assert 3390.0 < shyue < 3400.0


def test_density_outside_domain_is_rejected():
    with pytest.raises(EosDomainError) as err:
        pressure(WATER, 100.0, 1.0)
    assert err.value.rho == pytest.approx(100.0)
    with pytest.raises(EosDomainError):
        coefficients(Ideal(1.4), -1.0)


def test_jwl_admits_densities_beyond_the_validity_bound():
    tnt = BUILTIN_EOS['jwl_tnt']
    assert 3000.0 > validity_domain(tnt).upper
    assert sound_speed(tnt, 3000.0, 1e9) > 0


def test_negative_radicand_is_a_hyperbolicity_error():
    eos = Stiffened(7.15, 3.31e8)
    assert sound_speed_squared(eos, 1000.0, -4e8) < 0
    with pytest.raises(HyperbolicityError):
        sound_speed(eos, 1000.0, -4e8)


def test_polynomial_sound_speed_continuous_at_reference_density():
    eps = 1e-12
    lo = sound_speed(WATER, 1000.0 * (1.0 - eps), 1e5)
    hi = sound_speed(WATER, 1000.0 * (1.0 + eps), 1e5)
    assert abs(hi - lo) / hi < 1e-10


@pytest.mark.parametrize('name', sorted(BUILTIN_EOS))
def test_builtin_parameter_sets_pass_every_condition(name):
    failed = [r for r in condition_report(BUILTIN_EOS[name]) if not r.passed]
    assert failed == []


def test_condition_report_lists_family_specific_checks():
    water = {r.name for r in condition_report(WATER)}
    tnt = {r.name for r in condition_report(BUILTIN_EOS['jwl_tnt'])}
    assert 'sound speed continuous at mu=0' in water
    assert 'sound speed continuous at mu=0' not in tnt
    assert {'C3 h\'\' >= 0', 'fundamental derivative > 0', 'validity domain'} <= tnt


def test_condition_report_on_grid_beyond_jwl_bound_only_samples_inside():
    tnt = BUILTIN_EOS['jwl_tnt']
    upper = validity_domain(tnt).upper
    report = condition_report(tnt, rho_grid=np.linspace(0.5 * upper, 1.5 * upper, 41))
    assert all(r.passed for r in report)


def test_constructor_rejects_invalid_parameters():
    with pytest.raises(EosConfigError):
        Ideal(1.0)
    with pytest.raises(EosConfigError):
        Stiffened(7.15, -1.0)
    with pytest.raises(EosConfigError):
        Polynomial(2.2e9, 9.54e9, 1.45e10, 0.1, 0.28, 2.2e9, 0.0, 1000.0)
    with pytest.raises(EosConfigError):
        Jwl(3.712e11, 3.23e9, 0.3, 0.95, 4.15, 1630.0)
    with pytest.raises(EosConfigError):
        CochranChan(8.192e8, 1.508e9, 5.0, 4.53, 1.42, 1134.0)


def test_dict_records_rebuild_the_same_model():
    for eos in BUILTIN_EOS.values():
        assert eos_from_dict(eos_to_dict(eos)) == eos
    assert eos_from_dict('stiffened_water') == BUILTIN_EOS['stiffened_water']


def test_dict_records_reject_bad_input():
    with pytest.raises(EosConfigError):
        eos_from_dict({'kind': 'vdw', 'a': 1.0})
    with pytest.raises(EosConfigError):
        eos_from_dict({'kind': 'ideal'})
    with pytest.raises(EosConfigError):
        eos_from_dict({'kind': 'ideal', 'gamma': 1.4, 'p_inf': 0.0})
    with pytest.raises(EosConfigError):
        eos_from_dict('unobtainium')


# Analytic derivatives against centered differences

VARIABLE_GAMMA_WATER = Polynomial(a1=2.2e9, a2=9.54e9, a3=1.45e10, b0=0.9, b1=0.28,
                                  t1=2.2e9, t2=0.0, rho0=1000.0)


DERIVATIVE_OF = {'gamma': 'dgamma', 'dgamma': 'd2gamma', 'h': 'dh', 'dh': 'd2h'}


def centered_errors(eos, name, rho, step):
    analytic = getattr(coefficients(eos, rho), DERIVATIVE_OF[name])
    errors = []
    for d in (step, step / 2):
        fd = (getattr(coefficients(eos, rho + d), name) - getattr(coefficients(eos, rho - d), name)) / (2 * d)
        errors.append(abs(fd - analytic))
    return analytic, errors


@pytest.mark.parametrize('eos,rho,name', [
    (VARIABLE_GAMMA_WATER, 1100.0, 'gamma'),
    (VARIABLE_GAMMA_WATER, 1100.0, 'h'),
    (BUILTIN_EOS['jwl_tnt'], 1630.0, 'h'),
    (BUILTIN_EOS['jwl_tnt'], 2500.0, 'dh'),
    (BUILTIN_EOS['cochran_chan_saurel'], 1300.0, 'h'),
    (BUILTIN_EOS['cochran_chan_saurel'], 1300.0, 'dh'),
])
def test_coefficient_derivatives_are_second_order_consistent(eos, rho, name):
    analytic, (coarse, fine) = centered_errors(eos, name, rho, 1e-2 * rho)
    assert coarse < 1e-3 * abs(analytic)
    # halving the step quarters the error
    assert fine == pytest.approx(coarse / 4, rel=0.1)


def test_polynomial_gamma_derivative_in_closed_form():
    k = coefficients(VARIABLE_GAMMA_WATER, 1100.0)
    assert k.dgamma == pytest.approx(-(0.9 - 0.28) * 1000.0 / 1100.0**2, rel=1e-14)
    assert k.d2gamma == pytest.approx(2 * (0.9 - 0.28) * 1000.0 / 1100.0**3, rel=1e-14)


def test_jwl_cold_term_at_reference_density():
    expected = (3.712e11 * (1 - 0.3 / 4.15) * math.exp(-4.15)
                + 3.23e9 * (1 - 0.3 / 0.95) * math.exp(-0.95))
    assert coefficients(BUILTIN_EOS['jwl_tnt'], 1630.0).h == pytest.approx(expected, rel=1e-14)
    assert expected == pytest.approx(6.28e9, rel=1e-2)
