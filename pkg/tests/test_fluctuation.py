import numpy as np
import pytest

import oracle
from conftest import random_config, random_unit
from twopoint.errors import SingularSupportError, UndefinedFreeEnergyError
from twopoint.fluctuation import (
    dissipation_average,
    exp_neg_info_average,
    free_energy_difference,
    info_thermo_bridge,
    jarzynski_average,
    pointwise_mutual_information,
    thermo_record,
    total_mutual_information,
    work_matrix,
)
from twopoint.protocol import (
    EnergySpec,
    OutcomeDistribution,
    ProtocolConfig,
    joint_distribution,
    pulse_about_axis,
)
from twopoint.qubit import O_AXIS, X_AXIS, Y_AXIS, Z_AXIS, BlochVector, PulseSpec

ALPHA_23 = np.sqrt(2 / 3)


def table4_config(be, axis, theta=0.7):
    return ProtocolConfig(Z_AXIS, axis, pulse_about_axis(axis, theta), beta_E=be, energy=EnergySpec(be))


def pure_config(alpha, k, phi=0.0):
    return ProtocolConfig(Z_AXIS, Y_AXIS, PulseSpec(k * np.pi / 5, phi), alpha=alpha)


def test_independent_distribution_has_zero_information():
    q = np.array([0.3, 0.7])
    p_n = np.array([0.4, 0.6])
    dist = OutcomeDistribution(p_n, q, np.vstack([q, q]), np.outer(p_n, q))
    info = pointwise_mutual_information(dist)
    np.testing.assert_allclose(info.i_nm, 0, atol=1e-15)


@pytest.mark.parametrize("axis", [X_AXIS, Y_AXIS, O_AXIS])
def test_gibbs_suite_information_vanishes(axis):
    dist = joint_distribution(table4_config(1.0, axis))
    info = pointwise_mutual_information(dist)
    np.testing.assert_allclose(info.i_nm, 0, atol=1e-12)
    assert total_mutual_information(dist, info) == pytest.approx(0, abs=1e-12)


def test_pointwise_information_pure_example():
    dist = joint_distribution(pure_config(ALPHA_23, 1))
    info = pointwise_mutual_information(dist)
    p_mm = (1 - np.sin(np.pi / 5)) / 2
    assert info.i_nm[0, 0] == pytest.approx(np.log(p_mm / dist.q_m[0]), abs=1e-12)
    # individual entries can be negative
    assert np.nanmin(info.i_nm) < 0


def test_singular_support_raises():
    dist = OutcomeDistribution(
        np.array([1.0, 0.0]), np.array([0.0, 1.0]),
        np.array([[0.5, 0.5], [np.nan, np.nan]]), np.array([[0.5, 0.5], [0.0, 0.0]]),
    )
    with pytest.raises(SingularSupportError):
        pointwise_mutual_information(dist)


def test_equality_identity_random(rng):
    for _ in range(2000):
        dist = joint_distribution(random_config(rng))
        info = pointwise_mutual_information(dist)
        assert abs(exp_neg_info_average(dist, info) - 1) < 1e-12
        assert total_mutual_information(dist, info) >= -1e-12


def test_equality_holds_for_any_normalised_marginal(rng):
    dist = joint_distribution(pure_config(ALPHA_23, 2))
    for q in rng.dirichlet([1, 1], size=50):
        fake = OutcomeDistribution(dist.p_n, q, dist.p_m_given_n, dist.p_nm)
        assert exp_neg_info_average(fake, pointwise_mutual_information(fake)) == pytest.approx(1, abs=1e-12)


def test_total_information_examples():
    for k in range(1, 5):
        dist = joint_distribution(pure_config(1.0, k))
        assert total_mutual_information(dist, pointwise_mutual_information(dist)) == pytest.approx(0, abs=1e-12)
    dist = joint_distribution(pure_config(ALPHA_23, 4))
    total = total_mutual_information(dist, pointwise_mutual_information(dist))
    rho = oracle.pure(ALPHA_23)
    expected = oracle.mutual_info_total(rho, Z_AXIS, Y_AXIS, oracle.carrier(4 * np.pi / 5, 0))
    assert total == pytest.approx(expected, abs=1e-12)
    assert total == pytest.approx(0.504118570343, abs=1e-11)


def test_total_information_is_weighted_kl(rng):
    for _ in range(200):
        dist = joint_distribution(random_config(rng))
        kl = 0.0
        for n in range(2):
            if dist.p_n[n] == 0:
                continue
            row = dist.p_m_given_n[n]
            mask = row > 0
            kl += dist.p_n[n] * np.sum(row[mask] * np.log(row[mask] / dist.q_m[mask]))
        assert total_mutual_information(dist, pointwise_mutual_information(dist)) == pytest.approx(kl, abs=1e-12)


def test_work_matrix_default_signs():
    w = work_matrix(EnergySpec(1.0))
    assert w[0, 0] == 0
    assert w[0, 1] == -2
    assert w[1, 0] == 2
    assert w[1, 1] == 0


def test_free_energy_difference_examples():
    assert free_energy_difference(EnergySpec(1.0), Z_AXIS, X_AXIS) == pytest.approx(0, abs=1e-15)
    assert free_energy_difference(EnergySpec(500.0), Z_AXIS, O_AXIS) == pytest.approx(0, abs=1e-12)
    # final spectrum doubled: F_i - F_f = (ln Z_f - ln Z_i) / beta
    df = free_energy_difference(EnergySpec(1.0, final_scale=2.0), Z_AXIS, X_AXIS)
    assert df == pytest.approx(np.log(2 * np.cosh(2)) - np.log(2 * np.cosh(1)), abs=1e-12)
    assert df == pytest.approx(0.8912219168748374, abs=1e-12)


def test_free_energy_undefined_at_zero_beta():
    with pytest.raises(UndefinedFreeEnergyError):
        free_energy_difference(EnergySpec(0.0))


@pytest.mark.parametrize("be, axis", [(0.5, X_AXIS), (1.0, O_AXIS)])
def test_jarzynski_examples(be, axis):
    config = table4_config(be, axis)
    dist = joint_distribution(config)
    assert jarzynski_average(dist, thermo_record(config.energy, Z_AXIS, axis)) == pytest.approx(1, abs=1e-12)


def test_jarzynski_negative_control():
    # diag(0.9, 0.1) is not thermal at beta E = 1
    p_n = np.array([0.9, 0.1])
    dist = OutcomeDistribution(p_n, np.array([0.5, 0.5]), np.full((2, 2), 0.5), np.outer(p_n, [0.5, 0.5]))
    value = jarzynski_average(dist, thermo_record(EnergySpec(1.0)))
    assert value == pytest.approx(0.9303536824030081, abs=1e-12)
    assert abs(value - 1) > 1e-3


def test_jarzynski_random_gibbs_non_commuting(rng):
    deviations = []
    for _ in range(1000):
        config = random_config(rng, gibbs=True)
        dist = joint_distribution(config)
        thermo = thermo_record(config.energy, config.p_axis, config.q_axis)
        assert abs(jarzynski_average(dist, thermo) - 1) < 1e-12
        u = oracle.carrier(*config.evolution)
        q_ops = [oracle.proj(config.q_axis, s) for s in (-1, 1)]
        deviations.append(max(np.abs(u @ Q - Q @ u).max() for Q in q_ops))
    assert max(deviations) > 0.1  # the identity held without commutation


def test_jarzynski_unequal_spectra(rng):
    for _ in range(100):
        be = rng.uniform(0.05, 3)
        energy = EnergySpec(be, final_scale=rng.uniform(0.2, 4))
        config = ProtocolConfig(Z_AXIS, random_unit(rng), PulseSpec(*rng.uniform(0, 3, 2)), beta_E=be, energy=energy)
        dist = joint_distribution(config)
        assert jarzynski_average(dist, thermo_record(energy)) == pytest.approx(1, abs=1e-12)


@pytest.mark.parametrize("be, closed", [(0.5, 0.2311), (1.0, 0.7616), (0.0, 0.0)])
def test_dissipation_examples(be, closed):
    dist = joint_distribution(table4_config(be, X_AXIS))
    value = dissipation_average(dist, thermo_record(EnergySpec(be)))
    assert value == pytest.approx(be * np.tanh(be), abs=1e-12)
    assert value == pytest.approx(closed, abs=5e-5)


def test_dissipation_closed_form_in_plane(rng):
    for _ in range(300):
        be = rng.uniform(0, 3)
        phi = rng.uniform(-np.pi, np.pi)
        axis = BlochVector(np.cos(phi), np.sin(phi), 0.0)
        dist = joint_distribution(table4_config(be, axis, theta=rng.uniform(0, 6)))
        assert dissipation_average(dist, thermo_record(EnergySpec(be))) == pytest.approx(be * np.tanh(be), abs=1e-12)


def test_bridge_examples():
    bridge = info_thermo_bridge(thermo_record(EnergySpec(1.0)))
    assert bridge.i_nm[0, 0] == 0 and bridge.i_nm[1, 1] == 0
    assert bridge.i_nm[0, 1] == pytest.approx(2.0)


def test_bridge_composes_with_equality(rng):
    for _ in range(300):
        config = random_config(rng, gibbs=True)
        dist = joint_distribution(config)
        thermo = thermo_record(config.energy)
        assert exp_neg_info_average(dist, info_thermo_bridge(thermo)) == pytest.approx(
            jarzynski_average(dist, thermo), abs=1e-12
        )


def test_label_swap_invariance(rng):
    for _ in range(300):
        config = random_config(rng, gibbs=True)
        dist = joint_distribution(config)
        thermo = thermo_record(config.energy)
        swapped = dist.swap_second_labels()
        thermo_s = thermo_record(config.energy.swapped_final())
        info, info_s = pointwise_mutual_information(dist), pointwise_mutual_information(swapped)
        assert exp_neg_info_average(swapped, info_s) == pytest.approx(exp_neg_info_average(dist, info), abs=1e-12)
        assert total_mutual_information(swapped, info_s) == pytest.approx(total_mutual_information(dist, info), abs=1e-12)
        assert jarzynski_average(swapped, thermo_s) == pytest.approx(jarzynski_average(dist, thermo), abs=1e-12)
        assert dissipation_average(swapped, thermo_s) == pytest.approx(dissipation_average(dist, thermo), abs=1e-12)


def test_label_swap_equals_flipped_axis():
    base = pure_config(ALPHA_23, 3)
    flipped = ProtocolConfig(Z_AXIS, -Y_AXIS, base.evolution, alpha=ALPHA_23)
    a, b = joint_distribution(base), joint_distribution(flipped)
    np.testing.assert_allclose(a.swap_second_labels().p_nm, b.p_nm, atol=1e-12)
    ia, ib = pointwise_mutual_information(a), pointwise_mutual_information(b)
    assert total_mutual_information(a, ia) == pytest.approx(total_mutual_information(b, ib), abs=1e-12)
