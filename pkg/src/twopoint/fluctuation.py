"""Information and work functionals over two-measurement outcome statistics.

All logarithms are natural.  Terms whose joint weight ``p_nm`` is zero are
dropped (``0 ln 0 = 0``, ``0 e^x = 0``).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import SingularSupportError, UndefinedFreeEnergyError
from .protocol import EnergySpec, OutcomeDistribution, hamiltonian
from .qubit import Z_AXIS, log_partition_function


@dataclass(frozen=True, eq=False)
class InfoRecord:
    """Pointwise information ``i_nm`` (nats); NaN where ``weights == 0``."""

    i_nm: np.ndarray
    weights: np.ndarray

    @property
    def support(self) -> np.ndarray:
        return self.weights > 0


@dataclass(frozen=True, eq=False)
class ThermoRecord:
    """Work ``w_nm = E^i_n - E^f_m`` and ``delta_F = F_i - F_f`` in units of E."""

    w_nm: np.ndarray
    delta_F: float
    beta: float


def pointwise_mutual_information(dist: OutcomeDistribution) -> InfoRecord:
    """``i_nm = ln p_{m|n} - ln q_m`` on the support of ``p_nm``."""
    support = dist.p_nm > 0
    q = np.broadcast_to(dist.q_m, (2, 2))
    if np.any(support & (q <= 0)):
        raise SingularSupportError("q_m = 0 where p_{m|n} > 0")
    with np.errstate(divide="ignore", invalid="ignore"):
        i_nm = np.where(support, np.log(dist.p_m_given_n) - np.log(q), np.nan)
    return InfoRecord(i_nm, dist.p_nm.copy())


def _weighted_sum(weights: np.ndarray, values: np.ndarray) -> float:
    mask = weights > 0
    return float(np.sum(weights[mask] * values[mask]))


def exp_neg_info_average(dist: OutcomeDistribution, info: InfoRecord) -> float:
    """``<e^{-I}> = sum_nm p_nm e^{-i_nm}``."""
    return _weighted_sum(dist.p_nm, np.exp(-info.i_nm))


def total_mutual_information(dist: OutcomeDistribution, info: InfoRecord) -> float:
    """``sum_nm p_nm i_nm``."""
    return _weighted_sum(dist.p_nm, info.i_nm)


def work_matrix(energy: EnergySpec) -> np.ndarray:
    return energy.initial_energies[:, None] - energy.final_energies[None, :]


def free_energy_difference(
    energy: EnergySpec,
    initial_axis: Sequence[float] = Z_AXIS,
    final_axis: Sequence[float] = Z_AXIS,
) -> float:
    """``F_i - F_f`` with ``F = -ln Z / beta``."""
    beta = energy.beta
    if beta <= 0:
        raise UndefinedFreeEnergyError("free energy is undefined at beta = 0")
    log_zi = log_partition_function(hamiltonian(initial_axis, energy.initial_energies), beta)
    log_zf = log_partition_function(hamiltonian(final_axis, energy.final_energies), beta)
    return (log_zf - log_zi) / beta


def thermo_record(
    energy: EnergySpec,
    initial_axis: Sequence[float] = Z_AXIS,
    final_axis: Sequence[float] = Z_AXIS,
) -> ThermoRecord:
    """Work matrix and free-energy difference for ``energy``.

    At ``beta = 0`` the free-energy difference is replaced by its
    high-temperature limit, the difference of spectrum means, so that
    ``beta * delta_F`` stays well defined.
    """
    if energy.beta > 0:
        delta_f = free_energy_difference(energy, initial_axis, final_axis)
    else:
        delta_f = float(energy.initial_energies.mean() - energy.final_energies.mean())
    return ThermoRecord(work_matrix(energy), delta_f, energy.beta)


def jarzynski_average(dist: OutcomeDistribution, thermo: ThermoRecord) -> float:
    """``<e^{beta (W - delta_F)}>``."""
    return _weighted_sum(dist.p_nm, np.exp(thermo.beta * (thermo.w_nm - thermo.delta_F)))


def dissipation_average(dist: OutcomeDistribution, thermo: ThermoRecord) -> float:
    """Dimensionless ``sum_nm p_nm beta (delta_F - W)``."""
    return _weighted_sum(dist.p_nm, thermo.beta * (thermo.delta_F - thermo.w_nm))


def info_thermo_bridge(thermo: ThermoRecord) -> InfoRecord:
    """Thermodynamic information ``i_nm = beta (delta_F - w_nm)``.

    The returned record carries no weights of its own; pair it with the
    physical distribution when averaging.
    """
    i_nm = thermo.beta * (thermo.delta_F - thermo.w_nm)
    return InfoRecord(i_nm, np.ones_like(i_nm))
