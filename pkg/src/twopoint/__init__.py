"""Exact and finite-shot simulation of a two-point-measurement qubit protocol,
with the exponential mutual-information and Jarzynski averages."""

from .errors import (
    InvalidArgumentError,
    InvalidCountsError,
    OutcomeImpossibleError,
    SingularSupportError,
    UndefinedFreeEnergyError,
)
from .fluctuation import (
    InfoRecord,
    ThermoRecord,
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
from .montecarlo import CountsTable, EstimateReport, ShotPlan, Spam, plugin_estimates, replicate, simulate_protocol
from .protocol import EnergySpec, OutcomeDistribution, ProtocolConfig, joint_distribution
from .qubit import O_AXIS, X_AXIS, Y_AXIS, Z_AXIS, BlochVector, PulseSpec, QubitState

__version__ = "0.1.0"
