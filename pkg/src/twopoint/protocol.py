"""Two-projective-measurement protocol on a single qubit.

A protocol instance prepares a state, measures it in the ``P`` basis, lets
it evolve under a carrier pulse, and measures in the ``Q`` basis.  Three
sub-experiments are evaluated exactly:

(I)   first measurement, giving ``p_n``;
(II)  evolution then second measurement with no first measurement, ``q_m``;
(III) second measurement on the collapsed, evolved state ``rho_n``,
      giving the conditionals ``p_{m|n}``.

Outcome index 0 is the ``-`` outcome and index 1 the ``+`` outcome.  For
``p = z`` these are ``|down>`` and ``|up>``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import InvalidArgumentError
from .qubit import (
    TOL,
    UP,
    BlochVector,
    PulseSpec,
    QubitState,
    Z_AXIS,
    as_bloch,
    born_probability,
    carrier_unitary,
    evolve,
    gibbs_state,
    pauli,
    post_measurement_state,
    projector,
    projector_pair,
)

SIGNS = (-1, +1)
LABELS = ("-", "+")


@dataclass(frozen=True)
class EnergySpec:
    """Energies of the two measured Hamiltonians, in units of ``E``.

    ``H_i = sum_n initial_signs[n] * E * P_n`` and
    ``H_f = sum_m final_signs[m] * final_scale * E * Q_m``.  ``beta_E`` is the
    dimensionless product, so energies are measured in ``E`` and ``beta`` in
    ``1/E``.  The default sign map gives the ``-`` outcome energy ``-E``.
    """

    beta_E: float
    initial_signs: tuple[int, int] = (-1, 1)
    final_signs: tuple[int, int] = (-1, 1)
    final_scale: float = 1.0

    def __post_init__(self):
        if not np.isfinite(self.beta_E) or self.beta_E < 0:
            raise InvalidArgumentError(f"beta_E must be finite and >= 0, got {self.beta_E}")
        for signs in (self.initial_signs, self.final_signs):
            if sorted(signs) != [-1, 1]:
                raise InvalidArgumentError(f"sign map must be a permutation of (-1, +1), got {signs}")
        if self.final_scale <= 0:
            raise InvalidArgumentError("final_scale must be positive")

    @property
    def beta(self) -> float:
        return self.beta_E

    @property
    def initial_energies(self) -> np.ndarray:
        return np.array(self.initial_signs, dtype=float)

    @property
    def final_energies(self) -> np.ndarray:
        return self.final_scale * np.array(self.final_signs, dtype=float)

    def swapped_final(self) -> "EnergySpec":
        return EnergySpec(self.beta_E, self.initial_signs, self.final_signs[::-1], self.final_scale)


def hamiltonian(axis: Sequence[float], energies: Sequence[float]) -> np.ndarray:
    """``sum_k energies[k] * projector(axis, SIGNS[k])``."""
    return sum(e * projector(axis, s) for e, s in zip(energies, SIGNS))


@dataclass(frozen=True)
class ProtocolConfig:
    """One protocol instance.

    Exactly one of ``alpha`` (pure preparation) and ``beta_E`` (Gibbs
    preparation) is set.  ``prep_phase`` is the laser phase of the
    preparation pulse.
    """

    p_axis: BlochVector = Z_AXIS
    q_axis: BlochVector = Z_AXIS
    evolution: PulseSpec = PulseSpec(0.0, 0.0)
    alpha: Optional[float] = None
    beta_E: Optional[float] = None
    prep_phase: float = 0.0
    energy: Optional[EnergySpec] = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "p_axis", as_bloch(self.p_axis))
        object.__setattr__(self, "q_axis", as_bloch(self.q_axis))
        object.__setattr__(self, "evolution", PulseSpec(*map(float, self.evolution)))
        if (self.alpha is None) == (self.beta_E is None):
            raise InvalidArgumentError("exactly one of alpha and beta_E must be given")
        if self.alpha is not None and not 0.0 <= self.alpha <= 1.0:
            raise InvalidArgumentError(f"alpha must lie in [0, 1], got {self.alpha}")
        if self.beta_E is not None and not self.beta_E >= 0.0:
            raise InvalidArgumentError(f"beta_E must be >= 0, got {self.beta_E}")
        for ax in (self.p_axis, self.q_axis):
            if abs(ax.norm - 1.0) > TOL:
                raise InvalidArgumentError(f"axis {tuple(ax)} is not unit norm")

    @property
    def is_gibbs(self) -> bool:
        return self.beta_E is not None

    def initial_state(self) -> QubitState:
        if self.is_gibbs:
            return prepare_gibbs(self.beta_E)
        return prepare_pure(self.alpha, self.prep_phase)

    def evolution_unitary(self) -> np.ndarray:
        return carrier_unitary(self.evolution)


@dataclass(frozen=True, eq=False)
class OutcomeDistribution:
    """Outcome statistics of one protocol instance.

    ``p_m_given_n`` has rows indexed by the first outcome; a row is NaN when
    its conditioning outcome is impossible.  Empirical (plug-in) instances
    reuse this type and need not be normalised.
    """

    p_n: np.ndarray
    q_m: np.ndarray
    p_m_given_n: np.ndarray
    p_nm: np.ndarray

    @property
    def defined_rows(self) -> np.ndarray:
        return ~np.isnan(self.p_m_given_n).any(axis=1)

    def validate(self, tol: float = TOL) -> "OutcomeDistribution":
        for name in ("p_n", "q_m", "p_nm"):
            v = getattr(self, name)
            if np.any(v < 0) or np.any(v > 1):
                raise InvalidArgumentError(f"{name} has entries outside [0, 1]")
        if abs(self.p_n.sum() - 1) > tol or abs(self.q_m.sum() - 1) > tol:
            raise InvalidArgumentError("marginals are not normalised")
        rows = self.defined_rows
        if np.any(np.abs(self.p_m_given_n[rows].sum(axis=1) - 1) > tol):
            raise InvalidArgumentError("conditional rows are not normalised")
        if np.any(self.p_n[~rows] > 0):
            raise InvalidArgumentError("undefined conditional row with nonzero weight")
        expected = np.where(rows[:, None], self.p_n[:, None] * np.nan_to_num(self.p_m_given_n), 0.0)
        if np.any(np.abs(self.p_nm - expected) > tol):
            raise InvalidArgumentError("p_nm != p_n * p_{m|n}")
        return self

    def swap_second_labels(self) -> "OutcomeDistribution":
        return OutcomeDistribution(
            self.p_n, self.q_m[::-1], self.p_m_given_n[:, ::-1], self.p_nm[:, ::-1]
        )


def prepare_pure(alpha: float, phase: float = 0.0) -> QubitState:
    """``U_C(2 arccos alpha, phase) |down>``; for zero phase this is
    ``alpha |down> - i sqrt(1 - alpha^2) |up>``."""
    if not 0.0 <= alpha <= 1.0:
        raise InvalidArgumentError(f"alpha must lie in [0, 1], got {alpha}")
    ket = carrier_unitary(PulseSpec(2 * np.arccos(alpha), phase))[:, 0]
    return QubitState.from_ket(ket)


def dephase(state: QubitState) -> QubitState:
    """Erase coherences in the ``(|down>, |up>)`` basis."""
    return QubitState(np.diag(np.diag(state.rho)))


def prepare_gibbs(beta_E: float) -> QubitState:
    """Thermal state of ``E sigma_z`` made by a rotation then full dephasing."""
    if not np.isfinite(beta_E) or beta_E < 0:
        raise InvalidArgumentError(f"beta_E must be finite and >= 0, got {beta_E}")
    # ground-state weight e^{bE}/Z written as 1/(1 + e^{-2bE}) to avoid overflow
    ground = 1.0 / (1.0 + np.exp(-2.0 * beta_E))
    state = dephase(prepare_pure(np.sqrt(ground)))
    reference = gibbs_state(pauli("Z"), beta_E)
    if not state.allclose(reference):
        raise AssertionError("dephased preparation disagrees with the Gibbs state")
    return state


def pulse_for_projector(axis: Sequence[float], sign: int) -> PulseSpec:
    """Measurement pulse mapping ``projector(axis, sign)`` onto ``|up><up|``.

    ``U_C(theta, phi)^dagger |up><up| U_C(theta, phi)`` projects onto the
    Bloch direction ``(sin theta sin phi, sin theta cos phi, cos theta)``, so
    the pulse is read off the polar angles of ``sign * axis``.
    """
    n = as_bloch(axis)
    if abs(n.norm - 1.0) > TOL or sign not in (1, -1):
        raise InvalidArgumentError(f"need a unit axis and sign +/-1, got {tuple(n)}, {sign}")
    # + 0.0 clears negative zeros so atan2 lands in (-pi, pi]
    vx, vy, vz = (sign * c + 0.0 for c in n)
    theta = float(np.arccos(np.clip(vz, -1.0, 1.0)))
    if np.hypot(vx, vy) <= TOL:
        return PulseSpec(theta, 0.0)
    return PulseSpec(theta, float(np.arctan2(vx, vy)))


def measurement_operator(pulse: PulseSpec) -> np.ndarray:
    """``U_C^dagger |up><up| U_C`` for a measurement pulse."""
    u = carrier_unitary(pulse)
    up = np.zeros((2, 2), dtype=complex)
    up[UP, UP] = 1.0
    return u.conj().T @ up @ u


def pulse_about_axis(axis: Sequence[float], theta: float) -> PulseSpec:
    """Carrier pulse rotating by ``theta`` about an equatorial ``axis``.

    The pulse generator is ``sigma_x cos phi - sigma_y sin phi``, so such an
    evolution commutes with ``axis . sigma``.
    """
    n = as_bloch(axis)
    if abs(n.z) > TOL or abs(n.norm - 1.0) > TOL:
        raise InvalidArgumentError("carrier pulses only rotate about equatorial axes")
    return PulseSpec(float(theta), float(np.arctan2(-n.y, n.x)))


def first_measurement(state: QubitState, p_axis: Sequence[float]) -> np.ndarray:
    """``(p_-, p_+)``."""
    return np.array([born_probability(state, P) for P in projector_pair(p_axis)])


def second_measurement_unconditional(
    state: QubitState, evolution: PulseSpec, q_axis: Sequence[float]
) -> np.ndarray:
    """``(q_-, q_+)`` for the evolved state with no first measurement."""
    evolved = evolve(state, carrier_unitary(evolution))
    return np.array([born_probability(evolved, Q) for Q in projector_pair(q_axis)])


def conditional_probabilities(
    state: QubitState, p_axis: Sequence[float], evolution: PulseSpec, q_axis: Sequence[float]
) -> np.ndarray:
    """``p_{m|n}`` with rows indexed by ``n``; impossible ``n`` rows are NaN."""
    u = carrier_unitary(evolution)
    q_pair = projector_pair(q_axis)
    out = np.full((2, 2), np.nan)
    for n, P in enumerate(projector_pair(p_axis)):
        if born_probability(state, P) <= TOL:
            continue
        collapsed = evolve(post_measurement_state(state, P), u)
        out[n] = [born_probability(collapsed, Q) for Q in q_pair]
    return out


def joint_distribution(config: ProtocolConfig) -> OutcomeDistribution:
    state = config.initial_state()
    p_n = first_measurement(state, config.p_axis)
    p_n = np.where(p_n <= TOL, 0.0, p_n)
    p_n = p_n / p_n.sum()
    q_m = second_measurement_unconditional(state, config.evolution, config.q_axis)
    cond = conditional_probabilities(state, config.p_axis, config.evolution, config.q_axis)
    p_nm = np.where(np.isnan(cond), 0.0, p_n[:, None] * np.nan_to_num(cond))
    return OutcomeDistribution(p_n, q_m, cond, p_nm).validate()
