"""Finite-shot simulation of the protocol with quantum projection noise.

Every probability is estimated from a binary "bright/dark" readout of the
``|up>`` population after a measurement pulse.  Two readout schemes exist:

``projector``
    One setting per projector, as in the pulse tables: ``p_-`` and ``p_+``
    come from separate runs with the ``P_-`` and ``P_+`` pulses, and each
    conditional ``p_{m|n}`` from its own run on the collapsed state
    ``rho_n = P_n``.  Estimates are therefore not forced to sum to one.
``sequential``
    One setting per basis.  Process (III) draws ``n``, collapses, evolves and
    draws ``m`` shot by shot, and conditionals are pair counts over per-``n``
    totals.

With normalised estimates the plug-in ``<e^{-I}>`` equals one identically,
so only the ``projector`` scheme shows estimator scatter in that quantity.

Shots are independent, so per-shot preparation and detection errors are
sampled as binomial splits of the counts, which has the same distribution
as flipping shot by shot.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import InvalidArgumentError, InvalidCountsError
from .fluctuation import (
    ThermoRecord,
    dissipation_average,
    exp_neg_info_average,
    jarzynski_average,
    pointwise_mutual_information,
    total_mutual_information,
)
from .protocol import (
    SIGNS,
    OutcomeDistribution,
    ProtocolConfig,
    measurement_operator,
    pulse_for_projector,
)
from .qubit import QubitState, born_probability, evolve, post_measurement_state, projector

READOUTS = ("projector", "sequential")

PROBABILITY_QUANTITIES = (
    "p_-", "p_+", "q_-", "q_+", "p_-|-", "p_-|+", "p_+|-", "p_+|+",
)
# (n, m) index of each conditional quantity, named p_{m|n}
_COND_CELLS = {"p_-|-": (0, 0), "p_-|+": (1, 0), "p_+|-": (0, 1), "p_+|+": (1, 1)}


@dataclass(frozen=True)
class Spam:
    """Per-shot preparation and detection error probabilities."""

    p_prep: float = 0.0
    p_detect: float = 0.0

    def __post_init__(self):
        for p in (self.p_prep, self.p_detect):
            if not 0.0 <= p <= 1.0:
                raise InvalidArgumentError(f"SPAM probability {p} outside [0, 1]")


MEASURED_SPAM = Spam(0.007, 0.0022)


@dataclass(frozen=True)
class ShotPlan:
    seed: int
    shots: int = 40_000
    replications: int = 100
    spam: Optional[Spam] = None
    readout: str = "projector"

    def __post_init__(self):
        if self.shots < 1:
            raise InvalidArgumentError("shots must be >= 1")
        if self.replications < 1:
            raise InvalidArgumentError("replications must be >= 1")
        if self.readout not in READOUTS:
            raise InvalidArgumentError(f"readout must be one of {READOUTS}")
        if not 0 <= self.seed < 2**64:
            raise InvalidArgumentError("seed must be a 64-bit unsigned integer")

    def rng(self, stream: int = 0, replication: int = 0) -> np.random.Generator:
        """Generator for one replication of one grid cell.

        The substream depends only on ``(seed, stream, replication)``.
        """
        ss = np.random.SeedSequence(self.seed, spawn_key=(stream, replication))
        return np.random.Generator(np.random.PCG64(ss))


@dataclass(frozen=True, eq=False)
class CountsTable:
    """Bright counts and shot denominators for the three processes.

    Estimates are ``count / shots`` elementwise.  A zero conditional
    denominator marks an unobserved conditioning outcome.
    """

    first: np.ndarray
    first_shots: np.ndarray
    second: np.ndarray
    second_shots: np.ndarray
    cond: np.ndarray
    cond_shots: np.ndarray
    readout: str = "projector"

    @classmethod
    def from_distribution(cls, dist: OutcomeDistribution, shots: float) -> "CountsTable":
        """Synthetic counts with frequencies exactly equal to ``dist``."""
        cond = np.nan_to_num(dist.p_m_given_n) * shots
        cond_shots = np.where(dist.defined_rows[:, None], float(shots), 0.0) * np.ones((2, 2))
        full = np.full(2, float(shots))
        return cls(dist.p_n * shots, full, dist.q_m * shots, full.copy(), cond, cond_shots)


@dataclass(frozen=True)
class EstimateReport:
    quantity: str
    point_estimate: float
    rms_error: float
    replications: int
    shots: int
    values: np.ndarray = field(repr=False, compare=False, default=None)

    @property
    def sem(self) -> float:
        """Standard error of the replication mean."""
        return self.rms_error / np.sqrt(self.replications) if self.replications else float("nan")


@dataclass(frozen=True, eq=False)
class PluginEstimate:
    values: dict
    distribution: OutcomeDistribution
    info: Optional[np.ndarray]
    valid: bool
    reason: str = ""

    @property
    def negative_info_count(self) -> int:
        if self.info is None:
            return 0
        return int(np.sum(self.info[self.distribution.p_nm > 0] < 0))


@dataclass(frozen=True, eq=False)
class ReplicationResult:
    reports: dict
    invalid: int
    negative_info: int
    replications_with_negative_info: int
    estimates: list = field(repr=False, default_factory=list)

    def __getitem__(self, quantity: str) -> EstimateReport:
        return self.reports[quantity]


def sample_binary(p: float, n: int, rng: np.random.Generator) -> int:
    """Number of bright outcomes in ``n`` shots of a Bernoulli(``p``) readout."""
    if not 0.0 <= p <= 1.0:
        raise InvalidArgumentError(f"probability {p} outside [0, 1]")
    if n < 0:
        raise InvalidArgumentError("shot count must be >= 0")
    return int(rng.binomial(n, p))


def _flip(count: int, total: int, p_detect: float, rng: np.random.Generator) -> int:
    """Apply symmetric readout flips to a bright count out of ``total``."""
    if p_detect == 0.0:
        return count
    return count - sample_binary(p_detect, count, rng) + sample_binary(p_detect, total - count, rng)


def _orthogonal(state: QubitState) -> QubitState:
    """The Bloch-inverted state ``I - rho``."""
    return QubitState(np.eye(2) - state.rho)


def _binary_setting(
    state: QubitState, unitary: Optional[np.ndarray], pulse, shots: int, spam: Spam,
    rng: np.random.Generator,
) -> int:
    """Bright counts for ``shots`` runs of: prepare, evolve, pulse, detect ``|up>``."""
    op = measurement_operator(pulse)
    branches = [state, _orthogonal(state)]
    n_bad = sample_binary(spam.p_prep, shots, rng)
    bright = 0
    for prepared, n in zip(branches, (shots - n_bad, n_bad)):
        if n == 0:
            continue
        evolved = prepared if unitary is None else evolve(prepared, unitary)
        bright += sample_binary(born_probability(evolved, op), n, rng)
    return _flip(bright, shots, spam.p_detect, rng)


def _simulate_projector(config, plan, rng):
    spam = plan.spam or Spam()
    N = plan.shots
    state = config.initial_state()
    u = config.evolution_unitary()
    first = np.array([
        _binary_setting(state, None, pulse_for_projector(config.p_axis, s), N, spam, rng)
        for s in SIGNS
    ])
    second = np.array([
        _binary_setting(state, u, pulse_for_projector(config.q_axis, s), N, spam, rng)
        for s in SIGNS
    ])
    cond = np.zeros((2, 2), dtype=np.int64)
    for n, s_n in enumerate(SIGNS):
        collapsed = QubitState(projector(config.p_axis, s_n))
        for m, s_m in enumerate(SIGNS):
            cond[n, m] = _binary_setting(
                collapsed, u, pulse_for_projector(config.q_axis, s_m), N, spam, rng
            )
    full = np.full(2, N)
    return CountsTable(first, full, second, full.copy(), cond, np.full((2, 2), N), "projector")


def _simulate_sequential(config, plan, rng):
    spam = plan.spam or Spam()
    N = plan.shots
    state = config.initial_state()
    u = config.evolution_unitary()
    p_plus = pulse_for_projector(config.p_axis, +1)
    q_plus = pulse_for_projector(config.q_axis, +1)

    k = _binary_setting(state, None, p_plus, N, spam, rng)
    first = np.array([N - k, k])
    k = _binary_setting(state, u, q_plus, N, spam, rng)
    second = np.array([N - k, k])

    # process (III): true outcomes first, then readout flips on each record
    p_ops = [measurement_operator(pulse_for_projector(config.p_axis, s)) for s in SIGNS]
    q_ops = [measurement_operator(pulse_for_projector(config.q_axis, s)) for s in SIGNS]
    pairs = np.zeros((2, 2), dtype=np.int64)
    n_bad = sample_binary(spam.p_prep, N, rng)
    for prepared, shots in ((state, N - n_bad), (_orthogonal(state), n_bad)):
        if shots == 0:
            continue
        p_n = np.array([born_probability(prepared, op) for op in p_ops])
        n_counts = rng.multinomial(shots, p_n / p_n.sum())
        for n in range(2):
            if n_counts[n] == 0:
                continue
            rho_n = evolve(post_measurement_state(prepared, p_ops[n]), u)
            q_n = np.array([born_probability(rho_n, op) for op in q_ops])
            pairs[n] += rng.multinomial(n_counts[n], q_n / q_n.sum())
    if spam.p_detect > 0:
        for axis in (0, 1):
            moved = rng.binomial(pairs, spam.p_detect)
            pairs = pairs - moved + np.flip(moved, axis=axis)
    row_totals = np.repeat(pairs.sum(axis=1, keepdims=True), 2, axis=1)
    full = np.full(2, N)
    return CountsTable(first, full, second, full.copy(), pairs, row_totals, "sequential")


def simulate_protocol(
    config: ProtocolConfig, plan: ShotPlan, rng: np.random.Generator
) -> CountsTable:
    """One finite-shot run of all three processes, each with its own shots."""
    if plan.readout == "projector":
        return _simulate_projector(config, plan, rng)
    return _simulate_sequential(config, plan, rng)


def plugin_estimates(
    counts: CountsTable, thermo: Optional[ThermoRecord] = None
) -> PluginEstimate:
    """Substitute empirical frequencies into every functional.

    A replication is marked invalid when a conditional row is unobserved
    but carries weight, or when ``q_m = 0`` meets ``p_{m|n} > 0``; the
    information quantities are then NaN.
    """
    for name in ("first_shots", "second_shots"):
        if np.any(np.asarray(getattr(counts, name)) <= 0):
            raise InvalidCountsError(f"{name} has a zero denominator")
    p_n = np.asarray(counts.first, float) / counts.first_shots
    q_m = np.asarray(counts.second, float) / counts.second_shots
    cond_shots = np.asarray(counts.cond_shots, float)
    with np.errstate(divide="ignore", invalid="ignore"):
        cond = np.where(cond_shots > 0, np.asarray(counts.cond, float) / cond_shots, np.nan)

    valid, reason = True, ""
    undefined = np.isnan(cond).any(axis=1)
    if np.any(undefined & (p_n > 0)):
        valid, reason = False, "unobserved conditioning outcome"
    p_nm = np.where(undefined[:, None], 0.0, p_n[:, None] * np.nan_to_num(cond))
    dist = OutcomeDistribution(p_n, q_m, cond, p_nm)

    values = {
        "p_-": p_n[0], "p_+": p_n[1], "q_-": q_m[0], "q_+": q_m[1],
        **{k: cond[n, m] for k, (n, m) in _COND_CELLS.items()},
    }
    info = None
    if valid and np.any((p_nm > 0) & (q_m[None, :] <= 0)):
        valid, reason = False, "q_m = 0 with p_{m|n} > 0"
    if valid:
        record = pointwise_mutual_information(dist)
        info = record.i_nm
        values["sum_p_I"] = total_mutual_information(dist, record)
        values["exp_neg_I"] = exp_neg_info_average(dist, record)
    else:
        values["sum_p_I"] = values["exp_neg_I"] = float("nan")
    if thermo is not None:
        values["jarzynski"] = jarzynski_average(dist, thermo)
        values["dissipation"] = dissipation_average(dist, thermo)
    values = {k: float(v) for k, v in values.items()}
    return PluginEstimate(values, dist, info, valid, reason)


def _one_replication(config, plan, thermo, stream, rep):
    counts = simulate_protocol(config, plan, plan.rng(stream, rep))
    return plugin_estimates(counts, thermo)


def replicate(
    config: ProtocolConfig,
    plan: ShotPlan,
    thermo: Optional[ThermoRecord] = None,
    stream: int = 0,
    workers: int = 1,
) -> ReplicationResult:
    """Repeat the finite-shot experiment and summarise every quantity.

    ``rms_error`` is the sample standard deviation over replications, i.e.
    the RMS error of a single ``plan.shots`` experiment.  Invalid
    replications are excluded from the summaries and counted.
    """
    if plan.replications < 2:
        raise InvalidArgumentError("need at least 2 replications for an RMS error")
    reps = range(plan.replications)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            estimates = list(pool.map(lambda r: _one_replication(config, plan, thermo, stream, r), reps))
    else:
        estimates = [_one_replication(config, plan, thermo, stream, r) for r in reps]

    keep = [e for e in estimates if e.valid]
    reports = {}
    for name in estimates[0].values:
        vals = np.array([e.values[name] for e in keep], dtype=float)
        vals_ok = vals[~np.isnan(vals)]
        if vals_ok.size >= 2:
            mean, rms = float(vals_ok.mean()), float(vals_ok.std(ddof=1))
        else:
            mean, rms = float("nan"), float("nan")
        reports[name] = EstimateReport(name, mean, rms, int(vals_ok.size), plan.shots, vals)
    negatives = [e.negative_info_count for e in keep]
    return ReplicationResult(
        reports,
        invalid=len(estimates) - len(keep),
        negative_info=int(sum(negatives)),
        replications_with_negative_info=int(sum(1 for n in negatives if n)),
        estimates=estimates,
    )

