"""Exact single-qubit operator algebra.

Operators are plain ``(2, 2)`` complex numpy arrays in the basis
``(|down>, |up>)``.  With this ordering ``sigma_z = diag(-1, +1)`` so the
ground state ``|down>`` carries energy ``-E`` under ``H = E sigma_z``.

The Pauli set is right-handed (``sigma_x sigma_y = i sigma_z``), which
fixes ``sigma_y |down> = -i |up>``.  This is the convention in which the
raising operator ``|up><down|`` equals ``(sigma_x + i sigma_y) / 2`` and in
which the carrier pulse table values map onto the projectors they are
labelled with.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import InvalidArgumentError, OutcomeImpossibleError

TOL = 1e-12

DOWN = 0
UP = 1

_PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, 1j], [-1j, 0]], dtype=complex),
    "Z": np.array([[-1, 0], [0, 1]], dtype=complex),
}
for _m in _PAULI.values():
    _m.flags.writeable = False


class BlochVector(NamedTuple):
    x: float
    y: float
    z: float

    @property
    def norm(self) -> float:
        return float(np.sqrt(self.x**2 + self.y**2 + self.z**2))

    def __neg__(self) -> "BlochVector":
        return BlochVector(-self.x, -self.y, -self.z)


class PulseSpec(NamedTuple):
    """Carrier pulse area ``theta`` and laser phase ``phi`` (radians)."""

    theta: float
    phi: float

    def normalized(self) -> "PulseSpec":
        """Map into ``theta in [0, 2pi)`` and ``phi in (-pi, pi]``.

        The unitary is unchanged up to a global sign.
        """
        theta = float(np.mod(self.theta, 2 * np.pi))
        phi = float(-np.mod(-self.phi + np.pi, 2 * np.pi) + np.pi)
        return PulseSpec(theta, phi)


X_AXIS = BlochVector(1.0, 0.0, 0.0)
Y_AXIS = BlochVector(0.0, 1.0, 0.0)
Z_AXIS = BlochVector(0.0, 0.0, 1.0)
O_AXIS = BlochVector(0.5, np.sqrt(3) / 2, 0.0)


def as_bloch(n: Sequence[float]) -> BlochVector:
    if isinstance(n, BlochVector):
        return n
    x, y, z = (float(c) for c in n)
    return BlochVector(x, y, z)


def pauli(axis: str) -> np.ndarray:
    """Return the Pauli matrix for ``axis`` in ``{"I", "X", "Y", "Z"}``."""
    try:
        return _PAULI[axis.upper()].copy()
    except (KeyError, AttributeError):
        raise InvalidArgumentError(f"unknown Pauli axis {axis!r}") from None


def is_hermitian(op: np.ndarray, tol: float = TOL) -> bool:
    return bool(np.allclose(op, op.conj().T, rtol=0.0, atol=tol))


def is_unitary(op: np.ndarray, tol: float = TOL) -> bool:
    return bool(np.allclose(op @ op.conj().T, np.eye(2), rtol=0.0, atol=tol))


def is_projector(op: np.ndarray, tol: float = TOL) -> bool:
    return is_hermitian(op, tol) and bool(np.allclose(op @ op, op, rtol=0.0, atol=tol))


def _check_unit(n: BlochVector) -> BlochVector:
    n = as_bloch(n)
    if not np.isfinite(n.norm) or abs(n.norm - 1.0) > TOL:
        raise InvalidArgumentError(f"Bloch vector {tuple(n)} is not unit norm (|n| = {n.norm})")
    return n


def bloch_operator(n: Sequence[float]) -> np.ndarray:
    """``n . sigma`` for a unit Bloch vector."""
    n = _check_unit(n)
    return n.x * _PAULI["X"] + n.y * _PAULI["Y"] + n.z * _PAULI["Z"]


def projector(n: Sequence[float], sign: int) -> np.ndarray:
    """Rank-1 projector ``(I + sign * n . sigma) / 2`` with ``sign`` in {+1, -1}."""
    if sign not in (1, -1):
        raise InvalidArgumentError(f"sign must be +1 or -1, got {sign!r}")
    return (_PAULI["I"] + sign * bloch_operator(n)) / 2


def projector_pair(n: Sequence[float]) -> tuple[np.ndarray, np.ndarray]:
    """``(P_-, P_+)`` ordered like outcome indices 0, 1."""
    return projector(n, -1), projector(n, +1)


def carrier_unitary(pulse: PulseSpec | tuple[float, float]) -> np.ndarray:
    """``cos(theta/2) I - i sin(theta/2) (sigma_x cos phi - sigma_y sin phi)``."""
    theta, phi = pulse
    generator = _PAULI["X"] * np.cos(phi) - _PAULI["Y"] * np.sin(phi)
    return np.cos(theta / 2) * _PAULI["I"] - 1j * np.sin(theta / 2) * generator


def bloch_decompose(op: np.ndarray) -> tuple[float, np.ndarray]:
    """Write a Hermitian ``op`` as ``a I + r . sigma``; returns ``(a, r)``."""
    a = float(np.real(np.trace(op))) / 2
    r = np.array([float(np.real(np.trace(op @ _PAULI[k]))) / 2 for k in "XYZ"])
    return a, r


def exp_hermitian(op: np.ndarray, t: float) -> np.ndarray:
    """``exp(t * op)`` for Hermitian ``op`` and real ``t``, in closed form.

    Uses ``exp(a I + b n.sigma) = e^a (cosh b I + sinh b n.sigma)``.
    """
    if not is_hermitian(op):
        raise InvalidArgumentError("exp_hermitian requires a Hermitian operator")
    a, r = bloch_decompose(op)
    b = float(np.linalg.norm(r))
    out = np.cosh(t * b) * _PAULI["I"]
    if b > 0:
        n = r / b
        out = out + np.sinh(t * b) * (n[0] * _PAULI["X"] + n[1] * _PAULI["Y"] + n[2] * _PAULI["Z"])
    return np.exp(t * a) * out


def partition_function(hamiltonian: np.ndarray, beta: float) -> float:
    """``tr exp(-beta H)``."""
    if not is_hermitian(hamiltonian):
        raise InvalidArgumentError("Hamiltonian must be Hermitian")
    a, r = bloch_decompose(hamiltonian)
    return float(2 * np.exp(-beta * a) * np.cosh(beta * np.linalg.norm(r)))


def log_partition_function(hamiltonian: np.ndarray, beta: float) -> float:
    """``ln tr exp(-beta H)``, stable for large ``beta``."""
    if not is_hermitian(hamiltonian):
        raise InvalidArgumentError("Hamiltonian must be Hermitian")
    a, r = bloch_decompose(hamiltonian)
    x = beta * float(np.linalg.norm(r))
    return float(-beta * a + np.logaddexp(x, -x))


@dataclass(frozen=True, eq=False)
class QubitState:
    """A validated single-qubit density matrix."""

    rho: np.ndarray

    def __post_init__(self):
        rho = np.array(self.rho, dtype=complex)
        if rho.shape != (2, 2) or not np.all(np.isfinite(rho)):
            raise InvalidArgumentError("density matrix must be a finite 2x2 array")
        if not is_hermitian(rho):
            raise InvalidArgumentError("density matrix is not Hermitian")
        if abs(np.trace(rho) - 1) > TOL:
            raise InvalidArgumentError(f"density matrix trace {np.trace(rho).real} != 1")
        if np.linalg.eigvalsh(rho).min() < -TOL:
            raise InvalidArgumentError("density matrix has a negative eigenvalue")
        rho.flags.writeable = False
        object.__setattr__(self, "rho", rho)

    @classmethod
    def from_ket(cls, ket: Sequence[complex]) -> "QubitState":
        psi = np.asarray(ket, dtype=complex)
        psi = psi / np.linalg.norm(psi)
        return cls(np.outer(psi, psi.conj()))

    @classmethod
    def from_bloch(cls, r: Sequence[float]) -> "QubitState":
        r = as_bloch(r)
        return cls((_PAULI["I"] + r.x * _PAULI["X"] + r.y * _PAULI["Y"] + r.z * _PAULI["Z"]) / 2)

    @property
    def bloch(self) -> BlochVector:
        return BlochVector(*(float(np.real(np.trace(self.rho @ _PAULI[k]))) for k in "XYZ"))

    def allclose(self, other: "QubitState | np.ndarray", tol: float = TOL) -> bool:
        other = other.rho if isinstance(other, QubitState) else other
        return bool(np.allclose(self.rho, other, rtol=0.0, atol=tol))

    def __repr__(self) -> str:
        return f"QubitState(bloch={tuple(round(c, 6) for c in self.bloch)})"


def evolve(state: QubitState, unitary: np.ndarray) -> QubitState:
    """``U rho U^dagger``."""
    if not is_unitary(unitary):
        raise InvalidArgumentError("evolve requires a unitary operator")
    return QubitState(unitary @ state.rho @ unitary.conj().T)


def gibbs_state(hamiltonian: np.ndarray, beta: float) -> QubitState:
    """Thermal state ``exp(-beta H) / Z``.

    Evaluated as ``(I - tanh(beta b) n.sigma) / 2`` for ``H = a I + b n.sigma``,
    which is the normalised closed-form exponential and does not overflow.
    """
    if not is_hermitian(hamiltonian):
        raise InvalidArgumentError("Hamiltonian must be Hermitian")
    if beta < 0:
        raise InvalidArgumentError(f"beta must be >= 0, got {beta}")
    _, r = bloch_decompose(hamiltonian)
    b = float(np.linalg.norm(r))
    if b == 0:
        return QubitState(_PAULI["I"] / 2)
    return QubitState.from_bloch(-np.tanh(beta * b) * r / b)


def born_probability(state: QubitState, proj: np.ndarray) -> float:
    """``tr(P rho)`` clamped to [0, 1]; roundoff beyond ``TOL`` is an error."""
    p = float(np.real(np.trace(proj @ state.rho)))
    if p < -TOL or p > 1 + TOL:
        raise InvalidArgumentError(f"Born probability {p} outside [0, 1]")
    return min(max(p, 0.0), 1.0)


def post_measurement_state(state: QubitState, proj: np.ndarray) -> QubitState:
    """Lüders update ``P rho P / tr(P rho P)``."""
    p = born_probability(state, proj)
    if p <= TOL:
        raise OutcomeImpossibleError("cannot condition on an outcome of zero probability")
    return QubitState(proj @ state.rho @ proj / p)
