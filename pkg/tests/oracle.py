"""Independent reference numerics for the test suite.

Builds its own matrices and uses ``scipy.linalg.expm`` instead of the
package's closed forms.  Basis order (|down>, |up>), right-handed Paulis.
"""
import numpy as np
from scipy.linalg import expm

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, 1j], [-1j, 0]], dtype=complex)
SZ = np.array([[-1, 0], [0, 1]], dtype=complex)
RAISE = np.array([[0, 0], [1, 0]], dtype=complex)  # |up><down|


def carrier(theta, phi):
    """exp(-i theta H_c) with H_c = (sigma_+ e^{i phi} + h.c.) / 2."""
    h = (RAISE * np.exp(1j * phi) + RAISE.conj().T * np.exp(-1j * phi)) / 2
    return expm(-1j * theta * h)


def proj(axis, sign):
    n = np.asarray(axis, float)
    return (I2 + sign * (n[0] * SX + n[1] * SY + n[2] * SZ)) / 2


def pure(alpha):
    psi = np.array([alpha, -1j * np.sqrt(1 - alpha**2)])
    return np.outer(psi, psi.conj())


def gibbs(beta_E, axis=(0, 0, 1)):
    h = proj(axis, 1) - proj(axis, -1)
    g = expm(-beta_E * h)
    return g / np.trace(g)


def joint(rho, p_axis, q_axis, u):
    """Brute-force enumeration of p_nm = tr{Q U P rho P U^dag Q}."""
    out = np.zeros((2, 2))
    for n, sn in enumerate((-1, 1)):
        P = proj(p_axis, sn)
        for m, sm in enumerate((-1, 1)):
            Q = proj(q_axis, sm)
            out[n, m] = np.trace(Q @ u @ P @ rho @ P @ u.conj().T @ Q).real
    return out


def marginal_q(rho, q_axis, u):
    return np.array([np.trace(proj(q_axis, s) @ u @ rho @ u.conj().T).real for s in (-1, 1)])


def mutual_info_total(rho, p_axis, q_axis, u):
    pnm = joint(rho, p_axis, q_axis, u)
    pn = pnm.sum(axis=1)
    q = marginal_q(rho, q_axis, u)
    total = 0.0
    for n in range(2):
        for m in range(2):
            if pnm[n, m] > 1e-15:
                total += pnm[n, m] * np.log(pnm[n, m] / pn[n] / q[m])
    return total
