"""Measured values from the trapped-ion experiment, as (value, standard error)."""
import numpy as np

TAU_THETA = np.pi / 5
RABI_FREQUENCY_KHZ = 47.0

TABLE2_ALPHAS = (1.0, float(np.sqrt(2 / 3)), float(np.sqrt(1 / 3)))
TABLE2_TIMES = (1, 2, 3, 4)
TABLE2 = {
    TABLE2_ALPHAS[0]: {
        "sum_p_I": ((0.001, 0.021), (0.002, 0.006), (0.002, 0.008), (0.001, 0.016)),
        "exp_neg_I": ((0.978, 0.025), (0.978, 0.008), (0.978, 0.011), (0.973, 0.020)),
    },
    TABLE2_ALPHAS[1]: {
        "sum_p_I": ((0.937, 0.054), (0.560, 0.023), (0.508, 0.019), (0.509, 0.046)),
        "exp_neg_I": ((0.985, 0.039), (0.985, 0.061), (1.015, 0.063), (0.974, 0.029)),
    },
    TABLE2_ALPHAS[2]: {
        "sum_p_I": ((0.520, 0.036), (0.540, 0.024), (0.553, 0.025), (0.930, 0.051)),
        "exp_neg_I": ((0.993, 0.059), (1.021, 0.078), (1.023, 0.055), (1.009, 0.029)),
    },
}

TABLE4_BETA_E = (0.2, 0.5, 1.0)
TABLE4_HF = ("Hf1", "Hf2", "Hf3")
TABLE4 = {
    0.2: {
        "dissipation": ((0.046, 0.003), (0.044, 0.004), (0.048, 0.003)),
        "jarzynski": ((0.987, 0.014), (0.998, 0.017), (0.999, 0.014)),
    },
    0.5: {
        "dissipation": ((0.234, 0.008), (0.231, 0.012), (0.240, 0.008)),
        "jarzynski": ((0.990, 0.017), (1.002, 0.020), (1.002, 0.017)),
    },
    1.0: {
        "dissipation": ((0.766, 0.013), (0.761, 0.025), (0.779, 0.015)),
        "jarzynski": ((0.963, 0.023), (0.977, 0.026), (0.976, 0.024)),
    },
}

FIG2_ALPHA = TABLE2_ALPHAS[1]


def time_us(k: float) -> float:
    """Duration of ``k`` units of tau = pi / (5 Omega), in microseconds."""
    return k * TAU_THETA / (2 * np.pi * RABI_FREQUENCY_KHZ * 1e-3)
