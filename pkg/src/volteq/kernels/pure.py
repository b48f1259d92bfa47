"""Pure NumPy fallback for the hot-path kernels.

Same surface and semantics as the compiled ``volteq.kernels._core``; results
agree with it to float rounding (summation order may differ in the last ulp).
"""

import math

import numpy as np


def dbm_to_mw(x_dbm: float) -> float:
    return 10.0 ** (x_dbm / 10.0)


def mw_to_dbm(x_mw: float) -> float:
    return 10.0 * math.log10(x_mw)


def sinr_per_ue(p_serving_mw, p_interf_mw, k, noise_mw):
    """Linear per-UE SINR: serving power over noise plus k-weighted neighbor powers."""
    den = noise_mw + np.asarray(p_interf_mw) @ np.asarray(k)
    return np.asarray(p_serving_mw) / den


def effective_sinr_db(gamma_lin) -> float:
    """10*log10 of the arithmetic mean of linear per-UE SINRs."""
    return 10.0 * math.log10(float(np.mean(gamma_lin)))


def shifted_effective_sinr_db(serving_dbm, denom_mw, delta_db: float) -> float:
    """Effective SINR with every serving-link power shifted by delta_db (dB)
    against fixed per-UE interference-plus-noise denominators (mW)."""
    lin = 10.0 ** ((np.asarray(serving_dbm) + delta_db) / 10.0) / np.asarray(denom_mw)
    return 10.0 * math.log10(float(np.mean(lin)))


def bound_effective_sinr_db(serving_dbm, delta_db: float, denom_mw: float) -> float:
    """Effective SINR when all UEs share one pessimistic denominator (mW)."""
    lin = 10.0 ** ((np.asarray(serving_dbm) + delta_db) / 10.0)
    return 10.0 * math.log10(float(np.mean(lin))) - 10.0 * math.log10(denom_mw)


def q_update(q, s: int, a: int, r: float, s_next: int, alpha: float, gamma: float) -> float:
    """In-place value update Q(s,a) <- (1-a)Q(s,a) + a(r + g*max_a' Q(s',a'))."""
    q[s, a] = (1.0 - alpha) * q[s, a] + alpha * (r + gamma * float(np.max(q[s_next])))
    return float(q[s, a])


def row_argmax(q, s: int) -> int:
    """Greedy action for state s; ties resolve to the lowest action id."""
    return int(np.argmax(q[s]))


def clamped_power_walk_max(p0: float, pmax: float, deltas):
    """Per row: run p <- min(pmax, p + delta) over the row and return the
    largest power reached anywhere along the walk.

    Uses the closed form p[t] = S[t] + min(p0, pmax - max_{k<=t} S[k]) with
    S the running delta sum, which equals the sequential walk exactly.
    """
    s = np.cumsum(np.asarray(deltas, dtype=np.float64), axis=1)
    head = np.minimum(p0, pmax - np.maximum.accumulate(s, axis=1))
    return np.max(s + head, axis=1)
