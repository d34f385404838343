"""Pure-NumPy implementations of the hot loops.

Selected at import time by :mod:`momentum_walk.kernels` when the compiled
extension is unavailable (or explicitly forced). Signatures and arithmetic
order mirror the Cython kernels so the two backends agree to the last bit
for finite inputs.
"""

import math

import numpy as np

INV_SQRT2 = 1.0 / math.sqrt(2.0)


def _boundary_prob(a, b):
    n = a.shape[0]
    idx = sorted({0, 1, n - 2, n - 1})
    total = 0.0
    for i in idx:
        total += (a[i].real ** 2 + a[i].imag ** 2
                  + b[i].real ** 2 + b[i].imag ** 2)
    return total


def _boundary_prob_field(F):
    n = F.shape[0]
    idx = sorted({0, 1, n - 2, n - 1})
    total = 0.0
    for i in idx:
        total += F[i]
    return total


def moments(F, k_min):
    """Return (norm, mean, variance, participation) of a probability array."""
    n = F.shape[0]
    kf = np.arange(k_min, k_min + n, dtype=np.float64)
    norm = float(np.sum(F))
    mean = float(np.sum(kf * F))
    m2 = float(np.sum((kf * kf) * F))
    variance = m2 - mean * mean
    participation = 1.0 / float(np.sum(F * F))
    return norm, mean, variance, participation


def evolve_coherent(a, b, phase, k_min, t0, rec_steps, boundary_tol, out):
    """Advance (a, b) by rec_steps[-1] applications of the one-step map.

    a, b are updated in place. Rows of ``out`` are filled with
    (t, variance, mean, participation, boundary_leak, norm) at each step
    offset listed in ``rec_steps``. Returns the absolute step number at
    which the boundary check failed, or 0 on success.
    """
    steps = int(rec_steps[-1])
    cur_a, cur_b = a.copy(), b.copy()
    new_a = np.empty_like(a)
    new_b = np.empty_like(b)
    ptr = 0
    for i in range(1, steps + 1):
        leak = _boundary_prob(cur_a, cur_b)
        if leak > boundary_tol:
            a[:] = cur_a
            b[:] = cur_b
            return t0 + i
        tmp = (cur_a[1:] + cur_b[1:]) * INV_SQRT2
        new_a[:-1] = tmp * phase[:-1]
        new_a[-1] = 0.0
        tmp = (cur_a[:-1] - cur_b[:-1]) * INV_SQRT2
        new_b[1:] = tmp * phase[1:]
        new_b[0] = 0.0
        cur_a, new_a = new_a, cur_a
        cur_b, new_b = new_b, cur_b
        if ptr < len(rec_steps) and i == rec_steps[ptr]:
            F = (cur_a.real ** 2 + cur_a.imag ** 2
                 + cur_b.real ** 2 + cur_b.imag ** 2)
            norm, mean, variance, participation = moments(F, k_min)
            out[ptr, 0] = t0 + i
            out[ptr, 1] = variance
            out[ptr, 2] = mean
            out[ptr, 3] = participation
            out[ptr, 4] = _boundary_prob_field(F)
            out[ptr, 5] = norm
            ptr += 1
    a[:] = cur_a
    b[:] = cur_b
    return 0


def markov_evolve(F, k_min, t0, rec_steps, boundary_tol, out):
    """Interference-free counterpart: F_k <- (F_{k+1} + F_{k-1}) / 2."""
    steps = int(rec_steps[-1])
    cur = F.copy()
    new = np.empty_like(F)
    ptr = 0
    for i in range(1, steps + 1):
        leak = _boundary_prob_field(cur)
        if leak > boundary_tol:
            F[:] = cur
            return t0 + i
        new[1:-1] = 0.5 * (cur[2:] + cur[:-2])
        new[0] = 0.5 * cur[1]
        new[-1] = 0.5 * cur[-2]
        cur, new = new, cur
        if ptr < len(rec_steps) and i == rec_steps[ptr]:
            norm, mean, variance, participation = moments(cur, k_min)
            out[ptr, 0] = t0 + i
            out[ptr, 1] = variance
            out[ptr, 2] = mean
            out[ptr, 3] = participation
            out[ptr, 4] = _boundary_prob_field(cur)
            out[ptr, 5] = norm
            ptr += 1
    F[:] = cur
    return 0
