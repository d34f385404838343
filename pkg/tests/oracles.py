"""Independent reference implementations used to cross-check the package.

Everything here is deliberately written against different data structures
(dicts of Python complex numbers, math.fsum reductions) than the package
itself uses.
"""

import math
from collections import defaultdict

INV_SQRT2 = 1.0 / math.sqrt(2.0)


def hadamard_walk(site, chirality, steps):
    """Textbook balanced-coin walk on the line (no drift phase).

    State is a dict {k: [left_amplitude, right_amplitude]} of Python
    complex numbers. The coined left component moves down-index, the right
    component up-index. Returns the dict after ``steps`` applications.
    """
    amps = {site: [complex(chirality[0]), complex(chirality[1])]}
    for _ in range(steps):
        out = defaultdict(lambda: [0j, 0j])
        for k, (al, br) in amps.items():
            out[k - 1][0] += (al + br) * INV_SQRT2
            out[k + 1][1] += (al - br) * INV_SQRT2
        amps = dict(out)
    return amps


def walk_distribution(amps):
    return {k: abs(v[0]) ** 2 + abs(v[1]) ** 2 for k, v in amps.items()}


def walk_moments(amps):
    """(norm, mean, variance) via math.fsum over the dict state."""
    dist = walk_distribution(amps)
    norm = math.fsum(dist.values())
    mean = math.fsum(k * p for k, p in dist.items())
    m2 = math.fsum(k * k * p for k, p in dist.items())
    return norm, mean, m2 - mean * mean


def fsum_moments(F, k_min):
    """Reference (norm, mean, variance, participation) with math.fsum."""
    norm = math.fsum(F)
    mean = math.fsum((k_min + j) * f for j, f in enumerate(F))
    m2 = math.fsum((k_min + j) ** 2 * f for j, f in enumerate(F))
    part = 1.0 / math.fsum(f * f for f in F)
    return norm, mean, m2 - mean * mean, part


def three_term_sequence(g, seed0, seed1):
    """Generate s_{k+1} = g_k s_k - s_{k-1} from two seed values."""
    seq = [complex(seed0), complex(seed1)]
    for j in range(1, len(g)):
        seq.append(g[j] * seq[j] - seq[j - 1])
    return seq
