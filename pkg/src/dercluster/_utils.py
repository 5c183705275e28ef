import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .exceptions import ParameterError

MASK64 = (1 << 64) - 1


def derive_seed(master, index):
    """Mix a master seed with a stream index into an independent 64-bit seed."""
    ss = np.random.SeedSequence(entropy=int(master) & MASK64, spawn_key=(int(index),))
    lo, hi = ss.generate_state(2, dtype=np.uint32)
    return (int(hi) << 32) | int(lo)


def resolve_seed(seed):
    if seed is None:
        return int(np.random.SeedSequence().entropy) & MASK64
    if isinstance(seed, (int, np.integer)):
        return int(seed) & MASK64
    raise ParameterError(f"seed must be an integer or None, got {seed!r}")


def check_positive_int(name, value, minimum=1):
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)) or value < minimum:
        raise ParameterError(f"{name} must be an integer >= {minimum}, got {value!r}")
    return int(value)


def effective_threads(n_jobs):
    if n_jobs is None or n_jobs <= 0:
        return os.cpu_count() or 1
    return int(n_jobs)


def parallel_map(fn, items, n_jobs=None):
    """Order-preserving map, threaded when more than one worker is allowed."""
    items = list(items)
    workers = min(effective_threads(n_jobs), len(items))
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
