"""Numeric TOPSIS kernels.

The closeness computation runs once per scheduling decision and dominates
factorial sweeps, so it ships in two flavors: a numba ``@njit`` kernel (the
default) and a pure-numpy fallback. Set ``GREENPOD_PURE_NUMPY=1`` before
import to skip numba entirely; ``set_backend`` switches at runtime (used by
the benchmark and the cross-check tests).

Both paths take the raw decision values, the weight vector, and a boolean
benefit mask and return ``(weighted, d_plus, d_minus, closeness)``. All-zero
columns normalize to zero; a degenerate alternative with d+ + d- == 0 gets
closeness 1.0.
"""

import os

import numpy as np

_FORCE_NUMPY = os.environ.get("GREENPOD_PURE_NUMPY", "") not in ("", "0")


def _closeness_numpy(values, weights, benefit):
    norms = np.sqrt(np.sum(values * values, axis=0))
    safe = np.where(norms > 0.0, norms, 1.0)
    weighted = (values / safe) * weights

    col_max = weighted.max(axis=0)
    col_min = weighted.min(axis=0)
    ideal = np.where(benefit, col_max, col_min)
    anti = np.where(benefit, col_min, col_max)

    d_plus = np.sqrt(np.sum((weighted - ideal) ** 2, axis=1))
    d_minus = np.sqrt(np.sum((weighted - anti) ** 2, axis=1))

    denom = d_plus + d_minus
    closeness = np.where(denom > 0.0, d_minus / np.where(denom > 0.0, denom, 1.0), 1.0)
    return weighted, d_plus, d_minus, closeness


def _closeness_loops(values, weights, benefit):
    n_alt, n_crit = values.shape
    weighted = np.empty((n_alt, n_crit))
    ideal = np.empty(n_crit)
    anti = np.empty(n_crit)

    for j in range(n_crit):
        sq = 0.0
        for i in range(n_alt):
            sq += values[i, j] * values[i, j]
        norm = np.sqrt(sq)
        if norm > 0.0:
            for i in range(n_alt):
                weighted[i, j] = values[i, j] / norm * weights[j]
        else:
            for i in range(n_alt):
                weighted[i, j] = 0.0
        lo = weighted[0, j]
        hi = weighted[0, j]
        for i in range(1, n_alt):
            v = weighted[i, j]
            if v < lo:
                lo = v
            if v > hi:
                hi = v
        if benefit[j]:
            ideal[j] = hi
            anti[j] = lo
        else:
            ideal[j] = lo
            anti[j] = hi

    d_plus = np.empty(n_alt)
    d_minus = np.empty(n_alt)
    closeness = np.empty(n_alt)
    for i in range(n_alt):
        sp = 0.0
        sm = 0.0
        for j in range(n_crit):
            dp = weighted[i, j] - ideal[j]
            dm = weighted[i, j] - anti[j]
            sp += dp * dp
            sm += dm * dm
        d_plus[i] = np.sqrt(sp)
        d_minus[i] = np.sqrt(sm)
        denom = d_plus[i] + d_minus[i]
        closeness[i] = d_minus[i] / denom if denom > 0.0 else 1.0
    return weighted, d_plus, d_minus, closeness


_closeness_numba = None
if not _FORCE_NUMPY:
    try:
        from numba import njit

        _closeness_numba = njit(cache=True)(_closeness_loops)
    except ImportError:
        _closeness_numba = None

_backend = "numba" if _closeness_numba is not None else "numpy"


def active_backend():
    return _backend


def set_backend(name):
    """Select 'numba' or 'numpy' at runtime; returns the previous backend."""
    global _backend
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and _closeness_numba is None:
        raise ValueError("numba backend unavailable (GREENPOD_PURE_NUMPY set or numba missing)")
    previous = _backend
    _backend = name
    return previous


def topsis_closeness(values, weights, benefit):
    """Dispatch to the active kernel.

    values  : float64 array (alternatives x criteria), C-contiguous
    weights : float64 array (criteria,)
    benefit : bool array (criteria,), True where larger is better
    """
    if _backend == "numba":
        return _closeness_numba(values, weights, benefit)
    return _closeness_numpy(values, weights, benefit)


def vector_normalize(values):
    """Column-wise Euclidean normalization; all-zero columns stay zero."""
    norms = np.sqrt(np.sum(values * values, axis=0))
    safe = np.where(norms > 0.0, norms, 1.0)
    return values / safe
