"""Brute-force TOPSIS reference, deliberately independent of the engine.

Every step is spelled out with plain Python loops over mpmath values at 60
significant digits, so the engine's float64 pipeline can be checked against
it to tight tolerances. Nothing here imports greenpod.
"""

from mpmath import mp, mpf, sqrt

mp.dps = 60


def vector_normalize_reference(values):
    """Column-wise Euclidean normalization; all-zero columns stay zero."""
    n_rows = len(values)
    n_cols = len(values[0])
    rows = [[mpf(v) for v in row] for row in values]
    out = [[mpf(0)] * n_cols for _ in range(n_rows)]
    for j in range(n_cols):
        total = mpf(0)
        for i in range(n_rows):
            total += rows[i][j] ** 2
        norm = sqrt(total)
        for i in range(n_rows):
            out[i][j] = rows[i][j] / norm if norm > 0 else mpf(0)
    return out


def topsis_reference(values, weights, directions):
    """Full TOPSIS: normalize, weight, ideal points, distances, closeness.

    values     : list of rows (alternatives x criteria), floats
    weights    : list of floats
    directions : list of 'benefit' | 'cost'
    Returns dict with weighted matrix, d_plus, d_minus, closeness and the
    best-first ranking as row indices (ties by input order).
    """
    n_rows = len(values)
    n_cols = len(values[0])
    w = [mpf(x) for x in weights]

    normalized = vector_normalize_reference(values)
    weighted = [[normalized[i][j] * w[j] for j in range(n_cols)] for i in range(n_rows)]

    ideal = []
    anti = []
    for j in range(n_cols):
        col = [weighted[i][j] for i in range(n_rows)]
        if directions[j] == "benefit":
            ideal.append(max(col))
            anti.append(min(col))
        else:
            ideal.append(min(col))
            anti.append(max(col))

    d_plus = []
    d_minus = []
    closeness = []
    for i in range(n_rows):
        sq_p = mpf(0)
        sq_m = mpf(0)
        for j in range(n_cols):
            sq_p += (weighted[i][j] - ideal[j]) ** 2
            sq_m += (weighted[i][j] - anti[j]) ** 2
        dp = sqrt(sq_p)
        dm = sqrt(sq_m)
        d_plus.append(dp)
        d_minus.append(dm)
        denom = dp + dm
        closeness.append(dm / denom if denom > 0 else mpf(1))

    ranking = sorted(range(n_rows), key=lambda i: (-closeness[i], i))
    return {
        "weighted": weighted,
        "d_plus": d_plus,
        "d_minus": d_minus,
        "closeness": closeness,
        "ranking": ranking,
    }


def closeness_floats(values, weights, directions):
    """Reference closeness vector as plain floats."""
    return [float(c) for c in topsis_reference(values, weights, directions)["closeness"]]
