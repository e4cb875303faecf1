"""Independent reference implementations used only to check the real ones.

Deliberately avoids every code path under test: plain linear scans instead
of binary search, dense sampling instead of closed-form band inversion.
"""

import numpy as np


def table_of(ds):
    """(xs, labels, matrix) arrays extracted from a dataset."""
    xs = [r.x for r in ds.rows]
    labels = list(ds.z_labels)
    matrix = [[r.values[z] for z in labels] for r in ds.rows]
    return xs, labels, matrix


def sd_value(xs, labels, matrix, x, z):
    """Forward evaluation of the SD surface by linear scans and lerps."""
    i = 0
    while i < len(xs) - 2 and xs[i + 1] < x:
        i += 1
    fx = 0.0 if xs[i + 1] == xs[i] else (x - xs[i]) / (xs[i + 1] - xs[i])
    col = []
    for k in range(len(labels)):
        col.append(matrix[i][k] + fx * (matrix[i + 1][k] - matrix[i][k]))
    j = 0
    while j < len(labels) - 2 and labels[j + 1] < z:
        j += 1
    fz = (z - labels[j]) / (labels[j + 1] - labels[j])
    return col[j] + fz * (col[j + 1] - col[j])


def zscore_dense(ds, x, y, lo=-8.0, hi=8.0, steps_per_unit=512):
    """Invert y -> z by densely sampling the piecewise-linear y(z) curve.

    The grid is aligned to integers, so each micro-interval lies inside a
    single band and local linear inversion is exact up to float rounding.
    """
    xs, labels, matrix = table_of(ds)
    zgrid = np.arange(lo * steps_per_unit, hi * steps_per_unit + 1) / steps_per_unit
    ygrid = np.array([sd_value(xs, labels, matrix, x, z) for z in zgrid])
    k = int(np.searchsorted(ygrid, y, side="right")) - 1
    k = max(0, min(k, len(zgrid) - 2))
    y0, y1 = ygrid[k], ygrid[k + 1]
    return float(zgrid[k] + (y - y0) / (y1 - y0) * (zgrid[k + 1] - zgrid[k]))


def crossings_dense(series, line_points, step=1e-4):
    """Sign changes of (series - line) sampled densely over the overlap."""
    sx = np.array([p[0] for p in series], dtype=float)
    sy = np.array([p[1] for p in series], dtype=float)
    lx = np.array([p[0] for p in line_points], dtype=float)
    ly = np.array([p[1] for p in line_points], dtype=float)
    lo = max(sx[0], lx[0])
    hi = min(sx[-1], lx[-1])
    if hi <= lo:
        return []
    xs = np.arange(lo, hi + step / 2, step)
    d = np.interp(xs, sx, sy) - np.interp(xs, lx, ly)
    sign = np.sign(d)
    nonzero = np.flatnonzero(sign != 0)
    if len(nonzero) < 2:
        return []
    signs = sign[nonzero]
    out = []
    for c in np.flatnonzero(signs[1:] != signs[:-1]):
        i0, i1 = nonzero[c], nonzero[c + 1]
        root = xs[i0] + d[i0] / (d[i0] - d[i1]) * (xs[i1] - xs[i0])
        out.append((float(root), "upward" if signs[c + 1] > 0 else "downward"))
    return out
