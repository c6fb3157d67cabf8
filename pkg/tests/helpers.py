"""Shared oracles and utilities for the test suite."""

import numpy as np

from levikit import expr as ex


def brute_force_extreme_points(points: np.ndarray) -> set:
    """A point is extreme iff it lies in no triangle of the other points.

    Caratheodory in the plane; vectorized over all triangles per query.
    Assumes general position (random float inputs).
    """
    pts = np.asarray(points, dtype=float)
    n = len(pts)
    idx = np.arange(n)
    from itertools import combinations
    triangles = np.array(list(combinations(range(n), 3)))
    a = pts[triangles[:, 0]]
    b = pts[triangles[:, 1]]
    c = pts[triangles[:, 2]]

    def inside_any(p, skip):
        mask = ~np.any(triangles == skip, axis=1)
        aa, bb, cc = a[mask], b[mask], c[mask]
        d1 = (p[0] - bb[:, 0]) * (aa[:, 1] - bb[:, 1]) - (aa[:, 0] - bb[:, 0]) * (p[1] - bb[:, 1])
        d2 = (p[0] - cc[:, 0]) * (bb[:, 1] - cc[:, 1]) - (bb[:, 0] - cc[:, 0]) * (p[1] - cc[:, 1])
        d3 = (p[0] - aa[:, 0]) * (cc[:, 1] - aa[:, 1]) - (cc[:, 0] - aa[:, 0]) * (p[1] - aa[:, 1])
        neg = (d1 < 0) | (d2 < 0) | (d3 < 0)
        pos = (d1 > 0) | (d2 > 0) | (d3 > 0)
        return bool(np.any(~(neg & pos)))

    extreme = set()
    for i in idx:
        if not inside_any(pts[i], i):
            extreme.add((float(pts[i][0]), float(pts[i][1])))
    return extreme


def random_unitary(rng, n: int) -> np.ndarray:
    """Haar-ish unitary from the QR decomposition of a complex Gaussian."""
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(g)
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))


def compose_with_matrix(f: ex.Expr, v: np.ndarray) -> ex.Expr:
    """Expression for z -> f(V z)."""
    n = v.shape[0]
    mapping = {}
    for j in range(n):
        row = ex.const(0)
        for k in range(n):
            if v[j, k] != 0:
                row = ex.add(row, ex.mul(ex.const(v[j, k]), ex.var(k + 1)))
        mapping[j + 1] = row
    return ex.substitute(f, mapping)
