"""Convex hulls, affine-functional and polynomial-family hull membership.

Membership verdicts are one-sided by design: "Outside" always carries a
separating certificate that re-evaluates with margin above tolerance, while
"Inside" only means the tested functional family found no separation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product

import numpy as np

from .errors import LevikitError


@dataclass
class PointSet:
    points: np.ndarray         # (k, n)
    is_complex: bool

    def __post_init__(self):
        dtype = complex if self.is_complex else float
        pts = np.atleast_2d(np.asarray(self.points, dtype=dtype))
        if pts.size == 0:
            raise ValueError("point set must be non-empty")
        self.points = pts

    @property
    def dimension(self):
        return self.points.shape[1]

    def __len__(self):
        return self.points.shape[0]


def real_points(arr) -> PointSet:
    return PointSet(np.asarray(arr, dtype=float), is_complex=False)


def complex_points(arr) -> PointSet:
    return PointSet(np.asarray(arr, dtype=complex), is_complex=True)


def load_point_set(path, dimension: int, is_complex: bool = True) -> PointSet:
    """One point per line, comma-separated real/imag pairs (2n numbers for C^n)."""
    rows = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            vals = [float(v) for v in line.split(",")]
            if is_complex:
                if len(vals) != 2 * dimension:
                    raise LevikitError(
                        f"{path}:{lineno}: expected {2 * dimension} numbers")
                rows.append([complex(vals[2 * j], vals[2 * j + 1])
                             for j in range(dimension)])
            else:
                if len(vals) != dimension:
                    raise LevikitError(
                        f"{path}:{lineno}: expected {dimension} numbers")
                rows.append(vals)
    if not rows:
        raise LevikitError(f"{path}: no points found")
    return PointSet(np.array(rows), is_complex=is_complex)


@dataclass(frozen=True)
class HullMembershipResult:
    query: tuple
    verdict: str               # "Inside" | "Outside" | "BoundaryAmbiguous"
    certificate: dict          # separating functional/polynomial, or None
    tested: int
    best_margin: float         # max over tested of |A(x)| - ||A||_K


# ---------------------------------------------------------------------------
# exact hull in the plane

def convex_hull_2d(points) -> list:
    """Counterclockwise extreme points; collinear interior points excluded."""
    if isinstance(points, PointSet):
        pts = points.points
    else:
        pts = np.asarray(points, dtype=float)
    uniq = sorted({(float(p[0]), float(p[1])) for p in pts})
    if len(uniq) == 1:
        return uniq
    if len(uniq) == 2:
        return uniq

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower = []
    for p in uniq:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper = []
    for p in reversed(uniq):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    if len(hull) == 0:        # all collinear: keep the segment endpoints
        return [uniq[0], uniq[-1]]
    return hull


def polygon_contains(vertices, p, tol: float = 0.0) -> bool:
    """Membership in a convex CCW polygon (closed, within tol of each edge)."""
    if len(vertices) == 1:
        return math.dist(vertices[0], p) <= tol
    if len(vertices) == 2:
        return point_segment_distance(p, vertices[0], vertices[1]) <= tol
    for i in range(len(vertices)):
        a = vertices[i]
        b = vertices[(i + 1) % len(vertices)]
        cross = (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0])
        if cross < -tol:
            return False
    return True


def point_segment_distance(p, a, b) -> float:
    pa = np.asarray(p, dtype=float) - np.asarray(a, dtype=float)
    ba = np.asarray(b, dtype=float) - np.asarray(a, dtype=float)
    denom = float(ba @ ba)
    t = 0.0 if denom == 0 else float(np.clip(pa @ ba / denom, 0.0, 1.0))
    return float(np.linalg.norm(pa - t * ba))


def distance_to_polygon(vertices, p) -> float:
    """Distance from a point to the boundary of a convex polygon."""
    if len(vertices) == 1:
        return math.dist(vertices[0], p)
    return min(point_segment_distance(p, vertices[i],
                                      vertices[(i + 1) % len(vertices)])
               for i in range(len(vertices)))


# ---------------------------------------------------------------------------
# affine outer approximation (real hull)

def affine_functionals(seed: int, count: int, dimension: int,
                       bound: float) -> tuple:
    """(directions, offsets) for the sampled affine family A(y) = u.y + b.

    Directions and offsets come from separately spawned streams so the
    family for a larger count extends the family for a smaller count
    exactly (seed-prefix monotonicity).
    """
    ss_u, ss_b = np.random.SeedSequence(seed).spawn(2)
    raw = np.random.default_rng(ss_u).standard_normal((count, dimension))
    norms = np.maximum(np.linalg.norm(raw, axis=1, keepdims=True), 1e-300)
    offsets = np.random.default_rng(ss_b).uniform(-bound, bound, size=count)
    return raw / norms, offsets


def affine_hull_membership(k_set: PointSet, x, functionals: int = 500,
                           seed: int = 0, tol: float = 1e-9) -> HullMembershipResult:
    """Sampled-affine-functional membership test against the convex hull of K.

    Functionals are A(y) = u . y + b with unit u and offset b uniform in
    [-B, B], B = 2 * coordinate bound of K and x; offsets matter because the
    comparison runs on |A|.  The functional family extends monotonically
    with the count for a fixed seed, so growing ``functionals`` never flips
    an Outside verdict back to Inside.
    """
    if functionals < 1:
        raise ValueError("functional count must be >= 1")
    pts = k_set.points.astype(float)
    xx = np.asarray(x, dtype=float)
    bound = 2.0 * max(float(np.max(np.abs(pts))), float(np.max(np.abs(xx))), 1e-12)
    dirs, offs = affine_functionals(seed, functionals, pts.shape[1], bound)
    values = np.abs(dirs @ xx + offs)
    norms = np.max(np.abs(pts @ dirs.T + offs), axis=0)
    margins = values - norms
    idx = int(np.argmax(margins))
    best_margin = float(margins[idx])
    certificate = None
    if best_margin > tol:
        verdict = "Outside"
        certificate = {"kind": "affine", "direction": tuple(dirs[idx]),
                       "offset": float(offs[idx]), "value": float(values[idx]),
                       "norm_on_set": float(norms[idx])}
    elif best_margin >= -tol:
        verdict = "BoundaryAmbiguous"
    else:
        verdict = "Inside"
    return HullMembershipResult(tuple(float(v) for v in xx), verdict,
                                certificate, functionals, best_margin)


# ---------------------------------------------------------------------------
# polynomial outer approximation (holomorphically convex hull)

def monomial_exponents(dimension: int, degree: int) -> list:
    return [e for e in product(range(degree + 1), repeat=dimension)
            if 0 < sum(e) <= degree]


def _eval_poly(exponents, coefficients, pts: np.ndarray) -> np.ndarray:
    vals = np.zeros(pts.shape[0], dtype=complex)
    for e, c in zip(exponents, coefficients):
        term = np.full(pts.shape[0], c, dtype=complex)
        for j, p in enumerate(e):
            if p:
                term *= pts[:, j] ** p
        vals += term
    return vals


def polynomial_hull_membership(k_set: PointSet, z, degree: int,
                               family: str = "monomials", count: int = 0,
                               seed: int = 0, tol: float = 1e-9) -> HullMembershipResult:
    """Outer polynomial-family test: Outside iff some tested p has
    |p(z)| > sup_K |p| + tol.

    The family is every monomial of total degree 1..degree, optionally plus
    ``count`` seeded polynomials with unit-modulus coefficients on the same
    basis.  Inside only means the tested family does not separate; no claim
    is made about the true holomorphically convex hull.
    """
    if degree < 1:
        raise ValueError("degree must be >= 1")
    if family not in ("monomials", "random", "monomials+random"):
        raise ValueError(f"unknown polynomial family {family!r}")
    pts = k_set.points.astype(complex)
    zz = np.asarray(z, dtype=complex).reshape(1, -1)
    exps = monomial_exponents(pts.shape[1], degree)

    candidates = []
    if family in ("monomials", "monomials+random"):
        for e in exps:
            candidates.append(([e], [1.0 + 0j]))
    if family in ("random", "monomials+random") or count > 0:
        rng = np.random.default_rng(seed)
        for _ in range(count):
            coeffs = np.exp(2j * np.pi * rng.uniform(size=len(exps)))
            candidates.append((exps, list(coeffs)))

    best_margin = -math.inf
    certificate = None
    for exponents, coefficients in candidates:
        value = abs(complex(_eval_poly(exponents, coefficients, zz)[0]))
        norm_k = float(np.max(np.abs(_eval_poly(exponents, coefficients, pts))))
        margin = value - norm_k
        if margin > best_margin:
            best_margin = margin
            if margin > tol:
                certificate = {"kind": "polynomial",
                               "exponents": [list(e) for e in exponents],
                               "coefficients": [[c.real, c.imag]
                                                for c in map(complex, coefficients)],
                               "value": value, "norm_on_set": norm_k}
    if best_margin > tol:
        verdict = "Outside"
    elif best_margin >= -tol:
        verdict = "BoundaryAmbiguous"
        certificate = None
    else:
        verdict = "Inside"
        certificate = None
    query = tuple((v.real, v.imag) for v in np.asarray(z, dtype=complex))
    return HullMembershipResult(query, verdict, certificate,
                                len(candidates), best_margin)


@dataclass(frozen=True)
class CoordinateBound:
    per_coordinate: tuple
    bound: float


def hull_boundedness_check(k_set: PointSet) -> CoordinateBound:
    """sup_K |z_j| per coordinate; any query exceeding a bound is Outside
    via that coordinate functional."""
    per = tuple(float(v) for v in np.max(np.abs(k_set.points), axis=0))
    return CoordinateBound(per, max(per))
