"""Levi/strict pseudoconvexity and plurisubharmonicity classification.

Point verdicts come from the spectrum of the Levi form restricted to the
complex tangent space.  Function tests run either spectrally (minimum Levi
eigenvalue over sample points) or through the sub-mean-value criterion on
seeded circles; reports label the latter "sub-mean-value criterion" since
it is the classical consequence of subharmonicity, not its definition.

Everything is one-sided: a stored witness is a re-checkable certificate of
failure, while "consistent" verdicts only say the sampled family found no
obstruction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import calculus as lc
from . import domains as dom
from . import expr as ex
from .errors import DegenerateGradient, LevikitError
from .sampling import deterministic_map, spawn_rngs, unit_vector

STRICTLY_PSEUDOCONVEX = "StrictlyPseudoconvex"
LEVI_ONLY = "LeviPseudoconvexOnly"
NOT_LEVI = "NotLeviPseudoconvex"
DEGENERATE = "DegenerateGradient"

# weakest first; a domain verdict is the weakest sampled point verdict
VERDICT_ORDER = (NOT_LEVI, DEGENERATE, LEVI_ONLY, STRICTLY_PSEUDOCONVEX)

DEFAULT_RADII_RANGE = (1e-3, 0.3)
DEFAULT_QUADRATURE = 64
NEG_INF_CUTOFF = -1e12


@dataclass(frozen=True)
class PointVerdict:
    point: tuple
    gradient_norm: float
    eigenvalues: tuple          # restricted Levi spectrum, sorted ascending
    verdict: str
    min_eigenvalue: float       # +inf for n = 1 (empty tangent space)
    tol_eig: float
    tol_grad: float


@dataclass(frozen=True)
class DomainClassification:
    verdicts: tuple
    counts: dict
    domain_verdict: str
    samples: int
    seed: int


@dataclass(frozen=True)
class PshViolation:
    point: tuple
    direction: tuple
    radius: float               # None in spectral mode
    deficit: float


@dataclass(frozen=True)
class PshVerdict:
    mode: str                   # "LeviSpectral" | "CircleAverage"
    verdict: str                # "ConsistentWithPsh" | "NotPsh"
    violations: tuple
    tested: int
    skipped: int


@dataclass(frozen=True)
class StrictPshVerdict:
    verdict: str                # "StrictConsistent" | "NotStrict"
    min_eigenvalue: float
    witness: tuple
    tested: int


@dataclass(frozen=True)
class LogDistanceReport:
    conclusion: str             # "ConsistentWithPseudoconvex" | "NotPseudoconvex"
    metric: str
    inner: PshVerdict


@dataclass(frozen=True)
class ConvexityVerdict:
    point: tuple
    eigenvalues: tuple          # restricted real Hessian spectrum
    verdict: str                # "ConvexCertified" | "NotConvexCertified" | DEGENERATE
    min_eigenvalue: float


@dataclass(frozen=True)
class LeviLemmaEstimate:
    c: float
    ok: bool
    witness: tuple              # (point, direction) of tangential negativity, or None
    tested: int


def default_eig_tol(h: np.ndarray) -> float:
    return 1e-6 * (1.0 + float(np.linalg.norm(h, 2)))


def verdict_from_spectrum(eigenvalues, tol_eig: float) -> str:
    """Three-way verdict; an empty spectrum (n = 1) is vacuously strict."""
    if len(eigenvalues) == 0:
        return STRICTLY_PSEUDOCONVEX
    lo = min(eigenvalues)
    if lo > tol_eig:
        return STRICTLY_PSEUDOCONVEX
    if lo < -tol_eig:
        return NOT_LEVI
    return LEVI_ONLY


def classify_point(f: ex.Expr, a, tol_grad: float | None = None,
                   tol_eig: float | None = None) -> PointVerdict:
    """Classify one boundary point of {f < 0} by its restricted Levi spectrum."""
    aa = ex.as_point(a)
    if tol_grad is None:
        tol_grad = lc.default_gradient_tol(aa)
    try:
        basis = lc.tangent_basis(f, aa, tol=tol_grad)
    except DegenerateGradient:
        return PointVerdict(tuple(aa), 0.0, (), DEGENERATE, math.nan,
                            tol_eig if tol_eig is not None else math.nan, tol_grad)
    restricted = lc.restricted_levi_matrix(f, basis)
    if tol_eig is None:
        tol_eig = default_eig_tol(lc.levi_matrix(f, aa).entries)
    if restricted.shape[0] == 0:
        return PointVerdict(tuple(aa), basis.gradient_norm, (),
                            STRICTLY_PSEUDOCONVEX, math.inf, tol_eig, tol_grad)
    eigs = np.linalg.eigvalsh(restricted)
    verdict = verdict_from_spectrum(eigs, tol_eig)
    return PointVerdict(tuple(aa), basis.gradient_norm,
                        tuple(float(v) for v in eigs), verdict,
                        float(eigs[0]), tol_eig, tol_grad)


def classify_domain(d, samples: int, seed: int, tol_grad: float | None = None,
                    tol_eig: float | None = None, workers: int = 1) -> DomainClassification:
    """Classify seeded boundary samples; aggregate is the weakest verdict."""
    bset = dom.boundary_sample(d, samples, seed)

    def work(sample):
        f = dom.sample_defining_expr(d, sample)
        return classify_point(f, sample.point, tol_grad=tol_grad, tol_eig=tol_eig)

    verdicts = deterministic_map(work, list(bset.samples), workers)
    counts = {name: 0 for name in VERDICT_ORDER}
    for v in verdicts:
        counts[v.verdict] += 1
    overall = next(name for name in VERDICT_ORDER if counts[name] > 0)
    return DomainClassification(tuple(verdicts), counts, overall, samples, seed)


def convexity_point_check(f: ex.Expr, a, tol: float = 1e-9) -> ConvexityVerdict:
    """Real-Hessian analogue: spectrum restricted to the real tangent hyperplane."""
    aa = ex.as_point(a)
    g = lc.real_gradient(f, aa)
    gnorm = float(np.linalg.norm(g))
    if gnorm <= lc.default_gradient_tol(aa):
        return ConvexityVerdict(tuple(aa), (), DEGENERATE, math.nan)
    m = 2 * aa.shape[0]
    u = g / gnorm
    basis = []
    for j in range(m):
        if len(basis) == m - 1:
            break
        v = np.zeros(m)
        v[j] = 1.0
        v -= np.dot(v, u) * u
        for b in basis:
            v -= np.dot(v, b) * b
        norm = np.linalg.norm(v)
        if norm > 1e-8:
            basis.append(v / norm)
    vmat = np.array(basis)
    hess = lc.real_hessian_matrix(f, aa)
    restricted = vmat @ hess @ vmat.T
    eigs = np.linalg.eigvalsh(restricted)
    verdict = "ConvexCertified" if eigs[0] >= -tol else "NotConvexCertified"
    return ConvexityVerdict(tuple(aa), tuple(float(v) for v in eigs),
                            verdict, float(eigs[0]))


# ---------------------------------------------------------------------------
# plurisubharmonicity tests

def psh_test_spectral(f: ex.Expr, region, grid: int, seed: int,
                      tol: float = 1e-9, workers: int = 1) -> PshVerdict:
    """Minimum Levi eigenvalue over seeded interior points of the region."""
    points = dom.interior_sample(region, grid, seed)

    def work(z):
        try:
            h = lc.levi_matrix(f, z)
        except LevikitError:
            return ("skip", None)
        eigs, vecs = np.linalg.eigh(h.entries)
        if eigs[0] < -tol:
            direction = vecs[:, 0]
            deficit = float(-eigs[0])
            return ("violation", PshViolation(tuple(z), tuple(direction),
                                              None, deficit))
        return ("ok", None)

    results = deterministic_map(work, list(points), workers)
    violations = tuple(v for tag, v in results if tag == "violation")
    skipped = sum(1 for tag, _ in results if tag == "skip")
    verdict = "NotPsh" if violations else "ConsistentWithPsh"
    return PshVerdict("LeviSpectral", verdict, violations,
                      len(points) - skipped, skipped)


def _as_callable(f):
    if isinstance(f, ex.Expr):
        return lambda z: ex.evaluate(f, z).real
    return f


def circle_average_deficit(func, a, direction, radius: float,
                           quadrature: int = DEFAULT_QUADRATURE) -> float:
    """f(a) minus the m-point average of f on the circle a + direction*r*e^it."""
    func = _as_callable(func)
    a = ex.as_point(a)
    direction = ex.as_point(direction, a.shape[0])
    angles = 2.0 * np.pi * np.arange(quadrature) / quadrature
    total = 0.0
    for t in angles:
        total += func(a + direction * radius * np.exp(1j * t))
    return func(a) - total / quadrature


def psh_test_circle_average(func, region, trials: int, seed: int,
                            radii_range=DEFAULT_RADII_RANGE,
                            quadrature: int = DEFAULT_QUADRATURE,
                            tol: float = 1e-9, workers: int = 1,
                            metric: str | None = None) -> PshVerdict:
    """Sub-mean-value probe on seeded (center, direction, radius) triples.

    Radii are log-uniform over ``radii_range`` times the local boundary
    distance, so every tested closed disc stays inside the region.  Samples
    where the function drops below the -inf cutoff or errors are skipped
    and counted.
    """
    fcall = _as_callable(func)
    rngs = spawn_rngs(seed, trials)
    lo, hi = radii_range
    if metric is None:
        metric = dom.natural_metric(region)

    def work(rng):
        centers = dom.interior_sample_rng(region, 1, rng)
        a = centers[0]
        delta = unit_vector(rng, region.dimension)
        try:
            local = dom.distance_to_boundary(region, a, metric)
        except LevikitError:
            return ("skip", None)
        if not math.isfinite(local):
            local = 1.0
        r = local * math.exp(rng.uniform(math.log(lo), math.log(hi)))
        if r >= local:
            return ("skip", None)
        try:
            center_val = fcall(a)
            if center_val <= NEG_INF_CUTOFF:
                return ("skip", None)
            deficit = circle_average_deficit(fcall, a, delta, r, quadrature)
        except LevikitError:
            return ("skip", None)
        if deficit > tol:
            # re-check before storing: stored violations are certificates
            recheck = circle_average_deficit(fcall, a, delta, r, quadrature)
            if recheck > tol:
                return ("violation", PshViolation(tuple(a), tuple(delta),
                                                  float(r), float(recheck)))
        return ("ok", None)

    results = deterministic_map(work, rngs, workers)
    violations = tuple(v for tag, v in results if tag == "violation")
    skipped = sum(1 for tag, _ in results if tag == "skip")
    verdict = "NotPsh" if violations else "ConsistentWithPsh"
    return PshVerdict("CircleAverage", verdict, violations,
                      trials - skipped, skipped)


def log_distance_probe(region, metric: str | None = None, trials: int = 1000,
                       seed: int = 0, tol: float = 1e-9,
                       workers: int = 1) -> LogDistanceReport:
    """Pseudoconvexity evidence: test -ln d(z, boundary) for plurisubharmonicity."""
    if metric is None:
        metric = dom.natural_metric(region)

    def neg_log_dist(z):
        return -math.log(dom.distance_to_boundary(region, z, metric))

    inner = psh_test_circle_average(neg_log_dist, region, trials, seed,
                                    tol=tol, workers=workers, metric=metric)
    conclusion = ("NotPseudoconvex" if inner.verdict == "NotPsh"
                  else "ConsistentWithPseudoconvex")
    return LogDistanceReport(conclusion, metric, inner)


def strict_psh_test(f: ex.Expr, region, grid: int, seed: int,
                    tol: float = 1e-9, workers: int = 1) -> StrictPshVerdict:
    """Strict positivity of the Levi spectrum at every sampled point."""
    points = dom.interior_sample(region, grid, seed)

    def work(z):
        try:
            eigs = lc.levi_matrix(f, z).eigenvalues()
        except LevikitError:
            return None
        return (float(eigs[0]), tuple(z))

    results = [r for r in deterministic_map(work, list(points), workers)
               if r is not None]
    if not results:
        raise LevikitError("no evaluable sample points in the region")
    min_eig, witness = min(results, key=lambda r: r[0])
    verdict = "StrictConsistent" if min_eig > tol else "NotStrict"
    return StrictPshVerdict(verdict, min_eig, witness, len(results))


def levilemma_diagnostic(f: ex.Expr, region, samples: int, seed: int,
                         tol: float = 1e-10) -> LeviLemmaEstimate:
    """Empirical smallest c with form(delta) >= -c |delta| |<delta, conj grad>|.

    Tests raw random directions and their tangential projections at seeded
    interior points; reports failure when a tangential direction carries a
    negative form value (no finite c fits).
    """
    points = dom.interior_sample(region, samples, seed)
    rngs = spawn_rngs(seed + 1, len(points))
    c = 0.0
    tested = 0
    for z, rng in zip(points, rngs):
        try:
            h = lc.levi_matrix(f, z).entries
            grad = lc.complex_gradient(f, z).components
        except LevikitError:
            continue
        delta = unit_vector(rng, region.dimension)
        gnorm = np.linalg.norm(grad)
        if gnorm < 1e-12:
            continue
        w = grad.conj() / gnorm
        tangential = delta - lc.herm(delta, w) * w
        for direction in (delta, tangential):
            dn = np.linalg.norm(direction)
            if dn < 1e-12:
                continue
            form = float(np.real(direction @ h @ direction.conj()))
            tested += 1
            if form >= 0:
                continue
            proj = abs(np.dot(direction, grad))
            if proj <= 1e-10 * gnorm * dn:
                return LeviLemmaEstimate(math.inf, False,
                                         (tuple(z), tuple(direction)), tested)
            c = max(c, -form / (dn * proj))
    return LeviLemmaEstimate(c, True, None, tested)
