"""Complex gradients, Levi matrices, tangent bases and second-order data.

All derivatives are exact symbolic Wirtinger derivatives evaluated at the
requested point; derivative trees are cached per expression, so repeated
point queries against one function stay cheap.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import expr as ex
from .errors import DegenerateGradient, NonHermitianLeviMatrix

HERMITIAN_TOL = 1e-10


@dataclass(frozen=True)
class ComplexGradient:
    components: np.ndarray
    point: np.ndarray

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.components))


@dataclass(frozen=True)
class LeviMatrix:
    entries: np.ndarray
    point: np.ndarray

    def quadratic_form(self, delta) -> complex:
        d = ex.as_point(delta, self.entries.shape[0])
        return complex(d @ self.entries @ d.conj())

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.entries)


@dataclass(frozen=True)
class TangentBasis:
    vectors: np.ndarray        # (n-1, n), rows orthonormal, all Hermitian-orthogonal to conj(grad)
    point: np.ndarray
    gradient_norm: float


@dataclass(frozen=True)
class TaylorParts:
    constant: float
    linear: float
    lambda_part: float
    levi: float
    remainder: float

    def total(self) -> float:
        return self.constant + self.linear + self.lambda_part + self.levi + self.remainder


@lru_cache(maxsize=None)
def _grad_trees(f: ex.Expr, n: int):
    return tuple(ex.wirtinger(f, j + 1, False) for j in range(n))


@lru_cache(maxsize=None)
def _mixed_trees(f: ex.Expr, n: int):
    grads = _grad_trees(f, n)
    return tuple(tuple(ex.wirtinger(grads[j], k + 1, True) for k in range(n))
                 for j in range(n))


@lru_cache(maxsize=None)
def _unmixed_trees(f: ex.Expr, n: int):
    grads = _grad_trees(f, n)
    return tuple(tuple(ex.wirtinger(grads[j], k + 1, False) for k in range(n))
                 for j in range(n))


def complex_gradient(f: ex.Expr, z) -> ComplexGradient:
    """(df/dz_1, ..., df/dz_n) evaluated at z."""
    zz = ex.as_point(z)
    n = zz.shape[0]
    comps = np.array([ex.evaluate(g, zz) for g in _grad_trees(f, n)])
    return ComplexGradient(comps, zz)


def levi_matrix(f: ex.Expr, z) -> LeviMatrix:
    """Matrix of mixed second derivatives d2 f / dz_j dzbar_k at z.

    Raises NonHermitianLeviMatrix when the result is not Hermitian within
    HERMITIAN_TOL, which signals a non-real-valued input.
    """
    zz = ex.as_point(z)
    n = zz.shape[0]
    trees = _mixed_trees(f, n)
    h = np.array([[ex.evaluate(trees[j][k], zz) for k in range(n)]
                  for j in range(n)])
    scale = max(1.0, float(np.max(np.abs(h))))
    if np.max(np.abs(h - h.conj().T)) > HERMITIAN_TOL * scale:
        raise NonHermitianLeviMatrix(
            f"mixed-derivative matrix is not Hermitian at {tuple(zz)}; "
            "is the function real-valued?")
    return LeviMatrix(h, zz)


def levi_form(f: ex.Expr, z, delta) -> float:
    """The Hermitian quadratic form sum_jk f_{z_j zbar_k} delta_j conj(delta_k)."""
    q = levi_matrix(f, z).quadratic_form(delta)
    if abs(q.imag) > HERMITIAN_TOL * max(1.0, abs(q)):
        raise NonHermitianLeviMatrix(
            f"quadratic form has imaginary part {q.imag}; "
            "is the function real-valued?")
    return q.real


def unmixed_matrix(f: ex.Expr, z) -> np.ndarray:
    """Symmetrized matrix of unmixed second derivatives d2 f / dz_j dz_k."""
    zz = ex.as_point(z)
    n = zz.shape[0]
    trees = _unmixed_trees(f, n)
    a = np.array([[ex.evaluate(trees[j][k], zz) for k in range(n)]
                  for j in range(n)])
    return 0.5 * (a + a.T)


def real_gradient(f: ex.Expr, z) -> np.ndarray:
    """Gradient of f as a function of (x_1..x_n, y_1..y_n); real 2n-vector."""
    g = complex_gradient(f, z).components
    return np.concatenate([2.0 * g.real, -2.0 * g.imag])


def real_hessian_matrix(f: ex.Expr, z) -> np.ndarray:
    """Real 2n x 2n Hessian in (x_1..x_n, y_1..y_n) coordinates.

    Assembled from the Wirtinger second derivatives via the standard change
    of variables; valid for real-valued C^2 functions.
    """
    a = unmixed_matrix(f, z)
    b = levi_matrix(f, z).entries
    xx = 2.0 * (a.real + b.real)
    yy = 2.0 * (b.real - a.real)
    xy = 2.0 * (b.imag - a.imag)
    yx = -2.0 * (a.imag + b.imag)
    return np.block([[xx, xy], [yx, yy]])


def real_hessian_form(f: ex.Expr, z, delta_real) -> float:
    """sum_jk d2f/dx_j dx_k delta_j delta_k for a real 2n-direction."""
    h = real_hessian_matrix(f, z)
    d = np.asarray(delta_real, dtype=float)
    if d.shape != (h.shape[0],):
        raise ValueError(f"expected a real vector of length {h.shape[0]}")
    return float(d @ h @ d)


def default_gradient_tol(a) -> float:
    return 1e-8 * (1.0 + float(np.linalg.norm(ex.as_point(a))))


def herm(x, y) -> complex:
    """Hermitian scalar product sum_j x_j conj(y_j)."""
    return complex(np.dot(x, np.conj(y)))


def tangent_basis(f: ex.Expr, a, tol: float | None = None,
                  seed: int | None = None) -> TangentBasis:
    """Orthonormal basis of the complex tangent space at a w.r.t. f.

    The tangent space is the Hermitian-orthogonal complement of
    conj(grad f(a)).  Gram-Schmidt runs over the standard basis vectors;
    ``seed`` permutes their order (the span is contractual, the basis not).
    Raises DegenerateGradient when |grad f(a)| <= tol.
    """
    zz = ex.as_point(a)
    n = zz.shape[0]
    if tol is None:
        tol = default_gradient_tol(zz)
    grad = complex_gradient(f, zz)
    gnorm = grad.norm
    if gnorm <= tol:
        raise DegenerateGradient(
            f"|grad f| = {gnorm:.3g} <= {tol:.3g} at {tuple(zz)}")
    w = grad.components.conj() / gnorm

    order = list(range(n))
    if seed is not None:
        np.random.default_rng(seed).shuffle(order)
    basis = []
    for j in order:
        if len(basis) == n - 1:
            break
        v = np.zeros(n, dtype=complex)
        v[j] = 1.0
        v = v - herm(v, w) * w
        for u in basis:
            v = v - herm(v, u) * u
        norm = np.linalg.norm(v)
        if norm > 1e-8:
            basis.append(v / norm)
    if len(basis) != n - 1:
        raise DegenerateGradient(
            f"Gram-Schmidt produced {len(basis)} tangent vectors, expected {n - 1}")
    mat = np.array(basis) if basis else np.zeros((0, n), dtype=complex)
    return TangentBasis(mat, zz, gnorm)


def restricted_levi_matrix(f: ex.Expr, basis: TangentBasis) -> np.ndarray:
    """Levi form written in the tangent basis: B[p][q] = form(v_p, v_q)."""
    h = levi_matrix(f, basis.point).entries
    v = basis.vectors
    return v @ h @ v.conj().T


def taylor_decompose(f: ex.Expr, a, z) -> TaylorParts:
    """Split f(z) into value, linear, unmixed-quadratic, Levi and remainder parts.

    The five parts sum to f(z) exactly because the remainder is defined as
    the difference.
    """
    aa = ex.as_point(a)
    zz = ex.as_point(z, aa.shape[0])
    d = zz - aa
    f_a = ex.evaluate(f, aa).real
    f_z = ex.evaluate(f, zz).real
    grad = complex_gradient(f, aa).components
    linear = 2.0 * float(np.real(np.dot(d, grad)))
    lam = unmixed_matrix(f, aa)
    lambda_part = float(np.real(d @ lam @ d))
    levi = float(np.real(d @ levi_matrix(f, aa).entries @ d.conj()))
    remainder = f_z - (f_a + linear + lambda_part + levi)
    return TaylorParts(f_a, linear, lambda_part, levi, remainder)


def levi_polynomial(f: ex.Expr, a) -> ex.Expr:
    """Holomorphic degree-<=2 polynomial 2<z-a, conj grad f(a)> + unmixed form.

    Vanishes at a by construction; near a strictly pseudoconvex boundary
    point its real part is negative on the domain side.
    """
    aa = ex.as_point(a)
    n = aa.shape[0]
    grad = complex_gradient(f, aa).components
    lam = unmixed_matrix(f, aa)
    shifted = [ex.sub(ex.var(j + 1), ex.const(aa[j])) for j in range(n)]
    g = ex.const(0)
    for j in range(n):
        g = ex.add(g, ex.mul(ex.const(2.0 * grad[j]), shifted[j]))
    for j in range(n):
        for k in range(n):
            if lam[j][k] != 0:
                g = ex.add(g, ex.mul(ex.const(lam[j][k]),
                                     ex.mul(shifted[j], shifted[k])))
    return g
