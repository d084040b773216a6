"""Objective container and finite-difference derivative checks.

An Objective supplies analytic value/gradient/Hessian plus a directional
third derivative D3f(x)[u,v,w]. Values outside the domain are the +inf
sentinel, which line searches treat as automatic rejection.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DomainViolation
from .numerics import Vector, as_vector

ValueFn = Callable[[Vector], float]
GradFn = Callable[[Vector], Vector]
HessFn = Callable[[Vector], np.ndarray]
ThirdFn = Callable[[Vector, Vector, Vector, Vector], float]
DomainFn = Callable[[Vector], bool]


def _whole_space(x: Vector) -> bool:
    return True


@dataclass(frozen=True)
class Objective:
    dim: int
    value: ValueFn
    gradient: GradFn
    hessian: HessFn
    third_directional: ThirdFn
    in_domain: DomainFn = field(default=_whole_space)


def make_objective(dim: int, value: ValueFn, gradient: GradFn, hessian: HessFn,
                   third_directional: ThirdFn,
                   in_domain: DomainFn | None = None) -> Objective:
    """Build an Objective whose value returns +inf outside the domain.

    Derivative callables are left unwrapped; algorithms only evaluate them
    at accepted (in-domain) points.
    """
    if in_domain is None:
        return Objective(dim, value, gradient, hessian, third_directional)

    def guarded(x: Vector) -> float:
        if not in_domain(x):
            return float("inf")
        return value(x)

    return Objective(dim, guarded, gradient, hessian, third_directional,
                     in_domain)


def _stencil_value(obj: Objective, x: Vector) -> float:
    f = obj.value(x)
    if not np.isfinite(f):
        raise DomainViolation(f"stencil point {x} has non-finite value {f}")
    return f


def fd_gradient(obj: Objective, x, h: float = 1e-5) -> Vector:
    """Central-difference gradient. Raises DomainViolation when a stencil
    point falls outside the domain."""
    x = as_vector(x)
    g = np.empty(obj.dim)
    for i in range(obj.dim):
        e = np.zeros(obj.dim)
        e[i] = h
        g[i] = (_stencil_value(obj, x + e) - _stencil_value(obj, x - e)) / (2.0 * h)
    return g


def fd_hessian(obj: Objective, x, h: float = 1e-4) -> np.ndarray:
    """Central-difference Hessian (symmetric by construction)."""
    x = as_vector(x)
    n = obj.dim
    H = np.empty((n, n))
    f0 = _stencil_value(obj, x)
    for i in range(n):
        ei = np.zeros(n)
        ei[i] = h
        H[i, i] = (_stencil_value(obj, x + ei) - 2.0 * f0
                   + _stencil_value(obj, x - ei)) / (h * h)
        for j in range(i + 1, n):
            ej = np.zeros(n)
            ej[j] = h
            mixed = (_stencil_value(obj, x + ei + ej)
                     - _stencil_value(obj, x + ei - ej)
                     - _stencil_value(obj, x - ei + ej)
                     + _stencil_value(obj, x - ei - ej)) / (4.0 * h * h)
            H[i, j] = mixed
            H[j, i] = mixed
    return H


def fd_third_directional(obj: Objective, x, u, v, w, h: float = 1e-3) -> float:
    """Central difference of the analytic Hessian quadratic form along u:
    (v' H(x + h u) w - v' H(x - h u) w) / (2 h)."""
    x = as_vector(x)
    u = as_vector(u)
    v = as_vector(v)
    w = as_vector(w)
    xp = x + h * u
    xm = x - h * u
    if not (obj.in_domain(xp) and obj.in_domain(xm)):
        raise DomainViolation("Hessian stencil left the domain")
    hp = obj.hessian(xp)
    hm = obj.hessian(xm)
    if not (np.all(np.isfinite(hp)) and np.all(np.isfinite(hm))):
        raise DomainViolation("Hessian stencil produced non-finite entries")
    return float(v @ (hp - hm) @ w) / (2.0 * h)


@dataclass(frozen=True)
class DerivativeReport:
    grad_err: float
    hess_err: float
    third_err: float
    grad_ok: bool
    hess_ok: bool
    third_ok: bool

    @property
    def ok(self) -> bool:
        return self.grad_ok and self.hess_ok and self.third_ok


GRAD_TOL = 1e-7
HESS_TOL = 1e-5
THIRD_TOL = 1e-3


def verify_derivatives(obj: Objective, points, rng=None,
                       n_triples: int = 10) -> DerivativeReport:
    """Compare analytic derivatives against finite differences at the
    given points; the third derivative is probed along n_triples random
    unit direction triples per point.

    Errors are relative to max(1, scale of the analytic quantity).
    """
    if rng is None:
        rng = np.random.default_rng(42)
    grad_err = 0.0
    hess_err = 0.0
    third_err = 0.0
    for p in points:
        p = as_vector(p)
        ga = obj.gradient(p)
        gf = fd_gradient(obj, p)
        grad_err = max(grad_err,
                       float(np.max(np.abs(ga - gf))) / max(1.0, float(np.max(np.abs(ga)))))
        Ha = obj.hessian(p)
        Hf = fd_hessian(obj, p)
        hess_err = max(hess_err,
                       float(np.max(np.abs(Ha - Hf))) / max(1.0, float(np.max(np.abs(Ha)))))
        for _ in range(n_triples):
            dirs = rng.standard_normal((3, obj.dim))
            dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
            u, v, w = dirs
            ta = obj.third_directional(p, u, v, w)
            tf = fd_third_directional(obj, p, u, v, w)
            third_err = max(third_err, abs(ta - tf) / max(1.0, abs(ta)))
    return DerivativeReport(
        grad_err=grad_err, hess_err=hess_err, third_err=third_err,
        grad_ok=grad_err <= GRAD_TOL,
        hess_ok=hess_err <= HESS_TOL,
        third_ok=third_err <= THIRD_TOL,
    )
