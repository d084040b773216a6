"""Iteration loops: the geometric descent method plus gradient-descent and
Newton baselines, all emitting the same per-iterate telemetry.

Record convention: row 0 is the start point (alpha 0, case "-"); row k >= 1
carries the step data (alpha, case, T, cos_theta) of the move that produced
iterate k.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from math import isfinite

import numpy as np

from .direction import DirectionResult, descent_direction, newton_direction
from .errors import (DegenerateTangentBlock, NotDescent, SingularHessian,
                     ZeroGradient)
from .line_search import (ArmijoSearch, ExactSearch, FixedStep,
                          LineSearchResult, LineSearchSpec, LineSearchStatus,
                          StrongWolfeSearch, armijo_backtrack, bb_initial_step,
                          exact_search, strong_wolfe_search)
from .numerics import Vector, as_vector
from .objective import Objective
from .problems import Problem


@dataclass(frozen=True)
class StoppingSpec:
    tol_grad: float = 1e-4
    max_iter: int = 200

    def __post_init__(self):
        if self.tol_grad <= 0.0:
            raise ValueError("tol_grad must be positive")
        if self.max_iter <= 0:
            raise ValueError("max_iter must be positive")


class Method(Enum):
    YAND = "YAND"
    GRADIENT_DESCENT = "GradientDescent"
    NEWTON = "Newton"
    DAMPED_NEWTON = "DampedNewton"


class RunStatus(Enum):
    CONVERGED = "Converged"
    MAX_ITER_REACHED = "MaxIterReached"
    LINE_SEARCH_FAILURE = "LineSearchFailure"
    DEGENERATE_STOP = "DegenerateStop"


@dataclass(frozen=True)
class IterateRecord:
    k: int
    x: Vector
    f: float
    grad_norm: float
    alpha: float          # 0 for k=0
    case: str
    T: float
    cos_theta: float


@dataclass(frozen=True)
class RunReport:
    method: Method
    ls: LineSearchSpec | FixedStep | None
    records: list[IterateRecord]
    status: RunStatus
    iters: int
    max_T: float

    @property
    def final(self) -> IterateRecord:
        return self.records[-1]


def _run_line_search(obj: Objective, x: Vector, g: Vector, d: Vector,
                     f_curr: float, ls: LineSearchSpec,
                     bb_state: dict) -> LineSearchResult:
    def phi(alpha: float) -> float:
        return obj.value(x + alpha * d)

    dphi0 = float(g @ d)
    if isinstance(ls, ExactSearch):
        return exact_search(phi, alpha_max=ls.alpha_max, tol=ls.tol)
    if isinstance(ls, ArmijoSearch):
        spec = ls
        if ls.use_bb and bb_state.get("s") is not None:
            a0 = bb_initial_step(bb_state["s"], bb_state["y"], "BB1",
                                 ls.alpha_min_bb, ls.alpha_max_bb)
            spec = replace(ls, alpha0=a0)
        return armijo_backtrack(phi, dphi0, spec)
    if isinstance(ls, StrongWolfeSearch):
        def dphi(alpha: float) -> float:
            return float(obj.gradient(x + alpha * d) @ d)

        return strong_wolfe_search(phi, dphi, ls)
    raise TypeError(f"unsupported line-search spec {ls!r}")


def _loop(problem: Problem, method: Method,
          ls: LineSearchSpec | FixedStep | None,
          stop: StoppingSpec, direction_fn) -> RunReport:
    """Shared driver. direction_fn(x, g) -> (step vector, case, T, cos)."""
    obj = problem.objective
    x = as_vector(problem.x0).copy()
    f_curr = obj.value(x)
    if not isfinite(f_curr):
        raise ValueError("start point is outside the domain")
    g = obj.gradient(x)
    gnorm = float(np.linalg.norm(g))
    records = [IterateRecord(k=0, x=x.copy(), f=f_curr, grad_norm=gnorm,
                             alpha=0.0, case="-", T=0.0, cos_theta=1.0)]
    iters = 0
    max_T = 0.0
    bb_state: dict = {"s": None, "y": None}
    while True:
        if gnorm <= stop.tol_grad:
            status = RunStatus.CONVERGED
            break
        if iters >= stop.max_iter:
            status = RunStatus.MAX_ITER_REACHED
            break
        if gnorm == 0.0:
            status = RunStatus.DEGENERATE_STOP
            break
        try:
            d, case, T, cos_theta = direction_fn(x, g)
        except (SingularHessian, DegenerateTangentBlock, ZeroGradient):
            status = RunStatus.DEGENERATE_STOP
            break
        max_T = max(max_T, T)
        if ls is None or isinstance(ls, FixedStep):
            alpha = 1.0 if ls is None else ls.alpha
            x_new = x + alpha * d
            f_new = obj.value(x_new)
            if not isfinite(f_new):
                status = RunStatus.LINE_SEARCH_FAILURE
                break
        else:
            try:
                res = _run_line_search(obj, x, g, d, f_curr, ls, bb_state)
            except NotDescent:
                status = RunStatus.LINE_SEARCH_FAILURE
                break
            if res.status is not LineSearchStatus.ACCEPTED or \
                    res.alpha <= 0.0 or not res.f_new < f_curr:
                status = RunStatus.LINE_SEARCH_FAILURE
                break
            alpha = res.alpha
            x_new = x + alpha * d
            f_new = res.f_new
        g_new = obj.gradient(x_new)
        bb_state["s"] = x_new - x
        bb_state["y"] = g_new - g
        x, f_curr, g = x_new, f_new, g_new
        gnorm = float(np.linalg.norm(g))
        iters += 1
        records.append(IterateRecord(k=iters, x=x.copy(), f=f_curr,
                                     grad_norm=gnorm, alpha=float(alpha),
                                     case=case, T=T, cos_theta=cos_theta))
    return RunReport(method=method, ls=ls, records=records, status=status,
                     iters=iters, max_T=max_T)


def yand_run(problem: Problem, ls: LineSearchSpec,
             stop: StoppingSpec | None = None,
             eps_orth: float = 1e-12) -> RunReport:
    """Geometric descent: search along step_scale * d at every iterate."""
    if stop is None:
        stop = StoppingSpec()
    obj = problem.objective

    def direction(x, g):
        res: DirectionResult = descent_direction(obj, x, eps_orth=eps_orth)
        return (res.step_scale * res.d, res.case.value, res.T, res.cos_theta)

    return _loop(problem, Method.YAND, ls, stop, direction)


def gradient_descent_run(problem: Problem,
                         step: LineSearchSpec | FixedStep,
                         stop: StoppingSpec | None = None) -> RunReport:
    if stop is None:
        stop = StoppingSpec()

    def direction(x, g):
        return (-g, "GD", 0.0, 1.0)

    return _loop(problem, Method.GRADIENT_DESCENT, step, stop, direction)


def newton_run(problem: Problem, damped: bool = False,
               ls: LineSearchSpec | FixedStep | None = None,
               stop: StoppingSpec | None = None) -> RunReport:
    """Newton baseline: unit steps when undamped (classical method); the
    damped variant regularizes the Hessian and runs the given line search
    (default strong Wolfe)."""
    if stop is None:
        stop = StoppingSpec()
    obj = problem.objective
    method = Method.DAMPED_NEWTON if damped else Method.NEWTON
    if damped and ls is None:
        ls = StrongWolfeSearch()
    if not damped:
        ls = None   # classical Newton: always the unit step
    case = method.value

    def direction(x, g):
        return (newton_direction(obj, x, regularize=damped), case, 0.0, 1.0)

    return _loop(problem, method, ls, stop, direction)


@dataclass(frozen=True)
class RateTable:
    linear_ratios: list[float]
    quad_ratios: list[float]


def empirical_rates(report: RunReport, x_star=None,
                    f_star: float | None = None) -> RateTable:
    """Per-step diagnostics: (f_{k+1}-f*)/(f_k-f*) and ||e_{k+1}||/||e_k||^2.

    Ratios are reported as computed (inf where a denominator vanishes);
    nothing is asserted here.
    """
    from .errors import MissingReference

    if x_star is None and f_star is None:
        raise MissingReference("need x_star or f_star")
    linear: list[float] = []
    quad: list[float] = []
    recs = report.records
    if f_star is not None:
        for r0, r1 in zip(recs, recs[1:]):
            gap0 = r0.f - f_star
            linear.append((r1.f - f_star) / gap0 if gap0 > 0.0 else float("inf"))
    if x_star is not None:
        xs = as_vector(x_star)
        errs = [float(np.linalg.norm(r.x - xs)) for r in recs]
        for e0, e1 in zip(errs, errs[1:]):
            quad.append(e1 / (e0 * e0) if e0 > 0.0 else float("inf"))
    return RateTable(linear_ratios=linear, quad_ratios=quad)
