"""Optimization over distributions with pinned marginals.

Two solvers share the fixed-marginal polytope
Q = { q : q restricted to each constraint set equals the base marginal }:

* ``maxent_with_marginals`` finds the maximum-entropy element by classic
  iterative proportional fitting (IPF), cycling the constraint sets in
  declaration order from a uniform start over the full Cartesian support.
  Stacking such solves over all k-subset marginals gives the connected
  information of order k.

* ``broja_minimize`` finds the element minimizing I(S0,S1 : T) subject to
  both source-target marginals.  The objective is convex, so a projected
  gradient descent with Dykstra-style feasibility restoration converges
  without restarts; the unique informations are then read off the
  minimizer as conditional mutual informations.

Both optimize over the full Cartesian product of per-variable supports:
minimizers and maximizers routinely place mass on outcomes the base
distribution never produces.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import xlogy

from .distributions import JointDistribution
from .errors import ConvergenceFailure, OutOfRange, UnknownVariable
from .key_rates import DEFAULT_CONFIG, OptimizerConfig
from .pid import PidComponents, PidScheme, assemble
from .shannon import conditional_mutual_information, entropy, mutual_information

_LN2 = math.log(2.0)
_LOG_FLOOR = 1e-300
_GRAD_CLIP = 128.0
_BROJA_TOL = 1e-6  # consistency tolerance: the program is convex
_WINDOW = 10  # sweeps over which the objective delta must fall below tol


@dataclass(frozen=True)
class MarginalPolytope:
    """A base distribution with a family of pinned marginal constraints."""

    base: JointDistribution
    constraint_sets: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        canon = []
        for s in self.constraint_sets:
            s = (s,) if isinstance(s, str) else tuple(s)
            if not s:
                raise UnknownVariable("constraint sets must be non-empty")
            for v in s:
                self.base.index(v)
            canon.append(tuple(v for v in self.base.variables if v in set(s)))
        object.__setattr__(self, "constraint_sets", tuple(canon))


def _dense(base: JointDistribution):
    """Base as a dense array over the full Cartesian product of supports."""
    alphabets = [base.alphabet(v) for v in base.variables]
    index = [{sym: i for i, sym in enumerate(a)} for a in alphabets]
    arr = np.zeros(tuple(len(a) for a in alphabets))
    for outcome, p in base.items():
        arr[tuple(ix[s] for ix, s in zip(index, outcome))] = p
    return arr, alphabets


def _to_distribution(arr, variables, alphabets) -> JointDistribution:
    events = {}
    for idx in itertools.product(*(range(len(a)) for a in alphabets)):
        p = arr[idx]
        if p > 0.0:
            events[tuple(a[i] for a, i in zip(alphabets, idx))] = float(p)
    return JointDistribution(variables, events).prune()


def _axes_of(variables, subset) -> tuple[int, ...]:
    return tuple(i for i, v in enumerate(variables) if v in set(subset))


def _marginal(arr, axes):
    drop = tuple(i for i in range(arr.ndim) if i not in axes)
    return arr.sum(axis=drop)


def _expand(values, axes, ndim):
    idx = [None] * ndim
    for a in axes:
        idx[a] = slice(None)
    return values[tuple(idx)]


def _kl_bits(p, q):
    mask = p > 0
    if np.any(q[mask] <= 0):
        return math.inf
    return float((p[mask] * np.log2(p[mask] / q[mask])).sum())


def maxent_with_marginals(
    poly: MarginalPolytope,
    cfg: OptimizerConfig = DEFAULT_CONFIG,
    debug: bool = False,
) -> JointDistribution:
    """Maximum-entropy distribution matching the pinned marginals, via IPF.

    With ``debug=True`` each sweep asserts that D(base ‖ iterate) has not
    increased (the iterates are successive information projections onto the
    constraint sets, and the base lies in all of them).
    """
    base, alphabets = _dense(poly.base)
    ndim = base.ndim
    constraints = [
        (_axes_of(poly.base.variables, s), _marginal(base, _axes_of(poly.base.variables, s)))
        for s in poly.constraint_sets
    ]

    q = np.full(base.shape, 1.0 / base.size)
    tol = min(cfg.convergence_tol, 1e-10)
    prev_div = _kl_bits(base, q) if debug else None
    for _ in range(cfg.max_iters):
        maxdev = 0.0
        for axes, target in constraints:
            cur = _marginal(q, axes)
            maxdev = max(maxdev, float(np.abs(cur - target).max()))
            ratio = np.divide(target, cur, out=np.zeros_like(target), where=cur > 0)
            q = q * _expand(ratio, axes, ndim)
        if debug:
            div = _kl_bits(base, q)
            if div > prev_div + 1e-9:
                raise FloatingPointError(
                    f"IPF divergence to base rose: {prev_div} -> {div}"
                )
            prev_div = div
        if maxdev < tol:
            break
    else:
        raise ConvergenceFailure(
            f"IPF did not reach marginal deviation {tol:g} within "
            f"{cfg.max_iters} sweeps (last deviation {maxdev:.3e})"
        )
    return _to_distribution(q, poly.base.variables, alphabets)


def connected_information(
    d: JointDistribution,
    order: int,
    cfg: OptimizerConfig = DEFAULT_CONFIG,
) -> float:
    """Entropy drop from (order-1)-marginal to order-marginal maxent fits.

    Order n (all variables) compares against the distribution itself; the
    result is how much structure the order-k marginals add beyond what all
    (k-1)-variable marginals already pin down.
    """
    n = len(d.variables)
    if not 2 <= order <= n:
        raise OutOfRange(f"order must be in [2, {n}], got {order}")

    def h_maxent(k: int) -> float:
        sets = tuple(itertools.combinations(d.variables, k))
        return entropy(maxent_with_marginals(MarginalPolytope(d, sets), cfg))

    h_low = h_maxent(order - 1)
    h_high = entropy(d) if order == n else h_maxent(order)
    value = h_low - h_high
    if value < -1e-8:
        raise FloatingPointError(f"connected information = {value} < 0")
    return max(value, 0.0)


# --------------------------------------------------------------------------
# BROJA: minimize I(S0,S1 : T) within Q
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class BrojaResult:
    """Minimizer of I(S0,S1 : T) over Q with the PID it induces."""

    q_star: JointDistribution
    min_mi: float
    pid: PidComponents

    def to_json_dict(self) -> dict:
        return {
            "q_star": self.q_star.to_json_dict(),
            "min_mi": self.min_mi,
            "pid": self.pid.to_json_dict(),
        }


def _broja_objective(q):
    m01 = q.sum(axis=2)
    mt = q.sum(axis=(0, 1))
    return (
        xlogy(q, q).sum() - xlogy(m01, m01).sum() - xlogy(mt, mt).sum()
    ) / _LN2


def _broja_gradient(q):
    lg = lambda x: np.log(np.maximum(x, _LOG_FLOOR)) / _LN2
    m01 = q.sum(axis=2)
    mt = q.sum(axis=(0, 1))
    g = lg(q) - lg(m01)[:, :, None] - lg(mt)[None, None, :]
    return np.clip(g, -_GRAD_CLIP, _GRAD_CLIP)


def _project_polytope(q, m0, m1, iters=500, tol=1e-13):
    """Dykstra projection onto {q >= 0, sum_s1 q = m0, sum_s0 q = m1}.

    The two marginal sets are affine, so only the nonnegativity orthant
    needs a correction term.
    """
    n0, n1, _ = q.shape
    x = q.copy()
    inc = np.zeros_like(q)
    for _ in range(iters):
        x = x + (m0 - x.sum(axis=1))[:, None, :] / n1
        x = x + (m1 - x.sum(axis=0))[None, :, :] / n0
        y = x + inc
        x = np.maximum(y, 0.0)
        inc = y - x
        dev = max(
            float(np.abs(x.sum(axis=1) - m0).max()),
            float(np.abs(x.sum(axis=0) - m1).max()),
        )
        if dev < tol:
            break
    return x


def broja_minimize(
    d: JointDistribution,
    sources: tuple[str, str] | None = None,
    target: str | None = None,
    cfg: OptimizerConfig = DEFAULT_CONFIG,
) -> BrojaResult:
    """Convex minimization of I(S0,S1 : T) over both source-target marginals."""
    if len(d.variables) != 3:
        raise ValueError("BROJA minimization expects a trivariate distribution")
    if sources is None:
        sources = d.variables[:2]
    if target is None:
        target = d.variables[2]
    s0, s1 = sources
    dd = d.reorder((s0, s1, target))

    base, alphabets = _dense(dd)
    m0 = base.sum(axis=1)  # pinned (S0, T) marginal
    m1 = base.sum(axis=0)  # pinned (S1, T) marginal

    poly = MarginalPolytope(dd, ((s0, target), (s1, target)))
    start = maxent_with_marginals(poly, cfg)
    q, _ = _dense(start)
    if q.shape != base.shape:  # maxent may have dropped alphabet symbols
        q = np.zeros_like(base)
        index = [{sym: i for i, sym in enumerate(a)} for a in alphabets]
        for outcome, p in start.items():
            q[tuple(ix[s] for ix, s in zip(index, outcome))] = p
    q = _project_polytope(q, m0, m1)

    f = _broja_objective(q)
    step = 0.5
    history = [f]
    converged = False
    for _ in range(cfg.max_iters):
        g = _broja_gradient(q)
        for _bt in range(60):
            cand = _project_polytope(q - step * g, m0, m1)
            fc = _broja_objective(cand)
            if fc < f - 1e-16:
                q, f = cand, fc
                step = min(step * 1.3, 16.0)
                break
            step *= 0.5
            if step < 1e-16:
                break
        history.append(f)
        if len(history) > _WINDOW and history[-_WINDOW - 1] - f < 1e-10:
            converged = True
            break
        if step < 1e-16:
            converged = True  # stationary: no feasible descent direction left
            break
    if not converged:
        raise ConvergenceFailure(
            f"BROJA descent still moving after {cfg.max_iters} sweeps "
            f"(objective {f:.12f})"
        )

    q_star = _to_distribution(q, dd.variables, alphabets)
    min_mi = mutual_information(q_star, (s0, s1), target)
    u0 = conditional_mutual_information(q_star, s0, target, s1)
    u1 = conditional_mutual_information(q_star, s1, target, s0)
    pid = assemble(
        u0,
        u1,
        mutual_information(dd, s0, target),
        mutual_information(dd, s1, target),
        mutual_information(dd, (s0, s1), target),
        tol=_BROJA_TOL,
        scheme=PidScheme.BROJA,
    )
    return BrojaResult(q_star=q_star, min_mi=min_mi, pid=pid)


def broja_intermediate_entropy_report(
    d: JointDistribution,
    sources: tuple[str, str] | None = None,
    target: str | None = None,
    cfg: OptimizerConfig = DEFAULT_CONFIG,
) -> dict:
    """Entropies of the base, BROJA minimizer, and maxent element of Q."""
    if len(d.variables) != 3:
        raise ValueError("entropy report expects a trivariate distribution")
    if sources is None:
        sources = d.variables[:2]
    if target is None:
        target = d.variables[2]
    s0, s1 = sources
    result = broja_minimize(d, sources, target, cfg)
    poly = MarginalPolytope(d, ((s0, target), (s1, target)))
    maxent = maxent_with_marginals(poly, cfg)
    return {
        "h_original": entropy(d),
        "h_broja": entropy(result.q_star),
        "h_maxent": entropy(maxent),
    }
