"""Classical information measures, all in bits (log base 2).

Quantities that are nonnegative by theory may come out very slightly
negative in floating point; values above ``-CLAMP_TOL`` are clamped to
zero, anything more negative raises, since it signals a logic bug rather
than rounding.
"""

from __future__ import annotations

import math

from .distributions import JointDistribution, VarSpec
from .errors import OverlappingSets, SupportViolation

CLAMP_TOL = 1e-12


def _nonneg(value: float, what: str) -> float:
    if value < -CLAMP_TOL:
        raise FloatingPointError(f"{what} = {value}, negative beyond tolerance")
    return max(value, 0.0)


def _as_tuple(d: JointDistribution, vars: VarSpec | None) -> tuple[str, ...]:
    if vars is None:
        return d.variables
    if isinstance(vars, str):
        vars = (vars,)
    vars = tuple(vars)
    for v in vars:
        d.index(v)
    return vars


def _check_disjoint(*sets):
    flat = [v for s in sets for v in s]
    if len(set(flat)) != len(flat):
        raise OverlappingSets(f"variable sets must be disjoint: {sets!r}")


def entropy(d: JointDistribution, vars: VarSpec | None = None) -> float:
    """Shannon entropy of the marginal on ``vars`` (default: all variables)."""
    vars = _as_tuple(d, vars)
    if set(vars) != set(d.variables):
        d = d.marginalize(vars)
    h = 0.0
    for _, p in d.items():
        h -= p * math.log2(p)
    return _nonneg(h, "entropy")


def conditional_entropy(d: JointDistribution, vars: VarSpec, given: VarSpec) -> float:
    """H(vars | given) = H(vars, given) - H(given)."""
    vs = _as_tuple(d, vars)
    gs = _as_tuple(d, given) if given else ()
    _check_disjoint(vs, gs)
    if not gs:
        return entropy(d, vs)
    return _nonneg(entropy(d, vs + gs) - entropy(d, gs), "conditional entropy")


def mutual_information(d: JointDistribution, x: VarSpec, y: VarSpec) -> float:
    """I(X : Y) = H(X) + H(Y) - H(X, Y)."""
    xs = _as_tuple(d, x)
    ys = _as_tuple(d, y)
    if not xs or not ys:
        raise OverlappingSets("mutual information needs two non-empty sets")
    _check_disjoint(xs, ys)
    mi = entropy(d, xs) + entropy(d, ys) - entropy(d, xs + ys)
    return _nonneg(mi, "mutual information")


def conditional_mutual_information(
    d: JointDistribution, x: VarSpec, y: VarSpec, z: VarSpec = ()
) -> float:
    """I(X : Y | Z); an empty Z reduces to plain mutual information."""
    xs = _as_tuple(d, x)
    ys = _as_tuple(d, y)
    zs = _as_tuple(d, z) if z else ()
    if not xs or not ys:
        raise OverlappingSets("conditional mutual information needs non-empty X, Y")
    _check_disjoint(xs, ys, zs)
    if not zs:
        return mutual_information(d, xs, ys)
    cmi = (
        entropy(d, xs + zs)
        + entropy(d, ys + zs)
        - entropy(d, xs + ys + zs)
        - entropy(d, zs)
    )
    return _nonneg(cmi, "conditional mutual information")


def relative_entropy(p: JointDistribution, q: JointDistribution) -> float:
    """D(p ‖ q) over a shared variable set.

    Raises :class:`SupportViolation` where the divergence would be
    infinite (p assigns mass to an outcome q does not support).
    """
    if set(p.variables) != set(q.variables):
        raise OverlappingSets(
            f"distributions must share variables: {p.variables!r} vs {q.variables!r}"
        )
    if q.variables != p.variables:
        q = q.reorder(p.variables)
    div = 0.0
    for outcome, pp in p.items():
        qq = q.probability(outcome)
        if qq <= 0.0:
            raise SupportViolation(f"q({outcome!r}) = 0 while p({outcome!r}) = {pp}")
        div += pp * math.log2(pp / qq)
    return _nonneg(div, "relative entropy")
