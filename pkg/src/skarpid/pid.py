"""Assembling partial information decompositions from unique informations.

The two-source PID splits I(S0,S1 : T) into redundancy, unique-with-S0,
unique-with-S1, and synergy, with the marginal identities

    I(S0 : T) = redundancy + unique_0
    I(S1 : T) = redundancy + unique_1.

Directly quantifying both uniques overconstrains the system unless

    unique_0 + I(S1 : T) == unique_1 + I(S0 : T),

so assembly first checks that consistency relation and raises
:class:`InconsistentDecomposition` (carrying both implied redundancies)
when it fails.  Unique informations come from one of five schemes: the
no-communication, source-communicates ("camel"), target-communicates
("elephant"), and two-way secret key agreement rates, or the BROJA
convex program.  Under the two-way scheme only bounds are available, so
components are intervals and consistency is a feasibility question.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Union

from .distributions import JointDistribution
from .errors import InconsistentDecomposition
from .gacs_korner import skar_no_comm
from .key_rates import (
    DEFAULT_CONFIG,
    OptimizerConfig,
    RateBounds,
    skar_one_way,
    skar_two_way_bounds,
)
from .shannon import conditional_mutual_information, mutual_information

Component = Union[float, RateBounds]


class PidScheme(enum.Enum):
    """How the unique informations are quantified."""

    NO_COMM = "none"
    CAMEL = "camel"
    ELEPHANT = "elephant"
    TWO_WAY = "two-way"
    BROJA = "broja"

    @classmethod
    def from_tag(cls, tag: str) -> "PidScheme":
        for scheme in cls:
            if scheme.value == tag:
                return scheme
        raise ValueError(f"unknown scheme {tag!r}; choose from "
                         f"{[s.value for s in cls]}")


#: Default consistency tolerance per scheme: the convex BROJA program is
#: solved tightly, the cryptographic schemes are limited by the non-convex
#: rate optimizers.
SCHEME_TOL = {
    PidScheme.NO_COMM: 1e-3,
    PidScheme.CAMEL: 1e-3,
    PidScheme.ELEPHANT: 1e-3,
    PidScheme.TWO_WAY: 1e-3,
    PidScheme.BROJA: 1e-6,
}


@dataclass(frozen=True)
class PidComponents:
    """One decomposition; components are floats, or intervals under two-way."""

    redundancy: Component
    unique_0: Component
    unique_1: Component
    synergy: Component
    scheme: PidScheme | None
    consistent: bool
    residual: float
    clamped: tuple[str, ...] = ()

    def as_points(self) -> tuple[float, float, float, float]:
        """Point values (interval midpoints under two-way)."""
        return tuple(
            c.midpoint() if isinstance(c, RateBounds) else c
            for c in (self.redundancy, self.unique_0, self.unique_1, self.synergy)
        )

    def to_json_dict(self) -> dict:
        def enc(c):
            return c.to_json_dict() if isinstance(c, RateBounds) else c

        return {
            "redundancy": enc(self.redundancy),
            "unique_0": enc(self.unique_0),
            "unique_1": enc(self.unique_1),
            "synergy": enc(self.synergy),
            "scheme": self.scheme.value if self.scheme else None,
            "consistent": self.consistent,
            "residual": self.residual,
            "clamped": list(self.clamped),
        }


def _clamp_component(name, value, tol, clamped, *, context):
    if value < -tol:
        raise InconsistentDecomposition(
            f"{name} = {value} is negative beyond tolerance {tol} ({context})",
            residual=-value,
        )
    if value < 0.0:
        clamped.append(name)
        return 0.0
    return value


def assemble(
    unique_0: float,
    unique_1: float,
    mi_0: float,
    mi_1: float,
    mi_joint: float,
    tol: float = 1e-3,
    scheme: PidScheme | None = None,
) -> PidComponents:
    """Build a PID from two point-valued unique informations.

    Raises :class:`InconsistentDecomposition` when the consistency relation
    fails by more than ``tol``; the exception carries the two candidate
    redundancies implied by either marginal identity.
    """
    residual = abs(unique_0 + mi_1 - unique_1 - mi_0)
    candidates = (mi_0 - unique_0, mi_1 - unique_1)
    if residual > tol:
        raise InconsistentDecomposition(
            f"unique informations overconstrain the decomposition: "
            f"candidate redundancies {candidates[0]:.6f} vs {candidates[1]:.6f} "
            f"(residual {residual:.3e} > tol {tol:g})",
            candidates=candidates,
            residual=residual,
            partial={
                "unique_0": unique_0,
                "unique_1": unique_1,
                "mi_0": mi_0,
                "mi_1": mi_1,
                "mi_joint": mi_joint,
                "scheme": scheme.value if scheme else None,
            },
        )

    redundancy = mi_0 - unique_0
    synergy = mi_joint - mi_1 - unique_0
    clamped: list[str] = []
    ctx = f"scheme {scheme.value}" if scheme else "assemble"
    unique_0 = _clamp_component("unique_0", unique_0, tol, clamped, context=ctx)
    unique_1 = _clamp_component("unique_1", unique_1, tol, clamped, context=ctx)
    redundancy = _clamp_component("redundancy", redundancy, tol, clamped, context=ctx)
    synergy = _clamp_component("synergy", synergy, tol, clamped, context=ctx)
    return PidComponents(
        redundancy=redundancy,
        unique_0=unique_0,
        unique_1=unique_1,
        synergy=synergy,
        scheme=scheme,
        consistent=True,
        residual=residual,
        clamped=tuple(clamped),
    )


def _interval_clamp(name, lo, hi, tol, clamped, *, context):
    lo, hi = min(lo, hi), max(lo, hi)
    if hi < -tol:
        raise InconsistentDecomposition(
            f"{name} interval [{lo:.6f}, {hi:.6f}] is negative beyond "
            f"tolerance ({context})",
            residual=-hi,
        )
    if lo < 0.0:
        clamped.append(name)
        lo = 0.0
        hi = max(hi, 0.0)
    return RateBounds(lo, hi, exact=hi - lo <= tol)


def _assemble_two_way(
    bounds_0: RateBounds,
    bounds_1: RateBounds,
    mi_0: float,
    mi_1: float,
    mi_joint: float,
    tol: float,
) -> PidComponents:
    """Interval version: consistency becomes a feasibility question.

    The relation requires unique_0 - unique_1 = I(S0:T) - I(S1:T); with
    interval-valued uniques this has a solution iff that difference falls
    inside [lower_0 - upper_1, upper_0 - lower_1].
    """
    delta = mi_0 - mi_1
    lo = bounds_0.lower - bounds_1.upper
    hi = bounds_0.upper - bounds_1.lower
    residual = max(0.0, lo - delta, delta - hi)
    if residual > tol:
        candidates = (
            (mi_0 - bounds_0.upper, mi_0 - bounds_0.lower),
            (mi_1 - bounds_1.upper, mi_1 - bounds_1.lower),
        )
        raise InconsistentDecomposition(
            f"no point in the unique-information rectangles satisfies the "
            f"consistency relation: unique_0 - unique_1 must equal "
            f"{delta:.6f}, but the bounds only allow [{lo:.6f}, {hi:.6f}] "
            f"(residual {residual:.3e} > tol {tol:g})",
            candidates=candidates,
            residual=residual,
            partial={
                "unique_0": bounds_0.to_json_dict(),
                "unique_1": bounds_1.to_json_dict(),
                "mi_0": mi_0,
                "mi_1": mi_1,
                "mi_joint": mi_joint,
                "scheme": PidScheme.TWO_WAY.value,
            },
        )

    clamped: list[str] = []
    ctx = "scheme two-way"
    red_lo = max(mi_0 - bounds_0.upper, mi_1 - bounds_1.upper)
    red_hi = min(mi_0 - bounds_0.lower, mi_1 - bounds_1.lower)
    red_hi = max(red_hi, red_lo)  # intervals overlap within tol by feasibility
    syn_lo = max(mi_joint - mi_1 - bounds_0.upper, mi_joint - mi_0 - bounds_1.upper)
    syn_hi = min(mi_joint - mi_1 - bounds_0.lower, mi_joint - mi_0 - bounds_1.lower)
    syn_hi = max(syn_hi, syn_lo)
    return PidComponents(
        redundancy=_interval_clamp("redundancy", red_lo, red_hi, tol, clamped, context=ctx),
        unique_0=_interval_clamp("unique_0", bounds_0.lower, bounds_0.upper, tol, clamped, context=ctx),
        unique_1=_interval_clamp("unique_1", bounds_1.lower, bounds_1.upper, tol, clamped, context=ctx),
        synergy=_interval_clamp("synergy", syn_lo, syn_hi, tol, clamped, context=ctx),
        scheme=PidScheme.TWO_WAY,
        consistent=True,
        residual=residual,
        clamped=tuple(clamped),
    )


def decompose(
    d: JointDistribution,
    sources: tuple[str, str],
    target: str,
    scheme: PidScheme = PidScheme.ELEPHANT,
    cfg: OptimizerConfig = DEFAULT_CONFIG,
    tol: float | None = None,
) -> PidComponents:
    """Full decomposition of I(sources : target) under one scheme."""
    if isinstance(scheme, str):
        scheme = PidScheme.from_tag(scheme)
    s0, s1 = sources
    t = target
    keep = tuple(v for v in d.variables if v in {s0, s1, t})
    if len(keep) != 3:
        raise ValueError(f"sources/target must name three distinct variables, "
                         f"got {sources!r} and {target!r}")
    d3 = d.marginalize(keep) if len(d.variables) != 3 else d
    if tol is None:
        tol = SCHEME_TOL[scheme]

    mi_0 = mutual_information(d3, s0, t)
    mi_1 = mutual_information(d3, s1, t)
    mi_joint = mutual_information(d3, (s0, s1), t)

    if scheme is PidScheme.NO_COMM:
        u0 = skar_no_comm(d3, s0, t, s1)
        u1 = skar_no_comm(d3, s1, t, s0)
        return assemble(u0, u1, mi_0, mi_1, mi_joint, tol, scheme)
    if scheme is PidScheme.CAMEL:
        u0 = skar_one_way(d3, s0, t, s1, cfg)
        u1 = skar_one_way(d3, s1, t, s0, cfg)
        return assemble(u0, u1, mi_0, mi_1, mi_joint, tol, scheme)
    if scheme is PidScheme.ELEPHANT:
        u0 = skar_one_way(d3, t, s0, s1, cfg)
        u1 = skar_one_way(d3, t, s1, s0, cfg)
        return assemble(u0, u1, mi_0, mi_1, mi_joint, tol, scheme)
    if scheme is PidScheme.TWO_WAY:
        b0 = skar_two_way_bounds(d3, s0, t, s1, cfg)
        b1 = skar_two_way_bounds(d3, s1, t, s0, cfg)
        return _assemble_two_way(b0, b1, mi_0, mi_1, mi_joint, tol)
    if scheme is PidScheme.BROJA:
        from .marginal import broja_minimize  # deferred: marginal imports pid

        return broja_minimize(d3, (s0, s1), t, cfg).pid
    raise ValueError(f"unhandled scheme {scheme!r}")


def cmi_identity_report(
    d: JointDistribution,
    sources: tuple[str, str],
    target: str,
    pid: PidComponents,
) -> dict:
    """Defects of I(S_i : T | S_j) = unique_i + synergy for a consistent PID."""
    if not pid.consistent:
        raise ValueError("identity report requires a consistent decomposition")
    s0, s1 = sources
    _, u0, u1, syn = pid.as_points()
    cmi_0 = conditional_mutual_information(d, s0, target, s1)
    cmi_1 = conditional_mutual_information(d, s1, target, s0)
    return {
        "cmi_0": cmi_0,
        "cmi_1": cmi_1,
        "defect_0": cmi_0 - (u0 + syn),
        "defect_1": cmi_1 - (u1 + syn),
    }
