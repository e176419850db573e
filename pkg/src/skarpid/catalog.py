"""Named example distributions, constructed exactly from small rationals.

Every entry is trivariate over (S0, S1, T); callers choose which variables
play source, target, or eavesdropper.  ``get`` validates parameters against
their documented ranges, and every builder output passes the full
distribution invariants.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .distributions import JointDistribution, bec
from .errors import ParameterOutOfRange, UnknownName


@dataclass(frozen=True)
class ParamSpec:
    default: float
    low: float
    high: float
    doc: str


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    description: str
    parameters: dict[str, ParamSpec] = field(default_factory=dict)
    builder: Callable[..., JointDistribution] = None

    def build(self, **params) -> JointDistribution:
        unknown = set(params) - set(self.parameters)
        if unknown:
            raise ParameterOutOfRange(
                f"{self.name!r} takes no parameter {sorted(unknown)!r}"
            )
        values = {}
        for pname, spec in self.parameters.items():
            v = float(params.get(pname, spec.default))
            if not spec.low <= v <= spec.high:
                raise ParameterOutOfRange(
                    f"{self.name!r} parameter {pname}={v} outside "
                    f"[{spec.low}, {spec.high}]"
                )
            values[pname] = v
        return self.builder(**values)


def _pointwise_unique() -> JointDistribution:
    # the target is 1 or 2; one source copies it, the other idles at 0
    return JointDistribution(
        ("S0", "S1", "T"),
        [
            (("1", "0", "1"), 0.25),
            (("0", "1", "1"), 0.25),
            (("2", "0", "2"), 0.25),
            (("0", "2", "2"), 0.25),
        ],
    )


def _problem() -> JointDistribution:
    # source pairs 00, 01, 02, 10; T = 1 exactly when some source shows 1
    return JointDistribution(
        ("S0", "S1", "T"),
        [
            (("0", "0", "0"), 0.25),
            (("0", "1", "1"), 0.25),
            (("0", "2", "0"), 0.25),
            (("1", "0", "1"), 0.25),
        ],
    )


def _giant_bit() -> JointDistribution:
    return JointDistribution(
        ("S0", "S1", "T"),
        [(("0", "0", "0"), 0.5), (("1", "1", "1"), 0.5)],
    )


def _gb_erased(p: float) -> JointDistribution:
    # a shared fair bit, each view independently erased with probability p
    d = _giant_bit()
    channel = bec(p)
    for v in ("S0", "S1", "T"):
        d = d.apply_channel(v, channel, v)
    return d


def _xor() -> JointDistribution:
    events = []
    for a in ("0", "1"):
        for b in ("0", "1"):
            events.append(((a, b, str(int(a) ^ int(b))), 0.25))
    return JointDistribution(("S0", "S1", "T"), events)


_ENTRIES: tuple[CatalogEntry, ...] = (
    CatalogEntry(
        "pointwise-unique",
        "T is uniformly 1 or 2; per realization exactly one source equals T "
        "and the other is 0",
        builder=_pointwise_unique,
    ),
    CatalogEntry(
        "problem",
        "sources range over pairs 00/01/02/10 equiprobably; T indicates "
        "whether some source shows a 1",
        builder=_problem,
    ),
    CatalogEntry(
        "giant-bit",
        "one fair bit copied to all three variables",
        builder=_giant_bit,
    ),
    CatalogEntry(
        "gb-erased",
        "giant bit with every variable passed through an independent binary "
        "erasure channel",
        parameters={"p": ParamSpec(0.5, 0.0, 1.0, "erasure probability")},
        builder=_gb_erased,
    ),
    CatalogEntry(
        "xor",
        "uniform source bits with T = S0 xor S1",
        builder=_xor,
    ),
)

_BY_NAME = {e.name: e for e in _ENTRIES}


def entries() -> tuple[CatalogEntry, ...]:
    """All catalog entries, in stable order."""
    return _ENTRIES


def names() -> tuple[str, ...]:
    return tuple(e.name for e in _ENTRIES)


def get(name: str, params: dict | None = None, **kwargs) -> JointDistribution:
    """Build a catalog distribution by name; parameters may be passed either
    as a dict or as keyword arguments."""
    entry = _BY_NAME.get(name)
    if entry is None:
        raise UnknownName(f"no catalog entry {name!r}; known: {list(names())}")
    merged = dict(params or {})
    merged.update(kwargs)
    return entry.build(**merged)
