"""Finite joint distributions over named, string-valued variables.

A :class:`JointDistribution` is a sparse probability mass function: only
outcomes with nonzero probability are stored, and they are kept in
lexicographic order so that two equal distributions always iterate
identically.  All operations are pure and return new objects; instances
are safe to share across threads.

Probabilities are plain floats.  Constructors validate nonnegativity and
normalization (sum within ``NORMALIZATION_TOL`` of 1) and prune exact
zeros; optimizer outputs are cleaned up separately with
:meth:`JointDistribution.prune`.
"""

from __future__ import annotations

import json
from collections.abc import Iterable, Mapping
from typing import Union

import numpy as np

from .errors import (
    AlphabetMismatch,
    ArityMismatch,
    DuplicateOutcome,
    InvalidVariable,
    NegativeProbability,
    NotNormalized,
    OutOfRange,
    OverlappingSets,
    UnknownVariable,
    ZeroProbabilityCondition,
)

Outcome = tuple[str, ...]
VarSpec = Union[str, Iterable[str]]

NORMALIZATION_TOL = 1e-9
PRUNE_EPS = 1e-12

#: Symbol used for the erased output of a binary erasure channel.
ERASED = "⊥"


def _check_variables(variables) -> tuple[str, ...]:
    variables = tuple(variables)
    for v in variables:
        if not isinstance(v, str) or not v:
            raise InvalidVariable(f"variable names must be non-empty strings, got {v!r}")
    if len(set(variables)) != len(variables):
        raise InvalidVariable(f"duplicate variable names in {variables!r}")
    return variables


class JointDistribution:
    """Sparse joint pmf over an ordered tuple of named variables."""

    __slots__ = ("_variables", "_events")

    def __init__(self, variables, events):
        self._variables = _check_variables(variables)
        arity = len(self._variables)

        if isinstance(events, Mapping):
            pairs = events.items()
        else:
            pairs = list(events)

        seen: dict[Outcome, float] = {}
        total = 0.0
        for outcome, p in pairs:
            outcome = tuple(outcome)
            if len(outcome) != arity:
                raise ArityMismatch(
                    f"outcome {outcome!r} has arity {len(outcome)}, expected {arity}"
                )
            if not all(isinstance(s, str) for s in outcome):
                raise ArityMismatch(f"outcome symbols must be strings, got {outcome!r}")
            p = float(p)
            if p < 0.0:
                raise NegativeProbability(f"p({outcome!r}) = {p}")
            if outcome in seen and not isinstance(events, Mapping):
                raise DuplicateOutcome(f"outcome {outcome!r} listed twice")
            seen[outcome] = p
            total += p
        if abs(total - 1.0) > NORMALIZATION_TOL:
            raise NotNormalized(f"probabilities sum to {total!r}, not 1")

        self._events = {o: seen[o] for o in sorted(seen) if seen[o] > 0.0}

    # -------------------------------------------------------- construction

    @classmethod
    def from_events(cls, variables, events) -> "JointDistribution":
        """Build and validate a distribution from (outcome, probability) pairs."""
        return cls(variables, events)

    @classmethod
    def unit(cls) -> "JointDistribution":
        """The distribution over zero variables (a single empty outcome)."""
        return cls((), {(): 1.0})

    # ------------------------------------------------------------- queries

    @property
    def variables(self) -> tuple[str, ...]:
        return self._variables

    @property
    def outcomes(self) -> tuple[Outcome, ...]:
        return tuple(self._events)

    def items(self):
        """Iterate ``(outcome, probability)`` in lexicographic outcome order."""
        return iter(self._events.items())

    def probability(self, outcome) -> float:
        return self._events.get(tuple(outcome), 0.0)

    def index(self, var: str) -> int:
        try:
            return self._variables.index(var)
        except ValueError:
            raise UnknownVariable(f"{var!r} not in {self._variables!r}") from None

    def alphabet(self, var: str) -> tuple[str, ...]:
        """Sorted support symbols of one variable."""
        i = self.index(var)
        return tuple(sorted({o[i] for o in self._events}))

    def __len__(self) -> int:
        return len(self._events)

    def __eq__(self, other) -> bool:
        if not isinstance(other, JointDistribution):
            return NotImplemented
        return self._variables == other._variables and self._events == other._events

    def allclose(self, other: "JointDistribution", atol: float = 1e-12) -> bool:
        if self._variables != other._variables:
            return False
        keys = set(self._events) | set(other._events)
        return all(
            abs(self.probability(o) - other.probability(o)) <= atol for o in keys
        )

    def __repr__(self) -> str:
        vs = ",".join(self._variables)
        return f"JointDistribution([{vs}], {len(self._events)} outcomes)"

    # ---------------------------------------------------------- operations

    def _resolve(self, vars: VarSpec) -> tuple[str, ...]:
        """Normalize a variable selection to this distribution's order."""
        if isinstance(vars, str):
            vars = (vars,)
        wanted = set(vars)
        for v in wanted:
            self.index(v)
        return tuple(v for v in self._variables if v in wanted)

    def marginalize(self, keep: VarSpec) -> "JointDistribution":
        """Sum out every variable not in ``keep``."""
        keep_t = self._resolve(keep)
        if not keep_t:
            raise UnknownVariable("must keep at least one variable")
        idx = [self._variables.index(v) for v in keep_t]
        acc: dict[Outcome, float] = {}
        for outcome, p in self._events.items():
            key = tuple(outcome[i] for i in idx)
            acc[key] = acc.get(key, 0.0) + p
        return JointDistribution(keep_t, acc)

    def reorder(self, new_order) -> "JointDistribution":
        """Permute the variable order (same joint law, new axis order)."""
        new_order = _check_variables(new_order)
        if set(new_order) != set(self._variables) or len(new_order) != len(self._variables):
            raise UnknownVariable(
                f"{new_order!r} is not a permutation of {self._variables!r}"
            )
        idx = [self._variables.index(v) for v in new_order]
        events = {tuple(o[i] for i in idx): p for o, p in self._events.items()}
        return JointDistribution(new_order, events)

    def condition(self, on: str, value: str) -> "JointDistribution":
        """Condition on ``on == value`` and drop that variable."""
        i = self.index(on)
        mass = sum(p for o, p in self._events.items() if o[i] == value)
        if mass <= 0.0:
            raise ZeroProbabilityCondition(f"p({on}={value!r}) = 0")
        rest = tuple(v for v in self._variables if v != on)
        acc: dict[Outcome, float] = {}
        for outcome, p in self._events.items():
            if outcome[i] != value:
                continue
            key = tuple(s for j, s in enumerate(outcome) if j != i)
            acc[key] = acc.get(key, 0.0) + p / mass
        return JointDistribution(rest, acc)

    def apply_channel(self, var: str, channel: "Channel", new_name: str) -> "JointDistribution":
        """Replace ``var`` by the channel output, conditionally independently.

        The channel acts on ``var`` alone: every other variable keeps its
        value, and the output variable takes ``var``'s slot under the name
        ``new_name``.
        """
        i = self.index(var)
        others = set(self._variables) - {var}
        if not isinstance(new_name, str) or not new_name:
            raise InvalidVariable(f"bad replacement name {new_name!r}")
        if new_name in others:
            raise InvalidVariable(f"{new_name!r} already names another variable")
        missing = set(self.alphabet(var)) - set(channel.input_alphabet)
        if missing:
            raise AlphabetMismatch(
                f"channel input alphabet lacks symbols {sorted(missing)!r} of {var!r}"
            )
        new_vars = tuple(new_name if v == var else v for v in self._variables)
        acc: dict[Outcome, float] = {}
        for outcome, p in self._events.items():
            for out_sym, t in channel.row(outcome[i]).items():
                if t <= 0.0:
                    continue
                key = tuple(out_sym if j == i else s for j, s in enumerate(outcome))
                acc[key] = acc.get(key, 0.0) + p * t
        return JointDistribution(new_vars, acc)

    def prune(self, eps: float = PRUNE_EPS) -> "JointDistribution":
        """Drop outcomes below ``eps`` and renormalize (optimizer cleanup)."""
        kept = {o: p for o, p in self._events.items() if p >= eps}
        total = sum(kept.values())
        if total <= 0.0:
            raise NotNormalized("pruning removed all probability mass")
        return JointDistribution(self._variables, {o: p / total for o, p in kept.items()})

    # ---------------------------------------------------------------- JSON

    def to_json_dict(self) -> dict:
        return {
            "variables": list(self._variables),
            "events": [{"outcome": list(o), "p": p} for o, p in self._events.items()],
        }

    @classmethod
    def from_json_dict(cls, obj) -> "JointDistribution":
        if not isinstance(obj, Mapping) or "variables" not in obj or "events" not in obj:
            raise ArityMismatch('distribution JSON must have "variables" and "events"')
        events = []
        for ev in obj["events"]:
            if not isinstance(ev, Mapping) or "outcome" not in ev or "p" not in ev:
                raise ArityMismatch('each event must have "outcome" and "p"')
            events.append((tuple(ev["outcome"]), ev["p"]))
        return cls(obj["variables"], events)

    def dumps(self, **kwargs) -> str:
        return json.dumps(self.to_json_dict(), ensure_ascii=False, **kwargs)

    @classmethod
    def loads(cls, text: str) -> "JointDistribution":
        return cls.from_json_dict(json.loads(text))


def from_events(variables, events) -> JointDistribution:
    """Module-level alias for :meth:`JointDistribution.from_events`."""
    return JointDistribution(variables, events)


# --------------------------------------------------------------------------
# Channels
# --------------------------------------------------------------------------


class Channel:
    """Conditional distribution (row-stochastic matrix) between alphabets."""

    __slots__ = ("_inputs", "_outputs", "_matrix")

    def __init__(self, input_alphabet, output_alphabet, rows):
        self._inputs = tuple(input_alphabet)
        self._outputs = tuple(output_alphabet)
        if len(set(self._inputs)) != len(self._inputs):
            raise InvalidVariable(f"duplicate input symbols {self._inputs!r}")
        if len(set(self._outputs)) != len(self._outputs):
            raise InvalidVariable(f"duplicate output symbols {self._outputs!r}")
        m = np.array(rows, dtype=float)
        if m.shape != (len(self._inputs), len(self._outputs)):
            raise ArityMismatch(
                f"rows have shape {m.shape}, expected "
                f"({len(self._inputs)}, {len(self._outputs)})"
            )
        if (m < 0.0).any():
            raise NegativeProbability("channel rows must be nonnegative")
        sums = m.sum(axis=1)
        bad = np.abs(sums - 1.0) > NORMALIZATION_TOL
        if bad.any():
            sym = self._inputs[int(np.argmax(bad))]
            raise NotNormalized(f"channel row for {sym!r} sums to {sums[bad][0]!r}")
        m.setflags(write=False)
        self._matrix = m

    @property
    def input_alphabet(self) -> tuple[str, ...]:
        return self._inputs

    @property
    def output_alphabet(self) -> tuple[str, ...]:
        return self._outputs

    @property
    def matrix(self) -> np.ndarray:
        """Read-only (inputs × outputs) transition matrix."""
        return self._matrix

    def row(self, symbol: str) -> dict[str, float]:
        try:
            i = self._inputs.index(symbol)
        except ValueError:
            raise AlphabetMismatch(f"{symbol!r} not a channel input") from None
        return dict(zip(self._outputs, self._matrix[i]))

    def transition(self, x: str, y: str) -> float:
        i = self._inputs.index(x)
        j = self._outputs.index(y)
        return float(self._matrix[i, j])

    def __repr__(self) -> str:
        return f"Channel({len(self._inputs)}→{len(self._outputs)})"

    @classmethod
    def identity(cls, alphabet) -> "Channel":
        alphabet = tuple(alphabet)
        return cls(alphabet, alphabet, np.eye(len(alphabet)))

    @classmethod
    def constant(cls, input_alphabet, symbol: str) -> "Channel":
        input_alphabet = tuple(input_alphabet)
        return cls(input_alphabet, (symbol,), np.ones((len(input_alphabet), 1)))

    @classmethod
    def deterministic(cls, input_alphabet, mapping, output_alphabet=None) -> "Channel":
        """Channel sending each input symbol to ``mapping[symbol]`` surely."""
        input_alphabet = tuple(input_alphabet)
        if output_alphabet is None:
            output_alphabet = tuple(sorted(set(mapping[x] for x in input_alphabet)))
        else:
            output_alphabet = tuple(output_alphabet)
        m = np.zeros((len(input_alphabet), len(output_alphabet)))
        for i, x in enumerate(input_alphabet):
            m[i, output_alphabet.index(mapping[x])] = 1.0
        return cls(input_alphabet, output_alphabet, m)

    def to_json_dict(self) -> dict:
        return {
            "inputs": list(self._inputs),
            "outputs": list(self._outputs),
            "rows": self._matrix.tolist(),
        }


def bec(p: float) -> Channel:
    """Binary erasure channel: passes the bit w.p. ``1-p``, else emits ⊥."""
    if not 0.0 <= p <= 1.0:
        raise OutOfRange(f"erasure probability {p!r} outside [0, 1]")
    return Channel(
        ("0", "1"),
        ("0", "1", ERASED),
        [[1.0 - p, 0.0, p], [0.0, 1.0 - p, p]],
    )


# --------------------------------------------------------------------------
# Dense views for the optimizers
# --------------------------------------------------------------------------


def grouped_array(d: JointDistribution, groups):
    """Dense joint array with one axis per variable group.

    ``groups`` is a sequence of variable collections; each group becomes one
    axis indexed by the sorted composite outcomes of that group (an empty
    group contributes a singleton axis).  Returns ``(array, supports)``
    where ``supports[i]`` lists the composite outcome tuples of group ``i``.
    """
    canon = []
    for g in groups:
        if isinstance(g, str):
            g = (g,)
        canon.append(tuple(v for v in d.variables if v in set(g)))
    flat = [v for g in canon for v in g]
    if len(set(flat)) != len(flat):
        raise OverlappingSets(f"groups overlap: {groups!r}")

    positions = [tuple(d.variables.index(v) for v in g) for g in canon]
    supports: list[list[tuple[str, ...]]] = []
    for pos in positions:
        seen = sorted({tuple(o[i] for i in pos) for o in d.outcomes})
        supports.append(seen if seen else [()])
    lookup = [{s: i for i, s in enumerate(sup)} for sup in supports]

    arr = np.zeros(tuple(len(s) for s in supports))
    for outcome, p in d.items():
        key = tuple(
            lk[tuple(outcome[i] for i in pos)] for pos, lk in zip(positions, lookup)
        )
        arr[key] += p
    return arr, supports
