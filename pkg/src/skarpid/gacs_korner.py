"""Gács-Körner common random variable and the no-communication key rate.

The meet of two variable blocks A and B is the finest random variable
that both sides can compute with zero error.  It is found combinatorially:
build the bipartite graph whose edges are the support pairs (a, b) and
take connected components.  With an eavesdropper E, the no-communication
secret key agreement rate is the conditional entropy of the component
label given E.

The meet is exact but brittle: a single extra support pair can merge two
components and drop the rate discontinuously to zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .distributions import JointDistribution, VarSpec, grouped_array
from .shannon import _check_disjoint, _nonneg


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, x: int, y: int) -> None:
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            self.parent[ry] = rx


@dataclass(frozen=True)
class MeetAssignment:
    """Component labels of the bipartite support graph of (A, B).

    ``a_labels`` and ``b_labels`` map each supported composite symbol of
    the respective block to its component id.  Labels are 0..k-1 in order
    of first appearance when support pairs are traversed lexicographically.
    """

    a_labels: dict[tuple[str, ...], int]
    b_labels: dict[tuple[str, ...], int]
    n_components: int

    def label_of_a(self, symbol) -> int:
        return self.a_labels[tuple(symbol)]

    def label_of_b(self, symbol) -> int:
        return self.b_labels[tuple(symbol)]


def meet(d: JointDistribution, a: VarSpec, b: VarSpec) -> MeetAssignment:
    """Connected components of the support graph between blocks A and B."""
    pab, (supp_a, supp_b) = grouped_array(d.marginalize(_union(d, a, b)), (a, b))
    na = len(supp_a)
    uf = _UnionFind(na + len(supp_b))
    pairs = [(i, j) for i in range(na) for j in range(len(supp_b)) if pab[i, j] > 0.0]
    for i, j in pairs:
        uf.union(i, na + j)

    labels: dict[int, int] = {}
    for i, j in pairs:  # lexicographic: supports are sorted, i-major
        root = uf.find(i)
        if root not in labels:
            labels[root] = len(labels)
    a_labels = {supp_a[i]: labels[uf.find(i)] for i in range(na) if pab[i].sum() > 0.0}
    b_labels = {
        supp_b[j]: labels[uf.find(na + j)]
        for j in range(len(supp_b))
        if pab[:, j].sum() > 0.0
    }
    return MeetAssignment(a_labels, b_labels, len(labels))


def _union(d: JointDistribution, *specs) -> tuple[str, ...]:
    wanted = set()
    for s in specs:
        wanted |= {s} if isinstance(s, str) else set(s)
    return tuple(v for v in d.variables if v in wanted)


def skar_no_comm(d: JointDistribution, a: VarSpec, b: VarSpec, e: VarSpec = ()) -> float:
    """Secret key rate with no public communication: H(A ⋏ B | E)."""
    a_t = (a,) if isinstance(a, str) else tuple(a)
    b_t = (b,) if isinstance(b, str) else tuple(b)
    e_t = (e,) if isinstance(e, str) else tuple(e)
    if not a_t or not b_t:
        raise ValueError("A and B must be non-empty")
    _check_disjoint(a_t, b_t, e_t)

    assignment = meet(d, a_t, b_t)
    dd = d.marginalize(_union(d, *(a_t + b_t + e_t)))
    a_pos = [dd.variables.index(v) for v in _union(dd, a_t)]
    e_pos = [dd.variables.index(v) for v in _union(dd, e_t)] if e_t else []

    # joint law of (component label, E), then H(label | E) by direct sums
    joint: dict[tuple, float] = {}
    e_marg: dict[tuple, float] = {}
    for outcome, p in dd.items():
        lab = assignment.a_labels[tuple(outcome[i] for i in a_pos)]
        e_sym = tuple(outcome[i] for i in e_pos)
        joint[lab, e_sym] = joint.get((lab, e_sym), 0.0) + p
        e_marg[e_sym] = e_marg.get(e_sym, 0.0) + p

    h_joint = -sum(p * math.log2(p) for p in joint.values() if p > 0.0)
    h_e = -sum(p * math.log2(p) for p in e_marg.values() if p > 0.0)
    return _nonneg(h_joint - h_e, "no-communication rate")
