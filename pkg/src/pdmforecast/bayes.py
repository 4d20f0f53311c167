"""Tree-shaped discrete Bayesian networks.

Nodes are addressed by ``(level, index)``; level 1 holds the single system
node and the parents of a level-``i`` node all sit at level ``i + 1``.  Every
node except the system feeds exactly one child, so parent subtrees are
disjoint and parent marginals may be combined as independent factors.

CPT rows follow mixed-radix order over the parents with the *last* parent
varying fastest, which is the same order :func:`kron_vec` produces.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from functools import reduce
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    CardinalityMismatch,
    Cycle,
    EmptyParentList,
    IncompleteAssignment,
    InvalidModel,
    LevelSkip,
    MultipleChildren,
    MultipleRoots,
    OrphanNonRoot,
    RowSumViolation,
    StateOutOfRange,
    UnknownNodeReference,
    ZeroProbabilityEvidence,
)
from .markov import ROW_SUM_TOL, Distribution, _frozen

_NODE_RE = re.compile(r"^\s*(\d+)\s*[.:]\s*(\d+)\s*$")


@dataclass(frozen=True, order=True)
class NodeId:
    level: int
    index: int

    def __post_init__(self):
        if self.level < 1 or self.index < 0:
            raise InvalidModel(f"invalid node id (level={self.level}, index={self.index})")

    @classmethod
    def parse(cls, text: str) -> "NodeId":
        """Parse ``"level.index"`` (``"level:index"`` also accepted)."""
        m = _NODE_RE.match(text)
        if not m:
            raise UnknownNodeReference(f"cannot parse node id {text!r}; expected LEVEL.INDEX")
        return cls(int(m.group(1)), int(m.group(2)))

    def __str__(self) -> str:
        return f"{self.level}.{self.index}"


@dataclass(frozen=True)
class Topology:
    """Checked node tree. Build with :func:`validate_topology`."""

    nodes: Mapping[NodeId, int]
    parents: Mapping[NodeId, tuple[NodeId, ...]]
    root: NodeId
    child_of: Mapping[NodeId, NodeId] = field(compare=False)

    @property
    def leaves(self) -> list[NodeId]:
        return sorted(n for n in self.nodes if not self.parents.get(n))

    @property
    def internal(self) -> list[NodeId]:
        return sorted(n for n in self.nodes if self.parents.get(n))

    @property
    def levels(self) -> int:
        return max(n.level for n in self.nodes)

    def bottom_up(self) -> list[NodeId]:
        """Nodes ordered deepest level first, so parents precede children."""
        return sorted(self.nodes, key=lambda n: (-n.level, n.index))

    def subtree(self, node: NodeId) -> set[NodeId]:
        out, stack = set(), [node]
        while stack:
            n = stack.pop()
            out.add(n)
            stack.extend(self.parents.get(n, ()))
        return out


def validate_topology(
    nodes: Mapping[NodeId, int],
    edges: Mapping[NodeId, Sequence[NodeId]],
) -> Topology:
    """Check that ``edges`` (child -> ordered parents) form a valid node tree."""
    for node, card in nodes.items():
        if isinstance(card, bool) or int(card) != card or card < 2:
            raise InvalidModel(f"node {node} needs an integer state count >= 2, got {card!r}")
    parents: dict[NodeId, tuple[NodeId, ...]] = {}
    for child, pa in edges.items():
        if child not in nodes:
            raise UnknownNodeReference(f"edge child {child} is not a declared node")
        pa = tuple(pa)
        if not pa:
            continue
        for p in pa:
            if p not in nodes:
                raise UnknownNodeReference(f"parent {p} of {child} is not a declared node")
        parents[child] = pa

    _check_acyclic(nodes, parents)

    child_of: dict[NodeId, NodeId] = {}
    for child in sorted(parents):
        for p in parents[child]:
            if p in child_of:
                raise MultipleChildren(
                    f"node {p} is a parent of both {child_of[p]} and {child}"
                    if child_of[p] != child
                    else f"node {p} is listed twice as a parent of {child}"
                )
            child_of[p] = child
            if p.level != child.level + 1:
                raise LevelSkip(
                    f"parent {p} (level {p.level}) of {child} (level {child.level}) "
                    f"must sit at level {child.level + 1}"
                )

    sinks = sorted(n for n in nodes if n not in child_of)
    top = [n for n in sinks if n.level == 1]
    if len(top) > 1:
        raise MultipleRoots(f"more than one system node: {', '.join(map(str, top))}")
    for n in sinks:
        if n.level != 1:
            raise OrphanNonRoot(f"node {n} at level {n.level} feeds no child")
    if not top:
        raise MultipleRoots("no system node at level 1")
    return Topology(dict(nodes), parents, top[0], child_of)


def _check_acyclic(nodes, parents) -> None:
    state: dict[NodeId, int] = {}

    def visit(n, trail):
        state[n] = 1
        for p in parents.get(n, ()):
            if state.get(p) == 1:
                loop = trail[trail.index(p):] + [p] if p in trail else [n, p]
                raise Cycle("cycle through " + " -> ".join(map(str, loop)))
            if p not in state:
                visit(p, trail + [p])
        state[n] = 2

    for n in sorted(nodes):
        if n not in state:
            visit(n, [n])


@dataclass(frozen=True, eq=False)
class Cpt:
    """Conditional probability table; one row per joint parent assignment."""

    child_states: int
    parent_ids: tuple[NodeId, ...]
    parent_cards: tuple[int, ...]
    rows: np.ndarray

    def __eq__(self, other):
        if not isinstance(other, Cpt):
            return NotImplemented
        return (
            self.child_states == other.child_states
            and self.parent_ids == other.parent_ids
            and self.parent_cards == other.parent_cards
            and np.array_equal(self.rows, other.rows)
        )

    __hash__ = None

    def row_index(self, parent_states: Sequence[int]) -> int:
        return int(np.ravel_multi_index(tuple(parent_states), self.parent_cards))


def make_cpt(
    child_states: int,
    parent_ids: Sequence[NodeId],
    parent_cards: Sequence[int],
    rows,
    where: str | None = None,
) -> Cpt:
    """Validate and build a :class:`Cpt`."""
    parent_ids, parent_cards = tuple(parent_ids), tuple(int(c) for c in parent_cards)
    if len(parent_ids) != len(parent_cards):
        raise CardinalityMismatch("parent ids and cardinalities differ in length", where)
    if not parent_ids:
        raise EmptyParentList("a CPT needs at least one parent", where)
    try:
        r = np.array(rows, dtype=float)
    except (TypeError, ValueError):
        raise CardinalityMismatch("CPT rows must form a rectangular numeric matrix", where) from None
    expected = (math.prod(parent_cards), child_states)
    if r.shape != expected:
        raise CardinalityMismatch(f"CPT has shape {r.shape}, expected {expected}", where)
    bad = np.argwhere(~np.isfinite(r) | (r < 0.0) | (r > 1.0))
    if bad.size:
        i, j = (int(v) for v in bad[0])
        raise InvalidModel(f"row {i} column {j} = {r[i, j]!r} is outside [0, 1]", where)
    for i, total in enumerate(r.sum(axis=1)):
        if abs(total - 1.0) > ROW_SUM_TOL:
            raise RowSumViolation(i, float(total), where)
    return Cpt(int(child_states), parent_ids, parent_cards, _frozen(r))


def kron_vec(parents: Sequence[Distribution | Sequence[float]]) -> np.ndarray:
    """Kronecker product of parent marginals, last parent varying fastest."""
    if len(parents) == 0:
        raise EmptyParentList("kron_vec needs at least one distribution")
    vecs = [np.asarray(p, dtype=float) for p in parents]
    return reduce(np.kron, vecs)


def child_marginal(cpt: Cpt, parents: Sequence[Distribution | Sequence[float]]) -> Distribution:
    """Marginal of the child: column-wise inner products of the CPT with ``kron_vec``."""
    if len(parents) != len(cpt.parent_cards):
        raise CardinalityMismatch(
            f"CPT expects {len(cpt.parent_cards)} parents, got {len(parents)}"
        )
    for k, (p, card) in enumerate(zip(parents, cpt.parent_cards)):
        if len(p) != card:
            raise CardinalityMismatch(f"parent {k} has {len(p)} states, CPT expects {card}")
    return Distribution(cpt.rows.T @ kron_vec(parents))


def _check_assignment(topology: Topology, assignment: Mapping[NodeId, int]) -> None:
    missing = [n for n in topology.nodes if n not in assignment]
    if missing:
        raise IncompleteAssignment("no state given for " + ", ".join(map(str, sorted(missing))))
    for n, s in assignment.items():
        card = topology.nodes.get(n)
        if card is None:
            raise UnknownNodeReference(f"assignment names unknown node {n}")
        if not 0 <= s < card:
            raise StateOutOfRange(s, card, str(n))


def joint_probability(
    topology: Topology,
    cpts: Mapping[NodeId, Cpt],
    leaf_dists: Mapping[NodeId, Distribution | Sequence[float]],
    assignment: Mapping[NodeId, int],
) -> float:
    """Chain-rule product of every node's conditional at a full assignment."""
    _check_assignment(topology, assignment)
    prob = 1.0
    for node in topology.nodes:
        pa = topology.parents.get(node)
        if pa:
            cpt = cpts[node]
            row = cpt.row_index([assignment[p] for p in pa])
            prob *= float(cpt.rows[row, assignment[node]])
        else:
            prob *= float(np.asarray(leaf_dists[node])[assignment[node]])
        if prob == 0.0:
            return 0.0
    return prob


def iter_assignments(
    topology: Topology, fixed: Mapping[NodeId, int] | None = None
) -> Iterable[dict[NodeId, int]]:
    """All full assignments, optionally holding some nodes fixed."""
    fixed = dict(fixed or {})
    free = sorted(n for n in topology.nodes if n not in fixed)
    for states in itertools.product(*(range(topology.nodes[n]) for n in free)):
        a = dict(fixed)
        a.update(zip(free, states))
        yield a


def posterior(
    topology: Topology,
    cpts: Mapping[NodeId, Cpt],
    leaf_dists: Mapping[NodeId, Distribution | Sequence[float]],
    evidence: tuple[NodeId, int],
    query: NodeId,
) -> Distribution:
    """``P(query | evidence node = state)`` by enumerating consistent assignments.

    Only nodes in the subtrees of the query and evidence (plus the path that joins
    them) can influence the answer, but we keep the enumeration over the whole
    network; desk-scale models make that affordable and it keeps this route free
    of any shortcut the forecaster uses.
    """
    ev_node, ev_state = evidence
    for n in (ev_node, query):
        if n not in topology.nodes:
            raise UnknownNodeReference(f"unknown node {n}")
    if not 0 <= ev_state < topology.nodes[ev_node]:
        raise StateOutOfRange(ev_state, topology.nodes[ev_node], str(ev_node))

    weights = np.zeros(topology.nodes[query])
    for a in iter_assignments(topology, {ev_node: ev_state}):
        weights[a[query]] += joint_probability(topology, cpts, leaf_dists, a)
    total = weights.sum()
    if total <= 0.0:
        raise ZeroProbabilityEvidence(
            f"evidence {ev_node} = {ev_state} has zero probability under the model"
        )
    return Distribution(weights / total)

