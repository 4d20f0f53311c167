"""System reliability forecasts.

Each component's state ``n`` steps ahead comes from its transition matrix; the
resulting marginals are pushed through the network one level at a time until
the system node is reached.  Reliability is the mass the system marginal puts
on the functional state set.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .bayes import Cpt, NodeId, Topology, child_marginal
from .errors import InvalidModel, ValidationError, MissingComponent, StateOutOfRange, UnknownComponent
from .markov import Distribution, TransitionMatrix, check_state, n_step

HealthVector = Mapping[NodeId, int]


@dataclass(frozen=True)
class SystemModel:
    topology: Topology
    cpts: Mapping[NodeId, Cpt]
    tpms: Mapping[NodeId, TransitionMatrix]
    functional_states: frozenset[int] = frozenset({0})
    names: Mapping[NodeId, str] = field(default_factory=dict)

    def __post_init__(self):
        top = self.topology
        object.__setattr__(self, "functional_states", frozenset(self.functional_states))
        for leaf in top.leaves:
            tpm = self.tpms.get(leaf)
            if tpm is None:
                raise InvalidModel(f"component {leaf} has no transition matrix")
            if tpm.states != top.nodes[leaf]:
                raise InvalidModel(
                    f"component {leaf} declares {top.nodes[leaf]} states but its "
                    f"transition matrix has {tpm.states}"
                )
        for node in top.internal:
            cpt = self.cpts.get(node)
            if cpt is None:
                raise InvalidModel(f"node {node} has parents but no CPT")
            pa = top.parents[node]
            cards = tuple(top.nodes[p] for p in pa)
            if cpt.parent_ids != pa or cpt.parent_cards != cards or cpt.child_states != top.nodes[node]:
                raise InvalidModel(f"CPT of {node} does not match its parents {list(map(str, pa))}")
        for node in self.tpms:
            if node not in top.nodes or top.parents.get(node):
                raise InvalidModel(f"transition matrix given for non-component node {node}")
        for node in self.cpts:
            if node not in top.nodes or not top.parents.get(node):
                raise InvalidModel(f"CPT given for node {node}, which has no parents")
        if not self.functional_states:
            raise InvalidModel("functional_states must not be empty")
        for s in self.functional_states:
            if not 0 <= s < top.nodes[top.root]:
                raise InvalidModel(f"functional state {s} is not a state of the system node")

    @property
    def leaves(self) -> list[NodeId]:
        return self.topology.leaves

    @property
    def root(self) -> NodeId:
        return self.topology.root

    def label(self, node: NodeId) -> str:
        return self.names.get(node, str(node))

    def resolve(self, ref: str | NodeId) -> NodeId:
        """Look a node up by id or by name."""
        if isinstance(ref, NodeId):
            if ref in self.topology.nodes:
                return ref
            raise UnknownComponent(f"unknown node {ref}")
        for node, name in self.names.items():
            if name == ref:
                return node
        try:
            node = NodeId.parse(ref)
        except ValidationError:
            raise UnknownComponent(f"unknown node {ref!r}") from None
        if node not in self.topology.nodes:
            raise UnknownComponent(f"unknown node {ref!r}")
        return node

    def check_health(self, h: Mapping[NodeId, int]) -> dict[NodeId, int]:
        leaves = set(self.leaves)
        for node in h:
            if node not in leaves:
                raise UnknownComponent(f"{node} is not a monitored component")
        missing = sorted(leaves - set(h))
        if missing:
            raise MissingComponent("no state for " + ", ".join(f"{n} ({self.label(n)})" for n in missing))
        return {n: check_state(h[n], self.topology.nodes[n], str(n)) for n in sorted(h)}

    def health(self, *states: int) -> dict[NodeId, int]:
        """Health vector from states listed in component order."""
        if len(states) != len(self.leaves):
            raise MissingComponent(f"expected {len(self.leaves)} states, got {len(states)}")
        return self.check_health(dict(zip(self.leaves, states)))

    def reliability_of(self, root_marginal) -> float:
        p = np.asarray(root_marginal, dtype=float)
        return float(sum(p[s] for s in sorted(self.functional_states)))


@dataclass(frozen=True)
class ForecastCurve:
    horizon: int
    reliability: np.ndarray
    node_marginals: list[dict[NodeId, Distribution]] | None = None

    def __len__(self):
        return self.reliability.size

    def __getitem__(self, n):
        return float(self.reliability[n])

    def __iter__(self):
        return iter(self.reliability.tolist())

    @classmethod
    def from_values(cls, values: Iterable[float]) -> "ForecastCurve":
        """Wrap an externally supplied reliability sequence."""
        r = np.array(list(values), dtype=float)
        if r.size == 0:
            raise InvalidModel("a forecast curve needs at least one value")
        if np.any((r < 0.0) | (r > 1.0)) or not np.all(np.isfinite(r)):
            raise InvalidModel("reliability values must lie in [0, 1]")
        r.setflags(write=False)
        return cls(r.size - 1, r)


def propagate(model: SystemModel, leaf_marginals: Mapping[NodeId, Distribution]) -> dict[NodeId, Distribution]:
    """Compute every node's marginal from the component marginals, bottom-up."""
    top = model.topology
    marginals = dict(leaf_marginals)
    for node in top.bottom_up():
        pa = top.parents.get(node)
        if pa:
            marginals[node] = child_marginal(model.cpts[node], [marginals[p] for p in pa])
    return marginals


def forecast_at(model: SystemModel, h: HealthVector, n: int) -> tuple[float, dict[NodeId, Distribution]]:
    h = model.check_health(h)
    leaf = {c: Distribution(n_step(model.tpms[c], n)[h[c]]) for c in model.leaves}
    marginals = propagate(model, leaf)
    return model.reliability_of(marginals[model.root]), marginals


def forecast_curve(
    model: SystemModel, h: HealthVector, horizon: int, keep_marginals: bool = False
) -> ForecastCurve:
    """Reliability for steps ``0..horizon``.

    Component rows are advanced with one vector-matrix product per step rather
    than recomputing matrix powers.
    """
    if horizon < 0:
        raise ValueError(f"horizon must be non-negative, got {horizon}")
    h = model.check_health(h)
    rows = {}
    for c in model.leaves:
        v = np.zeros(model.tpms[c].states)
        v[h[c]] = 1.0
        rows[c] = v
    reliability = np.empty(horizon + 1)
    kept = [] if keep_marginals else None
    for step in range(horizon + 1):
        if step:
            rows = {c: v @ model.tpms[c].probs for c, v in rows.items()}
        marginals = propagate(model, {c: Distribution(v) for c, v in rows.items()})
        reliability[step] = model.reliability_of(marginals[model.root])
        if kept is not None:
            kept.append(marginals)
    reliability.setflags(write=False)
    return ForecastCurve(horizon, reliability, kept)


def point_mass_reliability(model: SystemModel, states: Mapping[NodeId, int]) -> float:
    """System reliability when every component state is known exactly."""
    leaf = {}
    for c in model.leaves:
        card = model.topology.nodes[c]
        if not 0 <= states[c] < card:
            raise StateOutOfRange(states[c], card, str(c))
        leaf[c] = Distribution.point_mass(card, states[c])
    return model.reliability_of(propagate(model, leaf)[model.root])
