"""Random model generators shared by property and acceptance tests."""

from __future__ import annotations

import itertools
import math

import numpy as np

from pdmforecast.bayes import NodeId, make_cpt, validate_topology
from pdmforecast.errors import (
    CardinalityMismatch,
    DocumentSyntaxError,
    DuplicateNode,
    FailureNotAbsorbing,
    InvalidModel,
    LevelSkip,
    LowerTriangleNonZero,
    RowSumViolation,
    UnknownNodeReference,
)
from pdmforecast.forecast import SystemModel, point_mass_reliability
from pdmforecast.markov import validate_tpm


def random_tpm(rng: np.random.Generator, states: int, sparsity: float = 0.3) -> np.ndarray:
    m = np.zeros((states, states))
    for i in range(states - 1):
        w = rng.dirichlet(np.ones(states - i))
        w[rng.random(w.size) < sparsity] = 0.0
        if w.sum() == 0.0:
            w[0] = 1.0
        m[i, i:] = w / w.sum()
    m[-1, -1] = 1.0
    return m


def random_rows(rng: np.random.Generator, n_rows: int, child_states: int, deterministic: float = 0.2) -> np.ndarray:
    rows = rng.dirichlet(np.ones(child_states), size=n_rows)
    for r in range(n_rows):
        if rng.random() < deterministic:
            rows[r] = 0.0
            rows[r, rng.integers(child_states)] = 1.0
    rows[:, -1] = 1.0 - rows[:, :-1].sum(axis=1)
    return np.clip(rows, 0.0, 1.0)


def random_tree_model(
    rng: np.random.Generator,
    max_leaves: int = 4,
    max_states: int = 7,
    max_internal_states: int = 7,
    max_joint: int = 10**7,
) -> SystemModel:
    """A random valid tree model with at most ``max_leaves`` components."""
    while True:
        n_leaves = int(rng.integers(1, max_leaves + 1))
        # decide a random tree: each node either is a leaf or splits its leaf budget
        nodes: dict[NodeId, int] = {}
        edges: dict[NodeId, list[NodeId]] = {}
        next_index: dict[int, int] = {}

        def new_node(level: int, states: int) -> NodeId:
            idx = next_index.get(level, 0)
            next_index[level] = idx + 1
            node = NodeId(level, idx)
            nodes[node] = states
            return node

        def grow(node: NodeId, budget: int):
            if node.level > 1 and budget == 1 and (node.level >= 3 or rng.random() < 0.7):
                return
            k = int(rng.integers(1, budget + 1))
            cuts = sorted(rng.choice(np.arange(1, budget), size=k - 1, replace=False)) if k > 1 else []
            edges[node] = []
            for part in np.diff([0, *cuts, budget]):
                top_card = max_states if part == 1 else max_internal_states
                parent = new_node(node.level + 1, int(rng.integers(2, top_card + 1)))
                edges[node].append(parent)
                grow(parent, int(part))

        root = new_node(1, int(rng.integers(2, 4)))
        grow(root, n_leaves)
        if math.prod(nodes.values()) <= max_joint:
            break

    top = validate_topology(nodes, edges)
    cpts = {}
    for child, pa in edges.items():
        cards = [nodes[p] for p in pa]
        rows = random_rows(rng, math.prod(cards), nodes[child])
        cpts[child] = make_cpt(nodes[child], pa, cards, rows)
    tpms = {leaf: validate_tpm(random_tpm(rng, nodes[leaf])) for leaf in top.leaves}
    root_card = nodes[root]
    k = int(rng.integers(1, root_card))
    functional = frozenset(int(s) for s in rng.choice(root_card, size=k, replace=False))
    return SystemModel(top, cpts, tpms, functional)


def realization_moments(model: SystemModel, h: dict[NodeId, int], horizon: int) -> tuple[np.ndarray, np.ndarray]:
    """Exact mean and variance of the realization curve, by summing over all leaf-state combinations.

    Uses naive row powers and no propagation shortcuts; only for small leaf spaces.
    """
    leaves = model.leaves
    cards = [model.topology.nodes[c] for c in leaves]
    combos = list(itertools.product(*(range(k) for k in cards)))
    g = np.array([point_mass_reliability(model, dict(zip(leaves, combo))) for combo in combos])
    rows = [np.eye(k)[h[c]] for c, k in zip(leaves, cards)]
    mean, var = np.empty(horizon + 1), np.empty(horizon + 1)
    for n in range(horizon + 1):
        w = np.array([math.prod(r[s] for r, s in zip(rows, combo)) for combo in combos])
        mean[n] = w @ g
        var[n] = w @ (g * g) - mean[n] ** 2
        rows = [r @ model.tpms[c].probs for r, c in zip(rows, leaves)]
    return mean, np.maximum(var, 0.0)


def random_health(rng: np.random.Generator, model: SystemModel) -> dict[NodeId, int]:
    return {c: int(rng.integers(model.topology.nodes[c])) for c in model.leaves}


def minimal_doc() -> dict:
    return {
        "schema_version": "1",
        "nodes": [
            {"id": {"level": 1, "index": 0}, "name": "system", "states": 2},
            {"id": {"level": 2, "index": 0}, "name": "pump", "states": 3},
        ],
        "edges": [{"child": {"level": 1, "index": 0}, "parents": [{"level": 2, "index": 0}]}],
        "cpts": [{"node": {"level": 1, "index": 0}, "rows": [[1.0, 0.0], [0.7, 0.3], [0.0, 1.0]]}],
        "tpms": [{"node": {"level": 2, "index": 0}, "matrix": [[0.9, 0.1, 0.0], [0.0, 0.8, 0.2], [0.0, 0.0, 1.0]]}],
        "functional_states": [0],
    }


# Seeded invalid documents: name -> (mutation of minimal_doc, error, location prefix)

def _set(path, value):
    def mutate(doc):
        target = doc
        for key in path[:-1]:
            target = target[key]
        target[path[-1]] = value

    return mutate


def _delete(path):
    def mutate(doc):
        target = doc
        for key in path[:-1]:
            target = target[key]
        del target[path[-1]]

    return mutate


def _append(path, value):
    def mutate(doc):
        target = doc
        for key in path:
            target = target[key]
        target.append(value)

    return mutate


def _both(first, second):
    def mutate(doc):
        first(doc)
        second(doc)

    return mutate


ROOT = {"level": 1, "index": 0}
DEEP = {"level": 3, "index": 0}
PUMP = {"level": 2, "index": 0}

INVALID = {
    "missing nodes": (_delete(["nodes"]), DocumentSyntaxError, "$"),
    "bad schema": (_set(["schema_version"], "9"), DocumentSyntaxError, "$.schema_version"),
    "states not int": (_set(["nodes", 1, "states"], "3"), DocumentSyntaxError, "$.nodes[1]"),
    "one state": (_set(["nodes", 1, "states"], 1), InvalidModel, "$.nodes[1]"),
    "duplicate node": (_append(["nodes"], {"id": PUMP, "states": 3}), DuplicateNode, "$.nodes[2]"),
    "duplicate name": (_append(["nodes"], {"id": {"level": 2, "index": 1}, "name": "pump", "states": 2}), DuplicateNode, "$.nodes[2]"),
    "negative index": (_set(["nodes", 1, "id", "index"], -1), DocumentSyntaxError, "$.nodes[1]"),
    "unknown parent": (_set(["edges", 0, "parents"], [{"level": 2, "index": 5}]), UnknownNodeReference, "$.edges[0]"),
    "unknown cpt node": (_set(["cpts", 0, "node"], {"level": 3, "index": 0}), UnknownNodeReference, "$.cpts[0]"),
    "unknown tpm node": (_set(["tpms", 0, "node"], {"level": 4, "index": 0}), UnknownNodeReference, "$.tpms[0]"),
    "cpt row sums 0.97": (_set(["cpts", 0, "rows", 1], [0.67, 0.3]), RowSumViolation, "$.cpts[0]"),
    "cpt wrong rows": (_set(["cpts", 0, "rows"], [[1.0, 0.0]]), CardinalityMismatch, "$.cpts[0]"),
    "cpt non numeric": (_set(["cpts", 0, "rows", 0, 0], "x"), DocumentSyntaxError, "$.cpts[0]"),
    "tpm lower triangle": (_set(["tpms", 0, "matrix", 1], [0.1, 0.7, 0.2]), LowerTriangleNonZero, "$.tpms[0]"),
    "tpm not absorbing": (_set(["tpms", 0, "matrix", 2], [0.0, 0.0, 0.5]), FailureNotAbsorbing, "$.tpms[0]"),
    "tpm row sum": (_set(["tpms", 0, "matrix", 0], [0.9, 0.05, 0.0]), RowSumViolation, "$.tpms[0]"),
    "tpm on system": (_append(["tpms"], {"node": ROOT, "matrix": [[1.0, 0.0], [0.0, 1.0]]}), InvalidModel, "$"),
    "missing tpm": (_set(["tpms"], []), InvalidModel, "$"),
    "missing cpt": (_set(["cpts"], []), InvalidModel, "$"),
    "renamed node": (_set(["nodes", 1, "id"], {"level": 3, "index": 0}), UnknownNodeReference, "$.edges[0]"),
    "level skip": (_both(_append(["nodes"], {"id": DEEP, "states": 2}), _append(["edges", 0, "parents"], DEEP)), LevelSkip, "$.edges"),
    "functional empty": (_set(["functional_states"], []), InvalidModel, "$.functional_states"),
    "functional out of range": (_set(["functional_states"], [2]), InvalidModel, "$"),
    "functional not int": (_set(["functional_states"], ["up"]), DocumentSyntaxError, "$.functional_states[0]"),
}
