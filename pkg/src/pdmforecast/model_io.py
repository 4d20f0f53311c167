"""JSON model and observation files.

Model document (``schema_version`` ``"1"``)::

    {
      "schema_version": "1",
      "nodes": [{"id": {"level": 1, "index": 0}, "name": "system", "states": 2}, ...],
      "edges": [{"child": {"level": 1, "index": 0},
                 "parents": [{"level": 2, "index": 0}, {"level": 2, "index": 1}]}, ...],
      "cpts":  [{"node": {"level": 1, "index": 0}, "rows": [[...], ...]}, ...],
      "tpms":  [{"node": {"level": 2, "index": 0}, "matrix": [[...], ...]}, ...],
      "functional_states": [0]
    }

CPT rows enumerate joint parent states in mixed-radix order following the
``parents`` list of the node's edge, the LAST parent varying fastest: for
parents with 2 and 3 states the rows are (0,0) (0,1) (0,2) (1,0) (1,1) (1,2).

Observation document: a flat object mapping component id (``"level.index"``)
or component name to its current state, plus an optional integer
``"observed_at"`` step::

    {"observed_at": 2, "2.0": 2, "2.1": 1}
"""

from __future__ import annotations

import json
import re
from typing import Any

from .bayes import NodeId, make_cpt, validate_topology
from .errors import DocumentSyntaxError, DuplicateNode, InvalidModel, UnknownNodeReference, ValidationError
from .forecast import SystemModel
from .markov import validate_tpm

SCHEMA_VERSION = "1"


def _load(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentSyntaxError(exc.msg, f"line {exc.lineno} column {exc.colno}") from None


def _need(obj: Any, key: str, kind, where: str):
    if not isinstance(obj, dict):
        raise DocumentSyntaxError("expected an object", where)
    if key not in obj:
        raise DocumentSyntaxError(f"missing field {key!r}", where)
    value = obj[key]
    if kind is int:
        ok = isinstance(value, int) and not isinstance(value, bool)
    else:
        ok = isinstance(value, kind)
    if not ok:
        raise DocumentSyntaxError(f"field {key!r} has the wrong type", where)
    return value


def _node_ref(raw: Any, where: str) -> NodeId:
    level = _need(raw, "level", int, where)
    index = _need(raw, "index", int, where)
    if level < 1 or index < 0:
        raise DocumentSyntaxError(f"invalid node id (level {level}, index {index})", where)
    return NodeId(level, index)


def _matrix(raw: Any, where: str) -> list[list[float]]:
    if not isinstance(raw, list) or not all(isinstance(r, list) for r in raw):
        raise DocumentSyntaxError("expected a list of rows", where)
    for i, row in enumerate(raw):
        for j, v in enumerate(row):
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise DocumentSyntaxError(f"non-numeric entry at row {i} column {j}", where)
    return [[float(v) for v in row] for row in raw]


def model_from_dict(doc: Any) -> SystemModel:
    version = _need(doc, "schema_version", str, "$")
    if version != SCHEMA_VERSION:
        raise DocumentSyntaxError(f"unsupported schema_version {version!r}", "$.schema_version")

    nodes: dict[NodeId, int] = {}
    names: dict[NodeId, str] = {}
    for k, entry in enumerate(_need(doc, "nodes", list, "$")):
        where = f"$.nodes[{k}]"
        node = _node_ref(_need(entry, "id", dict, where), f"{where}.id")
        states = _need(entry, "states", int, where)
        if node in nodes:
            raise DuplicateNode(f"node {node} declared twice", where)
        if states < 2:
            raise InvalidModel(f"node {node} needs at least 2 states", where)
        nodes[node] = states
        if entry.get("name") is not None:
            if not isinstance(entry["name"], str):
                raise DocumentSyntaxError("field 'name' must be a string", where)
            if entry["name"] in names.values():
                raise DuplicateNode(f"node name {entry['name']!r} used twice", where)
            names[node] = entry["name"]

    def known(node: NodeId, where: str) -> NodeId:
        if node not in nodes:
            raise UnknownNodeReference(f"node {node} is not declared in nodes", where)
        return node

    edges: dict[NodeId, list[NodeId]] = {}
    for k, entry in enumerate(_need(doc, "edges", list, "$")):
        where = f"$.edges[{k}]"
        child = known(_node_ref(_need(entry, "child", dict, where), f"{where}.child"), f"{where}.child")
        if child in edges:
            raise DuplicateNode(f"edges for {child} given twice", where)
        edges[child] = [
            known(_node_ref(p, f"{where}.parents[{j}]"), f"{where}.parents[{j}]")
            for j, p in enumerate(_need(entry, "parents", list, where))
        ]
    try:
        topology = validate_topology(nodes, edges)
    except ValidationError as exc:
        raise _relocated(exc, "$.edges") from None

    cpts = {}
    for k, entry in enumerate(_need(doc, "cpts", list, "$")):
        where = f"$.cpts[{k}]"
        node = known(_node_ref(_need(entry, "node", dict, where), f"{where}.node"), f"{where}.node")
        if node in cpts:
            raise DuplicateNode(f"CPT for {node} given twice", where)
        parents = topology.parents.get(node)
        if not parents:
            raise InvalidModel(f"node {node} has no parents and takes no CPT", where)
        rows = _matrix(_need(entry, "rows", list, where), f"{where}.rows")
        cpts[node] = make_cpt(
            nodes[node], parents, [nodes[p] for p in parents], rows, where=f"{where} (node {node})"
        )

    tpms = {}
    for k, entry in enumerate(_need(doc, "tpms", list, "$")):
        where = f"$.tpms[{k}]"
        node = known(_node_ref(_need(entry, "node", dict, where), f"{where}.node"), f"{where}.node")
        if node in tpms:
            raise DuplicateNode(f"transition matrix for {node} given twice", where)
        matrix = _matrix(_need(entry, "matrix", list, where), f"{where}.matrix")
        tpms[node] = validate_tpm(matrix, where=f"{where} (node {node})")

    functional = _need(doc, "functional_states", list, "$")
    if not functional:
        raise InvalidModel("functional_states must not be empty", "$.functional_states")
    for j, s in enumerate(functional):
        if isinstance(s, bool) or not isinstance(s, int):
            raise DocumentSyntaxError("functional states must be integers", f"$.functional_states[{j}]")

    try:
        return SystemModel(topology, cpts, tpms, frozenset(functional), names)
    except ValidationError as exc:
        raise _relocated(exc, "$") from None


def _relocated(exc: ValidationError, where: str) -> ValidationError:
    if exc.location is None:
        exc.location = where
        exc.args = (f"{where}: {exc}",)
    return exc


def parse_model(text: str) -> SystemModel:
    return model_from_dict(_load(text))


def _ref(node: NodeId) -> dict[str, int]:
    return {"level": node.level, "index": node.index}


def model_to_dict(model: SystemModel) -> dict:
    top = model.topology
    if not model.functional_states:
        raise InvalidModel("functional_states must not be empty")
    nodes = []
    for n in sorted(top.nodes):
        entry: dict[str, Any] = {"id": _ref(n)}
        if n in model.names:
            entry["name"] = model.names[n]
        entry["states"] = top.nodes[n]
        nodes.append(entry)
    return {
        "schema_version": SCHEMA_VERSION,
        "nodes": nodes,
        "edges": [
            {"child": _ref(c), "parents": [_ref(p) for p in top.parents[c]]} for c in sorted(top.parents)
        ],
        "cpts": [{"node": _ref(n), "rows": model.cpts[n].rows.tolist()} for n in sorted(model.cpts)],
        "tpms": [{"node": _ref(n), "matrix": model.tpms[n].probs.tolist()} for n in sorted(model.tpms)],
        "functional_states": sorted(model.functional_states),
    }


_NUMERIC_LIST = re.compile(r"\[\s*(-?[0-9][-+0-9.eE]*(?:,\s*-?[0-9][-+0-9.eE]*)*)\s*\]")
_ID_OBJECT = re.compile(r'\{\s*"level": (\d+),\s*"index": (\d+)\s*\}')


def serialize_model(model: SystemModel) -> str:
    """Canonical JSON: nodes sorted by id, one matrix row per line, repr-exact floats."""
    text = json.dumps(model_to_dict(model), indent=2)
    text = _NUMERIC_LIST.sub(lambda m: "[" + ", ".join(v.strip() for v in m.group(1).split(",")) + "]", text)
    text = _ID_OBJECT.sub(lambda m: f'{{"level": {m.group(1)}, "index": {m.group(2)}}}', text)
    return text + "\n"


def parse_observation(text: str, model: SystemModel) -> tuple[dict[NodeId, int], int]:
    """Read an observation file into a complete health vector and its step."""
    doc = _load(text)
    if not isinstance(doc, dict):
        raise DocumentSyntaxError("observation must be a JSON object", "$")
    observed_at = doc.get("observed_at", 0)
    if isinstance(observed_at, bool) or not isinstance(observed_at, int) or observed_at < 0:
        raise DocumentSyntaxError("observed_at must be a non-negative integer", "$.observed_at")
    h: dict[NodeId, int] = {}
    for key, state in doc.items():
        if key == "observed_at":
            continue
        node = model.resolve(key)
        if node in h:
            raise DuplicateNode(f"component {node} observed twice", f"$.{key}")
        if isinstance(state, bool) or not isinstance(state, int):
            raise DocumentSyntaxError("component state must be an integer", f"$.{key}")
        h[node] = state
    return model.check_health(h), observed_at


def serialize_observation(h: dict[NodeId, int], observed_at: int = 0) -> str:
    doc: dict[str, int] = {"observed_at": observed_at}
    doc.update({str(n): int(s) for n, s in sorted(h.items())})
    return json.dumps(doc) + "\n"
