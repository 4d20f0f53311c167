"""Ready-made models used by the tests; the files under ``models/`` are serialized from them.

``series_pair`` is a two-component system small enough to check by hand;
``parallel_pair`` uses the same components with parallel logic.
``four_component`` has the two-subsystem shape of a typical hierarchical
plant: two subsystems of two components each, with 7/6-state components.
Its parameters are illustrative, chosen to be coherent (more degradation
never helps) and stochastically monotone.
"""

from __future__ import annotations

import itertools

import numpy as np

from .bayes import NodeId, make_cpt, validate_topology
from .forecast import SystemModel
from .markov import validate_tpm

SYSTEM = NodeId(1, 0)


def series_pair() -> SystemModel:
    """System works iff component A is in state 0 or 1 and component B is in state 0."""
    a, b = NodeId(2, 0), NodeId(2, 1)
    top = validate_topology({SYSTEM: 2, a: 3, b: 2}, {SYSTEM: [a, b]})
    rows = []
    for sa, sb in itertools.product(range(3), range(2)):
        up = sa <= 1 and sb == 0
        rows.append([1.0, 0.0] if up else [0.0, 1.0])
    return SystemModel(
        top,
        {SYSTEM: make_cpt(2, [a, b], [3, 2], rows)},
        {
            a: validate_tpm([[0.8, 0.15, 0.05], [0.0, 0.9, 0.1], [0.0, 0.0, 1.0]]),
            b: validate_tpm([[0.95, 0.05], [0.0, 1.0]]),
        },
        frozenset({0}),
        {SYSTEM: "system", a: "A", b: "B"},
    )


def parallel_pair() -> SystemModel:
    """Same components as :func:`series_pair`; the system works iff A or B is in state 0."""
    series = series_pair()
    a, b = series.leaves
    rows = []
    for sa, sb in itertools.product(range(3), range(2)):
        up = sa == 0 or sb == 0
        rows.append([1.0, 0.0] if up else [0.0, 1.0])
    return SystemModel(
        series.topology,
        {SYSTEM: make_cpt(2, [a, b], [3, 2], rows)},
        series.tpms,
        frozenset({0}),
        series.names,
    )


def banded_tpm(states: int, jumps: list[float]) -> np.ndarray:
    """Degradation matrix where ``jumps[k]`` is the chance of moving ``k`` states worse.

    Probability that would overshoot the failure state is lumped onto it.
    """
    m = np.zeros((states, states))
    for i in range(states):
        for k, p in enumerate(jumps):
            m[i, min(i + k, states - 1)] += p
    m[-1] = 0.0
    m[-1, -1] = 1.0
    return m


def worst_of_cpt(cards: list[int], child_states: int, slip: float) -> np.ndarray:
    """Child takes the worst parent state, one state worse with probability ``slip``."""
    rows = []
    for combo in itertools.product(*(range(c) for c in cards)):
        worst = min(max(combo), child_states - 1)
        row = np.zeros(child_states)
        row[worst] += 1.0 - slip
        row[min(worst + 1, child_states - 1)] += slip
        rows.append(row)
    return np.array(rows)


def four_component() -> SystemModel:
    c1, c2, c3, c4 = (NodeId(3, i) for i in range(4))
    s1, s2 = NodeId(2, 0), NodeId(2, 1)
    cards = {SYSTEM: 2, s1: 7, s2: 6, c1: 7, c2: 6, c3: 7, c4: 6}
    top = validate_topology(cards, {SYSTEM: [s1, s2], s1: [c1, c2], s2: [c3, c4]})

    up1 = [0.999, 0.998, 0.997, 0.996, 0.995, 0.692, 0.0]
    up2 = [0.999, 0.998, 0.997, 0.996, 0.727, 0.0]
    sys_rows = [[u * v, 1.0 - u * v] for u, v in itertools.product(up1, up2)]

    return SystemModel(
        top,
        {
            SYSTEM: make_cpt(2, [s1, s2], [7, 6], sys_rows),
            s1: make_cpt(7, [c1, c2], [7, 6], worst_of_cpt([7, 6], 7, 0.1)),
            s2: make_cpt(6, [c3, c4], [7, 6], worst_of_cpt([7, 6], 6, 0.1)),
        },
        {
            c1: validate_tpm(banded_tpm(7, [0.87, 0.104, 0.026])),
            c2: validate_tpm(banded_tpm(6, [0.93, 0.055, 0.015])),
            c3: validate_tpm(banded_tpm(7, [0.93, 0.065, 0.005])),
            c4: validate_tpm(banded_tpm(6, [0.95, 0.042, 0.008])),
        },
        frozenset({0}),
        {
            SYSTEM: "system",
            s1: "subsystem1",
            s2: "subsystem2",
            c1: "component1",
            c2: "component2",
            c3: "component3",
            c4: "component4",
        },
    )


FIXTURES = {"series_pair": series_pair, "parallel_pair": parallel_pair, "four_component": four_component}
