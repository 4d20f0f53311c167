"""Brute-force reference computations.

These are deliberately naive and do not call into :mod:`pdmforecast.markov`'s
matrix powers, :func:`pdmforecast.bayes.kron_vec` or the forecaster's
propagation, so agreement with those fast paths is meaningful.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from .bayes import Cpt
from .errors import CardinalityMismatch, ModelTooLarge, TooLarge
from .forecast import HealthVector, SystemModel
from .markov import Distribution, TransitionMatrix

MAX_ASSIGNMENTS = 10**7
_CHUNK = 1 << 16


def enumeration_marginal(cpt: Cpt, parents) -> Distribution:
    """Child marginal by summing over every parent combination explicitly."""
    dists = [list(map(float, np.asarray(p, dtype=float))) for p in parents]
    if len(dists) != len(cpt.parent_cards):
        raise CardinalityMismatch(f"CPT expects {len(cpt.parent_cards)} parents, got {len(dists)}")
    for d, card in zip(dists, cpt.parent_cards):
        if len(d) != card:
            raise CardinalityMismatch(f"parent has {len(d)} states, CPT expects {card}")

    out = [0.0] * cpt.child_states
    for combo in itertools.product(*(range(len(d)) for d in dists)):
        row = 0
        for state, card in zip(combo, cpt.parent_cards):
            row = row * card + state
        weight = 1.0
        for d, state in zip(dists, combo):
            weight *= d[state]
        for x in range(cpt.child_states):
            out[x] += float(cpt.rows[row][x]) * weight
    return Distribution(out)


def path_power(tpm: TransitionMatrix, n: int) -> np.ndarray:
    """n-step matrix as a sum over every explicit length-``n`` state path."""
    k = tpm.states
    if k > 4 or n > 5:
        raise TooLarge(f"path enumeration limited to 4 states and 5 steps (got {k}, {n})")
    p = tpm.probs.tolist()
    out = np.zeros((k, k))
    for i in range(k):
        for path in itertools.product(range(k), repeat=n):
            prob, prev = 1.0, i
            for s in path:
                prob *= p[prev][s]
                prev = s
            out[i, prev] += prob
    return out


def _naive_row(tpm: TransitionMatrix, start: int, n: int) -> list[float]:
    p = tpm.probs.tolist()
    k = len(p)
    row = [1.0 if j == start else 0.0 for j in range(k)]
    for _ in range(n):
        row = [sum(row[i] * p[i][j] for i in range(k)) for j in range(k)]
    return row


def brute_force_forecast(model: SystemModel, h: HealthVector, n: int) -> float:
    """Reliability by summing the full joint over every assignment of every node."""
    top = model.topology
    nodes = sorted(top.nodes)
    cards = [top.nodes[v] for v in nodes]
    total = math.prod(cards)
    if total > MAX_ASSIGNMENTS:
        raise ModelTooLarge(f"{total} joint assignments exceed the enumeration limit {MAX_ASSIGNMENTS}")
    h = model.check_health(h)
    pos = {v: i for i, v in enumerate(nodes)}

    factors = []
    for v in nodes:
        pa = top.parents.get(v)
        if pa:
            cpt = model.cpts[v]
            factors.append((pos[v], [pos[p] for p in pa], [top.nodes[p] for p in pa], np.asarray(cpt.rows)))
        else:
            factors.append((pos[v], None, None, np.array(_naive_row(model.tpms[v], h[v], n))))
    root = pos[top.root]
    functional = np.array(sorted(model.functional_states))

    acc = 0.0
    for lo in range(0, total, _CHUNK):
        flat = np.arange(lo, min(lo + _CHUNK, total))
        # decode flat index -> per-node states, first node most significant
        states = [None] * len(nodes)
        rem = flat
        for i in range(len(nodes) - 1, -1, -1):
            states[i] = rem % cards[i]
            rem = rem // cards[i]
        keep = np.isin(states[root], functional)
        if not keep.any():
            continue
        prob = np.ones(flat.size)
        for own, pa_pos, pa_cards, table in factors:
            if pa_pos is None:
                prob *= table[states[own]]
            else:
                row = np.zeros(flat.size, dtype=np.int64)
                for pp, pc in zip(pa_pos, pa_cards):
                    row = row * pc + states[pp]
                prob *= table[row, states[own]]
        acc += float(prob[keep].sum())
    return acc
