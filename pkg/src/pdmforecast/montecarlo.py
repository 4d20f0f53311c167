"""Seeded Monte Carlo simulation of component degradation.

Run ``k`` draws all of its randomness from its own generator, seeded from
``SeedSequence(seed, spawn_key=(k,))``.  Results therefore do not depend on how
runs are batched or ordered.  Next states are drawn by inverse-CDF lookup in
cumulative TPM rows.

A run's *realization* at step ``n`` is the system reliability conditional on
the sampled component states (``mode="conditional"``).  With
``mode="sampled"`` a 0/1 system state is drawn from that conditional instead.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .bayes import NodeId
from .errors import LengthMismatch, MissingComponent
from .forecast import HealthVector, SystemModel, point_mass_reliability
from .markov import TransitionMatrix, check_state

MODES = ("conditional", "sampled")
_BATCH = 4096


def run_rng(seed: int, run: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(run,)))


def _cumulative(tpm: TransitionMatrix) -> np.ndarray:
    cum = np.cumsum(tpm.probs, axis=1)
    # close each row at its last reachable state so rounding in the running
    # sum can neither fall off the end nor reach a trailing zero column
    for i, row in enumerate(tpm.probs):
        cum[i, np.flatnonzero(row)[-1] :] = np.inf
    return cum


def _advance(cum: np.ndarray, states: np.ndarray, u: np.ndarray) -> np.ndarray:
    # first j with u < cum[state, j]; empty intervals (zero probability) are skipped
    return (u[..., None] >= cum[states]).sum(axis=-1)


def sample_trajectory(tpm: TransitionMatrix, start: int, horizon: int, rng: np.random.Generator) -> np.ndarray:
    """States at steps ``0..horizon`` of one component, starting from ``start``."""
    cum = _cumulative(tpm)
    state = check_state(start, tpm.states)
    out = np.empty(horizon + 1, dtype=np.int64)
    out[0] = state
    u = rng.random(horizon)
    for n in range(horizon):
        state = int(_advance(cum, np.array(state), u[n]))
        out[n + 1] = state
    return out


def realization_curve(model: SystemModel, trajectories: Mapping[NodeId, np.ndarray]) -> np.ndarray:
    """Conditional system reliability at each step of one set of trajectories."""
    missing = [c for c in model.leaves if c not in trajectories]
    if missing:
        raise MissingComponent("no trajectory for " + ", ".join(map(str, missing)))
    lengths = {len(trajectories[c]) for c in model.leaves}
    if len(lengths) != 1:
        raise LengthMismatch(f"trajectories have differing lengths {sorted(lengths)}")
    steps = lengths.pop()
    cache: dict[tuple[int, ...], float] = {}
    out = np.empty(steps)
    for n in range(steps):
        key = tuple(int(trajectories[c][n]) for c in model.leaves)
        if key not in cache:
            cache[key] = point_mass_reliability(model, dict(zip(model.leaves, key)))
        out[n] = cache[key]
    return out


@dataclass(frozen=True)
class SimulationResult:
    runs: int
    per_run_curves: np.ndarray  # shape (runs, horizon + 1)
    mean_curve: np.ndarray
    seed: int
    mode: str = "conditional"

    @property
    def horizon(self) -> int:
        return self.per_run_curves.shape[1] - 1

    def variance_curve(self) -> np.ndarray:
        """Across-run (population) variance of the realizations at each step."""
        return self.per_run_curves.var(axis=0)


def simulate(
    model: SystemModel,
    h: HealthVector,
    horizon: int,
    runs: int,
    seed: int,
    mode: str = "conditional",
) -> SimulationResult:
    if runs < 1:
        raise ValueError(f"runs must be >= 1, got {runs}")
    if horizon < 0:
        raise ValueError(f"horizon must be non-negative, got {horizon}")
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    h = model.check_health(h)
    leaves = model.leaves
    cards = [model.topology.nodes[c] for c in leaves]
    cums = [_cumulative(model.tpms[c]) for c in leaves]
    n_leaf_u = len(leaves) * horizon
    width = n_leaf_u + (horizon + 1 if mode == "sampled" else 0)

    codes = np.empty((runs, horizon + 1), dtype=np.int64)
    sys_u = np.empty((runs, horizon + 1)) if mode == "sampled" else None
    for lo in range(0, runs, _BATCH):
        hi = min(lo + _BATCH, runs)
        u = np.empty((hi - lo, width))
        for k in range(lo, hi):
            u[k - lo] = run_rng(seed, k).random(width)
        leaf_u = u[:, :n_leaf_u].reshape(hi - lo, len(leaves), horizon)
        per_leaf = []
        for j, c in enumerate(leaves):
            st = np.empty((hi - lo, horizon + 1), dtype=np.int64)
            st[:, 0] = h[c]
            for n in range(horizon):
                st[:, n + 1] = _advance(cums[j], st[:, n], leaf_u[:, j, n])
            per_leaf.append(st)
        codes[lo:hi] = np.ravel_multi_index(tuple(per_leaf), cards)
        if sys_u is not None:
            sys_u[lo:hi] = u[:, n_leaf_u:]

    uniq, inverse = np.unique(codes, return_inverse=True)
    values = np.empty(uniq.size)
    for i, code in enumerate(uniq):
        combo = np.unravel_index(int(code), cards)
        values[i] = point_mass_reliability(model, {c: int(s) for c, s in zip(leaves, combo)})
    curves = values[inverse.reshape(codes.shape)]
    if sys_u is not None:
        curves = (sys_u < curves).astype(float)

    curves.setflags(write=False)
    mean = curves.mean(axis=0)
    mean.setflags(write=False)
    return SimulationResult(runs, curves, mean, seed, mode)
