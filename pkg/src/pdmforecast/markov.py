"""Discrete-time Markov chains for component degradation.

A component's health is an integer state ``0..f`` where 0 is as-new and ``f``
is failure.  Degradation-only chains have upper-triangular one-step matrices
with an absorbing failure row, so the n-step matrix stays in the same class.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .errors import (
    FailureNotAbsorbing,
    InvalidDistribution,
    LowerTriangleNonZero,
    NegativeEntry,
    NonSquare,
    RowSumViolation,
    StateOutOfRange,
)

ROW_SUM_TOL = 1e-9


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Distribution:
    """Probability vector over one node's states."""

    probs: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float)
        if p.ndim != 1 or p.size == 0:
            raise InvalidDistribution(f"expected a non-empty vector, got shape {p.shape}")
        if not np.all(np.isfinite(p)) or np.any(p < -ROW_SUM_TOL) or np.any(p > 1.0 + ROW_SUM_TOL):
            raise InvalidDistribution(f"entries must lie in [0, 1]: {p.tolist()}")
        # rounding residue from matrix products, e.g. 1.0000000000000002
        p = np.clip(p, 0.0, 1.0)
        total = float(p.sum())
        if abs(total - 1.0) > ROW_SUM_TOL:
            raise InvalidDistribution(f"probabilities sum to {total!r}, expected 1")
        object.__setattr__(self, "probs", _frozen(p))

    @classmethod
    def point_mass(cls, states: int, at: int) -> "Distribution":
        if not 0 <= at < states:
            raise StateOutOfRange(at, states)
        p = np.zeros(states)
        p[at] = 1.0
        return cls(p)

    def __len__(self) -> int:
        return self.probs.size

    def __getitem__(self, k):
        return self.probs[k]

    def __iter__(self) -> Iterator[float]:
        return iter(self.probs.tolist())

    def __array__(self, dtype=None, copy=None):
        return self.probs if dtype is None else self.probs.astype(dtype)

    def __eq__(self, other):
        if not isinstance(other, Distribution):
            return NotImplemented
        return np.array_equal(self.probs, other.probs)

    __hash__ = None

    def __repr__(self):
        return f"Distribution({self.probs.tolist()})"


@dataclass(frozen=True, eq=False)
class TransitionMatrix:
    """Validated one-step degradation matrix. Build with :func:`validate_tpm`."""

    probs: np.ndarray

    @property
    def states(self) -> int:
        return self.probs.shape[0]

    @property
    def failure_state(self) -> int:
        return self.states - 1

    def __array__(self, dtype=None, copy=None):
        return self.probs if dtype is None else self.probs.astype(dtype)

    def __eq__(self, other):
        if not isinstance(other, TransitionMatrix):
            return NotImplemented
        return np.array_equal(self.probs, other.probs)

    __hash__ = None

    def __repr__(self):
        return f"TransitionMatrix({self.probs.tolist()})"


def validate_tpm(raw: Sequence[Sequence[float]] | np.ndarray, where: str | None = None) -> TransitionMatrix:
    """Check a raw matrix and wrap it as a :class:`TransitionMatrix`.

    Nothing is renormalized: rows must already sum to one within
    ``ROW_SUM_TOL``.  ``where`` is prepended to error messages.
    """
    try:
        m = np.array(raw, dtype=float)
    except (TypeError, ValueError) as exc:
        raise NonSquare(f"not a numeric matrix ({exc})", where) from None
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NonSquare(f"matrix must be square, got shape {m.shape}", where)
    n = m.shape[0]
    if n < 2:
        raise NonSquare("matrix needs at least 2 states", where)
    bad = np.argwhere(~np.isfinite(m) | (m < 0.0) | (m > 1.0))
    if bad.size:
        i, j = (int(v) for v in bad[0])
        raise NegativeEntry(i, j, float(m[i, j]), where)
    lower = np.argwhere(np.tril(m, k=-1) != 0.0)
    if lower.size:
        i, j = (int(v) for v in lower[0])
        raise LowerTriangleNonZero(i, j, float(m[i, j]), where)
    if m[-1, -1] != 1.0:
        raise FailureNotAbsorbing(
            f"failure state {n - 1} must be absorbing (last row must be a unit vector)",
            where,
        )
    sums = m.sum(axis=1)
    for i, total in enumerate(sums):
        if abs(total - 1.0) > ROW_SUM_TOL:
            raise RowSumViolation(i, float(total), where)
    return TransitionMatrix(_frozen(m))


def n_step(tpm: TransitionMatrix, n: int) -> np.ndarray:
    """Return the n-step transition matrix ``P**n`` (identity for ``n == 0``)."""
    if n < 0:
        raise ValueError(f"step count must be non-negative, got {n}")
    return _frozen(np.linalg.matrix_power(tpm.probs, int(n)))


def check_state(state: int, states: int, where: str | None = None) -> int:
    if isinstance(state, bool) or int(state) != state or not 0 <= state < states:
        raise StateOutOfRange(state, states, where)
    return int(state)


def row_marginal(tpm: TransitionMatrix, current: int, n: int) -> Distribution:
    """Distribution of the state ``n`` steps after being observed in ``current``."""
    current = check_state(current, tpm.states)
    return Distribution(n_step(tpm, n)[current])


def expected_state(d: Distribution | Sequence[float]) -> float:
    p = np.asarray(d, dtype=float)
    return float(np.arange(p.size) @ p)
