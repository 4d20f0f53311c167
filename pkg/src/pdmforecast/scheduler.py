"""Maintenance decisions from reliability forecasts.

Maintenance is scheduled at the last step whose forecast still meets the
threshold before the first drop below it.  Repair targets are components
ranked by expected degradation at that step, normalized by each component's
failure-state index so components with different state counts compare fairly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .bayes import NodeId
from .errors import InvalidThreshold
from .forecast import ForecastCurve, HealthVector, SystemModel, forecast_curve
from .markov import expected_state, row_marginal

IMMEDIATE = "immediate"
NO_CROSSING = "no_crossing"


def _check_threshold(threshold: float) -> float:
    if not (isinstance(threshold, (int, float)) and 0.0 < threshold < 1.0):
        raise InvalidThreshold(f"threshold must lie strictly between 0 and 1, got {threshold!r}")
    return float(threshold)


def crossing_time(curve: ForecastCurve | Sequence[float], threshold: float) -> int | None:
    """Last step before the first down-crossing of ``threshold``.

    Returns ``None`` when the curve starts below the threshold or never drops
    below it within the horizon; :func:`advisory` tells the two apart.
    """
    threshold = _check_threshold(threshold)
    r = list(curve)
    if not r or r[0] < threshold:
        return None
    for n in range(len(r) - 1):
        if r[n + 1] < threshold:
            return n
    return None


def advisory(curve: ForecastCurve | Sequence[float], threshold: float) -> str | None:
    """``"immediate"`` if already below threshold, ``"no_crossing"`` if never, else None."""
    threshold = _check_threshold(threshold)
    r = list(curve)
    if r[0] < threshold:
        return IMMEDIATE
    if all(v >= threshold for v in r):
        return NO_CROSSING
    return None


def rank_components(model: SystemModel, h: HealthVector, t: int) -> list[tuple[NodeId, float]]:
    h = model.check_health(h)
    scores = []
    for c in model.leaves:
        tpm = model.tpms[c]
        scores.append((c, expected_state(row_marginal(tpm, h[c], t)) / tpm.failure_state))
    scores.sort(key=lambda item: (-item[1], item[0]))
    return scores


@dataclass(frozen=True)
class MaintenancePlan:
    maintenance_time: int | None
    threshold: float
    targets: list[tuple[NodeId, float]]
    based_on: dict[NodeId, int]
    observed_at: int = 0
    advisory: str | None = None
    scored_at: int = 0
    curve: ForecastCurve | None = field(default=None, repr=False, compare=False)

    @property
    def absolute_time(self) -> float:
        """Maintenance time on the global clock; ``inf`` if never needed.

        An immediate advisory maps to the step before the observation: the last
        acceptable moment has already passed.
        """
        if self.maintenance_time is not None:
            return self.observed_at + self.maintenance_time
        if self.advisory == IMMEDIATE:
            return self.observed_at - 1
        return math.inf

    def top(self, k: int) -> list[NodeId]:
        return [node for node, _ in self.targets[:k]]


def plan(
    model: SystemModel,
    h: HealthVector,
    threshold: float,
    horizon: int,
    observed_at: int = 0,
    curve: ForecastCurve | Sequence[float] | None = None,
) -> MaintenancePlan:
    """Schedule maintenance from ``h``.

    ``curve`` overrides the forecast (e.g. a curve computed elsewhere); targets
    are still scored from the model.
    """
    threshold = _check_threshold(threshold)
    h = model.check_health(h)
    if curve is None:
        curve = forecast_curve(model, h, horizon)
    elif not isinstance(curve, ForecastCurve):
        curve = ForecastCurve.from_values(curve)
    when = crossing_time(curve, threshold)
    note = advisory(curve, threshold)
    if when is not None:
        t = when
    elif note == IMMEDIATE:
        t = 0
    else:
        t = curve.horizon
    return MaintenancePlan(
        maintenance_time=when,
        threshold=threshold,
        targets=rank_components(model, h, t),
        based_on=dict(h),
        observed_at=observed_at,
        advisory=note,
        scored_at=t,
        curve=curve,
    )


@dataclass(frozen=True)
class Replan:
    plan: MaintenancePlan
    comparison: str  # "earlier" | "later" | "unchanged"
    entered: list[NodeId]
    left: list[NodeId]
    relative_time: int | None
    absolute_time: float
    previous_absolute_time: float


def replan(
    model: SystemModel,
    new_h: HealthVector,
    elapsed: int,
    previous: MaintenancePlan,
    horizon: int | None = None,
    top_k: int = 2,
    curve: ForecastCurve | Sequence[float] | None = None,
) -> Replan:
    """Recompute a plan after ``elapsed`` steps and compare it with ``previous``."""
    if elapsed < 0:
        raise ValueError(f"elapsed must be non-negative, got {elapsed}")
    if horizon is None:
        horizon = previous.curve.horizon if previous.curve is not None else 100
    new = plan(
        model,
        new_h,
        previous.threshold,
        horizon,
        observed_at=previous.observed_at + elapsed,
        curve=curve,
    )
    before, after = previous.absolute_time, new.absolute_time
    if after < before:
        comparison = "earlier"
    elif after > before:
        comparison = "later"
    else:
        comparison = "unchanged"
    old_top, new_top = previous.top(top_k), new.top(top_k)
    return Replan(
        plan=new,
        comparison=comparison,
        entered=[n for n in new_top if n not in old_top],
        left=[n for n in old_top if n not in new_top],
        relative_time=new.maintenance_time,
        absolute_time=after,
        previous_absolute_time=before,
    )
