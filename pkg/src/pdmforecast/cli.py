"""Command-line interface.

Exit codes: 0 success, 1 I/O error, 2 invalid input, 3 no answer exists for a
valid input (e.g. conditioning on zero-probability evidence).
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from pathlib import Path
from typing import Sequence

from . import model_io
from .bayes import NodeId, posterior
from .errors import ComputationError, DocumentSyntaxError, PdmError, ValidationError
from .forecast import ForecastCurve, SystemModel, forecast_curve
from .markov import Distribution, n_step
from .montecarlo import MODES, simulate
from .oracle import brute_force_forecast
from .scheduler import IMMEDIATE, NO_CROSSING, MaintenancePlan, plan, replan
from .svgplot import line_chart

EXIT_IO, EXIT_INVALID, EXIT_COMPUTE = 1, 2, 3


def _num(x: float) -> str:
    return repr(float(x))


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _load_model(path: str) -> SystemModel:
    return model_io.parse_model(_read(path))


def _load_observation(path: str, model: SystemModel):
    return model_io.parse_observation(_read(path), model)


def _read_curve(path: str) -> ForecastCurve:
    rows = list(csv.DictReader(io.StringIO(_read(path))))
    if not rows or "reliability" not in rows[0]:
        raise DocumentSyntaxError("curve CSV needs a 'reliability' column", path)
    try:
        return ForecastCurve.from_values(float(r["reliability"]) for r in rows)
    except ValueError as exc:
        raise DocumentSyntaxError(str(exc), path) from None


def _csv_text(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _emit(args, csv_text: str | None, svg_text: str | None) -> None:
    """Write CSV/SVG according to ``--format`` and ``--out``."""
    fmt = getattr(args, "format", "csv")
    out = Path(args.out) if args.out else None
    if fmt in ("svg", "both") and out is None:
        raise ValidationError("--out is required when --format includes svg")
    if fmt == "csv":
        if out is None:
            sys.stdout.write(csv_text)
        else:
            out.write_text(csv_text, encoding="utf-8")
    elif fmt == "svg":
        out.write_text(svg_text, encoding="utf-8")
    else:
        out.with_suffix(".csv").write_text(csv_text, encoding="utf-8")
        out.with_suffix(".svg").write_text(svg_text, encoding="utf-8")


def cmd_validate(args) -> int:
    model = _load_model(args.model)
    top = model.topology
    print(
        f"model OK: {top.levels} levels, {len(top.nodes)} nodes, "
        f"{len(model.leaves)} components, functional system states {sorted(model.functional_states)}"
    )
    for node in sorted(top.nodes):
        role = "component" if node in model.tpms else ("system" if node == top.root else "subsystem")
        parents = top.parents.get(node)
        extra = f" <- {', '.join(map(str, parents))}" if parents else ""
        print(f"  {node} {model.label(node)}: {role}, {top.nodes[node]} states{extra}")
    return 0


def cmd_forecast(args) -> int:
    model = _load_model(args.model)
    h, _ = _load_observation(args.observation, model)
    curve = forecast_curve(model, h, args.horizon, keep_marginals=args.emit_marginals)
    header = ["step", "reliability"]
    order = sorted(model.topology.nodes)
    if args.emit_marginals:
        header += [f"{n}[{k}]" for n in order for k in range(model.topology.nodes[n])]
    rows = []
    for step, r in enumerate(curve):
        row = [str(step), _num(r)]
        if args.emit_marginals:
            m = curve.node_marginals[step]
            row += [_num(p) for n in order for p in m[n]]
        rows.append(row)
    svg = None
    if args.format != "csv":
        svg = line_chart(range(args.horizon + 1), list(curve), threshold=args.threshold)
    _emit(args, _csv_text(header, rows), svg)

    if args.oracle:
        worst = max(abs(brute_force_forecast(model, h, n) - curve[n]) for n in range(args.horizon + 1))
        print(f"oracle cross-check: max |forecast - brute force| = {worst:.3e}", file=sys.stderr)
    return 0


def cmd_simulate(args) -> int:
    model = _load_model(args.model)
    h, _ = _load_observation(args.observation, model)
    analytic = forecast_curve(model, h, args.horizon)
    result = simulate(model, h, args.horizon, args.runs, args.seed, mode=args.mode)
    k = min(args.runs, args.max_run_columns)
    header = ["step", "analytic", "empirical_mean"] + [f"run_{i + 1}" for i in range(k)]
    rows = []
    for step in range(args.horizon + 1):
        rows.append(
            [str(step), _num(analytic[step]), _num(result.mean_curve[step])]
            + [_num(result.per_run_curves[i, step]) for i in range(k)]
        )
    svg = None
    if args.format != "csv":
        svg = line_chart(
            range(args.horizon + 1),
            list(analytic),
            background=[result.per_run_curves[i].tolist() for i in range(k)],
            threshold=args.threshold,
            title=f"Monte Carlo realizations ({args.runs} runs, seed {args.seed})",
            bold_label="analytic forecast",
        )
    _emit(args, _csv_text(header, rows), svg)
    return 0


def _describe(p: MaintenancePlan, model: SystemModel) -> list[str]:
    lines = [f"threshold: {p.threshold:g}", f"observed at step: {p.observed_at}"]
    if p.maintenance_time is not None:
        lines.append(
            f"maintenance: schedule after step {p.maintenance_time} "
            f"(reliability {p.curve[p.maintenance_time]:.4f} >= {p.threshold:g})"
        )
    elif p.advisory == IMMEDIATE:
        lines.append(f"maintenance: immediate (current reliability {p.curve[0]:.4f} < {p.threshold:g})")
    elif p.advisory == NO_CROSSING:
        lines.append(f"maintenance: no crossing within horizon {p.curve.horizon}")
    lines.append(f"targets (expected degradation at step {p.scored_at}):")
    for rank, (node, score) in enumerate(p.targets, 1):
        lines.append(f"  {rank}. {model.label(node)} ({node}): {score:.4f}")
    return lines


def _targets_csv(p: MaintenancePlan, model: SystemModel) -> str:
    rows = [[str(i), str(n), model.label(n), _num(s)] for i, (n, s) in enumerate(p.targets, 1)]
    return _csv_text(["rank", "node", "name", "score"], rows)


def cmd_schedule(args) -> int:
    model = _load_model(args.model)
    h, observed_at = _load_observation(args.observation, model)
    curve = _read_curve(args.curve) if args.curve else None
    p = plan(model, h, args.threshold, args.horizon, observed_at=observed_at, curve=curve)
    print("\n".join(_describe(p, model)))
    if args.out:
        Path(args.out).write_text(_targets_csv(p, model), encoding="utf-8")
    return 0


def cmd_replan(args) -> int:
    model = _load_model(args.model)
    old_h, old_at = _load_observation(args.previous, model)
    new_h, new_at = _load_observation(args.observation, model)
    elapsed = args.elapsed if args.elapsed is not None else new_at - old_at
    if elapsed < 0:
        raise ValidationError(f"new observation precedes the previous one (elapsed {elapsed})")
    prev_curve = _read_curve(args.previous_curve) if args.previous_curve else None
    curve = _read_curve(args.curve) if args.curve else None
    previous = plan(model, old_h, args.threshold, args.horizon, observed_at=old_at, curve=prev_curve)
    result = replan(model, new_h, elapsed, previous, horizon=args.horizon, top_k=args.top_k, curve=curve)

    def fmt(t: float) -> str:
        return "never" if t == float("inf") else str(int(t))

    print("previous plan:")
    print("\n".join("  " + line for line in _describe(previous, model)))
    print("updated plan:")
    print("\n".join("  " + line for line in _describe(result.plan, model)))
    rel = "none" if result.relative_time is None else str(result.relative_time)
    print(
        f"maintenance time: relative {rel}, absolute {fmt(result.absolute_time)} "
        f"(previously {fmt(result.previous_absolute_time)}) -> {result.comparison}"
    )
    top = ", ".join(model.label(n) for n in result.plan.top(args.top_k))
    print(f"top-{args.top_k} targets: {top}")
    print("entered: " + (", ".join(model.label(n) for n in result.entered) or "none"))
    print("left: " + (", ".join(model.label(n) for n in result.left) or "none"))
    if args.out:
        Path(args.out).write_text(_targets_csv(result.plan, model), encoding="utf-8")
    return 0


def _parse_evidence(text: str, model: SystemModel) -> tuple[NodeId, int]:
    node, sep, state = text.rpartition("=")
    if not sep:
        raise ValidationError(f"--evidence must look like NODE=STATE, got {text!r}")
    try:
        return model.resolve(node), int(state)
    except ValueError:
        raise ValidationError(f"evidence state must be an integer, got {state!r}") from None


def cmd_infer(args) -> int:
    model = _load_model(args.model)
    h, _ = _load_observation(args.observation, model)
    evidence = _parse_evidence(args.evidence, model)
    query = model.resolve(args.query)
    leaf = {c: Distribution(n_step(model.tpms[c], args.horizon)[h[c]]) for c in model.leaves}
    post = posterior(model.topology, model.cpts, leaf, evidence, query)
    print(f"# P({model.label(query)} | {model.label(evidence[0])} = {evidence[1]}) at step {args.horizon}")
    text = _csv_text(["state", "probability"], [[str(k), _num(p)] for k, p in enumerate(post)])
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pdmforecast",
        description="Reliability forecasting and predictive-maintenance scheduling for hierarchical systems.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text, observation=True):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--model", required=True, help="model JSON file")
        if observation:
            p.add_argument("--observation", required=True, help="observation JSON file")
        p.set_defaults(func=func)
        return p

    def outputs(p, formats=True):
        p.add_argument("--out", help="output path (default: CSV on stdout)")
        if formats:
            p.add_argument("--format", choices=["csv", "svg", "both"], default="csv")

    add("validate", cmd_validate, "check a model file", observation=False)

    p = add("forecast", cmd_forecast, "forecast system reliability")
    p.add_argument("--horizon", type=int, default=100)
    p.add_argument("--threshold", type=float, help="draw a threshold rule on the SVG")
    p.add_argument("--emit-marginals", action="store_true", help="add per-node marginal columns")
    p.add_argument("--oracle", action="store_true", help="cross-check against brute-force enumeration")
    outputs(p)

    p = add("simulate", cmd_simulate, "Monte Carlo realizations vs the analytic forecast")
    p.add_argument("--horizon", type=int, default=100)
    p.add_argument("--runs", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", choices=MODES, default="conditional")
    p.add_argument("--max-run-columns", type=int, default=50)
    p.add_argument("--threshold", type=float)
    outputs(p)

    p = add("schedule", cmd_schedule, "plan maintenance from an observation")
    p.add_argument("--threshold", type=float, required=True)
    p.add_argument("--horizon", type=int, default=100)
    p.add_argument("--curve", help="use this forecast CSV instead of computing one")
    outputs(p, formats=False)

    p = add("replan", cmd_replan, "update a plan after a new observation")
    p.add_argument("--previous", required=True, help="observation the previous plan was based on")
    p.add_argument("--elapsed", type=int, help="steps since the previous observation")
    p.add_argument("--threshold", type=float, required=True)
    p.add_argument("--horizon", type=int, default=100)
    p.add_argument("--top-k", type=int, default=2)
    p.add_argument("--curve", help="forecast CSV for the new observation")
    p.add_argument("--previous-curve", help="forecast CSV for the previous observation")
    outputs(p, formats=False)

    p = add("infer", cmd_infer, "posterior of one node given the state of another")
    p.add_argument("--evidence", required=True, help="NODE=STATE, node by id (2.0) or name")
    p.add_argument("--query", required=True, help="node id or name")
    p.add_argument("--horizon", type=int, default=0, help="forecast step for the component priors")
    outputs(p, formats=False)
    return parser


_NON_NEGATIVE = ("horizon", "elapsed", "seed")
_POSITIVE = ("runs", "max_run_columns", "top_k")


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for name in _NON_NEGATIVE:
        if getattr(args, name, None) is not None and getattr(args, name) < 0:
            parser.error(f"--{name.replace('_', '-')} must be non-negative")
    for name in _POSITIVE:
        if getattr(args, name, None) is not None and getattr(args, name) < 1:
            parser.error(f"--{name.replace('_', '-')} must be at least 1")
    try:
        return args.func(args)
    except ComputationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    except PdmError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
