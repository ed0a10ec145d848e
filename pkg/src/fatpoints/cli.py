"""Command-line interface."""
from __future__ import annotations

import dataclasses
import json as jsonlib
import sys

import click

from . import __version__
from .cache import NullCache, ResultCache, record_key
from .diagrams import ReductionTrace, triangle
from .engine import EngineConfig, classify
from .fplinalg import PrimeFieldConfig, build_matrix, sample_points, task_rng
from .fplinalg import rank as matrix_rank
from .initial_cases import FamilySpec, run_initial_cases
from .ledger import run_ledger
from .systems import INCONCLUSIVE, LinearSystem, Verdict, edim, standard_form, vdim
from .textio import parse_diagram, parse_system


def _parse_mults(text: str) -> tuple[int, ...]:
    return parse_system(f"L(0;{text})").mults


def _verdict_dict(v: Verdict) -> dict:
    return {
        "kind": v.kind,
        "dim": v.dim,
        "axioms_used": list(v.axioms_used),
        "reason": v.reason,
        "steps": [dataclasses.asdict(s) for s in v.certificate],
    }


def _emit(ctx: click.Context, payload: dict, text: str) -> None:
    if ctx.obj["json"]:
        click.echo(jsonlib.dumps(payload, sort_keys=True))
    else:
        click.echo(text)


@click.group()
@click.option("--json", "as_json", is_flag=True, help="Emit JSON reports.")
@click.option("--cache", "cache_path", type=click.Path(dir_okay=False),
              help="Append-only JSONL result cache.")
@click.option("--no-cache", is_flag=True, help="Bypass the cache entirely.")
@click.version_option(__version__)
@click.pass_context
def main(ctx: click.Context, as_json: bool, cache_path: str | None,
         no_cache: bool) -> None:
    """Certify non-specialty, emptiness or -1-specialty of linear systems
    of plane curves with fat base points."""
    cache = NullCache() if (no_cache or not cache_path) else ResultCache(cache_path)
    ctx.obj = {"json": as_json, "cache": cache}


@main.command("vdim")
@click.argument("system")
@click.pass_context
def vdim_cmd(ctx: click.Context, system: str) -> None:
    """Virtual dimension of SYSTEM."""
    L = parse_system(system)
    _emit(ctx, {"input": str(L.canonical()), "vdim": vdim(L)}, str(vdim(L)))


@main.command("edim")
@click.argument("system")
@click.pass_context
def edim_cmd(ctx: click.Context, system: str) -> None:
    """Expected dimension of SYSTEM."""
    L = parse_system(system)
    _emit(ctx, {"input": str(L.canonical()), "edim": edim(L)}, str(edim(L)))


@main.command("crst")
@click.argument("system")
@click.pass_context
def crst_cmd(ctx: click.Context, system: str) -> None:
    """Standard form of SYSTEM with the full Cremona chain."""
    L = parse_system(system)
    result, chain = standard_form(L)
    payload = {
        "input": str(L.canonical()),
        "standard_form": str(result),
        "chain": [str(s) for s in chain],
    }
    _emit(ctx, payload, "\n".join(str(s) for s in chain))


@main.command("classify")
@click.argument("system")
@click.option("--prime", default=PrimeFieldConfig.p, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--attempts", default=3, show_default=True)
@click.option("--max-cols", default=2000, show_default=True)
@click.option("--stages", "stages_text", default=None,
              help="Comma-separated stage subset, e.g. standard_form,rank.")
@click.pass_context
def classify_cmd(ctx: click.Context, system: str, prime: int, seed: int,
                 attempts: int, max_cols: int,
                 stages_text: str | None) -> None:
    """Classify SYSTEM as NonSpecial / Empty / MinusOneSpecial."""
    from .engine import ALL_STAGES

    stages = tuple(stages_text.split(",")) if stages_text else ALL_STAGES
    unknown = set(stages) - set(ALL_STAGES)
    if unknown:
        raise click.UsageError(f"unknown stages: {','.join(sorted(unknown))}")
    L = parse_system(system)
    canonical = str(L.canonical())
    key = record_key(
        canonical + (f"|stages={','.join(stages)}" if stages_text else ""),
        prime, seed, attempts, __version__,
    )
    cache = ctx.obj["cache"]
    record = cache.get(key)
    cached = record is not None
    if record is None:
        cfg = EngineConfig(
            field_cfg=PrimeFieldConfig(p=prime, seed=seed, attempts=attempts),
            max_cols=max_cols,
            stages=stages,
        )
        v = classify(L, cfg)
        record = {
            "input": canonical,
            "verdict": _verdict_dict(v),
            "prime": prime,
            "seed": seed,
            "attempts": attempts,
            "version": __version__,
        }
        cache.put(key, record)
    payload = dict(record, cached=cached)
    verdict = record["verdict"]
    methods = [s["op"] for s in verdict["steps"]]
    text = (
        f"{canonical}: {verdict['kind']}"
        + (f", dim {verdict['dim']}" if verdict["dim"] is not None else "")
        + (f" ({verdict['reason']})" if verdict["reason"] else "")
        + (f" [via {' -> '.join(methods)}]" if methods else "")
        + (" [cached]" if cached else "")
    )
    _emit(ctx, payload, text)
    if verdict["kind"] == INCONCLUSIVE:
        sys.exit(2)


def _trace_text(trace: ReductionTrace, mults) -> str:
    lines = [f"{'diagram':<40} {'cells':>6}  v"]
    lines.append(f"{str(trace.initial.canonical()):<40} "
                 f"{trace.initial.cells:>6}")
    for step in trace.steps:
        v = "(" + ",".join(str(x) for x in step.v) + ")"
        lines.append(f"{str(step.result):<40} {step.result.cells:>6}  {v}")
    if trace.consumed_all:
        lines.append(f"all conditions consumed; dim V = {trace.final.cells}")
    else:
        lines.append(
            "stuck; residual multiplicities "
            + ",".join(str(m) for m in trace.residual_mults)
        )
    return "\n".join(lines)


@main.command("reduce")
@click.option("--diagram", "diagram_text", required=True)
@click.option("--mults", "mults_text", required=True)
@click.option("--order", "order_text", default=None,
              help="Multiplicity order override, same grammar as --mults.")
@click.pass_context
def reduce_cmd(ctx: click.Context, diagram_text: str, mults_text: str,
               order_text: str | None) -> None:
    """Run the reduction chain on a diagram."""
    from .diagrams import reduce_chain

    D = parse_diagram(diagram_text)
    mults = _parse_mults(mults_text)
    order = _parse_mults(order_text) if order_text else None
    trace = reduce_chain(D, mults, order=order)
    payload = {
        "diagram": str(D),
        "mults": list(mults),
        "steps": [
            {"m": s.m, "v": list(s.v), "result": str(s.result),
             "cells": s.result.cells}
            for s in trace.steps
        ],
        "final": str(trace.final),
        "final_cells": trace.final.cells,
        "consumed_all": trace.consumed_all,
        "residual_mults": list(trace.residual_mults),
    }
    _emit(ctx, payload, _trace_text(trace, mults))


@main.command("rank")
@click.argument("system", required=False)
@click.option("--diagram", "diagram_text", default=None)
@click.option("--mults", "mults_text", default=None)
@click.option("--prime", default=PrimeFieldConfig.p, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.pass_context
def rank_cmd(ctx: click.Context, system: str | None, diagram_text: str | None,
             mults_text: str | None, prime: int, seed: int) -> None:
    """Interpolation-matrix rank for SYSTEM or for --diagram/--mults."""
    if system:
        L = parse_system(system)
        if any(m < 0 for m in L.mults) or L.degree < 0:
            raise click.UsageError("rank needs d >= 0 and mults >= 0")
        D = triangle(L.degree + 1)
        mults = tuple(m for m in L.mults if m > 0)
        label = str(L.canonical())
    elif diagram_text and mults_text:
        D = parse_diagram(diagram_text)
        mults = tuple(m for m in _parse_mults(mults_text) if m > 0)
        label = f"{D}; {','.join(str(m) for m in mults)}"
    else:
        raise click.UsageError("give SYSTEM or both --diagram and --mults")
    cfg = PrimeFieldConfig(p=prime, seed=seed)
    rng = task_rng(cfg, f"{D}|{','.join(str(m) for m in mults)}|cli")
    points = sample_points(len(mults), prime, rng)
    A = build_matrix(D, mults, points, prime)
    rk = matrix_rank(A, prime)
    rows, cols = A.shape
    full = rk == min(rows, cols)
    dim = cols - rk
    payload = {
        "input": label, "rows": int(rows), "cols": int(cols), "rank": int(rk),
        "dim": int(dim), "full_rank": bool(full), "prime": prime, "seed": seed,
    }
    text = (f"{label}: matrix {rows}x{cols}, rank {rk}, dim V >= claim {dim}"
            f"{' (full rank: non-special)' if full else ''}")
    _emit(ctx, payload, text)


@main.command("initial-cases")
@click.option("--m", "m_", type=int, required=True)
@click.option("--a", "a_", type=int, required=True)
@click.option("--k", "k_", type=int, required=True)
@click.option("--s", "s_", type=int, default=2, show_default=True)
@click.option("--jobs", type=int, default=1, show_default=True)
@click.option("--enumeration-only", is_flag=True,
              help="Only count and report sizes; no matrices.")
@click.option("--prime", default=PrimeFieldConfig.p, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.pass_context
def initial_cases_cmd(ctx: click.Context, m_: int, a_: int, k_: int, s_: int,
                      jobs: int, enumeration_only: bool, prime: int,
                      seed: int) -> None:
    """Certify the family (m, a, k) of staircase diagrams."""
    spec = FamilySpec(m_, a_, k_)
    cfg = PrimeFieldConfig(p=prime, seed=seed)
    report = run_initial_cases(spec, s=s_, jobs=jobs, cfg=cfg,
                               enumeration_only=enumeration_only)
    if ctx.obj["json"]:
        click.echo(report.to_json())
    else:
        click.echo(report.to_text())
    if report.result != "OK":
        sys.exit(1)


@main.group("ledger")
def ledger_group() -> None:
    """Operations on the separately-handled case ledger."""


@ledger_group.command("verify")
@click.option("--entry", "entry_id", default=None,
              help="Verify only records with this id.")
@click.option("--m-max", default=20, show_default=True)
@click.option("--k-max", default=60, show_default=True)
@click.option("--r-max", default=16, show_default=True)
@click.option("--prime", default=PrimeFieldConfig.p, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.pass_context
def ledger_verify_cmd(ctx: click.Context, entry_id: str | None, m_max: int,
                      k_max: int, r_max: int, prime: int, seed: int) -> None:
    """Replay and verify every ledger record over the given ranges."""
    cfg = EngineConfig(field_cfg=PrimeFieldConfig(p=prime, seed=seed))
    report = run_ledger(m_max=m_max, k_max=k_max, r_max=r_max, cfg=cfg,
                        entry_id=entry_id)
    if ctx.obj["json"]:
        click.echo(jsonlib.dumps(report.to_dict(), sort_keys=True))
    else:
        click.echo(
            f"ledger: {report.entries} entries, "
            f"{report.instantiations} instantiations, "
            f"{len(report.failures)} failures, "
            f"{len(report.skipped)} skipped"
        )
        for sk in report.skipped:
            click.echo(f"  skipped: {sk}")
        for f in report.failures:
            click.echo(f"  FAIL {f.system} {f.params}: {f.note}")
    if report.failures:
        sys.exit(1)


if __name__ == "__main__":
    main()
