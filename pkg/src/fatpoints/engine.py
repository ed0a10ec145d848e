"""End-to-end classification pipeline for a concrete linear system.

Stages, cheapest first: standard form (Cremona chain), the
negative-multiplicity rules, the axiom knowledge base, the reduction
chain on the full triangle of monomials, and finally the randomized
rank certificate.  The first conclusive stage wins; the verdict carries
a replayable trace of every step taken.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

from . import diagrams, systems
from .diagrams import Diagram, triangle, try_empty_by_enlarge, vdim_space
from .fplinalg import PrimeFieldConfig, certify_nonspecial_rank
from .systems import (
    EMPTY,
    INCONCLUSIVE,
    MINUS_ONE_SPECIAL,
    NON_SPECIAL,
    LinearSystem,
    Step,
    Verdict,
    classify_by_axioms,
    classify_by_simple_points,
    edim,
    standard_form,
    strip_negative_mults,
    vdim,
)

ALL_STAGES = ("standard_form", "negative", "axioms", "reduction", "rank")


@dataclass(frozen=True)
class EngineConfig:
    field_cfg: PrimeFieldConfig = field(default_factory=PrimeFieldConfig)
    max_cols: int = 2000
    max_depth: int = 10
    stages: tuple[str, ...] = ALL_STAGES


def _empty(steps) -> Verdict:
    return Verdict(EMPTY, dim=-1, certificate=tuple(steps))


def classify(L: LinearSystem, cfg: EngineConfig | None = None, _depth: int = 0) -> Verdict:
    """Classify L as NonSpecial(dim) / Empty / MinusOneSpecial, or give up."""
    cfg = cfg or EngineConfig()
    if _depth > cfg.max_depth:
        return Verdict(INCONCLUSIVE, reason="recursion depth exceeded")
    steps: list[Step] = []
    cur = L
    if "standard_form" in cfg.stages:
        cur, chain = standard_form(L)
        if len(chain) > 1:
            steps.append(
                Step("standard_form", {"chain": [str(s) for s in chain]},
                     before=str(L), after=str(cur))
            )
        if cur.degree < 0:
            return _empty(steps + [Step("negative_degree", {}, before=str(cur))])
    if "negative" in cfg.stages and any(m < 0 for m in cur.mults):
        stripped, fixed = strip_negative_mults(cur)
        steps.append(
            Step("strip_negative", {"components": list(fixed.components)},
                 before=str(cur), after=str(stripped))
        )
        sub = classify(stripped.canonical(), cfg, _depth + 1)
        if fixed.components:
            # Multiple fixed components: L is -1-special exactly when the
            # stripped system is non-empty.
            if sub.kind == NON_SPECIAL and (sub.dim is not None and sub.dim >= 0):
                return Verdict(
                    MINUS_ONE_SPECIAL, dim=sub.dim,
                    certificate=tuple(steps) + sub.certificate,
                    axioms_used=sub.axioms_used,
                )
            if sub.kind == MINUS_ONE_SPECIAL:
                return replace(sub, certificate=tuple(steps) + sub.certificate)
            if sub.kind == EMPTY:
                return _empty(steps + list(sub.certificate))
            return Verdict(INCONCLUSIVE, reason=sub.reason,
                           certificate=tuple(steps) + sub.certificate)
        return sub.prepend(tuple(steps))
    if any(m < 0 for m in cur.mults) or cur.degree < 0:
        return Verdict(INCONCLUSIVE, reason="unresolved negative entries",
                       certificate=tuple(steps))
    canon = cur.canonical()
    if "axioms" in cfg.stages:
        try:
            v = classify_by_axioms(canon) or classify_by_simple_points(canon)
        except ValueError:
            v = None  # not in standard form (possible under restricted stages)
        if v is not None:
            return v.prepend(tuple(steps))
    trace = None
    vs = vdim(canon) + 1  # cells minus conditions on the full triangle
    if "reduction" in cfg.stages and canon.degree >= 0:
        D = triangle(canon.degree + 1)
        trace = diagrams.reduce_chain(D, canon.mults)
        if trace.consumed_all:
            steps.append(_reduction_step(trace))
            assert trace.final.cells == vs
            if vs == 0:
                return _empty(steps)
            return Verdict(NON_SPECIAL, dim=vs - 1, certificate=tuple(steps))
        if vs <= 0:
            cert = try_empty_by_enlarge(trace.final, trace.residual_mults)
            if cert is not None:
                steps.append(_reduction_step(trace))
                steps.append(
                    Step("enlarge", {"to": str(cert.enlarged)},
                         before=str(cert.original))
                )
                steps.append(_reduction_step(cert.trace))
                return _empty(steps)
    if "rank" in cfg.stages and canon.degree >= 0:
        D = triangle(canon.degree + 1)
        if D.cells > cfg.max_cols:
            return Verdict(
                INCONCLUSIVE,
                reason=f"matrix would have {D.cells} columns (cap {cfg.max_cols})",
                certificate=tuple(steps),
            )
        candidates = []
        if trace is not None and trace.steps and not trace.consumed_all:
            candidates.append((trace.final, trace.residual_mults, trace))
        candidates.append((D, canon.mults, None))
        for target, mults, pre in candidates:
            v = certify_nonspecial_rank(target, mults, cfg.field_cfg)
            if v.kind == NON_SPECIAL:
                local = list(steps)
                if pre is not None:
                    local.append(_reduction_step(pre))
                local.extend(v.certificate)
                # full rank means the space dimension equals max(vs, 0)
                if vs <= 0:
                    return _empty(local)
                return Verdict(NON_SPECIAL, dim=vs - 1, certificate=tuple(local))
    return Verdict(INCONCLUSIVE, reason="all stages inconclusive",
                   certificate=tuple(steps))


def _reduction_step(trace: diagrams.ReductionTrace) -> Step:
    return Step(
        "reduce_chain",
        {
            "mults": [s.m for s in trace.steps],
            "residual": list(trace.residual_mults),
        },
        before=str(trace.initial),
        after=str(trace.final),
    )


def classify_space(D: Diagram, mults, cfg: EngineConfig | None = None) -> Verdict:
    """Reduction-then-rank classification of V(D; mults).

    Dimensions in the verdict are vector-space dimensions of V.
    """
    cfg = cfg or EngineConfig()
    mults = [m for m in mults if m != 0]
    if any(m < 0 for m in mults):
        raise ValueError("classify_space needs non-negative multiplicities")
    D = D.canonical()
    vs = vdim_space(D, mults)
    steps: list[Step] = []
    trace = None
    if "reduction" in cfg.stages:
        trace = diagrams.reduce_chain(D, mults)
        if trace.consumed_all:
            steps.append(_reduction_step(trace))
            return Verdict(NON_SPECIAL, dim=trace.final.cells,
                           certificate=tuple(steps))
        if vs <= 0:
            cert = try_empty_by_enlarge(trace.final, trace.residual_mults)
            if cert is not None:
                steps.append(_reduction_step(trace))
                steps.append(Step("enlarge", {"to": str(cert.enlarged)},
                                  before=str(cert.original)))
                steps.append(_reduction_step(cert.trace))
                return Verdict(NON_SPECIAL, dim=0, certificate=tuple(steps))
    if "rank" in cfg.stages:
        if D.cells > cfg.max_cols:
            return Verdict(INCONCLUSIVE,
                           reason=f"matrix would have {D.cells} columns "
                                  f"(cap {cfg.max_cols})")
        candidates = []
        if trace is not None and trace.steps and not trace.consumed_all:
            candidates.append((trace.final, trace.residual_mults, trace))
        candidates.append((D, tuple(mults), None))
        for target, ms, pre in candidates:
            v = certify_nonspecial_rank(target, ms, cfg.field_cfg)
            if v.kind == NON_SPECIAL:
                local = list(steps)
                if pre is not None:
                    local.append(_reduction_step(pre))
                local.extend(v.certificate)
                return Verdict(NON_SPECIAL, dim=max(vs, 0),
                               certificate=tuple(local))
    return Verdict(INCONCLUSIVE, reason="all stages inconclusive")


def dim_lower_bound_step(L: LinearSystem) -> LinearSystem | None:
    """Degree-drop argument: certifying L(d-1; M) non-special with
    vdim >= -1 pins dim L(d; M) to its expected dimension."""
    cand = LinearSystem(L.degree - 1, L.mults)
    if vdim(cand) >= -1:
        return cand
    return None
