from __future__ import annotations

import pytest

from fatpoints.diagrams import triangle
from fatpoints.engine import (
    EngineConfig,
    classify,
    classify_space,
    dim_lower_bound_step,
)
from fatpoints.systems import (
    EMPTY,
    INCONCLUSIVE,
    MINUS_ONE_SPECIAL,
    NON_SPECIAL,
    LinearSystem,
    edim,
)
from fatpoints.textio import parse_system


class TestClassify:
    def test_minus_one_special(self):
        v = classify(parse_system("L(4;2^5)"))
        assert v.kind == MINUS_ONE_SPECIAL and v.dim == 0

    def test_minus_one_special_needs_standard_form_chain(self):
        # without the Cremona stage the negative rules never trigger
        cfg = EngineConfig(stages=("rank",))
        v = classify(parse_system("L(4;2^5)"), cfg)
        assert v.kind == INCONCLUSIVE

    def test_empty_by_rank_after_standard_form(self):
        cfg = EngineConfig(stages=("standard_form", "rank"))
        v = classify(parse_system("L(13;5,4^9)"), cfg)
        assert v.kind == EMPTY
        step = v.certificate[-1]
        assert step.op == "rank"
        assert step.params["rows"] == step.params["cols"] == 105
        assert step.params["rank"] == 105

    def test_nonspecial_by_axioms(self):
        L = parse_system("L(28;12,8^9)")
        v = classify(L)
        assert v.kind == NON_SPECIAL and v.dim == edim(L)

    def test_empty_by_reduction_and_enlarge(self):
        v = classify(parse_system("L(32;12,10^9)"))
        assert v.kind == EMPTY
        ops = [s.op for s in v.certificate]
        assert "enlarge" in ops

    def test_negative_degree(self):
        v = classify(LinearSystem(-2, (3,)))
        assert v.kind == EMPTY

    def test_recursion_depth_guard(self):
        cfg = EngineConfig(max_depth=0)
        v = classify(parse_system("L(4;2^5)"), cfg)
        assert v.kind == INCONCLUSIVE

    def test_column_cap(self):
        cfg = EngineConfig(stages=("rank",), max_cols=10)
        v = classify(parse_system("L(9;1)"), cfg)
        assert v.kind == INCONCLUSIVE and "cap" in v.reason


class TestClassifySpace:
    def test_worked_example_dimension(self):
        v = classify_space(triangle(32), [12] + [9] * 9)
        assert v.kind == NON_SPECIAL and v.dim == 45

    def test_rejects_negative_mults(self):
        with pytest.raises(ValueError):
            classify_space(triangle(3), [-1])

    def test_rank_fallback(self):
        cfg = EngineConfig(stages=("rank",))
        v = classify_space(triangle(5), [2] * 4 + [1] * 3, cfg)
        assert v.kind == NON_SPECIAL and v.dim == 0


class TestDegreeDrop:
    def test_applicable(self):
        L = parse_system("L(31;13,9^9)")
        cand = dim_lower_bound_step(L)
        assert cand is not None and cand.degree == 30

    def test_inapplicable_when_vdim_too_low(self):
        assert dim_lower_bound_step(parse_system("L(13;5,4^9)")) is None
