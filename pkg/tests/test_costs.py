import pytest

from polarkit.costs import CostReport, count_ops, instrumented_count, pattern_cost
from polarkit.patterns import EIGHT_BIT_PATTERNS, RATE_R2_PATTERNS, FrozenPattern


def test_published_rows_m8_q4():
    assert count_ops("rcc", 8, 4) == CostReport("rcc", 8, 4, 304, ((256, 4, 1),))
    assert count_ops("dmm", 8, 4).multiplications == 1792
    assert count_ops("dmm", 8, 4).sorts == ((256, 4, 1),)
    assert count_ops("drh", 8, 4).multiplications == 784
    r = count_ops("dnc81", 8, 4)
    assert r.multiplications == 112 and r.sorts == ((64, 4, 1), (16, 4, 2))
    r = count_ops("dnc9", 8, 4)
    assert r.multiplications == 80 and r.sorts == ((32, 4, 1), (16, 4, 2))
    r = count_ops("lcaml", 8, 4)
    assert r.multiplications == 80 and r.sorts == ((32, 4, 1), (8, 4, 4))


def test_published_rows_m16_q4():
    r = count_ops("dnc81", 16, 4)
    assert r.multiplications == 1632 and r.sorts == ((1024, 4, 1), (256, 4, 2))
    r = count_ops("dnc9", 16, 4)
    assert r.multiplications == 736 and r.sorts == ((128, 4, 1), (256, 4, 2))


def test_step0_step2_split_documented():
    r = count_ops("lcaml", 8, 4)
    assert r.step0_multiplications == 48 and r.step2_multiplications == 32
    r = count_ops("dnc81", 16, 4)
    assert r.step0_multiplications == 608 and r.step2_multiplications == 1024


def test_method_validation():
    with pytest.raises(ValueError):
        count_ops("fft", 8, 4)
    with pytest.raises(ValueError):
        count_ops("rcc", 12, 4)
    with pytest.raises(ValueError):
        count_ops("lcaml", 16, 4)
    with pytest.raises(ValueError):
        count_ops("rcc", 8, 0)


def _sort_multiset(report):
    out = {}
    for frm, to, cnt in report.sorts:
        out[(frm, to)] = out.get((frm, to), 0) + cnt
    return out


def test_instrumented_matches_formula_per_pattern():
    for s in RATE_R2_PATTERNS:
        fp = FrozenPattern.from_string(s)
        for q in (1, 2, 4):
            meas = instrumented_count(fp, q)
            want = min(q, 1 << fp.gamma) ** 2 * (1 << fp.beta)
            assert meas.step2_multiplications == want, (s, q)
            assert _sort_multiset(meas) == _sort_multiset(pattern_cost(fp, q)), (s, q)


def test_instrumented_examples():
    fd = instrumented_count(FrozenPattern.from_string("FDDDDDDD"), 4)
    assert fd.step2_multiplications == 32
    mixed = instrumented_count(FrozenPattern.from_string("FFFDFDDD"), 4)
    assert mixed.step2_multiplications == 16
    with pytest.raises(ValueError):
        instrumented_count(FrozenPattern.from_string("DDDDDDDD"), 4)


def test_worst_case_dominates_each_pattern():
    for method, universe in (("dnc9", EIGHT_BIT_PATTERNS), ("lcaml", RATE_R2_PATTERNS)):
        worst = count_ops(method, 8, 4)
        best_seen = 0
        for s in universe:
            per = pattern_cost(FrozenPattern.from_string(s), 4)
            assert per.step2_multiplications <= worst.step2_multiplications
            best_seen = max(best_seen, per.step2_multiplications)
        assert best_seen == worst.step2_multiplications  # equality at the arg-max
