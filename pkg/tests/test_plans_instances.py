import math
import random

import pytest

from algograph.errors import InvalidConfigurationError
from algograph.instances import (
    OBJECTS,
    dump_instance,
    generate_haystack,
    generate_instance,
    generate_rag,
    load_instance,
)
from algograph.backend import parse_passcode_sentences, parse_digit_sentences
from algograph.tasks import plan_decomposition


def test_plan_single_segment_when_m_equals_n():
    plan = plan_decomposition(200, 200, "disjoint")
    assert plan.k == 1
    assert plan.segments == ((0, 200),)


def test_plan_overlapping_example_even_division():
    plan = plan_decomposition(200, 80, "overlapping-half")
    assert plan.k == 4 == math.ceil(2 * 200 / 80 - 1)
    assert [s for s, _ in plan.segments] == [0, 40, 80, 120]
    assert all(length == 80 for _, length in plan.segments)


def test_plan_overlapping_example_ragged():
    plan = plan_decomposition(200, 60, "overlapping-half")
    assert plan.k == 6
    assert plan.segments[-1] == (150, 50)
    assert 30 <= plan.segments[-1][1] <= 60


def test_plan_rejects_zero_m():
    with pytest.raises(InvalidConfigurationError):
        plan_decomposition(100, 0, "disjoint")


def test_plan_clamps_m_above_n():
    plan = plan_decomposition(200, 300, "disjoint")
    assert plan.k == 1 and plan.segments == ((0, 200),) and plan.clamped


def test_plan_odd_m_rounds_down_with_warning():
    with pytest.warns(UserWarning):
        plan = plan_decomposition(200, 61, "overlapping-half")
    assert plan.m == 60


def test_disjoint_plan_reconstructs_input():
    rng = random.Random(6)
    for _ in range(200):
        n = rng.randrange(1, 300)
        m = rng.randrange(1, n + 1)
        plan = plan_decomposition(n, m, "disjoint")
        assert plan.k == math.ceil(n / m)
        text = "".join(chr(97 + i % 26) for i in range(n))
        pieces = [text[s : s + l] for s, l in plan.segments]
        assert "".join(pieces) == text


def test_overlapping_plan_invariants_sampled():
    rng = random.Random(8)
    for _ in range(300):
        n = rng.randrange(2, 400)
        m = rng.randrange(1, n // 2 + 1) * 2
        plan = plan_decomposition(n, m, "overlapping-half")
        starts = [s for s, _ in plan.segments]
        lengths = [l for _, l in plan.segments]
        if plan.k > 1:
            assert plan.k == math.ceil(2 * n / m - 1)
            assert starts == [i * (m // 2) for i in range(plan.k)]
            assert all(l == m for l in lengths[:-1])
            assert m // 2 <= lengths[-1] <= m
            overlaps = [
                starts[i] + lengths[i] - starts[i + 1] for i in range(plan.k - 1)
            ]
            assert all(o == m // 2 for o in overlaps[:-1])
            assert overlaps[-1] >= m // 2
        assert starts[0] == 0
        assert starts[-1] + lengths[-1] == n


def test_counting_instance_determinism_and_truth():
    a = generate_instance("counting", 10, 123)
    b = generate_instance("counting", 10, 123)
    assert a == b
    assert a.truth == sum(c.isdigit() for c in a.text)
    assert generate_instance("counting", 10, 124) != a


def test_sorting_instance_invariants():
    inst = generate_instance("sorting", 1000, 5)
    assert len(inst.values) == 1000
    assert all(0.0 <= v <= 1.0 for v in inst.values)
    assert all(round(v, 2) == v for v in inst.values)
    assert list(inst.truth) == sorted(inst.values)


def test_haystack_instance_invariants():
    inst = generate_haystack(3000, 42)
    assert len(inst.text) <= 3000
    sentences = parse_passcode_sentences(inst.text)
    target_hits = [code for obj, code in sentences if obj == inst.target_object]
    assert target_hits == [inst.truth]
    start, end = inst.needle_span
    assert inst.text[start:end].startswith("The passcode to the " + inst.target_object)
    # every other sentence names a different object
    assert all(obj in {o for o in OBJECTS} for obj, _ in sentences)


def test_haystack_objects_keep_consistent_passcodes():
    inst = generate_haystack(20_000, 7)  # long enough to force object reuse
    codes = {}
    for obj, code in parse_passcode_sentences(inst.text):
        assert codes.setdefault(obj, code) == code


def test_haystack_without_needle():
    inst = generate_haystack(2000, 9, needle_present=False)
    sentences = parse_passcode_sentences(inst.text)
    assert all(obj != inst.target_object for obj, _ in sentences)
    assert inst.needle_span is None
    assert not inst.needle_present


def test_haystack_rejects_tiny_n():
    with pytest.raises(InvalidConfigurationError):
        generate_haystack(10, 0)


def test_rag_instance_invariants():
    inst = generate_rag(4000, 17)
    assert len(inst.text) <= 4000
    relevant = [(pos, digit) for obj, pos, digit, _ in parse_digit_sentences(inst.text)
                if obj == inst.target_object]
    assert sorted(pos for pos, _ in relevant) == [1, 2, 3, 4, 5, 6]
    for pos, digit in relevant:
        assert inst.truth[pos - 1] == digit
    for (start, end), position in zip(inst.needle_spans, range(1, 7)):
        assert inst.text[start:end] == f"The {position}-th digit of the passcode to the " \
                                       f"{inst.target_object} is {inst.truth[position - 1]}."


def test_rag_rejects_tiny_n():
    with pytest.raises(InvalidConfigurationError):
        generate_rag(100, 0)


def test_unknown_task_rejected():
    with pytest.raises(InvalidConfigurationError):
        generate_instance("summarize", 100, 0)


@pytest.mark.parametrize("task,n", [("counting", 64), ("sorting", 32),
                                    ("retrieval", 800), ("rag", 800)])
def test_instance_dump_load_roundtrip(task, n, tmp_path):
    inst = generate_instance(task, n, 99)
    path = tmp_path / f"{task}.txt"
    dump_instance(inst, path)
    loaded = load_instance(path)
    assert loaded == inst


def test_haystack_no_needle_roundtrip(tmp_path):
    inst = generate_haystack(900, 3, needle_present=False)
    dump_instance(inst, tmp_path / "x.txt")
    assert load_instance(tmp_path / "x.txt") == inst
