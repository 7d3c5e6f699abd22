"""Property-based checks over generated inputs."""

import numpy as np
from hypothesis import given, settings, strategies as st

from conflab.conformance import (
    Adaptor,
    CostParams,
    GroundingState,
    grounding_dialogue,
    mediated_translate,
    universal_sync,
)
from conflab.fitness import (
    PerformanceCurve,
    fidelity,
    fitness_decomposition,
    potential_fitness,
    realized_fitness,
)
from conflab.model import (
    CommonModel,
    Implementation,
    Standard,
    Task,
    VariationParams,
    common_core,
    derive_implementation,
    evaluate_interop,
    interoperability_gap,
    make_standard,
)
from conflab.sdt import LabeledSample, auc_pair_count, confusion_at_cutoff, roc_curve
from conflab.variation import DriftParams, divergence, step_impl_drift

from oracles import auc_by_pairs, decomposition_by_breakpoints, entry_divergence

markers = st.sampled_from([-1.0, 0.0, 0.25, 0.5, 0.5, 0.75, 1.0, 3.0])
models = st.dictionaries(st.integers(0, 9), st.integers(0, 3), max_size=10)
probs = st.floats(0.0, 1.0)


@st.composite
def populations(draw):
    pos = draw(st.lists(markers, min_size=1, max_size=12))
    neg = draw(st.lists(markers, min_size=1, max_size=12))
    samples = [LabeledSample(m, True) for m in pos] + [LabeledSample(m, False) for m in neg]
    order = draw(st.permutations(range(len(samples))))
    return [samples[i] for i in order]


@st.composite
def step_curves(draw):
    k = draw(st.integers(1, 6))
    cuts = sorted(draw(st.sets(st.integers(1, 63), min_size=k - 1, max_size=k - 1)))
    edges = [0.0] + [c / 64 for c in cuts] + [1.0]
    ps = draw(st.lists(probs, min_size=k, max_size=k))
    return PerformanceCurve.from_steps(edges, ps)


@given(populations())
def test_auc_matches_pair_oracle(samples):
    pos = [m for m, y in samples if y]
    neg = [m for m, y in samples if not y]
    want = float(auc_by_pairs(pos, neg))
    assert abs(roc_curve(samples).auc - want) <= 1e-12
    assert abs(auc_pair_count(samples) - want) <= 1e-12


@given(populations(), markers)
def test_confusion_counts_sum(samples, cut):
    c = confusion_at_cutoff(samples, cut)
    assert c.tp + c.fp + c.tn + c.fn == len(samples)
    assert 0 <= c.tpr <= 1 and 0 <= c.fpr <= 1


@given(populations())
def test_rates_monotone_in_cutoff(samples):
    pts = roc_curve(samples).points
    assert all(b.fpr >= a.fpr and b.tpr >= a.tpr for a, b in zip(pts, pts[1:]))


@given(step_curves(), step_curves())
def test_fitness_identities(ref, imp):
    d = fitness_decomposition(ref, imp)
    assert min(d.intrinsic_if, d.additional_af, d.missing_mf) >= 0
    assert abs(d.intrinsic_if + d.additional_af - imp.area) <= 1e-12
    assert abs(d.intrinsic_if + d.missing_mf - ref.area) <= 1e-12
    assert potential_fitness(d) == d.intrinsic_if + d.additional_af + d.missing_mf
    assert realized_fitness(d) == d.additional_af - d.missing_mf
    assert fidelity(d) == d.intrinsic_if - (d.additional_af + d.missing_mf)
    oracle = decomposition_by_breakpoints(ref.segments, imp.segments)
    assert np.allclose((d.intrinsic_if, d.additional_af, d.missing_mf), oracle, atol=1e-12)


@given(models, models)
def test_common_core_symmetric(a, b):
    assert common_core(CommonModel(a), CommonModel(b)) == common_core(CommonModel(b), CommonModel(a))


@given(models, models, st.sets(st.integers(0, 9), min_size=1, max_size=5))
def test_gap_zero_iff_success(a, b, req):
    std = Standard(CommonModel({}))
    ia, ib = Implementation.classify(0, std, a), Implementation.classify(1, std, b)
    task = Task(frozenset(req))
    ok = evaluate_interop(ia, ib, task).success
    assert (interoperability_gap(ia, ib, task).gap_size == 0) == ok
    if req <= set(a):
        assert evaluate_interop(ia, ia, task).success


@settings(max_examples=50)
@given(st.integers(1, 30), st.integers(0, 10_000), probs, probs, probs, st.integers(0, 2**31))
def test_partition_survives_drift_and_sync(n, seed, p_omit, p_var, p_ext, drift_seed):
    std = make_standard(n, seed=seed)
    impl = derive_implementation(std, VariationParams(p_omit, p_var, p_ext), seed=seed + 1)
    impl.check_partition(std)
    assert divergence(std, impl) == entry_divergence(std.model.entries, impl.model.entries)
    rng = np.random.default_rng(drift_seed)
    for _ in range(5):
        impl = step_impl_drift(impl, DriftParams(p_impl_drift=0.7), rng)
        impl.check_partition(std)
    synced, led = universal_sync([impl], std, CostParams())
    synced[0].check_partition(std)
    again, led2 = universal_sync(synced, std, CostParams())
    assert led2.total == 0 and again[0].model == synced[0].model
    assert all(synced[0].model.entries[c] == t for c, t in std.model.entries.items())


@given(models, models, st.sets(st.integers(0, 9), min_size=1, max_size=6))
def test_repairs_succeed_on_shared_concepts(a, b, req):
    std = Standard(CommonModel({}))
    ia, ib = Implementation.classify(0, std, a), Implementation.classify(1, std, b)
    task = Task(frozenset(req))
    covered = req <= set(a) & set(b)
    out, led = mediated_translate(Adaptor(), ia, ib, task, CostParams())
    assert out.success == covered
    assert led.ahead_of_time + led.task_time == led.total
    out, _, _ = grounding_dialogue(ia, ib, task, GroundingState(), 10, CostParams())
    assert out.success == covered
