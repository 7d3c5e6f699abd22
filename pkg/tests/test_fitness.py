import numpy as np
import pytest

from conflab.fitness import (
    FitnessDecomposition,
    PerformanceCurve,
    expected_utility,
    fidelity,
    fitness_decomposition,
    performance_curve,
    potential_fitness,
    realized_fitness,
)
from conflab.model import (
    Implementation,
    Task,
    TaskPopulation,
    VariationParams,
    derive_implementation,
    evaluate_interop,
    make_standard,
)
from conflab.sdt import technomarker_core_coverage

from oracles import area, decomposition_by_breakpoints

REF = PerformanceCurve.from_steps([0.0, 1.0], [0.8])
IMP = PerformanceCurve.from_steps([0.0, 0.5, 1.0], [1.0, 0.4])
WORKED = FitnessDecomposition(0.6, 0.1, 0.2)


def random_curve(rng, lo=0.0, hi=1.0):
    k = int(rng.integers(1, 8))
    inner = np.sort(rng.choice(np.arange(1, 40), size=k - 1, replace=False)) / 40
    edges = [lo] + [lo + (hi - lo) * x for x in inner] + [hi]
    return PerformanceCurve.from_steps(edges, rng.random(k).round(3))


class TestCurve:
    def test_tiling_enforced(self):
        with pytest.raises(ValueError):
            PerformanceCurve((0.0, 1.0), ((0.0, 0.4, 0.5), (0.5, 1.0, 0.5)))

    def test_probability_range(self):
        with pytest.raises(ValueError):
            PerformanceCurve.from_steps([0, 1], [1.2])

    def test_area(self):
        assert IMP.area == pytest.approx(0.7)


class TestDecomposition:
    def test_worked_example(self):
        d = fitness_decomposition(REF, IMP)
        assert d.intrinsic_if == pytest.approx(0.6, abs=1e-12)
        assert d.additional_af == pytest.approx(0.1, abs=1e-12)
        assert d.missing_mf == pytest.approx(0.2, abs=1e-12)

    def test_identical(self):
        d = fitness_decomposition(IMP, IMP)
        assert d.additional_af == 0 and d.missing_mf == 0
        assert d.intrinsic_if == pytest.approx(IMP.area, abs=1e-12)
        assert fidelity(d) == d.intrinsic_if

    def test_matches_breakpoint_oracle(self):
        rng = np.random.default_rng(0)
        for _ in range(300):
            r, i = random_curve(rng), random_curve(rng)
            d = fitness_decomposition(r, i)
            want = decomposition_by_breakpoints(r.segments, i.segments)
            got = (d.intrinsic_if, d.additional_af, d.missing_mf)
            assert np.allclose(got, want, rtol=0, atol=1e-12)
            assert abs(d.intrinsic_if + d.additional_af - area(i.segments)) <= 1e-12
            assert abs(d.intrinsic_if + d.missing_mf - area(r.segments)) <= 1e-12

    def test_swap_exchanges_af_mf(self):
        rng = np.random.default_rng(1)
        for _ in range(100):
            r, i = random_curve(rng), random_curve(rng)
            d, e = fitness_decomposition(r, i), fitness_decomposition(i, r)
            assert e.intrinsic_if == pytest.approx(d.intrinsic_if, abs=1e-12)
            assert e.additional_af == pytest.approx(d.missing_mf, abs=1e-12)
            assert e.missing_mf == pytest.approx(d.additional_af, abs=1e-12)

    def test_domain_mismatch(self):
        with pytest.raises(ValueError):
            fitness_decomposition(REF, PerformanceCurve.from_steps([0.0, 2.0], [0.5]))


class TestAlgebra:
    def test_worked(self):
        assert potential_fitness(WORKED) == pytest.approx(0.9)
        assert realized_fitness(WORKED) == pytest.approx(-0.1)
        assert fidelity(WORKED) == pytest.approx(0.3)

    def test_identity_case(self):
        assert potential_fitness(FitnessDecomposition(0.4, 0, 0)) == 0.4

    def test_balanced(self):
        assert realized_fitness(FitnessDecomposition(0.4, 0.2, 0.2)) == 0

    def test_random_inequalities(self):
        rng = np.random.default_rng(2)
        for _ in range(1000):
            r, i = random_curve(rng), random_curve(rng)
            d = fitness_decomposition(r, i)
            pf = potential_fitness(d)
            assert pf >= max(r.area, i.area) - 1e-12
            assert realized_fitness(d) == pytest.approx(i.area - r.area, abs=1e-12)
            fi = fidelity(d)
            assert fi <= d.intrinsic_if
            assert (fi == d.intrinsic_if) == (d.additional_af + d.missing_mf == 0)

    def test_expected_utility(self):
        assert expected_utility(10, 0.8) == 8
        assert expected_utility(3.5, 0) == 0
        assert expected_utility(3.5, 1) == 3.5
        with pytest.raises(ValueError):
            expected_utility(1, 1.1)
        with pytest.raises(ValueError):
            expected_utility(-1, 0.5)


class TestPerformanceCurve:
    def setup_method(self):
        self.std = make_standard(12, seed=4)
        rng = np.random.default_rng(0)
        self.pop = TaskPopulation(tuple(
            Task(frozenset(int(c) for c in rng.choice(12, size=3, replace=False)), template_id=i)
            for i in range(40)), tuple(range(12)))

    def test_zero_variation_constant_one(self):
        a = derive_implementation(self.std, VariationParams(), seed=1, agent_id=0)
        b = derive_implementation(self.std, VariationParams(), seed=2, agent_id=1)
        curve = performance_curve(a, b, self.pop, self.std, bins=1)
        assert curve.probabilities.tolist() == [1.0]
        curve = performance_curve(a, b, self.pop, self.std, bins=4)
        assert curve.probabilities.tolist() == [0.0, 0.0, 0.0, 1.0]

    def test_nothing_shared_constant_zero(self):
        a = Implementation.classify(0, self.std, {c: 1 for c in range(12)})
        b = Implementation.classify(1, self.std, {c: 2 for c in range(12)})
        curve = performance_curve(a, b, self.pop, self.std, bins=5)
        assert not curve.probabilities.any()

    def test_recount_oracle(self):
        a = derive_implementation(self.std, VariationParams(0.2, 0.3), seed=3, agent_id=0)
        b = derive_implementation(self.std, VariationParams(0.2, 0.3), seed=4, agent_id=1)
        bins = 4
        curve = performance_curve(a, b, self.pop, self.std, bins=bins)
        for k in range(bins):
            lo, hi = k / bins, (k + 1) / bins
            members = [t for t in self.pop
                       if lo <= technomarker_core_coverage(t, a, b, self.std) < hi
                       or (k == bins - 1 and technomarker_core_coverage(t, a, b, self.std) == 1.0)]
            want = (sum(evaluate_interop(a, b, t).success for t in members) / len(members)
                    if members else 0.0)
            assert curve.probabilities[k] == pytest.approx(want)

    def test_sampled_is_deterministic(self):
        a = derive_implementation(self.std, VariationParams(0.2, 0.3), seed=3, agent_id=0)
        c1 = performance_curve(a, a, self.pop, self.std, 3, np.random.default_rng(1), n_samples=50)
        c2 = performance_curve(a, a, self.pop, self.std, 3, np.random.default_rng(1), n_samples=50)
        assert c1 == c2

    def test_errors(self):
        a = derive_implementation(self.std, VariationParams(), seed=3)
        with pytest.raises(ValueError):
            performance_curve(a, a, TaskPopulation(()), self.std, 2)
        with pytest.raises(ValueError):
            performance_curve(a, a, self.pop, self.std, 0)
