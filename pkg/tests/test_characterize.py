from __future__ import annotations

import random
from fractions import Fraction

import pytest

import gsurv
from gsurv.errors import (
    CollectionNotPowerset,
    GridInvalid,
    NotMonotoneFamily,
    TotalNotPositive,
    ValuesNotMonotone,
)
from helpers import vec, weighted_operator

F = Fraction
Status = gsurv.VerdictStatus


class TestEqualityForAllMeasures:
    def test_weighted_example_is_proved(self, x234):
        fca = gsurv.Fca.powerset(weighted_operator(), 3)
        verdict = gsurv.equality_for_all_measures(x234, fca)
        assert verdict.proved

    def test_weighted_example_refuted_on_second_vector(self):
        op = weighted_operator()
        fca = gsurv.Fca.powerset(op, 3)
        y = vec(2, 5, 4)
        verdict = gsurv.equality_for_all_measures(y, fca)
        assert verdict.refuted
        assert "drops below max on {2,3}" in verdict.reason
        assert verdict.witness.verify(fca)
        # the full set is a chain complement of y and deviates from max too
        assert op.value(y, 0b111) == 4 != gsurv.agg_max(y, 0b111)

    def test_sum_family_refuted_via_chain_complement(self):
        fca = gsurv.Fca.powerset(gsurv.SumOperator(), 2)
        verdict = gsurv.equality_for_all_measures(vec(1, 2), fca)
        assert verdict.refuted
        assert "{1,2}" in verdict.reason
        assert verdict.witness.verify(fca)

    def test_sum_family_proved_on_single_support(self):
        fca = gsurv.Fca.powerset(gsurv.SumOperator(), 3)
        assert gsurv.equality_for_all_measures(vec(0, 7, 0), fca).proved

    def test_max_family_always_proved(self):
        rng = random.Random(0)
        for n in (1, 2, 3, 4):
            fca = gsurv.Fca.powerset(gsurv.MaxOperator(), n)
            for _ in range(10):
                x = tuple(F(rng.randint(0, 3)) for _ in range(n))
                assert gsurv.equality_for_all_measures(x, fca).proved

    def test_missing_chain_complement_refutes(self):
        fca = gsurv.Fca(gsurv.MaxOperator(), frozenset({0, 0b111}), 3)
        verdict = gsurv.equality_for_all_measures(vec(1, 2, 3), fca)
        assert verdict.refuted
        assert "misses" in verdict.reason
        assert verdict.witness.verify(fca)

    def test_proved_vector_agrees_with_comparisons(self, x234):
        # spot check the theorem: proved profile means equality under both a
        # fully injective measure and random measures
        fca = gsurv.Fca.powerset(weighted_operator(), 3)
        assert gsurv.equality_for_all_measures(x234, fca).proved
        measures = [gsurv.strict_binary_measure(3)] + [
            gsurv.random_monotone_measure(3, seed, ["0", "0.25", "0.5", "1"])
            for seed in range(20)
        ]
        for measure in measures:
            assert gsurv.gsf(x234, measure, fca) == gsurv.survival_standard(
                x234, measure
            )

    def test_refuted_matches_exhaustive_small_instances(self):
        # on a small grid the profile decision must match brute-force search
        # over many measures for every vector
        fca = gsurv.Fca.powerset(gsurv.SumOperator(), 2)
        grid = [F(0), F(1), F(2)]
        for a in grid:
            for b in grid:
                x = (a, b)
                verdict = gsurv.equality_for_all_measures(x, fca)
                separated = False
                for seed in range(40):
                    measure = gsurv.random_monotone_measure(
                        2, seed, ["0", "0.25", "0.5", "0.75", "1"]
                    )
                    if gsurv.gsf(x, measure, fca) != gsurv.survival_standard(x, measure):
                        separated = True
                        break
                if verdict.proved:
                    assert not separated
                else:
                    assert verdict.witness.verify(fca)

    def test_consistency_over_exhaustive_small_space(self):
        # exhaustive vectors, n <= 3: the profile verdict agrees with direct
        # comparison under injective-on-chain probe measures and random ones
        from itertools import product as iproduct

        for n in (1, 2, 3):
            binary = gsurv.strict_binary_measure(n)
            randoms = [
                gsurv.random_monotone_measure(n, seed, ["0", "0.25", "0.5", "0.75", "1"])
                for seed in range(8)
            ]
            for op in (gsurv.MaxOperator(), gsurv.SumOperator()):
                fca = gsurv.Fca.powerset(op, n)
                for x in iproduct([F(0), F(1), F(2)], repeat=n):
                    verdict = gsurv.equality_for_all_measures(x, fca)
                    probes = [binary] + randoms
                    jumps = gsurv.level_indices(x).jumps
                    if len(jumps) > 1:
                        values = {
                            k: F(len(jumps) - 1 - j, len(jumps) - 1)
                            for j, k in enumerate(jumps)
                        }
                        probes.append(
                            gsurv.measure_from_max_levels(x, values, strict=True)
                        )
                    separated = any(
                        gsurv.gsf(x, m, fca) != gsurv.survival_standard(x, m)
                        for m in probes
                    )
                    if verdict.proved:
                        assert not separated, (n, op.kind, x)
                    else:
                        assert verdict.witness.verify(fca), (n, op.kind, x)


class TestMonotoneFamilyVariant:
    def test_max_family_proved(self, x234, max_powerset):
        verdict = gsurv.equality_all_measures_monotone_fca(x234, max_powerset)
        assert verdict.proved

    def test_sum_family_two_positive_components_refuted(self, sum_powerset):
        verdict = gsurv.equality_all_measures_monotone_fca(vec(1, 2, 0), sum_powerset)
        assert verdict.refuted
        assert verdict.witness.verify(sum_powerset)

    def test_sum_family_single_support_proved(self, sum_powerset):
        verdict = gsurv.equality_all_measures_monotone_fca(vec(0, 3, 0), sum_powerset)
        assert verdict.proved

    def test_non_monotone_family_is_rejected(self, x234):
        fca = gsurv.Fca.powerset(weighted_operator(), 3)
        with pytest.raises(NotMonotoneFamily):
            gsurv.equality_all_measures_monotone_fca(x234, fca)

    def test_proved_family_matches_max_everywhere(self, max_powerset):
        # when the strong criterion holds on the power set the operator is
        # pointwise the maximum for the probed vector
        x = vec(1, 0, 2)
        verdict = gsurv.equality_all_measures_monotone_fca(x, max_powerset)
        assert verdict.proved
        for mask in range(8):
            assert max_powerset.aggregate(x, mask) == gsurv.agg_max(x, mask)


class TestMaxFamilyCheck:
    def test_max_is_proved_symbolically(self, max_powerset):
        verdict = gsurv.max_family_check(max_powerset, ["0", "1"])
        assert verdict.proved and verdict.probes == 0

    def test_unit_weighted_max_is_proved(self):
        op = gsurv.WeightedMaxOperator((F(1),) * 2, (F(1),) * 2)
        verdict = gsurv.max_family_check(gsurv.Fca.powerset(op, 2), ["0", "1"])
        assert verdict.proved

    def test_sum_is_refuted_with_verifying_witness(self, sum_powerset):
        verdict = gsurv.max_family_check(sum_powerset, ["0", "1", "2", "3"])
        assert verdict.refuted
        assert verdict.probes <= 10_000
        assert verdict.witness.verify(sum_powerset)

    def test_weighted_example_is_refuted(self):
        fca = gsurv.Fca.powerset(weighted_operator(), 3)
        verdict = gsurv.max_family_check(fca, ["0", "1", "2", "3"])
        assert verdict.refuted
        assert verdict.witness.verify(fca)

    def test_max_clone_passes_probes(self):
        clone = gsurv.CustomOperator(gsurv.agg_max, label="max-clone")
        fca = gsurv.Fca.powerset(clone, 3)
        verdict = gsurv.max_family_check(fca, ["0", "1", "2"])
        assert verdict.status is Status.PASSED_PROBES
        assert verdict.probes > 0

    def test_budget_caps_probing(self):
        clone = gsurv.CustomOperator(gsurv.agg_max, label="max-clone")
        fca = gsurv.Fca.powerset(clone, 3)
        verdict = gsurv.max_family_check(fca, ["0", "1", "2"], budget=5)
        assert verdict.status is Status.PASSED_PROBES and verdict.probes == 5

    def test_requires_powerset(self):
        fca = gsurv.Fca.on_chain(gsurv.SumOperator(), vec(1, 2, 3))
        with pytest.raises(CollectionNotPowerset):
            gsurv.max_family_check(fca, ["0", "1"])


class TestMeasureFromMaxLevels:
    def test_reproduces_chain_values(self, x234, example_measure):
        values = {0: "1", 1: "0.7", 2: "0.7", 3: "0"}
        measure = gsurv.measure_from_max_levels(x234, values)
        view = gsurv.sorted_view(x234)
        for k in (0, 1, 2, 3):
            chain_set = view.upper_set(k + 1)
            assert measure[chain_set] == example_measure[chain_set]

    def test_two_valued_assignment(self, x234):
        measure = gsurv.measure_from_max_levels(x234, {0: 1, 1: 1, 2: 1, 3: 0})
        assert set(measure.table) == {F(0), F(1)}
        assert measure[0] == 0

    def test_monotone_for_random_nonincreasing_assignments(self):
        rng = random.Random(5)
        for _ in range(60):
            n = rng.randint(1, 4)
            x = tuple(F(rng.randint(0, 3)) for _ in range(n))
            jumps = gsurv.level_indices(x).jumps
            values, current = {}, F(rng.randint(1, 4))
            for k in jumps[:-1]:
                values[k] = current
                current -= F(rng.randint(0, 2), 4)
                current = max(current, F(1, 8))
            values[jumps[-1]] = F(0)
            if len(jumps) == 1:
                continue  # all-zero vector cannot carry a positive total
            measure = gsurv.measure_from_max_levels(x, values)
            assert gsurv.validate_measure(measure.table, n) == measure

    def test_rejects_increasing_values(self, x234):
        with pytest.raises(ValuesNotMonotone):
            gsurv.measure_from_max_levels(x234, {0: "0.5", 1: "0.7", 2: "0.1", 3: "0"})

    def test_rejects_nonzero_top(self, x234):
        with pytest.raises(ValuesNotMonotone):
            gsurv.measure_from_max_levels(x234, {0: "1", 1: "1", 2: "1", 3: "1"})

    def test_strict_rejects_ties(self, x234):
        with pytest.raises(ValuesNotMonotone):
            gsurv.measure_from_max_levels(
                x234, {0: "1", 1: "0.7", 2: "0.7", 3: "0"}, strict=True
            )

    def test_wrong_keys(self, x234):
        with pytest.raises(ValueError):
            gsurv.measure_from_max_levels(x234, {0: "1", 3: "0"})

    def test_zero_vector_cannot_make_a_measure(self):
        with pytest.raises(TotalNotPositive):
            gsurv.measure_from_max_levels(vec(0, 0), {2: "0"})


class TestSearch:
    def test_sum_family_is_refuted_within_budget(self, sum_powerset):
        verdict = gsurv.search_counterexample(
            sum_powerset, 3, ["0", "1", "2", "3"], ["0", "0.5", "1"],
            budget=10_000, seed=42,
        )
        assert verdict.refuted
        assert verdict.witness.verify(sum_powerset)

    def test_max_family_passes_any_budget(self, max_powerset):
        verdict = gsurv.search_counterexample(
            max_powerset, 3, ["0", "1", "2", "3"], ["0", "0.5", "1"],
            budget=400, seed=7,
        )
        assert verdict.status is Status.PASSED_PROBES
        assert verdict.probes == 400

    def test_weakest_measure_instances_pass(self, sum_powerset):
        verdict = gsurv.search_counterexample(
            sum_powerset, 3, ["0", "1", "2", "3"], ["0", "1"],
            budget=400, seed=3,
            measure_factory=lambda seed: gsurv.weakest_measure(3, "1"),
        )
        assert verdict.status is Status.PASSED_PROBES

    def test_deterministic_in_seed(self, sum_powerset):
        run = lambda: gsurv.search_counterexample(
            sum_powerset, 3, ["0", "1", "2"], ["0", "0.5", "1"], budget=500, seed=11
        )
        a, b = run(), run()
        assert a.status == b.status and a.probes == b.probes
        assert a.witness == b.witness

    def test_large_space_falls_back_to_sampling(self, sum_powerset):
        # 13^3 > budget forces the sampled path; determinism still holds
        grid = [str(k) for k in range(13)]
        a = gsurv.search_counterexample(
            sum_powerset, 3, grid, ["0", "0.5", "1"], budget=50, seed=1
        )
        b = gsurv.search_counterexample(
            sum_powerset, 3, grid, ["0", "0.5", "1"], budget=50, seed=1
        )
        assert a == b

    def test_bad_inputs(self, sum_powerset):
        with pytest.raises(ValueError):
            gsurv.search_counterexample(sum_powerset, 3, [], ["0", "1"], budget=10)
        with pytest.raises(ValueError):
            gsurv.search_counterexample(
                sum_powerset, 3, ["0"], ["0", "1"], budget=0
            )
        with pytest.raises(GridInvalid):
            gsurv.search_counterexample(
                sum_powerset, 3, ["0", "1"], ["1"], budget=10
            )


class TestIndistinguishable:
    def test_reflexive(self, table1, sum_powerset, x234):
        assert gsurv.indistinguishable(x234, x234, table1, sum_powerset)

    def test_permutations_under_symmetric_measure(self):
        # cardinality-only measure: permuting the vector cannot matter
        table = [F(mask.bit_count(), 3) for mask in range(8)]
        symmetric = gsurv.validate_measure(table, 3)
        fca = gsurv.Fca.powerset(gsurv.MaxOperator(), 3)
        x = vec(0, 2, 1)
        for perm in ((1, 0, 2), (2, 1, 0), (1, 2, 0)):
            y = tuple(x[i] for i in perm)
            assert gsurv.indistinguishable(x, y, symmetric, fca)

    def test_sum_aggregation_blurs_tied_profiles(self, ex_main_nu, sum_powerset):
        # (1,2,1) and (1,1,1) induce the same sum-based function under this
        # measure even though the vectors differ
        assert gsurv.indistinguishable(
            vec(1, 2, 1), vec(1, 1, 1), ex_main_nu, sum_powerset
        )

    def test_separated_profiles_differ(self, ex_main_nu, sum_powerset):
        assert not gsurv.indistinguishable(
            vec(1, 2, 1), vec(2, 2, 2), ex_main_nu, sum_powerset
        )
