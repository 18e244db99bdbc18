"""Density functional estimates, the decision rule, and greedy extraction."""

import math
import random
from fractions import Fraction

import pytest

from cliquepart import (
    AlgorithmParams,
    ApproxLog,
    DecideRefusedError,
    Graph,
    MAX_DECIDE_CERTIFICATE,
    Mode,
    ParameterError,
    Verdict,
    binomial,
    classify_density_estimate,
    decide_density,
    density_functional_estimate,
    density_histogram,
    exact_restricted_pf,
    extract_dense_subset,
    log_weight_curve,
    order_for_target,
    weights_from_graph,
)
from _helpers import exact_log, random_graph


class TestApproxLog:
    def test_certificate_semantics(self):
        est = ApproxLog(1.0, 0.25)
        assert est.lower == 0.75 and est.upper == 1.25
        assert est.relative_error() == pytest.approx(math.expm1(0.25))

    def test_rejects_negative_bound(self):
        with pytest.raises(ParameterError):
            ApproxLog(1.0, -0.1)


class TestDensityEstimate:
    def test_complete_graph_against_oracle(self):
        # every subset of K_n has density 1, so the functional is C(n,m)*e^(gamma*m)
        p = AlgorithmParams(m=2)
        est = density_functional_estimate(Graph.complete(3), p, 12)
        truth = math.log(3) + 0.12
        assert abs(est.value - truth) < 1e-9
        assert abs(est.value - truth) <= est.additive_bound

    def test_empty_graph_against_oracle(self):
        # all 3 subsets carry the minimum weight w(0)
        p = AlgorithmParams(m=2)
        est = density_functional_estimate(Graph.empty(3), p, 12)
        truth = math.log(3) + log_weight_curve(0, p)
        assert abs(est.value - truth) < 1e-9

    def test_matches_exact_histogram_density(self):
        rng = random.Random(14)
        for _ in range(8):
            n = rng.randint(4, 7)
            m = rng.randint(2, 4)
            if m > n:
                continue
            g = random_graph(rng, n)
            p = AlgorithmParams(m=m)
            est = density_functional_estimate(g, p, 8)
            truth = density_histogram(g, m).log_density(p)
            assert abs(est.value - truth) <= est.additive_bound
            assert abs(est.value - truth) < 1e-5

    def test_all_ones_equivalent(self):
        # with delta forced to 0 the estimate is ln C(n,m) + gamma*m exactly
        from cliquepart import TruncationPlan, WeightMatrix, f_from_g, g_derivatives, taylor_log_estimate

        p = AlgorithmParams(m=3)
        d = f_from_g(g_derivatives(WeightMatrix.all_ones(6), 3, 4))
        est = taylor_log_estimate(d, TruncationPlan.for_order(3, p.beta, 4))
        prefactor = float(p.gamma * p.m)  # the (1+delta)^{-M} factor vanishes at delta=0
        assert est.value + prefactor == math.log(binomial(6, 3)) + float(p.gamma * p.m)

    def test_float_mode_agrees(self):
        g = random_graph(random.Random(6), 7)
        p = AlgorithmParams(m=3)
        exact = density_functional_estimate(g, p, 6)
        fl = density_functional_estimate(g, p, 6, mode=Mode.FLOAT)
        assert fl.value == pytest.approx(exact.value, abs=1e-12)


class TestDecisionRule:
    def test_synthetic_exists_branch(self):
        p = AlgorithmParams(m=4)
        n = 12
        threshold = math.log(binomial(n, 4)) + log_weight_curve(0.5, p)
        est = ApproxLog(threshold + math.log(1.45) + 0.01, 0.05)
        verdict = classify_density_estimate(est, n, p, 0.5, 0.25)
        assert verdict.verdict is Verdict.EXISTS_DENSE
        assert verdict.threshold_log == pytest.approx(threshold)

    def test_synthetic_not_many_branch(self):
        p = AlgorithmParams(m=4)
        n = 12
        threshold = math.log(binomial(n, 4)) + log_weight_curve(0.5, p)
        est = ApproxLog(threshold + math.log(1.45) - 0.01, 0.05)
        verdict = classify_density_estimate(est, n, p, 0.5, 0.25)
        assert verdict.verdict is Verdict.NOT_MANY_DENSE

    def test_refusal_on_weak_certificate(self):
        p = AlgorithmParams(m=4)
        est = ApproxLog(1.0, math.log(1.1) + 0.05)
        with pytest.raises(DecideRefusedError):
            classify_density_estimate(est, 12, p, 0.5, 0.25)

    def test_refusal_through_decide(self):
        with pytest.raises(DecideRefusedError):
            decide_density(Graph.complete(8), AlgorithmParams(m=4), 0.5, 0.25, l=1)

    def test_threshold_validation(self):
        p = AlgorithmParams(m=4)
        est = ApproxLog(1.0, 0.01)
        with pytest.raises(ParameterError):
            classify_density_estimate(est, 12, p, -0.1, 0.2)
        with pytest.raises(ParameterError):
            classify_density_estimate(est, 12, p, 0.5, 0.0)
        with pytest.raises(ParameterError):
            classify_density_estimate(est, 12, p, 0.9, 0.2)

    def test_default_order_meets_certificate(self):
        verdict = decide_density(Graph.complete(6), AlgorithmParams(m=3), 0.5, 0.25, mode=Mode.FLOAT)
        assert verdict.estimate.additive_bound <= MAX_DECIDE_CERTIFICATE + 1e-12

    def test_complete_k8_instance(self):
        # Exact functional of K_8 at m=4 is C(8,4) * e^(4*gamma) = 1.271... * C;
        # the no-side threshold times 1.45 is 1.45 * w(0.5) * C = 1.635... * C,
        # so the faithful verdict here is NOT_MANY_DENSE, and it is sound:
        # there are 70 subsets of density 1 and the promise bound is
        # 2 * exp(-gamma*eps*m) * C(8,4) = 124.2.
        g = Graph.complete(8)
        p = AlgorithmParams(m=4)
        verdict = decide_density(g, p, 0.5, 0.5, mode=Mode.FLOAT)
        truth = density_histogram(g, 4).log_density(p)
        assert abs(verdict.estimate.value - truth) <= verdict.estimate.additive_bound
        expected_exists = truth > verdict.threshold_log + math.log(1.45)
        assert expected_exists is False
        assert verdict.verdict is Verdict.NOT_MANY_DENSE
        dense_count = density_histogram(g, 4).count_with_density_at_least(1)
        promise = 2 * math.exp(-float(p.gamma) * 0.5 * 4) * binomial(8, 4)
        assert dense_count < promise

    def test_empty_graph_instance(self):
        g = Graph.empty(8)
        p = AlgorithmParams(m=4)
        verdict = decide_density(g, p, 0.5, 0.25, mode=Mode.FLOAT)
        assert verdict.verdict is Verdict.NOT_MANY_DENSE
        # soundness side: zero subsets of density >= 0.75
        assert density_histogram(g, 4).count_with_density_at_least(0.75) == 0

    def test_decide_equals_estimate_plus_classify(self):
        rng = random.Random(47)
        for _ in range(10):
            g = random_graph(rng, 6)
            p = AlgorithmParams(m=3)
            l = order_for_target(3, p.beta, MAX_DECIDE_CERTIFICATE)
            est = density_functional_estimate(g, p, l, mode=Mode.FLOAT)
            via_parts = classify_density_estimate(est, g.n, p, 0.25, 0.25)
            direct = decide_density(g, p, 0.25, 0.25, mode=Mode.FLOAT)
            assert direct.verdict is via_parts.verdict
            assert direct.estimate.value == via_parts.estimate.value

    def test_soundness_both_ways_small_sweep(self):
        # spot version of the exhaustive acceptance sweep
        rng = random.Random(53)
        p = AlgorithmParams(m=3)
        for _ in range(25):
            g = random_graph(rng, 6, p=rng.random())
            hist = density_histogram(g, 3)
            for sigma in (0.0, 0.25, 0.5, 0.75):
                verdict = decide_density(g, p, sigma, 0.25, mode=Mode.FLOAT)
                if verdict.verdict is Verdict.EXISTS_DENSE:
                    assert hist.count_with_density_at_least(Fraction(str(sigma))) >= 1
                else:
                    bound = 2 * math.exp(-float(p.gamma) * 0.25 * 3) * binomial(6, 3)
                    assert hist.count_with_density_at_least(Fraction(str(sigma)) + Fraction(1, 4)) < bound


class TestExtraction:
    def test_planted_clique(self):
        g = Graph(8, [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)])
        subset, certificate = extract_dense_subset(g, AlgorithmParams(m=4), 3)
        assert subset == (1, 2, 3, 4)
        assert g.density(subset) == 1
        truth = exact_log(exact_restricted_pf(weights_from_graph(g, AlgorithmParams(m=4)), 4, subset))
        assert abs(certificate.value - truth) <= certificate.additive_bound

    def test_complete_graph_ties_break_to_smallest(self):
        subset, _ = extract_dense_subset(Graph.complete(6), AlgorithmParams(m=3), 2)
        assert subset == (1, 2, 3)

    def test_empty_graph_lexicographic(self):
        subset, _ = extract_dense_subset(Graph.empty(6), AlgorithmParams(m=3), 2)
        assert subset == (1, 2, 3)

    def test_average_density_guarantee_spot(self):
        # exp(gamma*m*density(S)) >= Density/(2*C(n,m)), oracle-checked
        rng = random.Random(202)
        for _ in range(15):
            n = rng.randint(5, 8)
            m = rng.randint(2, 4)
            g = random_graph(rng, n, p=rng.random())
            p = AlgorithmParams(m=m)
            subset, _ = extract_dense_subset(g, p, 3, mode=Mode.FLOAT)
            lhs = float(p.gamma) * m * float(g.density(subset))
            rhs = density_histogram(g, m).log_density(p) - math.log(2) - math.log(binomial(n, m))
            assert lhs >= rhs

    def test_float_and_exact_agree_on_choice(self):
        rng = random.Random(77)
        for _ in range(5):
            g = random_graph(rng, 7)
            p = AlgorithmParams(m=3)
            exact_subset, _ = extract_dense_subset(g, p, 3)
            float_subset, _ = extract_dense_subset(g, p, 3, mode=Mode.FLOAT)
            assert exact_subset == float_subset


def test_density_monotone_under_edge_addition():
    # adding an edge never decreases the exact functional
    rng = random.Random(88)
    for _ in range(10):
        n = rng.randint(4, 7)
        m = rng.randint(2, min(4, n))
        p = AlgorithmParams(m=m)
        edges = []
        free = [(u, v) for u in range(1, n) for v in range(u + 1, n + 1)]
        rng.shuffle(free)
        previous = density_histogram(Graph(n, edges), m).tilted_mass(p.delta)
        for edge in free:
            edges.append(edge)
            current = density_histogram(Graph(n, edges), m).tilted_mass(p.delta)
            assert current >= previous
            previous = current
