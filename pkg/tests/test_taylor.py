"""Derivative enumeration, the triangular solve, and series estimates."""

import math
import random
from fractions import Fraction

import pytest

from cliquepart import (
    AlgorithmParams,
    DegenerateSystemError,
    DerivativeVector,
    DomainError,
    Graph,
    Mode,
    ParameterError,
    TruncationPlan,
    WeightMatrix,
    binomial,
    exact_g_of_t,
    exact_partition_function,
    f_from_g,
    g_derivatives,
    order_for_target,
    taylor_log_estimate,
    truncation_error_bound,
    weights_from_graph,
)
from _helpers import (
    exact_log,
    ordered_tuple_derivative,
    random_graph,
    rebuild_g_from_f,
    triangle_plus_isolated,
)


class TestGDerivatives:
    def test_all_ones_matrix_has_zero_derivatives(self):
        d = g_derivatives(WeightMatrix.all_ones(5), 3, 4)
        assert d.g_derivs == (binomial(5, 3), 0, 0, 0, 0)

    def test_first_derivative_closed_form(self):
        # k = 1 reduces to C(n-2, m-2) * sum of (w_uv - 1); balanced here.
        w = weights_from_graph(triangle_plus_isolated(), AlgorithmParams(m=3))
        d = g_derivatives(w, 3, 1)
        assert d.g_derivs[1] == 0
        pair_sum = sum(Fraction(w.weight(u, v)) - 1 for u in range(1, 4) for v in range(u + 1, 5))
        assert d.g_derivs[1] == binomial(2, 1) * pair_sum

    def test_complete_graph_analytic_derivatives(self):
        # K_3 with m = 3: g(t) = (1 + t*delta)^3
        p = AlgorithmParams(m=3)
        w = weights_from_graph(Graph.complete(3), p)
        d = g_derivatives(w, 3, 5)
        delta = p.delta
        assert d.g_derivs == (1, 3 * delta, 6 * delta**2, 6 * delta**3, 0, 0)

    def test_matches_ordered_tuple_enumeration(self):
        # grouping by pair subsets times k! orderings equals the raw tuple sum
        rng = random.Random(7)
        for _ in range(8):
            n = rng.randint(4, 5)
            m = rng.randint(2, min(4, n))
            g = random_graph(rng, n)
            w = weights_from_graph(g, AlgorithmParams(m=m))
            d = g_derivatives(w, m, 3)
            for k in range(4):
                assert d.g_derivs[k] == ordered_tuple_derivative(w, m, k)

    def test_anchored_matches_ordered_tuple_enumeration(self):
        rng = random.Random(17)
        for _ in range(6):
            n = 5
            m = rng.randint(2, 4)
            g = random_graph(rng, n)
            w = weights_from_graph(g, AlgorithmParams(m=m))
            anchor = tuple(rng.sample(range(1, n + 1), rng.randint(1, m)))
            d = g_derivatives(w, m, 2, anchor)
            for k in range(3):
                assert d.g_derivs[k] == ordered_tuple_derivative(w, m, k, anchor)

    def test_anchor_order_zero_is_binomial(self):
        w = weights_from_graph(random_graph(random.Random(3), 6), AlgorithmParams(m=4))
        for size in range(5):
            anchor = tuple(range(1, size + 1))
            d = g_derivatives(w, 4, 0, anchor)
            assert d.g_derivs == (binomial(6 - size, 4 - size),)

    def test_permutation_invariance(self):
        rng = random.Random(23)
        p = AlgorithmParams(m=3)
        for _ in range(10):
            g = random_graph(rng, 6)
            perm = list(range(1, 7))
            rng.shuffle(perm)
            anchor = (2, 5)
            d = g_derivatives(weights_from_graph(g, p), 3, 3, anchor)
            d_perm = g_derivatives(
                weights_from_graph(g.permuted(perm), p),
                3,
                3,
                tuple(perm[v - 1] for v in anchor),
            )
            assert d.g_derivs == d_perm.g_derivs

    def test_finite_difference_agreement(self):
        # central differences of the exact polynomial at rational h
        rng = random.Random(41)
        h = Fraction(1, 1000)
        for _ in range(5):
            g = random_graph(rng, 5)
            w = weights_from_graph(g, AlgorithmParams(m=3))
            d = g_derivatives(w, 3, 2)
            gp = exact_g_of_t(w, 3, h)
            gm = exact_g_of_t(w, 3, -h)
            g0 = exact_g_of_t(w, 3, 0)
            fd1 = (gp - gm) / (2 * h)
            fd2 = (gp - 2 * g0 + gm) / h**2
            assert abs(fd1 - d.g_derivs[1]) < Fraction(1, 10**4)
            assert abs(fd2 - d.g_derivs[2]) < Fraction(1, 10**4)

    def test_float_mode_matches_exact(self):
        rng = random.Random(9)
        g = random_graph(rng, 7)
        w = weights_from_graph(g, AlgorithmParams(m=4))
        de = g_derivatives(w, 4, 5)
        df = g_derivatives(w, 4, 5, mode=Mode.FLOAT)
        for a, b in zip(df.g_derivs, de.g_derivs):
            assert a == pytest.approx(float(b), rel=1e-12, abs=1e-15)

    def test_float_mode_reproducible_across_worker_counts(self):
        g = random_graph(random.Random(31), 7)
        w = weights_from_graph(g, AlgorithmParams(m=4))
        base = g_derivatives(w, 4, 4, mode=Mode.FLOAT, workers=1)
        for workers in (2, 3):
            again = g_derivatives(w, 4, 4, mode=Mode.FLOAT, workers=workers)
            assert again.g_derivs == base.g_derivs

    def test_exact_mode_independent_of_partitioning(self):
        g = random_graph(random.Random(32), 6)
        w = weights_from_graph(g, AlgorithmParams(m=3))
        assert (
            g_derivatives(w, 3, 3, workers=1).g_derivs
            == g_derivatives(w, 3, 3, workers=2).g_derivs
        )

    def test_order_beyond_degree_is_zero_padded(self):
        w = weights_from_graph(Graph.complete(3), AlgorithmParams(m=3))
        d = g_derivatives(w, 3, 9)
        assert d.order == 9 and len(d.g_derivs) == 10
        assert all(x == 0 for x in d.g_derivs[4:])

    def test_parameter_errors(self):
        w = WeightMatrix.all_ones(4)
        with pytest.raises(ParameterError):
            g_derivatives(w, 1, 2)
        with pytest.raises(ParameterError):
            g_derivatives(w, 5, 2)
        with pytest.raises(ParameterError):
            g_derivatives(w, 3, 2, anchor=(1, 2, 3, 4))
        with pytest.raises(ParameterError):
            g_derivatives(w, 3, -1)


class TestTriangularSystem:
    def test_hand_example(self):
        d = DerivativeVector(
            n=5, m=2, anchor=(), order=2, g_derivs=(10, 5, 7), f_derivs=None, mode=Mode.EXACT
        )
        f = f_from_g(d).f_derivs
        assert f == (0, Fraction(1, 2), Fraction(9, 20))

    def test_hand_example_float(self):
        d = DerivativeVector(
            n=5, m=2, anchor=(), order=2, g_derivs=(10.0, 5.0, 7.0), f_derivs=None, mode=Mode.FLOAT
        )
        f = f_from_g(d).f_derivs
        assert f[1] == pytest.approx(0.5) and f[2] == pytest.approx(0.45)

    def test_all_ones_gives_zero_f(self):
        d = f_from_g(g_derivatives(WeightMatrix.all_ones(6), 3, 4))
        assert all(x == 0 for x in d.f_derivs)

    def test_exact_round_trip_random_vectors(self):
        rng = random.Random(55)
        for _ in range(50):
            order = rng.randint(1, 8)
            g = [Fraction(rng.randint(1, 40))]
            g += [Fraction(rng.randint(-30, 30), rng.randint(1, 9)) for _ in range(order)]
            d = DerivativeVector(
                n=9, m=3, anchor=(), order=order,
                g_derivs=tuple(g), f_derivs=None, mode=Mode.EXACT,
            )
            f = f_from_g(d).f_derivs
            assert rebuild_g_from_f(g[0], f, order) == list(g)

    def test_float_round_trip_on_real_instance(self):
        w = weights_from_graph(random_graph(random.Random(12), 7), AlgorithmParams(m=4))
        d = f_from_g(g_derivatives(w, 4, 6, mode=Mode.FLOAT))
        rebuilt = rebuild_g_from_f(d.g_derivs[0], d.f_derivs, 6)
        for a, b in zip(rebuilt, d.g_derivs):
            assert a == pytest.approx(b, rel=1e-10, abs=1e-15)

    def test_degenerate_system(self):
        d = DerivativeVector(
            n=5, m=2, anchor=(), order=1, g_derivs=(0, 3), f_derivs=None, mode=Mode.EXACT
        )
        with pytest.raises(DegenerateSystemError):
            f_from_g(d)


class TestTruncationBound:
    def test_hand_value(self):
        assert truncation_error_bound(3, 2, 4) == Fraction(6, 160)
        assert float(truncation_error_bound(3, 2, 4)) == 0.0375

    def test_rigorous_radius_needs_large_order(self):
        bound = truncation_error_bound(2, Fraction(61, 60), 110)
        assert bound <= Fraction(1, 10)
        # independent evaluation in log space
        expected = math.exp(math.log(60) - math.log(111) - 110 * math.log(61 / 60))
        assert float(bound) == pytest.approx(expected, rel=1e-9)
        assert float(bound) == pytest.approx(0.0877, abs=2e-4)

    def test_strictly_decreasing_in_order(self):
        rng = random.Random(77)
        for _ in range(50):
            m = rng.randint(2, 10)
            beta = 1 + Fraction(rng.randint(1, 60), 60)
            l = rng.randint(0, 12)
            assert truncation_error_bound(m, beta, l + 1) < truncation_error_bound(m, beta, l)

    def test_domain_error_at_beta_one(self):
        with pytest.raises(DomainError):
            truncation_error_bound(3, 1, 2)
        with pytest.raises(DomainError):
            truncation_error_bound(3, 0.5, 2)


class TestOrderForTarget:
    def test_hand_examples(self):
        assert order_for_target(3, 2, 0.0375) == 4
        assert truncation_error_bound(3, 2, 3) > Fraction(375, 10000)
        assert order_for_target(3, 2, 1e9) == 0

    def test_minimality_property(self):
        rng = random.Random(99)
        for _ in range(40):
            m = rng.randint(2, 8)
            beta = 1 + Fraction(rng.randint(1, 120), 120)
            eps = Fraction(rng.randint(1, 50), rng.randint(51, 400))
            l = order_for_target(m, beta, eps)
            assert truncation_error_bound(m, beta, l) <= eps
            if l > 0:
                assert truncation_error_bound(m, beta, l - 1) > eps

    def test_rejects_bad_arguments(self):
        with pytest.raises(ParameterError):
            order_for_target(3, 2, 0)
        with pytest.raises(DomainError):
            order_for_target(3, 1, 0.1)


class TestLogEstimate:
    def test_all_ones_estimate_is_exact_count(self):
        for l in (0, 1, 4):
            d = f_from_g(g_derivatives(WeightMatrix.all_ones(6), 3, l))
            plan = TruncationPlan.for_order(3, Fraction(61, 60), l)
            est = taylor_log_estimate(d, plan)
            assert est.value == math.log(binomial(6, 3))
            assert est.additive_bound == float(plan.additive_bound)

    def test_certificate_on_small_instance(self):
        # oracle value for triangle + isolated vertex, m = 3
        p = AlgorithmParams(m=3)
        w = weights_from_graph(triangle_plus_isolated(), p)
        truth = exact_partition_function(w, 3)
        assert truth == Fraction(1000027, 250000)
        d = f_from_g(g_derivatives(w, 3, 3))
        plan = TruncationPlan.for_order(3, p.beta, 3)
        est = taylor_log_estimate(d, plan)
        assert abs(est.value - exact_log(truth)) <= est.additive_bound

    def test_order_zero_gives_plain_count(self):
        p = AlgorithmParams(m=3)
        w = weights_from_graph(triangle_plus_isolated(), p)
        d = f_from_g(g_derivatives(w, 3, 0))
        est = taylor_log_estimate(d, TruncationPlan.for_order(3, p.beta, 0))
        assert est.value == math.log(binomial(4, 3))
        assert est.additive_bound == float(truncation_error_bound(3, p.beta, 0))

    def test_plan_order_must_fit(self):
        d = f_from_g(g_derivatives(WeightMatrix.all_ones(5), 3, 1))
        with pytest.raises(ParameterError):
            taylor_log_estimate(d, TruncationPlan.for_order(3, 2, 2))

    def test_requires_filled_f(self):
        d = g_derivatives(WeightMatrix.all_ones(5), 3, 1)
        with pytest.raises(ParameterError):
            taylor_log_estimate(d, TruncationPlan.for_order(3, 2, 1))

    def test_large_gap_regime_end_to_end(self):
        # m = 10 on 40 vertices: delta = 0.18/9 = 0.02 and beta = 181/180
        rng = random.Random(8)
        g = random_graph(rng, 40)
        from cliquepart import Regime

        p = AlgorithmParams(m=10, regime=Regime.LARGE_GAP)
        assert p.delta == Fraction(1, 50)
        w = weights_from_graph(g, p)
        d = g_derivatives(w, 10, 1)
        pair_sum = sum(
            Fraction(w.weight(u, v)) - 1 for u in range(1, 40) for v in range(u + 1, 41)
        )
        assert d.g_derivs[0] == binomial(40, 10)
        assert d.g_derivs[1] == binomial(38, 8) * pair_sum
        est = taylor_log_estimate(
            f_from_g(d), TruncationPlan.for_order(10, p.beta, 1)
        )
        assert math.isfinite(est.value) and est.additive_bound > 0

    def test_estimate_converges_with_order(self):
        rng = random.Random(4)
        g = random_graph(rng, 7)
        p = AlgorithmParams(m=4)
        w = weights_from_graph(g, p)
        truth = exact_log(exact_partition_function(w, 4))
        d = f_from_g(g_derivatives(w, 4, 6))
        errors = []
        for l in range(7):
            est = taylor_log_estimate(d, TruncationPlan.for_order(4, p.beta, l))
            errors.append(abs(est.value - truth))
        assert errors[6] < errors[0]
        assert errors[6] < 1e-6
