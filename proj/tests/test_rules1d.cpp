#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "tdesign/errors.hpp"
#include "tdesign/rational.hpp"
#include "tdesign/rules1d.hpp"

#include <cmath>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <vector>

using tdesign::Rational;
using namespace tdesign::rules1d;

namespace {

double rule_moment(const Rule1D& r, int k) {
    double acc = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) acc += r.weights[i] * std::pow(r.nodes[i], k);
    return acc;
}

double rel_gap(double got, double want) {
    if (want == 0.0) return std::abs(got);
    return std::abs(got - want) / std::abs(want);
}

}  // namespace

TEST_CASE("gaussian moments follow the double-factorial recurrence") {
    CHECK(gaussian_moment(0) == Rational(1));
    CHECK(gaussian_moment(2) == Rational(1, 2));
    CHECK(gaussian_moment(4) == Rational(3, 4));
    CHECK(gaussian_moment(6) == Rational(15, 8));
    for (std::size_t k = 1; k < 30; k += 2) CHECK(gaussian_moment(k) == Rational(0));
    for (std::size_t j = 2; j <= 14; ++j)
        CHECK(gaussian_moment(2 * j) ==
              gaussian_moment(2 * j - 2) * Rational(2 * j - 1) / 2);
}

TEST_CASE("equilibrium moments are central binomial ratios") {
    CHECK(chebyshev_moment(0) == Rational(1));
    CHECK(chebyshev_moment(2) == Rational(1, 2));
    CHECK(chebyshev_moment(4) == Rational(3, 8));
    CHECK(chebyshev_moment(6) == Rational(5, 16));
    for (std::size_t k = 1; k < 30; k += 2) CHECK(chebyshev_moment(k) == Rational(0));

    // cross-check against a fine quadrature of the density itself
    const Rule1D fine = chebyshev_rule(64);
    for (int k = 0; k <= 16; ++k) {
        const double exact =
            tdesign::to_double(chebyshev_moment(static_cast<std::size_t>(k)));
        CHECK(std::abs(rule_moment(fine, k) - exact) < 1e-13);
    }
}

TEST_CASE("measure tags expose exact moments and compare by content") {
    const MeasureTag g = MeasureTag::gaussian();
    CHECK(g.moment(4) == Rational(3, 4));
    CHECK(g == MeasureTag::gaussian());
    CHECK_FALSE(g == MeasureTag::chebyshev());

    const MeasureTag c = MeasureTag::custom({Rational(1), Rational(0), Rational(1, 3)});
    CHECK(c.moment(2) == Rational(1, 3));
    CHECK_THROWS_AS((void)c.moment(3), std::out_of_range);
    CHECK_THROWS_AS((void)MeasureTag::custom({Rational(2)}), std::invalid_argument);
}

TEST_CASE("the equi-weighted gaussian rule matches its closed form at M = 3") {
    const Rule1D r = hilbert_kamke_rule(3);
    REQUIRE(r.size() == 7);
    CHECK(r.exactness_degree == 5);
    CHECK(r.is_equi_weighted());
    for (double w : r.weights) CHECK(w == doctest::Approx(1.0 / 7.0).epsilon(1e-14));
    CHECK(r.nodes[0] == 0.0);

    // squared half-nodes, largest last
    std::vector<double> Z;
    for (std::size_t i = 1; i < r.size(); i += 2) Z.push_back(r.nodes[i] * r.nodes[i]);
    REQUIRE(Z.size() == 3);
    CHECK(Z[0] == doctest::Approx(0.124661).epsilon(1e-4));
    CHECK(Z[1] == doctest::Approx(0.009993).epsilon(1e-4));
    CHECK(Z[2] == doctest::Approx(1.615345).epsilon(1e-4));
    CHECK(Z[0] + Z[1] + Z[2] == doctest::Approx(7.0 / 4.0).epsilon(1e-14));
    CHECK(Z[0] * Z[0] + Z[1] * Z[1] + Z[2] * Z[2] == doctest::Approx(21.0 / 8.0).epsilon(1e-14));
}

TEST_CASE("the closed-form direction vector has the advertised length") {
    for (int M = 3; M <= 12; ++M) {
        double norm2 = 0.0;
        for (int i = 0; i < M - 1; ++i) norm2 += double(i + 4) * (i + 4);
        const double last = (M - 1.0) * (M + 6.0) / 2.0;
        norm2 += last * last;
        const double formula = M * (M - 1.0) * (3.0 * M * M + 37.0 * M + 106.0) / 12.0;
        CHECK(norm2 == doctest::Approx(formula).epsilon(1e-13));
    }
}

TEST_CASE("the equi-weighted gaussian rule is degree-5 exact for every M") {
    for (int M = 3; M <= 20; ++M) {
        const Rule1D r = hilbert_kamke_rule(M);
        REQUIRE(r.size() == static_cast<std::size_t>(2 * M + 1));

        std::set<double> distinct(r.nodes.begin(), r.nodes.end());
        CHECK(distinct.size() == r.size());
        for (std::size_t i = 1; i < r.size(); i += 2) CHECK(r.nodes[i] > 0.0);

        for (int k = 0; k <= 5; ++k) {
            const double want =
                tdesign::to_double(gaussian_moment(static_cast<std::size_t>(k)));
            CHECK(rel_gap(rule_moment(r, k), want) < 1e-12);
        }
    }
    CHECK_THROWS_AS((void)hilbert_kamke_rule(2), std::invalid_argument);
}

TEST_CASE("equilibrium nodes are the odd cosine grid") {
    const Rule1D one = chebyshev_rule(1);
    REQUIRE(one.size() == 1);
    CHECK(std::abs(one.nodes[0]) < 1e-16);
    CHECK(one.weights[0] == 1.0);
    CHECK(one.exactness_degree == 1);

    const Rule1D three = chebyshev_rule(3);
    const double s = std::sqrt(3.0) / 2.0;
    CHECK(three.nodes[0] == doctest::Approx(s).epsilon(1e-15));
    CHECK(std::abs(three.nodes[1]) < 1e-16);
    CHECK(three.nodes[2] == doctest::Approx(-s).epsilon(1e-15));
    CHECK(three.exactness_degree == 5);

    for (int n = 1; n <= 16; ++n) {
        const Rule1D r = chebyshev_rule(n);
        CHECK(r.is_equi_weighted());
        for (int k = 0; k <= 2 * n - 1; ++k) {
            const double want =
                tdesign::to_double(chebyshev_moment(static_cast<std::size_t>(k)));
            CHECK(std::abs(rule_moment(r, k) - want) < 1e-13);
        }
    }
    CHECK_THROWS_AS((void)chebyshev_rule(0), std::invalid_argument);
}

TEST_CASE("weight solving recovers known rules and flags inadmissible ones") {
    {
        const std::vector<double> nodes = {-1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)};
        const WeightSolve ws = solve_weights(nodes, MeasureTag::gaussian());
        REQUIRE(ws.admissible);
        CHECK(ws.weights[0] == doctest::Approx(0.5).epsilon(1e-14));
        CHECK(ws.weights[1] == doctest::Approx(0.5).epsilon(1e-14));
    }
    {
        const double s = std::sqrt(1.5);
        const std::vector<double> nodes = {-s, 0.0, s};
        const WeightSolve ws = solve_weights(nodes, MeasureTag::gaussian());
        REQUIRE(ws.admissible);
        CHECK(ws.weights[0] == doctest::Approx(1.0 / 6.0).epsilon(1e-13));
        CHECK(ws.weights[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-13));
        CHECK(ws.weights[2] == doctest::Approx(1.0 / 6.0).epsilon(1e-13));
    }
    {
        const std::vector<double> nodes = {0.0, 1.0};
        const WeightSolve ws = solve_weights(nodes, MeasureTag::gaussian());
        CHECK_FALSE(ws.admissible);  // forced weights (1, 0)
        CHECK(ws.weights[0] == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(std::abs(ws.weights[1]) < 1e-13);
    }
    const std::vector<double> dup = {0.5, 0.5};
    CHECK_THROWS_AS((void)solve_weights(dup, MeasureTag::gaussian()), std::invalid_argument);
}

TEST_CASE("solved weights reproduce the moments they were fit to") {
    for (int n = 2; n <= 10; ++n) {
        std::vector<double> nodes;
        for (int i = 0; i < n; ++i) nodes.push_back(-1.2 + 2.4 * i / (n - 1.0));
        const WeightSolve ws = solve_weights(nodes, MeasureTag::gaussian());
        for (int k = 0; k < n; ++k) {
            double acc = 0.0;
            for (int i = 0; i < n; ++i) acc += ws.weights[i] * std::pow(nodes[i], k);
            const double want =
                tdesign::to_double(gaussian_moment(static_cast<std::size_t>(k)));
            CHECK(std::abs(acc - want) < 1e-10 * std::max(1.0, std::abs(want)));
        }
    }
}

TEST_CASE("gauss-hermite rules match their reference values") {
    std::vector<double> nodes;
    std::vector<double> weights;

    gauss_hermite(2, nodes, weights);
    CHECK(nodes[0] == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-14));
    CHECK(nodes[1] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
    CHECK(weights[0] == doctest::Approx(0.5).epsilon(1e-14));

    gauss_hermite(3, nodes, weights);
    CHECK(nodes[0] == doctest::Approx(-std::sqrt(1.5)).epsilon(1e-14));
    CHECK(std::abs(nodes[1]) < 1e-15);
    CHECK(weights[0] == doctest::Approx(1.0 / 6.0).epsilon(1e-13));
    CHECK(weights[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-13));

    gauss_hermite(4, nodes, weights);
    CHECK(weights[0] == doctest::Approx(0.045875854768068).epsilon(1e-12));
    CHECK(nodes[0] == doctest::Approx(-nodes[3]).epsilon(1e-14));

    for (int n = 1; n <= 10; ++n) {
        gauss_hermite(n, nodes, weights);
        for (int k = 0; k <= 2 * n - 1; ++k) {
            // odd moments cancel large symmetric terms, so the attainable
            // accuracy is set by the largest term, not by the exact value 0
            double acc = 0.0;
            double scale = 1.0;
            for (int i = 0; i < n; ++i) {
                const double term = weights[i] * std::pow(nodes[i], k);
                acc += term;
                scale = std::max(scale, std::abs(term));
            }
            const double want =
                tdesign::to_double(gaussian_moment(static_cast<std::size_t>(k)));
            CHECK(std::abs(acc - want) < 1e-12 * scale);
        }
    }
}

TEST_CASE("largest-remainder rounding preserves the total and positivity") {
    const std::vector<double> w = {1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0};
    CHECK(round_largest_remainder(w, 6) == std::vector<std::int64_t>{1, 4, 1});
    CHECK(round_largest_remainder(w, 7) == std::vector<std::int64_t>{1, 5, 1});

    const std::vector<double> skew = {0.05, 0.9, 0.05};
    CHECK_THROWS_AS((void)round_largest_remainder(skew, 5), tdesign::InfeasibleRounding);
    try {
        (void)round_largest_remainder(skew, 5);
    } catch (const tdesign::InfeasibleRounding& e) {
        CHECK(e.min_feasible_q >= 6);
    }
}

TEST_CASE("rational-weight rules carry exact parts and exact moments") {
    const Rule1D six = rational_weight_rule(2, 6);
    REQUIRE(six.rational_weights.has_value());
    CHECK(six.rational_weights->denom == 6);
    CHECK(six.rational_weights->parts == std::vector<std::int64_t>{1, 4, 1});
    CHECK(six.nodes[0] == doctest::Approx(-std::sqrt(1.5)).epsilon(1e-12));
    CHECK_FALSE(six.is_equi_weighted());

    const Rule1D seven = rational_weight_rule(2, 7);
    REQUIRE(seven.rational_weights.has_value());
    CHECK(seven.rational_weights->parts == std::vector<std::int64_t>{1, 5, 1});
    const double half_sqrt7 = std::sqrt(7.0) / 2.0;
    CHECK(std::abs(seven.nodes[0] + half_sqrt7) < 1e-10);
    CHECK(std::abs(seven.nodes[2] - half_sqrt7) < 1e-10);
    CHECK(std::abs(seven.nodes[1]) < 1e-10);

    for (const Rule1D& r : {six, seven, rational_weight_rule(3, 16)}) {
        double wsum = 0.0;
        for (std::size_t i = 0; i < r.size(); ++i) {
            CHECK(r.weights[i] ==
                  double(r.rational_weights->parts[i]) / double(r.rational_weights->denom));
            CHECK(r.weights[i] > 0.0);
            wsum += r.weights[i];
        }
        CHECK(wsum == doctest::Approx(1.0).epsilon(1e-14));
        for (int k = 0; k <= r.exactness_degree; ++k) {
            const double want =
                tdesign::to_double(gaussian_moment(static_cast<std::size_t>(k)));
            CHECK(std::abs(rule_moment(r, k) - want) < 1e-10);
        }
    }
}

TEST_CASE("infeasible denominators are rejected with a usable hint") {
    CHECK_THROWS_AS((void)rational_weight_rule(3, 13), tdesign::InfeasibleRounding);
    try {
        (void)rational_weight_rule(3, 13);
    } catch (const tdesign::InfeasibleRounding& e) {
        CHECK(e.min_feasible_q == 12);
    }
    CHECK(smallest_feasible_denominator(3) == 12);
    CHECK(rational_weight_rule(3, 12).rational_weights->parts ==
          std::vector<std::int64_t>{1, 5, 5, 1});
    CHECK(rational_weight_rule(3, 16).rational_weights->parts ==
          std::vector<std::int64_t>{1, 7, 7, 1});
    CHECK_THROWS_AS((void)rational_weight_rule(2, 2), tdesign::InfeasibleRounding);
}
