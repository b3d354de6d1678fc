#include "tdesign/rules1d.hpp"

#include "tdesign/errors.hpp"
#include "tdesign/numeric.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace tdesign::rules1d {
namespace {

// Core of the largest-remainder rounding; empty result means some part
// would be zero at this denominator.
constexpr double kPi = 3.141592653589793238462643383279502884;

std::optional<std::vector<std::int64_t>> try_round(std::span<const double> weights,
                                                   std::int64_t q) {
    const std::size_t n = weights.size();
    std::vector<std::int64_t> parts(n);
    std::vector<double> remainder(n);
    std::int64_t assigned = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double ideal = static_cast<double>(q) * weights[i];
        parts[i] = static_cast<std::int64_t>(std::floor(ideal));
        remainder[i] = ideal - std::floor(ideal);
        assigned += parts[i];
    }
    std::int64_t give = q - assigned;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return remainder[a] > remainder[b];  // stable: ties resolve by index
    });
    for (std::size_t i = 0; give > 0; i = (i + 1) % n, --give) parts[order[i]] += 1;
    for (std::int64_t p : parts)
        if (p <= 0) return std::nullopt;
    return parts;
}

}  // namespace

MeasureTag MeasureTag::gaussian() {
    MeasureTag t;
    t.kind_ = MeasureKind::gaussian;
    return t;
}

MeasureTag MeasureTag::chebyshev() {
    MeasureTag t;
    t.kind_ = MeasureKind::chebyshev;
    return t;
}

MeasureTag MeasureTag::custom(std::vector<Rational> moments) {
    if (moments.empty() || moments.front() != 1)
        throw std::invalid_argument("rules1d: custom measures need moment 0 equal to 1");
    MeasureTag t;
    t.kind_ = MeasureKind::custom;
    t.moments_ = std::move(moments);
    return t;
}

Rational MeasureTag::moment(std::size_t k) const {
    switch (kind_) {
        case MeasureKind::gaussian: return gaussian_moment(k);
        case MeasureKind::chebyshev: return chebyshev_moment(k);
        case MeasureKind::custom:
            if (k >= moments_.size())
                throw std::out_of_range("rules1d: custom measure moment " + std::to_string(k) +
                                        " not stored");
            return moments_[k];
    }
    throw std::logic_error("rules1d: unreachable measure kind");
}

bool MeasureTag::operator==(const MeasureTag& other) const {
    return kind_ == other.kind_ && moments_ == other.moments_;
}

Rational gaussian_moment(std::size_t k) {
    if (k % 2 == 1) return 0;
    const unsigned j = static_cast<unsigned>(k / 2);
    BigInt denom = BigInt(1) << j;
    return Rational(odd_double_factorial(j), denom);
}

Rational chebyshev_moment(std::size_t k) {
    if (k % 2 == 1) return 0;
    const unsigned j = static_cast<unsigned>(k / 2);
    BigInt denom = BigInt(1) << (2 * j);
    return Rational(binomial_exact(2 * j, j), denom);
}

bool Rule1D::is_equi_weighted(double tol) const {
    if (weights.empty()) return false;
    const double even = 1.0 / static_cast<double>(weights.size());
    for (double w : weights)
        if (std::abs(w - even) > tol) return false;
    return true;
}

Rule1D hilbert_kamke_rule(int M) {
    if (M < 3) throw std::invalid_argument("rules1d: the construction needs M >= 3");

    const std::int64_t m = M;
    // direction vector and its exact squared length
    std::vector<std::int64_t> v(static_cast<std::size_t>(M));
    for (int i = 0; i < M - 1; ++i) v[static_cast<std::size_t>(i)] = -(i + 4);
    v[static_cast<std::size_t>(M - 1)] = (m - 1) * (m + 6) / 2;
    std::int64_t norm2 = 0;
    for (std::int64_t c : v) norm2 += c * c;

    const double centroid = static_cast<double>(2 * m + 1) / static_cast<double>(4 * m);
    const double dist =
        std::sqrt(static_cast<double>((2 * m + 1) * (4 * m - 1)) / static_cast<double>(16 * m));
    const double inv_norm = 1.0 / std::sqrt(static_cast<double>(norm2));

    std::vector<double> z(static_cast<std::size_t>(M));
    for (int i = 0; i < M; ++i) {
        z[static_cast<std::size_t>(i)] =
            centroid + dist * static_cast<double>(v[static_cast<std::size_t>(i)]) * inv_norm;
        if (!(z[static_cast<std::size_t>(i)] > 0))
            throw std::logic_error("rules1d: nonpositive squared node");
    }

    Rule1D rule;
    rule.measure = MeasureTag::gaussian();
    rule.exactness_degree = 5;
    rule.nodes.reserve(static_cast<std::size_t>(2 * M + 1));
    rule.nodes.push_back(0.0);
    for (int i = 0; i < M; ++i) {
        const double s = std::sqrt(z[static_cast<std::size_t>(i)]);
        rule.nodes.push_back(s);
        rule.nodes.push_back(-s);  // adjacent +- pairs cancel odd powers exactly
    }
    rule.weights.assign(rule.nodes.size(), 1.0 / static_cast<double>(2 * M + 1));
    return rule;
}

Rule1D chebyshev_rule(int n) {
    if (n < 1) throw std::invalid_argument("rules1d: need at least one node");
    Rule1D rule;
    rule.measure = MeasureTag::chebyshev();
    rule.exactness_degree = 2 * n - 1;
    rule.nodes.resize(static_cast<std::size_t>(n));
    // fill symmetric halves from one cosine evaluation so the node set is
    // exactly antisymmetric (middle node exactly zero for odd n)
    for (int i = 0; i < n / 2; ++i) {
        const double c = std::cos((2.0 * i + 1.0) * kPi / (2.0 * n));
        rule.nodes[static_cast<std::size_t>(i)] = c;
        rule.nodes[static_cast<std::size_t>(n - 1 - i)] = -c;
    }
    if (n % 2 == 1) rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
    rule.weights.assign(static_cast<std::size_t>(n), 1.0 / static_cast<double>(n));
    return rule;
}

WeightSolve solve_weights(std::span<const double> nodes, const MeasureTag& measure) {
    const std::size_t n = nodes.size();
    if (n == 0) throw std::invalid_argument("rules1d: empty node set");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (nodes[i] == nodes[j])
                throw std::invalid_argument("rules1d: duplicate node makes the system singular");

    // lambda_i is the moment functional applied to the i-th Lagrange basis
    // polynomial; build prod (x - z_j), deflate per node
    std::vector<double> master(n + 1, 0.0);
    master[0] = 1.0;
    std::size_t deg = 0;
    for (std::size_t j = 0; j < n; ++j) {
        master[deg + 1] = master[deg];
        for (std::size_t k = deg; k-- > 0;) master[k + 1] = master[k] - nodes[j] * master[k + 1];
        master[0] *= -nodes[j];
        ++deg;
    }

    std::vector<double> m(n);
    for (std::size_t k = 0; k < n; ++k) m[k] = to_double(measure.moment(k));

    WeightSolve out;
    out.weights.resize(n);
    out.admissible = true;
    std::vector<double> li(n);
    for (std::size_t i = 0; i < n; ++i) {
        // synthetic division of the master polynomial by (x - z_i)
        double carry = master[n];
        for (std::size_t k = n; k-- > 0;) {
            li[k] = carry;
            carry = master[k] + nodes[i] * carry;
        }
        double denom = 0.0;  // the deflated polynomial at z_i, via Horner
        for (std::size_t k = n; k-- > 0;) denom = denom * nodes[i] + li[k];
        double num = 0.0;
        for (std::size_t k = 0; k < n; ++k) num += li[k] * m[k];
        out.weights[i] = num / denom;
        if (!(out.weights[i] > 0.0)) out.admissible = false;
    }
    return out;
}

void gauss_hermite(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    if (n < 1) throw std::invalid_argument("rules1d: need at least one node");
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        const double b = std::sqrt(static_cast<double>(k) / 2.0);
        jac(k, k - 1) = b;
        jac(k - 1, k) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("rules1d: eigen decomposition failed");

    nodes.resize(static_cast<std::size_t>(n));
    weights.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        nodes[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
        const double v0 = es.eigenvectors()(0, i);
        weights[static_cast<std::size_t>(i)] = v0 * v0;  // mu_0 = 1
    }
    // enforce the exact +- symmetry the matrix has in exact arithmetic
    for (int i = 0; i < n / 2; ++i) {
        const std::size_t a = static_cast<std::size_t>(i);
        const std::size_t b = static_cast<std::size_t>(n - 1 - i);
        const double node = 0.5 * (nodes[b] - nodes[a]);
        nodes[b] = node;
        nodes[a] = -node;
        const double w = 0.5 * (weights[a] + weights[b]);
        weights[a] = w;
        weights[b] = w;
    }
    if (n % 2 == 1) nodes[static_cast<std::size_t>(n / 2)] = 0.0;
    double total = 0.0;
    for (double w : weights) total += w;
    for (double& w : weights) w /= total;
}

std::vector<std::int64_t> round_largest_remainder(std::span<const double> weights,
                                                  std::int64_t q) {
    if (weights.empty()) throw std::invalid_argument("rules1d: empty weight vector");
    if (q < 1) throw std::invalid_argument("rules1d: denominator must be positive");
    auto parts = try_round(weights, q);
    if (parts) return *parts;

    std::int64_t hint = -1;
    for (std::int64_t cand = static_cast<std::int64_t>(weights.size()); cand <= 1'000'000;
         ++cand) {
        if (try_round(weights, cand)) {
            hint = cand;
            break;
        }
    }
    throw InfeasibleRounding("rules1d: denominator " + std::to_string(q) +
                                 " rounds a weight to zero (smallest feasible: " +
                                 std::to_string(hint) + ")",
                             hint);
}

Rule1D rational_weight_rule(int t, std::int64_t q) {
    if (t < 1) throw std::invalid_argument("rules1d: degree must be >= 1");
    const int n = t + 1;

    std::vector<double> z, w;
    gauss_hermite(n, z, w);
    const std::vector<std::int64_t> parts = round_largest_remainder(w, q);

    Eigen::VectorXd target(n);
    for (int i = 0; i < n; ++i)
        target(i) = static_cast<double>(parts[static_cast<std::size_t>(i)]) /
                    static_cast<double>(q);

    const MeasureTag gauss = MeasureTag::gaussian();
    const double tol_goal = 1e-13;   // aim low ...
    const double tol_accept = 1e-12; // ... accept the documented bound
    double residual = std::numeric_limits<double>::infinity();

    auto weights_at = [&](const std::vector<double>& nodes_now) {
        return solve_weights(nodes_now, gauss);
    };

    for (int iter = 0; iter < 100; ++iter) {
        const WeightSolve ws = weights_at(z);
        Eigen::VectorXd r(n);
        for (int i = 0; i < n; ++i)
            r(i) = target(i) - ws.weights[static_cast<std::size_t>(i)];
        residual = r.lpNorm<Eigen::Infinity>();
        if (residual < tol_goal) break;

        // d(lambda)/d(nodes) = -M1^{-1} M2 M1 M3 with M1 the moment matrix
        // z_i^k, M2 the derivative ladder, M3 = diag(lambda); rank n - 1
        Eigen::MatrixXd m1(n, n), m2 = Eigen::MatrixXd::Zero(n, n), m3 =
            Eigen::MatrixXd::Zero(n, n);
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i) m1(k, i) = ipow(z[static_cast<std::size_t>(i)], k);
        for (int k = 1; k < n; ++k) m2(k, k - 1) = static_cast<double>(k);
        for (int i = 0; i < n; ++i) m3(i, i) = ws.weights[static_cast<std::size_t>(i)];

        const Eigen::MatrixXd rhs = m2 * m1 * m3;
        const Eigen::MatrixXd jac = -m1.partialPivLu().solve(rhs);
        const Eigen::VectorXd step = jac.completeOrthogonalDecomposition().solve(r);

        double alpha = 1.0;
        std::vector<double> trial(z);
        bool moved = false;
        for (int halvings = 0; halvings < 40; ++halvings) {
            for (int i = 0; i < n; ++i)
                trial[static_cast<std::size_t>(i)] = z[static_cast<std::size_t>(i)] +
                                                     alpha * step(i);
            bool distinct = true;
            for (int i = 0; i < n && distinct; ++i)
                for (int j = i + 1; j < n; ++j)
                    if (trial[static_cast<std::size_t>(i)] == trial[static_cast<std::size_t>(j)]) {
                        distinct = false;
                        break;
                    }
            if (distinct) {
                moved = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!moved)
            throw ConvergenceFailure("rules1d: node update collapsed to duplicate nodes",
                                     residual);
        z = trial;
    }

    {
        const WeightSolve ws = weights_at(z);
        double rmax = 0.0;
        for (int i = 0; i < n; ++i)
            rmax = std::max(rmax,
                            std::abs(target(i) - ws.weights[static_cast<std::size_t>(i)]));
        residual = rmax;
    }
    if (!(residual < tol_accept))
        throw ConvergenceFailure("rules1d: Newton stalled at weight residual " +
                                     std::to_string(residual),
                                 residual);

    Rule1D rule;
    rule.measure = gauss;
    rule.exactness_degree = t;
    rule.nodes = z;
    rule.weights.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        rule.weights[static_cast<std::size_t>(i)] =
            static_cast<double>(parts[static_cast<std::size_t>(i)]) / static_cast<double>(q);
    rule.rational_weights = RationalWeights{q, parts};
    return rule;
}

std::int64_t smallest_feasible_denominator(int t, std::int64_t limit) {
    if (t < 1) throw std::invalid_argument("rules1d: degree must be >= 1");
    std::vector<double> z, w;
    gauss_hermite(t + 1, z, w);
    for (std::int64_t q = t + 1; q <= limit; ++q)
        if (try_round(w, q)) return q;
    throw std::runtime_error("rules1d: no feasible denominator up to " + std::to_string(limit));
}

}  // namespace tdesign::rules1d
