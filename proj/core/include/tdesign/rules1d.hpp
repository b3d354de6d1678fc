#pragma once

#include "tdesign/rational.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace tdesign::rules1d {

/// Probability measures a rule can integrate against. `gaussian` is the
/// weight exp(-w^2)/sqrt(pi) on the line; `chebyshev` is the equilibrium
/// density 1/(pi sqrt(1-w^2)) on (-1, 1); `custom` carries an explicit
/// moment sequence (moment 0 must be 1).
enum class MeasureKind { gaussian, chebyshev, custom };

class MeasureTag {
public:
    static MeasureTag gaussian();
    static MeasureTag chebyshev();
    static MeasureTag custom(std::vector<Rational> moments);

    MeasureKind kind() const noexcept { return kind_; }

    /// k-th raw moment, exact. Throws for custom tags when k is beyond the
    /// stored sequence.
    Rational moment(std::size_t k) const;

    const std::vector<Rational>& custom_moments() const noexcept { return moments_; }

    bool operator==(const MeasureTag& other) const;

private:
    MeasureKind kind_ = MeasureKind::gaussian;
    std::vector<Rational> moments_;
};

/// Gaussian raw moments: odd vanish, even 2j equal (2j-1)!!/2^j.
Rational gaussian_moment(std::size_t k);

/// Equilibrium raw moments: odd vanish, even 2j equal C(2j, j)/4^j.
Rational chebyshev_moment(std::size_t k);

/// Weights known exactly as parts[i]/denom (all parts positive integers
/// summing to denom). Kept alongside the float weights so downstream
/// multiset constructions stay exact.
struct RationalWeights {
    std::int64_t denom = 0;
    std::vector<std::int64_t> parts;
};

/// One-dimensional quadrature rule: nodes with positive weights summing to
/// one, exact for polynomials through exactness_degree against `measure`.
struct Rule1D {
    std::vector<double> nodes;
    std::vector<double> weights;
    MeasureTag measure;
    int exactness_degree = 0;
    std::optional<RationalWeights> rational_weights;

    std::size_t size() const { return nodes.size(); }
    bool is_equi_weighted(double tol = 1e-12) const;
};

/// Equi-weighted Gaussian rule with 2M + 1 nodes {0, +-sqrt(Z_i)} exact
/// through degree 5, for any M >= 3. The Z_i solve sum Z = (2M+1)/4 and
/// sum Z^2 = (6M+3)/8 in closed form: starting from the centroid
/// Q = ((2M+1)/(4M), ...), step a distance sqrt((2M+1)(4M-1)/(16M)) along
/// the direction v = (-4, -5, ..., -(M+2), (M-1)(M+6)/2), whose squared
/// length is M(M-1)(3M^2+37M+106)/12. All Z_i stay positive, with
/// Z_M > Z_1 > Z_2 > ... > Z_{M-1}.
Rule1D hilbert_kamke_rule(int M);

/// Equi-weighted equilibrium-measure rule: nodes cos((2i-1)pi/(2n)),
/// i = 1..n, weights 1/n, exact through degree 2n - 1.
Rule1D chebyshev_rule(int n);

struct WeightSolve {
    std::vector<double> weights;
    bool admissible = false;  // all weights strictly positive
};

/// Unique weights matching the first n moments of `measure` on the given
/// distinct nodes (square Vandermonde system). Flags admissibility rather
/// than failing on nonpositive weights.
WeightSolve solve_weights(std::span<const double> nodes, const MeasureTag& measure);

/// Gauss-Hermite nodes and weights for the normalized Gaussian measure
/// (Golub-Welsch on the Jacobi matrix). Nodes ascending, exactly
/// antisymmetric; weights sum to one.
void gauss_hermite(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Largest-remainder rounding of q * weights[i] constrained to positive
/// integer parts summing to q. Throws InfeasibleRounding (with the smallest
/// feasible denominator as a hint) when some part would round to zero.
std::vector<std::int64_t> round_largest_remainder(std::span<const double> weights,
                                                  std::int64_t q);

/// Gaussian rule with t + 1 nodes and exact rational weights q_i/q, exact
/// through degree t. Starts from the Gauss-Hermite rule, rounds its weights
/// to multiples of 1/q, then moves the nodes by a damped least-squares
/// Newton iteration (weight residual below 1e-12 within 100 steps, else
/// ConvergenceFailure).
Rule1D rational_weight_rule(int t, std::int64_t q);

/// Smallest denominator >= t + 1 for which the rounding step is feasible.
/// Scans upward; throws std::runtime_error past `limit`.
std::int64_t smallest_feasible_denominator(int t, std::int64_t limit = 1'000'000);

}  // namespace tdesign::rules1d
