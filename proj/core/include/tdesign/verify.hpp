#pragma once

#include "tdesign/budget.hpp"
#include "tdesign/designs.hpp"
#include "tdesign/rational.hpp"
#include "tdesign/rules1d.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace tdesign::verify {

/// Acceptance thresholds for moment comparisons: relative against nonzero
/// exact values, absolute against zero ones.
struct TolerancePolicy {
    double rel_tol = 1e-9;
    double abs_tol = 1e-10;
};

/// Exact moment of x^exponents when every coordinate is distributed by
/// `measure`: the product of the one-dimensional moments.
Rational measure_moment(const rules1d::MeasureTag& measure, std::span<const int> exponents);

/// Weighted sum of x^exponents over the design, streamed in storage order
/// with compensated accumulation. Factored designs use per-coordinate
/// symbol power tables, reproducing the explicit sum bit for bit.
double design_moment(const designs::WeightedDesign& design, std::span<const int> exponents);

struct MonomialDiscrepancy {
    std::vector<int> exponents;
    double exact = 0.0;  // exact moment rounded to double
    double observed = 0.0;
    double abs_error = 0.0;
    double rel_error = 0.0;  // zero when the exact moment is zero
};

struct VerificationReport {
    int degree_checked = 0;
    std::uint64_t monomials_checked = 0;
    bool exhaustive = true;  // false when sampling replaced full enumeration
    bool weights_rescaled = false;
    double max_abs_error = 0.0;
    double max_rel_error = 0.0;
    std::vector<MonomialDiscrepancy> worst;  // up to ten, worst first
    bool passed = false;
    TolerancePolicy policy;
};

/// Compares design moments against exact measure moments for every monomial
/// of total degree <= t. When the monomial count exceeds
/// budget.monomial_sample_cap, a fixed-seed uniform sample of that size is
/// checked instead and the report is marked non-exhaustive. `threads` splits
/// the monomial list across workers; the report does not depend on the
/// thread count.
VerificationReport verify_design(const designs::WeightedDesign& design, int t,
                                 const TolerancePolicy& policy = {},
                                 const Budget& budget = {}, int threads = 1);

/// Average of the first coordinate raised to the 2r-th power under the
/// uniform measure on the unit sphere in R^d:
/// (2r-1)!! / (d (d+2) ... (d+2r-2)).
Rational sphere_constant(int d, int r);

/// Exact uniform-sphere average of a monomial: zero when any exponent is
/// odd, otherwise prod (e_i - 1)!! / prod_{j<deg/2} (d + 2j).
Rational sphere_monomial_moment(int d, std::span<const int> exponents);

/// Compares the spherical design's averages of every monomial of total
/// degree exactly 2r against the uniform-sphere values.
VerificationReport verify_spherical_design(const designs::SphericalDesign& sph, int r,
                                           const TolerancePolicy& policy = {});

struct HilbertReport {
    int r = 0;
    std::uint64_t points_tested = 0;
    double max_rel_error = 0.0;
    bool passed = false;
};

/// Tests c_{d,r} (X_1^2 + ... + X_d^2)^r = sum_i w_i <y_i, X>^{2r} at the d
/// standard basis vectors and `samples` fixed-seed pseudorandom vectors.
/// Throws when a design row is off the unit sphere by more than 1e-10.
HilbertReport check_hilbert_identity(const designs::SphericalDesign& sph, int r,
                                     std::uint64_t samples, double rel_tol = 1e-10);

/// Row i is (w_i / c_{d,r})^{1/(2r)} y_i; the map x -> (<row_i, x>)_i then
/// carries the Euclidean norm of R^d onto the 2r-norm of R^N.
struct Embedding {
    std::size_t dim = 0;
    int r = 0;
    std::vector<double> rows;  // N x dim, row-major

    std::size_t size() const { return dim == 0 ? 0 : rows.size() / dim; }
};

Embedding embedding_map(const designs::SphericalDesign& sph, int r);

/// The 2r-norm of the embedded image of x.
double embedded_norm(const Embedding& e, std::span<const double> x);

/// `count` vectors with entries uniform in [-1, 1], from a hand-rolled
/// generator so every platform draws identical values. Row-major.
std::vector<double> seeded_test_vectors(std::size_t count, std::size_t dim,
                                        std::uint64_t seed);

struct OrbitComparison {
    int degree = 0;
    std::vector<int> type;       // exponent partition, largest first
    std::vector<int> positions;  // coordinates the exponents land on
    double orbit_average = 0.0;
    double symmetric_average = 0.0;
    double abs_diff = 0.0;
};

struct OrbitBoundaryReport {
    int degree_checked = 0;
    double threshold = 0.0;
    std::vector<double> max_abs_diff_by_degree;  // index = degree, entry 0 unused
    std::vector<OrbitComparison> worst_by_degree;
    int first_violation_degree = -1;  // -1 when all degrees stay under threshold
};

/// For every exponent partition of each degree 1..max_degree and every
/// ordered choice of distinct coordinates, compares the orbit average of
/// the monomial under z against the symmetric average over all coordinate
/// choices. Reports the first degree whose worst deviation exceeds the
/// threshold.
OrbitBoundaryReport compare_orbit_to_symmetric(const designs::PermSet& z,
                                               std::span<const double> x, int max_degree,
                                               double threshold = 1e-9);

}  // namespace tdesign::verify
