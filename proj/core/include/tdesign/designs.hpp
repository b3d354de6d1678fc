#pragma once

#include "tdesign/budget.hpp"
#include "tdesign/oa.hpp"
#include "tdesign/rational.hpp"
#include "tdesign/rules1d.hpp"

#include <cstdint>
#include <memory>
#include <span>
#include <variant>
#include <vector>

namespace tdesign::designs {

struct ExplicitStorage {
    std::vector<double> coords;  // row-major, size() x dim
    std::vector<double> weights;
};

/// Point set described by a one-dimensional rule, an orthogonal array over
/// its nodes, and a map from array symbols to node values. Rows are decoded
/// on demand, so a factored design never materializes its full point list.
struct FactoredStorage {
    rules1d::Rule1D rule;
    std::shared_ptr<const oa::OrthogonalArray> array;
    std::vector<double> symbol_map;  // symbol -> node value, length q
    bool product_weights = false;    // weigh each row by the product of its
                                     // per-coordinate node weights, not 1/N
};

struct WeightedDesign {
    std::size_t dim = 0;
    rules1d::MeasureTag measure;
    int claimed_degree = 0;
    bool weights_rescaled = false;  // set when ingest had to renormalize
    std::variant<ExplicitStorage, FactoredStorage> storage;

    std::size_t size() const;
    bool factored() const { return std::holds_alternative<FactoredStorage>(storage); }

    // Calls visit(point, weight) for every point, in storage order. Factored
    // designs are decoded row by row into a scratch buffer.
    template <typename Visitor>
    void for_each_point(Visitor&& visit) const {
        if (const auto* ex = std::get_if<ExplicitStorage>(&storage)) {
            for (std::size_t i = 0; i < ex->weights.size(); ++i)
                visit(std::span<const double>(ex->coords.data() + i * dim, dim),
                      ex->weights[i]);
            return;
        }
        const auto& fs = std::get<FactoredStorage>(storage);
        oa::RowStream rows(*fs.array);
        std::vector<int> row(dim);
        std::vector<double> point(dim);
        const double even = 1.0 / static_cast<double>(fs.array->runs);
        while (rows.next(row)) {
            double w = even;
            if (fs.product_weights) {
                w = 1.0;
                for (std::size_t j = 0; j < dim; ++j)
                    w *= fs.rule.weights[static_cast<std::size_t>(row[j])];
            }
            for (std::size_t j = 0; j < dim; ++j)
                point[j] = fs.symbol_map[static_cast<std::size_t>(row[j])];
            visit(std::span<const double>(point.data(), dim), w);
        }
    }

    // Explicit copy produced by the same traversal as for_each_point, so
    // sums over the copy reproduce streamed sums bit for bit.
    WeightedDesign materialized(const Budget& budget = {}) const;
};

/// Wraps caller-supplied points; validates dimensions, positive weights, and
/// total weight 1 within 1e-9.
WeightedDesign from_points(std::vector<double> coords, std::vector<double> weights,
                           std::size_t dim, rules1d::MeasureTag measure,
                           int claimed_degree);

/// The d-fold product of a rule with itself; explicit while the point count
/// fits the row budget, otherwise factored over the full grid.
WeightedDesign product_design(const rules1d::Rule1D& rule, int d,
                              const Budget& budget = {});

/// Replaces the full grid over an equi-weighted rule's nodes by the rows of
/// a certified orthogonal array, keeping all moments through the array's
/// strength. Symbol i maps to node i.
WeightedDesign reduce_by_oa(const rules1d::Rule1D& rule,
                            std::shared_ptr<const oa::OrthogonalArray> array);

/// Same reduction for a rule with rational weights parts[i]/q: node i
/// occupies parts[i] of the q symbols, so the equi-weighted rows of the
/// array realize the weighted rule.
WeightedDesign reduce_by_oa_multiset(const rules1d::Rule1D& rule,
                                     std::shared_ptr<const oa::OrthogonalArray> array);

/// Block designs -------------------------------------------------------------

/// Verifies that for every t' <= t each t'-subset of {0..v-1} lies in the
/// same number of blocks; returns those counts indexed by t'. Throws
/// BalanceViolation naming the first offending subset.
std::vector<std::int64_t> check_balance(int v,
                                        const std::vector<std::vector<int>>& blocks,
                                        int t);

/// Maps each block to the vector with alpha on its members and beta
/// elsewhere, uniform weight 1/|blocks|. Requires the family to be balanced
/// through degree t.
WeightedDesign reduce_by_block_design(int v, const std::vector<std::vector<int>>& blocks,
                                      double alpha, double beta, int t);

/// Exact monomial average over the mapped blocks themselves.
Rational block_family_average(int v, const std::vector<std::vector<int>>& blocks,
                              const Rational& alpha, const Rational& beta,
                              std::span<const int> exponents);

/// Exact monomial average over all subsets of {0..v-1}, each size class
/// weighted by its share of the block family.
Rational subset_class_average(int v, const std::vector<std::vector<int>>& blocks,
                              const Rational& alpha, const Rational& beta,
                              std::span<const int> exponents);

/// Permutation sets -----------------------------------------------------------

struct PermSet {
    int degree = 0;
    std::vector<std::vector<int>> perms;
    bool is_group = false;
};

/// outer applied after inner: result[i] = outer[inner[i]].
std::vector<int> compose(std::span<const int> outer, std::span<const int> inner);

PermSet identity_only(int degree);

/// All degree! permutations.
PermSet symmetric_group(int degree, const Budget& budget = {});

/// Closure of the generators under composition, breadth first from the
/// identity; refuses past budget.max_group elements.
PermSet generate_group(int degree, const std::vector<std::vector<int>>& generators,
                       const Budget& budget = {});

/// Tests closure under composition and inverses; records the result in
/// z.is_group and returns it.
bool closure_check(PermSet& z);

/// The fractional-linear maps of the 9-point projective line over the
/// 8-element field, as permutations of {0..8} with 8 standing for the point
/// at infinity. Order 504.
PermSet psl28();

/// The set {x sigma : sigma in z}, deduplicated, with uniform weights.
WeightedDesign orbit_design(const PermSet& z, std::span<const double> x);

/// Average of x_{j1}^{e1} ... x_{jk}^{ek} over all ordered k-tuples of
/// distinct indices.
double symmetric_average(std::span<const double> x, std::span<const int> exponents);

/// Spherical reduction ---------------------------------------------------------

struct SphericalDesign {
    std::size_t dim = 0;
    std::vector<double> coords;  // unit rows
    std::vector<double> weights;

    std::size_t size() const { return weights.size(); }
};

/// Projects every nonzero point to the unit sphere, carrying weight
/// w * |x|^(2r), then renormalizes by the total. Exact for homogeneous
/// degree-2r integrands whenever the input averages degree-2r polynomials
/// correctly.
SphericalDesign gaussian_to_spherical(const WeightedDesign& design, int r,
                                      const Budget& budget = {});

}  // namespace tdesign::designs
