#include "tdesign/designs.hpp"

#include "tdesign/errors.hpp"
#include "tdesign/gf.hpp"
#include "tdesign/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>

namespace tdesign::designs {
namespace {

constexpr int kMaxBlockPoints = 63;  // block memberships live in one word
constexpr std::uint64_t kMaxSubsetEnumeration = 10'000'000;

Rational rational_ipow(const Rational& base, int exp) {
    Rational r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

std::uint64_t binom_capped(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    constexpr std::uint64_t cap = std::uint64_t{1} << 63;
    std::uint64_t r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        if (r > cap / (n - k + i)) return cap;
        r = r * (n - k + i) / i;
    }
    return r;
}

void require_permutation(const std::vector<int>& p, int degree) {
    if (static_cast<int>(p.size()) != degree)
        throw std::invalid_argument("designs: permutation length does not match the degree");
    std::vector<char> seen(static_cast<std::size_t>(degree), 0);
    for (int v : p) {
        if (v < 0 || v >= degree || seen[static_cast<std::size_t>(v)])
            throw std::invalid_argument("designs: not a permutation of 0.." +
                                        std::to_string(degree - 1));
        seen[static_cast<std::size_t>(v)] = 1;
    }
}

// Block sets as membership masks over points 0..v-1.
std::vector<std::uint64_t> block_masks(int v, const std::vector<std::vector<int>>& blocks) {
    if (v < 1 || v > kMaxBlockPoints)
        throw std::invalid_argument("designs: point count must be in 1.." +
                                    std::to_string(kMaxBlockPoints));
    if (blocks.empty()) throw std::invalid_argument("designs: empty block family");
    std::vector<std::uint64_t> masks;
    masks.reserve(blocks.size());
    for (const auto& b : blocks) {
        std::uint64_t m = 0;
        for (int pt : b) {
            if (pt < 0 || pt >= v)
                throw std::invalid_argument("designs: block point out of range");
            const std::uint64_t bit = std::uint64_t{1} << pt;
            if (m & bit) throw std::invalid_argument("designs: repeated point in a block");
            m |= bit;
        }
        masks.push_back(m);
    }
    return masks;
}

// First k-subset of {0..v-1} into `comb`; advance() steps through all of
// them in lexicographic order.
bool advance_combination(std::vector<int>& comb, int v) {
    const int k = static_cast<int>(comb.size());
    int i = k - 1;
    while (i >= 0 && comb[static_cast<std::size_t>(i)] == v - k + i) --i;
    if (i < 0) return false;
    ++comb[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j)
        comb[static_cast<std::size_t>(j)] = comb[static_cast<std::size_t>(j - 1)] + 1;
    return true;
}

}  // namespace

std::size_t WeightedDesign::size() const {
    if (const auto* ex = std::get_if<ExplicitStorage>(&storage)) return ex->weights.size();
    return static_cast<std::size_t>(std::get<FactoredStorage>(storage).array->runs);
}

WeightedDesign WeightedDesign::materialized(const Budget& budget) const {
    const std::uint64_t n = size();
    if (n > budget.max_rows)
        throw BudgetExceeded("designs: materializing " + std::to_string(n) +
                                 " points exceeds the row budget",
                             n, budget.max_rows);
    ExplicitStorage ex;
    ex.coords.reserve(static_cast<std::size_t>(n) * dim);
    ex.weights.reserve(static_cast<std::size_t>(n));
    for_each_point([&](std::span<const double> p, double w) {
        ex.coords.insert(ex.coords.end(), p.begin(), p.end());
        ex.weights.push_back(w);
    });
    WeightedDesign out;
    out.dim = dim;
    out.measure = measure;
    out.claimed_degree = claimed_degree;
    out.weights_rescaled = weights_rescaled;
    out.storage = std::move(ex);
    return out;
}

WeightedDesign from_points(std::vector<double> coords, std::vector<double> weights,
                           std::size_t dim, rules1d::MeasureTag measure,
                           int claimed_degree) {
    if (dim == 0) throw std::invalid_argument("designs: dimension must be positive");
    if (weights.empty()) throw std::invalid_argument("designs: empty design");
    if (coords.size() != weights.size() * dim)
        throw std::invalid_argument("designs: coordinate count does not match points x dim");
    NeumaierSum total;
    for (double w : weights) {
        if (!(w > 0.0)) throw std::invalid_argument("designs: weights must be positive");
        total.add(w);
    }
    if (std::abs(total.value() - 1.0) > 1e-9)
        throw std::invalid_argument("designs: weights must sum to one");
    WeightedDesign d;
    d.dim = dim;
    d.measure = std::move(measure);
    d.claimed_degree = claimed_degree;
    d.storage = ExplicitStorage{std::move(coords), std::move(weights)};
    return d;
}

WeightedDesign product_design(const rules1d::Rule1D& rule, int d, const Budget& budget) {
    if (d < 1) throw std::invalid_argument("designs: dimension must be positive");
    if (rule.size() == 0) throw std::invalid_argument("designs: empty rule");

    auto grid = std::make_shared<oa::OrthogonalArray>(
        oa::full_factorial(static_cast<std::int64_t>(rule.size()),
                           static_cast<std::size_t>(d)));
    FactoredStorage fs;
    fs.rule = rule;
    fs.array = grid;
    fs.symbol_map = rule.nodes;
    fs.product_weights = !rule.is_equi_weighted();

    WeightedDesign out;
    out.dim = static_cast<std::size_t>(d);
    out.measure = rule.measure;
    out.claimed_degree = rule.exactness_degree;
    out.storage = std::move(fs);
    if (grid->runs <= budget.max_rows) return out.materialized(budget);
    return out;
}

WeightedDesign reduce_by_oa(const rules1d::Rule1D& rule,
                            std::shared_ptr<const oa::OrthogonalArray> array) {
    if (!array) throw std::invalid_argument("designs: null array");
    if (!rule.is_equi_weighted())
        throw std::invalid_argument("designs: reduction needs an equi-weighted rule");
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        for (std::size_t j = i + 1; j < rule.nodes.size(); ++j)
            if (rule.nodes[i] == rule.nodes[j])
                throw std::invalid_argument("designs: rule nodes must be distinct");
    if (array->q != static_cast<std::int64_t>(rule.size()))
        throw std::invalid_argument("designs: array levels do not match the rule's nodes");
    if (array->certification == oa::Certification::none)
        throw std::invalid_argument("designs: array carries no strength certification");

    FactoredStorage fs;
    fs.rule = rule;
    fs.array = std::move(array);
    fs.symbol_map = rule.nodes;

    WeightedDesign out;
    out.dim = fs.array->k;
    out.measure = rule.measure;
    out.claimed_degree = std::min(fs.array->certified_strength, rule.exactness_degree);
    out.storage = std::move(fs);
    return out;
}

WeightedDesign reduce_by_oa_multiset(const rules1d::Rule1D& rule,
                                     std::shared_ptr<const oa::OrthogonalArray> array) {
    if (!array) throw std::invalid_argument("designs: null array");
    if (!rule.rational_weights)
        throw std::invalid_argument("designs: rule carries no rational weights");
    const auto& rw = *rule.rational_weights;
    if (rw.parts.size() != rule.size())
        throw std::invalid_argument("designs: rational weight count does not match nodes");
    std::int64_t sum = 0;
    for (std::int64_t p : rw.parts) {
        if (p < 1) throw std::invalid_argument("designs: rational weight parts must be positive");
        sum += p;
    }
    if (sum != rw.denom || array->q != rw.denom)
        throw std::invalid_argument(
            "designs: weight parts must sum to the denominator and match the array levels");
    if (array->certification == oa::Certification::none)
        throw std::invalid_argument("designs: array carries no strength certification");

    FactoredStorage fs;
    fs.rule = rule;
    fs.array = std::move(array);
    fs.symbol_map.reserve(static_cast<std::size_t>(rw.denom));
    for (std::size_t i = 0; i < rule.size(); ++i)
        fs.symbol_map.insert(fs.symbol_map.end(), static_cast<std::size_t>(rw.parts[i]),
                             rule.nodes[i]);

    WeightedDesign out;
    out.dim = fs.array->k;
    out.measure = rule.measure;
    out.claimed_degree = std::min(fs.array->certified_strength, rule.exactness_degree);
    out.storage = std::move(fs);
    return out;
}

std::vector<std::int64_t> check_balance(int v, const std::vector<std::vector<int>>& blocks,
                                        int t) {
    if (t < 0 || t > v) throw std::invalid_argument("designs: balance level out of range");
    const auto masks = block_masks(v, blocks);

    std::vector<std::int64_t> counts(static_cast<std::size_t>(t) + 1);
    counts[0] = static_cast<std::int64_t>(blocks.size());
    for (int level = 1; level <= t; ++level) {
        const std::uint64_t subsets =
            binom_capped(static_cast<std::uint64_t>(v), static_cast<std::uint64_t>(level));
        if (subsets > kMaxSubsetEnumeration)
            throw BudgetExceeded("designs: balance check needs too many subsets", subsets,
                                 kMaxSubsetEnumeration);
        std::vector<int> comb(static_cast<std::size_t>(level));
        for (int i = 0; i < level; ++i) comb[static_cast<std::size_t>(i)] = i;
        std::int64_t reference = -1;
        do {
            std::uint64_t sm = 0;
            for (int pt : comb) sm |= std::uint64_t{1} << pt;
            std::int64_t cnt = 0;
            for (std::uint64_t bm : masks) cnt += ((bm & sm) == sm) ? 1 : 0;
            if (reference < 0)
                reference = cnt;
            else if (cnt != reference)
                throw BalanceViolation(
                    "designs: subset coverage " + std::to_string(cnt) + " differs from " +
                        std::to_string(reference) + " at level " + std::to_string(level),
                    comb, level);
        } while (advance_combination(comb, v));
        counts[static_cast<std::size_t>(level)] = reference;
    }
    return counts;
}

WeightedDesign reduce_by_block_design(int v, const std::vector<std::vector<int>>& blocks,
                                      double alpha, double beta, int t) {
    if (alpha == beta)
        throw std::invalid_argument("designs: alpha and beta must differ");
    check_balance(v, blocks, t);
    const auto masks = block_masks(v, blocks);

    std::vector<double> coords;
    coords.reserve(masks.size() * static_cast<std::size_t>(v));
    for (std::uint64_t bm : masks)
        for (int j = 0; j < v; ++j)
            coords.push_back((bm >> j) & 1 ? alpha : beta);
    std::vector<double> weights(masks.size(), 1.0 / static_cast<double>(masks.size()));
    return from_points(std::move(coords), std::move(weights), static_cast<std::size_t>(v),
                       rules1d::MeasureTag::custom({Rational(1)}), t);
}

Rational block_family_average(int v, const std::vector<std::vector<int>>& blocks,
                              const Rational& alpha, const Rational& beta,
                              std::span<const int> exponents) {
    if (static_cast<int>(exponents.size()) != v)
        throw std::invalid_argument("designs: exponent vector must have length v");
    const auto masks = block_masks(v, blocks);
    Rational sum = 0;
    for (std::uint64_t bm : masks) {
        Rational term = 1;
        for (int j = 0; j < v; ++j) {
            const int e = exponents[static_cast<std::size_t>(j)];
            if (e == 0) continue;
            term *= rational_ipow((bm >> j) & 1 ? alpha : beta, e);
        }
        sum += term;
    }
    return sum / Rational(static_cast<std::int64_t>(masks.size()));
}

Rational subset_class_average(int v, const std::vector<std::vector<int>>& blocks,
                              const Rational& alpha, const Rational& beta,
                              std::span<const int> exponents) {
    if (static_cast<int>(exponents.size()) != v)
        throw std::invalid_argument("designs: exponent vector must have length v");
    block_masks(v, blocks);  // validates the family

    std::map<int, std::int64_t> size_multiplicity;
    for (const auto& b : blocks) size_multiplicity[static_cast<int>(b.size())] += 1;

    Rational total = 0;
    for (const auto& [k, nk] : size_multiplicity) {
        const std::uint64_t subsets =
            binom_capped(static_cast<std::uint64_t>(v), static_cast<std::uint64_t>(k));
        if (subsets > kMaxSubsetEnumeration)
            throw BudgetExceeded("designs: class average needs too many subsets", subsets,
                                 kMaxSubsetEnumeration);
        Rational class_sum = 0;
        std::vector<int> comb(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) comb[static_cast<std::size_t>(i)] = i;
        if (k == 0) comb.clear();
        do {
            std::uint64_t sm = 0;
            for (int pt : comb) sm |= std::uint64_t{1} << pt;
            Rational term = 1;
            for (int j = 0; j < v; ++j) {
                const int e = exponents[static_cast<std::size_t>(j)];
                if (e == 0) continue;
                term *= rational_ipow((sm >> j) & 1 ? alpha : beta, e);
            }
            class_sum += term;
        } while (!comb.empty() && advance_combination(comb, v));
        const Rational class_count(binomial_exact(static_cast<unsigned>(v),
                                                  static_cast<unsigned>(k)));
        total += Rational(nk, static_cast<std::int64_t>(blocks.size())) * class_sum /
                 class_count;
    }
    return total;
}

std::vector<int> compose(std::span<const int> outer, std::span<const int> inner) {
    if (outer.size() != inner.size())
        throw std::invalid_argument("designs: composed permutations must share a degree");
    std::vector<int> r(outer.size());
    for (std::size_t i = 0; i < inner.size(); ++i)
        r[i] = outer[static_cast<std::size_t>(inner[i])];
    return r;
}

PermSet identity_only(int degree) {
    if (degree < 1) throw std::invalid_argument("designs: degree must be positive");
    PermSet z;
    z.degree = degree;
    std::vector<int> id(static_cast<std::size_t>(degree));
    for (int i = 0; i < degree; ++i) id[static_cast<std::size_t>(i)] = i;
    z.perms.push_back(std::move(id));
    z.is_group = true;
    return z;
}

PermSet symmetric_group(int degree, const Budget& budget) {
    if (degree < 1) throw std::invalid_argument("designs: degree must be positive");
    std::uint64_t count = 1;
    for (int i = 2; i <= degree; ++i) {
        count *= static_cast<std::uint64_t>(i);
        if (count > budget.max_group)
            throw BudgetExceeded("designs: factorial group is too large", count,
                                 budget.max_group);
    }
    PermSet z;
    z.degree = degree;
    z.perms.reserve(static_cast<std::size_t>(count));
    std::vector<int> p(static_cast<std::size_t>(degree));
    for (int i = 0; i < degree; ++i) p[static_cast<std::size_t>(i)] = i;
    do {
        z.perms.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    z.is_group = true;
    return z;
}

PermSet generate_group(int degree, const std::vector<std::vector<int>>& generators,
                       const Budget& budget) {
    if (degree < 1) throw std::invalid_argument("designs: degree must be positive");
    for (const auto& g : generators) require_permutation(g, degree);

    std::vector<int> id(static_cast<std::size_t>(degree));
    for (int i = 0; i < degree; ++i) id[static_cast<std::size_t>(i)] = i;

    std::set<std::vector<int>> seen{id};
    std::deque<std::vector<int>> frontier{id};
    while (!frontier.empty()) {
        const std::vector<int> cur = std::move(frontier.front());
        frontier.pop_front();
        for (const auto& g : generators) {
            std::vector<int> nxt = compose(cur, g);
            if (seen.insert(nxt).second) {
                if (seen.size() > budget.max_group)
                    throw BudgetExceeded("designs: group closure exceeded the element cap",
                                         seen.size(), budget.max_group);
                frontier.push_back(std::move(nxt));
            }
        }
    }

    PermSet z;
    z.degree = degree;
    z.perms.assign(seen.begin(), seen.end());
    z.is_group = true;
    return z;
}

bool closure_check(PermSet& z) {
    z.is_group = false;
    if (z.perms.empty()) return false;
    for (const auto& p : z.perms) require_permutation(p, z.degree);

    const std::set<std::vector<int>> members(z.perms.begin(), z.perms.end());
    for (const auto& p : z.perms) {
        std::vector<int> inv(p.size());
        for (std::size_t i = 0; i < p.size(); ++i)
            inv[static_cast<std::size_t>(p[i])] = static_cast<int>(i);
        if (!members.count(inv)) return false;
    }
    for (const auto& a : z.perms)
        for (const auto& b : z.perms)
            if (!members.count(compose(a, b))) return false;
    z.is_group = true;
    return true;
}

PermSet psl28() {
    const gf::Field f = gf::Field::make(2, 3);
    const std::int64_t zeta = f.primitive_element();
    const int inf = 8;

    std::vector<int> add_one(9), mul_zeta(9), invert(9);
    for (int i = 0; i < 8; ++i) {
        add_one[static_cast<std::size_t>(i)] = static_cast<int>(f.add(i, 1));
        mul_zeta[static_cast<std::size_t>(i)] = static_cast<int>(f.mul(i, zeta));
        invert[static_cast<std::size_t>(i)] = i == 0 ? inf : static_cast<int>(f.inv(i));
    }
    add_one[inf] = inf;
    mul_zeta[inf] = inf;
    invert[inf] = 0;

    return generate_group(9, {add_one, mul_zeta, invert});
}

WeightedDesign orbit_design(const PermSet& z, std::span<const double> x) {
    if (z.perms.empty()) throw std::invalid_argument("designs: empty permutation set");
    if (static_cast<int>(x.size()) != z.degree)
        throw std::invalid_argument("designs: point length does not match the degree");

    std::set<std::vector<double>> orbit;
    std::vector<double> y(x.size());
    for (const auto& sigma : z.perms) {
        require_permutation(sigma, z.degree);
        for (std::size_t i = 0; i < x.size(); ++i)
            y[i] = x[static_cast<std::size_t>(sigma[i])];
        orbit.insert(y);
    }

    std::vector<double> coords;
    coords.reserve(orbit.size() * x.size());
    for (const auto& p : orbit) coords.insert(coords.end(), p.begin(), p.end());
    std::vector<double> weights(orbit.size(), 1.0 / static_cast<double>(orbit.size()));
    return from_points(std::move(coords), std::move(weights), x.size(),
                       rules1d::MeasureTag::custom({Rational(1)}), 0);
}

double symmetric_average(std::span<const double> x, std::span<const int> exponents) {
    const int d = static_cast<int>(x.size());
    const int k = static_cast<int>(exponents.size());
    if (d < 1) throw std::invalid_argument("designs: empty point");
    if (k > d)
        throw std::invalid_argument("designs: more exponents than coordinates");
    for (int e : exponents)
        if (e < 1) throw std::invalid_argument("designs: exponents must be positive");
    if (k == 0) return 1.0;
    if (d > 62) throw std::invalid_argument("designs: dimension too large for enumeration");

    NeumaierSum sum;
    auto recurse = [&](auto&& self, int depth, std::uint64_t used, double partial) -> void {
        if (depth == k) {
            sum.add(partial);
            return;
        }
        for (int j = 0; j < d; ++j) {
            if (used & (std::uint64_t{1} << j)) continue;
            self(self, depth + 1, used | (std::uint64_t{1} << j),
                 partial * ipow(x[static_cast<std::size_t>(j)],
                                exponents[static_cast<std::size_t>(depth)]));
        }
    };
    recurse(recurse, 0, 0, 1.0);

    double tuples = 1.0;
    for (int i = 0; i < k; ++i) tuples *= static_cast<double>(d - i);
    return sum.value() / tuples;
}

SphericalDesign gaussian_to_spherical(const WeightedDesign& design, int r,
                                      const Budget& budget) {
    if (r < 1) throw std::invalid_argument("designs: power index must be >= 1");
    if (design.claimed_degree < 2 * r)
        throw std::invalid_argument("designs: design degree below 2r");
    if (!(design.measure == rules1d::MeasureTag::gaussian()))
        throw std::invalid_argument("designs: spherical reduction needs a Gaussian design");
    const std::uint64_t n = design.size();
    if (n > budget.max_rows)
        throw BudgetExceeded("designs: spherical reduction would materialize too many rows",
                             n, budget.max_rows);

    SphericalDesign sph;
    sph.dim = design.dim;
    NeumaierSum total;
    design.for_each_point([&](std::span<const double> p, double w) {
        double s2 = 0.0;
        for (double c : p) s2 += c * c;
        if (s2 == 0.0) return;
        const double norm = std::sqrt(s2);
        for (double c : p) sph.coords.push_back(c / norm);
        const double raw = w * ipow(s2, r);
        sph.weights.push_back(raw);
        total.add(raw);
    });
    if (sph.weights.empty())
        throw std::invalid_argument("designs: every point sits at the origin");
    const double scale = total.value();
    for (double& w : sph.weights) w /= scale;
    return sph;
}

}  // namespace tdesign::designs
