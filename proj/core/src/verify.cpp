#include "tdesign/verify.hpp"

#include "tdesign/errors.hpp"
#include "tdesign/monomial.hpp"
#include "tdesign/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>

namespace tdesign::verify {
namespace {

constexpr std::uint64_t kMonomialSampleSeed = 0x6d6f6e6f2d736565ULL;
constexpr std::uint64_t kHilbertSeed = 0x756e69742d626c6bULL;

// Contiguous-range fan-out; chunk boundaries never affect results because
// every item is processed independently.
template <typename Body>
void run_chunked(std::uint64_t n_items, int threads, Body&& body) {
    const std::uint64_t workers =
        std::min<std::uint64_t>(std::max(threads, 1), n_items == 0 ? 1 : n_items);
    if (workers <= 1) {
        body(0, n_items);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    const std::uint64_t chunk = (n_items + workers - 1) / workers;
    for (std::uint64_t w = 0; w < workers; ++w) {
        const std::uint64_t lo = w * chunk;
        const std::uint64_t hi = std::min(n_items, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&body, lo, hi] { body(lo, hi); });
    }
    for (auto& th : pool) th.join();
}

std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t r;
    do {
        r = rng();
    } while (r >= limit);
    return r % n;
}

// Uniform sample of distinct exponent vectors of degree <= t: pick the
// degree proportionally to its monomial count, then a uniform composition
// via star positions.
std::vector<std::vector<int>> sample_monomials(int dim, int t, std::uint64_t how_many) {
    std::vector<std::uint64_t> cumulative(static_cast<std::size_t>(t) + 1);
    std::uint64_t total = 0;
    for (int s = 0; s <= t; ++s) {
        total += monomial_count_exact(dim, s);
        cumulative[static_cast<std::size_t>(s)] = total;
    }

    std::mt19937_64 rng(kMonomialSampleSeed);
    std::set<std::vector<int>> chosen;
    std::vector<int> stars;
    while (chosen.size() < how_many) {
        const std::uint64_t u = draw_below(rng, total);
        int s = 0;
        while (cumulative[static_cast<std::size_t>(s)] <= u) ++s;

        stars.clear();
        const std::uint64_t slots = static_cast<std::uint64_t>(s) +
                                    static_cast<std::uint64_t>(dim) - 1;
        while (static_cast<int>(stars.size()) < s) {
            const int p = static_cast<int>(draw_below(rng, slots));
            if (std::find(stars.begin(), stars.end(), p) == stars.end())
                stars.push_back(p);
        }
        std::sort(stars.begin(), stars.end());

        std::vector<int> exps(static_cast<std::size_t>(dim), 0);
        for (int i = 0; i < s; ++i)
            exps[static_cast<std::size_t>(stars[static_cast<std::size_t>(i)] - i)] += 1;
        chosen.insert(std::move(exps));
    }
    return {chosen.begin(), chosen.end()};
}

struct Scored {
    double exact = 0.0;
    double observed = 0.0;
    double abs_error = 0.0;
    double rel_error = 0.0;
    double score = 0.0;  // error over its own tolerance; pass iff <= 1
};

Scored score_moment(const Rational& exact, double observed, const TolerancePolicy& policy) {
    Scored s;
    s.exact = to_double(exact);
    s.observed = observed;
    s.abs_error = std::abs(observed - s.exact);
    if (exact == 0) {
        s.rel_error = 0.0;
        s.score = s.abs_error / policy.abs_tol;
    } else {
        s.rel_error = s.abs_error / std::abs(s.exact);
        s.score = s.rel_error / policy.rel_tol;
    }
    return s;
}

VerificationReport assemble_report(const std::vector<std::vector<int>>& monos,
                                   const std::vector<Scored>& scored, int t,
                                   bool exhaustive, bool rescaled,
                                   const TolerancePolicy& policy) {
    VerificationReport rep;
    rep.degree_checked = t;
    rep.monomials_checked = monos.size();
    rep.exhaustive = exhaustive;
    rep.weights_rescaled = rescaled;
    rep.policy = policy;
    rep.passed = true;
    for (const auto& s : scored) {
        rep.max_abs_error = std::max(rep.max_abs_error, s.abs_error);
        rep.max_rel_error = std::max(rep.max_rel_error, s.rel_error);
        if (!(s.score <= 1.0)) rep.passed = false;
    }

    std::vector<std::size_t> order(scored.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return scored[a].score > scored[b].score;
    });
    const std::size_t keep = std::min<std::size_t>(order.size(), 10);
    rep.worst.reserve(keep);
    for (std::size_t i = 0; i < keep; ++i) {
        const auto& s = scored[order[i]];
        rep.worst.push_back(MonomialDiscrepancy{monos[order[i]], s.exact, s.observed,
                                                s.abs_error, s.rel_error});
    }
    return rep;
}

void require_unit_rows(const designs::SphericalDesign& sph) {
    const std::size_t d = sph.dim;
    for (std::size_t i = 0; i < sph.size(); ++i) {
        double s2 = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            const double c = sph.coords[i * d + j];
            s2 += c * c;
        }
        if (std::abs(std::sqrt(s2) - 1.0) > 1e-10)
            throw std::invalid_argument("verify: point " + std::to_string(i) +
                                        " is off the unit sphere");
    }
}

}  // namespace

Rational measure_moment(const rules1d::MeasureTag& measure, std::span<const int> exponents) {
    Rational product = 1;
    for (int e : exponents) {
        if (e < 0) throw std::invalid_argument("verify: negative exponent");
        product *= measure.moment(static_cast<std::size_t>(e));
    }
    return product;
}

double design_moment(const designs::WeightedDesign& design, std::span<const int> exponents) {
    if (exponents.size() != design.dim)
        throw std::invalid_argument("verify: exponent count does not match the dimension");
    for (int e : exponents)
        if (e < 0) throw std::invalid_argument("verify: negative exponent");

    NeumaierSum acc;
    if (const auto* fs = std::get_if<designs::FactoredStorage>(&design.storage)) {
        const std::size_t q = fs->symbol_map.size();
        std::vector<std::vector<double>> table(design.dim, std::vector<double>(q));
        for (std::size_t j = 0; j < design.dim; ++j)
            for (std::size_t s = 0; s < q; ++s)
                table[j][s] = ipow(fs->symbol_map[s], exponents[j]);

        oa::RowStream rows(*fs->array);
        std::vector<int> row(design.dim);
        const double even = 1.0 / static_cast<double>(fs->array->runs);
        while (rows.next(row)) {
            double term = even;
            if (fs->product_weights) {
                term = 1.0;
                for (std::size_t j = 0; j < design.dim; ++j)
                    term *= fs->rule.weights[static_cast<std::size_t>(row[j])];
            }
            for (std::size_t j = 0; j < design.dim; ++j)
                term *= table[j][static_cast<std::size_t>(row[j])];
            acc.add(term);
        }
        return acc.value();
    }

    const auto& ex = std::get<designs::ExplicitStorage>(design.storage);
    for (std::size_t i = 0; i < ex.weights.size(); ++i) {
        double term = ex.weights[i];
        for (std::size_t j = 0; j < design.dim; ++j)
            term *= ipow(ex.coords[i * design.dim + j], exponents[j]);
        acc.add(term);
    }
    return acc.value();
}

VerificationReport verify_design(const designs::WeightedDesign& design, int t,
                                 const TolerancePolicy& policy, const Budget& budget,
                                 int threads) {
    if (t < 0) throw std::invalid_argument("verify: negative degree");
    const int dim = static_cast<int>(design.dim);

    const std::uint64_t total = monomial_count(dim, t);
    const bool exhaustive = total <= budget.monomial_sample_cap;

    std::vector<std::vector<int>> monos;
    if (exhaustive) {
        monos.reserve(static_cast<std::size_t>(total));
        MonomialEnumerator en(dim, t);
        std::vector<int> e;
        while (en.next(e)) monos.push_back(e);
    } else {
        monos = sample_monomials(dim, t, budget.monomial_sample_cap);
    }

    std::vector<Scored> scored(monos.size());
    run_chunked(monos.size(), threads, [&](std::uint64_t lo, std::uint64_t hi) {
        for (std::uint64_t i = lo; i < hi; ++i) {
            const auto& e = monos[static_cast<std::size_t>(i)];
            const Rational exact = measure_moment(design.measure, e);
            const double observed = design_moment(design, e);
            scored[static_cast<std::size_t>(i)] = score_moment(exact, observed, policy);
        }
    });

    return assemble_report(monos, scored, t, exhaustive, design.weights_rescaled, policy);
}

Rational sphere_constant(int d, int r) {
    if (d < 1 || r < 0) throw std::invalid_argument("verify: need d >= 1 and r >= 0");
    Rational denom = 1;
    for (int j = 0; j < r; ++j) denom *= d + 2 * j;
    return Rational(odd_double_factorial(static_cast<unsigned>(r))) / denom;
}

Rational sphere_monomial_moment(int d, std::span<const int> exponents) {
    if (d < 1 || static_cast<int>(exponents.size()) != d)
        throw std::invalid_argument("verify: exponent count does not match the dimension");
    int degree = 0;
    for (int e : exponents) {
        if (e < 0) throw std::invalid_argument("verify: negative exponent");
        if (e % 2 == 1) return 0;
        degree += e;
    }
    Rational num = 1;
    for (int e : exponents) num *= Rational(odd_double_factorial(static_cast<unsigned>(e / 2)));
    Rational denom = 1;
    for (int j = 0; j < degree / 2; ++j) denom *= d + 2 * j;
    return num / denom;
}

VerificationReport verify_spherical_design(const designs::SphericalDesign& sph, int r,
                                           const TolerancePolicy& policy) {
    if (r < 0) throw std::invalid_argument("verify: negative power index");
    require_unit_rows(sph);
    const int d = static_cast<int>(sph.dim);

    std::vector<std::vector<int>> monos;
    MonomialEnumerator en(d, 2 * r);
    std::vector<int> e;
    while (en.next(e)) {
        int sum = 0;
        for (int c : e) sum += c;
        if (sum == 2 * r) monos.push_back(e);
    }

    std::vector<Scored> scored(monos.size());
    for (std::size_t i = 0; i < monos.size(); ++i) {
        const auto& exps = monos[i];
        NeumaierSum acc;
        for (std::size_t p = 0; p < sph.size(); ++p) {
            double term = sph.weights[p];
            for (std::size_t j = 0; j < sph.dim; ++j)
                term *= ipow(sph.coords[p * sph.dim + j], exps[j]);
            acc.add(term);
        }
        scored[i] = score_moment(sphere_monomial_moment(d, exps), acc.value(), policy);
    }
    return assemble_report(monos, scored, 2 * r, true, false, policy);
}

std::vector<double> seeded_test_vectors(std::size_t count, std::size_t dim,
                                        std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<double> out;
    out.reserve(count * dim);
    for (std::size_t i = 0; i < count * dim; ++i) {
        const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        out.push_back(2.0 * unit - 1.0);
    }
    return out;
}

HilbertReport check_hilbert_identity(const designs::SphericalDesign& sph, int r,
                                     std::uint64_t samples, double rel_tol) {
    if (r < 0) throw std::invalid_argument("verify: negative power index");
    require_unit_rows(sph);
    const std::size_t d = sph.dim;
    const double c = to_double(sphere_constant(static_cast<int>(d), r));

    std::vector<double> points(d * d, 0.0);
    for (std::size_t i = 0; i < d; ++i) points[i * d + i] = 1.0;  // basis vectors
    const auto sampled = seeded_test_vectors(samples, d, kHilbertSeed);
    points.insert(points.end(), sampled.begin(), sampled.end());

    HilbertReport rep;
    rep.r = r;
    rep.points_tested = d + samples;
    for (std::size_t p = 0; p < rep.points_tested; ++p) {
        const double* x = points.data() + p * d;
        double norm2 = 0.0;
        for (std::size_t j = 0; j < d; ++j) norm2 += x[j] * x[j];
        const double lhs = c * ipow(norm2, r);

        NeumaierSum rhs;
        for (std::size_t i = 0; i < sph.size(); ++i) {
            double dot = 0.0;
            for (std::size_t j = 0; j < d; ++j) dot += sph.coords[i * d + j] * x[j];
            rhs.add(sph.weights[i] * ipow(dot, 2 * r));
        }
        const double err = std::abs(lhs - rhs.value());
        rep.max_rel_error = std::max(rep.max_rel_error, lhs != 0.0 ? err / std::abs(lhs) : err);
    }
    rep.passed = rep.max_rel_error <= rel_tol;
    return rep;
}

Embedding embedding_map(const designs::SphericalDesign& sph, int r) {
    if (r < 1) throw std::invalid_argument("verify: embedding needs r >= 1");
    require_unit_rows(sph);

    Embedding e;
    e.dim = sph.dim;
    e.r = r;
    e.rows.reserve(sph.coords.size());
    const double c = to_double(sphere_constant(static_cast<int>(sph.dim), r));
    for (std::size_t i = 0; i < sph.size(); ++i) {
        const double scale = std::pow(sph.weights[i] / c, 1.0 / (2.0 * r));
        for (std::size_t j = 0; j < sph.dim; ++j)
            e.rows.push_back(scale * sph.coords[i * sph.dim + j]);
    }
    return e;
}

double embedded_norm(const Embedding& e, std::span<const double> x) {
    if (x.size() != e.dim)
        throw std::invalid_argument("verify: vector length does not match the embedding");
    NeumaierSum acc;
    const std::size_t n = e.size();
    for (std::size_t i = 0; i < n; ++i) {
        double dot = 0.0;
        for (std::size_t j = 0; j < e.dim; ++j) dot += e.rows[i * e.dim + j] * x[j];
        acc.add(ipow(dot, 2 * e.r));
    }
    return std::pow(acc.value(), 1.0 / (2.0 * e.r));
}

OrbitBoundaryReport compare_orbit_to_symmetric(const designs::PermSet& z,
                                               std::span<const double> x, int max_degree,
                                               double threshold) {
    if (max_degree < 1) throw std::invalid_argument("verify: degree must be >= 1");
    const designs::WeightedDesign orbit = designs::orbit_design(z, x);
    const auto& ex = std::get<designs::ExplicitStorage>(orbit.storage);
    const int d = static_cast<int>(orbit.dim);
    if (d > 62) throw std::invalid_argument("verify: dimension too large for enumeration");

    OrbitBoundaryReport rep;
    rep.degree_checked = max_degree;
    rep.threshold = threshold;
    rep.max_abs_diff_by_degree.assign(static_cast<std::size_t>(max_degree) + 1, 0.0);
    rep.worst_by_degree.assign(static_cast<std::size_t>(max_degree) + 1, OrbitComparison{});

    std::vector<int> parts;
    std::vector<int> positions;

    auto orbit_average = [&]() {
        NeumaierSum acc;
        for (std::size_t i = 0; i < ex.weights.size(); ++i) {
            double term = ex.weights[i];
            for (std::size_t p = 0; p < positions.size(); ++p)
                term *= ipow(ex.coords[i * orbit.dim +
                                       static_cast<std::size_t>(positions[p])],
                             parts[p]);
            acc.add(term);
        }
        return acc.value();
    };

    auto consider = [&](int degree) {
        const double sym = designs::symmetric_average(x, parts);
        std::uint64_t used = 0;
        auto walk = [&](auto&& self, std::size_t depth) -> void {
            if (depth == parts.size()) {
                const double avg = orbit_average();
                const double diff = std::abs(avg - sym);
                auto& slot = rep.worst_by_degree[static_cast<std::size_t>(degree)];
                if (diff > rep.max_abs_diff_by_degree[static_cast<std::size_t>(degree)]) {
                    rep.max_abs_diff_by_degree[static_cast<std::size_t>(degree)] = diff;
                    slot = OrbitComparison{degree, parts, positions, avg, sym, diff};
                }
                return;
            }
            for (int j = 0; j < d; ++j) {
                if (used & (std::uint64_t{1} << j)) continue;
                used |= std::uint64_t{1} << j;
                positions.push_back(j);
                self(self, depth + 1);
                positions.pop_back();
                used &= ~(std::uint64_t{1} << j);
            }
        };
        walk(walk, 0);
    };

    // non-increasing positive parts summing to the degree, at most d of them
    auto partitions = [&](auto&& self, int degree, int remaining, int cap) -> void {
        if (remaining == 0) {
            consider(degree);
            return;
        }
        if (static_cast<int>(parts.size()) == d) return;
        for (int next = std::min(remaining, cap); next >= 1; --next) {
            parts.push_back(next);
            self(self, degree, remaining - next, next);
            parts.pop_back();
        }
    };
    for (int s = 1; s <= max_degree; ++s) partitions(partitions, s, s, s);

    for (int s = 1; s <= max_degree; ++s) {
        if (rep.max_abs_diff_by_degree[static_cast<std::size_t>(s)] > threshold) {
            rep.first_violation_degree = s;
            break;
        }
    }
    return rep;
}

}  // namespace tdesign::verify
