#include "tdesign/oa.hpp"

#include "tdesign/errors.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <thread>

namespace tdesign::oa {
namespace {

constexpr std::uint64_t kU64Cap = std::uint64_t{1} << 63;

// C(n, k) saturating at 2^63 (budget comparisons only need "too big").
std::uint64_t binom_saturating(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    std::uint64_t r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        // r *= (n - k + i) / i, kept exact by doing the division last
        const std::uint64_t num = n - k + i;
        if (r > kU64Cap / num) return kU64Cap;
        r = r * num / i;
    }
    return r;
}

bool next_combination(std::vector<std::size_t>& c, std::size_t n) {
    const std::size_t t = c.size();
    std::size_t i = t;
    while (i-- > 0) {
        if (c[i] != i + n - t) {
            ++c[i];
            for (std::size_t j = i + 1; j < t; ++j) c[j] = c[j - 1] + 1;
            return true;
        }
    }
    return false;
}

// Lexicographic unranking of a t-subset of {0..n-1}.
std::vector<std::size_t> unrank_combination(std::size_t n, std::size_t t, std::uint64_t rank) {
    std::vector<std::size_t> c(t);
    std::size_t x = 0;
    for (std::size_t i = 0; i < t; ++i) {
        while (true) {
            const std::uint64_t block = binom_saturating(n - 1 - x, t - 1 - i);
            if (rank < block) break;
            rank -= block;
            ++x;
        }
        c[i] = x++;
    }
    return c;
}

std::uint64_t pow_u64_checked(std::int64_t base, std::size_t exp, const char* what) {
    std::uint64_t r = 1;
    for (std::size_t i = 0; i < exp; ++i) {
        if (r > kU64Cap / static_cast<std::uint64_t>(base))
            throw BudgetExceeded(std::string(what) + ": size overflows 63 bits", kU64Cap, kU64Cap);
        r *= static_cast<std::uint64_t>(base);
    }
    return r;
}

void run_chunked(std::uint64_t n_items, int threads, const auto& body) {
    if (threads <= 1 || n_items < 2) {
        body(0, n_items, 0);
        return;
    }
    const std::uint64_t nt = std::min<std::uint64_t>(static_cast<std::uint64_t>(threads), n_items);
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nt));
    for (std::uint64_t w = 0; w < nt; ++w) {
        const std::uint64_t lo = n_items * w / nt;
        const std::uint64_t hi = n_items * (w + 1) / nt;
        pool.emplace_back([&, lo, hi, w] { body(lo, hi, static_cast<std::size_t>(w)); });
    }
    for (auto& th : pool) th.join();
}

}  // namespace

std::string to_string(Certification c) {
    switch (c) {
        case Certification::exhaustive: return "exhaustive";
        case Certification::linear: return "linear";
        default: return "none";
    }
}

OrthogonalArray from_rows(std::int64_t q, std::size_t k, std::vector<int> row_major_data) {
    if (q < 2) throw std::invalid_argument("oa: need at least two symbols");
    if (k == 0) throw std::invalid_argument("oa: need at least one column");
    if (row_major_data.size() % k != 0)
        throw std::invalid_argument("oa: data size is not a multiple of the column count");
    for (int s : row_major_data)
        if (s < 0 || static_cast<std::int64_t>(s) >= q)
            throw std::invalid_argument("oa: symbol outside [0, q)");

    OrthogonalArray a;
    a.q = q;
    a.k = k;
    a.runs = row_major_data.size() / k;
    a.storage = ExplicitRows{std::move(row_major_data)};
    return a;
}

OrthogonalArray from_generator(codes::GeneratorMatrix g) {
    OrthogonalArray a;
    a.q = g.q();
    a.k = g.k_cols;
    a.runs = g.codeword_count();
    a.storage = std::move(g);
    return a;
}

OrthogonalArray full_factorial(std::int64_t q, std::size_t k) {
    if (q < 2) throw std::invalid_argument("oa: need at least two symbols");
    if (k == 0) throw std::invalid_argument("oa: need at least one column");
    OrthogonalArray a;
    a.q = q;
    a.k = k;
    a.runs = pow_u64_checked(q, k, "oa: full factorial");
    a.storage = FactorialGrid{};
    // the full grid has every strength up to k by construction
    a.certified_strength = static_cast<int>(k);
    a.certification = Certification::exhaustive;
    return a;
}

RowStream::RowStream(const OrthogonalArray& a) : a_(&a) {
    if (const auto* g = std::get_if<codes::GeneratorMatrix>(&a.storage)) {
        en_.emplace(*g);
        scratch_.resize(a.k);
    }
}

bool RowStream::next(std::span<int> out) {
    if (emitted_ >= a_->runs) return false;
    if (const auto* rows = std::get_if<ExplicitRows>(&a_->storage)) {
        const std::size_t base = static_cast<std::size_t>(emitted_) * a_->k;
        for (std::size_t j = 0; j < a_->k; ++j) out[j] = rows->data[base + j];
    } else if (std::holds_alternative<codes::GeneratorMatrix>(a_->storage)) {
        if (!en_->next(scratch_)) return false;
        for (std::size_t j = 0; j < a_->k; ++j) out[j] = static_cast<int>(scratch_[j]);
    } else {
        // factorial grid: decode the row ordinal, column 0 most significant
        std::uint64_t r = emitted_;
        for (std::size_t j = a_->k; j-- > 0;) {
            out[j] = static_cast<int>(r % static_cast<std::uint64_t>(a_->q));
            r /= static_cast<std::uint64_t>(a_->q);
        }
    }
    ++emitted_;
    return true;
}

void RowStream::reset() {
    emitted_ = 0;
    if (en_) en_->reset();
}

std::vector<int> materialize_rows(const OrthogonalArray& a, std::uint64_t cap) {
    if (a.runs > cap)
        throw BudgetExceeded("oa: " + std::to_string(a.runs) + " rows exceed the budget", a.runs,
                             cap);
    std::vector<int> out(static_cast<std::size_t>(a.runs) * a.k);
    RowStream s(a);
    std::size_t off = 0;
    std::vector<int> row(a.k);
    while (s.next(row)) {
        std::copy(row.begin(), row.end(), out.begin() + off);
        off += a.k;
    }
    return out;
}

StrengthReport verify_strength_exhaustive(const OrthogonalArray& a, int t, const Budget& budget,
                                          int threads) {
    if (t < 1 || static_cast<std::size_t>(t) > a.k)
        throw std::invalid_argument("oa: strength must satisfy 1 <= t <= k");

    StrengthReport rep;
    rep.strength = t;
    rep.method = "exhaustive";

    const std::uint64_t tuples = pow_u64_checked(a.q, static_cast<std::size_t>(t), "oa: q^t");
    if (tuples > budget.max_tuples)
        throw BudgetExceeded("oa: q^t histogram exceeds the tuple budget", tuples,
                             budget.max_tuples);
    const std::uint64_t n_subsets = binom_saturating(a.k, static_cast<std::size_t>(t));
    if (n_subsets > budget.max_subsets)
        throw BudgetExceeded("oa: C(k, t) exceeds the subset budget", n_subsets,
                             budget.max_subsets);

    if (a.runs % tuples != 0) {
        rep.pass = false;
        rep.violation = Violation{{}, {}, a.runs, 0};
        return rep;  // N not divisible by q^t: cannot be a strength-t OA
    }
    const std::uint64_t lambda = a.runs / tuples;

    // One pass over the rows per subset; rows are materialized once unless
    // the array is an implicit grid (then each worker streams it).
    std::vector<int> rows;
    const bool grid = std::holds_alternative<FactorialGrid>(a.storage);
    if (!grid) rows = materialize_rows(a, budget.max_rows);

    struct Hit {
        std::uint64_t ordinal;
        Violation v;
    };
    const int n_workers = std::max(1, threads);
    std::vector<std::optional<Hit>> hits(static_cast<std::size_t>(n_workers));

    run_chunked(n_subsets, n_workers, [&](std::uint64_t lo, std::uint64_t hi, std::size_t w) {
        if (lo >= hi) return;
        std::vector<std::uint32_t> hist(static_cast<std::size_t>(tuples));
        std::vector<std::size_t> cols = unrank_combination(a.k, static_cast<std::size_t>(t), lo);
        std::vector<int> row(a.k);
        for (std::uint64_t ord = lo; ord < hi; ++ord) {
            std::fill(hist.begin(), hist.end(), 0u);
            RowStream s(a);
            if (grid) {
                while (s.next(row)) {
                    std::uint64_t idx = 0;
                    for (std::size_t i = 0; i < cols.size(); ++i)
                        idx = idx * static_cast<std::uint64_t>(a.q) +
                              static_cast<std::uint64_t>(row[cols[i]]);
                    ++hist[static_cast<std::size_t>(idx)];
                }
            } else {
                const std::size_t n = static_cast<std::size_t>(a.runs);
                for (std::size_t r = 0; r < n; ++r) {
                    const int* base = rows.data() + r * a.k;
                    std::uint64_t idx = 0;
                    for (std::size_t i = 0; i < cols.size(); ++i)
                        idx = idx * static_cast<std::uint64_t>(a.q) +
                              static_cast<std::uint64_t>(base[cols[i]]);
                    ++hist[static_cast<std::size_t>(idx)];
                }
            }
            for (std::uint64_t idx = 0; idx < tuples; ++idx) {
                if (hist[static_cast<std::size_t>(idx)] == lambda) continue;
                Violation v;
                v.columns = cols;
                v.tuple.resize(static_cast<std::size_t>(t));
                std::uint64_t rest = idx;
                for (std::size_t i = cols.size(); i-- > 0;) {
                    v.tuple[i] = static_cast<int>(rest % static_cast<std::uint64_t>(a.q));
                    rest /= static_cast<std::uint64_t>(a.q);
                }
                v.count = hist[static_cast<std::size_t>(idx)];
                v.expected = lambda;
                if (!hits[w] || ord < hits[w]->ordinal) hits[w] = Hit{ord, std::move(v)};
                break;
            }
            if (hits[w]) return;  // first violation in this chunk is enough
            if (ord + 1 < hi) next_combination(cols, a.k);
        }
    });

    std::optional<Hit> first;
    for (auto& h : hits)
        if (h && (!first || h->ordinal < first->ordinal)) first = std::move(h);

    if (first) {
        rep.pass = false;
        rep.violation = std::move(first->v);
    } else {
        rep.pass = true;
        rep.lambda = lambda;
    }
    return rep;
}

StrengthReport verify_strength_linear(const codes::GeneratorMatrix& g, int t,
                                      const Budget& budget, int threads) {
    if (t < 1 || static_cast<std::size_t>(t) > g.k_cols)
        throw std::invalid_argument("oa: strength must satisfy 1 <= t <= k");

    StrengthReport rep;
    rep.strength = t;
    rep.method = "linear";

    const std::uint64_t n_subsets = binom_saturating(g.k_cols, static_cast<std::size_t>(t));
    if (n_subsets > budget.max_subsets)
        throw BudgetExceeded("oa: C(k, t) exceeds the subset budget", n_subsets,
                             budget.max_subsets);

    const gf::Field& f = *g.field;
    const std::size_t rk = g.rank();

    struct Hit {
        std::uint64_t ordinal;
        std::vector<std::size_t> cols;
    };
    const int n_workers = std::max(1, threads);
    std::vector<std::optional<Hit>> hits(static_cast<std::size_t>(n_workers));

    run_chunked(n_subsets, n_workers, [&](std::uint64_t lo, std::uint64_t hi, std::size_t w) {
        if (lo >= hi) return;
        std::vector<std::size_t> cols =
            unrank_combination(g.k_cols, static_cast<std::size_t>(t), lo);
        std::vector<std::vector<std::int64_t>> sub(rk, std::vector<std::int64_t>(t));
        for (std::uint64_t ord = lo; ord < hi; ++ord) {
            for (std::size_t r = 0; r < rk; ++r)
                for (std::size_t i = 0; i < cols.size(); ++i) sub[r][i] = g.rows[r][cols[i]];

            // rank of the rk x t selection over GF(q)
            std::size_t rank = 0;
            auto m = sub;
            for (std::size_t col = 0; col < static_cast<std::size_t>(t) && rank < rk; ++col) {
                std::size_t sel = rank;
                while (sel < rk && m[sel][col] == 0) ++sel;
                if (sel == rk) continue;
                std::swap(m[rank], m[sel]);
                const std::int64_t inv = f.inv(m[rank][col]);
                for (std::size_t j = col; j < static_cast<std::size_t>(t); ++j)
                    m[rank][j] = f.mul(m[rank][j], inv);
                for (std::size_t r2 = rank + 1; r2 < rk; ++r2) {
                    if (m[r2][col] == 0) continue;
                    const std::int64_t factor = m[r2][col];
                    for (std::size_t j = col; j < static_cast<std::size_t>(t); ++j)
                        m[r2][j] = f.sub(m[r2][j], f.mul(factor, m[rank][j]));
                }
                ++rank;
            }
            if (rank != static_cast<std::size_t>(t)) {
                if (!hits[w] || ord < hits[w]->ordinal) hits[w] = Hit{ord, cols};
                return;
            }
            if (ord + 1 < hi) next_combination(cols, g.k_cols);
        }
    });

    std::optional<Hit> first;
    for (auto& h : hits)
        if (h && (!first || h->ordinal < first->ordinal)) first = std::move(h);

    if (first) {
        rep.pass = false;
        rep.violation = Violation{std::move(first->cols), {}, 0, 0};
    } else {
        rep.pass = true;
        const std::uint64_t tuples = pow_u64_checked(g.q(), static_cast<std::size_t>(t), "oa: q^t");
        rep.lambda = g.codeword_count() / tuples;
    }
    return rep;
}

void certify(OrthogonalArray& a, int t, const Budget& budget, int threads) {
    bool exhaustive_ok = false;
    if (const auto* g = std::get_if<codes::GeneratorMatrix>(&a.storage)) {
        StrengthReport lin = verify_strength_linear(*g, t, budget, threads);
        if (!lin.pass)
            throw std::runtime_error("oa: linear certification failed at strength " +
                                     std::to_string(t));
        const std::uint64_t tuples = pow_u64_checked(a.q, static_cast<std::size_t>(t), "oa: q^t");
        const std::uint64_t subsets = binom_saturating(a.k, static_cast<std::size_t>(t));
        if (tuples <= budget.max_tuples && subsets <= budget.max_subsets &&
            a.runs <= budget.max_rows) {
            StrengthReport ex = verify_strength_exhaustive(a, t, budget, threads);
            if (!ex.pass)
                throw std::logic_error("oa: exhaustive certification contradicts linear");
            exhaustive_ok = true;
        }
        a.certified_strength = t;
        a.certification = exhaustive_ok ? Certification::exhaustive : Certification::linear;
        return;
    }
    StrengthReport ex = verify_strength_exhaustive(a, t, budget, threads);
    if (!ex.pass)
        throw std::runtime_error("oa: exhaustive certification failed at strength " +
                                 std::to_string(t));
    a.certified_strength = t;
    a.certification = Certification::exhaustive;
}

}  // namespace tdesign::oa
