#include "tdesign/codes.hpp"

#include "tdesign/errors.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>

namespace tdesign::codes {
namespace {

// In-place reduction to RREF over GF(q); returns the nonzero rows.
std::vector<std::vector<std::int64_t>> rref(const gf::Field& f,
                                            std::vector<std::vector<std::int64_t>> rows,
                                            std::size_t k_cols) {
    std::size_t pivot_row = 0;
    for (std::size_t col = 0; col < k_cols && pivot_row < rows.size(); ++col) {
        std::size_t sel = pivot_row;
        while (sel < rows.size() && rows[sel][col] == 0) ++sel;
        if (sel == rows.size()) continue;
        std::swap(rows[pivot_row], rows[sel]);

        const std::int64_t scale = f.inv(rows[pivot_row][col]);
        for (std::size_t j = col; j < k_cols; ++j)
            rows[pivot_row][j] = f.mul(rows[pivot_row][j], scale);

        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r == pivot_row || rows[r][col] == 0) continue;
            const std::int64_t factor = rows[r][col];
            for (std::size_t j = col; j < k_cols; ++j)
                rows[r][j] = f.sub(rows[r][j], f.mul(factor, rows[pivot_row][j]));
        }
        ++pivot_row;
    }
    rows.resize(pivot_row);
    return rows;
}

void check_symbols(const gf::Field& f, const std::vector<std::vector<std::int64_t>>& rows,
                   std::size_t k_cols) {
    for (const auto& r : rows) {
        if (r.size() != k_cols)
            throw std::invalid_argument("codes: row length does not match column count");
        for (std::int64_t s : r)
            if (s < 0 || s >= f.order())
                throw std::invalid_argument("codes: symbol is not a valid field element code");
    }
}

// Factors a prime power; throws when q is not one.
std::pair<std::int64_t, int> prime_power_split(std::int64_t q) {
    if (q < 2) throw std::invalid_argument("codes: level count must be >= 2");
    std::int64_t p = q;
    for (std::int64_t d = 2; d * d <= q; ++d) {
        if (q % d == 0) {
            p = d;
            break;
        }
    }
    int e = 0;
    std::int64_t rest = q;
    while (rest % p == 0) {
        rest /= p;
        ++e;
    }
    if (rest != 1)
        throw std::invalid_argument("codes: " + std::to_string(q) + " is not a prime power");
    return {p, e};
}

}  // namespace

std::uint64_t GeneratorMatrix::codeword_count() const {
    const std::uint64_t limit = std::uint64_t{1} << 63;
    std::uint64_t n = 1;
    for (std::size_t i = 0; i < rank(); ++i) {
        if (n > limit / static_cast<std::uint64_t>(q()))
            throw BudgetExceeded("codes: codeword count overflows 63 bits", limit, limit);
        n *= static_cast<std::uint64_t>(q());
    }
    return n;
}

GeneratorMatrix make_generator_matrix(std::shared_ptr<const gf::Field> field,
                                      std::size_t k_cols,
                                      const std::vector<std::vector<std::int64_t>>& spanning_rows,
                                      int strength_target) {
    if (!field) throw std::invalid_argument("codes: null field context");
    if (k_cols == 0) throw std::invalid_argument("codes: need at least one column");
    check_symbols(*field, spanning_rows, k_cols);

    GeneratorMatrix g;
    g.field = std::move(field);
    g.k_cols = k_cols;
    g.rows = rref(*g.field, spanning_rows, k_cols);
    g.strength_target = strength_target;
    return g;
}

GeneratorMatrix trace_code_generators_range(std::int64_t q, int m, int deg_lo, int deg_hi,
                                            bool with_all_ones) {
    auto [p, e] = prime_power_split(q);
    if (m < 1 || m > 20) throw std::invalid_argument("codes: extension exponent m out of range");
    if (deg_lo < 1 || deg_hi < deg_lo)
        throw std::invalid_argument("codes: bad monomial degree window");

    auto big = std::make_shared<const gf::Field>(gf::Field::make_with_base(p, e * m, e));
    auto base = std::make_shared<const gf::Field>(gf::Field::make(p, e));

    const std::int64_t big_order = big->order();
    const std::size_t k_cols = static_cast<std::size_t>(big_order);  // zero + all powers of xi
    const std::int64_t xi = big->primitive_element();

    // evaluation points: 0, xi^0, xi^1, ..., xi^(q^m - 2)
    std::vector<std::int64_t> points(k_cols);
    points[0] = 0;
    std::int64_t pw = 1;
    for (std::size_t i = 1; i < k_cols; ++i) {
        points[i] = pw;
        pw = big->mul(pw, xi);
    }

    // GF(q)-basis of GF(q^m): 1, xi, ..., xi^(m-1)
    std::vector<std::int64_t> basis(m);
    std::int64_t b = 1;
    for (int i = 0; i < m; ++i) {
        basis[i] = b;
        b = big->mul(b, xi);
    }

    std::vector<std::vector<std::int64_t>> rows;
    if (with_all_ones) rows.emplace_back(k_cols, 1);
    for (int j = deg_lo; j <= deg_hi; ++j) {
        for (int bi = 0; bi < m; ++bi) {
            std::vector<std::int64_t> row(k_cols);
            for (std::size_t c = 0; c < k_cols; ++c) {
                const std::int64_t pj = big->pow(points[c], static_cast<std::uint64_t>(j));
                row[c] = big->trace_to_base(big->mul(basis[bi], pj));
            }
            rows.push_back(std::move(row));
        }
    }
    return make_generator_matrix(std::move(base), k_cols, rows, 0);
}

GeneratorMatrix trace_code_generators(std::int64_t q, int m, int t) {
    auto [p, e] = prime_power_split(q);
    (void)p;
    (void)e;
    if (m < 1 || m > 20) throw std::invalid_argument("codes: extension exponent m out of range");
    std::int64_t big_order = 1;
    for (int i = 0; i < m; ++i) {
        big_order *= q;
        if (big_order > (std::int64_t{1} << 20))
            throw std::invalid_argument("codes: q^m exceeds the supported field bound 2^20");
    }
    if (t < 2 || static_cast<std::int64_t>(t) > big_order - 1)
        throw std::invalid_argument("codes: strength must satisfy 2 <= t <= q^m - 1");

    GeneratorMatrix g = trace_code_generators_range(q, m, 1, t - 1, true);
    g.strength_target = t;
    return g;
}

std::size_t code_dimension(const GeneratorMatrix& g) {
    return rref(*g.field, g.rows, g.k_cols).size();
}

GeneratorMatrix puncture(const GeneratorMatrix& g, std::span<const std::size_t> columns) {
    if (g.strength_target > 0 && columns.size() < static_cast<std::size_t>(g.strength_target))
        throw std::invalid_argument("codes: selection narrower than the strength target");
    std::set<std::size_t> seen;
    for (std::size_t c : columns) {
        if (c >= g.k_cols) throw std::invalid_argument("codes: column index out of range");
        if (!seen.insert(c).second) throw std::invalid_argument("codes: duplicate column index");
    }
    if (columns.empty()) throw std::invalid_argument("codes: empty column selection");

    std::vector<std::vector<std::int64_t>> rows;
    rows.reserve(g.rows.size());
    for (const auto& r : g.rows) {
        std::vector<std::int64_t> nr(columns.size());
        for (std::size_t i = 0; i < columns.size(); ++i) nr[i] = r[columns[i]];
        rows.push_back(std::move(nr));
    }
    GeneratorMatrix out = make_generator_matrix(g.field, columns.size(), rows, g.strength_target);
    return out;
}

CodewordEnumerator::CodewordEnumerator(const GeneratorMatrix& g)
    : g_(&g), coeff_(g.rank(), 0), count_(g.codeword_count()) {}

bool CodewordEnumerator::next(std::vector<std::int64_t>& row) {
    if (emitted_ >= count_) return false;
    const gf::Field& f = *g_->field;
    row.assign(g_->k_cols, 0);
    for (std::size_t i = 0; i < coeff_.size(); ++i) {
        if (coeff_[i] == 0) continue;
        const auto& basis_row = g_->rows[i];
        for (std::size_t j = 0; j < g_->k_cols; ++j)
            row[j] = f.add(row[j], f.mul(coeff_[i], basis_row[j]));
    }
    ++emitted_;
    // odometer, last coefficient fastest (lexicographic on the vector)
    for (std::size_t i = coeff_.size(); i-- > 0;) {
        if (++coeff_[i] < f.order()) break;
        coeff_[i] = 0;
    }
    return true;
}

void CodewordEnumerator::reset() {
    std::fill(coeff_.begin(), coeff_.end(), 0);
    emitted_ = 0;
}

std::vector<std::vector<std::int64_t>> materialize_codewords(const GeneratorMatrix& g,
                                                             std::uint64_t cap) {
    const std::uint64_t n = g.codeword_count();
    if (n > cap)
        throw BudgetExceeded("codes: " + std::to_string(n) +
                                 " codewords exceed the materialization budget",
                             n, cap);
    std::vector<std::vector<std::int64_t>> out;
    out.reserve(static_cast<std::size_t>(n));
    CodewordEnumerator en(g);
    std::vector<std::int64_t> row;
    while (en.next(row)) out.push_back(row);
    return out;
}

}  // namespace tdesign::codes
