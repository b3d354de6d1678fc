#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace tdesign {

/// Binomial coefficient saturating at 2^63 - 1 instead of overflowing.
inline std::uint64_t monomial_binom(std::uint64_t n, std::uint64_t k) {
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

/// Number of exponent vectors in `dim` variables of total degree <= max_degree.
inline std::uint64_t monomial_count(int dim, int max_degree) {
    if (dim < 1 || max_degree < 0)
        throw std::invalid_argument("monomial: need dim >= 1 and degree >= 0");
    return monomial_binom(static_cast<std::uint64_t>(dim) +
                              static_cast<std::uint64_t>(max_degree),
                          static_cast<std::uint64_t>(max_degree));
}

/// Number of exponent vectors of total degree exactly s.
inline std::uint64_t monomial_count_exact(int dim, int s) {
    if (dim < 1 || s < 0)
        throw std::invalid_argument("monomial: need dim >= 1 and degree >= 0");
    return monomial_binom(static_cast<std::uint64_t>(s) + static_cast<std::uint64_t>(dim) - 1,
                          static_cast<std::uint64_t>(dim) - 1);
}

/// Walks every exponent vector of total degree <= max_degree in graded
/// order: degree ascending, and within a degree in decreasing lexicographic
/// order, so for three variables degree two runs (2,0,0), (1,1,0), (1,0,1),
/// (0,2,0), (0,1,1), (0,0,2).
class MonomialEnumerator {
public:
    MonomialEnumerator(int dim, int max_degree)
        : dim_(dim), max_degree_(max_degree) {
        if (dim < 1 || max_degree < 0)
            throw std::invalid_argument("monomial: need dim >= 1 and degree >= 0");
        reset();
    }

    std::uint64_t count() const { return monomial_count(dim_, max_degree_); }

    void reset() {
        current_.assign(static_cast<std::size_t>(dim_), 0);
        degree_ = 0;
        fresh_ = true;
    }

    bool next(std::vector<int>& exponents) {
        if (fresh_) {
            fresh_ = false;
            exponents = current_;
            return true;
        }
        const std::size_t d = static_cast<std::size_t>(dim_);
        if (current_[d - 1] == degree_) {
            // last vector of this degree; open the next one
            if (degree_ == max_degree_) return false;
            ++degree_;
            current_.assign(d, 0);
            current_[0] = degree_;
        } else {
            // move one unit from the rightmost interior positive entry to
            // its right neighbour, pulling the tail back behind it
            std::size_t i = d - 2;
            while (current_[i] == 0) --i;
            const int tail = current_[d - 1];
            current_[i] -= 1;
            if (i + 1 != d - 1) current_[d - 1] = 0;
            current_[i + 1] = tail + 1;
        }
        exponents = current_;
        return true;
    }

private:
    int dim_;
    int max_degree_;
    int degree_ = 0;
    bool fresh_ = true;
    std::vector<int> current_;
};

}  // namespace tdesign
