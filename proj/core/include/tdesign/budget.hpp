#pragma once

#include <cstdint>

namespace tdesign {

/// Resource caps shared by the enumeration-heavy operations. Everything here
/// guards memory or wall time; exceeding a cap raises BudgetExceeded instead
/// of silently degrading.
struct Budget {
    /// Maximum number of rows any array or codeword set may materialize.
    std::uint64_t max_rows = std::uint64_t{1} << 24;

    /// Maximum histogram size q^t for exhaustive strength counting.
    std::uint64_t max_tuples = 10'000'000;

    /// Maximum number of column subsets C(k, t) a certification may visit.
    std::uint64_t max_subsets = 10'000'000;

    /// Maximum permutation-group size a closure computation may reach.
    std::uint64_t max_group = 1'000'000;

    /// Monomial count above which moment verification switches to sampling.
    std::uint64_t monomial_sample_cap = 100'000;
};

}  // namespace tdesign
