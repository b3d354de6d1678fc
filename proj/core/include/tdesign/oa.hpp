#pragma once

#include "tdesign/budget.hpp"
#include "tdesign/codes.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace tdesign::oa {

/// How (and whether) the strength claim on an array was established.
enum class Certification { none, exhaustive, linear };

std::string to_string(Certification c);

/// Explicit N x k symbol table, row-major.
struct ExplicitRows {
    std::vector<int> data;
};

/// All q^k rows of the full grid [0,q)^k in lexicographic order (column 0
/// most significant). Never materialized.
struct FactorialGrid {};

/// N x k array over q symbols together with its certification state.
/// Storage is one of: explicit rows, a linear-code generator matrix whose
/// codewords are the rows, or the implicit full grid.
struct OrthogonalArray {
    std::int64_t q = 0;
    std::size_t k = 0;
    std::uint64_t runs = 0;

    std::variant<ExplicitRows, codes::GeneratorMatrix, FactorialGrid> storage;

    int certified_strength = 0;
    Certification certification = Certification::none;

    bool generator_backed() const {
        return std::holds_alternative<codes::GeneratorMatrix>(storage);
    }
};

OrthogonalArray from_rows(std::int64_t q, std::size_t k, std::vector<int> row_major_data);
OrthogonalArray from_generator(codes::GeneratorMatrix g);

/// Implicit q^k grid; q may be any integer >= 2 (no field needed). Throws
/// when q^k overflows 63 bits.
OrthogonalArray full_factorial(std::int64_t q, std::size_t k);

/// Streams rows in the array's canonical order. Independent instances may
/// walk the same array concurrently; arrays are immutable while streamed.
class RowStream {
public:
    explicit RowStream(const OrthogonalArray& a);

    /// Writes the next row into out (size k); false when exhausted.
    bool next(std::span<int> out);

    void reset();

private:
    const OrthogonalArray* a_;
    std::uint64_t emitted_ = 0;
    // generator-backed state
    std::optional<codes::CodewordEnumerator> en_;
    std::vector<std::int64_t> scratch_;
};

/// Flat N x k copy of the rows; BudgetExceeded when N > cap.
std::vector<int> materialize_rows(const OrthogonalArray& a, std::uint64_t cap);

struct Violation {
    std::vector<std::size_t> columns;
    std::vector<int> tuple;       // empty for rank violations
    std::uint64_t count = 0;      // observed
    std::uint64_t expected = 0;   // N / q^t
};

struct StrengthReport {
    int strength = 0;
    bool pass = false;
    std::uint64_t lambda = 0;     // tuple multiplicity N / q^t when pass
    std::optional<Violation> violation;
    std::string method;           // "exhaustive" or "linear"
};

/// Counts every t-tuple in every t-column projection against N / q^t.
/// Needs q^t within budget.max_tuples, C(k, t) within budget.max_subsets,
/// and rows materializable within budget.max_rows; refuses otherwise.
/// `threads` > 1 splits the column subsets across workers (the report is
/// identical for any thread count).
StrengthReport verify_strength_exhaustive(const OrthogonalArray& a, int t,
                                          const Budget& budget = {}, int threads = 1);

/// Linear-array shortcut: strength t holds iff every t-column selection of
/// the generator matrix has GF(q)-rank t. C(k, t) within
/// budget.max_subsets; refuses otherwise.
StrengthReport verify_strength_linear(const codes::GeneratorMatrix& g, int t,
                                      const Budget& budget = {}, int threads = 1);

/// Runs the applicable certifications at strength t and stamps the array:
/// linear when generator-backed (always), exhaustive when within budget.
/// Throws std::runtime_error if a check fails (the array is not a strength-t
/// OA); leaves the array stamped with the strongest passing method.
void certify(OrthogonalArray& a, int t, const Budget& budget = {}, int threads = 1);

}  // namespace tdesign::oa
