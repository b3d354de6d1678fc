#pragma once

#include "tdesign/budget.hpp"
#include "tdesign/gf.hpp"

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace tdesign::codes {

/// Row space of a set of GF(q)-symbol rows over a fixed column set, kept in
/// reduced row-echelon form. Rows are symbol vectors (field element codes),
/// so the object doubles as the compact backing store of a linear
/// orthogonal array: codewords are enumerated on demand instead of being
/// materialized.
struct GeneratorMatrix {
    std::shared_ptr<const gf::Field> field;        // symbol field GF(q)
    std::size_t k_cols = 0;
    std::vector<std::vector<std::int64_t>> rows;   // RREF basis, one row per pivot

    /// Strength the construction aimed at (0 when not applicable). Carried
    /// along so downstream column selection can sanity-check arity.
    int strength_target = 0;

    std::int64_t q() const { return field->order(); }
    std::size_t rank() const { return rows.size(); }

    /// q^rank; throws BudgetExceeded when it does not fit in 63 bits.
    std::uint64_t codeword_count() const;
};

/// Reduces arbitrary spanning rows to RREF and wraps them. Symbols must be
/// valid element codes of `field`.
GeneratorMatrix make_generator_matrix(std::shared_ptr<const gf::Field> field,
                                      std::size_t k_cols,
                                      const std::vector<std::vector<std::int64_t>>& spanning_rows,
                                      int strength_target = 0);

/// Generators of the evaluation-then-trace code over GF(q) with q^m
/// columns: column 0 evaluates at zero and column 1 + i at xi^i for the
/// primitive element xi of GF(q^m). The spanning set is the all-ones row
/// (constant functions of trace one) together with the traces of beta x^j
/// for beta in the GF(q)-basis {1, xi, ..., xi^(m-1)} and j = 1 .. t-1.
/// Any t columns of the result are linearly independent, which is what
/// makes the enumerated codewords an orthogonal array of strength t with
/// q^rank runs.
GeneratorMatrix trace_code_generators(std::int64_t q, int m, int t);

/// Same evaluation-then-trace construction for monomial degrees
/// [deg_lo, deg_hi], optionally augmented with the all-ones row. Exposed
/// for experimentation with nonstandard degree windows; no strength claim
/// is attached (strength_target stays 0), certify downstream.
GeneratorMatrix trace_code_generators_range(std::int64_t q, int m, int deg_lo, int deg_hi,
                                            bool with_all_ones);

/// GF(q)-rank via Gaussian elimination; idempotent on stored matrices.
std::size_t code_dimension(const GeneratorMatrix& g);

/// Restriction to the given columns (order preserved), re-reduced.
/// Duplicate or out-of-range indices are rejected, as is selecting fewer
/// columns than the matrix's strength target.
GeneratorMatrix puncture(const GeneratorMatrix& g, std::span<const std::size_t> columns);

/// Streams the q^rank codewords in lexicographic coefficient order (first
/// basis row's coefficient most significant). Instances are independent;
/// several enumerators may walk the same matrix concurrently.
class CodewordEnumerator {
public:
    explicit CodewordEnumerator(const GeneratorMatrix& g);

    std::uint64_t count() const { return count_; }

    /// Writes the next codeword into `row` (resized to k_cols); returns
    /// false once the enumeration is exhausted.
    bool next(std::vector<std::int64_t>& row);

    void reset();

private:
    const GeneratorMatrix* g_;
    std::vector<std::int64_t> coeff_;
    std::uint64_t count_ = 0;
    std::uint64_t emitted_ = 0;
};

/// All codewords, refused via BudgetExceeded when q^rank > cap.
std::vector<std::vector<std::int64_t>> materialize_codewords(const GeneratorMatrix& g,
                                                             std::uint64_t cap);

}  // namespace tdesign::codes
