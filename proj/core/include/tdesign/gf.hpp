#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

namespace tdesign::gf {

/// Arithmetic context for GF(p^e). Elements travel as integer codes in
/// [0, p^e): the code is the base-p evaluation of the polynomial-basis
/// coefficient vector, so 0 and 1 are the additive and multiplicative
/// identities and prime-field codes coincide with ordinary residues.
///
/// The modulus is the lexicographically smallest monic irreducible of
/// degree e over GF(p) (coefficient codes compared low degree first), which
/// makes every context reproducible from (p, e) alone. Contexts are
/// immutable after construction and safe to share across threads.
class Field {
public:
    /// GF(p^e). Throws std::invalid_argument for non-prime p, e < 1, or
    /// p^e > 2^20 (the supported size range).
    static Field make(std::int64_t p, int e);

    /// GF(p^e) with the subfield GF(p^base_degree) marked (base_degree must
    /// divide e). Precomputes the subfield embedding used by trace().
    static Field make_with_base(std::int64_t p, int e, int base_degree);

    std::int64_t p() const noexcept { return p_; }
    int e() const noexcept { return e_; }
    std::int64_t order() const noexcept { return order_; }

    /// Monic modulus polynomial, length e + 1, coefficients in [0, p).
    /// Degree-one contexts use the "x - 0" convention: modulus = {0, 1}.
    const std::vector<std::int64_t>& modulus() const noexcept { return modulus_; }

    std::optional<int> base_degree() const noexcept;

    /// Same (p, e, modulus); element codes are interchangeable between
    /// contexts that compare equal.
    bool same_context(const Field& other) const noexcept;

    std::int64_t add(std::int64_t a, std::int64_t b) const;
    std::int64_t sub(std::int64_t a, std::int64_t b) const;
    std::int64_t neg(std::int64_t a) const;
    std::int64_t mul(std::int64_t a, std::int64_t b) const;

    /// Multiplicative inverse; throws std::domain_error on zero.
    std::int64_t inv(std::int64_t a) const;

    /// Square-and-multiply; pow(0, 0) == 1.
    std::int64_t pow(std::int64_t a, std::uint64_t k) const;

    /// Coefficient vector (length e, low degree first) of an element code.
    std::vector<std::int64_t> coeffs(std::int64_t code) const;
    std::int64_t code_from_coeffs(const std::vector<std::int64_t>& c) const;

    /// Smallest element code that generates the multiplicative group.
    std::int64_t primitive_element() const noexcept { return primitive_; }

    /// Order of a in the multiplicative group; throws on zero.
    std::uint64_t multiplicative_order(std::int64_t a) const;

    /// Trace onto the marked subfield: x + x^q + ... + x^(q^(m-1)) with
    /// q = p^base_degree and m = e / base_degree. The result is returned as
    /// an element code of the base field context (see base_field()).
    /// Throws std::logic_error when no base degree was marked.
    std::int64_t trace_to_base(std::int64_t x) const;

    /// Image of a base-field code under the subfield embedding.
    std::int64_t embed_from_base(std::int64_t base_code) const;

    /// The canonical GF(p^base_degree) context the trace maps onto.
    const Field& base_field() const;

private:
    Field() = default;
    void check_code(std::int64_t a) const;

    std::int64_t p_ = 0;
    int e_ = 0;
    std::int64_t order_ = 0;
    std::vector<std::int64_t> modulus_;
    std::int64_t primitive_ = 0;

    int base_degree_ = 0;  // 0 = no subfield marked
    std::shared_ptr<const Field> base_;
    std::vector<std::int64_t> base_image_powers_;          // rho^0 .. rho^(b-1)
    std::unordered_map<std::int64_t, std::int64_t> base_preimage_;
};

/// Element with its context attached; mixing contexts throws FieldMismatch.
/// Convenience layer over the code-level Field API for call sites where the
/// extra check is worth the indirection.
class Element {
public:
    Element(const Field& field, std::int64_t code);

    std::int64_t code() const noexcept { return code_; }
    const Field& field() const noexcept { return *field_; }

    friend Element operator+(const Element& a, const Element& b);
    friend Element operator-(const Element& a, const Element& b);
    friend Element operator*(const Element& a, const Element& b);
    friend Element operator/(const Element& a, const Element& b);
    friend bool operator==(const Element& a, const Element& b);

private:
    static const Field& require_same(const Element& a, const Element& b);

    const Field* field_;
    std::int64_t code_;
};

}  // namespace tdesign::gf
