#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "tdesign/errors.hpp"
#include "tdesign/gf.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

using tdesign::gf::Field;

namespace {

std::vector<std::pair<std::int64_t, int>> small_field_params() {
    std::vector<std::pair<std::int64_t, int>> params;
    for (std::int64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59,
                           61, 67, 71, 73, 79}) {
        std::int64_t size = p;
        for (int e = 1; size <= 81; ++e, size *= p) params.emplace_back(p, e);
    }
    return params;
}

}  // namespace

TEST_CASE("prime field arithmetic matches modular arithmetic") {
    const Field f = Field::make(7, 1);
    CHECK(f.order() == 7);
    CHECK(f.mul(3, 5) == 1);
    for (std::int64_t a = 0; a < 7; ++a)
        for (std::int64_t b = 0; b < 7; ++b) {
            CHECK(f.add(a, b) == (a + b) % 7);
            CHECK(f.mul(a, b) == (a * b) % 7);
            CHECK(f.sub(a, b) == ((a - b) % 7 + 7) % 7);
        }
}

TEST_CASE("canonical moduli are the smallest irreducibles") {
    CHECK(Field::make(2, 3).modulus() == std::vector<std::int64_t>{1, 1, 0, 1});
    CHECK(Field::make(3, 2).modulus() == std::vector<std::int64_t>{1, 0, 1});
    CHECK(Field::make(7, 1).modulus() == std::vector<std::int64_t>{0, 1});
}

TEST_CASE("GF(8) multiplication reduces by x^3 + x + 1") {
    const Field f = Field::make(2, 3);
    CHECK(f.mul(2, 4) == 3);  // x * x^2 = x + 1
    CHECK(f.pow(2, 3) == 3);
    CHECK(f.pow(2, 7) == 1);
}

TEST_CASE("GF(9) squares the generator to -1") {
    const Field f = Field::make(3, 2);
    CHECK(f.mul(3, 3) == 2);  // x * x = -1 under x^2 + 1
    const std::int64_t xinv = f.inv(3);
    CHECK(f.mul(3, xinv) == 1);
}

TEST_CASE("inversion of zero is rejected") {
    const Field f = Field::make(5, 1);
    CHECK_THROWS_AS((void)f.inv(0), std::domain_error);
}

TEST_CASE("construction rejects bad parameters") {
    CHECK_THROWS_AS((void)Field::make(6, 1), std::invalid_argument);
    CHECK_THROWS_AS((void)Field::make(4, 1), std::invalid_argument);
    CHECK_THROWS_AS((void)Field::make(2, 0), std::invalid_argument);
    CHECK_THROWS_AS((void)Field::make(2, 21), std::invalid_argument);
}

TEST_CASE("primitive elements are the smallest generators") {
    CHECK(Field::make(7, 1).primitive_element() == 3);
    CHECK(Field::make(2, 1).primitive_element() == 1);
    CHECK(Field::make(2, 3).primitive_element() == 2);
}

TEST_CASE("primitive element order equals the group order") {
    for (const auto& [p, e] : small_field_params()) {
        const Field f = Field::make(p, e);
        CHECK(f.multiplicative_order(f.primitive_element()) ==
              static_cast<std::uint64_t>(f.order() - 1));
    }
}

TEST_CASE("field axioms hold exhaustively for every field up to order 81") {
    for (const auto& [p, e] : small_field_params()) {
        const Field f = Field::make(p, e);
        const std::int64_t n = f.order();

        for (std::int64_t a = 1; a < n; ++a) {
            const std::int64_t ai = f.inv(a);
            REQUIRE(f.mul(a, ai) == 1);
        }
        for (std::int64_t a = 0; a < n; ++a) {
            REQUIRE(f.add(a, 0) == a);
            REQUIRE(f.mul(a, 1) == a);
            REQUIRE(f.add(a, f.neg(a)) == 0);
            for (std::int64_t b = 0; b < n; ++b) {
                REQUIRE(f.add(a, b) == f.add(b, a));
                REQUIRE(f.mul(a, b) == f.mul(b, a));
                for (std::int64_t c = 0; c < n; ++c) {
                    REQUIRE(f.add(f.add(a, b), c) == f.add(a, f.add(b, c)));
                    REQUIRE(f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c)));
                    REQUIRE(f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }
}

TEST_CASE("coefficient codecs round-trip") {
    const Field f = Field::make(3, 3);
    for (std::int64_t code = 0; code < f.order(); ++code)
        CHECK(f.code_from_coeffs(f.coeffs(code)) == code);
}

TEST_CASE("trace of GF(4) over GF(2) hits the textbook value") {
    const Field f = Field::make_with_base(2, 2, 1);
    const std::int64_t w = f.primitive_element();
    CHECK(f.trace_to_base(w) == 1);  // w + w^2 = 1 under x^2 + x + 1
    CHECK(f.trace_to_base(0) == 0);
}

TEST_CASE("trace without a marked subfield is rejected") {
    const Field f = Field::make(2, 2);
    CHECK_THROWS_AS((void)f.trace_to_base(1), std::logic_error);
}

TEST_CASE("trace is degenerate for m = 1") {
    const Field f = Field::make_with_base(7, 1, 1);
    for (std::int64_t a = 0; a < 7; ++a) CHECK(f.trace_to_base(a) == a);
}

TEST_CASE("trace is base-linear with uniform fibers on all small towers") {
    const std::vector<std::array<int, 3>> towers = {
        {2, 2, 1}, {2, 3, 1}, {2, 4, 1}, {2, 4, 2}, {2, 6, 1}, {2, 6, 2}, {2, 6, 3},
        {3, 2, 1}, {3, 3, 1}, {3, 4, 1}, {3, 4, 2}, {5, 2, 1}, {7, 2, 1}};
    for (const auto& [p, e, b] : towers) {
        const Field f = Field::make_with_base(p, e, b);
        const Field& base = f.base_field();
        const std::int64_t q = base.order();
        const std::int64_t n = f.order();

        std::map<std::int64_t, std::int64_t> fiber;
        for (std::int64_t x = 0; x < n; ++x) {
            const std::int64_t tx = f.trace_to_base(x);
            REQUIRE(tx >= 0);
            REQUIRE(tx < q);
            fiber[tx] += 1;
        }
        REQUIRE(fiber.size() == static_cast<std::size_t>(q));
        for (const auto& [value, count] : fiber) REQUIRE(count == n / q);

        // T(ax + by) = aT(x) + bT(y) for base-field scalars a, b
        for (std::int64_t a = 0; a < q; ++a)
            for (std::int64_t x = 0; x < n; x += 3)
                for (std::int64_t y = 1; y < n; y += 5) {
                    const std::int64_t ax = f.mul(f.embed_from_base(a), x);
                    const std::int64_t lhs = f.trace_to_base(f.add(ax, y));
                    const std::int64_t rhs =
                        base.add(base.mul(a, f.trace_to_base(x)), f.trace_to_base(y));
                    REQUIRE(lhs == rhs);
                }
    }
}

TEST_CASE("embedding carries base arithmetic into the extension") {
    const Field f = Field::make_with_base(3, 4, 2);
    const Field& base = f.base_field();
    for (std::int64_t a = 0; a < base.order(); ++a)
        for (std::int64_t b = 0; b < base.order(); ++b) {
            CHECK(f.embed_from_base(base.add(a, b)) ==
                  f.add(f.embed_from_base(a), f.embed_from_base(b)));
            CHECK(f.embed_from_base(base.mul(a, b)) ==
                  f.mul(f.embed_from_base(a), f.embed_from_base(b)));
        }
}

TEST_CASE("element wrapper enforces matching contexts") {
    using tdesign::gf::Element;
    const Field f8 = Field::make(2, 3);
    const Field f9 = Field::make(3, 2);
    const Element a(f8, 3);
    const Element b(f8, 5);
    CHECK((a * b).code() == f8.mul(3, 5));
    const Element c(f9, 1);
    CHECK_THROWS_AS((void)(a + c), tdesign::FieldMismatch);
}
