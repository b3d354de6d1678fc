#include "tdesign/gf.hpp"

#include "tdesign/errors.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>
#include <string>

namespace tdesign::gf {
namespace {

constexpr std::int64_t kMaxOrder = std::int64_t{1} << 20;
constexpr int kMaxDegree = 40;  // digits buffers; order <= 2^20 keeps e <= 20

bool is_prime(std::int64_t n) {
    if (n < 2) return false;
    for (std::int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

std::int64_t mod_p(std::int64_t v, std::int64_t p) {
    v %= p;
    return v < 0 ? v + p : v;
}

// --- dense polynomials over GF(p), low degree first, used only while
// --- searching for the field modulus (no Field context exists yet)

using Poly = std::vector<std::int64_t>;

void trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

std::int64_t invmod_prime(std::int64_t a, std::int64_t p) {
    // Fermat; p prime and a != 0 mod p
    std::int64_t r = 1, base = mod_p(a, p);
    std::int64_t k = p - 2;
    while (k > 0) {
        if (k & 1) r = r * base % p;
        base = base * base % p;
        k >>= 1;
    }
    return r;
}

Poly poly_mul_mod(const Poly& a, const Poly& b, const Poly& f, std::int64_t p) {
    if (a.empty() || b.empty()) return {};
    Poly c(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            c[i + j] = mod_p(c[i + j] + a[i] * b[j], p);
    }
    const std::size_t deg_f = f.size() - 1;  // f monic
    for (std::size_t i = c.size(); i-- > deg_f;) {
        const std::int64_t q = c[i];
        if (q == 0) continue;
        c[i] = 0;
        for (std::size_t j = 0; j < deg_f; ++j)
            c[i - deg_f + j] = mod_p(c[i - deg_f + j] - q * f[j], p);
    }
    c.resize(deg_f);
    trim(c);
    return c;
}

Poly poly_pow_mod(Poly base, std::uint64_t k, const Poly& f, std::int64_t p) {
    Poly r = {1};
    while (k > 0) {
        if (k & 1) r = poly_mul_mod(r, base, f, p);
        base = poly_mul_mod(base, base, f, p);
        k >>= 1;
    }
    return r;
}

Poly poly_gcd(Poly a, Poly b, std::int64_t p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        // a mod b
        const std::int64_t lead_inv = invmod_prime(b.back(), p);
        while (a.size() >= b.size()) {
            const std::int64_t q = mod_p(a.back() * lead_inv, p);
            if (q != 0) {
                const std::size_t shift = a.size() - b.size();
                for (std::size_t j = 0; j < b.size(); ++j)
                    a[shift + j] = mod_p(a[shift + j] - q * b[j], p);
            }
            a.pop_back();
            trim(a);
            if (a.empty()) break;
        }
        std::swap(a, b);
    }
    return a;
}

// Rabin test: f (monic, degree e) is irreducible over GF(p) iff
// x^(p^e) == x (mod f) and gcd(x^(p^(e/r)) - x, f) = 1 for each prime r | e.
bool is_irreducible(const Poly& f, std::int64_t p) {
    const int e = static_cast<int>(f.size()) - 1;
    if (e == 1) return true;

    std::vector<int> prime_divisors;
    int n = e;
    for (int r = 2; r * r <= n; ++r) {
        if (n % r == 0) {
            prime_divisors.push_back(r);
            while (n % r == 0) n /= r;
        }
    }
    if (n > 1) prime_divisors.push_back(n);

    // iterated Frobenius: frob[i] = x^(p^i) mod f
    Poly x = {0, 1};
    Poly cur = x;
    std::vector<Poly> frob(e + 1);
    frob[0] = x;
    for (int i = 1; i <= e; ++i) {
        cur = poly_pow_mod(cur, static_cast<std::uint64_t>(p), f, p);
        frob[i] = cur;
    }
    if (frob[e] != x) return false;
    for (int r : prime_divisors) {
        Poly h = frob[e / r];
        // h - x
        if (h.size() < 2) h.resize(2, 0);
        h[1] = mod_p(h[1] - 1, p);
        trim(h);
        Poly g = poly_gcd(f, h, p);
        if (!(g.size() == 1)) return false;  // nonconstant common factor
    }
    return true;
}

}  // namespace

Field Field::make(std::int64_t p, int e) {
    if (!is_prime(p)) throw std::invalid_argument("gf: p must be prime, got " + std::to_string(p));
    if (e < 1) throw std::invalid_argument("gf: extension degree must be >= 1");
    std::int64_t order = 1;
    for (int i = 0; i < e; ++i) {
        order *= p;
        if (order > kMaxOrder)
            throw std::invalid_argument("gf: field order exceeds supported bound 2^20");
    }

    Field f;
    f.p_ = p;
    f.e_ = e;
    f.order_ = order;

    // lexicographically smallest monic irreducible: scan codes of the
    // non-leading coefficient block (base-p, low digit = constant term)
    std::int64_t low_count = order;  // p^e candidates
    Poly candidate(e + 1, 0);
    candidate[e] = 1;
    bool found = false;
    for (std::int64_t v = 0; v < low_count; ++v) {
        std::int64_t rest = v;
        for (int i = 0; i < e; ++i) {
            candidate[i] = rest % p;
            rest /= p;
        }
        if (is_irreducible(candidate, p)) {
            found = true;
            break;
        }
    }
    if (!found) throw std::logic_error("gf: no irreducible modulus found");  // cannot happen
    f.modulus_ = candidate;

    // smallest primitive element: strip prime factors of the group order
    std::vector<std::int64_t> prime_factors;
    std::int64_t n = order - 1;
    for (std::int64_t r = 2; r * r <= n; ++r) {
        if (n % r == 0) {
            prime_factors.push_back(r);
            while (n % r == 0) n /= r;
        }
    }
    if (n > 1) prime_factors.push_back(n);
    for (std::int64_t c = 1; c < order; ++c) {
        bool ok = true;
        for (std::int64_t r : prime_factors) {
            if (f.pow(c, static_cast<std::uint64_t>((order - 1) / r)) == 1) {
                ok = false;
                break;
            }
        }
        if (ok) {
            f.primitive_ = c;
            break;
        }
    }
    return f;
}

Field Field::make_with_base(std::int64_t p, int e, int base_degree) {
    if (base_degree < 1 || e % base_degree != 0)
        throw std::invalid_argument("gf: base degree must divide the extension degree");
    Field f = make(p, e);
    f.base_degree_ = base_degree;
    f.base_ = std::make_shared<const Field>(make(p, base_degree));

    const int b = base_degree;
    if (b == e || b == 1) return f;  // identity embedding on codes

    // The subfield of order p^b is the set of roots of the base modulus;
    // embed by sending the base generator (class of x) to the smallest root.
    const auto& base_mod = f.base_->modulus();
    std::int64_t rho = -1;
    for (std::int64_t c = 0; c < f.order_; ++c) {
        std::int64_t acc = 0;
        for (int i = b; i >= 0; --i) acc = f.add(f.mul(acc, c), base_mod[i]);
        if (acc == 0) {
            rho = c;
            break;
        }
    }
    if (rho < 0) throw std::logic_error("gf: base modulus has no root in extension");

    f.base_image_powers_.resize(b);
    std::int64_t pw = 1;
    for (int i = 0; i < b; ++i) {
        f.base_image_powers_[i] = pw;
        pw = f.mul(pw, rho);
    }
    for (std::int64_t c = 0; c < f.base_->order(); ++c) {
        std::int64_t img = 0;
        std::int64_t rest = c;
        for (int i = 0; i < b; ++i) {
            img = f.add(img, f.mul(rest % p, f.base_image_powers_[i]));
            rest /= p;
        }
        f.base_preimage_.emplace(img, c);
    }
    return f;
}

std::optional<int> Field::base_degree() const noexcept {
    if (base_degree_ == 0) return std::nullopt;
    return base_degree_;
}

bool Field::same_context(const Field& other) const noexcept {
    return p_ == other.p_ && e_ == other.e_ && modulus_ == other.modulus_;
}

void Field::check_code(std::int64_t a) const {
    if (a < 0 || a >= order_)
        throw std::out_of_range("gf: element code " + std::to_string(a) + " outside [0, " +
                                std::to_string(order_) + ")");
}

std::int64_t Field::add(std::int64_t a, std::int64_t b) const {
    check_code(a);
    check_code(b);
    if (e_ == 1) return (a + b) % p_;
    std::int64_t r = 0, pw = 1;
    for (int i = 0; i < e_; ++i) {
        r += (a % p_ + b % p_) % p_ * pw;
        a /= p_;
        b /= p_;
        pw *= p_;
    }
    return r;
}

std::int64_t Field::sub(std::int64_t a, std::int64_t b) const {
    check_code(a);
    check_code(b);
    if (e_ == 1) return mod_p(a - b, p_);
    std::int64_t r = 0, pw = 1;
    for (int i = 0; i < e_; ++i) {
        r += mod_p(a % p_ - b % p_, p_) * pw;
        a /= p_;
        b /= p_;
        pw *= p_;
    }
    return r;
}

std::int64_t Field::neg(std::int64_t a) const { return sub(0, a); }

std::int64_t Field::mul(std::int64_t a, std::int64_t b) const {
    check_code(a);
    check_code(b);
    if (e_ == 1) return a * b % p_;

    std::array<std::int64_t, kMaxDegree> da{}, db{}, buf{};
    std::int64_t ta = a, tb = b;
    for (int i = 0; i < e_; ++i) {
        da[i] = ta % p_;
        ta /= p_;
        db[i] = tb % p_;
        tb /= p_;
    }
    for (int i = 0; i < e_; ++i) {
        if (da[i] == 0) continue;
        for (int j = 0; j < e_; ++j) buf[i + j] = (buf[i + j] + da[i] * db[j]) % p_;
    }
    for (int i = 2 * e_ - 2; i >= e_; --i) {
        const std::int64_t q = buf[i] % p_;
        if (q == 0) continue;
        buf[i] = 0;
        for (int j = 0; j < e_; ++j) buf[i - e_ + j] = mod_p(buf[i - e_ + j] - q * modulus_[j], p_);
    }
    std::int64_t r = 0, pw = 1;
    for (int i = 0; i < e_; ++i) {
        r += mod_p(buf[i], p_) * pw;
        pw *= p_;
    }
    return r;
}

std::int64_t Field::inv(std::int64_t a) const {
    check_code(a);
    if (a == 0) throw std::domain_error("gf: zero has no multiplicative inverse");
    return pow(a, static_cast<std::uint64_t>(order_ - 2));
}

std::int64_t Field::pow(std::int64_t a, std::uint64_t k) const {
    check_code(a);
    std::int64_t r = 1, base = a;
    while (k > 0) {
        if (k & 1) r = mul(r, base);
        base = mul(base, base);
        k >>= 1;
    }
    return r;
}

std::vector<std::int64_t> Field::coeffs(std::int64_t code) const {
    check_code(code);
    std::vector<std::int64_t> c(e_);
    for (int i = 0; i < e_; ++i) {
        c[i] = code % p_;
        code /= p_;
    }
    return c;
}

std::int64_t Field::code_from_coeffs(const std::vector<std::int64_t>& c) const {
    if (c.size() != static_cast<std::size_t>(e_))
        throw std::invalid_argument("gf: coefficient vector length must equal the degree");
    std::int64_t r = 0, pw = 1;
    for (int i = 0; i < e_; ++i) {
        if (c[i] < 0 || c[i] >= p_) throw std::invalid_argument("gf: coefficient outside [0, p)");
        r += c[i] * pw;
        pw *= p_;
    }
    return r;
}

std::uint64_t Field::multiplicative_order(std::int64_t a) const {
    check_code(a);
    if (a == 0) throw std::domain_error("gf: zero is not in the multiplicative group");
    std::uint64_t ord = static_cast<std::uint64_t>(order_ - 1);
    std::uint64_t n = ord;
    for (std::uint64_t r = 2; r * r <= n; ++r) {
        if (n % r == 0) {
            while (ord % r == 0 && pow(a, ord / r) == 1) ord /= r;
            while (n % r == 0) n /= r;
        }
    }
    if (n > 1)
        while (ord % n == 0 && pow(a, ord / n) == 1) ord /= n;
    return ord;
}

std::int64_t Field::trace_to_base(std::int64_t x) const {
    if (base_degree_ == 0)
        throw std::logic_error("gf: trace requires a context built with make_with_base");
    check_code(x);
    const int b = base_degree_;
    const int m = e_ / b;
    std::int64_t q = 1;
    for (int i = 0; i < b; ++i) q *= p_;

    std::int64_t acc = 0, y = x;
    for (int i = 0; i < m; ++i) {
        acc = add(acc, y);
        y = pow(y, static_cast<std::uint64_t>(q));
    }
    if (b == e_) return acc;
    if (b == 1) return acc;  // prime-subfield codes are plain residues
    auto it = base_preimage_.find(acc);
    if (it == base_preimage_.end())
        throw std::logic_error("gf: trace value escaped the marked subfield");
    return it->second;
}

std::int64_t Field::embed_from_base(std::int64_t base_code) const {
    if (base_degree_ == 0)
        throw std::logic_error("gf: embedding requires a context built with make_with_base");
    const int b = base_degree_;
    if (base_code < 0 || base_code >= base_->order())
        throw std::out_of_range("gf: base element code out of range");
    if (b == e_ || b == 1) return base_code;
    std::int64_t img = 0, rest = base_code;
    for (int i = 0; i < b; ++i) {
        img = add(img, mul(rest % p_, base_image_powers_[i]));
        rest /= p_;
    }
    return img;
}

const Field& Field::base_field() const {
    if (base_degree_ == 0)
        throw std::logic_error("gf: no base subfield marked");
    return *base_;
}

Element::Element(const Field& field, std::int64_t code) : field_(&field), code_(code) {
    if (code < 0 || code >= field.order()) throw std::out_of_range("gf: element code out of range");
}

const Field& Element::require_same(const Element& a, const Element& b) {
    if (!a.field_->same_context(*b.field_))
        throw FieldMismatch("gf: elements from different field contexts");
    return *a.field_;
}

Element operator+(const Element& a, const Element& b) {
    const Field& f = Element::require_same(a, b);
    return Element(f, f.add(a.code_, b.code_));
}

Element operator-(const Element& a, const Element& b) {
    const Field& f = Element::require_same(a, b);
    return Element(f, f.sub(a.code_, b.code_));
}

Element operator*(const Element& a, const Element& b) {
    const Field& f = Element::require_same(a, b);
    return Element(f, f.mul(a.code_, b.code_));
}

Element operator/(const Element& a, const Element& b) {
    const Field& f = Element::require_same(a, b);
    return Element(f, f.mul(a.code_, f.inv(b.code_)));
}

bool operator==(const Element& a, const Element& b) {
    return a.field_->same_context(*b.field_) && a.code_ == b.code_;
}

}  // namespace tdesign::gf
