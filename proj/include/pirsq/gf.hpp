#ifndef PIRSQ_GF_HPP
#define PIRSQ_GF_HPP

#include <cstdint>

#include "pirsq/error.hpp"

namespace pirsq {

bool is_prime(std::uint64_t n);

/// Least prime >= n. Requires n >= 2 and a result that fits in 32 bits.
std::uint32_t smallest_prime_geq(std::uint64_t n);

namespace detail {
// Primality of the modulus is checked once per distinct value, not on every
// element construction; the last verified modulus is cached.
void require_prime_modulus(std::uint32_t q);

inline std::uint32_t mod_add(std::uint32_t a, std::uint32_t b, std::uint32_t q) {
    std::uint64_t s = static_cast<std::uint64_t>(a) + b;
    return static_cast<std::uint32_t>(s >= q ? s - q : s);
}

inline std::uint32_t mod_sub(std::uint32_t a, std::uint32_t b, std::uint32_t q) {
    return a >= b ? a - b : static_cast<std::uint32_t>(a + static_cast<std::uint64_t>(q) - b);
}

inline std::uint32_t mod_mul(std::uint32_t a, std::uint32_t b, std::uint32_t q) {
    return static_cast<std::uint32_t>(static_cast<std::uint64_t>(a) * b % q);
}

std::uint32_t mod_pow(std::uint32_t base, std::uint64_t exp, std::uint32_t q);
std::uint32_t mod_inv(std::uint32_t a, std::uint32_t q);
}  // namespace detail

/// An element of the prime field F_q. The modulus travels with the value so
/// that several field parameterizations can coexist in one process; mixing
/// moduli in arithmetic throws.
class FieldElement {
  public:
    FieldElement(std::uint64_t value, std::uint32_t modulus) : q_(modulus) {
        detail::require_prime_modulus(modulus);
        v_ = static_cast<std::uint32_t>(value % modulus);
    }

    std::uint32_t value() const { return v_; }
    std::uint32_t modulus() const { return q_; }
    bool is_zero() const { return v_ == 0; }

    FieldElement operator+(const FieldElement& o) const {
        check(o);
        return raw(detail::mod_add(v_, o.v_, q_), q_);
    }
    FieldElement operator-(const FieldElement& o) const {
        check(o);
        return raw(detail::mod_sub(v_, o.v_, q_), q_);
    }
    FieldElement operator*(const FieldElement& o) const {
        check(o);
        return raw(detail::mod_mul(v_, o.v_, q_), q_);
    }
    FieldElement operator/(const FieldElement& o) const {
        check(o);
        if (o.v_ == 0) throw Error("division_by_zero", "division by zero in F_q");
        return raw(detail::mod_mul(v_, detail::mod_inv(o.v_, q_), q_), q_);
    }
    FieldElement operator-() const { return raw(v_ == 0 ? 0 : q_ - v_, q_); }

    FieldElement pow(std::uint64_t e) const { return raw(detail::mod_pow(v_, e, q_), q_); }

    FieldElement inv() const {
        if (v_ == 0) throw Error("division_by_zero", "inverse of zero in F_q");
        return raw(detail::mod_inv(v_, q_), q_);
    }

    bool operator==(const FieldElement& o) const { return v_ == o.v_ && q_ == o.q_; }
    bool operator!=(const FieldElement& o) const { return !(*this == o); }

  private:
    static FieldElement raw(std::uint32_t v, std::uint32_t q) {
        FieldElement e;
        e.v_ = v;
        e.q_ = q;
        return e;
    }
    FieldElement() : v_(0), q_(0) {}

    void check(const FieldElement& o) const {
        if (q_ != o.q_) throw Error("modulus_mismatch", "field elements from different F_q");
    }

    std::uint32_t v_;
    std::uint32_t q_;
};

}  // namespace pirsq

#endif
