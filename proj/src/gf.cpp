#include "pirsq/gf.hpp"

#include <atomic>

namespace pirsq {

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    if (n < 4) return true;
    if (n % 2 == 0 || n % 3 == 0) return false;
    for (std::uint64_t d = 5; d * d <= n; d += 6) {
        if (n % d == 0 || n % (d + 2) == 0) return false;
    }
    return true;
}

std::uint32_t smallest_prime_geq(std::uint64_t n) {
    if (n < 2) n = 2;
    for (std::uint64_t c = n;; ++c) {
        if (c > 0xFFFFFFFFULL) throw Error("field_too_small", "no 32-bit prime >= requested bound");
        if (is_prime(c)) return static_cast<std::uint32_t>(c);
    }
}

namespace detail {

void require_prime_modulus(std::uint32_t q) {
    static std::atomic<std::uint32_t> last_verified{0};
    if (q == last_verified.load(std::memory_order_relaxed)) return;
    if (!is_prime(q)) throw Error("not_prime", "modulus " + std::to_string(q) + " is not prime");
    last_verified.store(q, std::memory_order_relaxed);
}

std::uint32_t mod_pow(std::uint32_t base, std::uint64_t exp, std::uint32_t q) {
    std::uint64_t result = 1 % q;
    std::uint64_t b = base % q;
    while (exp > 0) {
        if (exp & 1) result = result * b % q;
        b = b * b % q;
        exp >>= 1;
    }
    return static_cast<std::uint32_t>(result);
}

std::uint32_t mod_inv(std::uint32_t a, std::uint32_t q) {
    // q is prime, so a^(q-2) works for any nonzero a
    return mod_pow(a, static_cast<std::uint64_t>(q) - 2, q);
}

}  // namespace detail

}  // namespace pirsq
