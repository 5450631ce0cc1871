#ifndef PIRSQ_RATES_HPP
#define PIRSQ_RATES_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pirsq/error.hpp"

namespace pirsq {

/// Exact rational with reduced terms and positive denominator. All rate
/// comparisons in this project are equalities on these, never tolerances.
class Rational {
  public:
    Rational() = default;
    Rational(long long n) : num_(n) {}
    Rational(long long n, long long d);

    long long num() const { return num_; }
    long long den() const { return den_; }

    Rational operator+(const Rational& o) const;
    Rational operator-(const Rational& o) const;
    Rational operator*(const Rational& o) const;
    Rational operator/(const Rational& o) const;

    bool operator==(const Rational& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const Rational& o) const { return !(*this == o); }
    bool operator<(const Rational& o) const;
    bool operator>(const Rational& o) const { return o < *this; }
    bool operator<=(const Rational& o) const { return !(o < *this); }
    bool operator>=(const Rational& o) const { return !(*this < o); }

    std::string str() const;

  private:
    static Rational make(__int128 n, __int128 d);
    long long num_ = 0;
    long long den_ = 1;
};

enum class RateFlavor { Generic, Grs };

/// The long-conjectured general capacity (1 + rho + ... + rho^(M-1))^-1
/// with rho = (K + T - 1) / N, the benchmark the schemes here beat.
/// Applicable when k + t - 1 <= n.
std::optional<Rational> conjectured_capacity(std::size_t m, std::size_t n, std::size_t t, std::size_t k);

/// Two-file, two-collusion scheme rate for an arbitrary (n, k) MDS code:
/// (N^2-N)/(2N^2-2N+K^2-NK) when N <= 2K, (N^2-N)/(N^2-N+2NK-K^2-K)
/// otherwise. Applicable when n >= k + 2.
std::optional<Rational> rate_generic_t2(std::size_t n, std::size_t k);

/// Same setting with GRS storage: (N^2-N)/(N^2+KN-2K).
std::optional<Rational> rate_grs_t2(std::size_t n, std::size_t k);

/// P-out-of-M multi-file rate (p = 1 covers single-file retrieval with an
/// arbitrary number of files).
std::optional<Rational> rate_multi(std::size_t m, std::size_t n, std::size_t k, std::size_t p,
                                   RateFlavor flavor);

/// Two-file rate when only cyclically adjacent server pairs collude.
std::optional<Rational> rate_cyclic(std::size_t n, std::size_t k, RateFlavor flavor);

/// Two-file rate for t >= 3 collusion over GRS storage.
std::optional<Rational> rate_general_t(std::size_t n, std::size_t t, std::size_t k);

struct CapacityRef {
    std::string label;
    Rational value;
};

/// Every known reference value applicable at (n, t, k), labeled by source.
std::vector<CapacityRef> capacity_refs(std::size_t n, std::size_t t, std::size_t k);

}  // namespace pirsq

#endif
