#include "pirsq/rates.hpp"

#include <numeric>

#include "pirsq/combin.hpp"

namespace pirsq {

namespace {
long long checked_ll(__int128 v) {
    if (v > INT64_MAX || v < INT64_MIN) throw Error("dimension_mismatch", "rational overflow");
    return static_cast<long long>(v);
}

__int128 gcd128(__int128 a, __int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        __int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}
}  // namespace

Rational Rational::make(__int128 n, __int128 d) {
    if (d == 0) throw Error("division_by_zero", "rational with zero denominator");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    __int128 g = gcd128(n, d);
    if (g > 1) {
        n /= g;
        d /= g;
    }
    Rational r;
    r.num_ = checked_ll(n);
    r.den_ = checked_ll(d);
    return r;
}

Rational::Rational(long long n, long long d) { *this = make(n, d); }

Rational Rational::operator+(const Rational& o) const {
    return make(static_cast<__int128>(num_) * o.den_ + static_cast<__int128>(o.num_) * den_,
                static_cast<__int128>(den_) * o.den_);
}

Rational Rational::operator-(const Rational& o) const {
    return make(static_cast<__int128>(num_) * o.den_ - static_cast<__int128>(o.num_) * den_,
                static_cast<__int128>(den_) * o.den_);
}

Rational Rational::operator*(const Rational& o) const {
    return make(static_cast<__int128>(num_) * o.num_, static_cast<__int128>(den_) * o.den_);
}

Rational Rational::operator/(const Rational& o) const {
    return make(static_cast<__int128>(num_) * o.den_, static_cast<__int128>(den_) * o.num_);
}

bool Rational::operator<(const Rational& o) const {
    return static_cast<__int128>(num_) * o.den_ < static_cast<__int128>(o.num_) * den_;
}

std::string Rational::str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

std::optional<Rational> conjectured_capacity(std::size_t m, std::size_t n, std::size_t t, std::size_t k) {
    if (m == 0 || n == 0 || t == 0 || k == 0) return std::nullopt;
    if (k + t - 1 > n) return std::nullopt;
    Rational rho(static_cast<long long>(k + t - 1), static_cast<long long>(n));
    Rational sum(0);
    Rational pw(1);
    for (std::size_t i = 0; i < m; ++i) {
        sum = sum + pw;
        pw = pw * rho;
    }
    return Rational(1) / sum;
}

std::optional<Rational> rate_generic_t2(std::size_t n, std::size_t k) {
    if (k == 0 || n < k + 2) return std::nullopt;
    long long N = static_cast<long long>(n), K = static_cast<long long>(k);
    long long num = N * N - N;
    long long den = (n <= 2 * k) ? 2 * N * N - 2 * N + K * K - N * K : N * N - N + 2 * N * K - K * K - K;
    return Rational(num, den);
}

std::optional<Rational> rate_grs_t2(std::size_t n, std::size_t k) {
    if (k == 0 || n < k + 2) return std::nullopt;
    long long N = static_cast<long long>(n), K = static_cast<long long>(k);
    return Rational(N * N - N, N * N + K * N - 2 * K);
}

std::optional<Rational> rate_multi(std::size_t m, std::size_t n, std::size_t k, std::size_t p,
                                   RateFlavor flavor) {
    if (m == 0 || p == 0 || p > m || k == 0 || n < k + 2) return std::nullopt;
    long long N = static_cast<long long>(n), K = static_cast<long long>(k);
    long long P = static_cast<long long>(p), M = static_cast<long long>(m);
    // L and the per-file undesired dimension I share a common factor; the
    // closed forms carry the reduced pair (N^2-N, X).
    long long x;
    if (flavor == RateFlavor::Grs) {
        x = N * K + N - 2 * K;
    } else {
        x = (n <= 2 * k) ? N * N - N + K * K - N * K : 2 * N * K - K * K - K;
    }
    long long l = N * N - N;
    return Rational(P * l, P * l + (M - P) * x);
}

std::optional<Rational> rate_cyclic(std::size_t n, std::size_t k, RateFlavor flavor) {
    if (k == 0 || n < k + 2) return std::nullopt;
    long long N = static_cast<long long>(n), K = static_cast<long long>(k);
    if (flavor == RateFlavor::Grs) return Rational(K * N, K * N + K * K + 1);
    if (n <= 2 * k) return Rational(K * N, K * N + K * K - K + N - 1);
    return Rational(N, N + K + 1);
}

std::optional<Rational> rate_general_t(std::size_t n, std::size_t t, std::size_t k) {
    if (t < 3 || k == 0 || n < k + t) return std::nullopt;
    long long L = checked_ll(static_cast<__int128>(binomial(n, static_cast<std::int64_t>(k))) * k);
    __int128 redundant_sum = 0;
    for (std::size_t tp = 1; tp <= t; ++tp) {
        std::uint64_t delta = binomial(n - t, static_cast<std::int64_t>(k) - static_cast<std::int64_t>(tp));
        std::uint64_t lambda;
        if (tp == 1) {
            lambda = std::min<std::uint64_t>(k + t - 1, n);
        } else {
            lambda = std::min<std::uint64_t>(n * binomial(t - 1, static_cast<std::int64_t>(tp) - 1),
                                             k * binomial(t, static_cast<std::int64_t>(tp)));
        }
        redundant_sum += static_cast<__int128>(lambda) * delta;
    }
    return Rational(L) / (Rational(L) + Rational(checked_ll(redundant_sum)));
}

std::vector<CapacityRef> capacity_refs(std::size_t n, std::size_t t, std::size_t k) {
    std::vector<CapacityRef> out;
    if (auto r = conjectured_capacity(2, n, t, k)) out.push_back({"conjectured_capacity_m2", *r});
    if (k + 1 == n && n >= 2 && t >= 1 && t <= n) {
        long long N = static_cast<long long>(n), T = static_cast<long long>(t);
        out.push_back({"two_file_capacity_k_eq_n_minus_1", Rational(N * N - N, 2 * N * N - 3 * N + T)});
    }
    if (t == 2 && k == 2 && n >= 4) {
        long long N = static_cast<long long>(n);
        out.push_back({"linear_capacity_t2_k2", Rational(N * N - N, N * N + 2 * N - 4)});
    }
    if (k >= 1 && n >= k + 2) {
        long long N = static_cast<long long>(n), K = static_cast<long long>(k);
        out.push_back({"cyclic_pair_capacity", Rational(K * N, K * N + K * K + 1)});
    }
    return out;
}

}  // namespace pirsq
