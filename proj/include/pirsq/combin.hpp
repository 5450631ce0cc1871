#ifndef PIRSQ_COMBIN_HPP
#define PIRSQ_COMBIN_HPP

#include <cstdint>
#include <vector>

#include "pirsq/error.hpp"

namespace pirsq {

/// C(n, k), zero when k is out of range. Throws on 64-bit overflow.
inline std::uint64_t binomial(std::uint64_t n, std::int64_t k) {
    if (k < 0 || static_cast<std::uint64_t>(k) > n) return 0;
    std::uint64_t kk = static_cast<std::uint64_t>(k);
    if (kk > n - kk) kk = n - kk;
    unsigned __int128 r = 1;
    for (std::uint64_t i = 1; i <= kk; ++i) {
        r = r * (n - kk + i) / i;
        if (r > UINT64_MAX) throw Error("dimension_mismatch", "binomial overflow");
    }
    return static_cast<std::uint64_t>(r);
}

/// All k-subsets of {0,...,n-1} in lexicographic order.
inline std::vector<std::vector<std::size_t>> k_subsets(std::size_t n, std::size_t k) {
    std::vector<std::vector<std::size_t>> out;
    if (k > n) return out;
    std::vector<std::size_t> cur(k);
    for (std::size_t i = 0; i < k; ++i) cur[i] = i;
    while (true) {
        out.push_back(cur);
        if (k == 0) break;
        // advance to the next subset in lex order
        std::size_t i = k;
        while (i > 0 && cur[i - 1] == n - k + i - 1) --i;
        if (i == 0) break;
        ++cur[i - 1];
        for (std::size_t j = i; j < k; ++j) cur[j] = cur[j - 1] + 1;
    }
    return out;
}

}  // namespace pirsq

#endif
