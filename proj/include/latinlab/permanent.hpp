#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "latinlab/error.hpp"

namespace latinlab {

using BigInt = boost::multiprecision::cpp_int;
using Matrix = std::vector<std::vector<std::int64_t>>;

struct PermanentResult {
    int dimension = 0;
    BigInt value;
    std::string method;
};

inline constexpr int max_permanent_dimension = 24;

namespace detail {

template <class Acc>
BigInt ryser_gray(const Matrix& a) {
    const int n = static_cast<int>(a.size());
    std::vector<std::int64_t> row_sums(static_cast<std::size_t>(n), 0);
    std::vector<char> in_set(static_cast<std::size_t>(n), 0);
    Acc total = 0;
    const std::uint64_t subsets = std::uint64_t{1} << n;
    for (std::uint64_t g = 1; g < subsets; ++g) {
        // Gray code: step g toggles column ctz(g).
        const int j = std::countr_zero(g);
        const std::int64_t sign = in_set[static_cast<std::size_t>(j)] ? -1 : 1;
        in_set[static_cast<std::size_t>(j)] ^= 1;
        for (int i = 0; i < n; ++i) row_sums[static_cast<std::size_t>(i)] += sign * a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        Acc prod = 1;
        for (int i = 0; i < n && prod != 0; ++i) prod *= static_cast<Acc>(row_sums[static_cast<std::size_t>(i)]);
        const int size = std::popcount(g ^ (g >> 1));
        if ((n - size) % 2 == 0) total += prod;
        else total -= prod;
    }
    if constexpr (std::is_same_v<Acc, BigInt>) {
        return total;
    } else {
        // Split the 128-bit value into two 64-bit halves for cpp_int.
        const bool negative = total < 0;
        unsigned __int128 mag = negative ? static_cast<unsigned __int128>(-total) : static_cast<unsigned __int128>(total);
        BigInt r = static_cast<std::uint64_t>(mag >> 64);
        r <<= 64;
        r += static_cast<std::uint64_t>(mag);
        return negative ? BigInt(-r) : r;
    }
}

} // namespace detail

/// Exact permanent of a square matrix with nonnegative integer entries, by
/// Ryser's inclusion-exclusion over column subsets in Gray-code order (one
/// column toggled per step, O(n) row-sum update). Products use 128-bit
/// arithmetic when every term provably fits, otherwise cpp_int.
inline PermanentResult exact_permanent(const Matrix& a) {
    const int n = static_cast<int>(a.size());
    if (n > max_permanent_dimension) throw ResourceError("permanent dimension " + std::to_string(n) + " exceeds " + std::to_string(max_permanent_dimension));
    double log_bound = 0;
    for (const auto& row : a) {
        if (static_cast<int>(row.size()) != n) throw IndexError("permanent needs a square matrix");
        std::int64_t s = 0;
        for (auto v : row) {
            if (v < 0) throw IndexError("permanent entries must be nonnegative");
            s += v;
        }
        log_bound += std::log2(static_cast<double>(s) + 1.0);
    }
    PermanentResult r;
    r.dimension = n;
    if (n == 0) {
        r.value = 1;
        r.method = "empty";
        return r;
    }
    // Each term is at most prod(row sums); 2^n terms; keep 4 bits of margin.
    if (log_bound + n + 4 < 126) {
        r.value = detail::ryser_gray<__int128>(a);
        r.method = "ryser-gray/int128";
    } else {
        r.value = detail::ryser_gray<BigInt>(a);
        r.method = "ryser-gray/cpp_int";
    }
    return r;
}

inline double log_value(const BigInt& v) {
    if (v <= 0) return -INFINITY;
    // log via the top bits to stay exact enough for huge values.
    const auto bits = static_cast<long>(boost::multiprecision::msb(v));
    if (bits < 900) return std::log(v.convert_to<double>());
    BigInt top = v >> static_cast<unsigned>(bits - 60);
    return std::log(top.convert_to<double>()) + static_cast<double>(bits - 60) * std::log(2.0);
}

} // namespace latinlab
