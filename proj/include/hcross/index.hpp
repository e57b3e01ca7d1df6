#pragma once

// Dyadic-block index geometry on Z^d: blocks, step hyperbolic layers,
// product weights and the weight-sorted frequency ordering.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace hcross {

/// Frequency vector in Z^d.
using MultiIndex = std::vector<int>;

/// Dyadic block label in N_0^d.
using BlockLabel = std::vector<int>;

/// Product weight prod_i (1+|k_i|), always >= 1.
using Weight = std::uint64_t;

/// Thrown when an enumeration would exceed the configured cap.
class CapExceeded : public std::runtime_error {
public:
    explicit CapExceeded(const std::string& what) : std::runtime_error(what) {}
};

/// Default cap on the number of enumerated indices.
inline constexpr std::uint64_t kDefaultEnumerationCap = std::uint64_t(1) << 26;

namespace detail {

inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b, const char* ctx) {
    unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
    if (p > static_cast<unsigned __int128>(UINT64_MAX))
        throw std::overflow_error(std::string(ctx) + ": 64-bit overflow");
    return static_cast<std::uint64_t>(p);
}

inline std::uint64_t abs_u64(int k) {
    long long v = k;
    return static_cast<std::uint64_t>(v < 0 ? -v : v);
}

} // namespace detail

/// Dyadic block of a single frequency: 0 for k=0, otherwise floor(log2|k|)+1,
/// so that 2^{n-1} <= |k| < 2^n for block n >= 1.
inline int block_coordinate(int k) {
    if (k == 0) return 0;
    return std::bit_width(detail::abs_u64(k));
}

/// Coordinate-wise block label of a multi-index.
inline BlockLabel block_of(const MultiIndex& k) {
    BlockLabel j(k.size());
    std::transform(k.begin(), k.end(), j.begin(), block_coordinate);
    return j;
}

/// prod_i (1+|k_i|).
inline Weight weight(const MultiIndex& k) {
    Weight w = 1;
    for (int ki : k) w = detail::checked_mul(w, detail::abs_u64(ki) + 1, "weight");
    return w;
}

/// Exact binomial coefficient with overflow detection.
inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    unsigned __int128 r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        r = r * (n - k + i);
        r /= i;
        if (r > static_cast<unsigned __int128>(UINT64_MAX))
            throw std::overflow_error("binomial: 64-bit overflow");
    }
    return static_cast<std::uint64_t>(r);
}

/// Number of points on the step hyperbolic layer of level n in dimension d:
/// 2^n * binom(n+d-1, n).
inline std::uint64_t layer_cardinality(int n, int d) {
    if (n < 0 || d < 1) throw std::invalid_argument("layer_cardinality: need n >= 0, d >= 1");
    if (n >= 64) throw std::overflow_error("layer_cardinality: 2^n overflows");
    return detail::checked_mul(std::uint64_t(1) << n,
                               binomial(std::uint64_t(n) + d - 1, std::uint64_t(n)),
                               "layer_cardinality");
}

/// All frequencies in the dyadic block I_{j_1} x ... x I_{j_d}, lexicographically
/// sorted. Size is 2^{|j|_1}.
inline std::vector<MultiIndex> enumerate_block(const BlockLabel& j,
                                               std::uint64_t cap = kDefaultEnumerationCap) {
    const int d = static_cast<int>(j.size());
    if (d < 1) throw std::invalid_argument("enumerate_block: empty label");
    std::uint64_t total = 1;
    for (int ji : j) {
        if (ji < 0) throw std::invalid_argument("enumerate_block: negative label");
        if (ji >= 31) throw std::overflow_error("enumerate_block: block level too large");
        total = detail::checked_mul(total, ji == 0 ? 1 : (std::uint64_t(1) << (ji - 1)) * 2,
                                    "enumerate_block");
    }
    if (total > cap) throw CapExceeded("enumerate_block: " + std::to_string(total) +
                                       " indices exceed cap " + std::to_string(cap));

    // Per-axis values in ascending order.
    std::vector<std::vector<int>> axis(d);
    for (int i = 0; i < d; ++i) {
        if (j[i] == 0) {
            axis[i] = {0};
        } else {
            const int lo = 1 << (j[i] - 1), hi = (1 << j[i]) - 1;
            for (int v = -hi; v <= -lo; ++v) axis[i].push_back(v);
            for (int v = lo; v <= hi; ++v) axis[i].push_back(v);
        }
    }
    std::vector<MultiIndex> out;
    out.reserve(total);
    MultiIndex cur(d);
    std::vector<std::size_t> pos(d, 0);
    for (;;) {
        for (int i = 0; i < d; ++i) cur[i] = axis[i][pos[i]];
        out.push_back(cur);
        int i = d - 1;
        while (i >= 0 && ++pos[i] == axis[i].size()) pos[i--] = 0;
        if (i < 0) break;
    }
    return out;
}

namespace detail {

template <typename Visit>
void for_each_composition(int n, int d, std::vector<int>& parts, int axis, Visit&& visit) {
    if (axis == d - 1) {
        parts[axis] = n;
        visit(parts);
        return;
    }
    for (int v = 0; v <= n; ++v) {
        parts[axis] = v;
        for_each_composition(n - v, d, parts, axis + 1, visit);
    }
}

} // namespace detail

/// All frequencies on the step hyperbolic layer of level n in dimension d
/// (union of the blocks with |j|_1 = n), lexicographically sorted.
inline std::vector<MultiIndex> enumerate_layer(int n, int d,
                                               std::uint64_t cap = kDefaultEnumerationCap) {
    if (n < 0 || d < 1) throw std::invalid_argument("enumerate_layer: need n >= 0, d >= 1");
    const std::uint64_t total = layer_cardinality(n, d);
    if (total > cap) throw CapExceeded("enumerate_layer: " + std::to_string(total) +
                                       " indices exceed cap " + std::to_string(cap));
    std::vector<MultiIndex> out;
    out.reserve(total);
    std::vector<int> parts(d);
    detail::for_each_composition(n, d, parts, 0, [&](const std::vector<int>& j) {
        auto block = enumerate_block(j, cap);
        out.insert(out.end(), block.begin(), block.end());
    });
    std::sort(out.begin(), out.end());
    return out;
}

/// Number of lattice points k in Z^d with weight(k) <= w.
inline std::uint64_t count_weight_leq(std::uint64_t w, int d) {
    if (d < 1) throw std::invalid_argument("count_weight_leq: need d >= 1");
    // Memoized divisor-style recursion over quotient blocks.
    std::map<std::pair<int, std::uint64_t>, unsigned __int128> memo;
    auto rec = [&](auto&& self, int dim, std::uint64_t budget) -> unsigned __int128 {
        if (budget < 1) return 0;
        if (dim == 1) return 2 * static_cast<unsigned __int128>(budget) - 1;
        auto key = std::make_pair(dim, budget);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        unsigned __int128 total = self(self, dim - 1, budget); // a = 1+|k_1| = 1
        for (std::uint64_t a = 2; a <= budget;) {
            const std::uint64_t q = budget / a;
            const std::uint64_t a_hi = budget / q;
            total += 2 * static_cast<unsigned __int128>(a_hi - a + 1) * self(self, dim - 1, q);
            a = a_hi + 1;
        }
        memo.emplace(key, total);
        return total;
    };
    unsigned __int128 c = rec(rec, d, w);
    if (c > static_cast<unsigned __int128>(UINT64_MAX))
        throw std::overflow_error("count_weight_leq: 64-bit overflow");
    return static_cast<std::uint64_t>(c);
}

/// Weight of the pos-th element (1-based) in the nondecreasing-weight ordering
/// of Z^d, computed by counting alone.
inline Weight weight_at_position(std::uint64_t pos, int d) {
    if (pos < 1) throw std::invalid_argument("weight_at_position: need pos >= 1");
    std::uint64_t hi = 1;
    while (count_weight_leq(hi, d) < pos) {
        if (hi > (std::uint64_t(1) << 62)) throw std::overflow_error("weight_at_position");
        hi *= 2;
    }
    std::uint64_t lo = 1;
    while (lo < hi) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        if (count_weight_leq(mid, d) >= pos) hi = mid; else lo = mid + 1;
    }
    return lo;
}

namespace detail {

inline void enumerate_weight_leq_rec(std::uint64_t budget, int axis, int d, MultiIndex& cur,
                                     std::vector<MultiIndex>& out) {
    if (axis == d) {
        out.push_back(cur);
        return;
    }
    for (std::uint64_t a = 1; a <= budget; ++a) {
        const int v = static_cast<int>(a) - 1;
        cur[axis] = v;
        enumerate_weight_leq_rec(budget / a, axis + 1, d, cur, out);
        if (v > 0) {
            cur[axis] = -v;
            enumerate_weight_leq_rec(budget / a, axis + 1, d, cur, out);
        }
    }
}

} // namespace detail

/// All k in Z^d with weight(k) <= w, unsorted.
inline std::vector<MultiIndex> enumerate_weight_leq(std::uint64_t w, int d,
                                                    std::uint64_t cap = kDefaultEnumerationCap) {
    const std::uint64_t total = count_weight_leq(w, d);
    if (total > cap) throw CapExceeded("enumerate_weight_leq: " + std::to_string(total) +
                                       " indices exceed cap " + std::to_string(cap));
    std::vector<MultiIndex> out;
    out.reserve(total);
    MultiIndex cur(d);
    detail::enumerate_weight_leq_rec(w, 0, d, cur, out);
    return out;
}

/// First n_terms multi-indices of Z^d ordered by nondecreasing weight, ties
/// broken lexicographically ascending on the raw tuple.
inline std::vector<MultiIndex> sorted_frequencies(std::uint64_t n_terms, int d,
                                                  std::uint64_t cap = kDefaultEnumerationCap) {
    if (n_terms < 1) throw std::invalid_argument("sorted_frequencies: need n_terms >= 1");
    const Weight w_last = weight_at_position(n_terms, d);
    auto all = enumerate_weight_leq(w_last, d, cap);
    std::vector<std::pair<Weight, MultiIndex>> keyed;
    keyed.reserve(all.size());
    for (auto& k : all) keyed.emplace_back(weight(k), std::move(k));
    std::sort(keyed.begin(), keyed.end());
    std::vector<MultiIndex> out;
    out.reserve(n_terms);
    for (std::uint64_t i = 0; i < n_terms; ++i) out.push_back(std::move(keyed[i].second));
    return out;
}

/// Text form: one multi-index per line, space-separated integers.
inline void write_indices(std::ostream& os, const std::vector<MultiIndex>& indices) {
    for (const auto& k : indices) {
        for (std::size_t i = 0; i < k.size(); ++i) {
            if (i) os << ' ';
            os << k[i];
        }
        os << '\n';
    }
}

inline std::vector<MultiIndex> read_indices(std::istream& is) {
    std::vector<MultiIndex> out;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        MultiIndex k;
        int v;
        while (ls >> v) k.push_back(v);
        if (!k.empty()) out.push_back(std::move(k));
    }
    return out;
}

} // namespace hcross
