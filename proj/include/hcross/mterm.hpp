#pragma once

// Best m-term machinery: exact greedy thinning in coefficient norms, the
// Stechkin bound, the randomized empirical-mean (Maurey) approximant, the
// layered hyperbolic-cross construction behind the main width bound, and the
// explicit fooling polynomials used for lower bounds.

#include <optional>

#include "hcross/norms.hpp"
#include "hcross/rng.hpp"

namespace hcross {

/// Clipped base-2 logarithm max(log2 m, 1).
inline double log_star(double m) {
    if (m < 1.0) throw std::invalid_argument("log_star: need m >= 1");
    return std::max(std::log2(m), 1.0);
}

/// l_p quasi-norm of a nonnegative sequence (sup for p = inf).
inline double sequence_lp(const std::vector<double>& x, double p) {
    if (!(p > 0.0)) throw std::invalid_argument("sequence_lp: need p > 0");
    if (p == kInf) {
        double m = 0.0;
        for (double v : x) m = std::max(m, std::abs(v));
        return m;
    }
    double acc = 0.0;
    for (double v : x) acc += std::pow(std::abs(v), p);
    return std::pow(acc, 1.0 / p);
}

/// (m+1)^{1/q-1/p} ||x||_p, an upper bound for the coefficient tail after the
/// m largest entries are removed, valid for 0 < p < q <= inf.
inline double stechkin_bound(const std::vector<double>& x, double p, double q, std::uint64_t m) {
    if (!(p > 0.0) || !(q > p))
        throw std::invalid_argument("stechkin_bound: need 0 < p < q <= inf");
    const double inv_q = q == kInf ? 0.0 : 1.0 / q;
    return std::pow(static_cast<double>(m) + 1.0, inv_q - 1.0 / p) * sequence_lp(x, p);
}

/// Per-layer Maurey budgets of the layered construction.
struct LayerBudget {
    int n = 0;          // budget exponent, scheme built for 2^n terms
    int keep_below = 0; // L: layers 0..L copied exactly
    int drop_above = 0; // K: layers beyond K discarded
    std::vector<std::pair<int, std::uint64_t>> maurey_terms; // (layer, m_k)
};

struct MTermResult {
    SparseTrigPoly approximant;
    std::size_t term_count = 0;
    double error = 0.0;
    SpaceParams error_norm = SpaceParams::lebesgue(2.0);
    std::optional<std::uint64_t> seed;
    std::optional<LayerBudget> budget;
    // layered-scheme segment diagnostics: exact part, sampled part, dropped tail
    double segment_exact = 0.0;
    double segment_sampled = 0.0;
    double segment_dropped = 0.0;

    explicit MTermResult(int dim) : approximant(dim) {}
};

/// Structured text record for an m-term result.
inline void write_mterm_report(std::ostream& os, const MTermResult& res) {
    os.precision(17);
    os << "term_count = " << res.term_count << '\n';
    os << "error = " << res.error << '\n';
    os << "norm = " << res.error_norm.label() << '\n';
    if (res.seed) os << "seed = " << *res.seed << '\n';
    if (res.budget) {
        os << "budget.n = " << res.budget->n << '\n';
        os << "budget.keep_below = " << res.budget->keep_below << '\n';
        os << "budget.drop_above = " << res.budget->drop_above << '\n';
        for (const auto& [layer, mk] : res.budget->maurey_terms)
            os << "budget.layer_" << layer << " = " << mk << '\n';
        os << "segment_exact = " << res.segment_exact << '\n';
        os << "segment_sampled = " << res.segment_sampled << '\n';
        os << "segment_dropped = " << res.segment_dropped << '\n';
    }
}

namespace detail {

/// Ranking weight of a coefficient under a coefficient-side norm.
inline double greedy_rank_weight(const MultiIndex& k, const SpaceParams& target) {
    if (target.kind == SpaceParams::Kind::WienerWeighted && target.r != 0.0)
        return std::pow(static_cast<double>(weight(k)), target.r);
    return 1.0;
}

inline double tail_theta(const SpaceParams& target) {
    switch (target.kind) {
    case SpaceParams::Kind::WienerWeighted:
    case SpaceParams::Kind::WienerPlain: return target.theta;
    case SpaceParams::Kind::Lebesgue: return 2.0;
    default: throw std::invalid_argument("greedy_mterm: target must be a coefficient norm");
    }
}

} // namespace detail

/// Exact best m-term approximation in a coefficient norm (weighted or plain
/// Wiener, or L_2): keep the m entries of largest weighted magnitude, ties
/// broken lexicographically; the reported error is the exact tail norm.
inline MTermResult greedy_mterm(const SparseTrigPoly& f, std::uint64_t m,
                                const SpaceParams& target) {
    if (!target.is_coefficient_norm())
        throw std::invalid_argument(
            "greedy_mterm: exact greedy needs a coefficient norm (Wiener or L_2)");
    const double theta = detail::tail_theta(target);

    struct Entry {
        double rank;
        const MultiIndex* k;
        Complex c;
    };
    std::vector<Entry> entries;
    entries.reserve(f.term_count());
    for (const auto& [k, c] : f.coefficients())
        entries.push_back({detail::greedy_rank_weight(k, target) * std::abs(c), &k, c});
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        if (a.rank != b.rank) return a.rank > b.rank;
        return *a.k < *b.k;
    });

    MTermResult res(f.dim());
    res.error_norm = target;
    const std::size_t keep = std::min<std::uint64_t>(m, entries.size());
    for (std::size_t i = 0; i < keep; ++i)
        res.approximant.set_coefficient(*entries[i].k, entries[i].c);
    res.term_count = res.approximant.term_count();

    detail::ThetaAccumulator tail(theta);
    for (std::size_t i = keep; i < entries.size(); ++i) tail.add(entries[i].rank);
    res.error = tail.result();
    return res;
}

/// Randomized m-term approximant drawing frequencies with probability
/// proportional to |f_hat|, keeping the best of `trials` repetitions in the
/// grid L_q error. Expected L_2 error is at most ||f||_A / sqrt(m).
inline MTermResult maurey_mterm(const SparseTrigPoly& f, std::uint64_t m, double q,
                                int trials, std::uint64_t seed) {
    if (m < 1) throw std::invalid_argument("maurey_mterm: need m >= 1");
    if (!(q >= 2.0)) throw std::invalid_argument("maurey_mterm: need 2 <= q <= inf");
    if (trials < 1) throw std::invalid_argument("maurey_mterm: need trials >= 1");

    MTermResult best(f.dim());
    best.error_norm = SpaceParams::lebesgue(q);
    best.seed = seed;
    if (f.empty()) return best;

    std::vector<const MultiIndex*> keys;
    std::vector<double> mass;
    keys.reserve(f.term_count());
    mass.reserve(f.term_count());
    double a_norm = 0.0;
    for (const auto& [k, c] : f.coefficients()) {
        keys.push_back(&k);
        mass.push_back(std::abs(c));
        a_norm += std::abs(c);
    }
    DiscreteSampler sampler(mass);

    bool have_best = false;
    for (int t = 0; t < trials; ++t) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
        std::map<std::size_t, std::uint64_t> counts;
        for (std::uint64_t i = 0; i < m; ++i) ++counts[sampler.sample(rng)];

        SparseTrigPoly p(f.dim());
        const double scale = a_norm / static_cast<double>(m);
        for (const auto& [idx, count] : counts) {
            const Complex c = f.coefficient(*keys[idx]);
            const Complex phase = c / std::abs(c);
            p.set_coefficient(*keys[idx], scale * static_cast<double>(count) * phase);
        }
        const double err = norm(f - p, best.error_norm);
        if (!have_best || err < best.error) {
            have_best = true;
            best.approximant = std::move(p);
            best.error = err;
            best.term_count = counts.size();
        }
    }
    return best;
}

namespace detail {

inline void require_layered_smoothness(double r, double theta) {
    const double inv_theta = theta == kInf ? 0.0 : 1.0 / theta;
    if (!(r > std::max(1.0 - inv_theta, 0.0)))
        throw std::invalid_argument("layered_mterm: requires r > (1 - 1/theta)_+");
}

} // namespace detail

/// Layer budgets for target term count 2^n: L = ceil(n - (d-1) log* n),
/// K = ceil(n (r + 1/theta - 1/2)/(r - 1 + 1/theta) - (d-1) log* n), and
/// m_k = ceil((k-L)^{-2} 2^L L^{d-1}) for the sampled layers.
inline LayerBudget layered_budget(int n, int d, double r, double theta) {
    detail::require_layered_smoothness(r, theta);
    if (n < 1) throw std::invalid_argument("layered_budget: need n >= 1");
    const double ls = log_star(static_cast<double>(n));
    const double inv_theta = theta == kInf ? 0.0 : 1.0 / theta;
    LayerBudget b;
    b.n = n;
    b.keep_below = static_cast<int>(std::ceil(n - (d - 1) * ls));
    if (b.keep_below <= 0)
        throw std::domain_error("layered_budget: n too small, L = ceil(n - (d-1) log* n) <= 0");
    const double ratio = (r + inv_theta - 0.5) / (r - 1.0 + inv_theta);
    b.drop_above = static_cast<int>(std::ceil(n * ratio - (d - 1) * ls));
    b.drop_above = std::max(b.drop_above, b.keep_below);
    const double base = std::exp2(static_cast<double>(b.keep_below)) *
                        std::pow(static_cast<double>(b.keep_below), d - 1);
    for (int k = b.keep_below + 1; k <= b.drop_above; ++k) {
        const double gap = static_cast<double>(k - b.keep_below);
        b.maurey_terms.emplace_back(k, static_cast<std::uint64_t>(std::ceil(base / (gap * gap))));
    }
    return b;
}

/// The layered construction: copy layers 0..L exactly, run the Maurey sampler
/// with budget m_k on layers L+1..K, drop everything above K. For theta < 1
/// the scheme composes an exact greedy step into S^r_1 A with the theta = 1
/// construction on the remainder.
inline MTermResult layered_mterm(const SparseTrigPoly& f, std::uint64_t m, double q, double r,
                                 double theta, std::uint64_t seed, int trials = 10) {
    detail::require_layered_smoothness(r, theta);
    if (m < 2) throw std::invalid_argument("layered_mterm: need m >= 2");
    const int n = static_cast<int>(std::floor(std::log2(static_cast<double>(m))));

    if (theta < 1.0) {
        // greedy into S^r_1 A with half the budget, layered theta=1 on the rest
        const std::uint64_t half = std::uint64_t(1) << (n - 1);
        auto head = greedy_mterm(f, half, SpaceParams::wiener_weighted(r, 1.0));
        auto rest = layered_mterm(f - head.approximant, half, q, r, 1.0,
                                  derive_seed(seed, 0x74u), trials);
        MTermResult res(f.dim());
        res.approximant = head.approximant + rest.approximant;
        res.term_count = res.approximant.term_count();
        res.error_norm = SpaceParams::lebesgue(q);
        res.error = norm(f - res.approximant, res.error_norm);
        res.seed = seed;
        res.budget = rest.budget;
        res.budget->n = n;
        res.segment_exact = rest.segment_exact;
        res.segment_sampled = rest.segment_sampled;
        res.segment_dropped = rest.segment_dropped;
        return res;
    }

    MTermResult res(f.dim());
    res.error_norm = SpaceParams::lebesgue(q);
    res.seed = seed;
    res.budget = layered_budget(n, f.dim(), r, theta);
    const LayerBudget& b = *res.budget;

    const int top = f.max_layer();
    for (const auto& [k, c] : f.coefficients()) {
        int l1 = 0;
        for (int ki : k) l1 += block_coordinate(ki);
        if (l1 <= b.keep_below) res.approximant.set_coefficient(k, c);
    }

    for (const auto& [layer, mk] : b.maurey_terms) {
        if (layer > top) break;
        auto part = f.layer_part(layer);
        if (part.empty()) continue;
        auto sampled = maurey_mterm(part, mk, q, trials,
                                    derive_seed(seed, static_cast<std::uint64_t>(layer)));
        res.segment_sampled += sampled.error;
        res.approximant += sampled.approximant;
    }

    for (int layer = b.drop_above + 1; layer <= top; ++layer) {
        auto part = f.layer_part(layer);
        if (!part.empty()) res.segment_dropped += norm(part, res.error_norm);
    }

    res.term_count = res.approximant.term_count();
    res.error = norm(f - res.approximant, res.error_norm);
    return res;
}

/// Smallest layer level whose cardinality reaches `threshold`.
inline int smallest_layer_with_cardinality(std::uint64_t threshold, int d) {
    for (int n = 0;; ++n) {
        if (layer_cardinality(n, d) >= threshold) return n;
    }
}

/// Equal-coefficient polynomial on the step hyperbolic layer H_n, scaled to
/// unit norm in S^r_theta A. The scaling is exact: the layer norm is
/// (sum_k w_k^{r theta})^{1/theta}.
inline SparseTrigPoly fooling_wiener(int n, int d, double r, double theta,
                                     std::uint64_t cap = kDefaultEnumerationCap) {
    if (n < 1) throw std::invalid_argument("fooling_wiener: need n >= 1");
    auto layer = enumerate_layer(n, d, cap);
    double c;
    if (theta == kInf) {
        double sup = 0.0;
        for (const auto& k : layer) sup = std::max(sup, std::pow(static_cast<double>(weight(k)), r));
        c = 1.0 / sup;
    } else {
        double acc = 0.0;
        for (const auto& k : layer)
            acc += std::pow(static_cast<double>(weight(k)), r * theta);
        c = 1.0 / std::pow(acc, 1.0 / theta);
    }
    SparseTrigPoly f(d);
    for (const auto& k : layer) f.set_coefficient(k, c);
    return f;
}

/// Dirichlet kernel of the layer H_n scaled to unit Besov norm; the
/// normalization is numeric (grid quadrature for p != 2).
inline SparseTrigPoly fooling_besov(int n, int d, double r, double p, double theta,
                                    std::uint64_t cap = kDefaultEnumerationCap) {
    if (n < 1) throw std::invalid_argument("fooling_besov: need n >= 1");
    if (!(p > 1.0) || p > 2.0) throw std::invalid_argument("fooling_besov: need 1 < p <= 2");
    auto layer = enumerate_layer(n, d, cap);
    SparseTrigPoly f(d);
    for (const auto& k : layer) f.set_coefficient(k, 1.0);
    const double nrm = norm(f, SpaceParams::besov(r, p, theta));
    return f * Complex(1.0 / nrm, 0.0);
}

/// The sorted-frequency fooling polynomial: coefficients w_k^{-r} (2m)^{-1/theta}
/// on the first 2m frequencies of the nondecreasing-weight ordering. Its
/// S^r_theta A norm is 1 by cancellation of the weights.
inline SparseTrigPoly fooling_a2a(std::uint64_t m, int d, double r, double theta,
                                  std::uint64_t cap = kDefaultEnumerationCap) {
    if (m < 1) throw std::invalid_argument("fooling_a2a: need m >= 1");
    auto freqs = sorted_frequencies(2 * m, d, cap);
    const double inv_theta = theta == kInf ? 0.0 : 1.0 / theta;
    const double scale = std::pow(2.0 * static_cast<double>(m), -inv_theta);
    SparseTrigPoly f(d);
    for (const auto& k : freqs) {
        const double c = std::pow(static_cast<double>(weight(k)), -r) * scale;
        f.set_coefficient(k, c);
    }
    return f;
}

} // namespace hcross
