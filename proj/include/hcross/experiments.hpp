#pragma once

// Experiment harness: dyadic rate sweeps with log-log fitting, embedding
// ratio checks between Besov/Sobolev and weighted Wiener norms, numeric
// verification of the auxiliary lemmas, and the linear-versus-nonlinear
// sampling comparison. All sweeps are reproducible from (config, seed).

#include "hcross/mterm.hpp"
#include "hcross/recovery.hpp"

namespace hcross {

struct RateRow {
    double m = 0.0;
    double error = 0.0;
    std::uint64_t seed = 0;
    std::string tags;
};

struct RateTable {
    std::string task;
    std::vector<RateRow> rows;
};

/// CSV with header m,error,seed,tags; floats at 17 significant digits.
inline void write_rate_csv(std::ostream& os, const RateTable& table) {
    os << "m,error,seed,tags\n";
    os.precision(17);
    for (const auto& row : table.rows)
        os << row.m << ',' << row.error << ',' << row.seed << ',' << row.tags << '\n';
}

/// Sidecar metadata: key = value lines reproducing the run configuration.
inline void write_metadata(std::ostream& os,
                           const std::vector<std::pair<std::string, std::string>>& entries) {
    for (const auto& [key, value] : entries) os << key << " = " << value << '\n';
}

struct RateFit {
    double main_exponent = 0.0; // a in error ~ constant * m^{-a} * log*(m)^b
    double log_exponent = 0.0;  // b
    double constant = 0.0;
    double residual_rms = 0.0; // in the log domain
    bool log_fixed = false;
};

/// Least squares for log error = log c - a log m + b log log*(m); with
/// b_fixed only (a, c) are fitted.
inline RateFit fit_rate(const RateTable& table, std::optional<double> b_fixed = {}) {
    const std::size_t n = table.rows.size();
    if (n < 4) throw std::invalid_argument("fit_rate: need at least 4 rows");
    Eigen::VectorXd y(n);
    Eigen::MatrixXd a(n, b_fixed ? 2 : 3);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& row = table.rows[i];
        if (!(row.error > 0.0)) throw std::invalid_argument("fit_rate: nonpositive error");
        if (!(row.m >= 1.0)) throw std::invalid_argument("fit_rate: need m >= 1");
        const double ll = std::log(log_star(row.m));
        y(i) = std::log(row.error);
        a(i, 0) = 1.0;
        a(i, 1) = -std::log(row.m);
        if (b_fixed) y(i) -= *b_fixed * ll;
        else a(i, 2) = ll;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.rank() < a.cols()) throw std::invalid_argument("fit_rate: degenerate design matrix");
    const Eigen::VectorXd sol = svd.solve(y);

    RateFit fit;
    fit.constant = std::exp(sol(0));
    fit.main_exponent = sol(1);
    fit.log_exponent = b_fixed ? *b_fixed : sol(2);
    fit.log_fixed = b_fixed.has_value();
    fit.residual_rms = std::sqrt((a * sol - y).squaredNorm() / static_cast<double>(n));
    return fit;
}

enum class SweepTask { SigmaUpper, SigmaLower, A2A, Recovery };

struct SweepConfig {
    SweepTask task = SweepTask::SigmaLower;
    int d = 2;
    double r = 1.0;
    double theta = 1.0;
    double eta = 1.0; // error index for the A2A task
    double q = 2.0;   // error exponent for sigma-upper / recovery
    std::vector<std::uint64_t> m_values;
    std::vector<std::uint64_t> seeds{0};
    int maurey_trials = 10;
    double budget_constant = 2.0; // recovery task
    std::uint64_t cap = kDefaultEnumerationCap;
};

namespace detail {

inline void require_sigma_smoothness(double r, double theta) {
    const double inv_theta = theta == kInf ? 0.0 : 1.0 / theta;
    if (!(r > std::max(1.0 - inv_theta, 0.0)))
        throw std::invalid_argument("rate_sweep: requires r > (1 - 1/theta)_+");
}

inline void require_a2a_smoothness(double r, double theta, double eta) {
    const double inv_theta = theta == kInf ? 0.0 : 1.0 / theta;
    const double inv_eta = eta == kInf ? 0.0 : 1.0 / eta;
    const bool strict = r > std::max(inv_eta - inv_theta, 0.0);
    const bool boundary = r == 0.0 && theta < eta; // the plain-Wiener lemma
    if (!strict && !boundary)
        throw std::invalid_argument("rate_sweep: requires r > (1/eta - 1/theta)_+");
}

/// Cube radius M so that (2d+1)M covers the witness support.
inline int covering_radius(int support_radius, int d) {
    return std::max(1, (support_radius + 2 * d) / (2 * d + 1));
}

} // namespace detail

/// The witness family for sampling experiments at budget m: half the mass on
/// an equal-coefficient layer polynomial with about 2m frequencies, half on a
/// single unit-norm mode just outside the weight-sorted cross of size 2m.
inline SparseTrigPoly gap_witness(std::uint64_t m, int d, double r, double theta,
                                  std::uint64_t cap = kDefaultEnumerationCap) {
    const int layer = smallest_layer_with_cardinality(2 * m, d);
    SparseTrigPoly f = fooling_wiener(layer, d, r, theta, cap) * Complex(0.5, 0.0);
    const auto freqs = sorted_frequencies(2 * m + 1, d, cap);
    const MultiIndex& mode = freqs.back();
    const double amp = std::pow(static_cast<double>(weight(mode)), -r);
    f.add_coefficient(mode, Complex(0.5 * amp, 0.0));
    return f;
}

/// One row per (m, seed). Sigma tasks use the layer fooling family; the
/// lower arm is the exact Parseval tail, the upper arm the layered scheme.
inline RateTable rate_sweep(const SweepConfig& config) {
    if (config.m_values.empty()) throw std::invalid_argument("rate_sweep: no m values");
    RateTable table;
    for (const std::uint64_t m : config.m_values) {
        if (m < 1) throw std::invalid_argument("rate_sweep: need m >= 1");
        for (const std::uint64_t seed : config.seeds) {
            RateRow row;
            row.m = static_cast<double>(m);
            row.seed = seed;
            std::ostringstream tags;
            switch (config.task) {
            case SweepTask::SigmaLower: {
                detail::require_sigma_smoothness(config.r, config.theta);
                const int layer = smallest_layer_with_cardinality(2 * m, config.d);
                auto f = fooling_wiener(layer, config.d, config.r, config.theta, config.cap);
                row.error = greedy_mterm(f, m, SpaceParams::lebesgue(2.0)).error;
                tags << "task=sigma-lower;layer=" << layer << ";support=" << f.term_count();
                break;
            }
            case SweepTask::SigmaUpper: {
                detail::require_sigma_smoothness(config.r, config.theta);
                const int layer = smallest_layer_with_cardinality(2 * m, config.d);
                auto f = fooling_wiener(layer, config.d, config.r, config.theta, config.cap);
                auto res = layered_mterm(f, m, config.q, config.r, config.theta,
                                         derive_seed(seed, m), config.maurey_trials);
                row.error = res.error;
                tags << "task=sigma-upper;layer=" << layer << ";terms=" << res.term_count;
                break;
            }
            case SweepTask::A2A: {
                detail::require_a2a_smoothness(config.r, config.theta, config.eta);
                auto f = fooling_a2a(m, config.d, config.r, config.theta, config.cap);
                row.error = greedy_mterm(f, m, SpaceParams::wiener_plain(config.eta)).error;
                tags << "task=a2a;support=" << f.term_count();
                break;
            }
            case SweepTask::Recovery: {
                detail::require_sigma_smoothness(config.r, config.theta);
                const int layer = smallest_layer_with_cardinality(2 * m, config.d);
                auto f = fooling_wiener(layer, config.d, config.r, config.theta, config.cap);
                RecoveryConfig rc;
                rc.sparsity = m;
                rc.cube_radius = detail::covering_radius(1 << layer, config.d);
                rc.q = config.q;
                rc.budget_constant = config.budget_constant;
                auto rep = recover_pipeline(f, rc, seed);
                row.error = rep.error;
                tags << "task=recovery;layer=" << layer << ";M=" << rep.big_m
                     << ";samples=" << rep.m << ";C_emp=" << rep.c_emp;
                break;
            }
            }
            row.tags = tags.str();
            table.rows.push_back(std::move(row));
        }
    }
    std::sort(table.rows.begin(), table.rows.end(), [](const RateRow& a, const RateRow& b) {
        return a.m != b.m ? a.m < b.m : a.seed < b.seed;
    });
    switch (config.task) {
    case SweepTask::SigmaLower: table.task = "sigma-lower"; break;
    case SweepTask::SigmaUpper: table.task = "sigma-upper"; break;
    case SweepTask::A2A: table.task = "a2a"; break;
    case SweepTask::Recovery: table.task = "recovery"; break;
    }
    return table;
}

struct GapTables {
    RateTable linear;
    RateTable nonlinear;
};

/// Paired sweep on the composite witness: idealized weight-sorted projection
/// with m frequencies against the nonlinear pipeline with n = m terms, the
/// same seed driving both arms.
inline GapTables sampling_gap_experiment(int d, double r, double theta,
                                         const std::vector<std::uint64_t>& m_values,
                                         const std::vector<std::uint64_t>& seeds,
                                         double budget_constant = 1.0) {
    detail::require_sigma_smoothness(r, theta);
    if (m_values.empty()) throw std::invalid_argument("sampling_gap_experiment: no m values");
    GapTables out;
    out.linear.task = "gap-linear";
    out.nonlinear.task = "gap-nonlinear";
    for (const std::uint64_t m : m_values) {
        auto f = gap_witness(m, d, r, theta);
        const int layer = smallest_layer_with_cardinality(2 * m, d);
        const double lin = linear_baseline(f, m);
        RecoveryConfig rc;
        rc.sparsity = m;
        rc.cube_radius = detail::covering_radius(1 << layer, d);
        rc.budget_constant = budget_constant;
        for (const std::uint64_t seed : seeds) {
            auto rep = recover_pipeline(f, rc, seed);
            std::ostringstream tags;
            tags << "layer=" << layer << ";M=" << rep.big_m << ";samples=" << rep.m;
            out.linear.rows.push_back(
                {static_cast<double>(m), lin, seed, "task=gap-linear;" + tags.str()});
            out.nonlinear.rows.push_back(
                {static_cast<double>(m), rep.error, seed, "task=gap-nonlinear;" + tags.str()});
        }
    }
    return out;
}

/// Merged CSV for the paired experiment with an explicit ratio column.
inline void write_gap_csv(std::ostream& os, const GapTables& gap) {
    if (gap.linear.rows.size() != gap.nonlinear.rows.size())
        throw std::invalid_argument("write_gap_csv: arm size mismatch");
    os << "m,linear_error,nonlinear_error,ratio,seed\n";
    os.precision(17);
    for (std::size_t i = 0; i < gap.linear.rows.size(); ++i) {
        const auto& l = gap.linear.rows[i];
        const auto& n = gap.nonlinear.rows[i];
        os << l.m << ',' << l.error << ',' << n.error << ',' << n.error / l.error << ','
           << l.seed << '\n';
    }
}

enum class EmbeddingCase {
    BesovToWienerNorm1,  // S^{r+1/theta-1/2}_{p,theta}B -> S^r_theta A, norm 1
    BesovToWienerGeneral,// S^{r+1/p+1/theta-1}_{p,theta}B -> S^r_theta A
    SobolevToWiener,     // S^{r+2/p-1}_p W -> S^r_p A
    WienerToBesov,       // S^{r+1-1/p-1/theta}_theta A -> S^r_{p,theta}B
    WienerToSobolev,     // S^{r+1-2/p}_p A -> S^r_p W
};

struct EmbeddingConfig {
    EmbeddingCase which = EmbeddingCase::BesovToWienerNorm1;
    int trials = 100;
    int d = 2;
    int max_level = 4; // random supports live on layers 0..max_level
    double r = 0.5;
    double p = 2.0;
    double theta = 1.0;
    int terms = 24;
    std::uint64_t seed = 0;
};

struct EmbeddingReport {
    std::string name;
    int trials = 0;
    int violations = 0;       // norm-1 case: ratios above 1 + 1e-9
    double max_ratio = 0.0;
    double constant_ratio = 0.0; // ratio at f = 1
    double growth_slope = 0.0;   // LS slope of log max-ratio vs log scale
    std::vector<std::pair<int, double>> per_level_max;
};

namespace detail {

/// Uniformly random composition of total into d nonnegative parts.
inline std::vector<int> random_composition(int total, int d, Rng& rng) {
    std::vector<int> parts(d, 0);
    int remaining = total;
    for (int axis = 0; axis + 1 < d; ++axis) {
        // P(first part = v) proportional to the number of completions
        const double denom = static_cast<double>(binomial(remaining + d - axis - 1, d - axis - 1));
        double u = rng.uniform01() * denom;
        int v = 0;
        for (; v < remaining; ++v) {
            const double ways =
                static_cast<double>(binomial(remaining - v + d - axis - 2, d - axis - 2));
            if (u < ways) break;
            u -= ways;
        }
        parts[axis] = v;
        remaining -= v;
    }
    parts[d - 1] = remaining;
    return parts;
}

/// Random frequency on the layer of the given level, uniform over the layer.
inline MultiIndex random_layer_point(int level, int d, Rng& rng) {
    const auto label = random_composition(level, d, rng);
    MultiIndex k(d);
    for (int i = 0; i < d; ++i) {
        if (label[i] == 0) {
            k[i] = 0;
            continue;
        }
        const int lo = 1 << (label[i] - 1);
        const int mag = lo + static_cast<int>(rng.below(static_cast<std::uint64_t>(lo)));
        k[i] = rng.uniform01() < 0.5 ? -mag : mag;
    }
    return k;
}

inline SparseTrigPoly random_layered_poly(int max_level, int d, int terms, Rng& rng) {
    SparseTrigPoly f(d);
    for (int t = 0; t < terms; ++t) {
        const int level = static_cast<int>(rng.below(static_cast<std::uint64_t>(max_level) + 1));
        f.add_coefficient(random_layer_point(level, d, rng), rng.gaussian_complex());
    }
    if (f.empty()) f.set_coefficient(MultiIndex(d, 0), 1.0);
    return f;
}

inline std::pair<SpaceParams, SpaceParams> embedding_spaces(const EmbeddingConfig& c) {
    switch (c.which) {
    case EmbeddingCase::BesovToWienerNorm1:
        if (!(c.theta > 0.0 && c.theta <= 2.0 && c.p >= 2.0 && c.r >= 0.0))
            throw std::invalid_argument("embedding_check: norm-1 case needs 0<theta<=2<=p, r>=0");
        return {SpaceParams::besov(c.r + 1.0 / c.theta - 0.5, c.p, c.theta),
                SpaceParams::wiener_weighted(c.r, c.theta)};
    case EmbeddingCase::BesovToWienerGeneral:
        if (!(c.p > 1.0 && c.p <= 2.0 && c.theta > 0.0 && c.theta <= 2.0 && c.r >= 0.0))
            throw std::invalid_argument("embedding_check: needs 1<p<=2, 0<theta<=2, r>=0");
        return {SpaceParams::besov(c.r + 1.0 / c.p + 1.0 / c.theta - 1.0, c.p, c.theta),
                SpaceParams::wiener_weighted(c.r, c.theta)};
    case EmbeddingCase::SobolevToWiener:
        if (!(c.p > 1.0 && c.p <= 2.0 && c.r >= 0.0))
            throw std::invalid_argument("embedding_check: needs 1<p<=2, r>=0");
        return {SpaceParams::sobolev(c.r + 2.0 / c.p - 1.0, c.p),
                SpaceParams::wiener_weighted(c.r, c.p)};
    case EmbeddingCase::WienerToBesov:
        if (!(c.p >= 2.0 && c.theta >= 2.0 && c.r >= 0.0))
            throw std::invalid_argument("embedding_check: needs 2<=p, 2<=theta, r>=0");
        return {SpaceParams::wiener_weighted(
                    c.r + 1.0 - 1.0 / c.p - (c.theta == kInf ? 0.0 : 1.0 / c.theta), c.theta),
                SpaceParams::besov(c.r, c.p, c.theta)};
    case EmbeddingCase::WienerToSobolev:
        if (!(c.p >= 2.0 && c.r >= 0.0))
            throw std::invalid_argument("embedding_check: needs 2<=p, r>=0");
        return {SpaceParams::wiener_weighted(c.r + 1.0 - 2.0 / c.p, c.p),
                SpaceParams::sobolev(c.r, c.p)};
    }
    throw std::logic_error("embedding_check: unreachable");
}

inline std::string embedding_name(EmbeddingCase which) {
    switch (which) {
    case EmbeddingCase::BesovToWienerNorm1: return "besov-to-wiener-norm1";
    case EmbeddingCase::BesovToWienerGeneral: return "besov-to-wiener";
    case EmbeddingCase::SobolevToWiener: return "sobolev-to-wiener";
    case EmbeddingCase::WienerToBesov: return "wiener-to-besov";
    case EmbeddingCase::WienerToSobolev: return "wiener-to-sobolev";
    }
    return "embedding";
}

} // namespace detail

/// Ratio ||f||_target / ||f||_source over random polynomials spread across
/// dyadic scales. The norm-1 case additionally counts violations of
/// ratio <= 1 + 1e-9; the growth slope quantifies "non-diverging".
inline EmbeddingReport embedding_check(const EmbeddingConfig& config) {
    const auto [source, target] = detail::embedding_spaces(config);
    EmbeddingReport rep;
    rep.name = detail::embedding_name(config.which);

    auto one = SparseTrigPoly::constant(config.d, 1.0);
    rep.constant_ratio = norm(one, target) / norm(one, source);

    Rng rng(derive_seed(config.seed, 0xE3));
    std::vector<double> level_max(config.max_level + 1, 0.0);
    for (int trial = 0; trial < config.trials; ++trial) {
        const int level = trial % (config.max_level + 1);
        auto f = detail::random_layered_poly(level, config.d, config.terms, rng);
        const double ratio = norm(f, target) / norm(f, source);
        rep.max_ratio = std::max(rep.max_ratio, ratio);
        level_max[level] = std::max(level_max[level], ratio);
        if (config.which == EmbeddingCase::BesovToWienerNorm1 && ratio > 1.0 + 1e-9)
            ++rep.violations;
        ++rep.trials;
    }
    for (int level = 0; level <= config.max_level; ++level)
        if (level_max[level] > 0.0) rep.per_level_max.emplace_back(level, level_max[level]);

    // least-squares slope of log max-ratio against log scale 2^level
    if (rep.per_level_max.size() >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const double n = static_cast<double>(rep.per_level_max.size());
        for (const auto& [level, ratio] : rep.per_level_max) {
            const double x = level * std::log(2.0);
            const double y = std::log(ratio);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        rep.growth_slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    }
    return rep;
}

struct LemmaCheck {
    std::string name;
    bool pass = false;
    double margin = 0.0;
    std::string detail;
};

struct LemmaReport {
    std::vector<LemmaCheck> checks;
    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

inline void write_lemma_report(std::ostream& os, const LemmaReport& report) {
    os.precision(6);
    for (const auto& c : report.checks)
        os << c.name << ": " << (c.pass ? "PASS" : "FAIL") << " (margin " << c.margin << ", "
           << c.detail << ")\n";
}

/// Numeric suites for the geometric-sum lemma, the counting Hoelder
/// inequality, the layer weight sandwich and the sorted-weight asymptotics.
inline LemmaReport verify_auxiliary_lemmas() {
    LemmaReport report;

    { // geometric sum: C(L) = sum_{k>L} (k-L)^a k^b 2^{-g k} / (L^b 2^{-g L})
        double worst = 1.0;
        std::string worst_combo;
        for (double alpha : {-1.0, 0.0, 1.0}) {
            for (double beta : {-1.0, 0.0, 1.0}) {
                for (double gamma : {2.0, 3.0}) {
                    double lo = kInf, hi = 0.0;
                    for (int big_l = 2; big_l <= 40; ++big_l) {
                        double sum = 0.0;
                        for (int k = big_l + 1; k <= big_l + 200; ++k)
                            sum += std::pow(k - big_l, alpha) * std::pow(k, beta) *
                                   std::exp2(-gamma * k);
                        const double c = sum / (std::pow(big_l, beta) * std::exp2(-gamma * big_l));
                        lo = std::min(lo, c);
                        hi = std::max(hi, c);
                    }
                    const double band = hi / lo;
                    if (band > worst) {
                        worst = band;
                        std::ostringstream os;
                        os << "alpha=" << alpha << ",beta=" << beta << ",gamma=" << gamma;
                        worst_combo = os.str();
                    }
                }
            }
        }
        report.checks.push_back({"geo_sum_constant_stability", worst <= 2.0, worst,
                                 "worst band at " + worst_combo});
    }

    { // counting Hoelder inequality on 1000 random sequences
        Rng rng(515151);
        double worst = 0.0;
        int violations = 0;
        for (int trial = 0; trial < 1000; ++trial) {
            const int n = 1 + static_cast<int>(rng.below(16));
            std::vector<double> x(n);
            for (double& v : x) v = rng.gaussian();
            double p = rng.uniform(0.2, 4.0), q = rng.uniform(0.2, 4.0);
            if (p > q) std::swap(p, q);
            const double lhs = sequence_lp(x, p);
            const double rhs = sequence_lp(x, q) *
                               std::pow(static_cast<double>(n), (q - p) / (q * p));
            if (lhs > rhs * (1.0 + 1e-12)) ++violations;
            worst = std::max(worst, lhs / rhs);
        }
        report.checks.push_back({"counting_hoelder", violations == 0, worst,
                                 std::to_string(violations) + " violations in 1000 trials"});
    }

    { // weight sandwich 2^{n-d} < w_k <= 2^n, exhaustive
        bool ok = true;
        double slack = kInf;
        for (int d = 1; d <= 3 && ok; ++d) {
            for (int n = 0; n <= 10 && ok; ++n) {
                for (const auto& k : enumerate_layer(n, d)) {
                    const double w = static_cast<double>(weight(k));
                    if (!(w > std::exp2(n - d) && w <= std::exp2(n))) {
                        ok = false;
                        break;
                    }
                    slack = std::min(slack, std::exp2(n) / w);
                }
            }
        }
        report.checks.push_back(
            {"layer_weight_sandwich", ok, slack, "exhaustive d<=3, n<=10"});
    }

    { // sorted weight at position ceil(2^n n^{d-1}) stays comparable to 2^n
        bool ok = true;
        double band = 0.0;
        for (int d = 2; d <= 3; ++d) {
            double lo = kInf, hi = 0.0;
            for (int n = 1; n <= 14; ++n) {
                const double pos =
                    std::ceil(std::exp2(n) * std::pow(static_cast<double>(n), d - 1));
                const double w = static_cast<double>(
                    weight_at_position(static_cast<std::uint64_t>(pos), d));
                const double ratio = w / std::exp2(n);
                lo = std::min(lo, ratio);
                hi = std::max(hi, ratio);
                if (ratio < 0.125 || ratio > 2.0) ok = false;
            }
            band = std::max(band, hi / lo);
        }
        ok = ok && band <= 4.0;
        report.checks.push_back(
            {"sorted_weight_position", ok, band, "ratio band over d=2,3, n<=14"});
    }

    return report;
}

} // namespace hcross
