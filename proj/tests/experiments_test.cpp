#include <catch2/catch_amalgamated.hpp>

#include "hcross/experiments.hpp"

using namespace hcross;
using Catch::Approx;

namespace {

RateTable synthetic_table(const std::vector<double>& ms,
                          const std::function<double(double)>& law) {
    RateTable t;
    for (double m : ms) t.rows.push_back({m, law(m), 0, ""});
    return t;
}

} // namespace

TEST_CASE("fit_rate recovers synthetic power laws") {
    const std::vector<double> ms{64, 128, 256, 512, 1024, 2048};
    auto t = synthetic_table(ms, [](double m) { return std::pow(m, -1.5) * std::log2(m); });
    auto fit = fit_rate(t, 1.0);
    CHECK(fit.main_exponent == Approx(1.5).margin(1e-6));
    CHECK(fit.constant == Approx(1.0).margin(1e-6));
    CHECK(fit.residual_rms <= 1e-10);

    auto free_fit = fit_rate(t);
    CHECK(free_fit.main_exponent == Approx(1.5).margin(1e-6));
    CHECK(free_fit.log_exponent == Approx(1.0).margin(1e-5));

    auto flat = synthetic_table(ms, [](double) { return 0.25; });
    auto flat_fit = fit_rate(flat, 0.0);
    CHECK(flat_fit.main_exponent == Approx(0.0).margin(1e-9));
    CHECK(flat_fit.constant == Approx(0.25).margin(1e-9));
}

TEST_CASE("fit_rate rejects degenerate inputs") {
    RateTable three;
    for (double m : {2.0, 4.0, 8.0}) three.rows.push_back({m, 1.0, 0, ""});
    CHECK_THROWS_AS(fit_rate(three), std::invalid_argument);

    RateTable same;
    for (int i = 0; i < 5; ++i) same.rows.push_back({16.0, 1.0, 0, ""});
    CHECK_THROWS_AS(fit_rate(same, 0.0), std::invalid_argument);

    RateTable zero;
    for (double m : {2.0, 4.0, 8.0, 16.0}) zero.rows.push_back({m, 0.0, 0, ""});
    CHECK_THROWS_AS(fit_rate(zero, 0.0), std::invalid_argument);
}

TEST_CASE("sigma-lower sweep emits exact Parseval tails") {
    SweepConfig config;
    config.task = SweepTask::SigmaLower;
    config.d = 2;
    config.r = 1.0;
    config.theta = 1.0;
    for (int j = 6; j <= 14; ++j) config.m_values.push_back(std::uint64_t(1) << j);
    auto table = rate_sweep(config);
    REQUIRE(table.rows.size() == 9);

    // strictly decreasing, and one row cross-checked against a direct tail
    for (std::size_t i = 1; i < table.rows.size(); ++i)
        CHECK(table.rows[i].error < table.rows[i - 1].error);
    const std::uint64_t m = 1 << 8;
    const int layer = smallest_layer_with_cardinality(2 * m, 2);
    auto f = fooling_wiener(layer, 2, 1.0, 1.0);
    const double coeff = std::abs(f.coefficients().begin()->second);
    const double expect = coeff * std::sqrt(static_cast<double>(f.term_count() - m));
    CHECK(table.rows[2].error == Approx(expect).epsilon(1e-12));
}

TEST_CASE("a2a sweep follows the closed-form half rate at r=0") {
    SweepConfig config;
    config.task = SweepTask::A2A;
    config.d = 1;
    config.r = 0.0;
    config.theta = 1.0;
    config.eta = 2.0;
    config.m_values = {16, 64, 256, 1024};
    auto table = rate_sweep(config);
    for (const auto& row : table.rows)
        CHECK(row.error * std::sqrt(row.m) == Approx(0.5).epsilon(1e-12));
}

TEST_CASE("sweeps reject violated parameter conditions by name") {
    SweepConfig bad;
    bad.task = SweepTask::SigmaLower;
    bad.r = 0.25;
    bad.theta = 2.0; // needs r > 1/2
    bad.m_values = {64};
    CHECK_THROWS_WITH(rate_sweep(bad), Catch::Matchers::ContainsSubstring("(1 - 1/theta)_+"));

    SweepConfig bad2;
    bad2.task = SweepTask::A2A;
    bad2.r = 0.0;
    bad2.theta = 2.0;
    bad2.eta = 1.0; // needs r > 1/eta - 1/theta = 1/2
    bad2.m_values = {64};
    CHECK_THROWS_WITH(rate_sweep(bad2), Catch::Matchers::ContainsSubstring("(1/eta - 1/theta)_+"));
}

TEST_CASE("sigma-upper sweep produces positive errors above the exact tails") {
    SweepConfig up;
    up.task = SweepTask::SigmaUpper;
    up.d = 2;
    up.r = 1.0;
    up.theta = 1.0;
    up.m_values = {64, 128, 256};
    auto upper = rate_sweep(up);
    up.task = SweepTask::SigmaLower;
    auto lower = rate_sweep(up);
    REQUIRE(upper.rows.size() == lower.rows.size());
    for (std::size_t i = 0; i < upper.rows.size(); ++i) {
        CHECK(upper.rows[i].error > 0.0);
        CHECK(upper.rows[i].error >= lower.rows[i].error * (1.0 - 1e-12));
    }
}

TEST_CASE("exact fooling tails track the predicted rate within a factor 4") {
    const int d = 2;
    for (double r : {0.5, 1.0}) {
        for (double theta : {1.0, 2.0}) {
            double lo = kInf, hi = 0.0;
            for (int j = 6; j <= 12; ++j) {
                const std::uint64_t m = std::uint64_t(1) << j;
                const int layer = smallest_layer_with_cardinality(2 * m, d);
                auto f = fooling_wiener(layer, d, r, theta);
                const double tail = greedy_mterm(f, m, SpaceParams::lebesgue(2.0)).error;
                const double inv_theta = 1.0 / theta;
                const double predicted =
                    std::pow(static_cast<double>(m), -(r + inv_theta - 0.5)) *
                    std::pow(log_star(static_cast<double>(m)), (d - 1) * r);
                const double ratio = tail / predicted;
                lo = std::min(lo, ratio);
                hi = std::max(hi, ratio);
            }
            INFO("r=" << r << " theta=" << theta << " band " << hi / lo);
            CHECK(hi / lo <= 4.0);
        }
    }
}

TEST_CASE("recovery sweep composes the pipeline") {
    SweepConfig config;
    config.task = SweepTask::Recovery;
    config.d = 2;
    config.r = 1.0;
    config.theta = 1.0;
    config.m_values = {4, 8};
    config.seeds = {0};
    auto table = rate_sweep(config);
    REQUIRE(table.rows.size() == 2);
    for (const auto& row : table.rows) {
        CHECK(std::isfinite(row.error));
        CHECK(row.tags.find("samples=") != std::string::npos);
    }
}

TEST_CASE("gap experiment pairs the two arms seed by seed") {
    auto gap = sampling_gap_experiment(2, 1.0, 1.0, {8, 16}, {0, 1});
    REQUIRE(gap.linear.rows.size() == 4);
    REQUIRE(gap.nonlinear.rows.size() == 4);
    for (std::size_t i = 0; i < gap.linear.rows.size(); ++i) {
        CHECK(gap.linear.rows[i].m == gap.nonlinear.rows[i].m);
        CHECK(gap.linear.rows[i].seed == gap.nonlinear.rows[i].seed);
        CHECK(gap.nonlinear.rows[i].error >= 0.0);
    }
    // the linear arm is deterministic: identical across seeds
    CHECK(gap.linear.rows[0].error == gap.linear.rows[1].error);

    std::ostringstream csv1, csv2;
    write_gap_csv(csv1, gap);
    auto rerun = sampling_gap_experiment(2, 1.0, 1.0, {8, 16}, {0, 1});
    write_gap_csv(csv2, rerun);
    CHECK(csv1.str() == csv2.str()); // bit-for-bit reproducible
    CHECK(csv1.str().rfind("m,linear_error,nonlinear_error,ratio,seed\n", 0) == 0);
}

TEST_CASE("norm-1 embedding never exceeds one") {
    EmbeddingConfig config;
    config.which = EmbeddingCase::BesovToWienerNorm1;
    config.trials = 80;
    config.d = 2;
    config.max_level = 4;
    config.r = 0.5;
    config.p = 2.0;
    config.theta = 1.0;
    auto rep = embedding_check(config);
    CHECK(rep.violations == 0);
    CHECK(rep.max_ratio <= 1.0 + 1e-9);
    CHECK(rep.constant_ratio == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("embedding ratios match the single-mode closed form") {
    // Wiener to Besov on one mode: ||e_k||_B = 2^{|j|_1 r}, ||e_k||_A = w^{r'}
    const double r = 0.5, p = 2.0, theta = 2.0;
    const MultiIndex k{3, -5};
    auto f = SparseTrigPoly::mode(k);
    const double target = norm(f, SpaceParams::besov(r, p, theta));
    const double source =
        norm(f, SpaceParams::wiener_weighted(r + 1.0 - 1.0 / p - 1.0 / theta, theta));
    int l1 = 0;
    for (int ki : k) l1 += block_coordinate(ki);
    const double expect_target = std::exp2(l1 * r);
    const double expect_source =
        std::pow(static_cast<double>(weight(k)), r + 1.0 - 1.0 / p - 1.0 / theta);
    CHECK(target == Approx(expect_target).epsilon(1e-12));
    CHECK(source == Approx(expect_source).epsilon(1e-12));
}

TEST_CASE("all five embedding cases run and stay bounded") {
    for (auto which :
         {EmbeddingCase::BesovToWienerNorm1, EmbeddingCase::BesovToWienerGeneral,
          EmbeddingCase::SobolevToWiener, EmbeddingCase::WienerToBesov,
          EmbeddingCase::WienerToSobolev}) {
        EmbeddingConfig config;
        config.which = which;
        config.trials = 30;
        config.d = 2;
        config.max_level = 3;
        config.r = 0.5;
        config.p = which == EmbeddingCase::BesovToWienerGeneral ||
                           which == EmbeddingCase::SobolevToWiener
                       ? 1.5
                       : 2.0;
        config.theta = which == EmbeddingCase::WienerToBesov ? 2.0 : 1.5;
        if (which == EmbeddingCase::BesovToWienerNorm1) config.theta = 1.0;
        auto rep = embedding_check(config);
        CHECK(rep.trials == 30);
        CHECK(std::isfinite(rep.max_ratio));
        CHECK(rep.max_ratio > 0.0);
        CHECK(rep.growth_slope <= 0.2); // loose sanity; the strict gate runs in acceptance
    }
}

TEST_CASE("embedding parameter validation") {
    EmbeddingConfig bad;
    bad.which = EmbeddingCase::BesovToWienerNorm1;
    bad.p = 1.5; // needs p >= 2
    CHECK_THROWS_AS(embedding_check(bad), std::invalid_argument);
}

TEST_CASE("auxiliary lemmas all verify") {
    auto report = verify_auxiliary_lemmas();
    REQUIRE(report.checks.size() == 4);
    for (const auto& check : report.checks) {
        INFO(check.name << " margin " << check.margin << " " << check.detail);
        CHECK(check.pass);
    }
    CHECK(report.all_pass());

    std::ostringstream os;
    write_lemma_report(os, report);
    CHECK(os.str().find("geo_sum_constant_stability: PASS") != std::string::npos);
}

TEST_CASE("rate csv and metadata formats") {
    RateTable t;
    t.task = "demo";
    t.rows.push_back({64.0, 0.125, 7, "task=demo"});
    std::ostringstream os;
    write_rate_csv(os, t);
    CHECK(os.str() == "m,error,seed,tags\n64,0.125,7,task=demo\n");

    std::ostringstream meta;
    write_metadata(meta, {{"command", "rates"}, {"seed", "7"}});
    CHECK(meta.str() == "command = rates\nseed = 7\n");
}
