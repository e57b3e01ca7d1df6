#include <catch2/catch_amalgamated.hpp>

#include "hcross/recovery.hpp"

using namespace hcross;
using Catch::Approx;

namespace {

SparseTrigPoly random_sparse_on_cube(Rng& rng, int d, int radius, int terms) {
    SparseTrigPoly f(d);
    while (static_cast<int>(f.term_count()) < terms) {
        MultiIndex k(d);
        for (int i = 0; i < d; ++i)
            k[i] = static_cast<int>(rng.below(2 * radius + 1)) - radius;
        f.set_coefficient(k, std::polar(rng.uniform(0.5, 2.0), rng.uniform(0.0, 2.0 * kPi)));
    }
    return f;
}

} // namespace

TEST_CASE("draw_samples is reproducible and uniform") {
    auto a = draw_samples(100, 3, 42);
    auto b = draw_samples(100, 3, 42);
    CHECK(a == b);
    auto c = draw_samples(100, 3, 43);
    CHECK(a != c);

    auto big = draw_samples(100000, 2, 7);
    for (int axis = 0; axis < 2; ++axis) {
        const double mean = big.col(axis).mean();
        CHECK(mean == Approx(0.5).margin(0.01));
    }
    CHECK(big.minCoeff() >= 0.0);
    CHECK(big.maxCoeff() < 1.0);

    auto single = draw_samples(1, 4, 0);
    CHECK(single.rows() == 1);
    CHECK(single.cols() == 4);
}

TEST_CASE("sample_budget plugs into the ceiling formula") {
    CHECK(sample_budget(16, 256, 2, 1.0) == 4096); // 16*2*16*8
    CHECK(sample_budget(1, 1, 1, 1.0) == 1);       // log* floors at 1
    CHECK(sample_budget(16, 256, 2, 2.0) == 8192);
    CHECK(sample_budget(3, 4, 2, 1.0) ==
          static_cast<std::uint64_t>(std::ceil(3.0 * 2 * std::pow(std::log2(3.0), 2) * 2.0)));
    CHECK_THROWS_AS(sample_budget(std::uint64_t(1) << 62, 4, 3, 1e6), std::overflow_error);
}

TEST_CASE("frequency cube flattening round-trips") {
    FrequencyCube cube(3, 2);
    CHECK(cube.size() == 125);
    for (std::uint64_t flat : {0ull, 1ull, 62ull, 124ull}) {
        const auto k = cube.frequency(flat);
        CHECK(cube.flatten(k) == flat);
    }
    CHECK(cube.frequency(0) == MultiIndex{-2, -2, -2});
    CHECK(cube.frequency(62) == MultiIndex{0, 0, 0});
    CHECK(!cube.contains({3, 0, 0}));
}

TEST_CASE("measure of the zero-frequency indicator is all ones") {
    FrequencyCube cube(2, 3);
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(cube.size());
    c(cube.flatten({0, 0})) = 1.0;
    auto pts = draw_samples(20, 2, 5);
    auto y = measure(cube, c, pts);
    for (Eigen::Index i = 0; i < y.size(); ++i)
        CHECK(std::abs(y(i) - Complex(1.0, 0.0)) < 1e-12);
}

TEST_CASE("measure of a single mode at a single point") {
    FrequencyCube cube(2, 4);
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(cube.size());
    const MultiIndex k{3, -2};
    c(cube.flatten(k)) = 1.0;
    Eigen::MatrixXd pt(1, 2);
    pt << 0.37, 0.81;
    auto y = measure(cube, c, pt);
    const Complex expect = std::polar(1.0, 2.0 * kPi * (3 * 0.37 - 2 * 0.81));
    CHECK(std::abs(y(0) - expect) < 1e-12);
}

TEST_CASE("adjoint satisfies the dot-product identity") {
    Rng rng(2025);
    for (int d : {1, 2, 3}) {
        FrequencyCube cube(d, d == 3 ? 2 : 5);
        auto pts = draw_samples(37, d, 11 + d);
        Eigen::VectorXcd c(cube.size()), y(pts.rows());
        for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = rng.gaussian_complex();
        for (Eigen::Index i = 0; i < y.size(); ++i) y(i) = rng.gaussian_complex();
        const Complex lhs = measure(cube, c, pts).adjoint() * y; // <Phi c, y>
        const Complex rhs = c.adjoint() * adjoint_measure(cube, y, pts);
        CHECK(std::abs(lhs - rhs) <= 1e-10 * std::abs(lhs));
    }
}

TEST_CASE("correlation table matches the direct adjoint of ones") {
    auto pts = draw_samples(50, 2, 3);
    FrequencyCube doubled(2, 6);
    auto table = correlation_table(doubled, pts);
    auto direct = adjoint_measure(doubled, Eigen::VectorXcd::Ones(pts.rows()), pts);
    REQUIRE(table.size() == direct.size());
    for (Eigen::Index i = 0; i < table.size(); ++i)
        CHECK(std::abs(table(i) - direct(i)) < 1e-9);
    CHECK(std::abs(table(doubled.flatten({0, 0})) - Complex(50.0, 0.0)) < 1e-10);
}

TEST_CASE("omp recovers a single mode exactly") {
    const MultiIndex k{2, -1};
    const Complex a(0.7, -0.4);
    auto f = SparseTrigPoly::mode(k, a);
    auto pts = draw_samples(32, 2, 9);
    Eigen::VectorXcd y(pts.rows());
    for (Eigen::Index i = 0; i < pts.rows(); ++i)
        y(i) = evaluate(f, {pts(i, 0), pts(i, 1)});
    auto res = omp_recover(pts, y, 5, 1);
    CHECK(res.iterations == 1);
    CHECK(std::abs(res.solution.coefficient(k) - a) <= 1e-8);
}

TEST_CASE("omp on zero samples returns the zero polynomial") {
    auto pts = draw_samples(16, 2, 1);
    Eigen::VectorXcd y = Eigen::VectorXcd::Zero(16);
    auto res = omp_recover(pts, y, 4, 5);
    CHECK(res.solution.empty());
    CHECK(res.residual == 0.0);
}

TEST_CASE("omp residual is nonincreasing and conditioning is reported") {
    Rng rng(8);
    auto f = random_sparse_on_cube(rng, 2, 6, 10);
    auto pts = draw_samples(400, 2, 77);
    Eigen::VectorXcd y(pts.rows());
    for (Eigen::Index i = 0; i < pts.rows(); ++i)
        y(i) = evaluate(f, {pts(i, 0), pts(i, 1)});
    auto res = omp_recover(pts, y, 10, 10);
    REQUIRE(res.residual_trace.size() >= 2);
    for (std::size_t i = 1; i < res.residual_trace.size(); ++i)
        CHECK(res.residual_trace[i] <= res.residual_trace[i - 1] * (1.0 + 1e-9));
    CHECK(res.condition_estimate >= 1.0);
    CHECK(!res.ill_conditioned);
}

TEST_CASE("omp exact support recovery at the sample budget") {
    const int d = 2, big_m = 16;
    const std::uint64_t n = 8;
    const std::uint64_t m = sample_budget(n, big_m, d, 2.0);
    int successes = 0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        Rng rng(900 + seed);
        auto f = random_sparse_on_cube(rng, d, big_m, static_cast<int>(n));
        auto pts = draw_samples(m, d, seed);
        Eigen::VectorXcd y(pts.rows());
        for (Eigen::Index i = 0; i < pts.rows(); ++i)
            y(i) = evaluate(f, {pts(i, 0), pts(i, 1)});
        auto res = omp_recover(pts, y, (2 * d + 1) * big_m, n);
        if (norm(f - res.solution, SpaceParams::lebesgue(2.0)) <= 1e-8) ++successes;
    }
    CHECK(successes >= 4);
}

TEST_CASE("sqrt lasso shrinks everything to zero for huge lambda") {
    Rng rng(4);
    auto f = random_sparse_on_cube(rng, 1, 4, 3);
    auto pts = draw_samples(64, 1, 2);
    Eigen::VectorXcd y(pts.rows());
    for (Eigen::Index i = 0; i < pts.rows(); ++i) y(i) = evaluate(f, {pts(i, 0)});
    auto res = sqrt_lasso_recover(pts, y, 6, 50.0, 100);
    CHECK(res.solution.empty());
}

TEST_CASE("sqrt lasso finds a single atom with small bias") {
    // single-atom oracle: objective |a-c| + lambda |c| keeps c = a for lambda < 1
    const MultiIndex k{2};
    const Complex a(0.8, 0.0);
    auto f = SparseTrigPoly::mode(k, a);
    auto pts = draw_samples(64, 1, 13);
    Eigen::VectorXcd y(pts.rows());
    for (Eigen::Index i = 0; i < pts.rows(); ++i) y(i) = evaluate(f, {pts(i, 0)});
    auto res = sqrt_lasso_recover(pts, y, 4, 0.05, 2000, 1e-12);
    CHECK(std::abs(res.solution.coefficient(k)) > 0.0);
    CHECK(std::abs(res.solution.coefficient(k) - a) <= 0.08);
}

TEST_CASE("sqrt lasso objective never increases") {
    Rng rng(21);
    for (int inst = 0; inst < 20; ++inst) {
        auto f = random_sparse_on_cube(rng, 1, 5, 4);
        auto pts = draw_samples(48, 1, 100 + inst);
        Eigen::VectorXcd y(pts.rows());
        for (Eigen::Index i = 0; i < pts.rows(); ++i) y(i) = evaluate(f, {pts(i, 0)});
        auto res = sqrt_lasso_recover(pts, y, 7, 0.02, 60);
        for (std::size_t i = 1; i < res.objective_trace.size(); ++i)
            CHECK(res.objective_trace[i] <= res.objective_trace[i - 1] + 1e-12);
    }
}

TEST_CASE("pipeline is exact in the pure compressed sensing regime") {
    Rng rng(5);
    RecoveryConfig config;
    config.sparsity = 4;
    config.cube_radius = 8;
    auto f = random_sparse_on_cube(rng, 2, config.cube_radius, 4);
    auto rep = recover_pipeline(f, config, 12);
    CHECK(rep.e_surrogate == 0.0);
    CHECK(rep.sigma_n_a == 0.0);
    CHECK(rep.error <= 1e-8);
    CHECK(std::isnan(rep.c_emp));
}

TEST_CASE("pipeline reports a finite constant on fooling inputs") {
    RecoveryConfig config;
    config.sparsity = 8;
    config.cube_radius = 8;
    auto f = fooling_wiener(3, 2, 1.0, 1.0); // 32 equal coefficients, radius 8
    auto rep = recover_pipeline(f, config, 3);
    CHECK(rep.e_surrogate == 0.0);
    CHECK(rep.sigma_n_a > 0.0);
    CHECK(rep.c_emp > 0.0);
    CHECK(rep.c_emp < 20.0);

    auto again = recover_pipeline(f, config, 3);
    CHECK(again.error == rep.error); // bit-identical given the seed
    CHECK(again.c_emp == rep.c_emp);
}

TEST_CASE("pipeline errors are ordered in q") {
    Rng rng(31);
    RecoveryConfig c2, cinf;
    c2.sparsity = cinf.sparsity = 3;
    c2.cube_radius = cinf.cube_radius = 2;
    cinf.q = kInf;
    auto f = fooling_wiener(3, 1, 1.0, 1.0); // radius 8 > M: forces a nonzero tail
    auto r2 = recover_pipeline(f, c2, 9);
    auto rinf = recover_pipeline(f, cinf, 9);
    CHECK(rinf.error >= r2.error * (1.0 - 1e-9));
}

TEST_CASE("pipeline report serializes every field") {
    RecoveryConfig config;
    config.sparsity = 2;
    config.cube_radius = 2;
    auto f = SparseTrigPoly::mode({1, 1}, 1.0);
    auto rep = recover_pipeline(f, config, 1);
    std::ostringstream os;
    write_recovery_report(os, rep);
    const std::string text = os.str();
    for (const char* field : {"seed = ", "m = ", "n = ", "M = ", "q = ", "solver = ", "error = ",
                              "sigma_n_A = ", "E_surrogate = ", "C_emp = ", "wall_time_ms = "})
        CHECK(text.find(field) != std::string::npos);
}

TEST_CASE("oracle overload recovers without a reference spectrum") {
    RecoveryConfig config;
    config.sparsity = 2;
    config.cube_radius = 3;
    auto f = SparseTrigPoly::mode({2}, Complex(0.5, 0.5));
    auto rep = recover_pipeline(
        [&](const std::vector<double>& x) { return evaluate(f, x); }, 1, config, 4);
    CHECK(std::isnan(rep.error));
    CHECK(std::abs(rep.approximant.coefficient({2}) - Complex(0.5, 0.5)) <= 1e-8);
}

TEST_CASE("linear baseline projects onto the weight-sorted cross") {
    SparseTrigPoly f(1);
    f.set_coefficient({0}, 2.0);
    f.set_coefficient({1}, 1.0);
    CHECK(linear_baseline(f, 3) == 0.0); // first three sorted: 0, -1, 1

    auto g = fooling_wiener(5, 2, 1.0, 1.0);
    const double coeff = std::abs(g.coefficients().begin()->second);
    const std::uint64_t m = 64;
    auto kept = sorted_frequencies(m, 2);
    std::set<MultiIndex> keep(kept.begin(), kept.end());
    std::uint64_t overlap = 0;
    for (const auto& [k, c] : g.coefficients())
        if (keep.count(k)) ++overlap;
    const double expect =
        coeff * std::sqrt(static_cast<double>(g.term_count() - overlap));
    CHECK(linear_baseline(g, m) == Approx(expect).epsilon(1e-12));
}
