#pragma once

// Sampling recovery from iid random points: the truncated Fourier measurement
// system on a frequency cube, orthogonal matching pursuit driven by a
// precomputed correlation table, a proximal square-root Lasso, and the full
// sample-and-recover pipeline with its empirical constant.

#include <Eigen/Dense>

#include <chrono>
#include <functional>
#include <optional>
#include <set>

#include "hcross/mterm.hpp"
#include "hcross/norms.hpp"
#include "hcross/rng.hpp"

namespace hcross {

/// iid uniform sample points on [0,1)^d, reproducible from the seed alone.
inline Eigen::MatrixXd draw_samples(std::uint64_t m, int d, std::uint64_t seed) {
    if (m < 1 || d < 1) throw std::invalid_argument("draw_samples: need m >= 1, d >= 1");
    Rng rng(seed);
    Eigen::MatrixXd pts(static_cast<Eigen::Index>(m), d);
    for (Eigen::Index i = 0; i < pts.rows(); ++i)
        for (int j = 0; j < d; ++j) pts(i, j) = rng.uniform01();
    return pts;
}

/// ceil(C n d log*(n)^2 log*(M)) random samples suffice for n-term recovery
/// on the cube of radius M.
inline std::uint64_t sample_budget(std::uint64_t n, int big_m, int d, double c) {
    if (n < 1 || big_m < 1 || d < 1 || !(c > 0.0))
        throw std::invalid_argument("sample_budget: all parameters must be positive");
    const double ls_n = log_star(static_cast<double>(n));
    const double v = std::ceil(c * static_cast<double>(n) * d * ls_n * ls_n *
                               log_star(static_cast<double>(big_m)));
    if (!(v < 9.007199254740992e15)) throw std::overflow_error("sample_budget: overflow");
    return static_cast<std::uint64_t>(v);
}

/// The frequency cube Z^d cap [-radius, radius]^d, flattened lexicographically.
class FrequencyCube {
public:
    FrequencyCube(int d, int radius) : d_(d), radius_(radius) {
        if (d < 1 || radius < 0) throw std::invalid_argument("FrequencyCube: bad shape");
        size_ = 1;
        for (int i = 0; i < d; ++i) {
            size_ = detail::checked_mul(size_, 2 * static_cast<std::uint64_t>(radius) + 1,
                                        "FrequencyCube");
        }
    }

    int dim() const { return d_; }
    int radius() const { return radius_; }
    std::uint64_t size() const { return size_; }

    MultiIndex frequency(std::uint64_t flat) const {
        MultiIndex k(d_);
        const std::uint64_t side = 2 * static_cast<std::uint64_t>(radius_) + 1;
        for (int i = d_ - 1; i >= 0; --i) {
            k[i] = static_cast<int>(flat % side) - radius_;
            flat /= side;
        }
        return k;
    }

    std::uint64_t flatten(const MultiIndex& k) const {
        std::uint64_t flat = 0;
        const std::uint64_t side = 2 * static_cast<std::uint64_t>(radius_) + 1;
        for (int i = 0; i < d_; ++i) {
            if (std::abs(k[i]) > radius_) throw std::out_of_range("FrequencyCube: outside cube");
            flat = flat * side + static_cast<std::uint64_t>(k[i] + radius_);
        }
        return flat;
    }

    bool contains(const MultiIndex& k) const {
        for (int i = 0; i < d_; ++i)
            if (std::abs(k[i]) > radius_) return false;
        return true;
    }

private:
    int d_;
    int radius_;
    std::uint64_t size_;
};

namespace detail {

/// Phase matrix P(i, v - lo) = exp(sign * 2 pi i v x_{i,axis}) for v in
/// [lo, hi], built by recurrence with periodic renormalization.
inline Eigen::MatrixXcd phase_matrix(const Eigen::MatrixXd& points, Eigen::Index row_begin,
                                     Eigen::Index row_end, int axis, int lo, int hi, int sign) {
    const Eigen::Index rows = row_end - row_begin;
    Eigen::MatrixXcd p(rows, hi - lo + 1);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const double x = points(row_begin + i, axis);
        const double ang = sign * 2.0 * kPi * x;
        const Complex step = std::polar(1.0, ang);
        Complex val = std::polar(1.0, ang * static_cast<double>(lo));
        for (int v = lo; v <= hi; ++v) {
            p(i, v - lo) = val;
            val *= step;
            if (((v - lo) & 255) == 255) val /= std::abs(val);
        }
    }
    return p;
}

inline Eigen::Index gemm_chunk_rows(std::uint64_t cols) {
    const std::uint64_t budget = std::uint64_t(48) << 20; // ~48 MB per phase matrix
    const std::uint64_t rows = std::max<std::uint64_t>(budget / (cols * sizeof(Complex)), 64);
    return static_cast<Eigen::Index>(std::min<std::uint64_t>(rows, 1u << 31));
}

} // namespace detail

/// y_i = sum_{k in cube} c_k exp(2 pi i k.x_i).
inline Eigen::VectorXcd measure(const FrequencyCube& cube, const Eigen::VectorXcd& coeffs,
                                const Eigen::MatrixXd& points) {
    if (static_cast<std::uint64_t>(coeffs.size()) != cube.size())
        throw std::invalid_argument("measure: coefficient size mismatch");
    if (points.cols() != cube.dim())
        throw std::invalid_argument("measure: point dimension mismatch");
    const Eigen::Index m = points.rows();
    const int d = cube.dim();
    const int r = cube.radius();
    const int side = 2 * r + 1;
    Eigen::VectorXcd y(m);

    if (d == 1) {
        const Eigen::Index chunk = detail::gemm_chunk_rows(side);
        for (Eigen::Index i0 = 0; i0 < m; i0 += chunk) {
            const Eigen::Index i1 = std::min(m, i0 + chunk);
            auto p = detail::phase_matrix(points, i0, i1, 0, -r, r, +1);
            y.segment(i0, i1 - i0).noalias() = p * coeffs;
        }
        return y;
    }
    if (d == 2) {
        Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
            c2(coeffs.data(), side, side);
        const Eigen::Index chunk = detail::gemm_chunk_rows(side);
        for (Eigen::Index i0 = 0; i0 < m; i0 += chunk) {
            const Eigen::Index i1 = std::min(m, i0 + chunk);
            auto p1 = detail::phase_matrix(points, i0, i1, 0, -r, r, +1);
            auto p2 = detail::phase_matrix(points, i0, i1, 1, -r, r, +1);
            Eigen::MatrixXcd b = p1 * c2; // (chunk x side)
            y.segment(i0, i1 - i0) = (b.array() * p2.array()).rowwise().sum();
        }
        return y;
    }
    // small general-d fallback: direct per-point synthesis
    for (Eigen::Index i = 0; i < m; ++i) {
        std::vector<Eigen::VectorXcd> ph(d);
        for (int axis = 0; axis < d; ++axis)
            ph[axis] = detail::phase_matrix(points, i, i + 1, axis, -r, r, +1).row(0);
        Complex acc(0.0, 0.0);
        for (std::uint64_t flat = 0; flat < cube.size(); ++flat) {
            Complex term = coeffs(static_cast<Eigen::Index>(flat));
            if (term == Complex(0.0, 0.0)) continue;
            std::uint64_t rest = flat;
            for (int axis = d - 1; axis >= 0; --axis) {
                term *= ph[axis](static_cast<Eigen::Index>(rest % side));
                rest /= side;
            }
            acc += term;
        }
        y(i) = acc;
    }
    return y;
}

/// a_k = sum_i y_i exp(-2 pi i k.x_i), the conjugate-transpose of measure.
inline Eigen::VectorXcd adjoint_measure(const FrequencyCube& cube, const Eigen::VectorXcd& y,
                                        const Eigen::MatrixXd& points) {
    if (y.size() != points.rows()) throw std::invalid_argument("adjoint_measure: size mismatch");
    if (points.cols() != cube.dim())
        throw std::invalid_argument("adjoint_measure: point dimension mismatch");
    const Eigen::Index m = points.rows();
    const int d = cube.dim();
    const int r = cube.radius();
    const int side = 2 * r + 1;
    Eigen::VectorXcd a = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(cube.size()));

    if (d == 1) {
        const Eigen::Index chunk = detail::gemm_chunk_rows(side);
        for (Eigen::Index i0 = 0; i0 < m; i0 += chunk) {
            const Eigen::Index i1 = std::min(m, i0 + chunk);
            auto p = detail::phase_matrix(points, i0, i1, 0, -r, r, +1);
            a.noalias() += p.adjoint() * y.segment(i0, i1 - i0);
        }
        return a;
    }
    if (d == 2) {
        Eigen::Map<Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> a2(
            a.data(), side, side);
        const Eigen::Index chunk = detail::gemm_chunk_rows(side);
        for (Eigen::Index i0 = 0; i0 < m; i0 += chunk) {
            const Eigen::Index i1 = std::min(m, i0 + chunk);
            auto p1 = detail::phase_matrix(points, i0, i1, 0, -r, r, +1);
            Eigen::MatrixXcd yp2 =
                y.segment(i0, i1 - i0).asDiagonal() *
                detail::phase_matrix(points, i0, i1, 1, -r, r, +1).conjugate();
            a2.noalias() += p1.adjoint() * yp2;
        }
        return a;
    }
    for (Eigen::Index i = 0; i < m; ++i) {
        std::vector<Eigen::VectorXcd> ph(d);
        for (int axis = 0; axis < d; ++axis)
            ph[axis] = detail::phase_matrix(points, i, i + 1, axis, -r, r, -1).row(0);
        for (std::uint64_t flat = 0; flat < cube.size(); ++flat) {
            Complex term = y(i);
            std::uint64_t rest = flat;
            for (int axis = d - 1; axis >= 0; --axis) {
                term *= ph[axis](static_cast<Eigen::Index>(rest % side));
                rest /= side;
            }
            a(static_cast<Eigen::Index>(flat)) += term;
        }
    }
    return a;
}

/// Correlation table T[delta] = sum_i exp(-2 pi i delta.x_i) on the doubled
/// cube; the Gram matrix of the measurement atoms is T[k - k']. Hermitian
/// symmetry T[-delta] = conj(T[delta]) halves the work in d = 2.
inline Eigen::VectorXcd correlation_table(const FrequencyCube& doubled,
                                          const Eigen::MatrixXd& points) {
    const int d = doubled.dim();
    const int r = doubled.radius();
    const int side = 2 * r + 1;
    const Eigen::Index m = points.rows();
    if (d != 2) {
        return adjoint_measure(doubled, Eigen::VectorXcd::Ones(m), points);
    }
    Eigen::MatrixXcd half = Eigen::MatrixXcd::Zero(r + 1, side); // delta_1 in [0, r]
    const Eigen::Index chunk = detail::gemm_chunk_rows(side);
    for (Eigen::Index i0 = 0; i0 < m; i0 += chunk) {
        const Eigen::Index i1 = std::min(m, i0 + chunk);
        auto p1 = detail::phase_matrix(points, i0, i1, 0, 0, r, +1);
        auto p2 = detail::phase_matrix(points, i0, i1, 1, -r, r, -1);
        half.noalias() += p1.adjoint() * p2;
    }
    Eigen::VectorXcd t(static_cast<Eigen::Index>(doubled.size()));
    Eigen::Map<Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> t2(
        t.data(), side, side);
    for (int v = 0; v <= r; ++v) t2.row(r + v) = half.row(v);
    for (int v = 1; v <= r; ++v)
        for (int w = -r; w <= r; ++w) t2(r - v, r + w) = std::conj(t2(r + v, r - w));
    return t;
}

struct OmpResult {
    SparseTrigPoly solution;
    int iterations = 0;
    double residual = 0.0;           // ||y - Phi c||_2 / sqrt(m)
    double condition_estimate = 1.0; // of the final normalized Gram block
    bool ill_conditioned = false;
    std::vector<double> residual_trace; // one entry per refit

    explicit OmpResult(int dim) : solution(dim) {}
};

/// Orthogonal matching pursuit on the cube [-D,D]^d: pick the frequency with
/// the largest |adjoint residual| (lexicographic tie-break), re-fit all
/// selected coefficients by least squares on the 1/sqrt(m)-normalized system,
/// stop after n terms or when the residual drops below tol.
inline OmpResult omp_recover(const Eigen::MatrixXd& points, const Eigen::VectorXcd& y, int big_d,
                             std::uint64_t n_terms, double tol = 1e-10,
                             std::uint64_t table_cap = (std::uint64_t(1) << 27)) {
    if (points.rows() < 1) throw std::invalid_argument("omp_recover: no samples");
    const int d = static_cast<int>(points.cols());
    const double m = static_cast<double>(points.rows());
    FrequencyCube cube(d, big_d);
    FrequencyCube doubled(d, 2 * big_d);
    if (doubled.size() > table_cap)
        throw CapExceeded("omp_recover: correlation table of " + std::to_string(doubled.size()) +
                          " entries exceeds cap");

    OmpResult res(d);
    const double y_sq = y.squaredNorm();
    if (y_sq == 0.0) return res;

    const Eigen::VectorXcd corr0 = adjoint_measure(cube, y, points);
    const Eigen::VectorXcd table = correlation_table(doubled, points);
    const Eigen::Index n_cube = static_cast<Eigen::Index>(cube.size());

    auto table_at = [&](const MultiIndex& a, const MultiIndex& b) {
        MultiIndex delta(d);
        for (int i = 0; i < d; ++i) delta[i] = a[i] - b[i];
        return table(static_cast<Eigen::Index>(doubled.flatten(delta)));
    };

    std::vector<std::uint64_t> selected;
    std::vector<MultiIndex> sel_freq;
    std::vector<char> is_selected(cube.size(), 0);
    Eigen::VectorXcd corr = corr0;
    Eigen::VectorXcd coef;
    Eigen::MatrixXcd gram; // grows with the selected set

    while (selected.size() < n_terms) {
        // selection: largest |corr|, first index wins ties
        Eigen::Index best = -1;
        double best_mag = 0.0;
        for (Eigen::Index i = 0; i < n_cube; ++i) {
            if (is_selected[static_cast<std::uint64_t>(i)]) continue;
            const double mag = std::norm(corr(i));
            if (mag > best_mag) {
                best_mag = mag;
                best = i;
            }
        }
        if (best < 0 || best_mag == 0.0) break;

        selected.push_back(static_cast<std::uint64_t>(best));
        sel_freq.push_back(cube.frequency(static_cast<std::uint64_t>(best)));
        is_selected[static_cast<std::uint64_t>(best)] = 1;
        const std::size_t s = selected.size();

        gram.conservativeResize(s, s);
        for (std::size_t j = 0; j < s; ++j) {
            gram(s - 1, j) = table_at(sel_freq[s - 1], sel_freq[j]) / m;
            gram(j, s - 1) = std::conj(gram(s - 1, j));
        }
        Eigen::VectorXcd rhs(s);
        for (std::size_t j = 0; j < s; ++j)
            rhs(j) = corr0(static_cast<Eigen::Index>(selected[j])) / m;

        Eigen::LDLT<Eigen::MatrixXcd> ldlt(gram);
        coef = ldlt.solve(rhs);

        // residual of the refit: ||y||^2 - 2 Re <c, b> + c^H G c, normalized
        const double quad = std::real(coef.dot(gram * coef)) * m;
        const double cross = 2.0 * std::real(coef.dot(rhs)) * m;
        const double resid_sq = std::max(0.0, y_sq - cross + quad);
        res.residual = std::sqrt(resid_sq / m);
        res.residual_trace.push_back(res.residual);

        if (res.residual <= tol || s == n_terms) break;

        // refresh the residual correlation from the table
        corr = corr0;
        for (std::size_t j = 0; j < s; ++j) {
            if (coef(j) == Complex(0.0, 0.0)) continue;
            for (Eigen::Index i = 0; i < n_cube; ++i)
                corr(i) -= coef(j) * table_at(cube.frequency(static_cast<std::uint64_t>(i)),
                                              sel_freq[j]);
        }
    }

    res.iterations = static_cast<int>(selected.size());
    if (!selected.empty()) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram);
        const double lo = es.eigenvalues().minCoeff();
        const double hi = es.eigenvalues().maxCoeff();
        res.condition_estimate = lo > 0.0 ? hi / lo : kInf;
        res.ill_conditioned = !(lo > hi * 1e-12);
        for (std::size_t j = 0; j < selected.size(); ++j)
            res.solution.add_coefficient(sel_freq[j], coef(j));
    }
    return res;
}

struct SqrtLassoResult {
    SparseTrigPoly solution;
    int iterations = 0;
    double objective = 0.0;
    double objective_gap = 0.0; // last relative change
    bool converged = false;
    std::vector<double> objective_trace;

    explicit SqrtLassoResult(int dim) : solution(dim) {}
};

/// Square-root Lasso min ||y - Phi c||_2 / sqrt(m) + lambda ||c||_1 by
/// proximal gradient with backtracking; the objective never increases across
/// accepted steps.
inline SqrtLassoResult sqrt_lasso_recover(const Eigen::MatrixXd& points,
                                          const Eigen::VectorXcd& y, int big_d, double lambda,
                                          int max_iters = 500, double tol = 1e-10) {
    if (!(lambda > 0.0)) throw std::invalid_argument("sqrt_lasso_recover: need lambda > 0");
    if (max_iters < 1) throw std::invalid_argument("sqrt_lasso_recover: need iterations >= 1");
    const int d = static_cast<int>(points.cols());
    const double m = static_cast<double>(points.rows());
    FrequencyCube cube(d, big_d);
    const Eigen::Index n_cube = static_cast<Eigen::Index>(cube.size());

    SqrtLassoResult res(d);
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(n_cube);
    Eigen::VectorXcd resid = y;

    auto data_term = [&](const Eigen::VectorXcd& rr) { return rr.norm() / std::sqrt(m); };
    auto objective = [&](const Eigen::VectorXcd& cc, const Eigen::VectorXcd& rr) {
        return data_term(rr) + lambda * cc.template lpNorm<1>();
    };

    double f_cur = objective(c, resid);
    res.objective_trace.push_back(f_cur);
    double step = 1.0;

    for (int it = 0; it < max_iters; ++it) {
        const double r_norm = resid.norm();
        if (r_norm == 0.0) {
            res.converged = true;
            break;
        }
        // gradient of ||y - Phi c||/sqrt(m): -Phi^H resid / (sqrt(m) ||resid||)
        Eigen::VectorXcd grad =
            adjoint_measure(cube, resid, points) * (-1.0 / (std::sqrt(m) * r_norm));

        bool accepted = false;
        for (int bt = 0; bt < 60; ++bt) {
            Eigen::VectorXcd cand = c - step * grad;
            const double thr = step * lambda;
            for (Eigen::Index i = 0; i < n_cube; ++i) {
                const double a = std::abs(cand(i));
                cand(i) = a <= thr ? Complex(0.0, 0.0) : cand(i) * ((a - thr) / a);
            }
            Eigen::VectorXcd cand_resid = y - measure(cube, cand, points);
            const double f_cand = objective(cand, cand_resid);
            if (f_cand <= f_cur) {
                const double gap = (f_cur - f_cand) / std::max(f_cur, 1e-300);
                c = std::move(cand);
                resid = std::move(cand_resid);
                f_cur = f_cand;
                res.objective_trace.push_back(f_cur);
                res.objective_gap = gap;
                res.iterations = it + 1;
                accepted = true;
                step *= 1.25;
                if (gap < tol) res.converged = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted || res.converged) {
            res.converged = res.converged || !accepted;
            break;
        }
    }
    res.objective = f_cur;
    for (Eigen::Index i = 0; i < n_cube; ++i)
        if (c(i) != Complex(0.0, 0.0))
            res.solution.add_coefficient(cube.frequency(static_cast<std::uint64_t>(i)), c(i));
    return res;
}

struct RecoveryConfig {
    std::uint64_t sparsity = 8;  // n
    int cube_radius = 8;         // M
    double q = 2.0;
    double budget_constant = 2.0;
    enum class Solver { Omp, SqrtLasso } solver = Solver::Omp;
    int max_iterations = 500; // sqrt-lasso iteration cap
    double tolerance = 1e-10;
    double lambda = 0.0; // 0 picks sqrt(2 log N / m)

    int big_d(int d) const { return (2 * d + 1) * cube_radius; }

    void validate() const {
        if (sparsity < 1 || cube_radius < 1)
            throw std::invalid_argument("RecoveryConfig: need n >= 1 and M >= 1");
        if (!(q >= 2.0)) throw std::invalid_argument("RecoveryConfig: need 2 <= q <= inf");
        if (!(budget_constant > 0.0))
            throw std::invalid_argument("RecoveryConfig: need C > 0");
    }

    std::string solver_name() const { return solver == Solver::Omp ? "omp" : "sqrt_lasso"; }
};

struct RecoveryReport {
    std::uint64_t seed = 0;
    std::uint64_t m = 0; // samples drawn
    std::uint64_t n = 0; // sparsity budget
    int big_m = 0;       // cube radius M
    double q = 2.0;
    std::string solver;
    double error = 0.0;       // measured L_q distance
    double sigma_n_a = 0.0;   // exact sigma_n(f)_A
    double e_surrogate = 0.0; // spectral tail outside [-M,M]^d
    double c_emp = 0.0;       // error / (n^{1/2-1/q} (n^{-1/2} sigma + E))
    double wall_time_ms = 0.0;
    SparseTrigPoly approximant{1};
};

inline void write_recovery_report(std::ostream& os, const RecoveryReport& rep) {
    os.precision(17);
    os << "seed = " << rep.seed << '\n'
       << "m = " << rep.m << '\n'
       << "n = " << rep.n << '\n'
       << "M = " << rep.big_m << '\n'
       << "q = " << rep.q << '\n'
       << "solver = " << rep.solver << '\n'
       << "error = " << rep.error << '\n'
       << "sigma_n_A = " << rep.sigma_n_a << '\n'
       << "E_surrogate = " << rep.e_surrogate << '\n'
       << "C_emp = " << rep.c_emp << '\n'
       << "wall_time_ms = " << rep.wall_time_ms << '\n';
}

/// Draw the budgeted samples, recover on [-D,D]^d, measure the L_q error and
/// compare against n^{1/2-1/q} (n^{-1/2} sigma_n(f)_A + E_M(f)).
inline RecoveryReport recover_pipeline(const SparseTrigPoly& f, const RecoveryConfig& config,
                                       std::uint64_t seed) {
    config.validate();
    const auto t0 = std::chrono::steady_clock::now();
    const int d = f.dim();

    RecoveryReport rep;
    rep.seed = seed;
    rep.n = config.sparsity;
    rep.big_m = config.cube_radius;
    rep.q = config.q;
    rep.solver = config.solver_name();
    rep.m = sample_budget(config.sparsity, config.cube_radius, d, config.budget_constant);

    const Eigen::MatrixXd points = draw_samples(rep.m, d, seed);
    Eigen::VectorXcd y(points.rows());
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        std::vector<double> x(d);
        for (int j = 0; j < d; ++j) x[j] = points(i, j);
        y(i) = evaluate(f, x);
    }

    const int big_d = config.big_d(d);
    if (config.solver == RecoveryConfig::Solver::Omp) {
        rep.approximant =
            omp_recover(points, y, big_d, config.sparsity, config.tolerance).solution;
    } else {
        double lambda = config.lambda;
        if (lambda <= 0.0) {
            const double n_cube = std::pow(2.0 * big_d + 1.0, d);
            lambda = std::sqrt(2.0 * std::log(n_cube) / static_cast<double>(rep.m));
        }
        rep.approximant =
            sqrt_lasso_recover(points, y, big_d, lambda, config.max_iterations, config.tolerance)
                .solution;
    }

    rep.error = norm(f - rep.approximant, SpaceParams::lebesgue(config.q));
    rep.sigma_n_a = greedy_mterm(f, config.sparsity, SpaceParams::wiener_plain(1.0)).error;
    rep.e_surrogate = best_trig_error_surrogate(f, config.cube_radius);

    const double n = static_cast<double>(config.sparsity);
    const double inv_q = config.q == kInf ? 0.0 : 1.0 / config.q;
    const double bound = std::pow(n, 0.5 - inv_q) *
                         (rep.sigma_n_a / std::sqrt(n) + rep.e_surrogate);
    rep.c_emp = bound > 0.0 ? rep.error / bound : std::nan("");

    rep.wall_time_ms = std::chrono::duration<double, std::milli>(
                           std::chrono::steady_clock::now() - t0)
                           .count();
    return rep;
}

/// Recovery from a black-box point evaluator; error metrics that need the
/// spectrum are reported as NaN.
inline RecoveryReport recover_pipeline(
    const std::function<Complex(const std::vector<double>&)>& oracle, int d,
    const RecoveryConfig& config, std::uint64_t seed) {
    config.validate();
    const auto t0 = std::chrono::steady_clock::now();

    RecoveryReport rep;
    rep.seed = seed;
    rep.n = config.sparsity;
    rep.big_m = config.cube_radius;
    rep.q = config.q;
    rep.solver = config.solver_name();
    rep.m = sample_budget(config.sparsity, config.cube_radius, d, config.budget_constant);
    rep.error = rep.sigma_n_a = rep.e_surrogate = rep.c_emp = std::nan("");

    const Eigen::MatrixXd points = draw_samples(rep.m, d, seed);
    Eigen::VectorXcd y(points.rows());
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        std::vector<double> x(d);
        for (int j = 0; j < d; ++j) x[j] = points(i, j);
        y(i) = oracle(x);
    }
    const int big_d = config.big_d(d);
    if (config.solver == RecoveryConfig::Solver::Omp) {
        rep.approximant =
            omp_recover(points, y, big_d, config.sparsity, config.tolerance).solution;
    } else {
        double lambda = config.lambda;
        if (lambda <= 0.0) {
            const double n_cube = std::pow(2.0 * big_d + 1.0, d);
            lambda = std::sqrt(2.0 * std::log(n_cube) / static_cast<double>(rep.m));
        }
        rep.approximant =
            sqrt_lasso_recover(points, y, big_d, lambda, config.max_iterations, config.tolerance)
                .solution;
    }
    rep.wall_time_ms = std::chrono::duration<double, std::milli>(
                           std::chrono::steady_clock::now() - t0)
                           .count();
    return rep;
}

/// Idealized linear proxy: L_2 error of the projection onto the first m
/// frequencies of the nondecreasing-weight ordering, exact by Parseval.
inline double linear_baseline(const SparseTrigPoly& f, std::uint64_t m) {
    if (m < 1) throw std::invalid_argument("linear_baseline: need m >= 1");
    auto kept = sorted_frequencies(m, f.dim());
    std::set<MultiIndex> keep(kept.begin(), kept.end());
    double acc = 0.0;
    for (const auto& [k, c] : f.coefficients())
        if (!keep.count(k)) acc += std::norm(c);
    return std::sqrt(acc);
}

} // namespace hcross
