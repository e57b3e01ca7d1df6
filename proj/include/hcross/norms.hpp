#pragma once

// Space parameters and norms: weighted and plain Wiener norms on the
// coefficient side, Besov and Sobolev norms of dominating mixed smoothness
// through dyadic blocks, Lebesgue norms by oversampled grid quadrature, the
// de la Vallee Poussin operator and the spectral-tail surrogate for the best
// approximation error by polynomials on a cube.

#include <cmath>
#include <limits>
#include <string>

#include "hcross/poly.hpp"

namespace hcross {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct SpaceParams {
    enum class Kind { WienerWeighted, WienerPlain, Besov, SobolevW, Lebesgue };

    Kind kind;
    double r = 0.0;     // mixed smoothness
    double p = 2.0;     // integrability (Besov, Sobolev)
    double theta = 1.0; // summation index (theta for Wiener/Besov, eta for plain Wiener)
    double q = 2.0;     // Lebesgue exponent

    static SpaceParams wiener_weighted(double r, double theta) {
        if (r < 0.0 || !(theta > 0.0))
            throw std::invalid_argument("wiener_weighted: need r >= 0, theta > 0");
        SpaceParams s{Kind::WienerWeighted};
        s.r = r;
        s.theta = theta;
        return s;
    }

    static SpaceParams wiener_plain(double eta) {
        if (!(eta > 0.0)) throw std::invalid_argument("wiener_plain: need eta > 0");
        SpaceParams s{Kind::WienerPlain};
        s.theta = eta;
        return s;
    }

    static SpaceParams besov(double r, double p, double theta) {
        if (r < 0.0 || !(p > 1.0) || p == kInf || !(theta > 0.0))
            throw std::invalid_argument("besov: need r >= 0, 1 < p < inf, theta > 0");
        SpaceParams s{Kind::Besov};
        s.r = r;
        s.p = p;
        s.theta = theta;
        return s;
    }

    static SpaceParams sobolev(double r, double p) {
        if (r < 0.0 || !(p > 1.0) || p == kInf)
            throw std::invalid_argument("sobolev: need r >= 0, 1 < p < inf");
        SpaceParams s{Kind::SobolevW};
        s.r = r;
        s.p = p;
        return s;
    }

    static SpaceParams lebesgue(double q) {
        if (!(q >= 1.0)) throw std::invalid_argument("lebesgue: need q >= 1");
        SpaceParams s{Kind::Lebesgue};
        s.q = q;
        return s;
    }

    /// Norms computed exactly from coefficients alone.
    bool is_coefficient_norm() const {
        return kind == Kind::WienerWeighted || kind == Kind::WienerPlain ||
               (kind == Kind::Lebesgue && q == 2.0);
    }

    std::string label() const {
        std::ostringstream os;
        switch (kind) {
        case Kind::WienerWeighted: os << "wiener(r=" << r << ",theta=" << theta << ")"; break;
        case Kind::WienerPlain: os << "wiener0(eta=" << theta << ")"; break;
        case Kind::Besov: os << "besov(r=" << r << ",p=" << p << ",theta=" << theta << ")"; break;
        case Kind::SobolevW: os << "sobolev(r=" << r << ",p=" << p << ")"; break;
        case Kind::Lebesgue: os << "L" << q; break;
        }
        return os.str();
    }
};

namespace detail {

/// (mean_x |v(x)|^q)^{1/q} over grid values; max for q = inf.
inline double grid_lq_norm(const std::vector<Complex>& values, double q) {
    if (values.empty()) return 0.0;
    if (q == kInf) {
        double m = 0.0;
        for (const Complex& v : values) m = std::max(m, std::abs(v));
        return m;
    }
    double acc = 0.0;
    for (const Complex& v : values) acc += std::pow(std::abs(v), q);
    return std::pow(acc / static_cast<double>(values.size()), 1.0 / q);
}

/// ell_theta combination of per-block contributions, sup for theta = inf.
class ThetaAccumulator {
public:
    explicit ThetaAccumulator(double theta) : theta_(theta) {}
    void add(double term) {
        if (theta_ == kInf) value_ = std::max(value_, term);
        else value_ += std::pow(term, theta_);
    }
    double result() const { return theta_ == kInf ? value_ : std::pow(value_, 1.0 / theta_); }

private:
    double theta_;
    double value_ = 0.0;
};

inline double default_oversample(double exponent) {
    return exponent == kInf ? 8.0 : 4.0;
}

inline std::map<BlockLabel, SparseTrigPoly> split_blocks(const SparseTrigPoly& f) {
    std::map<BlockLabel, SparseTrigPoly> blocks;
    for (const auto& [k, c] : f.coefficients()) {
        auto label = block_of(k);
        auto it = blocks.find(label);
        if (it == blocks.end()) it = blocks.emplace(label, SparseTrigPoly(f.dim())).first;
        it->second.set_coefficient(k, c);
    }
    return blocks;
}

inline double coeff_l2(const SparseTrigPoly& f) {
    double acc = 0.0;
    for (const auto& [k, c] : f.coefficients()) acc += std::norm(c);
    return std::sqrt(acc);
}

} // namespace detail

/// Space norm of f. Besov (p != 2), Sobolev (p != 2) and Lebesgue
/// (q not in {2, inf} plus the q = inf maximum) rest on grid quadrature; the
/// grid defaults to the oversampled power-of-two grid of the polynomial.
inline double norm(const SparseTrigPoly& f, const SpaceParams& params,
                   const GridSpec* grid = nullptr) {
    if (f.empty()) return 0.0;
    switch (params.kind) {
    case SpaceParams::Kind::WienerWeighted:
    case SpaceParams::Kind::WienerPlain: {
        const double r = params.kind == SpaceParams::Kind::WienerWeighted ? params.r : 0.0;
        detail::ThetaAccumulator acc(params.theta);
        for (const auto& [k, c] : f.coefficients()) {
            const double w = r == 0.0 ? 1.0 : std::pow(static_cast<double>(weight(k)), r);
            acc.add(w * std::abs(c));
        }
        return acc.result();
    }
    case SpaceParams::Kind::Besov: {
        auto blocks = detail::split_blocks(f);
        GridSpec shared = grid ? *grid : GridSpec::for_poly(f, detail::default_oversample(params.p));
        detail::ThetaAccumulator acc(params.theta);
        for (const auto& [label, part] : blocks) {
            int l1 = 0;
            for (int ji : label) l1 += ji;
            const double bnorm = params.p == 2.0
                                     ? detail::coeff_l2(part)
                                     : detail::grid_lq_norm(evaluate_grid(part, shared).values,
                                                            params.p);
            acc.add(std::exp2(static_cast<double>(l1) * params.r) * bnorm);
        }
        return acc.result();
    }
    case SpaceParams::Kind::SobolevW: {
        if (params.r == 0.0) return norm(f, SpaceParams::lebesgue(params.p), grid);
        auto blocks = detail::split_blocks(f);
        if (params.p == 2.0) {
            double acc = 0.0;
            for (const auto& [label, part] : blocks) {
                int l1 = 0;
                for (int ji : label) l1 += ji;
                const double s = std::exp2(static_cast<double>(l1) * params.r);
                const double b = detail::coeff_l2(part);
                acc += s * s * b * b;
            }
            return std::sqrt(acc);
        }
        GridSpec shared = grid ? *grid : GridSpec::for_poly(f, detail::default_oversample(params.p));
        std::vector<double> square(shared.total(), 0.0);
        for (const auto& [label, part] : blocks) {
            int l1 = 0;
            for (int ji : label) l1 += ji;
            const double s = std::exp2(static_cast<double>(l1) * params.r);
            auto vals = evaluate_grid(part, shared);
            for (std::size_t i = 0; i < square.size(); ++i)
                square[i] += s * s * std::norm(vals.values[i]);
        }
        double acc = 0.0;
        for (double sq : square) acc += std::pow(sq, params.p / 2.0);
        return std::pow(acc / static_cast<double>(square.size()), 1.0 / params.p);
    }
    case SpaceParams::Kind::Lebesgue: {
        if (params.q == 2.0) return detail::coeff_l2(f);
        GridSpec g = grid ? *grid : GridSpec::for_poly(f, detail::default_oversample(params.q));
        return detail::grid_lq_norm(evaluate_grid(f, g).values, params.q);
    }
    }
    throw std::logic_error("norm: unreachable");
}

/// Coefficient multiplier of the de la Vallee Poussin operator V_M along one
/// axis: 1 on [-M,M], linear decay to 0 at (2d+1)M, 0 beyond.
inline double vallee_poussin_multiplier(int k, int big_m, int d) {
    const double a = std::abs(static_cast<double>(k));
    const double cap = static_cast<double>((2 * d + 1)) * big_m;
    if (a <= big_m) return 1.0;
    if (a <= cap) return (cap - a) / (2.0 * d * big_m);
    return 0.0;
}

/// V_M f. The result is supported on [-D,D]^d with D = (2d+1)M, reproduces
/// every polynomial supported on [-M,M]^d, and all multipliers lie in [0,1].
inline SparseTrigPoly vallee_poussin(const SparseTrigPoly& f, int big_m) {
    if (big_m < 1) throw std::invalid_argument("vallee_poussin: need M >= 1");
    const int d = f.dim();
    SparseTrigPoly out(d);
    for (const auto& [k, c] : f.coefficients()) {
        double v = 1.0;
        for (int ki : k) {
            v *= vallee_poussin_multiplier(ki, big_m, d);
            if (v == 0.0) break;
        }
        if (v != 0.0) out.set_coefficient(k, v * c);
    }
    return out;
}

/// l_1 mass of the coefficients outside [-M,M]^d; an upper bound for the
/// uniform-norm error of best approximation by polynomials on that cube.
inline double best_trig_error_surrogate(const SparseTrigPoly& f, int big_m) {
    double acc = 0.0;
    for (const auto& [k, c] : f.coefficients()) {
        bool outside = false;
        for (int ki : k)
            if (std::abs(ki) > big_m) { outside = true; break; }
        if (outside) acc += std::abs(c);
    }
    return acc;
}

} // namespace hcross
