#pragma once

// Sparse trigonometric polynomials f(x) = sum_k c_k exp(2*pi*i k.x) on the
// d-torus [0,1)^d, pointwise and fast tensor-grid evaluation, and the plain
// text coefficient file format.

#include <cmath>
#include <complex>
#include <cstdint>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hcross/fft.hpp"
#include "hcross/index.hpp"

namespace hcross {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// Finite map from frequencies to Fourier coefficients. Coefficients that are
/// exactly zero are never stored.
class SparseTrigPoly {
public:
    using CoeffMap = std::map<MultiIndex, Complex>;

    explicit SparseTrigPoly(int dim) : dim_(dim) {
        if (dim < 1) throw std::invalid_argument("SparseTrigPoly: dimension must be >= 1");
    }

    static SparseTrigPoly constant(int dim, Complex value) {
        SparseTrigPoly f(dim);
        f.set_coefficient(MultiIndex(dim, 0), value);
        return f;
    }

    static SparseTrigPoly mode(const MultiIndex& k, Complex value = Complex(1.0, 0.0)) {
        SparseTrigPoly f(static_cast<int>(k.size()));
        f.set_coefficient(k, value);
        return f;
    }

    int dim() const { return dim_; }
    std::size_t term_count() const { return coeffs_.size(); }
    bool empty() const { return coeffs_.empty(); }
    const CoeffMap& coefficients() const { return coeffs_; }

    Complex coefficient(const MultiIndex& k) const {
        auto it = coeffs_.find(k);
        return it == coeffs_.end() ? Complex(0.0, 0.0) : it->second;
    }

    void set_coefficient(const MultiIndex& k, Complex value) {
        check_key(k);
        if (value == Complex(0.0, 0.0)) coeffs_.erase(k);
        else coeffs_[k] = value;
    }

    void add_coefficient(const MultiIndex& k, Complex value) {
        check_key(k);
        auto it = coeffs_.find(k);
        if (it == coeffs_.end()) {
            if (value != Complex(0.0, 0.0)) coeffs_.emplace(k, value);
            return;
        }
        it->second += value;
        if (it->second == Complex(0.0, 0.0)) coeffs_.erase(it);
    }

    SparseTrigPoly& operator+=(const SparseTrigPoly& other) {
        check_dim(other);
        for (const auto& [k, c] : other.coeffs_) add_coefficient(k, c);
        return *this;
    }

    SparseTrigPoly& operator-=(const SparseTrigPoly& other) {
        check_dim(other);
        for (const auto& [k, c] : other.coeffs_) add_coefficient(k, -c);
        return *this;
    }

    friend SparseTrigPoly operator+(SparseTrigPoly a, const SparseTrigPoly& b) { return a += b; }
    friend SparseTrigPoly operator-(SparseTrigPoly a, const SparseTrigPoly& b) { return a -= b; }

    SparseTrigPoly& operator*=(Complex s) {
        if (s == Complex(0.0, 0.0)) {
            coeffs_.clear();
            return *this;
        }
        for (auto& [k, c] : coeffs_) c *= s;
        return *this;
    }

    friend SparseTrigPoly operator*(SparseTrigPoly f, Complex s) { return f *= s; }
    friend SparseTrigPoly operator*(Complex s, SparseTrigPoly f) { return f *= s; }

    /// Largest |k_i| along one axis.
    int max_abs_frequency(int axis) const {
        int m = 0;
        for (const auto& [k, c] : coeffs_) m = std::max(m, std::abs(k[axis]));
        return m;
    }

    /// Largest |k_i| over all axes.
    int max_abs_frequency() const {
        int m = 0;
        for (int axis = 0; axis < dim_; ++axis) m = std::max(m, max_abs_frequency(axis));
        return m;
    }

    /// Restriction to the frequencies of one step hyperbolic layer.
    SparseTrigPoly layer_part(int n) const {
        SparseTrigPoly out(dim_);
        for (const auto& [k, c] : coeffs_) {
            int l1 = 0;
            for (int ki : k) l1 += block_coordinate(ki);
            if (l1 == n) out.coeffs_.emplace(k, c);
        }
        return out;
    }

    /// Largest layer index carrying a coefficient, or -1 for the zero polynomial.
    int max_layer() const {
        int m = -1;
        for (const auto& [k, c] : coeffs_) {
            int l1 = 0;
            for (int ki : k) l1 += block_coordinate(ki);
            m = std::max(m, l1);
        }
        return m;
    }

private:
    void check_key(const MultiIndex& k) const {
        if (static_cast<int>(k.size()) != dim_)
            throw std::invalid_argument("SparseTrigPoly: key dimension mismatch");
    }
    void check_dim(const SparseTrigPoly& other) const {
        if (other.dim_ != dim_)
            throw std::invalid_argument("SparseTrigPoly: dimension mismatch");
    }

    int dim_;
    CoeffMap coeffs_;
};

/// Pointwise evaluation sum_k c_k exp(2*pi*i k.x).
inline Complex evaluate(const SparseTrigPoly& f, const std::vector<double>& x) {
    if (static_cast<int>(x.size()) != f.dim())
        throw std::invalid_argument("evaluate: point dimension mismatch");
    Complex acc(0.0, 0.0);
    for (const auto& [k, c] : f.coefficients()) {
        double phase = 0.0;
        for (int i = 0; i < f.dim(); ++i) phase += static_cast<double>(k[i]) * x[i];
        acc += c * std::polar(1.0, 2.0 * kPi * phase);
    }
    return acc;
}

/// Uniform tensor grid with N_i points along axis i. Exact coefficient
/// recovery and L_2 quadrature need N_i >= 2*maxfreq_i + 1.
struct GridSpec {
    std::vector<int> sizes;

    explicit GridSpec(std::vector<int> sizes_in) : sizes(std::move(sizes_in)) {
        if (sizes.empty()) throw std::invalid_argument("GridSpec: empty");
        for (int n : sizes)
            if (n < 1) throw std::invalid_argument("GridSpec: sizes must be positive");
    }

    std::size_t total() const {
        std::size_t t = 1;
        for (int n : sizes) t *= static_cast<std::size_t>(n);
        return t;
    }

    bool admits(const SparseTrigPoly& f) const {
        if (static_cast<int>(sizes.size()) != f.dim()) return false;
        for (int i = 0; i < f.dim(); ++i)
            if (sizes[i] < 2 * f.max_abs_frequency(i) + 1) return false;
        return true;
    }

    /// Per-axis size = next power of two >= oversample*(2*maxfreq+1).
    static GridSpec for_poly(const SparseTrigPoly& f, double oversample = 1.0) {
        if (oversample < 1.0) throw std::invalid_argument("GridSpec: oversample must be >= 1");
        std::vector<int> sizes(f.dim());
        for (int i = 0; i < f.dim(); ++i) {
            const double need = oversample * (2.0 * f.max_abs_frequency(i) + 1.0);
            int n = 1;
            while (n < need) n *= 2;
            sizes[i] = n;
        }
        return GridSpec(sizes);
    }
};

/// Row-major tensor of grid values.
struct GridValues {
    std::vector<int> dims;
    std::vector<Complex> values;
};

/// Values of f on the uniform tensor grid, via FFT synthesis. Grid point j
/// corresponds to x = (j_1/N_1, ..., j_d/N_d).
inline GridValues evaluate_grid(const SparseTrigPoly& f, const GridSpec& grid) {
    if (static_cast<int>(grid.sizes.size()) != f.dim())
        throw std::invalid_argument("evaluate_grid: grid dimension mismatch");
    if (!grid.admits(f))
        throw std::invalid_argument("evaluate_grid: grid too small for the polynomial");
    GridValues out;
    out.dims = grid.sizes;
    out.values.assign(grid.total(), Complex(0.0, 0.0));
    // scatter coefficients into wrapped bins
    for (const auto& [k, c] : f.coefficients()) {
        std::size_t flat = 0;
        for (int i = 0; i < f.dim(); ++i) {
            const int n = grid.sizes[i];
            const int bin = ((k[i] % n) + n) % n;
            flat = flat * static_cast<std::size_t>(n) + static_cast<std::size_t>(bin);
        }
        out.values[flat] += c;
    }
    for (int axis = 0; axis < f.dim(); ++axis)
        detail::dft_axis(out.values, out.dims, axis, +1);
    return out;
}

/// Coefficient file: header "d=<d>", then one line per mode
/// "k_1 ... k_d re im". Floats carry 17 significant digits so that values
/// round-trip exactly.
inline void write_coefficients(std::ostream& os, const SparseTrigPoly& f) {
    os << "d=" << f.dim() << '\n';
    std::ostringstream line;
    line.precision(17);
    for (const auto& [k, c] : f.coefficients()) {
        line.str("");
        for (int v : k) line << v << ' ';
        line << c.real() << ' ' << c.imag();
        os << line.str() << '\n';
    }
}

inline SparseTrigPoly read_coefficients(std::istream& is) {
    std::string header;
    if (!std::getline(is, header) || header.rfind("d=", 0) != 0)
        throw std::runtime_error("coefficient file: missing d= header");
    const int d = std::stoi(header.substr(2));
    SparseTrigPoly f(d);
    std::string line;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ls(line);
        MultiIndex k(d);
        double re, im;
        for (int i = 0; i < d; ++i)
            if (!(ls >> k[i]))
                throw std::runtime_error("coefficient file: bad index on line " +
                                         std::to_string(lineno));
        if (!(ls >> re >> im))
            throw std::runtime_error("coefficient file: bad coefficient on line " +
                                     std::to_string(lineno));
        f.add_coefficient(k, Complex(re, im));
    }
    return f;
}

} // namespace hcross
