#pragma once

// Small in-header DFT engine for tensor-product grids: radix-2 FFT for
// power-of-two lengths, direct DFT otherwise. Sign convention: sign=+1
// computes synthesis sums b[j] = sum_k a[k] exp(+2*pi*i*j*k/N), never
// normalized.

#include <bit>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace hcross::detail {

inline constexpr double kTwoPi = 6.28318530717958647692;

inline void fft_pow2(std::vector<std::complex<double>>& a, int sign) {
    const std::size_t n = a.size();
    if (n < 2) return;
    // bit reversal
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    // twiddle table, one entry per half-grid point
    std::vector<std::complex<double>> tw(n / 2);
    for (std::size_t i = 0; i < n / 2; ++i) {
        const double ang = sign * kTwoPi * static_cast<double>(i) / static_cast<double>(n);
        tw[i] = {std::cos(ang), std::sin(ang)};
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t step = n / len;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> u = a[i + k];
                const std::complex<double> v = a[i + k + len / 2] * tw[k * step];
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
            }
        }
    }
}

inline void dft_direct(std::vector<std::complex<double>>& a, int sign) {
    const std::size_t n = a.size();
    if (n < 2) return;
    std::vector<std::complex<double>> root(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double ang = sign * kTwoPi * static_cast<double>(i) / static_cast<double>(n);
        root[i] = {std::cos(ang), std::sin(ang)};
    }
    std::vector<std::complex<double>> out(n, {0.0, 0.0});
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) out[j] += a[k] * root[(j * k) % n];
    a = std::move(out);
}

inline void dft_1d(std::vector<std::complex<double>>& a, int sign) {
    if (std::has_single_bit(a.size()) || a.size() < 2) fft_pow2(a, sign);
    else dft_direct(a, sign);
}

/// In-place transform along `axis` of a row-major tensor with extents `dims`.
inline void dft_axis(std::vector<std::complex<double>>& data, const std::vector<int>& dims,
                     int axis, int sign) {
    const int d = static_cast<int>(dims.size());
    if (axis < 0 || axis >= d) throw std::invalid_argument("dft_axis: axis out of range");
    const std::size_t n = static_cast<std::size_t>(dims[axis]);
    std::size_t inner = 1, outer = 1;
    for (int i = axis + 1; i < d; ++i) inner *= static_cast<std::size_t>(dims[i]);
    for (int i = 0; i < axis; ++i) outer *= static_cast<std::size_t>(dims[i]);
    std::vector<std::complex<double>> line(n);
    for (std::size_t o = 0; o < outer; ++o) {
        for (std::size_t in = 0; in < inner; ++in) {
            const std::size_t base = o * n * inner + in;
            for (std::size_t k = 0; k < n; ++k) line[k] = data[base + k * inner];
            dft_1d(line, sign);
            for (std::size_t k = 0; k < n; ++k) data[base + k * inner] = line[k];
        }
    }
}

} // namespace hcross::detail
