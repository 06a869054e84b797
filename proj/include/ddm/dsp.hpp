#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace ddm {

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;

inline constexpr double pi = std::numbers::pi;

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

namespace detail {

// Twiddle factors e^{-j 2 pi k / n} for k < n/2, cached per length.
inline const std::vector<cplx>& twiddles(std::size_t n) {
  thread_local std::unordered_map<std::size_t, std::vector<cplx>> cache;
  auto it = cache.find(n);
  if (it == cache.end()) {
    std::vector<cplx> tw(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k) {
      const double a = -2.0 * pi * static_cast<double>(k) / static_cast<double>(n);
      tw[k] = {std::cos(a), std::sin(a)};
    }
    it = cache.emplace(n, std::move(tw)).first;
  }
  return it->second;
}

inline void fft_radix2(std::span<cplx> x, bool inverse) {
  const std::size_t n = x.size();
  if (!is_pow2(n)) {
    throw std::invalid_argument("dft: length must be a power of two, got " + std::to_string(n));
  }
  if (n == 1) return;
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(x[i], x[j]);
  }
  const auto& tw = twiddles(n);
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t stride = n / len;
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < len / 2; ++k) {
        cplx w = tw[k * stride];
        if (inverse) w = std::conj(w);
        const cplx u = x[i + k];
        const cplx v = x[i + k + len / 2] * w;
        x[i + k] = u + v;
        x[i + k + len / 2] = u - v;
      }
    }
  }
}

// Direct O(n^2) transform for lengths that need not be a power of two
// (window construction only).
inline cvec dft_naive(const cvec& x) {
  const std::size_t n = x.size();
  cvec out(n);
  for (std::size_t l = 0; l < n; ++l) {
    cplx acc{0.0, 0.0};
    for (std::size_t k = 0; k < n; ++k) {
      const double a = -2.0 * pi * static_cast<double>(l) * static_cast<double>(k) /
                       static_cast<double>(n);
      acc += x[k] * cplx{std::cos(a), std::sin(a)};
    }
    out[l] = acc;
  }
  return out;
}

}  // namespace detail

// Forward transform, unnormalized: X[l] = sum_k x[k] e^{-j 2 pi l k / N}.
inline void dft_inplace(std::span<cplx> x) { detail::fft_radix2(x, false); }

// Inverse transform carries the 1/N so that idft(dft(x)) == x.
inline void idft_inplace(std::span<cplx> x) {
  detail::fft_radix2(x, true);
  const double s = 1.0 / static_cast<double>(x.size());
  for (auto& v : x) v *= s;
}

inline cvec dft(cvec x) {
  dft_inplace(x);
  return x;
}

inline cvec idft(cvec x) {
  idft_inplace(x);
  return x;
}

// d_N(f): element n equals e^{j 2 pi f n}.
inline cvec osc_vector(std::size_t n, double f) {
  if (n == 0) throw std::invalid_argument("osc_vector: N must be >= 1");
  cvec d(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = 2.0 * pi * f * static_cast<double>(i);
    d[i] = {std::cos(a), std::sin(a)};
  }
  return d;
}

enum class WindowKind { rectangular, hann, hamming, chebyshev };

inline const char* window_name(WindowKind k) {
  switch (k) {
    case WindowKind::rectangular: return "rectangular";
    case WindowKind::hann: return "hann";
    case WindowKind::hamming: return "hamming";
    case WindowKind::chebyshev: return "chebyshev";
  }
  return "?";
}

namespace detail {

inline double cheb_poly(int order, double x) {
  if (std::abs(x) <= 1.0) return std::cos(order * std::acos(x));
  if (x > 1.0) return std::cosh(order * std::acosh(x));
  const double v = std::cosh(order * std::acosh(-x));
  return (order % 2 == 0) ? v : -v;
}

// Dolph-Chebyshev window with the given sidelobe attenuation.
inline std::vector<double> chebyshev_window(std::size_t n, double atten_db) {
  if (n == 1) return {1.0};
  const int order = static_cast<int>(n) - 1;
  const double ratio = std::pow(10.0, atten_db / 20.0);
  const double beta = std::cosh(std::acosh(ratio) / order);
  cvec p(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double x = beta * std::cos(pi * static_cast<double>(k) / static_cast<double>(n));
    p[k] = cheb_poly(order, x);
  }
  if (n % 2 == 0) {
    for (std::size_t k = 0; k < n; ++k) {
      const double a = pi * static_cast<double>(k) / static_cast<double>(n);
      p[k] *= cplx{std::cos(a), std::sin(a)};
    }
  }
  const cvec spec = dft_naive(p);
  std::vector<double> w(n);
  if (n % 2 == 1) {
    const std::size_t h = (n + 1) / 2;
    for (std::size_t i = 0; i < h; ++i) w[h - 1 + i] = spec[i].real();
    for (std::size_t i = 1; i < h; ++i) w[h - 1 - i] = spec[i].real();
  } else {
    const std::size_t h = n / 2 + 1;
    for (std::size_t i = 1; i < h; ++i) {
      w[h - 2 + i] = spec[i].real();
      w[h - 1 - i] = spec[i].real();
    }
  }
  double mx = 0.0;
  for (double v : w) mx = std::max(mx, v);
  for (double& v : w) v /= mx;
  return w;
}

}  // namespace detail

struct Window {
  WindowKind kind = WindowKind::rectangular;
  std::vector<double> coeff;

  static Window make(WindowKind kind, std::size_t n, double cheb_atten_db = 80.0) {
    Window w;
    w.kind = kind;
    w.coeff.resize(n);
    switch (kind) {
      case WindowKind::rectangular:
        for (auto& c : w.coeff) c = 1.0;
        break;
      case WindowKind::hann:
        for (std::size_t i = 0; i < n; ++i) {
          w.coeff[i] = (n == 1) ? 1.0
                                : 0.5 - 0.5 * std::cos(2.0 * pi * static_cast<double>(i) /
                                                       static_cast<double>(n - 1));
        }
        break;
      case WindowKind::hamming:
        for (std::size_t i = 0; i < n; ++i) {
          w.coeff[i] = (n == 1) ? 1.0
                                : 0.54 - 0.46 * std::cos(2.0 * pi * static_cast<double>(i) /
                                                         static_cast<double>(n - 1));
        }
        break;
      case WindowKind::chebyshev:
        w.coeff = detail::chebyshev_window(n, cheb_atten_db);
        break;
    }
    return w;
  }
};

// u_N(f) = F_N W_N d_N(f). With a rectangular window this is bit-identical
// to dft(osc_vector(N, f)).
inline cvec windowed_response(std::size_t n, double f, const Window& w) {
  if (w.coeff.size() != n) {
    throw std::invalid_argument("windowed_response: window length " +
                                std::to_string(w.coeff.size()) + " does not match N = " +
                                std::to_string(n));
  }
  cvec x = osc_vector(n, f);
  for (std::size_t i = 0; i < n; ++i) x[i] *= w.coeff[i];
  dft_inplace(x);
  return x;
}

// Column-major complex grid. Rows index subcarriers (or fast time), columns
// index OFDM symbols (slow time); full-frame grids are N_c x N_sym.
class CGrid {
 public:
  CGrid() = default;
  CGrid(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  cplx& at(std::size_t r, std::size_t c) { return data_[c * rows_ + r]; }
  const cplx& at(std::size_t r, std::size_t c) const { return data_[c * rows_ + r]; }

  std::span<cplx> col(std::size_t c) { return {data_.data() + c * rows_, rows_}; }
  std::span<const cplx> col(std::size_t c) const { return {data_.data() + c * rows_, rows_}; }

  cvec row_copy(std::size_t r) const {
    cvec out(cols_);
    for (std::size_t c = 0; c < cols_; ++c) out[c] = at(r, c);
    return out;
  }
  void set_row(std::size_t r, std::span<const cplx> v) {
    for (std::size_t c = 0; c < cols_; ++c) at(r, c) = v[c];
  }

  cvec& data() { return data_; }
  const cvec& data() const { return data_; }

  bool same_shape(const CGrid& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  cvec data_;
};

inline double mean_power(const CGrid& g) {
  double acc = 0.0;
  for (const auto& v : g.data()) acc += std::norm(v);
  return g.size() ? acc / static_cast<double>(g.size()) : 0.0;
}

}  // namespace ddm
