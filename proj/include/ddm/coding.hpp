#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "ddm/dsp.hpp"
#include "ddm/rng.hpp"

namespace ddm {

enum class Coding { conv_r12, none };

inline double coding_rate(Coding c) { return c == Coding::conv_r12 ? 0.5 : 1.0; }

// Rate-1/2 convolutional code, constraint length 7, generators (133,171) octal.
inline constexpr unsigned kConvG0 = 0133;
inline constexpr unsigned kConvG1 = 0171;
inline constexpr std::size_t kConvMemory = 6;  // tail bits appended for trellis termination

namespace detail {
inline std::uint8_t parity7(unsigned v) {
  return static_cast<std::uint8_t>(std::popcount(v) & 1u);
}
}  // namespace detail

// Zero-terminated encoding: output holds 2*(len + 6) bits.
inline std::vector<std::uint8_t> conv_encode(std::span<const std::uint8_t> bits) {
  if (bits.empty()) throw std::invalid_argument("conv_encode: empty payload");
  std::vector<std::uint8_t> out;
  out.reserve(2 * (bits.size() + kConvMemory));
  unsigned window = 0;  // bit 6 = current input, bit 0 = oldest
  auto step = [&](unsigned b) {
    window = ((window >> 1) | (b << 6)) & 0x7f;
    out.push_back(detail::parity7(window & kConvG0));
    out.push_back(detail::parity7(window & kConvG1));
  };
  for (std::uint8_t b : bits) step(b & 1u);
  for (std::size_t i = 0; i < kConvMemory; ++i) step(0);
  return out;
}

// Soft-decision Viterbi over the terminated trellis. LLR sign convention:
// positive means coded bit 0 is the more likely one.
inline std::vector<std::uint8_t> viterbi_decode(std::span<const double> llrs) {
  if (llrs.size() % 2 != 0) throw std::invalid_argument("viterbi_decode: odd LLR count");
  const std::size_t steps = llrs.size() / 2;
  if (steps <= kConvMemory) throw std::invalid_argument("viterbi_decode: block too short");
  constexpr std::size_t n_states = 64;  // state = previous 6 input bits, newest in bit 5

  // branch outputs per (state, input)
  static const auto branch = [] {
    std::array<std::array<std::uint8_t, 2>, n_states * 2> t{};
    for (std::size_t s = 0; s < n_states; ++s) {
      for (unsigned b = 0; b < 2; ++b) {
        const unsigned w = (b << 6) | static_cast<unsigned>(s);
        t[s * 2 + b] = {detail::parity7(w & kConvG0), detail::parity7(w & kConvG1)};
      }
    }
    return t;
  }();

  constexpr double neg_inf = -std::numeric_limits<double>::infinity();
  std::vector<double> metric(n_states, neg_inf), next(n_states);
  metric[0] = 0.0;
  // decisions[t] bit ns = low bit of the winning predecessor of state ns
  std::vector<std::uint64_t> decisions(steps, 0);

  for (std::size_t t = 0; t < steps; ++t) {
    const double l0 = llrs[2 * t];
    const double l1 = llrs[2 * t + 1];
    std::fill(next.begin(), next.end(), neg_inf);
    std::uint64_t dec = 0;
    for (std::size_t s = 0; s < n_states; ++s) {
      const double m = metric[s];
      if (m == neg_inf) continue;
      for (unsigned b = 0; b < 2; ++b) {
        const auto& o = branch[s * 2 + b];
        // correlation metric: +llr/2 when the branch emits 0, -llr/2 for 1
        const double bm = m + (o[0] ? -l0 : l0) * 0.5 + (o[1] ? -l1 : l1) * 0.5;
        const std::size_t ns = (b << 5) | (s >> 1);
        if (bm > next[ns]) {
          next[ns] = bm;
          if (s & 1u)
            dec |= (1ull << ns);
          else
            dec &= ~(1ull << ns);
        }
      }
    }
    decisions[t] = dec;
    metric.swap(next);
  }

  // terminated trellis ends in state 0; the input at step t is bit 5 of the
  // state reached by that step
  std::vector<std::uint8_t> bits(steps);
  std::size_t state = 0;
  for (std::size_t t = steps; t-- > 0;) {
    bits[t] = static_cast<std::uint8_t>((state >> 5) & 1u);
    state = ((state & 0x1f) << 1) | ((decisions[t] >> state) & 1u);
  }
  bits.resize(steps - kConvMemory);
  return bits;
}

// Frame-wide seeded pseudo-random permutation (Fisher-Yates).
inline std::vector<std::uint32_t> interleaver_perm(std::size_t n, std::uint64_t seed) {
  std::vector<std::uint32_t> p(n);
  std::iota(p.begin(), p.end(), 0u);
  Rng rng(mix_seed(seed, 0x17ea41ull));
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = rng.below(i);
    std::swap(p[i - 1], p[j]);
  }
  return p;
}

// out[perm[i]] = in[i]
inline std::vector<std::uint8_t> interleave(std::span<const std::uint8_t> bits,
                                            std::span<const std::uint32_t> perm) {
  if (bits.size() != perm.size()) throw std::invalid_argument("interleave: length mismatch");
  std::vector<std::uint8_t> out(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) out[perm[i]] = bits[i];
  return out;
}

// inverse of interleave, applied to soft values: out[i] = llr[perm[i]]
inline std::vector<double> deinterleave(std::span<const double> llrs,
                                        std::span<const std::uint32_t> perm) {
  if (llrs.size() != perm.size()) throw std::invalid_argument("deinterleave: length mismatch");
  std::vector<double> out(llrs.size());
  for (std::size_t i = 0; i < llrs.size(); ++i) out[i] = llrs[perm[i]];
  return out;
}

inline constexpr double kQpskScale = 0.70710678118654752440;  // 1/sqrt(2)

// Gray-mapped unit-energy QPSK; bits (0,0) -> (1+j)/sqrt(2). First bit sets
// the real sign, second bit the imaginary sign.
inline cplx qpsk_point(std::uint8_t b0, std::uint8_t b1) {
  return {b0 ? -kQpskScale : kQpskScale, b1 ? -kQpskScale : kQpskScale};
}

inline cvec qpsk_map(std::span<const std::uint8_t> bits) {
  if (bits.size() % 2 != 0) throw std::invalid_argument("qpsk_map: bit count must be even");
  cvec out(bits.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = qpsk_point(bits[2 * i], bits[2 * i + 1]);
  return out;
}

struct Llr2 {
  double b0;
  double b1;
};

inline constexpr double kLlrCap = 1e6;

// Max-log LLRs for Gray QPSK after equalization: y = h_eff * s + n with
// complex noise variance sigma2. sigma2 == 0 is the documented noiseless
// limit and returns capped values; negative sigma2 is rejected.
inline Llr2 qpsk_llr(cplx y, cplx h_eff, double sigma2) {
  if (sigma2 < 0.0) throw std::invalid_argument("qpsk_llr: sigma2 must be non-negative");
  const cplx u = std::conj(h_eff) * y;
  const double scale = 2.0 * std::sqrt(2.0);
  if (sigma2 <= 0.0 || !std::isfinite(scale / sigma2)) {
    auto cap = [](double v) { return v > 0 ? kLlrCap : (v < 0 ? -kLlrCap : 0.0); };
    return {cap(u.real()), cap(u.imag())};
  }
  auto clamp = [](double v) { return std::clamp(v, -kLlrCap, kLlrCap); };
  return {clamp(scale * u.real() / sigma2), clamp(scale * u.imag() / sigma2)};
}

inline std::uint8_t hard_bit(double llr) { return llr < 0.0 ? 1u : 0u; }

}  // namespace ddm
