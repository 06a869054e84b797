#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ddm/coding.hpp"
#include "ddm/dsp.hpp"
#include "ddm/params.hpp"
#include "ddm/rng.hpp"

namespace ddm {

// Per-antenna slow-time phase increments. Each increment is an integer
// number of velocity bins: dpsi_k = 2*pi*p_k/N_sym.
struct DdmPhaseSet {
  std::vector<long> p;
  std::vector<double> dpsi;
  std::size_t n_sym = 0;

  std::size_t size() const { return p.size(); }
};

// p_k = (N_sym/(2*N_Tx))*(2k+1) - N_sym/2, which for N_Tx = 4 lands the
// increments on {-3pi/4, -pi/4, pi/4, 3pi/4}.
inline DdmPhaseSet ddm_phase_set(std::size_t n_tx, std::size_t n_sym) {
  if (n_tx == 0) throw std::invalid_argument("ddm_phase_set: N_Tx must be >= 1");
  if (n_sym % (2 * n_tx) != 0) {
    throw std::invalid_argument("ddm_phase_set: N_sym must be divisible by 2*N_Tx");
  }
  DdmPhaseSet ps;
  ps.n_sym = n_sym;
  const long half = static_cast<long>(n_sym) / 2;
  const long width = static_cast<long>(n_sym) / static_cast<long>(2 * n_tx);
  for (std::size_t k = 0; k < n_tx; ++k) {
    const long pk = width * static_cast<long>(2 * k + 1) - half;
    ps.p.push_back(pk);
    ps.dpsi.push_back(2.0 * pi * static_cast<double>(pk) / static_cast<double>(n_sym));
  }
  return ps;
}

// Everything the receiver legitimately knows about the frame: layout,
// preamble symbol, pilot values, per-subcarrier amplitude and the seed the
// interleaver permutation is derived from.
struct FramePlan {
  std::size_t n_pr = 0;
  std::size_t bundle = 4;
  std::vector<std::size_t> pilot_idx;
  std::vector<std::size_t> data_idx;
  cvec x_pr;       // preamble frequency-domain symbol, all N_c subcarriers
  cvec pilot_seq;  // values at pilot_idx, constant across OFDM symbols
  double amp = 1.0;
  std::uint64_t seed = 0;
};

struct FrameCapacity {
  std::size_t payload_cols;  // payload columns of X (bundles after the preamble)
  std::size_t data_symbols;  // payload_cols * N_d
  std::size_t coded_bits;    // data_symbols * bits_per_symbol
  std::size_t payload_bits;  // information bits per frame
};

// Bundled (DDM) frame budget. The zero-terminated trellis eats kConvMemory
// information bits out of the r * coded_bits budget.
inline FrameCapacity frame_capacity(const WaveformConfig& cfg, Coding coding) {
  FrameCapacity c{};
  c.payload_cols = (cfg.N_sym - cfg.N_pr) / cfg.bundle_size;
  c.data_symbols = c.payload_cols * (cfg.N_c - cfg.N_p);
  c.coded_bits = c.data_symbols * cfg.bits_per_symbol;
  if (coding == Coding::conv_r12) {
    if (c.coded_bits / 2 <= kConvMemory) {
      throw std::invalid_argument("frame_capacity: frame too small for a terminated codeword");
    }
    c.payload_bits = c.coded_bits / 2 - kConvMemory;
  } else {
    c.payload_bits = c.coded_bits;
  }
  return c;
}

namespace detail {

inline cplx random_qpsk(Rng& rng) { return qpsk_point(rng.bit(), rng.bit()); }

// encode -> interleave -> map, shared by all frame builders
inline cvec data_symbols_from_bits(std::span<const std::uint8_t> payload, Coding coding,
                                   std::size_t coded_bits, std::uint64_t seed) {
  std::vector<std::uint8_t> coded;
  if (coding == Coding::conv_r12) {
    coded = conv_encode(payload);
    const auto perm = interleaver_perm(coded_bits, seed);
    coded = interleave(coded, perm);
  } else {
    coded.assign(payload.begin(), payload.end());
  }
  if (coded.size() != coded_bits) {
    throw std::invalid_argument("frame: coded bit count mismatch");
  }
  return qpsk_map(coded);
}

}  // namespace detail

inline FramePlan make_frame_plan(const WaveformConfig& cfg, std::uint64_t seed,
                                 double amp = 1.0) {
  FramePlan plan;
  plan.n_pr = cfg.N_pr;
  plan.bundle = cfg.bundle_size;
  plan.amp = amp;
  plan.seed = seed;

  if (cfg.N_p > 0) {
    const std::size_t stride = cfg.N_c / cfg.N_p;
    plan.pilot_idx.reserve(cfg.N_p);
    for (std::size_t i = 0; i < cfg.N_p; ++i) plan.pilot_idx.push_back(i * stride);
  }
  plan.data_idx.reserve(cfg.N_c - cfg.N_p);
  std::size_t next_pilot = 0;
  for (std::size_t n = 0; n < cfg.N_c; ++n) {
    if (next_pilot < plan.pilot_idx.size() && plan.pilot_idx[next_pilot] == n) {
      ++next_pilot;
    } else {
      plan.data_idx.push_back(n);
    }
  }

  // unit-magnitude seeded QPSK preamble makes the preamble model operator
  // orthogonal (M^H M = N_c I) for the channel estimator
  Rng pr_rng(mix_seed(seed, 0x9eab1e));
  plan.x_pr.resize(cfg.N_c);
  for (auto& v : plan.x_pr) v = amp * detail::random_qpsk(pr_rng);

  Rng pilot_rng(mix_seed(seed, 0x9110));
  plan.pilot_seq.resize(plan.pilot_idx.size());
  for (auto& v : plan.pilot_seq) v = amp * detail::random_qpsk(pilot_rng);

  return plan;
}

// The transmit frame: X holds one column per bundle, S the expanded
// N_c x N_sym grid with each payload column repeated bundle times.
struct SymbolFrame {
  CGrid X;
  CGrid S;
  FramePlan plan;
};

inline SymbolFrame build_frame(std::span<const std::uint8_t> payload, const WaveformConfig& cfg,
                               Coding coding, std::uint64_t seed, double amp = 1.0) {
  const auto cap = frame_capacity(cfg, coding);
  if (payload.size() != cap.payload_bits) {
    throw std::invalid_argument("build_frame: payload bit count mismatch, expected " +
                                std::to_string(cap.payload_bits) + ", got " +
                                std::to_string(payload.size()));
  }
  SymbolFrame f;
  f.plan = make_frame_plan(cfg, seed, amp);

  const std::size_t pr_cols = cfg.N_pr / cfg.bundle_size;
  const std::size_t x_cols = cfg.N_sym / cfg.bundle_size;
  f.X = CGrid(cfg.N_c, x_cols);

  for (std::size_t c = 0; c < pr_cols; ++c) {
    auto col = f.X.col(c);
    for (std::size_t n = 0; n < cfg.N_c; ++n) col[n] = f.plan.x_pr[n];
  }

  const cvec data = detail::data_symbols_from_bits(payload, coding, cap.coded_bits, seed);
  std::size_t di = 0;
  for (std::size_t c = pr_cols; c < x_cols; ++c) {
    auto col = f.X.col(c);
    for (std::size_t i = 0; i < f.plan.pilot_idx.size(); ++i) {
      col[f.plan.pilot_idx[i]] = f.plan.pilot_seq[i];
    }
    for (std::size_t n : f.plan.data_idx) col[n] = amp * data[di++];
  }

  f.S = CGrid(cfg.N_c, cfg.N_sym);
  for (std::size_t mu = 0; mu < cfg.N_sym; ++mu) {
    const auto src = f.X.col(mu / cfg.bundle_size);
    auto dst = f.S.col(mu);
    for (std::size_t n = 0; n < cfg.N_c; ++n) dst[n] = src[n];
  }
  return f;
}

// S_k = S D_{N_sym}(dpsi_k / 2pi): column mu scaled by e^{j mu dpsi_k}.
inline std::vector<CGrid> apply_ddm_coding(const CGrid& s, const DdmPhaseSet& phases) {
  std::vector<CGrid> out;
  out.reserve(phases.size());
  for (std::size_t k = 0; k < phases.size(); ++k) {
    CGrid g(s.rows(), s.cols());
    for (std::size_t mu = 0; mu < s.cols(); ++mu) {
      const double a = static_cast<double>(mu) * phases.dpsi[k];
      const cplx rot{std::cos(a), std::sin(a)};
      const auto src = s.col(mu);
      auto dst = g.col(mu);
      for (std::size_t n = 0; n < s.rows(); ++n) dst[n] = src[n] * rot;
    }
    out.push_back(std::move(g));
  }
  return out;
}

// Per-antenna baseband streams with cyclic prefix, plus the subcarrier-domain
// grids they were generated from (the radar model consumes the grids).
struct TxSignal {
  std::vector<cvec> streams;
  std::vector<CGrid> grids;
  std::size_t n_cp = 0;
};

inline TxSignal to_time_domain(std::vector<CGrid> s_k, const WaveformConfig& cfg,
                               const DerivedParams& dp) {
  TxSignal tx;
  tx.n_cp = dp.N_cp;
  tx.streams.reserve(s_k.size());
  for (const auto& g : s_k) {
    if (g.rows() != cfg.N_c || g.cols() != cfg.N_sym) {
      throw std::invalid_argument("to_time_domain: grid dimensions must be N_c x N_sym");
    }
    cvec stream;
    stream.reserve(cfg.N_sym * (cfg.N_c + dp.N_cp));
    cvec td(cfg.N_c);
    for (std::size_t mu = 0; mu < cfg.N_sym; ++mu) {
      const auto col = g.col(mu);
      td.assign(col.begin(), col.end());
      idft_inplace(td);
      stream.insert(stream.end(), td.end() - static_cast<std::ptrdiff_t>(dp.N_cp), td.end());
      stream.insert(stream.end(), td.begin(), td.end());
    }
    tx.streams.push_back(std::move(stream));
  }
  tx.grids = std::move(s_k);
  return tx;
}

}  // namespace ddm
