#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ddm/dsp.hpp"
#include "ddm/frame.hpp"
#include "ddm/params.hpp"
#include "ddm/rng.hpp"

namespace ddm {

// ---------------------------------------------------------------------------
// Radar propagation
// ---------------------------------------------------------------------------

struct RadarPath {
  double range_m = 0.0;
  double velocity_mps = 0.0;  // range rate; the Doppler is f_D = -2 v f_c / c0
  cplx gain{1.0, 0.0};
  // optional per-Tx extra path length (array geometry); empty = colocated
  std::vector<double> antenna_offset_m;
};

struct RadarScene {
  std::vector<RadarPath> paths;
};

// Round-trip response at the radar receiver. Per path and Tx antenna the
// subcarrier grid is delayed (linear phase across subcarriers), Doppler
// modulated across symbols, and optionally smeared within the symbol (ICI).
inline CGrid radar_response(const TxSignal& tx, const RadarScene& scene,
                            const WaveformConfig& cfg, const DerivedParams& dp, bool ici) {
  if (tx.grids.empty()) throw std::invalid_argument("radar_response: no transmit grids");
  for (const auto& g : tx.grids) {
    if (g.rows() != cfg.N_c || g.cols() != cfg.N_sym) {
      throw std::invalid_argument("radar_response: grid dimensions must be N_c x N_sym");
    }
  }
  CGrid y(cfg.N_c, cfg.N_sym);
  cvec buf(cfg.N_c);
  for (std::size_t i = 0; i < scene.paths.size(); ++i) {
    const auto& path = scene.paths[i];
    const double f_d = -2.0 * path.velocity_mps * cfg.f_c / cfg.c0;
    const double fbar = f_d / dp.delta_f;
    for (std::size_t k = 0; k < tx.grids.size(); ++k) {
      double range = path.range_m;
      if (!path.antenna_offset_m.empty()) {
        if (path.antenna_offset_m.size() != tx.grids.size()) {
          throw std::invalid_argument("radar_response: antenna_offset_m size mismatch");
        }
        range += path.antenna_offset_m[k];
      }
      const double tau = 2.0 * range / cfg.c0;
      const double tau_bar = tau * dp.delta_f;
      if (tau_bar < 0.0 ||
          tau_bar * static_cast<double>(cfg.N_c) > static_cast<double>(dp.N_cp)) {
        throw std::invalid_argument(
            "radar_response: path " + std::to_string(i) +
            " delay exceeds the cyclic prefix (ISI-free assumption broken)");
      }
      const double phase0 = -2.0 * pi * cfg.f_c * tau;
      const cplx a_bar = path.gain * cplx{std::cos(phase0), std::sin(phase0)};

      // D*(tau_bar): subcarrier n scaled by e^{-j 2 pi tau_bar n}
      cvec delay(cfg.N_c);
      for (std::size_t n = 0; n < cfg.N_c; ++n) {
        const double a = -2.0 * pi * tau_bar * static_cast<double>(n);
        delay[n] = cplx{std::cos(a), std::sin(a)};
      }
      cvec ici_ramp;
      if (ici && fbar != 0.0) {
        ici_ramp.resize(cfg.N_c);
        for (std::size_t n = 0; n < cfg.N_c; ++n) {
          const double a = 2.0 * pi * fbar * static_cast<double>(n) /
                           static_cast<double>(cfg.N_c);
          ici_ramp[n] = cplx{std::cos(a), std::sin(a)};
        }
      }
      for (std::size_t mu = 0; mu < cfg.N_sym; ++mu) {
        const auto src = tx.grids[k].col(mu);
        for (std::size_t n = 0; n < cfg.N_c; ++n) buf[n] = src[n] * delay[n];
        idft_inplace(buf);
        const double dop = 2.0 * pi * fbar * dp.alpha * static_cast<double>(mu);
        const cplx slow = a_bar * cplx{std::cos(dop), std::sin(dop)};
        auto dst = y.col(mu);
        if (!ici_ramp.empty()) {
          for (std::size_t n = 0; n < cfg.N_c; ++n) dst[n] += slow * ici_ramp[n] * buf[n];
        } else {
          for (std::size_t n = 0; n < cfg.N_c; ++n) dst[n] += slow * buf[n];
        }
      }
    }
  }
  return y;
}

// ---------------------------------------------------------------------------
// Communication channel
// ---------------------------------------------------------------------------

enum class CirProfile { awgn, exponential };

// Independent per-antenna CIR draws. The exponential profile has Rayleigh
// taps with power q * e^{-l/decay}, normalized to unit total expected power.
inline std::vector<cvec> draw_comm_cirs(std::uint64_t seed, CirProfile profile,
                                        std::size_t n_f, double decay, std::size_t n_tx) {
  if (n_f == 0) throw std::invalid_argument("draw_comm_cirs: N_f must be >= 1");
  std::vector<cvec> cirs(n_tx, cvec(n_f, cplx{0.0, 0.0}));
  if (profile == CirProfile::awgn) {
    for (auto& f : cirs) f[0] = cplx{1.0, 0.0};
    return cirs;
  }
  if (decay <= 0.0) throw std::invalid_argument("draw_comm_cirs: decay must be positive");
  double total = 0.0;
  std::vector<double> w(n_f);
  for (std::size_t l = 0; l < n_f; ++l) {
    w[l] = std::exp(-static_cast<double>(l) / decay);
    total += w[l];
  }
  for (std::size_t k = 0; k < n_tx; ++k) {
    Rng rng(mix_seed(seed, k, 0xc19));
    for (std::size_t l = 0; l < n_f; ++l) cirs[k][l] = rng.cgauss(w[l] / total);
  }
  return cirs;
}

// Effective channel between the DDM transmitter and the single communication
// Rx antenna. The CFRs are p_k = F B_zp f_k; the full ECFR column mu is
// sum_k p_k e^{j mu dpsi_k}. When every antenna satisfies
// e^{j bundle dpsi_k} = -1 the ECFR repeats with period 2*bundle up to a sign
// and is fully described by the `bundle` folded columns h_gamma (ECIRs
// g_gamma in the tap domain).
struct CommChannel {
  std::vector<cvec> cir;       // f_k, length N_f
  std::vector<cvec> cfr;       // p_k, length N_c
  std::vector<cvec> h_folded;  // folded ECFR columns, gamma = 0..bundle-1
  std::vector<cvec> g_folded;  // folded ECIRs, length N_f
  bool folded = false;
  DdmPhaseSet phases;
  std::size_t n_f = 0;
  std::size_t bundle = 4;

  CGrid full_ecfr(std::size_t n_sym) const {
    CGrid h(cfr.empty() ? 0 : cfr[0].size(), n_sym);
    for (std::size_t mu = 0; mu < n_sym; ++mu) {
      auto dst = h.col(mu);
      for (std::size_t k = 0; k < cfr.size(); ++k) {
        const double a = static_cast<double>(mu) * phases.dpsi[k];
        const cplx rot{std::cos(a), std::sin(a)};
        for (std::size_t n = 0; n < dst.size(); ++n) dst[n] += cfr[k][n] * rot;
      }
    }
    return h;
  }
};

inline CommChannel build_comm_channel(std::vector<cvec> cirs, const DdmPhaseSet& phases,
                                      const WaveformConfig& cfg) {
  if (cirs.size() != phases.size()) {
    throw std::invalid_argument("build_comm_channel: one CIR per phase entry required");
  }
  CommChannel ch;
  ch.n_f = cirs.empty() ? 0 : cirs[0].size();
  ch.bundle = cfg.bundle_size;
  ch.phases = phases;
  for (auto& f : cirs) {
    if (f.size() != ch.n_f) throw std::invalid_argument("build_comm_channel: ragged CIRs");
    if (f.size() > cfg.N_c) throw std::invalid_argument("build_comm_channel: CIR longer than N_c");
    cvec padded(cfg.N_c, cplx{0.0, 0.0});
    std::copy(f.begin(), f.end(), padded.begin());
    dft_inplace(padded);
    ch.cfr.push_back(std::move(padded));
  }
  ch.cir = std::move(cirs);

  // fold test: e^{j bundle dpsi_k} must equal -1 for every antenna
  ch.folded = true;
  for (double dpsi : phases.dpsi) {
    const double a = static_cast<double>(cfg.bundle_size) * dpsi;
    const cplx e{std::cos(a), std::sin(a)};
    if (std::abs(e + cplx{1.0, 0.0}) > 1e-9) {
      ch.folded = false;
      break;
    }
  }
  if (ch.folded) {
    ch.h_folded.assign(cfg.bundle_size, cvec(cfg.N_c, cplx{0.0, 0.0}));
    ch.g_folded.assign(cfg.bundle_size, cvec(ch.n_f, cplx{0.0, 0.0}));
    for (std::size_t g = 0; g < cfg.bundle_size; ++g) {
      for (std::size_t k = 0; k < ch.cfr.size(); ++k) {
        const double a = static_cast<double>(g) * phases.dpsi[k];
        const cplx rot{std::cos(a), std::sin(a)};
        for (std::size_t n = 0; n < cfg.N_c; ++n) ch.h_folded[g][n] += ch.cfr[k][n] * rot;
        for (std::size_t l = 0; l < ch.n_f; ++l) ch.g_folded[g][l] += ch.cir[k][l] * rot;
      }
    }
  }
  return ch;
}

// Folded ECFR accessor used by the DDM receiver; only meaningful when the
// phase grid supports the sign fold.
inline const cvec& folded_ecfr(const CommChannel& ch, std::size_t gamma) {
  if (!ch.folded) {
    throw std::invalid_argument(
        "folded_ecfr: phase set does not fold (e^{j bundle dpsi} != -1)");
  }
  return ch.h_folded.at(gamma);
}

// ---------------------------------------------------------------------------
// Noise calibration and CPE
// ---------------------------------------------------------------------------

// Per-sample complex noise variance for a target Eb/N0:
// sigma_n^2 = P_s / ((Eb/N0) b r zeta nu).
inline double noise_variance(double ebn0_db, double p_s, double b, double r, double zeta,
                             double nu) {
  if (p_s <= 0 || b <= 0 || r <= 0 || zeta <= 0 || nu <= 0) {
    throw std::invalid_argument("noise_variance: all factors must be positive");
  }
  const double lin = std::pow(10.0, ebn0_db / 10.0);
  return p_s / (lin * b * r * zeta * nu);
}

struct CpeModel {
  double doppler_hz = 0.0;  // one-way link Doppler
  double walk_std = 0.0;    // optional random-walk increment per symbol [rad]
  std::uint64_t seed = 0;
};

// phi[mu] = 2 pi (f_D/delta_f) alpha mu, plus an optional random walk.
inline std::vector<double> cpe_sequence(const CpeModel& m, const WaveformConfig& cfg,
                                        const DerivedParams& dp) {
  std::vector<double> phi(cfg.N_sym, 0.0);
  const double slope = 2.0 * pi * (m.doppler_hz / dp.delta_f) * dp.alpha;
  double walk = 0.0;
  Rng rng(mix_seed(m.seed, 0xcpe0 & 0xffff));
  for (std::size_t mu = 0; mu < cfg.N_sym; ++mu) {
    if (m.walk_std > 0.0 && mu > 0) walk += m.walk_std * rng.gauss();
    phi[mu] = slope * static_cast<double>(mu) + walk;
  }
  return phi;
}

// ---------------------------------------------------------------------------
// Communication receive signal
// ---------------------------------------------------------------------------

// Noiseless receive grid: per symbol, each antenna's frequency column is
// weighted by its CFR, summed, rotated by the CPE and transformed to time
// domain; an optional intra-symbol Doppler ramp models ICI.
inline CGrid comm_receive(const std::vector<CGrid>& s_k, const CommChannel& chan,
                          std::span<const double> phi, double ici_fbar = 0.0) {
  if (s_k.size() != chan.cfr.size()) {
    throw std::invalid_argument("comm_receive: antenna count mismatch");
  }
  const std::size_t n_c = s_k[0].rows();
  const std::size_t n_sym = s_k[0].cols();
  if (!phi.empty() && phi.size() != n_sym) {
    throw std::invalid_argument("comm_receive: CPE sequence length mismatch");
  }
  cvec ici_ramp;
  if (ici_fbar != 0.0) {
    ici_ramp.resize(n_c);
    for (std::size_t n = 0; n < n_c; ++n) {
      const double a = 2.0 * pi * ici_fbar * static_cast<double>(n) / static_cast<double>(n_c);
      ici_ramp[n] = cplx{std::cos(a), std::sin(a)};
    }
  }
  CGrid y(n_c, n_sym);
  cvec acc(n_c);
  for (std::size_t mu = 0; mu < n_sym; ++mu) {
    std::fill(acc.begin(), acc.end(), cplx{0.0, 0.0});
    for (std::size_t k = 0; k < s_k.size(); ++k) {
      const auto col = s_k[k].col(mu);
      const auto& p = chan.cfr[k];
      for (std::size_t n = 0; n < n_c; ++n) acc[n] += p[n] * col[n];
    }
    if (!phi.empty()) {
      const cplx rot{std::cos(phi[mu]), std::sin(phi[mu])};
      for (auto& v : acc) v *= rot;
    }
    idft_inplace(acc);
    auto dst = y.col(mu);
    if (!ici_ramp.empty()) {
      for (std::size_t n = 0; n < n_c; ++n) dst[n] = acc[n] * ici_ramp[n];
    } else {
      std::copy(acc.begin(), acc.end(), dst.begin());
    }
  }
  return y;
}

inline void add_awgn(CGrid& y, double sigma_n2, std::uint64_t seed) {
  if (sigma_n2 < 0.0) throw std::invalid_argument("add_awgn: variance must be non-negative");
  if (sigma_n2 == 0.0) return;
  Rng rng(mix_seed(seed, 0xa36));
  for (auto& v : y.data()) v += rng.cgauss(sigma_n2);
}

// Spec'd one-call variant.
inline CGrid comm_receive(const std::vector<CGrid>& s_k, const CommChannel& chan,
                          double sigma_n2, std::uint64_t noise_seed,
                          std::span<const double> phi, double ici_fbar = 0.0) {
  CGrid y = comm_receive(s_k, chan, phi, ici_fbar);
  add_awgn(y, sigma_n2, noise_seed);
  return y;
}

}  // namespace ddm
