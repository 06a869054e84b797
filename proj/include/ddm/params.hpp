#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

#include "ddm/dsp.hpp"

namespace ddm {

// All waveform and system parameters. Defaults are the 77 GHz automotive
// setup (1 GHz bandwidth, 1024 subcarriers, 512 symbols, 4 Tx antennas).
struct WaveformConfig {
  double f_c = 77e9;       // carrier frequency [Hz]
  double B = 1e9;          // bandwidth [Hz]
  std::size_t N_c = 1024;  // subcarriers
  double T_cp = 1e-6;      // cyclic prefix duration [s]
  std::size_t N_sym = 512; // OFDM symbols per frame
  std::size_t N_Tx = 4;
  std::size_t N_Rx = 1;
  double c0 = 299'792'458.0;
  std::size_t bundle_size = 4;  // OFDM symbols per redundancy bundle
  std::size_t N_pr = 16;        // preamble OFDM symbols
  std::size_t N_p = 0;          // pilot subcarriers
  std::string alphabet = "qpsk";
  double code_rate = 0.5;
  std::size_t bits_per_symbol = 2;
};

struct DerivedParams {
  double T_s;              // sample period [s]
  double delta_f;          // subcarrier spacing [Hz]
  double T;                // OFDM symbol duration without CP [s]
  double alpha;            // (T + T_cp) / T
  double delta_r;          // range resolution [m]
  double delta_v;          // velocity resolution [m/s]
  double r_max;            // unambiguous range [m]
  double v_max;            // unambiguous velocity, symmetric bound +/- [m/s]
  double v_max_per_area;   // v_max / N_Tx [m/s]
  double zeta;             // CP energy factor N_c / (N_cp + N_c)
  double G_p;              // processing gain N_sym * N_c (full occupancy)
  double G_p_esi;          // G_p / N_Tx (one comb per antenna)
  std::size_t N_cp;        // CP length in samples
  std::size_t N_d;         // data subcarriers
};

inline void validate_config(const WaveformConfig& cfg) {
  auto fail = [](const std::string& what) { throw std::invalid_argument("config: " + what); };
  if (cfg.B <= 0) fail("B must be positive");
  if (cfg.f_c <= 0) fail("f_c must be positive");
  if (cfg.c0 <= 0) fail("c0 must be positive");
  if (cfg.T_cp < 0) fail("T_cp must be non-negative");
  if (!is_pow2(cfg.N_c)) fail("N_c must be a power of two");
  if (!is_pow2(cfg.N_sym)) fail("N_sym must be a power of two");
  if (cfg.N_Tx == 0) fail("N_Tx must be >= 1");
  if (cfg.N_Rx == 0) fail("N_Rx must be >= 1");
  if (cfg.bundle_size == 0) fail("bundle_size must be >= 1");
  if (cfg.N_sym % (2 * cfg.bundle_size) != 0) fail("N_sym must be divisible by 2*bundle_size");
  if (cfg.N_pr % cfg.bundle_size != 0) fail("N_pr must be a multiple of bundle_size");
  if (cfg.N_pr >= cfg.N_sym) fail("N_pr must be smaller than N_sym");
  if (cfg.N_p >= cfg.N_c) fail("N_p must be smaller than N_c");
  if (cfg.N_p != 0 && cfg.N_c % cfg.N_p != 0) fail("N_p must divide N_c (equidistant pilots)");
  if (cfg.alphabet != "qpsk") fail("alphabet must be qpsk");
  if (cfg.bits_per_symbol != 2) fail("bits_per_symbol must be 2 for qpsk");
  if (cfg.code_rate <= 0.0 || cfg.code_rate > 1.0) fail("code_rate must be in (0, 1]");
  const double ncp = cfg.T_cp * cfg.B;
  if (std::abs(ncp - std::round(ncp)) > 1e-6) fail("T_cp/T_s must be an integer sample count");
}

inline DerivedParams derive_params(const WaveformConfig& cfg) {
  validate_config(cfg);
  DerivedParams d{};
  d.T_s = 1.0 / cfg.B;
  d.delta_f = cfg.B / static_cast<double>(cfg.N_c);
  d.T = 1.0 / d.delta_f;
  d.N_cp = static_cast<std::size_t>(std::llround(cfg.T_cp * cfg.B));
  d.alpha = (d.T + cfg.T_cp) / d.T;
  d.delta_r = cfg.c0 / (2.0 * cfg.B);
  d.delta_v = cfg.c0 /
              (2.0 * cfg.f_c * static_cast<double>(cfg.N_sym) * (d.T + cfg.T_cp));
  d.r_max = d.delta_r * static_cast<double>(cfg.N_c);
  d.v_max = d.delta_v * static_cast<double>(cfg.N_sym) / 2.0;
  d.v_max_per_area = d.v_max / static_cast<double>(cfg.N_Tx);
  d.zeta = static_cast<double>(cfg.N_c) / static_cast<double>(d.N_cp + cfg.N_c);
  d.G_p = static_cast<double>(cfg.N_sym) * static_cast<double>(cfg.N_c);
  d.G_p_esi = d.G_p / static_cast<double>(cfg.N_Tx);
  d.N_d = cfg.N_c - cfg.N_p;
  return d;
}

}  // namespace ddm
