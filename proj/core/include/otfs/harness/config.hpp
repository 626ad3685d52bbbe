#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "otfs/detection.hpp"
#include "otfs/estimators.hpp"
#include "otfs/grid.hpp"
#include "otfs/modem.hpp"
#include "otfs/precoding.hpp"

namespace otfs {

enum class ChannelSource { kFixedProfile, kRandomOnGrid, kRandomFractional };
enum class DopplerMode { kInteger, kFractional };

// One simulation campaign. Parsed from a flat "key = value" file; see
// configs/ for examples of every key.
struct ExperimentConfig {
  std::string name = "unnamed";

  Index delay_bins = 16;             // M
  Index doppler_bins = 16;           // N
  double subcarrier_spacing_hz = 15000.0;
  Index data_columns = 15;           // K1
  Index pilot_columns = 1;           // K2

  Index max_delay = 4;               // M_tau
  Index max_doppler = 4;             // N_nu
  Index doppler_grid = 4;            // G_nu

  Index tx_antennas = 1;
  Index rx_antennas = 1;

  Modulation modulation = Modulation::kPsk4;
  double data_power = 0.5;
  double pilot_power = 0.5;

  bool custom_pulse = false;
  CVector tx_pulse;                  // used when custom_pulse
  CVector rx_pulse;
  UnitarySource precoder = UnitarySource::kFourier;

  ChannelSource channel = ChannelSource::kRandomOnGrid;
  Index paths = 3;                   // L_p for the random sources
  std::vector<double> profile_delays_us;
  std::vector<double> profile_dopplers_hz;
  std::vector<Complex> profile_gains;  // empty: CN(0, 1/L_p) gains
  DopplerMode doppler_mode = DopplerMode::kInteger;

  std::vector<double> snr_db{0.0, 5.0, 10.0, 15.0};
  Index trials = 200;
  std::vector<std::string> schemes{"mmse", "pa_bl", "da_bl_zf", "da_bl_lmmse", "perfect_csi"};
  EmSettings em;
  std::uint64_t seed = 1;

  // Throws ConfigError on any violated constraint.
  void validate() const;

  OtfsGrid make_grid() const;
  ChannelSupport make_support() const;
  MimoConfig mimo() const { return {tx_antennas, rx_antennas}; }
  // Throws ConfigError when K2 >= N.
  PrecoderPair make_precoder_pair() const;
};

// Throws ConfigError with the offending line on malformed input or unknown keys.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

const std::vector<std::string>& known_schemes();

}  // namespace otfs
