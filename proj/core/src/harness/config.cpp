#include "otfs/harness/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

#include "otfs/errors.hpp"

namespace otfs {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

double to_double(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size() || !std::isfinite(v)) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected a number, got '" + text + "'");
  }
}

long long to_integer(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected an integer, got '" + text + "'");
  }
}

std::vector<double> to_doubles(const std::string& key, const std::string& value) {
  std::vector<double> out;
  for (const auto& item : split_list(value)) out.push_back(to_double(key, item));
  return out;
}

CVector to_complex_vector(const std::vector<double>& re, const std::vector<double>& im,
                          const std::string& what) {
  if (!im.empty() && im.size() != re.size()) {
    throw ConfigError(what + ": real and imaginary lists differ in length");
  }
  CVector v(static_cast<Index>(re.size()));
  for (std::size_t i = 0; i < re.size(); ++i) {
    v(static_cast<Index>(i)) = {re[i], im.empty() ? 0.0 : im[i]};
  }
  return v;
}

}  // namespace

const std::vector<std::string>& known_schemes() {
  static const std::vector<std::string> names{"mmse", "pa_bl", "da_bl_zf", "da_bl_lmmse",
                                              "perfect_csi"};
  return names;
}

void ExperimentConfig::validate() const {
  auto fail = [this](const std::string& msg) { throw ConfigError(name + ": " + msg); };
  if (delay_bins < 2 || doppler_bins < 2) fail("delay_bins and doppler_bins must be >= 2");
  if (!(subcarrier_spacing_hz > 0.0)) fail("subcarrier_spacing_hz must be > 0");
  if (pilot_columns < 1 || data_columns < 0) fail("need pilot_columns >= 1 and data_columns >= 0");
  if (data_columns + pilot_columns != doppler_bins) fail("data_columns + pilot_columns must equal doppler_bins");
  if (max_delay < 1 || max_delay > delay_bins) fail("max_delay must lie in [1, delay_bins]");
  if (max_doppler < 1 || max_doppler > doppler_bins) fail("max_doppler must lie in [1, doppler_bins]");
  if (doppler_grid < max_doppler) fail("doppler_grid must be >= max_doppler");
  if (2 * max_doppler > doppler_bins) fail("max_doppler must not exceed doppler_bins / 2");
  if (tx_antennas < 1 || rx_antennas < 1) fail("antenna counts must be >= 1");
  if (!(data_power > 0.0) || !(pilot_power > 0.0)) fail("data_power and pilot_power must be > 0");
  if (std::abs(data_power + pilot_power - 1.0) > 1e-9) fail("data_power + pilot_power must equal 1");
  if (custom_pulse) {
    if (tx_pulse.size() != delay_bins || rx_pulse.size() != delay_bins) {
      fail("custom pulses need delay_bins samples each");
    }
    if ((tx_pulse.array().abs() == 0.0).any() || (rx_pulse.array().abs() == 0.0).any()) {
      fail("pulse samples must be nonzero");
    }
  }
  if (channel == ChannelSource::kFixedProfile) {
    if (profile_delays_us.empty() || profile_delays_us.size() != profile_dopplers_hz.size()) {
      fail("fixed_profile needs equally long profile_delays_us and profile_dopplers_hz");
    }
    if (!profile_gains.empty() && profile_gains.size() != profile_delays_us.size()) {
      fail("profile gains must match the number of profile paths");
    }
  } else {
    const Index cells = channel == ChannelSource::kRandomOnGrid ? max_delay * doppler_grid
                                                                : max_delay * max_doppler;
    if (paths < 1 || paths > cells) fail("paths must lie in [1, number of grid cells]");
  }
  if (snr_db.empty()) fail("snr_db must not be empty");
  if (trials < 1) fail("trials must be >= 1");
  if (schemes.empty()) fail("schemes must not be empty");
  for (const auto& s : schemes) {
    const auto& known = known_schemes();
    if (std::find(known.begin(), known.end(), s) == known.end()) fail("unknown scheme '" + s + "'");
    if (std::count(schemes.begin(), schemes.end(), s) > 1) fail("duplicate scheme '" + s + "'");
  }
  try {
    em.validate();
  } catch (const std::invalid_argument& e) {
    fail(e.what());
  }
}

OtfsGrid ExperimentConfig::make_grid() const {
  const double t = 1.0 / subcarrier_spacing_hz;
  if (!custom_pulse) return OtfsGrid::rectangular(delay_bins, doppler_bins, subcarrier_spacing_hz);
  return OtfsGrid(delay_bins, doppler_bins, subcarrier_spacing_hz, t, tx_pulse, rx_pulse);
}

ChannelSupport ExperimentConfig::make_support() const {
  return ChannelSupport(max_delay, max_doppler, doppler_grid);
}

PrecoderPair ExperimentConfig::make_precoder_pair() const {
  try {
    return make_precoders(doppler_bins, pilot_columns, precoder, seed);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(name + ": " + e.what());
  }
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  std::vector<double> tx_re, tx_im, rx_re, rx_im, gain_re, gain_im;
  std::string pulse = "rectangular";

  using Setter = std::function<void(const std::string&, const std::string&)>;
  auto integer = [](Index& field) -> Setter {
    return [&field](const std::string& k, const std::string& v) { field = to_integer(k, v); };
  };
  auto real = [](double& field) -> Setter {
    return [&field](const std::string& k, const std::string& v) { field = to_double(k, v); };
  };
  auto reals = [](std::vector<double>& field) -> Setter {
    return [&field](const std::string& k, const std::string& v) { field = to_doubles(k, v); };
  };

  const std::map<std::string, Setter> setters{
      {"name", [&](const std::string&, const std::string& v) { cfg.name = v; }},
      {"delay_bins", integer(cfg.delay_bins)},
      {"doppler_bins", integer(cfg.doppler_bins)},
      {"subcarrier_spacing_hz", real(cfg.subcarrier_spacing_hz)},
      {"data_columns", integer(cfg.data_columns)},
      {"pilot_columns", integer(cfg.pilot_columns)},
      {"max_delay", integer(cfg.max_delay)},
      {"max_doppler", integer(cfg.max_doppler)},
      {"doppler_grid", integer(cfg.doppler_grid)},
      {"tx_antennas", integer(cfg.tx_antennas)},
      {"rx_antennas", integer(cfg.rx_antennas)},
      {"modulation",
       [&](const std::string& k, const std::string& v) {
         try {
           cfg.modulation = parse_modulation(v);
         } catch (const std::invalid_argument&) {
           throw ConfigError("key '" + k + "': unknown modulation '" + v + "'");
         }
       }},
      {"data_power", real(cfg.data_power)},
      {"pilot_power", real(cfg.pilot_power)},
      {"pulse", [&](const std::string&, const std::string& v) { pulse = v; }},
      {"tx_pulse_re", reals(tx_re)},
      {"tx_pulse_im", reals(tx_im)},
      {"rx_pulse_re", reals(rx_re)},
      {"rx_pulse_im", reals(rx_im)},
      {"precoder",
       [&](const std::string& k, const std::string& v) {
         if (v == "fourier") cfg.precoder = UnitarySource::kFourier;
         else if (v == "identity") cfg.precoder = UnitarySource::kIdentity;
         else if (v == "random") cfg.precoder = UnitarySource::kRandom;
         else throw ConfigError("key '" + k + "': unknown precoder '" + v + "'");
       }},
      {"channel",
       [&](const std::string& k, const std::string& v) {
         if (v == "fixed_profile") cfg.channel = ChannelSource::kFixedProfile;
         else if (v == "random_on_grid") cfg.channel = ChannelSource::kRandomOnGrid;
         else if (v == "random_fractional") cfg.channel = ChannelSource::kRandomFractional;
         else throw ConfigError("key '" + k + "': unknown channel source '" + v + "'");
       }},
      {"paths", integer(cfg.paths)},
      {"profile_delays_us", reals(cfg.profile_delays_us)},
      {"profile_dopplers_hz", reals(cfg.profile_dopplers_hz)},
      {"profile_gains_re", reals(gain_re)},
      {"profile_gains_im", reals(gain_im)},
      {"doppler_mode",
       [&](const std::string& k, const std::string& v) {
         if (v == "integer") cfg.doppler_mode = DopplerMode::kInteger;
         else if (v == "fractional") cfg.doppler_mode = DopplerMode::kFractional;
         else throw ConfigError("key '" + k + "': unknown doppler_mode '" + v + "'");
       }},
      {"snr_db", reals(cfg.snr_db)},
      {"trials", integer(cfg.trials)},
      {"schemes", [&](const std::string&, const std::string& v) { cfg.schemes = split_list(v); }},
      {"em_tolerance", real(cfg.em.tolerance)},
      {"em_max_iterations",
       [&](const std::string& k, const std::string& v) {
         cfg.em.max_iterations = static_cast<int>(to_integer(k, v));
       }},
      {"lambda_floor", real(cfg.em.lambda_floor)},
      {"seed",
       [&](const std::string& k, const std::string& v) {
         const long long s = to_integer(k, v);
         if (s < 0) throw ConfigError("key 'seed' must be nonnegative");
         cfg.seed = static_cast<std::uint64_t>(s);
       }},
  };

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters.find(key);
    if (it == setters.end()) {
      throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    it->second(key, value);
  }

  if (pulse == "custom") {
    cfg.custom_pulse = true;
    cfg.tx_pulse = to_complex_vector(tx_re, tx_im, "tx_pulse");
    cfg.rx_pulse = to_complex_vector(rx_re, rx_im, "rx_pulse");
  } else if (pulse != "rectangular") {
    throw ConfigError("key 'pulse': unknown pulse shape '" + pulse + "'");
  }
  if (!gain_re.empty() || !gain_im.empty()) {
    const CVector g = to_complex_vector(gain_re, gain_im, "profile_gains");
    cfg.profile_gains.assign(g.data(), g.data() + g.size());
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in);
}

}  // namespace otfs
