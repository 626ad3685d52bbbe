#include "otfs/harness/channel_gen.hpp"

#include <cmath>
#include <numeric>

#include "otfs/errors.hpp"

namespace otfs {

namespace {

// k distinct values from [0, n) by a partial Fisher-Yates shuffle.
std::vector<Index> distinct_cells(Index n, Index k, Rng& rng) {
  std::vector<Index> cells(static_cast<std::size_t>(n));
  std::iota(cells.begin(), cells.end(), Index{0});
  for (Index i = 0; i < k; ++i) {
    const Index j = i + rng.uniform_index(n - i);
    std::swap(cells[static_cast<std::size_t>(i)], cells[static_cast<std::size_t>(j)]);
  }
  cells.resize(static_cast<std::size_t>(k));
  return cells;
}

}  // namespace

std::vector<DelayDopplerPath> profile_paths(const ExperimentConfig& config) {
  const double m_df = static_cast<double>(config.delay_bins) * config.subcarrier_spacing_hz;
  const double n_t = static_cast<double>(config.doppler_bins) / config.subcarrier_spacing_hz;
  std::vector<DelayDopplerPath> paths;
  for (std::size_t i = 0; i < config.profile_delays_us.size(); ++i) {
    const double tap = std::round(config.profile_delays_us[i] * 1e-6 * m_df);
    double k = config.profile_dopplers_hz[i] * n_t;
    if (config.doppler_mode == DopplerMode::kInteger) k = std::round(k);
    if (tap < 0.0 || tap >= static_cast<double>(config.max_delay)) {
      throw ConfigError(config.name + ": profile path " + std::to_string(i + 1) +
                        " maps to delay tap " + std::to_string(static_cast<long long>(tap)) +
                        ", outside [0, max_delay)");
    }
    if (k < 0.0 || k >= static_cast<double>(config.max_doppler)) {
      throw ConfigError(config.name + ": profile path " + std::to_string(i + 1) +
                        " maps to Doppler index " + std::to_string(k) +
                        ", outside [0, max_doppler)");
    }
    DelayDopplerPath p;
    p.delay_tap = static_cast<Index>(tap);
    p.doppler_index = k;
    p.gain = config.profile_gains.empty() ? Complex(1.0, 0.0) : config.profile_gains[i];
    paths.push_back(p);
  }
  return paths;
}

MimoChannel generate_channel(const ExperimentConfig& config, Rng& rng) {
  const ChannelSupport support = config.make_support();
  std::vector<DelayDopplerPath> shared;
  bool fixed_gains = false;
  switch (config.channel) {
    case ChannelSource::kFixedProfile:
      shared = profile_paths(config);
      fixed_gains = !config.profile_gains.empty();
      break;
    case ChannelSource::kRandomOnGrid:
      for (Index cell : distinct_cells(support.size(), config.paths, rng)) {
        shared.push_back({support.delay_of(cell),
                          support.doppler_exponent(support.doppler_point_of(cell)), 1.0});
      }
      break;
    case ChannelSource::kRandomFractional:
      for (Index cell : distinct_cells(config.max_delay * config.max_doppler, config.paths, rng)) {
        const double offset = rng.uniform();
        shared.push_back({cell / config.max_doppler,
                          static_cast<double>(cell % config.max_doppler) + offset, 1.0});
      }
      break;
  }

  const double path_power = 1.0 / static_cast<double>(shared.size());
  const bool siso = config.tx_antennas == 1 && config.rx_antennas == 1;
  MimoChannel ch;
  ch.antennas = config.mimo();
  ch.pair_paths.reserve(static_cast<std::size_t>(config.tx_antennas * config.rx_antennas));
  for (Index pair = 0; pair < config.tx_antennas * config.rx_antennas; ++pair) {
    std::vector<DelayDopplerPath> paths = shared;
    for (auto& p : paths) {
      if (fixed_gains && siso) continue;
      const double power = fixed_gains ? std::norm(p.gain) : path_power;
      p.gain = rng.complex_normal(power);
    }
    ch.pair_paths.push_back(std::move(paths));
  }
  return ch;
}

}  // namespace otfs
