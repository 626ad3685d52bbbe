#include "otfs/harness/metrics.hpp"

#include <stdexcept>

namespace otfs {

double nmse(const CMatrix& estimate, const CMatrix& truth) {
  if (estimate.rows() != truth.rows() || estimate.cols() != truth.cols()) {
    throw std::invalid_argument("nmse: shape mismatch");
  }
  const double energy = truth.squaredNorm();
  if (!(energy > 0.0)) throw std::invalid_argument("nmse: true channel is zero");
  return (estimate - truth).squaredNorm() / energy;
}

double ser(const IndexMatrix& detected, const IndexMatrix& truth) {
  if (detected.rows() != truth.rows() || detected.cols() != truth.cols()) {
    throw std::invalid_argument("ser: shape mismatch");
  }
  if (truth.size() == 0) return 0.0;
  return static_cast<double>((detected.array() != truth.array()).count()) /
         static_cast<double>(truth.size());
}

EfficiencyReport efficiency(const ExperimentConfig& config, Index tx_antennas) {
  const double m = static_cast<double>(config.delay_bins);
  const double n = static_cast<double>(config.doppler_bins);
  const double mt = static_cast<double>(config.max_delay);
  const double nn = static_cast<double>(config.max_doppler);
  EfficiencyReport r;
  r.tx_antennas = tx_antennas > 0 ? tx_antennas : config.tx_antennas;
  const double nt = static_cast<double>(r.tx_antennas);
  r.ap_sip = 1.0 - static_cast<double>(config.pilot_columns) / n;
  r.ep_siso = 1.0 - (2.0 * mt + 1.0) * (2.0 * nn + 1.0) / (m * n);
  r.ep_mimo = 1.0 - (nt * mt + mt + nt) * (2.0 * nn + 1.0) / (m * n * nt);
  return r;
}

}  // namespace otfs
