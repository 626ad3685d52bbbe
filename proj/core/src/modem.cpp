#include "otfs/modem.hpp"

#include <cmath>
#include <stdexcept>

namespace otfs {

void MimoConfig::validate() const {
  if (tx_antennas < 1 || rx_antennas < 1) {
    throw std::invalid_argument("antenna counts must be >= 1");
  }
}

const std::vector<DelayDopplerPath>& MimoChannel::paths(Index rx, Index tx) const {
  return pair_paths.at(static_cast<std::size_t>(rx * antennas.tx_antennas + tx));
}

std::vector<DelayDopplerPath>& MimoChannel::paths(Index rx, Index tx) {
  return pair_paths.at(static_cast<std::size_t>(rx * antennas.tx_antennas + tx));
}

void MimoChannel::validate(const OtfsGrid& grid) const {
  antennas.validate();
  if (static_cast<Index>(pair_paths.size()) != antennas.tx_antennas * antennas.rx_antennas) {
    throw std::invalid_argument("MimoChannel needs N_r * N_t path lists");
  }
  const auto& ref = pair_paths.front();
  for (const auto& list : pair_paths) {
    if (list.size() != ref.size()) throw std::invalid_argument("MimoChannel support mismatch");
    for (std::size_t i = 0; i < list.size(); ++i) {
      validate_path(list[i], grid);
      if (list[i].delay_tap != ref[i].delay_tap || list[i].doppler_index != ref[i].doppler_index) {
        throw std::invalid_argument("MimoChannel support mismatch");
      }
    }
  }
}

namespace {

void require_frame_shape(const CMatrix& x, const OtfsGrid& grid, const char* what) {
  if (x.rows() != grid.delay_bins() || x.cols() != grid.doppler_bins()) {
    throw std::invalid_argument(std::string(what) + ": expected an M x N matrix");
  }
}

}  // namespace

CMatrix otfs_modulate(const CMatrix& x_dd, const OtfsGrid& grid) {
  require_frame_shape(x_dd, grid, "otfs_modulate");
  const CMatrix f = fourier_matrix(grid.doppler_bins());
  return grid.tx_pulse().asDiagonal() * (x_dd * f.adjoint());
}

CMatrix apply_td_channel(const CMatrix& s, std::span<const DelayDopplerPath> paths,
                         const OtfsGrid& grid, double noise_std, Rng& rng) {
  if (!(noise_std >= 0.0)) throw std::invalid_argument("noise_std must be >= 0");
  require_frame_shape(s, grid, "apply_td_channel");
  CMatrix r = td_channel_matrix(grid, paths) * s;
  if (noise_std > 0.0) r += rng.complex_normal(s.rows(), s.cols(), noise_std * noise_std);
  return r;
}

CVector sample_level_oracle(const CVector& s_col, std::span<const DelayDopplerPath> paths,
                            const OtfsGrid& grid, Index column) {
  const Index m = grid.delay_bins();
  if (s_col.size() != m || column < 0 || column >= grid.doppler_bins()) {
    throw std::invalid_argument("sample_level_oracle: bad column");
  }
  const double mn = static_cast<double>(m * grid.doppler_bins());
  CVector r = CVector::Zero(m);
  for (const auto& path : paths) {
    validate_path(path, grid);
    for (Index p = 0; p < m; ++p) {
      const Index lagged = ((p - path.delay_tap) % m + m) % m;
      const double phase =
          2.0 * kPi * path.doppler_index * static_cast<double>(p - path.delay_tap) / mn;
      r(p) += path.gain * std::polar(1.0, phase) * s_col(lagged);
    }
  }
  return r;
}

CMatrix otfs_demodulate(const CMatrix& r, const OtfsGrid& grid) {
  require_frame_shape(r, grid, "otfs_demodulate");
  const CMatrix f = fourier_matrix(grid.doppler_bins());
  return grid.rx_pulse().asDiagonal() * (r * f);
}

CMatrix simulate_frame(const DdFrame& frame, const PrecoderPair& pc,
                       std::span<const DelayDopplerPath> paths, const OtfsGrid& grid,
                       double noise_std, Rng& rng) {
  const CMatrix s = otfs_modulate(superimpose(frame, pc), grid);
  return otfs_demodulate(apply_td_channel(s, paths, grid, noise_std, rng), grid);
}

CMatrix mimo_dd_channel(const OtfsGrid& grid, const MimoChannel& channel) {
  channel.validate(grid);
  const Index m = grid.delay_bins();
  const Index nr = channel.antennas.rx_antennas;
  const Index nt = channel.antennas.tx_antennas;
  CMatrix h(m * nr, m * nt);
  for (Index r = 0; r < nr; ++r) {
    for (Index t = 0; t < nt; ++t) {
      h.block(r * m, t * m, m, m) = effective_dd_channel(grid, channel.paths(r, t));
    }
  }
  return h;
}

CMatrix simulate_mimo_frame(std::span<const DdFrame> frames, const PrecoderPair& pc,
                            const MimoChannel& channel, const OtfsGrid& grid, double noise_std,
                            Rng& rng) {
  channel.validate(grid);
  const Index nr = channel.antennas.rx_antennas;
  const Index nt = channel.antennas.tx_antennas;
  if (static_cast<Index>(frames.size()) != nt) {
    throw std::invalid_argument("simulate_mimo_frame: need one frame per TA");
  }
  if (!(noise_std >= 0.0)) throw std::invalid_argument("noise_std must be >= 0");
  const Index m = grid.delay_bins();
  const Index n = grid.doppler_bins();

  std::vector<CMatrix> tx_signals;
  tx_signals.reserve(frames.size());
  for (const auto& frame : frames) tx_signals.push_back(otfs_modulate(superimpose(frame, pc), grid));

  CMatrix y(m * nr, n);
  for (Index r = 0; r < nr; ++r) {
    CMatrix rx = CMatrix::Zero(m, n);
    for (Index t = 0; t < nt; ++t) {
      rx.noalias() += td_channel_matrix(grid, channel.paths(r, t)) * tx_signals[static_cast<std::size_t>(t)];
    }
    if (noise_std > 0.0) rx += rng.complex_normal(m, n, noise_std * noise_std);
    y.middleRows(r * m, m) = otfs_demodulate(rx, grid);
  }
  return y;
}

RVector decoupled_noise_variance(const OtfsGrid& grid, double noise_variance, Index columns) {
  const RVector per_column = noise_variance * grid.rx_pulse_power();
  return per_column.replicate(columns, 1);
}

}  // namespace otfs
