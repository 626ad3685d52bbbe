#include "otfs/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace otfs {

namespace {

void require_tap(Index delay_tap, Index delay_bins) {
  if (delay_tap < 0 || delay_tap >= delay_bins) {
    throw std::invalid_argument("delay tap " + std::to_string(delay_tap) + " outside [0, " +
                                std::to_string(delay_bins) + ")");
  }
}

double phase_unit(const OtfsGrid& grid) {
  return 2.0 * kPi / static_cast<double>(grid.delay_bins() * grid.doppler_bins());
}

}  // namespace

OtfsGrid OtfsGrid::rectangular(Index delay_bins, Index doppler_bins, double subcarrier_spacing_hz) {
  if (delay_bins < 2) throw std::invalid_argument("delay_bins must be >= 2");
  const CVector ones = CVector::Ones(delay_bins);
  return OtfsGrid(delay_bins, doppler_bins, subcarrier_spacing_hz, 1.0 / subcarrier_spacing_hz,
                  ones, ones);
}

OtfsGrid::OtfsGrid(Index delay_bins, Index doppler_bins, double subcarrier_spacing_hz,
                   double symbol_duration_s, CVector tx_pulse, CVector rx_pulse)
    : delay_bins_(delay_bins),
      doppler_bins_(doppler_bins),
      subcarrier_spacing_(subcarrier_spacing_hz),
      symbol_duration_(symbol_duration_s),
      tx_pulse_(std::move(tx_pulse)),
      rx_pulse_(std::move(rx_pulse)) {
  if (delay_bins_ < 2 || doppler_bins_ < 2) {
    throw std::invalid_argument("OtfsGrid requires M >= 2 and N >= 2");
  }
  if (!(subcarrier_spacing_ > 0.0) || !(symbol_duration_ > 0.0)) {
    throw std::invalid_argument("subcarrier spacing and symbol duration must be positive");
  }
  if (std::abs(symbol_duration_ * subcarrier_spacing_ - 1.0) > 1e-12) {
    throw std::invalid_argument("OtfsGrid requires T * df == 1");
  }
  if (tx_pulse_.size() != delay_bins_ || rx_pulse_.size() != delay_bins_) {
    throw std::invalid_argument("pulse vectors must have length M");
  }
  if ((tx_pulse_.array().abs() == 0.0).any() || (rx_pulse_.array().abs() == 0.0).any()) {
    throw std::invalid_argument("pulse samples must be nonzero");
  }
}

bool OtfsGrid::has_rectangular_pulses() const {
  return (tx_pulse_.array() == Complex(1.0, 0.0)).all() &&
         (rx_pulse_.array() == Complex(1.0, 0.0)).all();
}

void validate_path(const DelayDopplerPath& path, const OtfsGrid& grid) {
  require_tap(path.delay_tap, grid.delay_bins());
  if (!std::isfinite(path.doppler_index) ||
      std::abs(path.doppler_index) >= 0.5 * static_cast<double>(grid.doppler_bins())) {
    throw std::invalid_argument("Doppler index must satisfy |k| < N/2");
  }
  if (!std::isfinite(path.gain.real()) || !std::isfinite(path.gain.imag())) {
    throw std::invalid_argument("path gain must be finite");
  }
}

ChannelSupport::ChannelSupport(Index max_delay, Index max_doppler, Index doppler_grid_points)
    : max_delay_(max_delay), max_doppler_(max_doppler), doppler_grid_points_(doppler_grid_points) {
  if (max_delay_ < 1 || max_doppler_ < 1 || doppler_grid_points_ < 1) {
    throw std::invalid_argument("ChannelSupport sizes must be positive");
  }
  if (doppler_grid_points_ < max_doppler_) {
    throw std::invalid_argument("ChannelSupport requires G_nu >= N_nu");
  }
}

double ChannelSupport::doppler_exponent(Index doppler_point) const {
  if (doppler_point < 0 || doppler_point >= doppler_grid_points_) {
    throw std::invalid_argument("Doppler grid index out of range");
  }
  return static_cast<double>(doppler_point) * static_cast<double>(max_doppler_) /
         static_cast<double>(doppler_grid_points_);
}

void ChannelSupport::validate_against(const OtfsGrid& grid) const {
  if (max_delay_ > grid.delay_bins()) throw std::invalid_argument("M_tau exceeds M");
  if (max_doppler_ > grid.doppler_bins()) throw std::invalid_argument("N_nu exceeds N");
}

CMatrix permutation_matrix(Index size) {
  if (size < 1) throw std::invalid_argument("permutation order must be >= 1");
  CMatrix pi = CMatrix::Zero(size, size);
  for (Index p = 0; p < size; ++p) pi((p + 1) % size, p) = 1.0;
  return pi;
}

double delta_phase_index(Index delay_bins, Index delay_tap, Index p) {
  require_tap(delay_tap, delay_bins);
  if (delay_tap == 0 || p < delay_bins - delay_tap) return static_cast<double>(p);
  return static_cast<double>(p - delay_bins);
}

CVector delta_power_diagonal(const OtfsGrid& grid, Index delay_tap, double doppler) {
  const Index m = grid.delay_bins();
  require_tap(delay_tap, m);
  const double unit = phase_unit(grid);
  CVector d(m);
  for (Index p = 0; p < m; ++p) {
    d(p) = std::polar(1.0, unit * doppler * delta_phase_index(m, delay_tap, p));
  }
  return d;
}

CMatrix delta_matrix(const OtfsGrid& grid, Index delay_tap) {
  return delta_power_diagonal(grid, delay_tap, 1.0).asDiagonal();
}

CMatrix basis_matrix(const OtfsGrid& grid, Index delay_tap, double doppler) {
  return DdAtom(grid, delay_tap, doppler).dense();
}

double doppler_grid_value(Index doppler_point, const ChannelSupport& support, const OtfsGrid& grid) {
  return support.doppler_exponent(doppler_point) / grid.frame_duration();
}

CMatrix effective_dd_channel(const OtfsGrid& grid, std::span<const DelayDopplerPath> paths) {
  const Index m = grid.delay_bins();
  CMatrix h = CMatrix::Zero(m, m);
  for (const auto& path : paths) {
    validate_path(path, grid);
    const DdAtom atom(grid, path.delay_tap, path.doppler_index);
    for (Index p = 0; p < m; ++p) h(p, atom.source_column(p)) += path.gain * atom.weights()(p);
  }
  return h;
}

CMatrix td_channel_matrix(const OtfsGrid& grid, std::span<const DelayDopplerPath> paths) {
  const Index m = grid.delay_bins();
  CMatrix h = CMatrix::Zero(m, m);
  for (const auto& path : paths) {
    validate_path(path, grid);
    const CVector d = delta_power_diagonal(grid, path.delay_tap, path.doppler_index);
    for (Index q = 0; q < m; ++q) h((q + path.delay_tap) % m, q) += path.gain * d(q);
  }
  return h;
}

DdAtom::DdAtom(const OtfsGrid& grid, Index delay_tap, double doppler) : shift_(delay_tap) {
  const Index m = grid.delay_bins();
  const CVector d = delta_power_diagonal(grid, delay_tap, doppler);
  weights_.resize(m);
  for (Index p = 0; p < m; ++p) {
    const Index q = source_column_unchecked(p, m);
    weights_(p) = grid.rx_pulse()(p) * d(q) * grid.tx_pulse()(q);
  }
}

CMatrix DdAtom::dense() const {
  const Index m = size();
  CMatrix b = CMatrix::Zero(m, m);
  for (Index p = 0; p < m; ++p) b(p, source_column(p)) = weights_(p);
  return b;
}

CMatrix DdAtom::apply(const CMatrix& x) const {
  CMatrix out = CMatrix::Zero(size(), x.cols());
  apply_add(1.0, x, out);
  return out;
}

void DdAtom::apply_add(Complex scale, const CMatrix& x, CMatrix& out) const {
  const Index m = size();
  if (x.rows() != m || out.rows() != m || out.cols() != x.cols()) {
    throw std::invalid_argument("DdAtom::apply_add shape mismatch");
  }
  for (Index c = 0; c < x.cols(); ++c) {
    for (Index p = 0; p < m; ++p) out(p, c) += scale * weights_(p) * x(source_column(p), c);
  }
}

std::vector<DdAtom> support_atoms(const OtfsGrid& grid, const ChannelSupport& support) {
  support.validate_against(grid);
  std::vector<DdAtom> atoms;
  atoms.reserve(static_cast<std::size_t>(support.size()));
  for (Index i = 0; i < support.max_delay(); ++i) {
    for (Index j = 0; j < support.doppler_grid_points(); ++j) {
      atoms.emplace_back(grid, i, support.doppler_exponent(j));
    }
  }
  return atoms;
}

}  // namespace otfs
