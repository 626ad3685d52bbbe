#pragma once

#include <span>
#include <vector>

#include "otfs/types.hpp"

namespace otfs {

// Frame geometry of one OTFS block: M delay bins by N Doppler bins, the
// OFDM numerology underneath it, and the sampled Tx/Rx pulse diagonals.
class OtfsGrid {
 public:
  // Rectangular pulses (P_tx = P_rx = I), T = 1 / subcarrier_spacing.
  static OtfsGrid rectangular(Index delay_bins, Index doppler_bins, double subcarrier_spacing_hz);

  // Throws std::invalid_argument unless M, N >= 2, T * df == 1 (1e-12 relative)
  // and both pulse vectors have length M with no zero sample.
  OtfsGrid(Index delay_bins, Index doppler_bins, double subcarrier_spacing_hz,
           double symbol_duration_s, CVector tx_pulse, CVector rx_pulse);

  Index delay_bins() const { return delay_bins_; }
  Index doppler_bins() const { return doppler_bins_; }
  double subcarrier_spacing() const { return subcarrier_spacing_; }
  double symbol_duration() const { return symbol_duration_; }
  double frame_duration() const { return static_cast<double>(doppler_bins_) * symbol_duration_; }
  const CVector& tx_pulse() const { return tx_pulse_; }
  const CVector& rx_pulse() const { return rx_pulse_; }
  bool has_rectangular_pulses() const;

  // Diagonal of P_rx P_rx^H, i.e. |p_rx(p)|^2.
  RVector rx_pulse_power() const { return rx_pulse_.cwiseAbs2(); }

 private:
  Index delay_bins_;
  Index doppler_bins_;
  double subcarrier_spacing_;
  double symbol_duration_;
  CVector tx_pulse_;
  CVector rx_pulse_;
};

// One propagation path: integer delay tap, real Doppler index, complex gain.
struct DelayDopplerPath {
  Index delay_tap = 0;
  double doppler_index = 0.0;
  Complex gain{1.0, 0.0};
};

// Throws std::invalid_argument unless 0 <= l < M and |k| < N/2.
void validate_path(const DelayDopplerPath& path, const OtfsGrid& grid);

// Delay/Doppler search grid of the sparse estimators: M_tau delay taps by
// G_nu Doppler points spanning [0, N_nu) Doppler bins.
class ChannelSupport {
 public:
  ChannelSupport(Index max_delay, Index max_doppler, Index doppler_grid_points);

  Index max_delay() const { return max_delay_; }
  Index max_doppler() const { return max_doppler_; }
  Index doppler_grid_points() const { return doppler_grid_points_; }

  // M_tau * G_nu, the length of one coefficient vector.
  Index size() const { return max_delay_ * doppler_grid_points_; }

  // Delay-major, Doppler-minor enumeration shared by every dictionary.
  Index column(Index delay, Index doppler_point) const {
    return delay * doppler_grid_points_ + doppler_point;
  }
  Index delay_of(Index column) const { return column / doppler_grid_points_; }
  Index doppler_point_of(Index column) const { return column % doppler_grid_points_; }

  // Effective Doppler exponent k_j = j * N_nu / G_nu.
  double doppler_exponent(Index doppler_point) const;

  // Throws std::invalid_argument if M_tau > M or N_nu > N.
  void validate_against(const OtfsGrid& grid) const;

 private:
  Index max_delay_;
  Index max_doppler_;
  Index doppler_grid_points_;
};

// Forward cyclic shift: maps e_p to e_{(p+1) mod M}.
CMatrix permutation_matrix(Index size);

// Signed phase index of diagonal entry p of Delta_l: p for p < M - l,
// p - M for the last l entries (all p when l == 0).
double delta_phase_index(Index delay_bins, Index delay_tap, Index p);

// Delta_l = diag{omega^{e_p}} with omega = exp(j 2 pi / (M N)).
CMatrix delta_matrix(const OtfsGrid& grid, Index delay_tap);

// (Delta_l)^k taken elementwise on the phases, so any real k is allowed.
CVector delta_power_diagonal(const OtfsGrid& grid, Index delay_tap, double doppler);

// P_rx Pi^l (Delta_l)^k P_tx as a dense matrix.
CMatrix basis_matrix(const OtfsGrid& grid, Index delay_tap, double doppler);

// Doppler frequency in Hz of grid point j: j N_nu / (G_nu N T).
double doppler_grid_value(Index doppler_point, const ChannelSupport& support, const OtfsGrid& grid);

// Sum_i h_i P_rx Pi^{l_i} (Delta_{l_i})^{k_i} P_tx.
CMatrix effective_dd_channel(const OtfsGrid& grid, std::span<const DelayDopplerPath> paths);

// Sum_i h_i Pi^{l_i} (Delta_{l_i})^{k_i}, without pulse diagonals.
CMatrix td_channel_matrix(const OtfsGrid& grid, std::span<const DelayDopplerPath> paths);

// Sparse form of one basis matrix. Row p holds a single nonzero, at column
// (p - l) mod M, with value weight(p). Applying it to an M x K block costs
// O(M K) instead of O(M^2 K).
class DdAtom {
 public:
  DdAtom(const OtfsGrid& grid, Index delay_tap, double doppler);

  Index shift() const { return shift_; }
  Index size() const { return weights_.size(); }
  const CVector& weights() const { return weights_; }
  Index source_column(Index row) const { return source_column_unchecked(row, weights_.size()); }

  CMatrix dense() const;
  CMatrix apply(const CMatrix& x) const;
  // out += scale * (atom * x)
  void apply_add(Complex scale, const CMatrix& x, CMatrix& out) const;

 private:
  Index source_column_unchecked(Index row, Index m) const { return ((row - shift_) % m + m) % m; }

  Index shift_;
  CVector weights_;
};

// One atom per support column, in support enumeration order.
std::vector<DdAtom> support_atoms(const OtfsGrid& grid, const ChannelSupport& support);

}  // namespace otfs
