#pragma once

#include <string>
#include <vector>

#include "otfs/random.hpp"
#include "otfs/types.hpp"

namespace otfs {

enum class Modulation { kPsk4, kQam16, kQam64 };

using IndexMatrix = Eigen::Matrix<Index, Eigen::Dynamic, Eigen::Dynamic>;

// Gray-mapped square constellation with unit average power.
class Constellation {
 public:
  explicit Constellation(Modulation modulation);

  Modulation modulation() const { return modulation_; }
  std::string name() const;
  const CVector& points() const { return points_; }
  Index size() const { return points_.size(); }
  int bits_per_symbol() const { return bits_per_symbol_; }

  // Nearest point; ties go to the lowest index.
  Index nearest(Complex x) const;

 private:
  Modulation modulation_;
  int bits_per_symbol_;
  CVector points_;
};

Modulation parse_modulation(const std::string& name);

// Nearest-neighbour indices of x / scale.
IndexMatrix demap(const CMatrix& x, const Constellation& constellation, double scale = 1.0);

// scale * points(indices).
CMatrix map_symbols(const IndexMatrix& indices, const Constellation& constellation,
                    double scale = 1.0);

IndexMatrix random_indices(Index rows, Index cols, const Constellation& constellation, Rng& rng);

// (H^H R^-1 H + I / data_power)^-1 H^H R^-1 Y with a general covariance R.
CMatrix lmmse_detect(const CMatrix& y, const CMatrix& h, const CMatrix& noise_cov,
                     double data_power);
// Same with R = diag(noise_var).
CMatrix lmmse_detect(const CMatrix& y, const CMatrix& h, const RVector& noise_var,
                     double data_power);

// (H^H H + Xi)^-1 H^H Y, the minimiser of |Y - H X|^2 + |Xi^{1/2} X|^2.
// Xi is the Gram-side uncertainty (columns of H).
CMatrix zf_uncertainty_detect(const CMatrix& y, const CMatrix& h, const CMatrix& xi_gram);

// H^H [H H^H + Xi + (noise_variance / data_power) diag(|p_rx|^2)]^-1 Y.
// Xi is the outer-product uncertainty (rows of H); rx_pulse has H.rows() entries.
CMatrix lmmse_uncertainty_detect(const CMatrix& y, const CMatrix& h, const CMatrix& xi_outer,
                                 double noise_variance, double data_power,
                                 const CVector& rx_pulse);

// PSD square root through a Hermitian eigendecomposition, negative
// eigenvalues clamped to zero.
CMatrix psd_sqrt(const CMatrix& a);

}  // namespace otfs
