#include "otfs/detection.hpp"

#include <cmath>
#include <stdexcept>

#include "linalg.hpp"

namespace otfs {

namespace {

// Gray-coded PAM levels -(L-1), ..., (L-1) indexed by the Gray label.
std::vector<double> gray_levels(int bits) {
  const int count = 1 << bits;
  std::vector<double> level(static_cast<std::size_t>(count));
  for (int g = 0; g < count; ++g) {
    const int label = g ^ (g >> 1);
    level[static_cast<std::size_t>(label)] = 2.0 * g - (count - 1);
  }
  return level;
}

}  // namespace

Constellation::Constellation(Modulation modulation) : modulation_(modulation) {
  switch (modulation) {
    case Modulation::kPsk4: bits_per_symbol_ = 2; break;
    case Modulation::kQam16: bits_per_symbol_ = 4; break;
    case Modulation::kQam64: bits_per_symbol_ = 6; break;
    default: throw std::invalid_argument("unknown modulation");
  }
  const int axis_bits = bits_per_symbol_ / 2;
  const auto level = gray_levels(axis_bits);
  const Index count = Index{1} << bits_per_symbol_;
  points_.resize(count);
  for (Index idx = 0; idx < count; ++idx) {
    const auto i_label = static_cast<std::size_t>(idx >> axis_bits);
    const auto q_label = static_cast<std::size_t>(idx & ((1 << axis_bits) - 1));
    points_(idx) = {level[i_label], level[q_label]};
  }
  points_ /= std::sqrt(points_.squaredNorm() / static_cast<double>(count));
}

std::string Constellation::name() const {
  switch (modulation_) {
    case Modulation::kPsk4: return "psk4";
    case Modulation::kQam16: return "qam16";
    case Modulation::kQam64: return "qam64";
  }
  return "unknown";
}

Index Constellation::nearest(Complex x) const {
  Index best = 0;
  double best_dist = std::norm(x - points_(0));
  for (Index i = 1; i < points_.size(); ++i) {
    const double d = std::norm(x - points_(i));
    if (d < best_dist) {
      best_dist = d;
      best = i;
    }
  }
  return best;
}

Modulation parse_modulation(const std::string& name) {
  if (name == "psk4" || name == "qpsk") return Modulation::kPsk4;
  if (name == "qam16") return Modulation::kQam16;
  if (name == "qam64") return Modulation::kQam64;
  throw std::invalid_argument("unknown modulation '" + name + "'");
}

IndexMatrix demap(const CMatrix& x, const Constellation& constellation, double scale) {
  IndexMatrix idx(x.rows(), x.cols());
  for (Index c = 0; c < x.cols(); ++c) {
    for (Index r = 0; r < x.rows(); ++r) idx(r, c) = constellation.nearest(x(r, c) / scale);
  }
  return idx;
}

CMatrix map_symbols(const IndexMatrix& indices, const Constellation& constellation, double scale) {
  CMatrix x(indices.rows(), indices.cols());
  for (Index c = 0; c < indices.cols(); ++c) {
    for (Index r = 0; r < indices.rows(); ++r) x(r, c) = scale * constellation.points()(indices(r, c));
  }
  return x;
}

IndexMatrix random_indices(Index rows, Index cols, const Constellation& constellation, Rng& rng) {
  IndexMatrix idx(rows, cols);
  for (Index c = 0; c < cols; ++c) {
    for (Index r = 0; r < rows; ++r) idx(r, c) = rng.uniform_index(constellation.size());
  }
  return idx;
}

CMatrix lmmse_detect(const CMatrix& y, const CMatrix& h, const CMatrix& noise_cov,
                     double data_power) {
  if (y.rows() != h.rows() || noise_cov.rows() != h.rows() || noise_cov.cols() != h.rows()) {
    throw std::invalid_argument("lmmse_detect: shape mismatch");
  }
  if (!(data_power > 0.0)) throw std::invalid_argument("lmmse_detect: data_power must be > 0");
  // R^-1 [H Y] in one factorisation.
  CMatrix rhs(h.rows(), h.cols() + y.cols());
  rhs << h, y;
  const CMatrix white = detail::solve_hpd(noise_cov, rhs, "lmmse_detect");
  CMatrix a = h.adjoint() * white.leftCols(h.cols());
  a.diagonal().array() += 1.0 / data_power;
  return detail::solve_hpd(detail::hermitian_part(a), h.adjoint() * white.rightCols(y.cols()),
                           "lmmse_detect");
}

CMatrix lmmse_detect(const CMatrix& y, const CMatrix& h, const RVector& noise_var,
                     double data_power) {
  if (y.rows() != h.rows() || noise_var.size() != h.rows()) {
    throw std::invalid_argument("lmmse_detect: shape mismatch");
  }
  if (!(data_power > 0.0)) throw std::invalid_argument("lmmse_detect: data_power must be > 0");
  if ((noise_var.array() <= 0.0).any()) {
    throw NumericalError("lmmse_detect: noise variance must be positive");
  }
  const CMatrix hw = noise_var.cwiseInverse().asDiagonal() * h;
  CMatrix a = h.adjoint() * hw;
  a.diagonal().array() += 1.0 / data_power;
  return detail::solve_hpd(detail::hermitian_part(a), hw.adjoint() * y, "lmmse_detect");
}

CMatrix zf_uncertainty_detect(const CMatrix& y, const CMatrix& h, const CMatrix& xi_gram) {
  if (y.rows() != h.rows() || xi_gram.rows() != h.cols() || xi_gram.cols() != h.cols()) {
    throw std::invalid_argument("zf_uncertainty_detect: shape mismatch");
  }
  // Normal equations of the stacked system [H; Xi^{1/2}] X = [Y; 0].
  const CMatrix root = psd_sqrt(xi_gram);
  const CMatrix a = h.adjoint() * h + root.adjoint() * root;
  return detail::solve_hpd(detail::hermitian_part(a), h.adjoint() * y, "zf_uncertainty_detect");
}

CMatrix lmmse_uncertainty_detect(const CMatrix& y, const CMatrix& h, const CMatrix& xi_outer,
                                 double noise_variance, double data_power,
                                 const CVector& rx_pulse) {
  if (y.rows() != h.rows() || xi_outer.rows() != h.rows() || xi_outer.cols() != h.rows() ||
      rx_pulse.size() != h.rows()) {
    throw std::invalid_argument("lmmse_uncertainty_detect: shape mismatch");
  }
  if (!(data_power > 0.0) || !(noise_variance >= 0.0)) {
    throw std::invalid_argument("lmmse_uncertainty_detect: bad powers");
  }
  CMatrix a = h * h.adjoint() + xi_outer;
  a.diagonal() += ((noise_variance / data_power) * rx_pulse.cwiseAbs2()).cast<Complex>();
  return h.adjoint() * detail::solve_hpd(detail::hermitian_part(a), y, "lmmse_uncertainty_detect");
}

CMatrix psd_sqrt(const CMatrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("psd_sqrt: matrix must be square");
  if (a.size() == 0) return a;
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(detail::hermitian_part(a));
  if (eig.info() != Eigen::Success) throw NumericalError("psd_sqrt: eigendecomposition failed");
  const RVector root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * root.cast<Complex>().asDiagonal() * eig.eigenvectors().adjoint();
}

}  // namespace otfs
