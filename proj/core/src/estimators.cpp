#include <cmath>
#include <stdexcept>

#include "linalg.hpp"
#include "otfs/dictionary.hpp"
#include "otfs/estimators.hpp"
#include "otfs/modem.hpp"

namespace otfs {

namespace {

std::vector<CMatrix> split_rows(const CMatrix& stacked, Index blocks) {
  const Index m = stacked.rows() / blocks;
  std::vector<CMatrix> out;
  out.reserve(static_cast<std::size_t>(blocks));
  for (Index b = 0; b < blocks; ++b) out.emplace_back(stacked.middleRows(b * m, m));
  return out;
}

CMatrix stack_rows(const std::vector<CMatrix>& blocks) {
  const Index m = blocks.front().rows();
  CMatrix out(m * static_cast<Index>(blocks.size()), blocks.front().cols());
  for (std::size_t b = 0; b < blocks.size(); ++b) out.middleRows(static_cast<Index>(b) * m, m) = blocks[b];
  return out;
}

}  // namespace

EstimationOutput da_bl(const DaBlInputs& inputs, const OtfsGrid& grid,
                       const ChannelSupport& support, const Constellation& constellation,
                       DetectorRule rule, const EmSettings& settings,
                       const std::vector<CMatrix>* x_d_init) {
  settings.validate();
  const Index m = grid.delay_bins();
  const Index nt = static_cast<Index>(inputs.pilots.size());
  const Index nr = inputs.y_pilot.cols();
  const Index k1 = inputs.y_data.cols();
  if (nt < 1 || nr < 1) throw std::invalid_argument("da_bl: need at least one TA and RA");
  const Index k2 = inputs.pilots.front().cols();
  if (inputs.y_data.rows() != m * nr || inputs.y_pilot.rows() != m * k2) {
    throw std::invalid_argument("da_bl: received blocks have the wrong shape");
  }
  if (!(inputs.noise_variance > 0.0) || !(inputs.data_power > 0.0)) {
    throw std::invalid_argument("da_bl: noise variance and data power must be positive");
  }

  const auto atoms = support_atoms(grid, support);
  const CMatrix omega_p = mimo_dictionary_from_atoms(inputs.pilots, atoms);
  const RVector noise_p = decoupled_noise_variance(grid, inputs.noise_variance, k2);
  const GaussianPosterior pa = sparse_bayesian_em(inputs.y_pilot, omega_p, noise_p, nt, settings);

  EstimationOutput out = summarize_posterior(pa, atoms, nt, nr);
  out.pilot_iterations = pa.iterations;
  if (k1 == 0) {
    out.detected_data = CMatrix(m * nt, 0);
    out.detected_indices = IndexMatrix(m * nt, 0);
    return out;
  }

  const double scale = std::sqrt(inputs.data_power);
  const CVector rx_pulse = grid.rx_pulse().replicate(nr, 1);
  auto detect = [&](const CMatrix& h, const CMatrix& xi_gram, const CMatrix& xi_outer) {
    CMatrix x = rule == DetectorRule::kZfUncertainty
                    ? zf_uncertainty_detect(inputs.y_data, h, xi_gram)
                    : lmmse_uncertainty_detect(inputs.y_data, h, xi_outer,
                                               inputs.noise_variance, inputs.data_power, rx_pulse);
    out.detected_indices = demap(x, constellation, scale);
    return map_symbols(out.detected_indices, constellation, scale);
  };

  CMatrix x_hat;
  if (x_d_init != nullptr) {
    if (static_cast<Index>(x_d_init->size()) != nt) {
      throw std::invalid_argument("da_bl: x_d_init needs one block per TA");
    }
    x_hat = stack_rows(*x_d_init);
    if (x_hat.rows() != m * nt || x_hat.cols() != k1) {
      throw std::invalid_argument("da_bl: x_d_init has the wrong shape");
    }
    out.detected_indices = demap(x_hat, constellation, scale);
  } else {
    // Bootstrap detection always uses the LMMSE rule on the PA-BL estimate.
    const CMatrix xi_outer = out.xi_outer;
    x_hat = lmmse_uncertainty_detect(inputs.y_data, out.channel, xi_outer, inputs.noise_variance,
                                     inputs.data_power, rx_pulse);
    out.detected_indices = demap(x_hat, constellation, scale);
    x_hat = map_symbols(out.detected_indices, constellation, scale);
  }

  // The pilot half of the normal equations never changes.
  const RVector w_p = noise_p.cwiseInverse();
  const CMatrix omega_p_w = w_p.asDiagonal() * omega_p;
  const CMatrix gram_p = omega_p.adjoint() * omega_p_w;
  const CMatrix cross_p = omega_p_w.adjoint() * inputs.y_pilot;
  const RVector w_d = decoupled_noise_variance(grid, inputs.noise_variance, k1).cwiseInverse();
  CMatrix y_d(m * k1, nr);
  for (Index r = 0; r < nr; ++r) y_d.col(r) = vec(inputs.y_data.middleRows(r * m, m));

  RVector lambda = pa.hyperparams;
  CMatrix mean;
  CMatrix covariance;
  int iterations = 0;
  for (int j = 0; j < settings.max_iterations; ++j) {
    const CMatrix omega_d = mimo_dictionary_from_atoms(split_rows(x_hat, nt), atoms);
    const CMatrix omega_d_w = w_d.asDiagonal() * omega_d;
    const CMatrix gram = detail::hermitian_part(gram_p + omega_d.adjoint() * omega_d_w);
    const CMatrix cross = cross_p + omega_d_w.adjoint() * y_d;
    em_estep(gram, cross, lambda, nt, mean, covariance);
    RVector next = em_mstep(mean, covariance, nt, settings.lambda_floor);
    const double change = (next - lambda).squaredNorm();
    lambda = std::move(next);
    iterations = j + 1;

    out.channel = reconstruct_mimo_dd_channel(mean, atoms, nt, nr);
    out.xi_gram = xi_matrix(covariance, atoms, XiForm::kGram, nt, nr);
    out.xi_outer = xi_matrix(covariance, atoms, XiForm::kOuter, nt, nr);
    x_hat = detect(out.channel, out.xi_gram, out.xi_outer);
    if (change < settings.tolerance) break;
  }
  out.coefficients = mean;
  out.hyperparams = lambda;
  out.iterations = iterations;
  out.detected_data = x_hat;
  return out;
}

EstimationOutput da_bl_siso(const CMatrix& y_data, const CVector& y_pilot, const CMatrix& pilots,
                            const OtfsGrid& grid, const ChannelSupport& support,
                            const Constellation& constellation, DetectorRule rule,
                            double noise_variance, double data_power, const EmSettings& settings,
                            const CMatrix* x_d_init) {
  DaBlInputs inputs;
  inputs.y_data = y_data;
  inputs.y_pilot = y_pilot;
  inputs.pilots = {pilots};
  inputs.noise_variance = noise_variance;
  inputs.data_power = data_power;
  if (x_d_init == nullptr) return da_bl(inputs, grid, support, constellation, rule, settings);
  const std::vector<CMatrix> init{*x_d_init};
  return da_bl(inputs, grid, support, constellation, rule, settings, &init);
}

}  // namespace otfs
