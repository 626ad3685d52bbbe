#include <cmath>
#include <stdexcept>

#include "linalg.hpp"
#include "otfs/estimators.hpp"

namespace otfs {

void EmSettings::validate() const {
  if (!(tolerance > 0.0)) throw std::invalid_argument("EM tolerance must be > 0");
  if (max_iterations < 1) throw std::invalid_argument("EM max_iterations must be >= 1");
  if (!(lambda_floor > 0.0)) throw std::invalid_argument("EM lambda_floor must be > 0");
}

CVector lmmse_channel_estimate(const CVector& y, const CMatrix& omega, const CMatrix& noise_cov,
                               const CMatrix& prior_cov) {
  if (y.size() != omega.rows() || noise_cov.rows() != omega.rows() ||
      prior_cov.rows() != omega.cols()) {
    throw std::invalid_argument("lmmse_channel_estimate: shape mismatch");
  }
  CMatrix rhs(omega.rows(), omega.cols() + 1);
  rhs << omega, y;
  const CMatrix white = detail::solve_hpd(noise_cov, rhs, "lmmse_channel_estimate");
  const CMatrix prior_inv = detail::solve_hpd(
      prior_cov, CMatrix::Identity(omega.cols(), omega.cols()), "lmmse_channel_estimate");
  const CMatrix a = omega.adjoint() * white.leftCols(omega.cols()) + prior_inv;
  return detail::solve_hpd(detail::hermitian_part(a), omega.adjoint() * white.col(omega.cols()),
                           "lmmse_channel_estimate");
}

CVector lmmse_channel_estimate(const CVector& y, const CMatrix& omega, const RVector& noise_var,
                               const RVector& prior_var) {
  if (y.size() != omega.rows() || noise_var.size() != omega.rows() ||
      prior_var.size() != omega.cols()) {
    throw std::invalid_argument("lmmse_channel_estimate: shape mismatch");
  }
  if ((noise_var.array() <= 0.0).any() || (prior_var.array() <= 0.0).any()) {
    throw NumericalError("lmmse_channel_estimate: covariances must be positive definite");
  }
  const CMatrix omega_w = noise_var.cwiseInverse().asDiagonal() * omega;
  CMatrix a = omega.adjoint() * omega_w;
  a.diagonal() += prior_var.cwiseInverse().cast<Complex>();
  return detail::solve_hpd(detail::hermitian_part(a), omega_w.adjoint() * y,
                           "lmmse_channel_estimate");
}

void em_estep(const CMatrix& gram, const CMatrix& cross, const RVector& lambda, Index tx_antennas,
              CMatrix& mean, CMatrix& covariance) {
  const Index width = lambda.size() * tx_antennas;
  if (gram.rows() != width || gram.cols() != width || cross.rows() != width) {
    throw std::invalid_argument("em_estep: shape mismatch");
  }
  // Sigma = S (I + S G S)^-1 S with S = diag(sqrt(lambda)) stays well
  // conditioned when some lambda_i sit at the floor.
  const RVector s = lambda.replicate(tx_antennas, 1).cwiseSqrt();
  CMatrix b = s.asDiagonal() * gram * s.asDiagonal();
  b.diagonal().array() += 1.0;
  const CMatrix b_inv =
      detail::solve_hpd(detail::hermitian_part(b), CMatrix::Identity(width, width), "em_estep");
  covariance = s.asDiagonal() * detail::hermitian_part(b_inv) * s.asDiagonal();
  mean = covariance * cross;
  if (!covariance.allFinite() || !mean.allFinite()) {
    throw NumericalError("em_estep: non-finite posterior");
  }
}

RVector em_mstep(const CMatrix& mean, const CMatrix& covariance, Index tx_antennas,
                 double lambda_floor) {
  if (tx_antennas < 1 || mean.rows() % tx_antennas != 0 || covariance.rows() != mean.rows()) {
    throw std::invalid_argument("em_mstep: shape mismatch");
  }
  const Index n = mean.rows() / tx_antennas;
  const double nt = static_cast<double>(tx_antennas);
  const double nr = static_cast<double>(mean.cols());
  RVector lambda = RVector::Zero(n);
  for (Index t = 0; t < tx_antennas; ++t) {
    for (Index i = 0; i < n; ++i) {
      const Index row = t * n + i;
      lambda(i) += mean.row(row).squaredNorm() / (nr * nt) + covariance(row, row).real() / nt;
    }
  }
  if (!lambda.allFinite()) throw NumericalError("em_mstep: non-finite hyperparameters");
  return lambda.cwiseMax(lambda_floor);
}

GaussianPosterior sparse_bayesian_em(const CMatrix& y, const CMatrix& omega,
                                     const RVector& noise_var, Index tx_antennas,
                                     const EmSettings& settings,
                                     const std::optional<RVector>& initial) {
  settings.validate();
  if (tx_antennas < 1 || omega.cols() % tx_antennas != 0) {
    throw std::invalid_argument("sparse_bayesian_em: dictionary width not divisible by N_t");
  }
  if (y.rows() != omega.rows() || noise_var.size() != omega.rows()) {
    throw std::invalid_argument("sparse_bayesian_em: shape mismatch");
  }
  if ((noise_var.array() <= 0.0).any()) {
    throw NumericalError("sparse_bayesian_em: noise variance must be positive");
  }
  const Index n = omega.cols() / tx_antennas;
  const CMatrix omega_w = noise_var.cwiseInverse().asDiagonal() * omega;
  const CMatrix gram = detail::hermitian_part(omega.adjoint() * omega_w);
  const CMatrix cross = omega_w.adjoint() * y;

  GaussianPosterior post;
  post.hyperparams = initial ? *initial : RVector::Ones(n);
  if (post.hyperparams.size() != n) {
    throw std::invalid_argument("sparse_bayesian_em: initial hyperparameters have wrong length");
  }
  for (int j = 0; j < settings.max_iterations; ++j) {
    em_estep(gram, cross, post.hyperparams, tx_antennas, post.mean, post.covariance);
    RVector next = em_mstep(post.mean, post.covariance, tx_antennas, settings.lambda_floor);
    const double change = (next - post.hyperparams).squaredNorm();
    post.hyperparams = std::move(next);
    post.iterations = j + 1;
    if (change < settings.tolerance) {
      post.converged = true;
      break;
    }
  }
  return post;
}

GaussianPosterior pa_bl_siso(const CVector& y_p, const CMatrix& omega_p, const RVector& noise_var,
                             const EmSettings& settings) {
  return sparse_bayesian_em(y_p, omega_p, noise_var, 1, settings);
}

GaussianPosterior pa_bl_mimo(const CMatrix& y_p, const CMatrix& omega_p, const RVector& noise_var,
                             const EmSettings& settings, Index tx_antennas, Index rx_antennas) {
  if (y_p.cols() != rx_antennas) throw std::invalid_argument("pa_bl_mimo: need one column per RA");
  return sparse_bayesian_em(y_p, omega_p, noise_var, tx_antennas, settings);
}

}  // namespace otfs
