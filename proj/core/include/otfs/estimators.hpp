#pragma once

#include <optional>
#include <span>
#include <vector>

#include "otfs/detection.hpp"
#include "otfs/grid.hpp"

namespace otfs {

struct EmSettings {
  double tolerance = 1e-6;  // on |Lambda_j - Lambda_{j-1}|_F^2
  int max_iterations = 50;
  double lambda_floor = 1e-12;

  // Throws std::invalid_argument on a non-positive field.
  void validate() const;
};

// EM state. SISO keeps the mean as an n x 1 matrix; MIMO stores one column
// per RA with rows t * n + i. The covariance is shared by all RA columns.
struct GaussianPosterior {
  CMatrix mean;
  CMatrix covariance;
  RVector hyperparams;  // one entry per grid cell, shared by every antenna pair
  int iterations = 0;
  bool converged = false;

  CVector mean_vector() const { return mean.col(0); }
};

enum class DetectorRule { kZfUncertainty, kLmmseUncertainty };

// Which second moment the uncertainty matrix corrects.
enum class XiForm {
  kGram,   // E[H^H H] - Hhat^H Hhat, used by the ZF rule
  kOuter,  // E[H H^H] - Hhat Hhat^H, used by the LMMSE rule
};

struct EstimationOutput {
  CMatrix coefficients;  // posterior mean, layout as GaussianPosterior::mean
  CMatrix channel;       // Hhat_DD, M x M or M N_r x M N_t
  CMatrix xi_gram;
  CMatrix xi_outer;
  RVector hyperparams;
  int iterations = 0;          // data-aided iterations (PA-BL iterations when K1 == 0)
  int pilot_iterations = 0;    // iterations of the bootstrapping PA-BL pass
  CMatrix detected_data;       // hard decisions, M x K1 or M N_t x K1
  IndexMatrix detected_indices;
};

// (Omega^H R_w^-1 Omega + R_h^-1)^-1 Omega^H R_w^-1 y.
CVector lmmse_channel_estimate(const CVector& y, const CMatrix& omega, const CMatrix& noise_cov,
                               const CMatrix& prior_cov);
CVector lmmse_channel_estimate(const CVector& y, const CMatrix& omega, const RVector& noise_var,
                               const RVector& prior_var);

// One E-step under the prior I_{N_t} (x) Lambda. gram = Omega^H W Omega and
// cross = Omega^H W Y with W the inverse noise covariance.
void em_estep(const CMatrix& gram, const CMatrix& cross, const RVector& lambda, Index tx_antennas,
              CMatrix& mean, CMatrix& covariance);

// Row-group M-step:
// lambda_i = 1/(N_r N_t) sum_{r,t} |mean(t n + i, r)|^2 + 1/N_t sum_t cov(t n + i, t n + i),
// clamped below at lambda_floor.
RVector em_mstep(const CMatrix& mean, const CMatrix& covariance, Index tx_antennas,
                 double lambda_floor);

// Sparse Bayesian EM on Y = Omega H + V. Y has one column per RA; Omega has
// n * tx_antennas columns. Starts from Lambda = I unless initial is given.
GaussianPosterior sparse_bayesian_em(const CMatrix& y, const CMatrix& omega,
                                     const RVector& noise_var, Index tx_antennas,
                                     const EmSettings& settings,
                                     const std::optional<RVector>& initial = std::nullopt);

GaussianPosterior pa_bl_siso(const CVector& y_p, const CMatrix& omega_p, const RVector& noise_var,
                             const EmSettings& settings);

// y_p has one column per RA: column r = vec(Y_r P).
GaussianPosterior pa_bl_mimo(const CMatrix& y_p, const CMatrix& omega_p, const RVector& noise_var,
                             const EmSettings& settings, Index tx_antennas, Index rx_antennas);

// Received blocks after decoupling.
struct DaBlInputs {
  CMatrix y_data;                // Y D, M N_r x K1 (RA blocks stacked by rows)
  CMatrix y_pilot;               // vec(Y_r P) per column r, M K2 x N_r
  std::vector<CMatrix> pilots;   // X_p per TA
  double noise_variance = 0.0;
  double data_power = 0.5;
};

// Data-aided EM: bootstraps with PA-BL, then alternates EM on
// [Omega_d; Omega_p] with hard-decision data re-detection.
// x_d_init (one M x K1 block per TA) replaces the PA-BL-based data bootstrap.
EstimationOutput da_bl(const DaBlInputs& inputs, const OtfsGrid& grid,
                       const ChannelSupport& support, const Constellation& constellation,
                       DetectorRule rule, const EmSettings& settings,
                       const std::vector<CMatrix>* x_d_init = nullptr);

EstimationOutput da_bl_siso(const CMatrix& y_data, const CVector& y_pilot, const CMatrix& pilots,
                            const OtfsGrid& grid, const ChannelSupport& support,
                            const Constellation& constellation, DetectorRule rule,
                            double noise_variance, double data_power, const EmSettings& settings,
                            const CMatrix* x_d_init = nullptr);

// Sum_c h_c B_c.
CMatrix reconstruct_dd_channel(const CVector& h, const OtfsGrid& grid,
                               const ChannelSupport& support);
CMatrix reconstruct_dd_channel(const CVector& h, std::span<const DdAtom> atoms);

// Block (r, t) = sum_i mean(t n + i, r) B_i; M N_r x M N_t.
CMatrix reconstruct_mimo_dd_channel(const CMatrix& mean, std::span<const DdAtom> atoms,
                                    Index tx_antennas, Index rx_antennas);
CMatrix reconstruct_mimo_dd_channel(const CMatrix& mean, const OtfsGrid& grid,
                                    const ChannelSupport& support, Index tx_antennas,
                                    Index rx_antennas);

// Uncertainty matrix of the reconstructed channel under posterior covariance
// Sigma (n N_t square, shared by N_r independent RA columns).
// kGram is M N_t square, kOuter is M N_r square.
CMatrix xi_matrix(const CMatrix& covariance, std::span<const DdAtom> atoms, XiForm form,
                  Index tx_antennas = 1, Index rx_antennas = 1);
CMatrix xi_matrix(const CMatrix& covariance, const OtfsGrid& grid, const ChannelSupport& support,
                  XiForm form, Index tx_antennas = 1, Index rx_antennas = 1);

// Build the full estimation output for a posterior without data detection.
EstimationOutput summarize_posterior(const GaussianPosterior& posterior,
                                     std::span<const DdAtom> atoms, Index tx_antennas,
                                     Index rx_antennas);

}  // namespace otfs
