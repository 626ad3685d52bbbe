#pragma once

#include "otfs/types.hpp"

namespace otfs {

// Observation model y = Phi h + v, v ~ CN(0, diag(noise_var)), prior
// h ~ CN(0, I_{N_t} (x) diag(lambda)), target vec(H_DD) = (I (x) zeta) h.
struct BcrbInput {
  CMatrix phi;
  RVector noise_var;
  RVector lambda;  // one entry per grid cell
  CMatrix zeta;
  Index tx_antennas = 1;
  Index rx_antennas = 1;
};

// Tr{zeta J^-1 zeta^H}, J = Phi^H R^-1 Phi + Lambda^-1.
double bcrb_siso(const BcrbInput& input);

// N_r sum_t Tr{zeta [J^-1]_{tt} zeta^H}, J = Phi^H R^-1 Phi + I_{N_t} (x) Lambda^-1.
double bcrb_mimo(const BcrbInput& input);

// lambda_i = |h_i|^2 on the support, lambda_floor elsewhere. For several
// antenna pairs (columns of coefficients) |h_i|^2 is averaged across pairs.
RVector true_hyperparameters(const CMatrix& coefficients, double lambda_floor);

// Least-squares coefficients c minimising |vec(H_DD) - zeta c|.
CVector project_onto_grid(const CMatrix& h_dd, const CMatrix& zeta);

}  // namespace otfs
