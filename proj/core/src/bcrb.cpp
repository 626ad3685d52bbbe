#include "otfs/bcrb.hpp"

#include <stdexcept>

#include "linalg.hpp"

namespace otfs {

namespace {

// J^-1 through J^-1 = S (I + S A S)^-1 S, S = diag(sqrt(prior)), which stays
// accurate when prior entries sit at the floor.
CMatrix inverse_information(const BcrbInput& in) {
  const Index width = in.lambda.size() * in.tx_antennas;
  if (in.phi.cols() != width || in.noise_var.size() != in.phi.rows() ||
      in.zeta.cols() != in.lambda.size()) {
    throw std::invalid_argument("bcrb: shape mismatch");
  }
  if ((in.noise_var.array() <= 0.0).any() || (in.lambda.array() <= 0.0).any()) {
    throw NumericalError("bcrb: covariances must be positive");
  }
  const RVector s = in.lambda.replicate(in.tx_antennas, 1).cwiseSqrt();
  const CMatrix phi_s = in.noise_var.cwiseSqrt().cwiseInverse().asDiagonal() * in.phi * s.asDiagonal();
  CMatrix b = phi_s.adjoint() * phi_s;
  b.diagonal().array() += 1.0;
  const CMatrix b_inv =
      detail::solve_hpd(detail::hermitian_part(b), CMatrix::Identity(width, width), "bcrb");
  return s.asDiagonal() * b_inv * s.asDiagonal();
}

}  // namespace

double bcrb_siso(const BcrbInput& input) {
  if (input.tx_antennas != 1 || input.rx_antennas != 1) {
    throw std::invalid_argument("bcrb_siso: use bcrb_mimo for several antennas");
  }
  return bcrb_mimo(input);
}

double bcrb_mimo(const BcrbInput& input) {
  if (input.tx_antennas < 1 || input.rx_antennas < 1) {
    throw std::invalid_argument("bcrb: antenna counts must be >= 1");
  }
  const CMatrix j_inv = inverse_information(input);
  const CMatrix zeta_gram = input.zeta.adjoint() * input.zeta;
  const Index n = input.lambda.size();
  double total = 0.0;
  for (Index t = 0; t < input.tx_antennas; ++t) {
    // Tr{zeta X zeta^H} = Tr{X zeta^H zeta}.
    total += (j_inv.block(t * n, t * n, n, n).cwiseProduct(zeta_gram.transpose())).sum().real();
  }
  return static_cast<double>(input.rx_antennas) * total;
}

RVector true_hyperparameters(const CMatrix& coefficients, double lambda_floor) {
  const RVector power = coefficients.cwiseAbs2().rowwise().mean();
  return power.cwiseMax(lambda_floor);
}

CVector project_onto_grid(const CMatrix& h_dd, const CMatrix& zeta) {
  if (zeta.rows() != h_dd.size()) throw std::invalid_argument("project_onto_grid: shape mismatch");
  return zeta.colPivHouseholderQr().solve(vec(h_dd));
}

}  // namespace otfs
