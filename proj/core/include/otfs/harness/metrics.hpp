#pragma once

#include "otfs/detection.hpp"
#include "otfs/harness/config.hpp"

namespace otfs {

// |estimate - truth|^2 / |truth|^2 over all entries. Throws
// std::invalid_argument on a shape mismatch or an all-zero truth.
double nmse(const CMatrix& estimate, const CMatrix& truth);

// Fraction of mismatched entries.
double ser(const IndexMatrix& detected, const IndexMatrix& truth);

struct EfficiencyReport {
  double ap_sip = 0.0;   // 1 - K2 / N
  double ep_siso = 0.0;  // 1 - (2 M_tau + 1)(2 N_nu + 1) / (M N)
  double ep_mimo = 0.0;  // 1 - (N_t M_tau + M_tau + N_t)(2 N_nu + 1) / (M N N_t)
  Index tx_antennas = 1;
};

// tx_antennas <= 0 uses the config's value for the EP-MIMO figure.
EfficiencyReport efficiency(const ExperimentConfig& config, Index tx_antennas = 0);

}  // namespace otfs
