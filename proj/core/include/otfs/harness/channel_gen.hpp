#pragma once

#include <vector>

#include "otfs/harness/config.hpp"
#include "otfs/modem.hpp"
#include "otfs/random.hpp"

namespace otfs {

// Fixed-profile conversion: tap l = round(tau M df), Doppler index
// k = nu N T (rounded in integer mode). Gains come from the profile when
// given, otherwise they are left at 1. Throws ConfigError when a tap falls
// outside [0, M_tau) or a Doppler index outside [0, N_nu).
std::vector<DelayDopplerPath> profile_paths(const ExperimentConfig& config);

// Draws one channel realisation for every antenna pair on a shared support.
// Random gains are CN(0, 1/L_p); a fixed profile with listed gains g_i uses
// g_i directly for SISO and CN(0, |g_i|^2) per pair for MIMO.
MimoChannel generate_channel(const ExperimentConfig& config, Rng& rng);

}  // namespace otfs
