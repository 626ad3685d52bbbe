#pragma once

#include <span>
#include <vector>

#include "otfs/grid.hpp"
#include "otfs/precoding.hpp"
#include "otfs/random.hpp"

namespace otfs {

struct MimoConfig {
  Index tx_antennas = 1;
  Index rx_antennas = 1;

  // Throws std::invalid_argument unless both counts are >= 1.
  void validate() const;
};

// Per-antenna-pair path lists on one shared (delay, Doppler) support.
// Pair (r, t) lives at pair_paths[r * N_t + t].
struct MimoChannel {
  MimoConfig antennas;
  std::vector<std::vector<DelayDopplerPath>> pair_paths;

  const std::vector<DelayDopplerPath>& paths(Index rx, Index tx) const;
  std::vector<DelayDopplerPath>& paths(Index rx, Index tx);

  // Throws std::invalid_argument on a wrong pair count or a support that
  // differs between pairs.
  void validate(const OtfsGrid& grid) const;
};

// S = P_tx X_DD F_N^H.
CMatrix otfs_modulate(const CMatrix& x_dd, const OtfsGrid& grid);

// R = H S + W with H from td_channel_matrix and W ~ CN(0, noise_std^2) i.i.d.
CMatrix apply_td_channel(const CMatrix& s, std::span<const DelayDopplerPath> paths,
                         const OtfsGrid& grid, double noise_std, Rng& rng);

// Direct evaluation of r_n(p) = sum_i h_i exp(j 2 pi k_i (p - l_i) / (M N)) s_n([p - l_i]_M).
// Test oracle for apply_td_channel.
CVector sample_level_oracle(const CVector& s_col, std::span<const DelayDopplerPath> paths,
                            const OtfsGrid& grid, Index column);

// Y_DD = P_rx R F_N.
CMatrix otfs_demodulate(const CMatrix& r, const OtfsGrid& grid);

// superimpose -> modulate -> channel + noise -> demodulate.
CMatrix simulate_frame(const DdFrame& frame, const PrecoderPair& pc,
                       std::span<const DelayDopplerPath> paths, const OtfsGrid& grid,
                       double noise_std, Rng& rng);

// Block DD channel, block (r, t) = effective_dd_channel(paths(r, t)); MN_r x MN_t.
CMatrix mimo_dd_channel(const OtfsGrid& grid, const MimoChannel& channel);

// Row-stacked receive frames of all RAs, MN_r x N. Noise is drawn RA by RA
// so the 1x1 case consumes the generator exactly like simulate_frame.
CMatrix simulate_mimo_frame(std::span<const DdFrame> frames, const PrecoderPair& pc,
                            const MimoChannel& channel, const OtfsGrid& grid, double noise_std,
                            Rng& rng);

// Diagonal of the decoupled noise covariance sigma^2 (I_K (x) P_rx P_rx^H),
// repeated over rx_antennas row blocks when stacked.
RVector decoupled_noise_variance(const OtfsGrid& grid, double noise_variance, Index columns);

}  // namespace otfs
