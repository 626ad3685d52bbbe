#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "otfs/estimators.hpp"
#include "otfs/harness/config.hpp"

namespace otfs {

// Everything drawn for one (SNR, trial) pair.
struct TrialData {
  double noise_variance = 0.0;
  MimoChannel channel;
  CMatrix h_true;             // M N_r x M N_t block DD channel
  std::vector<DdFrame> frames;
  IndexMatrix data_indices;   // M N_t x K1, TA blocks stacked by rows
  CMatrix received;           // M N_r x N
  DaBlInputs decoupled;
};

struct SchemeOutcome {
  std::string scheme;
  double nmse = 0.0;
  double mse = 0.0;           // |Hhat_DD - H_DD|_F^2
  double ser = 0.0;
  int em_iterations = 0;
};

struct TrialResult {
  Index snr_index = 0;
  Index trial_index = 0;
  double snr_db = 0.0;
  std::uint64_t master_seed = 0;
  std::vector<SchemeOutcome> schemes;  // config order
  double bcrb = 0.0;                   // raw bound on |Hhat_DD - H_DD|_F^2
  double channel_energy = 0.0;         // |H_DD|_F^2
  bool failed = false;
  std::string error;

  double normalized_bcrb() const { return bcrb / channel_energy; }
  const SchemeOutcome* find(const std::string& scheme) const;
};

// Immutable per-campaign state shared by all trials; run() is safe to call
// concurrently.
class TrialRunner {
 public:
  explicit TrialRunner(ExperimentConfig config);

  const ExperimentConfig& config() const { return config_; }
  const OtfsGrid& grid() const { return grid_; }
  const ChannelSupport& support() const { return support_; }
  const PrecoderPair& precoders() const { return precoders_; }
  const std::vector<DdAtom>& atoms() const { return atoms_; }
  const Constellation& constellation() const { return constellation_; }

  // Deterministic in (master seed, snr_index, trial_index).
  TrialData draw(Index snr_index, Index trial_index) const;
  SchemeOutcome run_scheme(const std::string& scheme, const TrialData& data) const;
  double bcrb(const TrialData& data) const;

  // Never throws; failures are reported through TrialResult::failed.
  TrialResult run(Index snr_index, Index trial_index) const;

 private:
  ExperimentConfig config_;
  OtfsGrid grid_;
  ChannelSupport support_;
  PrecoderPair precoders_;
  std::vector<DdAtom> atoms_;
  CMatrix zeta_;
  Constellation constellation_;
};

TrialResult run_trial(const ExperimentConfig& config, Index snr_index, Index trial_index);

// One row per (SNR, scheme) plus one "bcrb" row per SNR.
struct ResultRow {
  double snr_db = 0.0;
  std::string scheme;
  std::vector<std::pair<std::string, double>> metrics;
  Index n_trials = 0;
};

struct SweepResult {
  std::vector<TrialResult> trials;  // SNR-major, then trial index
  std::vector<ResultRow> rows;
  Index failed_trials = 0;
};

std::vector<ResultRow> aggregate(const ExperimentConfig& config,
                                 const std::vector<TrialResult>& trials);

// threads == 0 uses the hardware concurrency.
SweepResult run_sweep(const ExperimentConfig& config, unsigned threads = 1);

double median(std::vector<double> values);

}  // namespace otfs
