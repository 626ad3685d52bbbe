#include "otfs/harness/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "otfs/bcrb.hpp"
#include "otfs/dictionary.hpp"
#include "otfs/errors.hpp"
#include "otfs/harness/channel_gen.hpp"
#include "otfs/harness/metrics.hpp"

namespace otfs {

const SchemeOutcome* TrialResult::find(const std::string& scheme) const {
  for (const auto& s : schemes) {
    if (s.scheme == scheme) return &s;
  }
  return nullptr;
}

TrialRunner::TrialRunner(ExperimentConfig config)
    : config_((config.validate(), std::move(config))),
      grid_(config_.make_grid()),
      support_(config_.make_support()),
      precoders_(config_.make_precoder_pair()),
      atoms_(support_atoms(grid_, support_)),
      zeta_(zeta_matrix(grid_, support_)),
      constellation_(config_.modulation) {}

TrialData TrialRunner::draw(Index snr_index, Index trial_index) const {
  const Index m = grid_.delay_bins();
  const Index nt = config_.tx_antennas;
  const Index nr = config_.rx_antennas;
  const Index k1 = config_.data_columns;
  const Index k2 = config_.pilot_columns;
  const double snr = config_.snr_db.at(static_cast<std::size_t>(snr_index));

  Rng rng = Rng::derive(config_.seed, static_cast<std::uint64_t>(snr_index),
                        static_cast<std::uint64_t>(trial_index));
  TrialData d;
  d.noise_variance = std::pow(10.0, -snr / 10.0);
  d.channel = generate_channel(config_, rng);
  d.h_true = mimo_dd_channel(grid_, d.channel);

  const double data_scale = std::sqrt(config_.data_power);
  d.data_indices.resize(m * nt, k1);
  for (Index t = 0; t < nt; ++t) {
    DdFrame frame;
    frame.data_power = config_.data_power;
    frame.pilot_power = config_.pilot_power;
    const IndexMatrix idx = random_indices(m, k1, constellation_, rng);
    d.data_indices.middleRows(t * m, m) = idx;
    frame.data = map_symbols(idx, constellation_, data_scale);
    frame.pilots = qpsk_pilots(m, k2, config_.pilot_power, rng);
    d.frames.push_back(std::move(frame));
  }
  d.received = simulate_mimo_frame(d.frames, precoders_, d.channel, grid_,
                                   std::sqrt(d.noise_variance), rng);

  d.decoupled.noise_variance = d.noise_variance;
  d.decoupled.data_power = config_.data_power;
  d.decoupled.y_data = decouple(d.received, precoders_.data);
  d.decoupled.y_pilot.resize(m * k2, nr);
  for (Index r = 0; r < nr; ++r) {
    d.decoupled.y_pilot.col(r) = vec(decouple(d.received.middleRows(r * m, m), precoders_.pilot));
  }
  for (const auto& f : d.frames) d.decoupled.pilots.push_back(f.pilots);
  return d;
}

SchemeOutcome TrialRunner::run_scheme(const std::string& scheme, const TrialData& data) const {
  const Index nt = config_.tx_antennas;
  const Index nr = config_.rx_antennas;
  const double scale = std::sqrt(config_.data_power);
  const RVector rx_noise =
      (data.noise_variance * grid_.rx_pulse_power()).replicate(nr, 1);

  SchemeOutcome out;
  out.scheme = scheme;
  CMatrix h_hat;
  IndexMatrix detected;
  auto lmmse_with = [&](const CMatrix& h) {
    const CMatrix x = lmmse_detect(data.decoupled.y_data, h, rx_noise, config_.data_power);
    return demap(x, constellation_, scale);
  };

  if (scheme == "perfect_csi") {
    h_hat = data.h_true;
    detected = lmmse_with(h_hat);
  } else if (scheme == "mmse" || scheme == "pa_bl") {
    const CMatrix omega_p = mimo_dictionary_from_atoms(data.decoupled.pilots, atoms_);
    const RVector noise_p =
        decoupled_noise_variance(grid_, data.noise_variance, config_.pilot_columns);
    CMatrix mean(omega_p.cols(), nr);
    if (scheme == "mmse") {
      // Unknown channel covariance, so the prior is the identity.
      const RVector prior = RVector::Ones(omega_p.cols());
      for (Index r = 0; r < nr; ++r) {
        mean.col(r) = lmmse_channel_estimate(data.decoupled.y_pilot.col(r), omega_p, noise_p, prior);
      }
    } else {
      const GaussianPosterior post =
          pa_bl_mimo(data.decoupled.y_pilot, omega_p, noise_p, config_.em, nt, nr);
      mean = post.mean;
      out.em_iterations = post.iterations;
    }
    h_hat = reconstruct_mimo_dd_channel(mean, atoms_, nt, nr);
    detected = lmmse_with(h_hat);
  } else if (scheme == "da_bl_zf" || scheme == "da_bl_lmmse") {
    const DetectorRule rule =
        scheme == "da_bl_zf" ? DetectorRule::kZfUncertainty : DetectorRule::kLmmseUncertainty;
    const EstimationOutput est =
        da_bl(data.decoupled, grid_, support_, constellation_, rule, config_.em);
    h_hat = est.channel;
    detected = est.detected_indices;
    out.em_iterations = est.iterations;
  } else {
    throw ConfigError("unknown scheme '" + scheme + "'");
  }
  out.mse = (h_hat - data.h_true).squaredNorm();
  out.nmse = nmse(h_hat, data.h_true);
  out.ser = ser(detected, data.data_indices);
  return out;
}

double TrialRunner::bcrb(const TrialData& data) const {
  const Index m = grid_.delay_bins();
  const Index nt = config_.tx_antennas;
  const Index nr = config_.rx_antennas;
  const Index n = support_.size();

  // Grid coefficients of every pair; exact for on-grid channels and the
  // least-squares fit otherwise.
  CMatrix coeffs(n, nr * nt);
  const auto qr = zeta_.colPivHouseholderQr();
  for (Index r = 0; r < nr; ++r) {
    for (Index t = 0; t < nt; ++t) {
      coeffs.col(r * nt + t) = qr.solve(vec(data.h_true.block(r * m, t * m, m, m)));
    }
  }

  BcrbInput in;
  const CMatrix omega_p = mimo_dictionary_from_atoms(data.decoupled.pilots, atoms_);
  if (config_.data_columns > 0) {
    std::vector<CMatrix> data_blocks;
    for (const auto& f : data.frames) data_blocks.push_back(f.data);
    in.phi = joint_dictionary(mimo_dictionary_from_atoms(data_blocks, atoms_), omega_p);
  } else {
    in.phi = omega_p;
  }
  in.noise_var = decoupled_noise_variance(grid_, data.noise_variance,
                                          config_.data_columns + config_.pilot_columns);
  in.lambda = true_hyperparameters(coeffs, config_.em.lambda_floor);
  in.zeta = zeta_;
  in.tx_antennas = nt;
  in.rx_antennas = nr;
  return bcrb_mimo(in);
}

TrialResult TrialRunner::run(Index snr_index, Index trial_index) const {
  TrialResult res;
  res.snr_index = snr_index;
  res.trial_index = trial_index;
  res.snr_db = config_.snr_db.at(static_cast<std::size_t>(snr_index));
  res.master_seed = config_.seed;
  try {
    const TrialData data = draw(snr_index, trial_index);
    res.channel_energy = data.h_true.squaredNorm();
    for (const auto& s : config_.schemes) res.schemes.push_back(run_scheme(s, data));
    res.bcrb = bcrb(data);
  } catch (const std::exception& e) {
    res.failed = true;
    res.error = e.what();
  }
  return res;
}

TrialResult run_trial(const ExperimentConfig& config, Index snr_index, Index trial_index) {
  return TrialRunner(config).run(snr_index, trial_index);
}

double median(std::vector<double> values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return values[mid];
  return 0.5 * (values[mid - 1] + values[mid]);
}

namespace {

double mean(const std::vector<double>& values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

}  // namespace

std::vector<ResultRow> aggregate(const ExperimentConfig& config,
                                 const std::vector<TrialResult>& trials) {
  std::vector<ResultRow> rows;
  for (std::size_t si = 0; si < config.snr_db.size(); ++si) {
    std::vector<const TrialResult*> ok;
    for (const auto& t : trials) {
      if (t.snr_index == static_cast<Index>(si) && !t.failed) ok.push_back(&t);
    }
    const Index count = static_cast<Index>(ok.size());
    for (std::size_t k = 0; k < config.schemes.size(); ++k) {
      std::vector<double> nm, se, it;
      for (const auto* t : ok) {
        nm.push_back(t->schemes[k].nmse);
        se.push_back(t->schemes[k].ser);
        it.push_back(static_cast<double>(t->schemes[k].em_iterations));
      }
      rows.push_back({config.snr_db[si], config.schemes[k],
                      {{"nmse_mean", mean(nm)},
                       {"nmse_median", median(nm)},
                       {"ser_mean", mean(se)},
                       {"em_iters_mean", mean(it)}},
                      count});
    }
    std::vector<double> bound;
    for (const auto* t : ok) bound.push_back(t->normalized_bcrb());
    rows.push_back({config.snr_db[si], "bcrb", {{"bcrb", mean(bound)}}, count});
  }
  return rows;
}

SweepResult run_sweep(const ExperimentConfig& config, unsigned threads) {
  const TrialRunner runner(config);
  const Index n_snr = static_cast<Index>(config.snr_db.size());
  const Index total = n_snr * config.trials;
  SweepResult out;
  out.trials.resize(static_cast<std::size_t>(total));

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<Index>(threads, total));
  std::atomic<Index> next{0};
  auto worker = [&] {
    for (Index i = next.fetch_add(1); i < total; i = next.fetch_add(1)) {
      out.trials[static_cast<std::size_t>(i)] = runner.run(i / config.trials, i % config.trials);
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (const auto& t : out.trials) out.failed_trials += t.failed ? 1 : 0;
  out.rows = aggregate(config, out.trials);
  return out;
}

}  // namespace otfs
