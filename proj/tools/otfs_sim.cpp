// otfs_sim: Monte Carlo driver for the AP-SIP OTFS estimators.
//
//   otfs_sim run --config cfg --out results.csv [--threads n] [--seed s]
//   otfs_sim bcrb --config cfg
//   otfs_sim efficiency --config cfg [--tx-antennas n]
//   otfs_sim validate --config cfg
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "otfs/errors.hpp"
#include "otfs/harness/config.hpp"
#include "otfs/harness/csv.hpp"
#include "otfs/harness/experiment.hpp"
#include "otfs/harness/invariants.hpp"
#include "otfs/harness/metrics.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

int cmd_run(const std::string& config_path, const std::string& out_path, unsigned threads,
            const std::optional<std::uint64_t>& seed) {
  otfs::ExperimentConfig cfg = otfs::load_config(config_path);
  if (seed) cfg.seed = *seed;
  const otfs::SweepResult result = otfs::run_sweep(cfg, threads);
  otfs::write_csv_file(out_path, result.rows, cfg.seed);
  for (const auto& t : result.trials) {
    if (t.failed) {
      std::fprintf(stderr, "trial failed: snr=%s trial=%lld: %s\n",
                   otfs::format_value(t.snr_db).c_str(), static_cast<long long>(t.trial_index),
                   t.error.c_str());
    }
  }
  std::printf("%s: %lld trials, %lld failed, wrote %s\n", cfg.name.c_str(),
              static_cast<long long>(result.trials.size()),
              static_cast<long long>(result.failed_trials), out_path.c_str());
  return result.failed_trials > 0 ? kExitNumerical : 0;
}

int cmd_bcrb(const std::string& config_path, unsigned threads) {
  otfs::ExperimentConfig cfg = otfs::load_config(config_path);
  cfg.schemes = {"perfect_csi"};
  const otfs::SweepResult result = otfs::run_sweep(cfg, threads);
  std::printf("snr_db,normalized_bcrb,n_trials\n");
  for (const auto& row : result.rows) {
    if (row.scheme != "bcrb") continue;
    std::printf("%s,%s,%lld\n", otfs::format_value(row.snr_db).c_str(),
                otfs::format_value(row.metrics.front().second).c_str(),
                static_cast<long long>(row.n_trials));
  }
  return result.failed_trials > 0 ? kExitNumerical : 0;
}

int cmd_efficiency(const std::string& config_path, long long tx_antennas) {
  const otfs::ExperimentConfig cfg = otfs::load_config(config_path);
  const otfs::EfficiencyReport r = otfs::efficiency(cfg, static_cast<otfs::Index>(tx_antennas));
  std::printf("%s\n", cfg.name.c_str());
  std::printf("S_e AP-SIP  = %.4f\n", r.ap_sip);
  std::printf("S_e EP-SISO = %.4f\n", r.ep_siso);
  std::printf("S_e EP-MIMO = %.4f (N_t = %lld)\n", r.ep_mimo, static_cast<long long>(r.tx_antennas));
  return 0;
}

int cmd_validate(const std::string& config_path) {
  const otfs::ExperimentConfig cfg = otfs::load_config(config_path);
  int failures = 0;
  for (const auto& c : otfs::run_invariant_suite(cfg)) {
    std::printf("%s  %-40s measured=%s tol=%s\n", c.passed ? "PASS" : "FAIL", c.name.c_str(),
                otfs::format_value(c.measured).c_str(), otfs::format_value(c.tolerance).c_str());
    failures += c.passed ? 0 : 1;
  }
  return failures > 0 ? kExitNumerical : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"AP-SIP OTFS channel estimation simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  unsigned threads = 1;
  std::optional<std::uint64_t> seed;
  long long tx_antennas = 0;

  auto* run = app.add_subcommand("run", "Monte Carlo sweep, writes a long-format CSV");
  run->add_option("--config", config_path, "config file")->required();
  run->add_option("--out", out_path, "output CSV path")->required();
  run->add_option("--threads", threads, "worker threads (0 = all cores)");
  run->add_option("--seed", seed, "override the master seed");

  auto* bcrb = app.add_subcommand("bcrb", "mean normalized BCRB per SNR");
  bcrb->add_option("--config", config_path, "config file")->required();
  bcrb->add_option("--threads", threads, "worker threads (0 = all cores)");

  auto* eff = app.add_subcommand("efficiency", "pilot-overhead efficiency figures");
  eff->add_option("--config", config_path, "config file")->required();
  eff->add_option("--tx-antennas", tx_antennas, "N_t for the EP-MIMO figure (default: config)");

  auto* val = app.add_subcommand("validate", "invariant suite at the configured sizes");
  val->add_option("--config", config_path, "config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run) return cmd_run(config_path, out_path, threads, seed);
    if (*bcrb) return cmd_bcrb(config_path, threads);
    if (*eff) return cmd_efficiency(config_path, tx_antennas);
    if (*val) return cmd_validate(config_path);
  } catch (const otfs::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const otfs::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return 0;
}
