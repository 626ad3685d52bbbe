#include "otfs/harness/invariants.hpp"

#include <algorithm>
#include <cmath>

#include "otfs/bcrb.hpp"
#include "otfs/dictionary.hpp"
#include "otfs/harness/channel_gen.hpp"
#include "otfs/harness/experiment.hpp"
#include "otfs/harness/metrics.hpp"

namespace otfs {

namespace {

class Recorder {
 public:
  void add(std::string name, double measured, double tolerance) {
    checks_.push_back({std::move(name), measured <= tolerance && std::isfinite(measured), measured,
                       tolerance});
  }
  std::vector<InvariantCheck> take() { return std::move(checks_); }

 private:
  std::vector<InvariantCheck> checks_;
};

double max_abs(const CMatrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

}  // namespace

std::vector<InvariantCheck> run_invariant_suite(const ExperimentConfig& config, int draws) {
  config.validate();
  const OtfsGrid grid = config.make_grid();
  const ChannelSupport support = config.make_support();
  const Index m = grid.delay_bins();
  Recorder rec;

  {
    const CMatrix pi = permutation_matrix(m);
    CMatrix power = CMatrix::Identity(m, m);
    for (Index i = 0; i < m; ++i) power = pi * power;
    rec.add("permutation order", max_abs(power - CMatrix::Identity(m, m)), 0.0);
  }
  {
    double worst = 0.0;
    for (Index l = 0; l < m; ++l) {
      const CVector d = delta_power_diagonal(grid, l, 0.37 * static_cast<double>(l + 1));
      worst = std::max(worst, (d.cwiseAbs().array() - 1.0).abs().maxCoeff());
    }
    rec.add("Doppler diagonal unit modulus", worst, 1e-12);
  }

  const bool has_data = config.data_columns > 0;
  if (has_data) {
    const PrecoderPair pc = config.make_precoder_pair();
    const CMatrix& p = pc.pilot;
    const CMatrix& d = pc.data;
    const double dev = std::max(
        {max_abs(p.adjoint() * p - CMatrix::Identity(p.cols(), p.cols())),
         max_abs(d.adjoint() * d - CMatrix::Identity(d.cols(), d.cols())),
         max_abs(p.adjoint() * d)});
    rec.add("precoder semi-orthogonality", dev, 1e-10);
  }

  const TrialRunner runner(config);
  const CMatrix zeta = zeta_matrix(grid, support);
  double chain = 0.0, decoupling = 0.0, oracle = 0.0, dict = 0.0, recon = 0.0, em_one = 0.0;
  double xi_herm = 0.0, xi_psd = 0.0, bcrb_excess = 0.0;
  for (int draw = 0; draw < draws; ++draw) {
    const TrialData data = runner.draw(0, draw);
    Rng rng = Rng::derive(config.seed, 0xC0FFEE, static_cast<std::uint64_t>(draw));

    // Noise-free chain against the block matrix model.
    const CMatrix clean = simulate_mimo_frame(data.frames, runner.precoders(), data.channel, grid,
                                              0.0, rng);
    CMatrix x_stacked(m * config.tx_antennas, grid.doppler_bins());
    for (Index t = 0; t < config.tx_antennas; ++t) {
      x_stacked.middleRows(t * m, m) =
          superimpose(data.frames[static_cast<std::size_t>(t)], runner.precoders());
    }
    chain = std::max(chain, max_abs(clean - data.h_true * x_stacked));

    if (has_data) {
      CMatrix x_p(m * config.tx_antennas, config.pilot_columns);
      for (Index t = 0; t < config.tx_antennas; ++t) {
        x_p.middleRows(t * m, m) = data.frames[static_cast<std::size_t>(t)].pilots;
      }
      decoupling = std::max(decoupling,
                            max_abs(decouple(data.h_true * x_p * runner.precoders().pilot.adjoint(),
                                             runner.precoders().data)));
    }

    const auto& paths = data.channel.paths(0, 0);
    const CMatrix s = rng.complex_normal(m, grid.doppler_bins());
    const CMatrix hs = td_channel_matrix(grid, paths) * s;
    for (Index c = 0; c < grid.doppler_bins(); ++c) {
      oracle = std::max(oracle, max_abs(sample_level_oracle(s.col(c), paths, grid, c) - hs.col(c)));
    }

    const CVector h = rng.complex_normal(support.size(), 1);
    const CMatrix h_dd = reconstruct_dd_channel(h, runner.atoms());
    const CMatrix& x_p = data.frames.front().pilots;
    const CMatrix omega_p = pilot_dictionary(x_p, grid, support);
    dict = std::max(dict, max_abs(omega_p * h - vec(h_dd * x_p)));
    recon = std::max(recon, max_abs(zeta * h - vec(h_dd)));

    const RVector noise = decoupled_noise_variance(grid, 0.1, config.pilot_columns);
    const CVector y = omega_p * h + rng.complex_normal(omega_p.rows(), 1, 0.1);
    EmSettings one = config.em;
    one.max_iterations = 1;
    const GaussianPosterior post = pa_bl_siso(y, omega_p, noise, one);
    const CVector lmmse =
        lmmse_channel_estimate(y, omega_p, noise, RVector::Ones(support.size()));
    em_one = std::max(em_one, max_abs(post.mean_vector() - lmmse) / std::max(1.0, lmmse.norm()));

    const CMatrix xi = xi_matrix(post.covariance, runner.atoms(), XiForm::kGram);
    xi_herm = std::max(xi_herm, max_abs(xi - xi.adjoint()));
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(xi);
    xi_psd = std::max(xi_psd, std::max(0.0, -eig.eigenvalues().minCoeff()) /
                                  std::max(1.0, xi.trace().real()));

    BcrbInput in{omega_p, noise, post.hyperparams, zeta, 1, 1};
    BcrbInput prior = in;
    prior.phi.setZero();
    bcrb_excess = std::max(bcrb_excess, bcrb_siso(in) - bcrb_siso(prior));
  }
  rec.add("modem chain equals block matrix model", chain, 1e-10);
  if (has_data) rec.add("pilot/data decoupling", decoupling, 1e-9);
  rec.add("sample-level oracle", oracle, 1e-10);
  rec.add("pilot dictionary oracle", dict, 1e-10);
  rec.add("zeta reconstruction", recon, 1e-12);
  rec.add("single EM iteration equals LMMSE", em_one, 1e-10);
  rec.add("uncertainty matrix Hermitian", xi_herm, 1e-10);
  rec.add("uncertainty matrix PSD", xi_psd, 1e-8);
  rec.add("BCRB below prior-only bound", std::max(0.0, bcrb_excess), 1e-12);

  const EfficiencyReport eff = efficiency(config);
  rec.add("efficiency in [0, 1]", (eff.ap_sip >= 0.0 && eff.ap_sip <= 1.0) ? 0.0 : 1.0, 0.0);
  return rec.take();
}

}  // namespace otfs
