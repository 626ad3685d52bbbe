#include <stdexcept>

#include "linalg.hpp"
#include "otfs/estimators.hpp"

namespace otfs {

namespace {

Index atom_size(std::span<const DdAtom> atoms) {
  if (atoms.empty()) throw std::invalid_argument("empty atom list");
  return atoms.front().size();
}

// out += sum_{c,d} coef(c, d) B_c^H B_d, where coef is an n x n view.
template <typename Coef>
void add_gram_block(const Coef& coef, std::span<const DdAtom> atoms, Eigen::Ref<CMatrix> out) {
  const Index n = static_cast<Index>(atoms.size());
  const Index m = atom_size(atoms);
  for (Index c = 0; c < n; ++c) {
    const DdAtom& bc = atoms[static_cast<std::size_t>(c)];
    for (Index d = 0; d < n; ++d) {
      const Complex k = coef(c, d);
      if (k == Complex(0.0, 0.0)) continue;
      const DdAtom& bd = atoms[static_cast<std::size_t>(d)];
      for (Index p = 0; p < m; ++p) {
        out(bc.source_column(p), bd.source_column(p)) +=
            k * std::conj(bc.weights()(p)) * bd.weights()(p);
      }
    }
  }
}

// out += sum_{c,d} coef(c, d) B_c B_d^H.
template <typename Coef>
void add_outer_block(const Coef& coef, std::span<const DdAtom> atoms, Eigen::Ref<CMatrix> out) {
  const Index n = static_cast<Index>(atoms.size());
  const Index m = atom_size(atoms);
  for (Index c = 0; c < n; ++c) {
    const DdAtom& bc = atoms[static_cast<std::size_t>(c)];
    for (Index d = 0; d < n; ++d) {
      const Complex k = coef(c, d);
      if (k == Complex(0.0, 0.0)) continue;
      const DdAtom& bd = atoms[static_cast<std::size_t>(d)];
      for (Index a = 0; a < m; ++a) {
        const Index b = ((a - bc.shift() + bd.shift()) % m + m) % m;
        out(a, b) += k * bc.weights()(a) * std::conj(bd.weights()(b));
      }
    }
  }
}

}  // namespace

CMatrix reconstruct_dd_channel(const CVector& h, std::span<const DdAtom> atoms) {
  const Index m = atom_size(atoms);
  if (h.size() != static_cast<Index>(atoms.size())) {
    throw std::invalid_argument("reconstruct_dd_channel: coefficient length mismatch");
  }
  CMatrix out = CMatrix::Zero(m, m);
  for (std::size_t c = 0; c < atoms.size(); ++c) {
    const DdAtom& atom = atoms[c];
    const Complex hc = h(static_cast<Index>(c));
    for (Index p = 0; p < m; ++p) out(p, atom.source_column(p)) += hc * atom.weights()(p);
  }
  return out;
}

CMatrix reconstruct_dd_channel(const CVector& h, const OtfsGrid& grid,
                               const ChannelSupport& support) {
  const auto atoms = support_atoms(grid, support);
  return reconstruct_dd_channel(h, atoms);
}

CMatrix reconstruct_mimo_dd_channel(const CMatrix& mean, std::span<const DdAtom> atoms,
                                    Index tx_antennas, Index rx_antennas) {
  const Index n = static_cast<Index>(atoms.size());
  const Index m = atom_size(atoms);
  if (mean.rows() != n * tx_antennas || mean.cols() != rx_antennas) {
    throw std::invalid_argument("reconstruct_mimo_dd_channel: coefficient shape mismatch");
  }
  CMatrix out(m * rx_antennas, m * tx_antennas);
  for (Index r = 0; r < rx_antennas; ++r) {
    for (Index t = 0; t < tx_antennas; ++t) {
      out.block(r * m, t * m, m, m) =
          reconstruct_dd_channel(mean.col(r).segment(t * n, n), atoms);
    }
  }
  return out;
}

CMatrix reconstruct_mimo_dd_channel(const CMatrix& mean, const OtfsGrid& grid,
                                    const ChannelSupport& support, Index tx_antennas,
                                    Index rx_antennas) {
  const auto atoms = support_atoms(grid, support);
  return reconstruct_mimo_dd_channel(mean, atoms, tx_antennas, rx_antennas);
}

CMatrix xi_matrix(const CMatrix& covariance, std::span<const DdAtom> atoms, XiForm form,
                  Index tx_antennas, Index rx_antennas) {
  const Index n = static_cast<Index>(atoms.size());
  const Index m = atom_size(atoms);
  if (tx_antennas < 1 || rx_antennas < 1 || covariance.rows() != n * tx_antennas ||
      covariance.cols() != n * tx_antennas) {
    throw std::invalid_argument("xi_matrix: covariance shape mismatch");
  }
  if (form == XiForm::kGram) {
    // Block (t, t') = N_r sum_{c,d} Sigma[(t', d), (t, c)] B_c^H B_d.
    CMatrix xi = CMatrix::Zero(m * tx_antennas, m * tx_antennas);
    for (Index t = 0; t < tx_antennas; ++t) {
      for (Index u = 0; u < tx_antennas; ++u) {
        const CMatrix coef =
            static_cast<double>(rx_antennas) * covariance.block(u * n, t * n, n, n).transpose();
        add_gram_block(coef, atoms, xi.block(t * m, u * m, m, m));
      }
    }
    return detail::hermitian_part(xi);
  }
  // Every RA block equals sum_t sum_{c,d} Sigma[(t, c), (t, d)] B_c B_d^H;
  // distinct RAs have independent errors.
  CMatrix block = CMatrix::Zero(m, m);
  for (Index t = 0; t < tx_antennas; ++t) {
    add_outer_block(covariance.block(t * n, t * n, n, n), atoms, block);
  }
  block = detail::hermitian_part(block);
  CMatrix xi = CMatrix::Zero(m * rx_antennas, m * rx_antennas);
  for (Index r = 0; r < rx_antennas; ++r) xi.block(r * m, r * m, m, m) = block;
  return xi;
}

CMatrix xi_matrix(const CMatrix& covariance, const OtfsGrid& grid, const ChannelSupport& support,
                  XiForm form, Index tx_antennas, Index rx_antennas) {
  const auto atoms = support_atoms(grid, support);
  return xi_matrix(covariance, atoms, form, tx_antennas, rx_antennas);
}

EstimationOutput summarize_posterior(const GaussianPosterior& posterior,
                                     std::span<const DdAtom> atoms, Index tx_antennas,
                                     Index rx_antennas) {
  EstimationOutput out;
  out.coefficients = posterior.mean;
  out.channel = reconstruct_mimo_dd_channel(posterior.mean, atoms, tx_antennas, rx_antennas);
  out.xi_gram = xi_matrix(posterior.covariance, atoms, XiForm::kGram, tx_antennas, rx_antennas);
  out.xi_outer = xi_matrix(posterior.covariance, atoms, XiForm::kOuter, tx_antennas, rx_antennas);
  out.hyperparams = posterior.hyperparams;
  out.iterations = posterior.iterations;
  out.pilot_iterations = posterior.iterations;
  return out;
}

}  // namespace otfs
