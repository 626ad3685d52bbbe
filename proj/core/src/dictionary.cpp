#include "otfs/dictionary.hpp"

#include <stdexcept>

namespace otfs {

CMatrix dictionary_from_atoms(const CMatrix& x, std::span<const DdAtom> atoms) {
  const Index n_atoms = static_cast<Index>(atoms.size());
  if (n_atoms == 0) throw std::invalid_argument("dictionary needs at least one atom");
  const Index m = atoms.front().size();
  if (x.rows() != m) throw std::invalid_argument("dictionary input must have M rows");
  CMatrix omega(m * x.cols(), n_atoms);
  for (Index c = 0; c < n_atoms; ++c) {
    const DdAtom& atom = atoms[static_cast<std::size_t>(c)];
    for (Index k = 0; k < x.cols(); ++k) {
      for (Index p = 0; p < m; ++p) {
        omega(k * m + p, c) = atom.weights()(p) * x(atom.source_column(p), k);
      }
    }
  }
  return omega;
}

CMatrix pilot_dictionary(const CMatrix& x_p, const OtfsGrid& grid, const ChannelSupport& support) {
  const auto atoms = support_atoms(grid, support);
  return dictionary_from_atoms(x_p, atoms);
}

CMatrix data_dictionary(const CMatrix& x_d, const OtfsGrid& grid, const ChannelSupport& support) {
  const auto atoms = support_atoms(grid, support);
  return dictionary_from_atoms(x_d, atoms);
}

CMatrix joint_dictionary(const CMatrix& omega_d, const CMatrix& omega_p) {
  if (omega_d.cols() != omega_p.cols()) {
    throw std::invalid_argument("joint_dictionary: column counts differ");
  }
  CMatrix phi(omega_d.rows() + omega_p.rows(), omega_p.cols());
  phi << omega_d, omega_p;
  return phi;
}

CMatrix mimo_dictionary_from_atoms(std::span<const CMatrix> per_ta, std::span<const DdAtom> atoms) {
  if (per_ta.empty()) throw std::invalid_argument("MIMO dictionary needs at least one TA");
  const Index width = static_cast<Index>(atoms.size());
  const Index rows = per_ta.front().rows() * per_ta.front().cols();
  CMatrix omega(rows, width * static_cast<Index>(per_ta.size()));
  for (std::size_t t = 0; t < per_ta.size(); ++t) {
    if (per_ta[t].rows() * per_ta[t].cols() != rows || per_ta[t].cols() != per_ta.front().cols()) {
      throw std::invalid_argument("MIMO dictionary: per-TA inputs differ in shape");
    }
    omega.middleCols(static_cast<Index>(t) * width, width) = dictionary_from_atoms(per_ta[t], atoms);
  }
  return omega;
}

CMatrix mimo_pilot_dictionary(std::span<const CMatrix> pilots, const OtfsGrid& grid,
                              const ChannelSupport& support) {
  const auto atoms = support_atoms(grid, support);
  return mimo_dictionary_from_atoms(pilots, atoms);
}

CMatrix mimo_data_dictionary(std::span<const CMatrix> data, const OtfsGrid& grid,
                             const ChannelSupport& support) {
  const auto atoms = support_atoms(grid, support);
  return mimo_dictionary_from_atoms(data, atoms);
}

CMatrix zeta_matrix(const OtfsGrid& grid, const ChannelSupport& support) {
  const auto atoms = support_atoms(grid, support);
  const Index m = grid.delay_bins();
  CMatrix zeta = CMatrix::Zero(m * m, static_cast<Index>(atoms.size()));
  for (std::size_t c = 0; c < atoms.size(); ++c) {
    const DdAtom& atom = atoms[c];
    for (Index p = 0; p < m; ++p) {
      zeta(atom.source_column(p) * m + p, static_cast<Index>(c)) = atom.weights()(p);
    }
  }
  return zeta;
}

}  // namespace otfs
