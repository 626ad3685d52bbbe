#pragma once

#include <span>
#include <vector>

#include "otfs/grid.hpp"

namespace otfs {

// All dictionaries share one column enumeration: delay-major, Doppler-minor,
// column i * G_nu + j. MIMO variants append N_t such blocks, TA-major.
struct DictionarySet {
  CMatrix pilot;  // Omega_p, M K2 x M_tau G_nu
  CMatrix data;   // Omega_d, M K1 x M_tau G_nu (empty until data is known)
  CMatrix joint;  // Phi = [Omega_d; Omega_p]
};

// Column c = vec(B_c X) for the atoms of one support. M K x atoms.size().
CMatrix dictionary_from_atoms(const CMatrix& x, std::span<const DdAtom> atoms);

// Omega_p; Omega_p h = vec(H_DD(h) X_p).
CMatrix pilot_dictionary(const CMatrix& x_p, const OtfsGrid& grid, const ChannelSupport& support);

// Omega_d; Omega_d h = vec(H_DD(h) X_d).
CMatrix data_dictionary(const CMatrix& x_d, const OtfsGrid& grid, const ChannelSupport& support);

// Phi = [Omega_d; Omega_p].
CMatrix joint_dictionary(const CMatrix& omega_d, const CMatrix& omega_p);

// [Omega_1 ... Omega_Nt], one block per TA input.
CMatrix mimo_dictionary_from_atoms(std::span<const CMatrix> per_ta, std::span<const DdAtom> atoms);
CMatrix mimo_pilot_dictionary(std::span<const CMatrix> pilots, const OtfsGrid& grid,
                              const ChannelSupport& support);
CMatrix mimo_data_dictionary(std::span<const CMatrix> data, const OtfsGrid& grid,
                             const ChannelSupport& support);

// Column c = vec(B_c); vec(H_DD(h)) = zeta h. M^2 x M_tau G_nu.
CMatrix zeta_matrix(const OtfsGrid& grid, const ChannelSupport& support);

}  // namespace otfs
