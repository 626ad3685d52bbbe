#pragma once

#include <cstdint>

#include "otfs/random.hpp"
#include "otfs/types.hpp"

namespace otfs {

enum class UnitarySource { kFourier, kIdentity, kRandom };

// Unitary N-point DFT, F(a, b) = exp(-j 2 pi a b / N) / sqrt(N).
CMatrix fourier_matrix(Index size);

// N x N unitary matrix of the requested kind. kRandom is Haar-distributed
// (QR of a seeded complex Gaussian matrix with the R-diagonal phases removed).
CMatrix unitary_matrix(Index size, UnitarySource source, std::uint64_t seed = 0);

// Semi-orthogonal column blocks of one unitary matrix: P holds the first K2
// columns and D the remaining K1.
struct PrecoderPair {
  CMatrix pilot;  // N x K2
  CMatrix data;   // N x K1

  Index pilot_columns() const { return pilot.cols(); }
  Index data_columns() const { return data.cols(); }
  Index frame_columns() const { return pilot.rows(); }
};

// Throws std::invalid_argument unless 1 <= K2 < N.
PrecoderPair make_precoders(Index doppler_bins, Index pilot_columns,
                            UnitarySource source = UnitarySource::kFourier,
                            std::uint64_t seed = 0);

struct DdFrame {
  CMatrix data;    // M x K1
  CMatrix pilots;  // M x K2
  double data_power = 0.5;
  double pilot_power = 0.5;
};

// Unit-modulus QPSK symbols scaled to power pilot_power.
CMatrix qpsk_pilots(Index delay_bins, Index pilot_columns, double pilot_power, Rng& rng);

// X_DD = X_d D^H + X_p P^H.
CMatrix superimpose(const DdFrame& frame, const PrecoderPair& pc);

// Y * precoder.
CMatrix decouple(const CMatrix& y, const CMatrix& precoder);

}  // namespace otfs
