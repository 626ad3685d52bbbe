#include "otfs/precoding.hpp"

#include <cmath>
#include <stdexcept>

namespace otfs {

CMatrix fourier_matrix(Index size) {
  if (size < 1) throw std::invalid_argument("Fourier size must be >= 1");
  const double scale = 1.0 / std::sqrt(static_cast<double>(size));
  CMatrix f(size, size);
  for (Index b = 0; b < size; ++b) {
    for (Index a = 0; a < size; ++a) {
      // Reduce a*b mod N first so the phase stays small and exact.
      const double ab = static_cast<double>((a * b) % size);
      f(a, b) = std::polar(scale, -2.0 * kPi * ab / static_cast<double>(size));
    }
  }
  return f;
}

CMatrix unitary_matrix(Index size, UnitarySource source, std::uint64_t seed) {
  switch (source) {
    case UnitarySource::kFourier:
      return fourier_matrix(size);
    case UnitarySource::kIdentity:
      return CMatrix::Identity(size, size);
    case UnitarySource::kRandom: {
      Rng rng(seed);
      const CMatrix g = rng.complex_normal(size, size);
      Eigen::HouseholderQR<CMatrix> qr(g);
      CMatrix q = qr.householderQ() * CMatrix::Identity(size, size);
      const CMatrix& r = qr.matrixQR();
      for (Index c = 0; c < size; ++c) {
        const double mag = std::abs(r(c, c));
        if (mag > 0.0) q.col(c) *= r(c, c) / mag;
      }
      return q;
    }
  }
  throw std::invalid_argument("unknown unitary source");
}

PrecoderPair make_precoders(Index doppler_bins, Index pilot_columns, UnitarySource source,
                            std::uint64_t seed) {
  if (pilot_columns < 1 || pilot_columns >= doppler_bins) {
    throw std::invalid_argument("make_precoders requires 1 <= K2 < N");
  }
  const CMatrix u = unitary_matrix(doppler_bins, source, seed);
  return {u.leftCols(pilot_columns), u.rightCols(doppler_bins - pilot_columns)};
}

CMatrix qpsk_pilots(Index delay_bins, Index pilot_columns, double pilot_power, Rng& rng) {
  const double amp = std::sqrt(pilot_power / 2.0);
  CMatrix x(delay_bins, pilot_columns);
  for (Index c = 0; c < pilot_columns; ++c) {
    for (Index r = 0; r < delay_bins; ++r) {
      const double re = (rng.uniform_index(2) == 0) ? amp : -amp;
      const double im = (rng.uniform_index(2) == 0) ? amp : -amp;
      x(r, c) = {re, im};
    }
  }
  return x;
}

CMatrix superimpose(const DdFrame& frame, const PrecoderPair& pc) {
  const Index m = frame.pilots.rows();
  if (frame.pilots.cols() != pc.pilot_columns() || frame.data.cols() != pc.data_columns() ||
      (pc.data_columns() > 0 && frame.data.rows() != m) ||
      pc.data.rows() != pc.pilot.rows()) {
    throw std::invalid_argument("superimpose: frame and precoder shapes disagree");
  }
  CMatrix x = frame.pilots * pc.pilot.adjoint();
  if (pc.data_columns() > 0) x.noalias() += frame.data * pc.data.adjoint();
  return x;
}

CMatrix decouple(const CMatrix& y, const CMatrix& precoder) {
  if (y.cols() != precoder.rows()) throw std::invalid_argument("decouple: shape mismatch");
  return y * precoder;
}

}  // namespace otfs
