#pragma once

#include <string>

#include "otfs/errors.hpp"
#include "otfs/types.hpp"

namespace otfs::detail {

inline bool all_finite(const CMatrix& a) { return a.allFinite(); }

// Solves A X = B for Hermitian positive definite A. Falls back to a pivoted
// LDL^T when Cholesky fails; throws NumericalError if neither yields a finite
// answer.
inline CMatrix solve_hpd(const CMatrix& a, const CMatrix& b, const char* what) {
  if (!a.allFinite() || !b.allFinite()) {
    throw NumericalError(std::string(what) + ": non-finite input");
  }
  Eigen::LLT<CMatrix> llt(a);
  if (llt.info() == Eigen::Success) {
    CMatrix x = llt.solve(b);
    if (x.allFinite()) return x;
  }
  Eigen::LDLT<CMatrix> ldlt(a);
  if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
    CMatrix x = ldlt.solve(b);
    if (x.allFinite()) return x;
  }
  throw NumericalError(std::string(what) + ": singular or indefinite system");
}

inline CMatrix hermitian_part(const CMatrix& a) { return 0.5 * (a + a.adjoint()); }

}  // namespace otfs::detail
