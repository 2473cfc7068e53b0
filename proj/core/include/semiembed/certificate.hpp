#pragma once

#include <optional>
#include <vector>

#include "semiembed/linalg.hpp"

namespace semiembed {

/// How a generator was obtained.
enum class Construction { JordanLog, PairedNegativeBlocks, Metzler2x2, Unipotent3, MetzlerSearch };

const char* to_string(Construction c) noexcept;

/// Logarithm branch used for one eigenvalue: log|lambda| + i(arg lambda + 2 pi k).
struct BranchChoice {
  Complex eigenvalue;
  int branch = 0;
};

/// Proof object for T = exp(A): the generator, the branch bookkeeping and the
/// residual ||exp(A) - T|| / ||T|| that was verified when it was built.
struct EmbeddingCertificate {
  Matrix generator;
  Matrix target;
  double residual = 0.0;
  std::vector<BranchChoice> branch_log;
  Construction construction = Construction::JordanLog;
  std::optional<double> transform_condition;

  /// True for constructions that produce a Metzler generator.
  bool positive() const noexcept;
};

/// ||exp(A) - T|| / ||T|| in the spectral norm (absolute when T = 0).
double certificate_residual(const Matrix& generator, const Matrix& target);

/// Off-diagonal entries >= -tol * max(1, max |a_ij|) and imaginary parts within the same bound.
bool is_metzler(const Matrix& a, double tol);

}  // namespace semiembed
