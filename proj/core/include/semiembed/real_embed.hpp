#pragma once

// Real embeddability of finite real matrices: decision, real logarithm,
// real square root and fractional powers of Jordan blocks.

#include <vector>

#include "semiembed/certificate.hpp"
#include "semiembed/jordan.hpp"
#include "semiembed/report.hpp"

namespace semiembed {

/// YES iff no eigenvalue is zero and every Jordan block size at every
/// negative eigenvalue occurs an even number of times. The report lists one
/// BlockParity entry per (negative eigenvalue, block size).
DecisionReport decide_real_embeddable(const Matrix& t, const Tolerances& tol = {});

/// Real generator A with exp(A) = T, assembled on the Jordan structure:
///  - blocks at lambda > 0 use (log lambda) I + log(I + N / lambda);
///  - a block at a non-real lambda is paired with its conjugate block and
///    written in the real basis Re x_k, Im x_k;
///  - equal-size blocks at lambda < 0 are paired in extraction order and
///    generated by 2 log S with S = [[0, I], [J, 0]], whose spectrum is
///    purely imaginary.
/// Throws PreconditionError when T is not real embeddable.
EmbeddingCertificate real_logarithm(const Matrix& t, const Tolerances& tol = {});

/// Real S = exp(A / 2) with S^2 = T; residual checked against verify_tol.
Matrix real_square_root(const Matrix& t, const Tolerances& tol = {});

/// Principal logarithm of J(lambda, d) via the terminating series of
/// log(I + N / lambda). Requires lambda != 0.
Matrix log_jordan_block(Complex lambda, Index dimension);

/// t(t-1)...(t-n+1) / n!
double generalized_binomial(double t, int n);

/// lambda^t sum_{n<d} binom(t, n) (N / lambda)^n, i.e. J(lambda, d)^t.
RealMatrix jordan_block_power(double lambda, Index dimension, double t);

/// |binom(t+s, j) - sum_k binom(t, k) binom(s, j-k)| / (1 + sum_k |binom(t, k) binom(s, j-k)|)
double chu_vandermonde_check(int j, double t, double s);

struct TrajectorySample {
  std::vector<double> times;
  std::vector<Matrix> values;  ///< exp(t A) for each time
};

TrajectorySample sample_semigroup(const EmbeddingCertificate& cert, const std::vector<double>& grid);

}  // namespace semiembed
