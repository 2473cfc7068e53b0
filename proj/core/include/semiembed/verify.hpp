#pragma once

// Brute-force oracles, seeded random ensembles and the property probes that
// cross-check the decision and construction modules.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "semiembed/certificate.hpp"
#include "semiembed/linalg.hpp"

namespace semiembed {

struct PropertyOutcome {
  std::string name;
  std::size_t trials = 0;
  std::size_t failures = 0;
  std::size_t skipped = 0;  ///< trials whose input could not be resolved numerically
  double worst_residual = 0.0;
  std::optional<Matrix> counterexample;  ///< first failing input
  std::string note;

  bool passed() const noexcept { return failures == 0; }
  void fail(const Matrix& input, std::string why);
  void observe(double residual);
};

// --- oracle -----------------------------------------------------------------

struct OracleBlock {
  Complex eigenvalue;
  Index dimension = 0;
  Index count = 0;
};

struct OracleOptions {
  double cluster_radius = 1e-2;  ///< single-linkage distance, relative to max(1, spectral radius)
  double rank_cutoff = 1e-9;     ///< singular values below cutoff * ||M - c||^k count as zero
};

/// Jordan block counts from rank sequences of (M - c)^k, computed in extended
/// precision. Shares no code with the chain-based decomposition. n <= 8.
std::vector<OracleBlock> oracle_jordan_structure(const Matrix& m, const OracleOptions& opt = {});

/// Number of blocks of the given size at the oracle eigenvalue nearest lambda
/// (within radius), 0 if none.
Index oracle_count(const std::vector<OracleBlock>& blocks, Complex lambda, Index dimension, double radius = 1e-4);

// --- ensembles --------------------------------------------------------------

using Rng = std::mt19937_64;

/// Generator for trial `index` of probe `stream`; trials are independent of each other.
Rng trial_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

/// Q1 diag(s) Q2 with orthogonal Q1, Q2 and s log-uniform in [1, max_condition].
RealMatrix random_similarity(Index n, Rng& rng, double max_condition = 1e3);

/// Integer matrix with determinant +-1 and integer inverse, built from a few
/// elementary row operations. Similarities by it keep integer data exact.
struct Unimodular {
  RealMatrix p;
  RealMatrix inverse;
};
Unimodular random_unimodular(Index n, Rng& rng, int operations);

/// Real matrix P J P^-1 where J is a real Jordan form of an embeddable matrix
/// (positive blocks, conjugate pair blocks, equal-size pairs of negative
/// blocks), block size <= max_block, eigenvalues separated by >= 0.3.
RealMatrix random_real_embeddable(Index n, Rng& rng, Index max_block = 3, double max_condition = 1e3);

/// Jordan-constructed real matrix without any embeddability constraint.
RealMatrix random_real_jordan(Index n, Rng& rng, Index max_block = 3, double max_condition = 1e3);

/// Off-diagonal U[0, 1] (each zeroed with probability sparsity), diagonal U[-2, 0].
RealMatrix random_metzler(Index n, Rng& rng, double sparsity = 0.0);

// --- probes -----------------------------------------------------------------

/// S from blocks at lambda and -lambda: counts at lambda^2 in S^2 equal the
/// summed counts at lambda and -lambda in S.
PropertyOutcome probe_spectral_mapping(std::size_t trials, Index max_dim, std::uint64_t seed);

/// T = S^2 for real S never fails the parity clause of the real decision.
PropertyOutcome probe_parity_necessity(std::size_t trials, Index max_dim, std::uint64_t seed,
                                       const Tolerances& tol = {});

/// T(2^-k)^(2^k) = T(1) for k <= depth; diagonal of T(2^-k) > 0 for positive certificates.
PropertyOutcome probe_semigroup_consistency(const EmbeddingCertificate& cert, int depth);

/// ||T(s+t) - T(s) T(t)|| <= 1e-7 exp((s+t) ||A||) for s, t in {k/16 : k = 0..32}.
PropertyOutcome probe_semigroup_law(const EmbeddingCertificate& cert);

/// Relative Chu-Vandermonde residual for j <= max_j and random (t, s) in [-10, 10]^2,
/// plus J(1, d)^(t+s) = J(1, d)^t J(1, d)^s for d <= 6.
PropertyOutcome probe_chu_vandermonde(std::size_t trials, int max_j, std::uint64_t seed);

/// Oracle block counts against jordan_decompose on Jordan-constructed input.
PropertyOutcome probe_jordan_cross_check(std::size_t trials, Index max_dim, std::uint64_t seed,
                                         const Tolerances& tol = {});

/// Embeddable real input must decide YES and yield a real logarithm with
/// residual <= verify_tol and max |Im A| <= verify_tol ||A||. Certificates are
/// appended to `sink` when given.
PropertyOutcome probe_certificate_soundness(std::size_t trials, Index max_dim, std::uint64_t seed,
                                            const Tolerances& tol = {},
                                            std::vector<EmbeddingCertificate>* sink = nullptr);

/// exp(tA) of a random Metzler A is positive with positive diagonal on the
/// dyadic grid, and the necessary battery never rejects exp(A).
PropertyOutcome probe_metzler_forward(std::size_t trials, Index max_dim, std::uint64_t seed,
                                      const Tolerances& tol = {});

/// Random positive 2x2: verdict equals det > 0 off the boundary band, and the
/// branch search finds exactly the closed-form generator.
PropertyOutcome probe_positive_2x2(std::size_t trials, std::uint64_t seed, const Tolerances& tol = {},
                                   std::vector<EmbeddingCertificate>* sink = nullptr);

/// Positive certificates keep the zero pattern and reducing subspaces of T
/// along the dyadic grid.
PropertyOutcome probe_zero_pattern(const std::vector<EmbeddingCertificate>& certs, const Tolerances& tol = {});

/// Positive certificates from every decider: 2x2, unipotent 3x3 and the
/// branch search on exp of random (sparse) Metzler matrices.
std::vector<EmbeddingCertificate> positive_certificate_corpus(std::size_t trials, std::uint64_t seed,
                                                              const Tolerances& tol = {});

/// Probe names accepted by run_suite.
const std::vector<std::string>& probe_names();

/// Runs all probes, or only `only` when non-empty. Throws DomainError for an unknown name.
std::vector<PropertyOutcome> run_suite(std::uint64_t seed, const std::string& only = "", const Tolerances& tol = {});

}  // namespace semiembed
