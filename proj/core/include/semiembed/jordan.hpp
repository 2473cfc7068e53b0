#pragma once

// Numerical Jordan structure: eigenvalue clusters, Weyr/Segre data, Jordan
// chains and the similarity transform assembling them.

#include <map>
#include <vector>

#include "semiembed/linalg.hpp"

namespace semiembed {

/// One Jordan block with its chain x_1..x_d stored as the columns of `chain`:
/// (T - lambda) x_1 ~ 0 and (T - lambda) x_{k+1} ~ x_k.
struct JordanBlockSpec {
  Complex eigenvalue;
  Index dimension = 0;
  Matrix chain;  ///< n x dimension
};

/// A group of computed eigenvalues treated as one exact eigenvalue.
struct EigenCluster {
  Complex center;
  Index multiplicity = 0;
  double radius = 0.0;  ///< largest distance of a member to the center
};

struct JordanStructure {
  std::vector<EigenCluster> clusters;
  std::vector<JordanBlockSpec> blocks;  ///< grouped by cluster, largest blocks first
  Matrix transform;                     ///< P, chains side by side
  Matrix normal_form;                   ///< J, so that T P = P J
  double condition = 1.0;               ///< kappa_2(P)
  double residual = 0.0;                ///< ||T P - P J|| / (||T|| ||P||)
};

/// J(lambda, d): lambda on the diagonal, ones on the superdiagonal.
Matrix jordan_block(Complex lambda, Index dimension);

/// (dim ker (lambda I - M)^k) for k = 1..n. Computed by a staircase reduction
/// of M - lambda I, so no matrix powers are formed.
std::vector<Index> weyr_sequence(const Matrix& m, Complex lambda, const Tolerances& tol);

/// Block dimension -> number of blocks at lambda, from second differences of
/// the Weyr sequence.
std::map<Index, Index> block_counts(const Matrix& m, Complex lambda, const Tolerances& tol);

/// Segre characteristic from a Weyr sequence (exposed for reuse by the oracle tests).
std::map<Index, Index> block_counts_from_weyr(const std::vector<Index>& weyr);

/// Eigenvalue clusters validated against the Weyr sequence at their center.
/// For real input the clusters are conjugation symmetric and real clusters
/// have an exactly real center.
std::vector<EigenCluster> eigenvalue_clusters(const Matrix& m, const Tolerances& tol);

/// Full Jordan decomposition. Real eigenvalues of real input get real chains;
/// the chains of the cluster at conj(lambda) are the conjugates of those at
/// lambda. Throws StructureAmbiguousError when clusters cannot be separated or
/// the assembled transform fails its residual check.
JordanStructure jordan_decompose(const Matrix& m, const Tolerances& tol);

}  // namespace semiembed
