#pragma once

// Positive embeddability of finite positive matrices: the necessary-condition
// battery, exact deciders for 2x2 and unipotent upper-triangular 3x3 input,
// and a Metzler-logarithm branch search for everything else.

#include <optional>
#include <vector>

#include "semiembed/certificate.hpp"
#include "semiembed/report.hpp"

namespace semiembed {

/// Nonzero pattern of a matrix: entry (i, j) counts as nonzero iff it exceeds positivity_tol.
class ZeroPattern {
 public:
  ZeroPattern(const Matrix& m, double positivity_tol);

  Index size() const noexcept { return n_; }
  bool nonzero(Index i, Index j) const { return bits_[static_cast<std::size_t>(i * n_ + j)]; }
  bool operator()(Index i, Index j) const { return nonzero(i, j); }

 private:
  Index n_;
  std::vector<bool> bits_;
};

/// Runs N1..N5 and reports each. Any violation gives NOT_EMBEDDABLE; otherwise
/// the verdict is UNDECIDED (the battery is necessary, not sufficient).
/// Throws NotPositiveError when an entry is below -positivity_tol.
DecisionReport necessary_battery(const Matrix& t, const Tolerances& tol = {});

struct Reducibility {
  /// Strongly connected classes of the pattern digraph (edge i -> j iff t_ij > tol),
  /// each sorted, ordered by smallest index.
  std::vector<std::vector<Index>> components;
  /// Index sets Y (unions of components) with T span{e_j : j in Y} inside the
  /// same span, excluding the empty set and the whole space.
  std::vector<std::vector<Index>> reducing_subspaces;
  bool truncated = false;  ///< only the smallest invariant set per component was listed
  bool irreducible() const noexcept { return components.size() <= 1; }
};

Reducibility reducibility_components(const Matrix& t, const Tolerances& tol = {});

struct PositiveDecision {
  DecisionReport report;
  std::optional<EmbeddingCertificate> certificate;
  std::size_t candidates_examined = 0;
  std::vector<Matrix> surviving_generators;  ///< every branch that passed the Metzler and grid tests
};

/// Embeddable iff det T > positivity_tol * ||T||^2.
PositiveDecision decide_positive_2x2(const Matrix& t, const Tolerances& tol = {});

/// Generator of the unique positive semigroup through a 2x2 positive T with det T > 0.
EmbeddingCertificate construct_positive_2x2(const Matrix& t, const Tolerances& tol = {});

/// T = [[1, a, c], [0, 1, b], [0, 0, 1]] is positively embeddable iff c >= ab/2.
PositiveDecision decide_unipotent3(double a, double b, double c, const Tolerances& tol = {});

/// A = [[0, a, c - ab/2], [0, 0, b], [0, 0, 0]]. Throws InfeasibleError if c < ab/2.
EmbeddingCertificate construct_unipotent3(double a, double b, double c, const Tolerances& tol = {});

/// Upper-triangular positive square root [[1, a/2, (c - ab/4)/2], [0, 1, b/2], [0, 0, 1]],
/// or nullopt when c < ab/4.
std::optional<RealMatrix> positive_sqrt_unipotent3(double a, double b, double c, const Tolerances& tol = {});

/// Enumerates logarithm branches log(lambda) + 2 pi i k, |k| <= branch_bound,
/// for every conjugate pair of a diagonalizable T and keeps candidates that
/// are Metzler with exp(tA) >= 0 on the dyadic grid. Exhausting the search
/// gives UNDECIDED, never NOT_EMBEDDABLE; the latter only comes from the battery.
PositiveDecision metzler_log_search(const Matrix& t, int branch_bound, const Tolerances& tol = {});

/// Battery first, then the most specific decider: 2x2, unipotent 3x3, or the search.
PositiveDecision decide_positive(const Matrix& t, int branch_bound = 2, const Tolerances& tol = {});

/// {k / 16 : k = 1..32}
std::vector<double> dyadic_grid();

struct FlowCheck {
  double min_entry = 0.0;          ///< min over grid of min entry of exp(tA)
  double min_diagonal = 0.0;
  double worst_zero_entry = 0.0;   ///< largest |entry| on positions that vanish in T
  bool pattern_persistent = true;  ///< worst_zero_entry <= positivity_tol
  bool reducing_subspaces_invariant = true;
};

FlowCheck positive_flow_check(const EmbeddingCertificate& cert, const std::vector<double>& grid,
                              const Tolerances& tol = {});

}  // namespace semiembed
