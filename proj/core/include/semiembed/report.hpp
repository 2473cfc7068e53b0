#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "semiembed/linalg.hpp"

namespace semiembed {

enum class Verdict { Embeddable, NotEmbeddable, Undecided };

const char* to_string(Verdict v) noexcept;

/// Stable condition names used in reports and by scripts.
namespace cond {
inline constexpr const char* kInvertible = "INVERTIBLE";
inline constexpr const char* kParity = "PARITY";
inline constexpr const char* kDiagonalPositive = "N1";
inline constexpr const char* kNonsingular = "N2";
inline constexpr const char* kPatternTransitive = "N3";
inline constexpr const char* kStrictOrReducible = "N4";
inline constexpr const char* kDeterminant2x2 = "N5";
inline constexpr const char* kUnipotentThreshold = "UNIPOTENT3";
inline constexpr const char* kMetzlerSearch = "METZLER_SEARCH";
inline constexpr const char* kDiagonalizable = "DIAGONALIZABLE";
}  // namespace cond

/// One named condition evaluated during a decision.
struct Condition {
  std::string name;
  bool satisfied = true;
  bool applicable = true;
  std::string citation;  ///< human readable statement of the underlying result
  std::string detail;
};

/// Jordan-block count at a negative eigenvalue with its parity.
struct BlockParity {
  Complex eigenvalue;
  Index dimension = 0;
  Index count = 0;
  bool even() const noexcept { return count % 2 == 0; }
};

struct DecisionReport {
  Verdict verdict = Verdict::Undecided;
  std::vector<Condition> conditions;
  std::vector<BlockParity> parity;
  bool boundary = false;  ///< a threshold was met only within tolerance
  std::optional<double> transform_condition;  ///< kappa(P) of the Jordan transform used
  Tolerances tolerances;

  void add(Condition c) { conditions.push_back(std::move(c)); }
  const Condition* find(const std::string& name) const;
  /// Applicable conditions that failed.
  std::vector<Condition> violations() const;
  bool violated(const std::string& name) const;
};

}  // namespace semiembed
