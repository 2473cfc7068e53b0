#pragma once

// Input documents: one square matrix per JSON file.
//
//   {"n": 2, "entries": [[1, 0], [0, [1, 0.5]]], "labels": ..., "tolerances": {"rank_tol": 1e-9}}
//
// Entries are reals or [re, im] pairs. Labels are echoed verbatim and never
// influence a verdict.

#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "semiembed/linalg.hpp"

namespace semiembed::cli {

using Json = nlohmann::ordered_json;

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ToleranceOverrides {
  std::optional<double> rank_tol;
  std::optional<double> eig_cluster_tol;
  std::optional<double> verify_tol;
  std::optional<double> positivity_tol;

  /// Fields set here replace those of `base`.
  Tolerances apply(Tolerances base) const;
};

struct MatrixDocument {
  Matrix matrix;
  Json labels;  ///< null when absent
  ToleranceOverrides tolerances;
};

/// Throws ParseError on malformed JSON, shape mismatch, non-finite entries or
/// negative tolerance overrides.
MatrixDocument parse_document(const std::string& text);

/// Entries as reals when the matrix is real, otherwise as [re, im] pairs.
Json matrix_to_json(const Matrix& m);

}  // namespace semiembed::cli
