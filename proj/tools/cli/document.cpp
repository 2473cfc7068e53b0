#include "document.hpp"

#include <cmath>

namespace semiembed::cli {
namespace {

double finite_number(const Json& v, const std::string& where) {
  if (!v.is_number()) throw ParseError(where + ": expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ParseError(where + ": entry is not finite");
  return x;
}

Complex parse_entry(const Json& v, const std::string& where) {
  if (v.is_array()) {
    if (v.size() != 2) throw ParseError(where + ": complex entries are [re, im] pairs");
    return {finite_number(v[0], where + "[0]"), finite_number(v[1], where + "[1]")};
  }
  return {finite_number(v, where), 0.0};
}

std::optional<double> tolerance(const Json& obj, const char* key) {
  if (!obj.contains(key)) return std::nullopt;
  const double x = finite_number(obj.at(key), std::string("tolerances.") + key);
  if (x < 0.0) throw ParseError(std::string("tolerances.") + key + ": must be nonnegative");
  return x;
}

}  // namespace

Tolerances ToleranceOverrides::apply(Tolerances base) const {
  if (rank_tol) base.rank_tol = *rank_tol;
  if (eig_cluster_tol) base.eig_cluster_tol = *eig_cluster_tol;
  if (verify_tol) base.verify_tol = *verify_tol;
  if (positivity_tol) base.positivity_tol = *positivity_tol;
  return base;
}

MatrixDocument parse_document(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("document must be a JSON object");
  if (!doc.contains("n") || !doc.at("n").is_number_integer()) throw ParseError("n: expected an integer");
  const auto n = doc.at("n").get<long long>();
  if (n < 1) throw ParseError("n: must be positive");
  if (!doc.contains("entries") || !doc.at("entries").is_array()) throw ParseError("entries: expected an array");
  const Json& rows = doc.at("entries");
  if (static_cast<long long>(rows.size()) != n) {
    throw ParseError("entries: expected " + std::to_string(n) + " rows, got " + std::to_string(rows.size()));
  }

  MatrixDocument out;
  out.matrix.resize(n, n);
  for (Index i = 0; i < n; ++i) {
    const Json& row = rows[static_cast<std::size_t>(i)];
    const std::string where = "entries[" + std::to_string(i) + "]";
    if (!row.is_array() || static_cast<long long>(row.size()) != n) {
      throw ParseError(where + ": expected " + std::to_string(n) + " entries");
    }
    for (Index j = 0; j < n; ++j) {
      out.matrix(i, j) = parse_entry(row[static_cast<std::size_t>(j)], where + "[" + std::to_string(j) + "]");
    }
  }
  if (doc.contains("labels")) out.labels = doc.at("labels");
  if (doc.contains("tolerances")) {
    const Json& t = doc.at("tolerances");
    if (!t.is_object()) throw ParseError("tolerances: expected an object");
    for (const auto& [key, value] : t.items()) {
      if (key != "rank_tol" && key != "eig_cluster_tol" && key != "verify_tol" && key != "positivity_tol") {
        throw ParseError("tolerances: unknown key '" + key + "'");
      }
    }
    out.tolerances.rank_tol = tolerance(t, "rank_tol");
    out.tolerances.eig_cluster_tol = tolerance(t, "eig_cluster_tol");
    out.tolerances.verify_tol = tolerance(t, "verify_tol");
    out.tolerances.positivity_tol = tolerance(t, "positivity_tol");
  }
  return out;
}

Json matrix_to_json(const Matrix& m) {
  const bool real = is_real(m, 0.0);
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) {
      if (real) {
        row.push_back(m(i, j).real());
      } else {
        row.push_back(Json::array({m(i, j).real(), m(i, j).imag()}));
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace semiembed::cli
