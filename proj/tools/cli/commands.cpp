#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ostream>

#include "semiembed/errors.hpp"
#include "semiembed/positive_embed.hpp"
#include "semiembed/real_embed.hpp"
#include "semiembed/verify.hpp"

namespace semiembed::cli {
namespace {

Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json tolerances_json(const Tolerances& tol) {
  return Json{{"rank_tol", tol.rank_tol},
              {"eig_cluster_tol", tol.eig_cluster_tol},
              {"verify_tol", tol.verify_tol},
              {"positivity_tol", tol.positivity_tol}};
}

Json conditions_json(const DecisionReport& report) {
  Json list = Json::array();
  for (const auto& c : report.conditions) {
    list.push_back(Json{{"name", c.name},
                        {"satisfied", c.satisfied},
                        {"applicable", c.applicable},
                        {"citation", c.citation},
                        {"detail", c.detail}});
  }
  return list;
}

Json certificate_json(const EmbeddingCertificate& cert) {
  Json branches = Json::array();
  for (const auto& b : cert.branch_log) branches.push_back(Json{{"eigenvalue", complex_json(b.eigenvalue)}, {"branch", b.branch}});
  Json out{{"construction", to_string(cert.construction)},
           {"generator", matrix_to_json(cert.generator)},
           {"residual", cert.residual},
           {"branch_log", branches}};
  if (cert.transform_condition) out["transform_condition"] = *cert.transform_condition;
  return out;
}

Json decision_json(const char* kind, const DecisionReport& report) {
  Json out{{"kind", kind},
           {"verdict", to_string(report.verdict)},
           {"boundary", report.boundary},
           {"conditions", conditions_json(report)}};
  if (!report.parity.empty()) {
    Json parity = Json::array();
    for (const auto& p : report.parity) {
      parity.push_back(Json{{"eigenvalue", p.eigenvalue.real()}, {"dimension", p.dimension}, {"count", p.count}});
    }
    out["parity"] = parity;
  }
  if (report.transform_condition) out["transform_condition"] = *report.transform_condition;
  return out;
}

int verdict_code(Verdict v) {
  switch (v) {
    case Verdict::Embeddable:
      return kYes;
    case Verdict::NotEmbeddable:
      return kNo;
    case Verdict::Undecided:
      return kUndecided;
  }
  return kInternal;
}

class Session {
 public:
  Session(std::string command, const CommandOptions& options)
      : options_(options), start_(std::chrono::steady_clock::now()) {
    doc_["tool"] = Json{{"name", kToolName}, {"version", tool_version()}};
    doc_["command"] = std::move(command);
  }

  Json& doc() { return doc_; }

  void input(const MatrixDocument& d, const Tolerances& tol) {
    Json echo{{"n", d.matrix.rows()}, {"entries", matrix_to_json(d.matrix)}};
    if (!d.labels.is_null()) echo["labels"] = d.labels;
    doc_["input"] = echo;
    doc_["tolerances"] = tolerances_json(tol);
  }

  int error(int code, const char* kind, const std::string& message) {
    doc_["error"] = Json{{"kind", kind}, {"message", message}};
    return code;
  }

  void write(std::ostream& out) {
    if (options_.timing) {
      const auto elapsed = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_);
      doc_["timing"] = Json{{"elapsed_ms", elapsed.count()}};
    }
    out << doc_.dump(2) << '\n';
  }

 private:
  const CommandOptions& options_;
  std::chrono::steady_clock::time_point start_;
  Json doc_;
};

int check_real(const Matrix& t, const Tolerances& tol, Json& analyses) {
  DecisionReport report;
  try {
    report = decide_real_embeddable(t, tol);
  } catch (const StructureAmbiguousError& e) {
    report.verdict = Verdict::Undecided;
    report.add({cond::kParity, false, true, "every Jordan block at every negative eigenvalue occurs an even number of times",
                std::string("Jordan structure unresolved: ") + e.what()});
    report.tolerances = tol;
    analyses.push_back(decision_json("real", report));
    return kUndecided;
  }
  Json entry = decision_json("real", report);
  if (report.verdict == Verdict::Embeddable) entry["certificate"] = certificate_json(real_logarithm(t, tol));
  analyses.push_back(entry);
  return verdict_code(report.verdict);
}

int check_positive(const Matrix& t, const Tolerances& tol, int branch_bound, Json& analyses) {
  const PositiveDecision d = decide_positive(t, branch_bound, tol);
  Json entry = decision_json("positive", d.report);
  entry["candidates_examined"] = d.candidates_examined;
  entry["surviving_generators"] = d.surviving_generators.size();
  if (d.certificate) entry["certificate"] = certificate_json(*d.certificate);
  analyses.push_back(entry);
  return verdict_code(d.report.verdict);
}

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x == 0.0 ? 0.0 : x);
  return buf;
}

int sample(const Matrix& t, const Tolerances& tol, const CommandOptions& options, Session& session,
           std::ostream& out, std::ostream& err) {
  if (options.steps < 2) return session.error(kParse, "parse", "--steps must be at least 2");
  if (!(options.t_min <= options.t_max)) return session.error(kParse, "parse", "--t-min must not exceed --t-max");

  std::optional<EmbeddingCertificate> cert;
  Json analyses = Json::array();
  int code = kYes;
  if (options.positive_path) {
    code = check_positive(t, tol, options.branch_bound, analyses);
    if (code == kYes) cert = decide_positive(t, options.branch_bound, tol).certificate;
  } else {
    code = check_real(t, tol, analyses);
    if (code == kYes) cert = real_logarithm(t, tol);
  }
  session.doc()["analyses"] = analyses;
  if (!cert) return code;

  std::vector<double> grid;
  const int steps = options.steps;
  for (int k = 0; k < steps; ++k) {
    grid.push_back(k == steps - 1 ? options.t_max
                                  : options.t_min + (options.t_max - options.t_min) * k / (steps - 1));
  }
  const TrajectorySample traj = sample_semigroup(*cert, grid);
  const bool real = is_real(cert->generator, 0.0);
  out << "t,i,j,re,im\n";
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const Matrix& v = traj.values[k];
    for (Index i = 0; i < v.rows(); ++i) {
      for (Index j = 0; j < v.cols(); ++j) {
        out << format_number(traj.times[k]) << ',' << i + 1 << ',' << j + 1 << ',' << format_number(v(i, j).real())
            << ',' << format_number(real ? 0.0 : v(i, j).imag()) << '\n';
      }
    }
  }
  (void)err;
  return kYes;
}

Json outcome_json(const PropertyOutcome& o) {
  Json out{{"name", o.name},
           {"trials", o.trials},
           {"failures", o.failures},
           {"skipped", o.skipped},
           {"worst_residual", o.worst_residual},
           {"passed", o.passed()}};
  if (!o.note.empty()) out["note"] = o.note;
  if (o.counterexample) out["counterexample"] = matrix_to_json(*o.counterexample);
  return out;
}

}  // namespace

const char* tool_version() noexcept { return SEMIEMBED_VERSION; }

int run_command(const std::string& command, const std::string& input, const CommandOptions& options,
                std::ostream& out, std::ostream& err) {
  Session session(command, options);
  int code = kInternal;
  const bool csv = command == "sample";
  try {
    if (command == "verify") {
      const auto& names = probe_names();
      if (!options.probe.empty() && std::find(names.begin(), names.end(), options.probe) == names.end()) {
        code = session.error(kParse, "parse", "unknown probe '" + options.probe + "'");
        session.write(out);
        return code;
      }
      const Tolerances tol = options.flags.apply({});
      tol.validate();
      session.doc()["tolerances"] = tolerances_json(tol);
      session.doc()["seed"] = options.seed;
      Json probes = Json::array();
      bool all = true;
      for (const auto& o : run_suite(options.seed, options.probe, tol)) {
        probes.push_back(outcome_json(o));
        all = all && o.passed();
      }
      session.doc()["probes"] = probes;
      session.doc()["passed"] = all;
      code = all ? kYes : kNo;
    } else if (command == "check-real" || command == "check-positive" || command == "sqrt-real" || csv) {
      MatrixDocument doc;
      try {
        doc = parse_document(input);
      } catch (const ParseError& e) {
        code = session.error(kParse, "parse", e.what());
        (csv ? err : out) << session.doc().dump(2) << '\n';
        return code;
      }
      const Tolerances tol = options.flags.apply(doc.tolerances.apply({}));
      session.input(doc, tol);
      tol.validate();
      Json analyses = Json::array();
      if (command == "check-real") {
        code = check_real(doc.matrix, tol, analyses);
        session.doc()["analyses"] = analyses;
      } else if (command == "check-positive") {
        if (options.branch_bound < 0) {
          code = session.error(kParse, "parse", "--branch-bound must be nonnegative");
        } else {
          code = check_positive(doc.matrix, tol, options.branch_bound, analyses);
          session.doc()["analyses"] = analyses;
        }
      } else if (command == "sqrt-real") {
        code = check_real(doc.matrix, tol, analyses);
        if (code == kYes) {
          const Matrix root = real_square_root(doc.matrix, tol);
          const double scale = std::max(opnorm(doc.matrix), 1e-300);
          analyses.back()["square_root"] =
              Json{{"entries", matrix_to_json(root)}, {"residual", opnorm(root * root - doc.matrix) / scale}};
        }
        session.doc()["analyses"] = analyses;
      } else {
        code = sample(doc.matrix, tol, options, session, out, err);
        if (code == kYes) return code;
        session.write(err);
        return code;
      }
    } else {
      code = session.error(kParse, "parse", "unknown command '" + command + "'");
    }
  } catch (const DomainError& e) {
    code = session.error(kInternal, "domain", e.what());
  } catch (const NotPositiveError& e) {
    code = session.error(kInternal, "not_positive", e.what());
  } catch (const Error& e) {
    code = session.error(kInternal, "analysis", e.what());
  } catch (const std::exception& e) {
    code = session.error(kInternal, "internal", e.what());
  }
  session.write(csv ? err : out);
  return code;
}

}  // namespace semiembed::cli
