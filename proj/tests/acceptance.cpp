// Acceptance suite: one PASS/FAIL line per criterion with the tolerance it is
// held to. Exit status is nonzero if any criterion fails.
//
//   acceptance [seed]

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "semiembed/jordan.hpp"
#include "semiembed/positive_embed.hpp"
#include "semiembed/real_embed.hpp"
#include "semiembed/verify.hpp"

using namespace semiembed;

namespace {

constexpr std::uint64_t kDefaultSeed = 20240601;

struct Line {
  int id;
  std::string title;
  bool ok = true;
  std::string detail;
};

int g_failed = 0;

void emit(const Line& line) {
  if (!line.ok) ++g_failed;
  std::printf("%s  %d  %-34s %s\n", line.ok ? "PASS" : "FAIL", line.id, line.title.c_str(), line.detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c);
  return buf;
}

void require(Line& line, bool condition, const std::string& what) {
  if (!condition) {
    line.ok = false;
    if (!line.detail.empty()) line.detail += "; ";
    line.detail += what;
  }
}

std::string outcome_detail(const PropertyOutcome& o) {
  std::string s = std::to_string(o.trials) + " checks, " + std::to_string(o.failures) + " failures, worst " +
                  fmt("%.3g", o.worst_residual);
  if (o.skipped > 0) s += ", " + std::to_string(o.skipped) + " skipped";
  if (!o.passed()) s += " (" + o.note + ")";
  return s;
}

Matrix real(std::initializer_list<std::initializer_list<double>> rows) {
  Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.begin()->size()));
  Index i = 0;
  for (const auto& r : rows) {
    Index j = 0;
    for (double v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

Matrix unipotent(double a, double b, double c) { return real({{1, a, c}, {0, 1, b}, {0, 0, 1}}); }

Line worked_examples(std::vector<EmbeddingCertificate>& positive_certs) {
  Line line{1, "worked examples"};
  const Tolerances tol;
  int checked = 0;

  require(line, decide_real_embeddable(real({{-1}}), tol).verdict == Verdict::NotEmbeddable, "[[-1]] not real-NO");
  ++checked;
  const Matrix flip = real({{-1, 0}, {0, -1}});
  require(line, decide_real_embeddable(flip, tol).verdict == Verdict::Embeddable, "diag(-1,-1) not real-YES");
  require(line, real_logarithm(flip, tol).residual <= 1e-8, "diag(-1,-1) residual above 1e-8");
  ++checked;

  for (const Matrix& t : {real({{0, 1}, {1, 0}}), real({{0.5, 0.5}, {1, 0}})}) {
    const auto d = decide_positive(t, 2, tol);
    require(line, d.report.verdict == Verdict::NotEmbeddable && d.report.violated(cond::kDiagonalPositive),
            "zero-diagonal example not rejected by the diagonal condition");
    ++checked;
  }

  for (double lambda : {0.5, 1.0, 3.0}) {
    for (Index d = 1; d <= 4; ++d) {
      const auto dec = decide_positive(jordan_block(lambda, d), 2, tol);
      const Verdict want = d <= 2 ? Verdict::Embeddable : Verdict::NotEmbeddable;
      require(line, dec.report.verdict == want,
              "J(" + fmt("%g", lambda) + ", " + std::to_string(d) + ") verdict " + to_string(dec.report.verdict));
      if (dec.certificate) positive_certs.push_back(*dec.certificate);
      ++checked;
    }
  }

  constexpr double kFlip = 1e-9;
  for (const auto& [a, b] : {std::pair{1.0, 1.0}, std::pair{2.0, 0.5}, std::pair{0.0, 3.0}}) {
    const double half = a * b / 2;
    const double quarter = a * b / 4;
    const auto above = decide_unipotent3(a, b, half + kFlip, tol);
    require(line, above.report.verdict == Verdict::Embeddable, "unipotent above ab/2 not YES");
    if (above.certificate) positive_certs.push_back(*above.certificate);
    if (half > 0) {
      require(line, decide_unipotent3(a, b, half - kFlip, tol).report.verdict == Verdict::NotEmbeddable,
              "unipotent below ab/2 not NO");
      require(line, decide_positive(unipotent(a, b, half - kFlip), 2, tol).report.verdict == Verdict::NotEmbeddable,
              "decide_positive below ab/2 not NO");
    }
    require(line, positive_sqrt_unipotent3(a, b, quarter + kFlip, tol).has_value(), "no square root above ab/4");
    if (quarter > 0) {
      require(line, !positive_sqrt_unipotent3(a, b, quarter - kFlip, tol).has_value(), "square root below ab/4");
    }
    checked += 2;
  }
  if (line.ok) line.detail = std::to_string(checked) + " examples, flip width 1e-9, residual <= 1e-8";
  return line;
}

}  // namespace

int main(int argc, char** argv) {
  const std::uint64_t seed = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : kDefaultSeed;
  const auto start = std::chrono::steady_clock::now();
  std::printf("acceptance suite, seed %llu\n", static_cast<unsigned long long>(seed));
  const Tolerances tol;

  std::vector<EmbeddingCertificate> positive_certs;
  emit(worked_examples(positive_certs));

  std::vector<EmbeddingCertificate> real_certs;
  {
    const auto o = probe_certificate_soundness(500, 8, seed, tol, &real_certs);
    Line line{2, "certificate soundness", o.passed() && o.trials == 500,
              "tol 1e-8 residual and Im; " + outcome_detail(o)};
    emit(line);
  }
  {
    PropertyOutcome law;
    for (const auto& cert : real_certs) {
      const auto o = probe_semigroup_law(cert);
      law.trials += o.trials;
      law.failures += o.failures;
      law.worst_residual = std::max(law.worst_residual, o.worst_residual);
      if (!o.passed() && law.note.empty()) law.note = o.note;
    }
    Line line{3, "semigroup law", law.passed() && !real_certs.empty(),
              "bound 1e-7 e^{(s+t)|A|}, " + std::to_string(real_certs.size()) + " certificates; " + outcome_detail(law)};
    emit(line);
  }
  {
    const auto o = probe_positive_2x2(10000, seed, tol, &positive_certs);
    emit(Line{4, "2x2 equivalence and uniqueness", o.passed() && o.trials == 10000,
              "closed form within 1e-8; " + outcome_detail(o)});
  }
  {
    const auto o = probe_spectral_mapping(1000, 6, seed);
    // Fixed regression at lambda = 0: S^2 of the nilpotent block has two 1x1 blocks.
    const Matrix s = real({{0, 1}, {0, 0}});
    const auto blocks = oracle_jordan_structure(s * s);
    const bool guard = oracle_count(blocks, 0.0, 1) == 2 && oracle_count(blocks, 0.0, 2) == 0;
    emit(Line{5, "spectral mapping", o.passed() && guard && o.trials == 1000,
              std::string("zero guard ") + (guard ? "ok" : "WRONG") + "; " + outcome_detail(o)});
  }
  {
    const auto o = probe_parity_necessity(1000, 6, seed, tol);
    emit(Line{6, "parity necessity", o.passed() && o.trials == 1000, outcome_detail(o)});
  }
  {
    const auto o = probe_metzler_forward(500, 8, seed, tol);
    emit(Line{7, "Metzler forward direction", o.passed() && o.trials >= 500,
              "entries >= -1e-12, diagonal > 0; " + outcome_detail(o)});
  }
  {
    const auto o = probe_chu_vandermonde(1000, 12, seed);
    emit(Line{8, "Chu-Vandermonde", o.passed() && o.worst_residual <= 1e-10,
              "tol 1e-10, j <= 12, d <= 6; " + outcome_detail(o)});
  }
  {
    const auto corpus = positive_certificate_corpus(300, seed, tol);
    positive_certs.insert(positive_certs.end(), corpus.begin(), corpus.end());
    const auto o = probe_zero_pattern(positive_certs, tol);
    emit(Line{9, "zero-pattern persistence", o.passed() && !positive_certs.empty(),
              "tol 1e-12, " + std::to_string(positive_certs.size()) + " certificates; " + outcome_detail(o)});
  }

  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%d of 9 criteria failed, %.1f s\n", g_failed, seconds);
  return g_failed == 0 ? 0 : 1;
}
