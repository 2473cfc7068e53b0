#include "semiembed/positive_embed.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>

#include "semiembed/errors.hpp"
#include "semiembed/jordan.hpp"

namespace semiembed {
namespace {

constexpr std::size_t kMaxCandidates = 100000;
constexpr std::size_t kMaxEnumeratedComponents = 16;

RealMatrix require_positive_square(const Matrix& t, const Tolerances& tol, const char* what) {
  require_square(t, what);
  tol.validate();
  if (!is_positive(t, tol.positivity_tol)) {
    throw NotPositiveError(std::string(what) + ": matrix has entries below -positivity_tol or non-real entries");
  }
  return t.real();
}

std::string one_based(Index i) { return std::to_string(i + 1); }

double max_abs(const RealMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

// Tarjan's algorithm on the pattern digraph.
std::vector<std::vector<Index>> strongly_connected(const ZeroPattern& pat) {
  const Index n = pat.size();
  std::vector<Index> index(static_cast<std::size_t>(n), -1);
  std::vector<Index> low(static_cast<std::size_t>(n), 0);
  std::vector<bool> on_stack(static_cast<std::size_t>(n), false);
  std::vector<Index> stack;
  std::vector<std::vector<Index>> out;
  Index counter = 0;

  std::function<void(Index)> visit = [&](Index v) {
    const auto sv = static_cast<std::size_t>(v);
    index[sv] = low[sv] = counter++;
    stack.push_back(v);
    on_stack[sv] = true;
    for (Index w = 0; w < n; ++w) {
      if (w == v || !pat(v, w)) continue;
      const auto sw = static_cast<std::size_t>(w);
      if (index[sw] < 0) {
        visit(w);
        low[sv] = std::min(low[sv], low[sw]);
      } else if (on_stack[sw]) {
        low[sv] = std::min(low[sv], index[sw]);
      }
    }
    if (low[sv] == index[sv]) {
      std::vector<Index> comp;
      Index w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[static_cast<std::size_t>(w)] = false;
        comp.push_back(w);
      } while (w != v);
      std::sort(comp.begin(), comp.end());
      out.push_back(std::move(comp));
    }
  };
  for (Index v = 0; v < n; ++v) {
    if (index[static_cast<std::size_t>(v)] < 0) visit(v);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return out;
}

bool grid_positive(const RealMatrix& generator, const std::vector<double>& grid, double tol) {
  for (double t : grid) {
    const RealMatrix e = expm(to_complex(t * generator)).real();
    if (e.minCoeff() < -tol * std::max(1.0, max_abs(e))) return false;
  }
  return true;
}

void merge_conditions(DecisionReport& into, const DecisionReport& from) {
  std::vector<Condition> merged = from.conditions;
  for (const auto& c : into.conditions) {
    if (from.find(c.name) == nullptr) merged.push_back(c);
  }
  into.conditions = std::move(merged);
  into.boundary = into.boundary || from.boundary;
}

bool unipotent_pattern(const RealMatrix& t, double tol) {
  if (t.rows() != 3) return false;
  for (Index i = 0; i < 3; ++i) {
    if (std::abs(t(i, i) - 1.0) > tol) return false;
    for (Index j = 0; j < i; ++j) {
      if (std::abs(t(i, j)) > tol) return false;
    }
  }
  return true;
}

// log(a) - log(d) over a - d, continuous at a = d.
double log_divided_difference(double a, double d) {
  const double x = (a - d) / d;
  if (std::abs(x) < 1e-8) return (1.0 - x / 2.0 + x * x / 3.0) / d;
  return std::log1p(x) / (a - d);
}

EmbeddingCertificate finish(RealMatrix generator, const RealMatrix& target, Construction how,
                            std::vector<BranchChoice> branches, const Tolerances& tol, const char* what) {
  EmbeddingCertificate cert;
  cert.generator = to_complex(generator);
  cert.target = to_complex(target);
  cert.construction = how;
  cert.branch_log = std::move(branches);
  cert.residual = certificate_residual(cert.generator, cert.target);
  if (!(cert.residual <= tol.verify_tol)) {
    std::ostringstream msg;
    msg << what << ": residual " << cert.residual << " exceeds verify_tol " << tol.verify_tol;
    throw VerificationError(msg.str());
  }
  return cert;
}

}  // namespace

ZeroPattern::ZeroPattern(const Matrix& m, double positivity_tol)
    : n_(m.rows()), bits_(static_cast<std::size_t>(m.rows() * m.cols()), false) {
  require_square(m, "ZeroPattern");
  for (Index i = 0; i < n_; ++i) {
    for (Index j = 0; j < n_; ++j) bits_[static_cast<std::size_t>(i * n_ + j)] = m(i, j).real() > positivity_tol;
  }
}

std::vector<double> dyadic_grid() {
  std::vector<double> grid;
  for (int k = 1; k <= 32; ++k) grid.push_back(k / 16.0);
  return grid;
}

DecisionReport necessary_battery(const Matrix& t, const Tolerances& tol) {
  const RealMatrix m = require_positive_square(t, tol, "necessary_battery");
  const Index n = m.rows();
  const ZeroPattern pat(t, tol.positivity_tol);
  DecisionReport report;
  report.tolerances = tol;

  {
    Condition c{cond::kDiagonalPositive, true, true,
                "diagonal entries of a positive semigroup stay strictly positive for all t >= 0", ""};
    for (Index j = 0; j < n; ++j) {
      if (!pat(j, j)) {
        c.satisfied = false;
        c.detail += (c.detail.empty() ? "zero diagonal entry at " : ", ") + ("(" + one_based(j) + "," + one_based(j) + ")");
      }
    }
    if (c.satisfied) c.detail = "all diagonal entries positive";
    report.add(c);
  }
  {
    Condition c{cond::kNonsingular, true, true, "an embeddable finite matrix is invertible", ""};
    const RankKernel rk = rank_and_kernel(t, tol);
    c.satisfied = rk.rank == n;
    c.detail = "numerical rank " + std::to_string(rk.rank) + " of " + std::to_string(n);
    report.add(c);
  }
  {
    Condition c{cond::kPatternTransitive, true, true,
                "zero entries persist along a positive semigroup, so the nonzero pattern of T = T(1/2)^2 is "
                "reflexive and transitive",
                ""};
    for (Index i = 0; i < n && c.satisfied; ++i) {
      for (Index j = 0; j < n && c.satisfied; ++j) {
        if (pat(i, j)) continue;
        for (Index k = 0; k < n; ++k) {
          if (k == i || k == j) continue;
          if (pat(i, k) && pat(k, j)) {
            c.satisfied = false;
            c.detail = one_based(i) + "->" + one_based(k) + ", " + one_based(k) + "->" + one_based(j) +
                       " present; " + one_based(i) + "->" + one_based(j) + " absent";
            break;
          }
        }
      }
    }
    if (c.satisfied) {
      for (Index j = 0; j < n; ++j) {
        if (!pat(j, j)) {
          c.satisfied = false;
          c.detail = "diagonal entry (" + one_based(j) + "," + one_based(j) + ") vanishes";
          break;
        }
      }
    }
    if (c.satisfied) c.detail = "pattern closed";
    report.add(c);
  }
  {
    Condition c{cond::kStrictOrReducible, true, true,
                "a matrix in a positive analytic semigroup is strictly positive or reducible", ""};
    bool strict = true;
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) strict = strict && pat(i, j);
    }
    const auto comps = strongly_connected(pat);
    c.satisfied = strict || comps.size() > 1;
    c.detail = strict ? "strictly positive"
                      : (comps.size() > 1 ? "reducible (" + std::to_string(comps.size()) + " classes)"
                                          : "irreducible with zero entries");
    report.add(c);
  }
  {
    Condition c{cond::kDeterminant2x2, true, n == 2, "a positive 2x2 matrix is positively embeddable iff det T > 0",
                ""};
    if (n == 2) {
      const double det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
      const double band = tol.positivity_tol * std::pow(opnorm(t), 2);
      c.satisfied = det > band;
      report.boundary = std::abs(det) <= band;
      std::ostringstream s;
      s << "det = " << det;
      c.detail = s.str();
    } else {
      c.detail = "only decisive for 2x2";
    }
    report.add(c);
  }
  report.verdict = report.violations().empty() ? Verdict::Undecided : Verdict::NotEmbeddable;
  return report;
}

Reducibility reducibility_components(const Matrix& t, const Tolerances& tol) {
  require_positive_square(t, tol, "reducibility_components");
  const ZeroPattern pat(t, tol.positivity_tol);
  Reducibility out;
  out.components = strongly_connected(pat);
  const std::size_t m = out.components.size();

  std::vector<std::size_t> owner(static_cast<std::size_t>(pat.size()));
  for (std::size_t c = 0; c < m; ++c) {
    for (Index i : out.components[c]) owner[static_cast<std::size_t>(i)] = c;
  }
  // T e_j has support {i : t_ij > 0}; span{e_j : j in Y} is invariant iff Y
  // contains every such i, i.e. Y is closed under predecessors.
  std::vector<std::vector<bool>> pred(m, std::vector<bool>(m, false));
  for (Index i = 0; i < pat.size(); ++i) {
    for (Index j = 0; j < pat.size(); ++j) {
      const auto ci = owner[static_cast<std::size_t>(i)];
      const auto cj = owner[static_cast<std::size_t>(j)];
      if (ci != cj && pat(i, j)) pred[cj][ci] = true;
    }
  }
  auto to_indices = [&](const std::vector<bool>& chosen) {
    std::vector<Index> idx;
    for (std::size_t c = 0; c < m; ++c) {
      if (chosen[c]) idx.insert(idx.end(), out.components[c].begin(), out.components[c].end());
    }
    std::sort(idx.begin(), idx.end());
    return idx;
  };

  if (m <= kMaxEnumeratedComponents) {
    for (std::size_t mask = 1; mask + 1 < (std::size_t{1} << m); ++mask) {
      std::vector<bool> chosen(m);
      for (std::size_t c = 0; c < m; ++c) chosen[c] = (mask >> c) & 1U;
      bool closed = true;
      for (std::size_t c = 0; c < m && closed; ++c) {
        if (!chosen[c]) continue;
        for (std::size_t p = 0; p < m; ++p) {
          if (pred[c][p] && !chosen[p]) {
            closed = false;
            break;
          }
        }
      }
      if (closed) out.reducing_subspaces.push_back(to_indices(chosen));
    }
  } else {
    out.truncated = true;
    for (std::size_t c = 0; c < m; ++c) {
      std::vector<bool> chosen(m, false);
      std::vector<std::size_t> todo{c};
      chosen[c] = true;
      while (!todo.empty()) {
        const auto cur = todo.back();
        todo.pop_back();
        for (std::size_t p = 0; p < m; ++p) {
          if (pred[cur][p] && !chosen[p]) {
            chosen[p] = true;
            todo.push_back(p);
          }
        }
      }
      auto idx = to_indices(chosen);
      if (static_cast<Index>(idx.size()) < pat.size() &&
          std::find(out.reducing_subspaces.begin(), out.reducing_subspaces.end(), idx) ==
              out.reducing_subspaces.end()) {
        out.reducing_subspaces.push_back(std::move(idx));
      }
    }
  }
  std::sort(out.reducing_subspaces.begin(), out.reducing_subspaces.end(), [](const auto& a, const auto& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  return out;
}

EmbeddingCertificate construct_positive_2x2(const Matrix& t, const Tolerances& tol) {
  if (t.rows() != 2 || t.cols() != 2) throw DimensionError("construct_positive_2x2: expected a 2x2 matrix");
  const RealMatrix m = require_positive_square(t, tol, "construct_positive_2x2");
  const double a = m(0, 0);
  const double b = m(0, 1);
  const double c = m(1, 0);
  const double d = m(1, 1);
  const double det = a * d - b * c;
  if (!(det > tol.positivity_tol * std::pow(opnorm(t), 2))) {
    throw PreconditionError("construct_positive_2x2: det T must be positive");
  }

  RealMatrix gen(2, 2);
  std::vector<BranchChoice> branches;
  const bool upper_zero = b <= tol.positivity_tol;
  const bool lower_zero = c <= tol.positivity_tol;
  if (upper_zero && lower_zero) {
    // r I when a = d; otherwise the diagonal semigroup with two rates.
    gen << std::log(a), 0.0, 0.0, std::log(d);
  } else if (lower_zero) {
    // Upper triangular; reduces to [[log r, b/r], [0, log r]] when a = d = r.
    gen << std::log(a), b * log_divided_difference(a, d), 0.0, std::log(d);
  } else if (upper_zero) {
    gen << std::log(a), 0.0, c * log_divided_difference(a, d), std::log(d);
  } else {
    // Distinct eigenvalues mu < lambda. u = (b, lambda - a) is the Perron
    // vector, v = (b, mu - a) has entries of opposite sign.
    const double tr = a + d;
    const double disc = std::sqrt((a - d) * (a - d) + 4.0 * b * c);
    const double lambda = 0.5 * (tr + disc);
    const double mu = det / lambda;
    RealMatrix p(2, 2);
    p << b, b, lambda - a, mu - a;
    const RealMatrix rates = Eigen::Vector2d(std::log(lambda), std::log(mu)).asDiagonal();
    gen = p * rates * p.inverse();
  }
  for (const Complex ev : eigenvalues(t)) branches.push_back({ev, 0});
  return finish(gen, m, Construction::Metzler2x2, std::move(branches), tol, "construct_positive_2x2");
}

PositiveDecision decide_positive_2x2(const Matrix& t, const Tolerances& tol) {
  if (t.rows() != 2 || t.cols() != 2) throw DimensionError("decide_positive_2x2: expected a 2x2 matrix");
  const RealMatrix m = require_positive_square(t, tol, "decide_positive_2x2");
  PositiveDecision out;
  out.report.tolerances = tol;

  const double det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  const double band = tol.positivity_tol * std::pow(opnorm(t), 2);
  Condition det_cond{cond::kDeterminant2x2, det > band, true,
                     "a positive 2x2 matrix is positively embeddable iff det T > 0", ""};
  {
    std::ostringstream s;
    s << "det = " << det;
    det_cond.detail = s.str();
  }
  Condition spectrum{"SPECTRUM_POSITIVE", true, true,
                     "a positive 2x2 matrix is positively embeddable iff its spectrum lies in (0, inf)", ""};
  std::ostringstream s;
  for (const Complex ev : eigenvalues(t)) {
    s << ev.real() << " ";
    spectrum.satisfied = spectrum.satisfied && std::abs(ev.imag()) <= tol.eig_cluster_tol * (1.0 + std::abs(ev)) &&
                         ev.real() > tol.eig_cluster_tol * (1.0 + std::abs(ev));
  }
  spectrum.detail = "eigenvalues " + s.str();
  out.report.add(det_cond);
  out.report.add(spectrum);
  out.report.boundary = std::abs(det) <= band;
  out.report.verdict = det_cond.satisfied ? Verdict::Embeddable : Verdict::NotEmbeddable;
  if (det_cond.satisfied) {
    out.certificate = construct_positive_2x2(t, tol);
    out.candidates_examined = 1;
    out.surviving_generators.push_back(out.certificate->generator);
  }
  return out;
}

PositiveDecision decide_unipotent3(double a, double b, double c, const Tolerances& tol) {
  if (!(a >= 0.0 && b >= 0.0 && c >= 0.0)) throw DomainError("decide_unipotent3: a, b, c must be nonnegative");
  tol.validate();
  PositiveDecision out;
  out.report.tolerances = tol;
  const double threshold = a * b / 2.0;
  Condition cnd{cond::kUnipotentThreshold, c >= threshold - tol.positivity_tol, true,
                "[[1,a,c],[0,1,b],[0,0,1]] is positively embeddable iff c >= ab/2", ""};
  std::ostringstream s;
  s << "c = " << c << ", ab/2 = " << threshold << ", positive square root exists iff c >= ab/4 = " << a * b / 4.0;
  cnd.detail = s.str();
  out.report.add(cnd);
  out.report.boundary = std::abs(c - threshold) <= tol.positivity_tol;
  out.report.verdict = cnd.satisfied ? Verdict::Embeddable : Verdict::NotEmbeddable;
  if (cnd.satisfied) {
    out.certificate = construct_unipotent3(a, b, c, tol);
    out.candidates_examined = 1;
    out.surviving_generators.push_back(out.certificate->generator);
  }
  return out;
}

EmbeddingCertificate construct_unipotent3(double a, double b, double c, const Tolerances& tol) {
  if (!(a >= 0.0 && b >= 0.0 && c >= 0.0)) throw DomainError("construct_unipotent3: a, b, c must be nonnegative");
  if (c < a * b / 2.0 - tol.positivity_tol) {
    throw InfeasibleError("construct_unipotent3: c < ab/2, no positive generator exists");
  }
  const double gamma = std::max(0.0, c - a * b / 2.0);
  RealMatrix gen(3, 3);
  gen << 0.0, a, gamma, 0.0, 0.0, b, 0.0, 0.0, 0.0;
  RealMatrix target(3, 3);
  target << 1.0, a, c, 0.0, 1.0, b, 0.0, 0.0, 1.0;
  return finish(gen, target, Construction::Unipotent3, {{Complex(1.0), 0}}, tol, "construct_unipotent3");
}

std::optional<RealMatrix> positive_sqrt_unipotent3(double a, double b, double c, const Tolerances& tol) {
  if (!(a >= 0.0 && b >= 0.0 && c >= 0.0)) return std::nullopt;
  const double threshold = a * b / 4.0;
  if (c < threshold - tol.positivity_tol) return std::nullopt;
  RealMatrix s(3, 3);
  s << 1.0, a / 2.0, std::max(0.0, (c - threshold) / 2.0), 0.0, 1.0, b / 2.0, 0.0, 0.0, 1.0;
  return s;
}

PositiveDecision metzler_log_search(const Matrix& t, int branch_bound, const Tolerances& tol) {
  const RealMatrix m = require_positive_square(t, tol, "metzler_log_search");
  if (branch_bound < 0) throw DomainError("metzler_log_search: branch bound must be nonnegative");
  const Index n = m.rows();
  PositiveDecision out;
  out.report.tolerances = tol;

  JordanStructure js;
  try {
    js = jordan_decompose(to_complex(m), tol);
  } catch (const StructureAmbiguousError& e) {
    out.report.add({cond::kDiagonalizable, false, true, "branch search needs a resolved eigendecomposition",
                    e.what()});
    out.report.verdict = Verdict::Undecided;
    return out;
  }
  out.report.transform_condition = js.condition;
  const bool diagonalizable =
      std::all_of(js.blocks.begin(), js.blocks.end(), [](const auto& b) { return b.dimension == 1; });
  if (!diagonalizable) {
    Index largest = 0;
    for (const auto& b : js.blocks) largest = std::max(largest, b.dimension);
    out.report.add({cond::kDiagonalizable, false, true, "branch search enumerates logarithms of diagonalizable input",
                    "Jordan block of size " + std::to_string(largest)});
    out.report.verdict = Verdict::Undecided;
    return out;
  }

  const DecisionReport battery = necessary_battery(t, tol);
  merge_conditions(out.report, battery);
  if (battery.verdict == Verdict::NotEmbeddable) {
    out.report.verdict = Verdict::NotEmbeddable;
    return out;
  }

  const double norm = opnorm(t);
  std::vector<std::size_t> pair_clusters;
  for (std::size_t ci = 0; ci < js.clusters.size(); ++ci) {
    const auto cls = classify_eigenvalue(js.clusters[ci].center, norm, tol);
    if (cls == EigenClass::NegativeReal || cls == EigenClass::Zero) {
      out.report.add({cond::kMetzlerSearch, false, true, "branch search covers conjugate pairs and positive eigenvalues",
                      std::string("eigenvalue classified ") + to_string(cls)});
      out.report.verdict = Verdict::Undecided;
      return out;
    }
    if (js.clusters[ci].center.imag() > 0.0) pair_clusters.push_back(ci);
  }

  const auto width = static_cast<std::size_t>(2 * branch_bound + 1);
  std::size_t total = 1;
  for (std::size_t i = 0; i < pair_clusters.size(); ++i) {
    total *= width;
    if (total > kMaxCandidates) {
      out.report.add({cond::kMetzlerSearch, false, true, "branch search covers conjugate pairs and positive eigenvalues",
                      "candidate count exceeds " + std::to_string(kMaxCandidates)});
      out.report.verdict = Verdict::Undecided;
      return out;
    }
  }

  // Branch vectors in order of total |k|, then lexicographically.
  std::vector<std::vector<int>> branches;
  for (std::size_t code = 0; code < total; ++code) {
    std::vector<int> k(pair_clusters.size());
    std::size_t rest = code;
    for (auto& ki : k) {
      ki = static_cast<int>(rest % width) - branch_bound;
      rest /= width;
    }
    branches.push_back(std::move(k));
  }
  std::stable_sort(branches.begin(), branches.end(), [](const auto& x, const auto& y) {
    int sx = 0;
    int sy = 0;
    for (int v : x) sx += std::abs(v);
    for (int v : y) sy += std::abs(v);
    return sx != sy ? sx < sy : x < y;
  });

  const std::vector<double> grid = dyadic_grid();
  std::optional<std::vector<int>> first;
  for (const auto& k : branches) {
    ++out.candidates_examined;
    Vector logs(n);
    for (Index b = 0; b < n; ++b) {
      const Complex lambda = js.blocks[static_cast<std::size_t>(b)].eigenvalue;
      Complex value = std::log(lambda);
      for (std::size_t p = 0; p < pair_clusters.size(); ++p) {
        const Complex center = js.clusters[pair_clusters[p]].center;
        const double shift = 2.0 * std::numbers::pi * k[p];
        if (lambda == center) value += Complex(0.0, shift);
        if (lambda == std::conj(center)) value -= Complex(0.0, shift);
      }
      logs(b) = value;
    }
    const Matrix candidate = similarity(js.transform, logs.asDiagonal().toDenseMatrix(), tol);
    if (max_abs_imag(candidate) > tol.verify_tol * std::max(1.0, candidate.cwiseAbs().maxCoeff())) continue;
    const RealMatrix gen = candidate.real();
    if (!is_metzler(to_complex(gen), tol.positivity_tol)) continue;
    if (!grid_positive(gen, grid, tol.positivity_tol)) continue;
    out.surviving_generators.push_back(to_complex(gen));
    if (!first) first = k;
  }

  Condition search{cond::kMetzlerSearch, first.has_value(), true,
                   "a bounded generator of a positive semigroup is a Metzler matrix", ""};
  search.detail = std::to_string(out.surviving_generators.size()) + " of " + std::to_string(out.candidates_examined) +
                  " branch candidates are Metzler with a positive flow on the dyadic grid";
  out.report.add(search);
  if (!first) {
    out.report.verdict = Verdict::Undecided;
    return out;
  }

  std::vector<BranchChoice> choice;
  for (std::size_t ci = 0; ci < js.clusters.size(); ++ci) {
    int k = 0;
    for (std::size_t p = 0; p < pair_clusters.size(); ++p) {
      if (js.clusters[pair_clusters[p]].center == js.clusters[ci].center) k = (*first)[p];
      if (std::conj(js.clusters[pair_clusters[p]].center) == js.clusters[ci].center) k = -(*first)[p];
    }
    choice.push_back({js.clusters[ci].center, k});
  }
  out.certificate = finish(out.surviving_generators.front().real(), m, Construction::MetzlerSearch, std::move(choice),
                           tol, "metzler_log_search");
  out.certificate->transform_condition = js.condition;
  out.report.verdict = Verdict::Embeddable;
  return out;
}

PositiveDecision decide_positive(const Matrix& t, int branch_bound, const Tolerances& tol) {
  const RealMatrix m = require_positive_square(t, tol, "decide_positive");
  const DecisionReport battery = necessary_battery(t, tol);
  if (battery.verdict == Verdict::NotEmbeddable) {
    PositiveDecision out;
    out.report = battery;
    return out;
  }
  PositiveDecision out;
  if (m.rows() == 2) {
    out = decide_positive_2x2(t, tol);
  } else if (unipotent_pattern(m, tol.positivity_tol)) {
    out = decide_unipotent3(std::max(0.0, m(0, 1)), std::max(0.0, m(1, 2)), std::max(0.0, m(0, 2)), tol);
  } else {
    out = metzler_log_search(t, branch_bound, tol);
  }
  merge_conditions(out.report, battery);
  return out;
}

FlowCheck positive_flow_check(const EmbeddingCertificate& cert, const std::vector<double>& grid,
                              const Tolerances& tol) {
  const Matrix target = cert.target.size() != 0 ? cert.target : expm(cert.generator);
  const Index n = target.rows();
  const RealMatrix t1 = target.real();
  FlowCheck out;
  out.min_entry = std::numeric_limits<double>::infinity();
  out.min_diagonal = std::numeric_limits<double>::infinity();

  std::vector<std::vector<Index>> subspaces;
  if (is_positive(target, tol.positivity_tol)) subspaces = reducibility_components(target, tol).reducing_subspaces;

  for (double t : grid) {
    if (!(t >= 0.0)) throw DomainError("positive_flow_check: grid must lie in [0, inf)");
    const RealMatrix e = expm(t * cert.generator).real();
    out.min_entry = std::min(out.min_entry, e.minCoeff());
    out.min_diagonal = std::min(out.min_diagonal, e.diagonal().minCoeff());
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) {
        if (std::abs(t1(i, j)) <= tol.positivity_tol) {
          out.worst_zero_entry = std::max(out.worst_zero_entry, std::abs(e(i, j)));
        }
      }
    }
    for (const auto& y : subspaces) {
      for (Index j : y) {
        for (Index i = 0; i < n; ++i) {
          if (std::find(y.begin(), y.end(), i) != y.end()) continue;
          if (std::abs(e(i, j)) > tol.positivity_tol) out.reducing_subspaces_invariant = false;
        }
      }
    }
  }
  if (grid.empty()) out.min_entry = out.min_diagonal = 0.0;
  out.pattern_persistent = out.worst_zero_entry <= tol.positivity_tol;
  return out;
}

}  // namespace semiembed
