#include "semiembed/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "semiembed/errors.hpp"
#include "semiembed/jordan.hpp"
#include "semiembed/positive_embed.hpp"
#include "semiembed/real_embed.hpp"

namespace semiembed {
namespace {

using LComplex = std::complex<long double>;
using LMatrix = Eigen::Matrix<LComplex, Eigen::Dynamic, Eigen::Dynamic>;

enum Stream : std::uint64_t {
  kSpectral = 1,
  kParity,
  kChu,
  kCross,
  kSoundness,
  kMetzler,
  kPositive2x2,
  kCorpus,
};

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

Index uniform_index(Rng& rng, Index lo, Index hi) {
  return std::uniform_int_distribution<Index>(lo, hi)(rng);
}

bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

template <typename T>
const T& pick(Rng& rng, const std::vector<T>& values) {
  return values[static_cast<std::size_t>(uniform_index(rng, 0, static_cast<Index>(values.size()) - 1))];
}

long double largest_singular_value(const LMatrix& m) {
  if (m.size() == 0) return 0.0L;
  return Eigen::JacobiSVD<LMatrix>(m).singularValues()(0);
}

// Real Jordan form assembly for the ensembles.
struct RealJordan {
  Index n;
  RealMatrix j;
  Index filled = 0;
  std::vector<Complex> spectrum;

  explicit RealJordan(Index size) : n(size), j(RealMatrix::Zero(size, size)) {}

  Index remaining() const { return n - filled; }

  void real_block(double lambda, Index d) {
    for (Index k = 0; k < d; ++k) {
      j(filled + k, filled + k) = lambda;
      if (k + 1 < d) j(filled + k, filled + k + 1) = 1.0;
    }
    filled += d;
  }

  // Real form of J(a + ib, d) (+) J(a - ib, d).
  void pair_block(double a, double b, Index d) {
    for (Index k = 0; k < d; ++k) {
      const Index o = filled + 2 * k;
      j(o, o) = a;
      j(o, o + 1) = b;
      j(o + 1, o) = -b;
      j(o + 1, o + 1) = a;
      if (k + 1 < d) {
        j(o, o + 2) = 1.0;
        j(o + 1, o + 3) = 1.0;
      }
    }
    filled += 2 * d;
  }

  bool separated(Complex z, double gap) const {
    return std::all_of(spectrum.begin(), spectrum.end(), [&](Complex w) { return std::abs(z - w) >= gap; });
  }
};

constexpr double kSeparation = 0.3;

// Fresh eigenvalue in the annulus 0.3 <= |z| <= 3 at distance >= kSeparation from the others.
std::optional<Complex> fresh_eigenvalue(RealJordan& form, Rng& rng, int kind) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    Complex z;
    if (kind == 0) {
      z = uniform(rng, 0.3, 3.0);
    } else if (kind == 1) {
      z = -uniform(rng, 0.3, 3.0);
    } else {
      const double r = uniform(rng, 0.5, 3.0);
      const double theta = uniform(rng, 0.2, std::numbers::pi - 0.2);
      z = std::polar(r, theta);
      if (2.0 * z.imag() < kSeparation || !form.separated(std::conj(z), kSeparation)) continue;
    }
    if (form.separated(z, kSeparation)) {
      form.spectrum.push_back(z);
      if (kind == 2) form.spectrum.push_back(std::conj(z));
      return z;
    }
  }
  return std::nullopt;
}

RealMatrix jordan_assembly(Index n, Rng& rng, Index max_block, double max_condition, bool embeddable) {
  RealJordan form(n);
  std::vector<std::pair<Complex, Index>> reusable;  // real eigenvalues that may take more blocks
  while (form.remaining() > 0) {
    const int kind = static_cast<int>(uniform_index(rng, 0, 2));  // 0 positive, 1 negative, 2 pair
    const Index unit = (kind == 0 || (kind == 1 && !embeddable)) ? 1 : 2;
    if (form.remaining() < unit) continue;
    const Index d = uniform_index(rng, 1, std::min(max_block, form.remaining() / unit));
    std::optional<Complex> z;
    if (kind != 2 && !reusable.empty() && coin(rng, 0.3)) {
      const auto& [value, k] = pick(rng, reusable);
      if (k == kind) z = value;
    }
    if (!z) z = fresh_eigenvalue(form, rng, kind);
    if (!z) z = fresh_eigenvalue(form, rng, 0);
    if (!z) throw Error("jordan_assembly: could not place a separated eigenvalue");
    if (z->imag() != 0.0) {
      form.pair_block(z->real(), z->imag(), d);
    } else if (z->real() < 0.0 && embeddable) {
      form.real_block(z->real(), d);
      form.real_block(z->real(), d);
    } else {
      form.real_block(z->real(), d);
    }
    if (z->imag() == 0.0) reusable.emplace_back(*z, z->real() > 0.0 ? 0 : 1);
  }
  const RealMatrix p = random_similarity(n, rng, max_condition);
  return p * form.j * p.inverse();
}

void absorb(PropertyOutcome& into, const PropertyOutcome& from) {
  into.trials += from.trials;
  into.skipped += from.skipped;
  into.worst_residual = std::max(into.worst_residual, from.worst_residual);
  if (from.failures > 0 && into.failures == 0) {
    into.counterexample = from.counterexample;
    into.note = from.note;
  }
  into.failures += from.failures;
}

std::string describe(const std::exception& e) { return e.what(); }

}  // namespace

void PropertyOutcome::fail(const Matrix& input, std::string why) {
  if (failures == 0) {
    counterexample = input;
    note = std::move(why);
  }
  ++failures;
}

void PropertyOutcome::observe(double residual) {
  if (std::isnan(residual)) residual = std::numeric_limits<double>::infinity();
  worst_residual = std::max(worst_residual, residual);
}

// --- oracle -----------------------------------------------------------------

std::vector<OracleBlock> oracle_jordan_structure(const Matrix& m, const OracleOptions& opt) {
  require_square(m, "oracle_jordan_structure");
  const Index n = m.rows();
  if (n > 8) throw DimensionError("oracle_jordan_structure: n must be <= 8");
  if (n == 0) return {};

  const LMatrix a = m.cast<LComplex>();
  Eigen::ComplexEigenSolver<LMatrix> es(a, false);
  if (es.info() != Eigen::Success) throw Error("oracle_jordan_structure: eigenvalue iteration failed");
  const auto& ev = es.eigenvalues();

  long double rho = 0.0L;
  for (Index i = 0; i < n; ++i) rho = std::max(rho, std::abs(ev(i)));
  const long double link = static_cast<long double>(opt.cluster_radius) * std::max(1.0L, rho);

  std::vector<Index> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), Index{0});
  std::function<Index(Index)> root = [&](Index i) {
    while (parent[static_cast<std::size_t>(i)] != i) i = parent[static_cast<std::size_t>(i)];
    return i;
  };
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      if (std::abs(ev(i) - ev(j)) <= link) parent[static_cast<std::size_t>(root(j))] = root(i);
    }
  }

  std::vector<std::vector<Index>> groups;
  std::vector<Index> slot(static_cast<std::size_t>(n), -1);
  for (Index i = 0; i < n; ++i) {
    const auto r = static_cast<std::size_t>(root(i));
    if (slot[r] < 0) {
      slot[r] = static_cast<Index>(groups.size());
      groups.emplace_back();
    }
    groups[static_cast<std::size_t>(slot[r])].push_back(i);
  }

  const bool real_input = is_real(m, 0.0);
  const long double norm = largest_singular_value(a);
  std::vector<OracleBlock> out;
  for (const auto& g : groups) {
    LComplex c = 0.0L;
    for (Index i : g) c += ev(i);
    c /= static_cast<long double>(g.size());
    if (real_input && std::abs(c.imag()) <= 1e-9L * std::max(1.0L, std::abs(c))) c = c.real();
    const auto mult = static_cast<Index>(g.size());

    const LMatrix shifted = a - c * LMatrix::Identity(n, n);
    const long double scale = std::max(largest_singular_value(shifted), norm);
    std::vector<Index> weyr;
    if (scale == 0.0L) {
      weyr.push_back(n);
    } else {
      LMatrix power = LMatrix::Identity(n, n);
      long double level = 1.0L;
      Index previous = 0;
      for (Index k = 1; k <= mult; ++k) {
        power = (power * shifted).eval();
        level *= scale;
        const auto s = Eigen::JacobiSVD<LMatrix>(power).singularValues();
        Index nullity = 0;
        for (Index i = 0; i < n; ++i) nullity += s(i) <= static_cast<long double>(opt.rank_cutoff) * level ? 1 : 0;
        nullity = std::clamp(nullity, previous, mult);
        weyr.push_back(nullity - previous);
        previous = nullity;
        if (nullity == mult) break;
      }
    }
    weyr.push_back(0);
    for (std::size_t d = 0; d + 1 < weyr.size(); ++d) {
      const Index count = weyr[d] - weyr[d + 1];
      if (count != 0) {
        out.push_back({Complex(static_cast<double>(c.real()), static_cast<double>(c.imag())),
                       static_cast<Index>(d + 1), count});
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const OracleBlock& x, const OracleBlock& y) {
    if (x.eigenvalue.real() != y.eigenvalue.real()) return x.eigenvalue.real() < y.eigenvalue.real();
    if (x.eigenvalue.imag() != y.eigenvalue.imag()) return x.eigenvalue.imag() < y.eigenvalue.imag();
    return x.dimension > y.dimension;
  });
  return out;
}

Index oracle_count(const std::vector<OracleBlock>& blocks, Complex lambda, Index dimension, double radius) {
  Index count = 0;
  for (const auto& b : blocks) {
    if (b.dimension == dimension && std::abs(b.eigenvalue - lambda) <= radius * std::max(1.0, std::abs(lambda))) {
      count += b.count;
    }
  }
  return count;
}

// --- ensembles --------------------------------------------------------------

Rng trial_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

RealMatrix random_similarity(Index n, Rng& rng, double max_condition) {
  if (n < 1) throw DimensionError("random_similarity: n must be positive");
  if (!(max_condition >= 1.0)) throw DomainError("random_similarity: max_condition must be >= 1");
  std::normal_distribution<double> normal;
  auto orthogonal = [&] {
    RealMatrix g(n, n);
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) g(i, j) = normal(rng);
    }
    return RealMatrix(Eigen::HouseholderQR<RealMatrix>(g).householderQ());
  };
  const RealMatrix q1 = orthogonal();
  const RealMatrix q2 = orthogonal();
  Eigen::VectorXd s(n);
  for (Index i = 0; i < n; ++i) s(i) = std::exp(uniform(rng, 0.0, std::log(max_condition)));
  return q1 * s.asDiagonal() * q2;
}

Unimodular random_unimodular(Index n, Rng& rng, int operations) {
  if (n < 1) throw DimensionError("random_unimodular: n must be positive");
  Unimodular u{RealMatrix::Identity(n, n), RealMatrix::Identity(n, n)};
  std::vector<Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Index{0});
  std::shuffle(perm.begin(), perm.end(), rng);
  for (Index i = 0; i < n; ++i) {
    u.p.row(i) = RealMatrix::Identity(n, n).row(perm[static_cast<std::size_t>(i)]);
  }
  u.inverse = u.p.transpose();
  if (n == 1) return u;
  for (int op = 0; op < operations; ++op) {
    const Index i = uniform_index(rng, 0, n - 1);
    Index j = uniform_index(rng, 0, n - 2);
    if (j >= i) ++j;
    const double mult = coin(rng, 0.5) ? 1.0 : -1.0;
    // E = I + mult e_i e_j^T, E^-1 = I - mult e_i e_j^T.
    u.p.row(i) += mult * u.p.row(j);
    u.inverse.col(j) -= mult * u.inverse.col(i);
  }
  return u;
}

RealMatrix random_real_embeddable(Index n, Rng& rng, Index max_block, double max_condition) {
  return jordan_assembly(n, rng, max_block, max_condition, true);
}

RealMatrix random_real_jordan(Index n, Rng& rng, Index max_block, double max_condition) {
  return jordan_assembly(n, rng, max_block, max_condition, false);
}

RealMatrix random_metzler(Index n, Rng& rng, double sparsity) {
  RealMatrix a(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (i == j) {
        a(i, j) = uniform(rng, -2.0, 0.0);
      } else {
        a(i, j) = coin(rng, sparsity) ? 0.0 : uniform(rng, 0.0, 1.0);
      }
    }
  }
  return a;
}

// --- probes -----------------------------------------------------------------

PropertyOutcome probe_spectral_mapping(std::size_t trials, Index max_dim, std::uint64_t seed) {
  if (max_dim < 1 || max_dim > 6) throw DomainError("probe_spectral_mapping: max_dim must be in [1, 6]");
  PropertyOutcome out;
  out.name = "spectral-mapping";
  const std::vector<double> parts{0.5, 1.0, 1.5, 2.0};
  for (std::size_t trial = 0; trial < trials; ++trial) {
    Rng rng = trial_rng(seed, kSpectral, trial);
    const Index n = uniform_index(rng, 1, max_dim);
    Complex lambda(pick(rng, parts), 0.0);
    if (coin(rng, 0.4)) lambda = Complex(pick(rng, parts) * (coin(rng, 0.5) ? 1 : -1), pick(rng, parts));

    // Blocks at +lambda and -lambda with random sizes.
    Matrix j = Matrix::Zero(n, n);
    std::map<std::pair<int, Index>, Index> planted;
    for (Index at = 0; at < n;) {
      const Index d = uniform_index(rng, 1, n - at);
      const int sign = coin(rng, 0.5) ? 1 : -1;
      j.block(at, at, d, d) = jordan_block(static_cast<double>(sign) * lambda, d);
      ++planted[{sign, d}];
      at += d;
    }
    const Unimodular u = random_unimodular(n, rng, static_cast<int>(n) + 2);
    const Matrix s = to_complex(u.p) * j * to_complex(u.inverse);
    const Matrix s2 = s * s;

    const auto in_s = oracle_jordan_structure(s);
    const auto in_s2 = oracle_jordan_structure(s2);
    double mismatch = 0.0;
    std::ostringstream why;
    for (Index d = 1; d <= n; ++d) {
      const Index plus = oracle_count(in_s, lambda, d);
      const Index minus = oracle_count(in_s, -lambda, d);
      const Index square = oracle_count(in_s2, lambda * lambda, d);
      const auto want_plus = planted.count({1, d}) ? planted[{1, d}] : 0;
      const auto want_minus = planted.count({-1, d}) ? planted[{-1, d}] : 0;
      if (plus != want_plus || minus != want_minus) {
        mismatch = 1.0;
        why << "oracle misread S at size " << d << "; ";
      }
      if (square != plus + minus) {
        mismatch = 1.0;
        why << "size " << d << ": " << square << " block(s) at lambda^2 vs " << plus << " + " << minus << "; ";
      }
    }
    ++out.trials;
    out.observe(mismatch);
    if (mismatch != 0.0) out.fail(s, why.str());
  }
  return out;
}

PropertyOutcome probe_parity_necessity(std::size_t trials, Index max_dim, std::uint64_t seed, const Tolerances& tol) {
  if (max_dim < 1 || max_dim > 6) throw DomainError("probe_parity_necessity: max_dim must be in [1, 6]");
  PropertyOutcome out;
  out.name = "parity-necessity";
  const std::vector<double> betas{0.5, 1.0, 2.0};
  const std::vector<double> reals{-2.0, -1.5, -1.0, 0.5, 1.0, 2.5};
  for (std::size_t trial = 0; trial < trials; ++trial) {
    Rng rng = trial_rng(seed, kParity, trial);
    const Index n = uniform_index(rng, 1, max_dim);
    RealMatrix s(n, n);
    if (trial % 2 == 0) {
      std::normal_distribution<double> normal;
      for (Index i = 0; i < n; ++i) {
        for (Index k = 0; k < n; ++k) s(i, k) = normal(rng);
      }
    } else {
      // Exact integer data with planted purely imaginary pairs, which square
      // to negative eigenvalues.
      RealJordan form(n);
      while (form.remaining() > 0) {
        if (form.remaining() >= 2 && coin(rng, 0.6)) {
          const Index d = uniform_index(rng, 1, std::min<Index>(2, form.remaining() / 2));
          form.pair_block(0.0, pick(rng, betas), d);
        } else {
          form.real_block(pick(rng, reals), uniform_index(rng, 1, std::min<Index>(2, form.remaining())));
        }
      }
      const Unimodular u = random_unimodular(n, rng, static_cast<int>(n) + 2);
      s = u.p * form.j * u.inverse;
    }
    const Matrix t = to_complex(RealMatrix(s * s));
    ++out.trials;
    try {
      const DecisionReport report = decide_real_embeddable(t, tol);
      if (report.violated(cond::kParity)) {
        out.fail(to_complex(s), "parity clause failed on S^2: " + report.find(cond::kParity)->detail);
        continue;
      }
    } catch (const StructureAmbiguousError&) {
      ++out.skipped;
      continue;
    }
    for (const auto& b : oracle_jordan_structure(t)) {
      if (b.eigenvalue.imag() == 0.0 && b.eigenvalue.real() < 0.0 && b.count % 2 != 0) {
        std::ostringstream why;
        why << "oracle: odd count " << b.count << " of size " << b.dimension << " at " << b.eigenvalue.real();
        out.fail(to_complex(s), why.str());
        break;
      }
    }
  }
  return out;
}

PropertyOutcome probe_semigroup_consistency(const EmbeddingCertificate& cert, int depth) {
  if (depth < 0 || depth > 8) throw DomainError("probe_semigroup_consistency: depth must be in [0, 8]");
  PropertyOutcome out;
  out.name = "semigroup-consistency";
  const Matrix one = expm(cert.generator);
  const double scale = std::max(1.0, opnorm(one));
  const double slack = 1e-7 * std::max(1.0, cert.transform_condition.value_or(1.0));
  for (int k = 0; k <= depth; ++k) {
    const Matrix root = expm(cert.generator / std::ldexp(1.0, k));
    Matrix x = root;
    for (int i = 0; i < k; ++i) x = (x * x).eval();
    const double residual = opnorm(x - one) / scale;
    ++out.trials;
    out.observe(residual);
    if (!(residual <= slack)) {
      out.fail(cert.generator, "T(2^-" + std::to_string(k) + ") squared back misses T(1)");
    } else if (cert.positive() && root.real().diagonal().minCoeff() <= 0.0) {
      out.fail(cert.generator, "non-positive diagonal in T(2^-" + std::to_string(k) + ")");
    }
  }
  return out;
}

PropertyOutcome probe_semigroup_law(const EmbeddingCertificate& cert) {
  PropertyOutcome out;
  out.name = "semigroup-law";
  std::vector<Matrix> powers;
  for (int k = 0; k <= 64; ++k) powers.push_back(expm((k / 16.0) * cert.generator));
  const double norm = opnorm(cert.generator);
  for (int a = 0; a <= 32; ++a) {
    for (int b = 0; b <= 32; ++b) {
      const double bound = 1e-7 * std::exp((a + b) / 16.0 * norm);
      const double gap = opnorm(powers[static_cast<std::size_t>(a + b)] -
                                powers[static_cast<std::size_t>(a)] * powers[static_cast<std::size_t>(b)]);
      ++out.trials;
      out.observe(gap / bound * 1e-7);
      if (!(gap <= bound)) {
        std::ostringstream why;
        why << "T(s+t) != T(s)T(t) at s = " << a / 16.0 << ", t = " << b / 16.0;
        out.fail(cert.generator, why.str());
      }
    }
  }
  return out;
}

PropertyOutcome probe_chu_vandermonde(std::size_t trials, int max_j, std::uint64_t seed) {
  PropertyOutcome out;
  out.name = "chu-vandermonde";
  for (std::size_t trial = 0; trial < trials; ++trial) {
    Rng rng = trial_rng(seed, kChu, trial);
    const double t = uniform(rng, -10.0, 10.0);
    const double s = uniform(rng, -10.0, 10.0);
    ++out.trials;
    double worst = 0.0;
    for (int j = 0; j <= max_j; ++j) worst = std::max(worst, chu_vandermonde_check(j, t, s));
    for (Index d = 1; d <= 6; ++d) {
      const RealMatrix pt = jordan_block_power(1.0, d, t);
      const RealMatrix ps = jordan_block_power(1.0, d, s);
      const RealMatrix sum = jordan_block_power(1.0, d, t + s);
      const double scale = std::max(1.0, (pt.cwiseAbs() * ps.cwiseAbs()).maxCoeff());
      worst = std::max(worst, (sum - pt * ps).cwiseAbs().maxCoeff() / scale);
    }
    out.observe(worst);
    if (!(worst <= 1e-10)) {
      Matrix where(1, 2);
      where << t, s;
      out.fail(where, "binomial convolution residual above 1e-10");
    }
  }
  return out;
}

PropertyOutcome probe_jordan_cross_check(std::size_t trials, Index max_dim, std::uint64_t seed,
                                         const Tolerances& tol) {
  if (max_dim < 1 || max_dim > 8) throw DomainError("probe_jordan_cross_check: max_dim must be in [1, 8]");
  PropertyOutcome out;
  out.name = "jordan-cross-check";
  for (std::size_t trial = 0; trial < trials; ++trial) {
    Rng rng = trial_rng(seed, kCross, trial);
    const Index n = uniform_index(rng, 1, max_dim);
    const Matrix m = to_complex(random_real_jordan(n, rng));
    ++out.trials;
    const auto oracle = oracle_jordan_structure(m);
    JordanStructure js;
    try {
      js = jordan_decompose(m, tol);
    } catch (const Error& e) {
      out.fail(m, "jordan_decompose: " + describe(e));
      continue;
    }
    out.observe(js.residual);
    Index total = 0;
    bool ok = true;
    std::ostringstream why;
    for (const auto& b : oracle) {
      Index found = 0;
      for (const auto& blk : js.blocks) {
        if (blk.dimension == b.dimension &&
            std::abs(blk.eigenvalue - b.eigenvalue) <= 1e-4 * std::max(1.0, std::abs(b.eigenvalue))) {
          ++found;
        }
      }
      total += b.count;
      if (found != b.count) {
        ok = false;
        why << "size " << b.dimension << " at " << b.eigenvalue << ": oracle " << b.count << ", decomposition "
            << found << "; ";
      }
    }
    if (ok && total != static_cast<Index>(js.blocks.size())) {
      ok = false;
      why << "block totals differ";
    }
    if (!ok) out.fail(m, why.str());
  }
  return out;
}

PropertyOutcome probe_certificate_soundness(std::size_t trials, Index max_dim, std::uint64_t seed,
                                            const Tolerances& tol, std::vector<EmbeddingCertificate>* sink) {
  if (max_dim < 1 || max_dim > 8) throw DomainError("probe_certificate_soundness: max_dim must be in [1, 8]");
  PropertyOutcome out;
  out.name = "certificate-soundness";
  for (std::size_t trial = 0; trial < trials; ++trial) {
    Rng rng = trial_rng(seed, kSoundness, trial);
    const Index n = uniform_index(rng, 1, max_dim);
    const Matrix t = to_complex(random_real_embeddable(n, rng));
    ++out.trials;
    try {
      const DecisionReport report = decide_real_embeddable(t, tol);
      if (report.verdict != Verdict::Embeddable) {
        out.fail(t, "embeddable input decided NOT_EMBEDDABLE");
        continue;
      }
      const EmbeddingCertificate cert = real_logarithm(t, tol);
      const double imag = max_abs_imag(cert.generator);
      out.observe(cert.residual);
      if (!(cert.residual <= tol.verify_tol) || !(imag <= tol.verify_tol * std::max(1.0, opnorm(cert.generator)))) {
        out.fail(t, "certificate residual or imaginary part out of tolerance");
        continue;
      }
      if (sink != nullptr) sink->push_back(cert);
    } catch (const Error& e) {
      out.fail(t, describe(e));
    }
  }
  return out;
}

PropertyOutcome probe_metzler_forward(std::size_t trials, Index max_dim, std::uint64_t seed, const Tolerances& tol) {
  if (max_dim < 1) throw DomainError("probe_metzler_forward: max_dim must be positive");
  PropertyOutcome out;
  out.name = "metzler-forward";
  const auto grid = dyadic_grid();
  for (std::size_t trial = 0; trial < trials; ++trial) {
    Rng rng = trial_rng(seed, kMetzler, trial);
    const Index n = uniform_index(rng, 1, max_dim);
    const RealMatrix a = random_metzler(n, rng, coin(rng, 0.5) ? 0.5 : 0.0);
    ++out.trials;
    double worst = 0.0;
    bool ok = true;
    for (double t : grid) {
      const RealMatrix e = expm(to_complex(t * a)).real();
      worst = std::max(worst, -e.minCoeff());
      ok = ok && e.minCoeff() >= -tol.positivity_tol && e.diagonal().minCoeff() > 0.0;
    }
    out.observe(std::max(0.0, worst));
    if (!ok) {
      out.fail(to_complex(a), "exp(tA) left the positive cone");
      continue;
    }
    try {
      const DecisionReport battery = necessary_battery(expm(to_complex(a)), tol);
      if (battery.verdict == Verdict::NotEmbeddable) {
        out.fail(to_complex(a), "necessary battery rejected exp(A): " + battery.violations().front().name);
      }
    } catch (const Error& e) {
      out.fail(to_complex(a), describe(e));
    }
  }
  return out;
}

PropertyOutcome probe_positive_2x2(std::size_t trials, std::uint64_t seed, const Tolerances& tol,
                                   std::vector<EmbeddingCertificate>* sink) {
  PropertyOutcome out;
  out.name = "positive-2x2";
  for (std::size_t trial = 0; trial < trials; ++trial) {
    Rng rng = trial_rng(seed, kPositive2x2, trial);
    RealMatrix r(2, 2);
    for (Index i = 0; i < 2; ++i) {
      for (Index j = 0; j < 2; ++j) r(i, j) = coin(rng, 0.15) ? 0.0 : uniform(rng, 0.0, 2.0);
    }
    const Matrix t = to_complex(r);
    ++out.trials;
    try {
      const PositiveDecision d = decide_positive(t, 2, tol);
      if (d.report.boundary) {
        ++out.skipped;
        continue;
      }
      const bool expected = r.determinant() > 0.0;
      if ((d.report.verdict == Verdict::Embeddable) != expected ||
          (!expected && d.report.verdict != Verdict::NotEmbeddable)) {
        out.fail(t, std::string("verdict ") + to_string(d.report.verdict) + " disagrees with sign of det");
        continue;
      }
      if (!expected) continue;
      const EmbeddingCertificate closed = construct_positive_2x2(t, tol);
      const PositiveDecision search = metzler_log_search(t, 2, tol);
      if (search.surviving_generators.size() != 1) {
        out.fail(t, std::to_string(search.surviving_generators.size()) + " surviving branch generators");
        continue;
      }
      const double gap = opnorm(search.surviving_generators.front() - closed.generator) /
                         std::max(1.0, opnorm(closed.generator));
      out.observe(gap);
      if (!(gap <= 1e-8)) {
        out.fail(t, "search generator differs from the closed form");
        continue;
      }
      if (sink != nullptr) sink->push_back(closed);
    } catch (const Error& e) {
      out.fail(t, describe(e));
    }
  }
  return out;
}

std::vector<EmbeddingCertificate> positive_certificate_corpus(std::size_t trials, std::uint64_t seed,
                                                              const Tolerances& tol) {
  std::vector<EmbeddingCertificate> certs;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    Rng rng = trial_rng(seed, kCorpus, trial);
    try {
      switch (trial % 3) {
        case 0: {
          const double a = coin(rng, 0.2) ? 0.0 : uniform(rng, 0.0, 3.0);
          const double b = coin(rng, 0.2) ? 0.0 : uniform(rng, 0.0, 3.0);
          const double c = a * b / 2.0 + (coin(rng, 0.2) ? 0.0 : uniform(rng, 0.0, 2.0));
          certs.push_back(construct_unipotent3(a, b, c, tol));
          break;
        }
        case 1: {
          RealMatrix r(2, 2);
          r << uniform(rng, 0.2, 2.0), coin(rng, 0.3) ? 0.0 : uniform(rng, 0.0, 1.0),
              coin(rng, 0.3) ? 0.0 : uniform(rng, 0.0, 1.0), uniform(rng, 0.2, 2.0);
          if (r.determinant() > 0.0) certs.push_back(construct_positive_2x2(to_complex(r), tol));
          break;
        }
        default: {
          const Index n = uniform_index(rng, 2, 6);
          const RealMatrix a = random_metzler(n, rng, 0.6);
          const PositiveDecision d = decide_positive(expm(to_complex(a)), 2, tol);
          if (d.certificate) certs.push_back(*d.certificate);
          break;
        }
      }
    } catch (const Error&) {
      // Inputs the deciders cannot resolve simply contribute no certificate.
    }
  }
  return certs;
}

PropertyOutcome probe_zero_pattern(const std::vector<EmbeddingCertificate>& certs, const Tolerances& tol) {
  PropertyOutcome out;
  out.name = "zero-pattern";
  const auto grid = dyadic_grid();
  for (const auto& cert : certs) {
    ++out.trials;
    const FlowCheck flow = positive_flow_check(cert, grid, tol);
    out.observe(flow.worst_zero_entry);
    if (!flow.pattern_persistent) {
      out.fail(cert.generator, "zero entry of T became nonzero along the flow");
    } else if (!flow.reducing_subspaces_invariant) {
      out.fail(cert.generator, "reducing subspace of T not invariant along the flow");
    } else if (flow.min_entry < -tol.positivity_tol || flow.min_diagonal <= 0.0) {
      out.fail(cert.generator, "flow left the positive cone");
    }
  }
  return out;
}

const std::vector<std::string>& probe_names() {
  static const std::vector<std::string> names{
      "spectral-mapping", "parity-necessity", "jordan-cross-check", "certificate-soundness", "semigroup-law",
      "semigroup-consistency", "chu-vandermonde", "metzler-forward", "positive-2x2", "zero-pattern"};
  return names;
}

std::vector<PropertyOutcome> run_suite(std::uint64_t seed, const std::string& only, const Tolerances& tol) {
  tol.validate();
  if (!only.empty() && std::find(probe_names().begin(), probe_names().end(), only) == probe_names().end()) {
    throw DomainError("run_suite: unknown probe '" + only + "'");
  }
  auto wanted = [&](const std::string& name) { return only.empty() || only == name; };
  std::vector<PropertyOutcome> out;

  if (wanted("spectral-mapping")) out.push_back(probe_spectral_mapping(1000, 6, seed));
  if (wanted("parity-necessity")) out.push_back(probe_parity_necessity(1000, 6, seed, tol));
  if (wanted("jordan-cross-check")) out.push_back(probe_jordan_cross_check(1000, 6, seed, tol));

  std::vector<EmbeddingCertificate> real_certs;
  if (wanted("certificate-soundness") || wanted("semigroup-law") || wanted("semigroup-consistency")) {
    PropertyOutcome sound = probe_certificate_soundness(500, 8, seed, tol, &real_certs);
    if (wanted("certificate-soundness")) out.push_back(std::move(sound));
  }
  if (wanted("semigroup-law")) {
    PropertyOutcome law;
    law.name = "semigroup-law";
    for (const auto& cert : real_certs) absorb(law, probe_semigroup_law(cert));
    out.push_back(std::move(law));
  }

  std::vector<EmbeddingCertificate> positive_certs;
  if (wanted("positive-2x2") || wanted("zero-pattern") || wanted("semigroup-consistency")) {
    PropertyOutcome two = probe_positive_2x2(10000, seed, tol, &positive_certs);
    if (wanted("positive-2x2")) out.push_back(std::move(two));
    const auto corpus = positive_certificate_corpus(300, seed, tol);
    positive_certs.insert(positive_certs.end(), corpus.begin(), corpus.end());
  }
  if (wanted("semigroup-consistency")) {
    PropertyOutcome consistency;
    consistency.name = "semigroup-consistency";
    for (const auto& cert : real_certs) absorb(consistency, probe_semigroup_consistency(cert, 6));
    for (const auto& cert : positive_certs) absorb(consistency, probe_semigroup_consistency(cert, 6));
    out.push_back(std::move(consistency));
  }
  if (wanted("chu-vandermonde")) out.push_back(probe_chu_vandermonde(1000, 12, seed));
  if (wanted("metzler-forward")) out.push_back(probe_metzler_forward(500, 8, seed, tol));
  if (wanted("zero-pattern")) out.push_back(probe_zero_pattern(positive_certs, tol));
  return out;
}

}  // namespace semiembed
