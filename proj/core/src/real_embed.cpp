#include "semiembed/real_embed.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <string>

#include "semiembed/errors.hpp"

namespace semiembed {

const char* to_string(Construction c) noexcept {
  switch (c) {
    case Construction::JordanLog: return "jordan_log";
    case Construction::PairedNegativeBlocks: return "paired_negative_blocks";
    case Construction::Metzler2x2: return "metzler_2x2";
    case Construction::Unipotent3: return "unipotent3";
    case Construction::MetzlerSearch: return "metzler_search";
  }
  return "?";
}

bool EmbeddingCertificate::positive() const noexcept {
  return construction == Construction::Metzler2x2 || construction == Construction::Unipotent3 ||
         construction == Construction::MetzlerSearch;
}

double certificate_residual(const Matrix& generator, const Matrix& target) {
  const double scale = opnorm(target);
  const double diff = opnorm(expm_extended(generator) - target);
  return scale > 0.0 ? diff / scale : diff;
}

bool is_metzler(const Matrix& a, double tol) {
  const double bound = tol * std::max(1.0, a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff());
  if (max_abs_imag(a) > bound) return false;
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      if (i != j && a(i, j).real() < -bound) return false;
    }
  }
  return true;
}

namespace {

RealMatrix require_real_square(const Matrix& t, const Tolerances& tol, const char* what) {
  require_square(t, what);
  tol.validate();
  if (!is_real(t, tol.positivity_tol)) {
    throw DomainError(std::string(what) + ": input has entries with nonzero imaginary part");
  }
  return t.real();
}

// Real representation of a complex d x d block X acting on the basis
// [Re x_1..Re x_d, Im x_1..Im x_d].
RealMatrix realify(const Matrix& x) {
  const Index d = x.rows();
  RealMatrix out(2 * d, 2 * d);
  out.topLeftCorner(d, d) = x.real();
  out.topRightCorner(d, d) = x.imag();
  out.bottomLeftCorner(d, d) = -x.imag();
  out.bottomRightCorner(d, d) = x.real();
  return out;
}

struct RealLogParts {
  std::vector<RealMatrix> columns;  // basis pieces, side by side
  std::vector<RealMatrix> blocks;   // generator in that basis
  std::vector<BranchChoice> branches;
  bool paired_negative = false;
};

RealMatrix assemble(const RealLogParts& parts, const Tolerances& tol) {
  Index n = 0;
  for (const auto& c : parts.columns) n += c.cols();
  Matrix p(parts.columns.empty() ? 0 : parts.columns.front().rows(), n);
  Index col = 0;
  for (const auto& c : parts.columns) {
    p.middleCols(col, c.cols()) = to_complex(c);
    col += c.cols();
  }
  std::vector<Matrix> blocks;
  for (const auto& b : parts.blocks) blocks.push_back(to_complex(b));
  return similarity(p, direct_sum(blocks), tol).real();
}

RealMatrix principal_real_log(const RealMatrix& m, const Tolerances& tol);

// Pair-generator for diag(J, J) with J = J(lambda, d), lambda < 0.
RealMatrix negative_pair_log(double lambda, Index d, const Tolerances& tol) {
  const Index n = 2 * d;
  RealMatrix s = RealMatrix::Zero(n, n);
  s.topRightCorner(d, d) = RealMatrix::Identity(d, d);
  s.bottomLeftCorner(d, d) = jordan_block(lambda, d).real();
  return 2.0 * principal_real_log(s, tol);
}

RealLogParts log_parts(const RealMatrix& m, const Tolerances& tol, bool allow_negative) {
  const JordanStructure js = jordan_decompose(to_complex(m), tol);
  const double norm = opnorm(to_complex(m));
  RealLogParts parts;

  std::map<std::pair<double, Index>, std::vector<const JordanBlockSpec*>> pending;  // negative blocks
  for (const auto& block : js.blocks) {
    const Complex lambda = block.eigenvalue;
    switch (classify_eigenvalue(lambda, norm, tol)) {
      case EigenClass::Zero:
        throw PreconditionError("real logarithm: matrix has a zero eigenvalue");
      case EigenClass::PositiveReal:
        parts.columns.push_back(block.chain.real());
        parts.blocks.push_back(log_jordan_block(lambda.real(), block.dimension).real());
        parts.branches.push_back({lambda, 0});
        break;
      case EigenClass::NonReal:
        if (lambda.imag() > 0.0) {
          RealMatrix basis(block.chain.rows(), 2 * block.dimension);
          basis << block.chain.real(), block.chain.imag();
          parts.columns.push_back(basis);
          parts.blocks.push_back(realify(log_jordan_block(lambda, block.dimension)));
          parts.branches.push_back({lambda, 0});
          parts.branches.push_back({std::conj(lambda), 0});
        }
        break;
      case EigenClass::NegativeReal: {
        if (!allow_negative) {
          throw PreconditionError("principal logarithm: spectrum meets the negative real axis");
        }
        auto& queue = pending[{lambda.real(), block.dimension}];
        queue.push_back(&block);
        if (queue.size() == 2) {
          RealMatrix basis(block.chain.rows(), 2 * block.dimension);
          basis << queue[0]->chain.real(), queue[1]->chain.real();
          parts.columns.push_back(basis);
          parts.blocks.push_back(negative_pair_log(lambda.real(), block.dimension, tol));
          // exp(log|lambda| +- i pi): the +i pi copy is principal, the -i pi copy is one branch below.
          parts.branches.push_back({lambda, 0});
          parts.branches.push_back({lambda, -1});
          parts.paired_negative = true;
          queue.clear();
        }
        break;
      }
    }
  }
  for (const auto& [key, queue] : pending) {
    if (!queue.empty()) {
      std::ostringstream msg;
      msg << "real logarithm: unpaired Jordan block of size " << key.second << " at " << key.first;
      throw PreconditionError(msg.str());
    }
  }
  return parts;
}

RealMatrix principal_real_log(const RealMatrix& m, const Tolerances& tol) {
  return assemble(log_parts(m, tol, /*allow_negative=*/false), tol);
}

}  // namespace

Matrix log_jordan_block(Complex lambda, Index dimension) {
  if (lambda == Complex(0.0)) throw DomainError("log_jordan_block: eigenvalue must be nonzero");
  Matrix out = std::log(lambda) * identity(dimension);
  Matrix scaled = Matrix::Zero(dimension, dimension);  // N / lambda
  for (Index i = 0; i + 1 < dimension; ++i) scaled(i, i + 1) = 1.0 / lambda;
  Matrix power = scaled;
  for (Index k = 1; k < dimension; ++k) {
    const double sign = (k % 2 == 1) ? 1.0 : -1.0;
    out += (sign / static_cast<double>(k)) * power;
    power = power * scaled;
  }
  return out;
}

DecisionReport decide_real_embeddable(const Matrix& t, const Tolerances& tol) {
  const RealMatrix real = require_real_square(t, tol, "decide_real_embeddable");
  const Matrix m = to_complex(real);
  const double norm = opnorm(m);
  const auto clusters = eigenvalue_clusters(m, tol);

  DecisionReport report;
  report.tolerances = tol;

  Condition invertible{cond::kInvertible, true, true,
                       "a matrix embedded in a one-parameter semigroup has trivial kernel and full range", ""};
  Condition parity{cond::kParity, true, true,
                   "every Jordan block at every negative eigenvalue occurs an even number of times", ""};
  std::ostringstream parity_detail;
  for (const auto& c : clusters) {
    const EigenClass cls = classify_eigenvalue(c.center, norm, tol);
    if (cls == EigenClass::Zero) {
      invertible.satisfied = false;
      std::ostringstream s;
      s << "zero eigenvalue with algebraic multiplicity " << c.multiplicity;
      invertible.detail = s.str();
    } else if (cls == EigenClass::NegativeReal) {
      const Complex lambda(c.center.real(), 0.0);
      for (const auto& [dim, count] : block_counts(m, lambda, tol)) {
        report.parity.push_back({lambda, dim, count});
        if (count % 2 != 0) {
          parity.satisfied = false;
          parity_detail << "odd Jordan-block count at " << lambda.real() << ": " << count << " block(s) of size "
                        << dim << "; ";
        }
      }
    }
  }
  if (invertible.detail.empty()) invertible.detail = "no eigenvalue classified zero";
  parity.detail = parity_detail.str();
  if (parity.detail.empty()) {
    parity.detail = report.parity.empty() ? "no negative eigenvalues" : "all negative-eigenvalue block counts even";
  } else {
    parity.detail.resize(parity.detail.size() - 2);
  }
  report.add(invertible);
  report.add(parity);
  report.verdict = invertible.satisfied && parity.satisfied ? Verdict::Embeddable : Verdict::NotEmbeddable;
  return report;
}

EmbeddingCertificate real_logarithm(const Matrix& t, const Tolerances& tol) {
  const RealMatrix real = require_real_square(t, tol, "real_logarithm");
  const DecisionReport decision = decide_real_embeddable(t, tol);
  if (decision.verdict != Verdict::Embeddable) {
    std::string why;
    for (const auto& v : decision.violations()) why += " " + v.name + " (" + v.detail + ")";
    throw PreconditionError("real_logarithm: matrix is not real embeddable:" + why);
  }

  const RealLogParts parts = log_parts(real, tol, /*allow_negative=*/true);
  EmbeddingCertificate cert;
  cert.generator = to_complex(assemble(parts, tol));
  cert.target = to_complex(real);
  cert.branch_log = parts.branches;
  cert.construction = parts.paired_negative ? Construction::PairedNegativeBlocks : Construction::JordanLog;
  cert.transform_condition = jordan_decompose(cert.target, tol).condition;
  cert.residual = certificate_residual(cert.generator, cert.target);
  if (!(cert.residual <= tol.verify_tol)) {
    std::ostringstream msg;
    msg << "real_logarithm: residual " << cert.residual << " exceeds verify_tol " << tol.verify_tol;
    throw VerificationError(msg.str());
  }
  return cert;
}

Matrix real_square_root(const Matrix& t, const Tolerances& tol) {
  const EmbeddingCertificate cert = real_logarithm(t, tol);
  const Matrix root = to_complex(expm(0.5 * cert.generator).real());
  const double scale = std::max(opnorm(cert.target), std::numeric_limits<double>::min());
  const double residual = opnorm(root * root - cert.target) / scale;
  if (!(residual <= tol.verify_tol)) {
    std::ostringstream msg;
    msg << "real_square_root: residual " << residual << " exceeds verify_tol";
    throw VerificationError(msg.str());
  }
  return root;
}

double generalized_binomial(double t, int n) {
  if (n < 0) return 0.0;
  double c = 1.0;
  for (int k = 0; k < n; ++k) c *= (t - k) / static_cast<double>(k + 1);
  return c;
}

RealMatrix jordan_block_power(double lambda, Index dimension, double t) {
  if (!(lambda > 0.0)) throw DomainError("jordan_block_power: eigenvalue must be positive");
  if (dimension < 1) throw DomainError("jordan_block_power: dimension must be positive");
  RealMatrix out = RealMatrix::Zero(dimension, dimension);
  const double base = std::pow(lambda, t);
  for (Index k = 0; k < dimension; ++k) {
    const double coeff = base * generalized_binomial(t, static_cast<int>(k)) * std::pow(lambda, -static_cast<double>(k));
    for (Index i = 0; i + k < dimension; ++i) out(i, i + k) = coeff;
  }
  return out;
}

double chu_vandermonde_check(int j, double t, double s) {
  double sum = 0.0;
  double scale = 1.0;
  for (int k = 0; k <= j; ++k) {
    const double term = generalized_binomial(t, k) * generalized_binomial(s, j - k);
    sum += term;
    scale += std::abs(term);
  }
  return std::abs(generalized_binomial(t + s, j) - sum) / scale;
}

TrajectorySample sample_semigroup(const EmbeddingCertificate& cert, const std::vector<double>& grid) {
  TrajectorySample out;
  out.times = grid;
  out.values.reserve(grid.size());
  for (double t : grid) {
    if (!std::isfinite(t)) throw DomainError("sample_semigroup: grid values must be finite");
    out.values.push_back(expm(t * cert.generator));
  }
  return out;
}

}  // namespace semiembed
