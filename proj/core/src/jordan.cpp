#include "semiembed/jordan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>

#include "semiembed/errors.hpp"

namespace semiembed {
namespace {

// Largest similarity condition number the clustering radius is calibrated for.
constexpr double kConditionCap = 1e3;
constexpr double kUnitRoundoff = std::numeric_limits<double>::epsilon() / 2;

template <typename Scalar>
using MatrixT = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

// Nested kernels of a shifted matrix B = M - lambda I. levels[k-1] holds the
// orthonormal directions of ker B^k orthogonal to ker B^(k-1).
template <typename Scalar>
struct Staircase {
  std::vector<Index> weyr;
  std::vector<MatrixT<Scalar>> levels;
};

template <typename Scalar>
Staircase<Scalar> staircase(const MatrixT<Scalar>& shifted, double rank_tol, double reference) {
  using Mat = MatrixT<Scalar>;
  const Index n = shifted.rows();
  Staircase<Scalar> out;
  out.weyr.reserve(static_cast<std::size_t>(n));

  const double scale = shifted.size() == 0 ? 0.0 : Eigen::JacobiSVD<Mat>(shifted).singularValues()(0);
  // Singular values are judged against the unshifted matrix as well, so a
  // shift that nearly annihilates M does not promote roundoff to rank.
  const double cutoff = rank_tol * std::max(scale, reference);
  if (scale <= cutoff) {
    out.levels.push_back(Mat::Identity(n, n));
    out.weyr.assign(static_cast<std::size_t>(n), n);
    return out;
  }

  Mat complement = Mat::Identity(n, n);
  Index total = 0;
  while (static_cast<Index>(out.weyr.size()) < n && complement.cols() > 0) {
    const Mat compressed = complement.adjoint() * shifted * complement;
    Eigen::JacobiSVD<Mat> svd(compressed, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    Index rank = 0;
    while (rank < s.size() && s(rank) > cutoff) ++rank;
    const Index nullity = compressed.cols() - rank;
    if (nullity == 0) break;
    out.levels.push_back(complement * svd.matrixV().rightCols(nullity));
    complement = (complement * svd.matrixV().leftCols(rank)).eval();
    total += nullity;
    out.weyr.push_back(total);
  }
  while (static_cast<Index>(out.weyr.size()) < n) out.weyr.push_back(total);
  return out;
}

// Chains from the staircase levels: heads are taken top level first from the
// part of each level not already covered by images of longer chains.
template <typename Scalar>
std::vector<MatrixT<Scalar>> build_chains(const MatrixT<Scalar>& shifted, const Staircase<Scalar>& sc,
                                          double rank_tol, Complex lambda) {
  using Mat = MatrixT<Scalar>;
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const Index n = shifted.rows();
  const Index depth = static_cast<Index>(sc.levels.size());

  std::vector<std::vector<Vec>> chains;  // members stored top-down
  std::vector<std::size_t> active;
  for (Index k = depth; k >= 1; --k) {
    const Mat& level = sc.levels[static_cast<std::size_t>(k - 1)];
    const Index have = static_cast<Index>(active.size());
    const Index need = level.cols() - have;
    if (need < 0) {
      throw StructureAmbiguousError("jordan: inconsistent staircase (more inherited chains than kernel growth)",
                                    lambda);
    }
    if (need > 0) {
      Mat heads;
      if (have == 0) {
        heads = level;
      } else {
        Mat inherited(n, have);
        for (Index j = 0; j < have; ++j) {
          const Vec& v = chains[active[static_cast<std::size_t>(j)]].back();
          inherited.col(j) = v / v.norm();
        }
        const Mat projected = level.adjoint() * inherited;
        Eigen::JacobiSVD<Mat> svd(projected, Eigen::ComputeFullU);
        const auto& s = svd.singularValues();
        if (s(s.size() - 1) <= std::sqrt(rank_tol)) {
          throw StructureAmbiguousError("jordan: chain images are numerically dependent", lambda);
        }
        heads = level * svd.matrixU().rightCols(need);
      }
      for (Index j = 0; j < need; ++j) {
        chains.push_back({heads.col(j)});
        active.push_back(chains.size() - 1);
      }
    }
    if (k > 1) {
      for (std::size_t idx : active) chains[idx].push_back(shifted * chains[idx].back());
    }
  }

  std::vector<Mat> out;
  out.reserve(chains.size());
  for (auto& members : chains) {
    const Index d = static_cast<Index>(members.size());
    Mat chain(n, d);
    double largest = 0.0;
    for (Index j = 0; j < d; ++j) {
      chain.col(j) = members[static_cast<std::size_t>(d - 1 - j)];
      largest = std::max(largest, chain.col(j).norm());
    }
    if (largest > 0.0) chain /= largest;
    out.push_back(std::move(chain));
  }
  return out;
}

bool center_is_real(Complex c, const Tolerances& tol) {
  return std::abs(c.imag()) <= tol.eig_cluster_tol * (1.0 + std::abs(c));
}

Staircase<Complex> complex_staircase(const Matrix& m, Complex lambda, const Tolerances& tol) {
  const Matrix shifted = m - lambda * identity(m.rows());
  return staircase<Complex>(shifted, tol.rank_tol, opnorm(m));
}

// Single-linkage dendrogram over the computed spectrum.
struct Node {
  std::vector<Index> members;
  int left = -1;
  int right = -1;
};

std::vector<Node> dendrogram(const std::vector<Complex>& ev) {
  std::vector<Node> nodes;
  std::vector<int> roots;
  for (std::size_t i = 0; i < ev.size(); ++i) {
    nodes.push_back({{static_cast<Index>(i)}, -1, -1});
    roots.push_back(static_cast<int>(i));
  }
  while (roots.size() > 1) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = 0;
    std::size_t bj = 1;
    for (std::size_t i = 0; i < roots.size(); ++i) {
      for (std::size_t j = i + 1; j < roots.size(); ++j) {
        double d = std::numeric_limits<double>::infinity();
        for (Index a : nodes[static_cast<std::size_t>(roots[i])].members) {
          for (Index b : nodes[static_cast<std::size_t>(roots[j])].members) {
            d = std::min(d, std::abs(ev[static_cast<std::size_t>(a)] - ev[static_cast<std::size_t>(b)]));
          }
        }
        if (d < best) {
          best = d;
          bi = i;
          bj = j;
        }
      }
    }
    Node merged;
    merged.left = roots[bi];
    merged.right = roots[bj];
    merged.members = nodes[static_cast<std::size_t>(merged.left)].members;
    const auto& rm = nodes[static_cast<std::size_t>(merged.right)].members;
    merged.members.insert(merged.members.end(), rm.begin(), rm.end());
    nodes.push_back(std::move(merged));
    roots.erase(roots.begin() + static_cast<std::ptrdiff_t>(bj));
    roots[bi] = static_cast<int>(nodes.size() - 1);
  }
  return nodes;
}

}  // namespace

Matrix jordan_block(Complex lambda, Index dimension) {
  if (dimension < 1) throw DomainError("jordan_block: dimension must be positive");
  Matrix j = lambda * identity(dimension);
  for (Index i = 0; i + 1 < dimension; ++i) j(i, i + 1) = 1.0;
  return j;
}

std::vector<Index> weyr_sequence(const Matrix& m, Complex lambda, const Tolerances& tol) {
  require_square(m, "weyr_sequence");
  if (max_abs_imag(m) == 0.0 && lambda.imag() == 0.0) {
    const RealMatrix shifted = m.real() - lambda.real() * RealMatrix::Identity(m.rows(), m.cols());
    return staircase<double>(shifted, tol.rank_tol, opnorm(m)).weyr;
  }
  return complex_staircase(m, lambda, tol).weyr;
}

std::map<Index, Index> block_counts_from_weyr(const std::vector<Index>& weyr) {
  std::vector<Index> at_least;  // at_least[k-1] = #blocks of size >= k
  Index prev = 0;
  for (Index w : weyr) {
    at_least.push_back(w - prev);
    prev = w;
  }
  std::map<Index, Index> counts;
  for (std::size_t k = 0; k < at_least.size(); ++k) {
    const Index next = k + 1 < at_least.size() ? at_least[k + 1] : 0;
    const Index exact = at_least[k] - next;
    if (exact > 0) counts[static_cast<Index>(k + 1)] = exact;
  }
  return counts;
}

std::map<Index, Index> block_counts(const Matrix& m, Complex lambda, const Tolerances& tol) {
  return block_counts_from_weyr(weyr_sequence(m, lambda, tol));
}

std::vector<EigenCluster> eigenvalue_clusters(const Matrix& m, const Tolerances& tol) {
  require_square(m, "eigenvalue_clusters");
  const Index n = m.rows();
  const bool real_input = max_abs_imag(m) == 0.0;
  const std::vector<Complex> ev = eigenvalues(m);
  const double scale = opnorm(m);

  // A d-dimensional block perturbed at relative level eps scatters its
  // eigenvalues on a circle of radius ~ scale * eps^(1/d).
  const double eps = static_cast<double>(n) * kConditionCap * kUnitRoundoff;
  auto allowed_radius = [&](Index mult, Complex center) {
    double r = tol.eig_cluster_tol * (1.0 + std::abs(center));
    if (mult >= 2) r = std::max(r, 10.0 * scale * std::pow(eps, 1.0 / static_cast<double>(mult)));
    return r;
  };
  auto normalized_center = [&](Complex c) {
    if (real_input && center_is_real(c, tol)) return Complex(c.real(), 0.0);
    return c;
  };

  const std::vector<Node> nodes = dendrogram(ev);
  std::vector<EigenCluster> clusters;
  std::vector<int> stack{static_cast<int>(nodes.size() - 1)};
  while (!stack.empty()) {
    const Node& node = nodes[static_cast<std::size_t>(stack.back())];
    stack.pop_back();
    const Index mult = static_cast<Index>(node.members.size());
    Complex center = 0.0;
    for (Index i : node.members) center += ev[static_cast<std::size_t>(i)];
    center /= static_cast<double>(mult);
    double radius = 0.0;
    for (Index i : node.members) radius = std::max(radius, std::abs(ev[static_cast<std::size_t>(i)] - center));

    bool accepted = false;
    if (radius <= allowed_radius(mult, center)) {
      center = normalized_center(center);
      const auto w = weyr_sequence(m, center, tol);
      accepted = w.back() == mult;
      if (!accepted && node.left < 0) {
        std::ostringstream msg;
        msg << "jordan: algebraic multiplicity at " << center << " is " << w.back()
            << " by rank test but the spectrum has " << mult << " eigenvalue(s) there";
        throw StructureAmbiguousError(msg.str(), center);
      }
    }
    if (accepted) {
      clusters.push_back({center, mult, radius});
    } else {
      stack.push_back(node.right);
      stack.push_back(node.left);
    }
  }

  std::sort(clusters.begin(), clusters.end(), [](const EigenCluster& a, const EigenCluster& b) {
    if (a.center.real() != b.center.real()) return a.center.real() < b.center.real();
    return a.center.imag() > b.center.imag();
  });

  for (std::size_t i = 0; i < clusters.size(); ++i) {
    for (std::size_t j = i + 1; j < clusters.size(); ++j) {
      const double gap = std::abs(clusters[i].center - clusters[j].center);
      const double need =
          2.0 * tol.eig_cluster_tol * (1.0 + std::max(std::abs(clusters[i].center), std::abs(clusters[j].center)));
      if (gap <= need) {
        throw StructureAmbiguousError("jordan: eigenvalue clusters are not separated", clusters[i].center);
      }
    }
  }

  if (real_input) {
    for (auto& c : clusters) {
      if (c.center.imag() <= 0.0) continue;
      auto partner = std::min_element(clusters.begin(), clusters.end(), [&](const auto& a, const auto& b) {
        return std::abs(a.center - std::conj(c.center)) < std::abs(b.center - std::conj(c.center));
      });
      if (partner->multiplicity != c.multiplicity ||
          std::abs(partner->center - std::conj(c.center)) > allowed_radius(c.multiplicity, c.center)) {
        throw StructureAmbiguousError("jordan: non-real cluster of a real matrix has no conjugate partner",
                                      c.center);
      }
      partner->center = std::conj(c.center);
    }
  }
  return clusters;
}

JordanStructure jordan_decompose(const Matrix& m, const Tolerances& tol) {
  require_square(m, "jordan_decompose");
  const Index n = m.rows();
  const bool real_input = max_abs_imag(m) == 0.0;
  const double norm = opnorm(m);

  JordanStructure out;
  out.clusters = eigenvalue_clusters(m, tol);

  std::vector<std::vector<Matrix>> chains(out.clusters.size());
  for (std::size_t ci = 0; ci < out.clusters.size(); ++ci) {
    const Complex lambda = out.clusters[ci].center;
    if (real_input && lambda.imag() < 0.0) continue;
    if (real_input && lambda.imag() == 0.0) {
      const RealMatrix shifted = m.real() - lambda.real() * RealMatrix::Identity(n, n);
      const auto sc = staircase<double>(shifted, tol.rank_tol, norm);
      for (auto& c : build_chains<double>(shifted, sc, tol.rank_tol, lambda)) chains[ci].push_back(to_complex(c));
    } else {
      const Matrix shifted = m - lambda * identity(n);
      const auto sc = staircase<Complex>(shifted, tol.rank_tol, norm);
      chains[ci] = build_chains<Complex>(shifted, sc, tol.rank_tol, lambda);
    }
  }
  if (real_input) {
    for (std::size_t ci = 0; ci < out.clusters.size(); ++ci) {
      if (out.clusters[ci].center.imag() >= 0.0) continue;
      for (std::size_t pj = 0; pj < out.clusters.size(); ++pj) {
        if (out.clusters[pj].center == std::conj(out.clusters[ci].center)) {
          for (const auto& c : chains[pj]) chains[ci].push_back(c.conjugate());
          break;
        }
      }
    }
  }

  std::vector<Matrix> jblocks;
  out.transform = Matrix::Zero(n, n);
  Index col = 0;
  for (std::size_t ci = 0; ci < out.clusters.size(); ++ci) {
    Index dims = 0;
    for (const auto& c : chains[ci]) {
      if (col + c.cols() > n) break;
      out.blocks.push_back({out.clusters[ci].center, c.cols(), c});
      out.transform.middleCols(col, c.cols()) = c;
      jblocks.push_back(jordan_block(out.clusters[ci].center, c.cols()));
      col += c.cols();
      dims += c.cols();
    }
    if (dims != out.clusters[ci].multiplicity) {
      throw StructureAmbiguousError("jordan: chains do not span the generalized eigenspace",
                                    out.clusters[ci].center);
    }
  }
  out.normal_form = direct_sum(jblocks);

  const RankKernel rk = rank_and_kernel(out.transform, tol);
  if (rk.rank < n) {
    throw StructureAmbiguousError("jordan: assembled transform is numerically singular",
                                  out.clusters.empty() ? Complex{} : out.clusters.front().center);
  }
  out.condition = condition_number(out.transform);
  const double denom = std::max(opnorm(m), std::numeric_limits<double>::min()) * opnorm(out.transform);
  out.residual = opnorm(m * out.transform - out.transform * out.normal_form) / denom;
  if (out.residual > tol.verify_tol) {
    std::ostringstream msg;
    msg << "jordan: reconstruction residual " << out.residual << " exceeds verify_tol";
    throw StructureAmbiguousError(msg.str(), out.clusters.front().center);
  }
  return out;
}

}  // namespace semiembed
