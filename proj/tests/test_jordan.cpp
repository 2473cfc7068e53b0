#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "semiembed/errors.hpp"
#include "semiembed/jordan.hpp"
#include "semiembed/verify.hpp"

using namespace semiembed;
using semiembed::testing::real_matrix;
using semiembed::testing::rel_gap;

namespace {

const Tolerances kTol;

Matrix block_sum(std::initializer_list<std::pair<Complex, Index>> blocks) {
  std::vector<Matrix> parts;
  for (const auto& [lambda, d] : blocks) parts.push_back(jordan_block(lambda, d));
  return direct_sum(parts);
}

void expect_chain_invariants(const Matrix& m, const JordanStructure& js) {
  const double norm = std::max(1.0, opnorm(m));
  Index total = 0;
  for (const auto& b : js.blocks) {
    total += b.dimension;
    ASSERT_EQ(b.chain.cols(), b.dimension);
    const Matrix shifted = m - b.eigenvalue * identity(m.rows());
    const double scale = b.chain.colwise().norm().maxCoeff();
    EXPECT_LE((shifted * b.chain.col(0)).norm(), kTol.verify_tol * norm * scale);
    for (Index k = 1; k < b.dimension; ++k) {
      EXPECT_LE((shifted * b.chain.col(k) - b.chain.col(k - 1)).norm(), kTol.verify_tol * norm * scale);
    }
  }
  EXPECT_EQ(total, m.rows());
  EXPECT_EQ(rank_and_kernel(js.transform, kTol).rank, m.rows());
  EXPECT_LE(opnorm(m * js.transform - js.transform * js.normal_form),
            kTol.verify_tol * norm * opnorm(js.transform));
}

}  // namespace

TEST(JordanBlock, Shape) {
  const Matrix j = jordan_block(Complex(2.0), 3);
  EXPECT_EQ(j(0, 0), Complex(2.0));
  EXPECT_EQ(j(0, 1), Complex(1.0));
  EXPECT_EQ(j(0, 2), Complex(0.0));
  EXPECT_THROW(jordan_block(Complex(1.0), 0), DomainError);
}

TEST(Weyr, Examples) {
  EXPECT_EQ(weyr_sequence(jordan_block(1.0, 3), 1.0, kTol), (std::vector<Index>{1, 2, 3}));
  EXPECT_EQ(weyr_sequence(identity(2), 1.0, kTol), (std::vector<Index>{2, 2}));
  EXPECT_EQ(weyr_sequence(block_sum({{1.0, 2}, {1.0, 1}}), 1.0, kTol), (std::vector<Index>{2, 3, 3}));
}

TEST(BlockCounts, Examples) {
  EXPECT_EQ(block_counts(block_sum({{-1.0, 2}, {-1.0, 2}}), -1.0, kTol), (std::map<Index, Index>{{2, 2}}));
  EXPECT_EQ(block_counts(real_matrix({{-1}}), -1.0, kTol), (std::map<Index, Index>{{1, 1}}));
  EXPECT_EQ(block_counts(block_sum({{5.0, 3}, {5.0, 1}}), 5.0, kTol), (std::map<Index, Index>{{1, 1}, {3, 1}}));
  EXPECT_EQ(block_counts_from_weyr({2, 3, 4}), (std::map<Index, Index>{{1, 1}, {3, 1}}));
}

TEST(Clusters, ConjugateSymmetricForRealInput) {
  const auto clusters = eigenvalue_clusters(real_matrix({{0, 1}, {-1, 0}}), kTol);
  ASSERT_EQ(clusters.size(), 2u);
  EXPECT_EQ(clusters[0].center, std::conj(clusters[1].center));
  const auto triple = eigenvalue_clusters(jordan_block(2.0, 3), kTol);
  ASSERT_EQ(triple.size(), 1u);
  EXPECT_EQ(triple[0].multiplicity, 3);
  EXPECT_EQ(triple[0].center.imag(), 0.0);
}

TEST(Decompose, Examples) {
  auto js = jordan_decompose(real_matrix({{1, 1}, {0, 1}}), kTol);
  ASSERT_EQ(js.blocks.size(), 1u);
  EXPECT_EQ(js.blocks[0].dimension, 2);
  expect_chain_invariants(real_matrix({{1, 1}, {0, 1}}), js);

  const Matrix rot = real_matrix({{0, 1}, {-1, 0}});
  js = jordan_decompose(rot, kTol);
  ASSERT_EQ(js.blocks.size(), 2u);
  const auto& a = js.blocks[0];
  const auto& b = js.blocks[1];
  EXPECT_NEAR(std::abs(a.eigenvalue - std::conj(b.eigenvalue)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(a.eigenvalue.imag()), 1.0, 1e-14);
  EXPECT_LE((a.chain - b.chain.conjugate()).norm(), 1e-14);
  expect_chain_invariants(rot, js);

  const Matrix sym = real_matrix({{2, 1}, {1, 2}});
  js = jordan_decompose(sym, kTol);
  ASSERT_EQ(js.blocks.size(), 2u);
  for (const auto& blk : js.blocks) {
    const Vector x = blk.chain.col(0) / blk.chain.col(0)(0);
    const double sign = std::abs(blk.eigenvalue - 3.0) < 1e-12 ? 1.0 : -1.0;
    EXPECT_NEAR(std::abs(x(1) - sign), 0.0, 1e-12);
    EXPECT_EQ(max_abs_imag(blk.chain), 0.0);
  }
  expect_chain_invariants(sym, js);
}

TEST(Decompose, RejectsUnseparatedClusters) {
  // Two eigenvalues 1e-7 apart with a nearly defective coupling.
  Matrix m = real_matrix({{1, 1}, {0, 1 + 1e-7}});
  try {
    const auto js = jordan_decompose(m, kTol);
    // If it resolves, the structure must still satisfy its invariants.
    expect_chain_invariants(m, js);
  } catch (const StructureAmbiguousError& e) {
    EXPECT_NEAR(e.cluster().real(), 1.0, 1e-6);
  }
  EXPECT_THROW(jordan_decompose(Matrix(2, 3), kTol), DimensionError);
}

TEST(Decompose, ReconstructionOnRandomSimilarities) {
  for (std::uint64_t trial = 0; trial < 150; ++trial) {
    Rng rng = trial_rng(101, 0, trial);
    const Index n = 1 + static_cast<Index>(trial % 6);
    const Matrix m = to_complex(random_real_jordan(n, rng));
    const JordanStructure js = jordan_decompose(m, kTol);
    expect_chain_invariants(m, js);
    const Matrix back = similarity(js.transform, js.normal_form, kTol);
    EXPECT_LE(opnorm(back - m), kTol.verify_tol * js.condition * opnorm(m)) << "trial " << trial;
    // Real eigenvalues of real input carry real chains.
    for (const auto& b : js.blocks) {
      if (b.eigenvalue.imag() == 0.0) { EXPECT_EQ(max_abs_imag(b.chain), 0.0); }
    }
  }
}

TEST(Decompose, SquaringKeepsASingleBlock) {
  for (std::uint64_t trial = 0; trial < 60; ++trial) {
    Rng rng = trial_rng(103, 0, trial);
    const Index d = 1 + static_cast<Index>(trial % 4);
    const double lambda = (trial % 2 == 0 ? 1.0 : -1.0) * (0.5 + 0.25 * static_cast<double>(trial % 5));
    const RealMatrix p = random_similarity(d, rng, 1e2);
    const RealMatrix j = jordan_block(lambda, d).real();
    const RealMatrix m = p * j * p.inverse();
    const Matrix sq = to_complex(RealMatrix(m * m));
    EXPECT_EQ(block_counts(sq, lambda * lambda, kTol), (std::map<Index, Index>{{d, 1}})) << "trial " << trial;
  }
}
