#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "semiembed/errors.hpp"
#include "semiembed/jordan.hpp"
#include "semiembed/positive_embed.hpp"
#include "semiembed/verify.hpp"

using namespace semiembed;
using semiembed::testing::real_matrix;

TEST(Oracle, WorkedExamples) {
  auto blocks = oracle_jordan_structure(direct_sum({jordan_block(2.0, 2), jordan_block(2.0, 1)}));
  EXPECT_EQ(oracle_count(blocks, 2.0, 2), 1);
  EXPECT_EQ(oracle_count(blocks, 2.0, 1), 1);
  EXPECT_EQ(oracle_count(blocks, 2.0, 3), 0);

  blocks = oracle_jordan_structure(real_matrix({{0, 1}, {0, 0}}));
  ASSERT_EQ(blocks.size(), 1u);
  EXPECT_EQ(blocks[0].dimension, 2);
  EXPECT_EQ(blocks[0].count, 1);

  // Squaring a nilpotent block splits it in two.
  const Matrix s = real_matrix({{0, 1}, {0, 0}});
  blocks = oracle_jordan_structure(s * s);
  EXPECT_EQ(oracle_count(blocks, 0.0, 1), 2);
}

TEST(Oracle, SurvivesIntegerSimilarity) {
  const Matrix j = direct_sum({jordan_block(-1.0, 2), jordan_block(-1.0, 2)});
  const Matrix p = real_matrix({{1, 1, 0, 0}, {0, 1, 1, 0}, {0, 0, 1, 1}, {0, 0, 0, 1}});
  const Matrix p_inv = real_matrix({{1, -1, 1, -1}, {0, 1, -1, 1}, {0, 0, 1, -1}, {0, 0, 0, 1}});
  ASSERT_LE((p * p_inv - identity(4)).norm(), 0.0);
  const auto blocks = oracle_jordan_structure(p * j * p_inv);
  EXPECT_EQ(oracle_count(blocks, -1.0, 2), 2);
  EXPECT_EQ(oracle_count(blocks, -1.0, 1), 0);
  EXPECT_THROW(oracle_jordan_structure(identity(9)), DimensionError);
}

TEST(Ensembles, AreDeterministicPerTrial) {
  Rng a = trial_rng(1, 2, 3);
  Rng b = trial_rng(1, 2, 3);
  Rng c = trial_rng(1, 2, 4);
  const RealMatrix ma = random_real_embeddable(5, a);
  EXPECT_EQ(ma, random_real_embeddable(5, b));
  EXPECT_NE(ma, random_real_embeddable(5, c));
}

TEST(Ensembles, UnimodularInverseIsExact) {
  for (std::uint64_t i = 0; i < 50; ++i) {
    Rng rng = trial_rng(5, 0, i);
    const Unimodular u = random_unimodular(1 + static_cast<Index>(i % 8), rng, 6);
    EXPECT_EQ((u.p * u.inverse - RealMatrix::Identity(u.p.rows(), u.p.rows())).cwiseAbs().maxCoeff(), 0.0);
  }
}

TEST(Ensembles, ConditionBound) {
  for (std::uint64_t i = 0; i < 50; ++i) {
    Rng rng = trial_rng(6, 0, i);
    const RealMatrix s = random_similarity(6, rng, 100.0);
    EXPECT_LE(condition_number(to_complex(s)), 100.0 * (1 + 1e-10));
  }
}

TEST(Ensembles, MetzlerSign) {
  Rng rng = trial_rng(7, 0, 0);
  const RealMatrix m = random_metzler(6, rng, 0.5);
  for (Index i = 0; i < 6; ++i) {
    EXPECT_LE(m(i, i), 0.0);
    for (Index j = 0; j < 6; ++j) {
      if (i != j) { EXPECT_GE(m(i, j), 0.0); }
    }
  }
}

TEST(Probes, SmallRunsPass) {
  for (const auto& outcome : {probe_spectral_mapping(60, 6, 11), probe_parity_necessity(60, 6, 12),
                              probe_jordan_cross_check(60, 6, 13), probe_chu_vandermonde(60, 8, 14),
                              probe_metzler_forward(40, 6, 15), probe_positive_2x2(300, 16)}) {
    EXPECT_TRUE(outcome.passed()) << outcome.name << ": " << outcome.failures << " failures, " << outcome.note;
    EXPECT_GT(outcome.trials, 0u) << outcome.name;
  }
}

TEST(Probes, CertificateProbesPass) {
  std::vector<EmbeddingCertificate> certs;
  const auto soundness = probe_certificate_soundness(30, 5, 17, {}, &certs);
  EXPECT_TRUE(soundness.passed()) << soundness.note;
  ASSERT_FALSE(certs.empty());
  for (std::size_t i = 0; i < std::min<std::size_t>(certs.size(), 5); ++i) {
    EXPECT_TRUE(probe_semigroup_law(certs[i]).passed());
    EXPECT_TRUE(probe_semigroup_consistency(certs[i], 5).passed());
  }
  const auto corpus = positive_certificate_corpus(30, 18);
  ASSERT_FALSE(corpus.empty());
  for (const auto& cert : corpus) EXPECT_TRUE(cert.positive());
  EXPECT_TRUE(probe_zero_pattern(corpus).passed());
}

TEST(Probes, DetectBrokenTolerances) {
  // A huge rank tolerance collapses distinct blocks; the cross-check must notice.
  Tolerances loose;
  loose.rank_tol = 0.5;
  const auto outcome = probe_jordan_cross_check(60, 6, 19, loose);
  EXPECT_GT(outcome.failures, 0u);
  EXPECT_TRUE(outcome.counterexample.has_value());
}

TEST(Probes, SemigroupLawFlagsAWrongFlow) {
  EmbeddingCertificate cert;
  cert.generator = real_matrix({{0, 1}, {-1, 0}});
  cert.target = expm(cert.generator);
  EXPECT_TRUE(probe_semigroup_law(cert).passed());
  EXPECT_TRUE(probe_semigroup_consistency(cert, 6).passed());
  // Claiming a positive construction for a generator with negative off-diagonals
  // has to fail the diagonal and positivity checks somewhere on the grid.
  cert.generator = real_matrix({{0, 4}, {-4, 0}});
  cert.target = expm(cert.generator);
  cert.construction = Construction::MetzlerSearch;
  EXPECT_FALSE(probe_semigroup_consistency(cert, 6).passed());
}

TEST(Suite, NamesAndSelection) {
  const auto& names = probe_names();
  EXPECT_EQ(names.size(), 10u);
  EXPECT_EQ(names.front(), "spectral-mapping");
  EXPECT_THROW(run_suite(1, "no-such-probe"), DomainError);
  const auto only = run_suite(1, "chu-vandermonde");
  ASSERT_EQ(only.size(), 1u);
  EXPECT_EQ(only[0].name, "chu-vandermonde");
  EXPECT_TRUE(only[0].passed());
}
