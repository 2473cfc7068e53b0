#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "semiembed/errors.hpp"
#include "semiembed/linalg.hpp"

using namespace semiembed;
using semiembed::testing::real_matrix;
using semiembed::testing::rel_gap;
using semiembed::testing::taylor_expm;

namespace {

std::vector<Complex> sorted(std::vector<Complex> v) {
  std::sort(v.begin(), v.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return v;
}

}  // namespace

TEST(Tolerances, DefaultsAndValidation) {
  const Tolerances tol;
  EXPECT_DOUBLE_EQ(tol.rank_tol, 1e-10);
  EXPECT_DOUBLE_EQ(tol.eig_cluster_tol, 1e-8);
  EXPECT_DOUBLE_EQ(tol.verify_tol, 1e-8);
  EXPECT_DOUBLE_EQ(tol.positivity_tol, 1e-12);
  EXPECT_NO_THROW(tol.validate());
  Tolerances bad;
  bad.verify_tol = -1.0;
  EXPECT_THROW(bad.validate(), DomainError);
  bad = {};
  bad.rank_tol = std::nan("");
  EXPECT_THROW(bad.validate(), DomainError);
}

TEST(Predicates, RealAndPositive) {
  Matrix m = real_matrix({{1, 0}, {0, 2}});
  EXPECT_TRUE(is_real(m, 0.0));
  EXPECT_TRUE(is_positive(m, 0.0));
  m(0, 1) = Complex(0.0, 1e-13);
  EXPECT_TRUE(is_real(m, 1e-12));
  EXPECT_FALSE(is_real(m, 1e-14));
  m(0, 1) = -1e-13;
  EXPECT_TRUE(is_positive(m, 1e-12));
  EXPECT_FALSE(is_positive(m, 1e-14));
  EXPECT_THROW(require_square(Matrix(2, 3), "t"), DimensionError);
}

TEST(Eigenvalues, Examples) {
  auto ev = sorted(eigenvalues(real_matrix({{2, 0}, {0, 3}})));
  EXPECT_NEAR(std::abs(ev[0] - Complex(2)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(ev[1] - Complex(3)), 0.0, 1e-14);

  ev = sorted(eigenvalues(real_matrix({{0, 1}, {-1, 0}})));
  EXPECT_NEAR(std::abs(ev[0] - Complex(0, -1)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(ev[1] - Complex(0, 1)), 0.0, 1e-14);

  ev = sorted(eigenvalues(real_matrix({{2, 1}, {1, 2}})));
  EXPECT_NEAR(std::abs(ev[0] - Complex(1)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(ev[1] - Complex(3)), 0.0, 1e-14);

  EXPECT_THROW(eigenvalues(Matrix(2, 3)), DimensionError);
}

TEST(Eigenvalues, ConjugationClosureForRealInput) {
  std::mt19937_64 rng(11);
  const Tolerances tol;
  for (int trial = 0; trial < 200; ++trial) {
    const Index n = 1 + trial % 7;
    const Matrix m = to_complex(semiembed::testing::random_real(n, n, rng));
    const auto ev = eigenvalues(m);
    for (const Complex z : ev) {
      double best = 1e300;
      for (const Complex w : ev) best = std::min(best, std::abs(std::conj(z) - w));
      EXPECT_LE(best, tol.eig_cluster_tol);
    }
  }
}

TEST(Eigenvalues, Classification) {
  const Tolerances tol;
  EXPECT_EQ(classify_eigenvalue(Complex(-2.0, 0.0), 2.0, tol), EigenClass::NegativeReal);
  EXPECT_EQ(classify_eigenvalue(Complex(-2.0, 1e-9), 2.0, tol), EigenClass::NegativeReal);
  EXPECT_EQ(classify_eigenvalue(Complex(-2.0, 1e-6), 2.0, tol), EigenClass::NonReal);
  EXPECT_EQ(classify_eigenvalue(Complex(1e-9, 0.0), 1.0, tol), EigenClass::Zero);
  EXPECT_EQ(classify_eigenvalue(Complex(0.5, 0.0), 1.0, tol), EigenClass::PositiveReal);
  EXPECT_STREQ(to_string(EigenClass::NegativeReal), "negative-real");
}

TEST(RankKernel, Examples) {
  const Tolerances tol;
  auto rk = rank_and_kernel(Matrix::Zero(3, 3), tol);
  EXPECT_EQ(rk.rank, 0);
  EXPECT_EQ(rk.kernel.cols(), 3);

  rk = rank_and_kernel(identity(3), tol);
  EXPECT_EQ(rk.rank, 3);
  EXPECT_EQ(rk.kernel.cols(), 0);

  rk = rank_and_kernel(real_matrix({{1, 1}, {1, 1}}), tol);
  EXPECT_EQ(rk.rank, 1);
  ASSERT_EQ(rk.kernel.cols(), 1);
  const Vector k = rk.kernel.col(0);
  EXPECT_NEAR(std::abs(k(0) + k(1)), 0.0, 1e-14);
  EXPECT_NEAR(k.norm(), 1.0, 1e-14);
}

TEST(RankKernel, ScaleInvariantAndOrthonormal) {
  std::mt19937_64 rng(5);
  const Tolerances tol;
  for (int trial = 0; trial < 50; ++trial) {
    const Index n = 2 + trial % 5;
    const Index r = 1 + trial % n;
    const RealMatrix m = semiembed::testing::random_real(n, r, rng) * semiembed::testing::random_real(r, n, rng);
    const auto base = rank_and_kernel(to_complex(m), tol);
    EXPECT_EQ(base.rank + base.kernel.cols(), n);
    for (double c : {1e-6, 1.0, 1e6}) EXPECT_EQ(rank_and_kernel(to_complex(c * m), tol).rank, base.rank);
    const Matrix gram = base.kernel.adjoint() * base.kernel;
    EXPECT_LE((gram - identity(gram.rows())).norm(), 1e-12);
    EXPECT_LE((to_complex(m) * base.kernel).norm(), 1e-10 * std::max(1.0, m.norm()));
  }
}

TEST(Norms, OpnormExamples) {
  EXPECT_NEAR(opnorm(identity(4)), 1.0, 1e-15);
  EXPECT_NEAR(opnorm(real_matrix({{3, 0}, {0, -1}})), 3.0, 1e-15);
  EXPECT_NEAR(opnorm(real_matrix({{0, 2}, {0, 0}})), 2.0, 1e-15);
  EXPECT_NEAR(condition_number(real_matrix({{4, 0}, {0, 2}})), 2.0, 1e-14);
  EXPECT_EQ(singular_values(real_matrix({{0, 2}, {0, 0}})).size(), 2u);
}

TEST(Expm, Examples) {
  EXPECT_LE(rel_gap(expm(Matrix::Zero(3, 3)), identity(3)), 1e-15);
  EXPECT_LE(rel_gap(expm(real_matrix({{0, 1}, {0, 0}})), real_matrix({{1, 1}, {0, 1}})), 1e-15);
  const Matrix a = std::log(3.0) / 2.0 * real_matrix({{1, 1}, {1, 1}});
  EXPECT_LE(rel_gap(expm(a), real_matrix({{2, 1}, {1, 2}})), 1e-14);
  const Matrix rot = std::numbers::pi * real_matrix({{0, -1}, {1, 0}});
  EXPECT_LE(rel_gap(expm(rot), -identity(2)), 1e-14);
}

TEST(Expm, MatchesTaylorOracleAcrossNormRanges) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 120; ++trial) {
    const Index n = 1 + trial % 6;
    const double scale = std::pow(10.0, -3.0 + 4.0 * (trial % 10) / 9.0);  // 1e-3 .. 10
    Matrix m = to_complex(scale * semiembed::testing::random_real(n, n, rng));
    if (trial % 3 == 0) m += Complex(0.0, 1.0) * to_complex(scale * semiembed::testing::random_real(n, n, rng));
    const Matrix ref = taylor_expm(m);
    EXPECT_LE(rel_gap(expm(m), ref), 1e-12 * std::max(1.0, opnorm(m))) << "trial " << trial;
    EXPECT_LE(rel_gap(expm_extended(m), ref), 1e-13 * std::max(1.0, opnorm(m))) << "trial " << trial;
  }
}

TEST(Expm, NilpotentIsExactAndRealStaysReal) {
  for (Index n = 2; n <= 6; ++n) {
    Matrix n_mat = Matrix::Zero(n, n);
    for (Index i = 0; i + 1 < n; ++i) n_mat(i, i + 1) = 1.0;
    const Matrix e = expm(n_mat);
    double fact = 1.0;
    for (Index k = 0; k < n; ++k) {
      if (k > 0) fact *= static_cast<double>(k);
      for (Index i = 0; i + k < n; ++i) EXPECT_NEAR(e(i, i + k).real(), 1.0 / fact, 1e-15);
    }
    EXPECT_EQ(max_abs_imag(e), 0.0);
  }
}

TEST(Expm, CommutingPairsMultiply) {
  std::mt19937_64 rng(23);
  const Tolerances tol;
  for (int trial = 0; trial < 60; ++trial) {
    const Index n = 1 + trial % 6;
    const Matrix x = to_complex(semiembed::testing::random_real(n, n, rng));
    const Matrix a = 0.5 * x + 0.3 * x * x;
    const Matrix b = identity(n) - 0.7 * x + 0.1 * x * x * x;
    EXPECT_LE(rel_gap(expm(a + b), expm(a) * expm(b)), tol.verify_tol);
  }
}

TEST(Expm, NormBound) {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 60; ++trial) {
    const Index n = 1 + trial % 6;
    const Matrix m = to_complex(3.0 * semiembed::testing::random_real(n, n, rng));
    EXPECT_LE(opnorm(expm(m)), std::exp(opnorm(m)) * (1.0 + 1e-10));
  }
}

TEST(Solve, ExamplesAndErrors) {
  const Matrix b = real_matrix({{1, 2}, {3, 4}});
  EXPECT_LE(rel_gap(solve(identity(2), b), b), 1e-15);
  EXPECT_LE(rel_gap(solve(real_matrix({{2, 0}, {0, 4}}), identity(2)), real_matrix({{0.5, 0}, {0, 0.25}})), 1e-15);
  const Matrix x = solve(real_matrix({{1, 1}, {0, 1}}), real_matrix({{1}, {1}}));
  EXPECT_NEAR(std::abs(x(0, 0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(x(1, 0) - 1.0), 0.0, 1e-15);
  EXPECT_THROW(solve(real_matrix({{1, 1}, {1, 1}}), b), SingularMatrixError);
  EXPECT_THROW(solve(identity(2), Matrix::Zero(3, 1)), DimensionError);
}

TEST(Solve, ResidualContract) {
  std::mt19937_64 rng(31);
  const Tolerances tol;
  for (int trial = 0; trial < 60; ++trial) {
    const Index n = 1 + trial % 7;
    const Matrix m = to_complex(semiembed::testing::random_real(n, n, rng)) + 2.0 * identity(n);
    const Matrix b = to_complex(semiembed::testing::random_real(n, 2, rng));
    EXPECT_LE(opnorm(m * solve(m, b) - b), tol.verify_tol * opnorm(b));
  }
}

TEST(Similarity, RoundTripAndDirectSum) {
  const Matrix p = real_matrix({{1, 1}, {1, -1}});
  const Matrix j = real_matrix({{3, 0}, {0, 1}});
  EXPECT_LE(rel_gap(similarity(p, j), real_matrix({{2, 1}, {1, 2}})), 1e-15);
  const Matrix d = direct_sum({real_matrix({{1}}), real_matrix({{2, 3}, {4, 5}})});
  EXPECT_EQ(d.rows(), 3);
  EXPECT_EQ(d(1, 2), Complex(3.0));
  EXPECT_EQ(d(0, 1), Complex(0.0));
}
