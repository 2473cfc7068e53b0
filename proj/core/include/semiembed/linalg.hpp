#pragma once

// Dense complex matrix kernel shared by every decision procedure.

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace semiembed {

using Complex = std::complex<double>;
using Index = Eigen::Index;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;

/// Numerical thresholds. Every decision in the library is taken against one
/// of these fields, and reports echo the values that were used.
struct Tolerances {
  double rank_tol = 1e-10;         ///< singular-value cutoff, relative to the largest
  double eig_cluster_tol = 1e-8;   ///< eigenvalue clustering radius, relative
  double verify_tol = 1e-8;        ///< residual acceptance
  double positivity_tol = 1e-12;   ///< entrywise sign threshold

  /// Throws DomainError when any field is negative or not finite.
  void validate() const;
};

// --- predicates -------------------------------------------------------------

bool is_square(const Matrix& m) noexcept;
double max_abs_imag(const Matrix& m) noexcept;
/// max |Im(entry)| <= tau
bool is_real(const Matrix& m, double tau) noexcept;
/// is_real(m, tau) and min Re(entry) >= -tau
bool is_positive(const Matrix& m, double tau) noexcept;
void require_square(const Matrix& m, const char* what);

// --- conversions ------------------------------------------------------------

Matrix to_complex(const RealMatrix& m);
RealMatrix real_part(const Matrix& m);
Matrix identity(Index n);

// --- spectral ---------------------------------------------------------------

/// All n eigenvalues with algebraic multiplicity. Real input goes through the
/// real Schur form so the result is exactly closed under conjugation.
std::vector<Complex> eigenvalues(const Matrix& m);

/// Sign/zero classes of an eigenvalue used by every embeddability test.
enum class EigenClass { Zero, NegativeReal, PositiveReal, NonReal };

/// "zero" iff |lambda| <= eig_tol (1 + matrix_norm); "negative real" iff
/// |Im| <= eig_tol (1 + |lambda|) and Re < -eig_tol (1 + |lambda|).
EigenClass classify_eigenvalue(Complex lambda, double matrix_norm, const Tolerances& tol);
const char* to_string(EigenClass c) noexcept;

// --- rank and norms ---------------------------------------------------------

struct RankKernel {
  Index rank = 0;
  Matrix kernel;  ///< orthonormal columns spanning the numerical kernel
};

/// Rank counts singular values above rank_tol times the largest one.
RankKernel rank_and_kernel(const Matrix& m, const Tolerances& tol);

std::vector<double> singular_values(const Matrix& m);
/// Spectral norm (largest singular value).
double opnorm(const Matrix& m);
/// sigma_max / sigma_min; infinity for singular input.
double condition_number(const Matrix& m);

// --- functions of matrices --------------------------------------------------

/// Matrix exponential, scaling and squaring around a diagonal Pade core.
Matrix expm(const Matrix& m);

/// expm evaluated in long double with extra scaling; used where the exponential
/// of a large, non-normal generator must be checked against a target.
Matrix expm_extended(const Matrix& m);

/// Solves M X = B. Throws SingularMatrixError when M is rank deficient at
/// rank_tol.
Matrix solve(const Matrix& m, const Matrix& b, const Tolerances& tol = {});

/// P * J * P^{-1}
Matrix similarity(const Matrix& p, const Matrix& j, const Tolerances& tol = {});

/// Block diagonal assembly.
Matrix direct_sum(const std::vector<Matrix>& blocks);

}  // namespace semiembed
