#include "semiembed/linalg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "semiembed/errors.hpp"

namespace semiembed {

void Tolerances::validate() const {
  const std::array<std::pair<const char*, double>, 4> fields{{
      {"rank_tol", rank_tol},
      {"eig_cluster_tol", eig_cluster_tol},
      {"verify_tol", verify_tol},
      {"positivity_tol", positivity_tol},
  }};
  for (const auto& [name, value] : fields) {
    if (!std::isfinite(value) || value < 0.0) {
      throw DomainError(std::string("tolerance ") + name + " must be finite and nonnegative");
    }
  }
}

bool is_square(const Matrix& m) noexcept { return m.rows() == m.cols(); }

double max_abs_imag(const Matrix& m) noexcept {
  return m.size() == 0 ? 0.0 : m.imag().cwiseAbs().maxCoeff();
}

bool is_real(const Matrix& m, double tau) noexcept { return max_abs_imag(m) <= tau; }

bool is_positive(const Matrix& m, double tau) noexcept {
  return is_real(m, tau) && (m.size() == 0 || m.real().minCoeff() >= -tau);
}

void require_square(const Matrix& m, const char* what) {
  if (!is_square(m) || m.rows() == 0) {
    throw DimensionError(std::string(what) + ": expected a nonempty square matrix, got " +
                         std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

Matrix to_complex(const RealMatrix& m) { return m.cast<Complex>(); }

RealMatrix real_part(const Matrix& m) { return m.real(); }

Matrix identity(Index n) { return Matrix::Identity(n, n); }

std::vector<Complex> eigenvalues(const Matrix& m) {
  require_square(m, "eigenvalues");
  std::vector<Complex> out;
  out.reserve(static_cast<std::size_t>(m.rows()));
  if (max_abs_imag(m) == 0.0) {
    Eigen::EigenSolver<RealMatrix> solver(m.real(), /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) throw Error("eigenvalues: real Schur iteration did not converge");
    for (Index i = 0; i < m.rows(); ++i) out.push_back(solver.eigenvalues()(i));
  } else {
    Eigen::ComplexEigenSolver<Matrix> solver(m, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) throw Error("eigenvalues: complex Schur iteration did not converge");
    for (Index i = 0; i < m.rows(); ++i) out.push_back(solver.eigenvalues()(i));
  }
  return out;
}

EigenClass classify_eigenvalue(Complex lambda, double matrix_norm, const Tolerances& tol) {
  const double mag = std::abs(lambda);
  if (mag <= tol.eig_cluster_tol * (1.0 + matrix_norm)) return EigenClass::Zero;
  const double band = tol.eig_cluster_tol * (1.0 + mag);
  if (std::abs(lambda.imag()) <= band) {
    if (lambda.real() < -band) return EigenClass::NegativeReal;
    if (lambda.real() > band) return EigenClass::PositiveReal;
  }
  return EigenClass::NonReal;
}

const char* to_string(EigenClass c) noexcept {
  switch (c) {
    case EigenClass::Zero: return "zero";
    case EigenClass::NegativeReal: return "negative-real";
    case EigenClass::PositiveReal: return "positive-real";
    case EigenClass::NonReal: return "non-real";
  }
  return "?";
}

std::vector<double> singular_values(const Matrix& m) {
  if (m.size() == 0) return {};
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& s = svd.singularValues();
  return {s.data(), s.data() + s.size()};
}

double opnorm(const Matrix& m) {
  const auto s = singular_values(m);
  return s.empty() ? 0.0 : s.front();
}

double condition_number(const Matrix& m) {
  const auto s = singular_values(m);
  if (s.empty()) return 1.0;
  if (s.back() == 0.0) return std::numeric_limits<double>::infinity();
  return s.front() / s.back();
}

RankKernel rank_and_kernel(const Matrix& m, const Tolerances& tol) {
  RankKernel out;
  const Index cols = m.cols();
  if (m.size() == 0) {
    out.kernel = identity(cols);
    return out;
  }
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double cutoff = tol.rank_tol * s(0);
  Index rank = 0;
  if (s(0) > 0.0) {
    while (rank < s.size() && s(rank) > cutoff) ++rank;
  }
  out.rank = rank;
  out.kernel = svd.matrixV().rightCols(cols - rank);
  return out;
}

namespace {

template <typename Mat>
double norm1(const Mat& a) {
  return a.cwiseAbs().colwise().sum().maxCoeff();
}

// Diagonal Pade approximants r_m of exp, m in {3,5,7,9,13}, with the
// backward-error bounds theta_m for double precision.
template <typename Mat>
Mat pade_exp(const Mat& a, int degree) {
  using Scalar = typename Mat::Scalar;
  const Index n = a.rows();
  const Mat eye = Mat::Identity(n, n);
  Mat u;
  Mat v;
  if (degree == 13) {
    static constexpr std::array<double, 14> b{
        64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
        129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
        1323241920.0,        40840800.0,          960960.0,           16380.0,
        182.0,               1.0};
    const Mat a2 = a * a;
    const Mat a4 = a2 * a2;
    const Mat a6 = a4 * a2;
    const Mat inner_u = Scalar(b[13]) * a6 + Scalar(b[11]) * a4 + Scalar(b[9]) * a2;
    const Mat tmp_u = a6 * inner_u + Scalar(b[7]) * a6 + Scalar(b[5]) * a4 + Scalar(b[3]) * a2 +
                      Scalar(b[1]) * eye;
    u = a * tmp_u;
    const Mat inner_v = Scalar(b[12]) * a6 + Scalar(b[10]) * a4 + Scalar(b[8]) * a2;
    v = a6 * inner_v + Scalar(b[6]) * a6 + Scalar(b[4]) * a4 + Scalar(b[2]) * a2 + Scalar(b[0]) * eye;
  } else {
    static constexpr std::array<double, 4> b3{120.0, 60.0, 12.0, 1.0};
    static constexpr std::array<double, 6> b5{30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
    static constexpr std::array<double, 8> b7{17297280.0, 8648640.0, 1995840.0, 277200.0,
                                              25200.0,    1512.0,    56.0,      1.0};
    static constexpr std::array<double, 10> b9{17643225600.0, 8821612800.0, 2075673600.0,
                                               302702400.0,   30270240.0,   2162160.0,
                                               110880.0,      3960.0,       90.0,
                                               1.0};
    const double* b = degree == 3 ? b3.data() : degree == 5 ? b5.data() : degree == 7 ? b7.data() : b9.data();
    const Mat a2 = a * a;
    Mat power = eye;  // a^(2k)
    Mat odd = Mat::Zero(n, n);
    v = Mat::Zero(n, n);
    for (int k = 0; 2 * k <= degree; ++k) {
      v += Scalar(b[2 * k]) * power;
      odd += Scalar(b[2 * k + 1]) * power;
      power = power * a2;
    }
    u = a * odd;
  }
  return (v - u).partialPivLu().solve(v + u);
}

template <typename Mat>
Mat expm_impl(const Mat& a, int extra_squarings = 0) {
  static constexpr std::array<std::pair<int, double>, 4> kLowDegree{{
      {3, 1.495585217958292e-2},
      {5, 2.539398330063230e-1},
      {7, 9.504178996162932e-1},
      {9, 2.097847961257068e0},
  }};
  constexpr double kTheta13 = 5.371920351148152;
  const double norm = static_cast<double>(norm1(a));
  if (extra_squarings == 0) {
    for (const auto& [degree, theta] : kLowDegree) {
      if (norm <= theta) return pade_exp(a, degree);
    }
  }
  int squarings = extra_squarings;
  if (norm > kTheta13) squarings += static_cast<int>(std::ceil(std::log2(norm / kTheta13)));
  const Mat scaled = a / typename Mat::RealScalar(std::ldexp(1.0, squarings));
  Mat r = pade_exp(scaled, 13);
  for (int i = 0; i < squarings; ++i) r = r * r;
  return r;
}

}  // namespace

Matrix expm(const Matrix& m) {
  require_square(m, "expm");
  if (max_abs_imag(m) == 0.0) {
    return to_complex(expm_impl<RealMatrix>(m.real()));
  }
  return expm_impl<Matrix>(m);
}

Matrix expm_extended(const Matrix& m) {
  require_square(m, "expm_extended");
  using Wide = Eigen::Matrix<std::complex<long double>, Eigen::Dynamic, Eigen::Dynamic>;
  // Three extra halvings push the degree-13 truncation error below long double roundoff.
  const Wide r = expm_impl<Wide>(m.cast<std::complex<long double>>(), 3);
  return r.unaryExpr([](const std::complex<long double>& z) {
    return Complex(static_cast<double>(z.real()), static_cast<double>(z.imag()));
  });
}

Matrix solve(const Matrix& m, const Matrix& b, const Tolerances& tol) {
  require_square(m, "solve");
  if (b.rows() != m.rows()) {
    throw DimensionError("solve: right-hand side has " + std::to_string(b.rows()) + " rows, expected " +
                         std::to_string(m.rows()));
  }
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  if (s(0) == 0.0 || s(s.size() - 1) <= tol.rank_tol * s(0)) {
    throw SingularMatrixError("solve: matrix is numerically singular (sigma_min/sigma_max = " +
                              std::to_string(s(0) == 0.0 ? 0.0 : s(s.size() - 1) / s(0)) + ")");
  }
  return m.partialPivLu().solve(b);
}

Matrix similarity(const Matrix& p, const Matrix& j, const Tolerances& tol) {
  // P J P^{-1} = (P^{-T} (P J)^T)^T
  const Matrix pj = p * j;
  return solve(p.transpose(), pj.transpose(), tol).transpose();
}

Matrix direct_sum(const std::vector<Matrix>& blocks) {
  Index rows = 0;
  Index cols = 0;
  for (const auto& b : blocks) {
    rows += b.rows();
    cols += b.cols();
  }
  Matrix out = Matrix::Zero(rows, cols);
  Index r = 0;
  Index c = 0;
  for (const auto& b : blocks) {
    out.block(r, c, b.rows(), b.cols()) = b;
    r += b.rows();
    c += b.cols();
  }
  return out;
}

}  // namespace semiembed
