#include "apslab/graded.hpp"

#include <Eigen/Eigenvalues>

namespace apslab {

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix direct_sum(const Matrix& a, const Matrix& b) {
  Matrix out = Matrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

Matrix conjugate(const Matrix& u, const Matrix& a) {
  return u * a * u.adjoint();
}

Matrix even_part(const Matrix& a, const Matrix& z) {
  return 0.5 * (a + z * a * z);
}

Matrix odd_part(const Matrix& a, const Matrix& z) {
  return 0.5 * (a - z * a * z);
}

bool is_selfadjoint(const Matrix& a, double tol) {
  return (a - a.adjoint()).norm() <= tol * std::max(1.0, a.norm());
}

bool is_unitary(const Matrix& a, double tol) {
  if (a.rows() != a.cols()) return false;
  return (a.adjoint() * a - eye(a.cols())).norm() <= tol * std::max<double>(1.0, a.rows());
}

bool is_involution(const Matrix& a, double tol) {
  if (a.rows() != a.cols()) return false;
  return is_selfadjoint(a, tol) &&
         (a * a - eye(a.rows())).norm() <= tol * std::max<double>(1.0, a.rows());
}

bool is_even_op(const Matrix& a, const Matrix& z, double tol) {
  return odd_part(a, z).norm() <= tol * std::max(1.0, a.norm());
}

bool is_odd_op(const Matrix& a, const Matrix& z, double tol) {
  return even_part(a, z).norm() <= tol * std::max(1.0, a.norm());
}

Matrix graded_tensor(const Matrix& a, const Matrix& zLeft, const Matrix& b,
                     const Matrix& zRight) {
  require(zLeft.rows() == a.rows() && zRight.rows() == b.rows(),
          ErrorKind::InvalidInput, "graded_tensor: grading shape mismatch");
  return kron(a, even_part(b, zRight)) + kron(a * zLeft, odd_part(b, zRight));
}

GradedSplit split_grading(const Matrix& z, double tol) {
  require(is_involution(z, tol), ErrorKind::InvalidInput,
          "split_grading: not a selfadjoint involution");
  Eigen::SelfAdjointEigenSolver<Matrix> es(z);
  const auto& vals = es.eigenvalues();
  Eigen::Index nMinus = 0;
  for (Eigen::Index i = 0; i < vals.size(); ++i)
    if (vals(i) < 0) ++nMinus;
  // SelfAdjointEigenSolver sorts ascending: minus eigenvectors come first.
  GradedSplit s;
  s.basisMinus = es.eigenvectors().leftCols(nMinus);
  s.basisPlus = es.eigenvectors().rightCols(z.rows() - nMinus);
  return s;
}

Matrix off_diagonal_block(const Matrix& d, const GradedSplit& s) {
  return s.basisMinus.adjoint() * d * s.basisPlus;
}

Matrix odd_from_block(const Matrix& block, const GradedSplit& s) {
  return s.basisMinus * block * s.basisPlus.adjoint() +
         s.basisPlus * block.adjoint() * s.basisMinus.adjoint();
}

Matrix selfadjoint_exp(const Matrix& g, double scale) {
  require(is_selfadjoint(g), ErrorKind::InvalidInput,
          "selfadjoint_exp: selfadjoint matrix required");
  Eigen::SelfAdjointEigenSolver<Matrix> es(g);
  Matrix d = Matrix::Zero(g.rows(), g.rows());
  for (Eigen::Index i = 0; i < g.rows(); ++i)
    d(i, i) = std::exp(scale * es.eigenvalues()(i));
  return es.eigenvectors() * d * es.eigenvectors().adjoint();
}

Matrix spectral_projection(const Matrix& g, bool positive, double gapTol) {
  require(is_selfadjoint(g), ErrorKind::InvalidInput,
          "spectral_projection: selfadjoint matrix required");
  Eigen::SelfAdjointEigenSolver<Matrix> es(g);
  double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  Matrix p = Matrix::Zero(g.rows(), g.rows());
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    double lam = es.eigenvalues()(i);
    if (std::abs(lam) <= gapTol * scale)
      fail(ErrorKind::GapFailure,
           "spectral_projection: eigenvalue " + std::to_string(lam) +
               " too close to zero");
    if ((lam > 0) == positive)
      p += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
  }
  return p;
}

namespace cliff {

Matrix sigma() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Matrix z2() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

Matrix gamma1() { return z2(); }

Matrix gamma2() {
  Matrix m(2, 2);
  m << 0, Complex(0, 1), Complex(0, -1), 0;
  return m;
}

Matrix odd_odd_grading() {
  return Complex(0, -1) * gamma1() * gamma2();
}

}  // namespace cliff

}  // namespace apslab
