#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace apslab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Default tolerances. Structural predicates (is_unitary, parity checks) use
// kStructTol; exact algebraic identities built from assembled matrices use
// kAlgebraTol; conjugation identities kConjTol; homotopy-path residuals
// kPathTol. All tolerance decisions route through these constants.
inline constexpr double kStructTol = 1e-9;
inline constexpr double kAlgebraTol = 1e-12;
inline constexpr double kConjTol = 1e-10;
inline constexpr double kPathTol = 1e-8;

enum class ErrorKind {
  InvalidInput,     // malformed data, dimension mismatch, bad parity
  RankAmbiguity,    // singular value too close to the rank threshold
  RefineRequired,   // eigenvalue crossing unresolved at this sample count
  GapFailure,       // boundary operator not invertible / gap lost on a path
  Precondition,     // other numerical precondition (short cylinder, ...)
  NoDualStructure,  // tau synthesis found mismatched pairing dimensions
  NotOrientable,    // orientation propagation hit a contradiction
  Unsupported,      // feature outside the implemented envelope
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) {
  throw Error(kind, msg);
}

inline void require(bool cond, ErrorKind kind, const std::string& msg) {
  if (!cond) fail(kind, msg);
}

inline double opnorm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return m.jacobiSvd().singularValues()(0);
}

// Frobenius-scale residual, suitable for comparing assembled identities.
inline double residual(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    fail(ErrorKind::InvalidInput, "residual: shape mismatch");
  double scale = std::max(1.0, std::max(a.norm(), b.norm()));
  return (a - b).norm() / scale;
}

inline Matrix eye(Eigen::Index n) { return Matrix::Identity(n, n); }

}  // namespace apslab
