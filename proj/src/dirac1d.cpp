#include "apslab/dirac1d.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>
#include <Eigen/SVD>

#include <cmath>

namespace apslab {

void check_mesh(const Mesh1D& m) {
  require(m.length > 0, ErrorKind::InvalidInput, "mesh length must be positive");
  require(m.cells >= 8, ErrorKind::InvalidInput, "mesh needs at least 8 cells");
}

FiberPotential constant_potential(const Matrix& b) {
  return [b](double) { return b; };
}

ApsRows aps_rows(const Matrix& boundaryOp, double gapTol) {
  require(is_selfadjoint(boundaryOp), ErrorKind::InvalidInput,
          "aps_rows: boundary operator must be selfadjoint");
  Eigen::SelfAdjointEigenSolver<Matrix> es(boundaryOp);
  double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  ApsRows out;
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < boundaryOp.rows(); ++i) {
    double lam = es.eigenvalues()(i);
    if (std::abs(lam) <= gapTol * scale)
      fail(ErrorKind::GapFailure,
           "aps_rows: boundary operator eigenvalue " + std::to_string(lam) +
               " too close to zero; the condition is ill posed");
    if (lam > 0) keep.push_back(i);
  }
  out.rank = static_cast<Eigen::Index>(keep.size());
  out.rows = Matrix::Zero(out.rank, boundaryOp.rows());
  for (size_t k = 0; k < keep.size(); ++k)
    out.rows.row(k) = es.eigenvectors().col(keep[k]).adjoint();
  return out;
}

namespace {

void check_fiber_value(const Matrix& m, Eigen::Index fiber, const char* what) {
  require(m.rows() == fiber && m.cols() == fiber, ErrorKind::InvalidInput,
          std::string(what) + ": fiber dimension mismatch");
  require(is_selfadjoint(m), ErrorKind::InvalidInput,
          std::string(what) + ": selfadjoint value required");
}

}  // namespace

EvenIntervalOp build_even_interval(const Mesh1D& mesh, Eigen::Index fiber,
                                   const FiberPotential& b,
                                   const Matrix& attachLeft,
                                   const Matrix& attachRight) {
  check_mesh(mesh);
  require(fiber >= 1, ErrorKind::InvalidInput, "fiber dimension must be >= 1");
  check_fiber_value(attachLeft, fiber, "attachLeft");
  check_fiber_value(attachRight, fiber, "attachRight");

  const int n = mesh.cells;
  const double h = mesh.h();
  Matrix b0 = b(0.0), bL = b(mesh.length);
  check_fiber_value(b0, fiber, "potential");
  check_fiber_value(bL, fiber, "potential");

  EvenIntervalOp out;
  out.mesh = mesh;
  out.fiber = fiber;
  out.leftBoundaryOp = -b0 + attachLeft;
  out.rightBoundaryOp = bL + attachRight;
  ApsRows wl = aps_rows(out.leftBoundaryOp);
  ApsRows wr = aps_rows(out.rightBoundaryOp);
  out.rankLeft = wl.rank;
  out.rankRight = wr.rank;

  Eigen::Index rows = n * fiber + wl.rank + wr.rank;
  Eigen::Index cols = (n + 1) * fiber;
  out.op = Matrix::Zero(rows, cols);
  Matrix id = eye(fiber);
  for (int j = 0; j < n; ++j) {
    Matrix bm = b((j + 0.5) * h);
    check_fiber_value(bm, fiber, "potential");
    out.op.block(j * fiber, j * fiber, fiber, fiber) = -id / h - 0.5 * bm;
    out.op.block(j * fiber, (j + 1) * fiber, fiber, fiber) = id / h - 0.5 * bm;
  }
  out.op.block(n * fiber, 0, wl.rank, fiber) = wl.rows;
  out.op.block(n * fiber + wl.rank, n * fiber, wr.rank, fiber) = wr.rows;
  return out;
}

IndexResult numerical_index(const Matrix& rect, double tol) {
  Eigen::JacobiSVD<Matrix> svd(rect);
  const RealVector& sv = svd.singularValues();
  double smax = sv.size() ? sv(0) : 0.0;
  IndexResult out;
  Eigen::Index rank = 0;
  if (smax > 0.0) {
    out.threshold = tol * smax;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
      double s = sv(i);
      if (s >= out.threshold / 10 && s <= out.threshold * 10)
        fail(ErrorKind::RankAmbiguity,
             "numerical_index: singular value " + std::to_string(s) +
                 " sits at the rank threshold " + std::to_string(out.threshold));
      if (s >= out.threshold) ++rank;
    }
  }
  out.kerDim = rect.cols() - rank;
  out.cokerDim = rect.rows() - rank;
  out.index = static_cast<long>(out.kerDim) - static_cast<long>(out.cokerDim);
  return out;
}

EvenIntervalOp build_cylinder_extension(const Mesh1D& mesh, Eigen::Index fiber,
                                        const FiberPotential& b,
                                        const Matrix& attachLeft,
                                        const Matrix& attachRight,
                                        double extraLength) {
  check_mesh(mesh);
  Matrix frozen = b(mesh.length) + attachRight;
  check_fiber_value(frozen, fiber, "frozen potential");
  Eigen::SelfAdjointEigenSolver<Matrix> es(frozen, Eigen::EigenvaluesOnly);
  double gap = es.eigenvalues().cwiseAbs().minCoeff();
  require(gap > 0, ErrorKind::GapFailure,
          "cylinder extension: frozen boundary operator is singular");
  require(extraLength >= 8.0 / gap, ErrorKind::Precondition,
          "cylinder extension: length " + std::to_string(extraLength) +
              " is below 8/gap = " + std::to_string(8.0 / gap));

  const double h = mesh.h();
  int extraCells = static_cast<int>(std::ceil(extraLength / h - 1e-12));
  Mesh1D ext{mesh.length + extraCells * h, mesh.cells + extraCells};
  double cut = mesh.length;
  FiberPotential bExt = [b, cut, frozen](double x) -> Matrix {
    return x < cut ? b(x) : frozen;
  };
  return build_even_interval(ext, fiber, bExt, attachLeft,
                             Matrix::Zero(fiber, fiber));
}

OddIntervalOp build_odd_interval(const Mesh1D& mesh, Eigen::Index fiber,
                                 const FiberPotential& beta,
                                 const FiberPotential& gamma,
                                 const Matrix& boundLeft,
                                 const Matrix& boundRight) {
  check_mesh(mesh);
  require(fiber >= 1, ErrorKind::InvalidInput, "fiber dimension must be >= 1");
  require(boundLeft.rows() == 2 * fiber && boundRight.rows() == 2 * fiber,
          ErrorKind::InvalidInput, "boundary blocks must be 2f x 2f");
  require(is_selfadjoint(boundLeft) && is_selfadjoint(boundRight),
          ErrorKind::InvalidInput, "boundary blocks must be hermitian");

  const int n = mesh.cells;
  const double h = mesh.h();
  const Eigen::Index nodes = (n + 1) * fiber;
  const Eigen::Index dim = nodes + n * fiber;
  const Complex iu(0, 1);

  OddIntervalOp out;
  out.mesh = mesh;
  out.fiber = fiber;
  out.op = Matrix::Zero(dim, dim);
  Matrix id = eye(fiber);

  for (int j = 0; j <= n; ++j) {
    Matrix g = gamma(j * h);
    check_fiber_value(g, fiber, "gamma");
    out.op.block(j * fiber, j * fiber, fiber, fiber) = g;
  }
  for (int j = 0; j < n; ++j) {
    double x = (j + 0.5) * h;
    Matrix g = gamma(x);
    Matrix bt = beta(x);
    check_fiber_value(g, fiber, "gamma");
    check_fiber_value(bt, fiber, "beta");
    Eigen::Index row = nodes + j * fiber;
    out.op.block(row, row, fiber, fiber) = -g;
    // T u = -i du/dx + i beta u with the midpoint average
    Matrix cl = iu * id / h + iu * 0.5 * bt;   // coefficient of u_j
    Matrix cr = -iu * id / h + iu * 0.5 * bt;  // coefficient of u_{j+1}
    out.op.block(row, j * fiber, fiber, fiber) = cl;
    out.op.block(row, (j + 1) * fiber, fiber, fiber) = cr;
    out.op.block(j * fiber, row, fiber, fiber) += cl.adjoint();
    out.op.block((j + 1) * fiber, row, fiber, fiber) += cr.adjoint();
  }

  auto addBoundary = [&](const Matrix& blk, Eigen::Index uPos, Eigen::Index vPos) {
    out.op.block(uPos, uPos, fiber, fiber) += blk.topLeftCorner(fiber, fiber);
    out.op.block(uPos, vPos, fiber, fiber) += blk.topRightCorner(fiber, fiber);
    out.op.block(vPos, uPos, fiber, fiber) += blk.bottomLeftCorner(fiber, fiber);
    out.op.block(vPos, vPos, fiber, fiber) += blk.bottomRightCorner(fiber, fiber);
  };
  addBoundary(boundLeft, 0, nodes);
  addBoundary(boundRight, n * fiber, nodes + (n - 1) * fiber);
  return out;
}

Matrix flux_circle_central(int cells, double length, double flux) {
  require(cells >= 8, ErrorKind::InvalidInput, "flux circle needs >= 8 cells");
  require(length > 0, ErrorKind::InvalidInput, "length must be positive");
  const double h = length / cells;
  const Complex hop = Complex(0, -1) / (2 * h) *
                      std::exp(Complex(0, kTwoPi * flux / cells));
  Matrix c = Matrix::Zero(cells, cells);
  for (int j = 0; j < cells; ++j) {
    int k = (j + 1) % cells;
    c(j, k) = hop;
    c(k, j) = std::conj(hop);
  }
  return c;
}

OperatorFamily flux_sweep_central(int cells, double length, double flux0) {
  auto fn = [cells, length](double a) {
    return flux_circle_central(cells, length, a);
  };
  return loop_family(cells, fn, BaseWindow{flux0, flux0 + 1.0, false});
}

double verify_zl_inverse(const Matrix& g, double length, int cells) {
  require(cells >= 8, ErrorKind::InvalidInput, "verify_zl_inverse: cells >= 8");
  const Eigen::Index f = g.rows();
  Matrix pPos = spectral_projection(g, true);
  Matrix pNeg = spectral_projection(g, false);
  const double h = length / cells;

  // smooth bump supported well inside the window, fixed deterministic fiber
  Vector w(f);
  for (Eigen::Index i = 0; i < f; ++i)
    w(i) = Complex(std::cos(1.0 + i), std::sin(0.7 * (1.0 + i)));
  double c0 = length / 2, sig = length / 12;
  auto source = [&](double x) -> Vector {
    return std::exp(-(x - c0) * (x - c0) / (2 * sig * sig)) * w;
  };

  // two-sided exponential kernel, midpoint quadrature, forward/backward
  Matrix eFwd = selfadjoint_exp(g, -h);
  Matrix eFwdHalf = selfadjoint_exp(g, -h / 2);
  Matrix eBwd = selfadjoint_exp(g, h);
  Matrix eBwdHalf = selfadjoint_exp(g, h / 2);

  std::vector<Vector> i1(cells + 1), i2(cells + 1);
  i1[0] = Vector::Zero(f);
  for (int j = 0; j < cells; ++j)
    i1[j + 1] = eFwd * i1[j] + h * (eFwdHalf * (pPos * source((j + 0.5) * h)));
  i2[cells] = Vector::Zero(f);
  for (int j = cells - 1; j >= 0; --j)
    i2[j] = pNeg * (eBwd * i2[j + 1] - h * (eBwdHalf * (pNeg * source((j + 0.5) * h))));

  Vector uQuad((cells + 1) * f);
  for (int j = 0; j <= cells; ++j) uQuad.segment(j * f, f) = i1[j] + i2[j];

  // direct staggered solve of (d/dx + G) u = v with spectral conditions:
  // nonneg rows of G kill u(0), nonpos rows kill u(L)
  ApsRows wPos = aps_rows(g);
  ApsRows wNeg = aps_rows((-g).eval());
  require(wPos.rank + wNeg.rank == f, ErrorKind::GapFailure,
          "verify_zl_inverse: G must be invertible");

  using Trip = Eigen::Triplet<Complex>;
  std::vector<Trip> trip;
  Vector rhs = Vector::Zero((cells + 1) * f);
  for (int j = 0; j < cells; ++j) {
    for (Eigen::Index a = 0; a < f; ++a) {
      for (Eigen::Index b2 = 0; b2 < f; ++b2) {
        Complex left = 0.5 * g(a, b2) - (a == b2 ? 1.0 / h : 0.0);
        Complex right = 0.5 * g(a, b2) + (a == b2 ? 1.0 / h : 0.0);
        if (left != Complex(0)) trip.emplace_back(j * f + a, j * f + b2, left);
        if (right != Complex(0))
          trip.emplace_back(j * f + a, (j + 1) * f + b2, right);
      }
    }
    rhs.segment(j * f, f) = source((j + 0.5) * h);
  }
  for (Eigen::Index r = 0; r < wPos.rank; ++r)
    for (Eigen::Index b2 = 0; b2 < f; ++b2)
      trip.emplace_back(cells * f + r, b2, wPos.rows(r, b2));
  for (Eigen::Index r = 0; r < wNeg.rank; ++r)
    for (Eigen::Index b2 = 0; b2 < f; ++b2)
      trip.emplace_back(cells * f + wPos.rank + r, cells * f + b2,
                        wNeg.rows(r, b2));

  Eigen::SparseMatrix<Complex> a((cells + 1) * f, (cells + 1) * f);
  a.setFromTriplets(trip.begin(), trip.end());
  Eigen::SparseLU<Eigen::SparseMatrix<Complex>> lu(a);
  require(lu.info() == Eigen::Success, ErrorKind::Precondition,
          "verify_zl_inverse: direct solve failed");
  Vector uDirect = lu.solve(rhs);

  return (uQuad - uDirect).norm() / uDirect.norm();
}

}  // namespace apslab
