#include "apslab/dirac_product.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <cmath>

namespace apslab {

OperatorFamily interval_flow_factor(long flow, const Mesh1D& mesh,
                                    double mass) {
  check_mesh(mesh);
  require(mass > 0, ErrorKind::InvalidInput, "mass must be positive");
  const Eigen::Index fiber = std::max<long>(1, std::labs(flow));
  const double sgn = flow >= 0 ? 1.0 : -1.0;
  std::vector<double> tau(fiber);
  for (Eigen::Index i = 0; i < fiber; ++i)
    tau[i] = M_PI * (1.0 + 0.3 * (i - (fiber - 1) / 2.0));

  Matrix zeroF = Matrix::Zero(fiber, fiber);
  Matrix zeroB = Matrix::Zero(2 * fiber, 2 * fiber);
  auto fn = [=](double t) -> Matrix {
    Matrix gamma = Matrix::Zero(fiber, fiber);
    for (Eigen::Index i = 0; i < fiber; ++i)
      gamma(i, i) = flow == 0 ? mass : sgn * mass * (t - tau[i]) / M_PI;
    return build_odd_interval(mesh, fiber, constant_potential(zeroF),
                              constant_potential(gamma), zeroB, zeroB)
        .op;
  };
  return loop_family((2 * mesh.cells + 1) * fiber, fn,
                     BaseWindow{0.0, kTwoPi, false});
}

Matrix fourier_unitary(int n) {
  require(n >= 1, ErrorKind::InvalidInput, "fourier_unitary: n >= 1");
  Matrix f(n, n);
  double r = 1.0 / std::sqrt(static_cast<double>(n));
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      f(j, k) = r * std::exp(Complex(0, kTwoPi * j * k / n));
  return f;
}

CircleFactor make_circle_factor(int winding, int modes, double delta,
                                double radius) {
  OperatorFamily md = winding_family(winding, modes, delta, radius);
  Matrix f = fourier_unitary(static_cast<int>(md.dim));
  auto fn = [md, f](double t) -> Matrix {
    return f * md.value(t) * f.adjoint();
  };
  return CircleFactor{loop_family(md.dim, fn, md.windows.at(0)), md};
}

KasparovModule product_dirac(const OperatorFamily& interval,
                             const OperatorFamily& circle) {
  return kprod(odd_module({interval}), odd_module({circle}));
}

double separability_residual(const OperatorFamily& interval,
                             const CircleFactor& circle, double s, double t) {
  KasparovModule mod = product_dirac(interval, circle.position);
  Matrix p = mod.blocks.at(0).family.value(s, t);
  Matrix f = fourier_unitary(static_cast<int>(circle.position.dim));
  Matrix u = kron(eye(2), kron(eye(interval.dim), f));
  Matrix dm = interval.value(s);
  Matrix nu = circle.modes.value(t);
  Matrix expected = kron(cliff::gamma1(), kron(dm, eye(nu.rows()))) +
                    kron(cliff::gamma2(), kron(eye(dm.rows()), nu));
  return residual((u.adjoint() * p * u).eval(), expected);
}

namespace {

struct LogDet {
  double logAbs = 0.0;
  double arg = 0.0;
};

LogDet log_det(const Matrix& m) {
  Eigen::PartialPivLU<Matrix> lu(m);
  LogDet out;
  out.arg = lu.permutationP().determinant() < 0 ? M_PI : 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Complex u = lu.matrixLU()(i, i);
    out.logAbs += std::log(std::abs(u));
    out.arg += std::arg(u);
  }
  return out;
}

}  // namespace

namespace {

LogDet factored_log_det(const OperatorFamily& interval,
                        const CircleFactor& circle, double s, double t) {
  Matrix dm = interval.value(s);
  Matrix nu = circle.modes.value(t);
  LogDet split;
  for (Eigen::Index k = 0; k < nu.rows(); ++k) {
    LogDet one =
        log_det((dm + Complex(0, 1) * nu(k, k) * eye(dm.rows())).eval());
    split.logAbs += one.logAbs;
    split.arg += one.arg;
  }
  return split;
}

}  // namespace

double factorization_residual(const OperatorFamily& interval,
                              const CircleFactor& circle, double s, double t) {
  // The extracted corner sits in the grading eigenbasis, which fixes its
  // determinant only up to a constant unimodular factor. Ratios against a
  // reference base point cancel that factor; they are also the only data
  // the zero count uses.
  const double sRef = 0.77, tRef = 0.33;
  KasparovModule mod = product_dirac(interval, circle.position);
  auto cornerAt = [&mod](double a, double b) -> LogDet {
    Matrix p = mod.blocks.at(0).family.value(a, b);
    return log_det(plus_corner(p, mod.blocks.at(0).grading));
  };
  LogDet whole = cornerAt(s, t);
  LogDet wholeRef = cornerAt(sRef, tRef);
  LogDet split = factored_log_det(interval, circle, s, t);
  LogDet splitRef = factored_log_det(interval, circle, sRef, tRef);
  require(std::isfinite(wholeRef.logAbs) && wholeRef.logAbs > -300.0,
          ErrorKind::Precondition,
          "factorization_residual: reference point too close to singular");
  double dLog = (whole.logAbs - wholeRef.logAbs) - (split.logAbs - splitRef.logAbs);
  double dArg = (whole.arg - wholeRef.arg) - (split.arg - splitRef.arg);
  double scale = std::max(1.0, std::abs(whole.logAbs - wholeRef.logAbs));
  return std::abs(dLog) / scale + std::abs(std::remainder(dArg, kTwoPi));
}

DegreeOptions product_degree_options() {
  DegreeOptions opt;
  opt.initialGrid = 5;
  opt.maxDepth = 9;
  return opt;
}

ProductIndexReport verify_product_index(long flow, int winding,
                                        const Mesh1D& mesh, int modes,
                                        const FlowOptions& fopt,
                                        const DegreeOptions& dopt) {
  OperatorFamily fam = interval_flow_factor(flow, mesh);
  CircleFactor circ = make_circle_factor(winding, modes);

  ProductIndexReport rep;
  rep.factorFlow = spectral_flow(fam, fopt).flow;
  rep.circleWinding = spectral_flow(circ.position, fopt).flow;

  const double pts[2][2] = {{1.7, 2.9}, {4.3, 0.8}};
  for (const auto& p : pts) {
    rep.separability =
        std::max(rep.separability, separability_residual(fam, circ, p[0], p[1]));
    rep.factorization =
        std::max(rep.factorization, factorization_residual(fam, circ, p[0], p[1]));
  }
  require(rep.separability < kConjTol, ErrorKind::Precondition,
          "verify_product_index: assembled product does not block-diagonalize "
          "over circle modes");
  require(rep.factorization < 1e-8, ErrorKind::Precondition,
          "verify_product_index: factored determinant disagrees with the "
          "assembled corner");

  long total = 0;
  for (Eigen::Index k = 0; k < circ.modes.dim; ++k) {
    OperatorFamily corner;
    corner.dim = fam.dim;
    corner.baseDim = 2;
    corner.windows = {fam.windows.at(0), circ.modes.windows.at(0)};
    corner.at = [fam, md = circ.modes, k](const std::vector<double>& p) -> Matrix {
      Matrix d = fam.at({p[0]});
      Complex nu = md.at({p[1]})(k, k);
      return d + Complex(0, 1) * nu * eye(d.rows());
    };
    DegreeResult dr = corner_torus_degree(corner, dopt);
    total += dr.degree;
    rep.detEvals += dr.detEvals;
  }
  rep.productIndex = total;
  rep.match = rep.productIndex == rep.factorFlow * rep.circleWinding;
  return rep;
}

// ---- collar fiber identities ----

namespace {

Matrix sigma1() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
Matrix sigma2() {
  Matrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}
Matrix sigma3() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

void check_graded_factor(const Matrix& d, const Matrix& z, const char* what) {
  require(is_involution(z), ErrorKind::InvalidInput,
          std::string(what) + ": grading must be a selfadjoint involution");
  require(d.rows() == z.rows(), ErrorKind::InvalidInput,
          std::string(what) + ": operator/grading size mismatch");
  require(is_selfadjoint(d), ErrorKind::InvalidInput,
          std::string(what) + ": selfadjoint operator required");
  require(is_odd_op(d, z), ErrorKind::InvalidInput,
          std::string(what) + ": operator must be odd for the grading");
}

}  // namespace

CollarProduct collar_product(ParityPair pc, const Matrix& bM, const Matrix& dN,
                             const Matrix& zN) {
  const Complex iu(0, 1);
  const Eigen::Index q = dN.rows();
  require(is_selfadjoint(bM), ErrorKind::InvalidInput,
          "collar_product: bM must be selfadjoint");
  require(is_selfadjoint(dN), ErrorKind::InvalidInput,
          "collar_product: dN must be selfadjoint");

  CollarProduct out;
  switch (pc) {
    case ParityPair::EvenEven: {
      check_graded_factor(dN, zN, "collar_product second factor");
      const Eigen::Index p = bM.rows();
      Matrix cM = -iu * kron(sigma1(), eye(p));
      Matrix zM = kron(sigma3(), eye(p));
      Matrix sM = kron(sigma2(), bM);  // cM (d1 - zM bM) has zeroth order sM
      out.firstOrder = kron(cM, eye(q));
      out.zerothOrder = kron(sM, eye(q)) + kron(zM, dN);
      Matrix z = kron(zM, zN);
      out.extracted = z * out.firstOrder * out.zerothOrder;
      Matrix pp = (0.5 * (eye(q) + zN)).eval();
      Matrix pm = (0.5 * (eye(q) - zN)).eval();
      Matrix ep(2, 1), em(2, 1);
      ep << 1, 0;
      em << 0, 1;
      // quarter phase in the +/- identification keeps the circle leg
      // un-rotated in the reduced formula
      out.psi = std::exp(iu * (M_PI / 4)) * kron(ep, kron(eye(p), pp)) +
                std::exp(-iu * (M_PI / 4)) * kron(em, kron(eye(p), pm));
      out.reference = kron(bM, zN) + kron(eye(p), dN);
      break;
    }
    case ParityPair::EvenOdd: {
      const Eigen::Index p = bM.rows();
      Matrix cM = -iu * kron(sigma1(), eye(p));
      Matrix zM = kron(sigma3(), eye(p));
      Matrix sM = kron(sigma2(), bM);
      out.firstOrder = kron(cM, eye(q));
      out.zerothOrder = kron(sM, eye(q)) + kron(zM, dN);
      out.extracted = out.firstOrder * out.zerothOrder;
      out.psi = eye(2 * p * q);
      out.reference = kron(sigma3(), kron(bM, eye(q))) +
                      kron((-sigma2()).eval(), kron(eye(p), dN));
      out.gradingReduced = kron(sigma1(), eye(p * q));
      break;
    }
    case ParityPair::OddEven: {
      check_graded_factor(dN, zN, "collar_product second factor");
      require(bM.rows() % 2 == 0, ErrorKind::InvalidInput,
              "collar_product: odd-case bM acts on a doubled fiber");
      const Eigen::Index f = bM.rows() / 2;
      Matrix zdM = kron(sigma1(), eye(f));
      check_graded_factor(bM, zdM, "collar_product first factor");
      Matrix cM = -iu * zdM;
      Matrix sM = (-cM * bM).eval();  // cM (d1 - bM)
      out.firstOrder = kron(cM, zN);
      out.zerothOrder = kron(sM, zN) + kron(eye(2 * f), dN);
      out.extracted = out.firstOrder * out.zerothOrder;
      out.psi = eye(2 * f * q);
      out.reference = kron(bM, eye(q)) - iu * kron(zdM, (zN * dN).eval());
      out.gradingReduced = kron(zdM, zN);
      break;
    }
    case ParityPair::OddOdd: {
      require(bM.rows() % 2 == 0, ErrorKind::InvalidInput,
              "collar_product: odd-case bM acts on a doubled fiber");
      const Eigen::Index f = bM.rows() / 2;
      Matrix zdM = kron(sigma1(), eye(f));
      check_graded_factor(bM, zdM, "collar_product first factor");
      Matrix cM = -iu * zdM;
      Matrix sM = (-cM * bM).eval();
      Matrix g1 = cliff::gamma1();
      Matrix g2 = cliff::gamma2();
      out.firstOrder = kron(g1, kron(cM, eye(q)));
      out.zerothOrder =
          kron(g1, kron(sM, eye(q))) + kron(g2, kron(eye(2 * f), dN));
      Matrix z = kron((-iu * g1 * g2).eval(), eye(2 * f * q));
      out.extracted = z * out.firstOrder * out.zerothOrder;
      Matrix half(2, 1);
      half << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
      out.psi = kron(half, eye(2 * f * q));
      out.reference = kron(bM, eye(q)) + kron(zdM, dN);
      break;
    }
  }
  out.reduced = out.psi.adjoint() * out.extracted * out.psi;
  return out;
}

Matrix lift_trivializing(ParityPair pc, const Matrix& a, Eigen::Index dimN,
                         const Matrix& zN) {
  require(is_selfadjoint(a), ErrorKind::InvalidInput,
          "lift_trivializing: a must be selfadjoint");
  switch (pc) {
    case ParityPair::EvenEven:
      require(zN.rows() == dimN, ErrorKind::InvalidInput,
              "lift_trivializing: grading size mismatch");
      return kron(a, zN);
    case ParityPair::EvenOdd:
      return kron(sigma3(), kron(a, eye(dimN)));
    case ParityPair::OddEven:
    case ParityPair::OddOdd: {
      require(a.rows() % 2 == 0, ErrorKind::InvalidInput,
              "lift_trivializing: odd-case a acts on a doubled fiber");
      Matrix zdM = kron(sigma1(), eye(a.rows() / 2));
      require(is_odd_op(a, zdM), ErrorKind::InvalidInput,
              "lift_trivializing: odd-case a must be odd for the boundary "
              "grading");
      return kron(a, eye(dimN));
    }
  }
  fail(ErrorKind::InvalidInput, "lift_trivializing: unknown parity pair");
}

double lift_gap_defect(ParityPair pc, const Matrix& bM, const Matrix& a,
                       const Matrix& dN, const Matrix& zN) {
  CollarProduct cp = collar_product(pc, bM, dN, zN);
  Matrix lift = lift_trivializing(pc, a, dN.rows(), zN);
  require(lift.rows() == cp.reduced.rows(), ErrorKind::InvalidInput,
          "lift_gap_defect: lift does not act on the reduced fiber");
  Eigen::SelfAdjointEigenSolver<Matrix> base((bM + a).eval(),
                                             Eigen::EigenvaluesOnly);
  Eigen::SelfAdjointEigenSolver<Matrix> prod((cp.reduced + lift).eval(),
                                             Eigen::EigenvaluesOnly);
  double ga = base.eigenvalues().cwiseAbs().minCoeff();
  double gp = prod.eigenvalues().cwiseAbs().minCoeff();
  return std::max(0.0, ga * ga - gp * gp);
}

}  // namespace apslab
