#include "apslab/dirac1d.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"

using namespace apslab;

namespace {

RealVector sorted_eigenvalues(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

Matrix diag3(double a, double b, double c) {
  Matrix m = Matrix::Zero(3, 3);
  m(0, 0) = a;
  m(1, 1) = b;
  m(2, 2) = c;
  return m;
}

// fixed unitary used to take diagonal oracles into generic position
Matrix fixed_unitary3() {
  Vector v(3);
  v << Complex(1, 0.4), Complex(-0.6, 0.9), Complex(0.3, -0.7);
  v.normalize();
  return eye(3) - 2.0 * (v * v.adjoint());
}

}  // namespace

TEST_CASE("mesh and input validation") {
  CHECK_THROWS_AS(check_mesh(Mesh1D{1.0, 4}), Error);
  CHECK_THROWS_AS(check_mesh(Mesh1D{-1.0, 16}), Error);
  try {
    check_mesh(Mesh1D{1.0, 4});
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidInput);
  }
  CHECK(Mesh1D{2.0, 8}.h() == doctest::Approx(0.25));
}

TEST_CASE("aps_rows spans the positive eigenspace") {
  Matrix b = diag3(3.0, -2.0, 1.0);
  Matrix u = fixed_unitary3();
  Matrix bu = u * b * u.adjoint();
  ApsRows w = aps_rows(bu);
  CHECK(w.rank == 2);
  CHECK(residual(w.rows * w.rows.adjoint(), eye(2)) < kAlgebraTol);
  // W*W is the spectral projection onto the positive part
  Matrix proj = w.rows.adjoint() * w.rows;
  Matrix pref = u * diag3(1, 0, 1) * u.adjoint();
  CHECK(residual(proj, pref) < kStructTol);

  CHECK_THROWS_AS(aps_rows(diag3(1, 0, -1)), Error);
  try {
    aps_rows(diag3(1, 1e-12, -1));
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::GapFailure);
  }
}

TEST_CASE("numerical_index on frozen rectangles") {
  Matrix a = Matrix::Zero(2, 3);
  a(0, 0) = 1.0;
  IndexResult r = numerical_index(a);
  CHECK(r.kerDim == 2);
  CHECK(r.cokerDim == 1);
  CHECK(r.index == 1);

  Matrix amb = Matrix::Zero(2, 2);
  amb(0, 0) = 1.0;
  amb(1, 1) = 5e-8;  // inside the [threshold/10, threshold*10] band
  CHECK_THROWS_AS(numerical_index(amb), Error);
}

TEST_CASE("even interval index against the half-line ODE count") {
  // diagonal data: component i contributes to the kernel exactly when
  // attachLeft_i < b_i < -attachRight_i, and to the cokernel when both
  // inequalities are reversed
  Mesh1D mesh{1.0, 16};
  Matrix b = diag3(2.0, -1.0, 0.5);
  Matrix aL = diag3(1.0, 0.4, 2.0);
  Matrix aR = diag3(-4.0, 2.0, 0.6);

  auto check_counts = [](const EvenIntervalOp& op, Eigen::Index ker,
                         Eigen::Index coker) {
    IndexResult r = numerical_index(op.op);
    CHECK(r.kerDim == ker);
    CHECK(r.cokerDim == coker);
    CHECK(r.index == static_cast<long>(op.fiber) - op.rankLeft - op.rankRight);
  };

  SUBCASE("constant diagonal potential") {
    EvenIntervalOp op =
        build_even_interval(mesh, 3, constant_potential(b), aL, aR);
    CHECK(op.rankLeft == 2);
    CHECK(op.rankRight == 2);
    CHECK(op.op.rows() == 16 * 3 + 4);
    CHECK(op.op.cols() == 17 * 3);
    check_counts(op, 1, 2);
  }

  SUBCASE("conjugated data has the same counts") {
    Matrix u = fixed_unitary3();
    EvenIntervalOp op = build_even_interval(
        mesh, 3, constant_potential((u * b * u.adjoint()).eval()),
        u * aL * u.adjoint(), u * aR * u.adjoint());
    check_counts(op, 1, 2);
  }

  SUBCASE("interior variation with fixed endpoint values") {
    FiberPotential bv = [&b](double x) -> Matrix {
      return b + diag3(0.3, -0.2, 0.4) * std::sin(kTwoPi * x);
    };
    EvenIntervalOp op = build_even_interval(mesh, 3, bv, aL, aR);
    check_counts(op, 1, 2);
  }

  SUBCASE("resolution invariance") {
    EvenIntervalOp coarse =
        build_even_interval(mesh, 3, constant_potential(b), aL, aR);
    EvenIntervalOp fine =
        build_even_interval(Mesh1D{1.0, 64}, 3, constant_potential(b), aL, aR);
    IndexResult rc = numerical_index(coarse.op);
    IndexResult rf = numerical_index(fine.op);
    CHECK(rc.kerDim == rf.kerDim);
    CHECK(rc.cokerDim == rf.cokerDim);
  }

  SUBCASE("degenerate attachment is refused") {
    Matrix aDeg = diag3(2.0, 0.4, 2.0);  // first entry collides with b
    CHECK_THROWS_AS(
        build_even_interval(mesh, 3, constant_potential(b), aDeg, aR), Error);
  }
}

TEST_CASE("cylinder attachment does not move the counts") {
  Mesh1D mesh{1.0, 16};
  Matrix b = diag3(2.0, -1.0, 0.5);
  Matrix aL = diag3(1.0, 0.4, 2.0);
  Matrix aR = diag3(-4.0, 2.0, 0.6);  // frozen operator diag(-2, 1, 1.1), gap 1

  EvenIntervalOp base =
      build_even_interval(mesh, 3, constant_potential(b), aL, aR);
  EvenIntervalOp ext = build_cylinder_extension(mesh, 3, constant_potential(b),
                                                aL, aR, 8.0);
  CHECK(ext.mesh.cells == 16 + 128);
  CHECK(ext.mesh.h() == doctest::Approx(mesh.h()));

  IndexResult rb = numerical_index(base.op);
  IndexResult re = numerical_index(ext.op);
  CHECK(rb.kerDim == re.kerDim);
  CHECK(rb.cokerDim == re.cokerDim);
  CHECK(rb.index == re.index);

  CHECK_THROWS_AS(
      build_cylinder_extension(mesh, 3, constant_potential(b), aL, aR, 4.0),
      Error);
  try {
    build_cylinder_extension(mesh, 3, constant_potential(b), aL, aR, 4.0);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Precondition);
  }
}

TEST_CASE("odd interval operator: exact free spectrum") {
  // beta = gamma = 0, no boundary blocks: the nonzero spectrum is
  // +-(2/h) sin(k pi / (2(n+1))), k = 1..n, plus a single zero mode
  const int n = 16;
  Mesh1D mesh{1.0, n};
  const double h = mesh.h();
  Matrix zero1 = Matrix::Zero(1, 1);
  Matrix zero2 = Matrix::Zero(2, 2);
  OddIntervalOp op = build_odd_interval(mesh, 1, constant_potential(zero1),
                                        constant_potential(zero1), zero2, zero2);
  CHECK(is_selfadjoint(op.op));
  CHECK(op.op.rows() == 2 * n + 1);

  std::vector<double> expect{0.0};
  for (int k = 1; k <= n; ++k) {
    double s = 2.0 / h * std::sin(k * M_PI / (2.0 * (n + 1)));
    expect.push_back(s);
    expect.push_back(-s);
  }
  std::sort(expect.begin(), expect.end());
  RealVector got = sorted_eigenvalues(op.op);
  REQUIRE(got.size() == static_cast<Eigen::Index>(expect.size()));
  for (Eigen::Index i = 0; i < got.size(); ++i)
    CHECK(got(i) == doctest::Approx(expect[i]).epsilon(1e-9).scale(2.0 / h));
}

TEST_CASE("odd interval operator: constant chiral mass") {
  // gamma = m: eigenvalues +-sqrt(m^2 + s_k^2) plus a single +m from the
  // one-dimensional kernel of the difference block
  const int n = 16;
  Mesh1D mesh{1.0, n};
  const double h = mesh.h();
  const double m = 0.35;
  Matrix mm = m * eye(1);
  Matrix zero1 = Matrix::Zero(1, 1);
  Matrix zero2 = Matrix::Zero(2, 2);
  OddIntervalOp op = build_odd_interval(mesh, 1, constant_potential(zero1),
                                        constant_potential(mm), zero2, zero2);
  std::vector<double> expect{m};
  for (int k = 1; k <= n; ++k) {
    double s = 2.0 / h * std::sin(k * M_PI / (2.0 * (n + 1)));
    expect.push_back(std::sqrt(m * m + s * s));
    expect.push_back(-std::sqrt(m * m + s * s));
  }
  std::sort(expect.begin(), expect.end());
  RealVector got = sorted_eigenvalues(op.op);
  REQUIRE(got.size() == static_cast<Eigen::Index>(expect.size()));
  for (Eigen::Index i = 0; i < got.size(); ++i)
    CHECK(got(i) == doctest::Approx(expect[i]).epsilon(1e-9).scale(2.0 / h));
}

TEST_CASE("odd interval operator stays selfadjoint with generic data") {
  Mesh1D mesh{2.0, 12};
  FiberPotential beta = [](double x) -> Matrix {
    Matrix m(2, 2);
    m << std::sin(x), Complex(0.2, 0.1) * x, Complex(0.2, -0.1) * x,
        -std::cos(x);
    return m;
  };
  FiberPotential gamma = [](double x) -> Matrix {
    Matrix m(2, 2);
    m << 0.5 + x, Complex(0, 0.3), Complex(0, -0.3), 0.5 - x;
    return m;
  };
  Matrix bl = Matrix::Zero(4, 4);
  bl(0, 2) = Complex(0.4, 0.2);
  bl(2, 0) = Complex(0.4, -0.2);
  bl(1, 1) = 1.0;
  Matrix br = Matrix::Zero(4, 4);
  br(3, 3) = -0.7;
  br(0, 1) = Complex(0, 0.5);
  br(1, 0) = Complex(0, -0.5);
  OddIntervalOp op = build_odd_interval(mesh, 2, beta, gamma, bl, br);
  CHECK(is_selfadjoint(op.op));
  CHECK(op.op.rows() == (2 * 12 + 1) * 2);
  // boundary blocks actually land on the corner coordinates:
  // gamma(0)(1,1) = 0.5 plus the bl(1,1) = 1 contribution
  CHECK(std::abs(op.op(1, 1) - Complex(1.5)) < 1e-12);
  CHECK(std::abs(op.op(0, 26) - Complex(0.4, 0.2)) > 0.0);
}

TEST_CASE("central difference circle carries no net flow over a flux quantum") {
  // sin((2 pi (k + a)) / n) / h: a naive periodic discretisation pairs every
  // downward crossing with an upward one; the sweep over one flux quantum
  // must come back with zero net flow
  OperatorFamily sweep = flux_sweep_central(9, 1.0, 0.3);
  Matrix probe = sweep.value(0.3);
  RealVector ev = sorted_eigenvalues(probe);
  double h = 1.0 / 9;
  // frozen smallest magnitude at the window start: the k = 4 mode sits
  // closest to the descending zero of the sine band
  double minAbs = ev.cwiseAbs().minCoeff();
  CHECK(minAbs ==
        doctest::Approx(std::abs(std::sin(kTwoPi * 4.3 / 9)) / h).epsilon(1e-12));

  FlowResult fr = spectral_flow(sweep);
  CHECK(fr.flow == 0);
  REQUIRE(fr.crossings.size() == 2);
  CHECK(fr.crossings[0].sign == -1);
  CHECK(fr.crossings[1].sign == 1);
  CHECK(std::abs(fr.crossings[0].t - 0.5) < 1e-4);
  CHECK(std::abs(fr.crossings[1].t - 1.0) < 1e-4);
}

TEST_CASE("closed loop of boundary conditions has zero net flow") {
  Mesh1D mesh{1.0, 12};
  Matrix zero1 = Matrix::Zero(1, 1);
  Matrix br = Matrix::Zero(2, 2);
  br(0, 0) = 0.5;
  br(1, 1) = -0.1;
  br(0, 1) = Complex(0, 0.2);
  br(1, 0) = Complex(0, -0.2);
  auto fam = loop_family(
      2 * 12 + 1,
      [&](double t) -> Matrix {
        Matrix bl(2, 2);
        bl(0, 0) = std::cos(t);
        bl(1, 1) = -std::cos(t);
        bl(0, 1) = std::sin(t) * std::exp(Complex(0, t));
        bl(1, 0) = std::conj(bl(0, 1));
        return build_odd_interval(mesh, 1, constant_potential(zero1),
                                  constant_potential(0.2 * eye(1)), bl, br)
            .op;
      },
      BaseWindow{0, kTwoPi, true});
  FlowResult fr = spectral_flow(fam);
  CHECK(fr.flow == 0);
}

TEST_CASE("half-line resolvent formula matches the direct solve") {
  Matrix u = fixed_unitary3();
  Matrix g = u * diag3(1.2, 0.7, -0.9) * u.adjoint();
  double relCoarse = verify_zl_inverse(g, 8.0, 400);
  double relFine = verify_zl_inverse(g, 8.0, 800);
  CHECK(relCoarse < 5e-3);
  CHECK(relFine < relCoarse / 1.8);  // second order agreement
}
