#include "apslab/signature.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <random>

#include "apslab/dirac_product.hpp"
#include "apslab/graded.hpp"

namespace apslab {

namespace {

constexpr double kRankCut = 1e-8;

void check_rank_band(const Eigen::VectorXd& sv, double cut, const char* where) {
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    require(sv(i) <= cut / 10 || sv(i) >= cut * 10, ErrorKind::RankAmbiguity,
            std::string(where) + ": singular value too close to the rank cut");
}

Eigen::Index banded_rank(const Eigen::VectorXd& sv, double cut,
                         const char* where) {
  check_rank_band(sv, cut, where);
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) r += sv(i) > cut ? 1 : 0;
  return r;
}

// Orthonormal columns spanning the range of a (near) orthogonal projector.
Matrix projector_range(const Matrix& p, const char* where) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(p);
  require(es.info() == Eigen::Success, ErrorKind::Precondition,
          std::string(where) + ": eigensolver failed");
  Eigen::Index keep = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    double ev = es.eigenvalues()(i);
    require(ev < 0.1 || ev > 0.9, ErrorKind::RankAmbiguity,
            std::string(where) + ": projector spectrum not near {0, 1}");
    keep += ev > 0.9 ? 1 : 0;
  }
  return es.eigenvectors().rightCols(keep);
}

bool complex_closed(const CellComplex& x) {
  require(x.markers(), ErrorKind::Precondition,
          "complex carries no boundary markers");
  for (const auto& level : x.onBoundary)
    for (char c : level)
      if (c) return false;
  return true;
}

Matrix expi(const Matrix& a, double t) {
  if (a.rows() == 0) return a;
  Eigen::SelfAdjointEigenSolver<Matrix> es(a);
  require(es.info() == Eigen::Success, ErrorKind::Precondition,
          "eigensolver failed on a hermitian generator");
  Vector ph(es.eigenvalues().size());
  for (Eigen::Index i = 0; i < ph.size(); ++i)
    ph(i) = std::exp(Complex(0.0, t * es.eigenvalues()(i)));
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

// Hermitian a with w = exp(i a), eigenvalue arguments in (-pi, pi].
Matrix log_unitary(const Matrix& w, const char* where) {
  if (w.rows() == 0) return w;
  require(is_unitary(w, 1e-8), ErrorKind::Precondition,
          std::string(where) + ": matrix is not unitary");
  Eigen::ComplexSchur<Matrix> sch(w);
  require(sch.info() == Eigen::Success, ErrorKind::Precondition,
          std::string(where) + ": Schur decomposition failed");
  Matrix t = sch.matrixT();
  Matrix off = t;
  off.diagonal().setZero();
  require(off.norm() < 1e-7 * std::max(1.0, t.norm()), ErrorKind::Precondition,
          std::string(where) + ": Schur form of a unitary must be diagonal");
  RealVector ang(t.rows());
  for (Eigen::Index i = 0; i < t.rows(); ++i) ang(i) = std::arg(t(i, i));
  Matrix a = sch.matrixU() * ang.asDiagonal().toDenseMatrix().cast<Complex>() *
             sch.matrixU().adjoint();
  return 0.5 * (a + Matrix(a.adjoint()));
}

// Log within the eigenblocks of a commuting involution g, so exp(i t a)
// stays g-compatible along the whole path.
Matrix log_unitary_blocked(const Matrix& w, const Matrix& g,
                           const char* where) {
  require(residual(Matrix(w * g), Matrix(g * w)) < 1e-8,
          ErrorKind::Precondition,
          std::string(where) + ": unitary does not commute with the grading");
  GradedSplit s = split_grading(0.5 * (g + Matrix(g.adjoint())));
  Matrix ap = log_unitary(Matrix(s.basisPlus.adjoint() * w * s.basisPlus), where);
  Matrix am =
      log_unitary(Matrix(s.basisMinus.adjoint() * w * s.basisMinus), where);
  return s.basisPlus * ap * s.basisPlus.adjoint() +
         s.basisMinus * am * s.basisMinus.adjoint();
}

struct TauFrames {
  Matrix plus, minus;  // full boundary coordinates
};

// tau-eigenframes of a tau-invariant subspace given by orthonormal columns.
TauFrames tau_frames(const HodgePackage& h, const Matrix& basis,
                     const char* where) {
  Matrix t = basis.adjoint() * (h.tau * basis);
  GradedSplit s = split_grading(0.5 * (t + Matrix(t.adjoint())));
  require(s.basisPlus.cols() == s.basisMinus.cols(), ErrorKind::Precondition,
          std::string(where) +
              ": chirality is unbalanced, no pairing involution exists");
  return {Matrix(basis * s.basisPlus), Matrix(basis * s.basisMinus)};
}

Matrix hermitize(const Matrix& a) { return 0.5 * (a + Matrix(a.adjoint())); }

// Plain degree involution of a boundary split: +1 on Omega^<, -1 on
// Omega^>, zero on V and on the middle harmonics.
Matrix plain_degree_involution(const BoundarySplit& b) {
  Matrix low = b.lowBasis * b.lowBasis.adjoint();
  Matrix high = b.highBasis * b.highBasis.adjoint();
  return low - high;
}

Complex ipow(long e) {
  long m = ((e % 4) + 4) % 4;
  static const Complex tab[4] = {Complex(1, 0), Complex(0, 1), Complex(-1, 0),
                                 Complex(0, -1)};
  return tab[m];
}

}  // namespace

// ---------------------------------------------------------------------------
// Flat coefficients and intersection forms
// ---------------------------------------------------------------------------

FlatBundle trivial_bundle() {
  FlatBundle f;
  f.group = cyclic_group(1);
  f.table = character_table(f.group);
  return f;
}

FlatBundle flat_bundle(const FiniteGroup& g, std::vector<int> edgeLabel) {
  check_group(g);
  for (int lab : edgeLabel)
    require(0 <= lab && lab < g.order, ErrorKind::InvalidInput,
            "flat_bundle: label out of range");
  FlatBundle f;
  f.group = g;
  f.table = character_table(g);
  f.edgeLabel = std::move(edgeLabel);
  return f;
}

IntersectionForm scalar_form(const Matrix& f, int middleDegree) {
  require(residual(f, Matrix(f.adjoint())) < 1e-10, ErrorKind::InvalidInput,
          "scalar_form needs a hermitian matrix");
  IntersectionForm out;
  out.middleDegree = middleDegree;
  out.blockDegree = {1};
  out.blocks = {f};
  return out;
}

namespace {

// One isotypic block of the middle pairing of a (cover) complex: harmonic
// representatives compressed by the projector, the bounded case pairing the
// image of the interior-supported classes inside the absolute ones.
Matrix middle_block(const CellComplex& c, bool closed, int m,
                    const Matrix& proj, double tol) {
  const char* tag = "intersection_form";
  Matrix h = cohomology_basis(c, m, tol);
  Matrix habs =
      h.cols() > 0 ? Matrix(h * projector_range(
                                    Matrix(h.adjoint() * proj * h), tag))
                   : h;
  Matrix reps;
  if (closed) {
    reps = habs;
  } else {
    Matrix dFull = coboundary(c, m);
    std::vector<Eigen::Index> interior;
    for (Eigen::Index j = 0; j < c.counts[m]; ++j)
      if (!c.onBoundary[m][j]) interior.push_back(j);
    Matrix dInt(dFull.rows(), (Eigen::Index)interior.size());
    for (Eigen::Index j = 0; j < dInt.cols(); ++j)
      dInt.col(j) = dFull.col(interior[(size_t)j]);
    Matrix null;
    if (dInt.cols() == 0) {
      null = Matrix(0, 0);
    } else {
      Eigen::JacobiSVD<Matrix> svd(dInt, Eigen::ComputeFullV);
      Eigen::Index r = banded_rank(svd.singularValues(), tol,
                                   "intersection_form relative rank");
      null = svd.matrixV().rightCols(dInt.cols() - r);
    }
    Matrix z = Matrix::Zero(c.counts[m], null.cols());
    for (Eigen::Index j = 0; j < (Eigen::Index)interior.size(); ++j)
      z.row(interior[(size_t)j]) = null.row(j);
    Matrix zi =
        z.cols() > 0 ? Matrix(z * projector_range(
                                      Matrix(z.adjoint() * proj * z), tag))
                     : z;
    if (zi.cols() == 0 || habs.cols() == 0) return Matrix(0, 0);
    Matrix coords = habs.adjoint() * zi;
    Eigen::JacobiSVD<Matrix> im(coords, Eigen::ComputeFullV);
    Eigen::Index rr =
        banded_rank(im.singularValues(), tol, "intersection_form image rank");
    if (rr == 0) return Matrix(0, 0);
    reps = zi * im.matrixV().leftCols(rr);
  }
  if (reps.cols() == 0) return Matrix(0, 0);
  RealVector fund = fundamental_class(c);
  Matrix f(reps.cols(), reps.cols());
  for (Eigen::Index i = 0; i < reps.cols(); ++i) {
    Vector lhs = reps.col(i).conjugate();
    for (Eigen::Index j = 0; j < reps.cols(); ++j)
      f(i, j) = cup_pair(c, m, lhs, reps.col(j), fund);
  }
  if (m % 2 == 1) f *= Complex(0, 1);
  require(residual(f, Matrix(f.adjoint())) < 1e-10, ErrorKind::Precondition,
          "middle pairing failed to be hermitian");
  return f;
}

}  // namespace

IntersectionForm intersection_form(const CellComplex& x, const FlatBundle& f,
                                   double tol) {
  require(x.dim % 2 == 0, ErrorKind::InvalidInput,
          "intersection_form needs an even-dimensional complex");
  bool closed = complex_closed(x);
  int m = x.dim / 2;
  IntersectionForm out;
  out.middleDegree = m;
  out.blockDegree = f.table.degree;
  if (f.group.order == 1) {
    Matrix p = eye(x.counts[m]);
    out.blocks.push_back(middle_block(x, closed, m, p, tol));
    return out;
  }
  require(x.simplicial(), ErrorKind::Unsupported,
          "flat coefficients need a simplicial complex");
  std::vector<int> labels = f.edgeLabel.empty()
                                ? std::vector<int>((size_t)x.counts[1], 0)
                                : f.edgeLabel;
  require((Eigen::Index)labels.size() == x.counts[1], ErrorKind::InvalidInput,
          "one transport label per edge");
  CoverComplex cover = cover_complex(x, labels, f.group);
  bool coverClosed = complex_closed(cover.space);
  std::vector<Matrix> act = deck_action(cover, f.group, m);
  for (int i = 0; i < (int)f.table.degree.size(); ++i) {
    Matrix p = isotypic_projector(f.group, f.table, i, act);
    out.blocks.push_back(middle_block(cover.space, coverClosed, m, p, tol));
  }
  return out;
}

K0Class signature_of_form(const IntersectionForm& f, double tol) {
  require(f.blocks.size() == f.blockDegree.size(), ErrorKind::InvalidInput,
          "one degree per form block");
  K0Class out;
  for (size_t i = 0; i < f.blocks.size(); ++i) {
    int deg = f.blockDegree[i];
    require(deg > 0, ErrorKind::InvalidInput, "irrep degrees are positive");
    long s = f.blocks[i].rows() == 0 ? 0 : form_signature(f.blocks[i], tol);
    require(s % deg == 0, ErrorKind::Precondition,
            "block signature is not a multiple of the irrep degree");
    out.comp.push_back(s / deg);
  }
  return out;
}

IntersectionForm form_kronecker(const IntersectionForm& a,
                                const IntersectionForm& b) {
  IntersectionForm out;
  out.middleDegree = a.middleDegree + b.middleDegree;
  for (size_t i = 0; i < a.blocks.size(); ++i)
    for (size_t j = 0; j < b.blocks.size(); ++j) {
      out.blockDegree.push_back(a.blockDegree[i] * b.blockDegree[j]);
      if (a.blocks[i].rows() == 0 || b.blocks[j].rows() == 0)
        out.blocks.push_back(Matrix(0, 0));
      else
        out.blocks.push_back(kron(a.blocks[i], b.blocks[j]));
    }
  return out;
}

// ---------------------------------------------------------------------------
// Package families
// ---------------------------------------------------------------------------

PackageFamily point_family(Eigen::Index plus, Eigen::Index minus,
                           const FlatBundle& f) {
  require(plus >= 0 && minus >= 0 && plus + minus > 0, ErrorKind::InvalidInput,
          "point_family needs a nonempty point set");
  PackageFamily p;
  p.group = f.group;
  p.table = f.table;
  for (int deg : f.table.degree) {
    p.blockDegree.push_back(deg);
    p.block.push_back(
        signed_points_package(plus, minus, (Eigen::Index)deg * deg));
  }
  return p;
}

PackageFamily circle_family(const CellComplex& circle, const FlatBundle& f) {
  require(circle.dim == 1 && circle.simplicial(), ErrorKind::InvalidInput,
          "circle_family needs a simplicial circle");
  require(complex_closed(circle), ErrorKind::InvalidInput,
          "circle_family needs a closed circle");
  std::vector<int> labels =
      f.edgeLabel.empty() ? std::vector<int>((size_t)circle.counts[1], 0)
                          : f.edgeLabel;
  require((Eigen::Index)labels.size() == circle.counts[1],
          ErrorKind::InvalidInput, "one transport label per edge");
  PackageFamily p;
  p.group = f.group;
  p.table = f.table;
  for (int i = 0; i < (int)f.table.degree.size(); ++i) {
    p.blockDegree.push_back(f.table.degree[i]);
    p.block.push_back(
        isotypic_circle_package(circle, labels, f.group, f.table, i));
  }
  return p;
}

PackageFamily product_family(const PackageFamily& a, const PackageFamily& b) {
  PackageFamily p;
  p.group = product_group(a.group, b.group);
  p.table = character_table(p.group);
  for (size_t i = 0; i < a.block.size(); ++i)
    for (size_t j = 0; j < b.block.size(); ++j) {
      p.blockDegree.push_back(a.blockDegree[i] * b.blockDegree[j]);
      p.block.push_back(product_package(a.block[i], b.block[j]));
    }
  return p;
}

K0Class family_class(const PackageFamily& p, double tol) {
  require(p.block.size() == p.blockDegree.size(), ErrorKind::InvalidInput,
          "one degree per family block");
  K0Class out;
  for (size_t i = 0; i < p.block.size(); ++i) {
    const HodgePackage& h = p.block[i];
    require(h.dim % 2 == 0, ErrorKind::Precondition,
            "family_class needs even-dimensional blocks");
    GradedKernel k = graded_kernel_class(h.dsign(), h.tau, tol);
    int deg = p.blockDegree[i];
    require(k.superDim % deg == 0, ErrorKind::Precondition,
            "family class is not a multiple of the irrep degree");
    out.comp.push_back(k.superDim / deg);
  }
  return out;
}

K1Class closed_odd_class(const PackageFamily& p) {
  K1Class out;
  for (const HodgePackage& h : p.block) {
    require(h.dim % 2 == 1, ErrorKind::Precondition,
            "closed_odd_class needs odd-dimensional blocks");
    out.comp.push_back(0);
  }
  return out;
}

K0Class harmonic_multiplicity(const PackageFamily& p, int degree, double tol) {
  K0Class out;
  for (size_t i = 0; i < p.block.size(); ++i) {
    Eigen::Index dimH = harmonic_basis(p.block[i], degree, tol).cols();
    int deg = p.blockDegree[i];
    require(dimH % deg == 0, ErrorKind::Precondition,
            "harmonic dimension is not a multiple of the irrep degree");
    out.comp.push_back(dimH / deg);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Involution specs and trivializing operators
// ---------------------------------------------------------------------------

double InvolutionReport::worst() const {
  return std::max({onV, involution, selfadjoint, tauAnti, opCompat});
}

InvolutionReport check_involution(const HodgePackage& h,
                                  const BoundarySplit& b,
                                  const InvolutionSpec& s) {
  require(s.oddFilling == b.oddFilling, ErrorKind::InvalidInput,
          "involution and split disagree on the filling parity");
  InvolutionReport r;
  const Matrix& inv = s.inv;
  Matrix pw = b.wBasis * b.wBasis.adjoint();
  r.onV = b.vBasis.cols() > 0 ? opnorm(Matrix(inv * b.vBasis)) : 0.0;
  r.involution = residual(Matrix(inv * inv), pw);
  r.selfadjoint = residual(inv, Matrix(inv.adjoint()));
  r.tauAnti = residual(Matrix(inv * h.tau), Matrix(-h.tau * inv));
  if (s.oddFilling) {
    Matrix ds = h.dsign();
    Matrix g = h.gamma();
    r.opCompat = std::max(residual(Matrix(inv * ds), Matrix(ds * inv)),
                          residual(Matrix(inv * g), Matrix(g * inv)));
  } else {
    Matrix bd = h.dbd();
    r.opCompat = residual(Matrix(inv * bd), Matrix(-bd * inv));
  }
  return r;
}

InvolutionSpec degree_involution_spec(const HodgePackage& h,
                                      const BoundarySplit& b) {
  (void)h;
  require(!b.oddFilling, ErrorKind::Precondition,
          "the bare degree involution is the even-filling case");
  return {false, alpha_involution(b)};
}

InvolutionSpec lagrangian_involution_spec(const HodgePackage& h,
                                          const BoundarySplit& b,
                                          const LagrangianData& l) {
  (void)h;
  require(b.oddFilling, ErrorKind::Precondition,
          "a Lagrangian involution is the odd-filling case");
  return {true, alpha_involution(b, l)};
}

InvolutionSpec opp_involution(const HodgePackage& h, const InvolutionSpec& s) {
  require(!s.oddFilling, ErrorKind::Precondition,
          "the opposite involution is an even-filling construction");
  return {false, Matrix(Complex(0, -1) * (s.inv * h.tau))};
}

namespace {

// S = T+ s T+* + T- s T-* with T- the mirror of the tau-positive frame
// through the involution; commutes with tau, the involution, and (after
// block-averaging, odd case) the grading.
Matrix mirrored_shape(const HodgePackage& h, const BoundarySplit& b,
                      const InvolutionSpec& spec, const Matrix& sPlus) {
  TauFrames f = tau_frames(h, b.wBasis, "trivializing shape");
  Eigen::Index k = f.plus.cols();
  require(sPlus.rows() == k && sPlus.cols() == k, ErrorKind::InvalidInput,
          "shape must act on the tau-positive part of W");
  Matrix s = hermitize(sPlus);
  if (k > 0) {
    require(residual(sPlus, s) < kStructTol, ErrorKind::InvalidInput,
            "shape must be hermitian");
    Eigen::SelfAdjointEigenSolver<Matrix> es(s);
    require(es.eigenvalues().minCoeff() > 1e-10, ErrorKind::Precondition,
            "shape must be positive");
  }
  if (spec.oddFilling && k > 0) {
    Matrix g = f.plus.adjoint() * (h.gamma() * f.plus);
    s = 0.5 * (s + Matrix(g * s * g));
  }
  Matrix tMinus = spec.inv * f.plus;
  return f.plus * s * f.plus.adjoint() + tMinus * s * tMinus.adjoint();
}

TrivializingOp finish_trivializing(const HodgePackage& h,
                                   const InvolutionSpec& spec,
                                   const Matrix& shape) {
  Matrix a;
  if (spec.oddFilling)
    a = spec.inv * h.gamma() * shape;
  else
    a = Complex(0, 1) * (spec.inv * h.tau * shape);
  a = hermitize(a);
  Matrix op = spec.oddFilling ? h.dsign() : h.dbd();
  Matrix total = op + a;
  Eigen::JacobiSVD<Matrix> svd(total);
  TrivializingOp out;
  out.a = a;
  out.gap = svd.singularValues().minCoeff();
  out.squareDefect =
      residual(Matrix(total * total), Matrix(op * op + a * a));
  return out;
}

}  // namespace

TrivializingOp canonical_trivializing(const HodgePackage& h,
                                      const BoundarySplit& b,
                                      const InvolutionSpec& s) {
  TauFrames f = tau_frames(h, b.wBasis, "trivializing shape");
  return shaped_trivializing(h, b, s, eye(f.plus.cols()));
}

TrivializingOp shaped_trivializing(const HodgePackage& h,
                                   const BoundarySplit& b,
                                   const InvolutionSpec& s,
                                   const Matrix& sPlus) {
  require(b.oddFilling == s.oddFilling, ErrorKind::InvalidInput,
          "involution and split disagree on the filling parity");
  Matrix shape = mirrored_shape(h, b, s, sPlus);
  return finish_trivializing(h, s, shape);
}

std::vector<TrivializingOp> symmetric_family(const HodgePackage& h,
                                             const BoundarySplit& b,
                                             const InvolutionSpec& s,
                                             unsigned seed, int count) {
  require(count >= 1, ErrorKind::InvalidInput, "need at least one member");
  TauFrames f = tau_frames(h, b.wBasis, "trivializing shape");
  Eigen::Index k = f.plus.cols();
  std::vector<TrivializingOp> out;
  out.push_back(shaped_trivializing(h, b, s, eye(k)));
  if (count > 1)
    out.push_back(shaped_trivializing(h, b, s, Matrix(1.7 * eye(k))));
  std::mt19937 rng(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  for (int extra = 2; extra < count; ++extra) {
    Matrix c(k, k);
    for (Eigen::Index i = 0; i < k; ++i)
      for (Eigen::Index j = 0; j < k; ++j)
        c(i, j) = Complex(dist(rng), dist(rng));
    Matrix pos =
        eye(k) + (0.35 / std::max<double>(1.0, (double)k)) * (c.adjoint() * c);
    out.push_back(shaped_trivializing(h, b, s, pos));
  }
  return out;
}

std::function<InvolutionSpec(double)> involution_path(const HodgePackage& h,
                                                      const BoundarySplit& b,
                                                      const InvolutionSpec& s0,
                                                      const InvolutionSpec& s1) {
  require(s0.oddFilling == b.oddFilling && s1.oddFilling == b.oddFilling,
          ErrorKind::InvalidInput,
          "path endpoints and split disagree on the filling parity");
  TauFrames f = tau_frames(h, b.wBasis, "involution_path");
  Matrix ep = f.plus, em = f.minus;
  auto extract = [&](const InvolutionSpec& s) {
    Matrix u = ep.adjoint() * s.inv * em;
    require(is_unitary(u, 1e-8), ErrorKind::Precondition,
            "involution is not a clean pairing on W");
    Matrix rebuilt = ep * u * em.adjoint() + em * u.adjoint() * ep.adjoint();
    require(residual(rebuilt, s.inv) < 1e-8, ErrorKind::Precondition,
            "involution has content outside the W pairing");
    return u;
  };
  Matrix u0 = extract(s0), u1 = extract(s1);
  Matrix w = u1 * u0.adjoint();
  bool odd = b.oddFilling;
  Matrix a;
  if (odd) {
    Matrix gp = ep.adjoint() * (h.gamma() * ep);
    a = log_unitary_blocked(w, gp, "involution_path");
  } else {
    a = log_unitary(w, "involution_path");
  }
  return [ep, em, u0, a, odd](double t) {
    Matrix ut = expi(a, t) * u0;
    Matrix inv = ep * ut * em.adjoint() + em * ut.adjoint() * ep.adjoint();
    return InvolutionSpec{odd, inv};
  };
}

// ---------------------------------------------------------------------------
// Collar dictionaries
// ---------------------------------------------------------------------------

namespace {

Matrix pauli1() {
  Matrix s(2, 2);
  s << 0, 1, 1, 0;
  return s;
}

Matrix pauli2() {
  Matrix s(2, 2);
  s << 0, Complex(0, -1), Complex(0, 1), 0;
  return s;
}

Matrix pauli3() {
  Matrix s(2, 2);
  s << 1, 0, 0, -1;
  return s;
}

Matrix clifford_dx() {
  Matrix s(2, 2);
  s << 0, -1, 1, 0;
  return s;
}

}  // namespace

CollarModel collar_model(const HodgePackage& boundary, bool oddFilling) {
  Eigen::Index n = boundary.total();
  CollarModel m;
  m.oddFilling = oddFilling;
  m.cdx1 = kron(clifford_dx(), eye(n));
  m.gammaM = kron(pauli3(), boundary.gamma());
  m.pencilFirst = m.cdx1;
  m.pencilZeroth = kron(pauli3(), boundary.dsign());
  if (!oddFilling) {
    require(boundary.dim % 2 == 1, ErrorKind::InvalidInput,
            "an even filling has an odd-dimensional boundary");
    m.tauM = kron(pauli1(), boundary.tau);
    Matrix phi(2 * n, n);
    phi.topRows(n) = boundary.tau;
    phi.bottomRows(n) = eye(n);
    m.embed = phi / std::sqrt(2.0);
    m.boundaryOp = boundary.dbd();
  } else {
    require(boundary.dim % 2 == 0, ErrorKind::InvalidInput,
            "an odd filling has an even-dimensional boundary");
    m.tauM = kron(pauli2(), boundary.tau);
    Matrix g = boundary.gamma();
    Matrix pp = 0.5 * (eye(n) + g), pm = 0.5 * (eye(n) - g);
    Matrix sig(2 * n, n);
    sig.topRows(n) = pp - Complex(0, 1) * (boundary.tau * pm);
    sig.bottomRows(n) = Complex(0, 1) * (boundary.tau * pp) + pm;
    m.embed = sig / std::sqrt(2.0);
    m.boundaryOp = boundary.dsign();
  }
  return m;
}

NamedResiduals collar_identities(const HodgePackage& boundary,
                                 bool oddFilling) {
  CollarModel m = collar_model(boundary, oddFilling);
  Eigen::Index n = boundary.total();
  Matrix i2n = eye(2 * n);
  NamedResiduals out;
  auto push = [&](const std::string& name, double v) {
    out.emplace_back(name, v);
  };
  std::string p = oddFilling ? "collar.odd." : "collar.even.";
  push(p + "embed-isometry",
       residual(Matrix(m.embed.adjoint() * m.embed), eye(n)));
  push(p + "embed-invariant", residual(Matrix(m.tauM * m.embed), m.embed));
  push(p + "clifford-square", residual(Matrix(m.cdx1 * m.cdx1), Matrix(-i2n)));
  push(p + "clifford-skew",
       residual(Matrix(m.cdx1.adjoint()), Matrix(-m.cdx1)));
  push(p + "grading-clifford-anti",
       residual(Matrix(m.gammaM * m.cdx1), Matrix(-m.cdx1 * m.gammaM)));
  push(p + "zeroth-grading-anti",
       residual(Matrix(m.gammaM * m.pencilZeroth),
                Matrix(-m.pencilZeroth * m.gammaM)));
  if (!oddFilling) {
    Matrix bhat = kron(eye(2), boundary.dbd());
    push(p + "chirality-clifford-anti",
         residual(Matrix(m.tauM * m.cdx1), Matrix(-m.cdx1 * m.tauM)));
    push(p + "chirality-grading-comm",
         residual(Matrix(m.tauM * m.gammaM), Matrix(m.gammaM * m.tauM)));
    push(p + "boundary-embed",
         residual(Matrix(bhat * m.embed), Matrix(m.embed * boundary.dbd())));
    push(p + "zeroth-from-boundary",
         residual(m.pencilZeroth, Matrix(-m.cdx1 * m.tauM * bhat)));
    Matrix phim(2 * n, n);
    phim.topRows(n) = -boundary.tau;
    phim.bottomRows(n) = eye(n);
    phim /= std::sqrt(2.0);
    push(p + "embed-opposite", residual(Matrix(m.tauM * phim), Matrix(-phim)));
    push(p + "reduced-clifford",
         residual(Matrix(phim.adjoint() * m.cdx1 * m.embed), boundary.tau));
    push(p + "reduced-zeroth",
         residual(Matrix(phim.adjoint() * m.pencilZeroth * m.embed),
                  Matrix(-boundary.dsign())));
    push(p + "grading-restricts",
         residual(Matrix(m.embed.adjoint() * m.gammaM * m.embed),
                  Matrix(-boundary.gamma())));
  } else {
    Matrix z = Complex(0, 1) * m.cdx1;
    push(p + "transport-square", residual(Matrix(z * z), i2n));
    push(p + "boundary-transport",
         residual(Matrix(m.embed * boundary.tau), Matrix(z * m.embed)));
    push(p + "chirality-clifford-comm",
         residual(Matrix(m.tauM * m.cdx1), Matrix(m.cdx1 * m.tauM)));
    push(p + "chirality-zeroth-comm",
         residual(Matrix(m.tauM * m.pencilZeroth),
                  Matrix(m.pencilZeroth * m.tauM)));
    push(p + "chirality-grading-anti",
         residual(Matrix(m.tauM * m.gammaM), Matrix(-m.gammaM * m.tauM)));
    Matrix sigm = m.cdx1 * m.embed;
    push(p + "reduced-clifford",
         residual(Matrix(sigm.adjoint() * m.cdx1 * m.embed), eye(n)));
    push(p + "reduced-zeroth",
         residual(Matrix(sigm.adjoint() * m.pencilZeroth * m.embed),
                  Matrix(-boundary.dsign())));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Product involution identities
// ---------------------------------------------------------------------------

NamedResiduals product_involution_identities(const HodgePackage& a,
                                             const HodgePackage& b) {
  require(a.dim % 2 == 1, ErrorKind::InvalidInput,
          "a first factor without a Lagrangian must be odd-dimensional");
  HodgePackage p = product_package(a, b);
  BoundarySplit sa = boundary_split(a);
  BoundarySplit sp = boundary_split(p);
  Matrix alphaA = alpha_involution(sa);
  Eigen::Index nb = b.total();
  Matrix taup = p.tau;
  NamedResiduals out;
  auto push = [&](const std::string& name, double v) {
    out.emplace_back(name, v);
  };
  if (b.dim % 2 == 0) {
    std::string pre = "prod.oddxeven.";
    Matrix tilde = kron(alphaA, eye(nb));
    Matrix bd = p.dbd();
    Matrix pwa = sa.wBasis * sa.wBasis.adjoint();
    push(pre + "tilde-square",
         residual(Matrix(tilde * tilde), kron(pwa, eye(nb))));
    push(pre + "boundary-op-anti",
         residual(Matrix(tilde * bd), Matrix(-bd * tilde)));
    push(pre + "chirality-anti",
         residual(Matrix(tilde * taup), Matrix(-taup * tilde)));
    Matrix alphaP = plain_degree_involution(sp);
    push(pre + "degree-comm",
         residual(Matrix(tilde * alphaP), Matrix(alphaP * tilde)));
  } else {
    std::string pre = "prod.oddxodd.";
    Matrix tilde = kron(Matrix(alphaA * a.tau), Matrix(b.gamma() * b.tau));
    Matrix ds = p.dsign();
    Matrix gp = p.gamma();
    push(pre + "selfadjoint", residual(tilde, Matrix(tilde.adjoint())));
    push(pre + "sign-op-comm",
         residual(Matrix(tilde * ds), Matrix(ds * tilde)));
    push(pre + "grading-comm",
         residual(Matrix(tilde * gp), Matrix(gp * tilde)));
    push(pre + "chirality-anti",
         residual(Matrix(tilde * taup), Matrix(-taup * tilde)));
    Matrix alphaP = plain_degree_involution(sp);
    push(pre + "degree-anti",
         residual(Matrix(tilde * alphaP), Matrix(-alphaP * tilde)));
    if (sp.midBasis.cols() > 0) {
      Matrix tm = hermitize(
          Matrix(sp.midBasis.adjoint() * tilde * sp.midBasis));
      push(pre + "mid-involution",
           residual(Matrix(tm * tm), eye(sp.midBasis.cols())));
      GradedSplit gs = split_grading(tm);
      if (gs.basisPlus.cols() == gs.basisMinus.cols()) {
        LagrangianData ld{Matrix(sp.midBasis * gs.basisPlus),
                          Matrix(sp.midBasis * gs.basisMinus)};
        push(pre + "lagrangian", lagrangian_residual(p, sp, ld));
      } else {
        push(pre + "lagrangian", 1.0);
      }
    }
    Matrix gammaExt = kron(a.gamma(), eye(nb));
    Matrix x = taup * gammaExt;
    Matrix z = (eye(p.total()) + x) / std::sqrt(2.0);
    push(pre + "twist-unitary",
         residual(Matrix(z * z.adjoint()), eye(p.total())));
    push(pre + "twist-grading",
         residual(Matrix(z * gammaExt * z.adjoint()), taup));
    Matrix dsExt = kron(a.dsign(), eye(nb)) -
                   Matrix(taup * kron(eye(a.total()), b.dsign()));
    push(pre + "twist-sign-op",
         residual(Matrix(z * dsExt * z.adjoint()), ds));
  }
  return out;
}

NamedResiduals product_involution_identities(const HodgePackage& a,
                                             const LagrangianData& la,
                                             const HodgePackage& b) {
  require(a.dim % 2 == 0, ErrorKind::InvalidInput,
          "a Lagrangian belongs to an even-dimensional first factor");
  HodgePackage p = product_package(a, b);
  BoundarySplit sa = boundary_split(a);
  BoundarySplit sp = boundary_split(p);
  Matrix alphaL = alpha_involution(sa, la);
  Eigen::Index nb = b.total();
  Matrix taup = p.tau;
  NamedResiduals out;
  auto push = [&](const std::string& name, double v) {
    out.emplace_back(name, v);
  };
  if (b.dim % 2 == 0) {
    std::string pre = "prod.evenxeven.";
    Matrix tilde = kron(alphaL, b.gamma());
    Matrix ds = p.dsign();
    Matrix gp = p.gamma();
    push(pre + "grading-comm",
         residual(Matrix(tilde * gp), Matrix(gp * tilde)));
    push(pre + "chirality-anti",
         residual(Matrix(tilde * taup), Matrix(-taup * tilde)));
    Matrix comm = tilde * ds - ds * tilde;
    push(pre + "sign-op-comm-on-w",
         sp.wBasis.cols() > 0
             ? opnorm(Matrix(sp.wBasis.adjoint() * comm * sp.wBasis))
             : 0.0);
    LagrangianData lt = lagrangian_tensor(a, sa, la, b, p);
    push(pre + "tensor-lagrangian", lagrangian_residual(p, sp, lt));
    Matrix alphaLP = alpha_involution(sp, lt);
    push(pre + "tensor-involution-comm",
         residual(Matrix(tilde * alphaLP), Matrix(alphaLP * tilde)));
  } else {
    std::string pre = "prod.evenxodd.";
    Matrix tilde = -kron(alphaL, eye(nb));
    Matrix bd = p.dbd();
    Matrix pwa = sa.wBasis * sa.wBasis.adjoint();
    push(pre + "tilde-square",
         residual(Matrix(tilde * tilde), kron(pwa, eye(nb))));
    push(pre + "boundary-op-anti",
         residual(Matrix(tilde * bd), Matrix(-bd * tilde)));
    push(pre + "chirality-anti",
         residual(Matrix(tilde * taup), Matrix(-taup * tilde)));
    Matrix alphaP = plain_degree_involution(sp);
    push(pre + "degree-comm",
         residual(Matrix(tilde * alphaP), Matrix(alphaP * tilde)));
  }
  return out;
}

NamedResiduals decomposition_checks(const HodgePackage& a,
                                    const HodgePackage& b) {
  HodgePackage p = product_package(a, b);
  BoundarySplit sa = boundary_split(a);
  Eigen::Index nb = b.total();
  Matrix vt = kron(sa.vBasis, eye(nb));
  Matrix wt = kron(sa.wBasis, eye(nb));
  Matrix op = p.dim % 2 == 1 ? p.dbd() : p.dsign();
  NamedResiduals out;
  auto push = [&](const std::string& name, double v) {
    out.emplace_back(name, v);
  };
  push("decomp.sum-of-parts",
       residual(Matrix(vt * vt.adjoint() + wt * wt.adjoint()),
                eye(p.total())));
  push("decomp.op-keeps-v-tensor",
       vt.cols() > 0 && wt.cols() > 0
           ? opnorm(Matrix(wt.adjoint() * op * vt))
           : 0.0);
  push("decomp.op-keeps-w-tensor",
       vt.cols() > 0 && wt.cols() > 0
           ? opnorm(Matrix(vt.adjoint() * op * wt))
           : 0.0);
  if (vt.cols() > 0) {
    Eigen::JacobiSVD<Matrix> svd(Matrix(vt.adjoint() * op * vt));
    push("decomp.v-tensor.gap", svd.singularValues().minCoeff());
  }
  if (p.dim % 2 == 0) {
    BoundarySplit sp = boundary_split(p);
    if (sp.midBasis.cols() > 0) {
      Matrix ha = harmonic_basis(a);
      Matrix hb = harmonic_basis(b);
      Matrix ph = kron(Matrix(ha * ha.adjoint()), Matrix(hb * hb.adjoint()));
      push("decomp.middle-in-harmonics",
           opnorm(Matrix(sp.midBasis - ph * sp.midBasis)));
    }
  }
  return out;
}

NamedResiduals hs_normalization_check(const HodgePackage& h) {
  require(h.dim % 2 == 0, ErrorKind::InvalidInput,
          "the rescaling lives on even-dimensional models");
  int n = h.dim;
  Eigen::Index total = h.total();
  Matrix u = Matrix::Zero(total, total);
  for (Eigen::Index c = 0; c < total; ++c) {
    long deg = h.degreeOf[(size_t)c];
    u(c, c) = ipow(deg * (deg - 1) / 2);
  }
  NamedResiduals out;
  auto push = [&](const std::string& name, double v) {
    out.emplace_back(name, v);
  };
  Matrix dResc = u * h.d * u.adjoint();
  Matrix dTarget = Matrix::Zero(total, total);
  for (int deg = 0; deg <= n; ++deg)
    dTarget += ipow(deg) * Matrix(h.d * degree_projector(h, deg));
  push("hs.coboundary-rescale", residual(dResc, dTarget));
  Matrix tauHs = Matrix::Zero(total, total);
  for (int deg = 0; deg <= n; ++deg) {
    long e = -(long)deg * (n - deg) - (long)deg * (deg - 1) - n / 2;
    tauHs += ipow(e) * Matrix(h.tau * degree_projector(h, deg));
  }
  int sgn = (n / 2) % 2 == 0 ? 1 : -1;
  push("hs.involution-rescale",
       residual(Matrix(u * h.tau * u.adjoint()), Matrix((double)sgn * tauHs)));
  Matrix dsignResc = dResc + Matrix(dResc.adjoint());
  long left = graded_kernel_class(h.dsign(), h.tau).superDim;
  long right = graded_kernel_class(dsignResc, hermitize(tauHs)).superDim;
  push("hs.class-match", (double)std::labs(left - sgn * right));
  return out;
}

// ---------------------------------------------------------------------------
// Collar index models
// ---------------------------------------------------------------------------

FiberPotential package_path_potential(const HodgePackage& left,
                                      const HodgePackage& right,
                                      double length) {
  require(left.total() == right.total(), ErrorKind::InvalidInput,
          "path endpoints must share the fiber dimension");
  require(length > 0, ErrorKind::InvalidInput, "path length must be positive");
  Matrix b0 = -left.dbd();
  Matrix b1 = -right.dbd();
  return [b0, b1, length](double x) {
    double s = std::clamp(x / length, 0.0, 1.0);
    return Matrix((1.0 - s) * b0 + s * b1);
  };
}

long even_collar_index(const HodgePackage& left, const TrivializingOp& aLeft,
                       const HodgePackage& right,
                       const TrivializingOp& aRight,
                       const FiberPotential& path,
                       const EvenModelOptions& opt) {
  require(left.dim % 2 == 1 && right.dim % 2 == 1, ErrorKind::InvalidInput,
          "the even collar model needs odd-dimensional boundary data");
  Mesh1D mesh{opt.length, opt.cells};
  check_mesh(mesh);
  require(residual(path(0.0), Matrix(-left.dbd())) < kPathTol,
          ErrorKind::Precondition, "path must start at the left collar term");
  require(residual(path(opt.length), Matrix(-right.dbd())) < kPathTol,
          ErrorKind::Precondition, "path must end at the right collar term");
  EvenIntervalOp rect = build_even_interval(mesh, left.total(), path, aLeft.a,
                                            Matrix(-aRight.a));
  return numerical_index(rect.op).index;
}

long even_collar_index_capped(const HodgePackage& left,
                              const TrivializingOp& aLeft, const Matrix& cap,
                              const EvenModelOptions& opt) {
  require(left.dim % 2 == 1, ErrorKind::InvalidInput,
          "the even collar model needs odd-dimensional boundary data");
  require(cap.rows() == left.total() && cap.cols() == left.total(),
          ErrorKind::InvalidInput, "cap must act on the boundary fiber");
  Mesh1D mesh{opt.length, opt.cells};
  check_mesh(mesh);
  Matrix b = -left.dbd();
  // B(L) + attach = -cap, matching the far-end orientation of the
  // two-sided model.
  Matrix attachRight = left.dbd() - cap;
  EvenIntervalOp rect = build_even_interval(mesh, left.total(),
                                            constant_potential(b), aLeft.a,
                                            attachRight);
  return numerical_index(rect.op).index;
}

// ---------------------------------------------------------------------------
// Odd case: difference elements and loop classes
// ---------------------------------------------------------------------------

long unitary_loop_winding(const std::function<Matrix(double)>& u,
                          int initialSamples, double argStep) {
  require(initialSamples >= 4, ErrorKind::InvalidInput,
          "need at least four initial samples");
  require(argStep > 0 && argStep < 3.0, ErrorKind::InvalidInput,
          "argument step must sit inside (0, 3)");
  const double pi = kTwoPi / 2.0;
  long evals = 0;
  const long maxEvals = 200000;
  auto argdet = [&](double t) {
    Matrix m = u(t);
    require(is_unitary(m, 1e-6), ErrorKind::Precondition,
            "loop left the unitary group");
    ++evals;
    return std::arg(Eigen::PartialPivLU<Matrix>(m).determinant());
  };
  Matrix u0 = u(0.0);
  require(residual(u0, u(kTwoPi)) < 1e-8, ErrorKind::Precondition,
          "winding needs a closed loop on [0, 2 pi]");
  std::function<double(double, double, double, double, int)> seg =
      [&](double t0, double a0, double t1, double a1, int depth) -> double {
    double diff = a1 - a0;
    while (diff > pi) diff -= kTwoPi;
    while (diff <= -pi) diff += kTwoPi;
    if (std::abs(diff) <= argStep) return diff;
    require(depth < 40 && evals < maxEvals, ErrorKind::RefineRequired,
            "argument tracking failed to settle");
    double tm = 0.5 * (t0 + t1);
    double am = argdet(tm);
    return seg(t0, a0, tm, am, depth + 1) + seg(tm, am, t1, a1, depth + 1);
  };
  double total = 0.0;
  double prevT = 0.0, prevA = argdet(0.0);
  for (int i = 1; i <= initialSamples; ++i) {
    double t = kTwoPi * i / initialSamples;
    double aNow = argdet(t);
    total += seg(prevT, prevA, t, aNow, 0);
    prevT = t;
    prevA = aNow;
  }
  double wind = total / kTwoPi;
  long rounded = std::lround(wind);
  require(std::abs(wind - (double)rounded) < 1e-6, ErrorKind::RefineRequired,
          "winding did not converge to an integer");
  return rounded;
}

DifferenceElement lagrangian_difference_class(const HodgePackage& h,
                                              const BoundarySplit& b,
                                              const LagrangianData& l1,
                                              const LagrangianData& l2,
                                              int samples) {
  require(b.oddFilling, ErrorKind::InvalidInput,
          "difference elements live on odd-filling boundaries");
  require(samples >= 2, ErrorKind::InvalidInput, "need at least two samples");
  TauFrames f = tau_frames(h, b.midBasis, "lagrangian_difference_class");
  Eigen::Index k = f.plus.cols();
  auto extract = [&](const LagrangianData& l) {
    require(l.basis.cols() == k, ErrorKind::InvalidInput,
            "lagrangian dimension mismatch");
    if (k == 0) return Matrix(0, 0);
    Matrix y = f.minus.adjoint() * l.basis;
    Matrix x = f.plus.adjoint() * l.basis;
    Eigen::JacobiSVD<Matrix> sv(y);
    require(sv.singularValues().minCoeff() > 1e-8, ErrorKind::Precondition,
            "lagrangian is not a graph over the tau-negative side");
    Matrix u = x * y.inverse();
    Eigen::JacobiSVD<Matrix> pol(u, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Matrix uu = pol.matrixU() * pol.matrixV().adjoint();
    require(residual(u, uu) < 1e-6, ErrorKind::Precondition,
            "lagrangian graph map is far from unitary");
    return uu;
  };
  Matrix g1 = extract(l1), g2 = extract(l2);
  Matrix a = log_unitary(Matrix(g2 * g1.adjoint()),
                         "lagrangian_difference_class");
  double worst = 0.0;
  for (int i = 0; i <= samples; ++i) {
    double t = (double)i / samples;
    Matrix ut = expi(a, t) * g1;
    LagrangianData ld{Matrix((f.minus + f.plus * ut) / std::sqrt(2.0)),
                      Matrix((f.minus - f.plus * ut) / std::sqrt(2.0))};
    worst = std::max(worst, lagrangian_residual(h, b, ld));
  }
  DifferenceElement out;
  out.cls = K1Class{std::vector<long>(1, 0)};
  out.pathResidual = worst;
  return out;
}

long lagrangian_difference_winding(const std::function<Matrix(double)>& u1,
                                   const std::function<Matrix(double)>& u2,
                                   int initialSamples) {
  auto loop = [&](double t) { return Matrix(u1(t) * u2(t).adjoint()); };
  return unitary_loop_winding(loop, initialSamples, 1.2);
}

// ---------------------------------------------------------------------------
// Product verification
// ---------------------------------------------------------------------------

ProductVerdict verify_signature_products(const CellComplex& x,
                                         const CellComplex& y,
                                         const FlatBundle& fx,
                                         const FlatBundle& fy, double tol) {
  require(fx.group.order == 1 && fy.group.order == 1, ErrorKind::Unsupported,
          "cell products are not simplicial; twisted factors go through the "
          "form or family routes");
  require(complex_closed(x) && complex_closed(y), ErrorKind::InvalidInput,
          "the product route needs closed factors");
  require((x.dim + y.dim) % 2 == 0, ErrorKind::InvalidInput,
          "the product middle pairing needs an even total dimension");
  FlatBundle triv = trivial_bundle();
  auto closed_signature = [&](const CellComplex& c) {
    return c.dim % 2 == 0
               ? signature_of_form(intersection_form(c, triv, tol), tol).comp[0]
               : 0;
  };
  long sx = closed_signature(x);
  long sy = closed_signature(y);
  CellComplex p = product_complex(x, y);
  Matrix f = product_intersection_form(p, x, y, tol);
  long sp = f.rows() == 0 ? 0 : form_signature(f, tol);
  ProductVerdict v;
  v.factorTensor = K0Class{{sx * sy}};
  v.productClass = K0Class{{sp}};
  v.match = sx * sy == sp;
  return v;
}

ProductVerdict verify_signature_products(const IntersectionForm& a,
                                         const IntersectionForm& b,
                                         const FiniteGroup& ga,
                                         const FiniteGroup& gb, double tol) {
  CharacterTable ta = character_table(ga);
  CharacterTable tb = character_table(gb);
  require(a.blocks.size() == ta.degree.size(), ErrorKind::InvalidInput,
          "form blocks must match the irreps of the first group");
  require(b.blocks.size() == tb.degree.size(), ErrorKind::InvalidInput,
          "form blocks must match the irreps of the second group");
  FiniteGroup gp = product_group(ga, gb);
  CharacterTable tp = character_table(gp);
  K0Class ka = signature_of_form(a, tol);
  K0Class kb = signature_of_form(b, tol);
  ProductVerdict v;
  v.factorTensor =
      phi_pushforward(k0_kronecker(ka, kb), ga, ta, gb, tb, gp, tp);
  v.productClass = phi_pushforward(signature_of_form(form_kronecker(a, b), tol),
                                   ga, ta, gb, tb, gp, tp);
  v.match = v.factorTensor == v.productClass;
  return v;
}

ProductVerdict verify_family_products(const PackageFamily& a,
                                      const PackageFamily& b) {
  for (const HodgePackage& h : a.block)
    require(h.dim % 2 == 0, ErrorKind::Unsupported,
            "the family product route verifies even-dimensional factors");
  for (const HodgePackage& h : b.block)
    require(h.dim % 2 == 0, ErrorKind::Unsupported,
            "the family product route verifies even-dimensional factors");
  PackageFamily p = product_family(a, b);
  ProductVerdict v;
  v.factorTensor =
      phi_pushforward(k0_kronecker(family_class(a), family_class(b)), a.group,
                      a.table, b.group, b.table, p.group, p.table);
  v.productClass = phi_pushforward(family_class(p), a.group, a.table, b.group,
                                   b.table, p.group, p.table);
  v.match = v.factorTensor == v.productClass;
  return v;
}

MixedProductCheck even_odd_product_check(const Matrix& evenOp,
                                         const Matrix& grading, long flow,
                                         const Mesh1D& mesh) {
  KasparovModule e = even_module({evenOp}, {grading});
  KasparovModule o = odd_module({interval_flow_factor(flow, mesh)});
  KasparovModule prod = kprod(e, o);
  MixedProductCheck out;
  out.expected = graded_kernel_class(evenOp, grading).superDim * flow;
  K1Class k = k1_of_module(prod);
  require(k.comp.size() == 1, ErrorKind::Precondition,
          "mixed product should carry one block");
  out.computed = k.comp[0];
  out.match = out.expected == out.computed;
  return out;
}

MixedProductCheck odd_even_product_check(long flow, const Matrix& evenOp,
                                         const Matrix& grading,
                                         const Mesh1D& mesh) {
  KasparovModule o = odd_module({interval_flow_factor(flow, mesh)});
  KasparovModule e = even_module({evenOp}, {grading});
  KasparovModule prod = kprod(o, e);
  MixedProductCheck out;
  out.expected = graded_kernel_class(evenOp, grading).superDim * flow;
  K1Class k = k1_of_module(prod);
  require(k.comp.size() == 1, ErrorKind::Precondition,
          "mixed product should carry one block");
  out.computed = k.comp[0];
  out.match = out.expected == out.computed;
  return out;
}

namespace {

OperatorFamily negated_family(const OperatorFamily& f) {
  OperatorFamily g = f;
  auto base = f.at;
  g.at = [base](const std::vector<double>& t) { return Matrix(-base(t)); };
  return g;
}

}  // namespace

OddOddProductCheck odd_odd_product_check(long flowA, long flowB,
                                         const Mesh1D& mesh,
                                         const DegreeOptions& opt) {
  OperatorFamily fa = interval_flow_factor(flowA, mesh);
  OperatorFamily fb = interval_flow_factor(flowB, mesh);
  KasparovModule first = kprod(odd_module({fa}), odd_module({fb}));
  KasparovModule second =
      kprod(odd_module({negated_family(fa)}), odd_module({negated_family(fb)}));
  OddOddProductCheck out;
  out.flowA = flowA;
  out.flowB = flowB;
  K0Class d1 = k0_of_torus_module(first, opt);
  K0Class d2 = k0_of_torus_module(second, opt);
  require(d1.comp.size() == 1 && d2.comp.size() == 1, ErrorKind::Precondition,
          "odd-odd product should carry one block");
  out.degreeFirst = d1.comp[0];
  out.degreeSecond = d2.comp[0];
  out.match = out.degreeFirst + out.degreeSecond == 2 * flowA * flowB;
  return out;
}

// ---------------------------------------------------------------------------
// Tensor Lagrangians and stabilization
// ---------------------------------------------------------------------------

LagrangianData lagrangian_tensor(const HodgePackage& a,
                                 const BoundarySplit& sa,
                                 const LagrangianData& la,
                                 const HodgePackage& b,
                                 const HodgePackage& product) {
  require(a.dim % 2 == 0 && b.dim % 2 == 0, ErrorKind::InvalidInput,
          "tensor Lagrangians pair two even-dimensional boundaries");
  BoundarySplit sp = boundary_split(product);
  require(sp.midBasis.cols() > 0, ErrorKind::Precondition,
          "the product has no middle harmonics");
  Matrix tilde = kron(alpha_involution(sa, la), b.gamma());
  Matrix tm = hermitize(Matrix(sp.midBasis.adjoint() * tilde * sp.midBasis));
  GradedSplit gs = split_grading(tm);
  require(gs.basisPlus.cols() == gs.basisMinus.cols(), ErrorKind::Precondition,
          "the tensor involution is unbalanced on the middle");
  return {Matrix(sp.midBasis * gs.basisPlus),
          Matrix(sp.midBasis * gs.basisMinus)};
}

HodgePackage adjoin_middle_block(const HodgePackage& h, Eigen::Index pairs) {
  require(h.dim % 2 == 0, ErrorKind::InvalidInput,
          "stabilizer blocks live in the middle degree of an "
          "even-dimensional boundary");
  require(pairs >= 0, ErrorKind::InvalidInput, "pair count must be >= 0");
  Eigen::Index n0 = h.total();
  Eigen::Index extra = 2 * pairs;
  Eigen::Index n = n0 + extra;
  HodgePackage out;
  out.dim = h.dim;
  out.degreeOf = h.degreeOf;
  out.degreeOf.insert(out.degreeOf.end(), (size_t)extra, h.dim / 2);
  out.d = Matrix::Zero(n, n);
  out.d.topLeftCorner(n0, n0) = h.d;
  out.tau = Matrix::Zero(n, n);
  out.tau.topLeftCorner(n0, n0) = h.tau;
  for (Eigen::Index j = 0; j < pairs; ++j) {
    out.tau(n0 + 2 * j, n0 + 2 * j) = 1;
    out.tau(n0 + 2 * j + 1, n0 + 2 * j + 1) = -1;
  }
  check_package(out);
  return out;
}

namespace {

struct StabFrames {
  Matrix ep, em;     // tau-eigenframes: original middle then adjoined slots
  Eigen::Index base; // original tau-positive middle dimension
};

StabFrames stab_frames(const HodgePackage& st, Eigen::Index originalTotal,
                       Eigen::Index pairs) {
  Eigen::Index n0 = originalTotal;
  Eigen::Index n = st.total();
  HodgePackage orig;
  orig.dim = st.dim;
  orig.degreeOf.assign(st.degreeOf.begin(), st.degreeOf.begin() + n0);
  orig.d = st.d.topLeftCorner(n0, n0);
  orig.tau = st.tau.topLeftCorner(n0, n0);
  Matrix hb = harmonic_basis(orig, st.dim / 2);
  Matrix t = hermitize(Matrix(hb.adjoint() * (orig.tau * hb)));
  GradedSplit gs = split_grading(t);
  Eigen::Index k = gs.basisPlus.cols();
  require(k == gs.basisMinus.cols(), ErrorKind::Precondition,
          "middle chirality is unbalanced; no stabilizer block can repair it "
          "over a block algebra");
  Eigen::Index cols = k + 2 * pairs;
  Matrix ep = Matrix::Zero(n, cols);
  Matrix em = Matrix::Zero(n, cols);
  if (k > 0) {
    ep.topLeftCorner(n0, k) = hb * gs.basisPlus;
    em.topLeftCorner(n0, k) = hb * gs.basisMinus;
  }
  for (Eigen::Index j = 0; j < 2 * pairs; ++j) {
    ep(n0 + 2 * j, k + j) = 1;
    em(n0 + 2 * j + 1, k + j) = 1;
  }
  return {ep, em, k};
}

}  // namespace

StabilizedLagrangians stabilize(const HodgePackage& boundary,
                                Eigen::Index pairs) {
  require(pairs >= 1, ErrorKind::InvalidInput,
          "stabilization needs at least one pair per block");
  require(boundary.dim % 2 == 0, ErrorKind::InvalidInput,
          "stabilization lives on even-dimensional boundaries");
  Matrix hb = harmonic_basis(boundary, boundary.dim / 2);
  Matrix t = hermitize(Matrix(hb.adjoint() * (boundary.tau * hb)));
  GradedSplit gs = split_grading(t);
  require(gs.basisPlus.cols() == gs.basisMinus.cols(), ErrorKind::Precondition,
          "middle chirality is unbalanced; no stabilizer block can repair it "
          "over a block algebra");
  StabilizedLagrangians out;
  out.originalTotal = boundary.total();
  out.pairs = pairs;
  out.boundary = adjoin_middle_block(boundary, 2 * pairs);
  out.split = boundary_split(out.boundary);
  StabFrames f = stab_frames(out.boundary, out.originalTotal, pairs);
  Eigen::Index k = f.base;
  Eigen::Index cols = k + 2 * pairs;
  auto graphOf = [&](double ySign, double zSign) {
    Matrix u = eye(cols);
    for (Eigen::Index j = 0; j < pairs; ++j) {
      u(k + j, k + j) = ySign;
      u(k + pairs + j, k + pairs + j) = zSign;
    }
    return LagrangianData{Matrix((f.em + f.ep * u) / std::sqrt(2.0)),
                          Matrix((f.em - f.ep * u) / std::sqrt(2.0))};
  };
  out.l1 = graphOf(1.0, -1.0);
  out.l2 = graphOf(-1.0, 1.0);
  return out;
}

Matrix stabilizer_path_unitary(const StabilizedLagrangians& s, double t) {
  StabFrames f = stab_frames(s.boundary, s.originalTotal, s.pairs);
  Eigen::Index k = f.base;
  Eigen::Index p = s.pairs;
  Eigen::Index cols = k + 2 * p;
  Matrix m = eye(cols);
  Complex e2 = std::exp(Complex(0.0, 2.0 * t));
  double c = std::cos(t), sn = std::sin(t);
  for (Eigen::Index j = 0; j < p; ++j) {
    Eigen::Index y = k + j;
    Eigen::Index z = k + p + j;
    m(y, y) = e2 * c;
    m(y, z) = sn;
    m(z, y) = -e2 * sn;
    m(z, z) = c;
  }
  Matrix u = eye(s.boundary.total());
  u += f.ep * (m - eye(cols)) * f.ep.adjoint();
  u += f.em * (m - eye(cols)) * f.em.adjoint();
  return u;
}

// ---------------------------------------------------------------------------
// Complex-level umbrella
// ---------------------------------------------------------------------------

SignatureClassResult signature_class(const CellComplex& x, const FlatBundle& f,
                                     double tol) {
  size_t blocks = f.table.degree.size();
  SignatureClassResult out;
  if (x.dim % 2 == 0) {
    out.oddCase = false;
    out.k0 = signature_of_form(intersection_form(x, f, tol), tol);
    out.k1 = K1Class{std::vector<long>(blocks, 0)};
    return out;
  }
  out.oddCase = true;
  require(complex_closed(x), ErrorKind::Unsupported,
          "odd-dimensional complexes with boundary carry relative data, not "
          "a single class");
  out.k0 = K0Class{std::vector<long>(blocks, 0)};
  if (x.dim == 1)
    out.k1 = closed_odd_class(circle_family(x, f));
  else
    out.k1 = K1Class{std::vector<long>(blocks, 0)};
  return out;
}

K0Class cover_kernel_class(const CellComplex& circle, const FlatBundle& f,
                           int degree, double tol) {
  require(circle.dim == 1 && circle.simplicial(), ErrorKind::InvalidInput,
          "the cover route needs a simplicial circle");
  std::vector<int> labels =
      f.edgeLabel.empty() ? std::vector<int>((size_t)circle.counts[1], 0)
                          : f.edgeLabel;
  K0Class out;
  for (int i = 0; i < (int)f.table.degree.size(); ++i) {
    HodgePackage h =
        isotypic_circle_package(circle, labels, f.group, f.table, i);
    Eigen::Index dimH = harmonic_basis(h, degree, tol).cols();
    int deg = f.table.degree[i];
    require(dimH % deg == 0, ErrorKind::Precondition,
            "kernel dimension is not a multiple of the irrep degree");
    out.comp.push_back(dimH / deg);
  }
  return out;
}

}  // namespace apslab
