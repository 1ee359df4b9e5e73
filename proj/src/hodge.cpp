#include "apslab/hodge.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>

#include "apslab/graded.hpp"
#include "apslab/group.hpp"

namespace apslab {

namespace {

constexpr double kRankCut = 1e-8;

// Guard against singular values straddling the rank threshold.
void check_rank_band(const Eigen::VectorXd& sv, double cut,
                     const char* where) {
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    require(sv(i) <= cut / 10 || sv(i) >= cut * 10, ErrorKind::RankAmbiguity,
            std::string(where) + ": singular value too close to the rank cut");
}

// Orthonormal basis of the column span.
Matrix range_basis(const Matrix& a, double cut = kRankCut) {
  if (a.cols() == 0 || a.rows() == 0) return Matrix::Zero(a.rows(), 0);
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU);
  check_rank_band(svd.singularValues(), cut, "range_basis");
  Eigen::Index r = 0;
  while (r < svd.singularValues().size() && svd.singularValues()(r) > cut) ++r;
  return svd.matrixU().leftCols(r);
}

// Orthonormal range of a selfadjoint projector (spectrum near {0, 1}).
Matrix projector_range(const Matrix& p, const char* where) {
  if (p.rows() == 0) return Matrix::Zero(0, 0);
  Eigen::SelfAdjointEigenSolver<Matrix> es(p);
  Eigen::Index keep = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    double ev = es.eigenvalues()(i);
    require(ev < 0.1 || ev > 0.9, ErrorKind::RankAmbiguity,
            std::string(where) + ": projector spectrum not near {0, 1}");
    if (ev > 0.9) ++keep;
  }
  return es.eigenvectors().rightCols(keep);
}

// Orthonormal complement of span(sub) inside span(ambient); both inputs
// have orthonormal columns and sub is contained in ambient.
Matrix complement_within(const Matrix& ambient, const Matrix& sub) {
  if (ambient.cols() == 0) return ambient;
  Matrix p = ambient * ambient.adjoint();
  if (sub.cols() > 0) p -= sub * sub.adjoint();
  return projector_range(p, "complement_within");
}

Matrix hcat(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows(), a.cols() + b.cols());
  if (a.cols() > 0) out.leftCols(a.cols()) = a;
  if (b.cols() > 0) out.rightCols(b.cols()) = b;
  return out;
}

// tau-eigenbasis of the middle harmonics, Precondition when unbalanced.
std::pair<Matrix, Matrix> middle_tau_split(const HodgePackage& h,
                                           const BoundarySplit& b) {
  require(b.oddFilling, ErrorKind::InvalidInput,
          "middle_tau_split: even fillings have no middle harmonics");
  Matrix tmid = b.midBasis.adjoint() * h.tau * b.midBasis;
  Eigen::SelfAdjointEigenSolver<Matrix> es(tmid);
  Matrix plus(tmid.rows(), 0), minus(tmid.rows(), 0);
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    double ev = es.eigenvalues()(i);
    require(std::abs(std::abs(ev) - 1.0) < 1e-8, ErrorKind::InvalidInput,
            "middle_tau_split: tau is not involutive on the middle");
    Matrix col = es.eigenvectors().col(i);
    if (ev > 0) {
      plus.conservativeResize(Eigen::NoChange, plus.cols() + 1);
      plus.col(plus.cols() - 1) = col;
    } else {
      minus.conservativeResize(Eigen::NoChange, minus.cols() + 1);
      minus.col(minus.cols() - 1) = col;
    }
  }
  require(plus.cols() == minus.cols(), ErrorKind::Precondition,
          "no Lagrangian: middle chirality is unbalanced");
  return {plus, minus};
}

}  // namespace

Matrix HodgePackage::gamma() const {
  Matrix g = Matrix::Zero(total(), total());
  for (Eigen::Index i = 0; i < total(); ++i)
    g(i, i) = degreeOf[i] % 2 == 0 ? 1.0 : -1.0;
  return g;
}

Matrix HodgePackage::laplacian() const {
  Matrix s = dsign();
  return s * s;
}

Matrix HodgePackage::dsign() const { return d + d.adjoint(); }

Matrix HodgePackage::dbd() const { return d * tau + tau * d; }

void check_package(const HodgePackage& h, double tol) {
  const Eigen::Index n = h.d.rows();
  require(h.dim >= 0, ErrorKind::InvalidInput, "check_package: negative dim");
  require(h.d.cols() == n && h.tau.rows() == n && h.tau.cols() == n,
          ErrorKind::InvalidInput, "check_package: non-square data");
  require(static_cast<Eigen::Index>(h.degreeOf.size()) == n,
          ErrorKind::InvalidInput, "check_package: degree labels mismatch");
  for (int p : h.degreeOf)
    require(p >= 0 && p <= h.dim, ErrorKind::InvalidInput,
            "check_package: degree label out of range");
  if (n == 0) return;

  double dn = std::max(1.0, h.d.norm());
  require((h.d * h.d).norm() <= tol * dn * dn, ErrorKind::InvalidInput,
          "check_package: d^2 != 0");

  double shift = 0.0, duality = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      if (h.degreeOf[i] != h.degreeOf[j] + 1)
        shift = std::max(shift, std::abs(h.d(i, j)));
      if (h.degreeOf[i] != h.dim - h.degreeOf[j])
        duality = std::max(duality, std::abs(h.tau(i, j)));
    }
  require(shift <= tol, ErrorKind::InvalidInput,
          "check_package: d does not raise degree by one");
  require(duality <= tol, ErrorKind::InvalidInput,
          "check_package: tau does not map degree p to n - p");

  require(residual(h.tau, h.tau.adjoint()) <= tol, ErrorKind::InvalidInput,
          "check_package: tau is not selfadjoint");
  require(residual(h.tau * h.tau, eye(n)) <= tol, ErrorKind::InvalidInput,
          "check_package: tau is not an involution");

  double sign = h.dim % 2 == 0 ? -1.0 : 1.0;
  require(residual(h.tau * h.d * h.tau, sign * h.d.adjoint()) <= tol,
          ErrorKind::InvalidInput,
          "check_package: tau d tau != (-1)^{n+1} d*");
}

Matrix degree_projector(const HodgePackage& h, int p) {
  Matrix out = Matrix::Zero(h.total(), h.total());
  for (Eigen::Index i = 0; i < h.total(); ++i)
    if (h.degreeOf[i] == p) out(i, i) = 1.0;
  return out;
}

Matrix degree_basis(const HodgePackage& h, int p) {
  Eigen::Index count = 0;
  for (int q : h.degreeOf) count += q == p;
  Matrix out = Matrix::Zero(h.total(), count);
  Eigen::Index c = 0;
  for (Eigen::Index i = 0; i < h.total(); ++i)
    if (h.degreeOf[i] == p) out(i, c++) = 1.0;
  return out;
}

Matrix harmonic_basis(const HodgePackage& h, double tol) {
  if (h.total() == 0) return Matrix::Zero(0, 0);
  Eigen::SelfAdjointEigenSolver<Matrix> es(h.laplacian());
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    double ev = es.eigenvalues()(i);
    require(ev <= tol / 10 || ev >= tol * 10, ErrorKind::RankAmbiguity,
            "harmonic_basis: eigenvalue too close to the kernel cut");
  }
  Eigen::Index k = 0;
  while (k < es.eigenvalues().size() && es.eigenvalues()(k) <= tol) ++k;
  return es.eigenvectors().leftCols(k);
}

Matrix harmonic_basis(const HodgePackage& h, int p, double tol) {
  Matrix b = degree_basis(h, p);
  if (b.cols() == 0) return b;
  Matrix lap = b.adjoint() * h.laplacian() * b;
  Eigen::SelfAdjointEigenSolver<Matrix> es(lap);
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    double ev = es.eigenvalues()(i);
    require(ev <= tol / 10 || ev >= tol * 10, ErrorKind::RankAmbiguity,
            "harmonic_basis: eigenvalue too close to the kernel cut");
  }
  Eigen::Index k = 0;
  while (k < es.eigenvalues().size() && es.eigenvalues()(k) <= tol) ++k;
  return b * es.eigenvectors().leftCols(k);
}

HodgePackage signed_points_package(Eigen::Index p, Eigen::Index q,
                                   Eigen::Index fiber) {
  require(p >= 0 && q >= 0 && fiber >= 1, ErrorKind::InvalidInput,
          "signed_points_package: negative counts");
  Eigen::Index n = (p + q) * fiber;
  HodgePackage h;
  h.dim = 0;
  h.degreeOf.assign(n, 0);
  h.d = Matrix::Zero(n, n);
  h.tau = Matrix::Identity(n, n);
  h.tau.bottomRightCorner(q * fiber, q * fiber) *= -1.0;
  check_package(h);
  return h;
}

HodgePackage package_1d(const Transport1D& t) {
  const CellComplex& x = t.space;
  check_complex(x);
  require(x.dim == 1, ErrorKind::InvalidInput,
          "package_1d: complex is not 1-dimensional");
  const Eigen::Index nv = x.counts[0], ne = x.counts[1];
  require(nv == ne, ErrorKind::NoDualStructure,
          "package_1d: chirality needs matching vertex and edge counts");
  require(ne >= 1, ErrorKind::InvalidInput, "package_1d: empty complex");
  require(static_cast<Eigen::Index>(t.edgeMove.size()) == ne,
          ErrorKind::InvalidInput, "package_1d: one transport per edge");
  const Eigen::Index f = t.edgeMove[0].rows();
  for (const Matrix& m : t.edgeMove) {
    require(m.rows() == f && m.cols() == f, ErrorKind::InvalidInput,
            "package_1d: transport fiber sizes differ");
    require(residual(m.adjoint() * m, eye(f)) <= kStructTol,
            ErrorKind::InvalidInput, "package_1d: transport is not unitary");
  }

  std::vector<Eigen::Index> head(ne, -1), tail(ne, -1);
  for (Eigen::Index e = 0; e < ne; ++e) {
    for (SparseL::InnerIterator it(x.boundary[1], e); it; ++it) {
      if (it.value() == 1 && head[e] < 0)
        head[e] = it.row();
      else if (it.value() == -1 && tail[e] < 0)
        tail[e] = it.row();
      else
        fail(ErrorKind::InvalidInput,
             "package_1d: edge boundary is not head - tail");
    }
    require(head[e] >= 0 && tail[e] >= 0, ErrorKind::InvalidInput,
            "package_1d: edge without distinct head and tail");
  }

  // (d a)(e) = T_e a(head) - a(tail), written in the tail frame.
  Matrix dblock = Matrix::Zero(ne * f, nv * f);
  for (Eigen::Index e = 0; e < ne; ++e) {
    dblock.block(e * f, head[e] * f, f, f) += t.edgeMove[e];
    dblock.block(e * f, tail[e] * f, f, f) -= eye(f);
  }

  Eigen::JacobiSVD<Matrix> svd(dblock, Eigen::ComputeFullU | Eigen::ComputeFullV);
  check_rank_band(svd.singularValues(), kRankCut, "package_1d");
  Eigen::Index r = 0;
  while (r < svd.singularValues().size() && svd.singularValues()(r) > kRankCut)
    ++r;
  Matrix w = svd.matrixU().leftCols(r) * svd.matrixV().leftCols(r).adjoint();

  const Eigen::Index hdim = nv * f - r;
  if (hdim > 0) {
    // Duality pairing of harmonic edge against harmonic vertex cochains:
    // the vertex value is transported to the edge midpoint and weighted by
    // the fundamental-class orientation sign.
    Matrix k0 = svd.matrixV().rightCols(hdim);
    Matrix k1 = svd.matrixU().rightCols(hdim);
    RealVector fund = fundamental_class(x);
    Matrix pair = Matrix::Zero(ne * f, nv * f);
    for (Eigen::Index e = 0; e < ne; ++e) {
      pair.block(e * f, tail[e] * f, f, f) += 0.5 * fund(e) * eye(f);
      pair.block(e * f, head[e] * f, f, f) += 0.5 * fund(e) * t.edgeMove[e];
    }
    Matrix g = k1.adjoint() * pair * k0;
    Eigen::JacobiSVD<Matrix> gsvd(g, Eigen::ComputeFullU | Eigen::ComputeFullV);
    require(gsvd.singularValues()(hdim - 1) > kRankCut,
            ErrorKind::NoDualStructure,
            "package_1d: degenerate harmonic duality pairing");
    w += k1 * gsvd.matrixU() * gsvd.matrixV().adjoint() * k0.adjoint();
  }

  HodgePackage h;
  h.dim = 1;
  h.degreeOf.assign(2 * nv * f, 0);
  std::fill(h.degreeOf.begin() + nv * f, h.degreeOf.end(), 1);
  h.d = Matrix::Zero(2 * nv * f, 2 * nv * f);
  h.d.bottomLeftCorner(ne * f, nv * f) = dblock;
  h.tau = Matrix::Zero(2 * nv * f, 2 * nv * f);
  h.tau.bottomLeftCorner(ne * f, nv * f) = w;
  h.tau.topRightCorner(nv * f, ne * f) = w.adjoint();
  check_package(h);
  return h;
}

namespace {

CellComplex cyclic_circle(int cells) {
  require(cells >= 2, ErrorKind::InvalidInput,
          "cyclic_circle: need at least two cells");
  CellComplex c;
  c.dim = 1;
  c.counts = {cells, cells};
  c.boundary.resize(2);
  c.boundary[0] = SparseL(0, cells);
  c.boundary[1] = SparseL(cells, cells);
  std::vector<Eigen::Triplet<long>> trip;
  for (int a = 0; a < cells; ++a) {
    trip.emplace_back((a + 1) % cells, a, 1);
    trip.emplace_back(a, a, -1);
  }
  c.boundary[1].setFromTriplets(trip.begin(), trip.end());
  c.onBoundary = {std::vector<char>(cells, 0), std::vector<char>(cells, 0)};
  check_complex(c);
  return c;
}

}  // namespace

HodgePackage circle_package(int cells, double flux, Eigen::Index fiber) {
  require(fiber >= 1, ErrorKind::InvalidInput, "circle_package: empty fiber");
  Transport1D t;
  t.space = cyclic_circle(cells);
  Complex phase = std::exp(Complex(0, 2.0 * M_PI * flux / cells));
  t.edgeMove.assign(cells, phase * eye(fiber));
  return package_1d(t);
}

HodgePackage holonomy_circle_package(int cells, const Matrix& holonomy) {
  require(holonomy.rows() == holonomy.cols() && holonomy.rows() >= 1,
          ErrorKind::InvalidInput,
          "holonomy_circle_package: holonomy must be square");
  Transport1D t;
  t.space = cyclic_circle(cells);
  t.edgeMove.assign(cells, eye(holonomy.rows()));
  t.edgeMove[cells - 1] = holonomy;
  return package_1d(t);
}

HodgePackage isotypic_circle_package(const CellComplex& circle,
                                     const std::vector<int>& edgeLabel,
                                     const FiniteGroup& g,
                                     const CharacterTable& ct, int irrep) {
  require(circle.dim == 1, ErrorKind::InvalidInput,
          "isotypic_circle_package: base is not 1-dimensional");
  CoverComplex cover = cover_complex(circle, edgeLabel, g);
  Transport1D t;
  t.space = cover.space;
  t.edgeMove.assign(cover.space.counts[1], eye(1));
  HodgePackage big = package_1d(t);

  std::vector<Matrix> bases(2);
  for (int k = 0; k < 2; ++k) {
    Matrix p = isotypic_projector(g, ct, irrep, deck_action(cover, g, k));
    bases[k] = projector_range(p, "isotypic_circle_package");
  }
  const Eigen::Index nv = cover.space.counts[0];
  Matrix embed =
      Matrix::Zero(big.total(), bases[0].cols() + bases[1].cols());
  embed.topLeftCorner(nv, bases[0].cols()) = bases[0];
  embed.bottomRightCorner(nv, bases[1].cols()) = bases[1];
  return restrict_package(big, embed);
}

HodgePackage product_package(const HodgePackage& a, const HodgePackage& b) {
  HodgePackage h;
  h.dim = a.dim + b.dim;
  h.degreeOf.resize(a.total() * b.total());
  for (Eigen::Index i = 0; i < a.total(); ++i)
    for (Eigen::Index j = 0; j < b.total(); ++j)
      h.degreeOf[i * b.total() + j] = a.degreeOf[i] + b.degreeOf[j];
  h.d = kron(a.d, eye(b.total())) + kron(a.gamma(), b.d);
  bool oddA = a.dim % 2 != 0, oddB = b.dim % 2 != 0;
  if (!oddB)
    h.tau = kron(a.tau, b.tau);
  else if (!oddA)
    h.tau = kron(a.gamma() * a.tau, b.tau);
  else
    h.tau = Complex(0, -1) * kron(a.tau * a.gamma(), b.tau);
  check_package(h);
  return h;
}

HodgePackage restrict_package(const HodgePackage& h, const Matrix& basis,
                              double tol) {
  require(basis.rows() == h.total(), ErrorKind::InvalidInput,
          "restrict_package: basis lives in the wrong space");
  const Eigen::Index k = basis.cols();
  require(residual(basis.adjoint() * basis, eye(k)) <= tol,
          ErrorKind::InvalidInput, "restrict_package: basis not orthonormal");

  HodgePackage out;
  out.dim = h.dim;
  out.degreeOf.resize(k);
  for (Eigen::Index c = 0; c < k; ++c) {
    int best = 0;
    double mass = -1.0, off = 0.0;
    for (int p = 0; p <= h.dim; ++p) {
      double mp = (degree_projector(h, p) * basis.col(c)).norm();
      if (mp > mass) mass = mp, best = p;
    }
    for (int p = 0; p <= h.dim; ++p)
      if (p != best)
        off = std::hypot(off, (degree_projector(h, p) * basis.col(c)).norm());
    require(off <= tol, ErrorKind::InvalidInput,
            "restrict_package: basis column mixes degrees");
    out.degreeOf[c] = best;
  }

  Matrix proj = eye(h.total()) - basis * basis.adjoint();
  require(opnorm(proj * h.d * basis) <= tol * std::max(1.0, opnorm(h.d)),
          ErrorKind::InvalidInput,
          "restrict_package: subspace is not d-invariant");
  require(opnorm(proj * h.tau * basis) <= tol, ErrorKind::InvalidInput,
          "restrict_package: subspace is not tau-invariant");

  out.d = basis.adjoint() * h.d * basis;
  out.tau = basis.adjoint() * h.tau * basis;
  check_package(out, std::max(tol, kStructTol));
  return out;
}

BoundarySplit boundary_split(const HodgePackage& h) {
  check_package(h);
  BoundarySplit b;
  b.oddFilling = h.dim % 2 == 0;
  b.m = b.oddFilling ? h.dim / 2 : (h.dim + 1) / 2;

  Matrix dstar = h.dStar();
  auto piece = [&](const Matrix& op, int p) {
    return range_basis(op * degree_basis(h, p));
  };

  std::vector<Matrix> vparts;
  vparts.push_back(piece(dstar, b.m));      // d* Omega^m in degree m-1
  vparts.push_back(piece(h.d, b.m - 1));    // d Omega^{m-1} in degree m
  if (b.oddFilling) {
    vparts.push_back(piece(dstar, b.m + 1));  // d* Omega^{m+1} in degree m
    vparts.push_back(piece(h.d, b.m));        // d Omega^m in degree m+1
  }
  b.vBasis = Matrix::Zero(h.total(), 0);
  for (const Matrix& v : vparts) b.vBasis = hcat(b.vBasis, v);
  const Eigen::Index vcols = b.vBasis.cols();
  require(residual(b.vBasis.adjoint() * b.vBasis, eye(vcols)) <= kConjTol,
          ErrorKind::InvalidInput,
          "boundary_split: exact and coexact parts overlap");

  b.lowBasis = Matrix::Zero(h.total(), 0);
  b.midBasis = Matrix::Zero(h.total(), 0);
  b.highBasis = Matrix::Zero(h.total(), 0);
  for (int p = 0; p <= h.dim; ++p) {
    Matrix vp = Matrix::Zero(h.total(), 0);
    for (const Matrix& v : vparts)
      // each V piece lives in a single degree; collect those at degree p
      if (v.cols() > 0 && (degree_projector(h, p) * v).norm() > 0.5 * v.norm())
        vp = hcat(vp, v);
    Matrix wp = complement_within(degree_basis(h, p), vp);
    Matrix* dst = &b.highBasis;
    if (p <= b.m - 1)
      dst = &b.lowBasis;
    else if (b.oddFilling && p == b.m)
      dst = &b.midBasis;
    *dst = hcat(*dst, wp);
  }
  b.wBasis = hcat(hcat(b.lowBasis, b.midBasis), b.highBasis);

  Matrix op = b.oddFilling ? h.dsign() : h.dbd();
  if (vcols > 0) {
    Matrix offV = (eye(h.total()) - b.vBasis * b.vBasis.adjoint()) * op *
                  b.vBasis;
    require(opnorm(offV) <= kConjTol * std::max(1.0, opnorm(op)),
            ErrorKind::InvalidInput,
            "boundary_split: operator does not preserve the exact-coexact part");
    Eigen::JacobiSVD<Matrix> svd(b.vBasis.adjoint() * op * b.vBasis);
    b.gapV = svd.singularValues()(vcols - 1);
    require(b.gapV > kRankCut, ErrorKind::GapFailure,
            "boundary_split: operator is not invertible on the exact-coexact "
            "part");
  } else {
    b.gapV = std::numeric_limits<double>::infinity();
  }
  return b;
}

Matrix alpha_involution(const BoundarySplit& b) {
  require(!b.oddFilling, ErrorKind::InvalidInput,
          "alpha_involution: odd filling needs a Lagrangian for the middle");
  return b.lowBasis * b.lowBasis.adjoint() -
         b.highBasis * b.highBasis.adjoint();
}

LagrangianData lagrangian_from_unitary(const HodgePackage& h,
                                       const BoundarySplit& b,
                                       const Matrix& u) {
  auto [plus, minus] = middle_tau_split(h, b);
  require(u.rows() == plus.cols() && u.cols() == plus.cols(),
          ErrorKind::InvalidInput,
          "lagrangian_from_unitary: matching size mismatch");
  require(residual(u.adjoint() * u, eye(u.rows())) <= kStructTol,
          ErrorKind::InvalidInput,
          "lagrangian_from_unitary: matching is not unitary");
  double s = 1.0 / std::sqrt(2.0);
  LagrangianData l;
  l.basis = b.midBasis * (s * (plus * u + minus));
  l.complement = b.midBasis * (s * (plus * u - minus));
  return l;
}

LagrangianData canonical_lagrangian(const HodgePackage& h,
                                    const BoundarySplit& b) {
  auto [plus, minus] = middle_tau_split(h, b);
  (void)minus;
  return lagrangian_from_unitary(h, b, eye(plus.cols()));
}

double lagrangian_residual(const HodgePackage& h, const BoundarySplit& b,
                           const LagrangianData& l) {
  Eigen::Index k = l.basis.cols();
  double r = opnorm(l.basis.adjoint() * l.basis - eye(k));
  r = std::max(r, opnorm(l.basis.adjoint() * h.tau * l.basis));
  r = std::max(r, opnorm(l.complement.adjoint() * l.complement - eye(k)));
  r = std::max(r, opnorm(l.basis.adjoint() * l.complement));
  Matrix pmid = b.midBasis * b.midBasis.adjoint();
  r = std::max(r, opnorm(l.basis * l.basis.adjoint() +
                         l.complement * l.complement.adjoint() - pmid));
  return r;
}

Matrix alpha_involution(const BoundarySplit& b, const LagrangianData& l) {
  require(b.oddFilling, ErrorKind::InvalidInput,
          "alpha_involution: Lagrangian given but there is no middle");
  return b.lowBasis * b.lowBasis.adjoint() + l.basis * l.basis.adjoint() -
         b.highBasis * b.highBasis.adjoint() -
         l.complement * l.complement.adjoint();
}

long closed_package_signature(const HodgePackage& h, double tol) {
  check_package(h);
  if (h.dim % 2 != 0) return 0;
  Matrix mid = harmonic_basis(h, h.dim / 2, tol);
  if (mid.cols() == 0) return 0;
  return form_signature(mid.adjoint() * h.tau * mid, tol);
}

}  // namespace apslab
