#include "apslab/scomplex.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <queue>

namespace apslab {

namespace {

using TripletL = Eigen::Triplet<long>;

bool sparse_is_zero(const SparseL& m) {
  for (int k = 0; k < m.outerSize(); ++k)
    for (SparseL::InnerIterator it(m, k); it; ++it)
      if (it.value() != 0) return false;
  return true;
}

}  // namespace

void check_complex(const CellComplex& x) {
  require(x.dim >= 0, ErrorKind::InvalidInput, "complex: negative dimension");
  require(static_cast<int>(x.counts.size()) == x.dim + 1 &&
              static_cast<int>(x.boundary.size()) == x.dim + 1,
          ErrorKind::InvalidInput, "complex: per-dimension arrays mismatch");
  require(x.counts[0] >= 1, ErrorKind::InvalidInput, "complex: no vertices");
  for (int k = 1; k <= x.dim; ++k)
    require(x.boundary[k].rows() == x.counts[k - 1] &&
                x.boundary[k].cols() == x.counts[k],
            ErrorKind::InvalidInput, "complex: boundary shape mismatch");
  for (int k = 2; k <= x.dim; ++k)
    require(sparse_is_zero(x.boundary[k - 1] * x.boundary[k]),
            ErrorKind::InvalidInput, "complex: dd != 0");
  if (x.markers())
    for (int k = 0; k <= x.dim; ++k)
      require(static_cast<Eigen::Index>(x.onBoundary[k].size()) == x.counts[k],
              ErrorKind::InvalidInput, "complex: marker size mismatch");
}

CellComplex simplicial_complex(int dim,
                               const std::vector<std::vector<int>>& facets) {
  require(dim >= 0, ErrorKind::InvalidInput, "simplicial_complex: dim >= 0");
  require(!facets.empty(), ErrorKind::InvalidInput,
          "simplicial_complex: empty facet list");

  std::vector<std::vector<std::vector<int>>> cells(dim + 1);
  for (std::vector<int> f : facets) {
    require(static_cast<int>(f.size()) == dim + 1, ErrorKind::InvalidInput,
            "simplicial_complex: facet size != dim + 1");
    std::sort(f.begin(), f.end());
    for (size_t i = 0; i < f.size(); ++i) {
      require(f[i] >= 0, ErrorKind::InvalidInput,
              "simplicial_complex: negative vertex id");
      require(i == 0 || f[i] != f[i - 1], ErrorKind::InvalidInput,
              "simplicial_complex: repeated vertex in facet");
    }
    for (unsigned mask = 1; mask < (1u << f.size()); ++mask) {
      std::vector<int> face;
      for (size_t i = 0; i < f.size(); ++i)
        if (mask & (1u << i)) face.push_back(f[i]);
      cells[face.size() - 1].push_back(std::move(face));
    }
  }
  for (auto& level : cells) {
    std::sort(level.begin(), level.end());
    level.erase(std::unique(level.begin(), level.end()), level.end());
  }

  CellComplex x;
  x.dim = dim;
  x.counts.resize(dim + 1);
  for (int k = 0; k <= dim; ++k)
    x.counts[k] = static_cast<Eigen::Index>(cells[k].size());
  x.boundary.resize(dim + 1);
  x.boundary[0] = SparseL(0, x.counts[0]);
  for (int k = 1; k <= dim; ++k) {
    std::vector<TripletL> trip;
    for (Eigen::Index i = 0; i < x.counts[k]; ++i) {
      const auto& w = cells[k][i];
      std::vector<int> face(w.size() - 1);
      for (size_t d = 0; d < w.size(); ++d) {
        for (size_t j = 0, t = 0; j < w.size(); ++j)
          if (j != d) face[t++] = w[j];
        auto it = std::lower_bound(cells[k - 1].begin(), cells[k - 1].end(), face);
        trip.emplace_back(it - cells[k - 1].begin(), i, d % 2 == 0 ? 1 : -1);
      }
    }
    x.boundary[k] = SparseL(x.counts[k - 1], x.counts[k]);
    x.boundary[k].setFromTriplets(trip.begin(), trip.end());
  }
  x.verts = std::move(cells);

  // boundary subcomplex from ridge-facet incidence, when pseudomanifold-like
  if (dim == 0) {
    x.onBoundary.assign(1, std::vector<char>(x.counts[0], 0));
    return x;
  }
  std::vector<int> incident(x.counts[dim - 1], 0);
  for (Eigen::Index c = 0; c < x.counts[dim]; ++c)
    for (SparseL::InnerIterator it(x.boundary[dim], c); it; ++it)
      ++incident[it.row()];
  if (*std::max_element(incident.begin(), incident.end()) > 2) return x;
  x.onBoundary.resize(dim + 1);
  for (int k = 0; k <= dim; ++k) x.onBoundary[k].assign(x.counts[k], 0);
  for (Eigen::Index r = 0; r < x.counts[dim - 1]; ++r)
    if (incident[r] == 1) x.onBoundary[dim - 1][r] = 1;
  for (int k = dim - 1; k >= 1; --k)
    for (Eigen::Index c = 0; c < x.counts[k]; ++c)
      if (x.onBoundary[k][c])
        for (SparseL::InnerIterator it(x.boundary[k], c); it; ++it)
          x.onBoundary[k - 1][it.row()] = 1;
  return x;
}

Eigen::Index simplex_index(const CellComplex& x, std::vector<int> v) {
  require(x.simplicial(), ErrorKind::InvalidInput,
          "simplex_index: not a simplicial complex");
  std::sort(v.begin(), v.end());
  int k = static_cast<int>(v.size()) - 1;
  if (k < 0 || k > x.dim) return -1;
  auto it = std::lower_bound(x.verts[k].begin(), x.verts[k].end(), v);
  if (it == x.verts[k].end() || *it != v) return -1;
  return it - x.verts[k].begin();
}

long euler_characteristic(const CellComplex& x) {
  long chi = 0;
  for (int k = 0; k <= x.dim; ++k)
    chi += (k % 2 == 0 ? 1 : -1) * static_cast<long>(x.counts[k]);
  return chi;
}

RealVector fundamental_class(const CellComplex& x) {
  require(x.markers(), ErrorKind::Unsupported,
          "fundamental_class: ridge incidence is not pseudomanifold-like");
  if (x.dim == 0) return RealVector::Ones(x.counts[0]);

  const Eigen::Index nf = x.counts[x.dim];
  std::vector<std::vector<std::pair<Eigen::Index, long>>> ridge(
      x.counts[x.dim - 1]);
  for (Eigen::Index c = 0; c < nf; ++c)
    for (SparseL::InnerIterator it(x.boundary[x.dim], c); it; ++it) {
      require(it.value() == 1 || it.value() == -1, ErrorKind::InvalidInput,
              "fundamental_class: non-unit top boundary coefficient");
      ridge[it.row()].push_back({c, it.value()});
    }

  std::vector<int> sign(nf, 0);
  std::vector<std::vector<Eigen::Index>> facetRidges(nf);
  for (Eigen::Index r = 0; r < x.counts[x.dim - 1]; ++r)
    for (const auto& e : ridge[r]) facetRidges[e.first].push_back(r);
  for (Eigen::Index seed = 0; seed < nf; ++seed) {
    if (sign[seed] != 0) continue;
    sign[seed] = 1;
    std::queue<Eigen::Index> bfs;
    bfs.push(seed);
    while (!bfs.empty()) {
      Eigen::Index f = bfs.front();
      bfs.pop();
      for (Eigen::Index r : facetRidges[f]) {
        if (ridge[r].size() != 2) continue;
        auto [f1, c1] = ridge[r][0];
        auto [f2, c2] = ridge[r][1];
        if (f2 == f) std::swap(f1, f2), std::swap(c1, c2);
        int want = -sign[f] * static_cast<int>(c1 * c2);
        if (sign[f2] == 0) {
          sign[f2] = want;
          bfs.push(f2);
        } else {
          require(sign[f2] == want, ErrorKind::NotOrientable,
                  "fundamental_class: orientation propagation contradicts");
        }
      }
    }
  }

  // the result is a cycle relative to the marked boundary, exactly
  std::vector<long> bd(x.counts[x.dim - 1], 0);
  for (Eigen::Index c = 0; c < nf; ++c)
    for (SparseL::InnerIterator it(x.boundary[x.dim], c); it; ++it)
      bd[it.row()] += it.value() * sign[c];
  for (Eigen::Index r = 0; r < x.counts[x.dim - 1]; ++r)
    require(bd[r] == 0 || x.onBoundary[x.dim - 1][r],
            ErrorKind::NotOrientable,
            "fundamental_class: boundary escapes the marked subcomplex");

  RealVector out(nf);
  for (Eigen::Index c = 0; c < nf; ++c) out(c) = sign[c];
  return out;
}

Vector apply_coboundary(const CellComplex& x, int k, const Vector& a) {
  require(k >= 0 && k <= x.dim, ErrorKind::InvalidInput,
          "apply_coboundary: degree out of range");
  require(a.size() == x.counts[k], ErrorKind::InvalidInput,
          "apply_coboundary: cochain size mismatch");
  if (k == x.dim) return Vector::Zero(0);
  Vector out = Vector::Zero(x.counts[k + 1]);
  for (Eigen::Index c = 0; c < x.counts[k + 1]; ++c)
    for (SparseL::InnerIterator it(x.boundary[k + 1], c); it; ++it)
      out(c) += static_cast<double>(it.value()) * a(it.row());
  return out;
}

Matrix coboundary(const CellComplex& x, int k) {
  require(k >= 0 && k < x.dim, ErrorKind::InvalidInput,
          "coboundary: degree out of range");
  require(x.counts[k] * x.counts[k + 1] <= 8'000'000, ErrorKind::Unsupported,
          "coboundary: too large for a dense matrix, use apply_coboundary");
  Matrix d = Matrix::Zero(x.counts[k + 1], x.counts[k]);
  for (Eigen::Index c = 0; c < x.counts[k + 1]; ++c)
    for (SparseL::InnerIterator it(x.boundary[k + 1], c); it; ++it)
      d(c, it.row()) = static_cast<double>(it.value());
  return d;
}

Matrix cohomology_basis(const CellComplex& x, int k, double tol) {
  require(k >= 0 && k <= x.dim, ErrorKind::InvalidInput,
          "cohomology_basis: degree out of range");
  require(x.counts[k] <= 3000, ErrorKind::Unsupported,
          "cohomology_basis: cochain space too large for dense solve");
  Matrix lap = Matrix::Zero(x.counts[k], x.counts[k]);
  if (k < x.dim) {
    Matrix d = coboundary(x, k);
    lap += d.adjoint() * d;
  }
  if (k > 0) {
    Matrix d = coboundary(x, k - 1);
    lap += d * d.adjoint();
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(lap);
  double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  double theta = tol * scale;
  Eigen::Index h = 0;
  for (Eigen::Index i = 0; i < lap.rows(); ++i) {
    double lam = es.eigenvalues()(i);
    require(lam < theta || lam > 100 * theta, ErrorKind::RankAmbiguity,
            "cohomology_basis: Laplacian eigenvalue too close to threshold");
    if (lam < theta) ++h;
  }
  return es.eigenvectors().leftCols(h);
}

Vector cup_cochain(const CellComplex& x, int p, const Vector& a, int q,
                   const Vector& b) {
  require(x.simplicial(), ErrorKind::InvalidInput,
          "cup_cochain: needs an ordered simplicial complex");
  require(p >= 0 && q >= 0 && p + q <= x.dim, ErrorKind::InvalidInput,
          "cup_cochain: degrees out of range");
  require(a.size() == x.counts[p] && b.size() == x.counts[q],
          ErrorKind::InvalidInput, "cup_cochain: cochain size mismatch");
  Vector out = Vector::Zero(x.counts[p + q]);
  for (Eigen::Index i = 0; i < x.counts[p + q]; ++i) {
    const auto& w = x.verts[p + q][i];
    std::vector<int> front(w.begin(), w.begin() + p + 1);
    std::vector<int> back(w.begin() + p, w.end());
    out(i) = a(simplex_index(x, front)) * b(simplex_index(x, back));
  }
  return out;
}

Complex cup_pair(const CellComplex& x, int p, const Vector& a, const Vector& b,
                 const RealVector& fund) {
  require(fund.size() == x.counts[x.dim], ErrorKind::InvalidInput,
          "cup_pair: fundamental class size mismatch");
  Vector c = cup_cochain(x, p, a, x.dim - p, b);
  Complex out = 0;
  for (Eigen::Index i = 0; i < c.size(); ++i) out += fund(i) * c(i);
  return out;
}

namespace {

// thresholded rank with an ambiguity band around the cut
Eigen::Index checked_rank(const RealVector& sv, double tol, const char* what) {
  if (sv.size() == 0) return 0;
  double theta = tol * std::max(1.0, sv(0));
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    require(sv(i) < theta / 10 || sv(i) > 10 * theta, ErrorKind::RankAmbiguity,
            std::string(what) + ": singular value too close to the threshold");
    if (sv(i) > theta) ++r;
  }
  return r;
}

bool is_closed(const CellComplex& x) {
  if (!x.markers()) return false;
  for (int k = 0; k <= x.dim; ++k)
    for (char m : x.onBoundary[k])
      if (m) return false;
  return true;
}

}  // namespace

Matrix intersection_form_untwisted(const CellComplex& x, double tol) {
  require(x.simplicial(), ErrorKind::InvalidInput,
          "intersection_form: needs a simplicial complex");
  require(x.dim > 0 && x.dim % 2 == 0, ErrorKind::InvalidInput,
          "intersection_form: even positive dimension required");
  const int m = x.dim / 2;
  RealVector fund = fundamental_class(x);
  Matrix h = cohomology_basis(x, m, tol);

  Matrix reps;
  if (is_closed(x)) {
    reps = h;
  } else {
    // compactly supported classes: cocycles vanishing on the boundary cells,
    // ranked by their images among the absolute harmonics
    std::vector<Eigen::Index> interior;
    for (Eigen::Index c = 0; c < x.counts[m]; ++c)
      if (!x.onBoundary[m][c]) interior.push_back(c);
    if (interior.empty() || h.cols() == 0) return Matrix(0, 0);
    Matrix d = coboundary(x, m);
    Matrix dInt(d.rows(), interior.size());
    for (size_t j = 0; j < interior.size(); ++j)
      dInt.col(j) = d.col(interior[j]);
    Eigen::JacobiSVD<Matrix> svd(dInt, Eigen::ComputeFullV);
    Eigen::Index rk = checked_rank(svd.singularValues(), tol,
                                   "intersection_form relative rank");
    Eigen::Index null = dInt.cols() - rk;
    if (null == 0) return Matrix(0, 0);
    Matrix z = Matrix::Zero(x.counts[m], null);
    for (size_t j = 0; j < interior.size(); ++j)
      z.row(interior[j]) = svd.matrixV().rightCols(null).row(j);
    Matrix coords = h.adjoint() * z;
    Eigen::JacobiSVD<Matrix> im(coords, Eigen::ComputeFullV);
    Eigen::Index r = checked_rank(im.singularValues(), tol,
                                  "intersection_form image rank");
    reps = z * im.matrixV().leftCols(r);
  }

  // sesquilinear in the first slot so basis phases cancel
  Matrix f(reps.cols(), reps.cols());
  for (Eigen::Index i = 0; i < reps.cols(); ++i)
    for (Eigen::Index j = 0; j < reps.cols(); ++j)
      f(i, j) = cup_pair(x, m, reps.col(i).conjugate(), reps.col(j), fund);
  if (m % 2 == 1) f *= Complex(0, 1);
  if (f.rows() > 0)
    require(residual(f, f.adjoint().eval()) < 1e-10, ErrorKind::Precondition,
            "intersection_form: pairing failed to be hermitian");
  return f;
}

long form_signature(const Matrix& f, double tol) {
  require(f.rows() == f.cols(), ErrorKind::InvalidInput,
          "form_signature: square matrix required");
  if (f.rows() == 0) return 0;
  require(is_selfadjoint(f, 1e-10), ErrorKind::InvalidInput,
          "form_signature: hermitian matrix required");
  Eigen::SelfAdjointEigenSolver<Matrix> es(f, Eigen::EigenvaluesOnly);
  double theta = tol * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  long sig = 0;
  for (Eigen::Index i = 0; i < f.rows(); ++i) {
    double lam = es.eigenvalues()(i);
    require(std::abs(lam) < theta / 10 || std::abs(lam) > 10 * theta,
            ErrorKind::RankAmbiguity,
            "form_signature: eigenvalue too close to the zero threshold");
    if (lam > theta) ++sig;
    if (lam < -theta) --sig;
  }
  return sig;
}

namespace {

// first product cell index of the (leftDim = p) block in dimension k
Eigen::Index block_offset(const CellComplex& x, const CellComplex& y, int k,
                          int p) {
  Eigen::Index off = 0;
  for (int pp = std::max(0, k - y.dim); pp < p; ++pp)
    if (pp <= x.dim) off += x.counts[pp] * y.counts[k - pp];
  return off;
}

}  // namespace

CellComplex product_complex(const CellComplex& x, const CellComplex& y) {
  check_complex(x);
  check_complex(y);
  CellComplex pr;
  pr.dim = x.dim + y.dim;
  pr.counts.assign(pr.dim + 1, 0);
  pr.pairs.resize(pr.dim + 1);
  for (int k = 0; k <= pr.dim; ++k) {
    for (int p = std::max(0, k - y.dim); p <= std::min(k, x.dim); ++p) {
      int q = k - p;
      for (Eigen::Index i = 0; i < x.counts[p]; ++i)
        for (Eigen::Index j = 0; j < y.counts[q]; ++j)
          pr.pairs[k].push_back({p, i, q, j});
    }
    pr.counts[k] = static_cast<Eigen::Index>(pr.pairs[k].size());
  }
  pr.boundary.resize(pr.dim + 1);
  pr.boundary[0] = SparseL(0, pr.counts[0]);
  for (int k = 1; k <= pr.dim; ++k) {
    std::vector<TripletL> trip;
    for (Eigen::Index c = 0; c < pr.counts[k]; ++c) {
      const ProductCell& pc = pr.pairs[k][c];
      if (pc.leftDim >= 1)
        for (SparseL::InnerIterator it(x.boundary[pc.leftDim], pc.left); it;
             ++it) {
          Eigen::Index t = block_offset(x, y, k - 1, pc.leftDim - 1) +
                           it.row() * y.counts[pc.rightDim] + pc.right;
          trip.emplace_back(t, c, it.value());
        }
      if (pc.rightDim >= 1) {
        long sgn = pc.leftDim % 2 == 0 ? 1 : -1;
        for (SparseL::InnerIterator it(y.boundary[pc.rightDim], pc.right); it;
             ++it) {
          Eigen::Index t = block_offset(x, y, k - 1, pc.leftDim) +
                           pc.left * y.counts[pc.rightDim - 1] + it.row();
          trip.emplace_back(t, c, sgn * it.value());
        }
      }
    }
    pr.boundary[k] = SparseL(pr.counts[k - 1], pr.counts[k]);
    pr.boundary[k].setFromTriplets(trip.begin(), trip.end());
  }
  if (x.markers() && y.markers()) {
    pr.onBoundary.resize(pr.dim + 1);
    for (int k = 0; k <= pr.dim; ++k) {
      pr.onBoundary[k].resize(pr.counts[k]);
      for (Eigen::Index c = 0; c < pr.counts[k]; ++c) {
        const ProductCell& pc = pr.pairs[k][c];
        pr.onBoundary[k][c] = x.onBoundary[pc.leftDim][pc.left] ||
                              y.onBoundary[pc.rightDim][pc.right];
      }
    }
  }
  return pr;
}

Vector cross_cochain(const CellComplex& pr, const CellComplex& x,
                     const CellComplex& y, int px, const Vector& a, int py,
                     const Vector& b) {
  require(pr.productCells(), ErrorKind::InvalidInput,
          "cross_cochain: needs a product complex");
  require(px >= 0 && px <= x.dim && py >= 0 && py <= y.dim,
          ErrorKind::InvalidInput, "cross_cochain: degrees out of range");
  require(a.size() == x.counts[px] && b.size() == y.counts[py],
          ErrorKind::InvalidInput, "cross_cochain: cochain size mismatch");
  const int k = px + py;
  Vector out = Vector::Zero(pr.counts[k]);
  Eigen::Index off = block_offset(x, y, k, px);
  for (Eigen::Index i = 0; i < x.counts[px]; ++i)
    for (Eigen::Index j = 0; j < y.counts[py]; ++j)
      out(off + i * y.counts[py] + j) = a(i) * b(j);
  return out;
}

RealVector product_fundamental_class(const CellComplex& pr, const RealVector& fx,
                                     const RealVector& fy) {
  require(pr.productCells(), ErrorKind::InvalidInput,
          "product_fundamental_class: needs a product complex");
  const Eigen::Index nt = pr.counts[pr.dim];
  require(nt == fx.size() * fy.size(), ErrorKind::InvalidInput,
          "product_fundamental_class: factor class sizes mismatch");
  for (Eigen::Index c = 0; c < nt; ++c) {
    const ProductCell& pc = pr.pairs[pr.dim][c];
    require(pc.left < fx.size() && pc.right < fy.size(),
            ErrorKind::InvalidInput,
            "product_fundamental_class: factor classes given in the wrong order");
  }
  RealVector out(nt);
  for (Eigen::Index c = 0; c < nt; ++c) {
    const ProductCell& pc = pr.pairs[pr.dim][c];
    out(c) = fx(pc.left) * fy(pc.right);
  }
  if (pr.dim >= 1) {
    std::vector<long> bd(pr.counts[pr.dim - 1], 0);
    for (Eigen::Index c = 0; c < nt; ++c)
      for (SparseL::InnerIterator it(pr.boundary[pr.dim], c); it; ++it)
        bd[it.row()] += it.value() * std::lround(out(c));
    for (Eigen::Index r = 0; r < pr.counts[pr.dim - 1]; ++r)
      require(bd[r] == 0 ||
                  (pr.markers() && pr.onBoundary[pr.dim - 1][r]),
              ErrorKind::InvalidInput,
              "product_fundamental_class: boundary escapes the marked cells");
  }
  return out;
}

Matrix product_intersection_form(const CellComplex& pr, const CellComplex& x,
                                 const CellComplex& y, double tol) {
  require(pr.productCells(), ErrorKind::InvalidInput,
          "product_intersection_form: needs a product complex");
  require(pr.dim >= 2 && pr.dim % 2 == 0, ErrorKind::InvalidInput,
          "product_intersection_form: even positive dimension required");
  require(is_closed(x) && is_closed(y), ErrorKind::InvalidInput,
          "product_intersection_form: closed factors required");
  const int m = pr.dim / 2;

  RealVector fx = fundamental_class(x);
  RealVector fy = fundamental_class(y);
  RealVector fp = product_fundamental_class(pr, fx, fy);

  struct Member {
    int pd, qd;
    Vector a, b;
  };
  std::vector<Member> basis;
  for (int pd = std::max(0, m - y.dim); pd <= std::min(m, x.dim); ++pd) {
    int qd = m - pd;
    Matrix hx = cohomology_basis(x, pd, tol);
    Matrix hy = cohomology_basis(y, qd, tol);
    for (Eigen::Index i = 0; i < hx.cols(); ++i)
      for (Eigen::Index j = 0; j < hy.cols(); ++j) {
        Member mem{pd, qd, hx.col(i), hy.col(j)};
        Vector v = cross_cochain(pr, x, y, pd, mem.a, qd, mem.b);
        require(apply_coboundary(pr, m, v).norm() < 1e-10 * std::max(1.0, v.norm()),
                ErrorKind::Precondition,
                "product_intersection_form: cross cochain is not a cocycle");
        basis.push_back(std::move(mem));
      }
  }

  const Eigen::Index n = static_cast<Eigen::Index>(basis.size());
  Matrix f = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const Member& u = basis[i];
      const Member& v = basis[j];
      if (u.pd + v.pd != x.dim || u.qd + v.qd != y.dim) continue;
      Vector cx = cup_cochain(x, u.pd, u.a.conjugate(), v.pd, v.a);
      Vector cy = cup_cochain(y, u.qd, u.b.conjugate(), v.qd, v.b);
      Vector w = cross_cochain(pr, x, y, x.dim, cx, y.dim, cy);
      Complex pairTotal = 0;
      for (Eigen::Index c = 0; c < w.size(); ++c) pairTotal += fp(c) * w(c);
      double sgn = (u.qd * v.pd) % 2 == 0 ? 1.0 : -1.0;
      f(i, j) = sgn * pairTotal;
    }
  if (m % 2 == 1) f *= Complex(0, 1);
  if (n > 0) {
    require(residual(f, f.adjoint().eval()) < 1e-10, ErrorKind::Precondition,
            "product_intersection_form: pairing failed to be hermitian");
    Eigen::SelfAdjointEigenSolver<Matrix> es(f, Eigen::EigenvaluesOnly);
    double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    require(es.eigenvalues().cwiseAbs().minCoeff() > tol * scale,
            ErrorKind::RankAmbiguity,
            "product_intersection_form: Kuenneth pairing is degenerate");
  }
  return f;
}

CoverComplex cover_complex(const CellComplex& x,
                           const std::vector<int>& edgeLabel,
                           const FiniteGroup& g) {
  require(x.simplicial(), ErrorKind::InvalidInput,
          "cover_complex: needs a simplicial complex");
  check_group(g);
  const Eigen::Index ne = x.dim >= 1 ? x.counts[1] : 0;
  require(static_cast<Eigen::Index>(edgeLabel.size()) == ne,
          ErrorKind::InvalidInput, "cover_complex: one label per edge");
  for (int h : edgeLabel)
    require(h >= 0 && h < g.order, ErrorKind::InvalidInput,
            "cover_complex: label out of range");
  auto lab = [&x, &edgeLabel](int u, int v) {
    Eigen::Index e = simplex_index(x, {u, v});
    require(e >= 0, ErrorKind::InvalidInput, "cover_complex: missing edge");
    return edgeLabel[e];
  };
  if (x.dim >= 2)
    for (const auto& t : x.verts[2])
      require(g.mul[lab(t[0], t[1])][lab(t[1], t[2])] == lab(t[0], t[2]),
              ErrorKind::InvalidInput,
              "cover_complex: transport labels are not flat");

  std::vector<std::vector<int>> lifted;
  for (const auto& f : x.verts[x.dim])
    for (int s = 0; s < g.order; ++s) {
      std::vector<int> lf(f.size());
      lf[0] = f[0] * g.order + s;
      for (size_t i = 1; i < f.size(); ++i)
        lf[i] = f[i] * g.order + g.mul[s][lab(f[0], f[i])];
      lifted.push_back(std::move(lf));
    }

  CoverComplex c;
  c.space = simplicial_complex(x.dim, lifted);
  for (int k = 0; k <= x.dim; ++k)
    require(c.space.counts[k] == x.counts[k] * g.order,
            ErrorKind::Precondition,
            "cover_complex: lifted cell counts do not multiply");

  c.deck.resize(g.order);
  for (int t = 0; t < g.order; ++t) {
    c.deck[t].resize(x.dim + 1);
    for (int k = 0; k <= x.dim; ++k) {
      c.deck[t][k].resize(c.space.counts[k]);
      for (Eigen::Index cell = 0; cell < c.space.counts[k]; ++cell) {
        std::vector<int> w = c.space.verts[k][cell];
        for (int& id : w) {
          int v = id / g.order, s = id % g.order;
          id = v * g.order + g.mul[t][s];
        }
        Eigen::Index img = simplex_index(c.space, w);
        require(img >= 0, ErrorKind::Precondition,
                "cover_complex: deck translation left the complex");
        c.deck[t][k][cell] = img;
      }
    }
  }
  return c;
}

std::vector<Matrix> deck_action(const CoverComplex& c, const FiniteGroup& g,
                                int k) {
  require(k >= 0 && k <= c.space.dim, ErrorKind::InvalidInput,
          "deck_action: degree out of range");
  require(static_cast<int>(c.deck.size()) == g.order, ErrorKind::InvalidInput,
          "deck_action: deck data does not match the group");
  std::vector<Matrix> act(g.order);
  const Eigen::Index n = c.space.counts[k];
  for (int t = 0; t < g.order; ++t) {
    act[t] = Matrix::Zero(n, n);
    for (Eigen::Index cell = 0; cell < n; ++cell)
      act[t](c.deck[t][k][cell], cell) = 1;
  }
  return act;
}

}  // namespace apslab
