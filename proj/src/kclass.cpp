#include "apslab/kclass.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace apslab {

bool operator==(const K0Class& a, const K0Class& b) { return a.comp == b.comp; }
bool operator==(const K1Class& a, const K1Class& b) { return a.comp == b.comp; }

static std::string comp_string(const std::vector<long>& v) {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  os << "]";
  return os.str();
}

std::string to_string(const K0Class& c) { return comp_string(c.comp); }
std::string to_string(const K1Class& c) { return comp_string(c.comp); }

Matrix OperatorFamily::value() const {
  require(baseDim == 0, ErrorKind::InvalidInput, "family is not constant");
  return at({});
}

Matrix OperatorFamily::value(double t) const {
  require(baseDim == 1, ErrorKind::InvalidInput, "family is not one-parameter");
  return at({t});
}

Matrix OperatorFamily::value(double s, double t) const {
  require(baseDim == 2, ErrorKind::InvalidInput, "family is not two-parameter");
  return at({s, t});
}

OperatorFamily constant_family(const Matrix& d) {
  require(d.rows() == d.cols(), ErrorKind::InvalidInput,
          "constant_family: square matrix required");
  OperatorFamily f;
  f.dim = d.rows();
  f.baseDim = 0;
  f.at = [d](const std::vector<double>&) { return d; };
  return f;
}

OperatorFamily loop_family(Eigen::Index dim, std::function<Matrix(double)> fn,
                           BaseWindow window) {
  require(window.t1 > window.t0, ErrorKind::InvalidInput,
          "loop_family: empty window");
  OperatorFamily f;
  f.dim = dim;
  f.baseDim = 1;
  f.windows = {window};
  f.at = [fn](const std::vector<double>& p) { return fn(p.at(0)); };
  return f;
}

OperatorFamily winding_family(int w, int modes, double delta, double radius) {
  require(modes >= std::abs(w) && modes >= 1, ErrorKind::InvalidInput,
          "winding_family: need at least |w| modes");
  require(radius > 0, ErrorKind::InvalidInput, "winding_family: radius > 0");
  Eigen::Index dim = 2 * modes + 1;
  auto fn = [w, modes, delta, radius, dim](double t) {
    Matrix m = Matrix::Zero(dim, dim);
    for (int k = -modes; k <= modes; ++k)
      m(k + modes, k + modes) = (k + delta + w * t / kTwoPi) / radius;
    return m;
  };
  return loop_family(dim, fn, BaseWindow{0.0, kTwoPi, false});
}

KasparovModule even_module(std::vector<Matrix> ops, std::vector<Matrix> gradings) {
  require(ops.size() == gradings.size(), ErrorKind::InvalidInput,
          "even_module: one grading per block");
  KasparovModule m;
  m.parity = Parity::Even;
  for (size_t i = 0; i < ops.size(); ++i)
    m.blocks.push_back({constant_family(ops[i]), gradings[i]});
  return m;
}

KasparovModule odd_module(std::vector<OperatorFamily> families) {
  KasparovModule m;
  m.parity = Parity::Odd;
  for (auto& f : families) m.blocks.push_back({std::move(f), Matrix()});
  return m;
}

static std::vector<double> window_midpoint(const OperatorFamily& f) {
  std::vector<double> p;
  for (auto& w : f.windows) p.push_back(0.5 * (w.t0 + w.t1));
  return p;
}

void check_module(const KasparovModule& m, double tol) {
  for (size_t i = 0; i < m.blocks.size(); ++i) {
    const auto& b = m.blocks[i];
    require(b.family.dim > 0 && static_cast<bool>(b.family.at),
            ErrorKind::InvalidInput, "module block has no operator family");
    require(static_cast<int>(b.family.windows.size()) == b.family.baseDim,
            ErrorKind::InvalidInput, "window count must match base dimension");
    Matrix v = b.family.at(window_midpoint(b.family));
    require(v.rows() == b.family.dim && v.cols() == b.family.dim,
            ErrorKind::InvalidInput, "family value has wrong shape");
    require(is_selfadjoint(v, tol), ErrorKind::InvalidInput,
            "family value not selfadjoint");
    if (m.parity == Parity::Even) {
      require(is_involution(b.grading, tol), ErrorKind::InvalidInput,
              "even block grading must be a selfadjoint involution");
      require(b.grading.rows() == b.family.dim, ErrorKind::InvalidInput,
              "grading dimension mismatch");
      require(is_odd_op(v, b.grading, tol), ErrorKind::InvalidInput,
              "even block operator must anticommute with the grading");
    } else {
      require(b.grading.size() == 0, ErrorKind::InvalidInput,
              "odd block carries no grading");
    }
  }
}

namespace {

std::vector<BaseWindow> concat_windows(const OperatorFamily& a,
                                       const OperatorFamily& b) {
  std::vector<BaseWindow> w = a.windows;
  w.insert(w.end(), b.windows.begin(), b.windows.end());
  return w;
}

OperatorFamily combine_families(
    Eigen::Index dim, const OperatorFamily& a, const OperatorFamily& b,
    std::function<Matrix(const Matrix&, const Matrix&)> combine) {
  OperatorFamily out;
  out.dim = dim;
  out.baseDim = a.baseDim + b.baseDim;
  out.windows = concat_windows(a, b);
  int na = a.baseDim;
  auto fa = a.at;
  auto fb = b.at;
  out.at = [na, fa, fb, combine](const std::vector<double>& p) {
    std::vector<double> pa(p.begin(), p.begin() + na);
    std::vector<double> pb(p.begin() + na, p.end());
    return combine(fa(pa), fb(pb));
  };
  return out;
}

std::string pair_label(const KasparovModule& a, const KasparovModule& b,
                       size_t i, size_t j) {
  std::string la = i < a.blockLabels.size() ? a.blockLabels[i] : std::to_string(i);
  std::string lb = j < b.blockLabels.size() ? b.blockLabels[j] : std::to_string(j);
  return la + "*" + lb;
}

}  // namespace

KasparovModule kprod(const KasparovModule& a, const KasparovModule& b) {
  KasparovModule out;
  bool aEven = a.parity == Parity::Even;
  bool bEven = b.parity == Parity::Even;
  out.parity = (aEven == bEven) ? Parity::Even : Parity::Odd;

  for (size_t i = 0; i < a.blocks.size(); ++i) {
    for (size_t j = 0; j < b.blocks.size(); ++j) {
      const auto& fa = a.blocks[i];
      const auto& fb = b.blocks[j];
      Eigen::Index da = fa.family.dim, db = fb.family.dim;
      BlockFiber blk;
      if (aEven && bEven) {
        Matrix z1 = fa.grading;
        Matrix ib = eye(db);
        blk.family = combine_families(
            da * db, fa.family, fb.family,
            [z1, ib](const Matrix& x, const Matrix& y) -> Matrix {
              return kron(x, ib) + kron(z1, y);
            });
        blk.grading = kron(fa.grading, fb.grading);
      } else if (aEven && !bEven) {
        Matrix z1 = fa.grading;
        Matrix ib = eye(db);
        blk.family = combine_families(
            da * db, fa.family, fb.family,
            [z1, ib](const Matrix& x, const Matrix& y) -> Matrix {
              return kron(x, ib) + kron(z1, y);
            });
      } else if (!aEven && bEven) {
        Matrix z2 = fb.grading;
        Matrix ia = eye(da);
        blk.family = combine_families(
            da * db, fa.family, fb.family,
            [z2, ia](const Matrix& x, const Matrix& y) -> Matrix {
              return kron(x, z2) + kron(ia, y);
            });
      } else {
        Matrix g1 = cliff::gamma1();
        Matrix g2 = cliff::gamma2();
        Matrix ia = eye(da);
        Matrix ib = eye(db);
        blk.family = combine_families(
            2 * da * db, fa.family, fb.family,
            [g1, g2, ia, ib](const Matrix& x, const Matrix& y) -> Matrix {
              return kron(g1, kron(x, ib)) + kron(g2, kron(ia, y));
            });
        blk.grading = kron(cliff::odd_odd_grading(), eye(da * db));
      }
      out.blocks.push_back(std::move(blk));
      out.blockLabels.push_back(pair_label(a, b, i, j));
    }
  }
  return out;
}

Matrix plus_corner(const Matrix& f, const Matrix& grading) {
  require(is_odd_op(f, grading, kStructTol), ErrorKind::InvalidInput,
          "plus_corner: operator must be odd for the grading");
  GradedSplit s = split_grading(grading);
  return off_diagonal_block(f, s);
}

namespace {

long count_pos(const RealVector& ev) {
  long n = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev(i) > 0) ++n;
  return n;
}

}  // namespace

FlowResult spectral_flow(const OperatorFamily& fam, const FlowOptions& opt) {
  require(fam.baseDim == 1, ErrorKind::InvalidInput,
          "spectral_flow: one-parameter family required");
  require(fam.dim > 0 && static_cast<bool>(fam.at), ErrorKind::InvalidInput,
          "spectral_flow: empty family");
  const BaseWindow w = fam.windows.at(0);
  require(w.t1 > w.t0, ErrorKind::InvalidInput, "spectral_flow: empty window");

  FlowResult res;
  auto eigs = [&](double t) {
    if (res.eigenSolves >= opt.maxEigenSolves)
      fail(ErrorKind::RefineRequired,
           "spectral_flow: eigen-solve budget exhausted; raise maxEigenSolves "
           "or locTol");
    ++res.eigenSolves;
    Matrix m = fam.value(t);
    require(is_selfadjoint(m, kStructTol), ErrorKind::InvalidInput,
            "spectral_flow: family value not selfadjoint");
    Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
    return RealVector(es.eigenvalues());
  };

  if (w.closed) {
    Matrix m0 = fam.value(w.t0), m1 = fam.value(w.t1);
    require(residual(m0, m1) <= kStructTol, ErrorKind::InvalidInput,
            "spectral_flow: closed loop has unequal endpoint operators");
  }

  int n = std::max(3, opt.initialSamples);
  std::vector<double> ts(n);
  std::vector<RealVector> evs(n);
  for (int i = 0; i < n; ++i) {
    ts[i] = w.t0 + (w.t1 - w.t0) * i / (n - 1);
    evs[i] = eigs(ts[i]);
  }

  double scale = std::max(1.0, std::max(evs.front().cwiseAbs().maxCoeff(),
                                        evs.back().cwiseAbs().maxCoeff()));
  double gap0 = evs.front().cwiseAbs().minCoeff();
  double gap1 = evs.back().cwiseAbs().minCoeff();
  if (gap0 <= opt.endpointGapTol * scale || gap1 <= opt.endpointGapTol * scale)
    fail(ErrorKind::GapFailure,
         "spectral_flow: endpoint operator has an eigenvalue at scale " +
             std::to_string(std::min(gap0, gap1)));

  res.flow = count_pos(evs.back()) - count_pos(evs.front());

  // Pass-based refinement. A segment is refined when eigenvalues change sign
  // across it, or when a branch sits closer to zero than the spectrum moves
  // nearby (neighbor movement catches dips symmetric about a segment).
  double locTol = opt.locTol * (w.t1 - w.t0);
  bool inserted = true;
  while (inserted) {
    inserted = false;
    size_t m = ts.size() - 1;
    std::vector<double> moved(m);
    for (size_t i = 0; i < m; ++i)
      moved[i] = (evs[i] - evs[i + 1]).cwiseAbs().maxCoeff();
    std::vector<double> nts;
    std::vector<RealVector> nevs;
    for (size_t i = 0; i < m; ++i) {
      nts.push_back(ts[i]);
      nevs.push_back(evs[i]);
      double width = ts[i + 1] - ts[i];
      if (width <= locTol) continue;
      long net = count_pos(evs[i + 1]) - count_pos(evs[i]);
      double nearby = moved[i];
      if (i > 0) nearby = std::max(nearby, moved[i - 1]);
      if (i + 1 < m) nearby = std::max(nearby, moved[i + 1]);
      double minAbs = std::min(evs[i].cwiseAbs().minCoeff(),
                               evs[i + 1].cwiseAbs().minCoeff());
      if (net != 0 || minAbs < nearby) {
        double mid = 0.5 * (ts[i] + ts[i + 1]);
        nts.push_back(mid);
        nevs.push_back(eigs(mid));
        inserted = true;
      }
    }
    nts.push_back(ts.back());
    nevs.push_back(evs.back());
    ts.swap(nts);
    evs.swap(nevs);
  }

  for (size_t i = 0; i + 1 < ts.size(); ++i) {
    long net = count_pos(evs[i + 1]) - count_pos(evs[i]);
    if (net == 0) continue;
    int sgn = net > 0 ? 1 : -1;
    for (long k = 0; k < std::abs(net); ++k)
      res.crossings.push_back({0.5 * (ts[i] + ts[i + 1]), sgn});
  }

  // An opposite-sign pair inside the localization resolution is a tangential
  // touch seen through rounding, not two certified crossings; drop the pair.
  for (size_t i = 0; i + 1 < res.crossings.size();) {
    if (res.crossings[i].sign != res.crossings[i + 1].sign &&
        res.crossings[i + 1].t - res.crossings[i].t <= 4 * locTol) {
      res.crossings.erase(res.crossings.begin() + i, res.crossings.begin() + i + 2);
      if (i > 0) --i;
    } else {
      ++i;
    }
  }
  return res;
}

namespace {

struct DegreeState {
  std::function<Matrix(double, double)> corner;
  const DegreeOptions* opt;
  long detEvals = 0;
  long total = 0;
};

// Determinant of the plus corner in log/arg form: products of many
// eigen-factors overflow a plain determinant long before they carry any
// rounding risk in the argument.
struct LogDet {
  double logAbs;
  double arg;
};

LogDet det_at(DegreeState& st, double s, double t) {
  ++st.detEvals;
  Matrix g = st.corner(s, t);
  Eigen::PartialPivLU<Matrix> lu(g);
  double logAbs = 0.0;
  double arg = lu.permutationP().determinant() < 0 ? 3.14159265358979323846 : 0.0;
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    Complex u = lu.matrixLU()(i, i);
    logAbs += std::log(std::abs(u));
    arg += std::arg(u);
  }
  return {logAbs, arg};
}

struct EdgeZero {};

// Continuous-argument tracking along the straight edge p -> q.
double edge_winding(DegreeState& st, double s0, double t0, double s1,
                    double t1) {
  double u = 0.0, step = 0.25, total = 0.0;
  LogDet cur = det_at(st, s0, t0);
  if (!std::isfinite(cur.logAbs) || cur.logAbs < st.opt->minLogDet)
    throw EdgeZero{};
  while (u < 1.0) {
    step = std::min(step, 1.0 - u);
    double v = u + step;
    LogDet nxt = det_at(st, s0 + v * (s1 - s0), t0 + v * (t1 - t0));
    double dphi = std::remainder(nxt.arg - cur.arg, kTwoPi);
    if (!std::isfinite(nxt.logAbs) || nxt.logAbs < st.opt->minLogDet ||
        std::abs(dphi) > st.opt->argStep) {
      step *= 0.5;
      if (step < 1e-7) throw EdgeZero{};
      continue;
    }
    total += dphi;
    cur = nxt;
    u = v;
    step = std::min(0.25, step * 1.6);
  }
  return total;
}

void plaquette_degree(DegreeState& st, double s0, double t0, double s1,
                      double t1, int depth) {
  try {
    double arc = edge_winding(st, s0, t0, s1, t0) +
                 edge_winding(st, s1, t0, s1, t1) +
                 edge_winding(st, s1, t1, s0, t1) +
                 edge_winding(st, s0, t1, s0, t0);
    double wind = arc / kTwoPi;
    long rounded = std::lround(wind);
    if (std::abs(wind - rounded) > 0.05) throw EdgeZero{};
    st.total += rounded;
    return;
  } catch (const EdgeZero&) {
    if (depth >= st.opt->maxDepth)
      fail(ErrorKind::RefineRequired,
           "torus_degree: could not separate a determinant zero from a "
           "plaquette boundary; raise maxDepth");
  }
  // Split off-center so repeated refinement does not chase a zero sitting
  // exactly on a midline.
  double sm = s0 + (s1 - s0) * 0.5100287;
  double tm = t0 + (t1 - t0) * 0.4899173;
  plaquette_degree(st, s0, t0, sm, tm, depth + 1);
  plaquette_degree(st, sm, t0, s1, tm, depth + 1);
  plaquette_degree(st, s0, tm, sm, t1, depth + 1);
  plaquette_degree(st, sm, tm, s1, t1, depth + 1);
}

}  // namespace

namespace {

DegreeResult run_degree(std::function<Matrix(double, double)> corner,
                        const BaseWindow& ws, const BaseWindow& wt,
                        const DegreeOptions& opt) {
  DegreeState st;
  st.corner = std::move(corner);
  st.opt = &opt;

  int n = std::max(2, opt.initialGrid);

  // Interior grid lines carry a fixed irrational skew so factor crossings at
  // round parameter values do not land on plaquette boundaries.
  auto line = [n](const BaseWindow& w, int i) {
    if (i == 0) return w.t0;
    if (i == n) return w.t1;
    return w.t0 + (w.t1 - w.t0) * (i + 0.31830988618) / (n + 0.31830988618);
  };

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      plaquette_degree(st, line(ws, i), line(wt, j), line(ws, i + 1),
                       line(wt, j + 1), 0);

  return DegreeResult{st.total, st.detEvals};
}

}  // namespace

DegreeResult torus_degree(const OperatorFamily& fam, const Matrix& grading,
                          const DegreeOptions& opt) {
  require(fam.baseDim == 2, ErrorKind::InvalidInput,
          "torus_degree: two-parameter family required");
  require(is_involution(grading), ErrorKind::InvalidInput,
          "torus_degree: grading must be a selfadjoint involution");

  GradedSplit split = split_grading(grading);
  require(split.basisPlus.cols() == split.basisMinus.cols(),
          ErrorKind::InvalidInput,
          "torus_degree: grading eigenspaces differ in dimension");

  auto corner = [&fam, split](double s, double t) -> Matrix {
    return split.basisMinus.adjoint() * fam.value(s, t) * split.basisPlus;
  };
  return run_degree(corner, fam.windows.at(0), fam.windows.at(1), opt);
}

DegreeResult corner_torus_degree(const OperatorFamily& fam,
                                 const DegreeOptions& opt) {
  require(fam.baseDim == 2, ErrorKind::InvalidInput,
          "corner_torus_degree: two-parameter family required");
  auto corner = [&fam](double s, double t) -> Matrix {
    return fam.value(s, t);
  };
  return run_degree(corner, fam.windows.at(0), fam.windows.at(1), opt);
}

GradedKernel graded_kernel_class(const Matrix& d, const Matrix& z, double tol) {
  require(d.rows() == d.cols() && d.rows() == z.rows(), ErrorKind::InvalidInput,
          "graded_kernel_class: shape mismatch");
  require(is_selfadjoint(d, kStructTol), ErrorKind::InvalidInput,
          "graded_kernel_class: operator must be selfadjoint");
  require(is_odd_op(d, z, kStructTol), ErrorKind::InvalidInput,
          "graded_kernel_class: operator must be odd for the grading");

  Eigen::JacobiSVD<Matrix> svd(d, Eigen::ComputeFullV);
  const RealVector& sv = svd.singularValues();
  double smax = sv.size() ? sv(0) : 0.0;

  GradedKernel out;
  Matrix vk;
  if (smax == 0.0) {
    out.threshold = 0.0;
    vk = eye(d.rows());
  } else {
    out.threshold = tol * smax;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
      double s = sv(i);
      if (s >= out.threshold / 10 && s <= out.threshold * 10)
        fail(ErrorKind::RankAmbiguity,
             "graded_kernel_class: singular value " + std::to_string(s) +
                 " sits at the rank threshold " + std::to_string(out.threshold));
    }
    Eigen::Index k = 0;
    while (k < sv.size() && sv(sv.size() - 1 - k) < out.threshold) ++k;
    vk = svd.matrixV().rightCols(k);
  }
  out.kerDim = vk.cols();
  Complex tr = (vk.adjoint() * z * vk).trace();
  double super = tr.real();
  require(std::abs(super - std::lround(super)) < 1e-6 && std::abs(tr.imag()) < 1e-6,
          ErrorKind::RankAmbiguity,
          "graded_kernel_class: kernel is not grading invariant at this tolerance");
  out.superDim = std::lround(super);
  return out;
}

K0Class k0_of_kernel(const KasparovModule& m, double tol) {
  require(m.parity == Parity::Even, ErrorKind::InvalidInput,
          "k0_of_kernel: even module required");
  K0Class c;
  for (const auto& b : m.blocks) {
    require(b.family.baseDim == 0, ErrorKind::InvalidInput,
            "k0_of_kernel: constant families required");
    c.comp.push_back(graded_kernel_class(b.family.value(), b.grading, tol).superDim);
  }
  return c;
}

K1Class k1_of_module(const KasparovModule& m, const FlowOptions& opt) {
  require(m.parity == Parity::Odd, ErrorKind::InvalidInput,
          "k1_of_module: odd module required");
  K1Class c;
  for (const auto& b : m.blocks) c.comp.push_back(spectral_flow(b.family, opt).flow);
  return c;
}

K0Class k0_of_torus_module(const KasparovModule& m, const DegreeOptions& opt) {
  require(m.parity == Parity::Even, ErrorKind::InvalidInput,
          "k0_of_torus_module: even module required");
  K0Class c;
  for (const auto& b : m.blocks)
    c.comp.push_back(torus_degree(b.family, b.grading, opt).degree);
  return c;
}

K0Class k0_kronecker(const K0Class& a, const K0Class& b) {
  K0Class c;
  for (long x : a.comp)
    for (long y : b.comp) c.comp.push_back(x * y);
  return c;
}

K0Class k1_kronecker(const K1Class& a, const K1Class& b) {
  K0Class c;
  for (long x : a.comp)
    for (long y : b.comp) c.comp.push_back(x * y);
  return c;
}

}  // namespace apslab
