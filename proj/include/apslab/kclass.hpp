#pragma once

#include "apslab/graded.hpp"

#include <functional>
#include <string>
#include <vector>

namespace apslab {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// Class components live blockwise over the coefficient algebra; block i
// corresponds to the i-th simple summand (for group algebras: the i-th irrep).
struct K0Class {
  std::vector<long> comp;
};

struct K1Class {
  std::vector<long> comp;
};

bool operator==(const K0Class& a, const K0Class& b);
bool operator==(const K1Class& a, const K1Class& b);
std::string to_string(const K0Class& c);
std::string to_string(const K1Class& c);

// Finite selfadjoint operator family over a base of dimension 0, 1 or 2.
// Windows are half-open loops when closed; when open, the endpoint operators
// must both be invertible and are allowed to differ (mode relabeling).
struct BaseWindow {
  double t0 = 0.0;
  double t1 = kTwoPi;
  bool closed = false;
};

struct OperatorFamily {
  Eigen::Index dim = 0;
  int baseDim = 0;
  std::vector<BaseWindow> windows;
  std::function<Matrix(const std::vector<double>&)> at;

  Matrix value() const;
  Matrix value(double t) const;
  Matrix value(double s, double t) const;
};

OperatorFamily constant_family(const Matrix& d);
OperatorFamily loop_family(Eigen::Index dim, std::function<Matrix(double)> f,
                           BaseWindow window);

// Diagonal mode family nu_k(t) = (k + delta + w t / 2pi) / radius, |k| <= modes,
// on the open window [0, 2pi]. Net flow across the window is exactly w when
// modes >= |w| and no mode vanishes at an endpoint.
OperatorFamily winding_family(int w, int modes, double delta, double radius);

enum class Parity { Even, Odd };

// One block of a bimodule cycle: an operator family plus, in the even case,
// a grading anticommuting with every value of the family.
struct BlockFiber {
  OperatorFamily family;
  Matrix grading;  // empty iff parity Odd
};

struct KasparovModule {
  Parity parity = Parity::Even;
  std::vector<BlockFiber> blocks;
  std::vector<std::string> blockLabels;
};

KasparovModule even_module(std::vector<Matrix> ops, std::vector<Matrix> gradings);
KasparovModule odd_module(std::vector<OperatorFamily> families);

// Structural validation: parities, selfadjointness, window sanity.
void check_module(const KasparovModule& m, double tol = kStructTol);

// External products. Base dimensions add; parity follows the usual rule.
// odd x odd doubles the fiber by C^2 with gamma1 = diag(1,-1),
// gamma2 = [[0,i],[-i,0]] and grading sigma = -i gamma1 gamma2.
KasparovModule kprod(const KasparovModule& a, const KasparovModule& b);

// Compression of an odd-odd product block onto the +1 eigenspace of the
// grading: the resulting corner block is D1 - i D2 against the -to+ side
// and D1 + i D2 against +to-. Exposed for identity tests.
Matrix plus_corner(const Matrix& f, const Matrix& grading);

struct FlowOptions {
  int initialSamples = 65;
  long maxEigenSolves = 200000;
  double endpointGapTol = 1e-8;
  double locTol = 1e-6;
};

struct Crossing {
  double t;
  int sign;  // +1 when an eigenvalue moves up through zero
};

struct FlowResult {
  long flow = 0;
  std::vector<Crossing> crossings;
  long eigenSolves = 0;
};

// Net spectral flow over the family window plus localized transversal
// crossings. Closed loops are checked for equal endpoint operators (their
// net flow is forced to zero by continuity of the eigenvalue branches).
FlowResult spectral_flow(const OperatorFamily& fam, const FlowOptions& opt = {});

struct DegreeOptions {
  int initialGrid = 12;
  int maxDepth = 7;
  double argStep = 1.2;      // max |d arg det| per accepted edge step, radians
  double minLogDet = -640.0; // log|det| below this counts as on a zero
};

struct DegreeResult {
  long degree = 0;
  long detEvals = 0;
};

// Total algebraic count of zeros of det(plus corner) over a 2-torus window:
// plaquette-wise winding of the determinant with adaptive refinement.
DegreeResult torus_degree(const OperatorFamily& fam, const Matrix& grading,
                          const DegreeOptions& opt = {});

// Same count for a directly-given corner family (square, not selfadjoint);
// used when the corner is available in factored or reduced form.
DegreeResult corner_torus_degree(const OperatorFamily& fam,
                                 const DegreeOptions& opt = {});

// Kernel super-dimension tr(P_ker z) of a graded selfadjoint odd operator.
struct GradedKernel {
  long superDim = 0;
  Eigen::Index kerDim = 0;
  double threshold = 0.0;
};

GradedKernel graded_kernel_class(const Matrix& d, const Matrix& z,
                                 double tol = 1e-8);

K0Class k0_of_kernel(const KasparovModule& m, double tol = 1e-8);
K1Class k1_of_module(const KasparovModule& m, const FlowOptions& opt = {});

// Class of an even module over a closed 2-torus base, one degree per block.
K0Class k0_of_torus_module(const KasparovModule& m, const DegreeOptions& opt = {});

// Blockwise exterior product of classes; block (i,j) -> i * nb + j.
K0Class k0_kronecker(const K0Class& a, const K0Class& b);
K0Class k1_kronecker(const K1Class& a, const K1Class& b);

}  // namespace apslab
