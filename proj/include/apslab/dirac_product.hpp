#pragma once

#include "apslab/dirac1d.hpp"

namespace apslab {

// Interval factor with prescribed flow: the free staggered operator carries
// one uniform chiral mass per fiber component, and component i sweeps through
// zero once at a staggered time with slope sign(flow). The nonzero spectrum
// +-sqrt(m_i^2 + s_k^2) never crosses, so the net flow equals `flow` exactly
// at every resolution. flow = 0 keeps one component at constant mass.
OperatorFamily interval_flow_factor(long flow, const Mesh1D& mesh,
                                    double mass = 0.75);

// F(j,k) = exp(2 pi i j k / n) / sqrt(n).
Matrix fourier_unitary(int n);

// Circle factor: the relabeled winding mode family both in its diagonal mode
// form and conjugated to dense position coordinates by the Fourier unitary.
struct CircleFactor {
  OperatorFamily position;
  OperatorFamily modes;
};

CircleFactor make_circle_factor(int winding, int modes, double delta = 0.39,
                                double radius = 1.0);

// Doubled-fiber even module of the two odd factors.
KasparovModule product_dirac(const OperatorFamily& interval,
                             const OperatorFamily& circle);

// Residual of the Fourier block-diagonalization of the assembled product at
// one base point: conjugating the circle legs back to mode coordinates must
// reproduce the mode-diagonal sum formula.
double separability_residual(const OperatorFamily& interval,
                             const CircleFactor& circle, double s, double t);

// log det of the assembled plus corner against the per-mode product of
// dets of (D_M(s) + i nu_k(t)), both taken relative to a fixed reference
// base point so the constant corner-basis phase cancels; returns the
// combined log/arg mismatch of the ratios.
double factorization_residual(const OperatorFamily& interval,
                              const CircleFactor& circle, double s, double t);

struct ProductIndexReport {
  long factorFlow = 0;
  long circleWinding = 0;
  long productIndex = 0;
  bool match = false;          // productIndex == factorFlow * circleWinding
  double separability = 0.0;   // worst sampled block-diagonalization residual
  double factorization = 0.0;  // worst sampled determinant split residual
  long detEvals = 0;
};

// Degree options tuned for the factored per-mode corner families.
DegreeOptions product_degree_options();

// End-to-end check: computes both factor classes by spectral flow, validates
// the separable evaluation at sample base points, then sums per-mode corner
// degrees into the product index and compares with the class product.
ProductIndexReport verify_product_index(
    long flow, int winding, const Mesh1D& mesh, int modes,
    const FlowOptions& fopt = {},
    const DegreeOptions& dopt = product_degree_options());

// ---- collar fiber models for the boundary reduction identities ----
//
// Frozen-coefficient collar models of the four parity products. The first
// factor collar fiber is C^2 (x) C^p with c(dx1) = -i sigma1 (x) 1; for an
// even first factor the fiber grading is sigma3 (x) 1 and bM (p x p) is the
// induced boundary operator; for an odd first factor bM acts on the doubled
// fiber itself (2f x 2f) and anticommutes with sigma1 (x) 1. dN is the
// second-factor operator, odd w.r.t. zN when that factor is even.

enum class ParityPair { EvenEven, EvenOdd, OddEven, OddOdd };

struct CollarProduct {
  Matrix firstOrder;      // coefficient of the normal derivative
  Matrix zerothOrder;     // boundary-frozen zeroth-order term
  Matrix extracted;       // boundary operator induced by the assembled product
  Matrix psi;             // isometry from the reduced fiber into the full one
  Matrix reduced;         // psi* extracted psi
  Matrix reference;       // reduced-coordinates sum formula
  Matrix gradingReduced;  // grading of the reduced boundary fiber; empty if none
};

CollarProduct collar_product(ParityPair pc, const Matrix& bM, const Matrix& dN,
                             const Matrix& zN);

// Lift of a trivializing operator of the first factor to the product
// boundary fiber, in reduced coordinates.
Matrix lift_trivializing(ParityPair pc, const Matrix& a, Eigen::Index dimN,
                         const Matrix& zN);

// Gap law defect max(0, gap(bM+a)^2 - gap(reduced+lift)^2); the anticommuting
// cross terms cancel, so this must vanish up to rounding.
double lift_gap_defect(ParityPair pc, const Matrix& bM, const Matrix& a,
                       const Matrix& dN, const Matrix& zN);

}  // namespace apslab
