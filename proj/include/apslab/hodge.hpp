#pragma once

#include "apslab/scomplex.hpp"

namespace apslab {

// Inner-product cochain model of a closed space. The standard basis of
// cells (times any flat fiber) is declared orthonormal, d is the twisted
// coboundary written as a square matrix on the total space, and tau is a
// chirality: a selfadjoint unitary involution mapping degree p to n - p
// with tau d tau = (-1)^{n+1} d*.
struct HodgePackage {
  int dim = 0;                // top degree n
  std::vector<int> degreeOf;  // degree label per coordinate
  Matrix d;                   // coboundary, square on the total space
  Matrix tau;                 // chirality

  Eigen::Index total() const { return d.rows(); }
  Matrix dStar() const { return d.adjoint(); }
  Matrix gamma() const;      // (-1)^degree
  Matrix laplacian() const;  // (d + d*)^2
  Matrix dsign() const;      // d + d*        (boundary of an odd filling)
  Matrix dbd() const;        // d tau + tau d (boundary of an even filling)
};

// Structural residuals: d^2 = 0, tau involution, degree shifts, the
// tau-d-tau sign. Throws InvalidInput on violation.
void check_package(const HodgePackage& h, double tol = kStructTol);

Matrix degree_projector(const HodgePackage& h, int p);
Matrix degree_basis(const HodgePackage& h, int p);  // orthonormal columns

// Orthonormal basis of ker Delta, all degrees or one degree.
Matrix harmonic_basis(const HodgePackage& h, double tol = 1e-8);
Matrix harmonic_basis(const HodgePackage& h, int p, double tol = 1e-8);

// 0-dimensional model: p positively and q negatively oriented points,
// each carrying a fiber; tau = diag(+1_p, -1_q) (x) 1_fiber.
HodgePackage signed_points_package(Eigen::Index p, Eigen::Index q,
                                   Eigen::Index fiber = 1);

// Closed 1-complex with a unitary transport per edge: for an edge with
// integer boundary head - tail, (d a)(e) = T_e a(head) - a(tail). The
// chirality is synthesized as the unitary polar factor of d, extended over
// the harmonics by the polar factor of the duality pairing built from the
// fundamental class. Requires equal vertex and edge coordinate counts and a
// nondegenerate harmonic pairing (NoDualStructure otherwise).
struct Transport1D {
  CellComplex space;            // closed 1-dimensional complex
  std::vector<Matrix> edgeMove; // unitary fiber transport per 1-cell
};
HodgePackage package_1d(const Transport1D& t);

// Cyclic circle with a fraction flux/cells of a flux quantum per edge and a
// scalar fiber of the given dimension; integer flux is a full quantum.
HodgePackage circle_package(int cells, double flux = 0.0,
                            Eigen::Index fiber = 1);

// Circle with one marked edge carrying the given unitary holonomy.
HodgePackage holonomy_circle_package(int cells, const Matrix& holonomy);

// Isotypic block of the deck action on the cover of a simplicial circle
// determined by a flat edge labeling.
HodgePackage isotypic_circle_package(const CellComplex& circle,
                                     const std::vector<int>& edgeLabel,
                                     const FiniteGroup& g,
                                     const CharacterTable& ct, int irrep);

// Product model: d = d_a (x) 1 + Gamma_a (x) d_b and the parity-split
// chirality
//   even x even   tau_a (x) tau_b
//   even x odd    (Gamma_a tau_a) (x) tau_b
//   odd  x even   tau_a (x) tau_b
//   odd  x odd    -i (tau_a Gamma_a) (x) tau_b
// which is the unique decoration making the product axioms hold.
HodgePackage product_package(const HodgePackage& a, const HodgePackage& b);

// Restriction to an invariant subspace spanned by orthonormal columns of
// pure degree; invariance of d and tau is checked.
HodgePackage restrict_package(const HodgePackage& h, const Matrix& basis,
                              double tol = kStructTol);

// V/W decomposition of a boundary package. For an even-dimensional filling
// (dim odd, = 2m-1): V = d* Omega^m + d Omega^{m-1}. For an odd filling
// (dim even, = 2m): V = d* Omega^m + d Omega^{m-1} + d* Omega^{m+1}
// + d Omega^m, and W picks up the middle harmonics between Omega^< and
// Omega^>. The relevant operator (d tau + tau d resp. d + d*) is checked
// to preserve V with a spectral gap.
struct BoundarySplit {
  bool oddFilling = false;  // filling dimension parity
  int m = 0;
  Matrix vBasis, wBasis;          // orthonormal columns
  Matrix lowBasis, highBasis;     // Omega^< and Omega^> inside W
  Matrix midBasis;                // odd filling: middle harmonics
  double gapV = 0.0;              // spectral gap of the operator on V
};
BoundarySplit boundary_split(const HodgePackage& h);

// Degree involution on W: +1 on Omega^<, -1 on Omega^>, zero on V. For an
// odd filling the middle harmonics are split by a Lagrangian.
Matrix alpha_involution(const BoundarySplit& b);

struct LagrangianData {
  Matrix basis;       // columns in full boundary coordinates
  Matrix complement;  // orthocomplement inside the middle harmonics
};

// Lagrangian of the skew-hermitian form <x, i tau y> on the middle
// harmonics, built from an eigenbasis of tau there and a unitary matching
// u of the -1 part onto the +1 part. Fails with Precondition when the two
// parts have different dimensions.
LagrangianData lagrangian_from_unitary(const HodgePackage& h,
                                       const BoundarySplit& b,
                                       const Matrix& u);
LagrangianData canonical_lagrangian(const HodgePackage& h,
                                    const BoundarySplit& b);

// Largest residual of the Lagrangian conditions: isotropy of the form,
// orthogonality, completeness with the complement.
double lagrangian_residual(const HodgePackage& h, const BoundarySplit& b,
                           const LagrangianData& l);

Matrix alpha_involution(const BoundarySplit& b, const LagrangianData& l);

// Signature of tau on the middle harmonics: the closed-model signature.
// Zero when dim = 2 mod 4 by the swap structure; for a 0-dimensional model
// this is the point count with orientation signs.
long closed_package_signature(const HodgePackage& h, double tol = 1e-8);

}  // namespace apslab
