#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "apslab/dirac1d.hpp"
#include "apslab/hodge.hpp"
#include "apslab/scomplex.hpp"

namespace apslab {

// ---------------------------------------------------------------------------
// Flat coefficients and intersection forms
// ---------------------------------------------------------------------------

// C[G]-coefficients on a simplicial complex: a group element per 1-cell.
// The character table is computed once and fixes the block order of every
// K-class derived from the bundle.
struct FlatBundle {
  FiniteGroup group;
  CharacterTable table;
  std::vector<int> edgeLabel;  // empty means all-identity labels
};

FlatBundle trivial_bundle();
FlatBundle flat_bundle(const FiniteGroup& g, std::vector<int> edgeLabel);

// Hermitian middle pairing split into isotypic blocks, canonical irrep
// order. blockDegree records the irrep degrees used to normalize ranks to
// module multiplicities.
struct IntersectionForm {
  int middleDegree = 0;
  std::vector<int> blockDegree;
  std::vector<Matrix> blocks;
};

// Wrap a plain hermitian matrix as a form over the trivial group.
IntersectionForm scalar_form(const Matrix& f, int middleDegree = 0);

// Middle-degree pairing of a simplicial complex with flat coefficients,
// computed on the G-cover and split by the deck action. Closed complexes
// pair absolute classes; with a boundary the pairing lives on the image of
// the compactly supported classes inside the absolute ones.
IntersectionForm intersection_form(const CellComplex& x, const FlatBundle& f,
                                   double tol = 1e-8);

// Per-irrep signature divided by the irrep degree; exact divisibility is
// enforced so the result is an honest multiplicity vector.
K0Class signature_of_form(const IntersectionForm& f, double tol = 1e-8);

// Tensor product of forms over the tensor of the two group algebras, block
// (i,j) -> i * nb + j. Odd middle degrees carry the hermitianization phase,
// so the product of two odd-degree forms picks up a compensating sign.
IntersectionForm form_kronecker(const IntersectionForm& a,
                                const IntersectionForm& b);

// ---------------------------------------------------------------------------
// Package families over C[G]
// ---------------------------------------------------------------------------

// One cochain package per irreducible block of the flat coefficients.
// Product families keep kronecker block order (i * nb + j); relabeling to
// the product group's canonical irrep order is phi_pushforward's job.
struct PackageFamily {
  FiniteGroup group;
  CharacterTable table;
  std::vector<int> blockDegree;
  std::vector<HodgePackage> block;
};

// Families for the desk models: 0-dimensional complexes and flat circles;
// products via the graded package product, kronecker block order.
PackageFamily point_family(Eigen::Index plus, Eigen::Index minus,
                           const FlatBundle& f);
PackageFamily circle_family(const CellComplex& circle, const FlatBundle& f);
PackageFamily product_family(const PackageFamily& a, const PackageFamily& b);

// Closed even-dimensional class: graded kernel super-dimension of d^sign
// with respect to tau, per block, divided by the irrep degree.
K0Class family_class(const PackageFamily& p, double tol = 1e-8);

// Closed odd-dimensional case over a block algebra: the class vanishes.
// The guard recomputes each block's parity before returning the zero vector.
K1Class closed_odd_class(const PackageFamily& p);

// Multiplicity vector of the harmonic module in one degree of a family:
// the kernel class of the flat Laplacian.
K0Class harmonic_multiplicity(const PackageFamily& p, int degree,
                              double tol = 1e-8);

// ---------------------------------------------------------------------------
// Involution specs and trivializing operators
// ---------------------------------------------------------------------------

// Involution on the W part of a boundary split, vanishing on V. Even
// filling: anticommutes with tau and with d tau + tau d. Odd filling:
// anticommutes with tau, commutes with d + d* and with the degree grading.
struct InvolutionSpec {
  bool oddFilling = false;
  Matrix inv;  // full boundary coordinates, zero on V
};

struct InvolutionReport {
  double onV = 0.0;          // |I restricted to V|
  double involution = 0.0;   // |I^2 - P_W|
  double selfadjoint = 0.0;  // |I - I*|
  double tauAnti = 0.0;      // |I tau + tau I|
  double opCompat = 0.0;     // parity-correct (anti)commutators with the
                             // boundary operator (and grading, odd case)
  double worst() const;
};

InvolutionReport check_involution(const HodgePackage& h,
                                  const BoundarySplit& b,
                                  const InvolutionSpec& s);

// Degree involution +1 on Omega^<, -1 on Omega^> (even filling).
InvolutionSpec degree_involution_spec(const HodgePackage& h,
                                      const BoundarySplit& b);
// Odd filling: degree involution extended by P_L - P_{L-perp} on the
// middle harmonics.
InvolutionSpec lagrangian_involution_spec(const HodgePackage& h,
                                          const BoundarySplit& b,
                                          const LagrangianData& l);
// Even filling only: the opposite involution -i I tau.
InvolutionSpec opp_involution(const HodgePackage& h, const InvolutionSpec& s);

// Symmetric trivializing operator attached to an involution spec. Even
// filling A = i I tau S, odd filling A = I Gamma S, with S a positive shape
// on W commuting with the involution structure; S = 1 is the canonical
// choice. gap is the smallest singular value of (boundary operator + a);
// squareDefect is the residual of (op + a)^2 = op^2 + a^2 at S = 1.
struct TrivializingOp {
  Matrix a;
  double gap = 0.0;
  double squareDefect = 0.0;
};

TrivializingOp canonical_trivializing(const HodgePackage& h,
                                      const BoundarySplit& b,
                                      const InvolutionSpec& s);
// sPlus acts on the +1 eigenspace of tau inside W and is mirrored through
// the involution; it must be positive (and commute with the grading in the
// odd case, which the builder enforces by block-averaging).
TrivializingOp shaped_trivializing(const HodgePackage& h,
                                   const BoundarySplit& b,
                                   const InvolutionSpec& s,
                                   const Matrix& sPlus);
// Deterministic family for the independence suites: canonical, a scalar
// multiple, and seeded non-scalar positive shapes.
std::vector<TrivializingOp> symmetric_family(const HodgePackage& h,
                                             const BoundarySplit& b,
                                             const InvolutionSpec& s,
                                             unsigned seed = 1, int count = 3);

// Path I_t = E_+ u_t pairing with u_t = exp(i t a), a = -i log(u1 u0*),
// connecting two specs that share the V/W split; t in [0, 1].
std::function<InvolutionSpec(double)> involution_path(const HodgePackage& h,
                                                      const BoundarySplit& b,
                                                      const InvolutionSpec& s0,
                                                      const InvolutionSpec& s1);

// ---------------------------------------------------------------------------
// Collar dictionaries and identity batteries
// ---------------------------------------------------------------------------

// Named check values. Entries are residuals expected below 1e-10, except
// names ending in ".gap", which carry spectral gaps expected well above it.
using NamedResiduals = std::vector<std::pair<std::string, double>>;

// Two-component collar fiber (alpha, dx1 ^ alpha) over a boundary package:
// the collar chirality, Clifford action of dx1, degree grading, the
// boundary embedding (even filling Phi, odd filling Sigma), the first-order
// collar pencil first * d/dx1 + zeroth of d + d*, and the boundary operator
// the spectral condition sees.
struct CollarModel {
  bool oddFilling = false;
  Matrix tauM, cdx1, gammaM;
  Matrix embed;
  Matrix pencilFirst, pencilZeroth;
  Matrix boundaryOp;
};

CollarModel collar_model(const HodgePackage& boundary, bool oddFilling);

// Residuals of every collar dictionary identity for one parity: embedding
// isometry, chirality algebra, the conjugation extracting the boundary
// operator from the collar pencil, and the grading relations.
NamedResiduals collar_identities(const HodgePackage& boundary,
                                 bool oddFilling);

// Product involution identities on a package product, dispatched on the
// factor parities: the alpha-tensor involutions (anti)commute with the
// product operators as the sublemmas state, Lagrangians produced as
// positive eigenspaces are checked, and the odd x odd case includes the
// Z-conjugation sending the first factor's grading to the product
// chirality. Odd-dimensional first factors take their Lagrangian.
NamedResiduals product_involution_identities(const HodgePackage& a,
                                             const HodgePackage& b);
NamedResiduals product_involution_identities(const HodgePackage& a,
                                             const LagrangianData& la,
                                             const HodgePackage& b);

// Direct-sum decompositions of the product split along the first factor's
// V/W split, invertibility of the product boundary operator on the
// V_A-tensor part, and the harmonic inclusions of the product middle.
NamedResiduals decomposition_checks(const HodgePackage& a,
                                    const HodgePackage& b);

// Diagonal rescaling U alpha = i^{p(p-1)/2} alpha on a closed
// even-dimensional package: residuals of U d U* = D with D = i^p d per
// degree, of U tau U* = (-1)^{n/2} tau', and equality of the graded kernel
// classes of d + d* and D + D* up to that sign.
NamedResiduals hs_normalization_check(const HodgePackage& h);

// ---------------------------------------------------------------------------
// Collar index models
// ---------------------------------------------------------------------------

struct EvenModelOptions {
  int cells = 48;
  double length = 1.0;
};

// Interpolates -(d tau + tau d) between two packages of equal total
// dimension, linear in the operator entries.
FiberPotential package_path_potential(const HodgePackage& left,
                                      const HodgePackage& right,
                                      double length);

// APS index of the collar model over a path of boundary data: spectral
// condition of (boundary op + aLeft) at x = 0, of -(boundary op + aRight)
// at x = length. Matching ends give the cylinder value zero; the value is
// the inertia difference of the two end conditions, independent of the
// symmetric representative on either side.
long even_collar_index(const HodgePackage& left, const TrivializingOp& aLeft,
                       const HodgePackage& right,
                       const TrivializingOp& aRight,
                       const FiberPotential& path,
                       const EvenModelOptions& opt = {});

// Same model with an arbitrary fixed invertible cap at the far end, for
// index-carrying reference conditions.
long even_collar_index_capped(const HodgePackage& left,
                              const TrivializingOp& aLeft, const Matrix& cap,
                              const EvenModelOptions& opt = {});

// ---------------------------------------------------------------------------
// Odd case: difference elements and loop classes
// ---------------------------------------------------------------------------

// Winding of det(u(t)) over a closed unitary loop on [0, 2 pi], adaptive
// argument tracking.
long unitary_loop_winding(const std::function<Matrix(double)>& u,
                          int initialSamples = 48, double argStep = 1.2);

// Difference element of two Lagrangians over a block algebra: zero, with
// the connecting path u_t = exp(i t a) materialized and each sample checked
// to stay Lagrangian; the largest sample residual is reported.
struct DifferenceElement {
  K1Class cls;
  double pathResidual = 0.0;
};
DifferenceElement lagrangian_difference_class(const HodgePackage& h,
                                              const BoundarySplit& b,
                                              const LagrangianData& l1,
                                              const LagrangianData& l2,
                                              int samples = 32);

// Loop-coefficient difference element: winding of the matching loop
// det(u1(t) u2(t)*).
long lagrangian_difference_winding(const std::function<Matrix(double)>& u1,
                                   const std::function<Matrix(double)>& u2,
                                   int initialSamples = 48);

// ---------------------------------------------------------------------------
// Product verification
// ---------------------------------------------------------------------------

struct ProductVerdict {
  K0Class factorTensor;  // pushforward of the kronecker of factor classes
  K0Class productClass;  // class computed on the product object
  bool match = false;
};

// Closed complexes: cup-product route on both sides, the product pairing
// evaluated on the Kuenneth basis. Requires trivial coefficients (cell
// products are not simplicial, so no cover is available); twisted factors
// go through the form or family routes instead.
ProductVerdict verify_signature_products(const CellComplex& x,
                                         const CellComplex& y,
                                         const FlatBundle& fx,
                                         const FlatBundle& fy,
                                         double tol = 1e-8);

// Synthetic route: forms over two group algebras, tensor law checked
// against the brute-force isotypic decomposition of the kronecker form.
ProductVerdict verify_signature_products(const IntersectionForm& a,
                                         const IntersectionForm& b,
                                         const FiniteGroup& ga,
                                         const FiniteGroup& gb,
                                         double tol = 1e-8);

// Closed package families (even x even): family product against the
// kronecker-pushforward of factor classes.
ProductVerdict verify_family_products(const PackageFamily& a,
                                      const PackageFamily& b);

// Flow-carrying odd factors over loop coefficients. even x odd and
// odd x even: spectral flow of the product module equals superdim * flow.
struct MixedProductCheck {
  long expected = 0;
  long computed = 0;
  bool match = false;
};
MixedProductCheck even_odd_product_check(const Matrix& evenOp,
                                         const Matrix& grading, long flow,
                                         const Mesh1D& mesh = {});
MixedProductCheck odd_even_product_check(long flow, const Matrix& evenOp,
                                         const Matrix& grading,
                                         const Mesh1D& mesh = {});

// odd x odd: the chirality doubling carries two corner copies; both degrees
// are measured and the total must equal twice the flow product.
struct OddOddProductCheck {
  long flowA = 0;
  long flowB = 0;
  long degreeFirst = 0;
  long degreeSecond = 0;
  bool match = false;  // degreeFirst + degreeSecond == 2 * flowA * flowB
};
OddOddProductCheck odd_odd_product_check(long flowA, long flowB,
                                         const Mesh1D& mesh = {},
                                         const DegreeOptions& opt = {});

// ---------------------------------------------------------------------------
// Tensor Lagrangians and stabilization
// ---------------------------------------------------------------------------

// Positive eigenspace of alpha^L (x) Gamma_N on the middle harmonics of the
// product package, in full product coordinates.
LagrangianData lagrangian_tensor(const HodgePackage& a,
                                 const BoundarySplit& sa,
                                 const LagrangianData& la,
                                 const HodgePackage& b,
                                 const HodgePackage& product);

// Middle-degree stabilizer block: pairs extra harmonic lines with chirality
// diag(1, -1) per pair, the boundary contribution of interval models.
HodgePackage adjoin_middle_block(const HodgePackage& h, Eigen::Index pairs);

// Stabilized problem: two stabilizer blocks of k pairs each are adjoined
// and two Lagrangians are built, each mixing the original middle with one
// of the blocks. Refuses (Precondition) when the middle chirality stays
// unbalanced, which no stabilizer can repair over a block algebra.
struct StabilizedLagrangians {
  HodgePackage boundary;
  BoundarySplit split;
  LagrangianData l1, l2;
  Eigen::Index pairs = 0;
  Eigen::Index originalTotal = 0;
};
StabilizedLagrangians stabilize(const HodgePackage& boundary,
                                Eigen::Index pairs);

// Three-block rotation: identity on the original coordinates,
// [[e^{2it} cos t, sin t], [-e^{2it} sin t, cos t]] across the two
// stabilizer blocks on each chirality side; U(0) = 1 and U(pi/2) swaps the
// blocks, carrying l1 onto l2.
Matrix stabilizer_path_unitary(const StabilizedLagrangians& s, double t);

// ---------------------------------------------------------------------------
// Complex-level umbrella
// ---------------------------------------------------------------------------

struct SignatureClassResult {
  bool oddCase = false;
  K0Class k0;  // even-dimensional complexes
  K1Class k1;  // odd-dimensional closed complexes: zero over block algebras
};

// Even dimension: per-irrep signature of the middle pairing (the bounded
// case pairs the image of relative classes, so a disk reports zero). Odd
// dimension: the zero class with the block-algebra guard.
SignatureClassResult signature_class(const CellComplex& x,
                                     const FlatBundle& f, double tol = 1e-8);

// Kernel multiplicities of one degree of the cover of a flat circle; the
// cover route for equivariant class checks.
K0Class cover_kernel_class(const CellComplex& circle, const FlatBundle& f,
                           int degree = 0, double tol = 1e-8);

}  // namespace apslab
