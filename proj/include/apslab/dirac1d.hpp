#pragma once

#include "apslab/kclass.hpp"

namespace apslab {

// Uniform mesh on [0, length]. Coarser than 8 cells the staggered schemes
// stop resolving the boundary layers we test against.
struct Mesh1D {
  double length = 1.0;
  int cells = 8;
  double h() const { return length / cells; }
};

void check_mesh(const Mesh1D& m);

// x -> selfadjoint fiber matrix.
using FiberPotential = std::function<Matrix(double)>;

FiberPotential constant_potential(const Matrix& b);

// Orthonormal rows spanning the nonnegative eigenspace of a boundary
// operator. The operator must be invertible: a zero eigenvalue means the
// boundary condition itself is ill posed.
struct ApsRows {
  Matrix rows;  // rank x fiber
  Eigen::Index rank = 0;
};

ApsRows aps_rows(const Matrix& boundaryOp, double gapTol = 1e-8);

// First-order interval operator u -> u' - B(x) u on fiber C^f, discretized
// on staggered grids: arguments on the cells+1 nodes, values on the cells
// midpoints, plus boundary rows projecting u(0) and u(L).
// The boundary operators are -B(0)+attachLeft and B(L)+attachRight; their
// nonnegative spectral rows are appended, so
//   rows = cells*f + rankLeft + rankRight, cols = (cells+1)*f.
struct EvenIntervalOp {
  Mesh1D mesh;
  Eigen::Index fiber = 0;
  Matrix op;
  Matrix leftBoundaryOp, rightBoundaryOp;
  Eigen::Index rankLeft = 0, rankRight = 0;
};

EvenIntervalOp build_even_interval(const Mesh1D& mesh, Eigen::Index fiber,
                                   const FiberPotential& b,
                                   const Matrix& attachLeft,
                                   const Matrix& attachRight);

// Kernel/cokernel dimensions of a rectangular operator by singular value
// split, with the same rank-threshold guard as the graded kernel class.
struct IndexResult {
  long index = 0;
  Eigen::Index kerDim = 0, cokerDim = 0;
  double threshold = 0.0;
};

IndexResult numerical_index(const Matrix& rect, double tol = 1e-8);

// Same interval operator with a flat cylinder attached on the right: the
// potential freezes at B(L)+attachRight, the far end carries the projection
// of that same operator, and the original right-hand rows are dropped.
// extraLength must be at least 8 / gap(B(L)+attachRight).
EvenIntervalOp build_cylinder_extension(const Mesh1D& mesh, Eigen::Index fiber,
                                        const FiberPotential& b,
                                        const Matrix& attachLeft,
                                        const Matrix& attachRight,
                                        double extraLength);

// Selfadjoint odd interval operator on nodes (+) midpoints:
//   [ gamma(nodes)   T* ]        T u = -i du/dx + i beta(x) u  (staggered)
//   [ T       -gamma(mid) ]
// boundLeft / boundRight are hermitian 2f x 2f blocks added on the
// coordinates (u_0, v_{1/2}) and (u_n, v_{n-1/2}).
struct OddIntervalOp {
  Mesh1D mesh;
  Eigen::Index fiber = 0;
  Matrix op;  // square, (2*cells+1)*fiber
};

OddIntervalOp build_odd_interval(const Mesh1D& mesh, Eigen::Index fiber,
                                 const FiberPotential& beta,
                                 const FiberPotential& gamma,
                                 const Matrix& boundLeft,
                                 const Matrix& boundRight);

// Central-difference circle derivative with a uniform flux phase, the
// classic doubled symbol sin(xi h)/h. Kept as the guard case: a flux sweep
// through one quantum moves two modes through zero in opposite directions.
Matrix flux_circle_central(int cells, double length, double flux);
OperatorFamily flux_sweep_central(int cells, double length, double flux0);

// Half-line resolvent check for d/dx + G with the spectral boundary
// condition at 0: the two-sided exponential kernel
//   u(x) =  int_0^x e^{-(x-y)G} P_+ v(y) dy  -  int_x^inf e^{-(x-y)G} P_- v(y) dy
// is applied by quadrature and compared against a direct staggered solve.
// Returns the relative difference between the two solutions.
double verify_zl_inverse(const Matrix& g, double length, int cells);

}  // namespace apslab
