#pragma once

#include "apslab/types.hpp"

namespace apslab {

Matrix kron(const Matrix& a, const Matrix& b);
Matrix direct_sum(const Matrix& a, const Matrix& b);
Matrix conjugate(const Matrix& u, const Matrix& a);  // u a u*

// Parity decomposition with respect to a grading involution z.
Matrix even_part(const Matrix& a, const Matrix& z);
Matrix odd_part(const Matrix& a, const Matrix& z);

bool is_selfadjoint(const Matrix& a, double tol = kStructTol);
bool is_unitary(const Matrix& a, double tol = kStructTol);
bool is_involution(const Matrix& a, double tol = kStructTol);
bool is_even_op(const Matrix& a, const Matrix& z, double tol = kStructTol);
bool is_odd_op(const Matrix& a, const Matrix& z, double tol = kStructTol);

// Graded tensor product of operators: (a ox b)(x ox y) picks up (-1)^{p(b)p(x)}.
// Works for mixed-parity b via its even/odd split relative to zRight.
Matrix graded_tensor(const Matrix& a, const Matrix& zLeft, const Matrix& b,
                     const Matrix& zRight);

// Orthonormal eigenbasis columns of a grading involution.
struct GradedSplit {
  Matrix basisPlus;   // z v = +v
  Matrix basisMinus;  // z v = -v
};

GradedSplit split_grading(const Matrix& z, double tol = kStructTol);

// For odd selfadjoint d: the block mapping the + eigenspace into the - one.
Matrix off_diagonal_block(const Matrix& d, const GradedSplit& s);

// Rebuild the odd selfadjoint operator with prescribed +to- block.
Matrix odd_from_block(const Matrix& block, const GradedSplit& s);

// Functional calculus for selfadjoint matrices.
Matrix selfadjoint_exp(const Matrix& g, double scale);  // e^{scale g}

// Spectral projection onto the positive (or negative) part. The spectrum
// must stay away from zero by gapTol relative to the largest eigenvalue.
Matrix spectral_projection(const Matrix& g, bool positive,
                           double gapTol = 1e-8);

// Fixed 2x2 Clifford conventions used throughout.
namespace cliff {
Matrix sigma();            // [[0,1],[1,0]]
Matrix z2();               // diag(1,-1)
Matrix gamma1();           // diag(1,-1)
Matrix gamma2();           // [[0,i],[-i,0]]
Matrix odd_odd_grading();  // -i gamma1 gamma2 = sigma
}  // namespace cliff

}  // namespace apslab
