#pragma once

#include <Eigen/SparseCore>

#include "apslab/group.hpp"

namespace apslab {

using SparseL = Eigen::SparseMatrix<long>;

struct ProductCell {
  int leftDim = 0;
  Eigen::Index left = 0;
  int rightDim = 0;
  Eigen::Index right = 0;
};

// Finite cell complex with exact integer boundary maps. Simplicial complexes
// carry ascending vertex tuples per cell; cell products carry factor labels.
// onBoundary is filled when the facet-ridge incidence is pseudomanifold-like
// (every ridge in at most two facets) and stays empty otherwise.
struct CellComplex {
  int dim = 0;
  std::vector<Eigen::Index> counts;                  // per dimension 0..dim
  std::vector<SparseL> boundary;                     // boundary[k]: C_k -> C_{k-1}
  std::vector<std::vector<char>> onBoundary;         // boundary subcomplex marker
  std::vector<std::vector<std::vector<int>>> verts;  // simplicial labels
  std::vector<std::vector<ProductCell>> pairs;       // product labels

  bool simplicial() const { return !verts.empty(); }
  bool productCells() const { return !pairs.empty(); }
  bool markers() const { return !onBoundary.empty(); }
};

// Shape consistency and dd = 0, checked in integer arithmetic.
void check_complex(const CellComplex& x);

// Full face complex of a pure facet list; vertex ids are arbitrary distinct
// non-negative ints. Cells of each dimension are ordered lexicographically
// by ascending vertex tuple.
CellComplex simplicial_complex(int dim,
                               const std::vector<std::vector<int>>& facets);

// Index of the cell with the given vertices, or -1.
Eigen::Index simplex_index(const CellComplex& x, std::vector<int> v);

long euler_characteristic(const CellComplex& x);

// Coherent +-1 orientation of the facets, one connected patch at a time,
// seeded positively at the lowest facet. The boundary of the result is
// supported on the marked boundary ridges (exactly zero when closed).
RealVector fundamental_class(const CellComplex& x);

// Sparse application of the coboundary d_k: C^k -> C^{k+1}.
Vector apply_coboundary(const CellComplex& x, int k, const Vector& a);

// Dense coboundary for small complexes.
Matrix coboundary(const CellComplex& x, int k);

// Orthonormal harmonic representatives of H^k (dense eigensolver; guarded).
Matrix cohomology_basis(const CellComplex& x, int k, double tol = 1e-8);

// Front-face/back-face cup product of scalar cochains; requires p + q <= dim.
Vector cup_cochain(const CellComplex& x, int p, const Vector& a, int q,
                   const Vector& b);

// <a cup b, fund> with deg b = dim - p.
Complex cup_pair(const CellComplex& x, int p, const Vector& a, const Vector& b,
                 const RealVector& fund);

// Middle-degree cup pairing on harmonic representatives. Closed complexes
// pair absolute classes; with a boundary the form lives on the image of the
// compactly-supported classes inside the absolute ones. Odd middle degree is
// multiplied by i to make the form hermitian.
Matrix intersection_form_untwisted(const CellComplex& x, double tol = 1e-8);

// Signature of a hermitian form as eigenvalue count difference.
long form_signature(const Matrix& f, double tol = 1e-8);

// Cell product: cells are pairs, boundary follows the graded Leibniz rule.
CellComplex product_complex(const CellComplex& x, const CellComplex& y);

// (a x b)(s x t) = a(s) b(t) on cells of type (px, py), zero elsewhere.
Vector cross_cochain(const CellComplex& p, const CellComplex& x,
                     const CellComplex& y, int px, const Vector& a, int py,
                     const Vector& b);

RealVector product_fundamental_class(const CellComplex& p, const RealVector& fx,
                                     const RealVector& fy);

// Middle pairing of a product of two closed complexes on the Kuenneth basis
// of factor harmonics: every basis element is verified to be a product
// cocycle and the pairing is evaluated against the product fundamental
// class through the product diagonal (a1 x b1)(a2 x b2) ->
// (-1)^{|b1||a2|} (a1 a2) x (b1 b2).
Matrix product_intersection_form(const CellComplex& p, const CellComplex& x,
                                 const CellComplex& y, double tol = 1e-8);

// |G|-fold cover of a simplicial complex from a flat transport labeling of
// its 1-cells: the edge [u < v] labeled h connects sheet s at u to sheet
// s h at v. Flatness g(uw) = g(uv) g(vw) is required on every 2-cell.
// Cover vertex (v, s) has id v * |G| + s; deck[t] is the left-translation
// permutation of the k-cells.
struct CoverComplex {
  CellComplex space;
  std::vector<std::vector<std::vector<Eigen::Index>>> deck;
};

CoverComplex cover_complex(const CellComplex& x,
                           const std::vector<int>& edgeLabel,
                           const FiniteGroup& g);

// Deck action on k-cochains: (U_t a)(c) = a(deck[t^{-1}] c); one unitary
// permutation matrix per group element, commuting with the coboundary.
std::vector<Matrix> deck_action(const CoverComplex& c, const FiniteGroup& g,
                                int k);

}  // namespace apslab
