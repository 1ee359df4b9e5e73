#include "doctest.h"

#include "apslab/scomplex.hpp"

#include <random>

using namespace apslab;

namespace {

CellComplex boundary_tetrahedron() {
  return simplicial_complex(2, {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}});
}

// 3x3 grid torus, vertex (i, j) = 3i + j, indices mod 3
CellComplex torus9() {
  std::vector<std::vector<int>> f;
  auto v = [](int i, int j) { return 3 * (i % 3) + (j % 3); };
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      f.push_back({v(i, j), v(i, j + 1), v(i + 1, j + 1)});
      f.push_back({v(i, j), v(i + 1, j), v(i + 1, j + 1)});
    }
  return simplicial_complex(2, f);
}

CellComplex circle(int n) {
  std::vector<std::vector<int>> f;
  for (int i = 0; i + 1 < n; ++i) f.push_back({i, i + 1});
  f.push_back({0, n - 1});
  return simplicial_complex(1, f);
}

CellComplex interval2() { return simplicial_complex(1, {{0, 1}, {1, 2}}); }

CellComplex disk_fan5() {
  return simplicial_complex(
      2, {{0, 1, 2}, {0, 2, 3}, {0, 3, 4}, {0, 4, 5}, {0, 1, 5}});
}

CellComplex mobius5() {
  return simplicial_complex(
      2, {{0, 1, 2}, {1, 2, 3}, {2, 3, 4}, {0, 3, 4}, {0, 1, 4}});
}

// nine-vertex triangulation of the complex projective plane
CellComplex cp2_nine() {
  const int f[36][5] = {
      {1, 2, 3, 4, 5}, {1, 2, 3, 4, 6}, {1, 2, 3, 5, 6}, {1, 2, 4, 5, 7},
      {1, 2, 4, 6, 8}, {1, 2, 4, 7, 8}, {1, 2, 5, 6, 7}, {1, 2, 6, 7, 9},
      {1, 2, 6, 8, 9}, {1, 2, 7, 8, 9}, {1, 3, 4, 5, 9}, {1, 3, 4, 6, 9},
      {1, 3, 5, 6, 7}, {1, 3, 5, 7, 8}, {1, 3, 5, 8, 9}, {1, 3, 6, 7, 9},
      {1, 3, 7, 8, 9}, {1, 4, 5, 7, 8}, {1, 4, 5, 8, 9}, {1, 4, 6, 8, 9},
      {2, 3, 4, 5, 9}, {2, 3, 4, 6, 8}, {2, 3, 4, 7, 8}, {2, 3, 4, 7, 9},
      {2, 3, 5, 6, 8}, {2, 3, 5, 8, 9}, {2, 3, 7, 8, 9}, {2, 4, 5, 7, 9},
      {2, 5, 6, 7, 9}, {2, 5, 6, 8, 9}, {3, 4, 6, 7, 8}, {3, 4, 6, 7, 9},
      {3, 5, 6, 7, 8}, {4, 5, 6, 7, 8}, {4, 5, 6, 7, 9}, {4, 5, 6, 8, 9}};
  std::vector<std::vector<int>> facets;
  for (const auto& row : f) facets.push_back({row[0], row[1], row[2], row[3], row[4]});
  return simplicial_complex(4, facets);
}

long count_marked(const CellComplex& x, int k) {
  long n = 0;
  for (char m : x.onBoundary[k]) n += m != 0;
  return n;
}

}  // namespace

TEST_CASE("simplicial complexes close under faces with exact dd = 0") {
  CellComplex s2 = boundary_tetrahedron();
  check_complex(s2);
  CHECK(s2.counts == std::vector<Eigen::Index>{4, 6, 4});
  CHECK(euler_characteristic(s2) == 2);
  REQUIRE(s2.markers());
  for (int k = 0; k <= 2; ++k) CHECK(count_marked(s2, k) == 0);

  CellComplex t2 = torus9();
  check_complex(t2);
  CHECK(t2.counts == std::vector<Eigen::Index>{9, 27, 18});
  CHECK(euler_characteristic(t2) == 0);
  CHECK(count_marked(t2, 1) == 0);

  CellComplex disk = disk_fan5();
  check_complex(disk);
  CHECK(euler_characteristic(disk) == 1);
  CHECK(count_marked(disk, 1) == 5);   // the rim edges
  CHECK(count_marked(disk, 0) == 5);   // rim vertices; the hub is interior
  CHECK(!disk.onBoundary[0][0]);

  CellComplex seg = interval2();
  CHECK(seg.counts == std::vector<Eigen::Index>{3, 2});
  CHECK(count_marked(seg, 0) == 2);
  CHECK(!seg.onBoundary[0][1]);

  CHECK(simplex_index(s2, {1, 3}) >= 0);
  CHECK(simplex_index(s2, {3, 1}) == simplex_index(s2, {1, 3}));
  CHECK(simplex_index(s2, {0, 1, 2, 3}) == -1);

  CHECK_THROWS_AS(simplicial_complex(2, {{0, 1}}), Error);
  CHECK_THROWS_AS(simplicial_complex(2, {{0, 1, 1}}), Error);
  CHECK_THROWS_AS(simplicial_complex(1, {{-1, 0}}), Error);
  CHECK_THROWS_AS(simplicial_complex(1, {}), Error);
}

TEST_CASE("fundamental classes orient orientable pseudomanifolds") {
  CellComplex s2 = boundary_tetrahedron();
  RealVector f = fundamental_class(s2);
  REQUIRE(f.size() == 4);
  CHECK(f(0) == 1.0);
  CHECK(f(1) == -1.0);
  CHECK(f(2) == 1.0);
  CHECK(f(3) == -1.0);

  RealVector ft = fundamental_class(torus9());
  for (Eigen::Index i = 0; i < ft.size(); ++i) CHECK(std::abs(ft(i)) == 1.0);

  // with a boundary the class exists and its boundary stays on marked ridges
  RealVector fd = fundamental_class(disk_fan5());
  CHECK(fd.size() == 5);

  // two components are seeded positively one by one
  CellComplex two = simplicial_complex(
      2, {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3},
          {4, 5, 6}, {4, 5, 7}, {4, 6, 7}, {5, 6, 7}});
  RealVector f2 = fundamental_class(two);
  CHECK(f2(0) == 1.0);
  CHECK(f2(4) == 1.0);

  try {
    fundamental_class(mobius5());
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotOrientable);
  }
}

TEST_CASE("harmonic cochains count cohomology") {
  CHECK(cohomology_basis(torus9(), 0).cols() == 1);
  CHECK(cohomology_basis(torus9(), 1).cols() == 2);
  CHECK(cohomology_basis(torus9(), 2).cols() == 1);
  CHECK(cohomology_basis(boundary_tetrahedron(), 1).cols() == 0);
  CHECK(cohomology_basis(boundary_tetrahedron(), 2).cols() == 1);
  CHECK(cohomology_basis(disk_fan5(), 1).cols() == 0);
  CHECK(cohomology_basis(disk_fan5(), 2).cols() == 0);
  CHECK(cohomology_basis(circle(7), 1).cols() == 1);
  CHECK(cohomology_basis(simplicial_complex(0, {{0}}), 0).cols() == 1);

  Matrix h = cohomology_basis(torus9(), 1);
  CHECK(residual((h.adjoint() * h).eval(), eye(2)) < 1e-10);

  // d after d vanishes on arbitrary cochains
  std::mt19937 rng(41);
  std::normal_distribution<double> g;
  CellComplex t2 = torus9();
  Vector a(t2.counts[0]);
  for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = Complex(g(rng), g(rng));
  CHECK(apply_coboundary(t2, 1, apply_coboundary(t2, 0, a)).norm() < 1e-12);
}

TEST_CASE("cup pairing on the projective plane gives the frozen form") {
  CellComplex cp2 = cp2_nine();
  check_complex(cp2);
  CHECK(cp2.counts == std::vector<Eigen::Index>{9, 36, 84, 90, 36});
  CHECK(euler_characteristic(cp2) == 3);
  CHECK(cohomology_basis(cp2, 2).cols() == 1);

  Matrix f = intersection_form_untwisted(cp2);
  REQUIRE(f.rows() == 1);
  CHECK(std::abs(f(0, 0).imag()) < 1e-10);
  CHECK(std::abs(f(0, 0).real() - (-0.25)) < 1e-6);
  CHECK(form_signature(f) == -1);

  // reversing the orientation negates the pairing
  RealVector fund = fundamental_class(cp2);
  Matrix h = cohomology_basis(cp2, 2);
  Complex flipped = cup_pair(cp2, 2, h.col(0).conjugate(), h.col(0), (-fund).eval());
  CHECK(std::abs(flipped - Complex(0.25)) < 1e-6);

  // shifting a slot by a coboundary does not move the pairing
  std::mt19937 rng(7);
  std::normal_distribution<double> g;
  Vector mu(cp2.counts[1]);
  for (Eigen::Index i = 0; i < mu.size(); ++i) mu(i) = Complex(g(rng), g(rng));
  Vector shifted = h.col(0) + apply_coboundary(cp2, 1, mu);
  Complex moved = cup_pair(cp2, 2, h.col(0).conjugate(), shifted, fund);
  CHECK(std::abs(moved - f(0, 0)) < 1e-8);
}

TEST_CASE("middle forms of the small closed and bounded surfaces") {
  Matrix ft = intersection_form_untwisted(torus9());
  REQUIRE(ft.rows() == 2);
  CHECK(residual(ft, ft.adjoint().eval()) < 1e-10);
  CHECK(form_signature(ft) == 0);

  CHECK(intersection_form_untwisted(boundary_tetrahedron()).rows() == 0);
  CHECK(intersection_form_untwisted(disk_fan5()).rows() == 0);
  CHECK(form_signature(Matrix(0, 0)) == 0);

  Matrix d = Matrix::Zero(3, 3);
  d(0, 0) = 2;
  d(1, 1) = -3;
  d(2, 2) = 5;
  CHECK(form_signature(d) == 1);
  Matrix tiny = Matrix::Zero(1, 1);
  tiny(0, 0) = 1e-9;
  CHECK_THROWS_AS(form_signature(tiny), Error);
  Matrix nonherm = Matrix::Zero(2, 2);
  nonherm(0, 1) = 1;
  CHECK_THROWS_AS(form_signature(nonherm), Error);
}

TEST_CASE("product with a point reproduces the factor") {
  CellComplex t2 = torus9();
  CellComplex pt = simplicial_complex(0, {{0}});
  auto boundaries_match = [&t2](const CellComplex& pr) {
    REQUIRE(pr.counts == t2.counts);
    for (int k = 1; k <= 2; ++k) {
      SparseL diff = pr.boundary[k] - t2.boundary[k];
      for (int c = 0; c < diff.outerSize(); ++c)
        for (SparseL::InnerIterator it(diff, c); it; ++it)
          CHECK(it.value() == 0);
    }
  };
  CellComplex left = product_complex(pt, t2);
  CellComplex right = product_complex(t2, pt);
  check_complex(left);
  check_complex(right);
  boundaries_match(left);
  boundaries_match(right);

  RealVector one = RealVector::Ones(1);
  RealVector ft = fundamental_class(t2);
  CHECK((product_fundamental_class(left, one, ft) - ft).norm() == 0.0);
  CHECK((product_fundamental_class(right, ft, one) - ft).norm() == 0.0);
  CHECK_THROWS_AS(product_fundamental_class(right, one, ft), Error);
}

TEST_CASE("product boundaries follow the graded Leibniz rule") {
  CellComplex ann = product_complex(interval2(), circle(5));
  check_complex(ann);
  CHECK(ann.dim == 2);
  CHECK(euler_characteristic(ann) == 0);
  REQUIRE(ann.markers());
  // marked 1-cells: endpoint vertex times circle edge only
  CHECK(count_marked(ann, 1) == 10);
  RealVector fa = fundamental_class(ann);
  CHECK(fa.size() == ann.counts[2]);

  CellComplex t2p = product_complex(circle(5), circle(7));
  check_complex(t2p);
  CHECK(t2p.counts == std::vector<Eigen::Index>{35, 70, 35});
  CHECK(euler_characteristic(t2p) == 0);
  CHECK(cohomology_basis(t2p, 1).cols() == 2);

  RealVector fp = product_fundamental_class(t2p, fundamental_class(circle(5)),
                                            fundamental_class(circle(7)));
  RealVector fw = fundamental_class(t2p);
  CHECK((fp - fw).norm() == 0.0);
}

TEST_CASE("kuenneth pairing of closed products is hermitian and nondegenerate") {
  CellComplex c5 = circle(5);
  CellComplex c7 = circle(7);
  CellComplex t2p = product_complex(c5, c7);
  Matrix f = product_intersection_form(t2p, c5, c7);
  REQUIRE(f.rows() == 2);
  CHECK(residual(f, f.adjoint().eval()) < 1e-10);
  CHECK(std::abs(f(0, 0)) < 1e-10);
  CHECK(std::abs(f(1, 1)) < 1e-10);
  CHECK(std::abs(f(0, 1)) > 1e-3);
  CHECK(form_signature(f) == 0);

  CellComplex s2 = boundary_tetrahedron();
  CellComplex s2s2 = product_complex(s2, s2);
  CHECK(s2s2.counts == std::vector<Eigen::Index>{16, 48, 68, 48, 16});
  Matrix fs = product_intersection_form(s2s2, s2, s2);
  REQUIRE(fs.rows() == 2);
  CHECK(std::abs(fs(0, 0)) < 1e-10);
  CHECK(std::abs(fs(1, 1)) < 1e-10);
  CHECK(std::abs(fs(0, 1)) > 1e-3);
  CHECK(form_signature(fs) == 0);
}

TEST_CASE("the product of two projective planes has signature one") {
  CellComplex cp2 = cp2_nine();
  CellComplex pr = product_complex(cp2, cp2);
  CHECK(pr.dim == 8);
  CHECK(pr.counts[4] == 14184);
  CHECK(pr.counts[5] == 17712);
  CHECK(pr.counts[8] == 1296);
  Matrix f = product_intersection_form(pr, cp2, cp2);
  REQUIRE(f.rows() == 3);
  CHECK(residual(f, f.adjoint().eval()) < 1e-10);
  CHECK(form_signature(f) == 1);
}

TEST_CASE("flat labelings lift to covers with a deck representation") {
  FiniteGroup z2 = cyclic_group(2);

  // connected double cover of the circle
  CellComplex c6 = circle(6);
  std::vector<int> gen(c6.counts[1], 0);
  gen[simplex_index(c6, {0, 1})] = 1;
  CoverComplex dbl = cover_complex(c6, gen, z2);
  CHECK(dbl.space.counts == std::vector<Eigen::Index>{12, 12});
  CHECK(cohomology_basis(dbl.space, 0).cols() == 1);

  // trivial labels split the cover
  CoverComplex split = cover_complex(c6, std::vector<int>(6, 0), z2);
  CHECK(cohomology_basis(split.space, 0).cols() == 2);

  // deck action: unitary representation commuting with the coboundary
  std::vector<Matrix> u0 = deck_action(dbl, z2, 0);
  std::vector<Matrix> u1 = deck_action(dbl, z2, 1);
  CHECK(residual((u0[1] * u0[1]).eval(), eye(12)) < 1e-14);
  Matrix d = coboundary(dbl.space, 0);
  CHECK(residual((d * u0[1]).eval(), (u1[1] * d).eval()) < 1e-14);

  CharacterTable ct = character_table(z2);
  Matrix pt = isotypic_projector(z2, ct, 0, u0);
  Matrix ps = isotypic_projector(z2, ct, 1, u0);
  CHECK(std::abs(pt.trace().real() - 6.0) < 1e-10);
  CHECK(std::abs(ps.trace().real() - 6.0) < 1e-10);
  CHECK(residual((pt + ps).eval(), eye(12)) < 1e-12);

  // torus double cover along one grid direction is again a torus
  CellComplex t2 = torus9();
  std::vector<int> wrap(t2.counts[1], 0);
  for (Eigen::Index e = 0; e < t2.counts[1]; ++e) {
    int iu = t2.verts[1][e][0] / 3, iv = t2.verts[1][e][1] / 3;
    wrap[e] = (iu - iv == 2 || iv - iu == 2) ? 1 : 0;
  }
  CoverComplex big = cover_complex(t2, wrap, z2);
  CHECK(big.space.counts == std::vector<Eigen::Index>{18, 54, 36});
  CHECK(euler_characteristic(big.space) == 0);
  CHECK(cohomology_basis(big.space, 0).cols() == 1);
  CHECK(cohomology_basis(big.space, 1).cols() == 2);

  // a nonabelian deck group on a circle: three-cycles glue two loops
  FiniteGroup s3 = symmetric_s3();
  CellComplex c4 = circle(4);
  std::vector<int> lab(4, 0);
  lab[simplex_index(c4, {0, 1})] = 3;  // a three-cycle
  CoverComplex hex = cover_complex(c4, lab, s3);
  CHECK(hex.space.counts == std::vector<Eigen::Index>{24, 24});
  CHECK(cohomology_basis(hex.space, 0).cols() == 2);
  std::vector<Matrix> us = deck_action(hex, s3, 0);
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b)
      CHECK(residual((us[a] * us[b]).eval(), us[s3.mul[a][b]]) < 1e-14);

  // violations: wrong label count, holonomy that is not flat
  CHECK_THROWS_AS(cover_complex(c6, std::vector<int>(5, 0), z2), Error);
  std::vector<int> notFlat(t2.counts[1], 0);
  notFlat[0] = 1;
  try {
    cover_complex(t2, notFlat, z2);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidInput);
  }
}
