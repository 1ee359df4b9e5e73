#include "doctest.h"

#include "apslab/signature.hpp"

#include <cmath>
#include <functional>

#include "apslab/dirac_product.hpp"

using namespace apslab;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected a typed error");
  return ErrorKind::InvalidInput;
}

CellComplex circle3() {
  return simplicial_complex(1, {{0, 1}, {1, 2}, {0, 2}});
}

CellComplex sphere2() {
  return simplicial_complex(2, {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}});
}

// Cyclic 7-vertex torus: orbits of {0,1,3} and {0,2,3} under i -> i+1.
CellComplex torus7() {
  std::vector<std::vector<int>> facets;
  for (int i = 0; i < 7; ++i) {
    facets.push_back({i, (i + 1) % 7, (i + 3) % 7});
    facets.push_back({i, (i + 2) % 7, (i + 3) % 7});
  }
  return simplicial_complex(2, facets);
}

// 9-vertex complex projective plane: facets are line + two points of the
// preceding parallel line in AG(2,3), one orbit per line.
CellComplex cp2_nine() {
  std::vector<std::vector<int>> facets = {
      {0, 1, 2, 6, 7}, {0, 1, 2, 6, 8}, {0, 1, 2, 7, 8}, {0, 1, 3, 4, 5},
      {0, 1, 3, 4, 7}, {0, 1, 3, 5, 8}, {0, 1, 3, 7, 8}, {0, 1, 4, 5, 8},
      {0, 1, 4, 6, 7}, {0, 1, 4, 6, 8}, {0, 2, 3, 4, 5}, {0, 2, 3, 4, 7},
      {0, 2, 3, 5, 6}, {0, 2, 3, 6, 8}, {0, 2, 3, 7, 8}, {0, 2, 4, 5, 7},
      {0, 2, 5, 6, 7}, {0, 3, 5, 6, 8}, {0, 4, 5, 6, 7}, {0, 4, 5, 6, 8},
      {1, 2, 3, 4, 5}, {1, 2, 3, 4, 6}, {1, 2, 3, 5, 6}, {1, 2, 4, 5, 8},
      {1, 2, 4, 6, 8}, {1, 2, 5, 6, 7}, {1, 2, 5, 7, 8}, {1, 3, 4, 6, 7},
      {1, 3, 5, 6, 7}, {1, 3, 5, 7, 8}, {2, 3, 4, 6, 8}, {2, 3, 4, 7, 8},
      {2, 4, 5, 7, 8}, {3, 4, 6, 7, 8}, {3, 5, 6, 7, 8}, {4, 5, 6, 7, 8}};
  return simplicial_complex(4, facets);
}

double worst_of(const NamedResiduals& rows, const char* suffix = ".gap") {
  double w = 0;
  for (const auto& [name, value] : rows)
    if (name.size() < 4 || name.substr(name.size() - 4) != suffix)
      w = std::max(w, value);
  return w;
}

double row_named(const NamedResiduals& rows, const std::string& name) {
  for (const auto& [n, value] : rows)
    if (n == name) return value;
  FAIL("missing row ", name);
  return -1;
}

}  // namespace

TEST_CASE("scalar forms carry their signature through unitary conjugation") {
  Matrix f = Matrix::Zero(3, 3);
  f(0, 0) = 2;
  f(1, 1) = 3;
  f(2, 2) = -1;
  IntersectionForm a = scalar_form(f);
  CHECK(signature_of_form(a).comp == std::vector<long>{1});
  Matrix u = fourier_unitary(3);
  IntersectionForm b = scalar_form(Matrix(u * f * u.adjoint()));
  CHECK(signature_of_form(b).comp == std::vector<long>{1});
  IntersectionForm c = scalar_form(Matrix(-f));
  CHECK(signature_of_form(c).comp == std::vector<long>{-1});
  Matrix g(2, 2);
  g << 0, 1, Complex(0, 1), 0;
  CHECK(kind_of([&] { scalar_form(g); }) == ErrorKind::InvalidInput);
}

TEST_CASE("form kronecker multiplies signatures blockwise") {
  Matrix f1 = Matrix::Zero(3, 3);
  f1(0, 0) = 1;
  f1(1, 1) = 1;
  f1(2, 2) = -1;
  Matrix f2 = Matrix::Identity(2, 2);
  IntersectionForm a = scalar_form(f1, 1);
  IntersectionForm b = scalar_form(f2, 1);
  IntersectionForm p = form_kronecker(a, b);
  CHECK(p.middleDegree == 2);
  CHECK(p.blockDegree == std::vector<int>{1});
  CHECK(signature_of_form(p).comp == std::vector<long>{2});
  // empty blocks stay empty
  IntersectionForm e = scalar_form(Matrix(0, 0));
  CHECK(form_kronecker(a, e).blocks[0].rows() == 0);
}

TEST_CASE("closed surfaces have the expected middle forms") {
  // sphere: no middle cohomology at all
  IntersectionForm s = intersection_form(sphere2(), trivial_bundle());
  CHECK(s.middleDegree == 1);
  CHECK(s.blocks[0].rows() == 0);
  CHECK(signature_of_form(s).comp == std::vector<long>{0});
  // torus: hyperbolic rank-2 form in degree one
  IntersectionForm t = intersection_form(torus7(), trivial_bundle());
  CHECK(t.blocks[0].rows() == 2);
  CHECK(signature_of_form(t).comp == std::vector<long>{0});
}

TEST_CASE("the nine-vertex projective plane has unit signature") {
  CellComplex x = cp2_nine();
  CHECK(x.counts[0] == 9);
  CHECK(x.counts[1] == 36);
  CHECK(x.counts[2] == 84);
  CHECK(x.counts[3] == 90);
  CHECK(x.counts[4] == 36);
  CHECK(euler_characteristic(x) == 3);
  IntersectionForm f = intersection_form(x, trivial_bundle());
  CHECK(f.blocks[0].rows() == 1);
  long s = signature_of_form(f).comp[0];
  CHECK(std::labs(s) == 1);
  SignatureClassResult c = signature_class(x, trivial_bundle());
  CHECK(!c.oddCase);
  CHECK(c.k0.comp == std::vector<long>{s});
}

TEST_CASE("a disk reports an empty middle pairing") {
  CellComplex disk = simplicial_complex(2, {{0, 1, 2}});
  IntersectionForm f = intersection_form(disk, trivial_bundle());
  CHECK(f.blocks[0].rows() == 0);
  SignatureClassResult c = signature_class(disk, trivial_bundle());
  CHECK(c.k0.comp == std::vector<long>{0});
}

TEST_CASE("a two-torus with a flat half-twist splits into isotypic blocks") {
  CellComplex t = torus7();
  // a flat cocycle: mark every edge that wraps the 7-cycle, so wrap counts
  // add along paths and the holonomy of the full cycle is nontrivial
  std::vector<int> labels((size_t)t.counts[1], 0);
  for (int a = 0; a < 7; ++a)
    for (int b = a + 1; b < 7; ++b) {
      Eigen::Index e = simplex_index(t, {a, b});
      if (e >= 0 && b - a > 3) labels[(size_t)e] = 1;
    }
  FlatBundle f = flat_bundle(cyclic_group(2), labels);
  IntersectionForm form = intersection_form(t, f);
  CHECK(form.blocks.size() == 2);
  CHECK(signature_of_form(form).comp == std::vector<long>{0, 0});
  CHECK(form.blocks[0].rows() + form.blocks[1].rows() == 2);
}

TEST_CASE("signature products verify on closed untwisted factors") {
  CellComplex pt = simplicial_complex(0, {{0}});
  CellComplex cp2 = cp2_nine();
  ProductVerdict v = verify_signature_products(pt, cp2, trivial_bundle(),
                                               trivial_bundle());
  CHECK(v.match);
  CHECK(std::labs(v.productClass.comp[0]) == 1);
  ProductVerdict s = verify_signature_products(sphere2(), sphere2(),
                                               trivial_bundle(),
                                               trivial_bundle());
  CHECK(s.match);
  CHECK(s.productClass.comp == std::vector<long>{0});
  ProductVerdict c = verify_signature_products(circle3(), circle3(),
                                               trivial_bundle(),
                                               trivial_bundle());
  CHECK(c.match);
  CHECK(c.productClass.comp == std::vector<long>{0});
  // twisted factors are routed elsewhere
  FlatBundle half = flat_bundle(cyclic_group(2), {});
  CHECK(kind_of([&] {
          verify_signature_products(sphere2(), sphere2(), half,
                                    trivial_bundle());
        }) == ErrorKind::Unsupported);
  // odd total dimension has no middle pairing
  CHECK(kind_of([&] {
          verify_signature_products(pt, circle3(), trivial_bundle(),
                                    trivial_bundle());
        }) == ErrorKind::InvalidInput);
}

TEST_CASE("signature products verify on synthetic twisted forms") {
  FiniteGroup g2 = cyclic_group(2);
  FiniteGroup g3 = cyclic_group(3);
  Matrix d3 = Matrix::Zero(3, 3);
  d3(0, 0) = 1;
  d3(1, 1) = 1;
  d3(2, 2) = -1;
  IntersectionForm a;
  a.middleDegree = 2;
  a.blockDegree = {1, 1};
  a.blocks = {d3, Matrix(2.0 * Matrix::Identity(1, 1))};
  IntersectionForm b;
  b.middleDegree = 2;
  b.blockDegree = {1, 1, 1};
  b.blocks = {Matrix(-Matrix::Identity(2, 2)), Matrix(0, 0),
              Matrix(Matrix::Identity(1, 1))};
  ProductVerdict v = verify_signature_products(a, b, g2, g3);
  CHECK(v.match);
  long total = 0;
  for (long c : v.productClass.comp) total += c;
  CHECK(total == (1 + 1) * (-2 + 0 + 1));
}

TEST_CASE("package families pair signed points and circles") {
  FlatBundle triv = trivial_bundle();
  PackageFamily pts = point_family(3, 1, triv);
  CHECK(family_class(pts).comp == std::vector<long>{2});
  FlatBundle half = flat_bundle(cyclic_group(2), {});
  PackageFamily pts2 = point_family(2, 1, half);
  CHECK(family_class(pts2).comp == std::vector<long>{1, 1});
  // circle blocks are odd-dimensional: the K0 route must refuse
  FlatBundle third = flat_bundle(cyclic_group(3), {1, 0, 0});
  PackageFamily cf = circle_family(circle3(), third);
  CHECK(kind_of([&] { family_class(cf); }) == ErrorKind::Precondition);
  CHECK(closed_odd_class(cf).comp == std::vector<long>{0, 0, 0});
  // only the invariant block keeps constants
  CHECK(harmonic_multiplicity(cf, 0).comp == std::vector<long>{1, 0, 0});
  CHECK(cover_kernel_class(circle3(), third).comp ==
        std::vector<long>{1, 0, 0});
}

TEST_CASE("family products multiply the point classes") {
  FlatBundle triv = trivial_bundle();
  PackageFamily a = point_family(3, 1, triv);
  PackageFamily b = point_family(2, 1, triv);
  ProductVerdict v = verify_family_products(a, b);
  CHECK(v.match);
  CHECK(v.productClass.comp == std::vector<long>{2});
  FlatBundle third = flat_bundle(cyclic_group(3), {1, 0, 0});
  PackageFamily cf = circle_family(circle3(), third);
  CHECK(kind_of([&] { verify_family_products(a, cf); }) ==
        ErrorKind::Unsupported);
}

TEST_CASE("the degree involution of a circle boundary is clean") {
  HodgePackage h = circle_package(6);
  BoundarySplit b = boundary_split(h);
  REQUIRE(!b.oddFilling);
  InvolutionSpec s = degree_involution_spec(h, b);
  CHECK(check_involution(h, b, s).worst() < 1e-9);
  InvolutionSpec o = opp_involution(h, s);
  CHECK(check_involution(h, b, o).worst() < 1e-9);
  TrivializingOp a = canonical_trivializing(h, b, s);
  CHECK(a.gap > 1e-3);
  CHECK(a.squareDefect < 1e-9);
  TrivializingOp ao = canonical_trivializing(h, b, o);
  CHECK(ao.gap > 1e-3);
  CHECK(ao.squareDefect < 1e-9);
}

TEST_CASE("symmetric trivializing families stay gapped and square-split") {
  HodgePackage h = circle_package(6);
  BoundarySplit b = boundary_split(h);
  InvolutionSpec s = degree_involution_spec(h, b);
  auto fam = symmetric_family(h, b, s, 7, 3);
  CHECK(fam.size() == 3);
  for (const auto& m : fam) {
    CHECK(m.gap > 1e-4);
    CHECK(m.squareDefect < 1e-8);
  }
  // shapes must be positive
  Matrix bad = -Matrix::Identity(1, 1);
  CHECK(kind_of([&] { shaped_trivializing(h, b, s, bad); }) ==
        ErrorKind::Precondition);
}

TEST_CASE("involution paths stay valid between a spec and its opposite") {
  HodgePackage h = circle_package(6);
  BoundarySplit b = boundary_split(h);
  InvolutionSpec s0 = degree_involution_spec(h, b);
  InvolutionSpec s1 = opp_involution(h, s0);
  auto path = involution_path(h, b, s0, s1);
  CHECK(residual(path(0.0).inv, s0.inv) < 1e-8);
  CHECK(residual(path(1.0).inv, s1.inv) < 1e-8);
  for (double t : {0.25, 0.5, 0.75})
    CHECK(check_involution(h, b, path(t)).worst() < 1e-8);
  TrivializingOp mid = canonical_trivializing(h, b, path(0.5));
  CHECK(mid.gap > 1e-4);
}

TEST_CASE("odd-filling involutions come from lagrangians") {
  HodgePackage h = signed_points_package(1, 1);
  BoundarySplit b = boundary_split(h);
  REQUIRE(b.oddFilling);
  LagrangianData l1 = lagrangian_from_unitary(h, b, Matrix::Identity(1, 1));
  LagrangianData l2 =
      lagrangian_from_unitary(h, b, Matrix(-Matrix::Identity(1, 1)));
  InvolutionSpec s1 = lagrangian_involution_spec(h, b, l1);
  CHECK(check_involution(h, b, s1).worst() < 1e-9);
  TrivializingOp a = canonical_trivializing(h, b, s1);
  CHECK(a.gap > 1e-3);
  CHECK(a.squareDefect < 1e-9);
  InvolutionSpec s2 = lagrangian_involution_spec(h, b, l2);
  auto path = involution_path(h, b, s1, s2);
  for (double t : {0.0, 0.5, 1.0})
    CHECK(check_involution(h, b, path(t)).worst() < 1e-8);
  DifferenceElement d = lagrangian_difference_class(h, b, l1, l2, 8);
  CHECK(d.pathResidual < 1e-8);
  CHECK(d.cls.comp == std::vector<long>{0});
  // the opposite construction is even-filling only
  CHECK(kind_of([&] { opp_involution(h, s1); }) == ErrorKind::Precondition);
}

TEST_CASE("unitary loop winding counts determinant rotations") {
  auto loop = [](double t) {
    Matrix u(2, 2);
    u.setZero();
    u(0, 0) = std::exp(Complex(0, t));
    u(1, 1) = std::exp(Complex(0, -2 * t));
    return u;
  };
  CHECK(unitary_loop_winding(loop) == -1);
  auto triple = [](double t) {
    Matrix u(1, 1);
    u(0, 0) = std::exp(Complex(0, 3 * t));
    return u;
  };
  CHECK(unitary_loop_winding(triple) == 3);
  auto open = [](double t) {
    Matrix u(1, 1);
    u(0, 0) = std::exp(Complex(0, 0.5 * t));
    return u;
  };
  CHECK(kind_of([&] { unitary_loop_winding(open); }) ==
        ErrorKind::Precondition);
  CHECK(kind_of([&] { unitary_loop_winding(triple, 2); }) ==
        ErrorKind::InvalidInput);
  auto u1 = [](double t) {
    Matrix u(1, 1);
    u(0, 0) = std::exp(Complex(0, 2 * t));
    return u;
  };
  auto u2 = [](double t) {
    Matrix u(1, 1);
    u(0, 0) = std::exp(Complex(0, t));
    return u;
  };
  CHECK(lagrangian_difference_winding(u1, u2) == 1);
}

TEST_CASE("collar dictionaries hold for both filling parities") {
  NamedResiduals even = collar_identities(circle_package(4), false);
  CHECK(even.size() >= 12);
  CHECK(worst_of(even) < 1e-9);
  NamedResiduals odd = collar_identities(signed_points_package(2, 2), true);
  CHECK(odd.size() >= 11);
  CHECK(worst_of(odd) < 1e-9);
  CHECK(kind_of([&] { collar_model(circle_package(4), true); }) ==
        ErrorKind::InvalidInput);
  CHECK(kind_of([&] { collar_model(signed_points_package(2, 2), false); }) ==
        ErrorKind::InvalidInput);
}

TEST_CASE("product involution identities hold in all four parity cases") {
  HodgePackage circle4 = circle_package(4);
  HodgePackage circle3p = circle_package(3);
  HodgePackage pts = signed_points_package(2, 1);
  HodgePackage ptsBal = signed_points_package(1, 1);
  // odd x even
  NamedResiduals oe = product_involution_identities(circle4, pts);
  CHECK(worst_of(oe) < 1e-9);
  // odd x odd, including the middle lagrangian and the twist unitary
  NamedResiduals oo = product_involution_identities(circle4, circle3p);
  CHECK(worst_of(oo) < 1e-9);
  CHECK(row_named(oo, "prod.oddxodd.lagrangian") < 1e-9);
  CHECK(row_named(oo, "prod.oddxodd.twist-sign-op") < 1e-9);
  // even x even, lagrangian first factor
  BoundarySplit bp = boundary_split(ptsBal);
  LagrangianData la =
      lagrangian_from_unitary(ptsBal, bp, Matrix::Identity(1, 1));
  HodgePackage t2 = product_package(circle3p, circle3p);
  NamedResiduals ee = product_involution_identities(ptsBal, la, t2);
  CHECK(worst_of(ee) < 1e-9);
  CHECK(row_named(ee, "prod.evenxeven.tensor-lagrangian") < 1e-8);
  // even x odd
  NamedResiduals eo = product_involution_identities(ptsBal, la, circle4);
  CHECK(worst_of(eo) < 1e-9);
  // parity guards
  CHECK(kind_of([&] { product_involution_identities(pts, circle4); }) ==
        ErrorKind::InvalidInput);
  CHECK(kind_of([&] {
          product_involution_identities(circle4, la, pts);
        }) == ErrorKind::InvalidInput);
}

TEST_CASE("product decompositions respect the v and w parts") {
  NamedResiduals mixed =
      decomposition_checks(circle_package(4), signed_points_package(2, 1));
  CHECK(worst_of(mixed) < 1e-9);
  CHECK(row_named(mixed, "decomp.v-tensor.gap") > 1e-4);
  NamedResiduals closed =
      decomposition_checks(circle_package(3), circle_package(3));
  CHECK(worst_of(closed) < 1e-9);
  CHECK(row_named(closed, "decomp.middle-in-harmonics") < 1e-9);
}

TEST_CASE("the normalization unitary matches both conventions") {
  NamedResiduals pts = hs_normalization_check(signed_points_package(3, 1));
  CHECK(worst_of(pts) < 1e-10);
  CHECK(closed_package_signature(signed_points_package(3, 1)) == 2);
  HodgePackage t2 = product_package(circle_package(3), circle_package(3));
  NamedResiduals torus = hs_normalization_check(t2);
  CHECK(worst_of(torus) < 1e-9);
  CHECK(kind_of([&] { hs_normalization_check(circle_package(3)); }) ==
        ErrorKind::InvalidInput);
}

TEST_CASE("collar indices are stable under the trivializing choice") {
  HodgePackage h = circle_package(6);
  BoundarySplit b = boundary_split(h);
  InvolutionSpec s = degree_involution_spec(h, b);
  auto fam = symmetric_family(h, b, s, 11, 3);
  EvenModelOptions opt;
  opt.cells = 24;
  FiberPotential path = package_path_potential(h, h, opt.length);
  long base = even_collar_index(h, fam[0], h, fam[0], path, opt);
  CHECK(base == 0);
  for (const auto& m : fam)
    CHECK(even_collar_index(h, m, h, fam[0], path, opt) == base);
  InvolutionSpec o = opp_involution(h, s);
  TrivializingOp ao = canonical_trivializing(h, b, o);
  CHECK(even_collar_index(h, ao, h, ao, path, opt) == base);
  // a gapped cap on the right reproduces the invertible-extension reading
  Matrix cap = h.dbd() + fam[0].a;
  CHECK(even_collar_index_capped(h, fam[0], cap, opt) == 0);
}

TEST_CASE("collar indices flip sign with the orientation of the path") {
  HodgePackage left = circle_package(6);
  HodgePackage right = circle_package(6, 3.14159265358979);
  BoundarySplit bl = boundary_split(left);
  InvolutionSpec sl = degree_involution_spec(left, bl);
  TrivializingOp al = canonical_trivializing(left, bl, sl);
  TrivializingOp ar;  // antiperiodic circle: no harmonics, nothing to fill
  ar.a = Matrix::Zero(right.total(), right.total());
  Eigen::JacobiSVD<Matrix> sv(right.dbd());
  ar.gap = sv.singularValues().minCoeff();
  REQUIRE(ar.gap > 1e-3);
  EvenModelOptions opt;
  opt.cells = 24;
  FiberPotential fwd = package_path_potential(left, right, opt.length);
  FiberPotential bwd = package_path_potential(right, left, opt.length);
  long fidx = even_collar_index(left, al, right, ar, fwd, opt);
  long bidx = even_collar_index(right, ar, left, al, bwd, opt);
  CHECK(fidx == -bidx);
}

TEST_CASE("mixed parity product checks match the index pairing") {
  Matrix grading = Matrix::Zero(3, 3);
  grading(0, 0) = 1;
  grading(1, 1) = 1;
  grading(2, 2) = -1;
  Matrix op = Matrix::Zero(3, 3);
  op(1, 2) = 1;
  op(2, 1) = 1;
  Mesh1D mesh{1.0, 8};
  MixedProductCheck eo = even_odd_product_check(op, grading, 2, mesh);
  CHECK(eo.expected == 2);
  CHECK(eo.match);
  MixedProductCheck oe = odd_even_product_check(-1, op, grading, mesh);
  CHECK(oe.expected == -1);
  CHECK(oe.match);
}

TEST_CASE("odd-odd products double across the two corner copies") {
  Mesh1D mesh{1.0, 8};
  OddOddProductCheck c = odd_odd_product_check(1, 1, mesh);
  CHECK(c.degreeFirst + c.degreeSecond == 2);
  CHECK(c.match);
}

TEST_CASE("stabilization swaps the two lagrangians along a unitary path") {
  HodgePackage boundary = signed_points_package(2, 2);
  StabilizedLagrangians s = stabilize(boundary, 1);
  CHECK(s.boundary.total() == boundary.total() + 4);
  CHECK(lagrangian_residual(s.boundary, s.split, s.l1) < 1e-9);
  CHECK(lagrangian_residual(s.boundary, s.split, s.l2) < 1e-9);
  const double pi = kTwoPi / 2;
  for (int i = 0; i <= 8; ++i) {
    double t = pi / 2 * i / 8;
    Matrix u = stabilizer_path_unitary(s, t);
    CHECK(is_unitary(u, 1e-9));
    LagrangianData moved{Matrix(u * s.l1.basis), Matrix(u * s.l1.complement)};
    CHECK(lagrangian_residual(s.boundary, s.split, moved) < 1e-8);
  }
  CHECK(residual(stabilizer_path_unitary(s, 0), eye(s.boundary.total())) <
        1e-12);
  // the endpoint carries l1 onto l2
  Matrix uEnd = stabilizer_path_unitary(s, pi / 2);
  Matrix p2 = s.l2.basis * s.l2.basis.adjoint();
  Matrix movedBasis = uEnd * s.l1.basis;
  CHECK(opnorm(Matrix(movedBasis - p2 * movedBasis)) < 1e-9);
  // unbalanced middles cannot be repaired
  CHECK(kind_of([&] { stabilize(signed_points_package(2, 1), 1); }) ==
        ErrorKind::Precondition);
  CHECK(kind_of([&] { stabilize(boundary, 0); }) == ErrorKind::InvalidInput);
}

TEST_CASE("adjoined middle blocks stay valid packages") {
  HodgePackage t2 = product_package(circle_package(3), circle_package(3));
  Eigen::Index before = harmonic_basis(t2, 1).cols();
  HodgePackage bigger = adjoin_middle_block(t2, 2);
  CHECK(bigger.total() == t2.total() + 4);
  CHECK(harmonic_basis(bigger, 1).cols() == before + 4);
  CHECK(kind_of([&] { adjoin_middle_block(circle_package(3), 1); }) ==
        ErrorKind::InvalidInput);
}

TEST_CASE("signature classes cover the even, bounded, and odd readings") {
  SignatureClassResult even = signature_class(sphere2(), trivial_bundle());
  CHECK(!even.oddCase);
  CHECK(even.k0.comp == std::vector<long>{0});
  FlatBundle half = flat_bundle(cyclic_group(2), {1, 0, 0});
  SignatureClassResult odd = signature_class(circle3(), half);
  CHECK(odd.oddCase);
  CHECK(odd.k0.comp == std::vector<long>{0, 0});
  CHECK(odd.k1.comp == std::vector<long>{0, 0});
  CellComplex s3 = simplicial_complex(
      3, {{0, 1, 2, 3}, {0, 1, 2, 4}, {0, 1, 3, 4}, {0, 2, 3, 4}, {1, 2, 3, 4}});
  SignatureClassResult sph = signature_class(s3, trivial_bundle());
  CHECK(sph.oddCase);
  CHECK(sph.k1.comp == std::vector<long>{0});
  CellComplex interval = simplicial_complex(1, {{0, 1}});
  CHECK(kind_of([&] { signature_class(interval, trivial_bundle()); }) ==
        ErrorKind::Unsupported);
}

TEST_CASE("flat bundle labels are validated") {
  CHECK(kind_of([&] { flat_bundle(cyclic_group(2), {0, 2, 0}); }) ==
        ErrorKind::InvalidInput);
  CHECK(kind_of([&] {
          intersection_form(circle3(), trivial_bundle());
        }) == ErrorKind::InvalidInput);
}
