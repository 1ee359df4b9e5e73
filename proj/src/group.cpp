#include "apslab/group.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace apslab {

void check_group(const FiniteGroup& g) {
  const int n = g.order;
  require(n >= 1, ErrorKind::InvalidInput, "group: order must be positive");
  require(static_cast<int>(g.mul.size()) == n &&
              static_cast<int>(g.inv.size()) == n,
          ErrorKind::InvalidInput, "group: table size mismatch");
  for (int a = 0; a < n; ++a) {
    require(static_cast<int>(g.mul[a].size()) == n, ErrorKind::InvalidInput,
            "group: table row size mismatch");
    require(g.mul[0][a] == a && g.mul[a][0] == a, ErrorKind::InvalidInput,
            "group: element 0 is not the identity");
    require(g.inv[a] >= 0 && g.inv[a] < n && g.mul[a][g.inv[a]] == 0,
            ErrorKind::InvalidInput, "group: bad inverse");
    std::vector<bool> seen(n, false);
    for (int b = 0; b < n; ++b) {
      int ab = g.mul[a][b];
      require(ab >= 0 && ab < n && !seen[ab], ErrorKind::InvalidInput,
              "group: row is not a permutation");
      seen[ab] = true;
    }
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        require(g.mul[g.mul[a][b]][c] == g.mul[a][g.mul[b][c]],
                ErrorKind::InvalidInput, "group: associativity fails");
}

FiniteGroup cyclic_group(int n) {
  require(n >= 1, ErrorKind::InvalidInput, "cyclic_group: n >= 1");
  FiniteGroup g;
  g.order = n;
  g.mul.assign(n, std::vector<int>(n));
  g.inv.assign(n, 0);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) g.mul[a][b] = (a + b) % n;
    g.inv[a] = (n - a) % n;
    g.names.push_back("r" + std::to_string(a));
  }
  return g;
}

FiniteGroup symmetric_s3() {
  // permutations of {0,1,2} in lexicographic one-line order; 012 is identity
  const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                           {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  auto indexOf = [&perms](const int p[3]) {
    for (int i = 0; i < 6; ++i)
      if (perms[i][0] == p[0] && perms[i][1] == p[1] && perms[i][2] == p[2])
        return i;
    return -1;
  };
  FiniteGroup g;
  g.order = 6;
  g.mul.assign(6, std::vector<int>(6));
  g.inv.assign(6, 0);
  for (int a = 0; a < 6; ++a) {
    for (int b = 0; b < 6; ++b) {
      int ab[3];  // (ab)(x) = a(b(x))
      for (int x = 0; x < 3; ++x) ab[x] = perms[a][perms[b][x]];
      g.mul[a][b] = indexOf(ab);
    }
    int ai[3];
    for (int x = 0; x < 3; ++x) ai[perms[a][x]] = x;
    g.inv[a] = indexOf(ai);
    g.names.push_back(std::string() + char('0' + perms[a][0]) +
                      char('0' + perms[a][1]) + char('0' + perms[a][2]));
  }
  return g;
}

FiniteGroup product_group(const FiniteGroup& g, const FiniteGroup& h) {
  FiniteGroup p;
  p.order = g.order * h.order;
  p.mul.assign(p.order, std::vector<int>(p.order));
  p.inv.assign(p.order, 0);
  auto id = [&h](int a, int b) { return a * h.order + b; };
  for (int a1 = 0; a1 < g.order; ++a1)
    for (int a2 = 0; a2 < h.order; ++a2) {
      for (int b1 = 0; b1 < g.order; ++b1)
        for (int b2 = 0; b2 < h.order; ++b2)
          p.mul[id(a1, a2)][id(b1, b2)] = id(g.mul[a1][b1], h.mul[a2][b2]);
      p.inv[id(a1, a2)] = id(g.inv[a1], h.inv[a2]);
      std::string na = a1 < (int)g.names.size() ? g.names[a1] : std::to_string(a1);
      std::string nb = a2 < (int)h.names.size() ? h.names[a2] : std::to_string(a2);
      p.names.push_back("(" + na + "," + nb + ")");
    }
  return p;
}

namespace {

struct Classes {
  std::vector<int> classOf, rep, size;
};

Classes conjugacy_classes(const FiniteGroup& g) {
  Classes c;
  c.classOf.assign(g.order, -1);
  for (int a = 0; a < g.order; ++a) {
    if (c.classOf[a] >= 0) continue;
    int k = static_cast<int>(c.rep.size());
    c.rep.push_back(a);
    c.size.push_back(0);
    for (int x = 0; x < g.order; ++x) {
      int y = g.mul[g.mul[x][a]][g.inv[x]];
      if (c.classOf[y] < 0) {
        c.classOf[y] = k;
        ++c.size[k];
      }
    }
  }
  return c;
}

// round characters for canonical ordering keys only
long key_round(double x) { return std::lround(x * 1e6); }

}  // namespace

CharacterTable character_table(const FiniteGroup& g) {
  check_group(g);
  Classes cls = conjugacy_classes(g);
  const int nc = static_cast<int>(cls.rep.size());

  // class algebra structure constants: C_i C_j = sum_k a_{ijk} C_k
  std::vector<std::vector<std::vector<double>>> a(
      nc, std::vector<std::vector<double>>(nc, std::vector<double>(nc, 0.0)));
  for (int i = 0; i < nc; ++i)
    for (int k = 0; k < nc; ++k) {
      int z = cls.rep[k];
      for (int x = 0; x < g.order; ++x) {
        if (cls.classOf[x] != i) continue;
        int y = g.mul[g.inv[x]][z];
        a[i][cls.classOf[y]][k] += 1.0;
      }
    }

  // common eigenvectors of a generic combination of class matrices
  for (int attempt = 0; attempt < 8; ++attempt) {
    Matrix m = Matrix::Zero(nc, nc);
    for (int i = 0; i < nc; ++i) {
      Complex ci(std::cos(2.1 + 1.7 * i + 0.9 * attempt),
                 std::sin(1.3 + 0.7 * i + 1.1 * attempt));
      for (int j = 0; j < nc; ++j)
        for (int k = 0; k < nc; ++k) m(j, k) += ci * a[i][j][k];
    }
    Eigen::ComplexEigenSolver<Matrix> es(m);
    if (es.info() != Eigen::Success) continue;

    Matrix table(nc, nc);
    std::vector<int> degree(nc);
    bool ok = true;
    for (int r = 0; r < nc && ok; ++r) {
      Vector v = es.eigenvectors().col(r);
      if (std::abs(v(0)) < 1e-10) {  // identity class component must be 1
        ok = false;
        break;
      }
      v /= v(0);
      double s = 0;
      for (int k = 0; k < nc; ++k) s += std::norm(v(k)) / cls.size[k];
      double deg = std::sqrt(g.order / s);
      degree[r] = static_cast<int>(std::lround(deg));
      if (std::abs(deg - degree[r]) > 1e-6 || degree[r] < 1) {
        ok = false;
        break;
      }
      for (int k = 0; k < nc; ++k)
        table(r, k) = v(k) * (static_cast<double>(degree[r]) / cls.size[k]);
    }
    if (!ok) continue;

    // first orthogonality, exact up to roundoff
    for (int r = 0; r < nc && ok; ++r)
      for (int s = 0; s < nc && ok; ++s) {
        Complex ip = 0;
        for (int k = 0; k < nc; ++k)
          ip += static_cast<double>(cls.size[k]) * table(r, k) *
                std::conj(table(s, k));
        ip /= static_cast<double>(g.order);
        if (std::abs(ip - (r == s ? 1.0 : 0.0)) > 1e-8) ok = false;
      }
    long sq = 0;
    for (int r = 0; r < nc; ++r) sq += static_cast<long>(degree[r]) * degree[r];
    if (!ok || sq != g.order) continue;

    // canonical irrep order: trivial first, then degree, then rounded values
    std::vector<int> ord(nc);
    for (int r = 0; r < nc; ++r) ord[r] = r;
    auto keyLess = [&](int r, int s) {
      bool tr = (table.row(r).array() - Complex(1, 0)).matrix().norm() < 1e-8;
      bool ts = (table.row(s).array() - Complex(1, 0)).matrix().norm() < 1e-8;
      if (tr != ts) return tr;
      if (degree[r] != degree[s]) return degree[r] < degree[s];
      for (int k = 0; k < nc; ++k) {
        long rr = key_round(table(r, k).real()), sr = key_round(table(s, k).real());
        if (rr != sr) return rr > sr;
        long ri = key_round(table(r, k).imag()), si = key_round(table(s, k).imag());
        if (ri != si) return ri > si;
      }
      return false;
    };
    std::sort(ord.begin(), ord.end(), keyLess);

    CharacterTable ct;
    ct.classes = nc;
    ct.classOf = cls.classOf;
    ct.classRep = cls.rep;
    ct.classSize = cls.size;
    ct.table = Matrix(nc, nc);
    ct.degree.resize(nc);
    for (int r = 0; r < nc; ++r) {
      ct.table.row(r) = table.row(ord[r]);
      ct.degree[r] = degree[ord[r]];
    }
    return ct;
  }
  fail(ErrorKind::Precondition,
       "character_table: class-matrix eigenvectors did not separate");
}

Matrix isotypic_projector(const FiniteGroup& g, const CharacterTable& ct,
                          int irrep, const std::vector<Matrix>& action) {
  require(irrep >= 0 && irrep < ct.classes, ErrorKind::InvalidInput,
          "isotypic_projector: irrep index out of range");
  require(static_cast<int>(action.size()) == g.order, ErrorKind::InvalidInput,
          "isotypic_projector: one action matrix per element required");
  Matrix p = Matrix::Zero(action[0].rows(), action[0].cols());
  for (int x = 0; x < g.order; ++x)
    p += std::conj(ct.table(irrep, ct.classOf[x])) * action[x];
  p *= static_cast<double>(ct.degree[irrep]) / g.order;
  require(residual((p * p).eval(), p) < 1e-8, ErrorKind::Precondition,
          "isotypic_projector: action is not a representation");
  return p;
}

std::vector<std::vector<int>> irrep_pairing(const FiniteGroup& g,
                                            const CharacterTable& tg,
                                            const FiniteGroup& h,
                                            const CharacterTable& th,
                                            const FiniteGroup& gh,
                                            const CharacterTable& tgh) {
  require(gh.order == g.order * h.order, ErrorKind::InvalidInput,
          "irrep_pairing: product group has the wrong order");
  require(tgh.classes == tg.classes * th.classes, ErrorKind::InvalidInput,
          "irrep_pairing: product group has the wrong class count");
  std::vector<std::vector<int>> pairing(tg.classes,
                                        std::vector<int>(th.classes, -1));
  std::vector<bool> used(tgh.classes, false);
  for (int i = 0; i < tg.classes; ++i)
    for (int j = 0; j < th.classes; ++j) {
      for (int k = 0; k < tgh.classes; ++k) {
        Complex ip = 0;
        for (int x = 0; x < g.order; ++x)
          for (int y = 0; y < h.order; ++y) {
            Complex prod = tg.table(i, tg.classOf[x]) * th.table(j, th.classOf[y]);
            ip += prod * std::conj(tgh.table(k, tgh.classOf[x * h.order + y]));
          }
        ip /= static_cast<double>(gh.order);
        if (std::abs(ip - 1.0) < 1e-6) {
          require(!used[k], ErrorKind::Precondition,
                  "irrep_pairing: pairing is not injective");
          pairing[i][j] = k;
          used[k] = true;
          break;
        }
      }
      require(pairing[i][j] >= 0, ErrorKind::Precondition,
              "irrep_pairing: factor product is not a product irrep");
    }
  return pairing;
}

K0Class phi_pushforward(const K0Class& c, const FiniteGroup& g,
                        const CharacterTable& tg, const FiniteGroup& h,
                        const CharacterTable& th, const FiniteGroup& gh,
                        const CharacterTable& tgh) {
  require(static_cast<int>(c.comp.size()) == tg.classes * th.classes,
          ErrorKind::InvalidInput,
          "phi_pushforward: class has the wrong block count");
  auto pairing = irrep_pairing(g, tg, h, th, gh, tgh);
  K0Class out;
  out.comp.assign(tgh.classes, 0);
  for (int i = 0; i < tg.classes; ++i)
    for (int j = 0; j < th.classes; ++j)
      out.comp[pairing[i][j]] = c.comp[i * th.classes + j];
  return out;
}

}  // namespace apslab
