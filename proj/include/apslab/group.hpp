#pragma once

#include "apslab/kclass.hpp"

namespace apslab {

// Finite group as a multiplication table. Element 0 is the identity.
struct FiniteGroup {
  int order = 0;
  std::vector<std::vector<int>> mul;  // mul[a][b] = ab
  std::vector<int> inv;
  std::vector<std::string> names;
};

// Table sanity: Latin square, identity at 0, inverses, associativity.
void check_group(const FiniteGroup& g);

FiniteGroup cyclic_group(int n);
FiniteGroup symmetric_s3();
// Element (a, b) has index a * h.order + b.
FiniteGroup product_group(const FiniteGroup& g, const FiniteGroup& h);

// Character data. Irreps are ordered canonically: the trivial irrep first,
// then by degree, then lexicographically by rounded character values, so
// block indices of K-classes over C[G] are reproducible.
struct CharacterTable {
  int classes = 0;
  std::vector<int> classOf;    // element -> class
  std::vector<int> classRep;   // class -> representative element
  std::vector<int> classSize;
  std::vector<int> degree;     // irrep degrees
  Matrix table;                // table(i, c) = chi_i on class c
};

// Burnside-Dixon: common eigenvectors of the class algebra.
CharacterTable character_table(const FiniteGroup& g);

// Projector onto the isotypic component of irrep i for a unitary action
// given by one matrix per group element: (d_i/|G|) sum_g conj(chi_i(g)) U_g.
Matrix isotypic_projector(const FiniteGroup& g, const CharacterTable& ct,
                          int irrep, const std::vector<Matrix>& action);

// Pairing of factor irreps with product-group irreps: entry (i, j) is the
// index k with chi_k = chi_i x chi_j on product_group(g, h). Bijective.
std::vector<std::vector<int>> irrep_pairing(const FiniteGroup& g,
                                            const CharacterTable& tg,
                                            const FiniteGroup& h,
                                            const CharacterTable& th,
                                            const FiniteGroup& gh,
                                            const CharacterTable& tgh);

// Relabel a class over C[G1] (x) C[G2] (block (i, j) at i * n2 + j, the
// k0_kronecker order) as a class over C[G1 x G2].
K0Class phi_pushforward(const K0Class& c, const FiniteGroup& g,
                        const CharacterTable& tg, const FiniteGroup& h,
                        const CharacterTable& th, const FiniteGroup& gh,
                        const CharacterTable& tgh);

}  // namespace apslab
