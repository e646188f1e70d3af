#pragma once

#include <vector>

#include "fuscat/cochain.hpp"
#include "fuscat/group.hpp"
#include "fuscat/module.hpp"

namespace fuscat {

// Extension 1 → A → G → K → 1 built from a normalized 2-cocycle
// F ∈ Z²(K, A):  G = A×K as a set, with
//   (a1, k1)·(a2, k2) = (a1 + ^{k1}a2 + F(k1,k2), k1·k2)
// and element index a_idx·|K| + k.  The table goes through full group
// validation, so a non-cocycle F cannot slip past (associativity ⇔ cocycle).
struct ExtensionDatum {
    FiniteGroup G;
    FiniteModule A;
    ModuleCochain F;
    std::vector<int> embed_A;  // A element index -> G element index
    std::vector<int> proj_K;   // G element index -> K element

    int pair_index(const std::vector<int>& a, int k) const;
};

ExtensionDatum build_extension(const FiniteGroup& K, const FiniteModule& A,
                               const ModuleCochain& F);

// Raw multiplication table of the extension, without the cocycle pre-check;
// feeding it to FiniteGroup::make is the associativity ⇔ cocycle oracle.
std::vector<std::vector<int>> extension_table(const FiniteGroup& K, const FiniteModule& A,
                                              const ModuleCochain& F);

// Dual-side group Ĝ on K×Â:
//   (k1, ρ1)·(k2, ρ2) = (k1·k2, ρ1^{k2} + ρ2 + F̂(k1,k2))
// with element index k·|Â| + ρ_idx.  The construction-time associativity
// check pins the dual-action convention ρ^k(a) := ρ(^k a).
struct DualExtensionDatum {
    FiniteGroup Ghat;
    FiniteModule Ahat;
    ModuleCochain Fhat;
    std::vector<int> proj_K;  // Ĝ element index -> K element

    int pair_index(int k, const std::vector<int>& rho) const;
};

DualExtensionDatum build_dual_group(const FiniteGroup& K, const FiniteModule& Ahat,
                                    const ModuleCochain& Fhat);

// A normal abelian subgroup A ⊴ H together with everything the extension
// picture needs: the quotient K = H/A, the least-element section s with
// s(identity) = identity, the conjugation K-module structure on A, and the
// canonical section 2-cocycle F0(k1,k2) = coords(s(k1)·s(k2)·s(k1k2)^{-1}).
struct NormalAbelianSubgroup {
    std::vector<int> elems;    // sorted subgroup elements of H
    FiniteGroup K;             // H/A
    std::vector<int> proj;     // H -> K
    std::vector<int> section;  // K -> H (least coset element)
    SubgroupView view;
    AbelianStructure Astruct;  // structure of the subgroup as its own group
    FiniteModule A;            // with the conjugation action of K
    ModuleCochain F0;
    std::vector<int> elem_by_index;  // A element index -> H element

    std::vector<int> coords_of(int h) const;  // h must lie in the subgroup
    int elem_of(const std::vector<int>& a) const;
};

NormalAbelianSubgroup normal_abelian_structure(const FiniteGroup& H,
                                               const std::vector<int>& elems);

// All normal abelian subgroups of H, ordered by (size, elements); includes
// the trivial subgroup, and the full group whenever H is abelian.
std::vector<NormalAbelianSubgroup> normal_abelian_subgroups(const FiniteGroup& H);

// The isomorphism ψ: (a,k) ↦ elem(a)·s(k) from the extension built on
// (A, F0) back to H, verified elementwise.
GroupMap canonical_extension_iso(const FiniteGroup& H, const NormalAbelianSubgroup& nas,
                                 const ExtensionDatum& ext);

}  // namespace fuscat
