#pragma once

#include <vector>

#include "fuscat/group.hpp"

namespace fuscat {

// A finite abelian group ⊕_i Z/d_i carrying a left action of K by integer
// matrices.  Elements are coordinate vectors (a_1,...,a_r), a_i mod d_i;
// element indices enumerate the tuples lexicographically (first coordinate
// most significant).  Rank 0 is the trivial module.
struct FiniteModule {
    FiniteGroup K;
    std::vector<int> factors;              // ascending divisor chain, all > 1
    std::vector<std::vector<int>> action;  // per k: rank*rank row-major, entry (i,j) mod d_i

    int rank() const { return static_cast<int>(factors.size()); }
    int size() const;
    int exponent() const { return factors.empty() ? 1 : factors.back(); }

    std::vector<int> act(int k, const std::vector<int>& a) const;
    std::vector<int> add(const std::vector<int>& a, const std::vector<int>& b) const;
    std::vector<int> neg(const std::vector<int>& a) const;
    std::vector<int> zero() const { return std::vector<int>(factors.size(), 0); }

    int index_of(const std::vector<int>& a) const;
    std::vector<int> element(int idx) const;

    bool is_trivial_action() const;
    bool same_module(const FiniteModule& other) const;  // K table, factors, action

    // Validates: divisor chain; action matrices reduce mod d_i, are a
    // homomorphism with identity at k=0, respect the cyclic orders
    // (d_i | M_ij·d_j) and are invertible.
    static FiniteModule make(FiniteGroup K, std::vector<int> factors,
                             std::vector<std::vector<int>> action);
    static FiniteModule trivial(FiniteGroup K, std::vector<int> factors);
};

// Pontryagin dual Â = Hom(A, C*) with the action ρ^k(a) := ρ(^k a), realized
// by matrices N(k)_{ji} = M(k)_{ij}·d_j/d_i.  That rule is a priori a right
// action; in every case that arises here (K abelian, or trivial action) it
// is also a left action, and make() re-verifies the homomorphism law so a
// violation cannot pass silently.
FiniteModule dual_module(const FiniteModule& A);

// ⟨ρ, a⟩ ∈ (1/exp)Z/Z as a numerator mod exponent(): Σ_i ρ_i·a_i·(exp/d_i).
int pairing_num(const FiniteModule& A, const std::vector<int>& rho, const std::vector<int>& a);

}  // namespace fuscat
