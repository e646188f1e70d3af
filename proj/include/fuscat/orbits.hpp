#pragma once

#include <string>
#include <vector>

#include "fuscat/cohomology.hpp"
#include "fuscat/group.hpp"

namespace fuscat {

// One Aut(G)-orbit on the classes of H^3(G, C*).  Two cocycles give
// tensor-equivalent pointed categories exactly when their classes lie in the
// same orbit, so these are the tensor-equivalence classes for the group.
struct Orbit {
    int id = 0;                              // position after canonical sort
    std::vector<std::vector<int>> members;   // coordinate vectors, sorted lex
    std::vector<int> canonical;              // lexicographically least member
    int class_order = 0;                     // constant across the orbit
    // Sorted multiset of (subgroup size, restriction class order) over all
    // subgroup conjugacy representatives.  Automorphisms permute the
    // subgroups, so the multiset — unlike any single subgroup's entry — is
    // constant across the orbit, which is re-verified member by member.
    std::vector<std::pair<int, int>> restriction_signature;
    std::string alias;                       // classical name when forced, else ""

    int size() const { return static_cast<int>(members.size()); }
};

struct OrbitTable {
    FiniteGroup G;
    std::vector<int> h3_factors;
    std::vector<std::vector<int>> subgroup_reps;  // conjugacy reps, (size, lex) order
    std::vector<Orbit> orbits;                    // sorted by canonical vector
    std::vector<int> orbit_of_class;              // class index -> orbit id
};

// The induced action on H^3 coordinates, one integer matrix (rank x rank,
// row-major) per automorphism in automorphisms(G) order: pulling a basis
// class back along the automorphism and reading its coordinates gives the
// columns, and the map c -> M.c (mod the invariant factors) is verified to
// permute the classes.  Inner automorphisms always give the identity.
std::vector<std::vector<int>> aut_action(const CohomologyGroup& h3);

// Image coordinates of a class under one aut_action matrix.
std::vector<int> apply_aut(const CohomologyGroup& h3, const std::vector<int>& mat,
                           const std::vector<int>& coords);

// Full orbit decomposition of H^3(G, C*) under Aut(G), with exact class
// orders and the restriction fingerprint of each orbit.
OrbitTable orbit_table(const FiniteGroup& G, const CohomOptions& opt = {});

// All tensor-equivalence classes of pointed categories of dimension 8: the
// orbit tables of the five catalog groups glued behind one global id space
// (census id = group offset + orbit id).
struct EquivalenceCensus {
    std::vector<OrbitTable> tables;  // catalog order
    std::vector<int> offsets;        // per group: first global id
    int total = 0;

    std::pair<int, int> locate(int census_id) const;       // (group idx, orbit id)
    int census_id(int group_idx, int orbit_id) const;
    std::string label(int census_id) const;                // "D8#3" style
};

EquivalenceCensus equivalence_census(const CohomOptions& opt = {});

}  // namespace fuscat
