#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fuscat/errors.hpp"

namespace fuscat {

// A finite group given by its full multiplication table.  Element 0 is
// always the two-sided identity.  Instances are immutable after
// construction and safe to share across threads.
struct FiniteGroup {
    std::string name;
    int n = 1;                   // order
    std::vector<int> table;      // n*n row-major, table[a*n+b] = a*b
    std::vector<int> inverse;    // inverse[a]*a = a*inverse[a] = 0
    std::vector<int> elt_order;  // multiplicative order of each element

    int mul(int a, int b) const { return table[a * n + b]; }
    int inv(int a) const { return inverse[a]; }
    // x g x^{-1}
    int conj(int g, int x) const { return mul(mul(x, g), inverse[x]); }
    int power(int g, int e) const;
    bool is_abelian() const;

    // FNV-1a over (order, table); independent of the name label.
    std::uint64_t table_hash() const;

    // Validates shape, Latin-square rows/columns, identity, inverses and
    // associativity, in that order; error messages name the first
    // violating tuple.
    static FiniteGroup make(std::string name, const std::vector<std::vector<int>>& rows);
    static FiniteGroup make_flat(std::string name, int n, std::vector<int> flat);
};

// A map between groups, stored as the image of every element.  Whether it
// is a homomorphism/bijection is a property of how it was produced; the
// factories below only hand out verified ones.
struct GroupMap {
    std::vector<int> images;
    int operator()(int g) const { return images[g]; }
    int size() const { return static_cast<int>(images.size()); }
};

GroupMap identity_map(int n);
// (f after g)(x) = f(g(x)); g maps into the domain of f.
GroupMap compose_maps(const GroupMap& f, const GroupMap& g);
// Inverse of a bijection.
GroupMap inverse_map(const GroupMap& f);

// Greedy generating sequence: repeatedly adjoin the least element outside
// the closure of the ones picked so far.
std::vector<int> generator_sequence(const FiniteGroup& G);

// Sorted element set of the subgroup generated by gens.
std::vector<int> subgroup_closure(const FiniteGroup& G, const std::vector<int>& gens);

// Complete automorphism list, sorted lexicographically by image vector.
std::vector<GroupMap> automorphisms(const FiniteGroup& G);

// Some isomorphism G -> H, or absent.  Deterministic: generator images
// are tried in ascending order and the first complete map wins.
std::optional<GroupMap> find_isomorphism(const FiniteGroup& G, const FiniteGroup& H);

// All subgroups as sorted element sets, ordered by (size, elements).
std::vector<std::vector<int>> subgroups(const FiniteGroup& G);

bool is_normal(const FiniteGroup& G, const std::vector<int>& S);

// One representative per conjugacy class of subgroups, each the
// lexicographically least member of its class, ordered by (size, elements).
std::vector<std::vector<int>> subgroup_conjugacy_reps(const FiniteGroup& G);

// A subgroup relabelled as a standalone group; elements are renumbered in
// ascending order of their index in the parent (so the identity stays 0).
struct SubgroupView {
    FiniteGroup S;
    std::vector<int> to_parent;    // S-index -> parent index
    std::vector<int> from_parent;  // parent index -> S-index, -1 outside
};
SubgroupView subgroup_view(const FiniteGroup& G, const std::vector<int>& elems,
                           const std::string& name = "");

// Quotient by a normal subgroup.  Cosets are labelled 0..m-1 in ascending
// order of their least element, so the identity coset is 0.
struct Quotient {
    FiniteGroup Q;
    std::vector<int> proj;       // parent index -> coset label
    std::vector<int> coset_rep;  // coset label -> least element of the coset
};
Quotient quotient_by_normal(const FiniteGroup& G, const std::vector<int>& N);

// Decomposition of an abelian group as a direct product of cyclic groups
// Z/d_1 x ... x Z/d_r with d_1 | d_2 | ... (all > 1; r = 0 for the
// trivial group).  coords(g) are the exponents of g on the generators.
struct AbelianStructure {
    std::vector<int> factors;
    std::vector<int> gens;
    std::vector<std::vector<int>> coord_table;
    const std::vector<int>& coords(int g) const { return coord_table[g]; }
    int rank() const { return static_cast<int>(factors.size()); }
};
AbelianStructure abelian_structure(const FiniteGroup& G);

FiniteGroup cyclic_group(int n, const std::string& name = "");
// Index of (a, b) is a*|B| + b.
FiniteGroup direct_product(const FiniteGroup& A, const FiniteGroup& B,
                           const std::string& name = "");

// The five groups of order 8 with frozen element orderings:
//   Z2^3   idx = 4*x0 + 2*x1 + x2, componentwise addition (XOR of indices)
//   Z4xZ2  idx = 2*a + b for (a, b) in Z/4 x Z/2
//   Z8     idx = the element itself
//   D8     1, a, a^2, a^3, b, ba, ba^2, ba^3   (b a b = a^{-1})
//   Q8     1, -1, i, -i, j, -j, k, -k
const std::vector<FiniteGroup>& catalog_order8();

// Catalog lookup by name; tolerant of case and separators ("Z/4 x Z/2"
// finds Z4xZ2).  Returns -1 / nullptr when the name is unknown.
int catalog_index(const std::string& name);
const FiniteGroup* find_catalog_group(const std::string& name);

// JSON group files: {"name": string, "order": n, "table": [[...]]}.
FiniteGroup load_group_json(const std::string& path);
std::string group_to_json(const FiniteGroup& G);

}  // namespace fuscat
