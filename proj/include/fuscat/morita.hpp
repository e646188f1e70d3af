#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fuscat/cohomology.hpp"
#include "fuscat/extension.hpp"
#include "fuscat/orbits.hpp"

namespace fuscat {

// One module context: a group K acting on a finite abelian group A with
// |A|·|K| = 8.  Every group of order 8 arises as an extension A ⋊_F K in at
// least one of these contexts, and the dual-side data (F̂ on the Pontryagin
// dual) produces the categories weak-Morita-equivalent to Vect(A⋊K, ω).
struct ModuleContext {
    FiniteGroup K;
    FiniteModule A;
    std::string name;
};

// The sixteen contexts with |A|·|K| = 8: the three abelian groups over the
// trivial K; Z2 acting on Z4 (trivially and by inversion) and on Z2xZ2 (the
// four involutive matrices); Z4 and Z2xZ2 acting trivially on Z2; and the
// five catalog groups with A = 1.
const std::vector<ModuleContext>& module_contexts();

// The base 3-cocycle candidate on G = A ⋊_F K:
//   ω₀((a1,k1),(a2,k2),(a3,k3)) = <F̂(k1,k2), a3>.
TorusCochain omega_zero(const ExtensionDatum& ext, const ModuleCochain& Fhat, int kexp);

// The correction 3-cochain ε on K with δ(ω₀ + infl ε) = 0, i.e. a solution
// of δε = <F̂(k1,k2), F(k3,k4)>.  Returns the deterministic canonical
// solution, or nothing exactly when the obstruction class in H⁴(K, C*) is
// nonzero (for |K| <= 4 a mod-2^kexp solve is complete: any Q/Z solution can
// be corrected to one with denominator dividing 2^kexp).
std::optional<TorusCochain> solve_epsilon(const FiniteGroup& K, const FiniteModule& A,
                                          const ModuleCochain& F, const ModuleCochain& Fhat,
                                          int kexp);

// The matched pair of 3-cocycles:
//   ω = ω₀ + infl(ε+κ)            on  G = A ⋊_F K
//   ω̂((k1,ρ1),(k2,ρ2),(k3,ρ3)) = (ε+κ)(k1,k2,k3) + <ρ1, F(k2,k3)>  on  Ĝ
// Vect(G, ω) and Vect(Ĝ, ω̂) are weak Morita equivalent.  Both are verified
// cocycles (NotACocycle otherwise).
struct OmegaPair {
    ExtensionDatum ext;
    DualExtensionDatum dual;
    TorusCochain omega;      // on ext.G
    TorusCochain omega_hat;  // on dual.Ghat
};

OmegaPair omega_pair(const FiniteGroup& K, const FiniteModule& A, const ModuleCochain& F,
                     const ModuleCochain& Fhat, const TorusCochain& epsilon,
                     const TorusCochain& kappa);

// Ω(H; A) for a normal abelian subgroup A ⊴ H: the set of classes in
// H³(H, C*) realized by ω built over the section cocycle of that subgroup,
// sweeping all ([F̂], [κ]) (with ε re-solved per F̂) and transported to H
// along the canonical extension isomorphism.  The set is verified to be a
// subgroup of the coordinate group.
struct OmegaSubgroup {
    NormalAbelianSubgroup nas;
    std::vector<std::vector<int>> classes;  // sorted coordinate vectors
};

OmegaSubgroup omega_subgroup(const FiniteGroup& H, const std::vector<int>& elems,
                             const CohomOptions& opt = {});

// One weak-Morita relation between census classes, with everything needed
// to re-validate it from scratch.
struct MoritaWitness {
    int context_id = -1;                       // index into module_contexts()
    int f_class = -1, fhat_class = -1, kappa_class = -1;
    ModuleCochain F;                           // valued in A
    ModuleCochain Fhat;                        // valued in dual(A)
    TorusCochain epsilon;                      // 3-cochain on K
    TorusCochain kappa;                        // 3-cocycle on K
    GroupMap phi;                              // A⋊K -> catalog group
    GroupMap phihat;                           // dual group -> catalog group
    int group1 = -1, group2 = -1;              // catalog indices
    std::vector<int> coords1, coords2;         // H³ coordinates after transport
};

struct MoritaEdge {
    int census1 = -1, census2 = -1;
    MoritaWitness witness;
};

// Every edge produced by the sixteen contexts: one per (context, [F], [F̂]
// with solvable ε, [κ]), in that deterministic sweep order.
std::vector<MoritaEdge> enumerate_edges(const EquivalenceCensus& census,
                                        const CohomOptions& opt = {});

// Union-find closure of the census under an edge set.
struct MoritaPartition {
    std::vector<int> class_of;              // census id -> class id
    std::vector<std::vector<int>> classes;  // class id -> sorted census ids
};

MoritaPartition morita_partition(const EquivalenceCensus& census,
                                 const std::vector<MoritaEdge>& edges);

}  // namespace fuscat
