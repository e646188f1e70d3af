#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fuscat/cochain.hpp"
#include "fuscat/group.hpp"
#include "fuscat/module.hpp"
#include "fuscat/zmod.hpp"

namespace fuscat {

// A single value of a Q/Z-valued cochain in reduced form: numerator odd or
// zero, 0 <= numerator < 2^denominator_exp, value = numerator/2^e mod 1.
struct TorusValue {
    std::int64_t numerator = 0;
    int denominator_exp = 0;

    static TorusValue reduce(std::uint64_t numerator, int kexp);
    std::string str() const;  // "0" or "num/2^e"
};

// Coefficients for group cohomology: the integers or the torus Q/Z ≅ C*
// (both with trivial action), or a finite module with its own action.
struct CoeffSpec {
    enum class Kind { Integral, Torus, Module };
    Kind kind = Kind::Torus;
    std::optional<FiniteModule> module;  // set exactly when kind == Module

    static CoeffSpec integral();
    static CoeffSpec torus();
    static CoeffSpec with_module(FiniteModule A);

    // Stable short string naming the coefficients (used in cache file names).
    std::string key() const;
};

struct CohomOptions {
    int kexp = 12;          // torus values carry denominator 2^kexp
    std::string cache_dir;  // empty disables the on-disk cache
    bool verify = false;    // run additional (redundant) self-checks
};

// H^n(G, coeffs) presented as invariant factors d_1 | d_2 | ... with one
// basis cocycle of exact class order d_l per factor, plus an exact
// coordinate solver.  All arithmetic is exact: torus and module quotients
// are genuine finite quotients of cocycles by coboundaries, and the
// integral group is derived from the torus one degree down through the
// coefficient sequence 0 -> Z -> Q -> Q/Z -> 0 (rational cohomology of a
// finite group vanishes in positive degrees, so the connecting map is an
// isomorphism there).
class CohomologyGroup {
public:
    const FiniteGroup& group() const { return G_; }
    int degree() const { return deg_; }
    const CoeffSpec& coeffs() const { return spec_; }
    int kexp() const { return kexp_; }

    const std::vector<int>& invariant_factors() const { return factors_; }
    int rank() const { return static_cast<int>(factors_.size()); }
    std::int64_t num_classes() const;

    const std::vector<TorusCochain>& torus_basis() const;
    const std::vector<IntCochain>& integral_basis() const;
    const std::vector<ModuleCochain>& module_basis() const;

    // Coordinates (c_l mod d_l) with f - Σ c_l·basis_l a coboundary.
    // Throws NotACocycle when f is not a cocycle of the right shape, and
    // NotInGroup when the solver is infeasible (an internal bug).
    std::vector<int> class_coordinates(const TorusCochain& f) const;
    std::vector<int> class_coordinates(const IntCochain& f) const;
    std::vector<int> class_coordinates(const ModuleCochain& f) const;

    // Class enumeration: little-endian mixed-radix pairing of coordinates.
    std::vector<int> coords_of_class_index(std::int64_t idx) const;
    std::int64_t class_index(const std::vector<int>& coords) const;
    int class_order(const std::vector<int>& coords) const;

    // Representative cocycle Σ c_l·basis_l of a coordinate vector.
    TorusCochain torus_rep(const std::vector<int>& coords) const;
    ModuleCochain module_rep(const std::vector<int>& coords) const;

private:
    friend CohomologyGroup cohomology_group(const FiniteGroup&, int, const CoeffSpec&,
                                            const CohomOptions&);
    friend struct CohomBuilder;

    FiniteGroup G_;
    int deg_ = 0;
    CoeffSpec spec_;
    int kexp_ = 0;

    std::vector<int> factors_;
    std::vector<TorusCochain> tbasis_;
    std::vector<IntCochain> ibasis_;
    std::vector<ModuleCochain> mbasis_;

    // Coordinate solver for every kind.  Torus: cocycles/coboundaries mod
    // 2^kexp.  Integral: the classes of the basis cocycles taken mod 2^kexp
    // generate a quotient isomorphic to H^n (a multiple of a cocycle is an
    // integral coboundary iff it is one mod 2^kexp, k large enough), so the
    // same machinery yields exact integral coordinates.  Module: embedded
    // coordinates mod 2^emb_mexp_.
    zmod::AbelianQuotient aq_;
    int emb_mexp_ = 0;  // module kind: exponent of the embedding modulus
};

// Compute H^n(G, coeffs).  Degree 0 is rejected for integral and torus
// coefficients (the answer is the infinite group Z resp. Q/Z); integral and
// torus coefficients also require |G| to be a power of two (the working
// ring is 2-adic).  n <= 5; |G| <= 16 for torus/module coefficients and
// |G| <= 8 for integral coefficients in degree >= 4.  Each result is
// recomputed with one extra bit of working precision and the invariant
// factors are asserted identical (stabilization check).
CohomologyGroup cohomology_group(const FiniteGroup& G, int n, const CoeffSpec& coeffs,
                                 const CohomOptions& opt = {});

// H^3(G, C*) for |G| <= 8.  Each basis cochain f_l is an exact cocycle with
// denominator 2^kexp, and δ(lift(f_l))/1 is 2^kexp times the corresponding
// integral 4-cocycle basis element: f_l literally solves δf = c_l over the
// rationals for the degree-4 integral basis, realizing H^3(G,C*) ≅ H^4(G,Z).
CohomologyGroup torus_h3(const FiniteGroup& G, const CohomOptions& opt = {});

// Invariant factors of H^n(Q8, Z) for 1 <= n <= 4 from the explicit
// 4-periodic free resolution over the group ring ZQ8 (dualize with
// Hom_{ZQ8}(-, Z), then integer Smith normal form).  Entirely independent
// of the bar-resolution pipeline; the composites of consecutive
// differentials are verified to vanish in the group ring.
std::vector<int> q8_periodic_cohomology(int n);
std::vector<int> q8_periodic_h4();

}  // namespace fuscat
