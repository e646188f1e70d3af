#pragma once

#include <vector>

#include "fuscat/cochain.hpp"
#include "fuscat/cohomology.hpp"
#include "fuscat/group.hpp"
#include "fuscat/morita.hpp"
#include "fuscat/orbits.hpp"

namespace fuscat {

// The twisted Drinfeld double D^eta(H), kept only as an associative algebra.
// The basis is indexed by pairs (g, x) in H x H and the product is
//
//   (d_g (x) x) (d_h (x) y) = [g = x h x^{-1}] theta_g(x,y) (d_g (x) xy)
//
// with the phase, written additively in Q/Z with denominator 2^kexp,
//
//   theta_g(x,y) = eta(g,x,y) + eta(x,y,(xy)^{-1}g(xy)) - eta(x,x^{-1}gx,y).
//
// No coproduct, R-matrix or associator is stored.
struct DoubleAlgebra {
    FiniteGroup H;
    TorusCochain eta;              // the twisting 3-cocycle
    std::vector<zmod::Val> theta;  // theta[(g*n + x)*n + y]

    zmod::Val theta_at(int g, int x, int y) const {
        size_t n = static_cast<size_t>(H.n);
        return theta[(static_cast<size_t>(g) * n + x) * n + y];
    }
};

// Tabulates theta and proves associativity exhaustively: the twisted
// 2-cocycle identity
//
//   theta_g(x,y) + theta_g(xy,z) = theta_{x^{-1}gx}(y,z) + theta_g(x,yz)
//
// is required for every (g,x,y,z); a violation throws AssociativityFailure
// naming the first offending tuple (it would signal a convention bug, never
// a property of the input).  eta must be a 3-cocycle on H; eta evaluates to
// zero on identity arguments, so theta comes out normalized,
// theta_g(1,y) = theta_g(x,1) = 0.
DoubleAlgebra build_double(const FiniteGroup& H, const TorusCochain& eta);

// True iff all basis products commute.  For nonabelian H two basis elements
// whose group parts do not commute already have products supported on
// different basis vectors, so this holds iff H is abelian and
// theta_g(x,y) = theta_g(y,x) for all g, x, y.
bool is_commutative(const DoubleAlgebra& D);

// Commutativity census over Morita classes.  Every cohomology class of
// every orbit inside a Morita class is realized as a double and judged; the
// verdict must come out constant across the whole Morita class (members
// from different groups included), else CensusInconsistent is thrown.
struct DoubleCensus {
    std::vector<bool> commutative_by_class;  // indexed by Morita class id
    std::vector<int> commutative_ids;        // Morita class ids, ascending
    std::vector<int> noncommutative_ids;

    int commutative_count() const { return static_cast<int>(commutative_ids.size()); }
    int noncommutative_count() const { return static_cast<int>(noncommutative_ids.size()); }
};

DoubleCensus double_census(const EquivalenceCensus& census, const MoritaPartition& part,
                           const CohomOptions& opt = {});

}  // namespace fuscat
