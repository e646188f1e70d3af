#include "fuscat/doubles.hpp"

#include <string>
#include <utility>

#include "fuscat/errors.hpp"

namespace fuscat {

DoubleAlgebra build_double(const FiniteGroup& H, const TorusCochain& eta) {
    require(eta.q == H.n && eta.deg == 3, "build_double needs a degree-3 cochain on H");
    if (!is_cocycle(H, eta))
        throw NotACocycle("the twisting cochain of a double must be a 3-cocycle");

    const int n = H.n;
    const zmod::Val mask = (zmod::Val{1} << eta.kexp) - 1;
    DoubleAlgebra D{H, eta, std::vector<zmod::Val>(static_cast<size_t>(n) * n * n)};

    for (int g = 0; g < n; ++g)
        for (int x = 0; x < n; ++x) {
            // x^{-1} g x and, per y, (xy)^{-1} g (xy); conj(g, s) = s g s^{-1}
            int gx = H.conj(g, H.inv(x));
            for (int y = 0; y < n; ++y) {
                int xy = H.mul(x, y);
                int gxy = H.conj(g, H.inv(xy));
                int a1[3] = {g, x, y};
                int a2[3] = {x, y, gxy};
                int a3[3] = {x, gx, y};
                D.theta[(static_cast<size_t>(g) * n + x) * n + y] =
                    (eta.eval(a1) + eta.eval(a2) - eta.eval(a3)) & mask;
            }
        }

    // Associativity of the product is exactly the twisted 2-cocycle identity
    // for theta along conjugation-compatible chains; every basis triple with
    // a nonzero product is covered by some (g,x,y,z).
    for (int g = 0; g < n; ++g)
        for (int x = 0; x < n; ++x) {
            int gx = H.conj(g, H.inv(x));
            for (int y = 0; y < n; ++y) {
                int xy = H.mul(x, y);
                for (int z = 0; z < n; ++z) {
                    zmod::Val lhs = (D.theta_at(g, x, y) + D.theta_at(g, xy, z)) & mask;
                    zmod::Val rhs = (D.theta_at(gx, y, z) + D.theta_at(g, x, H.mul(y, z))) & mask;
                    if (lhs != rhs)
                        throw AssociativityFailure(
                            "twisted double product fails associativity at (g,x,y,z) = (" +
                            std::to_string(g) + ", " + std::to_string(x) + ", " +
                            std::to_string(y) + ", " + std::to_string(z) + ")");
                }
            }
        }

    return D;
}

bool is_commutative(const DoubleAlgebra& D) {
    if (!D.H.is_abelian()) return false;
    const int n = D.H.n;
    for (int g = 0; g < n; ++g)
        for (int x = 0; x < n; ++x)
            for (int y = x + 1; y < n; ++y)
                if (D.theta_at(g, x, y) != D.theta_at(g, y, x)) return false;
    return true;
}

DoubleCensus double_census(const EquivalenceCensus& census, const MoritaPartition& part,
                           const CohomOptions& opt) {
    std::vector<CohomologyGroup> h3s;
    h3s.reserve(census.tables.size());
    for (const OrbitTable& t : census.tables)
        h3s.push_back(cohomology_group(t.G, 3, CoeffSpec::torus(), opt));

    DoubleCensus out;
    out.commutative_by_class.resize(part.classes.size());
    for (size_t m = 0; m < part.classes.size(); ++m) {
        int verdict = -1;
        for (int cid : part.classes[m]) {
            auto [gi, oid] = census.locate(cid);
            const OrbitTable& tab = census.tables[gi];
            for (const std::vector<int>& coords : tab.orbits[oid].members) {
                DoubleAlgebra D = build_double(tab.G, h3s[gi].torus_rep(coords));
                int c = is_commutative(D) ? 1 : 0;
                if (verdict == -1)
                    verdict = c;
                else if (verdict != c)
                    throw CensusInconsistent(
                        "commutativity verdict varies inside one Morita class: " +
                        census.label(cid) + " disagrees with an earlier member");
            }
        }
        require(verdict != -1, "empty Morita class in the census");
        out.commutative_by_class[m] = verdict == 1;
        (verdict == 1 ? out.commutative_ids : out.noncommutative_ids)
            .push_back(static_cast<int>(m));
    }
    return out;
}

}  // namespace fuscat
