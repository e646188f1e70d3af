#include "fuscat/morita.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "fuscat/errors.hpp"
#include "fuscat/zmod.hpp"

namespace fuscat {

namespace {

// <rho, a> as a numerator mod 2^kexp.
zmod::Val pairing_mod(const FiniteModule& A, const std::vector<int>& rho,
                      const std::vector<int>& a, int kexp) {
    std::int64_t exp = A.exponent();
    std::int64_t mod = std::int64_t{1} << kexp;
    require(mod % exp == 0, "pairing denominator must divide 2^kexp");
    std::int64_t num = pairing_num(A, rho, a);
    return static_cast<zmod::Val>((num * (mod / exp)) % mod);
}

// The obstruction 4-cochain t(k1,k2,k3,k4) = <F̂(k1,k2), F(k3,k4)> on K.
TorusCochain obstruction_cochain(const FiniteGroup& K, const FiniteModule& A,
                                 const ModuleCochain& F, const ModuleCochain& Fhat,
                                 int kexp) {
    TorusCochain t = zero_torus_cochain(K.n, 4, kexp);
    TupleSpace ts{K.n, 4};
    int g[4];
    for (std::int64_t idx = 0; idx < ts.size(); ++idx) {
        ts.tuple(idx, g);
        std::vector<int> rho = Fhat.eval(g);          // uses g[0], g[1]
        std::vector<int> a = F.eval(g + 2);           // uses g[2], g[3]
        t.v[static_cast<size_t>(idx)] = pairing_mod(A, rho, a, kexp);
    }
    return t;
}

void check_pair_shapes(const FiniteGroup& K, const FiniteModule& A, const ModuleCochain& F,
                       const ModuleCochain& Fhat) {
    require(A.K.table == K.table, "module does not live over the given K");
    require(F.deg == 2 && F.A.same_module(A), "F must be a 2-cochain valued in A");
    require(Fhat.deg == 2 && Fhat.A.same_module(dual_module(A)),
            "F̂ must be a 2-cochain valued in the dual of A");
}

}  // namespace

const std::vector<ModuleContext>& module_contexts() {
    static const std::vector<ModuleContext> ctxs = [] {
        std::vector<ModuleContext> v;
        FiniteGroup one = cyclic_group(1, "1");
        FiniteGroup z2 = cyclic_group(2, "Z2");
        FiniteGroup z4 = cyclic_group(4, "Z4");
        FiniteGroup klein =
            direct_product(cyclic_group(2, "Z2"), cyclic_group(2, "Z2"), "Z2xZ2");
        v.push_back({one, FiniteModule::trivial(one, {8}), "Z8 over the trivial group"});
        v.push_back({one, FiniteModule::trivial(one, {2, 4}), "Z4xZ2 over the trivial group"});
        v.push_back({one, FiniteModule::trivial(one, {2, 2, 2}), "Z2^3 over the trivial group"});
        v.push_back({z2, FiniteModule::trivial(z2, {4}), "Z2 acting trivially on Z4"});
        v.push_back({z2, FiniteModule::make(z2, {4}, {{1}, {3}}), "Z2 inverting Z4"});
        v.push_back({z2, FiniteModule::trivial(z2, {2, 2}), "Z2 acting trivially on Z2xZ2"});
        v.push_back({z2, FiniteModule::make(z2, {2, 2}, {{1, 0, 0, 1}, {0, 1, 1, 0}}),
                     "Z2 swapping the factors of Z2xZ2"});
        v.push_back({z2, FiniteModule::make(z2, {2, 2}, {{1, 0, 0, 1}, {1, 1, 0, 1}}),
                     "Z2 shearing Z2xZ2 (upper)"});
        v.push_back({z2, FiniteModule::make(z2, {2, 2}, {{1, 0, 0, 1}, {1, 0, 1, 1}}),
                     "Z2 shearing Z2xZ2 (lower)"});
        v.push_back({z4, FiniteModule::trivial(z4, {2}), "Z4 acting trivially on Z2"});
        v.push_back({klein, FiniteModule::trivial(klein, {2}), "Z2xZ2 acting trivially on Z2"});
        for (const FiniteGroup& G : catalog_order8())
            v.push_back({G, FiniteModule::trivial(G, {}), G.name + " with trivial fiber"});
        require(v.size() == 16, "context list must have sixteen entries");
        return v;
    }();
    return ctxs;
}

TorusCochain omega_zero(const ExtensionDatum& ext, const ModuleCochain& Fhat, int kexp) {
    const FiniteModule& A = ext.A;
    const FiniteGroup& G = ext.G;
    check_pair_shapes(A.K, A, ext.F, Fhat);
    int kn = A.K.n;
    TorusCochain w = zero_torus_cochain(G.n, 3, kexp);
    TupleSpace ts{G.n, 3};
    int g[3];
    for (std::int64_t idx = 0; idx < ts.size(); ++idx) {
        ts.tuple(idx, g);
        int args[2] = {ext.proj_K[g[0]], ext.proj_K[g[1]]};
        std::vector<int> a3 = A.element(g[2] / kn);
        w.v[static_cast<size_t>(idx)] = pairing_mod(A, Fhat.eval(args), a3, kexp);
    }
    return w;
}

std::optional<TorusCochain> solve_epsilon(const FiniteGroup& K, const FiniteModule& A,
                                          const ModuleCochain& F, const ModuleCochain& Fhat,
                                          int kexp) {
    check_pair_shapes(K, A, F, Fhat);
    TorusCochain t = obstruction_cochain(K, A, F, Fhat, kexp);
    require(is_cocycle(K, t), "the pairing of two 2-cocycles must be a 4-cocycle");
    // Solve δε = t with denominator 2^kexp.  This is complete, not just
    // sufficient: if δx = t has any Q/Z-valued solution x, then 2^{m+e}·x is
    // a coboundary δw (its class is killed by the exponent of H³(K, C*)),
    // and x - δ(w/2^{m+e}) is a solution with denominator 2^{m+e} | 2^kexp.
    zmod::Mat d3 = bar_matrix_mod(K, 3, kexp);
    std::optional<std::vector<zmod::Val>> sol = zmod::solve_mod(d3, t.v, kexp);
    if (!sol) return std::nullopt;
    TorusCochain eps = zero_torus_cochain(K.n, 3, kexp);
    eps.v = std::move(*sol);
    require(is_zero(sub(coboundary(K, eps), t)), "solver returned a non-solution");
    return eps;
}

OmegaPair omega_pair(const FiniteGroup& K, const FiniteModule& A, const ModuleCochain& F,
                     const ModuleCochain& Fhat, const TorusCochain& epsilon,
                     const TorusCochain& kappa) {
    check_pair_shapes(K, A, F, Fhat);
    int kexp = epsilon.kexp;
    require(epsilon.q == K.n && epsilon.deg == 3, "ε must be a 3-cochain on K");
    require(kappa.q == K.n && kappa.deg == 3 && kappa.kexp == kexp,
            "κ must be a 3-cochain on K with the same denominator as ε");
    if (!is_cocycle(K, kappa)) throw NotACocycle("κ is not a 3-cocycle on K");

    OmegaPair P{build_extension(K, A, F), build_dual_group(K, dual_module(A), Fhat),
                TorusCochain{}, TorusCochain{}};
    TorusCochain ek = add(epsilon, kappa);

    P.omega = add(omega_zero(P.ext, Fhat, kexp), pullback(ek, P.ext.proj_K, P.ext.G.n));
    if (!is_cocycle(P.ext.G, P.omega))
        throw NotACocycle("ω = ω₀ + infl(ε+κ) is not a 3-cocycle (is ε a δε = <F̂,F> solution?)");

    const FiniteGroup& Ghat = P.dual.Ghat;
    const FiniteModule& Ahat = P.dual.Ahat;
    int m = Ahat.size();
    P.omega_hat = zero_torus_cochain(Ghat.n, 3, kexp);
    TupleSpace ts{Ghat.n, 3};
    std::int64_t mod = std::int64_t{1} << kexp;
    int g[3];
    for (std::int64_t idx = 0; idx < ts.size(); ++idx) {
        ts.tuple(idx, g);
        int args[3] = {P.dual.proj_K[g[0]], P.dual.proj_K[g[1]], P.dual.proj_K[g[2]]};
        std::vector<int> rho1 = Ahat.element(g[0] % m);
        std::int64_t val = ek.eval(args) + pairing_mod(A, rho1, F.eval(args + 1), kexp);
        P.omega_hat.v[static_cast<size_t>(idx)] = static_cast<zmod::Val>(val % mod);
    }
    if (!is_cocycle(Ghat, P.omega_hat))
        throw NotACocycle("ω̂ is not a 3-cocycle on the dual group");
    return P;
}

OmegaSubgroup omega_subgroup(const FiniteGroup& H, const std::vector<int>& elems,
                             const CohomOptions& opt) {
    OmegaSubgroup out{normal_abelian_structure(H, elems), {}};
    const NormalAbelianSubgroup& nas = out.nas;
    ExtensionDatum ext = build_extension(nas.K, nas.A, nas.F0);
    GroupMap psi_inv = inverse_map(canonical_extension_iso(H, nas, ext));

    CohomologyGroup h3H = cohomology_group(H, 3, CoeffSpec::torus(), opt);
    FiniteModule Ahat = dual_module(nas.A);
    CohomologyGroup h2hat = cohomology_group(nas.K, 2, CoeffSpec::with_module(Ahat), opt);
    CohomologyGroup h3K = cohomology_group(nas.K, 3, CoeffSpec::torus(), opt);

    std::set<std::vector<int>> got;
    for (std::int64_t fi = 0; fi < h2hat.num_classes(); ++fi) {
        ModuleCochain Fhat = h2hat.module_rep(h2hat.coords_of_class_index(fi));
        std::optional<TorusCochain> eps =
            solve_epsilon(nas.K, nas.A, nas.F0, Fhat, opt.kexp);
        if (!eps) continue;
        for (std::int64_t ki = 0; ki < h3K.num_classes(); ++ki) {
            TorusCochain kappa = h3K.torus_rep(h3K.coords_of_class_index(ki));
            OmegaPair P = omega_pair(nas.K, nas.A, nas.F0, Fhat, *eps, kappa);
            TorusCochain on_h = pullback(P.omega, psi_inv.images, H.n);
            got.insert(h3H.class_coordinates(on_h));
        }
    }
    out.classes.assign(got.begin(), got.end());

    // Ω(H; A) is a subgroup of H³(H, C*): verified directly.
    require(got.count(std::vector<int>(h3H.rank(), 0)) == 1,
            "Ω must contain the trivial class");
    const std::vector<int>& d = h3H.invariant_factors();
    for (const std::vector<int>& x : out.classes)
        for (const std::vector<int>& y : out.classes) {
            std::vector<int> s(x.size());
            for (size_t i = 0; i < x.size(); ++i) s[i] = (x[i] + y[i]) % d[i];
            require(got.count(s) == 1, "Ω must be closed under addition");
        }
    return out;
}

std::vector<MoritaEdge> enumerate_edges(const EquivalenceCensus& census,
                                        const CohomOptions& opt) {
    const std::vector<ModuleContext>& ctxs = module_contexts();
    const std::vector<FiniteGroup>& cat = catalog_order8();
    require(census.tables.size() == cat.size(), "census does not cover the catalog");

    std::vector<CohomologyGroup> h3s;
    for (const FiniteGroup& G : cat) h3s.push_back(cohomology_group(G, 3, CoeffSpec::torus(), opt));

    // class coordinates of a cocycle on ext-group E, transported to the
    // catalog group along an isomorphism phi: E -> cat[gi]
    auto census_class = [&](const TorusCochain& w, const GroupMap& phi_inv, int gi,
                            std::vector<int>* coords_out) {
        TorusCochain moved = pullback(w, phi_inv.images, cat[gi].n);
        std::vector<int> coords = h3s[gi].class_coordinates(moved);
        int orbit = census.tables[gi].orbit_of_class[h3s[gi].class_index(coords)];
        *coords_out = std::move(coords);
        return census.census_id(gi, orbit);
    };

    std::vector<MoritaEdge> edges;
    for (size_t ci = 0; ci < ctxs.size(); ++ci) {
        const FiniteGroup& K = ctxs[ci].K;
        const FiniteModule& A = ctxs[ci].A;
        CohomologyGroup h2A = cohomology_group(K, 2, CoeffSpec::with_module(A), opt);
        FiniteModule Ahat = dual_module(A);
        CohomologyGroup h2hat = cohomology_group(K, 2, CoeffSpec::with_module(Ahat), opt);
        CohomologyGroup h3K = cohomology_group(K, 3, CoeffSpec::torus(), opt);

        for (std::int64_t fi = 0; fi < h2A.num_classes(); ++fi) {
            ModuleCochain F = h2A.module_rep(h2A.coords_of_class_index(fi));
            ExtensionDatum ext = build_extension(K, A, F);
            int g1 = -1;
            GroupMap phi;
            for (size_t gi = 0; gi < cat.size(); ++gi)
                if (std::optional<GroupMap> m = find_isomorphism(ext.G, cat[gi])) {
                    g1 = static_cast<int>(gi);
                    phi = std::move(*m);
                    break;
                }
            require(g1 >= 0, "extension group missing from the catalog");
            GroupMap phi_inv = inverse_map(phi);

            for (std::int64_t hi = 0; hi < h2hat.num_classes(); ++hi) {
                ModuleCochain Fhat = h2hat.module_rep(h2hat.coords_of_class_index(hi));
                std::optional<TorusCochain> eps = solve_epsilon(K, A, F, Fhat, opt.kexp);
                if (!eps) continue;
                DualExtensionDatum dual = build_dual_group(K, Ahat, Fhat);
                int g2 = -1;
                GroupMap phihat;
                for (size_t gi = 0; gi < cat.size(); ++gi)
                    if (std::optional<GroupMap> m = find_isomorphism(dual.Ghat, cat[gi])) {
                        g2 = static_cast<int>(gi);
                        phihat = std::move(*m);
                        break;
                    }
                require(g2 >= 0, "dual group missing from the catalog");
                GroupMap phihat_inv = inverse_map(phihat);

                for (std::int64_t ki = 0; ki < h3K.num_classes(); ++ki) {
                    TorusCochain kappa = h3K.torus_rep(h3K.coords_of_class_index(ki));
                    OmegaPair P = omega_pair(K, A, F, Fhat, *eps, kappa);
                    MoritaEdge e;
                    e.witness.context_id = static_cast<int>(ci);
                    e.witness.f_class = static_cast<int>(fi);
                    e.witness.fhat_class = static_cast<int>(hi);
                    e.witness.kappa_class = static_cast<int>(ki);
                    e.witness.F = F;
                    e.witness.Fhat = Fhat;
                    e.witness.epsilon = *eps;
                    e.witness.kappa = kappa;
                    e.witness.phi = phi;
                    e.witness.phihat = phihat;
                    e.witness.group1 = g1;
                    e.witness.group2 = g2;
                    e.census1 = census_class(P.omega, phi_inv, g1, &e.witness.coords1);
                    e.census2 = census_class(P.omega_hat, phihat_inv, g2, &e.witness.coords2);
                    edges.push_back(std::move(e));
                }
            }
        }
    }
    return edges;
}

MoritaPartition morita_partition(const EquivalenceCensus& census,
                                 const std::vector<MoritaEdge>& edges) {
    int n = census.total;
    std::vector<int> up(static_cast<size_t>(n));
    std::iota(up.begin(), up.end(), 0);
    auto find = [&](int x) {
        while (up[static_cast<size_t>(x)] != x) {
            up[static_cast<size_t>(x)] = up[up[static_cast<size_t>(x)]];
            x = up[static_cast<size_t>(x)];
        }
        return x;
    };
    for (const MoritaEdge& e : edges) {
        require(e.census1 >= 0 && e.census1 < n && e.census2 >= 0 && e.census2 < n,
                "edge endpoint outside the census");
        int a = find(e.census1), b = find(e.census2);
        if (a != b) up[static_cast<size_t>(std::max(a, b))] = std::min(a, b);
    }
    MoritaPartition P;
    P.class_of.assign(static_cast<size_t>(n), -1);
    std::vector<int> root_to_class;
    for (int x = 0; x < n; ++x) {
        int r = find(x);
        if (r == x) {
            P.class_of[static_cast<size_t>(x)] = static_cast<int>(P.classes.size());
            P.classes.push_back({x});
        } else {
            // roots are always the least member, so r < x is already placed
            int c = P.class_of[static_cast<size_t>(r)];
            P.class_of[static_cast<size_t>(x)] = c;
            P.classes[static_cast<size_t>(c)].push_back(x);
        }
    }
    return P;
}

}  // namespace fuscat
