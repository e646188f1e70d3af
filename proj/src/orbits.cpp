#include "fuscat/orbits.hpp"

#include <algorithm>

#include "fuscat/errors.hpp"

namespace fuscat {

namespace {

// The permutation a coordinate matrix induces on class indices.  Verifies
// bijectivity, which together with additivity (built into the matrix form)
// makes the map an automorphism of the coordinate group.
std::vector<int> class_permutation(const CohomologyGroup& h3, const std::vector<int>& mat) {
    std::int64_t nc = h3.num_classes();
    std::vector<int> perm(static_cast<size_t>(nc), -1);
    std::vector<int> hits(static_cast<size_t>(nc), 0);
    for (std::int64_t idx = 0; idx < nc; ++idx) {
        std::vector<int> image = apply_aut(h3, mat, h3.coords_of_class_index(idx));
        std::int64_t j = h3.class_index(image);
        perm[static_cast<size_t>(idx)] = static_cast<int>(j);
        ++hits[static_cast<size_t>(j)];
    }
    for (int h : hits)
        require(h == 1, "automorphism does not permute the cohomology classes");
    return perm;
}

}  // namespace

std::vector<int> apply_aut(const CohomologyGroup& h3, const std::vector<int>& mat,
                           const std::vector<int>& coords) {
    int r = h3.rank();
    require(static_cast<int>(mat.size()) == r * r, "action matrix has the wrong shape");
    require(static_cast<int>(coords.size()) == r, "coordinate vector has the wrong length");
    const std::vector<int>& d = h3.invariant_factors();
    std::vector<int> out(static_cast<size_t>(r), 0);
    for (int i = 0; i < r; ++i) {
        std::int64_t acc = 0;
        for (int l = 0; l < r; ++l) acc += std::int64_t(mat[i * r + l]) * coords[l];
        out[i] = static_cast<int>(((acc % d[i]) + d[i]) % d[i]);
    }
    return out;
}

std::vector<std::vector<int>> aut_action(const CohomologyGroup& h3) {
    require(h3.coeffs().kind == CoeffSpec::Kind::Torus,
            "automorphism action is computed on torus-coefficient cohomology");
    const FiniteGroup& G = h3.group();
    int r = h3.rank();
    std::vector<std::vector<int>> mats;
    for (const GroupMap& phi : automorphisms(G)) {
        std::vector<int> M(static_cast<size_t>(r) * r, 0);
        for (int l = 0; l < r; ++l) {
            TorusCochain back = pullback(h3.torus_basis()[l], phi.images, G.n);
            std::vector<int> c = h3.class_coordinates(back);
            for (int i = 0; i < r; ++i) M[i * r + l] = c[i];
        }
        class_permutation(h3, M);
        mats.push_back(std::move(M));
    }
    return mats;
}

OrbitTable orbit_table(const FiniteGroup& G, const CohomOptions& opt) {
    OrbitTable T;
    T.G = G;
    CohomologyGroup h3 = cohomology_group(G, 3, CoeffSpec::torus(), opt);
    T.h3_factors = h3.invariant_factors();

    std::vector<std::vector<int>> mats = aut_action(h3);
    std::int64_t nc64 = h3.num_classes();
    require(nc64 <= 4096, "class space too large to enumerate orbits");
    int nc = static_cast<int>(nc64);

    std::vector<std::vector<int>> perms;
    perms.reserve(mats.size());
    for (const std::vector<int>& m : mats) perms.push_back(class_permutation(h3, m));

    // Closure of each class under all the permutations at once.
    std::vector<int> owner(static_cast<size_t>(nc), -1);
    std::vector<std::vector<int>> raw;  // orbits as class-index lists
    for (int s = 0; s < nc; ++s) {
        if (owner[s] >= 0) continue;
        int oid = static_cast<int>(raw.size());
        std::vector<int> stack{s};
        std::vector<int> got{s};
        owner[s] = oid;
        while (!stack.empty()) {
            int x = stack.back();
            stack.pop_back();
            for (const std::vector<int>& p : perms) {
                int y = p[x];
                if (owner[y] < 0) {
                    owner[y] = oid;
                    stack.push_back(y);
                    got.push_back(y);
                } else {
                    require(owner[y] == oid, "orbit closure is inconsistent");
                }
            }
        }
        std::sort(got.begin(), got.end());
        raw.push_back(std::move(got));
    }

    // Restriction fingerprint of every class: the multiset of (subgroup
    // size, restriction class order) over the subgroup conjugacy
    // representatives.  Conjugate subgroups give equal orders because inner
    // automorphisms act trivially on cohomology, so one representative per
    // class of subgroups suffices; outer automorphisms permute the
    // representatives, which is why only the multiset is orbit-invariant.
    T.subgroup_reps = subgroup_conjugacy_reps(G);
    std::vector<std::vector<std::pair<int, int>>> sig(static_cast<size_t>(nc));
    for (const std::vector<int>& elems : T.subgroup_reps) {
        SubgroupView v = subgroup_view(G, elems);
        CohomologyGroup hs = cohomology_group(v.S, 3, CoeffSpec::torus(), opt);
        for (int idx = 0; idx < nc; ++idx) {
            TorusCochain f = h3.torus_rep(h3.coords_of_class_index(idx));
            TorusCochain res = pullback(f, v.to_parent, v.S.n);
            sig[idx].emplace_back(v.S.n, hs.class_order(hs.class_coordinates(res)));
        }
    }
    for (std::vector<std::pair<int, int>>& s : sig) std::sort(s.begin(), s.end());

    for (const std::vector<int>& lst : raw) {
        Orbit o;
        for (int idx : lst) o.members.push_back(h3.coords_of_class_index(idx));
        std::sort(o.members.begin(), o.members.end());
        o.canonical = o.members.front();
        o.class_order = h3.class_order(o.canonical);
        o.restriction_signature = sig[lst.front()];
        for (int idx : lst) {
            require(h3.class_order(h3.coords_of_class_index(idx)) == o.class_order,
                    "class order is not constant on an automorphism orbit");
            require(sig[idx] == o.restriction_signature,
                    "restriction fingerprint is not constant on an automorphism orbit");
        }
        require(mats.size() % o.members.size() == 0,
                "orbit size must divide the automorphism group order");
        T.orbits.push_back(std::move(o));
    }

    std::sort(T.orbits.begin(), T.orbits.end(),
              [](const Orbit& a, const Orbit& b) { return a.canonical < b.canonical; });
    T.orbit_of_class.assign(static_cast<size_t>(nc), -1);
    for (size_t i = 0; i < T.orbits.size(); ++i) {
        T.orbits[i].id = static_cast<int>(i);
        for (const std::vector<int>& m : T.orbits[i].members)
            T.orbit_of_class[static_cast<size_t>(h3.class_index(m))] = static_cast<int>(i);
    }

    // Classical names, attached only where the fingerprint pins the orbit
    // down uniquely: the trivial class, and the unique order-2 class of each
    // of the two groups whose H^3 is cyclic of order 8.
    for (Orbit& o : T.orbits)
        if (o.class_order == 1) o.alias = "0";
    if (G.name == "Z8" || G.name == "Q8") {
        int count = 0;
        for (const Orbit& o : T.orbits)
            if (o.class_order == 2) ++count;
        if (count == 1)
            for (Orbit& o : T.orbits)
                if (o.class_order == 2) o.alias = (G.name == "Z8") ? "4s^2" : "4t";
    }
    return T;
}

std::pair<int, int> EquivalenceCensus::locate(int census_id) const {
    require(census_id >= 0 && census_id < total, "census id out of range");
    int gi = static_cast<int>(offsets.size()) - 1;
    while (gi > 0 && offsets[static_cast<size_t>(gi)] > census_id) --gi;
    return {gi, census_id - offsets[static_cast<size_t>(gi)]};
}

int EquivalenceCensus::census_id(int group_idx, int orbit_id) const {
    require(group_idx >= 0 && group_idx < static_cast<int>(tables.size()),
            "group index out of range");
    require(orbit_id >= 0 &&
                orbit_id < static_cast<int>(tables[static_cast<size_t>(group_idx)].orbits.size()),
            "orbit id out of range");
    return offsets[static_cast<size_t>(group_idx)] + orbit_id;
}

std::string EquivalenceCensus::label(int census_id) const {
    auto [gi, oid] = locate(census_id);
    const OrbitTable& t = tables[static_cast<size_t>(gi)];
    const Orbit& o = t.orbits[static_cast<size_t>(oid)];
    std::string s = t.G.name + "#" + std::to_string(oid);
    if (!o.alias.empty()) s += " (" + o.alias + ")";
    return s;
}

EquivalenceCensus equivalence_census(const CohomOptions& opt) {
    EquivalenceCensus c;
    for (const FiniteGroup& G : catalog_order8()) {
        c.offsets.push_back(c.total);
        c.tables.push_back(orbit_table(G, opt));
        c.total += static_cast<int>(c.tables.back().orbits.size());
    }
    return c;
}

}  // namespace fuscat
