#include "fuscat/extension.hpp"

#include <algorithm>

namespace fuscat {

int ExtensionDatum::pair_index(const std::vector<int>& a, int k) const {
    return A.index_of(a) * A.K.n + k;
}

std::vector<std::vector<int>> extension_table(const FiniteGroup& K, const FiniteModule& A,
                                              const ModuleCochain& F) {
    int m = A.size(), n = m * K.n;
    std::vector<std::vector<int>> rows(n, std::vector<int>(n));
    for (int a1 = 0; a1 < m; ++a1)
        for (int k1 = 0; k1 < K.n; ++k1)
            for (int a2 = 0; a2 < m; ++a2)
                for (int k2 = 0; k2 < K.n; ++k2) {
                    int args[2] = {k1, k2};
                    std::vector<int> a3 = A.add(A.add(A.element(a1), A.act(k1, A.element(a2))),
                                                F.eval(args));
                    rows[a1 * K.n + k1][a2 * K.n + k2] = A.index_of(a3) * K.n + K.mul(k1, k2);
                }
    return rows;
}

ExtensionDatum build_extension(const FiniteGroup& K, const FiniteModule& A,
                               const ModuleCochain& F) {
    require(F.deg == 2 && F.A.same_module(A) && F.A.K.table == K.table,
            "extension cocycle must be a degree-2 cochain on (K, A)");
    if (!is_cocycle(F)) throw NotACocycle("extension datum F is not a 2-cocycle");

    ExtensionDatum ext;
    ext.A = A;
    ext.F = F;
    std::string name = (A.rank() ? std::string("ext") : std::string("triv-ext")) + "(" + K.name + ")";
    ext.G = FiniteGroup::make(name, extension_table(K, A, F));

    int m = A.size();
    ext.embed_A.resize(m);
    for (int a = 0; a < m; ++a) ext.embed_A[a] = a * K.n + 0;
    ext.proj_K.resize(ext.G.n);
    for (int g = 0; g < ext.G.n; ++g) ext.proj_K[g] = g % K.n;
    return ext;
}

int DualExtensionDatum::pair_index(int k, const std::vector<int>& rho) const {
    return k * Ahat.size() + Ahat.index_of(rho);
}

DualExtensionDatum build_dual_group(const FiniteGroup& K, const FiniteModule& Ahat,
                                    const ModuleCochain& Fhat) {
    require(Fhat.deg == 2 && Fhat.A.same_module(Ahat) && Fhat.A.K.table == K.table,
            "dual extension cocycle must be a degree-2 cochain on (K, Â)");
    if (!is_cocycle(Fhat)) throw NotACocycle("dual extension datum F̂ is not a 2-cocycle");

    int m = Ahat.size(), n = m * K.n;
    std::vector<std::vector<int>> rows(n, std::vector<int>(n));
    for (int k1 = 0; k1 < K.n; ++k1)
        for (int r1 = 0; r1 < m; ++r1)
            for (int k2 = 0; k2 < K.n; ++k2)
                for (int r2 = 0; r2 < m; ++r2) {
                    int args[2] = {k1, k2};
                    // ρ1^{k2} is the (right) dual action, stored as matrices
                    std::vector<int> rho =
                        Ahat.add(Ahat.add(Ahat.act(k2, Ahat.element(r1)), Ahat.element(r2)),
                                 Fhat.eval(args));
                    rows[k1 * m + r1][k2 * m + r2] = K.mul(k1, k2) * m + Ahat.index_of(rho);
                }

    DualExtensionDatum dual;
    dual.Ahat = Ahat;
    dual.Fhat = Fhat;
    // Associativity of this table is exactly the compatibility of the dual
    // action convention with the quoted law; make() enforces it.
    dual.Ghat = FiniteGroup::make("dualext(" + K.name + ")", rows);
    dual.proj_K.resize(n);
    for (int g = 0; g < n; ++g) dual.proj_K[g] = g / m;
    return dual;
}

std::vector<int> NormalAbelianSubgroup::coords_of(int h) const {
    int s = view.from_parent[h];
    require(s >= 0, "element is not in the subgroup");
    return Astruct.coords(s);
}

int NormalAbelianSubgroup::elem_of(const std::vector<int>& a) const {
    return elem_by_index[A.index_of(a)];
}

NormalAbelianSubgroup normal_abelian_structure(const FiniteGroup& H,
                                               const std::vector<int>& elems) {
    NormalAbelianSubgroup nas;
    nas.elems = elems;
    std::sort(nas.elems.begin(), nas.elems.end());
    require(is_normal(H, nas.elems), "subgroup is not normal");
    nas.view = subgroup_view(H, nas.elems);
    require(nas.view.S.is_abelian(), "subgroup is not abelian");
    nas.Astruct = abelian_structure(nas.view.S);

    Quotient q = quotient_by_normal(H, nas.elems);
    nas.K = q.Q;
    nas.proj = q.proj;
    nas.section = q.coset_rep;

    // Conjugation action of K on A in Astruct coordinates; independent of
    // the section because A is abelian.
    int r = nas.Astruct.rank();
    std::vector<std::vector<int>> action(nas.K.n, std::vector<int>(size_t(r) * r, 0));
    for (int k = 0; k < nas.K.n; ++k)
        for (int j = 0; j < r; ++j) {
            int gen = nas.view.to_parent[nas.Astruct.gens[j]];
            int img = H.conj(gen, nas.section[k]);
            int s = nas.view.from_parent[img];
            require(s >= 0, "conjugation leaves the subgroup (not normal?)");
            const std::vector<int>& c = nas.Astruct.coords(s);
            for (int i = 0; i < r; ++i) action[k][i * r + j] = c[i];
        }
    nas.A = FiniteModule::make(nas.K, nas.Astruct.factors, std::move(action));

    nas.elem_by_index.resize(nas.A.size());
    for (int idx = 0; idx < nas.A.size(); ++idx) {
        std::vector<int> a = nas.A.element(idx);
        int e = 0;
        for (int j = 0; j < r; ++j)
            e = H.mul(e, H.power(nas.view.to_parent[nas.Astruct.gens[j]], a[j]));
        nas.elem_by_index[idx] = e;
    }

    // Canonical section 2-cocycle.  s(0) = 0 keeps it normalized.
    nas.F0 = zero_module_cochain(nas.A, 2);
    for (int k1 = 1; k1 < nas.K.n; ++k1)
        for (int k2 = 1; k2 < nas.K.n; ++k2) {
            int c = H.mul(H.mul(nas.section[k1], nas.section[k2]),
                          H.inv(nas.section[nas.K.mul(k1, k2)]));
            int args[2] = {k1, k2};
            nas.F0.set(args, nas.coords_of(c));
        }
    require(is_cocycle(nas.F0), "canonical section cocycle failed the cocycle identity");
    return nas;
}

std::vector<NormalAbelianSubgroup> normal_abelian_subgroups(const FiniteGroup& H) {
    std::vector<NormalAbelianSubgroup> out;
    for (const auto& S : subgroups(H)) {
        if (!is_normal(H, S)) continue;
        if (!subgroup_view(H, S).S.is_abelian()) continue;
        out.push_back(normal_abelian_structure(H, S));
    }
    return out;
}

GroupMap canonical_extension_iso(const FiniteGroup& H, const NormalAbelianSubgroup& nas,
                                 const ExtensionDatum& ext) {
    require(ext.G.n == H.n, "extension has the wrong order");
    GroupMap psi;
    psi.images.resize(ext.G.n);
    for (int a = 0; a < nas.A.size(); ++a)
        for (int k = 0; k < nas.K.n; ++k)
            psi.images[a * nas.K.n + k] = H.mul(nas.elem_by_index[a], nas.section[k]);

    std::vector<char> hit(H.n, 0);
    for (int g = 0; g < ext.G.n; ++g) {
        require(!hit[psi.images[g]], "canonical extension map is not a bijection");
        hit[psi.images[g]] = 1;
    }
    for (int x = 0; x < ext.G.n; ++x)
        for (int y = 0; y < ext.G.n; ++y)
            require(psi.images[ext.G.mul(x, y)] == H.mul(psi.images[x], psi.images[y]),
                    "canonical extension map is not a homomorphism");
    return psi;
}

}  // namespace fuscat
