#include "fuscat/group.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace fuscat {

namespace {

std::string tuple_str(std::initializer_list<int> xs) {
    std::ostringstream os;
    os << "(";
    bool first = true;
    for (int x : xs) {
        if (!first) os << ",";
        os << x;
        first = false;
    }
    os << ")";
    return os.str();
}

}  // namespace

int FiniteGroup::power(int g, int e) const {
    int r = 0;
    for (int i = 0; i < e; ++i) r = mul(r, g);
    return r;
}

bool FiniteGroup::is_abelian() const {
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            if (mul(a, b) != mul(b, a)) return false;
    return true;
}

std::uint64_t FiniteGroup::table_hash() const {
    std::uint64_t h = 1469598103934665603ULL;
    auto feed = [&h](std::uint32_t v) {
        for (int i = 0; i < 4; ++i) {
            h ^= (v >> (8 * i)) & 0xffu;
            h *= 1099511628211ULL;
        }
    };
    feed(static_cast<std::uint32_t>(n));
    for (int t : table) feed(static_cast<std::uint32_t>(t));
    return h;
}

FiniteGroup FiniteGroup::make(std::string name, const std::vector<std::vector<int>>& rows) {
    int n = static_cast<int>(rows.size());
    std::vector<int> flat;
    flat.reserve(static_cast<size_t>(n) * n);
    for (int a = 0; a < n; ++a) {
        if (static_cast<int>(rows[a].size()) != n)
            throw InvalidTable("table is not square: row " + std::to_string(a) + " has " +
                               std::to_string(rows[a].size()) + " entries, expected " +
                               std::to_string(n));
        for (int b = 0; b < n; ++b) flat.push_back(rows[a][b]);
    }
    return make_flat(std::move(name), n, std::move(flat));
}

FiniteGroup FiniteGroup::make_flat(std::string name, int n, std::vector<int> flat) {
    if (n < 1) throw InvalidTable("group order must be at least 1, got " + std::to_string(n));
    if (static_cast<int>(flat.size()) != n * n)
        throw InvalidTable("table has " + std::to_string(flat.size()) + " entries, expected " +
                           std::to_string(n * n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            int v = flat[a * n + b];
            if (v < 0 || v >= n)
                throw InvalidTable("entry out of range at " + tuple_str({a, b}) + ": " +
                                   std::to_string(v));
        }

    // Latin square: rows first, then columns.
    for (int a = 0; a < n; ++a) {
        std::vector<int> where(n, -1);
        for (int b = 0; b < n; ++b) {
            int v = flat[a * n + b];
            if (where[v] >= 0)
                throw NotLatinSquare("row " + std::to_string(a) + " repeats element " +
                                     std::to_string(v) + " at columns " +
                                     tuple_str({where[v], b}));
            where[v] = b;
        }
    }
    for (int b = 0; b < n; ++b) {
        std::vector<int> where(n, -1);
        for (int a = 0; a < n; ++a) {
            int v = flat[a * n + b];
            if (where[v] >= 0)
                throw NotLatinSquare("column " + std::to_string(b) + " repeats element " +
                                     std::to_string(v) + " at rows " + tuple_str({where[v], a}));
            where[v] = a;
        }
    }

    // Element 0 must be a two-sided identity.
    for (int b = 0; b < n; ++b)
        if (flat[0 * n + b] != b)
            throw NoIdentity("0*" + std::to_string(b) + " = " + std::to_string(flat[b]) +
                             ", element 0 is not a left identity");
    for (int a = 0; a < n; ++a)
        if (flat[a * n + 0] != a)
            throw NoIdentity(std::to_string(a) + "*0 = " + std::to_string(flat[a * n]) +
                             ", element 0 is not a right identity");

    // Two-sided inverses.
    std::vector<int> inverse(n, -1);
    for (int a = 0; a < n; ++a) {
        int b = -1;
        for (int c = 0; c < n; ++c)
            if (flat[a * n + c] == 0) {
                b = c;
                break;
            }
        if (b < 0 || flat[b * n + a] != 0)
            throw NoInverse("element " + std::to_string(a) + " has no two-sided inverse");
        inverse[a] = b;
    }

    // Associativity.
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                if (flat[flat[a * n + b] * n + c] != flat[a * n + flat[b * n + c]])
                    throw NotAssociative("(a*b)*c != a*(b*c) at (a,b,c)=" + tuple_str({a, b, c}));

    FiniteGroup G;
    G.name = std::move(name);
    G.n = n;
    G.table = std::move(flat);
    G.inverse = std::move(inverse);
    G.elt_order.assign(n, 0);
    for (int a = 0; a < n; ++a) {
        int x = a, ord = 1;
        while (x != 0) {
            x = G.mul(x, a);
            ++ord;
        }
        G.elt_order[a] = ord;
    }
    return G;
}

GroupMap identity_map(int n) {
    GroupMap f;
    f.images.resize(n);
    for (int i = 0; i < n; ++i) f.images[i] = i;
    return f;
}

GroupMap compose_maps(const GroupMap& f, const GroupMap& g) {
    GroupMap h;
    h.images.resize(g.images.size());
    for (size_t i = 0; i < g.images.size(); ++i) h.images[i] = f.images[g.images[i]];
    return h;
}

GroupMap inverse_map(const GroupMap& f) {
    GroupMap h;
    h.images.assign(f.images.size(), -1);
    for (size_t i = 0; i < f.images.size(); ++i) {
        require(h.images[f.images[i]] == -1, "inverse_map: map is not a bijection");
        h.images[f.images[i]] = static_cast<int>(i);
    }
    return h;
}

std::vector<int> subgroup_closure(const FiniteGroup& G, const std::vector<int>& gens) {
    std::vector<char> in(G.n, 0);
    std::vector<int> work;
    in[0] = 1;
    work.push_back(0);
    for (int g : gens) {
        require(g >= 0 && g < G.n, "subgroup_closure: generator out of range");
        if (!in[g]) {
            in[g] = 1;
            work.push_back(g);
        }
    }
    for (size_t i = 0; i < work.size(); ++i)
        for (size_t j = 0; j < work.size(); ++j) {
            int p = G.mul(work[i], work[j]);
            if (!in[p]) {
                in[p] = 1;
                work.push_back(p);
            }
        }
    std::sort(work.begin(), work.end());
    return work;
}

std::vector<int> generator_sequence(const FiniteGroup& G) {
    std::vector<int> gens;
    std::vector<int> cl = subgroup_closure(G, gens);
    while (static_cast<int>(cl.size()) < G.n) {
        int g = 0;
        while (std::binary_search(cl.begin(), cl.end(), g)) ++g;
        gens.push_back(g);
        cl = subgroup_closure(G, gens);
    }
    return gens;
}

namespace {

// Propagate img over products until stable; false on any conflict.  When
// it returns true and every element is assigned, img is a homomorphism.
bool close_hom(const FiniteGroup& G, const FiniteGroup& H, std::vector<int>& img) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (int a = 0; a < G.n; ++a) {
            if (img[a] < 0) continue;
            for (int b = 0; b < G.n; ++b) {
                if (img[b] < 0) continue;
                int c = G.mul(a, b);
                int w = H.mul(img[a], img[b]);
                if (img[c] < 0) {
                    img[c] = w;
                    changed = true;
                } else if (img[c] != w) {
                    return false;
                }
            }
        }
    }
    return true;
}

bool is_full_isomorphism(const FiniteGroup& G, const FiniteGroup& H, const std::vector<int>& img) {
    std::vector<char> hit(H.n, 0);
    for (int a = 0; a < G.n; ++a) {
        if (img[a] < 0 || hit[img[a]]) return false;
        hit[img[a]] = 1;
    }
    for (int a = 0; a < G.n; ++a)
        for (int b = 0; b < G.n; ++b)
            if (img[G.mul(a, b)] != H.mul(img[a], img[b])) return false;
    return true;
}

void search_isomorphisms(const FiniteGroup& G, const FiniteGroup& H,
                         const std::vector<int>& gens, size_t pos, std::vector<int>& img,
                         std::vector<GroupMap>& out, bool stop_at_first) {
    if (stop_at_first && !out.empty()) return;
    if (pos == gens.size()) {
        if (is_full_isomorphism(G, H, img)) out.push_back(GroupMap{img});
        return;
    }
    int g = gens[pos];
    if (img[g] >= 0) {
        search_isomorphisms(G, H, gens, pos + 1, img, out, stop_at_first);
        return;
    }
    for (int h = 0; h < H.n; ++h) {
        if (H.elt_order[h] != G.elt_order[g]) continue;
        std::vector<int> trial = img;
        trial[g] = h;
        if (!close_hom(G, H, trial)) continue;
        search_isomorphisms(G, H, gens, pos + 1, trial, out, stop_at_first);
        if (stop_at_first && !out.empty()) return;
    }
}

}  // namespace

std::vector<GroupMap> automorphisms(const FiniteGroup& G) {
    std::vector<int> gens = generator_sequence(G);
    std::vector<int> img(G.n, -1);
    img[0] = 0;
    std::vector<GroupMap> out;
    search_isomorphisms(G, G, gens, 0, img, out, false);
    std::sort(out.begin(), out.end(),
              [](const GroupMap& a, const GroupMap& b) { return a.images < b.images; });
    return out;
}

std::optional<GroupMap> find_isomorphism(const FiniteGroup& G, const FiniteGroup& H) {
    if (G.n != H.n) return std::nullopt;
    std::vector<int> gens = generator_sequence(G);
    std::vector<int> img(G.n, -1);
    img[0] = 0;
    std::vector<GroupMap> out;
    search_isomorphisms(G, H, gens, 0, img, out, true);
    if (out.empty()) return std::nullopt;
    return out.front();
}

std::vector<std::vector<int>> subgroups(const FiniteGroup& G) {
    std::set<std::vector<int>> seen;
    std::vector<std::vector<int>> work;
    std::vector<int> triv{0};
    seen.insert(triv);
    work.push_back(triv);
    for (size_t i = 0; i < work.size(); ++i) {
        std::vector<int> S = work[i];
        for (int g = 1; g < G.n; ++g) {
            if (std::binary_search(S.begin(), S.end(), g)) continue;
            std::vector<int> gens = S;
            gens.push_back(g);
            std::vector<int> T = subgroup_closure(G, gens);
            if (seen.insert(T).second) work.push_back(T);
        }
    }
    std::vector<std::vector<int>> out(seen.begin(), seen.end());
    std::sort(out.begin(), out.end(), [](const std::vector<int>& a, const std::vector<int>& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    return out;
}

bool is_normal(const FiniteGroup& G, const std::vector<int>& S) {
    for (int x = 0; x < G.n; ++x)
        for (int s : S)
            if (!std::binary_search(S.begin(), S.end(), G.conj(s, x))) return false;
    return true;
}

std::vector<std::vector<int>> subgroup_conjugacy_reps(const FiniteGroup& G) {
    std::vector<std::vector<int>> all = subgroups(G);
    std::set<std::vector<int>> used;
    std::vector<std::vector<int>> reps;
    for (const auto& S : all) {
        if (used.count(S)) continue;
        // all conjugates of S
        for (int x = 0; x < G.n; ++x) {
            std::vector<int> T;
            T.reserve(S.size());
            for (int s : S) T.push_back(G.conj(s, x));
            std::sort(T.begin(), T.end());
            used.insert(T);
        }
        reps.push_back(S);  // the (size, lex)-least member comes first in `all`
    }
    return reps;
}

SubgroupView subgroup_view(const FiniteGroup& G, const std::vector<int>& elems,
                           const std::string& name) {
    SubgroupView v;
    v.to_parent = elems;
    std::sort(v.to_parent.begin(), v.to_parent.end());
    int m = static_cast<int>(v.to_parent.size());
    v.from_parent.assign(G.n, -1);
    for (int i = 0; i < m; ++i) {
        int e = v.to_parent[i];
        require(e >= 0 && e < G.n, "subgroup_view: element out of range");
        require(v.from_parent[e] == -1, "subgroup_view: repeated element");
        v.from_parent[e] = i;
    }
    std::vector<int> flat(static_cast<size_t>(m) * m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            int p = G.mul(v.to_parent[i], v.to_parent[j]);
            require(v.from_parent[p] >= 0, "subgroup_view: set is not closed under products");
            flat[i * m + j] = v.from_parent[p];
        }
    v.S = FiniteGroup::make_flat(name.empty() ? G.name + "-sub" : name, m, std::move(flat));
    return v;
}

Quotient quotient_by_normal(const FiniteGroup& G, const std::vector<int>& N) {
    std::vector<int> S = N;
    std::sort(S.begin(), S.end());
    require(subgroup_closure(G, S) == S, "quotient_by_normal: not a subgroup");
    require(is_normal(G, S), "quotient_by_normal: subgroup is not normal");

    std::vector<int> least(G.n, -1);  // least element of g's coset
    for (int g = 0; g < G.n; ++g) {
        int lo = G.n;
        for (int s : S) lo = std::min(lo, G.mul(g, s));
        least[g] = lo;
    }
    std::vector<int> reps;
    for (int g = 0; g < G.n; ++g)
        if (least[g] == g) reps.push_back(g);

    Quotient q;
    q.coset_rep = reps;
    q.proj.resize(G.n);
    std::vector<int> label(G.n, -1);
    for (size_t l = 0; l < reps.size(); ++l) label[reps[l]] = static_cast<int>(l);
    for (int g = 0; g < G.n; ++g) q.proj[g] = label[least[g]];

    int m = static_cast<int>(reps.size());
    std::vector<int> flat(static_cast<size_t>(m) * m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) flat[i * m + j] = q.proj[G.mul(reps[i], reps[j])];
    q.Q = FiniteGroup::make_flat(G.name + "/N", m, std::move(flat));
    return q;
}

namespace {

void decompose_abelian(const FiniteGroup& G, const std::vector<std::vector<int>>& all_subs,
                       const std::vector<int>& S, std::vector<int>& factors,
                       std::vector<int>& gens) {
    if (S.size() == 1) return;
    int g = -1, d = 0;
    for (int e : S)
        if (G.elt_order[e] > d) {
            d = G.elt_order[e];
            g = e;
        }
    std::vector<int> cyc = subgroup_closure(G, {g});
    int want = static_cast<int>(S.size()) / d;
    // A cyclic subgroup of maximal order is a direct factor; find a
    // complement among the subgroups contained in S.
    for (const auto& T : all_subs) {
        if (static_cast<int>(T.size()) != want) continue;
        if (!std::includes(S.begin(), S.end(), T.begin(), T.end())) continue;
        bool trivial_meet = true;
        for (int t : T)
            if (t != 0 && std::binary_search(cyc.begin(), cyc.end(), t)) {
                trivial_meet = false;
                break;
            }
        if (!trivial_meet) continue;
        decompose_abelian(G, all_subs, T, factors, gens);
        factors.push_back(d);
        gens.push_back(g);
        return;
    }
    require(false, "abelian_structure: no complement found");
}

}  // namespace

AbelianStructure abelian_structure(const FiniteGroup& G) {
    require(G.is_abelian(), "abelian_structure: group is not abelian");
    AbelianStructure st;
    std::vector<int> whole(G.n);
    for (int i = 0; i < G.n; ++i) whole[i] = i;
    decompose_abelian(G, subgroups(G), whole, st.factors, st.gens);
    for (size_t i = 0; i + 1 < st.factors.size(); ++i)
        require(st.factors[i + 1] % st.factors[i] == 0,
                "abelian_structure: factors are not a divisor chain");

    int r = static_cast<int>(st.factors.size());
    st.coord_table.assign(G.n, {});
    std::vector<char> seen(G.n, 0);
    std::vector<int> x(r, 0);
    int total = 0;
    for (;;) {
        int g = 0;
        for (int l = 0; l < r; ++l) g = G.mul(g, G.power(st.gens[l], x[l]));
        require(!seen[g], "abelian_structure: generators are not independent");
        seen[g] = 1;
        st.coord_table[g] = x;
        ++total;
        int l = r - 1;
        while (l >= 0 && ++x[l] == st.factors[l]) x[l--] = 0;
        if (l < 0) break;
    }
    require(total == G.n, "abelian_structure: generators do not span");
    return st;
}

FiniteGroup cyclic_group(int n, const std::string& name) {
    std::vector<int> flat(static_cast<size_t>(n) * n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) flat[a * n + b] = (a + b) % n;
    return FiniteGroup::make_flat(name.empty() ? "Z" + std::to_string(n) : name, n,
                                  std::move(flat));
}

FiniteGroup direct_product(const FiniteGroup& A, const FiniteGroup& B, const std::string& name) {
    int n = A.n * B.n;
    std::vector<int> flat(static_cast<size_t>(n) * n);
    for (int a1 = 0; a1 < A.n; ++a1)
        for (int b1 = 0; b1 < B.n; ++b1)
            for (int a2 = 0; a2 < A.n; ++a2)
                for (int b2 = 0; b2 < B.n; ++b2) {
                    int p = a1 * B.n + b1, q = a2 * B.n + b2;
                    flat[p * n + q] = A.mul(a1, a2) * B.n + B.mul(b1, b2);
                }
    return FiniteGroup::make_flat(name.empty() ? A.name + "x" + B.name : name, n,
                                  std::move(flat));
}

namespace {

FiniteGroup make_z2cubed() {
    std::vector<int> flat(64);
    for (int a = 0; a < 8; ++a)
        for (int b = 0; b < 8; ++b) flat[a * 8 + b] = a ^ b;
    return FiniteGroup::make_flat("Z2^3", 8, std::move(flat));
}

FiniteGroup make_z4xz2() {
    std::vector<int> flat(64);
    for (int a = 0; a < 8; ++a)
        for (int b = 0; b < 8; ++b) {
            int a1 = a >> 1, b1 = a & 1, a2 = b >> 1, b2 = b & 1;
            flat[a * 8 + b] = ((a1 + a2) % 4) * 2 + ((b1 + b2) % 2);
        }
    return FiniteGroup::make_flat("Z4xZ2", 8, std::move(flat));
}

FiniteGroup make_d8() {
    // idx = 4s + t encodes b^s a^t; (b^s a^t)(b^s' a^t') = b^(s+s') a^((-1)^s' t + t')
    std::vector<int> flat(64);
    for (int p = 0; p < 8; ++p)
        for (int q = 0; q < 8; ++q) {
            int s1 = p >> 2, t1 = p & 3, s2 = q >> 2, t2 = q & 3;
            int s = (s1 + s2) & 1;
            int t = (((s2 ? 4 - t1 : t1) + t2) % 4 + 4) % 4;
            flat[p * 8 + q] = 4 * s + t;
        }
    return FiniteGroup::make_flat("D8", 8, std::move(flat));
}

FiniteGroup make_q8() {
    // idx = 2*axis + sign with axes 1,i,j,k and sign 1 meaning negative
    static const int ax[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
    static const int sg[4][4] = {{0, 0, 0, 0}, {0, 1, 0, 1}, {0, 1, 1, 0}, {0, 0, 1, 1}};
    std::vector<int> flat(64);
    for (int p = 0; p < 8; ++p)
        for (int q = 0; q < 8; ++q) {
            int x1 = p >> 1, s1 = p & 1, x2 = q >> 1, s2 = q & 1;
            flat[p * 8 + q] = 2 * ax[x1][x2] + ((s1 + s2 + sg[x1][x2]) & 1);
        }
    return FiniteGroup::make_flat("Q8", 8, std::move(flat));
}

std::string canon_name(const std::string& s) {
    std::string out;
    for (char c : s) {
        unsigned char u = static_cast<unsigned char>(c);
        if (u >= 0x80 || c == ' ' || c == '/' || c == '(' || c == ')' || c == '_' || c == '-')
            continue;
        out.push_back(static_cast<char>(std::tolower(u)));
    }
    return out;
}

}  // namespace

const std::vector<FiniteGroup>& catalog_order8() {
    static const std::vector<FiniteGroup> cat = [] {
        std::vector<FiniteGroup> v;
        v.push_back(make_z2cubed());
        v.push_back(make_z4xz2());
        v.push_back(cyclic_group(8, "Z8"));
        v.push_back(make_d8());
        v.push_back(make_q8());
        return v;
    }();
    return cat;
}

int catalog_index(const std::string& name) {
    static const std::vector<std::vector<std::string>> aliases = {
        {"z2^3", "z2xz2xz2", "z2z2z2", "c2^3"},
        {"z4xz2", "z4z2", "z2xz4", "z2z4", "c4xc2"},
        {"z8", "c8"},
        {"d8", "dih8"},
        {"q8", "quaternion"},
    };
    std::string c = canon_name(name);
    for (size_t i = 0; i < aliases.size(); ++i)
        for (const auto& a : aliases[i])
            if (c == a) return static_cast<int>(i);
    return -1;
}

const FiniteGroup* find_catalog_group(const std::string& name) {
    int i = catalog_index(name);
    return i < 0 ? nullptr : &catalog_order8()[i];
}

FiniteGroup load_group_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open group file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw IoError("cannot parse group file " + path + ": " + e.what());
    }
    if (!j.is_object() || !j.contains("order") || !j.contains("table"))
        throw IoError("group file " + path + " must be an object with \"order\" and \"table\"");
    std::string name = j.value("name", std::string{});
    int order = j.at("order").get<int>();
    auto rows = j.at("table").get<std::vector<std::vector<int>>>();
    if (static_cast<int>(rows.size()) != order)
        throw InvalidTable("group file order field is " + std::to_string(order) + " but table has " +
                           std::to_string(rows.size()) + " rows");
    return FiniteGroup::make(name.empty() ? path : name, rows);
}

std::string group_to_json(const FiniteGroup& G) {
    nlohmann::ordered_json j;
    j["name"] = G.name;
    j["order"] = G.n;
    std::vector<std::vector<int>> rows(G.n, std::vector<int>(G.n));
    for (int a = 0; a < G.n; ++a)
        for (int b = 0; b < G.n; ++b) rows[a][b] = G.mul(a, b);
    j["table"] = rows;
    return j.dump(2);
}

}  // namespace fuscat
