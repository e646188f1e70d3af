#include "fuscat/cohomology.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <utility>

#include "fuscat/smith.hpp"

namespace fuscat {

namespace {

using zmod::Mat;
using zmod::Val;

int exact_log2(std::int64_t x) {
    require(x >= 1 && (x & (x - 1)) == 0, "value is not a power of two");
    int e = 0;
    while (x > 1) {
        x >>= 1;
        ++e;
    }
    return e;
}

// v_2(|G|); torus and integral coefficients work in Z/2^k, which only sees
// 2-power torsion, so the whole group order must be a power of two.
int group_exp2(const FiniteGroup& G) {
    require((G.n & (G.n - 1)) == 0,
            "integral/torus cohomology is implemented for groups of 2-power order only");
    return exact_log2(G.n);
}

std::string hex64(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// The linear algebra is dense.  At the sizes this engine targets (order-8
// bar matrices through degree 4) that is faster and much simpler than a
// sparse pipeline; anything that would not fit is rejected up front rather
// than thrashing.  rows/cols describe the coboundary matrix whose kernel is
// needed; the estimate covers the int8 master copy, the working mod-2^k
// copy, and the Howell workspace of the kernel computation.
void check_dense_budget(std::int64_t rows, std::int64_t cols) {
    long double bytes = static_cast<long double>(rows) * cols * 9.0L +
                        static_cast<long double>(cols) * (rows + cols) * 4.0L;
    require(bytes <= 2.6e9L,
            "cohomology computation exceeds the dense linear-algebra budget "
            "(lower the degree or use a smaller group)");
}

bool all_zero(const std::vector<Val>& v) {
    return std::all_of(v.begin(), v.end(), [](Val x) { return x == 0; });
}

std::vector<Val> matvec_mod(const Mat& A, const std::vector<Val>& x, int mexp) {
    require(static_cast<int>(x.size()) == A.cols, "matvec: size mismatch");
    std::uint64_t mask = (1ull << mexp) - 1;
    std::vector<Val> y(A.rows);
    for (int i = 0; i < A.rows; ++i) {
        std::uint64_t s = 0;
        for (int j = 0; j < A.cols; ++j) s += (static_cast<std::uint64_t>(A.at(i, j)) * x[j]) & mask;
        y[i] = static_cast<Val>(s & mask);
    }
    return y;
}

// Nonzero columns of A as vectors (the coboundary generators).
std::vector<std::vector<Val>> nonzero_columns(const Mat& A) {
    std::vector<std::vector<Val>> cols;
    for (int j = 0; j < A.cols; ++j) {
        std::vector<Val> c(A.rows);
        bool nz = false;
        for (int i = 0; i < A.rows; ++i) {
            c[i] = A.at(i, j);
            nz = nz || c[i] != 0;
        }
        if (nz) cols.push_back(std::move(c));
    }
    return cols;
}

std::uint64_t fnv_mix(std::uint64_t h, std::uint64_t x) {
    for (int i = 0; i < 8; ++i) {
        h ^= (x >> (8 * i)) & 0xff;
        h *= 1099511628211ull;
    }
    return h;
}

// Deterministic tiny generator for the self-check samples.
struct Lcg {
    std::uint64_t s;
    explicit Lcg(std::uint64_t seed) : s(seed) {}
    std::uint64_t next() {
        s = s * 6364136223846793005ull + 1442695040888963407ull;
        return s >> 11;
    }
    int below(int n) { return n ? static_cast<int>(next() % n) : 0; }
};

}  // namespace

// ---------------------------------------------------------------------------
// TorusValue / CoeffSpec

TorusValue TorusValue::reduce(std::uint64_t numerator, int kexp) {
    require(kexp >= 0 && kexp <= 62, "denominator exponent out of range");
    numerator &= (1ull << kexp) - 1;
    TorusValue t;
    if (numerator == 0) return t;
    int v = 0;
    while ((numerator & 1) == 0) {
        numerator >>= 1;
        ++v;
    }
    t.numerator = static_cast<std::int64_t>(numerator);
    t.denominator_exp = kexp - v;
    return t;
}

std::string TorusValue::str() const {
    if (numerator == 0) return "0";
    return std::to_string(numerator) + "/2^" + std::to_string(denominator_exp);
}

CoeffSpec CoeffSpec::integral() {
    CoeffSpec s;
    s.kind = Kind::Integral;
    return s;
}

CoeffSpec CoeffSpec::torus() {
    CoeffSpec s;
    s.kind = Kind::Torus;
    return s;
}

CoeffSpec CoeffSpec::with_module(FiniteModule A) {
    CoeffSpec s;
    s.kind = Kind::Module;
    s.module = std::move(A);
    return s;
}

std::string CoeffSpec::key() const {
    switch (kind) {
        case Kind::Integral: return "int";
        case Kind::Torus: return "torus";
        case Kind::Module: break;
    }
    const FiniteModule& A = *module;
    std::uint64_t h = 1469598103934665603ull;
    h = fnv_mix(h, A.K.table_hash());
    for (int d : A.factors) h = fnv_mix(h, static_cast<std::uint64_t>(d));
    for (const auto& m : A.action)
        for (int x : m) h = fnv_mix(h, static_cast<std::uint64_t>(x));
    std::string name = "mod";
    for (size_t i = 0; i < A.factors.size(); ++i)
        name += (i ? "x" : "") + std::to_string(A.factors[i]);
    return name + "-" + hex64(h).substr(8);
}

// ---------------------------------------------------------------------------
// CohomologyGroup accessors

std::int64_t CohomologyGroup::num_classes() const {
    std::int64_t p = 1;
    for (int d : factors_) p *= d;
    return p;
}

const std::vector<TorusCochain>& CohomologyGroup::torus_basis() const {
    require(spec_.kind == CoeffSpec::Kind::Torus, "torus_basis: coefficients are not the torus");
    return tbasis_;
}

const std::vector<IntCochain>& CohomologyGroup::integral_basis() const {
    require(spec_.kind == CoeffSpec::Kind::Integral, "integral_basis: coefficients are not Z");
    return ibasis_;
}

const std::vector<ModuleCochain>& CohomologyGroup::module_basis() const {
    require(spec_.kind == CoeffSpec::Kind::Module, "module_basis: coefficients are not a module");
    return mbasis_;
}

std::vector<int> CohomologyGroup::class_coordinates(const TorusCochain& f) const {
    require(spec_.kind == CoeffSpec::Kind::Torus, "class_coordinates: torus cochain expected");
    require(f.q == G_.n && f.deg == deg_, "class_coordinates: cochain has the wrong shape");
    require(f.kexp >= 1 && f.kexp <= kexp_,
            "class_coordinates: cochain denominator exceeds the working precision");
    TorusCochain g = f;
    if (f.kexp < kexp_) {
        g.kexp = kexp_;
        for (auto& x : g.v) x <<= (kexp_ - f.kexp);
    }
    if (!is_cocycle(G_, g)) throw NotACocycle("class_coordinates: not a cocycle");
    auto c = aq_.coords(g.v);
    return std::vector<int>(c.begin(), c.end());
}

std::vector<int> CohomologyGroup::class_coordinates(const IntCochain& f) const {
    require(spec_.kind == CoeffSpec::Kind::Integral, "class_coordinates: integral cochain expected");
    require(f.q == G_.n && f.deg == deg_, "class_coordinates: cochain has the wrong shape");
    if (!is_cocycle(G_, f)) throw NotACocycle("class_coordinates: not a cocycle");
    std::uint64_t mask = (1ull << kexp_) - 1;
    std::vector<Val> b(f.v.size());
    for (size_t i = 0; i < b.size(); ++i)
        b[i] = static_cast<Val>(static_cast<std::uint64_t>(f.v[i]) & mask);
    auto c = aq_.coords(b);
    return std::vector<int>(c.begin(), c.end());
}

std::vector<int> CohomologyGroup::class_coordinates(const ModuleCochain& f) const {
    require(spec_.kind == CoeffSpec::Kind::Module, "class_coordinates: module cochain expected");
    require(f.A.same_module(*spec_.module) && f.deg == deg_,
            "class_coordinates: cochain has the wrong shape");
    if (!is_cocycle(f)) throw NotACocycle("class_coordinates: not a cocycle");
    int r = f.A.rank();
    std::int64_t mod = std::int64_t{1} << emb_mexp_;
    std::vector<Val> b(f.v.size());
    for (size_t i = 0; i < b.size(); ++i)
        b[i] = static_cast<Val>(f.v[i] * (mod / f.A.factors[i % r]));
    auto c = aq_.coords(b);
    return std::vector<int>(c.begin(), c.end());
}

std::vector<int> CohomologyGroup::coords_of_class_index(std::int64_t idx) const {
    require(idx >= 0 && idx < num_classes(), "class index out of range");
    std::vector<int> c(factors_.size());
    for (size_t l = 0; l < factors_.size(); ++l) {
        c[l] = static_cast<int>(idx % factors_[l]);
        idx /= factors_[l];
    }
    return c;
}

std::int64_t CohomologyGroup::class_index(const std::vector<int>& coords) const {
    require(coords.size() == factors_.size(), "class_index: coordinate count mismatch");
    std::int64_t idx = 0, place = 1;
    for (size_t l = 0; l < factors_.size(); ++l) {
        int c = ((coords[l] % factors_[l]) + factors_[l]) % factors_[l];
        idx += place * c;
        place *= factors_[l];
    }
    return idx;
}

int CohomologyGroup::class_order(const std::vector<int>& coords) const {
    require(coords.size() == factors_.size(), "class_order: coordinate count mismatch");
    int ord = 1;
    for (size_t l = 0; l < factors_.size(); ++l) {
        int c = ((coords[l] % factors_[l]) + factors_[l]) % factors_[l];
        int o = factors_[l] / std::gcd(c, factors_[l]);
        ord = std::lcm(ord, o);
    }
    return ord;
}

TorusCochain CohomologyGroup::torus_rep(const std::vector<int>& coords) const {
    require(spec_.kind == CoeffSpec::Kind::Torus, "torus_rep: coefficients are not the torus");
    require(coords.size() == factors_.size(), "torus_rep: coordinate count mismatch");
    TorusCochain acc = zero_torus_cochain(G_.n, deg_, kexp_);
    for (size_t l = 0; l < coords.size(); ++l) acc = add(acc, scale(coords[l], tbasis_[l]));
    return acc;
}

ModuleCochain CohomologyGroup::module_rep(const std::vector<int>& coords) const {
    require(spec_.kind == CoeffSpec::Kind::Module, "module_rep: coefficients are not a module");
    require(coords.size() == factors_.size(), "module_rep: coordinate count mismatch");
    const FiniteModule& A = *spec_.module;
    int r = A.rank();
    ModuleCochain acc = zero_module_cochain(A, deg_);
    for (size_t i = 0; i < acc.v.size(); ++i) {
        std::int64_t s = 0;
        for (size_t l = 0; l < coords.size(); ++l)
            s += static_cast<std::int64_t>(coords[l]) * mbasis_[l].v[i];
        int d = A.factors[i % r];
        acc.v[i] = static_cast<int>(((s % d) + d) % d);
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Builder

struct CohomBuilder {
    // Cocycles, coboundaries and the quotient for torus coefficients at
    // denominator 2^k.  Plain mod-2^k coboundaries alone undercount the
    // coboundary group: a class can die in Q/Z without dying mod 2^k (the
    // Tor term of the reduction).  The fix is exact: every coboundary in
    // C^n(2^-k Z/Z) is a mod-2^k coboundary plus the reduction of an
    // integral n-cocycle (split a rational coboundary δh with 2^k·δh
    // integral into δ(round part) + integral cocycle; rational cohomology
    // of a finite group vanishes, so nothing else appears).  Integral
    // cocycle reductions in turn are exactly the mod-2^{k+e} kernel reduced
    // mod 2^k, where 2^e annihilates all torsion (e = v_2|G| works).
    struct TorusParts {
        std::vector<int> factors;
        std::vector<std::vector<Val>> basis;
        std::vector<std::vector<Val>> bext;  // the extra generators beyond im(D_{n-1})
        zmod::AbelianQuotient aq;
    };

    static TorusParts torus_parts(const FiniteGroup& G, int n, int k, int e) {
        TupleSpace src{G.n, n}, dst{G.n, n + 1};
        check_dense_budget(dst.size(), src.size());
        int N = static_cast<int>(src.size());

        Mat Dn = bar_matrix_mod(G, n, k);
        auto zgens = zmod::kernel_mod(Dn, k);

        std::vector<std::vector<Val>> bgens;
        if (n >= 1) {
            Mat Dprev = bar_matrix_mod(G, n - 1, k);
            bgens = nonzero_columns(Dprev);
        }
        TorusParts P;
        Mat Dhi = bar_matrix_mod(G, n, k + e);
        Val mask = (Val{1} << k) - 1;
        for (auto kv : zmod::kernel_mod(Dhi, k + e)) {
            for (auto& x : kv) x &= mask;
            if (!all_zero(kv)) {
                P.bext.push_back(kv);
                bgens.push_back(std::move(kv));
            }
        }
        P.aq = zmod::abelian_quotient(N, zgens, bgens, k, e);
        P.factors = P.aq.factors();
        P.basis = P.aq.basis();
        return P;
    }

    static void self_check_roundtrip(const CohomologyGroup& H) {
        Lcg rng(20260817u);
        for (int trial = 0; trial < 4; ++trial) {
            std::vector<int> c(H.factors_.size());
            for (size_t l = 0; l < c.size(); ++l) c[l] = rng.below(H.factors_[l]);
            std::vector<int> back;
            switch (H.spec_.kind) {
                case CoeffSpec::Kind::Torus: back = H.class_coordinates(H.torus_rep(c)); break;
                case CoeffSpec::Kind::Module: back = H.class_coordinates(H.module_rep(c)); break;
                case CoeffSpec::Kind::Integral: {
                    IntCochain f{H.G_.n, H.deg_, {}};
                    f.v.assign(TupleSpace{H.G_.n, H.deg_}.size(), 0);
                    for (size_t l = 0; l < c.size(); ++l)
                        for (size_t i = 0; i < f.v.size(); ++i)
                            f.v[i] += static_cast<std::int64_t>(c[l]) * H.ibasis_[l].v[i];
                    back = H.class_coordinates(f);
                    break;
                }
            }
            require(back == c, "self-check: coordinate roundtrip failed");
        }
    }

    // ---- cache -----------------------------------------------------------

    static std::string cache_path(const CohomOptions& opt, const FiniteGroup& G, int n,
                                  const CoeffSpec& spec, int k) {
        return opt.cache_dir + "/h_" + hex64(G.table_hash()) + "_d" + std::to_string(n) + "_" +
               spec.key() + "_k" + std::to_string(k) + ".json";
    }

    static bool want_cache(const CohomOptions& opt, const FiniteGroup& G,
                           const CoeffSpec& spec) {
        // Only the order>=8 torus/integral computations are worth a disk trip.
        return !opt.cache_dir.empty() && G.n >= 8 && spec.kind != CoeffSpec::Kind::Module;
    }

    static void atomic_write(const std::string& path, const std::string& body) {
        namespace fs = std::filesystem;
        std::error_code ec;
        fs::create_directories(fs::path(path).parent_path(), ec);
        std::string tmp = path + ".tmp";
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out) throw IoError("cannot write cache file " + tmp);
            out << body;
            if (!out.flush()) throw IoError("cannot write cache file " + tmp);
        }
        if (std::rename(tmp.c_str(), path.c_str()) != 0)
            throw IoError("cannot move cache file into place: " + path);
    }

    static nlohmann::ordered_json encode_torus_basis(const FiniteGroup& G, int n, int k,
                                                     const std::vector<Val>& v) {
        TupleSpace ts{G.n, n};
        int minv = k;
        for (Val x : v)
            if (x != 0) minv = std::min(minv, zmod::val2(x));
        nlohmann::ordered_json entries = nlohmann::ordered_json::array();
        std::vector<int> tup(n);
        for (std::int64_t i = 0; i < ts.size(); ++i) {
            if (v[i] == 0) continue;
            ts.tuple(i, tup.data());
            entries.push_back({tup, static_cast<std::uint64_t>(v[i] >> minv)});
        }
        nlohmann::ordered_json b;
        b["values"] = std::move(entries);
        b["denominator_exp"] = k - minv;
        return b;
    }

    static void write_cache(const CohomologyGroup& H, const std::vector<std::vector<Val>>& bext,
                            const std::string& path) {
        nlohmann::ordered_json j;
        j["group_hash"] = hex64(H.G_.table_hash());
        j["degree"] = H.deg_;
        j["coeffs"] = H.spec_.key();
        j["k"] = H.kexp_;
        j["invariant_factors"] = H.factors_;
        nlohmann::ordered_json basis = nlohmann::ordered_json::array();
        if (H.spec_.kind == CoeffSpec::Kind::Torus) {
            for (const auto& f : H.tbasis_) basis.push_back(encode_torus_basis(H.G_, H.deg_, H.kexp_, f.v));
        } else {
            TupleSpace ts{H.G_.n, H.deg_};
            std::vector<int> tup(H.deg_);
            for (const auto& f : H.ibasis_) {
                nlohmann::ordered_json entries = nlohmann::ordered_json::array();
                for (std::int64_t i = 0; i < ts.size(); ++i) {
                    if (f.v[i] == 0) continue;
                    ts.tuple(i, tup.data());
                    entries.push_back({tup, f.v[i]});
                }
                basis.push_back({{"values", std::move(entries)}});
            }
        }
        j["basis"] = std::move(basis);
        nlohmann::ordered_json be = nlohmann::ordered_json::array();
        for (const auto& g : bext) be.push_back(g);
        j["bext"] = std::move(be);
        atomic_write(path, j.dump(1));
    }

    // Load and *verify* a cached result; any mismatch or stale content makes
    // this return nullopt so the caller recomputes and overwrites.
    static std::optional<CohomologyGroup> load_cache(const FiniteGroup& G, int n,
                                                     const CoeffSpec& spec,
                                                     const CohomOptions& opt, int e,
                                                     const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) return std::nullopt;
        nlohmann::json j;
        try {
            in >> j;
            if (j.at("group_hash").get<std::string>() != hex64(G.table_hash())) return std::nullopt;
            if (j.at("degree").get<int>() != n) return std::nullopt;
            if (j.at("coeffs").get<std::string>() != spec.key()) return std::nullopt;
            if (j.at("k").get<int>() != opt.kexp) return std::nullopt;
            int k = opt.kexp;
            auto factors = j.at("invariant_factors").get<std::vector<int>>();

            TupleSpace ts{G.n, n};
            int N = static_cast<int>(ts.size());
            CohomologyGroup H;
            H.G_ = G;
            H.deg_ = n;
            H.spec_ = spec;
            H.kexp_ = k;
            H.factors_ = factors;

            Mat Dn = bar_matrix_mod(G, n, k);
            std::vector<std::vector<Val>> basisvecs;
            for (const auto& jb : j.at("basis")) {
                std::vector<Val> v(N, 0);
                if (spec.kind == CoeffSpec::Kind::Torus) {
                    int de = jb.at("denominator_exp").get<int>();
                    if (de < 0 || de > k) return std::nullopt;
                    for (const auto& ent : jb.at("values")) {
                        auto tup = ent.at(0).get<std::vector<int>>();
                        if (static_cast<int>(tup.size()) != n) return std::nullopt;
                        for (int x : tup)
                            if (x <= 0 || x >= G.n) return std::nullopt;
                        std::uint64_t num = ent.at(1).get<std::uint64_t>();
                        if (num >> de) return std::nullopt;
                        v[ts.index(tup.data())] = static_cast<Val>(num << (k - de));
                    }
                    if (!all_zero(matvec_mod(Dn, v, k))) return std::nullopt;
                    basisvecs.push_back(v);
                    H.tbasis_.push_back(TorusCochain{G.n, n, k, std::move(v)});
                } else {
                    IntCochain f{G.n, n, {}};
                    f.v.assign(N, 0);
                    for (const auto& ent : jb.at("values")) {
                        auto tup = ent.at(0).get<std::vector<int>>();
                        if (static_cast<int>(tup.size()) != n) return std::nullopt;
                        for (int x : tup)
                            if (x <= 0 || x >= G.n) return std::nullopt;
                        f.v[ts.index(tup.data())] = ent.at(1).get<std::int64_t>();
                    }
                    if (!is_cocycle(G, f)) return std::nullopt;
                    std::uint64_t mask = (1ull << k) - 1;
                    std::vector<Val> r(N);
                    for (int i = 0; i < N; ++i)
                        r[i] = static_cast<Val>(static_cast<std::uint64_t>(f.v[i]) & mask);
                    basisvecs.push_back(std::move(r));
                    H.ibasis_.push_back(std::move(f));
                }
            }
            if (static_cast<int>(basisvecs.size()) != static_cast<int>(factors.size()))
                return std::nullopt;

            std::vector<std::vector<Val>> bgens;
            if (n >= 1) bgens = nonzero_columns(bar_matrix_mod(G, n - 1, k));
            for (const auto& jg : j.at("bext")) {
                auto g = jg.get<std::vector<std::uint64_t>>();
                if (static_cast<int>(g.size()) != N) return std::nullopt;
                std::vector<Val> v(N);
                for (int i = 0; i < N; ++i) {
                    if (g[i] >> k) return std::nullopt;
                    v[i] = static_cast<Val>(g[i]);
                }
                if (!all_zero(matvec_mod(Dn, v, k))) return std::nullopt;
                bgens.push_back(std::move(v));
            }
            // Recomputes the relation lattice: exact orders and independence
            // of the claimed basis are re-proved, not trusted.
            H.aq_ = zmod::abelian_quotient_from_parts(N, factors, basisvecs, bgens, k, e);
            return H;
        } catch (const std::exception&) {
            return std::nullopt;
        }
    }

    // ---- torus -----------------------------------------------------------

    static CohomologyGroup build_torus(const FiniteGroup& G, int n, const CohomOptions& opt) {
        int e = group_exp2(G);
        int k = opt.kexp;
        require(k + 1 + e <= zmod::kMaxModExp, "working precision too high for this group");
        CoeffSpec spec = CoeffSpec::torus();

        bool cache = want_cache(opt, G, spec);
        std::string path = cache ? cache_path(opt, G, n, spec, k) : std::string{};
        if (cache)
            if (auto H = load_cache(G, n, spec, opt, e, path)) return *H;

        TorusParts P = torus_parts(G, n, k, e);
        // One extra bit of precision must tell the same story; if the answer
        // ever moved with k the modular model would be wrong somewhere.
        TorusParts P1 = torus_parts(G, n, k + 1, e);
        require(P.factors == P1.factors, "stabilization check failed for torus cohomology");

        CohomologyGroup H;
        H.G_ = G;
        H.deg_ = n;
        H.spec_ = spec;
        H.kexp_ = k;
        H.factors_ = P.factors;
        H.aq_ = P.aq;
        for (const auto& v : P.basis) H.tbasis_.push_back(TorusCochain{G.n, n, k, v});
        if (opt.verify) {
            for (const auto& f : H.tbasis_)
                require(is_cocycle(G, f), "self-check: torus basis cochain is not a cocycle");
            self_check_roundtrip(H);
        }
        if (cache) write_cache(H, P.bext, path);
        return H;
    }

    // ---- integral --------------------------------------------------------

    // H^n(G, Z) for n >= 2 via the coefficient sequence 0 → Z → Q → Q/Z → 0:
    // H^{n-1}(G, Q/Z) ≅ H^n(G, Z) by δ(lift)/2^k, computed exactly.  The
    // resulting generators are re-proved to present the group: their classes
    // mod 2^k generate (⟨t⟩+B_k)/B_k, whose relation lattice is recomputed
    // and must match (a multiple of an integral cocycle is an integral
    // coboundary iff it is one mod 2^k, since k exceeds the torsion
    // exponent).  A further independent cross-check reads the same factors
    // off the elementary divisors of D_{n-1}.
    static CohomologyGroup build_integral(const FiniteGroup& G, int n, const CohomOptions& opt) {
        int e = group_exp2(G);
        int k = opt.kexp;
        require(k + 1 + e <= zmod::kMaxModExp, "working precision too high for this group");
        require(k > e, "working precision must exceed the torsion exponent");
        CoeffSpec spec = CoeffSpec::integral();

        TupleSpace ts{G.n, n};
        int N = static_cast<int>(ts.size());

        if (n == 1) {
            // A 1-cocycle is a homomorphism G → Z, necessarily zero.
            CohomologyGroup H;
            H.G_ = G;
            H.deg_ = 1;
            H.spec_ = spec;
            H.kexp_ = k;
            H.aq_ = zmod::abelian_quotient_from_parts(N, {}, {}, {}, k, e);
            return H;
        }

        bool cache = want_cache(opt, G, spec);
        std::string path = cache ? cache_path(opt, G, n, spec, k) : std::string{};
        if (cache)
            if (auto H = load_cache(G, n, spec, opt, e, path)) return *H;

        CohomologyGroup prev = cohomology_group(G, n - 1, CoeffSpec::torus(), opt);

        BarMatrix D = bar_matrix(G, n - 1);
        std::int64_t den = std::int64_t{1} << k;
        std::vector<IntCochain> tbasis;
        std::vector<std::vector<Val>> tvecs;
        for (const auto& u : prev.tbasis_) {
            IntCochain t{G.n, n, {}};
            t.v.assign(N, 0);
            for (std::int64_t r = 0; r < D.rows; ++r) {
                std::int64_t w = 0;
                for (std::int64_t c = 0; c < D.cols; ++c)
                    w += static_cast<std::int64_t>(D.at(r, c)) * u.v[c];
                require(w % den == 0, "connecting map: boundary of a cocycle lift not divisible");
                t.v[r] = w / den;
            }
            require(is_cocycle(G, t), "connecting map produced a non-cocycle");
            std::uint64_t mask = (1ull << k) - 1;
            std::vector<Val> tv(N);
            for (int i = 0; i < N; ++i)
                tv[i] = static_cast<Val>(static_cast<std::uint64_t>(t.v[i]) & mask);
            tvecs.push_back(std::move(tv));
            tbasis.push_back(std::move(t));
        }

        Mat Dprev = bar_matrix_mod(G, n - 1, k);
        auto bgens = nonzero_columns(Dprev);
        CohomologyGroup H;
        H.G_ = G;
        H.deg_ = n;
        H.spec_ = spec;
        H.kexp_ = k;
        H.factors_ = prev.factors_;
        H.ibasis_ = std::move(tbasis);
        H.aq_ = zmod::abelian_quotient_from_parts(N, H.factors_, tvecs, bgens, k, e);

        // Elementary-divisor cross-check: coker(D_{n-1}) over Z is (free
        // part) ⊕ H^n(G,Z), because the cocycle lattice one degree up is
        // saturated.  Mod 2^k the free part contributes exponent-k slots, so
        // the slots with exponent in (0, k) are exactly the invariant
        // factors; none may exceed the torsion bound e.
        {
            auto dg = zmod::diag_mod2k(Dprev, k, false, false);
            std::vector<int> mids;
            for (int v : dg.vexp) {
                if (v == 0 || v >= k) continue;
                require(v <= e, "elementary divisor exceeds the torsion bound");
                mids.push_back(v);
            }
            std::sort(mids.begin(), mids.end());
            std::vector<int> expd;
            for (int d : H.factors_) expd.push_back(exact_log2(d));
            require(mids == expd, "elementary-divisor cross-check failed for integral cohomology");
        }

        if (opt.verify) {
            // Direct exact-order probe, phrased independently of the
            // quotient machinery: d_l·t_l must be a coboundary mod 2^k and
            // (d_l/2)·t_l must not.
            zmod::LinSolver im(Dprev, k);
            std::uint64_t mask = (1ull << k) - 1;
            for (size_t l = 0; l < H.factors_.size(); ++l) {
                auto scaled = [&](std::int64_t m) {
                    std::vector<Val> b(N);
                    for (int i = 0; i < N; ++i)
                        b[i] = static_cast<Val>(
                            (static_cast<std::uint64_t>(H.ibasis_[l].v[i]) * m) & mask);
                    return b;
                };
                require(im.solve(scaled(H.factors_[l])).has_value(),
                        "self-check: basis order multiple is not a coboundary");
                require(!im.solve(scaled(H.factors_[l] / 2)).has_value(),
                        "self-check: basis class order is smaller than claimed");
            }
            self_check_roundtrip(H);
        }
        if (cache) write_cache(H, {}, path);
        return H;
    }

    // ---- module ----------------------------------------------------------

    // H^n(K, A) for a finite 2-group module A: embed coordinate j of A as
    // the subgroup (2^m/d_j)Z of Z/2^m, m = v_2(exponent).  The coboundary
    // matrix in embedded coordinates has integer blocks that agree with the
    // true differential on the embedded sublattice; membership in the
    // sublattice is imposed by explicit constraint rows, so the kernel is
    // exactly the embedded cocycle group.
    struct ModuleParts {
        std::vector<int> factors;
        std::vector<std::vector<Val>> basis;
        zmod::AbelianQuotient aq;
    };

    static ModuleParts module_parts(const FiniteModule& A, int n, int m, int memb) {
        int r = A.rank();
        TupleSpace src{A.K.n, n}, dst{A.K.n, n + 1};
        check_dense_budget(dst.size() * r + src.size() * r, src.size() * r);
        int Nc = static_cast<int>(src.size()) * r;
        std::int64_t mod = std::int64_t{1} << m;

        Mat Dn = module_bar_matrix_embedded(A, n, m);
        Mat stack(Dn.rows + Nc, Nc);
        for (int i = 0; i < Dn.rows; ++i)
            for (int j = 0; j < Nc; ++j) stack.at(i, j) = Dn.at(i, j);
        for (int c = 0; c < Nc; ++c)
            stack.at(Dn.rows + c, c) = static_cast<Val>(A.factors[c % r] % mod);
        auto zgens = zmod::kernel_mod(stack, m);

        std::vector<std::vector<Val>> bgens;
        if (n >= 1) {
            Mat Dp = module_bar_matrix_embedded(A, n - 1, m);
            for (int c = 0; c < Dp.cols; ++c) {
                std::int64_t sc = mod / A.factors[c % r];
                std::vector<Val> v(Nc);
                bool nz = false;
                for (int i = 0; i < Nc; ++i) {
                    v[i] = static_cast<Val>((static_cast<std::int64_t>(Dp.at(i, c)) * sc) % mod);
                    nz = nz || v[i] != 0;
                }
                if (nz) bgens.push_back(std::move(v));
            }
        }
        ModuleParts P;
        P.aq = zmod::abelian_quotient(Nc, zgens, bgens, m, memb);
        P.factors = P.aq.factors();
        P.basis = P.aq.basis();
        return P;
    }

    static CohomologyGroup build_module(const FiniteGroup& G, int n, const CoeffSpec& spec,
                                        const CohomOptions& opt) {
        const FiniteModule& A = *spec.module;
        require(A.K.n == G.n && A.K.table == G.table,
                "module coefficients must carry an action of the same group");
        CohomologyGroup H;
        H.G_ = G;
        H.deg_ = n;
        H.spec_ = spec;
        H.kexp_ = opt.kexp;
        int r = A.rank();
        if (r == 0) {
            H.emb_mexp_ = 1;
            H.aq_ = zmod::abelian_quotient(0, {}, {}, 1, 0);
            return H;
        }
        for (int d : A.factors) exact_log2(d);  // 2-power factors only
        int memb = exact_log2(A.exponent());
        require(memb + 1 <= zmod::kMaxModExp, "module exponent too large");

        ModuleParts P = module_parts(A, n, memb, memb);
        ModuleParts P1 = module_parts(A, n, memb + 1, memb);
        require(P.factors == P1.factors, "stabilization check failed for module cohomology");

        H.factors_ = P.factors;
        H.aq_ = P.aq;
        H.emb_mexp_ = memb;
        std::int64_t mod = std::int64_t{1} << memb;
        for (const auto& v : P.basis) {
            ModuleCochain f = zero_module_cochain(A, n);
            for (size_t i = 0; i < v.size(); ++i) {
                std::int64_t sc = mod / A.factors[i % r];
                require(v[i] % sc == 0, "module basis vector leaves the embedded sublattice");
                f.v[i] = static_cast<int>((v[i] / sc) % A.factors[i % r]);
            }
            require(is_cocycle(f), "module basis cochain is not a cocycle");
            H.mbasis_.push_back(std::move(f));
        }
        if (opt.verify) self_check_roundtrip(H);
        return H;
    }
};

// ---------------------------------------------------------------------------
// Entry points

CohomologyGroup cohomology_group(const FiniteGroup& G, int n, const CoeffSpec& coeffs,
                                 const CohomOptions& opt) {
    require(opt.kexp >= 6 && opt.kexp <= 26, "denominator exponent must be between 6 and 26");
    require(n >= 0 && n <= 5, "cohomological degree must be between 0 and 5");
    switch (coeffs.kind) {
        case CoeffSpec::Kind::Torus:
            require(n >= 1, "degree-0 torus cohomology is the full torus, not a finite group");
            require(G.n <= 16, "torus coefficients support groups of order up to 16");
            return CohomBuilder::build_torus(G, n, opt);
        case CoeffSpec::Kind::Integral:
            require(n >= 1, "degree-0 integral cohomology is Z, not a finite group");
            require(G.n <= 16 && (n < 4 || G.n <= 8),
                    "integral coefficients support groups of order up to 16 (8 in degree >= 4)");
            return CohomBuilder::build_integral(G, n, opt);
        case CoeffSpec::Kind::Module:
            require(coeffs.module.has_value(), "module coefficients need a module");
            return CohomBuilder::build_module(G, n, coeffs, opt);
    }
    throw InternalError("unreachable coefficient kind");
}

CohomologyGroup torus_h3(const FiniteGroup& G, const CohomOptions& opt) {
    require(G.n <= 8, "torus_h3 is sized for groups of order up to 8");
    return cohomology_group(G, 3, CoeffSpec::torus(), opt);
}

// ---------------------------------------------------------------------------
// Quaternion periodic resolution

namespace {

// Elements of ZQ8 as integer coordinate vectors over the catalog ordering
// 1, -1, i, -i, j, -j, k, -k.
using Ring = std::array<std::int64_t, 8>;

Ring ring_unit(int g) {
    Ring r{};
    r[g] = 1;
    return r;
}

Ring ring_add(const Ring& a, const Ring& b) {
    Ring r{};
    for (int g = 0; g < 8; ++g) r[g] = a[g] + b[g];
    return r;
}

Ring ring_neg(const Ring& a) {
    Ring r{};
    for (int g = 0; g < 8; ++g) r[g] = -a[g];
    return r;
}

Ring ring_mul(const FiniteGroup& Q, const Ring& a, const Ring& b) {
    Ring r{};
    for (int g = 0; g < 8; ++g) {
        if (a[g] == 0) continue;
        for (int h = 0; h < 8; ++h) {
            if (b[h] == 0) continue;
            r[Q.mul(g, h)] += a[g] * b[h];
        }
    }
    return r;
}

bool ring_zero(const Ring& a) {
    return std::all_of(a.begin(), a.end(), [](std::int64_t x) { return x == 0; });
}

std::int64_t coefsum(const Ring& a) { return std::accumulate(a.begin(), a.end(), std::int64_t{0}); }

using RingMat = std::vector<std::vector<Ring>>;  // [row][col]

// Invariant factors of ker(B)/im(A) for integer matrices with B·A = 0,
// computed with two Smith normal forms; the quotient must be finite.
std::vector<int> integer_homology(const IntMat& A, const IntMat& B) {
    require(A.rows == B.cols, "integer_homology: maps do not compose");
    for (int u = 0; u < B.rows; ++u)
        for (int s = 0; s < A.cols; ++s) {
            BigInt acc = 0;
            for (int t = 0; t < B.cols; ++t) acc += B.at(u, t) * A.at(t, s);
            require(acc == 0, "integer_homology: composite map is nonzero");
        }
    int m = B.cols;
    auto SB = smith_normal_form(B);
    std::vector<int> kcols;
    for (int i = 0; i < m; ++i) {
        BigInt d = i < static_cast<int>(SB.diag.size()) ? SB.diag[i] : BigInt{0};
        if (d == 0) kcols.push_back(i);
    }
    int kap = static_cast<int>(kcols.size());
    if (kap == 0) return {};
    IntMat K(m, kap);
    for (int i = 0; i < m; ++i)
        for (int c = 0; c < kap; ++c) K.at(i, c) = SB.V.at(i, kcols[c]);

    // Coordinates of each column of A in the kernel basis: with U·K·V = D,
    // K·y = a  ⇔  D·(V^{-1}y) = U·a, solved by exact division.
    auto SK = smith_normal_form(K);
    IntMat Y(kap, A.cols);
    for (int c = 0; c < A.cols; ++c) {
        std::vector<BigInt> Ua(m, 0);
        for (int i = 0; i < m; ++i)
            for (int t = 0; t < m; ++t) Ua[i] += SK.U.at(i, t) * A.at(t, c);
        std::vector<BigInt> z(kap, 0);
        for (int i = 0; i < kap; ++i) {
            require(SK.diag[i] != 0, "integer_homology: kernel basis not full rank");
            require(Ua[i] % SK.diag[i] == 0, "integer_homology: column not in the kernel lattice");
            z[i] = Ua[i] / SK.diag[i];
        }
        for (int i = kap; i < m; ++i)
            require(Ua[i] == 0, "integer_homology: column leaves the kernel");
        for (int i = 0; i < kap; ++i) {
            BigInt y = 0;
            for (int t = 0; t < kap; ++t) y += SK.V.at(i, t) * z[t];
            Y.at(i, c) = y;
        }
    }
    auto SY = smith_normal_form(Y);
    int nz = 0;
    std::vector<int> factors;
    for (const BigInt& d : SY.diag) {
        if (d == 0) continue;
        ++nz;
        if (d > 1) factors.push_back(d.convert_to<int>());
    }
    require(nz == kap, "integer_homology: quotient has a free part");
    return factors;
}

}  // namespace

std::vector<int> q8_periodic_cohomology(int n) {
    require(n >= 1 && n <= 4, "the periodic resolution is tabulated for degrees 1 through 4");
    const FiniteGroup& Q = catalog_order8()[4];
    require(Q.name == "Q8", "catalog order changed");
    const int ei = 2, ej = 4, ek = 6;  // i, j, k in the catalog ordering

    auto one = ring_unit(0);
    auto mi = ring_add(ring_unit(ei), ring_neg(one));   // i - 1
    auto pi = ring_add(ring_unit(ei), one);             // i + 1
    auto mj = ring_add(ring_unit(ej), ring_neg(one));   // j - 1
    auto pj = ring_add(ring_unit(ej), one);             // j + 1
    auto mk = ring_add(ring_unit(ek), ring_neg(one));   // k - 1
    auto pk = ring_add(ring_unit(ek), one);             // k + 1
    Ring norm{};                                        // Σ_g g
    for (int g = 0; g < 8; ++g) norm[g] = 1;

    // The 4-periodic free resolution of Z over ZQ8: ranks 1,2,2,1,1,2 and
    // differentials given by right multiplication with these matrices
    // (rows = target coordinates, cols = source coordinates).
    std::vector<RingMat> R(6);
    R[1] = {{mi, mj}};
    R[2] = {{pi, pk}, {ring_neg(pj), mi}};
    R[3] = {{mi}, {ring_neg(mk)}};
    R[4] = {{norm}};
    R[5] = {{mi, mj}};

    for (int i = 1; i + 1 <= 5; ++i) {
        const RingMat& Ri = R[i];
        const RingMat& Rn = R[i + 1];
        int tgt = static_cast<int>(Ri.size());
        int mid = static_cast<int>(Rn.size());
        int srcn = static_cast<int>(Rn[0].size());
        require(static_cast<int>(Ri[0].size()) == mid, "resolution ranks do not chain");
        for (int u = 0; u < tgt; ++u)
            for (int s = 0; s < srcn; ++s) {
                Ring acc{};
                for (int t = 0; t < mid; ++t)
                    acc = ring_add(acc, ring_mul(Q, Rn[t][s], Ri[u][t]));
                require(ring_zero(acc), "consecutive differentials do not compose to zero");
            }
    }

    // Apply Hom_{ZQ8}(-, Z) with trivial action: each ring entry collapses
    // to its coefficient sum and the matrix transposes.
    auto dual = [](const RingMat& M) {
        int rows = static_cast<int>(M.size());
        int cols = static_cast<int>(M[0].size());
        IntMat D(cols, rows);
        for (int u = 0; u < rows; ++u)
            for (int s = 0; s < cols; ++s) D.at(s, u) = coefsum(M[u][s]);
        return D;
    };
    std::vector<IntMat> d(5);
    for (int j = 0; j <= 4; ++j) d[j] = dual(R[j + 1]);

    return integer_homology(d[n - 1], d[n]);
}

std::vector<int> q8_periodic_h4() { return q8_periodic_cohomology(4); }

}  // namespace fuscat
