#include "fuscat/cochain.hpp"

#include <algorithm>
#include <map>
#include <mutex>

namespace fuscat {

namespace {

bool has_identity(const int* args, int n) {
    for (int i = 0; i < n; ++i)
        if (args[i] == 0) return true;
    return false;
}

// The n+2 terms of the bar differential evaluated at the (n+1)-tuple g:
//   (δf)(g_0..g_n) = ^{g_0}f(g_1..g_n) + Σ_{i=1..n} (-1)^i f(..g_{i-1}g_i..)
//                    + (-1)^{n+1} f(g_0..g_{n-1})
// fn(sign, args, leading) is called once per term; `leading` marks the term
// that carries the group action (trivial for torus/integer coefficients).
template <class Fn>
void for_terms(const FiniteGroup& G, int n, const int* g, Fn&& fn) {
    fn(+1, g + 1, true);
    std::vector<int> buf(n);
    int sign = -1;
    for (int i = 1; i <= n; ++i) {
        for (int j = 0; j + 1 < i; ++j) buf[j] = g[j];
        buf[i - 1] = G.mul(g[i - 1], g[i]);
        for (int j = i; j < n; ++j) buf[j] = g[j + 1];
        fn(sign, buf.data(), false);
        sign = -sign;
    }
    fn(sign, g, false);
}

}  // namespace

std::int64_t TupleSpace::size() const {
    std::int64_t s = 1;
    for (int i = 0; i < deg; ++i) s *= (q - 1);
    return s;
}

std::int64_t TupleSpace::index(const int* t) const {
    std::int64_t idx = 0;
    for (int i = 0; i < deg; ++i) idx = idx * (q - 1) + (t[i] - 1);
    return idx;
}

void TupleSpace::tuple(std::int64_t idx, int* out) const {
    for (int i = deg - 1; i >= 0; --i) {
        out[i] = static_cast<int>(idx % (q - 1)) + 1;
        idx /= (q - 1);
    }
}

zmod::Val TorusCochain::eval(const int* args) const {
    if (has_identity(args, deg)) return 0;
    return v[TupleSpace{q, deg}.index(args)];
}

zmod::Val TorusCochain::eval(const std::vector<int>& args) const { return eval(args.data()); }

TorusCochain zero_torus_cochain(int q, int deg, int kexp) {
    TorusCochain f;
    f.q = q;
    f.deg = deg;
    f.kexp = kexp;
    f.v.assign(TupleSpace{q, deg}.size(), 0);
    return f;
}

TorusCochain add(const TorusCochain& f, const TorusCochain& g) {
    require(f.q == g.q && f.deg == g.deg && f.kexp == g.kexp, "torus cochain shape mismatch");
    TorusCochain h = f;
    zmod::Val mask = (zmod::Val{1} << f.kexp) - 1;
    for (size_t i = 0; i < h.v.size(); ++i) h.v[i] = (h.v[i] + g.v[i]) & mask;
    return h;
}

TorusCochain sub(const TorusCochain& f, const TorusCochain& g) {
    require(f.q == g.q && f.deg == g.deg && f.kexp == g.kexp, "torus cochain shape mismatch");
    TorusCochain h = f;
    zmod::Val mask = (zmod::Val{1} << f.kexp) - 1;
    for (size_t i = 0; i < h.v.size(); ++i) h.v[i] = (h.v[i] - g.v[i]) & mask;
    return h;
}

TorusCochain scale(std::int64_t c, const TorusCochain& f) {
    TorusCochain h = f;
    zmod::Val mask = (zmod::Val{1} << f.kexp) - 1;
    for (auto& x : h.v) x = static_cast<zmod::Val>(c * x) & mask;
    return h;
}

bool is_zero(const TorusCochain& f) {
    return std::all_of(f.v.begin(), f.v.end(), [](zmod::Val x) { return x == 0; });
}

TorusCochain coboundary(const FiniteGroup& G, const TorusCochain& f) {
    require(f.q == G.n, "cochain does not live on this group");
    TorusCochain out = zero_torus_cochain(f.q, f.deg + 1, f.kexp);
    zmod::Val mask = (zmod::Val{1} << f.kexp) - 1;
    TupleSpace ts{f.q, f.deg + 1};
    std::vector<int> g(f.deg + 1);
    for (std::int64_t idx = 0; idx < ts.size(); ++idx) {
        ts.tuple(idx, g.data());
        std::int64_t acc = 0;
        for_terms(G, f.deg, g.data(),
                  [&](int sign, const int* args, bool) { acc += sign * std::int64_t(f.eval(args)); });
        out.v[idx] = static_cast<zmod::Val>(acc) & mask;
    }
    return out;
}

bool is_cocycle(const FiniteGroup& G, const TorusCochain& f) {
    return is_zero(coboundary(G, f));
}

TorusCochain pullback(const TorusCochain& f, const std::vector<int>& images, int source_q) {
    TorusCochain out = zero_torus_cochain(source_q, f.deg, f.kexp);
    TupleSpace ts{source_q, f.deg};
    std::vector<int> g(f.deg), h(f.deg);
    for (std::int64_t idx = 0; idx < ts.size(); ++idx) {
        ts.tuple(idx, g.data());
        for (int i = 0; i < f.deg; ++i) h[i] = images[g[i]];
        out.v[idx] = f.eval(h.data());
    }
    return out;
}

std::int64_t IntCochain::eval(const int* args) const {
    if (has_identity(args, deg)) return 0;
    return v[TupleSpace{q, deg}.index(args)];
}

IntCochain coboundary(const FiniteGroup& G, const IntCochain& f) {
    require(f.q == G.n, "cochain does not live on this group");
    IntCochain out;
    out.q = f.q;
    out.deg = f.deg + 1;
    TupleSpace ts{f.q, f.deg + 1};
    out.v.assign(ts.size(), 0);
    std::vector<int> g(f.deg + 1);
    for (std::int64_t idx = 0; idx < ts.size(); ++idx) {
        ts.tuple(idx, g.data());
        std::int64_t acc = 0;
        for_terms(G, f.deg, g.data(),
                  [&](int sign, const int* args, bool) { acc += sign * f.eval(args); });
        out.v[idx] = acc;
    }
    return out;
}

bool is_cocycle(const FiniteGroup& G, const IntCochain& f) {
    auto d = coboundary(G, f);
    return std::all_of(d.v.begin(), d.v.end(), [](std::int64_t x) { return x == 0; });
}

std::vector<int> ModuleCochain::eval(const int* args) const {
    if (has_identity(args, deg)) return A.zero();
    int r = A.rank();
    std::int64_t idx = TupleSpace{A.K.n, deg}.index(args);
    return std::vector<int>(v.begin() + idx * r, v.begin() + (idx + 1) * r);
}

std::vector<int> ModuleCochain::eval(const std::vector<int>& args) const { return eval(args.data()); }

void ModuleCochain::set(const int* args, const std::vector<int>& value) {
    require(!has_identity(args, deg), "normalized cochains vanish on identity arguments");
    int r = A.rank();
    std::int64_t idx = TupleSpace{A.K.n, deg}.index(args);
    for (int j = 0; j < r; ++j) v[idx * r + j] = value[j] % A.factors[j];
}

ModuleCochain zero_module_cochain(const FiniteModule& A, int deg) {
    ModuleCochain F;
    F.A = A;
    F.deg = deg;
    F.v.assign(TupleSpace{A.K.n, deg}.size() * A.rank(), 0);
    return F;
}

bool is_zero(const ModuleCochain& F) {
    return std::all_of(F.v.begin(), F.v.end(), [](int x) { return x == 0; });
}

ModuleCochain coboundary(const ModuleCochain& F) {
    const FiniteGroup& K = F.A.K;
    ModuleCochain out = zero_module_cochain(F.A, F.deg + 1);
    TupleSpace ts{K.n, F.deg + 1};
    int r = F.A.rank();
    std::vector<int> g(F.deg + 1);
    for (std::int64_t idx = 0; idx < ts.size(); ++idx) {
        ts.tuple(idx, g.data());
        std::vector<int> acc(r, 0);
        for_terms(K, F.deg, g.data(), [&](int sign, const int* args, bool leading) {
            std::vector<int> val = F.eval(args);
            if (leading) val = F.A.act(g[0], val);
            if (sign < 0) val = F.A.neg(val);
            acc = F.A.add(acc, val);
        });
        for (int j = 0; j < r; ++j) out.v[idx * r + j] = acc[j];
    }
    return out;
}

bool is_cocycle(const ModuleCochain& F) { return is_zero(coboundary(F)); }

BarMatrix bar_matrix(const FiniteGroup& G, int n) {
    static std::mutex mu;
    static std::map<std::pair<std::uint64_t, int>, BarMatrix> memo;
    std::pair<std::uint64_t, int> key{G.table_hash(), n};
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
    }

    TupleSpace src{G.n, n}, dst{G.n, n + 1};
    BarMatrix M;
    M.rows = dst.size();
    M.cols = src.size();
    auto data = std::make_shared<std::vector<std::int8_t>>(M.rows * M.cols, 0);
    std::vector<int> g(n + 1);
    for (std::int64_t idx = 0; idx < M.rows; ++idx) {
        dst.tuple(idx, g.data());
        for_terms(G, n, g.data(), [&](int sign, const int* args, bool) {
            if (has_identity(args, n)) return;
            (*data)[idx * M.cols + src.index(args)] += static_cast<std::int8_t>(sign);
        });
    }
    M.a = std::move(data);

    std::lock_guard<std::mutex> lock(mu);
    auto [it, inserted] = memo.emplace(key, M);
    return it->second;
}

zmod::Mat module_bar_matrix_embedded(const FiniteModule& A, int n, int mexp) {
    const FiniteGroup& K = A.K;
    int r = A.rank();
    require(mexp >= 1 && mexp <= zmod::kMaxModExp, "modulus exponent out of range");
    std::int64_t mod = std::int64_t{1} << mexp;
    require(A.exponent() >= 1 && mod % A.exponent() == 0,
            "embedding modulus must be a multiple of the module exponent");
    TupleSpace src{K.n, n}, dst{K.n, n + 1};
    zmod::Mat out(static_cast<int>(dst.size()) * r, static_cast<int>(src.size()) * r);
    if (r == 0) return out;
    std::vector<int> g(n + 1);
    for (std::int64_t idx = 0; idx < dst.size(); ++idx) {
        dst.tuple(idx, g.data());
        for_terms(K, n, g.data(), [&](int sign, const int* args, bool leading) {
            if (has_identity(args, n)) return;
            int col0 = static_cast<int>(src.index(args)) * r;
            int row0 = static_cast<int>(idx) * r;
            if (leading) {
                const std::vector<int>& act = A.action[g[0]];
                for (int i = 0; i < r; ++i)
                    for (int j = 0; j < r; ++j) {
                        // Rescaled entry M_ij·d_j/d_i: integral because the
                        // action is well defined on Z/d_i coordinates.
                        std::int64_t e =
                            std::int64_t(act[i * r + j]) * A.factors[j] / A.factors[i];
                        zmod::Val& cell = out.at(row0 + i, col0 + j);
                        cell = static_cast<zmod::Val>(((cell + sign * e) % mod + mod) % mod);
                    }
            } else {
                for (int j = 0; j < r; ++j) {
                    zmod::Val& cell = out.at(row0 + j, col0 + j);
                    cell = static_cast<zmod::Val>(((cell + sign) % mod + mod) % mod);
                }
            }
        });
    }
    return out;
}

zmod::Mat bar_matrix_mod(const FiniteGroup& G, int n, int mexp) {
    BarMatrix M = bar_matrix(G, n);
    zmod::Mat out(static_cast<int>(M.rows), static_cast<int>(M.cols));
    zmod::Val mask = mexp >= 32 ? ~zmod::Val{0} : (zmod::Val{1} << mexp) - 1;
    for (std::int64_t i = 0; i < M.rows * M.cols; ++i)
        out.a[i] = static_cast<zmod::Val>(static_cast<std::int64_t>((*M.a)[i])) & mask;
    return out;
}

}  // namespace fuscat
