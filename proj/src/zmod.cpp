#include "fuscat/zmod.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <map>

namespace fuscat::zmod {

int val2(std::uint64_t x) {
    require(x != 0, "val2 of zero");
    return std::countr_zero(x);
}

Val inv_odd(Val u, int mexp) {
    require((u & 1u) != 0, "inv_odd of even value");
    // Newton iteration x <- x(2 - ux) doubles the number of correct bits.
    std::uint64_t mask = (mexp == 32) ? ~0ull >> 32 : ((1ull << mexp) - 1);
    std::uint64_t x = u;  // correct mod 2^3 already (u odd => u*u ≡ 1 mod 8)
    for (int i = 0; i < 5; ++i) x = (x * (2 - (std::uint64_t)u * x)) & mask;
    require(((std::uint64_t)u * x & mask) == 1, "inv_odd failed");
    return static_cast<Val>(x);
}

namespace {

struct Engine {
    int mexp;
    std::uint64_t mask;
    int cols;
    // pivot column -> row storage index
    std::map<int, int> pivots;
    std::vector<std::vector<Val>> store;
    std::deque<std::vector<Val>> queue;

    Engine(int cols_, int mexp_) : mexp(mexp_), mask((1ull << mexp_) - 1), cols(cols_) {
        require(mexp_ >= 1 && mexp_ <= kMaxModExp, "modulus exponent out of range");
    }

    // row -= mu * other, starting at column c0 (columns before are zero both)
    void submul(std::vector<Val>& row, const std::vector<Val>& other, std::uint64_t mu, int c0) {
        if (mu == 0) return;
        for (int c = c0; c < cols; ++c) {
            std::uint64_t v = row[c] + mask + 1 - ((mu * other[c]) & mask);
            row[c] = static_cast<Val>(v & mask);
        }
    }

    void scale(std::vector<Val>& row, std::uint64_t u, int c0) {
        for (int c = c0; c < cols; ++c) row[c] = static_cast<Val>((u * row[c]) & mask);
    }

    // Normalize so that the leading entry at column c becomes exactly 2^v.
    void normalize(std::vector<Val>& row, int c) {
        int v = val2(row[c]);
        Val u = static_cast<Val>(row[c] >> v);
        if (u != 1) scale(row, inv_odd(u, mexp), c);
        require(row[c] == (Val(1) << v), "normalize failed");
    }

    void enqueue_shadow(const std::vector<Val>& row, int c, int v) {
        if (v == 0) return;  // unit pivot: shadow is the zero row
        std::vector<Val> sh(cols, 0);
        std::uint64_t f = 1ull << (mexp - v);
        for (int j = c; j < cols; ++j) sh[j] = static_cast<Val>((f * row[j]) & mask);
        queue.push_back(std::move(sh));
    }

    void process(std::vector<Val> row) {
        int c = 0;
        while (c < cols) {
            if (row[c] == 0) { ++c; continue; }
            auto it = pivots.find(c);
            if (it == pivots.end()) {
                normalize(row, c);
                int v = val2(row[c]);
                int idx = static_cast<int>(store.size());
                store.push_back(std::move(row));
                pivots.emplace(c, idx);
                enqueue_shadow(store[idx], c, v);
                return;
            }
            std::vector<Val>& p = store[it->second];
            int vp = val2(p[c]);
            int vr = val2(row[c]);
            if (vr >= vp) {
                submul(row, p, row[c] >> vp, c);  // exact: p[c] == 2^vp
            } else {
                normalize(row, c);
                std::swap(row, p);  // new row becomes the pivot
                enqueue_shadow(p, c, vr);
                // displaced old pivot continues as the working row
                submul(row, p, row[c] >> vr, c);
            }
        }
    }

    Howell finish() {
        Howell H;
        H.mexp = mexp;
        H.cols = cols;
        for (auto& [c, idx] : pivots) {
            H.rows.push_back(std::move(store[idx]));
            H.pivot_col.push_back(c);
            H.pivot_vexp.push_back(val2(H.rows.back()[c]));
        }
        // Reduce entries above each pivot modulo the pivot value 2^v.
        for (size_t i = 0; i < H.rows.size(); ++i) {
            int c = H.pivot_col[i];
            int v = H.pivot_vexp[i];
            for (size_t q = 0; q < i; ++q) {
                std::uint64_t mu = H.rows[q][c] >> v;
                submul(H.rows[q], H.rows[i], mu, c);
            }
        }
        return H;
    }
};

}  // namespace

Howell howell_form(std::vector<std::vector<Val>> rows, int cols, int mexp) {
    Engine e(cols, mexp);
    for (auto& r : rows) {
        require(static_cast<int>(r.size()) == cols, "howell_form: row length mismatch");
        for (auto& x : r) x = static_cast<Val>(x & e.mask);
        e.queue.push_back(std::move(r));
    }
    while (!e.queue.empty()) {
        auto r = std::move(e.queue.front());
        e.queue.pop_front();
        e.process(std::move(r));
    }
    return e.finish();
}

LinSolver::LinSolver(const Mat& A, int mexp) : mexp_(mexp), m_(A.rows), n_(A.cols), A_(A) {
    // Rows of [A^T | I]: combinations are ((A·c)^T, c^T), so rows of the
    // Howell form with zero first block carry kernel elements in their tails,
    // and reducing (b, 0) to (0, -x) solves A·x = b.
    std::vector<std::vector<Val>> rows;
    rows.reserve(n_);
    std::uint64_t mask = (1ull << mexp) - 1;
    for (int j = 0; j < n_; ++j) {
        std::vector<Val> r(m_ + n_, 0);
        for (int i = 0; i < m_; ++i) r[i] = static_cast<Val>(A.at(i, j) & mask);
        r[m_ + j] = 1;
        rows.push_back(std::move(r));
    }
    H_ = howell_form(std::move(rows), m_ + n_, mexp);
    for (size_t i = 0; i < H_.rows.size(); ++i) {
        if (H_.pivot_col[i] >= m_) {
            std::vector<Val> g(H_.rows[i].begin() + m_, H_.rows[i].end());
            kernel_.push_back(std::move(g));
        }
    }
}

std::optional<std::vector<Val>> LinSolver::solve(const std::vector<Val>& b) const {
    require(static_cast<int>(b.size()) == m_, "solve: rhs length mismatch");
    std::uint64_t mask = (1ull << mexp_) - 1;
    std::vector<Val> w(m_ + n_, 0);
    for (int i = 0; i < m_; ++i) w[i] = static_cast<Val>(b[i] & mask);
    for (size_t i = 0; i < H_.rows.size(); ++i) {
        int c = H_.pivot_col[i];
        if (c >= m_) break;  // remaining rows have zero first block
        Val r = w[c];
        if (r == 0) continue;
        int v = H_.pivot_vexp[i];
        if (val2(r) < v) return std::nullopt;  // leading ideal is (2^v): no fit
        std::uint64_t mu = r >> v;
        for (int j = c; j < m_ + n_; ++j)
            w[j] = static_cast<Val>((w[j] + mask + 1 - ((mu * H_.rows[i][j]) & mask)) & mask);
    }
    for (int i = 0; i < m_; ++i)
        if (w[i] != 0) return std::nullopt;
    std::vector<Val> x(n_);
    for (int j = 0; j < n_; ++j) x[j] = static_cast<Val>((mask + 1 - w[m_ + j]) & mask);
    // Always verify by substitution: exactness everywhere else leans on this.
    for (int i = 0; i < m_; ++i) {
        std::uint64_t s = 0;
        for (int j = 0; j < n_; ++j) s += (std::uint64_t)A_.at(i, j) * x[j] & mask;
        require(((s - b[i]) & mask) == 0, "solve: substitution check failed");
    }
    return x;
}

std::vector<std::vector<Val>> kernel_mod(const Mat& A, int mexp) {
    return LinSolver(A, mexp).kernel();
}

std::optional<std::vector<Val>> solve_mod(const Mat& A, const std::vector<Val>& b, int mexp) {
    return LinSolver(A, mexp).solve(b);
}

Diag diag_mod2k(Mat A, int mexp, bool want_V, bool want_Uinv) {
    require(mexp >= 1 && mexp <= kMaxModExp, "modulus exponent out of range");
    std::uint64_t mask = (1ull << mexp) - 1;
    int R = A.rows, C = A.cols;
    Diag d;
    d.have_V = want_V;
    d.have_Uinv = want_Uinv;
    if (want_V) {
        d.V = Mat(C, C);
        for (int i = 0; i < C; ++i) d.V.at(i, i) = 1;
    }
    if (want_Uinv) {
        d.Uinv = Mat(R, R);
        for (int i = 0; i < R; ++i) d.Uinv.at(i, i) = 1;
    }
    int slots = std::min(R, C);

    auto row_submul = [&](int rt, int rs, std::uint64_t mu, int c0) {
        // row rt -= mu * row rs  =>  Uinv col rs += mu * col rt
        if (mu == 0) return;
        for (int c = c0; c < C; ++c)
            A.at(rt, c) = static_cast<Val>((A.at(rt, c) + mask + 1 - ((mu * A.at(rs, c)) & mask)) & mask);
        if (want_Uinv)
            for (int r = 0; r < R; ++r)
                d.Uinv.at(r, rs) = static_cast<Val>((d.Uinv.at(r, rs) + ((mu * d.Uinv.at(r, rt)) & mask)) & mask);
    };
    auto col_submul = [&](int ct, int cs, std::uint64_t mu, int r0) {
        // col ct -= mu * col cs  =>  same operation on V
        if (mu == 0) return;
        for (int r = r0; r < R; ++r)
            A.at(r, ct) = static_cast<Val>((A.at(r, ct) + mask + 1 - ((mu * A.at(r, cs)) & mask)) & mask);
        if (want_V)
            for (int r = 0; r < C; ++r)
                d.V.at(r, ct) = static_cast<Val>((d.V.at(r, ct) + mask + 1 - ((mu * d.V.at(r, cs)) & mask)) & mask);
    };
    auto row_swap = [&](int r1, int r2) {
        if (r1 == r2) return;
        for (int c = 0; c < C; ++c) std::swap(A.at(r1, c), A.at(r2, c));
        if (want_Uinv)
            for (int r = 0; r < R; ++r) std::swap(d.Uinv.at(r, r1), d.Uinv.at(r, r2));
    };
    auto col_swap = [&](int c1, int c2) {
        if (c1 == c2) return;
        for (int r = 0; r < R; ++r) std::swap(A.at(r, c1), A.at(r, c2));
        if (want_V)
            for (int r = 0; r < C; ++r) std::swap(d.V.at(r, c1), d.V.at(r, c2));
    };
    auto row_scale = [&](int r0, std::uint64_t u) {
        // row r0 *= u  =>  Uinv col r0 *= u^{-1}
        for (int c = 0; c < C; ++c) A.at(r0, c) = static_cast<Val>((u * A.at(r0, c)) & mask);
        if (want_Uinv) {
            std::uint64_t ui = inv_odd(static_cast<Val>(u), mexp);
            for (int r = 0; r < R; ++r) d.Uinv.at(r, r0) = static_cast<Val>((ui * d.Uinv.at(r, r0)) & mask);
        }
    };

    for (int t = 0; t < slots; ++t) {
        // Global minimum-valuation pivot; ties resolved by lowest (row, col).
        int best_r = -1, best_c = -1, best_v = mexp + 1;
        for (int r = t; r < R && best_v > 0; ++r)
            for (int c = t; c < C; ++c) {
                Val x = A.at(r, c);
                if (x == 0) continue;
                int v = val2(x);
                if (v < best_v) { best_v = v; best_r = r; best_c = c; if (v == 0) break; }
            }
        if (best_r < 0) {
            for (int s = t; s < slots; ++s) d.vexp.push_back(mexp);
            break;
        }
        row_swap(t, best_r);
        col_swap(t, best_c);
        int v = val2(A.at(t, t));
        Val u = static_cast<Val>(A.at(t, t) >> v);
        if (u != 1) row_scale(t, inv_odd(u, mexp));
        require(A.at(t, t) == (Val(1) << v), "diag pivot normalization failed");
        for (int r = t + 1; r < R; ++r) row_submul(r, t, A.at(r, t) >> v, t);
        for (int c = t + 1; c < C; ++c) col_submul(c, t, A.at(t, c) >> v, t);
        d.vexp.push_back(v);
        if (!d.vexp.empty() && d.vexp.size() >= 2)
            require(d.vexp[d.vexp.size() - 2] <= v, "diag valuations not ascending");
    }
    return d;
}

AbelianQuotient abelian_quotient(int n,
                                 const std::vector<std::vector<Val>>& zgens,
                                 const std::vector<std::vector<Val>>& bgens,
                                 int mexp, int max_factor_exp) {
    AbelianQuotient Q;
    Q.mexp_ = mexp;
    Q.n_ = n;
    int g = static_cast<int>(zgens.size());
    int b = static_cast<int>(bgens.size());
    std::uint64_t mask = (1ull << mexp) - 1;

    if (g > 0) {
        // Relations on the z-generators: x-parts of ker [Z | B].
        Mat ZB(n, g + b);
        for (int j = 0; j < g; ++j)
            for (int i = 0; i < n; ++i) ZB.at(i, j) = zgens[j][i];
        for (int j = 0; j < b; ++j)
            for (int i = 0; i < n; ++i) ZB.at(i, g + j) = bgens[j][i];
        auto ker = kernel_mod(ZB, mexp);
        Mat R(g, static_cast<int>(ker.size()));
        for (int j = 0; j < R.cols; ++j)
            for (int i = 0; i < g; ++i) R.at(i, j) = ker[j][i];
        Diag dg = diag_mod2k(R, mexp, false, true);
        // Coordinates beyond the diagonal slots carry no relation at all, so
        // they contribute full-order factors 2^mexp (there is no free part in
        // a finite ambient group).
        std::vector<int> vexp = dg.vexp;
        vexp.resize(g, mexp);
        std::vector<int> keep;  // slots with exponent in (0, max_factor_exp]
        for (int i = 0; i < g; ++i) {
            int v = vexp[i];
            if (v == 0) continue;
            require(v <= max_factor_exp, "quotient exponent exceeds bound");
            keep.push_back(i);
            Q.factors_.push_back(1 << v);
        }
        for (int slot : keep) {
            std::vector<Val> vec(n, 0);
            for (int j = 0; j < g; ++j) {
                std::uint64_t c = dg.Uinv.at(j, slot);
                if (c == 0) continue;
                for (int i = 0; i < n; ++i)
                    vec[i] = static_cast<Val>((vec[i] + c * zgens[j][i]) & mask);
            }
            Q.basis_.push_back(std::move(vec));
        }
    }

    int r = static_cast<int>(Q.basis_.size());
    Mat S(n, r + b);
    for (int j = 0; j < r; ++j)
        for (int i = 0; i < n; ++i) S.at(i, j) = Q.basis_[j][i];
    for (int j = 0; j < b; ++j)
        for (int i = 0; i < n; ++i) S.at(i, r + j) = bgens[j][i];
    Q.solver_ = LinSolver(S, mexp);

    // The basis must have unit-vector coordinates; anything else is a bug.
    for (int l = 0; l < r; ++l) {
        auto c = Q.coords(Q.basis_[l]);
        for (int i = 0; i < r; ++i)
            require(c[i] == (i == l ? 1 : 0), "quotient basis does not have unit coordinates");
    }
    return Q;
}

AbelianQuotient abelian_quotient_from_parts(int n,
                                            const std::vector<int>& factors,
                                            const std::vector<std::vector<Val>>& basis,
                                            const std::vector<std::vector<Val>>& bgens,
                                            int mexp, int max_factor_exp) {
    int r = static_cast<int>(basis.size());
    int b = static_cast<int>(bgens.size());
    require(static_cast<int>(factors.size()) == r, "parts: one basis vector per factor");
    for (int i = 0; i < r; ++i) {
        int f = factors[i];
        require(f > 1 && (f & (f - 1)) == 0, "parts: factors must be powers of two > 1");
        require(f <= (1 << max_factor_exp), "parts: factor exceeds the exponent bound");
        if (i + 1 < r) require(factors[i + 1] % f == 0, "parts: factors must form a divisor chain");
        require(static_cast<int>(basis[i].size()) == n, "parts: basis vector length mismatch");
    }

    AbelianQuotient Q;
    Q.mexp_ = mexp;
    Q.n_ = n;
    Q.factors_ = factors;
    Q.basis_ = basis;

    Mat S(n, r + b);
    for (int j = 0; j < r; ++j)
        for (int i = 0; i < n; ++i) S.at(i, j) = basis[j][i];
    for (int j = 0; j < b; ++j) {
        require(static_cast<int>(bgens[j].size()) == n, "parts: bgens vector length mismatch");
        for (int i = 0; i < n; ++i) S.at(i, r + j) = bgens[j][i];
    }
    Q.solver_ = LinSolver(S, mexp);

    // Relations among the basis classes: x-parts of ker [basis | bgens].
    // Their diagonal exponents must reproduce the claimed factors, which
    // verifies both the orders and the independence of the basis.
    if (r > 0) {
        const auto& ker = Q.solver_.kernel();
        Mat R(r, static_cast<int>(ker.size()));
        for (int j = 0; j < R.cols; ++j)
            for (int i = 0; i < r; ++i) R.at(i, j) = ker[j][i];
        Diag dg = diag_mod2k(R, mexp, false, false);
        std::vector<int> vexp = dg.vexp;
        vexp.resize(r, mexp);
        std::vector<int> expect;
        for (int f : factors) expect.push_back(val2(static_cast<std::uint64_t>(f)));
        std::sort(expect.begin(), expect.end());
        require(vexp == expect, "parts: basis class orders do not match the claimed factors");
    }

    for (int l = 0; l < r; ++l) {
        auto c = Q.coords(Q.basis_[l]);
        for (int i = 0; i < r; ++i)
            require(c[i] == (i == l ? 1 : 0), "parts: basis does not have unit coordinates");
    }
    return Q;
}

std::vector<std::int64_t> AbelianQuotient::coords(const std::vector<Val>& v) const {
    require(static_cast<int>(v.size()) == n_, "coords: vector length mismatch");
    auto x = solver_.solve(v);
    if (!x) throw NotInGroup("vector lies outside the span (coords infeasible)");
    std::vector<std::int64_t> c(factors_.size());
    for (size_t i = 0; i < factors_.size(); ++i) c[i] = static_cast<std::int64_t>((*x)[i]) % factors_[i];
    return c;
}

bool AbelianQuotient::member(const std::vector<Val>& v) const {
    require(static_cast<int>(v.size()) == n_, "member: vector length mismatch");
    return solver_.solve(v).has_value();
}

}  // namespace fuscat::zmod
