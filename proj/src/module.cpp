#include "fuscat/module.hpp"

namespace fuscat {

namespace {

int posmod(long long x, int m) {
    int r = static_cast<int>(x % m);
    return r < 0 ? r + m : r;
}

// rows mod d_i of the product of two action matrices
std::vector<int> mat_mul(const std::vector<int>& X, const std::vector<int>& Y,
                         const std::vector<int>& d) {
    int r = static_cast<int>(d.size());
    std::vector<int> Z(static_cast<size_t>(r) * r, 0);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) {
            long long s = 0;
            for (int t = 0; t < r; ++t) s += 1LL * X[i * r + t] * Y[t * r + j];
            Z[i * r + j] = posmod(s, d[i]);
        }
    return Z;
}

}  // namespace

int FiniteModule::size() const {
    int s = 1;
    for (int d : factors) s *= d;
    return s;
}

std::vector<int> FiniteModule::act(int k, const std::vector<int>& a) const {
    int r = rank();
    std::vector<int> out(r, 0);
    const std::vector<int>& M = action[k];
    for (int i = 0; i < r; ++i) {
        long long s = 0;
        for (int j = 0; j < r; ++j) s += 1LL * M[i * r + j] * a[j];
        out[i] = posmod(s, factors[i]);
    }
    return out;
}

std::vector<int> FiniteModule::add(const std::vector<int>& a, const std::vector<int>& b) const {
    int r = rank();
    std::vector<int> out(r);
    for (int i = 0; i < r; ++i) out[i] = (a[i] + b[i]) % factors[i];
    return out;
}

std::vector<int> FiniteModule::neg(const std::vector<int>& a) const {
    int r = rank();
    std::vector<int> out(r);
    for (int i = 0; i < r; ++i) out[i] = (factors[i] - a[i]) % factors[i];
    return out;
}

int FiniteModule::index_of(const std::vector<int>& a) const {
    int idx = 0;
    for (int i = 0; i < rank(); ++i) idx = idx * factors[i] + a[i] % factors[i];
    return idx;
}

std::vector<int> FiniteModule::element(int idx) const {
    int r = rank();
    std::vector<int> a(r);
    for (int i = r - 1; i >= 0; --i) {
        a[i] = idx % factors[i];
        idx /= factors[i];
    }
    require(idx == 0, "module element index out of range");
    return a;
}

bool FiniteModule::is_trivial_action() const {
    for (const auto& M : action)
        if (M != action[0]) return false;
    return true;
}

bool FiniteModule::same_module(const FiniteModule& other) const {
    return K.table == other.K.table && factors == other.factors && action == other.action;
}

FiniteModule FiniteModule::make(FiniteGroup K, std::vector<int> factors,
                                std::vector<std::vector<int>> action) {
    int r = static_cast<int>(factors.size());
    for (int i = 0; i < r; ++i) {
        require(factors[i] > 1, "module invariant factor must exceed 1");
        if (i + 1 < r)
            require(factors[i + 1] % factors[i] == 0, "module factors must form a divisor chain");
    }
    require(static_cast<int>(action.size()) == K.n, "module needs one action matrix per element");
    for (auto& M : action) {
        require(static_cast<int>(M.size()) == r * r, "module action matrix has wrong shape");
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j) {
                // well-definedness on ⊕ Z/d_j: changing a_j by d_j must not
                // change the image mod d_i
                require((1LL * M[i * r + j] * factors[j]) % factors[i] == 0,
                        "module action does not respect the cyclic orders");
                M[i * r + j] = posmod(M[i * r + j], factors[i]);
            }
    }

    FiniteModule A;
    A.K = std::move(K);
    A.factors = std::move(factors);
    A.action = std::move(action);

    std::vector<int> id(static_cast<size_t>(r) * r, 0);
    for (int i = 0; i < r; ++i) id[i * r + i] = 1;
    require(A.action[0] == id, "module action of the identity must be the identity matrix");
    for (int k1 = 0; k1 < A.K.n; ++k1) {
        require(mat_mul(A.action[k1], A.action[A.K.inv(k1)], A.factors) == id,
                "module action matrix is not invertible");
        for (int k2 = 0; k2 < A.K.n; ++k2)
            require(mat_mul(A.action[k1], A.action[k2], A.factors) ==
                        A.action[A.K.mul(k1, k2)],
                    "module action is not a homomorphism");
    }
    return A;
}

FiniteModule FiniteModule::trivial(FiniteGroup K, std::vector<int> factors) {
    int r = static_cast<int>(factors.size());
    std::vector<int> id(static_cast<size_t>(r) * r, 0);
    for (int i = 0; i < r; ++i) id[i * r + i] = 1;
    std::vector<std::vector<int>> action(K.n, id);
    return make(std::move(K), std::move(factors), std::move(action));
}

FiniteModule dual_module(const FiniteModule& A) {
    int r = A.rank();
    std::vector<std::vector<int>> daction(A.K.n, std::vector<int>(static_cast<size_t>(r) * r, 0));
    for (int k = 0; k < A.K.n; ++k)
        for (int j = 0; j < r; ++j)
            for (int i = 0; i < r; ++i) {
                long long v = 1LL * A.action[k][i * r + j] * A.factors[j];
                require(v % A.factors[i] == 0, "dual action entry is not integral");
                daction[k][j * r + i] = posmod(v / A.factors[i], A.factors[j]);
            }
    return FiniteModule::make(A.K, A.factors, std::move(daction));
}

int pairing_num(const FiniteModule& A, const std::vector<int>& rho, const std::vector<int>& a) {
    int e = A.exponent();
    long long s = 0;
    for (int i = 0; i < A.rank(); ++i) s += 1LL * rho[i] * a[i] * (e / A.factors[i]);
    return posmod(s, e);
}

}  // namespace fuscat
