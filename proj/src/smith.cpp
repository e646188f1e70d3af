#include "fuscat/smith.hpp"

#include <algorithm>

namespace fuscat {

namespace {

void row_addmul(IntMat& M, int rt, int rs, const BigInt& mu) {
    for (int c = 0; c < M.cols; ++c) M.at(rt, c) += mu * M.at(rs, c);
}
void col_addmul(IntMat& M, int ct, int cs, const BigInt& mu) {
    for (int r = 0; r < M.rows; ++r) M.at(r, ct) += mu * M.at(r, cs);
}
void row_swap(IntMat& M, int r1, int r2) {
    if (r1 == r2) return;
    for (int c = 0; c < M.cols; ++c) std::swap(M.at(r1, c), M.at(r2, c));
}
void col_swap(IntMat& M, int c1, int c2) {
    if (c1 == c2) return;
    for (int r = 0; r < M.rows; ++r) std::swap(M.at(r, c1), M.at(r, c2));
}
void row_negate(IntMat& M, int r) {
    for (int c = 0; c < M.cols; ++c) M.at(r, c) = -M.at(r, c);
}

IntMat identity(int n) {
    IntMat I(n, n);
    for (int i = 0; i < n; ++i) I.at(i, i) = 1;
    return I;
}

}  // namespace

SmithDecomposition smith_normal_form(const IntMat& A0) {
    IntMat A = A0;
    int R = A.rows, C = A.cols;
    SmithDecomposition S;
    S.U = identity(R);
    S.V = identity(C);
    int slots = std::min(R, C);

    for (int t = 0; t < slots; ++t) {
        for (;;) {
            // Least-absolute-value pivot in the active submatrix.
            int pr = -1, pc = -1;
            BigInt best;
            for (int r = t; r < R; ++r)
                for (int c = t; c < C; ++c) {
                    const BigInt& x = A.at(r, c);
                    if (x == 0) continue;
                    BigInt ax = abs(x);
                    if (pr < 0 || ax < best) { best = ax; pr = r; pc = c; }
                }
            if (pr < 0) break;  // submatrix is zero
            row_swap(A, t, pr); row_swap(S.U, t, pr);
            col_swap(A, t, pc); col_swap(S.V, t, pc);
            if (A.at(t, t) < 0) { row_negate(A, t); row_negate(S.U, t); }

            bool clean = true;
            for (int r = t + 1; r < R; ++r) {
                if (A.at(r, t) == 0) continue;
                BigInt q = A.at(r, t) / A.at(t, t);  // truncation keeps |rem| < pivot
                row_addmul(A, r, t, -q); row_addmul(S.U, r, t, -q);
                if (A.at(r, t) != 0) clean = false;
            }
            for (int c = t + 1; c < C; ++c) {
                if (A.at(t, c) == 0) continue;
                BigInt q = A.at(t, c) / A.at(t, t);
                col_addmul(A, c, t, -q); col_addmul(S.V, c, t, -q);
                if (A.at(t, c) != 0) clean = false;
            }
            if (!clean) continue;  // residues became new, smaller pivot candidates

            // Pivot divides every remaining entry, or gets another pass after
            // mixing in a violating row.
            bool divides = true;
            for (int r = t + 1; r < R && divides; ++r)
                for (int c = t + 1; c < C; ++c)
                    if (A.at(r, c) % A.at(t, t) != 0) {
                        row_addmul(A, t, r, 1); row_addmul(S.U, t, r, 1);
                        divides = false;
                        break;
                    }
            if (divides) break;
        }
    }

    for (int t = 0; t < slots; ++t) S.diag.push_back(A.at(t, t));

    // Exact reconstruction check: U·A0·V must reproduce the diagonal matrix.
    for (int i = 0; i < R; ++i)
        for (int j = 0; j < C; ++j) {
            BigInt s = 0;
            for (int k = 0; k < R; ++k) {
                if (S.U.at(i, k) == 0) continue;
                BigInt t2 = 0;
                for (int l = 0; l < C; ++l)
                    if (A0.at(k, l) != 0) t2 += A0.at(k, l) * S.V.at(l, j);
                s += S.U.at(i, k) * t2;
            }
            BigInt want = (i == j && i < slots) ? S.diag[i] : 0;
            require(s == want, "smith reconstruction U*A*V != D");
        }
    for (size_t i = 0; i + 1 < S.diag.size(); ++i) {
        if (S.diag[i + 1] != 0)
            require(S.diag[i] != 0 && S.diag[i + 1] % S.diag[i] == 0, "smith diagonal not a divisor chain");
    }
    return S;
}

std::vector<BigInt> invariant_factors(const IntMat& A) {
    auto S = smith_normal_form(A);
    std::vector<BigInt> out;
    for (const auto& d : S.diag)
        if (d > 1) out.push_back(d);
    return out;
}

}  // namespace fuscat
