#pragma once

// Exact linear algebra over the residue rings Z/2^m (m <= 31).
//
// Z/2^m is a chain ring, so every matrix has a canonical Howell normal form.
// The Howell form (unlike a plain echelon form) spans: every vector of the
// row span whose first j coordinates vanish is a combination of Howell rows
// whose first j coordinates vanish.  That property is what makes greedy
// reduction a complete membership test and makes kernels read off exactly.

#include <cstdint>
#include <optional>
#include <vector>

#include "fuscat/errors.hpp"

namespace fuscat::zmod {

using Val = std::uint32_t;

constexpr int kMaxModExp = 31;

struct Mat {
    int rows = 0, cols = 0;
    std::vector<Val> a;  // row-major

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0) {}

    Val& at(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
    Val at(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }
};

// 2-adic valuation of a nonzero value.
int val2(std::uint64_t x);

// Inverse of an odd unit modulo 2^mexp.
Val inv_odd(Val u, int mexp);

// Canonical Howell normal form of the row span of `rows` in (Z/2^mexp)^cols.
// Rows are sorted by pivot column; each pivot entry is exactly a power of two
// 2^v, entries above a pivot are reduced mod 2^v, entries left of a pivot are
// zero.
struct Howell {
    int mexp = 0;
    int cols = 0;
    std::vector<std::vector<Val>> rows;
    std::vector<int> pivot_col;   // per row
    std::vector<int> pivot_vexp;  // valuation of the pivot entry
};

Howell howell_form(std::vector<std::vector<Val>> rows, int cols, int mexp);

// Solver / kernel for A·x ≡ b (mod 2^mexp), where the columns of A generate
// the image.  Internally: Howell form of [A^T | I], so one normal form serves
// both queries.  Solutions are always re-verified by substitution.
class LinSolver {
public:
    LinSolver() = default;
    LinSolver(const Mat& A, int mexp);

    // Some x with A·x ≡ b, or nullopt when none exists (exact test).
    std::optional<std::vector<Val>> solve(const std::vector<Val>& b) const;

    // Canonical generating set of {x : A·x ≡ 0}; each generator has length
    // A.cols.  Complete by the Howell span property.
    const std::vector<std::vector<Val>>& kernel() const { return kernel_; }

    int mexp() const { return mexp_; }

private:
    int mexp_ = 0;
    int m_ = 0, n_ = 0;  // A is m x n
    Mat A_;
    Howell H_;
    std::vector<std::vector<Val>> kernel_;
};

std::vector<std::vector<Val>> kernel_mod(const Mat& A, int mexp);
std::optional<std::vector<Val>> solve_mod(const Mat& A, const std::vector<Val>& b, int mexp);

// Diagonalization U·A·V = D over Z/2^mexp with invertible U, V (a local Smith
// normal form; Z/2^m is local, so the ascending diagonal is canonical).
// vexp[i] is the valuation of the i-th diagonal entry; a zero diagonal entry
// is reported as vexp[i] == mexp.  V collects the column operations; Uinv
// collects the *inverses* of the row operations, so that the columns of Uinv
// are the transformed basis of the row-index space: A = Uinv · D · V^{-1}.
struct Diag {
    std::vector<int> vexp;  // min(rows, cols) slots, ascending
    Mat V, Uinv;
    bool have_V = false, have_Uinv = false;
};

Diag diag_mod2k(Mat A, int mexp, bool want_V, bool want_Uinv);

// The finite abelian group (⟨zgens⟩ + ⟨bgens⟩) / ⟨bgens⟩ inside (Z/2^mexp)^n,
// presented by invariant factors with explicit basis vectors and an exact
// coordinate solver.  All arithmetic stays in the finite ambient group, so
// membership and coordinates are exact, not approximations.
class AbelianQuotient {
public:
    const std::vector<int>& factors() const { return factors_; }  // ascending, > 1
    const std::vector<std::vector<Val>>& basis() const { return basis_; }
    int mexp() const { return mexp_; }

    // Coordinates (c_1 mod d_1, ...) with v ≡ Σ c_i·basis_i modulo ⟨bgens⟩.
    // Throws NotInGroup when v does not lie in ⟨zgens⟩ + ⟨bgens⟩.
    std::vector<std::int64_t> coords(const std::vector<Val>& v) const;

    bool member(const std::vector<Val>& v) const;

    friend AbelianQuotient abelian_quotient(int n,
                                            const std::vector<std::vector<Val>>& zgens,
                                            const std::vector<std::vector<Val>>& bgens,
                                            int mexp, int max_factor_exp);
    friend AbelianQuotient abelian_quotient_from_parts(int n,
                                                       const std::vector<int>& factors,
                                                       const std::vector<std::vector<Val>>& basis,
                                                       const std::vector<std::vector<Val>>& bgens,
                                                       int mexp, int max_factor_exp);

private:
    int mexp_ = 0;
    int n_ = 0;
    std::vector<int> factors_;
    std::vector<std::vector<Val>> basis_;
    LinSolver solver_;  // over [basis | bgens]
};

// max_factor_exp bounds the exponent of the quotient (for group cohomology of
// a group of order 2^j with coefficient exponent 2^t: min(j,t) would do; we
// pass the known bound and treat any excess as an internal error).
AbelianQuotient abelian_quotient(int n,
                                 const std::vector<std::vector<Val>>& zgens,
                                 const std::vector<std::vector<Val>>& bgens,
                                 int mexp, int max_factor_exp);

// Rebuild a quotient from previously computed parts (the cache path).  The
// claimed factors are not trusted: the relation lattice of the basis classes
// modulo ⟨bgens⟩ is recomputed and must reproduce them exactly (orders and
// independence).  Throws InternalError on any inconsistency.
AbelianQuotient abelian_quotient_from_parts(int n,
                                            const std::vector<int>& factors,
                                            const std::vector<std::vector<Val>>& basis,
                                            const std::vector<std::vector<Val>>& bgens,
                                            int mexp, int max_factor_exp);

}  // namespace fuscat::zmod
