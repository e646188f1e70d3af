#pragma once

// Integer Smith normal form with arbitrary-precision entries.  Used for the
// small matrices of the explicit periodic resolution cross-check and as an
// oracle in tests; the big bar-resolution matrices never come through here.

#include <boost/multiprecision/cpp_int.hpp>
#include <vector>

#include "fuscat/errors.hpp"

namespace fuscat {

using BigInt = boost::multiprecision::cpp_int;

struct IntMat {
    int rows = 0, cols = 0;
    std::vector<BigInt> a;  // row-major

    IntMat() = default;
    IntMat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0) {}

    BigInt& at(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
    const BigInt& at(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }
};

struct SmithDecomposition {
    std::vector<BigInt> diag;  // d_1 | d_2 | ..., nonnegative; zeros last
    IntMat U, V;               // unimodular: U·A·V = D (verified on construction)
};

// Deterministic pivot rule: least absolute value, ties by lowest (row, col).
SmithDecomposition smith_normal_form(const IntMat& A);

// The nontrivial finite invariant factors (entries > 1) of coker(A).
std::vector<BigInt> invariant_factors(const IntMat& A);

}  // namespace fuscat
