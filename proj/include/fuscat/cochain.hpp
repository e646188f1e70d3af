#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "fuscat/group.hpp"
#include "fuscat/module.hpp"
#include "fuscat/zmod.hpp"

namespace fuscat {

// Index space for the normalized bar complex: n-tuples of NON-identity
// elements of a group of order q.  Tuples with an identity entry are not
// stored (normalized cochains vanish there).  Index is big-endian:
// idx = Σ (g_i - 1)·(q-1)^(n-1-i).  Degree 0 has exactly one empty tuple.
struct TupleSpace {
    int q = 1;
    int deg = 0;

    std::int64_t size() const;
    std::int64_t index(const int* t) const;
    void tuple(std::int64_t idx, int* out) const;
};

// Q/Z-valued cochain with denominator 2^kexp, stored as numerators; the
// multiplicative torus C* corresponds via exp(2πi·).  Group action trivial.
struct TorusCochain {
    int q = 1, deg = 0, kexp = 0;
    std::vector<zmod::Val> v;  // size (q-1)^deg

    zmod::Val eval(const int* args) const;  // 0 on identity arguments
    zmod::Val eval(const std::vector<int>& args) const;
};

TorusCochain zero_torus_cochain(int q, int deg, int kexp);
TorusCochain add(const TorusCochain& f, const TorusCochain& g);
TorusCochain sub(const TorusCochain& f, const TorusCochain& g);
TorusCochain scale(std::int64_t c, const TorusCochain& f);
bool is_zero(const TorusCochain& f);
TorusCochain coboundary(const FiniteGroup& G, const TorusCochain& f);
bool is_cocycle(const FiniteGroup& G, const TorusCochain& f);

// (φ*f)(g_1,...,g_n) = f(images[g_1],...,images[g_n]) for images mapping a
// group of order source_q into f's group.  Covers pullback along
// isomorphisms, inflation along projections and restriction to subgroups.
TorusCochain pullback(const TorusCochain& f, const std::vector<int>& images, int source_q);

// Integer-valued normalized cochain, trivial action.
struct IntCochain {
    int q = 1, deg = 0;
    std::vector<std::int64_t> v;

    std::int64_t eval(const int* args) const;
};
IntCochain coboundary(const FiniteGroup& G, const IntCochain& f);
bool is_cocycle(const FiniteGroup& G, const IntCochain& f);

// Module-valued normalized cochain on A.K; value at tuple t occupies
// v[t*rank .. t*rank+rank), coordinate j reduced mod d_j.
struct ModuleCochain {
    FiniteModule A;
    int deg = 0;
    std::vector<int> v;

    std::vector<int> eval(const int* args) const;
    std::vector<int> eval(const std::vector<int>& args) const;
    void set(const int* args, const std::vector<int>& value);
};

ModuleCochain zero_module_cochain(const FiniteModule& A, int deg);
bool is_zero(const ModuleCochain& F);
// Bar differential with the module action on the leading term.
ModuleCochain coboundary(const ModuleCochain& F);
bool is_cocycle(const ModuleCochain& F);

// Matrix of the coboundary C^n -> C^(n+1) with trivial integer
// coefficients; entries lie in [-(n+2), n+2].  Memoized per (table hash,
// degree); safe to call concurrently.
struct BarMatrix {
    std::int64_t rows = 0, cols = 0;  // (q-1)^(n+1) by (q-1)^n
    std::shared_ptr<const std::vector<std::int8_t>> a;

    std::int8_t at(std::int64_t r, std::int64_t c) const { return (*a)[r * cols + c]; }
};
BarMatrix bar_matrix(const FiniteGroup& G, int n);
zmod::Mat bar_matrix_mod(const FiniteGroup& G, int n, int mexp);

// Coboundary matrix for module coefficients in embedded coordinates:
// coordinate j of the module is identified with the subgroup
// (2^mexp/d_j)·Z/2^mexp, and the leading bar term uses the rescaled action
// entries M(g)_{ij}·d_j/d_i, integral by the module's well-definedness
// condition and independent of mexp.  On embedded vectors the matrix agrees
// with the true coboundary.  Row/column index = tuple_index·rank + coord.
// Requires 2^mexp to be a multiple of the module exponent.
zmod::Mat module_bar_matrix_embedded(const FiniteModule& A, int n, int mexp);

}  // namespace fuscat
