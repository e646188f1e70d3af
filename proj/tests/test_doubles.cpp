#include "fuscat/doubles.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "fuscat/errors.hpp"

using namespace fuscat;

namespace {

std::string shared_cache_dir() {
    static std::string dir = [] {
        auto p = std::filesystem::temp_directory_path() /
                 ("fuscat-test-doubles-" + std::to_string(::getpid()));
        std::filesystem::create_directories(p);
        return p.string();
    }();
    return dir;
}

CohomOptions opts() {
    CohomOptions o;
    o.cache_dir = shared_cache_dir();
    return o;
}

const EquivalenceCensus& census() {
    static const EquivalenceCensus c = equivalence_census(opts());
    return c;
}

const MoritaPartition& partition() {
    static const MoritaPartition p = [] {
        std::vector<MoritaEdge> e = enumerate_edges(census(), opts());
        return morita_partition(census(), e);
    }();
    return p;
}

const DoubleCensus& doubles() {
    static const DoubleCensus d = double_census(census(), partition(), opts());
    return d;
}

TorusCochain random_mu(const FiniteGroup& G, int kexp, std::mt19937& rng) {
    TorusCochain mu = zero_torus_cochain(G.n, 2, kexp);
    std::uniform_int_distribution<zmod::Val> pick(0, (zmod::Val{1} << kexp) - 1);
    for (auto& x : mu.v) x = pick(rng);
    return mu;
}

}  // namespace

TEST_CASE("untwisted double: zero theta, associative, commutative iff abelian") {
    for (const FiniteGroup& H : catalog_order8()) {
        DoubleAlgebra D = build_double(H, zero_torus_cochain(H.n, 3, 12));
        for (zmod::Val t : D.theta) CHECK(t == 0);
        CHECK(is_commutative(D) == H.is_abelian());
    }
    // the two nonabelian doubles are noncommutative already untwisted
    CHECK_FALSE(is_commutative(build_double(*find_catalog_group("D8"),
                                            zero_torus_cochain(8, 3, 12))));
    CHECK_FALSE(is_commutative(build_double(*find_catalog_group("Q8"),
                                            zero_torus_cochain(8, 3, 12))));
}

TEST_CASE("build_double rejects non-cocycles and normalizes theta") {
    const FiniteGroup& H = *find_catalog_group("Z8");
    TorusCochain bad = zero_torus_cochain(H.n, 3, 12);
    bad.v[0] = 1;  // a generic cochain is not closed
    CHECK_THROWS_AS(build_double(H, bad), NotACocycle);

    // every cocycle of every group yields theta with theta_g(1,y) = theta_g(x,1) = 0
    std::mt19937 rng(20260817);
    for (const FiniteGroup& G : catalog_order8()) {
        CohomologyGroup h3 = cohomology_group(G, 3, CoeffSpec::torus(), opts());
        std::uniform_int_distribution<std::int64_t> pick(0, h3.num_classes() - 1);
        for (int trial = 0; trial < 3; ++trial) {
            TorusCochain eta = h3.torus_rep(h3.coords_of_class_index(pick(rng)));
            DoubleAlgebra D = build_double(G, eta);
            for (int g = 0; g < G.n; ++g)
                for (int x = 0; x < G.n; ++x) {
                    CHECK(D.theta_at(g, 0, x) == 0);
                    CHECK(D.theta_at(g, x, 0) == 0);
                }
        }
    }
}

TEST_CASE("commutativity verdict is a class invariant and an orbit invariant") {
    std::mt19937 rng(20260817);
    for (const char* name : {"Z8", "Z2^3"}) {
        const FiniteGroup& G = *find_catalog_group(name);
        CohomologyGroup h3 = cohomology_group(G, 3, CoeffSpec::torus(), opts());
        std::uniform_int_distribution<std::int64_t> pick(0, h3.num_classes() - 1);
        std::vector<GroupMap> auts = automorphisms(G);
        std::uniform_int_distribution<size_t> pick_aut(0, auts.size() - 1);
        for (int trial = 0; trial < 10; ++trial) {
            TorusCochain eta = h3.torus_rep(h3.coords_of_class_index(pick(rng)));
            bool verdict = is_commutative(build_double(G, eta));

            // cohomologous twist: same verdict
            TorusCochain shifted = add(eta, coboundary(G, random_mu(G, eta.kexp, rng)));
            CHECK(is_commutative(build_double(G, shifted)) == verdict);

            // pullback along an automorphism: same verdict
            const GroupMap& phi = auts[pick_aut(rng)];
            TorusCochain pulled = pullback(eta, phi.images, G.n);
            CHECK(is_commutative(build_double(G, pulled)) == verdict);
        }
    }
}

TEST_CASE("census counts: 18 commutative and 20 noncommutative Morita classes") {
    const DoubleCensus& d = doubles();
    CHECK(d.commutative_count() == 18);
    CHECK(d.noncommutative_count() == 20);
    CHECK(d.commutative_count() + d.noncommutative_count() ==
          static_cast<int>(partition().classes.size()));

    // id lists are ascending, disjoint and complete
    std::set<int> all;
    for (int m : d.commutative_ids) all.insert(m);
    for (int m : d.noncommutative_ids) all.insert(m);
    CHECK(all.size() == partition().classes.size());
    CHECK(std::is_sorted(d.commutative_ids.begin(), d.commutative_ids.end()));
    CHECK(std::is_sorted(d.noncommutative_ids.begin(), d.noncommutative_ids.end()));
    for (size_t m = 0; m < d.commutative_by_class.size(); ++m) {
        bool listed = std::binary_search(d.commutative_ids.begin(), d.commutative_ids.end(),
                                         static_cast<int>(m));
        CHECK(listed == d.commutative_by_class[m]);
    }
}

TEST_CASE("verdict per group: cyclic-type always commutative, nonabelian never") {
    const DoubleCensus& d = doubles();
    const EquivalenceCensus& c = census();
    const MoritaPartition& part = partition();

    // every tensor class inherits the verdict of its Morita class
    std::map<std::string, std::pair<int, int>> split;  // name -> (comm, noncomm)
    for (int cid = 0; cid < c.total; ++cid) {
        const std::string& name = c.tables[c.locate(cid).first].G.name;
        bool comm = d.commutative_by_class[part.class_of[cid]];
        (comm ? split[name].first : split[name].second) += 1;
    }
    CHECK(split["Z8"] == std::pair<int, int>(8, 0));
    CHECK(split["Z4xZ2"] == std::pair<int, int>(9, 0));
    CHECK(split["D8"] == std::pair<int, int>(0, 12));
    CHECK(split["Q8"] == std::pair<int, int>(0, 8));
    CHECK(split["Z2^3"] == std::pair<int, int>(5, 5));
}

TEST_CASE("elementary abelian split: commutative classes form an index-2 subgroup") {
    const FiniteGroup& G = *find_catalog_group("Z2^3");
    CohomologyGroup h3 = cohomology_group(G, 3, CoeffSpec::torus(), opts());
    REQUIRE(h3.num_classes() == 128);

    // the verdict is linear in eta (theta is), so the commutative classes
    // must be exactly the kernel of one functional: a subgroup of order 64
    std::set<std::vector<int>> comm;
    for (std::int64_t i = 0; i < h3.num_classes(); ++i) {
        std::vector<int> coords = h3.coords_of_class_index(i);
        if (is_commutative(build_double(G, h3.torus_rep(coords)))) comm.insert(coords);
    }
    CHECK(comm.size() == 64);
    CHECK(comm.count(std::vector<int>(h3.rank(), 0)) == 1);
    const std::vector<int>& dd = h3.invariant_factors();
    for (const std::vector<int>& a : comm)
        for (const std::vector<int>& b : comm) {
            std::vector<int> s(a.size());
            for (size_t i = 0; i < a.size(); ++i) s[i] = (a[i] + b[i]) % dd[i];
            CHECK(comm.count(s) == 1);
        }

    // orbit sizes on each side of the split: {1,7,7,21,28} twice
    const OrbitTable& tab = census().tables[0];
    REQUIRE(tab.G.name == "Z2^3");
    std::multiset<int> comm_sizes, noncomm_sizes;
    for (const Orbit& o : tab.orbits)
        (comm.count(o.canonical) ? comm_sizes : noncomm_sizes).insert(o.size());
    std::multiset<int> expect{1, 7, 7, 21, 28};
    CHECK(comm_sizes == expect);
    CHECK(noncomm_sizes == expect);
    // the trivial class is commutative, so the noncommutative singleton is
    // the unique nonzero fixed class of the automorphism action
    CHECK(comm.count(tab.orbits[0].canonical) == 1);
    CHECK(tab.orbits[0].alias == "0");
}
