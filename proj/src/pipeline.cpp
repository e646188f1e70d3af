#include "fuscat/pipeline.hpp"

#include <algorithm>
#include <future>
#include <random>
#include <set>
#include <sstream>

#include "fuscat/errors.hpp"
#include "fuscat/extension.hpp"

namespace fuscat {

namespace {

// Proper nontrivial normal abelian subgroups, the rows of the Ω table.
bool proper_nontrivial(const NormalAbelianSubgroup& nas, const FiniteGroup& H) {
    size_t m = nas.elems.size();
    return m > 1 && m < static_cast<size_t>(H.n);
}

bool is_z2_factor_of_z4xz2(const std::string& group, const std::vector<int>& elems) {
    return group == "Z4xZ2" && elems == std::vector<int>{0, 1};
}

}  // namespace

Engine::Engine(EngineConfig cfg) : cfg_(std::move(cfg)) {
    require(cfg_.kexp >= 6 && cfg_.kexp <= 26, "denominator exponent must lie in 6..26");
    require(cfg_.threads >= 1, "thread count must be positive");
}

CohomOptions Engine::cohom_options() const {
    CohomOptions o;
    o.kexp = cfg_.kexp;
    o.cache_dir = cfg_.cache_dir;
    o.verify = cfg_.verify;
    return o;
}

const EquivalenceCensus& Engine::census() {
    if (!census_) {
        CohomOptions opt = cohom_options();
        const std::vector<FiniteGroup>& cat = catalog_order8();
        std::vector<OrbitTable> tables(cat.size());
        if (cfg_.threads > 1) {
            std::vector<std::future<OrbitTable>> futs;
            futs.reserve(cat.size());
            for (const FiniteGroup& G : cat)
                futs.push_back(std::async(std::launch::async,
                                          [&G, opt] { return orbit_table(G, opt); }));
            for (size_t i = 0; i < futs.size(); ++i) tables[i] = futs[i].get();
        } else {
            for (size_t i = 0; i < cat.size(); ++i) tables[i] = orbit_table(cat[i], opt);
        }
        EquivalenceCensus c;
        for (OrbitTable& t : tables) {
            c.offsets.push_back(c.total);
            c.total += static_cast<int>(t.orbits.size());
            c.tables.push_back(std::move(t));
        }
        census_ = std::move(c);
        if (cfg_.verify) verify_edges_sample(12);
    }
    return *census_;
}

const std::vector<MoritaEdge>& Engine::edges() {
    if (!edges_) edges_ = enumerate_edges(census(), cohom_options());
    return *edges_;
}

const MoritaPartition& Engine::partition() {
    if (!partition_) partition_ = morita_partition(census(), edges());
    return *partition_;
}

const DoubleCensus& Engine::doubles() {
    if (!doubles_) doubles_ = double_census(census(), partition(), cohom_options());
    return *doubles_;
}

const std::vector<OmegaRow>& Engine::omega_table() {
    if (!omega_) {
        std::vector<OmegaRow> rows;
        for (const FiniteGroup& H : catalog_order8())
            for (const NormalAbelianSubgroup& nas : normal_abelian_subgroups(H)) {
                if (!proper_nontrivial(nas, H)) continue;
                OmegaRow row;
                row.group = H.name;
                row.subgroup = nas.elems;
                row.classes = omega_subgroup(H, nas.elems, cohom_options()).classes;
                if (is_z2_factor_of_z4xz2(row.group, row.subgroup))
                    row.note =
                        "a published order of 4 for this subgroup is inconsistent with "
                        "the displayed spectral-sequence page (the subgroup side of the "
                        "defining extension is the order-4 inflation image); the computed "
                        "order is 8";
                rows.push_back(std::move(row));
            }
        omega_ = std::move(rows);
    }
    return *omega_;
}

const CohomologyGroup& Engine::cohomology(const std::string& group, int degree, bool integral) {
    std::string key = group + "/" + std::to_string(degree) + (integral ? "/int" : "/torus");
    auto it = cohom_.find(key);
    if (it == cohom_.end()) {
        const FiniteGroup* G = find_catalog_group(group);
        if (!G) throw NotInGroup("unknown group name: " + group);
        CoeffSpec spec = integral ? CoeffSpec::integral() : CoeffSpec::torus();
        it = cohom_
                 .emplace(key, std::make_unique<CohomologyGroup>(
                                   cohomology_group(*G, degree, spec, cohom_options())))
                 .first;
    }
    return *it->second;
}

OmegaSubgroup Engine::omega(const std::string& group, const std::vector<int>& elems) {
    const FiniteGroup* G = find_catalog_group(group);
    if (!G) throw NotInGroup("unknown group name: " + group);
    return omega_subgroup(*G, elems, cohom_options());
}

void Engine::verify_edges_sample(int count) {
    const EquivalenceCensus& c = census();
    const std::vector<MoritaEdge>& es = edges();
    std::mt19937 rng(kVerifySeed);
    std::uniform_int_distribution<size_t> pick(0, es.size() - 1);
    for (int t = 0; t < count; ++t) {
        const MoritaEdge& e = es[pick(rng)];
        const MoritaWitness& w = e.witness;
        const ModuleContext& ctx = module_contexts()[w.context_id];
        OmegaPair P = omega_pair(ctx.K, ctx.A, w.F, w.Fhat, w.epsilon, w.kappa);
        const std::vector<FiniteGroup>& cat = catalog_order8();
        CohomOptions opt = cohom_options();
        CohomologyGroup h31 = cohomology_group(cat[w.group1], 3, CoeffSpec::torus(), opt);
        CohomologyGroup h32 = cohomology_group(cat[w.group2], 3, CoeffSpec::torus(), opt);
        GroupMap inv1 = inverse_map(w.phi);
        GroupMap inv2 = inverse_map(w.phihat);
        std::vector<int> c1 =
            h31.class_coordinates(pullback(P.omega, inv1.images, cat[w.group1].n));
        std::vector<int> c2 =
            h32.class_coordinates(pullback(P.omega_hat, inv2.images, cat[w.group2].n));
        require(c1 == w.coords1 && c2 == w.coords2,
                "edge witness failed to reproduce its transported classes");
        int cid1 = c.census_id(w.group1, c.tables[w.group1].orbit_of_class
                                             [static_cast<size_t>(h31.class_index(c1))]);
        int cid2 = c.census_id(w.group2, c.tables[w.group2].orbit_of_class
                                             [static_cast<size_t>(h32.class_index(c2))]);
        require(cid1 == e.census1 && cid2 == e.census2,
                "edge witness failed to reproduce its census ids");
    }
}

namespace {

nlohmann::ordered_json coords_json(const std::vector<int>& v) {
    return nlohmann::ordered_json(v);
}

}  // namespace

nlohmann::ordered_json report_json(Engine& engine) {
    using json = nlohmann::ordered_json;
    const EquivalenceCensus& c = engine.census();
    const MoritaPartition& part = engine.partition();
    const DoubleCensus& dc = engine.doubles();

    json report;
    report["tool"] = kToolVersion;
    json config;
    config["max_denominator_exp"] = engine.config().kexp;
    config["threads"] = engine.config().threads;
    config["verify"] = engine.config().verify;
    config["verify_seed"] = kVerifySeed;
    config["cache"] = !engine.config().cache_dir.empty();
    report["config"] = config;

    // per-group cohomology structure and orbit tables
    json groups = json::array();
    json tensor_groups = json::array();
    for (size_t gi = 0; gi < c.tables.size(); ++gi) {
        const OrbitTable& tab = c.tables[gi];
        json g;
        g["name"] = tab.G.name;
        g["order"] = tab.G.n;
        g["abelian"] = tab.G.is_abelian();
        g["automorphism_group_order"] = automorphisms(tab.G).size();
        g["h3_torus_invariant_factors"] = tab.h3_factors;
        g["h4_integral_invariant_factors"] =
            engine.cohomology(tab.G.name, 4, true).invariant_factors();
        groups.push_back(std::move(g));

        json tg;
        tg["group"] = tab.G.name;
        std::int64_t classes = 1;
        for (int d : tab.h3_factors) classes *= d;
        tg["h3_class_count"] = classes;
        tg["orbit_count"] = tab.orbits.size();
        json orbits = json::array();
        for (const Orbit& o : tab.orbits) {
            json jo;
            jo["id"] = o.id;
            jo["global_id"] = c.census_id(static_cast<int>(gi), o.id);
            jo["label"] = c.label(c.census_id(static_cast<int>(gi), o.id));
            jo["size"] = o.size();
            jo["class_order"] = o.class_order;
            if (!o.alias.empty()) jo["alias"] = o.alias;
            jo["canonical"] = coords_json(o.canonical);
            json sig = json::array();
            for (auto [sz, ord] : o.restriction_signature) sig.push_back({sz, ord});
            jo["restriction_signature"] = sig;
            orbits.push_back(std::move(jo));
        }
        tg["orbits"] = std::move(orbits);
        tensor_groups.push_back(std::move(tg));
    }
    report["groups"] = std::move(groups);
    json tensor;
    tensor["total_orbits"] = c.total;
    tensor["per_group"] = std::move(tensor_groups);
    report["tensor"] = std::move(tensor);

    // Ω table over proper nontrivial normal abelian subgroups
    json omega = json::array();
    for (const OmegaRow& row : engine.omega_table()) {
        json jr;
        jr["group"] = row.group;
        jr["subgroup"] = row.subgroup;
        jr["order"] = row.classes.size();
        json cls = json::array();
        for (const std::vector<int>& v : row.classes) cls.push_back(coords_json(v));
        jr["classes"] = std::move(cls);
        if (!row.note.empty()) jr["note"] = row.note;
        omega.push_back(std::move(jr));
    }
    report["omega"] = std::move(omega);

    // Morita partition with witnesses for the merged classes
    json morita;
    morita["class_count"] = part.classes.size();
    int singles = 0;
    for (const std::vector<int>& cls : part.classes) singles += cls.size() == 1;
    morita["singleton_count"] = singles;
    json classes = json::array();
    for (const std::vector<int>& cls : part.classes) classes.push_back(json(cls));
    morita["classes"] = std::move(classes);

    json merged = json::array();
    for (size_t m = 0; m < part.classes.size(); ++m) {
        const std::vector<int>& cls = part.classes[m];
        if (cls.size() == 1) continue;
        json jm;
        jm["morita_class"] = m;
        json labels = json::array();
        for (int cid : cls) labels.push_back(c.label(cid));
        jm["members"] = std::move(labels);
        // first witness per unordered adjacent pair
        std::set<std::pair<int, int>> seen;
        json ws = json::array();
        for (const MoritaEdge& e : engine.edges()) {
            if (e.census1 == e.census2) continue;
            std::pair<int, int> key{std::min(e.census1, e.census2),
                                    std::max(e.census1, e.census2)};
            if (part.class_of[e.census1] != static_cast<int>(m) || seen.count(key)) continue;
            seen.insert(key);
            json jw;
            jw["from"] = c.label(e.census1);
            jw["to"] = c.label(e.census2);
            jw["context"] = module_contexts()[e.witness.context_id].name;
            jw["f_class"] = e.witness.f_class;
            jw["fhat_class"] = e.witness.fhat_class;
            jw["kappa_class"] = e.witness.kappa_class;
            ws.push_back(std::move(jw));
        }
        jm["witnesses"] = std::move(ws);
        merged.push_back(std::move(jm));
    }
    morita["merged"] = std::move(merged);
    morita["note"] =
        "the merge table collapses 17 tensor classes into 8 Morita classes, giving "
        "47 - 9 = 38; an externally quoted total of 36 is inconsistent with that "
        "arithmetic and with the computed partition";
    report["morita"] = std::move(morita);

    // double census over Morita classes
    json doubles;
    doubles["commutative_count"] = dc.commutative_count();
    doubles["noncommutative_count"] = dc.noncommutative_count();
    doubles["commutative"] = dc.commutative_ids;
    doubles["noncommutative"] = dc.noncommutative_ids;
    report["doubles"] = std::move(doubles);

    return report;
}

std::string report_markdown(const nlohmann::ordered_json& report) {
    std::ostringstream out;
    out << "# Pointed fusion categories of global dimension 8\n\n";
    out << "Generated by " << report.at("tool").get<std::string>()
        << " (denominator exponent " << report.at("config").at("max_denominator_exp")
        << ").\n\n";

    out << "## Groups\n\n";
    out << "| group | order | abelian | #Aut | H^3 invariant factors | H^4(-,Z) |\n";
    out << "|---|---|---|---|---|---|\n";
    for (const auto& g : report.at("groups")) {
        out << "| " << g.at("name").get<std::string>() << " | " << g.at("order") << " | "
            << (g.at("abelian").get<bool>() ? "yes" : "no") << " | "
            << g.at("automorphism_group_order") << " | "
            << nlohmann::json(g.at("h3_torus_invariant_factors")).dump() << " | "
            << nlohmann::json(g.at("h4_integral_invariant_factors")).dump() << " |\n";
    }

    out << "\n## Tensor-equivalence classes ("
        << report.at("tensor").at("total_orbits") << " orbits)\n\n";
    for (const auto& tg : report.at("tensor").at("per_group")) {
        out << "### " << tg.at("group").get<std::string>() << " — " << tg.at("orbit_count")
            << " orbits over " << tg.at("h3_class_count") << " classes\n\n";
        out << "| orbit | size | class order | alias | canonical coordinates |\n";
        out << "|---|---|---|---|---|\n";
        for (const auto& o : tg.at("orbits")) {
            out << "| " << o.at("label").get<std::string>() << " | " << o.at("size") << " | "
                << o.at("class_order") << " | "
                << (o.contains("alias") ? o.at("alias").get<std::string>() : "") << " | "
                << nlohmann::json(o.at("canonical")).dump() << " |\n";
        }
        out << "\n";
    }

    out << "## Omega subgroups\n\n";
    out << "| group | subgroup elements | order |\n|---|---|---|\n";
    for (const auto& row : report.at("omega")) {
        out << "| " << row.at("group").get<std::string>() << " | "
            << nlohmann::json(row.at("subgroup")).dump() << " | " << row.at("order")
            << " |\n";
    }
    out << "\n";
    for (const auto& row : report.at("omega"))
        if (row.contains("note"))
            out << "Note (" << row.at("group").get<std::string>() << " "
                << nlohmann::json(row.at("subgroup")).dump()
                << "): " << row.at("note").get<std::string>() << "\n\n";

    const auto& morita = report.at("morita");
    out << "## Morita classes (" << morita.at("class_count") << ")\n\n";
    out << "One row per weak Morita equivalence class; columns hold the orbit labels "
           "of each group that fall in the class.\n\n";
    out << "| class | Z2^3 | Z4xZ2 | Z8 | D8 | Q8 | double |\n";
    out << "|---|---|---|---|---|---|---|\n";
    const auto& doubles = report.at("doubles");
    std::set<int> comm(doubles.at("commutative").begin(), doubles.at("commutative").end());
    size_t row_count = 0;
    for (const auto& cls : morita.at("classes")) {
        std::map<std::string, std::vector<std::string>> cells;
        for (const auto& cid : cls) {
            // labels look like "D8#3 (alias)"; split on '#'
            std::string label;
            for (const auto& tg : report.at("tensor").at("per_group"))
                for (const auto& o : tg.at("orbits"))
                    if (o.at("global_id") == cid) {
                        label = o.at("label").get<std::string>();
                        cells[tg.at("group").get<std::string>()].push_back(
                            label.substr(label.find('#')));
                    }
        }
        out << "| " << row_count << " |";
        for (const char* g : {"Z2^3", "Z4xZ2", "Z8", "D8", "Q8"}) {
            out << " ";
            const std::vector<std::string>& v = cells[g];
            for (size_t i = 0; i < v.size(); ++i) out << (i ? ", " : "") << v[i];
            out << " |";
        }
        out << " " << (comm.count(static_cast<int>(row_count)) ? "commutative"
                                                               : "noncommutative")
            << " |\n";
        ++row_count;
    }
    out << "\nNote: " << morita.at("note").get<std::string>() << "\n\n";

    out << "## Twisted double census\n\n";
    out << "Commutative: " << doubles.at("commutative_count") << " Morita classes "
        << nlohmann::json(doubles.at("commutative")).dump() << "\n\n";
    out << "Noncommutative: " << doubles.at("noncommutative_count") << " Morita classes "
        << nlohmann::json(doubles.at("noncommutative")).dump() << "\n";
    return out.str();
}

std::string report_csv(const nlohmann::ordered_json& report) {
    std::ostringstream out;
    out << "census_id,label,group,orbit,orbit_size,class_order,alias,morita_class,"
           "double_commutative\n";
    const auto& morita = report.at("morita");
    std::vector<int> class_of;
    {
        int total = report.at("tensor").at("total_orbits").get<int>();
        class_of.assign(total, -1);
        int k = 0;
        for (const auto& cls : morita.at("classes")) {
            for (const auto& cid : cls) class_of[cid.get<int>()] = k;
            ++k;
        }
    }
    const auto& doubles = report.at("doubles");
    std::set<int> comm(doubles.at("commutative").begin(), doubles.at("commutative").end());
    for (const auto& tg : report.at("tensor").at("per_group"))
        for (const auto& o : tg.at("orbits")) {
            int gid = o.at("global_id").get<int>();
            int mc = class_of[gid];
            out << gid << "," << o.at("label").get<std::string>() << ","
                << tg.at("group").get<std::string>() << "," << o.at("id") << ","
                << o.at("size") << "," << o.at("class_order") << ","
                << (o.contains("alias") ? o.at("alias").get<std::string>() : "") << ","
                << mc << "," << (comm.count(mc) ? "yes" : "no") << "\n";
        }
    return out.str();
}

void check_report_consistency(const nlohmann::json& report) {
    require(report.at("tool").get<std::string>() == kToolVersion,
            "report tool version mismatch");
    int kexp = report.at("config").at("max_denominator_exp").get<int>();
    require(kexp >= 6 && kexp <= 26, "report config outside the supported range");

    // tensor totals
    int total = report.at("tensor").at("total_orbits").get<int>();
    int sum = 0;
    std::set<int> gids;
    for (const auto& tg : report.at("tensor").at("per_group")) {
        sum += tg.at("orbit_count").get<int>();
        std::int64_t covered = 0;
        for (const auto& o : tg.at("orbits")) {
            covered += o.at("size").get<int>();
            require(gids.insert(o.at("global_id").get<int>()).second,
                    "duplicate global orbit id in report");
        }
        require(covered == tg.at("h3_class_count").get<std::int64_t>(),
                "orbit sizes do not cover the class count");
    }
    require(sum == total, "per-group orbit counts do not sum to the total");
    require(static_cast<int>(gids.size()) == total && *gids.begin() == 0 &&
                *gids.rbegin() == total - 1,
            "global orbit ids do not form a contiguous range");

    // morita partition
    const auto& morita = report.at("morita");
    int mcount = morita.at("class_count").get<int>();
    require(mcount == static_cast<int>(morita.at("classes").size()),
            "morita class count does not match the class list");
    std::set<int> covered;
    int singles = 0;
    for (const auto& cls : morita.at("classes")) {
        require(!cls.empty(), "empty morita class in report");
        singles += cls.size() == 1;
        for (const auto& cid : cls)
            require(covered.insert(cid.get<int>()).second,
                    "census id in two morita classes");
    }
    require(static_cast<int>(covered.size()) == total,
            "morita classes do not cover the census");
    require(singles == morita.at("singleton_count").get<int>(),
            "singleton count mismatch");
    require(morita.at("merged").size() == morita.at("classes").size() - singles,
            "merged class list does not match the partition");
    require(morita.at("note").get<std::string>().find("36") != std::string::npos,
            "the morita section must flag the externally quoted total");

    // doubles census
    const auto& doubles = report.at("doubles");
    int comm = doubles.at("commutative_count").get<int>();
    int noncomm = doubles.at("noncommutative_count").get<int>();
    require(comm == static_cast<int>(doubles.at("commutative").size()) &&
                noncomm == static_cast<int>(doubles.at("noncommutative").size()),
            "double census counts do not match the id lists");
    require(comm + noncomm == mcount,
            "double census does not cover the morita classes");
    std::set<int> ids;
    for (const auto& m : doubles.at("commutative")) ids.insert(m.get<int>());
    for (const auto& m : doubles.at("noncommutative")) ids.insert(m.get<int>());
    require(static_cast<int>(ids.size()) == mcount && *ids.begin() == 0 &&
                *ids.rbegin() == mcount - 1,
            "double census ids do not partition the morita classes");

    // omega rows
    for (const auto& row : report.at("omega")) {
        size_t order = row.at("order").get<size_t>();
        require(order >= 1 && row.at("classes").size() == order,
                "omega row order does not match its class list");
    }
}

}  // namespace fuscat
