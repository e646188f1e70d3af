#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fuscat/cohomology.hpp"
#include "fuscat/doubles.hpp"
#include "fuscat/morita.hpp"
#include "fuscat/orbits.hpp"

namespace fuscat {

inline constexpr const char* kToolVersion = "fuscat 1.0.0";
// Seed for the optional post-build spot re-validation; fixed so that runs
// with identical configuration are byte-identical.
inline constexpr unsigned kVerifySeed = 20260817;

struct EngineConfig {
    int kexp = 12;          // torus denominator exponent 2^kexp
    std::string cache_dir;  // empty disables the on-disk cohomology cache
    int threads = 1;        // parallel width for the per-group stage
    bool verify = false;    // extra redundant self-checks everywhere
};

// One Ω(H; A) row of the report: a proper nontrivial normal abelian
// subgroup together with the subgroup of H³(H, C*) it realizes.
struct OmegaRow {
    std::string group;
    std::vector<int> subgroup;               // sorted element indices
    std::vector<std::vector<int>> classes;   // sorted coordinate vectors
    std::string note;                        // nonempty only where a published
                                             // value had to be corrected
};

// Memoizes the classification pipeline at one fixed configuration.  All
// stages are deterministic; with threads > 1 the five per-group orbit
// tables are built concurrently (they share only the process-wide bar
// matrix memo, which is mutex-guarded, and the atomic-rename disk cache).
class Engine {
public:
    explicit Engine(EngineConfig cfg = {});

    const EngineConfig& config() const { return cfg_; }
    CohomOptions cohom_options() const;

    const EquivalenceCensus& census();
    const std::vector<MoritaEdge>& edges();
    const MoritaPartition& partition();
    const DoubleCensus& doubles();
    const std::vector<OmegaRow>& omega_table();

    // H^degree(group) handle; integral or torus coefficients.
    const CohomologyGroup& cohomology(const std::string& group, int degree, bool integral);

    OmegaSubgroup omega(const std::string& group, const std::vector<int>& elems);

    // With cfg.verify set, census()/edges()/partition() re-validate a
    // seeded sample of edge witnesses from scratch after the build.
    void verify_edges_sample(int count);

private:
    EngineConfig cfg_;
    std::optional<EquivalenceCensus> census_;
    std::optional<std::vector<MoritaEdge>> edges_;
    std::optional<MoritaPartition> partition_;
    std::optional<DoubleCensus> doubles_;
    std::optional<std::vector<OmegaRow>> omega_;
    std::map<std::string, std::unique_ptr<CohomologyGroup>> cohom_;
};

// The full classification report.  The JSON document is the single source
// of truth; the markdown and CSV renderings are derived from it.
nlohmann::ordered_json report_json(Engine& engine);
std::string report_markdown(const nlohmann::ordered_json& report);
std::string report_csv(const nlohmann::ordered_json& report);

// Cross-consistency of a (re-parsed) report: totals match across sections,
// class ids partition, counts agree.  Throws InternalError on any mismatch.
void check_report_consistency(const nlohmann::json& report);

}  // namespace fuscat
